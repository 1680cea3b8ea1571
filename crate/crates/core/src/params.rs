//! Model parameters shared by every layer.

use crate::error::{Error, Result};
use crate::ComplexEnergy;

fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite",
        })
    }
}

/// The four real couplings of the cross-stitch lattice.
///
/// `t` couples the two sites of a cell, `d` couples every site of a cell to
/// both sites of the neighbouring cells, `delta` is a real on-site imbalance
/// (`+delta/2` on the upper site, `-delta/2` on the lower) and `gamma` the
/// balanced gain/loss (`+i gamma/2` upper, `-i gamma/2` lower).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    t: f64,
    d: f64,
    delta: f64,
    gamma: f64,
}

impl LatticeParams {
    pub fn new(t: f64, d: f64, delta: f64, gamma: f64) -> Result<Self> {
        let d = finite("d", d)?;
        if d == 0.0 {
            return Err(Error::InvalidParameter {
                name: "d",
                reason: "inter-cell hopping must be nonzero",
            });
        }
        Ok(Self {
            t: finite("t", t)?,
            d,
            delta: finite("delta", delta)?,
            gamma: finite("gamma", gamma)?,
        })
    }

    /// `t = d = 1` with the given gain/loss and no real imbalance.
    pub fn pt_symmetric(gamma: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 0.0, gamma)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.t, self.d, self.delta, gamma)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.t, self.d, delta, self.gamma)
    }

    /// Upper-site energy `delta/2 + i gamma/2`.
    pub fn onsite_a(&self) -> ComplexEnergy {
        ComplexEnergy::new(self.delta / 2.0, self.gamma / 2.0)
    }

    /// Lower-site energy `-delta/2 - i gamma/2`.
    pub fn onsite_b(&self) -> ComplexEnergy {
        -self.onsite_a()
    }
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self {
            t: 1.0,
            d: 1.0,
            delta: 0.0,
            gamma: 0.0,
        }
    }
}

/// Semi-infinite leads with hopping `v0/2`, attached with strength `g` to
/// both sites of the end cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadParams {
    v0: f64,
    g: f64,
}

impl LeadParams {
    pub fn new(v0: f64, g: f64) -> Result<Self> {
        let v0 = finite("v0", v0)?;
        if v0 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "v0",
                reason: "lead hopping scale must be positive",
            });
        }
        Ok(Self { v0, g: finite("g", g)? })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

impl Default for LeadParams {
    fn default() -> Self {
        Self { v0: 10.0, g: 1.0 }
    }
}

/// An open chain of `n_cells` unit cells, optionally with a uniform loss
/// `-i overall_loss` on every lattice site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteLattice {
    n_cells: usize,
    params: LatticeParams,
    overall_loss: f64,
}

impl FiniteLattice {
    pub fn new(n_cells: usize, params: LatticeParams) -> Result<Self> {
        Self::with_loss(n_cells, params, 0.0)
    }

    pub fn with_loss(n_cells: usize, params: LatticeParams, overall_loss: f64) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidParameter {
                name: "n_cells",
                reason: "need at least one unit cell",
            });
        }
        let overall_loss = finite("overall_loss", overall_loss)?;
        if overall_loss < 0.0 {
            return Err(Error::InvalidParameter {
                name: "overall_loss",
                reason: "must be nonnegative",
            });
        }
        Ok(Self {
            n_cells,
            params,
            overall_loss,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn overall_loss(&self) -> f64 {
        self.overall_loss
    }

    /// Number of lattice sites, `2 n_cells`.
    pub fn dim(&self) -> usize {
        2 * self.n_cells
    }

    pub fn with_params(self, params: LatticeParams) -> Self {
        Self { params, ..self }
    }

    pub fn with_overall_loss(self, overall_loss: f64) -> Result<Self> {
        Self::with_loss(self.n_cells, self.params, overall_loss)
    }

    /// Upper-site energy including the uniform loss.
    pub fn onsite_a(&self) -> ComplexEnergy {
        self.params.onsite_a() - ComplexEnergy::new(0.0, self.overall_loss)
    }

    /// Lower-site energy including the uniform loss.
    pub fn onsite_b(&self) -> ComplexEnergy {
        self.params.onsite_b() - ComplexEnergy::new(0.0, self.overall_loss)
    }
}
