//! Two-lead transmission through the finite lattice.
//!
//! The lattice is attached to two semi-infinite chains with hopping `V0/2`.
//! Each end site of a lead couples with strength `-g` to both sites of the
//! adjacent unit cell. Writing the left lead as `e^{iq(j-1)} + r0 e^{-iq(j-1)}`
//! and the right lead as `t0 e^{iq(j-N)}` and eliminating the lead bulk
//! leaves a bordered block-tridiagonal system for `(r0, a_1, ..., a_N, t0)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{BandedLu, BandedMatrix};
use crate::params::{FiniteLattice, LeadParams};
use crate::ComplexEnergy;

/// `e^{+iq}` and `e^{-iq}` of a lead at one incident energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadPhase {
    pub forward: ComplexEnergy,
    pub backward: ComplexEnergy,
    /// Real energy inside the lead band, where `|e^{iq}| = 1`.
    pub propagating: bool,
}

impl LeadPhase {
    /// Lead wavenumber `q = -i ln e^{iq}`.
    pub fn q(&self) -> ComplexEnergy {
        -ComplexEnergy::i() * self.forward.ln()
    }
}

/// `e^{+-iq} = -E/V0 +- i sqrt(1 - (E/V0)^2)` with the principal root, so
/// that `Im e^{iq} >= 0` on the real lead band.
pub fn lead_phase(e: ComplexEnergy, lead: &LeadParams) -> LeadPhase {
    let z = e / lead.v0();
    let root = (ComplexEnergy::new(1.0, 0.0) - z * z).sqrt();
    let i_root = ComplexEnergy::i() * root;
    LeadPhase {
        forward: -z + i_root,
        backward: -z - i_root,
        propagating: e.im == 0.0 && z.re.abs() <= 1.0,
    }
}

/// How a complex incident energy enters the leads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Continuation {
    /// The leads propagate at `Re E`, the imaginary part acts on the lattice
    /// only. `T(E_r + i E_i)` is then the transmission of the lattice with a
    /// uniform on-site loss `E_i` probed at `E_r`.
    #[default]
    LeadGainLoss,
    /// The lead phase is the analytic continuation of [`lead_phase`] to the
    /// complex energy.
    Analytic,
}

impl Continuation {
    fn phase(self, e: ComplexEnergy, lead: &LeadParams) -> LeadPhase {
        match self {
            Continuation::LeadGainLoss => lead_phase(ComplexEnergy::new(e.re, 0.0), lead),
            Continuation::Analytic => lead_phase(e, lead),
        }
    }
}

/// Linear system `A x = b` with unknowns `(r0, a_1, b_1, ..., a_N, b_N, t0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSystem {
    pub matrix: BandedMatrix,
    pub rhs: Vec<ComplexEnergy>,
    pub phase: LeadPhase,
}

/// Sub- and super-diagonal count of the bordered system.
pub const SYSTEM_BANDWIDTH: usize = 3;

pub fn assemble_scattering_system(fl: &FiniteLattice, lead: &LeadParams, e: ComplexEnergy) -> ScatteringSystem {
    assemble_scattering_system_with(fl, lead, e, Continuation::default())
}

pub fn assemble_scattering_system_with(
    fl: &FiniteLattice,
    lead: &LeadParams,
    e: ComplexEnergy,
    mode: Continuation,
) -> ScatteringSystem {
    let n = fl.n_cells();
    let dim = 2 * n + 2;
    let last = dim - 1;
    let phase = mode.phase(e, lead);
    let p = fl.params();
    let half_v0 = ComplexEnergy::new(lead.v0() / 2.0, 0.0);
    let g = ComplexEnergy::new(lead.g(), 0.0);
    let hop_t = ComplexEnergy::new(-p.t(), 0.0);
    let hop_d = ComplexEnergy::new(-p.d(), 0.0);
    let mut a = BandedMatrix::zeros(dim, SYSTEM_BANDWIDTH, SYSTEM_BANDWIDTH);
    let mut rhs = alloc::vec![ComplexEnergy::new(0.0, 0.0); dim];

    a.set(0, 0, half_v0);
    a.set(0, 1, -g);
    a.set(0, 2, -g);
    rhs[0] = -half_v0;

    for cell in 0..n {
        let (ra, rb) = (2 * cell + 1, 2 * cell + 2);
        a.set(ra, ra, fl.onsite_a() - e);
        a.set(rb, rb, fl.onsite_b() - e);
        a.set(ra, rb, hop_t);
        a.set(rb, ra, hop_t);
        if cell + 1 < n {
            for r in [ra, rb] {
                for c in [ra + 2, rb + 2] {
                    a.set(r, c, hop_d);
                    a.set(c, r, hop_d);
                }
            }
        }
    }
    for r in [1, 2] {
        a.set(r, 0, -g * phase.forward);
        rhs[r] = g * phase.backward;
    }
    for r in [last - 2, last - 1] {
        a.set(r, last, -g * phase.forward);
    }

    a.set(last, last - 2, -g);
    a.set(last, last - 1, -g);
    a.set(last, last, half_v0);

    ScatteringSystem { matrix: a, rhs, phase }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    pub energy: ComplexEnergy,
    pub r0: ComplexEnergy,
    pub t0: ComplexEnergy,
    /// `(a_j, b_j)` for every cell.
    pub amplitudes: Vec<[ComplexEnergy; 2]>,
    pub transmission: f64,
    pub reflection: f64,
    pub phase: LeadPhase,
    /// `|b - A x|_inf / (|A|_inf |x|_inf + |b|_inf)` of the returned solution.
    pub residual: f64,
}

impl ScatteringSolution {
    pub fn q(&self) -> ComplexEnergy {
        self.phase.q()
    }

    pub fn flux_sum(&self) -> f64 {
        self.transmission + self.reflection
    }
}

/// Relative residual accepted without refinement.
pub const RESIDUAL_TOL: f64 = 1e-10;

fn inf_norm(v: &[ComplexEnergy]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn relative_residual(sys: &ScatteringSystem, norm_a: f64, x: &[ComplexEnergy]) -> (Vec<ComplexEnergy>, f64, usize) {
    let ax = sys.matrix.mul_vec(x);
    let r: Vec<ComplexEnergy> = sys.rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
    let (worst, big) = r
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let scale = norm_a * inf_norm(x) + inf_norm(&sys.rhs);
    (r, if scale > 0.0 { big / scale } else { big }, worst)
}

pub fn solve_scattering(fl: &FiniteLattice, lead: &LeadParams, e: ComplexEnergy) -> Result<ScatteringSolution> {
    solve_scattering_with(fl, lead, e, Continuation::default())
}

pub fn solve_scattering_with(
    fl: &FiniteLattice,
    lead: &LeadParams,
    e: ComplexEnergy,
    mode: Continuation,
) -> Result<ScatteringSolution> {
    if !(e.re.is_finite() && e.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "energy",
            reason: "must be finite",
        });
    }
    let sys = assemble_scattering_system_with(fl, lead, e, mode);
    let lu = BandedLu::factor_banded(&sys.matrix)?;
    let mut x = lu.solve(&sys.rhs)?;
    let norm_a = sys.matrix.norm_inf();
    let (r, mut residual, _) = relative_residual(&sys, norm_a, &x);
    if !(residual <= RESIDUAL_TOL) {
        let dx = lu.solve(&r)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        let worst;
        (_, residual, worst) = relative_residual(&sys, norm_a, &x);
        if !(residual <= RESIDUAL_TOL) {
            return Err(Error::ResidualTooLarge {
                index: worst,
                residual,
                tol: RESIDUAL_TOL,
            });
        }
    }
    let last = x.len() - 1;
    let (r0, t0) = (x[0], x[last]);
    let amplitudes = x[1..last].chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    Ok(ScatteringSolution {
        energy: e,
        r0,
        t0,
        amplitudes,
        transmission: t0.norm_sqr(),
        reflection: r0.norm_sqr(),
        phase: sys.phase,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probabilities {
    pub transmission: f64,
    pub reflection: f64,
}

/// One sweep sample; a failed solve is kept in place of the values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub energy: ComplexEnergy,
    pub outcome: Result<Probabilities>,
}

/// Solves one grid point of a sweep or map.
pub fn transmission_point(fl: &FiniteLattice, lead: &LeadParams, e: ComplexEnergy, mode: Continuation) -> SweepRow {
    SweepRow {
        energy: e,
        outcome: solve_scattering_with(fl, lead, e, mode).map(|s| Probabilities {
            transmission: s.transmission,
            reflection: s.reflection,
        }),
    }
}

fn nonempty<T>(grid: &[T], name: &'static str) -> Result<()> {
    if grid.is_empty() {
        Err(Error::InvalidParameter {
            name,
            reason: "must be nonempty",
        })
    } else {
        Ok(())
    }
}

pub fn transmission_sweep(fl: &FiniteLattice, lead: &LeadParams, energies: &[ComplexEnergy]) -> Result<Vec<SweepRow>> {
    nonempty(energies, "energy_grid")?;
    Ok(energies
        .iter()
        .map(|&e| transmission_point(fl, lead, e, Continuation::default()))
        .collect())
}

/// Transmission over real energies for the lattice's own overall loss.
pub fn gamma_shift_sweep(fl: &FiniteLattice, lead: &LeadParams, energies: &[f64]) -> Result<Vec<SweepRow>> {
    nonempty(energies, "energy_grid")?;
    Ok(energies
        .iter()
        .map(|&e| transmission_point(fl, lead, ComplexEnergy::new(e, 0.0), Continuation::default()))
        .collect())
}

/// `rows[i][j]` is the sample at `E = er[j] + i ei[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMap {
    pub er: Vec<f64>,
    pub ei: Vec<f64>,
    pub rows: Vec<Vec<SweepRow>>,
}

pub fn complex_energy_map(fl: &FiniteLattice, lead: &LeadParams, er: &[f64], ei: &[f64]) -> Result<ComplexMap> {
    complex_energy_map_with(fl, lead, er, ei, Continuation::default())
}

pub fn complex_energy_map_with(
    fl: &FiniteLattice,
    lead: &LeadParams,
    er: &[f64],
    ei: &[f64],
    mode: Continuation,
) -> Result<ComplexMap> {
    nonempty(er, "er_grid")?;
    nonempty(ei, "ei_grid")?;
    let rows = ei
        .iter()
        .map(|&y| {
            er.iter()
                .map(|&x| transmission_point(fl, lead, ComplexEnergy::new(x, y), mode))
                .collect()
        })
        .collect();
    Ok(ComplexMap {
        er: er.to_vec(),
        ei: ei.to_vec(),
        rows,
    })
}

/// Minimum height a local maximum needs to count as a peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeakCriterion {
    Absolute(f64),
    /// Fraction of the largest finite value in the series.
    Relative(f64),
}

impl Default for PeakCriterion {
    fn default() -> Self {
        PeakCriterion::Absolute(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub energy: f64,
    pub value: f64,
    /// Vertex of the parabola through the peak sample and its neighbours.
    pub vertex: f64,
}

fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> f64 {
    let (d0, d1) = (x[1] - x[0], x[2] - x[1]);
    let (s0, s1) = ((y[1] - y[0]) / d0, (y[2] - y[1]) / d1);
    let curvature = (s1 - s0) / (x[2] - x[0]);
    if curvature < 0.0 {
        // Vertex of the interpolant, kept inside the bracketing samples.
        let v = 0.5 * (x[0] + x[1]) - s0 / (2.0 * curvature);
        v.clamp(x[0], x[2])
    } else {
        x[1]
    }
}

/// Interior local maxima above the threshold. A flat top counts once, at
/// its lowest-energy sample. Non-finite values never form or bound a peak.
pub fn find_peaks(energies: &[f64], values: &[f64], criterion: PeakCriterion) -> Result<Vec<Peak>> {
    if energies.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: energies.len(),
            actual: values.len(),
        });
    }
    let threshold = match criterion {
        PeakCriterion::Absolute(t) => t,
        PeakCriterion::Relative(f) => {
            f * values
                .iter()
                .copied()
                .filter(|v| v.is_finite())
                .fold(f64::NEG_INFINITY, f64::max)
        }
    };
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let v = values[i];
        if !(v.is_finite() && v > threshold && v > values[i - 1]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && values[j + 1] == v {
            j += 1;
        }
        if j + 1 < n && values[j + 1] < v {
            let vertex = if j == i {
                parabola_vertex(
                    [energies[i - 1], energies[i], energies[i + 1]],
                    [values[i - 1], v, values[i + 1]],
                )
            } else {
                0.5 * (energies[i] + energies[j])
            };
            peaks.push(Peak {
                index: i,
                energy: energies[i],
                value: v,
                vertex,
            });
        }
        i = j + 1;
    }
    Ok(peaks)
}
