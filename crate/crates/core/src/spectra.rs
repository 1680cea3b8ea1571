//! Finite open chain: Hamiltonian assembly, its full non-Hermitian spectrum
//! and continuation of an eigenvalue pair in `gamma` through an EP.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, EigenOptions};
use crate::params::FiniteLattice;
use crate::ComplexEnergy;

/// The `2N x 2N` block-tridiagonal Hamiltonian with open ends. Site order is
/// `a_1, b_1, a_2, b_2, ...`.
pub fn assemble_hamiltonian(fl: &FiniteLattice) -> ComplexMatrix {
    let n = fl.dim();
    let p = fl.params();
    let hop_t = ComplexEnergy::new(-p.t(), 0.0);
    let hop_d = ComplexEnergy::new(-p.d(), 0.0);
    let mut h = ComplexMatrix::zeros(n, n);
    for cell in 0..fl.n_cells() {
        let i = 2 * cell;
        h[(i, i)] = fl.onsite_a();
        h[(i + 1, i + 1)] = fl.onsite_b();
        h[(i, i + 1)] = hop_t;
        h[(i + 1, i)] = hop_t;
        if cell + 1 < fl.n_cells() {
            for r in 0..2 {
                for c in 0..2 {
                    h[(i + r, i + 2 + c)] = hop_d;
                    h[(i + 2 + c, i + r)] = hop_d;
                }
            }
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Bound on `|H v - eps v| / |v|`, relative to `max(1, |H|_inf)`.
    pub residual_tol: f64,
    pub vectors: bool,
    pub max_sweeps: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            vectors: false,
            max_sweeps: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by real part, then imaginary part.
    pub values: Vec<ComplexEnergy>,
    pub residuals: Vec<f64>,
    /// Unit eigenvectors aligned with `values`, when requested.
    pub vectors: Option<Vec<Vec<ComplexEnergy>>>,
    pub trace_defect: f64,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of eigenvalues within `tol` of `z`.
    pub fn multiplicity_near(&self, z: ComplexEnergy, tol: f64) -> usize {
        self.values.iter().filter(|v| (**v - z).norm() <= tol).count()
    }
}

fn cmp_energy(a: &ComplexEnergy, b: &ComplexEnergy) -> core::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn eigenvalues(fl: &FiniteLattice, tol: f64) -> Result<SpectrumResult> {
    spectrum(
        fl,
        &SpectrumOptions {
            residual_tol: tol,
            ..SpectrumOptions::default()
        },
    )
}

pub fn spectrum(fl: &FiniteLattice, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    if !(opts.residual_tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    let h = assemble_hamiltonian(fl);
    let es = linalg::eigen(
        &h,
        &EigenOptions {
            max_sweeps: opts.max_sweeps,
            vectors: opts.vectors,
            ..EigenOptions::default()
        },
    )?;
    let scale = h.norm_inf().max(1.0);
    let bound = opts.residual_tol * scale;
    if let Some((index, &residual)) = es.residuals.iter().enumerate().find(|(_, r)| !(**r <= bound)) {
        return Err(Error::ResidualTooLarge {
            index,
            residual,
            tol: bound,
        });
    }
    let sum: ComplexEnergy = es.values.iter().sum();
    let trace_defect = (sum - h.trace()).norm();
    let trace_tol = 1e-8 * fl.n_cells() as f64 * scale;
    if !(trace_defect <= trace_tol) {
        return Err(Error::TraceMismatch {
            defect: trace_defect,
            tol: trace_tol,
        });
    }

    let mut order: Vec<usize> = (0..es.values.len()).collect();
    order.sort_by(|&i, &j| cmp_energy(&es.values[i], &es.values[j]));
    Ok(SpectrumResult {
        values: order.iter().map(|&i| es.values[i]).collect(),
        residuals: order.iter().map(|&i| es.residuals[i]).collect(),
        vectors: es.vectors.map(|vs| order.iter().map(|&i| vs[i].clone()).collect()),
        trace_defect,
    })
}

/// Eigenvalues only, without the residual pass; used inside tracking loops.
pub fn eigenvalues_fast(fl: &FiniteLattice) -> Result<Vec<ComplexEnergy>> {
    let mut v = linalg::eigenvalues(&assemble_hamiltonian(fl))?;
    v.sort_by(cmp_energy);
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackConfig {
    /// Maximum distance between a seed and the eigenvalue it selects.
    pub seed_tol: f64,
    /// Maximum jump of a track between adjacent grid points.
    pub continuity_bound: f64,
    /// Pair distance that counts as coalesced during refinement.
    pub coalescence_tol: f64,
    pub max_bisections: usize,
}

impl Default for TrackConfig {
    fn default() -> Self {
        Self {
            seed_tol: 1e-6,
            continuity_bound: 0.05,
            coalescence_tol: 1e-7,
            max_bisections: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpLocation {
    pub gamma: f64,
    /// Mean of the pair at the refined `gamma`.
    pub energy: ComplexEnergy,
    /// Pair distance at the refined `gamma`.
    pub distance: f64,
    /// Whether `distance` dropped below the coalescence threshold.
    pub coalesced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpTrace {
    pub gammas: Vec<f64>,
    pub tracks: Vec<[ComplexEnergy; 2]>,
    pub ep: Option<EpLocation>,
}

impl EpTrace {
    pub fn distances(&self) -> Vec<f64> {
        self.tracks.iter().map(|[a, b]| (a - b).norm()).collect()
    }
}

/// Positive while the pair splits along the real axis, negative once it
/// splits along the imaginary axis.
fn split_sign(pair: &[ComplexEnergy; 2]) -> f64 {
    let d = pair[0] - pair[1];
    (d * d).re
}

fn nearest(values: &[ComplexEnergy], z: ComplexEnergy, skip: Option<usize>) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
        .map(|(i, _)| i)
}

fn lattice_at(template: &FiniteLattice, gamma: f64) -> Result<FiniteLattice> {
    Ok(template.with_params(template.params().with_gamma(gamma)?))
}

/// Follows two eigenvalues of `template` across `gammas`, assigning
/// continuations jointly by minimal distance to a linear prediction. When the
/// pair passes from a real to an imaginary splitting (or back) the crossing
/// is refined by bisection in `gamma`.
pub fn trace_pair_vs_gamma(
    template: &FiniteLattice,
    gammas: &[f64],
    seeds: [ComplexEnergy; 2],
    cfg: &TrackConfig,
) -> Result<EpTrace> {
    if gammas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "gamma_grid",
            reason: "must be nonempty",
        });
    }
    if gammas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter {
            name: "gamma_grid",
            reason: "must be strictly increasing",
        });
    }
    let g0 = gammas[0];
    let first = eigenvalues_fast(&lattice_at(template, g0)?)?;
    let i = nearest(&first, seeds[0], None).ok_or(Error::SeedMismatch {
        seed: seeds[0],
        gamma: g0,
    })?;
    let j = nearest(&first, seeds[1], Some(i)).ok_or(Error::SeedMismatch {
        seed: seeds[1],
        gamma: g0,
    })?;
    for (idx, seed) in [(i, seeds[0]), (j, seeds[1])] {
        if !((first[idx] - seed).norm() <= cfg.seed_tol) {
            return Err(Error::SeedMismatch { seed, gamma: g0 });
        }
    }

    let mut tracks: Vec<[ComplexEnergy; 2]> = Vec::with_capacity(gammas.len());
    tracks.push([first[i], first[j]]);
    for (step, &g) in gammas.iter().enumerate().skip(1) {
        let values = eigenvalues_fast(&lattice_at(template, g)?)?;
        let prev = tracks[step - 1];
        let pred = if step >= 2 {
            let before = tracks[step - 2];
            let w = (g - gammas[step - 1]) / (gammas[step - 1] - gammas[step - 2]);
            [prev[0] + (prev[0] - before[0]) * w, prev[1] + (prev[1] - before[1]) * w]
        } else {
            prev
        };
        let cands: Vec<ComplexEnergy> = values
            .iter()
            .copied()
            .filter(|v| prev.iter().any(|p| (v - p).norm() <= cfg.continuity_bound))
            .collect();
        if cands.len() != 2 {
            return Err(Error::TrackingLost {
                gamma: g,
                candidates: cands.len(),
                bound: cfg.continuity_bound,
            });
        }
        let keep = (cands[0] - pred[0]).norm() + (cands[1] - pred[1]).norm();
        let swap = (cands[1] - pred[0]).norm() + (cands[0] - pred[1]).norm();
        tracks.push(if swap < keep {
            [cands[1], cands[0]]
        } else {
            [cands[0], cands[1]]
        });
    }

    let ep = locate_ep(template, gammas, &tracks, cfg)?;
    Ok(EpTrace {
        gammas: gammas.to_vec(),
        tracks,
        ep,
    })
}

fn locate_ep(
    template: &FiniteLattice,
    gammas: &[f64],
    tracks: &[[ComplexEnergy; 2]],
    cfg: &TrackConfig,
) -> Result<Option<EpLocation>> {
    let dist = |p: &[ComplexEnergy; 2]| (p[0] - p[1]).norm();
    for (i, p) in tracks.iter().enumerate() {
        if dist(p) <= cfg.coalescence_tol {
            return Ok(Some(EpLocation {
                gamma: gammas[i],
                energy: (p[0] + p[1]) * 0.5,
                distance: dist(p),
                coalesced: true,
            }));
        }
    }
    // Bracket around the closest approach where the splitting changes type.
    let closest = (0..tracks.len())
        .min_by(|&a, &b| dist(&tracks[a]).total_cmp(&dist(&tracks[b])))
        .unwrap_or(0);
    let changes = |a: usize| split_sign(&tracks[a]).signum() != split_sign(&tracks[a + 1]).signum();
    let bracket = [closest.checked_sub(1), Some(closest)]
        .into_iter()
        .flatten()
        .filter(|&a| a + 1 < tracks.len())
        .find(|&a| changes(a));
    let Some(a) = bracket else {
        return Ok(None);
    };

    let (mut lo, mut hi) = (gammas[a], gammas[a + 1]);
    let sign_lo = split_sign(&tracks[a]).signum();
    let mut mean = (tracks[a][0] + tracks[a][1] + tracks[a + 1][0] + tracks[a + 1][1]) * 0.25;
    let mut best = EpLocation {
        gamma: 0.5 * (lo + hi),
        energy: mean,
        distance: f64::INFINITY,
        coalesced: false,
    };
    for _ in 0..cfg.max_bisections {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let values = eigenvalues_fast(&lattice_at(template, mid)?)?;
        let Some(x) = nearest(&values, mean, None) else { break };
        let Some(y) = nearest(&values, mean, Some(x)) else {
            break;
        };
        let pair = [values[x], values[y]];
        mean = (pair[0] + pair[1]) * 0.5;
        best = EpLocation {
            gamma: mid,
            energy: mean,
            distance: dist(&pair),
            coalesced: dist(&pair) <= cfg.coalescence_tol,
        };
        if best.coalesced {
            break;
        }
        if split_sign(&pair).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(best))
}
