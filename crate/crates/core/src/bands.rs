//! Bloch Hamiltonian of the infinite lattice, its closed-form complex bands,
//! PT phase labels, exceptional points and the `(gamma, energy)` phase
//! diagram.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::params::LatticeParams;
use crate::real::{acos, cos, sqrt};
use crate::ComplexEnergy;

/// Default `|D|` tolerance below which a momentum is labelled an EP.
pub const DEFAULT_EP_TOL: f64 = 1e-9;

/// `H(k) = h(k) . sigma + h0(k) sigma_0` for one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMatrix {
    pub k: f64,
    pub entries: [[ComplexEnergy; 2]; 2],
}

impl BlochMatrix {
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(&self.entries)
    }

    pub fn trace(&self) -> ComplexEnergy {
        self.entries[0][0] + self.entries[1][1]
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "k",
            reason: "wavenumber must be finite",
        })
    }
}

pub fn bloch_hamiltonian(k: f64, p: &LatticeParams) -> Result<BlochMatrix> {
    check_k(k)?;
    let h0 = -2.0 * p.d() * cos(k);
    let hx = ComplexEnergy::new(-p.t() + h0, 0.0);
    let h0 = ComplexEnergy::new(h0, 0.0);
    Ok(BlochMatrix {
        k,
        entries: [[p.onsite_a() + h0, hx], [hx, p.onsite_b() + h0]],
    })
}

/// Closed-form `(eps_plus, eps_minus)` with the principal square root.
pub fn band_energies(k: f64, p: &LatticeParams) -> (ComplexEnergy, ComplexEnergy) {
    let c = cos(k);
    let h0 = ComplexEnergy::new(-2.0 * p.d() * c, 0.0);
    let hx = p.t() + 2.0 * p.d() * c;
    let hz = ComplexEnergy::new(p.delta() / 2.0, p.gamma() / 2.0);
    let root = (ComplexEnergy::new(hx * hx, 0.0) + hz * hz).sqrt();
    (h0 + root, h0 - root)
}

/// Real discriminant `(t + 2d cos k)^2 - gamma^2/4` of the PT case.
pub fn discriminant(k: f64, p: &LatticeParams) -> f64 {
    let hx = p.t() + 2.0 * p.d() * cos(k);
    hx * hx - p.gamma() * p.gamma() / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Unbroken,
    Broken,
    ExceptionalPoint,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Unbroken => "unbroken",
            PhaseLabel::Broken => "broken",
            PhaseLabel::ExceptionalPoint => "ep",
        }
    }
}

fn require_pt(p: &LatticeParams) -> Result<()> {
    if p.delta() == 0.0 {
        Ok(())
    } else {
        Err(Error::NotPtSymmetric { delta: p.delta() })
    }
}

pub fn classify_phase(k: f64, p: &LatticeParams, tol: f64) -> Result<PhaseLabel> {
    check_k(k)?;
    require_pt(p)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    let d = discriminant(k, p);
    Ok(if d > tol {
        PhaseLabel::Unbroken
    } else if d < -tol {
        PhaseLabel::Broken
    } else {
        PhaseLabel::ExceptionalPoint
    })
}

/// Gap-facing edges of the two unbroken bands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdges {
    /// Bottom of the upper band, reached at `k = pi`.
    pub upper: Option<f64>,
    /// Top of the lower band, reached at `k = 0`.
    pub lower: Option<f64>,
    pub upper_radicand: f64,
    pub lower_radicand: f64,
}

impl BandEdges {
    pub fn upper(&self) -> Result<f64> {
        self.upper.ok_or(Error::EdgeAbsent {
            radicand: self.upper_radicand,
        })
    }

    pub fn lower(&self) -> Result<f64> {
        self.lower.ok_or(Error::EdgeAbsent {
            radicand: self.lower_radicand,
        })
    }

    /// Open gap `(lower, upper)` when both edges exist and are ordered.
    pub fn gap(&self) -> Option<(f64, f64)> {
        match (self.lower, self.upper) {
            (Some(lo), Some(hi)) if hi > lo => Some((lo, hi)),
            _ => None,
        }
    }
}

/// Inner band edges at the gain/loss of `p`.
pub fn band_edges(p: &LatticeParams) -> BandEdges {
    let (t, d, g) = (p.t(), p.d(), p.gamma());
    let upper_radicand = (t - 2.0 * d) * (t - 2.0 * d) - g * g / 4.0;
    let lower_radicand = (t + 2.0 * d) * (t + 2.0 * d) - g * g / 4.0;
    BandEdges {
        upper: (upper_radicand >= 0.0).then(|| 2.0 * d - sqrt(upper_radicand)),
        lower: (lower_radicand >= 0.0).then(|| -2.0 * d + sqrt(lower_radicand)),
        upper_radicand,
        lower_radicand,
    }
}

/// The two EP energy lines `t -+ gamma/2` and whether each has a momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpLines {
    pub ep1: f64,
    pub ep2: f64,
    pub ep1_present: bool,
    pub ep2_present: bool,
}

pub fn ep_lines(p: &LatticeParams) -> Result<EpLines> {
    let (t, d, g) = (p.t(), p.d(), p.gamma());
    if g < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "EP lines need gamma >= 0",
        });
    }
    // ep1: t + 2d cos k = +gamma/2, ep2: t + 2d cos k = -gamma/2.
    let exists = |c: f64| c.abs() <= 1.0;
    Ok(EpLines {
        ep1: t - g / 2.0,
        ep2: t + g / 2.0,
        ep1_present: exists((g / 2.0 - t) / (2.0 * d)),
        ep2_present: exists((-g / 2.0 - t) / (2.0 * d)),
    })
}

/// `(gamma_c, eps_c) = (2|t - 2d|, 2d)`.
pub fn critical_constants(p: &LatticeParams) -> (f64, f64) {
    (2.0 * (p.t() - 2.0 * p.d()).abs(), 2.0 * p.d())
}

/// An exceptional point located on the momentum axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalPoint {
    pub k: f64,
    /// Coalesced energy, the mean of the two branches.
    pub energy: f64,
}

/// Zeros of the discriminant on `k in [0, pi]`, bracketed on `nk + 1`
/// samples and refined by bisection. Tangential zeros are not reported.
pub fn ep_momenta(p: &LatticeParams, nk: usize) -> Result<Vec<ExceptionalPoint>> {
    require_pt(p)?;
    if nk < 2 {
        return Err(Error::InvalidParameter {
            name: "nk",
            reason: "need at least two samples",
        });
    }
    let ks: Vec<f64> = (0..=nk).map(|i| PI * i as f64 / nk as f64).collect();
    let ds: Vec<f64> = ks.iter().map(|&k| discriminant(k, p)).collect();
    let mut out = Vec::new();
    let mut push = |k: f64| {
        let energy = -2.0 * p.d() * cos(k);
        if out.last().is_none_or(|e: &ExceptionalPoint| (e.k - k).abs() > 1e-12) {
            out.push(ExceptionalPoint { k, energy });
        }
    };
    for i in 0..nk {
        let (d0, d1) = (ds[i], ds[i + 1]);
        if d0 == 0.0 {
            let left = if i > 0 { ds[i - 1] } else { d1 };
            if left.signum() != d1.signum() || i == 0 {
                if i == 0 && d1 == 0.0 {
                    continue;
                }
                push(ks[i]);
            }
            continue;
        }
        if d1 == 0.0 {
            if i + 1 == nk {
                push(ks[i + 1]);
            }
            continue;
        }
        if d0.signum() != d1.signum() {
            let (mut a, mut b) = (ks[i], ks[i + 1]);
            let mut fa = d0;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = discriminant(m, p);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            push(0.5 * (a + b));
        }
    }
    Ok(out)
}

/// Closed-form momentum of an EP energy line, if it exists.
pub fn ep_momentum(p: &LatticeParams, energy: f64) -> Option<f64> {
    let c = -energy / (2.0 * p.d());
    (c.abs() <= 1.0).then(|| acos(c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub k: f64,
    pub plus: ComplexEnergy,
    pub minus: ComplexEnergy,
    /// `None` when `delta != 0`, where phases are undefined.
    pub label: Option<PhaseLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub points: Vec<BandPoint>,
}

impl BandStructure {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest violation of `eps_plus + eps_minus = -4 d cos k`.
    pub fn trace_defect(&self, p: &LatticeParams) -> f64 {
        self.points
            .iter()
            .map(|b| (b.plus + b.minus - ComplexEnergy::new(-4.0 * p.d() * cos(b.k), 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// Uniform grid `k_i = -pi + 2 pi i / nk`.
pub fn k_grid(nk: usize) -> Vec<f64> {
    (0..nk).map(|i| -PI + 2.0 * PI * i as f64 / nk as f64).collect()
}

pub fn sample_bands(p: &LatticeParams, nk: usize) -> Result<BandStructure> {
    sample_bands_with_tol(p, nk, DEFAULT_EP_TOL)
}

/// Samples both branches on [`k_grid`], re-pairing neighbours by minimal
/// distance (with linear prediction) outward from the sample nearest
/// `k = 0`, where the principal-branch order is kept.
pub fn sample_bands_with_tol(p: &LatticeParams, nk: usize, tol: f64) -> Result<BandStructure> {
    if nk < 2 {
        return Err(Error::InvalidParameter {
            name: "nk",
            reason: "need at least two k samples",
        });
    }
    let ks = k_grid(nk);
    let raw: Vec<(ComplexEnergy, ComplexEnergy)> = ks.iter().map(|&k| band_energies(k, p)).collect();
    let mut paired = raw.clone();
    let anchor = nk / 2;
    let mut follow = |order: &mut dyn Iterator<Item = usize>| {
        let mut prev: Vec<usize> = vec![anchor];
        for i in order {
            let last = paired[*prev.last().unwrap()];
            let pred = if prev.len() >= 2 {
                let before = paired[prev[prev.len() - 2]];
                (last.0 * 2.0 - before.0, last.1 * 2.0 - before.1)
            } else {
                last
            };
            let (x, y) = raw[i];
            let keep = (pred.0 - x).norm() + (pred.1 - y).norm();
            let swap = (pred.0 - y).norm() + (pred.1 - x).norm();
            paired[i] = if swap < keep { (y, x) } else { (x, y) };
            prev.push(i);
        }
    };
    follow(&mut (anchor + 1..nk));
    follow(&mut (0..anchor).rev());

    let pt = p.delta() == 0.0;
    let points = ks
        .iter()
        .zip(&paired)
        .map(|(&k, &(plus, minus))| {
            let label = if pt { Some(classify_phase(k, p, tol)?) } else { None };
            Ok(BandPoint { k, plus, minus, label })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandStructure { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    NoBand,
    UnbrokenOnly,
    BrokenOnly,
    Coexistent,
}

impl RegionLabel {
    fn from_occupancy(unbroken: bool, broken: bool) -> Self {
        match (unbroken, broken) {
            (false, false) => RegionLabel::NoBand,
            (true, false) => RegionLabel::UnbrokenOnly,
            (false, true) => RegionLabel::BrokenOnly,
            (true, true) => RegionLabel::Coexistent,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::NoBand => "no_band",
            RegionLabel::UnbrokenOnly => "unbroken",
            RegionLabel::BrokenOnly => "broken",
            RegionLabel::Coexistent => "coexistent",
        }
    }
}

/// Region labels on a `(gamma, energy)` grid, `labels[i][j]` for
/// `gammas[i]`, `energies[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub gammas: Vec<f64>,
    pub energies: Vec<f64>,
    pub labels: Vec<Vec<RegionLabel>>,
}

/// Sorted, merged closed intervals.
fn merge(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn hits(intervals: &[(f64, f64)], lo: f64, hi: f64) -> bool {
    // First interval whose upper end reaches `lo`.
    let i = intervals.partition_point(|iv| iv.1 < lo);
    intervals.get(i).is_some_and(|iv| iv.0 <= hi)
}

/// Real-energy extent swept by each phase along the continuous branches.
/// A segment between neighbouring samples of different phase counts for
/// both, since the branch passes the EP inside it.
type Intervals = Vec<(f64, f64)>;

fn occupancy(bands: &BandStructure) -> (Intervals, Intervals) {
    let mut unbroken = Vec::new();
    let mut broken = Vec::new();
    let pts = &bands.points;
    let n = pts.len();
    for i in 0..n {
        let a = &pts[i];
        let b = &pts[(i + 1) % n];
        let pairs = if i + 1 < n {
            [(a.plus, b.plus), (a.minus, b.minus)]
        } else {
            let keep = (a.plus - b.plus).norm() + (a.minus - b.minus).norm();
            let swap = (a.plus - b.minus).norm() + (a.minus - b.plus).norm();
            if swap < keep {
                [(a.plus, b.minus), (a.minus, b.plus)]
            } else {
                [(a.plus, b.plus), (a.minus, b.minus)]
            }
        };
        let a_broken = a.label == Some(PhaseLabel::Broken);
        let b_broken = b.label == Some(PhaseLabel::Broken);
        for (x, y) in pairs {
            let seg = (x.re.min(y.re), x.re.max(y.re));
            if !a_broken || !b_broken {
                unbroken.push(seg);
            }
            if a_broken || b_broken {
                broken.push(seg);
            }
        }
    }
    (merge(unbroken), merge(broken))
}

/// One `gamma` row of the phase diagram; `gamma` is taken from `p`.
pub fn phase_diagram_row(p: &LatticeParams, energies: &[f64], nk: usize) -> Result<Vec<RegionLabel>> {
    require_pt(p)?;
    if energies.is_empty() {
        return Err(Error::InvalidParameter {
            name: "energy_grid",
            reason: "must be nonempty",
        });
    }
    let bands = sample_bands(p, nk)?;
    let (unbroken, broken) = occupancy(&bands);
    let n = energies.len();
    Ok((0..n)
        .map(|j| {
            let e = energies[j];
            let left = if j > 0 { (e - energies[j - 1]).abs() / 2.0 } else { 0.0 };
            let right = if j + 1 < n {
                (energies[j + 1] - e).abs() / 2.0
            } else {
                0.0
            };
            let (lo, hi) = (e - left, e + right);
            RegionLabel::from_occupancy(hits(&unbroken, lo, hi), hits(&broken, lo, hi))
        })
        .collect())
}

pub fn phase_diagram(p: &LatticeParams, gammas: &[f64], energies: &[f64], nk: usize) -> Result<PhaseDiagram> {
    require_pt(p)?;
    if gammas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "gamma_grid",
            reason: "must be nonempty",
        });
    }
    let labels = gammas
        .iter()
        .map(|&g| phase_diagram_row(&p.with_gamma(g)?, energies, nk))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram {
        gammas: gammas.to_vec(),
        energies: energies.to_vec(),
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexEnergy {
        ComplexEnergy::new(re, im)
    }

    fn close(a: ComplexEnergy, b: ComplexEnergy, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn pt(gamma: f64) -> LatticeParams {
        LatticeParams::pt_symmetric(gamma).unwrap()
    }

    #[test]
    fn bloch_matrix_examples() {
        let m = bloch_hamiltonian(0.0, &pt(0.0)).unwrap().entries;
        assert_eq!(m, [[c(-2.0, 0.0), c(-3.0, 0.0)], [c(-3.0, 0.0), c(-2.0, 0.0)]]);

        let m = bloch_hamiltonian(PI, &pt(1.0)).unwrap().entries;
        assert!(close(m[0][0], c(2.0, 0.5), 1e-15));
        assert!(close(m[0][1], c(1.0, 0.0), 1e-15));
        assert!(close(m[1][0], c(1.0, 0.0), 1e-15));
        assert!(close(m[1][1], c(2.0, -0.5), 1e-15));

        let p = LatticeParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let m = bloch_hamiltonian(PI / 2.0, &p).unwrap().entries;
        assert!(close(m[0][0], c(0.5, 0.0), 1e-15));
        assert!(close(m[0][1], c(-1.0, 0.0), 1e-15));
        assert!(close(m[1][1], c(-0.5, 0.0), 1e-15));

        assert!(bloch_hamiltonian(f64::NAN, &p).is_err());
    }

    #[test]
    fn band_energy_examples() {
        let (a, b) = band_energies(0.0, &pt(0.0));
        assert!(close(a, c(1.0, 0.0), 1e-15) && close(b, c(-5.0, 0.0), 1e-15));

        let k = 2.0 * PI / 3.0;
        let (a, b) = band_energies(k, &pt(1.0));
        assert!(close(a, c(1.0, 0.5), 1e-12) && close(b, c(1.0, -0.5), 1e-12));

        let (a, b) = band_energies(PI, &pt(2.0));
        assert!(close(a, c(2.0, 0.0), 1e-15) && close(b, c(2.0, 0.0), 1e-15));
    }

    #[test]
    fn phase_examples() {
        let tol = DEFAULT_EP_TOL;
        assert_eq!(classify_phase(PI, &pt(1.0), tol).unwrap(), PhaseLabel::Unbroken);
        assert_eq!(classify_phase(acos(-0.5), &pt(1.0), tol).unwrap(), PhaseLabel::Broken);
        assert_eq!(
            classify_phase(acos(-0.25), &pt(1.0), tol).unwrap(),
            PhaseLabel::ExceptionalPoint
        );
        let p = LatticeParams::new(1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            classify_phase(0.0, &p, tol),
            Err(Error::NotPtSymmetric { .. })
        ));
        assert!(classify_phase(0.0, &pt(1.0), 0.0).is_err());
    }

    #[test]
    fn ep_energy_momentum_matches_line() {
        // cos k = -0.25 is the EP1 momentum at gamma = 1; energy t - gamma/2.
        let (a, b) = band_energies(acos(-0.25), &pt(1.0));
        assert!(close(a, c(0.5, 0.0), 1e-7) && close(b, c(0.5, 0.0), 1e-7));
    }

    #[test]
    fn band_edge_examples() {
        let e = band_edges(&pt(0.0));
        assert_eq!((e.upper, e.lower), (Some(1.0), Some(1.0)));
        assert!(e.gap().is_none());

        let e = band_edges(&pt(3.0));
        assert!(e.upper.is_none());
        assert!(matches!(e.upper(), Err(Error::EdgeAbsent { .. })));
        assert!(e.lower.is_some());
    }

    #[test]
    fn ep_line_examples() {
        let l = ep_lines(&pt(0.0)).unwrap();
        assert_eq!((l.ep1, l.ep2), (1.0, 1.0));
        let l = ep_lines(&pt(1.0)).unwrap();
        assert_eq!((l.ep1, l.ep2, l.ep1_present, l.ep2_present), (0.5, 1.5, true, true));
        let l = ep_lines(&pt(2.5)).unwrap();
        assert!(l.ep1_present && !l.ep2_present);
        assert!(ep_lines(&pt(-1.0)).is_err());
    }

    #[test]
    fn critical_constant_examples() {
        let cc = |t, d| critical_constants(&LatticeParams::new(t, d, 0.0, 0.0).unwrap());
        assert_eq!(cc(1.0, 1.0), (2.0, 2.0));
        assert_eq!(cc(2.0, 1.0), (0.0, 2.0));
        assert_eq!(cc(1.0, 2.0), (6.0, 4.0));
    }

    #[test]
    fn hermitian_flat_band_column() {
        for nk in [33, 64, 513] {
            let b = sample_bands(&pt(0.0), nk).unwrap();
            for pt in &b.points {
                assert!(close(pt.plus, c(1.0, 0.0), 1e-12), "k={} plus={}", pt.k, pt.plus);
            }
        }
    }

    #[test]
    fn broken_set_matches_cosine_window() {
        let nk = 4096;
        let b = sample_bands(&pt(1.0), nk).unwrap();
        for pt in &b.points {
            let c = cos(pt.k);
            let inside = -0.75 < c && c < -0.25;
            let label = pt.label.unwrap();
            // Away from the two boundaries the label is fixed by the window.
            if (c + 0.75).abs() > 1e-3 && (c + 0.25).abs() > 1e-3 {
                assert_eq!(label == PhaseLabel::Broken, inside, "k = {}", pt.k);
            }
        }
    }

    #[test]
    fn two_sample_grid_keeps_trace() {
        let p = LatticeParams::new(0.7, 1.3, 0.4, 0.9).unwrap();
        let b = sample_bands(&p, 2).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.trace_defect(&p) < 1e-12);
        assert!(b.points.iter().all(|x| x.label.is_none()));
        assert!(sample_bands(&p, 1).is_err());
    }

    #[test]
    fn ep_label_at_zone_boundary_for_gamma_two() {
        let b = sample_bands(&pt(2.0), 256).unwrap();
        let near_pi: Vec<_> = b
            .points
            .iter()
            .filter(|x| x.label == Some(PhaseLabel::ExceptionalPoint) && x.k.abs() > 2.0)
            .collect();
        assert_eq!(near_pi.len(), 1);
        assert_eq!(near_pi[0].k, -PI);
    }

    #[test]
    fn ep_momenta_reproduce_lines() {
        for g in [0.5, 1.0, 1.5] {
            let p = pt(g);
            let eps = ep_momenta(&p, 1024).unwrap();
            assert_eq!(eps.len(), 2, "gamma {g}");
            let lines = ep_lines(&p).unwrap();
            assert!((eps[0].energy - lines.ep1).abs() < 1e-12);
            assert!((eps[1].energy - lines.ep2).abs() < 1e-12);
            assert!((eps[0].k - ep_momentum(&p, lines.ep1).unwrap()).abs() < 1e-9);
        }
        assert_eq!(ep_momenta(&pt(2.5), 1024).unwrap().len(), 1);
    }

    #[test]
    fn phase_diagram_examples() {
        let p = pt(1.0);
        let row = phase_diagram_row(&p, &[1.0], 4096).unwrap();
        assert_eq!(row, vec![RegionLabel::BrokenOnly]);
        for (e, want) in [
            (0.7, RegionLabel::Coexistent),
            (1.3, RegionLabel::Coexistent),
            (-3.0, RegionLabel::UnbrokenOnly),
            (2.0, RegionLabel::UnbrokenOnly),
        ] {
            assert_eq!(phase_diagram_row(&p, &[e], 4096).unwrap(), vec![want], "E = {e}");
        }
        let row = phase_diagram_row(&pt(3.0), &[3.0], 4096).unwrap();
        assert_eq!(row, vec![RegionLabel::NoBand]);
        let row = phase_diagram_row(&pt(0.0), &[-5.0], 4096).unwrap();
        assert_eq!(row, vec![RegionLabel::UnbrokenOnly]);

        let d = LatticeParams::new(1.0, 1.0, 0.5, 0.0).unwrap();
        assert!(phase_diagram(&d, &[0.0], &[0.0], 16).is_err());
        assert!(phase_diagram(&p, &[], &[0.0], 16).is_err());
        assert!(phase_diagram(&p, &[0.0], &[], 16).is_err());
    }
}
