#![allow(clippy::needless_range_loop)]
//! Reference computations that share no code with the library solvers.

#![allow(dead_code)]

use crossstitch_core::linalg::ComplexMatrix;
use crossstitch_core::Complex64 as C;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Coefficients `[1, c_1, ..., c_n]` of `det(z I - A)` (highest degree
/// first) by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &ComplexMatrix) -> Vec<C> {
    let n = a.nrows();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n, n);
    let mut prev_c = c(1.0, 0.0);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = a.matmul(&m);
        for i in 0..n {
            next[(i, i)] += prev_c;
        }
        m = next;
        let am = a.matmul(&m);
        let ck = -am.trace() / k as f64;
        coeffs.push(ck);
        prev_c = ck;
    }
    coeffs
}

pub fn poly_eval(coeffs: &[C], z: C) -> C {
    coeffs.iter().fold(c(0.0, 0.0), |acc, &k| acc * z + k)
}

/// All roots of a monic polynomial by Aberth-Ehrlich iteration.
pub fn poly_roots(coeffs: &[C]) -> Vec<C> {
    let n = coeffs.len() - 1;
    let deriv: Vec<C> = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, &k)| k * (n - i) as f64)
        .collect();
    let radius = 1.0 + coeffs[1..].iter().map(|k| k.norm()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|i| C::from_polar(radius, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = poly_eval(coeffs, z[i]) / poly_eval(&deriv, z[i]);
            let sum: C = (0..n).filter(|&j| j != i).map(|j| c(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (c(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_real(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs())).unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// Resultant of a real polynomial and its derivative (Sylvester matrix),
/// which vanishes exactly where two roots coincide.
pub fn discriminant_real(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let deriv: Vec<f64> = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, &k)| k * (n - i) as f64)
        .collect();
    let size = 2 * n - 1;
    let mut s = vec![vec![0.0; size]; size];
    for r in 0..n - 1 {
        for (j, &k) in coeffs.iter().enumerate() {
            s[r][r + j] = k;
        }
    }
    for r in 0..n {
        for (j, &k) in deriv.iter().enumerate() {
            s[n - 1 + r][r + j] = k;
        }
    }
    det_real(s)
}

/// Bisection on a sign change of `f` inside `[lo, hi]`.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    assert!(flo.signum() != f(hi).signum(), "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Brute-force inner edges for unit hoppings: the top of the real unbroken
/// energies at or below `t` and the bottom of those at or above `t`.
pub fn scanned_inner_edges(t: f64, d: f64, gamma: f64, samples: usize) -> (Option<f64>, Option<f64>) {
    let mut below: Option<f64> = None;
    let mut above: Option<f64> = None;
    for i in 0..=samples {
        let k = std::f64::consts::PI * i as f64 / samples as f64;
        let hx = t + 2.0 * d * k.cos();
        let rad = hx * hx - gamma * gamma / 4.0;
        if rad <= 0.0 {
            continue;
        }
        for e in [-2.0 * d * k.cos() + rad.sqrt(), -2.0 * d * k.cos() - rad.sqrt()] {
            if e <= t {
                below = Some(below.map_or(e, |b: f64| b.max(e)));
            }
            if e >= t {
                above = Some(above.map_or(e, |a: f64| a.min(e)));
            }
        }
    }
    (above, below)
}

/// Reflection and transmission amplitudes from a transfer recursion on the
/// rotated chain. Each cell contributes the site `(a + b)/sqrt(2)` with the
/// odd combination eliminated at energy `e`; the leads see `lead_energy`.
#[derive(Debug, Clone, Copy)]
pub struct ChainSpec {
    pub n: usize,
    pub t: f64,
    pub d: f64,
    pub delta: f64,
    pub gamma: f64,
    pub loss: f64,
    pub v0: f64,
    pub g: f64,
}

pub fn transfer_amplitudes(s: &ChainSpec, e: C, lead_energy: f64) -> (C, C) {
    let plus = c(0.0, -s.loss);
    let minus = c(s.delta / 2.0, s.gamma / 2.0);
    // Effective on-site energy of the even combination.
    let onsite = plus - s.t + minus * minus / (e - plus - s.t);
    let z = c(lead_energy / s.v0, 0.0);
    let root = (c(1.0, 0.0) - z * z).sqrt();
    let fwd = -z + c(0.0, 1.0) * root;
    let bwd = -z - c(0.0, 1.0) * root;

    // Sites: lead ..., psi_{-1}, psi_0 | p_1 .. p_N | psi_{N+1}, psi_{N+2}.
    // Index the full chain so that position 0 is psi_{-1}.
    let len = s.n + 4;
    let mut energy_minus_onsite = vec![c(lead_energy, 0.0); len];
    for cell in 0..s.n {
        energy_minus_onsite[2 + cell] = e - onsite;
    }
    // hop[i] couples positions i and i + 1.
    let mut hop = vec![c(-s.v0 / 2.0, 0.0); len - 1];
    hop[1] = c(-std::f64::consts::SQRT_2 * s.g, 0.0);
    for h in hop.iter_mut().take(s.n + 1).skip(2) {
        *h = c(-2.0 * s.d, 0.0);
    }
    hop[s.n + 1] = c(-std::f64::consts::SQRT_2 * s.g, 0.0);

    // Outgoing wave t0 e^{iq(j - N)} with t0 = 1, shot back to psi_{-1}.
    let mut psi = vec![c(0.0, 0.0); len];
    psi[len - 2] = fwd;
    psi[len - 1] = fwd * fwd;
    for site in (1..len - 1).rev() {
        psi[site - 1] = (energy_minus_onsite[site] * psi[site] - hop[site] * psi[site + 1]) / hop[site - 1];
    }
    // psi_0 = A e^{-iq} + B e^{iq}, psi_{-1} = A e^{-2iq} + B e^{2iq}.
    let (p0, pm1) = (psi[1], psi[0]);
    let det = bwd * fwd * fwd - fwd * bwd * bwd;
    let a = (p0 * fwd * fwd - pm1 * fwd) / det;
    let b = (bwd * pm1 - bwd * bwd * p0) / det;
    (b / a, c(1.0, 0.0) / a)
}
