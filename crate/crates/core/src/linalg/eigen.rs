//! General complex eigensolver: diagonal balancing, Householder reduction to
//! upper Hessenberg form, then single-shift QR with Wilkinson shifts.
//! Eigenvectors (and the residuals reported for every eigenvalue) come from
//! inverse iteration on the Hessenberg matrix.

use alloc::vec;
use alloc::vec::Vec;

use super::{norm2, ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::real::{abs1, hypot};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// QR sweeps allowed before one eigenvalue must deflate.
    pub max_sweeps: usize,
    pub balance: bool,
    /// Keep the inverse-iteration eigenvectors in the result.
    pub vectors: bool,
    /// Inverse-iteration steps per eigenvalue.
    pub refine_steps: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 100,
            balance: true,
            vectors: false,
            refine_steps: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<Complex64>,
    /// `|A v - lambda v| / |v|` for the inverse-iteration vector of each value.
    pub residuals: Vec<f64>,
    pub vectors: Option<Vec<Vec<Complex64>>>,
}

/// Eigenvalues only, in deflation order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let opts = EigenOptions::default();
    let mut h = a.clone();
    square(&h)?;
    if opts.balance {
        balance(&mut h);
    }
    hessenberg(&mut h);
    hessenberg_qr(&mut h, opts.max_sweeps)
}

pub fn eigen(a: &ComplexMatrix, opts: &EigenOptions) -> Result<Eigensystem> {
    square(a)?;
    let mut h = a.clone();
    let scale = if opts.balance {
        balance(&mut h)
    } else {
        vec![1.0; a.nrows()]
    };
    let reflectors = hessenberg(&mut h);
    let hess = h.clone();
    let values = hessenberg_qr(&mut h, opts.max_sweeps)?;

    let mut residuals = Vec::with_capacity(values.len());
    let mut vectors = opts.vectors.then(|| Vec::with_capacity(values.len()));
    for &lambda in &values {
        let mut v = inverse_iteration(&hess, lambda, opts.refine_steps.max(1));
        for r in reflectors.iter().rev() {
            r.apply(&mut v);
        }
        for (vi, s) in v.iter_mut().zip(&scale) {
            *vi *= *s;
        }
        let nv = norm2(&v);
        for vi in v.iter_mut() {
            *vi /= nv;
        }
        let av = a.mul_vec(&v);
        let res: Vec<Complex64> = av.iter().zip(&v).map(|(x, y)| x - lambda * y).collect();
        residuals.push(norm2(&res));
        if let Some(vs) = vectors.as_mut() {
            vs.push(v);
        }
    }
    Ok(Eigensystem {
        values,
        residuals,
        vectors,
    })
}

fn square(a: &ComplexMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: a.ncols(),
        })
    }
}

/// Power-of-two diagonal similarity `D^-1 A D` equalizing row and column
/// norms. Returns `D`.
fn balance(a: &mut ComplexMatrix) -> Vec<f64> {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut d = vec![1.0; n];
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                changed = true;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    d
}

/// Hermitian reflector `I - 2 u u^H / (u^H u)` acting on indices
/// `offset..offset + u.len()`.
struct Reflector {
    offset: usize,
    u: Vec<Complex64>,
    factor: f64,
}

impl Reflector {
    fn apply(&self, v: &mut [Complex64]) {
        let tail = &mut v[self.offset..self.offset + self.u.len()];
        let s: Complex64 = self.u.iter().zip(tail.iter()).map(|(u, x)| u.conj() * x).sum();
        let s = s * self.factor;
        for (x, u) in tail.iter_mut().zip(&self.u) {
            *x -= u * s;
        }
    }
}

fn hessenberg(a: &mut ComplexMatrix) -> Vec<Reflector> {
    let n = a.nrows();
    let mut out = Vec::new();
    for j in 0..n.saturating_sub(2) {
        let off = j + 1;
        let tail_sq: f64 = (off + 1..n).map(|i| a[(i, j)].norm_sqr()).sum();
        if tail_sq == 0.0 {
            continue;
        }
        let alpha = a[(off, j)];
        let xnorm = crate::real::sqrt(alpha.norm_sqr() + tail_sq);
        let phase = if alpha == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            alpha / alpha.norm()
        };
        let mut u: Vec<Complex64> = (off..n).map(|i| a[(i, j)]).collect();
        u[0] += phase * xnorm;
        let beta = 2.0 * xnorm * (xnorm + alpha.norm());
        let factor = 2.0 / beta;

        for c in j..n {
            let s: Complex64 = (0..u.len()).map(|k| u[k].conj() * a[(off + k, c)]).sum();
            let s = s * factor;
            for k in 0..u.len() {
                a[(off + k, c)] -= u[k] * s;
            }
        }
        for r in 0..n {
            let s: Complex64 = (0..u.len()).map(|k| a[(r, off + k)] * u[k]).sum();
            let s = s * factor;
            for k in 0..u.len() {
                a[(r, off + k)] -= s * u[k].conj();
            }
        }
        a[(off, j)] = -phase * xnorm;
        for i in off + 1..n {
            a[(i, j)] = ZERO;
        }
        out.push(Reflector { offset: off, u, factor });
    }
    out
}

/// Rotation `[c s; -conj(s) c]` mapping `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    if f == ZERO {
        let gn = g.norm();
        return (0.0, g.conj() / gn, Complex64::new(gn, 0.0));
    }
    let fa = f.norm();
    let norm = hypot(fa, g.norm());
    let alpha = f / fa;
    (fa / norm, alpha * g.conj() / norm, alpha * norm)
}

fn wilkinson_shift(h: &ComplexMatrix, i: usize) -> Complex64 {
    let mut t = h[(i, i)];
    let u = h[(i - 1, i)].sqrt() * h[(i, i - 1)].sqrt();
    let mut s = abs1(u);
    if s != 0.0 {
        let x = (h[(i - 1, i - 1)] - t) * 0.5;
        let sx = abs1(x);
        s = s.max(sx);
        let xs = x / s;
        let us = u / s;
        let mut y = (xs * xs + us * us).sqrt() * s;
        if sx > 0.0 {
            let xn = x / sx;
            if xn.re * y.re + xn.im * y.im < 0.0 {
                y = -y;
            }
        }
        t -= u * (u / (x + y));
    }
    t
}

fn hessenberg_qr(h: &mut ComplexMatrix, max_sweeps: usize) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut w = vec![ZERO; n];
    if n == 0 {
        return Ok(w);
    }
    let ulp = f64::EPSILON;
    let safe_min = f64::MIN_POSITIVE * (n as f64 / ulp);
    let mut i = n - 1;
    loop {
        let mut sweeps = 0;
        loop {
            let mut l = i;
            while l > 0 {
                let sub = abs1(h[(l, l - 1)]);
                if sub <= safe_min {
                    break;
                }
                let mut tst = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
                if tst == 0.0 {
                    if l >= 2 {
                        tst += abs1(h[(l - 1, l - 2)]);
                    }
                    if l < i {
                        tst += abs1(h[(l + 1, l)]);
                    }
                }
                if sub <= ulp * tst {
                    break;
                }
                l -= 1;
            }
            if l > 0 {
                h[(l, l - 1)] = ZERO;
            }
            if l == i {
                w[i] = h[(i, i)];
                break;
            }
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::ConvergenceFailure {
                    index: i,
                    iterations: max_sweeps,
                });
            }
            let shift = match sweeps % 20 {
                10 => Complex64::new(0.75 * h[(l + 1, l)].re.abs(), 0.0) + h[(l, l)],
                0 => Complex64::new(0.75 * h[(i, i - 1)].re.abs(), 0.0) + h[(i, i)],
                _ => wilkinson_shift(h, i),
            };
            qr_sweep(h, l, i, shift);
        }
        if i == 0 {
            break;
        }
        i -= 1;
    }
    Ok(w)
}

/// One implicit single-shift QR step on the active block `l..=i`.
fn qr_sweep(h: &mut ComplexMatrix, l: usize, i: usize, shift: Complex64) {
    let mut x = h[(l, l)] - shift;
    let mut y = h[(l + 1, l)];
    for k in l..i {
        if k > l {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (c, s, r) = givens(x, y);
        if k > l {
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = ZERO;
        }
        for j in k..=i {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * c + s * b;
            h[(k + 1, j)] = -s.conj() * a + b * c;
        }
        for r in l..=(k + 2).min(i) {
            let a = h[(r, k)];
            let b = h[(r, k + 1)];
            h[(r, k)] = a * c + b * s.conj();
            h[(r, k + 1)] = -a * s + b * c;
        }
    }
}

/// Inverse iteration on a Hessenberg matrix. Tiny pivots are replaced by
/// `eps |H|` so an exact eigenvalue still yields a usable direction.
fn inverse_iteration(hess: &ComplexMatrix, lambda: Complex64, steps: usize) -> Vec<Complex64> {
    let n = hess.nrows();
    let hnorm = hess.norm_inf().max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * hnorm;
    let mut m = hess.shifted(lambda);
    let mut swapped = vec![false; n];
    for k in 0..n.saturating_sub(1) {
        if abs1(m[(k + 1, k)]) > abs1(m[(k, k)]) {
            for j in k..n {
                let a = m[(k, j)];
                m[(k, j)] = m[(k + 1, j)];
                m[(k + 1, j)] = a;
            }
            swapped[k] = true;
        }
        if abs1(m[(k, k)]) < tiny {
            m[(k, k)] = Complex64::new(tiny, 0.0);
        }
        let l = m[(k + 1, k)] / m[(k, k)];
        m[(k + 1, k)] = l;
        for j in k + 1..n {
            let u = m[(k, j)];
            m[(k + 1, j)] -= l * u;
        }
    }
    if abs1(m[(n - 1, n - 1)]) < tiny {
        m[(n - 1, n - 1)] = Complex64::new(tiny, 0.0);
    }

    // Deterministic start vector with no special symmetry.
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0, 0.0) + Complex64::new(0.0, 0.5) * ((i % 7) as f64 / 7.0))
        .collect();
    // Near a defective eigenvalue later iterates drift away from the
    // minimal residual reached after the first solve, so the best iterate
    // is kept rather than the last.
    let mut best = x.clone();
    let mut best_residual = f64::INFINITY;
    for _ in 0..steps {
        for k in 0..n.saturating_sub(1) {
            if swapped[k] {
                x.swap(k, k + 1);
            }
            let xk = x[k];
            x[k + 1] -= m[(k + 1, k)] * xk;
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..n {
                s -= m[(k, j)] * x[j];
            }
            x[k] = s / m[(k, k)];
        }
        let nx = norm2(&x);
        if !(nx.is_finite() && nx > 0.0) {
            break;
        }
        for xi in x.iter_mut() {
            *xi /= nx;
        }
        let hx = hess.mul_vec(&x);
        let r = norm2(&hx.iter().zip(&x).map(|(a, b)| a - lambda * b).collect::<Vec<_>>());
        if r < best_residual {
            best_residual = r;
            best.clone_from(&x);
        }
    }
    best
}
