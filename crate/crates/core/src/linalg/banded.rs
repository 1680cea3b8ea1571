use alloc::vec;
use alloc::vec::Vec;

use super::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};
use crate::real::abs1;
use crate::Complex64;

/// Square matrix with `kl` sub- and `ku` super-diagonals, stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![ZERO; n * (kl + ku + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            ZERO
        }
    }

    /// # Panics
    /// If `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside the band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    fn row_range(&self, i: usize) -> core::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| abs1(self.get(i, j))).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in self.row_range(i) {
                m[(i, j)] = self.get(i, j);
            }
        }
        m
    }
}

/// LU factorization with partial pivoting of a matrix with `kl` sub- and
/// `ku` super-diagonals.
///
/// Row `i` is stored over columns `i - kl ..= i + kl + ku`, which leaves room
/// for the fill-in produced by row interchanges. Multipliers are kept in
/// place and the interchanges are replayed during the solve.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    band: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    /// Factors the band of `a`. Entries outside the band are ignored.
    pub fn factor(a: &ComplexMatrix, kl: usize, ku: usize) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                actual: a.ncols(),
            });
        }
        let n = a.nrows();
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            band: vec![ZERO; n * width],
            pivots: vec![0; n],
        };
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n.saturating_sub(1));
            for j in lo..=hi {
                *lu.at_mut(i, j) = a[(i, j)];
            }
        }
        let scale = a.norm_inf();
        lu.eliminate(scale)?;
        Ok(lu)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.band[self.slot(i, j)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        let s = self.slot(i, j);
        &mut self.band[s]
    }

    fn eliminate(&mut self, scale: f64) -> Result<()> {
        let n = self.n;
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + self.kl + self.ku).min(n - 1);
            let mut p = k;
            let mut best = abs1(self.at(k, k));
            for r in k + 1..=last_row {
                let v = abs1(self.at(r, k));
                if v > best {
                    best = v;
                    p = r;
                }
            }
            self.pivots[k] = p;
            if best <= tiny {
                return Err(Error::SingularSystem { pivot: k });
            }
            if p != k {
                for j in k..=last_col {
                    let a = self.slot(k, j);
                    let b = self.slot(p, j);
                    self.band.swap(a, b);
                }
            }
            let pivot = self.at(k, k);
            for r in k + 1..=last_row {
                let l = self.at(r, k) / pivot;
                *self.at_mut(r, k) = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..=last_col {
                    let u = self.at(k, j);
                    *self.at_mut(r, j) -= l * u;
                }
            }
        }
        Ok(())
    }

    pub fn factor_banded(a: &BandedMatrix) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            band: vec![ZERO; n * width],
            pivots: vec![0; n],
        };
        for i in 0..n {
            for j in a.row_range(i) {
                *lu.at_mut(i, j) = a.get(i, j);
            }
        }
        lu.eliminate(a.norm_inf())?;
        Ok(lu)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [Complex64]) -> Result<()> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: x.len(),
            });
        }
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for r in k + 1..=(k + self.kl).min(n - 1) {
                x[r] -= self.at(r, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.at(k, j) * x[j];
            }
            x[k] = s / self.at(k, k);
        }
        Ok(())
    }
}
