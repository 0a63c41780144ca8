//! Banded LU factorization with partial pivoting.
//!
//! Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl`
//! superdiagonals hold the fill-in created by row interchanges.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    /// Adds `value` at `(i, j)`; `j` must lie within the declared band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band"
        );
        let s = self.slot(i, j);
        self.data[s] += value;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    /// `y = A x` using the unfactored matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factors in place and returns the LU factors.
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let kl = self.kl;
        let upper = self.ku + kl;
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut pivots = vec![0usize; n];
        let mut lower = vec![0.0; n * kl.max(1)];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > scale * 1e-15) {
                return Err(Error::Singular(format!("zero pivot in column {k}")));
            }
            pivots[k] = p;
            let last_col = (k + upper).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a = self.slot(k, j);
                    let b = self.slot(p, j);
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for (r, i) in (k + 1..=last_row).enumerate() {
                let sik = self.slot(i, k);
                let factor = self.data[sik] / pivot;
                self.data[sik] = 0.0;
                lower[k * kl + r] = factor;
                if factor != 0.0 {
                    for j in k + 1..=last_col {
                        let skj = self.slot(k, j);
                        let sij = self.slot(i, j);
                        self.data[sij] -= factor * self.data[skj];
                    }
                }
            }
        }
        Ok(BandLu {
            band: self,
            lower,
            pivots,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    band: BandMatrix,
    lower: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.band.n;
        let kl = self.band.kl;
        let upper = self.band.ku + kl;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let last_row = (k + kl).min(n - 1);
            for (r, i) in (k + 1..=last_row).enumerate() {
                x[i] -= self.lower[k * kl + r] * x[k];
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + upper).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=last_col {
                s -= self.band.data[self.band.slot(k, j)] * x[j];
            }
            x[k] = s / self.band.data[self.band.slot(k, k)];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("banded solve"));
        }
        Ok(x)
    }
}
