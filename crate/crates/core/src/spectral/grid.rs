use std::f64::consts::PI;

use crate::{Error, Result};

/// Uniform N³ grid on [0,2π)³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    dealias_fraction: f64,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_dealias(n, 2.0 / 3.0)
    }

    pub fn with_dealias(n: usize, dealias_fraction: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n = {n} must be even and at least 4")));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias fraction {dealias_fraction} outside (0, 1]"
            )));
        }
        Ok(Grid { n, dealias_fraction })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points, n³.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        2.0 * PI
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.coords(idx);
        let h = self.dx();
        [i as f64 * h, j as f64 * h, k as f64 * h]
    }

    /// Signed integer wavenumber of storage slot `m`, in −n/2+1 … n/2.
    pub fn wavenumber(&self, m: usize) -> i64 {
        if m <= self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Wavenumber used by derivatives: the Nyquist slot maps to zero.
    pub fn deriv_wavenumber(&self, m: usize) -> f64 {
        if m == self.n / 2 {
            0.0
        } else {
            self.wavenumber(m) as f64
        }
    }

    pub fn int_wavevector(&self, idx: usize) -> [i64; 3] {
        let [i, j, k] = self.coords(idx);
        [self.wavenumber(i), self.wavenumber(j), self.wavenumber(k)]
    }

    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.coords(idx);
        [self.deriv_wavenumber(i), self.deriv_wavenumber(j), self.deriv_wavenumber(k)]
    }

    /// Storage index of −k.
    pub fn neg_index(&self, idx: usize) -> usize {
        let n = self.n;
        let [i, j, k] = self.coords(idx);
        self.index((n - i) % n, (n - j) % n, (n - k) % n)
    }

    /// Whether the mode survives the dealiasing cutoff.
    pub fn keeps(&self, idx: usize) -> bool {
        self.coords(idx).iter().all(|&m| self.keeps_slot(m))
    }

    /// Whether storage slot `m` along one axis is inside the cutoff.
    pub fn keeps_slot(&self, m: usize) -> bool {
        let cut = self.dealias_fraction * (self.n / 2) as f64;
        (self.wavenumber(m).unsigned_abs() as f64) <= cut
    }

    /// Dealiasing mask in storage order.
    pub fn keep_mask(&self) -> Vec<bool> {
        let n = self.n;
        let axis: Vec<bool> = (0..n).map(|m| self.keeps_slot(m)).collect();
        let mut out = Vec::with_capacity(self.len());
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    out.push(axis[i] && axis[j] && axis[k]);
                }
            }
        }
        out
    }

    /// Calls `f(idx, k)` for every mode with the derivative wavevector.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [f64; 3])) {
        let n = self.n;
        let kd: Vec<f64> = (0..n).map(|m| self.deriv_wavenumber(m)).collect();
        let mut idx = 0;
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    f(idx, [kd[i], kd[j], kd[k]]);
                    idx += 1;
                }
            }
        }
    }

    /// Derivative wavevectors for all modes, in storage order.
    pub fn wavevectors(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each_mode(|_, k| out.push(k));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(3).is_err());
        assert!(Grid::new(2).is_err());
        assert!(Grid::new(7).is_err());
        assert!(Grid::with_dealias(8, 0.0).is_err());
        assert!(Grid::with_dealias(8, 1.5).is_err());
        assert!(Grid::new(4).is_ok());
    }

    #[test]
    fn wavenumber_layout() {
        let g = Grid::new(8).unwrap();
        let ks: Vec<i64> = (0..8).map(|m| g.wavenumber(m)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.deriv_wavenumber(4), 0.0);
        let idx = g.index(1, 2, 7);
        assert_eq!(g.coords(idx), [1, 2, 7]);
        assert_eq!(g.int_wavevector(g.neg_index(idx)), [-1, -2, 1]);
    }

    #[test]
    fn dealias_cutoff() {
        let g = Grid::new(12).unwrap();
        // cutoff = 2/3 * 6 = 4
        assert!(g.keeps(g.index(4, 0, 0)));
        assert!(!g.keeps(g.index(5, 0, 0)));
        assert!(g.keeps(g.index(0, 0, 8)));
        assert!(!g.keeps(g.index(0, 0, 7)));
    }
}
