//! Time-dependent velocity fields used as SDE drifts.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use crate::spectral::{strain, SpectralVectorField, SYM_PAIRS};
use crate::{Error, Mat3, Result, Vec3};

type VelocityFn = dyn Fn(f64, &Vec3) -> Vec3 + Send + Sync;
type StrainFn = dyn Fn(f64, &Vec3) -> Mat3 + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriftSource {
    Analytic,
    SpectralSnapshotInterpolated,
}

/// u_t(x) together with its rate of strain ∇^s u_t(x), both in chart
/// coordinates (the strain as the (1,1) matrix X ↦ ∇^s_X u).
#[derive(Clone)]
pub struct DriftField {
    velocity: Arc<VelocityFn>,
    strain: Arc<StrainFn>,
    source: DriftSource,
}

impl fmt::Debug for DriftField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriftField").field("source", &self.source).finish()
    }
}

impl DriftField {
    pub fn analytic(
        velocity: impl Fn(f64, &Vec3) -> Vec3 + Send + Sync + 'static,
        strain: impl Fn(f64, &Vec3) -> Mat3 + Send + Sync + 'static,
    ) -> Self {
        DriftField { velocity: Arc::new(velocity), strain: Arc::new(strain), source: DriftSource::Analytic }
    }

    pub fn zero() -> Self {
        Self::analytic(|_, _| Vec3::zeros(), |_, _| Mat3::zeros())
    }

    /// e^{−νt}·ABC(a, b, c), the exact Navier–Stokes solution from ABC data.
    pub fn decaying_abc(a: f64, b: f64, c: f64, nu: f64) -> Self {
        Self::analytic(
            move |t, x| abc_velocity(a, b, c, x) * (-nu * t).exp(),
            move |t, x| abc_strain(a, b, c, x) * (-nu * t).exp(),
        )
    }

    /// Spectral velocity snapshots at increasing times, interpolated
    /// trilinearly in space and linearly in time (clamped outside the range).
    pub fn from_snapshots(frames: &[(f64, SpectralVectorField)]) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::param("snapshots", "need at least one frame"));
        }
        let grid = *frames[0].1.grid();
        let mut table = Vec::with_capacity(frames.len());
        for (i, (t, u)) in frames.iter().enumerate() {
            if *u.grid() != grid {
                return Err(Error::GridMismatch { left: grid.n(), right: u.grid().n() });
            }
            if i > 0 && *t <= frames[i - 1].0 {
                return Err(Error::param("snapshots", "frame times must increase"));
            }
            u.require_divergence_free()?;
            let s = strain(u);
            table.push(Frame { time: *t, velocity: u.to_physical(), strain: s.components().clone() });
        }
        let table = Arc::new(SnapshotTable { n: grid.n(), frames: table });
        let (tv, ts) = (table.clone(), table);
        Ok(DriftField {
            velocity: Arc::new(move |t, x| tv.velocity(t, x)),
            strain: Arc::new(move |t, x| ts.strain(t, x)),
            source: DriftSource::SpectralSnapshotInterpolated,
        })
    }

    pub fn source(&self) -> DriftSource {
        self.source
    }

    pub fn velocity(&self, t: f64, x: &Vec3) -> Vec3 {
        (self.velocity)(t, x)
    }

    pub fn strain(&self, t: f64, x: &Vec3) -> Mat3 {
        (self.strain)(t, x)
    }
}

pub fn abc_velocity(a: f64, b: f64, c: f64, x: &Vec3) -> Vec3 {
    Vec3::new(a * x[2].sin() + c * x[1].cos(), b * x[0].sin() + a * x[2].cos(), c * x[1].sin() + b * x[0].cos())
}

/// Symmetric part of the ABC velocity gradient.
pub fn abc_strain(a: f64, b: f64, c: f64, x: &Vec3) -> Mat3 {
    // grad[(i, j)] = ∂_i u_j
    let grad = Mat3::new(
        0.0,
        b * x[0].cos(),
        -b * x[0].sin(),
        -c * x[1].sin(),
        0.0,
        c * x[1].cos(),
        a * x[2].cos(),
        -a * x[2].sin(),
        0.0,
    );
    (grad + grad.transpose()) * 0.5
}

struct Frame {
    time: f64,
    velocity: [Vec<f64>; 3],
    strain: [Vec<f64>; 6],
}

struct SnapshotTable {
    n: usize,
    frames: Vec<Frame>,
}

impl SnapshotTable {
    /// Bracketing frames and the weight of the later one.
    fn bracket(&self, t: f64) -> (usize, usize, f64) {
        let f = &self.frames;
        if t <= f[0].time || f.len() == 1 {
            return (0, 0, 0.0);
        }
        if t >= f[f.len() - 1].time {
            return (f.len() - 1, f.len() - 1, 0.0);
        }
        let hi = f.partition_point(|fr| fr.time <= t);
        let lo = hi - 1;
        (lo, hi, (t - f[lo].time) / (f[hi].time - f[lo].time))
    }

    /// Grid corners and trilinear weights around x.
    fn stencil(&self, x: &Vec3) -> [(usize, f64); 8] {
        let n = self.n;
        let h = TAU / n as f64;
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for d in 0..3 {
            let s = x[d].rem_euclid(TAU) / h;
            let i = s.floor();
            base[d] = (i as usize) % n;
            frac[d] = s - i;
        }
        std::array::from_fn(|c| {
            let (bx, by, bz) = (c & 1, (c >> 1) & 1, (c >> 2) & 1);
            let i = (base[0] + bx) % n;
            let j = (base[1] + by) % n;
            let k = (base[2] + bz) % n;
            let w = [bx, by, bz]
                .iter()
                .zip(frac)
                .map(|(&b, f)| if b == 1 { f } else { 1.0 - f })
                .product::<f64>();
            (i + n * (j + n * k), w)
        })
    }

    fn sample<const M: usize>(&self, t: f64, x: &Vec3, pick: impl Fn(&Frame) -> &[Vec<f64>; M]) -> [f64; M] {
        let st = self.stencil(x);
        let (lo, hi, w) = self.bracket(t);
        let at = |fr: &Frame| -> [f64; M] {
            let comps = pick(fr);
            std::array::from_fn(|c| st.iter().map(|&(idx, wt)| wt * comps[c][idx]).sum())
        };
        let a = at(&self.frames[lo]);
        if w == 0.0 {
            return a;
        }
        let b = at(&self.frames[hi]);
        std::array::from_fn(|c| (1.0 - w) * a[c] + w * b[c])
    }

    fn velocity(&self, t: f64, x: &Vec3) -> Vec3 {
        Vec3::from(self.sample(t, x, |f| &f.velocity))
    }

    fn strain(&self, t: f64, x: &Vec3) -> Mat3 {
        let s = self.sample(t, x, |f| &f.strain);
        let mut m = Mat3::zeros();
        for (slot, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            m[(i, j)] = s[slot];
            m[(j, i)] = s[slot];
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn abc_strain_matches_finite_differences() {
        let x = Vec3::new(0.3, 1.1, 2.0);
        let h = 1e-6;
        let grad = Mat3::from_fn(|i, j| {
            let e = Vec3::ith(i, h);
            (abc_velocity(1.0, 0.7, 0.4, &(x + e))[j] - abc_velocity(1.0, 0.7, 0.4, &(x - e))[j]) / (2.0 * h)
        });
        assert!(((grad + grad.transpose()) * 0.5 - abc_strain(1.0, 0.7, 0.4, &x)).abs().max() < 1e-9);
    }

    #[test]
    fn snapshot_drift_interpolates() {
        let grid = Grid::new(32).unwrap();
        let u0 = SpectralVectorField::from_fn(grid, |p| abc_velocity(1.0, 1.0, 1.0, &Vec3::from(p)).into());
        let u1 = u0.scale(0.5);
        let drift = DriftField::from_snapshots(&[(0.0, u0), (1.0, u1)]).unwrap();
        assert_eq!(drift.source(), DriftSource::SpectralSnapshotInterpolated);
        // at grid nodes the spatial interpolation is exact
        let node = Vec3::from(grid.point(grid.index(3, 5, 7)));
        let exact = abc_velocity(1.0, 1.0, 1.0, &node);
        assert!((drift.velocity(0.0, &node) - exact).norm() < 1e-12);
        assert!((drift.velocity(0.5, &node) - exact * 0.75).norm() < 1e-12);
        assert!((drift.velocity(3.0, &node) - exact * 0.5).norm() < 1e-12);
        // off-node error is second order in the spacing
        let x = Vec3::new(0.41, 2.93, 5.17);
        let err = (drift.velocity(0.0, &x) - abc_velocity(1.0, 1.0, 1.0, &x)).norm();
        let h = grid.dx();
        assert!(err < h * h, "{err}");
        let serr = (drift.strain(0.0, &x) - abc_strain(1.0, 1.0, 1.0, &x)).abs().max();
        assert!(serr < h * h);
        // periodic wrap
        assert!((drift.velocity(0.0, &(x + Vec3::new(TAU, -TAU, 2.0 * TAU))) - drift.velocity(0.0, &x)).norm() < 1e-12);
    }

    #[test]
    fn snapshot_drift_rejects_bad_input() {
        let grid = Grid::new(8).unwrap();
        let u = SpectralVectorField::zeros(grid);
        assert!(DriftField::from_snapshots(&[]).is_err());
        assert!(DriftField::from_snapshots(&[(1.0, u.clone()), (0.5, u.clone())]).is_err());
        let g = SpectralVectorField::from_fn(grid, |p| [p[0].sin(), 0.0, 0.0]);
        assert!(DriftField::from_snapshots(&[(0.0, g)]).is_err());
    }
}
