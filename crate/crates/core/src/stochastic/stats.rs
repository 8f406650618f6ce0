//! Monte Carlo configuration and order-independent reductions.

use rayon::prelude::*;

use crate::{Error, Result, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SdeScheme {
    #[default]
    EulerHeun,
}

impl std::str::FromStr for SdeScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler_heun" => Ok(SdeScheme::EulerHeun),
            other => Err(Error::param("scheme", format!("unknown SDE scheme `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    pub paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub nu: f64,
    pub scheme: SdeScheme,
}

impl McConfig {
    pub fn new(paths: usize, dt: f64, seed: u64, nu: f64) -> Result<Self> {
        let cfg = McConfig { paths, dt, seed, nu, scheme: SdeScheme::EulerHeun };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::param("mc.paths", "need at least one path"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("mc.dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::param("nu", format!("must be positive, got {}", self.nu)));
        }
        Ok(())
    }

    pub fn with_paths(self, paths: usize) -> Self {
        McConfig { paths, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        McConfig { seed, ..self }
    }

    /// Number of steps covering [0, t] and the matching step size.
    pub fn steps_for(&self, t: f64) -> (usize, f64) {
        let n = (t / self.dt).round().max(1.0) as usize;
        (n, t / n as f64)
    }
}

/// Sample mean of a vector-valued estimator with componentwise standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: Vec3,
    pub stderr: Vec3,
    pub paths: usize,
    pub exploded: usize,
}

impl McEstimate {
    /// |mean − target| ≤ k·‖stderr‖, both in the Euclidean norm.
    pub fn agrees_with(&self, target: &Vec3, k: f64) -> bool {
        (self.mean - target).norm() <= k * self.stderr.norm()
    }

    /// Componentwise |mean_i − target_i| ≤ k·stderr_i.
    pub fn agrees_componentwise(&self, target: &Vec3, k: f64) -> bool {
        (0..3).all(|i| (self.mean[i] - target[i]).abs() <= k * self.stderr[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub paths: usize,
    pub exploded: usize,
}

impl ScalarEstimate {
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Pairwise (cascade) sum; the association order depends only on the length.
pub fn pairwise_sum<T>(xs: &[T], zero: T, add: &impl Fn(T, T) -> T) -> T
where
    T: Copy,
{
    if xs.len() <= 8 {
        return xs.iter().fold(zero, |a, &b| add(a, b));
    }
    let mid = xs.len() / 2;
    add(pairwise_sum(&xs[..mid], zero, add), pairwise_sum(&xs[mid..], zero, add))
}

/// Runs `path(i)` for every path index in parallel and reduces the finite
/// results. Non-finite or failed paths count as exploded; more than 0.1%
/// of them is an error.
pub fn run_paths<F>(paths: usize, path: F) -> Result<(Vec<Vec3>, usize)>
where
    F: Fn(u64) -> Option<Vec3> + Sync,
{
    let results: Vec<Option<Vec3>> = (0..paths as u64).into_par_iter().map(&path).collect();
    let mut ok = Vec::with_capacity(paths);
    let mut exploded = 0;
    for r in results {
        match r {
            Some(v) if v.iter().all(|c| c.is_finite()) => ok.push(v),
            _ => exploded += 1,
        }
    }
    if exploded * 1000 > paths {
        return Err(Error::PathExplosion { exploded, paths });
    }
    if ok.is_empty() {
        return Err(Error::PathExplosion { exploded, paths });
    }
    Ok((ok, exploded))
}

pub fn vector_estimate(samples: &[Vec3], exploded: usize) -> McEstimate {
    let n = samples.len() as f64;
    let mean = pairwise_sum(samples, Vec3::zeros(), &|a, b| a + b) / n;
    let centered: Vec<Vec3> = samples.iter().map(|s| (s - mean).component_mul(&(s - mean))).collect();
    let var = if samples.len() > 1 {
        pairwise_sum(&centered, Vec3::zeros(), &|a, b| a + b) / (n - 1.0)
    } else {
        Vec3::zeros()
    };
    McEstimate { mean, stderr: var.map(|v| (v / n).sqrt()), paths: samples.len(), exploded }
}

pub fn scalar_estimate(samples: &[f64], exploded: usize) -> ScalarEstimate {
    let n = samples.len() as f64;
    let mean = pairwise_sum(samples, 0.0, &|a, b| a + b) / n;
    let centered: Vec<f64> = samples.iter().map(|s| (s - mean) * (s - mean)).collect();
    let var = if samples.len() > 1 { pairwise_sum(&centered, 0.0, &|a, b| a + b) / (n - 1.0) } else { 0.0 };
    ScalarEstimate { mean, stderr: (var / n).sqrt(), paths: samples.len(), exploded }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs, 0.0, &|a, b| a + b), 500_500.0);
    }

    #[test]
    fn estimate_of_known_samples() {
        let s = [Vec3::new(1.0, 0.0, 2.0), Vec3::new(3.0, 0.0, 2.0)];
        let e = vector_estimate(&s, 0);
        assert_eq!(e.mean, Vec3::new(2.0, 0.0, 2.0));
        // sample variance 2, stderr sqrt(2/2)
        assert!((e.stderr[0] - 1.0).abs() < 1e-15);
        assert_eq!(e.stderr[1], 0.0);
    }

    #[test]
    fn explosion_threshold() {
        let r = run_paths(2000, |i| if i < 2 { None } else { Some(Vec3::zeros()) }).unwrap();
        assert_eq!(r.1, 2);
        let r = run_paths(2000, |i| if i < 3 { Some(Vec3::new(f64::NAN, 0.0, 0.0)) } else { Some(Vec3::zeros()) });
        assert!(matches!(r, Err(Error::PathExplosion { exploded: 3, paths: 2000 })));
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(0, 0.1, 1, 1.0).is_err());
        assert!(McConfig::new(10, 0.0, 1, 1.0).is_err());
        assert!(McConfig::new(10, 0.1, 1, -1.0).is_err());
        let c = McConfig::new(10, 0.03, 1, 1.0).unwrap();
        let (n, h) = c.steps_for(0.1);
        assert_eq!(n, 3);
        assert!((h * 3.0 - 0.1).abs() < 1e-15);
    }
}
