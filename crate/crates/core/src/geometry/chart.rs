use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::{Error, Mat3, Result, Vec3};

type MetricFn = dyn Fn(&Vec3) -> Mat3 + Send + Sync;
type DMetricFn = dyn Fn(&Vec3) -> [Mat3; 3] + Send + Sync;
type D2MetricFn = dyn Fn(&Vec3) -> [[Mat3; 3]; 3] + Send + Sync;

/// Smooth metric g_ij(x) on one chart, with optional analytic derivatives.
///
/// `dg(x)[k]` is ∂_k g and `d2g(x)[l][k]` is ∂_l ∂_k g. Missing derivatives
/// fall back to a 5-point central stencil with one Richardson step.
#[derive(Clone)]
pub struct MetricChart {
    name: String,
    metric: Arc<MetricFn>,
    dmetric: Option<Arc<DMetricFn>>,
    d2metric: Option<Arc<D2MetricFn>>,
    fd_step: f64,
    flat: bool,
}

impl fmt::Debug for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricChart")
            .field("name", &self.name)
            .field("analytic_derivatives", &self.has_analytic_derivatives())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

fn fd5<T>(f: impl Fn(f64) -> T, h: f64, combine: impl Fn(&[T; 4], f64) -> T) -> T {
    combine(&[f(2.0 * h), f(h), f(-h), f(-2.0 * h)], h)
}

fn stencil(v: &[Mat3; 4], h: f64) -> Mat3 {
    (-v[0] + v[1] * 8.0 - v[2] * 8.0 + v[3]) / (12.0 * h)
}

/// d/dt of a matrix-valued function at 0, 5-point stencil plus Richardson.
fn derivative(f: impl Fn(f64) -> Mat3, h: f64) -> Mat3 {
    let coarse = fd5(&f, h, stencil);
    let fine = fd5(&f, h / 2.0, stencil);
    (fine * 16.0 - coarse) / 15.0
}

impl MetricChart {
    pub fn new(name: impl Into<String>, metric: impl Fn(&Vec3) -> Mat3 + Send + Sync + 'static) -> Self {
        MetricChart { name: name.into(), metric: Arc::new(metric), dmetric: None, d2metric: None, fd_step: 1e-4, flat: false }
    }

    pub fn with_derivatives(
        mut self,
        dmetric: impl Fn(&Vec3) -> [Mat3; 3] + Send + Sync + 'static,
        d2metric: impl Fn(&Vec3) -> [[Mat3; 3]; 3] + Send + Sync + 'static,
    ) -> Self {
        self.dmetric = Some(Arc::new(dmetric));
        self.d2metric = Some(Arc::new(d2metric));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Same metric with derivatives taken by finite differences.
    pub fn without_analytic_derivatives(&self) -> Self {
        MetricChart { dmetric: None, d2metric: None, ..self.clone() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    /// True only for the Euclidean chart, letting callers skip curvature work.
    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.dmetric.is_some() && self.d2metric.is_some()
    }

    pub fn g(&self, x: &Vec3) -> Mat3 {
        (self.metric)(x)
    }

    /// Cholesky factor L of g = LLᵀ, or an error where g is not SPD.
    pub fn cholesky(&self, x: &Vec3) -> Result<Mat3> {
        let g = self.g(x);
        if !g.iter().all(|v| v.is_finite()) || (g - g.transpose()).abs().max() > 1e-12 * g.abs().max() {
            return Err(Error::NotPositiveDefinite { x: [x[0], x[1], x[2]] });
        }
        g.cholesky()
            .map(|c| c.l())
            .ok_or(Error::NotPositiveDefinite { x: [x[0], x[1], x[2]] })
    }

    pub fn g_inv(&self, x: &Vec3) -> Result<Mat3> {
        let l = self.cholesky(x)?;
        let linv = l.try_inverse().ok_or(Error::NotPositiveDefinite { x: [x[0], x[1], x[2]] })?;
        Ok(linv.transpose() * linv)
    }

    /// Orthonormal frame r (columns) with rᵀ g r = I, namely r = L⁻ᵀ.
    pub fn frame(&self, x: &Vec3) -> Result<Mat3> {
        let l = self.cholesky(x)?;
        let linv = l.try_inverse().ok_or(Error::NotPositiveDefinite { x: [x[0], x[1], x[2]] })?;
        Ok(linv.transpose())
    }

    pub fn dg(&self, x: &Vec3) -> [Mat3; 3] {
        if let Some(d) = &self.dmetric {
            return d(x);
        }
        let h = self.fd_step;
        std::array::from_fn(|k| derivative(|t| self.g(&(x + Vec3::ith(k, t))), h))
    }

    pub fn d2g(&self, x: &Vec3) -> [[Mat3; 3]; 3] {
        if let Some(d) = &self.d2metric {
            return d(x);
        }
        // FD of first derivatives; larger step for the nested difference
        let h = self.fd_step.max(1e-3);
        std::array::from_fn(|l| std::array::from_fn(|k| derivative(|t| self.dg(&(x + Vec3::ith(l, t)))[k], h)))
    }

    pub fn flat() -> Self {
        let mut chart = MetricChart::new("flat", |_| Mat3::identity())
            .with_derivatives(|_| [Mat3::zeros(); 3], |_| [[Mat3::zeros(); 3]; 3]);
        chart.flat = true;
        chart
    }

    /// g = e^{2φ}δ with φ = a·sin x.
    pub fn conformal(a: f64) -> Self {
        MetricChart::new(format!("conformal({a})"), move |x| Mat3::identity() * (2.0 * a * x[0].sin()).exp())
            .with_derivatives(
                move |x| {
                    let e = (2.0 * a * x[0].sin()).exp();
                    [Mat3::identity() * (2.0 * a * x[0].cos() * e), Mat3::zeros(), Mat3::zeros()]
                },
                move |x| {
                    let e = (2.0 * a * x[0].sin()).exp();
                    let (p1, p2) = (a * x[0].cos(), -a * x[0].sin());
                    let mut out = [[Mat3::zeros(); 3]; 3];
                    out[0][0] = Mat3::identity() * ((2.0 * p2 + 4.0 * p1 * p1) * e);
                    out
                },
            )
    }

    /// g = diag(1 + b·sin x, 1, 1).
    pub fn diagonal(b: f64) -> Self {
        let e11 = Mat3::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        MetricChart::new(format!("diagonal({b})"), move |x| {
            let mut g = Mat3::identity();
            g[(0, 0)] = 1.0 + b * x[0].sin();
            g
        })
        .with_derivatives(
            move |x| [e11 * (b * x[0].cos()), Mat3::zeros(), Mat3::zeros()],
            move |x| {
                let mut out = [[Mat3::zeros(); 3]; 3];
                out[0][0] = e11 * (-b * x[0].sin());
                out
            },
        )
    }

    /// Round unit 3-sphere in stereographic coordinates, g = 4/(1+|x|²)² δ.
    /// Not periodic: only meaningful near the origin.
    pub fn stereographic_sphere() -> Self {
        let f = |x: &Vec3| 4.0 / (1.0 + x.norm_squared()).powi(2);
        MetricChart::new("sphere", move |x| Mat3::identity() * f(x)).with_derivatives(
            move |x| {
                let s = 1.0 + x.norm_squared();
                std::array::from_fn(|k| Mat3::identity() * (-16.0 * x[k] / s.powi(3)))
            },
            move |x| {
                let s = 1.0 + x.norm_squared();
                std::array::from_fn(|l| {
                    std::array::from_fn(|k| {
                        let delta = if k == l { 1.0 } else { 0.0 };
                        Mat3::identity() * (-16.0 * delta / s.powi(3) + 96.0 * x[k] * x[l] / s.powi(4))
                    })
                })
            },
        )
    }

    /// g(x) = I + Σ_m A_m sin(k_m·x + φ_m) with random symmetric A_m,
    /// integer k_m and Σ‖A_m‖ ≤ `amplitude` < 1, so g stays SPD.
    pub fn random_periodic(rng: &mut impl Rng, amplitude: f64) -> Self {
        assert!(amplitude > 0.0 && amplitude < 1.0);
        let terms = 3;
        let mut modes = Vec::with_capacity(terms);
        for _ in 0..terms {
            let mut a = Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0));
            a = (a + a.transpose()) * 0.5;
            let norm = a.norm();
            a *= amplitude / (terms as f64 * norm);
            let k = loop {
                let k = Vec3::from_fn(|_, _| rng.random_range(-2i32..=2) as f64);
                if k.norm_squared() > 0.0 {
                    break k;
                }
            };
            let phase = rng.random_range(0.0..2.0 * PI);
            modes.push((a, k, phase));
        }
        let modes = Arc::new(modes);
        let (m1, m2, m3) = (modes.clone(), modes.clone(), modes);
        MetricChart::new("random", move |x| {
            m1.iter().fold(Mat3::identity(), |g, (a, k, p)| g + a * (k.dot(x) + p).sin())
        })
        .with_derivatives(
            move |x| {
                std::array::from_fn(|c| m2.iter().fold(Mat3::zeros(), |d, (a, k, p)| d + a * (k[c] * (k.dot(x) + p).cos())))
            },
            move |x| {
                std::array::from_fn(|l| {
                    std::array::from_fn(|c| {
                        m3.iter().fold(Mat3::zeros(), |d, (a, k, p)| d - a * (k[c] * k[l] * (k.dot(x) + p).sin()))
                    })
                })
            },
        )
    }
}
