//! Levi-Civita and velocity-deformed connections, torsion, Ricci tensors.

use super::MetricChart;
use crate::{Error, Mat3, Result, Vec3};

/// Dimension of every chart.
pub const DIM: usize = 3;
/// 2/(n−1).
const ALPHA: f64 = 2.0 / (DIM as f64 - 1.0);

/// Array T^k_{ij} indexed `[k][i][j]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tensor3(pub [[[f64; 3]; 3]; 3]);

pub type Christoffel = Tensor3;
pub type Torsion = Tensor3;

impl Tensor3 {
    pub fn zero() -> Self {
        Tensor3::default()
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize) -> f64) -> Self {
        Tensor3(std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| f(k, i, j)))))
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.0[k][i][j]
    }

    /// Σ_{ij} T^k_{ij} X^i Y^j.
    pub fn apply(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        Vec3::from_fn(|k, _| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += self.0[k][i][j] * x[i] * y[j];
                }
            }
            s
        })
    }

    /// Matrix Y ↦ T(X, Y).
    pub fn contract_first(&self, x: &Vec3) -> Mat3 {
        Mat3::from_fn(|k, j| (0..3).map(|i| self.0[k][i][j] * x[i]).sum())
    }

    pub fn add(&self, other: &Self) -> Self {
        Tensor3::from_fn(|k, i, j| self.0[k][i][j] + other.0[k][i][j])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Tensor3::from_fn(|k, i, j| self.0[k][i][j] - other.0[k][i][j])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn lower(g: &Mat3, v: &Vec3) -> Vec3 {
    g * v
}

fn lc_from(ginv: &Mat3, dg: &[Mat3; 3]) -> Christoffel {
    Tensor3::from_fn(|k, i, j| {
        (0..3)
            .map(|l| 0.5 * ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]))
            .sum()
    })
}

/// Γ^{0,k}_{ij} = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij).
pub fn christoffel_lc(chart: &MetricChart, x: &Vec3) -> Result<Christoffel> {
    let ginv = chart.g_inv(x)?;
    Ok(lc_from(&ginv, &chart.dg(x)))
}

/// ∂_c Γ^{0,k}_{ij}, indexed `[c]`.
pub fn christoffel_lc_derivative(chart: &MetricChart, x: &Vec3) -> Result<[Christoffel; 3]> {
    let ginv = chart.g_inv(x)?;
    let dg = chart.dg(x);
    let d2g = chart.d2g(x);
    Ok(std::array::from_fn(|c| {
        let dginv = -ginv * dg[c] * ginv;
        Tensor3::from_fn(|k, i, j| {
            (0..3)
                .map(|l| {
                    let a = dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)];
                    let da = d2g[c][i][(j, l)] + d2g[c][j][(i, l)] - d2g[c][l][(i, j)];
                    0.5 * (dginv[(k, l)] * a + ginv[(k, l)] * da)
                })
                .sum()
        })
    }))
}

/// −(2/(n−1))(δ_ki (gv)_j − g_ij v^k).
fn deformation(g: &Mat3, v: &Vec3) -> Tensor3 {
    let vl = g * v;
    Tensor3::from_fn(|k, i, j| {
        let delta = if k == i { 1.0 } else { 0.0 };
        -ALPHA * (delta * vl[j] - g[(i, j)] * v[k])
    })
}

/// Christoffel symbols of ∇^v.
pub fn christoffel_v(chart: &MetricChart, x: &Vec3, v: &Vec3) -> Result<Christoffel> {
    Ok(christoffel_lc(chart, x)?.add(&deformation(&chart.g(x), v)))
}

/// ∂_c Γ^k_{ij} of ∇^v for the field v with Jacobian `dv` at x.
pub fn christoffel_v_derivative(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<[Christoffel; 3]> {
    let dlc = christoffel_lc_derivative(chart, x)?;
    let g = chart.g(x);
    let dg = chart.dg(x);
    Ok(std::array::from_fn(|c| {
        let dvc = dv.column(c).into_owned();
        let dvl = dg[c] * v + g * dvc;
        let dd = Tensor3::from_fn(|k, i, j| {
            let delta = if k == i { 1.0 } else { 0.0 };
            -ALPHA * (delta * dvl[j] - dg[c][(i, j)] * v[k] - g[(i, j)] * dvc[k])
        });
        dlc[c].add(&dd)
    }))
}

/// (∇_X Y)^k = X^i ∂_i Y^k + Γ^k_{ij} X^i Y^j, with `dy[(k, i)] = ∂_i Y^k`.
pub fn covariant_derivative(gamma: &Christoffel, x: &Vec3, y: &Vec3, dy: &Mat3) -> Vec3 {
    dy * x + gamma.apply(x, y)
}

/// K_v(X,Y) = ⟨Y,v⟩X − ⟨X,Y⟩v.
pub fn k_v(g: &Mat3, v: &Vec3, x: &Vec3, y: &Vec3) -> Vec3 {
    x * y.dot(&(g * v)) - v * x.dot(&(g * y))
}

/// ∇⁰_X Y − (2/(n−1)) K_v(X,Y).
pub fn covariant_derivative_v_formula(
    chart: &MetricChart,
    at: &Vec3,
    v: &Vec3,
    x: &Vec3,
    y: &Vec3,
    dy: &Mat3,
) -> Result<Vec3> {
    let lc = christoffel_lc(chart, at)?;
    Ok(covariant_derivative(&lc, x, y, dy) - k_v(&chart.g(at), v, x, y) * ALPHA)
}

/// T^k_{ij} = Γ^k_{ij} − Γ^k_{ji}.
pub fn torsion_of(gamma: &Christoffel) -> Torsion {
    Tensor3::from_fn(|k, i, j| gamma.get(k, i, j) - gamma.get(k, j, i))
}

/// T^v(X,Y) = −(2/(n−1))(⟨Y,v⟩X − ⟨X,v⟩Y).
pub fn torsion_v(chart: &MetricChart, x: &Vec3, v: &Vec3) -> Result<Torsion> {
    chart.cholesky(x)?;
    let vl = chart.g(x) * v;
    Ok(Tensor3::from_fn(|k, a, b| {
        let da = if k == a { 1.0 } else { 0.0 };
        let db = if k == b { 1.0 } else { 0.0 };
        -ALPHA * (da * vl[b] - db * vl[a])
    }))
}

/// Ric(X) = Σ_i R(X, e_i) e_i for the connection Γ, as a (1,1) matrix.
///
/// R(∂_a,∂_b)∂_c = (∂_a Γ^k_{bc} − ∂_b Γ^k_{ac} + Γ^m_{bc} Γ^k_{am} − Γ^m_{ac} Γ^k_{bm}) ∂_k.
pub fn ricci_from_connection(gamma: &Christoffel, dgamma: &[Christoffel; 3], ginv: &Mat3) -> Mat3 {
    let mut ric = Mat3::zeros();
    for k in 0..3 {
        for a in 0..3 {
            let mut s = 0.0;
            for b in 0..3 {
                for c in 0..3 {
                    let w = ginv[(b, c)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut r = dgamma[a].get(k, b, c) - dgamma[b].get(k, a, c);
                    for m in 0..3 {
                        r += gamma.get(m, b, c) * gamma.get(k, a, m) - gamma.get(m, a, c) * gamma.get(k, b, m);
                    }
                    s += w * r;
                }
            }
            ric[(k, a)] = s;
        }
    }
    ric
}

/// Levi-Civita Ricci tensor as a (1,1) matrix.
pub fn ricci_lc(chart: &MetricChart, x: &Vec3) -> Result<Mat3> {
    let ginv = chart.g_inv(x)?;
    Ok(ricci_from_connection(&christoffel_lc(chart, x)?, &christoffel_lc_derivative(chart, x)?, &ginv))
}

pub fn scalar_curvature(chart: &MetricChart, x: &Vec3) -> Result<f64> {
    Ok(ricci_lc(chart, x)?.trace())
}

/// ∇⁰v as the matrix X ↦ ∇⁰_X v.
fn levi_civita_gradient(gamma0: &Christoffel, v: &Vec3, dv: &Mat3) -> Mat3 {
    Mat3::from_fn(|k, a| dv[(k, a)] + (0..3).map(|m| gamma0.get(k, a, m) * v[m]).sum::<f64>())
}

/// Ric^v from the closed expression in terms of Ric⁰, K_v, ∇⁰v and div v,
/// with the general-dimension coefficients.
pub fn ricci_v(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<Mat3> {
    let n = DIM as f64;
    let g = chart.g(x);
    let ric0 = ricci_lc(chart, x)?;
    let grad = levi_civita_gradient(&christoffel_lc(chart, x)?, v, dv);
    let vl = g * v;
    let kmat = Mat3::identity() * v.dot(&vl) - v * vl.transpose();
    Ok(ric0 - kmat * (4.0 * (n - 2.0) / ((n - 1.0) * (n - 1.0))) + grad * (2.0 * (n - 2.0) / (n - 1.0))
        + Mat3::identity() * (2.0 / (n - 1.0) * grad.trace()))
}

/// Three-dimensional form Ric⁰(X) − K_v(X,v) + ∇⁰_X v + div(v) X, assembled
/// column by column.
pub fn ricci_v_n3(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<Mat3> {
    let g = chart.g(x);
    let ric0 = ricci_lc(chart, x)?;
    let gamma0 = christoffel_lc(chart, x)?;
    let mut out = Mat3::zeros();
    let mut div = 0.0;
    for a in 0..3 {
        let e = Vec3::ith(a, 1.0);
        div += covariant_derivative(&gamma0, &e, v, dv)[a];
    }
    for a in 0..3 {
        let e = Vec3::ith(a, 1.0);
        let col = ric0 * e - k_v(&g, v, &e, v) + covariant_derivative(&gamma0, &e, v, dv) + e * div;
        out.set_column(a, &col);
    }
    Ok(out)
}

/// Ric^v by contracting the curvature of Γ^v directly.
pub fn ricci_v_curvature(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<Mat3> {
    let ginv = chart.g_inv(x)?;
    Ok(ricci_from_connection(&christoffel_v(chart, x, v)?, &christoffel_v_derivative(chart, x, v, dv)?, &ginv))
}

/// X ↦ Σ_i (∇^v_{e_i} T^v)(X, e_i) as a (1,1) matrix.
pub fn torsion_divergence(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<Mat3> {
    let ginv = chart.g_inv(x)?;
    let g = chart.g(x);
    let dg = chart.dg(x);
    let gamma = christoffel_v(chart, x, v)?;
    let t = torsion_v(chart, x, v)?;
    let mut out = Mat3::zeros();
    for c in 0..3 {
        let dvl = dg[c] * v + g * dv.column(c);
        // (∇_c T)^k_{ab}
        let nabla_t = Tensor3::from_fn(|k, a, b| {
            let da = if k == a { 1.0 } else { 0.0 };
            let db = if k == b { 1.0 } else { 0.0 };
            let mut s = -ALPHA * (da * dvl[b] - db * dvl[a]);
            for m in 0..3 {
                s += gamma.get(k, c, m) * t.get(m, a, b) - gamma.get(m, c, a) * t.get(k, m, b) - gamma.get(m, c, b) * t.get(k, a, m);
            }
            s
        });
        for k in 0..3 {
            for a in 0..3 {
                out[(k, a)] += (0..3).map(|b| ginv[(c, b)] * nabla_t.get(k, a, b)).sum::<f64>();
            }
        }
    }
    Ok(out)
}

/// Intrinsic Ricci tensor in both of its forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntrinsicRicci {
    /// Ric^v (from the curvature of Γ^v) plus the torsion divergence.
    pub assembled: Mat3,
    /// Ric⁰ + 2 v⊗v + 2∇^{0,s} v.
    pub closed_form: Mat3,
}

impl IntrinsicRicci {
    pub fn gap(&self) -> f64 {
        (self.assembled - self.closed_form).abs().max()
    }
}

/// 2∇^{0,s}v as the g-self-adjoint part of ∇⁰v, doubled.
fn twice_symmetric_gradient(g: &Mat3, ginv: &Mat3, grad: &Mat3) -> Mat3 {
    grad + ginv * grad.transpose() * g
}

pub fn intrinsic_ricci(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<IntrinsicRicci> {
    let g = chart.g(x);
    let ginv = chart.g_inv(x)?;
    let assembled = ricci_v_curvature(chart, x, v, dv)? + torsion_divergence(chart, x, v, dv)?;
    let grad = levi_civita_gradient(&christoffel_lc(chart, x)?, v, dv);
    let closed_form = ricci_lc(chart, x)? + v * (g * v).transpose() * 2.0 + twice_symmetric_gradient(&g, &ginv, &grad);
    Ok(IntrinsicRicci { assembled, closed_form })
}

/// Ric⁰ + (1/2ν²) u⊗u − (1/ν) ∇^{0,s} u.
pub fn intrinsic_ricci_t(chart: &MetricChart, x: &Vec3, u: &Vec3, du: &Mat3, nu: f64) -> Result<Mat3> {
    if !(nu > 0.0) {
        return Err(Error::param("nu", format!("{nu} must be positive")));
    }
    let g = chart.g(x);
    let ginv = chart.g_inv(x)?;
    let grad = levi_civita_gradient(&christoffel_lc(chart, x)?, u, du);
    Ok(ricci_lc(chart, x)? + u * (g * u).transpose() / (2.0 * nu * nu)
        - twice_symmetric_gradient(&g, &ginv, &grad) / (2.0 * nu))
}

/// Scal⁰ + |u|²/(2ν²), valid where div u = 0.
pub fn scalar_hat(chart: &MetricChart, x: &Vec3, u: &Vec3, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::param("nu", format!("{nu} must be positive")));
    }
    Ok(scalar_curvature(chart, x)? + u.dot(&(chart.g(x) * u)) / (2.0 * nu * nu))
}

/// All pointwise connection data for (chart, x, v, dv).
#[derive(Clone, Copy, Debug)]
pub struct ConnectionTensors {
    pub point: Vec3,
    pub gamma0: Christoffel,
    pub gamma_v: Christoffel,
    pub torsion: Torsion,
    pub ric0: Mat3,
    pub ric_v: Mat3,
    pub ric_hat: Mat3,
}

impl ConnectionTensors {
    pub fn at(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Result<Self> {
        Ok(ConnectionTensors {
            point: *x,
            gamma0: christoffel_lc(chart, x)?,
            gamma_v: christoffel_v(chart, x, v)?,
            torsion: torsion_v(chart, x, v)?,
            ric0: ricci_lc(chart, x)?,
            ric_v: ricci_v(chart, x, v, dv)?,
            ric_hat: intrinsic_ricci(chart, x, v, dv)?.closed_form,
        })
    }
}
