//! Exterior algebra at a point in an oriented orthonormal frame of ℝ³.
//!
//! Components are stored for increasing index tuples only: degree 1 as
//! (1, 2, 3), degree 2 as (12, 13, 23), degree 3 as (123).

use crate::{Error, Mat3, Result, Vec3};

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormValue {
    degree: usize,
    components: Vec<f64>,
}

fn count(degree: usize) -> usize {
    match degree {
        0 | 3 => 1,
        _ => 3,
    }
}

/// Sign of the permutation sorting `idx`, or 0 when an index repeats.
fn sort_sign(idx: &mut [usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] == idx[j + 1] {
                return 0.0;
            }
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0.0
    } else {
        sign
    }
}

impl FormValue {
    pub fn new(degree: usize, components: Vec<f64>) -> Result<Self> {
        if degree > 3 {
            return Err(Error::FormDegree { degree });
        }
        if components.len() != count(degree) {
            return Err(Error::param("components", format!("degree {degree} needs {} entries", count(degree))));
        }
        Ok(FormValue { degree, components })
    }

    pub fn zero(degree: usize) -> Result<Self> {
        Self::new(degree, vec![0.0; count(degree.min(3))])
    }

    pub fn scalar(c: f64) -> Self {
        FormValue { degree: 0, components: vec![c] }
    }

    pub fn one_form(a: Vec3) -> Self {
        FormValue { degree: 1, components: vec![a[0], a[1], a[2]] }
    }

    /// β = b12 e¹∧e² + b13 e¹∧e³ + b23 e²∧e³.
    pub fn two_form(b12: f64, b13: f64, b23: f64) -> Self {
        FormValue { degree: 2, components: vec![b12, b13, b23] }
    }

    pub fn volume(c: f64) -> Self {
        FormValue { degree: 3, components: vec![c] }
    }

    /// 2-form with B_ij = β(e_i, e_j); only the upper triangle is read.
    pub fn from_matrix(b: &Mat3) -> Self {
        Self::two_form(b[(0, 1)], b[(0, 2)], b[(1, 2)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// β(e_{i_1}, …, e_{i_p}) for any index tuple.
    pub fn eval(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.degree);
        let mut sorted = idx.to_vec();
        let sign = sort_sign(&mut sorted);
        if sign == 0.0 {
            return 0.0;
        }
        let slot = match self.degree {
            0 | 3 => 0,
            1 => sorted[0],
            _ => PAIRS.iter().position(|&p| p == (sorted[0], sorted[1])).expect("sorted pair"),
        };
        sign * self.components[slot]
    }

    /// Antisymmetric matrix B_ij = β(e_i, e_j) of a 2-form.
    pub fn to_matrix(&self) -> Result<Mat3> {
        if self.degree != 2 {
            return Err(Error::FormDegree { degree: self.degree });
        }
        Ok(Mat3::from_fn(|i, j| self.eval(&[i, j])))
    }

    pub fn as_vector(&self) -> Result<Vec3> {
        if self.degree != 1 {
            return Err(Error::FormDegree { degree: self.degree });
        }
        Ok(Vec3::new(self.components[0], self.components[1], self.components[2]))
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::FormDegree { degree: other.degree });
        }
        Ok(FormValue {
            degree: self.degree,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, a: f64) -> Self {
        FormValue { degree: self.degree, components: self.components.iter().map(|v| v * a).collect() }
    }

    fn ordered_tuples(degree: usize) -> Vec<Vec<usize>> {
        match degree {
            0 => vec![vec![]],
            1 => vec![vec![0], vec![1], vec![2]],
            2 => PAIRS.iter().map(|&(a, b)| vec![a, b]).collect(),
            _ => vec![vec![0, 1, 2]],
        }
    }
}

/// (β⨼T)(X_1,…,X_p) = Σ_s β(X_1,…,T X_s,…,X_p), with `t[(m, i)]` the
/// m-th component of T e_i.
pub fn contract_form(beta: &FormValue, t: &Mat3) -> Result<FormValue> {
    if beta.degree == 0 {
        return Err(Error::FormDegree { degree: 0 });
    }
    let components = FormValue::ordered_tuples(beta.degree)
        .into_iter()
        .map(|tuple| {
            let mut s = 0.0;
            for slot in 0..tuple.len() {
                for m in 0..3 {
                    let mut idx = tuple.clone();
                    idx[slot] = m;
                    s += t[(m, tuple[slot])] * beta.eval(&idx);
                }
            }
            s
        })
        .collect();
    FormValue::new(beta.degree, components)
}

/// Hodge star in an orthonormal frame; `Negative` flips the orientation.
pub fn hodge_star(beta: &FormValue, orientation: Orientation) -> FormValue {
    let s = orientation.sign();
    let c = &beta.components;
    let (degree, components) = match beta.degree {
        0 => (3, vec![s * c[0]]),
        1 => (2, vec![s * c[2], -s * c[1], s * c[0]]),
        2 => (1, vec![s * c[2], -s * c[1], s * c[0]]),
        _ => (0, vec![s * c[0]]),
    };
    FormValue { degree, components }
}

/// Largest component of (dũ)⨼∇^{sk}u for a velocity gradient
/// `grad[(i, j)] = ∂_i u_j`. Vanishes identically.
pub fn skew_contraction_residual(grad: &Mat3) -> f64 {
    let du = FormValue::from_matrix(&(grad - grad.transpose()));
    // ∇_X u has components X^i ∂_i u_j, so the operator matrix is gradᵀ
    let skew = (grad.transpose() - grad) * 0.5;
    contract_form(&du, &skew).expect("degree 2").max_abs()
}

/// Largest component of *(ω⨼S) + (*ω)⨼S for a 2-form ω and a trace-free
/// symmetric S. Vanishes in three dimensions.
pub fn star_strain_residual(omega: &FormValue, s: &Mat3) -> Result<f64> {
    if omega.degree != 2 {
        return Err(Error::FormDegree { degree: omega.degree });
    }
    let lhs = hodge_star(&contract_form(omega, s)?, Orientation::Positive);
    let rhs = contract_form(&hodge_star(omega, Orientation::Positive), s)?.scale(-1.0);
    Ok(lhs.sub(&rhs)?.max_abs())
}
