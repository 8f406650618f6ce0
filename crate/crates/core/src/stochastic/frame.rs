//! Frame-bundle SDE and resolvent transport along one path.

use crate::geometry::{christoffel_lc, MetricChart};
use crate::{Error, Mat3, Result, Vec3};

/// Position, orthonormal frame and resolvents along one path.
///
/// `x` is the lifted position in ℝ³ (not reduced modulo 2π); every chart
/// and drift in this crate is periodic, so `wrapped()` and `x` describe the
/// same torus point. `q2` acts on 2-vectors in the pair basis (12, 13, 23).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameState {
    pub x: Vec3,
    pub r: Mat3,
    pub q1: Mat3,
    pub q2: Mat3,
    pub time: f64,
}

impl FrameState {
    /// Starts at x with the Cholesky frame of g(x) and identity resolvents.
    pub fn start(chart: &MetricChart, x: Vec3) -> Result<Self> {
        Ok(FrameState { x, r: chart.frame(&x)?, q1: Mat3::identity(), q2: Mat3::identity(), time: 0.0 })
    }

    pub fn wrapped(&self) -> Vec3 {
        self.x.map(|c| c.rem_euclid(std::f64::consts::TAU))
    }

    /// max |rᵀ g r − I|.
    pub fn orthonormality_defect(&self, chart: &MetricChart) -> f64 {
        (self.r.transpose() * chart.g(&self.x) * self.r - Mat3::identity()).abs().max()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(self.r.iter()).chain(self.q1.iter()).chain(self.q2.iter()).all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FrameStep {
    pub state: FrameState,
    /// max |rᵀ g r − I| after transport, before re-orthonormalization.
    pub defect: f64,
}

/// Columns of r made orthonormal for the inner product g.
pub fn metric_gram_schmidt(r: &Mat3, g: &Mat3) -> Mat3 {
    let mut out = *r;
    for a in 0..3 {
        let mut col = r.column(a).into_owned();
        for b in 0..a {
            let prev = out.column(b).into_owned();
            col -= prev * (prev.dot(&(g * col)));
        }
        let norm = col.dot(&(g * col)).sqrt();
        out.set_column(a, &(col / norm));
    }
    out
}

/// One Stratonovich Euler–Heun step of
///   dx = √(2ν) r∘dW + b(s, x) ds,   de_a = −Γ(x)(∘dx, e_a),
/// where `drift` is b and the columns e_a of r are parallel transported
/// by the Levi-Civita connection along the step's chord. The frame is then
/// re-orthonormalized in the metric at the new point.
pub fn step_frame_sde(
    state: &FrameState,
    chart: &MetricChart,
    drift: impl Fn(f64, &Vec3) -> Vec3,
    dw: &Vec3,
    dt: f64,
    nu: f64,
) -> Result<FrameStep> {
    let sigma = (2.0 * nu).sqrt();
    let s0 = state.time;
    let next = if chart.is_flat() {
        let noise = state.r * dw * sigma;
        let b0 = drift(s0, &state.x);
        let pred = state.x + noise + b0 * dt;
        let x = state.x + noise + (b0 + drift(s0 + dt, &pred)) * (0.5 * dt);
        FrameStep { state: FrameState { x, time: s0 + dt, ..*state }, defect: 0.0 }
    } else {
        // Heun predictor-corrector for the position; the predictor frame
        // only enters through the noise term σ r̂ dW.
        let gamma0 = christoffel_lc(chart, &state.x)?;
        let dx0 = state.r * dw * sigma + drift(s0, &state.x) * dt;
        let r_pred = state.r + transport_rate(&gamma0, &dx0, &state.r);
        let x_pred = state.x + dx0;
        let dx1 = r_pred * dw * sigma + drift(s0 + dt, &x_pred) * dt;
        let x = state.x + (dx0 + dx1) * 0.5;
        let r = transport_along_chord(chart, &state.x, &x, &state.r, &gamma0)?;
        let g = chart.g(&x);
        let defect = (r.transpose() * g * r - Mat3::identity()).abs().max();
        FrameStep { state: FrameState { x, r: metric_gram_schmidt(&r, &g), time: s0 + dt, ..*state }, defect }
    };
    if !next.state.x.iter().chain(next.state.r.iter()).all(|v| v.is_finite()) {
        return Err(Error::NonFinite { what: "frame path", time: s0 + dt });
    }
    Ok(next)
}

/// −Γ(dx, e_a) for every column e_a of r.
fn transport_rate(gamma: &crate::geometry::Christoffel, dx: &Vec3, r: &Mat3) -> Mat3 {
    Mat3::from_columns(&[0, 1, 2].map(|a| -gamma.apply(dx, &r.column(a).into_owned())))
}

/// Parallel transport of r along the straight chord from `a` to `b`
/// (classical RK4 in the chord parameter). The Stratonovich frame equation
/// transports along the piecewise-linear path, so this is the same
/// equation solved more accurately than a second Heun stage would.
fn transport_along_chord(
    chart: &MetricChart,
    a: &Vec3,
    b: &Vec3,
    r: &Mat3,
    gamma_a: &crate::geometry::Christoffel,
) -> Result<Mat3> {
    let d = b - a;
    let gamma_mid = christoffel_lc(chart, &(a + d * 0.5))?;
    let gamma_b = christoffel_lc(chart, b)?;
    let k1 = transport_rate(gamma_a, &d, r);
    let k2 = transport_rate(&gamma_mid, &d, &(r + k1 * 0.5));
    let k3 = transport_rate(&gamma_mid, &d, &(r + k2 * 0.5));
    let k4 = transport_rate(&gamma_b, &d, &(r + k3));
    Ok(r + (k1 + k2 * 2.0 + k3 * 2.0 + k4) / 6.0)
}

/// Signed permutation taking pair-basis 2-vectors (12, 13, 23) to vectors
/// through the Hodge star: e₁∧e₂ ↦ e₃, e₁∧e₃ ↦ −e₂, e₂∧e₃ ↦ e₁.
fn star_pairs() -> Mat3 {
    Mat3::new(0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0)
}

/// Weitzenböck curvature on 2-vectors in three dimensions, ℛ₂ = *⁻¹ Ric *,
/// from the frame Ricci matrix.
pub fn weitzenbock_two(ric: &Mat3) -> Mat3 {
    let p = star_pairs();
    p.transpose() * ric * p
}

/// q ← q·(I + hJ + h²J²/2): explicit midpoint for dq/ds = q J with J frozen.
fn right_midpoint(q: &Mat3, j: &Mat3, dt: f64) -> Mat3 {
    let half = q + q * j * (0.5 * dt);
    q + half * j * dt
}

fn left_midpoint(q: &Mat3, a: &Mat3, dt: f64) -> Mat3 {
    let half = q + a * q * (0.5 * dt);
    q + a * half * dt
}

/// Resolvent step dq₁/ds = q₁(K − ν ric), with K and ric already expressed
/// in the frame. q₂ follows dq₂/ds = −ν q₂ ℛ₂ (identity on flat charts).
pub fn step_resolvent(state: &FrameState, k: &Mat3, ric: &Mat3, nu: f64, dt: f64) -> FrameState {
    let j = k - ric * nu;
    let j2 = weitzenbock_two(ric) * -nu;
    FrameState { q1: right_midpoint(&state.q1, &j, dt), q2: right_midpoint(&state.q2, &j2, dt), ..*state }
}

/// Heat-semigroup resolvents dQ̂ᵖ/dt = −½ ℛ̂_p Q̂ᵖ for p = 1, 2.
pub fn step_heat_resolvent(state: &FrameState, ric: &Mat3, dt: f64) -> FrameState {
    let a1 = ric * -0.5;
    let a2 = weitzenbock_two(ric) * -0.5;
    FrameState { q1: left_midpoint(&state.q1, &a1, dt), q2: left_midpoint(&state.q2, &a2, dt), ..*state }
}

/// K_ij = ⟨∇^s_{rε_i}u, rε_j⟩ from the (1,1) strain S: K = rᵀ g S r.
pub fn frame_strain(r: &Mat3, g: &Mat3, s: &Mat3) -> Mat3 {
    r.transpose() * g * s * r
}

/// ric_r = r⁻¹ Ric r, using r⁻¹ = rᵀ g for orthonormal frames.
pub fn frame_ricci(r: &Mat3, g: &Mat3, ric: &Mat3) -> Mat3 {
    r.transpose() * g * ric * r
}
