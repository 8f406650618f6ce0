use num_complex::Complex64;

use super::fused::coupled_nonlinear;
use super::rhs::mollified_nonlinear;
use super::{FlowState, FluidParams, Scheme};
use crate::spectral::{curl, leray_project, SpectralVectorField};
use crate::{Error, Result};

fn k2(k: [f64; 3]) -> f64 {
    k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
}

type Fields = Vec<SpectralVectorField>;

/// Σ c_i·t_i(k)·f_i(k) over (field, coefficient, optional per-mode factor).
fn combine(parts: &[(&SpectralVectorField, f64, Option<&[f64]>)]) -> SpectralVectorField {
    let grid = *parts[0].0.grid();
    let coeffs = std::array::from_fn(|c| {
        let mut out = vec![Complex64::default(); grid.len()];
        for &(f, a, table) in parts {
            let src = f.component(c);
            match table {
                Some(t) => {
                    for ((o, z), w) in out.iter_mut().zip(src).zip(t) {
                        *o += z * (a * w);
                    }
                }
                None => {
                    for (o, z) in out.iter_mut().zip(src) {
                        *o += z * a;
                    }
                }
            }
        }
        out
    });
    SpectralVectorField::from_parts(grid, coeffs)
}

/// One integrating-factor RK4 step of dX/dt = L X + N(X) with L diagonal:
/// `decay(k, h)` is e^{hL(k)}.
fn if_rk4(
    x: &[SpectralVectorField],
    h: f64,
    decay: &dyn Fn([f64; 3], f64) -> f64,
    nonlinear: &dyn Fn(&[SpectralVectorField]) -> Result<Fields>,
) -> Result<Fields> {
    let grid = *x[0].grid();
    let mut half = Vec::with_capacity(grid.len());
    let mut full = Vec::with_capacity(grid.len());
    grid.for_each_mode(|_, k| {
        half.push(decay(k, h / 2.0));
        full.push(decay(k, h));
    });
    let (half, full) = (Some(half.as_slice()), Some(full.as_slice()));
    let stage = |f: &dyn Fn(usize) -> SpectralVectorField| -> Fields { (0..x.len()).map(f).collect() };

    let a = nonlinear(x)?;
    let xa = stage(&|i| combine(&[(&x[i], 1.0, half), (&a[i], h / 2.0, half)]));
    let b = nonlinear(&xa)?;
    let xb = stage(&|i| combine(&[(&x[i], 1.0, half), (&b[i], h / 2.0, None)]));
    let c = nonlinear(&xb)?;
    let xc = stage(&|i| combine(&[(&x[i], 1.0, full), (&c[i], h, half)]));
    let d = nonlinear(&xc)?;
    Ok(stage(&|i| {
        combine(&[
            (&x[i], 1.0, full),
            (&a[i], h / 6.0, full),
            (&b[i], h / 3.0, half),
            (&c[i], h / 3.0, half),
            (&d[i], h / 6.0, None),
        ])
    }))
}

/// Advances u and ξ by one time step.
pub fn step(state: &FlowState, params: &FluidParams) -> Result<FlowState> {
    params.validate()?;
    let nu = params.nu;
    let h = params.dt;
    let (u, xi) = match params.scheme {
        Scheme::IfRk4 => {
            let decay = move |k: [f64; 3], t: f64| (-nu * k2(k) * t).exp();
            let nonlinear = |x: &[SpectralVectorField]| -> Result<Fields> {
                let (nu, nxi) = coupled_nonlinear(&x[0], &x[1])?;
                Ok(vec![nu, nxi])
            };
            let mut next = if_rk4(&[state.u.clone(), state.xi.clone()], h, &decay, &nonlinear)?;
            let xi = leray_project(&next.pop().expect("two fields"));
            let u = leray_project(&next.pop().expect("two fields"));
            (u, xi)
        }
        Scheme::Mollified => {
            let eps = params.epsilon;
            let decay = move |k: [f64; 3], t: f64| (-nu * k2(k) * (-eps * k2(k)).exp() * t).exp();
            let nonlinear = |x: &[SpectralVectorField]| -> Result<Fields> { Ok(vec![mollified_nonlinear(&x[0], eps)?]) };
            let next = if_rk4(std::slice::from_ref(&state.u), h, &decay, &nonlinear)?;
            let u = leray_project(&next[0]);
            let xi = curl(&u);
            (u, xi)
        }
    };
    let time = state.time + h;
    if !u.is_finite() {
        return Err(Error::NonFinite { what: "velocity", time });
    }
    if !xi.is_finite() {
        return Err(Error::NonFinite { what: "vorticity", time });
    }
    Ok(FlowState { time, u, xi })
}

/// Steps from `initial` to `params.t_end`, calling `observe` on the initial
/// state and then after every `diag_every` steps (and on the final state).
pub fn run(
    initial: FlowState,
    params: &FluidParams,
    diag_every: usize,
    mut observe: impl FnMut(&FlowState) -> Result<()>,
) -> Result<FlowState> {
    params.validate()?;
    if diag_every == 0 {
        return Err(Error::param("diag_every", "must be at least 1"));
    }
    let steps = params.steps();
    let mut state = initial;
    observe(&state)?;
    for s in 1..=steps {
        state = step(&state, params)?;
        if s % diag_every == 0 || s == steps {
            observe(&state)?;
        }
    }
    Ok(state)
}
