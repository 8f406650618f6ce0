use nsgeom::diagnostics::helicity;
use nsgeom::geometry::{hodge_star, skew_contraction_residual, star_strain_residual, FormValue, Orientation};
use nsgeom::spectral::{curl, divergence, fft_roundtrip, gradient, leray_project, random_divfree};
use nsgeom::stochastic::metric_gram_schmidt;
use nsgeom::{Grid, Mat3, SpectralScalarField, SpectralVectorField};
use proptest::prelude::*;

/// One Fourier term a·sin(k·x + φ) in a single component.
type Term = (i32, i32, i32, usize, f64, f64);

fn terms() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec((-3..=3, -3..=3, -3..=3, 0usize..3, -2.0..2.0f64, 0.0..6.3f64), 1..6)
}

fn field(grid: Grid, terms: &[Term]) -> SpectralVectorField {
    SpectralVectorField::from_fn(grid, |x| {
        let mut v = [0.0; 3];
        for &(a, b, c, comp, amp, phase) in terms {
            v[comp] += amp * (a as f64 * x[0] + b as f64 * x[1] + c as f64 * x[2] + phase).sin();
        }
        v
    })
}

fn grid() -> Grid {
    Grid::new(8).unwrap()
}

fn mat() -> impl Strategy<Value = Mat3> {
    prop::collection::vec(-3.0..3.0f64, 9).prop_map(|v| Mat3::from_column_slice(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn div_curl_and_curl_grad_vanish(t in terms()) {
        let u = field(grid(), &t);
        let scale = 1.0 + u.max_coeff();
        let dc = divergence(&curl(&u));
        prop_assert!(dc.coeffs().iter().all(|z| z.norm() < 1e-13 * scale));
        let s = SpectralScalarField::from_fn(grid(), |x| {
            t.iter().map(|&(a, b, c, _, amp, ph)| amp * (a as f64 * x[0] + b as f64 * x[1] + c as f64 * x[2] + ph).cos()).sum()
        });
        prop_assert!(curl(&gradient(&s)).max_coeff() < 1e-13 * scale);
    }

    #[test]
    fn leray_is_an_orthogonal_projection(t in terms()) {
        let u = field(grid(), &t);
        let p = leray_project(&u);
        prop_assert!(p.divergence_defect() < 1e-13);
        let pp = leray_project(&p);
        prop_assert!(pp.sub(&p).unwrap().max_coeff() < 1e-14 * (1.0 + u.max_coeff()));
        let rest = u.sub(&p).unwrap();
        prop_assert!(p.inner(&rest).unwrap().abs() < 1e-11 * (1.0 + u.norm_sq()));
        prop_assert!(p.norm() <= u.norm() * (1.0 + 1e-14));
    }

    #[test]
    fn fft_roundtrip_and_parseval(t in terms()) {
        let u = field(grid(), &t);
        let back = fft_roundtrip(&u);
        prop_assert!(back.sub(&u).unwrap().max_coeff() < 1e-14 * (1.0 + u.max_coeff()));
        let (spec, phys) = (u.norm_sq(), u.physical_norm_sq());
        prop_assert!((spec - phys).abs() <= 1e-12 * (1.0 + spec));
    }

    #[test]
    fn helicity_is_even_and_quadratic(t in terms(), a in -3.0..3.0f64) {
        let u = leray_project(&field(grid(), &t));
        let xi = curl(&u);
        let h = helicity(&u, &xi).unwrap();
        let flipped = helicity(&u.scale(-1.0), &xi.scale(-1.0)).unwrap();
        prop_assert!((h - flipped).abs() <= 1e-12 * (1.0 + h.abs()));
        let scaled = helicity(&u.scale(a), &xi.scale(a)).unwrap();
        prop_assert!((scaled - a * a * h).abs() <= 1e-11 * (1.0 + (a * a * h).abs()));
    }

    #[test]
    fn random_fields_are_solenoidal_and_mean_free(seed in any::<u64>()) {
        let u = random_divfree(grid(), seed, 2, 0.5).unwrap();
        prop_assert!(u.is_divergence_free());
        prop_assert!(u.is_mean_free());
        let density = 0.5 * u.norm_sq() / nsgeom::spectral::VOLUME;
        prop_assert!((density - 0.5).abs() < 1e-12);
    }

    #[test]
    fn skew_gradient_contraction_vanishes(g in mat()) {
        prop_assert!(skew_contraction_residual(&g) <= 1e-12 * (1.0 + g.abs().max().powi(2)));
    }

    #[test]
    fn star_commutes_with_trace_free_strain(m in mat(), b in prop::array::uniform3(-3.0..3.0f64)) {
        let sym = (m + m.transpose()) * 0.5;
        let s = sym - Mat3::identity() * (sym.trace() / 3.0);
        let omega = FormValue::two_form(b[0], b[1], b[2]);
        let r = star_strain_residual(&omega, &s).unwrap();
        prop_assert!(r <= 1e-12 * (1.0 + s.abs().max() * 3.0));
    }

    #[test]
    fn hodge_star_is_an_involution(b in prop::array::uniform3(-3.0..3.0f64), c in -3.0..3.0f64) {
        let two = FormValue::two_form(b[0], b[1], b[2]);
        prop_assert_eq!(hodge_star(&hodge_star(&two, Orientation::Positive), Orientation::Positive), two.clone());
        let s = FormValue::scalar(c);
        prop_assert_eq!(hodge_star(&hodge_star(&s, Orientation::Negative), Orientation::Negative), s);
    }

    #[test]
    fn gram_schmidt_gives_metric_orthonormal_frames(m in mat(), r in mat()) {
        let g = m * m.transpose() + Mat3::identity();
        prop_assume!(r.determinant().abs() > 1e-2);
        let e = metric_gram_schmidt(&r, &g);
        prop_assert!((e.transpose() * g * e - Mat3::identity()).abs().max() < 1e-10);
    }
}
