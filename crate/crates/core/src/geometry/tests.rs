use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::{Mat3, Vec3};

fn rand_vec(rng: &mut impl Rng) -> Vec3 {
    Vec3::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

fn rand_mat(rng: &mut impl Rng) -> Mat3 {
    Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

fn rand_point(rng: &mut impl Rng) -> Vec3 {
    Vec3::from_fn(|_, _| rng.random_range(0.0..std::f64::consts::TAU))
}

/// Riemann-tensor Ricci built only from metric samples: Christoffels by
/// central differences of g at displaced points, their derivatives by a
/// second central difference, and an explicit contraction.
fn fd_ricci_oracle(chart: &MetricChart, x: &Vec3, v: &Vec3, dv: &Mat3) -> Mat3 {
    let h = 1e-3;
    let metric_fd = chart.without_analytic_derivatives();
    let alpha = 1.0;
    let gamma_at = |y: &Vec3| -> [[[f64; 3]; 3]; 3] {
        let g = metric_fd.g(y);
        let ginv = g.try_inverse().unwrap();
        let dg: [Mat3; 3] = std::array::from_fn(|k| {
            let e = Vec3::ith(k, h);
            (metric_fd.g(&(y - 2.0 * e)) - metric_fd.g(&(y - e)) * 8.0 + metric_fd.g(&(y + e)) * 8.0 - metric_fd.g(&(y + 2.0 * e))) / (12.0 * h)
        });
        let vy = v + dv * (y - x);
        let vl = g * vy;
        let mut out = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for l in 0..3 {
                        s += 0.5 * ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                    }
                    let d = if k == i { 1.0 } else { 0.0 };
                    out[k][i][j] = s - alpha * (d * vl[j] - g[(i, j)] * vy[k]);
                }
            }
        }
        out
    };
    let g0 = gamma_at(x);
    let dgam: Vec<[[[f64; 3]; 3]; 3]> = (0..3)
        .map(|c| {
            let e = Vec3::ith(c, h);
            let (m2, m1, p1, p2) = (gamma_at(&(x - 2.0 * e)), gamma_at(&(x - e)), gamma_at(&(x + e)), gamma_at(&(x + 2.0 * e)));
            let mut out = [[[0.0; 3]; 3]; 3];
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        out[k][i][j] = (m2[k][i][j] - 8.0 * m1[k][i][j] + 8.0 * p1[k][i][j] - p2[k][i][j]) / (12.0 * h);
                    }
                }
            }
            out
        })
        .collect();
    let ginv = chart.g(x).try_inverse().unwrap();
    // Ric(X) = Σ_i R(X, e_i) e_i with R^k_{abc} from ∂Γ and Γ·Γ
    Mat3::from_fn(|k, a| {
        let mut s = 0.0;
        for b in 0..3 {
            for c in 0..3 {
                let mut r = dgam[a][k][b][c] - dgam[b][k][a][c];
                for m in 0..3 {
                    r += g0[m][b][c] * g0[k][a][m] - g0[m][a][c] * g0[k][b][m];
                }
                s += ginv[(b, c)] * r;
            }
        }
        s
    })
}

#[test]
fn flat_connection_vanishes() {
    let chart = MetricChart::flat();
    let x = Vec3::new(0.4, 2.0, 5.0);
    assert_eq!(christoffel_lc(&chart, &x).unwrap().max_abs(), 0.0);
    assert_eq!(christoffel_v(&chart, &x, &Vec3::zeros()).unwrap().max_abs(), 0.0);
    assert_eq!(torsion_v(&chart, &x, &Vec3::zeros()).unwrap().max_abs(), 0.0);
    assert_eq!(ricci_lc(&chart, &x).unwrap(), Mat3::zeros());
    let t = ConnectionTensors::at(&chart, &x, &Vec3::zeros(), &Mat3::zeros()).unwrap();
    assert_eq!(t.ric_v, Mat3::zeros());
    assert_eq!(t.ric_hat, Mat3::zeros());
}

#[test]
fn conformal_christoffels() {
    let a = 0.1;
    let chart = MetricChart::conformal(a);
    for &x0 in &[0.0, 0.7, 2.5, 4.0] {
        let x = Vec3::new(x0, 0.3, 1.0);
        let gam = christoffel_lc(&chart, &x).unwrap();
        let dphi = a * x0.cos();
        assert!((gam.get(0, 0, 0) - dphi).abs() < 1e-14);
        assert!((gam.get(0, 1, 1) + dphi).abs() < 1e-14);
        assert!((gam.get(1, 0, 1) - dphi).abs() < 1e-14);
        let fd = christoffel_lc(&chart.without_analytic_derivatives(), &x).unwrap();
        assert!(gam.sub(&fd).max_abs() < 1e-10);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(gam.get(k, i, j), gam.get(k, j, i));
                }
            }
        }
    }
}

#[test]
fn diagonal_christoffel() {
    let b = 0.4;
    let chart = MetricChart::diagonal(b);
    let x = Vec3::new(1.2, 0.0, 0.0);
    let a = 1.0 + b * 1.2f64.sin();
    let da = b * 1.2f64.cos();
    assert!((christoffel_lc(&chart, &x).unwrap().get(0, 0, 0) - da / (2.0 * a)).abs() < 1e-14);
}

#[test]
fn deformed_christoffels_flat_e1() {
    let chart = MetricChart::flat();
    let g = christoffel_v(&chart, &Vec3::zeros(), &Vec3::x()).unwrap();
    assert_eq!(g.get(0, 1, 1), 1.0);
    assert_eq!(g.get(1, 1, 0), -1.0);
    assert_eq!(g.get(0, 0, 0), 0.0);
}

#[test]
fn deformed_covariant_derivative_matches_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let chart = MetricChart::random_periodic(&mut rng, 0.5);
        let at = rand_point(&mut rng);
        let (v, x, y) = (rand_vec(&mut rng), rand_vec(&mut rng), rand_vec(&mut rng));
        let dy = rand_mat(&mut rng);
        let gam = christoffel_v(&chart, &at, &v).unwrap();
        let lhs = covariant_derivative(&gam, &x, &y, &dy);
        let rhs = covariant_derivative_v_formula(&chart, &at, &v, &x, &y, &dy).unwrap();
        assert!((lhs - rhs).abs().max() < 1e-13);
    }
}

#[test]
fn torsion_examples() {
    let chart = MetricChart::flat();
    let t = torsion_v(&chart, &Vec3::zeros(), &Vec3::x()).unwrap();
    assert_eq!(t.apply(&Vec3::y(), &Vec3::x()), -Vec3::y());
    assert_eq!(torsion_v(&chart, &Vec3::zeros(), &Vec3::zeros()).unwrap().max_abs(), 0.0);

    // not totally skew-symmetric: some ⟨T(X,Y),Z⟩ + ⟨T(Z,Y),X⟩ ≠ 0
    let basis = [Vec3::x(), Vec3::y(), Vec3::z()];
    let mut found = false;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                if (t.apply(x, y).dot(z) + t.apply(z, y).dot(x)).abs() > 0.5 {
                    found = true;
                }
            }
        }
    }
    assert!(found);
    let t0 = torsion_v(&chart, &Vec3::zeros(), &Vec3::zeros()).unwrap();
    for x in &basis {
        for y in &basis {
            for z in &basis {
                assert_eq!(t0.apply(x, y).dot(z) + t0.apply(z, y).dot(x), 0.0);
            }
        }
    }
}

#[test]
fn torsion_closed_form_matches_christoffel_antisymmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let chart = MetricChart::random_periodic(&mut rng, 0.5);
        let x = rand_point(&mut rng);
        let v = rand_vec(&mut rng);
        let t = torsion_v(&chart, &x, &v).unwrap();
        let from_gamma = torsion_of(&christoffel_v(&chart, &x, &v).unwrap());
        assert!(t.sub(&from_gamma).max_abs() < 1e-14);
        let (a, b) = (rand_vec(&mut rng), rand_vec(&mut rng));
        assert!((t.apply(&a, &b) + t.apply(&b, &a)).abs().max() < 1e-15);
    }
}

#[test]
fn metric_compatibility_of_deformed_connection() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let chart = MetricChart::random_periodic(&mut rng, 0.5);
        let fd = chart.without_analytic_derivatives();
        let x = rand_point(&mut rng);
        let v = rand_vec(&mut rng);
        let g = chart.g(&x);
        let gam = christoffel_v(&chart, &x, &v).unwrap();
        let dg = fd.dg(&x);
        let (a, b) = (rand_vec(&mut rng), rand_vec(&mut rng));
        for k in 0..3 {
            let ek = Vec3::ith(k, 1.0);
            let lhs = a.dot(&(dg[k] * b));
            let rhs = gam.apply(&ek, &a).dot(&(g * b)) + a.dot(&(g * gam.apply(&ek, &b)));
            assert!((lhs - rhs).abs() < 1e-5, "{lhs} {rhs}");
        }
    }
}

#[test]
fn conformal_ricci_closed_form_and_oracle() {
    let a = 0.1;
    let chart = MetricChart::conformal(a);
    for &x0 in &[0.3, 1.9, 3.3] {
        let x = Vec3::new(x0, 0.5, -1.0);
        let ric = ricci_lc(&chart, &x).unwrap();
        let (p1, p2) = (a * x0.cos(), -a * x0.sin());
        let e = (-2.0 * a * x0.sin()).exp();
        let expect = Mat3::from_diagonal(&Vec3::new(-2.0 * p2, -p2 - p1 * p1, -p2 - p1 * p1)) * e;
        assert!((ric - expect).abs().max() < 1e-13);
        let oracle = fd_ricci_oracle(&chart, &x, &Vec3::zeros(), &Mat3::zeros());
        assert!((ric - oracle).abs().max() < 1e-6);
    }
}

#[test]
fn sphere_ricci_is_twice_metric() {
    let chart = MetricChart::stereographic_sphere();
    for x in [Vec3::zeros(), Vec3::new(0.2, -0.1, 0.3), Vec3::new(-0.4, 0.25, 0.1)] {
        let ric = ricci_lc(&chart, &x).unwrap();
        assert!((ric - Mat3::identity() * 2.0).abs().max() < 1e-12);
        assert!((scalar_curvature(&chart, &x).unwrap() - 6.0).abs() < 1e-12);
    }
}

#[test]
fn deformed_ricci_flat_constant_v() {
    let chart = MetricChart::flat();
    let ric = ricci_v(&chart, &Vec3::zeros(), &Vec3::x(), &Mat3::zeros()).unwrap();
    assert_eq!(ric * Vec3::x(), Vec3::zeros());
    assert_eq!(ric * Vec3::y(), -Vec3::y());
    let x = Vec3::new(0.1, 0.2, 0.3);
    assert_eq!(ricci_v(&chart, &x, &Vec3::zeros(), &Mat3::zeros()).unwrap(), ricci_lc(&chart, &x).unwrap());
}

#[test]
fn deformed_ricci_formula_matches_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..20 {
        let chart = MetricChart::random_periodic(&mut rng, 0.5);
        let x = rand_point(&mut rng);
        let (v, dv) = (rand_vec(&mut rng), rand_mat(&mut rng));
        let formula = ricci_v(&chart, &x, &v, &dv).unwrap();
        let n3 = ricci_v_n3(&chart, &x, &v, &dv).unwrap();
        assert!((formula - n3).abs().max() < 1e-13);
        let curv = ricci_v_curvature(&chart, &x, &v, &dv).unwrap();
        assert!((formula - curv).abs().max() < 1e-10, "trial {trial}: {}", (formula - curv).abs().max());
        if trial < 5 {
            let oracle = fd_ricci_oracle(&chart, &x, &v, &dv);
            assert!((formula - oracle).abs().max() < 1e-5);
        }
    }
}

#[test]
fn intrinsic_ricci_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let chart = MetricChart::random_periodic(&mut rng, 0.5);
        let x = rand_point(&mut rng);
        let (v, dv) = (rand_vec(&mut rng), rand_mat(&mut rng));
        assert!(intrinsic_ricci(&chart, &x, &v, &dv).unwrap().gap() < 1e-10);
    }
    let flat = MetricChart::flat();
    let r = intrinsic_ricci(&flat, &Vec3::zeros(), &Vec3::x(), &Mat3::zeros()).unwrap();
    let expect = Vec3::x() * Vec3::x().transpose() * 2.0;
    assert!((r.assembled - expect).abs().max() < 1e-15 && (r.closed_form - expect).abs().max() < 1e-15);

    // shear v = (γy, 0, 0) at y = 0.7
    let gamma = 0.9;
    let v = Vec3::new(gamma * 0.7, 0.0, 0.0);
    let mut dv = Mat3::zeros();
    dv[(0, 1)] = gamma;
    let r = intrinsic_ricci(&flat, &Vec3::new(0.0, 0.7, 0.0), &v, &dv).unwrap();
    let mut sym = Mat3::zeros();
    sym[(0, 1)] = gamma;
    sym[(1, 0)] = gamma;
    let expect = v * v.transpose() * 2.0 + sym;
    assert!((r.closed_form - expect).abs().max() < 1e-15);
    assert!(r.gap() < 1e-14);

    let x = Vec3::new(1.0, 2.0, 3.0);
    let r0 = intrinsic_ricci(&MetricChart::conformal(0.1), &x, &Vec3::zeros(), &Mat3::zeros()).unwrap();
    let ric0 = ricci_lc(&MetricChart::conformal(0.1), &x).unwrap();
    assert!((r0.closed_form - ric0).abs().max() < 1e-15 && (r0.assembled - ric0).abs().max() < 1e-14);
}

#[test]
fn time_dependent_intrinsic_ricci() {
    let flat = MetricChart::flat();
    let r = intrinsic_ricci_t(&flat, &Vec3::zeros(), &Vec3::x(), &Mat3::zeros(), 1.0).unwrap();
    assert_eq!(r, Vec3::x() * Vec3::x().transpose() * 0.5);
    assert!(intrinsic_ricci_t(&flat, &Vec3::zeros(), &Vec3::x(), &Mat3::zeros(), 0.0).is_err());
    assert_eq!(intrinsic_ricci_t(&flat, &Vec3::zeros(), &Vec3::zeros(), &Mat3::zeros(), 0.3).unwrap(), Mat3::zeros());

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let chart = MetricChart::random_periodic(&mut rng, 0.5);
        let x = rand_point(&mut rng);
        let (u, du) = (rand_vec(&mut rng), rand_mat(&mut rng));
        let nu = rng.random_range(0.05..2.0);
        let via_v = intrinsic_ricci(&chart, &x, &(-u / (2.0 * nu)), &(-du / (2.0 * nu))).unwrap();
        let direct = intrinsic_ricci_t(&chart, &x, &u, &du, nu).unwrap();
        assert!((via_v.closed_form - direct).abs().max() < 1e-10 * direct.abs().max().max(1.0));
    }
}

#[test]
fn scalar_hat_examples_and_trace_identity() {
    let flat = MetricChart::flat();
    assert!((scalar_hat(&flat, &Vec3::zeros(), &Vec3::new(0.6, 0.8, 0.0), 1.0).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(scalar_hat(&flat, &Vec3::zeros(), &Vec3::zeros(), 1.0).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let u = rand_vec(&mut rng);
        let mut du = rand_mat(&mut rng);
        du -= Mat3::identity() * (du.trace() / 3.0);
        let nu = rng.random_range(0.05..2.0);
        let r = intrinsic_ricci_t(&flat, &Vec3::zeros(), &u, &du, nu).unwrap();
        let s = scalar_hat(&flat, &Vec3::zeros(), &u, nu).unwrap();
        assert!((r.trace() - s).abs() <= 1e-12 * s.abs().max(1.0));
    }
}
