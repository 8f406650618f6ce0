//! 3-D complex FFT assembled from 1-D rustfft passes along each axis.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Rc<Plan>>> = RefCell::new(HashMap::new());
}

fn plan(n: usize) -> Rc<Plan> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Rc::new(Plan {
                    n,
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    })
}

thread_local! {
    static BUFFERS: RefCell<(Vec<Complex64>, Vec<Complex64>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

/// Transforms every contiguous length-n line, skipping runs of all-zero
/// lines (dealiased spectra leave many).
fn lines(fft: &dyn Fft<f64>, data: &mut [Complex64], n: usize, scratch: &mut [Complex64]) {
    let zero = |line: &[Complex64]| line.iter().all(|z| z.re == 0.0 && z.im == 0.0);
    let count = data.len() / n;
    let mut start = 0;
    while start < count {
        if zero(&data[start * n..(start + 1) * n]) {
            start += 1;
            continue;
        }
        let mut end = start + 1;
        while end < count && !zero(&data[end * n..(end + 1) * n]) {
            end += 1;
        }
        fft.process_with_scratch(&mut data[start * n..end * n], scratch);
        start = end;
    }
}

/// dst[j + n k + n² i] = src[i + n j + n² k]: the y axis becomes fastest.
/// This is a transpose of an n² × n matrix, done in tiles so neither side
/// walks memory at a large stride for long.
fn rotate(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const TILE: usize = 8;
    let rows = n * n;
    for r0 in (0..rows).step_by(TILE) {
        let r1 = (r0 + TILE).min(rows);
        for c0 in (0..n).step_by(TILE) {
            for c in c0..(c0 + TILE).min(n) {
                let out = &mut dst[c * rows + r0..c * rows + r1];
                for (r, o) in (r0..r1).zip(out.iter_mut()) {
                    *o = src[r * n + c];
                }
            }
        }
    }
}

/// Three passes of contiguous 1-D transforms, each followed by a cyclic
/// axis rotation, so the layout returns to x-fastest at the end.
pub(crate) fn transform(n: usize, data: &mut [Complex64], inverse: bool) {
    let plan = plan(n);
    let fft = if inverse { &plan.inverse } else { &plan.forward };
    let n = plan.n;
    assert_eq!(data.len(), n * n * n);
    BUFFERS.with(|cell| {
        let (scratch, buf) = &mut *cell.borrow_mut();
        scratch.resize(fft.get_inplace_scratch_len(), Complex64::default());
        buf.resize(n * n * n, Complex64::default());
        lines(fft.as_ref(), data, n, scratch);
        rotate(data, buf, n);
        lines(fft.as_ref(), buf, n, scratch);
        rotate(buf, data, n);
        lines(fft.as_ref(), data, n, scratch);
        rotate(data, buf, n);
        data.copy_from_slice(buf);
    });
}

/// Physical samples to Fourier coefficients, scaled by 1/n³.
pub(crate) fn forward_real(n: usize, values: &[f64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(n, &mut data, false);
    let scale = 1.0 / (n * n * n) as f64;
    for c in &mut data {
        *c *= scale;
    }
    data
}

/// Two real arrays through one complex transform: with z = a + ib,
/// â(k) = (ẑ(k) + ẑ(−k)*)/2 and b̂(k) = (ẑ(k) − ẑ(−k)*)/2i.
pub(crate) fn forward_real_pair(n: usize, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut z: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
    transform(n, &mut z, false);
    let scale = 0.5 / (n * n * n) as f64;
    let mut fa = Vec::with_capacity(z.len());
    let mut fb = Vec::with_capacity(z.len());
    let mirror = |m: usize| (n - m) % n;
    for k in 0..n {
        for j in 0..n {
            let row = n * (mirror(j) + n * mirror(k));
            for i in 0..n {
                let p = z[i + n * (j + n * k)];
                let q = z[row + mirror(i)].conj();
                fa.push((p + q) * scale);
                let d = (p - q) * scale;
                fb.push(Complex64::new(d.im, -d.re));
            }
        }
    }
    (fa, fb)
}

/// Fourier coefficients to physical samples (real part).
pub(crate) fn inverse_real(n: usize, coeffs: &[Complex64]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    transform(n, &mut data, true);
    data.into_iter().map(|c| c.re).collect()
}

/// Two Hermitian coefficient arrays through one complex transform; the
/// real and imaginary parts of the result are the two real fields.
pub(crate) fn inverse_real_pair(n: usize, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut data: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| x + i * y).collect();
    transform(n, &mut data, true);
    data.into_iter().map(|c| (c.re, c.im)).unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_lands_in_its_slot() {
        let n = 8;
        let h = 2.0 * PI / n as f64;
        let mut vals = vec![0.0; n * n * n];
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let (x, y, z) = (i as f64 * h, j as f64 * h, k as f64 * h);
                    vals[i + n * (j + n * k)] = (x + 2.0 * y - 3.0 * z).cos();
                }
            }
        }
        let c = forward_real(n, &vals);
        let at = |i: usize, j: usize, k: usize| c[i + n * (j + n * k)];
        assert!((at(1, 2, n - 3).re - 0.5).abs() < 1e-14);
        assert!((at(n - 1, n - 2, 3).re - 0.5).abs() < 1e-14);
        let total: f64 = c.iter().map(|z| z.norm()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let back = inverse_real(n, &c);
        for (a, b) in back.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn paired_transforms_match_single() {
        let n = 8;
        let a: Vec<f64> = (0..n * n * n).map(|i| ((i * 37 % 101) as f64 / 50.0) - 1.0).collect();
        let b: Vec<f64> = (0..n * n * n).map(|i| ((i * 53 % 97) as f64).sin()).collect();
        let (fa, fb) = forward_real_pair(n, &a, &b);
        let (sa, sb) = (forward_real(n, &a), forward_real(n, &b));
        for idx in 0..a.len() {
            assert!((fa[idx] - sa[idx]).norm() < 1e-15);
            assert!((fb[idx] - sb[idx]).norm() < 1e-15);
        }
        let (pa, pb) = inverse_real_pair(n, &fa, &fb);
        for idx in 0..a.len() {
            assert!((pa[idx] - a[idx]).abs() < 1e-13);
            assert!((pb[idx] - b[idx]).abs() < 1e-13);
        }
    }
}
