//! Thread-local FFT plan cache.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT: `X_k = sum_j x_j e^{-2 pi i jk/n}`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(buf);
}

/// Inverse DFT normalized by `1/n`, so `inverse(forward(x)) == x`.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(buf);
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let orig: Vec<Complex64> = (0..12).map(|j| Complex64::new((j as f64).sin(), (j as f64 * 0.3).cos())).collect();
        let mut buf = orig.clone();
        forward(&mut buf);
        inverse(&mut buf);
        for (a, b) in orig.iter().zip(&buf) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn single_mode_lands_in_one_bin() {
        let n = 8;
        let mut buf: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 3.0 * j as f64 / n as f64))
            .collect();
        forward(&mut buf);
        for (k, v) in buf.iter().enumerate() {
            let expect = if k == 3 { n as f64 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }
}
