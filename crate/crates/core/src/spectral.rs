//! Discrete Fourier helpers shared by the measure and outer-function code.
//!
//! Grid samples `u_j = u(2πj/N)` are represented by their half spectrum
//! `s_k = (1/N) Σ_j u_j e^{-2πijk/N}`, `k = 0..=N/2`. For real samples this
//! determines the trigonometric interpolant, and the analytic function
//!
//! ```text
//! H(z) = s_0 + 2 Σ_{0<k<N/2} s_k z^k + s_{N/2} z^{N/2}
//! ```
//!
//! has `Re H = u` on the grid. `Re H(z)` inside the disk is the harmonic
//! (Poisson) extension of the interpolant, which agrees with the periodic
//! trapezoid rule up to `O(|z|^N)` aliasing and stays accurate as `|z| → 1`.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Half spectrum of real samples, normalized by `1/N`.
pub(crate) fn real_half_spectrum(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.truncate(n / 2 + 1);
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Taylor coefficients of `H` (see module docs) from the half spectrum.
pub(crate) fn herglotz_coefficients(spec: &[Complex64], grid_size: usize) -> Vec<Complex64> {
    let mut coeffs: Vec<Complex64> = spec.iter().map(|c| 2.0 * c).collect();
    coeffs[0] = Complex64::new(spec[0].re, 0.0);
    if grid_size % 2 == 0 {
        let last = grid_size / 2;
        coeffs[last] = spec[last];
    }
    coeffs
}

/// Horner evaluation of `Σ coeffs[k] z^k`.
pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Imaginary part of `H` on the grid, i.e. the discrete conjugate function
/// of `u` (zero mean). Computed by multiplying mode `k` by `-i sign(k)`.
pub(crate) fn conjugate_function(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let minus_i = Complex64::new(0.0, -1.0);
    for (k, c) in buf.iter_mut().enumerate() {
        if k == 0 || (n % 2 == 0 && k == n / 2) {
            *c = Complex64::new(0.0, 0.0);
        } else if k < n.div_ceil(2) {
            *c *= minus_i;
        } else {
            *c *= -minus_i;
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn conjugate_of_cosine_is_sine() {
        let n = 64;
        let samples: Vec<f64> = (0..n).map(|j| (3.0 * 2.0 * PI * j as f64 / n as f64).cos()).collect();
        let h = conjugate_function(&samples);
        for (j, v) in h.iter().enumerate() {
            let expect = (3.0 * 2.0 * PI * j as f64 / n as f64).sin();
            assert!((v - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn herglotz_real_part_reproduces_samples() {
        let n = 32;
        let samples: Vec<f64> = (0..n).map(|j| 1.0 + 0.3 * (j as f64).sin()).collect();
        let spec = real_half_spectrum(&samples);
        let coeffs = herglotz_coefficients(&spec, n);
        for (j, &u) in samples.iter().enumerate() {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            assert!((horner(&coeffs, z).re - u).abs() < 1e-12);
        }
    }
}
