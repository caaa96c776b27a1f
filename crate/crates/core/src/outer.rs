//! Szego function `D_μ`, entropy function `K(μ, z)` and the local quantities
//! `K_n`, `P_n`, `F_n` entering the Cesàro rate bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::measure::{check_boundary, check_interior, CircleMeasure};
use crate::spectral::{conjugate_function, horner};

/// Lower reporting floor for the entropy (cancellation of two quadratures).
pub const ENTROPY_FLOOR: f64 = -1e-10;
pub const DEFAULT_DELTA_GRID_SIZE: usize = 64;
pub const DELTA_MIN: f64 = 1e-4;

/// `D_μ(z) = exp(½ ∫ log w (1 + ξ̄z)/(1 - ξ̄z) dm)` for `|z| < 1`.
pub fn szego_interior(measure: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    let coeffs = measure.require_szego()?;
    check_interior(z)?;
    Ok((0.5 * horner(coeffs, z)).exp())
}

/// Boundary values of `D_μ` on the measure grid, with `|D_μ|² = w` exactly.
pub fn szego_boundary(measure: &CircleMeasure) -> Result<Vec<Complex64>> {
    measure.require_szego()?;
    let half_log: Vec<f64> = measure.weight().iter().map(|w| 0.5 * w.ln()).collect();
    let phase = conjugate_function(&half_log);
    Ok(half_log
        .iter()
        .zip(&phase)
        .map(|(&re, &im)| Complex64::new(re, im).exp())
        .collect())
}

/// `D_μ` at an arbitrary point of the closed disk, from the interpolated
/// `log w`. Used for boundary points off the grid.
pub fn szego_on_circle(measure: &CircleMeasure, xi: Complex64) -> Result<Complex64> {
    let coeffs = measure.require_szego()?;
    check_boundary(xi)?;
    Ok((0.5 * horner(coeffs, xi)).exp())
}

/// Entropy function `K(μ, z) = log P(μ, z) - P(log w, z)`.
pub fn entropy(measure: &CircleMeasure, z: Complex64) -> Result<f64> {
    let log_part = measure.poisson_log_weight(z)?;
    Ok(measure.poisson(z)?.ln() - log_part)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyRecord {
    pub n: usize,
    pub k_n: f64,
    pub p_n: f64,
    pub f_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub xi0: Complex64,
    pub records: Vec<EntropyRecord>,
    pub delta_grid: Vec<f64>,
}

/// Log-spaced grid of `size` points spanning `[DELTA_MIN, 1 - DELTA_MIN]`.
pub fn delta_grid(size: usize) -> Vec<f64> {
    let lo = DELTA_MIN.ln();
    let hi = (1.0 - DELTA_MIN).ln();
    match size {
        0 => Vec::new(),
        1 => vec![DELTA_MIN],
        _ => (0..size)
            .map(|i| (lo + (hi - lo) * i as f64 / (size - 1) as f64).exp())
            .collect(),
    }
}

/// `K_n`, `P_n` (sup/inf over the δ grid of `K` and `P` at `(1 - δ/n) ξ0`)
/// and `F_n = F_{n-1}(μ, ξ0)`.
pub fn entropy_record(
    measure: &CircleMeasure,
    xi0: Complex64,
    n: usize,
    deltas: &[f64],
) -> Result<EntropyRecord> {
    check_boundary(xi0)?;
    if n == 0 {
        return Err(OpucError::InvalidArgument("profile order n must be >= 1".into()));
    }
    if deltas.is_empty() {
        return Err(OpucError::InvalidArgument("empty delta grid".into()));
    }
    let mut k_n = f64::NEG_INFINITY;
    let mut p_n = f64::INFINITY;
    for &delta in deltas {
        let z = xi0 * (1.0 - delta / n as f64);
        let p = measure.poisson(z)?;
        let k = p.ln() - measure.poisson_log_weight(z)?;
        k_n = k_n.max(k);
        p_n = p_n.min(p);
    }
    let f_n = measure.fejer_mean(xi0, n)?;
    Ok(EntropyRecord { n, k_n, p_n, f_n })
}

pub fn entropy_profile(
    measure: &CircleMeasure,
    xi0: Complex64,
    n_list: &[usize],
    delta_grid_size: usize,
) -> Result<EntropyProfile> {
    let deltas = delta_grid(delta_grid_size);
    let records = n_list
        .iter()
        .map(|&n| entropy_record(measure, xi0, n, &deltas))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyProfile { xi0, records, delta_grid: deltas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn bernstein_szego(r: f64, n: usize) -> CircleMeasure {
        let w = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (1.0 - r * r) / (1.0 - 2.0 * r * t.cos() + r * r)
            })
            .collect();
        CircleMeasure::new(w, vec![], false).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Closed form `D(z) = sqrt(1 - r²)/(1 - rz)` for the Poisson-kernel weight.
    fn closed_d(r: f64, z: Complex64) -> Complex64 {
        (1.0 - r * r).sqrt() / (1.0 - r * z)
    }

    #[test]
    fn lebesgue_outer_function_is_one() {
        let m = CircleMeasure::lebesgue(128);
        assert!((szego_interior(&m, Complex64::new(0.2, 0.5)).unwrap() - 1.0).norm() < 1e-15);
        assert!(szego_boundary(&m).unwrap().iter().all(|d| (d - 1.0).norm() < 1e-15));
        assert!(entropy(&m, c(0.7)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn poisson_weight_outer_function() {
        let m = bernstein_szego(0.5, 4096);
        let d0 = szego_interior(&m, c(0.0)).unwrap();
        assert!((d0 - c(0.75f64.sqrt())).norm() < 1e-12);
        assert!((szego_interior(&m, c(0.5)).unwrap() - c(1.154_700_538_379_251_5)).norm() < 1e-12);
        let boundary = szego_boundary(&m).unwrap();
        assert!((boundary[0] - c(1.732_050_807_568_877_2)).norm() < 1e-12);
        for (j, d) in boundary.iter().enumerate().step_by(97) {
            assert!((d.norm_sqr() - m.weight()[j]).abs() < 1e-12);
            assert!((d - closed_d(0.5, m.grid_point(j))).norm() < 1e-12);
        }
        // Radial limit against the interior evaluation.
        let inner = szego_interior(&m, c(0.999)).unwrap();
        assert!((inner - boundary[0]).norm() < 1e-2);
    }

    #[test]
    fn entropy_closed_forms() {
        let m = bernstein_szego(0.5, 4096);
        assert!((entropy(&m, c(0.0)).unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((entropy(&m, c(0.5)).unwrap() - 1.25f64.ln()).abs() < 1e-12);
        let not_szego = CircleMeasure::new(vec![1.0, 0.0, 1.0, 1.0], vec![], true).unwrap();
        assert!(matches!(entropy(&not_szego, c(0.0)), Err(OpucError::NotSzego { .. })));
        assert!(matches!(entropy(&m, c(1.0)), Err(OpucError::BoundaryPoint(_))));
    }

    #[test]
    fn delta_grid_spans_interval() {
        let g = delta_grid(64);
        assert_eq!(g.len(), 64);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert!((g[63] - (1.0 - 1e-4)).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lebesgue_profile_is_trivial() {
        let m = CircleMeasure::lebesgue(1024);
        let p = entropy_profile(&m, c(1.0), &[1, 8, 64], 16).unwrap();
        for r in &p.records {
            assert!(r.k_n.abs() < 1e-13);
            assert!((r.p_n - 1.0).abs() < 1e-13);
            assert!((r.f_n - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn poisson_weight_profile_trends() {
        let m = bernstein_szego(0.5, 4096);
        let p = entropy_profile(&m, c(1.0), &[4, 16, 64, 256], 64).unwrap();
        // Closed form K at radius ρ on the positive axis: log((1 - r²ρ²)/(1 - r²)).
        let closed_k = |rho: f64| ((1.0 - 0.25 * rho * rho) / 0.75).ln();
        for r in &p.records {
            let best = p
                .delta_grid
                .iter()
                .map(|d| closed_k(1.0 - d / r.n as f64))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((r.k_n - best).abs() < 1e-11);
        }
        assert!(p.records.windows(2).all(|w| w[1].k_n < w[0].k_n));
        let last = p.records.last().unwrap();
        assert!(last.k_n < 1e-2);
        assert!((last.p_n - 3.0).abs() / 3.0 < 0.05);
    }
}
