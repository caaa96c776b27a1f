//! Orthonormal polynomials on the unit circle.
//!
//! The transfer matrix
//!
//! ```text
//! T_n = ρ_n⁻¹ [[ z, -ā_n ], [ -a_n z, 1 ]],   (φ_{n+1}, φ*_{n+1}) = T_n (φ_n, φ*_n)
//! ```
//!
//! fixes every sign and conjugation convention in this crate. The moment
//! recursion below is written to reproduce it, and its agreement with the
//! series Schur algorithm is tested rather than assumed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::CDd;
use crate::error::{OpucError, Result};
use crate::measure::{check_boundary, CircleMeasure};
use crate::outer::szego_boundary;
use crate::schur::{SchurParameters, ESCAPE_MARGIN};

/// Degree cap for the monic table (O(n²) storage).
pub const MAX_DEGREE: usize = 512;
/// Products longer than this are accumulated in double-double.
pub const COMPENSATED_THRESHOLD: usize = 128;
/// Below this `|1 - ξ̄z|` the CD quotient is replaced by the direct sum.
pub const CD_DIAGONAL_SWITCH: f64 = 1e-8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Values `(φ_n(z), φ*_n(z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialPair {
    pub n: usize,
    pub z: Complex64,
    pub phi: Complex64,
    pub phi_star: Complex64,
}

/// Monic polynomials `Φ_n` (coefficients by increasing power) and the
/// directly computed squared norms `‖Φ_n‖² = ⟨Φ*_n, 1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicTable {
    pub rows: Vec<Vec<Complex64>>,
    pub norms: Vec<f64>,
}

impl MonicTable {
    /// `max_n |‖Φ_{n+1}‖²/‖Φ_n‖² - (1 - |a_n|²)|`.
    pub fn telescoping_residual(&self, params: &SchurParameters) -> f64 {
        self.norms
            .windows(2)
            .zip(params.values())
            .map(|(w, a)| (w[1] / w[0] - (1.0 - a.norm_sqr())).abs())
            .fold(0.0, f64::max)
    }
}

fn reflect(row: &[Complex64]) -> Vec<Complex64> {
    row.iter().rev().map(|c| c.conj()).collect()
}

/// Szego recursion on moments `c_0..c_m`: returns `a_0..a_{n_max-1}` and the
/// monic table up to degree `n_max`.
pub fn monic_table(moments: &[Complex64], n_max: usize) -> Result<(SchurParameters, MonicTable)> {
    if n_max > MAX_DEGREE {
        return Err(OpucError::OutOfRange { requested: n_max, available: MAX_DEGREE });
    }
    if moments.len() < n_max + 1 {
        return Err(OpucError::OutOfRange { requested: n_max + 1, available: moments.len() });
    }
    if (moments[0] - ONE).norm() > 1e-10 {
        return Err(OpucError::BadNormalization(moments[0].re));
    }
    // ⟨z^j, 1⟩ = conj(c_j)
    let inner_with_one = |coeffs: &[Complex64], offset: usize| -> Complex64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * moments[j + offset].conj())
            .sum()
    };
    let mut rows = vec![vec![ONE]];
    let mut norms = vec![moments[0].re];
    let mut values = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let row = &rows[n];
        let star = reflect(row);
        let den = inner_with_one(&star, 0);
        let num = inner_with_one(row, 1);
        let a_conj = num / den;
        let a = a_conj.conj();
        if a.norm() >= 1.0 - ESCAPE_MARGIN || !a.norm().is_finite() {
            return Err(OpucError::PositivityLoss { index: n, modulus: a.norm() });
        }
        values.push(a);
        let mut next = vec![ZERO; n + 2];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, c) in star.iter().enumerate() {
            next[j] -= a_conj * c;
        }
        let next_star = reflect(&next);
        norms.push(inner_with_one(&next_star, 0).re);
        rows.push(next);
    }
    Ok((SchurParameters::new(values)?, MonicTable { rows, norms }))
}

pub fn verblunsky_from_moments(moments: &[Complex64], n_max: usize) -> Result<SchurParameters> {
    monic_table(moments, n_max).map(|(p, _)| p)
}

enum PairState {
    Plain(Complex64, Complex64),
    Compensated(CDd, CDd),
}

/// Streams `(φ_k(z), φ*_k(z))` for `k = 0..=n` by transfer-matrix products.
pub struct PairIter<'a> {
    params: &'a SchurParameters,
    z: Complex64,
    k: usize,
    end: usize,
    state: PairState,
}

impl<'a> PairIter<'a> {
    pub fn new(params: &'a SchurParameters, z: Complex64, n: usize) -> Result<Self> {
        if n > params.len() {
            return Err(OpucError::OutOfRange { requested: n, available: params.len() });
        }
        let state = if n > COMPENSATED_THRESHOLD {
            PairState::Compensated(CDd::from_c64(ONE), CDd::from_c64(ONE))
        } else {
            PairState::Plain(ONE, ONE)
        };
        Ok(Self { params, z, k: 0, end: n, state })
    }
}

impl Iterator for PairIter<'_> {
    type Item = PolynomialPair;

    fn next(&mut self) -> Option<PolynomialPair> {
        if self.k > self.end {
            return None;
        }
        let (phi, phi_star) = match &self.state {
            PairState::Plain(p, s) => (*p, *s),
            PairState::Compensated(p, s) => (p.to_c64(), s.to_c64()),
        };
        let out = PolynomialPair { n: self.k, z: self.z, phi, phi_star };
        if self.k < self.end {
            let a = self.params.values()[self.k];
            let rho_inv = 1.0 / self.params.rho()[self.k];
            let z = self.z;
            self.state = match &self.state {
                PairState::Plain(p, s) => PairState::Plain(
                    rho_inv * (z * p - a.conj() * s),
                    rho_inv * (-a * z * p + s),
                ),
                PairState::Compensated(p, s) => PairState::Compensated(
                    p.mul_c64(z).add(s.mul_c64(-a.conj())).scale(rho_inv),
                    p.mul_c64(-a * z).add(*s).scale(rho_inv),
                ),
            };
        }
        self.k += 1;
        Some(out)
    }
}

fn check_closed_disk(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + 1e-12) {
        return Err(OpucError::InvalidArgument(format!("|z| = {} exceeds 1", z.norm())));
    }
    Ok(())
}

/// `(φ_n(z), φ*_n(z))` for `|z| <= 1`.
pub fn eval_pair(params: &SchurParameters, z: Complex64, n: usize) -> Result<PolynomialPair> {
    check_closed_disk(z)?;
    Ok(PairIter::new(params, z, n)?.last().expect("iterator yields n + 1 items"))
}

/// All pairs `k = 0..=n`.
pub fn eval_pairs(params: &SchurParameters, z: Complex64, n: usize) -> Result<Vec<PolynomialPair>> {
    check_closed_disk(z)?;
    Ok(PairIter::new(params, z, n)?.collect())
}

fn chi_from_pair(pair: &PolynomialPair) -> Complex64 {
    let k = (pair.n / 2) as i32;
    let prefactor = pair.z.conj().powi(k);
    if pair.n % 2 == 0 {
        prefactor * pair.phi_star
    } else {
        prefactor * pair.phi
    }
}

/// CMV basis function `χ_n(ξ)`: `ξ̄^k φ*_{2k}(ξ)` or `ξ̄^k φ_{2k+1}(ξ)`.
pub fn chi(params: &SchurParameters, xi: Complex64, n: usize) -> Result<Complex64> {
    check_boundary(xi)?;
    Ok(chi_from_pair(&eval_pair(params, xi, n)?))
}

/// `χ_0(ξ)..=χ_n(ξ)`.
pub fn chi_values(params: &SchurParameters, xi: Complex64, n: usize) -> Result<Vec<Complex64>> {
    check_boundary(xi)?;
    Ok(PairIter::new(params, xi, n)?.map(|p| chi_from_pair(&p)).collect())
}

/// `Σ_{k<=n} conj(φ_k(ξ)) φ_k(z)`.
pub fn cd_kernel_direct(params: &SchurParameters, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    check_closed_disk(xi)?;
    check_closed_disk(z)?;
    let at_xi = PairIter::new(params, xi, n)?;
    let at_z = PairIter::new(params, z, n)?;
    Ok(at_xi.zip(at_z).map(|(p, q)| p.phi.conj() * q.phi).sum())
}

/// Polynomial Christoffel–Darboux kernel `k_{P_n}(ξ, z)` in quotient form,
/// falling back to the direct sum near the diagonal.
pub fn cd_kernel_poly(params: &SchurParameters, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    let denom = ONE - xi.conj() * z;
    if denom.norm() < CD_DIAGONAL_SWITCH {
        return cd_kernel_direct(params, xi, z, n);
    }
    let p = eval_pair(params, z, n + 1)?;
    let q = eval_pair(params, xi, n + 1)?;
    Ok((p.phi_star * q.phi_star.conj() - p.phi * q.phi.conj()) / denom)
}

/// `Σ_{k<=n} conj(χ_k(ξ)) χ_k(z)`.
pub fn cd_kernel_cmv_direct(params: &SchurParameters, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    let a = chi_values(params, xi, n)?;
    let b = chi_values(params, z, n)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum())
}

/// CMV Christoffel–Darboux kernel `k_{L_n,μ,ξ}(z)` by the parity-split
/// quotient formula in `χ_{n+1}`; direct sum near the diagonal.
pub fn cd_kernel_cmv(params: &SchurParameters, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    check_boundary(xi)?;
    check_boundary(z)?;
    let denom = ONE - xi.conj() * z;
    if denom.norm() < CD_DIAGONAL_SWITCH {
        return cd_kernel_cmv_direct(params, xi, z, n);
    }
    let cz = chi(params, z, n + 1)?;
    let cx = chi(params, xi, n + 1)?;
    let numerator = if n % 2 == 0 {
        z * (cz * xi).conj() * cx - cz * cx.conj()
    } else {
        z * cz * (xi * cx).conj() - z * (cz * xi).conj() * cx
    };
    Ok(numerator / denom)
}

/// `(ξ z̄)^{⌊n/2⌋} k_{P_n}(ξ, z)`, the shifted polynomial kernel.
pub fn cd_kernel_cmv_shifted(params: &SchurParameters, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    check_boundary(xi)?;
    check_boundary(z)?;
    Ok((xi * z.conj()).powi((n / 2) as i32) * cd_kernel_poly(params, xi, z, n)?)
}

/// Parameters `-a_n` of the dual measure (Schur function `-f`).
pub fn dual_parameters(params: &SchurParameters) -> SchurParameters {
    SchurParameters::new(params.values().iter().map(|a| -a).collect())
        .expect("negation preserves |a_n|")
}

/// `(|p(rξ)|, ((1+r)/2)^deg |p(ξ)|)` for a polynomial given by coefficients.
pub fn zero_free_growth(coeffs: &[Complex64], xi: Complex64, r: f64) -> (f64, f64) {
    let deg = coeffs.len().saturating_sub(1) as i32;
    let p = |z| crate::spectral::horner(coeffs, z);
    (p(xi * r).norm(), ((1.0 + r) / 2.0).powi(deg) * p(xi).norm())
}

/// Lower growth bound for the zero-free `φ*_n`: returns
/// `(|φ*_n(rξ)|, ((1+r)/2)^n |φ*_n(ξ)|)`.
pub fn mate_nevai_lower(params: &SchurParameters, xi: Complex64, r: f64, n: usize) -> Result<(f64, f64)> {
    check_boundary(xi)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(OpucError::InvalidArgument(format!("radius {r} outside [0, 1]")));
    }
    let inner = eval_pair(params, xi * r, n)?.phi_star.norm();
    let outer = eval_pair(params, xi, n)?.phi_star.norm();
    Ok((inner, ((1.0 + r) / 2.0).powi(n as i32) * outer))
}

/// `∫ |φ*_n - D_μ⁻¹|² w dm` on the grid.
pub fn phi_star_l2_residual(measure: &CircleMeasure, params: &SchurParameters, n: usize) -> Result<f64> {
    let d = szego_boundary(measure)?;
    let grid = measure.grid_size();
    let mut acc = 0.0;
    for (j, dj) in d.iter().enumerate() {
        let pair = eval_pair(params, measure.grid_point(j), n)?;
        acc += (pair.phi_star - dj.inv()).norm_sqr() * measure.weight()[j];
    }
    Ok(acc / grid as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn params(v: &[f64]) -> SchurParameters {
        SchurParameters::new(v.iter().map(|&x| c(x)).collect()).unwrap()
    }

    /// Dense Gram–Schmidt of 1, z, z², ... in L²(μ) on the grid plus atoms.
    /// Returns a_n from φ_{n+1}(0) = -ā_n φ*_n(0)/ρ_n, i.e. Φ_{n+1}(0) = -ā_n.
    fn gram_schmidt_parameters(m: &CircleMeasure, count: usize) -> Vec<Complex64> {
        let pts: Vec<(Complex64, f64)> = (0..m.grid_size())
            .map(|j| (m.grid_point(j), m.weight()[j] / m.grid_size() as f64))
            .chain(m.atoms().iter().map(|a| (a.point(), a.mass)))
            .collect();
        let inner = |p: &[Complex64], q: &[Complex64]| -> Complex64 {
            pts.iter()
                .map(|(x, w)| {
                    let px = crate::spectral::horner(p, *x);
                    let qx = crate::spectral::horner(q, *x);
                    px * qx.conj() * *w
                })
                .sum()
        };
        let mut monic: Vec<Vec<Complex64>> = Vec::new();
        let mut out = Vec::new();
        for n in 0..=count {
            let mut p = vec![ZERO; n + 1];
            p[n] = ONE;
            for q in &monic {
                let coef = inner(&p, q) / inner(q, q);
                for (i, qc) in q.iter().enumerate() {
                    p[i] -= coef * qc;
                }
            }
            if n > 0 {
                out.push(-p[0].conj());
            }
            monic.push(p);
        }
        out
    }

    fn poisson_weight(r: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (1.0 - r * r) / (1.0 - 2.0 * r * t.cos() + r * r)
            })
            .collect()
    }

    #[test]
    fn lebesgue_moments_give_zero_parameters() {
        let mut mo = vec![ZERO; 9];
        mo[0] = ONE;
        let p = verblunsky_from_moments(&mo, 8).unwrap();
        assert!(p.values().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn geometric_moments_give_single_parameter() {
        let mo: Vec<Complex64> = (0..20).map(|k| c(0.5f64.powi(k))).collect();
        let (p, table) = monic_table(&mo, 16).unwrap();
        assert!((p.values()[0] - c(0.5)).norm() < 1e-10);
        assert!(p.values()[1..].iter().all(|a| a.norm() < 1e-10));
        assert!(table.telescoping_residual(&p) < 1e-10);
        // Dense Gram–Schmidt oracle.
        let m = CircleMeasure::new(poisson_weight(0.5, 512), vec![], false).unwrap();
        let gs = gram_schmidt_parameters(&m, 4);
        assert!((gs[0] - c(0.5)).norm() < 1e-10);
        assert!(gs[1..].iter().all(|a| a.norm() < 1e-10));
    }

    #[test]
    fn atom_mixture_matches_gram_schmidt() {
        let m = CircleMeasure::new(vec![0.7; 1024], vec![crate::measure::Atom::new(0.0, 0.3)], false).unwrap();
        let mo = m.moments(32).unwrap();
        let p = verblunsky_from_moments(&mo, 12).unwrap();
        let gs = gram_schmidt_parameters(&m, 12);
        for (a, b) in p.values().iter().zip(&gs) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_finite_support() {
        // Two atoms: Toeplitz form degenerates at step 2.
        let m = CircleMeasure::new(
            vec![0.0; 64],
            vec![crate::measure::Atom::new(0.0, 0.5), crate::measure::Atom::new(2.0, 0.5)],
            false,
        )
        .unwrap();
        let mo = m.moments(6).unwrap();
        assert!(matches!(verblunsky_from_moments(&mo, 4), Err(OpucError::PositivityLoss { .. })));
    }

    #[test]
    fn pairs_for_zero_parameters() {
        let p = params(&[0.0; 6]);
        let z = Complex64::new(0.3, 0.4);
        let pair = eval_pair(&p, z, 5).unwrap();
        assert!((pair.phi - z.powi(5)).norm() < 1e-15);
        assert!((pair.phi_star - ONE).norm() < 1e-15);
        assert!(matches!(eval_pair(&p, z, 7), Err(OpucError::OutOfRange { .. })));
    }

    #[test]
    fn single_transfer_step() {
        let p = params(&[0.5, 0.0]);
        let pair = eval_pair(&p, ONE, 1).unwrap();
        assert!((pair.phi - c(0.577_350_269_189_625_8)).norm() < 1e-12);
        assert!((pair.phi_star - c(0.577_350_269_189_625_8)).norm() < 1e-12);
    }

    #[test]
    fn compensated_and_plain_products_agree() {
        let v: Vec<Complex64> = (0..200).map(|n| Complex64::new(0.4 / (n as f64 + 1.0), 0.1 / (n as f64 + 2.0))).collect();
        let p = SchurParameters::new(v).unwrap();
        let z = Complex64::from_polar(1.0, 0.9);
        let long = eval_pairs(&p, z, 200).unwrap();
        let short = eval_pairs(&p, z, 120).unwrap();
        for k in 0..=120 {
            assert!((long[k].phi - short[k].phi).norm() < 1e-12);
        }
        assert!((long[200].phi.norm() - long[200].phi_star.norm()).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_cmv_basis() {
        let p = params(&[0.0; 12]);
        let xi = Complex64::from_polar(1.0, 0.8);
        for k in 0..5 {
            assert!((chi(&p, xi, 2 * k).unwrap() - xi.conj().powi(k as i32)).norm() < 1e-14);
            assert!((chi(&p, xi, 2 * k + 1).unwrap() - xi.powi(k as i32 + 1)).norm() < 1e-14);
        }
        assert!(matches!(chi(&p, c(0.5), 1), Err(OpucError::NotOnBoundary(_))));
    }

    #[test]
    fn cd_kernel_lebesgue_geometric_sum() {
        let p = params(&[0.0; 6]);
        let v = cd_kernel_poly(&p, ONE, c(0.5), 2).unwrap();
        assert!((v - c(1.75)).norm() < 1e-14);
        let diag = cd_kernel_poly(&p, ONE, ONE, 2).unwrap();
        assert!((diag - c(3.0)).norm() < 1e-14);
    }

    #[test]
    fn cmv_kernel_lebesgue_direct_sum() {
        let p = params(&[0.0; 6]);
        let i = Complex64::new(0.0, 1.0);
        // χ = 1, ξ, ξ̄ → 1 + conj(1)·i + conj(1)·(-i)
        let direct = cd_kernel_cmv_direct(&p, ONE, i, 2).unwrap();
        assert!((direct - ONE).norm() < 1e-14);
        assert!((cd_kernel_cmv(&p, ONE, i, 2).unwrap() - direct).norm() < 1e-14);
        assert!((cd_kernel_cmv_shifted(&p, ONE, i, 2).unwrap() - direct).norm() < 1e-14);
        assert!((cd_kernel_cmv(&p, ONE, i, 1).unwrap() - cd_kernel_cmv_direct(&p, ONE, i, 1).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn dual_is_involution() {
        let p = params(&[0.5, -0.2, 0.1]);
        let d = dual_parameters(&p);
        assert_eq!(d.values()[0], c(-0.5));
        assert_eq!(dual_parameters(&d), p);
        assert_eq!(dual_parameters(&params(&[0.0, 0.0])), params(&[0.0, 0.0]));
    }

    #[test]
    fn zero_free_growth_extremal() {
        let (lhs, rhs) = zero_free_growth(&[ONE, ONE], ONE, 0.6);
        assert!((lhs - 1.6).abs() < 1e-15);
        assert!((lhs - rhs).abs() < 1e-15);
        let p = params(&[0.0; 4]);
        let (l, r) = mate_nevai_lower(&p, ONE, 0.5, 4).unwrap();
        assert_eq!(l, 1.0);
        assert!((r - 0.75f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn phi_star_matches_inverse_outer_function() {
        let leb = CircleMeasure::lebesgue(256);
        let zero = params(&[0.0; 4]);
        assert!(phi_star_l2_residual(&leb, &zero, 3).unwrap() < 1e-28);
        let m = CircleMeasure::new(poisson_weight(0.5, 4096), vec![], false).unwrap();
        let p = params(&[0.5, 0.0, 0.0]);
        assert!(phi_star_l2_residual(&m, &p, 1).unwrap() < 1e-10);
        assert!(phi_star_l2_residual(&m, &p, 3).unwrap() < 1e-10);
        assert!(phi_star_l2_residual(&m, &p, 0).unwrap() > 1e-3);
    }
}
