//! Jost solutions of the Szego recurrence and the dual-measure identity.
//!
//! The dual measure `ν` has Schur function `-f`, hence Carathéodory function
//! `1/F_μ`; its density is `Re(1/F_μ)` on the circle. Its polynomials `ψ_n`
//! always come from the negated parameters, never from the dual density, so
//! that the duality identity compares two independent constructions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::measure::{check_boundary, CircleMeasure};
use crate::opuc::{dual_parameters, PairIter};
use crate::outer::{szego_boundary, szego_on_circle};
use crate::schur::SchurParameters;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JostSolution {
    pub xi: Complex64,
    pub side: Side,
    /// `f_±(n, ξ)` for `n = 0..=n_max`.
    pub entries: Vec<[Complex64; 2]>,
}

impl JostSolution {
    /// Asymptotic profile: `(ξ^n, 0)` for `f_+`, `(0, 1)` for `f_-`.
    pub fn target(&self, n: usize) -> [Complex64; 2] {
        match self.side {
            Side::Plus => [self.xi.powu(n as u32), ZERO],
            Side::Minus => [ZERO, ONE],
        }
    }

    /// `max_n |entry_{n+1} - T_n entry_n| / max(1, |entry_{n+1}|)`.
    pub fn recurrence_residual(&self, params: &SchurParameters) -> f64 {
        let z = self.xi;
        self.entries
            .windows(2)
            .zip(params.values().iter().zip(params.rho()))
            .map(|(e, (a, rho))| {
                let [p, s] = e[0];
                let predicted = [(z * p - a.conj() * s) / *rho, (-a * z * p + s) / *rho];
                euclid(sub(e[1], predicted)) / euclid(e[1]).max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

fn sub(u: [Complex64; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [u[0] - v[0], u[1] - v[1]]
}

fn euclid(u: [Complex64; 2]) -> f64 {
    (u[0].norm_sqr() + u[1].norm_sqr()).sqrt()
}

/// Dual measure `ν` on the grid of `μ`, density `Re(1/F_μ)`.
pub fn dual_measure(measure: &CircleMeasure) -> Result<CircleMeasure> {
    let weight = measure
        .inverse_caratheodory_boundary()
        .iter()
        .map(|g| g.re.max(0.0))
        .collect();
    let nu = CircleMeasure::with_floor(weight, vec![], true, measure.w_floor())?;
    Ok(match measure.family() {
        Some(f) => nu.with_family(format!("dual({f})")),
        None => nu,
    })
}

/// Boundary data shared by all Jost evaluations for one measure.
#[derive(Debug, Clone)]
pub struct ScatteringData {
    params: SchurParameters,
    dual: SchurParameters,
    measure: CircleMeasure,
    dual_measure: CircleMeasure,
}

impl ScatteringData {
    pub fn new(measure: &CircleMeasure, params: &SchurParameters) -> Result<Self> {
        measure.require_szego()?;
        let dual_measure = dual_measure(measure)?;
        dual_measure.require_szego()?;
        Ok(Self {
            params: params.clone(),
            dual: dual_parameters(params),
            measure: measure.clone(),
            dual_measure,
        })
    }

    pub fn params(&self) -> &SchurParameters {
        &self.params
    }

    pub fn dual_params(&self) -> &SchurParameters {
        &self.dual
    }

    pub fn dual_measure(&self) -> &CircleMeasure {
        &self.dual_measure
    }

    /// `(f_+, f_-)` at `ξ` for `n = 0..=n_max`.
    pub fn jost_solutions(&self, xi: Complex64, n_max: usize) -> Result<(JostSolution, JostSolution)> {
        check_boundary(xi)?;
        let d_mu = szego_on_circle(&self.measure, xi)?;
        let d_nu = szego_on_circle(&self.dual_measure, xi)?;
        let big_f = d_mu / d_nu;
        let inv = d_mu.inv();
        let phi = PairIter::new(&self.params, xi, n_max)?;
        let psi = PairIter::new(&self.dual, xi, n_max)?;
        let (mut plus, mut minus) = (Vec::with_capacity(n_max + 1), Vec::with_capacity(n_max + 1));
        for (p, q) in phi.zip(psi) {
            let dual_col = [q.phi, -q.phi_star];
            let col = [p.phi, p.phi_star];
            plus.push([
                0.5 * inv * (dual_col[0] + big_f * col[0]),
                0.5 * inv * (dual_col[1] + big_f * col[1]),
            ]);
            minus.push([
                -0.5 * inv.conj() * (dual_col[0] - big_f.conj() * col[0]),
                -0.5 * inv.conj() * (dual_col[1] - big_f.conj() * col[1]),
            ]);
        }
        Ok((
            JostSolution { xi, side: Side::Plus, entries: plus },
            JostSolution { xi, side: Side::Minus, entries: minus },
        ))
    }
}

pub fn jost_solutions(
    measure: &CircleMeasure,
    params: &SchurParameters,
    xi: Complex64,
    n_max: usize,
) -> Result<(JostSolution, JostSolution)> {
    ScatteringData::new(measure, params)?.jost_solutions(xi, n_max)
}

/// `(1/n) Σ_{k<n} ‖f(k, ξ) - target_k‖` (Euclidean norm on both components).
pub fn averaged_jost_deviation(solution: &JostSolution, n: usize) -> Result<f64> {
    if n == 0 || n > solution.entries.len() {
        return Err(OpucError::OutOfRange { requested: n, available: solution.entries.len() });
    }
    let total: f64 = solution.entries[..n]
        .iter()
        .enumerate()
        .map(|(k, e)| euclid(sub(*e, solution.target(k))))
        .sum();
    Ok(total / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityResidual {
    /// `max |Re(φ*_n conj(ψ*_n)) - 1|` over the grid and `n <= n_check`.
    pub polynomial: f64,
    /// `max |Re(D_μ⁻¹ conj(D_ν⁻¹)) - 1|` over the grid.
    pub limit: f64,
}

impl DualityResidual {
    pub fn max(&self) -> f64 {
        self.polynomial.max(self.limit)
    }
}

pub fn duality_identity_residual(
    measure: &CircleMeasure,
    params: &SchurParameters,
    n_check: usize,
) -> Result<DualityResidual> {
    let data = ScatteringData::new(measure, params)?;
    data.duality_residual(n_check)
}

impl ScatteringData {
    pub fn duality_residual(&self, n_check: usize) -> Result<DualityResidual> {
        let n_check = n_check.min(self.params.len());
        let mut polynomial: f64 = 0.0;
        for j in 0..self.measure.grid_size() {
            let xi = self.measure.grid_point(j);
            let phi = PairIter::new(&self.params, xi, n_check)?;
            let psi = PairIter::new(&self.dual, xi, n_check)?;
            for (p, q) in phi.zip(psi) {
                polynomial = polynomial.max(((p.phi_star * q.phi_star.conj()).re - 1.0).abs());
            }
        }
        let d_mu = szego_boundary(&self.measure)?;
        let d_nu = szego_boundary(&self.dual_measure)?;
        let limit = d_mu
            .iter()
            .zip(&d_nu)
            .map(|(a, b)| ((a.inv() * b.inv().conj()).re - 1.0).abs())
            .fold(0.0, f64::max);
        Ok(DualityResidual { polynomial, limit })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bernstein_szego(r: f64, n: usize) -> CircleMeasure {
        let w = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (1.0 - r * r) / (1.0 - 2.0 * r * t.cos() + r * r)
            })
            .collect();
        CircleMeasure::new(w, vec![], false).unwrap()
    }

    fn bs_params(len: usize) -> SchurParameters {
        let mut v = vec![c(0.0); len];
        v[0] = c(0.5);
        SchurParameters::new(v).unwrap()
    }

    #[test]
    fn lebesgue_jost_solutions_are_free() {
        let m = CircleMeasure::lebesgue(256);
        let xi = Complex64::from_polar(1.0, 0.7);
        let (plus, minus) = jost_solutions(&m, &SchurParameters::zeros(16), xi, 16).unwrap();
        for (n, (p, q)) in plus.entries.iter().zip(&minus.entries).enumerate() {
            assert!(euclid(sub(*p, [xi.powu(n as u32), ZERO])) < 1e-14);
            assert!(euclid(sub(*q, [ZERO, ONE])) < 1e-14);
        }
        assert!(averaged_jost_deviation(&plus, 16).unwrap() < 1e-14);
        assert!(averaged_jost_deviation(&minus, 16).unwrap() < 1e-14);
    }

    #[test]
    fn dual_of_poisson_weight() {
        // Schur function -0.5 gives the reflected Poisson weight.
        let m = bernstein_szego(0.5, 4096);
        let nu = dual_measure(&m).unwrap();
        let expect = bernstein_szego(-0.5, 4096);
        for (a, b) in nu.weight().iter().zip(expect.weight()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_weight_jost_recurrence_and_decay() {
        let m = bernstein_szego(0.5, 4096);
        let p = bs_params(256);
        let data = ScatteringData::new(&m, &p).unwrap();
        let (plus, minus) = data.jost_solutions(c(1.0), 256).unwrap();
        assert!(plus.recurrence_residual(&p) < 1e-10);
        assert!(minus.recurrence_residual(&p) < 1e-10);
        for sol in [&plus, &minus] {
            let d32 = averaged_jost_deviation(sol, 32).unwrap();
            let d256 = averaged_jost_deviation(sol, 256).unwrap();
            assert!(d256 < d32, "{:?}: {d32} {d256}", sol.side);
        }
    }

    #[test]
    fn duality_closed_form() {
        let m = bernstein_szego(0.5, 1024);
        let r = duality_identity_residual(&m, &bs_params(32), 32).unwrap();
        assert!(r.polynomial < 1e-12, "{r:?}");
        assert!(r.limit < 1e-10, "{r:?}");
        let leb = duality_identity_residual(&CircleMeasure::lebesgue(64), &SchurParameters::zeros(4), 4).unwrap();
        assert_eq!(leb.max(), 0.0);
    }
}
