//! Carathéodory and Schur functions, the Schur algorithm, and the
//! Szego/entropy product identities.
//!
//! Pointwise Schur iterates are available by two routes. The forward route
//! applies `z f_{n+1} = (f_n - a_n)/(1 - ā_n f_n)` to a supplied `f(z)`; it
//! amplifies input error by roughly `|z|⁻¹` per step. The backward route runs
//! the inverse map `f_n = (a_n + z f_{n+1})/(1 + ā_n z f_{n+1})` down from the
//! end of the parameter sequence, which contracts errors, and is what the
//! identity checks use.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::measure::{check_interior, CircleMeasure};
use crate::opuc::eval_pair;
use crate::series::TaylorSeries;

/// `|a_n|` must stay below `1 - ESCAPE_MARGIN`.
pub const ESCAPE_MARGIN: f64 = 1e-12;
/// Extra moment orders consumed beyond the requested parameter count.
pub const SERIES_GUARD: usize = 8;
/// Forward pointwise iteration is refused below this `|z|`.
pub const Z_MIN: f64 = 1e-3;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Schur parameters (Verblunsky coefficients) `a_n = f_n(0)` and
/// `ρ_n = sqrt(1 - |a_n|²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct SchurParameters {
    values: Vec<Complex64>,
    rho: Vec<f64>,
}

impl SchurParameters {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some((index, a)) = values
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.norm() <= 1.0 - ESCAPE_MARGIN))
        {
            return Err(OpucError::ParameterEscape { index, modulus: a.norm() });
        }
        let rho = values.iter().map(|a| (1.0 - a.norm_sqr()).sqrt()).collect();
        Ok(Self { values, rho })
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); len]).expect("zero parameters are valid")
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn truncated(&self, len: usize) -> Self {
        let len = len.min(self.len());
        Self { values: self.values[..len].to_vec(), rho: self.rho[..len].to_vec() }
    }
}

impl TryFrom<Vec<Complex64>> for SchurParameters {
    type Error = OpucError;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SchurParameters> for Vec<Complex64> {
    fn from(p: SchurParameters) -> Self {
        p.values
    }
}

/// Taylor series of `F(z) = 1 + 2 Σ_{k>=1} c_k z^k` from moments `c_0..c_M`.
pub fn caratheodory_series(moments: &[Complex64]) -> Result<TaylorSeries> {
    let c0 = *moments.first().ok_or(OpucError::InvalidArgument("no moments".into()))?;
    if (c0 - ONE).norm() > 1e-10 {
        return Err(OpucError::BadNormalization(c0.re));
    }
    let mut coeffs: Vec<Complex64> = moments.iter().map(|c| 2.0 * c).collect();
    coeffs[0] = ONE;
    Ok(TaylorSeries::new(coeffs))
}

/// Schur function series: `f = shift_down((F - 1)/(F + 1))`, order `M - 1`.
pub fn schur_series(caratheodory: &TaylorSeries) -> Result<TaylorSeries> {
    if (caratheodory.coeff(0) - ONE).norm() > 1e-10 {
        return Err(OpucError::BadNormalization(caratheodory.coeff(0).re));
    }
    let g = caratheodory
        .add_constant(-ONE)
        .divide(&caratheodory.add_constant(ONE))?;
    g.shift_down()
        .ok_or_else(|| OpucError::InvalidArgument("Carathéodory series of order 0".into()))
}

/// Series Schur algorithm: `a_n` is the constant term of `f_n` and
/// `f_{n+1} = shift_down((f_n - a_n)/(1 - ā_n f_n))`.
pub fn schur_parameters_from_series(f: &TaylorSeries, n_max: usize) -> Result<SchurParameters> {
    if n_max > f.truncation_order() {
        return Err(OpucError::OutOfRange { requested: n_max, available: f.truncation_order() });
    }
    let mut values = Vec::with_capacity(n_max);
    let mut current = f.clone();
    for index in 0..n_max {
        let a = current.coeff(0);
        if !(a.norm() < 1.0 - ESCAPE_MARGIN) {
            return Err(OpucError::ParameterEscape { index, modulus: a.norm() });
        }
        values.push(a);
        if index + 1 == n_max {
            break;
        }
        let num = current.add_constant(-a);
        let den = current.scale(-a.conj()).add_constant(ONE);
        current = num
            .divide(&den)?
            .shift_down()
            .expect("order stays positive while index < truncation order");
    }
    SchurParameters::new(values)
}

/// Parameters `a_0..a_{n_max-1}` from a measure's moments via the series
/// route, consuming `n_max + SERIES_GUARD` moments.
pub fn schur_parameters_from_measure(measure: &CircleMeasure, n_max: usize) -> Result<SchurParameters> {
    let moments = measure.moments(n_max + SERIES_GUARD)?;
    let f = schur_series(&caratheodory_series(&moments)?)?;
    schur_parameters_from_series(&f, n_max)
}

/// `f(z)` from the Carathéodory function: `zf = (F - 1)/(F + 1)`.
pub fn schur_function_value(measure: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    check_interior(z)?;
    if z.norm() < Z_MIN {
        return Err(OpucError::NearZeroArgument(z.norm()));
    }
    let f = measure.caratheodory(z)?;
    Ok((f - ONE) / ((f + ONE) * z))
}

fn forward_step(f: Complex64, a: Complex64, z: Complex64) -> Complex64 {
    (f - a) / (z * (ONE - a.conj() * f))
}

fn check_contractive(index: usize, v: Complex64) -> Result<()> {
    if !(v.norm() < 1.0 + 1e-10) {
        return Err(OpucError::ContractivityLoss { index, modulus: v.norm() });
    }
    Ok(())
}

/// `f_n(z)` by `n` forward applications of the Schur step to `f(z)`.
pub fn schur_iterate_eval(
    params: &SchurParameters,
    f_value: Complex64,
    z: Complex64,
    n: usize,
) -> Result<Complex64> {
    Ok(*SchurIterates::forward(params, f_value, z, n)?.values.last().expect("n + 1 values"))
}

/// Pointwise Schur iterates `f_0(z)..=f_n(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurIterates {
    pub z: Complex64,
    pub values: Vec<Complex64>,
}

impl SchurIterates {
    pub fn forward(params: &SchurParameters, f_value: Complex64, z: Complex64, n: usize) -> Result<Self> {
        check_interior(z)?;
        if z.norm() < Z_MIN {
            return Err(OpucError::NearZeroArgument(z.norm()));
        }
        if n > params.len() {
            return Err(OpucError::OutOfRange { requested: n, available: params.len() });
        }
        check_contractive(0, f_value)?;
        let mut values = Vec::with_capacity(n + 1);
        values.push(f_value);
        for (k, a) in params.values()[..n].iter().enumerate() {
            let next = forward_step(values[k], *a, z);
            check_contractive(k + 1, next)?;
            values.push(next);
        }
        Ok(Self { z, values })
    }

    /// Iterates `f_0..=f_n` from the parameter tail, taking `f_L = 0` at the
    /// end of the stored sequence (exact for finitely many nonzero parameters).
    pub fn backward(params: &SchurParameters, z: Complex64, n: usize) -> Result<Self> {
        check_interior(z)?;
        if n > params.len() {
            return Err(OpucError::OutOfRange { requested: n, available: params.len() });
        }
        let mut tail = vec![Complex64::new(0.0, 0.0); params.len() + 1];
        for k in (0..params.len()).rev() {
            let a = params.values()[k];
            let w = z * tail[k + 1];
            tail[k] = (a + w) / (ONE + a.conj() * w);
        }
        tail.truncate(n + 1);
        Ok(Self { z, values: tail })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn require(&self, n: usize) -> Result<&[Complex64]> {
        if n > self.values.len() {
            return Err(OpucError::OutOfRange { requested: n, available: self.values.len() });
        }
        Ok(&self.values[..n])
    }
}

/// `|∫ log w dm - Σ_{k<n} log(1 - |a_k|²)|`.
pub fn szego_formula_residual(measure: &CircleMeasure, params: &SchurParameters, n: usize) -> Result<f64> {
    let log_mean = measure.poisson_log_weight(Complex64::new(0.0, 0.0))?;
    if n > params.len() {
        return Err(OpucError::OutOfRange { requested: n, available: params.len() });
    }
    let product: f64 = params.rho()[..n].iter().map(|r| (r * r).ln()).sum();
    Ok((log_mean - product).abs())
}

/// Partial entropy product `log Π_{k<n} (1 - |z f_k|²)/(1 - |f_k|²)`.
pub fn entropy_product(iterates: &SchurIterates, n: usize) -> Result<f64> {
    let z2 = iterates.z.norm_sqr();
    let mut total = 0.0;
    for (k, f) in iterates.require(n)?.iter().enumerate() {
        let f2 = f.norm_sqr();
        let factor = (1.0 - z2 * f2) / (1.0 - f2);
        if !(factor >= 1.0 - 1e-12) {
            return Err(OpucError::ContractivityLoss { index: k, modulus: f.norm() });
        }
        total += factor.ln();
    }
    Ok(total)
}

/// `((1 - |z|²) Σ_{k<n} |f_k|²/(1 - |f_k|²), e^K - 1)` for the supplied
/// entropy value `K(μ, z)`.
pub fn schur_sum_bound(iterates: &SchurIterates, n: usize, entropy: f64) -> Result<(f64, f64)> {
    let z2 = iterates.z.norm_sqr();
    let sum: f64 = iterates
        .require(n)?
        .iter()
        .map(|f| f.norm_sqr() / (1.0 - f.norm_sqr()))
        .sum();
    Ok(((1.0 - z2) * sum, entropy.exp_m1()))
}

/// `(1 - |z b_n f_n|²)/|1 - z b_n f_n|²` with `b_n = φ_n/φ*_n`.
pub fn khrushchev_rhs(params: &SchurParameters, iterates: &SchurIterates, n: usize) -> Result<f64> {
    let z = iterates.z;
    let f_n = *iterates
        .values
        .get(n)
        .ok_or(OpucError::OutOfRange { requested: n, available: iterates.values.len() })?;
    let pair = eval_pair(params, z, n)?;
    let b = pair.phi / pair.phi_star;
    let u = z * b * f_n;
    let denom = (ONE - u).norm_sqr();
    if denom.sqrt() < 1e-12 {
        return Err(OpucError::DegenerateDenominator(denom.sqrt()));
    }
    Ok((1.0 - u.norm_sqr()) / denom)
}

/// `∫ |φ*_n|² P(z, ·) dμ` by quadrature (left side of Khrushchev's formula).
pub fn khrushchev_lhs(measure: &CircleMeasure, params: &SchurParameters, z: Complex64, n: usize) -> Result<f64> {
    let mut err = None;
    let g = crate::measure::SupportSamples::from_fn(measure, |xi| match eval_pair(params, xi, n) {
        Ok(p) => p.phi_star.norm_sqr(),
        Err(e) => {
            err = Some(e);
            0.0
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    measure.weighted_poisson(&g, z)
}
