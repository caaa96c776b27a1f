use num_complex::Complex64;

use crate::error::{OpucError, Result};

/// Truncated power series `Σ_{k <= order} c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coefficients: Vec<Complex64>,
}

const DIVISION_FLOOR: f64 = 1e-12;

impl TaylorSeries {
    /// Panics on an empty coefficient vector (order would be undefined).
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        assert!(!coefficients.is_empty(), "a Taylor series needs at least one coefficient");
        Self { coefficients }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
        c[0] = value;
        Self::new(c)
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coefficients[k]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        crate::spectral::horner(&self.coefficients, z)
    }

    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coefficients[0] += c;
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * s).collect())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coefficients.iter().map(|c| c.conj()).collect())
    }

    /// Quotient by triangular recursion, truncated to the smaller order.
    pub fn divide(&self, denominator: &TaylorSeries) -> Result<Self> {
        let b0 = denominator.coefficients[0];
        if b0.norm() < DIVISION_FLOOR {
            return Err(OpucError::DivisionBlowup(b0.norm()));
        }
        let order = self.truncation_order().min(denominator.truncation_order());
        let b = &denominator.coefficients;
        let mut q: Vec<Complex64> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coefficients[k];
            for j in 1..=k {
                acc -= b[j] * q[k - j];
            }
            q.push(acc / b0);
        }
        Ok(Self::new(q))
    }

    /// `(s(z) - s(0))/z`: drops the constant term, lowering the order by one.
    pub fn shift_down(&self) -> Option<Self> {
        (self.coefficients.len() > 1).then(|| Self::new(self.coefficients[1..].to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn geometric_division() {
        // 1/(1 - z/2) = Σ 2^{-k} z^k
        let one = TaylorSeries::constant(c(1.0), 6);
        let den = TaylorSeries::new(vec![c(1.0), c(-0.5), c(0.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let q = one.divide(&den).unwrap();
        for k in 0..=6 {
            assert!((q.coeff(k) - c(0.5f64.powi(k as i32))).norm() < 1e-15);
        }
    }

    #[test]
    fn division_by_zero_constant_fails() {
        let s = TaylorSeries::constant(c(1.0), 2);
        let z = TaylorSeries::new(vec![c(0.0), c(1.0), c(0.0)]);
        assert!(matches!(s.divide(&z), Err(OpucError::DivisionBlowup(_))));
    }

    #[test]
    fn shift_down_drops_order() {
        let s = TaylorSeries::new(vec![c(1.0), c(2.0), c(3.0)]);
        let t = s.shift_down().unwrap();
        assert_eq!(t.coefficients(), &[c(2.0), c(3.0)]);
        assert!(TaylorSeries::constant(c(1.0), 0).shift_down().is_none());
    }
}
