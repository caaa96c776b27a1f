//! Probability measures `w dm + Σ t_i δ_{α_i}` on the unit circle.
//!
//! The absolutely continuous part is sampled on the uniform grid
//! `θ_j = 2πj/N`; atoms are kept exactly and always integrated in closed
//! form. All integrals against the density go through the periodic
//! trapezoid rule (equivalently, exact integration of the trigonometric
//! interpolant, see [`crate::spectral`]).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::spectral::{herglotz_coefficients, horner, real_half_spectrum};

/// Samples below this value make a measure non-Szego.
pub const DEFAULT_W_FLOOR: f64 = 1e-14;
/// Interior operations require `|z| <= 1 - BOUNDARY_EXCLUSION`.
pub const BOUNDARY_EXCLUSION: f64 = 1e-12;
/// Tolerance on `|ξ| = 1` for boundary-point arguments.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;
/// Default number of grid angles.
pub const DEFAULT_GRID_SIZE: usize = 4096;

const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(angle: f64, mass: f64) -> Self {
        Self { angle, mass }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }
}

/// JSON measure file: `{"grid_size", "weight", "atoms", "family"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub grid_size: usize,
    pub weight: Vec<f64>,
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

/// Nonnegative function on the support of a measure: grid samples plus one
/// value per atom (in atom order).
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSamples<T> {
    pub grid: Vec<T>,
    pub atoms: Vec<T>,
}

impl<T: Clone> SupportSamples<T> {
    pub fn constant(measure: &CircleMeasure, value: T) -> Self {
        Self {
            grid: vec![value.clone(); measure.grid_size()],
            atoms: vec![value; measure.atoms().len()],
        }
    }

    /// Samples a function of the boundary point on the grid and at the atoms.
    pub fn from_fn(measure: &CircleMeasure, mut f: impl FnMut(Complex64) -> T) -> Self {
        let grid = (0..measure.grid_size()).map(|j| f(measure.grid_point(j))).collect();
        let atoms = measure.atoms().iter().map(|a| f(a.point())).collect();
        Self { grid, atoms }
    }

    fn check(&self, measure: &CircleMeasure) -> Result<()> {
        if self.grid.len() != measure.grid_size() {
            return Err(OpucError::GridMismatch {
                expected: measure.grid_size(),
                got: self.grid.len(),
            });
        }
        if self.atoms.len() != measure.atoms().len() {
            return Err(OpucError::GridMismatch {
                expected: measure.atoms().len(),
                got: self.atoms.len(),
            });
        }
        Ok(())
    }
}

/// Immutable probability measure on the circle.
#[derive(Debug, Clone)]
pub struct CircleMeasure {
    weight: Vec<f64>,
    atoms: Vec<Atom>,
    w_floor: f64,
    family: Option<String>,
    /// Taylor coefficients of `s_0 + 2Σ s_k z^k` for the density.
    weight_herglotz: Vec<Complex64>,
    /// Same for `log w`, present only for numerically Szego measures.
    log_herglotz: Option<Vec<Complex64>>,
    min_sample: f64,
}

pub(crate) fn check_interior(z: Complex64) -> Result<()> {
    let r = z.norm();
    if !r.is_finite() || r > 1.0 - BOUNDARY_EXCLUSION {
        return Err(OpucError::BoundaryPoint(r));
    }
    Ok(())
}

pub(crate) fn check_boundary(xi: Complex64) -> Result<()> {
    let r = xi.norm();
    if !r.is_finite() || (r - 1.0).abs() > BOUNDARY_TOLERANCE {
        return Err(OpucError::NotOnBoundary(r));
    }
    Ok(())
}

fn poisson_kernel(point: Complex64, z: Complex64) -> f64 {
    (1.0 - z.norm_sqr()) / (Complex64::new(1.0, 0.0) - point.conj() * z).norm_sqr()
}

impl CircleMeasure {
    /// Builds a measure from density samples and atoms.
    ///
    /// With `normalize`, density and masses are scaled by a common factor so
    /// the total mass is one; otherwise the total mass is validated.
    pub fn new(weight_samples: Vec<f64>, atoms: Vec<Atom>, normalize: bool) -> Result<Self> {
        Self::with_floor(weight_samples, atoms, normalize, DEFAULT_W_FLOOR)
    }

    pub fn with_floor(
        mut weight: Vec<f64>,
        mut atoms: Vec<Atom>,
        normalize: bool,
        w_floor: f64,
    ) -> Result<Self> {
        if weight.is_empty() {
            return Err(OpucError::InvalidArgument("empty weight sample sequence".into()));
        }
        if let Some((j, w)) = weight.iter().enumerate().find(|(_, w)| !(**w >= 0.0) || !w.is_finite()) {
            return Err(OpucError::NegativeInput(format!("weight sample {j} = {w}")));
        }
        for a in &mut atoms {
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                return Err(OpucError::NegativeInput(format!("atom mass {}", a.mass)));
            }
            if !a.angle.is_finite() {
                return Err(OpucError::InvalidAtom(format!("angle {}", a.angle)));
            }
            a.angle = a.angle.rem_euclid(TAU);
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                let gap = (a.angle - b.angle).abs();
                if gap.min(TAU - gap) < 1e-14 {
                    return Err(OpucError::InvalidAtom(format!(
                        "duplicate atom angle {}",
                        a.angle
                    )));
                }
            }
        }
        let n = weight.len() as f64;
        let ac_mass: f64 = weight.iter().sum::<f64>() / n;
        let total = ac_mass + atoms.iter().map(|a| a.mass).sum::<f64>();
        if total == 0.0 {
            return Err(OpucError::NonNormalizable);
        }
        if normalize {
            let scale = 1.0 / total;
            weight.iter_mut().for_each(|w| *w *= scale);
            atoms.iter_mut().for_each(|a| a.mass *= scale);
        } else if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(OpucError::NotProbability(total));
        }

        let grid_size = weight.len();
        let weight_herglotz = herglotz_coefficients(&real_half_spectrum(&weight), grid_size);
        let min_sample = weight.iter().cloned().fold(f64::INFINITY, f64::min);
        let log_herglotz = (min_sample >= w_floor).then(|| {
            let logs: Vec<f64> = weight.iter().map(|w| w.ln()).collect();
            herglotz_coefficients(&real_half_spectrum(&logs), grid_size)
        });
        Ok(Self {
            weight,
            atoms,
            w_floor,
            family: None,
            weight_herglotz,
            log_herglotz,
            min_sample,
        })
    }

    /// Lebesgue measure `m` on an `N`-point grid.
    pub fn lebesgue(grid_size: usize) -> Self {
        Self::new(vec![1.0; grid_size], Vec::new(), false)
            .expect("unit density is a probability measure")
            .with_family("lebesgue")
    }

    pub fn with_family(mut self, family: impl Into<String>) -> Self {
        self.family = Some(family.into());
        self
    }

    pub fn from_file(file: MeasureFile, normalize: bool) -> Result<Self> {
        if file.weight.len() != file.grid_size {
            return Err(OpucError::GridMismatch {
                expected: file.grid_size,
                got: file.weight.len(),
            });
        }
        let mut m = Self::new(file.weight, file.atoms, normalize)?;
        m.family = file.family;
        Ok(m)
    }

    pub fn to_file(&self) -> MeasureFile {
        MeasureFile {
            grid_size: self.grid_size(),
            weight: self.weight.clone(),
            atoms: self.atoms.clone(),
            family: self.family.clone(),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.weight.len()
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn w_floor(&self) -> f64 {
        self.w_floor
    }

    pub fn grid_angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.grid_size() as f64
    }

    pub fn grid_point(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.grid_angle(j))
    }

    pub fn total_mass(&self) -> f64 {
        self.weight.iter().sum::<f64>() / self.grid_size() as f64
            + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    pub fn is_szego(&self) -> bool {
        self.log_herglotz.is_some()
    }

    pub(crate) fn require_szego(&self) -> Result<&[Complex64]> {
        self.log_herglotz.as_deref().ok_or(OpucError::NotSzego {
            sample: self.min_sample,
            floor: self.w_floor,
        })
    }

    /// Largest moment index trusted by the anti-aliasing policy.
    pub fn max_moment_index(&self) -> usize {
        self.grid_size() / 8
    }

    /// Trigonometric interpolant of the density at angle `theta`.
    pub fn density_at(&self, theta: f64) -> f64 {
        horner(&self.weight_herglotz, Complex64::from_polar(1.0, theta)).re
    }

    /// Poisson extension `P(μ, z)`.
    pub fn poisson(&self, z: Complex64) -> Result<f64> {
        check_interior(z)?;
        let ac = horner(&self.weight_herglotz, z).re;
        let singular: f64 = self.atoms.iter().map(|a| a.mass * poisson_kernel(a.point(), z)).sum();
        Ok(ac + singular)
    }

    /// Poisson extension of `log w` (atoms do not contribute).
    pub fn poisson_log_weight(&self, z: Complex64) -> Result<f64> {
        let coeffs = self.require_szego()?;
        check_interior(z)?;
        Ok(horner(coeffs, z).re)
    }

    /// `P(g dμ, z)` for a nonnegative `g` sampled on the support of `μ`.
    pub fn weighted_poisson(&self, g: &SupportSamples<f64>, z: Complex64) -> Result<f64> {
        g.check(self)?;
        check_interior(z)?;
        if let Some(v) = g.grid.iter().chain(g.atoms.iter()).find(|v| !(**v >= 0.0)) {
            return Err(OpucError::NegativeInput(format!("weight function value {v}")));
        }
        let product: Vec<f64> = g.grid.iter().zip(&self.weight).map(|(g, w)| g * w).collect();
        let coeffs = herglotz_coefficients(&real_half_spectrum(&product), self.grid_size());
        let ac = horner(&coeffs, z).re;
        let singular: f64 = self
            .atoms
            .iter()
            .zip(&g.atoms)
            .map(|(a, g)| g * a.mass * poisson_kernel(a.point(), z))
            .sum();
        Ok(ac + singular)
    }

    /// Moment `c_k = ∫ ξ̄^k dμ(ξ)`.
    pub fn moment(&self, k: usize) -> Result<Complex64> {
        let limit = self.max_moment_index();
        if k > limit {
            return Err(OpucError::AliasRisk { index: k, limit });
        }
        let ac = if k == 0 {
            self.weight_herglotz[0]
        } else if self.grid_size() % 2 == 0 && k == self.grid_size() / 2 {
            self.weight_herglotz[k]
        } else {
            self.weight_herglotz[k] * 0.5
        };
        let singular: Complex64 = self
            .atoms
            .iter()
            .map(|a| a.mass * Complex64::from_polar(1.0, -(k as f64) * a.angle))
            .sum();
        Ok(ac + singular)
    }

    /// Moments `c_0..=c_m`.
    pub fn moments(&self, m: usize) -> Result<Vec<Complex64>> {
        (0..=m).map(|k| self.moment(k)).collect()
    }

    /// Fejer mean `F_{n-1}(μ, ξ0) = (1/n) ∫ |Σ_{k<n} (ξ̄0 ξ)^k|² dμ(ξ)`.
    pub fn fejer_mean(&self, xi0: Complex64, n: usize) -> Result<f64> {
        check_boundary(xi0)?;
        if n == 0 {
            return Err(OpucError::InvalidArgument("Fejer mean order n must be >= 1".into()));
        }
        let mut total = self.moment(0)?.re;
        let mut power = Complex64::new(1.0, 0.0);
        for m in 1..n {
            power *= xi0;
            let c = self.moment(m)?;
            total += 2.0 * (1.0 - m as f64 / n as f64) * (power * c).re;
        }
        Ok(total)
    }

    /// `μ_s(I)/m(I)` for the arc `I = {ξ : |ξ - ξ0| < ε}`.
    pub fn interval_ratio(&self, xi0: Complex64, eps: f64) -> Result<f64> {
        check_boundary(xi0)?;
        let spacing = TAU / self.grid_size() as f64;
        if !(eps > spacing) {
            return Err(OpucError::InvalidArgument(format!(
                "arc radius {eps} must exceed the grid spacing {spacing}"
            )));
        }
        let arc_measure = if eps >= 2.0 { 1.0 } else { 2.0 * (eps / 2.0).asin() / PI };
        let singular: f64 = self
            .atoms
            .iter()
            .filter(|a| (a.point() - xi0).norm() < eps)
            .map(|a| a.mass)
            .sum();
        Ok(singular / arc_measure)
    }

    /// Carathéodory function `F(z) = ∫ (1 + ξ̄z)/(1 - ξ̄z) dμ(ξ)` inside the disk.
    pub fn caratheodory(&self, z: Complex64) -> Result<Complex64> {
        check_interior(z)?;
        let one = Complex64::new(1.0, 0.0);
        let ac = horner(&self.weight_herglotz, z);
        let singular: Complex64 = self
            .atoms
            .iter()
            .map(|a| {
                let u = a.point().conj() * z;
                a.mass * (one + u) / (one - u)
            })
            .sum();
        Ok(ac + singular)
    }

    /// Boundary values of `1/F` on the grid. At a grid point carrying an atom,
    /// `F` is infinite and the value is zero.
    pub fn inverse_caratheodory_boundary(&self) -> Vec<Complex64> {
        let n = self.grid_size();
        let one = Complex64::new(1.0, 0.0);
        let real = &self.weight;
        let imag = crate::spectral::conjugate_function(real);
        (0..n)
            .map(|j| {
                let xi = self.grid_point(j);
                let mut f = Complex64::new(real[j], imag[j]);
                for a in &self.atoms {
                    let u = a.point().conj() * xi;
                    let denom = one - u;
                    if denom.norm() < 1e-14 {
                        return Complex64::new(0.0, 0.0);
                    }
                    f += a.mass * (one + u) / denom;
                }
                one / f
            })
            .collect()
    }

    /// `∫ h dμ` by the trapezoid rule plus exact atom terms.
    pub fn integrate(&self, mut h: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        let n = self.grid_size();
        let ac: Complex64 = (0..n).map(|j| self.weight[j] * h(self.grid_point(j))).sum::<Complex64>()
            / n as f64;
        let singular: Complex64 = self.atoms.iter().map(|a| a.mass * h(a.point())).sum();
        ac + singular
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson_weight(r: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (1.0 - r * r) / (1.0 - 2.0 * r * t.cos() + r * r)
            })
            .collect()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn lebesgue_has_unit_mass() {
        let m = CircleMeasure::new(vec![1.0; 8], vec![], false).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_scales_samples() {
        let m = CircleMeasure::new(vec![2.0; 8], vec![], true).unwrap();
        assert!(m.weight().iter().all(|&w| (w - 1.0).abs() < 1e-15));
    }

    #[test]
    fn poisson_weight_is_normalized_by_trapezoid() {
        let w = poisson_weight(0.5, 4096);
        // Independent check: direct trapezoid sum.
        let trap: f64 = w.iter().sum::<f64>() / 4096.0;
        assert!((trap - 1.0).abs() < 1e-12);
        let m = CircleMeasure::new(w, vec![], false).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(CircleMeasure::new(vec![0.0; 4], vec![], true).unwrap_err(), OpucError::NonNormalizable);
        assert!(matches!(
            CircleMeasure::new(vec![1.0, -1.0, 1.0, 1.0], vec![], true),
            Err(OpucError::NegativeInput(_))
        ));
        assert!(matches!(
            CircleMeasure::new(vec![1.0; 4], vec![Atom::new(0.0, -0.1)], true),
            Err(OpucError::NegativeInput(_))
        ));
        assert!(matches!(
            CircleMeasure::new(vec![0.5; 4], vec![], false),
            Err(OpucError::NotProbability(_))
        ));
        assert!(matches!(
            CircleMeasure::new(vec![1.0; 4], vec![Atom::new(0.0, 0.1), Atom::new(TAU, 0.1)], true),
            Err(OpucError::InvalidAtom(_))
        ));
    }

    #[test]
    fn poisson_values() {
        let leb = CircleMeasure::lebesgue(64);
        assert!((leb.poisson(Complex64::new(0.3, -0.4)).unwrap() - 1.0).abs() < 1e-14);

        let m = CircleMeasure::new(poisson_weight(0.5, 4096), vec![], false).unwrap();
        let expect = (1.0 - 0.25 * 0.09) / (1.0 - 0.15f64).powi(2);
        assert!((expect - 1.352_941_176_470_588).abs() < 1e-12);
        // Brute-force trapezoid oracle.
        let z = c(0.3);
        let brute: f64 = (0..4096)
            .map(|j| m.weight()[j] * poisson_kernel(m.grid_point(j), z))
            .sum::<f64>()
            / 4096.0;
        assert!((brute - expect).abs() < 1e-12);
        assert!((m.poisson(z).unwrap() - expect).abs() < 1e-12);

        let atom = CircleMeasure::new(vec![0.0; 16], vec![Atom::new(0.0, 1.0)], false).unwrap();
        assert!((atom.poisson(c(0.5)).unwrap() - 3.0).abs() < 1e-14);
        assert!(matches!(leb.poisson(c(1.0)), Err(OpucError::BoundaryPoint(_))));
    }

    #[test]
    fn poisson_of_log_weight() {
        let leb = CircleMeasure::lebesgue(64);
        assert_eq!(leb.poisson_log_weight(c(0.2)).unwrap(), 0.0);
        let m = CircleMeasure::new(poisson_weight(0.5, 4096), vec![], false).unwrap();
        let at0 = m.poisson_log_weight(c(0.0)).unwrap();
        let brute: f64 = m.weight().iter().map(|w| w.ln()).sum::<f64>() / 4096.0;
        assert!((at0 - 0.75f64.ln()).abs() < 1e-12);
        assert!((brute - 0.75f64.ln()).abs() < 1e-12);
        let at_half = m.poisson_log_weight(c(0.5)).unwrap();
        assert!((at_half - (0.75f64 / 0.5625).ln()).abs() < 1e-12);

        let zero = CircleMeasure::new(vec![1.0, 0.0, 1.0, 1.0], vec![], true).unwrap();
        assert!(!zero.is_szego());
        assert!(matches!(zero.poisson_log_weight(c(0.0)), Err(OpucError::NotSzego { .. })));
    }

    #[test]
    fn weighted_poisson_cases() {
        let m = CircleMeasure::new(poisson_weight(0.5, 256), vec![Atom::new(1.0, 0.2)], true).unwrap();
        let z = Complex64::new(0.1, 0.6);
        let one = SupportSamples::constant(&m, 1.0);
        assert!((m.weighted_poisson(&one, z).unwrap() - m.poisson(z).unwrap()).abs() < 1e-14);
        let zero = SupportSamples::constant(&m, 0.0);
        assert_eq!(m.weighted_poisson(&zero, z).unwrap(), 0.0);

        let leb = CircleMeasure::lebesgue(256);
        let g = SupportSamples::from_fn(&leb, |xi| (xi - 1.0).norm_sqr());
        assert!((leb.weighted_poisson(&g, c(0.0)).unwrap() - 2.0).abs() < 1e-13);

        let short = SupportSamples { grid: vec![1.0; 3], atoms: vec![] };
        assert!(matches!(leb.weighted_poisson(&short, z), Err(OpucError::GridMismatch { .. })));
    }

    #[test]
    fn moments() {
        let leb = CircleMeasure::lebesgue(64);
        assert!(leb.moment(1).unwrap().norm() < 1e-15);
        assert!(matches!(leb.moment(9), Err(OpucError::AliasRisk { .. })));

        let m = CircleMeasure::new(poisson_weight(0.5, 4096), vec![], false).unwrap();
        assert!((m.moment(3).unwrap() - c(0.125)).norm() < 1e-13);

        let mut w = vec![0.7; 4096];
        w[0] = 0.7;
        let mixed = CircleMeasure::new(w, vec![Atom::new(PI, 0.3)], false).unwrap();
        assert!((mixed.moment(2).unwrap() - c(0.3)).norm() < 1e-13);
        assert!((mixed.moment(1).unwrap() - c(-0.3)).norm() < 1e-13);
    }

    #[test]
    fn fejer_means() {
        let leb = CircleMeasure::lebesgue(1024);
        for n in [1, 5, 100] {
            assert!((leb.fejer_mean(Complex64::from_polar(1.0, 0.7), n).unwrap() - 1.0).abs() < 1e-13);
        }
        let m = CircleMeasure::new(poisson_weight(0.5, 4096), vec![], false).unwrap();
        assert!((m.fejer_mean(c(1.0), 1).unwrap() - 1.0).abs() < 1e-13);
        let f = m.fejer_mean(c(1.0), 256).unwrap();
        assert!((f - 3.0).abs() / 3.0 < 0.05);
        assert!(matches!(m.fejer_mean(c(0.5), 4), Err(OpucError::NotOnBoundary(_))));
    }

    #[test]
    fn interval_ratios() {
        let leb = CircleMeasure::lebesgue(1024);
        assert_eq!(leb.interval_ratio(c(1.0), 0.1).unwrap(), 0.0);
        let m = CircleMeasure::new(vec![0.7; 1024], vec![Atom::new(0.0, 0.3)], false).unwrap();
        let arc = 2.0 * (0.05f64).asin() / PI;
        // Grid-count oracle for the normalized arc length.
        let count = (0..1024).filter(|&j| (m.grid_point(j) - 1.0).norm() < 0.1).count() as f64 / 1024.0;
        assert!((arc - count).abs() < 2.0 / 1024.0);
        assert!((m.interval_ratio(c(1.0), 0.1).unwrap() - 0.3 / arc).abs() < 1e-12);
        assert_eq!(m.interval_ratio(c(-1.0), 0.1).unwrap(), 0.0);
    }

    #[test]
    fn measure_file_roundtrip() {
        let m = CircleMeasure::new(vec![0.5; 16], vec![Atom::new(2.0, 0.5)], false)
            .unwrap()
            .with_family("custom");
        let json = serde_json::to_string(&m.to_file()).unwrap();
        let back: MeasureFile = serde_json::from_str(&json).unwrap();
        let m2 = CircleMeasure::from_file(back, false).unwrap();
        assert_eq!(m2.weight(), m.weight());
        assert_eq!(m2.atoms(), m.atoms());
        assert_eq!(m2.family(), Some("custom"));
    }
}
