//! Builtin measure families.
//!
//! Measure-first families (`lebesgue`, `bernstein_szego`, `mixed`) sample a
//! density and extract parameters from its moments. Parameter-first families
//! keep their parameters and realize the measure from them:
//!
//! * `geronimus(a)`: all Schur iterates equal `f`, so `ā z f² + (1 - z) f - a = 0`
//!   and the density is `Re F = (1 - |zf|²)/|1 - zf|²` on the arc
//!   `sin²(θ/2) > a²`, with a point mass `2a/(1 + a)` at `θ = 0` when `a > 0`.
//! * `ell2(c, p)`: parameters `a_0..a_{L-1}` followed by zeros, whose measure
//!   is `dm/|φ*_L|²`. The weight peaks like `2L + 1` over a width `~1/L`, so
//!   `L` is tied to the grid (`N/128` by default) to keep aliasing negligible.
//!
//! The Levinson and series routes are compared over the orders where the
//! series route is still well conditioned; its error grows roughly like
//! `Π (1 + |a_k|)/(1 - |a_k|)`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::measure::{Atom, CircleMeasure, DEFAULT_W_FLOOR};
use crate::opuc::{verblunsky_from_moments, PairIter, MAX_DEGREE};
use crate::schur::{schur_parameters_from_measure, SchurParameters, SERIES_GUARD};

/// Parameters kept for every family (enough for kernels of order 256 + 1).
pub const DEFAULT_PARAM_LEN: usize = 320;
/// Orders over which the two extraction routes are compared (at most).
pub const CROSS_CHECK_LEN: usize = 64;
/// Cap on the series-route amplification bound inside the cross-check.
pub const CROSS_CHECK_GROWTH: f64 = 1e6;
/// Default `L` for `ell2` is `grid_size / TRUNCATION_DIVISOR`.
pub const TRUNCATION_DIVISOR: usize = 128;
/// Largest accepted gap between `ell2` parameters and those re-extracted
/// from its grid measure.
pub const ELL2_ROUNDTRIP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Lebesgue,
    BernsteinSzego { r: f64 },
    Geronimus { a: f64 },
    /// `a_n = c/(n + 1)^p`.
    Ell2 { c: f64, p: f64 },
    /// `(1 - Σ masses)·base + atoms`.
    Mixed { base: Box<Family>, atoms: Vec<Atom> },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Lebesgue => write!(f, "lebesgue"),
            Family::BernsteinSzego { r } => write!(f, "bernstein_szego({r})"),
            Family::Geronimus { a } => write!(f, "geronimus({a})"),
            Family::Ell2 { c, p } => write!(f, "ell2({c},{p})"),
            Family::Mixed { base, atoms } => {
                write!(f, "mixed({base}")?;
                for a in atoms {
                    write!(f, ",atom({},{})", a.angle, a.mass)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One-line descriptions for `opuclab families`.
pub const BUILTINS: &[(&str, &str)] = &[
    ("lebesgue", "normalized arc length; all parameters zero"),
    ("bernstein_szego", "{r}: Poisson weight (1-r²)/|1-re^{iθ}|², a = (r, 0, 0, ...)"),
    ("geronimus", "{a}: constant parameters a_n = a; arc plus atom (not Szego, entropy checks skip)"),
    ("ell2", "{c, p}: a_n = c/(n+1)^p for n < L (default L = N/128), zero beyond"),
    ("mixed", "{base, atoms}: base family scaled by 1 - Σ masses plus point masses"),
];

impl Family {
    pub fn is_parameter_first(&self) -> bool {
        matches!(self, Family::Geronimus { .. } | Family::Ell2 { .. })
    }

    /// Only finitely many nonzero parameters. `ell2` counts as infinite:
    /// its grid truncation is a realization detail, not the family.
    pub fn has_finite_parameters(&self) -> bool {
        match self {
            Family::Lebesgue | Family::BernsteinSzego { .. } => true,
            Family::Geronimus { a } => *a == 0.0,
            Family::Ell2 { c, .. } => *c == 0.0,
            Family::Mixed { .. } => false,
        }
    }

    /// At most one nonzero parameter.
    pub fn has_single_parameter(&self) -> bool {
        matches!(self, Family::Lebesgue | Family::BernsteinSzego { .. })
    }

    /// Density smooth on the whole circle. The Geronimus arc has
    /// square-root edges; `ell2` needs `Σ n|a_n| < ∞`, i.e. `p > 2`.
    pub fn is_smooth(&self) -> bool {
        match self {
            Family::Geronimus { a } => *a == 0.0,
            Family::Ell2 { c, p } => *c == 0.0 || *p > 2.0,
            Family::Mixed { base, .. } => base.is_smooth(),
            Family::Lebesgue | Family::BernsteinSzego { .. } => true,
        }
    }

    /// Angles where the density (or measure) fails to be smooth: atoms,
    /// Geronimus arc edges, and `θ = 0` for `ell2` with `p <= 2`, where
    /// the positive parameters add coherently.
    pub fn singular_angles(&self) -> Vec<f64> {
        match self {
            Family::Lebesgue | Family::BernsteinSzego { .. } => Vec::new(),
            Family::Geronimus { a } if *a == 0.0 => Vec::new(),
            Family::Geronimus { a } => {
                let edge = 2.0 * a.abs().asin();
                vec![0.0, edge, -edge]
            }
            Family::Ell2 { .. } if self.is_smooth() => Vec::new(),
            Family::Ell2 { .. } => vec![0.0],
            Family::Mixed { base, atoms } => {
                let mut out = base.singular_angles();
                out.extend(atoms.iter().map(|a| a.angle));
                out
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if (0.0..1.0).contains(&x.abs()) && x.is_finite() {
                Ok(())
            } else {
                Err(OpucError::InvalidArgument(format!("{name} = {x} must lie in [0, 1)")))
            }
        };
        match self {
            Family::Lebesgue => Ok(()),
            Family::BernsteinSzego { r } => unit("r", *r),
            Family::Geronimus { a } => unit("|a|", *a),
            Family::Ell2 { c, p } => {
                unit("c", *c)?;
                if !(p.is_finite() && *p >= 0.0) {
                    return Err(OpucError::InvalidArgument(format!("p = {p} must be >= 0")));
                }
                Ok(())
            }
            Family::Mixed { base, atoms } => {
                if matches!(**base, Family::Mixed { .. }) {
                    return Err(OpucError::InvalidArgument("nested mixed families".into()));
                }
                base.validate()?;
                let mass: f64 = atoms.iter().map(|a| a.mass).sum();
                if !(mass < 1.0) || atoms.iter().any(|a| !(a.mass > 0.0) || !a.angle.is_finite()) {
                    return Err(OpucError::InvalidAtom(format!("atom masses must be positive with total {mass} < 1")));
                }
                Ok(())
            }
        }
    }

    /// Primary parameters `a_0..a_{len-1}` of a parameter-first family;
    /// `ell2` is zero from index `truncation` on.
    pub fn primary_parameters(&self, len: usize, truncation: usize) -> Option<Vec<Complex64>> {
        match *self {
            Family::Geronimus { a } => Some(vec![Complex64::new(a, 0.0); len]),
            Family::Ell2 { c, p } => Some(
                (0..len)
                    .map(|n| {
                        let v = if n < truncation { c / ((n + 1) as f64).powf(p) } else { 0.0 };
                        Complex64::new(v, 0.0)
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Density samples and atoms (total mass one up to quadrature error).
    fn components(&self, grid_size: usize, truncation: usize) -> Result<(Vec<f64>, Vec<Atom>)> {
        let angles = (0..grid_size).map(|j| TAU * j as f64 / grid_size as f64);
        match self {
            Family::Lebesgue => Ok((vec![1.0; grid_size], vec![])),
            Family::BernsteinSzego { r } => Ok((
                angles.map(|t| (1.0 - r * r) / (1.0 - 2.0 * r * t.cos() + r * r)).collect(),
                vec![],
            )),
            Family::Geronimus { a } if *a == 0.0 => Ok((vec![1.0; grid_size], vec![])),
            Family::Geronimus { a } => {
                let a = *a;
                let mut weight: Vec<f64> = angles.map(|t| geronimus_density(a, t)).collect();
                let mass = if a > 0.0 { 2.0 * a / (1.0 + a) } else { 0.0 };
                // Trapezoid error at the square-root arc ends is O(N^{-3/2});
                // the density is rescaled so the atom keeps its exact mass.
                let ac = weight.iter().sum::<f64>() / grid_size as f64;
                weight.iter_mut().for_each(|w| *w *= (1.0 - mass) / ac);
                let atoms = if mass > 0.0 { vec![Atom::new(0.0, mass)] } else { vec![] };
                Ok((weight, atoms))
            }
            Family::Ell2 { .. } => {
                let params = SchurParameters::new(
                    self.primary_parameters(truncation, truncation).expect("parameter-first"),
                )?;
                let weight = angles
                    .map(|t| {
                        let xi = Complex64::from_polar(1.0, t);
                        let last = PairIter::new(&params, xi, truncation)?.last().expect("nonempty");
                        Ok(1.0 / last.phi_star.norm_sqr())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok((weight, vec![]))
            }
            Family::Mixed { base, atoms } => {
                let keep = 1.0 - atoms.iter().map(|a| a.mass).sum::<f64>();
                let (mut weight, mut base_atoms) = base.components(grid_size, truncation)?;
                weight.iter_mut().for_each(|w| *w *= keep);
                base_atoms.iter_mut().for_each(|a| a.mass *= keep);
                base_atoms.extend(atoms.iter().copied());
                Ok((weight, base_atoms))
            }
        }
    }
}

/// Boundary value of `Re F` for constant real parameters `a != 0`.
fn geronimus_density(a: f64, theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    if s * s <= a * a {
        return 0.0;
    }
    let q = (s * s - a * a).sqrt();
    // Contractive root: |zf| = (|s| - q)/|a| < 1.
    let u = Complex64::i() * Complex64::from_polar(1.0, theta / 2.0) * (s - s.signum() * q) / a;
    (1.0 - u.norm_sqr()) / (Complex64::new(1.0, 0.0) - u).norm_sqr()
}

/// Largest `n <= max_len` with `Σ_{k<n} ln((1 + |a_k|)/(1 - |a_k|)) <= ln(CROSS_CHECK_GROWTH)`.
pub fn cross_check_len(params: &[Complex64], max_len: usize) -> usize {
    let budget = CROSS_CHECK_GROWTH.ln();
    let mut total = 0.0;
    for (n, a) in params.iter().take(max_len).enumerate() {
        let r = a.norm();
        total += ((1.0 + r) / (1.0 - r)).ln();
        if total > budget {
            return n;
        }
    }
    max_len.min(params.len())
}

/// Agreement between parameter routes over the first `len` orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub len: usize,
    /// `max |a_n(Levinson) - a_n(series)|`.
    pub levinson_vs_series: f64,
    /// `max |a_n(Levinson) - a_n(primary)|` for parameter-first families.
    pub levinson_vs_primary: Option<f64>,
}

impl CrossCheck {
    pub fn max(&self) -> f64 {
        self.levinson_vs_series.max(self.levinson_vs_primary.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct BuiltFamily {
    pub family: Family,
    pub measure: CircleMeasure,
    pub params: SchurParameters,
    /// Levinson parameters of the grid measure over the cross-check orders.
    /// Quadrature-side checks use these: for `geronimus` the grid realizes
    /// the primary parameters only to the arc-edge quadrature error.
    pub levinson: SchurParameters,
    pub cross_check: CrossCheck,
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Default `ell2` truncation for a grid.
pub fn default_truncation(grid_size: usize) -> usize {
    (grid_size / TRUNCATION_DIVISOR).max(1)
}

/// Builds the measure and its parameters `a_0..a_{param_len-1}`.
/// `truncation` applies to `ell2` only (`None`: grid default).
pub fn build_family(
    family: &Family,
    grid_size: usize,
    param_len: usize,
    truncation: Option<usize>,
) -> Result<BuiltFamily> {
    family.validate()?;
    if !grid_size.is_power_of_two() || grid_size < 256 {
        return Err(OpucError::InvalidArgument(format!(
            "grid size {grid_size} must be a power of two >= 256"
        )));
    }
    let truncation = truncation.unwrap_or_else(|| default_truncation(grid_size));
    if truncation == 0 || truncation > MAX_DEGREE {
        return Err(OpucError::InvalidArgument(format!("truncation {truncation} outside 1..={MAX_DEGREE}")));
    }
    let (weight, atoms) = family.components(grid_size, truncation)?;
    let parameter_first = family.is_parameter_first()
        || matches!(family, Family::Mixed { base, .. } if base.is_parameter_first());
    let measure = CircleMeasure::with_floor(weight, atoms, parameter_first, DEFAULT_W_FLOOR)?
        .with_family(family.to_string());

    let params = match family.primary_parameters(param_len, truncation) {
        Some(values) => SchurParameters::new(values)?,
        None => {
            let available = measure.max_moment_index().saturating_sub(SERIES_GUARD);
            if param_len > available {
                return Err(OpucError::OutOfRange { requested: param_len, available });
            }
            verblunsky_from_moments(&measure.moments(param_len)?, param_len)?
        }
    };
    let check_len = cross_check_len(params.values(), CROSS_CHECK_LEN.min(param_len));
    let levinson = verblunsky_from_moments(&measure.moments(check_len)?, check_len)?;
    let series = schur_parameters_from_measure(&measure, check_len)?;
    let cross_check = CrossCheck {
        len: check_len,
        levinson_vs_series: max_diff(levinson.values(), series.values()),
        levinson_vs_primary: family
            .is_parameter_first()
            .then(|| max_diff(levinson.values(), &params.values()[..check_len])),
    };
    if let (Family::Ell2 { .. }, Some(err)) = (family, cross_check.levinson_vs_primary) {
        if err > ELL2_ROUNDTRIP_TOLERANCE {
            return Err(OpucError::InvalidArgument(format!(
                "grid of {grid_size} points cannot resolve {family} truncated at L = {truncation} \
                 (parameter roundtrip error {err:.1e}); lower `truncation` or raise `grid_size`"
            )));
        }
    }
    Ok(BuiltFamily { family: family.clone(), measure, params, levinson, cross_check })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_has_zero_parameters() {
        let b = build_family(&Family::Lebesgue, 1024, 64, None).unwrap();
        assert!(b.params.values().iter().all(|a| a.norm() < 1e-15));
        assert!(b.measure.weight().iter().all(|&w| w == 1.0));
        assert_eq!(b.measure.family(), Some("lebesgue"));
    }

    #[test]
    fn poisson_family_parameters() {
        let b = build_family(&Family::BernsteinSzego { r: 0.5 }, 4096, 128, None).unwrap();
        assert!((b.params.values()[0] - 0.5).norm() < 1e-12);
        assert!(b.params.values()[1..].iter().all(|a| a.norm() < 1e-12));
        assert!(b.cross_check.max() < 1e-10);
    }

    #[test]
    fn ell2_roundtrip() {
        let b = build_family(&Family::Ell2 { c: 0.5, p: 1.0 }, 4096, DEFAULT_PARAM_LEN, None).unwrap();
        assert_eq!(b.cross_check.len, 64);
        assert!(b.cross_check.levinson_vs_primary.unwrap() < 1e-8, "{:?}", b.cross_check);
        assert!(b.cross_check.levinson_vs_series < 1e-8, "{:?}", b.cross_check);
        assert!((b.measure.total_mass() - 1.0).abs() < 1e-12);
        assert!((b.params.values()[31] - 0.5 / 32.0).norm() < 1e-15);
        assert_eq!(b.params.values()[32], Complex64::new(0.0, 0.0));
        // A longer explicit truncation is still resolved at the 1e-8 level.
        let long = build_family(&Family::Ell2 { c: 0.5, p: 1.0 }, 4096, 128, Some(64)).unwrap();
        assert!(long.cross_check.levinson_vs_primary.unwrap() < 1e-8);
    }

    #[test]
    fn geronimus_closed_form() {
        // Oracle: the fixed-point Schur function at an interior point,
        // f = (-(1 - z) + sqrt((1 - z)² + 4a²z))/(2az), against F from the grid.
        for a in [0.3, -0.3, 0.5] {
            let b = build_family(&Family::Geronimus { a }, 4096, 64, None).unwrap();
            assert!(!b.measure.is_szego());
            let z = Complex64::new(0.2, 0.3);
            let one = Complex64::new(1.0, 0.0);
            let disc = ((one - z) * (one - z) + 4.0 * a * a * z).sqrt();
            let f = (-(one - z) + disc) / (2.0 * a * z);
            let expect = (one + z * f) / (one - z * f);
            let got = b.measure.caratheodory(z).unwrap();
            assert!((got - expect).norm() < 1e-5, "a = {a}: {got} vs {expect}");
            assert!(b.cross_check.len >= 12, "{:?}", b.cross_check);
            assert!(b.cross_check.levinson_vs_series < 1e-8, "a = {a}: {:?}", b.cross_check);
            assert!(b.cross_check.levinson_vs_primary.unwrap() < 1e-4, "a = {a}: {:?}", b.cross_check);
        }
        let atom = build_family(&Family::Geronimus { a: 0.5 }, 1024, 8, None).unwrap();
        assert_eq!(atom.measure.atoms().len(), 1);
        assert!((atom.measure.atoms()[0].mass - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_family_keeps_mass() {
        let fam = Family::Mixed {
            base: Box::new(Family::Lebesgue),
            atoms: vec![Atom::new(std::f64::consts::PI, 0.3)],
        };
        let b = build_family(&fam, 4096, 256, None).unwrap();
        assert!((b.measure.total_mass() - 1.0).abs() < 1e-12);
        assert!((b.measure.weight()[0] - 0.7).abs() < 1e-15);
        assert!(b.cross_check.max() < 1e-8, "{:?}", b.cross_check);
    }

    #[test]
    fn invalid_families_are_rejected() {
        assert!(build_family(&Family::BernsteinSzego { r: 1.0 }, 1024, 8, None).is_err());
        assert!(build_family(&Family::Lebesgue, 1000, 8, None).is_err());
        let heavy = Family::Mixed { base: Box::new(Family::Lebesgue), atoms: vec![Atom::new(0.0, 1.0)] };
        assert!(matches!(build_family(&heavy, 1024, 8, None), Err(OpucError::InvalidAtom(_))));
    }

    #[test]
    fn serde_shape() {
        let f: Family = serde_json::from_str(r#"{"kind":"ell2","c":0.5,"p":1.0}"#).unwrap();
        assert_eq!(f, Family::Ell2 { c: 0.5, p: 1.0 });
        let m: Family = serde_json::from_str(
            r#"{"kind":"mixed","base":{"kind":"lebesgue"},"atoms":[{"angle":0.0,"mass":0.3}]}"#,
        )
        .unwrap();
        assert!(matches!(m, Family::Mixed { .. }));
    }
}
