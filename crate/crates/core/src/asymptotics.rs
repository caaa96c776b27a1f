//! Cesàro-mean harnesses: the Máté–Nevai–Totik limit with its sandwich
//! bound, CMV Fourier partial sums, the comparison condition for `|χ_k|²`,
//! and the averaged `φ*_k D_μ - 1` deviation.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::measure::{check_boundary, CircleMeasure, SupportSamples};
use crate::opuc::{chi_values, eval_pair, PairIter, PolynomialPair};
use crate::outer::{delta_grid, entropy_record, szego_on_circle};
use crate::schur::SchurParameters;

/// Comparison slack for the sandwich and Fejér lower bound.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;
pub const CSV_HEADER: &str = "n,cesaro,target,lower,upper,K_n,P_n,F_n";

/// `(1/n) Σ_{k<n} |φ_k(ξ0)|²`.
pub fn cesaro_phi_sq(params: &SchurParameters, xi0: Complex64, n: usize) -> Result<f64> {
    check_boundary(xi0)?;
    if n == 0 {
        return Err(OpucError::InvalidArgument("Cesàro order n must be >= 1".into()));
    }
    let total: f64 = PairIter::new(params, xi0, n - 1)?.map(|p| p.phi.norm_sqr()).sum();
    Ok(total / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub cesaro: f64,
    /// `1/w(ξ0)` from the density interpolant.
    pub target: f64,
    pub lower: f64,
    pub upper: f64,
    pub k_n: f64,
    pub p_n: f64,
    pub f_n: f64,
}

impl ConvergenceRow {
    /// `None` when `K_n > 1` (the upper bound is not claimed there).
    pub fn sandwich_holds(&self, tolerance: f64) -> Option<bool> {
        (self.k_n <= 1.0).then(|| {
            self.lower - tolerance <= self.cesaro && self.cesaro <= self.upper + tolerance
        })
    }

    pub fn lower_bound_holds(&self, tolerance: f64) -> bool {
        self.cesaro >= self.lower - tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub xi0: Complex64,
    pub family: Option<String>,
    pub grid_size: usize,
    pub delta_grid: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n,
                fmt_num(r.cesaro),
                fmt_num(r.target),
                fmt_num(r.lower),
                fmt_num(r.upper),
                fmt_num(r.k_n),
                fmt_num(r.p_n),
                fmt_num(r.f_n)
            );
        }
        out
    }
}

/// Twelve significant digits, locale-free.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn row_from(measure: &CircleMeasure, params: &SchurParameters, xi0: Complex64, n: usize, deltas: &[f64]) -> Result<ConvergenceRow> {
    let rec = entropy_record(measure, xi0, n, deltas)?;
    let cesaro = cesaro_phi_sq(params, xi0, n)?;
    let k_quarter = rec.k_n.max(0.0).powf(0.25);
    Ok(ConvergenceRow {
        n,
        cesaro,
        target: 1.0 / measure.density_at(xi0.arg()),
        lower: 1.0 / rec.f_n,
        upper: 1.0 / rec.p_n + 64.0 * k_quarter / rec.p_n,
        k_n: rec.k_n,
        p_n: rec.p_n,
        f_n: rec.f_n,
    })
}

/// One sandwich row `1/F_n <= (1/n)Σ|φ_k|² <= 1/P_n + 64 K_n^{1/4}/P_n`.
pub fn mnt_sandwich(
    measure: &CircleMeasure,
    params: &SchurParameters,
    xi0: Complex64,
    n: usize,
    delta_grid_size: usize,
) -> Result<ConvergenceRow> {
    row_from(measure, params, xi0, n, &delta_grid(delta_grid_size))
}

pub fn mnt_table(
    measure: &CircleMeasure,
    params: &SchurParameters,
    xi0: Complex64,
    n_list: &[usize],
    delta_grid_size: usize,
) -> Result<ConvergenceTable> {
    let deltas = delta_grid(delta_grid_size);
    let rows = n_list
        .iter()
        .map(|&n| row_from(measure, params, xi0, n, &deltas))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        xi0,
        family: measure.family().map(str::to_owned),
        grid_size: measure.grid_size(),
        delta_grid: deltas,
        rows,
    })
}

/// CMV Fourier coefficients `c_j = ∫ f conj(χ_j) dμ`, `j = 0..=n_max`.
pub fn cmv_coefficients(
    measure: &CircleMeasure,
    params: &SchurParameters,
    f: &SupportSamples<Complex64>,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    if f.grid.len() != measure.grid_size() {
        return Err(OpucError::GridMismatch { expected: measure.grid_size(), got: f.grid.len() });
    }
    if f.atoms.len() != measure.atoms().len() {
        return Err(OpucError::GridMismatch { expected: measure.atoms().len(), got: f.atoms.len() });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let scale = 1.0 / measure.grid_size() as f64;
    let mut accumulate = |xi: Complex64, value: Complex64, mass: f64| -> Result<()> {
        if value == Complex64::new(0.0, 0.0) || mass == 0.0 {
            return Ok(());
        }
        for (c, x) in coeffs.iter_mut().zip(chi_values(params, xi, n_max)?) {
            *c += mass * value * x.conj();
        }
        Ok(())
    };
    for (j, value) in f.grid.iter().enumerate() {
        accumulate(measure.grid_point(j), *value, measure.weight()[j] * scale)?;
    }
    for (atom, value) in measure.atoms().iter().zip(&f.atoms) {
        accumulate(atom.point(), *value, atom.mass)?;
    }
    Ok(coeffs)
}

/// `(1/n) Σ_{k<n} |𝕊_k(f, ξ0) - f(ξ0)|` with `𝕊_k = Σ_{j<=k} c_j χ_j`.
///
/// The expansion is taken of `f - f(ξ0)`: partial sums of a constant are
/// that constant (`χ_0 = 1` and orthogonality), so the subtraction commutes
/// with `𝕊_k` and the deviation of a constant is exactly zero.
pub fn strong_cesaro_deviation(
    measure: &CircleMeasure,
    params: &SchurParameters,
    f: &SupportSamples<Complex64>,
    xi0: Complex64,
    f_at_xi0: Complex64,
    n: usize,
) -> Result<f64> {
    Ok(strong_cesaro_profile(measure, params, f, xi0, f_at_xi0, &[n])?[0])
}

/// Deviations for each `n` of an increasing list, from one expansion.
pub fn strong_cesaro_profile(
    measure: &CircleMeasure,
    params: &SchurParameters,
    f: &SupportSamples<Complex64>,
    xi0: Complex64,
    f_at_xi0: Complex64,
    n_list: &[usize],
) -> Result<Vec<f64>> {
    check_boundary(xi0)?;
    let n_max = match n_list.last() {
        Some(&n) if n_list[0] > 0 && n_list.windows(2).all(|w| w[0] < w[1]) => n,
        _ => return Err(OpucError::InvalidArgument("orders must be increasing and >= 1".into())),
    };
    let centred = SupportSamples {
        grid: f.grid.iter().map(|v| v - f_at_xi0).collect(),
        atoms: f.atoms.iter().map(|v| v - f_at_xi0).collect(),
    };
    let coeffs = cmv_coefficients(measure, params, &centred, n_max - 1)?;
    let chis = chi_values(params, xi0, n_max - 1)?;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut running = Vec::with_capacity(n_max);
    let mut total = 0.0;
    for (c, x) in coeffs.iter().zip(&chis) {
        partial += c * x;
        total += partial.norm();
        running.push(total);
    }
    Ok(n_list.iter().map(|&n| running[n - 1] / n as f64).collect())
}

/// `(lhs, rhs_unit) = ((1/n) Σ_{k<=n} |χ_k(ξ0)|², 1/P(μ, (1 - 1/n) ξ0))`.
pub fn poisson_comparison(
    measure: &CircleMeasure,
    params: &SchurParameters,
    xi0: Complex64,
    n: usize,
) -> Result<(f64, f64)> {
    check_boundary(xi0)?;
    if n == 0 {
        return Err(OpucError::InvalidArgument("order n must be >= 1".into()));
    }
    let lhs = chi_values(params, xi0, n)?.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
    let p = measure.poisson(xi0 * (1.0 - 1.0 / n as f64))?;
    Ok((lhs, 1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzegoDeviation {
    /// `(1/n) Σ_{k<n} |φ*_k(ξ) D_μ(ξ) - 1|²`.
    pub deviation: f64,
    /// The same average over `1 <= k < n` only (scaled by `1/n`).
    pub tail_deviation: f64,
    /// `max_{1<=k<=n} |S_{k-1}(ξ) - (φ*_k(ξ) conj(φ*_k(0)) - φ_k(ξ) conj(φ_k(0)))|`,
    /// relative to `max(1, |S_{k-1}(ξ)|)`, with `S_k = Σ_{j<=k} conj(φ_j(0)) φ_j`.
    pub kernel_residual: f64,
}

pub fn szego_deviation(
    measure: &CircleMeasure,
    params: &SchurParameters,
    xi: Complex64,
    n: usize,
) -> Result<SzegoDeviation> {
    check_boundary(xi)?;
    if n == 0 {
        return Err(OpucError::InvalidArgument("order n must be >= 1".into()));
    }
    let d = szego_on_circle(measure, xi)?;
    let at_xi: Vec<_> = PairIter::new(params, xi, n)?.collect();
    let at_zero: Vec<_> = PairIter::new(params, Complex64::new(0.0, 0.0), n)?.collect();

    let terms: Vec<f64> = at_xi[..n]
        .iter()
        .map(|p| (p.phi_star * d - 1.0).norm_sqr())
        .collect();
    let deviation = terms.iter().sum::<f64>() / n as f64;
    let tail_deviation = terms[1..].iter().sum::<f64>() / n as f64;

    let kernel_residual = kernel_at_zero_residual(&at_xi, &at_zero);
    Ok(SzegoDeviation { deviation, tail_deviation, kernel_residual })
}

fn kernel_at_zero_residual(at_xi: &[PolynomialPair], at_zero: &[PolynomialPair]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for k in 1..at_xi.len() {
        s += at_zero[k - 1].phi.conj() * at_xi[k - 1].phi;
        let closed = at_xi[k].phi_star * at_zero[k].phi_star.conj() - at_xi[k].phi * at_zero[k].phi.conj();
        worst = worst.max((s - closed).norm() / s.norm().max(1.0));
    }
    worst
}

/// Reproducing kernel at the origin, `S_{k-1}(ξ) = Σ_{j<k} conj(φ_j(0)) φ_j(ξ)`,
/// against `φ*_k(ξ) conj(φ*_k(0)) - φ_k(ξ) conj(φ_k(0))` for `1 <= k <= n`
/// (no Szego hypothesis needed).
pub fn cd_at_zero_residual(params: &SchurParameters, xi: Complex64, n: usize) -> Result<f64> {
    check_boundary(xi)?;
    let at_xi: Vec<_> = PairIter::new(params, xi, n)?.collect();
    let at_zero: Vec<_> = PairIter::new(params, Complex64::new(0.0, 0.0), n)?.collect();
    Ok(kernel_at_zero_residual(&at_xi, &at_zero))
}

/// `Σ_{j<=n} |c_j|²` against `∫|f|² dμ`: returns `(Σ|c_j|², ∫|f|²dμ)`.
pub fn bessel_sums(
    measure: &CircleMeasure,
    params: &SchurParameters,
    f: &SupportSamples<Complex64>,
    n_max: usize,
) -> Result<(f64, f64)> {
    let coeffs = cmv_coefficients(measure, params, f, n_max)?;
    let energy = f.grid.iter().zip(measure.weight()).map(|(v, w)| v.norm_sqr() * w).sum::<f64>()
        / measure.grid_size() as f64
        + f.atoms.iter().zip(measure.atoms()).map(|(v, a)| v.norm_sqr() * a.mass).sum::<f64>();
    Ok((coeffs.iter().map(|c| c.norm_sqr()).sum(), energy))
}

/// `|φ_n(ξ)|²` at a single order, for spot checks against closed forms.
pub fn phi_sq(params: &SchurParameters, xi: Complex64, n: usize) -> Result<f64> {
    Ok(eval_pair(params, xi, n)?.phi.norm_sqr())
}
