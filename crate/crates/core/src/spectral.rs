//! Spectral functionals of truncated operators.
//!
//! Dense eigen- and singular-value problems go to `faer`. Real matrices take
//! the real solver, which is several times faster than the complex one.

use faer::{c64, Mat, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::index_sets::IndexSet;
use crate::operators::{self, compressed_power, hs_offdiagonal_norm_sq, truncate, TruncatedOperator};
use crate::poly::{Polynomial, SpectralFunction};
use crate::symbol::{Symbol, TorusGrid};

/// Relative tolerance of the hermitian check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues at or below this are treated as nonpositive.
pub const PD_FLOOR: f64 = 1e-12;

/// Distance from an interval endpoint counted as "on the boundary".
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Largest grid used for the sup-norm estimate.
const SUP_GRID_CAP: usize = 1 << 22;

/// Which spectrum a [`SpectralSummary`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Eigenvalues of a hermitian matrix, ascending.
    Eigenvalues,
    /// Singular values, descending.
    SingularValues,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    kind: SpectrumKind,
    values: Vec<f64>,
}

impl SpectralSummary {
    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    /// `(min, max)` of the spectrum.
    pub fn range(&self) -> (f64, f64) {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

fn scale(m: &Mat<c64>) -> f64 {
    let n = m.nrows();
    let mut s = 0f64;
    for k in 0..n {
        for j in 0..n {
            s = s.max(m[(j, k)].norm());
        }
    }
    s.max(1.0)
}

fn is_real(m: &Mat<c64>) -> bool {
    let n = m.nrows();
    (0..m.ncols()).all(|k| (0..n).all(|j| m[(j, k)].im == 0.0))
}

fn real_part(m: &Mat<c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |j, k| m[(j, k)].re)
}

fn check_hermitian(m: &Mat<c64>) -> Result<()> {
    let d = operators::hermitian_defect(m);
    if d > HERMITIAN_TOL * scale(m) {
        return domain(format!(
            "matrix is not hermitian (defect {d:e}); use singular values instead"
        ));
    }
    Ok(())
}

/// Ascending eigenvalues of a hermitian matrix.
pub fn hermitian_eigenvalues(m: &Mat<c64>) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut v = if is_real(m) {
        real_part(m).self_adjoint_eigenvalues(Side::Lower)
    } else {
        m.self_adjoint_eigenvalues(Side::Lower)
    }
    .map_err(|e| Error::Solver(format!("{e:?}")))?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Descending singular values.
pub fn matrix_singular_values(m: &Mat<c64>) -> Result<Vec<f64>> {
    let mut v = if is_real(m) {
        real_part(m).singular_values()
    } else {
        m.singular_values()
    }
    .map_err(|e| Error::Solver(format!("{e:?}")))?;
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Full spectrum of a hermitian truncation.
pub fn eigenvalues(t: &TruncatedOperator) -> Result<SpectralSummary> {
    Ok(SpectralSummary {
        kind: SpectrumKind::Eigenvalues,
        values: hermitian_eigenvalues(t.matrix())?,
    })
}

/// Singular values; for hermitian input these are `|λ_k|`.
pub fn singular_values(t: &TruncatedOperator) -> Result<SpectralSummary> {
    let m = t.matrix();
    let mut values = if operators::hermitian_defect(m) <= HERMITIAN_TOL * scale(m) {
        hermitian_eigenvalues(m)?.into_iter().map(f64::abs).collect()
    } else {
        matrix_singular_values(m)?
    };
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(SpectralSummary {
        kind: SpectrumKind::SingularValues,
        values,
    })
}

/// Largest relative residual `‖Tv − λv‖ / ‖T‖` over `samples` random eigenpairs.
pub fn eigen_residual(t: &TruncatedOperator, samples: usize, seed: u64) -> Result<f64> {
    let m = t.matrix();
    check_hermitian(m)?;
    let n = m.nrows();
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let norm = scale(m) * n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for _ in 0..samples.min(n) {
        let i = rng.random_range(0..n);
        let lambda = s[i].re;
        let mut r2 = 0.0;
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += m[(j, k)] * u[(k, i)];
            }
            r2 += (acc - u[(j, i)] * lambda).norm_sqr();
        }
        worst = worst.max(r2.sqrt() / norm);
    }
    Ok(worst)
}

/// `(1/#σ) Σ f(λ_k)` over a computed spectrum.
pub fn trace_of_f_spectrum(spec: &SpectralSummary, f: &SpectralFunction) -> Result<f64> {
    if spec.values.is_empty() {
        return domain("empty spectrum");
    }
    let (lo, hi) = spec.range();
    f.check_domain(lo, hi)?;
    Ok(spec.values.iter().map(|&x| f.eval(x)).sum::<f64>() / spec.size() as f64)
}

/// `(1/#σ) Tr f(T)` for hermitian `T`.
pub fn trace_of_f(t: &TruncatedOperator, f: &SpectralFunction) -> Result<f64> {
    trace_of_f_spectrum(&eigenvalues(t)?, f)
}

/// `(1/#σ) Tr p(T)` from dense matrix powers, for cross-checking eigenvalue traces.
pub fn power_trace(t: &TruncatedOperator, p: &Polynomial) -> f64 {
    let n = t.size();
    let mut pow = Mat::<c64>::identity(n, n);
    let mut total = 0.0;
    for (i, &c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            pow = &pow * t.matrix();
        }
        let tr: f64 = (0..n).map(|j| pow[(j, j)].re).sum();
        total += c * tr;
    }
    total / n as f64
}

/// Eigenvalue fraction in an open interval, with the near-endpoint tally kept apart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalCount {
    pub inside: usize,
    pub boundary: usize,
    pub total: usize,
}

impl IntervalCount {
    pub fn fraction(&self) -> f64 {
        self.inside as f64 / self.total as f64
    }

    pub fn boundary_fraction(&self) -> f64 {
        self.boundary as f64 / self.total as f64
    }
}

/// `#{k : λ_k ∈ (lo, hi)} / #σ`; eigenvalues within `1e-10` of an endpoint go to `boundary`.
pub fn count_in_interval(spec: &SpectralSummary, lo: f64, hi: f64) -> Result<IntervalCount> {
    if !(lo < hi) {
        return domain(format!("empty interval ({lo}, {hi})"));
    }
    let mut c = IntervalCount {
        inside: 0,
        boundary: 0,
        total: spec.size(),
    };
    for &x in &spec.values {
        if (x - lo).abs() <= BOUNDARY_TOL || (x - hi).abs() <= BOUNDARY_TOL {
            c.boundary += 1;
        } else if x > lo && x < hi {
            c.inside += 1;
        }
    }
    Ok(c)
}

/// `(1/#σ) Tr (T*T)^m = (1/#σ) Σ s_k^{2m}`.
pub fn singular_moments(t: &TruncatedOperator, m: u32) -> Result<f64> {
    if m == 0 {
        return domain("singular moments need m >= 1");
    }
    let s = singular_values(t)?;
    Ok(singular_moments_spectrum(&s, m))
}

pub fn singular_moments_spectrum(s: &SpectralSummary, m: u32) -> f64 {
    s.values.iter().map(|x| x.powi(2 * m as i32)).sum::<f64>() / s.size() as f64
}

/// `(det T)^{1/#σ} = exp((1/#σ) Σ log λ_k)`.
pub fn normalized_det(t: &TruncatedOperator) -> Result<f64> {
    normalized_det_spectrum(&eigenvalues(t)?)
}

pub fn normalized_det_spectrum(spec: &SpectralSummary) -> Result<f64> {
    let (lo, _) = spec.range();
    if lo <= PD_FLOOR {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
    }
    Ok((spec.values.iter().map(|x| x.ln()).sum::<f64>() / spec.size() as f64).exp())
}

/// `Σ s_k` of a dense matrix.
pub fn trace_norm(m: &Mat<c64>) -> Result<f64> {
    Ok(matrix_singular_values(m)?.iter().sum())
}

/// Grid maximum of `|s|`, with the number of grid points used.
///
/// Falls back to `Σ|ŝ|` when the grid would be too large.
pub fn sup_norm_estimate(s: &Symbol, multiplier: u32) -> Result<(f64, bool)> {
    let grid = TorusGrid::exact_for(s, multiplier);
    match grid.len() {
        Some(n) if n <= SUP_GRID_CAP && grid.dims() <= 8 => {
            let v = grid.eval(s)?;
            Ok((v.iter().map(|z| z.norm()).fold(0.0, f64::max), true))
        }
        _ => Ok((s.l1_norm(), false)),
    }
}

/// Outcome of the compression-defect inequality check.
#[derive(Clone, Debug, PartialEq)]
pub struct B3Check {
    /// `‖π Lⁿ π − (π L π)ⁿ‖_{S₁}`.
    pub lhs: f64,
    /// `n(n−1)/2 · ‖L‖^{n−2} · ‖π L (1 − π)‖²_{S₂}` with the grid sup.
    pub rhs: f64,
    /// Same with the certified bound `‖L‖ ≤ Σ|ŝ|`.
    pub certified_rhs: f64,
    /// Estimated `‖L‖`.
    pub sup_norm: f64,
    /// `lhs ≤ rhs·(1 + 1e-8)`.
    pub holds: bool,
    /// `rhs − lhs`.
    pub margin: f64,
}

/// Grid refinement for the sup-norm estimate in [`prop_b3_check`].
pub const SUP_GRID_MULTIPLIER: u32 = 4;

/// Check `‖π Lⁿ π − (π L π)ⁿ‖_{S₁} ≤ n(n−1)/2 ‖L‖^{n−2} ‖π L (1 − π)‖²_{S₂}`.
pub fn prop_b3_check(s: &Symbol, set: &IndexSet, n: u32) -> Result<B3Check> {
    if n < 2 {
        return domain("the compression inequality needs n >= 2");
    }
    if !s.is_hermitian() {
        return domain("the compression inequality needs a hermitian symbol");
    }
    let t = truncate(s, set)?;
    let exact = compressed_power(s, set, n)?;
    let defect = exact.matrix() - operators::matrix_power(&t, n);
    b3_from_defect(s, set, n, &defect)
}

/// Assemble a [`B3Check`] from a precomputed defect matrix.
pub fn b3_from_defect(s: &Symbol, set: &IndexSet, n: u32, defect: &Mat<c64>) -> Result<B3Check> {
    let lhs = trace_norm(defect)?;
    let hs = hs_offdiagonal_norm_sq(s, set)? * set.len() as f64;
    let (sup, _) = sup_norm_estimate(s, SUP_GRID_MULTIPLIER)?;
    let c = (n * (n - 1)) as f64 / 2.0;
    let rhs = c * sup.powi(n as i32 - 2) * hs;
    let certified_rhs = c * s.l1_norm().powi(n as i32 - 2) * hs;
    Ok(B3Check {
        lhs,
        rhs,
        certified_rhs,
        sup_norm: sup,
        holds: lhs <= rhs * (1.0 + 1e-8),
        margin: rhs - lhs,
    })
}

/// One row of [`finite_augmentation_drift`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftRow {
    pub m: u32,
    /// `|(1/#σ) Tr T_σ^m − (1/#σ') Tr T_{σ'}^m|`.
    pub drift: f64,
    /// `#F · (#σ)^{−1/2} · m · ‖φ‖₁^{m−1}`.
    pub bound: f64,
}

/// Drift of normalized power traces when a finite set `F` is added to `σ`.
pub fn finite_augmentation_drift(
    s: &Symbol,
    set: &IndexSet,
    extra: &IndexSet,
    m_max: u32,
) -> Result<Vec<DriftRow>> {
    if !s.is_hermitian() {
        return domain("trace drift needs a hermitian symbol");
    }
    let bigger = set.union_with(extra)?;
    let a = eigenvalues(&truncate(s, set)?)?;
    let b = eigenvalues(&truncate(s, &bigger)?)?;
    let l1 = s.l1_norm();
    Ok((1..=m_max)
        .map(|m| {
            let f = SpectralFunction::power(m as usize);
            let ta = a.values.iter().map(|&x| f.eval(x)).sum::<f64>() / a.size() as f64;
            let tb = b.values.iter().map(|&x| f.eval(x)).sum::<f64>() / b.size() as f64;
            DriftRow {
                m,
                drift: (ta - tb).abs(),
                bound: extra.len() as f64 / (set.len() as f64).sqrt() * m as f64 * l1.powi(m as i32 - 1),
            }
        })
        .collect())
}
