//! Sweeps over a size schedule, one record per schedule point.

use std::path::Path;
use std::time::Instant;

use mtoeplitz::index_sets::{folner_defect, is_empirically_folner, DefectRow, IndexSet, SetFamily, Shift};
use mtoeplitz::operators::{gram_matrix, truncate_with, Limits, TruncatedOperator, DEFAULT_DENSE_CAP};
use mtoeplitz::poly::{Polynomial, SpectralFunction};
use mtoeplitz::reference::{
    bohr_time_average, integral_of, predicted_limit, torus_integral, torus_integral_continuous, zeta_moment,
    BohrObservable, Quadrature,
};
use mtoeplitz::spectral::{normalized_det, prop_b3_check, singular_moments, trace_of_f};
use mtoeplitz::symbol::{dilation_symbol, Symbol};
use mtoeplitz::{Complex64, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind, Observable};
use crate::error::{CliError, Result};

/// Oracle length for `zeta-moments` when `params.n_max` is unset.
pub const DEFAULT_ZETA_TERMS: usize = 1_000_000;
/// Bohr time step when `params.step` is unset.
pub const DEFAULT_BOHR_STEP: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    /// Schedule value `N`.
    pub n: usize,
    /// `#σ_N`, or the number of time samples for Bohr averages.
    pub size: usize,
    pub value: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub wall_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "EXPLORATORY")]
    Exploratory,
    #[serde(rename = "FOLNER")]
    Folner,
    #[serde(rename = "NON-FOLNER")]
    NonFolner,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Exploratory => "EXPLORATORY",
            Self::Folner => "FOLNER",
            Self::NonFolner => "NON-FOLNER",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Self::Fail => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub experiment: ExperimentKind,
    pub verdict: Verdict,
    pub records: Vec<ExperimentRecord>,
}

/// Last error within `tol` and the error sequence eventually decreasing.
pub fn sweep_verdict(errors: &[f64], tol: f64) -> Verdict {
    match errors.last() {
        Some(&last) if last <= tol && eventually_decreasing(errors) => Verdict::Pass,
        _ => Verdict::Fail,
    }
}

/// Over the second half of the sweep no error grows, ignoring changes below
/// `1e-12` at exact-zero levels.
pub fn eventually_decreasing(errors: &[f64]) -> bool {
    let start = (errors.len() / 2).min(errors.len().saturating_sub(2));
    errors[start..].windows(2).all(|w| w[1] <= w[0] || w[1] <= 1e-12)
}

struct Prepared {
    symbol: Option<Symbol>,
    family: Option<SetFamily>,
    f: Option<SpectralFunction>,
    reference: f64,
    exploratory: bool,
    shifts: Vec<Shift>,
    dilation: Vec<(u64, Complex64)>,
    cap: usize,
}

struct PointOut {
    record: ExperimentRecord,
    matrix: Option<TruncatedOperator>,
    defects: Vec<DefectRow>,
    holds: bool,
}

pub struct RunOptions<'a> {
    pub dump_matrix: Option<&'a Path>,
}

pub fn run(cfg: &ExperimentConfig, opts: &RunOptions<'_>) -> Result<Report> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let schedule = cfg.schedule()?;
    let last = schedule.len().saturating_sub(1);
    let outs: Vec<Result<PointOut>> = schedule
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let keep = opts.dump_matrix.is_some() && i == last;
            let t0 = Instant::now();
            let mut out = point(cfg, &prep, n, keep)?;
            if cfg.output.timing {
                out.record.wall_ms = t0.elapsed().as_millis() as u64;
            }
            Ok(out)
        })
        .collect();
    let outs: Vec<PointOut> = outs.into_iter().collect::<Result<_>>()?;

    if let Some(path) = opts.dump_matrix {
        let m = outs.last().and_then(|o| o.matrix.as_ref()).ok_or_else(|| {
            CliError::field("dump_matrix", format!("{} builds no matrix", cfg.experiment))
        })?;
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        m.write_csv(std::io::BufWriter::new(file)).map_err(|e| CliError::io(path, e))?;
    }

    let errors: Vec<f64> = outs.iter().map(|o| o.record.abs_error).collect();
    let tol = cfg.tolerance.abs;
    let verdict = match cfg.experiment {
        ExperimentKind::NaturalTruncationExplore => Verdict::Exploratory,
        _ if prep.exploratory => Verdict::Exploratory,
        ExperimentKind::FolnerCheck => {
            let rows: Vec<DefectRow> = outs.iter().flat_map(|o| o.defects.iter().cloned()).collect();
            if is_empirically_folner(&rows, tol.max(f64::MIN_POSITIVE)) {
                Verdict::Folner
            } else {
                Verdict::NonFolner
            }
        }
        ExperimentKind::B3Check => {
            if outs.iter().all(|o| o.holds) {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        ExperimentKind::Sharpness => {
            if errors.iter().all(|&e| e <= tol) {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        _ => sweep_verdict(&errors, tol),
    };
    Ok(Report {
        experiment: cfg.experiment,
        verdict,
        records: outs.into_iter().map(|o| o.record).collect(),
    })
}

fn quadrature(cfg: &ExperimentConfig, s: &Symbol) -> Quadrature {
    match cfg.params.quadrature_points {
        Some(points_per_var) => Quadrature::Grid {
            points_per_var,
            offset: 0.5,
        },
        None => Quadrature::auto(s, cfg.seed),
    }
}

fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    use ExperimentKind as K;
    let mut p = Prepared {
        symbol: None,
        family: None,
        f: None,
        reference: 0.0,
        exploratory: cfg.is_alternating(),
        shifts: Vec::new(),
        dilation: Vec::new(),
        cap: cfg.max_size.unwrap_or(DEFAULT_DENSE_CAP),
    };
    if cfg.experiment != K::BohrAverage {
        p.family = Some(cfg.family()?);
    }
    match cfg.experiment {
        K::SzegoSweep => {
            let s = cfg.symbol()?;
            let f = cfg.function()?;
            let quad = quadrature(cfg, &s);
            p.reference = match predicted_limit(&s, p.family.as_ref().unwrap(), &f, &quad) {
                Ok(r) => r.real(),
                Err(Error::NoPrediction(_)) => {
                    p.exploratory = true;
                    integral_of(&s, &f, &quad)?.real()
                }
                Err(e) => return Err(e.into()),
            };
            p.symbol = Some(s);
            p.f = Some(f);
        }
        K::NaturalTruncationExplore => {
            let s = cfg.symbol()?;
            let f = cfg.function()?;
            p.reference = integral_of(&s, &f, &quadrature(cfg, &s))?.real();
            p.symbol = Some(s);
            p.f = Some(f);
        }
        K::FolnerCheck => {
            p.cap = cfg.max_size.unwrap_or(usize::MAX);
            for s in cfg.params.shifts.iter().flatten() {
                p.shifts.push(cfg.parse_shift(s, "params.shifts")?);
            }
        }
        K::Sharpness => {
            let shift = cfg.parse_shift(cfg.params.shift.as_deref().unwrap_or("2"), "params.shift")?;
            p.symbol = Some(match &shift {
                Shift::Natural(n) => Symbol::cosine_multiplicative(&mtoeplitz::arith::FactoredRational::from_natural(*n)?),
                Shift::Additive(a) => Symbol::cosine_additive(a),
                Shift::Rational { .. } => return Err(CliError::field("params.shift", "sharpness needs an integer shift")),
            });
            p.shifts.push(shift);
        }
        K::Determinant => {
            let s = cfg.symbol()?;
            let quad = quadrature(cfg, &s);
            p.reference = torus_integral_continuous(&s, &SpectralFunction::Log, &quad)?.real().exp();
            p.symbol = Some(s);
        }
        K::ZetaMoments => {
            let pr = &cfg.params;
            let oracle = zeta_moment(pr.gamma.unwrap_or(2.0), pr.m.unwrap_or(1), pr.n_max.unwrap_or(DEFAULT_ZETA_TERMS))?;
            p.reference = oracle.real();
            p.symbol = Some(cfg.zeta()?);
        }
        K::Gram => {
            p.dilation = cfg.dilation();
            let abs_sq = dilation_symbol(&p.dilation)?;
            let quad = quadrature(cfg, &abs_sq);
            p.reference = torus_integral_continuous(&abs_sq, &SpectralFunction::Log, &quad)?.real().exp();
        }
        K::B3Check => p.symbol = Some(cfg.symbol()?),
        K::BohrAverage => {
            let s = cfg.symbol()?;
            p.cap = usize::MAX;
            p.reference = match cfg.params.observable.unwrap_or_default() {
                Observable::Linear => s.constant_term().re,
                Observable::AbsSquare => {
                    let sq = s.convolve(&s.adjoint())?;
                    torus_integral(&sq, &bohr_polynomial(cfg))?.real()
                }
            };
            p.symbol = Some(s);
        }
    }
    Ok(p)
}

fn bohr_polynomial(cfg: &ExperimentConfig) -> Polynomial {
    match cfg.function.as_ref().map(|f| f.to_function()) {
        Some(SpectralFunction::Polynomial(p)) => p,
        _ => Polynomial::monomial(1),
    }
}

fn member(prep: &Prepared, n: usize) -> Result<IndexSet> {
    let set = prep
        .family
        .as_ref()
        .expect("family prepared")
        .member(n)
        .map_err(|source| CliError::AtPoint { n, source })?;
    if set.len() > prep.cap {
        return Err(CliError::SizeCap {
            n,
            size: set.len(),
            cap: prep.cap,
        });
    }
    Ok(set)
}

fn point(cfg: &ExperimentConfig, prep: &Prepared, n: usize, keep: bool) -> Result<PointOut> {
    use ExperimentKind as K;
    let at = |source| CliError::AtPoint { n, source };
    let limits = Limits {
        dense_cap: prep.cap.max(1),
        ..Limits::default()
    };
    let mut out = PointOut {
        record: ExperimentRecord {
            n,
            size: 0,
            value: 0.0,
            reference: prep.reference,
            abs_error: 0.0,
            wall_ms: 0,
        },
        matrix: None,
        defects: Vec::new(),
        holds: true,
    };
    let rec = &mut out.record;
    let mut matrix = None;
    match cfg.experiment {
        K::BohrAverage => {
            let s = prep.symbol.as_ref().unwrap();
            let step = cfg.params.step.unwrap_or(DEFAULT_BOHR_STEP);
            let obs = match cfg.params.observable.unwrap_or_default() {
                Observable::Linear => BohrObservable::Linear,
                Observable::AbsSquare => BohrObservable::AbsSquarePolynomial(bohr_polynomial(cfg)),
            };
            let avg = bohr_time_average(s, &obs, n as f64, step).map_err(at)?;
            rec.size = ((2.0 * n as f64 / step).ceil() as usize).max(1);
            rec.value = avg.value.re;
            rec.abs_error = (avg.value - Complex64::new(prep.reference, 0.0)).norm();
            return Ok(out);
        }
        K::FolnerCheck => {
            let set = member(prep, n)?;
            rec.size = set.len();
            out.defects = folner_defect(&[(n, set)], &prep.shifts).map_err(at)?;
            rec.value = out.defects.iter().map(|r| r.defect).fold(0.0, f64::max);
            rec.abs_error = rec.value;
            return Ok(out);
        }
        _ => {}
    }
    let set = member(prep, n)?;
    rec.size = set.len();
    match cfg.experiment {
        K::SzegoSweep | K::NaturalTruncationExplore => {
            let t = truncate_with(prep.symbol.as_ref().unwrap(), &set, &limits).map_err(at)?;
            rec.value = trace_of_f(&t, prep.f.as_ref().unwrap()).map_err(at)?;
            matrix = Some(t);
        }
        K::Sharpness => {
            let t = truncate_with(prep.symbol.as_ref().unwrap(), &set, &limits).map_err(at)?;
            rec.value = trace_of_f(&t, &SpectralFunction::power(2)).map_err(at)?;
            rec.reference = 2.0 * mtoeplitz::index_sets::folner_ratio(&set, &prep.shifts[0]).map_err(at)?;
            matrix = Some(t);
        }
        K::Determinant => {
            let t = truncate_with(prep.symbol.as_ref().unwrap(), &set, &limits).map_err(at)?;
            rec.value = normalized_det(&t).map_err(at)?;
            matrix = Some(t);
        }
        K::ZetaMoments => {
            let t = truncate_with(prep.symbol.as_ref().unwrap(), &set, &limits).map_err(at)?;
            rec.value = singular_moments(&t, cfg.params.m.unwrap_or(1)).map_err(at)?;
            matrix = Some(t);
        }
        K::Gram => {
            let g = gram_matrix(&prep.dilation, &set).map_err(at)?;
            rec.value = normalized_det(&g).map_err(at)?;
            matrix = Some(g);
        }
        K::B3Check => {
            let s = prep.symbol.as_ref().unwrap();
            let check = prop_b3_check(s, &set, cfg.params.power.unwrap_or(2)).map_err(at)?;
            rec.value = check.lhs;
            rec.reference = check.rhs;
            out.holds = check.holds;
            if keep {
                matrix = Some(truncate_with(s, &set, &limits).map_err(at)?);
            }
        }
        K::FolnerCheck | K::BohrAverage => unreachable!(),
    }
    rec.abs_error = (rec.value - rec.reference).abs();
    if !rec.abs_error.is_finite() {
        return Err(at(Error::Domain("non-finite error".into())));
    }
    if keep {
        out.matrix = matrix;
    }
    Ok(out)
}
