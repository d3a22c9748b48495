//! Reference limits computed without any truncated matrix.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith;
use crate::error::{domain, Error, Result};
use crate::index_sets::SetFamily;
use crate::poly::{Polynomial, SpectralFunction};
use crate::symbol::{Symbol, TorusGrid, DEFAULT_SUPPORT_CAP};

/// Default Monte Carlo sample count.
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;

/// Grid quadrature is offered up to this many active coordinates.
pub const MAX_GRID_VARS: usize = 8;

/// Largest tensor grid evaluated.
pub const MAX_GRID_POINTS: usize = 1 << 22;

/// Required agreement of the convolution and DFT paths.
pub const PATH_AGREEMENT: f64 = 1e-10;

/// Half-width of the endpoint band in push-forward diagnostics.
pub const ENDPOINT_BAND: f64 = 1e-6;

const MC_SHARDS: u64 = 64;

/// How a reference value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Constant Fourier coefficient by exact convolution or exact DFT.
    ExactQuadrature,
    /// Tensor-grid average of a non-polynomial integrand.
    GridQuadrature,
    MonteCarlo,
    DirichletSeries,
    TimeAverage,
    /// `f(ŝ(1))`.
    PointEvaluation,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::ExactQuadrature => "exact-quadrature",
            Self::GridQuadrature => "grid-quadrature",
            Self::MonteCarlo => "monte-carlo",
            Self::DirichletSeries => "dirichlet-series",
            Self::TimeAverage => "time-average",
            Self::PointEvaluation => "point-evaluation",
        }
    }
}

/// A reference value with its provenance and error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceLimit {
    pub value: Complex64,
    pub method: Method,
    pub error_bound: f64,
    /// Whether `error_bound` is proven rather than estimated.
    pub rigorous: bool,
}

impl ReferenceLimit {
    pub fn real(&self) -> f64 {
        self.value.re
    }
}

/// Quadrature for non-polynomial integrands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quadrature {
    /// `points_per_var` points per active coordinate at angles `2π(k + offset)/M`.
    Grid { points_per_var: usize, offset: f64 },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Quadrature {
    /// A grid when the symbol has few active coordinates, Monte Carlo otherwise.
    pub fn auto(s: &Symbol, seed: u64) -> Self {
        let d = s.variables().len();
        if d <= MAX_GRID_VARS {
            let per = (MAX_GRID_POINTS as f64).powf(1.0 / d.max(1) as f64).floor() as usize;
            Self::Grid {
                points_per_var: per.clamp(2, 1 << 14),
                offset: 0.5,
            }
        } else {
            Self::MonteCarlo {
                samples: DEFAULT_MC_SAMPLES,
                seed,
            }
        }
    }
}

/// A symbol flattened for fast evaluation at raw angles.
struct Compiled {
    vars: usize,
    terms: Vec<(Complex64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn new(s: &Symbol) -> Self {
        let pos: BTreeMap<u64, usize> = s.variables().into_iter().enumerate().map(|(i, v)| (v, i)).collect();
        let terms = s
            .terms()
            .map(|(f, &c)| {
                let ex = f.exponents().into_iter().map(|(k, e)| (pos[&k], e as i32)).collect();
                (c, ex)
            })
            .collect();
        Self {
            vars: pos.len(),
            terms,
        }
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, ex)| ex.iter().fold(*c, |acc, &(i, e)| acc * z[i].powi(e)))
            .sum()
    }
}

fn constant_of_product(a: &Symbol, b: &Symbol) -> Complex64 {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.terms().map(|(f, c)| c * big.coeff(&f.inverse())).sum()
}

/// `∫ p(s) dm` as `Σ_k c_k (s^k)^(1)`; `(s^k)^(1)` is paired from powers up to `⌈k/2⌉`.
fn convolution_path(s: &Symbol, p: &Polynomial, cap: usize) -> Result<Complex64> {
    let m = p.degree();
    let half = m.div_ceil(2);
    let mut powers = vec![Symbol::unit(s.kind())];
    for k in 1..=half {
        powers.push(powers[k - 1].convolve_capped(s, cap)?);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &c) in p.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let a = k.div_ceil(2);
        total += c * constant_of_product(&powers[a], &powers[k - a]);
    }
    Ok(total)
}

fn dft_path(s: &Symbol, p: &Polynomial) -> Option<Result<Complex64>> {
    let grid = TorusGrid::exact_for(s, p.degree().max(1) as u32);
    let n = grid.len().filter(|&n| n <= MAX_GRID_POINTS && grid.dims() <= MAX_GRID_VARS)?;
    Some(grid.eval(s).map(|v| v.iter().map(|&z| p.eval_complex(z)).sum::<Complex64>() / n as f64))
}

/// `∫ p(s(z)) dm(z)`, exactly: the constant Fourier coefficient of `p∘s`.
///
/// Both the convolution and the exact-DFT paths are run when feasible and
/// must agree to `1e-10`; `error_bound` is their observed difference.
pub fn torus_integral(s: &Symbol, p: &Polynomial) -> Result<ReferenceLimit> {
    let conv = convolution_path(s, p, DEFAULT_SUPPORT_CAP);
    let dft = dft_path(s, p);
    let (value, err) = match (conv, dft) {
        (Ok(a), Some(Ok(b))) => {
            let diff = (a - b).norm();
            if diff > PATH_AGREEMENT * a.norm().max(1.0) {
                return Err(Error::Solver(format!(
                    "convolution {a} and exact DFT {b} disagree by {diff:e}"
                )));
            }
            (a, diff)
        }
        (Ok(a), _) => (a, 0.0),
        (Err(_), Some(Ok(b))) => (b, 0.0),
        (Err(e), _) => return Err(e),
    };
    Ok(ReferenceLimit {
        value,
        method: Method::ExactQuadrature,
        error_bound: err,
        rigorous: true,
    })
}

fn grid_mean(c: &Compiled, per: usize, offset: f64, g: &(dyn Fn(Complex64) -> f64 + Sync)) -> Result<f64> {
    let total = per
        .checked_pow(c.vars as u32)
        .filter(|&n| n <= MAX_GRID_POINTS * 4)
        .ok_or(Error::Resource {
            what: "grid points",
            size: usize::MAX,
            cap: MAX_GRID_POINTS * 4,
        })?;
    let roots: Vec<Complex64> = (0..per).map(|k| Complex64::cis(TAU * (k as f64 + offset) / per as f64)).collect();
    let mut idx = vec![0usize; c.vars];
    let mut z = vec![roots[0]; c.vars];
    let mut sum = 0.0;
    for _ in 0..total {
        for (i, &k) in idx.iter().enumerate() {
            z[i] = roots[k];
        }
        sum += g(c.eval(&z));
        for i in (0..c.vars).rev() {
            idx[i] += 1;
            if idx[i] < per {
                break;
            }
            idx[i] = 0;
        }
    }
    Ok(sum / total as f64)
}

/// Mean and standard error of `g(s(z))` for Haar-random `z`; shards use
/// ChaCha streams of the master seed and are summed in shard order.
fn mc_mean(c: &Compiled, samples: usize, seed: u64, g: &(dyn Fn(Complex64) -> f64 + Sync)) -> (f64, f64) {
    let samples = samples.max(2);
    let per_shard = samples.div_ceil(MC_SHARDS as usize);
    let parts: Vec<(f64, f64, usize)> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let lo = shard as usize * per_shard;
            let n = per_shard.min(samples.saturating_sub(lo));
            let mut z = vec![Complex64::new(1.0, 0.0); c.vars];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                for zi in z.iter_mut() {
                    *zi = Complex64::cis(TAU * rng.random::<f64>());
                }
                let v = g(c.eval(&z));
                s1 += v;
                s2 += v * v;
            }
            (s1, s2, n)
        })
        .collect();
    let (s1, s2, n) = parts
        .iter()
        .fold((0.0, 0.0, 0usize), |(a, b, k), &(x, y, m)| (a + x, b + y, k + m));
    let mean = s1 / n as f64;
    let var = (s2 / n as f64 - mean * mean).max(0.0);
    (mean, (var / n as f64).sqrt())
}

fn average(s: &Symbol, quad: &Quadrature, g: &(dyn Fn(Complex64) -> f64 + Sync)) -> Result<ReferenceLimit> {
    let c = Compiled::new(s);
    match *quad {
        Quadrature::Grid { points_per_var, offset } => {
            if c.vars > MAX_GRID_VARS {
                return domain(format!(
                    "grid quadrature supports at most {MAX_GRID_VARS} active coordinates, symbol has {}",
                    c.vars
                ));
            }
            let fine = grid_mean(&c, points_per_var.max(2), offset, g)?;
            let coarse = grid_mean(&c, (points_per_var / 2).max(1), offset, g)?;
            Ok(ReferenceLimit {
                value: Complex64::new(fine, 0.0),
                method: Method::GridQuadrature,
                error_bound: (fine - coarse).abs(),
                rigorous: false,
            })
        }
        Quadrature::MonteCarlo { samples, seed } => {
            let (mean, se) = mc_mean(&c, samples, seed, g);
            Ok(ReferenceLimit {
                value: Complex64::new(mean, 0.0),
                method: Method::MonteCarlo,
                error_bound: se,
                rigorous: false,
            })
        }
    }
}

/// `∫ f(s(z)) dm(z)` for continuous `f` by grid or Monte Carlo averaging.
///
/// `error_bound` is the grid-halving delta or the Monte Carlo standard error.
pub fn torus_integral_continuous(s: &Symbol, f: &SpectralFunction, quad: &Quadrature) -> Result<ReferenceLimit> {
    if !s.is_hermitian() {
        return domain("continuous quadrature needs a real-valued (hermitian) symbol");
    }
    let bound = s.l1_norm();
    let (lo, hi) = range_hint(s, bound);
    f.check_domain(lo, hi)?;
    average(s, quad, &|z: Complex64| f.eval(z.re))
}

/// Range `[lo, hi]` used for the domain check: exact ends for a symbol with
/// a single active coordinate, `±Σ|ŝ|` around the mean otherwise.
fn range_hint(s: &Symbol, bound: f64) -> (f64, f64) {
    let c0 = s.constant_term().re;
    let spread = bound - s.constant_term().norm();
    let vars = s.variables();
    if vars.len() == 1 {
        let c = Compiled::new(s);
        let m = 1 << 14;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..m {
            let v = c.eval(&[Complex64::cis(TAU * k as f64 / m as f64)]).re;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // sampled extremes of a trig polynomial of degree d are within O(d²/m²) of the true ones
        let d = *s.degrees().values().next().unwrap_or(&0) as f64;
        let slack = spread * (TAU * d / m as f64).powi(2);
        (lo - slack, hi + slack)
    } else {
        (c0 - spread, c0 + spread)
    }
}

/// `∫ f(s) dm` through the exact path for polynomials, quadrature otherwise.
pub fn integral_of(s: &Symbol, f: &SpectralFunction, quad: &Quadrature) -> Result<ReferenceLimit> {
    match f {
        SpectralFunction::Polynomial(p) => {
            let r = torus_integral(s, p)?;
            Ok(ReferenceLimit {
                value: Complex64::new(r.value.re, 0.0),
                ..r
            })
        }
        _ => torus_integral_continuous(s, f, quad),
    }
}

/// Push-forward mass of an interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Pushforward {
    /// `m({z : s(z) ∈ (lo, hi)})`.
    pub measure: ReferenceLimit,
    /// Fraction of sample points within `1e-6` of `lo` or `hi`.
    pub endpoint_mass: f64,
}

/// `m({z : s(z) ∈ (lo, hi)})` by grid or Monte Carlo counting.
pub fn pushforward_measure(s: &Symbol, lo: f64, hi: f64, quad: &Quadrature) -> Result<Pushforward> {
    if !s.is_hermitian() {
        return domain("push-forward measures need a hermitian symbol");
    }
    if !(lo < hi) {
        return domain(format!("empty interval ({lo}, {hi})"));
    }
    let inside = move |z: Complex64| if z.re > lo && z.re < hi { 1.0 } else { 0.0 };
    let near = move |z: Complex64| {
        if (z.re - lo).abs() <= ENDPOINT_BAND || (z.re - hi).abs() <= ENDPOINT_BAND {
            1.0
        } else {
            0.0
        }
    };
    let measure = average(s, quad, &inside)?;
    let endpoint_mass = average(s, quad, &near)?.value.re;
    Ok(Pushforward { measure, endpoint_mass })
}

/// The limit of `(1/#σ_N) Tr f(T_{σ_N}(s))` predicted for a recognized family.
///
/// * Følner families: `∫ f(s) dm`.
/// * `ℓ`-spaced segments: `∫ f(s_ℓ) dm` with `s_ℓ` the `ℓ`-average.
/// * Sublattice boxes: the sublattice projection.
/// * Embedded lattice boxes `ι({0..N}^d)`: the projection to the first `d` primes.
/// * Sparse powers: `f(ŝ(0))`.
/// * Finite augmentations: the base family's limit.
pub fn predicted_limit(s: &Symbol, family: &SetFamily, f: &SpectralFunction, quad: &Quadrature) -> Result<ReferenceLimit> {
    if s.kind() != family.kind() {
        return domain("symbol kind does not match the set family");
    }
    match family {
        SetFamily::AdditiveSegment | SetFamily::AdditiveBox { .. } | SetFamily::HarmonicBox => integral_of(s, f, quad),
        SetFamily::EvenSegment { ell } => integral_of(&s.ell_average(*ell)?, f, quad),
        SetFamily::SublatticeBox { ell } => integral_of(&s.sublattice_project(ell)?, f, quad),
        SetFamily::EmbeddedLatticeBox { dim } => integral_of(&s.tail_project(*dim)?, f, quad),
        SetFamily::SparsePowers { .. } => {
            let c = s.constant_term();
            if c.im.abs() > 1e-12 * c.norm().max(1.0) {
                return domain("the sparse-family limit needs a real constant coefficient");
            }
            f.check_domain(c.re, c.re)?;
            Ok(ReferenceLimit {
                value: Complex64::new(f.eval(c.re), 0.0),
                method: Method::PointEvaluation,
                error_bound: 0.0,
                rigorous: true,
            })
        }
        SetFamily::Augmented { base, .. } => predicted_limit(s, base, f, quad),
        SetFamily::Alternating { .. } => Err(Error::NoPrediction(
            "alternating families need not converge".into(),
        )),
        SetFamily::NaturalSegment => Err(Error::NoPrediction(
            "the natural truncation {1..N} is not Følner; no limit is known".into(),
        )),
        SetFamily::Explicit(_) => Err(Error::NoPrediction("explicit set lists carry no limit".into())),
    }
}

/// Tail bound for `Σ_{n > N} d_m(n)² n^{−2γ}`, with a rigor flag.
///
/// `m = 1`: `N^{1−2γ}/(2γ−1)`. `1 < m < 2γ`: `d_m(n) ≤ d(n)^{m−1}` and
/// `d(n) ≤ 2√n` give `4^{m−1} N^{m−2γ}/(2γ−m)`. Otherwise `d_m(n) ≤ C n^ε`
/// with `ε = (2γ−1)/4` and `C` the largest ratio seen up to `N` (heuristic).
fn zeta_tail(gamma: f64, m: u32, n_max: usize, d: &[u64]) -> (f64, bool) {
    let n = n_max as f64;
    let two_g = 2.0 * gamma;
    if m == 1 {
        return (n.powf(1.0 - two_g) / (two_g - 1.0), true);
    }
    let mf = m as f64;
    if mf < two_g {
        return (4f64.powf(mf - 1.0) * n.powf(mf - two_g) / (two_g - mf), true);
    }
    let eps = (two_g - 1.0) / 4.0;
    let c = d
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &v)| v as f64 / (k as f64).powf(eps))
        .fold(0.0, f64::max);
    (c * c * n.powf(1.0 + 2.0 * eps - two_g) / (two_g - 1.0 - 2.0 * eps), false)
}

/// `Σ_{n ≥ 1} d_m(n)² n^{−2γ}`, the mean of `|ζ(γ + it)|^{2m}`, as a partial
/// sum to `n_max` plus a tail bound.
pub fn zeta_moment(gamma: f64, m: u32, n_max: usize) -> Result<ReferenceLimit> {
    if gamma.is_nan() || gamma <= 1.0 {
        return domain(format!("zeta moments need gamma > 1, got {gamma}"));
    }
    if n_max == 0 {
        return domain("zeta moments need n_max >= 1");
    }
    let d = arith::divisor_function(m, n_max)?;
    // ascending n adds the largest terms first; reverse for accuracy
    let partial: f64 = (1..=n_max)
        .rev()
        .map(|n| {
            let v = d[n] as f64;
            v * v * (n as f64).powf(-2.0 * gamma)
        })
        .sum();
    let (tail, rigorous) = zeta_tail(gamma, m, n_max, &d);
    Ok(ReferenceLimit {
        value: Complex64::new(partial, 0.0),
        method: Method::DirichletSeries,
        error_bound: tail,
        rigorous,
    })
}

/// Observable averaged along the Bohr line `t ↦ s(p^{it})`.
#[derive(Clone, Debug, PartialEq)]
pub enum BohrObservable {
    /// The value `s(p^{it})` itself.
    Linear,
    /// `p(|s(p^{it})|²)`.
    AbsSquarePolynomial(Polynomial),
}

fn bohr_mean(terms: &[(f64, Complex64)], obs: &BohrObservable, horizon: f64, step: f64) -> Complex64 {
    let n = ((2.0 * horizon / step).ceil() as usize).max(1);
    let h = 2.0 * horizon / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let t = -horizon + (i as f64 + 0.5) * h;
        let v: Complex64 = terms.iter().map(|&(l, c)| c * Complex64::cis(t * l)).sum();
        acc += match obs {
            BohrObservable::Linear => v,
            BohrObservable::AbsSquarePolynomial(p) => Complex64::new(p.eval(v.norm_sqr()), 0.0),
        };
    }
    acc / n as f64
}

/// `(1/2T) ∫_{−T}^{T} g(s(p^{it})) dt` by the midpoint rule; `error_bound`
/// is the change from horizon `T/2` to `T`.
pub fn bohr_time_average(s: &Symbol, obs: &BohrObservable, horizon: f64, step: f64) -> Result<ReferenceLimit> {
    if s.kind() != crate::symbol::GroupKind::Multiplicative {
        return domain("Bohr time averages need a multiplicative symbol");
    }
    if !(horizon > 0.0 && step > 0.0) {
        return domain("Bohr time averages need a positive horizon and step");
    }
    let terms: Vec<(f64, Complex64)> = s
        .terms()
        .map(|(f, &c)| match f {
            crate::symbol::Frequency::Multiplicative(q) => (q.ln(), c),
            crate::symbol::Frequency::Additive(_) => unreachable!(),
        })
        .collect();
    let full = bohr_mean(&terms, obs, horizon, step);
    let half = bohr_mean(&terms, obs, horizon / 2.0, step);
    Ok(ReferenceLimit {
        value: full,
        method: Method::TimeAverage,
        error_bound: (full - half).norm(),
        rigorous: false,
    })
}
