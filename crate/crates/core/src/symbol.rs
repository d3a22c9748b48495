//! Finitely supported symbols (trigonometric polynomials) on `𝕋^d` and `𝕋^∞`.
//!
//! A [`Symbol`] is a finite map from frequencies to complex Fourier
//! coefficients. Additive symbols live on `𝕋^d` with frequencies in `ℤ^d`;
//! multiplicative symbols live on `𝕋^∞` with frequencies in `ℚ₊`, a rational
//! `q = p^α` standing for the character `z ↦ z^α`.
//!
//! Torus coordinates are addressed by a `u64` key: the axis index `0..d` for
//! additive symbols and the prime `p_j` itself for multiplicative ones.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::arith::{self, FactoredRational};
use crate::error::{domain, Error, Result};

/// Coefficients below this magnitude are dropped after arithmetic.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Largest support accepted from [`Symbol::power`] and [`Symbol::convolve`].
pub const DEFAULT_SUPPORT_CAP: usize = 2_000_000;

const UNIT_MODULUS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Frequencies in `ℤ^d`.
    Additive(usize),
    /// Frequencies in `ℚ₊`.
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frequency {
    Additive(Vec<i64>),
    Multiplicative(FactoredRational),
}

impl Frequency {
    pub fn kind(&self) -> GroupKind {
        match self {
            Self::Additive(a) => GroupKind::Additive(a.len()),
            Self::Multiplicative(_) => GroupKind::Multiplicative,
        }
    }

    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::Additive(d) => Self::Additive(vec![0; d]),
            GroupKind::Multiplicative => Self::Multiplicative(FactoredRational::unit()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Self::Additive(a) => a.iter().all(|&x| x == 0),
            Self::Multiplicative(q) => q.is_unit(),
        }
    }

    /// Group operation; kinds must match.
    pub fn compose(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Additive(a), Self::Additive(b)) => {
                Self::Additive(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Self::Multiplicative(a), Self::Multiplicative(b)) => Self::Multiplicative(a.mul(b)),
            _ => panic!("composing frequencies of different kinds"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Additive(a) => Self::Additive(a.iter().map(|x| -x).collect()),
            Self::Multiplicative(q) => Self::Multiplicative(q.inv()),
        }
    }

    /// Nonzero `(coordinate key, exponent)` pairs of the character.
    pub fn exponents(&self) -> Vec<(u64, i64)> {
        match self {
            Self::Additive(a) => a
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| (i as u64, e))
                .collect(),
            Self::Multiplicative(q) => q.factors().iter().map(|&(p, e)| (p, e as i64)).collect(),
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Additive(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "alpha=({})", parts.join(","))
            }
            Self::Multiplicative(q) => match (q.numerator(), q.denominator()) {
                (Some(a), Some(b)) => write!(f, "q={a}/{b}"),
                _ => write!(f, "q={q}"),
            },
        }
    }
}

/// A point of the torus: unit-modulus values for the coordinates a symbol uses.
#[derive(Clone, Debug, Default)]
pub struct TorusPoint {
    coords: BTreeMap<u64, Complex64>,
    fill: Option<Complex64>,
}

impl TorusPoint {
    pub fn new() -> Self {
        Self::default()
    }

    /// The point with every coordinate equal to `z`.
    pub fn constant(z: Complex64) -> Self {
        Self {
            coords: BTreeMap::new(),
            fill: Some(z),
        }
    }

    pub fn with(mut self, key: u64, z: Complex64) -> Self {
        self.coords.insert(key, z);
        self
    }

    /// Additive point from angles `θ_i`, `z_i = e^{iθ_i}`.
    pub fn from_angles(angles: &[f64]) -> Self {
        let mut p = Self::new();
        for (i, &t) in angles.iter().enumerate() {
            p.coords.insert(i as u64, Complex64::cis(t));
        }
        p
    }

    pub fn get(&self, key: u64) -> Option<Complex64> {
        self.coords.get(&key).copied().or(self.fill)
    }
}

/// A trigonometric polynomial `Σ ĉ(α) z^α` with finitely many nonzero terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    kind: GroupKind,
    coeffs: BTreeMap<Frequency, Complex64>,
}

impl Symbol {
    pub fn zero(kind: GroupKind) -> Self {
        Self {
            kind,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(kind: GroupKind, c: Complex64) -> Self {
        let mut s = Self::zero(kind);
        s.add_term(Frequency::identity(kind), c).expect("identity has the right kind");
        s
    }

    /// The symbol `φ ≡ 1`, whose truncations are identity matrices.
    pub fn unit(kind: GroupKind) -> Self {
        Self::constant(kind, Complex64::new(1.0, 0.0))
    }

    /// Sum of terms; repeated frequencies accumulate.
    pub fn from_terms(
        kind: GroupKind,
        terms: impl IntoIterator<Item = (Frequency, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(kind);
        for (f, c) in terms {
            s.add_term(f, c)?;
        }
        Ok(s)
    }

    /// Multiplicative symbol from `(numerator, denominator, coefficient)` triples.
    pub fn multiplicative(terms: &[(u64, u64, Complex64)]) -> Result<Self> {
        let mut s = Self::zero(GroupKind::Multiplicative);
        for &(a, b, c) in terms {
            s.add_term(Frequency::Multiplicative(arith::ratio(a, b)?), c)?;
        }
        Ok(s)
    }

    /// Additive symbol on `𝕋^d` from `(α, coefficient)` pairs.
    pub fn additive(d: usize, terms: &[(&[i64], Complex64)]) -> Result<Self> {
        let mut s = Self::zero(GroupKind::Additive(d));
        for (a, c) in terms {
            s.add_term(Frequency::Additive(a.to_vec()), *c)?;
        }
        Ok(s)
    }

    /// `z^α + z^{−α}` on `𝕋^d`, `d = α.len()`.
    pub fn cosine_additive(alpha: &[i64]) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let f = Frequency::Additive(alpha.to_vec());
        let mut s = Self::zero(f.kind());
        s.add_term(f.inverse(), one).unwrap();
        s.add_term(f, one).unwrap();
        s
    }

    /// `z^{α(q)} + z^{−α(q)}` on `𝕋^∞`.
    pub fn cosine_multiplicative(q: &FactoredRational) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let f = Frequency::Multiplicative(q.clone());
        let mut s = Self::zero(GroupKind::Multiplicative);
        s.add_term(f.inverse(), one).unwrap();
        s.add_term(f, one).unwrap();
        s
    }

    /// Add `c · z^f`, dropping the term if the result is below the pruning threshold.
    pub fn add_term(&mut self, f: Frequency, c: Complex64) -> Result<()> {
        if f.kind() != self.kind {
            return domain(format!(
                "frequency {f} does not belong to a {:?} symbol",
                self.kind
            ));
        }
        match self.coeffs.entry(f) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().norm() < PRUNE_THRESHOLD {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c.norm() >= PRUNE_THRESHOLD {
                    v.insert(c);
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms in canonical frequency order.
    pub fn terms(&self) -> impl Iterator<Item = (&Frequency, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, f: &Frequency) -> Complex64 {
        self.coeffs.get(f).copied().unwrap_or_default()
    }

    /// `ĉ(1)` (multiplicative) or `ĉ(0)` (additive): the mean value of `φ`.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&Frequency::identity(self.kind))
    }

    /// `Σ |ĉ|`, an upper bound for `sup |φ|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `Σ |ĉ|² = ∫ |φ|² dm`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|ĉ(α) − conj(ĉ(α⁻¹))|` over the support.
    pub fn hermitian_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(f, c)| (c - self.coeff(&f.inverse()).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `ĉ(α⁻¹) = conj(ĉ(α))` for all `α`, i.e. `φ` is real-valued.
    ///
    /// Compared at `1e-12 · Σ|ĉ|` so that symbols produced by convolution,
    /// whose mirrored coefficients are summed in different orders, qualify.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= 1e-12 * self.l1_norm().max(1.0)
    }

    /// Coordinate keys used by the support, ascending.
    pub fn variables(&self) -> Vec<u64> {
        self.degrees().into_keys().collect()
    }

    /// Degree in each active coordinate: the largest `|exponent|` seen.
    pub fn degrees(&self) -> BTreeMap<u64, u32> {
        let mut deg = BTreeMap::new();
        for f in self.coeffs.keys() {
            for (k, e) in f.exponents() {
                let d = deg.entry(k).or_insert(0u32);
                *d = (*d).max(e.unsigned_abs() as u32);
            }
        }
        deg
    }

    /// `Σ ĉ(α) z^α`.
    pub fn eval(&self, z: &TorusPoint) -> Result<Complex64> {
        let mut cache: BTreeMap<u64, Complex64> = BTreeMap::new();
        for k in self.variables() {
            let Some(v) = z.get(k) else {
                return domain(format!("torus point has no value for coordinate {k}"));
            };
            if (v.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
                return domain(format!("coordinate {k} has modulus {} != 1", v.norm()));
            }
            cache.insert(k, v);
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(f, c)| {
                f.exponents()
                    .into_iter()
                    .fold(*c, |acc, (k, e)| acc * cache[&k].powi(e as i32))
            })
            .sum())
    }

    /// Real value of a hermitian symbol, imaginary rounding noise discarded.
    pub fn eval_real(&self, z: &TorusPoint) -> Result<f64> {
        if !self.is_hermitian() {
            return domain("eval_real needs a hermitian symbol");
        }
        Ok(self.eval(z)?.re)
    }

    fn check_kind(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return domain(format!(
                "symbol kinds differ: {:?} vs {:?}",
                self.kind, other.kind
            ));
        }
        Ok(())
    }

    /// Coefficients of the pointwise product `φ₁ φ₂`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.convolve_capped(other, DEFAULT_SUPPORT_CAP)
    }

    pub fn convolve_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.check_kind(other)?;
        let mut acc: BTreeMap<Frequency, Complex64> = BTreeMap::new();
        for (f1, c1) in &self.coeffs {
            for (f2, c2) in &other.coeffs {
                *acc.entry(f1.compose(f2)).or_default() += c1 * c2;
            }
            if acc.len() > cap {
                return Err(Error::Resource {
                    what: "symbol support",
                    size: acc.len(),
                    cap,
                });
            }
        }
        acc.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
        Ok(Self {
            kind: self.kind,
            coeffs: acc,
        })
    }

    /// `φⁿ` by repeated convolution; `n = 0` gives the unit symbol.
    pub fn power(&self, n: u32) -> Result<Self> {
        self.power_capped(n, DEFAULT_SUPPORT_CAP)
    }

    pub fn power_capped(&self, n: u32, cap: usize) -> Result<Self> {
        let mut out = Self::unit(self.kind);
        for _ in 0..n {
            out = out.convolve_capped(self, cap)?;
        }
        Ok(out)
    }

    /// Coefficients of `conj(φ)`: `ĉ(α) ↦ conj(ĉ(α⁻¹))`.
    pub fn adjoint(&self) -> Self {
        Self {
            kind: self.kind,
            coeffs: self
                .coeffs
                .iter()
                .map(|(f, c)| (f.inverse(), c.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.values_mut() {
            *c *= a;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
        Self {
            kind: self.kind,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_kind(other)?;
        let mut out = self.clone();
        for (f, c) in &other.coeffs {
            out.add_term(f.clone(), *c)?;
        }
        Ok(out)
    }

    fn filtered(&self, keep: impl Fn(&Frequency) -> bool) -> Self {
        Self {
            kind: self.kind,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(f, _)| keep(f))
                .map(|(f, c)| (f.clone(), *c))
                .collect(),
        }
    }

    /// `φ_ℓ(z) = (1/ℓ) Σ_j φ(z e^{2πij/ℓ})` on `𝕋`: keeps frequencies divisible by `ℓ`.
    pub fn ell_average(&self, ell: u64) -> Result<Self> {
        if self.kind != GroupKind::Additive(1) {
            return domain("ell_average needs an additive symbol on the circle");
        }
        self.sublattice_project(&[ell])
    }

    /// Projection onto the diagonal sublattice `ℓ₁ℤ × … × ℓ_dℤ`.
    ///
    /// Equivalent to averaging `φ(zζ)` over the finite group of `ζ` with
    /// `ζ_i^{ℓ_i} = 1`.
    pub fn sublattice_project(&self, ell: &[u64]) -> Result<Self> {
        let GroupKind::Additive(d) = self.kind else {
            return domain("sublattice projection needs an additive symbol");
        };
        if ell.len() != d || ell.contains(&0) {
            return domain(format!(
                "sublattice needs {d} positive periods, got {ell:?}"
            ));
        }
        Ok(self.filtered(|f| match f {
            Frequency::Additive(a) => a.iter().zip(ell).all(|(&x, &l)| x.rem_euclid(l as i64) == 0),
            Frequency::Multiplicative(_) => false,
        }))
    }

    /// `φ_d(z) = ∫ φ(z₁, …, z_d, ζ) dm(ζ)`: keeps frequencies built from the first `d` primes.
    pub fn tail_project(&self, d: usize) -> Result<Self> {
        if self.kind != GroupKind::Multiplicative {
            return domain("tail projection needs a multiplicative symbol");
        }
        if d > arith::PRIME_TABLE_LEN {
            return domain(format!(
                "tail projection supports d <= {}",
                arith::PRIME_TABLE_LEN
            ));
        }
        let bound = if d == 0 { 1 } else { arith::nth_prime(d - 1).unwrap() };
        Ok(self.filtered(|f| match f {
            Frequency::Multiplicative(q) => q.max_prime().is_none_or(|p| p <= bound),
            Frequency::Additive(_) => false,
        }))
    }

    /// `Σ ĉ(q) q^{it}`: the symbol along the Bohr line `z_j = p_j^{it}`.
    pub fn bohr_eval(&self, t: f64) -> Result<Complex64> {
        if self.kind != GroupKind::Multiplicative {
            return domain("bohr_eval needs a multiplicative symbol");
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(f, c)| match f {
                Frequency::Multiplicative(q) => c * Complex64::cis(t * q.ln()),
                Frequency::Additive(_) => unreachable!(),
            })
            .sum())
    }

    /// Serialize in the `<frequency> <re> <im>` line format.
    pub fn to_literal(&self) -> String {
        let mut out = String::new();
        for (f, c) in &self.coeffs {
            out.push_str(&format!("{f} {} {}\n", c.re, c.im));
        }
        out
    }

    /// Parse the `<frequency> <re> <im>` line format.
    ///
    /// Frequencies are `q=a/b` or `q=a` (multiplicative) and `alpha=(i1,…,id)`
    /// (additive). Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sym: Option<Self> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |m: String| Error::Parse {
                line: line_no,
                message: m,
            };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 3 {
                return Err(err(format!("expected `<frequency> <re> <im>`, got `{line}`")));
            }
            let freq = parse_frequency(tokens[0]).map_err(err)?;
            let re: f64 = tokens[1]
                .parse()
                .map_err(|_| err(format!("bad real part `{}`", tokens[1])))?;
            let im: f64 = tokens[2]
                .parse()
                .map_err(|_| err(format!("bad imaginary part `{}`", tokens[2])))?;
            let s = sym.get_or_insert_with(|| Self::zero(freq.kind()));
            if s.kind != freq.kind() {
                return Err(err(format!(
                    "frequency {freq} mixes with a {:?} symbol",
                    s.kind
                )));
            }
            s.add_term(freq, Complex64::new(re, im)).map_err(|e| err(e.to_string()))?;
        }
        sym.ok_or(Error::Parse {
            line: 0,
            message: "empty symbol literal".into(),
        })
    }
}

fn parse_frequency(tok: &str) -> std::result::Result<Frequency, String> {
    if let Some(q) = tok.strip_prefix("q=") {
        let (a, b) = match q.split_once('/') {
            Some((a, b)) => (a, b),
            None => (q, "1"),
        };
        let a: u64 = a.parse().map_err(|_| format!("bad numerator in `{tok}`"))?;
        let b: u64 = b.parse().map_err(|_| format!("bad denominator in `{tok}`"))?;
        arith::ratio(a, b)
            .map(Frequency::Multiplicative)
            .map_err(|e| e.to_string())
    } else if let Some(a) = tok.strip_prefix("alpha=") {
        let inner = a
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| format!("expected alpha=(i1,...,id), got `{tok}`"))?;
        let v: std::result::Result<Vec<i64>, _> =
            inner.split(',').map(|x| x.trim().parse::<i64>()).collect();
        let v = v.map_err(|_| format!("bad integer in `{tok}`"))?;
        Ok(Frequency::Additive(v))
    } else {
        Err(format!("unknown frequency `{tok}`"))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// `ĉ(n) = n^{−γ}` for `1 ≤ n ≤ cutoff`: the line `t ↦ Σ n^{−γ−it}`, a
/// truncated `ζ(γ + it)` up to conjugation of `t`. Not hermitian.
pub fn zeta_symbol(gamma: f64, cutoff: u64) -> Result<Symbol> {
    if gamma.is_nan() || gamma <= 1.0 {
        return domain(format!("zeta symbol needs gamma > 1, got {gamma}"));
    }
    if cutoff == 0 {
        return domain("zeta symbol cutoff must be >= 1");
    }
    let mut s = Symbol::zero(GroupKind::Multiplicative);
    for n in 1..=cutoff {
        let q = arith::factor(n)?.to_rational();
        s.coeffs
            .insert(Frequency::Multiplicative(q), Complex64::new((n as f64).powf(-gamma), 0.0));
    }
    Ok(s)
}

/// `|B̃f|²` for the dilation series `f = Σ a_n √2 sin(πnx)`, where
/// `B̃f = Σ a_n z^{α(n)}`. Result is hermitian with `ĉ(1) = Σ|a_n|²`.
pub fn dilation_symbol(a: &[(u64, Complex64)]) -> Result<Symbol> {
    let b = dilation_lift(a)?;
    b.convolve(&b.adjoint())
}

/// `B̃f = Σ a_n z^{α(n)}`.
pub fn dilation_lift(a: &[(u64, Complex64)]) -> Result<Symbol> {
    let mut b = Symbol::zero(GroupKind::Multiplicative);
    for &(n, c) in a {
        b.add_term(Frequency::Multiplicative(arith::factor(n)?.to_rational()), c)?;
    }
    Ok(b)
}

/// Uniform tensor grid on the active coordinates of a symbol.
///
/// Angles are `2π(k + offset)/M_v`. With `M_v ≥ D_v + 1`, where `D_v` bounds
/// the degree of the integrand in coordinate `v`, the grid average of a
/// trigonometric polynomial equals its constant term exactly.
#[derive(Clone, Debug)]
pub struct TorusGrid {
    vars: Vec<u64>,
    sizes: Vec<usize>,
    offset: f64,
}

impl TorusGrid {
    pub fn new(vars: Vec<u64>, sizes: Vec<usize>, offset: f64) -> Self {
        assert_eq!(vars.len(), sizes.len());
        assert!(sizes.iter().all(|&m| m > 0));
        Self { vars, sizes, offset }
    }

    /// Grid exact for polynomials of degree `multiplier` in `s`: `M_v = multiplier·deg_v + 1`.
    pub fn exact_for(s: &Symbol, multiplier: u32) -> Self {
        let deg = s.degrees();
        let vars: Vec<u64> = deg.keys().copied().collect();
        let sizes = deg.values().map(|&d| (multiplier * d) as usize + 1).collect();
        Self::new(vars, sizes, 0.0)
    }

    /// `points_per_var` points in every active coordinate of `s`.
    pub fn uniform(s: &Symbol, points_per_var: usize, offset: f64) -> Self {
        let vars = s.variables();
        let sizes = vec![points_per_var; vars.len()];
        Self::new(vars, sizes, offset)
    }

    pub fn dims(&self) -> usize {
        self.vars.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Total number of points, `None` on overflow.
    pub fn len(&self) -> Option<usize> {
        self.sizes.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values of `s` at every grid point, in row-major order over `vars`.
    pub fn eval(&self, s: &Symbol) -> Result<Vec<Complex64>> {
        let total = self.len().ok_or(Error::Resource {
            what: "grid points",
            size: usize::MAX,
            cap: usize::MAX,
        })?;
        let pos: BTreeMap<u64, usize> = self.vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let deg = s.degrees();
        // tables[v][k][e + deg_v] = e^{i e θ_k}
        let mut tables: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let d = deg.get(v).copied().unwrap_or(0) as i64;
            let m = self.sizes[i];
            let t: Vec<Vec<Complex64>> = (0..m)
                .map(|k| {
                    let theta = TAU * (k as f64 + self.offset) / m as f64;
                    (-d..=d).map(|e| Complex64::cis(theta * e as f64)).collect()
                })
                .collect();
            tables.push(t);
        }
        let mut terms: Vec<(Complex64, Vec<(usize, usize)>)> = Vec::with_capacity(s.len());
        for (f, c) in s.terms() {
            let mut ex = Vec::new();
            for (k, e) in f.exponents() {
                let Some(&i) = pos.get(&k) else {
                    return domain(format!("grid lacks coordinate {k}"));
                };
                let d = deg[&k] as i64;
                ex.push((i, (e + d) as usize));
            }
            terms.push((*c, ex));
        }
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.vars.len()];
        for _ in 0..total {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, ex) in &terms {
                let mut v = *c;
                for &(i, e) in ex {
                    v *= tables[i][idx[i]][e];
                }
                acc += v;
            }
            out.push(acc);
            for i in (0..idx.len()).rev() {
                idx[i] += 1;
                if idx[i] < self.sizes[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mfreq(a: u64, b: u64) -> Frequency {
        Frequency::Multiplicative(arith::ratio(a, b).unwrap())
    }

    #[test]
    fn eval_examples() {
        let s = Symbol::cosine_multiplicative(&arith::ratio(2, 1).unwrap());
        let at = |z| s.eval(&TorusPoint::new().with(2, z)).unwrap();
        assert!((at(c(1.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
        assert!(at(c(0.0, 1.0)).norm() < 1e-15);
        let z = zeta_symbol(2.0, 3).unwrap();
        let v = z.eval(&TorusPoint::constant(c(1.0, 0.0))).unwrap();
        assert!((v.re - 49.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn eval_errors() {
        let s = Symbol::cosine_multiplicative(&arith::ratio(2, 1).unwrap());
        assert!(s.eval(&TorusPoint::new().with(3, c(1.0, 0.0))).is_err());
        assert!(s.eval(&TorusPoint::new().with(2, c(1.1, 0.0))).is_err());
        assert!(s.eval(&TorusPoint::new().with(2, c(1.0 + 1e-12, 0.0))).is_ok());
    }

    #[test]
    fn convolve_examples() {
        let s = Symbol::cosine_multiplicative(&arith::ratio(2, 1).unwrap());
        let unit = Symbol::unit(GroupKind::Multiplicative);
        assert_eq!(s.convolve(&unit).unwrap(), s);
        let sq = s.convolve(&s).unwrap();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&mfreq(4, 1)), c(1.0, 0.0));
        assert_eq!(sq.coeff(&mfreq(1, 1)), c(2.0, 0.0));
        assert_eq!(sq.coeff(&mfreq(1, 4)), c(1.0, 0.0));

        let lin = Symbol::multiplicative(&[(1, 1, c(1.0, 0.0)), (2, 1, c(0.5, 0.0))]).unwrap();
        let abs2 = lin.convolve(&lin.adjoint()).unwrap();
        assert_eq!(abs2.coeff(&mfreq(1, 1)), c(1.25, 0.0));
        assert_eq!(abs2.coeff(&mfreq(2, 1)), c(0.5, 0.0));
        assert_eq!(abs2.coeff(&mfreq(1, 2)), c(0.5, 0.0));

        let add = Symbol::cosine_additive(&[1]);
        assert!(add.convolve(&s).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let s = Symbol::cosine_multiplicative(&arith::ratio(3, 2).unwrap());
        assert_eq!(s.adjoint(), s);
        let one = Symbol::multiplicative(&[(2, 1, c(1.0, 0.0))]).unwrap();
        let adj = one.adjoint();
        assert_eq!(adj.len(), 1);
        assert_eq!(adj.coeff(&mfreq(1, 2)), c(1.0, 0.0));
        let w = Symbol::multiplicative(&[(1, 1, c(0.3, 0.1)), (6, 5, c(-1.0, 2.0))]).unwrap();
        let abs2 = w.convolve(&w.adjoint()).unwrap();
        assert!(abs2.adjoint().terms().all(|(f, v)| (abs2.coeff(f) - v).norm() < 1e-15));
        assert!(abs2.is_hermitian());
        assert!(!w.is_hermitian());
    }

    #[test]
    fn ell_average_examples() {
        let one = c(1.0, 0.0);
        let phi = Symbol::additive(1, &[(&[1], one), (&[-1], one), (&[2], one), (&[-2], one)]).unwrap();
        assert_eq!(phi.ell_average(2).unwrap(), Symbol::cosine_additive(&[2]));
        assert_eq!(phi.ell_average(1).unwrap(), phi);
        assert!(Symbol::cosine_additive(&[1]).ell_average(2).unwrap().is_empty());
        assert!(Symbol::cosine_additive(&[1, 1]).ell_average(2).is_err());
    }

    #[test]
    fn ell_average_matches_root_of_unity_average() {
        let phi = Symbol::additive(
            1,
            &[(&[1], c(0.3, 0.2)), (&[-3], c(1.0, 0.0)), (&[4], c(0.0, -0.5)), (&[0], c(2.0, 0.0))],
        )
        .unwrap();
        for ell in 1..=4u64 {
            let avg = phi.ell_average(ell).unwrap();
            for &theta in &[0.1, 1.3, 2.9] {
                let direct: Complex64 = (0..ell)
                    .map(|j| {
                        let t = theta + TAU * j as f64 / ell as f64;
                        phi.eval(&TorusPoint::from_angles(&[t])).unwrap()
                    })
                    .sum::<Complex64>()
                    / ell as f64;
                let got = avg.eval(&TorusPoint::from_angles(&[theta])).unwrap_or_default();
                assert!((direct - got).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sublattice_examples() {
        let one = c(1.0, 0.0);
        let phi = Symbol::additive(2, &[(&[1, 0], one), (&[2, 1], one), (&[0, 3], one), (&[-1, 1], one)]).unwrap();
        let p = phi.sublattice_project(&[2, 1]).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.terms().all(|(f, _)| matches!(f, Frequency::Additive(a) if a[0] % 2 == 0)));
        assert_eq!(phi.sublattice_project(&[1, 1]).unwrap(), phi);
        // already invariant under (Γ')^⊥ for Γ' = 2ℤ × 3ℤ
        let inv = Symbol::additive(2, &[(&[2, 3], one), (&[-2, -3], one), (&[4, 0], one)]).unwrap();
        assert_eq!(inv.sublattice_project(&[2, 3]).unwrap(), inv);
        assert!(phi.sublattice_project(&[2]).is_err());
        assert!(phi.sublattice_project(&[0, 1]).is_err());
    }

    #[test]
    fn tail_project_examples() {
        let s = Symbol::multiplicative(&[(2, 3, c(1.0, 0.0)), (3, 2, c(1.0, 0.0)), (1, 1, c(0.7, 0.0))]).unwrap();
        assert_eq!(s.tail_project(2).unwrap(), s);
        let five = Symbol::multiplicative(&[(5, 1, c(1.0, 0.0))]).unwrap();
        assert!(five.tail_project(2).unwrap().is_empty());
        let t = s.add(&five).unwrap().tail_project(0).unwrap();
        assert_eq!(t.constant_term(), c(0.7, 0.0));
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn zeta_examples() {
        let s = zeta_symbol(2.0, 1).unwrap();
        assert_eq!(s, Symbol::unit(GroupKind::Multiplicative));
        let s = zeta_symbol(2.0, 4).unwrap();
        assert_eq!(s.coeff(&mfreq(4, 1)), c(1.0 / 16.0, 0.0));
        assert!(!s.is_hermitian());
        assert!(zeta_symbol(1.0, 10).is_err());
        assert!(zeta_symbol(2.0, 0).is_err());
        // partial sums against ζ(2) = π²/6 with the integral tail bound Q^{1−γ}/(γ−1)
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        for q in [10u64, 100, 1000] {
            let s = zeta_symbol(2.0, q).unwrap();
            let partial: f64 = s.terms().map(|(_, v)| v.re).sum();
            let gap = zeta2 - partial;
            assert!(gap > 0.0 && gap <= 1.0 / q as f64);
        }
    }

    #[test]
    fn bohr_examples() {
        let s = Symbol::multiplicative(&[(1, 1, c(0.5, 0.0)), (3, 2, c(0.0, 1.0)), (5, 1, c(-2.0, 0.0))]).unwrap();
        let sum: Complex64 = s.terms().map(|(_, v)| *v).sum();
        assert!((s.bohr_eval(0.0).unwrap() - sum).norm() < 1e-15);
        let z = zeta_symbol(2.0, 50).unwrap();
        let t = 3.7;
        let direct: Complex64 = (1..=50u64)
            .map(|n| Complex64::new(n as f64, 0.0).powc(c(-2.0, t)))
            .sum();
        assert!((z.bohr_eval(t).unwrap() - direct).norm() < 1e-13);
        for &t in &[0.3, 11.0, -40.0] {
            assert!(s.bohr_eval(t).unwrap().norm() <= s.l1_norm() + 1e-15);
        }
    }

    #[test]
    fn dilation_examples() {
        let s = dilation_symbol(&[(1, c(1.0, 0.0))]).unwrap();
        assert_eq!(s, Symbol::unit(GroupKind::Multiplicative));
        let cc = c(0.4, -0.3);
        let s = dilation_symbol(&[(1, c(1.0, 0.0)), (2, cc)]).unwrap();
        assert!((s.constant_term() - c(1.0 + cc.norm_sqr(), 0.0)).norm() < 1e-15);
        assert!((s.coeff(&mfreq(2, 1)) - cc).norm() < 1e-15);
        assert!(s.is_hermitian());
    }

    #[test]
    fn dilation_coefficients_match_double_sum() {
        let a = [(1u64, c(1.0, 0.2)), (2, c(-0.3, 0.5)), (3, c(0.25, 0.0)), (6, c(0.1, -0.1)), (4, c(0.0, 0.3))];
        let s = dilation_symbol(&a).unwrap();
        for j in 1..=12u64 {
            for k in 1..=12u64 {
                // ĉ(k/j) = Σ_{jm = kn} a_m conj(a_n)
                let brute: Complex64 = a
                    .iter()
                    .flat_map(|&(m, am)| a.iter().map(move |&(n, an)| (m, am, n, an)))
                    .filter(|&(m, _, n, _)| j * m == k * n)
                    .map(|(_, am, _, an)| am * an.conj())
                    .sum();
                assert!((s.coeff(&mfreq(k, j)) - brute).norm() < 1e-15, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let text = "# a test symbol\nq=2/1 1 0\nq=1/2 1 0\nq=3 0.5 -0.25\n";
        let s = Symbol::parse(text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(Symbol::parse(&s.to_literal()).unwrap(), s);
        let a = Symbol::parse("alpha=(1,-2) 1 0\nalpha=(0,0) 3 0").unwrap();
        assert_eq!(a.kind(), GroupKind::Additive(2));
        assert_eq!(Symbol::parse(&a.to_literal()).unwrap(), a);
        assert!(matches!(Symbol::parse("q=2 1 0\nalpha=(1) 1 0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Symbol::parse("q=2 1"), Err(Error::Parse { line: 1, .. })));
        assert!(Symbol::parse("q=0/2 1 0").is_err());
        assert!(Symbol::parse("").is_err());
    }

    #[test]
    fn grid_values_match_eval() {
        let s = Symbol::multiplicative(&[(2, 3, c(1.0, 0.5)), (5, 1, c(0.2, 0.0)), (1, 4, c(0.0, 1.0))]).unwrap();
        let g = TorusGrid::exact_for(&s, 1);
        let vals = g.eval(&s).unwrap();
        assert_eq!(Some(vals.len()), g.len());
        // last point has index M_v − 1 in every coordinate
        let vars = s.variables();
        let mut z = TorusPoint::new();
        for (v, &m) in vars.iter().zip(g.sizes()) {
            z = z.with(*v, Complex64::cis(TAU * (m - 1) as f64 / m as f64));
        }
        assert!((vals.last().unwrap() - s.eval(&z).unwrap()).norm() < 1e-13);
    }

    // --- randomized invariants ---

    fn arb_mult_symbol() -> impl Strategy<Value = Symbol> {
        prop::collection::vec(((0usize..3, -2i32..=2, 0usize..3, -2i32..=2), -1.0f64..1.0, -1.0f64..1.0), 1..=8)
            .prop_map(|terms| {
                let mut s = Symbol::zero(GroupKind::Multiplicative);
                for ((i, e, j, f), re, im) in terms {
                    let q = FactoredRational::from_pairs([
                        (arith::nth_prime(i).unwrap(), e),
                        (arith::nth_prime(j).unwrap(), f),
                    ]);
                    s.add_term(Frequency::Multiplicative(q), c(re, im)).unwrap();
                }
                s
            })
    }

    fn arb_point() -> impl Strategy<Value = TorusPoint> {
        prop::collection::vec(0.0f64..TAU, 3).prop_map(|a| {
            TorusPoint::new()
                .with(2, Complex64::cis(a[0]))
                .with(3, Complex64::cis(a[1]))
                .with(5, Complex64::cis(a[2]))
        })
    }

    fn close(a: &Symbol, b: &Symbol, tol: f64) -> bool {
        a.terms().chain(b.terms()).all(|(f, _)| (a.coeff(f) - b.coeff(f)).norm() <= tol)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn convolution_is_commutative_and_associative(a in arb_mult_symbol(), b in arb_mult_symbol(), d in arb_mult_symbol()) {
            prop_assert!(close(&a.convolve(&b).unwrap(), &b.convolve(&a).unwrap(), 1e-12));
            let left = a.convolve(&b).unwrap().convolve(&d).unwrap();
            let right = a.convolve(&b.convolve(&d).unwrap()).unwrap();
            prop_assert!(close(&left, &right, 1e-12));
            prop_assert!(a.convolve(&b).unwrap().len() <= a.len() * b.len());
        }

        #[test]
        fn product_symbol_evaluates_pointwise(a in arb_mult_symbol(), b in arb_mult_symbol(), z in arb_point()) {
            let lhs = a.convolve(&b).unwrap().eval(&z).unwrap_or_default();
            let rhs = a.eval(&z).unwrap_or_default() * b.eval(&z).unwrap_or_default();
            prop_assert!((lhs - rhs).norm() <= 1e-12);
        }

        #[test]
        fn parseval_on_exact_grid(a in arb_mult_symbol()) {
            // |φ|² has degree 2·deg, so the exact grid for multiplier 2 applies
            let g = TorusGrid::exact_for(&a, 2);
            let vals = g.eval(&a).unwrap();
            let mean = vals.iter().map(|v| v.norm_sqr()).sum::<f64>() / vals.len() as f64;
            prop_assert!((mean - a.l2_norm_sq()).abs() <= 1e-10);
        }

        #[test]
        fn adjoint_is_involution(a in arb_mult_symbol(), z in arb_point()) {
            prop_assert_eq!(a.adjoint().adjoint(), a.clone());
            let lhs = a.adjoint().eval(&z).unwrap_or_default();
            prop_assert!((lhs - a.eval(&z).unwrap_or_default().conj()).norm() <= 1e-12);
        }

        #[test]
        fn hermitian_symbols_are_real(a in arb_mult_symbol(), z in arb_point()) {
            let h = a.convolve(&a.adjoint()).unwrap();
            prop_assert!(h.is_hermitian());
            let v = h.eval(&z).unwrap_or_default();
            prop_assert!(v.im.abs() <= 1e-12);
            prop_assert!(v.norm() <= h.l1_norm() + 1e-12);
        }

        #[test]
        fn projections_are_idempotent_and_linear(a in arb_mult_symbol(), b in arb_mult_symbol(), d in 0usize..4) {
            let p = |s: &Symbol| s.tail_project(d).unwrap();
            prop_assert_eq!(p(&p(&a)), p(&a));
            let sum = a.add(&b).unwrap();
            prop_assert!(close(&p(&sum), &p(&a).add(&p(&b)).unwrap(), 1e-15));
        }

        #[test]
        fn sublattice_projection_is_idempotent_and_linear(
            t1 in prop::collection::vec((-4i64..=4, -4i64..=4, -1.0f64..1.0), 1..8),
            t2 in prop::collection::vec((-4i64..=4, -4i64..=4, -1.0f64..1.0), 1..8),
            l1 in 1u64..4, l2 in 1u64..4,
        ) {
            let mk = |t: &[(i64, i64, f64)]| {
                let mut s = Symbol::zero(GroupKind::Additive(2));
                for &(x, y, v) in t { s.add_term(Frequency::Additive(vec![x, y]), c(v, 0.0)).unwrap(); }
                s
            };
            let (a, b) = (mk(&t1), mk(&t2));
            let p = |s: &Symbol| s.sublattice_project(&[l1, l2]).unwrap();
            prop_assert_eq!(p(&p(&a)), p(&a));
            prop_assert!(close(&p(&a.add(&b).unwrap()), &p(&a).add(&p(&b)).unwrap(), 1e-15));
        }
    }
}
