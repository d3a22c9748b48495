//! TOML experiment configuration.
//!
//! Relative paths inside a config file resolve against the file's directory.

use std::fmt;
use std::path::{Path, PathBuf};

use mtoeplitz::index_sets::{GrowthSchedule, IndexSet, SetFamily, Shift};
use mtoeplitz::poly::{Polynomial, SpectralFunction};
use mtoeplitz::symbol::{zeta_symbol, GroupKind, Symbol};
use mtoeplitz::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SzegoSweep,
    FolnerCheck,
    Sharpness,
    Determinant,
    ZetaMoments,
    Gram,
    B3Check,
    NaturalTruncationExplore,
    BohrAverage,
}

impl ExperimentKind {
    pub const ALL: [Self; 9] = [
        Self::SzegoSweep,
        Self::FolnerCheck,
        Self::Sharpness,
        Self::Determinant,
        Self::ZetaMoments,
        Self::Gram,
        Self::B3Check,
        Self::NaturalTruncationExplore,
        Self::BohrAverage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SzegoSweep => "szego-sweep",
            Self::FolnerCheck => "folner-check",
            Self::Sharpness => "sharpness",
            Self::Determinant => "determinant",
            Self::ZetaMoments => "zeta-moments",
            Self::Gram => "gram",
            Self::B3Check => "b3-check",
            Self::NaturalTruncationExplore => "natural-truncation-explore",
            Self::BohrAverage => "bohr-average",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// The statement an experiment exercises.
    pub fn describe(self) -> &'static str {
        match self {
            Self::SzegoSweep => {
                "First Szegő limit theorem: (1/#σ_N) Tr f(T_σ_N(φ)) → ∫ f∘φ dm along Følner sequences, \
                 and the averaged-symbol limits for even, sublattice, embedded and sparse sequences."
            }
            Self::FolnerCheck => {
                "Følner property of an index sequence: #(σ_N ∩ nσ_N)/#σ_N → 1 for every shift n. \
                 {1..N} fails it for multiplicative shifts (ratio 1/n)."
            }
            Self::Sharpness => {
                "Sharpness of the Følner condition: (1/#σ) Tr T_σ(zⁿ + z̄ⁿ)² = 2·#(σ ∩ nσ)/#σ exactly."
            }
            Self::Determinant => {
                "Determinant asymptotics: (det T_σ_N(φ))^{1/#σ_N} → exp ∫ log φ dm for positive φ \
                 along Følner sequences."
            }
            Self::ZetaMoments => {
                "Singular-value moments of truncated zeta symbols: (1/#σ) Σ s_k^{2m} → \
                 lim (1/2T) ∫ |ζ(γ + it)|^{2m} dt = Σ d_m(n)² n^{−2γ}."
            }
            Self::Gram => {
                "Gram matrices of dilated functions f(nx): normalized determinant → exp ∫ log |B̃f|² dm \
                 via the Bohr lift."
            }
            Self::B3Check => {
                "Compression estimate: ‖T_σ(φⁿ) − T_σ(φ)ⁿ‖₁/#σ ≤ n ‖L_φ‖^{n−1} Σ|φ̂(q)|(1 − ratio(σ, q))."
            }
            Self::NaturalTruncationExplore => {
                "Natural truncation {1..N} is not multiplicative Følner; values are reported against \
                 the Følner integral without a verdict."
            }
            Self::BohrAverage => {
                "Bohr correspondence: time averages of t ↦ φ(p^{it}) converge to torus integrals \
                 (Kronecker–Weyl equidistribution)."
            }
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    /// Inline `<frequency> <re> <im>` lines.
    pub literal: Option<String>,
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    NaturalSegment,
    AdditiveSegment,
    EvenSegment,
    SparsePowers,
    AdditiveBox,
    SublatticeBox,
    EmbeddedLatticeBox,
    HarmonicBox,
    Alternating,
    File,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetsConfig {
    pub family: FamilyName,
    /// Strictly increasing sizes `N`. Ignored for `file`, whose sets are indexed 0, 1, ….
    #[serde(default)]
    pub schedule: Vec<usize>,
    /// Spacing for `even-segment` (one entry) or `sublattice-box`.
    pub ell: Option<Vec<u64>>,
    /// Base for `sparse-powers`.
    pub base: Option<u64>,
    /// Dimension for `additive-box` and `embedded-lattice-box`.
    pub dim: Option<usize>,
    /// Fixed finite set `F` added to every member.
    pub extra: Option<Vec<i64>>,
    /// Explicit sets, one per line.
    pub file: Option<PathBuf>,
    /// Families used at even and odd steps of an alternating sequence.
    pub first: Option<FamilyName>,
    pub second: Option<FamilyName>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionConfig {
    Power { degree: usize },
    Polynomial { coeffs: Vec<f64> },
    Log,
    Exp,
    Sqrt,
    Abs,
    Indicator { lo: f64, hi: f64 },
    SmoothIndicator { lo: f64, hi: f64, width: f64 },
}

impl FunctionConfig {
    pub fn to_function(&self) -> SpectralFunction {
        match self {
            Self::Power { degree } => SpectralFunction::power(*degree),
            Self::Polynomial { coeffs } => SpectralFunction::Polynomial(Polynomial::new(coeffs.clone())),
            Self::Log => SpectralFunction::Log,
            Self::Exp => SpectralFunction::Exp,
            Self::Sqrt => SpectralFunction::Sqrt,
            Self::Abs => SpectralFunction::Abs,
            Self::Indicator { lo, hi } => SpectralFunction::Indicator { lo: *lo, hi: *hi },
            Self::SmoothIndicator { lo, hi, width } => SpectralFunction::SmoothIndicator {
                lo: *lo,
                hi: *hi,
                width: *width,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    #[serde(default = "default_tolerance")]
    pub abs: f64,
}

fn default_tolerance() -> f64 {
    1e-2
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: default_tolerance() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    #[default]
    Linear,
    AbsSquare,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Shifts for `folner-check`: `n`, `a/b`, or `(i1,…,id)` for additive sets.
    pub shifts: Option<Vec<String>>,
    /// Shift `n` for `sharpness`.
    pub shift: Option<String>,
    /// Power `n` for `b3-check`.
    pub power: Option<u32>,
    /// `γ`, moment `m`, symbol cutoff and oracle length for `zeta-moments`.
    pub gamma: Option<f64>,
    pub m: Option<u32>,
    pub cutoff: Option<u64>,
    pub n_max: Option<usize>,
    /// Dilation coefficients `[n, re, im]` for `gram`.
    pub dilation: Option<Vec<(u64, f64, f64)>>,
    /// Time step for `bohr-average`; the schedule gives the horizons.
    pub step: Option<f64>,
    pub observable: Option<Observable>,
    /// Grid points per variable for continuous reference integrals.
    pub quadrature_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
    /// Record real wall times; off by default so outputs are byte-identical.
    #[serde(default)]
    pub timing: bool,
    pub dump_matrix: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    pub max_size: Option<usize>,
    pub symbol: Option<SymbolConfig>,
    pub sets: Option<SetsConfig>,
    pub function: Option<FunctionConfig>,
    #[serde(default)]
    pub tolerance: Tolerance,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Read, resolve relative paths, and validate.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut() {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        if let Some(s) = self.symbol.as_mut() {
            fix(&mut s.file);
        }
        if let Some(s) = self.sets.as_mut() {
            fix(&mut s.file);
        }
    }

    pub fn validate(&self) -> Result<()> {
        use ExperimentKind as K;
        let kind = self.experiment;
        if !(self.tolerance.abs.is_finite() && self.tolerance.abs >= 0.0) {
            return Err(CliError::field("tolerance.abs", "must be finite and nonnegative"));
        }
        if self.max_size == Some(0) {
            return Err(CliError::field("max_size", "must be positive"));
        }
        let needs_symbol = matches!(
            kind,
            K::SzegoSweep | K::Determinant | K::B3Check | K::NaturalTruncationExplore | K::BohrAverage
        );
        if needs_symbol {
            self.symbol()?;
        }
        if kind != K::BohrAverage {
            let sets = self.sets.as_ref().ok_or_else(|| CliError::field("sets", "missing section"))?;
            self.validate_sets(sets)?;
        } else if let Some(sets) = &self.sets {
            check_schedule(&sets.schedule)?;
        } else {
            return Err(CliError::field("sets.schedule", "bohr-average needs horizons in sets.schedule"));
        }
        if matches!(kind, K::SzegoSweep | K::NaturalTruncationExplore) && self.function.is_none() {
            return Err(CliError::field("function", "missing section"));
        }
        let p = &self.params;
        match kind {
            K::FolnerCheck => {
                let shifts = p.shifts.as_ref().filter(|s| !s.is_empty());
                let shifts = shifts.ok_or_else(|| CliError::field("params.shifts", "needs at least one shift"))?;
                for s in shifts {
                    self.parse_shift(s, "params.shifts")?;
                }
            }
            K::Sharpness => {
                let s = p.shift.as_deref().ok_or_else(|| CliError::field("params.shift", "missing"))?;
                if !matches!(self.parse_shift(s, "params.shift")?, Shift::Natural(_) | Shift::Additive(_)) {
                    return Err(CliError::field("params.shift", "sharpness needs an integer shift"));
                }
            }
            K::B3Check => {
                if p.power.unwrap_or(2) == 0 {
                    return Err(CliError::field("params.power", "must be at least 1"));
                }
            }
            K::ZetaMoments => {
                if !(p.gamma.unwrap_or(2.0) > 0.5) {
                    return Err(CliError::field("params.gamma", "must exceed 1/2"));
                }
                if p.m.unwrap_or(1) == 0 {
                    return Err(CliError::field("params.m", "must be at least 1"));
                }
                if self.family_kind() != Some(GroupKind::Multiplicative) {
                    return Err(CliError::field("sets.family", "zeta moments need a multiplicative family"));
                }
            }
            K::Gram => {
                let a = p.dilation.as_ref().filter(|a| !a.is_empty());
                let a = a.ok_or_else(|| CliError::field("params.dilation", "needs at least one [n, re, im]"))?;
                if a.iter().any(|&(n, _, _)| n == 0) {
                    return Err(CliError::field("params.dilation", "indices must be positive"));
                }
                if self.family_kind() != Some(GroupKind::Multiplicative) {
                    return Err(CliError::field("sets.family", "Gram matrices need a multiplicative family"));
                }
            }
            K::BohrAverage => {
                if !(p.step.unwrap_or(0.01) > 0.0) {
                    return Err(CliError::field("params.step", "must be positive"));
                }
                if self.symbol()?.kind() != GroupKind::Multiplicative {
                    return Err(CliError::field("symbol", "Bohr averages need a multiplicative symbol"));
                }
            }
            _ => {}
        }
        if needs_symbol && kind != K::BohrAverage {
            let sk = self.symbol()?.kind();
            if Some(sk) != self.family_kind() {
                return Err(CliError::field("symbol", "symbol kind does not match the set family"));
            }
        }
        Ok(())
    }

    fn validate_sets(&self, sets: &SetsConfig) -> Result<()> {
        if sets.family == FamilyName::File {
            let path = sets.file.as_ref().ok_or_else(|| CliError::field("sets.file", "missing for family `file`"))?;
            if !path.exists() {
                return Err(CliError::field("sets.file", format!("{} does not exist", path.display())));
            }
        } else {
            check_schedule(&sets.schedule)?;
        }
        self.family()?;
        Ok(())
    }

    pub fn symbol(&self) -> Result<Symbol> {
        let cfg = self.symbol.as_ref().ok_or_else(|| CliError::field("symbol", "missing section"))?;
        let text = match (&cfg.literal, &cfg.file) {
            (Some(l), None) => l.clone(),
            (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?,
            _ => return Err(CliError::field("symbol", "give exactly one of `literal` or `file`")),
        };
        Symbol::parse(&text).map_err(|e| CliError::field("symbol", e.to_string()))
    }

    /// `n ↦ n^{−γ}` for `n ≤ cutoff`.
    pub fn zeta(&self) -> Result<Symbol> {
        let p = &self.params;
        Ok(zeta_symbol(p.gamma.unwrap_or(2.0), p.cutoff.unwrap_or(10_000))?)
    }

    pub fn dilation(&self) -> Vec<(u64, Complex64)> {
        self.params
            .dilation
            .iter()
            .flatten()
            .map(|&(n, re, im)| (n, Complex64::new(re, im)))
            .collect()
    }

    pub fn function(&self) -> Result<SpectralFunction> {
        Ok(self
            .function
            .as_ref()
            .ok_or_else(|| CliError::field("function", "missing section"))?
            .to_function())
    }

    fn family_kind(&self) -> Option<GroupKind> {
        self.family().ok().map(|f| f.kind())
    }

    pub fn family(&self) -> Result<SetFamily> {
        let sets = self.sets.as_ref().ok_or_else(|| CliError::field("sets", "missing section"))?;
        let base = named_family(sets, sets.family, "sets.family")?;
        match &sets.extra {
            None => Ok(base),
            Some(extra) => {
                let extra = match base.kind() {
                    GroupKind::Multiplicative => {
                        let v: Option<Vec<u64>> = extra.iter().map(|&x| u64::try_from(x).ok().filter(|&x| x > 0)).collect();
                        IndexSet::from_naturals(v.ok_or_else(|| CliError::field("sets.extra", "naturals must be positive"))?)
                    }
                    GroupKind::Additive(1) => IndexSet::from_integers(extra.iter().copied()),
                    GroupKind::Additive(_) => {
                        return Err(CliError::field("sets.extra", "only one-dimensional additive sets take extra points"))
                    }
                }
                .map_err(|e| CliError::field("sets.extra", e.to_string()))?;
                Ok(SetFamily::Augmented {
                    base: Box::new(base),
                    extra,
                })
            }
        }
    }

    /// Family members in schedule order, paired with their schedule value.
    pub fn schedule(&self) -> Result<Vec<usize>> {
        let sets = self.sets.as_ref().ok_or_else(|| CliError::field("sets", "missing section"))?;
        Ok(match (&self.family()?, sets.family) {
            (SetFamily::Explicit(v), _) => (0..v.len()).collect(),
            (_, FamilyName::Alternating) => (0..sets.schedule.len()).collect(),
            _ => sets.schedule.clone(),
        })
    }

    pub fn is_alternating(&self) -> bool {
        self.sets.as_ref().is_some_and(|s| s.family == FamilyName::Alternating)
    }

    pub fn parse_shift(&self, text: &str, field: &str) -> Result<Shift> {
        let kind = self.family_kind().unwrap_or(GroupKind::Multiplicative);
        parse_shift(text, kind).ok_or_else(|| CliError::field(field, format!("cannot read shift `{text}` for this family")))
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }
}

fn check_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() {
        return Err(CliError::field("sets.schedule", "must not be empty"));
    }
    if let Some(w) = schedule.windows(2).find(|w| w[1] <= w[0]) {
        return Err(CliError::field(
            "sets.schedule",
            format!("must be strictly increasing ({} then {})", w[0], w[1]),
        ));
    }
    Ok(())
}

fn named_family(sets: &SetsConfig, name: FamilyName, field: &str) -> Result<SetFamily> {
    let need = |what: &str| CliError::field(format!("sets.{what}"), format!("required by family {name:?}"));
    Ok(match name {
        FamilyName::NaturalSegment => SetFamily::NaturalSegment,
        FamilyName::AdditiveSegment => SetFamily::AdditiveSegment,
        FamilyName::EvenSegment => {
            let ell = sets.ell.as_ref().ok_or_else(|| need("ell"))?;
            match ell.as_slice() {
                [l] if *l >= 1 => SetFamily::EvenSegment { ell: *l },
                _ => return Err(CliError::field("sets.ell", "even-segment takes one spacing ≥ 1")),
            }
        }
        FamilyName::SparsePowers => {
            let base = sets.base.ok_or_else(|| need("base"))?;
            if base < 2 {
                return Err(CliError::field("sets.base", "must be at least 2"));
            }
            SetFamily::SparsePowers { base }
        }
        FamilyName::AdditiveBox => SetFamily::AdditiveBox {
            dim: sets.dim.filter(|&d| d > 0).ok_or_else(|| need("dim"))?,
        },
        FamilyName::SublatticeBox => {
            let ell = sets.ell.clone().filter(|e| !e.is_empty()).ok_or_else(|| need("ell"))?;
            if ell.contains(&0) {
                return Err(CliError::field("sets.ell", "spacings must be positive"));
            }
            SetFamily::SublatticeBox { ell }
        }
        FamilyName::EmbeddedLatticeBox => SetFamily::EmbeddedLatticeBox {
            dim: sets.dim.filter(|&d| d > 0).ok_or_else(|| need("dim"))?,
        },
        FamilyName::HarmonicBox => SetFamily::HarmonicBox,
        FamilyName::Alternating => {
            if field != "sets.family" {
                return Err(CliError::field(field, "alternating families do not nest"));
            }
            let first = sets.first.ok_or_else(|| need("first"))?;
            let second = sets.second.ok_or_else(|| need("second"))?;
            let a = named_family(sets, first, "sets.first")?;
            let b = named_family(sets, second, "sets.second")?;
            if a.kind() != b.kind() {
                return Err(CliError::field("sets.second", "alternating families must share a kind"));
            }
            SetFamily::Alternating {
                first: Box::new(a),
                second: Box::new(b),
                schedule: GrowthSchedule::Explicit(sets.schedule.clone()),
            }
        }
        FamilyName::File => {
            let path = sets.file.as_ref().ok_or_else(|| need("file"))?;
            SetFamily::Explicit(read_set_file(path)?)
        }
    })
}

/// Explicit multiplicative sets, one per line.
pub fn read_set_file(path: &Path) -> Result<Vec<IndexSet>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let sets = IndexSet::parse_sets(&text, GroupKind::Multiplicative)
        .map_err(|e| CliError::field("sets.file", format!("{}: {e}", path.display())))?;
    if sets.is_empty() {
        return Err(CliError::field("sets.file", format!("{} holds no sets", path.display())));
    }
    Ok(sets)
}

fn parse_shift(text: &str, kind: GroupKind) -> Option<Shift> {
    let t = text.trim();
    match kind {
        GroupKind::Multiplicative => match t.split_once('/') {
            Some((a, b)) => Shift::rational(a.trim().parse().ok()?, b.trim().parse().ok()?).ok(),
            None => t.parse().ok().filter(|&n| n > 0).map(Shift::Natural),
        },
        GroupKind::Additive(d) => {
            let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
            let v: Vec<i64> = inner.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
            (v.len() == d).then_some(Shift::Additive(v))
        }
    }
}
