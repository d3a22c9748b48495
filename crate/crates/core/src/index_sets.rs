//! Finite index sets `σ ⊂ ℕ` or `σ ⊂ ℤ₊^d` and their Følner diagnostics.
//!
//! Sets are sorted, duplicate-free arrays; membership is a binary search and
//! every overlap count is an exact integer.

use std::collections::BTreeSet;

use crate::arith::{self, FactoredRational};
use crate::error::{domain, Error, Result};
use crate::symbol::{Frequency, GroupKind};

/// Largest set a box generator will materialize.
pub const MAX_GENERATED_SET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Multiplicative(Vec<u64>),
    Additive { dim: usize, points: Vec<Vec<i64>> },
    /// `{1, b, …, b^{len−1}} ⊂ ℤ₊`, kept symbolic once `b^{len−1}` leaves `i64`.
    Geometric { base: u64, len: usize },
    /// `{p^α : 0 ≤ α_j ≤ A_j}` in mixed-radix order, kept symbolic once an element leaves `i64`.
    ExponentBox { bounds: Vec<u32> },
}

/// A nonempty finite index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    repr: Repr,
}

/// A shift acting on an index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shift {
    /// `k ↦ nk`.
    Natural(u64),
    /// `k ↦ (a/b)k`, stored in lowest terms.
    Rational { num: u64, den: u64 },
    /// `k ↦ k + α`.
    Additive(Vec<i64>),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Shift {
    pub fn rational(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return domain("rational shift needs positive numerator and denominator");
        }
        let g = gcd(a, b);
        Ok(Self::Rational { num: a / g, den: b / g })
    }

    pub fn additive_scalar(n: i64) -> Self {
        Self::Additive(vec![n])
    }

    /// The shift by a symbol frequency; `None` when a multiplicative
    /// frequency overflows `u64` (it then maps nothing into any set).
    pub fn from_frequency(f: &Frequency) -> Option<Self> {
        match f {
            Frequency::Additive(a) => Some(Self::Additive(a.clone())),
            Frequency::Multiplicative(q) => Some(Self::Rational {
                num: q.numerator()?,
                den: q.denominator()?,
            }),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Self::Natural(n) => *n == 1,
            Self::Rational { num, den } => num == den,
            Self::Additive(a) => a.iter().all(|&x| x == 0),
        }
    }
}

impl IndexSet {
    /// Multiplicative set from naturals; sorted and deduplicated.
    pub fn from_naturals(elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = elems.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return domain("index set must be nonempty");
        }
        if v[0] == 0 || *v.last().unwrap() > arith::MAX_NATURAL {
            return domain("multiplicative index sets hold naturals in [1, 2^63 - 1]");
        }
        Ok(Self {
            repr: Repr::Multiplicative(v),
        })
    }

    /// Additive set in `ℤ₊^dim`; sorted and deduplicated.
    pub fn from_points(dim: usize, pts: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let mut v: Vec<Vec<i64>> = pts.into_iter().collect();
        if v.iter().any(|p| p.len() != dim || p.iter().any(|&x| x < 0)) {
            return domain(format!("additive index sets hold points of Z_+^{dim}"));
        }
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return domain("index set must be nonempty");
        }
        Ok(Self {
            repr: Repr::Additive { dim, points: v },
        })
    }

    /// One-dimensional additive set.
    pub fn from_integers(elems: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::from_points(1, elems.into_iter().map(|x| vec![x]))
    }

    /// `{1, …, N}`.
    pub fn natural_segment(n: usize) -> Self {
        Self::from_naturals(1..=n.max(1) as u64).unwrap()
    }

    /// `{0, …, N − 1}`.
    pub fn additive_segment(n: usize) -> Self {
        Self::from_integers(0..n.max(1) as i64).unwrap()
    }

    /// `{0, ℓ, 2ℓ, …, Nℓ}`.
    pub fn even_segment(n: usize, ell: u64) -> Self {
        Self::from_integers((0..=n as i64).map(|k| k * ell as i64)).unwrap()
    }

    /// `{1, b, b², …, b^{N−1}}` as an additive set.
    ///
    /// Elements beyond `i64` are kept symbolic: the set then supports
    /// shifts, counts and truncation but not [`IndexSet::points`].
    pub fn sparse_powers(n: usize, base: u64) -> Result<Self> {
        if base < 2 {
            return domain("sparse powers need base >= 2");
        }
        let n = n.max(1);
        match (base as i64).checked_pow(n as u32 - 1).filter(|_| n <= u32::MAX as usize) {
            Some(_) => Self::from_integers((0..n as u32).map(|k| (base as i64).pow(k))),
            None => Ok(Self {
                repr: Repr::Geometric { base, len: n },
            }),
        }
    }

    /// `{p^α : 0 ≤ α_j ≤ A_j}` over the first `bounds.len()` primes.
    pub fn exponent_box(bounds: &[u32]) -> Result<Self> {
        let size = bounds
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(a as usize + 1))
            .filter(|&s| s <= MAX_GENERATED_SET)
            .ok_or(Error::Resource {
                what: "exponent box",
                size: usize::MAX,
                cap: MAX_GENERATED_SET,
            })?;
        if bounds.len() > arith::PRIME_TABLE_LEN {
            return domain("exponent box uses too many primes");
        }
        let fits = bounds.iter().enumerate().try_fold(1u64, |acc, (j, &a)| {
            arith::nth_prime(j)?.checked_pow(a).and_then(|x| acc.checked_mul(x)).filter(|&x| x <= arith::MAX_NATURAL)
        });
        if fits.is_none() {
            return Ok(Self {
                repr: Repr::ExponentBox { bounds: bounds.to_vec() },
            });
        }
        let mut elems = vec![1u64];
        elems.reserve(size);
        for (j, &a) in bounds.iter().enumerate() {
            let p = arith::nth_prime(j).unwrap();
            let base = elems.clone();
            let mut pk = 1u64;
            for _ in 0..a {
                pk = pk.checked_mul(p).ok_or_else(|| Error::Domain("box element overflows u64".into()))?;
                for &b in &base {
                    let x = b
                        .checked_mul(pk)
                        .filter(|&x| x <= arith::MAX_NATURAL)
                        .ok_or_else(|| Error::Domain("box element exceeds 2^63 - 1".into()))?;
                    elems.push(x);
                }
            }
        }
        Self::from_naturals(elems)
    }

    /// `{0, …, A_1} × … × {0, …, A_d} ⊂ ℤ₊^d`.
    pub fn additive_box(bounds: &[u32]) -> Result<Self> {
        Self::sublattice_box(&vec![1; bounds.len()], bounds)
    }

    /// `{(ℓ₁a₁, …, ℓ_d a_d) : 0 ≤ a_i ≤ A_i}`, a box inside the sublattice `ℓ₁ℤ × … × ℓ_dℤ`.
    pub fn sublattice_box(ell: &[u64], bounds: &[u32]) -> Result<Self> {
        if ell.len() != bounds.len() || ell.contains(&0) {
            return domain("sublattice box needs one positive period per bound");
        }
        let size = bounds
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(a as usize + 1))
            .filter(|&s| s <= MAX_GENERATED_SET)
            .ok_or(Error::Resource {
                what: "lattice box",
                size: usize::MAX,
                cap: MAX_GENERATED_SET,
            })?;
        let mut pts: Vec<Vec<i64>> = vec![vec![]];
        pts.reserve(size);
        for (&a, &l) in bounds.iter().zip(ell) {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    (0..=a as i64).map(move |x| {
                        let mut q = p.clone();
                        q.push(x * l as i64);
                        q
                    })
                })
                .collect();
        }
        Self::from_points(bounds.len(), pts)
    }

    /// `ι(Σ) = {p^α : α ∈ Σ}` for `Σ ⊂ ℤ₊^d`, using the first `d` primes.
    pub fn embed_lattice(lattice: &IndexSet) -> Result<Self> {
        let Repr::Additive { dim, points } = &lattice.repr else {
            return domain("embed_lattice needs an additive set");
        };
        if *dim > arith::PRIME_TABLE_LEN {
            return domain("lattice dimension exceeds the prime table");
        }
        let elems: Result<Vec<u64>> = points
            .iter()
            .map(|p| {
                p.iter().enumerate().try_fold(1u64, |acc, (j, &e)| {
                    arith::nth_prime(j)
                        .unwrap()
                        .checked_pow(e as u32)
                        .and_then(|pe| acc.checked_mul(pe))
                        .filter(|&x| x <= arith::MAX_NATURAL)
                        .ok_or_else(|| Error::Domain("embedded lattice point overflows".into()))
                })
            })
            .collect();
        Self::from_naturals(elems?)
    }

    /// `ι({0..A_1} × … × {0..A_d})`.
    pub fn embedded_lattice_box(bounds: &[u32]) -> Result<Self> {
        Self::exponent_box(bounds)
    }

    /// `σ ∪ F`.
    pub fn union_with(&self, extra: &IndexSet) -> Result<Self> {
        match (&self.repr, &extra.repr) {
            (Repr::Multiplicative(a), Repr::Multiplicative(b)) => {
                Self::from_naturals(a.iter().chain(b).copied())
            }
            (Repr::Additive { dim, points: a }, Repr::Additive { dim: e, points: b }) if dim == e => {
                Self::from_points(*dim, a.iter().chain(b).cloned())
            }
            (Repr::Geometric { .. } | Repr::ExponentBox { .. }, _)
            | (_, Repr::Geometric { .. } | Repr::ExponentBox { .. }) => domain("union with a symbolic set"),
            _ => domain("union of index sets of different kinds"),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Multiplicative(v) => v.len(),
            Repr::Additive { points, .. } => points.len(),
            Repr::Geometric { len, .. } => *len,
            Repr::ExponentBox { bounds } => bounds.iter().map(|&a| a as usize + 1).product(),
        }
    }

    /// Always false; index sets are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Multiplicative` or `Additive(d)`, matching the symbol kind that truncates on it.
    pub fn kind(&self) -> GroupKind {
        match &self.repr {
            Repr::Multiplicative(_) | Repr::ExponentBox { .. } => GroupKind::Multiplicative,
            Repr::Additive { dim, .. } => GroupKind::Additive(*dim),
            Repr::Geometric { .. } => GroupKind::Additive(1),
        }
    }

    pub fn naturals(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Multiplicative(v) => Some(v),
            _ => None,
        }
    }

    pub fn points(&self) -> Option<&[Vec<i64>]> {
        match &self.repr {
            Repr::Additive { points, .. } => Some(points),
            _ => None,
        }
    }

    /// Human-readable label of the element at `idx`.
    pub fn label(&self, idx: usize) -> String {
        match &self.repr {
            Repr::Multiplicative(v) => v[idx].to_string(),
            Repr::Additive { points, .. } if points[idx].len() == 1 => points[idx][0].to_string(),
            Repr::Additive { points, .. } => format!("{:?}", points[idx]),
            Repr::Geometric { base, .. } => format!("{base}^{idx}"),
            Repr::ExponentBox { bounds } => box_exponents(bounds, idx)
                .iter()
                .enumerate()
                .map(|(j, a)| format!("{}^{a}", arith::nth_prime(j).unwrap()))
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    /// Position of `shift(element idx)`, if it lies in the set.
    ///
    /// A shift of the wrong kind maps nothing into the set.
    pub fn shift_position(&self, idx: usize, shift: &Shift) -> Option<usize> {
        match (&self.repr, shift) {
            (Repr::Multiplicative(v), Shift::Natural(n)) => {
                v[idx].checked_mul(*n).and_then(|x| self.position_natural(x))
            }
            (Repr::Multiplicative(v), Shift::Rational { num, den }) => {
                let k = v[idx];
                if k % den != 0 {
                    return None;
                }
                (k / den).checked_mul(*num).and_then(|x| self.position_natural(x))
            }
            (Repr::Additive { dim, points }, Shift::Additive(s)) if s.len() == *dim => {
                let p = &points[idx];
                let q: Option<Vec<i64>> = p.iter().zip(s).map(|(a, b)| a.checked_add(*b)).collect();
                self.position_point(&q?)
            }
            (Repr::Geometric { base, len }, Shift::Additive(s)) if s.len() == 1 => {
                geometric_shift(*base, *len, idx, s[0])
            }
            (Repr::ExponentBox { bounds }, Shift::Natural(n)) => box_shift(bounds, idx, *n, 1),
            (Repr::ExponentBox { bounds }, Shift::Rational { num, den }) => box_shift(bounds, idx, *num, *den),
            _ => None,
        }
    }

    /// Position of `n` in a multiplicative set.
    pub fn position_natural(&self, n: u64) -> Option<usize> {
        self.naturals()?.binary_search(&n).ok()
    }

    /// Position of `p` in an additive set.
    pub fn position_point(&self, p: &[i64]) -> Option<usize> {
        self.points()?.binary_search_by(|x| x.as_slice().cmp(p)).ok()
    }

    /// Labels as group elements: `α(n)` for naturals, the point itself otherwise.
    pub fn frequencies(&self) -> Result<Vec<Frequency>> {
        Ok(match &self.repr {
            Repr::Multiplicative(v) => v
                .iter()
                .map(|&n| Frequency::Multiplicative(arith::factor(n).unwrap().to_rational()))
                .collect(),
            Repr::Additive { points, .. } => {
                points.iter().cloned().map(Frequency::Additive).collect()
            }
            Repr::Geometric { .. } => return domain("symbolic sparse set has no i64 labels"),
            Repr::ExponentBox { bounds } => (0..self.len())
                .map(|i| {
                    let e = box_exponents(bounds, i);
                    Frequency::Multiplicative(FactoredRational::from_pairs(
                        e.iter().enumerate().map(|(j, &a)| (arith::nth_prime(j).unwrap(), a as i32)),
                    ))
                })
                .collect(),
        })
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Multiplicative(a), Repr::Multiplicative(_)) => {
                a.iter().all(|&n| other.position_natural(n).is_some())
            }
            (Repr::Additive { points, .. }, Repr::Additive { .. }) => {
                points.iter().all(|p| other.position_point(p).is_some())
            }
            (Repr::Geometric { base, len }, Repr::Geometric { base: b, len: l }) => {
                base == b && len <= l
            }
            (Repr::ExponentBox { bounds }, Repr::ExponentBox { bounds: b }) => {
                bounds.len() <= b.len() && bounds.iter().zip(b).all(|(x, y)| x <= y)
            }
            _ => false,
        }
    }

    /// Parse whitespace-separated naturals, one set per non-empty line.
    pub fn parse_sets(text: &str, kind: GroupKind) -> Result<Vec<IndexSet>> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums: std::result::Result<Vec<u64>, _> =
                line.split_whitespace().map(str::parse::<u64>).collect();
            let nums = nums.map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let set = match kind {
                GroupKind::Multiplicative => Self::from_naturals(nums),
                GroupKind::Additive(1) => Self::from_integers(nums.into_iter().map(|x| x as i64)),
                GroupKind::Additive(d) => {
                    return domain(format!("set files describe 1-d sets, not Z_+^{d}"))
                }
            }
            .map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            out.push(set);
        }
        Ok(out)
    }
}

/// `#{k ∈ σ : shift(k) ∈ σ}`, exactly.
///
/// For a rational shift `a/b` in lowest terms only multiples of `b` can map
/// into `σ ⊂ ℕ`.
pub fn folner_count(set: &IndexSet, shift: &Shift) -> Result<usize> {
    let shift = match shift {
        Shift::Natural(0) => return domain("multiplicative shift by 0"),
        Shift::Rational { num, den } => Shift::rational(*num, *den)?,
        s => s.clone(),
    };
    match (set.kind(), &shift) {
        (GroupKind::Multiplicative, Shift::Natural(_) | Shift::Rational { .. }) => {}
        (GroupKind::Additive(d), Shift::Additive(s)) if s.len() == d => {}
        (GroupKind::Additive(d), Shift::Additive(s)) => {
            return domain(format!("shift has dimension {}, set has {d}", s.len()))
        }
        _ => return domain("shift kind does not match index set kind"),
    }
    Ok((0..set.len()).filter(|&i| set.shift_position(i, &shift).is_some()).count())
}

/// Exponent vector of the element at mixed-radix position `idx`.
fn box_exponents(bounds: &[u32], mut idx: usize) -> Vec<u32> {
    bounds
        .iter()
        .map(|&a| {
            let r = a as usize + 1;
            let e = idx % r;
            idx /= r;
            e as u32
        })
        .collect()
}

/// Position of `(num/den)·p^α` in a symbolic exponent box.
fn box_shift(bounds: &[u32], idx: usize, num: u64, den: u64) -> Option<usize> {
    let q = FactoredRational::from_ratio(num, den).ok()?;
    let mut e: Vec<i64> = box_exponents(bounds, idx).into_iter().map(i64::from).collect();
    for &(p, k) in q.factors() {
        let j = arith::prime_index(p).filter(|&j| j < bounds.len())?;
        e[j] += k as i64;
        if e[j] < 0 || e[j] > bounds[j] as i64 {
            return None;
        }
    }
    let mut pos = 0usize;
    for (j, &a) in bounds.iter().enumerate().rev() {
        pos = pos * (a as usize + 1) + e[j] as usize;
    }
    Some(pos)
}

/// Solve `b^j = b^i + a` for `j < len`, exactly.
fn geometric_shift(base: u64, len: usize, i: usize, a: i64) -> Option<usize> {
    if a == 0 {
        return Some(i);
    }
    // past 2^100, b^i + a lies strictly between consecutive powers of b
    let bi = (base as i128).checked_pow(u32::try_from(i).ok()?).filter(|&x| x < 1i128 << 100)?;
    let mut t = bi + a as i128;
    if t <= 0 {
        return None;
    }
    let mut j = 0usize;
    while t % base as i128 == 0 {
        t /= base as i128;
        j += 1;
    }
    (t == 1 && j < len).then_some(j)
}

/// `#{k ∈ σ : shift(k) ∈ σ} / #σ`.
pub fn folner_ratio(set: &IndexSet, shift: &Shift) -> Result<f64> {
    Ok(folner_count(set, shift)? as f64 / set.len() as f64)
}

/// One row of a Følner-defect table.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectRow {
    /// Position of the set in the sequence.
    pub n: usize,
    pub size: usize,
    pub shift: Shift,
    pub count: usize,
    /// `1 − count/#σ`.
    pub defect: f64,
}

/// Tabulate `1 − folner_ratio` for every `(σ_N, shift)` pair.
pub fn folner_defect(sets: &[(usize, IndexSet)], shifts: &[Shift]) -> Result<Vec<DefectRow>> {
    let mut rows = Vec::with_capacity(sets.len() * shifts.len());
    for (n, set) in sets {
        for s in shifts {
            let count = folner_count(set, s)?;
            rows.push(DefectRow {
                n: *n,
                size: set.len(),
                shift: s.clone(),
                count,
                defect: 1.0 - count as f64 / set.len() as f64,
            });
        }
    }
    Ok(rows)
}

/// Empirical Følner verdict: for every shift the defect is non-increasing
/// along the sequence and below `eps` at the largest set.
pub fn is_empirically_folner(rows: &[DefectRow], eps: f64) -> bool {
    let shifts: Vec<&Shift> = rows.iter().fold(Vec::new(), |mut acc, r| {
        if !acc.contains(&&r.shift) {
            acc.push(&r.shift);
        }
        acc
    });
    shifts.iter().all(|s| {
        let d: Vec<f64> = rows.iter().filter(|r| &&r.shift == s).map(|r| r.defect).collect();
        d.windows(2).all(|w| w[1] <= w[0]) && d.last().is_some_and(|&x| x < eps)
    })
}

/// Size schedule for alternating sequences.
#[derive(Clone, Debug, PartialEq)]
pub enum GrowthSchedule {
    /// `N(k) = start · 2^k`.
    Doubling { start: usize },
    Explicit(Vec<usize>),
}

impl GrowthSchedule {
    pub fn size(&self, k: usize) -> Result<usize> {
        match self {
            Self::Doubling { start } => start
                .checked_mul(1usize.checked_shl(k as u32).unwrap_or(0))
                .filter(|&x| x > 0)
                .ok_or_else(|| Error::Domain(format!("doubling schedule overflows at step {k}"))),
            Self::Explicit(v) => v
                .get(k)
                .copied()
                .ok_or_else(|| Error::Domain(format!("schedule has no step {k}"))),
        }
    }
}

/// A parametrized family `N ↦ σ_N`.
#[derive(Clone, Debug, PartialEq)]
pub enum SetFamily {
    /// `{1, …, N}` in `ℕ`: not multiplicative Følner.
    NaturalSegment,
    /// `{0, …, N − 1}` in `ℤ₊`: additive Følner.
    AdditiveSegment,
    /// `{0, ℓ, …, Nℓ}`: not Følner for `ℓ ≥ 2`.
    EvenSegment { ell: u64 },
    /// `{1, b, …, b^{N−1}}`: sparse, not Følner.
    SparsePowers { base: u64 },
    /// `{0..N}^d ⊂ ℤ₊^d`: Følner in `ℤ₊^d`.
    AdditiveBox { dim: usize },
    /// `{(ℓ₁a₁, …): 0 ≤ a_i ≤ N}`: Følner inside the sublattice only.
    SublatticeBox { ell: Vec<u64> },
    /// `ι({0..N}^d)`: the exponent box `{p^α: α_j ≤ N, j ≤ d}` over the first `d` primes.
    EmbeddedLatticeBox { dim: usize },
    /// `{p^α : α_j ≤ ⌊N/j⌋}` over all primes with `⌊N/j⌋ ≥ 1`:
    /// every `A_j → ∞`, so the family is multiplicative Følner.
    HarmonicBox,
    /// `σ_N ∪ F` for a fixed finite `F`.
    Augmented { base: Box<SetFamily>, extra: IndexSet },
    /// `first` at even steps, `second` at odd steps, with sizes from `schedule`.
    Alternating {
        first: Box<SetFamily>,
        second: Box<SetFamily>,
        schedule: GrowthSchedule,
    },
    /// Explicit list; `member(N)` is the `N`-th set.
    Explicit(Vec<IndexSet>),
}

impl SetFamily {
    pub fn member(&self, n: usize) -> Result<IndexSet> {
        let bound = u32::try_from(n).map_err(|_| Error::Domain(format!("size {n} too large")))?;
        match self {
            Self::NaturalSegment => Ok(IndexSet::natural_segment(n)),
            Self::AdditiveSegment => Ok(IndexSet::additive_segment(n)),
            Self::EvenSegment { ell } => Ok(IndexSet::even_segment(n, *ell)),
            Self::SparsePowers { base } => IndexSet::sparse_powers(n, *base),
            Self::AdditiveBox { dim } => IndexSet::additive_box(&vec![bound; *dim]),
            Self::SublatticeBox { ell } => IndexSet::sublattice_box(ell, &vec![bound; ell.len()]),
            Self::EmbeddedLatticeBox { dim } => IndexSet::embedded_lattice_box(&vec![bound; *dim]),
            Self::HarmonicBox => {
                let bounds: Vec<u32> = (1..=n.max(1)).map(|j| (n.max(1) / j) as u32).collect();
                IndexSet::exponent_box(&bounds)
            }
            Self::Augmented { base, extra } => base.member(n)?.union_with(extra),
            Self::Alternating {
                first,
                second,
                schedule,
            } => {
                let size = schedule.size(n)?;
                if n.is_multiple_of(2) {
                    first.member(size)
                } else {
                    second.member(size)
                }
            }
            Self::Explicit(v) => v
                .get(n)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("explicit family has no member {n}"))),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            Self::NaturalSegment | Self::EmbeddedLatticeBox { .. } | Self::HarmonicBox => {
                GroupKind::Multiplicative
            }
            Self::AdditiveSegment | Self::EvenSegment { .. } | Self::SparsePowers { .. } => {
                GroupKind::Additive(1)
            }
            Self::AdditiveBox { dim } => GroupKind::Additive(*dim),
            Self::SublatticeBox { ell } => GroupKind::Additive(ell.len()),
            Self::Augmented { base, .. } => base.kind(),
            Self::Alternating { first, .. } => first.kind(),
            Self::Explicit(v) => v.first().map_or(GroupKind::Multiplicative, IndexSet::kind),
        }
    }
}

/// Distinct elements of an iterator of sets, for building augmentations.
pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a IndexSet>) -> Result<IndexSet> {
    let mut nat = BTreeSet::new();
    let mut pts = BTreeSet::new();
    let mut dim = None;
    for s in sets {
        match &s.repr {
            Repr::Multiplicative(v) => nat.extend(v.iter().copied()),
            Repr::Additive { dim: d, points } => {
                dim = Some(*d);
                pts.extend(points.iter().cloned());
            }
            Repr::Geometric { .. } | Repr::ExponentBox { .. } => return domain("union with a symbolic set"),
        }
    }
    match (nat.is_empty(), dim) {
        (false, None) => IndexSet::from_naturals(nat),
        (true, Some(d)) => IndexSet::from_points(d, pts),
        (true, None) => domain("union of no sets"),
        (false, Some(_)) => domain("union of index sets of different kinds"),
    }
}

/// `α(n)` for each label of a multiplicative set, as rationals.
pub fn label_exponents(set: &IndexSet) -> Option<Vec<FactoredRational>> {
    Some(
        set.naturals()?
            .iter()
            .map(|&n| arith::factor(n).unwrap().to_rational())
            .collect(),
    )
}
