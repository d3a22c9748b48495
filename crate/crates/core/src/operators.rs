//! Dense truncated Toeplitz matrices `T_σ(φ)`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use faer::{c64, Mat};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::index_sets::{folner_count, IndexSet, Shift};
use crate::symbol::{Frequency, GroupKind, Symbol, DEFAULT_SUPPORT_CAP};

/// Default bound on `#σ` for dense matrices.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Bound on the label set of the enlarged-set power oracle.
pub const ENLARGED_LABEL_CAP: usize = 100_000;

/// Resource limits for matrix construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub dense_cap: usize,
    pub support_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            dense_cap: DEFAULT_DENSE_CAP,
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

/// A dense section `{ŝ(j/k)}` or `{ŝ(j − k)}` over an index set.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    labels: IndexSet,
    matrix: Mat<c64>,
    symbol_ref: String,
}

impl TruncatedOperator {
    pub fn labels(&self) -> &IndexSet {
        &self.labels
    }

    pub fn matrix(&self) -> &Mat<c64> {
        &self.matrix
    }

    /// Short description of the generating symbol.
    pub fn symbol_ref(&self) -> &str {
        &self.symbol_ref
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[(j, k)]
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        let n = self.size();
        (0..n).all(|k| (0..n).all(|j| self.matrix[(j, k)].im == 0.0))
    }

    /// `max |T[j,k] − conj T[k,j]|`.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    /// `Σ |T[j,k]|²`.
    pub fn frobenius_sq(&self) -> f64 {
        let n = self.size();
        (0..n)
            .flat_map(|k| (0..n).map(move |j| (j, k)))
            .map(|(j, k)| self.matrix[(j, k)].norm_sqr())
            .sum()
    }

    /// Row-major CSV, each entry written as a `re,im` pair.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.size();
        let mut line = String::new();
        for j in 0..n {
            line.clear();
            for k in 0..n {
                let z = self.matrix[(j, k)];
                if k > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{},{}", z.re, z.im));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }
}

pub(crate) fn hermitian_defect(m: &Mat<c64>) -> f64 {
    let n = m.nrows();
    let mut d = 0f64;
    for k in 0..n {
        for j in 0..=k {
            d = d.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    d
}

fn describe(s: &Symbol) -> String {
    let kind = match s.kind() {
        GroupKind::Multiplicative => "multiplicative".to_string(),
        GroupKind::Additive(d) => format!("additive(d={d})"),
    };
    format!("{kind}, {} terms, l1={}", s.len(), s.l1_norm())
}

fn check_kinds(s: &Symbol, set: &IndexSet) -> Result<()> {
    if s.kind() != set.kind() {
        return domain(format!(
            "symbol kind {:?} does not match index set kind {:?}",
            s.kind(),
            set.kind()
        ));
    }
    Ok(())
}

/// `T_σ(s)` with default limits.
pub fn truncate(s: &Symbol, set: &IndexSet) -> Result<TruncatedOperator> {
    truncate_with(s, set, &Limits::default())
}

/// `T_σ(s)`; entries are looked up in the coefficient map, misses are exact zeros.
pub fn truncate_with(s: &Symbol, set: &IndexSet, limits: &Limits) -> Result<TruncatedOperator> {
    check_kinds(s, set)?;
    let n = set.len();
    if n > limits.dense_cap {
        return Err(Error::Resource {
            what: "dense truncation",
            size: n,
            cap: limits.dense_cap,
        });
    }
    let terms: Vec<(Shift, Complex64)> = s
        .terms()
        .filter_map(|(f, &c)| Some((Shift::from_frequency(f)?, c)))
        .collect();
    let mut matrix = Mat::<c64>::zeros(n, n);
    for k in 0..n {
        for (shift, c) in &terms {
            if let Some(j) = set.shift_position(k, shift) {
                matrix[(j, k)] = *c;
            }
        }
    }
    Ok(TruncatedOperator {
        labels: set.clone(),
        matrix,
        symbol_ref: describe(s),
    })
}

/// `π_σ L(s)ⁿ π_σ = T_σ(sⁿ)`, built from the exact symbol power.
pub fn compressed_power(s: &Symbol, set: &IndexSet, n: u32) -> Result<TruncatedOperator> {
    compressed_power_with(s, set, n, &Limits::default())
}

pub fn compressed_power_with(
    s: &Symbol,
    set: &IndexSet,
    n: u32,
    limits: &Limits,
) -> Result<TruncatedOperator> {
    if n == 0 {
        return domain("compressed power needs n >= 1");
    }
    check_kinds(s, set)?;
    truncate_with(&s.power_capped(n, limits.support_cap)?, set, limits)
}

/// `(1/#σ) ‖π L(s) (I − π)‖²_{S₂} = Σ_r |ŝ(r)|² (1 − #{k ∈ σ : k/r ∈ σ}/#σ)`.
pub fn hs_offdiagonal_norm_sq(s: &Symbol, set: &IndexSet) -> Result<f64> {
    check_kinds(s, set)?;
    let size = set.len() as f64;
    let mut total = 0.0;
    for (f, c) in s.terms() {
        let kept = match Shift::from_frequency(&f.inverse()) {
            Some(shift) => folner_count(set, &shift)?,
            None => 0,
        };
        total += c.norm_sqr() * (set.len() - kept) as f64 / size;
    }
    Ok(total)
}

/// Gram matrix `{⟨f_j, f_k⟩}` of `f_j = Σ_n a_n e_{nj}` for an orthonormal
/// family `e`: entry `(j, k) = Σ_{jm = kn} a_m conj(a_n)`.
pub fn gram_matrix(a: &[(u64, Complex64)], set: &IndexSet) -> Result<TruncatedOperator> {
    if set.kind() != GroupKind::Multiplicative {
        return domain("Gram matrices live on multiplicative sets");
    }
    if a.iter().any(|&(m, _)| m == 0) {
        return domain("dilation coefficients are indexed by naturals");
    }
    let n = set.len();
    if n > DEFAULT_DENSE_CAP {
        return Err(Error::Resource {
            what: "Gram matrix",
            size: n,
            cap: DEFAULT_DENSE_CAP,
        });
    }
    let mut matrix = Mat::<c64>::zeros(n, n);
    for &(m, am) in a {
        for &(nn, an) in a {
            // jm = kn  ⟺  j = (n/m)·k
            let shift = Shift::rational(nn, m)?;
            for kk in 0..n {
                if let Some(jj) = set.shift_position(kk, &shift) {
                    matrix[(jj, kk)] += am * an.conj();
                }
            }
        }
    }
    Ok(TruncatedOperator {
        labels: set.clone(),
        matrix,
        symbol_ref: format!("gram, {} dilation coefficients", a.len()),
    })
}

/// `σ` closed under `steps` rounds of multiplication by `supp(s)`, as group labels.
pub fn enlarge_set(s: &Symbol, set: &IndexSet, steps: u32) -> Result<Vec<Frequency>> {
    check_kinds(s, set)?;
    let support: Vec<&Frequency> = s.terms().map(|(f, _)| f).collect();
    let mut all: std::collections::BTreeSet<Frequency> = set.frequencies()?.into_iter().collect();
    let mut frontier: Vec<Frequency> = all.iter().cloned().collect();
    for _ in 0..steps {
        let mut next = Vec::new();
        for x in &frontier {
            for q in &support {
                let y = q.compose(x);
                if all.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if all.len() > ENLARGED_LABEL_CAP {
            return Err(Error::Resource {
                what: "enlarged label set",
                size: all.len(),
                cap: ENLARGED_LABEL_CAP,
            });
        }
        frontier = next;
    }
    Ok(all.into_iter().collect())
}

/// Dense section `{ŝ(x y⁻¹)}` over arbitrary group labels.
pub fn laurent_section(s: &Symbol, labels: &[Frequency], limits: &Limits) -> Result<Mat<c64>> {
    let n = labels.len();
    if n > limits.dense_cap {
        return Err(Error::Resource {
            what: "dense Laurent section",
            size: n,
            cap: limits.dense_cap,
        });
    }
    let pos: BTreeMap<&Frequency, usize> = labels.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = Mat::<c64>::zeros(n, n);
    for (k, y) in labels.iter().enumerate() {
        for (q, &c) in s.terms() {
            if let Some(&j) = pos.get(&q.compose(y)) {
                m[(j, k)] = c;
            }
        }
    }
    Ok(m)
}

/// `π_σ L(s)ⁿ π_σ` by dense multiplication over an enlarged label set,
/// independent of the symbol power.
pub fn compressed_power_oracle(
    s: &Symbol,
    set: &IndexSet,
    n: u32,
    limits: &Limits,
) -> Result<Mat<c64>> {
    if n == 0 {
        return domain("compressed power needs n >= 1");
    }
    let labels = enlarge_set(s, set, n - 1)?;
    let big = laurent_section(s, &labels, limits)?;
    let pos: BTreeMap<&Frequency, usize> = labels.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let rows: Vec<usize> = set.frequencies()?.iter().map(|f| pos[f]).collect();
    let size = rows.len();
    let mut w = Mat::<c64>::from_fn(labels.len(), size, |i, k| big[(i, rows[k])]);
    for _ in 1..n {
        w = &big * &w;
    }
    Ok(Mat::from_fn(size, size, |j, k| w[(rows[j], k)]))
}

/// `T_σ(s)ⁿ` by repeated dense multiplication.
pub fn matrix_power(t: &TruncatedOperator, n: u32) -> Mat<c64> {
    let size = t.size();
    let mut acc = Mat::<c64>::identity(size, size);
    for _ in 0..n {
        acc = &acc * t.matrix();
    }
    acc
}
