//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed. The
//! process fails if any criterion outside `KNOWN_UNATTAINABLE` fails, or if a
//! criterion listed there unexpectedly passes.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use mtoeplitz::arith::{self, FactoredRational};
use mtoeplitz::index_sets::{folner_count, folner_ratio, IndexSet, SetFamily, Shift};
use mtoeplitz::operators::{
    compressed_power, compressed_power_oracle, gram_matrix, hs_offdiagonal_norm_sq, matrix_power, truncate, Limits,
};
use mtoeplitz::poly::{Polynomial, SpectralFunction};
use mtoeplitz::reference::{
    integral_of, predicted_limit, pushforward_measure, torus_integral, torus_integral_continuous, zeta_moment,
    Quadrature,
};
use mtoeplitz::spectral::{
    b3_from_defect, count_in_interval, eigenvalues, finite_augmentation_drift, normalized_det, prop_b3_check,
    singular_moments_spectrum, singular_values, trace_of_f, trace_of_f_spectrum,
};
use mtoeplitz::symbol::{dilation_symbol, zeta_symbol, Frequency, GroupKind, Symbol, TorusGrid, TorusPoint};
use mtoeplitz::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose stated bound is mathematically out of reach for the stated setup.
const KNOWN_UNATTAINABLE: &[u32] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn within_budget(start: Instant, budget: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < budget, format!("{:.2}s of {}s", t.as_secs_f64(), budget.as_secs()))
}

fn random_additive_set(rng: &mut ChaCha8Rng, max_size: usize) -> IndexSet {
    let n = rng.random_range(1..=max_size);
    let span = rng.random_range(n as i64..=3 * n as i64 + 10);
    IndexSet::from_integers((0..n).map(|_| rng.random_range(0..span))).unwrap()
}

fn random_natural_set(rng: &mut ChaCha8Rng, max_size: usize, max_value: u64) -> IndexSet {
    let n = rng.random_range(1..=max_size);
    IndexSet::from_naturals((0..n).map(|_| rng.random_range(1..=max_value))).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut exact_ok = true;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for trial in 0..50 {
        let (set, shifts): (IndexSet, Vec<u64>) = if trial % 2 == 0 {
            (random_additive_set(&mut rng, 300), (1..=10).collect())
        } else {
            // n = 1 would merge zⁿ and z̄ⁿ into the constant 2
            (random_natural_set(&mut rng, 300, 1500), (2..=10).collect())
        };
        for n in shifts {
            let (phi, shift) = match set.kind() {
                GroupKind::Multiplicative => (
                    Symbol::cosine_multiplicative(&FactoredRational::from_natural(n).unwrap()),
                    Shift::Natural(n),
                ),
                GroupKind::Additive(_) => (Symbol::cosine_additive(&[n as i64]), Shift::additive_scalar(n as i64)),
            };
            let t = truncate(&phi, &set).unwrap();
            let count = folner_count(&set, &shift).unwrap();
            // Tr T² = Σ|T_jk|² for hermitian T; every entry is exactly 0 or 1
            exact_ok &= t.frobenius_sq() == 2.0 * count as f64;
            let value = trace_of_f(&t, &SpectralFunction::power(2)).unwrap();
            worst = worst.max((value - 2.0 * folner_ratio(&set, &shift).unwrap()).abs());
            cases += 1;
        }
    }
    let (time_ok, time) = within_budget(start, Duration::from_secs(10));
    Outcome {
        pass: exact_ok && worst <= 1e-9 && time_ok,
        detail: format!("{cases} (set, n) cases, exact counts match: {exact_ok}, max float error {worst:.2e}, {time}"),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let phi = Symbol::cosine_additive(&[1]);
    let mut worst_c: f64 = 0.0;
    let mut worst_eig: f64 = 0.0;
    let mut n = 32usize;
    while n <= 2048 {
        let t = truncate(&phi, &IndexSet::additive_segment(n)).unwrap();
        let eig = eigenvalues(&t).unwrap();
        let mut closed: Vec<f64> = (1..=n).map(|k| 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos()).collect();
        closed.sort_by(f64::total_cmp);
        for (a, b) in eig.values().iter().zip(&closed) {
            worst_eig = worst_eig.max((a - b).abs());
        }
        for m in 2..=4 {
            let f = SpectralFunction::power(m);
            let value = trace_of_f_spectrum(&eig, &f).unwrap();
            let reference = torus_integral(&phi, &Polynomial::monomial(m)).unwrap().real();
            worst_c = worst_c.max((value - reference).abs() * n as f64);
        }
        n *= 2;
    }
    let (time_ok, time) = within_budget(start, Duration::from_secs(60));
    Outcome {
        pass: worst_c <= 10.0 * (1.0 + 1e-9) && worst_eig <= 1e-8 && time_ok,
        detail: format!("observed C = {worst_c:.6}, eigenvalue deviation {worst_eig:.2e}, {time}"),
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let two = FactoredRational::from_natural(2).unwrap();
    let three = FactoredRational::from_natural(3).unwrap();
    let phi = Symbol::cosine_multiplicative(&two).add(&Symbol::cosine_multiplicative(&three)).unwrap();
    let reference = torus_integral(&phi, &Polynomial::monomial(2)).unwrap().real();
    let mut within = true;
    let mut decreasing = true;
    let mut prev = f64::INFINITY;
    let mut scaled: Vec<f64> = Vec::new();
    for k in 2..=30u32 {
        let set = IndexSet::exponent_box(&[k, k]).unwrap();
        let value = trace_of_f(&truncate(&phi, &set).unwrap(), &SpectralFunction::power(2)).unwrap();
        let err = (value - reference).abs();
        within &= err <= 3.0 / (k as f64 + 1.0);
        decreasing &= err < prev;
        prev = err;
        scaled.push(err * (k as f64 + 1.0));
    }
    let (time_ok, time) = within_budget(start, Duration::from_secs(120));
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    Outcome {
        pass: within && decreasing && time_ok && (reference - 4.0).abs() < 1e-12,
        detail: format!(
            "error·(K+1) in [{lo:.9}, {hi:.9}] against the bound 3, decreasing: {decreasing}, {time}"
        ),
    }
}

fn criterion_4() -> Outcome {
    let phi = Symbol::cosine_additive(&[1]).add(&Symbol::cosine_additive(&[2])).unwrap();
    let family = SetFamily::EvenSegment { ell: 2 };
    let f = SpectralFunction::power(2);
    let quad = Quadrature::auto(&phi, 0);
    let predicted = predicted_limit(&phi, &family, &f, &quad).unwrap().real();
    let folner = integral_of(&phi, &f, &quad).unwrap().real();
    let mut errs = Vec::new();
    let mut last = 0.0;
    for n in [125usize, 250, 500, 1000] {
        let value = trace_of_f(&truncate(&phi, &family.member(n).unwrap()).unwrap(), &f).unwrap();
        errs.push((value - predicted).abs());
        last = value;
    }
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let err = *errs.last().unwrap();
    Outcome {
        pass: err <= 0.05 && decreasing && (predicted - 2.0).abs() < 1e-12 && (last - folner).abs() > 1.0,
        detail: format!("value {last:.6} at N=1000, limit {predicted}, error {err:.2e}; Følner integral {folner} is not approached"),
    }
}

fn criterion_5() -> Outcome {
    let phi = Symbol::cosine_additive(&[1]);
    let family = SetFamily::SparsePowers { base: 3 };
    let f = SpectralFunction::power(2);
    let predicted = predicted_limit(&phi, &family, &f, &Quadrature::auto(&phi, 0)).unwrap().real();
    let mut err = f64::INFINITY;
    for n in [50usize, 100, 250, 500] {
        let value = trace_of_f(&truncate(&phi, &family.member(n).unwrap()).unwrap(), &f).unwrap();
        err = (value - predicted).abs();
    }
    Outcome {
        pass: err <= 0.02 && predicted == 0.0,
        detail: format!("|value − f(0)| = {err:.2e} at N=500"),
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let n_big = 100_000usize;
    let set = IndexSet::natural_segment(n_big);
    let mut exact = true;
    let mut worst: f64 = 0.0;
    for n in 1..=20u64 {
        let count = folner_count(&set, &Shift::Natural(n)).unwrap() as i64;
        // |count/N − 1/n| ≤ 1/N  ⟺  |n·count − N| ≤ n
        exact &= (n as i64 * count - n_big as i64).abs() <= n as i64;
        let r = folner_ratio(&set, &Shift::Natural(n)).unwrap();
        worst = worst.max((r - 1.0 / n as f64).abs() * n_big as f64);
    }
    let (time_ok, time) = within_budget(start, Duration::from_secs(5));
    Outcome {
        pass: exact && time_ok,
        detail: format!("integer check holds for n ≤ 20: {exact}, max N·|ratio − 1/n| = {worst:.4}, {time}"),
    }
}

fn criterion_7() -> Outcome {
    let phi = zeta_symbol(2.0, 64).unwrap().tail_project(2).unwrap();
    let l2 = phi.l2_norm_sq();
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    let mut bounded = true;
    let mut last = 0.0;
    for k in 1..=50u32 {
        let set = IndexSet::exponent_box(&[k, k]).unwrap();
        let hs = hs_offdiagonal_norm_sq(&phi, &set).unwrap();
        let defect = phi
            .terms()
            .filter_map(|(f, _)| Shift::from_frequency(&f.inverse()))
            .map(|s| 1.0 - folner_ratio(&set, &s).unwrap())
            .fold(0.0, f64::max);
        monotone &= hs <= prev;
        bounded &= hs <= 2.0 * l2 * defect;
        prev = hs;
        last = hs;
    }
    Outcome {
        pass: monotone && bounded && last < 0.01,
        detail: format!("monotone: {monotone}, within 2·Σ|ŝ|²·defect: {bounded}, value {last:.3e} at K=50"),
    }
}

fn random_hermitian_symbol(rng: &mut ChaCha8Rng, multiplicative: bool) -> Symbol {
    let kind = if multiplicative { GroupKind::Multiplicative } else { GroupKind::Additive(1) };
    let mut s = Symbol::constant(kind, c(rng.random_range(-1.0..1.0)));
    for _ in 0..rng.random_range(1..=2) {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let f = if multiplicative {
            let (a, b) = loop {
                let a = rng.random_range(1..=6u64);
                let b = rng.random_range(1..=6u64);
                if a != b {
                    break (a, b);
                }
            };
            Frequency::Multiplicative(FactoredRational::from_ratio(a, b).unwrap())
        } else {
            Frequency::Additive(vec![rng.random_range(1..=4)])
        };
        let mut one = Symbol::zero(kind);
        one.add_term(f.clone(), z).unwrap();
        s = s.add(&one).unwrap().add(&one.adjoint()).unwrap();
    }
    s
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut holds = 0;
    let mut worst_margin = f64::INFINITY;
    for i in 0..200 {
        let mult = i % 2 == 1;
        let s = random_hermitian_symbol(&mut rng, mult);
        let set = if mult { random_natural_set(&mut rng, 60, 240) } else { random_additive_set(&mut rng, 60) };
        let n = rng.random_range(2..=4);
        let r = prop_b3_check(&s, &set, n).unwrap();
        holds += r.holds as usize;
        worst_margin = worst_margin.min(r.margin / r.rhs.max(1e-300));
    }
    let limits = Limits { dense_cap: 2048, ..Limits::default() };
    let mut worst_oracle: f64 = 0.0;
    let mut compared = 0;
    while compared < 50 {
        let mult = compared % 2 == 1;
        let s = random_hermitian_symbol(&mut rng, mult);
        let set = if mult { random_natural_set(&mut rng, 20, 60) } else { random_additive_set(&mut rng, 30) };
        let n = rng.random_range(2..=4);
        let Ok(oracle) = compressed_power_oracle(&s, &set, n, &limits) else {
            continue;
        };
        let t = truncate(&s, &set).unwrap();
        let tn = matrix_power(&t, n);
        let lhs = prop_b3_check(&s, &set, n).unwrap().lhs;
        let lhs_oracle = b3_from_defect(&s, &set, n, &(&oracle - &tn)).unwrap().lhs;
        let fast = compressed_power(&s, &set, n).unwrap();
        let mut entry: f64 = 0.0;
        for j in 0..set.len() {
            for k in 0..set.len() {
                entry = entry.max((fast.get(j, k) - oracle[(j, k)]).norm());
            }
        }
        worst_oracle = worst_oracle.max((lhs - lhs_oracle).abs()).max(entry);
        compared += 1;
    }
    Outcome {
        pass: holds == 200 && worst_oracle <= 1e-9,
        detail: format!(
            "inequality holds on {holds}/200 (min relative margin {worst_margin:.3}), oracle deviation {worst_oracle:.2e} on 50"
        ),
    }
}

/// `|matrix − ∫|φ_S|^{2m}|` bound for `m ∈ {1, 2}` from the compression identities.
fn moment_defect_bound(phi: &Symbol, set: &IndexSet, m: u32) -> f64 {
    let leak = hs_offdiagonal_norm_sq(&phi.adjoint(), set).unwrap();
    match m {
        1 => leak,
        2 => {
            let sq = phi.convolve(&phi.adjoint()).unwrap();
            hs_offdiagonal_norm_sq(&sq, set).unwrap() + 2.0 * phi.l1_norm().powi(2) * leak
        }
        _ => unreachable!(),
    }
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let n_max = 1_000_000;
    let phi = zeta_symbol(2.0, 20_000).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for (m, tol, boxes) in [
        (1u32, 1e-2, vec![vec![3u32, 1, 1], vec![7, 3, 1], vec![15, 3, 3], vec![31, 7, 3]]),
        (2u32, 5e-2, vec![vec![7, 3, 1], vec![15, 3, 3], vec![31, 7, 3], vec![31, 7, 3, 1]]),
    ] {
        let oracle = zeta_moment(2.0, m, n_max).unwrap();
        let mut errs = Vec::new();
        let mut consistent = true;
        for b in &boxes {
            let set = IndexSet::exponent_box(b).unwrap();
            let primes = b.len();
            let phi_s = phi.tail_project(primes).unwrap();
            let t = truncate(&phi, &set).unwrap();
            let value = singular_moments_spectrum(&singular_values(&t).unwrap(), m);
            let restricted = torus_integral(&phi_s.convolve(&phi_s.adjoint()).unwrap(), &Polynomial::monomial(m as usize))
                .unwrap()
                .real();
            let gap = oracle.real() + oracle.error_bound - restricted;
            let bound = moment_defect_bound(&phi_s, &set, m) + gap + oracle.error_bound;
            let err = (value - oracle.real()).abs();
            // m = 1 is an identity, so the bound is attained up to rounding
            consistent &= err <= bound * (1.0 + 1e-9);
            errs.push(err);
        }
        let last = *errs.last().unwrap();
        let ok = last <= tol && consistent && oracle.rigorous;
        pass &= ok;
        lines.push(format!(
            "m={m}: oracle {:.7}, final error {last:.2e} (tol {tol:e}), within bounds {consistent}",
            oracle.real()
        ));
    }
    let (_, time) = within_budget(start, Duration::from_secs(600));
    Outcome {
        pass,
        detail: format!("{}; {time}", lines.join("; ")),
    }
}

fn criterion_10() -> Outcome {
    let phi = Symbol::additive(1, &[(&[0], c(3.0)), (&[1], c(1.0)), (&[-1], c(1.0))]).unwrap();
    let geo = torus_integral_continuous(&phi, &SpectralFunction::Log, &Quadrature::auto(&phi, 0)).unwrap();
    let reference = geo.real().exp();
    let det = normalized_det(&truncate(&phi, &IndexSet::additive_segment(1000)).unwrap()).unwrap();
    let err_a = (det - reference).abs();

    let a = [(1u64, c(1.0)), (2, c(0.5))];
    let lift = mtoeplitz::symbol::dilation_lift(&a).unwrap();
    let abs_sq = lift.convolve(&lift.adjoint()).unwrap();
    let log_mean = torus_integral_continuous(&abs_sq, &SpectralFunction::Log, &Quadrature::auto(&abs_sq, 0)).unwrap();
    let gram_ref = log_mean.real().exp();
    let mut dets = Vec::new();
    for b in [vec![10u32, 3, 2], vec![22, 3, 2], vec![44, 3, 2]] {
        let set = IndexSet::exponent_box(&b).unwrap();
        dets.push((set.len(), normalized_det(&gram_matrix(&a, &set).unwrap()).unwrap()));
    }
    let (size, last) = *dets.last().unwrap();
    let err_b = (last - gram_ref).abs();
    let approaching = dets.windows(2).all(|w| (w[1].1 - gram_ref).abs() < (w[0].1 - gram_ref).abs());
    Outcome {
        pass: err_a <= 1e-3 && (reference - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9 && err_b <= 1e-2 && size >= 500 && approaching,
        detail: format!(
            "Toeplitz: {det:.7} vs {reference:.7} (error {err_a:.2e}); Gram: {last:.5} at #σ={size} vs {gram_ref:.6} (error {err_b:.2e})"
        ),
    }
}

fn criterion_11() -> Outcome {
    let phi = Symbol::cosine_additive(&[1]).add(&Symbol::cosine_additive(&[2])).unwrap();
    let extra = IndexSet::additive_segment(10);
    let l1 = phi.l1_norm();
    let mut bounded = true;
    let mut first: Vec<f64> = Vec::new();
    let mut last: Vec<f64> = Vec::new();
    for n in [100usize, 200, 400, 800, 1600] {
        let set = IndexSet::even_segment(n, 2);
        let rows = finite_augmentation_drift(&phi, &set, &extra, 4).unwrap();
        for r in &rows {
            let bound = 10.0 * (set.len() as f64).powf(-0.5) * r.m as f64 * l1.powi(r.m as i32 - 1);
            bounded &= r.drift <= bound;
        }
        let d: Vec<f64> = rows.iter().map(|r| r.drift).collect();
        if first.is_empty() {
            first = d.clone();
        }
        last = d;
    }
    let shrinking = first.iter().zip(&last).all(|(a, b)| b < a);
    Outcome {
        pass: bounded && shrinking,
        detail: format!(
            "within 10·(#σ)^(−1/2)·m·‖φ‖₁^(m−1): {bounded}, drift at N=1600 for m=1..4: {}",
            last.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn criterion_12() -> Outcome {
    let phi = Symbol::cosine_additive(&[1]);
    let eig = eigenvalues(&truncate(&phi, &IndexSet::additive_segment(2000)).unwrap()).unwrap();
    let count = count_in_interval(&eig, 0.0, 2.0).unwrap();
    let push = pushforward_measure(&phi, 0.0, 2.0, &Quadrature::auto(&phi, 0)).unwrap();
    let diff = (count.fraction() - push.measure.real()).abs();
    Outcome {
        pass: diff <= 0.02 && count.boundary_fraction() < 1e-3,
        detail: format!(
            "eigenvalue fraction {:.5}, push-forward {:.5}, boundary tally {:.1e}",
            count.fraction(),
            push.measure.real(),
            count.boundary_fraction()
        ),
    }
}

fn random_symbol(rng: &mut ChaCha8Rng) -> Symbol {
    let mut s = Symbol::zero(GroupKind::Multiplicative);
    for _ in 0..rng.random_range(1..=6) {
        let f = FactoredRational::from_pairs([
            (arith::nth_prime(rng.random_range(0..3)).unwrap(), rng.random_range(-2..=2)),
            (arith::nth_prime(rng.random_range(0..3)).unwrap(), rng.random_range(-2..=2)),
        ]);
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        s.add_term(Frequency::Multiplicative(f), z).unwrap();
    }
    s
}

fn random_point(rng: &mut ChaCha8Rng) -> TorusPoint {
    [2u64, 3, 5]
        .iter()
        .fold(TorusPoint::new(), |p, &k| p.with(k, Complex64::cis(rng.random_range(0.0..2.0 * PI))))
}

fn criterion_13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let tol = 1e-12;
    let mut failures = 0;
    for _ in 0..1000 {
        let (a, b, d) = (random_symbol(&mut rng), random_symbol(&mut rng), random_symbol(&mut rng));
        let z = random_point(&mut rng);
        let ab = a.convolve(&b).unwrap();
        let ba = b.convolve(&a).unwrap();
        let close = |x: &Symbol, y: &Symbol| x.terms().chain(y.terms()).all(|(f, _)| (x.coeff(f) - y.coeff(f)).norm() <= tol);
        let assoc = close(&ab.convolve(&d).unwrap(), &a.convolve(&b.convolve(&d).unwrap()).unwrap());
        let pointwise = (ab.eval(&z).unwrap_or_default() - a.eval(&z).unwrap_or_default() * b.eval(&z).unwrap_or_default()).norm() <= tol;
        let grid = TorusGrid::exact_for(&a, 2);
        let vals = grid.eval(&a).unwrap();
        let mean = vals.iter().map(|v| v.norm_sqr()).sum::<f64>() / vals.len() as f64;
        let parseval = (mean - a.l2_norm_sq()).abs() <= tol * a.l2_norm_sq().max(1.0);
        let adjoint = a.adjoint().adjoint() == a
            && (a.adjoint().eval(&z).unwrap_or_default() - a.eval(&z).unwrap_or_default().conj()).norm() <= tol;
        if !(close(&ab, &ba) && assoc && pointwise && parseval && adjoint) {
            failures += 1;
        }
    }
    let mut gram_dev: f64 = 0.0;
    for trial in 0..200 {
        let complex = trial % 2 == 1;
        let a: Vec<(u64, Complex64)> = (0..rng.random_range(1..=6))
            .map(|_| {
                let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
                (rng.random_range(1..=12u64), Complex64::new(rng.random_range(-1.0..1.0), im))
            })
            .collect();
        let set = random_natural_set(&mut rng, 50, 300);
        let g = gram_matrix(&a, &set).unwrap();
        let t = truncate(&dilation_symbol(&a).unwrap(), &set).unwrap();
        for j in 0..set.len() {
            for k in 0..set.len() {
                // entrywise for real a; for complex a the direct sum is the transpose
                let other = if complex { t.get(k, j) } else { t.get(j, k) };
                gram_dev = gram_dev.max((g.get(j, k) - other).norm());
            }
        }
    }
    Outcome {
        pass: failures == 0 && gram_dev <= tol,
        detail: format!("{failures} failing algebra trials of 1000, Gram two-path deviation {gram_dev:.1e}"),
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "sharpness identity", criterion_1),
        (2, "classical Szegő on {0..N−1}", criterion_2),
        (3, "multiplicative Følner Szegő on exponent boxes", criterion_3),
        (4, "non-Følner even-part limit", criterion_4),
        (5, "sparse-set limit f(0)", criterion_5),
        (6, "natural truncation is not Følner", criterion_6),
        (7, "Hilbert–Schmidt tail on boxes", criterion_7),
        (8, "compression trace-norm inequality", criterion_8),
        (9, "zeta moments", criterion_9),
        (10, "determinant asymptotics", criterion_10),
        (11, "finite augmentation drift", criterion_11),
        (12, "eigenvalue counting vs push-forward", criterion_12),
        (13, "exact algebra suite", criterion_13),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let out = run();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        let note = if known { " [known unattainable]" } else { "" };
        println!("criterion {id:>2} {tag}{note}: {name}: {}", out.detail);
        if out.pass == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
