//! Difference-sum evaluation and supremum scans.
//!
//! The central object is S_K(x) = Σ_{k≤K} w_k·|Kernel(n_{k+1}, x) −
//! Kernel(n_k, x)|^p, evaluated over torus angles, integers, or real
//! frequencies. Supremum estimates are certified lower bounds: the value
//! reported is always attained at the reported argmax. Scans parallelize
//! over frequencies and reduce deterministically (max value, ties broken
//! toward the smaller frequency), so results do not depend on thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::multiplier::{
    cesaro_multiplier, sinc, smoothed_multiplier, Angle, FiniteMeasureZ, KernelSpec,
    MultiplierError,
};
use crate::rng::trial_rng;
use crate::sequences::IndexSequence;
use crate::sum::Kahan;
use rand::Rng;
use std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Multiplier(#[from] MultiplierError),
    #[error("kernel works on {expected} frequencies, got {got}")]
    DomainMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("|transform| at θ = {theta} is within 1e-14 of 1; tail formulas diverge")]
    SpectrumAtOne { theta: f64 },
    #[error("growth window violated at k = {k}: {detail}")]
    WindowViolation { k: usize, detail: String },
    #[error("bad query: {0}")]
    BadQuery(String),
}

/// A point of the scan domain.
#[derive(Clone, Copy, Debug)]
pub enum Frequency {
    Torus(Angle),
    Integer(i64),
    Real(f64),
}

impl Frequency {
    /// Scalar key used for CSV output, sorting, and tie-breaking.
    pub fn key(self) -> f64 {
        match self {
            Frequency::Torus(a) => a.radians(),
            Frequency::Integer(l) => l as f64,
            Frequency::Real(t) => t,
        }
    }

    fn domain_name(self) -> &'static str {
        match self {
            Frequency::Torus(_) => "torus",
            Frequency::Integer(_) => "integer",
            Frequency::Real(_) => "real",
        }
    }
}

/// A truncated weighted difference sum S_K attached to one kernel family
/// and one index family.
#[derive(Clone, Debug)]
pub struct DifferenceSumQuery {
    kernel: KernelSpec,
    seq: IndexSequence,
    k_max: usize,
    p: f64,
}

impl DifferenceSumQuery {
    pub fn new(
        kernel: KernelSpec,
        seq: IndexSequence,
        k_max: usize,
        p: f64,
    ) -> Result<Self, EngineError> {
        if k_max < 1 {
            return Err(EngineError::BadQuery("K must be ≥ 1".into()));
        }
        if !(p > 0.0) {
            return Err(EngineError::BadQuery(format!("exponent p = {p} must be positive")));
        }
        let integer_kernel = matches!(kernel, KernelSpec::Cesaro | KernelSpec::MeasurePower(_));
        if integer_kernel != seq.is_integer_kind() {
            return Err(EngineError::BadQuery(
                "kernel index type does not match the sequence kind".into(),
            ));
        }
        if k_max + 1 > seq.max_query_index() {
            return Err(EngineError::BadQuery(format!(
                "K = {k_max} needs term {} beyond the sequence range",
                k_max + 1
            )));
        }
        Ok(DifferenceSumQuery { kernel, seq, k_max, p })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn sequence(&self) -> &IndexSequence {
        &self.seq
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// Same query truncated at a different K.
    pub fn with_k_max(&self, k_max: usize) -> Result<Self, EngineError> {
        Self::new(self.kernel.clone(), self.seq.clone(), k_max, self.p)
    }

    /// Kernel value at the k-th sequence term (1-based).
    fn kernel_value(&self, k: usize, freq: Frequency) -> Result<Complex64, EngineError> {
        match (&self.kernel, freq) {
            (KernelSpec::Cesaro, Frequency::Torus(a)) => {
                Ok(cesaro_multiplier(self.seq.term_int(k), a))
            }
            (KernelSpec::MeasurePower(mu), Frequency::Torus(a)) => {
                Ok(mu.power_transform(self.seq.term_int(k), a)?)
            }
            (KernelSpec::SincZ, Frequency::Integer(l)) => {
                Ok(Complex64::new(sinc(self.seq.term_real(k) * l as f64), 0.0))
            }
            (KernelSpec::SincR, Frequency::Real(t)) => {
                Ok(Complex64::new(sinc(self.seq.term_real(k) * t), 0.0))
            }
            (KernelSpec::Smoothed, Frequency::Integer(l)) => Ok(Complex64::new(
                smoothed_multiplier(self.seq.term_real(k), l as f64),
                0.0,
            )),
            (KernelSpec::Smoothed, Frequency::Real(t)) => {
                Ok(Complex64::new(smoothed_multiplier(self.seq.term_real(k), t), 0.0))
            }
            (kernel, freq) => Err(EngineError::DomainMismatch {
                expected: match kernel {
                    KernelSpec::Cesaro | KernelSpec::MeasurePower(_) => "torus",
                    KernelSpec::SincR => "real",
                    _ => "integer or real",
                },
                got: freq.domain_name(),
            }),
        }
    }

    /// |Kernel(n_{k+1}, ·) − Kernel(n_k, ·)| at one frequency, without
    /// weight or power.
    pub fn difference_term(&self, k: usize, freq: Frequency) -> Result<f64, EngineError> {
        assert!(k >= 1 && k <= self.k_max, "term index out of range");
        let a = self.kernel_value(k, freq)?;
        let b = self.kernel_value(k + 1, freq)?;
        Ok((b - a).norm())
    }

    /// S_K at one frequency: ascending k, compensated accumulation, each
    /// kernel endpoint evaluated once.
    pub fn difference_sum(&self, freq: Frequency) -> Result<f64, EngineError> {
        let mut acc = Kahan::new();
        let mut prev = self.kernel_value(1, freq)?;
        for k in 1..=self.k_max {
            let next = self.kernel_value(k + 1, freq)?;
            let term = (next - prev).norm();
            let contribution = if self.p == 1.0 { term } else { term.powf(self.p) };
            acc.add(self.seq.weight(k) * contribution);
            prev = next;
        }
        Ok(acc.value())
    }

    /// Largest index magnitude the query touches, as the scale reference
    /// for log-uniform sampling.
    fn scale_bits(&self) -> f64 {
        if self.seq.is_integer_kind() {
            (self.seq.term_int(self.k_max + 1) as f64).log2()
        } else {
            (1.0 / self.seq.term_real(self.k_max + 1)).log2()
        }
    }
}

// ─── sampling plans and supremum estimates ──────────────────────────────────

/// Deterministic frequency families for scans.
#[derive(Clone, Debug)]
pub enum SamplingPlan {
    /// θ = π·i/N exact grid angles (i = 1..N), plus `log_samples` random
    /// points θ = π·2^{−u}, u ~ U[0, log₂(n_{K+1}) + 2] from the seed.
    Torus { grid: u64, log_samples: usize, seed: u64 },
    /// Integers 1..=dense_max, then `sparse_count` log-spaced integers up
    /// to sparse_max (deduplicated).
    Integers { dense_max: i64, sparse_max: i64, sparse_count: usize },
    /// Reals: uniform grid of `grid` points on (0, max], plus `log_count`
    /// log-spaced points down to max·2^{−40}.
    Reals { max: f64, grid: usize, log_count: usize },
    /// A single frequency (degenerate budget).
    Single(Frequency),
}

/// Hard cap on evaluated frequencies; beyond it the scan reports its
/// best-so-far with `budget_exhausted` set.
pub const SAMPLE_BUDGET: usize = 30_000_000;

/// A certified lower bound for sup S_K: `value` is attained at `argmax`.
#[derive(Clone, Copy, Debug)]
pub struct SupremumEstimate {
    pub value: f64,
    pub argmax: Frequency,
    pub samples_used: usize,
    pub refinement_gain: f64,
    pub budget_exhausted: bool,
}

fn plan_frequencies(q: &DifferenceSumQuery, plan: &SamplingPlan) -> (Vec<Frequency>, bool) {
    let mut freqs = Vec::new();
    let mut exhausted = false;
    match plan {
        SamplingPlan::Torus { grid, log_samples, seed } => {
            for i in 1..=*grid {
                if freqs.len() >= SAMPLE_BUDGET {
                    exhausted = true;
                    break;
                }
                let a = Angle::rational_pi(i as i64, *grid).expect("grid denominator in range");
                freqs.push(Frequency::Torus(a));
            }
            let u_max = q.scale_bits() + 2.0;
            let mut rng = trial_rng(*seed, 0);
            for _ in 0..*log_samples {
                if freqs.len() >= SAMPLE_BUDGET {
                    exhausted = true;
                    break;
                }
                let u: f64 = rng.gen_range(0.0..u_max);
                freqs.push(Frequency::Torus(Angle::Real(PI * (-u).exp2())));
            }
        }
        SamplingPlan::Integers { dense_max, sparse_max, sparse_count } => {
            for l in 1..=*dense_max {
                if freqs.len() >= SAMPLE_BUDGET {
                    exhausted = true;
                    break;
                }
                freqs.push(Frequency::Integer(l));
            }
            if *sparse_count > 0 && *sparse_max > *dense_max {
                let lo = (*dense_max).max(1) as f64;
                let ratio = *sparse_max as f64 / lo;
                let mut last = *dense_max;
                for j in 1..=*sparse_count {
                    if freqs.len() >= SAMPLE_BUDGET {
                        exhausted = true;
                        break;
                    }
                    let l = (lo * ratio.powf(j as f64 / *sparse_count as f64)).round() as i64;
                    if l > last {
                        freqs.push(Frequency::Integer(l));
                        last = l;
                    }
                }
            }
        }
        SamplingPlan::Reals { max, grid, log_count } => {
            for i in 1..=*grid {
                if freqs.len() >= SAMPLE_BUDGET {
                    exhausted = true;
                    break;
                }
                freqs.push(Frequency::Real(max * i as f64 / *grid as f64));
            }
            for j in 1..=*log_count {
                if freqs.len() >= SAMPLE_BUDGET {
                    exhausted = true;
                    break;
                }
                let u = 40.0 * j as f64 / *log_count as f64;
                freqs.push(Frequency::Real(max * (-u).exp2()));
            }
        }
        SamplingPlan::Single(f) => freqs.push(*f),
    }
    (freqs, exhausted)
}

/// Lattice max over (value, key): higher value wins, ties go to the
/// smaller frequency key. Associative and commutative, so any parallel
/// chunking reduces to the same answer.
fn better(a: (f64, usize, f64), b: (f64, usize, f64)) -> (f64, usize, f64) {
    if a.0 > b.0 || (a.0 == b.0 && a.2 <= b.2) {
        a
    } else {
        b
    }
}

/// Scan the plan, keep the best sample, optionally refine with a
/// golden-section ascent between the argmax's sampled neighbors.
pub fn estimate_supremum(
    q: &DifferenceSumQuery,
    plan: &SamplingPlan,
    refine: bool,
) -> Result<SupremumEstimate, EngineError> {
    let (freqs, budget_exhausted) = plan_frequencies(q, plan);
    if freqs.is_empty() {
        return Err(EngineError::BadQuery("sampling plan produced no frequencies".into()));
    }

    let evaluated: Result<Vec<(f64, usize, f64)>, EngineError> = freqs
        .par_iter()
        .enumerate()
        .map(|(i, &f)| {
            let v = q.difference_sum(f)?;
            let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
            Ok((v, i, f.key()))
        })
        .collect();
    let evaluated = evaluated?;
    let best = evaluated
        .par_iter()
        .copied()
        .reduce(|| (f64::NEG_INFINITY, usize::MAX, f64::INFINITY), better);

    let mut estimate = SupremumEstimate {
        value: best.0,
        argmax: freqs[best.1],
        samples_used: freqs.len(),
        refinement_gain: 0.0,
        budget_exhausted,
    };

    if refine {
        if let Some((x, v)) = refine_around(q, &freqs, best)? {
            if v > estimate.value {
                estimate.refinement_gain = v - estimate.value;
                estimate.value = v;
                estimate.argmax = match estimate.argmax {
                    Frequency::Torus(_) => Frequency::Torus(Angle::Real(x)),
                    Frequency::Real(_) => Frequency::Real(x),
                    f @ Frequency::Integer(_) => f,
                };
            }
        }
    }
    Ok(estimate)
}

/// Golden-section ascent in the interval bounded by the sampled neighbors
/// of the best frequency. Integer domains refuse refinement (the lattice
/// is the domain). Returns the best interior point found.
fn refine_around(
    q: &DifferenceSumQuery,
    freqs: &[Frequency],
    best: (f64, usize, f64),
) -> Result<Option<(f64, f64)>, EngineError> {
    let torus = match freqs[best.1] {
        Frequency::Integer(_) => return Ok(None),
        Frequency::Torus(_) => true,
        Frequency::Real(_) => false,
    };
    let center = best.2;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for f in freqs {
        let k = f.key();
        if k < center && k > lo {
            lo = k;
        }
        if k > center && k < hi {
            hi = k;
        }
    }
    if lo == f64::NEG_INFINITY {
        lo = center / 2.0;
    }
    if hi == f64::INFINITY {
        hi = if torus { PI.min(center * 2.0) } else { center * 2.0 };
    }
    if !(hi > lo) {
        return Ok(None);
    }

    let eval = |x: f64| -> Result<f64, EngineError> {
        let f = if torus {
            Frequency::Torus(Angle::real(x))
        } else {
            Frequency::Real(x)
        };
        q.difference_sum(f)
    };

    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut best_x = if fc >= fd { c } else { d };
    let mut best_v = fc.max(fd);
    for _ in 0..60 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = eval(d)?;
        }
        if fc > best_v {
            best_v = fc;
            best_x = c;
        }
        if fd > best_v {
            best_v = fd;
            best_x = d;
        }
    }
    Ok(Some((best_x, best_v)))
}

/// One probe of a growth study: a truncation depth plus its scan plan.
#[derive(Clone, Debug)]
pub struct Probe {
    pub k_max: usize,
    pub plan: SamplingPlan,
    pub refine: bool,
}

/// Run the same query at increasing truncations/budgets; callers assert
/// growth or stabilization between the returned estimates.
pub fn divergence_profile(
    q_template: &DifferenceSumQuery,
    probes: &[Probe],
) -> Result<Vec<SupremumEstimate>, EngineError> {
    if probes.is_empty() {
        return Err(EngineError::BadQuery("probe list is empty".into()));
    }
    if probes.windows(2).any(|w| w[1].k_max < w[0].k_max) {
        return Err(EngineError::BadQuery("probes must not decrease in depth".into()));
    }
    probes
        .iter()
        .map(|probe| {
            let q = q_template.with_k_max(probe.k_max)?;
            estimate_supremum(&q, &probe.plan, probe.refine)
        })
        .collect()
}

// ─── closed forms, ratios, probes ───────────────────────────────────────────

/// Exact value of Σ_{k≥1} |μ̂^{k+1}(θ) − μ̂^{k}(θ)| = |μ̂−1|·|μ̂|/(1−|μ̂|).
pub fn geometric_tail_closed_form(mu: &FiniteMeasureZ, theta: f64) -> Result<f64, EngineError> {
    let deficit = mu.modulus_deficit(theta);
    if deficit <= 1e-14 {
        return Err(EngineError::SpectrumAtOne { theta });
    }
    // deficit can exceed 1 by one ulp when the spectrum touches zero
    let modulus = (1.0 - deficit).max(0.0);
    Ok(mu.one_minus_transform(theta).norm() * modulus / deficit)
}

/// The angular-region ratio |1−μ̂|/(1−|μ̂|) and the tangency-region ratio
/// |1−μ̂|²/(1−|μ̂|²), both at one angle. The two ratios answer different
/// containment questions, so both are always reported.
pub fn spectral_region_ratios(
    mu: &FiniteMeasureZ,
    theta: f64,
) -> Result<(f64, f64), EngineError> {
    let deficit = mu.modulus_deficit(theta);
    if deficit <= 1e-14 {
        return Err(EngineError::SpectrumAtOne { theta });
    }
    let one_minus = mu.one_minus_transform(theta).norm();
    let stolz = one_minus / deficit;
    let horocycle = one_minus * one_minus / (deficit * (2.0 - deficit));
    Ok((stolz, horocycle))
}

/// Sup of both spectral ratios over the grid θ = π·i/N, skipping a 1e−9
/// neighborhood of 0 and any grid point where the modulus reaches 1.
pub fn spectral_ratio_scan(mu: &FiniteMeasureZ, grid: u64) -> (f64, f64) {
    (1..=grid)
        .into_par_iter()
        .map(|i| {
            let theta = PI * i as f64 / grid as f64;
            if theta.abs() < 1e-9 {
                return (0.0, 0.0);
            }
            spectral_region_ratios(mu, theta).unwrap_or((0.0, 0.0))
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
}

/// The probe value |μ̂^{n_{k+1}} − μ̂^{n_k}| at t_k, the midpoint of
/// (π/n_{k+1}, π/(n_{k+1}−n_k)), valid under the growth window
/// n_k^p ≤ n_{k+1} ≤ 2·n_k^p.
pub fn power_window_probe(
    mu: &FiniteMeasureZ,
    seq: &IndexSequence,
    p: f64,
    k: usize,
) -> Result<f64, EngineError> {
    let nk = seq.term_int(k) as f64;
    let nk1 = seq.term_int(k + 1) as f64;
    let lower = nk.powf(p);
    if !(nk1 >= lower && nk1 <= 2.0 * lower) {
        return Err(EngineError::WindowViolation {
            k,
            detail: format!("need n_k^p ≤ n_(k+1) ≤ 2·n_k^p, got n_k = {nk}, n_(k+1) = {nk1}"),
        });
    }
    let t_lo = PI / nk1;
    let t_hi = PI / (nk1 - nk);
    let t = 0.5 * (t_lo + t_hi);
    let a = mu.power_transform(seq.term_int(k), Angle::Real(t))?;
    let b = mu.power_transform(seq.term_int(k + 1), Angle::Real(t))?;
    Ok((b - a).norm())
}

/// Estimated suprema of g(t) = sinc(at) − sinc(bt) over the positive reals
/// (dense grid on (0, 10³/a] plus refinement) and over the integers
/// 1..=10⁶. The real-line value is a certified lower bound, the integer
/// value is exact over its range.
pub fn sampling_comparison(
    a: f64,
    b: f64,
    grid: usize,
) -> Result<(f64, f64), EngineError> {
    if !(0.0 < a && a < b && b < 1.0) {
        return Err(EngineError::BadQuery(format!(
            "need 0 < a < b < 1, got a = {a}, b = {b}"
        )));
    }
    let sup_r = sinc_pair_sup_real(a, b, grid)?;
    let sup_z = (1..=1_000_000i64)
        .into_par_iter()
        .map(|l| (sinc(a * l as f64) - sinc(b * l as f64)).abs())
        .reduce(|| 0.0, f64::max);
    Ok((sup_r, sup_z))
}

/// sup_{t>0} |sinc(at) − sinc(bt)| via the standard scan; b may reach 1.
pub fn sinc_pair_sup_real(a: f64, b: f64, grid: usize) -> Result<f64, EngineError> {
    assert!(0.0 < a && a < b && b <= 1.0);
    let seq = crate::sequences::build_sequence(
        crate::sequences::SequenceKind::ExplicitReals(vec![b, a]),
        2,
        crate::sequences::WeightPreset::Unit,
    )
    .expect("two positive decreasing scales");
    let q = DifferenceSumQuery::new(KernelSpec::SincR, seq, 1, 1.0)?;
    let plan = SamplingPlan::Reals { max: 1e3 / a, grid, log_count: 1000 };
    Ok(estimate_supremum(&q, &plan, true)?.value)
}

/// Scanned sup_γ |m_n(γ) − m_m(γ)| paired with the sharpness floor
/// (2/π)(1 − n/m).
pub fn pairwise_lower_bound(
    n: u64,
    m: u64,
    grid: u64,
) -> Result<(f64, f64), EngineError> {
    if !(n >= 1 && n < m) {
        return Err(EngineError::BadQuery(format!("need 1 ≤ n < m, got {n}, {m}")));
    }
    let seq = crate::sequences::build_sequence(
        crate::sequences::SequenceKind::ExplicitIntegers(vec![n as u128, m as u128]),
        2,
        crate::sequences::WeightPreset::Unit,
    )
    .expect("two increasing integers");
    let q = DifferenceSumQuery::new(KernelSpec::Cesaro, seq, 1, 1.0)?;
    let plan = SamplingPlan::Torus { grid, log_samples: grid as usize / 4, seed: 11 };
    let est = estimate_supremum(&q, &plan, true)?;
    let bound = (2.0 / PI) * (1.0 - n as f64 / m as f64);
    Ok((est.value, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{build_sequence, SequenceKind, WeightPreset};

    fn cesaro_geometric(k_max: usize) -> DifferenceSumQuery {
        let seq = build_sequence(SequenceKind::Geometric { q: 2 }, k_max + 1, WeightPreset::Unit)
            .unwrap();
        DifferenceSumQuery::new(KernelSpec::Cesaro, seq, k_max, 1.0).unwrap()
    }

    #[test]
    fn sum_vanishes_at_zero_angle() {
        let q = cesaro_geometric(10);
        let v = q
            .difference_sum(Frequency::Torus(Angle::Real(0.0)))
            .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let q = cesaro_geometric(3);
        assert!(matches!(
            q.difference_sum(Frequency::Integer(5)),
            Err(EngineError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn single_point_plan_is_degenerate() {
        let q = cesaro_geometric(5);
        let est = estimate_supremum(
            &q,
            &SamplingPlan::Single(Frequency::Torus(Angle::Real(0.0))),
            false,
        )
        .unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.samples_used, 1);
    }

    #[test]
    fn estimate_value_is_attained_at_argmax() {
        let q = cesaro_geometric(8);
        let plan = SamplingPlan::Torus { grid: 512, log_samples: 512, seed: 3 };
        let est = estimate_supremum(&q, &plan, true).unwrap();
        let re_eval = q.difference_sum(est.argmax).unwrap();
        assert!((re_eval - est.value).abs() < 1e-10);
        assert!(est.refinement_gain >= 0.0);
    }

    #[test]
    fn scans_are_thread_count_invariant() {
        let q = cesaro_geometric(6);
        let plan = SamplingPlan::Torus { grid: 2000, log_samples: 2000, seed: 9 };
        let a = estimate_supremum(&q, &plan, true).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| estimate_supremum(&q, &plan, true).unwrap());
        assert_eq!(a.value, b.value);
        assert_eq!(a.argmax.key(), b.argmax.key());
    }

    #[test]
    fn window_probe_rejects_slow_growth() {
        let seq = build_sequence(SequenceKind::Geometric { q: 2 }, 6, WeightPreset::Unit).unwrap();
        let mu = FiniteMeasureZ::bernoulli_step();
        assert!(matches!(
            power_window_probe(&mu, &seq, 2.0, 3),
            Err(EngineError::WindowViolation { .. })
        ));
    }

    #[test]
    fn spectrum_at_one_is_guarded() {
        let mu = FiniteMeasureZ::bernoulli_step();
        assert!(matches!(
            geometric_tail_closed_form(&mu, 0.0),
            Err(EngineError::SpectrumAtOne { .. })
        ));
        // |μ̂(π)| = cos(π/2) rounds to ~6e-17, so the tail is tiny, not zero
        assert!(matches!(
            geometric_tail_closed_form(&mu, PI),
            Ok(v) if (0.0..1e-15).contains(&v)
        ));
    }

    #[test]
    fn triple_measure_has_unit_angular_ratio() {
        let mu = FiniteMeasureZ::symmetric_triple();
        for &theta in &[0.3, 1.0, 2.0, 3.0] {
            let (stolz, _) = spectral_region_ratios(&mu, theta).unwrap();
            assert!((stolz - 1.0).abs() < 1e-12, "stolz = {stolz} at {theta}");
        }
    }
}
