//! Exact discrete models: averaging on ℤ, difference operators, ℓ_p norms,
//! step functions on ℝ, and the point-mass computations that certify the
//! divergence lower bounds.

use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::multiplier::{cesaro_multiplier, Angle};
use crate::sequences::IndexSequence;
use crate::sum::Kahan;

#[derive(Debug, Error, PartialEq)]
pub enum DiscreteError {
    #[error("sequence ratio n_(k+1)/n_k fell below 2 (got {0})")]
    NonLacunary(f64),
    #[error("average span {0} exceeds the dense-array budget")]
    SpanTooWide(u128),
    #[error("cyclic grid of size {got} is smaller than the wrap-free minimum {need}")]
    GridTooSmall { got: u64, need: u64 },
}

// ─── functions on ℤ ─────────────────────────────────────────────────────────

/// Finitely supported real function on ℤ; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GridFunctionZ {
    entries: BTreeMap<i64, f64>,
}

impl GridFunctionZ {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(m: i64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(m, 1.0);
        GridFunctionZ { entries }
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Self {
        let mut f = Self::new();
        for (m, v) in pairs {
            f.set(m, f.get(m) + v);
        }
        f
    }

    pub fn set(&mut self, m: i64, v: f64) {
        if v == 0.0 {
            self.entries.remove(&m);
        } else {
            self.entries.insert(m, v);
        }
    }

    pub fn get(&self, m: i64) -> f64 {
        self.entries.get(&m).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.entries.iter().map(|(&m, &v)| (m, v))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// self += c·other
    pub fn add_scaled(&mut self, other: &GridFunctionZ, c: f64) {
        for (m, v) in other.support() {
            self.set(m, self.get(m) + c * v);
        }
    }

    /// ℓ_p norm; pass f64::INFINITY for the sup norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        assert!(p >= 1.0, "norms need p ≥ 1");
        if p.is_infinite() {
            return self
                .entries
                .values()
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
        }
        let mut acc = Kahan::new();
        for v in self.entries.values() {
            acc.add(v.abs().powf(p));
        }
        acc.value().powf(1.0 / p)
    }
}

/// m ↦ (1/n)·Σ_{k=1}^{n} φ(m+k), computed with prefix sums over the dense
/// support span. Support grows n steps to the left.
pub fn cesaro_average_z(phi: &GridFunctionZ, n: u64) -> Result<GridFunctionZ, DiscreteError> {
    assert!(n >= 1);
    if phi.is_zero() {
        return Ok(GridFunctionZ::new());
    }
    let lo = *phi.entries.keys().next().unwrap();
    let hi = *phi.entries.keys().next_back().unwrap();
    let span = (hi - lo + 1) as u128 + n as u128;
    if span > 100_000_000 {
        return Err(DiscreteError::SpanTooWide(span));
    }
    let width = (hi - lo + 1) as usize;
    // prefix[i] = Σ_{j < i} φ(lo + j)
    let mut prefix = vec![0.0f64; width + 1];
    for i in 0..width {
        prefix[i + 1] = prefix[i] + phi.get(lo + i as i64);
    }
    let window = |a: i64, b: i64| -> f64 {
        // Σ φ(j) over j in [a, b] clamped to the support span.
        let a = a.max(lo);
        let b = b.min(hi);
        if a > b {
            return 0.0;
        }
        prefix[(b - lo + 1) as usize] - prefix[(a - lo) as usize]
    };
    let mut out = GridFunctionZ::new();
    let n_i = n as i64;
    for m in (lo - n_i)..=(hi - 1) {
        let s = window(m + 1, m + n_i);
        if s != 0.0 {
            out.set(m, s / n as f64);
        }
    }
    Ok(out)
}

/// M_{n_{k+1}}φ − M_{n_k}φ for the k-th index pair (1-based).
pub fn difference_on_z(
    phi: &GridFunctionZ,
    seq: &IndexSequence,
    k: usize,
) -> Result<GridFunctionZ, DiscreteError> {
    let nk = term_as_u64(seq, k)?;
    let nk1 = term_as_u64(seq, k + 1)?;
    let mut b = cesaro_average_z(phi, nk1)?;
    let a = cesaro_average_z(phi, nk)?;
    b.add_scaled(&a, -1.0);
    Ok(b)
}

fn term_as_u64(seq: &IndexSequence, k: usize) -> Result<u64, DiscreteError> {
    let t = seq.term_int(k);
    u64::try_from(t).map_err(|_| DiscreteError::SpanTooWide(t))
}

// ─── point-mass block sums ──────────────────────────────────────────────────

/// Σ_{j=1}^{J} (n_{j+1} − n_j)/n_{j+1}: the exact value of
/// Σ_m sup_{k≤J} |Δ_k δ₀(m)| restricted to the blocks (−n_{j+1}, −n_j].
/// Uses closed-form ratios, so J may exceed any materializable range.
pub fn point_mass_block_sum(seq: &IndexSequence, j_max: usize) -> f64 {
    assert!(seq.is_integer_kind(), "block sums need integer indices");
    seq.ratio_deficit_sum(j_max)
}

/// The same quantity computed the slow way: materialize every Δ_j δ₀ and
/// sum max_j |Δ_j δ₀(m)| over the block union. Exact on its domain.
pub fn point_mass_block_sum_direct(
    seq: &IndexSequence,
    j_max: usize,
) -> Result<f64, DiscreteError> {
    let delta = GridFunctionZ::delta(0);
    let diffs: Vec<GridFunctionZ> = (1..=j_max)
        .map(|j| difference_on_z(&delta, seq, j))
        .collect::<Result<_, _>>()?;
    let n1 = term_as_u64(seq, 1)? as i64;
    let n_last = term_as_u64(seq, j_max + 1)? as i64;
    let mut acc = Kahan::new();
    for m in -n_last..=(-n1 - 1) {
        let best = diffs
            .iter()
            .fold(0.0f64, |b, d| b.max(d.get(m).abs()));
        acc.add(best);
    }
    Ok(acc.value())
}

// ─── step functions on ℝ ────────────────────────────────────────────────────

/// Piecewise constant, compactly supported function on ℝ: vals[i] holds on
/// (cuts[i], cuts[i+1]), zero outside [cuts.first, cuts.last].
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunctionR {
    cuts: Vec<f64>,
    vals: Vec<f64>,
}

impl StepFunctionR {
    pub fn new(cuts: Vec<f64>, vals: Vec<f64>) -> Self {
        assert!(cuts.len() >= 2 && vals.len() + 1 == cuts.len());
        assert!(
            cuts.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must increase strictly"
        );
        StepFunctionR { cuts, vals }
    }

    /// (scale)·1_{(−eps, eps)}
    pub fn scaled_box(eps: f64, scale: f64) -> Self {
        assert!(eps > 0.0);
        Self::new(vec![-eps, eps], vec![scale])
    }

    pub fn value_at(&self, x: f64) -> f64 {
        match self.cuts.iter().position(|&c| x < c) {
            Some(0) | None => 0.0,
            Some(i) => self.vals[i - 1],
        }
    }

    /// self − other on the merged breakpoint set.
    pub fn sub(&self, other: &StepFunctionR) -> StepFunctionR {
        let mut cuts: Vec<f64> = self
            .cuts
            .iter()
            .chain(other.cuts.iter())
            .copied()
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let vals = cuts
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                self.value_at(mid) - other.value_at(mid)
            })
            .collect();
        StepFunctionR { cuts, vals }
    }

    /// ∫ f², exact: Σ v_i²·(x_{i+1} − x_i).
    pub fn square_integral(&self) -> f64 {
        let mut acc = Kahan::new();
        for (i, v) in self.vals.iter().enumerate() {
            acc.add(v * v * (self.cuts[i + 1] - self.cuts[i]));
        }
        acc.value()
    }
}

/// ∫ |g_k|² for g_k = (1/ε_k)1_{(−ε_k,ε_k)} − (1/ε_{k+1})1_{(−ε_{k+1},ε_{k+1})},
/// returned as (numeric from the step representation, closed form
/// 2(1/ε_{k+1} − 1/ε_k)).
pub fn box_difference_l2(eps_k: f64, eps_k1: f64) -> (f64, f64) {
    assert!(
        0.0 < eps_k1 && eps_k1 < eps_k,
        "scales must decrease strictly"
    );
    let g = StepFunctionR::scaled_box(eps_k, 1.0 / eps_k)
        .sub(&StepFunctionR::scaled_box(eps_k1, 1.0 / eps_k1));
    let closed = 2.0 * (1.0 / eps_k1 - 1.0 / eps_k);
    (g.square_integral(), closed)
}

// ─── cross-domain consistency ───────────────────────────────────────────────

/// ‖Δ_kφ‖₂ two ways: directly on ℤ, and through the multiplier symbol on a
/// cyclic grid of size q large enough that no average wraps. Returns
/// (grid value, symbol-side value); the two agree to ~1e−9 when q is valid.
pub fn parseval_difference_l2(
    phi: &GridFunctionZ,
    seq: &IndexSequence,
    k: usize,
    q: u64,
) -> Result<(f64, f64), DiscreteError> {
    let diff = difference_on_z(phi, seq, k)?;
    let lhs = diff.lp_norm(2.0);

    let width = if phi.is_zero() {
        0
    } else {
        let lo = *phi.entries.keys().next().unwrap();
        let hi = *phi.entries.keys().next_back().unwrap();
        (hi - lo + 1) as u64
    };
    let need = 4 * (term_as_u64(seq, k + 1)? + width);
    if q < need {
        return Err(DiscreteError::GridTooSmall { got: q, need });
    }

    let nk = seq.term_int(k);
    let nk1 = seq.term_int(k + 1);
    let mut acc = Kahan::new();
    for j in 0..q {
        // θ_j = 2πj/q as an exact rational angle.
        let angle = Angle::rational_pi(2 * j as i64, q).expect("grid denominator in range");
        let symbol = (cesaro_multiplier(nk1, angle) - cesaro_multiplier(nk, angle)).norm_sqr();
        let mut hat = Complex64::new(0.0, 0.0);
        for (m, v) in phi.support() {
            let t = -2.0 * std::f64::consts::PI * (j as f64) * (m as f64) / q as f64;
            hat += v * Complex64::new(t.cos(), t.sin());
        }
        acc.add(symbol * hat.norm_sqr());
    }
    let rhs = (acc.value() / q as f64).sqrt();
    Ok((lhs, rhs))
}

/// ‖Σ_{k≤K} c_k Δ_kφ‖_p / ‖φ‖_p for a lacunary index family (ratio ≥ 2).
pub fn lacunary_lp_ratio(
    seq: &IndexSequence,
    p: f64,
    phi: &GridFunctionZ,
    coefficients: &[Complex64],
    k_max: usize,
) -> Result<f64, DiscreteError> {
    assert!(p > 1.0 && p.is_finite(), "p must lie in (1, ∞)");
    assert!(coefficients.len() >= k_max, "need one coefficient per term");
    assert!(
        coefficients.iter().all(|c| c.norm() <= 1.0 + 1e-12),
        "coefficients must lie in the closed unit disk"
    );
    let ratio = seq.lacunarity_constant(k_max + 1);
    if ratio < 2.0 {
        return Err(DiscreteError::NonLacunary(ratio));
    }
    let mut re = GridFunctionZ::new();
    let mut im = GridFunctionZ::new();
    for k in 1..=k_max {
        let d = difference_on_z(phi, seq, k)?;
        re.add_scaled(&d, coefficients[k - 1].re);
        im.add_scaled(&d, coefficients[k - 1].im);
    }
    let mut acc = Kahan::new();
    let mut keys: Vec<i64> = re.entries.keys().copied().collect();
    keys.extend(im.entries.keys());
    keys.sort_unstable();
    keys.dedup();
    for m in keys {
        let mag2 = re.get(m) * re.get(m) + im.get(m) * im.get(m);
        acc.add(mag2.powf(p / 2.0));
    }
    Ok(acc.value().powf(1.0 / p) / phi.lp_norm(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{build_sequence, SequenceKind, WeightPreset};

    fn geometric(count: usize) -> IndexSequence {
        build_sequence(SequenceKind::Geometric { q: 2 }, count, WeightPreset::Unit).unwrap()
    }

    #[test]
    fn average_of_point_mass() {
        let avg = cesaro_average_z(&GridFunctionZ::delta(0), 3).unwrap();
        for m in [-3, -2, -1] {
            assert!((avg.get(m) - 1.0 / 3.0).abs() < 1e-16);
        }
        assert_eq!(avg.get(0), 0.0);
        assert_eq!(avg.support_len(), 3);
    }

    #[test]
    fn average_of_two_points() {
        let phi = GridFunctionZ::from_pairs([(0, 1.0), (1, 1.0)]);
        let avg = cesaro_average_z(&phi, 2).unwrap();
        assert_eq!(avg.get(-2), 0.5);
        assert_eq!(avg.get(-1), 1.0);
        assert_eq!(avg.get(0), 0.5);
    }

    #[test]
    fn difference_of_first_pair() {
        // n-pair (1, 2) on δ₀: {−2: 1/2, −1: −1/2}
        let seq = build_sequence(
            SequenceKind::ExplicitIntegers(vec![1, 2]),
            2,
            WeightPreset::Unit,
        )
        .unwrap();
        let d = difference_on_z(&GridFunctionZ::delta(0), &seq, 1).unwrap();
        assert_eq!(d.get(-2), 0.5);
        assert_eq!(d.get(-1), -0.5);
        assert_eq!(d.support_len(), 2);
    }

    #[test]
    fn averages_contract_every_lp_norm() {
        let phi = GridFunctionZ::from_pairs([(0, 3.0), (1, -4.0), (5, 2.0)]);
        for n in [1u64, 2, 7, 30] {
            let avg = cesaro_average_z(&phi, n).unwrap();
            for p in [1.0, 1.5, 2.0, f64::INFINITY] {
                assert!(avg.lp_norm(p) <= phi.lp_norm(p) + 1e-12);
            }
        }
    }

    #[test]
    fn norms_of_simple_grids() {
        let g = GridFunctionZ::from_pairs([(0, 3.0), (1, -4.0)]);
        assert_eq!(g.lp_norm(2.0), 5.0);
        assert_eq!(g.lp_norm(f64::INFINITY), 4.0);
        assert_eq!(GridFunctionZ::delta(7).lp_norm(1.0), 1.0);
    }

    #[test]
    fn block_sum_formula_vs_direct() {
        let seq = geometric(8);
        let formula = point_mass_block_sum(&seq, 6);
        assert_eq!(formula, 3.0); // six halves
        let direct = point_mass_block_sum_direct(&seq, 6).unwrap();
        assert!((formula - direct).abs() < 1e-12, "direct = {direct}");
    }

    #[test]
    fn box_difference_identity_examples() {
        let (n, c) = box_difference_l2(1.0, 0.5);
        assert_eq!(c, 2.0);
        assert!((n - c).abs() < 1e-12);
        let (n, c) = box_difference_l2(0.5, 0.25);
        assert_eq!(c, 4.0);
        assert!((n - c).abs() < 1e-12);
    }

    #[test]
    fn parseval_two_ways() {
        let seq = geometric(4);
        let phi = GridFunctionZ::from_pairs([(0, 1.0), (1, -2.0), (3, 1.5)]);
        let (lhs, rhs) = parseval_difference_l2(&phi, &seq, 2, 256).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "lhs = {lhs}, rhs = {rhs}");
    }

    #[test]
    fn grid_too_small_is_reported() {
        let seq = geometric(4);
        let phi = GridFunctionZ::delta(0);
        assert!(matches!(
            parseval_difference_l2(&phi, &seq, 3, 16),
            Err(DiscreteError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn lacunary_ratio_rejects_slow_sequences() {
        let slow = build_sequence(SequenceKind::Identity, 10, WeightPreset::Unit).unwrap();
        let phi = GridFunctionZ::delta(0);
        let ones = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            lacunary_lp_ratio(&slow, 2.0, &phi, &ones, 4),
            Err(DiscreteError::NonLacunary(_))
        ));
    }

    #[test]
    fn lacunary_ratio_zero_coefficients() {
        let seq = geometric(6);
        let phi = GridFunctionZ::delta(0);
        let zero = vec![Complex64::new(0.0, 0.0); 5];
        let r = lacunary_lp_ratio(&seq, 2.0, &phi, &zero, 5).unwrap();
        assert_eq!(r, 0.0);
    }
}
