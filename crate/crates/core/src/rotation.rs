//! Irrational circle rotations acting on piecewise linear functions.
//!
//! Functions live on the unit circle [0, 1) with exact breakpoint
//! bookkeeping: translation moves breakpoints without touching values, sums
//! merge breakpoint sets, and sup norms read off breakpoint values directly.
//! Queries within 1e−13 of a breakpoint snap onto it, so orbits of the same
//! point computed along different floating-point routes stay identified.

use rayon::prelude::*;
use thiserror::Error;

use crate::sequences::IndexSequence;
use crate::sum::Kahan;

const MERGE_TOL: f64 = 1e-13;
const EXACT_WORK_BUDGET: u128 = 10_000_000;
const GRID_WORK_BUDGET: u128 = 1_000_000_000;
const DOWNGRADE_GRID: usize = 1 << 16;

#[derive(Debug, Error, PartialEq)]
pub enum RotationError {
    #[error("rotation number {0} lies outside (0, 1)")]
    BadRotation(f64),
    #[error("no admissible second center among {candidates} candidates")]
    PlacementFailure { candidates: usize },
    #[error("average needs {needed} breakpoint operations, over budget")]
    BreakpointBudget { needed: u128 },
}

/// Rotation number α in (0, 1); x ↦ x + α mod 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationNumber(f64);

impl RotationNumber {
    pub fn new(alpha: f64) -> Result<Self, RotationError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(RotationError::BadRotation(alpha));
        }
        Ok(RotationNumber(alpha))
    }

    /// (√5 − 1)/2, the golden rotation.
    pub fn golden() -> Self {
        RotationNumber((5.0f64.sqrt() - 1.0) / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// x reduced into [0, 1).
pub fn wrap01(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d).max(0.0)
}

// ─── piecewise linear circle functions ──────────────────────────────────────

/// Continuous piecewise linear function on the circle. Breakpoints are
/// strictly increasing positions in [0, 1); the function interpolates
/// linearly between consecutive breakpoints and wraps from the last back to
/// the first.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearCircleFn {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinearCircleFn {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert!(!xs.is_empty() && xs.len() == ys.len());
        assert!(xs.iter().all(|&x| (0.0..1.0).contains(&x)));
        assert!(
            xs.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must increase strictly"
        );
        PiecewiseLinearCircleFn { xs, ys }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![0.0], vec![c])
    }

    /// Sorts, then merges points closer than the breakpoint tolerance.
    pub fn from_points(mut pts: Vec<(f64, f64)>) -> Self {
        assert!(!pts.is_empty());
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts.dedup_by(|next, kept| (next.0 - kept.0) <= MERGE_TOL);
        // a point within tolerance of first + 1 duplicates the first
        if pts.len() > 1 && pts[0].0 + 1.0 - pts.last().unwrap().0 <= MERGE_TOL {
            pts.pop();
        }
        let (xs, ys) = pts.into_iter().unzip();
        Self::new(xs, ys)
    }

    pub fn breakpoint_count(&self) -> usize {
        self.xs.len()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Segment of x: (x0, y0, x1, y1) with x0 ≤ x < x1 after unwrapping.
    fn segment(&self, x: f64) -> (f64, f64, f64, f64) {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&c| c <= x);
        if i == 0 {
            (self.xs[n - 1] - 1.0, self.ys[n - 1], self.xs[0], self.ys[0])
        } else if i == n {
            (self.xs[n - 1], self.ys[n - 1], self.xs[0] + 1.0, self.ys[0])
        } else {
            (self.xs[i - 1], self.ys[i - 1], self.xs[i], self.ys[i])
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.xs.len() == 1 {
            return self.ys[0];
        }
        let x = wrap01(x);
        let (x0, y0, x1, y1) = self.segment(x);
        // snap: breakpoint values are authoritative near breakpoints
        if (x - x0).abs() <= MERGE_TOL {
            return y0;
        }
        if (x1 - x).abs() <= MERGE_TOL {
            return y1;
        }
        y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    }

    /// Slope of the segment containing x (taking the segment that starts at
    /// x when x is a breakpoint).
    fn slope_at(&self, x: f64) -> f64 {
        if self.xs.len() == 1 {
            return 0.0;
        }
        let (x0, y0, x1, y1) = self.segment(wrap01(x));
        (y1 - y0) / (x1 - x0)
    }

    /// Exact: piecewise linear functions attain extremes at breakpoints.
    pub fn sup_norm(&self) -> f64 {
        self.ys.iter().fold(0.0f64, |m, y| m.max(y.abs()))
    }

    /// ∫₀¹ f, exact trapezoid sums over the segments.
    pub fn mean(&self) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        let mut acc = Kahan::new();
        for i in 0..n {
            let (x0, y0) = (self.xs[i], self.ys[i]);
            let (x1, y1) = if i + 1 == n {
                (self.xs[0] + 1.0, self.ys[0])
            } else {
                (self.xs[i + 1], self.ys[i + 1])
            };
            acc.add(0.5 * (y0 + y1) * (x1 - x0));
        }
        acc.value()
    }

    /// g with g(x) = f(x − a): shifts breakpoints, keeps values bit-exact.
    pub fn translate(&self, a: f64) -> Self {
        let a = wrap01(a);
        if a == 0.0 {
            return self.clone();
        }
        let n = self.xs.len();
        let split = self.xs.partition_point(|&x| x + a < 1.0);
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for i in split..n {
            xs.push(self.xs[i] + a - 1.0);
            ys.push(self.ys[i]);
        }
        for i in 0..split {
            xs.push(self.xs[i] + a);
            ys.push(self.ys[i]);
        }
        Self::new(xs, ys)
    }

    fn combine(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let mut xs: Vec<f64> = self.xs.iter().chain(other.xs.iter()).copied().collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|next, kept| (*next - *kept) <= MERGE_TOL);
        if xs.len() > 1 && xs[0] + 1.0 - *xs.last().unwrap() <= MERGE_TOL {
            xs.pop();
        }
        let ys = xs.iter().map(|&x| op(self.eval(x), other.eval(x))).collect();
        Self::new(xs, ys)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.xs.clone(), self.ys.iter().map(|y| c * y).collect())
    }

    /// |f|: inserts a breakpoint at every sign crossing, then folds values.
    pub fn abs(&self) -> Self {
        let n = self.xs.len();
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n + 8);
        for i in 0..n {
            let (x0, y0) = (self.xs[i], self.ys[i]);
            let (x1, y1) = if i + 1 == n {
                (self.xs[0] + 1.0, self.ys[0])
            } else {
                (self.xs[i + 1], self.ys[i + 1])
            };
            pts.push((x0, y0.abs()));
            if y0 * y1 < 0.0 {
                let cross = x0 + (x1 - x0) * y0 / (y0 - y1);
                pts.push((wrap01(cross), 0.0));
            }
        }
        Self::from_points(pts)
    }
}

// ─── rotation averages ──────────────────────────────────────────────────────

#[derive(Clone, Debug)]
pub struct AverageOutcome {
    pub function: PiecewiseLinearCircleFn,
    /// True when the breakpoint budget forced evaluation on a uniform grid
    /// instead of the exact merged-breakpoint representation.
    pub downgraded: bool,
}

/// (1/n) Σ_{j=v+1}^{v+n} f(x + jα): the ergodic average along the rotation
/// orbit, exact while n times the breakpoint count stays within budget.
pub fn rotation_average(
    f: &PiecewiseLinearCircleFn,
    alpha: RotationNumber,
    n: u64,
    v: u64,
) -> Result<AverageOutcome, RotationError> {
    assert!(n >= 1);
    let b = f.xs.len() as u128;
    let work = n as u128 * b;
    if work > GRID_WORK_BUDGET {
        return Err(RotationError::BreakpointBudget { needed: work });
    }
    if b == 1 {
        return Ok(AverageOutcome {
            function: f.clone(),
            downgraded: false,
        });
    }
    let shifts: Vec<f64> = (1..=n)
        .map(|j| orbit_multiple(-((v + j) as f64), alpha.value()))
        .collect();
    if work > EXACT_WORK_BUDGET {
        return Ok(AverageOutcome {
            function: grid_average(f, &shifts),
            downgraded: true,
        });
    }

    // merged breakpoint positions of every translate
    let mut xs: Vec<f64> = Vec::with_capacity((n as usize) * f.xs.len());
    for &a in &shifts {
        for &x in &f.xs {
            let s = x + a;
            xs.push(if s >= 1.0 { s - 1.0 } else { s });
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|next, kept| (*next - *kept) <= MERGE_TOL);
    if xs.len() > 1 && xs[0] + 1.0 - *xs.last().unwrap() <= MERGE_TOL {
        xs.pop();
    }

    let eval_work = xs.len() as u128 * n as u128;
    let inv_n = 1.0 / n as f64;
    let ys: Vec<f64> = if eval_work <= 50_000_000 {
        // direct: every merged point sums all translates, snap keeps
        // breakpoint values exact
        xs.par_iter()
            .map(|&x| {
                let mut acc = Kahan::new();
                for &a in &shifts {
                    acc.add(f.eval(x - a));
                }
                acc.value() * inv_n
            })
            .collect()
    } else {
        sweep_values(f, &shifts, &xs)
            .into_iter()
            .map(|v| v * inv_n)
            .collect()
    };
    Ok(AverageOutcome {
        function: PiecewiseLinearCircleFn::new(xs, ys),
        downgraded: false,
    })
}

/// Values of Σ_t f(x − a_t) at the merged positions, by slope sweeping:
/// anchor the value at xs[0], then integrate the running total slope.
fn sweep_values(f: &PiecewiseLinearCircleFn, shifts: &[f64], xs: &[f64]) -> Vec<f64> {
    let b = f.xs.len();
    // slope of segment starting at breakpoint i, wrap segment at b−1
    let mut seg_slope = vec![0.0f64; b];
    for i in 0..b {
        let (x0, y0) = (f.xs[i], f.ys[i]);
        let (x1, y1) = if i + 1 == b {
            (f.xs[0] + 1.0, f.ys[0])
        } else {
            (f.xs[i + 1], f.ys[i + 1])
        };
        seg_slope[i] = (y1 - y0) / (x1 - x0);
    }
    let dslope: Vec<f64> = (0..b)
        .map(|i| seg_slope[i] - seg_slope[(i + b - 1) % b])
        .collect();

    let mut events: Vec<(f64, f64)> = Vec::with_capacity(shifts.len() * b);
    for &a in shifts {
        for i in 0..b {
            let s = f.xs[i] + a;
            events.push((if s >= 1.0 { s - 1.0 } else { s }, dslope[i]));
        }
    }
    events.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());

    // group event slopes onto the nearest merged position
    let mut groups = vec![0.0f64; xs.len()];
    let mut gi = 0usize;
    for &(pos, ds) in &events {
        while gi + 1 < xs.len() && (xs[gi + 1] - pos).abs() < (pos - xs[gi]).abs() {
            gi += 1;
        }
        groups[gi] += ds;
    }

    // anchor value and the slope on the wrap interval before xs[0]
    let mut v0 = Kahan::new();
    let mid = wrap01(0.5 * (*xs.last().unwrap() + xs[0] + 1.0));
    let mut slope = Kahan::new();
    for &a in shifts {
        v0.add(f.eval(xs[0] - a));
        slope.add(f.slope_at(mid - a));
    }

    let mut values = Vec::with_capacity(xs.len());
    let mut running = Kahan::new();
    running.add(v0.value());
    for j in 0..xs.len() {
        values.push(running.value());
        slope.add(groups[j]);
        if j + 1 < xs.len() {
            running.add(slope.value() * (xs[j + 1] - xs[j]));
        }
    }
    values
}

/// Budget fallback: accumulate every translated segment onto a uniform grid
/// with difference arrays, O(n·b + grid).
fn grid_average(f: &PiecewiseLinearCircleFn, shifts: &[f64]) -> PiecewiseLinearCircleFn {
    let g = DOWNGRADE_GRID;
    let gf = g as f64;
    // value at cell i accumulates as const[i] + lin[i]·(i/g)
    let mut d_const = vec![0.0f64; g + 1];
    let mut d_lin = vec![0.0f64; g + 1];
    let b = f.xs.len();
    let mut add_ramp = |lo: f64, hi: f64, y0: f64, slope: f64, x0: f64| {
        // f(x) = y0 + slope·(x − x0) on [lo, hi) ⊂ [0, 1)
        let i0 = (lo * gf).ceil() as usize;
        let i1 = ((hi * gf).ceil() as usize).min(g);
        if i0 >= i1 {
            return;
        }
        d_const[i0] += y0 - slope * x0;
        d_const[i1] -= y0 - slope * x0;
        d_lin[i0] += slope;
        d_lin[i1] -= slope;
    };
    for &a in shifts {
        for i in 0..b {
            let (x0, y0) = (f.xs[i], f.ys[i]);
            let (x1, y1) = if i + 1 == b {
                (f.xs[0] + 1.0, f.ys[0])
            } else {
                (f.xs[i + 1], f.ys[i + 1])
            };
            let slope = (y1 - y0) / (x1 - x0);
            let lo_raw = x0 + a;
            let hi_raw = x1 + a;
            let lo = if lo_raw >= 1.0 { lo_raw - 1.0 } else { lo_raw };
            let hi = if hi_raw > 1.0 { hi_raw - 1.0 } else { hi_raw };
            if lo < hi {
                add_ramp(lo, hi, y0, slope, lo);
            } else {
                // segment wraps across 0: the tail measures x from lo − 1
                add_ramp(lo, 1.0, y0, slope, lo);
                add_ramp(0.0, hi, y0, slope, lo - 1.0);
            }
        }
    }
    // prefix-sum the difference arrays
    let inv_n = 1.0 / shifts.len() as f64;
    let mut xs = Vec::with_capacity(g);
    let mut ys = Vec::with_capacity(g);
    let mut c = 0.0f64;
    let mut l = 0.0f64;
    for i in 0..g {
        c += d_const[i];
        l += d_lin[i];
        xs.push(i as f64 / gf);
        ys.push((c + l * (i as f64 / gf)) * inv_n);
    }
    PiecewiseLinearCircleFn::new(xs, ys)
}

// ─── orbit geometry and tent pairs ──────────────────────────────────────────

/// (mult · α) mod 1 with the product's rounding residue restored via fused
/// multiply-add. A plain `wrap01(mult * alpha)` loses absolute accuracy as
/// the product grows (an ulp of 1236 is 2.3e-13, already past the snap
/// tolerance), while this stays within an ulp of 1 for any |mult| < 2^52.
pub fn orbit_multiple(mult: f64, alpha: f64) -> f64 {
    let p = mult * alpha;
    let e = mult.mul_add(alpha, -p);
    wrap01(wrap01(p - p.trunc()) + e)
}

/// min over 1 ≤ d ≤ max_mult of the circle distance from d·α to 0.
pub fn min_orbit_gap(alpha: RotationNumber, max_mult: u64) -> f64 {
    assert!(max_mult >= 1);
    (1..=max_mult)
        .map(|d| circle_dist(orbit_multiple(d as f64, alpha.value()), 0.0))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug)]
pub struct TentPairConfig {
    /// Ladder half length L: tents sit on orbit points 1..=2L.
    pub l_half: usize,
    /// Arc length λ of every tent support.
    pub arc_length: f64,
    pub center_a: f64,
    pub center_b: f64,
    /// Minimal orbit gap that sized λ.
    pub orbit_gap: f64,
}

const PLACEMENT_CANDIDATES: usize = 10_000;

/// Two opposing ladders of tents along the rotation orbit: heights
/// min(l, 2L+1−l)/L on arcs of length λ = gap/8 at c_a + lα, minus the same
/// ladder at c_b + lα. Sup norm 1 attained, mean 0, all arcs disjoint.
pub fn build_tent_pair(
    alpha: RotationNumber,
    l_half: usize,
) -> Result<(PiecewiseLinearCircleFn, TentPairConfig), RotationError> {
    assert!(l_half >= 1);
    let two_l = 2 * l_half;
    let gap = min_orbit_gap(alpha, 4 * l_half as u64);
    let lambda = gap / 8.0;

    // deterministic scan for a second center clear of the whole orbit
    let orbit: Vec<f64> = (-(two_l as i64)..=two_l as i64)
        .map(|d| orbit_multiple(d as f64, alpha.value()))
        .collect();
    let mut center_b = None;
    for i in 0..PLACEMENT_CANDIDATES {
        let t = (i as f64 + 0.5) / PLACEMENT_CANDIDATES as f64;
        if orbit.iter().all(|&p| circle_dist(t, p) >= 2.0 * lambda) {
            center_b = Some(t);
            break;
        }
    }
    let center_b = center_b.ok_or(RotationError::PlacementFailure {
        candidates: PLACEMENT_CANDIDATES,
    })?;

    let ladder = |l: usize| l.min(two_l + 1 - l) as f64 / l_half as f64;
    let mut centers: Vec<(f64, f64)> = Vec::with_capacity(2 * two_l);
    for l in 1..=two_l {
        let s = ladder(l);
        centers.push((orbit_multiple(l as f64, alpha.value()), s));
        centers.push((wrap01(center_b + orbit_multiple(l as f64, alpha.value())), -s));
    }

    // exhaustive disjointness: adjacent sorted centers at least 2λ apart
    let mut sorted: Vec<f64> = centers.iter().map(|&(c, _)| c).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in 0..sorted.len() {
        let next = if w + 1 == sorted.len() {
            sorted[0] + 1.0
        } else {
            sorted[w + 1]
        };
        if next - sorted[w] < 2.0 * lambda * (1.0 - 1e-9) {
            return Err(RotationError::PlacementFailure {
                candidates: PLACEMENT_CANDIDATES,
            });
        }
    }

    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(3 * centers.len());
    for &(c, h) in &centers {
        pts.push((wrap01(c - 0.5 * lambda), 0.0));
        pts.push((c, h));
        pts.push((wrap01(c + 0.5 * lambda), 0.0));
    }
    let f = PiecewiseLinearCircleFn::from_points(pts);
    debug_assert_eq!(f.sup_norm(), 1.0);
    debug_assert!(f.mean().abs() <= 1e-12);
    Ok((
        f,
        TentPairConfig {
            l_half,
            arc_length: lambda,
            center_a: 0.0,
            center_b,
            orbit_gap: gap,
        },
    ))
}

/// sup |f(x + jα) − f(x)|.
pub fn invariance_deficit(
    f: &PiecewiseLinearCircleFn,
    alpha: RotationNumber,
    j: u64,
) -> f64 {
    let shifted = f.translate(orbit_multiple(-(j as f64), alpha.value()));
    shifted.sub(f).sup_norm()
}

/// F − F∘α, the canonical mean-zero coboundary of F.
pub fn coboundary(f_big: &PiecewiseLinearCircleFn, alpha: RotationNumber) -> PiecewiseLinearCircleFn {
    f_big.sub(&f_big.translate(wrap01(-alpha.value())))
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesRow {
    pub k: usize,
    pub n: u64,
    /// ‖M_{n_k} f‖_∞
    pub sup_norm: f64,
    /// Σ_{m ≤ k} ‖M_{n_m} f‖_∞
    pub sup_sum: f64,
    /// ‖Σ_{m ≤ k} |M_{n_m} f|‖_∞, never above sup_sum
    pub stacked_sup: f64,
    pub downgraded: bool,
}

/// Averages f along n_1 < n_2 < … and tracks both the sum of sup norms and
/// the sup of the stacked absolute averages.
pub fn series_diagnostics(
    f: &PiecewiseLinearCircleFn,
    alpha: RotationNumber,
    seq: &IndexSequence,
    k_max: usize,
) -> Result<Vec<SeriesRow>, RotationError> {
    assert!(k_max >= 1);
    let mut rows = Vec::with_capacity(k_max);
    let mut sum = Kahan::new();
    let mut stack: Option<PiecewiseLinearCircleFn> = None;
    for k in 1..=k_max {
        let n = u64::try_from(seq.term_int(k))
            .map_err(|_| RotationError::BreakpointBudget { needed: u128::MAX })?;
        let avg = rotation_average(f, alpha, n, 0)?;
        let sup = avg.function.sup_norm();
        sum.add(sup);
        let folded = avg.function.abs();
        let next = match &stack {
            None => folded,
            Some(s) => s.add(&folded),
        };
        let stacked_sup = next.sup_norm();
        stack = Some(next);
        rows.push(SeriesRow {
            k,
            n,
            sup_norm: sup,
            sup_sum: sum.value(),
            stacked_sup,
            downgraded: avg.downgraded,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{build_sequence, SequenceKind, WeightPreset};

    fn tent(center: f64, half_width: f64, height: f64) -> PiecewiseLinearCircleFn {
        PiecewiseLinearCircleFn::from_points(vec![
            (wrap01(center - half_width), 0.0),
            (center, height),
            (wrap01(center + half_width), 0.0),
        ])
    }

    #[test]
    fn eval_interpolates_and_wraps() {
        let f = PiecewiseLinearCircleFn::new(vec![0.0, 0.5], vec![1.0, 3.0]);
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.eval(0.25), 2.0);
        assert_eq!(f.eval(0.5), 3.0);
        assert_eq!(f.eval(0.75), 2.0);
        assert_eq!(f.eval(1.0), 1.0);
    }

    #[test]
    fn translate_moves_a_tent() {
        let f = tent(0.25, 0.05, 1.0);
        let g = f.translate(0.5);
        assert_eq!(g.eval(0.75), 1.0);
        assert_eq!(g.eval(0.25), 0.0);
        assert_eq!(g.sup_norm(), f.sup_norm());
    }

    #[test]
    fn translate_is_an_exact_isometry_under_composition() {
        let f = tent(0.9, 0.03, -2.5);
        let mut g = f.clone();
        for _ in 0..10 {
            g = g.translate(0.137);
        }
        assert_eq!(g.sup_norm(), f.sup_norm());
    }

    #[test]
    fn mean_of_tent_is_half_base_times_height() {
        let f = tent(0.3, 0.1, 1.0);
        assert!((f.mean() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn abs_inserts_zero_crossings() {
        let f = PiecewiseLinearCircleFn::new(vec![0.0, 0.5], vec![-1.0, 1.0]);
        let a = f.abs();
        assert_eq!(a.eval(0.25), 0.0);
        assert_eq!(a.eval(0.0), 1.0);
        assert!((a.mean() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn average_of_constant_is_itself() {
        let f = PiecewiseLinearCircleFn::constant(2.0);
        let avg = rotation_average(&f, RotationNumber::golden(), 100, 0).unwrap();
        assert!(!avg.downgraded);
        assert_eq!(avg.function.eval(0.3), 2.0);
    }

    #[test]
    fn average_telescopes_for_coboundaries() {
        let alpha = RotationNumber::golden();
        let big = tent(0.2, 0.07, 1.3);
        let g = coboundary(&big, alpha);
        assert!(g.mean().abs() < 1e-13);
        for n in [3u64, 17, 80] {
            let avg = rotation_average(&g, alpha, n, 0).unwrap();
            let first = big.translate(wrap01(-alpha.value()));
            let last = big.translate(orbit_multiple(-((n + 1) as f64), alpha.value()));
            let target = first.sub(&last).scale(1.0 / n as f64);
            let diff = avg.function.sub(&target).sup_norm();
            assert!(diff < 1e-12, "n = {n}: telescoping off by {diff}");
        }
    }

    #[test]
    fn sweep_and_direct_paths_agree() {
        let alpha = RotationNumber::golden();
        let f = tent(0.4, 0.02, 1.0);
        let shifts: Vec<f64> = (1..=50u64)
            .map(|j| orbit_multiple(-(j as f64), alpha.value()))
            .collect();
        let mut xs: Vec<f64> = Vec::new();
        for &a in &shifts {
            for (x, _) in f.breakpoints() {
                let s = x + a;
                xs.push(if s >= 1.0 { s - 1.0 } else { s });
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|next, kept| (*next - *kept) <= MERGE_TOL);
        let swept = sweep_values(&f, &shifts, &xs);
        for (j, &x) in xs.iter().enumerate() {
            let direct: f64 = shifts.iter().map(|&a| f.eval(x - a)).sum();
            assert!(
                (swept[j] - direct).abs() < 1e-10,
                "x = {x}: sweep {} vs direct {direct}",
                swept[j]
            );
        }
    }

    #[test]
    fn grid_downgrade_approximates_the_average() {
        let alpha = RotationNumber::golden();
        let f = tent(0.4, 0.1, 1.0);
        let shifts: Vec<f64> = (1..=5u64)
            .map(|j| orbit_multiple(-(j as f64), alpha.value()))
            .collect();
        let g = grid_average(&f, &shifts);
        let exact = rotation_average(&f, alpha, 5, 0).unwrap().function;
        for x in [0.1, 0.33, 0.61, 0.92] {
            assert!((g.eval(x) - exact.eval(x)).abs() < 1e-3);
        }
    }

    #[test]
    fn orbit_gap_golden_small_range() {
        let alpha = RotationNumber::golden();
        let gap = min_orbit_gap(alpha, 4);
        // distances of α, 2α, 3α, 4α from 0: the closest is 3α, at 2 − 3α ≈ 0.146
        assert!((gap - (2.0 - 3.0 * alpha.value())).abs() < 1e-15);
    }

    #[test]
    fn tent_pair_small_ladder() {
        let alpha = RotationNumber::golden();
        let (f, cfg) = build_tent_pair(alpha, 5).unwrap();
        assert_eq!(f.sup_norm(), 1.0);
        assert!(f.mean().abs() < 1e-12);
        assert_eq!(cfg.l_half, 5);
        assert!(cfg.arc_length > 0.0);
        // tents present at the first orbit point with ladder height 1/L
        let p = wrap01(alpha.value());
        assert!((f.eval(p) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn invariance_deficit_matches_ladder_step() {
        let alpha = RotationNumber::golden();
        let (f, _) = build_tent_pair(alpha, 10).unwrap();
        for j in 1..=3u64 {
            let d = invariance_deficit(&f, alpha, j);
            assert!(
                d <= j as f64 / 10.0 + 1e-12,
                "j = {j}: deficit {d} exceeds {}",
                j as f64 / 10.0
            );
        }
    }

    #[test]
    fn diagnostics_stack_below_sum() {
        let alpha = RotationNumber::golden();
        let (f, _) = build_tent_pair(alpha, 5).unwrap();
        let seq = build_sequence(SequenceKind::Identity, 6, WeightPreset::Unit).unwrap();
        let rows = series_diagnostics(&f, alpha, &seq, 4).unwrap();
        for row in &rows {
            assert!(row.stacked_sup <= row.sup_sum + 1e-12);
            assert!(!row.downgraded);
        }
        assert!(rows.windows(2).all(|w| w[0].sup_sum <= w[1].sup_sum));
    }
}
