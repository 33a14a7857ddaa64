//! Index families (n_k), scale families (ε_k), and weight families (w_k).
//!
//! Integer kinds increase strictly; real kinds decrease to zero. Formula
//! kinds answer term queries lazily, so truncations like J = 10⁴ of n_k = 2^k
//! work through closed-form ratios without materializing numbers that no
//! integer type could hold.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SequenceError {
    #[error("bad sequence parameter: {0}")]
    BadParameter(String),
    #[error("term {k} of {kind} exceeds the 2^64 exact-phase range")]
    Overflow { kind: &'static str, k: usize },
}

/// The family shapes named across the criteria.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceKind {
    /// n_k = k
    Identity,
    /// n_k = round(k^p), p > 1
    Power { p: f64 },
    /// n_k = q^k, q ≥ 2
    Geometric { q: u32 },
    /// n_k = q^{q^k}, clamped so terms stay ≤ 2^64
    DoubleExp { q: u32 },
    /// φ(k) equally spaced integers in each block [2^k, 2^{k+1});
    /// counts[i] = φ(i+1)
    DyadicBlocks { counts: Vec<u64> },
    ExplicitIntegers(Vec<u128>),
    /// ε_k = 2^{−k}
    ReciprocalDyadic,
    /// ε_k = 1/k
    ReciprocalIdentity,
    /// ε_k = r^k, 0 < r < 1
    ReciprocalRatio { r: f64 },
    ExplicitReals(Vec<f64>),
}

impl SequenceKind {
    pub fn is_integer(&self) -> bool {
        use SequenceKind::*;
        matches!(
            self,
            Identity | Power { .. } | Geometric { .. } | DoubleExp { .. }
                | DyadicBlocks { .. } | ExplicitIntegers(_)
        )
    }

    fn is_explicit(&self) -> bool {
        use SequenceKind::*;
        matches!(self, DyadicBlocks { .. } | ExplicitIntegers(_) | ExplicitReals(_))
    }
}

/// How the k-th summand is weighted in a difference sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightPreset {
    Unit,
    /// w_k = ln(k + 1), the slowest weight profile of interest.
    LogKPlus1,
}

impl WeightPreset {
    pub fn weight(self, k: usize) -> f64 {
        match self {
            WeightPreset::Unit => 1.0,
            WeightPreset::LogKPlus1 => ((k + 1) as f64).ln(),
        }
    }
}

/// A validated sequence with `len` materialized terms. Formula kinds may
/// be queried past `len`; explicit kinds may not.
#[derive(Clone, Debug)]
pub struct IndexSequence {
    kind: SequenceKind,
    terms_int: Vec<u128>,
    terms_real: Vec<f64>,
    weights: WeightPreset,
}

const EXACT_PHASE_LIMIT: u128 = 1 << 64;

pub fn build_sequence(
    kind: SequenceKind,
    count: usize,
    weights: WeightPreset,
) -> Result<IndexSequence, SequenceError> {
    if count == 0 {
        return Err(SequenceError::BadParameter("count must be ≥ 1".into()));
    }
    validate_parameters(&kind)?;
    let mut seq = IndexSequence {
        kind,
        terms_int: Vec::new(),
        terms_real: Vec::new(),
        weights,
    };
    if seq.kind.is_integer() {
        seq.terms_int = materialize_int(&seq.kind, count)?;
        for (i, pair) in seq.terms_int.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(SequenceError::BadParameter(format!(
                    "terms must increase strictly, violated at index {}",
                    i + 1
                )));
            }
        }
    } else {
        seq.terms_real = materialize_real(&seq.kind, count)?;
        for (i, pair) in seq.terms_real.windows(2).enumerate() {
            if !(pair[1] > 0.0 && pair[1] <= pair[0]) {
                return Err(SequenceError::BadParameter(format!(
                    "scales must be positive and nonincreasing, violated at index {}",
                    i + 1
                )));
            }
        }
    }
    Ok(seq)
}

fn validate_parameters(kind: &SequenceKind) -> Result<(), SequenceError> {
    match kind {
        SequenceKind::Power { p } if !(*p > 1.0) => {
            Err(SequenceError::BadParameter(format!("power exponent p = {p} must exceed 1")))
        }
        SequenceKind::Geometric { q } | SequenceKind::DoubleExp { q } if *q < 2 => {
            Err(SequenceError::BadParameter(format!("ratio q = {q} must be ≥ 2")))
        }
        SequenceKind::ReciprocalRatio { r } if !(*r > 0.0 && *r < 1.0) => {
            Err(SequenceError::BadParameter(format!("ratio r = {r} must lie in (0, 1)")))
        }
        SequenceKind::DyadicBlocks { counts } => {
            if counts.is_empty() {
                return Err(SequenceError::BadParameter("dyadic blocks need ≥ 1 count".into()));
            }
            for (i, &c) in counts.iter().enumerate() {
                let k = i as u32 + 1;
                if c == 0 {
                    return Err(SequenceError::BadParameter(format!("φ({k}) must be ≥ 1")));
                }
                if k >= 64 || c > 1u64 << k {
                    return Err(SequenceError::BadParameter(format!(
                        "φ({k}) = {c} exceeds the block capacity 2^{k}"
                    )));
                }
            }
            Ok(())
        }
        SequenceKind::ExplicitIntegers(v) if v.is_empty() => {
            Err(SequenceError::BadParameter("explicit list is empty".into()))
        }
        SequenceKind::ExplicitReals(v) if v.is_empty() => {
            Err(SequenceError::BadParameter("explicit list is empty".into()))
        }
        _ => Ok(()),
    }
}

fn materialize_int(kind: &SequenceKind, count: usize) -> Result<Vec<u128>, SequenceError> {
    match kind {
        SequenceKind::DyadicBlocks { counts } => {
            let mut terms = Vec::new();
            for (i, &phi) in counts.iter().enumerate() {
                let k = i as u32 + 1;
                let base = 1u128 << k;
                let spacing = base as f64 / phi as f64;
                for j in 0..phi {
                    let t = (base as f64 + j as f64 * spacing).round() as u128;
                    if terms.last() != Some(&t) {
                        terms.push(t);
                    }
                }
                if terms.len() >= count {
                    break;
                }
            }
            if terms.len() < count {
                return Err(SequenceError::BadParameter(format!(
                    "blocks provide only {} terms, {} requested",
                    terms.len(),
                    count
                )));
            }
            terms.truncate(count);
            Ok(terms)
        }
        SequenceKind::ExplicitIntegers(v) => {
            if v.len() < count {
                return Err(SequenceError::BadParameter(format!(
                    "explicit list holds {} terms, {} requested",
                    v.len(),
                    count
                )));
            }
            Ok(v[..count].to_vec())
        }
        _ => (1..=count)
            .map(|k| int_term_at(kind, k).ok_or(overflow_error(kind, k)))
            .collect(),
    }
}

fn materialize_real(kind: &SequenceKind, count: usize) -> Result<Vec<f64>, SequenceError> {
    match kind {
        SequenceKind::ExplicitReals(v) => {
            if v.len() < count {
                return Err(SequenceError::BadParameter(format!(
                    "explicit list holds {} terms, {} requested",
                    v.len(),
                    count
                )));
            }
            Ok(v[..count].to_vec())
        }
        _ => Ok((1..=count).map(|k| real_term_at(kind, k)).collect()),
    }
}

fn overflow_error(kind: &SequenceKind, k: usize) -> SequenceError {
    let name = match kind {
        SequenceKind::DoubleExp { .. } => "double-exponential sequence",
        SequenceKind::Geometric { .. } => "geometric sequence",
        _ => "sequence",
    };
    SequenceError::Overflow { kind: name, k }
}

/// Closed-form integer term; None past the exact-evaluation range.
fn int_term_at(kind: &SequenceKind, k: usize) -> Option<u128> {
    match kind {
        SequenceKind::Identity => Some(k as u128),
        SequenceKind::Power { p } => {
            let t = (k as f64).powf(*p);
            if t >= 9.0e15 {
                // Rounding below f64 integer resolution is meaningless.
                None
            } else {
                Some(t.round() as u128)
            }
        }
        SequenceKind::Geometric { q } => (*q as u128).checked_pow(k as u32),
        SequenceKind::DoubleExp { q } => {
            let exp = (*q as u64).checked_pow(k as u32)?;
            if exp > 127 {
                return None;
            }
            let t = (*q as u128).checked_pow(exp as u32)?;
            // Exact phase reduction holds to 2^64; larger terms error out.
            (t <= EXACT_PHASE_LIMIT).then_some(t)
        }
        _ => None,
    }
}

/// Closed-form positive real term for the decreasing kinds.
fn real_term_at(kind: &SequenceKind, k: usize) -> f64 {
    match kind {
        SequenceKind::ReciprocalDyadic => 0.5f64.powi(k as i32),
        SequenceKind::ReciprocalIdentity => 1.0 / k as f64,
        SequenceKind::ReciprocalRatio { r } => r.powi(k as i32),
        _ => unreachable!("not a formula real kind"),
    }
}

impl IndexSequence {
    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// Number of materialized (validated) terms.
    pub fn len(&self) -> usize {
        if self.kind.is_integer() {
            self.terms_int.len()
        } else {
            self.terms_real.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_integer_kind(&self) -> bool {
        self.kind.is_integer()
    }

    /// Greatest k for which `term_int`/`term_real` can answer.
    pub fn max_query_index(&self) -> usize {
        if self.kind.is_explicit() {
            return self.len();
        }
        match &self.kind {
            SequenceKind::Identity => u64::MAX as usize,
            SequenceKind::Power { p } => ((9.0e15f64).powf(1.0 / p)).floor() as usize,
            SequenceKind::Geometric { q } => (127.0 / (*q as f64).log2()).floor() as usize,
            SequenceKind::DoubleExp { .. } => {
                let mut k = 0;
                while int_term_at(&self.kind, k + 1).is_some() {
                    k += 1;
                }
                k
            }
            _ => u64::MAX as usize, // real formula kinds
        }
    }

    /// n_k, 1-based. Panics if k is 0, past an explicit list, or past the
    /// exact range of a formula kind.
    pub fn term_int(&self, k: usize) -> u128 {
        assert!(k >= 1, "terms are 1-based");
        assert!(self.kind.is_integer(), "integer term of a real kind");
        if k <= self.terms_int.len() {
            return self.terms_int[k - 1];
        }
        int_term_at(&self.kind, k)
            .unwrap_or_else(|| panic!("term {k} unavailable for this sequence"))
    }

    /// ε_k, 1-based; same access rules as `term_int`.
    pub fn term_real(&self, k: usize) -> f64 {
        assert!(k >= 1, "terms are 1-based");
        assert!(!self.kind.is_integer(), "real term of an integer kind");
        if k <= self.terms_real.len() {
            return self.terms_real[k - 1];
        }
        if self.kind.is_explicit() {
            panic!("term {k} beyond the explicit list");
        }
        real_term_at(&self.kind, k)
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights.weight(k)
    }

    pub fn weight_preset(&self) -> WeightPreset {
        self.weights
    }

    /// The k-th ratio deficit: 1 − n_k/n_{k+1} for integer kinds,
    /// 1 − ε_{k+1}/ε_k for real kinds. Closed forms keep this available
    /// far past the materialized range.
    pub fn ratio_deficit(&self, k: usize) -> f64 {
        assert!(k >= 1);
        match &self.kind {
            SequenceKind::Identity | SequenceKind::ReciprocalIdentity => 1.0 / (k as f64 + 1.0),
            SequenceKind::Geometric { q } => 1.0 - 1.0 / *q as f64,
            SequenceKind::ReciprocalDyadic => 0.5,
            SequenceKind::ReciprocalRatio { r } => 1.0 - r,
            SequenceKind::Power { p } => {
                if k + 1 <= self.terms_int.len() {
                    let a = self.terms_int[k - 1] as f64;
                    let b = self.terms_int[k] as f64;
                    1.0 - a / b
                } else {
                    -((*p) * ((k as f64) / (k as f64 + 1.0)).ln()).exp_m1()
                }
            }
            SequenceKind::DoubleExp { q } => {
                // n_k/n_{k+1} = q^{−(q−1)q^k} underflows almost at once.
                let e = (*q as f64).powi(k as i32) * (*q as f64 - 1.0);
                1.0 - (-e * (*q as f64).ln()).exp()
            }
            _ => {
                let a = self.term_int(k) as f64;
                let b = self.term_int(k + 1) as f64;
                1.0 - a / b
            }
        }
    }

    /// Σ_{k=1}^{J} ratio_deficit(k); diverges in J exactly when the terms
    /// run to infinity (or the scales to zero).
    pub fn ratio_deficit_sum(&self, j_max: usize) -> f64 {
        let mut acc = crate::sum::Kahan::new();
        for k in 1..=j_max {
            acc.add(self.ratio_deficit(k));
        }
        acc.value()
    }

    /// min over k < K of n_{k+1}/n_k (or ε_k/ε_{k+1}); lacunary iff > 1.
    pub fn lacunarity_constant(&self, k_max: usize) -> f64 {
        assert!(k_max >= 2, "need at least two terms");
        assert!(k_max <= self.len(), "lacunarity uses materialized terms");
        let mut min_ratio = f64::INFINITY;
        for k in 1..k_max {
            let r = if self.kind.is_integer() {
                self.terms_int[k] as f64 / self.terms_int[k - 1] as f64
            } else {
                self.terms_real[k - 1] / self.terms_real[k]
            };
            min_ratio = min_ratio.min(r);
        }
        min_ratio
    }

    /// Short stable name for tables and CSV rows.
    pub fn label(&self) -> String {
        match &self.kind {
            SequenceKind::Identity => "identity".into(),
            SequenceKind::Power { p } => format!("power{p}"),
            SequenceKind::Geometric { q } => format!("geometric{q}"),
            SequenceKind::DoubleExp { q } => format!("doubleexp{q}"),
            SequenceKind::DyadicBlocks { .. } => "dyadicblocks".into(),
            SequenceKind::ExplicitIntegers(_) => "explicit-int".into(),
            SequenceKind::ReciprocalDyadic => "reciprocal-dyadic".into(),
            SequenceKind::ReciprocalIdentity => "reciprocal-identity".into(),
            SequenceKind::ReciprocalRatio { r } => format!("reciprocal-ratio{r}"),
            SequenceKind::ExplicitReals(_) => "explicit-real".into(),
        }
    }
}
