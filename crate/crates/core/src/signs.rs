//! Worst-case sign and phase choices for finite difference families.
//!
//! Everything here works on finite Fourier data: a table of difference
//! symbols Δ_k(z) over a fixed frequency set, and a profile of amplitudes
//! f̂(z). The aligned norm is the analytic upper envelope; the brute-force
//! norm enumerates phase grids and certifies how much of it is attainable.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::discrete::GridFunctionZ;
use crate::rng::trial_rng;
use crate::sum::Kahan;

#[derive(Debug, Error, PartialEq)]
pub enum SignError {
    #[error("coefficient {k} has modulus {modulus} outside the unit disk")]
    CoefficientTooLarge { k: usize, modulus: f64 },
    #[error("difference table has no entry for frequency {frequency}")]
    MissingFrequency { frequency: i64 },
    #[error("{combinations} sign patterns exceed the enumeration budget")]
    BudgetExceeded { combinations: u128 },
    #[error("phase grid of order {0} is not supported (use 2 or 8)")]
    PhaseGridUnsupported(usize),
}

// ─── inputs ─────────────────────────────────────────────────────────────────

/// Multiplier coefficients c_k with |c_k| ≤ 1.
#[derive(Clone, Debug)]
pub struct CoefficientFamily {
    entries: Vec<Complex64>,
}

impl CoefficientFamily {
    pub fn new(entries: Vec<Complex64>) -> Result<Self, SignError> {
        for (i, c) in entries.iter().enumerate() {
            if c.norm() > 1.0 + 1e-12 {
                return Err(SignError::CoefficientTooLarge {
                    k: i + 1,
                    modulus: c.norm(),
                });
            }
        }
        Ok(CoefficientFamily { entries })
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Finitely supported Fourier amplitudes z ↦ f̂(z).
#[derive(Clone, Debug)]
pub struct FourierProfile {
    frequencies: Vec<i64>,
    amplitudes: Vec<Complex64>,
}

impl FourierProfile {
    pub fn new(mut pairs: Vec<(i64, Complex64)>) -> Self {
        pairs.sort_by_key(|&(z, _)| z);
        pairs.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1;
                true
            } else {
                false
            }
        });
        pairs.retain(|&(_, a)| a != Complex64::new(0.0, 0.0));
        let (frequencies, amplitudes) = pairs.into_iter().unzip();
        FourierProfile {
            frequencies,
            amplitudes,
        }
    }

    pub fn frequencies(&self) -> &[i64] {
        &self.frequencies
    }

    pub fn l2_norm(&self) -> f64 {
        let mut acc = Kahan::new();
        for a in &self.amplitudes {
            acc.add(a.norm_sqr());
        }
        acc.value().sqrt()
    }
}

/// Difference symbols Δ_k(z), k = 1..=k_max, over a fixed frequency set.
#[derive(Clone, Debug)]
pub struct DifferenceTable {
    k_max: usize,
    frequencies: Vec<i64>,
    rows: Vec<Vec<Complex64>>,
}

impl DifferenceTable {
    pub fn from_fn(
        k_max: usize,
        frequencies: Vec<i64>,
        mut entry: impl FnMut(usize, i64) -> Complex64,
    ) -> Self {
        assert!(k_max >= 1);
        let rows = (1..=k_max)
            .map(|k| frequencies.iter().map(|&z| entry(k, z)).collect())
            .collect();
        DifferenceTable {
            k_max,
            frequencies,
            rows,
        }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Column indices of the profile frequencies inside this table.
    fn columns_for(&self, profile: &FourierProfile) -> Result<Vec<usize>, SignError> {
        profile
            .frequencies
            .iter()
            .map(|z| {
                self.frequencies
                    .iter()
                    .position(|f| f == z)
                    .ok_or(SignError::MissingFrequency { frequency: *z })
            })
            .collect()
    }
}

// ─── norms ──────────────────────────────────────────────────────────────────

/// √( Σ_z (Σ_k |Δ_k(z)|)² · |f̂(z)|² ): the norm when every term is phase
/// aligned at every frequency. No coefficient family can exceed it.
pub fn aligned_coefficient_norm(
    table: &DifferenceTable,
    profile: &FourierProfile,
) -> Result<f64, SignError> {
    let cols = table.columns_for(profile)?;
    let mut acc = Kahan::new();
    for (zi, &col) in cols.iter().enumerate() {
        let mut stack = Kahan::new();
        for row in &table.rows {
            stack.add(row[col].norm());
        }
        let s = stack.value();
        acc.add(s * s * profile.amplitudes[zi].norm_sqr());
    }
    Ok(acc.value().sqrt())
}

/// √( Σ_z |Σ_k c_k Δ_k(z)|² · |f̂(z)|² ) for explicit coefficients.
pub fn coefficient_norm(
    table: &DifferenceTable,
    profile: &FourierProfile,
    family: &CoefficientFamily,
) -> Result<f64, SignError> {
    assert!(
        family.entries.len() >= table.k_max,
        "need one coefficient per difference row"
    );
    let cols = table.columns_for(profile)?;
    let mut acc = Kahan::new();
    for (zi, &col) in cols.iter().enumerate() {
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, row) in table.rows.iter().enumerate() {
            sum += family.entries[k] * row[col];
        }
        acc.add(sum.norm_sqr() * profile.amplitudes[zi].norm_sqr());
    }
    Ok(acc.value().sqrt())
}

const ENUMERATION_BUDGET: u128 = 1 << 24;

fn phase_grid(m: usize) -> Result<&'static [Complex64], SignError> {
    use std::f64::consts::FRAC_1_SQRT_2 as S;
    static ORDER2: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    static ORDER8: [Complex64; 8] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(S, S),
        Complex64::new(0.0, 1.0),
        Complex64::new(-S, S),
        Complex64::new(-1.0, 0.0),
        Complex64::new(-S, -S),
        Complex64::new(0.0, -1.0),
        Complex64::new(S, -S),
    ];
    match m {
        2 => Ok(&ORDER2),
        8 => Ok(&ORDER8),
        _ => Err(SignError::PhaseGridUnsupported(m)),
    }
}

/// max over c_k drawn from the m-th roots of unity of the coefficient norm.
/// Exhaustive; refuses families with more than 2^24 patterns.
pub fn brute_force_sign_norm(
    table: &DifferenceTable,
    profile: &FourierProfile,
    m: usize,
) -> Result<f64, SignError> {
    let phases = phase_grid(m)?;
    let combinations = (m as u128)
        .checked_pow(table.k_max as u32)
        .unwrap_or(u128::MAX);
    if combinations > ENUMERATION_BUDGET {
        return Err(SignError::BudgetExceeded { combinations });
    }
    let cols = table.columns_for(profile)?;
    let weights: Vec<f64> = profile.amplitudes.iter().map(|a| a.norm_sqr()).collect();
    // rows restricted to the profile columns, contiguous for the hot loop
    let rows: Vec<Vec<Complex64>> = table
        .rows
        .iter()
        .map(|row| cols.iter().map(|&c| row[c]).collect())
        .collect();

    fn descend(
        rows: &[Vec<Complex64>],
        weights: &[f64],
        phases: &[Complex64],
        acc: &[Complex64],
    ) -> f64 {
        match rows.split_first() {
            None => acc
                .iter()
                .zip(weights)
                .map(|(a, w)| a.norm_sqr() * w)
                .sum(),
            Some((row, rest)) => {
                let mut best = f64::NEG_INFINITY;
                let mut next = vec![Complex64::new(0.0, 0.0); acc.len()];
                for &phase in phases {
                    for (i, slot) in next.iter_mut().enumerate() {
                        *slot = acc[i] + phase * row[i];
                    }
                    best = best.max(descend(rest, weights, phases, &next));
                }
                best
            }
        }
    }

    let (first, rest) = rows.split_first().expect("k_max >= 1");
    let best = phases
        .par_iter()
        .map(|&phase| {
            let acc: Vec<Complex64> = first.iter().map(|&d| phase * d).collect();
            descend(rest, &weights, phases, &acc)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best.sqrt())
}

// ─── random signs on the grid side ──────────────────────────────────────────

#[derive(Clone, Copy, Debug)]
pub struct RademacherStats {
    /// (1/T) Σ_t ‖Σ_k r_k(t) d_k‖₁ over T independent sign vectors.
    pub mean_l1: f64,
    /// ‖ ( Σ_k d_k² )^{1/2} ‖₁, the square-function comparison value.
    pub square_fn_l1: f64,
    pub trials: usize,
}

/// Monte Carlo mean of ‖Σ r_k d_k‖₁ against the square function norm.
/// Trial t draws its signs from an independent stream of `seed`, so the
/// result is reproducible and independent of thread count.
pub fn rademacher_square_function(
    diffs: &[GridFunctionZ],
    trials: usize,
    seed: u64,
) -> RademacherStats {
    assert!(!diffs.is_empty() && trials >= 1);
    let mut support: Vec<i64> = diffs
        .iter()
        .flat_map(|d| d.support().map(|(m, _)| m))
        .collect();
    support.sort_unstable();
    support.dedup();
    // columns[m_index][k]
    let columns: Vec<Vec<f64>> = support
        .iter()
        .map(|&m| diffs.iter().map(|d| d.get(m)).collect())
        .collect();

    let mut sq = Kahan::new();
    for col in &columns {
        sq.add(col.iter().map(|v| v * v).sum::<f64>().sqrt());
    }

    let per_trial: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let signs: Vec<f64> = (0..diffs.len())
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect();
            let mut l1 = Kahan::new();
            for col in &columns {
                let s: f64 = col.iter().zip(&signs).map(|(v, r)| v * r).sum();
                l1.add(s.abs());
            }
            l1.value()
        })
        .collect();
    let mut mean = Kahan::new();
    for v in &per_trial {
        mean.add(*v);
    }
    RademacherStats {
        mean_l1: mean.value() / trials as f64,
        square_fn_l1: sq.value(),
        trials,
    }
}

// ─── instance generators ────────────────────────────────────────────────────

/// Random family whose symbols factor as Δ_k(z) = ρ_{k,z}·e^{i(α_k + β_z)}.
/// One unimodular coefficient choice (c_k = e^{−iα_k}) then aligns every
/// frequency simultaneously, so the aligned norm is attained in the limit of
/// fine phase grids.
pub fn random_separable_instance(seed: u64) -> (DifferenceTable, FourierProfile) {
    let mut rng = trial_rng(seed, 0);
    let k_max = rng.gen_range(1..=8usize);
    let n_freq = rng.gen_range(1..=4usize);
    let mut freqs: Vec<i64> = Vec::new();
    while freqs.len() < n_freq {
        let z = rng.gen_range(-50..=50i64);
        if !freqs.contains(&z) {
            freqs.push(z);
        }
    }
    freqs.sort_unstable();
    let alphas: Vec<f64> = (0..k_max)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let betas: Vec<f64> = (0..n_freq)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let magnitudes: Vec<Vec<f64>> = (0..k_max)
        .map(|_| (0..n_freq).map(|_| rng.gen_range(0.1..1.0)).collect())
        .collect();
    let table = DifferenceTable::from_fn(k_max, freqs.clone(), |k, z| {
        let zi = freqs.iter().position(|&f| f == z).unwrap();
        Complex64::from_polar(magnitudes[k - 1][zi], alphas[k - 1] + betas[zi])
    });
    let profile = FourierProfile::new(
        freqs
            .iter()
            .map(|&z| {
                let amp = Complex64::from_polar(
                    rng.gen_range(0.2..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                (z, amp)
            })
            .collect(),
    );
    (table, profile)
}
