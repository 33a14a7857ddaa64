//! High-precision reduction of huge phases modulo 2π.
//!
//! Evaluating μ̂(θ)ⁿ or γⁿ for indices as large as 2⁶⁴ needs the phase n·x
//! mod 2π to much better than f64 working precision: a plain product loses
//! one bit of phase per doubling of n.  The reduction here treats the f64
//! input x as exact (x = m·2^e with a 53-bit integer mantissa), forms the
//! integer product n_odd·m in 128 bits, and reduces against a double-double
//! table of 2^j mod 2π.  The result carries an absolute error around 1e-19,
//! far below the 1e-8 budget the multiplier contracts demand.

use std::sync::OnceLock;

/// Double-double value `hi + lo` with |lo| ≤ ulp(hi)/2.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// 2π to double-double precision. The low word is 2·(π − f64(π)).
const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // Requires |a| >= |b|.
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    #[inline]
    fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    fn double(self) -> Dd {
        Dd {
            hi: 2.0 * self.hi,
            lo: 2.0 * self.lo,
        }
    }

    #[inline]
    fn ge(self, other: Dd) -> bool {
        self.hi > other.hi || (self.hi == other.hi && self.lo >= other.lo)
    }

    /// Reduce a nonnegative value below ~2^40·2π into [0, 2π).
    fn mod_two_pi(self) -> Dd {
        let q = (self.hi / TWO_PI.hi).floor();
        let mut r = self.sub(TWO_PI.mul_f64(q));
        while r.hi < 0.0 {
            r = r.add(TWO_PI);
        }
        while r.ge(TWO_PI) {
            r = r.sub(TWO_PI);
        }
        r
    }
}

const POW2_MAX: i32 = 1500;

/// 2^j mod 2π for j in [3, POW2_MAX], built by repeated doubling.
fn pow2_table() -> &'static Vec<Dd> {
    static TABLE: OnceLock<Vec<Dd>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity((POW2_MAX - 2) as usize);
        let mut r = Dd::from_f64(4.0); // 2^2 < 2π
        for _ in 3..=POW2_MAX {
            r = r.double();
            if r.ge(TWO_PI) {
                r = r.sub(TWO_PI);
            }
            table.push(r);
        }
        table
    })
}

fn pow2_mod_two_pi(j: i32) -> Dd {
    if j <= 2 {
        // 2^j < 2π already; exact, underflowing to zero far below -1074.
        return Dd::from_f64(libm_exp2(j));
    }
    if j > POW2_MAX {
        // Unreachable for arguments accepted by reduce: kept total anyway.
        let mut r = pow2_table()[(POW2_MAX - 3) as usize];
        for _ in POW2_MAX..j {
            r = r.double();
            if r.ge(TWO_PI) {
                r = r.sub(TWO_PI);
            }
        }
        return r;
    }
    pow2_table()[(j - 3) as usize]
}

#[inline]
fn libm_exp2(j: i32) -> f64 {
    if j < -1074 {
        0.0
    } else {
        (j as f64).exp2()
    }
}

/// Largest odd factor allowed in the integer multiplier; beyond it the
/// 128-bit mantissa product would overflow.
pub const MAX_ODD: u128 = 1 << 74;

/// (n·x) mod 2π in [0, 2π), treating the f64 x as an exact rational.
///
/// Returns None when the odd part of n is ≥ 2^74 (the exact product no
/// longer fits in 128 bits). Powers of two in n cost nothing, so indices
/// like 2^100 reduce exactly.
pub fn reduce_mul_mod_two_pi(n: u128, x: f64) -> Option<f64> {
    if n == 0 || x == 0.0 {
        return Some(0.0);
    }
    if x < 0.0 {
        let r = reduce_mul_mod_two_pi(n, -x)?;
        return Some(if r == 0.0 { 0.0 } else { (TWO_PI.hi + TWO_PI.lo) - r });
    }
    let shift = n.trailing_zeros() as i32;
    let odd = n >> shift;
    if odd >= MAX_ODD {
        return None;
    }
    let (mant, exp) = decompose(x);
    let w = odd * mant as u128;
    let e0 = exp + shift;

    let mut acc = Dd::from_f64(0.0);
    for i in 0..4 {
        let limb = ((w >> (32 * i)) & 0xffff_ffff) as u32;
        if limb == 0 {
            continue;
        }
        let part = pow2_mod_two_pi(e0 + 32 * i).mul_f64(limb as f64);
        acc = acc.add(part.mod_two_pi());
    }
    let r = acc.mod_two_pi().value();
    // Collapsing hi+lo can round exactly onto 2π; fold that back to 0.
    Some(if r >= TWO_PI.hi + TWO_PI.lo { 0.0 } else { r.max(0.0) })
}

/// Split a positive finite f64 into (mantissa, exponent) with
/// x = mantissa·2^exponent and mantissa an integer < 2^53.
fn decompose(x: f64) -> (u64, i32) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & 0xf_ffff_ffff_ffff;
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), raw_exp - 1075)
    }
}

/// (a·b) mod m in integers; m must be nonzero and small enough that
/// (m−1)² fits u128 (always true here: moduli come from angle denominators).
pub fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    ((a % m) * (b % m)) % m
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn identity_multiplier_returns_x() {
        for &x in &[1e-300, 1e-9, 0.5, 1.0, 3.0, PI, 6.2831853] {
            let r = reduce_mul_mod_two_pi(1, x).unwrap();
            assert!((r - x).abs() <= 1e-18 * x.abs() + 1e-300, "x={x} r={r}");
        }
    }

    #[test]
    fn small_products_match_direct() {
        for n in [2u128, 3, 7, 1000, 123456] {
            let x = 1.2345e-7;
            let direct = (n as f64 * x) % TAU;
            let r = reduce_mul_mod_two_pi(n, x).unwrap();
            assert!((r - direct).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn negative_argument_mirrors() {
        let r = reduce_mul_mod_two_pi(5, 0.3).unwrap();
        let rm = reduce_mul_mod_two_pi(5, -0.3).unwrap();
        assert!(((r + rm) - TAU).abs() < 1e-15);
    }

    #[test]
    fn power_of_two_times_dyadic_angle() {
        // n = 2^64, x = π_f64/2^63: true product is exactly 2·π_f64,
        // which sits 2.45e-16 below the real 2π.
        let x = PI / (2f64.powi(63));
        let r = reduce_mul_mod_two_pi(1u128 << 64, x).unwrap();
        assert!(r.sin().abs() < 1e-15, "r={r}");
        assert!((r.cos() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn huge_odd_multiplier_matches_mpmath() {
        // Oracle: mpmath with 60 digits, x taken as the exact rational of
        // the f64 0.7853981633974483 (the f64 nearest π/4).
        // (12345678901234567890 · x) mod 2π = 0.5845110151219420910884...
        let x = 0.7853981633974483_f64;
        let r = reduce_mul_mod_two_pi(12345678901234567890u128, x).unwrap();
        assert!(
            (r - 0.584511015121942091088).abs() < 1e-12,
            "r={r}"
        );
    }

    #[test]
    fn odd_part_overflow_is_signalled() {
        assert!(reduce_mul_mod_two_pi((1u128 << 74) + 1, 0.5).is_none());
        // Same magnitude but even: fine.
        assert!(reduce_mul_mod_two_pi(1u128 << 90, 0.5).is_some());
    }

    #[test]
    fn mulmod_small() {
        assert_eq!(mulmod(7, 9, 10), 3);
        assert_eq!(mulmod(u64::MAX as u128, 3, 1000), ((u64::MAX as u128 % 1000) * 3) % 1000);
    }
}
