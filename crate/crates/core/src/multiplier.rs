//! Fourier multiplier families: Cesàro averages on the torus, sinc kernels
//! for interval averages, powers of finite measure transforms, and the
//! smoothed square kernel.
//!
//! Every family is evaluated through numerically conditioned forms. The
//! Cesàro symbol uses the product form e^{i(n+1)θ/2}·sinc(nθ/2)/sinc(θ/2),
//! which is the geometric closed form rewritten so it stays stable both as
//! θ → 0 and for indices n up to 2¹²⁷. Measure powers μ̂ⁿ go through polar
//! coordinates with the modulus deficit 1 − |μ̂| accumulated from sin² terms
//! so that exp(n·ln|μ̂|) keeps full relative accuracy even when n is 2⁶⁴.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::phase;

/// Errors from measure construction and phase-critical evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum MultiplierError {
    #[error("atom weights must be nonnegative, got {0}")]
    NegativeWeight(f64),
    #[error("atom weights sum to {0}, expected 1 within 1e-12")]
    MassNotOne(f64),
    #[error("duplicate atom offset {0}")]
    DuplicateOffset(i64),
    #[error("a measure needs at least one atom")]
    EmptyMeasure,
    #[error("phase n·arg cannot be reduced below 1e-8 absolute error (n = {n})")]
    OverflowGuard { n: u128 },
    #[error("angle denominator {0} exceeds 2^52; exact reduction unavailable")]
    DenominatorTooLarge(u64),
}

// ─── angles ─────────────────────────────────────────────────────────────────

/// A frequency θ on the torus, kept in (−π, π].
///
/// The rational form θ = π·num/den enables exact integer phase reduction
/// for grid frequencies, which matters once indices reach 2⁶⁴.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Real(f64),
    RationalPi { num: i64, den: u64 },
}

impl Angle {
    /// Wrap an arbitrary finite radian value into (−π, π].
    pub fn real(x: f64) -> Self {
        assert!(x.is_finite(), "angle must be finite");
        let mut r = x.rem_euclid(2.0 * PI);
        if r > PI {
            r -= 2.0 * PI;
        }
        Angle::Real(r)
    }

    /// θ = π·num/den reduced into (−π, π]. Denominators above 2^52 are
    /// rejected so the residue-to-float conversion stays exact.
    pub fn rational_pi(num: i64, den: u64) -> Result<Self, MultiplierError> {
        if den == 0 || den > (1 << 52) {
            return Err(MultiplierError::DenominatorTooLarge(den));
        }
        let two_den = 2 * den as i128;
        let mut r = (num as i128).rem_euclid(two_den);
        if r > den as i128 {
            r -= two_den;
        }
        Ok(Angle::RationalPi {
            num: r as i64,
            den,
        })
    }

    /// The radian value in (−π, π].
    pub fn radians(self) -> f64 {
        match self {
            Angle::Real(x) => x,
            Angle::RationalPi { num, den } => PI * (num as f64) / (den as f64),
        }
    }

    /// (k·θ/2) mod 2π in [0, 2π), exact in the integer part of the
    /// reduction. Returns None when the odd part of k overflows the
    /// 128-bit product window.
    pub fn half_phase(self, k: u128) -> Option<f64> {
        match self {
            Angle::Real(x) => phase::reduce_mul_mod_two_pi(k, x / 2.0),
            Angle::RationalPi { num, den } => {
                // k·π·num/(2den) mod 2π = π·(k·num mod 4den)/(2den).
                let m = 4 * den as u128;
                let num_pos = (num as i128).rem_euclid(m as i128) as u128;
                let r = phase::mulmod(k % m, num_pos, m);
                Some(PI * (r as f64) / (2.0 * den as f64))
            }
        }
    }

    /// Whether θ ≡ 0 (the multiplier fixed point at γ = 1).
    pub fn is_zero(self) -> bool {
        match self {
            Angle::Real(x) => x == 0.0,
            Angle::RationalPi { num, .. } => num == 0,
        }
    }
}

// ─── scalar kernels ─────────────────────────────────────────────────────────

/// sin(x)/x with the removable singularity filled; series below 1e−4 keeps
/// the truncation error under 1e−20.
pub fn sinc(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// sinc(εx)², the transform of the twice-averaged (triangle) kernel.
pub fn smoothed_multiplier(eps: f64, x: f64) -> f64 {
    assert!(eps > 0.0, "scale must be positive");
    let s = sinc(eps * x);
    s * s
}

/// (1/n)·Σ_{k=1}^{n} e^{ikθ} through the product form
/// e^{i(n+1)θ/2}·sinc(nθ/2)/sinc(θ/2); exact 1 at θ ≡ 0.
///
/// Phases (n·θ/2) mod 2π are reduced with 128-bit integer arithmetic, so
/// the value stays meaningful for n as large as 2¹²⁷ when θ carries an
/// exact rational form (and up to odd parts of 2⁷⁴ otherwise).
pub fn cesaro_multiplier(n: u128, angle: Angle) -> Complex64 {
    assert!(n >= 1, "index must be positive");
    if angle.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    let theta = angle.radians();
    let half = theta / 2.0;
    let n_half = n as f64 * half;

    let sin_n = match angle.half_phase(n) {
        Some(p) => p.sin(),
        // Odd part of n too large for exact reduction: fall back to the
        // direct product, accurate only while n·θ stays below ~1e8.
        None => n_half.sin(),
    };
    let sinc_n = if n_half.abs() < 1e-4 {
        sinc(n_half)
    } else {
        sin_n / n_half
    };
    let magnitude = sinc_n / sinc(half);
    let arg = angle.half_phase(n + 1).unwrap_or((n as f64 + 1.0) * half);
    Complex64::from_polar(magnitude, arg)
}

/// Reference evaluator: the literal average (1/n)Σ e^{ikθ}, term by term.
/// Meant for cross-checks at n ≤ 10⁶.
pub fn cesaro_direct_sum(n: u64, theta: f64) -> Complex64 {
    assert!(n >= 1);
    let mut re = crate::sum::Kahan::new();
    let mut im = crate::sum::Kahan::new();
    for k in 1..=n {
        let (s, c) = (k as f64 * theta).sin_cos();
        re.add(c);
        im.add(s);
    }
    Complex64::new(re.value(), im.value()) / n as f64
}

// ─── finite measures on ℤ ───────────────────────────────────────────────────

/// A finitely supported probability measure on ℤ.
///
/// When the weights are mirror symmetric about a half-integer center c
/// (w_s = w_{2c−s}), the transform factors as μ̂(θ) = A(θ)e^{icθ} with A
/// real; that form is detected at construction and drives the conditioned
/// power evaluation.
#[derive(Clone, Debug)]
pub struct FiniteMeasureZ {
    atoms: Vec<(i64, f64)>,
    /// Twice the symmetry center when the mirror form applies.
    center2: Option<i64>,
    strictly_aperiodic: bool,
}

impl FiniteMeasureZ {
    pub fn new(mut atoms: Vec<(i64, f64)>) -> Result<Self, MultiplierError> {
        atoms.retain(|&(_, w)| w != 0.0);
        if atoms.is_empty() {
            return Err(MultiplierError::EmptyMeasure);
        }
        atoms.sort_by_key(|&(s, _)| s);
        for pair in atoms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(MultiplierError::DuplicateOffset(pair[0].0));
            }
        }
        for &(_, w) in &atoms {
            if w < 0.0 {
                return Err(MultiplierError::NegativeWeight(w));
            }
        }
        let mass: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(MultiplierError::MassNotOne(mass));
        }

        let c2 = atoms[0].0 + atoms[atoms.len() - 1].0;
        let mirror_symmetric = atoms.iter().all(|&(s, w)| {
            atoms
                .binary_search_by_key(&(c2 - s), |&(t, _)| t)
                .map(|i| atoms[i].1 == w)
                .unwrap_or(false)
        });

        let strictly_aperiodic = if atoms.len() < 2 {
            false
        } else {
            let mut g: u64 = 0;
            for pair in atoms.windows(2) {
                g = gcd(g, (pair[1].0 - pair[0].0).unsigned_abs());
            }
            g == 1
        };

        Ok(FiniteMeasureZ {
            atoms,
            center2: mirror_symmetric.then_some(c2),
            strictly_aperiodic,
        })
    }

    /// (δ₀ + δ₁)/2: the one-step Bernoulli walk measure.
    pub fn bernoulli_step() -> Self {
        Self::new(vec![(0, 0.5), (1, 0.5)]).expect("static atoms are valid")
    }

    /// (δ₋₁ + 2δ₀ + δ₁)/4: the symmetric triple with real nonnegative
    /// transform (1 + cos θ)/2.
    pub fn symmetric_triple() -> Self {
        Self::new(vec![(-1, 0.25), (0, 0.5), (1, 0.25)]).expect("static atoms are valid")
    }

    pub fn atoms(&self) -> &[(i64, f64)] {
        &self.atoms
    }

    /// Support not contained in any coset of a proper subgroup of ℤ,
    /// detected as gcd of offset differences equal to 1.
    pub fn is_strictly_aperiodic(&self) -> bool {
        self.strictly_aperiodic
    }

    /// μ̂(θ) = Σ_s μ(s)e^{isθ}.
    pub fn transform(&self, theta: f64) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for &(s, w) in &self.atoms {
            let (sin, cos) = (s as f64 * theta).sin_cos();
            z += w * Complex64::new(cos, sin);
        }
        z
    }

    /// 1 − |μ̂(θ)|, accumulated from sin² terms so no cancellation occurs
    /// even when |μ̂| is within 1e−18 of 1.
    pub fn modulus_deficit(&self, theta: f64) -> f64 {
        match self.center2 {
            Some(c2) => {
                let a_deficit = self.mirror_deficit(theta);
                if a_deficit <= 1.0 {
                    a_deficit
                } else {
                    // A < 0: |A| = 1 − Σ 2w·cos²; that sum is conditioned.
                    self.mirror_codeficit(theta, c2)
                }
            }
            None => {
                // 1 − |z|² = Σ_{s<t} 4 w_s w_t sin²((s−t)θ/2), then divide
                // by 1 + |z|.
                let d2 = self.squared_modulus_deficit(theta);
                let modulus = (1.0 - d2).max(0.0).sqrt();
                d2 / (1.0 + modulus)
            }
        }
    }

    /// |μ̂(θ)| with the same conditioning as `modulus_deficit`.
    pub fn modulus(&self, theta: f64) -> f64 {
        (1.0 - self.modulus_deficit(theta)).max(0.0)
    }

    /// 1 − μ̂(θ) as a complex number, conditioned near θ = 0.
    pub fn one_minus_transform(&self, theta: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(s, w) in &self.atoms {
            let h = s as f64 * theta / 2.0;
            let sh = h.sin();
            re += 2.0 * w * sh * sh;
            im -= w * (s as f64 * theta).sin();
        }
        Complex64::new(re, im)
    }

    /// μ̂(θ)ⁿ in polar form. The modulus is exp(n·ln1p(−deficit)); the
    /// phase is reduced mod 2π exactly for mirror-symmetric measures and
    /// with compensated arithmetic otherwise.
    pub fn power_transform(&self, n: u128, angle: Angle) -> Result<Complex64, MultiplierError> {
        assert!(n >= 1, "index must be positive");
        let theta = angle.radians();
        match self.center2 {
            Some(c2) => {
                let deficit = self.mirror_deficit(theta);
                let (ln_abs, negative) = if deficit <= 1.0 {
                    ((-deficit).ln_1p(), false)
                } else {
                    ((-self.mirror_codeficit(theta, c2)).ln_1p(), true)
                };
                let exponent = n as f64 * ln_abs;
                let r = if exponent < -745.0 { 0.0 } else { exponent.exp() };
                if r == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                // Phase n·c·θ = n·c2·(θ/2), plus π per power when A < 0.
                let mut arg = self.center_phase(n, angle, c2)?;
                if negative && n % 2 == 1 {
                    arg += PI;
                }
                Ok(Complex64::from_polar(r, arg))
            }
            None => {
                let z = self.transform(theta);
                let argument = z.arg();
                // The f64 argument carries ~4e−16 absolute error; past this
                // index the reduced phase would be meaningless.
                if n as f64 * 4e-16 >= 1e-8 {
                    return Err(MultiplierError::OverflowGuard { n });
                }
                let d2 = self.squared_modulus_deficit(theta);
                let ln_abs = 0.5 * (-d2).ln_1p();
                let exponent = n as f64 * ln_abs;
                let r = if exponent < -745.0 { 0.0 } else { exponent.exp() };
                if r == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let arg = phase::reduce_mul_mod_two_pi(n, argument)
                    .ok_or(MultiplierError::OverflowGuard { n })?;
                Ok(Complex64::from_polar(r, arg))
            }
        }
    }

    /// 1 − A(θ) = Σ_s 2 w_s sin²((s − c)θ/2) for the mirror form
    /// μ̂ = A·e^{icθ}. Nonnegative; exceeds 1 exactly when A < 0.
    fn mirror_deficit(&self, theta: f64) -> f64 {
        let c2 = self.center2.expect("mirror form required");
        let mut d = 0.0;
        for &(s, w) in &self.atoms {
            let h = (2 * s - c2) as f64 * theta / 4.0;
            let sh = h.sin();
            d += 2.0 * w * sh * sh;
        }
        d
    }

    /// 1 + A(θ) = Σ_s 2 w_s cos²((s − c)θ/2), conditioned near A = −1.
    fn mirror_codeficit(&self, theta: f64, c2: i64) -> f64 {
        let mut d = 0.0;
        for &(s, w) in &self.atoms {
            let h = (2 * s - c2) as f64 * theta / 4.0;
            let ch = h.cos();
            d += 2.0 * w * ch * ch;
        }
        d
    }

    /// 1 − |μ̂(θ)|² as a cancellation-free double sum over atom pairs.
    fn squared_modulus_deficit(&self, theta: f64) -> f64 {
        let mut d = 0.0;
        for (i, &(s, ws)) in self.atoms.iter().enumerate() {
            for &(t, wt) in &self.atoms[i + 1..] {
                let h = (s - t) as f64 * theta / 2.0;
                let sh = h.sin();
                d += 4.0 * ws * wt * sh * sh;
            }
        }
        d
    }

    /// (n·c2·θ/2) mod 2π with overflow guarding on the integer product.
    fn center_phase(&self, n: u128, angle: Angle, c2: i64) -> Result<f64, MultiplierError> {
        if c2 == 0 {
            return Ok(0.0);
        }
        let k = n
            .checked_mul(c2.unsigned_abs() as u128)
            .ok_or(MultiplierError::OverflowGuard { n })?;
        let p = angle
            .half_phase(k)
            .ok_or(MultiplierError::OverflowGuard { n })?;
        Ok(if c2 < 0 { -p } else { p })
    }
}

/// Kernel families addressable from scan queries. SincZ and SincR share
/// the sinc symbol and differ in the scan domain (integer vs real
/// frequencies); Smoothed is the squared sinc.
#[derive(Clone, Debug)]
pub enum KernelSpec {
    Cesaro,
    SincZ,
    SincR,
    MeasurePower(FiniteMeasureZ),
    Smoothed,
}

impl KernelSpec {
    /// Stable text form, matching the configuration grammar.
    pub fn label(&self) -> String {
        match self {
            KernelSpec::Cesaro => "cesaro".to_string(),
            KernelSpec::SincZ => "sinc-z".to_string(),
            KernelSpec::SincR => "sinc-r".to_string(),
            KernelSpec::Smoothed => "smoothed".to_string(),
            KernelSpec::MeasurePower(mu) => {
                let atoms: Vec<String> = mu
                    .atoms()
                    .iter()
                    .map(|(site, w)| format!("{w}@{site}"))
                    .collect();
                format!("measure:{}", atoms.join(","))
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn angle_wraps_into_half_open_interval() {
        assert_abs_diff_eq!(Angle::real(3.0 * PI).radians(), PI, epsilon = 1e-12);
        assert!(Angle::real(-PI).radians() > 0.0); // −π wraps to +π
        let a = Angle::rational_pi(5, 2).unwrap();
        assert_abs_diff_eq!(a.radians(), PI / 2.0, epsilon = 0.0);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(PI).abs() < 1e-15);
        assert_abs_diff_eq!(sinc(PI / 2.0), 2.0 / PI, epsilon = 1e-15);
        assert_eq!(sinc(1e-5), sinc(-1e-5));
        assert_eq!(sinc(0.3), sinc(-0.3));
    }

    #[test]
    fn cesaro_single_term_and_fixed_point() {
        let theta = 0.7;
        let m1 = cesaro_multiplier(1, Angle::real(theta));
        assert_abs_diff_eq!(m1.re, theta.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(m1.im, theta.sin(), epsilon = 1e-15);
        let fixed = cesaro_multiplier(12345, Angle::real(0.0));
        assert_eq!(fixed, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cesaro_alternating_average_vanishes() {
        let m4 = cesaro_multiplier(4, Angle::rational_pi(1, 1).unwrap());
        assert!(m4.norm() < 1e-15, "m_4(-1) = {m4}");
    }

    #[test]
    fn measure_constructor_rejects_bad_atoms() {
        assert_eq!(
            FiniteMeasureZ::new(vec![(0, 0.5), (0, 0.5)]).unwrap_err(),
            MultiplierError::DuplicateOffset(0)
        );
        assert!(matches!(
            FiniteMeasureZ::new(vec![(0, 0.4), (1, 0.4)]).unwrap_err(),
            MultiplierError::MassNotOne(_)
        ));
        assert_eq!(
            FiniteMeasureZ::new(vec![(0, 1.5), (1, -0.5)]).unwrap_err(),
            MultiplierError::NegativeWeight(-0.5)
        );
    }

    #[test]
    fn aperiodicity_flag_follows_gcd_of_gaps() {
        assert!(FiniteMeasureZ::bernoulli_step().is_strictly_aperiodic());
        let even = FiniteMeasureZ::new(vec![(0, 0.5), (2, 0.5)]).unwrap();
        assert!(!even.is_strictly_aperiodic());
        let point = FiniteMeasureZ::new(vec![(3, 1.0)]).unwrap();
        assert!(!point.is_strictly_aperiodic());
    }

    #[test]
    fn bernoulli_transform_polar_form() {
        // μ̂(θ) = e^{iθ/2} cos(θ/2)
        let mu = FiniteMeasureZ::bernoulli_step();
        for &t in &[0.1, 1.0, 2.5, -1.3] {
            let z = mu.transform(t);
            let expected = Complex64::from_polar((t / 2.0).cos(), t / 2.0);
            assert_abs_diff_eq!(z.re, expected.re, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, expected.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn triple_transform_is_real() {
        let mu = FiniteMeasureZ::symmetric_triple();
        for &t in &[0.3, 1.7, 3.0] {
            let z = mu.transform(t);
            assert_abs_diff_eq!(z.re, (1.0 + t.cos()) / 2.0, epsilon = 1e-15);
            assert!(z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn power_transform_matches_repeated_squaring() {
        let mu = FiniteMeasureZ::bernoulli_step();
        let theta = PI / 2.0;
        let z = mu.transform(theta);
        let expect = z * z;
        let got = mu
            .power_transform(2, Angle::rational_pi(1, 2).unwrap())
            .unwrap();
        assert_abs_diff_eq!(got.re, expect.re, epsilon = 1e-14);
        assert_abs_diff_eq!(got.im, expect.im, epsilon = 1e-14);
    }

    #[test]
    fn power_modulus_multiplies() {
        let mu = FiniteMeasureZ::bernoulli_step();
        let theta = 0.9;
        let r1 = mu.modulus(theta);
        for n in [1u128, 2, 7, 40] {
            let rn = mu.power_transform(n, Angle::real(theta)).unwrap().norm();
            let expect = r1.powi(n as i32);
            assert!((rn - expect).abs() <= 1e-12 * expect.max(1e-300));
        }
    }

    #[test]
    fn deficit_is_conditioned_at_tiny_angles() {
        let mu = FiniteMeasureZ::bernoulli_step();
        let theta = PI * 2f64.powi(-30);
        // 1 − cos(θ/2) = 2 sin²(θ/4)
        let expect = 2.0 * (theta / 4.0).sin().powi(2);
        let got = mu.modulus_deficit(theta);
        assert!((got - expect).abs() <= 1e-30, "got {got} expect {expect}");
        assert!(got > 0.0);
    }
}
