//! Compensated accumulation for sums whose terms span many orders of
//! magnitude.

/// Neumaier's variant of Kahan summation.  The compensation term is kept
/// separately so that adding a large term after many small ones does not
/// discard the accumulated correction.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Kahan::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_plain_sum_loses() {
        // 1 + 1e100 - 1e100 + 1 = 2; naive f64 gives 1.
        let terms = [1.0, 1e100, -1e100, 1.0];
        assert_eq!(kahan_sum(terms.iter().copied()), 2.0);
        assert_eq!(terms.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn harmonic_matches_high_precision_value() {
        // H_{10^6} computed with 50-digit arithmetic.
        let h: f64 = kahan_sum((1..=1_000_000).map(|k| 1.0 / k as f64));
        assert!((h - 14.392726722865723631381127493188587676644800013744).abs() < 1e-12);
    }
}
