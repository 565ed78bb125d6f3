//! Small floating-point building blocks shared by the evaluators.

use crate::ComplexScalar;

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays exact when an addend is larger in magnitude
/// than the running sum, which matters for alternating series.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// The accumulated rounding correction not yet folded into the sum.
    #[inline]
    pub fn compensation(&self) -> f64 {
        self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Componentwise compensated accumulation of complex addends.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexCompensatedSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: ComplexScalar) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> ComplexScalar {
        ComplexScalar::new(self.re.value(), self.im.value())
    }

    /// Magnitude of the pending correction term.
    pub fn compensation(&self) -> f64 {
        self.re.compensation().hypot(self.im.compensation())
    }
}

impl Extend<ComplexScalar> for ComplexCompensatedSum {
    fn extend<I: IntoIterator<Item = ComplexScalar>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

impl FromIterator<ComplexScalar> for ComplexCompensatedSum {
    fn from_iter<I: IntoIterator<Item = ComplexScalar>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// `base^s = exp(s * ln(base))` for a strictly positive real base, using the
/// real logarithm.
///
/// The modulus is computed as `base.powf(Re s)` and the phase as
/// `Im(s) * ln(base)`, which is the same quantity with one rounding fewer.
/// Conjugating `s` conjugates the result bit for bit.
#[inline]
pub fn pow_positive(base: f64, s: ComplexScalar) -> ComplexScalar {
    debug_assert!(base > 0.0, "pow_positive needs a positive base, got {base}");
    let modulus = base.powf(s.re);
    if s.im == 0.0 {
        return ComplexScalar::new(modulus, s.im);
    }
    let phase = s.im * base.ln();
    let (sin, cos) = phase.sin_cos();
    ComplexScalar::new(modulus * cos, modulus * sin)
}

/// Principal `ln(1 + w)`, accurate for small `|w|`.
pub fn ln_1p_complex(w: ComplexScalar) -> ComplexScalar {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    ComplexScalar::new(re, im)
}

/// Distance between `a` and `b` in units of `f64::EPSILON * |b|`.
pub fn ulps_of_magnitude(a: ComplexScalar, b: ComplexScalar) -> f64 {
    let scale = b.norm();
    if scale == 0.0 {
        return if a == b { 0.0 } else { f64::INFINITY };
    }
    (a - b).norm() / (f64::EPSILON * scale)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    /// pi to about 106 bits.
    pub const PI: DoubleDouble = DoubleDouble {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self {
            hi: s,
            lo: b - (s - a),
        }
    }

    pub fn powi(self, mut exp: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        Self::quick_two_sum(p, e)
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, other.hi);
        let e = s.lo + self.lo + other.lo;
        Self::quick_two_sum(s.hi, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_bits() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn compensated_sum_of_tenths() {
        let s: CompensatedSum = std::iter::repeat_n(0.1, 10).collect();
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn pow_positive_real_exponent_matches_powf() {
        let z = pow_positive(0.3, ComplexScalar::new(2.5, 0.0));
        assert_eq!(z.re, 0.3f64.powf(2.5));
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn pow_positive_is_conjugate_symmetric() {
        let s = ComplexScalar::new(2.5, 1.3);
        let a = pow_positive(0.17, s);
        let b = pow_positive(0.17, s.conj());
        assert_eq!(a.conj(), b);
    }

    #[test]
    fn pow_positive_matches_complex_exp() {
        let s = ComplexScalar::new(1.7, -3.1);
        let direct = (s * 0.42f64.ln()).exp();
        assert!(ulps_of_magnitude(pow_positive(0.42, s), direct) < 8.0);
    }

    #[test]
    fn ln_1p_complex_small_and_large() {
        let w = ComplexScalar::new(1e-12, -3e-13);
        let z = ln_1p_complex(w);
        assert!((z.re - (1e-12 - 0.5 * (1e-24 - 9e-26))).abs() < 1e-27);
        assert!((z.im + 3e-13 / (1.0 + 1e-12)).abs() < 1e-28);
        let w = ComplexScalar::new(-3.5, 2.0);
        assert!(ulps_of_magnitude(ln_1p_complex(w), (w + 1.0).ln()) < 4.0);
    }

    #[test]
    fn double_double_pi_squared() {
        let pi2 = DoubleDouble::PI.powi(2);
        // pi^2 = 9.8696044010893586188344909998761511353...
        assert_eq!(pi2.hi, 9.869_604_401_089_358);
        assert!((pi2.lo).abs() < 1e-15);
    }
}
