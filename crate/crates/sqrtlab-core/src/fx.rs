//! Floating-point helpers shared across the crate.
//!
//! All transcendental functions are routed through `libm` rather than the
//! `std` intrinsics, so the crate produces bit-identical values with and
//! without `std` and across platforms. That property backs the
//! byte-identical-output contract of the sweep front end.

use num_complex::Complex64;

pub fn fabs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `e(x) = exp(2πi·x)` evaluated from the fractional argument.
///
/// The caller is expected to reduce `x` modulo 1 beforehand when the raw
/// argument is large; this function only folds the value into `[0, 1)` to
/// keep the trigonometric argument small.
pub fn e_unit(x: f64) -> Complex64 {
    let frac = x - floor(x);
    let theta = 2.0 * core::f64::consts::PI * frac;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Compensated accumulator (Kahan–Babuška–Neumaier variant).
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if fabs(self.sum) >= fabs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated complex accumulator: one [`KahanSum`] per component.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Correctly rounded `num / den` as an `f64` (round to nearest, ties to even).
///
/// Plain `num as f64 / den as f64` incurs two roundings once the operands
/// exceed 2^53; this routine performs the division on the exact integers, so
/// reported ratios are within half an ulp of the true rational value.
pub fn ratio_f64(num: u128, den: u128) -> f64 {
    assert!(den != 0, "ratio_f64: zero denominator");
    if num == 0 {
        return 0.0;
    }
    let q0 = num / den;
    let r0 = num % den;
    if q0 >> 53 != 0 {
        // Integer part already carries 54+ bits: drop the excess with
        // round-to-nearest-even, the remainder acting as a sticky bit.
        let bits = 128 - q0.leading_zeros();
        let shift = bits - 53;
        let dropped = q0 & ((1u128 << shift) - 1);
        let half = 1u128 << (shift - 1);
        let mut q = q0 >> shift;
        if dropped > half || (dropped == half && (r0 != 0 || q & 1 == 1)) {
            q += 1;
        }
        return (q as f64) * pow2(shift as i32);
    }
    // Fewer than 54 integer bits: generate fractional bits by doubling the
    // remainder until the quotient holds exactly 54 bits, then round once.
    let mut q = q0;
    let mut r = r0;
    let mut exp: i32 = 0;
    while q >> 53 == 0 {
        r <<= 1;
        q <<= 1;
        exp -= 1;
        if r >= den {
            r -= den;
            q += 1;
        }
    }
    let low = q & 1;
    q >>= 1;
    exp += 1;
    if low == 1 && (r != 0 || q & 1 == 1) {
        q += 1;
    }
    (q as f64) * pow2(exp)
}

/// Exact power of two for exponents in the normal `f64` range.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((1023 + e) as u64) << 52)
}
