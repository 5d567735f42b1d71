//! A small exact rational on `i128`, sufficient for desk-scale lattice
//! minima and Diophantine comparisons. Always stored reduced with a
//! positive denominator; comparisons cross-multiply, so operands are
//! expected to stay below roughly 2^63 after reduction (debug builds
//! catch overflow).

use crate::fx;
use core::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    num: i128,
    den: i128,
}

pub fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Floor division on `i128` (rounds toward negative infinity).
pub fn div_floor_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Ceiling division on `i128`.
pub fn div_ceil_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "Frac: zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let (mut n, mut d) = (num * sign, den * sign);
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        Frac { num: n, den: d }
    }

    pub fn from_int(n: i128) -> Self {
        Frac { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(&self) -> Self {
        Frac { num: self.num.abs(), den: self.den }
    }

    pub fn neg(&self) -> Self {
        Frac { num: -self.num, den: self.den }
    }

    pub fn add(&self, other: &Frac) -> Frac {
        Frac::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        Frac::new(self.num * other.den - other.num * self.den, self.den * other.den)
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        Frac::new(self.num * other.num, self.den * other.den)
    }

    pub fn floor(&self) -> i128 {
        div_floor_i128(self.num, self.den)
    }

    pub fn ceil(&self) -> i128 {
        div_ceil_i128(self.num, self.den)
    }

    /// Correctly rounded conversion (through [`fx::ratio_f64`]).
    pub fn to_f64(&self) -> f64 {
        let mag = fx::ratio_f64(self.num.unsigned_abs(), self.den as u128);
        if self.num < 0 {
            -mag
        } else {
            mag
        }
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl core::fmt::Display for Frac {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
