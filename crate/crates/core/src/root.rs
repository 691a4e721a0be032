use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;

/// A root of unity `e^{2πi·a/m}`, stored as the fraction `a/m` in `Q/Z`.
///
/// Multiplication of roots is addition of fractions. The fraction is kept in
/// lowest terms with `0 <= a < m`, so `m` is the multiplicative order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    /// The class of `num/den` modulo 1. `den` must be positive.
    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let d = den as i128;
        let r = num.rem_euclid(d);
        let g = r.gcd(&d);
        RootOfUnity {
            num: (r / g) as u64,
            den: (d / g) as u64,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// `self^e`.
    pub fn pow(self, e: i64) -> Self {
        Self::new(self.num as i128 * e as i128, self.den)
    }

    /// Numerator of this value written over the denominator `m`; `None` when
    /// the order does not divide `m`.
    pub fn over(&self, m: u64) -> Option<u64> {
        m.is_multiple_of(self.den)
            .then(|| self.num * (m / self.den))
    }
}

impl Default for RootOfUnity {
    fn default() -> Self {
        Self::ONE
    }
}

impl Add for RootOfUnity {
    type Output = RootOfUnity;

    fn add(self, rhs: RootOfUnity) -> RootOfUnity {
        let den = self.den.lcm(&rhs.den);
        let num =
            self.num as i128 * (den / self.den) as i128 + rhs.num as i128 * (den / rhs.den) as i128;
        RootOfUnity::new(num, den)
    }
}

impl Neg for RootOfUnity {
    type Output = RootOfUnity;

    fn neg(self) -> RootOfUnity {
        RootOfUnity::new(-(self.num as i128), self.den)
    }
}

impl Sub for RootOfUnity {
    type Output = RootOfUnity;

    fn sub(self, rhs: RootOfUnity) -> RootOfUnity {
        self + (-rhs)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
