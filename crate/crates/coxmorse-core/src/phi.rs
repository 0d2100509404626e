//! The quadratic ring `Z[phi]`, `phi^2 = phi + 1`.
//!
//! Root coordinates for the H-type groups live here; crystallographic types
//! use the subring with zero `phi`-part. Signs are decided exactly via
//! integer comparisons against `sqrt(5)`, so no floating point is involved
//! anywhere.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// `a + b*phi` with `phi = (1 + sqrt 5)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phi {
    pub a: i64,
    pub b: i64,
}

pub const ZERO: Phi = Phi { a: 0, b: 0 };
pub const ONE: Phi = Phi { a: 1, b: 0 };

impl Phi {
    pub const fn new(a: i64, b: i64) -> Self {
        Phi { a, b }
    }

    pub const fn int(a: i64) -> Self {
        Phi { a, b: 0 }
    }

    /// The golden ratio itself.
    #[allow(clippy::self_named_constructors)]
    pub const fn phi() -> Self {
        Phi { a: 0, b: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Exact sign of `a + b*phi` as a real number.
    ///
    /// Writing `2(a + b*phi) = (2a + b) + b*sqrt(5)`, the sign reduces to
    /// comparing `p = 2a + b` against `-b*sqrt(5)`, which squares to an
    /// integer comparison. `sqrt(5)` is irrational, so `p^2 = 5 b^2` only
    /// when both vanish.
    pub fn signum(&self) -> i32 {
        let p = 2 * self.a + self.b;
        let q = self.b;
        if p == 0 && q == 0 {
            return 0;
        }
        if p >= 0 && q >= 0 {
            return 1;
        }
        if p <= 0 && q <= 0 {
            return -1;
        }
        // opposite signs: compare p^2 with 5 q^2
        let lhs = (p as i128) * (p as i128);
        let rhs = 5 * (q as i128) * (q as i128);
        if p > 0 {
            if lhs > rhs {
                1
            } else {
                -1
            }
        } else if rhs > lhs {
            1
        } else {
            -1
        }
    }
}

impl Add for Phi {
    type Output = Phi;
    fn add(self, rhs: Phi) -> Phi {
        Phi::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl AddAssign for Phi {
    fn add_assign(&mut self, rhs: Phi) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for Phi {
    type Output = Phi;
    fn sub(self, rhs: Phi) -> Phi {
        Phi::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl SubAssign for Phi {
    fn sub_assign(&mut self, rhs: Phi) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

impl Neg for Phi {
    type Output = Phi;
    fn neg(self) -> Phi {
        Phi::new(-self.a, -self.b)
    }
}

impl Mul for Phi {
    type Output = Phi;
    // (a + b phi)(c + d phi) = ac + bd + (ad + bc + bd) phi
    fn mul(self, rhs: Phi) -> Phi {
        let (a, b, c, d) = (self.a, self.b, rhs.a, rhs.b);
        Phi::new(a * c + b * d, a * d + b * c + b * d)
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}p"),
            (a, b) if b < 0 => write!(f, "{a}{b}p"),
            (a, b) => write!(f, "{a}+{b}p"),
        }
    }
}
