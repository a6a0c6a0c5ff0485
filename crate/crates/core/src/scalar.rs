//! Numeric abstraction for the LP solver and the matching rounding.
//!
//! Floating types compare against a small tolerance; exact rationals compare
//! exactly, which is what the test oracles use.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync {
    /// Magnitude below which a value counts as zero.
    fn epsilon() -> Self;

    fn is_exact() -> bool;

    /// Residual weights at or below this count as spent in local ratio.
    fn weight_dust() -> Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite input")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_pos(&self) -> bool {
        *self > Self::epsilon()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::epsilon()
    }

    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f64 {
    fn epsilon() -> Self {
        1e-9
    }

    fn weight_dust() -> Self {
        1e-12
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {
    fn epsilon() -> Self {
        1e-5
    }

    fn weight_dust() -> Self {
        1e-6
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn epsilon() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn weight_dust() -> Self {
        Self::epsilon()
    }

    fn is_exact() -> bool {
        true
    }
}
