//! Scalar abstraction shared by every geometric routine.
//!
//! Everything that only needs field arithmetic (determinants, cross products,
//! signed volumes, accumulation) is written against [`Scalar`], so it runs on
//! `f32`, `f64` and exact rationals alike. Operations that need a square root
//! (norms, altitudes) additionally require [`num_traits::Float`].

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Exact rational scalar used for symbolic-style checks of the identities.
pub type Rational = Ratio<i128>;

pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Relative hypervolume below which a simplex counts as degenerate.
    ///
    /// A simplex is degenerate when `volume < ratio * (max edge length)^d`.
    fn degeneracy_ratio() -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `1 / n` for a positive count.
    fn recip_count(n: usize) -> Self {
        Self::one() / Self::from_count(n)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn degeneracy_ratio() -> Self {
        1e-14
    }
}

impl Scalar for f32 {
    fn degeneracy_ratio() -> Self {
        1e-6
    }
}

impl Scalar for Rational {
    // exact arithmetic: only a true zero is degenerate
    fn degeneracy_ratio() -> Self {
        Rational::from_integer(0)
    }
}

/// `n!` in the scalar type.
pub fn factorial<T: Scalar>(n: usize) -> T {
    (2..=n).fold(T::one(), |acc, k| acc * T::from_count(k))
}
