//! Ground field: arbitrary-precision rationals, always in lowest terms.

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar. Canonical form is maintained by the underlying
/// type: lowest terms, positive denominator, zero as 0/1.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// An integer as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}
