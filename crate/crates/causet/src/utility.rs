//! Exact rational values and finite families of utility functions.
//!
//! Everything representational in this crate is an order comparison between
//! fractions with small denominators. Floating point would turn boundary ties
//! into wrong answers, so all values are exact rationals.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::BigRational;

/// Exact rational carrier for every utility, clock, and operator value.
/// Kept in canonical form by the backing implementation: positive
/// denominator, numerator and denominator coprime.
pub type Rational = BigRational;

/// Builds a rational from machine integers. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds a whole-number rational.
pub fn whole(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `numerator/denominator`, always slashed, so machine
/// output stays uniform ("2/1" rather than "2").
pub fn render_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A finite family of utility functions over elements of type `T`.
///
/// The intended contract is the multi-utility reading of a strict order:
/// `x < y` exactly when every function in the family strictly increases from
/// `x` to `y`. Construction sites decide which order that is; `oracle`
/// re-checks the contract by exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiUtility<T: Ord> {
    pub functions: Vec<BTreeMap<T, Rational>>,
}

impl<T: Ord> MultiUtility<T> {
    pub fn new(functions: Vec<BTreeMap<T, Rational>>) -> Self {
        MultiUtility { functions }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}
