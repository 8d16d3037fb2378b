//! Lower and upper operators: pull a codomain function back along a
//! relation, or push a domain function forward, using min and max over the
//! related elements. Empty sets fall back to the ends of the unit interval,
//! so the totals are defined everywhere and can be chained.

use std::collections::BTreeMap;

use num::Zero;

use crate::biorder::Biorder;
use crate::utility::{whole, Rational};

use super::{in_open_unit, ReprError};

/// `op̲(v)(x) = min { v(y) : x rel y }`, and 1 when nothing is related.
/// Requires `v` defined on the codomain, increasing along it, with values in
/// (0, 1). The result pairs with `v` as a `≤`-representation of the
/// relation and is increasing on the domain chain.
pub fn op_lower<T: Ord + Clone>(
    rel: &Biorder<T>,
    v: &BTreeMap<T, Rational>,
) -> Result<BTreeMap<T, Rational>, ReprError> {
    check_input(rel.codomain(), v)?;
    Ok(op_lower_total(rel, v))
}

/// `op̄(u)(y) = max { u(x) : x rel y }`, and 0 when nothing is related.
/// Requirements and guarantees mirror [`op_lower`].
pub fn op_upper<T: Ord + Clone>(
    rel: &Biorder<T>,
    u: &BTreeMap<T, Rational>,
) -> Result<BTreeMap<T, Rational>, ReprError> {
    check_input(rel.domain(), u)?;
    Ok(op_upper_total(rel, u))
}

/// [`op_lower`] without the input checks. Iterating the operators along a
/// line produces values of 0 and 1 at the quiet ends of chains; those are
/// fine as inputs to further steps even though a single validated
/// application would reject them.
pub fn op_lower_total<T: Ord + Clone>(
    rel: &Biorder<T>,
    v: &BTreeMap<T, Rational>,
) -> BTreeMap<T, Rational> {
    rel.domain()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let best = rel
                .up_set_indices(i)
                .into_iter()
                .filter_map(|j| v.get(&rel.codomain()[j]))
                .min()
                .cloned()
                .unwrap_or_else(|| whole(1));
            (x.clone(), best)
        })
        .collect()
}

/// [`op_upper`] without the input checks; see [`op_lower_total`].
pub fn op_upper_total<T: Ord + Clone>(
    rel: &Biorder<T>,
    u: &BTreeMap<T, Rational>,
) -> BTreeMap<T, Rational> {
    rel.codomain()
        .iter()
        .enumerate()
        .map(|(j, y)| {
            let best = rel
                .down_set_indices(j)
                .into_iter()
                .filter_map(|i| u.get(&rel.domain()[i]))
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero);
            (y.clone(), best)
        })
        .collect()
}

fn check_input<T: Ord + Clone>(
    chain: &[T],
    f: &BTreeMap<T, Rational>,
) -> Result<(), ReprError> {
    let mut prev: Option<&Rational> = None;
    for (k, t) in chain.iter().enumerate() {
        let value = f
            .get(t)
            .ok_or_else(|| ReprError::MissingValue(format!("chain position {k}")))?;
        if !in_open_unit(value) {
            return Err(ReprError::ValueOutOfRange(crate::utility::render_rational(
                value,
            )));
        }
        if let Some(p) = prev {
            if p > value {
                return Err(ReprError::NotIncreasing(format!("chain position {k}")));
            }
        }
        prev = Some(value);
    }
    Ok(())
}
