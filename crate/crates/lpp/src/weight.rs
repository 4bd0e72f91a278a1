//! Edge-weight values on the extended half-line `[-inf, inf)`.
//!
//! A weight is either a finite real number or the absorbing element
//! `NEG_INF`. The sentinel is a dedicated variant rather than
//! `f64::NEG_INFINITY` so that ill-defined arithmetic (such as
//! `-inf + inf`) is unrepresentable by construction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// A path or edge weight: finite, or minus infinity.
///
/// Algebra: `NEG_INF + x = NEG_INF` for every `x`, `max(NEG_INF, x) = x`,
/// and `NEG_INF < x` for every finite `x`. Finite payloads are never NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    NegInf,
    Finite(f64),
}

pub use Weight::NegInf as NEG_INF;

impl Weight {
    pub const ZERO: Weight = Weight::Finite(0.0);

    /// Wraps a finite value. Panics on NaN or +inf payloads.
    pub fn finite(value: f64) -> Weight {
        assert!(value.is_finite(), "weight payload must be finite, got {value}");
        Weight::Finite(value)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Weight::NegInf)
    }

    /// The finite payload, if any.
    pub fn value(self) -> Option<f64> {
        match self {
            Weight::NegInf => None,
            Weight::Finite(v) => Some(v),
        }
    }

    /// The finite payload, panicking on `NEG_INF`.
    pub fn expect_finite(self) -> f64 {
        self.value().expect("expected a finite weight, got -inf")
    }

    pub fn max(self, other: Weight) -> Weight {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// True when the weight is finite and strictly positive.
    pub fn is_positive(self) -> bool {
        matches!(self, Weight::Finite(v) if v > 0.0)
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a + b),
            _ => Weight::NegInf,
        }
    }
}

impl Add<f64> for Weight {
    type Output = Weight;

    fn add(self, rhs: f64) -> Weight {
        self + Weight::finite(rhs)
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Weight) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Eq for Weight {}

// Total order is sound because Finite never carries NaN.
#[allow(clippy::derive_ord_xor_partial_ord)]
impl Ord for Weight {
    fn cmp(&self, other: &Weight) -> Ordering {
        match (self, other) {
            (Weight::NegInf, Weight::NegInf) => Ordering::Equal,
            (Weight::NegInf, Weight::Finite(_)) => Ordering::Less,
            (Weight::Finite(_), Weight::NegInf) => Ordering::Greater,
            (Weight::Finite(a), Weight::Finite(b)) => {
                a.partial_cmp(b).expect("finite weights are never NaN")
            }
        }
    }
}

impl From<f64> for Weight {
    fn from(value: f64) -> Weight {
        Weight::finite(value)
    }
}

impl fmt::Display for Weight {
    /// `-inf` for the sentinel, shortest round-trip decimal otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::NegInf => write!(f, "-inf"),
            Weight::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Maximal path length over a pair of vertices: `None` encodes the
/// empty-path-set convention (maximum over the empty set is -inf).
pub type PathLength = Option<u64>;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn neg_inf_absorbs_addition() {
        assert_eq!(NEG_INF + Weight::finite(3.5), NEG_INF);
        assert_eq!(Weight::finite(-2.0) + NEG_INF, NEG_INF);
        assert_eq!(NEG_INF + NEG_INF, NEG_INF);
    }

    #[test]
    fn neg_inf_is_identity_under_max() {
        assert_eq!(NEG_INF.max(Weight::finite(-7.0)), Weight::finite(-7.0));
        assert_eq!(Weight::finite(1.0).max(NEG_INF), Weight::finite(1.0));
        assert_eq!(NEG_INF.max(NEG_INF), NEG_INF);
    }

    #[test]
    fn neg_inf_below_every_finite_value() {
        assert!(NEG_INF < Weight::finite(-1e308));
        assert!(NEG_INF == NEG_INF);
        assert!(NEG_INF != Weight::finite(f64::MIN));
    }

    #[test]
    fn display_round_trip_forms() {
        assert_eq!(NEG_INF.to_string(), "-inf");
        assert_eq!(Weight::finite(0.1).to_string(), "0.1");
        assert_eq!(Weight::finite(-3.0).to_string(), "-3");
    }

    fn arb_weight() -> impl Strategy<Value = Weight> {
        prop_oneof![
            1 => Just(NEG_INF),
            4 => (-1e6f64..1e6).prop_map(Weight::finite),
        ]
    }

    proptest! {
        #[test]
        fn max_is_commutative_and_associative(a in arb_weight(), b in arb_weight(), c in arb_weight()) {
            prop_assert_eq!(a.max(b), b.max(a));
            prop_assert_eq!(a.max(b).max(c), a.max(b.max(c)));
        }

        #[test]
        fn addition_absorbs_and_max_identifies(a in arb_weight(), x in -1e6f64..1e6) {
            prop_assert_eq!(NEG_INF + a, NEG_INF);
            prop_assert_eq!(NEG_INF.max(Weight::finite(x)), Weight::finite(x));
            prop_assert!(NEG_INF < Weight::finite(x));
        }

        #[test]
        fn order_is_total_on_finite(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            let (a, b) = (Weight::finite(x), Weight::finite(y));
            prop_assert_eq!(a < b, x < y);
            prop_assert_eq!(a.max(b).expect_finite(), x.max(y));
        }
    }
}
