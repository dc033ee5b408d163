use num_bigint::BigInt;

use super::QExpansion;
use crate::exact::{int, Rational};

/// Positive divisors of `m`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Σ_{n≥1} q^{an} / (1 - q^{bn}) + O(q^order)`.
///
/// The coefficient of q^m counts the divisors d of m with d ≡ a (mod b) and
/// d ≥ a, enumerated directly.
pub fn lambert(a: u64, b: u64, order: u64) -> QExpansion<Rational> {
    assert!(a >= 1 && b >= 1, "lambert needs positive a and b");
    let coeffs = (0..order)
        .map(|m| {
            if m == 0 {
                return int(0);
            }
            let count = divisors(m)
                .into_iter()
                .filter(|&d| d >= a && d % b == a % b)
                .count();
            Rational::from_integer(BigInt::from(count))
        })
        .collect();
    QExpansion::new((), int(0), coeffs, int(order as i64)).expect("lambert length fits order")
}
