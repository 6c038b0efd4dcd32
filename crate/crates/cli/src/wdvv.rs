//! Rational plane curve counts from the WDVV associativity recursion.
//!
//! This oracle is deliberately independent of the localization engine: it
//! never touches graph data and is used only to cross-check engine output
//! for the projective plane.

use gkmgw_core::qfield::{rat_i, Rat};
use num::BigInt;
use num::{One, Zero};

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// One step of the associativity recursion: the degree-`d` count from the
/// counts `values[1..d]` of all lower degrees (`values[0]` is ignored).
/// Returns `None` when `d < 2` or `values` is too short.
pub fn wdvv_step(values: &[Rat], d: u64) -> Option<Rat> {
    if d < 2 || values.len() < d as usize {
        return None;
    }
    let mut total = Rat::zero();
    for d1 in 1..d {
        let d2 = d - d1;
        let c1 = binomial(3 * d as i64 - 4, 3 * d1 as i64 - 2);
        let c2 = binomial(3 * d as i64 - 4, 3 * d1 as i64 - 1);
        let bracket = rat_i(d2 as i64) * Rat::from(c1) - rat_i(d1 as i64) * Rat::from(c2);
        let weight = rat_i((d1 * d1 * d2) as i64);
        total += values[d1 as usize].clone() * values[d2 as usize].clone() * weight * bracket;
    }
    Some(total)
}

/// The number of degree-`d` rational curves through `3d - 1` general points
/// of the plane, from the recursion seeded with the single line through two
/// points. Only the target `P2` is supported.
pub fn wdvv_oracle(target: &str, degree: u64) -> Option<Rat> {
    if target != "P2" || degree == 0 {
        return None;
    }
    let mut values = vec![Rat::zero(), Rat::one()];
    for d in 2..=degree {
        let next = wdvv_step(&values, d)?;
        values.push(next);
    }
    Some(values[degree as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gkmgw_core::qfield::rat_i;

    #[test]
    fn small_degree_counts() {
        assert_eq!(wdvv_oracle("P2", 1), Some(rat_i(1)));
        assert_eq!(wdvv_oracle("P2", 2), Some(rat_i(1)));
        assert_eq!(wdvv_oracle("P2", 3), Some(rat_i(12)));
        assert_eq!(wdvv_oracle("P2", 4), Some(rat_i(620)));
        assert_eq!(wdvv_oracle("P2", 5), Some(rat_i(87304)));
    }

    #[test]
    fn unsupported_targets_are_rejected() {
        assert_eq!(wdvv_oracle("P1", 1), None);
        assert_eq!(wdvv_oracle("P2", 0), None);
    }

    #[test]
    fn step_matches_the_closed_run() {
        let values: Vec<Rat> = [0, 1, 1, 12, 620].iter().map(|&n| rat_i(n)).collect();
        assert_eq!(wdvv_step(&values, 4), Some(rat_i(620)));
        assert_eq!(wdvv_step(&values, 5), Some(rat_i(87304)));
    }
}
