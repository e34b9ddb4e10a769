//! Counting machinery behind the closed-form load of fixed-`L` schedules.
//!
//! An encoding set of type `s` is split into `Y` subsets ("big slots" of at
//! most `delta_b` slots each). `q(s, Y, delta_b)` counts the type-`s` sets
//! with exactly `Y` subsets; `Q(s, delta_b) = sum_Y q Y` is the number of
//! contents all type-`s` sets cost.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::FixedLConfig;
use crate::error::{Error, Result};

/// `C(n, r)`, zero whenever `r < 0`, `n < 0` or `r > n`.
pub fn binom(n: i64, r: i64) -> BigUint {
    if n < 0 || r < 0 || r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Ways to put `g` identical balls into `e` labelled boxes: `C(g + e - 1, g)`.
pub fn c_count(g: usize, e: usize) -> BigUint {
    assert!(e >= 1, "c_count needs at least one box");
    binom((g + e - 1) as i64, g as i64)
}

/// Ways to choose `alpha` F-APs out of `Y` slots of `L` each with at least
/// one per slot.
pub fn b_count(y: usize, alpha: usize, l: usize) -> Result<BigUint> {
    if y == 0 || l == 0 || alpha < y || alpha > y * l {
        return Err(Error::OutOfRange(format!(
            "b(Y = {y}, alpha = {alpha}) needs Y <= alpha <= Y L with L = {l}"
        )));
    }
    Ok(b_rec(y, alpha, l))
}

fn b_rec(y: usize, alpha: usize, l: usize) -> BigUint {
    if alpha < y || alpha > y * l {
        return BigUint::zero();
    }
    let li = l as i64;
    if y == 1 {
        return binom(li, alpha as i64);
    }
    if alpha == y {
        return num_traits::pow(BigUint::from(l), y);
    }
    if l > 1 && alpha == y * l {
        return BigUint::one();
    }
    (1..=l.min(alpha - (y - 1)))
        .map(|v| binom(li, v as i64) * b_rec(y - 1, alpha - v, l))
        .sum()
}

// sum over alpha of b(Y, alpha) C(pool, s - alpha)
fn spread(s: usize, y: usize, l: usize, pool: i64) -> BigUint {
    if pool < 0 {
        return BigUint::zero();
    }
    let lo = y.max(s.saturating_sub(pool as usize));
    let hi = s.min(y * l);
    (lo..=hi)
        .map(|alpha| b_rec(y, alpha, l) * binom(pool, (s - alpha) as i64))
        .sum()
}

/// Case 1: the last big slot is cut short by slot `B` and spans
/// `delta_b_prime < delta_b` slots. `q1 = d1 p1`.
pub fn q1_count(s: usize, y: usize, delta_b_prime: usize, delta_b: usize, l: usize, b: usize) -> BigUint {
    if y == 0 || delta_b_prime == 0 || delta_b_prime >= delta_b {
        return BigUint::zero();
    }
    let (y_, dbp, db, l_, b_) = (y as i64, delta_b_prime as i64, delta_b as i64, l as i64, b as i64);
    let d1 = binom(b_ - dbp - (y_ - 1) * (db - 1), y_ - 1);
    if d1.is_zero() {
        return d1;
    }
    let pool = ((y_ - 1) * db + dbp - y_) * l_;
    d1 * spread(s, y, l, pool)
}

/// Case 2: all `Y` big slots span the full `delta_b` slots.
pub fn q2_count(s: usize, y: usize, delta_b: usize, l: usize, b: usize) -> BigUint {
    if y == 0 || delta_b == 0 {
        return BigUint::zero();
    }
    let (y_, db, l_, b_) = (y as i64, delta_b as i64, l as i64, b as i64);
    let d2 = binom(b_ - y_ * (db - 1), y_);
    if d2.is_zero() {
        return d2;
    }
    d2 * spread(s, y, l, y_ * (db - 1) * l_)
}

/// `Y` range for type `s`: `ceil(s / (delta_b L)) ..= min(ceil(B / delta_b), s)`.
pub fn y_range(s: usize, config: &FixedLConfig) -> std::ops::RangeInclusive<usize> {
    let lo = s.div_ceil(config.delta_b * config.l).max(1);
    let hi = config.b.div_ceil(config.delta_b).min(s);
    lo..=hi
}

/// `q(s, Y, delta_b)`: type-`s` encoding sets that split into exactly `Y` subsets.
///
/// For `delta_b < B` this is `sum_{delta_b'=1}^{delta_b-1} q1 + q2`, with
/// infeasible layouts vanishing through zero binomials.
pub fn q_count(s: usize, y: usize, config: &FixedLConfig) -> BigUint {
    let (k, b, l, db) = (config.k, config.b, config.l, config.delta_b);
    if s == 0 || s > k || !y_range(s, config).contains(&y) {
        return BigUint::zero();
    }
    if db == b {
        return if y == 1 { binom(k as i64, s as i64) } else { BigUint::zero() };
    }
    (1..db)
        .map(|dbp| q1_count(s, y, dbp, db, l, b))
        .sum::<BigUint>()
        + q2_count(s, y, db, l, b)
}

/// The piecewise combination exactly as printed, with the case-1 range
/// starting at `max(ceil((s - (Y-1)L) / L), 1)`. Disagrees with enumeration
/// on some inputs; kept for comparison only, use [`q_count`].
pub fn q_count_as_published(s: usize, y: usize, config: &FixedLConfig) -> BigUint {
    let (k, b, l, db) = (config.k, config.b, config.l, config.delta_b);
    if s == 0 || s > k || !y_range(s, config).contains(&y) {
        return BigUint::zero();
    }
    if db == b {
        return if y == 1 { binom(k as i64, s as i64) } else { BigUint::zero() };
    }
    let rest = s as i64 - (y as i64 - 1) * l as i64;
    let lo = Integer::div_ceil(&rest, &(l as i64)).max(1) as usize;
    let room = b as i64 - (y as i64 - 1) * db as i64;
    let q1_sum = |hi: usize| (lo..=hi).map(|dbp| q1_count(s, y, dbp, db, l, b)).sum::<BigUint>();
    if db == 1 || db == lo {
        q2_count(s, y, db, l, b)
    } else if lo < db && (db as i64) <= room {
        q1_sum(db - 1) + q2_count(s, y, db, l, b)
    } else if room < db as i64 && room >= 0 {
        q1_sum(room as usize)
    } else {
        BigUint::zero()
    }
}

/// `Q(s, delta_b) = sum_Y q(s, Y, delta_b) Y`.
pub fn q_total(s: usize, config: &FixedLConfig) -> BigUint {
    y_range(s, config)
        .map(|y| q_count(s, y, config) * BigUint::from(y))
        .sum()
}

/// One nonzero `q(s, Y, delta_b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTriple {
    pub s: usize,
    pub y: usize,
    pub value: BigUint,
}

/// Every nonzero `q` for the configuration, by `s` then `Y`.
pub fn q_triples(config: &FixedLConfig) -> Vec<CountTriple> {
    (1..=config.k)
        .flat_map(|s| y_range(s, config).map(move |y| (s, y)))
        .filter_map(|(s, y)| {
            let value = q_count(s, y, config);
            (!value.is_zero()).then_some(CountTriple { s, y, value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn cfg(b: usize, l: usize, delta_b: usize) -> FixedLConfig {
        let k = b * l;
        FixedLConfig::new(k, k, 1.0, 1000, b, l, delta_b).unwrap()
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), u(6));
        assert_eq!(binom(0, 0), u(1));
        assert_eq!(binom(3, 4), u(0));
        assert_eq!(binom(-1, 0), u(0));
        assert_eq!(binom(5, -1), u(0));
        assert_eq!(binom(60, 30), u(118_264_581_564_861_424));
        assert_eq!(binom(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn balls_in_boxes() {
        assert_eq!(c_count(2, 3), u(6));
        assert_eq!(c_count(0, 5), u(1));
        assert_eq!(c_count(3, 2), u(4));
    }

    // Enumerates alpha-subsets of Y slots x L positions hitting every slot.
    fn b_brute(y: usize, alpha: usize, l: usize) -> u64 {
        (0..y * l)
            .combinations(alpha)
            .filter(|c| (0..y).all(|slot| c.iter().any(|&i| i / l == slot)))
            .count() as u64
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_count(1, 2, 3).unwrap(), u(3));
        assert_eq!(b_count(2, 2, 3).unwrap(), u(9));
        assert_eq!(b_count(2, 3, 2).unwrap(), u(4));
        assert_eq!(b_count(3, 4, 2).unwrap(), u(12));
        assert_eq!(b_count(3, 5, 3).unwrap(), u(108));
        assert!(matches!(b_count(2, 1, 3), Err(Error::OutOfRange(_))));
        assert!(matches!(b_count(2, 7, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn b_matches_enumeration() {
        for y in 1..=4 {
            for l in 1..=4 {
                for alpha in y..=y * l {
                    assert_eq!(b_count(y, alpha, l).unwrap(), u(b_brute(y, alpha, l)), "b({y},{alpha}) L={l}");
                }
            }
        }
    }

    #[test]
    fn q_pieces() {
        assert_eq!(q1_count(2, 2, 1, 2, 1, 4), u(2));
        assert_eq!(q1_count(2, 2, 2, 2, 1, 4), u(0));
        assert_eq!(q2_count(2, 1, 2, 1, 4), u(3));
        assert_eq!(q2_count(2, 2, 1, 1, 4), u(6));
        assert_eq!(q2_count(5, 1, 2, 1, 4), u(0));
    }

    #[test]
    fn example_q_and_totals() {
        let c = cfg(4, 1, 2);
        assert_eq!(q_count(3, 1, &c), u(0));
        assert_eq!(q_count(3, 2, &c), u(4));
        let totals: Vec<BigUint> = (1..=4).map(|s| q_total(s, &c)).collect();
        assert_eq!(totals, [u(4), u(9), u(8), u(2)]);
        let c3 = cfg(4, 1, 3);
        assert_eq!((1..=4).map(|s| q_total(s, &c3)).collect::<Vec<_>>(), [u(4), u(7), u(6), u(2)]);
        let c1 = cfg(4, 1, 1);
        for s in 1..=4 {
            assert_eq!(q_total(s, &c1), binom(4, s as i64) * u(s as u64));
            assert_eq!(q_total(s, &cfg(4, 1, 4)), binom(4, s as i64));
        }
    }

    // Frozen from exhaustive enumeration of all 63 encoding sets.
    #[test]
    fn six_faps_three_slots() {
        let expect: [(usize, [u64; 6]); 3] = [
            (1, [6, 27, 48, 42, 18, 3]),
            (2, [6, 19, 32, 28, 12, 2]),
            (3, [6, 15, 20, 15, 6, 1]),
        ];
        for (db, totals) in expect {
            let c = cfg(3, 2, db);
            let got: Vec<BigUint> = (1..=6).map(|s| q_total(s, &c)).collect();
            assert_eq!(got, totals.map(u), "delta_b = {db}");
        }
        let hist = |db| -> Vec<(usize, usize, u64)> {
            q_triples(&cfg(3, 2, db))
                .into_iter()
                .map(|t| (t.s, t.y, t.value.try_into().unwrap()))
                .collect()
        };
        assert_eq!(
            hist(1),
            [(1, 1, 6), (2, 1, 3), (2, 2, 12), (3, 2, 12), (3, 3, 8), (4, 2, 3), (4, 3, 12), (5, 3, 6), (6, 3, 1)]
        );
        assert_eq!(
            hist(2),
            [(1, 1, 6), (2, 1, 11), (2, 2, 4), (3, 1, 8), (3, 2, 12), (4, 1, 2), (4, 2, 13), (5, 2, 6), (6, 2, 1)]
        );
    }

    #[test]
    fn y_bounds() {
        let c = cfg(4, 1, 2);
        assert_eq!(y_range(3, &c), 2..=2);
        assert_eq!(y_range(1, &c), 1..=1);
        assert_eq!(y_range(4, &cfg(3, 2, 1)), 2..=3);
    }

    #[test]
    fn published_form_differs_on_a_known_input() {
        let c = cfg(4, 1, 2);
        assert_eq!(q_count_as_published(3, 2, &c), u(2));
        assert_eq!(q_count(3, 2, &c), u(4));
        assert_eq!(q_count_as_published(2, 1, &c), q_count(2, 1, &c));
        assert_eq!(q_count_as_published(4, 1, &cfg(4, 1, 4)), u(1));
    }

    #[test]
    fn completeness_small_grid() {
        for b in 2..=6 {
            for l in 1..=2 {
                for db in 1..=b {
                    let c = cfg(b, l, db);
                    for s in 1..=c.k {
                        let sum: BigUint = y_range(s, &c).map(|y| q_count(s, y, &c)).sum();
                        assert_eq!(sum, binom(c.k as i64, s as i64), "B={b} L={l} db={db} s={s}");
                    }
                }
            }
        }
    }
}
