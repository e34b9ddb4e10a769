//! Exhaustive enumeration of encoding sets, the reference for the counting formulas.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fapset::FapSet;
use crate::partition::{eta, EncodingSet};
use crate::system::RequestSchedule;

pub const MAX_BRUTE_FORCE_FAPS: usize = 20;

/// `hist[s][Y]`: number of type-`s` encoding sets split into `Y` subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaHistogram {
    hist: Vec<Vec<u64>>,
}

impl EtaHistogram {
    pub fn fap_count(&self) -> usize {
        self.hist.len() - 1
    }

    pub fn q(&self, s: usize, y: usize) -> u64 {
        self.hist.get(s).and_then(|row| row.get(y)).copied().unwrap_or(0)
    }

    /// `Q(s, delta_b)` for this schedule.
    pub fn total(&self, s: usize) -> BigUint {
        self.hist
            .get(s)
            .map(|row| row.iter().enumerate().map(|(y, &c)| BigUint::from(c) * y).sum())
            .unwrap_or_default()
    }

    /// Nonzero `(Y, count)` pairs of type `s`.
    pub fn row(&self, s: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.hist[s].iter().copied().enumerate().filter(|&(_, c)| c > 0)
    }
}

/// Runs the partition on every nonempty subset of the `K` F-APs.
pub fn brute_force_histogram(schedule: &RequestSchedule, delta_b: usize) -> Result<EtaHistogram> {
    let k = schedule.fap_count();
    if k > MAX_BRUTE_FORCE_FAPS {
        return Err(Error::TooLarge {
            faps: k,
            limit: MAX_BRUTE_FORCE_FAPS,
        });
    }
    let mut hist = vec![vec![0u64; schedule.slot_count() + 1]; k + 1];
    for mask in 1..(1u64 << k) {
        let members = FapSet::from_bits(mask);
        let y = eta(EncodingSet::new(members)?, schedule, delta_b)?;
        hist[members.len()][y] += 1;
    }
    Ok(EtaHistogram { hist })
}

/// `Q(s, delta_b)` by enumeration: the sum of `eta_S` over all type-`s` encoding sets.
pub fn brute_force_q_total(s: usize, schedule: &RequestSchedule, delta_b: usize) -> Result<BigUint> {
    let k = schedule.fap_count();
    if k > MAX_BRUTE_FORCE_FAPS {
        return Err(Error::TooLarge {
            faps: k,
            limit: MAX_BRUTE_FORCE_FAPS,
        });
    }
    FapSet::full(k)
        .subsets_of_size(s)
        .map(|set| eta(EncodingSet::new(set)?, schedule, delta_b).map(BigUint::from))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_totals() {
        let s = RequestSchedule::fixed_l(4, 4, 1, None).unwrap();
        let got: Vec<BigUint> = (1..=4).map(|t| brute_force_q_total(t, &s, 2).unwrap()).collect();
        assert_eq!(got, [4u32, 9, 8, 2].map(BigUint::from));
        assert_eq!(brute_force_q_total(4, &s, 4).unwrap(), BigUint::from(1u32));
        let h = brute_force_histogram(&s, 2).unwrap();
        assert_eq!(h.q(3, 2), 4);
        assert_eq!(h.q(3, 1), 0);
        assert_eq!(h.q(2, 1), 3);
        assert_eq!(h.total(2), BigUint::from(9u32));
        assert_eq!(h.row(2).collect::<Vec<_>>(), [(1, 3), (2, 3)]);
    }

    #[test]
    fn size_guard() {
        let s = RequestSchedule::fixed_l(21, 3, 7, None).unwrap();
        assert_eq!(
            brute_force_q_total(2, &s, 1),
            Err(Error::TooLarge { faps: 21, limit: 20 })
        );
        assert!(brute_force_histogram(&s, 1).is_err());
    }
}
