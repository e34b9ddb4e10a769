use rand::seq::SliceRandom;
use rand::Rng;

use super::SystemParams;
use crate::error::{invalid, Result};
use crate::fapset::{FapSet, MAX_FAPS};
use crate::rng::{stream_rng, Stream};

const MAX_SURJECTION_DRAWS: usize = 4096;

/// When each F-AP's single request arrives, and which file it asks for.
///
/// `slots[b - 1]` is `U_b`. Every F-AP appears in exactly one slot and no
/// slot is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestSchedule {
    faps: usize,
    slots: Vec<FapSet>,
    slot_of: Vec<usize>,
    demand: Vec<usize>,
}

impl RequestSchedule {
    /// Builds and validates a schedule. `demand[k - 1]` is the file F-AP `k` requests.
    pub fn new(faps: usize, slots: Vec<FapSet>, demand: Vec<usize>) -> Result<Self> {
        if faps == 0 || faps > MAX_FAPS {
            return Err(invalid(format!("K = {faps} must lie in 1..={MAX_FAPS}")));
        }
        if slots.len() < 2 {
            return Err(invalid(format!("B = {} must be at least 2", slots.len())));
        }
        if demand.len() != faps {
            return Err(invalid(format!("demand covers {} F-APs, expected {faps}", demand.len())));
        }
        if let Some(d) = demand.iter().find(|&&d| d == 0) {
            return Err(invalid(format!("file index {d} is not in 1..=N")));
        }
        let mut seen = FapSet::EMPTY;
        let mut slot_of = vec![0; faps];
        for (i, &u) in slots.iter().enumerate() {
            if u.is_empty() {
                return Err(invalid(format!("U_{} is empty", i + 1)));
            }
            if !u.is_disjoint(seen) {
                return Err(invalid(format!("U_{} repeats an F-AP from an earlier slot", i + 1)));
            }
            if u.last().is_some_and(|k| k > faps) {
                return Err(invalid(format!("U_{} = {u} names an F-AP beyond K = {faps}", i + 1)));
            }
            for k in u {
                slot_of[k - 1] = i + 1;
            }
            seen = seen.union(u);
        }
        if seen != FapSet::full(faps) {
            return Err(invalid(format!(
                "F-APs {} never request",
                FapSet::full(faps).difference(seen)
            )));
        }
        Ok(RequestSchedule {
            faps,
            slots,
            slot_of,
            demand,
        })
    }

    /// `|U_b| = L` for every slot. Without a seed the assignment is canonical,
    /// `U_b = {(b-1)L+1, ..., bL}`; with one, membership is a seeded random
    /// partition. Demand is `d_k = k` (all distinct) in both cases.
    pub fn fixed_l(k: usize, b: usize, l: usize, seed: Option<u64>) -> Result<Self> {
        if l == 0 || b.checked_mul(l) != Some(k) {
            return Err(invalid(format!("fixed-L schedule needs K = B L, got K = {k}, B = {b}, L = {l}")));
        }
        let mut order: Vec<usize> = (1..=k).collect();
        if let Some(seed) = seed {
            order.shuffle(&mut stream_rng(seed, Stream::Schedule));
        }
        let slots = order
            .chunks(l)
            .map(|chunk| FapSet::from_members(chunk.iter().copied()))
            .collect();
        Self::new(k, slots, (1..=k).collect())
    }

    /// A seeded surjective assignment of the `K` F-APs onto `B` slots.
    ///
    /// Draws each F-AP's slot uniformly and redraws until no slot is empty,
    /// which is uniform over surjections. After `MAX_SURJECTION_DRAWS`
    /// failures it seeds one random F-AP per slot and places the rest uniformly.
    pub fn random(k: usize, b: usize, seed: u64) -> Result<Self> {
        if k < b {
            return Err(invalid(format!("random schedule needs K >= B, got K = {k}, B = {b}")));
        }
        if b < 2 {
            return Err(invalid(format!("B = {b} must be at least 2")));
        }
        let mut rng = stream_rng(seed, Stream::Schedule);
        let mut assignment = vec![0usize; k];
        let mut found = false;
        for _ in 0..MAX_SURJECTION_DRAWS {
            let mut hit = vec![false; b];
            for a in assignment.iter_mut() {
                *a = rng.gen_range(0..b);
                hit[*a] = true;
            }
            if hit.iter().all(|&h| h) {
                found = true;
                break;
            }
        }
        if !found {
            let mut order: Vec<usize> = (0..k).collect();
            order.shuffle(&mut rng);
            for (i, &fap) in order.iter().enumerate() {
                assignment[fap] = if i < b { i } else { rng.gen_range(0..b) };
            }
        }
        let mut slots = vec![FapSet::EMPTY; b];
        for (fap, &slot) in assignment.iter().enumerate() {
            slots[slot] = slots[slot].with(fap + 1);
        }
        Self::new(k, slots, (1..=k).collect())
    }

    /// Skips validation; lets unit tests build degenerate schedules such as `K = 1`.
    #[cfg(test)]
    pub(crate) fn unchecked(faps: usize, slots: Vec<FapSet>, demand: Vec<usize>) -> Self {
        let mut slot_of = vec![0; faps];
        for (i, u) in slots.iter().enumerate() {
            for k in *u {
                slot_of[k - 1] = i + 1;
            }
        }
        RequestSchedule {
            faps,
            slots,
            slot_of,
            demand,
        }
    }

    pub fn with_demand(self, demand: Vec<usize>) -> Result<Self> {
        Self::new(self.faps, self.slots, demand)
    }

    pub fn fap_count(&self) -> usize {
        self.faps
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// `U_b` for `1 <= b <= B`; empty outside that range.
    pub fn slot(&self, b: usize) -> FapSet {
        if b == 0 {
            return FapSet::EMPTY;
        }
        self.slots.get(b - 1).copied().unwrap_or(FapSet::EMPTY)
    }

    pub fn slots(&self) -> &[FapSet] {
        &self.slots
    }

    /// Union of `U_lo ..= U_hi` (clamped to `1..=B`).
    pub fn span(&self, lo: usize, hi: usize) -> FapSet {
        (lo.max(1)..=hi.min(self.slots.len()))
            .map(|b| self.slots[b - 1])
            .fold(FapSet::EMPTY, FapSet::union)
    }

    /// The slot in which F-AP `k`'s request arrives.
    pub fn slot_of(&self, k: usize) -> usize {
        self.slot_of[k - 1]
    }

    pub fn demand(&self, k: usize) -> usize {
        self.demand[k - 1]
    }

    pub fn demands(&self) -> &[usize] {
        &self.demand
    }

    pub fn has_distinct_demand(&self) -> bool {
        let mut d = self.demand.clone();
        d.sort_unstable();
        d.windows(2).all(|w| w[0] != w[1])
    }

    /// `|U_b|` when every slot has the same size.
    pub fn uniform_slot_size(&self) -> Option<usize> {
        let l = self.slots[0].len();
        self.slots.iter().all(|u| u.len() == l).then_some(l)
    }

    /// Last slot by which F-AP `k` must have its file: `min(b + delta_b - 1, B)`.
    pub fn deadline(&self, k: usize, delta_b: usize) -> usize {
        (self.slot_of(k) + delta_b - 1).min(self.slot_count())
    }

    /// Checks that the schedule fits the given system dimensions.
    pub fn check_against(&self, params: &SystemParams) -> Result<()> {
        if self.faps != params.k {
            return Err(invalid(format!("schedule has K = {}, params K = {}", self.faps, params.k)));
        }
        if self.slots.len() != params.b {
            return Err(invalid(format!(
                "schedule has B = {}, params B = {}",
                self.slots.len(),
                params.b
            )));
        }
        if let Some(d) = self.demand.iter().find(|&&d| d > params.n) {
            return Err(invalid(format!("requested file {d} exceeds N = {}", params.n)));
        }
        Ok(())
    }
}
