//! Encoding sets, the collapsing rule and the deadline-driven partition of an
//! encoding set into subsets that can each be served by one coded transmission.

use crate::error::{invalid, Result};
use crate::fapset::FapSet;
use crate::system::RequestSchedule;

/// A nonempty set of F-APs that one coded-multicasting content can serve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodingSet(FapSet);

impl EncodingSet {
    pub fn new(members: FapSet) -> Result<Self> {
        if members.is_empty() {
            return Err(invalid("an encoding set must be nonempty"));
        }
        Ok(EncodingSet(members))
    }

    pub fn members(self) -> FapSet {
        self.0
    }

    /// The type `s = |S|`.
    pub fn kind(self) -> usize {
        self.0.len()
    }
}

impl From<EncodingSet> for FapSet {
    fn from(s: EncodingSet) -> FapSet {
        s.0
    }
}

/// Collapsing rule: with only `arrived` known, a transmission for `S` targets `S ∩ arrived`.
pub fn collapse(s: FapSet, arrived: FapSet) -> FapSet {
    s.intersection(arrived)
}

/// The active interval `(beta, gamma]` of an encoding set: its first member
/// requests in slot `beta + 1`, its last in slot `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActiveWindow {
    pub beta: usize,
    pub gamma: usize,
    /// `B_S`, number of slots in `(beta, gamma]`, idle ones included.
    pub active_slot_count: usize,
}

pub fn active_window(s: EncodingSet, schedule: &RequestSchedule) -> Result<ActiveWindow> {
    let members = s.members();
    if members.last().is_some_and(|k| k > schedule.fap_count()) {
        return Err(invalid(format!(
            "encoding set {members} names F-APs beyond K = {}",
            schedule.fap_count()
        )));
    }
    let (mut first, mut last) = (usize::MAX, 0);
    for k in members {
        let b = schedule.slot_of(k);
        first = first.min(b);
        last = last.max(b);
    }
    Ok(ActiveWindow {
        beta: first - 1,
        gamma: last,
        active_slot_count: last - (first - 1),
    })
}

/// Chronologically ordered split of an encoding set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub subsets: Vec<FapSet>,
    pub eta: usize,
}

/// Partitions `S` so that each subset's requests fall within `delta_b` consecutive slots.
///
/// Starting from the first slot holding a member of the residual set, a full
/// window of `delta_b` slots is taken while the active interval still reaches
/// past it; otherwise the remainder up to `gamma` forms the last subset. `gamma`
/// stays at the value computed for the original set.
pub fn partition_encoding_set(
    s: EncodingSet,
    schedule: &RequestSchedule,
    delta_b: usize,
) -> Result<PartitionResult> {
    if delta_b == 0 || delta_b > schedule.slot_count() {
        return Err(invalid(format!(
            "delta_b = {delta_b} must lie in 1..={}",
            schedule.slot_count()
        )));
    }
    let window = active_window(s, schedule)?;
    let mut beta = window.beta;
    let gamma = window.gamma;
    let mut residual = s.members();
    let mut subsets = Vec::new();
    // the residual is nonempty, so some slot in (beta, gamma] meets it
    while !residual.is_empty() {
        while schedule.slot(beta + 1).is_disjoint(residual) {
            beta += 1;
        }
        let part = if gamma - beta >= delta_b {
            let part = residual.intersection(schedule.span(beta + 1, beta + delta_b));
            beta += delta_b;
            part
        } else {
            residual.intersection(schedule.span(beta + 1, gamma))
        };
        residual = residual.difference(part);
        subsets.push(part);
    }
    let eta = subsets.len();
    Ok(PartitionResult { subsets, eta })
}

/// `eta_S(delta_b)`, the number of subsets `S` is split into.
pub fn eta(s: EncodingSet, schedule: &RequestSchedule, delta_b: usize) -> Result<usize> {
    partition_encoding_set(s, schedule, delta_b).map(|p| p.eta)
}
