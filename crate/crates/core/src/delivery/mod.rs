//! Slot-by-slot delivery: the asynchronous transmission method for
//! `delta_b < B`, the synchronous method for `delta_b = B`, the skip rule,
//! zero-padded XOR payloads and cache-record updates.
//!
//! At the end of slot `b` (with `delta_b <= b < B`) the cloud must finish the
//! F-APs of `U_{b - delta_b + 1}`. For every type `s` (descending), every
//! `chi`, and every pair `S1 ⊆ U_{b-delta_b+1}`, `S2 ⊆ K ∖ U_{b-delta_b+1}`
//! with `|S1| = chi`, `|S2| = s - chi`, it considers the encoding set
//! `S = S1 ∪ S2` collapsed onto the active set. A content is sent only if some
//! F-AP of `S1` still misses its piece `W_{k,S∖{k}}`; every other active
//! member of `S` whose piece is still outstanding rides along. At slot `B`
//! the same sweep runs with `S1` ranging over the whole active set.

mod decode;
mod report;

use bitvec::prelude::*;

pub use decode::{check_decodability, decode_fap};
pub use report::{measured_load, LoadReport};

use crate::error::{invalid, Error, Result};
use crate::fapset::FapSet;
use crate::partition::EncodingSet;
use crate::scalar::Scalar;
use crate::system::{RecordMode, RequestSchedule, SubfileContent, SubfileKey, SubfileRecordTable, SystemParams};

/// How the skip decision is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SkipRule {
    /// Send iff some F-AP of `S1` still needs its subfile.
    #[default]
    DeadlineNeed,
    /// Negated decision; only for fault-injection checks.
    Inverted,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DeliveryOptions {
    pub skip_rule: SkipRule,
    /// Keep every considered `(S1, S2)` pair, including skipped ones.
    pub record_trace: bool,
}

impl DeliveryOptions {
    pub fn traced() -> Self {
        DeliveryOptions {
            record_trace: true,
            ..Default::default()
        }
    }
}

/// One coded-multicasting content `X_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionRecord<T> {
    pub slot: usize,
    /// `S1`: the F-APs due (or, at slot `B`, active) the content is built for.
    pub first: FapSet,
    /// `S2`: the rest of the encoding set.
    pub second: FapSet,
    /// `S ∩ U^a`.
    pub collapsed: FapSet,
    /// Subfiles XORed into the payload.
    pub included: Vec<SubfileKey>,
    /// Length of the longest included subfile.
    pub payload_bits: T,
    /// The XOR itself, bit-exact mode only.
    pub payload: Option<BitVec<u64, Lsb0>>,
}

impl<T> TransmissionRecord<T> {
    pub fn encoding_set(&self) -> FapSet {
        self.first.union(self.second)
    }

    pub fn kind(&self) -> usize {
        self.encoding_set().len()
    }

    pub fn chi(&self) -> usize {
        self.first.len()
    }
}

impl<T: Scalar> TransmissionRecord<T> {
    /// Tab-separated `slot, s, chi, S1, S2, collapsed set, payload bits`.
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.slot,
            self.kind(),
            self.chi(),
            self.first,
            self.second,
            self.collapsed,
            self.payload_bits
        )
    }
}

/// Ordered transmissions of one delivery run.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionLog<T>(pub Vec<TransmissionRecord<T>>);

impl<T> Default for TransmissionLog<T> {
    fn default() -> Self {
        TransmissionLog(Vec::new())
    }
}

impl<T> std::ops::Deref for TransmissionLog<T> {
    type Target = [TransmissionRecord<T>];

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl<T: Scalar> TransmissionLog<T> {
    /// One line per transmission, see [`TransmissionRecord::to_tsv`].
    pub fn to_tsv(&self) -> String {
        self.0.iter().map(|r| r.to_tsv() + "\n").collect()
    }
}

/// A considered `(S1, S2)` pair and what happened to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub slot: usize,
    pub first: FapSet,
    pub second: FapSet,
    pub active: FapSet,
    /// Index into the log, `None` when skipped.
    pub transmission: Option<usize>,
}

impl Decision {
    pub fn kind(&self) -> usize {
        self.first.union(self.second).len()
    }

    pub fn chi(&self) -> usize {
        self.first.len()
    }
}

/// Mutable delivery state: `U^a`, the cache records and the log so far.
#[derive(Debug, Clone)]
pub struct DeliveryState<T> {
    pub active: FapSet,
    pub records: SubfileRecordTable<T>,
    pub log: TransmissionLog<T>,
    pub slot: usize,
    skip_rule: SkipRule,
}

impl<T: Scalar> DeliveryState<T> {
    pub fn new(records: SubfileRecordTable<T>, skip_rule: SkipRule) -> Self {
        DeliveryState {
            active: FapSet::EMPTY,
            records,
            log: TransmissionLog::default(),
            slot: 1,
            skip_rule,
        }
    }

    fn piece(s: FapSet, k: usize) -> SubfileKey {
        SubfileKey::new(k, s.without(k))
    }

    /// Whether a content for `s` is worth sending on behalf of `first`.
    pub fn should_transmit(&self, first: FapSet, s: EncodingSet) -> bool {
        let members = s.members();
        let needed = first
            .intersection(members)
            .iter()
            .any(|k| self.records.is_pending(Self::piece(members, k)));
        match self.skip_rule {
            SkipRule::DeadlineNeed => needed,
            SkipRule::Inverted => !needed,
        }
    }

    /// XOR of the outstanding pieces `W_{k,S∖{k}}` over `k ∈ S ∩ U^a`, each
    /// zero-padded to the longest. Does not touch the records.
    pub fn build_coded_content(&self, first: FapSet, second: FapSet) -> TransmissionRecord<T> {
        let s = first.union(second);
        let collapsed = s.intersection(self.active);
        let included: Vec<SubfileKey> = collapsed
            .iter()
            .map(|k| Self::piece(s, k))
            .filter(|&key| self.records.is_pending(key))
            .collect();
        let payload_bits = included
            .iter()
            .map(|&key| self.records.length(key))
            .fold(T::zero(), T::max_of);
        let payload = (self.records.mode() == RecordMode::BitExact).then(|| {
            let pieces: Vec<&BitSlice<u64, Lsb0>> = included
                .iter()
                .filter_map(|&key| match self.records.get(key).map(|e| &e.content) {
                    Some(SubfileContent::Bits { bits, .. }) => Some(bits.as_bitslice()),
                    _ => None,
                })
                .collect();
            xor_padded(&pieces)
        });
        TransmissionRecord {
            slot: self.slot,
            first,
            second,
            collapsed,
            included,
            payload_bits,
            payload,
        }
    }

    /// Appends a transmission and records its pieces as delivered.
    pub fn emit(&mut self, record: TransmissionRecord<T>) -> usize {
        for &key in &record.included {
            self.records.mark_recovered(key);
        }
        self.log.0.push(record);
        self.log.len() - 1
    }

    fn consider(&mut self, first: FapSet, second: FapSet, trace: Option<&mut Vec<Decision>>) {
        let s = EncodingSet::new(first.union(second)).expect("S1 is nonempty");
        let transmission = self.should_transmit(first, s).then(|| {
            let record = self.build_coded_content(first, second);
            self.emit(record)
        });
        if let Some(trace) = trace {
            trace.push(Decision {
                slot: self.slot,
                first,
                second,
                active: self.active,
                transmission,
            });
        }
    }

    /// Every `(S1, S2)` with `S1 ⊆ due`, `S2 ⊆ K ∖ due`, types descending,
    /// `chi` ascending, subsets in lexicographic order.
    fn sweep(&mut self, due: FapSet, mut trace: Option<&mut Vec<Decision>>) {
        let k_all = self.records.fap_count();
        let others = FapSet::full(k_all).difference(due);
        let d = due.len();
        for s in (1..=k_all).rev() {
            let chi_lo = 1.max((s + d).saturating_sub(k_all));
            let chi_hi = s.min(d);
            for chi in chi_lo..=chi_hi {
                for first in due.subsets_of_size(chi) {
                    for second in others.subsets_of_size(s - chi) {
                        self.consider(first, second, trace.as_deref_mut());
                    }
                }
            }
        }
    }

    /// Synchronous method: every `S ⊆ K`, types descending.
    fn sweep_all(&mut self, mut trace: Option<&mut Vec<Decision>>) {
        let all = FapSet::full(self.records.fap_count());
        for s in (1..=all.len()).rev() {
            for set in all.subsets_of_size(s) {
                self.consider(set, FapSet::EMPTY, trace.as_deref_mut());
            }
        }
    }

    fn check_deadlines(&self, due: FapSet) -> Result<()> {
        for k in due {
            let pending = self.records.pending_count(k);
            if pending > 0 {
                return Err(Error::DeadlineViolation {
                    fap: k,
                    slot: self.slot,
                    pending,
                });
            }
        }
        Ok(())
    }
}

fn xor_padded(pieces: &[&BitSlice<u64, Lsb0>]) -> BitVec<u64, Lsb0> {
    let len = pieces.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut acc = bitvec![u64, Lsb0; 0; len];
    for piece in pieces {
        *acc.get_mut(..piece.len()).expect("within padded length") ^= *piece;
    }
    acc
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct DeliveryOutcome<T> {
    pub log: TransmissionLog<T>,
    pub trace: Vec<Decision>,
    pub report: LoadReport<T>,
    /// Final cache records, with recovered flags set.
    pub records: SubfileRecordTable<T>,
    /// For each F-AP, the last slot in which it received a piece (0 if it needed none).
    pub completed_at: Vec<usize>,
}

/// Runs the delivery phase over all `B` slots.
///
/// Fails with [`Error::DeadlineViolation`] if some F-AP still misses pieces
/// after its deadline slot; with the standard skip rule this never happens.
pub fn run_delivery<T: Scalar>(
    params: &SystemParams,
    schedule: &RequestSchedule,
    records: SubfileRecordTable<T>,
    options: DeliveryOptions,
) -> Result<DeliveryOutcome<T>> {
    params.validate()?;
    schedule.check_against(params)?;
    if records.fap_count() != params.k || records.file_bits() != params.f {
        return Err(invalid("cache records do not match the system parameters"));
    }
    if (1..=params.k).any(|k| records.demand(k) != schedule.demand(k)) {
        return Err(invalid("cache records were built for a different demand"));
    }

    let b_all = params.b;
    let delta_b = params.delta_b;
    let mut state = DeliveryState::new(records, options.skip_rule);
    let mut trace = options.record_trace.then(Vec::new);

    for b in 1..=b_all {
        state.slot = b;
        state.active = state.active.union(schedule.slot(b));
        if delta_b < b_all {
            if b < delta_b {
                continue;
            }
            if b < b_all {
                let due = schedule.slot(b + 1 - delta_b);
                state.sweep(due, trace.as_mut());
                state.check_deadlines(due)?;
                state.active = state.active.difference(due);
            } else {
                let due = state.active;
                state.sweep(due, trace.as_mut());
                state.check_deadlines(due)?;
            }
        } else if b == b_all {
            state.sweep_all(trace.as_mut());
            state.check_deadlines(FapSet::full(params.k))?;
        }
    }

    let report = measured_load(&state.log, params.f);
    let mut completed_at = vec![0; params.k];
    for record in state.log.iter() {
        for key in &record.included {
            completed_at[key.requester - 1] = record.slot;
        }
    }
    Ok(DeliveryOutcome {
        log: state.log,
        trace: trace.unwrap_or_default(),
        report,
        records: state.records,
        completed_at,
    })
}
