use std::fmt;

use bitvec::prelude::*;

use super::{CacheLayout, Library, RequestSchedule, SystemParams};
use crate::error::{invalid, Error, Result};
use crate::fapset::FapSet;
use crate::scalar::Scalar;
use crate::MAX_SIMULATED_FAPS;

/// Identifies `W^a_{k,S}`: the bits of F-AP `k`'s requested file cached at
/// exactly the F-APs in `S` (and not at `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubfileKey {
    pub requester: usize,
    pub exclusivity: FapSet,
}

impl SubfileKey {
    pub fn new(requester: usize, exclusivity: FapSet) -> Self {
        debug_assert!(!exclusivity.contains(requester));
        SubfileKey {
            requester,
            exclusivity,
        }
    }
}

/// `W_{1,{2,3}}`, `W_{3,∅}`.
impl fmt::Display for SubfileKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exclusivity.is_empty() {
            write!(f, "W_{{{},∅}}", self.requester)
        } else {
            write!(f, "W_{{{},{}}}", self.requester, self.exclusivity)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMode {
    /// Concrete bits taken from the library.
    BitExact,
    /// Real-valued expected lengths only.
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubfileContent<T> {
    /// File positions (ascending) and the bit values found there.
    Bits {
        positions: Vec<u32>,
        bits: BitVec<u64, Lsb0>,
    },
    Length(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubfileEntry<T> {
    pub content: SubfileContent<T>,
    pub recovered: bool,
}

impl<T: Scalar> SubfileEntry<T> {
    pub fn length(&self) -> T {
        match &self.content {
            SubfileContent::Bits { bits, .. } => T::from_usize(bits.len()),
            SubfileContent::Length(len) => len.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.content {
            SubfileContent::Bits { bits, .. } => bits.is_empty(),
            SubfileContent::Length(len) => *len <= T::zero(),
        }
    }

    /// Still owed to its requester: nonempty and not yet delivered.
    pub fn is_pending(&self) -> bool {
        !self.recovered && !self.is_empty()
    }
}

/// The cloud's cache records: one entry per `(k, S)` with `k ∉ S`.
///
/// Bits of `d_k` that `k` caches itself are not entries; bit-exact tables keep
/// their positions separately as the locally held class.
#[derive(Debug, Clone, PartialEq)]
pub struct SubfileRecordTable<T> {
    faps: usize,
    file_bits: usize,
    mode: RecordMode,
    demand: Vec<usize>,
    // [(requester - 1) << K | mask]; None where mask contains the requester
    entries: Vec<Option<SubfileEntry<T>>>,
    local: Vec<Vec<u32>>,
}

fn check_size(faps: usize) -> Result<()> {
    if faps > MAX_SIMULATED_FAPS {
        return Err(Error::TooLarge {
            faps,
            limit: MAX_SIMULATED_FAPS,
        });
    }
    Ok(())
}

impl<T: Scalar> SubfileRecordTable<T> {
    fn slot_index(&self, key: SubfileKey) -> usize {
        ((key.requester - 1) << self.faps) | key.exclusivity.bits() as usize
    }

    /// Analytic-mode records: every `W_{k,S}` gets the law-of-large-numbers
    /// length for its type.
    pub fn analytic(params: &SystemParams, schedule: &RequestSchedule) -> Result<Self> {
        params.validate()?;
        schedule.check_against(params)?;
        check_size(params.k)?;
        let k_all = params.k;
        let by_type: Vec<T> = (1..=k_all).map(|s| expected_subfile_size(params, s)).collect();
        let mut entries = Vec::with_capacity(k_all << k_all);
        for requester in 1..=k_all {
            for mask in 0..(1u64 << k_all) {
                let s = FapSet::from_bits(mask);
                entries.push((!s.contains(requester)).then(|| SubfileEntry {
                    content: SubfileContent::Length(by_type[s.len()].clone()),
                    recovered: false,
                }));
            }
        }
        Ok(SubfileRecordTable {
            faps: k_all,
            file_bits: params.f,
            mode: RecordMode::Analytic,
            demand: schedule.demands().to_vec(),
            entries,
            local: vec![Vec::new(); k_all],
        })
    }

    pub fn fap_count(&self) -> usize {
        self.faps
    }

    pub fn file_bits(&self) -> usize {
        self.file_bits
    }

    pub fn mode(&self) -> RecordMode {
        self.mode
    }

    pub fn demand(&self, k: usize) -> usize {
        self.demand[k - 1]
    }

    pub fn get(&self, key: SubfileKey) -> Option<&SubfileEntry<T>> {
        if key.requester == 0 || key.requester > self.faps || key.exclusivity.contains(key.requester) {
            return None;
        }
        self.entries.get(self.slot_index(key)).and_then(Option::as_ref)
    }

    pub fn is_pending(&self, key: SubfileKey) -> bool {
        self.get(key).is_some_and(SubfileEntry::is_pending)
    }

    /// Length of the entry, zero if absent.
    pub fn length(&self, key: SubfileKey) -> T {
        self.get(key).map_or_else(T::zero, SubfileEntry::length)
    }

    /// Bit positions of a bit-exact entry.
    pub fn positions(&self, key: SubfileKey) -> Option<&[u32]> {
        match self.get(key).map(|e| &e.content) {
            Some(SubfileContent::Bits { positions, .. }) => Some(positions),
            _ => None,
        }
    }

    /// Marks an entry delivered. Recovered flags never flip back.
    pub fn mark_recovered(&mut self, key: SubfileKey) {
        let idx = self.slot_index(key);
        if let Some(Some(entry)) = self.entries.get_mut(idx) {
            entry.recovered = true;
        }
    }

    /// Positions of `d_k` cached at `k` itself (bit-exact tables only).
    pub fn locally_held(&self, k: usize) -> &[u32] {
        &self.local[k - 1]
    }

    /// All `(key, entry)` pairs for one requester, in mask order.
    pub fn entries_for(&self, k: usize) -> impl Iterator<Item = (SubfileKey, &SubfileEntry<T>)> {
        let base = (k - 1) << self.faps;
        (0..(1usize << self.faps)).filter_map(move |mask| {
            self.entries[base | mask]
                .as_ref()
                .map(|e| (SubfileKey::new(k, FapSet::from_bits(mask as u64)), e))
        })
    }

    /// Number of entries F-AP `k` is still owed.
    pub fn pending_count(&self, k: usize) -> usize {
        self.entries_for(k).filter(|(_, e)| e.is_pending()).count()
    }

    /// Total length of all entries for `k`, plus the locally held bits.
    pub fn total_length(&self, k: usize) -> T {
        self.entries_for(k)
            .fold(T::from_usize(self.local[k - 1].len()), |acc, (_, e)| acc + e.length())
    }
}

/// Expected `|W^a_{k,S}|` in bits for an encoding set of type `s` (so `|S∖{k}| = s - 1`):
/// `(M/N)^(s-1) (1 - M/N)^(K-(s-1)) F`.
pub fn expected_subfile_size<T: Scalar>(params: &SystemParams, s: usize) -> T {
    assert!((1..=params.k).contains(&s), "type s = {s} out of 1..={}", params.k);
    let q = T::from_real(params.m) / T::from_usize(params.n);
    let rest = T::one() - q.clone();
    q.powu(s - 1) * rest.powu(params.k - (s - 1)) * T::from_usize(params.f)
}

/// Splits every requested file into its exclusivity classes.
///
/// For each requester `k`, entry `(k, S)` holds exactly the bits of `W_{d_k}`
/// cached at every F-AP in `S` and nowhere else; bits cached at `k` go to the
/// locally held class. Together they partition the file's `F` bits.
pub fn partition_into_subfiles<T: Scalar>(
    library: &Library,
    caches: &CacheLayout,
    schedule: &RequestSchedule,
) -> Result<SubfileRecordTable<T>> {
    let faps = schedule.fap_count();
    check_size(faps)?;
    if caches.fap_count() != faps {
        return Err(invalid(format!(
            "cache layout has {} F-APs, schedule has {faps}",
            caches.fap_count()
        )));
    }
    if caches.file_count() != library.file_count() || caches.file_bits() != library.file_bits() {
        return Err(invalid("cache layout does not match the library"));
    }
    if let Some(d) = schedule.demands().iter().find(|&&d| d > library.file_count()) {
        return Err(invalid(format!("requested file {d} is not in the library")));
    }

    let f = library.file_bits();
    let mut positions: Vec<Vec<u32>> = vec![Vec::new(); faps << faps];
    let mut local = vec![Vec::new(); faps];
    let mut holders_cache: Vec<Option<Vec<FapSet>>> = vec![None; library.file_count()];
    for k in 1..=faps {
        let file = schedule.demand(k);
        let holders = holders_cache[file - 1].get_or_insert_with(|| caches.holders(file));
        for (pos, &h) in holders.iter().enumerate().take(f) {
            if h.contains(k) {
                local[k - 1].push(pos as u32);
            } else {
                positions[((k - 1) << faps) | h.bits() as usize].push(pos as u32);
            }
        }
    }

    let entries = positions
        .into_iter()
        .enumerate()
        .map(|(idx, pos)| {
            let requester = (idx >> faps) + 1;
            let mask = FapSet::from_bits((idx & ((1usize << faps) - 1)) as u64);
            if mask.contains(requester) {
                return None;
            }
            let file = library.file(schedule.demand(requester));
            let bits = pos.iter().map(|&p| file[p as usize]).collect();
            Some(SubfileEntry {
                content: SubfileContent::Bits {
                    positions: pos,
                    bits,
                },
                recovered: false,
            })
        })
        .collect();

    Ok(SubfileRecordTable {
        faps,
        file_bits: f,
        mode: RecordMode::BitExact,
        demand: schedule.demands().to_vec(),
        entries,
        local,
    })
}
