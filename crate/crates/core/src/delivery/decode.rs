use bitvec::prelude::*;

use super::{DeliveryOutcome, TransmissionRecord};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::system::{CacheContent, CacheLayout, Library, RecordMode, RequestSchedule, SubfileKey, SubfileRecordTable};

/// Reassembles F-AP `k`'s requested file from its cache and every
/// transmission up to `through_slot`.
///
/// For each content that carries `W_{k,S∖{k}}`, the other pieces
/// `W_{j,S∖{j}}` are cached at `k` (since `k ∈ S∖{j}`), so XORing them back
/// out of the zero-padded payload leaves `k`'s piece in the leading bits.
pub fn decode_fap<T: Scalar>(
    k: usize,
    log: &[TransmissionRecord<T>],
    records: &SubfileRecordTable<T>,
    cache: &CacheContent,
    through_slot: usize,
) -> Result<BitVec<u64, Lsb0>> {
    if records.mode() != RecordMode::BitExact {
        return Err(invalid("decoding needs bit-exact cache records"));
    }
    if cache.fap() != k {
        return Err(invalid(format!("cache content belongs to F-AP {}, not {k}", cache.fap())));
    }
    let file = records.demand(k);
    let mut known: Vec<Option<bool>> = vec![None; records.file_bits()];
    for &pos in records.locally_held(k) {
        known[pos as usize] = cache.bit(file, pos);
    }

    for record in log.iter().filter(|r| r.slot <= through_slot) {
        let Some(&mine) = record.included.iter().find(|key| key.requester == k) else {
            continue;
        };
        let Some(payload) = &record.payload else {
            return Err(invalid("transmission carries no payload bits"));
        };
        let mut residue = payload.clone();
        let mut blind = false;
        for &other in record.included.iter().filter(|key| key.requester != k) {
            blind |= !cancel(&mut residue, other, records, cache);
        }
        if blind {
            continue;
        }
        let positions = records.positions(mine).unwrap_or_default();
        for (i, &pos) in positions.iter().enumerate() {
            known[pos as usize] = residue.get(i).map(|b| *b);
        }
    }

    let missing = known.iter().filter(|b| b.is_none()).count();
    if missing > 0 {
        return Err(Error::DecodeFailure { fap: k, file, missing });
    }
    Ok(known.into_iter().map(|b| b.unwrap_or(false)).collect())
}

// XORs a side piece out of the residue using cached bits; false if any is unknown.
fn cancel<T: Scalar>(
    residue: &mut BitVec<u64, Lsb0>,
    key: SubfileKey,
    records: &SubfileRecordTable<T>,
    cache: &CacheContent,
) -> bool {
    let file = records.demand(key.requester);
    for (i, &pos) in records.positions(key).unwrap_or_default().iter().enumerate() {
        match (cache.bit(file, pos), residue.get_mut(i)) {
            (Some(bit), Some(mut slot)) => *slot ^= bit,
            _ => return false,
        }
    }
    true
}

/// Decodes every F-AP at its deadline `min(b_k + delta_b - 1, B)` and compares
/// against the library. Returns the number of F-APs checked.
pub fn check_decodability<T: Scalar>(
    library: &Library,
    caches: &CacheLayout,
    schedule: &RequestSchedule,
    outcome: &DeliveryOutcome<T>,
    delta_b: usize,
) -> Result<usize> {
    for k in 1..=schedule.fap_count() {
        let cache = caches.contents(k, library);
        let deadline = schedule.deadline(k, delta_b);
        let decoded = decode_fap(k, &outcome.log, &outcome.records, &cache, deadline)?;
        let file = schedule.demand(k);
        let wrong = decoded
            .iter()
            .by_vals()
            .zip(library.file(file).iter().by_vals())
            .filter(|(a, b)| a != b)
            .count();
        if wrong > 0 {
            return Err(Error::DecodeFailure {
                fap: k,
                file,
                missing: wrong,
            });
        }
    }
    Ok(schedule.fap_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delivery::{run_delivery, DeliveryOptions};
    use crate::system::{generate_library, partition_into_subfiles, place_caches, SystemParams};

    fn run(k: usize, b: usize, m: f64, f: usize, delta_b: usize, seed: u64) -> (Library, CacheLayout, RequestSchedule, DeliveryOutcome<f64>) {
        let p = SystemParams::new(k, k.max(4) + 2, m, f, b, delta_b).unwrap();
        let s = RequestSchedule::random(k, b, seed).unwrap();
        let lib = generate_library(&p, seed).unwrap();
        let caches = place_caches(&p, seed).unwrap();
        let table = partition_into_subfiles(&lib, &caches, &s).unwrap();
        let out = run_delivery(&p, &s, table, DeliveryOptions::default()).unwrap();
        (lib, caches, s, out)
    }

    #[test]
    fn every_fap_decodes_by_its_deadline() {
        for delta_b in 1..=4 {
            for seed in 0..4 {
                let (lib, caches, s, out) = run(6, 4, 2.0, 300, delta_b, seed);
                assert_eq!(check_decodability(&lib, &caches, &s, &out, delta_b), Ok(6));
            }
        }
    }

    #[test]
    fn decoding_early_leaves_bits_missing() {
        let (lib, caches, s, out) = run(4, 4, 1.5, 400, 2, 1);
        let k = s.slot(4).first().unwrap();
        let cache = caches.contents(k, &lib);
        assert!(matches!(
            decode_fap(k, &out.log, &out.records, &cache, 1),
            Err(Error::DecodeFailure { .. })
        ));
        let full = decode_fap(k, &out.log, &out.records, &cache, 4).unwrap();
        assert_eq!(full.as_bitslice(), lib.file(s.demand(k)));
    }

    #[test]
    fn analytic_records_cannot_decode() {
        let p = SystemParams::new(4, 4, 2.0, 16, 4, 2).unwrap();
        let s = RequestSchedule::fixed_l(4, 4, 1, None).unwrap();
        let lib = generate_library(&p, 0).unwrap();
        let caches = place_caches(&p, 0).unwrap();
        let table = SubfileRecordTable::<f64>::analytic(&p, &s).unwrap();
        let out = run_delivery(&p, &s, table, DeliveryOptions::default()).unwrap();
        let cache = caches.contents(1, &lib);
        assert!(matches!(
            decode_fap(1, &out.log, &out.records, &cache, 4),
            Err(Error::InvalidParams(_))
        ));
    }
}
