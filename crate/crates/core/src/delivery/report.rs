use std::collections::BTreeMap;

use super::TransmissionRecord;
use crate::scalar::Scalar;

/// Delivered bits, per slot and in total, normalized by `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport<T> {
    pub total_bits: T,
    pub normalized_load: T,
    pub per_slot_bits: BTreeMap<usize, T>,
    pub transmission_count: usize,
}

pub fn measured_load<T: Scalar>(log: &[TransmissionRecord<T>], file_bits: usize) -> LoadReport<T> {
    let mut per_slot_bits = BTreeMap::new();
    let mut total = T::zero();
    for record in log {
        let slot = per_slot_bits.entry(record.slot).or_insert_with(T::zero);
        *slot = slot.clone() + record.payload_bits.clone();
        total = total + record.payload_bits.clone();
    }
    LoadReport {
        normalized_load: total.clone() / T::from_usize(file_bits),
        total_bits: total,
        per_slot_bits,
        transmission_count: log.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fapset::FapSet;

    fn rec(slot: usize, bits: f64) -> TransmissionRecord<f64> {
        TransmissionRecord {
            slot,
            first: FapSet::singleton(1),
            second: FapSet::EMPTY,
            collapsed: FapSet::singleton(1),
            included: Vec::new(),
            payload_bits: bits,
            payload: None,
        }
    }

    #[test]
    fn sums_per_slot() {
        let report = measured_load(&[rec(2, 3.0), rec(2, 1.0), rec(4, 4.0)], 16);
        assert_eq!(report.total_bits, 8.0);
        assert_eq!(report.normalized_load, 0.5);
        assert_eq!(report.per_slot_bits.into_iter().collect::<Vec<_>>(), [(2, 4.0), (4, 4.0)]);
        assert_eq!(report.transmission_count, 3);
        assert_eq!(measured_load::<f64>(&[], 16).normalized_load, 0.0);
    }
}
