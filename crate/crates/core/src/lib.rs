//! Decentralized asynchronous coded caching for fog radio access networks.
//!
//! `K` fog access points (F-APs) cache random parts of an `N`-file library.
//! Requests arrive over `B` slots and each must be served within `delta_b`
//! slots. The cloud multicasts XOR contents that several F-APs decode at
//! once. This crate simulates placement and delivery at the bit level,
//! measures the fronthaul load and evaluates its closed form and bounds.
//!
//! ```
//! use fogcache::{run_delivery, AnalyticRecords, DeliveryOptions, RequestSchedule, SystemParams};
//!
//! let params = SystemParams::new(4, 4, 2.0, 16, 4, 2)?;
//! let schedule = RequestSchedule::fixed_l(4, 4, 1, None)?;
//! let records = AnalyticRecords::analytic(&params, &schedule)?;
//! let out = run_delivery(&params, &schedule, records, DeliveryOptions::default())?;
//! assert_eq!(out.log.len(), 23);
//! assert_eq!(out.report.normalized_load, 1.4375);
//! # Ok::<(), fogcache::Error>(())
//! ```

pub mod analytics;
pub mod delivery;
mod error;
pub mod fapset;
pub mod partition;
pub mod rng;
pub mod scalar;
pub mod system;

use num_rational::BigRational;

pub use analytics::{closed_form_load, load_bounds, mn_sync_load, uncoded_load, FixedLConfig};
pub use delivery::{
    check_decodability, decode_fap, measured_load, run_delivery, Decision, DeliveryOptions, DeliveryOutcome,
    DeliveryState, LoadReport, SkipRule, TransmissionLog, TransmissionRecord,
};
pub use error::{Error, Result};
pub use fapset::FapSet;
pub use partition::{active_window, collapse, eta, partition_encoding_set, EncodingSet, PartitionResult};
pub use scalar::Scalar;
pub use system::{
    expected_subfile_size, generate_library, partition_into_subfiles, place_caches, CacheContent, CacheLayout,
    Library, RecordMode, RequestSchedule, SubfileKey, SubfileRecordTable, SystemParams,
};

/// Largest `K` the delivery simulation accepts; its record table has `K 2^K` slots.
pub const MAX_SIMULATED_FAPS: usize = 16;

pub type Load = f64;
pub type ExactLoad = BigRational;
pub type AnalyticRecords = SubfileRecordTable<f64>;
pub type ExactRecords = SubfileRecordTable<BigRational>;
pub type Outcome = DeliveryOutcome<f64>;
pub type ExactOutcome = DeliveryOutcome<BigRational>;
