//! System model: parameters, file library, decentralized placement, request
//! schedules and the subfile partition the cloud keeps as cache records.

mod library;
mod params;
mod schedule;
mod subfile;

pub use library::{generate_library, place_caches, CacheContent, CacheLayout, Library};
pub use params::SystemParams;
pub use schedule::RequestSchedule;
pub use subfile::{
    expected_subfile_size, partition_into_subfiles, RecordMode, SubfileContent, SubfileEntry,
    SubfileKey, SubfileRecordTable,
};
