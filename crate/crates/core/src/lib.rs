//! Slot-synchronous sidelink simulator and analysis toolkit for
//! kilometre-scale air-to-air links.
//!
//! The crate is organized around the pipeline a study of such links walks
//! through:
//!
//! - [`linkbudget`] — free-space path loss, received power, noise floor,
//!   and maximum achievable distance;
//! - [`mobility`] — 3D trajectories, relative speed, and the Doppler
//!   feasibility gate;
//! - [`phy`] — numerology timing, slot formats, and the propagation-delay
//!   guard/inhibition arithmetic;
//! - [`mac`] — autonomous (mode-2) resource allocation: sensing, exclusion
//!   with threshold escalation, semi-persistent and dynamic scheduling;
//! - [`sim`] — the deterministic slot-driven engine tying it together;
//! - [`scenario`] — the unit-suffixed scenario file format;
//! - [`figures`] — sweep generators behind the CSV figure outputs.

pub mod error;
pub mod figures;
pub mod linkbudget;
pub mod mac;
pub mod metrics;
pub mod mobility;
pub mod phy;
pub mod scenario;
pub mod sim;
mod units;

pub use error::{Error, Result};
pub use linkbudget::{LinkParams, McsEntry, McsTable};
pub use mac::{ExclusionConfig, SciReservation, SelectionWindow, SensingHistory, SpsState};
//TEMPpub use metrics::{EventRecord, MetricsReport};
pub use mobility::{NodeKinematics, Trajectory};
pub use phy::{AllocationMode, GridConfig, Numerology, ResourceId, SlotFormat};
//TEMPpub use scenario::ScenarioConfig;

/// Derive a decorrelated child seed from a run seed and a stream tag.
///
/// splitmix64 over the xor of the inputs; used to give every node and
/// every purpose (traffic, selection) its own deterministic RNG stream.
pub fn derive_seed(run_seed: u64, stream: u64) -> u64 {
    let mut z = run_seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
