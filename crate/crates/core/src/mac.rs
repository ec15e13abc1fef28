//! Autonomous (mode-2) resource allocation: sensing-window bookkeeping,
//! candidate exclusion with RSRP threshold escalation, semi-persistent
//! scheduling, and per-packet dynamic scheduling.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::phy::{usable_slot, GridConfig, ResourceId};

// ---------------------------------------------------------------------------
// Sensing
// ---------------------------------------------------------------------------

/// A decoded control-information record: some sender has reserved a future
/// resource, heard at `heard_at_slot` with the given received power.
/// `rri_s == 0` means a one-shot reservation with no periodic extension.
#[derive(Debug, Clone, PartialEq)]
pub struct SciReservation {
    pub sender: usize,
    pub reserved: ResourceId,
    pub rri_s: f64,
    pub rsrp_dbm: f64,
    pub heard_at_slot: u64,
}

/// Time-ordered record of everything a node heard (and of the slots it
/// could not hear because it was transmitting itself). Entries older than
/// the sensing window are evicted; future own-transmission slots are kept
/// because the node already knows it will be deaf in them.
#[derive(Debug, Clone)]
pub struct SensingHistory {
    pub window_s: f64,
    entries: VecDeque<SciReservation>,
    own_tx_slots: BTreeSet<u64>,
}

impl SensingHistory {
    pub fn new(window_s: f64) -> Self {
        SensingHistory {
            window_s,
            entries: VecDeque::new(),
            own_tx_slots: BTreeSet::new(),
        }
    }

    pub fn record_sci(&mut self, sci: SciReservation) {
        self.entries.push_back(sci);
    }

    pub fn record_own_tx(&mut self, slot: u64) {
        self.own_tx_slots.insert(slot);
    }

    pub fn entries(&self) -> impl Iterator<Item = &SciReservation> {
        self.entries.iter()
    }

    pub fn own_tx_slots(&self) -> &BTreeSet<u64> {
        &self.own_tx_slots
    }

    /// Drop entries (and past own-transmission slots) that fell out of the
    /// sensing window ending at `now_slot`.
    pub fn evict(&mut self, now_slot: u64, slot_duration_s: f64) {
        let window_slots = (self.window_s / slot_duration_s).round() as u64;
        let horizon = now_slot.saturating_sub(window_slots);
        while self
            .entries
            .front()
            .is_some_and(|e| e.heard_at_slot < horizon)
        {
            self.entries.pop_front();
        }
        self.own_tx_slots = self.own_tx_slots.split_off(&horizon);
    }
}

// ---------------------------------------------------------------------------
// Selection window
// ---------------------------------------------------------------------------

/// Future slot interval a resource may be drawn from, together with the
/// subchannel footprint of the pending transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionWindow {
    pub first_slot: u64,
    pub last_slot: u64,
    pub subchannel_count: u16,
}

impl SelectionWindow {
    /// Window `[generated + t1, generated + t2]` quantized to whole slots.
    pub fn from_times(
        generated_s: f64,
        t1_s: f64,
        t2_s: f64,
        slot_duration_s: f64,
        subchannel_count: u16,
    ) -> Self {
        let first = ((generated_s + t1_s) / slot_duration_s - 1e-9).ceil().max(0.0) as u64;
        let last = ((generated_s + t2_s) / slot_duration_s + 1e-9).floor().max(0.0) as u64;
        SelectionWindow {
            first_slot: first,
            last_slot: last,
            subchannel_count,
        }
    }

    /// All candidate resources: every bitmap-usable slot in the window,
    /// every contiguous subchannel placement, in canonical order.
    pub fn candidates(&self, grid: &GridConfig) -> Vec<ResourceId> {
        let mut out = Vec::new();
        if self.subchannel_count == 0 || self.subchannel_count > grid.num_subchannels {
            return out;
        }
        let positions = grid.num_subchannels - self.subchannel_count + 1;
        for slot in self.first_slot..=self.last_slot {
            if !usable_slot(slot, grid) {
                continue;
            }
            for start in 0..positions {
                out.push(ResourceId {
                    slot_index: slot,
                    subchannel_start: start,
                    subchannel_count: self.subchannel_count,
                });
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Exclusion
// ---------------------------------------------------------------------------

/// Knobs for the sensing-based exclusion step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionConfig {
    /// Reservations measured above this power mark their resource busy.
    pub rsrp_threshold_init_dbm: f64,
    /// Escalation step when too few resources survive.
    pub threshold_step_db: f64,
    /// Minimum fraction of the window that must remain available.
    pub min_available_ratio: f64,
}

impl Default for ExclusionConfig {
    fn default() -> Self {
        ExclusionConfig {
            rsrp_threshold_init_dbm: -126.0,
            threshold_step_db: 3.0,
            min_available_ratio: 0.20,
        }
    }
}

impl ExclusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_step_db > 0.0) {
            return Err(Error::invalid("exclusion config", "threshold_step must be > 0"));
        }
        if !(self.min_available_ratio > 0.0 && self.min_available_ratio <= 1.0) {
            return Err(Error::invalid(
                "exclusion config",
                "min_available_ratio must be in (0, 1]",
            ));
        }
        Ok(())
    }
}

/// Result of the exclusion step, with enough bookkeeping to audit the
/// escalation behaviour.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionOutcome {
    /// Surviving candidates in canonical order.
    pub available: Vec<ResourceId>,
    pub final_threshold_dbm: f64,
    pub escalations: u32,
    /// Total candidates in the window before any exclusion.
    pub window_candidates: usize,
}

/// Extend every heard reservation periodically by its RRI and keep the
/// occurrences that land inside the selection window. One-shot
/// reservations (`rri_s == 0`) project only their single resource.
pub fn project_reservations(
    history: &SensingHistory,
    window: &SelectionWindow,
    slot_duration_s: f64,
) -> Vec<(ResourceId, f64)> {
    let mut out = Vec::new();
    for sci in history.entries() {
        if sci.rri_s == 0.0 {
            if sci.reserved.slot_index >= window.first_slot
                && sci.reserved.slot_index <= window.last_slot
            {
                out.push((sci.reserved, sci.rsrp_dbm));
            }
            continue;
        }
        let rri_slots = ((sci.rri_s / slot_duration_s).round() as u64).max(1);
        let mut slot = sci.reserved.slot_index;
        while slot <= window.last_slot {
            if slot >= window.first_slot {
                out.push((
                    ResourceId {
                        slot_index: slot,
                        ..sci.reserved
                    },
                    sci.rsrp_dbm,
                ));
            }
            slot += rri_slots;
        }
    }
    out
}

/// Sensing-based candidate exclusion.
///
/// Candidates overlapping a projected reservation louder than the RSRP
/// threshold are dropped, as are candidates in slots the node transmits in
/// itself (it cannot have sensed those, and cannot receive there either).
/// If fewer than `min_available_ratio` of the window survives, the
/// threshold is raised by `threshold_step_db` and the RSRP pass repeats;
/// the loop ends as soon as the ratio is met or the threshold has climbed
/// above every projected power.
pub fn exclude(
    window: &SelectionWindow,
    grid: &GridConfig,
    projected: &[(ResourceId, f64)],
    own_tx_slots: &BTreeSet<u64>,
    cfg: &ExclusionConfig,
) -> Result<ExclusionOutcome> {
    let all = window.candidates(grid);
    if all.is_empty() {
        return Err(Error::EmptySelectionWindow);
    }
    let total = all.len();
    let needed = cfg.min_available_ratio * total as f64;

    // Half-duplex exclusions never re-enter, whatever the threshold does.
    let eligible: Vec<ResourceId> = all
        .into_iter()
        .filter(|c| !own_tx_slots.contains(&c.slot_index))
        .collect();

    // Loudest projection touching each eligible candidate.
    let max_rsrp: Vec<Option<f64>> = eligible
        .iter()
        .map(|c| {
            projected
                .iter()
                .filter(|(r, _)| r.slot_index == c.slot_index && r.subchannels_overlap(c))
                .map(|&(_, p)| p)
                .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.max(p))))
        })
        .collect();
    let loudest = max_rsrp
        .iter()
        .flatten()
        .fold(None, |acc: Option<f64>, &p| Some(acc.map_or(p, |a| a.max(p))));

    let mut threshold = cfg.rsrp_threshold_init_dbm;
    let mut escalations = 0u32;
    loop {
        let available: Vec<ResourceId> = eligible
            .iter()
            .zip(&max_rsrp)
            .filter(|(_, m)| m.map_or(true, |p| p <= threshold))
            .map(|(c, _)| *c)
            .collect();
        let satisfied = available.len() as f64 >= needed;
        let exhausted = loudest.map_or(true, |m| threshold >= m);
        if satisfied || exhausted {
            return Ok(ExclusionOutcome {
                available,
                final_threshold_dbm: threshold,
                escalations,
                window_candidates: total,
            });
        }
        threshold += cfg.threshold_step_db;
        escalations += 1;
    }
}

/// Uniform draw from the available set; deterministic for a given RNG
/// stream. An empty set is an allocation failure.
pub fn select_resource<R: Rng>(available: &[ResourceId], rng: &mut R) -> Result<ResourceId> {
    if available.is_empty() {
        return Err(Error::AllocationFailed);
    }
    Ok(available[rng.gen_range(0..available.len())])
}

// ---------------------------------------------------------------------------
// Semi-persistent scheduling
// ---------------------------------------------------------------------------

/// What the scheduler did for a given packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpsDecision {
    /// Counter still running: same stream, next period.
    Reused,
    /// Counter expired and the keep-probability draw retained the resource.
    Kept,
    /// Counter expired (or cold start) and a fresh resource was drawn.
    Reselected,
}

/// Per-stream semi-persistent scheduler state. `resource` always holds the
/// next grant position on the periodic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpsState {
    pub rri_slots: u64,
    pub keep_probability: f64,
    pub counter_min: u32,
    pub counter_max: u32,
    pub resource: Option<ResourceId>,
    pub reselection_counter: u32,
}

impl SpsState {
    pub fn new(rri_slots: u64, keep_probability: f64, counter_min: u32, counter_max: u32) -> Self {
        SpsState {
            rri_slots,
            keep_probability,
            counter_min,
            counter_max,
            resource: None,
            reselection_counter: 0,
        }
    }

    fn advanced(&self, r: ResourceId) -> ResourceId {
        ResourceId {
            slot_index: r.slot_index + self.rri_slots,
            ..r
        }
    }

    /// Grant a resource for the next packet of the periodic stream.
    ///
    /// While the reselection counter runs, the reserved resource is reused
    /// and the counter decrements. On expiry the resource is retained with
    /// probability `keep_probability`, otherwise drawn fresh from the
    /// available set, and the counter is reinitialized uniformly in
    /// `[counter_min, counter_max]`.
    pub fn on_packet<R: Rng>(
        &mut self,
        available: &[ResourceId],
        rng: &mut R,
    ) -> Result<(ResourceId, SpsDecision)> {
        if let Some(r) = self.resource {
            if self.reselection_counter > 0 {
                self.reselection_counter -= 1;
                self.resource = Some(self.advanced(r));
                return Ok((r, SpsDecision::Reused));
            }
        }
        let keep = self.resource.is_some() && rng.gen::<f64>() < self.keep_probability;
        let (grant, decision) = if keep {
            (self.resource.unwrap(), SpsDecision::Kept)
        } else {
            (select_resource(available, rng)?, SpsDecision::Reselected)
        };
        self.reselection_counter = rng.gen_range(self.counter_min..=self.counter_max);
        self.resource = Some(self.advanced(grant));
        Ok((grant, decision))
    }
}

/// Dynamic scheduling: the full sense -> exclude -> select pipeline for a
/// single packet, carrying no reservation forward.
pub fn ds_on_packet<R: Rng>(
    window: &SelectionWindow,
    grid: &GridConfig,
    history: &SensingHistory,
    cfg: &ExclusionConfig,
    rng: &mut R,
) -> Result<ResourceId> {
    let projected = project_reservations(history, window, grid.numerology.slot_duration_s());
    let outcome = exclude(window, grid, &projected, history.own_tx_slots(), cfg)?;
    select_resource(&outcome.available, rng)
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(subchannels: u16) -> GridConfig {
        GridConfig {
            num_subchannels: subchannels,
            ..GridConfig::default()
        }
    }

    fn rid(slot: u64, start: u16, count: u16) -> ResourceId {
        ResourceId {
            slot_index: slot,
            subchannel_start: start,
            subchannel_count: count,
        }
    }

    fn sci(slot: u64, rri_s: f64, rsrp: f64) -> SciReservation {
        SciReservation {
            sender: 0,
            reserved: rid(slot, 0, 1),
            rri_s,
            rsrp_dbm: rsrp,
            heard_at_slot: 0,
        }
    }

    const SLOT: f64 = 0.25e-3;

    // -----------------------------------------------------------------------
    // projection
    // -----------------------------------------------------------------------

    #[test]
    fn projection_empty_history() {
        let h = SensingHistory::new(1.1);
        let w = SelectionWindow {
            first_slot: 100,
            last_slot: 120,
            subchannel_count: 1,
        };
        assert!(project_reservations(&h, &w, SLOT).is_empty());
    }

    #[test]
    fn projection_periodic_extension() {
        // rri of 100 ms = 400 slots; a window spanning 200 ms catches two
        // occurrences.
        let mut h = SensingHistory::new(1.1);
        h.record_sci(sci(1000, 0.1, -80.0));
        let w = SelectionWindow {
            first_slot: 1000,
            last_slot: 1799,
            subchannel_count: 1,
        };
        let hits = project_reservations(&h, &w, SLOT);
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].0.slot_index, 1000);
        assert_eq!(hits[1].0.slot_index, 1400);
    }

    #[test]
    fn projection_before_window_is_dropped() {
        let mut h = SensingHistory::new(1.1);
        h.record_sci(sci(50, 0.0, -80.0));
        let w = SelectionWindow {
            first_slot: 100,
            last_slot: 120,
            subchannel_count: 1,
        };
        assert!(project_reservations(&h, &w, SLOT).is_empty());
    }

    // -----------------------------------------------------------------------
    // exclusion
    // -----------------------------------------------------------------------

    #[test]
    fn exclude_keeps_whole_window_without_projections() {
        let g = grid(2);
        let w = SelectionWindow {
            first_slot: 10,
            last_slot: 14,
            subchannel_count: 1,
        };
        let out = exclude(&w, &g, &[], &BTreeSet::new(), &ExclusionConfig::default()).unwrap();
        assert_eq!(out.available.len(), out.window_candidates);
        assert_eq!(out.available.len(), 10);
        assert_eq!(out.escalations, 0);
    }

    #[test]
    fn exclude_escalates_until_threshold_reaches_busy_power() {
        // Every candidate reserved at -60 dBm; starting from -126 dBm with
        // 3 dB steps the loop needs 22 escalations to get there, then the
        // whole window is available again.
        let g = grid(1);
        let w = SelectionWindow {
            first_slot: 0,
            last_slot: 9,
            subchannel_count: 1,
        };
        let projected: Vec<(ResourceId, f64)> = (0..10).map(|s| (rid(s, 0, 1), -60.0)).collect();
        let out = exclude(&w, &g, &projected, &BTreeSet::new(), &ExclusionConfig::default()).unwrap();
        assert_eq!(out.escalations, 22);
        assert_eq!(out.final_threshold_dbm, -60.0);
        assert_eq!(out.available.len(), 10);
    }

    #[test]
    fn exclude_direct_set_difference_when_ratio_met() {
        let g = grid(1);
        let w = SelectionWindow {
            first_slot: 0,
            last_slot: 9,
            subchannel_count: 1,
        };
        let projected = vec![(rid(3, 0, 1), -70.0)];
        let out = exclude(&w, &g, &projected, &BTreeSet::new(), &ExclusionConfig::default()).unwrap();
        assert_eq!(out.available.len(), 9);
        assert_eq!(out.escalations, 0);
        assert!(!out.available.iter().any(|r| r.slot_index == 3));
    }

    #[test]
    fn exclude_rejects_empty_window() {
        let g = grid(1);
        let w = SelectionWindow {
            first_slot: 10,
            last_slot: 9,
            subchannel_count: 1,
        };
        assert!(matches!(
            exclude(&w, &g, &[], &BTreeSet::new(), &ExclusionConfig::default()),
            Err(Error::EmptySelectionWindow)
        ));
    }

    #[test]
    fn exclude_half_duplex_slots_never_return() {
        let g = grid(1);
        let w = SelectionWindow {
            first_slot: 0,
            last_slot: 9,
            subchannel_count: 1,
        };
        let own: BTreeSet<u64> = [2u64, 5].into_iter().collect();
        // Loud projections everywhere force full escalation; the own-tx
        // slots still stay out.
        let projected: Vec<(ResourceId, f64)> = (0..10).map(|s| (rid(s, 0, 1), -55.0)).collect();
        let out = exclude(&w, &g, &projected, &own, &ExclusionConfig::default()).unwrap();
        assert_eq!(out.available.len(), 8);
        assert!(out.available.iter().all(|r| !own.contains(&r.slot_index)));
    }

    #[test]
    fn exclude_threshold_monotonicity() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = grid(3);
        for _ in 0..100 {
            let first = rng.gen_range(0..50u64);
            let w = SelectionWindow {
                first_slot: first,
                last_slot: first + rng.gen_range(1..8u64),
                subchannel_count: 1,
            };
            let projected: Vec<(ResourceId, f64)> = (0..rng.gen_range(0..8))
                .map(|_| {
                    (
                        rid(rng.gen_range(first..first + 8), rng.gen_range(0..3), 1),
                        rng.gen_range(-120.0..-60.0),
                    )
                })
                .collect();
            let lo = ExclusionConfig {
                rsrp_threshold_init_dbm: -110.0,
                ..ExclusionConfig::default()
            };
            let hi = ExclusionConfig {
                rsrp_threshold_init_dbm: -90.0,
                ..ExclusionConfig::default()
            };
            let out_lo = exclude(&w, &g, &projected, &BTreeSet::new(), &lo).unwrap();
            let out_hi = exclude(&w, &g, &projected, &BTreeSet::new(), &hi).unwrap();
            for r in &out_lo.available {
                assert!(out_hi.available.contains(r), "raising init threshold shrank S_a");
            }
        }
    }

    #[test]
    fn exclude_escalation_soundness() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let g = grid(2);
        for _ in 0..200 {
            let w = SelectionWindow {
                first_slot: 0,
                last_slot: rng.gen_range(0..10u64),
                subchannel_count: 1,
            };
            let projected: Vec<(ResourceId, f64)> = (0..rng.gen_range(0..10))
                .map(|_| {
                    (
                        rid(rng.gen_range(0..11), rng.gen_range(0..2), 1),
                        rng.gen_range(-120.0..-60.0),
                    )
                })
                .collect();
            let cfg = ExclusionConfig::default();
            let out = exclude(&w, &g, &projected, &BTreeSet::new(), &cfg).unwrap();
            let ratio_met =
                out.available.len() as f64 >= cfg.min_available_ratio * out.window_candidates as f64;
            let all_below = projected.iter().all(|&(_, p)| p <= out.final_threshold_dbm);
            assert!(ratio_met || all_below);
        }
    }

    // -----------------------------------------------------------------------
    // selection
    // -----------------------------------------------------------------------

    #[test]
    fn select_singleton_and_determinism() {
        let one = vec![rid(5, 0, 1)];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(select_resource(&one, &mut rng).unwrap(), one[0]);

        let many: Vec<ResourceId> = (0..50).map(|s| rid(s, 0, 1)).collect();
        let a = select_resource(&many, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = select_resource(&many, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a, b);

        let empty: Vec<ResourceId> = vec![];
        assert!(matches!(
            select_resource(&empty, &mut rng),
            Err(Error::AllocationFailed)
        ));
    }

    #[test]
    fn select_uniform_over_candidates() {
        let candidates: Vec<ResourceId> = (0..100).map(|s| rid(s, 0, 1)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 100_000usize;
        let mut counts = vec![0usize; candidates.len()];
        for _ in 0..trials {
            let r = select_resource(&candidates, &mut rng).unwrap();
            counts[r.slot_index as usize] += 1;
        }
        // Each cell ~ Binomial(1e5, 0.01): mean 1000, sigma ~ 31.5.
        let sigma = (trials as f64 * 0.01 * 0.99).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - 1000.0).abs() < 5.0 * sigma,
                "cell {i} count {c} outside 5 sigma"
            );
        }
    }

    // -----------------------------------------------------------------------
    // SPS
    // -----------------------------------------------------------------------

    #[test]
    fn sps_reuses_while_counter_runs() {
        let mut s = SpsState::new(400, 0.0, 5, 15);
        s.resource = Some(rid(100, 0, 1));
        s.reselection_counter = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (grant, d) = s.on_packet(&[], &mut rng).unwrap();
        assert_eq!(grant, rid(100, 0, 1));
        assert_eq!(d, SpsDecision::Reused);
        assert_eq!(s.reselection_counter, 2);
        assert_eq!(s.resource, Some(rid(500, 0, 1)));
    }

    #[test]
    fn sps_expiry_with_zero_keep_probability_reselects() {
        let mut s = SpsState::new(400, 0.0, 5, 15);
        s.resource = Some(rid(100, 0, 1));
        s.reselection_counter = 0;
        let pool: Vec<ResourceId> = (200..240).map(|sl| rid(sl, 0, 1)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (_, d) = s.on_packet(&pool, &mut rng).unwrap();
        assert_eq!(d, SpsDecision::Reselected);
        assert!((5..=15).contains(&s.reselection_counter));
    }

    #[test]
    fn sps_expiry_with_unit_keep_probability_keeps() {
        let mut s = SpsState::new(400, 1.0, 5, 15);
        s.resource = Some(rid(100, 0, 1));
        s.reselection_counter = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (grant, d) = s.on_packet(&[], &mut rng).unwrap();
        assert_eq!(grant, rid(100, 0, 1));
        assert_eq!(d, SpsDecision::Kept);
        assert!((5..=15).contains(&s.reselection_counter));
    }

    #[test]
    fn sps_grants_are_rri_apart_between_reselections() {
        let mut s = SpsState::new(400, 1.0, 5, 15);
        let pool: Vec<ResourceId> = (10..20).map(|sl| rid(sl, 0, 1)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut prev: Option<u64> = None;
        for _ in 0..50 {
            let (grant, _) = s.on_packet(&pool, &mut rng).unwrap();
            if let Some(p) = prev {
                assert_eq!(grant.slot_index - p, 400);
            }
            prev = Some(grant.slot_index);
        }
    }

    #[test]
    fn sps_cold_start_draws_fresh() {
        let mut s = SpsState::new(400, 0.8, 5, 15);
        let pool = vec![rid(42, 0, 1)];
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (grant, d) = s.on_packet(&pool, &mut rng).unwrap();
        assert_eq!(grant, rid(42, 0, 1));
        assert_eq!(d, SpsDecision::Reselected);
    }

    // -----------------------------------------------------------------------
    // DS
    // -----------------------------------------------------------------------

    #[test]
    fn ds_idle_channel_draws_independently() {
        let g = grid(1);
        let h = SensingHistory::new(1.1);
        let cfg = ExclusionConfig::default();
        let w = SelectionWindow {
            first_slot: 0,
            last_slot: 19,
            subchannel_count: 1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = ds_on_packet(&w, &g, &h, &cfg, &mut rng).unwrap();
        let b = ds_on_packet(&w, &g, &h, &cfg, &mut rng).unwrap();
        assert!(a.slot_index <= 19 && b.slot_index <= 19);
    }

    #[test]
    fn ds_every_resource_reachable_over_seeds() {
        let g = grid(1);
        let h = SensingHistory::new(1.1);
        let cfg = ExclusionConfig::default();
        let w = SelectionWindow {
            first_slot: 0,
            last_slot: 4,
            subchannel_count: 1,
        };
        let mut seen = BTreeSet::new();
        for seed in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = ds_on_packet(&w, &g, &h, &cfg, &mut rng).unwrap();
            seen.insert(r.slot_index);
        }
        assert_eq!(seen.len(), 5, "support {seen:?}");
    }

    #[test]
    fn ds_fully_blocked_window_is_allocation_failure() {
        let g = grid(1);
        let mut h = SensingHistory::new(1.1);
        for slot in 0..5u64 {
            h.record_own_tx(slot);
        }
        let cfg = ExclusionConfig::default();
        let w = SelectionWindow {
            first_slot: 0,
            last_slot: 4,
            subchannel_count: 1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(matches!(
            ds_on_packet(&w, &g, &h, &cfg, &mut rng),
            Err(Error::AllocationFailed)
        ));
    }

    // -----------------------------------------------------------------------
    // history eviction
    // -----------------------------------------------------------------------

    #[test]
    fn history_evicts_entries_older_than_window() {
        let mut h = SensingHistory::new(0.1); // 400 slots at mu=2
        h.record_sci(SciReservation {
            heard_at_slot: 100,
            ..sci(100, 0.0, -80.0)
        });
        h.record_sci(SciReservation {
            heard_at_slot: 450,
            ..sci(450, 0.0, -80.0)
        });
        h.record_own_tx(100);
        h.record_own_tx(900); // future grant survives
        h.evict(600, SLOT);
        let kept: Vec<u64> = h.entries().map(|e| e.heard_at_slot).collect();
        assert_eq!(kept, vec![450]);
        assert!(!h.own_tx_slots().contains(&100));
        assert!(h.own_tx_slots().contains(&900));
    }

    #[test]
    fn selection_window_from_times() {
        // generation at t=0, window [1 ms, 4 ms] at mu=2 -> slots 4..=16
        let w = SelectionWindow::from_times(0.0, 1e-3, 4e-3, SLOT, 1);
        assert_eq!((w.first_slot, w.last_slot), (4, 16));

        let g = grid(4);
        let cands = w.candidates(&g);
        assert_eq!(cands.len(), 13 * 4);

        let inhibited = GridConfig {
            inhibition_period: 2,
            num_subchannels: 4,
            ..GridConfig::default()
        };
        let cands = w.candidates(&inhibited);
        assert_eq!(cands.len(), 7 * 4); // even slots 4,6,8,10,12,14,16
    }
}
