//! Numerology timing, slot format composition, and the propagation-delay
//! arithmetic that drives the two long-distance countermeasures: extra
//! in-slot guard symbols and whole-slot inhibition.

use crate::error::{Error, Result};
use crate::linkbudget::SPEED_OF_LIGHT_M_S;

/// Symbols per slot (normal cyclic prefix).
pub const SYMBOLS_PER_SLOT: u32 = 14;

/// Tolerance, in symbols/slots, absorbed when a delay lands exactly on a
/// symbol or slot boundary; keeps the ceil/floor quantizers stable against
/// floating-point rounding of exact multiples.
const BOUNDARY_EPS: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Numerology
// ---------------------------------------------------------------------------

/// NR numerology: mu in 0..=3 sets the subcarrier spacing `15*2^mu kHz`
/// and the slot duration `2^-mu ms`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Numerology {
    mu: u8,
}

impl Numerology {
    pub fn new(mu: u8) -> Result<Self> {
        if mu > 3 {
            return Err(Error::invalid("numerology", format!("mu must be 0..=3, got {mu}")));
        }
        Ok(Numerology { mu })
    }

    pub fn mu(&self) -> u8 {
        self.mu
    }

    pub fn scs_hz(&self) -> f64 {
        15e3 * f64::from(1u32 << self.mu)
    }

    pub fn slot_duration_s(&self) -> f64 {
        1e-3 / f64::from(1u32 << self.mu)
    }

    pub fn symbol_duration_s(&self) -> f64 {
        self.slot_duration_s() / f64::from(SYMBOLS_PER_SLOT)
    }

    /// Distance flown by light during one symbol; the quantum at which the
    /// guard requirement steps up (5.357 km at mu=2).
    pub fn symbol_distance_m(&self) -> f64 {
        self.symbol_duration_s() * SPEED_OF_LIGHT_M_S
    }
}

impl Default for Numerology {
    fn default() -> Self {
        Numerology { mu: 2 }
    }
}

// ---------------------------------------------------------------------------
// Slot format
// ---------------------------------------------------------------------------

/// How the 14 symbols of a slot are split between AGC, data, and trailing
/// guard. PSCCH is multiplexed inside the data symbols and not accounted
/// separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotFormat {
    pub agc_symbols: u32,
    pub pssch_symbols: u32,
    pub guard_symbols: u32,
}

impl SlotFormat {
    /// Symbols actually occupied on air (AGC + data).
    pub fn occupied_symbols(&self) -> u32 {
        self.agc_symbols + self.pssch_symbols
    }
}

/// Largest number of extra guard symbols a slot can give up while keeping
/// the minimum 5 data symbols.
pub const MAX_EXTRA_GUARD: u32 = 7;

/// Build a slot format with `extra_guard` symbols beyond the baseline
/// single trailing guard. Data symbols shrink accordingly: 12 down to 5.
pub fn compose_slot_format(extra_guard: u32) -> Result<SlotFormat> {
    if extra_guard > MAX_EXTRA_GUARD {
        return Err(Error::GuardBudget {
            needed: extra_guard,
            max: MAX_EXTRA_GUARD,
        });
    }
    Ok(SlotFormat {
        agc_symbols: 1,
        pssch_symbols: 12 - extra_guard,
        guard_symbols: 1 + extra_guard,
    })
}

// ---------------------------------------------------------------------------
// Grid configuration
// ---------------------------------------------------------------------------

/// Static description of the time-frequency resource grid for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub numerology: Numerology,
    pub num_subchannels: u16,
    /// Informational; PRBs per subchannel.
    pub subchannel_size_prb: u16,
    /// Period of the usable-slot bitmap: 1 means every slot is usable,
    /// k+1 means one transmit slot followed by k inhibited listening slots.
    pub inhibition_period: u64,
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_subchannels < 1 {
            return Err(Error::invalid("grid", "num_subchannels must be >= 1"));
        }
        if self.num_subchannels > 64 {
            return Err(Error::invalid("grid", "num_subchannels above 64 is not supported"));
        }
        if self.inhibition_period < 1 {
            return Err(Error::invalid("grid", "inhibition_period must be >= 1"));
        }
        Ok(())
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            numerology: Numerology::default(),
            num_subchannels: 4,
            subchannel_size_prb: 10,
            inhibition_period: 1,
        }
    }
}

/// True when the pre-configured bitmap allows transmitting in `slot_index`.
pub fn usable_slot(slot_index: u64, grid: &GridConfig) -> bool {
    slot_index % grid.inhibition_period == 0
}

// ---------------------------------------------------------------------------
// Resource identity
// ---------------------------------------------------------------------------

/// One allocatable unit: a single slot and a contiguous subchannel range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResourceId {
    pub slot_index: u64,
    pub subchannel_start: u16,
    pub subchannel_count: u16,
}

impl ResourceId {
    pub fn subchannels_overlap(&self, other: &ResourceId) -> bool {
        self.subchannel_start < other.subchannel_start + other.subchannel_count
            && other.subchannel_start < self.subchannel_start + self.subchannel_count
    }
}

// ---------------------------------------------------------------------------
// Delay arithmetic
// ---------------------------------------------------------------------------

/// One-way propagation delay in seconds.
pub fn propagation_delay_s(distance_m: f64) -> f64 {
    distance_m / SPEED_OF_LIGHT_M_S
}

/// Trailing guard symbols needed to absorb the propagation delay of a link
/// of the given length: `ceil(delay / symbol)`, 0 at zero distance.
pub fn guard_symbols_needed(distance_m: f64, num: Numerology) -> u32 {
    let symbols = propagation_delay_s(distance_m) / num.symbol_duration_s();
    (symbols - BOUNDARY_EPS).ceil().max(0.0) as u32
}

/// The two countermeasure regimes for long links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationMode {
    /// Absorb the delay inside the slot with `n` total trailing guard
    /// symbols.
    SymbolGap(u32),
    /// The delay no longer fits a slot's guard budget: follow every
    /// transmit slot with `k` inhibited listening slots.
    SlotInhibition(u64),
}

/// Pick the regime for a link of the given length. Distances whose guard
/// requirement fits within `max_guard` total guard symbols stay in
/// symbol-gap mode; beyond that, whole slots are inhibited, one per slot
/// duration of delay.
pub fn allocation_mode(distance_m: f64, num: Numerology, max_guard: u32) -> AllocationMode {
    let needed = guard_symbols_needed(distance_m, num);
    if needed <= max_guard {
        AllocationMode::SymbolGap(needed)
    } else {
        slot_inhibition_for(distance_m, num)
    }
}

/// Same as [`allocation_mode`] but switching on an explicit distance
/// threshold instead of the guard-count formula; lets deployments pin the
/// regime boundary independently of the symbol arithmetic.
pub fn allocation_mode_with_switch(
    distance_m: f64,
    num: Numerology,
    max_guard: u32,
    switch_distance_m: f64,
) -> AllocationMode {
    if distance_m <= switch_distance_m {
        AllocationMode::SymbolGap(guard_symbols_needed(distance_m, num).min(max_guard))
    } else {
        slot_inhibition_for(distance_m, num)
    }
}

/// Distance at which the guard-count formula switches regimes:
/// `max_guard` symbol-lengths at the speed of light (42.857 km for the
/// default budget of 8 at mu=2).
pub fn mode_switch_distance_m(num: Numerology, max_guard: u32) -> f64 {
    f64::from(max_guard) * num.symbol_distance_m()
}

fn slot_inhibition_for(distance_m: f64, num: Numerology) -> AllocationMode {
    let slots = propagation_delay_s(distance_m) / num.slot_duration_s();
    AllocationMode::SlotInhibition((slots - BOUNDARY_EPS).ceil().max(1.0) as u64)
}

/// Map a transmission in `tx_slot` over `distance_m` to the slot its signal
/// starts arriving in and the fractional symbol offset inside that slot.
pub fn arrival_slot_and_offset(tx_slot: u64, distance_m: f64, num: Numerology) -> (u64, f64) {
    arrival_with_delay(tx_slot, propagation_delay_s(distance_m), num)
}

/// Same mapping for an arbitrary effective delay (propagation plus clock
/// skew); negative skews larger than the delay can land in earlier slots.
pub fn arrival_with_delay(tx_slot: u64, delay_s: f64, num: Numerology) -> (u64, f64) {
    let slot = num.slot_duration_s();
    let arrival = tx_slot as f64 * slot + delay_s;
    let rx_slot_f = (arrival / slot + BOUNDARY_EPS).floor();
    let rx_slot = rx_slot_f.max(0.0) as u64;
    let offset = ((arrival - rx_slot_f * slot) / num.symbol_duration_s()).max(0.0);
    (rx_slot, offset)
}

// ===========================================================================
// Tests
// ===========================================================================
