//! Free-space link budget math for line-of-sight air-to-air links.
//!
//! Covers path loss, received power, thermal noise floor, the minimum
//! received power for a given SNR threshold, and the closed-form maximum
//! achievable distance. All quantities are in dB/dBm and computed in double
//! precision; no dB/linear round-trips happen inside a single operation.

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Physical constants
// ---------------------------------------------------------------------------

/// Speed of light in m/s. Fixed to 3.0e8 so that symbol-distance and Doppler
/// figures come out on round numbers (6 GHz / 300 m/s -> exactly 6 kHz).
pub const SPEED_OF_LIGHT_M_S: f64 = 3.0e8;

/// Boltzmann constant in J/K.
pub const BOLTZMANN_J_PER_K: f64 = 1.38e-23;

/// Reference noise temperature in K.
pub const REFERENCE_TEMP_K: f64 = 290.0;

// ---------------------------------------------------------------------------
// Link parameters
// ---------------------------------------------------------------------------

/// Transmitter/receiver chain parameters for a single link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    /// Transmit power in dBm.
    pub tx_power_dbm: f64,
    /// Transmit antenna gain in dBi.
    pub tx_gain_dbi: f64,
    /// Receive antenna gain in dBi.
    pub rx_gain_dbi: f64,
    /// Carrier frequency in GHz.
    pub carrier_freq_ghz: f64,
    /// Channel bandwidth in Hz.
    pub bandwidth_hz: f64,
    /// Receiver noise figure in dB.
    pub noise_figure_db: f64,
}

impl Default for LinkParams {
    /// Directive-antenna airborne defaults: 40 dBm, 12 dBi both ends,
    /// 6 GHz carrier, 100 MHz bandwidth, 8 dB noise figure.
    fn default() -> Self {
        LinkParams {
            tx_power_dbm: 40.0,
            tx_gain_dbi: 12.0,
            rx_gain_dbi: 12.0,
            carrier_freq_ghz: 6.0,
            bandwidth_hz: 100e6,
            noise_figure_db: 8.0,
        }
    }
}

impl LinkParams {
    /// Check the structural invariants (positive bandwidth and carrier,
    /// all dB terms finite).
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::NonPositive {
                what: "bandwidth",
                value: self.bandwidth_hz,
            });
        }
        if !(self.carrier_freq_ghz > 0.0) {
            return Err(Error::NonPositive {
                what: "carrier frequency",
                value: self.carrier_freq_ghz,
            });
        }
        for (name, v) in [
            ("tx_power", self.tx_power_dbm),
            ("tx_gain", self.tx_gain_dbi),
            ("rx_gain", self.rx_gain_dbi),
            ("noise_figure", self.noise_figure_db),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid("link parameters", format!("{name} not finite")));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// MCS table
// ---------------------------------------------------------------------------

/// One modulation-and-coding-scheme entry: the index, the minimum SNR it
/// needs to decode, and its nominal spectral efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub index: u8,
    pub snr_min_db: f64,
    /// Informational; bits/s/Hz.
    pub spectral_efficiency: f64,
}

/// MCS index -> minimum-SNR lookup table.
///
/// The standard defines the index-to-modulation mapping but leaves the
/// decode threshold to the receiver implementation, so the thresholds here
/// are configuration data. The default derives each threshold from the
/// TS 38.214 table-1 spectral efficiency via the Shannon inverse
/// `10*log10(2^SE - 1)`, which is monotone in the index and within a couple
/// of dB of typical measured receivers.
#[derive(Debug, Clone)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

/// TS 38.214 table 5.1.3.1-1 spectral efficiencies, indices 0..=28.
const MCS_TABLE1_SE: [f64; 29] = [
    0.2344, 0.3066, 0.3770, 0.4902, 0.6016, 0.7402, 0.8770, 1.0273, 1.1758, 1.3262, 1.3281,
    1.4766, 1.6953, 1.9141, 2.1602, 2.4063, 2.5703, 2.5664, 2.7305, 3.0293, 3.3223, 3.6094,
    3.9023, 4.2129, 4.5234, 4.8164, 5.1152, 5.3320, 5.5547,
];

impl Default for McsTable {
    fn default() -> Self {
        let mut entries = Vec::with_capacity(MCS_TABLE1_SE.len());
        let mut floor = f64::NEG_INFINITY;
        for (i, &se) in MCS_TABLE1_SE.iter().enumerate() {
            // Shannon inverse; clamped so snr_min stays non-decreasing across
            // the two table points where a modulation switch lowers the rate.
            let snr = 10.0 * (2f64.powf(se) - 1.0).log10();
            floor = floor.max(snr);
            entries.push(McsEntry {
                index: i as u8,
                snr_min_db: floor,
                spectral_efficiency: se,
            });
        }
        McsTable { entries }
    }
}

impl McsTable {
    pub fn entry(&self, index: u8) -> Option<&McsEntry> {
        self.entries.get(index as usize)
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Free-space path loss in dB for a distance in metres and a carrier in GHz.
///
/// Uses the exact Friis form `20*log10(4*pi*d*f/c)`. The familiar
/// `32.4 + 20log10(d_km) + 20log10(f_MHz)` is this expression with the
/// constant rounded; the exact constant at 1 m / 1 GHz is 32.441 dB.
pub fn path_loss_db(distance_m: f64, carrier_freq_ghz: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::NonPositive {
            what: "distance",
            value: distance_m,
        });
    }
    if !(carrier_freq_ghz > 0.0) {
        return Err(Error::NonPositive {
            what: "carrier frequency",
            value: carrier_freq_ghz,
        });
    }
    let freq_hz = carrier_freq_ghz * 1e9;
    Ok(20.0 * (4.0 * std::f64::consts::PI * distance_m * freq_hz / SPEED_OF_LIGHT_M_S).log10())
}

/// Received power in dBm at `distance_m` under free-space propagation.
pub fn received_power_dbm(params: &LinkParams, distance_m: f64) -> Result<f64> {
    let pl = path_loss_db(distance_m, params.carrier_freq_ghz)?;
    Ok(params.tx_power_dbm + params.tx_gain_dbi + params.rx_gain_dbi - pl)
}

/// Thermal noise floor in dBm: `10*log10(k*T0*B)` referenced to 1 mW, plus
/// the receiver noise figure.
pub fn noise_floor_dbm(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0) {
        return Err(Error::NonPositive {
            what: "bandwidth",
            value: bandwidth_hz,
        });
    }
    let noise_w = BOLTZMANN_J_PER_K * REFERENCE_TEMP_K * bandwidth_hz;
    Ok(10.0 * noise_w.log10() + 30.0 + noise_figure_db)
}

/// Minimum received power in dBm for successful decoding at `snr_min_db`.
pub fn min_received_power_dbm(snr_min_db: f64, bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    Ok(snr_min_db + noise_floor_dbm(bandwidth_hz, noise_figure_db)?)
}

/// Maximum distance in metres at which the link still closes for the given
/// SNR threshold; closed-form inversion of the free-space loss.
pub fn max_distance_m(params: &LinkParams, snr_min_db: f64) -> Result<f64> {
    let p_rmin = min_received_power_dbm(snr_min_db, params.bandwidth_hz, params.noise_figure_db)?;
    let freq_hz = params.carrier_freq_ghz * 1e9;
    let budget = params.tx_power_dbm + params.tx_gain_dbi + params.rx_gain_dbi - p_rmin;
    // 20*log10(d) = budget - 20*log10(4*pi*f/c)
    let const_db = 20.0 * (4.0 * std::f64::consts::PI * freq_hz / SPEED_OF_LIGHT_M_S).log10();
    Ok(10f64.powf((budget - const_db) / 20.0))
}

// ===========================================================================
// Tests
// ===========================================================================
