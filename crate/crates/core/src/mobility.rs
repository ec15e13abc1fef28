//! 3D node geometry and kinematics: piecewise-linear trajectories, pairwise
//! distance, signed radial speed, and the Doppler feasibility gate.

use crate::error::{Error, Result};
use crate::linkbudget::SPEED_OF_LIGHT_M_S;

/// 3D point or vector in metres.
pub type Vec3 = [f64; 3];

pub(crate) fn vec_sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn vec_dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn vec_norm(a: Vec3) -> f64 {
    vec_dot(a, a).sqrt()
}

/// Piecewise-linear 3D trajectory with constant extrapolation outside the
/// waypoint span.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    waypoints: Vec<(f64, Vec3)>,
}

impl Trajectory {
    /// Requires at least one waypoint and strictly increasing times.
    pub fn new(waypoints: Vec<(f64, Vec3)>) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::invalid("trajectory", "no waypoints"));
        }
        for w in waypoints.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::invalid(
                    "trajectory",
                    format!("waypoint times not strictly increasing at t={}", w[1].0),
                ));
            }
        }
        Ok(Trajectory { waypoints })
    }

    /// Single fixed position for all time.
    pub fn fixed(position: Vec3) -> Self {
        Trajectory {
            waypoints: vec![(0.0, position)],
        }
    }

    pub fn waypoints(&self) -> &[(f64, Vec3)] {
        &self.waypoints
    }

    /// Shift every waypoint position by `offset`.
    pub fn translated(&self, offset: Vec3) -> Self {
        Trajectory {
            waypoints: self
                .waypoints
                .iter()
                .map(|&(t, p)| (t, [p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]]))
                .collect(),
        }
    }

    pub fn position_at(&self, t: f64) -> Vec3 {
        let wp = &self.waypoints;
        if t <= wp[0].0 {
            return wp[0].1;
        }
        if t >= wp[wp.len() - 1].0 {
            return wp[wp.len() - 1].1;
        }
        // Invariant: wp[i].0 <= t < wp[i+1].0 for the segment found below.
        let i = match wp.binary_search_by(|&(wt, _)| wt.partial_cmp(&t).unwrap()) {
            Ok(i) => return wp[i].1,
            Err(i) => i - 1,
        };
        let (t0, p0) = wp[i];
        let (t1, p1) = wp[i + 1];
        let a = (t - t0) / (t1 - t0);
        [
            p0[0] + a * (p1[0] - p0[0]),
            p0[1] + a * (p1[1] - p0[1]),
            p0[2] + a * (p1[2] - p0[2]),
        ]
    }

    /// Velocity vector in m/s; zero outside the waypoint span, and the
    /// right-hand segment slope at interior waypoints.
    pub fn velocity_at(&self, t: f64) -> Vec3 {
        let wp = &self.waypoints;
        if wp.len() < 2 || t < wp[0].0 || t >= wp[wp.len() - 1].0 {
            return [0.0, 0.0, 0.0];
        }
        let i = match wp.binary_search_by(|&(wt, _)| wt.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let (t0, p0) = wp[i];
        let (t1, p1) = wp[i + 1];
        let dt = t1 - t0;
        [
            (p1[0] - p0[0]) / dt,
            (p1[1] - p0[1]) / dt,
            (p1[2] - p0[2]) / dt,
        ]
    }
}

/// A node's motion plus its fixed clock offset against the common timebase.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeKinematics {
    pub trajectory: Trajectory,
    /// Slot-boundary offset in seconds; models imperfect synchronization.
    pub clock_offset_s: f64,
}

impl NodeKinematics {
    pub fn new(trajectory: Trajectory) -> Self {
        NodeKinematics {
            trajectory,
            clock_offset_s: 0.0,
        }
    }

    pub fn position_at(&self, t: f64) -> Vec3 {
        self.trajectory.position_at(t)
    }
}

/// Euclidean distance between two nodes at time `t`.
pub fn distance_m(a: &NodeKinematics, b: &NodeKinematics, t: f64) -> f64 {
    vec_norm(vec_sub(a.position_at(t), b.position_at(t)))
}

/// Signed rate of change of the pairwise distance in m/s (positive when
/// receding), from the velocity difference projected on the line of sight.
/// Returns 0 for co-located nodes.
pub fn radial_speed_mps(a: &NodeKinematics, b: &NodeKinematics, t: f64) -> f64 {
    let los = vec_sub(a.position_at(t), b.position_at(t));
    let d = vec_norm(los);
    if d == 0.0 {
        return 0.0;
    }
    let dv = vec_sub(a.trajectory.velocity_at(t), b.trajectory.velocity_at(t));
    vec_dot(dv, los) / d
}

/// Doppler shift magnitude `|v|/c * f0` in Hz.
///
/// The multiplication runs before the division so that round-number inputs
/// (300 m/s at 6 GHz) produce round outputs (exactly 6 kHz).
pub fn doppler_shift_hz(relative_speed_mps: f64, carrier_freq_hz: f64) -> f64 {
    relative_speed_mps.abs() * carrier_freq_hz / SPEED_OF_LIGHT_M_S
}

/// Largest relative speed whose Doppler shift stays within
/// `tolerable_fraction` of the subcarrier spacing.
pub fn max_speed_for_scs(scs_hz: f64, tolerable_fraction: f64, carrier_freq_hz: f64) -> f64 {
    tolerable_fraction * scs_hz * SPEED_OF_LIGHT_M_S / carrier_freq_hz
}

// ===========================================================================
// Tests
// ===========================================================================
