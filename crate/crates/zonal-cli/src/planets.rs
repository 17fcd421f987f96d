//! Built-in planetary dataset: nondimensional rotation rates
//! `ω = ω' R' / U'` for astronomic bodies with a stratosphere.

use serde::{Deserialize, Serialize};

/// One astronomic body with its physical scales and stored nondimensional ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanetRecord {
    pub name: String,
    pub radius_km: f64,
    /// Signed spin; negative = retrograde rotation about the polar axis.
    pub spin_rad_per_s: f64,
    pub zonal_speed_m_per_s: f64,
    /// Stored nondimensional rotation rate, at tabulated precision.
    pub omega_nondim: f64,
    /// One unit in the last printed digit of `omega_nondim` (some entries
    /// are truncated rather than rounded, so consistency checks use a
    /// one-ulp tolerance).
    pub printed_ulp: f64,
}

impl PlanetRecord {
    /// Recompute `ω = ω' R' / U'` from the physical columns.
    pub fn recompute_omega(&self) -> f64 {
        self.spin_rad_per_s * self.radius_km * 1000.0 / self.zonal_speed_m_per_s
    }

    /// The recomputed ω agrees with the stored value to within one unit in
    /// the last printed digit.
    pub fn is_consistent(&self) -> bool {
        (self.recompute_omega() - self.omega_nondim).abs() < self.printed_ulp
    }
}

/// The nine-body dataset.
pub fn dataset() -> Vec<PlanetRecord> {
    let row = |name: &str, radius_km: f64, spin: f64, speed: f64, omega: f64, ulp: f64| {
        PlanetRecord {
            name: name.to_string(),
            radius_km,
            spin_rad_per_s: spin,
            zonal_speed_m_per_s: speed,
            omega_nondim: omega,
            printed_ulp: ulp,
        }
    };
    vec![
        row("Earth", 6371.0, 7.27e-5, 50.0, 9.26, 0.01),
        row("Jupiter", 69911.0, 1.76e-4, 100.0, 123.0, 1.0),
        row("Saturn", 58232.0, 1.62e-4, 100.0, 94.3, 0.1),
        row("Neptune", 24622.0, 1.08e-4, 200.0, 13.2, 0.1),
        row("Uranus", 25362.0, -1.04e-4, 200.0, -13.1, 0.1),
        row("Pluto", 1188.0, -1.1e-5, 10.0, -1.31, 0.01),
        row("Titan", 2576.0, 4.55e-6, 100.0, 0.11, 0.01),
        row("HD 209458b", 94380.0, 2.06e-5, 1940.0, 1.01, 0.01),
        row("WASP-39b", 91000.0, 4.05e-7, 2000.0, 0.01, 0.01),
    ]
}

/// The rotation rate `-1647/1360` of the frame in which Uranus's observed
/// winds fit a pure 3-jet profile.
pub const URANUS_3JET_OMEGA: f64 = -1647.0 / 1360.0;
