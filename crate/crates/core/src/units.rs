//! Power and gain unit conversions plus the physical-layer constants used
//! throughout the simulator.
//!
//! All link budgets are composed in dB and converted to linear once, so the
//! conversion helpers here are the single source of truth for dB arithmetic.

/// Thermal noise density in dBm/Hz.
pub const NOISE_DENSITY_DBM_HZ: f64 = -174.0;

/// Sub-carrier spacing in Hz (15 kHz sub-carriers).
pub const SC_SPACING_HZ: f64 = 15_000.0;

/// gNodeB receiver noise figure in dB.
pub const NOISE_FIGURE_DB: f64 = 5.0;

/// Maximum device transmit power, 23 dBm.
pub const P_MAX_DBM: f64 = 23.0;

/// Minimum device transmit power, -40 dBm.
pub const P_MIN_DBM: f64 = -40.0;

/// Building penetration loss in dB.
pub const PENETRATION_LOSS_DB: f64 = 20.0;

/// gNodeB antenna gain in dBi.
pub const SITE_ANTENNA_GAIN_DBI: f64 = 15.0;

/// Device antenna gain in dBi (omni).
pub const DEVICE_ANTENNA_GAIN_DBI: f64 = 0.0;

/// Log-normal shadowing standard deviation in dB.
pub const SHADOWING_STD_DB: f64 = 10.0;

/// Symbols per timeslot.
pub const SYMBOLS_PER_SLOT: f64 = 14.0;

/// Timeslot duration in seconds (0.5 ms).
pub const SLOT_DURATION_S: f64 = 0.0005;

/// Convert a dB value to a linear power ratio.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to dB.
#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Convert dBm to watts.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Convert watts to dBm.
#[inline]
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Average noise power per sub-carrier in dBm:
/// -174 dBm/Hz + 10 log10(15 kHz) + 5 dB noise figure = -127.24 dBm.
pub fn noise_power_dbm() -> f64 {
    NOISE_DENSITY_DBM_HZ + 10.0 * SC_SPACING_HZ.log10() + NOISE_FIGURE_DB
}

/// Average noise power per sub-carrier in watts.
pub fn noise_power_w() -> f64 {
    dbm_to_watts(noise_power_dbm())
}

/// Maximum device transmit power in watts.
pub fn p_max_w() -> f64 {
    dbm_to_watts(P_MAX_DBM)
}

/// Minimum benchmark power variable in watts (the "essentially silent" level).
pub const EPSILON_P_W: f64 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_power_composes_table_terms() {
        // -174 + 41.7609 + 5 = -127.2391 dBm
        let dbm = noise_power_dbm();
        assert!((dbm - (-127.2390874)).abs() < 1e-6, "noise power {dbm} dBm");
        let w = noise_power_w();
        assert!((w - 1.8883e-16).abs() / 1.8883e-16 < 1e-3, "noise power {w} W");
    }

    #[test]
    fn dbm_round_trips() {
        assert!((dbm_to_watts(23.0) - 0.19952623).abs() < 1e-8);
        assert!((watts_to_dbm(dbm_to_watts(-40.0)) - (-40.0)).abs() < 1e-12);
        assert!((dbm_to_watts(-100.0) - 1e-13).abs() < 1e-25);
    }

    #[test]
    fn db_linear_round_trips() {
        for db in [-130.0, -60.0, -3.0, 0.0, 10.0, 30.0] {
            assert!((linear_to_db(db_to_linear(db)) - db).abs() < 1e-12);
        }
    }
}
