//! Link adaptation: per-technology MCS tables, the three rate functions
//! (Shannon, continuous envelope, piece-wise discrete), and uplink SINR
//! computation.
//!
//! The discrete rate function `f` is a step function over SINR thresholds;
//! the continuous envelope `g(gamma) = gamma^log10(e)` inscribes it from
//! above. Tables are built so that every discrete efficiency lies exactly on
//! the envelope, which keeps `f <= g` everywhere by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::realization::Realization;
use crate::units::{db_to_linear, linear_to_db, noise_power_w, p_max_w};

/// Radio access technology of a device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tech {
    NbIot,
    LteM,
    Nr,
}

impl Tech {
    pub fn name(&self) -> &'static str {
        match self {
            Tech::NbIot => "nb_iot",
            Tech::LteM => "lte_m",
            Tech::Nr => "nr",
        }
    }

    /// Number of MCS levels for this technology.
    pub fn mcs_levels(&self) -> usize {
        match self {
            Tech::NbIot => 6,
            Tech::LteM => 9,
            Tech::Nr => 15,
        }
    }

    /// Peak spectral efficiency in bits/symbol.
    pub fn beta_max(&self) -> f64 {
        match self {
            Tech::NbIot => 1.18,
            Tech::LteM => 2.41,
            Tech::Nr => 5.55,
        }
    }
}

/// Lowest MCS threshold in dB. The level grid spans from here up to the SINR
/// at which the envelope reaches the technology's peak efficiency.
pub const LOWEST_THRESHOLD_DB: f64 = -6.0;

/// Smallest SINR of interest (-10 dB linear); below every table threshold.
pub const EPSILON_GAMMA: f64 = 0.1;

/// An MCS table for one technology: ascending SINR thresholds (linear) and
/// the spectral efficiency achieved at each level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McsTable {
    pub tech: Tech,
    /// Ascending SINR thresholds, linear scale.
    pub thresholds: Vec<f64>,
    /// Efficiency in bits/symbol per level, ascending.
    pub efficiencies: Vec<f64>,
    /// SINR at which the discrete rate saturates (top threshold).
    pub gamma_max: f64,
    /// Smallest SINR of interest; strictly below the lowest threshold.
    pub gamma_min: f64,
}

impl McsTable {
    /// Level index (1-based) of the highest threshold `<= gamma`; 0 means
    /// outage (below the lowest threshold).
    pub fn level(&self, gamma: f64) -> usize {
        let mut level = 0;
        for (i, &thr) in self.thresholds.iter().enumerate() {
            if gamma >= thr {
                level = i + 1;
            } else {
                break;
            }
        }
        level
    }

    /// Efficiency of a 1-based level; level 0 is outage with rate 0.
    pub fn efficiency(&self, level: usize) -> f64 {
        if level == 0 {
            0.0
        } else {
            self.efficiencies[level - 1]
        }
    }

    /// Threshold of a 1-based level.
    pub fn threshold(&self, level: usize) -> f64 {
        self.thresholds[level - 1]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let table: McsTable = serde_json::from_str(s)?;
        if table.thresholds.len() != table.efficiencies.len() || table.thresholds.is_empty() {
            return Err(SimError::Config(
                "MCS table thresholds/efficiencies length mismatch".into(),
            ));
        }
        if table.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimError::Config("MCS thresholds must be strictly increasing".into()));
        }
        Ok(table)
    }
}

/// Shannon rate log2(1 + gamma) in bits/symbol.
pub fn shannon_rate(gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0);
    (1.0 + gamma).log2()
}

/// Continuous envelope rate g(gamma) = gamma^log10(e).
pub fn envelope_rate_g(gamma: f64) -> Result<f64> {
    if gamma <= 0.0 {
        return Err(SimError::Domain(format!(
            "envelope rate undefined for gamma = {gamma}"
        )));
    }
    Ok(gamma.powf(std::f64::consts::LOG10_E))
}

/// Inverse of the envelope: the SINR at which g reaches `beta`.
pub fn envelope_inverse(beta: f64) -> f64 {
    beta.powf(std::f64::consts::LN_10)
}

/// Piece-wise discrete rate f(gamma): efficiency of the highest level whose
/// threshold is at or below gamma, 0 below the lowest threshold.
pub fn discrete_rate_f(gamma: f64, table: &McsTable) -> f64 {
    table.efficiency(table.level(gamma))
}

/// Build the MCS table for a technology. Thresholds form a geometric sequence
/// in linear SINR (uniform in dB) from the lowest threshold up to the SINR at
/// which the envelope reaches the peak efficiency; each level's efficiency is
/// inscribed on the envelope, so `f(gamma_m) = g(gamma_m)` at every threshold.
pub fn build_mcs_table(tech: Tech) -> McsTable {
    let levels = tech.mcs_levels();
    let top_db = linear_to_db(envelope_inverse(tech.beta_max()));
    let step = (top_db - LOWEST_THRESHOLD_DB) / (levels - 1) as f64;
    let mut thresholds = Vec::with_capacity(levels);
    let mut efficiencies = Vec::with_capacity(levels);
    for m in 0..levels {
        let db = LOWEST_THRESHOLD_DB + step * m as f64;
        let gamma = db_to_linear(db);
        thresholds.push(gamma);
        // g(gamma) with gamma in dB reduces to exp(db/10).
        efficiencies.push((db / 10.0).exp());
    }
    let gamma_max = thresholds[levels - 1];
    McsTable {
        tech,
        thresholds,
        efficiencies,
        gamma_max,
        gamma_min: EPSILON_GAMMA,
    }
}

/// MCS tables for all three technologies.
#[derive(Debug, Clone)]
pub struct McsTables {
    nb_iot: McsTable,
    lte_m: McsTable,
    nr: McsTable,
}

impl McsTables {
    pub fn build() -> Self {
        Self {
            nb_iot: build_mcs_table(Tech::NbIot),
            lte_m: build_mcs_table(Tech::LteM),
            nr: build_mcs_table(Tech::Nr),
        }
    }

    pub fn get(&self, tech: Tech) -> &McsTable {
        match tech {
            Tech::NbIot => &self.nb_iot,
            Tech::LteM => &self.lte_m,
            Tech::Nr => &self.nr,
        }
    }
}

impl Default for McsTables {
    fn default() -> Self {
        Self::build()
    }
}

/// One device's transmission in a timeslot.
#[derive(Debug, Clone, Copy)]
pub struct Transmit {
    pub device: usize,
    pub sc: usize,
    pub power_w: f64,
}

/// Uplink SINR per device for one timeslot: serving-link power over noise
/// plus co-channel interference from other cells' transmitters on the same
/// sub-carrier. Devices absent from `tx` get SINR 0.
pub fn compute_sinr(real: &Realization, t: usize, tx: &[Transmit]) -> Result<Vec<f64>> {
    let n = real.num_devices();
    let n0 = noise_power_w();
    let p_cap = p_max_w() * (1.0 + 1e-9);
    let mut seen = vec![false; n];
    for tr in tx {
        if tr.device >= n {
            return Err(SimError::Contract(format!("unknown device {}", tr.device)));
        }
        if seen[tr.device] {
            return Err(SimError::Contract(format!(
                "device {} transmits on more than one sub-carrier",
                tr.device
            )));
        }
        seen[tr.device] = true;
        if !tr.power_w.is_finite() || tr.power_w < 0.0 || tr.power_w > p_cap {
            return Err(SimError::Contract(format!(
                "device {} power {} W outside [0, P_max]",
                tr.device, tr.power_w
            )));
        }
    }

    let mut sinr = vec![0.0; n];
    for tr in tx {
        if tr.power_w == 0.0 {
            continue;
        }
        let site = real.cell_of(tr.device);
        let signal = tr.power_w * real.gain(tr.device, site, t);
        let mut interference = 0.0;
        for other in tx {
            if other.device == tr.device || other.sc != tr.sc {
                continue;
            }
            interference += other.power_w * real.gain(other.device, site, t);
        }
        sinr[tr.device] = signal / (n0 + interference);
    }
    Ok(sinr)
}
