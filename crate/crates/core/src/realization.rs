//! Network realizations: a frozen snapshot of placements and large-scale
//! gains, evolved over T timeslots of small-scale fading.
//!
//! The large-scale component (path loss, penetration, shadowing, antenna
//! gains, receive directivity) is drawn once per realization and held fixed;
//! only the per-link fading amplitude changes across timeslots. Realizations
//! serialize to a versioned JSON document with gains in dB at six decimal
//! places so runs can be replayed across implementations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::fading::{jakes_step, FadingProcess, DOPPLER_HZ, FRAME_INTERVAL_S};
use crate::geometry::{directivity_attenuation_db, path_loss_db, CellLayout, NodePlacement};
use crate::link::Tech;
use crate::units::{
    db_to_linear, linear_to_db, DEVICE_ANTENNA_GAIN_DBI, PENETRATION_LOSS_DB,
    SHADOWING_STD_DB, SITE_ANTENNA_GAIN_DBI,
};

/// Channel generation options for one realization.
#[derive(Debug, Clone, Copy)]
pub struct ChannelOptions {
    /// Small-scale fading on/off; off fixes |h|^2 = 1 in every timeslot.
    pub fading: bool,
    /// Log-normal shadowing standard deviation in dB (0 disables shadowing).
    pub shadowing_std_db: f64,
    /// Seed for the large-scale (shadowing) draw.
    pub shadowing_seed: u64,
    /// Seed for the small-scale fading trajectory.
    pub fading_seed: u64,
}

impl ChannelOptions {
    pub fn new(fading: bool, shadowing_seed: u64, fading_seed: u64) -> Self {
        Self { fading, shadowing_std_db: SHADOWING_STD_DB, shadowing_seed, fading_seed }
    }
}

/// One network snapshot: placements plus per-(device, site, timeslot) linear
/// power gains.
#[derive(Debug, Clone)]
pub struct Realization {
    pub id: String,
    pub layout: Option<CellLayout>,
    pub placements: Vec<NodePlacement>,
    cell_ids: Vec<usize>,
    techs: Vec<Tech>,
    num_sites: usize,
    t_slots: usize,
    /// Linear gains, flattened as (device * num_sites + site) * t_slots + t.
    gains: Vec<f64>,
}

impl Realization {
    /// Build a realization from explicit per-device gains; used for replay
    /// and synthetic instances. `gains[dev][site][t]` are linear power gains.
    pub fn from_parts(
        id: String,
        layout: Option<CellLayout>,
        cell_ids: Vec<usize>,
        techs: Vec<Tech>,
        gains: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let n = cell_ids.len();
        if techs.len() != n || gains.len() != n || n == 0 {
            return Err(SimError::Contract("realization parts length mismatch".into()));
        }
        let num_sites = gains[0].len();
        let t_slots = gains[0][0].len();
        let mut flat = Vec::with_capacity(n * num_sites * t_slots);
        for per_site in &gains {
            if per_site.len() != num_sites {
                return Err(SimError::Contract("gain tensor ragged in sites".into()));
            }
            for per_t in per_site {
                if per_t.len() != t_slots {
                    return Err(SimError::Contract("gain tensor ragged in timeslots".into()));
                }
                for &g in per_t {
                    if !(g > 0.0) || !g.is_finite() {
                        return Err(SimError::Contract(format!("non-positive gain {g}")));
                    }
                    flat.push(g);
                }
            }
        }
        for &c in &cell_ids {
            if c >= num_sites {
                return Err(SimError::Contract(format!("cell id {c} out of range")));
            }
        }
        Ok(Self {
            id,
            layout,
            placements: Vec::new(),
            cell_ids,
            techs,
            num_sites,
            t_slots,
            gains: flat,
        })
    }

    pub fn num_devices(&self) -> usize {
        self.cell_ids.len()
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn t_slots(&self) -> usize {
        self.t_slots
    }

    /// Serving cell (site index) of a device.
    pub fn cell_of(&self, device: usize) -> usize {
        self.cell_ids[device]
    }

    pub fn tech_of(&self, device: usize) -> Tech {
        self.techs[device]
    }

    /// Linear power gain from `device` to `site` at timeslot `t`.
    pub fn gain(&self, device: usize, site: usize, t: usize) -> f64 {
        self.gains[(device * self.num_sites + site) * self.t_slots + t]
    }

    /// Gain on the serving link of `device` at timeslot `t`.
    pub fn serving_gain(&self, device: usize, t: usize) -> f64 {
        self.gain(device, self.cell_of(device), t)
    }

    /// Devices grouped by serving cell, in device-id order.
    pub fn devices_in_cell(&self, cell: usize) -> Vec<usize> {
        (0..self.num_devices()).filter(|&d| self.cell_of(d) == cell).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut gains_db = Vec::with_capacity(self.num_devices());
        for d in 0..self.num_devices() {
            let mut per_site = Vec::with_capacity(self.num_sites);
            for s in 0..self.num_sites {
                let per_t: Vec<f64> = (0..self.t_slots)
                    .map(|t| round6(linear_to_db(self.gain(d, s, t))))
                    .collect();
                per_site.push(per_t);
            }
            gains_db.push(per_site);
        }
        let doc = RealizationDoc {
            version: 1,
            id: self.id.clone(),
            t_slots: self.t_slots,
            num_sites: self.num_sites,
            layout: self.layout.clone(),
            placements: self.placements.clone(),
            cell_ids: self.cell_ids.clone(),
            techs: self.techs.clone(),
            gains_db,
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: RealizationDoc = serde_json::from_str(s)?;
        if doc.version != 1 {
            return Err(SimError::Config(format!(
                "unsupported realization document version {}",
                doc.version
            )));
        }
        let gains = doc
            .gains_db
            .iter()
            .map(|per_site| {
                per_site
                    .iter()
                    .map(|per_t| per_t.iter().map(|&db| db_to_linear(db)).collect())
                    .collect()
            })
            .collect();
        let mut real =
            Self::from_parts(doc.id, doc.layout, doc.cell_ids, doc.techs, gains)?;
        real.placements = doc.placements;
        Ok(real)
    }
}

#[derive(Serialize, Deserialize)]
struct RealizationDoc {
    version: u32,
    id: String,
    t_slots: usize,
    num_sites: usize,
    layout: Option<CellLayout>,
    placements: Vec<NodePlacement>,
    cell_ids: Vec<usize>,
    techs: Vec<Tech>,
    gains_db: Vec<Vec<Vec<f64>>>,
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Compose per-link gains for one realization.
///
/// Per (device, site) link: minimum-image distance and bearing, then
/// gain_dB = -PL(d) - penetration + site antenna + device antenna
///           - directivity(theta) + shadowing, converted to linear and
/// multiplied by |h(t)|^2 per timeslot.
pub fn realize(
    layout: &CellLayout,
    placements: &[NodePlacement],
    t_slots: usize,
    opts: &ChannelOptions,
    id: String,
) -> Result<Realization> {
    if t_slots == 0 {
        return Err(SimError::Contract("realization needs at least one timeslot".into()));
    }
    let n = placements.len();
    let sites = layout.sites.len();

    let mut shadow_rng = ChaCha8Rng::seed_from_u64(opts.shadowing_seed);
    let shadow_dist = if opts.shadowing_std_db > 0.0 {
        Some(Normal::new(0.0, opts.shadowing_std_db).expect("valid std"))
    } else {
        None
    };

    let mut large_db = vec![0.0; n * sites];
    for (d, p) in placements.iter().enumerate() {
        for s in 0..sites {
            let v = layout.min_image_vector(p.position, s);
            let dist = v.norm();
            let pl = path_loss_db(dist)?;
            let theta_deg = v.y.atan2(v.x).to_degrees();
            let dir = directivity_attenuation_db(theta_deg);
            let shadow = match &shadow_dist {
                Some(dist) => dist.sample(&mut shadow_rng),
                None => 0.0,
            };
            large_db[d * sites + s] = -pl - PENETRATION_LOSS_DB + SITE_ANTENNA_GAIN_DBI
                + DEVICE_ANTENNA_GAIN_DBI
                - dir
                + shadow;
        }
    }

    let mut gains = vec![0.0; n * sites * t_slots];
    if opts.fading {
        let mut fading_rng = ChaCha8Rng::seed_from_u64(opts.fading_seed);
        let mut process =
            FadingProcess::new(DOPPLER_HZ, FRAME_INTERVAL_S, n * sites, &mut fading_rng);
        for t in 0..t_slots {
            if t > 0 {
                jakes_step(&mut process, &mut fading_rng);
            }
            for link in 0..n * sites {
                gains[link * t_slots + t] = db_to_linear(large_db[link]) * process.gain_sq(link);
            }
        }
    } else {
        for link in 0..n * sites {
            let g = db_to_linear(large_db[link]);
            for t in 0..t_slots {
                gains[link * t_slots + t] = g;
            }
        }
    }

    let mut real = Realization::from_parts(
        id,
        Some(layout.clone()),
        placements.iter().map(|p| p.cell_id).collect(),
        placements.iter().map(|p| p.tech).collect(),
        unflatten(&gains, n, sites, t_slots),
    )?;
    real.placements = placements.to_vec();
    Ok(real)
}

fn unflatten(flat: &[f64], n: usize, sites: usize, t_slots: usize) -> Vec<Vec<Vec<f64>>> {
    (0..n)
        .map(|d| {
            (0..sites)
                .map(|s| {
                    (0..t_slots)
                        .map(|t| flat[(d * sites + s) * t_slots + t])
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_layout, Point};

    fn lone_device(_layout: &CellLayout, x: f64, y: f64) -> Vec<NodePlacement> {
        vec![NodePlacement {
            device_id: 0,
            cell_id: 0,
            position: Point::new(x, y),
            tech: Tech::NbIot,
        }]
    }

    #[test]
    fn no_fading_gains_constant_over_time() {
        let layout = build_layout(7, 500.0, true).unwrap();
        let placements = crate::geometry::place_devices(&layout, 3, Tech::Nr, 5);
        let opts = ChannelOptions::new(false, 11, 12);
        let real = realize(&layout, &placements, 20, &opts, "w".into()).unwrap();
        for d in 0..real.num_devices() {
            for s in 0..real.num_sites() {
                let g0 = real.gain(d, s, 0);
                for t in 1..20 {
                    assert_eq!(real.gain(d, s, t), g0);
                }
            }
        }
    }

    #[test]
    fn link_budget_composition_at_boresight() {
        // Device 1 km east of the site, shadowing and fading disabled:
        // -128.1 - 20 + 15 + 0 - 0 = -133.1 dB.
        let layout = build_layout(1, 500.0, false).unwrap();
        let placements = lone_device(&layout, 1000.0, 0.0);
        let opts = ChannelOptions {
            fading: false,
            shadowing_std_db: 0.0,
            shadowing_seed: 0,
            fading_seed: 0,
        };
        let real = realize(&layout, &placements, 1, &opts, "w".into()).unwrap();
        let db = linear_to_db(real.gain(0, 0, 0));
        assert!((db - (-133.1)).abs() < 1e-9, "gain {db} dB");
    }

    #[test]
    fn fading_seed_does_not_touch_large_scale() {
        let layout = build_layout(7, 500.0, true).unwrap();
        let placements = crate::geometry::place_devices(&layout, 2, Tech::LteM, 9);
        let a = realize(&layout, &placements, 6, &ChannelOptions::new(true, 42, 1), "a".into())
            .unwrap();
        let b = realize(&layout, &placements, 6, &ChannelOptions::new(true, 42, 2), "b".into())
            .unwrap();
        // Average |h|^2 out by comparing the no-fading run instead.
        let base =
            realize(&layout, &placements, 6, &ChannelOptions::new(false, 42, 3), "c".into())
                .unwrap();
        for d in 0..a.num_devices() {
            for s in 0..a.num_sites() {
                // same underlying large-scale gain: ratio of faded to unfaded
                // gains equals |h|^2, which must be positive and differ
                // between the two fading seeds while bases agree.
                let ga = a.gain(d, s, 0) / base.gain(d, s, 0);
                let gb = b.gain(d, s, 0) / base.gain(d, s, 0);
                assert!(ga > 0.0 && gb > 0.0);
            }
        }
        // identical shadowing seed means identical no-fading realizations
        let base2 =
            realize(&layout, &placements, 6, &ChannelOptions::new(false, 42, 4), "d".into())
                .unwrap();
        for d in 0..base.num_devices() {
            for s in 0..base.num_sites() {
                assert_eq!(base.gain(d, s, 0), base2.gain(d, s, 0));
            }
        }
    }

    #[test]
    fn realize_bit_reproducible() {
        let layout = build_layout(7, 500.0, true).unwrap();
        let placements = crate::geometry::place_devices(&layout, 4, Tech::Nr, 21);
        let opts = ChannelOptions::new(true, 7, 8);
        let a = realize(&layout, &placements, 10, &opts, "w".into()).unwrap();
        let b = realize(&layout, &placements, 10, &opts, "w".into()).unwrap();
        for d in 0..a.num_devices() {
            for s in 0..a.num_sites() {
                for t in 0..10 {
                    assert_eq!(a.gain(d, s, t), b.gain(d, s, t));
                }
            }
        }
    }

    #[test]
    fn json_round_trip_preserves_six_decimals() {
        let layout = build_layout(7, 500.0, true).unwrap();
        let placements = crate::geometry::place_devices(&layout, 2, Tech::NbIot, 77);
        let opts = ChannelOptions::new(true, 5, 6);
        let real = realize(&layout, &placements, 4, &opts, "replay-0".into()).unwrap();
        let json = real.to_json().unwrap();
        let back = Realization::from_json(&json).unwrap();
        assert_eq!(back.num_devices(), real.num_devices());
        assert_eq!(back.t_slots(), real.t_slots());
        assert_eq!(back.id, "replay-0");
        for d in 0..real.num_devices() {
            for s in 0..real.num_sites() {
                for t in 0..4 {
                    let db_orig = linear_to_db(real.gain(d, s, t));
                    let db_back = linear_to_db(back.gain(d, s, t));
                    assert!((db_orig - db_back).abs() <= 5.1e-7, "{db_orig} vs {db_back}");
                }
            }
        }
    }
}
