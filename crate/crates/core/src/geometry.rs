//! Hexagonal multi-cell geometry: site layout with optional wraparound,
//! uniform device placement inside cell hexagons, the urban path-loss model,
//! and the tri-sector receive directivity pattern.
//!
//! Layouts place one gNodeB per cell. The 7-site layout is a center site plus
//! one ring; wraparound adds the six cluster translation vectors (length
//! ISD * sqrt(7)) so that distances are taken to the nearest mirror image and
//! the layout behaves as a torus.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::link::Tech;

/// Minimum transmitter-receiver separation for the path-loss model, meters.
pub const MIN_PATH_LOSS_DISTANCE_M: f64 = 35.0;

/// A 2-D point or vector in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Cell site layout on a hexagonal grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellLayout {
    pub num_sites: usize,
    pub isd_m: f64,
    pub sectors_per_site: usize,
    pub wraparound: bool,
    /// Site coordinates; index doubles as the cell id.
    pub sites: Vec<Point>,
    /// Wraparound translation vectors (empty when wraparound is off).
    pub translations: Vec<Point>,
}

impl CellLayout {
    /// Hexagon circumradius (center to vertex) of one cell.
    pub fn cell_radius(&self) -> f64 {
        self.isd_m / 3f64.sqrt()
    }

    /// Distance from `p` to site `site` under the minimum-image convention.
    pub fn min_image_distance(&self, p: Point, site: usize) -> f64 {
        self.min_image_vector(p, site).norm()
    }

    /// Vector from site `site` (or its nearest wraparound image) to `p`.
    ///
    /// The image search covers single translations and sums of two, so the
    /// convention stays exact for points up to one cluster tile away from
    /// the base layout.
    pub fn min_image_vector(&self, p: Point, site: usize) -> Point {
        let s = self.sites[site];
        let mut best = p.sub(s);
        let mut best_norm = best.norm();
        let mut consider = |tr: Point| {
            let v = p.sub(s.add(tr));
            let n = v.norm();
            if n < best_norm {
                best_norm = n;
                best = v;
            }
        };
        for (i, a) in self.translations.iter().enumerate() {
            consider(*a);
            for b in &self.translations[i..] {
                consider(a.add(*b));
            }
        }
        best
    }
}

/// One device pinned to a serving cell for a whole realization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodePlacement {
    pub device_id: usize,
    pub cell_id: usize,
    pub position: Point,
    pub tech: Tech,
}

/// Build a hexagonal layout. Supported sizes are 1 (single site at the
/// origin) and 7 (center plus one ring at the inter-site distance). With
/// wraparound the six cluster translation vectors of length ISD * sqrt(7)
/// are attached.
pub fn build_layout(num_sites: usize, isd_m: f64, wraparound: bool) -> Result<CellLayout> {
    if isd_m <= 0.0 {
        return Err(SimError::Config(format!("inter-site distance {isd_m} must be positive")));
    }
    let sites = match num_sites {
        1 => vec![Point::new(0.0, 0.0)],
        7 => {
            let mut sites = vec![Point::new(0.0, 0.0)];
            for k in 0..6 {
                let angle = std::f64::consts::FRAC_PI_3 * k as f64;
                sites.push(Point::new(isd_m * angle.cos(), isd_m * angle.sin()));
            }
            sites
        }
        other => {
            return Err(SimError::Config(format!(
                "unsupported layout size {other}; supported: 1, 7"
            )))
        }
    };

    let translations = if wraparound && num_sites == 7 {
        // Cluster lattice basis for a 7-cell tiling: c1 = 2u + v, c2 = -u + 3v
        // with u, v the site-grid basis. All six shortest lattice vectors have
        // length ISD * sqrt(7).
        let u = Point::new(isd_m, 0.0);
        let v = Point::new(isd_m / 2.0, isd_m * 3f64.sqrt() / 2.0);
        let c1 = Point::new(2.0 * u.x + v.x, 2.0 * u.y + v.y);
        let c2 = Point::new(-u.x + 3.0 * v.x, -u.y + 3.0 * v.y);
        let c3 = Point::new(c1.x - c2.x, c1.y - c2.y);
        vec![
            c1,
            Point::new(-c1.x, -c1.y),
            c2,
            Point::new(-c2.x, -c2.y),
            c3,
            Point::new(-c3.x, -c3.y),
        ]
    } else {
        Vec::new()
    };

    Ok(CellLayout {
        num_sites,
        isd_m,
        sectors_per_site: 3,
        wraparound: wraparound && num_sites == 7,
        sites,
        translations,
    })
}

/// Test whether `p` lies inside the hexagonal cell centered at `center`.
/// The hexagon is the Voronoi cell of the site grid: apothem isd/2 facing
/// the six neighbor directions.
pub fn point_in_cell(p: Point, center: Point, isd_m: f64) -> bool {
    let d = p.sub(center);
    let apothem = isd_m / 2.0;
    for k in 0..3 {
        let angle = std::f64::consts::FRAC_PI_3 * k as f64;
        let proj = d.x * angle.cos() + d.y * angle.sin();
        if proj.abs() > apothem + 1e-9 {
            return false;
        }
    }
    true
}

/// Place `per_cell` devices uniformly inside every cell hexagon, at least
/// 35 m from the serving site. Deterministic for a fixed seed.
pub fn place_devices(
    layout: &CellLayout,
    per_cell: usize,
    tech: Tech,
    rng_seed: u64,
) -> Vec<NodePlacement> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng_seed);
    let radius = layout.cell_radius();
    let mut placements = Vec::with_capacity(layout.num_sites * per_cell);
    let mut device_id = 0;
    for (cell_id, &site) in layout.sites.iter().enumerate() {
        for _ in 0..per_cell {
            let position = loop {
                let x = rng.gen_range(-radius..radius);
                let y = rng.gen_range(-radius..radius);
                let p = Point::new(site.x + x, site.y + y);
                if point_in_cell(p, site, layout.isd_m)
                    && p.sub(site).norm() >= MIN_PATH_LOSS_DISTANCE_M
                {
                    break p;
                }
            };
            placements.push(NodePlacement { device_id, cell_id, position, tech });
            device_id += 1;
        }
    }
    placements
}

/// Urban path loss 128.1 + 37.6 log10(d / 1 km) in dB, valid for d >= 35 m.
pub fn path_loss_db(distance_m: f64) -> Result<f64> {
    if distance_m < MIN_PATH_LOSS_DISTANCE_M {
        return Err(SimError::Domain(format!(
            "path loss model requires d >= 35 m, got {distance_m}"
        )));
    }
    Ok(128.1 + 37.6 * (distance_m / 1000.0).log10())
}

/// Receive directivity attenuation min(12 (theta/65)^2, 20) dB relative to
/// the sector boresight. Sector boresights sit at 0, 120 and 240 degrees;
/// the sector serving the studied resource block points at 0 degrees.
pub fn directivity_attenuation_db(angle_off_boresight_deg: f64) -> f64 {
    let mut theta = angle_off_boresight_deg % 360.0;
    if theta > 180.0 {
        theta -= 360.0;
    } else if theta < -180.0 {
        theta += 360.0;
    }
    (12.0 * (theta / 65.0).powi(2)).min(20.0)
}
