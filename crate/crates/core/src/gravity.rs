//! Monte Carlo check of the gravity model of social ties.
//!
//! Individuals are scattered uniformly over a region and every unordered pair
//! at distance `r >= r_floor` is linked independently with probability
//! `min(1, G m_i m_j / r^2)`. On a homogeneous plane the number of partners at
//! distance `r` grows like `2πr`, so the link-distance density is `∝ 1/r`.
//!
//! Pair enumeration is O(M²) and meant for populations up to ~20,000.
//! Each pair's uniform draw is a hash of `(seed, i, j)`, which makes results
//! independent of how rows are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powerlaw::DistanceSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    /// Square with periodic boundaries, side length in km.
    Torus { side: f64 },
    /// Disc of the given radius in km. Pairs near the rim see fewer partners,
    /// so the `1/r` law bends downward at large `r`.
    Disc { radius: f64 },
}

impl Region {
    pub fn area(&self) -> f64 {
        match *self {
            Region::Torus { side } => side * side,
            Region::Disc { radius } => std::f64::consts::PI * radius * radius,
        }
    }

    /// Distance between two points; minimum-image on the torus.
    pub fn distance(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let (mut dx, mut dy) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
        if let Region::Torus { side } = *self {
            dx = dx.min(side - dx);
            dy = dy.min(side - dy);
        }
        dx.hypot(dy)
    }

    fn validate(&self) -> Result<()> {
        let size = match *self {
            Region::Torus { side } => side,
            Region::Disc { radius } => radius,
        };
        if !(size > 0.0 && size.is_finite()) {
            return Err(Error::InvalidParameter(format!("region size must be positive (got {size})")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MassModel {
    Identical {
        #[serde(default = "unit_mass")]
        mass: f64,
    },
    /// `ln m ~ Normal(mu, sigma)`.
    Lognormal { mu: f64, sigma: f64 },
}

fn unit_mass() -> f64 {
    1.0
}

fn default_r_floor() -> f64 {
    1.0
}

fn default_max_links() -> usize {
    5_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GravityConfig {
    pub population: usize,
    pub region: Region,
    pub mass_model: MassModel,
    /// Link-strength constant.
    #[serde(rename = "g")]
    pub g: f64,
    /// Pairs closer than this (km) are never linked.
    #[serde(default = "default_r_floor")]
    pub r_floor: f64,
    #[serde(default)]
    pub seed: u64,
    /// Refuse to run when the expected link count exceeds this.
    #[serde(default = "default_max_links")]
    pub max_links: usize,
}

impl GravityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidParameter(format!(
                "population must be at least 2 (got {})",
                self.population
            )));
        }
        if !(self.r_floor > 0.0 && self.r_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!("r_floor must be positive (got {})", self.r_floor)));
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidParameter(format!("G must be non-negative (got {})", self.g)));
        }
        match self.mass_model {
            MassModel::Identical { mass } if !(mass > 0.0 && mass.is_finite()) => {
                return Err(Error::InvalidParameter(format!("mass must be positive (got {mass})")))
            }
            MassModel::Lognormal { sigma, .. } if !(sigma >= 0.0 && sigma.is_finite()) => {
                return Err(Error::InvalidParameter(format!("sigma must be non-negative (got {sigma})")))
            }
            _ => {}
        }
        self.region.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: GravityConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("gravity config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn link_probability(&self, m_i: f64, m_j: f64, r: f64) -> f64 {
        if r < self.r_floor {
            0.0
        } else {
            (self.g * m_i * m_j / (r * r)).min(1.0)
        }
    }
}

/// Positions and masses of the simulated individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub positions: Vec<(f64, f64)>,
    pub masses: Vec<f64>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn mean_mass(&self) -> f64 {
        self.masses.iter().sum::<f64>() / self.masses.len() as f64
    }

    /// Shifts every position by `(dx, dy)`, wrapping on the torus.
    pub fn translated(&self, region: &Region, dx: f64, dy: f64) -> Population {
        let positions = self
            .positions
            .iter()
            .map(|&(x, y)| match *region {
                Region::Torus { side } => ((x + dx).rem_euclid(side), (y + dy).rem_euclid(side)),
                Region::Disc { .. } => (x + dx, y + dy),
            })
            .collect();
        Population {
            positions,
            masses: self.masses.clone(),
        }
    }
}

/// Uniform positions over the region, then masses, from one seeded stream.
pub fn place_population(config: &GravityConfig) -> Result<Population> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let positions = (0..config.population)
        .map(|_| match config.region {
            Region::Torus { side } => (rng.random::<f64>() * side, rng.random::<f64>() * side),
            Region::Disc { radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = std::f64::consts::TAU * rng.random::<f64>();
                (r * theta.cos(), r * theta.sin())
            }
        })
        .collect();
    let masses = match config.mass_model {
        MassModel::Identical { mass } => vec![mass; config.population],
        MassModel::Lognormal { mu, sigma } => {
            let dist = LogNormal::new(mu, sigma)
                .map_err(|e| Error::InvalidParameter(format!("lognormal masses: {e}")))?;
            (0..config.population).map(|_| dist.sample(&mut rng)).collect()
        }
    };
    Ok(Population { positions, masses })
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform `[0, 1)` draw keyed on `(seed, i, j)`.
#[inline]
pub fn pair_uniform(seed: u64, i: usize, j: usize) -> f64 {
    let h = splitmix64(splitmix64(splitmix64(seed) ^ i as u64) ^ j as u64);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Link {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct LinkSample {
    /// Ordered by `(i, j)` with `i < j`.
    pub links: Vec<Link>,
    /// Σ of link probabilities over all pairs.
    pub expected_count: f64,
}

impl LinkSample {
    pub fn realized_count(&self) -> usize {
        self.links.len()
    }

    pub fn distances(&self, label: impl Into<String>) -> DistanceSample {
        DistanceSample::new(self.links.iter().map(|l| l.distance).collect(), label)
            .expect("link distances are finite and >= r_floor")
    }

    /// Number of links touching each individual.
    pub fn degrees(&self, population: usize) -> Vec<usize> {
        let mut deg = vec![0; population];
        for l in &self.links {
            deg[l.i] += 1;
            deg[l.j] += 1;
        }
        deg
    }
}

/// Expected link count `Σ_{i<j} p(r_ij)`.
pub fn expected_link_count(config: &GravityConfig, pop: &Population) -> f64 {
    let n = pop.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let (pi, mi) = (pop.positions[i], pop.masses[i]);
            (i + 1..n)
                .map(|j| {
                    let r = config.region.distance(pi, pop.positions[j]);
                    config.link_probability(mi, pop.masses[j], r)
                })
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// Draws links for a fixed population.
pub fn link_population(config: &GravityConfig, pop: &Population) -> Result<LinkSample> {
    config.validate()?;
    if pop.positions.len() != pop.masses.len() {
        return Err(Error::InvalidParameter("positions and masses differ in length".into()));
    }
    let expected_count = expected_link_count(config, pop);
    if expected_count > config.max_links as f64 {
        return Err(Error::LinkCapExceeded {
            expected: expected_count,
            cap: config.max_links,
        });
    }
    let n = pop.len();
    let seed = config.seed;
    let rows: Vec<Vec<Link>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (pi, mi) = (pop.positions[i], pop.masses[i]);
            (i + 1..n)
                .filter_map(|j| {
                    let r = config.region.distance(pi, pop.positions[j]);
                    let p = config.link_probability(mi, pop.masses[j], r);
                    (p > 0.0 && pair_uniform(seed, i, j) < p).then_some(Link { i, j, distance: r })
                })
                .collect()
        })
        .collect();
    Ok(LinkSample {
        links: rows.into_iter().flatten().collect(),
        expected_count,
    })
}

pub fn simulate(config: &GravityConfig) -> Result<LinkSample> {
    let pop = place_population(config)?;
    link_population(config, &pop)
}

/// Expected links per unit distance at `r` for identical masses on a torus:
/// `M(M-1)/2 · 2πr/Area · min(1, G m² / r²)`, valid for
/// `r_floor <= r <= side/2`.
pub fn analytic_f(config: &GravityConfig, r: f64) -> Result<f64> {
    config.validate()?;
    let Region::Torus { side } = config.region else {
        return Err(Error::InvalidParameter("analytic_f requires a torus region".into()));
    };
    let MassModel::Identical { mass } = config.mass_model else {
        return Err(Error::InvalidParameter("analytic_f requires identical masses".into()));
    };
    if !(r >= config.r_floor && r <= side / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "r = {r} is outside the validity window [{}, {}]",
            config.r_floor,
            side / 2.0
        )));
    }
    let m = config.population as f64;
    let pairs = m * (m - 1.0) / 2.0;
    let ring = std::f64::consts::TAU * r / config.region.area();
    Ok(pairs * ring * config.link_probability(mass, mass, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(population: usize, g: f64, seed: u64) -> GravityConfig {
        GravityConfig {
            population,
            region: Region::Torus { side: 1000.0 },
            mass_model: MassModel::Identical { mass: 1.0 },
            g,
            r_floor: 1.0,
            seed,
            max_links: 5_000_000,
        }
    }

    #[test]
    fn zero_g_gives_no_links() {
        let s = simulate(&torus(300, 0.0, 1)).unwrap();
        assert_eq!(s.realized_count(), 0);
        assert_eq!(s.expected_count, 0.0);
    }

    #[test]
    fn config_validation() {
        let mut c = torus(1, 1.0, 0);
        assert!(c.validate().is_err());
        c.population = 2;
        c.r_floor = 0.0;
        assert!(c.validate().is_err());
        c.r_floor = 1.0;
        c.g = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_config() {
        let c = GravityConfig::from_json(
            r#"{"population": 10, "region": {"kind": "torus", "side": 100},
                "mass_model": {"kind": "identical"}, "g": 2.0, "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(c.r_floor, 1.0);
        assert_eq!(c.mass_model, MassModel::Identical { mass: 1.0 });
        assert!(GravityConfig::from_json(r#"{"population": 1}"#).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let mut c = torus(400, 1e6, 1);
        c.max_links = 10;
        assert!(matches!(simulate(&c), Err(Error::LinkCapExceeded { .. })));
    }

    #[test]
    fn links_are_unique_and_above_floor() {
        let mut c = torus(600, 50.0, 4);
        c.r_floor = 5.0;
        let s = simulate(&c).unwrap();
        assert!(s.realized_count() > 0);
        assert!(s.links.iter().all(|l| l.i < l.j && l.distance >= 5.0));
        assert!(s.links.windows(2).all(|w| (w[0].i, w[0].j) < (w[1].i, w[1].j)));
    }

    #[test]
    fn deterministic_for_seed() {
        let a = simulate(&torus(500, 20.0, 77)).unwrap();
        let b = simulate(&torus(500, 20.0, 77)).unwrap();
        let c = simulate(&torus(500, 20.0, 78)).unwrap();
        assert_eq!(a.links, b.links);
        assert_ne!(a.links, c.links);
    }

    #[test]
    fn torus_distance_properties() {
        let region = Region::Torus { side: 10.0 };
        assert_eq!(region.distance((1.0, 1.0), (9.0, 9.0)), region.distance((9.0, 9.0), (1.0, 1.0)));
        assert!((region.distance((1.0, 1.0), (9.0, 9.0)) - 8f64.sqrt()).abs() < 1e-12);
        assert!(region.distance((0.0, 0.0), (5.0, 5.0)) <= 10.0 * 2f64.sqrt() / 2.0 + 1e-12);
    }

    #[test]
    fn translation_invariance_on_torus() {
        let region = Region::Torus { side: 1024.0 };
        let cfg = GravityConfig { region, ..torus(50, 1.0, 3) };
        let pop = place_population(&cfg).unwrap();
        let moved = pop.translated(&region, 256.0, 512.0);
        for i in 0..pop.len() {
            for j in 0..pop.len() {
                let d0 = region.distance(pop.positions[i], pop.positions[j]);
                let d1 = region.distance(moved.positions[i], moved.positions[j]);
                assert!((d0 - d1).abs() <= 1e-9 * d0.max(1.0), "{d0} vs {d1}");
            }
        }
    }

    #[test]
    fn analytic_f_shape() {
        let c = torus(5000, 100.0, 0);
        // Unclamped above r* = sqrt(G) = 10.
        let f20 = analytic_f(&c, 20.0).unwrap();
        let f40 = analytic_f(&c, 40.0).unwrap();
        assert!((f20 / f40 - 2.0).abs() < 1e-12);
        let r_star = 10.0;
        let left = analytic_f(&c, r_star * (1.0 - 1e-12)).unwrap();
        let right = analytic_f(&c, r_star * (1.0 + 1e-12)).unwrap();
        assert!((left - right).abs() / left < 1e-9);
        assert!(analytic_f(&c, 600.0).is_err());
        assert!(analytic_f(&c, 0.5).is_err());
        let disc = GravityConfig { region: Region::Disc { radius: 500.0 }, ..c.clone() };
        assert!(analytic_f(&disc, 20.0).is_err());
    }

    #[test]
    fn pair_uniform_in_range_and_varied() {
        let draws: Vec<f64> = (0..1000).map(|j| pair_uniform(5, 3, j)).collect();
        assert!(draws.iter().all(|u| (0.0..1.0).contains(u)));
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        assert!((mean - 0.5).abs() < 0.05);
        assert_ne!(pair_uniform(5, 3, 4), pair_uniform(5, 4, 3));
    }
}
