//! Monte Carlo checks of the gravity simulation against its analytic rates.

use proxim_core::gravity::{
    analytic_f, link_population, place_population, simulate, GravityConfig, MassModel, Population, Region,
};
use proxim_core::powerlaw::{fit_mle_truncated, DistanceSample};
use rayon::prelude::*;

fn torus(population: usize, g: f64, r_floor: f64, seed: u64) -> GravityConfig {
    GravityConfig {
        population,
        region: Region::Torus { side: 1000.0 },
        mass_model: MassModel::Identical { mass: 1.0 },
        g,
        r_floor,
        seed,
        max_links: 5_000_000,
    }
}

#[test]
fn two_node_link_frequency_is_binomial() {
    let pop = Population {
        positions: vec![(100.0, 100.0), (130.0, 140.0)],
        masses: vec![1.0, 1.0],
    };
    let trials = 10_000;
    let p = 500.0 / (50.0 * 50.0);
    let hits = (0..trials)
        .filter(|&s| link_population(&torus(2, 500.0, 1.0, s), &pop).unwrap().realized_count() == 1)
        .count();
    let freq = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((freq - p).abs() <= 3.0 * se, "{freq} vs {p} ± {se}");
}

#[test]
fn node_degrees_match_expected_sums() {
    let cfg = torus(1000, 60.0, 5.0, 0);
    let pop = place_population(&cfg).unwrap();
    let n = pop.len();
    let mut expected = vec![0.0; n];
    let mut variance = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let r = cfg.region.distance(pop.positions[i], pop.positions[j]);
                let p = cfg.link_probability(1.0, 1.0, r);
                expected[i] += p;
                variance[i] += p * (1.0 - p);
            }
        }
    }
    let trials = 200u64;
    let totals: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|s| {
            let c = GravityConfig { seed: 1000 + s, ..cfg.clone() };
            link_population(&c, &pop).unwrap().degrees(n)
        })
        .reduce(|| vec![0; n], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let inside = (0..n)
        .filter(|&i| {
            let mean = totals[i] as f64 / trials as f64;
            (mean - expected[i]).abs() <= 3.0 * (variance[i] / trials as f64).sqrt()
        })
        .count();
    assert!(inside as f64 / n as f64 >= 0.99, "{inside} of {n} nodes within 3 se");
}

#[test]
fn binned_counts_follow_analytic_rate() {
    let cfg = torus(5000, 180.0, 15.0, 11);
    let links = simulate(&cfg).unwrap();
    let (lo, hi) = (cfg.r_floor, 500.0);
    let bins = 20;
    let mut edges: Vec<f64> = (0..=bins).map(|k| lo * (hi / lo).powf(k as f64 / bins as f64)).collect();
    edges[bins] = hi;
    let mut observed = vec![0usize; bins];
    for l in &links.links {
        if l.distance < hi {
            let k = edges.partition_point(|&e| e <= l.distance) - 1;
            observed[k] += 1;
        }
    }
    let mut chi2 = 0.0;
    for k in 0..bins {
        let expected = simpson(|r| analytic_f(&cfg, r).unwrap(), edges[k], edges[k + 1], 200);
        chi2 += (observed[k] as f64 - expected).powi(2) / expected;
    }
    let per_dof = chi2 / bins as f64;
    assert!(per_dof < 2.0, "chi2/dof = {per_dof}");
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for k in 1..m {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * k as f64);
    }
    s * h / 3.0
}

#[test]
fn link_distances_have_unit_exponent() {
    let cfg = torus(5000, 180.0, 15.0, 3);
    let links = simulate(&cfg).unwrap();
    let fit = fit_mle_truncated(&links.distances("gravity"), Some(cfg.r_floor), 250.0).unwrap();
    assert!((fit.exponent - 1.0).abs() <= 0.1, "{fit:?}");
    assert!(links.realized_count() > 40_000 && links.realized_count() < 60_000);
}

#[test]
fn heterogeneous_mass_subsets_keep_the_law() {
    let cfg = GravityConfig {
        mass_model: MassModel::Lognormal { mu: 0.0, sigma: 0.5 },
        ..torus(6000, 160.0, 15.0, 5)
    };
    let pop = place_population(&cfg).unwrap();
    let links = link_population(&cfg, &pop).unwrap();
    let median = {
        let mut m = pop.masses.clone();
        m.sort_by(f64::total_cmp);
        m[m.len() / 2]
    };
    let classes: [(&str, fn(f64, f64, f64) -> bool); 2] = [
        ("both light", |a, b, m| a < m && b < m),
        ("mixed", |a, b, m| (a < m) != (b < m)),
    ];
    for (label, keep) in classes {
        let subset: Vec<_> = links
            .links
            .iter()
            .filter(|l| keep(pop.masses[l.i], pop.masses[l.j], median))
            .collect();
        // Stay above the largest clamp radius in the subset.
        let r_star = subset
            .iter()
            .map(|l| (cfg.g * pop.masses[l.i] * pop.masses[l.j]).sqrt())
            .fold(cfg.r_floor, f64::max);
        let d: Vec<f64> = subset.iter().map(|l| l.distance).collect();
        let sample = DistanceSample::new(d, label).unwrap();
        let fit = fit_mle_truncated(&sample, Some(r_star), 250.0).unwrap();
        assert!(fit.n_used >= 5000, "{label}: only {} links", fit.n_used);
        assert!((fit.exponent - 1.0).abs() <= 0.15, "{label}: {fit:?}");
    }
}

#[test]
fn disc_edge_bends_the_tail() {
    let cfg = GravityConfig {
        region: Region::Disc { radius: 500.0 },
        ..torus(4000, 200.0, 15.0, 8)
    };
    let links = simulate(&cfg).unwrap();
    let fit = fit_mle_truncated(&links.distances("disc"), Some(100.0), 900.0).unwrap();
    // Fewer partners near the rim steepen the decay.
    assert!(fit.exponent > 1.2, "{fit:?}");
}

#[test]
fn identical_seeds_identical_links() {
    let cfg = torus(2000, 100.0, 10.0, 21);
    assert_eq!(simulate(&cfg).unwrap().links, simulate(&cfg).unwrap().links);
}
