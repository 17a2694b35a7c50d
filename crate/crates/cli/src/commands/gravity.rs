use std::fmt::Write as _;

use proxim_core::gravity::{simulate, GravityConfig, MassModel, Region};
use proxim_core::powerlaw::{fit_density, fit_mle_truncated, DistanceSample, LogBinning};
use serde::Serialize;

use super::num;
use crate::error::{CliError, CliResult};
use crate::output::write;
use crate::provenance::Provenance;
use crate::{Cli, GravityArgs};

#[derive(Serialize)]
struct Params<'a> {
    command: &'static str,
    simulation: &'a GravityConfig,
    fit_rmin: f64,
    fit_rmax: f64,
}

/// Default fit window: above both the floor and the clamp radius, and well
/// inside the region.
fn default_window(cfg: &GravityConfig) -> (f64, f64) {
    let r_min = match cfg.mass_model {
        MassModel::Identical { mass } => cfg.r_floor.max(mass * cfg.g.sqrt()),
        MassModel::Lognormal { .. } => cfg.r_floor,
    };
    let r_max = match cfg.region {
        Region::Torus { side } => side / 4.0,
        Region::Disc { radius } => radius / 2.0,
    };
    (r_min, r_max)
}

pub fn run(cli: &Cli, args: &GravityArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.config_file).map_err(|source| CliError::Read {
        path: args.config_file.clone(),
        source,
    })?;
    let mut cfg = GravityConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let (dmin, dmax) = default_window(&cfg);
    let (fit_rmin, fit_rmax) = (args.fit_rmin.unwrap_or(dmin), args.fit_rmax.unwrap_or(dmax));
    let params = Params {
        command: "simulate-gravity",
        simulation: &cfg,
        fit_rmin,
        fit_rmax,
    };
    let prov = Provenance::new("simulate-gravity", &params, Some(cfg.seed));

    let links = simulate(&cfg)?;
    if links.realized_count() == 0 {
        return Err(CliError::Data(format!(
            "0 links realized (expected {}); nothing to fit. Raise G or the population.",
            links.expected_count
        )));
    }
    let distances = links.distances(format!("gravity simulation seed={}", cfg.seed));

    let mut report = String::new();
    let _ = writeln!(report, "links: {} realized, {:.3} expected", links.realized_count(), links.expected_count);
    let _ = writeln!(report, "fit window: [{fit_rmin}, {fit_rmax}] km");
    match fit_mle_truncated(&distances, Some(fit_rmin), fit_rmax) {
        Ok(fit) => {
            let _ = writeln!(
                report,
                "exponent {} ± {} (truncated MLE, n = {})",
                num(fit.exponent),
                num(fit.stderr),
                fit.n_used
            );
        }
        Err(e) => {
            let _ = writeln!(report, "truncated MLE failed: {e}");
        }
    }
    let window: Vec<f64> = distances
        .values()
        .iter()
        .copied()
        .filter(|&d| d >= fit_rmin && d <= fit_rmax)
        .collect();
    if let Ok(sample) = DistanceSample::new(window, "fit window") {
        match fit_density(&sample, LogBinning::default()) {
            Ok(fit) => {
                let _ = writeln!(
                    report,
                    "density fit: exponent {} ± {}, R = {}",
                    num(fit.exponent),
                    num(fit.stderr),
                    fit.correlation.map_or_else(|| "-".into(), num)
                );
            }
            Err(e) => {
                let _ = writeln!(report, "density fit failed: {e}");
            }
        }
    }

    write(&cli.out_dir, "gravity_distances.txt", &distances.to_text())?;
    if !args.no_links {
        let mut csv = prov.comment_block();
        csv.push_str("i,j,distance\n");
        for l in &links.links {
            let _ = writeln!(csv, "{},{},{}", l.i, l.j, l.distance);
        }
        write(&cli.out_dir, "gravity_links.csv", &csv)?;
    }
    write(&cli.out_dir, "gravity_report.txt", &format!("{}{report}", prov.comment_block()))?;
    if !cli.quiet {
        print!("{report}");
    }
    Ok(())
}
