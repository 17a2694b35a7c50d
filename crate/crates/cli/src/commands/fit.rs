use std::fmt::Write as _;

use proxim_core::geodesy::{pair_distances, ZipGazetteer};
use proxim_core::powerlaw::{
    cumulative_points, fit_cumulative, fit_density, fit_mle, fit_mle_truncated, fit_rank,
    log_histogram, rank_points, sample_zero_inflated_zipf, DistanceSample, LogBinning, PowerLawFit,
};
use proxim_core::FitMethod;
use serde::Serialize;

use super::num;
use crate::error::{CliError, CliResult};
use crate::output::write;
use crate::provenance::Provenance;
use crate::{Cli, FitArgs, Synthetic};

#[derive(Serialize)]
struct Params<'a> {
    command: &'static str,
    args: &'a FitArgs,
}

fn read_pairs(path: &std::path::Path) -> CliResult<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        if row.len() < 2 {
            return Err(CliError::Data(format!("{} line {}: expected two zip codes", path.display(), i + 1)));
        }
        pairs.push((row[0].to_string(), row[1].to_string()));
    }
    Ok(pairs)
}

fn load_sample(cli: &Cli, args: &FitArgs, prov: &mut Provenance) -> CliResult<DistanceSample> {
    if let Some(path) = &args.input {
        prov.input("sample", path)?;
        return Ok(DistanceSample::read(path)?);
    }
    if let Some(pairs_path) = &args.pairs {
        let gaz_path = args.gazetteer.as_ref().expect("clap enforces --gazetteer");
        prov.input("pairs", pairs_path)?;
        prov.input("gazetteer", gaz_path)?;
        let gaz = ZipGazetteer::load(gaz_path)?;
        let out = pair_distances(&read_pairs(pairs_path)?, &gaz)?;
        prov.note(format!(
            "gazetteer rows: {} loaded, {} malformed; pairs excluded: {}",
            gaz.len(),
            gaz.malformed().len(),
            out.excluded
        ));
        return Ok(out.sample);
    }
    match args.synthetic {
        Some(Synthetic::Zipf) => Ok(sample_zero_inflated_zipf(
            args.n,
            args.zero_fraction,
            args.rmin,
            args.rmax,
            cli.seed.unwrap_or(0),
        )?),
        None => Err(CliError::Usage("one of --input, --pairs or --synthetic is required".into())),
    }
}

fn run_method(method: FitMethod, sample: &DistanceSample, args: &FitArgs) -> proxim_core::Result<PowerLawFit> {
    match method {
        FitMethod::Density => fit_density(sample, LogBinning::PerDecade(args.bins_per_decade)),
        FitMethod::Cumulative => fit_cumulative(sample),
        FitMethod::Rank => fit_rank(sample),
        FitMethod::Mle => match args.mle_rmax {
            Some(r_max) => fit_mle_truncated(sample, args.mle_rmin, r_max),
            None => fit_mle(sample, args.mle_rmin),
        },
    }
}

fn series_csv(method: FitMethod, sample: &DistanceSample, args: &FitArgs) -> CliResult<Option<String>> {
    let mut out = String::new();
    match method {
        FitMethod::Density => {
            out.push_str("lo,hi,center,count,density\n");
            for b in log_histogram(sample, LogBinning::PerDecade(args.bins_per_decade))? {
                let _ = writeln!(out, "{},{},{},{},{}", b.lo, b.hi, b.center, b.count, b.density);
            }
        }
        FitMethod::Cumulative => {
            out.push_str("r,cdf\n");
            for (r, f) in cumulative_points(sample) {
                let _ = writeln!(out, "{r},{f}");
            }
        }
        FitMethod::Rank => {
            out.push_str("rank,r\n");
            for (n, r) in rank_points(sample) {
                let _ = writeln!(out, "{n},{r}");
            }
        }
        FitMethod::Mle => return Ok(None),
    }
    Ok(Some(out))
}

pub fn run(cli: &Cli, args: &FitArgs) -> CliResult<()> {
    let params = Params {
        command: "fit-distances",
        args,
    };
    let seed = args.synthetic.map(|_| cli.seed.unwrap_or(0));
    let mut prov = Provenance::new("fit-distances", &params, seed);
    let sample = load_sample(cli, args, &mut prov)?;
    let methods: Vec<FitMethod> = if args.methods.is_empty() {
        FitMethod::ALL.to_vec()
    } else {
        let mut m = args.methods.clone();
        m.sort();
        m.dedup();
        m
    };

    let mut table = format!(
        "sample: {} values, {} zero ({:.4} of total)\n{:<11} {:>10} {:>10} {:>12} {:>8} {:>7}  note\n",
        sample.len(),
        sample.zero_count(),
        sample.zero_fraction(),
        "method",
        "exponent",
        "stderr",
        "correlation",
        "n_used",
        "n_zero"
    );
    let mut failures = 0;
    for &m in &methods {
        match run_method(m, &sample, args) {
            Ok(fit) => {
                let note = match (&fit.flag, fit.scale) {
                    (Some(flag), _) => format!("{flag:?}"),
                    (None, proxim_core::powerlaw::FitScale::Mle { r_min, r_max: Some(r_max) }) => {
                        format!("truncated on [{r_min}, {r_max}]")
                    }
                    (None, proxim_core::powerlaw::FitScale::Mle { r_min, r_max: None }) => {
                        format!("r_min = {r_min}")
                    }
                    _ => String::new(),
                };
                let row = format!(
                    "{:<11} {:>10} {:>10} {:>12} {:>8} {:>7}  {}",
                    m.as_str(),
                    num(fit.exponent),
                    num(fit.stderr),
                    fit.correlation.map_or_else(|| "-".to_string(), num),
                    fit.n_used,
                    fit.n_zero,
                    note
                );
                let _ = writeln!(table, "{}", row.trim_end());
                if let Some(csv) = series_csv(m, &sample, args)? {
                    let body = format!("{}{csv}", prov.comment_block());
                    write(&cli.out_dir, &format!("fit_series_{}.csv", m.as_str()), &body)?;
                }
            }
            Err(e) => {
                failures += 1;
                let _ = writeln!(table, "{:<11} error: {e}", m.as_str());
            }
        }
    }

    write(&cli.out_dir, "distances.txt", &sample.to_text())?;
    write(&cli.out_dir, "fit_report.txt", &format!("{}{table}", prov.comment_block()))?;
    if !cli.quiet {
        print!("{table}");
    }
    if failures == methods.len() {
        return Err(CliError::Data("no estimator could be fitted to this sample".into()));
    }
    Ok(())
}
