use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use proxim_core::babynames::{parse_national, parse_state, BirthTotals, NamePanel, PanelOptions, ParseOptions};
use proxim_core::pei::{breakpoint_test, compute_series, BreakpointMode, CohortRule, SeriesOptions};
use proxim_core::AdjacencyGraph;
use serde::Serialize;

use super::num;
use crate::error::{CliError, CliResult};
use crate::output::write;
use crate::provenance::Provenance;
use crate::{Cli, Cohort, NameDataArgs, PeiArgs, TTest};

#[derive(Serialize)]
struct Params<'a> {
    command: &'static str,
    args: &'a PeiArgs,
}

/// Parses the state (and optional national) files into a panel over `years`.
pub(crate) fn load_panel(
    data: &NameDataArgs,
    national: Option<&Path>,
    years: RangeInclusive<i32>,
    prov: &mut Provenance,
) -> CliResult<NamePanel> {
    let opts = ParseOptions { lenient: data.lenient };
    prov.input("states", &data.states)?;
    let parsed = parse_state(&data.states, opts)?;
    let mut malformed = parsed.malformed_count();
    let mut records = parsed.records;
    if let Some(dir) = national {
        prov.input("national", dir)?;
        let nat = parse_national(dir, opts)?;
        malformed += nat.malformed_count();
        records.extend(nat.records);
    }
    if data.lenient {
        prov.note(format!("malformed lines skipped: {malformed}"));
    }
    let mut popts = PanelOptions::new(years);
    popts.top_k = (data.top_k > 0).then_some(data.top_k);
    if let Some(path) = &data.totals {
        prov.input("totals", path)?;
        popts.totals_override = Some(BirthTotals::load(path)?);
    }
    let panel = NamePanel::build(&records, popts)?;
    prov.note(format!("totals: {}", panel.totals_policy()));
    prov.note(format!(
        "top-k per state, year and sex: {}",
        panel.top_k().map_or_else(|| "all".to_string(), |k| k.to_string())
    ));
    Ok(panel)
}

fn cohort_rule(args: &PeiArgs) -> CliResult<CohortRule> {
    match (args.cohort, args.cohort_year) {
        (Cohort::FirstInsideWindow, _) => Ok(CohortRule::FirstInsideWindow),
        (Cohort::AllSeeded, _) => Ok(CohortRule::AllSeeded),
        (Cohort::FirstAfter, Some(y)) => Ok(CohortRule::FirstAfter(y)),
        (Cohort::FirstAfter, None) => Err(CliError::Usage("--cohort first-after needs --cohort-year".into())),
    }
}

pub fn run(cli: &Cli, args: &PeiArgs) -> CliResult<()> {
    if args.start >= args.end {
        return Err(CliError::Usage(format!("--start {} must precede --end {}", args.start, args.end)));
    }
    let rule = cohort_rule(args)?;
    let history_start = args.history_start.unwrap_or(args.start).min(args.start);
    let mut prov = Provenance::new("compute-pei", &Params { command: "compute-pei", args }, None);
    let panel = load_panel(&args.data, args.national.as_deref(), history_start..=args.end, &mut prov)?;
    let graph = match &args.adjacency {
        Some(path) => {
            prov.input("adjacency", path)?;
            AdjacencyGraph::load(path, args.corner_pairs)?
        }
        None => AdjacencyGraph::builtin(args.corner_pairs),
    };
    prov.note(format!("cohort rule: {rule}"));
    prov.note(format!("four-corners contacts counted as borders: {}", args.corner_pairs));
    prov.note(format!("window: {}-{}, history from {history_start}", args.start, args.end));

    let opts = SeriesOptions {
        rule,
        ..SeriesOptions::new(args.start..=args.end)
    };
    let series = compute_series(&panel, &graph, &opts)?;
    if series.points.is_empty() {
        return Err(CliError::Data(format!(
            "no eligible names in {}-{} under cohort rule {rule}",
            args.start, args.end
        )));
    }

    let header = prov.comment_block();
    let mut points = header.clone();
    points.push_str("name,sex,year,pei,n_i_a,n_i_b,tot_a,tot_b,group_a_size\n");
    for p in &series.points {
        let _ = writeln!(
            points,
            "{},{},{},{},{},{},{},{},{}",
            p.name,
            p.sex,
            p.year,
            p.pei,
            p.n_i_a,
            p.n_i_b,
            p.tot_a,
            p.tot_b,
            p.group_a.len()
        );
    }
    write(&cli.out_dir, "pei_points.csv", &points)?;

    let mut yearly = header.clone();
    yearly.push_str("year,median,p25,p75,count\n");
    for a in series.aggregates.values() {
        let q = |target: f64| {
            a.percentiles
                .iter()
                .find(|(p, _)| *p == target)
                .map_or(f64::NAN, |&(_, v)| v)
        };
        let _ = writeln!(yearly, "{},{},{},{},{}", a.year, a.median, q(0.25), q(0.75), a.count);
    }
    write(&cli.out_dir, "pei_yearly.csv", &yearly)?;

    let mut report = String::new();
    let positive = series.points.iter().filter(|p| p.pei > 0.0).count();
    let _ = writeln!(
        report,
        "points: {} ({} positive, {:.4}); name-years skipped for zero group totals: {}",
        series.points.len(),
        positive,
        positive as f64 / series.points.len() as f64,
        series.skipped
    );
    let years_positive = series.aggregates.values().filter(|a| a.median > 0.0).count();
    let _ = writeln!(
        report,
        "years with median > 0: {} of {}",
        years_positive,
        series.aggregates.len()
    );
    if args.national.is_some() {
        let audit = panel.audit_national();
        let _ = writeln!(
            report,
            "state sums within national counts: {} of {} name-years ({:.4})",
            audit.checked - audit.violations,
            audit.checked,
            audit.consistent_fraction()
        );
    }
    let modes: &[BreakpointMode] = match args.t_test {
        TTest::Medians => &[BreakpointMode::YearlyMedians],
        TTest::Pooled => &[BreakpointMode::PooledPoints],
        TTest::Both => &[BreakpointMode::YearlyMedians, BreakpointMode::PooledPoints],
    };
    for &mode in modes {
        match breakpoint_test(&series, args.breakpoint, mode) {
            Ok(b) => {
                let _ = writeln!(
                    report,
                    "breakpoint {} ({mode}): mean pre {} (n={}), mean post {} (n={}), welch t {} (pre - post), dof {}, p {:.3e}",
                    b.breakpoint,
                    num(b.mean_pre),
                    b.n_pre,
                    num(b.mean_post),
                    b.n_post,
                    num(b.t),
                    num(b.dof),
                    b.p_value
                );
            }
            Err(e) => {
                let _ = writeln!(report, "breakpoint {} ({mode}): {e}", args.breakpoint);
            }
        }
    }
    write(&cli.out_dir, "breakpoint_report.txt", &format!("{header}{report}"))?;
    if !cli.quiet {
        print!("{report}");
    }
    Ok(())
}
