//! Proximity-Effect Index.
//!
//! For a name `i` in year `t`, Group A is the set of states where the name
//! was listed in any earlier year, plus every state bordering one of them;
//! Group B is everything else. Without a proximity effect the name's births
//! would split between the groups in proportion to total births, so
//!
//! ```text
//! PEI = N_A / (T_A / (T_A + T_B) · N) - 1,   N = N_A + N_B
//! ```
//!
//! is zero; positive values mean the name is over-represented near the
//! states where it already appeared.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::adjacency::AdjacencyGraph;
use crate::babynames::{NameKey, NamePanel, Sex};
use crate::error::{Error, Result};
use crate::states::{State, StateSet};
use crate::stats::{median_sorted, quantile_sorted, sorted_copy, welch_t_test};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeiPoint {
    pub name: String,
    pub sex: Sex,
    pub year: i32,
    pub pei: f64,
    pub group_a: StateSet,
    pub n_i_a: u64,
    pub n_i_b: u64,
    pub tot_a: u64,
    pub tot_b: u64,
}

/// The index from its four counts, evaluated in a fixed order so that
/// recomputation from a stored point is bit-identical.
pub fn pei_formula(n_i_a: u64, n_i_b: u64, tot_a: u64, tot_b: u64) -> f64 {
    let share_a = tot_a as f64 / (tot_a + tot_b) as f64;
    let expected = share_a * (n_i_a + n_i_b) as f64;
    n_i_a as f64 / expected - 1.0
}

impl PeiPoint {
    pub fn recompute(&self) -> f64 {
        pei_formula(self.n_i_a, self.n_i_b, self.tot_a, self.tot_b)
    }
}

pub fn group_a_states(key: &NameKey, year: i32, panel: &NamePanel, graph: &AdjacencyGraph) -> StateSet {
    graph.expand(panel.seeded_before(key, year))
}

pub fn compute_pei(key: &NameKey, year: i32, panel: &NamePanel, graph: &AdjacencyGraph) -> Result<PeiPoint> {
    let group_a = group_a_states(key, year, panel, graph);
    if group_a.is_empty() {
        return Err(Error::NotSeeded {
            name: key.name.clone(),
            sex: key.sex.as_char(),
            year,
        });
    }
    let (mut n_i_a, mut n_i_b) = (0u64, 0u64);
    if let Some(counts) = panel.state_counts(key, year) {
        for (&state, &c) in counts {
            if group_a.contains(state) {
                n_i_a += c;
            } else {
                n_i_b += c;
            }
        }
    }
    if n_i_a + n_i_b == 0 {
        return Err(Error::ZeroNameCount {
            name: key.name.clone(),
            sex: key.sex.as_char(),
            year,
        });
    }
    let tot_a = panel.total_over(group_a, year);
    let tot_b = panel.total_over(group_a.complement(), year);
    if tot_a == 0 {
        return Err(Error::ZeroGroupTotal {
            name: key.name.clone(),
            sex: key.sex.as_char(),
            year,
        });
    }
    Ok(PeiPoint {
        name: key.name.clone(),
        sex: key.sex,
        year,
        pei: pei_formula(n_i_a, n_i_b, tot_a, tot_b),
        group_a,
        n_i_a,
        n_i_b,
        tot_a,
        tot_b,
    })
}

/// Which `(name, sex)` series enter the yearly PEI distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CohortRule {
    /// First state appearance strictly after the window's first year and
    /// within the window. Names already listed in the first year are
    /// left-censored and excluded.
    #[default]
    FirstInsideWindow,
    /// Every series with a non-empty Group A.
    AllSeeded,
    /// First state appearance strictly after the given year.
    FirstAfter(i32),
}

impl fmt::Display for CohortRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohortRule::FirstInsideWindow => f.write_str("first-inside-window (names first listed strictly after the window start)"),
            CohortRule::AllSeeded => f.write_str("all-seeded (every name with a non-empty group A)"),
            CohortRule::FirstAfter(y) => write!(f, "first-after-{y} (names first listed strictly after {y})"),
        }
    }
}

pub fn eligible_names(panel: &NamePanel, window: RangeInclusive<i32>, rule: CohortRule) -> Vec<(NameKey, i32)> {
    panel
        .keys()
        .filter_map(|k| panel.first_year(k).map(|y| (k, y)))
        .filter(|&(_, first)| match rule {
            CohortRule::FirstInsideWindow => first > *window.start() && first <= *window.end(),
            CohortRule::AllSeeded => first < *window.end(),
            CohortRule::FirstAfter(y) => first > y,
        })
        .map(|(k, y)| (k.clone(), y))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YearAggregate {
    pub year: i32,
    pub median: f64,
    /// `(q, value)` for each requested quantile.
    pub percentiles: Vec<(f64, f64)>,
    pub count: usize,
}

/// Median (mean of the central pair for even counts), requested quantiles by
/// linear interpolation, and the point count for one year.
pub fn yearly_aggregate(points: &[PeiPoint], year: i32, percentiles: &[f64]) -> Result<YearAggregate> {
    let values: Vec<f64> = points.iter().filter(|p| p.year == year).map(|p| p.pei).collect();
    aggregate_values(&values, year, percentiles)
}

pub fn aggregate_values(values: &[f64], year: i32, percentiles: &[f64]) -> Result<YearAggregate> {
    if values.is_empty() {
        return Err(Error::EmptyYear(year));
    }
    let sorted = sorted_copy(values);
    let percentiles = percentiles
        .iter()
        .map(|&q| {
            quantile_sorted(&sorted, q)
                .map(|v| (q, v))
                .ok_or_else(|| Error::InvalidParameter(format!("percentile {q} is outside [0, 1]")))
        })
        .collect::<Result<_>>()?;
    Ok(YearAggregate {
        year,
        median: median_sorted(&sorted).expect("non-empty"),
        percentiles,
        count: values.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PeiSeries {
    /// Sorted by year, then name, then sex.
    pub points: Vec<PeiPoint>,
    pub aggregates: BTreeMap<i32, YearAggregate>,
    /// Name-years skipped because a group total was zero.
    pub skipped: usize,
}

#[derive(Debug, Clone)]
pub struct SeriesOptions {
    pub window: RangeInclusive<i32>,
    pub rule: CohortRule,
    pub percentiles: Vec<f64>,
}

impl SeriesOptions {
    pub fn new(window: RangeInclusive<i32>) -> Self {
        SeriesOptions {
            window,
            rule: CohortRule::default(),
            percentiles: vec![0.25, 0.75],
        }
    }
}

/// PEI for every eligible name in every window year after its first
/// appearance in which it is listed somewhere, plus the yearly aggregates.
pub fn compute_series(panel: &NamePanel, graph: &AdjacencyGraph, opts: &SeriesOptions) -> Result<PeiSeries> {
    let eligible = eligible_names(panel, opts.window.clone(), opts.rule);
    let per_name: Vec<(Vec<PeiPoint>, usize)> = eligible
        .par_iter()
        .map(|(key, first)| {
            let mut pts = Vec::new();
            let mut skipped = 0;
            let Some(by_year) = panel.series(key) else {
                return (pts, 0);
            };
            let start = (*first + 1).max(*opts.window.start());
            for (&year, _) in by_year.range(start..=*opts.window.end()) {
                match compute_pei(key, year, panel, graph) {
                    Ok(p) => pts.push(p),
                    Err(Error::ZeroGroupTotal { .. }) => skipped += 1,
                    Err(Error::ZeroNameCount { .. }) => {}
                    Err(e) => unreachable!("unexpected PEI error for seeded name: {e}"),
                }
            }
            (pts, skipped)
        })
        .collect();

    let skipped = per_name.iter().map(|(_, s)| s).sum();
    let mut points: Vec<PeiPoint> = per_name.into_iter().flat_map(|(p, _)| p).collect();
    points.sort_by(|a, b| {
        (a.year, &a.name, a.sex).cmp(&(b.year, &b.name, b.sex))
    });

    let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for p in &points {
        by_year.entry(p.year).or_default().push(p.pei);
    }
    let aggregates = by_year
        .iter()
        .map(|(&y, v)| aggregate_values(v, y, &opts.percentiles).map(|a| (y, a)))
        .collect::<Result<_>>()?;
    Ok(PeiSeries {
        points,
        aggregates,
        skipped,
    })
}

/// Unit of observation for the breakpoint test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BreakpointMode {
    /// One observation per year: that year's median PEI.
    YearlyMedians,
    /// Every individual PEI point.
    PooledPoints,
}

impl fmt::Display for BreakpointMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BreakpointMode::YearlyMedians => "yearly-medians",
            BreakpointMode::PooledPoints => "pooled-points",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakpointResult {
    pub breakpoint: i32,
    pub mode: BreakpointMode,
    pub mean_pre: f64,
    pub mean_post: f64,
    /// `(mean_pre - mean_post) / se`; negative when the index rose.
    pub t: f64,
    pub dof: f64,
    pub p_value: f64,
    pub n_pre: usize,
    pub n_post: usize,
}

/// Welch test of values before `breakpoint` against values at or after it.
pub fn breakpoint_test_values(by_year: &[(i32, f64)], breakpoint: i32, mode: BreakpointMode) -> Result<BreakpointResult> {
    let (pre, post): (Vec<&(i32, f64)>, Vec<_>) = by_year.iter().partition(|(y, _)| *y < breakpoint);
    let pre: Vec<f64> = pre.into_iter().map(|p| p.1).collect();
    let post: Vec<f64> = post.into_iter().map(|p| p.1).collect();
    let w = welch_t_test(&pre, &post)?;
    Ok(BreakpointResult {
        breakpoint,
        mode,
        mean_pre: w.mean_a,
        mean_post: w.mean_b,
        t: w.t,
        dof: w.dof,
        p_value: w.p_value,
        n_pre: w.n_a,
        n_post: w.n_b,
    })
}

pub fn breakpoint_test(series: &PeiSeries, breakpoint: i32, mode: BreakpointMode) -> Result<BreakpointResult> {
    let obs: Vec<(i32, f64)> = match mode {
        BreakpointMode::YearlyMedians => series.aggregates.values().map(|a| (a.year, a.median)).collect(),
        BreakpointMode::PooledPoints => series.points.iter().map(|p| (p.year, p.pei)).collect(),
    };
    breakpoint_test_values(&obs, breakpoint, mode)
}

/// Share of a state-year's births carrying the name, for all 51 units.
pub fn name_share_by_state(key: &NameKey, year: i32, panel: &NamePanel) -> BTreeMap<State, f64> {
    State::all()
        .map(|s| {
            let total = panel.state_total(s, year);
            let count = panel.state_count(key, year, s);
            let share = if total == 0 { 0.0 } else { count as f64 / total as f64 };
            (s, share)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::babynames::{normalize_name, NameRecord, PanelOptions, Region};
    use proptest::prelude::*;

    fn rec(name: &str, sex: Sex, st: &str, year: i32, count: u64) -> NameRecord {
        NameRecord {
            name: normalize_name(name),
            sex,
            region: Region::State(st.parse().unwrap()),
            year,
            count,
        }
    }

    #[test]
    fn hand_computed_index() {
        // Expected = (1000 / 2000) * 40 = 20; PEI = 30 / 20 - 1.
        assert_eq!(pei_formula(30, 10, 1000, 1000), 0.5);
        assert_eq!(pei_formula(20, 20, 1000, 1000), 0.0);
        assert_eq!(pei_formula(40, 0, 1000, 0), 0.0);
        assert_eq!(pei_formula(0, 10, 500, 500), -1.0);
    }

    #[test]
    fn kaden_seeded_in_colorado() {
        let g = AdjacencyGraph::builtin(false);
        let records = vec![
            rec("Kaden", Sex::M, "CO", 1999, 40),
            rec("Kaden", Sex::M, "CO", 2000, 60),
            rec("Kaden", Sex::M, "TX", 2000, 20),
            rec("Other", Sex::M, "TX", 2000, 900),
            rec("Other", Sex::M, "KS", 2000, 500),
        ];
        let panel = NamePanel::build(&records, PanelOptions::new(1990..=2005)).unwrap();
        let key = NameKey::new("kaden", Sex::M);
        assert_eq!(group_a_states(&key, 1999, &panel, &g), StateSet::EMPTY);
        let co: State = "CO".parse().unwrap();
        let expected = g.expand([co].into_iter().collect());
        assert_eq!(group_a_states(&key, 2000, &panel, &g), expected);

        let p = compute_pei(&key, 2000, &panel, &g).unwrap();
        // Group A = CO + neighbours (KS in); TX is outside.
        assert_eq!((p.n_i_a, p.n_i_b), (60, 20));
        assert_eq!((p.tot_a, p.tot_b), (560, 920));
        assert_eq!(p.pei, 60.0 / (560.0 / 1480.0 * 80.0) - 1.0);
        assert_eq!(p.pei, p.recompute());

        let err = compute_pei(&key, 1999, &panel, &g).unwrap_err();
        assert!(matches!(err, Error::NotSeeded { .. }));
        let err = compute_pei(&key, 2003, &panel, &g).unwrap_err();
        assert!(matches!(err, Error::ZeroNameCount { .. }));
    }

    #[test]
    fn saturated_group_a_forces_zero() {
        let g = AdjacencyGraph::builtin(false);
        let mut records: Vec<NameRecord> = State::all().map(|s| rec("Zed", Sex::M, s.code(), 1990, 5)).collect();
        records.push(rec("Zed", Sex::M, "CA", 1991, 77));
        records.push(rec("Amy", Sex::F, "NY", 1991, 300));
        let panel = NamePanel::build(&records, PanelOptions::new(1990..=1991)).unwrap();
        let key = NameKey::new("zed", Sex::M);
        assert_eq!(group_a_states(&key, 1991, &panel, &g), StateSet::all());
        let p = compute_pei(&key, 1991, &panel, &g).unwrap();
        assert_eq!(p.tot_b, 0);
        assert_eq!(p.n_i_b, 0);
        assert_eq!(p.pei, 0.0);
    }

    #[test]
    fn aggregates() {
        let agg = aggregate_values(&[0.4], 2000, &[]).unwrap();
        assert_eq!(agg.median, 0.4);
        let agg = aggregate_values(&[0.3, 0.1, 0.2], 2000, &[0.25, 0.75]).unwrap();
        assert_eq!(agg.median, 0.2);
        assert_eq!(agg.percentiles, vec![(0.25, 0.15000000000000002), (0.75, 0.25)]);
        let agg = aggregate_values(&[0.1, 0.2, 0.3, 1000.0], 2000, &[]).unwrap();
        assert_eq!(agg.median, 0.25);
        assert_eq!(agg.count, 4);
        assert!(matches!(aggregate_values(&[], 1999, &[]), Err(Error::EmptyYear(1999))));
        assert!(aggregate_values(&[1.0], 1999, &[1.5]).is_err());
    }

    #[test]
    fn breakpoint_examples() {
        let obs = [(1990, 1.0), (1991, 2.0), (1992, 3.0), (1995, 4.0), (1996, 5.0), (1997, 6.0)];
        let r = breakpoint_test_values(&obs, 1995, BreakpointMode::YearlyMedians).unwrap();
        assert_eq!((r.mean_pre, r.mean_post), (2.0, 5.0));
        assert!((r.t + 3.674).abs() < 5e-4);
        assert!((r.dof - 4.0).abs() < 1e-12);

        let same = [(1990, 1.0), (1991, 3.0), (1995, 1.0), (1996, 3.0)];
        let r = breakpoint_test_values(&same, 1995, BreakpointMode::YearlyMedians).unwrap();
        assert_eq!(r.t, 0.0);

        let short = [(1990, 1.0), (1995, 2.0), (1996, 3.0)];
        assert!(breakpoint_test_values(&short, 1995, BreakpointMode::YearlyMedians).is_err());
    }

    #[test]
    fn shares() {
        let records = vec![
            rec("Ashley", Sex::F, "AL", 1970, 50),
            rec("Mary", Sex::F, "AL", 1970, 950),
            rec("Mary", Sex::F, "CO", 1970, 100),
        ];
        let panel = NamePanel::build(&records, PanelOptions::new(1970..=1970)).unwrap();
        let shares = name_share_by_state(&NameKey::new("ashley", Sex::F), 1970, &panel);
        assert_eq!(shares.len(), 51);
        assert_eq!(shares[&"AL".parse::<State>().unwrap()], 0.05);
        assert_eq!(shares[&"CO".parse::<State>().unwrap()], 0.0);
        assert_eq!(shares[&"WY".parse::<State>().unwrap()], 0.0);
    }

    #[test]
    fn cohort_rules() {
        let records = vec![
            rec("Old", Sex::F, "CO", 1970, 10),
            rec("Old", Sex::F, "CO", 1975, 10),
            rec("New", Sex::F, "CO", 1980, 10),
            rec("New", Sex::F, "UT", 1981, 10),
        ];
        let panel = NamePanel::build(&records, PanelOptions::new(1970..=2005)).unwrap();
        let names = |rule| {
            eligible_names(&panel, 1970..=2005, rule)
                .into_iter()
                .map(|(k, y)| (k.name, y))
                .collect::<Vec<_>>()
        };
        assert_eq!(names(CohortRule::FirstInsideWindow), vec![("new".to_string(), 1980)]);
        assert_eq!(names(CohortRule::AllSeeded).len(), 2);
        assert_eq!(names(CohortRule::FirstAfter(1980)), vec![]);
        assert_eq!(names(CohortRule::FirstAfter(1979)).len(), 1);
    }

    proptest! {
        #[test]
        fn pei_lower_bound(n_a in 0u64..10_000, n_b in 0u64..10_000, t_a in 1u64..1_000_000, t_b in 0u64..1_000_000) {
            prop_assume!(n_a + n_b > 0);
            prop_assert!(pei_formula(n_a, n_b, t_a, t_b) >= -1.0);
        }

        #[test]
        fn median_moves_at_most_one_order_statistic(
            mut values in prop::collection::vec(-1.0f64..5.0, 1..40),
            bump in 0.0f64..1e6,
        ) {
            let sorted = sorted_copy(&values);
            let before = median_sorted(&sorted).unwrap();
            let outlier = before + bump + 1e-9;
            values.push(outlier);
            let after = median_sorted(&sorted_copy(&values)).unwrap();
            prop_assert!(after >= before);
            // The new median is bounded by the next order statistic above the old one.
            let next = sorted.iter().copied().find(|&v| v > before).unwrap_or(outlier).min(outlier);
            prop_assert!(after <= next + 1e-12, "before {} after {} next {}", before, after, next);
        }
    }
}
