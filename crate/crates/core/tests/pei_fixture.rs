use std::path::PathBuf;

use proxim_core::babynames::{parse_state, NamePanel, PanelOptions, ParseOptions};
use proxim_core::pei::{compute_pei, compute_series, eligible_names, CohortRule, SeriesOptions};
use proxim_core::{AdjacencyGraph, Error, NameKey, Sex};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn toy_panel() -> NamePanel {
    let parsed = parse_state(fixture("toy_states"), ParseOptions::default()).unwrap();
    NamePanel::build(&parsed.records, PanelOptions::new(2000..=2003)).unwrap()
}

struct Expected {
    key: NameKey,
    year: i32,
    counts: [u64; 4],
    pei: f64,
}

fn expected() -> Vec<Expected> {
    let text = std::fs::read_to_string(fixture("toy_expected.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let n = |i: usize| f[i].parse::<u64>().unwrap();
            Expected {
                key: NameKey::new(f[0], f[1].parse::<Sex>().unwrap()),
                year: f[2].parse().unwrap(),
                counts: [n(3), n(4), n(5), n(6)],
                pei: n(7) as f64 / n(8) as f64,
            }
        })
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * b.abs()
}

#[test]
fn toy_totals() {
    let panel = toy_panel();
    let st = |c: &str| c.parse().unwrap();
    assert_eq!(panel.state_total(st("CO"), 2002), 258);
    assert_eq!(panel.state_total(st("KS"), 2002), 186);
    assert_eq!(panel.state_total(st("TX"), 2002), 671);
    assert_eq!(panel.state_total(st("TX"), 2003), 709);
    assert_eq!(panel.state_total(st("NE"), 2003), 0);
}

#[test]
fn every_point_matches_hand_computation() {
    let panel = toy_panel();
    let graph = AdjacencyGraph::builtin(false);
    let series = compute_series(&panel, &graph, &SeriesOptions::new(2000..=2003)).unwrap();
    let want = expected();
    assert_eq!(series.points.len(), want.len());
    for e in &want {
        let p = series
            .points
            .iter()
            .find(|p| p.name == e.key.name && p.sex == e.key.sex && p.year == e.year)
            .unwrap_or_else(|| panic!("missing {} {}", e.key, e.year));
        assert_eq!([p.n_i_a, p.n_i_b, p.tot_a, p.tot_b], e.counts, "{} {}", e.key, e.year);
        assert!(close(p.pei, e.pei), "{} {}: {} vs {}", e.key, e.year, p.pei, e.pei);
        assert_eq!(p.pei, p.recompute());
    }
}

#[test]
fn toy_aggregates() {
    let panel = toy_panel();
    let graph = AdjacencyGraph::builtin(false);
    let series = compute_series(&panel, &graph, &SeriesOptions::new(2000..=2003)).unwrap();
    let y2002 = &series.aggregates[&2002];
    assert_eq!(y2002.count, 2);
    assert!(close(y2002.median, (21265.0 / 17760.0 + 6196.0 / 16104.0) / 2.0));
    let y2003 = &series.aggregates[&2003];
    assert_eq!(y2003.count, 3);
    assert_eq!(y2003.median, 0.0);
}

#[test]
fn cohort_rules_on_toy() {
    let panel = toy_panel();
    let names = |rule| -> Vec<String> {
        eligible_names(&panel, 2000..=2003, rule)
            .into_iter()
            .map(|(k, _)| k.name)
            .collect()
    };
    assert_eq!(names(CohortRule::FirstInsideWindow), ["ashley", "kaden", "zoe"]);
    assert_eq!(names(CohortRule::AllSeeded).len(), 5);
    assert_eq!(names(CohortRule::FirstAfter(2001)), ["zoe"]);
}

#[test]
fn degenerate_cases() {
    let panel = toy_panel();
    let graph = AdjacencyGraph::builtin(false);
    let kaden = NameKey::new("Kaden", Sex::M);
    // First appearance: no Group A yet.
    assert!(matches!(
        compute_pei(&kaden, 2001, &panel, &graph),
        Err(Error::NotSeeded { .. })
    ));
    // Group A spans every state with births.
    let p = compute_pei(&kaden, 2003, &panel, &graph).unwrap();
    assert_eq!(p.pei, 0.0);
}

#[test]
fn corner_flag_changes_group_a_only_through_adjacency() {
    let panel = toy_panel();
    let plain = AdjacencyGraph::builtin(false);
    let corner = AdjacencyGraph::builtin(true);
    let kaden = NameKey::new("Kaden", Sex::M);
    let a = compute_pei(&kaden, 2002, &panel, &plain).unwrap();
    let b = compute_pei(&kaden, 2002, &panel, &corner).unwrap();
    // CO gains AZ, which has no births in the toy data.
    assert_eq!(a.pei, b.pei);
    assert_eq!(b.group_a.len(), a.group_a.len() + 1);
}
