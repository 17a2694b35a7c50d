use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::prelude::*;
use proxim_core::babynames::{parse_state, NamePanel, PanelOptions, ParseOptions};
use proxim_core::geodesy::EARTH_RADIUS_KM;
use proxim_core::pei::{compute_series, SeriesOptions};
use proxim_core::powerlaw::{fit_mle, DistanceSample};
use proxim_core::{haversine_km, AdjacencyGraph, GeoPoint, State, StateSet};

fn point() -> impl Strategy<Value = GeoPoint> {
    (-90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(lat, lon)| GeoPoint::new(lat, lon).unwrap())
}

proptest! {
    #[test]
    fn haversine_is_symmetric(a in point(), b in point()) {
        prop_assert_eq!(haversine_km(a, b), haversine_km(b, a));
    }

    #[test]
    fn haversine_is_bounded_and_zero_on_self(a in point(), b in point()) {
        prop_assert!(haversine_km(a, b) <= std::f64::consts::PI * EARTH_RADIUS_KM);
        prop_assert_eq!(haversine_km(a, a), 0.0);
    }

    #[test]
    fn haversine_triangle_inequality(a in point(), b in point(), c in point()) {
        prop_assert!(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-9);
    }

    #[test]
    fn mle_is_scale_invariant(
        values in prop::collection::vec(1.0f64..1e4, 3..200),
        k in -20i32..20,
    ) {
        // Powers of two scale without rounding, so the estimate is unchanged bit for bit.
        let c = 2f64.powi(k);
        let a = fit_mle(&DistanceSample::new(values.clone(), "a").unwrap(), Some(1.0));
        let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
        let b = fit_mle(&DistanceSample::new(scaled, "b").unwrap(), Some(c));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.exponent, b.exponent);
                prop_assert_eq!(a.stderr, b.stderr);
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }
}

fn toy_panel() -> NamePanel {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/toy_states");
    let parsed = parse_state(dir, ParseOptions::default()).unwrap();
    NamePanel::build(&parsed.records, PanelOptions::new(2000..=2003)).unwrap()
}

#[test]
fn pei_counts_are_consistent_with_panel() {
    let panel = toy_panel();
    let graph = AdjacencyGraph::builtin(false);
    let series = compute_series(&panel, &graph, &SeriesOptions::new(2000..=2003)).unwrap();
    let mut per_year: BTreeMap<i32, u64> = BTreeMap::new();
    for p in &series.points {
        let key = proxim_core::NameKey::new(&p.name, p.sex);
        assert_eq!(p.n_i_a + p.n_i_b, panel.summed_state_count(&key, p.year));
        assert_eq!(p.tot_a + p.tot_b, panel.total_over(StateSet::all(), p.year));
        assert!(p.pei >= -1.0);
        *per_year.entry(p.year).or_default() += p.n_i_a + p.n_i_b;
    }
    for (year, names) in per_year {
        let all: u64 = State::all().map(|s| panel.state_total(s, year)).sum();
        assert!(names <= all);
        assert_eq!(series.aggregates[&year].count, series.points.iter().filter(|p| p.year == year).count());
    }
}
