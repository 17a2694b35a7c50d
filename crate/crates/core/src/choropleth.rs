//! Static tile-grid maps of a name's share of births per state.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::babynames::NameKey;
use crate::states::State;

/// `(row, column)` of each unit on the tile grid.
const TILES: [(&str, u8, u8); 51] = [
    ("AK", 0, 0), ("ME", 0, 11),
    ("VT", 1, 10), ("NH", 1, 11),
    ("WA", 2, 1), ("ID", 2, 2), ("MT", 2, 3), ("ND", 2, 4), ("MN", 2, 5), ("IL", 2, 6),
    ("WI", 2, 7), ("MI", 2, 8), ("NY", 2, 9), ("RI", 2, 10), ("MA", 2, 11),
    ("OR", 3, 1), ("NV", 3, 2), ("WY", 3, 3), ("SD", 3, 4), ("IA", 3, 5), ("IN", 3, 6),
    ("OH", 3, 7), ("PA", 3, 8), ("NJ", 3, 9), ("CT", 3, 10),
    ("CA", 4, 1), ("UT", 4, 2), ("CO", 4, 3), ("NE", 4, 4), ("MO", 4, 5), ("KY", 4, 6),
    ("WV", 4, 7), ("VA", 4, 8), ("MD", 4, 9), ("DE", 4, 10),
    ("AZ", 5, 2), ("NM", 5, 3), ("KS", 5, 4), ("AR", 5, 5), ("TN", 5, 6), ("NC", 5, 7),
    ("SC", 5, 8), ("DC", 5, 9),
    ("OK", 6, 4), ("LA", 6, 5), ("MS", 6, 6), ("AL", 6, 7), ("GA", 6, 8),
    ("HI", 7, 0), ("TX", 7, 4), ("FL", 7, 9),
];

/// Lower bounds of the shade classes; a share of exactly 0 gets its own class.
pub const SHADE_THRESHOLDS: [f64; 5] = [0.0, 0.001, 0.0025, 0.005, 0.01];
const ZERO_FILL: &str = "#f7f7f7";
const RAMP: [&str; 5] = ["#fee5d9", "#fcae91", "#fb6a4a", "#de2d26", "#a50f15"];

const CELL: u32 = 48;
const GAP: u32 = 4;
const MARGIN: u32 = 20;
const TITLE_H: u32 = 40;

pub fn tile_position(state: State) -> (u8, u8) {
    let (_, r, c) = TILES
        .iter()
        .find(|(code, _, _)| *code == state.code())
        .expect("every state has a tile");
    (*r, *c)
}

pub fn shade(share: f64) -> &'static str {
    if share <= 0.0 {
        return ZERO_FILL;
    }
    let class = SHADE_THRESHOLDS.iter().rposition(|&t| share >= t).unwrap_or(0);
    RAMP[class]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShareMap {
    pub key: NameKey,
    pub year: i32,
    pub shares: BTreeMap<State, f64>,
}

impl ShareMap {
    pub fn new(key: NameKey, year: i32, shares: BTreeMap<State, f64>) -> Self {
        ShareMap { key, year, shares }
    }

    /// True when no state records the name in this year.
    pub fn is_empty(&self) -> bool {
        self.shares.values().all(|&s| s == 0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,share\n");
        for s in State::all() {
            let share = self.shares.get(&s).copied().unwrap_or(0.0);
            let _ = writeln!(out, "{},{}", s.code(), share);
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let width = 2 * MARGIN + 12 * (CELL + GAP);
        let legend_h = 2 * CELL / 3;
        let height = 2 * MARGIN + TITLE_H + 8 * (CELL + GAP) + legend_h + GAP;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"##
        );
        let _ = writeln!(
            svg,
            "<!-- share of state births named {} ({}) in {}; shade classes: 0 {}, \
             (0,0.001) {}, [0.001,0.0025) {}, [0.0025,0.005) {}, [0.005,0.01) {}, >=0.01 {} -->",
            escape(&self.key.name),
            self.key.sex,
            self.year,
            ZERO_FILL,
            RAMP[0],
            RAMP[1],
            RAMP[2],
            RAMP[3],
            RAMP[4],
        );
        let _ = writeln!(svg, r##"<rect width="{width}" height="{height}" fill="white"/>"##);
        let _ = writeln!(
            svg,
            r##"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="18">{} ({}), {}</text>"##,
            MARGIN + 18,
            escape(&self.key.name),
            self.key.sex,
            self.year
        );
        if self.is_empty() {
            let _ = writeln!(
                svg,
                r##"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="12" fill="#b00">warning: no state records this name in {}</text>"##,
                MARGIN + 34,
                self.year
            );
        }
        let top = MARGIN + TITLE_H;
        for s in State::all() {
            let (row, col) = tile_position(s);
            let x = MARGIN + col as u32 * (CELL + GAP);
            let y = top + row as u32 * (CELL + GAP);
            let share = self.shares.get(&s).copied().unwrap_or(0.0);
            let fill = shade(share);
            let text_fill = if fill == RAMP[3] || fill == RAMP[4] { "white" } else { "black" };
            let _ = writeln!(
                svg,
                r##"<g><title>{} {:.4}%</title><rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#999"/><text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" fill="{text_fill}">{}</text></g>"##,
                s.code(),
                100.0 * share,
                x + CELL / 2,
                y + CELL / 2 + 5,
                s.code()
            );
        }
        let ly = top + 8 * (CELL + GAP) + GAP;
        let labels = ["0", "<0.1%", "0.1%", "0.25%", "0.5%", "1%+"];
        let fills = std::iter::once(ZERO_FILL).chain(RAMP);
        for (k, (label, fill)) in labels.iter().zip(fills).enumerate() {
            let x = MARGIN + k as u32 * 2 * (CELL + GAP);
            let _ = writeln!(
                svg,
                r##"<rect x="{x}" y="{ly}" width="{legend_h}" height="{legend_h}" fill="{fill}" stroke="#999"/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{label}</text>"##,
                x + legend_h + 4,
                ly + legend_h - 8
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
