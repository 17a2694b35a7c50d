//! State bordering relation.
//!
//! The builtin table lists pairs of units sharing a land boundary segment.
//! Water-only boundaries (e.g. IL-MI across Lake Michigan) are not borders.
//! The two Four Corners point contacts are kept separately and only included
//! on request.

use std::path::Path;

use crate::error::{Error, Result};
use crate::states::{State, StateSet, STATE_COUNT};

const BORDERS: &[(&str, &str)] = &[
    ("AL", "FL"), ("AL", "GA"), ("AL", "MS"), ("AL", "TN"),
    ("AR", "LA"), ("AR", "MS"), ("AR", "MO"), ("AR", "OK"), ("AR", "TN"), ("AR", "TX"),
    ("AZ", "CA"), ("AZ", "NV"), ("AZ", "NM"), ("AZ", "UT"),
    ("CA", "NV"), ("CA", "OR"),
    ("CO", "KS"), ("CO", "NE"), ("CO", "NM"), ("CO", "OK"), ("CO", "UT"), ("CO", "WY"),
    ("CT", "MA"), ("CT", "NY"), ("CT", "RI"),
    ("DC", "MD"), ("DC", "VA"),
    ("DE", "MD"), ("DE", "NJ"), ("DE", "PA"),
    ("FL", "GA"),
    ("GA", "NC"), ("GA", "SC"), ("GA", "TN"),
    ("IA", "IL"), ("IA", "MN"), ("IA", "MO"), ("IA", "NE"), ("IA", "SD"), ("IA", "WI"),
    ("ID", "MT"), ("ID", "NV"), ("ID", "OR"), ("ID", "UT"), ("ID", "WA"), ("ID", "WY"),
    ("IL", "IN"), ("IL", "KY"), ("IL", "MO"), ("IL", "WI"),
    ("IN", "KY"), ("IN", "MI"), ("IN", "OH"),
    ("KS", "MO"), ("KS", "NE"), ("KS", "OK"),
    ("KY", "MO"), ("KY", "OH"), ("KY", "TN"), ("KY", "VA"), ("KY", "WV"),
    ("LA", "MS"), ("LA", "TX"),
    ("MA", "NH"), ("MA", "NY"), ("MA", "RI"), ("MA", "VT"),
    ("MD", "PA"), ("MD", "VA"), ("MD", "WV"),
    ("ME", "NH"),
    ("MI", "OH"), ("MI", "WI"),
    ("MN", "ND"), ("MN", "SD"), ("MN", "WI"),
    ("MO", "NE"), ("MO", "OK"), ("MO", "TN"),
    ("MS", "TN"),
    ("MT", "ND"), ("MT", "SD"), ("MT", "WY"),
    ("NC", "SC"), ("NC", "TN"), ("NC", "VA"),
    ("ND", "SD"),
    ("NE", "SD"), ("NE", "WY"),
    ("NH", "VT"),
    ("NJ", "NY"), ("NJ", "PA"),
    ("NM", "OK"), ("NM", "TX"),
    ("NV", "OR"), ("NV", "UT"),
    ("NY", "PA"), ("NY", "VT"),
    ("OH", "PA"), ("OH", "WV"),
    ("OK", "TX"),
    ("OR", "WA"),
    ("PA", "WV"),
    ("SD", "WY"),
    ("TN", "VA"),
    ("UT", "WY"),
    ("VA", "WV"),
];

/// Pairs meeting only at the Four Corners point.
pub const CORNER_PAIRS: &[(&str, &str)] = &[("AZ", "CO"), ("NM", "UT")];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    neighbors: [StateSet; STATE_COUNT],
    corner_pairs_included: bool,
}

fn is_corner_pair(a: State, b: State) -> bool {
    CORNER_PAIRS.iter().any(|&(x, y)| {
        let (x, y): (State, State) = (x.parse().unwrap(), y.parse().unwrap());
        (a, b) == (x, y) || (a, b) == (y, x)
    })
}

impl AdjacencyGraph {
    fn from_pairs(
        pairs: impl IntoIterator<Item = (State, State)>,
        include_corner_pairs: bool,
    ) -> Result<Self> {
        let mut neighbors = [StateSet::EMPTY; STATE_COUNT];
        for (a, b) in pairs {
            if a == b {
                return Err(Error::InvalidParameter(format!("{a} cannot border itself")));
            }
            if !include_corner_pairs && is_corner_pair(a, b) {
                continue;
            }
            neighbors[a.index()].insert(b);
            neighbors[b.index()].insert(a);
        }
        Ok(AdjacencyGraph {
            neighbors,
            corner_pairs_included: include_corner_pairs,
        })
    }

    /// The bundled border table.
    pub fn builtin(include_corner_pairs: bool) -> Self {
        let corners = CORNER_PAIRS.iter().filter(|_| include_corner_pairs);
        let pairs = BORDERS
            .iter()
            .chain(corners)
            .map(|&(a, b)| (a.parse().unwrap(), b.parse().unwrap()));
        Self::from_pairs(pairs, include_corner_pairs).expect("builtin table is valid")
    }

    /// Loads an override file of undirected `ST1,ST2` pairs (header optional).
    pub fn load(path: impl AsRef<Path>, include_corner_pairs: bool) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string(), include_corner_pairs)
    }

    pub fn parse(text: &str, source: &str, include_corner_pairs: bool) -> Result<Self> {
        let err = |line: usize, reason: String| Error::AdjacencyOverride {
            file: source.to_string(),
            line,
            reason,
        };
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(err(idx + 1, format!("expected 2 fields, got {}", fields.len())));
            }
            if idx == 0 && fields[0].len() > 2 && fields[0].parse::<State>().is_err() {
                continue; // header row
            }
            let a: State = fields[0]
                .parse()
                .map_err(|_| err(idx + 1, format!("unknown state code '{}'", fields[0])))?;
            let b: State = fields[1]
                .parse()
                .map_err(|_| err(idx + 1, format!("unknown state code '{}'", fields[1])))?;
            if a == b {
                return Err(err(idx + 1, format!("{a} cannot border itself")));
            }
            pairs.push((a, b));
        }
        Self::from_pairs(pairs, include_corner_pairs)
    }

    pub fn neighbors(&self, s: State) -> StateSet {
        self.neighbors[s.index()]
    }

    pub fn corner_pairs_included(&self) -> bool {
        self.corner_pairs_included
    }

    /// `states` together with every state bordering one of them.
    pub fn expand(&self, states: StateSet) -> StateSet {
        states
            .iter()
            .fold(states, |acc, s| acc.union(self.neighbors[s.index()]))
    }

    pub fn expand_codes<S: AsRef<str>>(&self, codes: &[S]) -> Result<StateSet> {
        let set = codes
            .iter()
            .map(|c| c.as_ref().parse::<State>())
            .collect::<Result<StateSet>>()?;
        Ok(self.expand(set))
    }

    pub fn is_symmetric(&self) -> bool {
        State::all().all(|a| self.neighbors(a).iter().all(|b| self.neighbors(b).contains(a)))
    }

    pub fn is_irreflexive(&self) -> bool {
        State::all().all(|a| !self.neighbors(a).contains(a))
    }
}
