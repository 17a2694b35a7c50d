//! Ingestion of the SSA national (`yobYYYY.txt`: `Name,Sex,Count`) and
//! per-state (`ST.TXT`: `ST,Sex,Year,Name,Count`) baby-name files, and the
//! indexed panel built from them.
//!
//! Names are compared case-insensitively and stored lowercased. A name's two
//! sexes are separate series.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{State, StateSet, STATE_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sex {
    F,
    M,
}

impl Sex {
    pub fn as_char(self) -> char {
        match self {
            Sex::F => 'F',
            Sex::M => 'M',
        }
    }
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl std::str::FromStr for Sex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "F" | "f" => Ok(Sex::F),
            "M" | "m" => Ok(Sex::M),
            other => Err(Error::InvalidParameter(format!("unknown sex '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Region {
    State(State),
    National,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NameRecord {
    pub name: String,
    pub sex: Sex,
    pub region: Region,
    pub year: i32,
    pub count: u64,
}

/// Case-normalized `(name, sex)` series key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NameKey {
    pub name: String,
    pub sex: Sex,
}

impl NameKey {
    pub fn new(name: &str, sex: Sex) -> Self {
        NameKey {
            name: normalize_name(name),
            sex,
        }
    }
}

impl fmt::Display for NameKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.sex)
    }
}

pub fn normalize_name(name: &str) -> String {
    name.trim().to_lowercase()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Skip and report malformed lines instead of failing on the first one.
    pub lenient: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub line: usize,
    pub text: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileReport {
    pub file: String,
    pub records: usize,
    pub malformed: Vec<MalformedLine>,
}

#[derive(Debug, Clone, Default)]
pub struct Parsed {
    pub records: Vec<NameRecord>,
    pub reports: Vec<FileReport>,
}

impl Parsed {
    pub fn malformed_count(&self) -> usize {
        self.reports.iter().map(|r| r.malformed.len()).sum()
    }
}

fn parse_count(field: &str) -> std::result::Result<u64, String> {
    match field.trim().parse::<u64>() {
        Ok(0) => Err("count must be a positive integer (got 0)".into()),
        Ok(c) => Ok(c),
        Err(_) => Err(format!("count '{}' is not a positive integer", field.trim())),
    }
}

fn parse_name(field: &str) -> std::result::Result<String, String> {
    let n = field.trim();
    if n.is_empty() || !n.chars().all(char::is_alphabetic) {
        return Err(format!("invalid name '{n}'"));
    }
    Ok(normalize_name(n))
}

fn parse_sex(field: &str) -> std::result::Result<Sex, String> {
    field.parse().map_err(|_| format!("invalid sex '{}'", field.trim()))
}

/// Extracts the first run of exactly four digits from a file stem.
fn year_from_filename(path: &Path) -> Option<i32> {
    let stem = path.file_stem()?.to_str()?;
    let bytes = stem.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i - start == 4 {
                return stem[start..i].parse().ok();
            }
        } else {
            i += 1;
        }
    }
    None
}

fn txt_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_txt = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("txt"));
        if path.is_file() && is_txt {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Parses one national file body.
pub fn parse_national_text(text: &str, year: i32, file: &str, opts: ParseOptions) -> Result<(Vec<NameRecord>, FileReport)> {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    let mut seen: HashSet<(String, Sex)> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = (|| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(format!("expected 3 fields, got {}", fields.len()));
            }
            Ok((parse_name(fields[0])?, parse_sex(fields[1])?, parse_count(fields[2])?))
        })();
        match parsed {
            Ok((name, sex, count)) => {
                if !seen.insert((name.clone(), sex)) {
                    return Err(Error::DuplicateKey {
                        file: file.to_string(),
                        line: idx + 1,
                        key: format!("{name},{sex}"),
                    });
                }
                records.push(NameRecord {
                    name,
                    sex,
                    region: Region::National,
                    year,
                    count,
                });
            }
            Err(reason) if opts.lenient => malformed.push(MalformedLine {
                line: idx + 1,
                text: line.to_string(),
                reason,
            }),
            Err(reason) => {
                return Err(Error::MalformedLine {
                    file: file.to_string(),
                    line: idx + 1,
                    reason,
                })
            }
        }
    }
    let report = FileReport {
        file: file.to_string(),
        records: records.len(),
        malformed,
    };
    Ok((records, report))
}

/// Parses every `*.txt` file in a directory of national files; the year is
/// taken from the file name (`yob1880.txt` → 1880).
pub fn parse_national(dir: impl AsRef<Path>, opts: ParseOptions) -> Result<Parsed> {
    let mut out = Parsed::default();
    for path in txt_files(dir.as_ref())? {
        let file = path.display().to_string();
        let year = year_from_filename(&path).ok_or_else(|| Error::FilenameYear { file: file.clone() })?;
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let (records, report) = parse_national_text(&text, year, &file, opts)?;
        out.records.extend(records);
        out.reports.push(report);
    }
    Ok(out)
}

/// Parses one per-state file body.
pub fn parse_state_text(text: &str, file: &str, opts: ParseOptions) -> Result<(Vec<NameRecord>, FileReport)> {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    let mut seen: HashSet<(State, Sex, i32, String)> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        let bad = |reason: String| -> Result<()> {
            if opts.lenient {
                Ok(())
            } else {
                Err(Error::MalformedLine {
                    file: file.to_string(),
                    line: lineno,
                    reason,
                })
            }
        };
        if fields.len() != 5 {
            let reason = format!("expected 5 fields, got {}", fields.len());
            bad(reason.clone())?;
            malformed.push(MalformedLine { line: lineno, text: line.to_string(), reason });
            continue;
        }
        let state = match fields[0].trim().parse::<State>() {
            Ok(s) if fields[0].trim().len() == 2 => s,
            _ if opts.lenient => {
                malformed.push(MalformedLine {
                    line: lineno,
                    text: line.to_string(),
                    reason: format!("unknown state code '{}'", fields[0].trim()),
                });
                continue;
            }
            _ => {
                return Err(Error::UnknownState {
                    file: file.to_string(),
                    line: lineno,
                    code: fields[0].trim().to_string(),
                })
            }
        };
        let year = match fields[2].trim().parse::<i32>() {
            Ok(y) if fields[2].trim().len() == 4 => y,
            _ if opts.lenient => {
                malformed.push(MalformedLine {
                    line: lineno,
                    text: line.to_string(),
                    reason: format!("malformed year '{}'", fields[2].trim()),
                });
                continue;
            }
            _ => {
                return Err(Error::MalformedYear {
                    file: file.to_string(),
                    line: lineno,
                    value: fields[2].trim().to_string(),
                })
            }
        };
        let rest = (|| Ok::<_, String>((parse_sex(fields[1])?, parse_name(fields[3])?, parse_count(fields[4])?)))();
        let (sex, name, count) = match rest {
            Ok(v) => v,
            Err(reason) => {
                bad(reason.clone())?;
                malformed.push(MalformedLine { line: lineno, text: line.to_string(), reason });
                continue;
            }
        };
        if !seen.insert((state, sex, year, name.clone())) {
            return Err(Error::DuplicateKey {
                file: file.to_string(),
                line: lineno,
                key: format!("{state},{sex},{year},{name}"),
            });
        }
        records.push(NameRecord {
            name,
            sex,
            region: Region::State(state),
            year,
            count,
        });
    }
    let report = FileReport {
        file: file.to_string(),
        records: records.len(),
        malformed,
    };
    Ok((records, report))
}

/// Parses every `*.txt` file in a directory of per-state files.
pub fn parse_state(dir: impl AsRef<Path>, opts: ParseOptions) -> Result<Parsed> {
    let mut out = Parsed::default();
    for path in txt_files(dir.as_ref())? {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let (records, report) = parse_state_text(&text, &file, opts)?;
        out.records.extend(records);
        out.reports.push(report);
    }
    Ok(out)
}

/// Externally supplied births per state-year, overriding the listed-name proxy.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BirthTotals {
    pub source: String,
    pub births: BTreeMap<(State, i32), u64>,
}

impl BirthTotals {
    /// Reads a `state,year,births` CSV with a header row.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut births = BTreeMap::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::MalformedLine {
                file: source.to_string(),
                line: e.position().map_or(0, |p| p.line() as usize),
                reason: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let malformed = |reason: String| Error::MalformedLine {
                file: source.to_string(),
                line,
                reason,
            };
            if rec.len() != 3 {
                return Err(malformed(format!("expected 3 fields, got {}", rec.len())));
            }
            let state: State = rec[0].parse().map_err(|_| Error::UnknownState {
                file: source.to_string(),
                line,
                code: rec[0].to_string(),
            })?;
            let year: i32 = rec[1].parse().map_err(|_| Error::MalformedYear {
                file: source.to_string(),
                line,
                value: rec[1].to_string(),
            })?;
            let n = parse_count(&rec[2]).map_err(malformed)?;
            if births.insert((state, year), n).is_some() {
                return Err(Error::DuplicateKey {
                    file: source.to_string(),
                    line,
                    key: format!("{state},{year}"),
                });
            }
        }
        if births.is_empty() {
            return Err(Error::ZeroValidRows {
                source_name: source.to_string(),
                malformed: 0,
            });
        }
        Ok(BirthTotals {
            source: source.to_string(),
            births,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalsPolicy {
    /// Sum of the listed (top-k) counts per state-year, both sexes.
    ListedNames,
    External { source: String },
}

impl fmt::Display for TotalsPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalsPolicy::ListedNames => f.write_str("listed-names proxy (sum of listed state counts per state-year)"),
            TotalsPolicy::External { source } => write!(f, "external births table ({source})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PanelOptions {
    pub years: RangeInclusive<i32>,
    /// Keep only the `k` most frequent names per state, year and sex (ties
    /// broken alphabetically). `None` keeps every listed name.
    pub top_k: Option<usize>,
    pub totals_override: Option<BirthTotals>,
}

impl PanelOptions {
    pub fn new(years: RangeInclusive<i32>) -> Self {
        PanelOptions {
            years,
            top_k: Some(100),
            totals_override: None,
        }
    }
}

/// Per-state counts for one name in one year.
pub type StateCounts = BTreeMap<State, u64>;

/// Immutable index over state and national records.
#[derive(Debug, Clone)]
pub struct NamePanel {
    years: RangeInclusive<i32>,
    top_k: Option<usize>,
    series: BTreeMap<NameKey, BTreeMap<i32, StateCounts>>,
    national: BTreeMap<NameKey, BTreeMap<i32, u64>>,
    listed_totals: BTreeMap<i32, [u64; STATE_COUNT]>,
    totals: BTreeMap<i32, [u64; STATE_COUNT]>,
    first_year: BTreeMap<NameKey, i32>,
    policy: TotalsPolicy,
}

/// Outcome of comparing summed state counts with national counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NationalAudit {
    pub checked: usize,
    pub violations: usize,
}

impl NationalAudit {
    pub fn consistent_fraction(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            1.0 - self.violations as f64 / self.checked as f64
        }
    }
}

impl NamePanel {
    pub fn build(records: &[NameRecord], opts: PanelOptions) -> Result<Self> {
        let years = opts.years.clone();
        let in_range: Vec<&NameRecord> = records.iter().filter(|r| years.contains(&r.year)).collect();
        if in_range.is_empty() {
            return Err(Error::EmptyPanel {
                start: *years.start(),
                end: *years.end(),
            });
        }

        // Group state records by (state, year, sex) for the top-k cut.
        #[allow(clippy::type_complexity)]
        let mut groups: BTreeMap<(State, i32, Sex), Vec<(&str, u64)>> = BTreeMap::new();
        let mut national: BTreeMap<NameKey, BTreeMap<i32, u64>> = BTreeMap::new();
        for r in &in_range {
            match r.region {
                Region::State(s) => groups
                    .entry((s, r.year, r.sex))
                    .or_default()
                    .push((r.name.as_str(), r.count)),
                Region::National => {
                    national
                        .entry(NameKey::new(&r.name, r.sex))
                        .or_default()
                        .insert(r.year, r.count);
                }
            }
        }

        let mut series: BTreeMap<NameKey, BTreeMap<i32, StateCounts>> = BTreeMap::new();
        let mut listed_totals: BTreeMap<i32, [u64; STATE_COUNT]> = BTreeMap::new();
        for ((state, year, sex), mut names) in groups {
            names.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            if let Some(k) = opts.top_k {
                names.truncate(k);
            }
            for (name, count) in names {
                listed_totals.entry(year).or_insert([0; STATE_COUNT])[state.index()] += count;
                series
                    .entry(NameKey::new(name, sex))
                    .or_default()
                    .entry(year)
                    .or_default()
                    .insert(state, count);
            }
        }

        let (totals, policy) = match &opts.totals_override {
            None => (listed_totals.clone(), TotalsPolicy::ListedNames),
            Some(ext) => {
                let mut totals = BTreeMap::new();
                for (&year, listed) in &listed_totals {
                    let mut row = [0u64; STATE_COUNT];
                    for s in State::all().filter(|s| listed[s.index()] > 0) {
                        row[s.index()] = *ext.births.get(&(s, year)).ok_or_else(|| {
                            Error::InsufficientData(format!(
                                "births table {} has no entry for {s} {year}",
                                ext.source
                            ))
                        })?;
                    }
                    totals.insert(year, row);
                }
                (totals, TotalsPolicy::External { source: ext.source.clone() })
            }
        };

        let first_year = series
            .iter()
            .filter_map(|(k, by_year)| by_year.keys().next().map(|&y| (k.clone(), y)))
            .collect();

        Ok(NamePanel {
            years,
            top_k: opts.top_k,
            series,
            national,
            listed_totals,
            totals,
            first_year,
            policy,
        })
    }

    pub fn years(&self) -> RangeInclusive<i32> {
        self.years.clone()
    }

    pub fn top_k(&self) -> Option<usize> {
        self.top_k
    }

    pub fn totals_policy(&self) -> &TotalsPolicy {
        &self.policy
    }

    /// Every `(name, sex)` with at least one state appearance.
    pub fn keys(&self) -> impl Iterator<Item = &NameKey> {
        self.series.keys()
    }

    pub fn series(&self, key: &NameKey) -> Option<&BTreeMap<i32, StateCounts>> {
        self.series.get(key)
    }

    pub fn state_counts(&self, key: &NameKey, year: i32) -> Option<&StateCounts> {
        self.series.get(key)?.get(&year)
    }

    pub fn state_count(&self, key: &NameKey, year: i32, state: State) -> u64 {
        self.state_counts(key, year)
            .and_then(|c| c.get(&state).copied())
            .unwrap_or(0)
    }

    /// Σ over states of the listed counts for this name and year.
    pub fn summed_state_count(&self, key: &NameKey, year: i32) -> u64 {
        self.state_counts(key, year).map_or(0, |c| c.values().sum())
    }

    pub fn national_count(&self, key: &NameKey, year: i32) -> Option<u64> {
        self.national.get(key)?.get(&year).copied()
    }

    /// Total births in a state-year under the panel's totals policy.
    pub fn state_total(&self, state: State, year: i32) -> u64 {
        self.totals.get(&year).map_or(0, |row| row[state.index()])
    }

    /// Sum of the listed counts in a state-year regardless of policy.
    pub fn listed_total(&self, state: State, year: i32) -> u64 {
        self.listed_totals.get(&year).map_or(0, |row| row[state.index()])
    }

    pub fn total_over(&self, states: StateSet, year: i32) -> u64 {
        states.iter().map(|s| self.state_total(s, year)).sum()
    }

    pub fn first_year(&self, key: &NameKey) -> Option<i32> {
        self.first_year.get(key).copied()
    }

    /// States where the name was listed in any year strictly before `year`.
    pub fn seeded_before(&self, key: &NameKey, year: i32) -> StateSet {
        self.series.get(key).map_or(StateSet::EMPTY, |by_year| {
            by_year
                .range(..year)
                .flat_map(|(_, counts)| counts.keys().copied())
                .collect()
        })
    }

    /// Compares Σ state counts with the national count for every name-year
    /// present in both.
    pub fn audit_national(&self) -> NationalAudit {
        let mut audit = NationalAudit { checked: 0, violations: 0 };
        for (key, by_year) in &self.series {
            let Some(nat) = self.national.get(key) else { continue };
            for (year, counts) in by_year {
                if let Some(&n) = nat.get(year) {
                    audit.checked += 1;
                    if counts.values().sum::<u64>() > n {
                        audit.violations += 1;
                    }
                }
            }
        }
        audit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn national_line() {
        let (recs, report) = parse_national_text("Mary,F,7065\n", 1880, "yob1880.txt", ParseOptions::default()).unwrap();
        assert_eq!(
            recs,
            vec![NameRecord {
                name: "mary".into(),
                sex: Sex::F,
                region: Region::National,
                year: 1880,
                count: 7065
            }]
        );
        assert!(report.malformed.is_empty());
    }

    #[test]
    fn national_zero_count_is_malformed() {
        let err = parse_national_text("Mary,F,0\n", 1880, "f", ParseOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }), "{err}");
        let (recs, report) =
            parse_national_text("Mary,F,0\nAnna,F,3\n", 1880, "f", ParseOptions { lenient: true }).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(report.malformed.len(), 1);
        assert_eq!(report.malformed[0].line, 1);
    }

    #[test]
    fn national_duplicate_key() {
        let err = parse_national_text("Mary,F,5\nMARY,F,6\n", 1880, "f", ParseOptions::default()).unwrap_err();
        assert!(err.to_string().contains("duplicate key"), "{err}");
        assert!(parse_national_text("Mary,F,5\nMary,M,6\n", 1880, "f", ParseOptions::default()).is_ok());
    }

    #[test]
    fn filename_year() {
        assert_eq!(year_from_filename(Path::new("yob1880.txt")), Some(1880));
        assert_eq!(year_from_filename(Path::new("/x/yob2005.TXT")), Some(2005));
        assert_eq!(year_from_filename(Path::new("names.txt")), None);
        assert_eq!(year_from_filename(Path::new("yob88.txt")), None);
    }

    #[test]
    fn state_line() {
        let (recs, _) = parse_state_text("AK,F,1910,Mary,14\n", "AK.TXT", ParseOptions::default()).unwrap();
        assert_eq!(recs, vec![rec("mary", Sex::F, "AK", 1910, 14)]);
    }

    #[test]
    fn state_errors() {
        let err = parse_state_text("ZZ,F,1910,Mary,14\n", "f", ParseOptions::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownState { .. }), "{err}");
        let err = parse_state_text("AK,F,19x0,Mary,14\n", "f", ParseOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedYear { .. }), "{err}");
        let err = parse_state_text("AK,F,1910,Mary,14\nAK,F,1910,mary,3\n", "f", ParseOptions::default())
            .unwrap_err();
        assert!(err.to_string().contains("duplicate key"), "{err}");
        let (recs, report) = parse_state_text(
            "ZZ,F,1910,Mary,14\nAK,F,1910,Anna,3\nAK,F,1910\n",
            "f",
            ParseOptions { lenient: true },
        )
        .unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(report.malformed.len(), 2);
    }

    #[test]
    fn first_year_and_totals() {
        let records = vec![
            rec("Anna", Sex::F, "CO", 1990, 50),
            rec("Anna", Sex::F, "CO", 1991, 60),
            rec("Beth", Sex::F, "CO", 1990, 30),
            rec("Carl", Sex::M, "CO", 1990, 20),
        ];
        let panel = NamePanel::build(&records, PanelOptions::new(1980..=2000)).unwrap();
        let anna = NameKey::new("ANNA", Sex::F);
        assert_eq!(panel.first_year(&anna), Some(1990));
        let co: State = "CO".parse().unwrap();
        assert_eq!(panel.state_total(co, 1990), 100);
        assert_eq!(panel.state_total(co, 1991), 60);
        assert_eq!(panel.seeded_before(&anna, 1990), StateSet::EMPTY);
        assert_eq!(panel.seeded_before(&anna, 1991).codes(), vec!["CO"]);
        assert_eq!(*panel.totals_policy(), TotalsPolicy::ListedNames);
    }

    #[test]
    fn empty_after_filter() {
        let records = vec![rec("Anna", Sex::F, "CO", 1950, 5)];
        assert!(matches!(
            NamePanel::build(&records, PanelOptions::new(1970..=2005)),
            Err(Error::EmptyPanel { .. })
        ));
    }

    #[test]
    fn top_k_cut() {
        let records = vec![
            rec("A", Sex::F, "CO", 1990, 10),
            rec("B", Sex::F, "CO", 1990, 30),
            rec("C", Sex::F, "CO", 1990, 10),
            rec("D", Sex::M, "CO", 1990, 1),
        ];
        let mut opts = PanelOptions::new(1990..=1990);
        opts.top_k = Some(2);
        let panel = NamePanel::build(&records, opts).unwrap();
        let co: State = "CO".parse().unwrap();
        // F keeps B (30) and A (10, alphabetically before C); M keeps D.
        assert_eq!(panel.state_total(co, 1990), 41);
        assert!(panel.first_year(&NameKey::new("c", Sex::F)).is_none());
    }

    #[test]
    fn external_totals_override() {
        let records = vec![rec("Anna", Sex::F, "CO", 1990, 50)];
        let mut opts = PanelOptions::new(1990..=1990);
        opts.totals_override = Some(BirthTotals::parse("state,year,births\nCO,1990,5000\n", "t.csv").unwrap());
        let panel = NamePanel::build(&records, opts).unwrap();
        let co: State = "CO".parse().unwrap();
        assert_eq!(panel.state_total(co, 1990), 5000);
        assert_eq!(panel.listed_total(co, 1990), 50);

        let mut opts = PanelOptions::new(1990..=1990);
        opts.totals_override = Some(BirthTotals::parse("state,year,births\nUT,1990,5000\n", "t.csv").unwrap());
        assert!(NamePanel::build(&records, opts).is_err());
        assert!(BirthTotals::parse("state,year,births\nZZ,1990,1\n", "t").is_err());
    }

    #[test]
    fn national_audit() {
        let mut records = vec![
            rec("Anna", Sex::F, "CO", 1990, 50),
            rec("Anna", Sex::F, "UT", 1990, 20),
            rec("Beth", Sex::F, "UT", 1990, 20),
        ];
        records.push(NameRecord { name: "anna".into(), sex: Sex::F, region: Region::National, year: 1990, count: 80 });
        records.push(NameRecord { name: "beth".into(), sex: Sex::F, region: Region::National, year: 1990, count: 10 });
        let panel = NamePanel::build(&records, PanelOptions::new(1990..=1990)).unwrap();
        let audit = panel.audit_national();
        assert_eq!(audit, NationalAudit { checked: 2, violations: 1 });
        assert_eq!(panel.national_count(&NameKey::new("Anna", Sex::F), 1990), Some(80));
    }
}
