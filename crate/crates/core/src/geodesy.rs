//! Zip-code centroids and great-circle distances.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powerlaw::DistanceSample;

/// Mean Earth radius (IUGG), km.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// A point on the sphere, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    lat: f64,
    lon: f64,
}

impl TryFrom<RawPoint> for GeoPoint {
    type Error = Error;
    fn try_from(raw: RawPoint) -> Result<Self> {
        GeoPoint::new(raw.lat, raw.lon)
    }
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(Error::InvalidCoordinate { lat, lon });
        }
        Ok(GeoPoint { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

/// Haversine great-circle distance in km.
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Normalizes a postal code to its 5-digit form, dropping any ZIP+4 suffix.
/// Returns `None` unless the result is exactly five ASCII digits.
pub fn normalize_zip(raw: &str) -> Option<String> {
    let head = raw.trim().split('-').next()?;
    if head.len() == 5 && head.bytes().all(|b| b.is_ascii_digit()) {
        Some(head.to_string())
    } else {
        None
    }
}

/// Header names used to find the zip, latitude and longitude columns.
#[derive(Debug, Clone)]
pub struct GazetteerColumns {
    pub zip: String,
    pub lat: String,
    pub lon: String,
}

impl Default for GazetteerColumns {
    fn default() -> Self {
        GazetteerColumns {
            zip: "zip".into(),
            lat: "lat".into(),
            lon: "lon".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedRow {
    /// 1-based line number in the source file.
    pub line: u64,
    pub reason: String,
}

/// Zip-code centroid lookup table. Immutable once loaded.
#[derive(Debug, Clone)]
pub struct ZipGazetteer {
    entries: BTreeMap<String, GeoPoint>,
    source: String,
    malformed: Vec<MalformedRow>,
}

impl ZipGazetteer {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::load_with_columns(path, &GazetteerColumns::default())
    }

    pub fn load_with_columns(path: impl AsRef<Path>, columns: &GazetteerColumns) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file, &path.display().to_string(), columns)
    }

    pub fn from_reader<R: std::io::Read>(
        reader: R,
        source: &str,
        columns: &GazetteerColumns,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let headers = match rdr.headers() {
            Ok(h) => h.clone(),
            Err(e) => {
                return Err(Error::MalformedLine {
                    file: source.to_string(),
                    line: 1,
                    reason: e.to_string(),
                })
            }
        };
        if headers.is_empty() {
            return Err(Error::ZeroValidRows {
                source_name: source.to_string(),
                malformed: 0,
            });
        }
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::MissingColumn {
                    source_name: source.to_string(),
                    column: name.to_string(),
                })
        };
        let (zi, lai, loi) = (find(&columns.zip)?, find(&columns.lat)?, find(&columns.lon)?);

        let mut entries: BTreeMap<String, GeoPoint> = BTreeMap::new();
        let mut malformed = Vec::new();
        for rec in rdr.records() {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line());
                    malformed.push(MalformedRow {
                        line,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let line = rec.position().map_or(0, |p| p.line());
            let parsed = (|| {
                let zip_raw = rec.get(zi).ok_or("missing zip field")?;
                let zip = normalize_zip(zip_raw).ok_or("zip is not 5 digits")?;
                let lat: f64 = rec
                    .get(lai)
                    .ok_or("missing lat field")?
                    .parse()
                    .map_err(|_| "lat is not a number")?;
                let lon: f64 = rec
                    .get(loi)
                    .ok_or("missing lon field")?
                    .parse()
                    .map_err(|_| "lon is not a number")?;
                let point = GeoPoint::new(lat, lon).map_err(|_| "coordinate out of range")?;
                Ok::<_, &str>((zip, point))
            })();
            match parsed {
                Ok((zip, point)) => match entries.get(&zip) {
                    Some(prev) if *prev != point => {
                        return Err(Error::ConflictingZip {
                            zip,
                            first_lat: prev.lat,
                            first_lon: prev.lon,
                            second_lat: point.lat,
                            second_lon: point.lon,
                        });
                    }
                    Some(_) => {}
                    None => {
                        entries.insert(zip, point);
                    }
                },
                Err(reason) => malformed.push(MalformedRow {
                    line,
                    reason: reason.to_string(),
                }),
            }
        }

        if entries.is_empty() {
            return Err(Error::ZeroValidRows {
                source_name: source.to_string(),
                malformed: malformed.len(),
            });
        }
        Ok(ZipGazetteer {
            entries,
            source: source.to_string(),
            malformed,
        })
    }

    pub fn lookup(&self, zip: &str) -> Option<GeoPoint> {
        normalize_zip(zip).and_then(|z| self.entries.get(&z).copied())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Rows that were skipped during loading.
    pub fn malformed(&self) -> &[MalformedRow] {
        &self.malformed
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, GeoPoint)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Distances for the resolvable pairs plus a count of the rest.
#[derive(Debug, Clone)]
pub struct PairDistances {
    pub sample: DistanceSample,
    pub excluded: usize,
}

/// Great-circle distance for each zip pair found in the gazetteer.
pub fn pair_distances<A, B>(pairs: &[(A, B)], gaz: &ZipGazetteer) -> Result<PairDistances>
where
    A: AsRef<str>,
    B: AsRef<str>,
{
    let mut values = Vec::with_capacity(pairs.len());
    let mut excluded = 0;
    for (a, b) in pairs {
        match (gaz.lookup(a.as_ref()), gaz.lookup(b.as_ref())) {
            (Some(pa), Some(pb)) => values.push(haversine_km(pa, pb)),
            _ => excluded += 1,
        }
    }
    if values.is_empty() {
        return Err(Error::NoResolvablePairs { pairs: pairs.len() });
    }
    let sample = DistanceSample::new(values, format!("zip pairs via {}", gaz.source()))?;
    Ok(PairDistances { sample, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaz(text: &str) -> Result<ZipGazetteer> {
        ZipGazetteer::from_reader(text.as_bytes(), "inline", &GazetteerColumns::default())
    }

    #[test]
    fn rejects_out_of_range_points() {
        assert!(GeoPoint::new(90.5, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -180.1).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
        assert!(GeoPoint::new(-90.0, 180.0).is_ok());
    }

    #[test]
    fn identical_points_are_zero_apart() {
        let p = GeoPoint::new(42.3647, -71.1042).unwrap();
        assert_eq!(haversine_km(p, p), 0.0);
    }

    #[test]
    fn quarter_great_circle() {
        let a = GeoPoint::new(0.0, 0.0).unwrap();
        let b = GeoPoint::new(0.0, 90.0).unwrap();
        let expected = std::f64::consts::FRAC_PI_2 * EARTH_RADIUS_KM;
        assert!((haversine_km(a, b) - expected).abs() / expected < 1e-6);
        assert!((haversine_km(a, b) - 10007.5572).abs() < 1e-3);
    }

    #[test]
    fn nyc_to_la_against_law_of_cosines() {
        let nyc = GeoPoint::new(40.7128, -74.0060).unwrap();
        let la = GeoPoint::new(34.0522, -118.2437).unwrap();
        // Independent route: spherical law of cosines.
        let (p1, p2) = (nyc.lat().to_radians(), la.lat().to_radians());
        let dl = (la.lon() - nyc.lon()).to_radians();
        let central = (p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos()).acos();
        let oracle = central * EARTH_RADIUS_KM;
        let d = haversine_km(nyc, la);
        assert!((d - oracle).abs() < 1e-6, "{d} vs {oracle}");
        assert!((d - 3936.0).abs() < 1.0, "{d}");
    }

    #[test]
    fn leading_zero_preserved() {
        let g = gaz("zip,lat,lon\n02139,42.3647,-71.1042\n").unwrap();
        assert_eq!(g.len(), 1);
        let p = g.lookup("02139").unwrap();
        assert_eq!((p.lat(), p.lon()), (42.3647, -71.1042));
        assert_eq!(g.iter().next().unwrap().0, "02139");
    }

    #[test]
    fn zip4_suffix_is_stripped() {
        assert_eq!(normalize_zip("02139-4307").as_deref(), Some("02139"));
        assert_eq!(normalize_zip("2139"), None);
        assert_eq!(normalize_zip("0213a"), None);
    }

    #[test]
    fn empty_file_has_zero_valid_rows() {
        let err = gaz("").unwrap_err();
        assert!(err.to_string().contains("zero valid rows"), "{err}");
        let err = gaz("zip,lat,lon\n").unwrap_err();
        assert!(err.to_string().contains("zero valid rows"), "{err}");
    }

    #[test]
    fn malformed_rows_are_counted() {
        let g = gaz("zip,lat,lon\n02139,42.3647,-71.1042\nabc,1,2\n10001,95,0\n10002,x,0\n").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.malformed().len(), 3);
        assert_eq!(g.malformed()[0].line, 3);
    }

    #[test]
    fn conflicting_duplicate_is_an_error() {
        assert!(gaz("zip,lat,lon\n02139,42.0,-71.0\n02139,42.0,-71.0\n").is_ok());
        let err = gaz("zip,lat,lon\n02139,42.0,-71.0\n02139,43.0,-71.0\n").unwrap_err();
        assert!(matches!(err, Error::ConflictingZip { .. }));
    }

    #[test]
    fn custom_column_names() {
        let cols = GazetteerColumns {
            zip: "ZCTA".into(),
            lat: "INTPTLAT".into(),
            lon: "INTPTLONG".into(),
        };
        let g = ZipGazetteer::from_reader(
            "INTPTLAT,ZCTA,INTPTLONG\n40.75,10001,-73.99\n".as_bytes(),
            "inline",
            &cols,
        )
        .unwrap();
        assert!(g.lookup("10001").is_some());
        assert!(gaz("postal,lat,lon\n10001,40.75,-73.99\n").is_err());
    }

    #[test]
    fn pair_distances_same_zip() {
        let g = gaz("zip,lat,lon\n02139,42.3647,-71.1042\n").unwrap();
        let out = pair_distances(&[("02139", "02139")], &g).unwrap();
        assert_eq!(out.sample.values(), &[0.0]);
        assert_eq!(out.excluded, 0);
    }

    #[test]
    fn pair_distances_all_unresolvable() {
        let g = gaz("zip,lat,lon\n02139,42.3647,-71.1042\n").unwrap();
        let err = pair_distances(&[("02139", "99999-not-in-gazetteer")], &g).unwrap_err();
        assert!(matches!(err, Error::NoResolvablePairs { pairs: 1 }));
    }
}
