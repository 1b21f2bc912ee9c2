//! File output: CSV, JSON and 16-bit PGM heatmaps, written atomically.
//!
//! Floats are printed with Rust's shortest round-trip formatting and read
//! back with the standard parser, so a write-then-read cycle reproduces
//! every value exactly. Nothing here embeds wall-clock time: identical
//! inputs give byte-identical files.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use noonlith::gaussian::FringeScan;
use noonlith::{CoincidenceMap, DetectorGrid, Pattern1D};

use crate::error::CliError;

/// Output file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pgm,
}

/// Where and how results are written.
#[derive(Debug, Clone)]
pub struct OutputSink {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
    /// The command line, reproduced in JSON metadata.
    pub command: String,
}

#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    schema_version: &'static str,
    kind: &'static str,
    meta: Meta<'a>,
    data: T,
}

impl OutputSink {
    pub fn new(dir: impl Into<PathBuf>, formats: Vec<Format>, command: String) -> Self {
        Self {
            dir: dir.into(),
            formats,
            command,
        }
    }

    fn path(&self, name: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{name}.{ext}"))
    }

    pub fn write_map(
        &self,
        name: &str,
        map: &CoincidenceMap,
        grid: &DetectorGrid,
    ) -> Result<Vec<PathBuf>, CliError> {
        let mut written = Vec::new();
        for format in &self.formats {
            let path = match format {
                Format::Csv => {
                    let path = self.path(name, "csv");
                    atomic_write(&path, map_csv(map, grid).as_bytes())?;
                    path
                }
                Format::Json => {
                    let path = self.path(name, "json");
                    let doc = Document {
                        schema_version: "1",
                        kind: "coincidence_map",
                        meta: Meta {
                            command: &self.command,
                        },
                        data: MapData::new(map, grid),
                    };
                    atomic_write(&path, to_json(&doc)?.as_bytes())?;
                    path
                }
                Format::Pgm => {
                    let path = self.path(name, "pgm");
                    atomic_write(&path, &map_pgm(map))?;
                    path
                }
            };
            written.push(path);
        }
        Ok(written)
    }

    pub fn write_pattern(
        &self,
        name: &str,
        pattern: &Pattern1D,
        grid: &DetectorGrid,
    ) -> Result<Vec<PathBuf>, CliError> {
        let mut written = Vec::new();
        for format in &self.formats {
            let path = match format {
                Format::Csv => {
                    let path = self.path(name, "csv");
                    atomic_write(&path, pattern_csv(pattern, grid).as_bytes())?;
                    path
                }
                Format::Json => {
                    let path = self.path(name, "json");
                    let doc = Document {
                        schema_version: "1",
                        kind: "pattern",
                        meta: Meta {
                            command: &self.command,
                        },
                        data: PatternData::new(pattern, grid),
                    };
                    atomic_write(&path, to_json(&doc)?.as_bytes())?;
                    path
                }
                Format::Pgm => {
                    let path = self.path(name, "pgm");
                    atomic_write(&path, &pattern_pgm(pattern))?;
                    path
                }
            };
            written.push(path);
        }
        Ok(written)
    }

    pub fn write_scan(&self, name: &str, scan: &FringeScan) -> Result<Vec<PathBuf>, CliError> {
        let mut written = Vec::new();
        for format in &self.formats {
            let path = match format {
                Format::Csv => {
                    let path = self.path(name, "csv");
                    atomic_write(&path, scan_csv(scan).as_bytes())?;
                    path
                }
                Format::Json => {
                    let path = self.path(name, "json");
                    let doc = Document {
                        schema_version: "1",
                        kind: "fringe_scan",
                        meta: Meta {
                            command: &self.command,
                        },
                        data: scan,
                    };
                    atomic_write(&path, to_json(&doc)?.as_bytes())?;
                    path
                }
                // A 1-D scan has no heatmap form; skip silently.
                Format::Pgm => continue,
            };
            written.push(path);
        }
        Ok(written)
    }

    /// Arbitrary JSON payload under the standard envelope.
    pub fn write_json<T: Serialize>(
        &self,
        name: &str,
        kind: &'static str,
        data: &T,
    ) -> Result<PathBuf, CliError> {
        let path = self.path(name, "json");
        let doc = Document {
            schema_version: "1",
            kind,
            meta: Meta {
                command: &self.command,
            },
            data,
        };
        atomic_write(&path, to_json(&doc)?.as_bytes())?;
        Ok(path)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("json encoding failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct MapData {
    detectors: usize,
    index_min: i64,
    detector_width: f64,
    normalization: noonlith::Normalization,
    /// Row-major: values[i][j] is P(s = index_min + i, t = index_min + j).
    values: Vec<Vec<f64>>,
}

impl MapData {
    fn new(map: &CoincidenceMap, grid: &DetectorGrid) -> Self {
        let n = map.detectors();
        Self {
            detectors: n,
            index_min: grid.index_min(),
            detector_width: grid.detector_width(),
            normalization: map.normalization(),
            values: (0..n)
                .map(|i| (0..n).map(|j| map.get(i, j)).collect())
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct PatternData {
    detectors: usize,
    index_min: i64,
    detector_width: f64,
    normalization: noonlith::Normalization,
    values: Vec<f64>,
}

impl PatternData {
    fn new(pattern: &Pattern1D, grid: &DetectorGrid) -> Self {
        Self {
            detectors: pattern.values().len(),
            index_min: grid.index_min(),
            detector_width: grid.detector_width(),
            normalization: pattern.normalization(),
            values: pattern.values().to_vec(),
        }
    }
}

/// `s,t,p` rows, s-major; indices are detector indices, not positions.
pub fn map_csv(map: &CoincidenceMap, grid: &DetectorGrid) -> String {
    let n = map.detectors();
    let mut out = String::with_capacity(n * n * 24);
    out.push_str("s,t,p\n");
    for (i, s) in grid.indices().enumerate() {
        for (j, t) in grid.indices().enumerate() {
            out.push_str(&format!("{s},{t},{}\n", map.get(i, j)));
        }
    }
    out
}

/// `s,p` rows for a one-dimensional pattern.
pub fn pattern_csv(pattern: &Pattern1D, grid: &DetectorGrid) -> String {
    let mut out = String::from("s,p\n");
    for (s, v) in grid.indices().zip(pattern.values()) {
        out.push_str(&format!("{s},{v}\n"));
    }
    out
}

/// `x,p,envelope` rows for a fringe scan; x in metres.
pub fn scan_csv(scan: &FringeScan) -> String {
    let mut out = String::from("x,p,envelope\n");
    for ((x, p), e) in scan
        .positions()
        .iter()
        .zip(scan.values())
        .zip(scan.envelope())
    {
        out.push_str(&format!("{x},{p},{e}\n"));
    }
    out
}

/// A parsed `s,t,p` table.
pub struct ParsedMap {
    pub detectors: usize,
    /// Row-major in (s, t), same layout as `CoincidenceMap::values`.
    pub values: Vec<f64>,
}

pub fn parse_map_csv(text: &str) -> Result<ParsedMap, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Io("empty csv".into()))?;
    if header.trim() != "s,t,p" {
        return Err(CliError::Io(format!("unexpected csv header '{header}'")));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parse = |field: Option<&str>| -> Result<f64, CliError> {
            field
                .ok_or_else(|| CliError::Io(format!("line {}: missing field", lineno + 2)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| CliError::Io(format!("line {}: {e}", lineno + 2)))
        };
        let s = parse(fields.next())?;
        let t = parse(fields.next())?;
        let p = parse(fields.next())?;
        rows.push((s as i64, t as i64, p));
    }
    let n2 = rows.len();
    let n = (n2 as f64).sqrt().round() as usize;
    if n * n != n2 || n == 0 {
        return Err(CliError::Io(format!("{n2} rows do not form a square map")));
    }
    let mut values = vec![0.0; n2];
    let min_s = rows.iter().map(|r| r.0).min().expect("nonempty");
    for (s, t, p) in rows {
        let i = (s - min_s) as usize;
        let j = (t - min_s) as usize;
        if i >= n || j >= n {
            return Err(CliError::Io(format!("index ({s},{t}) outside the map")));
        }
        values[i * n + j] = p;
    }
    Ok(ParsedMap {
        detectors: n,
        values,
    })
}

/// 16-bit binary PGM (P5): pixel = round(65535·value/max).
///
/// Rows run top-to-bottom from t = +S/2 down to −S/2; columns left-to-right
/// from s = −S/2 to +S/2, so the s = t diagonal climbs from the lower-left
/// to the upper-right corner, and lighter means a higher coincidence rate.
pub fn map_pgm(map: &CoincidenceMap) -> Vec<u8> {
    let n = map.detectors();
    let peak = map.values().iter().cloned().fold(0.0f64, f64::max);
    let mut out = Vec::with_capacity(64 + 2 * n * n);
    out.extend_from_slice(b"P5\n");
    out.extend_from_slice(b"# rows: t from +S/2 (top) to -S/2 (bottom); columns: s from -S/2 (left) to +S/2 (right)\n");
    out.extend_from_slice(b"# lighter = higher coincidence rate\n");
    out.extend_from_slice(format!("{n} {n}\n65535\n").as_bytes());
    for j in (0..n).rev() {
        for i in 0..n {
            let v = ((map.get(i, j) / peak) * 65535.0).round() as u16;
            out.extend_from_slice(&v.to_be_bytes());
        }
    }
    out
}

fn pattern_pgm(pattern: &Pattern1D) -> Vec<u8> {
    let values = pattern.values();
    let n = values.len();
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    let mut out = Vec::with_capacity(64 + 2 * n);
    out.extend_from_slice(b"P5\n");
    out.extend_from_slice(b"# single row: s from -S/2 (left) to +S/2 (right)\n");
    out.extend_from_slice(format!("{n} 1\n65535\n").as_bytes());
    for v in values {
        let px = ((v / peak) * 65535.0).round() as u16;
        out.extend_from_slice(&px.to_be_bytes());
    }
    out
}

/// Write via a temporary sibling and rename, so readers never observe a
/// half-written file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use noonlith::{steuernagel_coincidence, Normalization, SlitGeometry};

    fn sample() -> (CoincidenceMap, DetectorGrid) {
        let grid = DetectorGrid::new(4, 1e-5).unwrap();
        let geom = SlitGeometry::for_fringe_count(4.5, &grid).unwrap();
        (
            steuernagel_coincidence(&geom, &grid, Normalization::UnitSum),
            grid,
        )
    }

    #[test]
    fn csv_round_trips_exactly() {
        let (map, grid) = sample();
        let text = map_csv(&map, &grid);
        let parsed = parse_map_csv(&text).unwrap();
        assert_eq!(parsed.detectors, map.detectors());
        for (a, b) in parsed.values.iter().zip(map.values()) {
            assert_eq!(a, b, "round-trip must be bit-exact");
        }
    }

    #[test]
    fn pgm_pixels_are_scaled_values() {
        // 3x3 synthetic map with a known peak.
        let values = vec![0.0, 0.25, 0.5, 0.25, 1.0, 0.75, 0.5, 0.75, 0.125];
        let map = CoincidenceMap::from_values(3, values.clone(), Normalization::UnitMax).unwrap();
        let bytes = map_pgm(&map);
        let header_end = {
            // P5, two comment lines, dimensions, maxval.
            let text_len = bytes
                .windows(6)
                .position(|w| w == b"65535\n")
                .expect("maxval line")
                + 6;
            text_len
        };
        let data = &bytes[header_end..];
        assert_eq!(data.len(), 18);
        let px = |idx: usize| u16::from_be_bytes([data[2 * idx], data[2 * idx + 1]]);
        // First written row is t = +1 (j = 2): values (0.5, 0.75, 0.125)/max.
        let peak = values.iter().cloned().fold(0.0f64, f64::max);
        assert_eq!(px(0), ((0.5 / peak) * 65535.0).round() as u16);
        assert_eq!(px(1), ((0.75 / peak) * 65535.0).round() as u16);
        assert_eq!(px(2), ((0.125 / peak) * 65535.0).round() as u16);
        // Last row is t = -1: (0.0, 0.25, 0.5).
        assert_eq!(px(6), 0);
        assert_eq!(px(7), ((0.25 / peak) * 65535.0).round() as u16);
    }

    #[test]
    fn rejects_malformed_csv() {
        assert!(parse_map_csv("").is_err());
        assert!(parse_map_csv("x,y,z\n1,1,1\n").is_err());
        assert!(parse_map_csv("s,t,p\n0,0,1\n0,1,1\n").is_err());
    }
}
