//! File formats: series CSV, JSON records and two-column tables.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use leitmotif_core::{LamaStats, Leitmotif, MultivariateTimeSeries};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bench::{EvalReport, GroundTruth, NoiseRow, Occurrence};

/// Schema version written into every record.
pub const SCHEMA: &str = "1";

/// File-level failures, always carrying the path.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    /// The file could not be opened, read or written.
    #[error("{path}: {source}")]
    Io {
        /// Offending file.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// The content is malformed.
    #[error("{path}:{line}: {message}")]
    Format {
        /// Offending file.
        path: PathBuf,
        /// 1-based line number, 0 when unknown.
        line: u64,
        /// What went wrong.
        message: String,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, line: u64, message: impl Into<String>) -> IoError {
    IoError::Format {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// How a series CSV is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    /// Field delimiter.
    pub delimiter: u8,
    /// The first column holds time stamps and is ignored.
    pub timestamp_column: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            timestamp_column: false,
        }
    }
}

/// A series read from disk plus its column names.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFile {
    /// One name per dimension; `dim0, dim1, ...` without a header.
    pub names: Vec<String>,
    /// Values.
    pub series: MultivariateTimeSeries,
}

/// Reads one column per dimension, one row per time stamp.
///
/// A first row with any non-numeric field is taken as a header. Blank lines
/// are skipped.
pub fn read_series_csv(path: &Path, opts: CsvOptions) -> Result<SeriesFile, IoError> {
    let file = File::open(path).map_err(io_err(path))?;
    read_series(file, path, opts)
}

/// [`read_series_csv`] over any reader; `path` only labels errors.
pub fn read_series(reader: impl Read, path: &Path, opts: CsvOptions) -> Result<SeriesFile, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let skip = usize::from(opts.timestamp_column);
    let mut names: Option<Vec<String>> = None;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            format_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(idx as u64 + 1, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let fields: Vec<&str> = rec.iter().skip(skip).collect();
        if fields.is_empty() {
            return Err(format_err(path, line, "no value columns"));
        }
        let parsed: Vec<Option<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        if width.is_none() && names.is_none() && parsed.iter().any(Option::is_none) {
            names = Some(fields.iter().map(|s| s.to_string()).collect());
            continue;
        }
        let w = *width.get_or_insert(fields.len());
        if let Some(n) = &names {
            if n.len() != w {
                return Err(format_err(
                    path,
                    line,
                    format!("header has {} columns, data has {w}", n.len()),
                ));
            }
        }
        if fields.len() != w {
            return Err(format_err(
                path,
                line,
                format!("expected {w} values, found {}", fields.len()),
            ));
        }
        if columns.is_empty() {
            columns = vec![Vec::new(); w];
        }
        for (c, (v, raw)) in parsed.iter().zip(&fields).enumerate() {
            match v {
                Some(x) if x.is_finite() => columns[c].push(*x),
                _ => {
                    return Err(format_err(
                        path,
                        line,
                        format!("column {}: not a finite number: {raw:?}", c + 1 + skip),
                    ))
                }
            }
        }
    }
    if columns.is_empty() {
        return Err(format_err(path, 0, "no data rows"));
    }
    let names = names.unwrap_or_else(|| (0..columns.len()).map(|c| format!("dim{c}")).collect());
    let series = MultivariateTimeSeries::from_dimensions(columns).map_err(|e| format_err(path, 0, e.to_string()))?;
    Ok(SeriesFile { names, series })
}

/// Writes a series with a `dim0, dim1, ...` header.
pub fn write_series_csv(path: &Path, ts: &MultivariateTimeSeries) -> Result<(), IoError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let header: Vec<String> = (0..ts.dims()).map(|c| format!("dim{c}")).collect();
    let run = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "{}", header.join(","))?;
        for t in 0..ts.len() {
            let row: Vec<String> = (0..ts.dims()).map(|c| format!("{}", ts.dim(c)[t])).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()
    };
    run(&mut w).map_err(io_err(path))
}

/// Writes `header` and `(x, y)` rows.
pub fn write_table<X: std::fmt::Display, Y: std::fmt::Display>(
    path: &Path,
    header: (&str, &str),
    rows: impl IntoIterator<Item = (X, Y)>,
) -> Result<(), IoError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let run = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "{},{}", header.0, header.1)?;
        for (x, y) in rows {
            writeln!(w, "{x},{y}")?;
        }
        w.flush()
    };
    run(&mut w).map_err(io_err(path))
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| format_err(path, 0, e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}

/// Reads JSON into `T`, reporting the failing line.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| format_err(path, e.line() as u64, e.to_string()))
}

/// Work counters as written to disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRecord {
    /// Queries visited.
    pub queries: usize,
    /// Queries without enough feasible dimensions.
    pub infeasible: usize,
    /// Candidates skipped by the lower bound.
    pub pruned: usize,
    /// Candidates whose extent was computed.
    pub evaluated: usize,
    /// Extent computations stopped early.
    pub aborted: usize,
}

impl From<LamaStats> for StatsRecord {
    fn from(s: LamaStats) -> Self {
        Self {
            queries: s.queries,
            infeasible: s.infeasible,
            pruned: s.pruned,
            evaluated: s.evaluated,
            aborted: s.aborted,
        }
    }
}

/// Which parameters were learned and how confidently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnedFlags {
    /// `l` came from a length sweep.
    pub l: bool,
    /// `k` came from the elbow search.
    pub k: bool,
    /// The length sweep had an interior minimum.
    pub l_confident: bool,
    /// The top elbow reached the threshold.
    pub k_confident: bool,
}

/// Output of `discover`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// Always [`SCHEMA`].
    pub schema: String,
    /// `"ok"` or `"no-leitmotif"`.
    pub status: String,
    /// Motif length.
    pub l: usize,
    /// Motif set size.
    pub k: usize,
    /// Selected dimension count.
    pub f: usize,
    /// Measure tag.
    pub measure: String,
    /// Trivial-match factor.
    pub alpha: f64,
    /// `"dense"` or `"sparse"`.
    pub backend: String,
    /// Sorted 0-based start offsets; empty without a leitmotif.
    pub offsets: Vec<usize>,
    /// Selected dimension indices, ascending.
    pub dims: Vec<usize>,
    /// Names of the selected dimensions.
    pub dim_names: Vec<String>,
    /// Extent; `null` without a leitmotif.
    pub extent: Option<f64>,
    /// Query offset of the winning candidate.
    pub query: Option<usize>,
    /// Work counters.
    pub stats: Option<StatsRecord>,
    /// Learning provenance.
    pub learned: LearnedFlags,
}

impl ResultRecord {
    /// Occurrences described by the record.
    pub fn occurrences(&self) -> Vec<Occurrence> {
        self.offsets
            .iter()
            .map(|&start| Occurrence { start, length: self.l })
            .collect()
    }
}

/// Wall time of a run, kept apart from the deterministic result record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    /// Always [`SCHEMA`].
    pub schema: &'static str,
    /// Seconds spent learning parameters.
    pub learn_seconds: f64,
    /// Seconds spent building distances and searching.
    pub search_seconds: f64,
    /// Total seconds.
    pub wall_seconds: f64,
}

/// Path of the timing sidecar next to `output`.
pub fn timing_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".timing.json");
    output.with_file_name(name)
}

/// Ground truth on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRecord {
    /// Always [`SCHEMA`].
    pub schema: String,
    /// Generator seed.
    pub seed: u64,
    /// Series length.
    pub n: usize,
    /// Number of dimensions.
    pub d: usize,
    /// Copy jitter.
    pub jitter: f64,
    /// Implant description.
    #[serde(flatten)]
    pub truth: GroundTruth,
}

/// Output of `eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    /// Always [`SCHEMA`].
    pub schema: String,
    /// Scores.
    #[serde(flatten)]
    pub report: EvalReport,
    /// Found interval count.
    pub found: usize,
    /// Ground-truth interval count.
    pub truth: usize,
}

/// Writes the noise table: level, precision mean/std, recall mean/std.
pub fn write_noise_table(path: &Path, rows: &[NoiseRow]) -> Result<(), IoError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let run = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "level,precision_mean,precision_std,recall_mean,recall_std")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.level, r.precision_mean, r.precision_std, r.recall_mean, r.recall_std
            )?;
        }
        w.flush()
    };
    run(&mut w).map_err(io_err(path))
}

/// Writes one row per occurrence, dimension and time step:
/// `occurrence,offset,dim,name,t,value`.
pub fn write_occurrences(
    path: &Path,
    ts: &MultivariateTimeSeries,
    names: &[String],
    motif: Option<&Leitmotif>,
) -> Result<(), IoError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let run = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "occurrence,offset,dim,name,t,value")?;
        if let Some(m) = motif {
            for (o, &start) in m.offsets.iter().enumerate() {
                for &dim in &m.dims {
                    for t in 0..m.window {
                        let v = ts.dim(dim)[start + t];
                        writeln!(w, "{o},{start},{dim},{},{t},{v}", names[dim])?;
                    }
                }
            }
        }
        w.flush()
    };
    run(&mut w).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, opts: CsvOptions) -> Result<SeriesFile, IoError> {
        read_series(text.as_bytes(), Path::new("mem.csv"), opts)
    }

    #[test]
    fn header_detection() {
        let f = read("a,b\n1,2\n3,4\n5,6\n", CsvOptions::default()).unwrap();
        assert_eq!(f.names, vec!["a", "b"]);
        assert_eq!(f.series.dim(1), &[2.0, 4.0, 6.0]);
        let g = read(
            "1;2\n3;4\n",
            CsvOptions {
                delimiter: b';',
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g.names, vec!["dim0", "dim1"]);
    }

    #[test]
    fn timestamp_column_is_dropped() {
        let f = read(
            "time,x\n2020-01-01,1\n2020-01-02,2\n",
            CsvOptions {
                timestamp_column: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(f.series.dims(), 1);
        assert_eq!(f.series.dim(0), &[1.0, 2.0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = read("x,y\n1,2\n3,oops\n", CsvOptions::default()).unwrap_err();
        match e {
            IoError::Format { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let e = read("1,2\n3\n", CsvOptions::default()).unwrap_err();
        assert!(matches!(e, IoError::Format { line: 2, .. }), "{e}");
        assert!(read("", CsvOptions::default()).is_err());
        assert!(read("1,nan\n2,3\n", CsvOptions::default()).is_err());
    }

    #[test]
    fn timing_sidecar_name() {
        assert_eq!(
            timing_path(Path::new("/tmp/out.json")),
            PathBuf::from("/tmp/out.json.timing.json")
        );
    }
}
