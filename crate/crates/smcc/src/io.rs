//! On-disk formats.
//!
//! Edge lists: one edge per line, `u v` or `u v w`, 0-indexed, whitespace
//! separated. Lines starting with `#` are comments, except a `# n=<N>` header
//! which fixes the node count. Otherwise `n` is one more than the largest id.
//!
//! Similarity matrices: `n` comma-separated rows of `n` decimals.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use log::warn;
use smcc_core::data::{GraphData, SimilarityData};

use crate::error::{Error, Result};

/// Reports symmetry and diagonal deviations above this.
const SIMILARITY_TOLERANCE: f64 = 1e-6;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_edge_list(path: &Path, weighted: bool) -> Result<GraphData> {
    parse_edge_list(&read(path)?, weighted, path)
}

pub fn parse_edge_list(text: &str, weighted: bool, path: &Path) -> Result<GraphData> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut declared_n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("n=") {
                let n = value
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| parse_err(line_no, format!("bad node count `{value}`: {e}")))?;
                declared_n = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let id = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(line_no, format!("bad node id `{s}`: {e}")))
        };
        match (fields.as_slice(), weighted) {
            ([u, v], false) => edges.push((id(u)?, id(v)?)),
            ([u, v], true) => {
                edges.push((id(u)?, id(v)?));
                weights.push(1.0);
            }
            ([u, v, w], _) => {
                edges.push((id(u)?, id(v)?));
                let w: f64 = w
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad weight `{w}`: {e}")))?;
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Validation(format!(
                        "{}:{line_no}: weight {w} is not a finite non-negative number",
                        path.display()
                    )));
                }
                weights.push(w);
            }
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("expected `u v` or `u v w`, got `{line}`"),
                ))
            }
        }
    }
    let max_id = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) if n < max_id => {
            return Err(Error::Validation(format!(
                "{}: header declares n={n} but ids reach {}",
                path.display(),
                max_id - 1
            )))
        }
        Some(n) => n,
        None => max_id,
    };
    let weights = weighted.then_some(weights);
    let (graph, dropped) = GraphData::new(n, edges, weights)?;
    if dropped > 0 {
        warn!("{}: dropped {dropped} self-loop(s)", path.display());
    }
    Ok(graph)
}

/// Writes `graph` with an `n=` header so isolated trailing nodes survive a
/// round trip.
pub fn write_edge_list(path: &Path, graph: &GraphData) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let result = (|| -> std::io::Result<()> {
        writeln!(out, "# n={}", graph.n)?;
        for (i, &(u, v)) in graph.edges.iter().enumerate() {
            match &graph.weights {
                Some(w) => writeln!(out, "{u} {v} {}", w[i])?,
                None => writeln!(out, "{u} {v}")?,
            }
        }
        out.flush()
    })();
    result.map_err(|e| Error::io(path, e))
}

pub fn load_similarity_csv(path: &Path) -> Result<SimilarityData> {
    parse_similarity_csv(&read(path)?, path)
}

pub fn parse_similarity_csv(text: &str, path: &Path) -> Result<SimilarityData> {
    let mut matrix = Vec::new();
    let mut width: Option<usize> = None;
    let mut rows = 0;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut count = 0;
        for cell in line.split(',') {
            let cell = cell.trim();
            let x: f64 = cell.parse().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("bad similarity `{cell}`: {e}"),
            })?;
            matrix.push(x);
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: format!("row has {count} columns, expected {w}"),
                })
            }
            Some(_) => {}
        }
        rows += 1;
    }
    if width.unwrap_or(0) != rows {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows,
            message: format!("matrix is {rows}×{}, expected square", width.unwrap_or(0)),
        });
    }
    let (data, clamped) = SimilarityData::from_matrix(rows, matrix)?;
    if clamped > 0 {
        warn!("{}: clamped {clamped} negative similarities to 0", path.display());
    }
    let (asym, diag) = data.asymmetry();
    if asym > SIMILARITY_TOLERANCE {
        warn!("{}: matrix is not symmetric (max deviation {asym})", path.display());
    }
    if diag > SIMILARITY_TOLERANCE {
        warn!("{}: diagonal deviates from 1 by up to {diag}", path.display());
    }
    Ok(data)
}

/// Writes the dense form with shortest round-trip decimals.
pub fn write_similarity_csv(path: &Path, data: &SimilarityData) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let n = data.n();
    let result = (|| -> std::io::Result<()> {
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    out.write_all(b",")?;
                }
                write!(out, "{}", data.get(i, j))?;
            }
            out.write_all(b"\n")?;
        }
        out.flush()
    })();
    result.map_err(|e| Error::io(path, e))
}
