//! Edge-list and positions files, and atomic writes.
//!
//! Edge list:
//!
//! ```text
//! #hrg v1
//! #params N zeta alpha beta seed
//! #model disc            (threshold model only)
//! #generator KIND
//! u v                    (u < v, ascending)
//! ```
//!
//! Positions: `#hrg v1`, then `i r theta` per vertex with 17 significant
//! digits, so values reload exactly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use hrg::{GeneratorKind, Graph, ModelParams, Provenance, VertexPosition};

use crate::error::CliError;

pub const EDGES_FILE: &str = "edges.txt";
pub const POSITIONS_FILE: &str = "positions.txt";
const MAGIC: &str = "#hrg v1";

/// Writes `contents` to a temporary file beside `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with a `schema` field in front of the body's fields.
pub fn to_json<T: Serialize>(body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Versioned { schema: 1, body }).expect("serializable report");
    s.push('\n');
    s
}

pub fn edge_list(g: &Graph) -> String {
    let p = g.params();
    let prov = g.provenance();
    let mut s = String::with_capacity(16 * g.edge_count() + 128);
    writeln!(s, "{MAGIC}").unwrap();
    writeln!(s, "#params {} {} {} {} {}", p.n_vertices, p.zeta, p.alpha, p.beta, prov.seed).unwrap();
    if p.disc {
        writeln!(s, "#model disc").unwrap();
    }
    writeln!(s, "#generator {}", prov.kind).unwrap();
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn positions_list(positions: &[VertexPosition]) -> String {
    let mut s = String::with_capacity(48 * positions.len() + 16);
    writeln!(s, "{MAGIC}").unwrap();
    for (i, v) in positions.iter().enumerate() {
        writeln!(s, "{i} {:.16e} {:.16e}", v.r, v.theta).unwrap();
    }
    s
}

/// Writes `edges.txt` and `positions.txt` into `dir`.
pub fn write_graph(dir: &Path, g: &Graph) -> Result<(PathBuf, PathBuf), CliError> {
    let edges = dir.join(EDGES_FILE);
    let positions = dir.join(POSITIONS_FILE);
    write_atomic(&positions, positions_list(g.positions()).as_bytes())?;
    write_atomic(&edges, edge_list(g).as_bytes())?;
    Ok((edges, positions))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn format_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Format {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, raw: Option<&str>, what: &str) -> Result<T, CliError> {
    raw.and_then(|s| s.parse().ok())
        .ok_or_else(|| format_error(path, line, format!("bad or missing {what}")))
}

#[derive(Debug)]
struct EdgeFile {
    params: ModelParams,
    provenance: Provenance,
    edges: Vec<(usize, usize)>,
}

fn parse_edges(path: &Path, text: &str) -> Result<EdgeFile, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(format_error(path, 1, format!("expected `{MAGIC}`"))),
    }
    let mut params = None;
    let mut seed = 0;
    let mut disc = false;
    let mut kind = GeneratorKind::Naive;
    let mut edges = Vec::new();
    let mut last = None;
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut it = rest.split_whitespace();
            match it.next() {
                Some("params") => {
                    let n: usize = field(path, no, it.next(), "N")?;
                    let zeta: f64 = field(path, no, it.next(), "zeta")?;
                    let alpha: f64 = field(path, no, it.next(), "alpha")?;
                    let beta: f64 = field(path, no, it.next(), "beta")?;
                    seed = field(path, no, it.next(), "seed")?;
                    params = Some(ModelParams::new(n, zeta, alpha, beta).map_err(|e| format_error(path, no, e.to_string()))?);
                }
                Some("model") => disc = it.next() == Some("disc"),
                Some("generator") => {
                    kind = it
                        .next()
                        .unwrap_or_default()
                        .parse()
                        .map_err(|e: String| format_error(path, no, e))?;
                }
                _ => {}
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = field(path, no, it.next(), "u")?;
        let v: usize = field(path, no, it.next(), "v")?;
        if u >= v || last.is_some_and(|l| l >= (u, v)) {
            return Err(format_error(path, no, "edges must satisfy u < v in ascending order"));
        }
        last = Some((u, v));
        edges.push((u, v));
    }
    let params = params.ok_or_else(|| format_error(path, 2, "missing `#params` line"))?;
    Ok(EdgeFile {
        params: params.with_disc(disc),
        provenance: Provenance { seed, kind },
        edges,
    })
}

fn parse_positions(path: &Path, text: &str, params: &ModelParams) -> Result<Vec<VertexPosition>, CliError> {
    let mut out = Vec::with_capacity(params.n_vertices);
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let idx: usize = field(path, no, it.next(), "index")?;
        if idx != out.len() {
            return Err(format_error(path, no, format!("expected vertex {}, found {idx}", out.len())));
        }
        let r: f64 = field(path, no, it.next(), "r")?;
        let theta: f64 = field(path, no, it.next(), "theta")?;
        out.push(VertexPosition::new(r, theta, params).map_err(|e| format_error(path, no, e.to_string()))?);
    }
    Ok(out)
}

/// Reloads a graph written by [`write_graph`].
pub fn read_graph(dir: &Path) -> Result<Graph, CliError> {
    let edges_path = dir.join(EDGES_FILE);
    let positions_path = dir.join(POSITIONS_FILE);
    let ef = parse_edges(&edges_path, &read(&edges_path)?)?;
    let positions = parse_positions(&positions_path, &read(&positions_path)?, &ef.params)?;
    Graph::from_edges(ef.params, positions, ef.edges, ef.provenance).map_err(|source| CliError::Graph {
        path: dir.to_path_buf(),
        source,
    })
}
