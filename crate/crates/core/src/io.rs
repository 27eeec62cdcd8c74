//! Polyhedron files.
//!
//! JSON: `{"n": 6, "faces": [[1,2,5], ...], "coords": [[["1","1"],["0","1"],["0","1"]], ...],
//! "representation": "exact"}`; floating files carry plain numbers per
//! coordinate. Face indices in files are 1-based.
//! OFF: standard header, floating coordinates, triangles only.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::embedding::{AnyEmbedding, Embedding, Representation};
use crate::error::LoadError;
use crate::numeric::{parse_rational_pair, Rational};
use crate::surface::CombinatorialSurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Json,
    Off,
}

impl FileFormat {
    /// By extension: `.off` is OFF, anything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("off") => FileFormat::Off,
            _ => FileFormat::Json,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PolyhedronFile {
    n: usize,
    faces: Vec<[usize; 3]>,
    coords: Vec<Value>,
    representation: Representation,
}

fn parse_err(msg: impl Into<String>) -> LoadError {
    LoadError::Parse(msg.into())
}

fn faces_from_one_based(n: usize, faces: &[[usize; 3]]) -> Result<CombinatorialSurface, LoadError> {
    Ok(CombinatorialSurface::from_one_based(n, faces)?)
}

fn exact_coordinate(v: &Value) -> Result<Rational, LoadError> {
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| parse_err("exact coordinate must be [num, den]"))?;
    let s = |x: &Value| -> Result<String, LoadError> {
        match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
            _ => Err(parse_err("rational parts must be integer strings")),
        }
    };
    parse_rational_pair(&s(&pair[0])?, &s(&pair[1])?).ok_or_else(|| parse_err(format!("bad rational {v}")))
}

/// Parses the JSON polyhedron format.
pub fn parse_json(text: &str) -> Result<(CombinatorialSurface, AnyEmbedding), LoadError> {
    let file: PolyhedronFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    if file.coords.len() != file.n {
        return Err(parse_err(format!("{} coordinate rows for n = {}", file.coords.len(), file.n)));
    }
    let surface = faces_from_one_based(file.n, &file.faces)?;
    let rows = file
        .coords
        .iter()
        .map(|row| row.as_array().filter(|r| r.len() == 3).ok_or_else(|| parse_err("each vertex needs 3 coordinates")))
        .collect::<Result<Vec<_>, _>>()?;
    let embedding = match file.representation {
        Representation::Exact => {
            let coords = rows
                .iter()
                .map(|r| Ok([exact_coordinate(&r[0])?, exact_coordinate(&r[1])?, exact_coordinate(&r[2])?]))
                .collect::<Result<Vec<_>, LoadError>>()?;
            AnyEmbedding::Exact(Embedding::new(coords))
        }
        Representation::Floating => {
            let f = |v: &Value| v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| parse_err("floating coordinate expected"));
            let coords = rows.iter().map(|r| Ok([f(&r[0])?, f(&r[1])?, f(&r[2])?])).collect::<Result<Vec<_>, LoadError>>()?;
            AnyEmbedding::Floating(Embedding::new(coords))
        }
    };
    Ok((surface, embedding))
}

/// Serializes to the JSON polyhedron format (pretty-printed, trailing newline).
pub fn to_json(surface: &CombinatorialSurface, embedding: &AnyEmbedding) -> String {
    let coords: Vec<Value> = match embedding {
        AnyEmbedding::Exact(e) => e
            .coords()
            .iter()
            .map(|p| {
                Value::Array(
                    p.iter()
                        .map(|c| Value::Array(vec![Value::String(c.numer().to_string()), Value::String(c.denom().to_string())]))
                        .collect(),
                )
            })
            .collect(),
        AnyEmbedding::Floating(e) => e.coords().iter().map(|p| serde_json::json!([p[0], p[1], p[2]])).collect(),
    };
    let file = PolyhedronFile {
        n: surface.vertex_count(),
        faces: surface.faces_one_based(),
        coords,
        representation: embedding.representation(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

/// Parses an OFF file with triangular faces.
pub fn parse_off(text: &str) -> Result<(CombinatorialSurface, AnyEmbedding), LoadError> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    match tokens.next() {
        Some("OFF") => {}
        _ => return Err(parse_err("missing OFF header")),
    }
    let mut next_num = |what: &str| -> Result<String, LoadError> {
        tokens.next().map(str::to_string).ok_or_else(|| parse_err(format!("unexpected end of file reading {what}")))
    };
    let int = |s: String| s.parse::<usize>().map_err(|_| parse_err(format!("bad integer `{s}`")));
    let nv = int(next_num("vertex count")?)?;
    let nf = int(next_num("face count")?)?;
    let _ne = int(next_num("edge count")?)?;
    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut p = [0.0; 3];
        for c in p.iter_mut() {
            let s = next_num("coordinate")?;
            *c = s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| parse_err(format!("bad coordinate `{s}`")))?;
        }
        coords.push(p);
    }
    let mut faces = Vec::with_capacity(nf);
    for k in 0..nf {
        let m = int(next_num("face size")?)?;
        if m != 3 {
            return Err(parse_err(format!("face {} has {m} vertices; only triangles are accepted", k + 1)));
        }
        let mut f = [0usize; 3];
        for v in f.iter_mut() {
            let i = int(next_num("face index")?)?;
            *v = i + 1;
        }
        faces.push(f);
    }
    let surface = faces_from_one_based(nv, &faces)?;
    Ok((surface, AnyEmbedding::Floating(Embedding::new(coords))))
}

/// Serializes to OFF (floating coordinates).
pub fn to_off(surface: &CombinatorialSurface, embedding: &AnyEmbedding) -> String {
    let e = embedding.to_floating();
    let mut s = format!("OFF\n{} {} {}\n", surface.vertex_count(), surface.faces().len(), surface.edges().len());
    for p in e.coords() {
        s.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
    }
    for f in surface.faces() {
        s.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
    }
    s
}

pub fn load_polyhedron(path: &Path) -> Result<(CombinatorialSurface, AnyEmbedding), LoadError> {
    let text = std::fs::read_to_string(path)?;
    match FileFormat::from_path(path) {
        FileFormat::Json => parse_json(&text),
        FileFormat::Off => parse_off(&text),
    }
}

pub fn save_polyhedron(path: &Path, surface: &CombinatorialSurface, embedding: &AnyEmbedding) -> Result<(), LoadError> {
    let text = match FileFormat::from_path(path) {
        FileFormat::Json => to_json(surface, embedding),
        FileFormat::Off => to_off(surface, embedding),
    };
    std::fs::write(path, text)?;
    Ok(())
}
