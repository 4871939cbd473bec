//! JSON files for graphs, networks, webs, polynomials and matrices.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::dimers::{Network, NetworkJson};
use crate::plabic::{PlabicGraph, PlabicJson};
use crate::plucker::{MatrixPoint, PluckerPoly, PolyTermJson};
use crate::subsets::parse_rational;
use crate::webs::{Web, WebJson};
use crate::{Error, Result, Q};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_pretty(value)?)?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<PlabicGraph> {
    PlabicGraph::from_json(&read_json::<PlabicJson>(path)?)
}

/// A network file, or a bare graph file (read with unit weights).
pub fn read_network(path: &Path) -> Result<Network> {
    let v: Value = read_json(path)?;
    if v.get("graph").is_some() {
        Network::from_json(&serde_json::from_value::<NetworkJson>(v)?)
    } else {
        Ok(Network::unit(PlabicGraph::from_json(&serde_json::from_value::<PlabicJson>(v)?)?))
    }
}

pub fn read_web(path: &Path) -> Result<Web> {
    Web::from_json(&read_json::<WebJson>(path)?)
}

pub fn write_web(path: &Path, w: &Web) -> Result<()> {
    write_json(path, &w.to_json())
}

/// Webs from every `*.json` file of a directory, in file-name order.
pub fn read_web_dir(dir: &Path) -> Result<Vec<(PathBuf, Web)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Parse(format!("no web files in {}", dir.display())));
    }
    paths.into_iter().map(|p| read_web(&p).map(|w| (p, w))).collect()
}

/// File name of a basis web: its Yamanouchi word.
pub fn basis_file_name(w: &Web) -> Result<String> {
    let word = w.tableau_of_web()?.yamanouchi_word();
    Ok(format!("{}.json", word.iter().map(|d| char::from(b'0' + d)).collect::<String>()))
}

/// Write one file per web, keyed by Yamanouchi word; returns the names.
pub fn write_basis_dir(dir: &Path, webs: &[Web]) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::with_capacity(webs.len());
    for w in webs {
        let name = basis_file_name(w)?;
        write_web(&dir.join(&name), w)?;
        names.push(name);
    }
    Ok(names)
}

/// A polynomial as a list of terms; `k` and `n` override inference.
pub fn read_poly(path: &Path, k: Option<usize>, n: Option<usize>) -> Result<PluckerPoly> {
    PluckerPoly::from_json_terms(&read_json::<Vec<PolyTermJson>>(path)?, k, n)
}

pub fn write_poly(path: &Path, f: &PluckerPoly) -> Result<()> {
    write_json(path, &f.to_json_terms())
}

fn scalar(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(x) => parse_rational(&x.to_string()),
        other => Err(Error::Parse(format!("matrix entry {other} is not a number"))),
    }
}

/// A `k x n` matrix, either a bare array of rows or `{"rows": [...]}`;
/// entries are integers or `"p/q"` strings.
pub fn parse_matrix(v: &Value) -> Result<MatrixPoint> {
    let rows = v.get("rows").unwrap_or(v);
    let rows = rows.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(scalar)
                .collect::<Result<Vec<Q>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixPoint::new(parsed)
}

pub fn read_matrix(path: &Path) -> Result<MatrixPoint> {
    parse_matrix(&read_json(path)?)
}

pub fn matrix_to_json(m: &MatrixPoint) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basisgen::sl3_basis;
    use crate::plabic::make_rectangle_graph;
    use crate::rng::Rng;

    #[test]
    fn basis_dir_round_trip() {
        let dir = std::env::temp_dir().join(format!("webdimer-io-{}", std::process::id()));
        let webs = sl3_basis(&[1; 6]).unwrap();
        let names = write_basis_dir(&dir, &webs).unwrap();
        assert!(names.contains(&"112233.json".to_string()));
        let back = read_web_dir(&dir).unwrap();
        assert_eq!(back.len(), 5);
        for (_, w) in &back {
            assert!(webs.iter().any(|x| x.canonical_key() == w.canonical_key()));
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn matrix_and_network_parsing() {
        let v: Value = serde_json::from_str(r#"[[1, "1/2", 0], [0, 1, "-3"]]"#).unwrap();
        let m = parse_matrix(&v).unwrap();
        assert_eq!((m.k(), m.n()), (2, 3));
        assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap().rows(), m.rows());
        assert!(parse_matrix(&serde_json::json!({"rows": [[1, true]]})).is_err());

        let g = make_rectangle_graph(2, 4).unwrap();
        let net = Network::random(g.clone(), &mut Rng::new(1), 5);
        let dir = std::env::temp_dir().join(format!("webdimer-net-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        write_json(&dir.join("n.json"), &net.to_json()).unwrap();
        write_json(&dir.join("g.json"), &g.to_json()).unwrap();
        let back = read_network(&dir.join("n.json")).unwrap();
        assert_eq!(back.to_json().weights, net.to_json().weights);
        let unit = read_network(&dir.join("g.json")).unwrap();
        assert!(unit.weight(0) == &Q::from_integer(1.into()));
        fs::remove_dir_all(&dir).unwrap();
    }
}
