//! File formats: domain and graph JSON, spectrum and DtN CSV, report JSON,
//! sweep CSV.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::lattice::LatticeDomain;
use crate::record::{Relation, VerificationRecord};
use crate::spectral::{DtNOperator, Spectrum};

/// `{"n": 2, "points": [[0,0],[1,0]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    pub n: usize,
    pub points: Vec<Vec<i32>>,
}

pub fn parse_domain(text: &str) -> Result<LatticeDomain> {
    let f: DomainFile = serde_json::from_str(text)?;
    LatticeDomain::from_coords(f.n, &f.points)
}

pub fn domain_json(d: &LatticeDomain) -> Result<String> {
    let f = DomainFile {
        n: d.dim(),
        points: d.points().iter().map(|p| p.0.clone()).collect(),
    };
    Ok(serde_json::to_string(&f)?)
}

/// `{"vertices": 3, "edges": [[0,1],[1,2]], "labels": {"0": "a"}, "omega": [1]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<usize, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<usize>>,
}

pub fn parse_graph(text: &str) -> Result<(FiniteGraph, Option<Vec<usize>>)> {
    let f: GraphFile = serde_json::from_str(text)?;
    let mut g = FiniteGraph::new(f.vertices, f.edges.iter().map(|e| (e[0], e[1])))?;
    for (v, name) in f.labels {
        if v >= f.vertices {
            return Err(Error::InvalidSpec(format!("label for missing vertex {v}")));
        }
        g.set_label(v, name);
    }
    Ok((g, f.omega))
}

pub fn graph_json(g: &FiniteGraph, omega: Option<&[usize]>) -> Result<String> {
    let f = GraphFile {
        vertices: g.vertex_count(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        labels: g
            .labels()
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.clone().map(|l| (i, l)))
            .collect(),
        omega: omega.map(<[usize]>::to_vec),
    };
    Ok(serde_json::to_string(&f)?)
}

/// Rounds to 12 significant digits and prints the shortest form, so that
/// round-off in the last bit does not leak into text output.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if rounded == 0.0 {
        "0".into()
    } else if (1e-5..1e16).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// `index,eigenvalue` with 1-based indices; eigenvalues under the zero
/// threshold are written as `0`.
pub fn spectrum_csv(spec: &Spectrum) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, &l) in spec.eigenvalues.iter().enumerate() {
        let v = if spec.is_zero(l) { 0.0 } else { l };
        out.push_str(&format!("{},{}\n", i + 1, fmt_real(v)));
    }
    out
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}

/// Row-major matrix with boundary labels (quoted) in the first row and column.
pub fn dtn_csv(op: &DtNOperator) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(op.boundary_labels.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..op.dim() {
        let mut row = vec![op.boundary_labels[i].clone()];
        row.extend((0..op.dim()).map(|j| fmt_real(op.matrix[(i, j)])));
        w.write_record(&row).map_err(csv_err)?;
    }
    csv_string(w)
}

/// Header from the field names of `T`, one row per item.
pub fn rows_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    csv_string(w)
}

/// `name,lhs,relation,rhs,margin,passed,vacuous,detail`, one row per check.
pub fn records_csv<'a>(
    records: impl IntoIterator<Item = &'a VerificationRecord>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name", "lhs", "relation", "rhs", "margin", "passed", "vacuous", "detail",
    ])
    .map_err(csv_err)?;
    for r in records {
        let relation = match r.relation {
            Relation::Le => "le",
            Relation::Ge => "ge",
        };
        w.write_record([
            r.name.as_str(),
            &fmt_real(r.lhs),
            relation,
            &fmt_real(r.rhs),
            &fmt_real(r.margin()),
            if r.passed { "true" } else { "false" },
            if r.vacuous { "true" } else { "false" },
            r.detail.as_deref().unwrap_or(""),
        ])
        .map_err(csv_err)?;
    }
    csv_string(w)
}

pub fn pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lattice_spectrum;

    #[test]
    fn domain_round_trip() {
        let d = parse_domain(r#"{"n":2,"points":[[1,0],[0,0],[1,0]]}"#).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(
            domain_json(&d).unwrap(),
            r#"{"n":2,"points":[[0,0],[1,0]]}"#
        );
        assert!(parse_domain(r#"{"n":2,"points":[]}"#).is_err());
        assert!(parse_domain(r#"{"n":2,"points":[[0,0,0]]}"#).is_err());
        assert!(parse_domain("not json").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let text = r#"{"vertices":3,"edges":[[0,1],[1,2]],"labels":{"0":"a"},"omega":[1]}"#;
        let (g, omega) = parse_graph(text).unwrap();
        assert_eq!(g.label(0), Some("a"));
        assert_eq!(omega, Some(vec![1]));
        assert_eq!(graph_json(&g, omega.as_deref()).unwrap(), text);
        assert!(parse_graph(r#"{"vertices":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn single_vertex_spectrum_csv() {
        let d = parse_domain(r#"{"n":2,"points":[[0,0]]}"#).unwrap();
        let (_, op, spec) = lattice_spectrum(&d).unwrap();
        assert_eq!(
            spectrum_csv(&spec),
            "index,eigenvalue\n1,0\n2,1\n3,1\n4,1\n"
        );
        let dtn = dtn_csv(&op).unwrap();
        let first = dtn.lines().next().unwrap();
        assert_eq!(first, r#""","(-1,0)","(0,-1)","(0,1)","(1,0)""#);
        assert_eq!(
            dtn.lines().nth(1).unwrap(),
            r#""(-1,0)",0.75,-0.25,-0.25,-0.25"#
        );
    }

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.9999999999999998), "1");
        assert_eq!(fmt_real(-1e-300), "-1e-300");
        assert_eq!(fmt_real(2.5e20), "2.5e20");
        assert_eq!(fmt_real(f64::INFINITY), "inf");
        assert_eq!(fmt_real(0.25), "0.25");
    }
}
