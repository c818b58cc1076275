use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{Chain, ChainJson, WeightedComplex};
use crate::corpus::Surface;
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::number::{format_q, parse_q, Q};
use crate::slicing::VertexFunction;

/// Complex file: generating simplices plus an optional length source.
///
/// Numbers may be JSON numbers, strings such as `"3/4"`, or report objects
/// with an `exact` field. Without lengths, coordinates or a metric every
/// simplex has weight one unless given explicitly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertex_count: usize,
    pub simplices: Vec<SimplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_lengths: Option<Vec<EdgeLengthJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexJson {
    pub vertices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeLengthJson {
    pub edge: [usize; 2],
    pub length: Value,
}

/// Chain file; the complex may be embedded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainFile {
    #[serde(flatten)]
    pub chain: ChainJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexJson>,
}

pub fn value_to_q(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => parse_q(&n.to_string()),
        Value::String(s) => parse_q(s),
        Value::Object(o) => match o.get("exact") {
            Some(Value::String(s)) => parse_q(s),
            _ => Err(Error::Parse("number object without an exact field".into())),
        },
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

pub fn q_to_value(q: &Q) -> Value {
    if q.is_integer() {
        if let Ok(n) = format_q(q).parse::<i64>() {
            return Value::from(n);
        }
    }
    Value::String(format_q(q))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::ParseAt { line: e.line(), message: e.to_string() }
}

impl ComplexJson {
    pub fn build(&self) -> Result<WeightedComplex> {
        let mut b = WeightedComplex::builder(self.vertex_count).simplices(self.simplices.iter().map(|s| &s.vertices));
        for s in &self.simplices {
            if let Some(w) = &s.weight {
                b = b.weight(&s.vertices, value_to_q(w)?);
            }
        }
        if let Some(edges) = &self.edge_lengths {
            let map = edges
                .iter()
                .map(|e| Ok(((e.edge[0], e.edge[1]), value_to_q(&e.length)?)))
                .collect::<Result<HashMap<_, _>>>()?;
            b = b.edge_lengths(map);
        }
        if let Some(rows) = &self.metric {
            let dist = rows.iter().map(|r| r.iter().map(value_to_q).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
            b = b.metric(Arc::new(FiniteMetricSpace::new(dist)?));
        }
        if let Some(c) = &self.coords {
            b = b.coords(c.clone());
        }
        b.build()
    }

    /// Lists every simplex of positive dimension, with the metric when the complex has one.
    pub fn from_complex(c: &WeightedComplex) -> Self {
        let simplices = (1..=c.top_dim())
            .flat_map(|d| c.simplices(d).iter().map(|s| SimplexJson { vertices: s.vertices().to_vec(), weight: None }))
            .collect();
        ComplexJson {
            vertex_count: c.vertex_count(),
            simplices,
            edge_lengths: None,
            metric: c.metric().map(|m| (0..m.len()).map(|i| m.row(i).iter().map(q_to_value).collect()).collect()),
            coords: c.coords().map(<[Vec<f64>]>::to_vec),
        }
    }

    pub fn from_surface(s: &Surface) -> Self {
        let simplices = s
            .triangles
            .iter()
            .enumerate()
            .map(|(i, t)| SimplexJson {
                vertices: t.to_vec(),
                weight: s.areas.as_ref().map(|a| q_to_value(&a[i])),
            })
            .collect();
        let mut edges: Vec<_> = s.edge_lengths.iter().collect();
        edges.sort_by_key(|(e, _)| **e);
        ComplexJson {
            vertex_count: s.vertex_count,
            simplices,
            edge_lengths: Some(edges.into_iter().map(|(e, l)| EdgeLengthJson { edge: [e.0, e.1], length: q_to_value(l) }).collect()),
            metric: None,
            coords: s.coords.clone(),
        }
    }
}

pub fn parse_complex_json(text: &str) -> Result<WeightedComplex> {
    let json: ComplexJson = serde_json::from_str(text).map_err(json_error)?;
    json.build()
}

/// Reads a chain, placing it on `complex` when given, else on the embedded
/// complex, else on the complex generated by its own simplices with unit weights.
pub fn parse_chain_json(text: &str, complex: Option<&Arc<WeightedComplex>>) -> Result<Chain> {
    let file: ChainFile = serde_json::from_str(text).map_err(json_error)?;
    let complex = match (complex, &file.complex) {
        (Some(c), _) => c.clone(),
        (None, Some(c)) => Arc::new(c.build()?),
        (None, None) => {
            let n = file.chain.coeffs.iter().flat_map(|(v, _)| v.iter().map(|&x| x + 1)).max().unwrap_or(1);
            Arc::new(WeightedComplex::builder(n).simplices(file.chain.coeffs.iter().map(|(v, _)| v)).build()?)
        }
    };
    Chain::from_json(&complex, &file.chain)
}

/// Reads vertex values: an array, `{"values": [...]}`, or an object keyed by vertex index.
pub fn parse_function_json(text: &str, vertex_count: usize) -> Result<VertexFunction> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let values = match &v {
        Value::Array(a) => a.iter().map(value_to_q).collect::<Result<Vec<_>>>()?,
        Value::Object(o) if o.contains_key("values") => match &o["values"] {
            Value::Array(a) => a.iter().map(value_to_q).collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::Parse("values must be an array".into())),
        },
        Value::Object(o) => {
            let mut out: Vec<Option<Q>> = vec![None; vertex_count];
            for (k, x) in o {
                let i: usize = k.parse().map_err(|_| Error::Parse(format!("bad vertex key {k:?}")))?;
                let slot = out.get_mut(i).ok_or_else(|| Error::Parse(format!("vertex {i} out of range")))?;
                *slot = Some(value_to_q(x)?);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, x)| x.ok_or_else(|| Error::Parse(format!("no value for vertex {i}"))))
                .collect::<Result<Vec<_>>>()?
        }
        _ => return Err(Error::Parse("expected an array or object of vertex values".into())),
    };
    if values.len() != vertex_count {
        return Err(Error::Parse(format!("expected {vertex_count} values, found {}", values.len())));
    }
    Ok(VertexFunction::new(values))
}
