//! JSON forms of graphs, series and results. Vertex indices are 1-based;
//! exact rationals travel as decimal numerator/denominator strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colored_graph::{ColoredGraph, GraphKey, MarkedGraph, MarkedKey, Vertex};
use crate::error::{Error, Result};
use crate::flow::{EffectiveCouplings, Seed};
use crate::poly::{Poly, Rational};
use crate::wick_series::{CouplingSeries, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(rename = "D")]
    pub d: usize,
    pub p: usize,
    pub sigma: Vec<Vec<usize>>,
    #[serde(default)]
    pub loops: usize,
    /// Canonical key; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
}

impl GraphJson {
    pub fn from_graph(g: &ColoredGraph) -> Self {
        GraphJson {
            d: g.d(),
            p: g.p(),
            sigma: g.sigma().iter().map(|row| row.iter().map(|&x| x + 1).collect()).collect(),
            loops: g.loops(),
            key: Some(g.canonical_form().to_hex()),
        }
    }

    pub fn to_graph(&self) -> Result<ColoredGraph> {
        ColoredGraph::from_one_based(self.d, self.p, &self.sigma, self.loops)
    }
}

/// A graph given either as an object or as a canonical key string.
pub fn graph_from_value(v: &Value) -> Result<ColoredGraph> {
    match v {
        Value::String(s) => Ok(GraphKey::from_hex(s)?.decode()),
        _ => {
            let g: GraphJson = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("graph: {e}")))?;
            g.to_graph()
        }
    }
}

pub fn graph_to_value(g: &ColoredGraph) -> Value {
    serde_json::to_value(GraphJson::from_graph(g)).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    /// "white" or "black".
    pub color: String,
    pub index: usize,
}

impl VertexJson {
    pub fn from_vertex(v: Vertex) -> Self {
        let color = if v.is_white() { "white" } else { "black" };
        VertexJson { color: color.into(), index: v.index() + 1 }
    }

    pub fn to_vertex(&self) -> Result<Vertex> {
        if self.index == 0 {
            return Err(Error::Input("vertex indices are 1-based".into()));
        }
        match self.color.as_str() {
            "white" | "w" => Ok(Vertex::White(self.index - 1)),
            "black" | "b" => Ok(Vertex::Black(self.index - 1)),
            c => Err(Error::Input(format!("vertex color {c:?}, expected white or black"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedJson {
    pub graph: GraphJson,
    pub vertex: VertexJson,
}

pub fn marked_to_value(m: &MarkedGraph) -> Value {
    let j = MarkedJson { graph: GraphJson::from_graph(&m.graph), vertex: VertexJson::from_vertex(m.vertex) };
    serde_json::to_value(j).unwrap()
}

/// A marked graph given either as an object or as a marked key string.
pub fn marked_from_value(v: &Value) -> Result<MarkedGraph> {
    match v {
        Value::String(s) => Ok(MarkedKey::from_hex(s)?.decode()),
        _ => {
            let m: MarkedJson = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("marked graph: {e}")))?;
            MarkedGraph::new(m.graph.to_graph()?, m.vertex.to_vertex()?)
        }
    }
}

pub fn rational_to_value(r: &Rational) -> Value {
    serde_json::json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

pub fn rational_from_value(v: &Value) -> Result<Rational> {
    let field = |name: &str| -> Result<BigInt> {
        let s = match v.get(name) {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            None if name == "den" => "1".into(),
            _ => return Err(Error::Input(format!("rational: missing {name:?}"))),
        };
        s.parse().map_err(|_| Error::Input(format!("rational: bad {name} {s:?}")))
    };
    let (num, den) = (field("num")?, field("den")?);
    if den.is_zero() {
        return Err(Error::Input("rational: zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

fn poly_to_value(p: &Poly, with_t: bool) -> Value {
    Value::Array(
        p.terms()
            .map(|(n, t, c)| {
                let mut o = serde_json::Map::new();
                o.insert("N_exp".into(), n.into());
                if with_t {
                    o.insert("t_exp".into(), t.into());
                }
                o.insert("num".into(), c.numer().to_string().into());
                o.insert("den".into(), c.denom().to_string().into());
                Value::Object(o)
            })
            .collect(),
    )
}

fn poly_from_value(v: &Value) -> Result<Poly> {
    let items = v.as_array().ok_or_else(|| Error::Input("coeff: expected a list".into()))?;
    let mut p = Poly::zero();
    for (i, it) in items.iter().enumerate() {
        let exp = |name: &str| -> Result<u32> {
            match it.get(name) {
                None if name == "t_exp" => Ok(0),
                Some(x) => x.as_u64().map(|x| x as u32).ok_or_else(|| Error::Input(format!("coeff[{i}].{name}: expected an integer"))),
                None => Err(Error::Input(format!("coeff[{i}]: missing {name}"))),
            }
        };
        p.add_term(rational_from_value(it)?, exp("N_exp")?, exp("t_exp")?);
    }
    Ok(p)
}

fn monomial_to_value(m: &Monomial) -> Value {
    Value::Array(m.iter().map(|(k, e)| serde_json::json!({"graph": k.to_hex(), "power": e})).collect())
}

fn monomial_from_value(v: &Value) -> Result<Monomial> {
    let items = v.as_array().ok_or_else(|| Error::Input("monomial: expected a list".into()))?;
    let mut keys = Vec::new();
    for it in items {
        let key = it.get("graph").and_then(Value::as_str).ok_or_else(|| Error::Input("monomial: missing graph".into()))?;
        let power = it.get("power").and_then(Value::as_u64).unwrap_or(1);
        let key = GraphKey::from_hex(key)?;
        keys.extend(std::iter::repeat(key).take(power as usize));
    }
    Ok(Monomial::from_keys(keys))
}

pub fn series_to_value(s: &CouplingSeries) -> Value {
    Value::Array(
        s.terms()
            .map(|(m, c)| serde_json::json!({"monomial": monomial_to_value(m), "coeff": poly_to_value(c, false)}))
            .collect(),
    )
}

pub fn series_from_value(v: &Value, max_order: usize) -> Result<CouplingSeries> {
    let items = v.as_array().ok_or_else(|| Error::Input("series: expected a list".into()))?;
    let mut s = CouplingSeries::zero(max_order);
    for it in items {
        let m = monomial_from_value(it.get("monomial").unwrap_or(&Value::Null))?;
        s.add_term(m, &poly_from_value(it.get("coeff").unwrap_or(&Value::Null))?);
    }
    Ok(s)
}

/// Effective couplings as a series whose coefficients also carry `t_exp`.
pub fn couplings_to_value(ec: &EffectiveCouplings) -> Value {
    Value::Array(
        ec.iter()
            .map(|(m, c)| serde_json::json!({"monomial": monomial_to_value(m), "coeff": poly_to_value(c, true)}))
            .collect(),
    )
}

/// A seed file: `{"D": 2, "couplings": [{"graph": <graph or key>, "num": "1", "den": "1"}]}`.
pub fn seed_from_value(v: &Value) -> Result<Seed> {
    let d = v.get("D").and_then(Value::as_u64).ok_or_else(|| Error::Input("seed: missing D".into()))? as usize;
    let mut seed = Seed::new(d);
    let items = v.get("couplings").and_then(Value::as_array).ok_or_else(|| Error::Input("seed: missing couplings".into()))?;
    for (i, it) in items.iter().enumerate() {
        let g = graph_from_value(it.get("graph").unwrap_or(&Value::Null)).map_err(|e| Error::Input(format!("couplings[{i}]: {e}")))?;
        let value = rational_from_value(it).map_err(|e| Error::Input(format!("couplings[{i}]: {e}")))?;
        seed = seed.with(&g, value)?;
    }
    Ok(seed)
}

pub fn seed_to_value(seed: &Seed) -> Value {
    let couplings: Vec<Value> = seed
        .couplings
        .iter()
        .map(|(m, v)| {
            let mut o = rational_to_value(v);
            o["graph"] = graph_to_value(&m.graph(seed.d));
            o
        })
        .collect();
    serde_json::json!({"D": seed.d, "couplings": couplings})
}

/// `{"version", "command", "result"}`.
pub fn envelope(command: &str, result: Value) -> Value {
    serde_json::json!({"version": env!("CARGO_PKG_VERSION"), "command": command, "result": result})
}

pub fn map_of<K: ToString, V>(m: &BTreeMap<K, V>, f: impl Fn(&V) -> Value) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), f(v))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn graph_round_trip() {
        let g = ColoredGraph::new(3, vec![vec![0, 1, 2], vec![1, 2, 0], vec![0, 2, 1]], 2).unwrap();
        let v = graph_to_value(&g);
        assert_eq!(v["sigma"][1], serde_json::json!([2, 3, 1]));
        assert_eq!(graph_from_value(&v).unwrap(), g);
        let key = Value::String(g.canonical_form().to_hex());
        assert_eq!(graph_from_value(&key).unwrap().canonical_form(), g.canonical_form());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(graph_from_value(&serde_json::json!({"D": 2, "p": 2, "sigma": [[1, 2], [1, 1]]})).is_err());
        assert!(rational_from_value(&serde_json::json!({"num": "1", "den": "0"})).is_err());
        assert!(VertexJson { color: "red".into(), index: 1 }.to_vertex().is_err());
    }

    #[test]
    fn series_round_trip() {
        let s = crate::wick_series::partition_series(2, 4).log().unwrap();
        let v = series_to_value(&s);
        assert_eq!(series_from_value(&v, 4).unwrap(), s);
    }

    #[test]
    fn seed_round_trip() {
        let seed = Seed::dipole(2, ratio(-3, 4)).with(&ColoredGraph::necklace(2), rat(2)).unwrap();
        assert_eq!(seed_from_value(&seed_to_value(&seed)).unwrap(), seed);
    }
}
