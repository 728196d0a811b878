//! JSON file formats. Rationals are always `"p/q"` strings and nodes use the
//! textual node syntax (`"eps"`, bit strings, or dotted naturals).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructions::DefianceTranscript;
use crate::dual::{SetId, SliceSpec, WeakNbhdSpec};
use crate::error::{Error, Result};
use crate::functional::{BranchPart, Functional};
use crate::norm::NormCertificate;
use crate::rational::{self, Rational};
use crate::tree::{Branch, Chain, NodeId, TreeKind};
use crate::vector::FinVector;

#[derive(Serialize, Deserialize)]
struct Entry {
    node: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct Override {
    depth: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct BranchDto {
    prefix: String,
    period: String,
    #[serde(default)]
    overrides: Vec<Override>,
    tail: String,
}

#[derive(Serialize, Deserialize)]
struct FunctionalDto {
    #[serde(default)]
    finite: Vec<Entry>,
    #[serde(default)]
    branches: Vec<BranchDto>,
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(malformed)
}

pub fn node_str(t: &NodeId, kind: TreeKind) -> String {
    t.display(kind)
}

fn word_str(w: &[u32], kind: TreeKind) -> String {
    NodeId::from_word(w.to_vec()).display(kind)
}

fn entries(map: &BTreeMap<NodeId, Rational>, kind: TreeKind) -> Vec<Entry> {
    map.iter().map(|(t, q)| Entry { node: node_str(t, kind), coeff: rational::format(q) }).collect()
}

fn parse_entries(es: &[Entry], kind: TreeKind) -> Result<Vec<(NodeId, Rational)>> {
    es.iter().map(|e| Ok((NodeId::parse(&e.node, kind)?, rational::parse(&e.coeff)?))).collect()
}

pub fn vector_to_json(x: &FinVector) -> Value {
    serde_json::to_value(entries(x.entries(), x.kind())).expect("plain data")
}

pub fn vector_from_json(v: &Value, kind: TreeKind) -> Result<FinVector> {
    let es: Vec<Entry> = from_value(v)?;
    FinVector::from_entries(kind, parse_entries(&es, kind)?)
}

pub fn nodes_to_json(ts: impl IntoIterator<Item = impl std::borrow::Borrow<NodeId>>, kind: TreeKind) -> Value {
    Value::Array(ts.into_iter().map(|t| Value::String(node_str(t.borrow(), kind))).collect())
}

pub fn nodes_from_json(v: &Value, kind: TreeKind) -> Result<Vec<NodeId>> {
    let ss: Vec<String> = from_value(v)?;
    ss.iter().map(|s| NodeId::parse(s, kind)).collect()
}

pub fn norm_to_json(value: &Rational, cert: &NormCertificate, kind: TreeKind) -> Value {
    json!({ "value": rational::format(value), "certificate": nodes_to_json(&cert.set, kind) })
}

pub fn functional_to_json(f: &Functional) -> Value {
    let kind = f.kind();
    let dto = FunctionalDto {
        finite: entries(f.finite_part(), kind),
        branches: f
            .branch_parts()
            .iter()
            .map(|p| BranchDto {
                prefix: word_str(p.branch.prefix(), kind),
                period: word_str(p.branch.period(), kind),
                overrides: p
                    .overrides
                    .iter()
                    .map(|(d, q)| Override { depth: *d, coeff: rational::format(q) })
                    .collect(),
                tail: rational::format(&p.tail),
            })
            .collect(),
    };
    serde_json::to_value(dto).expect("plain data")
}

pub fn functional_from_json(v: &Value, kind: TreeKind) -> Result<Functional> {
    let dto: FunctionalDto = from_value(v)?;
    let mut finite = BTreeMap::new();
    for (t, q) in parse_entries(&dto.finite, kind)? {
        *finite.entry(t).or_insert_with(|| rational::int(0)) += q;
    }
    let branches = dto
        .branches
        .iter()
        .map(|b| {
            let prefix = NodeId::parse(&b.prefix, kind)?.word().to_vec();
            let period = NodeId::parse(&b.period, kind)?.word().to_vec();
            let overrides = b
                .overrides
                .iter()
                .map(|o| Ok((o.depth, rational::parse(&o.coeff)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(BranchPart { branch: Branch::new(prefix, period)?, overrides, tail: rational::parse(&b.tail)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Functional::new(kind, finite, branches)
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Malformed(format!("missing field {key:?}")))
}

fn get_rational(v: &Value, key: &str) -> Result<Rational> {
    match get(v, key)? {
        Value::String(s) => rational::parse(s),
        other => Err(Error::Malformed(format!("field {key:?} must be a \"p/q\" string, got {other}"))),
    }
}

fn get_set(v: &Value) -> Result<SetId> {
    match get(v, "set")? {
        Value::String(s) => SetId::parse(s),
        other => Err(Error::Malformed(format!("set must be a string, got {other}"))),
    }
}

pub fn slice_to_json(s: &SliceSpec) -> Value {
    json!({ "set": s.set.name(), "functional": functional_to_json(&s.f), "delta": rational::format(&s.delta) })
}

pub fn slice_from_json(v: &Value, kind: TreeKind) -> Result<SliceSpec> {
    SliceSpec::new(get_set(v)?, functional_from_json(get(v, "functional")?, kind)?, get_rational(v, "delta")?)
}

pub fn nbhd_to_json(w: &WeakNbhdSpec) -> Value {
    json!({
        "set": w.set.name(),
        "center": vector_to_json(&w.center),
        "constraints": w.constraints.iter().map(|(f, e)| json!({
            "functional": functional_to_json(f),
            "eps": rational::format(e),
        })).collect::<Vec<_>>(),
    })
}

pub fn nbhd_from_json(v: &Value, kind: TreeKind) -> Result<WeakNbhdSpec> {
    let constraints = match get(v, "constraints")? {
        Value::Array(cs) => cs
            .iter()
            .map(|c| Ok((functional_from_json(get(c, "functional")?, kind)?, get_rational(c, "eps")?)))
            .collect::<Result<Vec<_>>>()?,
        other => return Err(Error::Malformed(format!("constraints must be an array, got {other}"))),
    };
    WeakNbhdSpec::new(get_set(v)?, vector_from_json(get(v, "center")?, kind)?, constraints)
}

/// A list of slices or neighbourhoods, either a bare array or `{"slices": [...]}`
/// / `{"nbhds": [...]}`.
pub fn list_from_json<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    match v {
        Value::Array(a) => Ok(a),
        Value::Object(_) => match get(v, key)? {
            Value::Array(a) => Ok(a),
            other => Err(Error::Malformed(format!("{key:?} must be an array, got {other}"))),
        },
        other => Err(Error::Malformed(format!("expected an array, got {other}"))),
    }
}

pub fn rows_from_json(v: &Value) -> Result<Vec<Vec<Rational>>> {
    let rows = list_from_json(v, "rows")?;
    rows.iter()
        .map(|r| {
            let cells: Vec<Value> = from_value(r)?;
            cells
                .iter()
                .map(|c| match c {
                    Value::String(s) => rational::parse(s),
                    Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().expect("checked"))),
                    other => Err(Error::Malformed(format!("bad entry {other}"))),
                })
                .collect()
        })
        .collect()
}

pub fn transcript_to_json(t: &DefianceTranscript, kind: TreeKind) -> Value {
    json!({
        "elements": t.elements.iter().map(vector_to_json).collect::<Vec<_>>(),
        "signs": t.signs,
        "chain": nodes_to_json(t.chain.nodes(), kind),
        "separator": functional_to_json(&t.separator),
        "gap": rational::format(&t.gap),
    })
}

pub fn transcript_from_json(v: &Value, kind: TreeKind) -> Result<DefianceTranscript> {
    let elements = match get(v, "elements")? {
        Value::Array(es) => es.iter().map(|e| vector_from_json(e, kind)).collect::<Result<Vec<_>>>()?,
        other => return Err(Error::Malformed(format!("elements must be an array, got {other}"))),
    };
    Ok(DefianceTranscript {
        elements,
        signs: from_value(get(v, "signs")?)?,
        chain: Chain::new(nodes_from_json(get(v, "chain")?, kind)?)?,
        separator: functional_from_json(get(v, "separator")?, kind)?,
        gap: get_rational(v, "gap")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn vector_roundtrip() {
        let x = FinVector::binary(&[("eps", ratio(1, 2)), ("01", int(-3))]);
        let v = vector_to_json(&x);
        assert_eq!(v, json!([{"node": "eps", "coeff": "1/2"}, {"node": "01", "coeff": "-3/1"}]));
        assert_eq!(vector_from_json(&v, TreeKind::Binary).unwrap(), x);
    }

    #[test]
    fn functional_roundtrip() {
        let v = json!({
            "finite": [{"node": "0", "coeff": "1/3"}],
            "branches": [{"prefix": "1", "period": "01", "overrides": [{"depth": 2, "coeff": "5"}], "tail": "1/4"}]
        });
        let f = functional_from_json(&v, TreeKind::Binary).unwrap();
        assert_eq!(f.coefficient(&NodeId::bits("10")), int(5));
        assert_eq!(functional_from_json(&functional_to_json(&f), TreeKind::Binary).unwrap(), f);
    }

    #[test]
    fn malformed_inputs() {
        assert!(vector_from_json(&json!([{"node": "2", "coeff": "1"}]), TreeKind::Binary).is_err());
        assert!(vector_from_json(&json!([{"node": "0", "coeff": "1/0"}]), TreeKind::Binary).is_err());
        assert!(slice_from_json(&json!({"set": "Q", "functional": {}, "delta": "1/2"}), TreeKind::Binary).is_err());
    }
}
