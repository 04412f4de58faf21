//! Deterministic JSON output: keys sorted, integers emitted exactly at any
//! size.

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

use graphlink_core::{
    ConstancyReport, FormOrigin, LinearForm, NovikovModule, PresentationData, SpliceDiagram,
    StratumEntry, SweepReport, Violation,
};

use crate::dsl::DiagramDocument;

/// Exact integer as a JSON number, whatever its size.
pub fn int(value: &BigInt) -> Value {
    Value::Number(value.to_string().parse::<Number>().expect("integer literal"))
}

fn obj(fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

pub fn diagram_value(d: &SpliceDiagram) -> Value {
    obj(vec![
        (
            "vertices",
            Value::Array(d.vertices().iter().map(|v| Value::String(v.clone())).collect()),
        ),
        (
            "edges",
            Value::Array(
                d.edges()
                    .iter()
                    .map(|e| {
                        obj(vec![
                            ("id", Value::String(e.id.clone())),
                            (
                                "ends",
                                Value::Array(vec![
                                    Value::String(e.ends.0.clone()),
                                    Value::String(e.ends.1.clone()),
                                ]),
                            ),
                            (
                                "weights",
                                Value::Array(vec![int(&e.weights.0), int(&e.weights.1)]),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "arrows",
            Value::Array(
                d.arrows()
                    .iter()
                    .map(|a| {
                        obj(vec![
                            ("id", Value::String(a.id.clone())),
                            ("base", Value::String(a.base.clone())),
                            ("weight", int(&a.weight)),
                            ("multiplicity", int(&a.multiplicity)),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "stubs",
            Value::Array(
                d.stubs()
                    .iter()
                    .map(|s| {
                        obj(vec![
                            ("id", Value::String(s.id.clone())),
                            ("base", Value::String(s.base.clone())),
                            ("weight", int(&s.weight)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

pub fn document_value(doc: &DiagramDocument) -> Value {
    diagram_value(&doc.diagram)
}

pub fn module_value(m: &NovikovModule) -> Value {
    obj(vec![
        ("free_rank", Value::from(m.free_rank)),
        ("torsion", Value::Array(m.torsion.iter().map(int).collect())),
    ])
}

pub fn presentation_value(p: &PresentationData) -> Value {
    let k = p.vertex_order.len();
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        rows.push(Value::Array((0..k).map(|j| int(p.matrix.get(i, j))).collect()));
    }
    obj(vec![
        (
            "vertex_order",
            Value::Array(p.vertex_order.iter().map(|v| Value::String(v.clone())).collect()),
        ),
        ("matrix", Value::Array(rows)),
    ])
}

pub fn violations_value(violations: &[Violation]) -> Value {
    obj(vec![(
        "violations",
        Value::Array(violations.iter().map(|v| Value::String(v.to_string())).collect()),
    )])
}

fn origin_value(origin: &FormOrigin) -> Value {
    match origin {
        FormOrigin::FiberMultiplicity(v) => obj(vec![
            ("kind", Value::String("fiber_multiplicity".into())),
            ("vertex", Value::String(v.clone())),
        ]),
        FormOrigin::ArrowAtVertex(v, a) => obj(vec![
            ("kind", Value::String("arrow_at_vertex".into())),
            ("vertex", Value::String(v.clone())),
            ("arrow", Value::String(a.clone())),
        ]),
        FormOrigin::InducedEdge(v, e) => obj(vec![
            ("kind", Value::String("induced_edge".into())),
            ("vertex", Value::String(v.clone())),
            ("edge", Value::String(e.clone())),
        ]),
    }
}

pub fn form_value(form: &LinearForm) -> Value {
    let mut coeffs = Map::new();
    for (arrow, c) in &form.coefficients {
        coeffs.insert(arrow.clone(), int(c));
    }
    obj(vec![
        ("origin", origin_value(&form.origin)),
        ("coefficients", Value::Object(coeffs)),
    ])
}

fn multiplicities_value(m: &std::collections::BTreeMap<String, BigInt>) -> Value {
    let mut map = Map::new();
    for (arrow, value) in m {
        map.insert(arrow.clone(), int(value));
    }
    Value::Object(map)
}

fn stratum_value(s: &StratumEntry) -> Value {
    obj(vec![
        (
            "signature",
            Value::Array(s.signature.0.iter().map(|&i| Value::from(i as u64)).collect()),
        ),
        ("module", module_value(&s.module)),
        ("sample", multiplicities_value(&s.sample)),
        ("count", Value::from(s.count)),
    ])
}

fn constancy_value(c: &ConstancyReport) -> Value {
    obj(vec![
        (
            "signature",
            Value::Array(c.signature.0.iter().map(|&i| Value::from(i as u64)).collect()),
        ),
        ("requested", Value::from(c.requested)),
        ("found", Value::from(c.found)),
        ("draws", Value::from(c.draws)),
        ("realized", Value::Bool(c.realized)),
        ("consistent", Value::Bool(c.consistent)),
    ])
}

pub fn sweep_value(r: &SweepReport) -> Value {
    let mut fields = vec![
        ("forms", Value::Array(r.forms.iter().map(form_value).collect())),
        ("strata", Value::Array(r.strata.iter().map(stratum_value).collect())),
        (
            "m_zero",
            obj(vec![
                ("module", module_value(&r.m_zero)),
                ("note", Value::String("outside theorem hypotheses: m = 0".into())),
            ]),
        ),
        ("distinct_modules", Value::from(r.distinct_modules as u64)),
        ("bound", int(&r.bound)),
        ("bound_satisfied", Value::Bool(r.bound_satisfied)),
        ("seed", Value::from(r.seed)),
        ("box_radius", Value::from(r.box_radius)),
        ("vertex_count", Value::from(r.vertex_count as u64)),
        ("component_count", Value::from(r.component_count as u64)),
    ];
    if !r.constancy.is_empty() {
        fields.push(("constancy", Value::Array(r.constancy.iter().map(constancy_value).collect())));
    }
    obj(fields)
}

/// Serializes any of the JSON values above; keys come out sorted because the
/// underlying map is ordered.
pub fn to_json(value: &Value) -> String {
    serde_json::to_string(value).expect("serialization of plain values cannot fail")
}
