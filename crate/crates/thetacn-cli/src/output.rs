//! Rendering of library results into text, JSON, CSV, and DOT.
//!
//! JSON trees are built with insertion-ordered maps so every serialization
//! of the same data is byte-identical; integers that fit the 53-bit safe
//! range serialize as numbers and anything larger as a decimal string.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};
use thetacn::arith::SquareClass;
use thetacn::criteria::{
    ClassificationRecord, ConjectureReport, CriterionVerdict, VerifyReport,
};
use thetacn::descent::{SelmerReport, Theta};
use thetacn::graph::{even_partition_count, is_odd_graph, ResidueGraph};
use thetacn::witness::WitnessPoint;

/// Frozen CSV column order for `classify`/`scan` rows.
pub const CSV_HEADER: &str =
    "n,n_mod_24,s_rank_pi3,s_rank_2pi3,non_pi3_cn,non_2pi3_cn,non_tn,fired";

const JSON_SAFE_BOUND: i128 = 1 << 53;

/// An integer as a JSON value: a number while exact in double precision
/// (the usual JSON consumer), a decimal string beyond ±2^53.
pub fn json_int(v: i128) -> Value {
    if v.abs() <= JSON_SAFE_BOUND {
        json!(v as i64)
    } else {
        json!(v.to_string())
    }
}

fn reps_ascending(classes: &BTreeSet<SquareClass>) -> Vec<i128> {
    let mut reps: Vec<i128> = classes.iter().map(SquareClass::representative).collect();
    reps.sort_unstable();
    reps
}

fn classes_json(classes: &BTreeSet<SquareClass>) -> Value {
    Value::Array(reps_ascending(classes).into_iter().map(json_int).collect())
}

fn classes_text(classes: &BTreeSet<SquareClass>) -> String {
    let reps: Vec<String> =
        reps_ascending(classes).into_iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", reps.join(", "))
}

fn selmer_body_json(report: &SelmerReport) -> Value {
    let mut map = Map::new();
    map.insert("s_prime".into(), classes_json(&report.s_prime));
    map.insert("s".into(), classes_json(&report.s));
    map.insert("rk2_s_prime".into(), json!(report.rk2_s_prime));
    map.insert("rk2_s".into(), json!(report.rk2_s));
    map.insert("s_rank".into(), json!(report.s_rank));
    Value::Object(map)
}

fn witness_json(point: &WitnessPoint) -> Value {
    let mut map = Map::new();
    map.insert("theta".into(), json!(point.curve().theta().to_string()));
    map.insert("x_num".into(), json_int(point.x().0));
    map.insert("x_den_sq_root".into(), json_int(point.x_den_sq_root()));
    map.insert("y_num".into(), json_int(point.y().0));
    Value::Object(map)
}

fn verdict_json(v: &CriterionVerdict) -> Value {
    let mut map = Map::new();
    map.insert("id".into(), json!(v.id.name()));
    map.insert("applicable".into(), json!(v.applicable));
    map.insert(
        "graph_prediction".into(),
        v.graph_prediction.map_or(Value::Null, |b| json!(b)),
    );
    map.insert("descent_truth".into(), json!(v.descent_truth));
    map.insert("agree".into(), json!(v.agree));
    Value::Object(map)
}

/// The frozen classification schema: n, factors, n_mod_24, curves
/// (pi_3 / 2pi_3 in that order), the three certificates, tn_witness,
/// criteria.
pub fn record_json(record: &ClassificationRecord) -> Value {
    let mut curves = Map::new();
    curves.insert("pi_3".into(), selmer_body_json(&record.pi3));
    curves.insert("2pi_3".into(), selmer_body_json(&record.two_pi3));
    let mut map = Map::new();
    map.insert("n".into(), json!(record.n));
    map.insert(
        "factors".into(),
        Value::Array(record.factorization.iter().map(|&p| json!(p)).collect()),
    );
    map.insert("n_mod_24".into(), json!(record.n_mod_24));
    map.insert("curves".into(), Value::Object(curves));
    map.insert("non_pi3_cn".into(), json!(record.non_pi3_cn.to_string()));
    map.insert("non_2pi3_cn".into(), json!(record.non_2pi3_cn.to_string()));
    map.insert("non_tn".into(), json!(record.non_tn.to_string()));
    map.insert(
        "tn_witness".into(),
        record.tn_witness.as_ref().map_or(Value::Null, witness_json),
    );
    map.insert(
        "criteria".into(),
        Value::Array(record.criteria.iter().map(verdict_json).collect()),
    );
    Value::Object(map)
}

pub fn record_csv_row(record: &ClassificationRecord) -> String {
    let fired: Vec<&str> = record.fired.iter().map(|id| id.name()).collect();
    format!(
        "{},{},{},{},{},{},{},{}",
        record.n,
        record.n_mod_24,
        record.pi3.s_rank,
        record.two_pi3.s_rank,
        record.non_pi3_cn,
        record.non_2pi3_cn,
        record.non_tn,
        fired.join(";")
    )
}

pub fn record_text(record: &ClassificationRecord) -> String {
    let mut out = String::new();
    let factors: Vec<String> =
        record.factorization.iter().map(|p| p.to_string()).collect();
    out.push_str(&format!(
        "n = {} = {} (mod 24: {})\n",
        record.n,
        factors.join(" * "),
        record.n_mod_24
    ));
    for report in [&record.pi3, &record.two_pi3] {
        out.push_str(&format!(
            "{}: S' = {} (rk2 {}), S = {} (rk2 {}), s-rank = {}\n",
            report.curve,
            classes_text(&report.s_prime),
            report.rk2_s_prime,
            classes_text(&report.s),
            report.rk2_s,
            report.s_rank
        ));
    }
    out.push_str(&format!(
        "certificates: non-congruent(pi/3) {}, non-congruent(2pi/3) {}, non-tiling {}\n",
        record.non_pi3_cn, record.non_2pi3_cn, record.non_tn
    ));
    match &record.tn_witness {
        Some(point) => out.push_str(&format!(
            "witness: point {point} explains the positive rank bound\n"
        )),
        None => {
            if !record.non_tn.is_certified() {
                out.push_str(
                    "witness: none found within the automatic search bounds\n",
                );
            }
        }
    }
    if record.criteria.is_empty() {
        out.push_str("applicable rules: none\n");
    } else {
        out.push_str("applicable rules (prediction / truth / agreement):\n");
        for v in &record.criteria {
            out.push_str(&format!(
                "  {:<12} {} / {} / {}\n",
                v.id.name(),
                v.graph_prediction.map_or("-".to_string(), |b| b.to_string()),
                v.descent_truth,
                if v.agree { "agree" } else { "DISAGREE" }
            ));
        }
    }
    out
}

pub fn scan_text_header() -> String {
    format!(
        "{:>10} {:>6} {:>4} {:>5}  {:<9} {:<9} {:<9} fired",
        "n", "mod24", "pi3", "2pi3", "non-pi3", "non-2pi3", "non-tn"
    )
}

pub fn scan_text_row(record: &ClassificationRecord) -> String {
    let fired: Vec<&str> = record.fired.iter().map(|id| id.name()).collect();
    format!(
        "{:>10} {:>6} {:>4} {:>5}  {:<9} {:<9} {:<9} {}",
        record.n,
        record.n_mod_24,
        record.pi3.s_rank,
        record.two_pi3.s_rank,
        record.non_pi3_cn.to_string(),
        record.non_2pi3_cn.to_string(),
        record.non_tn.to_string(),
        fired.join(";")
    )
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

fn vertex_values(graph: &ResidueGraph) -> Vec<i128> {
    graph.labels().iter().map(|l| l.value()).collect()
}

fn arc_values(graph: &ResidueGraph) -> Vec<(i128, i128)> {
    let labels = graph.labels();
    graph
        .arcs()
        .into_iter()
        .map(|(from, to)| (labels[from].value(), labels[to].value()))
        .collect()
}

pub fn graph_text(m: i128, graph: &ResidueGraph) -> String {
    let mut out = String::new();
    let vertices: Vec<String> =
        vertex_values(graph).into_iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("graph of {m}: vertices {{{}}}\n", vertices.join(", ")));
    let arcs = arc_values(graph);
    if arcs.is_empty() {
        out.push_str("arcs: none\n");
    } else {
        let rendered: Vec<String> =
            arcs.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
        out.push_str(&format!("arcs: {}\n", rendered.join(", ")));
    }
    let rank = graph.laplacian().rank_f2();
    out.push_str(&format!(
        "laplacian rank over F2: {rank} of {} vertices\n",
        graph.vertex_count()
    ));
    out.push_str(&format!("odd graph: {}\n", if is_odd_graph(graph) { "yes" } else { "no" }));
    out.push_str(&format!(
        "even partitions (trivial included): {}\n",
        even_partition_count(graph)
    ));
    out
}

pub fn graph_json(m: i128, graph: &ResidueGraph) -> Value {
    let mut map = Map::new();
    map.insert("m".into(), json_int(m));
    map.insert(
        "vertices".into(),
        Value::Array(vertex_values(graph).into_iter().map(json_int).collect()),
    );
    map.insert(
        "arcs".into(),
        Value::Array(
            arc_values(graph)
                .into_iter()
                .map(|(a, b)| Value::Array(vec![json_int(a), json_int(b)]))
                .collect(),
        ),
    );
    map.insert("laplace_rank".into(), json!(graph.laplacian().rank_f2()));
    map.insert("odd".into(), json!(is_odd_graph(graph)));
    map.insert("even_partitions".into(), json!(even_partition_count(graph)));
    Value::Object(map)
}

pub fn graph_dot(graph: &ResidueGraph) -> String {
    let mut out = String::from("digraph residue {\n");
    for value in vertex_values(graph) {
        out.push_str(&format!("  \"{value}\";\n"));
    }
    for (from, to) in arc_values(graph) {
        out.push_str(&format!("  \"{from}\" -> \"{to}\";\n"));
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Selmer dumps
// ---------------------------------------------------------------------------

pub fn selmer_text(report: &SelmerReport) -> String {
    format!(
        "curve {}\nS' = {} (rk2 {})\nS  = {} (rk2 {})\ns-rank = {}\n",
        report.curve,
        classes_text(&report.s_prime),
        report.rk2_s_prime,
        classes_text(&report.s),
        report.rk2_s,
        report.s_rank
    )
}

pub fn selmer_json(report: &SelmerReport) -> Value {
    let mut map = Map::new();
    map.insert("n".into(), json!(report.curve.n()));
    map.insert("theta".into(), json!(report.curve.theta().to_string()));
    for (key, value) in selmer_body_json(report)
        .as_object()
        .expect("selmer body is an object")
        .iter()
    {
        map.insert(key.clone(), value.clone());
    }
    Value::Object(map)
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

pub fn verify_text(report: &VerifyReport, conjecture: &ConjectureReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verify [{}, {}]: checked {} odd square-free values\n\n",
        report.lo, report.hi, report.checked
    ));
    out.push_str(&format!(
        "{:<12} {:>10} {:>7} {:>7} {:>9}\n",
        "rule", "applicable", "fired", "agree", "disagree"
    ));
    for t in &report.tallies {
        out.push_str(&format!(
            "{:<12} {:>10} {:>7} {:>7} {:>9}\n",
            t.id.name(),
            t.applicable,
            t.fired,
            t.agreements,
            t.disagreements
        ));
    }
    out.push('\n');
    out.push_str("two-reading rules, statement form vs descent (agree/disagree):\n");
    for r in &report.readings {
        out.push_str(&format!(
            "  {:<12} supported {}/{}, statement {}/{}\n",
            r.id.name(),
            r.production_agreements,
            r.production_disagreements,
            r.statement_agreements,
            r.statement_disagreements
        ));
    }
    out.push('\n');
    if report.disagreements.is_empty() {
        out.push_str("disagreements: none\n");
    } else {
        out.push_str(&format!("disagreements: {}\n", report.disagreements.len()));
        for d in &report.disagreements {
            out.push_str(&format!(
                "  n = {} rule {} prediction {} truth {}\n",
                d.n, d.id, d.graph_prediction, d.descent_truth
            ));
        }
    }
    out.push_str(&format!(
        "conjecture anomalies: pi/3 {}, 2pi/3 {}\n",
        render_anomalies(&conjecture.pi3_anomalies),
        render_anomalies(&conjecture.two_pi3_anomalies)
    ));
    out.push_str(&format!(
        "certified counts over the range: non-pi/3 {}, non-2pi/3 {}, non-tiling {}\n",
        conjecture.non_pi3_certified.len(),
        conjecture.non_2pi3_certified.len(),
        conjecture.non_tn_certified.len()
    ));
    out
}

fn render_anomalies(anomalies: &[u64]) -> String {
    if anomalies.is_empty() {
        "none".to_string()
    } else {
        format!("{anomalies:?}")
    }
}

pub fn verify_json(report: &VerifyReport, conjecture: &ConjectureReport) -> Value {
    let tallies: Vec<Value> = report
        .tallies
        .iter()
        .map(|t| {
            let mut map = Map::new();
            map.insert("id".into(), json!(t.id.name()));
            map.insert("applicable".into(), json!(t.applicable));
            map.insert("fired".into(), json!(t.fired));
            map.insert("agreements".into(), json!(t.agreements));
            map.insert("disagreements".into(), json!(t.disagreements));
            Value::Object(map)
        })
        .collect();
    let readings: Vec<Value> = report
        .readings
        .iter()
        .map(|r| {
            let mut map = Map::new();
            map.insert("id".into(), json!(r.id.name()));
            map.insert("production_agreements".into(), json!(r.production_agreements));
            map.insert(
                "production_disagreements".into(),
                json!(r.production_disagreements),
            );
            map.insert("statement_agreements".into(), json!(r.statement_agreements));
            map.insert(
                "statement_disagreements".into(),
                json!(r.statement_disagreements),
            );
            Value::Object(map)
        })
        .collect();
    let disagreements: Vec<Value> = report
        .disagreements
        .iter()
        .map(|d| {
            let mut map = Map::new();
            map.insert("n".into(), json!(d.n));
            map.insert("id".into(), json!(d.id.name()));
            map.insert("graph_prediction".into(), json!(d.graph_prediction));
            map.insert("descent_truth".into(), json!(d.descent_truth));
            Value::Object(map)
        })
        .collect();
    let mut map = Map::new();
    map.insert("lo".into(), json!(report.lo));
    map.insert("hi".into(), json!(report.hi));
    map.insert("checked".into(), json!(report.checked));
    map.insert("tallies".into(), Value::Array(tallies));
    map.insert("readings".into(), Value::Array(readings));
    map.insert("disagreements".into(), Value::Array(disagreements));
    map.insert(
        "pi3_anomalies".into(),
        Value::Array(conjecture.pi3_anomalies.iter().map(|&n| json!(n)).collect()),
    );
    map.insert(
        "two_pi3_anomalies".into(),
        Value::Array(conjecture.two_pi3_anomalies.iter().map(|&n| json!(n)).collect()),
    );
    Value::Object(map)
}

// ---------------------------------------------------------------------------
// Point search
// ---------------------------------------------------------------------------

pub fn search_text(n: u64, theta: Theta, height: u64, point: Option<&WitnessPoint>) -> String {
    match point {
        Some(p) => format!("{p}\n"),
        None => format!("no point up to height {height} on E({n}, {theta})\n"),
    }
}

pub fn search_json(n: u64, theta: Theta, height: u64, point: Option<&WitnessPoint>) -> Value {
    let mut map = Map::new();
    map.insert("n".into(), json!(n));
    map.insert("theta".into(), json!(theta.to_string()));
    map.insert("height".into(), json!(height));
    map.insert("found".into(), json!(point.is_some()));
    map.insert("point".into(), point.map_or(Value::Null, witness_json));
    Value::Object(map)
}

/// Pretty JSON with a trailing newline; the single serialization used
/// everywhere so identical data is identical bytes.
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}
