//! Canonical text and JSON renderings of states, updates and reports.
//! Rows come out in canonical tuple order and tables in schema order.

use serde_json::{json, Map, Value as Json};

use crate::relcore::{DatabaseSchema, DatabaseState, DomainId, TableState, Tuple, Update};
use crate::text::print::quote_name;
use crate::translate::{TranslatorReport, Witness};
use crate::verify::{CorrespondenceReport, LagerakReport};
use crate::views::{ViewShape, ViewState};

pub fn render_table(schema: &DatabaseSchema, columns: &[DomainId], t: &TableState) -> String {
    let rows: Vec<String> = t.iter().map(|r| schema.format_tuple(columns, r)).collect();
    format!("{{{}}}", rows.join(", "))
}

pub fn render_state(schema: &DatabaseSchema, s: &DatabaseState) -> String {
    let parts: Vec<String> = schema
        .tables
        .iter()
        .zip(&s.tables)
        .map(|(t, rows)| format!("{}: {}", t.name, render_table(schema, &t.columns, rows)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Column domains of each output table of a table-shaped view.
pub fn output_columns(shape: &ViewShape) -> Option<Vec<Vec<DomainId>>> {
    match shape {
        ViewShape::Tables(t) => Some(t.clone()),
        ViewShape::Unit => Some(Vec::new()),
        _ => None,
    }
}

pub fn render_view_state(schema: &DatabaseSchema, shape: &ViewShape, v: &ViewState) -> String {
    match (shape, v) {
        (_, ViewState::Unit) => "()".into(),
        (_, ViewState::Label(l)) => quote_name(l),
        (ViewShape::Tables(cols), ViewState::Tables(t)) if cols.len() == 1 && t.len() == 1 => {
            render_table(schema, &cols[0], &t[0])
        }
        (ViewShape::Tables(cols), ViewState::Tables(t)) => {
            let parts: Vec<String> = cols.iter().zip(t).map(|(c, t)| render_table(schema, c, t)).collect();
            format!("[{}]", parts.join(", "))
        }
        (ViewShape::Pair(sa, sb), ViewState::Pair(a, b)) => format!(
            "({}, {})",
            render_view_state(schema, sa, a),
            render_view_state(schema, sb, b)
        ),
        _ => "?".into(),
    }
}

fn render_edits(schema: &DatabaseSchema, columns: &[DomainId], del: &TableState, add: &TableState) -> String {
    let rows: Vec<String> = del
        .iter()
        .map(|r| format!("-{}", schema.format_tuple(columns, r)))
        .chain(add.iter().map(|r| format!("+{}", schema.format_tuple(columns, r))))
        .collect();
    format!("{{{}}}", rows.join(", "))
}

/// Renders a view update the way update literals are written.
pub fn render_view_update(schema: &DatabaseSchema, shape: &ViewShape, u: &Update) -> String {
    let Some(cols) = output_columns(shape) else { return "?".into() };
    let parts: Vec<String> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| render_edits(schema, c, &u.del[i], &u.add[i]))
        .collect();
    if parts.len() == 1 {
        parts.into_iter().next().unwrap_or_default()
    } else {
        format!("[{}]", parts.join(", "))
    }
}

pub fn render_base_update(schema: &DatabaseSchema, u: &Update) -> String {
    let parts: Vec<String> = schema
        .tables
        .iter()
        .enumerate()
        .map(|(i, t)| format!("{}: {}", t.name, render_edits(schema, &t.columns, &u.del[i], &u.add[i])))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn render_witness(schema: &DatabaseSchema, shape: &ViewShape, w: &Witness, out: &mut Vec<String>) {
    out.push(format!("  state: {}", render_state(schema, &w.state)));
    let labels: &[&str] = if w.updates.len() == 3 { &["u", "v", "vu"] } else { &["u"] };
    for (label, u) in labels.iter().zip(&w.updates) {
        out.push(format!("  {label}: {}", render_view_update(schema, shape, u)));
    }
    let show = |s: &Option<DatabaseState>| s.as_ref().map_or("none".to_string(), |s| render_state(schema, s));
    out.push(format!("  expected: {}", show(&w.expected)));
    out.push(format!("  actual: {}", show(&w.actual)));
    out.push(format!("  detail: {}", w.detail));
}

pub fn render_translator_report(schema: &DatabaseSchema, shape: &ViewShape, r: &TranslatorReport) -> String {
    let mut out = vec![
        format!("result: {}", if r.passed() { "pass" } else { "fail" }),
        format!("states: {}", r.states),
        format!("view states: {}", r.view_states),
        format!("translated: {}", r.translated),
        format!("refused: {}", r.refused),
    ];
    for (law, w) in [
        ("commutativity", &r.commutativity),
        ("identity", &r.identity),
        ("composition", &r.composition),
    ] {
        match w {
            None => out.push(format!("{law}: ok")),
            Some(w) => {
                out.push(format!("{law}: violated"));
                render_witness(schema, shape, w, &mut out);
            }
        }
    }
    out.join("\n") + "\n"
}

pub fn render_correspondence(
    schema: &DatabaseSchema,
    complement: &ViewShape,
    states: &[DatabaseState],
    r: &CorrespondenceReport,
) -> String {
    let mut out = vec![format!("result: {}", if r.passed() { "pass" } else { "fail" })];
    match &r.violation {
        Some(v) => {
            out.push(format!("first: {}", render_state(schema, &v.first)));
            out.push(format!("second: {}", render_state(schema, &v.second)));
            out.push(format!("detail: {}", v.detail));
        }
        None => {
            out.push(format!("classes: {}", r.blocks.len()));
            for (i, b) in r.blocks.iter().enumerate() {
                out.push(format!("class {i} -> {}", render_view_state(schema, complement, &b.complement)));
                for &s in &b.states {
                    out.push(format!("  {}", render_state(schema, &states[s])));
                }
            }
        }
    }
    out.join("\n") + "\n"
}

pub fn render_lagerak(schema: &DatabaseSchema, shape: &ViewShape, r: &LagerakReport) -> String {
    let mut out = vec![
        format!("result: {}", if r.passed() { "pass" } else { "fail" }),
        format!("pairs checked: {}", r.pairs_checked),
    ];
    if let Some(c) = &r.collision {
        out.push(format!("first: {}", render_state(schema, &c.first)));
        out.push(format!("second: {}", render_state(schema, &c.second)));
        out.push(format!("u: {}", render_view_update(schema, shape, &c.update)));
        out.push(format!("result state: {}", render_state(schema, &c.result)));
    }
    out.join("\n") + "\n"
}

pub fn json_tuple(schema: &DatabaseSchema, columns: &[DomainId], t: &Tuple) -> Json {
    Json::Array(
        t.iter()
            .zip(columns)
            .map(|(v, d)| {
                let d = schema.domain(*d);
                if d.is_null(*v) {
                    Json::Null
                } else {
                    Json::String(d.name_of(*v).to_string())
                }
            })
            .collect(),
    )
}

pub fn json_table(schema: &DatabaseSchema, columns: &[DomainId], t: &TableState) -> Json {
    Json::Array(t.iter().map(|r| json_tuple(schema, columns, r)).collect())
}

pub fn json_state(schema: &DatabaseSchema, s: &DatabaseState) -> Json {
    let mut m = Map::new();
    for (t, rows) in schema.tables.iter().zip(&s.tables) {
        m.insert(t.name.clone(), json_table(schema, &t.columns, rows));
    }
    Json::Object(m)
}

pub fn json_view_state(schema: &DatabaseSchema, shape: &ViewShape, v: &ViewState) -> Json {
    match (shape, v) {
        (_, ViewState::Unit) => Json::Array(Vec::new()),
        (_, ViewState::Label(l)) => Json::String(l.clone()),
        (ViewShape::Tables(cols), ViewState::Tables(t)) if cols.len() == 1 && t.len() == 1 => {
            json_table(schema, &cols[0], &t[0])
        }
        (ViewShape::Tables(cols), ViewState::Tables(t)) => {
            Json::Array(cols.iter().zip(t).map(|(c, t)| json_table(schema, c, t)).collect())
        }
        (ViewShape::Pair(sa, sb), ViewState::Pair(a, b)) => {
            json!([json_view_state(schema, sa, a), json_view_state(schema, sb, b)])
        }
        _ => Json::Null,
    }
}

fn json_edits(schema: &DatabaseSchema, columns: &[DomainId], del: &TableState, add: &TableState) -> Json {
    json!({ "del": json_table(schema, columns, del), "add": json_table(schema, columns, add) })
}

pub fn json_view_update(schema: &DatabaseSchema, shape: &ViewShape, u: &Update) -> Json {
    let Some(cols) = output_columns(shape) else { return Json::Null };
    let mut parts: Vec<Json> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| json_edits(schema, c, &u.del[i], &u.add[i]))
        .collect();
    if parts.len() == 1 {
        parts.remove(0)
    } else {
        Json::Array(parts)
    }
}

pub fn json_base_update(schema: &DatabaseSchema, u: &Update) -> Json {
    let mut m = Map::new();
    for (i, t) in schema.tables.iter().enumerate() {
        m.insert(t.name.clone(), json_edits(schema, &t.columns, &u.del[i], &u.add[i]));
    }
    Json::Object(m)
}

fn json_witness(schema: &DatabaseSchema, shape: &ViewShape, w: &Witness) -> Json {
    let state = |s: &Option<DatabaseState>| s.as_ref().map_or(Json::Null, |s| json_state(schema, s));
    json!({
        "state": json_state(schema, &w.state),
        "updates": w.updates.iter().map(|u| json_view_update(schema, shape, u)).collect::<Vec<_>>(),
        "expected": state(&w.expected),
        "actual": state(&w.actual),
        "detail": w.detail,
    })
}

pub fn json_translator_report(schema: &DatabaseSchema, shape: &ViewShape, r: &TranslatorReport) -> Json {
    let w = |w: &Option<Witness>| w.as_ref().map_or(Json::Null, |w| json_witness(schema, shape, w));
    json!({
        "passed": r.passed(),
        "states": r.states,
        "view_states": r.view_states,
        "translated": r.translated,
        "refused": r.refused,
        "commutativity": w(&r.commutativity),
        "identity": w(&r.identity),
        "composition": w(&r.composition),
    })
}

pub fn json_correspondence(
    schema: &DatabaseSchema,
    complement: &ViewShape,
    states: &[DatabaseState],
    r: &CorrespondenceReport,
) -> Json {
    json!({
        "passed": r.passed(),
        "classes": r.blocks.iter().map(|b| json!({
            "complement": json_view_state(schema, complement, &b.complement),
            "states": b.states.iter().map(|&s| json_state(schema, &states[s])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "violation": r.violation.as_ref().map_or(Json::Null, |v| json!({
            "first": json_state(schema, &v.first),
            "second": json_state(schema, &v.second),
            "detail": v.detail,
        })),
    })
}

pub fn json_lagerak(schema: &DatabaseSchema, shape: &ViewShape, r: &LagerakReport) -> Json {
    json!({
        "passed": r.passed(),
        "pairs_checked": r.pairs_checked,
        "collision": r.collision.as_ref().map_or(Json::Null, |c| json!({
            "first": json_state(schema, &c.first),
            "second": json_state(schema, &c.second),
            "update": json_view_update(schema, shape, &c.update),
            "result": json_state(schema, &c.result),
        })),
    })
}
