use std::fmt::Write;

use crate::relcore::{DatabaseSchema, DomainId, Domain, Value};
use crate::text::lexer::is_word_char;
use crate::text::parser::{Literal, RowEdit};
use crate::text::workspace::Workspace;
use crate::views::{Operand, Predicate, ViewDef};

/// Writes a name bare when it lexes back as the same plain word, quoted otherwise.
pub fn quote_name(name: &str) -> String {
    let is_column = name
        .strip_prefix('c')
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
    if !name.is_empty() && name.chars().all(is_word_char) && name != "null" && !is_column {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

pub fn format_value(domain: &Domain, v: Value) -> String {
    if domain.is_null(v) {
        "null".into()
    } else {
        quote_name(domain.name_of(v))
    }
}

fn columns(cols: &[usize]) -> String {
    cols.iter().map(|c| format!("c{c}")).collect::<Vec<_>>().join(", ")
}

fn pairs(on: &[(usize, usize)]) -> String {
    on.iter().map(|(a, b)| format!("c{a} = c{b}")).collect::<Vec<_>>().join(", ")
}

fn table_name(schema: &DatabaseSchema, t: usize) -> &str {
    schema.tables.get(t).map(|t| t.name.as_str()).unwrap_or("?")
}

/// Prints a predicate; `level` is 0 inside `or`, 1 inside `and`, 2 under `not`.
fn predicate(schema: &DatabaseSchema, cols: &[DomainId], p: &Predicate, level: u8, out: &mut String) {
    let wrap = |needed: u8, out: &mut String, body: &dyn Fn(&mut String)| {
        if level > needed {
            out.push('(');
            body(out);
            out.push(')');
        } else {
            body(out);
        }
    };
    match p {
        Predicate::True => out.push_str("true"),
        Predicate::IsNull(c) => {
            let _ = write!(out, "isnull c{c}");
        }
        Predicate::Compare { column, op, rhs } => {
            let rhs = match rhs {
                Operand::Column(j) => format!("c{j}"),
                Operand::Const(v) => match cols.get(*column) {
                    Some(d) => format_value(schema.domain(*d), *v),
                    None => format!("#{}", v.0),
                },
            };
            let _ = write!(out, "c{column} {} {rhs}", op.symbol());
        }
        Predicate::Or(a, b) => wrap(0, out, &|out| {
            predicate(schema, cols, a, 0, out);
            out.push_str(" or ");
            predicate(schema, cols, b, 1, out);
        }),
        Predicate::And(a, b) => wrap(1, out, &|out| {
            predicate(schema, cols, a, 1, out);
            out.push_str(" and ");
            predicate(schema, cols, b, 2, out);
        }),
        Predicate::Not(a) => {
            out.push_str("not ");
            predicate(schema, cols, a, 2, out);
        }
    }
}

/// Prints a view in the definition language.
pub fn print_view(view: &ViewDef, schema: &DatabaseSchema) -> String {
    match view {
        ViewDef::Selection { table, predicate: p } => {
            let mut out = format!("select {} where ", table_name(schema, *table));
            let cols = schema.tables.get(*table).map(|t| t.columns.clone()).unwrap_or_default();
            predicate(schema, &cols, p, 0, &mut out);
            out
        }
        ViewDef::Projection { table, columns: cols, drop_null } => {
            let mut out = format!("project {} cols {}", table_name(schema, *table), columns(cols));
            if !drop_null.is_empty() {
                let _ = write!(out, " dropnull {}", columns(drop_null));
            }
            out
        }
        ViewDef::Union { left, right } => {
            format!("union {} {}", table_name(schema, *left), table_name(schema, *right))
        }
        ViewDef::HierJoin { parent, child, on } => format!(
            "hierjoin parent={} child={} on {}",
            table_name(schema, *parent),
            table_name(schema, *child),
            pairs(on)
        ),
        ViewDef::Childless { parent, child, on } => format!(
            "childless parent={} child={} on {}",
            table_name(schema, *parent),
            table_name(schema, *child),
            pairs(on)
        ),
        ViewDef::FkJoin { local, foreign, on } => format!(
            "fkjoin local={} foreign={} on {}",
            table_name(schema, *local),
            table_name(schema, *foreign),
            pairs(on)
        ),
        ViewDef::Join { left, right, on } => format!(
            "join {} {} on {}",
            table_name(schema, *left),
            table_name(schema, *right),
            on.iter()
                .map(|c| format!("c{} {} c{}", c.left, c.op.symbol(), c.right))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        ViewDef::Table(t) => format!("table {}", table_name(schema, *t)),
        ViewDef::Product(a, b) => format!("product ({}) ({})", print_view(a, schema), print_view(b, schema)),
        ViewDef::Tabulated(entries) => format!(
            "tabulated {{{}}}",
            entries
                .iter()
                .map(|e| format!("{} -> {}", e.state_name, quote_name(&e.label)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        ViewDef::Zero => "zero".into(),
        ViewDef::One => "one".into(),
    }
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Null => "null".into(),
        Literal::Name(n) => quote_name(n),
    }
}

fn edits(table: &[RowEdit]) -> String {
    let rows: Vec<String> = table
        .iter()
        .map(|e| {
            let vals: Vec<String> = e.values.iter().map(literal).collect();
            format!("{}({})", if e.add { '+' } else { '-' }, vals.join(", "))
        })
        .collect();
    format!("{{{}}}", rows.join(", "))
}

/// Prints a whole workspace as one document that parses back to it.
pub fn print_workspace(ws: &Workspace) -> String {
    let schema = &ws.schema;
    let mut out = String::new();
    for d in &schema.domains {
        let vals: Vec<String> = d.iter().map(|v| format_value(d, v)).collect();
        let _ = writeln!(out, "domain {} = {{{}}}", d.name, vals.join(", "));
    }
    for (i, t) in schema.tables.iter().enumerate() {
        let cols: Vec<&str> = t.columns.iter().map(|d| schema.domain(*d).name.as_str()).collect();
        let _ = write!(out, "table {} ({})", t.name, cols.join(", "));
        let keys = &schema.keys[i];
        if let Some(k) = &keys.unique_key {
            let _ = write!(out, " key ({})", columns(k));
        }
        for fk in &keys.foreign_keys {
            let _ = write!(out, " fk c{} -> {}.c{}", fk.column, table_name(schema, fk.table), fk.foreign_column);
        }
        if let Some(k) = &keys.not_all_null {
            let _ = write!(out, " notallnull ({})", columns(k));
        }
        out.push('\n');
    }
    for (name, s) in &ws.states {
        let _ = writeln!(out, "state {name} = {}", crate::text::render_state(schema, s));
    }
    for (name, v) in &ws.views {
        let _ = writeln!(out, "view {name} = {}", print_view(v, schema));
    }
    for (name, u) in &ws.updates {
        let body = if u.len() == 1 {
            edits(&u[0])
        } else {
            format!("[{}]", u.iter().map(|t| edits(t)).collect::<Vec<_>>().join(", "))
        };
        let _ = writeln!(out, "update {name} = {body}");
    }
    for (name, s) in &ws.strategies {
        let _ = writeln!(out, "strategy {name} = {s}");
    }
    out
}
