//! Per-operator translation of view updates into base updates, the
//! translator-law checker, and key-based join classification.

mod classify;
mod laws;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

pub use classify::{classify_join, JoinKind};
pub use laws::{check_translator, is_translation, Outcome, TranslationCheck, TranslationTable, TranslatorReport, Witness};
pub(crate) use laws::check_table;

use crate::error::{Error, Result};
use crate::relcore::{DatabaseSchema, DatabaseState, TableState, Tuple, Update, Value, ViewUpdate};
use crate::views::{eval_valid, split_row, ViewDef, ViewShape};

/// Where a row inserted into a union view goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InsertPolicy {
    Both,
    Left,
    Right,
}

/// A translation strategy: the operator it handles plus its policy knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// View updates pass through unchanged; for the `one` and `zero` views.
    Identity,
    Selection,
    Union(InsertPolicy),
    /// Null padding of hidden and deleted columns.
    Projection,
    HierJoin,
    FkJoin,
    /// Foreign-key deletes with inserts that may create foreign rows. Not a
    /// translator; kept to exhibit the failure.
    Combined,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Identity => f.write_str("identity"),
            Strategy::Selection => f.write_str("selection"),
            Strategy::Union(InsertPolicy::Both) => f.write_str("union both"),
            Strategy::Union(InsertPolicy::Left) => f.write_str("union left"),
            Strategy::Union(InsertPolicy::Right) => f.write_str("union right"),
            Strategy::Projection => f.write_str("projection"),
            Strategy::HierJoin => f.write_str("hierjoin"),
            Strategy::FkJoin => f.write_str("fkjoin"),
            Strategy::Combined => f.write_str("combined"),
        }
    }
}

/// Anything that maps a view update at a base state to a base update.
pub trait Translator {
    fn translate(
        &self,
        view: &ViewDef,
        schema: &DatabaseSchema,
        u: &ViewUpdate,
        s: &DatabaseState,
    ) -> Result<Update>;
}

impl Translator for Strategy {
    fn translate(
        &self,
        view: &ViewDef,
        schema: &DatabaseSchema,
        u: &ViewUpdate,
        s: &DatabaseState,
    ) -> Result<Update> {
        translate(view, *self, u, s, schema)
    }
}

impl Strategy {
    /// Checks that the strategy handles the view's operator.
    pub fn check_view(&self, view: &ViewDef) -> Result<()> {
        let ok = matches!(
            (self, view),
            (Strategy::Identity, ViewDef::One | ViewDef::Zero)
                | (Strategy::Selection, ViewDef::Selection { .. })
                | (Strategy::Union(_), ViewDef::Union { .. })
                | (Strategy::Projection, ViewDef::Projection { .. })
                | (Strategy::HierJoin, ViewDef::HierJoin { .. })
                | (Strategy::FkJoin, ViewDef::FkJoin { .. })
                | (Strategy::Combined, ViewDef::FkJoin { .. } | ViewDef::HierJoin { .. })
        );
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidStrategy(format!(
                "`{self}` cannot translate a {}",
                view.kind()
            )))
        }
    }
}

/// Translates the view update `u`, taken at base state `s`, into a base update.
///
/// The result is the unique update from `s` to the translated state, so it
/// is always applicable to `s`.
pub fn translate(
    view: &ViewDef,
    strategy: Strategy,
    u: &ViewUpdate,
    s: &DatabaseState,
    schema: &DatabaseSchema,
) -> Result<Update> {
    strategy.check_view(view)?;
    let shape = view.shape(schema)?;
    s.check_shape(schema)?;
    let current = eval_valid(view, schema, s)?;
    let tables = current
        .tables()
        .ok_or_else(|| Error::InvalidView(format!("a {} has no table-shaped updates", view.kind())))?;
    if let ViewShape::Tables(shapes) = &shape {
        if u.add.len() != shapes.len() || u.del.len() != shapes.len() {
            return Err(Error::SchemaMismatch(format!(
                "view has {} tables, update has {}",
                shapes.len(),
                u.add.len()
            )));
        }
        for (cols, (add, del)) in shapes.iter().zip(u.add.iter().zip(&u.del)) {
            for row in add.iter().chain(del) {
                schema
                    .check_tuple(cols, row)
                    .map_err(|e| Error::InvalidViewUpdate(e.to_string()))?;
            }
        }
    }
    u.applicability(tables)?;
    let mut work = Work::new(s);
    match (strategy, view) {
        (Strategy::Identity, ViewDef::Zero) => return Ok(Update::empty(schema.tables.len())),
        (Strategy::Identity, _) => return Ok(u.clone()),
        (Strategy::Selection, ViewDef::Selection { table, predicate }) => {
            let cols = &schema.tables[*table].columns;
            if let Some(row) = u.add[0].iter().find(|r| !predicate.holds(schema, cols, r)) {
                return Err(Error::InvalidViewUpdate(format!(
                    "added row {} does not satisfy the selection condition",
                    schema.format_tuple(cols, row)
                )));
            }
            work.remove_all(*table, &u.del[0]);
            work.insert_all(*table, &u.add[0]);
        }
        (Strategy::Union(policy), ViewDef::Union { left, right }) => {
            work.remove_all(*left, &u.del[0]);
            work.remove_all(*right, &u.del[0]);
            if policy != InsertPolicy::Right {
                work.insert_all(*left, &u.add[0]);
            }
            if policy != InsertPolicy::Left {
                work.insert_all(*right, &u.add[0]);
            }
        }
        (Strategy::Projection, ViewDef::Projection { table, columns, drop_null }) => {
            project(schema, &mut work, *table, columns, drop_null, u)?;
        }
        (Strategy::HierJoin, ViewDef::HierJoin { parent, child, on }) => {
            hierarchical(schema, &mut work, s, *parent, *child, on, u)?;
        }
        (Strategy::FkJoin, ViewDef::FkJoin { local, foreign, on }) => {
            let width = schema.tables[*local].width();
            for row in &u.del[0] {
                work.tables[*local].remove(&split_row(row, width).0);
            }
            for row in &u.add[0] {
                let (l, f) = split_row(row, width);
                check_join(on, &l, &f)?;
                if !s.tables[*foreign].contains(&f) {
                    return Err(Error::NotTranslatable(format!(
                        "foreign row {} does not exist",
                        schema.format_tuple(&schema.tables[*foreign].columns, &f)
                    )));
                }
                work.tables[*local].insert(l);
            }
        }
        (Strategy::Combined, ViewDef::FkJoin { local, foreign, on }) => {
            combined(schema, &mut work, *local, *foreign, on, false, u)?;
        }
        (Strategy::Combined, ViewDef::HierJoin { parent, child, on }) => {
            let flipped: Vec<_> = on.iter().map(|&(p, c)| (c, p)).collect();
            combined(schema, &mut work, *child, *parent, &flipped, true, u)?;
        }
        _ => unreachable!("checked by Strategy::check_view"),
    }
    Update::between(&s.tables, &work.tables)
}

struct Work {
    tables: Vec<TableState>,
}

impl Work {
    fn new(s: &DatabaseState) -> Self {
        Work {
            tables: s.tables.clone(),
        }
    }

    fn remove_all(&mut self, t: usize, rows: &TableState) {
        for r in rows {
            self.tables[t].remove(r);
        }
    }

    fn insert_all(&mut self, t: usize, rows: &TableState) {
        self.tables[t].extend(rows.iter().cloned());
    }
}

fn check_join(on: &[(usize, usize)], left: &Tuple, right: &Tuple) -> Result<()> {
    if on.iter().all(|&(a, b)| left[a] == right[b]) {
        Ok(())
    } else {
        Err(Error::InvalidViewUpdate("added row does not satisfy the join condition".into()))
    }
}

fn null_of(schema: &DatabaseSchema, table: usize, column: usize) -> Result<Value> {
    let d = schema.domain(schema.tables[table].columns[column]);
    d.null_value
        .ok_or_else(|| Error::NullNotSupported(d.name.clone()))
}

/// Inserts pad hidden columns with null; deletes null the visible non-key
/// columns, dropping rows left with nothing but their key.
fn project(
    schema: &DatabaseSchema,
    work: &mut Work,
    table: usize,
    columns: &[usize],
    drop_null: &[usize],
    u: &ViewUpdate,
) -> Result<()> {
    let tname = &schema.tables[table].name;
    let key = schema.keys[table]
        .unique_key
        .as_ref()
        .ok_or_else(|| Error::MissingKeyMetadata(format!("table `{tname}`")))?;
    if !key.iter().all(|k| columns.contains(k)) {
        return Err(Error::NotTranslatable(format!(
            "projection of `{tname}` hides part of its key"
        )));
    }
    let cols = &schema.tables[table].columns;
    let width = cols.len();
    let visible: Vec<usize> = columns.iter().copied().filter(|c| !key.contains(c)).collect();
    let non_key: Vec<usize> = (0..width).filter(|c| !key.contains(c)).collect();
    let is_null = |row: &Tuple, c: usize| schema.domain(cols[c]).is_null(row[c]);
    let shown = |row: &Tuple| drop_null.iter().all(|&c| !is_null(row, c));

    for vrow in &u.del[0] {
        let matches: Vec<Tuple> = work.tables[table]
            .iter()
            .filter(|r| shown(r) && r.project(columns) == *vrow)
            .cloned()
            .collect();
        for row in matches {
            work.tables[table].remove(&row);
            let mut padded = row.0.clone();
            for &c in &visible {
                padded[c] = null_of(schema, table, c)?;
            }
            let padded = Tuple(padded);
            if !non_key.iter().all(|&c| is_null(&padded, c)) {
                work.tables[table].insert(padded);
            }
        }
    }

    for vrow in &u.add[0] {
        let mut row = vec![Value(0); width];
        for (i, &c) in columns.iter().enumerate() {
            row[c] = vrow[i];
        }
        let k: Vec<Value> = key.iter().map(|&c| row[c]).collect();
        let existing: Vec<Tuple> = work.tables[table]
            .iter()
            .filter(|r| key.iter().zip(&k).all(|(&c, v)| r[c] == *v))
            .cloned()
            .collect();
        match existing.as_slice() {
            [] => {
                for c in (0..width).filter(|c| !columns.contains(c)) {
                    row[c] = null_of(schema, table, c)?;
                }
            }
            [old] if visible.iter().all(|&c| is_null(old, c)) => {
                work.tables[table].remove(old);
                for c in (0..width).filter(|c| !columns.contains(c)) {
                    row[c] = old[c];
                }
            }
            _ => {
                return Err(Error::InvalidViewUpdate(format!(
                    "key of added row {} is already visible",
                    schema.format_tuple(&columns.iter().map(|&c| cols[c]).collect::<Vec<_>>(), vrow)
                )))
            }
        }
        let row = Tuple(row);
        if !shown(&row) {
            return Err(Error::InvalidViewUpdate("added row would not be visible in the view".into()));
        }
        work.tables[table].insert(row);
    }
    Ok(())
}

fn hierarchical(
    schema: &DatabaseSchema,
    work: &mut Work,
    s: &DatabaseState,
    parent: usize,
    child: usize,
    on: &[(usize, usize)],
    u: &ViewUpdate,
) -> Result<()> {
    let pwidth = schema.tables[parent].width();
    let joins = |p: &Tuple, c: &Tuple| on.iter().all(|&(a, b)| p[a] == c[b]);
    let same_key = |p: &Tuple, q: &Tuple| on.iter().all(|&(a, _)| p[a] == q[a]);

    let mut touched = BTreeSet::new();
    for row in &u.del[0] {
        let (p, c) = split_row(row, pwidth);
        work.tables[child].remove(&c);
        touched.insert(p);
    }
    for p in touched {
        if !work.tables[child].iter().any(|c| joins(&p, c)) {
            work.tables[parent].remove(&p);
        }
    }

    for row in &u.add[0] {
        let (p, c) = split_row(row, pwidth);
        check_join(on, &p, &c)?;
        let childless_in_source = s.tables[parent]
            .iter()
            .filter(|q| same_key(q, &p))
            .any(|q| !s.tables[child].iter().any(|c| joins(q, c)));
        if childless_in_source {
            return Err(Error::NotTranslatable(format!(
                "parent {} is childless; giving it a child would change the complement",
                schema.format_tuple(&schema.tables[parent].columns, &p)
            )));
        }
        if !work.tables[parent].contains(&p) {
            if work.tables[parent].iter().any(|q| same_key(q, &p)) {
                return Err(Error::InvalidViewUpdate(format!(
                    "parent part {} conflicts with an existing parent",
                    schema.format_tuple(&schema.tables[parent].columns, &p)
                )));
            }
            work.tables[parent].insert(p);
        }
        work.tables[child].insert(c);
    }
    Ok(())
}

/// `local` rows come first in view rows unless `foreign_first`.
fn combined(
    schema: &DatabaseSchema,
    work: &mut Work,
    local: usize,
    foreign: usize,
    on: &[(usize, usize)],
    foreign_first: bool,
    u: &ViewUpdate,
) -> Result<()> {
    let split = |row: &Tuple| {
        if foreign_first {
            let (f, l) = split_row(row, schema.tables[foreign].width());
            (l, f)
        } else {
            split_row(row, schema.tables[local].width())
        }
    };
    for row in &u.del[0] {
        work.tables[local].remove(&split(row).0);
    }
    for row in &u.add[0] {
        let (l, f) = split(row);
        check_join(on, &l, &f)?;
        if !work.tables[foreign].contains(&f) {
            if work.tables[foreign].iter().any(|g| on.iter().all(|&(_, b)| g[b] == f[b])) {
                return Err(Error::NotTranslatable(format!(
                    "foreign row {} conflicts with an existing foreign row",
                    schema.format_tuple(&schema.tables[foreign].columns, &f)
                )));
            }
            work.tables[foreign].insert(f);
        }
        work.tables[local].insert(l);
    }
    Ok(())
}
