//! View definitions, their evaluation over database states, and the
//! partition-based view ordering.

mod complement;
mod partition;
mod predicate;

use std::collections::HashMap;

use serde::Serialize;

pub use complement::complement_of;
pub use partition::{compare, is_complement, partition, perfect_decomposition, Partition, ViewOrder};
pub use predicate::{CompareOp, Operand, Predicate};

use crate::error::{Error, Result};
use crate::relcore::{DatabaseSchema, DatabaseState, DomainId, TableState, Tuple};

/// One column comparison of a general join, left table column first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct JoinCondition {
    pub left: usize,
    pub op: CompareOp,
    pub right: usize,
}

/// One row of a tabulated view.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TabulatedEntry {
    pub state_name: String,
    pub state: DatabaseState,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum ViewDef {
    Selection {
        table: usize,
        predicate: Predicate,
    },
    /// Keeps `columns` of the rows whose `drop_null` columns are all non-null.
    Projection {
        table: usize,
        columns: Vec<usize>,
        drop_null: Vec<usize>,
    },
    Union {
        left: usize,
        right: usize,
    },
    /// One-to-many equijoin of a parent and its children, pairs are (parent, child) columns.
    HierJoin {
        parent: usize,
        child: usize,
        on: Vec<(usize, usize)>,
    },
    /// Equijoin of a local table with a foreign table, pairs are (local, foreign) columns.
    FkJoin {
        local: usize,
        foreign: usize,
        on: Vec<(usize, usize)>,
    },
    /// Parent rows without any joining child row.
    Childless {
        parent: usize,
        child: usize,
        on: Vec<(usize, usize)>,
    },
    /// A base table, unchanged.
    Table(usize),
    /// A general join; only classified, never translated.
    Join {
        left: usize,
        right: usize,
        on: Vec<JoinCondition>,
    },
    Product(Box<ViewDef>, Box<ViewDef>),
    Tabulated(Vec<TabulatedEntry>),
    Zero,
    One,
}

/// The output structure of a view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViewShape {
    Unit,
    Label,
    Tables(Vec<Vec<DomainId>>),
    Pair(Box<ViewShape>, Box<ViewShape>),
}

impl ViewShape {
    /// Column domains of a single-table output.
    pub fn single_table(&self) -> Option<&[DomainId]> {
        match self {
            ViewShape::Tables(t) if t.len() == 1 => Some(&t[0]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ViewState {
    Unit,
    Label(String),
    Tables(Vec<TableState>),
    Pair(Box<ViewState>, Box<ViewState>),
}

impl ViewState {
    /// The tables of a table-shaped state; `Unit` has none.
    pub fn tables(&self) -> Option<&[TableState]> {
        match self {
            ViewState::Unit => Some(&[]),
            ViewState::Tables(t) => Some(t),
            _ => None,
        }
    }

    /// Every table of the state, flattening pairs.
    pub fn all_tables(&self) -> Vec<&TableState> {
        match self {
            ViewState::Unit | ViewState::Label(_) => Vec::new(),
            ViewState::Tables(t) => t.iter().collect(),
            ViewState::Pair(a, b) => {
                let mut out = a.all_tables();
                out.extend(b.all_tables());
                out
            }
        }
    }
}

fn table_columns(schema: &DatabaseSchema, t: usize) -> Result<&[DomainId]> {
    schema
        .tables
        .get(t)
        .map(|t| t.columns.as_slice())
        .ok_or_else(|| Error::InvalidView(format!("no table #{t}")))
}

fn check_pairs(
    schema: &DatabaseSchema,
    left: usize,
    right: usize,
    on: &[(usize, usize)],
) -> Result<()> {
    let l = table_columns(schema, left)?;
    let r = table_columns(schema, right)?;
    if on.is_empty() {
        return Err(Error::InvalidView("join without columns".into()));
    }
    for &(a, b) in on {
        match (l.get(a), r.get(b)) {
            (Some(x), Some(y)) if x == y => {}
            (Some(_), Some(_)) => {
                return Err(Error::InvalidView(format!(
                    "join columns c{a} and c{b} have different domains"
                )))
            }
            _ => return Err(Error::InvalidView(format!("join column pair c{a}=c{b} out of range"))),
        }
    }
    Ok(())
}

fn concat(a: &[DomainId], b: &[DomainId]) -> Vec<DomainId> {
    a.iter().chain(b).copied().collect()
}

impl ViewDef {
    pub fn product(a: ViewDef, b: ViewDef) -> ViewDef {
        ViewDef::Product(Box::new(a), Box::new(b))
    }

    /// Validates the view against `schema` and derives its output shape.
    pub fn shape(&self, schema: &DatabaseSchema) -> Result<ViewShape> {
        Ok(match self {
            ViewDef::Selection { table, predicate } => {
                let cols = table_columns(schema, *table)?;
                predicate.validate(schema, cols)?;
                ViewShape::Tables(vec![cols.to_vec()])
            }
            ViewDef::Projection {
                table,
                columns,
                drop_null,
            } => {
                let cols = table_columns(schema, *table)?;
                if columns.is_empty() {
                    return Err(Error::InvalidView("projection keeps no columns".into()));
                }
                if let Some(c) = columns.iter().chain(drop_null).find(|&&c| c >= cols.len()) {
                    return Err(Error::InvalidView(format!("column c{c} out of range")));
                }
                ViewShape::Tables(vec![columns.iter().map(|&c| cols[c]).collect()])
            }
            ViewDef::Union { left, right } => {
                let l = table_columns(schema, *left)?;
                if l != table_columns(schema, *right)? {
                    return Err(Error::InvalidView("union of tables with different schemas".into()));
                }
                ViewShape::Tables(vec![l.to_vec()])
            }
            ViewDef::HierJoin { parent: a, child: b, on } | ViewDef::FkJoin { local: a, foreign: b, on } => {
                check_pairs(schema, *a, *b, on)?;
                ViewShape::Tables(vec![concat(table_columns(schema, *a)?, table_columns(schema, *b)?)])
            }
            ViewDef::Childless { parent, child, on } => {
                check_pairs(schema, *parent, *child, on)?;
                ViewShape::Tables(vec![table_columns(schema, *parent)?.to_vec()])
            }
            ViewDef::Table(t) => ViewShape::Tables(vec![table_columns(schema, *t)?.to_vec()]),
            ViewDef::Join { left, right, on } => {
                let pairs: Vec<_> = on.iter().map(|c| (c.left, c.right)).collect();
                check_pairs(schema, *left, *right, &pairs)?;
                ViewShape::Tables(vec![concat(table_columns(schema, *left)?, table_columns(schema, *right)?)])
            }
            ViewDef::Product(a, b) => ViewShape::Pair(Box::new(a.shape(schema)?), Box::new(b.shape(schema)?)),
            ViewDef::Tabulated(entries) => {
                let mut seen = HashMap::new();
                for e in entries {
                    e.state.check_shape(schema)?;
                    if seen.insert(&e.state, &e.label).is_some() {
                        return Err(Error::InvalidView(format!(
                            "state `{}` tabulated twice",
                            e.state_name
                        )));
                    }
                }
                ViewShape::Label
            }
            ViewDef::Zero => ViewShape::Unit,
            ViewDef::One => ViewShape::Tables(schema.tables.iter().map(|t| t.columns.clone()).collect()),
        })
    }

    /// Short operator name, used in messages.
    pub fn kind(&self) -> &'static str {
        match self {
            ViewDef::Selection { .. } => "selection",
            ViewDef::Projection { .. } => "projection",
            ViewDef::Union { .. } => "union",
            ViewDef::HierJoin { .. } => "hierarchical join",
            ViewDef::FkJoin { .. } => "foreign-key join",
            ViewDef::Childless { .. } => "childless-parent view",
            ViewDef::Table(_) => "table view",
            ViewDef::Join { .. } => "general join",
            ViewDef::Product(..) => "product",
            ViewDef::Tabulated(_) => "tabulated view",
            ViewDef::Zero => "zero view",
            ViewDef::One => "one view",
        }
    }
}

fn equijoin(left: &TableState, right: &TableState, on: &[(usize, usize)]) -> TableState {
    let mut out = TableState::new();
    for l in left {
        for r in right {
            if on.iter().all(|&(a, b)| l[a] == r[b]) {
                out.insert(l.concat(r));
            }
        }
    }
    out
}

/// Evaluates a view that has already passed [`ViewDef::shape`].
pub(crate) fn eval_valid(view: &ViewDef, schema: &DatabaseSchema, s: &DatabaseState) -> Result<ViewState> {
    Ok(match view {
        ViewDef::Selection { table, predicate } => {
            let cols = &schema.tables[*table].columns;
            ViewState::Tables(vec![s.tables[*table]
                .iter()
                .filter(|r| predicate.holds(schema, cols, r))
                .cloned()
                .collect()])
        }
        ViewDef::Projection {
            table,
            columns,
            drop_null,
        } => {
            let cols = &schema.tables[*table].columns;
            ViewState::Tables(vec![s.tables[*table]
                .iter()
                .filter(|r| drop_null.iter().all(|&c| !schema.domain(cols[c]).is_null(r[c])))
                .map(|r| r.project(columns))
                .collect()])
        }
        ViewDef::Union { left, right } => {
            ViewState::Tables(vec![s.tables[*left].union(&s.tables[*right]).cloned().collect()])
        }
        ViewDef::HierJoin { parent: a, child: b, on } | ViewDef::FkJoin { local: a, foreign: b, on } => {
            ViewState::Tables(vec![equijoin(&s.tables[*a], &s.tables[*b], on)])
        }
        ViewDef::Childless { parent, child, on } => {
            let children = &s.tables[*child];
            ViewState::Tables(vec![s.tables[*parent]
                .iter()
                .filter(|p| !children.iter().any(|c| on.iter().all(|&(a, b)| p[a] == c[b])))
                .cloned()
                .collect()])
        }
        ViewDef::Table(t) => ViewState::Tables(vec![s.tables[*t].clone()]),
        ViewDef::Join { left, right, on } => {
            let lcols = &schema.tables[*left].columns;
            let mut out = TableState::new();
            for l in &s.tables[*left] {
                for r in &s.tables[*right] {
                    let keep = on.iter().all(|c| {
                        let d = schema.domain(lcols[c.left]);
                        let (x, y) = (l[c.left], r[c.right]);
                        c.op.holds(x, y, d.is_null(x), d.is_null(y))
                    });
                    if keep {
                        out.insert(l.concat(r));
                    }
                }
            }
            ViewState::Tables(vec![out])
        }
        ViewDef::Product(a, b) => ViewState::Pair(
            Box::new(eval_valid(a, schema, s)?),
            Box::new(eval_valid(b, schema, s)?),
        ),
        ViewDef::Tabulated(entries) => match entries.iter().find(|e| &e.state == s) {
            Some(e) => ViewState::Label(e.label.clone()),
            None => {
                return Err(Error::InvalidView(
                    "tabulated view has no entry for this state".into(),
                ))
            }
        },
        ViewDef::Zero => ViewState::Unit,
        ViewDef::One => ViewState::Tables(s.tables.clone()),
    })
}

/// Maps a database state to its view state.
pub fn eval(view: &ViewDef, schema: &DatabaseSchema, s: &DatabaseState) -> Result<ViewState> {
    view.shape(schema)?;
    s.check_shape(schema)?;
    eval_valid(view, schema, s)
}

/// Projects a concatenated join row back onto its two halves.
pub(crate) fn split_row(row: &Tuple, left_width: usize) -> (Tuple, Tuple) {
    (Tuple(row[..left_width].to_vec()), Tuple(row[left_width..].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::{Domain, Value};

    fn two_values() -> DatabaseSchema {
        let mut s = DatabaseSchema::new();
        let d = s.add_domain(Domain::new("D", &["a", "b"]).unwrap()).unwrap();
        s.add_table("T", vec![d]).unwrap();
        s
    }

    fn st(rows: &[u16]) -> DatabaseState {
        DatabaseState::new(vec![rows.iter().map(|&v| Tuple::from_indices(&[v])).collect()])
    }

    fn select(v: u16) -> ViewDef {
        ViewDef::Selection { table: 0, predicate: Predicate::eq_const(0, Value(v)) }
    }

    #[test]
    fn selection_examples() {
        let s = two_values();
        assert_eq!(eval(&select(0), &s, &st(&[0, 1])).unwrap(), ViewState::Tables(vec![st(&[0]).tables[0].clone()]));
        assert_eq!(eval(&select(1), &s, &st(&[0])).unwrap(), ViewState::Tables(vec![TableState::new()]));
    }

    #[test]
    fn evaluation_is_deterministic() {
        let s = two_values();
        let v = ViewDef::product(select(0), ViewDef::One);
        assert_eq!(eval(&v, &s, &st(&[0, 1])).unwrap(), eval(&v, &s, &st(&[0, 1])).unwrap());
    }

    #[test]
    fn invalid_views_are_rejected() {
        let s = two_values();
        assert!(eval(&ViewDef::Table(3), &s, &st(&[])).is_err());
        let bad = ViewDef::Projection { table: 0, columns: vec![1], drop_null: vec![] };
        assert!(matches!(eval(&bad, &s, &st(&[])), Err(Error::InvalidView(_))));
    }

    #[test]
    fn projection_drops_null_rows() {
        let mut s = DatabaseSchema::new();
        let d = s
            .add_domain(Domain::with_null("V", vec!["x".into(), "null".into()], Some(1)).unwrap())
            .unwrap();
        s.add_table("T", vec![d, d]).unwrap();
        let state = DatabaseState::new(vec![[[0, 0], [0, 1], [1, 0]]
            .iter()
            .map(|r| Tuple::from_indices(r))
            .collect()]);
        let v = ViewDef::Projection { table: 0, columns: vec![0], drop_null: vec![1] };
        let out = eval(&v, &s, &state).unwrap();
        let expect: TableState = [Tuple::from_indices(&[0]), Tuple::from_indices(&[1])].into_iter().collect();
        assert_eq!(out, ViewState::Tables(vec![expect]));
    }
}
