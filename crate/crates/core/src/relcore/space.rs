//! Exhaustive enumeration of the states of a finite schema.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::update::compose_tables;
use crate::relcore::{DatabaseSchema, DatabaseState, TableState, Tuple, Update, Value};

/// Limits on enumeration.
///
/// `max_tuples` bounds each table to at most `2^max_tuples` table states
/// (with no key declared, a tuple space of `max_tuples` rows). `max_states`
/// bounds the number of database states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_tuples: u32,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_tuples: 12,
            max_states: 1 << 16,
        }
    }
}

impl Bounds {
    pub fn with_max_tuples(max_tuples: u32) -> Self {
        Bounds {
            max_tuples,
            ..Bounds::default()
        }
    }
}

/// All tuples of a table that pass its row constraints, in canonical order.
pub fn tuple_space(schema: &DatabaseSchema, table: usize) -> Vec<Tuple> {
    let columns = &schema.tables[table].columns;
    let mut out = Vec::new();
    let mut current = vec![Value(0); columns.len()];
    fill(schema, columns, 0, &mut current, &mut out);
    out.retain(|t| schema.row_allowed(table, t));
    out
}

fn fill(
    schema: &DatabaseSchema,
    columns: &[crate::relcore::DomainId],
    at: usize,
    current: &mut Vec<Value>,
    out: &mut Vec<Tuple>,
) {
    if at == columns.len() {
        out.push(Tuple(current.clone()));
        return;
    }
    for v in schema.domain(columns[at]).iter() {
        current[at] = v;
        fill(schema, columns, at + 1, current, out);
    }
}

/// Valid table states of one table as bitmasks over its tuple space, sorted.
fn table_masks(schema: &DatabaseSchema, table: usize, bounds: Bounds) -> Result<(Vec<Tuple>, Vec<u64>)> {
    let space = tuple_space(schema, table);
    let name = &schema.tables[table].name;
    if space.len() > 63 {
        return Err(Error::StateSpaceTooLarge(format!(
            "table `{name}` has {} tuples",
            space.len()
        )));
    }
    let limit = 1u128 << bounds.max_tuples.min(100);
    let masks = match &schema.keys[table].unique_key {
        None => {
            if (1u128 << space.len()) > limit {
                return Err(Error::StateSpaceTooLarge(format!(
                    "table `{name}` has {} tuples, bound is {}",
                    space.len(),
                    bounds.max_tuples
                )));
            }
            (0..1u64 << space.len()).collect()
        }
        Some(key) => {
            let mut groups: BTreeMap<Tuple, Vec<usize>> = BTreeMap::new();
            for (i, t) in space.iter().enumerate() {
                groups.entry(t.project(key)).or_default().push(i);
            }
            let count = groups
                .values()
                .try_fold(1u128, |acc, g| acc.checked_mul(g.len() as u128 + 1))
                .unwrap_or(u128::MAX);
            if count > limit {
                return Err(Error::StateSpaceTooLarge(format!(
                    "table `{name}` has {count} keyed states, bound is 2^{}",
                    bounds.max_tuples
                )));
            }
            let mut masks = vec![0u64];
            for group in groups.values() {
                let mut next = Vec::with_capacity(masks.len() * (group.len() + 1));
                for m in &masks {
                    next.push(*m);
                    next.extend(group.iter().map(|&i| m | (1 << i)));
                }
                masks = next;
            }
            masks.sort_unstable();
            masks
        }
    };
    Ok((space, masks))
}

fn mask_to_table(space: &[Tuple], mask: u64) -> TableState {
    space
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, t)| t.clone())
        .collect()
}

/// Every valid database state of `schema`, in canonical order.
///
/// Within a table, states follow the bitmask order over the canonically
/// ordered tuple space; across tables the first table varies slowest.
/// States violating a declared key or foreign key are skipped.
pub fn enumerate_states(schema: &DatabaseSchema, bounds: Bounds) -> Result<Vec<DatabaseState>> {
    let mut per_table = Vec::with_capacity(schema.tables.len());
    let mut total: u128 = 1;
    for t in 0..schema.tables.len() {
        let (space, masks) = table_masks(schema, t, bounds)?;
        total = total.saturating_mul(masks.len() as u128);
        per_table.push(
            masks
                .iter()
                .map(|&m| mask_to_table(&space, m))
                .collect::<Vec<_>>(),
        );
    }
    if total > bounds.max_states as u128 {
        return Err(Error::StateSpaceTooLarge(format!(
            "{total} candidate states, bound is {}",
            bounds.max_states
        )));
    }
    let has_fk = schema.keys.iter().any(|k| !k.foreign_keys.is_empty());
    let mut out = Vec::with_capacity(total as usize);
    let mut current = Vec::with_capacity(per_table.len());
    product(&per_table, &mut current, &mut |tables| {
        let state = DatabaseState::new(tables.to_vec());
        if !has_fk || state.constraint_violation(schema).is_none() {
            out.push(state);
        }
    });
    Ok(out)
}

fn product(tables: &[Vec<TableState>], current: &mut Vec<TableState>, emit: &mut impl FnMut(&[TableState])) {
    if current.len() == tables.len() {
        emit(current);
        return;
    }
    for t in &tables[current.len()] {
        current.push(t.clone());
        product(tables, current, emit);
        current.pop();
    }
}

/// The enumerated states of a schema plus a reverse index.
#[derive(Debug, Clone)]
pub struct StateSpace {
    schema: DatabaseSchema,
    states: Vec<DatabaseState>,
    index: HashMap<DatabaseState, usize>,
}

impl StateSpace {
    pub fn enumerate(schema: DatabaseSchema, bounds: Bounds) -> Result<Self> {
        let states = enumerate_states(&schema, bounds)?;
        Ok(Self::from_states(schema, states))
    }

    pub fn from_states(schema: DatabaseSchema, states: Vec<DatabaseState>) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        StateSpace {
            schema,
            states,
            index,
        }
    }

    pub fn schema(&self) -> &DatabaseSchema {
        &self.schema
    }

    pub fn states(&self) -> &[DatabaseState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &DatabaseState {
        &self.states[i]
    }

    pub fn index_of(&self, s: &DatabaseState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

/// Outcome of [`check_complete_set`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompleteSetReport {
    pub states: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    /// First violated clause, with the offending state indices.
    pub failure: Option<String>,
}

impl CompleteSetReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Default ceiling on the number of state triples examined by the composition clause.
pub const DEFAULT_MAX_TRIPLES: usize = 1 << 21;

/// Exhaustively checks that the database updates between enumerated states
/// form a complete set: unique arrows, closure under composition, local
/// inverses and identities.
///
/// Composition is checked on every triple, so the space must hold at most
/// `max_triples^(1/3)` states.
pub fn check_complete_set(space: &StateSpace, max_triples: usize) -> Result<CompleteSetReport> {
    let n = space.len();
    let triples = (n as u128).pow(3);
    if triples > max_triples as u128 {
        return Err(Error::StateSpaceTooLarge(format!(
            "{n} states give {triples} triples, bound is {max_triples}"
        )));
    }
    let mut report = CompleteSetReport {
        states: n,
        pairs_checked: 0,
        triples_checked: 0,
        failure: None,
    };
    let states = space.states();
    let width = space.schema().tables.len();

    // identities and arrows between pairs
    let mut arrows: Vec<Update> = Vec::with_capacity(n * n);
    for (i, a) in states.iter().enumerate() {
        let id = Update::empty(width);
        if id.apply_to(&a.tables).ok().as_deref() != Some(&a.tables[..]) {
            report.failure = Some(format!("identity does not fix state #{i}"));
            return Ok(report);
        }
        let mut seen = HashSet::with_capacity(n);
        for (j, b) in states.iter().enumerate() {
            report.pairs_checked += 1;
            let u = Update::between(&a.tables, &b.tables)?;
            match u.apply_to(&a.tables) {
                Ok(t) if t == b.tables => {}
                _ => {
                    report.failure = Some(format!("diff #{i}->#{j} does not reach #{j}"));
                    return Ok(report);
                }
            }
            if !seen.insert(u.clone()) {
                report.failure = Some(format!("two arrows from #{i} coincide at #{j}"));
                return Ok(report);
            }
            if i == j && !u.is_identity() {
                report.failure = Some(format!("arrow #{i}->#{i} is not the identity"));
                return Ok(report);
            }
            match u.inverse().apply_to(&b.tables) {
                Ok(t) if t == a.tables => {}
                _ => {
                    report.failure = Some(format!("inverse of #{i}->#{j} does not return to #{i}"));
                    return Ok(report);
                }
            }
            arrows.push(u);
        }
    }

    for i in 0..n {
        for j in 0..n {
            let u = &arrows[i * n + j];
            for k in 0..n {
                report.triples_checked += 1;
                let v = &arrows[j * n + k];
                let w = compose_tables(v, u, &states[i].tables)?;
                if w != arrows[i * n + k] {
                    report.failure = Some(format!(
                        "composition #{i}->#{j}->#{k} differs from the arrow #{i}->#{k}"
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}
