use std::collections::BTreeSet;
use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::DatabaseSchema;

/// An atomic value, stored as its position in the owning domain.
///
/// Comparing two values of the same domain compares their declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Value(pub u16);

/// A row. Tuples order lexicographically by value order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Tuple(pub Vec<Value>);

impl Tuple {
    pub fn new(values: Vec<Value>) -> Self {
        Tuple(values)
    }

    pub fn from_indices(values: &[u16]) -> Self {
        Tuple(values.iter().map(|&v| Value(v)).collect())
    }

    pub fn project(&self, columns: &[usize]) -> Tuple {
        Tuple(columns.iter().map(|&c| self.0[c]).collect())
    }

    pub fn concat(&self, other: &Tuple) -> Tuple {
        let mut values = self.0.clone();
        values.extend_from_slice(&other.0);
        Tuple(values)
    }
}

impl Deref for Tuple {
    type Target = [Value];

    fn deref(&self) -> &[Value] {
        &self.0
    }
}

impl FromIterator<Value> for Tuple {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Self {
        Tuple(iter.into_iter().collect())
    }
}

/// A set of rows, kept in canonical tuple order.
pub type TableState = BTreeSet<Tuple>;

/// One table state per schema table.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DatabaseState {
    pub tables: Vec<TableState>,
}

impl DatabaseState {
    pub fn new(tables: Vec<TableState>) -> Self {
        DatabaseState { tables }
    }

    /// The state with every table empty.
    pub fn empty(schema: &DatabaseSchema) -> Self {
        DatabaseState {
            tables: vec![TableState::new(); schema.tables.len()],
        }
    }

    pub fn table(&self, index: usize) -> &TableState {
        &self.tables[index]
    }

    pub fn row_count(&self) -> usize {
        self.tables.iter().map(|t| t.len()).sum()
    }

    /// Checks shape and domain membership only.
    pub fn check_shape(&self, schema: &DatabaseSchema) -> Result<()> {
        if self.tables.len() != schema.tables.len() {
            return Err(Error::SchemaMismatch(format!(
                "state has {} tables, schema has {}",
                self.tables.len(),
                schema.tables.len()
            )));
        }
        for (table, rows) in schema.tables.iter().zip(&self.tables) {
            for row in rows {
                schema.check_tuple(&table.columns, row).map_err(|e| match e {
                    Error::InvalidState(m) => Error::InvalidState(format!("table `{}`: {m}", table.name)),
                    other => other,
                })?;
            }
        }
        Ok(())
    }

    /// Checks shape plus every declared integrity constraint.
    pub fn validate(&self, schema: &DatabaseSchema) -> Result<()> {
        self.check_shape(schema)?;
        match self.constraint_violation(schema) {
            Some(msg) => Err(Error::InvalidState(msg)),
            None => Ok(()),
        }
    }

    /// Describes the first violated key, foreign key or row constraint.
    pub fn constraint_violation(&self, schema: &DatabaseSchema) -> Option<String> {
        for (t, keys) in schema.keys.iter().enumerate() {
            let name = &schema.tables[t].name;
            let rows = &self.tables[t];
            if let Some(row) = rows.iter().find(|r| !schema.row_allowed(t, r)) {
                let cols = &schema.tables[t].columns;
                return Some(format!(
                    "row {} of `{name}` has only null values in its not-all-null columns",
                    schema.format_tuple(cols, row)
                ));
            }
            if let Some(key) = &keys.unique_key {
                let mut seen = BTreeSet::new();
                for row in rows {
                    if !seen.insert(row.project(key)) {
                        return Some(format!("duplicate key in table `{name}`"));
                    }
                }
            }
            for fk in &keys.foreign_keys {
                let foreign = &schema.tables[fk.table];
                let local_domain = schema.domain(schema.tables[t].columns[fk.column]);
                let targets: BTreeSet<Value> = self.tables[fk.table]
                    .iter()
                    .map(|r| r[fk.foreign_column])
                    .collect();
                for row in rows {
                    let v = row[fk.column];
                    if !local_domain.is_null(v) && !targets.contains(&v) {
                        return Some(format!(
                            "row of `{name}` references a missing `{}` row",
                            foreign.name
                        ));
                    }
                }
            }
        }
        None
    }
}
