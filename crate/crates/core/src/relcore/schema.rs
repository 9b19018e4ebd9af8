use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::{Tuple, Value};

/// Index of a domain inside its [`DatabaseSchema`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DomainId(pub usize);

/// A finite, totally ordered set of atomic values.
///
/// Declaration order is the value order used by comparisons and by the
/// canonical tuple order. At most one member may be marked as the null value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Domain {
    pub name: String,
    pub values: Vec<String>,
    pub null_value: Option<Value>,
}

impl Domain {
    pub fn new(name: impl Into<String>, values: &[&str]) -> Result<Self> {
        Self::with_null(name, values.iter().map(|v| v.to_string()).collect(), None)
    }

    pub fn with_null(
        name: impl Into<String>,
        values: Vec<String>,
        null_value: Option<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InvalidSchema(format!("domain `{name}` is empty")));
        }
        if values.len() > u16::MAX as usize {
            return Err(Error::InvalidSchema(format!("domain `{name}` is too large")));
        }
        let mut seen = BTreeSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "domain `{name}` repeats value `{v}`"
                )));
            }
        }
        if let Some(n) = null_value {
            if n >= values.len() {
                return Err(Error::InvalidSchema(format!(
                    "null marker of domain `{name}` is not one of its values"
                )));
            }
        }
        Ok(Domain {
            name,
            values,
            null_value: null_value.map(|n| Value(n as u16)),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_null(&self, v: Value) -> bool {
        self.null_value == Some(v)
    }

    pub fn contains(&self, v: Value) -> bool {
        (v.0 as usize) < self.values.len()
    }

    pub fn lookup(&self, name: &str) -> Option<Value> {
        self.values
            .iter()
            .position(|v| v == name)
            .map(|i| Value(i as u16))
    }

    pub fn name_of(&self, v: Value) -> &str {
        &self.values[v.0 as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> {
        (0..self.values.len()).map(|i| Value(i as u16))
    }
}

/// A single-column reference from a table into another table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForeignKey {
    pub column: usize,
    pub table: usize,
    pub foreign_column: usize,
}

/// Integrity metadata for one table.
///
/// Declared keys are enforced when the state space is enumerated, so every
/// enumerated state satisfies them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TableKeys {
    pub unique_key: Option<Vec<usize>>,
    pub foreign_keys: Vec<ForeignKey>,
    /// Rows must carry a non-null value in at least one of these columns.
    pub not_all_null: Option<Vec<usize>>,
}

impl TableKeys {
    pub fn is_empty(&self) -> bool {
        self.unique_key.is_none() && self.foreign_keys.is_empty() && self.not_all_null.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableSchema {
    pub name: String,
    pub columns: Vec<DomainId>,
}

impl TableSchema {
    pub fn width(&self) -> usize {
        self.columns.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DatabaseSchema {
    pub domains: Vec<Domain>,
    pub tables: Vec<TableSchema>,
    pub keys: Vec<TableKeys>,
}

impl DatabaseSchema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_domain(&mut self, domain: Domain) -> Result<DomainId> {
        if self.domain_by_name(&domain.name).is_some() {
            return Err(Error::InvalidSchema(format!(
                "domain `{}` declared twice",
                domain.name
            )));
        }
        self.domains.push(domain);
        Ok(DomainId(self.domains.len() - 1))
    }

    pub fn add_table(&mut self, name: impl Into<String>, columns: Vec<DomainId>) -> Result<usize> {
        let name = name.into();
        if columns.is_empty() {
            return Err(Error::InvalidSchema(format!("table `{name}` has no columns")));
        }
        if self.table_by_name(&name).is_some() {
            return Err(Error::InvalidSchema(format!("table `{name}` declared twice")));
        }
        if let Some(d) = columns.iter().find(|d| d.0 >= self.domains.len()) {
            return Err(Error::InvalidSchema(format!(
                "table `{name}` uses unknown domain #{}",
                d.0
            )));
        }
        self.tables.push(TableSchema { name, columns });
        self.keys.push(TableKeys::default());
        Ok(self.tables.len() - 1)
    }

    /// Replaces the key metadata of `table` after checking every column index.
    pub fn set_keys(&mut self, table: usize, keys: TableKeys) -> Result<()> {
        let width = self
            .tables
            .get(table)
            .ok_or_else(|| Error::InvalidSchema(format!("no table #{table}")))?
            .width();
        let tname = self.tables[table].name.clone();
        let check = |c: usize| -> Result<()> {
            if c >= width {
                Err(Error::InvalidSchema(format!(
                    "column c{c} out of range for table `{tname}`"
                )))
            } else {
                Ok(())
            }
        };
        for c in keys.unique_key.iter().flatten() {
            check(*c)?;
        }
        for c in keys.not_all_null.iter().flatten() {
            check(*c)?;
        }
        for fk in &keys.foreign_keys {
            check(fk.column)?;
            let foreign = self.tables.get(fk.table).ok_or_else(|| {
                Error::InvalidSchema(format!("foreign key of `{tname}` names unknown table"))
            })?;
            if fk.foreign_column >= foreign.width() {
                return Err(Error::InvalidSchema(format!(
                    "foreign column c{} out of range for table `{}`",
                    fk.foreign_column, foreign.name
                )));
            }
            if self.tables[table].columns[fk.column] != foreign.columns[fk.foreign_column] {
                return Err(Error::InvalidSchema(format!(
                    "foreign key c{} of `{tname}` and c{} of `{}` have different domains",
                    fk.column, fk.foreign_column, foreign.name
                )));
            }
        }
        self.keys[table] = keys;
        Ok(())
    }

    pub fn domain_by_name(&self, name: &str) -> Option<DomainId> {
        self.domains.iter().position(|d| d.name == name).map(DomainId)
    }

    pub fn table_by_name(&self, name: &str) -> Option<usize> {
        self.tables.iter().position(|t| t.name == name)
    }

    pub fn domain(&self, id: DomainId) -> &Domain {
        &self.domains[id.0]
    }

    pub fn table(&self, index: usize) -> Result<&TableSchema> {
        self.tables
            .get(index)
            .ok_or_else(|| Error::InvalidSchema(format!("no table #{index}")))
    }

    pub fn column_domains(&self, table: usize) -> Vec<DomainId> {
        self.tables[table].columns.clone()
    }

    /// Checks a tuple's arity and that every value lies in its column's domain.
    pub fn check_tuple(&self, columns: &[DomainId], tuple: &Tuple) -> Result<()> {
        if tuple.len() != columns.len() {
            return Err(Error::InvalidState(format!(
                "tuple has {} values, expected {}",
                tuple.len(),
                columns.len()
            )));
        }
        for (v, d) in tuple.iter().zip(columns) {
            if !self.domain(*d).contains(*v) {
                return Err(Error::InvalidState(format!(
                    "value #{} is outside domain `{}`",
                    v.0,
                    self.domain(*d).name
                )));
            }
        }
        Ok(())
    }

    /// True when the row passes the table's row-level constraints.
    pub fn row_allowed(&self, table: usize, tuple: &Tuple) -> bool {
        match &self.keys[table].not_all_null {
            None => true,
            Some(cols) => {
                let columns = &self.tables[table].columns;
                cols.iter()
                    .any(|&c| !self.domain(columns[c]).is_null(tuple[c]))
            }
        }
    }

    /// Renders a tuple as `(v1, v2)` using the given column domains.
    pub fn format_tuple(&self, columns: &[DomainId], tuple: &Tuple) -> String {
        let parts: Vec<String> = tuple
            .iter()
            .zip(columns)
            .map(|(v, d)| crate::text::format_value(self.domain(*d), *v))
            .collect();
        format!("({})", parts.join(", "))
    }
}
