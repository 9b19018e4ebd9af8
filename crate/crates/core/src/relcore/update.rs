//! The update algebra: the unique arrow between two states, its application,
//! composition, inversion and identities.
//!
//! Every operation works on slices of [`TableState`] so the same machinery
//! serves base databases and the table-shaped states of a view.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::{DatabaseSchema, DatabaseState, TableState};

/// Per-table sets of rows to add and to delete.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Update {
    pub add: Vec<TableState>,
    pub del: Vec<TableState>,
}

/// An update over the output tables of a view.
pub type ViewUpdate = Update;

impl Update {
    /// The identity update over `width` tables.
    pub fn empty(width: usize) -> Self {
        Update {
            add: vec![TableState::new(); width],
            del: vec![TableState::new(); width],
        }
    }

    pub fn width(&self) -> usize {
        self.add.len()
    }

    pub fn is_identity(&self) -> bool {
        self.add.iter().all(|t| t.is_empty()) && self.del.iter().all(|t| t.is_empty())
    }

    /// The unique update carrying `from` to `to`: rows of `to` missing from
    /// `from` are added, rows of `from` missing from `to` are deleted.
    pub fn between(from: &[TableState], to: &[TableState]) -> Result<Self> {
        if from.len() != to.len() {
            return Err(Error::SchemaMismatch(format!(
                "{} tables versus {} tables",
                from.len(),
                to.len()
            )));
        }
        let add = from
            .iter()
            .zip(to)
            .map(|(a, b)| b.difference(a).cloned().collect())
            .collect();
        let del = from
            .iter()
            .zip(to)
            .map(|(a, b)| a.difference(b).cloned().collect())
            .collect();
        Ok(Update { add, del })
    }

    /// Reports why the update cannot be applied to `tables`, if it cannot.
    pub fn applicability(&self, tables: &[TableState]) -> Result<()> {
        if tables.len() != self.width() || self.del.len() != self.width() {
            return Err(Error::SchemaMismatch(format!(
                "update over {} tables applied to {} tables",
                self.width(),
                tables.len()
            )));
        }
        for (i, t) in tables.iter().enumerate() {
            if !self.add[i].is_disjoint(t) {
                return Err(Error::NotApplicable(format!(
                    "table #{i}: an added row is already present"
                )));
            }
            if !self.del[i].is_subset(t) {
                return Err(Error::NotApplicable(format!(
                    "table #{i}: a deleted row is not present"
                )));
            }
        }
        Ok(())
    }

    pub fn is_applicable(&self, tables: &[TableState]) -> bool {
        self.applicability(tables).is_ok()
    }

    /// `(t ∪ add) \ del` per table, after checking applicability.
    pub fn apply_to(&self, tables: &[TableState]) -> Result<Vec<TableState>> {
        self.applicability(tables)?;
        Ok(tables
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut out: TableState = t.difference(&self.del[i]).cloned().collect();
                out.extend(self.add[i].iter().cloned());
                out
            })
            .collect())
    }

    /// Swaps the add and delete sets.
    pub fn inverse(&self) -> Update {
        Update {
            add: self.del.clone(),
            del: self.add.clone(),
        }
    }

    /// Composition by the closed-form rule `vu.add = (v.add ∪ u.add) \ v.del`,
    /// `vu.del = (v.del ∪ u.del) \ v.add`. The result may not be applicable to
    /// the source state; see [`Update::normalized`].
    pub fn compose_closed_form(v: &Update, u: &Update) -> Update {
        let combine = |vs: &[TableState], us: &[TableState], minus: &[TableState]| {
            vs.iter()
                .zip(us)
                .zip(minus)
                .map(|((a, b), m)| a.union(b).filter(|r| !m.contains(*r)).cloned().collect())
                .collect()
        };
        Update {
            add: combine(&v.add, &u.add, &v.del),
            del: combine(&v.del, &u.del, &v.add),
        }
    }

    /// Restricts the update to what it changes in `source`:
    /// `add \ source` and `del ∩ source`.
    pub fn normalized(&self, source: &[TableState]) -> Update {
        Update {
            add: self
                .add
                .iter()
                .zip(source)
                .map(|(a, s)| a.difference(s).cloned().collect())
                .collect(),
            del: self
                .del
                .iter()
                .zip(source)
                .map(|(d, s)| d.intersection(s).cloned().collect())
                .collect(),
        }
    }
}

pub fn diff(a: &DatabaseState, b: &DatabaseState) -> Result<Update> {
    Update::between(&a.tables, &b.tables)
}

pub fn apply(s: &DatabaseState, u: &Update) -> Result<DatabaseState> {
    Ok(DatabaseState::new(u.apply_to(&s.tables)?))
}

/// The update equivalent to applying `u` and then `v`, starting at `source`.
pub fn compose(v: &Update, u: &Update, source: &DatabaseState) -> Result<Update> {
    compose_tables(v, u, &source.tables)
}

pub(crate) fn compose_tables(v: &Update, u: &Update, source: &[TableState]) -> Result<Update> {
    let middle = u.apply_to(source)?;
    v.applicability(&middle)?;
    Ok(Update::compose_closed_form(v, u).normalized(source))
}

pub fn invert(u: &Update) -> Update {
    u.inverse()
}

pub fn identity(schema: &DatabaseSchema) -> Update {
    Update::empty(schema.tables.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::Tuple;

    fn t(vals: &[u16]) -> TableState {
        vals.iter().map(|&v| Tuple::from_indices(&[v])).collect()
    }

    fn st(vals: &[u16]) -> DatabaseState {
        DatabaseState::new(vec![t(vals)])
    }

    const A: u16 = 0;
    const B: u16 = 1;

    #[test]
    fn diff_adds_rows_of_target() {
        let u = diff(&st(&[A]), &st(&[A, B])).unwrap();
        assert_eq!(u.add, vec![t(&[B])]);
        assert_eq!(u.del, vec![t(&[])]);
    }

    #[test]
    fn diff_to_empty_deletes_everything() {
        let u = diff(&st(&[A, B]), &st(&[])).unwrap();
        assert_eq!(u.add, vec![t(&[])]);
        assert_eq!(u.del, vec![t(&[A, B])]);
        assert_eq!(apply(&st(&[A, B]), &u).unwrap(), st(&[]));
    }

    #[test]
    fn diff_of_same_state_is_identity() {
        assert!(diff(&st(&[A, B]), &st(&[A, B])).unwrap().is_identity());
    }

    #[test]
    fn diff_rejects_other_schema() {
        let two = DatabaseState::new(vec![t(&[]), t(&[])]);
        assert!(matches!(diff(&st(&[]), &two), Err(Error::SchemaMismatch(_))));
    }

    #[test]
    fn apply_examples() {
        let plus_b = Update { add: vec![t(&[B])], del: vec![t(&[])] };
        assert_eq!(apply(&st(&[A]), &plus_b).unwrap(), st(&[A, B]));
        let plus_ab = Update { add: vec![t(&[A, B])], del: vec![t(&[])] };
        assert_eq!(apply(&st(&[]), &plus_ab).unwrap(), st(&[A, B]));
        assert_eq!(apply(&st(&[B]), &Update::empty(1)).unwrap(), st(&[B]));
    }

    #[test]
    fn apply_rejects_foreign_update() {
        let plus_b = Update { add: vec![t(&[B])], del: vec![t(&[])] };
        assert!(matches!(apply(&st(&[B]), &plus_b), Err(Error::NotApplicable(_))));
        let minus_a = plus_b.inverse().inverse();
        let minus_a = Update { add: minus_a.del, del: vec![t(&[A])] };
        assert!(matches!(apply(&st(&[B]), &minus_a), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn compose_examples() {
        let plus_b = Update { add: vec![t(&[B])], del: vec![t(&[])] };
        let w = compose(&plus_b.inverse(), &plus_b, &st(&[A])).unwrap();
        assert!(w.is_identity());

        // delete a then re-add it: the closed form keeps `a` in add, the
        // normalized form drops it because the source already holds it.
        let minus_a = Update { add: vec![t(&[])], del: vec![t(&[A])] };
        let plus_a = minus_a.inverse();
        let closed = Update::compose_closed_form(&plus_a, &minus_a);
        assert_eq!(closed.add, vec![t(&[A])]);
        let w = compose(&plus_a, &minus_a, &st(&[A, B])).unwrap();
        assert_eq!(w, diff(&st(&[A, B]), &st(&[A, B])).unwrap());

        // -a after +b from {a}: the diagram's "-a+b" arrow
        let w = compose(&minus_a, &plus_b, &st(&[A])).unwrap();
        assert_eq!(w.add, vec![t(&[B])]);
        assert_eq!(w.del, vec![t(&[A])]);
    }

    #[test]
    fn compose_with_identity() {
        let u = diff(&st(&[A]), &st(&[B])).unwrap();
        assert_eq!(compose(&Update::empty(1), &u, &st(&[A])).unwrap(), u);
    }

    #[test]
    fn compose_checks_applicability() {
        let plus_b = Update { add: vec![t(&[B])], del: vec![t(&[])] };
        assert!(compose(&plus_b, &plus_b, &st(&[])).is_err());
    }

    #[test]
    fn invert_examples() {
        let plus_b = Update { add: vec![t(&[B])], del: vec![t(&[])] };
        assert_eq!(invert(&plus_b), Update { add: vec![t(&[])], del: vec![t(&[B])] });
        assert_eq!(invert(&Update::empty(2)), Update::empty(2));
        let u = diff(&st(&[A]), &st(&[B])).unwrap();
        assert_eq!(invert(&invert(&u)), u);
    }
}
