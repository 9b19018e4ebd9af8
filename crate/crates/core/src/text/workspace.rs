use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::relcore::{DatabaseSchema, DatabaseState, Domain, DomainId, ForeignKey, TableKeys, TableState, Tuple, Update, Value};
use crate::text::parser::{parse_document, parse_view_expr, Decl, Literal, Name, Pos, RawOperand, RawPred, RawView, RowEdit, TableClause};
use crate::translate::Strategy;
use crate::views::{JoinCondition, Operand, Predicate, TabulatedEntry, ViewDef, ViewShape};

/// Everything declared by a set of documents, with names resolved.
///
/// Update literals stay unresolved until they are paired with a view, since
/// their column domains come from the view's output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub schema: DatabaseSchema,
    pub states: IndexMap<String, DatabaseState>,
    pub views: IndexMap<String, ViewDef>,
    pub updates: IndexMap<String, Vec<Vec<RowEdit>>>,
    pub strategies: IndexMap<String, Strategy>,
}

pub fn parse_workspace(document: &str) -> Result<Workspace> {
    Workspace::parse_all(&[document])
}

fn lookup<'a, T>(map: &'a IndexMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| Error::Resolution(format!("no {kind} named `{name}`")))
}

fn literal_value(schema: &DatabaseSchema, domain: DomainId, lit: &Literal) -> Result<Value> {
    let d = schema.domain(domain);
    match lit {
        Literal::Null => d
            .null_value
            .ok_or_else(|| Error::Resolution(format!("domain `{}` has no null value", d.name))),
        Literal::Name(n) => d
            .lookup(n)
            .ok_or_else(|| Error::Resolution(format!("`{n}` is not a value of domain `{}`", d.name))),
    }
}

fn literal_row(schema: &DatabaseSchema, columns: &[DomainId], row: &[Literal]) -> Result<Tuple> {
    if row.len() != columns.len() {
        return Err(Error::InvalidState(format!(
            "row has {} values, expected {}",
            row.len(),
            columns.len()
        )));
    }
    row.iter()
        .zip(columns)
        .map(|(lit, d)| literal_value(schema, *d, lit))
        .collect()
}

fn at(pos: Pos, e: Error) -> Error {
    match e {
        Error::Resolution(m) => pos.err(m),
        other => other,
    }
}

impl Workspace {
    pub fn parse(document: &str) -> Result<Self> {
        Self::parse_all(&[document])
    }

    /// Parses several documents and resolves them as one workspace.
    pub fn parse_all(documents: &[&str]) -> Result<Self> {
        let mut decls = Vec::new();
        for doc in documents {
            decls.extend(parse_document(doc)?);
        }
        let mut ws = Workspace::default();

        for d in &decls {
            if let Decl::Domain(name, values) = d {
                if ws.schema.domain_by_name(&name.text).is_some() {
                    return Err(name.pos.err(format!("duplicate domain `{}`", name.text)));
                }
                let nulls: Vec<usize> = values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v == Literal::Null)
                    .map(|(i, _)| i)
                    .collect();
                if nulls.len() > 1 {
                    return Err(Error::InvalidSchema(format!("domain `{}` marks null twice", name.text)));
                }
                let names = values
                    .iter()
                    .map(|v| match v {
                        Literal::Null => "null".to_string(),
                        Literal::Name(n) => n.clone(),
                    })
                    .collect();
                ws.schema
                    .add_domain(Domain::with_null(name.text.clone(), names, nulls.first().copied())?)?;
            }
        }

        for d in &decls {
            if let Decl::Table(name, cols, _) = d {
                if ws.schema.table_by_name(&name.text).is_some() {
                    return Err(name.pos.err(format!("duplicate table `{}`", name.text)));
                }
                let columns = cols
                    .iter()
                    .map(|c| {
                        ws.schema
                            .domain_by_name(&c.text)
                            .ok_or_else(|| c.pos.err(format!("no domain named `{}`", c.text)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ws.schema.add_table(name.text.clone(), columns)?;
            }
        }

        for d in &decls {
            if let Decl::Table(name, _, clauses) = d {
                let table = ws.table(name)?;
                let mut keys = TableKeys::default();
                for c in clauses {
                    match c {
                        TableClause::Key(cols) => keys.unique_key = Some(cols.clone()),
                        TableClause::NotAllNull(cols) => keys.not_all_null = Some(cols.clone()),
                        TableClause::Fk(column, foreign, foreign_column) => keys.foreign_keys.push(ForeignKey {
                            column: *column,
                            table: ws.table(foreign)?,
                            foreign_column: *foreign_column,
                        }),
                    }
                }
                ws.schema.set_keys(table, keys)?;
            }
        }

        for d in &decls {
            if let Decl::State(name, tables) = d {
                if ws.states.contains_key(&name.text) {
                    return Err(name.pos.err(format!("duplicate state `{}`", name.text)));
                }
                let state = ws.resolve_state(tables)?;
                ws.states.insert(name.text.clone(), state);
            }
        }

        for d in &decls {
            match d {
                Decl::View(name, raw) => {
                    if ws.views.contains_key(&name.text) {
                        return Err(name.pos.err(format!("duplicate view `{}`", name.text)));
                    }
                    let view = ws.resolve_view(raw)?;
                    ws.views.insert(name.text.clone(), view);
                }
                Decl::Update(name, edits) => {
                    if ws.updates.insert(name.text.clone(), edits.clone()).is_some() {
                        return Err(name.pos.err(format!("duplicate update `{}`", name.text)));
                    }
                }
                Decl::Strategy(name, s) => {
                    if ws.strategies.insert(name.text.clone(), *s).is_some() {
                        return Err(name.pos.err(format!("duplicate strategy `{}`", name.text)));
                    }
                }
                _ => {}
            }
        }
        Ok(ws)
    }

    fn table(&self, name: &Name) -> Result<usize> {
        self.schema
            .table_by_name(&name.text)
            .ok_or_else(|| name.pos.err(format!("no table named `{}`", name.text)))
    }

    fn resolve_state(&self, tables: &[(Name, Vec<Vec<crate::text::parser::Literal>>)]) -> Result<DatabaseState> {
        let mut state = DatabaseState::empty(&self.schema);
        let mut seen = BTreeSet::new();
        for (t, rows) in tables {
            let idx = self.table(t)?;
            if !seen.insert(idx) {
                return Err(t.pos.err(format!("table `{}` listed twice", t.text)));
            }
            let columns = &self.schema.tables[idx].columns;
            for row in rows {
                let tuple = literal_row(&self.schema, columns, row).map_err(|e| at(t.pos, e))?;
                state.tables[idx].insert(tuple);
            }
        }
        state.validate(&self.schema)?;
        Ok(state)
    }

    fn resolve_view(&self, raw: &RawView) -> Result<ViewDef> {
        let view = match raw {
            RawView::Select(t, p) => {
                let table = self.table(t)?;
                let columns = self.schema.tables[table].columns.clone();
                ViewDef::Selection {
                    table,
                    predicate: self.resolve_predicate(p, &columns).map_err(|e| at(t.pos, e))?,
                }
            }
            RawView::Project(t, cols, drop) => ViewDef::Projection {
                table: self.table(t)?,
                columns: cols.clone(),
                drop_null: drop.clone(),
            },
            RawView::Union(l, r) => ViewDef::Union { left: self.table(l)?, right: self.table(r)? },
            RawView::HierJoin(p, c, on) => ViewDef::HierJoin {
                parent: self.table(p)?,
                child: self.table(c)?,
                on: on.clone(),
            },
            RawView::Childless(p, c, on) => ViewDef::Childless {
                parent: self.table(p)?,
                child: self.table(c)?,
                on: on.clone(),
            },
            RawView::FkJoin(l, f, on) => ViewDef::FkJoin {
                local: self.table(l)?,
                foreign: self.table(f)?,
                on: on.clone(),
            },
            RawView::Join(l, r, on) => ViewDef::Join {
                left: self.table(l)?,
                right: self.table(r)?,
                on: on.iter().map(|&(left, op, right)| JoinCondition { left, op, right }).collect(),
            },
            RawView::Table(t) => ViewDef::Table(self.table(t)?),
            RawView::Product(a, b) => ViewDef::product(self.resolve_view(a)?, self.resolve_view(b)?),
            RawView::Tabulated(entries) => ViewDef::Tabulated(
                entries
                    .iter()
                    .map(|(s, label)| {
                        let state = self
                            .states
                            .get(&s.text)
                            .ok_or_else(|| s.pos.err(format!("no state named `{}`", s.text)))?;
                        Ok(TabulatedEntry {
                            state_name: s.text.clone(),
                            state: state.clone(),
                            label: label.clone(),
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            RawView::Zero => ViewDef::Zero,
            RawView::One => ViewDef::One,
        };
        view.shape(&self.schema)?;
        Ok(view)
    }

    fn resolve_predicate(&self, p: &RawPred, columns: &[DomainId]) -> Result<Predicate> {
        let domain_of = |c: usize| {
            columns
                .get(c)
                .copied()
                .ok_or_else(|| Error::InvalidView(format!("predicate column c{c} is out of range")))
        };
        Ok(match p {
            RawPred::True => Predicate::True,
            RawPred::IsNull(c) => Predicate::IsNull(*c),
            RawPred::Compare(c, op, rhs) => Predicate::Compare {
                column: *c,
                op: *op,
                rhs: match rhs {
                    RawOperand::Column(j) => Operand::Column(*j),
                    RawOperand::Value(lit) => Operand::Const(literal_value(&self.schema, domain_of(*c)?, lit)?),
                },
            },
            RawPred::And(a, b) => self.resolve_predicate(a, columns)?.and(self.resolve_predicate(b, columns)?),
            RawPred::Or(a, b) => self.resolve_predicate(a, columns)?.or(self.resolve_predicate(b, columns)?),
            RawPred::Not(a) => self.resolve_predicate(a, columns)?.negate(),
        })
    }

    /// Parses a view expression against this workspace.
    pub fn parse_view(&self, src: &str) -> Result<ViewDef> {
        self.resolve_view(&parse_view_expr(src)?)
    }

    pub fn state(&self, name: &str) -> Result<&DatabaseState> {
        lookup(&self.states, "state", name)
    }

    pub fn view(&self, name: &str) -> Result<&ViewDef> {
        lookup(&self.views, "view", name)
    }

    pub fn strategy(&self, name: &str) -> Result<Strategy> {
        lookup(&self.strategies, "strategy", name).copied()
    }

    /// The name under which a state was declared, if any.
    pub fn state_name(&self, s: &DatabaseState) -> Option<&str> {
        self.states.iter().find(|(_, v)| *v == s).map(|(k, _)| k.as_str())
    }

    /// Resolves a named update literal against the output columns of `view`.
    pub fn update(&self, name: &str, view: &ViewDef) -> Result<Update> {
        let edits = lookup(&self.updates, "update", name)?;
        let columns = match view.shape(&self.schema)? {
            ViewShape::Tables(t) => t,
            ViewShape::Unit => Vec::new(),
            _ => return Err(Error::InvalidView(format!("a {} has no table-shaped updates", view.kind()))),
        };
        // an empty literal `{}` also stands for the identity on zero tables
        if columns.is_empty() && edits.iter().all(|t| t.is_empty()) {
            return Ok(Update::empty(0));
        }
        if edits.len() != columns.len() {
            return Err(Error::SchemaMismatch(format!(
                "update `{name}` lists {} tables, the view has {}",
                edits.len(),
                columns.len()
            )));
        }
        let mut u = Update::empty(columns.len());
        for (i, (table, cols)) in edits.iter().zip(&columns).enumerate() {
            for edit in table {
                let row = literal_row(&self.schema, cols, &edit.values)
                    .map_err(|e| match e {
                        Error::InvalidState(m) => Error::InvalidViewUpdate(m),
                        other => other,
                    })?;
                let side: &mut TableState = if edit.add { &mut u.add[i] } else { &mut u.del[i] };
                side.insert(row);
            }
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "
        domain D = {a, b, null}
        table T (D, D) key (c0) notallnull (c1)
        state s = {T: {(a, b)}}
        view v = select T where c1 = b
        update u = {+(b, a), -(a, b)}
        strategy x = selection
    ";

    #[test]
    fn resolves_names() {
        let ws = parse_workspace(DOC).unwrap();
        assert_eq!(ws.schema.tables.len(), 1);
        assert_eq!(ws.schema.domains[0].null_value, Some(Value(2)));
        assert_eq!(ws.state("s").unwrap().tables[0].len(), 1);
        let u = ws.update("u", ws.view("v").unwrap()).unwrap();
        assert_eq!(u.add[0].iter().next(), Some(&Tuple::from_indices(&[1, 0])));
        assert_eq!(ws.strategy("x").unwrap(), Strategy::Selection);
    }

    #[test]
    fn duplicates_and_dangling_names() {
        let dup = "domain D = {a}\ntable T (D)\nstate s = {}\nstate s = {T: {(a)}}";
        assert_eq!(
            Workspace::parse(dup).unwrap_err(),
            Error::Resolution("4:7: duplicate state `s`".into())
        );
        assert!(matches!(Workspace::parse("domain D = {a}\ntable T (E)"), Err(Error::Resolution(_))));
        assert!(matches!(
            Workspace::parse("domain D = {a}\ntable T (D)\nstate s = {T: {(z)}}"),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            Workspace::parse("domain D = {a}\ntable T (D)\nview v = tabulated {nope -> x}"),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn names_resolve_across_documents() {
        let ws = Workspace::parse_all(&["view v = table T", "table T (D)", "domain D = {a}"]).unwrap();
        assert_eq!(ws.view("v").unwrap(), &ViewDef::Table(0));
    }

    #[test]
    fn empty_workspace() {
        let ws = parse_workspace("").unwrap();
        assert_eq!(ws, Workspace::default());
        assert!(matches!(ws.view("f"), Err(Error::Resolution(_))));
    }

    #[test]
    fn invalid_state_is_rejected() {
        let doc = "domain D = {a, b}\ntable T (D, D) key (c0)\nstate s = {T: {(a, a), (a, b)}}";
        assert!(matches!(Workspace::parse(doc), Err(Error::InvalidState(_))));
    }
}
