use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::{DatabaseSchema, DomainId, Tuple, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    /// Compares two values of one domain. Only `=` and `!=` see nulls; every
    /// ordering comparison touching a null is false.
    pub fn holds(self, left: Value, right: Value, left_null: bool, right_null: bool) -> bool {
        match self {
            CompareOp::Eq => left == right,
            CompareOp::Ne => left != right,
            _ if left_null || right_null => false,
            CompareOp::Lt => left.cmp(&right) == Ordering::Less,
            CompareOp::Le => left.cmp(&right) != Ordering::Greater,
            CompareOp::Gt => left.cmp(&right) == Ordering::Greater,
            CompareOp::Ge => left.cmp(&right) != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Operand {
    Const(Value),
    Column(usize),
}

/// A condition over the columns of one table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Predicate {
    True,
    Compare {
        column: usize,
        op: CompareOp,
        rhs: Operand,
    },
    IsNull(usize),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn eq_const(column: usize, value: Value) -> Self {
        Predicate::Compare {
            column,
            op: CompareOp::Eq,
            rhs: Operand::Const(value),
        }
    }

    pub fn negate(self) -> Self {
        Predicate::Not(Box::new(self))
    }

    pub fn and(self, other: Predicate) -> Self {
        Predicate::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Predicate) -> Self {
        Predicate::Or(Box::new(self), Box::new(other))
    }

    /// Checks column ranges and constant membership against a row shape.
    pub fn validate(&self, schema: &DatabaseSchema, columns: &[DomainId]) -> Result<()> {
        let column = |c: usize| -> Result<DomainId> {
            columns
                .get(c)
                .copied()
                .ok_or_else(|| Error::InvalidView(format!("column c{c} out of range")))
        };
        match self {
            Predicate::True => Ok(()),
            Predicate::IsNull(c) => column(*c).map(|_| ()),
            Predicate::Compare { column: c, rhs, .. } => {
                let d = column(*c)?;
                match rhs {
                    Operand::Const(v) if !schema.domain(d).contains(*v) => Err(Error::InvalidView(
                        format!("constant is not in domain `{}`", schema.domain(d).name),
                    )),
                    Operand::Column(o) if column(*o)? != d => Err(Error::InvalidView(format!(
                        "c{c} and c{o} have different domains"
                    ))),
                    _ => Ok(()),
                }
            }
            Predicate::And(a, b) | Predicate::Or(a, b) => {
                a.validate(schema, columns)?;
                b.validate(schema, columns)
            }
            Predicate::Not(a) => a.validate(schema, columns),
        }
    }

    pub fn holds(&self, schema: &DatabaseSchema, columns: &[DomainId], row: &Tuple) -> bool {
        match self {
            Predicate::True => true,
            Predicate::IsNull(c) => schema.domain(columns[*c]).is_null(row[*c]),
            Predicate::Compare { column, op, rhs } => {
                let domain = schema.domain(columns[*column]);
                let left = row[*column];
                let right = match rhs {
                    Operand::Const(v) => *v,
                    Operand::Column(o) => row[*o],
                };
                op.holds(left, right, domain.is_null(left), domain.is_null(right))
            }
            Predicate::And(a, b) => a.holds(schema, columns, row) && b.holds(schema, columns, row),
            Predicate::Or(a, b) => a.holds(schema, columns, row) || b.holds(schema, columns, row),
            Predicate::Not(a) => !a.holds(schema, columns, row),
        }
    }
}
