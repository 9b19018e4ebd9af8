use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::DatabaseSchema;
use crate::views::{CompareOp, ViewDef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JoinKind {
    Hierarchical,
    ForeignKey,
    Computational,
}

impl std::fmt::Display for JoinKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            JoinKind::Hierarchical => "Hierarchical",
            JoinKind::ForeignKey => "ForeignKey",
            JoinKind::Computational => "Computational",
        })
    }
}

/// Classifies a join from the declared keys alone; the view's operator
/// (hierarchical, foreign-key, general) is not trusted.
pub fn classify_join(schema: &DatabaseSchema, join: &ViewDef) -> Result<JoinKind> {
    join.shape(schema)?;
    let (left, right, pairs) = match join {
        ViewDef::HierJoin { parent: l, child: r, on }
        | ViewDef::FkJoin { local: l, foreign: r, on }
        | ViewDef::Childless { parent: l, child: r, on } => (*l, *r, Some(on.clone())),
        ViewDef::Join { left, right, on } => {
            let eq = on.iter().all(|c| c.op == CompareOp::Eq);
            (*left, *right, eq.then(|| on.iter().map(|c| (c.left, c.right)).collect()))
        }
        other => return Err(Error::InvalidView(format!("a {} is not a join", other.kind()))),
    };
    if schema.keys[left].is_empty() && schema.keys[right].is_empty() {
        return Err(Error::MissingKeyMetadata(format!(
            "tables `{}` and `{}`",
            schema.tables[left].name, schema.tables[right].name
        )));
    }
    let Some(pairs) = pairs else {
        return Ok(JoinKind::Computational);
    };
    let flipped: Vec<_> = pairs.iter().map(|&(a, b)| (b, a)).collect();
    if hierarchical(schema, left, right, &pairs) || hierarchical(schema, right, left, &flipped) {
        return Ok(JoinKind::Hierarchical);
    }
    if foreign_key(schema, left, right, &pairs) || foreign_key(schema, right, left, &flipped) {
        return Ok(JoinKind::ForeignKey);
    }
    Ok(JoinKind::Computational)
}

/// The parent side joins on exactly its unique key, which is a prefix of the
/// child's unique key.
fn hierarchical(schema: &DatabaseSchema, parent: usize, child: usize, on: &[(usize, usize)]) -> bool {
    let (Some(pkey), Some(ckey)) = (&schema.keys[parent].unique_key, &schema.keys[child].unique_key) else {
        return false;
    };
    let pcols: BTreeSet<usize> = on.iter().map(|p| p.0).collect();
    let ccols: BTreeSet<usize> = on.iter().map(|p| p.1).collect();
    pcols == pkey.iter().copied().collect()
        && ckey.len() >= ccols.len()
        && ccols == ckey[..ccols.len()].iter().copied().collect()
}

/// Every local join column is a declared foreign key into the paired column
/// of the foreign table, is not part of the local key, and the foreign
/// columns are exactly the foreign unique key.
fn foreign_key(schema: &DatabaseSchema, local: usize, foreign: usize, on: &[(usize, usize)]) -> bool {
    let Some(fkey) = &schema.keys[foreign].unique_key else {
        return false;
    };
    let fcols: BTreeSet<usize> = on.iter().map(|p| p.1).collect();
    if fcols != fkey.iter().copied().collect() {
        return false;
    }
    let local_keys = &schema.keys[local];
    on.iter().all(|&(l, f)| {
        let declared = local_keys
            .foreign_keys
            .iter()
            .any(|fk| fk.column == l && fk.table == foreign && fk.foreign_column == f);
        let non_key = !local_keys.unique_key.as_ref().is_some_and(|k| k.contains(&l));
        declared && non_key
    })
}
