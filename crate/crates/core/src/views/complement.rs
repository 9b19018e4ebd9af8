use crate::error::{Error, Result};
use crate::relcore::DatabaseSchema;
use crate::views::ViewDef;

/// The constructive complement of an updatable operator view.
///
/// Projection needs the table's declared unique key, which must be among the
/// kept columns: the complement keeps the key plus the hidden columns and
/// drops rows whose hidden columns are null.
pub fn complement_of(view: &ViewDef, schema: &DatabaseSchema) -> Result<ViewDef> {
    view.shape(schema)?;
    match view {
        ViewDef::Selection { table, predicate } => Ok(ViewDef::Selection {
            table: *table,
            predicate: predicate.clone().negate(),
        }),
        ViewDef::Union { .. } => Ok(ViewDef::Zero),
        ViewDef::Projection { table, columns, .. } => {
            let key = schema.keys[*table].unique_key.as_ref().ok_or_else(|| {
                Error::MissingKeyMetadata(format!("table `{}`", schema.tables[*table].name))
            })?;
            if !key.iter().all(|k| columns.contains(k)) {
                return Err(Error::NoConstructiveComplement(
                    "a projection that hides part of the key".into(),
                ));
            }
            let hidden: Vec<usize> = (0..schema.tables[*table].width())
                .filter(|c| !columns.contains(c))
                .collect();
            if hidden.is_empty() {
                return Ok(ViewDef::Zero);
            }
            Ok(ViewDef::Projection {
                table: *table,
                columns: key.iter().chain(&hidden).copied().collect(),
                drop_null: hidden,
            })
        }
        ViewDef::HierJoin { parent, child, on } => Ok(ViewDef::Childless {
            parent: *parent,
            child: *child,
            on: on.clone(),
        }),
        ViewDef::FkJoin { foreign, .. } => Ok(ViewDef::Table(*foreign)),
        other => Err(Error::NoConstructiveComplement(other.kind().into())),
    }
}
