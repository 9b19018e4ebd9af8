use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::error::Result;
use crate::relcore::StateSpace;
use crate::views::{eval_valid, ViewDef, ViewState};

/// An equivalence relation over the states of a [`StateSpace`], stored as a
/// block id per state. Blocks are numbered in order of first appearance, so
/// two equal relations have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    block_of: Vec<usize>,
    block_count: usize,
}

impl Partition {
    /// Groups states by a key computed per state.
    pub fn from_keys<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids = HashMap::new();
        let block_of: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition {
            block_count: ids.len(),
            block_of,
        }
    }

    /// Renumbers arbitrary block labels canonically.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_keys(labels.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, state: usize) -> usize {
        self.block_of[state]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    /// State indices of every block, blocks in id order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count];
        for (s, &b) in self.block_of.iter().enumerate() {
            out[b].push(s);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count == self.block_of.len()
    }

    /// True when every block of `self` lies inside one block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        assert_eq!(self.len(), other.len(), "partitions over different state sets");
        let mut image = vec![None; self.block_count];
        self.block_of
            .iter()
            .zip(&other.block_of)
            .all(|(&mine, &theirs)| *image[mine].get_or_insert(theirs) == theirs)
    }

    /// The coarsest common refinement, the partition of the product view.
    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_keys(self.block_of.iter().zip(&other.block_of))
    }
}

pub fn partition(view: &ViewDef, space: &StateSpace) -> Result<Partition> {
    let schema = space.schema();
    view.shape(schema)?;
    let images = space
        .states()
        .iter()
        .map(|s| eval_valid(view, schema, s))
        .collect::<Result<Vec<ViewState>>>()?;
    Ok(Partition::from_keys(images))
}

/// Position of two views in the view ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViewOrder {
    /// The first view refines the second and not conversely.
    GreaterOrEqual,
    LessOrEqual,
    Equivalent,
    Incomparable,
}

pub fn compare(f: &ViewDef, g: &ViewDef, space: &StateSpace) -> Result<ViewOrder> {
    let pf = partition(f, space)?;
    let pg = partition(g, space)?;
    Ok(match (pf.refines(&pg), pg.refines(&pf)) {
        (true, true) => ViewOrder::Equivalent,
        (true, false) => ViewOrder::GreaterOrEqual,
        (false, true) => ViewOrder::LessOrEqual,
        (false, false) => ViewOrder::Incomparable,
    })
}

/// True when `f` and `c` together distinguish every state.
pub fn is_complement(f: &ViewDef, c: &ViewDef, space: &StateSpace) -> Result<bool> {
    Ok(partition(&ViewDef::product(f.clone(), c.clone()), space)?.is_discrete())
}

/// True when, in every state, no row appears in both a view table and a
/// complement table.
pub fn perfect_decomposition(f: &ViewDef, c: &ViewDef, space: &StateSpace) -> Result<bool> {
    let schema = space.schema();
    f.shape(schema)?;
    c.shape(schema)?;
    for s in space.states() {
        let fv = eval_valid(f, schema, s)?;
        let cv = eval_valid(c, schema, s)?;
        for ft in fv.all_tables() {
            for ct in cv.all_tables() {
                if !ft.is_disjoint(ct) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::{Bounds, DatabaseSchema, Domain, Value};
    use crate::views::Predicate;
    use proptest::prelude::*;

    fn space() -> StateSpace {
        let mut s = DatabaseSchema::new();
        let d = s.add_domain(Domain::new("D", &["a", "b"]).unwrap()).unwrap();
        s.add_table("T", vec![d]).unwrap();
        StateSpace::enumerate(s, Bounds::default()).unwrap()
    }

    fn select(v: u16) -> ViewDef {
        ViewDef::Selection { table: 0, predicate: Predicate::eq_const(0, Value(v)) }
    }

    #[test]
    fn trivial_views() {
        let sp = space();
        assert!(partition(&ViewDef::One, &sp).unwrap().is_discrete());
        assert_eq!(partition(&ViewDef::Zero, &sp).unwrap().block_count(), 1);
        assert_eq!(compare(&select(0), &select(0), &sp).unwrap(), ViewOrder::Equivalent);
        assert_eq!(compare(&ViewDef::One, &select(1), &sp).unwrap(), ViewOrder::GreaterOrEqual);
        assert_eq!(compare(&ViewDef::Zero, &select(1), &sp).unwrap(), ViewOrder::LessOrEqual);
    }

    #[test]
    fn complements_of_selection() {
        let sp = space();
        assert!(is_complement(&select(0), &select(1), &sp).unwrap());
        assert!(is_complement(&select(0), &ViewDef::One, &sp).unwrap());
        assert!(!is_complement(&select(0), &ViewDef::Zero, &sp).unwrap());
        assert!(perfect_decomposition(&select(0), &select(1), &sp).unwrap());
        assert!(!perfect_decomposition(&select(0), &ViewDef::One, &sp).unwrap());
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0..4usize, n).prop_map(|l| Partition::from_labels(&l))
    }

    proptest! {
        #[test]
        fn refinement_is_a_preorder(a in arb_partition(8), b in arb_partition(8), c in arb_partition(8)) {
            prop_assert!(a.refines(&a));
            if a.refines(&b) && b.refines(&c) {
                prop_assert!(a.refines(&c));
            }
            if a.refines(&b) && b.refines(&a) {
                prop_assert_eq!(&a, &b);
            }
            let m = a.meet(&b);
            prop_assert!(m.refines(&a) && m.refines(&b));
        }

        #[test]
        fn product_with_one_is_discrete(v in 0u16..2) {
            let sp = space();
            let p = partition(&ViewDef::product(select(v), ViewDef::One), &sp).unwrap();
            prop_assert!(p.is_discrete());
        }
    }
}
