//! Brute-force oracles over an enumerated state space: the equivalence a
//! translator induces, its correspondence with a complement view, the
//! non-collision property and the delete-all heuristic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::{apply, DatabaseSchema, DatabaseState, StateSpace, TableState, Update, ViewUpdate};
use crate::translate::{check_translator, translate, Strategy, TranslationTable, Translator};
use crate::views::{eval_valid, partition, Partition, ViewDef, ViewState};

/// The partition of base states into classes reachable from one another by
/// translated updates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedEquivalence {
    pub partition: Partition,
    pub edges: usize,
    /// Every single-step edge has a reverse edge.
    pub symmetric: bool,
    /// Two consecutive edges are always matched by a single edge.
    pub transitive: bool,
}

/// Connected components of the graph with an edge `s → t` whenever a
/// translated view update carries `s` to `t`. Symmetry and transitivity of
/// the single-step relation are measured, not assumed.
pub fn reachability_partition(table: &TranslationTable, space: &StateSpace) -> InducedEquivalence {
    let n = space.len();
    let m = table.view_states().len();
    let adjacency: Vec<BTreeSet<usize>> = (0..n)
        .map(|s| (0..m).filter_map(|w| table.target(s, w)).collect())
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = 0;
    for (s, targets) in adjacency.iter().enumerate() {
        for &t in targets {
            edges += 1;
            let (a, b) = (root(&mut parent, s), root(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|s| root(&mut parent, s)).collect();
    let symmetric = adjacency
        .iter()
        .enumerate()
        .all(|(s, ts)| ts.iter().all(|&t| adjacency[t].contains(&s)));
    let transitive = adjacency
        .iter()
        .all(|ts| ts.iter().all(|&t| adjacency[t].is_subset(ts)));
    InducedEquivalence {
        partition: Partition::from_labels(&labels),
        edges,
        symmetric,
        transitive,
    }
}

/// The equivalence induced by a translator. Fails with `NotATranslator` when
/// the strategy breaks a translator law, since the partition is then undefined.
pub fn induced_partition<T: Translator + ?Sized>(
    view: &ViewDef,
    translator: &T,
    space: &StateSpace,
) -> Result<InducedEquivalence> {
    let table = TranslationTable::build(view, translator, space)?;
    let report = crate::translate::check_table(&table, space);
    if !report.passed() {
        let what = [
            ("commutativity", &report.commutativity),
            ("identity", &report.identity),
            ("composition", &report.composition),
        ]
        .into_iter()
        .find_map(|(law, w)| w.as_ref().map(|w| format!("{law}: {}", w.detail)))
        .unwrap_or_default();
        return Err(Error::NotATranslator(what));
    }
    let induced = reachability_partition(&table, space);
    if !induced.symmetric || !induced.transitive {
        return Err(Error::NotATranslator(
            "single-step reachability is not an equivalence relation".into(),
        ));
    }
    Ok(induced)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockWitness {
    pub states: Vec<usize>,
    pub complement: ViewState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceViolation {
    pub first: DatabaseState,
    pub second: DatabaseState,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    /// One entry per induced class, with the complement state all its members share.
    pub blocks: Vec<BlockWitness>,
    pub violation: Option<CorrespondenceViolation>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Compares the induced equivalence with the partition of a complement view.
pub fn correspondence<T: Translator + ?Sized>(
    view: &ViewDef,
    translator: &T,
    complement: &ViewDef,
    space: &StateSpace,
) -> Result<CorrespondenceReport> {
    let induced = induced_partition(view, translator, space)?.partition;
    let by_complement = partition(complement, space)?;
    let schema = space.schema();
    if induced == by_complement {
        let blocks = induced
            .blocks()
            .into_iter()
            .map(|states| {
                let complement = eval_valid(complement, schema, space.state(states[0]))?;
                Ok(BlockWitness { states, complement })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(CorrespondenceReport {
            blocks,
            violation: None,
        });
    }
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            let same_induced = induced.block_of(i) == induced.block_of(j);
            let same_complement = by_complement.block_of(i) == by_complement.block_of(j);
            if same_induced != same_complement {
                let detail = if same_induced {
                    "states share an induced class but have different complement states"
                } else {
                    "states share a complement state but lie in different induced classes"
                };
                return Ok(CorrespondenceReport {
                    blocks: Vec::new(),
                    violation: Some(CorrespondenceViolation {
                        first: space.state(i).clone(),
                        second: space.state(j).clone(),
                        detail: detail.into(),
                    }),
                });
            }
        }
    }
    unreachable!("distinct canonical partitions differ on some pair")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first: DatabaseState,
    pub second: DatabaseState,
    pub update: ViewUpdate,
    pub result: DatabaseState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LagerakReport {
    pub pairs_checked: usize,
    pub collision: Option<Collision>,
}

impl LagerakReport {
    pub fn passed(&self) -> bool {
        self.collision.is_none()
    }
}

/// Checks that distinct states with the same view never translate, under one
/// view update, to the same state.
pub fn lagerak_check<T: Translator + ?Sized>(
    view: &ViewDef,
    translator: &T,
    space: &StateSpace,
) -> Result<LagerakReport> {
    let table = TranslationTable::build(view, translator, space)?;
    let m = table.view_states().len();
    let mut by_image: Vec<Vec<usize>> = vec![Vec::new(); m];
    for s in 0..space.len() {
        by_image[table.image(s)].push(s);
    }
    let mut report = LagerakReport {
        pairs_checked: 0,
        collision: None,
    };
    for states in &by_image {
        for w in 0..m {
            for (a, &s1) in states.iter().enumerate() {
                let Some(t1) = table.target(s1, w) else { continue };
                for &s2 in &states[a + 1..] {
                    let Some(t2) = table.target(s2, w) else { continue };
                    report.pairs_checked += 1;
                    if t1 == t2 {
                        report.collision = Some(Collision {
                            first: space.state(s1).clone(),
                            second: space.state(s2).clone(),
                            update: table.view_update(s1, w),
                            result: space.state(t1).clone(),
                        });
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Translates the view update deleting every view row and returns the
/// base state left behind.
pub fn delete_all_heuristic(
    view: &ViewDef,
    strategy: Strategy,
    s: &DatabaseState,
    schema: &DatabaseSchema,
) -> Result<DatabaseState> {
    view.shape(schema)?;
    let current = eval_valid(view, schema, s)?;
    let tables = current
        .tables()
        .ok_or_else(|| Error::InvalidView(format!("a {} has no table-shaped updates", view.kind())))?;
    let u = Update {
        add: vec![TableState::new(); tables.len()],
        del: tables.to_vec(),
    };
    let t = translate(view, strategy, &u, s, schema)?;
    apply(s, &t)
}

/// Runs [`check_translator`] and keeps only the verdict.
pub fn is_translator<T: Translator + ?Sized>(view: &ViewDef, translator: &T, space: &StateSpace) -> Result<bool> {
    Ok(check_translator(view, translator, space)?.passed())
}
