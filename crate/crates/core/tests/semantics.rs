use std::collections::BTreeSet;

use ccview::fixtures::{self, load};
use ccview::relcore::{
    apply, diff, tuple_space, Bounds, DatabaseSchema, DatabaseState, StateSpace, TableState, Tuple, Update,
    ViewUpdate,
};
use ccview::text::Workspace;
use ccview::translate::{check_translator, is_translation, translate, Strategy, TranslationTable, Translator};
use ccview::verify::{correspondence, delete_all_heuristic, induced_partition, is_translator, lagerak_check};
use ccview::views::{compare, complement_of, eval, is_complement, partition, Partition, ViewDef, ViewOrder};
use ccview::Error;

fn space_of(ws: &Workspace) -> StateSpace {
    StateSpace::enumerate(ws.schema.clone(), Bounds::default()).unwrap()
}

fn rows(ws: &Workspace, view: &ViewDef, s: &DatabaseState) -> Vec<TableState> {
    eval(view, &ws.schema, s).unwrap().tables().unwrap().to_vec()
}

/// Every translator that passes the laws on its fixture, with its complement.
fn passing() -> Vec<(&'static str, &'static str, &'static str, ViewDef)> {
    let mut out = Vec::new();
    for (src, view, strategy) in [
        (fixtures::SINGLE_COLUMN, "f", "sel"),
        (fixtures::SELECTION_NULL, "pick", "sel"),
        (fixtures::PROJECTION, "pka", "pad"),
        (fixtures::INVOICE, "lines", "hier"),
        (fixtures::PARTS, "lookup", "fk"),
    ] {
        let ws = load(src);
        let c = complement_of(ws.view(view).unwrap(), &ws.schema).unwrap();
        out.push((src, view, strategy, c));
    }
    out
}

#[test]
fn partitions_of_the_extreme_views() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let sp = space_of(&ws);
    assert!(partition(&ViewDef::One, &sp).unwrap().is_discrete());
    assert_eq!(partition(&ViewDef::Zero, &sp).unwrap().block_count(), 1);
    let f = ws.view("f").unwrap();
    assert_eq!(compare(f, f, &sp).unwrap(), ViewOrder::Equivalent);
    assert_eq!(compare(&ViewDef::One, f, &sp).unwrap(), ViewOrder::GreaterOrEqual);
    assert_eq!(compare(&ViewDef::Zero, f, &sp).unwrap(), ViewOrder::LessOrEqual);
    assert!(!is_complement(f, &ViewDef::Zero, &sp).unwrap());
    assert!(is_complement(f, &ViewDef::One, &sp).unwrap());
}

#[test]
fn selection_partition_groups_by_matching_rows() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let sp = space_of(&ws);
    let a = ws.schema.domain(ws.schema.tables[0].columns[0]).lookup("a").unwrap();
    // oracle: does the state hold the row (a)
    let labels: Vec<usize> = sp
        .states()
        .iter()
        .map(|s| s.tables[0].contains(&Tuple::new(vec![a])) as usize)
        .collect();
    assert_eq!(partition(ws.view("f").unwrap(), &sp).unwrap(), Partition::from_labels(&labels));
}

#[test]
fn selection_induces_two_classes_sharing_unselected_rows() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let sp = space_of(&ws);
    let induced = induced_partition(ws.view("f").unwrap(), &Strategy::Selection, &sp).unwrap();
    assert!(induced.symmetric && induced.transitive);
    let blocks = induced.partition.blocks();
    assert_eq!(blocks.len(), 2);
    let c = ws.view("c").unwrap();
    for b in blocks {
        let shared: BTreeSet<_> = b.iter().map(|&s| rows(&ws, c, sp.state(s))).collect();
        assert_eq!(shared.len(), 1);
    }
}

#[test]
fn identity_views_induce_the_extreme_partitions() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let sp = space_of(&ws);
    // every state is one update away from every other through the whole database
    let one = induced_partition(&ViewDef::One, &Strategy::Identity, &sp).unwrap();
    assert_eq!(one.partition.block_count(), 1);
    // the empty view admits only the identity update
    let zero = induced_partition(&ViewDef::Zero, &Strategy::Identity, &sp).unwrap();
    assert!(zero.partition.is_discrete());
}

#[test]
fn union_is_not_a_translator() {
    let ws = load(fixtures::UNION);
    let sp = space_of(&ws);
    let u = ws.view("u").unwrap();
    for policy in ["both", "left", "right"] {
        let st = ws.strategy(policy).unwrap();
        assert!(!is_translator(u, &st, &sp).unwrap(), "{policy}");
        assert!(matches!(induced_partition(u, &st, &sp), Err(Error::NotATranslator(_))));
    }
}

#[test]
fn correspondence_with_constructive_complements() {
    for (src, view, strategy, c) in passing() {
        let ws = load(src);
        let sp = space_of(&ws);
        let r = correspondence(ws.view(view).unwrap(), &ws.strategy(strategy).unwrap(), &c, &sp).unwrap();
        assert!(r.passed(), "{view}: {:?}", r.violation);
        // each witness re-evaluates
        for b in &r.blocks {
            for &s in &b.states {
                assert_eq!(eval(&c, &ws.schema, sp.state(s)).unwrap(), b.complement);
            }
        }
    }
}

#[test]
fn fkjoin_does_not_correspond_to_the_whole_database() {
    let ws = load(fixtures::PARTS);
    let sp = space_of(&ws);
    let r = correspondence(ws.view("lookup").unwrap(), &Strategy::FkJoin, &ViewDef::One, &sp).unwrap();
    let v = r.violation.expect("One is finer than the induced classes");
    assert_ne!(v.first, v.second);
}

#[test]
fn complement_stays_constant() {
    for (src, view, strategy, c) in passing() {
        let ws = load(src);
        let sp = space_of(&ws);
        let table = TranslationTable::build(ws.view(view).unwrap(), &ws.strategy(strategy).unwrap(), &sp).unwrap();
        for s in 0..sp.len() {
            let before = eval(&c, &ws.schema, sp.state(s)).unwrap();
            for w in 0..table.view_states().len() {
                if let Some(t) = table.target(s, w) {
                    assert_eq!(eval(&c, &ws.schema, sp.state(t)).unwrap(), before, "{view}");
                }
            }
        }
    }
}

#[test]
fn translated_updates_stay_within_a_class() {
    for (src, view, strategy, _) in passing() {
        let ws = load(src);
        let sp = space_of(&ws);
        let v = ws.view(view).unwrap();
        let st = ws.strategy(strategy).unwrap();
        let induced = induced_partition(v, &st, &sp).unwrap().partition;
        let table = TranslationTable::build(v, &st, &sp).unwrap();
        for s in 0..sp.len() {
            for w in 0..table.view_states().len() {
                if let Some(t) = table.target(s, w) {
                    assert_eq!(induced.block_of(s), induced.block_of(t), "{view}");
                }
            }
        }
    }
}

#[test]
fn translators_never_collide() {
    for (src, view, strategy, _) in passing() {
        let ws = load(src);
        let r = lagerak_check(ws.view(view).unwrap(), &ws.strategy(strategy).unwrap(), &space_of(&ws)).unwrap();
        assert!(r.passed(), "{view}");
    }
}

#[test]
fn collision_check_is_vacuous_on_one_state() {
    let sp = StateSpace::enumerate(DatabaseSchema::new(), Bounds::default()).unwrap();
    assert_eq!(sp.len(), 1);
    let r = lagerak_check(&ViewDef::One, &Strategy::Identity, &sp).unwrap();
    assert!(r.passed());
    assert_eq!(r.pairs_checked, 0);
}

#[test]
fn heuristic_on_a_selection() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let f = ws.view("f").unwrap();
    let left = delete_all_heuristic(f, Strategy::Selection, ws.state("ab").unwrap(), &ws.schema).unwrap();
    assert_eq!(&left, ws.state("b").unwrap());
    let b = ws.state("b").unwrap();
    assert_eq!(&delete_all_heuristic(f, Strategy::Selection, b, &ws.schema).unwrap(), b);
}

#[test]
fn heuristic_leaves_the_childless_invoice() {
    let ws = load(fixtures::INVOICE);
    let left = delete_all_heuristic(ws.view("lines").unwrap(), Strategy::HierJoin, ws.state("sample").unwrap(), &ws.schema)
        .unwrap();
    let inv = ws.schema.domain(ws.schema.tables[0].columns[0]);
    let desc = ws.schema.domain(ws.schema.tables[0].columns[1]);
    let c = Tuple::new(vec![inv.lookup("C").unwrap(), desc.lookup("CCC").unwrap()]);
    assert_eq!(left.tables[0], TableState::from([c]));
    assert!(left.tables[1].is_empty());
}

/// Places the complement's single output table back into the base table it came from.
fn embed(schema: &DatabaseSchema, table: usize, rows: TableState) -> DatabaseState {
    let mut s = DatabaseState::empty(schema);
    s.tables[table] = rows;
    s
}

#[test]
fn heuristic_matches_the_complement() {
    for (src, view, strategy, home) in [
        (fixtures::SINGLE_COLUMN, "f", "sel", 0),
        (fixtures::SELECTION_NULL, "pick", "sel", 0),
        (fixtures::INVOICE, "lines", "hier", 0),
        (fixtures::PARTS, "lookup", "fk", 1),
    ] {
        let ws = load(src);
        let v = ws.view(view).unwrap();
        let c = complement_of(v, &ws.schema).unwrap();
        let st = ws.strategy(strategy).unwrap();
        for s in space_of(&ws).states() {
            let left = delete_all_heuristic(v, st, s, &ws.schema).unwrap();
            let guess = rows(&ws, &c, s).remove(0);
            assert_eq!(left, embed(&ws.schema, home, guess), "{view}");
        }
    }
}

#[test]
fn selection_insert_guard() {
    for (src, view) in [(fixtures::SINGLE_COLUMN, "f"), (fixtures::SELECTION_NULL, "pick")] {
        let ws = load(src);
        let v = ws.view(view).unwrap();
        let ViewDef::Selection { predicate, .. } = v else { unreachable!() };
        let columns = &ws.schema.tables[0].columns;
        for s in space_of(&ws).states() {
            let present = &rows(&ws, v, s)[0];
            for r in tuple_space(&ws.schema, 0) {
                if present.contains(&r) {
                    continue;
                }
                let u = Update { add: vec![TableState::from([r.clone()])], del: vec![TableState::new()] };
                let out = translate(v, Strategy::Selection, &u, s, &ws.schema);
                if predicate.holds(&ws.schema, columns, &r) {
                    assert!(out.is_ok(), "{view}: {out:?}");
                } else {
                    assert!(matches!(out, Err(Error::InvalidViewUpdate(_))), "{view}: {out:?}");
                }
            }
        }
    }
}

#[test]
fn hierjoin_keeps_every_child_attached() {
    let ws = load(fixtures::INVOICE);
    let sp = space_of(&ws);
    let table = TranslationTable::build(ws.view("lines").unwrap(), &Strategy::HierJoin, &sp).unwrap();
    for s in 0..sp.len() {
        for w in 0..table.view_states().len() {
            if let Some(t) = table.target(s, w) {
                let t = sp.state(t);
                let parents: BTreeSet<_> = t.tables[0].iter().map(|p| p[0]).collect();
                assert!(t.tables[1].iter().all(|c| parents.contains(&c[0])));
            }
        }
    }
}

#[test]
fn fkjoin_never_touches_the_foreign_table() {
    let ws = load(fixtures::PARTS);
    let sp = space_of(&ws);
    let table = TranslationTable::build(ws.view("lookup").unwrap(), &Strategy::FkJoin, &sp).unwrap();
    for s in 0..sp.len() {
        for w in 0..table.view_states().len() {
            if let Some(t) = table.target(s, w) {
                let u = diff(sp.state(s), sp.state(t)).unwrap();
                assert!(u.add[1].is_empty() && u.del[1].is_empty());
            }
        }
    }
}

#[test]
fn laws_per_strategy() {
    for (src, view, strategy, _) in passing() {
        let ws = load(src);
        let r = check_translator(ws.view(view).unwrap(), &ws.strategy(strategy).unwrap(), &space_of(&ws)).unwrap();
        assert!(r.passed(), "{view}: {r:?}");
    }
    for (src, view) in [(fixtures::PARTS, "combined_fixture"), (fixtures::INVOICE, "lines")] {
        let ws = load(src);
        let r = check_translator(ws.view(view).unwrap(), &Strategy::Combined, &space_of(&ws)).unwrap();
        let w = r.composition.expect("combined breaks composition");
        assert_eq!(w.updates.len(), 3);
        assert_eq!(w.updates[1], w.updates[0].inverse());
        assert!(w.updates[2].is_identity());
    }
}

#[test]
fn fixed_updates_are_translations() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let sp = space_of(&ws);
    let f = ws.view("f").unwrap();
    for name in ["add_a", "drop_a"] {
        let u = ws.update(name, f).unwrap();
        assert!(is_translation(f, &Strategy::Selection, &u, &sp).unwrap().passed());
    }
    let ws = load(fixtures::PARTS);
    let sp = space_of(&ws);
    let v = ws.view("lookup").unwrap();
    let r = is_translation(v, &Strategy::FkJoin, &ws.update("drop_1", v).unwrap(), &sp).unwrap();
    assert!(r.passed() && r.states_checked > 0);
}

/// Selection pass-through that also deletes the unselected row `(b)`.
struct Greedy;

impl Translator for Greedy {
    fn translate(&self, view: &ViewDef, schema: &DatabaseSchema, u: &ViewUpdate, s: &DatabaseState) -> ccview::Result<Update> {
        let mut t = translate(view, Strategy::Selection, u, s, schema)?;
        let b = Tuple::new(vec![schema.domain(schema.tables[0].columns[0]).lookup("b").unwrap()]);
        if s.tables[0].contains(&b) {
            t.del[0].insert(b);
        }
        Ok(t)
    }
}

#[test]
fn deleting_an_unrelated_row_is_not_a_translation() {
    let ws = load(fixtures::SINGLE_COLUMN);
    let sp = space_of(&ws);
    let f = ws.view("f").unwrap();
    let r = is_translation(f, &Greedy, &Update::empty(1), &sp).unwrap();
    let w = r.failure.expect("identity moves the base state");
    assert!(w.state.tables[0].len() > w.expected.unwrap().tables[0].len());
    assert!(!is_translator(f, &Greedy, &sp).unwrap());
    let s = ws.state("ab").unwrap();
    let t = Greedy.translate(f, &ws.schema, &ws.update("drop_a", f).unwrap(), s).unwrap();
    assert_eq!(&apply(s, &t).unwrap(), ws.state("empty").unwrap());
}
