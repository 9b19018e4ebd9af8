use ccview::relcore::{
    apply, check_complete_set, compose, diff, enumerate_states, identity, invert, Bounds, DatabaseSchema,
    DatabaseState, Domain, StateSpace, TableState, Tuple, Update, DEFAULT_MAX_TRIPLES,
};
use ccview::Error;
use proptest::prelude::*;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// Tables with the given (domain size, width) shapes, no constraints.
fn schema(shapes: &[(usize, usize)]) -> DatabaseSchema {
    let mut s = DatabaseSchema::new();
    for (i, &(size, width)) in shapes.iter().enumerate() {
        let d = s.add_domain(Domain::new(format!("D{i}"), &NAMES[..size]).unwrap()).unwrap();
        s.add_table(format!("T{i}"), vec![d; width]).unwrap();
    }
    s
}

fn space(shapes: &[(usize, usize)]) -> StateSpace {
    StateSpace::enumerate(schema(shapes), Bounds::default()).unwrap()
}

fn shapes() -> impl Strategy<Value = Vec<(usize, usize)>> {
    // at most 8 tuples overall keeps every space below 256 states
    prop::collection::vec((1usize..=2, 1usize..=2), 1..=2)
        .prop_filter("small", |v| v.iter().map(|&(d, w)| d.pow(w as u32)).sum::<usize>() <= 8)
}

/// A space plus three state indices into it.
fn space_and_states() -> impl Strategy<Value = (StateSpace, usize, usize, usize)> {
    shapes().prop_flat_map(|sh| {
        let sp = space(&sh);
        let n = sp.len();
        (Just(sp), 0..n, 0..n, 0..n)
    })
}

fn rows(t: &TableState) -> Vec<&Tuple> {
    t.iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn diff_reaches_target((sp, a, b, _) in space_and_states()) {
        let (a, b) = (sp.state(a), sp.state(b));
        let u = diff(a, b).unwrap();
        prop_assert_eq!(&apply(a, &u).unwrap(), b);
    }

    #[test]
    fn diff_is_disjoint_and_minimal((sp, a, b, _) in space_and_states()) {
        let (a, b) = (sp.state(a), sp.state(b));
        let u = diff(a, b).unwrap();
        for i in 0..a.tables.len() {
            for r in rows(&u.add[i]) {
                prop_assert!(!a.tables[i].contains(r) && b.tables[i].contains(r));
            }
            for r in rows(&u.del[i]) {
                prop_assert!(a.tables[i].contains(r) && !b.tables[i].contains(r));
            }
        }
    }

    #[test]
    fn self_diff_is_identity((sp, a, _, _) in space_and_states()) {
        let s = sp.state(a);
        prop_assert_eq!(diff(s, s).unwrap(), identity(sp.schema()));
        prop_assert_eq!(&apply(s, &identity(sp.schema())).unwrap(), s);
    }

    #[test]
    fn inverse_undoes((sp, a, b, _) in space_and_states()) {
        let (a, b) = (sp.state(a), sp.state(b));
        let u = diff(a, b).unwrap();
        prop_assert_eq!(&apply(b, &invert(&u)).unwrap(), a);
        prop_assert_eq!(invert(&u), diff(b, a).unwrap());
        prop_assert_eq!(invert(&invert(&u)), u);
    }

    #[test]
    fn compose_matches_stepwise((sp, a, b, c) in space_and_states()) {
        let (a, b, c) = (sp.state(a), sp.state(b), sp.state(c));
        let u = diff(a, b).unwrap();
        let v = diff(b, c).unwrap();
        let vu = compose(&v, &u, a).unwrap();
        prop_assert_eq!(&apply(a, &vu).unwrap(), c);
        prop_assert_eq!(vu, diff(a, c).unwrap());
    }

    #[test]
    fn compose_with_identity((sp, a, b, _) in space_and_states()) {
        let (a, b) = (sp.state(a), sp.state(b));
        let u = diff(a, b).unwrap();
        let id = identity(sp.schema());
        prop_assert_eq!(compose(&id, &u, a).unwrap(), u.clone());
        prop_assert_eq!(compose(&u, &id, a).unwrap(), u);
    }

    #[test]
    fn normalization_is_idempotent((sp, a, b, c) in space_and_states()) {
        let (a, b, c) = (sp.state(a), sp.state(b), sp.state(c));
        // a sloppy update: adds rows already present, deletes rows already gone
        let sloppy = Update {
            add: b.tables.clone(),
            del: c.tables.iter().zip(&b.tables).map(|(c, b)| c.difference(b).cloned().collect()).collect(),
        };
        let once = sloppy.normalized(&a.tables);
        prop_assert_eq!(once.normalized(&a.tables), once.clone());
        if let (Ok(x), Ok(y)) = (sloppy.apply_to(&a.tables), once.apply_to(&a.tables)) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn enumeration_is_deterministic(sh in shapes()) {
        let s = schema(&sh);
        let first = enumerate_states(&s, Bounds::default()).unwrap();
        let second = enumerate_states(&s, Bounds::default()).unwrap();
        prop_assert_eq!(&first, &second);
        let tuples: usize = sh.iter().map(|&(d, w)| d.pow(w as u32)).sum();
        prop_assert_eq!(first.len(), 1usize << tuples);
    }
}

#[test]
fn applying_to_a_missing_row_fails() {
    let sp = space(&[(2, 1)]);
    let empty = sp.state(0);
    let full = sp.state(sp.len() - 1);
    let delete_all = diff(full, empty).unwrap();
    assert!(matches!(apply(empty, &delete_all), Err(Error::NotApplicable(_))));
    let insert_all = diff(empty, full).unwrap();
    assert!(matches!(apply(full, &insert_all), Err(Error::NotApplicable(_))));
}

#[test]
fn first_table_varies_slowest() {
    let sp = space(&[(1, 1), (1, 1)]);
    let counts: Vec<(usize, usize)> = sp
        .states()
        .iter()
        .map(|s: &DatabaseState| (s.tables[0].len(), s.tables[1].len()))
        .collect();
    assert_eq!(counts, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
}

#[test]
fn small_spaces_form_a_complete_set() {
    for sh in [vec![(2, 1)], vec![(3, 1)], vec![(2, 1), (2, 1)], vec![(2, 2)], vec![(1, 1), (2, 2)]] {
        let r = check_complete_set(&space(&sh), DEFAULT_MAX_TRIPLES).unwrap();
        assert!(r.passed(), "{sh:?}: {:?}", r.failure);
        assert_eq!(r.triples_checked, r.states.pow(3));
    }
}

#[test]
fn triple_bound_is_enforced() {
    let sp = space(&[(2, 2), (2, 2)]);
    assert!(matches!(check_complete_set(&sp, 1000), Err(Error::StateSpaceTooLarge(_))));
}

/// Every schema shape with at most twelve tuples, every pair and every
/// triple. Far too slow for a routine run.
#[test]
#[ignore]
fn complete_set_up_to_twelve_tuples() {
    for t in 1..=12usize {
        for sh in [vec![(t, 1)], vec![(1, 1), (t.max(2) - 1, 1)]] {
            let r = check_complete_set(&space(&sh), usize::MAX).unwrap();
            assert!(r.passed(), "{sh:?}: {:?}", r.failure);
        }
    }
}
