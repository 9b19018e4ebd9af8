//! Exhaustive checking of the translation and translator laws.
//!
//! A [`TranslationTable`] records, for every enumerated base state and every
//! reachable view state, what the strategy does with the unique view update
//! between the state's image and that view state. All checks read the table.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relcore::{DatabaseState, StateSpace, Update, ViewUpdate};
use crate::translate::Translator;
use crate::views::{eval_valid, ViewDef, ViewState};

/// What happened to one (state, view update) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Translated to the state with this index.
    Translated(usize),
    /// The strategy declined: the update lies outside its domain at this state.
    Refused(String),
    /// An error other than a refusal, or a result outside the state space.
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct TranslationTable {
    view_states: Vec<ViewState>,
    image: Vec<usize>,
    outcomes: Vec<Outcome>,
}

impl TranslationTable {
    pub fn build<T: Translator + ?Sized>(view: &ViewDef, translator: &T, space: &StateSpace) -> Result<Self> {
        let schema = space.schema();
        view.shape(schema)?;
        let mut ids: HashMap<ViewState, usize> = HashMap::new();
        let mut view_states = Vec::new();
        let mut image = Vec::with_capacity(space.len());
        for s in space.states() {
            let v = eval_valid(view, schema, s)?;
            let next = view_states.len();
            let id = *ids.entry(v.clone()).or_insert_with(|| {
                view_states.push(v);
                next
            });
            image.push(id);
        }
        if view_states.iter().any(|v| v.tables().is_none()) {
            return Err(Error::InvalidView(format!("a {} has no table-shaped updates", view.kind())));
        }
        let mut outcomes = Vec::with_capacity(space.len() * view_states.len());
        for (i, s) in space.states().iter().enumerate() {
            let from = view_states[image[i]].tables().unwrap_or_default();
            for w in &view_states {
                let u = Update::between(from, w.tables().unwrap_or_default())?;
                let outcome = match translator.translate(view, schema, &u, s) {
                    Ok(t) => match t.apply_to(&s.tables) {
                        Ok(tables) => {
                            let next = DatabaseState::new(tables);
                            match space.index_of(&next) {
                                Some(j) => Outcome::Translated(j),
                                None => Outcome::Failed(format!(
                                    "translated state is not a valid state: {}",
                                    next.constraint_violation(schema)
                                        .unwrap_or_else(|| "not enumerated".into())
                                )),
                            }
                        }
                        Err(e) => Outcome::Failed(e.to_string()),
                    },
                    Err(Error::NotTranslatable(m)) => Outcome::Refused(m),
                    Err(e) => Outcome::Failed(format!("{}: {e}", e.class())),
                };
                outcomes.push(outcome);
            }
        }
        Ok(TranslationTable {
            view_states,
            image,
            outcomes,
        })
    }

    pub fn view_states(&self) -> &[ViewState] {
        &self.view_states
    }

    /// Index of the view state of base state `s`.
    pub fn image(&self, s: usize) -> usize {
        self.image[s]
    }

    pub fn outcome(&self, s: usize, w: usize) -> &Outcome {
        &self.outcomes[s * self.view_states.len() + w]
    }

    pub fn target(&self, s: usize, w: usize) -> Option<usize> {
        match self.outcome(s, w) {
            Outcome::Translated(t) => Some(*t),
            _ => None,
        }
    }

    /// The view update from the image of `s` to view state `w`.
    pub fn view_update(&self, s: usize, w: usize) -> ViewUpdate {
        self.update_between(self.image[s], w)
    }

    pub fn update_between(&self, from: usize, to: usize) -> ViewUpdate {
        Update::between(
            self.view_states[from].tables().unwrap_or_default(),
            self.view_states[to].tables().unwrap_or_default(),
        )
        .expect("view states share a shape")
    }
}

/// A reproducible law violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub state: DatabaseState,
    /// The view updates involved, in application order. For composition
    /// failures: `u`, `v`, then their composite.
    pub updates: Vec<ViewUpdate>,
    /// Result of translating the single (or composite) update, if any.
    pub expected: Option<DatabaseState>,
    /// Result the law was compared against, if any.
    pub actual: Option<DatabaseState>,
    pub detail: String,
}

/// Outcome of [`check_translator`]; `None` entries passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslatorReport {
    pub states: usize,
    pub view_states: usize,
    pub translated: usize,
    pub refused: usize,
    pub commutativity: Option<Witness>,
    pub identity: Option<Witness>,
    pub composition: Option<Witness>,
}

impl TranslatorReport {
    pub fn passed(&self) -> bool {
        self.commutativity.is_none() && self.identity.is_none() && self.composition.is_none()
    }
}

/// Verifies the translation laws for every pair of enumerated state and
/// reachable view state, then composition preservation for every chain of
/// two translated updates.
///
/// Refused updates are outside the translator's domain and are not counted
/// as violations, except that a composite of two translated updates and the
/// inverse of a translated update must themselves be translated.
pub fn check_translator<T: Translator + ?Sized>(
    view: &ViewDef,
    translator: &T,
    space: &StateSpace,
) -> Result<TranslatorReport> {
    let table = TranslationTable::build(view, translator, space)?;
    Ok(check_table(&table, space))
}

pub(crate) fn check_table(table: &TranslationTable, space: &StateSpace) -> TranslatorReport {
    let n = space.len();
    let m = table.view_states.len();
    let mut report = TranslatorReport {
        states: n,
        view_states: m,
        translated: 0,
        refused: 0,
        commutativity: None,
        identity: None,
        composition: None,
    };
    let state = |i: usize| space.state(i).clone();

    for s in 0..n {
        for w in 0..m {
            match table.outcome(s, w) {
                Outcome::Translated(t) => {
                    report.translated += 1;
                    if table.image[*t] != w && report.commutativity.is_none() {
                        report.commutativity = Some(Witness {
                            state: state(s),
                            updates: vec![table.view_update(s, w)],
                            expected: Some(state(*t)),
                            actual: None,
                            detail: "view of the translated state differs from the updated view".into(),
                        });
                    }
                    if w == table.image[s] && *t != s && report.identity.is_none() {
                        report.identity = Some(Witness {
                            state: state(s),
                            updates: vec![table.view_update(s, w)],
                            expected: Some(state(*t)),
                            actual: Some(state(s)),
                            detail: "a view update fixing the view moved the base state".into(),
                        });
                    }
                }
                Outcome::Refused(msg) => {
                    report.refused += 1;
                    if w == table.image[s] && report.identity.is_none() {
                        report.identity = Some(Witness {
                            state: state(s),
                            updates: vec![table.view_update(s, w)],
                            expected: None,
                            actual: Some(state(s)),
                            detail: format!("identity view update refused: {msg}"),
                        });
                    }
                }
                Outcome::Failed(msg) => {
                    if report.commutativity.is_none() {
                        report.commutativity = Some(Witness {
                            state: state(s),
                            updates: vec![table.view_update(s, w)],
                            expected: None,
                            actual: None,
                            detail: format!("no translation: {msg}"),
                        });
                    }
                }
            }
        }
    }

    'outer: for s in 0..n {
        for w1 in 0..m {
            let Some(mid) = table.target(s, w1) else { continue };
            // the inverse first, so a failure surfaces as T(u⁻¹u) ≠ T(u⁻¹)T(u)
            let home = table.image[s];
            let order = std::iter::once(home).chain((0..m).filter(|&w| w != home));
            for w2 in order {
                let second = table.outcome(mid, w2);
                let end = match second {
                    Outcome::Translated(e) => *e,
                    Outcome::Refused(msg) if w2 == home => {
                        report.composition = Some(Witness {
                            state: state(s),
                            updates: vec![
                                table.view_update(s, w1),
                                table.update_between(w1, w2),
                                table.view_update(s, w2),
                            ],
                            expected: Some(state(s)),
                            actual: None,
                            detail: format!("the inverse of a translated update is refused: {msg}"),
                        });
                        break 'outer;
                    }
                    _ => continue,
                };
                let direct = table.target(s, w2);
                if direct != Some(end) {
                    report.composition = Some(Witness {
                        state: state(s),
                        updates: vec![
                            table.view_update(s, w1),
                            table.update_between(w1, w2),
                            table.view_update(s, w2),
                        ],
                        expected: direct.map(state),
                        actual: Some(state(end)),
                        detail: if w2 == home {
                            "translating u then its inverse does not restore the state".into()
                        } else {
                            "translation of the composite differs from the composed translations".into()
                        },
                    });
                    break 'outer;
                }
            }
        }
    }
    report
}

/// Result of [`is_translation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationCheck {
    pub states_checked: usize,
    pub refused: usize,
    pub failure: Option<Witness>,
}

impl TranslationCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that translating the fixed view update `u` commutes with the view
/// and fixes the base state wherever `u` fixes the view, at every state where
/// `u` applies.
pub fn is_translation<T: Translator + ?Sized>(
    view: &ViewDef,
    translator: &T,
    u: &ViewUpdate,
    space: &StateSpace,
) -> Result<TranslationCheck> {
    let schema = space.schema();
    view.shape(schema)?;
    let mut check = TranslationCheck {
        states_checked: 0,
        refused: 0,
        failure: None,
    };
    for s in space.states() {
        let before = eval_valid(view, schema, s)?;
        let Some(tables) = before.tables() else {
            return Err(Error::InvalidView(format!("a {} has no table-shaped updates", view.kind())));
        };
        let Ok(after_view) = u.apply_to(tables) else { continue };
        check.states_checked += 1;
        let witness = |detail: String, result: Option<DatabaseState>| Witness {
            state: s.clone(),
            updates: vec![u.clone()],
            expected: result,
            actual: None,
            detail,
        };
        let t = match translator.translate(view, schema, u, s) {
            Ok(t) => t,
            Err(Error::NotTranslatable(_)) => {
                check.refused += 1;
                continue;
            }
            Err(e) => {
                check.failure = Some(witness(format!("no translation: {e}"), None));
                break;
            }
        };
        let next = match t.apply_to(&s.tables) {
            Ok(tables) => DatabaseState::new(tables),
            Err(e) => {
                check.failure = Some(witness(format!("translation does not apply: {e}"), None));
                break;
            }
        };
        if eval_valid(view, schema, &next)?.tables() != Some(&after_view[..]) {
            check.failure = Some(witness("translation does not commute with the view".into(), Some(next)));
            break;
        }
        if after_view == tables && &next != s {
            check.failure = Some(witness("identity view update moved the base state".into(), Some(next)));
            break;
        }
    }
    Ok(check)
}
