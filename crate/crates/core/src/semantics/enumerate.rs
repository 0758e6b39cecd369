use std::collections::BTreeMap;
use std::ops::ControlFlow;

use thiserror::Error;

use super::eval::{find_counterexample, EvalError, QclAssignment};
use super::model::{
    all_world_sets, tuple_count, Interpretation, ModelError, SelectionModel, SelectionTable, World,
    WorldSet, MAX_WORLDS,
};
use crate::syntax::Formula;
use crate::util::product;

/// Largest model count [`enumerate_models`] agrees to stream.
pub const MODEL_LIMIT: u128 = 1 << 32;

/// Largest number of predicate interpretations per frame.
pub const INTERPRETATION_LIMIT: u128 = 1 << 20;

/// Largest world count for [`search_selections`]: the `n·n·2^n` membership
/// bits of a table must fit in a `u128`.
pub const MAX_SEARCH_WORLDS: usize = 3;

/// How `Q` is chosen for each world count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMode {
    /// `Q = 2^S`.
    Powerset,
    /// A fixed `Q` per world count.
    Explicit(BTreeMap<usize, Vec<WorldSet>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_worlds: usize,
    pub max_individuals: usize,
    pub q_mode: QMode,
    /// Include the model with no worlds; off by default.
    pub allow_empty_worlds: bool,
}

impl Bounds {
    pub fn new(max_worlds: usize, max_individuals: usize) -> Self {
        Bounds {
            max_worlds,
            max_individuals,
            q_mode: QMode::Powerset,
            allow_empty_worlds: false,
        }
    }

    pub fn with_q_mode(mut self, q_mode: QMode) -> Self {
        self.q_mode = q_mode;
        self
    }

    pub fn allowing_empty_worlds(mut self) -> Self {
        self.allow_empty_worlds = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bounds must allow at least one world")]
    NoWorlds,
    #[error("bounds must allow at least one individual")]
    NoIndividuals,
    #[error("at most {max} worlds are supported here, requested {requested}")]
    TooManyWorlds { requested: usize, max: usize },
    #[error("no propositional domain given for {0} world(s)")]
    MissingPropDomain(usize),
    #[error("propositional domain for {worlds} world(s): {source}")]
    InvalidPropDomain { worlds: usize, source: ModelError },
    #[error("{what} needs {needed} cases, above the limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: String,
        limit: u128,
    },
}

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// World count, individual count and `Q` of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub worlds: usize,
    pub individuals: usize,
    pub props: Vec<WorldSet>,
}

impl Frame {
    /// The model over this frame with `f = ∅` everywhere and no predicates.
    pub fn skeleton(&self) -> Result<SelectionModel, ModelError> {
        SelectionModel::new(self.worlds, self.individuals)?.with_props(self.props.iter().copied())
    }
}

/// Frames within the bounds, by increasing world count then individual count.
pub fn frames(bounds: &Bounds) -> Result<Vec<Frame>, BoundsError> {
    if bounds.max_individuals == 0 {
        return Err(BoundsError::NoIndividuals);
    }
    if bounds.max_worlds > MAX_WORLDS {
        return Err(BoundsError::TooManyWorlds {
            requested: bounds.max_worlds,
            max: MAX_WORLDS,
        });
    }
    let first = if bounds.allow_empty_worlds { 0 } else { 1 };
    if bounds.max_worlds < first {
        return Err(BoundsError::NoWorlds);
    }
    let mut out = Vec::new();
    for worlds in first..=bounds.max_worlds {
        let props = match &bounds.q_mode {
            QMode::Powerset => all_world_sets(worlds).collect(),
            QMode::Explicit(by_size) => by_size
                .get(&worlds)
                .cloned()
                .ok_or(BoundsError::MissingPropDomain(worlds))?,
        };
        for individuals in 1..=bounds.max_individuals {
            let frame = Frame {
                worlds,
                individuals,
                props: props.clone(),
            };
            let skeleton = frame
                .skeleton()
                .map_err(|source| BoundsError::InvalidPropDomain { worlds, source })?;
            out.push(Frame {
                props: skeleton.props().to_vec(),
                ..frame
            });
        }
    }
    Ok(out)
}

fn extension_choices(frame: &Frame, arity: usize) -> Option<u128> {
    let tuples = tuple_count(frame.individuals, arity)?;
    (tuples < 64).then(|| 1u128 << tuples)
}

/// Number of predicate interpretations over a frame.
pub fn interpretation_count(frame: &Frame, predicates: &[(String, usize)]) -> Option<u128> {
    predicates.iter().try_fold(1u128, |acc, (_, arity)| {
        let per_world = extension_choices(frame, *arity)?;
        acc.checked_mul(per_world.checked_pow(frame.worlds as u32)?)
    })
}

/// Every interpretation of the predicates over the frame, in a fixed order.
pub fn interpretations(
    frame: &Frame,
    predicates: &[(String, usize)],
) -> Result<impl Iterator<Item = Interpretation>, BoundsError> {
    let count = interpretation_count(frame, predicates);
    if count.is_none_or(|c| c > INTERPRETATION_LIMIT) {
        return Err(BoundsError::ResourceLimit {
            what: "predicate interpretation",
            needed: count.map_or_else(|| "overflowing".into(), |c| c.to_string()),
            limit: INTERPRETATION_LIMIT,
        });
    }
    let worlds = frame.worlds;
    let mut radices = Vec::new();
    for (_, arity) in predicates {
        let choices = extension_choices(frame, *arity).expect("checked above") as usize;
        radices.extend(std::iter::repeat_n(choices, worlds));
    }
    let predicates = predicates.to_vec();
    Ok(product(radices).map(move |digits| {
        let mut interp = Interpretation::default();
        for (k, (pred, arity)) in predicates.iter().enumerate() {
            let ext = digits[k * worlds..(k + 1) * worlds].iter().map(|&d| d as u64).collect();
            interp.insert(pred, *arity, ext);
        }
        interp
    }))
}

/// Every selection table over `worlds` worlds.
pub fn selection_tables(worlds: usize) -> impl Iterator<Item = Vec<WorldSet>> {
    let entries = SelectionTable::entry_count(worlds);
    product(vec![1usize << worlds; entries])
        .map(|digits| digits.into_iter().map(|d| WorldSet(d as u64)).collect())
}

/// Number of selection tables over `worlds` worlds, `(2^n)^(n·2^n)`.
pub fn selection_table_count(worlds: usize) -> Option<u128> {
    (1u128 << worlds).checked_pow(SelectionTable::entry_count(worlds) as u32)
}

/// Number of models [`enumerate_models`] would produce.
pub fn model_count(bounds: &Bounds, predicates: &[(String, usize)]) -> Result<Option<u128>, BoundsError> {
    let mut total = Some(0u128);
    for frame in frames(bounds)? {
        let here = interpretation_count(&frame, predicates)
            .zip(selection_table_count(frame.worlds))
            .and_then(|(a, b)| a.checked_mul(b));
        total = total.zip(here).and_then(|(t, h)| t.checked_add(h));
    }
    Ok(total)
}

/// Every model within the bounds, one per (frame, interpretation, selection
/// table), without duplicates.
pub fn enumerate_models(
    bounds: &Bounds,
    predicates: &[(String, usize)],
) -> Result<impl Iterator<Item = SelectionModel>, BoundsError> {
    let count = model_count(bounds, predicates)?;
    if count.is_none_or(|c| c > MODEL_LIMIT) {
        return Err(BoundsError::ResourceLimit {
            what: "model enumeration",
            needed: count.map_or_else(|| "overflowing".into(), |c| c.to_string()),
            limit: MODEL_LIMIT,
        });
    }
    models_over(frames(bounds)?, predicates)
}

fn models_over(
    frames: Vec<Frame>,
    predicates: &[(String, usize)],
) -> Result<impl Iterator<Item = SelectionModel>, BoundsError> {
    let mut streams = Vec::new();
    for frame in frames {
        let skeleton = frame.skeleton().expect("frames are validated");
        let worlds = frame.worlds;
        let interps = interpretations(&frame, predicates)?;
        streams.push(interps.flat_map(move |interp| {
            let mut base = skeleton.clone();
            base.set_interpretation(interp);
            selection_tables(worlds).map(move |table| {
                let mut model = base.clone();
                model.load_selection(&table);
                model
            })
        }));
    }
    Ok(streams.into_iter().flatten())
}

/// Models with exactly `worlds` worlds and `individuals` individuals.
pub fn enumerate_models_exact(
    worlds: usize,
    individuals: usize,
    q_mode: QMode,
    predicates: &[(String, usize)],
) -> Result<impl Iterator<Item = SelectionModel>, BoundsError> {
    let bounds = Bounds {
        max_worlds: worlds,
        max_individuals: individuals,
        q_mode,
        allow_empty_worlds: worlds == 0,
    };
    let exact: Vec<Frame> = frames(&bounds)?
        .into_iter()
        .filter(|f| f.worlds == worlds && f.individuals == individuals)
        .collect();
    let count = exact.iter().try_fold(0u128, |acc, f| {
        let here = interpretation_count(f, predicates)?.checked_mul(selection_table_count(f.worlds)?)?;
        acc.checked_add(here)
    });
    if count.is_none_or(|c| c > MODEL_LIMIT) {
        return Err(BoundsError::ResourceLimit {
            what: "model enumeration",
            needed: count.map_or_else(|| "overflowing".into(), |c| c.to_string()),
            limit: MODEL_LIMIT,
        });
    }
    models_over(exact, predicates)
}

/// What a visit of [`search_selections`] reports about one table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Probe {
    /// Membership bits read, bit `(s·2^n + A)·n + t` standing for
    /// `t ∈ f(s, A)`.
    pub accessed: u128,
    /// Whether the table has the property being counted.
    pub hit: bool,
}

/// Tables covered by a search, and how many of them were hits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Coverage {
    pub tables: u128,
    pub hits: u128,
}

/// Exhaustive search over selection tables that only branches on the
/// membership bits `t ∈ f(s, A)` the visitor reads.
///
/// `visit` receives a table in which every bit not yet branched on is
/// clear. Once every bit it reads has been branched on, its outcome is the
/// outcome for every table agreeing on those bits, and the whole class is
/// counted at once. Unless the visitor breaks, `tables` in the result equals
/// [`selection_table_count`].
///
/// The visitor must be deterministic in the table and must report every bit
/// its outcome depends on.
pub fn search_selections<B, F>(worlds: usize, mut visit: F) -> Result<ControlFlow<B, Coverage>, BoundsError>
where
    F: FnMut(&[WorldSet]) -> ControlFlow<B, Probe>,
{
    if worlds > MAX_SEARCH_WORLDS {
        return Err(BoundsError::TooManyWorlds {
            requested: worlds,
            max: MAX_SEARCH_WORLDS,
        });
    }
    let bits = SelectionTable::entry_count(worlds) * worlds;
    let mut table = vec![WorldSet::EMPTY; SelectionTable::entry_count(worlds)];
    let search = Search {
        worlds,
        all: if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 },
        bits,
    };
    Ok(search.explore(&mut table, 0, None, &mut visit))
}

struct Search {
    worlds: usize,
    all: u128,
    bits: usize,
}

impl Search {
    fn explore<B, F>(
        &self,
        table: &mut [WorldSet],
        fixed: u128,
        known: Option<Probe>,
        visit: &mut F,
    ) -> ControlFlow<B, Coverage>
    where
        F: FnMut(&[WorldSet]) -> ControlFlow<B, Probe>,
    {
        let probe = match known {
            Some(p) => p,
            None => visit(table)?,
        };
        let open = probe.accessed & !fixed & self.all;
        if open == 0 {
            let free = self.bits - fixed.count_ones() as usize;
            let tables = 1u128 << free;
            let hits = if probe.hit { tables } else { 0 };
            return ControlFlow::Continue(Coverage { tables, hits });
        }
        let bit = open.trailing_zeros() as usize;
        let (entry, world) = (bit / self.worlds, bit % self.worlds);
        let fixed = fixed | 1 << bit;
        // The clear branch is the table just visited.
        let clear = self.explore(table, fixed, Some(probe), visit)?;
        table[entry] = table[entry].with(World(world));
        let set = self.explore(table, fixed, None, visit);
        table[entry] = table[entry].difference(WorldSet::singleton(World(world)));
        let set = set?;
        ControlFlow::Continue(Coverage {
            tables: clear.tables + set.tables,
            hits: clear.hits + set.hits,
        })
    }
}

/// A model, assignment and world at which a formula fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: SelectionModel,
    pub assignment: QclAssignment,
    pub world: World,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No countermodel within the bounds; `models` is how many were covered.
    Valid { models: u128 },
    Countermodel(Box<Countermodel>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }
}

/// Searches every model within the bounds for a countermodel.
///
/// Predicates come from the formula. Selection tables are searched with
/// [`search_selections`], which covers all of them, so up to
/// [`MAX_SEARCH_WORLDS`] worlds are supported. A reported countermodel has
/// `f = ∅` on entries the search never needed.
pub fn valid_up_to(formula: &Formula, bounds: &Bounds) -> Result<Verdict, SemanticsError> {
    if bounds.max_worlds > MAX_SEARCH_WORLDS {
        return Err(BoundsError::TooManyWorlds {
            requested: bounds.max_worlds,
            max: MAX_SEARCH_WORLDS,
        }
        .into());
    }
    let predicates = formula.predicates();
    let mut models = 0u128;
    for frame in frames(bounds)? {
        let mut model = frame.skeleton()?;
        for interp in interpretations(&frame, &predicates)? {
            model.set_interpretation(interp);
            let flow = search_selections(frame.worlds, |table| {
                model.load_selection(table);
                model.take_accessed();
                match find_counterexample(&model, formula) {
                    Err(e) => ControlFlow::Break(Err(e)),
                    Ok(Some((assignment, world))) => ControlFlow::Break(Ok(Countermodel {
                        model: model.clone(),
                        assignment,
                        world,
                    })),
                    Ok(None) => ControlFlow::Continue(Probe {
                        accessed: model.take_accessed(),
                        hit: true,
                    }),
                }
            })?;
            match flow {
                ControlFlow::Continue(covered) => models += covered.tables,
                ControlFlow::Break(Err(e)) => return Err(e.into()),
                ControlFlow::Break(Ok(cm)) => return Ok(Verdict::Countermodel(Box::new(cm))),
            }
        }
    }
    Ok(Verdict::Valid { models })
}
