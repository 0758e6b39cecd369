use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Largest world count a model may have; proof sets are 64-bit masks and
/// the selection table has one entry per (world, subset) pair.
pub const MAX_WORLDS: usize = 6;

/// Largest number of argument tuples a predicate may have (`|D|^arity`).
pub const MAX_TUPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Individual(pub usize);

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

/// A set of worlds as a bitmask; bit `k` stands for world `k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(worlds: usize) -> WorldSet {
        if worlds >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << worlds) - 1)
        }
    }

    pub fn singleton(w: World) -> WorldSet {
        WorldSet(1 << w.0)
    }

    pub fn from_worlds(worlds: impl IntoIterator<Item = World>) -> WorldSet {
        worlds.into_iter().fold(WorldSet::EMPTY, |acc, w| acc.with(w))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, w: World) -> bool {
        w.0 < 64 && self.0 >> w.0 & 1 == 1
    }

    pub fn with(self, w: World) -> WorldSet {
        WorldSet(self.0 | 1 << w.0)
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    /// Complement relative to the first `worlds` worlds.
    pub fn complement(self, worlds: usize) -> WorldSet {
        WorldSet::full(worlds).difference(self)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = World> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(World(k))
        })
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

/// All subsets of `worlds` worlds, by increasing mask.
pub fn all_world_sets(worlds: usize) -> impl Iterator<Item = WorldSet> {
    (0..1u64 << worlds).map(WorldSet)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model may have at most {max} worlds, got {worlds}")]
    TooManyWorlds { worlds: usize, max: usize },
    #[error("the world domain must be non-empty")]
    NoWorlds,
    #[error("the individual domain must be non-empty")]
    NoIndividuals,
    #[error("the propositional domain must be non-empty")]
    EmptyPropositionalDomain,
    #[error("{set} is not a set of worlds of this model")]
    NotASubset { set: WorldSet },
    #[error("world {0} is not in the model")]
    WorldOutOfRange(World),
    #[error("individual {0} is not in the domain")]
    IndividualOutOfRange(Individual),
    #[error("predicate `{0}` is not interpreted")]
    UnknownPredicate(String),
    #[error("predicate `{0}` is declared twice")]
    DuplicatePredicate(String),
    #[error("predicate `{pred}` has arity {expected}, got {found} argument(s)")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate `{pred}` would need {tuples} argument tuples (limit {MAX_TUPLES})")]
    TooManyTuples { pred: String, tuples: usize },
    #[error("selection table needs {expected} entries, got {found}")]
    SelectionTableSize { expected: usize, found: usize },
}

/// Index of an argument tuple among all `individuals^arity` tuples; the
/// first argument varies fastest.
pub fn tuple_index(args: &[Individual], individuals: usize) -> usize {
    args.iter().rev().fold(0, |acc, d| acc * individuals + d.0)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(mut index: usize, arity: usize, individuals: usize) -> Vec<Individual> {
    (0..arity)
        .map(|_| {
            let d = index % individuals;
            index /= individuals;
            Individual(d)
        })
        .collect()
}

/// The extension of one predicate: for each world, a mask over tuple indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredicateTable {
    arity: usize,
    extensions: Vec<u64>,
}

impl PredicateTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn extension(&self, w: World) -> u64 {
        self.extensions[w.0]
    }

    pub fn holds(&self, w: World, tuple: usize) -> bool {
        self.extensions[w.0] >> tuple & 1 == 1
    }

    pub fn extensions(&self) -> &[u64] {
        &self.extensions
    }
}

/// `I(k, s)` for every predicate symbol `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Interpretation {
    tables: BTreeMap<String, PredicateTable>,
}

impl Interpretation {
    pub fn get(&self, pred: &str) -> Option<&PredicateTable> {
        self.tables.get(pred)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PredicateTable)> {
        self.tables.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub(crate) fn insert(&mut self, pred: &str, arity: usize, extensions: Vec<u64>) {
        self.tables
            .insert(pred.to_owned(), PredicateTable { arity, extensions });
    }
}

/// Membership bits of a selection table read since the last `take`. Bit
/// `(s·2^n + A)·n + t` stands for the question `t ∈ f(s, A)`; only the first
/// 128 bits are tracked, which covers every table with at most three worlds.
#[derive(Debug, Default)]
pub(crate) struct AccessLog([AtomicU64; 2]);

impl AccessLog {
    fn record(&self, bits: u128) {
        self.0[0].fetch_or(bits as u64, Ordering::Relaxed);
        self.0[1].fetch_or((bits >> 64) as u64, Ordering::Relaxed);
    }

    pub(crate) fn take(&self) -> u128 {
        let lo = self.0[0].swap(0, Ordering::Relaxed);
        let hi = self.0[1].swap(0, Ordering::Relaxed);
        (hi as u128) << 64 | lo as u128
    }
}

impl Clone for AccessLog {
    fn clone(&self) -> Self {
        let copy = AccessLog::default();
        copy.0[0].store(self.0[0].load(Ordering::Relaxed), Ordering::Relaxed);
        copy.0[1].store(self.0[1].load(Ordering::Relaxed), Ordering::Relaxed);
        copy
    }
}

/// The selection function `f : S × 2^S → 2^S` as a table with one entry per
/// (world, subset) pair, at index `s · 2^|S| + A`.
#[derive(Clone, Debug)]
pub struct SelectionTable {
    worlds: usize,
    entries: Vec<WorldSet>,
    log: AccessLog,
}

impl PartialEq for SelectionTable {
    fn eq(&self, other: &Self) -> bool {
        self.worlds == other.worlds && self.entries == other.entries
    }
}

impl Eq for SelectionTable {}

impl SelectionTable {
    pub fn entry_count(worlds: usize) -> usize {
        worlds << worlds
    }

    /// The table that selects `∅` everywhere.
    pub fn empty(worlds: usize) -> Self {
        SelectionTable {
            worlds,
            entries: vec![WorldSet::EMPTY; Self::entry_count(worlds)],
            log: AccessLog::default(),
        }
    }

    pub fn from_entries(worlds: usize, entries: Vec<WorldSet>) -> Result<Self, ModelError> {
        let expected = Self::entry_count(worlds);
        if entries.len() != expected {
            return Err(ModelError::SelectionTableSize {
                expected,
                found: entries.len(),
            });
        }
        let full = WorldSet::full(worlds);
        if let Some(&bad) = entries.iter().find(|e| !e.is_subset(full)) {
            return Err(ModelError::NotASubset { set: bad });
        }
        Ok(SelectionTable {
            worlds,
            entries,
            log: AccessLog::default(),
        })
    }

    pub fn index(&self, s: World, set: WorldSet) -> usize {
        (s.0 << self.worlds) + set.0 as usize
    }

    /// `f(s, A)`.
    pub fn get(&self, s: World, set: WorldSet) -> WorldSet {
        self.get_within(s, set, WorldSet::full(self.worlds))
    }

    /// `f(s, A) ∩ mask`; only the membership of worlds in `mask` is read.
    pub fn get_within(&self, s: World, set: WorldSet, mask: WorldSet) -> WorldSet {
        let i = self.index(s, set);
        let offset = i * self.worlds;
        if offset < 128 {
            self.log.record((mask.0 as u128) << offset);
        }
        self.entries[i].intersection(mask)
    }

    /// `t ∈ f(s, A)`.
    pub fn contains(&self, s: World, set: WorldSet, t: World) -> bool {
        !self.get_within(s, set, WorldSet::singleton(t)).is_empty()
    }

    pub fn entries(&self) -> &[WorldSet] {
        &self.entries
    }

    pub(crate) fn set_index(&mut self, index: usize, value: WorldSet) {
        self.entries[index] = value;
    }

    pub(crate) fn load(&mut self, entries: &[WorldSet]) {
        self.entries.copy_from_slice(entries);
    }

    pub(crate) fn take_accessed(&self) -> u128 {
        self.log.take()
    }
}

/// A finite selection-function model `⟨S, f, D, Q, I⟩`.
///
/// Worlds are `0..worlds`, individuals `0..individuals`. `Q` is kept both as
/// a list (for quantification, in increasing mask order) and as a membership
/// mask over subset indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionModel {
    worlds: usize,
    individuals: usize,
    props: Vec<WorldSet>,
    prop_members: u64,
    selection: SelectionTable,
    interp: Interpretation,
}

impl SelectionModel {
    /// A model with `Q = 2^S`, `f` selecting `∅` everywhere and no predicates.
    pub fn new(worlds: usize, individuals: usize) -> Result<Self, ModelError> {
        if worlds > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds {
                worlds,
                max: MAX_WORLDS,
            });
        }
        if individuals == 0 {
            return Err(ModelError::NoIndividuals);
        }
        let props: Vec<WorldSet> = all_world_sets(worlds).collect();
        Ok(SelectionModel {
            worlds,
            individuals,
            prop_members: members_mask(&props),
            props,
            selection: SelectionTable::empty(worlds),
            interp: Interpretation::default(),
        })
    }

    /// Replaces `Q`. Duplicates are dropped and the order normalized.
    pub fn with_props(mut self, props: impl IntoIterator<Item = WorldSet>) -> Result<Self, ModelError> {
        self.set_props(props)?;
        Ok(self)
    }

    pub fn set_props(&mut self, props: impl IntoIterator<Item = WorldSet>) -> Result<(), ModelError> {
        let mut props: Vec<WorldSet> = props.into_iter().collect();
        props.sort();
        props.dedup();
        if props.is_empty() {
            return Err(ModelError::EmptyPropositionalDomain);
        }
        let full = self.world_set();
        if let Some(&bad) = props.iter().find(|p| !p.is_subset(full)) {
            return Err(ModelError::NotASubset { set: bad });
        }
        self.prop_members = members_mask(&props);
        self.props = props;
        Ok(())
    }

    pub fn with_selection(mut self, table: SelectionTable) -> Result<Self, ModelError> {
        if table.worlds != self.worlds {
            return Err(ModelError::SelectionTableSize {
                expected: SelectionTable::entry_count(self.worlds),
                found: table.entries.len(),
            });
        }
        self.selection = table;
        Ok(self)
    }

    /// Sets `f(s, set) = value`.
    pub fn set_selection(&mut self, s: World, set: WorldSet, value: WorldSet) -> Result<(), ModelError> {
        self.check_world(s)?;
        self.check_subset(set)?;
        self.check_subset(value)?;
        let i = self.selection.index(s, set);
        self.selection.set_index(i, value);
        Ok(())
    }

    pub fn declare_predicate(&mut self, pred: &str, arity: usize) -> Result<(), ModelError> {
        if self.interp.get(pred).is_some() {
            return Err(ModelError::DuplicatePredicate(pred.to_owned()));
        }
        let tuples = tuple_count(self.individuals, arity)
            .filter(|&t| t <= MAX_TUPLES)
            .ok_or_else(|| ModelError::TooManyTuples {
                pred: pred.to_owned(),
                tuples: tuple_count(self.individuals, arity).unwrap_or(usize::MAX),
            })?;
        let _ = tuples;
        self.interp.insert(pred, arity, vec![0; self.worlds]);
        Ok(())
    }

    /// Adds `args` to `I(pred, w)`.
    pub fn add_fact(&mut self, pred: &str, w: World, args: &[Individual]) -> Result<(), ModelError> {
        self.check_world(w)?;
        let table = self
            .interp
            .tables
            .get_mut(pred)
            .ok_or_else(|| ModelError::UnknownPredicate(pred.to_owned()))?;
        if table.arity != args.len() {
            return Err(ModelError::ArityMismatch {
                pred: pred.to_owned(),
                expected: table.arity,
                found: args.len(),
            });
        }
        if let Some(&bad) = args.iter().find(|d| d.0 >= self.individuals) {
            return Err(ModelError::IndividualOutOfRange(bad));
        }
        table.extensions[w.0] |= 1 << tuple_index(args, self.individuals);
        Ok(())
    }

    /// Sets `I(pred, w)` from a tuple-index mask.
    pub fn set_extension(&mut self, pred: &str, w: World, mask: u64) -> Result<(), ModelError> {
        self.check_world(w)?;
        let individuals = self.individuals;
        let table = self
            .interp
            .tables
            .get_mut(pred)
            .ok_or_else(|| ModelError::UnknownPredicate(pred.to_owned()))?;
        let tuples = individuals.pow(table.arity as u32);
        if tuples < 64 && mask >> tuples != 0 {
            return Err(ModelError::TooManyTuples {
                pred: pred.to_owned(),
                tuples: 64 - mask.leading_zeros() as usize,
            });
        }
        table.extensions[w.0] = mask;
        Ok(())
    }

    pub(crate) fn set_interpretation(&mut self, interp: Interpretation) {
        self.interp = interp;
    }

    pub(crate) fn load_selection(&mut self, entries: &[WorldSet]) {
        self.selection.load(entries);
    }

    /// Selection membership bits read since the last call.
    pub(crate) fn take_accessed(&self) -> u128 {
        self.selection.take_accessed()
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn world_set(&self) -> WorldSet {
        WorldSet::full(self.worlds)
    }

    pub fn world_iter(&self) -> impl Iterator<Item = World> {
        (0..self.worlds).map(World)
    }

    pub fn individuals(&self) -> usize {
        self.individuals
    }

    pub fn props(&self) -> &[WorldSet] {
        &self.props
    }

    pub fn is_prop(&self, set: WorldSet) -> bool {
        set.is_subset(self.world_set()) && self.prop_members >> set.0 & 1 == 1
    }

    pub fn selection(&self) -> &SelectionTable {
        &self.selection
    }

    /// `f(s, set)`.
    pub fn select(&self, s: World, set: WorldSet) -> WorldSet {
        self.selection.get(s, set)
    }

    /// `t ∈ f(s, set)`.
    pub fn selects(&self, s: World, set: WorldSet, t: World) -> bool {
        self.selection.contains(s, set, t)
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    pub fn check_world(&self, w: World) -> Result<(), ModelError> {
        if w.0 < self.worlds {
            Ok(())
        } else {
            Err(ModelError::WorldOutOfRange(w))
        }
    }

    fn check_subset(&self, set: WorldSet) -> Result<(), ModelError> {
        if set.is_subset(self.world_set()) {
            Ok(())
        } else {
            Err(ModelError::NotASubset { set })
        }
    }
}

fn members_mask(props: &[WorldSet]) -> u64 {
    props.iter().fold(0, |acc, p| acc | 1 << p.0)
}

pub(crate) fn tuple_count(individuals: usize, arity: usize) -> Option<usize> {
    individuals.checked_pow(arity as u32)
}
