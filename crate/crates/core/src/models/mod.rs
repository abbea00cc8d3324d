//! Finite Kripke models for the conditional language.
//!
//! A model carries a pre-order, a ternary selection relation stored
//! extensionally as triples `(w, X, v)`, and a monotone valuation. Sets that do
//! not occur as the middle component of a triple have no successors anywhere.
//! Chellas and Weiss models share this carrier and differ only in the frame
//! condition checked by [`validate`].

pub(crate) mod enumerate;
mod eval;
mod glue;
mod json;
mod search;
mod validate;

pub use enumerate::{enumerate_models, upsets, ModelStream};
pub use eval::{eval, extension, extension_in, satisfies_biset, BiSet, EvalError, Mode};
pub use glue::glue;
pub use json::{ModelFile, TripleFile};
pub use search::countermodel_search;
pub use validate::{validate, Class, Violation};

use crate::syntax::Atom;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Hard limit on the number of worlds, imposed by the bitset representation.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds, as a bitmask over world indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(n: usize) -> WorldSet {
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1 << w)
    }

    pub fn contains(self, w: usize) -> bool {
        self.0 >> w & 1 == 1
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1 << w;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("at most {MAX_WORLDS} worlds are supported, got {0}")]
    TooManyWorlds(usize),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("invalid variable name `{0}`")]
    BadVariable(String),
    #[error("malformed model file: {0}")]
    Json(String),
}

/// A finite model `(W, ≤, R, V)`.
///
/// Immutable once built. Chellas and Weiss models are the same data; which
/// conditions apply is decided by the [`Class`] passed to [`validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct Model {
    names: Vec<String>,
    up: Vec<WorldSet>,
    triples: BTreeSet<(usize, WorldSet, usize)>,
    succ: BTreeMap<WorldSet, Vec<WorldSet>>,
    valuation: BTreeMap<Atom, WorldSet>,
}

pub type ChellasModel = Model;
pub type WeissModel = Model;

/// A model together with a designated world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: Model,
    pub world: usize,
}

impl Model {
    pub fn builder<S: AsRef<str>>(worlds: &[S]) -> ModelBuilder {
        ModelBuilder::new(worlds.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `{v | w ≤ v}`
    pub fn up(&self, w: usize) -> WorldSet {
        self.up[w]
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.up[w].contains(v)
    }

    /// `{v | v ≤ w}`
    pub fn down(&self, w: usize) -> WorldSet {
        (0..self.len()).filter(|&v| self.leq(v, w)).collect()
    }

    pub fn is_upward_closed(&self, x: WorldSet) -> bool {
        x.iter().all(|w| self.up[w].is_subset(x))
    }

    /// Upward closure of a set.
    pub fn up_closure(&self, x: WorldSet) -> WorldSet {
        x.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(self.up[w]))
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, WorldSet, usize)> + '_ {
        self.triples.iter().copied()
    }

    /// Sets occurring as the middle component of some triple.
    pub fn selection_sets(&self) -> impl Iterator<Item = WorldSet> + '_ {
        self.succ.keys().copied()
    }

    /// `{v | R(w, X, v)}`
    pub fn successors(&self, w: usize, x: WorldSet) -> WorldSet {
        self.succ.get(&x).map_or(WorldSet::EMPTY, |s| s[w])
    }

    pub fn valuation(&self) -> &BTreeMap<Atom, WorldSet> {
        &self.valuation
    }

    pub fn val(&self, p: &Atom) -> WorldSet {
        self.valuation.get(p).copied().unwrap_or_default()
    }

    /// True when `≤` relates only equal worlds.
    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|w| self.up[w] == WorldSet::singleton(w))
    }

    pub fn format_set(&self, x: WorldSet) -> String {
        let items: Vec<&str> = x.iter().map(|w| self.name(w)).collect();
        format!("{{{}}}", items.join(","))
    }

    /// Rebuilds with extra triples; used by the enumerator's repair step.
    pub(crate) fn with_triples(&self, triples: BTreeSet<(usize, WorldSet, usize)>) -> Model {
        let mut m = self.clone();
        m.succ = index_triples(m.len(), &triples);
        m.triples = triples;
        m
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order: Vec<String> = (0..self.len())
            .flat_map(|w| self.up[w].iter().filter(move |&v| v != w).map(move |v| (w, v)))
            .map(|(w, v)| format!("{}<={}", self.name(w), self.name(v)))
            .collect();
        let r: Vec<String> = self
            .triples()
            .map(|(w, x, v)| format!("({},{},{})", self.name(w), self.format_set(x), self.name(v)))
            .collect();
        let val: Vec<String> = self
            .valuation
            .iter()
            .map(|(p, s)| format!("{p}={}", self.format_set(*s)))
            .collect();
        write!(
            f,
            "Model {{ W={:?}, order=[{}], R=[{}], V=[{}] }}",
            self.names,
            order.join(" "),
            r.join(" "),
            val.join(" ")
        )
    }
}

fn index_triples(
    n: usize,
    triples: &BTreeSet<(usize, WorldSet, usize)>,
) -> BTreeMap<WorldSet, Vec<WorldSet>> {
    let mut succ: BTreeMap<WorldSet, Vec<WorldSet>> = BTreeMap::new();
    for &(w, x, v) in triples {
        succ.entry(x).or_insert_with(|| vec![WorldSet::EMPTY; n])[w].insert(v);
    }
    succ
}

/// Assembles a [`Model`] from world indices.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    names: Vec<String>,
    up: Vec<WorldSet>,
    close_order: bool,
    triples: BTreeSet<(usize, WorldSet, usize)>,
    valuation: BTreeMap<Atom, WorldSet>,
}

impl ModelBuilder {
    pub fn new(names: Vec<String>) -> Self {
        let up = (0..names.len()).map(WorldSet::singleton).collect();
        ModelBuilder {
            names,
            up,
            close_order: true,
            triples: BTreeSet::new(),
            valuation: BTreeMap::new(),
        }
    }

    /// Adds `w ≤ v`.
    pub fn order(mut self, w: usize, v: usize) -> Self {
        self.up[w].insert(v);
        self
    }

    /// Keeps the order exactly as given instead of taking its reflexive-transitive
    /// closure, so that [`validate`] can report pre-order violations.
    pub fn raw_order(mut self, pairs: &[(usize, usize)]) -> Self {
        self.close_order = false;
        self.up = vec![WorldSet::EMPTY; self.names.len()];
        for &(w, v) in pairs {
            self.up[w].insert(v);
        }
        self
    }

    pub fn triple(mut self, w: usize, x: WorldSet, v: usize) -> Self {
        self.triples.insert((w, x, v));
        self
    }

    pub fn val(mut self, p: &str, x: WorldSet) -> Self {
        self.valuation.insert(Atom::new(p), x);
        self
    }

    pub fn build(self) -> Result<Model, ModelError> {
        let n = self.names.len();
        if n == 0 {
            return Err(ModelError::NoWorlds);
        }
        if n > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(n));
        }
        let mut seen = BTreeSet::new();
        for name in &self.names {
            if !seen.insert(name) {
                return Err(ModelError::DuplicateWorld(name.clone()));
            }
        }
        let all = WorldSet::full(n);
        let dangling = |s: WorldSet| !s.is_subset(all);
        let oob = |w: usize| w >= n;
        if self.up.iter().any(|&s| dangling(s))
            || self.triples.iter().any(|&(w, x, v)| oob(w) || oob(v) || dangling(x))
            || self.valuation.values().any(|&s| dangling(s))
        {
            return Err(ModelError::UnknownWorld("<index out of range>".into()));
        }
        for p in self.valuation.keys() {
            if !Atom::is_valid_name(p.as_str()) {
                return Err(ModelError::BadVariable(p.to_string()));
            }
        }
        let mut up = self.up;
        if self.close_order {
            up = reflexive_transitive_closure(up);
        }
        let succ = index_triples(n, &self.triples);
        Ok(Model {
            names: self.names,
            up,
            triples: self.triples,
            succ,
            valuation: self.valuation,
        })
    }
}

pub(crate) fn reflexive_transitive_closure(mut up: Vec<WorldSet>) -> Vec<WorldSet> {
    for (w, s) in up.iter_mut().enumerate() {
        s.insert(w);
    }
    loop {
        let mut changed = false;
        for w in 0..up.len() {
            let next = up[w].iter().fold(up[w], |acc, v| acc.union(up[v]));
            if next != up[w] {
                up[w] = next;
                changed = true;
            }
        }
        if !changed {
            return up;
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `W = {w, v, u}`, `≤` the reflexive closure of `{(w, v)}`, `R = {(w, W, u)}`, `V ≡ ∅`.
    pub fn prop5() -> Model {
        Model::builder(&["w", "v", "u"])
            .order(0, 1)
            .triple(0, WorldSet::full(3), 2)
            .build()
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worldset_ops() {
        let s: WorldSet = [0, 2, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert!(WorldSet::singleton(2).is_subset(s));
        assert_eq!(WorldSet::full(3), WorldSet(0b111));
        assert_eq!(WorldSet::full(64), WorldSet(u64::MAX));
    }

    #[test]
    fn closure_on_build() {
        let m = Model::builder(&["a", "b", "c"]).order(0, 1).order(1, 2).build().unwrap();
        assert!(m.leq(0, 2) && m.leq(1, 1) && !m.leq(2, 0));
        assert_eq!(m.down(2), WorldSet(0b111));
        assert!(m.is_upward_closed(WorldSet(0b110)));
        assert!(!m.is_upward_closed(WorldSet(0b011)));
    }

    #[test]
    fn build_errors() {
        assert_eq!(Model::builder::<&str>(&[]).build(), Err(ModelError::NoWorlds));
        assert!(matches!(
            Model::builder(&["a", "a"]).build(),
            Err(ModelError::DuplicateWorld(_))
        ));
        assert!(matches!(
            Model::builder(&["a"]).triple(0, WorldSet(1), 3).build(),
            Err(ModelError::UnknownWorld(_))
        ));
    }
}
