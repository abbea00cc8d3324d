//! Finite Kripke sheaves over the signature `{p¹} ∪ {R³, O¹, S¹, In²}` and
//! intuitionistic first-order satisfaction on them.

mod classical;
mod eval;
mod th;

pub use classical::{classical_to_sheaf, th_battery, upset_sheaf, ObjectFrame, Selection};
pub use eval::{eval_fo, Assignment, FoError};
pub use th::{check_th, th_sentences, ThFailure, ThSentence};

use crate::syntax::Atom;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// The classical structure at one node. Elements are indices into the node's domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Structure {
    pub objects: BTreeSet<usize>,
    pub sets: BTreeSet<usize>,
    /// Pairs `(a, b)` with `a` an element of `b`.
    pub member: BTreeSet<(usize, usize)>,
    pub r: BTreeSet<(usize, usize, usize)>,
    pub preds: BTreeMap<Atom, BTreeSet<usize>>,
}

impl Structure {
    pub fn pred(&self, p: &Atom) -> Option<&BTreeSet<usize>> {
        self.preds.get(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeSheaf {
    names: Vec<String>,
    /// `leq[w][v]` iff `w ≤ v`; reflexive and transitive.
    leq: Vec<Vec<bool>>,
    above: Vec<Vec<usize>>,
    domains: Vec<Vec<String>>,
    index: Vec<HashMap<String, usize>>,
    interp: Vec<Structure>,
    /// Declared transition maps; `None` marks an element the map leaves out.
    trans: BTreeMap<(usize, usize), Vec<Option<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("a sheaf needs at least one node")]
    NoNodes,
    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("element `{element}` is declared twice at node `{node}`")]
    DuplicateElement { node: String, element: String },
    #[error("unknown element `{element}` at node `{node}`")]
    UnknownElement { node: String, element: String },
    #[error("`{0}` is not a valid predicate name")]
    BadPredicate(String),
    #[error("transition key `{0}` is not of the form `w>v`")]
    BadTransitionKey(String),
    #[error("the model's order is not discrete")]
    NotDiscrete,
    #[error("too many worlds ({0}) for a sheaf of all subsets")]
    TooLarge(usize),
    #[error("object frame: {0}")]
    Frame(String),
    #[error("invalid sheaf JSON: {0}")]
    Json(String),
}

/// A failed sheaf condition, with element and node names as witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafViolation {
    EmptyDomain { node: String },
    MissingTransition { from: String, to: String },
    /// A map is declared for a pair that is not in the order.
    StrayTransition { from: String, to: String },
    Unmapped { from: String, to: String, element: String },
    Identity { node: String, element: String, image: String },
    Composition { w: String, v: String, u: String, element: String, direct: String, composed: String },
    Homomorphism { from: String, to: String, relation: String, tuple: Vec<String> },
}

impl SheafViolation {
    pub fn condition(&self) -> &'static str {
        match self {
            SheafViolation::EmptyDomain { .. } => "domain",
            SheafViolation::MissingTransition { .. }
            | SheafViolation::StrayTransition { .. }
            | SheafViolation::Unmapped { .. } => "transition",
            SheafViolation::Identity { .. } => "identity",
            SheafViolation::Composition { .. } => "composition",
            SheafViolation::Homomorphism { .. } => "homomorphism",
        }
    }
}

impl fmt::Display for SheafViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.condition())?;
        match self {
            SheafViolation::EmptyDomain { node } => write!(f, "node {node} has an empty domain"),
            SheafViolation::MissingTransition { from, to } => write!(f, "no map from {from} to {to}"),
            SheafViolation::StrayTransition { from, to } => write!(f, "map from {from} to {to}, but {from} is not below {to}"),
            SheafViolation::Unmapped { from, to, element } => {
                write!(f, "the map from {from} to {to} leaves {element} out")
            }
            SheafViolation::Identity { node, element, image } => {
                write!(f, "the map at {node} sends {element} to {image}")
            }
            SheafViolation::Composition { w, v, u, element, direct, composed } => write!(
                f,
                "witness ({w}, {v}, {u}): {element} goes to {direct} directly but to {composed} through {v}"
            ),
            SheafViolation::Homomorphism { from, to, relation, tuple } => {
                write!(f, "{relation}({}) holds at {from} but its image fails at {to}", tuple.join(", "))
            }
        }
    }
}

impl KripkeSheaf {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn node_name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.leq[w][v]
    }

    /// Nodes `v ≥ w`, including `w`.
    pub fn above(&self, w: usize) -> &[usize] {
        &self.above[w]
    }

    pub fn domain(&self, w: usize) -> &[String] {
        &self.domains[w]
    }

    pub fn element(&self, w: usize, name: &str) -> Option<usize> {
        self.index[w].get(name).copied()
    }

    pub fn structure(&self, w: usize) -> &Structure {
        &self.interp[w]
    }

    /// The map `H_wv`, if declared and total. `H_ww` defaults to the identity.
    pub fn transition(&self, w: usize, v: usize) -> Option<Vec<usize>> {
        match self.trans.get(&(w, v)) {
            Some(m) => m.iter().copied().collect(),
            None if w == v => Some((0..self.domains[w].len()).collect()),
            None => None,
        }
    }

    pub(crate) fn image(&self, w: usize, v: usize, a: usize) -> Option<usize> {
        match self.trans.get(&(w, v)) {
            Some(m) => m.get(a).copied().flatten(),
            None if w == v => Some(a),
            None => None,
        }
    }

    pub fn from_json(text: &str) -> Result<KripkeSheaf, SheafError> {
        let file: SheafFile = serde_json::from_str(text).map_err(|e| SheafError::Json(e.to_string()))?;
        file.to_sheaf()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SheafFile::from_sheaf(self)).expect("sheaf files serialize")
    }
}

/// Reflexive-transitive closure of the given pairs, as a matrix.
pub(crate) fn close_order(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for (w, row) in leq.iter_mut().enumerate() {
        row[w] = true;
    }
    for (a, b) in pairs {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    leq
}

/// Checks the identity, composition and homomorphism conditions.
pub fn validate_sheaf(s: &KripkeSheaf) -> Vec<SheafViolation> {
    let mut out = Vec::new();
    let n = s.len();
    let name = |w: usize| s.names[w].clone();
    let el = |w: usize, a: usize| s.domains[w][a].clone();
    for w in 0..n {
        if s.domains[w].is_empty() {
            out.push(SheafViolation::EmptyDomain { node: name(w) });
        }
    }
    for &(w, v) in s.trans.keys() {
        if !s.leq[w][v] {
            out.push(SheafViolation::StrayTransition { from: name(w), to: name(v) });
        }
    }
    let mut total = vec![vec![false; n]; n];
    for w in 0..n {
        for &v in &s.above[w] {
            match s.trans.get(&(w, v)) {
                None if w != v => out.push(SheafViolation::MissingTransition { from: name(w), to: name(v) }),
                None => total[w][v] = true,
                Some(m) => {
                    let mut ok = true;
                    for (a, img) in m.iter().enumerate() {
                        if img.is_none() {
                            ok = false;
                            out.push(SheafViolation::Unmapped { from: name(w), to: name(v), element: el(w, a) });
                        }
                    }
                    total[w][v] = ok;
                }
            }
        }
    }
    for w in 0..n {
        if total[w][w] {
            for a in 0..s.domains[w].len() {
                let b = s.image(w, w, a).unwrap();
                if b != a {
                    out.push(SheafViolation::Identity { node: name(w), element: el(w, a), image: el(w, b) });
                }
            }
        }
    }
    for w in 0..n {
        for &v in &s.above[w] {
            for &u in &s.above[v] {
                if !(total[w][v] && total[v][u] && total[w][u]) {
                    continue;
                }
                for a in 0..s.domains[w].len() {
                    let direct = s.image(w, u, a).unwrap();
                    let composed = s.image(v, u, s.image(w, v, a).unwrap()).unwrap();
                    if direct != composed {
                        out.push(SheafViolation::Composition {
                            w: name(w),
                            v: name(v),
                            u: name(u),
                            element: el(w, a),
                            direct: el(u, direct),
                            composed: el(u, composed),
                        });
                    }
                }
            }
        }
    }
    for w in 0..n {
        for &v in &s.above[w] {
            if !total[w][v] {
                continue;
            }
            let h = |a: usize| s.image(w, v, a).unwrap();
            let (sw, sv) = (&s.interp[w], &s.interp[v]);
            let mut fail = |relation: &str, tuple: Vec<usize>| {
                out.push(SheafViolation::Homomorphism {
                    from: name(w),
                    to: name(v),
                    relation: relation.to_string(),
                    tuple: tuple.into_iter().map(|a| el(w, a)).collect(),
                });
            };
            for &a in &sw.objects {
                if !sv.objects.contains(&h(a)) {
                    fail("O", vec![a]);
                }
            }
            for &a in &sw.sets {
                if !sv.sets.contains(&h(a)) {
                    fail("S", vec![a]);
                }
            }
            for &(a, b) in &sw.member {
                if !sv.member.contains(&(h(a), h(b))) {
                    fail("In", vec![a, b]);
                }
            }
            for &(a, b, c) in &sw.r {
                if !sv.r.contains(&(h(a), h(b), h(c))) {
                    fail("R", vec![a, b, c]);
                }
            }
            for (p, ext) in &sw.preds {
                for &a in ext {
                    if !sv.pred(p).is_some_and(|e| e.contains(&h(a))) {
                        fail(p.as_str(), vec![a]);
                    }
                }
            }
        }
    }
    out
}

/// On-disk form of a sheaf. Element ids are local to each node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafFile {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub domains: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub interp: BTreeMap<String, InterpFile>,
    /// Keyed by `"w>v"`; each map sends element ids of `w` to element ids of `v`.
    #[serde(default)]
    pub transitions: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpFile {
    #[serde(rename = "O", default)]
    pub objects: Vec<String>,
    #[serde(rename = "S", default)]
    pub sets: Vec<String>,
    #[serde(rename = "In", default)]
    pub member: Vec<(String, String)>,
    #[serde(rename = "R", default)]
    pub r: Vec<(String, String, String)>,
    /// Extensions of the propositional predicates.
    #[serde(flatten)]
    pub preds: BTreeMap<String, Vec<String>>,
}

impl SheafFile {
    /// Resolves names. The order is closed under reflexivity and transitivity.
    pub fn to_sheaf(&self) -> Result<KripkeSheaf, SheafError> {
        if self.nodes.is_empty() {
            return Err(SheafError::NoNodes);
        }
        let n = self.nodes.len();
        let mut node_ix = HashMap::new();
        for (i, name) in self.nodes.iter().enumerate() {
            if node_ix.insert(name.as_str(), i).is_some() {
                return Err(SheafError::DuplicateNode(name.clone()));
            }
        }
        let node = |name: &str| node_ix.get(name).copied().ok_or_else(|| SheafError::UnknownNode(name.to_string()));

        let mut pairs = Vec::with_capacity(self.order.len());
        for (a, b) in &self.order {
            pairs.push((node(a)?, node(b)?));
        }
        let leq = close_order(n, pairs);
        let above = (0..n).map(|w| (0..n).filter(|&v| leq[w][v]).collect()).collect();

        let mut domains = vec![Vec::new(); n];
        let mut index = vec![HashMap::new(); n];
        for (name, elems) in &self.domains {
            let w = node(name)?;
            for e in elems {
                if index[w].insert(e.clone(), domains[w].len()).is_some() {
                    return Err(SheafError::DuplicateElement { node: name.clone(), element: e.clone() });
                }
                domains[w].push(e.clone());
            }
        }
        let elem = |w: usize, e: &str| {
            index[w].get(e).copied().ok_or_else(|| SheafError::UnknownElement {
                node: self.nodes[w].clone(),
                element: e.to_string(),
            })
        };

        let mut interp = vec![Structure::default(); n];
        for (name, file) in &self.interp {
            let w = node(name)?;
            let st = &mut interp[w];
            for e in &file.objects {
                st.objects.insert(elem(w, e)?);
            }
            for e in &file.sets {
                st.sets.insert(elem(w, e)?);
            }
            for (a, b) in &file.member {
                st.member.insert((elem(w, a)?, elem(w, b)?));
            }
            for (a, b, c) in &file.r {
                st.r.insert((elem(w, a)?, elem(w, b)?, elem(w, c)?));
            }
            for (p, ext) in &file.preds {
                if !Atom::is_valid_name(p) {
                    return Err(SheafError::BadPredicate(p.clone()));
                }
                let set = st.preds.entry(Atom::new(p)).or_default();
                for e in ext {
                    set.insert(elem(w, e)?);
                }
            }
        }

        let mut trans = BTreeMap::new();
        for (key, map) in &self.transitions {
            let (a, b) = key.split_once('>').ok_or_else(|| SheafError::BadTransitionKey(key.clone()))?;
            let (w, v) = (node(a.trim())?, node(b.trim())?);
            let mut m = vec![None; domains[w].len()];
            for (x, y) in map {
                m[elem(w, x)?] = Some(elem(v, y)?);
            }
            trans.insert((w, v), m);
        }
        Ok(KripkeSheaf { names: self.nodes.clone(), leq, above, domains, index, interp, trans })
    }

    pub fn from_sheaf(s: &KripkeSheaf) -> SheafFile {
        let n = s.len();
        let el = |w: usize, a: usize| s.domains[w][a].clone();
        let mut order = Vec::new();
        for w in 0..n {
            for v in 0..n {
                if w != v && s.leq[w][v] {
                    order.push((s.names[w].clone(), s.names[v].clone()));
                }
            }
        }
        let domains = (0..n).map(|w| (s.names[w].clone(), s.domains[w].clone())).collect();
        let interp = (0..n)
            .map(|w| {
                let st = &s.interp[w];
                let f = InterpFile {
                    objects: st.objects.iter().map(|&a| el(w, a)).collect(),
                    sets: st.sets.iter().map(|&a| el(w, a)).collect(),
                    member: st.member.iter().map(|&(a, b)| (el(w, a), el(w, b))).collect(),
                    r: st.r.iter().map(|&(a, b, c)| (el(w, a), el(w, b), el(w, c))).collect(),
                    preds: st
                        .preds
                        .iter()
                        .map(|(p, ext)| (p.as_str().to_string(), ext.iter().map(|&a| el(w, a)).collect()))
                        .collect(),
                };
                (s.names[w].clone(), f)
            })
            .collect();
        let transitions = s
            .trans
            .iter()
            .map(|(&(w, v), m)| {
                let key = format!("{}>{}", s.names[w], s.names[v]);
                let map = m
                    .iter()
                    .enumerate()
                    .filter_map(|(a, b)| b.map(|b| (el(w, a), el(v, b))))
                    .collect();
                (key, map)
            })
            .collect();
        SheafFile { nodes: s.names.clone(), order, domains, interp, transitions }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_is_valid() {
        assert!(validate_sheaf(&fixtures::single()).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let s = fixtures::two_nodes().to_sheaf().unwrap();
        assert!(validate_sheaf(&s).is_empty());
        let back = KripkeSheaf::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn dropped_membership_is_a_homomorphism_violation() {
        let mut f = fixtures::two_nodes();
        f.interp.get_mut("v").unwrap().member.clear();
        let v = validate_sheaf(&f.to_sheaf().unwrap());
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], SheafViolation::Homomorphism { relation, tuple, .. }
            if relation == "In" && tuple == &["a".to_string(), "X".to_string()]));
    }

    #[test]
    fn composition_violation_on_a_chain() {
        let f: SheafFile = serde_json::from_str(
            r#"{"nodes":["w","v","u"],"order":[["w","v"],["v","u"]],
               "domains":{"w":["a"],"v":["a"],"u":["a","b"]},
               "interp":{"w":{"O":["a"]},"v":{"O":["a"]},"u":{"O":["a","b"]}},
               "transitions":{"w>v":{"a":"a"},"v>u":{"a":"a"},"w>u":{"a":"b"}}}"#,
        )
        .unwrap();
        let v = validate_sheaf(&f.to_sheaf().unwrap());
        assert!(v.iter().any(|x| matches!(x, SheafViolation::Composition { w, v, u, direct, composed, .. }
            if w == "w" && v == "v" && u == "u" && direct == "b" && composed == "a")));
    }

    #[test]
    fn identity_and_missing_maps() {
        let mut f = fixtures::two_nodes();
        f.transitions.remove("w>v");
        f.transitions.insert("v>v".into(), [("a", "b"), ("X", "X"), ("b", "b")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect());
        let v = validate_sheaf(&f.to_sheaf().unwrap());
        assert!(v.iter().any(|x| matches!(x, SheafViolation::MissingTransition { .. })));
        assert!(v.iter().any(|x| matches!(x, SheafViolation::Identity { element, image, .. } if element == "a" && image == "b")));
    }

    #[test]
    fn dangling_ids_are_errors() {
        let mut f = fixtures::two_nodes();
        f.interp.get_mut("w").unwrap().objects.push("zz".into());
        assert!(matches!(f.to_sheaf(), Err(SheafError::UnknownElement { .. })));
        let mut f = fixtures::two_nodes();
        f.order.push(("w".into(), "nowhere".into()));
        assert_eq!(f.to_sheaf(), Err(SheafError::UnknownNode("nowhere".into())));
        assert!(matches!(KripkeSheaf::from_json("{\"nodes\":[]}"), Err(SheafError::NoNodes)));
    }
}
