use super::{Model, WorldSet};
use crate::syntax::Formula;

/// Which satisfaction relation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Chellas semantics: `ψ □→ χ` holds at `w` when every `v ≥ w` sends all
    /// its `R_‖ψ‖`-successors into `‖χ‖`.
    Int,
    /// `ψ □→ χ` is checked at `w` alone. `◇→` is not part of this language.
    Weiss,
    /// [`Mode::Weiss`] together with the classical clause for `◇→`: some
    /// `R_‖ψ‖`-successor of `w` satisfies `χ`. Used to compare against the
    /// first-order reading over discrete models.
    WeissExtended,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("`~>` cannot be evaluated in weiss mode")]
    DiaArrowInWeiss,
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("modal operators cannot be evaluated in a conditional model; translate first")]
    ModalOperator,
}

/// The pair `(Γ, Δ)` of formulas that should hold and fail, respectively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiSet {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
}

impl BiSet {
    pub fn new(gamma: Vec<Formula>, delta: Vec<Formula>) -> Self {
        BiSet { gamma, delta }
    }
}

/// Truth set `{w | w ⊨ φ}` under the given mode.
pub fn extension_in(model: &Model, mode: Mode, f: &Formula) -> Result<WorldSet, EvalError> {
    let all = model.worlds();
    Ok(match f {
        Formula::Var(p) => model.val(p),
        Formula::Top => all,
        Formula::Bot => WorldSet::EMPTY,
        Formula::And(a, b) => extension_in(model, mode, a)?.intersection(extension_in(model, mode, b)?),
        Formula::Or(a, b) => extension_in(model, mode, a)?.union(extension_in(model, mode, b)?),
        Formula::Imp(a, b) => {
            let sa = extension_in(model, mode, a)?;
            let sb = extension_in(model, mode, b)?;
            let bad = WorldSet(sa.0 & !sb.0);
            (0..model.len())
                .filter(|&w| model.up(w).intersection(bad).is_empty())
                .collect()
        }
        Formula::BoxArrow(a, b) => {
            let x = extension_in(model, mode, a)?;
            let c = extension_in(model, mode, b)?;
            let local: WorldSet = (0..model.len())
                .filter(|&v| model.successors(v, x).is_subset(c))
                .collect();
            match mode {
                Mode::Int => (0..model.len())
                    .filter(|&w| model.up(w).is_subset(local))
                    .collect(),
                Mode::Weiss | Mode::WeissExtended => local,
            }
        }
        Formula::DiaArrow(a, b) => {
            if mode == Mode::Weiss {
                return Err(EvalError::DiaArrowInWeiss);
            }
            let x = extension_in(model, mode, a)?;
            let c = extension_in(model, mode, b)?;
            (0..model.len())
                .filter(|&w| !model.successors(w, x).intersection(c).is_empty())
                .collect()
        }
        Formula::Box(_) | Formula::Dia(_) => return Err(EvalError::ModalOperator),
    })
}

/// `‖φ‖` under the Chellas relation.
pub fn extension(model: &Model, f: &Formula) -> Result<WorldSet, EvalError> {
    extension_in(model, Mode::Int, f)
}

pub fn eval(model: &Model, mode: Mode, w: usize, f: &Formula) -> Result<bool, EvalError> {
    if w >= model.len() {
        return Err(EvalError::UnknownWorld(w.to_string()));
    }
    Ok(extension_in(model, mode, f)?.contains(w))
}

pub fn satisfies_biset(model: &Model, mode: Mode, w: usize, bs: &BiSet) -> Result<bool, EvalError> {
    for g in &bs.gamma {
        if !eval(model, mode, w, g)? {
            return Ok(false);
        }
    }
    for d in &bs.delta {
        if eval(model, mode, w, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}
