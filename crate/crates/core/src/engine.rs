//! The completion of a well-structured transition system: lifted transitions
//! on ideals, post-images of downsets, acceleration of strictly increasing
//! composites, the set-based cover procedure, forward coverability, and the
//! exact backward coverability check for Petri nets.

use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::downset::DownSet;
use crate::error::{Error, Result};
use crate::ideal::{self, Ideal};
use crate::models::PetriNet;
use crate::types::TypeExpr;
use crate::value::Value;

/// Iteration cap for the generic acceleration fallback, used only when no
/// model widening recognizes a strictly increasing composite.
const ACCEL_ITERATION_CAP: u32 = 64;

/// One transition of a model: a partial monotonic concrete step together
/// with its lifting to ideals.
pub trait Transition: Send + Sync {
    fn name(&self) -> &str;
    /// The concrete step; `None` when the input is outside the domain.
    fn apply(&self, v: &Value) -> Result<Option<Value>>;
    /// The lifted step on ideals; `None` when the denotation misses the
    /// domain entirely.
    fn apply_ideal(&self, ideal: &Ideal) -> Result<Option<Ideal>>;
}

/// A model hook that recognizes the least upper bound of an iterated
/// strictly increasing composite (omega-widening for markings, star-append
/// for channel products).
pub trait Widening: Send + Sync {
    fn widen(&self, before: &Ideal, after: &Ideal) -> Option<Ideal>;
}

/// A well-structured transition system instance, ready for the completion
/// machinery. Immutable after construction.
#[derive(Clone)]
pub struct Model {
    state_type: TypeExpr,
    transitions: Vec<Arc<dyn Transition>>,
    widening: Option<Arc<dyn Widening>>,
}

/// Search budgets. Every field must be at least 1; exhausting any of them
/// ends the cover procedure with [`CoverStatus::BudgetExhausted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_rounds: u64,
    pub max_composite_len: usize,
    pub max_adds: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_rounds: 64,
            max_composite_len: 4,
            max_adds: 4096,
        }
    }
}

impl Budget {
    fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 || self.max_composite_len == 0 || self.max_adds == 0 {
            return Err(Error::Budget("budget fields must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of accelerating one composite at one ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accelerated {
    pub ideal: Ideal,
    /// False when the fallback iteration hit its cap before stabilizing;
    /// the returned ideal then under-approximates the true limit.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStatus {
    Complete,
    BudgetExhausted,
}

impl CoverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverStatus::Complete => "complete",
            CoverStatus::BudgetExhausted => "budget",
        }
    }
}

/// Deterministic counters describing how much of the budget a run consumed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    /// Rounds of the outer loop that ran.
    pub iterations: u64,
    /// Defined composite/part pairs whose acceleration was evaluated.
    pub accelerations_applied: u64,
    /// Composite/part pairs examined, defined or not.
    pub composites_explored: u64,
    /// Ideals actually added to the antichain.
    pub adds: u64,
    /// Accelerations that hit the iteration cap without stabilizing.
    pub truncated_accelerations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub cover: DownSet,
    pub status: CoverStatus,
    pub stats: CoverStats,
}

/// Outcome of a forward coverability query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

impl Model {
    pub fn new(
        state_type: TypeExpr,
        transitions: Vec<Arc<dyn Transition>>,
        widening: Option<Arc<dyn Widening>>,
    ) -> Model {
        Model {
            state_type,
            transitions,
            widening,
        }
    }

    pub fn state_type(&self) -> &TypeExpr {
        &self.state_type
    }

    pub fn transitions(&self) -> &[Arc<dyn Transition>] {
        &self.transitions
    }

    /// The lifted post-image of a downset: the union of every defined lifted
    /// step applied to every part, as a reduced antichain.
    pub fn post_hat(&self, f: &DownSet) -> Result<DownSet> {
        if f.ty() != &self.state_type {
            return Err(Error::TypeMismatch(
                "downset type differs from the model state type".into(),
            ));
        }
        let mut images = Vec::new();
        for transition in &self.transitions {
            for part in f.parts() {
                if let Some(image) = transition.apply_ideal(part)? {
                    image.conforms(&self.state_type).map_err(|e| {
                        Error::ModelIntegrity(format!(
                            "transition `{}` produced an ill-shaped ideal: {e}",
                            transition.name()
                        ))
                    })?;
                    images.push(image);
                }
            }
        }
        DownSet::from_ideals(self.state_type.clone(), images)
    }

    /// Applies the composite `g` (transition indices, applied left to right)
    /// to an ideal; `None` as soon as one step is undefined.
    pub fn apply_composite(&self, g: &[usize], ideal_: &Ideal) -> Result<Option<Ideal>> {
        let mut current = ideal_.clone();
        for &index in g {
            let transition = self
                .transitions
                .get(index)
                .ok_or_else(|| Error::Semantic(format!("transition index {index} out of range")))?;
            match transition.apply_ideal(&current)? {
                Some(next) => current = next,
                None => return Ok(None),
            }
        }
        Ok(Some(ideal::canon(&self.state_type, current)))
    }

    /// Computes the acceleration of `g` at `a`: `g(a)` itself unless it lies
    /// strictly above `a`, in which case the model widening supplies the
    /// least upper bound of the iterated chain; without a recognized
    /// pattern, the chain is iterated up to a cap and the last value is
    /// returned flagged as non-converged.
    pub fn accelerate(&self, g: &[usize], a: &Ideal) -> Result<Accelerated> {
        let ty = &self.state_type;
        let ga = self
            .apply_composite(g, a)?
            .ok_or(Error::UndefinedComposite)?;
        let strictly_above = ideal::ileq(ty, a, &ga) && !ideal::ileq(ty, &ga, a);
        if !strictly_above {
            return Ok(Accelerated {
                ideal: ga,
                converged: true,
            });
        }
        if let Some(widening) = &self.widening {
            if let Some(widened) = widening.widen(a, &ga) {
                return Ok(Accelerated {
                    ideal: ideal::canon(ty, widened),
                    converged: true,
                });
            }
        }
        let mut current = ga;
        for _ in 0..ACCEL_ITERATION_CAP {
            match self.apply_composite(g, &current)? {
                None => {
                    return Ok(Accelerated {
                        ideal: current,
                        converged: true,
                    })
                }
                Some(next) => {
                    if ideal::ileq(ty, &next, &current) {
                        return Ok(Accelerated {
                            ideal: current,
                            converged: true,
                        });
                    }
                    current = next;
                }
            }
        }
        Ok(Accelerated {
            ideal: current,
            converged: false,
        })
    }

    /// Runs the set-based cover procedure from `x0`. Deterministic for fixed
    /// budgets: round `r` pairs every composite of length up to
    /// `min(r, max_composite_len)` (by length, then lexicographically) with
    /// every part of the antichain at the start of the round.
    pub fn cover(&self, x0: &Value, budget: &Budget) -> Result<CoverResult> {
        let (result, _) = self.cover_search(x0, budget, None)?;
        Ok(result)
    }

    /// Forward coverability: `Yes` as soon as the target enters the current
    /// antichain's denotation (each added ideal under-approximates the
    /// cover, so this is sound before completion), `No` when the procedure
    /// completes without covering it, `Unknown` on budget exhaustion.
    pub fn coverable_forward(&self, x0: &Value, y: &Value, budget: &Budget) -> Result<Verdict> {
        y.conforms(&self.state_type)?;
        let (result, found) = self.cover_search(x0, budget, Some(y))?;
        Ok(if found {
            Verdict::Yes
        } else {
            match result.status {
                CoverStatus::Complete => Verdict::No,
                CoverStatus::BudgetExhausted => Verdict::Unknown,
            }
        })
    }

    fn cover_search(
        &self,
        x0: &Value,
        budget: &Budget,
        target: Option<&Value>,
    ) -> Result<(CoverResult, bool)> {
        budget.validate()?;
        x0.conforms(&self.state_type)?;
        let initial = ideal::principal(&self.state_type, x0)?;
        let mut antichain = DownSet::from_ideals(self.state_type.clone(), vec![initial])?;
        let mut stats = CoverStats::default();

        if let Some(y) = target {
            if antichain.member(y)? {
                return Ok((self.finish(antichain, CoverStatus::BudgetExhausted, stats), true));
            }
        }

        loop {
            let post = self.post_hat(&antichain)?;
            if post.leq(&antichain)? {
                return Ok((self.finish(antichain, CoverStatus::Complete, stats), false));
            }
            if stats.iterations == budget.max_rounds {
                return Ok((
                    self.finish(antichain, CoverStatus::BudgetExhausted, stats),
                    false,
                ));
            }
            stats.iterations += 1;
            let length_cap = (stats.iterations as usize).min(budget.max_composite_len);
            let snapshot: Vec<Ideal> = antichain.parts().to_vec();
            for composite in composites(self.transitions.len(), length_cap) {
                for part in &snapshot {
                    stats.composites_explored += 1;
                    let accelerated = match self.accelerate(&composite, part) {
                        Err(Error::UndefinedComposite) => continue,
                        Err(other) => return Err(other),
                        Ok(accelerated) => accelerated,
                    };
                    stats.accelerations_applied += 1;
                    if !accelerated.converged {
                        stats.truncated_accelerations += 1;
                    }
                    accelerated.ideal.conforms(&self.state_type).map_err(|e| {
                        Error::ModelIntegrity(format!(
                            "acceleration produced an ill-shaped ideal: {e}"
                        ))
                    })?;
                    if antichain.insert(accelerated.ideal)? {
                        stats.adds += 1;
                        if let Some(y) = target {
                            if antichain.member(y)? {
                                return Ok((
                                    self.finish(antichain, CoverStatus::BudgetExhausted, stats),
                                    true,
                                ));
                            }
                        }
                        if stats.adds >= budget.max_adds {
                            return Ok((
                                self.finish(antichain, CoverStatus::BudgetExhausted, stats),
                                false,
                            ));
                        }
                    }
                }
            }
        }
    }

    fn finish(&self, cover: DownSet, status: CoverStatus, stats: CoverStats) -> CoverResult {
        CoverResult {
            cover,
            status,
            stats,
        }
    }
}

/// All composites of length 1..=`max_len` over `transition_count` indices,
/// by increasing length then lexicographically.
fn composites(transition_count: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=max_len).flat_map(move |len| {
        std::iter::repeat_n(0..transition_count, len).multi_cartesian_product()
    })
}

// ---------------------------------------------------------------------------
// backward coverability (Petri nets)

/// A finite basis of an upward-closed set of markings: the pairwise
/// incomparable minimal vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpBasis {
    dim: usize,
    mins: Vec<Vec<u64>>,
}

impl UpBasis {
    pub fn new(dim: usize, vectors: Vec<Vec<u64>>) -> Result<UpBasis> {
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::Dimension(format!(
                    "expected vectors of length {dim}, found {}",
                    v.len()
                )));
            }
        }
        let mut mins: Vec<Vec<u64>> = Vec::new();
        for v in vectors {
            if mins.iter().any(|m| pointwise_leq(m, &v)) {
                continue;
            }
            mins.retain(|m| !pointwise_leq(&v, m));
            mins.push(v);
        }
        mins.sort();
        Ok(UpBasis { dim, mins })
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.mins
    }

    /// Membership of a marking in the denoted upward-closed set.
    pub fn contains(&self, marking: &[u64]) -> Result<bool> {
        if marking.len() != self.dim {
            return Err(Error::Dimension(format!(
                "expected marking of length {}, found {}",
                self.dim,
                marking.len()
            )));
        }
        Ok(self.mins.iter().any(|m| pointwise_leq(m, marking)))
    }
}

fn pointwise_leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// One backward step: the minimal basis of `target ∪ ⋃_t t⁻¹(↑target)`.
/// Each transition contributes, for each basis vector `v`, the marking
/// `pre + max(0, v - post)` componentwise.
pub fn pre_basis(net: &PetriNet, target: &UpBasis) -> Result<UpBasis> {
    if target.dim != net.places() {
        return Err(Error::Dimension(format!(
            "basis dimension {} differs from net places {}",
            target.dim,
            net.places()
        )));
    }
    let mut vectors: Vec<Vec<u64>> = target.mins.clone();
    for transition in net.transitions() {
        for v in &target.mins {
            let w: Vec<u64> = (0..net.places())
                .map(|i| transition.pre[i] + v[i].saturating_sub(transition.post[i]))
                .collect();
            vectors.push(w);
        }
    }
    UpBasis::new(net.places(), vectors)
}

/// Exact backward coverability: iterates [`pre_basis`] to its (finite)
/// fixpoint and tests whether `x0` dominates some basis vector.
pub fn coverable_backward(net: &PetriNet, x0: &[u64], y: &[u64]) -> Result<bool> {
    if x0.len() != net.places() || y.len() != net.places() {
        return Err(Error::Dimension(
            "marking length differs from net places".into(),
        ));
    }
    let mut basis = UpBasis::new(net.places(), vec![y.to_vec()])?;
    loop {
        let next = pre_basis(net, &basis)?;
        if next == basis {
            break;
        }
        basis = next;
    }
    basis.contains(x0)
}
