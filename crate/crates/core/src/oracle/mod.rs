//! Objectives, instrumented evaluation and marginal restriction.
//!
//! Every oracle call made through a [`SubmodularInstance`] is charged to its
//! [`QueryLedger`]: a batch of `m` simultaneous queries costs `m` queries and
//! one adaptive round. Instances restricted to a marginal `g(X) = f(S ∪ X) − f(S)`
//! share the ledger of the instance they came from.

mod objective;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub use objective::{Adjacency, Objective, SetFunction, SetState};

/// Snapshot of a [`QueryLedger`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LedgerSnapshot {
    pub queries: u64,
    pub adaptive_rounds: u64,
}

impl LedgerSnapshot {
    pub fn since(self, earlier: LedgerSnapshot) -> LedgerSnapshot {
        LedgerSnapshot {
            queries: self.queries - earlier.queries,
            adaptive_rounds: self.adaptive_rounds - earlier.adaptive_rounds,
        }
    }
}

/// Query and adaptive-round counters. Safe to share across threads; the
/// totals do not depend on the order in which increments land.
#[derive(Debug, Default)]
pub struct QueryLedger {
    queries: AtomicU64,
    adaptive_rounds: AtomicU64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// One adaptive round of `m` queries. An empty batch is a no-op.
    pub fn record_batch(&self, m: u64) {
        if m == 0 {
            return;
        }
        self.queries.fetch_add(m, Ordering::Relaxed);
        self.adaptive_rounds.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            queries: self.queries.load(Ordering::Relaxed),
            adaptive_rounds: self.adaptive_rounds.load(Ordering::Relaxed),
        }
    }

    /// Merges ledgers of computations that ran side by side: queries add up,
    /// adaptive depth is the deepest of them.
    pub fn absorb_parallel<I: IntoIterator<Item = LedgerSnapshot>>(&self, forks: I) {
        let mut queries = 0;
        let mut depth = 0;
        for f in forks {
            queries += f.queries;
            depth = depth.max(f.adaptive_rounds);
        }
        self.queries.fetch_add(queries, Ordering::Relaxed);
        self.adaptive_rounds.fetch_add(depth, Ordering::Relaxed);
    }
}

/// Compressed state `v_S` from which `f(S ∪ X) − f(S)` can be evaluated
/// without `S` itself: per-node coverage bits, neighbour counts, revenue loads
/// or best similarities, plus membership bits.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSummary {
    state: SetState,
}

impl MarginalSummary {
    pub fn ground_size(&self) -> usize {
        self.state.ground_size()
    }

    /// Per-node scalars carried (at most `n`), excluding the membership bits.
    pub fn scalar_count(&self) -> usize {
        self.state.scalar_count()
    }

    /// Size of the summary when shipped, in element-sized words: the scalars
    /// plus `n` membership bits packed 64 per word.
    pub fn wire_size(&self) -> usize {
        self.scalar_count() + self.ground_size().div_ceil(64)
    }
}

enum Base {
    /// `S` known explicitly, with `f(S)` from the formula.
    Explicit {
        members: Vec<usize>,
        direct_value: f64,
        state: SetState,
    },
    /// Only `v_S` is known.
    Summary(SetState),
}

impl Base {
    fn state(&self) -> &SetState {
        match self {
            Base::Explicit { state, .. } | Base::Summary(state) => state,
        }
    }
}

/// A ground set `0..n` with a monotone submodular objective and a query ledger.
///
/// The instance may be a marginal restriction `g(X) = f(S ∪ X) − f(S)` of a
/// base objective; all methods then operate on `g`.
#[derive(Clone)]
pub struct SubmodularInstance {
    objective: Arc<Objective>,
    base: Option<Arc<Base>>,
    ledger: Arc<QueryLedger>,
}

impl core::fmt::Debug for SubmodularInstance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SubmodularInstance")
            .field("objective", &self.objective)
            .field("restricted", &self.base.is_some())
            .field("ledger", &self.ledger.snapshot())
            .finish()
    }
}

impl SubmodularInstance {
    pub fn new(objective: Objective) -> Self {
        SubmodularInstance {
            objective: Arc::new(objective),
            base: None,
            ledger: Arc::new(QueryLedger::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.objective.n()
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn is_restricted(&self) -> bool {
        self.base.is_some()
    }

    /// Same function, new zeroed ledger.
    pub fn with_fresh_ledger(&self) -> Self {
        SubmodularInstance {
            objective: Arc::clone(&self.objective),
            base: self.base.clone(),
            ledger: Arc::new(QueryLedger::new()),
        }
    }

    pub fn check_elements(&self, set: &[usize]) -> Result<()> {
        let n = self.n();
        match set.iter().find(|&&x| x >= n) {
            Some(&element) => Err(Error::InvalidElement { element, n }),
            None => Ok(()),
        }
    }

    /// `f(S)`; one query, one adaptive round.
    pub fn value(&self, set: &[usize]) -> Result<f64> {
        self.check_elements(set)?;
        self.ledger.record_batch(1);
        Ok(self.eval(set))
    }

    /// `Δ(x | S)`; one query, one adaptive round.
    pub fn marginal(&self, x: usize, set: &[usize]) -> Result<f64> {
        self.check_elements(set)?;
        self.check_elements(&[x])?;
        self.ledger.record_batch(1);
        let mut with = set.to_vec();
        with.push(x);
        Ok(self.eval(&with) - self.eval(set))
    }

    /// Values of all sets as one adaptive round.
    pub fn value_batch(&self, sets: &[Vec<usize>]) -> Result<Vec<f64>> {
        for s in sets {
            self.check_elements(s)?;
        }
        self.ledger.record_batch(sets.len() as u64);
        Ok(sets.iter().map(|s| self.eval(s)).collect())
    }

    /// `f(S)` without touching the ledger.
    pub fn evaluate_uncounted(&self, set: &[usize]) -> Result<f64> {
        self.check_elements(set)?;
        Ok(self.eval(set))
    }

    fn eval(&self, set: &[usize]) -> f64 {
        match self.base.as_deref() {
            None => self.objective.evaluate(&dedup(self.n(), &[], set)),
            Some(Base::Explicit {
                members,
                direct_value,
                ..
            }) => self.objective.evaluate(&dedup(self.n(), members, set)) - direct_value,
            Some(Base::Summary(state)) => {
                let mut st = state.clone();
                for &x in set {
                    self.objective.insert(&mut st, x);
                }
                st.value() - state.value()
            }
        }
    }

    /// `g(X) = f(S ∪ X) − f(S)`, sharing this instance's ledger.
    pub fn restrict_to_marginal(&self, set: &[usize]) -> Result<Self> {
        self.check_elements(set)?;
        let base = match self.base.as_deref() {
            Some(Base::Summary(state)) => {
                let mut st = state.clone();
                for &x in set {
                    self.objective.insert(&mut st, x);
                }
                Base::Summary(st)
            }
            existing => {
                let (prior, mut state) = match existing {
                    Some(Base::Explicit { members, state, .. }) => (members.as_slice(), state.clone()),
                    _ => (&[][..], self.objective.empty_state()),
                };
                let members = dedup(self.n(), prior, set);
                for &x in &members[prior.len()..] {
                    self.objective.insert(&mut state, x);
                }
                let direct_value = self.objective.evaluate(&members);
                Base::Explicit {
                    members,
                    direct_value,
                    state,
                }
            }
        };
        Ok(SubmodularInstance {
            objective: Arc::clone(&self.objective),
            base: Some(Arc::new(base)),
            ledger: Arc::clone(&self.ledger),
        })
    }

    /// Compressed state of `S` relative to this instance.
    pub fn summarize(&self, set: &[usize]) -> Result<MarginalSummary> {
        if !self.objective.has_summary() {
            return Err(Error::UnsupportedSummary(self.objective.name()));
        }
        self.check_elements(set)?;
        let mut state = self.empty_state();
        for &x in set {
            self.objective.insert(&mut state, x);
        }
        state.forget_order();
        Ok(MarginalSummary { state })
    }

    /// `f(S ∪ X) − f(S)` from `v_S`; one query, one adaptive round.
    pub fn eval_with_summary(&self, summary: &MarginalSummary, set: &[usize]) -> Result<f64> {
        self.check_summary(summary)?;
        self.check_elements(set)?;
        self.ledger.record_batch(1);
        let mut st = summary.state.clone();
        for &x in set {
            self.objective.insert(&mut st, x);
        }
        Ok(st.value() - summary.state.value())
    }

    /// The marginal objective described by `summary`, sharing this ledger.
    pub fn with_summary(&self, summary: MarginalSummary) -> Result<Self> {
        self.check_summary(&summary)?;
        Ok(SubmodularInstance {
            objective: Arc::clone(&self.objective),
            base: Some(Arc::new(Base::Summary(summary.state))),
            ledger: Arc::clone(&self.ledger),
        })
    }

    fn check_summary(&self, summary: &MarginalSummary) -> Result<()> {
        if summary.ground_size() != self.n() {
            return Err(Error::InvalidParameter(alloc::format!(
                "summary over {} elements used with an instance of {}",
                summary.ground_size(),
                self.n()
            )));
        }
        Ok(())
    }

    // Incremental interface used by the algorithms. States start from the
    // restriction base, so `state_value` is the value under `g`.

    /// State of the empty set under this instance.
    pub fn empty_state(&self) -> SetState {
        match self.base.as_deref() {
            Some(b) => b.state().clone(),
            None => self.objective.empty_state(),
        }
    }

    /// Value of a state under this instance.
    pub fn state_value(&self, state: &SetState) -> f64 {
        let offset = self.base.as_deref().map_or(0.0, |b| b.state().value());
        state.value() - offset
    }

    /// `Δ(x | S)`; one query, one adaptive round.
    pub fn gain(&self, state: &SetState, x: usize) -> f64 {
        self.ledger.record_batch(1);
        self.objective.gain(state, x)
    }

    /// `Δ(x | S)` for every `x` as one adaptive round.
    pub fn gains(&self, state: &SetState, xs: &[usize]) -> Vec<f64> {
        self.ledger.record_batch(xs.len() as u64);
        xs.iter().map(|&x| self.objective.gain(state, x)).collect()
    }

    /// `Δ(seq[..λ] | S)` for every `λ` in `lengths` (ascending) as one
    /// adaptive round.
    pub fn prefix_gains(&self, state: &SetState, seq: &[usize], lengths: &[usize]) -> Vec<f64> {
        self.ledger.record_batch(lengths.len() as u64);
        let mut st = state.clone();
        let mut out = Vec::with_capacity(lengths.len());
        let mut added = 0;
        for &len in lengths {
            while added < len {
                self.objective.insert(&mut st, seq[added]);
                added += 1;
            }
            out.push(st.value() - state.value());
        }
        out
    }

    /// Adds `x` to the state. Not counted: the caller already paid for the
    /// query that justified the insertion.
    pub fn insert(&self, state: &mut SetState, x: usize) -> f64 {
        self.objective.insert(state, x)
    }
}

/// `prior` followed by the elements of `extra` not already present, without
/// repeats.
fn dedup(n: usize, prior: &[usize], extra: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(prior.len() + extra.len());
    for &x in prior.iter().chain(extra) {
        if !seen[x] {
            seen[x] = true;
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::GraphData;

    fn path3() -> SubmodularInstance {
        let (g, _) = GraphData::new(3, vec![(0, 1), (1, 2)], None).unwrap();
        SubmodularInstance::new(Objective::max_cover(&g))
    }

    #[test]
    fn ledger_counts_batches() {
        let inst = path3();
        inst.value(&[1]).unwrap();
        inst.value_batch(&[]).unwrap();
        assert_eq!(inst.ledger().snapshot(), LedgerSnapshot { queries: 1, adaptive_rounds: 1 });
        inst.value_batch(&[vec![], vec![0], vec![2]]).unwrap();
        assert_eq!(inst.ledger().snapshot(), LedgerSnapshot { queries: 4, adaptive_rounds: 2 });
    }

    #[test]
    fn parallel_absorb_takes_deepest_fork() {
        let ledger = QueryLedger::new();
        ledger.absorb_parallel([
            LedgerSnapshot { queries: 5, adaptive_rounds: 2 },
            LedgerSnapshot { queries: 7, adaptive_rounds: 4 },
        ]);
        assert_eq!(ledger.snapshot(), LedgerSnapshot { queries: 12, adaptive_rounds: 4 });
    }

    #[test]
    fn nested_restriction_composes() {
        let inst = path3();
        let g = inst.restrict_to_marginal(&[0]).unwrap();
        let h = g.restrict_to_marginal(&[2]).unwrap();
        assert_eq!(h.evaluate_uncounted(&[1]).unwrap(), 0.0);
        assert_eq!(g.evaluate_uncounted(&[2]).unwrap(), 1.0);
        let state = h.empty_state();
        assert_eq!(h.state_value(&state), 0.0);
    }
}
