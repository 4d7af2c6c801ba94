//! Centralized building blocks: lazy greedy, threshold greedy, the
//! consistent threshold sampler `ThreshSeqMod`, the low-adaptive greedy LAG
//! and the linear-time LTC.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math;
use crate::oracle::{SetState, SubmodularInstance};
use crate::randomness::RandomTape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Success,
    Failure,
}

/// A feasible set in insertion order with its cached value.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSolution {
    pub items: Vec<usize>,
    pub value: f64,
    pub status: Status,
    /// Inner `ThreshSeqMod` calls that ended in failure.
    pub inner_failures: u32,
}

impl OrderedSolution {
    pub fn empty() -> Self {
        OrderedSolution {
            items: Vec::new(),
            value: 0.0,
            status: Status::Success,
            inner_failures: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn succeeded(&self) -> bool {
        self.status == Status::Success
    }

    /// Failed itself or had a failed inner call.
    pub fn degraded(&self) -> bool {
        self.status == Status::Failure || self.inner_failures > 0
    }

    /// Same items and order, same status.
    pub fn same_as(&self, other: &OrderedSolution) -> bool {
        self.items == other.items && self.status == other.status
    }
}

/// A value `Γ` with `Γ ≤ f(O) ≤ Γ/α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guess {
    pub gamma: f64,
    pub alpha: f64,
}

impl Guess {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "guess value {} must be finite and non-negative",
                self.gamma
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "guess ratio {} not in (0, 1]",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreshSeqParams {
    pub k: usize,
    pub delta: f64,
    pub eps: f64,
    pub tau: f64,
}

impl ThreshSeqParams {
    pub fn beta(&self) -> f64 {
        self.eps / (16.0 * math::ln(4.0 / (1.0 - math::exp(-self.eps / 2.0))))
    }

    /// Outer-loop budget `M` for a ground set of size `n`; the loop runs at
    /// most `M + 1` times.
    pub fn max_iterations(&self, n: usize) -> u64 {
        let n = n.max(1) as f64;
        let m = math::ceil(4.0 * (1.0 + 1.0 / (self.beta() * self.eps)) * math::ln(n / self.delta));
        if m.is_finite() && m >= 1.0 {
            m as u64
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "confidence {} not in (0, 1]",
                self.delta
            )));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "threshold {} must be finite and non-negative",
                self.tau
            )));
        }
        Ok(())
    }
}

/// `ε` must lie strictly between 0 and 1.
pub fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("eps {eps} not in (0, 1)")))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Validated ids with repeats removed, first occurrence kept.
pub(crate) fn distinct(inst: &SubmodularInstance, xs: &[usize]) -> Result<Vec<usize>> {
    inst.check_elements(xs)?;
    let mut seen = vec![false; inst.n()];
    Ok(xs
        .iter()
        .copied()
        .filter(|&x| !core::mem::replace(&mut seen[x], true))
        .collect())
}

/// Prefix sizes tried in one iteration: `⌈(1+ε)^u⌉` up to `s`, every integer
/// up to `⌈1/ε⌉ + 1`, and `s` itself.
pub fn prefix_grid(eps: f64, s: usize) -> Vec<usize> {
    if s == 0 {
        return Vec::new();
    }
    let small = (math::ceil_tolerant(1.0 / eps) as usize + 1).min(s);
    let mut grid: Vec<usize> = (1..=small).collect();
    let mut u = 0u32;
    loop {
        let v = math::ceil(math::powi(1.0 + eps, u));
        if v > s as f64 {
            break;
        }
        grid.push(v as usize);
        u += 1;
    }
    grid.push(s);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// `ThreshSeqMod`: adds random-order prefixes whose average gain is at least
/// `(1−ε)τ` until no element of `X` has gain `τ` or `k` elements are chosen.
///
/// Randomness comes only from `tape.permutation(j, n)` for iteration `j`, so
/// runs on different inputs see the same permutations.
pub fn thresh_seq_mod(
    inst: &SubmodularInstance,
    candidates: &[usize],
    params: &ThreshSeqParams,
    tape: &RandomTape,
) -> Result<OrderedSolution> {
    params.validate()?;
    let candidates = distinct(inst, candidates)?;
    let mut state = inst.empty_state();
    let mut items = Vec::new();
    let status = threshold_sample(inst, &mut state, &mut items, candidates, params, tape);
    Ok(OrderedSolution {
        value: inst.state_value(&state),
        items,
        status,
        inner_failures: 0,
    })
}

/// Core loop of `ThreshSeqMod` from an existing state; appends to `items`.
fn threshold_sample(
    inst: &SubmodularInstance,
    state: &mut SetState,
    items: &mut Vec<usize>,
    mut pool: Vec<usize>,
    params: &ThreshSeqParams,
    tape: &RandomTape,
) -> Status {
    let n = inst.n();
    let budget = params.max_iterations(n);
    let start = items.len();
    let cutoff = math::ceil_tolerant(1.0 / params.eps) as usize;
    let bar = (1.0 - params.eps) * params.tau;
    for j in 1..=budget + 1 {
        let chosen = items.len() - start;
        if chosen == params.k {
            return Status::Success;
        }
        let gains = inst.gains(state, &pool);
        let mut kept = Vec::with_capacity(pool.len());
        for (x, g) in pool.iter().zip(&gains) {
            if *g >= params.tau {
                kept.push(*x);
            }
        }
        if kept.is_empty() {
            return Status::Success;
        }
        let order = tape.permutation(j, n).induced_order(&kept);
        let s = (params.k - chosen).min(order.len());
        let grid = prefix_grid(params.eps, s);
        let prefix = inst.prefix_gains(state, &order, &grid);
        let passes = |lambda: usize| -> bool {
            match grid.binary_search(&lambda) {
                Ok(i) => prefix[i] / lambda as f64 >= bar,
                Err(_) => false,
            }
        };
        let pick = grid
            .iter()
            .copied()
            .find(|&lambda| {
                (lambda <= cutoff && !passes(lambda + 1))
                    || (lambda > cutoff && !passes(lambda))
                    || lambda == s
            })
            .unwrap_or(s);
        for &x in &order[..pick] {
            inst.insert(state, x);
            items.push(x);
        }
        pool = order[pick..].to_vec();
    }
    Status::Failure
}

/// Number of threshold levels LAG visits: `⌈log_{1−ε}(α/3)⌉ + 1`.
pub fn lag_iterations(eps: f64, alpha: f64) -> usize {
    let levels = math::ceil(math::ln(alpha / 3.0) / math::ln(1.0 - eps));
    levels.max(0.0) as usize + 1
}

/// LAG: `ThreshSeqMod` at descending thresholds `τ₀(1−ε)^i` on the marginal
/// of the solution so far. Without a guess, `Γ` is the best singleton of `C`
/// and `α = 1/k`.
pub fn lag(
    inst: &SubmodularInstance,
    candidates: &[usize],
    k: usize,
    eps: f64,
    guess: Option<Guess>,
    tape: &RandomTape,
) -> Result<OrderedSolution> {
    check_k(k)?;
    check_eps(eps)?;
    let candidates = distinct(inst, candidates)?;
    if candidates.is_empty() {
        return Ok(OrderedSolution::empty());
    }
    let mut state = inst.empty_state();
    let guess = match guess {
        Some(g) => {
            g.validate()?;
            g
        }
        None => {
            let singles = inst.gains(&state, &candidates);
            Guess {
                gamma: singles.iter().copied().fold(0.0, f64::max),
                alpha: 1.0 / k as f64,
            }
        }
    };
    if guess.gamma <= 0.0 {
        return Ok(OrderedSolution::empty());
    }
    let iterations = lag_iterations(eps, guess.alpha);
    let delta = 1.0 / iterations as f64;
    let tau0 = guess.gamma / (guess.alpha * k as f64);
    let mut items = Vec::new();
    let mut failures = 0;
    for i in 0..iterations {
        let params = ThreshSeqParams {
            k: k - items.len(),
            delta,
            eps: eps / 3.0,
            tau: tau0 * math::powi(1.0 - eps, i as u32),
        };
        let pool: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&x| !state.contains(x))
            .collect();
        let status = threshold_sample(inst, &mut state, &mut items, pool, &params, &tape.child(i as u64));
        if status == Status::Failure {
            failures += 1;
        }
        if items.len() == k {
            break;
        }
    }
    Ok(OrderedSolution {
        value: inst.state_value(&state),
        items,
        status: Status::Success,
        inner_failures: failures,
    })
}

/// LTC: one pass in random order from the best singleton, adding `x` when
/// `Δ(x | S) ≥ f(S)/k`.
pub fn ltc(
    inst: &SubmodularInstance,
    candidates: &[usize],
    k: usize,
    tape: &RandomTape,
) -> Result<OrderedSolution> {
    check_k(k)?;
    let candidates = distinct(inst, candidates)?;
    if candidates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let order = tape.permutation(1, inst.n()).induced_order(&candidates);
    let mut state = inst.empty_state();
    let singles = inst.gains(&state, &order);
    let mut first = 0;
    for (i, g) in singles.iter().enumerate() {
        if *g > singles[first] {
            first = i;
        }
    }
    let seed = order[first];
    inst.insert(&mut state, seed);
    let mut items = vec![seed];
    if singles[first] > 0.0 {
        for &x in &order {
            if x == seed {
                continue;
            }
            let bar = inst.state_value(&state) / k as f64;
            if inst.gain(&state, x) >= bar {
                inst.insert(&mut state, x);
                items.push(x);
            }
        }
    }
    Ok(OrderedSolution {
        value: inst.state_value(&state),
        items,
        status: Status::Success,
        inner_failures: 0,
    })
}

/// The last `k` items of `solution`, revalued with one query.
pub fn last_k(inst: &SubmodularInstance, solution: &OrderedSolution, k: usize) -> Result<OrderedSolution> {
    let from = solution.items.len().saturating_sub(k);
    let items = solution.items[from..].to_vec();
    let value = inst.value(&items)?;
    Ok(OrderedSolution {
        items,
        value,
        status: solution.status,
        inner_failures: solution.inner_failures,
    })
}

#[derive(Debug)]
struct Bound {
    gain: f64,
    element: usize,
    fresh_at: usize,
}

impl PartialEq for Bound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Bound {}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.element.cmp(&self.element))
    }
}

/// Lazy greedy over `candidates`: picks the largest marginal gain each step,
/// smallest id on ties. Returns `min(k, |candidates|)` items.
pub fn greedy(inst: &SubmodularInstance, candidates: &[usize], k: usize) -> Result<OrderedSolution> {
    let candidates = distinct(inst, candidates)?;
    let mut state = inst.empty_state();
    let mut items = Vec::new();
    if k == 0 || candidates.is_empty() {
        return Ok(OrderedSolution::empty());
    }
    let initial = inst.gains(&state, &candidates);
    let mut heap: BinaryHeap<Bound> = candidates
        .iter()
        .zip(initial)
        .map(|(&element, gain)| Bound {
            gain,
            element,
            fresh_at: 0,
        })
        .collect();
    while items.len() < k {
        let Some(top) = heap.pop() else { break };
        if top.fresh_at == items.len() {
            inst.insert(&mut state, top.element);
            items.push(top.element);
        } else {
            let gain = inst.gain(&state, top.element);
            heap.push(Bound {
                gain,
                element: top.element,
                fresh_at: items.len(),
            });
        }
    }
    Ok(OrderedSolution {
        value: inst.state_value(&state),
        items,
        status: Status::Success,
        inner_failures: 0,
    })
}

/// Threshold greedy over `ground` in id order, thresholds from `Γ/(αk)` down
/// to `εΓ/k` by factors of `1−ε`.
pub fn threshold_greedy(
    inst: &SubmodularInstance,
    ground: &[usize],
    k: usize,
    guess: Guess,
    eps: f64,
) -> Result<OrderedSolution> {
    check_k(k)?;
    check_eps(eps)?;
    guess.validate()?;
    let mut ground = distinct(inst, ground)?;
    ground.sort_unstable();
    let mut state = inst.empty_state();
    let mut items = Vec::new();
    if guess.gamma > 0.0 {
        let floor = eps * guess.gamma / k as f64;
        let mut tau = guess.gamma / (guess.alpha * k as f64);
        'sweeps: while tau >= floor {
            for &e in &ground {
                if state.contains(e) {
                    continue;
                }
                if inst.gain(&state, e) >= tau {
                    inst.insert(&mut state, e);
                    items.push(e);
                    if items.len() == k {
                        break 'sweeps;
                    }
                }
            }
            tau *= 1.0 - eps;
        }
    }
    Ok(OrderedSolution {
        value: inst.state_value(&state),
        items,
        status: Status::Success,
        inner_failures: 0,
    })
}
