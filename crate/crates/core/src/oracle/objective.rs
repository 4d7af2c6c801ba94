use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::data::{GraphData, SimilarityData};
use crate::error::{Error, Result};
use crate::math;

/// A user-supplied set function. Monotonicity and submodularity are the
/// caller's responsibility; `verify` can spot-check them.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;
    /// `set` holds distinct ids below `ground_size()`.
    fn evaluate(&self, set: &[usize]) -> f64;
}

/// Symmetric CSR adjacency with per-edge weights (1.0 when unweighted).
/// Parallel edges are merged, keeping the largest weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Adjacency {
    pub fn from_graph(graph: &GraphData) -> Self {
        let n = graph.n;
        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (e, &(u, v)) in graph.edges.iter().enumerate() {
            if u == v {
                continue;
            }
            let w = graph.weights.as_ref().map_or(1.0, |ws| ws[e]);
            lists[u].push((v, w));
            lists[v].push((u, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in lists.iter_mut() {
            list.sort_by_key(|e| e.0);
            let start = targets.len();
            for &(v, w) in list.iter() {
                if targets.len() > start && targets[targets.len() - 1] == v {
                    let last = weights.len() - 1;
                    if w > weights[last] {
                        weights[last] = w;
                    }
                } else {
                    targets.push(v);
                    weights.push(w);
                }
            }
            offsets.push(targets.len());
        }
        Adjacency {
            offsets,
            targets,
            weights,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn edge_weights(&self, u: usize) -> &[f64] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|u| self.degree(u)).max().unwrap_or(0)
    }
}

#[derive(Clone)]
enum Repr {
    MaxCover {
        graph: Adjacency,
        inclusive: bool,
    },
    InfluenceMax {
        graph: Adjacency,
        p: f64,
        /// `survival[c] = (1 − p)^c`
        survival: Vec<f64>,
    },
    RevenueMax {
        graph: Adjacency,
        alpha: f64,
    },
    ImageSumm {
        similarity: SimilarityData,
    },
    Modular {
        weights: Vec<f64>,
    },
    Custom {
        function: Arc<dyn SetFunction>,
    },
}

/// A non-negative monotone submodular objective over ids `0..n`.
#[derive(Clone)]
pub struct Objective {
    n: usize,
    repr: Repr,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("kind", &self.name())
            .field("n", &self.n)
            .finish()
    }
}

impl Objective {
    /// Number of nodes covered by `S`, where a node is covered when it is in
    /// `S` or adjacent to a member of `S`.
    pub fn max_cover(graph: &GraphData) -> Self {
        Objective {
            n: graph.n,
            repr: Repr::MaxCover {
                graph: Adjacency::from_graph(graph),
                inclusive: true,
            },
        }
    }

    /// Coverage counting only nodes with at least one neighbour in `S`.
    pub fn max_cover_exclusive(graph: &GraphData) -> Self {
        Objective {
            n: graph.n,
            repr: Repr::MaxCover {
                graph: Adjacency::from_graph(graph),
                inclusive: false,
            },
        }
    }

    /// `Σ_i f_i(S)` with `f_i = 1` for `i ∈ S` and `1 − (1−p)^{|N_S(i)|}` otherwise.
    pub fn influence_max(graph: &GraphData, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "influence probability {p} not in (0, 1]"
            )));
        }
        let graph = Adjacency::from_graph(graph);
        let survival = (0..=graph.max_degree() as u32)
            .map(|c| math::powi(1.0 - p, c))
            .collect();
        Ok(Objective {
            n: graph.n(),
            repr: Repr::InfluenceMax { graph, p, survival },
        })
    }

    /// `Σ_i (Σ_{j∈S} w_ij)^α`. Unweighted graphs use unit weights.
    pub fn revenue_max(graph: &GraphData, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "revenue exponent {alpha} not in (0, 1)"
            )));
        }
        let graph = Adjacency::from_graph(graph);
        Ok(Objective {
            n: graph.n(),
            repr: Repr::RevenueMax { graph, alpha },
        })
    }

    /// `Σ_i max_{j∈S} s_ij`, zero for the empty set.
    pub fn image_summ(similarity: SimilarityData) -> Self {
        Objective {
            n: similarity.n(),
            repr: Repr::ImageSumm { similarity },
        }
    }

    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidParameter(alloc::format!(
                "modular weight {w} is not a finite non-negative number"
            )));
        }
        Ok(Objective {
            n: weights.len(),
            repr: Repr::Modular { weights },
        })
    }

    pub fn custom(function: Arc<dyn SetFunction>) -> Self {
        Objective {
            n: function.ground_size(),
            repr: Repr::Custom { function },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &'static str {
        match &self.repr {
            Repr::MaxCover { .. } => "maxcover",
            Repr::InfluenceMax { .. } => "influencemax",
            Repr::RevenueMax { .. } => "revenuemax",
            Repr::ImageSumm { .. } => "imagesumm",
            Repr::Modular { .. } => "modular",
            Repr::Custom { .. } => "custom",
        }
    }

    pub fn has_summary(&self) -> bool {
        !matches!(self.repr, Repr::Custom { .. })
    }

    /// Whether values are integers computed exactly.
    pub fn is_integral(&self) -> bool {
        matches!(self.repr, Repr::MaxCover { .. })
    }

    /// `f(set)` straight from the formula. `set` must hold distinct valid ids.
    pub fn evaluate(&self, set: &[usize]) -> f64 {
        let n = self.n;
        match &self.repr {
            Repr::MaxCover { graph, inclusive } => {
                let mut covered = vec![false; n];
                let mut count: u64 = 0;
                for &j in set {
                    if *inclusive && !covered[j] {
                        covered[j] = true;
                        count += 1;
                    }
                    for &v in graph.neighbors(j) {
                        if !covered[v] {
                            covered[v] = true;
                            count += 1;
                        }
                    }
                }
                count as f64
            }
            Repr::InfluenceMax {
                graph, survival, ..
            } => {
                let mut member = vec![false; n];
                let mut hits = vec![0u32; n];
                for &j in set {
                    member[j] = true;
                    for &v in graph.neighbors(j) {
                        hits[v] += 1;
                    }
                }
                let mut total = 0.0;
                for i in 0..n {
                    if member[i] {
                        total += 1.0;
                    } else if hits[i] > 0 {
                        total += 1.0 - survival[hits[i] as usize];
                    }
                }
                total
            }
            Repr::RevenueMax { graph, alpha } => {
                let mut load = vec![0.0; n];
                for &j in set {
                    for (&v, &w) in graph.neighbors(j).iter().zip(graph.edge_weights(j)) {
                        load[v] += w;
                    }
                }
                load.iter()
                    .filter(|l| **l > 0.0)
                    .map(|l| math::pow(*l, *alpha))
                    .sum()
            }
            Repr::ImageSumm { similarity } => {
                if set.is_empty() {
                    return 0.0;
                }
                (0..n)
                    .map(|i| {
                        set.iter()
                            .map(|&j| similarity.get(i, j))
                            .fold(0.0, f64::max)
                    })
                    .sum()
            }
            Repr::Modular { weights } => set.iter().map(|&j| weights[j]).sum(),
            Repr::Custom { function } => function.evaluate(set),
        }
    }

    /// State of the empty set.
    pub fn empty_state(&self) -> SetState {
        let n = self.n;
        let aux = match &self.repr {
            Repr::MaxCover { .. } => Aux::Covered {
                covered: vec![false; n],
                count: 0,
            },
            Repr::InfluenceMax { .. } => Aux::Hits(vec![0; n]),
            Repr::RevenueMax { .. } => Aux::Load(vec![0.0; n]),
            Repr::ImageSumm { .. } => Aux::Best(vec![0.0; n]),
            Repr::Modular { .. } | Repr::Custom { .. } => Aux::Plain,
        };
        SetState {
            members: vec![false; n],
            order: Vec::new(),
            aux,
            value: 0.0,
        }
    }

    /// `Δ(x | S)` from the incremental state of `S`.
    pub fn gain(&self, state: &SetState, x: usize) -> f64 {
        if state.members[x] {
            return 0.0;
        }
        match (&self.repr, &state.aux) {
            (Repr::MaxCover { graph, inclusive }, Aux::Covered { covered, .. }) => {
                cover_gain(graph, *inclusive, covered, x) as f64
            }
            (Repr::InfluenceMax { graph, p, survival }, Aux::Hits(hits)) => {
                let mut g = survival[hits[x] as usize];
                for &v in graph.neighbors(x) {
                    if !state.members[v] {
                        g += p * survival[hits[v] as usize];
                    }
                }
                g
            }
            (Repr::RevenueMax { graph, alpha }, Aux::Load(load)) => {
                let mut g = 0.0;
                for (&v, &w) in graph.neighbors(x).iter().zip(graph.edge_weights(x)) {
                    let before = if load[v] > 0.0 { math::pow(load[v], *alpha) } else { 0.0 };
                    g += math::pow(load[v] + w, *alpha) - before;
                }
                g
            }
            (Repr::ImageSumm { similarity }, Aux::Best(best)) => {
                let mut g = 0.0;
                for (i, b) in best.iter().enumerate() {
                    let s = similarity.get(i, x);
                    if s > *b {
                        g += s - b;
                    }
                }
                g
            }
            (Repr::Modular { weights }, _) => weights[x],
            (Repr::Custom { function }, _) => {
                let mut with = state.order.clone();
                with.push(x);
                function.evaluate(&with) - state.value
            }
            _ => unreachable!("state does not belong to this objective"),
        }
    }

    /// Adds `x` to the state and returns its marginal gain.
    pub fn insert(&self, state: &mut SetState, x: usize) -> f64 {
        if state.members[x] {
            return 0.0;
        }
        if let (Repr::MaxCover { graph, inclusive }, Aux::Covered { covered, count }) =
            (&self.repr, &mut state.aux)
        {
            let mut fresh = 0u64;
            if *inclusive && !covered[x] {
                covered[x] = true;
                fresh += 1;
            }
            for &v in graph.neighbors(x) {
                if !covered[v] {
                    covered[v] = true;
                    fresh += 1;
                }
            }
            *count += fresh;
            state.value = *count as f64;
            state.members[x] = true;
            state.order.push(x);
            return fresh as f64;
        }
        let delta = self.gain(state, x);
        match (&self.repr, &mut state.aux) {
            (Repr::InfluenceMax { graph, .. }, Aux::Hits(hits)) => {
                for &v in graph.neighbors(x) {
                    hits[v] += 1;
                }
            }
            (Repr::RevenueMax { graph, .. }, Aux::Load(load)) => {
                for (&v, &w) in graph.neighbors(x).iter().zip(graph.edge_weights(x)) {
                    load[v] += w;
                }
            }
            (Repr::ImageSumm { similarity }, Aux::Best(best)) => {
                for (i, b) in best.iter_mut().enumerate() {
                    let s = similarity.get(i, x);
                    if s > *b {
                        *b = s;
                    }
                }
            }
            _ => {}
        }
        state.members[x] = true;
        state.order.push(x);
        state.value += delta;
        delta
    }
}

#[inline]
fn cover_gain(graph: &Adjacency, inclusive: bool, covered: &[bool], x: usize) -> u64 {
    let mut g = u64::from(inclusive && !covered[x]);
    for &v in graph.neighbors(x) {
        if !covered[v] {
            g += 1;
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq)]
enum Aux {
    Covered { covered: Vec<bool>, count: u64 },
    Hits(Vec<u32>),
    Load(Vec<f64>),
    Best(Vec<f64>),
    Plain,
}

/// Incremental evaluation state of a set `S`: membership bits, the
/// objective-specific per-node summary and the running value `f(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetState {
    members: Vec<bool>,
    order: Vec<usize>,
    aux: Aux,
    value: f64,
}

impl SetState {
    /// `f(S)` as accumulated from marginal gains.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|m| **m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|m| *m)
    }

    pub(crate) fn forget_order(&mut self) {
        self.order = Vec::new();
    }

    /// Number of per-node scalars carried besides the membership bits.
    pub(crate) fn scalar_count(&self) -> usize {
        match &self.aux {
            Aux::Covered { covered, .. } => covered.len(),
            Aux::Hits(v) => v.len(),
            Aux::Load(v) | Aux::Best(v) => v.len(),
            Aux::Plain => 0,
        }
    }

    pub(crate) fn ground_size(&self) -> usize {
        self.members.len()
    }
}
