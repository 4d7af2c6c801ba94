//! Graph and similarity data for the four applications, plus seeded generators.
//!
//! Parsing and writing the on-disk formats is done by the `smcc` crate; this
//! module only holds the validated in-memory forms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;
use crate::oracle::{Objective, SubmodularInstance};

/// Default edge probability of the influence objective.
pub const DEFAULT_INFLUENCE_P: f64 = 0.01;
/// Default diminishing-returns exponent of the revenue objective.
pub const DEFAULT_REVENUE_ALPHA: f64 = 0.3;

/// Upper bound on generated instance sizes.
pub const MAX_GENERATED_N: usize = 1 << 20;

/// An undirected (optionally weighted) graph over dense ids `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphData {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// One weight per edge when present.
    pub weights: Option<Vec<f64>>,
    pub directed: bool,
}

impl GraphData {
    /// Validates ids and weights and drops self-loops. Returns the graph and the
    /// number of self-loops removed.
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        weights: Option<Vec<f64>>,
    ) -> Result<(Self, usize)> {
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} weights for {} edges",
                    w.len(),
                    edges.len()
                )));
            }
        }
        for &(u, v) in &edges {
            let bad = u.max(v);
            if bad >= n {
                return Err(Error::InvalidElement { element: bad, n });
            }
        }
        if let Some(w) = &weights {
            if let Some(x) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge weight {x} is not a finite non-negative number"
                )));
            }
        }
        let mut kept_edges = Vec::with_capacity(edges.len());
        let mut kept_weights = weights.as_ref().map(|_| Vec::with_capacity(edges.len()));
        let mut dropped = 0;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                dropped += 1;
                continue;
            }
            kept_edges.push((u, v));
            if let (Some(kw), Some(w)) = (kept_weights.as_mut(), weights.as_ref()) {
                kw.push(w[i]);
            }
        }
        Ok((
            GraphData {
                n,
                edges: kept_edges,
                weights: kept_weights,
                directed: false,
            },
            dropped,
        ))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

/// Pairwise similarities in `[0, 1]`.
///
/// Either an explicit `n × n` matrix or unit-normalized feature rows whose
/// clamped dot products are the cosine similarities. The second form keeps
/// large generated instances at `O(n·dim)` memory.
#[derive(Debug, Clone, PartialEq)]
pub enum SimilarityData {
    Dense { n: usize, matrix: Vec<f64> },
    Features { n: usize, dim: usize, rows: Vec<f64> },
}

impl SimilarityData {
    /// Row-major matrix; negative entries are clamped to zero. Returns the data
    /// and the number of clamped entries.
    pub fn from_matrix(n: usize, mut matrix: Vec<f64>) -> Result<(Self, usize)> {
        if matrix.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "similarity matrix has {} entries, expected {}",
                matrix.len(),
                n * n
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite similarity".into()));
        }
        let mut clamped = 0;
        for x in matrix.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
                clamped += 1;
            }
        }
        Ok((SimilarityData::Dense { n, matrix }, clamped))
    }

    /// Feature vectors, one row per item; rows are normalized to unit length.
    pub fn from_features(n: usize, dim: usize, mut rows: Vec<f64>) -> Result<Self> {
        if rows.len() != n * dim || dim == 0 {
            return Err(Error::InvalidParameter("feature rows do not match n × dim".into()));
        }
        for row in rows.chunks_mut(dim) {
            let norm = math::sqrt(row.iter().map(|x| x * x).sum::<f64>());
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::InvalidParameter("zero or non-finite feature row".into()));
            }
            row.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(SimilarityData::Features { n, dim, rows })
    }

    pub fn n(&self) -> usize {
        match self {
            SimilarityData::Dense { n, .. } | SimilarityData::Features { n, .. } => *n,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SimilarityData::Dense { n, matrix } => matrix[i * n + j],
            SimilarityData::Features { dim, rows, .. } => {
                let a = &rows[i * dim..(i + 1) * dim];
                let b = &rows[j * dim..(j + 1) * dim];
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                dot.max(0.0)
            }
        }
    }

    /// Largest asymmetry `|s_ij − s_ji|` and largest diagonal deviation from 1.
    pub fn asymmetry(&self) -> (f64, f64) {
        let n = self.n();
        let mut asym: f64 = 0.0;
        let mut diag: f64 = 0.0;
        for i in 0..n {
            diag = diag.max((self.get(i, i) - 1.0).abs());
            for j in (i + 1)..n {
                asym = asym.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        (asym, diag)
    }

    /// Materializes the full matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

/// The built-in objective families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveKind {
    MaxCover,
    InfluenceMax,
    RevenueMax,
    ImageSumm,
    Modular,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 5] = [
        ObjectiveKind::MaxCover,
        ObjectiveKind::InfluenceMax,
        ObjectiveKind::RevenueMax,
        ObjectiveKind::ImageSumm,
        ObjectiveKind::Modular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::MaxCover => "maxcover",
            ObjectiveKind::InfluenceMax => "influencemax",
            ObjectiveKind::RevenueMax => "revenuemax",
            ObjectiveKind::ImageSumm => "imagesumm",
            ObjectiveKind::Modular => "modular",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ObjectiveKind::ALL.into_iter().find(|k| k.name() == lower)
    }
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a star on nodes `0..=m` and attaches every further node to `m`
/// distinct existing nodes sampled proportionally to degree, which gives
/// exactly `m·(n−m)` edges.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<GraphData> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "BA graph needs 1 <= m < n (got n={n}, m={m})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * (n - m));
    // repeated[i] appears once per unit of degree
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * m * (n - m));
    for leaf in 1..=m {
        edges.push((0, leaf));
        repeated.push(0);
        repeated.push(leaf);
    }
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for source in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = repeated[rng.gen_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((source, t));
            repeated.push(t);
            repeated.push(source);
        }
    }
    Ok(GraphData {
        n,
        edges,
        weights: None,
        directed: false,
    })
}

/// `G(n, p)` with geometric skipping, so sparse graphs cost `O(n + |E|)`.
/// Weighted graphs draw weights uniformly from `(0, 1]`.
pub fn generate_erdos_renyi(n: usize, p: f64, weighted: bool, seed: u64) -> Result<GraphData> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge density {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((v, w));
            }
        }
    } else if p > 0.0 {
        let log_q = math::ln(1.0 - p);
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.gen();
            w += 1 + math::floor(math::ln(1.0 - r) / log_q) as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    let weights = weighted.then(|| edges.iter().map(|_| 1.0 - rng.gen::<f64>()).collect());
    Ok(GraphData {
        n,
        edges,
        weights,
        directed: false,
    })
}

/// Random non-negative feature vectors; each coordinate is non-zero with
/// probability `density` (at least one per row).
pub fn generate_features(n: usize, dim: usize, density: f64, seed: u64) -> Result<SimilarityData> {
    if dim == 0 {
        return Err(Error::InvalidParameter("feature dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![0.0; n * dim];
    for row in rows.chunks_mut(dim) {
        for x in row.iter_mut() {
            if rng.gen::<f64>() < density {
                *x = 1.0 - rng.gen::<f64>();
            }
        }
        if row.iter().all(|x| *x == 0.0) {
            let c = rng.gen_range(0..dim);
            row[c] = 1.0 - rng.gen::<f64>();
        }
    }
    SimilarityData::from_features(n, dim, rows)
}

/// A seeded random instance of the named family for property tests and
/// fixtures. `density` is the edge probability for the graph objectives, the
/// feature density for `ImageSumm`, and unused for `Modular`.
pub fn generate_random_instance(
    kind: ObjectiveKind,
    n: usize,
    density: f64,
    seed: u64,
) -> Result<SubmodularInstance> {
    if n > MAX_GENERATED_N {
        return Err(Error::InvalidParameter(format!(
            "n={n} exceeds the generator limit {MAX_GENERATED_N}"
        )));
    }
    let objective = match kind {
        ObjectiveKind::MaxCover => {
            Objective::max_cover(&generate_erdos_renyi(n, density, false, seed)?)
        }
        ObjectiveKind::InfluenceMax => Objective::influence_max(
            &generate_erdos_renyi(n, density, false, seed)?,
            DEFAULT_INFLUENCE_P,
        )?,
        ObjectiveKind::RevenueMax => Objective::revenue_max(
            &generate_erdos_renyi(n, density, true, seed)?,
            DEFAULT_REVENUE_ALPHA,
        )?,
        ObjectiveKind::ImageSumm => {
            Objective::image_summ(generate_features(n, 8, density.max(0.05), seed)?)
        }
        ObjectiveKind::Modular => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Objective::modular((0..n).map(|_| rng.gen::<f64>()).collect())?
        }
    };
    Ok(SubmodularInstance::new(objective))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_connected(g: &GraphData) -> bool {
        let mut adj = vec![Vec::new(); g.n];
        for &(u, v) in &g.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; g.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    #[test]
    fn ba_with_one_attachment_is_a_tree() {
        let g = generate_ba(200, 1, 3).unwrap();
        assert_eq!(g.edge_count(), 199);
        assert!(is_connected(&g));
    }

    #[test]
    fn ba_degenerate_is_seed_star() {
        let g = generate_ba(4, 3, 1).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn ba_edge_count_and_determinism() {
        let a = generate_ba(500, 3, 9).unwrap();
        let b = generate_ba(500, 3, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 3 * (500 - 3));
        assert!(a.edges.iter().all(|(u, v)| u != v));
        assert_ne!(a, generate_ba(500, 3, 10).unwrap());
    }

    #[test]
    fn ba_rejects_bad_parameters() {
        assert!(generate_ba(5, 0, 1).is_err());
        assert!(generate_ba(5, 5, 1).is_err());
    }

    #[test]
    fn ba_degree_distribution_is_heavy_tailed() {
        for seed in 0..20 {
            let g = generate_ba(10_000, 5, seed).unwrap();
            let deg = g.degrees();
            let mean = 2.0 * g.edge_count() as f64 / g.n as f64;
            let max = *deg.iter().max().unwrap() as f64;
            assert!(max > 10.0 * mean, "seed {seed}: max {max} mean {mean}");
        }
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert!(generate_erdos_renyi(30, 0.0, false, 1).unwrap().edges.is_empty());
        assert_eq!(generate_erdos_renyi(30, 1.0, false, 1).unwrap().edge_count(), 435);
        let g = generate_erdos_renyi(2000, 0.01, true, 5).unwrap();
        let expected = 0.01 * 2000.0 * 1999.0 / 2.0;
        assert!((g.edge_count() as f64 - expected).abs() < 0.1 * expected);
        assert!(g.weights.unwrap().iter().all(|w| *w > 0.0 && *w <= 1.0));
    }

    #[test]
    fn graph_data_drops_self_loops_and_checks_ids() {
        let (g, dropped) = GraphData::new(3, vec![(0, 1), (1, 1), (1, 2)], None).unwrap();
        assert_eq!(dropped, 1);
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(
            GraphData::new(2, vec![(0, 2)], None).unwrap_err(),
            Error::InvalidElement { element: 2, n: 2 }
        );
        assert!(GraphData::new(2, vec![(0, 1)], Some(vec![-1.0])).is_err());
    }

    #[test]
    fn similarity_clamps_and_reports() {
        let (s, clamped) = SimilarityData::from_matrix(2, vec![1.0, -0.5, 0.2, 1.0]).unwrap();
        assert_eq!(clamped, 1);
        assert_eq!(s.get(0, 1), 0.0);
        let (asym, diag) = s.asymmetry();
        assert!((asym - 0.2).abs() < 1e-12);
        assert_eq!(diag, 0.0);
        assert!(SimilarityData::from_matrix(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn feature_similarity_has_unit_diagonal() {
        let s = generate_features(50, 8, 0.5, 2).unwrap();
        let (asym, diag) = s.asymmetry();
        assert!(asym < 1e-12);
        assert!(diag < 1e-12);
    }

    #[test]
    fn objective_kind_names_round_trip() {
        for k in ObjectiveKind::ALL {
            assert_eq!(ObjectiveKind::parse(k.name()), Some(k));
        }
        assert_eq!(ObjectiveKind::parse("MaxCover"), Some(ObjectiveKind::MaxCover));
        assert_eq!(ObjectiveKind::parse("nope"), None);
    }
}
