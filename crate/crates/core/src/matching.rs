//! Rounding a basic fractional 3-dimensional matching into an integral one
//! by the local-ratio method.

use thiserror::Error;

use crate::graph::TripartiteGraph;
use crate::lp::FractionalSolution;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("no hyperedge with neighbourhood mass at most 2 among {remaining} remaining; solution is not basic")]
    NotBasic { remaining: usize },
    #[error("{0} fractions supplied for {1} hyperedges")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching<T> {
    /// Hyperedge ids, ascending.
    pub selected: Vec<usize>,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KdmaOutcome<T> {
    pub matching: Matching<T>,
    /// Elimination order fed to local ratio.
    pub queue: Vec<usize>,
    /// Steps where no edge met the mass bound and the minimum was taken instead.
    pub fallbacks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KdmaConfig {
    pub allow_fallback: bool,
}

impl Default for KdmaConfig {
    fn default() -> Self {
        KdmaConfig { allow_fallback: true }
    }
}

/// True when no two of the `selected` triples share a node.
pub fn is_matching(triples: &[[usize; 3]], selected: &[usize]) -> bool {
    let mut used = std::collections::HashSet::new();
    selected
        .iter()
        .all(|&e| triples[e].iter().all(|&v| used.insert(v)))
}

fn conflicts(a: &[usize; 3], b: &[usize; 3]) -> bool {
    a.iter().any(|v| b.contains(v))
}

/// Closed neighbourhoods restricted to `edges`; position-indexed.
fn neighbourhoods(triples: &[[usize; 3]], edges: &[usize]) -> Vec<Vec<usize>> {
    edges
        .iter()
        .map(|&e| {
            (0..edges.len())
                .filter(|&q| conflicts(&triples[e], &triples[edges[q]]))
                .collect()
        })
        .collect()
}

/// kDMA over explicit triples.
pub fn kdma_triples<T: Scalar>(
    triples: &[[usize; 3]],
    weights: &[T],
    fractions: &[T],
    cfg: KdmaConfig,
) -> Result<KdmaOutcome<T>, MatchingError> {
    if fractions.len() != triples.len() {
        return Err(MatchingError::LengthMismatch(fractions.len(), triples.len()));
    }
    let active: Vec<usize> = (0..triples.len()).filter(|&e| fractions[e].is_pos()).collect();
    let nbrs = neighbourhoods(triples, &active);
    let mut alive = vec![true; active.len()];
    let bound = T::from_f64_lossy(2.0) + T::epsilon();
    let mut queue = Vec::with_capacity(active.len());
    let mut fallbacks = 0;

    for remaining in (1..=active.len()).rev() {
        let mass = |p: usize| {
            nbrs[p]
                .iter()
                .filter(|&&q| alive[q])
                .fold(T::zero(), |acc, &q| acc + fractions[active[q]].clone())
        };
        let mut pick = None;
        let mut best: Option<(T, usize)> = None;
        for p in (0..active.len()).filter(|&p| alive[p]) {
            let m = mass(p);
            if m <= bound {
                pick = Some(p);
                break;
            }
            if best.as_ref().map_or(true, |(b, _)| m < *b) {
                best = Some((m, p));
            }
        }
        let p = match pick {
            Some(p) => p,
            None if cfg.allow_fallback => {
                fallbacks += 1;
                best.expect("an alive edge exists").1
            }
            None => return Err(MatchingError::NotBasic { remaining }),
        };
        alive[p] = false;
        queue.push(active[p]);
    }

    let matching = local_ratio(triples, weights, &queue);
    Ok(KdmaOutcome {
        matching,
        queue,
        fallbacks,
    })
}

/// Runs kDMA on `graph` with the fractional optimum of its matching LP.
pub fn kdma(
    graph: &TripartiteGraph,
    f: &FractionalSolution<f64>,
    cfg: KdmaConfig,
) -> Result<KdmaOutcome<f64>, MatchingError> {
    let weights: Vec<f64> = graph.edges.iter().map(|e| e.weight).collect();
    kdma_triples(&graph.triples(), &weights, &f.values, cfg)
}

/// Local ratio over `queue`, unrolled: each live edge in order spends its
/// residual weight on its closed neighbourhood, then edges are added back
/// in reverse order whenever they keep the set a matching.
pub fn local_ratio<T: Scalar>(triples: &[[usize; 3]], weights: &[T], queue: &[usize]) -> Matching<T> {
    let nbrs = neighbourhoods(triples, queue);
    let mut residual: Vec<T> = queue.iter().map(|&e| weights[e].clone()).collect();
    let mut stack = Vec::new();
    for p in 0..queue.len() {
        if residual[p] <= T::weight_dust() {
            continue;
        }
        let w = residual[p].clone();
        for &q in &nbrs[p] {
            residual[q] = residual[q].clone() - w.clone();
        }
        stack.push(p);
    }

    let mut selected: Vec<usize> = Vec::new();
    for &p in stack.iter().rev() {
        let e = queue[p];
        if selected.iter().all(|&s| !conflicts(&triples[s], &triples[e])) {
            selected.push(e);
        }
    }
    selected.sort_unstable();
    let weight = selected.iter().fold(T::zero(), |acc, &e| acc + weights[e].clone());
    Matching { selected, weight }
}
