//! Seeded instance generators.
//!
//! Transversal tuples are ranked in mixed radix with part 0 most
//! significant. In the random model the tuple of rank `r` is an edge iff
//! `counter_unit(seed, r) < p`, so an instance is a pure function of
//! `(sizes, p, seed)` regardless of iteration order.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correspondence::{CorrespondenceCover, CoverColor};
use crate::hypergraph::{Edge, PartiteHypergraph, VertexMap, Violation};
use crate::lists::{Color, ListAssignment};
use crate::rng::{counter_u64, counter_unit, stream};

/// Default cap on the number of transversal tuples a generator may scan.
pub const DEFAULT_INSTANCE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("instance has {tuples} transversal tuples, above the cap of {cap}")]
    CapExceeded { tuples: u64, cap: u64 },
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("k must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("list model expects {expected} per-part sizes, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("cannot draw {q} distinct colors from a palette of {palette}")]
    PaletteTooSmall { q: usize, palette: u32 },
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// Mixed-radix rank of a transversal tuple.
pub fn edge_rank(part_sizes: &[usize], indices: &[usize]) -> u64 {
    part_sizes
        .iter()
        .zip(indices)
        .fold(0u64, |acc, (&n, &i)| acc * n as u64 + i as u64)
}

/// Inverse of [`edge_rank`].
pub fn edge_from_rank(part_sizes: &[usize], mut rank: u64) -> Edge {
    let mut indices = vec![0; part_sizes.len()];
    for (slot, &n) in indices.iter_mut().zip(part_sizes).rev() {
        *slot = (rank % n as u64) as usize;
        rank /= n as u64;
    }
    Edge::new(indices)
}

fn tuple_count(part_sizes: &[usize], cap: u64) -> Result<u64, GenError> {
    let tuples = part_sizes
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n as u64))
        .unwrap_or(u64::MAX);
    if tuples > cap {
        Err(GenError::CapExceeded { tuples, cap })
    } else {
        Ok(tuples)
    }
}

fn check_k(k: usize) -> Result<(), GenError> {
    if k < 2 {
        Err(GenError::UniformityTooSmall(k))
    } else {
        Ok(())
    }
}

/// `K_{k*n}`: every transversal k-set is an edge.
pub fn gen_complete(k: usize, n: usize) -> Result<PartiteHypergraph, GenError> {
    gen_complete_capped(k, n, DEFAULT_INSTANCE_CAP)
}

pub fn gen_complete_capped(k: usize, n: usize, cap: u64) -> Result<PartiteHypergraph, GenError> {
    check_k(k)?;
    let sizes = vec![n; k];
    let tuples = tuple_count(&sizes, cap)?;
    let edges = (0..tuples).map(|r| edge_from_rank(&sizes, r)).collect();
    Ok(PartiteHypergraph::new(sizes, edges)?)
}

/// `𝓗(k, n, p)`: each transversal k-set is an edge independently with
/// probability `p`.
pub fn gen_random(k: usize, n: usize, p: f64, seed: u64) -> Result<PartiteHypergraph, GenError> {
    gen_random_capped(k, n, p, seed, DEFAULT_INSTANCE_CAP)
}

pub fn gen_random_capped(
    k: usize,
    n: usize,
    p: f64,
    seed: u64,
    cap: u64,
) -> Result<PartiteHypergraph, GenError> {
    check_k(k)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::BadProbability(p));
    }
    let sizes = vec![n; k];
    let tuples = tuple_count(&sizes, cap)?;
    let edges = (0..tuples)
        .filter(|&r| counter_unit(seed, r) < p)
        .map(|r| edge_from_rank(&sizes, r))
        .collect();
    Ok(PartiteHypergraph::new(sizes, edges)?)
}

/// One vertex in the last part and `petals` edges through it that are
/// pairwise disjoint elsewhere.
pub fn gen_sunflower(k: usize, petals: usize) -> Result<PartiteHypergraph, GenError> {
    check_k(k)?;
    let mut sizes = vec![petals; k];
    sizes[k - 1] = 1;
    let edges = (0..petals)
        .map(|i| {
            let mut idx = vec![i; k];
            idx[k - 1] = 0;
            Edge::new(idx)
        })
        .collect();
    Ok(PartiteHypergraph::new(sizes, edges)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ListModel {
    /// Every vertex gets `[1..q]`.
    UniformQ { q: usize },
    /// Part `i` gets `[1..q_i]`.
    PerPartQ { q: Vec<usize> },
    /// Part `i` draws `q_i` distinct colors from `[1..palette]`.
    PaletteRandom { q: Vec<usize>, palette: u32 },
}

/// Lists under `model`. Random draws for the vertex of global rank `r`
/// (part-major) come from a stream seeded with `counter_u64(seed, r)`.
pub fn gen_lists(
    h: &PartiteHypergraph,
    model: &ListModel,
    seed: u64,
) -> Result<ListAssignment, GenError> {
    let k = h.k();
    let per_part = |q: &Vec<usize>| {
        if q.len() == k {
            Ok(())
        } else {
            Err(GenError::PartCount { expected: k, got: q.len() })
        }
    };
    let lists: VertexMap<Vec<Color>> = match model {
        ListModel::UniformQ { q } => {
            VertexMap::from_fn(h.part_sizes(), |_| (1..=*q as Color).collect())
        }
        ListModel::PerPartQ { q } => {
            per_part(q)?;
            VertexMap::from_fn(h.part_sizes(), |v| (1..=q[v.part] as Color).collect())
        }
        ListModel::PaletteRandom { q, palette } => {
            per_part(q)?;
            if let Some(&bad) = q.iter().find(|&&qi| qi > *palette as usize) {
                return Err(GenError::PaletteTooSmall { q: bad, palette: *palette });
            }
            let mut rank = 0u64;
            VertexMap::from_fn(h.part_sizes(), |v| {
                let mut rng = stream(counter_u64(seed, rank));
                rank += 1;
                let mut list: Vec<Color> =
                    rand::seq::index::sample(&mut rng, *palette as usize, q[v.part])
                        .into_iter()
                        .map(|i| i as Color + 1)
                        .collect();
                list.sort_unstable();
                list
            })
        }
    };
    Ok(ListAssignment::new(h, lists).expect("shape follows the hypergraph"))
}

/// A cover with list sizes `q_sizes[part]` in which each host edge carries
/// a uniformly random maximum hypermatching across its vertices' lists.
pub fn gen_adversarial_cover(
    h: &PartiteHypergraph,
    q_sizes: &[usize],
    seed: u64,
) -> Result<CorrespondenceCover, GenError> {
    if q_sizes.len() != h.k() {
        return Err(GenError::PartCount { expected: h.k(), got: q_sizes.len() });
    }
    let list_sizes = VertexMap::from_fn(h.part_sizes(), |v| q_sizes[v.part]);
    let m = q_sizes.iter().copied().min().unwrap_or(0);
    let mut edges = Vec::new();
    for (ei, e) in h.edges().iter().enumerate() {
        let mut rng = stream(counter_u64(seed, ei as u64));
        let perms: Vec<Vec<usize>> = e
            .vertices()
            .map(|u| {
                let mut p: Vec<usize> = (0..q_sizes[u.part]).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        for t in 0..m {
            edges.push(
                e.vertices()
                    .zip(&perms)
                    .map(|(u, p)| CoverColor::new(u, p[t]))
                    .collect(),
            );
        }
    }
    Ok(CorrespondenceCover::new(h, list_sizes, edges).expect("generated covers are valid"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "graph", rename_all = "snake_case")]
pub enum GraphModel {
    Complete { k: usize, n: usize },
    RandomKpp { k: usize, n: usize, p: f64 },
    /// See [`gen_sunflower`].
    Gadget { k: usize, petals: usize },
}

impl GraphModel {
    pub fn k(&self) -> usize {
        match self {
            GraphModel::Complete { k, .. }
            | GraphModel::RandomKpp { k, .. }
            | GraphModel::Gadget { k, .. } => *k,
        }
    }
}

/// A full instance recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub graph: GraphModel,
    pub lists: ListModel,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self, cap: u64) -> Result<(PartiteHypergraph, ListAssignment), GenError> {
        let h = match self.graph {
            GraphModel::Complete { k, n } => gen_complete_capped(k, n, cap)?,
            GraphModel::RandomKpp { k, n, p } => gen_random_capped(k, n, p, self.seed, cap)?,
            GraphModel::Gadget { k, petals } => gen_sunflower(k, petals)?,
        };
        // Lists draw from a separate stream so that changing the list model
        // leaves the graph untouched.
        let lists = gen_lists(&h, &self.lists, counter_u64(self.seed, u64::MAX))?;
        Ok((h, lists))
    }
}
