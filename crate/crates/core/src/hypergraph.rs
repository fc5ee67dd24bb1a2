//! k-partite k-uniform hypergraphs.
//!
//! Vertices are addressed by `(part, index)`. An [`Edge`] stores one index
//! per part, position `i` holding the part-`i` vertex, so transversality is
//! structural once an edge has been built.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex of a partite hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub part: usize,
    pub index: usize,
}

impl VertexId {
    pub fn new(part: usize, index: usize) -> Self {
        Self { part, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.part, self.index)
    }
}

/// A transversal edge: `indices[i]` is the index of the part-`i` vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    indices: Vec<usize>,
}

impl Edge {
    pub fn new(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn vertex(&self, part: usize) -> VertexId {
        VertexId::new(part, self.indices[part])
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.indices
            .iter()
            .enumerate()
            .map(|(part, &index)| VertexId::new(part, index))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.indices.get(v.part) == Some(&v.index)
    }
}

/// Dense per-vertex storage, indexed `[part][index]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexMap<T> {
    parts: Vec<Vec<T>>,
}

impl<T> VertexMap<T> {
    pub fn from_parts(parts: Vec<Vec<T>>) -> Self {
        Self { parts }
    }

    pub fn from_fn(part_sizes: &[usize], mut f: impl FnMut(VertexId) -> T) -> Self {
        let parts = part_sizes
            .iter()
            .enumerate()
            .map(|(part, &n)| (0..n).map(|index| f(VertexId::new(part, index))).collect())
            .collect();
        Self { parts }
    }

    pub fn get(&self, v: VertexId) -> Option<&T> {
        self.parts.get(v.part).and_then(|p| p.get(v.index))
    }

    pub fn get_mut(&mut self, v: VertexId) -> Option<&mut T> {
        self.parts.get_mut(v.part).and_then(|p| p.get_mut(v.index))
    }

    pub fn part(&self, part: usize) -> &[T] {
        &self.parts[part]
    }

    pub fn parts(&self) -> &[Vec<T>] {
        &self.parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Iterates in part-major, index-minor order.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &T)> {
        self.parts.iter().enumerate().flat_map(|(part, p)| {
            p.iter()
                .enumerate()
                .map(move |(index, t)| (VertexId::new(part, index), t))
        })
    }

    pub fn map<U>(&self, mut f: impl FnMut(VertexId, &T) -> U) -> VertexMap<U> {
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(part, p)| {
                p.iter()
                    .enumerate()
                    .map(|(index, t)| f(VertexId::new(part, index), t))
                    .collect()
            })
            .collect();
        VertexMap { parts }
    }
}

impl<T> std::ops::Index<VertexId> for VertexMap<T> {
    type Output = T;

    fn index(&self, v: VertexId) -> &T {
        &self.parts[v.part][v.index]
    }
}

impl<T> std::ops::IndexMut<VertexId> for VertexMap<T> {
    fn index_mut(&mut self, v: VertexId) -> &mut T {
        &mut self.parts[v.part][v.index]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("invalid vertex {0}")]
    InvalidVertex(VertexId),
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("vertex {0} is not colored")]
    Uncolored(VertexId),
    #[error("coloring shape does not match the hypergraph")]
    ShapeMismatch,
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// The first invariant broken by a raw hypergraph description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("k must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("expected {expected} part sizes, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("edge {edge} has {got} vertices, expected {expected}")]
    EdgeArity { edge: usize, expected: usize, got: usize },
    #[error("edge {edge} not transversal: vertex {vertex} repeats part {part}")]
    NotTransversal { edge: usize, vertex: usize, part: usize },
    #[error("edge {edge} not sorted by part at position {position}")]
    Unsorted { edge: usize, position: usize },
    #[error("edge {edge} references vertex {vertex} outside its part")]
    VertexOutOfRange { edge: usize, vertex: VertexId },
    #[error("edge {edge} duplicates edge {first}")]
    DuplicateEdge { edge: usize, first: usize },
}

/// Non-fatal findings of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    EmptyPart(usize),
}

/// The on-disk shape of a hypergraph: `{"k", "parts", "edges"}` with each
/// edge a list of `[part, index]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHypergraph {
    pub k: usize,
    pub parts: Vec<usize>,
    pub edges: Vec<Vec<[usize; 2]>>,
}

/// Checks every invariant of a raw description. Returns the warnings on
/// success and the first offending edge or vertex otherwise.
pub fn validate(raw: &RawHypergraph) -> Result<Vec<Warning>, Violation> {
    let k = raw.k;
    if k < 2 {
        return Err(Violation::UniformityTooSmall(k));
    }
    if raw.parts.len() != k {
        return Err(Violation::PartCount { expected: k, got: raw.parts.len() });
    }
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::with_capacity(raw.edges.len());
    for (ei, edge) in raw.edges.iter().enumerate() {
        if edge.len() != k {
            return Err(Violation::EdgeArity { edge: ei, expected: k, got: edge.len() });
        }
        let mut parts_seen = vec![false; k];
        for &[part, index] in edge {
            let vertex = VertexId::new(part, index);
            if part >= k || index >= raw.parts[part] {
                return Err(Violation::VertexOutOfRange { edge: ei, vertex });
            }
            if parts_seen[part] {
                return Err(Violation::NotTransversal { edge: ei, vertex: index, part });
            }
            parts_seen[part] = true;
        }
        if let Some(position) = edge.iter().enumerate().position(|(i, v)| v[0] != i) {
            return Err(Violation::Unsorted { edge: ei, position });
        }
        let key: Vec<usize> = edge.iter().map(|v| v[1]).collect();
        if let Some(&first) = seen.get(&key) {
            return Err(Violation::DuplicateEdge { edge: ei, first });
        }
        seen.insert(key, ei);
    }
    Ok(raw
        .parts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == 0)
        .map(|(i, _)| Warning::EmptyPart(i))
        .collect())
}

/// A validated k-partite k-uniform hypergraph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteHypergraph {
    part_sizes: Vec<usize>,
    edges: Vec<Edge>,
    incidence: VertexMap<Vec<usize>>,
}

impl PartiteHypergraph {
    /// Builds a hypergraph from per-part sizes and edges given as index
    /// tuples. Duplicate edges are rejected.
    pub fn new(part_sizes: Vec<usize>, edges: Vec<Edge>) -> Result<Self, Violation> {
        let k = part_sizes.len();
        if k < 2 {
            return Err(Violation::UniformityTooSmall(k));
        }
        let mut seen: HashMap<&Edge, usize> = HashMap::with_capacity(edges.len());
        for (ei, e) in edges.iter().enumerate() {
            if e.k() != k {
                return Err(Violation::EdgeArity { edge: ei, expected: k, got: e.k() });
            }
            for v in e.vertices() {
                if v.index >= part_sizes[v.part] {
                    return Err(Violation::VertexOutOfRange { edge: ei, vertex: v });
                }
            }
            if let Some(&first) = seen.get(e) {
                return Err(Violation::DuplicateEdge { edge: ei, first });
            }
            seen.insert(e, ei);
        }
        let mut incidence = VertexMap::from_fn(&part_sizes, |_| Vec::new());
        for (ei, e) in edges.iter().enumerate() {
            for v in e.vertices() {
                incidence[v].push(ei);
            }
        }
        Ok(Self { part_sizes, edges, incidence })
    }

    pub fn from_raw(raw: &RawHypergraph) -> Result<Self, Violation> {
        validate(raw)?;
        let edges = raw
            .edges
            .iter()
            .map(|e| Edge::new(e.iter().map(|v| v[1]).collect()))
            .collect();
        Self::new(raw.parts.clone(), edges)
    }

    pub fn to_raw(&self) -> RawHypergraph {
        RawHypergraph {
            k: self.k(),
            parts: self.part_sizes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| e.vertices().map(|v| [v.part, v.index]).collect())
                .collect(),
        }
    }

    /// An edgeless hypergraph on the given parts.
    pub fn empty(part_sizes: Vec<usize>) -> Result<Self, Violation> {
        Self::new(part_sizes, Vec::new())
    }

    pub fn k(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn num_vertices(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, ei: usize) -> &Edge {
        &self.edges[ei]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.part < self.k() && v.index < self.part_sizes[v.part]
    }

    /// All vertices, part-major then index-minor.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.part_sizes
            .iter()
            .enumerate()
            .flat_map(|(part, &n)| (0..n).map(move |index| VertexId::new(part, index)))
    }

    pub fn part_vertices(&self, part: usize) -> impl Iterator<Item = VertexId> {
        (0..self.part_sizes[part]).map(move |index| VertexId::new(part, index))
    }

    fn check(&self, v: VertexId) -> Result<(), HypergraphError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(HypergraphError::InvalidVertex(v))
        }
    }

    /// Indices of the edges containing `v`, ascending.
    pub fn incident_edges(&self, v: VertexId) -> Result<&[usize], HypergraphError> {
        self.check(v)?;
        Ok(&self.incidence[v])
    }

    pub(crate) fn incident(&self, v: VertexId) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, HypergraphError> {
        Ok(self.incident_edges(v)?.len())
    }

    /// Number of edges containing every vertex of `s`.
    pub fn set_degree(&self, s: &[VertexId]) -> Result<usize, HypergraphError> {
        let Some(&first) = s.first() else {
            return Err(HypergraphError::EmptyVertexSet);
        };
        for &v in s {
            self.check(v)?;
        }
        let pivot = s
            .iter()
            .copied()
            .min_by_key(|&v| self.incidence[v].len())
            .unwrap_or(first);
        Ok(self.incidence[pivot]
            .iter()
            .filter(|&&ei| s.iter().all(|&v| self.edges[ei].contains(v)))
            .count())
    }

    /// Largest degree in each part; 0 for empty parts.
    pub fn max_degrees(&self) -> Vec<usize> {
        self.incidence
            .parts()
            .iter()
            .map(|p| p.iter().map(Vec::len).max().unwrap_or(0))
            .collect()
    }

    /// Vertices sharing an edge with `v`, excluding `v`, sorted.
    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>, HypergraphError> {
        self.check(v)?;
        Ok(self.neighbors_unchecked(v))
    }

    pub(crate) fn neighbors_unchecked(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.incidence[v]
            .iter()
            .flat_map(|&ei| self.edges[ei].vertices())
            .filter(|&u| u != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn check_shape<T>(&self, map: &VertexMap<T>) -> Result<(), HypergraphError> {
        if map.parts().len() == self.k()
            && map.parts().iter().zip(&self.part_sizes).all(|(p, &n)| p.len() == n)
        {
            Ok(())
        } else {
            Err(HypergraphError::ShapeMismatch)
        }
    }

    /// True iff every edge carries at least two distinct colors. The
    /// coloring must be total.
    pub fn is_proper_coloring<T: Copy + Eq>(
        &self,
        colors: &VertexMap<Option<T>>,
    ) -> Result<bool, HypergraphError> {
        self.check_shape(colors)?;
        if let Some((v, _)) = colors.iter().find(|(_, c)| c.is_none()) {
            return Err(HypergraphError::Uncolored(v));
        }
        Ok(self.edges.iter().all(|e| {
            let mut vs = e.vertices().map(|v| colors[v]);
            let first = vs.next().flatten();
            vs.any(|c| c != first)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(k: usize, parts: Vec<usize>, edges: Vec<Vec<[usize; 2]>>) -> RawHypergraph {
        RawHypergraph { k, parts, edges }
    }

    fn complete(k: usize, n: usize) -> PartiteHypergraph {
        let mut edges = Vec::new();
        let total = n.pow(k as u32);
        for mut r in 0..total {
            let mut idx = vec![0; k];
            for slot in idx.iter_mut().rev() {
                *slot = r % n;
                r /= n;
            }
            edges.push(Edge::new(idx));
        }
        PartiteHypergraph::new(vec![n; k], edges).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate(&raw(2, vec![1, 1], vec![])), Ok(vec![]));
        assert!(matches!(
            validate(&raw(2, vec![2, 2], vec![vec![[0, 0], [0, 1]]])),
            Err(Violation::NotTransversal { edge: 0, .. })
        ));
        let ok = raw(
            3,
            vec![2, 2, 2],
            vec![vec![[0, 0], [1, 0], [2, 0]], vec![[0, 0], [1, 1], [2, 1]]],
        );
        assert_eq!(validate(&ok), Ok(vec![]));
    }

    #[test]
    fn validate_rejections() {
        assert!(matches!(
            validate(&raw(2, vec![2, 2], vec![vec![[1, 0], [0, 0]]])),
            Err(Violation::Unsorted { edge: 0, position: 0 })
        ));
        assert!(matches!(
            validate(&raw(2, vec![1, 1], vec![vec![[0, 0], [1, 1]]])),
            Err(Violation::VertexOutOfRange { edge: 0, .. })
        ));
        assert!(matches!(
            validate(&raw(2, vec![1, 1], vec![vec![[0, 0], [1, 0]], vec![[0, 0], [1, 0]]])),
            Err(Violation::DuplicateEdge { edge: 1, first: 0 })
        ));
        assert!(matches!(validate(&raw(1, vec![1], vec![])), Err(Violation::UniformityTooSmall(1))));
        assert!(matches!(
            validate(&raw(3, vec![1, 1, 1], vec![vec![[0, 0], [1, 0]]])),
            Err(Violation::EdgeArity { .. })
        ));
        assert_eq!(validate(&raw(2, vec![0, 3], vec![])), Ok(vec![Warning::EmptyPart(0)]));
    }

    #[test]
    fn degrees() {
        let h = PartiteHypergraph::empty(vec![1, 1]).unwrap();
        assert_eq!(h.degree(VertexId::new(0, 0)), Ok(0));
        assert_eq!(
            h.degree(VertexId::new(0, 5)),
            Err(HypergraphError::InvalidVertex(VertexId::new(0, 5)))
        );

        let k32 = complete(3, 2);
        for v in k32.vertices() {
            assert_eq!(k32.degree(v).unwrap(), 4);
        }
        assert_eq!(k32.set_degree(&[VertexId::new(0, 0), VertexId::new(1, 1)]), Ok(2));
        assert_eq!(k32.set_degree(&[VertexId::new(0, 0), VertexId::new(0, 1)]), Ok(0));
        assert_eq!(k32.set_degree(&[]), Err(HypergraphError::EmptyVertexSet));

        assert_eq!(complete(2, 3).max_degrees(), vec![3, 3]);
        assert_eq!(PartiteHypergraph::empty(vec![2, 0, 1]).unwrap().max_degrees(), vec![0, 0, 0]);
        let single = PartiteHypergraph::new(vec![2, 2, 2], vec![Edge::new(vec![1, 0, 1])]).unwrap();
        assert_eq!(single.max_degrees(), vec![1, 1, 1]);
    }

    #[test]
    fn complete_degree_is_n_pow_k_minus_1() {
        for k in 2..=3 {
            for n in 1..=4 {
                let h = complete(k, n);
                assert_eq!(h.max_degrees(), vec![n.pow(k as u32 - 1); k]);
            }
        }
    }

    #[test]
    fn proper_coloring() {
        let h = PartiteHypergraph::new(vec![1, 1, 1], vec![Edge::new(vec![0, 0, 0])]).unwrap();
        let mono = VertexMap::from_parts(vec![vec![Some(1)], vec![Some(1)], vec![Some(1)]]);
        assert_eq!(h.is_proper_coloring(&mono), Ok(false));
        let two = VertexMap::from_parts(vec![vec![Some(1)], vec![Some(1)], vec![Some(2)]]);
        assert_eq!(h.is_proper_coloring(&two), Ok(true));
        let partial = VertexMap::from_parts(vec![vec![Some(1)], vec![None], vec![Some(2)]]);
        assert_eq!(
            h.is_proper_coloring(&partial),
            Err(HypergraphError::Uncolored(VertexId::new(1, 0)))
        );
        let edgeless = PartiteHypergraph::empty(vec![1, 1, 1]).unwrap();
        assert_eq!(edgeless.is_proper_coloring(&mono), Ok(true));
    }

    #[test]
    fn neighbors_exclude_self() {
        let h = complete(2, 2);
        assert_eq!(
            h.neighbors(VertexId::new(0, 0)).unwrap(),
            vec![VertexId::new(1, 0), VertexId::new(1, 1)]
        );
    }

    #[test]
    fn raw_round_trip() {
        let h = complete(3, 2);
        assert_eq!(PartiteHypergraph::from_raw(&h.to_raw()).unwrap(), h);
    }
}
