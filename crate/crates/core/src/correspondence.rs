//! Correspondence (DP-)covers.
//!
//! Each host vertex `v` owns a block of `list_sizes[v]` cover colors,
//! addressed by slot. Cover edges are k-sets of cover colors whose owners
//! form a host edge, one color per owner, and the cover edges over any one
//! host edge form a hypermatching.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{HypergraphError, PartiteHypergraph, VertexId, VertexMap};
use crate::lists::ListAssignment;

/// Candidate hypermatchings examined per vertex before aux construction
/// gives up.
pub const DEFAULT_AUX_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverColor {
    pub owner: VertexId,
    pub slot: usize,
}

impl CoverColor {
    pub fn new(owner: VertexId, slot: usize) -> Self {
        Self { owner, slot }
    }
}

impl fmt::Display for CoverColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.owner, self.slot)
    }
}

/// First broken cover invariant. The bullet numbers follow the usual three
/// cover axioms: lists partition the colors, no edge meets a list twice,
/// and the edges over each host k-set form a hypermatching that is empty
/// off the host edges.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverViolation {
    #[error("list sizes do not match the hypergraph's vertex set")]
    ShapeMismatch,
    #[error("cover edge {edge} has {got} colors, expected {expected}")]
    Arity { edge: usize, expected: usize, got: usize },
    #[error("cover edge {edge}: color {color} does not belong to any list (bullet 1)")]
    UnknownColor { edge: usize, color: CoverColor },
    #[error("cover edge {edge} meets the list of {owner} twice (bullet 2)")]
    SharedList { edge: usize, owner: VertexId },
    #[error("cover edge {edge} lies over a non-edge of the host (bullet 3)")]
    NotHostEdge { edge: usize },
    #[error("cover edges {first} and {edge} share color {color} over one host edge (bullet 3: not a hypermatching)")]
    NotHypermatching { edge: usize, first: usize, color: CoverColor },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Violation(#[from] CoverViolation),
    #[error("slot {slot} is outside the list of {vertex}")]
    InvalidSlot { vertex: VertexId, slot: usize },
    #[error("aux explosion at {vertex}: {candidates} candidate hypermatchings exceed cap {cap}")]
    AuxExplosion { vertex: VertexId, candidates: u64, cap: u64 },
    #[error("part {0} out of range")]
    InvalidPart(usize),
}

/// Checks all cover invariants against `h`, reporting the first violation.
pub fn validate_cover(
    h: &PartiteHypergraph,
    list_sizes: &VertexMap<usize>,
    edges: &[Vec<CoverColor>],
) -> Result<(), CoverViolation> {
    if h.check_shape(list_sizes).is_err() {
        return Err(CoverViolation::ShapeMismatch);
    }
    let k = h.k();
    let host: HashSet<&[usize]> = h.edges().iter().map(|e| e.indices()).collect();
    let mut used: HashMap<(Vec<usize>, CoverColor), usize> = HashMap::new();
    for (ei, edge) in edges.iter().enumerate() {
        if edge.len() != k {
            return Err(CoverViolation::Arity { edge: ei, expected: k, got: edge.len() });
        }
        for &color in edge {
            match list_sizes.get(color.owner) {
                Some(&n) if color.slot < n => {}
                _ => return Err(CoverViolation::UnknownColor { edge: ei, color }),
            }
        }
        let mut owners: Vec<VertexId> = edge.iter().map(|c| c.owner).collect();
        owners.sort_unstable();
        if let Some(w) = owners.windows(2).find(|w| w[0] == w[1]) {
            return Err(CoverViolation::SharedList { edge: ei, owner: w[0] });
        }
        let transversal = owners.iter().enumerate().all(|(i, o)| o.part == i);
        let key: Vec<usize> = owners.iter().map(|o| o.index).collect();
        if !transversal || !host.contains(key.as_slice()) {
            return Err(CoverViolation::NotHostEdge { edge: ei });
        }
        for &color in edge {
            if let Some(&first) = used.get(&(key.clone(), color)) {
                return Err(CoverViolation::NotHypermatching { edge: ei, first, color });
            }
        }
        for &color in edge {
            used.insert((key.clone(), color), ei);
        }
    }
    Ok(())
}

/// A validated correspondence cover. Cover edges are stored with colors
/// ordered by owner part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceCover {
    list_sizes: VertexMap<usize>,
    edges: Vec<Vec<CoverColor>>,
    incidence: VertexMap<Vec<Vec<usize>>>,
}

impl CorrespondenceCover {
    pub fn new(
        h: &PartiteHypergraph,
        list_sizes: VertexMap<usize>,
        edges: Vec<Vec<CoverColor>>,
    ) -> Result<Self, CoverViolation> {
        validate_cover(h, &list_sizes, &edges)?;
        let edges: Vec<Vec<CoverColor>> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable_by_key(|c| c.owner.part);
                e
            })
            .collect();
        let mut incidence = list_sizes.map(|_, &n| vec![Vec::new(); n]);
        for (ei, e) in edges.iter().enumerate() {
            for c in e {
                incidence[c.owner][c.slot].push(ei);
            }
        }
        Ok(Self { list_sizes, edges, incidence })
    }

    /// A cover with no edges.
    pub fn empty(h: &PartiteHypergraph, list_sizes: VertexMap<usize>) -> Result<Self, CoverViolation> {
        Self::new(h, list_sizes, Vec::new())
    }

    pub fn list_size(&self, v: VertexId) -> usize {
        self.list_sizes[v]
    }

    pub fn list_sizes(&self) -> &VertexMap<usize> {
        &self.list_sizes
    }

    pub fn edges(&self) -> &[Vec<CoverColor>] {
        &self.edges
    }

    /// Cover edges containing `c`, ascending.
    pub fn edges_at(&self, c: CoverColor) -> &[usize] {
        &self.incidence[c.owner][c.slot]
    }

    /// `deg_ℋ(c)`.
    pub fn degree(&self, c: CoverColor) -> usize {
        self.edges_at(c).len()
    }

    /// Largest cover degree among colors owned by each part.
    pub fn part_max_degrees(&self) -> Vec<usize> {
        self.incidence
            .parts()
            .iter()
            .map(|p| p.iter().flat_map(|s| s.iter().map(Vec::len)).max().unwrap_or(0))
            .collect()
    }

    fn check_coloring(
        &self,
        h: &PartiteHypergraph,
        phi: &VertexMap<Option<usize>>,
    ) -> Result<(), CoverError> {
        h.check_shape(phi)?;
        for (v, s) in phi.iter() {
            if let Some(slot) = *s {
                if slot >= self.list_sizes[v] {
                    return Err(CoverError::InvalidSlot { vertex: v, slot });
                }
            }
        }
        Ok(())
    }

    fn realized(&self, phi: &VertexMap<Option<usize>>, ei: usize, skip: VertexId) -> bool {
        self.edges[ei]
            .iter()
            .filter(|c| c.owner != skip)
            .all(|c| phi[c.owner] == Some(c.slot))
    }

    /// First cover edge through `(v, slot)` whose other colors are all in
    /// `im(φ)`.
    pub(crate) fn blocking_edge(
        &self,
        phi: &VertexMap<Option<usize>>,
        v: VertexId,
        slot: usize,
    ) -> Option<usize> {
        self.incidence[v][slot]
            .iter()
            .copied()
            .find(|&ei| self.realized(phi, ei, v))
    }

    pub(crate) fn surviving_slots(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Vec<usize> {
        (0..self.list_sizes[v])
            .filter(|&s| self.blocking_edge(phi, v, s).is_none())
            .collect()
    }

    /// Per-vertex surviving slots. Colored vertices map to their own slot.
    pub fn dp_residual(
        &self,
        h: &PartiteHypergraph,
        phi: &VertexMap<Option<usize>>,
    ) -> Result<VertexMap<Vec<usize>>, CoverError> {
        self.check_coloring(h, phi)?;
        Ok(phi.map(|v, s| match s {
            Some(slot) => vec![*slot],
            None => self.surviving_slots(phi, v),
        }))
    }

    /// True iff no cover edge lies entirely inside `im(φ)`.
    pub fn is_proper_dp_coloring(
        &self,
        h: &PartiteHypergraph,
        phi: &VertexMap<Option<usize>>,
    ) -> Result<bool, CoverError> {
        self.check_coloring(h, phi)?;
        if let Some((v, _)) = phi.iter().find(|(_, s)| s.is_none()) {
            return Err(HypergraphError::Uncolored(v).into());
        }
        Ok(!self
            .edges
            .iter()
            .any(|e| e.iter().all(|c| phi[c.owner] == Some(c.slot))))
    }
}

/// Embeds a list assignment as a cover: slot `i` of `v` is the `i`-th
/// smallest color of `L(v)`, and colors correspond iff they are equal.
pub fn lift_list_assignment(h: &PartiteHypergraph, lists: &ListAssignment) -> CorrespondenceCover {
    let list_sizes = lists.as_map().map(|_, l| l.len());
    let mut edges = Vec::new();
    for e in h.edges() {
        let mut common: Vec<u32> = lists.list(e.vertex(0)).to_vec();
        for u in e.vertices().skip(1) {
            common.retain(|&c| lists.contains(u, c));
        }
        for c in common {
            edges.push(
                e.vertices()
                    .map(|u| {
                        let slot = lists.list(u).binary_search(&c).expect("common color");
                        CoverColor::new(u, slot)
                    })
                    .collect(),
            );
        }
    }
    CorrespondenceCover::new(h, list_sizes, edges).expect("lifted covers are valid")
}

/// An edge of the auxiliary hypergraph: a set of colors outside part `j`
/// which, if all realized, blocks every color of each witness vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxEdge {
    pub colors: Vec<CoverColor>,
    pub witnesses: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxHypergraph {
    pub j: usize,
    pub colors: Vec<CoverColor>,
    pub edges: Vec<AuxEdge>,
}

impl AuxHypergraph {
    pub fn degree(&self, c: CoverColor) -> usize {
        self.edges.iter().filter(|e| e.colors.binary_search(&c).is_ok()).count()
    }

    /// Colors of `edge` per owning part.
    pub fn part_counts(&self, edge: &AuxEdge, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k];
        for c in &edge.colors {
            counts[c.owner.part] += 1;
        }
        counts
    }
}

/// Enumerates the auxiliary hypergraph over colors outside part `j`. For
/// each `v ∈ V_j`, every choice of pairwise disjoint cover edges, one per
/// slot of `v`, yields the edge `S` made of their non-`v` colors; choices in
/// which two colors of `S` share an owner are dropped. Identical sets from
/// different witnesses are merged.
pub fn build_aux_hypergraph(
    h: &PartiteHypergraph,
    cover: &CorrespondenceCover,
    j: usize,
    cap: u64,
) -> Result<AuxHypergraph, CoverError> {
    if j >= h.k() {
        return Err(CoverError::InvalidPart(j));
    }
    let mut found: BTreeMap<Vec<CoverColor>, Vec<VertexId>> = BTreeMap::new();
    for v in h.part_vertices(j) {
        let q = cover.list_size(v);
        if q == 0 {
            continue;
        }
        let candidates: Vec<&[usize]> =
            (0..q).map(|s| cover.edges_at(CoverColor::new(v, s))).collect();
        let total = candidates
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
            .unwrap_or(u64::MAX);
        if total == 0 {
            continue;
        }
        if total > cap {
            return Err(CoverError::AuxExplosion { vertex: v, candidates: total, cap });
        }
        let mut chosen = Vec::with_capacity(q);
        enumerate_matchings(cover, v, &candidates, &mut chosen, &mut found);
    }
    let colors = cover
        .list_sizes()
        .iter()
        .filter(|(v, _)| v.part != j)
        .flat_map(|(v, &n)| (0..n).map(move |s| CoverColor::new(v, s)))
        .collect();
    let edges = found
        .into_iter()
        .map(|(colors, witnesses)| AuxEdge { colors, witnesses })
        .collect();
    Ok(AuxHypergraph { j, colors, edges })
}

fn enumerate_matchings(
    cover: &CorrespondenceCover,
    v: VertexId,
    candidates: &[&[usize]],
    chosen: &mut Vec<usize>,
    found: &mut BTreeMap<Vec<CoverColor>, Vec<VertexId>>,
) {
    let depth = chosen.len();
    if depth == candidates.len() {
        let mut s: Vec<CoverColor> = chosen
            .iter()
            .flat_map(|&ei| cover.edges()[ei].iter().copied())
            .filter(|c| c.owner != v)
            .collect();
        s.sort_unstable();
        // Disjointness was enforced on the way down; owners must also differ.
        if s.windows(2).any(|w| w[0].owner == w[1].owner) {
            return;
        }
        let witnesses = found.entry(s).or_default();
        if !witnesses.contains(&v) {
            witnesses.push(v);
        }
        return;
    }
    for &ei in candidates[depth] {
        let disjoint = chosen.iter().all(|&other| {
            cover.edges()[ei]
                .iter()
                .filter(|c| c.owner != v)
                .all(|c| !cover.edges()[other].contains(c))
        });
        if disjoint {
            chosen.push(ei);
            enumerate_matchings(cover, v, candidates, chosen, found);
            chosen.pop();
        }
    }
}
