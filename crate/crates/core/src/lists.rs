//! List assignments, color-degrees, partial colorings and residual lists.
//!
//! A color `c` is blocked at an uncolored vertex `v` exactly when some edge
//! through `v` has all of its other `k - 1` vertices colored, all with `c`.
//! Edges that are only partially colored never block.

use thiserror::Error;

use crate::hypergraph::{HypergraphError, PartiteHypergraph, VertexId, VertexMap};

pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ListError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("color {color} is not in the list of {vertex}")]
    ColorNotInList { vertex: VertexId, color: Color },
}

/// Per-vertex color lists, each kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: VertexMap<Vec<Color>>,
}

impl ListAssignment {
    /// Lists must cover every vertex of `h`; they may be empty.
    pub fn new(h: &PartiteHypergraph, lists: VertexMap<Vec<Color>>) -> Result<Self, ListError> {
        h.check_shape(&lists)?;
        let lists = lists.map(|_, l| {
            let mut l = l.clone();
            l.sort_unstable();
            l.dedup();
            l
        });
        Ok(Self { lists })
    }

    /// Every vertex gets the same list.
    pub fn uniform(h: &PartiteHypergraph, list: &[Color]) -> Self {
        let mut list = list.to_vec();
        list.sort_unstable();
        list.dedup();
        Self { lists: VertexMap::from_fn(h.part_sizes(), |_| list.clone()) }
    }

    pub fn list(&self, v: VertexId) -> &[Color] {
        &self.lists[v]
    }

    pub fn try_list(&self, v: VertexId) -> Option<&[Color]> {
        self.lists.get(v).map(Vec::as_slice)
    }

    pub fn contains(&self, v: VertexId, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    pub fn as_map(&self) -> &VertexMap<Vec<Color>> {
        &self.lists
    }

    /// Smallest list size in each part; `None` for empty parts.
    pub fn min_sizes(&self) -> Vec<Option<usize>> {
        self.lists
            .parts()
            .iter()
            .map(|p| p.iter().map(Vec::len).min())
            .collect()
    }
}

/// A partial map from vertices to colors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialColoring {
    colors: VertexMap<Option<Color>>,
}

impl PartialColoring {
    pub fn empty(h: &PartiteHypergraph) -> Self {
        Self { colors: VertexMap::from_fn(h.part_sizes(), |_| None) }
    }

    pub fn from_map(colors: VertexMap<Option<Color>>) -> Self {
        Self { colors }
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.colors[v]
    }

    pub fn set(&mut self, v: VertexId, c: Color) {
        self.colors[v] = Some(c);
    }

    pub fn clear(&mut self, v: VertexId) {
        self.colors[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|(_, c)| c.is_some())
    }

    pub fn as_map(&self) -> &VertexMap<Option<Color>> {
        &self.colors
    }

    pub fn into_map(self) -> VertexMap<Option<Color>> {
        self.colors
    }

    /// Checks the shape against `h` and that every assigned color is in
    /// its vertex's list.
    pub fn check(&self, h: &PartiteHypergraph, lists: &ListAssignment) -> Result<(), ListError> {
        h.check_shape(&self.colors)?;
        for (v, c) in self.colors.iter() {
            if let Some(c) = *c {
                if !lists.contains(v, c) {
                    return Err(ListError::ColorNotInList { vertex: v, color: c });
                }
            }
        }
        Ok(())
    }
}

fn check_vertex(h: &PartiteHypergraph, v: VertexId) -> Result<(), ListError> {
    if h.contains_vertex(v) {
        Ok(())
    } else {
        Err(HypergraphError::InvalidVertex(v).into())
    }
}

/// Number of edges through `v` in which every vertex's list contains `c`.
pub fn color_degree(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    v: VertexId,
    c: Color,
) -> Result<usize, ListError> {
    check_vertex(h, v)?;
    if !lists.contains(v, c) {
        return Err(ListError::ColorNotInList { vertex: v, color: c });
    }
    Ok(h.incident(v)
        .iter()
        .filter(|&&ei| h.edge(ei).vertices().all(|u| lists.contains(u, c)))
        .count())
}

/// `Σ_{c ∈ L(v)} deg(v, c)`.
pub fn sum_color_degrees(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    v: VertexId,
) -> Result<usize, ListError> {
    check_vertex(h, v)?;
    lists
        .list(v)
        .iter()
        .map(|&c| color_degree(h, lists, v, c))
        .sum()
}

/// Color-degrees of every (vertex, color) pair and their per-part maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorDegreeProfile {
    /// Aligned with the sorted list of each vertex.
    degrees: VertexMap<Vec<usize>>,
    part_max: Vec<usize>,
}

impl ColorDegreeProfile {
    pub fn compute(h: &PartiteHypergraph, lists: &ListAssignment) -> Self {
        let mut degrees = lists.as_map().map(|_, l| vec![0usize; l.len()]);
        for e in h.edges() {
            let mut common: Vec<Color> = lists.list(e.vertex(0)).to_vec();
            for u in e.vertices().skip(1) {
                common.retain(|&c| lists.contains(u, c));
            }
            for &c in &common {
                for u in e.vertices() {
                    let slot = lists.list(u).binary_search(&c).expect("color in intersection");
                    degrees[u][slot] += 1;
                }
            }
        }
        let part_max = degrees
            .parts()
            .iter()
            .map(|p| p.iter().flat_map(|d| d.iter().copied()).max().unwrap_or(0))
            .collect();
        Self { degrees, part_max }
    }

    pub fn degree(&self, lists: &ListAssignment, v: VertexId, c: Color) -> Option<usize> {
        let slot = lists.list(v).binary_search(&c).ok()?;
        Some(self.degrees[v][slot])
    }

    pub fn degrees_at(&self, v: VertexId) -> &[usize] {
        &self.degrees[v]
    }

    /// `D_i` for each part.
    pub fn part_max(&self) -> &[usize] {
        &self.part_max
    }
}

/// Colors blocked at `v` by edges whose other vertices are all colored with
/// that same color. Sorted, deduplicated.
pub(crate) fn blocked_colors(
    h: &PartiteHypergraph,
    coloring: &VertexMap<Option<Color>>,
    v: VertexId,
) -> Vec<Color> {
    let mut blocked = Vec::new();
    for &ei in h.incident(v) {
        if let Some(c) = monochromatic_rest(h, coloring, ei, v) {
            blocked.push(c);
        }
    }
    blocked.sort_unstable();
    blocked.dedup();
    blocked
}

/// The common color of `e - v` when every vertex of `e - v` is colored with it.
pub(crate) fn monochromatic_rest(
    h: &PartiteHypergraph,
    coloring: &VertexMap<Option<Color>>,
    ei: usize,
    v: VertexId,
) -> Option<Color> {
    let mut common = None;
    for u in h.edge(ei).vertices().filter(|&u| u != v) {
        let c = coloring[u]?;
        match common {
            None => common = Some(c),
            Some(prev) if prev != c => return None,
            _ => {}
        }
    }
    common
}

/// The residual list at a single vertex, ignoring whether `v` itself is
/// colored.
pub(crate) fn residual_at(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    coloring: &VertexMap<Option<Color>>,
    v: VertexId,
) -> Vec<Color> {
    let blocked = blocked_colors(h, coloring, v);
    lists
        .list(v)
        .iter()
        .copied()
        .filter(|c| blocked.binary_search(c).is_err())
        .collect()
}

/// `L_φ`: colors still available at each uncolored vertex. Colored vertices
/// map to the singleton of their color.
pub fn residual_lists(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
) -> Result<ListAssignment, ListError> {
    phi.check(h, lists)?;
    let map = lists.as_map().map(|v, _| match phi.get(v) {
        Some(c) => vec![c],
        None => residual_at(h, lists, phi.as_map(), v),
    });
    Ok(ListAssignment { lists: map })
}

/// A proper coloring in which every vertex uses a color from its list.
pub fn is_proper_list_coloring(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
) -> Result<bool, ListError> {
    h.check_shape(phi.as_map())?;
    let proper = h.is_proper_coloring(phi.as_map())?;
    let respects = phi
        .as_map()
        .iter()
        .all(|(v, c)| c.is_some_and(|c| lists.contains(v, c)));
    Ok(proper && respects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;

    fn single_edge(k: usize) -> PartiteHypergraph {
        PartiteHypergraph::new(vec![1; k], vec![Edge::new(vec![0; k])]).unwrap()
    }

    fn k22() -> PartiteHypergraph {
        let edges = vec![
            Edge::new(vec![0, 0]),
            Edge::new(vec![0, 1]),
            Edge::new(vec![1, 0]),
            Edge::new(vec![1, 1]),
        ];
        PartiteHypergraph::new(vec![2, 2], edges).unwrap()
    }

    fn lists_of(h: &PartiteHypergraph, parts: Vec<Vec<Vec<Color>>>) -> ListAssignment {
        ListAssignment::new(h, VertexMap::from_parts(parts)).unwrap()
    }

    fn v(p: usize, i: usize) -> VertexId {
        VertexId::new(p, i)
    }

    #[test]
    fn color_degree_examples() {
        let h = single_edge(2);
        let l = ListAssignment::uniform(&h, &[1, 2]);
        assert_eq!(color_degree(&h, &l, v(0, 0), 1), Ok(1));
        let l = lists_of(&h, vec![vec![vec![1, 2]], vec![vec![2]]]);
        assert_eq!(color_degree(&h, &l, v(0, 0), 1), Ok(0));
        assert_eq!(
            color_degree(&h, &l, v(1, 0), 1),
            Err(ListError::ColorNotInList { vertex: v(1, 0), color: 1 })
        );
        let h = k22();
        let l = ListAssignment::uniform(&h, &[1]);
        for u in h.vertices() {
            assert_eq!(color_degree(&h, &l, u, 1), Ok(2));
        }
    }

    #[test]
    fn profile_matches_direct_color_degree() {
        let h = k22();
        let l = lists_of(&h, vec![vec![vec![1, 2], vec![2, 3]], vec![vec![1, 2, 3], vec![3]]]);
        let profile = ColorDegreeProfile::compute(&h, &l);
        for u in h.vertices() {
            for &c in l.list(u) {
                assert_eq!(Some(color_degree(&h, &l, u, c).unwrap()), profile.degree(&l, u, c));
            }
        }
        assert_eq!(profile.part_max(), &[2, 2]);
    }

    #[test]
    fn residual_examples() {
        let h = single_edge(2);
        let l = ListAssignment::uniform(&h, &[1, 2]);
        let empty = PartialColoring::empty(&h);
        assert_eq!(residual_lists(&h, &l, &empty).unwrap(), l);

        let mut phi = PartialColoring::empty(&h);
        phi.set(v(0, 0), 1);
        let r = residual_lists(&h, &l, &phi).unwrap();
        assert_eq!(r.list(v(1, 0)), &[2]);
        assert_eq!(r.list(v(0, 0)), &[1]);

        let h = single_edge(3);
        let l = ListAssignment::uniform(&h, &[1, 2]);
        let mut phi = PartialColoring::empty(&h);
        phi.set(v(0, 0), 1);
        phi.set(v(1, 0), 2);
        assert_eq!(residual_lists(&h, &l, &phi).unwrap().list(v(2, 0)), &[1, 2]);

        // Partially colored edges never block.
        let mut phi = PartialColoring::empty(&h);
        phi.set(v(0, 0), 1);
        assert_eq!(residual_lists(&h, &l, &phi).unwrap().list(v(2, 0)), &[1, 2]);
    }

    #[test]
    fn residual_rejects_colors_outside_lists() {
        let h = single_edge(2);
        let l = ListAssignment::uniform(&h, &[1]);
        let mut phi = PartialColoring::empty(&h);
        phi.set(v(0, 0), 7);
        assert!(matches!(
            residual_lists(&h, &l, &phi),
            Err(ListError::ColorNotInList { color: 7, .. })
        ));
    }

    #[test]
    fn proper_list_coloring_examples() {
        let h = single_edge(2);
        let l = ListAssignment::uniform(&h, &[1, 2]);
        let phi = PartialColoring::from_map(VertexMap::from_parts(vec![vec![Some(1)], vec![Some(3)]]));
        assert_eq!(is_proper_list_coloring(&h, &l, &phi), Ok(false));

        let edgeless = PartiteHypergraph::empty(vec![2, 1]).unwrap();
        let l = ListAssignment::uniform(&edgeless, &[4]);
        let phi = PartialColoring::from_map(VertexMap::from_fn(edgeless.part_sizes(), |_| Some(4)));
        assert_eq!(is_proper_list_coloring(&edgeless, &l, &phi), Ok(true));

        // K_{3*2}, lists {1,2,3}, color = part + 1.
        let mut edges = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    edges.push(Edge::new(vec![a, b, c]));
                }
            }
        }
        let h = PartiteHypergraph::new(vec![2, 2, 2], edges).unwrap();
        let l = ListAssignment::uniform(&h, &[1, 2, 3]);
        let phi = PartialColoring::from_map(VertexMap::from_fn(h.part_sizes(), |u| {
            Some(u.part as Color + 1)
        }));
        assert_eq!(is_proper_list_coloring(&h, &l, &phi), Ok(true));

        let partial = PartialColoring::empty(&h);
        assert!(is_proper_list_coloring(&h, &l, &partial).is_err());
    }

    #[test]
    fn sum_color_degree_examples() {
        let edgeless = PartiteHypergraph::empty(vec![1, 1]).unwrap();
        let l = ListAssignment::uniform(&edgeless, &[1, 2]);
        assert_eq!(sum_color_degrees(&edgeless, &l, v(0, 0)), Ok(0));
        let h = single_edge(2);
        let l = ListAssignment::uniform(&h, &[1, 2]);
        assert_eq!(sum_color_degrees(&h, &l, v(0, 0)), Ok(2));
        let h = k22();
        let l = ListAssignment::uniform(&h, &[1, 2]);
        assert_eq!(sum_color_degrees(&h, &l, v(1, 1)), Ok(4));
    }
}
