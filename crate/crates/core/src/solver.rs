//! Moser–Tardos resampling for the partial-coloring argument.
//!
//! Every vertex outside the distinguished part `V_j` draws a color uniformly
//! from its list. A vertex `v ∈ V_j` is bad when its residual list is empty;
//! while some vertex is bad, the first one in part-major order has its
//! variables redrawn. Once no vertex is bad, each `v ∈ V_j` takes its lowest
//! residual color. No edge meets `V_j` twice, so these choices never clash.
//!
//! The loop runs on slot indices (positions in a sorted list, or cover
//! slots), so list and correspondence instances share one implementation
//! and, for a lifted cover, consume the random stream identically.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{eval, measure_cover_instance, measure_list_instance, Condition, ParamVector};
use crate::correspondence::{CorrespondenceCover, CoverError};
use crate::hypergraph::{HypergraphError, PartiteHypergraph, VertexId, VertexMap};
use crate::lists::{is_proper_list_coloring, residual_at, Color, ListAssignment, ListError, PartialColoring};
use crate::rng::stream;

/// Resampling budget per vertex when none is configured.
pub const DEFAULT_RESAMPLES_PER_VERTEX: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    #[default]
    Auto,
    C1,
    C2,
    C3,
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Regime::Auto),
            "c1" => Ok(Regime::C1),
            "c2" => Ok(Regime::C2),
            "c3" => Ok(Regime::C3),
            _ => Err(format!("unknown regime {s:?} (expected auto, c1, c2 or c3)")),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Auto => "auto",
            Regime::C1 => "c1",
            Regime::C2 => "c2",
            Regime::C3 => "c3",
        })
    }
}

/// Which variables a bad vertex `v` redraws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResampleScope {
    /// All of `N(v)`: the full variable set of the event.
    #[default]
    Neighborhood,
    /// For each color of `L(v)`, the other vertices of the first edge that
    /// blocks it.
    Witness,
}

impl FromStr for ResampleScope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "neighborhood" => Ok(ResampleScope::Neighborhood),
            "witness" => Ok(ResampleScope::Witness),
            _ => Err(format!("unknown scope {s:?} (expected neighborhood or witness)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Distinguished part; chosen from the measured parameters when unset.
    pub j: Option<usize>,
    pub regime: Regime,
    pub seed: u64,
    /// Defaults to `100 |V|`.
    pub max_resamples: Option<u64>,
    pub record_trace: bool,
    pub scope: ResampleScope,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            j: None,
            regime: Regime::Auto,
            seed: 0,
            max_resamples: None,
            record_trace: false,
            scope: ResampleScope::Neighborhood,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn budget(&self, h: &PartiteHypergraph) -> u64 {
        self.max_resamples
            .unwrap_or(DEFAULT_RESAMPLES_PER_VERTEX * h.num_vertices() as u64)
            .max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("distinguished part {j} out of range for k = {k}")]
    BadPart { j: usize, k: usize },
    #[error("max_resamples must be at least 1")]
    ZeroBudget,
    #[error("regime {0} is not available for correspondence covers (only c1 and auto)")]
    UnsupportedRegime(Regime),
    #[error("vertex {0} has an empty residual list")]
    Stuck(VertexId),
    #[error("vertex {0} has an empty list")]
    InfeasibleList(VertexId),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    List(#[from] ListError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// The event `L_φ(v) = ∅` for `v ∈ V_j`, with the variables it reads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadEvent {
    pub vertex: VertexId,
    pub variables: Vec<VertexId>,
}

impl BadEvent {
    pub fn vertex_empty(h: &PartiteHypergraph, v: VertexId) -> Result<Self, HypergraphError> {
        Ok(Self { vertex: v, variables: h.neighbors(v)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SolveStatus {
    Success,
    BudgetExhausted,
    InfeasibleList { vertex: VertexId },
}

/// One resampling step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: u64,
    pub vertex: VertexId,
    pub resampled: Vec<VertexId>,
}

/// Result of a solve. `T` is a color for list instances and a slot for
/// covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveOutcome<T> {
    #[serde(flatten)]
    pub status: SolveStatus,
    pub j: usize,
    /// The satisfied condition, or `None` when the run is outside every
    /// guarantee the solver knows about.
    pub guarantee: Option<Condition>,
    pub resample_count: u64,
    pub coloring: Option<VertexMap<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl<T> SolveOutcome<T> {
    pub fn is_success(&self) -> bool {
        self.status == SolveStatus::Success
    }
}

/// The instance-specific part of the loop.
trait SlotModel {
    fn hypergraph(&self) -> &PartiteHypergraph;
    fn slots(&self, v: VertexId) -> usize;
    /// Lowest slot of `v` not blocked under `phi`.
    fn lowest_surviving(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Option<usize>;
    /// Vertices of the first blocking edge for each slot of `v`, minus `v`.
    fn witness_variables(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Vec<VertexId>;
}

struct ListModel<'a> {
    h: &'a PartiteHypergraph,
    lists: &'a ListAssignment,
}

impl ListModel<'_> {
    fn color(&self, phi: &VertexMap<Option<usize>>, u: VertexId) -> Option<Color> {
        phi[u].map(|s| self.lists.list(u)[s])
    }

    /// The common color of `e - v` when it is monochromatic.
    fn rest_color(&self, phi: &VertexMap<Option<usize>>, ei: usize, v: VertexId) -> Option<Color> {
        let mut common = None;
        for u in self.h.edge(ei).vertices().filter(|&u| u != v) {
            let c = self.color(phi, u)?;
            match common {
                None => common = Some(c),
                Some(prev) if prev != c => return None,
                _ => {}
            }
        }
        common
    }

    fn blocked(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Vec<Color> {
        let mut blocked: Vec<Color> = self
            .h
            .incident(v)
            .iter()
            .filter_map(|&ei| self.rest_color(phi, ei, v))
            .collect();
        blocked.sort_unstable();
        blocked.dedup();
        blocked
    }
}

impl SlotModel for ListModel<'_> {
    fn hypergraph(&self) -> &PartiteHypergraph {
        self.h
    }

    fn slots(&self, v: VertexId) -> usize {
        self.lists.list(v).len()
    }

    fn lowest_surviving(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Option<usize> {
        let blocked = self.blocked(phi, v);
        self.lists
            .list(v)
            .iter()
            .position(|c| blocked.binary_search(c).is_err())
    }

    fn witness_variables(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Vec<VertexId> {
        let mut vars = Vec::new();
        for &c in self.lists.list(v) {
            let first = self
                .h
                .incident(v)
                .iter()
                .copied()
                .find(|&ei| self.rest_color(phi, ei, v) == Some(c));
            if let Some(ei) = first {
                vars.extend(self.h.edge(ei).vertices().filter(|&u| u != v));
            }
        }
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

struct CoverModel<'a> {
    h: &'a PartiteHypergraph,
    cover: &'a CorrespondenceCover,
}

impl SlotModel for CoverModel<'_> {
    fn hypergraph(&self) -> &PartiteHypergraph {
        self.h
    }

    fn slots(&self, v: VertexId) -> usize {
        self.cover.list_size(v)
    }

    fn lowest_surviving(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Option<usize> {
        (0..self.slots(v)).find(|&s| self.cover.blocking_edge(phi, v, s).is_none())
    }

    fn witness_variables(&self, phi: &VertexMap<Option<usize>>, v: VertexId) -> Vec<VertexId> {
        let mut vars = Vec::new();
        for s in 0..self.slots(v) {
            if let Some(ei) = self.cover.blocking_edge(phi, v, s) {
                vars.extend(self.cover.edges()[ei].iter().map(|c| c.owner).filter(|&u| u != v));
            }
        }
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

fn draw_slots(
    h: &PartiteHypergraph,
    j: usize,
    slots: impl Fn(VertexId) -> usize,
    rng: &mut ChaCha8Rng,
) -> VertexMap<Option<usize>> {
    VertexMap::from_fn(h.part_sizes(), |v| {
        (v.part != j).then(|| rng.gen_range(0..slots(v)))
    })
}

struct RawRun {
    status: SolveStatus,
    slots: Option<VertexMap<usize>>,
    resample_count: u64,
    trace: Option<Vec<TraceStep>>,
}

fn first_empty_list(h: &PartiteHypergraph, slots: impl Fn(VertexId) -> usize) -> Option<VertexId> {
    h.vertices().find(|&v| slots(v) == 0)
}

fn run<M: SlotModel>(model: &M, j: usize, config: &SolverConfig) -> RawRun {
    let h = model.hypergraph();
    if let Some(v) = first_empty_list(h, |v| model.slots(v)) {
        return RawRun {
            status: SolveStatus::InfeasibleList { vertex: v },
            slots: None,
            resample_count: 0,
            trace: None,
        };
    }
    let budget = config.budget(h);
    let mut rng = stream(config.seed);
    let mut phi = draw_slots(h, j, |v| model.slots(v), &mut rng);
    let is_bad = |phi: &VertexMap<Option<usize>>, v| model.lowest_surviving(phi, v).is_none();
    let mut bad: BTreeSet<VertexId> = h.part_vertices(j).filter(|&v| is_bad(&phi, v)).collect();
    let mut trace = config.record_trace.then(Vec::new);
    let mut steps = 0u64;

    while let Some(&v) = bad.first() {
        if steps == budget {
            return RawRun { status: SolveStatus::BudgetExhausted, slots: None, resample_count: steps, trace };
        }
        let vars = match config.scope {
            ResampleScope::Neighborhood => h.neighbors_unchecked(v),
            ResampleScope::Witness => model.witness_variables(&phi, v),
        };
        for &u in &vars {
            phi[u] = Some(rng.gen_range(0..model.slots(u)));
        }
        steps += 1;
        let mut affected: Vec<VertexId> = vars
            .iter()
            .flat_map(|&u| h.incident(u).iter().map(|&ei| h.edge(ei).vertex(j)))
            .collect();
        affected.push(v);
        affected.sort_unstable();
        affected.dedup();
        for w in affected {
            if is_bad(&phi, w) {
                bad.insert(w);
            } else {
                bad.remove(&w);
            }
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceStep { step: steps, vertex: v, resampled: vars });
        }
    }

    let slots = phi.map(|v, s| match s {
        Some(s) => *s,
        None => model
            .lowest_surviving(&phi, v)
            .expect("no bad vertices remain"),
    });
    RawRun { status: SolveStatus::Success, slots: Some(slots), resample_count: steps, trace }
}

fn check_part(h: &PartiteHypergraph, j: usize) -> Result<(), SolveError> {
    if j < h.k() {
        Ok(())
    } else {
        Err(SolveError::BadPart { j, k: h.k() })
    }
}

/// Picks `j` and the condition that certifies it. With `j` unset, the first
/// part with a satisfied condition wins; failing that, the part with the
/// largest margin.
fn resolve_guarantee(
    k: usize,
    config: &SolverConfig,
    allowed: &[Condition],
    measure: impl Fn(usize) -> ParamVector,
) -> (usize, Option<Condition>) {
    let conditions: Vec<Condition> = match config.regime {
        Regime::Auto => allowed.to_vec(),
        Regime::C1 => vec![Condition::C1],
        Regime::C2 => vec![Condition::C2],
        Regime::C3 => vec![Condition::C3],
    };
    let assess = |j: usize| {
        let pv = measure(j);
        let mut best = f64::NEG_INFINITY;
        for &c in &conditions {
            if let Ok(verdict) = eval(c, &pv) {
                if verdict.satisfied {
                    return (Some(c), verdict.margin);
                }
                best = best.max(verdict.margin);
            }
        }
        (None, best)
    };
    if let Some(j) = config.j {
        return (j, assess(j).0);
    }
    let mut fallback = (0, f64::NEG_INFINITY);
    for j in 0..k {
        let (guarantee, margin) = assess(j);
        if guarantee.is_some() {
            return (j, guarantee);
        }
        if margin > fallback.1 {
            fallback = (j, margin);
        }
    }
    (fallback.0, None)
}

fn finish<T>(raw: RawRun, j: usize, guarantee: Option<Condition>, to_value: impl Fn(VertexId, usize) -> T) -> SolveOutcome<T> {
    SolveOutcome {
        status: raw.status,
        j,
        guarantee,
        resample_count: raw.resample_count,
        coloring: raw.slots.map(|s| s.map(|v, &slot| to_value(v, slot))),
        trace: raw.trace,
    }
}

/// Solves a list instance. Every success is verified before it is returned.
pub fn moser_tardos_solve(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    config: &SolverConfig,
) -> Result<SolveOutcome<Color>, SolveError> {
    h.check_shape(lists.as_map())?;
    if config.max_resamples == Some(0) {
        return Err(SolveError::ZeroBudget);
    }
    if let Some(j) = config.j {
        check_part(h, j)?;
    }
    let (j, guarantee) = resolve_guarantee(
        h.k(),
        config,
        &[Condition::C1, Condition::C2, Condition::C3],
        |j| measure_list_instance(h, lists, j),
    );
    let raw = run(&ListModel { h, lists }, j, config);
    let outcome = finish(raw, j, guarantee, |v, s| lists.list(v)[s]);
    if let Some(colors) = &outcome.coloring {
        let phi = PartialColoring::from_map(colors.map(|_, &c| Some(c)));
        assert!(
            is_proper_list_coloring(h, lists, &phi)?,
            "solver produced an improper coloring"
        );
    }
    Ok(outcome)
}

/// Solves a correspondence instance; colors are slots. Only C1 is known to
/// certify covers.
pub fn dp_solve(
    h: &PartiteHypergraph,
    cover: &CorrespondenceCover,
    config: &SolverConfig,
) -> Result<SolveOutcome<usize>, SolveError> {
    h.check_shape(cover.list_sizes())?;
    if config.max_resamples == Some(0) {
        return Err(SolveError::ZeroBudget);
    }
    if matches!(config.regime, Regime::C2 | Regime::C3) {
        return Err(SolveError::UnsupportedRegime(config.regime));
    }
    if let Some(j) = config.j {
        check_part(h, j)?;
    }
    let (j, guarantee) =
        resolve_guarantee(h.k(), config, &[Condition::C1], |j| measure_cover_instance(h, cover, j));
    let raw = run(&CoverModel { h, cover }, j, config);
    let outcome = finish(raw, j, guarantee, |_, s| s);
    if let Some(slots) = &outcome.coloring {
        assert!(
            cover.is_proper_dp_coloring(h, &slots.map(|_, &s| Some(s)))?,
            "solver produced an improper cover coloring"
        );
    }
    Ok(outcome)
}

/// Colors every vertex outside `V_j` uniformly from its list, drawing in
/// part-major order. `V_j` stays uncolored.
pub fn random_partial_coloring<R: Rng>(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    rng: &mut R,
) -> Result<PartialColoring, SolveError> {
    h.check_shape(lists.as_map())?;
    check_part(h, j)?;
    if let Some(v) = h.vertices().find(|&v| v.part != j && lists.list(v).is_empty()) {
        return Err(SolveError::InfeasibleList(v));
    }
    let map = VertexMap::from_fn(h.part_sizes(), |v| {
        (v.part != j).then(|| {
            let list = lists.list(v);
            list[rng.gen_range(0..list.len())]
        })
    });
    Ok(PartialColoring::from_map(map))
}

/// Vertices of `V_j` whose residual list is empty, in part-major order.
pub fn find_bad_vertices(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    j: usize,
) -> Result<Vec<VertexId>, SolveError> {
    phi.check(h, lists)?;
    check_part(h, j)?;
    Ok(h.part_vertices(j)
        .filter(|&v| residual_at(h, lists, phi.as_map(), v).is_empty())
        .collect())
}

/// Gives every vertex of `V_j` its lowest residual color.
pub fn greedy_extend(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    j: usize,
) -> Result<PartialColoring, SolveError> {
    phi.check(h, lists)?;
    check_part(h, j)?;
    if let Some(v) = h.vertices().find(|&v| v.part != j && phi.get(v).is_none()) {
        return Err(HypergraphError::Uncolored(v).into());
    }
    let mut out = phi.clone();
    for v in h.part_vertices(j) {
        let residual = residual_at(h, lists, phi.as_map(), v);
        let c = *residual.first().ok_or(SolveError::Stuck(v))?;
        out.set(v, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{lift_list_assignment, CoverColor};
    use crate::generators::{gen_complete, gen_random};
    use crate::hypergraph::Edge;
    use crate::rng::stream;

    fn single_edge() -> PartiteHypergraph {
        PartiteHypergraph::new(vec![1, 1], vec![Edge::new(vec![0, 0])]).unwrap()
    }

    fn cfg(j: usize, seed: u64) -> SolverConfig {
        SolverConfig { j: Some(j), seed, ..SolverConfig::default() }
    }

    #[test]
    fn edgeless_instance_needs_no_resampling() {
        let h = PartiteHypergraph::empty(vec![3, 3]).unwrap();
        let l = ListAssignment::uniform(&h, &[1]);
        let out = moser_tardos_solve(&h, &l, &SolverConfig::default()).unwrap();
        assert!(out.is_success());
        assert_eq!(out.resample_count, 0);
    }

    #[test]
    fn uncolorable_edge_exhausts_budget() {
        let h = single_edge();
        let l = ListAssignment::uniform(&h, &[1]);
        let config = SolverConfig { max_resamples: Some(50), ..cfg(1, 0) };
        let out = moser_tardos_solve(&h, &l, &config).unwrap();
        assert_eq!(out.status, SolveStatus::BudgetExhausted);
        assert_eq!(out.resample_count, 50);
        assert!(out.coloring.is_none());
    }

    #[test]
    fn complete_bipartite_two_colors() {
        let h = gen_complete(2, 2).unwrap();
        let l = ListAssignment::uniform(&h, &[1, 2]);
        for seed in 0..20 {
            let out = moser_tardos_solve(&h, &l, &cfg(1, seed)).unwrap();
            assert!(out.is_success());
        }
    }

    #[test]
    fn empty_list_is_infeasible() {
        let h = single_edge();
        let mut map = VertexMap::from_fn(h.part_sizes(), |_| vec![1]);
        map[VertexId::new(0, 0)] = vec![];
        let l = ListAssignment::new(&h, map).unwrap();
        let out = moser_tardos_solve(&h, &l, &cfg(1, 0)).unwrap();
        assert_eq!(out.status, SolveStatus::InfeasibleList { vertex: VertexId::new(0, 0) });
        let mut rng = stream(0);
        assert_eq!(
            random_partial_coloring(&h, &l, 1, &mut rng),
            Err(SolveError::InfeasibleList(VertexId::new(0, 0)))
        );
    }

    #[test]
    fn singleton_lists_give_the_unique_assignment() {
        let h = gen_complete(3, 2).unwrap();
        let l = ListAssignment::new(&h, VertexMap::from_fn(h.part_sizes(), |v| vec![v.index as Color + 1])).unwrap();
        let phi = random_partial_coloring(&h, &l, 2, &mut stream(3)).unwrap();
        for v in h.vertices() {
            let expected = (v.part != 2).then_some(v.index as Color + 1);
            assert_eq!(phi.get(v), expected);
        }
    }

    #[test]
    fn empty_distinguished_part_colors_the_other_side() {
        let h = PartiteHypergraph::empty(vec![3, 0]).unwrap();
        let l = ListAssignment::uniform(&h, &[4, 5]);
        let phi = random_partial_coloring(&h, &l, 1, &mut stream(1)).unwrap();
        assert!(phi.is_total());
    }

    #[test]
    fn bad_vertex_examples() {
        let h = single_edge();
        let l = ListAssignment::uniform(&h, &[1]);
        let mut phi = PartialColoring::empty(&h);
        phi.set(VertexId::new(0, 0), 1);
        assert_eq!(find_bad_vertices(&h, &l, &phi, 1).unwrap(), vec![VertexId::new(1, 0)]);
        assert_eq!(greedy_extend(&h, &l, &phi, 1), Err(SolveError::Stuck(VertexId::new(1, 0))));

        let h = PartiteHypergraph::empty(vec![2, 2]).unwrap();
        let l = ListAssignment::uniform(&h, &[1, 2]);
        let mut phi = PartialColoring::empty(&h);
        phi.set(VertexId::new(0, 0), 1);
        phi.set(VertexId::new(0, 1), 2);
        assert!(find_bad_vertices(&h, &l, &phi, 1).unwrap().is_empty());
        let total = greedy_extend(&h, &l, &phi, 1).unwrap();
        assert!(is_proper_list_coloring(&h, &l, &total).unwrap());
    }

    #[test]
    fn reruns_are_identical() {
        let h = gen_random(3, 5, 0.4, 11).unwrap();
        let l = ListAssignment::uniform(&h, &[1, 2]);
        let config = SolverConfig { record_trace: true, ..SolverConfig::with_seed(99) };
        let a = serde_json::to_string(&moser_tardos_solve(&h, &l, &config).unwrap()).unwrap();
        let b = serde_json::to_string(&moser_tardos_solve(&h, &l, &config).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lifted_cover_matches_list_solver() {
        for seed in 0..30 {
            let h = gen_random(3, 3, 0.5, seed).unwrap();
            let l = ListAssignment::uniform(&h, &[1, 2]);
            let cover = lift_list_assignment(&h, &l);
            for scope in [ResampleScope::Neighborhood, ResampleScope::Witness] {
                let config = SolverConfig { scope, record_trace: true, max_resamples: Some(200), ..cfg(2, seed) };
                let list = moser_tardos_solve(&h, &l, &config).unwrap();
                let dp = dp_solve(&h, &cover, &config).unwrap();
                assert_eq!(list.status, dp.status);
                assert_eq!(list.resample_count, dp.resample_count);
                assert_eq!(list.trace, dp.trace);
                let lifted = list.coloring.map(|c| c.map(|v, &c| l.list(v).iter().position(|&x| x == c).unwrap()));
                assert_eq!(lifted, dp.coloring);
            }
        }
    }

    #[test]
    fn empty_cover_succeeds_immediately() {
        let h = gen_complete(2, 2).unwrap();
        let sizes = VertexMap::from_fn(h.part_sizes(), |_| 1);
        let cover = CorrespondenceCover::empty(&h, sizes).unwrap();
        let out = dp_solve(&h, &cover, &cfg(0, 0)).unwrap();
        assert!(out.is_success());
        assert_eq!(out.resample_count, 0);
    }

    #[test]
    fn cover_with_one_color_matched_to_two_slots() {
        // Two host edges through w = (2,0) match its slot 0 to slot 0 and to
        // slot 1 of the same remote vertex u = (0,0).
        let h = PartiteHypergraph::new(
            vec![1, 2, 1],
            vec![Edge::new(vec![0, 0, 0]), Edge::new(vec![0, 1, 0])],
        )
        .unwrap();
        let sizes = VertexMap::from_fn(h.part_sizes(), |_| 2);
        let c = CoverColor::new;
        let v = VertexId::new;
        let edges = vec![
            vec![c(v(0, 0), 0), c(v(1, 0), 0), c(v(2, 0), 0)],
            vec![c(v(0, 0), 1), c(v(1, 1), 0), c(v(2, 0), 0)],
        ];
        let cover = CorrespondenceCover::new(&h, sizes, edges).unwrap();
        for seed in 0..20 {
            for scope in [ResampleScope::Neighborhood, ResampleScope::Witness] {
                let out = dp_solve(&h, &cover, &SolverConfig { scope, ..cfg(2, seed) }).unwrap();
                assert!(out.is_success());
            }
        }
    }

    #[test]
    fn dp_rejects_list_only_regimes() {
        let h = gen_complete(2, 2).unwrap();
        let cover = lift_list_assignment(&h, &ListAssignment::uniform(&h, &[1, 2]));
        let config = SolverConfig { regime: Regime::C2, ..SolverConfig::default() };
        assert_eq!(dp_solve(&h, &cover, &config), Err(SolveError::UnsupportedRegime(Regime::C2)));
    }

    #[test]
    fn auto_regime_tags_guarantee() {
        let h = gen_random(2, 200, 0.1, 4).unwrap();
        let l = ListAssignment::uniform(&h, &(1..=60).collect::<Vec<_>>());
        let out = moser_tardos_solve(&h, &l, &SolverConfig::with_seed(1)).unwrap();
        assert!(out.is_success());
        assert!(out.guarantee.is_some());
        let tiny = ListAssignment::uniform(&h, &[1, 2]);
        let config = SolverConfig { max_resamples: Some(10), ..SolverConfig::with_seed(1) };
        let out = moser_tardos_solve(&h, &tiny, &config).unwrap();
        assert_eq!(out.guarantee, None);
    }

    #[test]
    fn bad_part_is_rejected() {
        let h = single_edge();
        let l = ListAssignment::uniform(&h, &[1]);
        assert_eq!(moser_tardos_solve(&h, &l, &cfg(2, 0)), Err(SolveError::BadPart { j: 2, k: 2 }));
    }
}
