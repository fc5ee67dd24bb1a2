//! Exhaustive ground truth for tiny instances.
//!
//! Probabilities are exact rationals over the uniform product measure on
//! `Π_{v ∉ V_j} L(v)`. Float bounds are converted to rationals exactly and
//! compared with a slack of [`BOUND_SLACK`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::conditions::{claim_31_bound, lemma_41_bound, measure_list_instance, ConditionError, ParamVector};
use crate::hypergraph::{HypergraphError, PartiteHypergraph, VertexId, VertexMap};
use crate::lists::{blocked_colors, color_degree, sum_color_degrees, Color, ListAssignment, ListError, PartialColoring};

/// Largest `Π_v |L(v)|` the colorability oracles accept.
pub const COLORABILITY_CAP: u128 = 10_000_000;
/// Largest outcome space the probability oracles enumerate.
pub const EVENT_CAP: u128 = 1_000_000;
pub const HARRIS_MAX_GROUND: usize = 20;
pub const CLAIM_32_MAX_LIST: usize = 4;
pub const CHROMATIC_MAX_VERTICES: usize = 12;
/// Absolute slack when an exact probability is compared with a float bound.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} has size {size}, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("distinguished part {j} out of range for k = {k}")]
    BadPart { j: usize, k: usize },
    #[error("vertex {vertex} is not in the distinguished part {j}")]
    NotInPart { vertex: VertexId, j: usize },
    #[error("vertex {0} has an empty list, so the outcome space is empty")]
    EmptyList(VertexId),
    #[error("list of {vertex} has {len} colors; at most {max} supported")]
    ListTooLong { vertex: VertexId, len: usize, max: usize },
    #[error("family {family} is not decreasing: it contains set {set:#b} but not the set without element {element}")]
    NotDecreasing { family: usize, set: u32, element: usize },
    #[error("expected {expected} probabilities, got {got}")]
    ProbabilityCount { expected: usize, got: usize },
    #[error("probability {index} lies outside [0, 1]")]
    BadProbability { index: usize },
    #[error(transparent)]
    List(#[from] ListError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

fn saturating_product(sizes: impl Iterator<Item = usize>) -> u128 {
    sizes.fold(1u128, |acc, n| acc.saturating_mul(n as u128))
}

fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

fn check_part(h: &PartiteHypergraph, j: usize) -> Result<(), OracleError> {
    if j < h.k() {
        Ok(())
    } else {
        Err(OracleError::BadPart { j, k: h.k() })
    }
}

fn check_in_part(h: &PartiteHypergraph, j: usize, v: VertexId) -> Result<(), OracleError> {
    check_part(h, j)?;
    h.degree(v)?;
    if v.part == j {
        Ok(())
    } else {
        Err(OracleError::NotInPart { vertex: v, j })
    }
}

/// Whether the edges through `v` are all properly colored, counting only
/// edges whose vertices are all colored.
fn locally_proper(h: &PartiteHypergraph, colors: &VertexMap<Option<Color>>, v: VertexId) -> bool {
    h.incident(v).iter().all(|&ei| {
        let mut it = h.edge(ei).vertices().map(|u| colors[u]);
        let first = it.next().flatten();
        match first {
            None => true,
            Some(c) => !it.all(|x| x == Some(c)),
        }
    })
}

/// Backtracking over vertices in descending degree order and colors in
/// ascending order. Returns a witness coloring when one exists.
pub fn exact_list_colorable(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
) -> Result<Option<PartialColoring>, OracleError> {
    h.check_shape(lists.as_map())?;
    let size = saturating_product(h.vertices().map(|v| lists.list(v).len()));
    check_cap("list assignment product", size, COLORABILITY_CAP)?;
    let mut order: Vec<VertexId> = h.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.incident(v).len()));
    let mut colors = VertexMap::from_fn(h.part_sizes(), |_| None);

    fn go(
        h: &PartiteHypergraph,
        lists: &ListAssignment,
        order: &[VertexId],
        colors: &mut VertexMap<Option<Color>>,
    ) -> bool {
        let Some((&v, rest)) = order.split_first() else {
            return true;
        };
        for &c in lists.list(v) {
            colors[v] = Some(c);
            if locally_proper(h, colors, v) && go(h, lists, rest, colors) {
                return true;
            }
        }
        colors[v] = None;
        false
    }

    Ok(go(h, lists, &order, &mut colors).then(|| PartialColoring::from_map(colors)))
}

/// Flat enumeration of every total assignment. Independent of
/// [`exact_list_colorable`] so the two can check each other.
pub fn list_colorable_by_enumeration(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
) -> Result<bool, OracleError> {
    h.check_shape(lists.as_map())?;
    let size = saturating_product(h.vertices().map(|v| lists.list(v).len()));
    check_cap("list assignment product", size, COLORABILITY_CAP)?;
    let vertices: Vec<VertexId> = h.vertices().collect();
    if vertices.iter().any(|&v| lists.list(v).is_empty()) {
        return Ok(false);
    }
    let mut digits = vec![0usize; vertices.len()];
    loop {
        let map = VertexMap::from_fn(h.part_sizes(), |v| {
            let pos = vertices.iter().position(|&u| u == v).expect("vertex listed");
            Some(lists.list(v)[digits[pos]])
        });
        if h.is_proper_coloring(&map)? {
            return Ok(true);
        }
        if !odometer(&mut digits, |i| lists.list(vertices[i]).len()) {
            return Ok(false);
        }
    }
}

/// Advances a mixed-radix counter, last digit fastest. False on wrap-around.
fn odometer(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Calls `f` on every coloring of `V ∖ V_j` from the lists (each equally
/// likely) and returns how many there were.
pub fn for_each_outcome(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    mut f: impl FnMut(&PartialColoring),
) -> Result<u128, OracleError> {
    h.check_shape(lists.as_map())?;
    check_part(h, j)?;
    let free: Vec<VertexId> = h.vertices().filter(|v| v.part != j).collect();
    if let Some(&v) = free.iter().find(|&&v| lists.list(v).is_empty()) {
        return Err(OracleError::EmptyList(v));
    }
    let total = saturating_product(free.iter().map(|&v| lists.list(v).len()));
    check_cap("outcome space", total, EVENT_CAP)?;
    let mut phi = PartialColoring::empty(h);
    for &v in &free {
        phi.set(v, lists.list(v)[0]);
    }
    let mut digits = vec![0usize; free.len()];
    loop {
        f(&phi);
        let mut i = free.len();
        loop {
            if i == 0 {
                return Ok(total);
            }
            i -= 1;
            let list = lists.list(free[i]);
            digits[i] = (digits[i] + 1) % list.len();
            phi.set(free[i], list[digits[i]]);
            if digits[i] != 0 {
                break;
            }
        }
    }
}

fn ratio(count: u128, total: u128) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(total))
}

/// Exact probability of `event` under the uniform coloring of `V ∖ V_j`.
pub fn exact_event_probability(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    event: impl Fn(&PartialColoring) -> bool,
) -> Result<BigRational, OracleError> {
    let mut hits = 0u128;
    let total = for_each_outcome(h, lists, j, |phi| hits += u128::from(event(phi)))?;
    Ok(ratio(hits, total))
}

/// `exact <= bound + BOUND_SLACK`, with the bound converted exactly.
pub fn within_bound(exact: &BigRational, bound: f64) -> bool {
    match BigRational::from_float(bound + BOUND_SLACK) {
        Some(b) => *exact <= b,
        None => bound == f64::INFINITY,
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parameters a single vertex `v ∈ V_j` is judged by: `q_i` the smallest
/// list in part `i ≠ j`, and `q_j = |L(v)|`.
fn vertex_params(h: &PartiteHypergraph, lists: &ListAssignment, j: usize, v: VertexId) -> ParamVector {
    let mut pv = measure_list_instance(h, lists, j);
    pv.q[j] = lists.list(v).len() as f64;
    pv
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim31Report {
    pub vertex: VertexId,
    pub color: Color,
    pub color_degree: usize,
    /// `P[X_{v,c} = 1]`.
    pub exact: BigRational,
    pub bound: f64,
    pub ok: bool,
}

/// Exact `P[c is blocked at v]` against `1 - (1 - Π_{i≠j} q_i^{-1})^{deg(v,c)}`.
pub fn verify_claim_31(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    v: VertexId,
    c: Color,
) -> Result<Claim31Report, OracleError> {
    check_in_part(h, j, v)?;
    let deg = color_degree(h, lists, v, c)?;
    let exact = exact_event_probability(h, lists, j, |phi| {
        blocked_colors(h, phi.as_map(), v).binary_search(&c).is_ok()
    })?;
    let bound = claim_31_bound(&vertex_params(h, lists, j, v), deg as f64)?;
    let ok = within_bound(&exact, bound);
    Ok(Claim31Report { vertex: v, color: c, color_degree: deg, exact, bound, ok })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim32Row {
    pub subset: Vec<Color>,
    /// `P[∀c ∈ I, X_{v,c} = 1]`.
    pub joint: BigRational,
    /// `Π_{c ∈ I} P[X_{v,c} = 1]`.
    pub product: BigRational,
    pub ok: bool,
}

/// Exact negative-correlation check for every subset of `L(v)`.
pub fn verify_claim_32(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    v: VertexId,
) -> Result<Vec<Claim32Row>, OracleError> {
    check_in_part(h, j, v)?;
    let list = lists.list(v);
    if list.len() > CLAIM_32_MAX_LIST {
        return Err(OracleError::ListTooLong { vertex: v, len: list.len(), max: CLAIM_32_MAX_LIST });
    }
    let masks = 1usize << list.len();
    let mut by_mask = vec![0u128; masks];
    let total = for_each_outcome(h, lists, j, |phi| {
        let blocked = blocked_colors(h, phi.as_map(), v);
        let mask = list
            .iter()
            .enumerate()
            .filter(|(_, c)| blocked.binary_search(c).is_ok())
            .fold(0usize, |m, (i, _)| m | 1 << i);
        by_mask[mask] += 1;
    })?;
    let at_least = |subset: usize| -> u128 {
        by_mask.iter().enumerate().filter(|(m, _)| m & subset == subset).map(|(_, &n)| n).sum()
    };
    let marginals: Vec<BigRational> = (0..list.len()).map(|i| ratio(at_least(1 << i), total)).collect();
    Ok((0..masks)
        .map(|subset| {
            let joint = ratio(at_least(subset), total);
            let product = (0..list.len())
                .filter(|i| subset & 1 << i != 0)
                .fold(BigRational::one(), |acc, i| acc * &marginals[i]);
            let ok = joint <= product;
            let subset = (0..list.len()).filter(|i| subset & 1 << i != 0).map(|i| list[i]).collect();
            Claim32Row { subset, joint, product, ok }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma41Report {
    pub vertex: VertexId,
    /// `Σ_{c ∈ L(v)} deg(v, c)`.
    pub color_degree_sum: usize,
    /// `P[L_φ(v) = ∅]`.
    pub exact: BigRational,
    pub bound: f64,
    pub ok: bool,
}

/// Exact `P[L_φ(v) = ∅]` against the Jensen-averaged bound with
/// `q_j = |L(v)|`.
pub fn verify_lemma_41(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    v: VertexId,
) -> Result<Lemma41Report, OracleError> {
    check_in_part(h, j, v)?;
    let list = lists.list(v);
    if list.is_empty() {
        return Err(OracleError::EmptyList(v));
    }
    let s = sum_color_degrees(h, lists, v)?;
    let exact = exact_event_probability(h, lists, j, |phi| {
        let blocked = blocked_colors(h, phi.as_map(), v);
        list.iter().all(|c| blocked.binary_search(c).is_ok())
    })?;
    let bound = lemma_41_bound(&vertex_params(h, lists, j, v), s as f64)?;
    let ok = within_bound(&exact, bound);
    Ok(Lemma41Report { vertex: v, color_degree_sum: s, exact, bound, ok })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarrisReport {
    /// `P[S ∈ ⋂ 𝒜_i]`.
    pub intersection: BigRational,
    /// `Π P[S ∈ 𝒜_i]`.
    pub product: BigRational,
    pub ok: bool,
}

/// Checks `P[⋂ 𝒜_i] >= Π P[𝒜_i]` for families of subsets of `{0..n-1}`
/// (bitmasks), where element `x` is included independently with probability
/// `probs[x]`. Every family must be decreasing.
pub fn verify_harris(
    probs: &[BigRational],
    families: &[&dyn Fn(u32) -> bool],
) -> Result<HarrisReport, OracleError> {
    let n = probs.len();
    check_cap("Harris ground set", n as u128, HARRIS_MAX_GROUND as u128)?;
    for (index, p) in probs.iter().enumerate() {
        if *p < BigRational::zero() || *p > BigRational::one() {
            return Err(OracleError::BadProbability { index });
        }
    }
    let subsets = 1u32 << n;
    for (family, member) in families.iter().enumerate() {
        for set in (0..subsets).filter(|&s| member(s)) {
            if let Some(element) = (0..n).find(|&x| set & 1 << x != 0 && !member(set & !(1 << x))) {
                return Err(OracleError::NotDecreasing { family, set, element });
            }
        }
    }
    // Integer weights over the common denominator Π b_x, built one element
    // at a time.
    let denom: BigInt = probs.iter().map(|p| p.denom().clone()).product();
    let mut weights = vec![BigInt::one()];
    for p in probs {
        let (a, b) = (p.numer(), p.denom());
        let miss = b - a;
        let mut next = Vec::with_capacity(weights.len() * 2);
        next.extend(weights.iter().map(|w| w * &miss));
        next.extend(weights.iter().map(|w| w * a));
        weights = next;
    }
    // Element x was appended as bit x.
    let weight = |set: u32| &weights[set as usize];
    let mass = |pred: &dyn Fn(u32) -> bool| -> BigRational {
        let num: BigInt = (0..subsets).filter(|&s| pred(s)).map(weight).sum();
        BigRational::new(num, denom.clone())
    };
    let intersection = mass(&|s| families.iter().all(|f| f(s)));
    let product = families.iter().fold(BigRational::one(), |acc, f| acc * mass(*f));
    let ok = intersection >= product;
    Ok(HarrisReport { intersection, product, ok })
}

/// The ground set and families behind the blocking events of one color:
/// element `x` is the event `φ(ground[x]) = c`, and the family of edge `e`
/// is `{S : e - v ⊄ S}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarrisInstance {
    pub ground: Vec<VertexId>,
    pub probs: Vec<BigRational>,
    /// For each edge of `E_H(v, c)`, the mask of `e - v`.
    pub required: Vec<u32>,
}

impl HarrisInstance {
    pub fn families(&self) -> Vec<Box<dyn Fn(u32) -> bool + '_>> {
        self.required
            .iter()
            .map(|&req| Box::new(move |s: u32| s & req != req) as Box<dyn Fn(u32) -> bool>)
            .collect()
    }

    pub fn verify(&self) -> Result<HarrisReport, OracleError> {
        let boxed = self.families();
        let refs: Vec<&dyn Fn(u32) -> bool> = boxed.iter().map(|f| f.as_ref()).collect();
        verify_harris(&self.probs, &refs)
    }
}

/// Translates `P[X_{v,c} = 0]` into a Harris instance over `V ∖ V_j`.
pub fn claim_31_harris_instance(
    h: &PartiteHypergraph,
    lists: &ListAssignment,
    j: usize,
    v: VertexId,
    c: Color,
) -> Result<HarrisInstance, OracleError> {
    check_in_part(h, j, v)?;
    color_degree(h, lists, v, c)?;
    let blocking: Vec<usize> = h
        .incident(v)
        .iter()
        .copied()
        .filter(|&ei| h.edge(ei).vertices().all(|u| lists.contains(u, c)))
        .collect();
    let mut ground: Vec<VertexId> = blocking
        .iter()
        .flat_map(|&ei| h.edge(ei).vertices().filter(|&u| u != v))
        .collect();
    ground.sort_unstable();
    ground.dedup();
    check_cap("Harris ground set", ground.len() as u128, HARRIS_MAX_GROUND as u128)?;
    let probs = ground
        .iter()
        .map(|&u| BigRational::new(BigInt::one(), BigInt::from(lists.list(u).len())))
        .collect();
    let required = blocking
        .iter()
        .map(|&ei| {
            h.edge(ei)
                .vertices()
                .filter(|&u| u != v)
                .map(|u| 1u32 << ground.binary_search(&u).expect("ground holds e - v"))
                .fold(0, |m, b| m | b)
        })
        .collect();
    Ok(HarrisInstance { ground, probs, required })
}

/// Least `q` admitting a proper `q`-coloring; `0` for the empty vertex set.
pub fn exact_chromatic_number(h: &PartiteHypergraph) -> Result<usize, OracleError> {
    let n = h.num_vertices();
    check_cap("vertex count", n as u128, CHROMATIC_MAX_VERTICES as u128)?;
    if n == 0 {
        return Ok(0);
    }
    for q in 1..=n {
        let palette: Vec<Color> = (1..=q as Color).collect();
        let lists = ListAssignment::uniform(h, &palette);
        if exact_list_colorable(h, &lists)?.is_some() {
            return Ok(q);
        }
    }
    unreachable!("n colors always suffice")
}
