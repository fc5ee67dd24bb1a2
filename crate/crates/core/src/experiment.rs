//! Monte-Carlo campaigns over generated instances, reported as CSV.
//!
//! Trial `t` of cell `c` is seeded with `derive_seed(seed_base, c, t)`, and
//! results are merged in `(cell, trial)` order, so the table does not
//! depend on how the worker pool schedules trials.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{lemma_41_bound, measure_list_instance, ConditionError};
use crate::generators::{GenError, GenSpec, GraphModel, ListModel, DEFAULT_INSTANCE_CAP};
use crate::hypergraph::VertexId;
use crate::lists::residual_at;
use crate::rng::{counter_u64, derive_seed, stream};
use crate::solver::{moser_tardos_solve, random_partial_coloring, SolveError, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "snake_case", deny_unknown_fields)]
pub enum Probe {
    /// Estimates `P[L_φ(v) = ∅]` for the first vertex of `V_j` against the
    /// single-vertex bound.
    Lemma41 { j: usize },
    /// Success rate of the resampling solver.
    Solver {
        #[serde(default)]
        j: Option<usize>,
        #[serde(default)]
        max_resamples: Option<u64>,
    },
}

/// One grid point: how to build each trial's instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub graph: GraphModel,
    pub lists: ListModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub name: String,
    pub cells: Vec<Cell>,
    pub probe: Probe,
    pub trials: usize,
    #[serde(default)]
    pub seed_base: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("cell {cell}: {source}")]
    Gen { cell: usize, source: GenError },
    #[error("cell {cell}: {source}")]
    Solve { cell: usize, source: SolveError },
    #[error("cell {cell}: {source}")]
    Condition { cell: usize, source: ConditionError },
    #[error("cell {cell}: part {j} has no vertices to probe")]
    EmptyPart { cell: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub campaign: String,
    pub cell: usize,
    pub graph: String,
    pub lists: String,
    pub probe: String,
    pub trials: usize,
    pub estimate: f64,
    /// Mean theoretical bound over trials; absent for solver probes.
    pub bound: Option<f64>,
    pub stderr: f64,
    /// `estimate <= bound + 3 stderr`, when there is a bound.
    pub verdict: Option<bool>,
    pub mean_resamples: Option<f64>,
}

struct Trial {
    hit: bool,
    bound: Option<f64>,
    resamples: Option<u64>,
}

fn run_trial(campaign: &Campaign, cell: usize, trial: usize, cap: u64) -> Result<Trial, ExperimentError> {
    let c = &campaign.cells[cell];
    let seed = derive_seed(campaign.seed_base, cell as u64, trial as u64);
    let spec = GenSpec { graph: c.graph.clone(), lists: c.lists.clone(), seed };
    let (h, lists) = spec.generate(cap).map_err(|source| ExperimentError::Gen { cell, source })?;
    match campaign.probe {
        Probe::Lemma41 { j } => {
            let solve_err = |source| ExperimentError::Solve { cell, source };
            if j >= h.k() {
                return Err(solve_err(SolveError::BadPart { j, k: h.k() }));
            }
            if h.part_sizes()[j] == 0 {
                return Err(ExperimentError::EmptyPart { cell, j });
            }
            let v = VertexId::new(j, 0);
            let mut rng = stream(counter_u64(seed, 1));
            let phi = random_partial_coloring(&h, &lists, j, &mut rng).map_err(solve_err)?;
            let hit = residual_at(&h, &lists, phi.as_map(), v).is_empty();
            let mut pv = measure_list_instance(&h, &lists, j);
            pv.q[j] = lists.list(v).len() as f64;
            let s = crate::lists::sum_color_degrees(&h, &lists, v)
                .map_err(|e| solve_err(SolveError::List(e)))?;
            let bound = lemma_41_bound(&pv, s as f64)
                .map_err(|source| ExperimentError::Condition { cell, source })?;
            Ok(Trial { hit, bound: Some(bound), resamples: None })
        }
        Probe::Solver { j, max_resamples } => {
            let config = SolverConfig { j, max_resamples, seed: counter_u64(seed, 1), ..SolverConfig::default() };
            let out = moser_tardos_solve(&h, &lists, &config)
                .map_err(|source| ExperimentError::Solve { cell, source })?;
            Ok(Trial { hit: out.is_success(), bound: None, resamples: Some(out.resample_count) })
        }
    }
}

fn probe_name(p: &Probe) -> &'static str {
    match p {
        Probe::Lemma41 { .. } => "lemma41",
        Probe::Solver { .. } => "solver",
    }
}

/// Runs every trial of every cell on the rayon pool.
pub fn run_campaign(campaign: &Campaign) -> Result<Vec<CellResult>, ExperimentError> {
    run_campaign_capped(campaign, DEFAULT_INSTANCE_CAP)
}

pub fn run_campaign_capped(campaign: &Campaign, cap: u64) -> Result<Vec<CellResult>, ExperimentError> {
    run_cells(campaign, cap, (0..campaign.cells.len()).collect())
}

/// Runs the given cells, in any order, and returns rows sorted by cell.
pub fn run_cells(campaign: &Campaign, cap: u64, order: Vec<usize>) -> Result<Vec<CellResult>, ExperimentError> {
    if campaign.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let n = campaign.trials;
    let mut rows: Vec<CellResult> = order
        .into_par_iter()
        .map(|cell| {
            let trials = (0..n)
                .into_par_iter()
                .map(|t| run_trial(campaign, cell, t, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let hits = trials.iter().filter(|t| t.hit).count();
            let estimate = hits as f64 / n as f64;
            let stderr = (estimate * (1.0 - estimate) / n as f64).sqrt();
            let bounds: Vec<f64> = trials.iter().filter_map(|t| t.bound).collect();
            let bound = (!bounds.is_empty()).then(|| bounds.iter().sum::<f64>() / bounds.len() as f64);
            let resamples: Vec<u64> = trials.iter().filter_map(|t| t.resamples).collect();
            let mean_resamples = (!resamples.is_empty())
                .then(|| resamples.iter().sum::<u64>() as f64 / resamples.len() as f64);
            let c = &campaign.cells[cell];
            Ok(CellResult {
                campaign: campaign.name.clone(),
                cell,
                graph: serde_json::to_string(&c.graph).expect("models serialize"),
                lists: serde_json::to_string(&c.lists).expect("models serialize"),
                probe: probe_name(&campaign.probe).to_string(),
                trials: n,
                estimate,
                bound,
                stderr,
                verdict: bound.map(|b| estimate <= b + 3.0 * stderr),
                mean_resamples,
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    rows.sort_by_key(|r| r.cell);
    Ok(rows)
}

/// `%.{digits}g`-style rendering.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: [&str; 11] = [
    "campaign", "cell", "graph", "lists", "probe", "trials", "estimate", "bound", "stderr", "verdict",
    "mean_resamples",
];

/// The fixed CSV schema, floats with 12 significant digits.
pub fn to_csv(rows: &[CellResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    let f = |x: f64| format_sig(x, 12);
    let opt = |x: Option<f64>| x.map(f).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.campaign.clone(),
            r.cell.to_string(),
            r.graph.clone(),
            r.lists.clone(),
            r.probe.clone(),
            r.trials.to_string(),
            f(r.estimate),
            opt(r.bound),
            f(r.stderr),
            r.verdict.map(|v| if v { "pass" } else { "fail" }.to_string()).unwrap_or_default(),
            opt(r.mean_resamples),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lemma_campaign(trials: usize) -> Campaign {
        Campaign {
            name: "lemma41".into(),
            cells: vec![Cell { graph: GraphModel::Complete { k: 3, n: 2 }, lists: ListModel::UniformQ { q: 3 } }],
            probe: Probe::Lemma41 { j: 2 },
            trials,
            seed_base: 5,
        }
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(123456.0, 12), "123456");
        assert_eq!(format_sig(1e-7, 12), "1e-07");
        assert_eq!(format_sig(2.5e15, 12), "2.5e+15");
        assert_eq!(format_sig(-0.000123, 12), "-0.000123");
    }

    #[test]
    fn edgeless_single_trial() {
        let c = Campaign {
            name: "edgeless".into(),
            cells: vec![Cell { graph: GraphModel::RandomKpp { k: 2, n: 3, p: 0.0 }, lists: ListModel::UniformQ { q: 2 } }],
            probe: Probe::Lemma41 { j: 1 },
            trials: 1,
            seed_base: 0,
        };
        let rows = run_campaign(&c).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].estimate, 0.0);
    }

    #[test]
    fn lemma41_estimate_within_bound() {
        let rows = run_campaign(&lemma_campaign(10_000)).unwrap();
        assert_eq!(rows[0].verdict, Some(true), "{:?}", rows[0]);
    }

    #[test]
    fn csv_is_reproducible() {
        let c = lemma_campaign(200);
        let a = to_csv(&run_campaign(&c).unwrap());
        let b = to_csv(&run_campaign(&c).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("campaign,cell,graph,lists,probe"));
    }

    #[test]
    fn cell_order_does_not_matter() {
        let mut c = lemma_campaign(50);
        c.cells.push(Cell { graph: GraphModel::RandomKpp { k: 3, n: 3, p: 0.5 }, lists: ListModel::UniformQ { q: 2 } });
        c.cells.push(Cell { graph: GraphModel::Gadget { k: 3, petals: 5 }, lists: ListModel::UniformQ { q: 2 } });
        let forward = run_cells(&c, DEFAULT_INSTANCE_CAP, vec![0, 1, 2]).unwrap();
        let backward = run_cells(&c, DEFAULT_INSTANCE_CAP, vec![2, 1, 0]).unwrap();
        assert_eq!(to_csv(&forward), to_csv(&backward));
    }

    #[test]
    fn zero_trials_rejected() {
        assert_eq!(run_campaign(&lemma_campaign(0)), Err(ExperimentError::NoTrials));
    }
}
