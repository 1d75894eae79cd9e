//! Monte Carlo estimation of property probabilities, threshold sweeps and
//! trajectory concentration runs.
//!
//! Trials are independent and parallelised with rayon; results are reduced in
//! trial order, so every output depends only on its inputs and never on the
//! schedule.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::foremost::{
    foremost_tree_complete, truncate_trajectory, truncation_caps, trajectory_deviation, Trajectory,
};
use crate::gen::{
    derive_seed, sample_fnp, sample_poisson, CompleteLabels, RngStream, DEFAULT_COMPLETE_CAP,
};
use crate::gossip::{any_milestones, co_milestones, default_call_cap, GossipMilestones};
use crate::graph::{
    has_temporal_source, is_temporal_source, is_temporally_connected, restrict,
    two_hop_source_check, earliest_arrival_sweep, TemporalGraph,
};
use crate::spanner::{build_optimal_spanner, SpannerCertificate};

/// Property evaluated on each sampled graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyId {
    /// Vertex 0 reaches vertex 1.
    P2p,
    /// Some vertex is a temporal source.
    FirstSource,
    /// Vertex 0 is a temporal source.
    Source,
    Connectivity,
    /// The pivot-square spanner construction succeeds.
    OptimalSpanner,
    /// Vertex 0 reaches everyone along temporal paths of at most two edges.
    TwoHopSource,
}

impl PropertyId {
    pub const ALL: [PropertyId; 6] = [
        PropertyId::P2p,
        PropertyId::FirstSource,
        PropertyId::Source,
        PropertyId::Connectivity,
        PropertyId::OptimalSpanner,
        PropertyId::TwoHopSource,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::P2p => "p2p",
            PropertyId::FirstSource => "first_source",
            PropertyId::Source => "source",
            PropertyId::Connectivity => "connectivity",
            PropertyId::OptimalSpanner => "optimal_spanner",
            PropertyId::TwoHopSource => "two_hop_source",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str() == norm)
            .ok_or_else(|| Error::contract(format!("unknown property {s:?}")))
    }
}

/// Random temporal graph model used for sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// F(n,p): one uniform label on `[0, p]` per present edge.
    Fnp,
    /// H(n,p): rate-1 Poisson labels on `[0, p]` for every pair.
    Poisson,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Fnp => "fnp",
            Model::Poisson => "poisson",
        }
    }

    pub fn sample(self, n: usize, p: f64, stream: RngStream) -> Result<TemporalGraph> {
        let mut rng = stream.rng();
        match self {
            Model::Fnp => sample_fnp(n, p, &mut rng),
            Model::Poisson => sample_poisson(n, p, &mut rng),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fnp" => Ok(Model::Fnp),
            "poisson" => Ok(Model::Poisson),
            _ => Err(Error::contract(format!("unknown model {s:?}"))),
        }
    }
}

/// `p n / ln n`, the density in units of `ln n / n`.
pub fn density_factor(n: usize, p: f64) -> f64 {
    let nf = n as f64;
    if n < 2 {
        0.0
    } else {
        p * nf / nf.ln()
    }
}

/// One estimated probability.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ExperimentRow {
    pub property: PropertyId,
    pub model: Model,
    pub n: usize,
    pub p: f64,
    pub factor: f64,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    /// Master seed of the trial streams `(seed, 0..trials)`.
    pub seed: u64,
    #[serde(skip)]
    pub wall_time_ms: u128,
}

impl ExperimentRow {
    pub const CSV_HEADER: &'static str = "property,model,n,p,factor,trials,successes,estimate,seed";

    /// Data line matching [`CSV_HEADER`](Self::CSV_HEADER); wall time is left out.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.property,
            self.model,
            self.n,
            self.p,
            self.factor,
            self.trials,
            self.successes,
            self.estimate,
            self.seed
        )
    }

    /// Wald interval `estimate ± z sqrt(estimate (1 - estimate) / trials)`, clamped to `[0, 1]`.
    pub fn wald_interval(&self, z: f64) -> (f64, f64) {
        let e = self.estimate;
        let half = z * (e * (1.0 - e) / self.trials as f64).sqrt();
        ((e - half).max(0.0), (e + half).min(1.0))
    }
}

/// Densities `p = c ln n / n` for strictly increasing multipliers `c`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SweepGrid {
    n: usize,
    factors: Vec<f64>,
    ps: Vec<f64>,
}

impl SweepGrid {
    pub fn from_factors(n: usize, factors: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::contract(format!("sweeps need n >= 2, got {n}")));
        }
        let nf = n as f64;
        let ps: Vec<f64> = factors.iter().map(|c| c * nf.ln() / nf).collect();
        Self::checked(n, factors.to_vec(), ps)
    }

    /// Grid given by absolute densities; factors are derived.
    pub fn from_p_values(n: usize, ps: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::contract(format!("sweeps need n >= 2, got {n}")));
        }
        let factors = ps.iter().map(|&p| density_factor(n, p)).collect();
        Self::checked(n, factors, ps.to_vec())
    }

    fn checked(n: usize, factors: Vec<f64>, ps: Vec<f64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::contract("empty sweep grid"));
        }
        if let Some(w) = factors.windows(2).find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::contract(format!(
                "grid not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(&p) = ps.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::contract(format!("grid density {p} outside [0, 1] at n = {n}")));
        }
        Ok(SweepGrid { n, factors, ps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    pub fn p_values(&self) -> &[f64] {
        &self.ps
    }

    pub fn len(&self) -> usize {
        self.ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ps.is_empty()
    }
}

/// Evaluates `property` on `g`, sampled at density `p`.
pub fn evaluate_property(property: PropertyId, g: &TemporalGraph, p: f64) -> Result<bool> {
    let need = |k: usize| {
        if g.n() < k {
            Err(Error::contract(format!(
                "{property} needs at least {k} vertices, got {}",
                g.n()
            )))
        } else {
            Ok(())
        }
    };
    Ok(match property {
        PropertyId::P2p => {
            need(2)?;
            earliest_arrival_sweep(g, 0).arrival[1].is_some()
        }
        PropertyId::Source => {
            need(1)?;
            is_temporal_source(g, 0)
        }
        PropertyId::TwoHopSource => {
            need(1)?;
            two_hop_source_check(g, 0)
        }
        PropertyId::FirstSource => has_temporal_source(g),
        PropertyId::Connectivity => is_temporally_connected(g),
        PropertyId::OptimalSpanner => match build_optimal_spanner(g, p) {
            Ok(cert) => cert.verified,
            Err(Error::NoGoodSquare { .. }) => false,
            Err(e) => return Err(e),
        },
    })
}

/// Successes over trials `range`, each trial `t` sampled from stream `(seed, t)`.
///
/// Counts over disjoint ranges add up to the count over their union.
pub fn count_successes(
    property: PropertyId,
    model: Model,
    n: usize,
    p: f64,
    seed: u64,
    range: std::ops::Range<u64>,
) -> Result<u64> {
    let hits: Vec<bool> = range
        .into_par_iter()
        .map(|t| {
            let g = model.sample(n, p, RngStream::new(seed, t))?;
            evaluate_property(property, &g, p)
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().filter(|&h| h).count() as u64)
}

pub fn estimate_probability(
    property: PropertyId,
    model: Model,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<ExperimentRow> {
    if trials == 0 {
        return Err(Error::contract("trials must be at least 1"));
    }
    let started = Instant::now();
    let successes = count_successes(property, model, n, p, seed, 0..trials)?;
    Ok(row(property, model, n, p, trials, successes, seed, started))
}

#[allow(clippy::too_many_arguments)]
fn row(
    property: PropertyId,
    model: Model,
    n: usize,
    p: f64,
    trials: u64,
    successes: u64,
    seed: u64,
    started: Instant,
) -> ExperimentRow {
    ExperimentRow {
        property,
        model,
        n,
        p,
        factor: density_factor(n, p),
        trials,
        successes,
        estimate: successes as f64 / trials as f64,
        seed,
        wall_time_ms: started.elapsed().as_millis(),
    }
}

/// How samples are shared across grid points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SweepMode {
    /// Every (grid point, trial) gets its own sample. Row `i` uses master seed
    /// `derive_seed(seed, i)`, so it equals
    /// `estimate_probability(.., row.seed)` on its own.
    #[default]
    Fresh,
    /// Trial `t` draws one graph at the largest density from stream
    /// `(seed, t)` and restricts it to every grid point, so increasing
    /// properties are monotone along each trial.
    Coupled,
}

pub fn threshold_sweep(
    property: PropertyId,
    model: Model,
    grid: &SweepGrid,
    trials: u64,
    seed: u64,
    mode: SweepMode,
) -> Result<Vec<ExperimentRow>> {
    if trials == 0 {
        return Err(Error::contract("trials must be at least 1"));
    }
    let n = grid.n();
    match mode {
        SweepMode::Fresh => grid
            .p_values()
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                estimate_probability(property, model, n, p, trials, derive_seed(seed, i as u64))
            })
            .collect(),
        SweepMode::Coupled => {
            let started = Instant::now();
            let outcomes = coupled_outcomes(property, model, grid, trials, seed)?;
            Ok(grid
                .p_values()
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let successes = outcomes.iter().filter(|o| o[i]).count() as u64;
                    row(property, model, n, p, trials, successes, seed, started)
                })
                .collect())
        }
    }
}

/// Per trial, the property value at every grid point of one coupled sample.
pub fn coupled_outcomes(
    property: PropertyId,
    model: Model,
    grid: &SweepGrid,
    trials: u64,
    seed: u64,
) -> Result<Vec<Vec<bool>>> {
    let ps = grid.p_values();
    let top = *ps.last().expect("grid is non-empty");
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = model.sample(grid.n(), top, RngStream::new(seed, t))?;
            ps.iter()
                .map(|&p| evaluate_property(property, &restrict(&g, 0.0, p)?, p))
                .collect()
        })
        .collect()
}

/// Where a sweep's estimate first reaches one half.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Crossing {
    /// Smallest grid factor with estimate `≥ 0.5`.
    pub factor: f64,
    /// Linear interpolation between the bracketing grid points; equals
    /// `factor` when the first grid point already qualifies.
    pub interpolated: f64,
}

pub fn crossing_point(rows: &[ExperimentRow]) -> Option<Crossing> {
    let i = rows.iter().position(|r| r.estimate >= 0.5)?;
    let hi = &rows[i];
    let interpolated = match i.checked_sub(1).map(|j| &rows[j]) {
        Some(lo) if hi.estimate > lo.estimate => {
            lo.factor + (0.5 - lo.estimate) / (hi.estimate - lo.estimate) * (hi.factor - lo.factor)
        }
        _ => hi.factor,
    };
    Some(Crossing {
        factor: hi.factor,
        interpolated,
    })
}

/// One foremost-tree growth run on F(n,1) from vertex 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTrial {
    pub trial: u64,
    /// `None` when vertex 0 was not a temporal source.
    pub trajectory: Option<Trajectory>,
    pub deviation: f64,
    /// `|Ŷ_{n-1} - 2 ln n / n|`.
    pub last_error: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySummary {
    pub n: usize,
    pub seed: u64,
    pub trials: Vec<TrajectoryTrial>,
}

impl TrajectorySummary {
    fn completed(&self) -> impl Iterator<Item = &TrajectoryTrial> {
        self.trials.iter().filter(|t| t.trajectory.is_some())
    }

    /// Trials in which vertex 0 was not a source.
    pub fn failed(&self) -> usize {
        self.trials.len() - self.completed().count()
    }

    pub fn median_deviation(&self) -> Option<f64> {
        let mut d: Vec<f64> = self.completed().map(|t| t.deviation).collect();
        if d.is_empty() {
            return None;
        }
        d.sort_by(f64::total_cmp);
        let m = d.len() / 2;
        Some(if d.len() % 2 == 1 { d[m] } else { (d[m - 1] + d[m]) / 2.0 })
    }

    /// Fraction of completed trials in which no waiting time was truncated.
    pub fn equality_rate(&self) -> f64 {
        let done = self.completed().count();
        if done == 0 {
            return 0.0;
        }
        self.completed().filter(|t| t.exact).count() as f64 / done as f64
    }

    /// Fraction of all trials with `last_error ≤ tol` (failed trials count as misses).
    pub fn last_error_rate(&self, tol: f64) -> f64 {
        if self.trials.is_empty() {
            return 0.0;
        }
        self.completed().filter(|t| t.last_error <= tol).count() as f64 / self.trials.len() as f64
    }

    /// Whether `Ŷ_k ≤ Y_k` held at every `k` in every completed trial.
    pub fn truncation_below(&self) -> bool {
        self.completed().all(|t| {
            let tr = t.trajectory.as_ref().expect("completed");
            tr.y_hat().is_some_and(|yh| yh.iter().zip(&tr.y).all(|(a, b)| a <= b))
        })
    }

    /// Whether `Y` was non-decreasing in every completed trial.
    pub fn monotone(&self) -> bool {
        self.completed().all(|t| {
            let tr = t.trajectory.as_ref().expect("completed");
            tr.y.windows(2).all(|w| w[0] <= w[1])
        })
    }
}

/// Samples F(n,1) per trial from stream `(seed, t)`, grows the foremost tree
/// from vertex 0, truncates its trajectory and measures it.
pub fn trajectory_experiment(n: usize, trials: u64, seed: u64) -> Result<TrajectorySummary> {
    if n > DEFAULT_COMPLETE_CAP {
        return Err(Error::Resource(format!(
            "n = {n} exceeds the complete-graph cap of {DEFAULT_COMPLETE_CAP}"
        )));
    }
    let caps = truncation_caps(n)?;
    let nf = n as f64;
    let target = 2.0 * nf.ln() / nf;
    let trials = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t).rng();
            let labels = CompleteLabels::sample(n, DEFAULT_COMPLETE_CAP, &mut rng)?;
            let tree = match foremost_tree_complete(&labels, 0) {
                Ok(tree) => tree,
                Err(Error::NotReachable { .. }) => {
                    return Ok(TrajectoryTrial {
                        trial: t,
                        trajectory: None,
                        deviation: f64::INFINITY,
                        last_error: f64::INFINITY,
                        exact: false,
                    })
                }
                Err(e) => return Err(e),
            };
            let tr = truncate_trajectory(&Trajectory::from_tree(&tree), &caps)?;
            let deviation = trajectory_deviation(&tr)?;
            let trunc = tr.truncation.as_ref().expect("just truncated");
            Ok(TrajectoryTrial {
                trial: t,
                deviation,
                last_error: (trunc.y_hat[n - 1] - target).abs(),
                exact: trunc.exact,
                trajectory: Some(tr),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectorySummary { n, seed, trials })
}

/// Caps the worker threads used by every parallel experiment. Only the first
/// call in a process takes effect.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(Error::contract("thread count must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Resource(e.to_string()))
}

/// Call scheduler for gossip runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GossipModel {
    /// Every pair calls exactly once, in uniformly random order.
    Co,
    /// Every call is a uniformly random pair, repeats allowed.
    Any,
}

impl GossipModel {
    pub fn as_str(self) -> &'static str {
        match self {
            GossipModel::Co => "co",
            GossipModel::Any => "any",
        }
    }
}

impl FromStr for GossipModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "co" => Ok(GossipModel::Co),
            "any" => Ok(GossipModel::Any),
            _ => Err(Error::contract(format!("unknown gossip model {s:?}"))),
        }
    }
}

/// Milestones of `trials` runs, run `t` driven by stream `(seed, t)`.
/// `call_cap` only applies to [`GossipModel::Any`] and defaults to
/// [`default_call_cap`].
pub fn gossip_experiment(
    model: GossipModel,
    n: usize,
    trials: u64,
    seed: u64,
    call_cap: Option<u64>,
) -> Result<Vec<GossipMilestones>> {
    let cap = call_cap.unwrap_or_else(|| default_call_cap(n));
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t).rng();
            match model {
                GossipModel::Co => co_milestones(n, &mut rng),
                GossipModel::Any => any_milestones(n, &mut rng, cap),
            }
        })
        .collect()
}

/// Outcome of one spanner construction attempt.
#[derive(Clone, Debug, PartialEq)]
pub struct SpannerTrial {
    pub trial: u64,
    pub certificate: Option<SpannerCertificate>,
    /// Goodness tests made; equals the certificate's count on success.
    pub candidates: usize,
    pub cap_hit: bool,
}

/// Builds the square spanner on one F(n,p) sample per trial, trial `t`
/// sampled from stream `(seed, t)`.
pub fn spanner_experiment(n: usize, p: f64, trials: u64, seed: u64) -> Result<Vec<SpannerTrial>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = Model::Fnp.sample(n, p, RngStream::new(seed, t))?;
            spanner_trial(t, &g, p)
        })
        .collect()
}

/// Runs the construction on `g`, turning a failed search into an unsuccessful trial.
pub fn spanner_trial(trial: u64, g: &TemporalGraph, p: f64) -> Result<SpannerTrial> {
    match build_optimal_spanner(g, p) {
        Ok(cert) => Ok(SpannerTrial {
            trial,
            candidates: cert.candidates,
            cap_hit: false,
            certificate: Some(cert),
        }),
        Err(Error::NoGoodSquare { candidates, cap_hit }) => Ok(SpannerTrial {
            trial,
            certificate: None,
            candidates,
            cap_hit,
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{reverse_time, Window};

    #[test]
    fn trivial_properties() {
        let edge = TemporalGraph::new(2, Window::UNIT, [(0, 1, 0.5)]).unwrap();
        assert!(evaluate_property(PropertyId::Connectivity, &edge, 1.0).unwrap());
        // Decreasing path 0 - 2 - 1: the endpoints 0 and 1 cannot reach each other.
        let path = TemporalGraph::new(3, Window::UNIT, [(0, 2, 0.9), (2, 1, 0.1)]).unwrap();
        assert!(!evaluate_property(PropertyId::P2p, &path, 1.0).unwrap());
        assert!(evaluate_property(PropertyId::P2p, &reverse_time(&path), 1.0).unwrap());
    }

    #[test]
    fn degenerate_estimates() {
        for prop in [PropertyId::P2p, PropertyId::Source, PropertyId::Connectivity] {
            let r = estimate_probability(prop, Model::Fnp, 5, 0.0, 20, 3).unwrap();
            assert_eq!(r.estimate, 0.0, "{prop}");
        }
        let r = estimate_probability(PropertyId::Connectivity, Model::Fnp, 2, 1.0, 10, 3).unwrap();
        assert_eq!((r.successes, r.estimate), (10, 1.0));
    }

    #[test]
    fn names_round_trip() {
        for p in PropertyId::ALL {
            assert_eq!(p.as_str().parse::<PropertyId>().unwrap(), p);
        }
        assert_eq!("FIRST-SOURCE".parse::<PropertyId>().unwrap(), PropertyId::FirstSource);
        assert!("nope".parse::<PropertyId>().is_err());
        assert_eq!("Poisson".parse::<Model>().unwrap(), Model::Poisson);
    }

    #[test]
    fn grid_validation() {
        assert!(SweepGrid::from_factors(100, &[1.0, 1.0]).is_err());
        assert!(SweepGrid::from_factors(100, &[2.0, 1.0]).is_err());
        assert!(SweepGrid::from_factors(100, &[100.0]).is_err());
        assert!(SweepGrid::from_factors(100, &[]).is_err());
        let g = SweepGrid::from_p_values(100, &[0.1, 0.2]).unwrap();
        assert!((g.factors()[0] - 0.1 * 100.0 / 100f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn crossing_interpolates() {
        let mk = |factor, estimate| ExperimentRow {
            property: PropertyId::P2p,
            model: Model::Fnp,
            n: 10,
            p: 0.0,
            factor,
            trials: 10,
            successes: 0,
            estimate,
            seed: 0,
            wall_time_ms: 0,
        };
        let c = crossing_point(&[mk(1.0, 0.1), mk(2.0, 0.3), mk(3.0, 0.7)]).unwrap();
        assert_eq!(c.factor, 3.0);
        assert!((c.interpolated - 2.5).abs() < 1e-12);
        assert_eq!(crossing_point(&[mk(1.0, 0.6)]).unwrap().interpolated, 1.0);
        assert!(crossing_point(&[mk(1.0, 0.2)]).is_none());
    }

    #[test]
    fn csv_line_matches_header_arity() {
        let r = estimate_probability(PropertyId::Source, Model::Poisson, 6, 0.5, 4, 1).unwrap();
        let cols = ExperimentRow::CSV_HEADER.split(',').count();
        assert_eq!(r.csv_line().split(',').count(), cols);
        let (lo, hi) = r.wald_interval(1.96);
        assert!(0.0 <= lo && lo <= r.estimate && r.estimate <= hi && hi <= 1.0);
    }

    #[test]
    fn gossip_runs_are_reproducible() {
        let a = gossip_experiment(GossipModel::Any, 30, 4, 5, None).unwrap();
        assert_eq!(a, gossip_experiment(GossipModel::Any, 30, 4, 5, None).unwrap());
        let co = gossip_experiment(GossipModel::Co, 2, 3, 1, None).unwrap();
        assert!(co.iter().all(|m| m.all_experts == Some(1)));
        assert_eq!("ANY".parse::<GossipModel>().unwrap(), GossipModel::Any);
    }

    #[test]
    fn spanner_runs_report_each_trial() {
        let n = 60;
        let p = 6.0 * (n as f64).ln() / n as f64;
        let runs = spanner_experiment(n, p, 3, 2).unwrap();
        assert_eq!(runs.iter().map(|r| r.trial).collect::<Vec<_>>(), vec![0, 1, 2]);
        for r in runs.iter().filter_map(|r| r.certificate.as_ref()) {
            assert_eq!(r.size(), 2 * n - 4);
            assert!(r.verified);
        }
    }

    #[test]
    fn small_trajectory_run() {
        let s = trajectory_experiment(40, 6, 9).unwrap();
        assert_eq!(s.trials.len(), 6);
        assert!(s.monotone() && s.truncation_below());
        for t in s.trials.iter().filter(|t| t.trajectory.is_some()) {
            assert!(t.deviation >= 0.0);
        }
    }
}
