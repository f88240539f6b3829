//! The Douglas-Rachford and alternating-projection iterations, with explicit
//! selection policies for set-valued steps, trajectory recording, and
//! convergence / cycle diagnostics.
//!
//! One DR step at `x` picks a shadow `a` in `P_A(x)` and a reflected shadow
//! `b` in `P_B(2a - x)`, and moves to `x + b - a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::SplitMix64;
use crate::union::{default_tau_act, project_union, UnionSet};

/// How to pick one branch when the step operator is set-valued.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionPolicy {
    /// Lexicographically smallest (piece pair, candidate indices). Default.
    #[default]
    LowestIndex,
    /// Strict argmin of the exact distances, index order on exact ties.
    NearestThenLowestIndex,
    /// Uniform over the available branches, seeded; equal seeds reproduce
    /// identical trajectories bit for bit.
    SeededRandom(u64),
}

/// Stopping rules for a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoppingConfig {
    pub max_iter: usize,
    /// Declare convergence once the step norm stays below this...
    pub tol_step: f64,
    /// ...for this many consecutive steps.
    pub confirm_window: usize,
    /// Largest cycle period looked for (0 disables cycle detection).
    pub cycle_max_period: usize,
    pub cycle_tol: f64,
    /// Steps count as vanishing once the largest tail step has decayed below
    /// this fraction of the largest early step.
    pub vanish_ratio: f64,
}

impl Default for StoppingConfig {
    fn default() -> Self {
        StoppingConfig {
            max_iter: 100_000,
            tol_step: 1e-12,
            confirm_window: 10,
            cycle_max_period: 64,
            cycle_tol: 1e-10,
            vanish_ratio: 0.1,
        }
    }
}

impl StoppingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
        }
        if !(self.tol_step > 0.0) {
            return Err(Error::InvalidConfig("tol_step must be > 0".into()));
        }
        if self.confirm_window < 1 {
            return Err(Error::InvalidConfig("confirm_window must be >= 1".into()));
        }
        if !(self.cycle_tol > 0.0) || !(self.vanish_ratio > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be > 0".into()));
        }
        Ok(())
    }
}

/// One recorded step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    pub x: Point,
    /// Shadow `a` (nearest point of the chosen `A` piece).
    pub a: Point,
    /// Reflected shadow `b` (nearest point of the chosen `B` piece).
    pub b: Point,
    pub x_next: Point,
    /// Chosen active pair (index into `A`, index into `B`).
    pub pair: (usize, usize),
    pub step_norm: f64,
    /// `dist(x, A)` for a DR step; for MAP, distance of the incoming iterate
    /// to the first set.
    pub dist_a: f64,
    /// Distance of the point actually projected onto `B` (the reflected
    /// point `2a - x` for DR, the shadow `a` for MAP).
    pub dist_b: f64,
}

impl StepRecord {
    pub fn feasibility_gap(&self) -> f64 {
        self.a.dist(&self.b)
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Converged,
    MaxIter,
    CycleDetected { period: usize },
}

/// Post-run diagnostics over the tail of a trajectory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Diagnostics {
    pub converged: bool,
    pub limit: Option<Point>,
    pub cycle_period: Option<usize>,
    /// The largest tail step has decayed below `vanish_ratio` times the
    /// largest early step: the iteration is slowing toward stationarity even
    /// if it never meets the convergence tolerance.
    pub steps_vanish: bool,
    /// Max pairwise distance over tail iterates (on an even subsample of at
    /// most 2048 points when the tail is longer).
    pub tail_diameter: f64,
    /// Min over the tail of the shadow gap `||a_n - b_n||`.
    pub feasibility_gap: f64,
}

/// A recorded run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    pub stop_reason: StopReason,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_point(&self) -> &Point {
        self.records
            .last()
            .map(|r| &r.x_next)
            .expect("trajectory has at least one record")
    }

    /// Iterate sequence `x_0, x_1, ..., x_n` (inputs plus the final output).
    pub fn iterates(&self) -> Vec<&Point> {
        let mut pts: Vec<&Point> = self.records.iter().map(|r| &r.x).collect();
        if let Some(last) = self.records.last() {
            pts.push(&last.x_next);
        }
        pts
    }
}

/// One realizable branch of the set-valued DR operator at `x`.
#[derive(Clone, Debug)]
pub struct Branch {
    pub pair: (usize, usize),
    pub a: Point,
    pub b: Point,
    pub x_next: Point,
}

/// Enumerate every realizable branch of `T` at `x`: all active pairs and all
/// nearest-point combinations, in canonical order.
pub fn dr_branches(a_set: &UnionSet, b_set: &UnionSet, x: &Point) -> Result<Vec<Branch>> {
    if a_set.dim() != b_set.dim() {
        return Err(Error::DimensionMismatch { expected: a_set.dim(), got: b_set.dim() });
    }
    let da = a_set.distance(x)?;
    let a_proj = project_union(a_set, x, default_tau_act(da))?;
    let mut branches = Vec::new();
    for hit in &a_proj.hits {
        for a_cand in &hit.projection.nearest {
            let reflected = a_cand.reflect_through(x);
            let db = b_set.distance(&reflected)?;
            let b_proj = project_union(b_set, &reflected, default_tau_act(db))?;
            for bh in &b_proj.hits {
                for b_cand in &bh.projection.nearest {
                    let x_next = x.add(&b_cand.sub(a_cand));
                    branches.push(Branch {
                        pair: (hit.piece, bh.piece),
                        a: a_cand.clone(),
                        b: b_cand.clone(),
                        x_next,
                    });
                }
            }
        }
    }
    debug_assert!(!branches.is_empty());
    Ok(branches)
}

/// The full image `T(x)`, deduplicated.
pub fn enumerate_t(a_set: &UnionSet, b_set: &UnionSet, x: &Point) -> Result<Vec<Point>> {
    let branches = dr_branches(a_set, b_set, x)?;
    let mut image: Vec<Point> = Vec::new();
    for br in branches {
        if !image.iter().any(|p| p.dist(&br.x_next) <= 1e-12) {
            image.push(br.x_next);
        }
    }
    Ok(image)
}

/// The single-pair DR operator `T_ij` (both pieces fixed). Well-defined for
/// convex pieces; for set-valued projections the canonical candidates are
/// used.
pub fn pair_operator(
    a_set: &UnionSet,
    b_set: &UnionSet,
    pair: (usize, usize),
    x: &Point,
) -> Result<Point> {
    let a = crate::pieces::project_piece(&a_set.pieces()[pair.0], x)?;
    let a = &a.nearest[0];
    let reflected = a.reflect_through(x);
    let b = crate::pieces::project_piece(&b_set.pieces()[pair.1], &reflected)?;
    let b = &b.nearest[0];
    Ok(x.add(&b.sub(a)))
}

fn select_branch<'b>(
    branches: &'b [Branch],
    policy: &SelectionPolicy,
    x: &Point,
    step_index: usize,
) -> &'b Branch {
    match policy {
        SelectionPolicy::LowestIndex => &branches[0],
        SelectionPolicy::NearestThenLowestIndex => {
            let key = |br: &Branch| (br.a.dist(x), br.b.dist(&br.a.reflect_through(x)));
            branches
                .iter()
                .min_by(|p, q| key(p).partial_cmp(&key(q)).unwrap())
                .unwrap()
        }
        SelectionPolicy::SeededRandom(seed) => {
            let mut rng = SplitMix64::derive(*seed, step_index as u64);
            &branches[rng.usize_below(branches.len())]
        }
    }
}

/// One DR step at `x` under the given policy.
pub fn dr_step(
    a_set: &UnionSet,
    b_set: &UnionSet,
    x: &Point,
    policy: &SelectionPolicy,
) -> Result<StepRecord> {
    dr_step_at(a_set, b_set, x, policy, 0)
}

fn dr_step_at(
    a_set: &UnionSet,
    b_set: &UnionSet,
    x: &Point,
    policy: &SelectionPolicy,
    n: usize,
) -> Result<StepRecord> {
    let branches = dr_branches(a_set, b_set, x)?;
    let chosen = select_branch(&branches, policy, x, n);
    let step_norm = chosen.x_next.dist(x);
    Ok(StepRecord {
        n,
        x: x.clone(),
        a: chosen.a.clone(),
        b: chosen.b.clone(),
        x_next: chosen.x_next.clone(),
        pair: chosen.pair,
        step_norm,
        dist_a: chosen.a.dist(x),
        dist_b: chosen.b.dist(&chosen.a.reflect_through(x)),
    })
}

/// Run the DR iteration from `x0`.
pub fn dr_run(
    a_set: &UnionSet,
    b_set: &UnionSet,
    x0: &Point,
    config: &StoppingConfig,
    policy: &SelectionPolicy,
) -> Result<Trajectory> {
    run_loop(config, x0.clone(), |x, n| dr_step_at(a_set, b_set, x, policy, n))
}

/// Run the alternating-projections iteration from `x0` (treated as the
/// initial point in `B`): project onto `A`, then onto `B`, and repeat. The
/// record's `a` is the `A`-projection of the incoming iterate and `b` the
/// `B`-projection of `a`; the new iterate is `b`.
pub fn map_run(
    a_set: &UnionSet,
    b_set: &UnionSet,
    x0: &Point,
    config: &StoppingConfig,
    policy: &SelectionPolicy,
) -> Result<Trajectory> {
    run_loop(config, x0.clone(), |x, n| map_step_at(a_set, b_set, x, policy, n))
}

fn map_step_at(
    a_set: &UnionSet,
    b_set: &UnionSet,
    x: &Point,
    policy: &SelectionPolicy,
    n: usize,
) -> Result<StepRecord> {
    let da = a_set.distance(x)?;
    let a_proj = project_union(a_set, x, default_tau_act(da))?;
    let a_flat = a_proj.flat();
    let (ai, a) = pick_flat(&a_flat, policy, n, 0);
    let db = b_set.distance(a)?;
    let b_proj = project_union(b_set, a, default_tau_act(db))?;
    let b_flat = b_proj.flat();
    let (bi, b) = pick_flat(&b_flat, policy, n, 1);
    Ok(StepRecord {
        n,
        x: x.clone(),
        a: a.clone(),
        b: b.clone(),
        x_next: b.clone(),
        pair: (ai, bi),
        step_norm: b.dist(x),
        dist_a: da,
        dist_b: db,
    })
}

fn pick_flat<'p>(
    flat: &[(usize, &'p Point)],
    policy: &SelectionPolicy,
    n: usize,
    stage: u64,
) -> (usize, &'p Point) {
    match policy {
        SelectionPolicy::LowestIndex | SelectionPolicy::NearestThenLowestIndex => flat[0],
        SelectionPolicy::SeededRandom(seed) => {
            let mut rng = SplitMix64::derive(seed ^ (stage.wrapping_mul(0xA5A5_5A5A)), n as u64);
            flat[rng.usize_below(flat.len())]
        }
    }
}

fn run_loop(
    config: &StoppingConfig,
    x0: Point,
    mut step: impl FnMut(&Point, usize) -> Result<StepRecord>,
) -> Result<Trajectory> {
    config.validate()?;
    let mut records: Vec<StepRecord> = Vec::new();
    let mut x = x0;
    let mut consecutive_small = 0usize;
    let mut stop_reason = StopReason::MaxIter;

    for n in 0..config.max_iter {
        let rec = step(&x, n)?;
        x = rec.x_next.clone();
        let small = rec.step_norm < config.tol_step;
        records.push(rec);
        consecutive_small = if small { consecutive_small + 1 } else { 0 };
        if consecutive_small >= config.confirm_window {
            stop_reason = StopReason::Converged;
            break;
        }
        if let Some(period) = detect_cycle_online(&records, config) {
            stop_reason = StopReason::CycleDetected { period };
            break;
        }
    }

    let diagnostics = diagnose_records(&records, &stop_reason, config);
    Ok(Trajectory { records, stop_reason, diagnostics })
}

/// Quick online check: does the latest iterate close a verified cycle?
fn detect_cycle_online(records: &[StepRecord], config: &StoppingConfig) -> Option<usize> {
    let n = records.len();
    if config.cycle_max_period == 0 || n < 8 {
        return None;
    }
    let max_p = config.cycle_max_period.min(n / 4);
    (1..=max_p).find(|&p| {
        records[n - 1].x_next.dist(&records[n - 1 - p].x_next) <= config.cycle_tol
            && verify_cycle(records, p, config)
    })
}

/// A period `p` counts as a cycle when it repeats over four periods at the
/// tail and the orbit is genuinely non-degenerate (otherwise it is just
/// convergence seen at low resolution).
fn verify_cycle(records: &[StepRecord], p: usize, config: &StoppingConfig) -> bool {
    let n = records.len();
    if n < 4 * p {
        return false;
    }
    for k in 0..(3 * p) {
        let i = n - 1 - k;
        if records[i].x_next.dist(&records[i - p].x_next) > config.cycle_tol {
            return false;
        }
    }
    let mut diameter = 0.0f64;
    for k in 0..p {
        for l in (k + 1)..p {
            diameter =
                diameter.max(records[n - 1 - k].x_next.dist(&records[n - 1 - l].x_next));
        }
    }
    diameter > 1000.0 * config.cycle_tol
}

/// Diagnose a finished list of records.
pub fn diagnose(records: &[StepRecord], cycle_max_period: usize, cycle_tol: f64) -> Diagnostics {
    let config = StoppingConfig { cycle_max_period, cycle_tol, ..StoppingConfig::default() };
    let stop = StopReason::MaxIter;
    diagnose_records(records, &stop, &config)
}

const TAIL_SAMPLE_CAP: usize = 2048;

pub fn diagnose_records(
    records: &[StepRecord],
    stop_reason: &StopReason,
    config: &StoppingConfig,
) -> Diagnostics {
    if records.is_empty() {
        return Diagnostics {
            converged: false,
            limit: None,
            cycle_period: None,
            steps_vanish: false,
            tail_diameter: 0.0,
            feasibility_gap: f64::INFINITY,
        };
    }
    let converged = matches!(stop_reason, StopReason::Converged);
    let cycle_period = match stop_reason {
        StopReason::CycleDetected { period } => Some(*period),
        _ if !converged => {
            // Post-hoc scan over the tail.
            let max_p = config.cycle_max_period.min(records.len() / 4);
            (1..=max_p).find(|&p| {
                records[records.len() - 1]
                    .x_next
                    .dist(&records[records.len() - 1 - p].x_next)
                    <= config.cycle_tol
                    && verify_cycle(records, p, config)
            })
        }
        _ => None,
    };

    let tail_start = records.len() - (records.len() / 4).max(1);
    let tail = &records[tail_start..];
    let head = &records[..(records.len() / 4).max(1)];
    let head_max = head.iter().map(|r| r.step_norm).fold(0.0f64, f64::max);
    let tail_max = tail.iter().map(|r| r.step_norm).fold(0.0f64, f64::max);
    let steps_vanish = tail_max <= config.vanish_ratio * head_max + config.tol_step;
    let feasibility_gap = tail
        .iter()
        .map(StepRecord::feasibility_gap)
        .fold(f64::INFINITY, f64::min);

    let stride = (tail.len() / TAIL_SAMPLE_CAP).max(1);
    let sampled: Vec<&Point> = tail.iter().step_by(stride).map(|r| &r.x_next).collect();
    let mut tail_diameter = 0.0f64;
    for i in 0..sampled.len() {
        for j in (i + 1)..sampled.len() {
            tail_diameter = tail_diameter.max(sampled[i].dist(sampled[j]));
        }
    }

    Diagnostics {
        converged,
        limit: converged.then(|| records.last().unwrap().x_next.clone()),
        cycle_period,
        steps_vanish,
        tail_diameter,
        feasibility_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pieces::{ConvexPrimitive, Piece};
    use crate::point::pt;

    fn line(base: &[f64], dir: &[f64]) -> Piece {
        let d = pt(dir);
        let d = d.scale(1.0 / d.norm());
        Piece::Convex(ConvexPrimitive::AffineSubspace { base: pt(base), directions: vec![d] })
    }

    fn xaxis_set() -> UnionSet {
        UnionSet::single(line(&[0.0, 0.0], &[1.0, 0.0])).unwrap()
    }

    fn diagonal_set() -> UnionSet {
        UnionSet::single(line(&[0.0, 0.0], &[1.0, 1.0])).unwrap()
    }

    fn singletons(points: &[&[f64]]) -> UnionSet {
        UnionSet::new(
            points
                .iter()
                .map(|p| Piece::Convex(ConvexPrimitive::Singleton { point: pt(p) }))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn intersection_point_is_fixed() {
        let a = xaxis_set();
        let b = diagonal_set();
        let rec = dr_step(&a, &b, &pt(&[0.0, 0.0]), &SelectionPolicy::LowestIndex).unwrap();
        assert_eq!(rec.x_next, pt(&[0.0, 0.0]));
        assert_eq!(rec.step_norm, 0.0);
    }

    #[test]
    fn discrete_scene_single_step() {
        let a = xaxis_set();
        let b = singletons(&[&[0.0, 0.0], &[8.0, 1.0], &[7.0, -1.0]]);
        let rec = dr_step(&a, &b, &pt(&[7.0, 1.0]), &SelectionPolicy::LowestIndex).unwrap();
        assert_eq!(rec.a, pt(&[7.0, 0.0]));
        assert_eq!(rec.b, pt(&[7.0, -1.0]));
        assert_eq!(rec.x_next, pt(&[7.0, 0.0]));
    }

    #[test]
    fn one_dimensional_branch_choice() {
        let a = singletons(&[&[-1.0], &[1.0]]);
        let b = singletons(&[&[-2.0], &[1.0]]);
        let rec = dr_step(&a, &b, &pt(&[0.0]), &SelectionPolicy::LowestIndex).unwrap();
        assert_eq!(rec.a, pt(&[-1.0]));
        assert_eq!(rec.b, pt(&[-2.0]));
        assert_eq!(rec.x_next, pt(&[-1.0]));

        let image = enumerate_t(&a, &b, &pt(&[0.0])).unwrap();
        assert_eq!(image.len(), 2);
        assert!(image.iter().any(|p| p.dist(&pt(&[0.0])) < 1e-12));
        assert!(image.iter().any(|p| p.dist(&pt(&[-1.0])) < 1e-12));
    }

    #[test]
    fn enumerate_is_singleton_on_intersection() {
        let a = xaxis_set();
        let b = diagonal_set();
        let image = enumerate_t(&a, &b, &pt(&[0.0, 0.0])).unwrap();
        assert_eq!(image.len(), 1);
        assert_eq!(image[0], pt(&[0.0, 0.0]));
    }

    #[test]
    fn convex_run_converges_to_intersection() {
        let a = xaxis_set();
        let b = diagonal_set();
        let traj = dr_run(
            &a,
            &b,
            &pt(&[3.0, 1.0]),
            &StoppingConfig::default(),
            &SelectionPolicy::LowestIndex,
        )
        .unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged);
        assert!(traj.diagnostics.converged);
        // shadow limit reaches the intersection {0}
        let last = traj.records.last().unwrap();
        assert!(last.a.dist(&pt(&[0.0, 0.0])) < 1e-8);
        assert!(traj.diagnostics.cycle_period.is_none());
    }

    #[test]
    fn discrete_cycle_detected() {
        let eta = 1.0;
        let a = xaxis_set();
        let b = singletons(&[&[0.0, 0.0], &[7.0 + eta, eta], &[7.0, -eta]]);
        let traj = dr_run(
            &a,
            &b,
            &pt(&[7.0, eta]),
            &StoppingConfig { max_iter: 100, ..Default::default() },
            &SelectionPolicy::LowestIndex,
        )
        .unwrap();
        match traj.stop_reason {
            StopReason::CycleDetected { period } => assert_eq!(period, 4),
            other => panic!("expected a 4-cycle, got {other:?}"),
        }
        assert!((traj.diagnostics.feasibility_gap - eta).abs() < 1e-12);
        assert!(!traj.diagnostics.steps_vanish);
        // the orbit visits these four points
        let expected = [
            pt(&[7.0, 0.0]),
            pt(&[7.0, -eta]),
            pt(&[7.0 + eta, 0.0]),
            pt(&[7.0 + eta, eta]),
        ];
        let tail = &traj.records[traj.records.len() - 4..];
        for e in &expected {
            assert!(
                tail.iter().any(|r| r.x_next.dist(e) < 1e-12),
                "cycle misses {e}"
            );
        }
    }

    #[test]
    fn start_on_intersection_converges_immediately() {
        let a = xaxis_set();
        let b = diagonal_set();
        let traj = dr_run(
            &a,
            &b,
            &pt(&[0.0, 0.0]),
            &StoppingConfig::default(),
            &SelectionPolicy::LowestIndex,
        )
        .unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged);
        assert_eq!(traj.len(), StoppingConfig::default().confirm_window);
    }

    #[test]
    fn map_on_intersecting_convex_sets() {
        let a = xaxis_set();
        let b = diagonal_set();
        let traj = map_run(
            &a,
            &b,
            &pt(&[4.0, 2.0]),
            &StoppingConfig::default(),
            &SelectionPolicy::LowestIndex,
        )
        .unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged);
        let limit = traj.diagnostics.limit.clone().unwrap();
        assert!(limit.dist(&pt(&[0.0, 0.0])) < 1e-6);
    }

    #[test]
    fn step_identity_holds() {
        let a = xaxis_set();
        let b = singletons(&[&[0.0, 0.0], &[8.0, 1.0], &[7.0, -1.0]]);
        let mut rng = crate::rng::SplitMix64::new(23);
        for _ in 0..200 {
            let x = pt(&[rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)]);
            let rec = dr_step(&a, &b, &x, &SelectionPolicy::LowestIndex).unwrap();
            let recomposed = rec.x.add(&rec.b.sub(&rec.a));
            assert!(recomposed.dist(&rec.x_next) <= 1e-12);
        }
    }

    #[test]
    fn full_angular_coverage_has_wide_tail_diameter() {
        // A synthetic non-convergent trajectory whose tail walks the unit
        // circle: the tail diameter approaches the circle diameter.
        let tau = std::f64::consts::TAU;
        let records: Vec<StepRecord> = (0..400)
            .map(|k| {
                let th = tau * k as f64 / 100.0;
                let th_next = tau * (k + 1) as f64 / 100.0;
                let x = pt(&[th.cos(), th.sin(), 0.0]);
                let x_next = pt(&[th_next.cos(), th_next.sin(), 0.0]);
                let step_norm = x_next.dist(&x);
                StepRecord {
                    n: k,
                    x: x.clone(),
                    a: x.clone(),
                    b: x_next.clone(),
                    x_next,
                    pair: (0, 0),
                    step_norm,
                    dist_a: 0.0,
                    dist_b: 0.0,
                }
            })
            .collect();
        let d = diagnose(&records, 64, 1e-10);
        assert!(d.tail_diameter >= 1.9, "tail diameter {}", d.tail_diameter);
        assert!(!d.converged);
    }

    #[test]
    fn seeded_policy_replays() {
        let a = singletons(&[&[-1.0], &[1.0]]);
        let b = singletons(&[&[-2.0], &[1.0]]);
        let cfg = StoppingConfig { max_iter: 50, ..Default::default() };
        let p = SelectionPolicy::SeededRandom(99);
        let t1 = dr_run(&a, &b, &pt(&[0.0]), &cfg, &p).unwrap();
        let t2 = dr_run(&a, &b, &pt(&[0.0]), &cfg, &p).unwrap();
        assert_eq!(t1.records.len(), t2.records.len());
        for (r1, r2) in t1.records.iter().zip(&t2.records) {
            assert_eq!(r1.x_next, r2.x_next);
            assert_eq!(r1.pair, r2.pair);
        }
    }

    #[test]
    fn active_pair_operators_land_in_the_image() {
        let a = UnionSet::new(vec![
            line(&[0.0, 0.0], &[1.0, 0.0]),
            line(&[0.0, 0.0], &[0.0, 1.0]),
        ])
        .unwrap();
        let b = singletons(&[&[0.0, 0.0], &[8.0, 1.0], &[7.0, -1.0]]);
        let mut rng = crate::rng::SplitMix64::new(71);
        for _ in 0..300 {
            let x = pt(&[rng.uniform(-9.0, 9.0), rng.uniform(-9.0, 9.0)]);
            let pairs = crate::union::active_pairs_auto(&a, &b, &x).unwrap();
            assert!(!pairs.is_empty());
            let image = enumerate_t(&a, &b, &x).unwrap();
            for pair in &pairs.pairs {
                let t_ij = pair_operator(&a, &b, *pair, &x).unwrap();
                assert!(
                    image.iter().any(|p| p.dist(&t_ij) <= 1e-9),
                    "T_{pair:?}({x}) missing from the enumerated image"
                );
            }
        }
    }

    #[test]
    fn step_is_fejer_toward_pair_fixed_point() {
        // (1, 0) is a fixed point of the pair (x-axis, cross line); steps
        // chosen with that pair active never move away from it.
        let a = UnionSet::new(vec![
            line(&[0.0, 0.0], &[1.0, 0.0]),
            line(&[0.0, 0.0], &[0.0, 1.0]),
        ])
        .unwrap();
        let b = UnionSet::single(line(&[1.0, 0.0], &[-1.0, 2.0])).unwrap();
        let x_star = pt(&[1.0, 0.0]);
        let mut rng = crate::rng::SplitMix64::new(72);
        for _ in 0..300 {
            let x = rng.uniform_in_ball(&x_star, 0.45);
            let rec = dr_step(&a, &b, &x, &SelectionPolicy::LowestIndex).unwrap();
            assert_eq!(rec.pair, (0, 0));
            assert!(rec.x_next.dist(&x_star) <= x.dist(&x_star) + 1e-10);
        }
    }

    #[test]
    fn firmly_nonexpansive_pair_operator() {
        let a = xaxis_set();
        let b = diagonal_set();
        let mut rng = crate::rng::SplitMix64::new(31);
        for _ in 0..500 {
            let x = pt(&[rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)]);
            let y = pt(&[rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)]);
            let tx = pair_operator(&a, &b, (0, 0), &x).unwrap();
            let ty = pair_operator(&a, &b, (0, 0), &y).unwrap();
            let lhs = tx.dist(&ty).powi(2)
                + x.sub(&tx).dist(&y.sub(&ty)).powi(2);
            assert!(lhs <= x.dist(&y).powi(2) + 1e-9);
        }
    }
}
