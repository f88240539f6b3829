//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`). Expected values are frozen
//! from independent oracles implemented inside this file, never from the
//! code paths under test.
//!
//! Two criteria (07 and 09) assert angular-coverage targets for the spiral
//! runs that the true dynamics cannot reach on any feasible step budget: the
//! parameter advances scale like `exp(-2 t)`, so the angle grows only
//! logarithmically in the iteration count. Those tests run the honest
//! experiment, report the measured scaling, and fail. See the repository
//! README for the analysis.

use std::f64::consts::{PI, TAU};

use drproj::analysis::{accumulation_analysis, classify_fixed_point, radius_sampled, FixStatus};
use drproj::engine::{
    dr_run, enumerate_t, pair_operator, SelectionPolicy, StopReason, StoppingConfig,
};
use drproj::lift::{lift, solve_lifted, DEFAULT_TUPLE_CAP};
use drproj::pieces::{
    dist_piece, project_piece, ConvexPrimitive, NonconvexPrimitive, Piece,
};
use drproj::point::{pt, Point};
use drproj::rng::SplitMix64;
use drproj::scenario::{builtin_scenario, builtin_intersection_samples, BuiltinParams};
use drproj::spiral::{
    b_minus, b_plus, dr_spiral_run, map_spiral_run, verify_claims, MapVariant, SpiralScene,
};
use drproj::trace::trace_to_string;
use drproj::union::UnionSet;

fn pass(n: usize, name: &str) {
    println!("criterion {n:02} ({name}): PASS");
}

fn build(name: &str, params: &BuiltinParams) -> (UnionSet, UnionSet) {
    let scenario = builtin_scenario(name, params).unwrap();
    let problem = scenario.build().unwrap();
    let (a, b) = problem.sets();
    (a.clone(), b.clone())
}

// ---------------------------------------------------------------- 01

/// Independent replay of the discrete-cycle scene: drop to the axis, argmin
/// over the three singletons, average the reflection.
fn cycle_oracle_step(x: [f64; 2], eta: f64) -> ([f64; 2], f64) {
    let a = [x[0], 0.0];
    let y = [x[0], -x[1]];
    let candidates = [[0.0, 0.0], [7.0 + eta, eta], [7.0, -eta]];
    let b = candidates
        .into_iter()
        .min_by(|p, q| {
            let dp = (p[0] - y[0]).hypot(p[1] - y[1]);
            let dq = (q[0] - y[0]).hypot(q[1] - y[1]);
            dp.partial_cmp(&dq).unwrap()
        })
        .unwrap();
    let gap = (a[0] - b[0]).hypot(a[1] - b[1]);
    ([x[0] + b[0] - a[0], x[1] + b[1] - a[1]], gap)
}

#[test]
fn acceptance_01_discrete_limit_cycle() {
    for eta in [0.25, 0.5, 1.0] {
        let params = BuiltinParams { eta, ..Default::default() };
        let (a, b) = build("discrete-cycle", &params);
        let config = StoppingConfig { max_iter: 100, ..Default::default() };
        let traj =
            dr_run(&a, &b, &pt(&[7.0, eta]), &config, &SelectionPolicy::LowestIndex).unwrap();

        let StopReason::CycleDetected { period } = traj.stop_reason else {
            panic!("eta = {eta}: expected a cycle, got {:?}", traj.stop_reason);
        };
        assert_eq!(period, 4, "eta = {eta}");
        assert!(traj.records.len() <= 100);

        // Oracle replay: freeze the orbit and the gap floor.
        let mut x = [7.0, eta];
        let mut oracle_orbit = Vec::new();
        let mut oracle_min_gap = f64::INFINITY;
        for k in 0..60 {
            let (next, gap) = cycle_oracle_step(x, eta);
            if k >= 56 - 4 {
                oracle_orbit.push(next);
            }
            if k >= 20 {
                oracle_min_gap = oracle_min_gap.min(gap);
            }
            x = next;
        }
        let tail = &traj.records[traj.records.len() - 4..];
        for expected in &oracle_orbit {
            let e = pt(expected);
            assert!(
                tail.iter().any(|r| r.x_next.dist(&e) <= 1e-10),
                "eta = {eta}: engine cycle misses oracle point {e}"
            );
        }
        assert!(
            (traj.diagnostics.feasibility_gap - eta).abs() <= 1e-10,
            "eta = {eta}: min gap {} != eta",
            traj.diagnostics.feasibility_gap
        );
        assert!((oracle_min_gap - eta).abs() <= 1e-12);
    }
    pass(1, "discrete limit cycle");
}

// ---------------------------------------------------------------- 02

#[test]
fn acceptance_02_radius_of_attraction() {
    let params = BuiltinParams { x_star: 1.0, y_star: 2.0, ..Default::default() };
    let (a, b) = build("axes-line", &params);

    let est1 = radius_sampled(&a, &b, &pt(&[1.0, 0.0]), 2.0, 2000, 30, 20260808).unwrap();
    assert!(
        est1.sampled >= 0.69 && est1.sampled <= 0.7072,
        "sampled radius at (1,0): {}",
        est1.sampled
    );
    let cert1 = est1.certified_lower.unwrap();
    assert!((cert1 - 0.5).abs() <= 1e-12);
    assert!(cert1 <= est1.sampled);

    let est2 = radius_sampled(&a, &b, &pt(&[0.0, 2.0]), 2.0, 2000, 30, 20260808).unwrap();
    assert!(
        est2.sampled >= 1.38 && est2.sampled <= 1.4143,
        "sampled radius at (0,2): {}",
        est2.sampled
    );
    let cert2 = est2.certified_lower.unwrap();
    assert!((cert2 - 1.0).abs() <= 1e-12);
    assert!(cert2 <= est2.sampled);
    pass(2, "radius of attraction");
}

// ---------------------------------------------------------------- 03

#[test]
fn acceptance_03_basin_behavior() {
    let params = BuiltinParams::default();
    let (a, b) = build("axes-line", &params);
    let center = pt(&[1.0, 0.0]);
    let config = StoppingConfig { max_iter: 10_000, tol_step: 1e-12, ..Default::default() };
    let mut rng = SplitMix64::new(33);
    for trial in 0..100 {
        let x0 = rng.uniform_in_ball(&center, 0.49);
        let traj = dr_run(&a, &b, &x0, &config, &SelectionPolicy::LowestIndex).unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged, "trial {trial}");
        for x in traj.iterates() {
            assert!(
                x.dist(&center) <= 0.49 + 1e-12,
                "trial {trial}: iterate {x} left the ball"
            );
        }
        let limit = traj.diagnostics.limit.clone().unwrap();
        let class = classify_fixed_point(&a, &b, &limit).unwrap();
        assert!(class.is_fixed(), "trial {trial}: limit {limit} not fixed");

        // shadow accumulation: both memberships within 1e-8
        let shadow = &traj.records.last().unwrap().a;
        assert!(a.distance(shadow).unwrap() <= 1e-8);
        assert!(b.distance(shadow).unwrap() <= 1e-8);
    }
    pass(3, "basin behavior around a strong fixed point");
}

// ---------------------------------------------------------------- 04

#[test]
fn acceptance_04_weak_fixed_point_instability() {
    let params = BuiltinParams::default();
    let (a, b) = build("weak-fixed-1d", &params);

    let class = classify_fixed_point(&a, &b, &pt(&[0.0])).unwrap();
    assert_eq!(class.status, FixStatus::Fixed);
    let image = enumerate_t(&a, &b, &pt(&[0.0])).unwrap();
    assert_eq!(image.len(), 2);
    assert!(image.iter().any(|p| p.dist(&pt(&[0.0])) <= 1e-12));
    assert!(image.iter().any(|p| p.dist(&pt(&[-1.0])) <= 1e-12));

    let config = StoppingConfig { max_iter: 50, ..Default::default() };
    let mut rng = SplitMix64::new(44);
    for trial in 0..20 {
        let x0 = pt(&[rng.uniform(-0.5, 0.0)]);
        let traj = dr_run(&a, &b, &x0, &config, &SelectionPolicy::LowestIndex).unwrap();
        let escaped = traj.iterates().iter().any(|x| x[0].abs() > 0.5);
        assert!(escaped, "trial {trial}: start {x0} never left B(0, 0.5)");
    }
    pass(4, "weak fixed-point instability");
}

// ---------------------------------------------------------------- 05

#[test]
fn acceptance_05_convex_global_convergence() {
    let params = BuiltinParams::default();
    let (a, b) = build("two-lines", &params);
    let config = StoppingConfig::default();
    let mut rng = SplitMix64::new(55);
    for trial in 0..100 {
        let x0 = pt(&[rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)]);
        let traj = dr_run(&a, &b, &x0, &config, &SelectionPolicy::LowestIndex).unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged, "trial {trial}");
        let limit = traj.final_point().clone();
        let iterates = traj.iterates();
        for w in iterates.windows(2) {
            assert!(
                w[1].dist(&limit) <= w[0].dist(&limit) + 1e-10,
                "trial {trial}: distance to the limit increased"
            );
        }
    }
    pass(5, "global convergence for convex pieces");
}

// ---------------------------------------------------------------- 06

#[test]
fn acceptance_06_spiral_identities() {
    let scene = SpiralScene::default();
    let grid: Vec<f64> = (1..=24).map(|k| 0.5 * k as f64).collect();
    let report = verify_claims(&scene, &grid).unwrap();
    assert!(
        report.all_passed(),
        "failed checks: {:?}",
        report
            .failures()
            .iter()
            .map(|c| format!("{} at t={}", c.name, c.t))
            .collect::<Vec<_>>()
    );

    // derivative identities against central finite differences
    let mut rng = SplitMix64::new(66);
    let h = 1e-6;
    for _ in 0..100 {
        let x = rng.uniform(1.0, 10.0);
        let t = rng.uniform(1.0, 10.0);
        for sign in [drproj::curve::SpiralSign::Plus, drproj::curve::SpiralSign::Minus] {
            let fd = (drproj::spiral::d_value(sign, x + h, t)
                - drproj::spiral::d_value(sign, x - h, t))
                / (2.0 * h);
            assert!((drproj::spiral::d_derivative(sign, x, t) - fd).abs() <= 1e-6);
        }
    }
    pass(6, "spiral identities");
}

// ---------------------------------------------------------------- 07

const FULL_TRAVERSAL_TARGET: f64 = 1.0 + 4.0 * PI;
const SPIRAL_CAP: usize = 1_000_000;

/// Least-squares slope of ln(increment) against t: measures the decay
/// exponent of the parameter advances.
fn increment_decay_exponent(tk: &[f64]) -> f64 {
    let pairs: Vec<(f64, f64)> = tk
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], (w[1] - w[0]).ln()))
        .collect();
    let n = pairs.len() as f64;
    let sx: f64 = pairs.iter().map(|p| p.0).sum();
    let sy: f64 = pairs.iter().map(|p| p.1).sum();
    let sxx: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pairs.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn acceptance_07_continuous_limit_cycle() {
    let scene = SpiralScene::default();
    let run = dr_spiral_run(&scene, 1.0, SPIRAL_CAP).unwrap();

    // strictly increasing parameters
    for w in run.tk.windows(2) {
        assert!(w[1] > w[0], "parameter sequence not strictly increasing");
    }
    // step norms bounded by e^(-t_k)
    for (k, &t) in run.tk.iter().enumerate() {
        let bound = (-t).exp() + 1e-12;
        let r0 = &run.trajectory.records[2 * k];
        assert!(r0.step_norm <= bound, "step {} norm {} > {bound}", r0.n, r0.step_norm);
        if let Some(r1) = run.trajectory.records.get(2 * k + 1) {
            assert!(r1.step_norm <= bound, "step {} norm {} > {bound}", r1.n, r1.step_norm);
        }
    }
    // never converges, steps vanish
    assert!(!run.trajectory.diagnostics.converged);
    assert!(run.trajectory.diagnostics.steps_vanish);

    // Honest traversal attempt: the criterion asks for t >= 1 + 4*pi within
    // the cap and full angular coverage of the base circle over a final turn
    // at t >= 6. Measure what actually happens and report it.
    let reached = *run.tk.last().unwrap();
    let slope = increment_decay_exponent(&run.tk[run.tk.len() / 2..]);
    let tail_start = run.trajectory.records.len() - run.trajectory.records.len() / 4;
    let tail: Vec<Point> = run.trajectory.records[tail_start..]
        .iter()
        .map(|r| r.x_next.clone())
        .collect();
    let target = Piece::Nonconvex(NonconvexPrimitive::BaseCircle);
    let coverage = accumulation_analysis(&tail, &target, 360).unwrap();

    println!(
        "criterion 07 measurements: reached t = {reached:.4} after {} steps (target {FULL_TRAVERSAL_TARGET:.4}); \
         ln-increment slope vs t = {slope:.3} (advances shrink like exp({slope:.2} t)); \
         tail coverage: max_min_distance = {:.3}, coverage_gap = {:.3} rad",
        run.trajectory.records.len(),
        coverage.max_min_distance,
        coverage.coverage_gap
    );

    assert!(
        reached >= FULL_TRAVERSAL_TARGET,
        "criterion 07: the run reached t = {reached:.4} in {} steps, short of the target {FULL_TRAVERSAL_TARGET:.4}. \
         Measured parameter advances decay like exp({slope:.2} t) (slope fitted on the second half of the run), \
         so reaching the target needs on the order of exp(2 * {FULL_TRAVERSAL_TARGET:.2}) / 2 ~ 3e11 advances, \
         five orders of magnitude past the 1e6-step cap. The remaining sub-checks of this criterion \
         (coverage max_min_distance <= 0.25, coverage_gap <= 0.3; measured {:.3} and {:.3}) \
         are unreachable for the same reason.",
        run.trajectory.records.len(),
        coverage.max_min_distance,
        coverage.coverage_gap
    );
    assert!(coverage.max_min_distance <= 0.25);
    assert!(coverage.coverage_gap <= 0.3);
    pass(7, "continuous limit cycle");
}

// ---------------------------------------------------------------- 08

#[test]
fn acceptance_08_generic_specialized_equivalence() {
    let scene = SpiralScene::default();
    let run = dr_spiral_run(&scene, 1.0, 50).unwrap();
    let (a, b) = scene.sets();
    let config = StoppingConfig { max_iter: 50, cycle_max_period: 0, ..Default::default() };
    let generic = dr_run(
        &a,
        &b,
        &run.trajectory.records[0].x,
        &config,
        &SelectionPolicy::LowestIndex,
    )
    .unwrap();
    assert_eq!(generic.records.len(), 50);
    for (s, g) in run.trajectory.records.iter().zip(&generic.records) {
        let gap = s.x_next.dist(&g.x_next);
        assert!(gap <= 1e-8, "step {}: iterates differ by {gap}", s.n);
    }
    pass(8, "generic/specialized spiral equivalence");
}

// ---------------------------------------------------------------- 09

#[test]
fn acceptance_09_map_corollaries() {
    let scene = SpiralScene::default();

    // Inner variant reproduces the DR shadows.
    let steps = 200;
    let dr = dr_spiral_run(&scene, 1.0, 2 * steps).unwrap();
    let inner = map_spiral_run(&scene, 1.0, steps, MapVariant::InnerVsMantle).unwrap();
    for k in 0..steps {
        let gap = inner.trajectory.records[k].a.dist(&dr.trajectory.records[2 * k].a);
        assert!(gap <= 1e-10, "shadow {k} differs by {gap}");
    }

    // Outer spiral against the solid cylinder: the projection-pair distance
    // follows the e^(-t) law and the run cannot converge.
    let outer = map_spiral_run(&scene, 1.0, SPIRAL_CAP / 2, MapVariant::OuterVsSolidCylinder)
        .unwrap();
    for (k, rec) in outer.trajectory.records.iter().enumerate() {
        let expected = (-outer.tk[k]).exp();
        assert!(
            (rec.dist_a - expected).abs() <= 1e-10,
            "step {k}: ||x - a|| = {} vs e^-t = {expected}",
            rec.dist_a
        );
    }
    assert!(!outer.trajectory.diagnostics.converged);
    assert!(outer.trajectory.diagnostics.steps_vanish);

    // Accumulation target mirrors criterion 07 and fails for the same
    // measured reason.
    let reached = *outer.tk.last().unwrap();
    let tail_start = outer.trajectory.records.len() - outer.trajectory.records.len() / 4;
    let tail: Vec<Point> = outer.trajectory.records[tail_start..]
        .iter()
        .map(|r| r.x_next.clone())
        .collect();
    let target = Piece::Nonconvex(NonconvexPrimitive::BaseCircle);
    let coverage = accumulation_analysis(&tail, &target, 360).unwrap();
    println!(
        "criterion 09 measurements: reached t = {reached:.4} after {} alternating steps; \
         tail coverage max_min_distance = {:.3}, coverage_gap = {:.3} rad",
        outer.trajectory.records.len(),
        coverage.max_min_distance,
        coverage.coverage_gap
    );
    assert!(
        reached >= FULL_TRAVERSAL_TARGET,
        "criterion 09: alternating projections reached t = {reached:.4} in {} steps, short of {FULL_TRAVERSAL_TARGET:.4}; \
         the parameter advances decay like exp(-2 t) exactly as in criterion 07, so the angular-coverage \
         sub-checks (measured max_min_distance = {:.3}, coverage_gap = {:.3}) cannot be met under any \
         feasible step budget.",
        outer.trajectory.records.len(),
        coverage.max_min_distance,
        coverage.coverage_gap
    );
    assert!(coverage.max_min_distance <= 0.25);
    assert!(coverage.coverage_gap <= 0.3);
    pass(9, "alternating-projection corollaries");
}

// ---------------------------------------------------------------- 10

#[test]
fn acceptance_10_two_circles_shadows() {
    let params = BuiltinParams::default();
    let (a, b) = build("two-circles", &params);
    let center = pt(&[0.0, 0.0]);
    let class = classify_fixed_point(&a, &b, &center).unwrap();
    assert_eq!(class.status, FixStatus::StrongFixed);

    // exactly two distinct witness shadows, each in both sets
    let mut shadows: Vec<Point> = Vec::new();
    for (sa, _) in &class.witness_pairs {
        if !shadows.iter().any(|p| p.dist(sa) <= 1e-10) {
            shadows.push(sa.clone());
        }
    }
    assert_eq!(shadows.len(), 2, "witness shadows: {shadows:?}");
    for s in &shadows {
        assert!(a.distance(s).unwrap() <= 1e-10);
        assert!(b.distance(s).unwrap() <= 1e-10);
    }
    pass(10, "two-circles witness shadows");
}

// ---------------------------------------------------------------- 11

#[test]
fn acceptance_11_product_lift() {
    let r2 = 2.0f64.sqrt();
    let halfplane = |normal: &[f64], offset: f64| {
        let n = pt(normal);
        let n = n.scale(1.0 / n.norm());
        UnionSet::single(Piece::Convex(ConvexPrimitive::Halfspace { normal: n, offset }))
            .unwrap()
    };
    let sets = [
        halfplane(&[-1.0, 0.0], 1.0),
        halfplane(&[0.0, -1.0], 1.0),
        halfplane(&[1.0, 1.0], r2),
    ];
    let problem = lift(&sets, DEFAULT_TUPLE_CAP).unwrap();
    let config = StoppingConfig::default();
    let mut rng = SplitMix64::new(77);
    for trial in 0..20 {
        let coords: Vec<f64> = (0..6).map(|_| rng.uniform(-10.0, 10.0)).collect();
        let x0 = Point::new(coords).unwrap();
        let (traj, sol) =
            solve_lifted(&problem, &x0, &config, &SelectionPolicy::LowestIndex).unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged, "trial {trial}");
        let candidate = sol.candidate.unwrap();
        for (i, r) in sol.residuals.iter().enumerate() {
            assert!(
                *r <= 1e-8,
                "trial {trial}: candidate {candidate} violates constraint {i} by {r}"
            );
        }
    }
    pass(11, "product-space lift");
}

// ---------------------------------------------------------------- 12

fn random_point(rng: &mut SplitMix64, dim: usize, scale: f64) -> Point {
    Point::new((0..dim).map(|_| rng.uniform(-scale, scale)).collect()).unwrap()
}

fn random_convex_piece(rng: &mut SplitMix64) -> Piece {
    match rng.usize_below(6) {
        0 => Piece::Convex(ConvexPrimitive::Singleton { point: random_point(rng, 2, 3.0) }),
        1 => Piece::Convex(ConvexPrimitive::Segment {
            start: random_point(rng, 2, 3.0),
            end: random_point(rng, 2, 3.0),
        }),
        2 => {
            let angle = rng.uniform(0.0, TAU);
            Piece::Convex(ConvexPrimitive::AffineSubspace {
                base: random_point(rng, 2, 3.0),
                directions: vec![pt(&[angle.cos(), angle.sin()])],
            })
        }
        3 => {
            let angle = rng.uniform(0.0, TAU);
            Piece::Convex(ConvexPrimitive::Halfspace {
                normal: pt(&[angle.cos(), angle.sin()]),
                offset: rng.uniform(-2.0, 2.0),
            })
        }
        4 => Piece::Convex(ConvexPrimitive::Ball {
            center: random_point(rng, 2, 3.0),
            radius: rng.uniform(0.1, 2.0),
        }),
        _ => {
            let a = random_point(rng, 2, 3.0);
            let b = random_point(rng, 2, 3.0);
            let lower = pt(&[a[0].min(b[0]), a[1].min(b[1])]);
            let upper = pt(&[a[0].max(b[0]), a[1].max(b[1])]);
            Piece::Convex(ConvexPrimitive::Box { lower, upper })
        }
    }
}

fn random_piece(rng: &mut SplitMix64) -> Piece {
    match rng.usize_below(8) {
        k if k < 6 => random_convex_piece(rng),
        6 => Piece::Nonconvex(NonconvexPrimitive::Sphere {
            center: random_point(rng, 2, 3.0),
            radius: rng.uniform(0.1, 2.0),
        }),
        _ => Piece::Nonconvex(NonconvexPrimitive::CylinderMantle),
    }
}

#[test]
fn acceptance_12a_projector_idempotence() {
    let mut rng = SplitMix64::new(120);
    for case in 0..1000 {
        let piece = random_piece(&mut rng);
        let x = random_point(&mut rng, piece.dim(), 4.0);
        let proj = project_piece(&piece, &x).unwrap();
        for p in &proj.nearest {
            let again = project_piece(&piece, p).unwrap();
            assert!(again.distance <= 1e-10, "case {case}: {piece:?}");
            assert!(again.nearest[0].dist(p) <= 1e-10, "case {case}: {piece:?}");
        }
    }
    pass(12, "property: projector idempotence (1000 cases)");
}

#[test]
fn acceptance_12b_convex_nonexpansiveness() {
    let mut rng = SplitMix64::new(121);
    for case in 0..1000 {
        let piece = random_convex_piece(&mut rng);
        let x = random_point(&mut rng, 2, 5.0);
        let y = random_point(&mut rng, 2, 5.0);
        let px = &project_piece(&piece, &x).unwrap().nearest[0];
        let py = &project_piece(&piece, &y).unwrap().nearest[0];
        assert!(
            px.dist(py) <= x.dist(&y) + 1e-10,
            "case {case}: projector expanded on {piece:?}"
        );
    }
    pass(12, "property: convex projector nonexpansiveness (1000 cases)");
}

#[test]
fn acceptance_12c_firm_nonexpansiveness() {
    let mut rng = SplitMix64::new(122);
    for case in 0..1000 {
        let a = UnionSet::single(random_convex_piece(&mut rng)).unwrap();
        let b = UnionSet::single(random_convex_piece(&mut rng)).unwrap();
        let x = random_point(&mut rng, 2, 5.0);
        let y = random_point(&mut rng, 2, 5.0);
        let tx = pair_operator(&a, &b, (0, 0), &x).unwrap();
        let ty = pair_operator(&a, &b, (0, 0), &y).unwrap();
        let lhs = tx.dist(&ty).powi(2) + x.sub(&tx).dist(&y.sub(&ty)).powi(2);
        assert!(
            lhs <= x.dist(&y).powi(2) + 1e-9,
            "case {case}: firm nonexpansiveness violated"
        );
    }
    pass(12, "property: firm nonexpansiveness of pair operators (1000 cases)");
}

#[test]
fn acceptance_12d_intersection_points_are_strong() {
    let params = BuiltinParams::default();
    let mut cases = 0usize;
    for name in ["axes-line", "discrete-cycle", "two-lines", "weak-fixed-1d", "two-circles"] {
        let (a, b) = build(name, &params);
        for x in builtin_intersection_samples(name, &params, 0, 0) {
            let image = enumerate_t(&a, &b, &x).unwrap();
            assert_eq!(image.len(), 1, "{name}: T({x}) not a singleton");
            assert!(image[0].dist(&x) <= 1e-10, "{name}: {x} moved");
            cases += 1;
        }
    }
    let scene = SpiralScene::default();
    let (a, b) = scene.sets();
    for x in builtin_intersection_samples("spiral", &params, 1000 - cases, 123) {
        let image = enumerate_t(&a, &b, &x).unwrap();
        assert_eq!(image.len(), 1, "spiral: T({x}) not a singleton");
        assert!(image[0].dist(&x) <= 1e-10, "spiral: {x} moved");
        cases += 1;
    }
    assert!(cases >= 1000);
    pass(12, "property: intersection points are strong fixed points (1000 cases)");
}

#[test]
fn acceptance_12e_trace_replay_determinism() {
    let params = BuiltinParams::default();
    let scenes = [build("discrete-cycle", &params), build("axes-line", &params)];
    let config = StoppingConfig { max_iter: 40, ..Default::default() };
    let mut rng = SplitMix64::new(125);
    for case in 0..1000 {
        let (a, b) = &scenes[case % 2];
        let x0 = random_point(&mut rng, 2, 8.0);
        let seed = rng.next_u64();
        let policy = SelectionPolicy::SeededRandom(seed);
        let t1 = dr_run(a, b, &x0, &config, &policy).unwrap();
        let t2 = dr_run(a, b, &x0, &config, &policy).unwrap();
        assert_eq!(
            trace_to_string(&t1, 2),
            trace_to_string(&t2, 2),
            "case {case}: traces differ"
        );
    }
    pass(12, "property: trace replay determinism (1000 cases)");
}

// Sanity anchors used by several criteria above, kept here so the acceptance
// binary is self-contained.

#[test]
fn anchor_union_distances() {
    // dist examples frozen by hand
    let ball = Piece::Convex(ConvexPrimitive::Ball { center: pt(&[0.0, 0.0]), radius: 1.0 });
    assert_eq!(dist_piece(&ball, &pt(&[3.0, 4.0])).unwrap(), 4.0);
    let mantle = Piece::Nonconvex(NonconvexPrimitive::CylinderMantle);
    let x = b_minus(2.0).unwrap();
    assert!((dist_piece(&mantle, &x).unwrap() - (-2.0f64).exp()).abs() <= 1e-12);
    let y = b_plus(2.0).unwrap();
    assert!((dist_piece(&mantle, &y).unwrap() - (-2.0f64).exp()).abs() <= 1e-12);
}
