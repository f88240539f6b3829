//! The cylinder / double-spiral laboratory.
//!
//! `A` is the lateral surface of the unit cylinder of height `[0, 1]`. `B` is
//! a double logarithmic spiral winding down against the cylinder, one branch
//! outside, one inside, closed up with the base circle `F` at height zero.
//! `A` and `B` intersect exactly in `F`.
//!
//! Starting the Douglas-Rachford iteration on the inner branch produces the
//! alternating sequence `b_-(t_1), a(t_1), b_-(t_2), a(t_2), ...` where each
//! parameter advance `t -> sigma(t)` is the nearest-point parameter of the
//! shadow `a(t)` on the inner branch. Steps vanish like `e^-t`, the sequence
//! never converges, and its accumulation set is the whole circle `F`.
//!
//! This module provides the exact parametrizations, the one-dimensional
//! distance functions with closed-form derivatives, the parameter step map,
//! specialized runners for the DR and alternating-projection sequences, and a
//! batch verifier for the analytic identities the construction rests on.

use serde::{Deserialize, Serialize};

use crate::curve::{self, SpiralSign};
use crate::engine::{
    dr_run, SelectionPolicy, StepRecord, StopReason, StoppingConfig, Trajectory,
};
use crate::error::{Error, Result};
use crate::pieces::{ConvexPrimitive, NonconvexPrimitive, Piece};
use crate::point::Point;
use crate::union::UnionSet;

/// Smallest starting parameter accepted by the specialized runners. Below
/// this the nearest-point parameter is found by global search only.
pub const T_MIN: f64 = 0.5;

/// Default branch truncation. Beyond this the branch height is below
/// `2.1e-9` and the curve is numerically indistinguishable from the base
/// circle.
pub const DEFAULT_T_MAX: f64 = 40.0;

/// The cylinder/double-spiral scene.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralScene {
    pub t_max: f64,
}

impl Default for SpiralScene {
    fn default() -> Self {
        SpiralScene { t_max: DEFAULT_T_MAX }
    }
}

impl SpiralScene {
    pub fn new(t_max: f64) -> Result<Self> {
        if !(t_max >= 20.0) {
            return Err(Error::InvalidConfig(format!(
                "spiral scene t_max {t_max} must be >= 20"
            )));
        }
        Ok(SpiralScene { t_max })
    }

    /// The branches always carry the base circle with them.
    pub fn includes_f(&self) -> bool {
        true
    }

    /// `(A, B)` as union sets. Piece order in `B` is inner branch first,
    /// outer branch second; the lowest-index policy therefore prefers the
    /// inner branch on numerically tied projections, matching the exact
    /// geometry.
    pub fn sets(&self) -> (UnionSet, UnionSet) {
        let a = UnionSet::single(Piece::Nonconvex(NonconvexPrimitive::CylinderMantle))
            .expect("valid piece");
        let b = UnionSet::new(vec![
            Piece::Nonconvex(NonconvexPrimitive::SpiralBranch {
                sign: SpiralSign::Minus,
                t_max: self.t_max,
            }),
            Piece::Nonconvex(NonconvexPrimitive::SpiralBranch {
                sign: SpiralSign::Plus,
                t_max: self.t_max,
            }),
        ])
        .expect("valid pieces");
        (a, b)
    }
}

/// The solid cylinder (convex hull of the mantle): unit disk times `[0, 1]`.
pub fn solid_cylinder() -> Piece {
    Piece::Product(vec![
        Piece::Convex(ConvexPrimitive::Ball {
            center: Point::zeros(2),
            radius: 1.0,
        }),
        Piece::Convex(ConvexPrimitive::Box {
            lower: Point::zeros(1),
            upper: Point::from_vec(vec![1.0]),
        }),
    ])
}

fn require_nonnegative(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidConfig(format!("parameter t = {t} must be >= 0")));
    }
    Ok(())
}

/// Shadow point `a(t) = (cos t, sin t, e^(-t/2))` on the mantle.
pub fn a_of_t(t: f64) -> Result<Point> {
    require_nonnegative(t)?;
    Ok(Point::from_vec(curve::shadow(t).to_vec()))
}

/// Outer branch point `b_+(t)`.
pub fn b_plus(t: f64) -> Result<Point> {
    require_nonnegative(t)?;
    Ok(Point::from_vec(curve::branch(SpiralSign::Plus, t).to_vec()))
}

/// Inner branch point `b_-(t)`.
pub fn b_minus(t: f64) -> Result<Point> {
    require_nonnegative(t)?;
    Ok(Point::from_vec(curve::branch(SpiralSign::Minus, t).to_vec()))
}

pub fn branch_point(sign: SpiralSign, t: f64) -> Result<Point> {
    require_nonnegative(t)?;
    Ok(Point::from_vec(curve::branch(sign, t).to_vec()))
}

/// Half squared distance `d_s(x) = ||a(t) - b_s(x)||^2 / 2`, by direct norm.
pub fn d_value(sign: SpiralSign, x: f64, t: f64) -> f64 {
    let a = curve::shadow(t);
    0.5 * curve::sq_dist_to_branch(sign, &a, x)
}

/// Closed-form derivative of `x -> d_s(x)`.
///
/// With `u = e^-x`, `c = cos(t - x)`, `s = sin(t - x)`, `h = e^(-x/2)` and
/// `h_t = e^(-t/2)`:
///
/// ```text
/// d_s'(x) = -s_gn * u * ((1 + s_gn u) - c) - (1 + s_gn u) * s + (h_t - h) h / 2
/// ```
///
/// grouped so that the near-cancellation at `x = t` (where the value is
/// exactly `-e^(-2t)`) stays accurate; `h_t - h` is computed through
/// `expm1` for the same reason.
pub fn d_derivative(sign: SpiralSign, x: f64, t: f64) -> f64 {
    let sg = sign.factor();
    let u = (-x).exp();
    let dt = x - t;
    let c = dt.cos();
    let sn = -dt.sin(); // sin(t - x)
    let h = (-x / 2.0).exp();
    let h_t = (-t / 2.0).exp();
    let gap = -h_t * (-dt / 2.0).exp_m1(); // h_t - h
    -sg * u * ((1.0 + sg * u) - c) - (1.0 + sg * u) * sn + 0.5 * gap * h
}

/// Closed-form second derivative of `x -> d_s(x)`.
pub fn d_second(sign: SpiralSign, x: f64, t: f64) -> f64 {
    let u = (-x).exp();
    let dt = x - t;
    let c = dt.cos();
    let sn = -dt.sin(); // sin(t - x)
    let h = (-x / 2.0).exp();
    let h_t = (-t / 2.0).exp();
    match sign {
        SpiralSign::Minus => c + 2.0 * u * u - 2.0 * u * sn - 0.5 * u - 0.25 * h_t * h,
        SpiralSign::Plus => c + 2.0 * u * u + 2.0 * u * sn + 1.5 * u - 0.25 * h_t * h,
    }
}

/// Gap between the outer and inner squared-distance functions,
/// `f(x) = d_+(x) - d_-(x)`, evaluated by direct norms.
pub fn f_gap(x: f64, t: f64) -> f64 {
    d_value(SpiralSign::Plus, x, t) - d_value(SpiralSign::Minus, x, t)
}

/// Closed form of the same gap: `4 e^-x sin^2((x - t)/2)`. Nonnegative by
/// construction, zero exactly on `x - t = 2 k pi`, and resolvable in f64 even
/// where the direct difference drowns in rounding noise.
pub fn f_gap_closed(x: f64, t: f64) -> f64 {
    let s = (0.5 * (x - t)).sin();
    4.0 * (-x).exp() * s * s
}

/// Upper end of the parameter bracket: `t - 2 ln(1 - e^(-t/2))`. Any
/// nearest-point parameter of `a(t)` on either branch lies in
/// `(t, bracket_hi(t)]`.
pub fn bracket_hi(t: f64) -> f64 {
    t - 2.0 * (-(-t / 2.0).exp()).ln_1p()
}

/// The parameter step map: the minimizer `sigma > t` of `x -> d_-(x)`,
/// located by bracketing the root of the derivative and refining by
/// bisection to width `1e-13` plus one guarded Newton step.
pub fn next_sigma(t: f64) -> Result<f64> {
    next_sigma_signed(SpiralSign::Minus, t)
}

/// Same step map on a chosen branch (the outer one drives the alternating
/// projections against the solid cylinder).
pub fn next_sigma_signed(sign: SpiralSign, t: f64) -> Result<f64> {
    if !(t >= T_MIN) {
        return Err(Error::InvalidConfig(format!(
            "next_sigma requires t >= {T_MIN}, got {t}"
        )));
    }
    let mut lo = t;
    let mut hi = bracket_hi(t);
    let d_lo = d_derivative(sign, lo, t);
    let d_hi = d_derivative(sign, hi, t);
    if !(d_lo < 0.0) || !(d_hi > 0.0) {
        return Err(Error::BracketFailure(format!(
            "derivative does not change sign on ({lo}, {hi}]: d'({lo}) = {d_lo}, d'({hi}) = {d_hi}"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if d_derivative(sign, mid, t) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut sigma = 0.5 * (lo + hi);
    let d2 = d_second(sign, sigma, t);
    if d2 > 0.0 {
        let newton = sigma - d_derivative(sign, sigma, t) / d2;
        if newton.is_finite() && newton > t && newton <= bracket_hi(t) {
            sigma = newton;
        }
    }
    debug_assert!(sigma > t);
    Ok(sigma)
}

/// A strictly increasing parameter sequence generated by the step map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TkSequence {
    pub values: Vec<f64>,
    /// Whether `stop_t` was reached before the iteration cap.
    pub reached_stop: bool,
}

impl TkSequence {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("nonempty sequence")
    }
}

/// Iterate the step map from `t1` until the parameter reaches `stop_t` or
/// `cap` values have been produced. Every increment is checked against the
/// two-sided bound `0 < 1 - e^((t_k - t_{k+1})/2) <= e^(-t_k/2)`.
pub fn generate_tk(t1: f64, stop_t: f64, cap: usize) -> Result<TkSequence> {
    if !(t1 > 0.0) {
        return Err(Error::InvalidConfig(format!("t1 = {t1} must be positive")));
    }
    if cap == 0 {
        return Err(Error::InvalidConfig("cap must be >= 1".into()));
    }
    let mut values = vec![t1];
    let mut t = t1;
    while t < stop_t && values.len() < cap {
        let next = next_sigma(t)?;
        check_increment(t, next)?;
        values.push(next);
        t = next;
    }
    Ok(TkSequence { reached_stop: t >= stop_t, values })
}

fn check_increment(t: f64, next: f64) -> Result<()> {
    // 1 - e^((t - next)/2), computed without cancellation
    let lhs = -((t - next) / 2.0).exp_m1();
    let rhs = (-t / 2.0).exp();
    if !(lhs > 0.0) {
        return Err(Error::BracketFailure(format!(
            "parameter advance from {t} to {next} is not strictly increasing"
        )));
    }
    if lhs > rhs + 1e-15 {
        return Err(Error::BracketFailure(format!(
            "parameter advance from {t} to {next} violates the increment bound"
        )));
    }
    Ok(())
}

/// A specialized run over the spiral scene: the trajectory plus the
/// parameter values it visited.
#[derive(Clone, Debug)]
pub struct SpiralRun {
    pub trajectory: Trajectory,
    pub tk: Vec<f64>,
}

const CROSS_CHECK_STEPS: usize = 50;
const CROSS_CHECK_TOL: f64 = 1e-8;
/// The specialized runner re-validates its step map against the global curve
/// projection at this stride.
const GLOBAL_VALIDATION_STRIDE: usize = 10_000;

/// The Douglas-Rachford sequence on the spiral scene, starting at
/// `x_1 = b_-(t1)`.
///
/// Records alternate between `x = b_-(t_k)` (shadow `a(t_k)`, reflected
/// shadow `b_+(t_k)`, next iterate `a(t_k)`) and `x = a(t_k)` (shadow
/// `a(t_k)`, reflected shadow `b_-(t_{k+1})`, next iterate `b_-(t_{k+1})`).
/// The first 50 steps are cross-checked against the generic engine on the
/// same scene and the step map is re-validated against the global curve
/// projection at a fixed stride; disagreement is a hard error.
pub fn dr_spiral_run(scene: &SpiralScene, t1: f64, steps: usize) -> Result<SpiralRun> {
    if !(t1 >= T_MIN) {
        return Err(Error::InvalidConfig(format!(
            "dr_spiral_run requires t1 >= {T_MIN}, got {t1}"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidConfig("steps must be >= 1".into()));
    }
    let mut records: Vec<StepRecord> = Vec::with_capacity(steps);
    let mut tk: Vec<f64> = Vec::new();
    let mut t = t1;
    let mut advances = 0usize;
    while records.len() < steps {
        tk.push(t);
        let a_t = a_of_t(t)?;
        let b_minus_t = b_minus(t)?;
        let b_plus_t = b_plus(t)?;
        let e_t = (-t).exp();

        // x = b_-(t_k): reflect through a(t_k) onto the outer branch, land
        // back on the mantle shadow.
        records.push(StepRecord {
            n: records.len(),
            x: b_minus_t.clone(),
            a: a_t.clone(),
            b: b_plus_t.clone(),
            x_next: a_t.clone(),
            pair: (0, 1),
            step_norm: e_t,
            dist_a: e_t,
            dist_b: 0.0,
        });
        if records.len() >= steps {
            break;
        }

        // x = a(t_k): its own shadow; the reflected point is a(t_k) itself,
        // whose projection onto B is the inner-branch point at the next
        // parameter.
        let sigma = next_sigma(t)?;
        if sigma >= scene.t_max {
            return Err(Error::InvalidConfig(format!(
                "parameter {sigma} passed the branch truncation {}",
                scene.t_max
            )));
        }
        advances += 1;
        if advances.is_multiple_of(GLOBAL_VALIDATION_STRIDE) {
            validate_sigma_global(scene, t, sigma)?;
        }
        let b_next = b_minus(sigma)?;
        let step_norm = b_next.dist(&a_t);
        records.push(StepRecord {
            n: records.len(),
            x: a_t.clone(),
            a: a_t.clone(),
            b: b_next.clone(),
            x_next: b_next,
            pair: (0, 0),
            step_norm,
            dist_a: 0.0,
            dist_b: step_norm,
        });
        t = sigma;
    }

    cross_check_generic(scene, &records)?;

    let config = StoppingConfig { max_iter: steps, ..StoppingConfig::default() };
    let diagnostics = crate::engine::diagnose_records(&records, &StopReason::MaxIter, &config);
    Ok(SpiralRun {
        trajectory: Trajectory { records, stop_reason: StopReason::MaxIter, diagnostics },
        tk,
    })
}

fn validate_sigma_global(scene: &SpiralScene, t: f64, sigma: f64) -> Result<()> {
    let a_t = curve::shadow(t);
    let global = curve::project_onto_branch(SpiralSign::Minus, &a_t, scene.t_max);
    let best = global.params[0];
    if (best - sigma).abs() > 1e-9 {
        return Err(Error::CrossCheckFailed(format!(
            "step map gave sigma({t}) = {sigma}, global curve projection found {best}"
        )));
    }
    Ok(())
}

fn cross_check_generic(scene: &SpiralScene, records: &[StepRecord]) -> Result<()> {
    let n = records.len().min(CROSS_CHECK_STEPS);
    if n == 0 {
        return Ok(());
    }
    let (a, b) = scene.sets();
    let config = StoppingConfig {
        max_iter: n,
        cycle_max_period: 0,
        ..StoppingConfig::default()
    };
    let generic = dr_run(&a, &b, &records[0].x, &config, &SelectionPolicy::LowestIndex)?;
    for (spec, gen) in records.iter().take(n).zip(&generic.records) {
        let gap = spec.x_next.dist(&gen.x_next);
        if gap > CROSS_CHECK_TOL {
            return Err(Error::CrossCheckFailed(format!(
                "step {}: specialized iterate differs from generic engine by {gap}",
                spec.n
            )));
        }
    }
    Ok(())
}

/// Which alternating-projection pairing to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapVariant {
    /// Cylinder mantle versus the inner branch; reproduces the shadows of
    /// the DR sequence.
    InnerVsMantle,
    /// Solid cylinder versus the outer branch: one set convex, same
    /// non-convergence.
    OuterVsSolidCylinder,
}

/// Alternating projections on the spiral scene, starting at `b_s(t1)`.
pub fn map_spiral_run(
    scene: &SpiralScene,
    t1: f64,
    steps: usize,
    variant: MapVariant,
) -> Result<SpiralRun> {
    if !(t1 >= T_MIN) {
        return Err(Error::InvalidConfig(format!(
            "map_spiral_run requires t1 >= {T_MIN}, got {t1}"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidConfig("steps must be >= 1".into()));
    }
    let sign = match variant {
        MapVariant::InnerVsMantle => SpiralSign::Minus,
        MapVariant::OuterVsSolidCylinder => SpiralSign::Plus,
    };
    let mut records: Vec<StepRecord> = Vec::with_capacity(steps);
    let mut t = t1;
    let mut tk = vec![t1];
    while records.len() < steps {
        let x = branch_point(sign, t)?;
        let a_t = a_of_t(t)?;
        let sigma = next_sigma_signed(sign, t)?;
        if sigma >= scene.t_max {
            return Err(Error::InvalidConfig(format!(
                "parameter {sigma} passed the branch truncation {}",
                scene.t_max
            )));
        }
        let b_next = branch_point(sign, sigma)?;
        records.push(StepRecord {
            n: records.len(),
            x: x.clone(),
            a: a_t.clone(),
            b: b_next.clone(),
            x_next: b_next.clone(),
            pair: (0, 0),
            step_norm: b_next.dist(&x),
            dist_a: a_t.dist(&x),
            dist_b: b_next.dist(&a_t),
        });
        tk.push(sigma);
        t = sigma;
    }
    tk.truncate(records.len());

    let config = StoppingConfig { max_iter: steps, ..StoppingConfig::default() };
    let diagnostics = crate::engine::diagnose_records(&records, &StopReason::MaxIter, &config);
    Ok(SpiralRun {
        trajectory: Trajectory { records, stop_reason: StopReason::MaxIter, diagnostics },
        tk,
    })
}

/// One named check at one grid parameter.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub t: f64,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Batch verification report.
#[derive(Clone, Debug, Serialize)]
pub struct SpiralClaimsReport {
    pub checks: Vec<ClaimCheck>,
}

impl SpiralClaimsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&ClaimCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

const CLAIM_TOL: f64 = 1e-10;

/// Verify the analytic identities of the scene on a parameter grid:
/// shadow projections, the `e^-t` distance law, the branch-swap under
/// mantle reflection, forward motion and increment bound of the step map,
/// the inner-branch preference, base-circle distances, and derivative signs.
pub fn verify_claims(scene: &SpiralScene, t_grid: &[f64]) -> Result<SpiralClaimsReport> {
    let mantle = Piece::Nonconvex(NonconvexPrimitive::CylinderMantle);
    let base_circle = Piece::Nonconvex(NonconvexPrimitive::BaseCircle);
    let inner = Piece::Nonconvex(NonconvexPrimitive::SpiralBranch {
        sign: SpiralSign::Minus,
        t_max: scene.t_max,
    });
    let mut checks = Vec::new();
    let mut push = |t: f64, name: &'static str, err: f64, detail: String| {
        checks.push(ClaimCheck { t, name, passed: err <= CLAIM_TOL, detail });
    };

    for &t in t_grid {
        if !(t > 0.0 && t <= scene.t_max) {
            return Err(Error::InvalidConfig(format!(
                "grid parameter {t} outside (0, {}]",
                scene.t_max
            )));
        }
        let a_t = a_of_t(t)?;
        let e_t = (-t).exp();

        for (sign, label_proj, label_dist, label_refl) in [
            (SpiralSign::Plus, "shadow-projection-outer", "mantle-distance-outer", "reflection-swap-outer"),
            (SpiralSign::Minus, "shadow-projection-inner", "mantle-distance-inner", "reflection-swap-inner"),
        ] {
            let b_t = branch_point(sign, t)?;
            let proj = crate::pieces::project_piece(&mantle, &b_t)?;
            let err = proj.nearest[0].dist(&a_t);
            push(t, label_proj, err, format!("|P_A(b(t)) - a(t)| = {err:.3e}"));

            let err = (proj.distance - e_t).abs();
            push(t, label_dist, err, format!("|dist - e^-t| = {err:.3e}"));

            let other = branch_point(
                match sign {
                    SpiralSign::Plus => SpiralSign::Minus,
                    SpiralSign::Minus => SpiralSign::Plus,
                },
                t,
            )?;
            let refl = proj.nearest[0].reflect_through(&b_t);
            let err = refl.dist(&other);
            push(t, label_refl, err, format!("|R_A(b(t)) - b_other(t)| = {err:.3e}"));
        }

        // midpoint identity a(t) = (b_+(t) + b_-(t)) / 2
        let mid = b_plus(t)?.add(&b_minus(t)?).scale(0.5);
        let err = mid.dist(&a_t);
        push(t, "midpoint-identity", err, format!("|a - (b_+ + b_-)/2| = {err:.3e}"));

        // derivative of the half squared distance at the parameter itself
        for (sign, label) in
            [(SpiralSign::Minus, "derivative-at-t-inner"), (SpiralSign::Plus, "derivative-at-t-outer")]
        {
            let err = (d_derivative(sign, t, t) + (-2.0 * t).exp()).abs();
            push(t, label, err, format!("|d'(t) + e^-2t| = {err:.3e}"));
        }

        // forward motion and the increment bound
        let sigma = next_sigma(t)?;
        push(
            t,
            "sigma-forward",
            if sigma > t { 0.0 } else { f64::INFINITY },
            format!("sigma - t = {:.3e}", sigma - t),
        );
        let lhs = -((t - sigma) / 2.0).exp_m1();
        let rhs = (-t / 2.0).exp();
        let ok = lhs > 0.0 && lhs <= rhs + 1e-15;
        push(
            t,
            "increment-bound",
            if ok { 0.0 } else { f64::INFINITY },
            format!("1 - e^((t-sigma)/2) = {lhs:.3e}, e^(-t/2) = {rhs:.3e}"),
        );

        // the step map agrees with the global curve projection
        let global = curve::project_onto_branch(SpiralSign::Minus, &curve::shadow(t), scene.t_max);
        let err = (global.params[0] - sigma).abs();
        push(t, "sigma-vs-global-search", err, format!("|sigma - global| = {err:.3e}"));

        // inner preference: the union projection of a(t) onto B picks a
        // curve point of the inner branch, strictly below both the outer
        // branch and the base circle
        let inner_proj = crate::pieces::project_piece(&inner, &a_t)?;
        let curve_wins = inner_proj.nearest[0][2] > 0.0;
        push(
            t,
            "projection-avoids-base-circle",
            if curve_wins { 0.0 } else { f64::INFINITY },
            format!("nearest height = {:.3e}", inner_proj.nearest[0][2]),
        );
        let f_sigma = f_gap_closed(sigma, t);
        push(
            t,
            "inner-preference",
            if f_sigma > 0.0 { 0.0 } else { f64::INFINITY },
            format!("d_+(sigma) - d_-(sigma) = {f_sigma:.3e}"),
        );
        let d_in = a_t.dist(&b_minus(sigma)?);
        let d_out = a_t.dist(&b_plus(sigma)?);
        let err = (d_in - d_out).max(0.0);
        push(
            t,
            "inner-distance-not-larger",
            if d_in <= d_out + CLAIM_TOL { 0.0 } else { err },
            format!("d_in = {d_in:.6e}, d_out = {d_out:.6e}"),
        );

        // distance from the shadow to the base circle
        let err = (crate::pieces::project_piece(&base_circle, &a_t)?.distance
            - (-t / 2.0).exp())
        .abs();
        push(t, "base-circle-distance", err, format!("|dist(a, F) - e^(-t/2)| = {err:.3e}"));

        // positive curvature across the bracket for t >= 3
        if t >= 3.0 {
            let hi = bracket_hi(t);
            let mut min_dd = f64::INFINITY;
            for k in 0..=50 {
                let x = t + (hi - t) * k as f64 / 50.0;
                min_dd = min_dd
                    .min(d_second(SpiralSign::Minus, x, t))
                    .min(d_second(SpiralSign::Plus, x, t));
            }
            push(
                t,
                "second-derivative-positive",
                if min_dd > 0.0 { 0.0 } else { f64::INFINITY },
                format!("min d'' over bracket = {min_dd:.3e}"),
            );
        }
    }

    Ok(SpiralClaimsReport { checks })
}
