//! Fixed-point classification, certified and sampled radius of attraction,
//! and accumulation-set analysis for limit-cycle trajectories.

use serde::{Deserialize, Serialize};

use crate::engine::dr_branches;
use crate::error::{Error, Result};
use crate::pieces::{NonconvexPrimitive, Piece};
use crate::point::Point;
use crate::rng::SplitMix64;
use crate::union::{active_pairs_auto, separation_gaps, UnionSet};

/// Tolerance for deciding whether an image point coincides with the input.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixStatus {
    NotFixed,
    /// `x` lies in its own image, but other branches move away from it.
    Fixed,
    /// The image is exactly `{x}`: every branch certifies feasibility.
    StrongFixed,
}

/// Classification of a point under the set-valued step operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixClassification {
    pub status: FixStatus,
    /// The full image `T(x)`, deduplicated.
    pub image: Vec<Point>,
    /// Shadow / reflected-shadow pair of every branch.
    pub witness_pairs: Vec<(Point, Point)>,
}

impl FixClassification {
    pub fn is_fixed(&self) -> bool {
        self.status != FixStatus::NotFixed
    }
}

/// Classify `x` by enumerating every branch of the operator at `x`.
pub fn classify_fixed_point(
    a: &UnionSet,
    b: &UnionSet,
    x: &Point,
) -> Result<FixClassification> {
    let branches = dr_branches(a, b, x)?;
    let mut image: Vec<Point> = Vec::new();
    let mut witness_pairs = Vec::with_capacity(branches.len());
    for br in &branches {
        if !image.iter().any(|p| p.dist(&br.x_next) <= 1e-12) {
            image.push(br.x_next.clone());
        }
        witness_pairs.push((br.a.clone(), br.b.clone()));
    }
    let all_fixed = image.iter().all(|p| p.dist(x) <= CLASSIFY_TOL);
    let any_fixed = image.iter().any(|p| p.dist(x) <= CLASSIFY_TOL);
    let status = if all_fixed {
        FixStatus::StrongFixed
    } else if any_fixed {
        FixStatus::Fixed
    } else {
        FixStatus::NotFixed
    };
    Ok(FixClassification { status, image, witness_pairs })
}

/// Certified lower bound on the radius of attraction around a strong fixed
/// point: half the smaller separation gap, `+inf` when both gaps are empty
/// minima (the purely convex case).
pub fn radius_certified(a: &UnionSet, b: &UnionSet, x_star: &Point) -> Result<f64> {
    let class = classify_fixed_point(a, b, x_star)?;
    if class.status != FixStatus::StrongFixed {
        return Err(Error::NotStrongFixedPoint {
            op: "radius_certified",
            found: format!("{:?}", class.status),
        });
    }
    Ok(separation_gaps(a, b, x_star)?.certified_radius())
}

/// Result of the sampled radius estimate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// Certified lower bound, when the point is a strong fixed point.
    pub certified_lower: Option<f64>,
    /// Largest ball radius that passed the sampled inclusion test. A
    /// one-sided statistical check: the true radius is defined by an
    /// inclusion over *all* points of the ball, so the estimate can only
    /// overshoot it, never certify it.
    pub sampled: f64,
    pub samples_per_level: usize,
    pub bisection_steps: usize,
}

/// Bisect on `eps` for the largest ball around `x_star` whose sampled points
/// all keep their active pairs inside the active pairs of `x_star`.
///
/// Each level draws `samples` points, alternating between uniform draws from
/// the ball interior and uniform draws from its boundary sphere. Violations
/// of the inclusion appear first in thin caps at the boundary, whose interior
/// measure vanishes like the 3/2 power of the overshoot; boundary draws see
/// them at the 1/2 power and keep the estimate sharp. Every sample has its
/// own generator derived from `(seed, level, index)`, so evaluation order
/// cannot change the outcome.
pub fn radius_sampled(
    a: &UnionSet,
    b: &UnionSet,
    x_star: &Point,
    eps_hi: f64,
    samples: usize,
    steps: usize,
    seed: u64,
) -> Result<RadiusEstimate> {
    if !(eps_hi > 0.0) {
        return Err(Error::InvalidConfig(format!("eps_hi {eps_hi} must be > 0")));
    }
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be >= 1".into()));
    }
    let reference = active_pairs_auto(a, b, x_star)?;
    let certified_lower = match radius_certified(a, b, x_star) {
        Ok(r) => Some(r),
        Err(Error::NotStrongFixedPoint { .. }) => None,
        Err(e) => return Err(e),
    };

    let level_passes = |eps: f64, level: u64| -> Result<bool> {
        for i in 0..samples {
            let mut rng = SplitMix64::derive(seed, (level << 32) | i as u64);
            let x = if i % 2 == 0 {
                rng.uniform_in_ball(x_star, eps)
            } else {
                rng.uniform_on_sphere(x_star, eps)
            };
            let pairs = active_pairs_auto(a, b, &x)?;
            if !pairs.is_subset_of(&reference) {
                return Ok(false);
            }
        }
        Ok(true)
    };

    if level_passes(eps_hi, 0)? {
        return Ok(RadiusEstimate {
            certified_lower,
            sampled: eps_hi,
            samples_per_level: samples,
            bisection_steps: steps,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = eps_hi;
    for level in 1..=steps {
        let mid = 0.5 * (lo + hi);
        if level_passes(mid, level as u64)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RadiusEstimate {
        certified_lower,
        sampled: lo,
        samples_per_level: samples,
        bisection_steps: steps,
    })
}

/// Coverage of a circle-shaped target by the tail of a trajectory.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoverageReport {
    /// Max over target samples of the distance to the nearest tail point.
    pub max_min_distance: f64,
    /// Largest angular arc of the target containing no tail point's angular
    /// projection, in radians.
    pub coverage_gap: f64,
}

/// Measure how densely a trajectory tail accumulates on a circular target:
/// either the base circle in 3D or a `Sphere` piece in dimension 2.
pub fn accumulation_analysis(
    tail: &[Point],
    target: &Piece,
    angle_bins: usize,
) -> Result<CoverageReport> {
    if tail.is_empty() {
        return Err(Error::InvalidConfig("tail must be nonempty".into()));
    }
    if angle_bins == 0 {
        return Err(Error::InvalidConfig("angle_bins must be >= 1".into()));
    }
    let sample_at: Box<dyn Fn(f64) -> Point> = match target {
        Piece::Nonconvex(NonconvexPrimitive::BaseCircle) => {
            Box::new(|th: f64| Point::from_vec(vec![th.cos(), th.sin(), 0.0]))
        }
        Piece::Nonconvex(NonconvexPrimitive::Sphere { center, radius }) if center.dim() == 2 => {
            let (c, r) = (center.clone(), *radius);
            Box::new(move |th: f64| {
                Point::from_vec(vec![c[0] + r * th.cos(), c[1] + r * th.sin()])
            })
        }
        _ => {
            return Err(Error::InvalidConfig(
                "accumulation target must be the base circle or a planar sphere".into(),
            ))
        }
    };
    let center: Vec<f64> = match target {
        Piece::Nonconvex(NonconvexPrimitive::Sphere { center, .. }) => {
            center.coords().to_vec()
        }
        _ => vec![0.0, 0.0],
    };

    let tau = std::f64::consts::TAU;
    let mut max_min = 0.0f64;
    for k in 0..angle_bins {
        let th = tau * k as f64 / angle_bins as f64;
        let s = sample_at(th);
        let mut min_d = f64::INFINITY;
        for p in tail {
            min_d = min_d.min(p.dist(&s));
        }
        max_min = max_min.max(min_d);
    }

    let mut angles: Vec<f64> = tail
        .iter()
        .filter_map(|p| {
            let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
            (dx.hypot(dy) > 1e-12).then(|| dy.atan2(dx).rem_euclid(tau))
        })
        .collect();
    let coverage_gap = if angles.is_empty() {
        tau
    } else {
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut gap = angles[0] + tau - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        gap
    };

    Ok(CoverageReport { max_min_distance: max_min, coverage_gap })
}
