//! Geometric primitives with analytic nearest-point maps.
//!
//! Every primitive knows how to project an arbitrary point onto itself
//! exactly (up to floating point). Set-valued cases (sphere center, cylinder
//! axis, curve ties) return a canonical representative list with a
//! multiplicity flag so downstream selection stays deterministic.

use crate::curve::{self, SpiralSign};
use crate::error::{Error, Result};
use crate::point::Point;

/// Residual under which a point counts as a member of a piece. Scenarios are
/// O(1)-scaled and the formulas are analytic, so this leaves ample headroom
/// above f64 rounding.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Tolerance for validating stored unit vectors and orthonormal frames.
pub const FRAME_TOL: f64 = 1e-12;

/// Closed convex primitives.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexPrimitive {
    Singleton { point: Point },
    Segment { start: Point, end: Point },
    /// `base + span(directions)` with pairwise orthonormal directions.
    AffineSubspace { base: Point, directions: Vec<Point> },
    /// `{ y : <normal, y> <= offset }` with a unit normal.
    Halfspace { normal: Point, offset: f64 },
    /// Closed ball.
    Ball { center: Point, radius: f64 },
    /// Axis-aligned box, `lower <= upper` componentwise.
    Box { lower: Point, upper: Point },
}

/// Nonconvex primitives used by the scenario corpus.
#[derive(Clone, Debug, PartialEq)]
pub enum NonconvexPrimitive {
    /// Sphere surface (a circle when the ambient dimension is 2).
    Sphere { center: Point, radius: f64 },
    /// Lateral surface of the unit-radius cylinder of height `[0, 1]` around
    /// the third coordinate axis. Only valid in dimension 3.
    CylinderMantle,
    /// One branch of the double logarithmic spiral, `t in [0, t_max]`,
    /// together with the base circle it winds onto (the set is closed).
    /// Only valid in dimension 3.
    SpiralBranch { sign: SpiralSign, t_max: f64 },
    /// The unit circle in the plane `z = 0`. Only valid in dimension 3.
    BaseCircle,
}

/// A piece of a union: convex, nonconvex, or a product of lower-dimensional
/// pieces living on consecutive coordinate blocks.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Convex(ConvexPrimitive),
    Nonconvex(NonconvexPrimitive),
    Product(Vec<Piece>),
}

/// Result of projecting a point onto one piece.
#[derive(Clone, Debug)]
pub struct PieceProjection {
    /// Nearest points, canonical representative first.
    pub nearest: Vec<Point>,
    pub distance: f64,
    /// True when the nearest point is not unique (the list is then a
    /// canonical, not exhaustive, set of representatives).
    pub multiple: bool,
}

impl ConvexPrimitive {
    pub fn dim(&self) -> usize {
        match self {
            ConvexPrimitive::Singleton { point } => point.dim(),
            ConvexPrimitive::Segment { start, .. } => start.dim(),
            ConvexPrimitive::AffineSubspace { base, .. } => base.dim(),
            ConvexPrimitive::Halfspace { normal, .. } => normal.dim(),
            ConvexPrimitive::Ball { center, .. } => center.dim(),
            ConvexPrimitive::Box { lower, .. } => lower.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexPrimitive::Singleton { .. } => Ok(()),
            ConvexPrimitive::Segment { start, end } => {
                end.check_dim(start.dim())?;
                Ok(())
            }
            ConvexPrimitive::AffineSubspace { base, directions } => {
                for (i, d) in directions.iter().enumerate() {
                    d.check_dim(base.dim())?;
                    if (d.norm() - 1.0).abs() > FRAME_TOL {
                        return Err(Error::InvalidPiece(format!(
                            "affine direction {i} is not unit length (norm {})",
                            d.norm()
                        )));
                    }
                    for (j, e) in directions.iter().enumerate().take(i) {
                        if d.dot(e).abs() > FRAME_TOL {
                            return Err(Error::InvalidPiece(format!(
                                "affine directions {j} and {i} are not orthogonal"
                            )));
                        }
                    }
                }
                Ok(())
            }
            ConvexPrimitive::Halfspace { normal, .. } => {
                if (normal.norm() - 1.0).abs() > FRAME_TOL {
                    return Err(Error::InvalidPiece(format!(
                        "halfspace normal is not unit length (norm {})",
                        normal.norm()
                    )));
                }
                Ok(())
            }
            ConvexPrimitive::Ball { radius, .. } => {
                if !radius.is_finite() || *radius < 0.0 {
                    return Err(Error::InvalidPiece(format!("ball radius {radius} < 0")));
                }
                Ok(())
            }
            ConvexPrimitive::Box { lower, upper } => {
                upper.check_dim(lower.dim())?;
                for k in 0..lower.dim() {
                    if lower[k] > upper[k] {
                        return Err(Error::InvalidPiece(format!(
                            "box lower[{k}] = {} exceeds upper[{k}] = {}",
                            lower[k], upper[k]
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    fn project(&self, x: &Point) -> PieceProjection {
        match self {
            ConvexPrimitive::Singleton { point } => single(point.clone(), x),
            ConvexPrimitive::Segment { start, end } => {
                let ab = end.sub(start);
                let sq = ab.dot(&ab);
                let p = if sq == 0.0 {
                    start.clone()
                } else {
                    let u = (x.sub(start).dot(&ab) / sq).clamp(0.0, 1.0);
                    start.add_scaled(u, &ab)
                };
                single(p, x)
            }
            ConvexPrimitive::AffineSubspace { base, directions } => {
                let rel = x.sub(base);
                let mut p = base.clone();
                for d in directions {
                    p = p.add_scaled(rel.dot(d), d);
                }
                single(p, x)
            }
            ConvexPrimitive::Halfspace { normal, offset } => {
                let excess = normal.dot(x) - offset;
                let p = if excess <= 0.0 { x.clone() } else { x.add_scaled(-excess, normal) };
                single(p, x)
            }
            ConvexPrimitive::Ball { center, radius } => {
                let rel = x.sub(center);
                let n = rel.norm();
                let p = if n <= *radius {
                    x.clone()
                } else {
                    center.add_scaled(radius / n, &rel)
                };
                single(p, x)
            }
            ConvexPrimitive::Box { lower, upper } => {
                let coords = (0..lower.dim())
                    .map(|k| x[k].clamp(lower[k], upper[k]))
                    .collect();
                single(Point::from_vec(coords), x)
            }
        }
    }
}

impl NonconvexPrimitive {
    pub fn dim(&self) -> usize {
        match self {
            NonconvexPrimitive::Sphere { center, .. } => center.dim(),
            _ => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NonconvexPrimitive::Sphere { radius, .. } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidPiece(format!("sphere radius {radius} <= 0")));
                }
                Ok(())
            }
            NonconvexPrimitive::CylinderMantle | NonconvexPrimitive::BaseCircle => Ok(()),
            NonconvexPrimitive::SpiralBranch { t_max, .. } => {
                if !t_max.is_finite() || *t_max <= 0.0 {
                    return Err(Error::InvalidPiece(format!(
                        "spiral branch t_max {t_max} must be positive"
                    )));
                }
                Ok(())
            }
        }
    }

    fn project(&self, x: &Point) -> PieceProjection {
        match self {
            NonconvexPrimitive::Sphere { center, radius } => {
                let rel = x.sub(center);
                let n = rel.norm();
                if n == 0.0 {
                    // Degenerate: every surface point is nearest. Canonical
                    // representative along the first coordinate axis.
                    let mut c = center.clone().into_coords();
                    c[0] += radius;
                    PieceProjection {
                        nearest: vec![Point::from_vec(c)],
                        distance: *radius,
                        multiple: true,
                    }
                } else {
                    single(center.add_scaled(radius / n, &rel), x)
                }
            }
            NonconvexPrimitive::CylinderMantle => {
                let (p, multiple) = mantle_nearest(x.coords());
                let p = Point::from_vec(p.to_vec());
                let distance = p.dist(x);
                PieceProjection { nearest: vec![p], distance, multiple }
            }
            NonconvexPrimitive::BaseCircle => {
                let c = x.coords();
                let rho = c[0].hypot(c[1]);
                if rho == 0.0 {
                    PieceProjection {
                        nearest: vec![Point::from_vec(vec![1.0, 0.0, 0.0])],
                        distance: (1.0 + c[2] * c[2]).sqrt(),
                        multiple: true,
                    }
                } else {
                    single(Point::from_vec(vec![c[0] / rho, c[1] / rho, 0.0]), x)
                }
            }
            NonconvexPrimitive::SpiralBranch { sign, t_max } => {
                let curve_proj = curve::project_onto_branch(*sign, x.coords(), *t_max);
                let circle = NonconvexPrimitive::BaseCircle.project(x);
                // The branch is the closed curve segment together with the
                // base circle; keep whichever is nearer, both on a tie.
                if circle.distance < curve_proj.distance - curve::TIE_TOL {
                    circle
                } else if curve_proj.distance < circle.distance - curve::TIE_TOL {
                    let nearest: Vec<Point> = curve_proj
                        .params
                        .iter()
                        .map(|&t| Point::from_vec(curve::branch(*sign, t).to_vec()))
                        .collect();
                    let multiple = nearest.len() > 1;
                    PieceProjection { nearest, distance: curve_proj.distance, multiple }
                } else {
                    let mut nearest: Vec<Point> = curve_proj
                        .params
                        .iter()
                        .map(|&t| Point::from_vec(curve::branch(*sign, t).to_vec()))
                        .collect();
                    nearest.extend(circle.nearest);
                    PieceProjection {
                        nearest,
                        distance: curve_proj.distance.min(circle.distance),
                        multiple: true,
                    }
                }
            }
        }
    }
}

/// Nearest mantle point and whether it was degenerate (point on the axis).
fn mantle_nearest(c: &[f64]) -> ([f64; 3], bool) {
    let rho = c[0].hypot(c[1]);
    let h = c[2].clamp(0.0, 1.0);
    if rho == 0.0 {
        ([1.0, 0.0, h], true)
    } else {
        ([c[0] / rho, c[1] / rho, h], false)
    }
}

impl Piece {
    pub fn convex(p: ConvexPrimitive) -> Piece {
        Piece::Convex(p)
    }

    pub fn nonconvex(p: NonconvexPrimitive) -> Piece {
        Piece::Nonconvex(p)
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Piece::Convex(_) => true,
            Piece::Nonconvex(_) => false,
            Piece::Product(blocks) => blocks.iter().all(Piece::is_convex),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Piece::Convex(p) => p.dim(),
            Piece::Nonconvex(p) => p.dim(),
            Piece::Product(blocks) => blocks.iter().map(Piece::dim).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Piece::Convex(p) => p.validate(),
            Piece::Nonconvex(p) => p.validate(),
            Piece::Product(blocks) => {
                if blocks.is_empty() {
                    return Err(Error::InvalidPiece("product piece has no blocks".into()));
                }
                blocks.iter().try_for_each(Piece::validate)
            }
        }
    }
}

/// Exact set of minimizers of `||x - a||` over the piece.
///
/// Degenerate inputs (sphere center, cylinder axis, curve ties) yield a
/// canonical representative list with `multiple = true`.
pub fn project_piece(piece: &Piece, x: &Point) -> Result<PieceProjection> {
    piece.validate()?;
    x.check_dim(piece.dim())?;
    Ok(project_unchecked(piece, x))
}

fn project_unchecked(piece: &Piece, x: &Point) -> PieceProjection {
    match piece {
        Piece::Convex(p) => p.project(x),
        Piece::Nonconvex(p) => p.project(x),
        Piece::Product(blocks) => {
            let mut offset = 0;
            let mut block_projs = Vec::with_capacity(blocks.len());
            let mut sq = 0.0;
            for b in blocks {
                let d = b.dim();
                let sub = Point::from_vec(x.coords()[offset..offset + d].to_vec());
                let proj = project_unchecked(b, &sub);
                sq += proj.distance * proj.distance;
                block_projs.push(proj);
                offset += d;
            }
            // Cartesian combination of the per-block nearest lists.
            let mut combos: Vec<Vec<f64>> = vec![Vec::with_capacity(x.dim())];
            let mut multiple = false;
            for proj in &block_projs {
                multiple |= proj.multiple;
                let mut next = Vec::with_capacity(combos.len() * proj.nearest.len());
                for prefix in &combos {
                    for cand in &proj.nearest {
                        let mut v = prefix.clone();
                        v.extend_from_slice(cand.coords());
                        next.push(v);
                    }
                }
                combos = next;
            }
            PieceProjection {
                nearest: combos.into_iter().map(Point::from_vec).collect(),
                distance: sq.sqrt(),
                multiple,
            }
        }
    }
}

/// Reflections `2p - x` over every nearest point `p`.
pub fn reflect_piece(piece: &Piece, x: &Point) -> Result<Vec<Point>> {
    let proj = project_piece(piece, x)?;
    Ok(proj.nearest.iter().map(|p| p.reflect_through(x)).collect())
}

/// `dist(x, piece)`.
pub fn dist_piece(piece: &Piece, x: &Point) -> Result<f64> {
    Ok(project_piece(piece, x)?.distance)
}

/// Membership test at `MEMBERSHIP_TOL`.
pub fn piece_contains(piece: &Piece, x: &Point) -> Result<bool> {
    Ok(dist_piece(piece, x)? <= MEMBERSHIP_TOL)
}

fn single(p: Point, x: &Point) -> PieceProjection {
    let distance = p.dist(x);
    PieceProjection { nearest: vec![p], distance, multiple: false }
}
