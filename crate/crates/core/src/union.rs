//! Finite unions of pieces, set-valued union projection, the active index
//! machinery, and the separation gaps that certify a radius of attraction.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::pieces::{project_piece, Piece, PieceProjection};
use crate::point::Point;

/// A closed set given as a finite, ordered union of pieces. Piece order is
/// part of the set description: deterministic selection policies break ties
/// by index.
#[derive(Clone, Debug)]
pub struct UnionSet {
    pieces: Vec<Piece>,
    dim: usize,
}

impl UnionSet {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidConfig("a union needs at least one piece".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        let dim = pieces[0].dim();
        for (i, p) in pieces.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::InvalidPiece(format!(
                    "piece {i} has dimension {} but the union is {dim}-dimensional",
                    p.dim()
                )));
            }
        }
        Ok(UnionSet { pieces, dim })
    }

    pub fn single(piece: Piece) -> Result<Self> {
        UnionSet::new(vec![piece])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_convex_union(&self) -> bool {
        self.pieces.iter().all(Piece::is_convex)
    }

    /// `dist(x, union)`.
    pub fn distance(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim)?;
        let mut best = f64::INFINITY;
        for p in &self.pieces {
            best = best.min(project_piece(p, x)?.distance);
        }
        Ok(best)
    }
}

/// One active piece of a union projection.
#[derive(Clone, Debug)]
pub struct UnionHit {
    pub piece: usize,
    pub projection: PieceProjection,
}

/// Set-valued projection onto a union: all pieces whose distance lies within
/// `tau_act` of the minimum, with their nearest points.
#[derive(Clone, Debug)]
pub struct UnionProjection {
    pub hits: Vec<UnionHit>,
    /// The exact minimum distance over all pieces.
    pub distance: f64,
}

impl UnionProjection {
    /// Canonical nearest point: first candidate of the lowest active index.
    pub fn canonical(&self) -> &Point {
        &self.hits[0].projection.nearest[0]
    }

    /// Flattened `(piece index, nearest point)` pairs in canonical order.
    pub fn flat(&self) -> Vec<(usize, &Point)> {
        self.hits
            .iter()
            .flat_map(|h| h.projection.nearest.iter().map(move |p| (h.piece, p)))
            .collect()
    }
}

/// Default activity tolerance: a relative band around the minimal distance,
/// wide enough to absorb f64 rounding but far below geometric feature sizes.
pub fn default_tau_act(distance: f64) -> f64 {
    1e-9 * (1.0 + distance)
}

/// Project `x` onto the union, returning every piece active within `tau_act`.
pub fn project_union(set: &UnionSet, x: &Point, tau_act: f64) -> Result<UnionProjection> {
    if tau_act < 0.0 {
        return Err(Error::InvalidConfig(format!("tau_act {tau_act} < 0")));
    }
    x.check_dim(set.dim())?;
    let projs: Vec<PieceProjection> = set
        .pieces
        .iter()
        .map(|p| project_piece(p, x))
        .collect::<Result<_>>()?;
    let distance = projs.iter().map(|p| p.distance).fold(f64::INFINITY, f64::min);
    let hits = projs
        .into_iter()
        .enumerate()
        .filter(|(_, p)| p.distance <= distance + tau_act)
        .map(|(piece, projection)| UnionHit { piece, projection })
        .collect();
    Ok(UnionProjection { hits, distance })
}

/// Same, with the default relative tolerance band.
pub fn project_union_auto(set: &UnionSet, x: &Point) -> Result<UnionProjection> {
    let distance = set.distance(x)?;
    project_union(set, x, default_tau_act(distance))
}

/// The set of active index pairs at a point: piece `i` of `A` attains
/// `dist(x, A)` and piece `j` of `B` attains `dist(R_{A_i}(x), B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivePairSet {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl ActivePairSet {
    pub fn is_subset_of(&self, other: &ActivePairSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.contains(&pair)
    }
}

/// Compute the active pairs at `x` with an explicit activity tolerance.
///
/// When a projection onto an active `A` piece is set-valued, each reflected
/// candidate is examined and the union of the resulting pairs is returned.
pub fn active_pairs(
    a: &UnionSet,
    b: &UnionSet,
    x: &Point,
    tau_act: f64,
) -> Result<ActivePairSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let a_proj = project_union(a, x, tau_act)?;
    let mut pairs = BTreeSet::new();
    for hit in &a_proj.hits {
        for cand in &hit.projection.nearest {
            let reflected = cand.reflect_through(x);
            let b_proj = project_union(b, &reflected, tau_act)?;
            for bh in &b_proj.hits {
                pairs.insert((hit.piece, bh.piece));
            }
        }
    }
    Ok(ActivePairSet { pairs })
}

/// Active pairs with the default relative tolerance derived from the
/// distances actually encountered.
pub fn active_pairs_auto(a: &UnionSet, b: &UnionSet, x: &Point) -> Result<ActivePairSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let da = a.distance(x)?;
    let a_proj = project_union(a, x, default_tau_act(da))?;
    let mut pairs = BTreeSet::new();
    for hit in &a_proj.hits {
        for cand in &hit.projection.nearest {
            let reflected = cand.reflect_through(x);
            let db = b.distance(&reflected)?;
            let b_proj = project_union(b, &reflected, default_tau_act(db))?;
            for bh in &b_proj.hits {
                pairs.insert((hit.piece, bh.piece));
            }
        }
    }
    Ok(ActivePairSet { pairs })
}

/// The two separation quantities certifying stability of the active set.
///
/// `delta1` separates inactive `A` pieces from the attained distance;
/// `delta2` separates, for each active `A` piece, the inactive `B` pieces
/// seen from the reflected point. Minima over empty index sets are `+inf`,
/// which reproduces global convergence in the purely convex case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparationGaps {
    pub delta1: f64,
    pub delta2: f64,
}

impl SeparationGaps {
    pub fn certified_radius(&self) -> f64 {
        0.5 * self.delta1.min(self.delta2)
    }
}

pub fn separation_gaps(a: &UnionSet, b: &UnionSet, x_star: &Point) -> Result<SeparationGaps> {
    let da = a.distance(x_star)?;
    let tau = default_tau_act(da);
    let a_proj = project_union(a, x_star, tau)?;
    let active_a: BTreeSet<usize> = a_proj.hits.iter().map(|h| h.piece).collect();
    let pairs = active_pairs(a, b, x_star, tau)?;

    let mut delta1 = f64::INFINITY;
    for (i, piece) in a.pieces().iter().enumerate() {
        if !active_a.contains(&i) {
            let d = project_piece(piece, x_star)?.distance;
            delta1 = delta1.min(d - da);
        }
    }

    let mut delta2 = f64::INFINITY;
    for hit in &a_proj.hits {
        // Canonical reflection: first nearest point when set-valued.
        let reflected = hit.projection.nearest[0].reflect_through(x_star);
        let db = b.distance(&reflected)?;
        for (j, piece) in b.pieces().iter().enumerate() {
            if !pairs.contains((hit.piece, j)) {
                let d = project_piece(piece, &reflected)?.distance;
                delta2 = delta2.min(d - db);
            }
        }
    }

    Ok(SeparationGaps { delta1, delta2 })
}
