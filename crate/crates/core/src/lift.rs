//! Product-space reformulation for feasibility over `m >= 2` sets: the
//! diagonal subspace meets the product set, and the two-set engine runs
//! unchanged in `R^(m d)`.

use serde::{Deserialize, Serialize};

use crate::engine::{dr_run, SelectionPolicy, StoppingConfig, Trajectory};
use crate::error::{Error, Result};
use crate::pieces::{ConvexPrimitive, Piece};
use crate::point::Point;
use crate::union::UnionSet;

/// Hard cap on the number of materialized product pieces.
pub const DEFAULT_TUPLE_CAP: usize = 10_000;

/// A feasibility problem over `m` sets lifted to product space.
#[derive(Clone, Debug)]
pub struct LiftedProblem {
    pub component_sets: Vec<UnionSet>,
    pub base_dimension: usize,
    pub diagonal: UnionSet,
    pub product: UnionSet,
}

impl LiftedProblem {
    pub fn m(&self) -> usize {
        self.component_sets.len()
    }

    pub fn lifted_dimension(&self) -> usize {
        self.m() * self.base_dimension
    }

    /// Replicate a base point across all blocks.
    pub fn replicate(&self, u: &Point) -> Result<Point> {
        u.check_dim(self.base_dimension)?;
        let mut coords = Vec::with_capacity(self.lifted_dimension());
        for _ in 0..self.m() {
            coords.extend_from_slice(u.coords());
        }
        Ok(Point::from_vec(coords))
    }

    /// Average of the blocks of a lifted point.
    pub fn block_average(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.lifted_dimension())?;
        let d = self.base_dimension;
        let mut avg = vec![0.0; d];
        for block in 0..self.m() {
            for k in 0..d {
                avg[k] += x[block * d + k];
            }
        }
        let m = self.m() as f64;
        Ok(Point::from_vec(avg.into_iter().map(|v| v / m).collect()))
    }

    /// Distance of a base point to each component set.
    pub fn residuals(&self, u: &Point) -> Result<Vec<f64>> {
        self.component_sets.iter().map(|c| c.distance(u)).collect()
    }
}

/// Build the diagonal set and the product set for the given components.
///
/// The diagonal is a single affine subspace spanned by replicated coordinate
/// directions. The product set is the union, over all piece-index tuples, of
/// product pieces; the tuples are materialized eagerly up to `tuple_cap`
/// (mixed-radix order, first component fastest-varying last).
pub fn lift(sets: &[UnionSet], tuple_cap: usize) -> Result<LiftedProblem> {
    if sets.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "lift needs at least 2 component sets, got {}",
            sets.len()
        )));
    }
    let d = sets[0].dim();
    for s in sets {
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: s.dim() });
        }
    }
    let m = sets.len();

    let tuple_count: usize = sets
        .iter()
        .map(UnionSet::len)
        .try_fold(1usize, |acc, n| acc.checked_mul(n))
        .ok_or(Error::TupleExplosion { count: usize::MAX, cap: tuple_cap })?;
    if tuple_count > tuple_cap {
        return Err(Error::TupleExplosion { count: tuple_count, cap: tuple_cap });
    }

    // Diagonal subspace: for each base coordinate, the replicated unit
    // direction scaled to unit norm.
    let scale = 1.0 / (m as f64).sqrt();
    let directions: Vec<Point> = (0..d)
        .map(|k| {
            let mut v = vec![0.0; m * d];
            for block in 0..m {
                v[block * d + k] = scale;
            }
            Point::from_vec(v)
        })
        .collect();
    let diagonal = UnionSet::single(Piece::Convex(ConvexPrimitive::AffineSubspace {
        base: Point::zeros(m * d),
        directions,
    }))?;

    // Product pieces over all index tuples.
    let mut pieces = Vec::with_capacity(tuple_count);
    let mut indices = vec![0usize; m];
    loop {
        let blocks: Vec<Piece> = indices
            .iter()
            .enumerate()
            .map(|(set, &piece)| sets[set].pieces()[piece].clone())
            .collect();
        pieces.push(Piece::Product(blocks));
        // mixed-radix increment, last component fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < sets[pos].len() {
                break;
            }
            indices[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if pos == usize::MAX {
            break;
        }
    }
    let product = UnionSet::new(pieces)?;

    Ok(LiftedProblem {
        component_sets: sets.to_vec(),
        base_dimension: d,
        diagonal,
        product,
    })
}

/// Decode a product piece index back into per-component piece indices.
pub fn decode_tuple(problem: &LiftedProblem, index: usize) -> Vec<usize> {
    let mut radices: Vec<usize> = problem.component_sets.iter().map(UnionSet::len).collect();
    let mut rem = index;
    let mut out = vec![0usize; radices.len()];
    while let Some(r) = radices.pop() {
        out[radices.len()] = rem % r;
        rem /= r;
    }
    out
}

/// Outcome of a lifted solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftedSolution {
    /// Block average of the final diagonal shadow: the candidate common
    /// point.
    pub candidate: Option<Point>,
    /// Distance of the candidate to each component set.
    pub residuals: Vec<f64>,
}

/// Run the DR iteration on the lifted pair and extract the candidate
/// feasible point from the diagonal shadow.
pub fn solve_lifted(
    problem: &LiftedProblem,
    x0: &Point,
    config: &StoppingConfig,
    policy: &SelectionPolicy,
) -> Result<(Trajectory, LiftedSolution)> {
    x0.check_dim(problem.lifted_dimension())?;
    let traj = dr_run(&problem.diagonal, &problem.product, x0, config, policy)?;
    let candidate = match traj.records.last() {
        Some(rec) => Some(problem.block_average(&rec.a)?),
        None => None,
    };
    let residuals = match &candidate {
        Some(u) => problem.residuals(u)?,
        None => Vec::new(),
    };
    Ok((traj, LiftedSolution { candidate, residuals }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::StopReason;
    use crate::pieces::project_piece;
    use crate::point::pt;
    use crate::rng::SplitMix64;

    fn halfplane(normal: &[f64], offset: f64) -> UnionSet {
        let n = pt(normal);
        let n = n.scale(1.0 / n.norm());
        UnionSet::single(Piece::Convex(ConvexPrimitive::Halfspace { normal: n, offset }))
            .unwrap()
    }

    fn xaxis() -> UnionSet {
        UnionSet::single(Piece::Convex(ConvexPrimitive::AffineSubspace {
            base: pt(&[0.0, 0.0]),
            directions: vec![pt(&[1.0, 0.0])],
        }))
        .unwrap()
    }

    #[test]
    fn two_copies_of_a_line() {
        let problem = lift(&[xaxis(), xaxis()], DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(problem.lifted_dimension(), 4);
        assert_eq!(problem.product.len(), 1);
        // diagonal projection is the replicated block average
        let x = pt(&[1.0, 2.0, 3.0, 4.0]);
        let proj =
            project_piece(&problem.diagonal.pieces()[0], &x).unwrap();
        assert!(proj.nearest[0].dist(&pt(&[2.0, 3.0, 2.0, 3.0])) < 1e-12);
    }

    #[test]
    fn tuple_counts_multiply() {
        let two = UnionSet::new(vec![
            Piece::Convex(ConvexPrimitive::Singleton { point: pt(&[0.0]) }),
            Piece::Convex(ConvexPrimitive::Singleton { point: pt(&[1.0]) }),
        ])
        .unwrap();
        let problem = lift(&[two.clone(), two.clone(), two.clone()], DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(problem.product.len(), 8);
        assert!(problem.product.is_convex_union());
        assert_eq!(decode_tuple(&problem, 0), vec![0, 0, 0]);
        assert_eq!(decode_tuple(&problem, 1), vec![0, 0, 1]);
        assert_eq!(decode_tuple(&problem, 6), vec![1, 1, 0]);

        assert!(matches!(
            lift(&[two.clone(), two.clone()], 3),
            Err(Error::TupleExplosion { count: 4, cap: 3 })
        ));
    }

    #[test]
    fn product_projection_decomposes_blockwise() {
        let c1 = halfplane(&[-1.0, 0.0], 1.0); // x >= -1
        let c2 = halfplane(&[0.0, -1.0], 1.0); // y >= -1
        let c3 = halfplane(&[1.0, 1.0], 2.0f64.sqrt()); // x + y <= 2
        let sets = [c1, c2, c3];
        let problem = lift(&sets, DEFAULT_TUPLE_CAP).unwrap();
        let mut rng = SplitMix64::new(8);
        for _ in 0..200 {
            let coords: Vec<f64> = (0..6).map(|_| rng.uniform(-6.0, 6.0)).collect();
            let x = Point::new(coords).unwrap();
            let proj = project_piece(&problem.product.pieces()[0], &x).unwrap();
            for (i, set) in sets.iter().enumerate() {
                let block = Point::new(x.coords()[2 * i..2 * i + 2].to_vec()).unwrap();
                let expected = project_piece(&set.pieces()[0], &block).unwrap();
                let got = Point::new(proj.nearest[0].coords()[2 * i..2 * i + 2].to_vec())
                    .unwrap();
                assert!(got.dist(&expected.nearest[0]) < 1e-12);
            }
        }
    }

    #[test]
    fn three_halfplanes_solve() {
        let sets = [
            halfplane(&[-1.0, 0.0], 1.0),
            halfplane(&[0.0, -1.0], 1.0),
            halfplane(&[1.0, 1.0], 2.0f64.sqrt()),
        ];
        let problem = lift(&sets, DEFAULT_TUPLE_CAP).unwrap();
        let mut rng = SplitMix64::new(12);
        for _ in 0..5 {
            let coords: Vec<f64> = (0..6).map(|_| rng.uniform(-10.0, 10.0)).collect();
            let x0 = Point::new(coords).unwrap();
            let (traj, sol) = solve_lifted(
                &problem,
                &x0,
                &StoppingConfig::default(),
                &SelectionPolicy::LowestIndex,
            )
            .unwrap();
            assert_eq!(traj.stop_reason, StopReason::Converged);
            let candidate = sol.candidate.unwrap();
            for r in &sol.residuals {
                assert!(*r <= 1e-8, "candidate {candidate} has residual {r}");
            }
        }
    }

    #[test]
    fn replicated_feasible_start_is_fixed() {
        let sets = [
            halfplane(&[-1.0, 0.0], 1.0),
            halfplane(&[0.0, -1.0], 1.0),
        ];
        let problem = lift(&sets, DEFAULT_TUPLE_CAP).unwrap();
        let x0 = problem.replicate(&pt(&[0.0, 0.0])).unwrap();
        let (traj, sol) = solve_lifted(
            &problem,
            &x0,
            &StoppingConfig::default(),
            &SelectionPolicy::LowestIndex,
        )
        .unwrap();
        assert_eq!(traj.stop_reason, StopReason::Converged);
        assert!(traj.records[0].step_norm == 0.0);
        assert!(sol.candidate.unwrap().dist(&pt(&[0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn infeasible_pair_reports_gap() {
        let sets = [
            UnionSet::single(Piece::Convex(ConvexPrimitive::Singleton {
                point: pt(&[0.0, 0.0]),
            }))
            .unwrap(),
            UnionSet::single(Piece::Convex(ConvexPrimitive::Singleton {
                point: pt(&[3.0, 0.0]),
            }))
            .unwrap(),
        ];
        let problem = lift(&sets, DEFAULT_TUPLE_CAP).unwrap();
        let x0 = problem.replicate(&pt(&[1.0, 1.0])).unwrap();
        let config = StoppingConfig { max_iter: 2000, ..Default::default() };
        let (traj, sol) =
            solve_lifted(&problem, &x0, &config, &SelectionPolicy::LowestIndex).unwrap();
        // no common point: the residuals cannot all vanish
        assert!(sol.residuals.iter().any(|r| *r > 0.1));
        assert!(traj.diagnostics.feasibility_gap > 0.1);
    }
}
