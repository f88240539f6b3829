//! Scenario ingestion: a JSON schema for problems, starts, policies and
//! analysis requests, plus the built-in scenario corpus.

use serde::{Deserialize, Serialize};

use crate::curve::SpiralSign;
use crate::engine::{SelectionPolicy, StoppingConfig};
use crate::error::{Error, Result};
use crate::lift::{lift, LiftedProblem, DEFAULT_TUPLE_CAP};
use crate::pieces::{ConvexPrimitive, NonconvexPrimitive, Piece};
use crate::point::Point;
use crate::rng::SplitMix64;
use crate::spiral::{MapVariant, SpiralScene};
use crate::union::UnionSet;

/// Serialized form of a piece.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum PieceSpec {
    Singleton { point: Vec<f64> },
    Segment { start: Vec<f64>, end: Vec<f64> },
    AffineSubspace { base: Vec<f64>, directions: Vec<Vec<f64>> },
    Halfspace { normal: Vec<f64>, offset: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Sphere { center: Vec<f64>, radius: f64 },
    CylinderMantle,
    SpiralBranch { sign: SpiralSign, t_max: f64 },
    BaseCircle,
    Product { blocks: Vec<PieceSpec> },
}

impl PieceSpec {
    pub fn to_piece(&self) -> Result<Piece> {
        let p = |v: &Vec<f64>| Point::new(v.clone());
        Ok(match self {
            PieceSpec::Singleton { point } => {
                Piece::Convex(ConvexPrimitive::Singleton { point: p(point)? })
            }
            PieceSpec::Segment { start, end } => {
                Piece::Convex(ConvexPrimitive::Segment { start: p(start)?, end: p(end)? })
            }
            PieceSpec::AffineSubspace { base, directions } => {
                Piece::Convex(ConvexPrimitive::AffineSubspace {
                    base: p(base)?,
                    directions: directions.iter().map(|d| Point::new(d.clone())).collect::<Result<_>>()?,
                })
            }
            PieceSpec::Halfspace { normal, offset } => {
                Piece::Convex(ConvexPrimitive::Halfspace { normal: p(normal)?, offset: *offset })
            }
            PieceSpec::Ball { center, radius } => {
                Piece::Convex(ConvexPrimitive::Ball { center: p(center)?, radius: *radius })
            }
            PieceSpec::Box { lower, upper } => {
                Piece::Convex(ConvexPrimitive::Box { lower: p(lower)?, upper: p(upper)? })
            }
            PieceSpec::Sphere { center, radius } => {
                Piece::Nonconvex(NonconvexPrimitive::Sphere { center: p(center)?, radius: *radius })
            }
            PieceSpec::CylinderMantle => Piece::Nonconvex(NonconvexPrimitive::CylinderMantle),
            PieceSpec::SpiralBranch { sign, t_max } => {
                Piece::Nonconvex(NonconvexPrimitive::SpiralBranch { sign: *sign, t_max: *t_max })
            }
            PieceSpec::BaseCircle => Piece::Nonconvex(NonconvexPrimitive::BaseCircle),
            PieceSpec::Product { blocks } => {
                Piece::Product(blocks.iter().map(PieceSpec::to_piece).collect::<Result<_>>()?)
            }
        })
    }

    pub fn from_piece(piece: &Piece) -> PieceSpec {
        let v = |p: &Point| p.coords().to_vec();
        match piece {
            Piece::Convex(ConvexPrimitive::Singleton { point }) => {
                PieceSpec::Singleton { point: v(point) }
            }
            Piece::Convex(ConvexPrimitive::Segment { start, end }) => {
                PieceSpec::Segment { start: v(start), end: v(end) }
            }
            Piece::Convex(ConvexPrimitive::AffineSubspace { base, directions }) => {
                PieceSpec::AffineSubspace {
                    base: v(base),
                    directions: directions.iter().map(v).collect(),
                }
            }
            Piece::Convex(ConvexPrimitive::Halfspace { normal, offset }) => {
                PieceSpec::Halfspace { normal: v(normal), offset: *offset }
            }
            Piece::Convex(ConvexPrimitive::Ball { center, radius }) => {
                PieceSpec::Ball { center: v(center), radius: *radius }
            }
            Piece::Convex(ConvexPrimitive::Box { lower, upper }) => {
                PieceSpec::Box { lower: v(lower), upper: v(upper) }
            }
            Piece::Nonconvex(NonconvexPrimitive::Sphere { center, radius }) => {
                PieceSpec::Sphere { center: v(center), radius: *radius }
            }
            Piece::Nonconvex(NonconvexPrimitive::CylinderMantle) => PieceSpec::CylinderMantle,
            Piece::Nonconvex(NonconvexPrimitive::SpiralBranch { sign, t_max }) => {
                PieceSpec::SpiralBranch { sign: *sign, t_max: *t_max }
            }
            Piece::Nonconvex(NonconvexPrimitive::BaseCircle) => PieceSpec::BaseCircle,
            Piece::Product(blocks) => {
                PieceSpec::Product { blocks: blocks.iter().map(PieceSpec::from_piece).collect() }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnionSetSpec {
    pub pieces: Vec<PieceSpec>,
}

impl UnionSetSpec {
    pub fn to_set(&self) -> Result<UnionSet> {
        UnionSet::new(self.pieces.iter().map(PieceSpec::to_piece).collect::<Result<_>>()?)
    }

    pub fn from_set(set: &UnionSet) -> UnionSetSpec {
        UnionSetSpec { pieces: set.pieces().iter().map(PieceSpec::from_piece).collect() }
    }
}

/// Where a run starts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum StartSpec {
    Point(Vec<f64>),
    /// One uniform draw from the closed ball, reproducible by seed.
    Ball { center: Vec<f64>, radius: f64, seed: u64 },
}

impl StartSpec {
    pub fn resolve(&self) -> Result<Point> {
        match self {
            StartSpec::Point(point) => Point::new(point.clone()),
            StartSpec::Ball { center, radius, seed } => {
                let c = Point::new(center.clone())?;
                if !(radius >= &0.0) {
                    return Err(Error::Scenario(format!("start ball radius {radius} < 0")));
                }
                Ok(SplitMix64::new(*seed).uniform_in_ball(&c, *radius))
            }
        }
    }
}

/// Which iteration to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[default]
    Dr,
    Map,
}

/// Specialized runner request (set by the spiral built-ins; the generic
/// engine handles everything else).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpecialRun {
    SpiralDr { t1: f64 },
    SpiralMap { t1: f64, variant: MapVariant },
}

/// Post-run analysis requests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum AnalysisRequest {
    Classify {
        at: Vec<f64>,
    },
    Radius {
        at: Vec<f64>,
        #[serde(default = "default_eps_hi")]
        eps_hi: f64,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_bisection_steps")]
        bisection_steps: usize,
    },
    Accumulation {
        #[serde(default = "default_angle_bins")]
        angle_bins: usize,
    },
    VerifySpiral {
        #[serde(default = "default_grid_start")]
        grid_start: f64,
        #[serde(default = "default_grid_stop")]
        grid_stop: f64,
        #[serde(default = "default_grid_step")]
        grid_step: f64,
    },
}

fn default_eps_hi() -> f64 {
    2.0
}
fn default_samples() -> usize {
    2000
}
fn default_bisection_steps() -> usize {
    30
}
fn default_angle_bins() -> usize {
    360
}
fn default_grid_start() -> f64 {
    0.5
}
fn default_grid_stop() -> f64 {
    12.0
}
fn default_grid_step() -> f64 {
    0.5
}

/// A fully described scenario. Either `set_a`/`set_b` or `lift` must be
/// present, not both.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_a: Option<UnionSetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_b: Option<UnionSetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<Vec<UnionSetSpec>>,
    pub start: StartSpec,
    #[serde(default)]
    pub algorithm: Algorithm,
    #[serde(default)]
    pub policy: SelectionPolicy,
    #[serde(default)]
    pub stopping: StoppingConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub analysis: Vec<AnalysisRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special: Option<SpecialRun>,
}

/// The concrete problem a scenario describes.
pub enum BuiltProblem {
    TwoSets { a: UnionSet, b: UnionSet },
    Lifted(Box<LiftedProblem>),
}

impl BuiltProblem {
    pub fn sets(&self) -> (&UnionSet, &UnionSet) {
        match self {
            BuiltProblem::TwoSets { a, b } => (a, b),
            BuiltProblem::Lifted(p) => (&p.diagonal, &p.product),
        }
    }
}

impl Scenario {
    /// Validate the cross-field constraints and materialize the sets.
    pub fn build(&self) -> Result<BuiltProblem> {
        match (&self.set_a, &self.set_b, &self.lift) {
            (Some(a), Some(b), None) => {
                let a = a.to_set()?;
                let b = b.to_set()?;
                if a.dim() != self.dimension || b.dim() != self.dimension {
                    return Err(Error::Scenario(format!(
                        "sets have dimension {}/{} but the scenario declares {}",
                        a.dim(),
                        b.dim(),
                        self.dimension
                    )));
                }
                Ok(BuiltProblem::TwoSets { a, b })
            }
            (None, None, Some(components)) => {
                let sets: Vec<UnionSet> =
                    components.iter().map(UnionSetSpec::to_set).collect::<Result<_>>()?;
                for s in &sets {
                    if s.dim() != self.dimension {
                        return Err(Error::Scenario(format!(
                            "lift component has dimension {} but the scenario declares {}",
                            s.dim(),
                            self.dimension
                        )));
                    }
                }
                Ok(BuiltProblem::Lifted(Box::new(lift(&sets, DEFAULT_TUPLE_CAP)?)))
            }
            _ => Err(Error::Scenario(
                "a scenario needs either set_a and set_b, or lift, and not both".into(),
            )),
        }
    }

    /// The start point in the space the engine actually iterates in (lifted
    /// scenarios replicate a base-space start across blocks).
    pub fn start_point(&self, problem: &BuiltProblem) -> Result<Point> {
        let raw = self.start.resolve()?;
        match problem {
            BuiltProblem::TwoSets { a, .. } => {
                raw.check_dim(a.dim())?;
                Ok(raw)
            }
            BuiltProblem::Lifted(p) => {
                if raw.dim() == p.lifted_dimension() {
                    Ok(raw)
                } else {
                    p.replicate(&raw)
                }
            }
        }
    }
}

/// Parse a scenario document, rejecting unknown fields. Syntax errors carry
/// line/column positions; semantic errors name the offending field.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario =
        serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
    scenario.build()?;
    Ok(scenario)
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(scenario).expect("scenario serializes")
}

/// Tunable parameters of the built-in corpus.
#[derive(Clone, Copy, Debug)]
pub struct BuiltinParams {
    /// Vertical offset of the discrete-cycle scene.
    pub eta: f64,
    /// Axes-line fixed points `(x*, 0)` and `(0, y*)`.
    pub x_star: f64,
    pub y_star: f64,
    /// Starting parameter of the spiral runs.
    pub t1: f64,
    pub t_max: f64,
    pub seed: u64,
}

impl Default for BuiltinParams {
    fn default() -> Self {
        BuiltinParams { eta: 1.0, x_star: 1.0, y_star: 2.0, t1: 1.0, t_max: 40.0, seed: 1 }
    }
}

pub const BUILTIN_NAMES: &[&str] = &[
    "axes-line",
    "discrete-cycle",
    "two-lines",
    "weak-fixed-1d",
    "two-circles",
    "spiral",
    "spiral-map-inner",
    "spiral-map-outer",
    "three-halfplanes",
];

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn line_spec(base: &[f64], dir: &[f64]) -> PieceSpec {
    PieceSpec::AffineSubspace { base: base.to_vec(), directions: vec![unit(dir)] }
}

/// Construct a built-in scenario by name.
pub fn builtin_scenario(name: &str, params: &BuiltinParams) -> Result<Scenario> {
    let p = params;
    let scenario = match name {
        "axes-line" => Scenario {
            name: name.into(),
            dimension: 2,
            set_a: Some(UnionSetSpec {
                pieces: vec![line_spec(&[0.0, 0.0], &[1.0, 0.0]), line_spec(&[0.0, 0.0], &[0.0, 1.0])],
            }),
            set_b: Some(UnionSetSpec {
                pieces: vec![line_spec(&[p.x_star, 0.0], &[-p.x_star, p.y_star])],
            }),
            lift: None,
            start: StartSpec::Ball { center: vec![p.x_star, 0.0], radius: 0.49, seed: p.seed },
            algorithm: Algorithm::Dr,
            policy: SelectionPolicy::LowestIndex,
            stopping: StoppingConfig { max_iter: 10_000, ..Default::default() },
            analysis: vec![
                AnalysisRequest::Classify { at: vec![p.x_star, 0.0] },
                AnalysisRequest::Radius {
                    at: vec![p.x_star, 0.0],
                    eps_hi: default_eps_hi(),
                    samples: default_samples(),
                    bisection_steps: default_bisection_steps(),
                },
                AnalysisRequest::Classify { at: vec![0.0, p.y_star] },
                AnalysisRequest::Radius {
                    at: vec![0.0, p.y_star],
                    eps_hi: default_eps_hi(),
                    samples: default_samples(),
                    bisection_steps: default_bisection_steps(),
                },
            ],
            special: None,
        },
        "discrete-cycle" => Scenario {
            name: name.into(),
            dimension: 2,
            set_a: Some(UnionSetSpec { pieces: vec![line_spec(&[0.0, 0.0], &[1.0, 0.0])] }),
            set_b: Some(UnionSetSpec {
                pieces: vec![
                    PieceSpec::Singleton { point: vec![0.0, 0.0] },
                    PieceSpec::Singleton { point: vec![7.0 + p.eta, p.eta] },
                    PieceSpec::Singleton { point: vec![7.0, -p.eta] },
                ],
            }),
            lift: None,
            start: StartSpec::Point(vec![7.0, p.eta]),
            algorithm: Algorithm::Dr,
            policy: SelectionPolicy::LowestIndex,
            stopping: StoppingConfig { max_iter: 200, ..Default::default() },
            analysis: vec![],
            special: None,
        },
        "two-lines" => Scenario {
            name: name.into(),
            dimension: 2,
            set_a: Some(UnionSetSpec { pieces: vec![line_spec(&[0.0, 0.0], &[1.0, 0.0])] }),
            set_b: Some(UnionSetSpec { pieces: vec![line_spec(&[0.0, 0.0], &[1.0, 1.0])] }),
            lift: None,
            start: StartSpec::Point(vec![3.0, 1.0]),
            algorithm: Algorithm::Dr,
            policy: SelectionPolicy::LowestIndex,
            stopping: StoppingConfig::default(),
            analysis: vec![AnalysisRequest::Classify { at: vec![0.0, 0.0] }],
            special: None,
        },
        "weak-fixed-1d" => Scenario {
            name: name.into(),
            dimension: 1,
            set_a: Some(UnionSetSpec {
                pieces: vec![
                    PieceSpec::Singleton { point: vec![-1.0] },
                    PieceSpec::Singleton { point: vec![1.0] },
                ],
            }),
            set_b: Some(UnionSetSpec {
                pieces: vec![
                    PieceSpec::Singleton { point: vec![-2.0] },
                    PieceSpec::Singleton { point: vec![1.0] },
                ],
            }),
            lift: None,
            start: StartSpec::Point(vec![-0.25]),
            algorithm: Algorithm::Dr,
            policy: SelectionPolicy::LowestIndex,
            stopping: StoppingConfig { max_iter: 50, ..Default::default() },
            analysis: vec![AnalysisRequest::Classify { at: vec![0.0] }],
            special: None,
        },
        "two-circles" => Scenario {
            name: name.into(),
            dimension: 2,
            set_a: Some(UnionSetSpec {
                pieces: vec![
                    PieceSpec::Sphere { center: vec![2.0, 0.0], radius: 1.0 },
                    PieceSpec::Sphere { center: vec![-2.0, 0.0], radius: 1.0 },
                ],
            }),
            set_b: Some(UnionSetSpec {
                pieces: vec![PieceSpec::Sphere { center: vec![0.0, 0.0], radius: 1.0 }],
            }),
            lift: None,
            start: StartSpec::Point(vec![0.1, 0.05]),
            algorithm: Algorithm::Dr,
            policy: SelectionPolicy::LowestIndex,
            stopping: StoppingConfig { max_iter: 10_000, ..Default::default() },
            analysis: vec![AnalysisRequest::Classify { at: vec![0.0, 0.0] }],
            special: None,
        },
        "spiral" | "spiral-map-inner" | "spiral-map-outer" => {
            let scene = SpiralScene::new(p.t_max)?;
            let (a_set, b_set) = scene.sets();
            let (set_a, special, algorithm) = match name {
                "spiral" => (
                    UnionSetSpec::from_set(&a_set),
                    SpecialRun::SpiralDr { t1: p.t1 },
                    Algorithm::Dr,
                ),
                "spiral-map-inner" => (
                    UnionSetSpec::from_set(&a_set),
                    SpecialRun::SpiralMap { t1: p.t1, variant: MapVariant::InnerVsMantle },
                    Algorithm::Map,
                ),
                _ => (
                    UnionSetSpec {
                        pieces: vec![PieceSpec::from_piece(&crate::spiral::solid_cylinder())],
                    },
                    SpecialRun::SpiralMap { t1: p.t1, variant: MapVariant::OuterVsSolidCylinder },
                    Algorithm::Map,
                ),
            };
            let start = match name {
                "spiral-map-outer" => crate::spiral::b_plus(p.t1)?,
                _ => crate::spiral::b_minus(p.t1)?,
            };
            let set_b = match name {
                "spiral-map-inner" => UnionSetSpec {
                    pieces: vec![PieceSpec::SpiralBranch {
                        sign: SpiralSign::Minus,
                        t_max: p.t_max,
                    }],
                },
                "spiral-map-outer" => UnionSetSpec {
                    pieces: vec![PieceSpec::SpiralBranch {
                        sign: SpiralSign::Plus,
                        t_max: p.t_max,
                    }],
                },
                _ => UnionSetSpec::from_set(&b_set),
            };
            Scenario {
                name: name.into(),
                dimension: 3,
                set_a: Some(set_a),
                set_b: Some(set_b),
                lift: None,
                start: StartSpec::Point(start.coords().to_vec()),
                algorithm,
                policy: SelectionPolicy::LowestIndex,
                stopping: StoppingConfig { max_iter: 10_000, ..Default::default() },
                analysis: vec![
                    AnalysisRequest::Accumulation { angle_bins: default_angle_bins() },
                    AnalysisRequest::VerifySpiral {
                        grid_start: default_grid_start(),
                        grid_stop: default_grid_stop(),
                        grid_step: default_grid_step(),
                    },
                ],
                special: Some(special),
            }
        }
        "three-halfplanes" => {
            let r2 = 2.0f64.sqrt();
            Scenario {
                name: name.into(),
                dimension: 2,
                set_a: None,
                set_b: None,
                lift: Some(vec![
                    UnionSetSpec {
                        pieces: vec![PieceSpec::Halfspace { normal: vec![-1.0, 0.0], offset: 1.0 }],
                    },
                    UnionSetSpec {
                        pieces: vec![PieceSpec::Halfspace { normal: vec![0.0, -1.0], offset: 1.0 }],
                    },
                    UnionSetSpec {
                        pieces: vec![PieceSpec::Halfspace {
                            normal: unit(&[1.0, 1.0]),
                            offset: r2,
                        }],
                    },
                ]),
                start: StartSpec::Ball { center: vec![0.0, 0.0], radius: 10.0, seed: p.seed },
                algorithm: Algorithm::Dr,
                policy: SelectionPolicy::LowestIndex,
                stopping: StoppingConfig::default(),
                analysis: vec![],
                special: None,
            }
        }
        other => {
            return Err(Error::Scenario(format!(
                "unknown built-in scenario '{other}' (available: {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    scenario.build()?;
    Ok(scenario)
}

/// Known points of `A` intersect `B` for a built-in scenario, used by the
/// verification suites. Empty for scenarios without a closed-form
/// description of the intersection.
pub fn builtin_intersection_samples(
    name: &str,
    params: &BuiltinParams,
    count: usize,
    seed: u64,
) -> Vec<Point> {
    let p = params;
    match name {
        "axes-line" => vec![
            Point::from_vec(vec![p.x_star, 0.0]),
            Point::from_vec(vec![0.0, p.y_star]),
        ],
        "discrete-cycle" => vec![Point::from_vec(vec![0.0, 0.0])],
        "two-lines" => vec![Point::from_vec(vec![0.0, 0.0])],
        "weak-fixed-1d" => vec![Point::from_vec(vec![1.0])],
        "two-circles" => vec![
            Point::from_vec(vec![1.0, 0.0]),
            Point::from_vec(vec![-1.0, 0.0]),
        ],
        "spiral" => {
            let mut rng = SplitMix64::new(seed);
            (0..count)
                .map(|_| {
                    let th = rng.uniform(0.0, std::f64::consts::TAU);
                    Point::from_vec(vec![th.cos(), th.sin(), 0.0])
                })
                .collect()
        }
        _ => Vec::new(),
    }
}
