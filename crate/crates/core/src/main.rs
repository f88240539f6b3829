//! Command-line front end: scenario ingestion, trajectory execution, trace
//! and summary emission.
//!
//! Exit codes: 0 on success, 2 on scenario/parse errors, 3 on numerical hard
//! errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use drproj::analysis::{accumulation_analysis, classify_fixed_point, radius_sampled};
use drproj::engine::{dr_run, map_run, SelectionPolicy, Trajectory};
use drproj::error::Error;
use drproj::pieces::{NonconvexPrimitive, Piece};
use drproj::point::Point;
use drproj::scenario::{
    builtin_scenario, parse_scenario, Algorithm, AnalysisRequest, BuiltProblem, BuiltinParams,
    Scenario, SpecialRun, StartSpec, BUILTIN_NAMES,
};
use drproj::spiral::{dr_spiral_run, map_spiral_run, verify_claims, SpiralScene};
use drproj::trace::{
    read_trace, summary_to_json, trace_to_string, ClaimsDigest, ClassifySummary, RadiusSummary,
    RunSummary,
};

#[derive(Parser)]
#[command(
    name = "drproj",
    about = "Douglas-Rachford and alternating-projection feasibility runs with fixed-point analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed override for seeded starts and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Iteration cap override.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Step-norm convergence tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Selection policy: lowest-index, nearest, or random (with --seed).
    #[arg(long, global = true)]
    policy: Option<String>,

    /// Output directory for trace and summary files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioSource {
    /// Path to a scenario JSON file, or `-` for stdin.
    #[arg(long, conflicts_with = "builtin")]
    scenario: Option<PathBuf>,

    /// Name of a built-in scenario.
    #[arg(long, value_parser = BUILTIN_NAMES.to_vec())]
    builtin: Option<String>,

    /// Offset parameter of the discrete-cycle scene.
    #[arg(long)]
    eta: Option<f64>,

    /// First fixed-point abscissa of the axes-line scene.
    #[arg(long)]
    x_star: Option<f64>,

    /// Second fixed-point ordinate of the axes-line scene.
    #[arg(long)]
    y_star: Option<f64>,

    /// Starting parameter of the spiral scenes.
    #[arg(long)]
    t1: Option<f64>,

    /// Spiral branch truncation parameter.
    #[arg(long)]
    t_max: Option<f64>,
}

impl ScenarioSource {
    fn load(&self, seed: Option<u64>) -> anyhow::Result<Scenario> {
        if let Some(path) = &self.scenario {
            let text = if path.as_os_str() == "-" {
                let mut buf = String::new();
                std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
                    .context("reading scenario from stdin")?;
                buf
            } else {
                fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?
            };
            return Ok(parse_scenario(&text)?);
        }
        let name = self.builtin.as_deref().unwrap_or("axes-line");
        let mut params = BuiltinParams::default();
        if let Some(eta) = self.eta {
            params.eta = eta;
        }
        if let Some(x) = self.x_star {
            params.x_star = x;
        }
        if let Some(y) = self.y_star {
            params.y_star = y;
        }
        if let Some(t1) = self.t1 {
            params.t1 = t1;
        }
        if let Some(t_max) = self.t_max {
            params.t_max = t_max;
        }
        if let Some(seed) = seed {
            params.seed = seed;
        }
        Ok(builtin_scenario(name, &params)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario and emit its trace and summary.
    Run {
        #[command(flatten)]
        source: ScenarioSource,
        /// Number of steps for the specialized spiral runners.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Classify a point as not fixed, fixed, or strongly fixed.
    Classify {
        #[command(flatten)]
        source: ScenarioSource,
        /// Point coordinates, comma separated.
        #[arg(long)]
        at: String,
    },
    /// Certified and sampled radius of attraction around a strong fixed point.
    Radius {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 2.0)]
        eps_hi: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 30)]
        bisect: usize,
    },
    /// Check the analytic identities of the spiral scene on a parameter grid.
    VerifySpiral {
        #[arg(long, default_value_t = 0.5)]
        grid_start: f64,
        #[arg(long, default_value_t = 12.0)]
        grid_stop: f64,
        #[arg(long, default_value_t = 0.5)]
        grid_step: f64,
        #[arg(long, default_value_t = 40.0)]
        t_max: f64,
    },
    /// Solve a multi-set feasibility problem in product space.
    Lift {
        #[command(flatten)]
        source: ScenarioSource,
    },
    /// Recompute summary statistics from a previously written trace.
    Report {
        /// Path to a trace CSV file.
        #[arg(long)]
        trace: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<Error>() {
                Some(Error::Scenario(_)) | Some(Error::Trace(_)) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn parse_point(text: &str) -> anyhow::Result<Point> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Scenario(format!("bad coordinate '{s}'"))))
        .collect::<Result<_, _>>()?;
    Ok(Point::new(coords)?)
}

fn parse_policy(text: &str, seed: Option<u64>) -> anyhow::Result<SelectionPolicy> {
    Ok(match text {
        "lowest-index" => SelectionPolicy::LowestIndex,
        "nearest" | "nearest-then-lowest-index" => SelectionPolicy::NearestThenLowestIndex,
        "random" | "seeded-random" => SelectionPolicy::SeededRandom(seed.unwrap_or(0)),
        other => bail!(Error::Scenario(format!(
            "unknown policy '{other}' (lowest-index, nearest, random)"
        ))),
    })
}

fn apply_overrides(cli: &Cli, scenario: &mut Scenario) -> anyhow::Result<()> {
    if let Some(max_iter) = cli.max_iter {
        scenario.stopping.max_iter = max_iter;
    }
    if let Some(tol) = cli.tol {
        scenario.stopping.tol_step = tol;
    }
    if let Some(policy) = &cli.policy {
        scenario.policy = parse_policy(policy, cli.seed)?;
    }
    if let Some(seed) = cli.seed {
        if let StartSpec::Ball { seed: s, .. } = &mut scenario.start {
            *s = seed;
        }
    }
    Ok(())
}

fn write_or_print(out: &Option<PathBuf>, filename: &str, contents: &str) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(filename);
            let mut f = fs::File::create(&path)
                .with_context(|| format!("creating {}", path.display()))?;
            f.write_all(contents.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn accumulation_target(scenario: &Scenario, problem: &BuiltProblem) -> Option<Piece> {
    let (_, b) = problem.sets();
    if scenario.dimension == 3 {
        return Some(Piece::Nonconvex(NonconvexPrimitive::BaseCircle));
    }
    if scenario.dimension == 2 && b.len() == 1 {
        if let Piece::Nonconvex(NonconvexPrimitive::Sphere { .. }) = &b.pieces()[0] {
            return Some(b.pieces()[0].clone());
        }
    }
    None
}

fn execute_trajectory(
    scenario: &Scenario,
    problem: &BuiltProblem,
    steps: Option<usize>,
) -> anyhow::Result<Trajectory> {
    if let Some(special) = &scenario.special {
        let scene = SpiralScene::new(spiral_t_max(scenario))?;
        let steps = steps.unwrap_or(scenario.stopping.max_iter);
        let run = match special {
            SpecialRun::SpiralDr { t1 } => dr_spiral_run(&scene, *t1, steps)?,
            SpecialRun::SpiralMap { t1, variant } => {
                map_spiral_run(&scene, *t1, steps, *variant)?
            }
        };
        return Ok(run.trajectory);
    }
    let (a, b) = problem.sets();
    let x0 = scenario.start_point(problem)?;
    let traj = match scenario.algorithm {
        Algorithm::Dr => dr_run(a, b, &x0, &scenario.stopping, &scenario.policy)?,
        Algorithm::Map => map_run(a, b, &x0, &scenario.stopping, &scenario.policy)?,
    };
    Ok(traj)
}

fn spiral_t_max(scenario: &Scenario) -> f64 {
    scenario
        .set_b
        .as_ref()
        .and_then(|spec| {
            spec.pieces.iter().find_map(|p| match p {
                drproj::scenario::PieceSpec::SpiralBranch { t_max, .. } => Some(*t_max),
                _ => None,
            })
        })
        .unwrap_or(drproj::spiral::DEFAULT_T_MAX)
}

fn run_analysis(
    scenario: &Scenario,
    problem: &BuiltProblem,
    trajectory: &Trajectory,
    summary: &mut RunSummary,
) -> anyhow::Result<()> {
    let (a, b) = problem.sets();
    for request in &scenario.analysis {
        match request {
            AnalysisRequest::Classify { at } => {
                let point = Point::new(at.clone())?;
                let classification = classify_fixed_point(a, b, &point)?;
                summary
                    .classifications
                    .push(ClassifySummary { at: at.clone(), classification });
            }
            AnalysisRequest::Radius { at, eps_hi, samples, bisection_steps } => {
                let point = Point::new(at.clone())?;
                let estimate = radius_sampled(
                    a,
                    b,
                    &point,
                    *eps_hi,
                    *samples,
                    *bisection_steps,
                    scenario_seed(scenario),
                )?;
                summary.radius_estimates.push(RadiusSummary { at: at.clone(), estimate });
            }
            AnalysisRequest::Accumulation { angle_bins } => {
                if let Some(target) = accumulation_target(scenario, problem) {
                    let tail_start =
                        trajectory.records.len() - (trajectory.records.len() / 4).max(1);
                    let tail: Vec<Point> = trajectory.records[tail_start..]
                        .iter()
                        .map(|r| r.x_next.clone())
                        .collect();
                    summary.accumulation =
                        Some(accumulation_analysis(&tail, &target, *angle_bins)?);
                }
            }
            AnalysisRequest::VerifySpiral { grid_start, grid_stop, grid_step } => {
                let scene = SpiralScene::new(spiral_t_max(scenario))?;
                let grid = make_grid(*grid_start, *grid_stop, *grid_step);
                let report = verify_claims(&scene, &grid)?;
                summary.spiral_claims = Some(ClaimsDigest::from_report(&report));
            }
        }
    }
    Ok(())
}

fn scenario_seed(scenario: &Scenario) -> u64 {
    match &scenario.start {
        StartSpec::Ball { seed, .. } => *seed,
        _ => 1,
    }
}

fn make_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut t = start;
    while t <= stop + 1e-12 {
        grid.push(t);
        t += step;
    }
    grid
}

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Run { source, steps } => {
            let mut scenario = source.load(cli.seed)?;
            apply_overrides(cli, &mut scenario)?;
            let problem = scenario.build()?;
            let trajectory = execute_trajectory(&scenario, &problem, *steps)?;
            let dim = trajectory.records.first().map(|r| r.x.dim()).unwrap_or(0);

            let mut summary = RunSummary {
                scenario: scenario.name.clone(),
                algorithm: scenario.algorithm,
                steps: trajectory.records.len(),
                stop_reason: trajectory.stop_reason,
                final_point: trajectory.final_point().clone(),
                diagnostics: trajectory.diagnostics.clone(),
                classifications: Vec::new(),
                radius_estimates: Vec::new(),
                accumulation: None,
                spiral_claims: None,
                lifted: None,
            };
            if let BuiltProblem::Lifted(lp) = &problem {
                if let Some(rec) = trajectory.records.last() {
                    let candidate = lp.block_average(&rec.a)?;
                    let residuals = lp.residuals(&candidate)?;
                    summary.lifted = Some(drproj::lift::LiftedSolution {
                        candidate: Some(candidate),
                        residuals,
                    });
                }
            }
            run_analysis(&scenario, &problem, &trajectory, &mut summary)?;

            let base = scenario.name.replace(' ', "-");
            write_or_print(&cli.out, &format!("{base}.trace.csv"), &trace_to_string(&trajectory, dim))?;
            write_or_print(&cli.out, &format!("{base}.summary.json"), &summary_to_json(&summary))?;
            Ok(())
        }
        Command::Classify { source, at } => {
            let scenario = source.load(cli.seed)?;
            let problem = scenario.build()?;
            let (a, b) = problem.sets();
            let point = parse_point(at)?;
            let classification = classify_fixed_point(a, b, &point)?;
            let doc = serde_json::to_string_pretty(&classification).expect("serializes");
            write_or_print(&cli.out, &format!("{}.classify.json", scenario.name), &doc)
        }
        Command::Radius { source, at, eps_hi, samples, bisect } => {
            let scenario = source.load(cli.seed)?;
            let problem = scenario.build()?;
            let (a, b) = problem.sets();
            let point = parse_point(at)?;
            let estimate = radius_sampled(
                a,
                b,
                &point,
                *eps_hi,
                *samples,
                *bisect,
                cli.seed.unwrap_or(1),
            )?;
            let doc = serde_json::to_string_pretty(&estimate).expect("serializes");
            write_or_print(&cli.out, &format!("{}.radius.json", scenario.name), &doc)
        }
        Command::VerifySpiral { grid_start, grid_stop, grid_step, t_max } => {
            let scene = SpiralScene::new(*t_max)?;
            let grid = make_grid(*grid_start, *grid_stop, *grid_step);
            let report = verify_claims(&scene, &grid)?;
            let digest = ClaimsDigest::from_report(&report);
            let doc = serde_json::to_string_pretty(&digest).expect("serializes");
            write_or_print(&cli.out, "spiral-claims.json", &doc)?;
            if !digest.all_passed {
                eprintln!("{} of {} checks failed", digest.failed, digest.total);
            }
            Ok(())
        }
        Command::Lift { source } => {
            let mut scenario = source.load(cli.seed)?;
            apply_overrides(cli, &mut scenario)?;
            let problem = scenario.build()?;
            let BuiltProblem::Lifted(lp) = &problem else {
                bail!(Error::Scenario("the lift command needs a scenario with a `lift` field".into()));
            };
            let x0 = scenario.start_point(&problem)?;
            let (traj, solution) = drproj::lift::solve_lifted(
                lp,
                &x0,
                &scenario.stopping,
                &scenario.policy,
            )?;
            #[derive(serde::Serialize)]
            struct LiftReport<'s> {
                scenario: &'s str,
                steps: usize,
                stop_reason: drproj::engine::StopReason,
                solution: &'s drproj::lift::LiftedSolution,
            }
            let doc = serde_json::to_string_pretty(&LiftReport {
                scenario: &scenario.name,
                steps: traj.records.len(),
                stop_reason: traj.stop_reason,
                solution: &solution,
            })
            .expect("serializes");
            write_or_print(&cli.out, &format!("{}.lift.json", scenario.name), &doc)
        }
        Command::Report { trace } => {
            let text = fs::read_to_string(trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let rows = read_trace(&text)?;
            if rows.is_empty() {
                bail!(Error::Trace("trace has no rows".into()));
            }
            let tail_start = rows.len() - (rows.len() / 4).max(1);
            let tail = &rows[tail_start..];
            let max_step = tail.iter().map(|r| r.step_norm).fold(0.0f64, f64::max);
            let min_gap = tail.iter().map(|r| r.feasibility_gap).fold(f64::INFINITY, f64::min);
            #[derive(serde::Serialize)]
            struct TraceReport {
                rows: usize,
                dimension: usize,
                final_step_norm: f64,
                tail_max_step_norm: f64,
                tail_min_feasibility_gap: f64,
            }
            let doc = serde_json::to_string_pretty(&TraceReport {
                rows: rows.len(),
                dimension: rows[0].x.len(),
                final_step_norm: rows.last().unwrap().step_norm,
                tail_max_step_norm: max_step,
                tail_min_feasibility_gap: min_gap,
            })
            .expect("serializes");
            write_or_print(&cli.out, "trace-report.json", &doc)
        }
    }
}
