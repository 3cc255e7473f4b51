//! Command dispatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wsharp_core::certify::{
    certify_constrained, certify_constrained_exhauster, certify_exhauster, certify_qd, check_error_bound, fmt6,
    strong_slope_estimate, wsharp_check, CertificateReport, Constraints, ExhausterSource, ProblemInstance,
};
use wsharp_core::demyanov::{demyanov_diff, demyanov_diff_sampled};
use wsharp_core::geometry::{DEFAULT_DIRECTION_COUNT, DEFAULT_SEED};
use wsharp_core::sampling::Schedule;

use crate::error::{InputError, Result};
use crate::files::{demyanov_to_json, read_exhauster, read_polytope};
use crate::problem::{parse_problem, problem_to_json};
use crate::render::render_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Quasidifferential nondegeneracy certificate.
    CertifyQd,
    /// Exact-penalty certificate under g <= 0, h = 0 or a polyhedron.
    CertifyConstrained,
    /// Lower exhauster nondegeneracy certificate.
    CertifyExhauster,
    /// Lower exhausters with capped normal cones of a polyhedron.
    CertifyConstrainedExhauster,
    /// Strong slope at the listed points.
    Slope,
    /// Error bound for {g <= alpha, h = beta}.
    Errorbound,
    /// Demyanov difference of two polytope files.
    Demyanov,
    /// Direct check of the weak sharpness inequality with a given sigma.
    WsharpCheck,
    /// Parse a problem file and print it with every default filled in.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum DemyanovBackend {
    /// Exact in dimensions 1 and 2, sampled above.
    #[default]
    Auto,
    Sampled,
}

/// Command-line values that override or complete the problem file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sigma: Option<f64>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub tau: Option<f64>,
    pub points: Vec<Vec<f64>>,
    pub exhauster: Option<PathBuf>,
    pub backend: DemyanovBackend,
    pub directions: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, p: &mut ProblemInstance) {
        if let Some(s) = self.sigma {
            p.options.sigma = Some(s);
        }
        if let Some(l) = self.lambda {
            p.lambda = Some(l);
        }
        if let Some(s) = self.seed {
            p.seed = s;
        }
        if let Some(a) = self.alpha {
            p.options.alpha = Some(a);
        }
        if let Some(b) = self.beta {
            p.options.beta = Some(b);
        }
        if let Some(t) = self.tau {
            p.options.tau = Some(t);
        }
        if !self.points.is_empty() {
            p.options.points = self.points.clone();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopePoint {
    pub x: Vec<f64>,
    /// `null` in JSON when the quotients blow up.
    pub slope: f64,
    /// Largest decrease quotient per scale, coarsest first.
    pub per_scale: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub seed: u64,
    pub k_min: u32,
    pub k_max: u32,
    pub samples: usize,
    pub points: Vec<SlopePoint>,
}

/// Result of one command.
#[derive(Debug, Clone)]
pub enum Output {
    Report(Box<CertificateReport>),
    Slope(SlopeReport),
    Polytope(Value),
    Problem(Value),
}

impl Output {
    /// 0 certified, 2 refuted, 3 inconclusive; 0 for non-certificate output.
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) => r.exit_code(),
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Report(r), Format::Json) => crate::json::to_string(r.as_ref()),
            (Output::Report(r), Format::Text) => render_text(r),
            (Output::Slope(s), Format::Json) => crate::json::to_string(s),
            (Output::Slope(s), Format::Text) => slope_text(s),
            (Output::Polytope(v) | Output::Problem(v), _) => crate::json::to_string(v),
        }
    }
}

fn slope_text(s: &SlopeReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "strong slope (scales 2^-{}..2^-{}, {} steps per scale, seed {})", s.k_min, s.k_max, s.samples, s.seed);
    for p in &s.points {
        let x: Vec<String> = p.x.iter().map(|&v| fmt6(v)).collect();
        let _ = writeln!(o, "  x = ({})  slope {}", x.join(", "), fmt6(p.slope));
    }
    o
}

/// Everything a run needs besides the command name.
#[derive(Debug, Clone, Default)]
pub struct Request {
    pub problem: Option<PathBuf>,
    /// Positional files (the two polytopes of `demyanov`).
    pub files: Vec<PathBuf>,
    pub overrides: Overrides,
    pub emit_csv: Option<PathBuf>,
}

fn load(req: &Request) -> Result<ProblemInstance> {
    let path = req
        .problem
        .as_deref()
        .ok_or_else(|| InputError::Shape(String::from("this command needs --problem <path>")))?;
    let mut p = parse_problem(path)?;
    req.overrides.apply(&mut p);
    p.validate().map_err(InputError::Core)?;
    Ok(p)
}

fn source(req: &Request, p: &ProblemInstance) -> Result<ExhausterSource> {
    match &req.overrides.exhauster {
        Some(path) => read_exhauster(path, p.dim()),
        None => Ok(ExhausterSource::Symbolic),
    }
}

fn need_constraints(p: &ProblemInstance, what: &str) -> Result<()> {
    match &p.constraints {
        Some(_) => Ok(()),
        None => Err(InputError::Shape(format!("{what} needs a problem with constraints"))),
    }
}

pub fn execute(command: Command, req: &Request) -> Result<Output> {
    if req.emit_csv.is_some()
        && matches!(command, Command::Demyanov | Command::Slope | Command::Validate)
    {
        return Err(InputError::Shape(String::from("--emit-csv applies to certificate commands only")));
    }
    if command != Command::Demyanov && !req.files.is_empty() {
        return Err(InputError::Shape(format!("unexpected file arguments: {:?}", req.files)));
    }
    match command {
        Command::Demyanov => return demyanov(req).map(Output::Polytope),
        Command::Validate => return load(req).map(|p| Output::Problem(problem_to_json(&p))),
        _ => {}
    }
    let p = load(req)?;
    let mut exhauster = None;
    let report = match command {
        Command::CertifyQd => certify_qd(&p)?,
        Command::WsharpCheck => {
            let sigma = p.options.sigma.ok_or_else(|| {
                InputError::Shape(String::from("wsharp-check needs --sigma or options.sigma"))
            })?;
            wsharp_check(&p, sigma)?
        }
        Command::CertifyConstrained => {
            need_constraints(&p, "certify-constrained")?;
            certify_constrained(&p)?
        }
        Command::CertifyExhauster => {
            let s = source(req, &p)?;
            let r = certify_exhauster(&p, &s)?;
            exhauster = Some(s);
            r
        }
        Command::CertifyConstrainedExhauster => {
            if !matches!(p.constraints, Some(Constraints::Polyhedral(_))) {
                return Err(InputError::Shape(String::from(
                    "certify-constrained-exhauster needs polyhedral constraints",
                )));
            }
            let s = source(req, &p)?;
            let r = certify_constrained_exhauster(&p, &s)?;
            exhauster = Some(s);
            r
        }
        Command::Errorbound => {
            let o = &p.options;
            check_error_bound(&p, o.alpha.unwrap_or(0.0), o.beta.unwrap_or(0.0), o.tau)?
        }
        Command::Slope => return slope(&p).map(Output::Slope),
        Command::Demyanov | Command::Validate => unreachable!("handled above"),
    };
    if let Some(path) = &req.emit_csv {
        crate::csv_out::write_table(path, &p, &report, exhauster.as_ref())?;
    }
    Ok(Output::Report(Box::new(report)))
}

fn slope(p: &ProblemInstance) -> Result<SlopeReport> {
    if p.options.points.is_empty() {
        return Err(InputError::Shape(String::from("slope needs --point or options.points")));
    }
    let schedule = Schedule::default();
    let points = p
        .options
        .points
        .iter()
        .map(|x| {
            let e = strong_slope_estimate(&p.objective, x, &schedule)?;
            Ok(SlopePoint { x: x.clone(), slope: e.value, per_scale: e.per_scale })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SlopeReport { seed: p.seed, k_min: schedule.k_min, k_max: schedule.k_max, samples: schedule.samples, points })
}

fn demyanov(req: &Request) -> Result<Value> {
    let [a, b] = req.files.as_slice() else {
        return Err(InputError::Shape(format!(
            "demyanov needs two polytope files, got {}",
            req.files.len()
        )));
    };
    let (pa, pb) = (read_polytope(a)?, read_polytope(b)?);
    let o = &req.overrides;
    let r = match o.backend {
        DemyanovBackend::Auto => demyanov_diff(&pa, &pb)?,
        DemyanovBackend::Sampled => demyanov_diff_sampled(
            &pa,
            &pb,
            o.directions.unwrap_or(DEFAULT_DIRECTION_COUNT),
            o.seed.unwrap_or(DEFAULT_SEED),
        )?,
    };
    Ok(demyanov_to_json(&r))
}

/// Parses `--point` values such as `0.5` or `1,-2`.
pub fn parse_point(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|e| format!("bad coordinate {t:?}: {e}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("coordinate {t:?} is not finite"))
            }
        })
        .collect()
}

/// Runs `command` on a problem file.
pub fn run_problem(command: Command, problem: &Path, overrides: Overrides) -> Result<Output> {
    execute(command, &Request { problem: Some(problem.to_path_buf()), overrides, ..Request::default() })
}
