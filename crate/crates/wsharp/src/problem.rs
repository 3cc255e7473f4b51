//! Problem files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "dim": 1,
//!   "objective": {"op": "abs", "arg": {"op": "var", "index": 0}},
//!   "box": [[-2, 2]],
//!   "grid_resolution": 401
//! }
//! ```
//!
//! Optional fields: `constraints` (either `{"g": expr, "h": expr}` with at
//! least one of the two, or `{"polyhedron": [{"c": [...], "d": r}, ...]}`
//! for `<c, x> <= d`), `tolerances`, `lambda`, `seed` and `options`. See
//! `schema/problem.schema.json` for the full layout.

use std::path::Path;

use serde_json::{json, Value};
use wsharp_core::certify::{Constraints, HalfSpace, Options, ProblemInstance, Tolerances};
use wsharp_core::geometry::DEFAULT_SEED;

use crate::error::{InputError, Result};
use crate::expr::{expr_to_json, parse_expr};
use crate::node::Node;

/// Problem file versions this build reads.
pub const FORMAT_VERSION: u64 = 1;

/// Grid resolution used when a file gives none.
pub const DEFAULT_RESOLUTION: usize = 201;

const TOP: &[&str] = &[
    "version", "dim", "space_dim", "objective", "constraints", "box", "grid_resolution", "tolerances", "lambda",
    "seed", "options",
];

pub(crate) fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json { path: path.to_path_buf(), source })
}

pub fn parse_problem(path: &Path) -> Result<ProblemInstance> {
    problem_from_value(&read_json(path)?)
}

pub fn parse_problem_str(text: &str) -> Result<ProblemInstance> {
    let v: Value = serde_json::from_str(text).map_err(|source| InputError::Json { path: "<string>".into(), source })?;
    problem_from_value(&v)
}

fn positive(n: Node<'_>, what: &str) -> Result<f64> {
    let x = n.f64()?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(n.error(format!("{what} must be positive, got {x}")))
    }
}

fn nonnegative(n: Node<'_>, what: &str) -> Result<f64> {
    let x = n.f64()?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err(n.error(format!("{what} must be nonnegative, got {x}")))
    }
}

fn parse_box(n: Node<'_>) -> Result<Vec<(f64, f64)>> {
    let arr = n.value.as_array().ok_or_else(|| n.error("expected an array of [low, high] pairs"))?;
    // A bare [low, high] is accepted for one-dimensional boxes.
    if arr.len() == 2 && arr.iter().all(Value::is_number) {
        let v = n.vec()?;
        return check_interval(n, v[0], v[1]).map(|iv| vec![iv]);
    }
    let out = n.items(|_, axis| {
        let v = axis.vec()?;
        if v.len() != 2 {
            return Err(axis.error(format!("expected [low, high], found {} entries", v.len())));
        }
        check_interval(axis, v[0], v[1])
    })?;
    if out.is_empty() {
        return Err(n.error("box has no axes"));
    }
    Ok(out)
}

fn check_interval(n: Node<'_>, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(n.error(format!("low {lo} is not below high {hi}")))
    }
}

fn parse_constraints(n: Node<'_>, dim: usize) -> Result<Constraints> {
    n.only_keys(&["g", "h", "polyhedron"])?;
    let obj = n.object()?;
    if obj.contains_key("polyhedron") {
        if obj.contains_key("g") || obj.contains_key("h") {
            return Err(n.error("give either g/h or polyhedron, not both"));
        }
        let rows = n.req("polyhedron", |rows| {
            let out = rows.items(|_, r| {
                r.only_keys(&["c", "d"])?;
                let c = r.req("c", |c| c.vec_dim(dim))?;
                let d = r.req("d", |d| d.f64())?;
                HalfSpace::new(&c, d).map_err(|e| r.error(e.to_string()))
            })?;
            if out.is_empty() {
                return Err(rows.error("polyhedron has no rows"));
            }
            Ok(out)
        })?;
        return Ok(Constraints::Polyhedral(rows));
    }
    let g = n.get("g", |g| g.map(|g| parse_expr(g, dim)).transpose())?;
    let h = n.get("h", |h| h.map(|h| parse_expr(h, dim)).transpose())?;
    if g.is_none() && h.is_none() {
        return Err(n.error("constraints need g, h or polyhedron"));
    }
    Ok(Constraints::Functional { g, h })
}

fn parse_tolerances(n: Node<'_>) -> Result<Tolerances> {
    n.only_keys(&["argmin_tol", "tie_tol", "feas_tol", "lipschitz", "vanishing_tol"])?;
    let d = Tolerances::default();
    Ok(Tolerances {
        argmin_tol: n.get("argmin_tol", |v| v.map(|v| positive(v, "argmin_tol")).transpose())?,
        tie_tol: n.get("tie_tol", |v| v.map_or(Ok(d.tie_tol), |v| nonnegative(v, "tie_tol")))?,
        feas_tol: n.get("feas_tol", |v| v.map_or(Ok(d.feas_tol), |v| nonnegative(v, "feas_tol")))?,
        lipschitz: n.get("lipschitz", |v| v.map(|v| nonnegative(v, "lipschitz")).transpose())?,
        vanishing_tol: n.get("vanishing_tol", |v| v.map_or(Ok(d.vanishing_tol), |v| nonnegative(v, "vanishing_tol")))?,
    })
}

fn parse_options(n: Node<'_>, dim: usize) -> Result<Options> {
    n.only_keys(&["sigma", "alpha", "beta", "tau", "points", "slope_checks"])?;
    let num = |key: &str| n.get(key, |v| v.map(|v| v.f64()).transpose());
    Ok(Options {
        sigma: n.get("sigma", |v| v.map(|v| nonnegative(v, "sigma")).transpose())?,
        alpha: num("alpha")?,
        beta: num("beta")?,
        tau: n.get("tau", |v| v.map(|v| positive(v, "tau")).transpose())?,
        points: n.get("points", |v| v.map_or(Ok(Vec::new()), |v| v.items(|_, p| p.vec_dim(dim))))?,
        slope_checks: n.get("slope_checks", |v| v.map(|v| v.usize()).transpose())?,
    })
}

/// Validates a parsed document and fills in every default.
pub fn problem_from_value(v: &Value) -> Result<ProblemInstance> {
    let root = Node::root(v);
    root.only_keys(TOP)?;
    let version = root.get("version", |n| n.map_or(Ok(FORMAT_VERSION), |n| n.u64()))?;
    if version != FORMAT_VERSION {
        return Err(root.get("version", |n| Ok(n.expect("present").error(format!(
            "unsupported format version {version} (this build reads version {FORMAT_VERSION})"
        ))))?);
    }
    let obj = root.object()?;
    if obj.contains_key("dim") && obj.contains_key("space_dim") {
        return Err(root.error("give dim or space_dim, not both"));
    }
    let dim_key = if obj.contains_key("space_dim") { "space_dim" } else { "dim" };
    let bounds = root.req("box", parse_box)?;
    let dim = root.get(dim_key, |n| match n {
        None => Ok(bounds.len()),
        Some(n) => {
            let d = n.usize()?;
            if d == 0 {
                return Err(n.error("dimension must be at least 1"));
            }
            Ok(d)
        }
    })?;
    if bounds.len() != dim {
        return Err(root.req("box", |b| Ok(b.error(format!("box has {} axes but dim is {dim}", bounds.len()))))?);
    }
    let objective = root.req("objective", |n| parse_expr(n, dim))?;
    let constraints = root.get("constraints", |n| n.map(|n| parse_constraints(n, dim)).transpose())?;
    let grid_resolution = root.get("grid_resolution", |n| match n {
        None => Ok(DEFAULT_RESOLUTION),
        Some(n) => {
            let r = n.usize()?;
            if r < 2 {
                return Err(n.error("grid_resolution must be at least 2"));
            }
            Ok(r)
        }
    })?;
    let p = ProblemInstance {
        objective,
        constraints,
        bounds,
        grid_resolution,
        tolerances: root.get("tolerances", |n| n.map_or(Ok(Tolerances::default()), parse_tolerances))?,
        lambda: root.get("lambda", |n| n.map(|n| positive(n, "lambda")).transpose())?,
        seed: root.get("seed", |n| n.map_or(Ok(DEFAULT_SEED), |n| n.u64()))?,
        options: root.get("options", |n| n.map_or(Ok(Options::default()), |n| parse_options(n, dim)))?,
    };
    p.validate().map_err(|e| root.error(e.to_string()))?;
    Ok(p)
}

/// The instance as a problem file with every default written out.
pub fn problem_to_json(p: &ProblemInstance) -> Value {
    let constraints = match &p.constraints {
        None => Value::Null,
        Some(Constraints::Functional { g, h }) => json!({
            "g": g.as_ref().map(expr_to_json),
            "h": h.as_ref().map(expr_to_json),
        }),
        Some(Constraints::Polyhedral(rows)) => json!({
            "polyhedron": rows.iter().map(|r| json!({"c": r.c.as_slice(), "d": r.d})).collect::<Vec<_>>(),
        }),
    };
    let t = &p.tolerances;
    let o = &p.options;
    json!({
        "version": FORMAT_VERSION,
        "dim": p.dim(),
        "objective": expr_to_json(&p.objective),
        "constraints": constraints,
        "box": p.bounds.iter().map(|&(lo, hi)| [lo, hi]).collect::<Vec<_>>(),
        "grid_resolution": p.grid_resolution,
        "tolerances": {
            "argmin_tol": t.argmin_tol,
            "tie_tol": t.tie_tol,
            "feas_tol": t.feas_tol,
            "lipschitz": t.lipschitz,
            "vanishing_tol": t.vanishing_tol,
        },
        "lambda": p.lambda,
        "seed": p.seed,
        "options": {
            "sigma": o.sigma,
            "alpha": o.alpha,
            "beta": o.beta,
            "tau": o.tau,
            "points": o.points,
            "slope_checks": o.slope_checks,
        },
    })
}
