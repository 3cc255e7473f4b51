//! JSON form of [`FuncExpr`].
//!
//! Every node is an object with an `"op"` field:
//!
//! | op | fields |
//! |----|--------|
//! | `affine` | `a` (vector), `b` (default 0) |
//! | `var` | `index`: the coordinate `x_index` |
//! | `const` | `value` |
//! | `norm2` | `center` (default origin) |
//! | `poly` | `terms`: list of `{coef, powers}` |
//! | `inv_affine` | `a`, `b`, `c`: `c / (<a, x> + b)` on `<a, x> + b > 0` |
//! | `piecewise` | `a`, `b`, `below`, `above`: `below` where `<a, x> + b <= 0` |
//! | `sum`, `max`, `min` | `args`: nonempty list |
//! | `scale` | `factor`, `arg` |
//! | `neg`, `pospart`, `abs` | `arg` |
//!
//! `var` and `const` are read as `affine` and written back that way.

use serde_json::{json, Value};
use wsharp_core::qdcalc::{Monomial, Polynomial};
use wsharp_core::{FuncExpr, Vector};

use crate::error::Result;
use crate::node::Node;

pub const OPS: &[&str] = &[
    "affine", "var", "const", "norm2", "poly", "inv_affine", "piecewise", "sum", "scale", "neg", "max", "min",
    "pospart", "abs",
];

fn vector(n: Node<'_>, dim: usize) -> Result<Vector> {
    let v = n.vec_dim(dim)?;
    Vector::new(v).map_err(|e| n.error(e.to_string()))
}

fn boxed(n: Node<'_>, dim: usize) -> Result<Box<FuncExpr>> {
    n.req("arg", |a| parse_expr(a, dim)).map(Box::new)
}

fn list(n: Node<'_>, dim: usize) -> Result<Vec<FuncExpr>> {
    n.req("args", |a| {
        let xs = a.items(|_, e| parse_expr(e, dim))?;
        if xs.is_empty() {
            return Err(a.error("argument list is empty"));
        }
        Ok(xs)
    })
}

/// Parses an expression over `R^dim`, naming the offending node on error.
pub(crate) fn parse_expr(n: Node<'_>, dim: usize) -> Result<FuncExpr> {
    let op = n.req("op", |o| o.str().map(str::to_owned))?;
    let fields: &[&str] = match op.as_str() {
        "affine" => &["op", "a", "b"],
        "var" => &["op", "index"],
        "const" => &["op", "value"],
        "norm2" => &["op", "center"],
        "poly" => &["op", "terms"],
        "inv_affine" => &["op", "a", "b", "c"],
        "piecewise" => &["op", "a", "b", "below", "above"],
        "sum" | "max" | "min" => &["op", "args"],
        "scale" => &["op", "factor", "arg"],
        "neg" | "pospart" | "abs" => &["op", "arg"],
        other => {
            return Err(n.error(format!("unknown op \"{other}\" (expected one of: {})", OPS.join(", "))));
        }
    };
    n.only_keys(fields)?;
    let b_or_zero = || n.get("b", |b| b.map_or(Ok(0.0), |b| b.f64()));
    Ok(match op.as_str() {
        "affine" => FuncExpr::Affine { a: n.req("a", |a| vector(a, dim))?, b: b_or_zero()? },
        "var" => {
            let i = n.req("index", |i| {
                let k = i.usize()?;
                if k >= dim {
                    return Err(i.error(format!("index {k} out of range for dimension {dim}")));
                }
                Ok(k)
            })?;
            FuncExpr::Affine { a: Vector::unit(dim, i), b: 0.0 }
        }
        "const" => FuncExpr::Affine { a: Vector::zeros(dim), b: n.req("value", |v| v.f64())? },
        "norm2" => FuncExpr::Norm2 {
            center: n.get("center", |c| c.map_or(Ok(Vector::zeros(dim)), |c| vector(c, dim)))?,
        },
        "poly" => {
            let terms = n.req("terms", |t| {
                t.items(|_, m| {
                    m.only_keys(&["coef", "powers"])?;
                    let coef = m.req("coef", |c| c.f64())?;
                    let powers = m.req("powers", |p| {
                        let ps = p.items(|_, e| {
                            u32::try_from(e.u64()?).map_err(|_| e.error("power too large"))
                        })?;
                        if ps.len() != dim {
                            return Err(p.error(format!("expected {dim} entries, found {}", ps.len())));
                        }
                        Ok(ps)
                    })?;
                    Ok(Monomial { coef, powers })
                })
            })?;
            FuncExpr::Poly(Polynomial::new(dim, terms).map_err(|e| n.error(e.to_string()))?)
        }
        "inv_affine" => FuncExpr::InvAffine {
            a: n.req("a", |a| vector(a, dim))?,
            b: b_or_zero()?,
            c: n.get("c", |c| c.map_or(Ok(1.0), |c| c.f64()))?,
        },
        "piecewise" => FuncExpr::Piecewise {
            a: n.req("a", |a| vector(a, dim))?,
            b: b_or_zero()?,
            below: n.req("below", |e| parse_expr(e, dim)).map(Box::new)?,
            above: n.req("above", |e| parse_expr(e, dim)).map(Box::new)?,
        },
        "sum" => FuncExpr::Sum(list(n, dim)?),
        "max" => FuncExpr::Max(list(n, dim)?),
        "min" => FuncExpr::Min(list(n, dim)?),
        "scale" => FuncExpr::Scale(n.req("factor", |f| f.f64())?, boxed(n, dim)?),
        "neg" => FuncExpr::Neg(boxed(n, dim)?),
        "pospart" => FuncExpr::PosPart(boxed(n, dim)?),
        "abs" => FuncExpr::Abs(boxed(n, dim)?),
        _ => unreachable!("op checked above"),
    })
}

fn args(xs: &[FuncExpr]) -> Value {
    Value::Array(xs.iter().map(expr_to_json).collect())
}

/// Canonical JSON form; `parse_expr` reads it back to an equal expression.
pub fn expr_to_json(e: &FuncExpr) -> Value {
    match e {
        FuncExpr::Affine { a, b } => json!({"op": "affine", "a": a.as_slice(), "b": b}),
        FuncExpr::Norm2 { center } => json!({"op": "norm2", "center": center.as_slice()}),
        FuncExpr::Poly(p) => json!({
            "op": "poly",
            "terms": p.terms().iter().map(|t| json!({"coef": t.coef, "powers": t.powers})).collect::<Vec<_>>(),
        }),
        FuncExpr::InvAffine { a, b, c } => json!({"op": "inv_affine", "a": a.as_slice(), "b": b, "c": c}),
        FuncExpr::Piecewise { a, b, below, above } => json!({
            "op": "piecewise", "a": a.as_slice(), "b": b,
            "below": expr_to_json(below), "above": expr_to_json(above),
        }),
        FuncExpr::Sum(xs) => json!({"op": "sum", "args": args(xs)}),
        FuncExpr::Max(xs) => json!({"op": "max", "args": args(xs)}),
        FuncExpr::Min(xs) => json!({"op": "min", "args": args(xs)}),
        FuncExpr::Scale(f, x) => json!({"op": "scale", "factor": f, "arg": expr_to_json(x)}),
        FuncExpr::Neg(x) => json!({"op": "neg", "arg": expr_to_json(x)}),
        FuncExpr::PosPart(x) => json!({"op": "pospart", "arg": expr_to_json(x)}),
        FuncExpr::Abs(x) => json!({"op": "abs", "arg": expr_to_json(x)}),
    }
}
