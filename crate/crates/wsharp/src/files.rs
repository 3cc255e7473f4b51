//! Polytope and exhauster files.
//!
//! A polytope file is `{"vertices": [[...], ...]}` or a bare vertex list.
//! An exhauster file is either `{"members": [P, ...]}` (one family for every
//! point) or `{"points": [{"x": [...], "members": [P, ...]}, ...]}` (families
//! attached to grid points), where each `P` is a vertex list.

use std::path::Path;

use serde_json::{json, Value};
use wsharp_core::certify::ExhausterSource;
use wsharp_core::demyanov::DemyanovResult;
use wsharp_core::exhauster::LowerExhauster;
use wsharp_core::{Polytope, Vector};

use crate::error::Result;
use crate::node::Node;
use crate::problem::read_json;

fn vertex_list(n: Node<'_>, dim: Option<usize>) -> Result<Polytope> {
    let verts = n.items(|_, v| {
        let coords = match dim {
            Some(d) => v.vec_dim(d)?,
            None => v.vec()?,
        };
        Vector::new(coords).map_err(|e| v.error(e.to_string()))
    })?;
    Polytope::new(verts).map_err(|e| n.error(e.to_string()))
}

pub fn polytope_from_value(v: &Value) -> Result<Polytope> {
    let root = Node::root(v);
    if v.is_array() {
        return vertex_list(root, None);
    }
    // Extra keys are allowed so the output of `demyanov` reads back in.
    root.req("vertices", |n| vertex_list(n, None))
}

pub fn read_polytope(path: &Path) -> Result<Polytope> {
    polytope_from_value(&read_json(path)?)
}

fn family(n: Node<'_>, dim: usize) -> Result<LowerExhauster> {
    let members = n.items(|_, m| vertex_list(m, Some(dim)))?;
    LowerExhauster::new(members).map_err(|e| n.error(e.to_string()))
}

/// Reads an exhauster file for problems over `R^dim`.
pub fn exhauster_from_value(v: &Value, dim: usize) -> Result<ExhausterSource> {
    let root = Node::root(v);
    root.only_keys(&["members", "points"])?;
    let obj = root.object()?;
    match (obj.contains_key("members"), obj.contains_key("points")) {
        (true, false) => Ok(ExhausterSource::Global(root.req("members", |n| family(n, dim))?)),
        (false, true) => root.req("points", |pts| {
            pts.items(|_, p| {
                p.only_keys(&["x", "members"])?;
                Ok((p.req("x", |x| x.vec_dim(dim))?, p.req("members", |n| family(n, dim))?))
            })
            .map(ExhausterSource::PerPoint)
        }),
        _ => Err(root.error("expected exactly one of \"members\" or \"points\"")),
    }
}

pub fn read_exhauster(path: &Path, dim: usize) -> Result<ExhausterSource> {
    exhauster_from_value(&read_json(path)?, dim)
}

fn rows(p: &Polytope) -> Vec<&[f64]> {
    p.vertices().iter().map(Vector::as_slice).collect()
}

/// Output of the `demyanov` command; itself a valid polytope file.
pub fn demyanov_to_json(r: &DemyanovResult) -> Value {
    json!({
        "vertices": rows(&r.set),
        "backend": r.backend,
        "sample_count": r.sample_count,
        "tie_skipped": r.tie_skipped,
        "approx": r.approx,
    })
}
