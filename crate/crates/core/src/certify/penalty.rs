//! `Demcoqd [g]_+(x) + Demcoqd |h|(x)` by sign cases of `g(x)` and `h(x)`.

use crate::demyanov::{demyanov_diff, Backend};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::qdcalc::{quasidiff, FuncExpr, QuasiDiff, Sign};

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyDemcoqd {
    /// `Demcoqd [g]_+ + Demcoqd |h|` as computed by the backend.
    pub set: Polytope,
    /// Sum of the outer bounds `sub + sup` of the two penalty terms.
    pub outer: Polytope,
    pub g_sign: Option<Sign>,
    pub h_sign: Option<Sign>,
    /// Case 1-7 when both constraints are present and `(g, h)` falls in one
    /// of them; `None` on the feasible set or with a single constraint.
    pub case: Option<u8>,
    pub backend: Backend,
    pub approx: bool,
}

/// Case number for a pair of signs.
pub fn case_of(g: Sign, h: Sign) -> Option<u8> {
    use Sign::*;
    match (g, h) {
        (Negative, Negative) => Some(1),
        (Negative, Positive) => Some(2),
        (Zero, Negative) => Some(3),
        (Zero, Positive) => Some(4),
        (Positive, Negative) => Some(5),
        (Positive, Positive) => Some(6),
        (Positive, Zero) => Some(7),
        _ => None,
    }
}

struct Term {
    set: Polytope,
    outer: Polytope,
    backend: Backend,
}

/// `Demcoqd [g]_+(x)`: `{0}` for `g < 0`, `∂̲g ⊖ (-∂̄g)` for `g > 0` and
/// `clco[∂̲g ∪ (-∂̄g)] ⊖ (-∂̄g)` for `g = 0`.
fn pospart_term(q: &QuasiDiff, sign: Sign) -> Result<Term> {
    let dim = q.dim();
    let minus_sup = q.sup.neg();
    let (a, b, sup) = match sign {
        Sign::Negative => {
            let o = Polytope::origin(dim);
            return Ok(Term { set: o.clone(), outer: o, backend: exact_or_sampled(dim) });
        }
        Sign::Positive => (q.sub.clone(), minus_sup, q.sup.clone()),
        Sign::Zero => (Polytope::conv_union(&[q.sub.clone(), minus_sup.clone()])?, minus_sup, q.sup.clone()),
    };
    let d = demyanov_diff(&a, &b)?;
    Ok(Term { outer: a.minkowski_sum(&sup)?, set: d.set, backend: d.backend })
}

/// `Demcoqd |h|(x)`: `(-∂̄h) ⊖ ∂̲h` for `h < 0`, `∂̲h ⊖ (-∂̄h)` for `h > 0` and
/// `2 clco[∂̲h ∪ (-∂̄h)] ⊖ (∂̲h - ∂̄h)` for `h = 0`.
fn abs_term(q: &QuasiDiff, sign: Sign) -> Result<Term> {
    let minus_sup = q.sup.neg();
    let (a, b, sup) = match sign {
        Sign::Negative => (minus_sup, q.sub.clone(), q.sub.neg()),
        Sign::Positive => (q.sub.clone(), minus_sup, q.sup.clone()),
        Sign::Zero => {
            let hull = Polytope::conv_union(&[q.sub.clone(), minus_sup.clone()])?.scale(2.0)?;
            let sup = q.sup.minkowski_sum(&q.sub.neg())?;
            let b = sup.neg();
            (hull, b, sup)
        }
    };
    let d = demyanov_diff(&a, &b)?;
    Ok(Term { outer: a.minkowski_sum(&sup)?, set: d.set, backend: d.backend })
}

fn exact_or_sampled(dim: usize) -> Backend {
    super::unconstrained::default_backend(dim)
}

/// Penalty Demcoqd at `x`. Signs are decided with the band
/// `tie_tol (1 + |value|)`; the zero-sign formulas are used on the boundary
/// of the feasible set as well, so every point follows the same per-term rule.
pub fn penalty_demcoqd(g: Option<&FuncExpr>, h: Option<&FuncExpr>, x: &[f64], tie_tol: f64) -> Result<PenaltyDemcoqd> {
    if g.is_none() && h.is_none() {
        return Err(Error::Empty("constraint functions"));
    }
    let dim = x.len();
    let mut set = Polytope::origin(dim);
    let mut outer = Polytope::origin(dim);
    let mut backend = exact_or_sampled(dim);
    let mut approx = false;
    let mut signs = [None, None];
    for (k, e) in [g, h].into_iter().enumerate() {
        let Some(e) = e else { continue };
        let v = e.evaluate(x)?;
        let sign = Sign::of(v, tie_tol * (1.0 + v.abs()));
        signs[k] = Some(sign);
        let q = quasidiff(e, x)?;
        approx |= q.approx;
        let t = if k == 0 { pospart_term(&q, sign)? } else { abs_term(&q, sign)? };
        if !t.backend.is_exact() {
            backend = t.backend;
        }
        set = set.minkowski_sum(&t.set)?;
        outer = outer.minkowski_sum(&t.outer)?;
    }
    let case = match signs {
        [Some(gs), Some(hs)] => case_of(gs, hs),
        _ => None,
    };
    Ok(PenaltyDemcoqd { set, outer, g_sign: signs[0], h_sign: signs[1], case, backend, approx })
}
