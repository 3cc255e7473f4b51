//! Human-readable report: six significant digits, fixed section order.

use std::fmt::Write;

use wsharp_core::certify::{fmt6, CertificateReport, Modulus, ReportKind, Verdict};

/// Violations listed in the text report.
pub const TEXT_VIOLATIONS: usize = 10;

fn point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|&v| fmt6(v)).collect();
    format!("({})", parts.join(", "))
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| String::from("n/a"), fmt6)
}

fn kind_label(k: ReportKind) -> &'static str {
    match k {
        ReportKind::WsharpCheck => "weak sharpness check",
        ReportKind::Quasidifferential => "quasidifferential nondegeneracy",
        ReportKind::Constrained => "exact penalty (constrained)",
        ReportKind::Exhauster => "lower exhauster nondegeneracy",
        ReportKind::ConstrainedExhauster => "lower exhauster over a polyhedron",
        ReportKind::ErrorBound => "error bound",
    }
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::CertifiedEmpirical => "certified-empirical",
        Verdict::RefutedOnGrid => "refuted-on-grid",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn modulus(out: &mut String, name: &str, m: &Modulus) {
    let _ = write!(out, "{name:<8} sharp_inner {}  sound_outer {}", fmt6(m.sharp_inner), fmt6(m.sound_outer));
    if let Some(r) = m.representative_outer {
        let _ = write!(out, "  representative_outer {}", fmt6(r));
    }
    let _ = writeln!(out, "  at {}", point(&m.witness));
}

pub fn render_text(r: &CertificateReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "certificate: {}", kind_label(r.kind));
    let _ = writeln!(o, "verdict:  {} (exit {})", verdict_label(r.verdict), r.exit_code());
    let _ = writeln!(o, "summary:  {}", r.summary);
    let _ = writeln!(o, "note:     {}", r.disclaimer);
    let backend = r.backend.map_or_else(
        || String::from("none"),
        |b| serde_json::to_value(b).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
    );
    let _ = writeln!(o, "seed:     {}  backend: {}{}", r.seed, backend, if r.approx { " (ball stand-in)" } else { "" });
    let g = &r.grid;
    let bounds: Vec<String> = g.bounds.iter().map(|b| format!("[{}, {}]", fmt6(b[0]), fmt6(b[1]))).collect();
    let _ = writeln!(
        o,
        "grid:     {} points ({} per axis, {} feasible) on {}",
        g.points,
        g.resolution,
        g.feasible_points,
        bounds.join(" x ")
    );
    let a = &r.argmin;
    let _ = writeln!(o, "argmin:   {} points, inf f = {} (band {})", a.count, fmt6(a.inf_f_hat), fmt6(a.tol));

    if let Some(m) = &r.tau {
        modulus(&mut o, "tau:", m);
    }
    if let Some(m) = &r.zeta {
        modulus(&mut o, "zeta:", m);
    }
    if let Some(p) = &r.probe {
        let _ = writeln!(
            o,
            "probe:    {} segments, condition {}, sigma_hat {}",
            p.points_probed,
            opt(p.condition),
            opt(p.sigma_hat)
        );
    }
    if let Some(pen) = &r.penalty {
        let src = match pen.lipschitz_source {
            wsharp_core::certify::LipschitzSource::Supplied => "supplied",
            wsharp_core::certify::LipschitzSource::Estimated => "estimated",
        };
        let cases: Vec<String> = (1..8).map(|c| format!("{c}:{}", pen.case_counts[c])).collect();
        let _ = writeln!(
            o,
            "penalty:  lipschitz {} ({src}), lambda {}, cases {} other:{}, argmin consistent: {}",
            fmt6(pen.lipschitz),
            fmt6(pen.lambda),
            cases.join(" "),
            pen.case_counts[0],
            if pen.argmin_consistent { "yes" } else { "no" }
        );
    }
    if let Some(e) = &r.exhauster {
        let _ = writeln!(
            o,
            "exhauster: {:?}, missing at {} points, Hadamard mismatches {} of {}, solver failures {}",
            e.origin,
            e.missing.len(),
            e.hadamard_mismatches,
            e.hadamard_checked,
            e.solver_failures.len()
        );
    }
    if let Some(eb) = &r.error_bound {
        let _ = writeln!(
            o,
            "level set: alpha {}, beta {}, {} grid points + {} edge points; tau {}, tau_hat {}, sup ratio {}",
            fmt6(eb.alpha),
            fmt6(eb.beta),
            eb.level_points,
            eb.edge_points,
            fmt6(eb.tau),
            opt(eb.tau_hat),
            opt(eb.sup_ratio)
        );
    }
    if let Some(c) = &r.check {
        let _ = writeln!(
            o,
            "check:    sigma {}, slack {}, {} violations, sigma_hat {}{}",
            fmt6(c.sigma),
            fmt6(c.slack),
            c.violation_count,
            opt(c.sigma_hat),
            c.sigma_hat_witness.as_deref().map_or_else(String::new, |w| format!(" at {}", point(w)))
        );
        if c.violation_count > 0 {
            let shown = c.violations.len().min(TEXT_VIOLATIONS);
            let _ = writeln!(o, "violations (first {shown} of {}):", c.violation_count);
            for v in &c.violations[..shown] {
                let _ = writeln!(o, "  x = {}  lhs {}  rhs {}", point(&v.point), fmt6(v.lhs), fmt6(v.rhs));
            }
        }
    }
    if let Some(s) = &r.slope_check {
        let _ = writeln!(
            o,
            "slope:    {} points checked, {} below the condition value, worst margin {}",
            s.checked,
            s.failures,
            fmt6(s.worst_margin)
        );
    }
    if !r.smoothness.is_empty() {
        let flagged = r.smoothness.iter().filter(|f| f.looks_differentiable).count();
        let _ = writeln!(
            o,
            "smoothness: {} boundary argmin points probed, {flagged} look differentiable",
            r.smoothness.len()
        );
    }
    if !r.notes.is_empty() {
        let _ = writeln!(o, "notes:");
        for n in &r.notes {
            let _ = writeln!(o, "  - {n}");
        }
    }
    o
}
