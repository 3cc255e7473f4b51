use std::path::PathBuf;

use wsharp::run::{run_problem, Output};
use wsharp::{Command, Format, Overrides};
use wsharp_core::certify::CertificateReport;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn report(cmd: Command, file: &str, o: Overrides) -> CertificateReport {
    match run_problem(cmd, &problem(file), o).unwrap() {
        Output::Report(r) => *r,
        other => panic!("not a report: {other:?}"),
    }
}

fn cases() -> Vec<CertificateReport> {
    vec![
        report(Command::CertifyQd, "jump.json", Overrides::default()),
        report(Command::CertifyQd, "square.json", Overrides::default()),
        report(Command::WsharpCheck, "square.json", Overrides { sigma: Some(1.0), ..Default::default() }),
        report(Command::CertifyConstrained, "l1_halfplane.json", Overrides::default()),
        report(Command::CertifyExhauster, "sphere_distance.json", Overrides::default()),
        report(Command::CertifyConstrainedExhauster, "abs_halfline.json", Overrides::default()),
        report(Command::Errorbound, "halfplane_residual.json", Overrides::default()),
    ]
}

#[test]
fn json_round_trip() {
    for r in cases() {
        let text = Output::Report(Box::new(r.clone())).render(Format::Json);
        let back: CertificateReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r, "{text}");
    }
}

#[test]
fn floats_carry_seventeen_digits() {
    let r = report(Command::CertifyQd, "abs.json", Overrides::default());
    let text = wsharp::json::to_string(&r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["tau"]["sharp_inner"].as_f64(), Some(1.0));
    assert!(text.contains("\"sharp_inner\": 1.0000000000000000e0"), "{text}");
    // Field order follows the report structure.
    let kind = text.find("\"kind\"").unwrap();
    let verdict = text.find("\"verdict\"").unwrap();
    let notes = text.find("\"notes\"").unwrap();
    assert!(kind < verdict && verdict < notes);
    for tok in text.split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']') {
        if tok.contains('e') && tok.parse::<f64>().is_ok() && !tok.starts_with('"') {
            let mantissa = tok.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{tok}");
        }
    }
}

#[test]
fn text_sections() {
    let certified = report(Command::CertifyQd, "abs.json", Overrides::default());
    let t = wsharp::render::render_text(&certified);
    assert!(t.contains("certified-empirical") && t.contains("grid-empirical"));
    assert!(t.contains("sharp_inner 1.00000  sound_outer 1.00000"), "{t}");
    assert!(!t.contains("violations ("));
    let refuted = report(Command::WsharpCheck, "square.json", Overrides { sigma: Some(1.0), ..Default::default() });
    let t = wsharp::render::render_text(&refuted);
    assert!(t.contains("violations (first 10 of"), "{t}");
}
