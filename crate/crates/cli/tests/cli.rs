mod common;

use std::process::{Command, Output};

use serde_json::Value;
use srg_cli::svg::Viewport;
use srg_core::Complex64 as C64;

fn srg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn margin_matches_the_api_byte_for_byte() {
    let (c2, plant) = (common::c2().to_string(), common::lag_saturation().to_string());
    let out = srg(&["margin", "--controller", &c2, "--plant", &plant]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rm = v["r_m"].as_f64().unwrap();
    let bound = v["bound"].as_f64().unwrap();
    assert!((rm - 0.875).abs() < 0.875 * 0.02 && (bound - 8.0 / 7.0).abs() < 8.0 / 7.0 * 0.02);
    assert!(v["witness"].is_array());

    let body = serde_json::json!({"controller": common::c2(), "plant": common::lag_saturation()});
    let req = srg_cli::jobs::parse(&body.to_string()).unwrap();
    let api = srg_cli::jobs::to_json(&srg_cli::jobs::margin(&req).unwrap());
    assert_eq!(stdout(&out), api);
}

#[test]
fn bound_of_lag_saturation_is_the_cardioid() {
    let out = srg(&["bound", "--system", &common::lag_saturation().to_string()]);
    assert!(out.status.success());
    let b: srg_core::SrgBound = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &b.region;
    assert!((r.max_modulus() - 1.0).abs() < 1e-3);
    assert!((r.min_re() + 0.125).abs() < 1e-3);
    for k in 0..360 {
        let psi = -std::f64::consts::PI + std::f64::consts::TAU * k as f64 / 360.0;
        assert!((r.radial_extent(psi) - (psi / 2.0).cos().powi(2)).abs() < 1e-3);
    }
}

#[test]
fn inputs_can_come_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("system.json");
    let class = dir.path().join("class.json");
    let out = dir.path().join("bound.json");
    std::fs::write(&sys, common::sector_01().to_string()).unwrap();
    std::fs::write(&class, r#"{"amplitude": 0.5}"#).unwrap();
    let o = srg(&[
        "bound",
        "--system",
        sys.to_str().unwrap(),
        "--class",
        class.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["primitives"][0]["type"], "point_set");
}

#[test]
fn exit_codes_and_error_json() {
    let missing = srg(&["bound", "--system", "/nonexistent/system.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "validation");

    let bad = srg(&["bound", "--system", r#"{"type": "lti", "num": [], "den": [1]}"#]);
    assert_eq!(bad.status.code(), Some(2), "{}", String::from_utf8_lossy(&bad.stderr));

    let pole = srg(&["bound", "--system", r#"{"type": "lti", "num": [1], "den": [1, 0, 1]}"#]);
    assert_eq!(pole.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&pole.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "numeric");

    let port = srg(&["serve", "--port", "80"]);
    assert_eq!(port.status.code(), Some(2));
}

#[test]
fn sample_honors_the_seed() {
    let sys = common::sector_01().to_string();
    let class = r#"{"horizon": 2.0, "dt": 0.01}"#;
    let run = |seed: &str| stdout(&srg(&["sample", "--system", &sys, "--class", class, "--pairs", "10", "--seed", seed]));
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

fn path_bbox(svg: &str) -> (f64, f64, f64, f64) {
    let start = svg.find("<path d=\"").unwrap() + 9;
    let d = &svg[start..start + svg[start..].find('"').unwrap()];
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for cmd in d.split_whitespace().filter(|c| *c != "Z") {
        let (x, y) = cmd[1..].split_once(',').unwrap();
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
    }
    b
}

#[test]
fn render_draws_the_disc_in_place() {
    let out = srg(&["render", "--system", &common::sector_01().to_string()]);
    assert!(out.status.success());
    let svg = stdout(&out);
    assert!(svg.starts_with("<svg") && svg.contains("fill-opacity=\"0.4\""));
    assert_eq!(svg.matches("class=\"marker\"").count(), 2);
    // content spans the unit markers and the disc: [−1, 1] × [−0.5, 0.5]
    let view = Viewport::fit(-1.0, 1.0, -0.5, 0.5);
    let (x0, y1) = view.px(C64::new(0.0, -0.5));
    let (x1, y0) = view.px(C64::new(1.0, 0.5));
    let (bx0, bx1, by0, by1) = path_bbox(&svg);
    for (got, want) in [(bx0, x0), (bx1, x1), (by0, y0), (by1, y1)] {
        assert!((got - want).abs() <= 1.0, "{got} vs {want}");
    }
    assert!(svg.contains(&format!("width=\"{:.0}\"", view.width)));
    assert!(svg.contains(&format!("height=\"{:.0}\"", view.height)));
}

#[test]
fn render_of_a_margin_shows_the_witness() {
    let out = srg(&[
        "render",
        "--controller",
        &common::c2().to_string(),
        "--plant",
        &common::lag_saturation().to_string(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = stdout(&out);
    assert_eq!(svg.matches("class=\"region\"").count(), 2);
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.contains(">0.87"));
}

#[test]
fn render_is_deterministic() {
    let sys = common::lag_saturation().to_string();
    let a = stdout(&srg(&["render", "--system", &sys, "--seed", "1"]));
    let b = stdout(&srg(&["render", "--system", &sys, "--seed", "1"]));
    assert_eq!(a, b);
}
