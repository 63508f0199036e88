#![allow(dead_code)]

use serde_json::{json, Value};

pub fn pbar() -> Value {
    json!({"type": "lti", "num": [1.0], "den": [0.0, 1.0, 1.0]})
}

pub fn lag_saturation() -> Value {
    json!({
        "type": "compose",
        "outer": {"type": "lti", "num": [1.0], "den": [1.0, 1.0]},
        "inner": {"type": "static", "kind": "saturation", "limit": 1.0}
    })
}

pub fn on_pbar(num: &[f64], den: &[f64]) -> Value {
    json!({"type": "compose", "outer": {"type": "lti", "num": num, "den": den}, "inner": pbar()})
}

pub fn c0() -> Value {
    on_pbar(&[1.0], &[1.0])
}

pub fn c2() -> Value {
    on_pbar(&[0.0, 1.0], &[1.0])
}

pub fn sector_01() -> Value {
    json!({"type": "static", "kind": "saturation", "limit": 1.0})
}
