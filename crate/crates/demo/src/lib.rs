//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string; errors become JavaScript exceptions.

use f1kit::cli::{Cell, Doc};
use f1kit::genseries::open_stratum_class;
use f1kit::treeop::stratum_table;
use f1kit::{mbar0_class, tdn_class, Basis, MotClass};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn basis(s: &str) -> Result<Basis, String> {
    s.parse().map_err(|_| format!("unknown basis `{s}`"))
}

fn class_of(space: &str, d: i64, n: i64) -> Result<MotClass, String> {
    let r = match space {
        "mbar0" => mbar0_class(n),
        "tdn" => tdn_class(d, n),
        "open" => open_stratum_class(d, n),
        _ => return Err(format!("unknown space `{space}`")),
    };
    r.map_err(|e| e.to_string())
}

fn first_n(space: &str) -> i64 {
    match space {
        "mbar0" => 3,
        "tdn" => 1,
        _ => 2,
    }
}

/// Classes for `n` up to `max_n`, with Euler characteristic and Poincaré
/// polynomial coefficients.
pub fn class_table_json(space: &str, d: i64, max_n: i64, basis_name: &str) -> Result<String, String> {
    let b = basis(basis_name)?;
    if max_n > 40 {
        return Err("max_n is limited to 40 in the demo".into());
    }
    let mut rows = Vec::new();
    for n in first_n(space)..=max_n {
        let c = class_of(space, d, n)?;
        let poincare: Vec<String> = c.poincare_poly().iter().map(|x| x.to_string()).collect();
        rows.push(json!({
            "n": n,
            "class": c.format(b),
            "euler": c.count_points(0).to_string(),
            "effective": c.is_effective_torus_class(),
            "poincare": poincare,
        }));
    }
    Ok(Value::Array(rows).to_string())
}

/// `#X(F_{1^m})` for `m = 0..=max_m`, as decimal strings.
pub fn point_curve_json(space: &str, d: i64, n: i64, max_m: u64) -> Result<String, String> {
    if max_m > 1000 {
        return Err("max_m is limited to 1000 in the demo".into());
    }
    let c = class_of(space, d, n)?;
    let pts: Vec<Value> = (0..=max_m)
        .map(|m| json!([m, c.count_points(m).to_string()]))
        .collect();
    Ok(json!({ "class": c.format(Basis::T), "points": pts }).to_string())
}

/// The boundary strata of `T_{d,n}` with their classes.
pub fn strata_json(d: i64, n: i64, basis_name: &str) -> Result<String, String> {
    let b = basis(basis_name)?;
    if n > 6 {
        return Err("n is limited to 6 in the demo".into());
    }
    let table = stratum_table(d, n).map_err(|e| e.to_string())?;
    let sum: MotClass = table.iter().map(|r| r.class.clone()).sum();
    let expected = tdn_class(d, n).map_err(|e| e.to_string())?;
    let rows = table
        .iter()
        .map(|r| {
            vec![
                Cell::text(&r.tree),
                Cell::count(r.codimension),
                Cell::text(r.class.format(b)),
            ]
        })
        .collect();
    let doc = Doc::table(
        &["tree", "codimension", "class"],
        rows,
        vec![
            ("sum", Cell::text(sum.format(b))),
            ("matches", Cell::bool(sum == expected)),
        ],
    );
    let bytes = f1kit::cli::emit(&doc, f1kit::cli::Format::Json);
    Ok(String::from_utf8(bytes).expect("json is utf-8").trim_end().to_string())
}

#[wasm_bindgen]
pub fn class_table(space: &str, d: i32, max_n: i32, basis: &str) -> Result<String, JsError> {
    class_table_json(space, d.into(), max_n.into(), basis).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn point_curve(space: &str, d: i32, n: i32, max_m: u32) -> Result<String, JsError> {
    point_curve_json(space, d.into(), n.into(), max_m.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn strata(d: i32, n: i32, basis: &str) -> Result<String, JsError> {
    strata_json(d.into(), n.into(), basis).map_err(|e| JsError::new(&e))
}
