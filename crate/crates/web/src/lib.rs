//! Browser bindings. Every export returns a JSON string; errors come back as
//! a JS string.

use serde_json::json;
use wasm_bindgen::prelude::*;

use diagmon::cells::{analyze_within, Params};
use diagmon::diagram::{Budget, ProductOutcome};
use diagmon::nonss::{simple_dims, Family};
use diagmon::{compose, enumerate, evaluate, EvaluationMap, Flavor};

/// Kept small so the page stays responsive.
const PAGE_BUDGET: Budget = Budget { partition_max_n: 3, other_max_n: 5 };

fn check_size(flavor: Flavor, n: usize) -> Result<(), String> {
    let max = if flavor == Flavor::Partition || flavor == Flavor::PlanarPartition {
        PAGE_BUDGET.partition_max_n
    } else {
        PAGE_BUDGET.other_max_n
    };
    if n > max {
        return Err(format!("n = {n} is too large for the page (max {max} for {})", flavor.name()));
    }
    Ok(())
}

pub fn analyze_json(flavor: &str, n: usize, params: &str) -> Result<String, String> {
    let flavor: Flavor = flavor.parse().map_err(|e: diagmon::Error| e.to_string())?;
    check_size(flavor, n)?;
    let params: Params = params.parse().map_err(|e: diagmon::Error| e.to_string())?;
    let a = analyze_within(flavor, n, &params, 0, &PAGE_BUDGET).map_err(|e| e.to_string())?;
    let classes: Vec<_> = a
        .j_classes
        .iter()
        .map(|c| json!({ "apex": c.apex, "rows": c.rows, "cols": c.cols, "h": c.h_size, "rank": c.rank }))
        .collect();
    Ok(json!({
        "flavor": flavor.name(),
        "n": n,
        "params": a.params,
        "size": a.size,
        "classes": classes,
        "simple_dims": a.simple_dims,
        "apexes": a.apexes,
    })
    .to_string())
}

pub fn diagrams_json(flavor: &str, n: usize) -> Result<String, String> {
    let flavor: Flavor = flavor.parse().map_err(|e: diagmon::Error| e.to_string())?;
    check_size(flavor, n)?;
    let ds = enumerate(flavor, n).map_err(|e| e.to_string())?;
    Ok(json!(ds.iter().map(|d| d.to_string()).collect::<Vec<_>>()).to_string())
}

/// Stacks diagram `top` on diagram `bottom` (indices into the enumeration).
pub fn product_json(flavor: &str, n: usize, top: usize, bottom: usize, params: &str) -> Result<String, String> {
    let flavor: Flavor = flavor.parse().map_err(|e: diagmon::Error| e.to_string())?;
    check_size(flavor, n)?;
    let a: EvaluationMap = params.parse().map_err(|e: diagmon::Error| e.to_string())?;
    let ds = enumerate(flavor, n).map_err(|e| e.to_string())?;
    let pick = |i: usize| ds.get(i).ok_or_else(|| format!("no diagram {i}; there are {}", ds.len()));
    let (x, y) = (pick(top)?, pick(bottom)?);
    let out: ProductOutcome = compose(x, y).map_err(|e| e.to_string())?;
    let floats: Vec<_> = out.floats.iter().map(|(g, c)| json!({ "genus": g, "count": c })).collect();
    let value = evaluate(&out, &a).map(|d| d.to_string());
    Ok(json!({
        "top": x.to_string(),
        "bottom": y.to_string(),
        "diagram": out.result.to_string(),
        "floats": floats,
        "evaluated": value.unwrap_or_else(|| "0".into()),
    })
    .to_string())
}

pub fn nonss_json(family: &str, n: usize, l: usize) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e: diagmon::Error| e.to_string())?;
    if n > 200 {
        return Err("n is capped at 200 on the page".into());
    }
    let dims = simple_dims(family, n, l).map_err(|e| e.to_string())?;
    let rows: Vec<_> = dims.iter().map(|(k, b)| json!({ "k": k, "b": b.to_string() })).collect();
    Ok(json!(rows).to_string())
}

#[wasm_bindgen]
pub fn analyze(flavor: &str, n: usize, params: &str) -> Result<String, JsValue> {
    analyze_json(flavor, n, params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn diagrams(flavor: &str, n: usize) -> Result<String, JsValue> {
    diagrams_json(flavor, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn product(flavor: &str, n: usize, top: usize, bottom: usize, params: &str) -> Result<String, JsValue> {
    product_json(flavor, n, top, bottom, params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn nonss(family: &str, n: usize, l: usize) -> Result<String, JsValue> {
    nonss_json(family, n, l).map_err(|e| JsValue::from_str(&e))
}
