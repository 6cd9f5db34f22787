//! Browser bindings. Every function takes plain strings and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use seedpattern::pattern::{walk_node, Verification, WalkCache};
use seedpattern::suite::identity_checks;
use seedpattern::tables::A2Tables;
use seedpattern::{Error, ExchangeMatrix, IntMatrix};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Longest walk length `check_duality` enumerates.
const MAX_DUALITY_LEN: usize = 7;

fn parse_matrix(text: &str) -> Result<ExchangeMatrix, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    ExchangeMatrix::new(IntMatrix::from_json(&v)?)
}

/// 1-based labels separated by commas or spaces.
fn parse_walk(text: &str, n: usize) -> Result<Vec<usize>, Error> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(l) if (1..=n).contains(&l) => Ok(l - 1),
            _ => Err(Error::Parse(format!("walk label {t:?} is not in 1..={n}"))),
        })
        .collect()
}

fn respond(r: Result<Value, Error>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

/// C-, G-, F-, H-matrices and F-polynomials at the end of `walk`.
#[wasm_bindgen]
pub fn mutate(matrix: &str, walk: &str) -> String {
    respond((|| {
        let b = parse_matrix(matrix)?;
        let walk = parse_walk(walk, b.rank())?;
        Ok(walk_node(&b, &walk, &WalkCache::new(), Verification::Checked)?.to_json())
    })())
}

/// Runs the identity checks on every walk of length at most `max_len`.
#[wasm_bindgen]
pub fn check_duality(matrix: &str, max_len: usize) -> String {
    respond((|| {
        let b = parse_matrix(matrix)?;
        let max_len = max_len.min(MAX_DUALITY_LEN);
        let cache = WalkCache::new();
        let (mut walks, mut checks, mut failures) = (vec![Vec::new()], 0usize, Vec::new());
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_len {
            frontier = frontier
                .iter()
                .flat_map(|w| (0..b.rank()).map(move |k| [w.as_slice(), &[k]].concat()))
                .collect();
            walks.extend(frontier.iter().cloned());
        }
        for w in &walks {
            for (name, r) in identity_checks(&b, w, &cache) {
                checks += 1;
                if let Err(e) = r {
                    let labels: Vec<usize> = w.iter().map(|l| l + 1).collect();
                    failures.push(json!({ "walk": labels, "identity": name, "error": e.to_string() }));
                }
            }
        }
        Ok(json!({
            "walks": walks.len(),
            "max_len": max_len,
            "checks": checks,
            "passed": failures.is_empty(),
            "failures": failures,
        }))
    })())
}

/// The four type A2 tables, as JSON plus their text rendering.
#[wasm_bindgen]
pub fn tables_a2() -> String {
    respond((|| {
        let t = A2Tables::compute(&WalkCache::new())?;
        let mut v = t.to_json();
        v["text"] = Value::String(t.render_all());
        Ok(v)
    })())
}
