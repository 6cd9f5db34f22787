use std::fmt::Write as _;

use serde_json::{json, Value};

use seedpattern::pattern::{walk_node, PatternNode, Verification, WalkCache};
use seedpattern::poly::indexed_vars;
use seedpattern::principal_ext::{extend as extend_matrix, extended_pattern_blocks};
use seedpattern::semifield::{Semifield, SemifieldKind};
use seedpattern::separation::{compare_routes, laurent_form, rho_coherence, Seed};
use seedpattern::suite::{identity_checks, run_suite, CheckGroup, SuiteConfig};
use seedpattern::tables::{A2Table, A2Tables};
use seedpattern::{Error, ExchangeMatrix, IntMatrix, Result};

/// What a command produced, in both formats. `ok` is false when an identity
/// failed without aborting the command.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

fn one_based(walk: &[usize]) -> Vec<usize> {
    walk.iter().map(|l| l + 1).collect()
}

fn walk_label(walk: &[usize]) -> String {
    let w: Vec<String> = walk.iter().map(|l| (l + 1).to_string()).collect();
    format!("[{}]", w.join(","))
}

fn block(out: &mut String, name: &str, m: &IntMatrix) {
    let _ = writeln!(out, "{name}:");
    out.push_str(&m.to_aligned_string());
}

fn render_node(node: &PatternNode) -> String {
    let mut out = format!("walk {}\n", walk_label(&node.walk));
    block(&mut out, "B_t", node.b_t.matrix());
    block(&mut out, "C", &node.c);
    block(&mut out, "G", &node.g);
    block(&mut out, "F", &node.f);
    let h = node.h_matrix().map(|h| h.to_aligned_string()).unwrap_or_else(|e| format!("({e})\n"));
    let _ = write!(out, "H:\n{h}");
    out.push_str("F-polynomials:\n");
    for (i, p) in node.fpolys.iter().enumerate() {
        let _ = writeln!(out, "  F{} = {p}", i + 1);
    }
    out
}

/// Whether `e` reports a failed identity rather than bad input or a limit.
pub fn is_failure(e: &Error) -> bool {
    crate::error_code(e) == 3
}

pub fn semifield_kind(arg: crate::SemifieldArg) -> SemifieldKind {
    match arg {
        crate::SemifieldArg::Tropical => SemifieldKind::Tropical,
        crate::SemifieldArg::Inverted => SemifieldKind::TropicalInverted,
        crate::SemifieldArg::Universal => SemifieldKind::Universal,
        crate::SemifieldArg::One => SemifieldKind::OneElement,
    }
}

fn kind_name(kind: SemifieldKind) -> &'static str {
    match kind {
        SemifieldKind::Tropical => "tropical",
        SemifieldKind::TropicalInverted => "inverted",
        SemifieldKind::Universal => "universal",
        SemifieldKind::OneElement => "one",
    }
}

fn seed_section(b: &ExchangeMatrix, walk: &[usize], kind: SemifieldKind, cache: &WalkCache, level: Verification) -> Result<(Value, String)> {
    let sf = Semifield::new(kind, indexed_vars("y", b.rank()));
    let seed: Seed = compare_routes(b, walk, &sf, cache, level)?.pop().expect("nonempty");
    let y: Vec<String> = seed.y.iter().map(|e| sf.render(e)).collect();
    let x: Vec<String> = seed.x.iter().map(|r| r.render()).collect();
    let mut text = format!("seed over {}:\n", kind_name(kind));
    for (i, v) in y.iter().enumerate() {
        let _ = writeln!(text, "  y{} = {v}", i + 1);
    }
    for (i, v) in x.iter().enumerate() {
        let _ = writeln!(text, "  x{} = {v}", i + 1);
    }
    let mut json = json!({ "semifield": kind_name(kind), "Y": y, "X": x });
    if kind == SemifieldKind::Tropical {
        let laurent: Vec<String> = seed.x.iter().map(laurent_form).map(|p| p.map(|p| p.to_string())).collect::<Result<_>>()?;
        text.push_str("Laurent forms:\n");
        for (i, v) in laurent.iter().enumerate() {
            let _ = writeln!(text, "  x{} = {v}", i + 1);
        }
        json["laurent"] = json!(laurent);
    }
    Ok((json, text))
}

pub fn mutate(b: &ExchangeMatrix, walk: &[usize], checked: bool, semifield: Option<SemifieldKind>) -> Result<Outcome> {
    if let Some(w) = walk.windows(2).find(|w| w[0] == w[1]) {
        eprintln!("warning: walk repeats label {} consecutively; the two steps cancel", w[0] + 1);
    }
    let level = if checked { Verification::Checked } else { Verification::Fast };
    let cache = WalkCache::new();
    let node = walk_node(b, walk, &cache, level)?;
    let mut json = node.to_json();
    let mut text = render_node(&node);
    if let Some(kind) = semifield {
        let (j, t) = seed_section(b, walk, kind, &cache, level)?;
        json["seed"] = j;
        text.push_str(&t);
    }
    Ok(Outcome { json, text, ok: true })
}

/// All label sequences of length at most `max_len`, shortest first.
pub fn all_walks(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..n).map(move |k| {
                    let mut v = w.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

pub fn check_duality(b: &ExchangeMatrix, walks: &[Vec<usize>], rho: bool) -> Result<Outcome> {
    let cache = WalkCache::new();
    let mut counts: Vec<(String, usize)> = Vec::new();
    let mut failures = Vec::new();
    for walk in walks {
        let mut results = identity_checks(b, walk, &cache);
        if rho {
            for k in 0..b.rank() {
                results.push((format!("ρ_k re-rooting, direction {}", k + 1), rho_coherence(b, walk, k)));
            }
        }
        for (name, r) in results {
            match r {
                Ok(()) => match counts.iter_mut().find(|(n, _)| *n == name) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((name, 1)),
                },
                Err(e) if is_failure(&e) => failures.push((walk.clone(), name, e.to_string())),
                Err(e) => return Err(e),
            }
        }
    }
    let ok = failures.is_empty();
    let mut text = String::new();
    for (name, c) in &counts {
        let _ = writeln!(text, "{c:>6} passed  {name}");
    }
    for (w, name, e) in &failures {
        let _ = writeln!(text, "FAIL walk {} {name}: {e}", walk_label(w));
    }
    let _ = writeln!(text, "{} walks, {} failures", walks.len(), failures.len());
    let json = json!({
        "B": b.matrix().to_json(),
        "walks": walks.len(),
        "passed": ok,
        "counts": counts.iter().map(|(n, c)| json!({ "identity": n, "passed": c })).collect::<Vec<_>>(),
        "failures": failures
            .iter()
            .map(|(w, n, e)| json!({ "walk": one_based(w), "identity": n, "error": e }))
            .collect::<Vec<_>>(),
    });
    Ok(Outcome { json, text, ok })
}

pub fn extend(b: &ExchangeMatrix, walk: &[usize]) -> Result<Outcome> {
    let ext = extend_matrix(b)?;
    let cache = WalkCache::new();
    let report = extended_pattern_blocks(b, walk, &cache, Verification::Checked)?;
    let big = walk_node(ext.full(), walk, &cache, Verification::Fast)?;
    let d: Vec<String> = ext.full().symmetrizer().iter().map(|v| v.to_string()).collect();
    let mut text = String::new();
    block(&mut text, "extended B", ext.full().matrix());
    let _ = writeln!(text, "symmetrizer: [{}]", d.join(", "));
    block(&mut text, &format!("extended B at walk {}", walk_label(walk)), big.b_t.matrix());
    for (name, holds) in report.entries() {
        let _ = writeln!(text, "{} {name}", if holds { "ok  " } else { "FAIL" });
    }
    let json = json!({
        "B": b.matrix().to_json(),
        "extended": ext.full().matrix().to_json(),
        "symmetrizer": d,
        "extended_at_walk": big.b_t.matrix().to_json(),
        "blocks": report.to_json(),
    });
    Ok(Outcome { json, text, ok: report.holds() })
}

pub fn tables_a2(which: Option<&str>) -> Result<Outcome> {
    let table = match which {
        None | Some("all") => None,
        Some(name) => Some(
            A2Table::ALL
                .into_iter()
                .find(|t| t.name() == name)
                .ok_or_else(|| Error::Parse(format!("unknown table {name:?}")))?,
        ),
    };
    let tables = A2Tables::compute(&WalkCache::new())?;
    let all = tables.to_json();
    let (json, text) = match table {
        None => (all, tables.render_all()),
        Some(t) => (all[t.name().replace('-', "_")].clone(), tables.render(t)),
    };
    Ok(Outcome { json, text, ok: true })
}

pub fn parse_groups(s: Option<&str>) -> Result<Vec<CheckGroup>> {
    let Some(s) = s else {
        return Ok(CheckGroup::ALL.to_vec());
    };
    s.split(',')
        .map(|name| {
            let name = name.trim();
            CheckGroup::ALL
                .into_iter()
                .find(|g| g.name() == name)
                .ok_or_else(|| Error::Parse(format!("unknown check group {name:?}")))
        })
        .collect()
}

pub fn random_suite(config: &SuiteConfig, groups: &[CheckGroup]) -> Result<Outcome> {
    let report = run_suite(config, groups)?;
    let mut text = report.render_text();
    text.push('\n');
    Ok(Outcome { json: report.to_json(), text, ok: report.passed() })
}
