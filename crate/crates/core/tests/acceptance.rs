//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use seedpattern::pattern::{walk_node, Verification, WalkCache};
use seedpattern::poly::{indexed_vars, parse_poly, Vars};
use seedpattern::semifield::{Semifield, SubtractionFreeRational};
use seedpattern::separation::{ambient_vars, direct_walk, separated_seed, Seed};
use seedpattern::suite::{run_suite, CheckGroup, Flavor, SuiteConfig};
use seedpattern::tables::{a2_matrix, moved_root_matrix_rows, moved_root_seeds, A2_WALK};
use seedpattern::IntMatrix;

type Mat = [[i64; 2]; 2];

/// `(C, G, F)` at `t₀..t₅` along the walk 2,1,2,1,2 from `[[0,1],[-1,0]]`.
const ROOT_MATRICES: [(Mat, Mat, Mat); 6] = [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]),
    ([[1, 0], [0, -1]], [[1, 0], [0, -1]], [[0, 0], [0, 1]]),
    ([[-1, 0], [0, -1]], [[-1, 0], [0, -1]], [[1, 0], [1, 1]]),
    ([[-1, 0], [-1, 1]], [[-1, -1], [0, 1]], [[1, 1], [1, 0]]),
    ([[1, -1], [1, 0]], [[0, -1], [1, 1]], [[0, 1], [0, 0]]),
    ([[0, 1], [1, 0]], [[0, 1], [1, 0]], [[0, 0], [0, 0]]),
];

/// The same data at `t₀` when the root moves to `t` with matrix `B_tᵀ`.
const MOVED_MATRICES: [(Mat, Mat, Mat); 6] = [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]),
    ([[1, 0], [0, -1]], [[1, 0], [0, -1]], [[0, 0], [0, 1]]),
    ([[-1, 0], [0, -1]], [[-1, 0], [0, -1]], [[1, 1], [0, 1]]),
    ([[-1, 0], [-1, 1]], [[-1, -1], [0, 1]], [[1, 1], [1, 0]]),
    ([[0, 1], [-1, 1]], [[1, 1], [-1, 0]], [[0, 0], [1, 0]]),
    ([[0, 1], [1, 0]], [[0, 1], [1, 0]], [[0, 0], [0, 0]]),
];

/// A fraction given as products of factors; `⊕` is written `+`.
type Frac = (&'static [&'static str], &'static [&'static str]);

/// `(y1, y2, x1, x2)` at `t₀..t₅`, root `t₀`.
const ROOT_SEEDS: [[Frac; 4]; 6] = [
    [(&["y1"], &[]), (&["y2"], &[]), (&["x1"], &[]), (&["x2"], &[])],
    [
        (&["y1", "y2 + 1"], &[]),
        (&["1"], &["y2"]),
        (&["x1"], &[]),
        (&["x1*y2 + 1"], &["y2 + 1", "x2"]),
    ],
    [
        (&["1"], &["y1", "y2 + 1"]),
        (&["y1*y2 + y1 + 1"], &["y2"]),
        (&["x1*y1*y2 + y1 + x2"], &["y1*y2 + y1 + 1", "x1*x2"]),
        (&["x1*y2 + 1"], &["y2 + 1", "x2"]),
    ],
    [
        (&["y1 + 1"], &["y1*y2"]),
        (&["y2"], &["y1*y2 + y1 + 1"]),
        (&["x1*y1*y2 + y1 + x2"], &["y1*y2 + y1 + 1", "x1*x2"]),
        (&["y1 + x2"], &["x1", "y1 + 1"]),
    ],
    [
        (&["y1*y2"], &["y1 + 1"]),
        (&["1"], &["y1"]),
        (&["x2"], &[]),
        (&["y1 + x2"], &["x1", "y1 + 1"]),
    ],
    [(&["y2"], &[]), (&["y1"], &[]), (&["x2"], &[]), (&["x1"], &[])],
];

/// `(y1, y2, x1, x2)` at `t₀` with the root moved to `t`.
const MOVED_SEEDS: [[Frac; 4]; 6] = [
    [(&["y1"], &[]), (&["y2"], &[]), (&["x1"], &[]), (&["x2"], &[])],
    [
        (&["y1", "y2 + 1"], &[]),
        (&["1"], &["y2"]),
        (&["x1"], &[]),
        (&["y2*x1 + 1"], &["y2 + 1", "x2"]),
    ],
    [
        (&["y1*y2 + y2 + 1"], &["y1"]),
        (&["1"], &["y2", "y1 + 1"]),
        (&["y1*x2 + 1"], &["y1 + 1", "x1"]),
        (&["y1*y2*x2 + y2 + x1"], &["y1*y2 + y2 + 1", "x1*x2"]),
    ],
    [
        (&["y1 + 1"], &["y1*y2"]),
        (&["y2"], &["y1*y2 + y1 + 1"]),
        (&["y1*y2*x1 + y1 + x2"], &["y1*y2 + y1 + 1", "x1*x2"]),
        (&["y1 + x2"], &["y1 + 1", "x1"]),
    ],
    [
        (&["1"], &["y2"]),
        (&["y1*y2"], &["y2 + 1"]),
        (&["y2 + x1"], &["y2 + 1", "x2"]),
        (&["x1"], &[]),
    ],
    [(&["y2"], &[]), (&["y1"], &[]), (&["x2"], &[]), (&["x1"], &[])],
];

fn product(vars: &Vars, factors: &[&str]) -> SubtractionFreeRational {
    factors.iter().fold(SubtractionFreeRational::one(vars.clone()), |acc, f| {
        acc.mul(&SubtractionFreeRational::from_poly(parse_poly(vars, f).expect("golden factor")))
            .expect("same ring")
    })
}

fn fraction(vars: &Vars, (num, den): Frac) -> SubtractionFreeRational {
    product(vars, num).div(&product(vars, den)).expect("nonzero")
}

fn mat(m: &Mat) -> IntMatrix {
    IntMatrix::from_rows(m).expect("2x2")
}

/// Whether `seed` equals the golden row, semantically.
fn seed_matches(seed: &Seed, golden: &[Frac; 4]) -> Result<bool, String> {
    let yv = indexed_vars("y", 2);
    let xv = ambient_vars(2);
    for i in 0..2 {
        let y = seed.y[i].as_universal().ok_or("coefficient outside the universal semifield")?;
        if !y.semantic_eq(&fraction(&yv, golden[i])).map_err(|e| e.to_string())? {
            return Ok(false);
        }
        if !seed.x[i].semantic_eq(&fraction(&xv, golden[2 + i])).map_err(|e| e.to_string())? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn root_matrices(cache: &WalkCache) -> Result<(), String> {
    for (t, (c, g, f)) in ROOT_MATRICES.iter().enumerate() {
        let node = walk_node(&a2_matrix(), &A2_WALK[..t], cache, Verification::Checked).map_err(|e| e.to_string())?;
        for (name, got, want) in [("C", &node.c, c), ("G", &node.g, g), ("F", &node.f, f)] {
            if *got != mat(want) {
                return Err(format!("t{t} {name}: got {got}, want {}", mat(want)));
            }
        }
    }
    Ok(())
}

fn root_seeds(cache: &WalkCache) -> Result<(), String> {
    let b = a2_matrix();
    let sf = Semifield::universal(indexed_vars("y", 2));
    let start = Seed::initial(&b, &sf).map_err(|e| e.to_string())?;
    let y0 = start.y.clone();
    let direct = direct_walk(start, &A2_WALK, &sf).map_err(|e| e.to_string())?;
    for (t, golden) in ROOT_SEEDS.iter().enumerate() {
        let node = walk_node(&b, &A2_WALK[..t], cache, Verification::Checked).map_err(|e| e.to_string())?;
        let sep = separated_seed(&node, &sf, &y0).map_err(|e| e.to_string())?;
        if !seed_matches(&direct[t], golden)? {
            return Err(format!("t{t}: direct mutation differs"));
        }
        if !seed_matches(&sep, golden)? {
            return Err(format!("t{t}: separation formulas differ"));
        }
    }
    Ok(())
}

fn moved_root(cache: &WalkCache) -> Result<(), String> {
    let seeds = moved_root_seeds(cache).map_err(|e| e.to_string())?;
    for (t, golden) in MOVED_SEEDS.iter().enumerate() {
        if !seed_matches(&seeds[t], golden)? {
            return Err(format!("t{t}: moved-root seed differs"));
        }
    }
    let rows = moved_root_matrix_rows(cache).map_err(|e| e.to_string())?;
    for (t, ((c, g, f), row)) in MOVED_MATRICES.iter().zip(&rows).enumerate() {
        if row.c != mat(c) || row.g != mat(g) || row.f != mat(f) {
            return Err(format!("t{t}: moved-root matrices differ"));
        }
        let (_, rg, rf) = &ROOT_MATRICES[t];
        if mat(rg).transpose() != row.c {
            return Err(format!("t{t}: G^T duality"));
        }
        if mat(rf).transpose() != row.f {
            return Err(format!("t{t}: F^T duality"));
        }
    }
    Ok(())
}

fn suite(group: CheckGroup, flavors: bool) -> Result<String, String> {
    let config = SuiteConfig::default();
    let report = run_suite(&config, &[group]).map_err(|e| e.to_string())?;
    if let Some(f) = report.failures().next() {
        let (g, rep) = f.reproducer.as_ref().map_or((group, &f.case), |(g, c)| (*g, c));
        return Err(format!("case {} failed; reproduce: {}", f.case.index, rep.command_line(g)));
    }
    let zero = report.count_flavor(Flavor::ZeroColumn);
    let scaled = report.count_flavor(Flavor::NonTrivialSymmetrizer);
    if flavors && (zero < 20 || scaled < 20) {
        return Err(format!("only {zero} zero-column and {scaled} D != I cases"));
    }
    Ok(format!("{} cases, seed {}, {zero} zero-column, {scaled} D != I", report.cases.len(), config.seed))
}

fn criterion(id: usize, name: &str, limit: Option<Duration>, run: impl FnOnce() -> Result<String, String>) -> bool {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let timing = match limit {
        Some(l) if elapsed >= l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        _ => Ok(()),
    };
    let (ok, detail) = match (outcome, timing) {
        (Ok(d), Ok(())) => (true, d),
        (Err(e), _) | (Ok(_), Err(e)) => (false, e),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} {id} {name} [{elapsed:.2?}] {detail}");
    ok
}

fn main() -> ExitCode {
    let cache = WalkCache::new();
    let results = [
        criterion(1, "A2 C-, G-, F-matrices from the fixed root", Some(Duration::from_secs(1)), || {
            root_matrices(&cache).map(|()| "18 matrices".into())
        }),
        criterion(2, "A2 coefficients and cluster variables by both routes", Some(Duration::from_secs(5)), || {
            root_seeds(&cache).map(|()| "24 entries, direct and separated".into())
        }),
        criterion(3, "A2 data with the root moved, and transpose dualities", None, || {
            moved_root(&cache).map(|()| "24 entries, 18 matrices, 12 dualities".into())
        }),
        criterion(4, "randomized identity suite", Some(Duration::from_secs(60)), || {
            suite(CheckGroup::Identities, false)
        }),
        criterion(5, "principal extension suite", Some(Duration::from_secs(60)), || {
            suite(CheckGroup::PrincipalExtension, true)
        }),
        criterion(6, "Laurent phenomenon for principal coefficients", None, || suite(CheckGroup::Laurent, false)),
    ];
    if results.iter().all(|&r| r) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
