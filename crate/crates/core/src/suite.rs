//! Seeded random instances and the identity suite run over them.
//!
//! Every case draws from its own ChaCha stream `(seed, index)`, so cases can
//! be regenerated individually and run in any order.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::initial_seed::{duality_cg, term_bound, SwapContext};
use crate::intmat::{ExchangeMatrix, IntMatrix};
use crate::pattern::{c_step, f_step_max, initial_node, tropical_sign, walk_node, walk_pair, Verification, WalkCache};
use crate::poly::indexed_vars;
use crate::principal_ext::extended_pattern_blocks;
use crate::semifield::Semifield;
use crate::separation::{compare_routes, principal_cluster_variables, SeparationLimits};

/// Which structural feature a case is forced to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Generic,
    /// At least one zero column (and row).
    ZeroColumn,
    /// Skew-symmetrizer different from the identity.
    NonTrivialSymmetrizer,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Generic => "generic",
            Flavor::ZeroColumn => "zero-column",
            Flavor::NonTrivialSymmetrizer => "D!=I",
        }
    }
}

/// Groups of checks that can be run separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckGroup {
    /// Final-seed recursions, node invariants, `-B` relations, initial-seed
    /// transforms for every direction, dualities and involution.
    Identities,
    /// Block identities of the principal extension.
    PrincipalExtension,
    /// Principal-coefficient cluster variables clear their denominators and
    /// agree with the separation formulas.
    Laurent,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 3] = [CheckGroup::Identities, CheckGroup::PrincipalExtension, CheckGroup::Laurent];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::Identities => "identities",
            CheckGroup::PrincipalExtension => "principal-extension",
            CheckGroup::Laurent => "laurent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_rank: usize,
    pub max_entry: i64,
    pub max_walk: usize,
    /// Extra rank-2 cases with longer walks.
    pub long_cases: usize,
    pub long_walk: usize,
    /// Cases whose F-matrices bound the number of F-polynomial terms above
    /// this are redrawn.
    pub term_budget: u64,
    pub separation: SeparationLimits,
    /// Universal-semifield route comparison only below this term bound.
    pub universal_budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20240601,
            cases: 200,
            max_rank: 3,
            max_entry: 3,
            max_walk: 6,
            long_cases: 50,
            long_walk: 12,
            term_budget: 4_000,
            separation: SeparationLimits::default(),
            universal_budget: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub index: usize,
    pub flavor: Flavor,
    pub b: ExchangeMatrix,
    pub walk: Vec<usize>,
    /// Draws rejected by the term budget before this case was accepted.
    pub redraws: usize,
}

impl Case {
    /// Shell command re-running `group` on this case.
    pub fn command_line(&self, group: CheckGroup) -> String {
        let walk: Vec<String> = self.walk.iter().map(|l| (l + 1).to_string()).collect();
        let (sub, extra) = match group {
            CheckGroup::Identities => ("check-duality", ""),
            CheckGroup::PrincipalExtension => ("extend", ""),
            CheckGroup::Laurent => ("mutate", " --semifield tropical --checked"),
        };
        format!("seedpattern {sub} --matrix '{}' --walk '{}'{extra}", compact(self.b.matrix()), walk.join(","))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "index": self.index,
            "flavor": self.flavor.name(),
            "B": self.b.matrix().to_json(),
            "walk": self.walk.iter().map(|l| l + 1).collect::<Vec<_>>(),
            "redraws": self.redraws,
        })
    }
}

fn compact(m: &IntMatrix) -> String {
    m.to_string().replace(' ', "")
}

fn draw_matrix(rng: &mut ChaCha8Rng, n: usize, max_entry: i64, flavor: Flavor) -> Option<ExchangeMatrix> {
    let mut s = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: i64 = rng.random_range(-max_entry..=max_entry);
            s.set(i, j, BigInt::from(v));
            s.set(j, i, BigInt::from(-v));
        }
    }
    let mut scale = vec![1i64; n];
    match flavor {
        Flavor::Generic => {}
        Flavor::ZeroColumn => {
            let z = rng.random_range(0..n);
            for i in 0..n {
                s.set(i, z, BigInt::from(0));
                s.set(z, i, BigInt::from(0));
            }
        }
        Flavor::NonTrivialSymmetrizer => {
            for e in scale.iter_mut() {
                *e = rng.random_range(1..=max_entry.max(1));
            }
        }
    }
    let b = IntMatrix::from_fn(n, n, |i, j| s.get(i, j) * BigInt::from(scale[j]));
    if b.max_abs() > BigInt::from(max_entry) {
        return None;
    }
    let b = ExchangeMatrix::new(b).ok()?;
    let ok = match flavor {
        Flavor::Generic => true,
        Flavor::ZeroColumn => !b.zero_columns().is_empty(),
        Flavor::NonTrivialSymmetrizer => b.symmetrizer().iter().any(|d| !d.is_one()),
    };
    ok.then_some(b)
}

fn draw_walk(rng: &mut ChaCha8Rng, n: usize, max_walk: usize) -> Vec<usize> {
    let len = rng.random_range(0..=max_walk);
    let mut walk: Vec<usize> = Vec::with_capacity(len);
    while walk.len() < len {
        let l = rng.random_range(0..n);
        if n > 1 && walk.last() == Some(&l) {
            continue;
        }
        walk.push(l);
    }
    walk
}

/// Largest `Π (f_ij + 1)` along `walk`, from the matrix recursions alone.
pub fn walk_term_bound(b: &ExchangeMatrix, walk: &[usize]) -> Result<BigInt> {
    let node = initial_node(b);
    let (mut c, mut f, mut bt) = (node.c, node.f, b.clone());
    let mut worst = term_bound(&f);
    for &l in walk {
        let eps = tropical_sign(&c, l)?;
        let next_c = c_step(&c, bt.matrix(), l, eps);
        f = f_step_max(&f, &c, bt.matrix(), l);
        c = next_c;
        bt = bt.mutate(l)?;
        worst = worst.max(term_bound(&f));
    }
    Ok(worst)
}

/// The bound over every pattern the identity checks touch: the walk itself
/// and its re-rooting through each direction.
pub fn case_term_bound(b: &ExchangeMatrix, walk: &[usize]) -> Result<BigInt> {
    let mut worst = walk_term_bound(b, walk)?;
    for k in 0..b.rank() {
        let mut rerooted = vec![k];
        rerooted.extend_from_slice(walk);
        worst = worst.max(walk_term_bound(&b.mutate(k)?, &rerooted)?);
    }
    Ok(worst)
}

fn flavor_for(index: usize) -> Flavor {
    match index % 5 {
        0 => Flavor::ZeroColumn,
        1 => Flavor::NonTrivialSymmetrizer,
        _ => Flavor::Generic,
    }
}

/// Deterministic generation of case `index`.
pub fn generate_case(config: &SuiteConfig, index: usize) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let long = index >= config.cases;
    let flavor = flavor_for(index);
    let budget = BigInt::from(config.term_budget);
    let mut redraws = 0;
    loop {
        if redraws > 100_000 {
            return Err(Error::verification("case generation", format!("no admissible draw for case {index}")));
        }
        let n = if long {
            2
        } else {
            let lo = if flavor == Flavor::NonTrivialSymmetrizer { 2 } else { 1 };
            rng.random_range(lo..=config.max_rank.max(lo))
        };
        let Some(b) = draw_matrix(&mut rng, n, config.max_entry, flavor) else {
            continue;
        };
        let walk = draw_walk(&mut rng, n, if long { config.long_walk } else { config.max_walk });
        if case_term_bound(&b, &walk)? > budget {
            redraws += 1;
            continue;
        }
        return Ok(Case { index, flavor, b, walk, redraws });
    }
}

pub fn generate_cases(config: &SuiteConfig) -> Result<Vec<Case>> {
    (0..config.cases + config.long_cases).into_par_iter().map(|i| generate_case(config, i)).collect()
}

/// Every check of the identities group at `(b, walk)`, by name.
pub fn identity_checks(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache) -> Vec<(String, Result<()>)> {
    let n = b.rank();
    let mut out = vec![("final-seed recursions and node invariants".to_string(), walk_pair(b, walk, cache).map(|_| ()))];
    for k in 0..n {
        let r = SwapContext::build(b, walk, k, cache, Verification::Checked).and_then(|s| s.verify());
        out.push((format!("initial-seed transforms, direction {}", k + 1), r));
    }
    let walk1: Vec<usize> = walk.iter().map(|l| l + 1).collect();
    let duality = duality_cg(b, walk, cache, Verification::Checked);
    let fail = |name: &str| Error::verification(name, format!("walk {walk1:?}"));
    out.push((
        "G^T duality".into(),
        duality.as_ref().map_err(Clone::clone).and_then(|r| if r.g_transpose_is_dual_c { Ok(()) } else { Err(fail("G^T duality")) }),
    ));
    out.push((
        "F^T duality".into(),
        duality.as_ref().map_err(Clone::clone).and_then(|r| if r.f_transpose_is_dual_f { Ok(()) } else { Err(fail("F^T duality")) }),
    ));
    for k in 0..n {
        let mut there_and_back = walk.to_vec();
        there_and_back.extend([k, k]);
        let r = walk_node(b, &there_and_back, cache, Verification::Fast).and_then(|back| {
            let node = walk_node(b, walk, cache, Verification::Fast)?;
            if back.seed_eq(&node) {
                Ok(())
            } else {
                Err(Error::verification("full-seed involution", format!("direction {}", k + 1)))
            }
        });
        out.push((format!("full-seed involution, direction {}", k + 1), r));
    }
    out
}

fn universal_admits(b: &ExchangeMatrix, walk: &[usize], config: &SuiteConfig) -> bool {
    config.separation.admits(b.rank(), walk.len())
        && walk_term_bound(b, walk).is_ok_and(|t| t <= BigInt::from(config.universal_budget))
}

fn run_identities(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache) -> Result<()> {
    identity_checks(b, walk, cache).into_iter().try_for_each(|(_, r)| r)
}

fn run_laurent(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, config: &SuiteConfig) -> Result<()> {
    principal_cluster_variables(b, walk)?;
    let n = b.rank();
    compare_routes(b, walk, &Semifield::tropical(indexed_vars("y", n)), cache, Verification::Fast)?;
    if universal_admits(b, walk, config) {
        compare_routes(b, walk, &Semifield::universal(indexed_vars("y", n)), cache, Verification::Fast)?;
    }
    Ok(())
}

/// Runs one group of checks on `(b, walk)`.
pub fn run_group(group: CheckGroup, b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, config: &SuiteConfig) -> Result<()> {
    match group {
        CheckGroup::Identities => run_identities(b, walk, cache),
        CheckGroup::PrincipalExtension => extended_pattern_blocks(b, walk, cache, Verification::Checked)?.into_result(),
        CheckGroup::Laurent => run_laurent(b, walk, cache, config),
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: Case,
    /// `(group, outcome)`; the error text is kept for failures.
    pub outcomes: Vec<(CheckGroup, std::result::Result<(), String>)>,
    pub elapsed: Duration,
    /// First failing group and its shortest failing sub-walk.
    pub reproducer: Option<(CheckGroup, Case)>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|(_, r)| r.is_ok())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let outcomes: serde_json::Map<String, serde_json::Value> = self
            .outcomes
            .iter()
            .map(|(g, r)| {
                let v = match r {
                    Ok(()) => serde_json::json!("pass"),
                    Err(e) => serde_json::json!({ "fail": e }),
                };
                (g.name().to_string(), v)
            })
            .collect();
        let mut v = serde_json::json!({
            "case": self.case.to_json(),
            "checks": outcomes,
        });
        if let Some((g, r)) = &self.reproducer {
            v["reproducer"] = serde_json::json!({ "group": g.name(), "case": r.to_json(), "command": r.command_line(*g) });
        }
        v
    }
}

/// The shortest prefix of the walk on which `group` fails, then with single
/// steps dropped while it keeps failing.
pub fn minimize(case: &Case, group: CheckGroup, config: &SuiteConfig) -> Case {
    let fails = |walk: &[usize]| run_group(group, &case.b, walk, &WalkCache::new(), config).is_err();
    let mut walk = case.walk.clone();
    if let Some(len) = (0..=walk.len()).find(|&len| fails(&walk[..len])) {
        walk.truncate(len);
    }
    let mut i = 0;
    while i < walk.len() {
        let mut shorter = walk.clone();
        shorter.remove(i);
        if fails(&shorter) {
            walk = shorter;
        } else {
            i += 1;
        }
    }
    Case { walk, ..case.clone() }
}

pub fn run_case(case: &Case, groups: &[CheckGroup], config: &SuiteConfig) -> CaseReport {
    let start = Instant::now();
    let cache = WalkCache::new();
    let outcomes: Vec<_> = groups
        .iter()
        .map(|&g| (g, run_group(g, &case.b, &case.walk, &cache, config).map_err(|e| e.to_string())))
        .collect();
    let elapsed = start.elapsed();
    let reproducer = outcomes
        .iter()
        .find(|(_, r)| r.is_err())
        .map(|(g, _)| (*g, minimize(case, *g, config)));
    CaseReport { case: case.clone(), outcomes, elapsed, reproducer }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub groups: Vec<CheckGroup>,
    pub cases: Vec<CaseReport>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.passed())
    }

    pub fn count_flavor(&self, flavor: Flavor) -> usize {
        self.cases.iter().filter(|c| c.case.flavor == flavor).count()
    }

    pub fn redraws(&self) -> usize {
        self.cases.iter().map(|c| c.case.redraws).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = &self.config;
        serde_json::json!({
            "seed": c.seed,
            "config": {
                "cases": c.cases,
                "max_rank": c.max_rank,
                "max_entry": c.max_entry,
                "max_walk": c.max_walk,
                "long_cases": c.long_cases,
                "long_walk": c.long_walk,
                "term_budget": c.term_budget,
            },
            "cases": self.cases.len(),
            "groups": self.groups.iter().map(|g| g.name()).collect::<Vec<_>>(),
            "passed": self.passed(),
            "failures": self.failures().count(),
            "zero_column_cases": self.count_flavor(Flavor::ZeroColumn),
            "nontrivial_symmetrizer_cases": self.count_flavor(Flavor::NonTrivialSymmetrizer),
            "redraws": self.redraws(),
            "reports": self.cases.iter().map(CaseReport::to_json).collect::<Vec<_>>(),
        })
    }

    /// One line per case, sorted by index, then a summary line.
    pub fn render_text(&self) -> String {
        let mut lines: Vec<String> = self
            .cases
            .iter()
            .map(|r| {
                let status = if r.passed() { "ok" } else { "FAIL" };
                let walk: Vec<String> = r.case.walk.iter().map(|l| (l + 1).to_string()).collect();
                let mut line = format!(
                    "case {:>3} {:<11} B={} walk=[{}] {}",
                    r.case.index,
                    r.case.flavor.name(),
                    compact(r.case.b.matrix()),
                    walk.join(","),
                    status
                );
                for (g, o) in &r.outcomes {
                    if let Err(e) = o {
                        line.push_str(&format!("\n    {}: {e}", g.name()));
                    }
                }
                if let Some((g, rep)) = &r.reproducer {
                    line.push_str(&format!("\n    reproduce: {}", rep.command_line(*g)));
                }
                line
            })
            .collect();
        lines.push(format!(
            "seed {}: {} cases, {} failed, {} zero-column, {} with D != I",
            self.config.seed,
            self.cases.len(),
            self.failures().count(),
            self.count_flavor(Flavor::ZeroColumn),
            self.count_flavor(Flavor::NonTrivialSymmetrizer)
        ));
        lines.join("\n")
    }
}

/// Generates the cases of `config` and runs `groups` on each, in parallel.
pub fn run_suite(config: &SuiteConfig, groups: &[CheckGroup]) -> Result<SuiteReport> {
    let start = Instant::now();
    let cases = generate_cases(config)?;
    let mut reports: Vec<CaseReport> = cases.par_iter().map(|c| run_case(c, groups, config)).collect();
    reports.sort_by_key(|r| r.case.index);
    Ok(SuiteReport { config: config.clone(), groups: groups.to_vec(), cases: reports, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { cases: 10, long_cases: 2, max_walk: 4, ..SuiteConfig::default() }
    }

    #[test]
    fn generation_is_deterministic_and_flavored() {
        let cfg = small();
        let a = generate_cases(&cfg).unwrap();
        let b = generate_cases(&cfg).unwrap();
        assert_eq!(a, b);
        for c in &a {
            assert!(c.b.matrix().max_abs() <= BigInt::from(cfg.max_entry));
            assert!(c.b.rank() <= cfg.max_rank);
            match c.flavor {
                Flavor::ZeroColumn => assert!(!c.b.zero_columns().is_empty()),
                Flavor::NonTrivialSymmetrizer => assert!(c.b.symmetrizer().iter().any(|d| !d.is_one())),
                Flavor::Generic => {}
            }
        }
        assert!(a[10..].iter().all(|c| c.b.rank() == 2));
        let other = generate_cases(&SuiteConfig { seed: 7, ..cfg }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn small_suite_passes() {
        let r = run_suite(&small(), &CheckGroup::ALL).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn term_bound_of_a2_walk() {
        let b = ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap();
        assert_eq!(walk_term_bound(&b, &[1, 0, 1, 0, 1]).unwrap(), BigInt::from(4));
    }

    #[test]
    fn reproducer_command() {
        let case = Case {
            index: 3,
            flavor: Flavor::Generic,
            b: ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap(),
            walk: vec![1, 0],
            redraws: 0,
        };
        assert_eq!(case.command_line(CheckGroup::Identities), "seedpattern check-duality --matrix '[[0,1],[-1,0]]' --walk '2,1'");
        assert_eq!(
            case.command_line(CheckGroup::Laurent),
            "seedpattern mutate --matrix '[[0,1],[-1,0]]' --walk '2,1' --semifield tropical --checked"
        );
    }
}
