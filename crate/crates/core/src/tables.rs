//! The type A2 reference tables: coefficients and cluster variables, C-, G-
//! and F-matrices, both from the fixed root `t₀` and from the moving root
//! `t` with initial matrix `B_tᵀ`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::initial_seed::dual_node;
use crate::intmat::{ExchangeMatrix, IntMatrix};
use crate::pattern::{walk_node, Verification, WalkCache};
use crate::poly::indexed_vars;
use crate::semifield::Semifield;
use crate::separation::{direct_walk, seed_difference, separated_seed, Seed};

/// `[[0, 1], [-1, 0]]`.
pub fn a2_matrix() -> ExchangeMatrix {
    ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).expect("A2 is skew-symmetric")
}

/// The walk `2, 1, 2, 1, 2` (0-based) through the vertices `t₀..t₅`.
pub const A2_WALK: [usize; 5] = [1, 0, 1, 0, 1];

/// One row of a seed table: coefficient and cluster-variable strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedRow {
    pub t: usize,
    pub y: Vec<String>,
    pub x: Vec<String>,
}

/// One row of a matrix table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRow {
    pub t: usize,
    pub c: IntMatrix,
    pub g: IntMatrix,
    pub f: IntMatrix,
}

fn seed_row(t: usize, sf: &Semifield, seed: &Seed) -> SeedRow {
    SeedRow {
        t,
        y: seed.y.iter().map(|e| sf.render(e)).collect(),
        x: seed.x.iter().map(|r| r.render()).collect(),
    }
}

/// The seed at the end of `walk` by the separation formulas, checked
/// against direct mutation.
fn checked_seed(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache) -> Result<Seed> {
    let sf = Semifield::universal(indexed_vars("y", b.rank()));
    let start = Seed::initial(b, &sf)?;
    let y0 = start.y.clone();
    let direct = direct_walk(start, walk, &sf)?.pop().expect("nonempty");
    let node = walk_node(b, walk, cache, Verification::Checked)?;
    let sep = separated_seed(&node, &sf, &y0)?;
    if let Some((is_x, i)) = seed_difference(&direct, &sep, &sf)? {
        let what = if is_x { "cluster variable" } else { "coefficient" };
        return Err(Error::verification("separation formula equals direct mutation", format!("{what} {}", i + 1)));
    }
    Ok(sep)
}

/// `𝒴^{B;t₀}_t` and `𝒳^{B;t₀}_t` for `t = t₀..t₅`.
pub fn root_seeds(cache: &WalkCache) -> Result<Vec<Seed>> {
    (0..=A2_WALK.len()).map(|t| checked_seed(&a2_matrix(), &A2_WALK[..t], cache)).collect()
}

/// `𝒴^{B_tᵀ;t}_{t₀}` and `𝒳^{B_tᵀ;t}_{t₀}`: the seed at `t₀` when the root
/// is moved to `t` with initial matrix `B_tᵀ`.
pub fn moved_root_seeds(cache: &WalkCache) -> Result<Vec<Seed>> {
    (0..=A2_WALK.len())
        .map(|t| {
            let node = walk_node(&a2_matrix(), &A2_WALK[..t], cache, Verification::Checked)?;
            let back: Vec<usize> = A2_WALK[..t].iter().rev().copied().collect();
            checked_seed(&node.b_t.transposed(), &back, cache)
        })
        .collect()
}

pub fn root_seed_rows(cache: &WalkCache) -> Result<Vec<SeedRow>> {
    let sf = Semifield::universal(indexed_vars("y", 2));
    Ok(root_seeds(cache)?.iter().enumerate().map(|(t, s)| seed_row(t, &sf, s)).collect())
}

pub fn moved_root_seed_rows(cache: &WalkCache) -> Result<Vec<SeedRow>> {
    let sf = Semifield::universal(indexed_vars("y", 2));
    Ok(moved_root_seeds(cache)?.iter().enumerate().map(|(t, s)| seed_row(t, &sf, s)).collect())
}

/// `C^{B;t₀}_t`, `G^{B;t₀}_t`, `F^{B;t₀}_t`.
pub fn root_matrix_rows(cache: &WalkCache) -> Result<Vec<MatrixRow>> {
    (0..=A2_WALK.len())
        .map(|t| {
            let node = walk_node(&a2_matrix(), &A2_WALK[..t], cache, Verification::Checked)?;
            Ok(MatrixRow { t, c: node.c.clone(), g: node.g.clone(), f: node.f.clone() })
        })
        .collect()
}

/// `C^{B_tᵀ;t}_{t₀}`, `G^{B_tᵀ;t}_{t₀}`, `F^{B_tᵀ;t}_{t₀}`.
pub fn moved_root_matrix_rows(cache: &WalkCache) -> Result<Vec<MatrixRow>> {
    (0..=A2_WALK.len())
        .map(|t| {
            let node = walk_node(&a2_matrix(), &A2_WALK[..t], cache, Verification::Checked)?;
            let dual = dual_node(&node, cache, Verification::Checked)?;
            Ok(MatrixRow { t, c: dual.c.clone(), g: dual.g.clone(), f: dual.f.clone() })
        })
        .collect()
}

fn render_seed_table(title: &str, rows: &[SeedRow]) -> String {
    let mut s = format!("{title}\n");
    for r in rows {
        let _ = writeln!(s, "t{} | Y: {} | X: {}", r.t, r.y.join(" ; "), r.x.join(" ; "));
    }
    s
}

fn render_matrix_table(title: &str, rows: &[MatrixRow]) -> String {
    let mut s = format!("{title}\n");
    for r in rows {
        let _ = writeln!(s, "t{} | C: {} | G: {} | F: {}", r.t, r.c, r.g, r.f);
    }
    s
}

fn seed_json(rows: &[SeedRow]) -> serde_json::Value {
    rows.iter()
        .map(|r| serde_json::json!({ "t": r.t, "Y": r.y, "X": r.x }))
        .collect()
}

fn matrix_json(rows: &[MatrixRow]) -> serde_json::Value {
    rows.iter()
        .map(|r| serde_json::json!({ "t": r.t, "C": r.c.to_json(), "G": r.g.to_json(), "F": r.f.to_json() }))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum A2Table {
    RootSeeds,
    RootMatrices,
    MovedSeeds,
    MovedMatrices,
}

impl A2Table {
    pub const ALL: [A2Table; 4] = [A2Table::RootSeeds, A2Table::RootMatrices, A2Table::MovedSeeds, A2Table::MovedMatrices];

    pub fn name(self) -> &'static str {
        match self {
            A2Table::RootSeeds => "root-seeds",
            A2Table::RootMatrices => "root-matrices",
            A2Table::MovedSeeds => "moved-seeds",
            A2Table::MovedMatrices => "moved-matrices",
        }
    }
}

/// All four tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A2Tables {
    pub root_seeds: Vec<SeedRow>,
    pub root_matrices: Vec<MatrixRow>,
    pub moved_seeds: Vec<SeedRow>,
    pub moved_matrices: Vec<MatrixRow>,
}

impl A2Tables {
    pub fn compute(cache: &WalkCache) -> Result<Self> {
        Ok(A2Tables {
            root_seeds: root_seed_rows(cache)?,
            root_matrices: root_matrix_rows(cache)?,
            moved_seeds: moved_root_seed_rows(cache)?,
            moved_matrices: moved_root_matrix_rows(cache)?,
        })
    }

    /// Text rendering of one table.
    pub fn render(&self, which: A2Table) -> String {
        match which {
            A2Table::RootSeeds => render_seed_table("coefficients and cluster variables, root t0", &self.root_seeds),
            A2Table::RootMatrices => render_matrix_table("C-, G- and F-matrices, root t0", &self.root_matrices),
            A2Table::MovedSeeds => {
                render_seed_table("coefficients and cluster variables at t0, root t with B_t^T", &self.moved_seeds)
            }
            A2Table::MovedMatrices => render_matrix_table("C-, G- and F-matrices at t0, root t with B_t^T", &self.moved_matrices),
        }
    }

    pub fn render_all(&self) -> String {
        A2Table::ALL.iter().map(|&w| self.render(w)).collect::<Vec<_>>().join("\n")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "B": a2_matrix().matrix().to_json(),
            "walk": A2_WALK.iter().map(|l| l + 1).collect::<Vec<_>>(),
            "root_seeds": seed_json(&self.root_seeds),
            "root_matrices": matrix_json(&self.root_matrices),
            "moved_seeds": seed_json(&self.moved_seeds),
            "moved_matrices": matrix_json(&self.moved_matrices),
        })
    }
}
