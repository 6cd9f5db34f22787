//! The principal extension `B̄ = [[B, -I], [I, O]]` and the block structure of
//! its pattern over walks in the first `n` directions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intmat::{ExchangeMatrix, IntMatrix};
use crate::pattern::{check_index, h_from_g, pos_col, pos_row, walk_node, PatternNode, Verification, WalkCache};
use crate::poly::{indexed_vars, SparsePoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedMatrix {
    base: ExchangeMatrix,
    full: ExchangeMatrix,
}

impl ExtendedMatrix {
    pub fn base(&self) -> &ExchangeMatrix {
        &self.base
    }

    pub fn full(&self) -> &ExchangeMatrix {
        &self.full
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }
}

/// `B̄ = [[B, -I_n], [I_n, O]]`, checked to be regular with symmetrizer `diag(D, D)`.
pub fn extend(b: &ExchangeMatrix) -> Result<ExtendedMatrix> {
    let n = b.rank();
    let id = IntMatrix::identity(n);
    let m = IntMatrix::from_blocks(b.matrix(), &-&id, &id, &IntMatrix::zeros(n, n))?;
    let full = ExchangeMatrix::new(m)?;
    if full.matrix().det()?.is_zero() {
        return Err(Error::verification("principal extension is regular", format!("{b}")));
    }
    let mut d = b.symmetrizer().to_vec();
    d.extend_from_slice(b.symmetrizer());
    if full.symmetrizer() != d.as_slice() {
        return Err(Error::verification("symmetrizer of the extension is diag(D, D)", format!("{b}")));
    }
    Ok(ExtendedMatrix { base: b.clone(), full })
}

/// `D⁻¹ Cᵀ D`, whose `(i, j)` entry is `d_i⁻¹ c_ji d_j`.
pub fn conjugated_transpose(c: &IntMatrix, d: &[BigInt]) -> Result<IntMatrix> {
    let n = c.rows();
    if c.cols() != n || d.len() != n {
        return Err(Error::DimensionMismatch("D-conjugation needs a square matrix and n weights".into()));
    }
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (q, r) = (c.get(j, i) * &d[j]).div_rem(&d[i]);
            if !r.is_zero() {
                return Err(Error::NonIntegerBlock { row: i, col: j });
            }
            out.set(i, j, q);
        }
    }
    Ok(out)
}

/// `[[B_t, -D⁻¹C_tᵀD], [C_t, O]]` assembled from the rank-`n` node.
pub fn extended_exchange_at(node: &PatternNode) -> Result<IntMatrix> {
    let n = node.rank();
    let m = conjugated_transpose(&node.c, node.initial.symmetrizer())?;
    IntMatrix::from_blocks(node.b_t.matrix(), &-&m, &node.c, &IntMatrix::zeros(n, n))
}

/// The two per-step terms that accumulate in the right-hand blocks of `B̄_t`
/// and `C̄_t` before sign-coherence is used:
/// `C[-M]_+^{ℓ•} - [-C]_+^{•ℓ}M` and `C[M]_+^{ℓ•} - [C]_+^{•ℓ}M` with
/// `M = D⁻¹CᵀD`. Both vanish when column `ℓ` of `C` is sign-coherent.
pub fn step_corrections(node: &PatternNode, l: usize) -> Result<(IntMatrix, IntMatrix)> {
    check_index(l, node.rank())?;
    let c = &node.c;
    let m = conjugated_transpose(c, node.initial.symmetrizer())?;
    let lower = &(c * &pos_row(&-&m, l)) - &(&pos_col(&-c, l) * &m);
    let upper = &(c * &pos_row(&m, l)) - &(&pos_col(c, l) * &m);
    Ok((lower, upper))
}

fn diag_blocks(a: &IntMatrix, d: &IntMatrix) -> Result<IntMatrix> {
    let (n, m) = (a.rows(), d.rows());
    IntMatrix::from_blocks(a, &IntMatrix::zeros(n, m), &IntMatrix::zeros(m, n), d)
}

/// Which block identities hold at one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    pub walk: Vec<usize>,
    pub exchange_blocks: bool,
    pub corrections_vanish: bool,
    pub c_blocks: bool,
    pub g_blocks: bool,
    pub fpoly_blocks: bool,
    pub fmat_blocks: bool,
    pub h_blocks: bool,
}

impl BlockReport {
    pub fn holds(&self) -> bool {
        self.exchange_blocks
            && self.corrections_vanish
            && self.c_blocks
            && self.g_blocks
            && self.fpoly_blocks
            && self.fmat_blocks
            && self.h_blocks
    }

    /// `(name, holds)` for every identity.
    pub fn entries(&self) -> [(&'static str, bool); 7] {
        [
            ("B̄_t block formula", self.exchange_blocks),
            ("per-step correction terms vanish", self.corrections_vanish),
            ("C̄ = diag(C, I)", self.c_blocks),
            ("Ḡ = diag(G, I)", self.g_blocks),
            ("F̄_ℓ = F_ℓ (ℓ ≤ n), 1 (ℓ > n)", self.fpoly_blocks),
            ("F̄ = diag(F, O)", self.fmat_blocks),
            ("H̄ = diag(H, O)", self.h_blocks),
        ]
    }

    pub fn into_result(self) -> Result<()> {
        for (name, ok) in self.entries() {
            if !ok {
                let w: Vec<usize> = self.walk.iter().map(|l| l + 1).collect();
                return Err(Error::verification(name, format!("walk {w:?}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("walk".into(), serde_json::json!(self.walk.iter().map(|l| l + 1).collect::<Vec<_>>()));
        for (name, ok) in self.entries() {
            map.insert(name.into(), serde_json::Value::Bool(ok));
        }
        serde_json::Value::Object(map)
    }
}

/// Runs the rank-`n` and rank-`2n` patterns along `walk` (labels `< n`) and
/// compares them block by block.
pub fn extended_pattern_blocks(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, level: Verification) -> Result<BlockReport> {
    let n = b.rank();
    for &l in walk {
        check_index(l, n)?;
    }
    let ext = extend(b)?;
    let node = walk_node(b, walk, cache, level)?;
    let big = walk_node(ext.full(), walk, cache, level)?;

    let exchange_blocks = big.b_t.matrix() == &extended_exchange_at(&node)?;

    let mut corrections_vanish = true;
    for s in 0..walk.len() {
        let prefix = walk_node(b, &walk[..s], cache, level)?;
        let (lower, upper) = step_corrections(&prefix, walk[s])?;
        corrections_vanish &= lower.is_zero() && upper.is_zero();
    }

    let id = IntMatrix::identity(n);
    let zero = IntMatrix::zeros(n, n);
    let c_blocks = big.c == diag_blocks(&node.c, &id)?;
    let g_blocks = big.g == diag_blocks(&node.g, &id)?;

    let vars = indexed_vars("y", 2 * n);
    let map: Vec<usize> = (0..n).collect();
    let mut fpoly_blocks = true;
    for (l, f) in big.fpolys.iter().enumerate() {
        let expected = if l < n {
            node.fpolys[l].embed(&vars, &map)?
        } else {
            SparsePoly::one(vars.clone())
        };
        fpoly_blocks &= *f == expected;
    }
    let fmat_blocks = big.f == diag_blocks(&node.f, &zero)?;
    let h_blocks = match (big.h_matrix(), node.h_matrix()) {
        (Ok(hb), Ok(h)) => hb == diag_blocks(&h, &zero)? && hb == h_from_g(&big.g),
        _ => false,
    };
    Ok(BlockReport {
        walk: walk.to_vec(),
        exchange_blocks,
        corrections_vanish,
        c_blocks,
        g_blocks,
        fpoly_blocks,
        fmat_blocks,
        h_blocks,
    })
}
