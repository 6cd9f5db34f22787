//! Mutation of the initial seed: moving the root from `t₀` to the adjacent
//! vertex `t₁` and transforming C, G, F-matrices and F-polynomials
//! accordingly, plus the transpose dualities.
//!
//! A walk `w` from `t₀` is the walk `k·w` when read from `t₁`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{ExchangeMatrix, IntMatrix};
use crate::pattern::{
    check_index, jay, pos_col, pos_row, row_sign, walk_node, walk_pair, PatternNode, Sign, Verification,
    WalkCache,
};
use crate::poly::{exp_u32, to_i64, MonomialSubstitution, SparsePoly};
use crate::semifield::SubtractionFreeRational;

/// The edge between `t₀` and `t₁` in direction `k`, together with `B` and `B₁ = μ_k(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSwap {
    k: usize,
    b: ExchangeMatrix,
    b1: ExchangeMatrix,
}

impl RootSwap {
    pub fn new(b: &ExchangeMatrix, k: usize) -> Result<Self> {
        Ok(RootSwap {
            k,
            b: b.clone(),
            b1: b.mutate(k)?,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn b1(&self) -> &ExchangeMatrix {
        &self.b1
    }

    /// The swap back from `t₁` to `t₀`.
    pub fn inverse(&self) -> RootSwap {
        RootSwap {
            k: self.k,
            b: self.b1.clone(),
            b1: self.b.clone(),
        }
    }

    /// The walk from `t₀` read from `t₁`.
    pub fn reroot_walk(&self, walk: &[usize]) -> Vec<usize> {
        let mut w = Vec::with_capacity(walk.len() + 1);
        w.push(self.k);
        w.extend_from_slice(walk);
        w
    }

    fn bm(&self) -> &IntMatrix {
        self.b.matrix()
    }
}

fn check_shape(m: &IntMatrix, n: usize, what: &str) -> Result<()> {
    if m.rows() == n && m.cols() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{what} must be {n}x{n}")))
    }
}

fn restrict_row(m: &IntMatrix, k: usize) -> IntMatrix {
    m.row_restrict(k).expect("checked index")
}

/// `(J_k + [-εB]_+^{k•}) C + H(ε)^{k•} B_t`, where `H(+) = H^{B;t₀}_t` and
/// `H(-) = H^{B₁;t₁}_t`.
pub fn initial_mutate_c(node: &PatternNode, swap: &RootSwap, eps: Sign, h_pos: &IntMatrix, h_neg: &IntMatrix) -> Result<IntMatrix> {
    let n = node.rank();
    let k = swap.k;
    check_index(k, n)?;
    check_shape(h_pos, n, "H(+)")?;
    check_shape(h_neg, n, "H(-)")?;
    let h = if eps == Sign::Pos { h_pos } else { h_neg };
    let left = &(&jay(n, k) + &pos_row(&eps.flip().apply(swap.bm()), k)) * &node.c;
    Ok(&left + &(&restrict_row(h, k) * node.b_t.matrix()))
}

/// `(J_k + [εB]_+^{•k}) G - B H(ε)^{k•}`.
pub fn initial_mutate_g(node: &PatternNode, swap: &RootSwap, eps: Sign, h_pos: &IntMatrix, h_neg: &IntMatrix) -> Result<IntMatrix> {
    let n = node.rank();
    let k = swap.k;
    check_index(k, n)?;
    check_shape(h_pos, n, "H(+)")?;
    check_shape(h_neg, n, "H(-)")?;
    let h = if eps == Sign::Pos { h_pos } else { h_neg };
    let left = &(&jay(n, k) + &pos_col(&eps.apply(swap.bm()), k)) * &node.g;
    Ok(&left - &(swap.bm() * &restrict_row(h, k)))
}

/// `(J_k + [-εB]_+^{k•}) C - [-εG]_+^{k•} B_t`.
pub fn initial_mutate_c_from_g(node: &PatternNode, swap: &RootSwap, eps: Sign) -> Result<IntMatrix> {
    let n = node.rank();
    let k = swap.k;
    check_index(k, n)?;
    let left = &(&jay(n, k) + &pos_row(&eps.flip().apply(swap.bm()), k)) * &node.c;
    Ok(&left - &(&pos_row(&eps.flip().apply(&node.g), k) * node.b_t.matrix()))
}

/// `(J_k + [εB]_+^{•k}) G + B [-εG]_+^{k•}`.
pub fn initial_mutate_g_from_g(node: &PatternNode, swap: &RootSwap, eps: Sign) -> Result<IntMatrix> {
    let n = node.rank();
    let k = swap.k;
    check_index(k, n)?;
    let left = &(&jay(n, k) + &pos_col(&eps.apply(swap.bm()), k)) * &node.g;
    Ok(&left + &(swap.bm() * &pos_row(&eps.flip().apply(&node.g), k)))
}

/// `(J_k + [-ε_{k•}(G) B]_+^{k•}) C`.
pub fn initial_c_signed(node: &PatternNode, swap: &RootSwap) -> Result<IntMatrix> {
    let n = node.rank();
    let k = swap.k;
    let e = row_sign(&node.g, k)?;
    Ok(&(&jay(n, k) + &pos_row(&e.flip().apply(swap.bm()), k)) * &node.c)
}

/// `(J_k + [ε_{k•}(G) B]_+^{•k}) G`.
pub fn initial_g_signed(node: &PatternNode, swap: &RootSwap) -> Result<IntMatrix> {
    let n = node.rank();
    let k = swap.k;
    let e = row_sign(&node.g, k)?;
    Ok(&(&jay(n, k) + &pos_col(&e.apply(swap.bm()), k)) * &node.g)
}

/// `(J_k + [εB]_+^{k•}) F + (εG)^{k•} - H^{-B}(ε)^{k•} - H^{B}(ε)^{k•}`.
///
/// `h_b` is `H^{B;t₀}_t` for ε = +1 and `H^{B₁;t₁}_t` for ε = -1; `h_negb`
/// likewise over `-B` and `-B₁`.
pub fn initial_mutate_fmat(
    f: &IntMatrix,
    g: &IntMatrix,
    swap: &RootSwap,
    eps: Sign,
    h_b: &IntMatrix,
    h_negb: &IntMatrix,
) -> Result<IntMatrix> {
    let n = f.rows();
    let k = swap.k;
    check_index(k, n)?;
    for (m, what) in [(g, "G"), (h_b, "H^B"), (h_negb, "H^{-B}")] {
        check_shape(m, n, what)?;
    }
    let left = &(&jay(n, k) + &pos_row(&eps.apply(swap.bm()), k)) * f;
    let sum = &(&left + &restrict_row(&eps.apply(g), k)) - &restrict_row(h_negb, k);
    Ok(&sum - &restrict_row(h_b, k))
}

/// `(J_k + [-εB]_+^{k•}) F + (εG^{-B})^{k•} - H^{-B}(ε)^{k•} - H^{B}(ε)^{k•}`.
pub fn initial_mutate_fmat_neg(
    f: &IntMatrix,
    g_neg: &IntMatrix,
    swap: &RootSwap,
    eps: Sign,
    h_b: &IntMatrix,
    h_negb: &IntMatrix,
) -> Result<IntMatrix> {
    let n = f.rows();
    let k = swap.k;
    check_index(k, n)?;
    for (m, what) in [(g_neg, "G^{-B}"), (h_b, "H^B"), (h_negb, "H^{-B}")] {
        check_shape(m, n, what)?;
    }
    let left = &(&jay(n, k) + &pos_row(&eps.flip().apply(swap.bm()), k)) * f;
    let sum = &(&left + &restrict_row(&eps.apply(g_neg), k)) - &restrict_row(h_negb, k);
    Ok(&sum - &restrict_row(h_b, k))
}

/// `(J_k + [εB]_+^{k•}) F + [-εG^{-B}]_+^{k•} + [εG]_+^{k•}`.
pub fn initial_fmat_from_g(f: &IntMatrix, g: &IntMatrix, g_neg: &IntMatrix, swap: &RootSwap, eps: Sign) -> Result<IntMatrix> {
    let n = f.rows();
    let k = swap.k;
    check_index(k, n)?;
    let left = &(&jay(n, k) + &pos_row(&eps.apply(swap.bm()), k)) * f;
    Ok(&(&left + &pos_row(&eps.flip().apply(g_neg), k)) + &pos_row(&eps.apply(g), k))
}

/// `(J_k + [εB]_+^{k•}) F + [εG]_+^{k•}` with `ε = ε_{k•}(G^{-B})`.
pub fn initial_fmat_signed(f: &IntMatrix, g: &IntMatrix, g_neg: &IntMatrix, swap: &RootSwap) -> Result<IntMatrix> {
    let n = f.rows();
    let k = swap.k;
    let e = row_sign(g_neg, k)?;
    let left = &(&jay(n, k) + &pos_row(&e.apply(swap.bm()), k)) * f;
    Ok(&left + &pos_row(&e.apply(g), k))
}

/// `(J_k + [-εB]_+^{k•}) F + [εG^{-B}]_+^{k•}` with `ε = ε_{k•}(G)`.
pub fn initial_fmat_signed_dual(f: &IntMatrix, g: &IntMatrix, g_neg: &IntMatrix, swap: &RootSwap) -> Result<IntMatrix> {
    let n = f.rows();
    let k = swap.k;
    let e = row_sign(g, k)?;
    let left = &(&jay(n, k) + &pos_row(&e.flip().apply(swap.bm()), k)) * f;
    Ok(&left + &pos_row(&e.apply(g_neg), k))
}

/// The substitution `y_i ↦ y_i y_k^{[-b_ki]_+}(1 + y_k)^{b_ki}` (`i ≠ k`),
/// `y_k ↦ y_k^{-1}`.
fn fpoly_substitution(b: &ExchangeMatrix, k: usize) -> Result<Vec<MonomialSubstitution>> {
    let n = b.rank();
    (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            if i == k {
                e[k] = -1;
                return Ok(MonomialSubstitution::monomial(e));
            }
            let bki = to_i64(b.get(k, i))?;
            e[i] = 1;
            e[k] = (-bki).max(0);
            Ok(MonomialSubstitution {
                monomial: e,
                binomial: (bki != 0).then_some((k, bki)),
            })
        })
        .collect()
}

/// `(1 + y_k)^{g_kj} y_k^{-h_kj} F_j(…)`, the F-polynomial `F^{B₁;t₁}_{j;t}`
/// obtained from the node over `B` at `t`.
pub fn initial_mutate_fpoly(node: &PatternNode, swap: &RootSwap, j: usize) -> Result<SparsePoly> {
    let n = node.rank();
    let k = swap.k;
    check_index(k, n)?;
    check_index(j, n)?;
    let vars = node.y_vars().clone();
    let subs = fpoly_substitution(&swap.b, k)?;
    let composed = node.fpolys[j].substitute_monomials(&vars, &subs)?;
    let g = to_i64(node.g.get(k, j))?;
    let h = node.fpolys[j].h_entry(k, &swap.b)?;
    let one_plus = SparsePoly::one(vars.clone()).add(&SparsePoly::variable(vars.clone(), k))?;
    let factor = one_plus.pow(exp_u32(g.abs())?)?;
    let (mut num, mut den) = (composed.num()?.clone(), composed.den()?.clone());
    if g > 0 {
        num = num.mul(&factor)?;
    } else if g < 0 {
        den = den.mul(&factor)?;
    }
    let mut shift = vec![0i64; n];
    shift[k] = -h;
    num = num.mul_monomial(&shift);
    let out = match num.exact_div_laurent(&den) {
        Ok(p) => p,
        Err(Error::NotDivisible) => return Err(Error::CancellationFailure),
        Err(e) => return Err(e),
    };
    if !out.has_nonnegative_exponents() {
        return Err(Error::CancellationFailure);
    }
    Ok(out)
}

pub fn initial_mutate_fpolys(node: &PatternNode, swap: &RootSwap) -> Result<Vec<SparsePoly>> {
    (0..node.rank()).map(|j| initial_mutate_fpoly(node, swap, j)).collect()
}

/// The four patterns an initial-seed check compares: `B` and `-B` rooted at
/// `t₀`, and `B₁` and `-B₁` rooted at `t₁`, all at the same vertex `t`.
#[derive(Clone, Debug)]
pub struct SwapContext {
    pub swap: RootSwap,
    pub at_t0: Arc<PatternNode>,
    pub neg_at_t0: Arc<PatternNode>,
    pub at_t1: Arc<PatternNode>,
    pub neg_at_t1: Arc<PatternNode>,
}

impl SwapContext {
    /// Builds all four nodes for the vertex reached by `walk` from `t₀`.
    pub fn build(b: &ExchangeMatrix, walk: &[usize], k: usize, cache: &WalkCache, level: Verification) -> Result<Self> {
        check_index(k, b.rank())?;
        let swap = RootSwap::new(b, k)?;
        let rerooted = swap.reroot_walk(walk);
        let (at_t0, neg_at_t0, at_t1, neg_at_t1) = match level {
            Verification::Checked => {
                let (a, na) = walk_pair(b, walk, cache)?;
                let (c, nc) = walk_pair(&swap.b1, &rerooted, cache)?;
                (a, na, c, nc)
            }
            Verification::Fast => (
                walk_node(b, walk, cache, level)?,
                walk_node(&b.negated(), walk, cache, level)?,
                walk_node(&swap.b1, &rerooted, cache, level)?,
                walk_node(&swap.b1.negated(), &rerooted, cache, level)?,
            ),
        };
        Ok(SwapContext {
            swap,
            at_t0,
            neg_at_t0,
            at_t1,
            neg_at_t1,
        })
    }

    /// Checks every initial-seed formula against the nodes computed from
    /// scratch at `t₁`.
    pub fn verify(&self) -> Result<()> {
        let s = &self.swap;
        let (p, np, q, nq) = (&*self.at_t0, &*self.neg_at_t0, &*self.at_t1, &*self.neg_at_t1);
        let k = s.k + 1;
        let ctx = |what: &str| format!("{what}, k = {k}, walk {:?}", p.walk.iter().map(|l| l + 1).collect::<Vec<_>>());
        let check = |identity: &str, got: IntMatrix, want: &IntMatrix| -> Result<()> {
            if &got == want {
                Ok(())
            } else {
                Err(Error::verification(identity, ctx(&format!("{got} vs {want}"))))
            }
        };
        let h_p = p.h_matrix()?;
        let h_q = q.h_matrix()?;
        let h_np = np.h_matrix()?;
        let h_nq = nq.h_matrix()?;
        for eps in Sign::BOTH {
            check("initial C mutation (H form)", initial_mutate_c(p, s, eps, &h_p, &h_q)?, &q.c)?;
            check("initial G mutation (H form)", initial_mutate_g(p, s, eps, &h_p, &h_q)?, &q.g)?;
            check("initial C mutation (G form)", initial_mutate_c_from_g(p, s, eps)?, &q.c)?;
            check("initial G mutation (G form)", initial_mutate_g_from_g(p, s, eps)?, &q.g)?;
            let (hb, hnb) = match eps {
                Sign::Pos => (&h_p, &h_np),
                Sign::Neg => (&h_q, &h_nq),
            };
            check("initial F-matrix mutation", initial_mutate_fmat(&p.f, &p.g, s, eps, hb, hnb)?, &q.f)?;
            check("initial F-matrix mutation (-B form)", initial_mutate_fmat_neg(&p.f, &np.g, s, eps, hb, hnb)?, &q.f)?;
            check("initial F-matrix mutation (G form)", initial_fmat_from_g(&p.f, &p.g, &np.g, s, eps)?, &q.f)?;
        }
        check("reduced initial C mutation", initial_c_signed(p, s)?, &q.c)?;
        check("reduced initial G mutation", initial_g_signed(p, s)?, &q.g)?;
        check("reduced initial F-matrix mutation", initial_fmat_signed(&p.f, &p.g, &np.g, s)?, &q.f)?;
        check("reduced initial F-matrix mutation, dual sign", initial_fmat_signed_dual(&p.f, &p.g, &np.g, s)?, &q.f)?;
        let fpolys = initial_mutate_fpolys(p, s)?;
        for (j, (got, want)) in fpolys.iter().zip(&q.fpolys).enumerate() {
            if got != want {
                return Err(Error::verification(
                    "initial F-polynomial mutation",
                    ctx(&format!("F_{}: {got} vs {want}", j + 1)),
                ));
            }
        }
        Ok(())
    }
}

/// Outcome of the transpose dualities at one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub walk: Vec<usize>,
    pub dual_walk: Vec<usize>,
    pub g_transpose_is_dual_c: bool,
    pub f_transpose_is_dual_f: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.g_transpose_is_dual_c && self.f_transpose_is_dual_f
    }

    pub fn into_result(self) -> Result<()> {
        let w = self.walk.iter().map(|l| l + 1).collect::<Vec<_>>();
        if !self.g_transpose_is_dual_c {
            return Err(Error::verification("G^T duality", format!("walk {w:?}")));
        }
        if !self.f_transpose_is_dual_f {
            return Err(Error::verification("F^T duality", format!("walk {w:?}")));
        }
        Ok(())
    }
}

/// Walks the reversed walk from `B_tᵀ` and returns the node at `t₀`.
pub fn dual_node(node: &PatternNode, cache: &WalkCache, level: Verification) -> Result<Arc<PatternNode>> {
    let reversed: Vec<usize> = node.walk.iter().rev().copied().collect();
    walk_node(&node.b_t.transposed(), &reversed, cache, level)
}

fn duality_report(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, level: Verification) -> Result<DualityReport> {
    let node = walk_node(b, walk, cache, level)?;
    let dual = dual_node(&node, cache, level)?;
    Ok(DualityReport {
        walk: walk.to_vec(),
        dual_walk: dual.walk.clone(),
        g_transpose_is_dual_c: node.g.transpose() == dual.c,
        f_transpose_is_dual_f: node.f.transpose() == dual.f,
    })
}

/// `(G^{B;t₀}_t)ᵀ = C^{B_tᵀ;t}_{t₀}` (the report also carries the F check).
pub fn duality_cg(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, level: Verification) -> Result<DualityReport> {
    duality_report(b, walk, cache, level)
}

/// `(F^{B;t₀}_t)ᵀ = F^{B_tᵀ;t}_{t₀}`.
pub fn duality_f(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, level: Verification) -> Result<DualityReport> {
    duality_report(b, walk, cache, level)
}

/// The substitution of `ρ_k` on the coefficients:
/// `y_k ↦ y_k^{-1}`, `y_j ↦ y_j y_k^{[b'_kj]_+}(y_k + 1)^{-b'_kj}` where
/// `b'` are the entries of `μ_k(b)`, i.e. `b'_kj = -b_kj`.
pub fn rho_substitution(b: &ExchangeMatrix, k: usize) -> Result<Vec<MonomialSubstitution>> {
    check_index(k, b.rank())?;
    fpoly_substitution(b, k)
}

/// `ρ_k` on the universal semifield `ℚ_sf(y)`; `b` is the matrix at `t₀`.
pub fn rho_k(expr: &SubtractionFreeRational, b: &ExchangeMatrix, k: usize) -> Result<SubtractionFreeRational> {
    if expr.vars().len() != b.rank() {
        return Err(Error::DimensionMismatch("expression and matrix ranks differ".into()));
    }
    let subs = rho_substitution(b, k)?;
    let vars = expr.vars().clone();
    expr.map_polys(&vars, |p| p.substitute_monomials(&vars, &subs))
}

/// Box bound `Π_i (f_ij + 1)` on the number of terms of `F_j`.
pub fn term_bound(f: &IntMatrix) -> BigInt {
    (0..f.cols())
        .map(|j| {
            f.column(j)
                .iter()
                .fold(BigInt::one(), |acc, v| acc * (v.abs() + BigInt::one()))
        })
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{initial_node, walk_plain};
    use crate::poly::parse_poly;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap()
    }

    fn m(rows: &[[i64; 2]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn a2_swap_at_t2() {
        let cache = WalkCache::new();
        let ctx = SwapContext::build(&a2(), &[1, 0], 1, &cache, Verification::Checked).unwrap();
        ctx.verify().unwrap();
        let rerooted = walk_plain(&a2().mutate(1).unwrap(), &[1, 1, 0]).unwrap();
        assert_eq!(ctx.at_t1.c, rerooted.c);
    }

    #[test]
    fn swap_at_t1_itself_is_identity() {
        let b = a2();
        let swap = RootSwap::new(&b, 1).unwrap();
        let node = walk_plain(&b, &[1]).unwrap();
        let h = node.h_matrix().unwrap();
        let h1 = initial_node(swap.b1()).h_matrix().unwrap();
        for eps in Sign::BOTH {
            let c = initial_mutate_c(&node, &swap, eps, &h, &h1).unwrap();
            assert_eq!(c, IntMatrix::identity(2));
            let g = initial_mutate_g(&node, &swap, eps, &h, &h1).unwrap();
            assert_eq!(g, IntMatrix::identity(2));
        }
        assert_eq!(initial_c_signed(&node, &swap).unwrap(), IntMatrix::identity(2));
        let neg = walk_plain(&b.negated(), &[1]).unwrap();
        assert!(initial_fmat_signed(&node.f, &node.g, &neg.g, &swap).unwrap().is_zero());
        let fs = initial_mutate_fpolys(&node, &swap).unwrap();
        assert!(fs.iter().all(SparsePoly::is_one));
    }

    #[test]
    fn fpoly_swap_examples() {
        let b = a2();
        let swap = RootSwap::new(&b, 1).unwrap();
        let node = walk_plain(&b, &[1, 0]).unwrap();
        let f1 = initial_mutate_fpoly(&node, &swap, 0).unwrap();
        let oracle = walk_plain(swap.b1(), &[1, 1, 0]).unwrap();
        assert_eq!(f1, oracle.fpolys[0]);
        let vars = node.y_vars().clone();
        assert_eq!(f1, parse_poly(&vars, "1 + y1").unwrap());
        let init = initial_node(&b);
        assert!(initial_mutate_fpoly(&init, &swap, 0).unwrap().is_one());
    }

    #[test]
    fn double_swap_restores_fpolys() {
        let b = ExchangeMatrix::from_rows(&[[0, 2, 0], [-1, 0, 1], [0, -1, 0]]).unwrap();
        let walk = [0, 2, 1];
        let node = walk_plain(&b, &walk).unwrap();
        let swap = RootSwap::new(&b, 1).unwrap();
        let there = walk_plain(swap.b1(), &swap.reroot_walk(&walk)).unwrap();
        let back_swap = swap.inverse();
        let back = initial_mutate_fpolys(&there, &back_swap).unwrap();
        assert_eq!(back, node.fpolys);
    }

    #[test]
    fn a2_dualities() {
        let cache = WalkCache::new();
        let walk = [1, 0, 1, 0, 1];
        for t in 0..=5 {
            let r = duality_f(&a2(), &walk[..t], &cache, Verification::Checked).unwrap();
            assert!(r.holds(), "t = {t}");
        }
        let node = walk_plain(&a2(), &walk[..4]).unwrap();
        assert_eq!(node.f, m(&[[0, 1], [0, 0]]));
        let dual = dual_node(&node, &cache, Verification::Fast).unwrap();
        assert_eq!(dual.f, m(&[[0, 0], [1, 0]]));
    }

    #[test]
    fn rho_examples() {
        let b = a2();
        let vars = crate::poly::indexed_vars("y", 2);
        let y2 = SubtractionFreeRational::generator(vars.clone(), 1);
        let r = rho_k(&y2, &b, 1).unwrap();
        assert!(r.semantic_eq(&SubtractionFreeRational::monomial(vars.clone(), &[0, -1])).unwrap());
        // The coefficient y1 (y2 + 1) at t1 is y1 when t1 is the root.
        let y = SubtractionFreeRational::new(parse_poly(&vars, "y1*y2 + y1").unwrap(), SparsePoly::one(vars.clone())).unwrap();
        let r = rho_k(&y, &b, 1).unwrap();
        assert!(r.semantic_eq(&SubtractionFreeRational::generator(vars.clone(), 0)).unwrap());
        let b1 = b.mutate(1).unwrap();
        let twice = rho_k(&rho_k(&y, &b, 1).unwrap(), &b1, 1).unwrap();
        assert!(twice.semantic_eq(&y).unwrap());
    }

    #[test]
    fn term_bound_of_zero_matrix() {
        assert_eq!(term_bound(&IntMatrix::zeros(2, 2)), BigInt::one());
    }
}
