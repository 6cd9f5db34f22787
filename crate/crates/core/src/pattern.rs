//! Final-seed mutation: C-, G-, F-matrices and F-polynomials along walks
//! from the initial vertex, with every variant of the recursions available
//! for cross-checking.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{ExchangeMatrix, IntMatrix};
use crate::poly::{exp_u32, indexed_vars, to_i64, SparsePoly, Vars};

/// A sign `ε ∈ {+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Pos, Sign::Neg];

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    /// `ε·M`.
    pub fn apply(self, m: &IntMatrix) -> IntMatrix {
        match self {
            Sign::Pos => m.clone(),
            Sign::Neg => -m,
        }
    }
}

fn sign_of(values: impl Iterator<Item = BigInt>, what: &'static str, index: usize) -> Result<Sign> {
    let (mut pos, mut neg) = (false, false);
    for v in values {
        pos |= v.is_positive();
        neg |= v.is_negative();
    }
    match (pos, neg) {
        (true, false) => Ok(Sign::Pos),
        (false, true) => Ok(Sign::Neg),
        _ => Err(Error::SignIncoherent { what, index }),
    }
}

/// Column sign `ε_{•ℓ}(M)`.
pub fn tropical_sign(m: &IntMatrix, l: usize) -> Result<Sign> {
    check_index(l, m.cols())?;
    sign_of(m.column(l).into_iter(), "column", l)
}

/// Row sign `ε_{k•}(M)`.
pub fn row_sign(m: &IntMatrix, k: usize) -> Result<Sign> {
    check_index(k, m.rows())?;
    sign_of(m.row(k).iter().cloned(), "row", k)
}

pub(crate) fn check_index(i: usize, bound: usize) -> Result<()> {
    if i < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, bound })
    }
}

/// `[M]_+^{•ℓ}`.
pub(crate) fn pos_col(m: &IntMatrix, l: usize) -> IntMatrix {
    m.positive_part().col_restrict(l).expect("checked index")
}

/// `[M]_+^{ℓ•}`.
pub(crate) fn pos_row(m: &IntMatrix, l: usize) -> IntMatrix {
    m.positive_part().row_restrict(l).expect("checked index")
}

pub(crate) fn jay(n: usize, l: usize) -> IntMatrix {
    IntMatrix::j_matrix(n, l).expect("checked index")
}

/// One vertex of a walk from the initial vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternNode {
    pub initial: ExchangeMatrix,
    pub walk: Vec<usize>,
    pub b_t: ExchangeMatrix,
    pub c: IntMatrix,
    pub g: IntMatrix,
    pub f: IntMatrix,
    pub fpolys: Vec<SparsePoly>,
}

pub fn initial_node(b: &ExchangeMatrix) -> PatternNode {
    let n = b.rank();
    let vars = indexed_vars("y", n);
    PatternNode {
        initial: b.clone(),
        walk: Vec::new(),
        b_t: b.clone(),
        c: IntMatrix::identity(n),
        g: IntMatrix::identity(n),
        f: IntMatrix::zeros(n, n),
        fpolys: vec![SparsePoly::one(vars); n],
    }
}

impl PatternNode {
    pub fn rank(&self) -> usize {
        self.initial.rank()
    }

    pub fn y_vars(&self) -> &Vars {
        self.fpolys[0].vars()
    }

    /// Matrix whose column `j` is the max-degree vector of `F_j`.
    pub fn degree_matrix(&self) -> IntMatrix {
        let n = self.rank();
        let cols: Vec<Vec<i64>> = self.fpolys.iter().map(SparsePoly::max_degree_vector).collect();
        IntMatrix::from_fn(n, n, |i, j| BigInt::from(cols[j][i]))
    }

    /// Strict equality of every component except the walk.
    pub fn seed_eq(&self, other: &PatternNode) -> bool {
        self.initial == other.initial
            && self.b_t == other.b_t
            && self.c == other.c
            && self.g == other.g
            && self.f == other.f
            && self.fpolys == other.fpolys
    }

    /// One mutation step using the designated formulas (ε = +1 for C and G,
    /// the max form for F).
    pub fn mutate(&self, l: usize) -> Result<PatternNode> {
        check_index(l, self.rank())?;
        let mut walk = self.walk.clone();
        walk.push(l);
        Ok(PatternNode {
            initial: self.initial.clone(),
            walk,
            b_t: self.b_t.mutate(l)?,
            c: mutate_c(self, l, Sign::Pos)?,
            g: mutate_g(self, l, Sign::Pos)?,
            f: mutate_fmat_max(self, l)?,
            fpolys: mutate_fpolys(self, l)?,
        })
    }

    pub fn h_matrix(&self) -> Result<IntMatrix> {
        h_matrix(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "walk": self.walk.iter().map(|l| l + 1).collect::<Vec<_>>(),
            "B": self.initial.matrix().to_json(),
            "B_t": self.b_t.matrix().to_json(),
            "C": self.c.to_json(),
            "G": self.g.to_json(),
            "F": self.f.to_json(),
            "fpolys": self.fpolys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "H": h_from_g(&self.g).to_json(),
        })
    }
}

/// `C(J_ℓ + [εB_t]_+^{ℓ•}) + [-εC]_+^{•ℓ} B_t`.
pub fn c_step(c: &IntMatrix, b_t: &IntMatrix, l: usize, eps: Sign) -> IntMatrix {
    let n = c.rows();
    let left = c * &(&jay(n, l) + &pos_row(&eps.apply(b_t), l));
    &left + &(&pos_col(&eps.flip().apply(c), l) * b_t)
}

/// `G(J_ℓ + [εB_t]_+^{•ℓ}) - B[εC]_+^{•ℓ}`.
pub fn g_step(g: &IntMatrix, c: &IntMatrix, b_t: &IntMatrix, b: &IntMatrix, l: usize, eps: Sign) -> IntMatrix {
    let n = g.rows();
    let left = g * &(&jay(n, l) + &pos_col(&eps.apply(b_t), l));
    &left - &(b * &pos_col(&eps.apply(c), l))
}

/// `F J_ℓ + max([C]_+^{•ℓ} + F[B_t]_+^{•ℓ}, [-C]_+^{•ℓ} + F[-B_t]_+^{•ℓ})`.
pub fn f_step_max(f: &IntMatrix, c: &IntMatrix, b_t: &IntMatrix, l: usize) -> IntMatrix {
    let n = f.rows();
    let a = &pos_col(c, l) + &(f * &pos_col(b_t, l));
    let b = &pos_col(&-c, l) + &(f * &pos_col(&-b_t, l));
    &(f * &jay(n, l)) + &a.entrywise_max(&b)
}

/// `F(J_ℓ + [-εB_t]_+^{•ℓ}) + [-εC]_+^{•ℓ} + [εC^{-B}]_+^{•ℓ}`.
pub fn f_step_eps(f: &IntMatrix, c: &IntMatrix, c_neg: &IntMatrix, b_t: &IntMatrix, l: usize, eps: Sign) -> IntMatrix {
    let n = f.rows();
    let left = f * &(&jay(n, l) + &pos_col(&eps.flip().apply(b_t), l));
    &(&left + &pos_col(&eps.flip().apply(c), l)) + &pos_col(&eps.apply(c_neg), l)
}

pub fn mutate_c(node: &PatternNode, l: usize, eps: Sign) -> Result<IntMatrix> {
    check_index(l, node.rank())?;
    Ok(c_step(&node.c, node.b_t.matrix(), l, eps))
}

pub fn mutate_g(node: &PatternNode, l: usize, eps: Sign) -> Result<IntMatrix> {
    check_index(l, node.rank())?;
    Ok(g_step(&node.g, &node.c, node.b_t.matrix(), node.initial.matrix(), l, eps))
}

pub fn mutate_fmat_max(node: &PatternNode, l: usize) -> Result<IntMatrix> {
    check_index(l, node.rank())?;
    Ok(f_step_max(&node.f, &node.c, node.b_t.matrix(), l))
}

pub fn mutate_fmat_eps(node: &PatternNode, l: usize, eps: Sign, c_neg: &IntMatrix) -> Result<IntMatrix> {
    check_index(l, node.rank())?;
    if c_neg.rows() != node.rank() || c_neg.cols() != node.rank() {
        return Err(Error::DimensionMismatch("C^{-B} has the wrong shape".into()));
    }
    Ok(f_step_eps(&node.f, &node.c, c_neg, node.b_t.matrix(), l, eps))
}

/// `C(J_ℓ + [ε_{•ℓ}(C) B_t]_+^{ℓ•})`.
pub fn mutate_c_signed(node: &PatternNode, l: usize) -> Result<IntMatrix> {
    let e = tropical_sign(&node.c, l)?;
    let n = node.rank();
    Ok(&node.c * &(&jay(n, l) + &pos_row(&e.apply(node.b_t.matrix()), l)))
}

/// `G(J_ℓ + [-ε_{•ℓ}(C) B_t]_+^{•ℓ})`.
pub fn mutate_g_signed(node: &PatternNode, l: usize) -> Result<IntMatrix> {
    let e = tropical_sign(&node.c, l)?;
    let n = node.rank();
    Ok(&node.g * &(&jay(n, l) + &pos_col(&e.flip().apply(node.b_t.matrix()), l)))
}

/// `F(J_ℓ + [ε B_t]_+^{•ℓ}) + [ε C]_+^{•ℓ}` with `ε = ε_{•ℓ}(C^{-B})`.
pub fn mutate_fmat_signed(node: &PatternNode, l: usize, c_neg: &IntMatrix) -> Result<IntMatrix> {
    let e = tropical_sign(c_neg, l)?;
    let n = node.rank();
    let left = &node.f * &(&jay(n, l) + &pos_col(&e.apply(node.b_t.matrix()), l));
    Ok(&left + &pos_col(&e.apply(&node.c), l))
}

/// `F(J_ℓ + [-ε B_t]_+^{•ℓ}) + [ε C^{-B}]_+^{•ℓ}` with `ε = ε_{•ℓ}(C)`.
pub fn mutate_fmat_signed_dual(node: &PatternNode, l: usize, c_neg: &IntMatrix) -> Result<IntMatrix> {
    let e = tropical_sign(&node.c, l)?;
    let n = node.rank();
    let left = &node.f * &(&jay(n, l) + &pos_col(&e.flip().apply(node.b_t.matrix()), l));
    Ok(&left + &pos_col(&e.apply(c_neg), l))
}

/// `Π_i y_i^{max(±e_i, 0)}` as a polynomial.
fn y_monomial(vars: &Vars, col: &[BigInt], sign: i64) -> Result<SparsePoly> {
    let exps = col
        .iter()
        .map(|v| to_i64(&(v * sign)).map(|e| e.max(0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparsePoly::monomial(vars.clone(), exps, BigInt::one()))
}

/// New F-polynomials after mutating in direction `ℓ`; only `F_ℓ` changes.
pub fn mutate_fpolys(node: &PatternNode, l: usize) -> Result<Vec<SparsePoly>> {
    check_index(l, node.rank())?;
    fpoly_step(&node.fpolys, &node.c, node.b_t.matrix(), l)
}

pub(crate) fn fpoly_step(fpolys: &[SparsePoly], c: &IntMatrix, b_t: &IntMatrix, l: usize) -> Result<Vec<SparsePoly>> {
    let vars = fpolys[0].vars().clone();
    let col = c.column(l);
    let mut plus = y_monomial(&vars, &col, 1)?;
    let mut minus = y_monomial(&vars, &col, -1)?;
    for (i, fi) in fpolys.iter().enumerate() {
        let b = b_t.get(i, l);
        if b.is_zero() {
            continue;
        }
        let e = exp_u32(to_i64(&b.abs())?)?;
        let power = fi.pow(e)?;
        if b.is_positive() {
            plus = plus.mul(&power)?;
        } else {
            minus = minus.mul(&power)?;
        }
    }
    let new = plus.add(&minus)?.exact_div(&fpolys[l])?;
    if !new.has_nonnegative_exponents() {
        return Err(Error::verification("F-polynomial", "negative exponent after division"));
    }
    let mut out = fpolys.to_vec();
    out[l] = new;
    Ok(out)
}

/// `-[-G]_+`.
pub fn h_from_g(g: &IntMatrix) -> IntMatrix {
    -&(-g).positive_part()
}

/// H-matrix by tropical evaluation of the F-polynomials.
pub fn h_matrix_tropical(node: &PatternNode) -> Result<IntMatrix> {
    let n = node.rank();
    let mut h = IntMatrix::zeros(n, n);
    for (j, fj) in node.fpolys.iter().enumerate() {
        for i in 0..n {
            h.set(i, j, BigInt::from(fj.h_entry(i, &node.initial)?));
        }
    }
    Ok(h)
}

/// H-matrix by both routes; disagreement is an error.
pub fn h_matrix(node: &PatternNode) -> Result<IntMatrix> {
    let trop = h_matrix_tropical(node)?;
    let from_g = h_from_g(&node.g);
    let n = node.rank();
    for i in 0..n {
        for j in 0..n {
            if trop.get(i, j) != from_g.get(i, j) {
                return Err(Error::HMismatch { row: i, col: j });
            }
        }
    }
    Ok(trop)
}

/// `C^{-B} = C + F B_t`, `G^{-B} = G + B F`, `F^{-B} = F`.
pub fn negated_pattern_relations(node: &PatternNode, neg: &PatternNode) -> Result<()> {
    if neg.walk != node.walk || neg.initial.matrix() != &-node.initial.matrix() {
        return Err(Error::DimensionMismatch("negated node is not over -B at the same walk".into()));
    }
    if neg.c != &node.c + &(&node.f * node.b_t.matrix()) {
        return Err(Error::verification("C^{-B} = C + F B_t", format!("walk {:?}", node.walk)));
    }
    if neg.g != &node.g + &(node.initial.matrix() * &node.f) {
        return Err(Error::verification("G^{-B} = G + B F", format!("walk {:?}", node.walk)));
    }
    if neg.f != node.f {
        return Err(Error::verification("F^{-B} = F", format!("walk {:?}", node.walk)));
    }
    Ok(())
}

fn expect_eq(identity: &str, walk: &[usize], l: usize, a: &IntMatrix, b: &IntMatrix) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::verification(identity, format!("walk {walk:?}, direction {l}: {a} vs {b}")))
    }
}

/// Properties that hold at every node: `G B_t = B C`, sign-coherence,
/// `det C = ±1`, F-matrix equal to degree vectors, F-polynomial shape and
/// agreement of both H routes.
pub fn verify_node(node: &PatternNode) -> Result<()> {
    let n = node.rank();
    let w = &node.walk;
    if &node.g * node.b_t.matrix() != node.initial.matrix() * &node.c {
        return Err(Error::verification("G B_t = B C", format!("walk {w:?}")));
    }
    for l in 0..n {
        tropical_sign(&node.c, l)?;
        row_sign(&node.g, l)?;
    }
    let det = node.c.det()?;
    if det.abs() != BigInt::one() {
        return Err(Error::verification("det C = ±1", format!("walk {w:?}: {det}")));
    }
    if node.f != node.degree_matrix() {
        return Err(Error::verification("F-matrix = degree vectors", format!("walk {w:?}")));
    }
    for (j, p) in node.fpolys.iter().enumerate() {
        if !p.constant_term().is_one() || !p.all_coefficients_positive() || !p.has_unique_maximal_monomial() {
            return Err(Error::verification("F-polynomial shape", format!("walk {w:?}, F_{}: {p}", j + 1)));
        }
    }
    h_matrix(node)?;
    Ok(())
}

/// Cross-checks every variant of the step `node → node'` in direction `ℓ`.
/// `neg` is the node over `-B` at the same walk.
pub fn verify_step(node: &PatternNode, neg: &PatternNode, l: usize, next: &PatternNode) -> Result<()> {
    let w = &node.walk;
    for eps in Sign::BOTH {
        expect_eq("C recursion, both ε", w, l, &mutate_c(node, l, eps)?, &next.c)?;
        expect_eq("G recursion, both ε", w, l, &mutate_g(node, l, eps)?, &next.g)?;
        expect_eq("F recursion, ε form", w, l, &mutate_fmat_eps(node, l, eps, &neg.c)?, &next.f)?;
    }
    expect_eq("reduced C step", w, l, &mutate_c_signed(node, l)?, &next.c)?;
    expect_eq("reduced G step", w, l, &mutate_g_signed(node, l)?, &next.g)?;
    expect_eq("reduced F step", w, l, &mutate_fmat_signed(node, l, &neg.c)?, &next.f)?;
    expect_eq("reduced F step, dual sign", w, l, &mutate_fmat_signed_dual(node, l, &neg.c)?, &next.f)?;
    Ok(())
}

/// How much checking a walk performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verification {
    /// Designated formulas plus the cheap identities `G B_t = B C`,
    /// ε-independence and F-matrix = degree vectors.
    Fast,
    /// Additionally walks the `-B` pattern and checks every variant,
    /// reduced form and node invariant at each step.
    Checked,
}

type CacheKey = (IntMatrix, Vec<usize>);

/// Memo of nodes keyed by initial matrix and walk. Safe to share between
/// threads; results do not depend on interleaving.
#[derive(Default)]
pub struct WalkCache {
    nodes: RwLock<HashMap<CacheKey, (Arc<PatternNode>, bool)>>,
}

impl WalkCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.nodes.write().unwrap().clear();
    }

    fn get(&self, b: &IntMatrix, walk: &[usize], need_checked: bool) -> Option<Arc<PatternNode>> {
        let map = self.nodes.read().unwrap();
        map.get(&(b.clone(), walk.to_vec()))
            .filter(|(_, checked)| *checked || !need_checked)
            .map(|(n, _)| n.clone())
    }

    fn put(&self, node: Arc<PatternNode>, checked: bool) {
        let key = (node.initial.matrix().clone(), node.walk.clone());
        let mut map = self.nodes.write().unwrap();
        let entry = map.entry(key).or_insert_with(|| (node.clone(), checked));
        entry.1 |= checked;
    }
}

fn fast_step(node: &PatternNode, l: usize) -> Result<PatternNode> {
    let next = node.mutate(l)?;
    let w = &node.walk;
    expect_eq("C recursion, both ε", w, l, &mutate_c(node, l, Sign::Neg)?, &next.c)?;
    expect_eq("G recursion, both ε", w, l, &mutate_g(node, l, Sign::Neg)?, &next.g)?;
    if &next.g * next.b_t.matrix() != next.initial.matrix() * &next.c {
        return Err(Error::verification("G B_t = B C", format!("walk {:?}", next.walk)));
    }
    if next.f != next.degree_matrix() {
        return Err(Error::verification("F-matrix = degree vectors", format!("walk {:?}", next.walk)));
    }
    Ok(next)
}

/// Node at the end of `walk` (0-based labels) starting from the initial matrix `b`.
pub fn walk_node(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, level: Verification) -> Result<Arc<PatternNode>> {
    match level {
        Verification::Fast => {
            for &l in walk {
                check_index(l, b.rank())?;
            }
            let (mut node, start) = longest_prefix(b, walk, cache, false);
            for i in start..walk.len() {
                node = Arc::new(fast_step(&node, walk[i])?);
                cache.put(node.clone(), false);
            }
            Ok(node)
        }
        Verification::Checked => walk_pair(b, walk, cache).map(|(n, _)| n),
    }
}

fn longest_prefix(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache, checked: bool) -> (Arc<PatternNode>, usize) {
    for len in (1..=walk.len()).rev() {
        if let Some(n) = cache.get(b.matrix(), &walk[..len], checked) {
            return (n, len);
        }
    }
    (Arc::new(initial_node(b)), 0)
}

/// Walks the `B` and `-B` patterns in lock step, verifying every step and
/// node, and returns both end nodes.
pub fn walk_pair(b: &ExchangeMatrix, walk: &[usize], cache: &WalkCache) -> Result<(Arc<PatternNode>, Arc<PatternNode>)> {
    for &l in walk {
        check_index(l, b.rank())?;
    }
    let nb = b.negated();
    let mut start = 0;
    let mut pair = None;
    for len in (1..=walk.len()).rev() {
        let p = &walk[..len];
        if let (Some(x), Some(y)) = (cache.get(b.matrix(), p, true), cache.get(nb.matrix(), p, true)) {
            pair = Some((x, y));
            start = len;
            break;
        }
    }
    let (mut node, mut neg) = match pair {
        Some(p) => p,
        None => {
            let x = initial_node(b);
            let y = initial_node(&nb);
            verify_node(&x)?;
            verify_node(&y)?;
            negated_pattern_relations(&x, &y)?;
            (Arc::new(x), Arc::new(y))
        }
    };
    for &l in &walk[start..] {
        let next = node.mutate(l)?;
        let next_neg = neg.mutate(l)?;
        verify_step(&node, &neg, l, &next)?;
        verify_step(&neg, &node, l, &next_neg)?;
        verify_node(&next)?;
        verify_node(&next_neg)?;
        negated_pattern_relations(&next, &next_neg)?;
        node = Arc::new(next);
        neg = Arc::new(next_neg);
        cache.put(node.clone(), true);
        cache.put(neg.clone(), true);
    }
    Ok((node, neg))
}

/// Uncached walk with the designated formulas only.
pub fn walk_plain(b: &ExchangeMatrix, walk: &[usize]) -> Result<PatternNode> {
    let mut node = initial_node(b);
    for &l in walk {
        node = node.mutate(l)?;
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap()
    }

    fn m(rows: &[[i64; 2]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    // Labels 2,1,2,1,2 in 0-based form.
    const WALK: [usize; 5] = [1, 0, 1, 0, 1];

    #[test]
    fn initial_node_shape() {
        let n = initial_node(&a2());
        assert_eq!(n.c, IntMatrix::identity(2));
        assert_eq!(n.g, IntMatrix::identity(2));
        assert!(n.f.is_zero());
        assert!(n.fpolys.iter().all(SparsePoly::is_one));
        let ext = ExchangeMatrix::from_rows(&[[0, 1, -1, 0], [-1, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]).unwrap();
        let n = initial_node(&ext);
        assert_eq!(n.c, IntMatrix::identity(4));
        assert!(n.f.is_zero());
    }

    #[test]
    fn a2_rows() {
        let cache = WalkCache::new();
        let node = |k: usize| walk_node(&a2(), &WALK[..k], &cache, Verification::Checked).unwrap();
        assert_eq!(node(1).c, m(&[[1, 0], [0, -1]]));
        assert_eq!(node(2).c, m(&[[-1, 0], [0, -1]]));
        assert_eq!(node(3).g, m(&[[-1, -1], [0, 1]]));
        assert_eq!(node(4).g, m(&[[0, -1], [1, 1]]));
        assert_eq!(node(4).f, m(&[[0, 1], [0, 0]]));
        let vars = node(0).y_vars().clone();
        assert_eq!(node(1).fpolys[1], parse_poly(&vars, "1 + y2").unwrap());
        assert_eq!(node(2).fpolys[0], parse_poly(&vars, "1 + y1 + y1*y2").unwrap());
        assert_eq!(node(3).fpolys[1], parse_poly(&vars, "1 + y1").unwrap());
        let last = node(5);
        assert_eq!(last.c, m(&[[0, 1], [1, 0]]));
        assert_eq!(last.g, last.c);
        assert!(last.f.is_zero());
        assert!(last.fpolys.iter().all(SparsePoly::is_one));
    }

    #[test]
    fn reduced_step_at_t2() {
        let n = walk_plain(&a2(), &WALK[..2]).unwrap();
        assert_eq!(tropical_sign(&n.c, 1).unwrap(), Sign::Neg);
        assert_eq!(mutate_c_signed(&n, 1).unwrap(), m(&[[-1, 0], [-1, 1]]));
    }

    #[test]
    fn tropical_sign_cases() {
        let t3 = m(&[[-1, 0], [-1, 1]]);
        assert_eq!(tropical_sign(&t3, 0).unwrap(), Sign::Neg);
        assert_eq!(tropical_sign(&IntMatrix::identity(3), 2).unwrap(), Sign::Pos);
        let mixed = IntMatrix::from_rows(&[[1], [-1]]).unwrap();
        assert!(matches!(tropical_sign(&mixed, 0), Err(Error::SignIncoherent { .. })));
        let zero = IntMatrix::zeros(2, 2);
        assert!(matches!(tropical_sign(&zero, 1), Err(Error::SignIncoherent { .. })));
    }

    #[test]
    fn eps_form_from_negated_pattern() {
        let n = initial_node(&a2());
        let neg = initial_node(&a2().negated());
        for eps in Sign::BOTH {
            assert_eq!(mutate_fmat_eps(&n, 1, eps, &neg.c).unwrap(), m(&[[0, 0], [0, 1]]));
        }
    }

    #[test]
    fn negated_relations_at_t2() {
        let cache = WalkCache::new();
        let (n, neg) = walk_pair(&a2(), &WALK[..2], &cache).unwrap();
        let expected = &m(&[[-1, 0], [0, -1]]) + &(&m(&[[1, 0], [1, 1]]) * n.b_t.matrix());
        assert_eq!(neg.c, expected);
        negated_pattern_relations(&n, &neg).unwrap();
    }

    #[test]
    fn h_matrices() {
        let n = walk_plain(&a2(), &WALK[..2]).unwrap();
        assert_eq!(h_matrix(&n).unwrap(), m(&[[-1, 0], [0, -1]]));
        assert!(h_matrix(&initial_node(&a2())).unwrap().is_zero());
    }

    #[test]
    fn involution_of_full_step() {
        let b = ExchangeMatrix::from_rows(&[[0, 2, 0], [-1, 0, 1], [0, -1, 0]]).unwrap();
        let base = walk_plain(&b, &[0, 2]).unwrap();
        for k in 0..3 {
            let back = walk_plain(&b, &[0, 2, k, k]).unwrap();
            assert!(back.seed_eq(&base));
        }
    }

    #[test]
    fn out_of_range_label() {
        let cache = WalkCache::new();
        assert!(matches!(
            walk_node(&a2(), &[2], &cache, Verification::Fast),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn json_dump_fields() {
        let n = walk_plain(&a2(), &WALK[..1]).unwrap();
        let v = n.to_json();
        assert_eq!(v["walk"], serde_json::json!([2]));
        assert_eq!(v["fpolys"][1], serde_json::json!("y2 + 1"));
        for key in ["B_t", "C", "G", "F", "H"] {
            assert!(v.get(key).is_some());
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::intmat::props::arb_exchange;
    use proptest::prelude::*;

    fn small(b: &ExchangeMatrix, walk: &[usize]) -> bool {
        crate::suite::walk_term_bound(b, walk).is_ok_and(|t| t <= BigInt::from(2000))
    }

    fn arb_case() -> impl Strategy<Value = (ExchangeMatrix, Vec<usize>)> {
        arb_exchange(3).prop_flat_map(|b| {
            let n = b.rank();
            (Just(b), prop::collection::vec(0..n, 0..5))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn node_invariants((b, walk) in arb_case()) {
            prop_assume!(small(&b, &walk));
            let node = match walk_plain(&b, &walk) {
                Err(Error::TermLimit { .. }) => return Ok(()),
                r => r.unwrap(),
            };
            prop_assert_eq!(&node.g * node.b_t.matrix(), b.matrix() * &node.c);
            prop_assert!(node.c.det().unwrap().abs().is_one());
            for (j, f) in node.fpolys.iter().enumerate() {
                let col: Vec<i64> = node.f.column(j).iter().map(|v| i64::try_from(v).unwrap()).collect();
                prop_assert_eq!(f.max_degree_vector(), col);
                prop_assert!(f.constant_term().is_one());
                prop_assert!(f.all_coefficients_positive());
                prop_assert!(f.has_unique_maximal_monomial());
            }
        }

        #[test]
        fn seed_steps_are_involutive((b, walk) in arb_case(), k in 0usize..3) {
            prop_assume!(k < b.rank());
            let mut there = walk.clone();
            there.extend([k, k]);
            prop_assume!(small(&b, &there));
            match (walk_plain(&b, &walk), walk_plain(&b, &there)) {
                (Ok(a), Ok(c)) => prop_assert!(a.seed_eq(&c)),
                (Err(Error::TermLimit { .. }), _) | (_, Err(Error::TermLimit { .. })) => {}
                (a, c) => panic!("{a:?} {c:?}"),
            }
        }
    }
}
