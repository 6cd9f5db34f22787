//! Seeds of cluster variables and coefficients: direct mutation over a chosen
//! semifield, the `ŷ` variables and the separation formulas, so that each
//! value can be computed by two independent routes.
//!
//! Cluster variables live in the ambient ring over `x1..xn, y1..yn`.

use crate::error::{Error, Result};
use crate::intmat::{ExchangeMatrix, IntMatrix};
use crate::pattern::{check_index, walk_node, PatternNode, Verification, WalkCache};
use crate::poly::{indexed_vars, to_i64, SparsePoly, Vars};
use crate::semifield::{compose, Semifield, SemifieldElement, SemifieldKind, SubtractionFreeRational};

/// A cluster variable: a subtraction-free fraction over `x1..xn, y1..yn`.
pub type SeparatedVariable = SubtractionFreeRational;

/// Coefficients `y_1..y_n` in the working semifield.
pub type CoefficientTuple = Vec<SemifieldElement>;

/// Size limits for the universal-semifield oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationLimits {
    pub max_rank: usize,
    pub max_walk: usize,
}

impl Default for SeparationLimits {
    fn default() -> Self {
        SeparationLimits { max_rank: 3, max_walk: 6 }
    }
}

impl SeparationLimits {
    pub fn admits(&self, rank: usize, walk_len: usize) -> bool {
        rank <= self.max_rank && walk_len <= self.max_walk
    }
}

fn entry(m: &IntMatrix, i: usize, j: usize) -> Result<i64> {
    to_i64(m.get(i, j))
}

/// `x1..xn, y1..yn`.
pub fn ambient_vars(n: usize) -> Vars {
    let mut names: Vec<String> = indexed_vars("x", n).to_vec();
    names.extend(indexed_vars("y", n).iter().cloned());
    Vars::from(names)
}

fn x_monomial(n: usize, x_exps: &[i64]) -> SubtractionFreeRational {
    let mut e = x_exps.to_vec();
    e.resize(2 * n, 0);
    SubtractionFreeRational::monomial(ambient_vars(n), &e)
}

/// Image of a semifield element in the ambient ring of rank `n`.
pub fn lift(sf: &Semifield, e: &SemifieldElement, n: usize) -> Result<SubtractionFreeRational> {
    let vars = ambient_vars(n);
    match e {
        SemifieldElement::One => Ok(SubtractionFreeRational::one(vars)),
        SemifieldElement::Trop(t) => {
            if t.exponents().len() != n {
                return Err(Error::DimensionMismatch("tropical element over a different rank".into()));
            }
            let mut exps = vec![0; n];
            exps.extend_from_slice(t.exponents());
            Ok(SubtractionFreeRational::monomial(vars, &exps))
        }
        SemifieldElement::Universal(u) => {
            if sf.generators().len() != n {
                return Err(Error::DimensionMismatch("universal semifield over a different rank".into()));
            }
            let map: Vec<usize> = (n..2 * n).collect();
            u.embed(&vars, &map)
        }
    }
}

/// A seed `(x, y, B)` over the semifield `sf`.
#[derive(Clone, Debug)]
pub struct Seed {
    pub b: ExchangeMatrix,
    pub x: Vec<SeparatedVariable>,
    pub y: CoefficientTuple,
}

impl Seed {
    /// The initial seed: `x_i` and `y_i` are the generators.
    pub fn initial(b: &ExchangeMatrix, sf: &Semifield) -> Result<Self> {
        let n = b.rank();
        let vars = ambient_vars(n);
        let x = (0..n).map(|i| SubtractionFreeRational::generator(vars.clone(), i)).collect();
        let y = (0..n).map(|i| sf.generator(i)).collect::<Result<Vec<_>>>()?;
        Ok(Seed { b: b.clone(), x, y })
    }

    pub fn rank(&self) -> usize {
        self.b.rank()
    }
}

fn y_rule(sf: &Semifield, y: &[SemifieldElement], b: &ExchangeMatrix, k: usize) -> Result<CoefficientTuple> {
    let yk1 = sf.add(&y[k], &sf.one())?;
    (0..y.len())
        .map(|j| {
            if j == k {
                return sf.pow(&y[k], -1);
            }
            let bkj = entry(b.matrix(), k, j)?;
            let t = sf.mul(&y[j], &sf.pow(&y[k], bkj.max(0))?)?;
            sf.mul(&t, &sf.pow(&yk1, -bkj)?)
        })
        .collect()
}

/// The rule `y_j y_k^{[-b_kj]+} (y_k^{-1} ⊕ 1)^{-b_kj}`.
pub fn y_rule_alternative(sf: &Semifield, y: &[SemifieldElement], b: &ExchangeMatrix, k: usize) -> Result<CoefficientTuple> {
    let inv = sf.pow(&y[k], -1)?;
    let s = sf.add(&inv, &sf.one())?;
    (0..y.len())
        .map(|j| {
            if j == k {
                return Ok(inv.clone());
            }
            let bkj = entry(b.matrix(), k, j)?;
            let t = sf.mul(&y[j], &sf.pow(&y[k], (-bkj).max(0))?)?;
            sf.mul(&t, &sf.pow(&s, -bkj)?)
        })
        .collect()
}

/// Mutation of `(x, y, B)` in direction `k`, with the two forms of the
/// coefficient rule checked against each other.
pub fn mutate_seed_direct(seed: &Seed, k: usize, sf: &Semifield) -> Result<Seed> {
    let n = seed.rank();
    check_index(k, n)?;
    let b = &seed.b;
    let y = y_rule(sf, &seed.y, b, k)?;
    let alt = y_rule_alternative(sf, &seed.y, b, k)?;
    for (j, (u, v)) in y.iter().zip(&alt).enumerate() {
        if !sf.eq(u, v)? {
            return Err(Error::verification("alternative coefficient rule", format!("k = {}, j = {}", k + 1, j + 1)));
        }
    }

    let vars = ambient_vars(n);
    let mut plus = SubtractionFreeRational::one(vars.clone());
    let mut minus = SubtractionFreeRational::one(vars.clone());
    for i in 0..n {
        let bik = entry(b.matrix(), i, k)?;
        if bik > 0 {
            plus = plus.mul(&seed.x[i].pow(bik)?)?;
        } else if bik < 0 {
            minus = minus.mul(&seed.x[i].pow(-bik)?)?;
        }
    }
    let yk = lift(sf, &seed.y[k], n)?;
    let yk1 = lift(sf, &sf.add(&seed.y[k], &sf.one())?, n)?;
    let num = yk.mul(&plus)?.add(&minus)?;
    let xk = num.div(&yk1.mul(&seed.x[k])?)?;

    let mut x = seed.x.clone();
    x[k] = xk;
    Ok(Seed { b: b.mutate(k)?, x, y })
}

/// The seeds along `walk`, starting with `start`.
pub fn direct_walk(start: Seed, walk: &[usize], sf: &Semifield) -> Result<Vec<Seed>> {
    let mut out = vec![start];
    for &k in walk {
        let next = mutate_seed_direct(out.last().expect("nonempty"), k, sf)?;
        out.push(next);
    }
    Ok(out)
}

/// `ŷ_i = y_i Π_j x_j^{b_ji}`.
pub fn yhat(x: &[SeparatedVariable], y: &[SemifieldElement], b: &ExchangeMatrix, sf: &Semifield) -> Result<Vec<SubtractionFreeRational>> {
    let n = b.rank();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch("seed of the wrong rank".into()));
    }
    (0..n)
        .map(|i| {
            let mut acc = lift(sf, &y[i], n)?;
            for j in 0..n {
                let bji = entry(b.matrix(), j, i)?;
                if bji != 0 {
                    acc = acc.mul(&x[j].pow(bji)?)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Degree of an ambient monomial when `deg x_i = e_i` and `deg y_i = -b_i`
/// (`b_i` the `i`th column of `b`).
pub fn ambient_degree(exps: &[i64], b: &ExchangeMatrix) -> Vec<i64> {
    let n = b.rank();
    let mut d = exps[..n].to_vec();
    for (i, &a) in exps[n..].iter().enumerate() {
        for (r, dr) in d.iter_mut().enumerate() {
            *dr -= a * entry(b.matrix(), r, i).unwrap_or(0);
        }
    }
    d
}

/// Whether `r` is homogeneous of degree zero in the grading above.
pub fn is_degree_zero(r: &SubtractionFreeRational, b: &ExchangeMatrix) -> Result<bool> {
    let degs = |p: &SparsePoly| {
        let mut it = p.terms().map(|(m, _)| ambient_degree(m.exps(), b));
        let first = it.next();
        match first {
            Some(d) if it.all(|e| e == d) => Some(d),
            _ => None,
        }
    };
    Ok(matches!((degs(r.num()?), degs(r.den()?)), (Some(a), Some(b)) if a == b))
}

/// The Laurent polynomial equal to `r`, or `NonLaurent` when its
/// denominator does not clear.
pub fn laurent_form(r: &SubtractionFreeRational) -> Result<SparsePoly> {
    r.as_laurent()?.ok_or_else(|| Error::NonLaurent(r.render()))
}

fn check_node(node: &PatternNode, y_values: &[SemifieldElement]) -> Result<usize> {
    let n = node.rank();
    if y_values.len() != n {
        return Err(Error::DimensionMismatch(format!("{} coefficient values for rank {n}", y_values.len())));
    }
    Ok(n)
}

/// `x_{j;t} = x^{g_j} F_j(ŷ) / F_j|_ℙ(y)` with `y = y_values` at the root.
/// Over a tropical or trivial semifield the result must be Laurent in `x`.
pub fn cluster_variable_separated(
    node: &PatternNode,
    j: usize,
    sf: &Semifield,
    y_values: &[SemifieldElement],
) -> Result<SeparatedVariable> {
    let n = check_node(node, y_values)?;
    check_index(j, n)?;
    let vars = ambient_vars(n);
    let x0: Vec<_> = (0..n).map(|i| SubtractionFreeRational::generator(vars.clone(), i)).collect();
    let yh = yhat(&x0, y_values, &node.initial, sf)?;
    let g: Vec<i64> = (0..n).map(|i| entry(&node.g, i, j)).collect::<Result<_>>()?;
    let f = &node.fpolys[j];
    let fy = compose(f, &vars, &yh)?;
    let den = lift(sf, &sf.evaluate_at(f, y_values)?, n)?;
    let r = x_monomial(n, &g).mul(&fy)?.div(&den)?;
    if sf.kind() != SemifieldKind::Universal {
        laurent_form(&r)?;
    }
    Ok(r)
}

/// `y_{j;t} = Π_k y_k^{c_kj} Π_k (F_k|_ℙ(y))^{b_kj;t}`.
pub fn coefficient_separated(
    node: &PatternNode,
    j: usize,
    sf: &Semifield,
    y_values: &[SemifieldElement],
) -> Result<SemifieldElement> {
    let n = check_node(node, y_values)?;
    check_index(j, n)?;
    let mut acc = sf.one();
    for k in 0..n {
        let c = entry(&node.c, k, j)?;
        if c != 0 {
            acc = sf.mul(&acc, &sf.pow(&y_values[k], c)?)?;
        }
    }
    for k in 0..n {
        let b = entry(node.b_t.matrix(), k, j)?;
        if b != 0 {
            let fk = sf.evaluate_at(&node.fpolys[k], y_values)?;
            acc = sf.mul(&acc, &sf.pow(&fk, b)?)?;
        }
    }
    Ok(acc)
}

/// The whole seed at `node` by the separation formulas, from the root
/// coefficients `y_values`.
pub fn separated_seed(node: &PatternNode, sf: &Semifield, y_values: &[SemifieldElement]) -> Result<Seed> {
    let n = node.rank();
    let x = (0..n).map(|j| cluster_variable_separated(node, j, sf, y_values)).collect::<Result<Vec<_>>>()?;
    let y = (0..n).map(|j| coefficient_separated(node, j, sf, y_values)).collect::<Result<Vec<_>>>()?;
    Ok(Seed { b: node.b_t.clone(), x, y })
}

/// Semantic equality of two seeds over `sf`; the first differing entry is
/// reported as `(is_x, index)`.
pub fn seed_difference(a: &Seed, b: &Seed, sf: &Semifield) -> Result<Option<(bool, usize)>> {
    if a.b != b.b {
        return Err(Error::verification("exchange matrices agree", format!("{} vs {}", a.b, b.b)));
    }
    for (i, (u, v)) in a.y.iter().zip(&b.y).enumerate() {
        if !sf.eq(u, v)? {
            return Ok(Some((false, i)));
        }
    }
    for (i, (u, v)) in a.x.iter().zip(&b.x).enumerate() {
        if !u.semantic_eq(v)? {
            return Ok(Some((true, i)));
        }
    }
    Ok(None)
}

/// Compares the direct-mutation route with the separation formulas at every
/// vertex of `walk`, starting from the generators of `sf`. Returns the
/// direct-route seeds.
pub fn compare_routes(b: &ExchangeMatrix, walk: &[usize], sf: &Semifield, cache: &WalkCache, level: Verification) -> Result<Vec<Seed>> {
    let start = Seed::initial(b, sf)?;
    let y0 = start.y.clone();
    let seeds = direct_walk(start, walk, sf)?;
    for (t, seed) in seeds.iter().enumerate() {
        let node = walk_node(b, &walk[..t], cache, level)?;
        let sep = separated_seed(&node, sf, &y0)?;
        if let Some((is_x, i)) = seed_difference(seed, &sep, sf)? {
            let w: Vec<usize> = walk[..t].iter().map(|l| l + 1).collect();
            let what = if is_x { "cluster variable" } else { "coefficient" };
            return Err(Error::verification(
                "separation formula equals direct mutation",
                format!("{what} {} at walk {w:?}", i + 1),
            ));
        }
    }
    Ok(seeds)
}

/// The cluster variables with principal coefficients along `walk`, computed
/// by direct mutation over `Trop(y)` and reduced to Laurent polynomials.
pub fn principal_cluster_variables(b: &ExchangeMatrix, walk: &[usize]) -> Result<Vec<SparsePoly>> {
    let sf = Semifield::tropical(indexed_vars("y", b.rank()));
    let seeds = direct_walk(Seed::initial(b, &sf)?, walk, &sf)?;
    seeds.last().expect("nonempty").x.iter().map(laurent_form).collect()
}

/// `ρ_k` on the ambient field: the substitution of `(x, y)` by their
/// mutation in direction `k` with respect to `B₁ = μ_k(B)`.
pub fn rho_k_field(expr: &SubtractionFreeRational, b: &ExchangeMatrix, k: usize) -> Result<SubtractionFreeRational> {
    let n = b.rank();
    let vars = ambient_vars(n);
    if expr.vars() != &vars {
        return Err(Error::DimensionMismatch("expression is not over x1..xn, y1..yn".into()));
    }
    let sf = Semifield::universal(indexed_vars("y", n));
    let b1 = b.mutate(k)?;
    let img = mutate_seed_direct(&Seed::initial(&b1, &sf)?, k, &sf)?;
    let mut values = img.x;
    for e in &img.y {
        values.push(lift(&sf, e, n)?);
    }
    expr.map_polys(&vars, |p| compose(p, &vars, &values))
}

/// Checks `𝒴^{B₁;t₁} = ρ_k(𝒴^{B;t₀})` and the same for `𝒳` at the end of `walk`.
pub fn rho_coherence(b: &ExchangeMatrix, walk: &[usize], k: usize) -> Result<()> {
    let n = b.rank();
    check_index(k, n)?;
    let sf = Semifield::universal(indexed_vars("y", n));
    let from_t0 = direct_walk(Seed::initial(b, &sf)?, walk, &sf)?.pop().expect("nonempty");
    let b1 = b.mutate(k)?;
    let mut walk1 = vec![k];
    walk1.extend_from_slice(walk);
    let from_t1 = direct_walk(Seed::initial(&b1, &sf)?, &walk1, &sf)?.pop().expect("nonempty");
    for j in 0..n {
        let (u, v) = match (&from_t0.y[j], &from_t1.y[j]) {
            (SemifieldElement::Universal(u), SemifieldElement::Universal(v)) => (u, v),
            _ => return Err(Error::SemifieldMismatch("expected universal coefficients".into())),
        };
        if !crate::initial_seed::rho_k(u, b, k)?.semantic_eq(v)? {
            return Err(Error::verification("coefficient re-rooting by ρ_k", format!("k = {}, j = {}", k + 1, j + 1)));
        }
        if !rho_k_field(&from_t0.x[j], b, k)?.semantic_eq(&from_t1.x[j])? {
            return Err(Error::verification("cluster variable re-rooting by ρ_k", format!("k = {}, j = {}", k + 1, j + 1)));
        }
    }
    Ok(())
}

/// Whether every cluster variable of `seed` is a Laurent polynomial.
pub fn all_laurent(seed: &Seed) -> bool {
    seed.x.iter().all(|r| laurent_form(r).is_ok_and(|p| !p.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap()
    }

    fn univ(n: usize) -> Semifield {
        Semifield::universal(indexed_vars("y", n))
    }

    fn frac(n: usize, num: &str, den: &str) -> SubtractionFreeRational {
        let v = ambient_vars(n);
        SubtractionFreeRational::new(parse_poly(&v, num).unwrap(), parse_poly(&v, den).unwrap()).unwrap()
    }

    fn yfrac(num: &str, den: &str) -> SemifieldElement {
        let v = indexed_vars("y", 2);
        SemifieldElement::Universal(
            SubtractionFreeRational::new(parse_poly(&v, num).unwrap(), parse_poly(&v, den).unwrap()).unwrap(),
        )
    }

    #[test]
    fn first_mutation_of_a2() {
        let sf = univ(2);
        let s = mutate_seed_direct(&Seed::initial(&a2(), &sf).unwrap(), 1, &sf).unwrap();
        assert!(s.x[1].semantic_eq(&frac(2, "x1*y2 + 1", "y2*x2 + x2")).unwrap());
        assert!(sf.eq(&s.y[0], &yfrac("y1*y2 + y1", "1")).unwrap());
        assert!(sf.eq(&s.y[1], &yfrac("1", "y2")).unwrap());
    }

    #[test]
    fn double_mutation_restores() {
        let b = ExchangeMatrix::from_rows(&[[0, 2, -1], [-1, 0, 1], [1, -2, 0]]);
        let b = match b {
            Ok(b) => b,
            Err(_) => ExchangeMatrix::from_rows(&[[0, 1, -1], [-1, 0, 1], [1, -1, 0]]).unwrap(),
        };
        for sf in [univ(3), Semifield::tropical(indexed_vars("y", 3)), Semifield::one_element()] {
            let s0 = Seed::initial(&b, &sf).unwrap();
            for k in 0..3 {
                let s = direct_walk(s0.clone(), &[k, k], &sf).unwrap().pop().unwrap();
                assert_eq!(seed_difference(&s, &s0, &sf).unwrap(), None);
            }
        }
    }

    #[test]
    fn trivial_semifield_keeps_unit_coefficients() {
        let sf = Semifield::one_element();
        let s = mutate_seed_direct(&Seed::initial(&a2(), &sf).unwrap(), 1, &sf).unwrap();
        assert!(s.y.iter().all(|e| matches!(e, SemifieldElement::One)));
        assert!(s.x[1].semantic_eq(&frac(2, "x1 + 1", "x2")).unwrap());
    }

    #[test]
    fn yhat_of_a2_and_its_negation() {
        let sf = univ(2);
        let s = Seed::initial(&a2(), &sf).unwrap();
        let yh = yhat(&s.x, &s.y, &a2(), &sf).unwrap();
        assert!(yh[0].semantic_eq(&frac(2, "y1", "x2")).unwrap());
        assert!(yh[1].semantic_eq(&frac(2, "y2*x1", "1")).unwrap());
        let inv: Vec<_> = s.y.iter().map(|e| sf.pow(e, -1).unwrap()).collect();
        let neg = yhat(&s.x, &inv, &a2().negated(), &sf).unwrap();
        for (a, b) in yh.iter().zip(&neg) {
            assert!(a.mul(b).unwrap().is_one().unwrap());
            assert!(is_degree_zero(a, &a2()).unwrap());
        }
        let zero = ExchangeMatrix::from_rows(&[[0, 0], [0, 0]]).unwrap();
        let yh = yhat(&s.x, &s.y, &zero, &sf).unwrap();
        assert!(yh[1].semantic_eq(&frac(2, "y2", "1")).unwrap());
    }

    #[test]
    fn separation_examples() {
        let sf = univ(2);
        let y0 = Seed::initial(&a2(), &sf).unwrap().y;
        let cache = WalkCache::new();
        let t2 = walk_node(&a2(), &[1, 0], &cache, Verification::Checked).unwrap();
        let x = cluster_variable_separated(&t2, 0, &sf, &y0).unwrap();
        assert!(x.semantic_eq(&frac(2, "x1*y1*y2 + y1 + x2", "x1*x2*y1*y2 + x1*x2*y1 + x1*x2")).unwrap());
        let t3 = walk_node(&a2(), &[1, 0, 1], &cache, Verification::Checked).unwrap();
        let y = coefficient_separated(&t3, 1, &sf, &y0).unwrap();
        assert!(sf.eq(&y, &yfrac("y2", "y1*y2 + y1 + 1")).unwrap());
        let t0 = walk_node(&a2(), &[], &cache, Verification::Checked).unwrap();
        assert!(cluster_variable_separated(&t0, 1, &sf, &y0).unwrap().semantic_eq(&frac(2, "x2", "1")).unwrap());
    }

    #[test]
    fn principal_coefficients_give_c_columns() {
        let b = ExchangeMatrix::from_rows(&[[0, 2, -1], [-1, 0, 1], [1, -2, 0]]).unwrap_or_else(|_| a2());
        let n = b.rank();
        let sf = Semifield::tropical(indexed_vars("y", n));
        let y0 = Seed::initial(&b, &sf).unwrap().y;
        let walk: Vec<usize> = [0, 1, 2, 0].iter().copied().filter(|&l| l < n).collect();
        let node = walk_node(&b, &walk, &WalkCache::new(), Verification::Checked).unwrap();
        for j in 0..n {
            let y = coefficient_separated(&node, j, &sf, &y0).unwrap();
            let col: Vec<i64> = (0..n).map(|i| entry(&node.c, i, j).unwrap()).collect();
            assert_eq!(y.as_tropical().unwrap().exponents(), col.as_slice());
        }
    }

    #[test]
    fn routes_agree_on_a2_table_walk() {
        let cache = WalkCache::new();
        for sf in [univ(2), Semifield::tropical(indexed_vars("y", 2)), Semifield::one_element()] {
            compare_routes(&a2(), &[1, 0, 1, 0, 1], &sf, &cache, Verification::Checked).unwrap();
        }
    }

    #[test]
    fn routes_agree_at_rank_three() {
        let b = ExchangeMatrix::from_rows(&[[0, 1, 0], [-1, 0, 1], [0, -1, 0]]).unwrap();
        let cache = WalkCache::new();
        compare_routes(&b, &[0, 1, 2, 0, 1], &univ(3), &cache, Verification::Fast).unwrap();
        let xs = principal_cluster_variables(&b, &[0, 1, 2, 0, 1]).unwrap();
        assert!(xs.iter().all(|p| p.all_coefficients_positive()));
    }

    #[test]
    fn laurent_failure_is_reported() {
        let r = frac(2, "x1 + 1", "x2 + 1");
        assert!(matches!(laurent_form(&r), Err(Error::NonLaurent(_))));
        let r = frac(2, "x1*x2 + x1", "x2*x1 + x1*x1*x2 + x1*x1");
        assert!(matches!(laurent_form(&r), Err(Error::NonLaurent(_))));
        let r = frac(2, "x1*x1*x2 + x1*x2", "x1*x1 + x1");
        assert_eq!(laurent_form(&r).unwrap(), parse_poly(&ambient_vars(2), "x2").unwrap());
    }

    #[test]
    fn rho_on_a2() {
        for k in 0..2 {
            for walk in [vec![], vec![1], vec![1, 0], vec![0, 1, 0]] {
                rho_coherence(&a2(), &walk, k).unwrap();
            }
        }
        let b = ExchangeMatrix::from_rows(&[[0, 2], [-1, 0]]).unwrap();
        rho_coherence(&b, &[0, 1], 1).unwrap();
    }
}
