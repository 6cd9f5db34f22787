//! Sparse multivariate (Laurent) polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Terms are kept in a `BTreeMap` under graded lexicographic order, so the
//! leading term is the last entry. Exponents may be negative; the F-polynomial
//! helpers assume they are not.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{pos, ExchangeMatrix};
use crate::semifield::SubtractionFreeRational;

/// Default ceiling on the number of terms any single polynomial may reach.
pub const DEFAULT_TERM_LIMIT: usize = 200_000;

static TERM_LIMIT: AtomicUsize = AtomicUsize::new(DEFAULT_TERM_LIMIT);

pub fn term_limit() -> usize {
    TERM_LIMIT.load(AtomicOrdering::Relaxed)
}

/// Sets the process-wide term ceiling.
pub fn set_term_limit(limit: usize) {
    TERM_LIMIT.store(limit.max(1), AtomicOrdering::Relaxed);
}

fn check_limit(terms: usize) -> Result<()> {
    let limit = term_limit();
    if terms > limit {
        Err(Error::TermLimit { terms, limit })
    } else {
        Ok(())
    }
}

/// Ordered variable names shared between polynomials.
pub type Vars = Arc<[String]>;

/// `prefix1, ..., prefix{n}`.
pub fn indexed_vars(prefix: &str, n: usize) -> Vars {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[i64]>);

impl Monomial {
    pub fn new(exps: impl Into<Box<[i64]>>) -> Self {
        Monomial(exps.into())
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n].into())
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, which may have negative exponents.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    /// True when `self` divides `other` in the polynomial ring.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct SparsePoly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars) && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl SparsePoly {
    pub fn zero(vars: Vars) -> Self {
        SparsePoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: Vars, c: BigInt) -> Self {
        let n = vars.len();
        Self::monomial(vars, vec![0; n], c)
    }

    pub fn monomial(vars: Vars, exps: Vec<i64>, coef: BigInt) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent arity");
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(Monomial::new(exps), coef);
        }
        SparsePoly { vars, terms }
    }

    pub fn variable(vars: Vars, i: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::monomial(vars, exps, BigInt::one())
    }

    /// Collects terms, merging repeated exponents and dropping zeros.
    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Result<Self> {
        let mut acc: HashMap<Vec<i64>, BigInt> = HashMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent of arity {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            *acc.entry(e).or_default() += c;
        }
        Ok(Self::from_accumulator(vars, acc))
    }

    fn from_accumulator(vars: Vars, acc: HashMap<Vec<i64>, BigInt>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial::new(e), c))
            .collect();
        SparsePoly { vars, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn coefficient(&self, exps: &[i64]) -> BigInt {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.nvars()])
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    pub fn has_nonnegative_exponents(&self) -> bool {
        self.terms.keys().all(|m| m.exps().iter().all(|&e| e >= 0))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "polynomials over {:?} and {:?}",
                self.vars, other.vars
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        check_limit(terms.len())?;
        Ok(SparsePoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars.clone());
        }
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Multiplies by the monomial with exponent vector `exps`.
    pub fn mul_monomial(&self, exps: &[i64]) -> Self {
        let m = Monomial::new(exps.to_vec());
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(&m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars.clone()));
        }
        if self.is_one() {
            return Ok(other.clone());
        }
        if other.is_one() {
            return Ok(self.clone());
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_monomial() {
            let (m, c) = small.terms.iter().next().unwrap();
            let mut out = large.mul_monomial(m.exps());
            if !c.is_one() {
                out = out.scale(c);
            }
            return Ok(out);
        }
        let mut acc: HashMap<Vec<i64>, BigInt> = HashMap::with_capacity((small.len() * large.len()).min(term_limit()));
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let e: Vec<i64> = ma.exps().iter().zip(mb.exps()).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
            check_limit(acc.len())?;
        }
        Ok(Self::from_accumulator(self.vars.clone(), acc))
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact quotient `self / q` by multivariate long division under graded
    /// lexicographic order. Any nonzero remainder is reported as
    /// [`Error::NotDivisible`].
    pub fn exact_div(&self, q: &Self) -> Result<Self> {
        self.same_ring(q)?;
        let (lm, lc) = q.leading_term().ok_or(Error::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Self::zero(self.vars.clone()));
        }
        if q.is_one() {
            return Ok(self.clone());
        }
        // The smallest term of a product is the product of the smallest terms.
        let (tp, _) = self.terms.first_key_value().unwrap();
        let (tq, _) = q.terms.first_key_value().unwrap();
        if !tq.divides(tp) {
            return Err(Error::NotDivisible);
        }
        let rest: Vec<(&Monomial, &BigInt)> = q.terms.iter().rev().skip(1).collect();
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        let limit = term_limit();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return Err(Error::NotDivisible);
            }
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            let qm = m.div(lm);
            for (mq, cq) in &rest {
                add_term(&mut rem, qm.mul(mq), -(&qc * *cq));
            }
            quot.insert(qm, qc);
            if quot.len() > limit || rem.len() > limit.saturating_mul(4) {
                return Err(Error::TermLimit {
                    terms: quot.len().max(rem.len()),
                    limit,
                });
            }
        }
        Ok(SparsePoly {
            vars: self.vars.clone(),
            terms: quot,
        })
    }

    /// Exact division in the Laurent polynomial ring.
    pub fn exact_div_laurent(&self, q: &Self) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.vars.clone()));
        }
        let mp = self.min_degree_vector();
        let mq = q.min_degree_vector();
        let neg = |v: &[i64]| v.iter().map(|e| -e).collect::<Vec<_>>();
        let p0 = self.mul_monomial(&neg(&mp));
        let q0 = q.mul_monomial(&neg(&mq));
        let r0 = p0.exact_div(&q0)?;
        let shift: Vec<i64> = mp.iter().zip(&mq).map(|(a, b)| a - b).collect();
        Ok(r0.mul_monomial(&shift))
    }

    /// Componentwise maximum exponent over all terms; zero vector for the zero polynomial.
    pub fn max_degree_vector(&self) -> Vec<i64> {
        self.fold_exponents(i64::max)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_degree_vector(&self) -> Vec<i64> {
        self.fold_exponents(i64::min)
    }

    fn fold_exponents(&self, f: impl Fn(i64, i64) -> i64) -> Vec<i64> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars()];
        };
        let mut acc = first.exps().to_vec();
        for m in it {
            for (a, &e) in acc.iter_mut().zip(m.exps()) {
                *a = f(*a, e);
            }
        }
        acc
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every coefficient by `d`, which must divide all of them.
    pub fn div_integer(&self, d: &BigInt) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect(),
        }
    }

    /// True when there is a term whose exponent equals the componentwise
    /// maximum, its coefficient is 1, and it is therefore divisible by
    /// every other occurring monomial.
    pub fn has_unique_maximal_monomial(&self) -> bool {
        let top = self.max_degree_vector();
        self.coefficient(&top).is_one()
    }

    /// Single-variable tropical degree used for H-matrix entries: the
    /// minimum over monomials `y^a` of `Σ_k a_k e_k`, where `e_i = -1` and
    /// `e_k = [-b_ik]_+` for `k != i`.
    pub fn h_entry(&self, i: usize, b: &ExchangeMatrix) -> Result<i64> {
        if i >= b.rank() || self.nvars() != b.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: b.rank().min(self.nvars()),
            });
        }
        let weights: Vec<i64> = (0..b.rank())
            .map(|k| {
                if k == i {
                    Ok(-1)
                } else {
                    to_i64(&pos(&-b.get(i, k)))
                }
            })
            .collect::<Result<_>>()?;
        Ok(self
            .terms
            .keys()
            .map(|m| m.exps().iter().zip(&weights).map(|(a, w)| a * w).sum::<i64>())
            .min()
            .unwrap_or(0))
    }

    /// Composes `self` with a substitution sending each variable to a Laurent
    /// monomial, optionally times a power `(1 + v)^e` of a binomial in one
    /// target variable `v`. The result lives in the universal semifield over
    /// `target`; `self` must have nonnegative coefficients.
    pub fn substitute_monomials(&self, target: &Vars, subs: &[MonomialSubstitution]) -> Result<SubtractionFreeRational> {
        if subs.len() != self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.nvars()
            )));
        }
        if !self.terms.values().all(|c| !c.is_negative()) {
            return Err(Error::NotSubtractionFree);
        }
        let width = target.len();
        for s in subs {
            if s.monomial.len() != width || s.binomial.is_some_and(|(v, _)| v >= width) {
                return Err(Error::DimensionMismatch("substitution arity".into()));
            }
        }
        let mut binomial_vars: Vec<usize> = subs.iter().filter_map(|s| s.binomial.map(|(v, _)| v)).collect();
        binomial_vars.sort_unstable();
        binomial_vars.dedup();

        // Group terms by their exponent vector on the binomial factors.
        let mut groups: BTreeMap<Vec<i64>, HashMap<Vec<i64>, BigInt>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mono = vec![0i64; width];
            let mut bexp = vec![0i64; binomial_vars.len()];
            for (a, s) in m.exps().iter().zip(subs) {
                if *a == 0 {
                    continue;
                }
                for (t, e) in mono.iter_mut().zip(&s.monomial) {
                    *t += a * e;
                }
                if let Some((v, e)) = s.binomial {
                    let idx = binomial_vars.binary_search(&v).unwrap();
                    bexp[idx] += a * e;
                }
            }
            *groups.entry(bexp).or_default().entry(mono).or_default() += c;
        }
        let mut base = vec![i64::MAX; binomial_vars.len()];
        for bexp in groups.keys() {
            for (b, e) in base.iter_mut().zip(bexp) {
                *b = (*b).min(*e);
            }
        }
        let one_plus = |v: usize| -> SparsePoly {
            SparsePoly::one(target.clone())
                .add(&SparsePoly::variable(target.clone(), v))
                .expect("same ring")
        };
        let mut num = SparsePoly::zero(target.clone());
        for (bexp, monos) in groups {
            let mut part = SparsePoly::from_accumulator(target.clone(), monos);
            for ((&v, e), b) in binomial_vars.iter().zip(&bexp).zip(&base) {
                let rel = e - b;
                if rel > 0 {
                    part = part.mul(&one_plus(v).pow(exp_u32(rel)?)?)?;
                }
            }
            num = num.add(&part)?;
        }
        let mut den = SparsePoly::one(target.clone());
        for (&v, &b) in binomial_vars.iter().zip(&base) {
            let f = one_plus(v).pow(exp_u32(b.abs())?)?;
            if b > 0 {
                num = num.mul(&f)?;
            } else if b < 0 {
                den = den.mul(&f)?;
            }
        }
        SubtractionFreeRational::new(num, den)
    }

    /// Re-expresses `self` over `target`, sending variable `i` to `target[map[i]]`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars() || map.iter().any(|&j| j >= target.len()) {
            return Err(Error::DimensionMismatch("embedding map".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; target.len()];
                for (i, &a) in m.exps().iter().enumerate() {
                    e[map[i]] += a;
                }
                (e, c.clone())
            })
            .collect::<Vec<_>>();
        Self::from_terms(target.clone(), terms)
    }

    /// Same terms over a renamed (equal-arity) variable list.
    pub fn with_vars(&self, vars: Vars) -> Result<Self> {
        if vars.len() != self.nvars() {
            return Err(Error::DimensionMismatch("renaming changes arity".into()));
        }
        Ok(SparsePoly {
            vars,
            terms: self.terms.clone(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms()
                .map(|(m, c)| serde_json::json!({ "exp": m.exps(), "coef": c.to_string() }))
                .collect(),
        )
    }

    pub fn from_json(vars: Vars, v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial must be a list of terms".into()))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let exp = t["exp"]
                .as_array()
                .ok_or_else(|| Error::Parse("term without \"exp\"".into()))?
                .iter()
                .map(|e| e.as_i64().ok_or_else(|| Error::Parse("bad exponent".into())))
                .collect::<Result<Vec<i64>>>()?;
            let coef = crate::intmat::bigint_from_json(&t["coef"]).map_err(Error::Parse)?;
            terms.push((exp, coef));
        }
        Self::from_terms(vars, terms)
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::ExponentOverflow(v.to_string()))
}

pub(crate) fn exp_u32(e: i64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::ExponentOverflow(e.to_string()))
}

/// Image of one variable under [`SparsePoly::substitute_monomials`]:
/// `x^monomial · (1 + x_v)^e` when `binomial = Some((v, e))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSubstitution {
    pub monomial: Vec<i64>,
    pub binomial: Option<(usize, i64)>,
}

impl MonomialSubstitution {
    pub fn monomial(exps: Vec<i64>) -> Self {
        MonomialSubstitution {
            monomial: exps,
            binomial: None,
        }
    }

    pub fn identity(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, &e) in vars.iter().zip(m.exps()) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Attempts of the evaluation/interpolation gcd before it gives up.
const GCD_ATTEMPTS: usize = 6;

/// The gcd gives up once an evaluation point needs more bits than this.
const GCD_MAX_BITS: u64 = 4_096;

impl SparsePoly {
    fn max_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Leading integer coefficient when variable `x` is given priority.
    fn ground_lc(&self, x: usize) -> BigInt {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.0[x].cmp(&b.0[x]).then_with(|| a.0.cmp(&b.0)))
            .map(|(_, c)| c.abs())
            .unwrap_or_default()
    }

    fn primitive(&self) -> (BigInt, Self) {
        let mut c = self.content();
        if self.leading_term().is_some_and(|(_, lc)| lc.is_negative()) {
            c = -c;
        }
        if c.is_zero() || c.is_one() {
            return (BigInt::one(), self.clone());
        }
        (c.clone(), self.div_integer(&c))
    }

    /// `self` with variable `x` set to the integer `xi`.
    fn eval_var(&self, x: usize, xi: &BigInt) -> Self {
        let top = self.terms.keys().map(|m| m.0[x]).max().unwrap_or(0).max(0) as usize;
        let mut powers = Vec::with_capacity(top + 1);
        powers.push(BigInt::one());
        for i in 0..top {
            let next = &powers[i] * xi;
            powers.push(next);
        }
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.0.to_vec();
            let k = std::mem::replace(&mut e[x], 0) as usize;
            add_term(&mut out, Monomial::new(e), c * &powers[k]);
        }
        SparsePoly { vars: self.vars.clone(), terms: out }
    }

    /// Inverse of [`Self::eval_var`] for small coefficients: reads the
    /// balanced base-`xi` digits of every coefficient as powers of `x`.
    fn interpolate_var(&self, x: usize, xi: &BigInt) -> Self {
        let half = xi / 2;
        let mut rest = self.clone();
        let mut out = BTreeMap::new();
        let mut power = 0i64;
        while !rest.is_zero() {
            let mut next = BTreeMap::new();
            for (m, c) in &rest.terms {
                let mut d = c.mod_floor(xi);
                if d > half {
                    d -= xi;
                }
                let q = (c - &d) / xi;
                if !d.is_zero() {
                    let mut e = m.0.to_vec();
                    e[x] = power;
                    out.insert(Monomial::new(e), d);
                }
                if !q.is_zero() {
                    next.insert(m.clone(), q);
                }
            }
            rest.terms = next;
            power += 1;
        }
        SparsePoly { vars: self.vars.clone(), terms: out }
    }

    /// Gcd together with both cofactors, by evaluation at large integers and
    /// interpolation, each candidate confirmed by exact division. `None`
    /// when the heuristic gives up or an exponent is negative.
    pub fn gcd_cofactors(&self, other: &Self) -> Option<(Self, Self, Self)> {
        if self.same_ring(other).is_err() || !self.has_nonnegative_exponents() || !other.has_nonnegative_exponents() {
            return None;
        }
        let vars = self.vars.clone();
        if self.is_zero() {
            let (c, p) = other.primitive();
            let one = Self::one(vars.clone());
            return Some((p, Self::zero(vars), one.scale(&c)));
        }
        if other.is_zero() {
            let (c, p) = self.primitive();
            let one = Self::one(vars.clone());
            return Some((p, one.scale(&c), Self::zero(vars)));
        }
        let (ca, a) = self.primitive();
        let (cb, b) = other.primitive();
        let c = ca.gcd(&cb);
        let (h, fa, fb) = heu_gcd(&a, &b, 0)?;
        Some((h.scale(&c), fa.scale(&(&ca / &c)), fb.scale(&(&cb / &c))))
    }

    /// The gcd with positive leading coefficient, when found.
    pub fn heuristic_gcd(&self, other: &Self) -> Option<Self> {
        self.gcd_cofactors(other).map(|(h, _, _)| h)
    }
}

/// Value at the point `(2, 3, 5, 7, ...)`.
fn value_at_primes(p: &SparsePoly) -> BigInt {
    const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mut total = BigInt::zero();
    for (m, c) in &p.terms {
        let mut t = c.clone();
        for (i, &e) in m.0.iter().enumerate() {
            t *= BigInt::from(PRIMES[i % PRIMES.len()] + 40 * (i / PRIMES.len()) as u32).pow(e as u32);
        }
        total += t;
    }
    total
}

/// Exact quotient after cheap necessary conditions: degrees fit and the
/// values at a fixed point divide.
pub(crate) fn checked_div(f: &SparsePoly, d: &SparsePoly) -> Option<SparsePoly> {
    if d.is_zero() || d.max_degree_vector().iter().zip(f.max_degree_vector()).any(|(a, b)| *a > b) {
        return None;
    }
    let dv = value_at_primes(d);
    if !dv.is_zero() && !value_at_primes(f).is_multiple_of(&dv) {
        return None;
    }
    f.exact_div(d).ok()
}

/// Core of [`SparsePoly::gcd_cofactors`] for primitive inputs with positive
/// leading coefficients.
fn heu_gcd(f: &SparsePoly, g: &SparsePoly, depth: usize) -> Option<(SparsePoly, SparsePoly, SparsePoly)> {
    let vars = f.vars.clone();
    let df = f.max_degree_vector();
    let dg = g.max_degree_vector();
    let Some(x) = (0..f.nvars()).rev().find(|&i| df[i] > 0 || dg[i] > 0) else {
        let (a, b) = (f.constant_term(), g.constant_term());
        let h = a.gcd(&b);
        let one = SparsePoly::one(vars.clone());
        return Some((one.scale(&h), one.scale(&(&a / &h)), one.scale(&(&b / &h))));
    };
    if depth > f.nvars() {
        return None;
    }
    let (nf, ng) = (f.max_norm(), g.max_norm());
    let bound: BigInt = BigInt::from(2) * nf.clone().min(ng.clone()) + 29;
    let mut xi = bound.clone().min(bound.sqrt() * 99);
    let lc_bound: BigInt = BigInt::from(2) * (&nf / f.ground_lc(x)).min(&ng / g.ground_lc(x)) + 2;
    xi = xi.max(lc_bound);
    for _ in 0..GCD_ATTEMPTS {
        let top = df[x].max(dg[x]) as u64;
        if xi.bits().saturating_mul(top) > GCD_MAX_BITS {
            return None;
        }
        let ff = f.eval_var(x, &xi);
        let gg = g.eval_var(x, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            let (cf, pf) = ff.primitive();
            let (cg, pg) = gg.primitive();
            {
                let (h, cff, cfg) = heu_gcd(&pf, &pg, depth + 1)?;
                let h = h.scale(&cf.gcd(&cg));
                let cff = cff.scale(&(&cf / cf.gcd(&cg)));
                let cfg = cfg.scale(&(&cg / cf.gcd(&cg)));
                let cand = h.interpolate_var(x, &xi).primitive().1;
                if !cand.is_zero() {
                    if let (Some(a), Some(b)) = (checked_div(f, &cand), checked_div(g, &cand)) {
                        return Some((cand, a, b));
                    }
                }
                for (cof, num, other) in [(cff, f, g), (cfg, g, f)] {
                    let cof = cof.interpolate_var(x, &xi);
                    if cof.is_zero() {
                        continue;
                    }
                    if let Some(h) = checked_div(num, &cof) {
                        let (s, h) = h.primitive();
                        if let Some(o) = checked_div(other, &h) {
                            let cof = cof.scale(&s);
                            let (a, b) = if std::ptr::eq(num, f) { (cof, o) } else { (o, cof) };
                            return Some((h, a, b));
                        }
                    }
                }
            }
        }
        xi = &xi * BigInt::from(73_794) * xi.sqrt().sqrt() / BigInt::from(27_011);
    }
    None
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.vars, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

/// Parses the canonical rendering, e.g. `"y1*y2 + 2*y1^3 - 1"`.
pub fn parse_poly(vars: &Vars, s: &str) -> Result<SparsePoly> {
    let mut terms = Vec::new();
    let cleaned = s.replace(' ', "");
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut chunks = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !cleaned[..i].ends_with('^') {
            chunks.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    chunks.push(cur);
    for chunk in chunks {
        let (sign, body) = match chunk.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, chunk.strip_prefix('+').unwrap_or(&chunk)),
        };
        let mut coef = BigInt::from(sign);
        let mut exps = vec![0i64; vars.len()];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {s:?}")));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                coef *= factor.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?;
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?),
                None => (factor, 1),
            };
            let idx = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            exps[idx] += e;
        }
        terms.push((exps, coef));
    }
    SparsePoly::from_terms(vars.clone(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y2() -> Vars {
        indexed_vars("y", 2)
    }

    fn p(s: &str) -> SparsePoly {
        parse_poly(&y2(), s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("1 + y2").mul(&p("1 + y1")).unwrap(), p("1 + y1 + y2 + y1*y2"));
        assert!(p("1 + y2").pow(0).unwrap().is_one());
        let f = p("1 + y1 + y1*y2");
        assert_eq!(f.mul(&SparsePoly::one(y2())).unwrap(), f);
        assert_eq!(p("1 + y1").pow(3).unwrap(), p("1 + 3*y1 + 3*y1^2 + y1^3"));
        assert!(p("y1 - y1").is_zero());
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(p("1 + y1 + y1*y2").to_string(), "y1*y2 + y1 + 1");
        assert_eq!(p("2*y1^2 - y2 + 3").to_string(), "2*y1^2 - y2 + 3");
        assert_eq!(p("-y1").to_string(), "-y1");
        assert_eq!(SparsePoly::zero(y2()).to_string(), "0");
    }

    #[test]
    fn gcd_examples() {
        let g = p("1 + y2").heuristic_gcd(&p("1 + y1 + y2 + y1*y2")).unwrap();
        assert_eq!(g, p("1 + y2"));
        let (h, a, b) = p("2*y1^2 - 2").gcd_cofactors(&p("4*y1 + 4")).unwrap();
        assert_eq!(h, p("2*y1 + 2"));
        assert_eq!((a, b), (p("y1 - 1"), p("2")));
        assert!(p("y1 + 1").heuristic_gcd(&p("y2 + 1")).unwrap().is_one());
        assert_eq!(p("y1*y2").heuristic_gcd(&p("y1^2")).unwrap(), p("y1"));
        let x = p("y1^3*y2 + 5*y1*y2^2 + 7");
        let big = x.mul(&p("y1 + y2 + 1")).unwrap();
        let other = x.mul(&p("y1^2 + 3")).unwrap();
        assert_eq!(big.heuristic_gcd(&other).unwrap(), x);
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("1 + y1 + y2 + y1*y2").exact_div(&p("1 + y2")).unwrap(), p("1 + y1"));
        let q = p("y1*y2 + y1 + 1");
        assert_eq!(q.exact_div(&SparsePoly::one(y2())).unwrap(), q);
        assert_eq!(p("1 + y1").exact_div(&p("1 + y2")), Err(Error::NotDivisible));
        assert_eq!(p("1 + y1").exact_div(&SparsePoly::zero(y2())), Err(Error::DivisionByZero));
        assert_eq!(p("2*y1 + 2").exact_div(&p("2")).unwrap(), p("y1 + 1"));
        assert_eq!(p("3*y1 + 2").exact_div(&p("2")), Err(Error::NotDivisible));
    }

    #[test]
    fn laurent_division() {
        let vars = y2();
        let num = p("y1*y2 + y2").mul_monomial(&[-3, 0]);
        let den = p("y1 + 1").mul_monomial(&[1, -1]);
        let q = num.exact_div_laurent(&den).unwrap();
        assert_eq!(q, SparsePoly::monomial(vars, vec![-4, 2], BigInt::one()));
    }

    #[test]
    fn degree_vectors() {
        assert_eq!(p("1 + y1 + y1*y2").max_degree_vector(), vec![1, 1]);
        assert_eq!(SparsePoly::one(indexed_vars("y", 3)).max_degree_vector(), vec![0, 0, 0]);
        assert_eq!(p("1 + y2").max_degree_vector(), vec![0, 1]);
        assert!(p("1 + y1 + y1*y2").has_unique_maximal_monomial());
        assert!(!p("1 + y1 + y2").has_unique_maximal_monomial());
    }

    #[test]
    fn h_entries_against_a2_table() {
        let b = ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap();
        assert_eq!(SparsePoly::one(y2()).h_entry(0, &b).unwrap(), 0);
        assert_eq!(p("1 + y2").h_entry(1, &b).unwrap(), -1);
        assert_eq!(p("1 + y1 + y1*y2").h_entry(0, &b).unwrap(), -1);
    }

    #[test]
    fn monomial_substitution() {
        let vars = y2();
        // y2 -> y2^{-1}
        let subs = [MonomialSubstitution::identity(2, 0), MonomialSubstitution::monomial(vec![0, -1])];
        let r = p("1 + y2").substitute_monomials(&vars, &subs).unwrap();
        let expected = SubtractionFreeRational::new(p("y2 + 1"), p("y2")).unwrap();
        assert!(r.semantic_eq(&expected).unwrap());

        let id = [MonomialSubstitution::identity(2, 0), MonomialSubstitution::identity(2, 1)];
        let f = p("1 + y1 + y1*y2");
        let r = f.substitute_monomials(&vars, &id).unwrap();
        assert!(r.semantic_eq(&SubtractionFreeRational::from_poly(f)).unwrap());

        // y1 -> y1 (1 + y2)^{-1}: (1 + y1)(y1) composed gives (1 + y2 + y1)/(1 + y2) ...
        let subs = [
            MonomialSubstitution {
                monomial: vec![1, 0],
                binomial: Some((1, -1)),
            },
            MonomialSubstitution::identity(2, 1),
        ];
        let r = p("1 + y1").substitute_monomials(&vars, &subs).unwrap();
        let expected = SubtractionFreeRational::new(p("1 + y2 + y1"), p("1 + y2")).unwrap();
        assert!(r.semantic_eq(&expected).unwrap());
    }

    #[test]
    fn term_ceiling_is_enforced() {
        let big = p("1 + y1 + y2").pow(40);
        assert!(big.is_ok());
        let vars = indexed_vars("y", 6);
        let s: SparsePoly = (0..6).fold(SparsePoly::one(vars.clone()), |acc, i| {
            acc.add(&SparsePoly::variable(vars.clone(), i)).unwrap()
        });
        // (1 + y1 + ... + y6)^30 has C(36, 6) = 1_947_792 terms.
        assert!(matches!(s.pow(30), Err(Error::TermLimit { .. })));
    }

    #[test]
    fn json_shape() {
        let v = p("y1*y2 + 1").to_json();
        assert_eq!(v[0]["exp"], serde_json::json!([1, 1]));
        assert_eq!(v[0]["coef"], serde_json::json!("1"));
        assert_eq!(SparsePoly::from_json(y2(), &v).unwrap(), p("y1*y2 + 1"));
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec(((0i64..3, 0i64..3), -4i64..5), 0..6).prop_map(|terms| {
            SparsePoly::from_terms(y2(), terms.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
        }

        #[test]
        fn gcd_recovers_a_planted_factor(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let (f, g) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
            let (h, cf, cg) = f.gcd_cofactors(&g).unwrap();
            prop_assert_eq!(h.mul(&cf).unwrap(), f);
            prop_assert_eq!(h.mul(&cg).unwrap(), g);
            prop_assert!(h.exact_div(&c.primitive().1).is_ok());
        }

        #[test]
        fn addition_commutes_and_cancels(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert!(a.sub(&a).unwrap().is_zero());
        }
    }
}
