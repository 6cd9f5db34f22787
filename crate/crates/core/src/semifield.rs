//! Semifields: tropical, inverted tropical, universal (subtraction-free
//! rational functions) and the one-element semifield, plus evaluation of
//! polynomials with nonnegative coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{checked_div, exp_u32, SparsePoly, Vars};

/// Above this size a new fraction is left without gcd cancellation.
const GCD_ATTEMPT_TERMS: usize = 20_000;

/// Exponent vector over named generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalElement {
    exponents: Vec<i64>,
}

impl TropicalElement {
    pub fn new(exponents: Vec<i64>) -> Self {
        TropicalElement { exponents }
    }

    pub fn one(n: usize) -> Self {
        TropicalElement { exponents: vec![0; n] }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        TropicalElement { exponents: e }
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> Option<i64>) -> Result<Self> {
        if self.exponents.len() != other.exponents.len() {
            return Err(Error::SemifieldMismatch("tropical arity".into()));
        }
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| f(a, b).ok_or_else(|| Error::ExponentOverflow(format!("{a}, {b}"))))
            .collect::<Result<_>>()?;
        Ok(TropicalElement { exponents })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, i64::checked_add)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.zip(other, i64::checked_sub)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let exponents = self
            .exponents
            .iter()
            .map(|&a| a.checked_mul(e).ok_or_else(|| Error::ExponentOverflow(format!("{a}^{e}"))))
            .collect::<Result<_>>()?;
        Ok(TropicalElement { exponents })
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .zip(names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    }
}

/// Splits a nonzero polynomial into integer content, monomial content and
/// the remaining primitive part.
fn split(p: &SparsePoly) -> (BigInt, Vec<i64>, SparsePoly) {
    let c = p.content();
    let m = p.min_degree_vector();
    let shift: Vec<i64> = m.iter().map(|e| -e).collect();
    let core = p.mul_monomial(&shift).div_integer(&c);
    (c, m, core)
}

fn positive(p: &SparsePoly) -> bool {
    p.terms().all(|(_, c)| c.is_positive())
}

/// A fraction with nonnegative coefficients, stored as
/// `scalar · x^monomial · Π fᵢ^eᵢ` with primitive factors free of monomial
/// content. Equality is semantic. The expanded numerator and denominator are
/// built on demand.
#[derive(Clone, Debug)]
pub struct SubtractionFreeRational {
    vars: Vars,
    scalar: BigRational,
    monomial: Vec<i64>,
    factors: Vec<(SparsePoly, i64)>,
    expanded: OnceLock<(SparsePoly, SparsePoly)>,
}

impl SubtractionFreeRational {
    fn unit(vars: Vars, scalar: BigRational, monomial: Vec<i64>) -> Self {
        SubtractionFreeRational { vars, scalar, monomial, factors: Vec::new(), expanded: OnceLock::new() }
    }

    fn zero(vars: Vars) -> Self {
        let n = vars.len();
        Self::unit(vars, BigRational::zero(), vec![0; n])
    }

    fn with_factor(mut self, f: SparsePoly, e: i64) -> Self {
        if e == 0 || f.is_one() {
            return self;
        }
        match self.factors.iter().position(|(g, _)| *g == f) {
            Some(i) => {
                self.factors[i].1 += e;
                if self.factors[i].1 == 0 {
                    self.factors.remove(i);
                }
            }
            None => self.factors.push((f, e)),
        }
        self
    }

    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.vars() != den.vars() {
            return Err(Error::DimensionMismatch("numerator and denominator rings differ".into()));
        }
        if num.terms().any(|(_, c)| c.is_negative()) || den.terms().any(|(_, c)| c.is_negative()) {
            return Err(Error::NotSubtractionFree);
        }
        let vars = num.vars().clone();
        if num.is_zero() {
            return Ok(Self::zero(vars));
        }
        let (cn, mn, mut pn) = split(&num);
        let (cd, md, mut pd) = split(&den);
        if !pn.is_one() && !pd.is_one() && pn.len().max(pd.len()) <= GCD_ATTEMPT_TERMS {
            if let Some((h, a, b)) = pn.gcd_cofactors(&pd) {
                if !h.is_one() && positive(&a) && positive(&b) {
                    pn = a;
                    pd = b;
                }
            }
        }
        let monomial = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
        Ok(Self::unit(vars, BigRational::new(cn, cd), monomial).with_factor(pn, 1).with_factor(pd, -1))
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let den = SparsePoly::one(p.vars().clone());
        Self::new(p, den).expect("polynomial with nonnegative coefficients")
    }

    pub fn one(vars: Vars) -> Self {
        let n = vars.len();
        Self::unit(vars, BigRational::one(), vec![0; n])
    }

    pub fn generator(vars: Vars, i: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::monomial(vars, &exps)
    }

    /// The Laurent monomial `x^exps`.
    pub fn monomial(vars: Vars, exps: &[i64]) -> Self {
        Self::unit(vars, BigRational::one(), exps.to_vec())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    fn expanded(&self) -> Result<&(SparsePoly, SparsePoly)> {
        if let Some(e) = self.expanded.get() {
            return Ok(e);
        }
        let pos: Vec<i64> = self.monomial.iter().map(|e| e.max(&0)).copied().collect();
        let neg: Vec<i64> = self.monomial.iter().map(|e| (-e).max(0)).collect();
        let mut num = SparsePoly::constant(self.vars.clone(), self.scalar.numer().clone()).mul_monomial(&pos);
        let mut den = SparsePoly::constant(self.vars.clone(), self.scalar.denom().clone()).mul_monomial(&neg);
        if !self.is_zero() {
            for (f, e) in &self.factors {
                let p = f.pow(exp_u32(e.abs())?)?;
                if *e > 0 {
                    num = num.mul(&p)?;
                } else {
                    den = den.mul(&p)?;
                }
            }
        }
        let _ = self.expanded.set((num, den));
        Ok(self.expanded.get().expect("just set"))
    }

    /// The expanded numerator.
    pub fn num(&self) -> Result<&SparsePoly> {
        Ok(&self.expanded()?.0)
    }

    /// The expanded denominator.
    pub fn den(&self) -> Result<&SparsePoly> {
        Ok(&self.expanded()?.1)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.vars() == other.vars() {
            Ok(())
        } else {
            Err(Error::SemifieldMismatch("different generator lists".into()))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars.clone()));
        }
        let monomial = self.monomial.iter().zip(&other.monomial).map(|(a, b)| a + b).collect();
        let mut out = Self::unit(self.vars.clone(), &self.scalar * &other.scalar, monomial);
        out.factors = self.factors.clone();
        for (f, e) in &other.factors {
            out = out.with_factor(f.clone(), *e);
        }
        Ok(out)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let monomial = self.monomial.iter().map(|e| -e).collect();
        let mut out = Self::unit(self.vars.clone(), self.scalar.recip(), monomial);
        out.factors = self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect();
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.vars.clone()));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        if base.is_zero() {
            return Ok(base);
        }
        let k = exp_u32(e.abs())?;
        let scale = |a: i64| {
            a.checked_mul(e.abs()).ok_or_else(|| Error::ExponentOverflow(format!("{a}^{e}")))
        };
        let monomial = base.monomial.iter().map(|&a| scale(a)).collect::<Result<_>>()?;
        let scalar = BigRational::new(base.scalar.numer().pow(k), base.scalar.denom().pow(k));
        let mut out = Self::unit(self.vars.clone(), scalar, monomial);
        out.factors = base.factors.iter().map(|(f, a)| Ok((f.clone(), scale(*a)?))).collect::<Result<_>>()?;
        Ok(out)
    }

    fn exponent_of(&self, f: &SparsePoly) -> i64 {
        self.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
    }

    /// The semifield addition, ordinary `+` of fractions. Shared factors are
    /// pulled out first; the new numerator is then divided by the
    /// denominator factors wherever that is exact.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let low: Vec<i64> = self.monomial.iter().zip(&other.monomial).map(|(a, b)| *a.min(b)).collect();
        let mut common: Vec<(SparsePoly, i64)> = Vec::new();
        for (f, _) in self.factors.iter().chain(&other.factors) {
            if common.iter().any(|(g, _)| g == f) {
                continue;
            }
            common.push((f.clone(), self.exponent_of(f).min(other.exponent_of(f))));
        }
        let part = |s: &Self| -> Result<SparsePoly> {
            let shift: Vec<i64> = s.monomial.iter().zip(&low).map(|(a, b)| a - b).collect();
            let mut p = SparsePoly::one(self.vars.clone()).mul_monomial(&shift);
            for (f, k) in &common {
                let e = s.exponent_of(f) - k;
                if e > 0 {
                    p = p.mul(&f.pow(exp_u32(e)?)?)?;
                }
            }
            Ok(p)
        };
        let (a, b) = (&self.scalar, &other.scalar);
        let sum = part(self)?
            .scale(&(a.numer() * b.denom()))
            .add(&part(other)?.scale(&(b.numer() * a.denom())))?;
        let (c, m, mut rest) = split(&sum);
        let monomial = low.iter().zip(&m).map(|(a, b)| a + b).collect();
        let mut out = Self::unit(self.vars.clone(), BigRational::new(c, a.denom() * b.denom()), monomial);
        for (f, mut k) in common {
            while k < 0 && !rest.is_one() {
                match checked_div(&rest, &f) {
                    Some(q) => {
                        rest = q;
                        k += 1;
                    }
                    None => break,
                }
            }
            out = out.with_factor(f, k);
        }
        Ok(out.with_factor(rest, 1))
    }

    pub fn semantic_eq(&self, other: &Self) -> Result<bool> {
        self.check_ring(other)?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ok(true),
            (true, false) | (false, true) => return Ok(false),
            _ => {}
        }
        self.div(other)?.is_one()
    }

    pub fn is_one(&self) -> Result<bool> {
        if self.factors.is_empty() {
            return Ok(self.scalar.is_one() && self.monomial.iter().all(|&e| e == 0));
        }
        let (num, den) = self.expanded()?;
        Ok(num == den)
    }

    /// The Laurent polynomial equal to `self`, if there is one.
    pub fn as_laurent(&self) -> Result<Option<SparsePoly>> {
        let (num, den) = self.expanded()?;
        let shift: Vec<i64> = den.min_degree_vector().iter().map(|e| -e).collect();
        let core = den.mul_monomial(&shift);
        match num.exact_div_laurent(&core) {
            Ok(q) => Ok(Some(q.mul_monomial(&shift))),
            Err(Error::NotDivisible) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// The image of `self` under the homomorphism determined by `image` on
    /// the variables and on each stored factor.
    pub fn map_polys(&self, target: &Vars, image: impl Fn(&SparsePoly) -> Result<Self>) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero(target.clone()));
        }
        let mut out = Self::unit(target.clone(), self.scalar.clone(), vec![0; target.len()]);
        for (i, &e) in self.monomial.iter().enumerate() {
            if e != 0 {
                out = out.mul(&image(&SparsePoly::variable(self.vars.clone(), i))?.pow(e)?)?;
            }
        }
        for (f, e) in &self.factors {
            out = out.mul(&image(f)?.pow(*e)?)?;
        }
        Ok(out)
    }

    /// Re-expresses `self` over `target`, sending variable `i` to `target[map[i]]`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Result<Self> {
        if map.len() != self.vars.len() || map.iter().any(|&j| j >= target.len()) {
            return Err(Error::DimensionMismatch("embedding map".into()));
        }
        let mut monomial = vec![0; target.len()];
        for (&j, &e) in map.iter().zip(&self.monomial) {
            monomial[j] = e;
        }
        let mut out = Self::unit(target.clone(), self.scalar.clone(), monomial);
        out.factors = self.factors.iter().map(|(f, e)| Ok((f.embed(target, map)?, *e))).collect::<Result<_>>()?;
        Ok(out)
    }

    fn render_factored(&self) -> String {
        let mut parts = vec![self.scalar.to_string()];
        let m = SparsePoly::one(self.vars.clone()).mul_monomial(&self.monomial);
        if !m.is_one() {
            parts.push(m.to_string());
        }
        for (f, e) in &self.factors {
            parts.push(format!("({f})^{e}"));
        }
        parts.join(" * ")
    }

    /// Text form `(num)/(den)`; a unit denominator is omitted. Fractions too
    /// large to expand are shown factored.
    pub fn render(&self) -> String {
        match self.expanded() {
            Ok((num, den)) if den.is_one() => num.to_string(),
            Ok((num, den)) => format!("({num})/({den})"),
            Err(_) => self.render_factored(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self.expanded() {
            Ok((num, den)) => serde_json::json!({ "num": num.to_json(), "den": den.to_json() }),
            Err(_) => serde_json::json!({ "factored": self.render_factored() }),
        }
    }
}

impl fmt::Display for SubtractionFreeRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SemifieldKind {
    /// `Trop(u)` with `⊕` the componentwise minimum of exponents.
    Tropical,
    /// `Trop(u⁻¹)` written in the `u` exponents, so `⊕` is the componentwise maximum.
    TropicalInverted,
    Universal,
    OneElement,
}

/// A semifield together with its ordered generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semifield {
    kind: SemifieldKind,
    generators: Vars,
}

#[derive(Clone, Debug)]
pub enum SemifieldElement {
    Trop(TropicalElement),
    Universal(SubtractionFreeRational),
    One,
}

impl SemifieldElement {
    pub fn as_tropical(&self) -> Option<&TropicalElement> {
        match self {
            SemifieldElement::Trop(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_universal(&self) -> Option<&SubtractionFreeRational> {
        match self {
            SemifieldElement::Universal(u) => Some(u),
            _ => None,
        }
    }
}

impl Semifield {
    pub fn new(kind: SemifieldKind, generators: Vars) -> Self {
        Semifield { kind, generators }
    }

    pub fn tropical(generators: Vars) -> Self {
        Self::new(SemifieldKind::Tropical, generators)
    }

    pub fn tropical_inverted(generators: Vars) -> Self {
        Self::new(SemifieldKind::TropicalInverted, generators)
    }

    pub fn universal(generators: Vars) -> Self {
        Self::new(SemifieldKind::Universal, generators)
    }

    pub fn one_element() -> Self {
        Self::new(SemifieldKind::OneElement, Vars::from(Vec::new()))
    }

    pub fn kind(&self) -> SemifieldKind {
        self.kind
    }

    pub fn generators(&self) -> &Vars {
        &self.generators
    }

    pub fn one(&self) -> SemifieldElement {
        match self.kind {
            SemifieldKind::Tropical | SemifieldKind::TropicalInverted => {
                SemifieldElement::Trop(TropicalElement::one(self.generators.len()))
            }
            SemifieldKind::Universal => SemifieldElement::Universal(SubtractionFreeRational::one(self.generators.clone())),
            SemifieldKind::OneElement => SemifieldElement::One,
        }
    }

    pub fn generator(&self, i: usize) -> Result<SemifieldElement> {
        let n = self.generators.len();
        if self.kind != SemifieldKind::OneElement && i >= n {
            return Err(Error::IndexOutOfRange { index: i, bound: n });
        }
        Ok(match self.kind {
            SemifieldKind::Tropical | SemifieldKind::TropicalInverted => SemifieldElement::Trop(TropicalElement::generator(n, i)),
            SemifieldKind::Universal => SemifieldElement::Universal(SubtractionFreeRational::generator(self.generators.clone(), i)),
            SemifieldKind::OneElement => SemifieldElement::One,
        })
    }

    fn pair<'a>(
        &self,
        a: &'a SemifieldElement,
        b: &'a SemifieldElement,
    ) -> Result<Pair<'a>> {
        match (self.kind, a, b) {
            (SemifieldKind::Tropical | SemifieldKind::TropicalInverted, SemifieldElement::Trop(x), SemifieldElement::Trop(y)) => {
                Ok(Pair::Trop(x, y))
            }
            (SemifieldKind::Universal, SemifieldElement::Universal(x), SemifieldElement::Universal(y)) => Ok(Pair::Univ(x, y)),
            (SemifieldKind::OneElement, SemifieldElement::One, SemifieldElement::One) => Ok(Pair::One),
            _ => Err(Error::SemifieldMismatch(format!("element does not belong to a {:?} semifield", self.kind))),
        }
    }

    /// The semifield addition `⊕`.
    pub fn add(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<SemifieldElement> {
        Ok(match self.pair(a, b)? {
            Pair::Trop(x, y) => {
                let f = if self.kind == SemifieldKind::Tropical { i64::min } else { i64::max };
                SemifieldElement::Trop(x.zip(y, |p, q| Some(f(p, q)))?)
            }
            Pair::Univ(x, y) => SemifieldElement::Universal(x.add(y)?),
            Pair::One => SemifieldElement::One,
        })
    }

    pub fn mul(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<SemifieldElement> {
        Ok(match self.pair(a, b)? {
            Pair::Trop(x, y) => SemifieldElement::Trop(x.mul(y)?),
            Pair::Univ(x, y) => SemifieldElement::Universal(x.mul(y)?),
            Pair::One => SemifieldElement::One,
        })
    }

    pub fn div(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<SemifieldElement> {
        Ok(match self.pair(a, b)? {
            Pair::Trop(x, y) => SemifieldElement::Trop(x.div(y)?),
            Pair::Univ(x, y) => SemifieldElement::Universal(x.div(y)?),
            Pair::One => SemifieldElement::One,
        })
    }

    pub fn pow(&self, a: &SemifieldElement, e: i64) -> Result<SemifieldElement> {
        Ok(match (self.kind, a) {
            (SemifieldKind::Tropical | SemifieldKind::TropicalInverted, SemifieldElement::Trop(x)) => SemifieldElement::Trop(x.pow(e)?),
            (SemifieldKind::Universal, SemifieldElement::Universal(x)) => SemifieldElement::Universal(x.pow(e)?),
            (SemifieldKind::OneElement, SemifieldElement::One) => SemifieldElement::One,
            _ => return Err(Error::SemifieldMismatch("pow on foreign element".into())),
        })
    }

    pub fn eq(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<bool> {
        Ok(match self.pair(a, b)? {
            Pair::Trop(x, y) => x == y,
            Pair::Univ(x, y) => x.semantic_eq(y)?,
            Pair::One => true,
        })
    }

    pub fn render(&self, a: &SemifieldElement) -> String {
        match a {
            SemifieldElement::Trop(t) => t.render(&self.generators),
            SemifieldElement::Universal(u) => u.render(),
            SemifieldElement::One => "1".into(),
        }
    }

    /// Image of `f` under the homomorphism sending the `i`th variable of `f`
    /// to `values[i]`. Coefficients must be nonnegative.
    pub fn evaluate_at(&self, f: &SparsePoly, values: &[SemifieldElement]) -> Result<SemifieldElement> {
        if values.len() != f.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} variables",
                values.len(),
                f.nvars()
            )));
        }
        if f.terms().any(|(_, c)| c.is_negative()) {
            return Err(Error::NotSubtractionFree);
        }
        if f.is_zero() {
            return Err(Error::NotSubtractionFree);
        }
        match self.kind {
            SemifieldKind::OneElement => Ok(SemifieldElement::One),
            SemifieldKind::Tropical | SemifieldKind::TropicalInverted => {
                let mut acc: Option<SemifieldElement> = None;
                for (m, _) in f.terms() {
                    let mut term = self.one();
                    for (&a, v) in m.exps().iter().zip(values) {
                        if a != 0 {
                            term = self.mul(&term, &self.pow(v, a)?)?;
                        }
                    }
                    acc = Some(match acc {
                        None => term,
                        Some(prev) => self.add(&prev, &term)?,
                    });
                }
                Ok(acc.expect("nonzero polynomial"))
            }
            SemifieldKind::Universal => {
                let vals = values
                    .iter()
                    .map(|v| {
                        v.as_universal()
                            .cloned()
                            .ok_or_else(|| Error::SemifieldMismatch("expected a universal element".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SemifieldElement::Universal(compose(f, &self.generators, &vals)?))
            }
        }
    }

    /// Evaluation with values looked up by variable name. Variables that do
    /// not occur in `f` need no assignment.
    pub fn evaluate(&self, f: &SparsePoly, assignment: &BTreeMap<String, SemifieldElement>) -> Result<SemifieldElement> {
        let occurring = f.max_degree_vector();
        let lowest = f.min_degree_vector();
        let values = f
            .vars()
            .iter()
            .enumerate()
            .map(|(i, name)| match assignment.get(name) {
                Some(v) => Ok(v.clone()),
                None if occurring[i] == 0 && lowest[i] == 0 => Ok(self.one()),
                None => Err(Error::MissingGenerator(name.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        self.evaluate_at(f, &values)
    }

    /// Evaluation of a fraction, factor by factor.
    pub fn evaluate_rational(&self, r: &SubtractionFreeRational, values: &[SemifieldElement]) -> Result<SemifieldElement> {
        if r.is_zero() {
            return Err(Error::NotSubtractionFree);
        }
        let scalar = self.div(&constant_in(self, r.scalar.numer())?, &constant_in(self, r.scalar.denom())?)?;
        let mut out = scalar;
        for (i, &e) in r.monomial.iter().enumerate() {
            if e != 0 {
                let v = values.get(i).ok_or_else(|| Error::DimensionMismatch("too few values".into()))?;
                out = self.mul(&out, &self.pow(v, e)?)?;
            }
        }
        for (f, e) in &r.factors {
            out = self.mul(&out, &self.pow(&self.evaluate_at(f, values)?, *e)?)?;
        }
        Ok(out)
    }
}

enum Pair<'a> {
    Trop(&'a TropicalElement, &'a TropicalElement),
    Univ(&'a SubtractionFreeRational, &'a SubtractionFreeRational),
    One,
}

/// `f(values)` in the universal semifield over `target`, computed over a
/// single common denominator.
pub fn compose(f: &SparsePoly, target: &Vars, values: &[SubtractionFreeRational]) -> Result<SubtractionFreeRational> {
    if values.len() != f.nvars() {
        return Err(Error::DimensionMismatch("composition arity".into()));
    }
    if values.iter().any(|v| v.vars() != target) {
        return Err(Error::SemifieldMismatch("composition target".into()));
    }
    let n = f.nvars();
    let mut p = vec![0i64; n];
    let mut q = vec![0i64; n];
    for (m, _) in f.terms() {
        for (i, &a) in m.exps().iter().enumerate() {
            p[i] = p[i].max(a);
            q[i] = q[i].max(-a);
        }
    }
    let mut cache: HashMap<(usize, bool, i64), SparsePoly> = HashMap::new();
    let mut power = |i: usize, numer: bool, e: i64| -> Result<SparsePoly> {
        if let Some(v) = cache.get(&(i, numer, e)) {
            return Ok(v.clone());
        }
        let base = if numer { values[i].num()? } else { values[i].den()? };
        let v = base.pow(exp_u32(e)?)?;
        cache.insert((i, numer, e), v.clone());
        Ok(v)
    };
    let mut num = SparsePoly::zero(target.clone());
    for (m, c) in f.terms() {
        let mut term = SparsePoly::constant(target.clone(), c.clone());
        for (i, &a) in m.exps().iter().enumerate() {
            let en = a.max(0) + q[i] - (-a).max(0);
            let ed = (-a).max(0) + p[i] - a.max(0);
            if en > 0 {
                term = term.mul(&power(i, true, en)?)?;
            }
            if ed > 0 {
                term = term.mul(&power(i, false, ed)?)?;
            }
        }
        num = num.add(&term)?;
    }
    let mut den = SparsePoly::one(target.clone());
    for i in 0..n {
        if p[i] > 0 {
            den = den.mul(&power(i, false, p[i])?)?;
        }
        if q[i] > 0 {
            den = den.mul(&power(i, true, q[i])?)?;
        }
    }
    SubtractionFreeRational::new(num, den)
}

/// Integer `1 ⊕ … ⊕ 1` (`c` times) maps to `1` in a tropical semifield; this
/// helper exposes that for constants.
pub fn constant_in(sf: &Semifield, c: &BigInt) -> Result<SemifieldElement> {
    if !c.is_positive() {
        return Err(Error::NotSubtractionFree);
    }
    Ok(match sf.kind() {
        SemifieldKind::Universal => SemifieldElement::Universal(SubtractionFreeRational::from_poly(SparsePoly::constant(
            sf.generators().clone(),
            c.clone(),
        ))),
        _ => sf.one(),
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::poly::indexed_vars;
    use proptest::prelude::*;

    fn y2() -> Vars {
        indexed_vars("y", 2)
    }

    fn arb_positive() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec(((0i64..3, 0i64..3), 1i64..4), 1..5).prop_map(|terms| {
            SparsePoly::from_terms(y2(), terms.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c)))).unwrap()
        })
    }

    fn arb_fraction() -> impl Strategy<Value = SubtractionFreeRational> {
        (arb_positive(), arb_positive()).prop_map(|(n, d)| SubtractionFreeRational::new(n, d).unwrap())
    }

    fn arb_tropical() -> impl Strategy<Value = (bool, Vec<SemifieldElement>)> {
        (any::<bool>(), prop::collection::vec(prop::collection::vec(-3i64..4, 2), 2)).prop_map(|(inv, vals)| {
            (inv, vals.into_iter().map(|e| SemifieldElement::Trop(TropicalElement::new(e))).collect())
        })
    }

    fn tropical(inv: bool) -> Semifield {
        if inv {
            Semifield::tropical_inverted(y2())
        } else {
            Semifield::tropical(y2())
        }
    }

    proptest! {
        #[test]
        fn tropical_evaluation_is_a_homomorphism(f in arb_positive(), g in arb_positive(), (inv, vals) in arb_tropical()) {
            let sf = tropical(inv);
            let pf = sf.evaluate_at(&f, &vals).unwrap();
            let pg = sf.evaluate_at(&g, &vals).unwrap();
            let prod = sf.evaluate_at(&f.mul(&g).unwrap(), &vals).unwrap();
            let sum = sf.evaluate_at(&f.add(&g).unwrap(), &vals).unwrap();
            prop_assert!(sf.eq(&prod, &sf.mul(&pf, &pg).unwrap()).unwrap());
            prop_assert!(sf.eq(&sum, &sf.add(&pf, &pg).unwrap()).unwrap());
        }

        #[test]
        fn universal_evaluation_is_a_homomorphism(f in arb_positive(), g in arb_positive(), a in arb_fraction(), b in arb_fraction()) {
            let vals = [a, b];
            let pf = compose(&f, &y2(), &vals).unwrap();
            let pg = compose(&g, &y2(), &vals).unwrap();
            let prod = compose(&f.mul(&g).unwrap(), &y2(), &vals).unwrap();
            let sum = compose(&f.add(&g).unwrap(), &y2(), &vals).unwrap();
            prop_assert!(prod.semantic_eq(&pf.mul(&pg).unwrap()).unwrap());
            prop_assert!(sum.semantic_eq(&pf.add(&pg).unwrap()).unwrap());
        }

        #[test]
        fn universal_arithmetic_is_consistent(a in arb_fraction(), b in arb_fraction(), c in arb_fraction()) {
            prop_assert!(a.div(&b).unwrap().mul(&b.div(&a).unwrap()).unwrap().is_one().unwrap());
            let left = a.add(&b).unwrap().add(&c).unwrap();
            let right = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert!(left.semantic_eq(&right).unwrap());
            let spread = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert!(spread.semantic_eq(&a.mul(&b.add(&c).unwrap()).unwrap()).unwrap());
        }

        #[test]
        fn inverted_tropical_reads_off_max_degrees(f in arb_positive()) {
            let sf = Semifield::tropical_inverted(y2());
            let ys = [sf.generator(0).unwrap(), sf.generator(1).unwrap()];
            let v = sf.evaluate_at(&f, &ys).unwrap();
            prop_assert_eq!(v.as_tropical().unwrap().exponents().to_vec(), f.max_degree_vector());
        }
    }
}
