//! Exact integer matrices and exchange-matrix mutation.
//!
//! Entries are arbitrary-precision integers. Indices are 0-based throughout
//! the library; the command line and the JSON walk format are 1-based.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `[b]_+ = max(b, 0)`.
pub fn pos(b: &BigInt) -> BigInt {
    if b.is_positive() {
        b.clone()
    } else {
        BigInt::zero()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of machine integers; all rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    /// `J_l`: the identity with the `(l, l)` entry replaced by `-1`.
    pub fn j_matrix(n: usize, l: usize) -> Result<Self> {
        check_index(l, n)?;
        let mut m = Self::identity(n);
        m.data[l * n + l] = -BigInt::one();
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise `[m]_+`.
    pub fn positive_part(&self) -> Self {
        self.map(pos)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        self.map(|v| v * s)
    }

    /// `M^{k•}`: zero every row except row `k`.
    pub fn row_restrict(&self, k: usize) -> Result<Self> {
        check_index(k, self.rows)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            if i == k {
                self.get(i, j).clone()
            } else {
                BigInt::zero()
            }
        }))
    }

    /// `M^{•k}`: zero every column except column `k`.
    pub fn col_restrict(&self, k: usize) -> Result<Self> {
        check_index(k, self.cols)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            if j == k {
                self.get(i, j).clone()
            } else {
                BigInt::zero()
            }
        }))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn entrywise_max(&self, other: &Self) -> Self {
        assert_same_shape(self, other);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        }
    }

    /// Copy of the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible blocks".into()));
        }
        let (top, left) = (a.rows, a.cols);
        Ok(Self::from_fn(top + c.rows, left + b.cols, |i, j| {
            match (i < top, j < left) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - left).clone(),
                (false, true) => c.get(i - top, j).clone(),
                (false, false) => d.get(i - top, j - left).clone(),
            }
        }))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Largest absolute entry, or zero for an empty matrix.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

fn check_index(k: usize, bound: usize) -> Result<()> {
    if k < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: k, bound })
    }
}

fn assert_same_shape(a: &IntMatrix, b: &IntMatrix) {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "dimension mismatch: {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_same_shape(self, rhs);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_same_shape(self, rhs);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        self.map(|v| -v)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    /// Multi-line rendering with right-aligned columns.
    pub fn to_aligned_string(&self) -> String {
        let strs: Vec<String> = self.data.iter().map(|v| v.to_string()).collect();
        let width = strs.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for i in 0..self.rows {
            out.push('[');
            for j in 0..self.cols {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{:>width$}", strs[i * self.cols + j]));
            }
            out.push_str("]\n");
        }
        out
    }
}

// JSON: {"rows": r, "cols": c, "entries": [[...], ...]} with integers as JSON
// numbers below 2^53 in magnitude and as decimal strings otherwise.

const JSON_SAFE_BITS: u64 = 53;

pub(crate) fn bigint_to_json(v: &BigInt) -> serde_json::Value {
    if v.bits() < JSON_SAFE_BITS {
        serde_json::Value::from(v.to_i64().expect("fits in 53 bits"))
    } else {
        serde_json::Value::String(v.to_string())
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("not an integer: {n}")),
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| format!("not an integer: {s:?}")),
        other => Err(format!("expected an integer, found {other}")),
    }
}

impl IntMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = (0..self.rows)
            .map(|i| serde_json::Value::Array(self.row(i).iter().map(bigint_to_json).collect()))
            .collect();
        serde_json::json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    /// Accepts either the object form or a bare array of rows.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let (rows_v, declared) = match v {
            serde_json::Value::Array(rows) => (rows, None),
            serde_json::Value::Object(map) => {
                let rows = map
                    .get("entries")
                    .and_then(|e| e.as_array())
                    .ok_or_else(|| Error::Parse("missing \"entries\" array".into()))?;
                let r = map.get("rows").and_then(|x| x.as_u64());
                let c = map.get("cols").and_then(|x| x.as_u64());
                (rows, r.zip(c))
            }
            _ => return Err(Error::Parse("matrix must be an array of rows or an object".into())),
        };
        let mut data = Vec::new();
        let mut cols = None;
        for row in rows_v {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row is not an array".into()))?;
            if *cols.get_or_insert(row.len()) != row.len() {
                return Err(Error::Parse("ragged matrix rows".into()));
            }
            for e in row {
                data.push(bigint_from_json(e).map_err(Error::Parse)?);
            }
        }
        let rows = rows_v.len();
        let cols = cols.unwrap_or(0);
        if let Some((r, c)) = declared {
            if (r as usize, c as usize) != (rows, cols) {
                return Err(Error::Parse("declared shape does not match entries".into()));
            }
        }
        IntMatrix::new(rows, cols, data)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        IntMatrix::from_json(&v).map_err(de::Error::custom)
    }
}

/// Minimal positive integer diagonal `D` with `D·M` skew-symmetric.
///
/// Ratios `d_j / d_i = -m_ij / m_ji` are propagated over the graph of nonzero
/// off-diagonal pairs; each connected component is then scaled to the
/// smallest positive integers. Isolated indices get `d = 1`.
pub fn skew_symmetrizer(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(Error::NotSkewSymmetrizable("matrix is not square".into()));
    }
    let n = m.rows();
    for i in 0..n {
        if !m.get(i, i).is_zero() {
            return Err(Error::NotSkewSymmetrizable(format!("nonzero diagonal entry at {i}")));
        }
        for j in i + 1..n {
            let (a, b) = (m.get(i, j), m.get(j, i));
            if a.is_zero() != b.is_zero() || (a * b).is_positive() {
                return Err(Error::NotSkewSymmetrizable(format!(
                    "entries ({i},{j})={a} and ({j},{i})={b} have incompatible signs"
                )));
            }
        }
    }

    let mut ratio: Vec<Option<BigRational>> = vec![None; n];
    let mut d = vec![BigInt::zero(); n];
    for root in 0..n {
        if ratio[root].is_some() {
            continue;
        }
        ratio[root] = Some(BigRational::one());
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let ri = ratio[i].clone().expect("visited");
            for j in 0..n {
                if j == i || m.get(i, j).is_zero() {
                    continue;
                }
                // d_i m_ij = -d_j m_ji
                let rj = &ri * BigRational::new(-m.get(i, j).clone(), m.get(j, i).clone());
                match &ratio[j] {
                    Some(existing) if *existing != rj => {
                        return Err(Error::NotSkewSymmetrizable(format!(
                            "inconsistent ratio cycle through index {j}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        ratio[j] = Some(rj);
                        component.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        let denom_lcm = component
            .iter()
            .fold(BigInt::one(), |acc, &i| acc.lcm(ratio[i].as_ref().unwrap().denom()));
        let scaled: Vec<BigInt> = component
            .iter()
            .map(|&i| {
                let r = ratio[i].as_ref().unwrap();
                r.numer() * (&denom_lcm / r.denom())
            })
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        for (&i, v) in component.iter().zip(scaled) {
            d[i] = v / &g;
        }
    }
    Ok(d)
}

/// A square skew-symmetrizable integer matrix together with its canonical
/// skew-symmetrizer.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExchangeMatrix {
    matrix: IntMatrix,
    symmetrizer: Vec<BigInt>,
}

impl ExchangeMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let symmetrizer = skew_symmetrizer(&matrix)?;
        Ok(ExchangeMatrix { matrix, symmetrizer })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn symmetrizer(&self) -> &[BigInt] {
        &self.symmetrizer
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.matrix.get(i, j)
    }

    /// `μ_k(B)`. The skew-symmetrizer is carried over unchanged.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        Ok(ExchangeMatrix {
            matrix: mutate_matrix(&self.matrix, k)?,
            symmetrizer: self.symmetrizer.clone(),
        })
    }

    pub fn negated(&self) -> Self {
        ExchangeMatrix {
            matrix: -&self.matrix,
            symmetrizer: self.symmetrizer.clone(),
        }
    }

    /// `Bᵀ`, with its own canonical skew-symmetrizer.
    pub fn transposed(&self) -> Self {
        ExchangeMatrix::new(self.matrix.transpose()).expect("transpose of skew-symmetrizable matrix")
    }

    /// Indices of all-zero columns.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&j| (0..self.rank()).all(|i| self.get(i, j).is_zero()))
            .collect()
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.matrix, f)
    }
}

/// Matrix mutation in direction `k` on a bare square matrix.
pub fn mutate_matrix(b: &IntMatrix, k: usize) -> Result<IntMatrix> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch("mutation of a non-square matrix".into()));
    }
    check_index(k, b.rows())?;
    Ok(IntMatrix::from_fn(b.rows(), b.cols(), |i, j| {
        if i == k || j == k {
            -b.get(i, j)
        } else {
            let (bik, bkj) = (b.get(i, k), b.get(k, j));
            b.get(i, j) + pos(bik) * bkj + bik * pos(&-bkj)
        }
    }))
}

/// Convenience wrapper: [`mutate_matrix`] on an [`ExchangeMatrix`].
pub fn mutate_exchange(b: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix> {
    b.mutate(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn positive_part_examples() {
        assert_eq!(m(&[&[0, 1], &[-1, 0]]).positive_part(), m(&[&[0, 1], &[0, 0]]));
        assert!(IntMatrix::zeros(3, 2).positive_part().is_zero());
        assert_eq!(m(&[&[-1, 0], &[-1, 1]]).positive_part(), m(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn restrictions() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.row_restrict(0).unwrap(), m(&[&[1, 2], &[0, 0]]));
        assert_eq!(a.col_restrict(1).unwrap(), m(&[&[0, 2], &[0, 4]]));
        assert!(matches!(a.row_restrict(2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(a.col_restrict(5), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn j_matrix_examples() {
        assert_eq!(IntMatrix::j_matrix(2, 1).unwrap(), m(&[&[1, 0], &[0, -1]]));
        assert_eq!(IntMatrix::j_matrix(1, 0).unwrap(), m(&[&[-1]]));
        let j = IntMatrix::j_matrix(3, 1).unwrap();
        assert_eq!(&j * &j, IntMatrix::identity(3));
        assert!(IntMatrix::j_matrix(2, 2).is_err());
    }

    #[test]
    fn a2_mutation_negates() {
        let b = ExchangeMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap();
        assert_eq!(b.mutate(1).unwrap().matrix(), &m(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn rank3_mutation_matches_scalar_rule() {
        // Hand evaluation of the entrywise rule at k = 2 (1-based):
        // b13' = 0 + [2]_+·1 + 2·[-1]_+ = 2, b31' = 0 + [-1]_+·(-1) + (-1)·[1]_+ = -1.
        let b = ExchangeMatrix::new(m(&[&[0, 2, 0], &[-1, 0, 1], &[0, -1, 0]])).unwrap();
        let mutated = b.mutate(1).unwrap();
        assert_eq!(mutated.matrix(), &m(&[&[0, -2, 2], &[1, 0, -1], &[-1, 1, 0]]));
        assert_eq!(mutated.symmetrizer(), b.symmetrizer());
    }

    #[test]
    fn symmetrizer_examples() {
        let ss = ExchangeMatrix::from_rows(&[[0, 1, -2], [-1, 0, 3], [2, -3, 0]]).unwrap();
        assert!(ss.symmetrizer().iter().all(One::is_one));
        let d = skew_symmetrizer(&m(&[&[0, 2], &[-1, 0]])).unwrap();
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(2)]);
        assert!(matches!(
            skew_symmetrizer(&m(&[&[0, 1], &[1, 0]])),
            Err(Error::NotSkewSymmetrizable(_))
        ));
        // d1·2 = d2·1, d2·1 = d3·1, d1·1 = d3·3 cannot all hold.
        let cyc = m(&[&[0, 2, 1], &[-1, 0, 1], &[-3, -1, 0]]);
        assert!(skew_symmetrizer(&cyc).is_err());
        assert!(skew_symmetrizer(&m(&[&[1]])).is_err());
    }

    #[test]
    fn symmetrizer_components_are_independent() {
        let b = m(&[&[0, 2, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 3], &[0, 0, -1, 0]]);
        let d: Vec<i64> = skew_symmetrizer(&b).unwrap().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 1, 3]);
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det().unwrap(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).det().unwrap(), BigInt::from(-2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), BigInt::zero());
        assert_eq!(IntMatrix::zeros(0, 0).det().unwrap(), BigInt::one());
    }

    #[test]
    fn json_round_trip_with_large_entries() {
        let mut a = m(&[&[1, -2], &[3, 4]]);
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        a.set(0, 0, big.clone());
        let v = a.to_json();
        assert_eq!(v["entries"][0][0], serde_json::Value::String(big.to_string()));
        assert_eq!(v["entries"][0][1], serde_json::json!(-2));
        assert_eq!(IntMatrix::from_json(&v).unwrap(), a);
        let bare: serde_json::Value = serde_json::from_str("[[0,1],[-1,0]]").unwrap();
        assert_eq!(IntMatrix::from_json(&bare).unwrap(), m(&[&[0, 1], &[-1, 0]]));
    }
}
