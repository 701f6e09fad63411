//! Exact linear algebra over the rationals.
//!
//! Every routine here is exact: entries are arbitrary-precision rationals and
//! nothing is ever rounded. Matrices are dense and row-major; the sizes this
//! crate deals with stay in the low hundreds.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` (optionally signed) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Serde adapters that write rationals as decimal strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            format_vector(v).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(MatrixQ {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from a list of rows; `cols` is needed for the empty case.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(MatrixQ {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(data, cols).expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn add_at(&mut self, i: usize, j: usize, value: &Rational) {
        let e = &mut self.entries[i * self.cols + j];
        *e += value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    t.set(j, i, x.clone());
                }
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MatrixQ) -> Result<MatrixQ> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = MatrixQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &MatrixQ) -> Result<MatrixQ> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Ok(MatrixQ {
            rows: self.rows,
            cols,
            entries,
        })
    }

    /// Serializable form: list of rows of `"p/q"` strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| format_vector(self.row(i))).collect()
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", format_vector(self.row(i)))?;
        }
        write!(f, "]")
    }
}

impl Serialize for MatrixQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl Add for &MatrixQ {
    type Output = MatrixQ;

    fn add(self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &MatrixQ {
    type Output = MatrixQ;

    fn sub(self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &MatrixQ {
    type Output = MatrixQ;

    fn neg(self) -> MatrixQ {
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &MatrixQ {
    type Output = MatrixQ;

    fn mul(self, rhs: &MatrixQ) -> MatrixQ {
        self.try_mul(rhs).expect("shape mismatch in matrix product")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: MatrixQ,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Clears denominators row by row and divides out the content.
fn integer_rows(m: &MatrixQ) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            make_primitive(&mut out);
            out
        })
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for x in row.iter_mut().filter(|x| !x.is_zero()) {
            *x /= &g;
        }
    }
}

const MOD_P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, MOD_P - 2, 1);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

/// Rank of the reduction mod a large prime, or None if a denominator vanishes.
/// Never exceeds the rank over Q.
fn rank_mod_p(m: &MatrixQ) -> Option<usize> {
    let p = BigInt::from(MOD_P);
    let residue = |x: &BigInt| -> u64 {
        let r = x.mod_floor(&p);
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    let mut a = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut row = Vec::with_capacity(m.cols);
        for x in m.row(i) {
            let d = residue(x.denom());
            if d == 0 {
                return None;
            }
            row.push(mul_mod(residue(x.numer()), inv_mod(d)));
        }
        a.push(row);
    }
    let mut r = 0;
    for c in 0..m.cols {
        let Some(p) = (r..m.rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = inv_mod(a[r][c]);
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv);
            for j in c..m.cols {
                row[j] = (row[j] + MOD_P - mul_mod(f, pivot_row[j])) % MOD_P;
            }
        }
        r += 1;
    }
    Some(r)
}

/// Gauss-Jordan elimination to reduced row-echelon form.
///
/// Full column rank mod p certifies full column rank over Q, and then the
/// result is read off directly. Otherwise elimination runs on primitive
/// integer rows, picking the pivot of smallest magnitude in each column, so
/// coefficients stay small. Rows are scaled to unit pivots only at the end.
pub fn rref(m: &MatrixQ) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    if cols > 0 && rows >= cols && rank_mod_p(m) == Some(cols) {
        let mut reduced = MatrixQ::zeros(rows, cols);
        for i in 0..cols {
            reduced.set(i, i, Rational::one());
        }
        return Rref {
            reduced,
            pivots: (0..cols).collect(),
            rank: cols,
        };
    }
    let mut a = integer_rows(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].bits(), i))
        else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pc = &pivot_row[c];
        let support: Vec<usize> = (0..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let g = pc.gcd(&row[c]);
            let (mp, mf) = (pc / &g, &row[c] / &g);
            if !mp.is_one() {
                for x in row.iter_mut().filter(|x| !x.is_zero()) {
                    *x *= &mp;
                }
            }
            for &j in &support {
                row[j] -= &mf * &pivot_row[j];
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in a.into_iter().enumerate() {
        match pivots.get(i) {
            Some(&c) => {
                let p = row[c].clone();
                entries.extend(row.into_iter().map(|x| Rational::new(x, p.clone())));
            }
            None => entries.extend(row.into_iter().map(Rational::from_integer)),
        }
    }
    Rref {
        reduced: MatrixQ {
            rows,
            cols,
            entries,
        },
        rank: pivots.len(),
        pivots,
    }
}

/// Null-space basis in the free-variable parameterization of the rref:
/// one vector per free column, in column order, with that variable set to 1.
pub fn kernel_basis(m: &MatrixQ) -> Vec<Vec<Rational>> {
    rref(m).kernel_basis()
}

impl Rref {
    /// Null-space basis read off this reduced form; see [`kernel_basis`].
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let Rref {
            reduced, pivots, ..
        } = self;
        let cols = reduced.cols;
        let mut is_pivot = vec![false; cols];
        for &p in pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    let x = reduced.get(i, f);
                    if !x.is_zero() {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank by fraction-free (Bareiss) elimination over the integers.
///
/// Rows are first cleared of denominators and content, which does not change the rank.
pub fn rank_bareiss(m: &MatrixQ) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = integer_rows(m);

    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division not exact");
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        r += 1;
    }
    r
}

/// Canonical basis of the column space: the rref of the transpose, transposed back.
///
/// Two matrices with the same number of rows span the same column space
/// exactly when their canonical forms are equal.
pub fn column_space_canonical(m: &MatrixQ) -> MatrixQ {
    let Rref { reduced, rank, .. } = rref(&m.transpose());
    let mut out = MatrixQ::zeros(m.rows, rank);
    for i in 0..rank {
        for j in 0..m.rows {
            let x = reduced.get(i, j);
            if !x.is_zero() {
                out.set(j, i, x.clone());
            }
        }
    }
    out
}

/// Whether `v` lies in the column space of `m`.
pub fn in_column_space(m: &MatrixQ, v: &[Rational]) -> Result<bool> {
    if v.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            got: v.len(),
        });
    }
    if is_zero_vector(v) {
        return Ok(true);
    }
    let base = rref(m).rank;
    let col = MatrixQ::from_columns(&[v.to_vec()], m.rows)?;
    Ok(rref(&m.hstack(&col)?).rank == base)
}
