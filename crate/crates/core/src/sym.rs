//! The symmetric algebra `Sym(g)` as commutative polynomials in the basis
//! symbols `x_1, …, x_n`.
//!
//! Coefficients are monomial coefficients. The polarization factors that link
//! a tensor to its symmetric multilinear form live only in
//! [`SymTensor::evaluate`] and [`SymTensor::from_bilinear`]: the monomial
//! `x_{i_1}⋯x_{i_k}` evaluates on `(w_1, …, w_k)` to
//! `(1/k!) Σ_σ Π_t w_{σ(t)}[i_t]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, MatrixQ, Rational};

/// Sorted multiset of 0-based basis indices. The empty monomial is the unit.
///
/// Ordered by grade, then colexicographically (compare the largest index
/// first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        Monomial(indices)
    }

    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial::new(v)
    }

    /// The monomial with position `t` (0-based) of the sorted tuple removed.
    pub fn without(&self, t: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(t);
        Monomial(v)
    }

    /// Position in [`enumerate_monomials`] for this grade.
    ///
    /// Maps the multiset `a_1 ≤ … ≤ a_k` to the strict combination
    /// `a_t + t` and applies the colex combination rank `Σ C(a_t + t, t + 1)`.
    pub fn rank(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(t, &a)| binomial(a + t, t + 1))
            .sum()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim Sym^k` of an `n`-dimensional space: `C(n + k - 1, k)`.
pub fn sym_dim(n: usize, k: usize) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    binomial(n + k - 1, k)
}

/// All degree-`k` monomials in `n` variables, in colex order.
pub fn enumerate_monomials(n: usize, k: usize) -> Vec<Monomial> {
    fn go(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(Vec::new());
            return;
        }
        // Colex: the last (largest) index varies slowest.
        for last in 0..n {
            let mut prefixes = Vec::new();
            go(last + 1, k - 1, &mut prefixes);
            for mut p in prefixes {
                p.push(last);
                out.push(p);
            }
        }
    }
    let mut raw = Vec::with_capacity(sym_dim(n, k));
    go(n, k, &mut raw);
    raw.into_iter().map(Monomial).collect()
}

/// A homogeneous element of `Sym^k(g)`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTensor {
    grade: usize,
    coeffs: BTreeMap<Monomial, Rational>,
}

impl SymTensor {
    pub fn zero(grade: usize) -> Self {
        SymTensor {
            grade,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit() -> Self {
        Self::monomial(Monomial::unit(), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut t = Self::zero(m.grade());
        t.add_term(m, c);
        t
    }

    /// `x_i` (0-based).
    pub fn generator(i: usize) -> Self {
        Self::monomial(Monomial(vec![i]), Rational::one())
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.grade(), self.grade, "inhomogeneous term");
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SymTensor, c: &Rational) {
        if c.is_zero() {
            return;
        }
        assert_eq!(self.grade, other.grade, "grade mismatch");
        for (m, x) in &other.coeffs {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> SymTensor {
        let mut out = SymTensor::zero(self.grade);
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> SymTensor {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &SymTensor) -> SymTensor {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &SymTensor) -> SymTensor {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// The commutative product `a ⊙ b`.
    pub fn product(&self, other: &SymTensor) -> SymTensor {
        let mut out = SymTensor::zero(self.grade + other.grade);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Evaluates the associated symmetric `k`-linear form on `args`.
    pub fn evaluate(&self, args: &[Vec<Rational>]) -> Result<Rational> {
        if args.len() != self.grade {
            return Err(Error::DimensionMismatch {
                expected: self.grade,
                got: args.len(),
            });
        }
        let k = self.grade;
        let factorial: Rational = (1..=k).map(|i| Rational::from_integer(i.into())).product();
        let mut total = Rational::zero();
        for (m, c) in &self.coeffs {
            if let Some(&max) = m.0.last() {
                if let Some(short) = args.iter().find(|w| w.len() <= max) {
                    return Err(Error::DimensionMismatch {
                        expected: max + 1,
                        got: short.len(),
                    });
                }
            }
            let mut perm_sum = Rational::zero();
            for sigma in (0..k).permutations(k) {
                let mut prod = Rational::one();
                for (t, &s) in sigma.iter().enumerate() {
                    prod *= &args[s][m.0[t]];
                    if prod.is_zero() {
                        break;
                    }
                }
                perm_sum += prod;
            }
            total += c * perm_sum;
        }
        Ok(total / factorial)
    }

    /// The grade-2 tensor whose polarization is the symmetric form `f`
    /// (`f[i][j] = F(e_i, e_j)`).
    pub fn from_bilinear(f: &MatrixQ) -> Result<SymTensor> {
        let n = f.rows();
        if f.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.cols(),
            });
        }
        if *f != f.transpose() {
            return Err(Error::InvalidInput("bilinear form is not symmetric".into()));
        }
        let two = Rational::from_integer(2.into());
        let mut out = SymTensor::zero(2);
        for i in 0..n {
            out.add_term(Monomial(vec![i, i]), f.get(i, i).clone());
            for j in i + 1..n {
                out.add_term(Monomial(vec![i, j]), f.get(i, j) * &two);
            }
        }
        Ok(out)
    }

    /// Coefficients in [`enumerate_monomials`] order.
    pub fn to_vector(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); sym_dim(n, self.grade)];
        for (m, c) in &self.coeffs {
            v[m.rank()] = c.clone();
        }
        v
    }

    pub fn from_vector(n: usize, grade: usize, v: &[Rational]) -> Result<SymTensor> {
        let basis = enumerate_monomials(n, grade);
        if v.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: v.len(),
            });
        }
        let mut out = SymTensor::zero(grade);
        for (m, c) in basis.into_iter().zip(v) {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn to_serial(&self) -> SymTensorSerial {
        SymTensorSerial {
            grade: self.grade,
            terms: self
                .coeffs
                .iter()
                .map(|(m, c)| TermSerial {
                    monomial: m.one_based(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_serial(s: &SymTensorSerial) -> Result<SymTensor> {
        let mut out = SymTensor::zero(s.grade);
        for t in &s.terms {
            if t.monomial.len() != s.grade {
                return Err(Error::Parse(format!(
                    "monomial {:?} does not have grade {}",
                    t.monomial, s.grade
                )));
            }
            if t.monomial.contains(&0) {
                return Err(Error::Parse("monomial indices are 1-based".into()));
            }
            let m = Monomial::new(t.monomial.iter().map(|i| i - 1).collect());
            out.add_term(m, parse_rational(&t.coeff)?);
        }
        Ok(out)
    }
}

/// Wire form: `{"grade": k, "terms": [{"monomial": [i, …], "coeff": "p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymTensorSerial {
    pub grade: usize,
    pub terms: Vec<TermSerial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSerial {
    pub monomial: Vec<usize>,
    pub coeff: String,
}

impl Serialize for SymTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_serial().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymTensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = SymTensorSerial::deserialize(d)?;
        SymTensor::from_serial(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::unit_vector;
    use crate::linalg::{rat, ratio};
    use proptest::prelude::*;

    fn mono(ix: &[usize]) -> Monomial {
        Monomial::new(ix.iter().map(|i| i - 1).collect())
    }

    fn x(ix: &[usize]) -> SymTensor {
        SymTensor::monomial(mono(ix), rat(1))
    }

    #[test]
    fn dims() {
        assert_eq!(sym_dim(3, 2), 6);
        assert_eq!(sym_dim(3, 0), 1);
        assert_eq!(sym_dim(8, 4), 330);
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(
            enumerate_monomials(2, 2),
            vec![mono(&[1, 1]), mono(&[1, 2]), mono(&[2, 2])]
        );
        assert_eq!(
            enumerate_monomials(3, 1),
            vec![mono(&[1]), mono(&[2]), mono(&[3])]
        );
        assert_eq!(enumerate_monomials(3, 0), vec![Monomial::unit()]);
    }

    #[test]
    fn rank_matches_brute_force_position() {
        for n in 1..=8 {
            for k in 0..=4 {
                let list = enumerate_monomials(n, k);
                assert_eq!(list.len(), sym_dim(n, k));
                // Oracle: lexicographic generation, then sort by reversed tuple.
                let mut brute: Vec<Vec<usize>> = (0..n).combinations_with_replacement(k).collect();
                brute.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
                let brute: Vec<_> = brute.into_iter().map(Monomial).collect();
                assert_eq!(list, brute);
                for (pos, m) in list.iter().enumerate() {
                    assert_eq!(m.rank(), pos);
                }
            }
        }
        let m = mono(&[1, 2, 3]);
        let pos = enumerate_monomials(3, 3)
            .iter()
            .position(|x| *x == m)
            .unwrap();
        assert_eq!(m.rank(), pos);
    }

    #[test]
    fn products() {
        assert_eq!(x(&[1]).product(&x(&[1, 3])), x(&[1, 1, 3]));
        let s = x(&[2, 3]).scale(&ratio(2, 3));
        assert_eq!(SymTensor::unit().product(&s), s);
        let a = x(&[1]).add(&x(&[2]));
        let b = x(&[1]).sub(&x(&[2]));
        assert_eq!(a.product(&b), x(&[1, 1]).sub(&x(&[2, 2])));
    }

    #[test]
    fn evaluation_convention() {
        let e = |i: usize| unit_vector(3, i - 1);
        assert_eq!(x(&[1, 2]).evaluate(&[e(1), e(2)]).unwrap(), ratio(1, 2));
        assert_eq!(x(&[1, 1]).evaluate(&[e(1), e(1)]).unwrap(), rat(1));
        assert_eq!(x(&[1, 2]).evaluate(&[e(2), e(1)]).unwrap(), ratio(1, 2));
        assert!(x(&[1, 2]).evaluate(&[e(1)]).is_err());
        assert_eq!(SymTensor::unit().evaluate(&[]).unwrap(), rat(1));
    }

    #[test]
    fn bilinear_examples() {
        let mut f = MatrixQ::zeros(3, 3);
        f.set(0, 2, ratio(1, 2));
        f.set(2, 0, ratio(1, 2));
        assert_eq!(SymTensor::from_bilinear(&f).unwrap(), x(&[1, 3]));
        assert!(SymTensor::from_bilinear(&MatrixQ::zeros(3, 3))
            .unwrap()
            .is_zero());
        let mut g = MatrixQ::zeros(3, 3);
        g.set(0, 0, rat(-1));
        assert_eq!(SymTensor::from_bilinear(&g).unwrap(), x(&[1, 1]).neg());
        let mut h = MatrixQ::zeros(2, 2);
        h.set(0, 1, rat(1));
        assert!(SymTensor::from_bilinear(&h).is_err());
    }

    #[test]
    fn serial_round_trip() {
        let t = x(&[1, 3]).scale(&ratio(-3, 2)).add(&x(&[2, 2]));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"grade":2,"terms":[{"monomial":[2,2],"coeff":"1"},{"monomial":[1,3],"coeff":"-3/2"}]}"#
        );
        let back: SymTensor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    fn vecq(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-4i64..=4, 1i64..=3), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| ratio(a, b)).collect())
    }

    fn tensor(n: usize, k: usize) -> impl Strategy<Value = SymTensor> {
        vecq(sym_dim(n, k)).prop_map(move |v| SymTensor::from_vector(n, k, &v).unwrap())
    }

    proptest! {
        #[test]
        fn evaluate_is_symmetric_and_linear(
            t in tensor(3, 3),
            u in vecq(3), v in vecq(3), w in vecq(3), z in vecq(3),
            c in (-3i64..=3),
        ) {
            let base = t.evaluate(&[u.clone(), v.clone(), w.clone()]).unwrap();
            prop_assert_eq!(&base, &t.evaluate(&[w.clone(), u.clone(), v.clone()]).unwrap());
            prop_assert_eq!(&base, &t.evaluate(&[v.clone(), u.clone(), w.clone()]).unwrap());
            let uz: Vec<_> = u.iter().zip(&z).map(|(a, b)| a + b * rat(c)).collect();
            let lhs = t.evaluate(&[uz, v.clone(), w.clone()]).unwrap();
            let rhs = base + t.evaluate(&[z, v, w]).unwrap() * rat(c);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bilinear_round_trips(t in tensor(3, 2), f in vecq(6)) {
            // tensor -> form -> tensor
            let e = |i| unit_vector(3, i);
            let mut form = MatrixQ::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    form.set(i, j, t.evaluate(&[e(i), e(j)]).unwrap());
                }
            }
            prop_assert_eq!(&SymTensor::from_bilinear(&form).unwrap(), &t);

            // form -> tensor -> form, on arbitrary vectors
            let mut sym = MatrixQ::zeros(3, 3);
            let mut it = f.into_iter();
            for i in 0..3 {
                for j in i..3 {
                    let v = it.next().unwrap();
                    sym.set(i, j, v.clone());
                    sym.set(j, i, v);
                }
            }
            let s = SymTensor::from_bilinear(&sym).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(&s.evaluate(&[e(i), e(j)]).unwrap(), sym.get(i, j));
                }
            }
        }

        #[test]
        fn product_is_commutative_and_associative(
            a in tensor(3, 1), b in tensor(3, 2), c in tensor(3, 1),
        ) {
            prop_assert_eq!(a.product(&b), b.product(&a));
            prop_assert_eq!(a.product(&b).product(&c), a.product(&b.product(&c)));
            prop_assert_eq!(a.product(&b).grade(), 3);
        }
    }
}
