//! The prolongation operator `δ^λ : Sym^k(g) → Sym^{k+1}(g)`.
//!
//! On a generator `v`, `δ(v)` is the grade-2 tensor whose polarization is
//!
//! ```text
//! (w1, w2) ↦ ½ (⟨λ, [w1, [w2, v]]⟩ + ⟨λ, [w2, [w1, v]]⟩)
//! ```
//!
//! On a sorted monomial `x_{i_1} ≤ … ≤ x_{i_k}` the operator is
//! `Σ_t σ_t δ(x_{i_t}) ⊙ (monomial without position t)`, extended linearly,
//! where `σ_t = (−1)^{t−1}` in [`LeibnizMode::Signed`] and `σ_t = 1` in
//! [`LeibnizMode::Unsigned`]. The signed rule depends on the order in which a
//! commutative product is factored; fixing the sorted order makes it a well
//! defined linear map, but not in general a derivation.

mod audit;

pub use audit::{
    leibniz_audit, leibniz_sides, mirror_audit, nilpotency_audit, scaling_audit,
    verify_nilpotency_certificate, AuditReport, GradeVerdict, Verdict,
};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{unit_vector, DualFunctional, LieAlgebra};
use crate::linalg::{self, rank_bareiss, rref, MatrixQ, Rational};
use crate::sym::{enumerate_monomials, sym_dim, Monomial, SymTensor};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum PairingMode {
    /// `⟨λ, x⟩ = Σ λ_i x_i`.
    #[default]
    Plain,
    /// `⟨λ, x⟩ = B(λ, x)` with `B` the Killing form.
    Killing,
}

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum LeibnizMode {
    #[default]
    Signed,
    Unsigned,
}

impl fmt::Display for PairingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingMode::Plain => "plain",
            PairingMode::Killing => "killing",
        })
    }
}

impl fmt::Display for LeibnizMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeibnizMode::Signed => "signed",
            LeibnizMode::Unsigned => "unsigned",
        })
    }
}

/// The conventions a computed number depends on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeFlags {
    pub pairing_mode: PairingMode,
    pub leibniz_mode: LeibnizMode,
}

pub struct SpencerOperator {
    algebra: LieAlgebra,
    lambda: DualFunctional,
    modes: ModeFlags,
    /// The covector actually paired against, after optional Killing identification.
    effective: DualFunctional,
    /// `δ(x_i)` for each basis index.
    generators: Vec<SymTensor>,
    matrices: Mutex<BTreeMap<usize, Arc<MatrixQ>>>,
}

impl Clone for SpencerOperator {
    fn clone(&self) -> Self {
        let cache = self.matrices.lock().expect("matrix cache poisoned").clone();
        SpencerOperator {
            algebra: self.algebra.clone(),
            lambda: self.lambda.clone(),
            modes: self.modes,
            effective: self.effective.clone(),
            generators: self.generators.clone(),
            matrices: Mutex::new(cache),
        }
    }
}

impl fmt::Debug for SpencerOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpencerOperator")
            .field("algebra", &self.algebra.name())
            .field("lambda", &linalg::format_vector(&self.lambda.components))
            .field("modes", &self.modes)
            .finish()
    }
}

impl SpencerOperator {
    pub fn new(algebra: LieAlgebra, lambda: DualFunctional, modes: ModeFlags) -> Result<Self> {
        if lambda.dim() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: lambda.dim(),
            });
        }
        let effective = match modes.pairing_mode {
            PairingMode::Plain => lambda.clone(),
            PairingMode::Killing => lambda.killing_identified(&algebra)?,
        };
        let mut op = SpencerOperator {
            algebra,
            lambda,
            modes,
            effective,
            generators: Vec::new(),
            matrices: Mutex::new(BTreeMap::new()),
        };
        let n = op.dim();
        op.generators = (0..n)
            .map(|i| op.delta_generator(&unit_vector(n, i)))
            .collect::<Result<_>>()?;
        Ok(op)
    }

    /// Same algebra and modes, different covector.
    pub fn with_lambda(&self, lambda: DualFunctional) -> Result<Self> {
        Self::new(self.algebra.clone(), lambda, self.modes)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn lambda(&self) -> &DualFunctional {
        &self.lambda
    }

    pub fn modes(&self) -> ModeFlags {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `δ(v)` for an arbitrary element `v` of `g`.
    pub fn delta_generator(&self, v: &[Rational]) -> Result<SymTensor> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let half = Rational::new(1.into(), 2.into());
        // inner[b] = [e_b, v]
        let inner: Vec<Vec<Rational>> = (0..n)
            .map(|b| self.algebra.bracket(&unit_vector(n, b), v))
            .collect::<Result<_>>()?;
        // nested[a][b] = ⟨λ, [e_a, [e_b, v]]⟩
        let mut nested = MatrixQ::zeros(n, n);
        for a in 0..n {
            let ea = unit_vector(n, a);
            for (b, ib) in inner.iter().enumerate() {
                let val = self.effective.pair(&self.algebra.bracket(&ea, ib)?)?;
                nested.set(a, b, val);
            }
        }
        let form = (&nested + &nested.transpose()).scale(&half);
        SymTensor::from_bilinear(&form)
    }

    fn sign(&self, t: usize) -> Rational {
        match self.modes.leibniz_mode {
            LeibnizMode::Signed if t % 2 == 1 => -Rational::one(),
            _ => Rational::one(),
        }
    }

    fn delta_monomial(&self, m: &Monomial) -> SymTensor {
        let mut out = SymTensor::zero(m.grade() + 1);
        for (t, &i) in m.indices().iter().enumerate() {
            let rest = SymTensor::monomial(m.without(t), Rational::one());
            out.add_scaled(&self.generators[i].product(&rest), &self.sign(t));
        }
        out
    }

    pub fn delta(&self, s: &SymTensor) -> SymTensor {
        let mut out = SymTensor::zero(s.grade() + 1);
        for (m, c) in s.terms() {
            out.add_scaled(&self.delta_monomial(m), c);
        }
        out
    }

    /// `M_k`, of shape `sym_dim(n, k+1) × sym_dim(n, k)`; column `j` holds
    /// `δ` of the `j`-th grade-`k` monomial.
    pub fn assemble_matrix(&self, k: usize) -> Arc<MatrixQ> {
        if let Some(m) = self.matrices.lock().expect("matrix cache poisoned").get(&k) {
            return Arc::clone(m);
        }
        let n = self.dim();
        let cols: Vec<Vec<Rational>> = enumerate_monomials(n, k)
            .iter()
            .map(|m| self.delta_monomial(m).to_vector(n))
            .collect();
        let m = Arc::new(
            MatrixQ::from_columns(&cols, sym_dim(n, k + 1)).expect("consistent monomial counts"),
        );
        self.matrices
            .lock()
            .expect("matrix cache poisoned")
            .entry(k)
            .or_insert(m)
            .clone()
    }

    /// `K^k(λ) = ker M_k`, with the rank confirmed by fraction-free elimination.
    pub fn kernel(&self, k: usize) -> Result<KernelSpace> {
        let m = self.assemble_matrix(k);
        let n = self.dim();
        let reduced = rref(&m);
        let rank = reduced.rank;
        let oracle = rank_bareiss(&m);
        if rank != oracle {
            return Err(Error::Inconsistency(format!(
                "rank of M_{k}: rref {rank}, Bareiss {oracle}"
            )));
        }
        let vectors = reduced.kernel_basis();
        if vectors.len() + rank != m.cols() {
            return Err(Error::Inconsistency(format!(
                "rank-nullity fails for M_{k}: {} + {rank} != {}",
                vectors.len(),
                m.cols()
            )));
        }
        let basis = vectors
            .iter()
            .map(|v| SymTensor::from_vector(n, k, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelSpace {
            grade: k,
            dim: basis.len(),
            rank,
            ambient_dim: m.cols(),
            vectors,
            basis,
        })
    }
}

/// `K^k(λ) = ker(δ^λ : Sym^k → Sym^{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSpace {
    pub grade: usize,
    pub dim: usize,
    /// Rank of `M_k`, agreed by two elimination algorithms.
    pub rank: usize,
    pub ambient_dim: usize,
    /// Basis as coefficient vectors in monomial order.
    pub vectors: Vec<Vec<Rational>>,
    pub basis: Vec<SymTensor>,
}

impl KernelSpace {
    /// Matrix with the basis vectors as columns.
    pub fn basis_matrix(&self) -> MatrixQ {
        MatrixQ::from_columns(&self.vectors, self.ambient_dim).expect("kernel vector length")
    }

    pub fn canonical(&self) -> MatrixQ {
        linalg::column_space_canonical(&self.basis_matrix())
    }
}

/// `δ` applied twice along the tensor path; shares nothing with matrix assembly.
pub(crate) fn delta_twice(op: &SpencerOperator, m: &Monomial) -> SymTensor {
    op.delta(&op.delta(&SymTensor::monomial(m.clone(), Rational::one())))
}

pub(crate) fn is_zero_tensor(t: &SymTensor) -> bool {
    t.terms().all(|(_, c)| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use proptest::prelude::*;

    fn su2() -> LieAlgebra {
        LieAlgebra::builtin("su2").unwrap()
    }

    fn x(ix: &[usize]) -> SymTensor {
        SymTensor::monomial(Monomial::new(ix.iter().map(|i| i - 1).collect()), rat(1))
    }

    fn op(lambda: DualFunctional, modes: ModeFlags) -> SpencerOperator {
        SpencerOperator::new(su2(), lambda, modes).unwrap()
    }

    fn e3_op(leibniz: LeibnizMode) -> SpencerOperator {
        op(
            DualFunctional::basis(3, 2),
            ModeFlags {
                pairing_mode: PairingMode::Plain,
                leibniz_mode: leibniz,
            },
        )
    }

    /// Oracle: evaluate ½(⟨λ,[w1,[w2,v]]⟩ + ⟨λ,[w2,[w1,v]]⟩) straight from brackets.
    fn nested_form(
        g: &LieAlgebra,
        l: &DualFunctional,
        v: &[Rational],
        a: usize,
        b: usize,
    ) -> Rational {
        let e = |i| unit_vector(3, i);
        let t1 = l
            .pair(&g.bracket(&e(a), &g.bracket(&e(b), v).unwrap()).unwrap())
            .unwrap();
        let t2 = l
            .pair(&g.bracket(&e(b), &g.bracket(&e(a), v).unwrap()).unwrap())
            .unwrap();
        (t1 + t2) / rat(2)
    }

    #[test]
    fn generator_images_for_e3() {
        let o = e3_op(LeibnizMode::Signed);
        let g = su2();
        let l = DualFunctional::basis(3, 2);
        let e = |i| unit_vector(3, i);
        let d3 = o.delta_generator(&e(2)).unwrap();
        assert_eq!(nested_form(&g, &l, &e(2), 0, 0), rat(-1));
        assert_eq!(nested_form(&g, &l, &e(2), 1, 1), rat(-1));
        assert_eq!(d3.evaluate(&[e(0), e(0)]).unwrap(), rat(-1));
        assert_eq!(d3.evaluate(&[e(1), e(1)]).unwrap(), rat(-1));
        assert_eq!(d3, x(&[1, 1]).add(&x(&[2, 2])).neg());
        assert_eq!(nested_form(&g, &l, &e(0), 0, 2), ratio(1, 2));
        assert_eq!(o.delta_generator(&e(0)).unwrap(), x(&[1, 3]));
        assert_eq!(o.delta_generator(&e(1)).unwrap(), x(&[2, 3]));
        assert!(o.delta_generator(&[rat(1)]).is_err());
    }

    #[test]
    fn generator_matches_bracket_oracle_on_every_pair() {
        let g = LieAlgebra::builtin("su3").unwrap();
        let l = DualFunctional::new((1..=8).map(|i| ratio(i as i64 - 4, 3)).collect());
        let o = SpencerOperator::new(g.clone(), l.clone(), ModeFlags::default()).unwrap();
        let e = |i| unit_vector(8, i);
        for v in 0..8 {
            let d = o.delta_generator(&e(v)).unwrap();
            for a in 0..8 {
                for b in 0..8 {
                    let t1 = l
                        .pair(&g.bracket(&e(a), &g.bracket(&e(b), &e(v)).unwrap()).unwrap())
                        .unwrap();
                    let t2 = l
                        .pair(&g.bracket(&e(b), &g.bracket(&e(a), &e(v)).unwrap()).unwrap())
                        .unwrap();
                    assert_eq!(d.evaluate(&[e(a), e(b)]).unwrap(), (t1 + t2) / rat(2));
                }
            }
        }
    }

    #[test]
    fn zero_lambda_is_the_zero_operator() {
        let o = op(DualFunctional::zero(3), ModeFlags::default());
        for v in 0..3 {
            assert!(o.delta_generator(&unit_vector(3, v)).unwrap().is_zero());
        }
        assert!(o.delta(&x(&[1, 2, 3])).is_zero());
        for k in 0..4 {
            let m = o.assemble_matrix(k);
            assert!(m.is_zero());
            assert_eq!((m.rows(), m.cols()), (sym_dim(3, k + 1), sym_dim(3, k)));
            assert_eq!(o.kernel(k).unwrap().dim, sym_dim(3, k));
        }
    }

    #[test]
    fn unit_and_grade_one() {
        for mode in [LeibnizMode::Signed, LeibnizMode::Unsigned] {
            let o = e3_op(mode);
            assert!(o.delta(&SymTensor::unit()).is_zero());
            assert_eq!(o.delta(&x(&[3])), x(&[1, 1]).add(&x(&[2, 2])).neg());
            let m0 = o.assemble_matrix(0);
            assert!(m0.is_zero());
            assert_eq!((m0.rows(), m0.cols()), (3, 1));
            assert_eq!(o.kernel(0).unwrap().dim, 1);
        }
    }

    #[test]
    fn grade_one_matrix_for_e3() {
        let o = e3_op(LeibnizMode::Signed);
        let m = o.assemble_matrix(1);
        assert_eq!((m.rows(), m.cols()), (6, 3));
        let expected = [x(&[1, 3]), x(&[2, 3]), x(&[1, 1]).add(&x(&[2, 2])).neg()];
        for (j, t) in expected.iter().enumerate() {
            assert_eq!(m.column(j), t.to_vector(3));
        }
        // The three images are independent: the computed kernel is trivial.
        assert_eq!(o.kernel(1).unwrap().dim, 0);
    }

    #[test]
    fn frozen_kernel_dims_su2_e3() {
        // Frozen from an independent sympy computation of the same definitions.
        let expected = [
            (LeibnizMode::Signed, [1, 0, 4, 0, 9]),
            (LeibnizMode::Unsigned, [1, 0, 1, 0, 1]),
        ];
        for (mode, dims) in expected {
            for pairing in [PairingMode::Plain, PairingMode::Killing] {
                let o = op(
                    DualFunctional::basis(3, 2),
                    ModeFlags {
                        pairing_mode: pairing,
                        leibniz_mode: mode,
                    },
                );
                let got: Vec<_> = (0..5).map(|k| o.kernel(k).unwrap().dim).collect();
                assert_eq!(got, dims, "{mode} {pairing}");
            }
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let o = e3_op(LeibnizMode::Signed);
        for k in 0..4 {
            let ks = o.kernel(k).unwrap();
            for t in &ks.basis {
                assert!(o.delta(t).is_zero());
            }
            assert_eq!(ks.dim + ks.rank, sym_dim(3, k));
        }
    }

    #[test]
    fn matrix_is_linear_in_lambda() {
        let base = e3_op(LeibnizMode::Signed);
        let five = base.with_lambda(base.lambda().scaled(&rat(5))).unwrap();
        for k in 0..3 {
            assert_eq!(
                *five.assemble_matrix(k),
                base.assemble_matrix(k).scale(&rat(5))
            );
        }
    }

    #[test]
    fn cache_returns_same_matrix() {
        let o = e3_op(LeibnizMode::Unsigned);
        let a = o.assemble_matrix(2);
        let b = o.assemble_matrix(2);
        assert!(Arc::ptr_eq(&a, &b));
    }

    fn lambda3() -> impl Strategy<Value = DualFunctional> {
        prop::collection::vec((-4i64..=4, 1i64..=3), 3)
            .prop_map(|v| DualFunctional::new(v.into_iter().map(|(a, b)| ratio(a, b)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn linear_combination_of_lambdas(
            l1 in lambda3(), l2 in lambda3(), c1 in -3i64..=3, c2 in -3i64..=3,
            signed in any::<bool>(),
        ) {
            let modes = ModeFlags {
                pairing_mode: PairingMode::Plain,
                leibniz_mode: if signed { LeibnizMode::Signed } else { LeibnizMode::Unsigned },
            };
            let combo = DualFunctional::new(
                l1.components.iter().zip(&l2.components)
                    .map(|(a, b)| a * rat(c1) + b * rat(c2)).collect());
            let a = op(l1, modes);
            let b = op(l2, modes);
            let ab = op(combo, modes);
            for k in 0..3 {
                let lhs = ab.assemble_matrix(k);
                let rhs = &a.assemble_matrix(k).scale(&rat(c1)) + &b.assemble_matrix(k).scale(&rat(c2));
                prop_assert_eq!(&*lhs, &rhs);
            }
        }

        #[test]
        fn grade_one_delta_is_the_generator(l in lambda3(), v in prop::collection::vec(-3i64..=3, 3)) {
            let o = op(l, ModeFlags::default());
            let v: Vec<_> = v.into_iter().map(rat).collect();
            let t = SymTensor::from_vector(3, 1, &v).unwrap();
            prop_assert_eq!(o.delta(&t), o.delta_generator(&v).unwrap());
        }
    }
}
