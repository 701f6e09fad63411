//! Audits of the structural claims about `δ^λ`.
//!
//! Audits never presume the answer. Claims that follow from linearity alone
//! (mirror antisymmetry, scaling invariance) are hard failures when violated,
//! since that can only be a bug. Nilpotency and the Leibniz rule are recorded
//! as findings, with certificates that can be re-checked independently.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{delta_twice, is_zero_tensor, LeibnizMode, ModeFlags, SpencerOperator};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational};
use crate::sampling::random_tensor;
use crate::sym::{enumerate_monomials, SymTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Zero,
    Nonzero,
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_finding(self) -> bool {
        matches!(self, Verdict::Nonzero | Verdict::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradeVerdict {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub claim: String,
    pub mode: ModeFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub grades: Vec<GradeVerdict>,
}

impl AuditReport {
    fn new(claim: &str, op: &SpencerOperator) -> Self {
        AuditReport {
            claim: claim.to_string(),
            mode: op.modes(),
            note: None,
            grades: Vec::new(),
        }
    }

    pub fn has_findings(&self) -> bool {
        self.grades.iter().any(|g| g.verdict.is_finding())
    }

    pub fn verdicts(&self) -> Vec<Verdict> {
        self.grades.iter().map(|g| g.verdict).collect()
    }
}

/// Computes `M_{k+1} M_k` for `k < k_max` from the cached matrices and again by
/// applying `δ` twice to every monomial; the two must agree.
pub fn nilpotency_audit(op: &SpencerOperator, k_max: usize) -> Result<AuditReport> {
    if k_max == 0 {
        return Err(Error::Precondition(
            "nilpotency audit needs k_max >= 1".into(),
        ));
    }
    let n = op.dim();
    let mut report = AuditReport::new("delta squared is zero", op);
    for k in 0..k_max {
        let product = &*op.assemble_matrix(k + 1) * &*op.assemble_matrix(k);
        let mut first_nonzero = None;
        for (j, m) in enumerate_monomials(n, k).iter().enumerate() {
            let naive = delta_twice(op, m);
            if naive.to_vector(n) != product.column(j) {
                return Err(Error::Inconsistency(format!(
                    "M_{}·M_{k} disagrees with delta(delta(x)) on monomial {:?}",
                    k + 1,
                    m.one_based()
                )));
            }
            if first_nonzero.is_none() && !is_zero_tensor(&naive) {
                first_nonzero = Some((m.clone(), naive));
            }
        }
        let grade = match first_nonzero {
            None => GradeVerdict {
                k,
                trial: None,
                verdict: Verdict::Zero,
                certificate: None,
            },
            Some((m, image)) => GradeVerdict {
                k,
                trial: None,
                verdict: Verdict::Nonzero,
                certificate: Some(json!({
                    "monomial": m.one_based(),
                    "image": image,
                })),
            },
        };
        report.grades.push(grade);
    }
    if op.modes().leibniz_mode == LeibnizMode::Signed {
        report.note = Some("signed extension fixed on the sorted monomial factorization".into());
    }
    Ok(report)
}

/// Re-checks a nilpotency certificate by recomputing `δ(δ(x))`.
pub fn verify_nilpotency_certificate(op: &SpencerOperator, certificate: &Value) -> Result<bool> {
    let monomial: Vec<usize> = serde_json::from_value(certificate["monomial"].clone())
        .map_err(|e| Error::Parse(format!("certificate monomial: {e}")))?;
    let image: SymTensor = serde_json::from_value(certificate["image"].clone())
        .map_err(|e| Error::Parse(format!("certificate image: {e}")))?;
    let m = crate::sym::Monomial::new(monomial.iter().map(|i| i - 1).collect());
    let recomputed = delta_twice(op, &m);
    Ok(recomputed == image && !recomputed.is_zero())
}

/// `M_k(−λ) = −M_k(λ)` entrywise and `K^k(λ) = K^k(−λ)` for `k ≤ k_max`.
pub fn mirror_audit(op: &SpencerOperator, k_max: usize) -> Result<AuditReport> {
    let mirrored = op.with_lambda(op.lambda().negated())?;
    let mut report = AuditReport::new("mirror antisymmetry and kernel mirror invariance", op);
    for k in 0..=k_max {
        let m = op.assemble_matrix(k);
        let mm = mirrored.assemble_matrix(k);
        if *mm != -&*m {
            return Err(Error::Inconsistency(format!(
                "M_{k}(-lambda) != -M_{k}(lambda)"
            )));
        }
        if op.kernel(k)?.canonical() != mirrored.kernel(k)?.canonical() {
            return Err(Error::Inconsistency(format!(
                "K^{k}(lambda) != K^{k}(-lambda)"
            )));
        }
        report.grades.push(GradeVerdict {
            k,
            trial: None,
            verdict: Verdict::Pass,
            certificate: None,
        });
    }
    Ok(report)
}

/// `K^k(cλ) = K^k(λ)` as subspaces for `k ≤ k_max`.
pub fn scaling_audit(op: &SpencerOperator, c: &Rational, k_max: usize) -> Result<AuditReport> {
    if num_traits::Zero::is_zero(c) {
        return Err(Error::Precondition("scaling factor must be nonzero".into()));
    }
    let scaled = op.with_lambda(op.lambda().scaled(c))?;
    let mut report = AuditReport::new("kernel invariant under scaling lambda", op);
    report.note = Some(format!("c = {}", format_rational(c)));
    for k in 0..=k_max {
        if op.kernel(k)?.canonical() != scaled.kernel(k)?.canonical() {
            return Err(Error::Inconsistency(format!(
                "K^{k}(c lambda) != K^{k}(lambda) for c = {}",
                format_rational(c)
            )));
        }
        report.grades.push(GradeVerdict {
            k,
            trial: None,
            verdict: Verdict::Pass,
            certificate: None,
        });
    }
    Ok(report)
}

/// Both sides of the Leibniz rule for `a ⊙ b` in the operator's mode:
/// `δ(a⊙b)` and `δ(a)⊙b + σ a⊙δ(b)` with `σ = (−1)^p` when signed.
pub fn leibniz_sides(op: &SpencerOperator, a: &SymTensor, b: &SymTensor) -> (SymTensor, SymTensor) {
    let lhs = op.delta(&a.product(b));
    let sign = match op.modes().leibniz_mode {
        LeibnizMode::Signed if a.grade() % 2 == 1 => -Rational::from_integer(1.into()),
        _ => Rational::from_integer(1.into()),
    };
    let mut rhs = op.delta(a).product(b);
    rhs.add_scaled(&a.product(&op.delta(b)), &sign);
    (lhs, rhs)
}

/// Tests the Leibniz rule on seeded random homogeneous pairs of grade ≤ 2.
/// The first trial always uses `a = 1`.
pub fn leibniz_audit(op: &SpencerOperator, trials: usize, seed: u64) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::Precondition(
            "leibniz audit needs at least one trial".into(),
        ));
    }
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport::new("graded Leibniz rule", op);
    for trial in 0..trials {
        let p = if trial == 0 { 0 } else { rng.gen_range(0..=2) };
        let q = rng.gen_range(0..=2);
        let a = if trial == 0 {
            SymTensor::unit()
        } else {
            random_tensor(&mut rng, n, p)
        };
        let b = random_tensor(&mut rng, n, q);
        let (lhs, rhs) = leibniz_sides(op, &a, &b);
        let ok = lhs == rhs;
        report.grades.push(GradeVerdict {
            k: p + q,
            trial: Some(trial),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            certificate: (!ok).then(|| json!({ "a": a, "b": b, "lhs": lhs, "rhs": rhs })),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{DualFunctional, LieAlgebra};
    use crate::linalg::{rat, ratio};
    use crate::spencer::PairingMode;
    use crate::sym::Monomial;

    fn su2_op(lambda: DualFunctional, leibniz: LeibnizMode) -> SpencerOperator {
        SpencerOperator::new(
            LieAlgebra::builtin("su2").unwrap(),
            lambda,
            ModeFlags {
                pairing_mode: PairingMode::Plain,
                leibniz_mode: leibniz,
            },
        )
        .unwrap()
    }

    #[test]
    fn nilpotency_zero_lambda() {
        let op = su2_op(DualFunctional::zero(3), LeibnizMode::Signed);
        let r = nilpotency_audit(&op, 3).unwrap();
        assert_eq!(r.verdicts(), vec![Verdict::Zero; 3]);
        assert!(!r.has_findings());
    }

    #[test]
    fn nilpotency_e3_findings_reverify() {
        // Frozen from an independent sympy computation: δ² vanishes only on Sym^0.
        for mode in [LeibnizMode::Signed, LeibnizMode::Unsigned] {
            let op = su2_op(DualFunctional::basis(3, 2), mode);
            let r = nilpotency_audit(&op, 3).unwrap();
            assert_eq!(
                r.verdicts(),
                vec![Verdict::Zero, Verdict::Nonzero, Verdict::Nonzero],
                "{mode}"
            );
            for g in r.grades.iter().filter(|g| g.verdict == Verdict::Nonzero) {
                let cert = g.certificate.as_ref().unwrap();
                assert!(verify_nilpotency_certificate(&op, cert).unwrap());
            }
        }
        assert!(
            nilpotency_audit(&su2_op(DualFunctional::zero(3), LeibnizMode::Signed), 0).is_err()
        );
    }

    #[test]
    fn mirror_and_scaling_pass() {
        for l in [DualFunctional::basis(3, 2), DualFunctional::zero(3)] {
            let op = su2_op(l, LeibnizMode::Signed);
            let r = mirror_audit(&op, 3).unwrap();
            assert_eq!(r.verdicts(), vec![Verdict::Pass; 4]);
            for c in [rat(7), rat(-1), ratio(1, 3)] {
                assert!(!scaling_audit(&op, &c, 3).unwrap().has_findings());
            }
            assert!(scaling_audit(&op, &rat(0), 1).is_err());
        }
    }

    #[test]
    fn unit_satisfies_leibniz_in_both_modes() {
        for mode in [LeibnizMode::Signed, LeibnizMode::Unsigned] {
            let op = su2_op(DualFunctional::basis(3, 2), mode);
            let b = SymTensor::monomial(Monomial::new(vec![0, 2]), rat(3));
            let (l, r) = leibniz_sides(&op, &SymTensor::unit(), &b);
            assert_eq!(l, r);
        }
    }

    #[test]
    fn unsigned_mode_is_a_derivation() {
        let op = su2_op(DualFunctional::basis(3, 2), LeibnizMode::Unsigned);
        let r = leibniz_audit(&op, 40, 0).unwrap();
        assert!(!r.has_findings());
    }

    #[test]
    fn signed_rule_on_x1_x2() {
        // δ(x1) x2 = x1 δ(x2) = x1x2x3, so both sides vanish in either factor order.
        let op = su2_op(DualFunctional::basis(3, 2), LeibnizMode::Signed);
        let a = SymTensor::generator(0);
        let b = SymTensor::generator(1);
        let (lhs, rhs) = leibniz_sides(&op, &a, &b);
        assert!(lhs.is_zero());
        assert_eq!(lhs, rhs);
        let (lhs2, rhs2) = leibniz_sides(&op, &b, &a);
        assert_eq!(lhs2, rhs2);
        let cert = json!({ "a": a, "b": b, "lhs": lhs, "rhs": rhs });
        assert_eq!(cert["a"]["terms"][0]["monomial"], json!([1]));
    }

    #[test]
    fn signed_mode_records_failures() {
        let op = su2_op(DualFunctional::basis(3, 2), LeibnizMode::Signed);
        let r = leibniz_audit(&op, 40, 0).unwrap();
        assert_eq!(r.grades[0].verdict, Verdict::Pass);
        for g in r.grades.iter().filter(|g| g.verdict == Verdict::Fail) {
            let cert = g.certificate.as_ref().unwrap();
            let a: SymTensor = serde_json::from_value(cert["a"].clone()).unwrap();
            let b: SymTensor = serde_json::from_value(cert["b"].clone()).unwrap();
            let (l, rr) = leibniz_sides(&op, &a, &b);
            assert_ne!(l, rr);
        }
    }
}
