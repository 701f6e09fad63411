//! Seeded random rationals, covectors and tensors for audits.

use rand::Rng;

use crate::lie::DualFunctional;
use crate::linalg::{ratio, Rational};
use crate::sym::{sym_dim, SymTensor};

/// Default seed when `SPENCER_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0;

/// Reads `SPENCER_SEED`, falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("SPENCER_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Numerator in `[-5, 5]`, denominator in `[1, 4]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// A random covector, never zero.
pub fn random_lambda<R: Rng>(rng: &mut R, n: usize) -> DualFunctional {
    loop {
        let l = DualFunctional::new((0..n).map(|_| random_rational(rng)).collect());
        if !l.is_zero() {
            return l;
        }
    }
}

/// Random homogeneous tensor; each coefficient is zero about half the time.
pub fn random_tensor<R: Rng>(rng: &mut R, n: usize, grade: usize) -> SymTensor {
    let v: Vec<Rational> = (0..sym_dim(n, grade))
        .map(|_| {
            if rng.gen_bool(0.5) {
                ratio(0, 1)
            } else {
                random_rational(rng)
            }
        })
        .collect();
    SymTensor::from_vector(n, grade, &v).expect("length matches sym_dim")
}
