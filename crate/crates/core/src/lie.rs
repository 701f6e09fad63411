//! Lie algebras given by rational structure constants, and covectors on them.
//!
//! Internally basis indices are 0-based; files and diagnostics use 1-based
//! indices.
//!
//! # Built-in bases
//!
//! `su2` uses the basis with `[e_i, e_j] = ε_ijk e_k`.
//!
//! `su3` uses a compact real form assembled from the elementary matrices
//! `E_ab` of `gl(3)` (the Chevalley generators and their transposes), so that
//! every structure constant is an integer:
//!
//! | index | element                  |
//! |-------|--------------------------|
//! | 1     | `E_12 - E_21`            |
//! | 2     | `E_13 - E_31`            |
//! | 3     | `E_23 - E_32`            |
//! | 4     | `i (E_12 + E_21)`        |
//! | 5     | `i (E_13 + E_31)`        |
//! | 6     | `i (E_23 + E_32)`        |
//! | 7     | `i (E_11 - E_22)`        |
//! | 8     | `i (E_22 - E_33)`        |
//!
//! The Gell-Mann basis would introduce `√3`; kernel dimensions do not depend
//! on the basis.

use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, format_rational, format_vector, kernel_basis, parse_rational, rank_bareiss, rat, MatrixQ,
    Rational,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    /// `c[i][j][k]`, flattened as `(i * dim + j) * dim + k`.
    structure: Vec<Rational>,
}

impl LieAlgebra {
    /// The abelian algebra of the given dimension (all constants zero).
    pub fn abelian(name: impl Into<String>, dim: usize) -> Self {
        LieAlgebra {
            name: name.into(),
            dim,
            structure: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[self.idx(i, j, k)]
    }

    /// Sets a single entry; does not touch the antisymmetric partner.
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let at = self.idx(i, j, k);
        self.structure[at] = value;
    }

    /// Sets `c[i][j][k] = value` and `c[j][i][k] = -value`.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        self.set_constant(j, i, k, -value.clone());
        self.set_constant(i, j, k, value);
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let start = self.idx(i, j, 0);
        self.structure[start..start + self.dim].to_vec()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += c * &w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad(e_i)`: column `j` is `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> MatrixQ {
        let cols: Vec<_> = (0..self.dim).map(|j| self.bracket_basis(i, j)).collect();
        MatrixQ::from_columns(&cols, self.dim).expect("square adjoint matrix")
    }

    /// `B[i][j] = Σ_{k,l} c[i][k][l] c[j][l][k]`, i.e. `tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> MatrixQ {
        let n = self.dim;
        let mut b = MatrixQ::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    for l in 0..n {
                        let a = self.constant(i, k, l);
                        if a.is_zero() {
                            continue;
                        }
                        let c = self.constant(j, l, k);
                        if !c.is_zero() {
                            acc += a * c;
                        }
                    }
                }
                b.set(i, j, acc);
            }
        }
        b
    }

    /// Basis of the center `{x : [x, e_i] = 0 for all i}`.
    pub fn center_basis(&self) -> Vec<Vec<Rational>> {
        let n = self.dim;
        // Row (i, k), column a: c[a][i][k].
        let mut stack = MatrixQ::zeros(n * n, n);
        for i in 0..n {
            for k in 0..n {
                for a in 0..n {
                    let c = self.constant(a, i, k);
                    if !c.is_zero() {
                        stack.set(i * n + k, a, c.clone());
                    }
                }
            }
        }
        kernel_basis(&stack)
    }

    pub fn validate(&self) -> AlgebraDiagnostics {
        let n = self.dim;
        let mut antisymmetry = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let s = self.constant(i, j, k) + self.constant(j, i, k);
                    if !s.is_zero() {
                        antisymmetry.push([i + 1, j + 1, k + 1]);
                    }
                }
            }
        }

        let mut jacobi = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let r = self.jacobiator(i, j, k);
                    if !linalg::is_zero_vector(&r) {
                        jacobi.push(JacobiResidual {
                            triple: [i + 1, j + 1, k + 1],
                            residual: format_vector(&r),
                        });
                    }
                }
            }
        }

        let center: Vec<Vec<String>> = self
            .center_basis()
            .iter()
            .map(|v| format_vector(v))
            .collect();
        let killing_rank = rank_bareiss(&self.killing_form());
        AlgebraDiagnostics {
            name: self.name.clone(),
            dimension: n,
            antisymmetry_violations: antisymmetry,
            jacobi_violations: jacobi,
            center_basis: center,
            killing_rank,
            killing_degenerate: killing_rank < n,
        }
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let e = |t: usize| unit_vector(self.dim, t);
        let term = |a: usize, b: usize, c: usize| {
            let inner = self.bracket(&e(b), &e(c)).expect("basis length");
            self.bracket(&e(a), &inner).expect("basis length")
        };
        let (x, y, z) = (term(i, j, k), term(j, k, i), term(k, i, j));
        x.iter()
            .zip(&y)
            .zip(&z)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "su2" | "su(2)" => Ok(su2()),
            "su3" | "su(3)" => Ok(su3()),
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        }
    }

    /// Parses the algebra JSON schema. Entries may list only one of each
    /// antisymmetric pair; a missing partner is filled in as the negation.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
        let n = file.dimension;
        if n == 0 {
            return Err(Error::Parse("algebra dimension must be positive".into()));
        }
        let mut alg = LieAlgebra::abelian(file.name, n);
        let mut given = vec![false; n * n * n];
        let mut entries = Vec::with_capacity(file.structure_constants.len());
        for e in &file.structure_constants {
            for (label, v) in [("i", e.i), ("j", e.j), ("k", e.k)] {
                if v == 0 || v > n {
                    return Err(Error::Parse(format!(
                        "structure constant index {label}={v} outside 1..={n}"
                    )));
                }
            }
            let (i, j, k) = (e.i - 1, e.j - 1, e.k - 1);
            let value = parse_rational(&e.value)?;
            let at = alg.idx(i, j, k);
            if given[at] {
                return Err(Error::Parse(format!(
                    "duplicate entry ({}, {}, {})",
                    e.i, e.j, e.k
                )));
            }
            given[at] = true;
            entries.push((i, j, k, value));
        }
        for (i, j, k, value) in &entries {
            alg.set_constant(*i, *j, *k, value.clone());
        }
        for (i, j, k, value) in entries {
            if !given[alg.idx(j, i, k)] {
                alg.set_constant(j, i, k, -value);
            }
        }
        Ok(alg)
    }

    /// Loads an algebra file. In strict mode any failed check rejects the file.
    pub fn load(path: impl AsRef<Path>, strict: bool) -> Result<(Self, AlgebraDiagnostics)> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&path, e))?;
        let alg = Self::from_json_str(&text)?;
        let diag = alg.validate();
        if strict && !diag.is_valid() {
            return Err(Error::InvalidAlgebra(diag.findings()));
        }
        Ok((alg, diag))
    }

    /// Writes only the `i < j` entries; the loader restores the partners.
    pub fn to_json_string(&self) -> String {
        let n = self.dim;
        let mut constants = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.constant(i, j, k);
                    let partner_ok = (c + self.constant(j, i, k)).is_zero();
                    let keep = if i < j { true } else { !partner_ok };
                    if keep && !c.is_zero() {
                        constants.push(ConstantEntry {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            value: format_rational(c),
                        });
                    }
                }
            }
        }
        let file = AlgebraFile {
            name: self.name.clone(),
            dimension: n,
            structure_constants: constants,
        };
        serde_json::to_string_pretty(&file).expect("algebra serializes")
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn su2() -> LieAlgebra {
    let mut g = LieAlgebra::abelian("su2", 3);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        g.set_bracket(i, j, k, rat(1));
    }
    g
}

/// 3x3 complex integer matrix as (real, imaginary) parts.
type CMat = ([[i64; 3]; 3], [[i64; 3]; 3]);

fn su3_basis() -> Vec<CMat> {
    let z = [[0i64; 3]; 3];
    let mut out = Vec::new();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut re = z;
        re[a][b] = 1;
        re[b][a] = -1;
        out.push((re, z));
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut im = z;
        im[a][b] = 1;
        im[b][a] = 1;
        out.push((z, im));
    }
    for (a, b) in [(0, 1), (1, 2)] {
        let mut im = z;
        im[a][a] = 1;
        im[b][b] = -1;
        out.push((z, im));
    }
    out
}

fn cmat_mul(x: &CMat, y: &CMat) -> CMat {
    let mut re = [[0i64; 3]; 3];
    let mut im = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                re[i][j] += x.0[i][l] * y.0[l][j] - x.1[i][l] * y.1[l][j];
                im[i][j] += x.0[i][l] * y.1[l][j] + x.1[i][l] * y.0[l][j];
            }
        }
    }
    (re, im)
}

/// Coordinates of an anti-Hermitian traceless matrix in the `su3` basis.
fn su3_coords(m: &CMat) -> [i64; 8] {
    let (re, im) = m;
    [
        re[0][1],
        re[0][2],
        re[1][2],
        im[0][1],
        im[0][2],
        im[1][2],
        im[0][0],
        im[0][0] + im[1][1],
    ]
}

fn su3() -> LieAlgebra {
    let basis = su3_basis();
    let mut g = LieAlgebra::abelian("su3", 8);
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let xy = cmat_mul(x, y);
            let yx = cmat_mul(y, x);
            let mut comm = xy;
            for r in 0..3 {
                for c in 0..3 {
                    comm.0[r][c] -= yx.0[r][c];
                    comm.1[r][c] -= yx.1[r][c];
                }
            }
            for (k, v) in su3_coords(&comm).into_iter().enumerate() {
                if v != 0 {
                    g.set_constant(i, j, k, rat(v));
                }
            }
        }
    }
    g
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    dimension: usize,
    structure_constants: Vec<ConstantEntry>,
}

#[derive(Serialize, Deserialize)]
struct ConstantEntry {
    i: usize,
    j: usize,
    k: usize,
    value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiResidual {
    pub triple: [usize; 3],
    pub residual: Vec<String>,
}

/// Findings of [`LieAlgebra::validate`]. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraDiagnostics {
    pub name: String,
    pub dimension: usize,
    pub antisymmetry_violations: Vec<[usize; 3]>,
    pub jacobi_violations: Vec<JacobiResidual>,
    pub center_basis: Vec<Vec<String>>,
    pub killing_rank: usize,
    pub killing_degenerate: bool,
}

impl AlgebraDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry_violations.is_empty()
            && self.jacobi_violations.is_empty()
            && self.center_basis.is_empty()
            && !self.killing_degenerate
    }

    pub fn findings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in &self.antisymmetry_violations {
            out.push(format!(
                "antisymmetry violated at ({}, {}, {})",
                t[0], t[1], t[2]
            ));
        }
        for r in &self.jacobi_violations {
            let t = r.triple;
            out.push(format!(
                "Jacobi identity fails on ({}, {}, {})",
                t[0], t[1], t[2]
            ));
        }
        if !self.center_basis.is_empty() {
            out.push(format!(
                "nontrivial center of dimension {}",
                self.center_basis.len()
            ));
        }
        if self.killing_degenerate {
            out.push(format!(
                "Killing form degenerate (rank {} < {})",
                self.killing_rank, self.dimension
            ));
        }
        out
    }
}

/// A covector in the dual basis `e^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualFunctional {
    #[serde(with = "linalg::serde_rational::vec")]
    pub components: Vec<Rational>,
}

impl DualFunctional {
    pub fn new(components: Vec<Rational>) -> Self {
        DualFunctional { components }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rational::zero(); n])
    }

    /// `e^i` (0-based `i`).
    pub fn basis(n: usize, i: usize) -> Self {
        Self::new(unit_vector(n, i))
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vector(&self.components)
    }

    pub fn pair(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: self.components.len(),
                got: x.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(x)
            .filter(|(l, _)| !l.is_zero())
            .map(|(l, a)| l * a)
            .sum())
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::new(self.components.iter().map(|x| x * c).collect())
    }

    pub fn negated(&self) -> Self {
        Self::new(self.components.iter().map(|x| -x).collect())
    }

    /// Reads the components as an element of `g` and pairs through the
    /// Killing form: the result is `x ↦ B(λ, x)`.
    pub fn killing_identified(&self, g: &LieAlgebra) -> Result<Self> {
        if self.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: self.dim(),
            });
        }
        let b = g.killing_form();
        Ok(Self::new(b.transpose().mul_vec(&self.components)?))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("lambda file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("lambda serializes")
    }
}
