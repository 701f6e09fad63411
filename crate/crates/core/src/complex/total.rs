//! The bigraded Spencer complex `C^p ⊗ Sym^q(g)` and its total complex.
//!
//! Cell `(p, q)` has basis `e_a ⊗ x_b` indexed `a * dim Sym^q + b`. `Tot^n`
//! is the direct sum of the cells with `p + q = n`, ordered by `p`. The total
//! differential is `d ⊗ 1` into `(p+1, q)` plus `(−1)^p (1 ⊗ M_q)` into
//! `(p, q+1)`; cells stop at `q = Q`, so the vertical map out of `q = Q` is
//! dropped.
//!
//! The diagonal cell `(k, k)` carries `C^k ⊗ Sym^k` and sits in `Tot^{2k}`;
//! `C^k ⊗ K^k(λ)` inside it is the degenerate subspace. Checks on that
//! subspace use `T^{2k}` and `T^{2k−1}`.

use std::borrow::Cow;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CochainComplex;
use crate::error::{Error, Result};
use crate::lie::unit_vector;
use crate::linalg::{
    format_vector, in_column_space, is_zero_vector, kernel_basis, rank_bareiss, rref, MatrixQ,
    Rational,
};
use crate::spencer::{KernelSpace, ModeFlags, SpencerOperator};
use crate::sym::{sym_dim, SymTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct BigradedSpencer {
    complex: CochainComplex,
    q_max: usize,
    n_g: usize,
    modes: ModeFlags,
    /// `M_q` for `q < Q`.
    operators: Vec<Arc<MatrixQ>>,
    /// `K^q(λ)` for `q ≤ Q`.
    kernels: Vec<KernelSpace>,
    layout: Vec<Vec<Cell>>,
    /// `T^n : Tot^n → Tot^{n+1}` for `n ≤ N + Q`.
    differentials: Vec<MatrixQ>,
}

pub fn build_total(
    cx: &CochainComplex,
    op: &SpencerOperator,
    q_max: usize,
) -> Result<BigradedSpencer> {
    BigradedSpencer::new(cx, op, q_max)
}

impl BigradedSpencer {
    pub fn new(cx: &CochainComplex, op: &SpencerOperator, q_max: usize) -> Result<Self> {
        if q_max == 0 {
            return Err(Error::Precondition("total complex needs Q >= 1".into()));
        }
        let n_g = op.dim();
        let top = cx.top_degree();
        let mut layout = Vec::with_capacity(top + q_max + 1);
        for n in 0..=top + q_max {
            let mut offset = 0;
            let mut cells = Vec::new();
            for p in 0..=top.min(n) {
                let q = n - p;
                if q > q_max {
                    continue;
                }
                let len = cx.dim(p) * sym_dim(n_g, q);
                cells.push(Cell { p, q, offset, len });
                offset += len;
            }
            layout.push(cells);
        }
        let operators = (0..q_max).map(|q| op.assemble_matrix(q)).collect();
        let kernels = (0..=q_max).map(|q| op.kernel(q)).collect::<Result<_>>()?;
        let mut tot = BigradedSpencer {
            complex: cx.clone(),
            q_max,
            n_g,
            modes: op.modes(),
            operators,
            kernels,
            layout,
            differentials: Vec::new(),
        };
        tot.differentials = (0..=top + q_max)
            .map(|n| tot.assemble_differential(n))
            .collect();
        Ok(tot)
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn modes(&self) -> ModeFlags {
        self.modes
    }

    pub fn max_degree(&self) -> usize {
        self.complex.top_degree() + self.q_max
    }

    pub fn cells(&self, n: usize) -> &[Cell] {
        self.layout.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn cell(&self, p: usize, q: usize) -> Option<Cell> {
        self.cells(p + q).iter().copied().find(|c| c.p == p)
    }

    pub fn tot_dim(&self, n: usize) -> usize {
        self.cells(n).iter().map(|c| c.len).sum()
    }

    pub fn tot_dims(&self) -> Vec<usize> {
        (0..=self.max_degree()).map(|n| self.tot_dim(n)).collect()
    }

    /// `T^n`; past the top degree this is the zero map between zero spaces.
    pub fn differential(&self, n: usize) -> Cow<'_, MatrixQ> {
        match self.differentials.get(n) {
            Some(t) => Cow::Borrowed(t),
            None => Cow::Owned(MatrixQ::zeros(self.tot_dim(n + 1), self.tot_dim(n))),
        }
    }

    pub fn kernel(&self, q: usize) -> &KernelSpace {
        &self.kernels[q]
    }

    fn assemble_differential(&self, n: usize) -> MatrixQ {
        let mut t = MatrixQ::zeros(self.tot_dim(n + 1), self.tot_dim(n));
        for cell in self.cells(n) {
            let s = sym_dim(self.n_g, cell.q);
            if let Some(target) = self.cell(cell.p + 1, cell.q) {
                let d = self.complex.differential(cell.p);
                for a in 0..self.complex.dim(cell.p) {
                    for a2 in 0..self.complex.dim(cell.p + 1) {
                        let x = d.get(a2, a);
                        if x.is_zero() {
                            continue;
                        }
                        for b in 0..s {
                            t.set(
                                target.offset + a2 * s + b,
                                cell.offset + a * s + b,
                                x.clone(),
                            );
                        }
                    }
                }
            }
            if let Some(target) = self.cell(cell.p, cell.q + 1) {
                let m = &self.operators[cell.q];
                let s2 = sym_dim(self.n_g, cell.q + 1);
                let negate = cell.p % 2 == 1;
                for a in 0..self.complex.dim(cell.p) {
                    for b in 0..s {
                        for b2 in 0..s2 {
                            let x = m.get(b2, b);
                            if x.is_zero() {
                                continue;
                            }
                            let v = if negate { -x } else { x.clone() };
                            t.set(target.offset + a * s2 + b2, cell.offset + a * s + b, v);
                        }
                    }
                }
            }
        }
        t
    }

    /// Places `form ⊗ tensor` into cell `(p, q)` of `Tot^{p+q}`.
    pub fn embed(
        &self,
        p: usize,
        q: usize,
        form: &[Rational],
        tensor: &[Rational],
    ) -> Result<Vec<Rational>> {
        let cell = self
            .cell(p, q)
            .ok_or_else(|| Error::Precondition(format!("no cell ({p}, {q})")))?;
        let s = sym_dim(self.n_g, q);
        if form.len() != self.complex.dim(p) || tensor.len() != s {
            return Err(Error::DimensionMismatch {
                expected: cell.len,
                got: form.len() * tensor.len(),
            });
        }
        let mut v = vec![Rational::zero(); self.tot_dim(p + q)];
        for (a, fa) in form.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, tb) in tensor.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                v[cell.offset + a * s + b] = fa * tb;
            }
        }
        Ok(v)
    }

    /// Columns `e_a ⊗ s_j` spanning `C^p ⊗ K^q(λ)` inside `Tot^{p+q}`,
    /// ordered `a * dim K^q + j`. Empty when the cell does not exist.
    pub fn kernel_cell_basis(&self, p: usize, q: usize) -> MatrixQ {
        let n = p + q;
        if self.cell(p, q).is_none() {
            return MatrixQ::zeros(self.tot_dim(n), 0);
        }
        let dim_p = self.complex.dim(p);
        let mut cols = Vec::new();
        for a in 0..dim_p {
            for s in &self.kernels[q].vectors {
                cols.push(
                    self.embed(p, q, &unit_vector(dim_p, a), s)
                        .expect("cell exists"),
                );
            }
        }
        MatrixQ::from_columns(&cols, self.tot_dim(n)).expect("embedded length")
    }

    fn nonzero_cells(&self, n: usize, v: &[Rational]) -> Vec<(usize, usize)> {
        self.cells(n)
            .iter()
            .filter(|c| !is_zero_vector(&v[c.offset..c.offset + c.len]))
            .map(|c| (c.p, c.q))
            .collect()
    }

    /// Compares `T^{n+1} T^n` with the blocks `1 ⊗ (M_{q+1} M_q)` into `(p, q+2)`.
    /// A mismatch means the cross terms failed to cancel, which is a bug.
    pub fn d_squared_block_check(&self) -> Result<ResidualReport> {
        let mut grades = Vec::new();
        for n in 0..self.max_degree() {
            let residual = &self.differentials[n + 1] * &self.differentials[n];
            let mut expected = MatrixQ::zeros(self.tot_dim(n + 2), self.tot_dim(n));
            let mut blocks = Vec::new();
            for cell in self.cells(n) {
                let Some(target) = self.cell(cell.p, cell.q + 2) else {
                    continue;
                };
                let prod = &*self.operators[cell.q + 1] * &*self.operators[cell.q];
                let (s, s2) = (sym_dim(self.n_g, cell.q), sym_dim(self.n_g, cell.q + 2));
                for a in 0..self.complex.dim(cell.p) {
                    for b in 0..s {
                        for b2 in 0..s2 {
                            let x = prod.get(b2, b);
                            if !x.is_zero() {
                                expected.set(
                                    target.offset + a * s2 + b2,
                                    cell.offset + a * s + b,
                                    x.clone(),
                                );
                            }
                        }
                    }
                }
                blocks.push(ResidualBlock {
                    p: cell.p,
                    q: cell.q,
                    target: (cell.p, cell.q + 2),
                    zero: prod.is_zero() || self.complex.dim(cell.p) == 0,
                });
            }
            if residual != expected {
                return Err(Error::Inconsistency(format!(
                    "T^{}·T^{n} differs from the assembled 1⊗(M_(q+1)·M_q) blocks",
                    n + 1
                )));
            }
            grades.push(ResidualGrade {
                n,
                residual_zero: residual.is_zero(),
                blocks,
            });
        }
        let all_zero = grades.iter().all(|g| g.residual_zero);
        Ok(ResidualReport {
            mode: self.modes,
            cancellation_verified: true,
            all_zero,
            grades,
        })
    }

    /// `dim H^n(Tot)` for every `n`; refuses when `T² ≠ 0`.
    pub fn total_cohomology_dims(&self) -> Result<Vec<usize>> {
        let check = self.d_squared_block_check()?;
        if !check.all_zero {
            return Err(Error::Precondition(
                "total differential does not square to zero; cohomology undefined".into(),
            ));
        }
        let mut ranks = Vec::with_capacity(self.differentials.len());
        for (n, t) in self.differentials.iter().enumerate() {
            let r = rref(t).rank;
            if r != rank_bareiss(t) {
                return Err(Error::Inconsistency(format!("rank of T^{n} disagrees")));
            }
            ranks.push(r);
        }
        let dims: Vec<usize> = (0..=self.max_degree())
            .map(|n| {
                let below = if n == 0 { 0 } else { ranks[n - 1] };
                self.tot_dim(n) - ranks[n] - below
            })
            .collect();
        let euler_h: i64 = alternating(&dims);
        let euler_c: i64 = alternating(&self.tot_dims());
        if euler_h != euler_c {
            return Err(Error::Inconsistency(format!(
                "Euler characteristic mismatch: {euler_h} vs {euler_c}"
            )));
        }
        Ok(dims)
    }

    /// Cell `(k, k)` needs `k ≤ Q`. Degrees above `N` are allowed and give
    /// zero spaces.
    fn require_degree(&self, k: usize) -> Result<()> {
        if k > self.q_max {
            return Err(Error::Precondition(format!(
                "degree {k} exceeds Q = {}",
                self.q_max
            )));
        }
        Ok(())
    }

    /// `Z_deg^k` spanned by `z_i ⊗ s_j`, each checked to be a `T`-cocycle.
    pub fn degenerate_cocycles(&self, k: usize) -> Result<DegenerateCocycleSpace> {
        self.require_degree(k)?;
        let cocycles = self.complex.cocycle_basis(k);
        let kernel = &self.kernels[k];
        let t = self.differential(2 * k);
        let mut basis = Vec::new();
        let mut columns = Vec::new();
        for z in &cocycles {
            for (s, st) in kernel.vectors.iter().zip(&kernel.basis) {
                let v = self.embed(k, k, z, s)?;
                if !is_zero_vector(&t.mul_vec(&v)?) {
                    return Err(Error::Inconsistency(format!(
                        "z ⊗ s with dz = 0 and s in K^{k} is not a cocycle"
                    )));
                }
                basis.push(CocycleElement {
                    form: z.clone(),
                    tensor: st.clone(),
                });
                columns.push(v);
            }
        }
        let embedded = MatrixQ::from_columns(&columns, self.tot_dim(2 * k))?;
        Ok(DegenerateCocycleSpace {
            grade: k,
            dim: basis.len(),
            de_rham_cocycle_dim: cocycles.len(),
            kernel_dim: kernel.dim,
            basis,
            embedded,
        })
    }

    /// `dim (ker T^{2k} ∩ C^k ⊗ K^k)` from `dim U + dim V − rank [U | V]`.
    pub fn brute_force_cocycle_dim(&self, k: usize) -> Result<usize> {
        self.require_degree(k)?;
        let n = self.tot_dim(2 * k);
        let u = MatrixQ::from_columns(&kernel_basis(&self.differential(2 * k)), n)?;
        let v = self.kernel_cell_basis(k, k);
        let (du, dv) = (rref(&u).rank, rref(&v).rank);
        let stacked = rref(&u.hstack(&v)?).rank;
        Ok(du + dv - stacked)
    }

    /// Checks `T(ω ⊗ s) = dω ⊗ s` on every basis element of `C^k ⊗ K^k`.
    pub fn verify_degeneration(&self, k: usize) -> Result<DegenerationReport> {
        self.require_degree(k)?;
        if k >= self.q_max {
            return Err(Error::Precondition(format!(
                "degree {k} needs Q > {k} so the vertical component is present"
            )));
        }
        let kernel = &self.kernels[k];
        let dim_k = self.complex.dim(k);
        let d = self.complex.differential(k);
        let mut checked = 0;
        for a in 0..dim_k {
            let omega = unit_vector(dim_k, a);
            let d_omega = d.mul_vec(&omega)?;
            for s in &kernel.vectors {
                let image = self
                    .differential(2 * k)
                    .mul_vec(&self.embed(k, k, &omega, s)?)?;
                let expected = if self.cell(k + 1, k).is_some() {
                    self.embed(k + 1, k, &d_omega, s)?
                } else {
                    vec![Rational::zero(); self.tot_dim(2 * k + 1)]
                };
                if image != expected {
                    return Err(Error::Inconsistency(format!(
                        "D(ω⊗s) != dω⊗s for ω = e_{} and s in K^{k}",
                        a + 1
                    )));
                }
                checked += 1;
            }
        }
        Ok(DegenerationReport {
            k,
            mode: self.modes,
            checked,
            holds: true,
        })
    }

    /// Does `D` map `C^k ⊗ K^k` into `C^{k+1} ⊗ K^{k+1}`? The image lies in
    /// `Tot^{2k+1}` while the target lies in `Tot^{2k+2}`, so containment
    /// holds exactly when the image vanishes.
    pub fn subcomplex_check(&self, k: usize) -> Result<SubcomplexReport> {
        self.require_degree(k)?;
        let dim_k = self.complex.dim(k);
        let kernel = &self.kernels[k];
        let mut images = Vec::new();
        let mut witness = None;
        for a in 0..dim_k {
            let omega = unit_vector(dim_k, a);
            for (s, st) in kernel.vectors.iter().zip(&kernel.basis) {
                let image = self
                    .differential(2 * k)
                    .mul_vec(&self.embed(k, k, &omega, s)?)?;
                if witness.is_none() && !is_zero_vector(&image) {
                    witness = Some(SubcomplexWitness {
                        form: format_vector(&omega),
                        tensor: st.clone(),
                        image_bidegrees: self.nonzero_cells(k + 1, &image),
                        image: format_vector(&image),
                    });
                }
                images.push(image);
            }
        }
        let image_dim = rref(&MatrixQ::from_columns(&images, self.tot_dim(2 * k + 1))?).rank;
        Ok(SubcomplexReport {
            k,
            mode: self.modes,
            source_dim: images.len(),
            image_dim,
            contained: witness.is_none(),
            witness,
        })
    }

    /// Recomputes a witness image and confirms by elimination that it lies
    /// outside `C^{k+1} ⊗ K^{k+1}`, both placed in `⊕_n Tot^n`.
    pub fn verify_witness(&self, k: usize, w: &SubcomplexWitness) -> Result<bool> {
        let form = w
            .form
            .iter()
            .map(|t| crate::linalg::parse_rational(t))
            .collect::<Result<Vec<_>>>()?;
        let tensor = w.tensor.to_vector(self.n_g);
        let image = self
            .differential(2 * k)
            .mul_vec(&self.embed(k, k, &form, &tensor)?)?;
        if format_vector(&image) != w.image {
            return Ok(false);
        }
        let mut offsets = vec![0];
        for n in 0..=self.max_degree() {
            offsets.push(offsets[n] + self.tot_dim(n));
        }
        let total = *offsets.last().expect("nonempty");
        let place = |n: usize, v: &[Rational]| {
            let mut out = vec![Rational::zero(); total];
            if let Some(&at) = offsets.get(n) {
                out[at..at + v.len()].clone_from_slice(v);
            }
            out
        };
        let target: Vec<Vec<Rational>> = self
            .kernel_cell_basis(k + 1, k + 1)
            .columns()
            .iter()
            .map(|c| place(2 * k + 2, c))
            .collect();
        let target = MatrixQ::from_columns(&target, total)?;
        Ok(!in_column_space(&target, &place(2 * k + 1, &image))?)
    }

    /// `π(ω ⊗ s) = ω` on `Z_deg^k`: surjectivity onto `ker d^k`, plus a sampled
    /// check that degenerate coboundaries project into `im d^{k−1}`.
    pub fn project(&self, k: usize, seed: u64, samples: usize) -> Result<ProjectionReport> {
        let space = self.degenerate_cocycles(k)?;
        let projected: Vec<Vec<String>> =
            space.basis.iter().map(|e| format_vector(&e.form)).collect();
        let cocycles = self.complex.cocycle_basis(k);
        let kernel = &self.kernels[k];
        let surjectivity = if kernel.dim == 0 {
            if cocycles.is_empty() {
                Surjectivity::Vacuous
            } else {
                Surjectivity::Fails
            }
        } else {
            let s0 = &kernel.vectors[0];
            for z in &cocycles {
                let v = self.embed(k, k, z, s0)?;
                if !is_zero_vector(&self.differential(2 * k).mul_vec(&v)?) {
                    return Err(Error::Inconsistency("z ⊗ s0 is not a cocycle".into()));
                }
            }
            Surjectivity::Surjective
        };
        let cohomology = self.coboundary_projection_check(k, seed, samples)?;
        Ok(ProjectionReport {
            k,
            mode: self.modes,
            de_rham_cocycle_dim: cocycles.len(),
            kernel_dim: kernel.dim,
            redundancy: kernel.dim,
            projected,
            surjectivity,
            cohomology,
        })
    }

    fn coboundary_projection_check(
        &self,
        k: usize,
        seed: u64,
        samples: usize,
    ) -> Result<CohomologyCheck> {
        let mut check = CohomologyCheck {
            samples: 0,
            passed: 0,
            failed: 0,
            coboundary_space_dim: 0,
            witness: None,
        };
        if k == 0 {
            return Ok(check);
        }
        let t = self.differential(2 * k - 1);
        let v = self.kernel_cell_basis(k, k);
        // [T | −V] (x, y) = 0  ⇔  T x = V y.
        let solutions = kernel_basis(&t.hstack(&-&v)?);
        let split = t.cols();
        let ys: Vec<Vec<Rational>> = solutions
            .iter()
            .map(|s| s[split..].to_vec())
            .filter(|y| !is_zero_vector(y))
            .collect();
        check.coboundary_space_dim = rref(&MatrixQ::from_columns(&ys, v.cols())?).rank;
        if ys.is_empty() {
            return Ok(check);
        }
        let d_prev = self.complex.differential(k - 1);
        let dim_k = self.complex.dim(k);
        let kdim = self.kernels[k].dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sample in 0..samples {
            let mut y = vec![Rational::zero(); v.cols()];
            for basis_y in &ys {
                let c = Rational::from_integer(rng.gen_range(-3i64..=3).into());
                for (acc, x) in y.iter_mut().zip(basis_y) {
                    *acc += x * &c;
                }
            }
            check.samples += 1;
            let mut ok = true;
            for j in 0..kdim {
                let omega: Vec<Rational> = (0..dim_k).map(|a| y[a * kdim + j].clone()).collect();
                if !in_column_space(&d_prev, &omega)? {
                    ok = false;
                    if check.witness.is_none() {
                        check.witness = Some(CoboundaryWitness {
                            sample,
                            kernel_index: j,
                            form: format_vector(&omega),
                        });
                    }
                }
            }
            if ok {
                check.passed += 1;
            } else {
                check.failed += 1;
            }
        }
        Ok(check)
    }
}

fn alternating(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Free-standing variants over a total complex with `Q = k + 1`, which is the
/// smallest truncation that keeps every map out of cell `(k, k)`.
pub fn degenerate_cocycles(
    cx: &CochainComplex,
    op: &SpencerOperator,
    k: usize,
) -> Result<DegenerateCocycleSpace> {
    BigradedSpencer::new(cx, op, k + 1)?.degenerate_cocycles(k)
}

pub fn verify_degeneration(
    cx: &CochainComplex,
    op: &SpencerOperator,
    k: usize,
) -> Result<DegenerationReport> {
    BigradedSpencer::new(cx, op, k + 1)?.verify_degeneration(k)
}

pub fn subcomplex_check(
    cx: &CochainComplex,
    op: &SpencerOperator,
    k: usize,
) -> Result<SubcomplexReport> {
    BigradedSpencer::new(cx, op, k + 1)?.subcomplex_check(k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualBlock {
    pub p: usize,
    pub q: usize,
    pub target: (usize, usize),
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualGrade {
    pub n: usize,
    pub residual_zero: bool,
    pub blocks: Vec<ResidualBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub mode: ModeFlags,
    pub cancellation_verified: bool,
    pub all_zero: bool,
    pub grades: Vec<ResidualGrade>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleElement {
    #[serde(with = "crate::linalg::serde_rational::vec")]
    pub form: Vec<Rational>,
    pub tensor: SymTensor,
}

/// `Z_deg^k ≅ Z^k ⊗ K^k(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateCocycleSpace {
    pub grade: usize,
    pub dim: usize,
    pub de_rham_cocycle_dim: usize,
    pub kernel_dim: usize,
    pub basis: Vec<CocycleElement>,
    /// Basis as columns in `Tot^k`.
    pub embedded: MatrixQ,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerationReport {
    pub k: usize,
    pub mode: ModeFlags,
    pub checked: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubcomplexWitness {
    pub form: Vec<String>,
    pub tensor: SymTensor,
    pub image: Vec<String>,
    pub image_bidegrees: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubcomplexReport {
    pub k: usize,
    pub mode: ModeFlags,
    pub source_dim: usize,
    pub image_dim: usize,
    pub contained: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubcomplexWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Surjectivity {
    Surjective,
    /// `K^k = 0` but `ker d^k ≠ 0`.
    Fails,
    /// `K^k = 0` and `ker d^k = 0`.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoboundaryWitness {
    pub sample: usize,
    pub kernel_index: usize,
    pub form: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohomologyCheck {
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    /// Dimension of the degenerate part reachable as `T^{k−1}` images.
    pub coboundary_space_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CoboundaryWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub k: usize,
    pub mode: ModeFlags,
    pub de_rham_cocycle_dim: usize,
    pub kernel_dim: usize,
    pub redundancy: usize,
    pub projected: Vec<Vec<String>>,
    pub surjectivity: Surjectivity,
    pub cohomology: CohomologyCheck,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{DualFunctional, LieAlgebra};
    use crate::linalg::rat;
    use crate::spencer::{LeibnizMode, PairingMode};

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

    fn e3() -> SpencerOperator {
        su2_op(DualFunctional::basis(3, 2), LeibnizMode::Signed)
    }

    fn zero() -> SpencerOperator {
        su2_op(DualFunctional::zero(3), LeibnizMode::Signed)
    }

    #[test]
    fn total_dims() {
        let t = build_total(&CochainComplex::point(), &e3(), 2).unwrap();
        assert_eq!(t.tot_dims(), vec![1, 3, 6]);
        assert!(t.cells(2).iter().all(|c| c.p == 0));
        let t = build_total(&CochainComplex::circle(), &e3(), 1).unwrap();
        assert_eq!(t.tot_dims(), vec![1, 4, 3]);
        assert_eq!(
            t.cells(1).iter().map(|c| (c.p, c.q)).collect::<Vec<_>>(),
            vec![(0, 1), (1, 0)]
        );
        assert!(build_total(&CochainComplex::circle(), &e3(), 0).is_err());
    }

    #[test]
    fn total_dim_is_sum_over_cells() {
        let cx = CochainComplex::with_zero_differentials(vec![2, 3, 1]).unwrap();
        let t = build_total(&cx, &e3(), 3).unwrap();
        for n in 0..=t.max_degree() {
            let direct: usize = (0..=n)
                .filter(|&p| p <= 2 && n - p <= 3)
                .map(|p| cx.dim(p) * sym_dim(3, n - p))
                .sum();
            assert_eq!(t.tot_dim(n), direct);
        }
    }

    #[test]
    fn zero_lambda_squares_to_zero_and_counts_cohomology() {
        let t = build_total(&CochainComplex::point(), &zero(), 2).unwrap();
        assert!(t.d_squared_block_check().unwrap().all_zero);
        assert_eq!(t.total_cohomology_dims().unwrap(), vec![1, 3, 6]);
        let t = build_total(&CochainComplex::circle(), &zero(), 1).unwrap();
        assert_eq!(t.total_cohomology_dims().unwrap(), vec![1, 4, 3]);
    }

    #[test]
    fn q_one_has_no_residual() {
        for cx in [CochainComplex::circle(), CochainComplex::interval()] {
            let r = build_total(&cx, &e3(), 1)
                .unwrap()
                .d_squared_block_check()
                .unwrap();
            assert!(r.all_zero);
            assert!(r
                .grades
                .iter()
                .all(|g| g.blocks.iter().all(|b| b.target.1 == 2)));
        }
    }

    #[test]
    fn residual_appears_where_delta_squared_is_nonzero() {
        let t = build_total(&CochainComplex::circle(), &e3(), 3).unwrap();
        let r = t.d_squared_block_check().unwrap();
        assert!(!r.all_zero);
        let nonzero: Vec<_> = r
            .grades
            .iter()
            .flat_map(|g| g.blocks.iter().filter(|b| !b.zero).map(|b| (b.p, b.q)))
            .collect();
        assert_eq!(nonzero, vec![(0, 1), (1, 1)]);
        assert!(matches!(
            t.total_cohomology_dims(),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cocycles_circle_k0() {
        let s = degenerate_cocycles(&CochainComplex::circle(), &e3(), 0).unwrap();
        assert_eq!(s.dim, 1);
        let s = degenerate_cocycles(&CochainComplex::circle(), &e3(), 1).unwrap();
        assert_eq!(s.dim, 0);
        let s = degenerate_cocycles(&CochainComplex::circle(), &zero(), 1).unwrap();
        assert_eq!(s.dim, 3);
    }

    #[test]
    fn degeneration_simplification_on_unit() {
        let r = verify_degeneration(&CochainComplex::circle(), &e3(), 0).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked, 1);
        let r = verify_degeneration(&CochainComplex::circle(), &zero(), 1).unwrap();
        assert_eq!(r.checked, 3);
        let t = build_total(&CochainComplex::circle(), &e3(), 1).unwrap();
        assert!(matches!(
            t.verify_degeneration(1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn interval_witness() {
        let cx = CochainComplex::interval();
        let r = subcomplex_check(&cx, &e3(), 0).unwrap();
        assert!(!r.contained);
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.image_bidegrees, vec![(1, 0)]);
        assert_eq!(w.tensor, SymTensor::unit());
        let t = build_total(&cx, &e3(), 1).unwrap();
        assert!(t.verify_witness(0, w).unwrap());
        let mut forged = w.clone();
        forged.image[0] = "5".into();
        assert!(!t.verify_witness(0, &forged).unwrap());

        let r = subcomplex_check(&CochainComplex::circle(), &e3(), 0).unwrap();
        assert!(r.contained);
        assert_eq!(r.image_dim, 0);
    }

    #[test]
    fn projection_surjectivity() {
        let t = build_total(&CochainComplex::circle(), &zero(), 2).unwrap();
        let p = t.project(1, 0, 4).unwrap();
        assert_eq!(p.surjectivity, Surjectivity::Surjective);
        assert_eq!(p.redundancy, 3);
        let t = build_total(&CochainComplex::circle(), &e3(), 2).unwrap();
        let p = t.project(1, 0, 4).unwrap();
        assert_eq!(p.surjectivity, Surjectivity::Fails);
        let t = build_total(&CochainComplex::interval(), &e3(), 2).unwrap();
        assert_eq!(
            t.project(1, 0, 4).unwrap().surjectivity,
            Surjectivity::Fails
        );
        let cx = CochainComplex::with_zero_differentials(vec![1, 0]).unwrap();
        let t = build_total(&cx, &e3(), 2).unwrap();
        assert_eq!(
            t.project(1, 0, 4).unwrap().surjectivity,
            Surjectivity::Vacuous
        );
    }

    #[test]
    fn coboundaries_on_interval_project_to_exact_forms() {
        let t = build_total(&CochainComplex::interval(), &zero(), 2).unwrap();
        let p = t.project(1, 7, 6).unwrap();
        assert_eq!(p.cohomology.samples, 6);
        assert_eq!(p.cohomology.failed, 0);
        assert!(p.cohomology.coboundary_space_dim > 0);
    }

    #[test]
    fn brute_force_matches_basis_count() {
        for cx in [
            CochainComplex::point(),
            CochainComplex::circle(),
            CochainComplex::interval(),
        ] {
            for op in [e3(), zero()] {
                let t = build_total(&cx, &op, 3).unwrap();
                for k in 0..=2 {
                    let space = t.degenerate_cocycles(k).unwrap();
                    assert_eq!(space.dim, space.de_rham_cocycle_dim * space.kernel_dim);
                    assert_eq!(t.brute_force_cocycle_dim(k).unwrap(), space.dim);
                }
            }
        }
    }

    #[test]
    fn mirror_spans_same_subspace() {
        let lambda = DualFunctional::new(vec![rat(1), rat(-2), rat(3)]);
        let op = su2_op(lambda.clone(), LeibnizMode::Signed);
        let mirror = op.with_lambda(lambda.negated()).unwrap();
        let cx = CochainComplex::circle();
        for k in 0..=1 {
            let a = degenerate_cocycles(&cx, &op, k).unwrap();
            let b = degenerate_cocycles(&cx, &mirror, k).unwrap();
            assert_eq!(
                crate::linalg::column_space_canonical(&a.embedded),
                crate::linalg::column_space_canonical(&b.embedded)
            );
        }
    }

    #[test]
    fn embed_places_tensor_products() {
        let t = build_total(&CochainComplex::circle(), &e3(), 1).unwrap();
        let v = t
            .embed(0, 1, &[rat(2)], &[rat(1), rat(0), rat(-1)])
            .unwrap();
        assert_eq!(v, vec![rat(2), rat(0), rat(-2), rat(0)]);
    }
}
