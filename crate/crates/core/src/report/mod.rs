//! The analysis pipeline and its reports.
//!
//! Every report is built from ordered containers only, so serializing the
//! same inputs twice gives the same bytes. Claimed values are set beside
//! computed ones; disagreements become findings rather than errors.

mod manifest;
mod sweep;
mod table;

pub use manifest::{resolve_algebra, resolve_complex, Manifest};
pub use sweep::{sweep, GridSpec, Stratum, SweepReport, SweepRow};
pub use table::Table;

use serde::Serialize;

use crate::complex::{
    BigradedSpencer, CochainComplex, DegenerationReport, ProjectionReport, ResidualReport,
    SubcomplexReport, Surjectivity,
};
use crate::error::{Error, Result};
use crate::geometry::{
    degenerate_cohomology_dims, phi_image_dim, validate_manifold, ManifoldData, ManifoldDiagnostics,
};
use crate::lie::{AlgebraDiagnostics, DualFunctional, LieAlgebra};
use crate::linalg::{format_vector, rank_bareiss, ratio, rref};
use crate::spencer::{
    leibniz_audit, mirror_audit, nilpotency_audit, scaling_audit, AuditReport, ModeFlags,
    SpencerOperator,
};
use crate::sym::sym_dim;

/// Random trials for the Leibniz audit.
pub const LEIBNIZ_TRIALS: usize = 8;
/// Sampled coboundaries per degree in the projection check.
pub const PROJECTION_SAMPLES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tag {
    #[serde(rename = "PAPER")]
    Claimed,
    #[serde(rename = "DERIVED")]
    Derived,
    #[serde(rename = "TRIVIAL")]
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub quantity: String,
    pub claimed: usize,
    pub computed: usize,
    pub agrees: bool,
    pub tag: Tag,
    pub source: String,
    pub mode: ModeFlags,
}

impl Comparison {
    fn new(
        quantity: String,
        claimed: usize,
        computed: usize,
        tag: Tag,
        source: &str,
        mode: ModeFlags,
    ) -> Self {
        Comparison {
            quantity,
            claimed,
            computed,
            agrees: claimed == computed,
            tag,
            source: source.to_string(),
            mode,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelRow {
    pub k: usize,
    pub dim: usize,
    pub ambient_dim: usize,
    pub rank_rref: usize,
    pub rank_bareiss: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed: Option<usize>,
    pub mode: ModeFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelTable {
    pub algebra: String,
    pub lambda: Vec<String>,
    pub mode: ModeFlags,
    pub rows: Vec<KernelRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Audits {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotency: Option<AuditReport>,
    pub mirror: AuditReport,
    pub scaling: Vec<AuditReport>,
    pub leibniz: AuditReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeAnalysis {
    pub k: usize,
    pub degenerate_cocycle_dim: usize,
    pub brute_force_dim: usize,
    pub product_formula_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<DegenerationReport>,
    pub subcomplex: SubcomplexReport,
    pub projection: ProjectionReport,
    pub mode: ModeFlags,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexAnalysis {
    pub source: String,
    pub dims: Vec<usize>,
    pub cohomology_dims: Vec<usize>,
    pub q_max: usize,
    pub tot_dims: Vec<usize>,
    pub residual: ResidualReport,
    /// `None` when the total differential does not square to zero.
    pub total_cohomology_dims: Option<Vec<usize>>,
    pub degrees: Vec<DegreeAnalysis>,
    pub mode: ModeFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorAnalysis {
    pub kernel_dims: Vec<usize>,
    pub mirrored_kernel_dims: Vec<usize>,
    pub canonical_bases_equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate_cohomology_equal: Option<bool>,
    pub mode: ModeFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldAnalysis {
    pub name: String,
    pub betti: Vec<usize>,
    pub diagnostics: ManifoldDiagnostics,
    pub degenerate_cohomology_dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_image_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_ceiling: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_note: Option<String>,
    pub mode: ModeFlags,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub mode: ModeFlags,
    pub seed: u64,
    pub algebra_validation: AlgebraDiagnostics,
    pub lambda: Vec<String>,
    pub k_max: usize,
    pub kernels: KernelTable,
    pub audits: Audits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexAnalysis>,
    pub mirror: MirrorAnalysis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldAnalysis>,
    pub paper_comparisons: Vec<Comparison>,
    pub findings: Vec<String>,
}

impl AnalysisReport {
    pub fn has_findings(&self) -> bool {
        !self.findings.is_empty()
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        render_analysis(self)
    }
}

fn same_structure(a: &LieAlgebra, b: &LieAlgebra) -> bool {
    let n = a.dim();
    n == b.dim()
        && (0..n)
            .all(|i| (0..n).all(|j| (0..n).all(|k| a.constant(i, j, k) == b.constant(i, j, k))))
}

fn is_su2(g: &LieAlgebra) -> bool {
    same_structure(g, &LieAlgebra::builtin("su2").expect("builtin"))
}

/// The claimed `dim K^k`, where one exists for this algebra and covector.
pub fn claimed_kernel_dim(
    g: &LieAlgebra,
    lambda: &DualFunctional,
    k: usize,
) -> Option<(usize, &'static str)> {
    if lambda.is_zero() {
        Some((sym_dim(g.dim(), k), "complete degeneration at lambda = 0"))
    } else if is_su2(g) && k <= 1 {
        Some((1, "explicit su(2) kernel example, lambda != 0"))
    } else {
        None
    }
}

/// Per-grade kernel dimensions with both rank computations shown.
pub fn kernel_table(op: &SpencerOperator, k_max: usize) -> Result<KernelTable> {
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let kernel = op.kernel(k)?;
        let m = op.assemble_matrix(k);
        rows.push(KernelRow {
            k,
            dim: kernel.dim,
            ambient_dim: kernel.ambient_dim,
            rank_rref: rref(&m).rank,
            rank_bareiss: rank_bareiss(&m),
            claimed: claimed_kernel_dim(op.algebra(), op.lambda(), k).map(|c| c.0),
            mode: op.modes(),
        });
    }
    Ok(KernelTable {
        algebra: op.algebra().name().to_string(),
        lambda: format_vector(&op.lambda().components),
        mode: op.modes(),
        rows,
    })
}

/// Degenerate-subspace analysis over one cochain model with truncation `Q`.
pub fn complex_analysis(
    source: &str,
    cx: &CochainComplex,
    op: &SpencerOperator,
    q_max: usize,
    seed: u64,
) -> Result<ComplexAnalysis> {
    let tot = BigradedSpencer::new(cx, op, q_max)?;
    let residual = tot.d_squared_block_check()?;
    let total_cohomology_dims = if residual.all_zero {
        Some(tot.total_cohomology_dims()?)
    } else {
        None
    };
    let mut degrees = Vec::new();
    for k in 0..=cx.top_degree().min(q_max) {
        let space = tot.degenerate_cocycles(k)?;
        let brute = tot.brute_force_cocycle_dim(k)?;
        let degeneration = if k < q_max {
            Some(tot.verify_degeneration(k)?)
        } else {
            None
        };
        degrees.push(DegreeAnalysis {
            k,
            degenerate_cocycle_dim: space.dim,
            brute_force_dim: brute,
            product_formula_dim: space.de_rham_cocycle_dim * space.kernel_dim,
            degeneration,
            subcomplex: tot.subcomplex_check(k)?,
            projection: tot.project(k, seed, PROJECTION_SAMPLES)?,
            mode: op.modes(),
        });
    }
    Ok(ComplexAnalysis {
        source: source.to_string(),
        dims: cx.dims().to_vec(),
        cohomology_dims: cx.cohomology_dims(),
        q_max,
        tot_dims: tot.tot_dims(),
        residual,
        total_cohomology_dims,
        degrees,
        mode: op.modes(),
    })
}

fn run_audits(op: &SpencerOperator, k_max: usize, seed: u64) -> Result<Audits> {
    let nilpotency = if k_max >= 1 {
        Some(nilpotency_audit(op, k_max)?)
    } else {
        None
    };
    let scaling = [ratio(-1, 1), ratio(2, 1), ratio(1, 3)]
        .iter()
        .map(|c| scaling_audit(op, c, k_max))
        .collect::<Result<_>>()?;
    Ok(Audits {
        nilpotency,
        mirror: mirror_audit(op, k_max)?,
        scaling,
        leibniz: leibniz_audit(op, LEIBNIZ_TRIALS, seed)?,
    })
}

fn manifold_analysis(
    m: &ManifoldData,
    kdims: &[usize],
    mode: ModeFlags,
) -> Result<ManifoldAnalysis> {
    let degenerate = degenerate_cohomology_dims(m, kdims)?;
    let (phi, ceiling, note) = if m.real_dim != 4 {
        (
            None,
            None,
            Some("phi is defined on real 4-manifolds only".to_string()),
        )
    } else {
        match m.hodge_number(1, 1) {
            Some(h11) => (Some(phi_image_dim(m, kdims)?), Some(h11), None),
            None => (None, None, Some("no degree-2 Hodge data".to_string())),
        }
    };
    if let (Some(p), Some(c)) = (phi, ceiling) {
        if p > c {
            return Err(Error::Inconsistency(format!(
                "phi image {p} exceeds h^(1,1) = {c}"
            )));
        }
    }
    Ok(ManifoldAnalysis {
        name: m.name.clone(),
        betti: m.betti.clone(),
        diagnostics: validate_manifold(m),
        degenerate_cohomology_dims: degenerate,
        phi_image_dim: phi,
        phi_ceiling: ceiling,
        phi_note: note,
        mode,
    })
}

fn comparisons(
    op: &SpencerOperator,
    kernels: &KernelTable,
    complex: Option<&ComplexAnalysis>,
    manifold: Option<&ManifoldAnalysis>,
) -> Vec<Comparison> {
    let mode = op.modes();
    let g = op.algebra();
    let lambda = op.lambda();
    let mut out = Vec::new();
    for row in &kernels.rows {
        out.push(Comparison::new(
            format!("dim Sym^{}", row.k),
            sym_dim(g.dim(), row.k),
            row.ambient_dim,
            Tag::Trivial,
            "binomial count C(n+k-1, k)",
            mode,
        ));
        if let Some((claimed, source)) = claimed_kernel_dim(g, lambda, row.k) {
            out.push(Comparison::new(
                format!("dim K^{}", row.k),
                claimed,
                row.dim,
                Tag::Claimed,
                source,
                mode,
            ));
        }
    }
    if let Some(cx) = complex {
        for d in &cx.degrees {
            out.push(Comparison::new(
                format!("dim Z_deg^{}", d.k),
                d.product_formula_dim,
                d.brute_force_dim,
                Tag::Derived,
                "dim ker d^k times dim K^k against stacked elimination",
                mode,
            ));
        }
    }
    if let Some(m) = manifold {
        let h = &m.degenerate_cohomology_dims;
        if is_k3_like_dims(&m.betti) && is_su2(g) && !lambda.is_zero() {
            out.push(Comparison::new(
                "H_deg^0".into(),
                1,
                h[0],
                Tag::Claimed,
                "K3 degenerate cohomology, degree 0",
                mode,
            ));
            out.push(Comparison::new(
                "H_deg^1".into(),
                0,
                h[1],
                Tag::Claimed,
                "K3 degenerate cohomology, degree 1",
                mode,
            ));
            let k2 = kernels.rows.get(2).map_or(0, |r| r.dim);
            out.push(Comparison::new(
                "H_deg^2".into(),
                22 * k2,
                h[2],
                Tag::Derived,
                "b_2 = 22 times computed dim K^2",
                mode,
            ));
            if let Some(phi) = m.phi_image_dim {
                let (claimed, tag, source) = if k2 >= 1 {
                    (20, Tag::Claimed, "phi surjects onto H^(1,1), h^(1,1) = 20")
                } else {
                    (0, Tag::Trivial, "phi has zero source when K^2 = 0")
                };
                out.push(Comparison::new(
                    "dim im phi".into(),
                    claimed,
                    phi,
                    tag,
                    source,
                    mode,
                ));
            }
        }
        if lambda.is_zero() {
            for (k, (&b, &hk)) in m.betti.iter().zip(h).enumerate() {
                out.push(Comparison::new(
                    format!("H_deg^{k}"),
                    b * sym_dim(g.dim(), k),
                    hk,
                    Tag::Claimed,
                    "complete degeneration at lambda = 0 with Betti bookkeeping",
                    mode,
                ));
            }
        }
    }
    out
}

fn is_k3_like_dims(betti: &[usize]) -> bool {
    betti == [1, 0, 22, 0, 1]
}

fn audit_findings(name: &str, report: &AuditReport, out: &mut Vec<String>) {
    for g in report.grades.iter().filter(|g| g.verdict.is_finding()) {
        let at = match g.trial {
            Some(t) => format!("trial {t}, grade {}", g.k),
            None => format!("k = {}", g.k),
        };
        out.push(format!("{name}: {:?} at {at}", g.verdict).to_lowercase());
    }
}

fn collect_findings(report: &AnalysisReport) -> Vec<String> {
    let mut out: Vec<String> = report.algebra_validation.findings();
    if let Some(n) = &report.audits.nilpotency {
        audit_findings("nilpotency", n, &mut out);
    }
    audit_findings("leibniz", &report.audits.leibniz, &mut out);
    if let Some(cx) = &report.complex {
        if !cx.residual.all_zero {
            out.push("total differential does not square to zero".into());
        }
        for d in &cx.degrees {
            if d.projection.surjectivity == Surjectivity::Fails {
                out.push(format!(
                    "projection onto ker d^{} not surjective: K^{} = 0",
                    d.k, d.k
                ));
            }
            if d.projection.cohomology.failed > 0 {
                out.push(format!(
                    "degree {}: {} sampled degenerate coboundaries project outside im d^{}",
                    d.k,
                    d.projection.cohomology.failed,
                    d.k as isize - 1
                ));
            }
        }
    }
    if let Some(m) = &report.manifold {
        out.extend(m.diagnostics.findings());
    }
    for c in report.paper_comparisons.iter().filter(|c| !c.agrees) {
        out.push(format!(
            "{}: claimed {}, computed {}",
            c.quantity, c.claimed, c.computed
        ));
    }
    out
}

/// Runs the full pipeline described by a manifest.
pub fn analyze(manifest: &Manifest, seed: u64) -> Result<AnalysisReport> {
    let (algebra, algebra_validation) = manifest.algebra()?;
    let lambda = manifest.lambda()?;
    let complex = manifest.complex()?;
    let manifold = manifest.manifold()?;
    let mode = manifest.modes();
    let op = SpencerOperator::new(algebra, lambda, mode)?;
    let k_max = manifest.k_max;

    let k_top = k_max.max(manifold.as_ref().map_or(0, |m| m.real_dim));
    let kernels = kernel_table(&op, k_top)?;
    let audits = run_audits(&op, k_max, seed)?;

    let complex = match &complex {
        Some((source, cx)) => {
            let q = k_max.max(cx.top_degree() + 1);
            Some(complex_analysis(source, cx, &op, q, seed)?)
        }
        None => None,
    };

    let mirrored = op.with_lambda(op.lambda().negated())?;
    let mirrored_kernels = kernel_table(&mirrored, k_top)?;
    let kdims: Vec<usize> = kernels.rows.iter().map(|r| r.dim).collect();
    let mdims: Vec<usize> = mirrored_kernels.rows.iter().map(|r| r.dim).collect();
    let mut canonical_equal = true;
    for k in 0..=k_top {
        canonical_equal &= op.kernel(k)?.canonical() == mirrored.kernel(k)?.canonical();
    }
    if !canonical_equal || kdims != mdims {
        return Err(Error::Inconsistency(
            "kernel of -lambda differs from kernel of lambda".into(),
        ));
    }

    let manifold = match &manifold {
        Some(m) => Some(manifold_analysis(m, &kdims, mode)?),
        None => None,
    };
    let degenerate_cohomology_equal = match &manifold {
        Some(m) => {
            let eq = degenerate_cohomology_dims(&mirror_input(m), &mdims)?
                == m.degenerate_cohomology_dims;
            if !eq {
                return Err(Error::Inconsistency(
                    "degenerate cohomology changes under lambda -> -lambda".into(),
                ));
            }
            Some(eq)
        }
        None => None,
    };
    let mirror = MirrorAnalysis {
        kernel_dims: kdims,
        mirrored_kernel_dims: mdims,
        canonical_bases_equal: canonical_equal,
        degenerate_cohomology_equal,
        mode,
    };

    let paper_comparisons = comparisons(&op, &kernels, complex.as_ref(), manifold.as_ref());
    let mut report = AnalysisReport {
        mode,
        seed,
        algebra_validation,
        lambda: format_vector(&op.lambda().components),
        k_max,
        kernels,
        audits,
        complex,
        mirror,
        manifold,
        paper_comparisons,
        findings: Vec::new(),
    };
    report.findings = collect_findings(&report);
    Ok(report)
}

fn mirror_input(m: &ManifoldAnalysis) -> ManifoldData {
    ManifoldData {
        name: m.name.clone(),
        real_dim: m.betti.len() - 1,
        betti: m.betti.clone(),
        hodge: None,
        provenance: None,
    }
}

fn mode_label(m: ModeFlags) -> String {
    let s = serde_json::to_value(m).expect("modes serialize");
    format!(
        "pairing={} leibniz={}",
        s["pairing_mode"].as_str().unwrap_or(""),
        s["leibniz_mode"].as_str().unwrap_or("")
    )
}

pub fn render_kernel_table(t: &KernelTable) -> String {
    let mut table = Table::new(
        format!(
            "kernel dims: {} lambda=({}) {}",
            t.algebra,
            t.lambda.join(", "),
            mode_label(t.mode)
        ),
        &[
            "k",
            "dim Sym^k",
            "rank rref",
            "rank bareiss",
            "dim K^k",
            "claimed",
        ],
    );
    for r in &t.rows {
        table.row(vec![
            r.k.to_string(),
            r.ambient_dim.to_string(),
            r.rank_rref.to_string(),
            r.rank_bareiss.to_string(),
            r.dim.to_string(),
            r.claimed.map_or("-".into(), |c| c.to_string()),
        ]);
    }
    table.render()
}

pub fn render_complex(c: &ComplexAnalysis) -> String {
    let mut out = String::new();
    let total = c
        .total_cohomology_dims
        .as_ref()
        .map_or("undefined (T^2 != 0)".to_string(), |d| format!("{d:?}"));
    out.push_str(&format!(
        "complex {}: dims {:?}, H {:?}, Q = {}, Tot dims {:?}, H(Tot) {}\n\n",
        c.source, c.dims, c.cohomology_dims, c.q_max, c.tot_dims, total
    ));
    let mut residual = Table::new(
        "T^(n+1) T^n residual blocks",
        &["n", "cell", "target", "zero"],
    );
    for g in &c.residual.grades {
        for b in &g.blocks {
            residual.row(vec![
                g.n.to_string(),
                format!("({},{})", b.p, b.q),
                format!("({},{})", b.target.0, b.target.1),
                b.zero.to_string(),
            ]);
        }
    }
    if !residual.is_empty() {
        out.push_str(&residual.render());
        out.push('\n');
    }
    let mut degrees = Table::new(
        "degenerate subspace",
        &[
            "k",
            "dim Z_deg",
            "brute force",
            "D(w⊗s)=dw⊗s",
            "subcomplex",
            "surjective",
            "coboundaries ok",
        ],
    );
    for d in &c.degrees {
        degrees.row(vec![
            d.k.to_string(),
            d.degenerate_cocycle_dim.to_string(),
            d.brute_force_dim.to_string(),
            d.degeneration
                .as_ref()
                .map_or("-".into(), |r| format!("{} ({})", r.holds, r.checked)),
            d.subcomplex.contained.to_string(),
            format!("{:?}", d.projection.surjectivity).to_lowercase(),
            format!(
                "{}/{}",
                d.projection.cohomology.passed, d.projection.cohomology.samples
            ),
        ]);
    }
    out.push_str(&degrees.render());
    out
}

fn render_analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "algebra {} (dim {}): {}\n{}, seed {}\n\n",
        r.algebra_validation.name,
        r.algebra_validation.dimension,
        if r.algebra_validation.is_valid() {
            "valid"
        } else {
            "INVALID"
        },
        mode_label(r.mode),
        r.seed
    ));
    out.push_str(&render_kernel_table(&r.kernels));
    out.push('\n');

    let mut audits = Table::new("audits", &["claim", "verdicts"]);
    let mut push = |a: &AuditReport| {
        let v: Vec<String> = a
            .grades
            .iter()
            .map(|g| format!("{:?}", g.verdict).to_lowercase())
            .collect();
        let claim = match &a.note {
            Some(n) if n.starts_with("c =") => format!("{} ({n})", a.claim),
            _ => a.claim.clone(),
        };
        audits.row(vec![claim, v.join(" ")]);
    };
    if let Some(n) = &r.audits.nilpotency {
        push(n);
    }
    push(&r.audits.mirror);
    for s in &r.audits.scaling {
        push(s);
    }
    push(&r.audits.leibniz);
    out.push_str(&audits.render());
    out.push('\n');

    if let Some(c) = &r.complex {
        out.push_str(&render_complex(c));
        out.push('\n');
    }
    if let Some(m) = &r.manifold {
        let mut t = Table::new(
            format!("manifold {}", m.name),
            &["k", "b_k", "dim K^k", "H_deg^k"],
        );
        for (k, (&b, &h)) in m
            .betti
            .iter()
            .zip(&m.degenerate_cohomology_dims)
            .enumerate()
        {
            t.row(vec![
                k.to_string(),
                b.to_string(),
                r.mirror.kernel_dims[k].to_string(),
                h.to_string(),
            ]);
        }
        out.push_str(&t.render());
        if let (Some(p), Some(c)) = (m.phi_image_dim, m.phi_ceiling) {
            out.push_str(&format!("dim im phi = {p} (ceiling {c})\n"));
        }
        out.push('\n');
    }
    let mut cmp = Table::new(
        "claimed vs computed",
        &["quantity", "claimed", "computed", "agrees", "tag", "source"],
    );
    for c in &r.paper_comparisons {
        let tag = serde_json::to_value(c.tag).expect("tag serializes");
        cmp.row(vec![
            c.quantity.clone(),
            c.claimed.to_string(),
            c.computed.to_string(),
            if c.agrees { "yes".into() } else { "NO".into() },
            tag.as_str().unwrap_or("").to_string(),
            c.source.clone(),
        ]);
    }
    out.push_str(&cmp.render());
    out.push('\n');
    if r.findings.is_empty() {
        out.push_str("findings: none\n");
    } else {
        out.push_str("findings:\n");
        for f in &r.findings {
            out.push_str(&format!("  - {f}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spencer::{LeibnizMode, PairingMode};

    fn manifest(lambda: &str, extra: &str) -> (tempfile::TempDir, Manifest) {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("l.json"), lambda).unwrap();
        let text = format!(r#"{{"algebra":"su2","lambda":"l.json","k_max":3{extra}}}"#);
        let m = Manifest::from_json_str(&text, Some(dir.path())).unwrap();
        (dir, m)
    }

    #[test]
    fn k3_e3_report() {
        let (_d, m) = manifest(
            r#"{"components":["0","0","1"]}"#,
            r#","manifold":"K3","complex":"circle""#,
        );
        let r = analyze(&m, 0).unwrap();
        let man = r.manifold.as_ref().unwrap();
        assert_eq!(man.degenerate_cohomology_dims, vec![1, 0, 88, 0, 9]);
        assert_eq!(man.phi_image_dim, Some(20));
        let k1 = r
            .paper_comparisons
            .iter()
            .find(|c| c.quantity == "dim K^1")
            .unwrap();
        assert_eq!((k1.claimed, k1.computed, k1.agrees), (1, 0, false));
        assert!(r.findings.iter().any(|f| f.contains("dim K^1")));
        assert!(r.findings.iter().any(|f| f.starts_with("nilpotency")));
        let h0 = r
            .paper_comparisons
            .iter()
            .find(|c| c.quantity == "H_deg^0")
            .unwrap();
        assert!(h0.agrees);
        assert!(r.render_text().contains("claimed vs computed"));
    }

    #[test]
    fn zero_lambda_degenerates_completely() {
        let (_d, m) = manifest(r#"{"components":["0","0","0"]}"#, "");
        let r = analyze(&m, 0).unwrap();
        let dims: Vec<usize> = r.kernels.rows.iter().map(|x| x.dim).collect();
        assert_eq!(dims, vec![1, 3, 6, 10]);
        assert!(r.findings.is_empty(), "{:?}", r.findings);
    }

    #[test]
    fn deterministic_bytes() {
        let (_d, m) = manifest(
            r#"{"components":["1/2","-1","3"]}"#,
            r#","manifold":"K3","complex":"interval""#,
        );
        assert_eq!(
            analyze(&m, 3).unwrap().to_json_string(),
            analyze(&m, 3).unwrap().to_json_string()
        );
    }

    #[test]
    fn every_section_carries_modes() {
        let (_d, m) = manifest(
            r#"{"components":["0","0","1"]}"#,
            r#","manifold":"K3","complex":"circle","pairing_mode":"killing","leibniz_mode":"unsigned""#,
        );
        let r = analyze(&m, 0).unwrap();
        let want = ModeFlags {
            pairing_mode: PairingMode::Killing,
            leibniz_mode: LeibnizMode::Unsigned,
        };
        assert!(r.kernels.rows.iter().all(|x| x.mode == want));
        assert!(r.paper_comparisons.iter().all(|x| x.mode == want));
        assert_eq!(r.complex.as_ref().unwrap().mode, want);
        assert_eq!(r.manifold.as_ref().unwrap().mode, want);
        assert_eq!(r.audits.mirror.mode, want);
        assert_eq!(
            r.manifold.as_ref().unwrap().degenerate_cohomology_dims,
            vec![1, 0, 22, 0, 1]
        );
    }

    #[test]
    fn kernel_table_claims() {
        let op = SpencerOperator::new(
            LieAlgebra::builtin("su3").unwrap(),
            DualFunctional::zero(8),
            ModeFlags::default(),
        )
        .unwrap();
        let t = kernel_table(&op, 2).unwrap();
        assert_eq!(t.rows[2].dim, 36);
        assert_eq!(t.rows[2].claimed, Some(36));
        assert!(render_kernel_table(&t).lines().count() >= 5);
    }
}
