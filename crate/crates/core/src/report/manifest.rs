use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::geometry::ManifoldData;
use crate::lie::{AlgebraDiagnostics, DualFunctional, LieAlgebra};
use crate::spencer::{LeibnizMode, ModeFlags, PairingMode};

/// Analysis manifest. Relative paths resolve against the manifest's directory.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub algebra: String,
    pub lambda: String,
    #[serde(default)]
    pub pairing_mode: PairingMode,
    #[serde(default)]
    pub leibniz_mode: LeibnizMode,
    pub k_max: usize,
    #[serde(default)]
    pub complex: Option<String>,
    #[serde(default)]
    pub manifold: Option<String>,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Manifest {
    pub fn from_json_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut m: Manifest =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        m.base_dir = base_dir.map(Path::to_path_buf);
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, path.parent())
    }

    pub fn modes(&self) -> ModeFlags {
        ModeFlags {
            pairing_mode: self.pairing_mode,
            leibniz_mode: self.leibniz_mode,
        }
    }

    fn path(&self, p: &str) -> PathBuf {
        match &self.base_dir {
            Some(dir) => dir.join(p),
            None => PathBuf::from(p),
        }
    }

    /// Loads and strictly validates the algebra.
    pub fn algebra(&self) -> Result<(LieAlgebra, AlgebraDiagnostics)> {
        resolve_algebra(&self.algebra, self.base_dir.as_deref())
    }

    pub fn lambda(&self) -> Result<DualFunctional> {
        DualFunctional::load(self.path(&self.lambda))
    }

    pub fn complex(&self) -> Result<Option<(String, CochainComplex)>> {
        self.complex
            .as_deref()
            .map(|spec| resolve_complex(spec, self.base_dir.as_deref()))
            .transpose()
    }

    pub fn manifold(&self) -> Result<Option<ManifoldData>> {
        self.manifold
            .as_deref()
            .map(|spec| ManifoldData::resolve(spec, self.base_dir.as_deref()))
            .transpose()
    }
}

fn builtin_name(spec: &str) -> &str {
    spec.strip_prefix("builtin:").unwrap_or(spec)
}

/// `"su2"`, `"su3"` or `"builtin:NAME"` name a built-in; anything else is a file.
pub fn resolve_algebra(
    spec: &str,
    base: Option<&Path>,
) -> Result<(LieAlgebra, AlgebraDiagnostics)> {
    let name = builtin_name(spec);
    if let Ok(g) = LieAlgebra::builtin(name) {
        let diag = g.validate();
        return Ok((g, diag));
    }
    if spec.starts_with("builtin:") {
        return Err(Error::UnknownBuiltin(name.to_string()));
    }
    let path = base.map_or_else(|| PathBuf::from(spec), |dir| dir.join(spec));
    LieAlgebra::load(path, true)
}

/// `"point"`, `"circle"`, `"interval"` or a complex file.
pub fn resolve_complex(spec: &str, base: Option<&Path>) -> Result<(String, CochainComplex)> {
    let name = builtin_name(spec);
    if let Ok(cx) = CochainComplex::builtin(name) {
        return Ok((name.to_string(), cx));
    }
    if spec.starts_with("builtin:") {
        return Err(Error::UnknownBuiltin(name.to_string()));
    }
    let path = base.map_or_else(|| PathBuf::from(spec), |dir| dir.join(spec));
    Ok((spec.to_string(), CochainComplex::load(path)?))
}
