//! Betti and Hodge bookkeeping for the manifold catalog.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CATALOG: &str = include_str!("../data/manifolds.json");

/// Hodge numbers of one degree, keyed `"p,q"`.
pub type HodgeDegree = BTreeMap<String, usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldData {
    pub name: String,
    pub real_dim: usize,
    pub betti: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<BTreeMap<String, HodgeDegree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Deserialize)]
struct Catalog {
    manifolds: Vec<ManifoldData>,
}

fn catalog() -> &'static [ManifoldData] {
    static CELL: OnceLock<Vec<ManifoldData>> = OnceLock::new();
    CELL.get_or_init(|| {
        serde_json::from_str::<Catalog>(CATALOG)
            .expect("bundled manifold catalog parses")
            .manifolds
    })
}

pub fn builtin_names() -> Vec<&'static str> {
    catalog().iter().map(|m| m.name.as_str()).collect()
}

fn parse_bidegree(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidManifold(format!("hodge key `{key}` is not `p,q`"));
    let (p, q) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        p.trim().parse().map_err(|_| bad())?,
        q.trim().parse().map_err(|_| bad())?,
    ))
}

impl ManifoldData {
    pub fn builtin(name: &str) -> Result<Self> {
        catalog()
            .iter()
            .find(|m| m.name == name)
            .cloned()
            .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))
    }

    /// Parses a manifold file and checks its shape. Topological consistency is
    /// left to [`validate_manifold`].
    pub fn from_json_str(text: &str) -> Result<Self> {
        let m: ManifoldData =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifold file: {e}")))?;
        if m.betti.len() != m.real_dim + 1 {
            return Err(Error::InvalidManifold(format!(
                "real_dim {} needs {} Betti numbers, got {}",
                m.real_dim,
                m.real_dim + 1,
                m.betti.len()
            )));
        }
        if let Some(hodge) = &m.hodge {
            for (deg, table) in hodge {
                let k: usize = deg
                    .parse()
                    .map_err(|_| Error::InvalidManifold(format!("hodge degree `{deg}`")))?;
                if k > m.real_dim {
                    return Err(Error::InvalidManifold(format!(
                        "hodge degree {k} exceeds real_dim"
                    )));
                }
                for key in table.keys() {
                    let (p, q) = parse_bidegree(key)?;
                    if p + q != k {
                        return Err(Error::InvalidManifold(format!(
                            "h^{{{p},{q}}} listed under degree {k}"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&path, e))?;
        Self::from_json_str(&text)
    }

    /// `"K3"` and friends resolve to the catalog; anything else is a path.
    pub fn resolve(spec: &str, base: Option<&Path>) -> Result<Self> {
        let name = spec.strip_prefix("builtin:").unwrap_or(spec);
        if let Ok(m) = Self::builtin(name) {
            return Ok(m);
        }
        let path = match base {
            Some(dir) => dir.join(spec),
            None => spec.into(),
        };
        Self::load(path)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifold serializes")
    }

    pub fn hodge_degree(&self, k: usize) -> Option<&HodgeDegree> {
        self.hodge.as_ref()?.get(&k.to_string())
    }

    pub fn hodge_number(&self, p: usize, q: usize) -> Option<usize> {
        self.hodge_degree(p + q)?.get(&format!("{p},{q}")).copied()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ManifoldDiagnostics {
    pub name: String,
    pub duality_violations: Vec<String>,
    pub hodge_sum_violations: Vec<String>,
    pub hodge_symmetry_violations: Vec<String>,
}

impl ManifoldDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.duality_violations.is_empty()
            && self.hodge_sum_violations.is_empty()
            && self.hodge_symmetry_violations.is_empty()
    }

    pub fn findings(&self) -> Vec<String> {
        self.duality_violations
            .iter()
            .chain(&self.hodge_sum_violations)
            .chain(&self.hodge_symmetry_violations)
            .cloned()
            .collect()
    }
}

pub fn validate_manifold(m: &ManifoldData) -> ManifoldDiagnostics {
    let mut d = ManifoldDiagnostics {
        name: m.name.clone(),
        ..Default::default()
    };
    let n = m.betti.len().saturating_sub(1);
    for k in 0..=n / 2 {
        if m.betti[k] != m.betti[n - k] {
            d.duality_violations.push(format!(
                "b_{k} = {} but b_{} = {}",
                m.betti[k],
                n - k,
                m.betti[n - k]
            ));
        }
    }
    if let Some(hodge) = &m.hodge {
        for (deg, table) in hodge {
            let Ok(k) = deg.parse::<usize>() else {
                d.hodge_sum_violations
                    .push(format!("unreadable degree `{deg}`"));
                continue;
            };
            let sum: usize = table.values().sum();
            match m.betti.get(k) {
                Some(&b) if b == sum => {}
                Some(&b) => d.hodge_sum_violations.push(format!(
                    "degree {k}: sum of h^{{p,q}} is {sum} but b_{k} = {b}"
                )),
                None => d
                    .hodge_sum_violations
                    .push(format!("degree {k} has no Betti number")),
            }
            for (key, &h) in table {
                let Ok((p, q)) = parse_bidegree(key) else {
                    d.hodge_symmetry_violations
                        .push(format!("unreadable key `{key}`"));
                    continue;
                };
                let mirror = table.get(&format!("{q},{p}")).copied().unwrap_or(0);
                if p < q && h != mirror {
                    d.hodge_symmetry_violations
                        .push(format!("h^{{{p},{q}}} = {h} but h^{{{q},{p}}} = {mirror}"));
                } else if p > q && !table.contains_key(&format!("{q},{p}")) && h != 0 {
                    d.hodge_symmetry_violations
                        .push(format!("h^{{{p},{q}}} = {h} but h^{{{q},{p}}} is missing"));
                }
            }
        }
    }
    d
}

/// Entry `k` is `b_k · dim K^k(λ)`.
pub fn degenerate_cohomology_dims(m: &ManifoldData, kdims: &[usize]) -> Result<Vec<usize>> {
    if kdims.len() < m.betti.len() {
        return Err(Error::DimensionMismatch {
            expected: m.betti.len(),
            got: kdims.len(),
        });
    }
    Ok(m.betti.iter().zip(kdims).map(|(b, k)| b * k).collect())
}

/// Image dimension of `Φ` on a real surface: `h^{1,1}` when `K^2(λ) ≠ 0`.
pub fn phi_image_dim(m: &ManifoldData, kdims: &[usize]) -> Result<usize> {
    if m.real_dim != 4 {
        return Err(Error::Precondition(format!(
            "Φ needs a real 4-manifold, `{}` has real_dim {}",
            m.name, m.real_dim
        )));
    }
    let h11 = m.hodge_number(1, 1).ok_or_else(|| {
        Error::InvalidManifold(format!("`{}` has no degree-2 Hodge data", m.name))
    })?;
    let k2 = *kdims.get(2).ok_or(Error::DimensionMismatch {
        expected: 3,
        got: kdims.len(),
    })?;
    Ok(if k2 >= 1 { h11 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn catalog_values() {
        let k3 = ManifoldData::builtin("K3").unwrap();
        assert_eq!(k3.betti, vec![1, 0, 22, 0, 1]);
        assert_eq!(k3.hodge_number(1, 1), Some(20));
        assert_eq!(k3.hodge_number(2, 0), Some(1));
        let t4 = ManifoldData::builtin("T4").unwrap();
        let binom: Vec<usize> = (0..=4).map(|k| crate::sym::binomial(4, k)).collect();
        assert_eq!(t4.betti, binom);
        assert_eq!(ManifoldData::builtin("T2").unwrap().betti, vec![1, 2, 1]);
        assert!(matches!(
            ManifoldData::builtin("S7"),
            Err(Error::UnknownBuiltin(_))
        ));
        for name in builtin_names() {
            assert!(
                validate_manifold(&ManifoldData::builtin(name).unwrap()).is_valid(),
                "{name}"
            );
        }
    }

    #[test]
    fn constructed_defects() {
        let mut m = ManifoldData::builtin("K3").unwrap();
        m.betti = vec![1, 0, 21, 0, 1];
        let d = validate_manifold(&m);
        assert_eq!(d.hodge_sum_violations.len(), 1);
        assert!(d.hodge_sum_violations[0].contains("degree 2"));
        assert!(d.duality_violations.is_empty());

        let m = ManifoldData {
            name: "bad".into(),
            real_dim: 3,
            betti: vec![1, 2, 1, 1],
            hodge: None,
            provenance: None,
        };
        assert!(!validate_manifold(&m).duality_violations.is_empty());

        let mut m = ManifoldData::builtin("K3").unwrap();
        m.hodge
            .as_mut()
            .unwrap()
            .get_mut("2")
            .unwrap()
            .insert("2,0".into(), 2);
        m.hodge
            .as_mut()
            .unwrap()
            .get_mut("2")
            .unwrap()
            .insert("1,1".into(), 19);
        let d = validate_manifold(&m);
        assert!(d.hodge_sum_violations.is_empty());
        assert_eq!(d.hodge_symmetry_violations.len(), 1);
    }

    #[test]
    fn k3_bookkeeping() {
        let k3 = ManifoldData::builtin("K3").unwrap();
        assert_eq!(
            degenerate_cohomology_dims(&k3, &[1, 0, 4, 0, 9]).unwrap(),
            vec![1, 0, 88, 0, 9]
        );
        assert_eq!(
            degenerate_cohomology_dims(&k3, &[1, 3, 6, 10, 15]).unwrap(),
            vec![1, 0, 132, 0, 15]
        );
        assert!(degenerate_cohomology_dims(&k3, &[1, 0, 4]).is_err());
        assert_eq!(phi_image_dim(&k3, &[1, 0, 4, 0, 9]).unwrap(), 20);
        assert_eq!(phi_image_dim(&k3, &[1, 0, 0, 0, 0]).unwrap(), 0);
        let t2 = ManifoldData::builtin("T2").unwrap();
        assert!(matches!(
            phi_image_dim(&t2, &[1, 1, 1]),
            Err(Error::Precondition(_))
        ));
        let mut bare = k3.clone();
        bare.hodge = None;
        assert!(matches!(
            phi_image_dim(&bare, &[1, 0, 1]),
            Err(Error::InvalidManifold(_))
        ));
    }

    #[test]
    fn file_round_trip_and_shape_errors() {
        let k3 = ManifoldData::builtin("K3").unwrap();
        assert_eq!(
            ManifoldData::from_json_str(&k3.to_json_string()).unwrap(),
            k3
        );
        let text = r#"{"name":"x","real_dim":2,"betti":[1,0]}"#;
        assert!(matches!(
            ManifoldData::from_json_str(text),
            Err(Error::InvalidManifold(_))
        ));
        let text = r#"{"name":"x","real_dim":2,"betti":[1,0,1],"hodge":{"2":{"1,0":1}}}"#;
        assert!(matches!(
            ManifoldData::from_json_str(text),
            Err(Error::InvalidManifold(_))
        ));
        let text = r#"{"name":"x","real_dim":2,"betti":[1,0,1],"hodge":{"2":{"1,1":1}}}"#;
        assert!(validate_manifold(&ManifoldData::from_json_str(text).unwrap()).is_valid());
    }

    proptest! {
        #[test]
        fn multiplicative_in_kernel_dims(k in prop::collection::vec(0usize..50, 5), idx in 0usize..5) {
            let k3 = ManifoldData::builtin("K3").unwrap();
            let base = degenerate_cohomology_dims(&k3, &k).unwrap();
            let mut doubled = k.clone();
            doubled[idx] *= 2;
            let out = degenerate_cohomology_dims(&k3, &doubled).unwrap();
            prop_assert_eq!(out[idx], 2 * base[idx]);
            let phi = phi_image_dim(&k3, &k).unwrap();
            prop_assert!(phi == 0 || phi == 20);
        }
    }
}
