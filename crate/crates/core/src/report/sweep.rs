//! Kernel dimensions over a finite grid of covectors.
//!
//! Grid syntax:
//! - `ray:d1,...,dn@c1,...,cm` samples `c_j · d`
//! - `box:R` samples every integer covector in `[-R, R]^n`
//! - `points:a1,...,an;b1,...,bn` lists samples explicitly

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{DualFunctional, LieAlgebra};
use crate::linalg::{format_vector, parse_rational, ratio, Rational};
use crate::spencer::{ModeFlags, SpencerOperator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridSpec {
    Ray {
        direction: Vec<Rational>,
        scales: Vec<Rational>,
    },
    Box {
        radius: i64,
    },
    Points(Vec<Vec<Rational>>),
}

fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|t| parse_rational(t.trim())).collect()
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("grid `{text}` needs a `kind:` prefix")))?;
        match kind {
            "ray" => {
                let (d, c) = body.split_once('@').ok_or_else(|| {
                    Error::InvalidInput("ray grid needs `direction@scales`".into())
                })?;
                Ok(GridSpec::Ray {
                    direction: parse_list(d)?,
                    scales: parse_list(c)?,
                })
            }
            "box" => {
                let radius: i64 = body
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("box radius `{body}`")))?;
                if radius < 0 {
                    return Err(Error::InvalidInput("box radius must be >= 0".into()));
                }
                Ok(GridSpec::Box { radius })
            }
            "points" => Ok(GridSpec::Points(
                body.split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(parse_list)
                    .collect::<Result<_>>()?,
            )),
            _ => Err(Error::InvalidInput(format!("unknown grid kind `{kind}`"))),
        }
    }

    pub fn samples(&self, n: usize) -> Result<Vec<DualFunctional>> {
        let check = |v: &[Rational]| {
            if v.len() == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                })
            }
        };
        let out: Vec<DualFunctional> = match self {
            GridSpec::Ray { direction, scales } => {
                check(direction)?;
                let d = DualFunctional::new(direction.clone());
                scales.iter().map(|c| d.scaled(c)).collect()
            }
            GridSpec::Box { radius } => {
                let side = (2 * radius + 1) as usize;
                let count = side
                    .checked_pow(n as u32)
                    .filter(|&c| c <= 1_000_000)
                    .ok_or_else(|| Error::InvalidInput("box grid too large".into()))?;
                (0..count)
                    .map(|mut idx| {
                        let comps = (0..n)
                            .map(|_| {
                                let v = (idx % side) as i64 - radius;
                                idx /= side;
                                ratio(v, 1)
                            })
                            .collect();
                        DualFunctional::new(comps)
                    })
                    .collect()
            }
            GridSpec::Points(points) => {
                for p in points {
                    check(p)?;
                }
                points
                    .iter()
                    .map(|p| DualFunctional::new(p.clone()))
                    .collect()
            }
        };
        if out.is_empty() {
            return Err(Error::InvalidInput("grid has no samples".into()));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub lambda: Vec<String>,
    pub dims: Vec<usize>,
    pub mirror_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub dims: Vec<usize>,
    pub count: usize,
    pub first_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub algebra: String,
    pub mode: ModeFlags,
    pub k_max: usize,
    pub rows: Vec<SweepRow>,
    pub strata: Vec<Stratum>,
    /// Whether the `λ = 0` row dominates every other row, if `0` is sampled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_dominates: Option<bool>,
}

fn dims_for(op: &SpencerOperator, k_max: usize) -> Result<Vec<usize>> {
    (0..=k_max).map(|k| op.kernel(k).map(|s| s.dim)).collect()
}

fn evaluate(
    base: &SpencerOperator,
    index: usize,
    lambda: &DualFunctional,
    k_max: usize,
) -> Result<SweepRow> {
    let op = base.with_lambda(lambda.clone())?;
    let mirror = base.with_lambda(lambda.negated())?;
    let dims = dims_for(&op, k_max)?;
    let mirror_dims = dims_for(&mirror, k_max)?;
    if dims != mirror_dims {
        return Err(Error::Inconsistency(format!(
            "sample {index}: kernel dims {dims:?} but {mirror_dims:?} at -lambda"
        )));
    }
    Ok(SweepRow {
        index,
        lambda: format_vector(&lambda.components),
        dims,
        mirror_dims,
    })
}

/// Evaluates every sample and its mirror; samples run on scoped threads and
/// are merged by index.
pub fn sweep(
    algebra: &LieAlgebra,
    modes: ModeFlags,
    grid: &GridSpec,
    k_max: usize,
) -> Result<SweepReport> {
    let samples = grid.samples(algebra.dim())?;
    let base = SpencerOperator::new(algebra.clone(), DualFunctional::zero(algebra.dim()), modes)?;
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(samples.len());
    let mut slots: Vec<Option<Result<SweepRow>>> = (0..samples.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        for (w, chunk) in slots
            .chunks_mut(samples.len().div_ceil(workers))
            .enumerate()
        {
            let base = &base;
            let samples = &samples;
            let start = w * samples.len().div_ceil(workers);
            s.spawn(move || {
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    let i = start + offset;
                    *slot = Some(evaluate(base, i, &samples[i], k_max));
                }
            });
        }
    });
    let rows = slots
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect::<Result<Vec<_>>>()?;

    let mut strata: BTreeMap<Vec<usize>, Stratum> = BTreeMap::new();
    for r in &rows {
        strata
            .entry(r.dims.clone())
            .or_insert_with(|| Stratum {
                dims: r.dims.clone(),
                count: 0,
                first_index: r.index,
            })
            .count += 1;
    }
    let mut strata: Vec<Stratum> = strata.into_values().collect();
    strata.sort_by_key(|s| s.first_index);

    let zero_dominates = samples.iter().position(DualFunctional::is_zero).map(|z| {
        rows.iter()
            .all(|r| r.dims.iter().zip(&rows[z].dims).all(|(d, z)| d <= z))
    });
    Ok(SweepReport {
        algebra: algebra.name().to_string(),
        mode: modes,
        k_max,
        rows,
        strata,
        zero_dominates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn su2() -> LieAlgebra {
        LieAlgebra::builtin("su2").unwrap()
    }

    #[test]
    fn parse_forms() {
        let g = GridSpec::parse("ray:0,0,1@-2,-1,1,2").unwrap();
        assert_eq!(g.samples(3).unwrap().len(), 4);
        assert_eq!(
            GridSpec::parse("box:1").unwrap().samples(3).unwrap().len(),
            27
        );
        let p = GridSpec::parse("points:0,0,0;1/2,0,1")
            .unwrap()
            .samples(3)
            .unwrap();
        assert_eq!(p[1].components, vec![ratio(1, 2), rat(0), rat(1)]);
        assert!(GridSpec::parse("ray:0,0,1@").is_err());
        assert!(GridSpec::parse("cube:2").is_err());
        assert!(GridSpec::parse("points:").unwrap().samples(3).is_err());
        assert!(GridSpec::parse("points:1,2").unwrap().samples(3).is_err());
    }

    #[test]
    fn ray_is_constant() {
        let g = GridSpec::parse("ray:0,0,1@-2,-1,1,2").unwrap();
        let r = sweep(&su2(), ModeFlags::default(), &g, 3).unwrap();
        assert_eq!(r.strata.len(), 1);
        assert_eq!(
            r.rows.iter().map(|x| x.index).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
        assert!(r.zero_dominates.is_none());
    }

    #[test]
    fn zero_dominates_box() {
        let g = GridSpec::parse("box:1").unwrap();
        let r = sweep(&su2(), ModeFlags::default(), &g, 2).unwrap();
        assert_eq!(r.zero_dominates, Some(true));
        assert!(r.rows.iter().all(|x| x.dims == x.mirror_dims));
        let zero = r
            .rows
            .iter()
            .find(|x| x.lambda.iter().all(|c| c == "0"))
            .unwrap();
        assert_eq!(zero.dims, vec![1, 3, 6]);
    }
}
