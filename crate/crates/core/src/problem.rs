//! JSON problem files: complex scalars as `[re, im]`, matrices row-major.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::poly::C64;
use crate::rmf::{RationalTerm, Rmf, Weight};
use crate::structure::StructureTag;

type Pair = [f64; 2];
type JsonMatrix = Vec<Vec<Pair>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalRecord {
    pub s: Vec<Pair>,
    pub q: Vec<Pair>,
    #[serde(rename = "E")]
    pub e: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    pub poly: Vec<JsonMatrix>,
    #[serde(default)]
    pub rational: Vec<RationalRecord>,
}

fn to_c(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn to_pair(z: &C64) -> Pair {
    [z.re, z.im]
}

fn matrix_from_json(m: &JsonMatrix, n: usize, field: &str) -> Result<CMat> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        let cols: Vec<usize> = m.iter().map(Vec::len).collect();
        return Err(Error::DimensionMismatch(format!(
            "{field}: expected {n}x{n}, found {} rows with lengths {cols:?}",
            m.len()
        )));
    }
    if m.iter().flatten().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Parse(format!("{field}: non-finite entry")));
    }
    Ok(CMat::from_fn(n, n, |i, j| to_c(&m[i][j])))
}

fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| to_pair(&m[(i, j)])).collect())
        .collect()
}

impl ProblemFile {
    pub fn from_rmf(g: &Rmf) -> Self {
        ProblemFile {
            n: g.n(),
            d: g.degree(),
            structure: g.structure().map(|t| t.name().to_string()),
            poly: g.poly().iter().map(matrix_to_json).collect(),
            rational: g
                .terms()
                .iter()
                .map(|t| RationalRecord {
                    s: t.weight.s().iter().map(to_pair).collect(),
                    q: t.weight.q().iter().map(to_pair).collect(),
                    e: matrix_to_json(&t.coeff),
                })
                .collect(),
        }
    }

    pub fn to_rmf(&self) -> Result<Rmf> {
        if self.n == 0 {
            return Err(Error::DimensionMismatch("n must be positive".into()));
        }
        if self.poly.len() != self.d + 1 {
            return Err(Error::DimensionMismatch(format!(
                "poly: d = {} requires {} matrices, found {}",
                self.d,
                self.d + 1,
                self.poly.len()
            )));
        }
        let poly = self
            .poly
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, self.n, &format!("poly[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let terms = self
            .rational
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let coeff = matrix_from_json(&r.e, self.n, &format!("rational[{j}].E"))?;
                let weight = Weight::new(
                    r.s.iter().map(to_c).collect(),
                    r.q.iter().map(to_c).collect(),
                )
                .map_err(|e| Error::Parse(format!("rational[{j}]: {e}")))?;
                Ok(RationalTerm { weight, coeff })
            })
            .collect::<Result<Vec<_>>>()?;
        let tag = match &self.structure {
            None => None,
            Some(s) => Some(
                s.parse::<StructureTag>()
                    .map_err(|e| Error::Parse(format!("structure: {e}")))?,
            ),
        };
        Ok(Rmf::new(poly, terms)?.with_structure(tag))
    }
}

pub fn problem_from_str(text: &str) -> Result<Rmf> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_rmf()
}

pub fn problem_to_string(g: &Rmf) -> String {
    serde_json::to_string_pretty(&ProblemFile::from_rmf(g)).expect("problem files always serialize")
        + "\n"
}

pub fn parse_problem(path: impl AsRef<Path>) -> Result<Rmf> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    problem_from_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_problem(g: &Rmf, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, problem_to_string(g))?;
    Ok(())
}
