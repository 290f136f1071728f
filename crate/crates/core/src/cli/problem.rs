//! Input files: problem descriptions and filled-norm tables.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{LinkData, SurfaceClass};
use crate::norm_ball::{self, NormBall};
use crate::slope_arith::Slope;
use crate::surgery_verdict::{FilledData, FilledNormOracle};

/// How the norm is given: directly by the dual functionals, or by the
/// support of a multivariable Alexander polynomial whose Newton polytope is
/// taken as the dual ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NormSpec {
    Functionals(Vec<Vec<i64>>),
    AlexanderSupport(Vec<Vec<i64>>),
}

impl NormSpec {
    pub fn ball(&self) -> Result<NormBall> {
        match self {
            NormSpec::Functionals(f) => NormBall::new(f.clone()),
            NormSpec::AlexanderSupport(s) => norm_ball::newton_polytope_ball(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub link: LinkData,
    pub norm: NormSpec,
    /// Free-form notes: provenance, expected values. Not interpreted.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub annotations: BTreeMap<String, serde_json::Value>,
}

/// A parsed problem together with its validated norm ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub file: ProblemFile,
    pub ball: NormBall,
}

impl Problem {
    pub fn link(&self) -> &LinkData {
        &self.file.link
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }
}

fn json_error(origin: &str, e: serde_json::Error) -> Error {
    // serde_json already appends "at line L column C".
    Error::Parse(format!("{origin}: {e}"))
}

pub fn parse_problem(text: &str, origin: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| json_error(origin, e))?;
    let ball = file.norm.ball().map_err(|e| match e {
        Error::InvalidNormBall(m) => Error::InvalidNormBall(format!("{origin}: field \"norm\": {m}")),
        Error::DegenerateNorm(m) => Error::DegenerateNorm(format!("{origin}: field \"norm\": {m}")),
        other => other,
    })?;
    if ball.dim() != file.link.n() {
        return Err(Error::InvalidNormBall(format!(
            "{origin}: norm has dimension {} but the link has {} components",
            ball.dim(),
            file.link.n()
        )));
    }
    Ok(Problem { file, ball })
}

pub fn read_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_problem(&text, &path.display().to_string())
}

/// Canonical serialization: two-space indent, fields in declaration order,
/// annotation keys sorted.
pub fn to_canonical_json(file: &ProblemFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("problem files always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilledEntry {
    link: LinkData,
    norm: NormSpec,
    class: SurfaceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleEntry {
    /// Class before filling; its dimension identifies the level.
    class: SurfaceClass,
    slope: Slope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filled: Option<FilledEntry>,
    /// Set instead of `filled` when the filled norm is degenerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degenerate: Option<String>,
}

/// Filled-norm data looked up from a JSON table:
/// `{"entries": [{"class", "slope", "filled": {"link", "norm", "class"}}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableOracle {
    entries: Vec<OracleEntry>,
}

impl TableOracle {
    pub fn parse(text: &str, origin: &str) -> Result<TableOracle> {
        let t: TableOracle = serde_json::from_str(text).map_err(|e| json_error(origin, e))?;
        for (k, e) in t.entries.iter().enumerate() {
            if e.filled.is_some() == e.degenerate.is_some() {
                return Err(Error::Parse(format!("{origin}: entry {k} needs exactly one of \"filled\" and \"degenerate\"")));
            }
        }
        Ok(t)
    }

    pub fn read(path: &Path) -> Result<TableOracle> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        TableOracle::parse(&text, &path.display().to_string())
    }
}

impl FilledNormOracle for TableOracle {
    fn filled(&self, _link: &LinkData, s: &SurfaceClass, slope: Slope) -> Result<Option<FilledData>> {
        let Some(e) = self.entries.iter().find(|e| &e.class == s) else { return Ok(None) };
        if e.slope != slope {
            return Err(Error::InconsistentData(format!("oracle entry for {s} is for slope {} but the class has slope {slope}", e.slope)));
        }
        if let Some(reason) = &e.degenerate {
            return Err(Error::DegenerateNorm(reason.clone()));
        }
        let f = e.filled.as_ref().expect("checked at parse time");
        let ball = f.norm.ball()?;
        if ball.dim() != f.link.n() || f.class.dim() != f.link.n() {
            return Err(Error::DimensionMismatch { expected: f.link.n(), found: ball.dim().min(f.class.dim()) });
        }
        Ok(Some(FilledData { link: f.link.clone(), ball, class: f.class.clone() }))
    }
}

/// Parse a class written as `2,1`, `(2, 1)` or `[2,1]`.
pub fn parse_class(s: &str) -> Result<SurfaceClass> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let coeffs = inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("class {s:?}: {t:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceClass::new(coeffs))
}

/// Parse a 1-based component list such as `1,3`, returning 0-based indices.
pub fn parse_components(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let k: usize = t.trim().parse().map_err(|e| Error::Parse(format!("component list {s:?}: {t:?}: {e}")))?;
            if k == 0 || k > n {
                return Err(Error::IndexOutOfRange { index: k, len: n });
            }
            Ok(k - 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG: &str = r#"{
  "name": "t",
  "link": {"orders": [1, 1], "linking": [["0", "-2"], ["-2", "0"]]},
  "norm": {"functionals": [[1, 1], [1, -1], [-1, 1], [-1, -1]]}
}"#;

    #[test]
    fn parses_and_round_trips() {
        let p = parse_problem(FIG, "t").unwrap();
        assert_eq!(p.ball.functionals().len(), 4);
        let again = parse_problem(&to_canonical_json(&p.file), "t").unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let bad = FIG.replace("[\"-2\", \"0\"]", "[\"-3\", \"0\"]");
        let e = parse_problem(&bad, "t").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("line 3") && m.contains("symmetric")), "{e}");
        let e = parse_problem(&FIG.replace("\"name\"", "\"nmae\""), "t").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_problem(&FIG.replace("[-1, -1]", "[-1, -2]"), "t").unwrap_err();
        assert!(matches!(e, Error::InvalidNormBall(_)));
    }

    #[test]
    fn class_and_component_syntax() {
        assert_eq!(parse_class("(2, 1)").unwrap(), SurfaceClass::new(vec![2, 1]));
        assert_eq!(parse_class("-1,0,3").unwrap().dim(), 3);
        assert!(parse_class("2;1").is_err());
        assert_eq!(parse_components("1,3", 3).unwrap(), vec![0, 2]);
        assert!(parse_components("0", 3).is_err());
    }
}
