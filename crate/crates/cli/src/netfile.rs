//! TOML network files.
//!
//! ```toml
//! mode = "autonomous"          # or "sequence"
//! a = "1/4"                    # rationals: "p/q", decimals or integers
//! units = ["x", "y"]           # or `d = 2`
//!
//! [[arrow]]
//! from = "x"                   # unit name or 1-based index
//! to = "y"
//! sign = "-"                   # "+", "-", 1 or -1
//! threshold = "1/2"
//! weight = "1"                 # optional
//!
//! [offsets]                    # sequence mode only
//! rule = "periodic"            # "finite", "periodic" or "constant"
//! vectors = [["0", "1/4"]]
//! ```
//!
//! Arrows without a weight split whatever their column's explicit weights
//! leave of 1.

use std::path::Path;

use regnet_core::model::{Mode, NetworkSpec, OffsetRule, OffsetSequence, Sign};
use regnet_core::Rational;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("network file: {0}")]
    Format(String),
}

fn format_err(msg: impl Into<String>) -> FileError {
    FileError::Format(msg.into())
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> Result<Rational, FileError> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer(*n)),
            // shortest round-trip repr, read back exactly as a decimal
            Number::Float(x) => format!("{x:?}").parse().map_err(|e| format_err(format!("{e}"))),
            Number::Text(s) => s.parse().map_err(|e| format_err(format!("{e}"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum UnitRef {
    Index(i64),
    Name(String),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum SignLit {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ArrowEntry {
    from: UnitRef,
    to: UnitRef,
    sign: SignLit,
    threshold: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<Number>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct OffsetsEntry {
    rule: String,
    vectors: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    a: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    units: Option<Vec<String>>,
    #[serde(default, rename = "arrow")]
    arrows: Vec<ArrowEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offsets: Option<OffsetsEntry>,
}

/// A parsed network file. The spec is shape-checked but not validated.
#[derive(Debug, Clone)]
pub struct NetworkFile {
    pub name: Option<String>,
    pub units: Vec<String>,
    pub spec: NetworkSpec,
    pub offsets: Option<OffsetSequence>,
}

impl NetworkFile {
    pub fn new(name: Option<String>, spec: NetworkSpec, units: Option<Vec<String>>) -> Self {
        let units = units.unwrap_or_else(|| default_units(spec.dim()));
        NetworkFile { name, units, spec, offsets: None }
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawFile = toml::from_str(text)?;
        let mode = match raw.mode.as_deref() {
            None | Some("autonomous") => Mode::Autonomous,
            Some("sequence") => Mode::Sequence,
            Some(other) => return Err(format_err(format!("unknown mode `{other}`"))),
        };
        let units = match (&raw.units, raw.d) {
            (Some(u), Some(d)) if u.len() != d => {
                return Err(format_err(format!("{} unit names for d = {d}", u.len())));
            }
            (Some(u), _) => u.clone(),
            (None, Some(d)) => default_units(d),
            (None, None) => return Err(format_err("give `units` or `d`")),
        };
        let d = units.len();
        if d == 0 {
            return Err(format_err("network needs at least one unit"));
        }
        let unit = |r: &UnitRef| -> Result<usize, FileError> {
            match r {
                UnitRef::Index(n) if *n >= 1 && (*n as usize) <= d => Ok(*n as usize - 1),
                UnitRef::Index(n) => Err(format_err(format!("unit index {n} outside 1..={d}"))),
                UnitRef::Name(s) => units
                    .iter()
                    .position(|u| u == s)
                    .ok_or_else(|| format_err(format!("unknown unit `{s}`"))),
            }
        };

        let mut k = vec![vec![Rational::zero(); d]; d];
        let mut t = vec![vec![Rational::zero(); d]; d];
        let mut s = vec![vec![Sign::Zero; d]; d];
        let mut unweighted: Vec<Vec<usize>> = vec![Vec::new(); d];
        for arrow in &raw.arrows {
            let (i, j) = (unit(&arrow.from)?, unit(&arrow.to)?);
            if s[i][j] != Sign::Zero {
                return Err(format_err(format!("duplicate arrow {} → {}", units[i], units[j])));
            }
            s[i][j] = parse_sign(&arrow.sign)?;
            t[i][j] = arrow.threshold.to_rational()?;
            match &arrow.weight {
                Some(w) => k[i][j] = w.to_rational()?,
                None => unweighted[j].push(i),
            }
        }
        for (j, tails) in unweighted.iter().enumerate() {
            if tails.is_empty() {
                continue;
            }
            let used: Rational = (0..d).map(|i| k[i][j].clone()).sum();
            let share = &(&Rational::one() - &used) / &Rational::from_integer(tails.len() as i64);
            for &i in tails {
                k[i][j] = share.clone();
            }
        }
        let a = raw.a.to_rational()?;
        let spec = NetworkSpec::new(mode, a, k, t, s).map_err(|e| format_err(e.to_string()))?;
        let offsets = match &raw.offsets {
            None => None,
            Some(o) => {
                let rule = match o.rule.as_str() {
                    "finite" => OffsetRule::Finite,
                    "periodic" => OffsetRule::Periodic,
                    "constant" => OffsetRule::Constant,
                    other => return Err(format_err(format!("unknown offset rule `{other}`"))),
                };
                let vectors = o
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(Number::to_rational).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Some(OffsetSequence::new(vectors, rule).map_err(|e| format_err(e.to_string()))?)
            }
        };
        Ok(NetworkFile { name: raw.name, units, spec, offsets })
    }

    /// Canonical TOML: every arrow listed with an explicit weight.
    pub fn to_toml(&self) -> String {
        let spec = &self.spec;
        let d = spec.dim();
        let mut arrows = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if spec.s(i, j) != Sign::Zero || !spec.k(i, j).is_zero() {
                    arrows.push(ArrowEntry {
                        from: UnitRef::Name(self.units[i].clone()),
                        to: UnitRef::Name(self.units[j].clone()),
                        sign: SignLit::Text(sign_text(spec.s(i, j)).into()),
                        threshold: Number::Text(spec.t(i, j).to_string()),
                        weight: Some(Number::Text(spec.k(i, j).to_string())),
                    });
                }
            }
        }
        let raw = RawFile {
            name: self.name.clone(),
            mode: Some(spec.mode().name().into()),
            a: Number::Text(spec.a().to_string()),
            d: None,
            units: Some(self.units.clone()),
            arrows,
            offsets: self.offsets.as_ref().map(|o| OffsetsEntry {
                rule: o.rule().name().into(),
                vectors: o
                    .vectors()
                    .iter()
                    .map(|v| v.iter().map(|x| Number::Text(x.to_string())).collect())
                    .collect(),
            }),
        };
        toml::to_string(&raw).expect("network file serializes")
    }
}

fn default_units(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

fn sign_text(s: Sign) -> &'static str {
    match s {
        Sign::Minus => "-",
        Sign::Zero => "0",
        Sign::Plus => "+",
    }
}

fn parse_sign(lit: &SignLit) -> Result<Sign, FileError> {
    let sign = match lit {
        SignLit::Int(n) => Sign::from_int(*n),
        SignLit::Text(s) => match s.as_str() {
            "+" | "+1" | "1" => Some(Sign::Plus),
            "-" | "-1" => Some(Sign::Minus),
            "0" => Some(Sign::Zero),
            _ => None,
        },
    };
    sign.ok_or_else(|| format_err("sign must be +, -, 1 or -1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOGGLE: &str = r#"
        a = 0.25
        units = ["u", "v"]
        [[arrow]]
        from = "u"
        to = "v"
        sign = "-"
        threshold = "1/2"
        [[arrow]]
        from = 2
        to = 1
        sign = -1
        threshold = 0.5
    "#;

    #[test]
    fn parses_names_indices_and_decimals() {
        let f = NetworkFile::parse(TOGGLE).unwrap();
        assert_eq!(f.spec.a(), &Rational::ratio(1, 4));
        assert_eq!(f.spec.k(0, 1), &Rational::one());
        assert_eq!(f.spec.t(1, 0), &Rational::ratio(1, 2));
        assert_eq!(f.spec.s(1, 0), Sign::Minus);
        assert!(f.spec.validate().is_empty());
    }

    #[test]
    fn round_trips() {
        let f = NetworkFile::parse(TOGGLE).unwrap();
        let back = NetworkFile::parse(&f.to_toml()).unwrap();
        assert_eq!(back.spec, f.spec);
        assert_eq!(back.units, f.units);
    }

    #[test]
    fn unweighted_arrows_share_the_rest() {
        let text = r#"
            a = "1/4"
            d = 3
            [[arrow]]
            from = 1
            to = 3
            sign = "+"
            threshold = "1/2"
            weight = "1/2"
            [[arrow]]
            from = 2
            to = 3
            sign = "+"
            threshold = "1/2"
            [[arrow]]
            from = 3
            to = 3
            sign = "-"
            threshold = "1/2"
        "#;
        let f = NetworkFile::parse(text).unwrap();
        assert_eq!(f.spec.k(1, 2), &Rational::ratio(1, 4));
        assert_eq!(f.spec.k(2, 2), &Rational::ratio(1, 4));
    }

    #[test]
    fn rejects_bad_references() {
        let text = "a = 0.25\nd = 1\n[[arrow]]\nfrom = 2\nto = 1\nsign = \"-\"\nthreshold = 0.5\n";
        assert!(matches!(NetworkFile::parse(text), Err(FileError::Format(_))));
        assert!(NetworkFile::parse("a = 0.25\n").is_err());
        assert!(NetworkFile::parse("a = \"x\"\nd = 1\n").is_err());
    }
}
