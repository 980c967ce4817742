use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ModelError;
use crate::numerics::Rational;

/// Activation sign of an arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn from_int(v: i64) -> Option<Self> {
        match v {
            -1 => Some(Sign::Minus),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Plus),
            _ => None,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }
}

/// Autonomous map (columns of `K` sum to one) or a driven sequence
/// (columns sum to less than one; the remainder is an external offset).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Autonomous,
    Sequence,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Autonomous => "autonomous",
            Mode::Sequence => "sequence",
        }
    }
}

/// Raw network parameters. `k[i][j]` is the action of unit `i` on unit `j`
/// and `t[i][j]` the threshold on `x_i` for that arrow.
#[derive(Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    mode: Mode,
    a: Rational,
    k: Vec<Vec<Rational>>,
    t: Vec<Vec<Rational>>,
    s: Vec<Vec<Sign>>,
}

impl NetworkSpec {
    /// Checks shapes only; everything else is reported by
    /// [`NetworkSpec::validate`]. Thresholds of absent arrows are set to 0.
    pub fn new(
        mode: Mode,
        a: Rational,
        k: Vec<Vec<Rational>>,
        mut t: Vec<Vec<Rational>>,
        s: Vec<Vec<Sign>>,
    ) -> Result<Self, ModelError> {
        let d = k.len();
        if d == 0 {
            return Err(ModelError::Shape("dimension must be positive".into()));
        }
        for (name, rows) in [("K", k.iter().map(Vec::len).collect::<Vec<_>>()), ("T", t.iter().map(Vec::len).collect()), ("s", s.iter().map(Vec::len).collect())] {
            if rows.len() != d || rows.iter().any(|&n| n != d) {
                return Err(ModelError::Shape(format!("{name} must be {d}x{d}")));
            }
        }
        for i in 0..d {
            for j in 0..d {
                if k[i][j].is_zero() {
                    t[i][j] = Rational::zero();
                }
            }
        }
        Ok(NetworkSpec { mode, a, k, t, s })
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn k(&self, i: usize, j: usize) -> &Rational {
        &self.k[i][j]
    }

    pub fn t(&self, i: usize, j: usize) -> &Rational {
        &self.t[i][j]
    }

    pub fn s(&self, i: usize, j: usize) -> Sign {
        self.s[i][j]
    }

    pub fn k_matrix(&self) -> &[Vec<Rational>] {
        &self.k
    }

    pub fn t_matrix(&self) -> &[Vec<Rational>] {
        &self.t
    }

    pub fn s_matrix(&self) -> &[Vec<Sign>] {
        &self.s
    }

    pub fn with_a(&self, a: Rational) -> Self {
        NetworkSpec { a, ..self.clone() }
    }

    pub fn column_sum(&self, j: usize) -> Rational {
        self.k.iter().map(|row| &row[j]).sum()
    }

    /// Restriction to the given vertices (in the given order).
    pub fn restrict(&self, vertices: &[usize], mode: Mode) -> Result<Self, ModelError> {
        let pick = |m: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
            vertices.iter().map(|&i| vertices.iter().map(|&j| m[i][j].clone()).collect()).collect()
        };
        let s = vertices.iter().map(|&i| vertices.iter().map(|&j| self.s[i][j]).collect()).collect();
        NetworkSpec::new(mode, self.a.clone(), pick(&self.k), pick(&self.t), s)
    }

    /// Every broken invariant. An empty list means the spec is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let d = self.dim();
        let mut out = Vec::new();
        let zero = Rational::zero();
        let one = Rational::one();
        if self.a < zero || self.a >= one {
            out.push(Violation {
                rule: Rule::ContractionRate,
                location: Location::Global,
                message: format!("contraction rate a = {} must lie in [0, 1)", self.a),
            });
        }
        for i in 0..d {
            for j in 0..d {
                let kij = &self.k[i][j];
                if *kij < zero || *kij > one {
                    out.push(Violation {
                        rule: Rule::InteractionRange,
                        location: Location::Entry { row: i, col: j },
                        message: format!("K[{}][{}] = {kij} outside [0, 1]", i + 1, j + 1),
                    });
                }
                let tij = &self.t[i][j];
                if *tij < zero || *tij > one {
                    out.push(Violation {
                        rule: Rule::ThresholdRange,
                        location: Location::Entry { row: i, col: j },
                        message: format!("T[{}][{}] = {tij} outside [0, 1]", i + 1, j + 1),
                    });
                }
                if kij.is_zero() != (self.s[i][j] == Sign::Zero) {
                    out.push(Violation {
                        rule: Rule::SignCompatibility,
                        location: Location::Entry { row: i, col: j },
                        message: format!(
                            "s[{}][{}] = {} incompatible with K[{}][{}] = {kij}",
                            i + 1,
                            j + 1,
                            self.s[i][j].as_int(),
                            i + 1,
                            j + 1
                        ),
                    });
                }
            }
        }
        for j in 0..d {
            let sum = self.column_sum(j);
            let ok = match self.mode {
                Mode::Autonomous => sum == one,
                Mode::Sequence => sum < one,
            };
            if !ok {
                let expected = match self.mode {
                    Mode::Autonomous => "= 1",
                    Mode::Sequence => "< 1",
                };
                out.push(Violation {
                    rule: Rule::ColumnNormalization,
                    location: Location::Column(j),
                    message: format!(
                        "column {} of K sums to {sum}, {} mode requires {expected}",
                        j + 1,
                        self.mode.name()
                    ),
                });
            }
        }
        out
    }
}

impl fmt::Debug for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NetworkSpec")
            .field("mode", &self.mode)
            .field("a", &self.a)
            .field("K", &self.k)
            .field("T", &self.t)
            .field("s", &self.s)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    ContractionRate,
    InteractionRange,
    ThresholdRange,
    SignCompatibility,
    ColumnNormalization,
    OffsetRange,
    OffsetLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Global,
    /// Zero-based matrix entry.
    Entry { row: usize, col: usize },
    Column(usize),
    /// Zero-based offset vector index and column.
    Offset { index: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetRule {
    /// Exactly the listed vectors; the sequence ends after them.
    Finite,
    /// The listed vectors repeated cyclically.
    Periodic,
    /// The first vector forever.
    Constant,
}

impl OffsetRule {
    pub fn name(self) -> &'static str {
        match self {
            OffsetRule::Finite => "finite",
            OffsetRule::Periodic => "periodic",
            OffsetRule::Constant => "constant",
        }
    }
}

/// External offsets `D_1, D_2, …` for a driven network. Step `k` (from time
/// `k − 1` to time `k`) uses `D_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetSequence {
    vectors: Vec<Vec<Rational>>,
    rule: OffsetRule,
}

impl OffsetSequence {
    pub fn new(vectors: Vec<Vec<Rational>>, rule: OffsetRule) -> Result<Self, ModelError> {
        if vectors.is_empty() {
            return Err(ModelError::Shape("offset sequence needs at least one vector".into()));
        }
        let d = vectors[0].len();
        if vectors.iter().any(|v| v.len() != d) {
            return Err(ModelError::Shape("offset vectors must share one length".into()));
        }
        Ok(OffsetSequence { vectors, rule })
    }

    pub fn constant(vector: Vec<Rational>) -> Self {
        OffsetSequence { vectors: alloc::vec![vector], rule: OffsetRule::Constant }
    }

    pub fn zeros(d: usize) -> Self {
        Self::constant(alloc::vec![Rational::zero(); d])
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn rule(&self) -> OffsetRule {
        self.rule
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// Offset used by step `k ≥ 1`, or `None` past the end of a finite list.
    pub fn for_step(&self, k: usize) -> Option<&[Rational]> {
        let idx = k.checked_sub(1)?;
        match self.rule {
            OffsetRule::Finite => self.vectors.get(idx).map(Vec::as_slice),
            OffsetRule::Periodic => Some(&self.vectors[idx % self.vectors.len()]),
            OffsetRule::Constant => Some(&self.vectors[0]),
        }
    }

    /// Checks `D ≥ 0` and `D_j + Σ_i K[i][j] ≤ 1` for every listed vector.
    pub fn validate_against(&self, spec: &NetworkSpec) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dim() != spec.dim() {
            out.push(Violation {
                rule: Rule::OffsetLength,
                location: Location::Global,
                message: format!("offset vectors have length {}, network has {}", self.dim(), spec.dim()),
            });
            return out;
        }
        let sums: Vec<Rational> = (0..spec.dim()).map(|j| spec.column_sum(j)).collect();
        for (index, v) in self.vectors.iter().enumerate() {
            for (col, dj) in v.iter().enumerate() {
                let total = dj + &sums[col];
                if dj.is_negative() || total > Rational::one() {
                    out.push(Violation {
                        rule: Rule::OffsetRange,
                        location: Location::Offset { index, col },
                        message: format!(
                            "offset {} column {}: D = {dj} with column sum {} leaves [0, 1]",
                            index + 1,
                            col + 1,
                            sums[col]
                        ),
                    });
                }
            }
        }
        out
    }
}
