use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use super::{BaseBundle, DegreeReduction};
use crate::model::{Network, DEFAULT_INDEGREE_CAP};
use crate::partition::BasePartition;

/// Where a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `1 + c(1 + c^d t^d)` with `c = #P − 1`.
    Polynomial,
    /// `1 + c₁(1 + c₂ t^q)` from a certified degree reduction.
    BoundDegree,
    /// `C_b(t)` times the bundle polynomial.
    SkewProduct,
    /// `2t + 2`.
    NegativeTwoCircuit,
    /// `t + 2`.
    SelfInhibitor,
    /// `4t²`, for `t ≥ 2`.
    Quadratic,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Polynomial => "polynomial",
            BoundKind::BoundDegree => "bound-degree",
            BoundKind::SkewProduct => "skew-product",
            BoundKind::NegativeTwoCircuit => "negative-2-circuit",
            BoundKind::SelfInhibitor => "self-inhibitor",
            BoundKind::Quadratic => "quadratic",
        }
    }
}

/// `constant + coefficient · t^degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub constant: BigUint,
    pub coefficient: BigUint,
    pub degree: u32,
}

impl Monomial {
    pub fn new(constant: impl Into<BigUint>, coefficient: impl Into<BigUint>, degree: u32) -> Self {
        Monomial { constant: constant.into(), coefficient: coefficient.into(), degree }
    }

    /// `1 + c(1 + c^n t^n)`.
    pub fn compatible(c: &BigUint, n: u32) -> Self {
        Monomial { constant: c + 1u32, coefficient: c * Pow::pow(c, n), degree: n }
    }

    pub fn eval(&self, t: usize) -> BigUint {
        &self.constant + &self.coefficient * Pow::pow(BigUint::from(t), self.degree)
    }
}

fn power(k: u32) -> String {
    if k == 1 {
        String::from("t")
    } else {
        alloc::format!("t^{k}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            0 => write!(f, "{}", &self.constant + &self.coefficient),
            _ if self.constant.is_zero() => write!(f, "{}·{}", self.coefficient, power(self.degree)),
            k => write!(f, "{} + {}·{}", self.constant, self.coefficient, power(k)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundForm {
    Closed(Monomial),
    /// `trace[t − 1] · factor(t)`, defined up to the trace horizon.
    ScaledTrace { trace: Vec<usize>, factor: Monomial },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPolynomial {
    pub kind: BoundKind,
    pub form: BoundForm,
    /// Named constants the bound was built from.
    pub constants: Vec<(String, BigUint)>,
    /// Whether the hypotheses behind the bound hold for this network.
    pub applicable: bool,
    /// First `t` the bound claims.
    pub valid_from: usize,
}

impl BoundPolynomial {
    fn closed(kind: BoundKind, m: Monomial) -> Self {
        BoundPolynomial { kind, form: BoundForm::Closed(m), constants: Vec::new(), applicable: true, valid_from: 1 }
    }

    /// `None` past the horizon of a trace-based bound.
    pub fn eval(&self, t: usize) -> Option<BigUint> {
        match &self.form {
            BoundForm::Closed(m) => Some(m.eval(t)),
            BoundForm::ScaledTrace { trace, factor } => {
                t.checked_sub(1).and_then(|k| trace.get(k)).map(|&c| BigUint::from(c) * factor.eval(t))
            }
        }
    }

    pub fn constant(&self, name: &str) -> Option<&BigUint> {
        self.constants.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

impl fmt::Display for BoundPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            BoundForm::Closed(m) => write!(f, "{m}"),
            BoundForm::ScaledTrace { factor, .. } => write!(f, "C_b(t) × ({factor})"),
        }
    }
}

fn injective(net: &Network) -> bool {
    net.injectivity_analysis(DEFAULT_INDEGREE_CAP).is_ok_and(|r| r.injective_at_a)
}

fn named(pairs: &[(&str, &BigUint)]) -> Vec<(String, BigUint)> {
    pairs.iter().map(|(n, v)| (String::from(*n), (*v).clone())).collect()
}

/// `1 + c(1 + c^d t^d)` with `c = #P − 1`. Flagged non-applicable when the
/// network is not coordinatewise injective.
pub fn bound_polynomial(net: &Network) -> BoundPolynomial {
    let base = BasePartition::build(net);
    let c = BigUint::from(base.c());
    let d = net.dim() as u32;
    let mut b = BoundPolynomial::closed(BoundKind::Polynomial, Monomial::compatible(&c, d));
    b.constants = named(&[("c", &c), ("d", &BigUint::from(d))]);
    b.applicable = injective(net);
    b
}

/// `1 + c₁(1 + c₂ t^q)` with `c₁ = #P − 1`, `M = #P`,
/// `m_j = (#P_j − 1) + Σ_{i∈R_j} #P_j (#P_i − 1)`, `n_j = max(m_j, #P_j)` and
/// `c₂ = M c₁^q Π_{j∈W} n_j`.
pub fn bound_degree(net: &Network, reduction: &DegreeReduction) -> BoundPolynomial {
    let base = BasePartition::build(net);
    let size = |i: usize| BigUint::from(base.coordinate(i).len());
    let c1 = BigUint::from(base.c());
    let m_big = BigUint::from(base.len());
    let q = reduction.q as u32;
    let assignment = reduction.assignment();
    let mut prod = BigUint::one();
    for &j in &reduction.essential {
        let pj = size(j);
        let mut mj = &pj - 1u32;
        for &(i, _) in assignment.iter().filter(|&&(_, jj)| jj == j) {
            mj += &pj * (size(i) - 1u32);
        }
        prod *= mj.max(pj);
    }
    let c2 = &m_big * Pow::pow(&c1, q) * &prod;
    let mut b = BoundPolynomial::closed(BoundKind::BoundDegree, Monomial::new(&c1 + 1u32, &c1 * &c2, q));
    b.constants = named(&[("c1", &c1), ("c2", &c2), ("M", &m_big), ("q", &BigUint::from(q)), ("prod_n", &prod)]);
    b.applicable = injective(net);
    b
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a base-bundle split: some arrow runs from the bundle into the base")]
pub struct InvalidSplit;

/// `C_b(t) × (1 + c_d(1 + c_d^{#V_d} t^{#V_d}))`, where `base_trace` holds the
/// measured `C_b(1), C_b(2), …` and `c_d + 1` is the number of base atoms
/// over the bundle coordinates.
pub fn bound_skew(net: &Network, split: &BaseBundle, base_trace: &[usize]) -> Result<BoundPolynomial, InvalidSplit> {
    if !net.underlying().is_base_bundle(&split.base, &split.bundle) {
        return Err(InvalidSplit);
    }
    let base = BasePartition::build(net);
    let atoms: BigUint = split.bundle.iter().map(|&i| BigUint::from(base.coordinate(i).len())).product();
    let cd = atoms - 1u32;
    let n = split.bundle.len() as u32;
    let factor = if n == 0 { Monomial::new(1u32, 0u32, 0) } else { Monomial::compatible(&cd, n) };
    Ok(BoundPolynomial {
        kind: BoundKind::SkewProduct,
        form: BoundForm::ScaledTrace { trace: base_trace.to_vec(), factor },
        constants: named(&[("c_d", &cd), ("bundle_dim", &BigUint::from(n))]),
        applicable: injective(net),
        valid_from: 1,
    })
}

pub fn self_inhibitor_bound() -> BoundPolynomial {
    BoundPolynomial::closed(BoundKind::SelfInhibitor, Monomial::new(2u32, 1u32, 1))
}

pub fn negative_circuit_bound() -> BoundPolynomial {
    BoundPolynomial::closed(BoundKind::NegativeTwoCircuit, Monomial::new(2u32, 2u32, 1))
}

pub fn quadratic_bound() -> BoundPolynomial {
    let mut b = BoundPolynomial::closed(BoundKind::Quadratic, Monomial::new(0u32, 4u32, 2));
    b.valid_from = 2;
    b
}

/// One row of a bound comparison. `bound` is `None` where the bound is
/// undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub t: usize,
    pub complexity: usize,
    pub bound: Option<BigUint>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub rows: Vec<BoundRow>,
    pub first_violation: Option<BoundRow>,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }

    /// Number of rows where the bound was compared.
    pub fn compared(&self) -> usize {
        self.rows.iter().filter(|r| r.bound.is_some()).count()
    }
}

/// Compares `C(t) ≤ bound(t)` for every `t ≥ valid_from` where the bound is
/// defined. `complexities[k]` is `C(k + 1)`.
pub fn verify_bound(complexities: &[usize], bound: &BoundPolynomial) -> BoundCheck {
    let mut rows = Vec::with_capacity(complexities.len());
    let mut first_violation = None;
    for (k, &c) in complexities.iter().enumerate() {
        let t = k + 1;
        let value = if t >= bound.valid_from { bound.eval(t) } else { None };
        let ok = value.as_ref().is_none_or(|b| BigUint::from(c) <= *b);
        let row = BoundRow { t, complexity: c, bound: value, ok };
        if !ok && first_violation.is_none() {
            first_violation = Some(row.clone());
        }
        rows.push(row);
    }
    BoundCheck { kind: bound.kind, rows, first_violation }
}

/// Least-squares slope of `ln C(t)` against `t` over the second half of the
/// trace; `None` below ten points.
pub fn growth_rate(complexities: &[usize]) -> Option<f64> {
    let n = complexities.len();
    if n < 10 || complexities.contains(&0) {
        return None;
    }
    let tail: Vec<(f64, f64)> =
        complexities.iter().enumerate().skip(n / 2).map(|(k, &c)| ((k + 1) as f64, libm::log(c as f64))).collect();
    let m = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / m;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx.is_zero() {
        return None;
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;
    use crate::presets;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn polynomial_bound_substitution() {
        let net = presets::negative_2_circuit(q(1, 4), q(1, 2), q(1, 2)).unwrap();
        let b = bound_polynomial(&net);
        // 1 + 3(1 + 9t²)
        for t in 1..20usize {
            assert_eq!(b.eval(t).unwrap(), BigUint::from(4 + 27 * t * t));
        }
        let si = bound_polynomial(&presets::self_inhibitor(q(1, 4), q(1, 2)).unwrap());
        assert_eq!(si.eval(7).unwrap(), BigUint::from(9u32));
        assert!(si.applicable);
    }

    #[test]
    fn circuit_constant_is_two_to_the_d_minus_one() {
        for d in 1..6 {
            let net =
                presets::circuit(d, &alloc::vec![crate::model::Sign::Plus; d], q(1, 4), &alloc::vec![q(1, 2); d]).unwrap();
            assert_eq!(bound_polynomial(&net).constant("c").unwrap(), &BigUint::from((1u32 << d) - 1));
        }
    }

    #[test]
    fn growth_rate_diagnostics() {
        assert_eq!(growth_rate(&[5; 40]), Some(0.0));
        let lin: Vec<usize> = (1..=2000).map(|t| t + 2).collect();
        assert!(growth_rate(&lin).unwrap() < 1e-3);
        let exp: Vec<usize> = (1..=40).map(|t| 1usize << t).collect();
        assert!((growth_rate(&exp).unwrap() - core::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(growth_rate(&[1, 2, 3]), None);
    }

    #[test]
    fn wrong_bound_fails_at_one() {
        let one = BoundPolynomial::closed(BoundKind::Quadratic, Monomial::new(1u32, 0u32, 0));
        let check = verify_bound(&[2, 3, 4], &one);
        assert_eq!(check.first_violation.unwrap().t, 1);
    }

    #[test]
    fn quadratic_skips_the_first_step() {
        let check = verify_bound(&[5, 16, 36], &quadratic_bound());
        assert!(check.holds());
        assert_eq!(check.compared(), 2);
    }
}
