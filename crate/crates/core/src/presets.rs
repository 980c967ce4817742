//! The standard example networks.
//!
//! Every builder validates its result. Unless stated otherwise the defaults
//! are `a = 1/4`, thresholds `1/2` and equal weights within each column.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Mode, ModelError, Network, NetworkSpec, Sign};
use crate::numerics::Rational;

fn half() -> Rational {
    Rational::ratio(1, 2)
}

pub fn default_a() -> Rational {
    Rational::ratio(1, 4)
}

/// Builds an autonomous network from a list of arrows `(tail, head, sign,
/// threshold)`, splitting each column's unit weight equally.
pub fn from_arrows(d: usize, a: Rational, arrows: &[(usize, usize, Sign, Rational)]) -> Result<Network, ModelError> {
    let mut indeg = vec![0i64; d];
    for &(_, j, _, _) in arrows {
        indeg[j] += 1;
    }
    let mut k = vec![vec![Rational::zero(); d]; d];
    let mut t = vec![vec![Rational::zero(); d]; d];
    let mut s = vec![vec![Sign::Zero; d]; d];
    for (i, j, sign, thr) in arrows {
        k[*i][*j] = Rational::ratio(1, indeg[*j]);
        t[*i][*j] = thr.clone();
        s[*i][*j] = *sign;
    }
    Network::new(NetworkSpec::new(Mode::Autonomous, a, k, t, s)?)
}

/// `x ↦ a·x + (1 − a)·H(T − x)`.
pub fn self_inhibitor(a: Rational, threshold: Rational) -> Result<Network, ModelError> {
    from_arrows(1, a, &[(0, 0, Sign::Minus, threshold)])
}

/// The `d`-circuit `0 → 1 → … → d−1 → 0`; `signs[i]` and `thresholds[i]`
/// belong to the arrow leaving unit `i`.
pub fn circuit(d: usize, signs: &[Sign], a: Rational, thresholds: &[Rational]) -> Result<Network, ModelError> {
    if signs.len() != d || thresholds.len() != d {
        return Err(ModelError::Shape("circuit needs one sign and one threshold per arrow".into()));
    }
    let arrows: Vec<_> = (0..d).map(|i| (i, (i + 1) % d, signs[i], thresholds[i].clone())).collect();
    from_arrows(d, a, &arrows)
}

/// Positive 2-circuit with mutual inhibition.
pub fn toggle_switch(a: Rational, t12: Rational, t21: Rational) -> Result<Network, ModelError> {
    circuit(2, &[Sign::Minus, Sign::Minus], a, &[t12, t21])
}

/// Unit 1 activates unit 2, unit 2 inhibits unit 1.
pub fn negative_2_circuit(a: Rational, t12: Rational, t21: Rational) -> Result<Network, ModelError> {
    circuit(2, &[Sign::Plus, Sign::Minus], a, &[t12, t21])
}

/// Negative 3-circuit of inhibitions.
pub fn repressilator(a: Rational, thresholds: &[Rational]) -> Result<Network, ModelError> {
    circuit(3, &[Sign::Minus; 3], a, thresholds)
}

/// Signs and thresholds of one 2-loop `driver ⇄ end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopParams {
    pub to_end: (Sign, Rational),
    pub to_driver: (Sign, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fig3Params {
    pub loops: [LoopParams; 3],
}

impl Default for Fig3Params {
    /// One negative loop and two mutually inhibiting ones.
    fn default() -> Self {
        let lp = |s1, s2| LoopParams { to_end: (s1, half()), to_driver: (s2, half()) };
        Fig3Params {
            loops: [
                lp(Sign::Plus, Sign::Minus),
                lp(Sign::Minus, Sign::Minus),
                lp(Sign::Minus, Sign::Minus),
            ],
        }
    }
}

/// Vertex order of [`fig3_three_loops`].
pub const FIG3_VERTICES: [&str; 6] = ["i1", "a", "i2", "b", "i3", "c"];

/// Three disjoint 2-loops with isolated ends `a`, `b`, `c`. Vertices are
/// ordered as in [`FIG3_VERTICES`].
pub fn fig3_three_loops(a: Rational, params: &Fig3Params) -> Result<Network, ModelError> {
    let mut arrows = Vec::new();
    for (n, lp) in params.loops.iter().enumerate() {
        let (driver, end) = (2 * n, 2 * n + 1);
        arrows.push((driver, end, lp.to_end.0, lp.to_end.1.clone()));
        arrows.push((end, driver, lp.to_driver.0, lp.to_driver.1.clone()));
    }
    from_arrows(6, a, &arrows)
}

/// Thresholds of the six arrows of [`p53`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P53Params {
    pub p53_m: Rational,
    pub m_p53: Rational,
    pub p53_b: Rational,
    pub p53_c: Rational,
    pub b_c: Rational,
    pub c_b: Rational,
}

impl Default for P53Params {
    fn default() -> Self {
        P53Params { p53_m: half(), m_p53: half(), p53_b: half(), p53_c: half(), b_c: half(), c_b: half() }
    }
}

/// Vertex order of [`p53`].
pub const P53_VERTICES: [&str; 4] = ["p53", "m", "b", "c"];

/// p53 activates mdm2, which inhibits p53; p53 inhibits `b` and `c`, which
/// activate each other.
pub fn p53(a: Rational, params: &P53Params) -> Result<Network, ModelError> {
    let (p, m, b, c) = (0, 1, 2, 3);
    from_arrows(
        4,
        a,
        &[
            (p, m, Sign::Plus, params.p53_m.clone()),
            (m, p, Sign::Minus, params.m_p53.clone()),
            (p, b, Sign::Minus, params.p53_b.clone()),
            (p, c, Sign::Minus, params.p53_c.clone()),
            (b, c, Sign::Plus, params.b_c.clone()),
            (c, b, Sign::Plus, params.c_b.clone()),
        ],
    )
}

/// Unit 0 receives the given weights from units `1..=n`; each of those
/// receives weight 1 from unit 0. All thresholds `1/2`, signs `+`.
pub fn column_probe(weights: &[Rational], a: Rational) -> Result<NetworkSpec, ModelError> {
    let d = weights.len() + 1;
    let mut k = vec![vec![Rational::zero(); d]; d];
    let mut t = vec![vec![Rational::zero(); d]; d];
    let mut s = vec![vec![Sign::Zero; d]; d];
    for (n, w) in weights.iter().enumerate() {
        let i = n + 1;
        k[i][0] = w.clone();
        k[0][i] = Rational::one();
        for (r, c) in [(i, 0), (0, i)] {
            t[r][c] = half();
            s[r][c] = Sign::Plus;
        }
    }
    NetworkSpec::new(Mode::Autonomous, a, k, t, s)
}
