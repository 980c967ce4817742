use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};

use super::engine::{AtomNode, Generation};
use crate::numerics::{Rational, Rect, ScaledInt, Scalar, F64};

/// How the engine stores numbers.
///
/// A representation may depend on the generation: values of generation `t`
/// are produced by [`Representation::lift_all`] at that `t`, and only values
/// of the same generation are ever compared.
pub trait Representation: Scalar {
    /// What finished generations are reported in.
    type Output: Scalar;
    type Context: Clone + Debug + Send + Sync;
    /// Whether lifted values are the same at every generation.
    const STATIC: bool;

    /// `constants` lists every rational the run can add or compare against.
    fn context(a: &Rational, constants: &[Rational]) -> Self::Context;
    fn lift_all(cx: &Self::Context, t: usize, values: &[Rational]) -> Vec<Self>;
    /// Slope of the step map in this representation.
    fn slope(cx: &Self::Context, a: &Rational) -> Self;
    fn lower_generation(gen: Generation<Self>, cx: &Self::Context) -> Generation<Self::Output>;
}

impl Representation for Rational {
    type Output = Rational;
    type Context = ();
    const STATIC: bool = true;

    fn context(_: &Rational, _: &[Rational]) {}

    fn lift_all(_: &(), _: usize, values: &[Rational]) -> Vec<Self> {
        values.to_vec()
    }

    fn slope(_: &(), a: &Rational) -> Self {
        a.clone()
    }

    fn lower_generation(gen: Generation<Self>, _: &()) -> Generation<Self> {
        gen
    }
}

impl Representation for F64 {
    type Output = F64;
    type Context = ();
    const STATIC: bool = true;

    fn context(_: &Rational, _: &[Rational]) {}

    fn lift_all(_: &(), _: usize, values: &[Rational]) -> Vec<Self> {
        values.iter().map(|v| F64(v.to_f64())).collect()
    }

    fn slope(_: &(), a: &Rational) -> Self {
        F64(a.to_f64())
    }

    fn lower_generation(gen: Generation<Self>, _: &()) -> Generation<Self> {
        gen
    }
}

/// Generation `t` is stored over the denominator `L·q^{t−1}`, where `a = p/q`
/// and `L` clears every constant. One step maps the numerator `X` to
/// `p·X + B` with `B` an integer, so no gcd is ever taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleContext {
    l: BigInt,
    p: BigInt,
    q: BigInt,
}

impl ScaleContext {
    pub fn denominator(&self, t: usize) -> BigInt {
        &self.l * Pow::pow(&self.q, (t - 1) as u32)
    }
}

impl Representation for ScaledInt {
    type Output = Rational;
    type Context = ScaleContext;
    const STATIC: bool = false;

    fn context(a: &Rational, constants: &[Rational]) -> ScaleContext {
        let l = constants.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        ScaleContext { l, p: a.numer().clone(), q: a.denom().clone() }
    }

    fn lift_all(cx: &ScaleContext, t: usize, values: &[Rational]) -> Vec<Self> {
        let den = cx.denominator(t);
        values
            .iter()
            .map(|v| {
                let (factor, rem) = den.div_rem(v.denom());
                assert!(rem == BigInt::from(0), "{v} was not registered with the scale context");
                ScaledInt(v.numer() * factor)
            })
            .collect()
    }

    fn slope(cx: &ScaleContext, _: &Rational) -> Self {
        ScaledInt(cx.p.clone())
    }

    fn lower_generation(gen: Generation<Self>, cx: &ScaleContext) -> Generation<Rational> {
        let den = cx.denominator(gen.t);
        let lower = |x: &ScaledInt| Rational::from_big(x.0.clone(), den.clone());
        Generation {
            t: gen.t,
            nodes: gen
                .nodes
                .into_iter()
                .map(|n| AtomNode {
                    rect: Rect::new(n.rect.sides().iter().map(|s| s.convert(lower)).collect()),
                    atom: n.atom,
                    parent: n.parent,
                })
                .collect(),
        }
    }
}
