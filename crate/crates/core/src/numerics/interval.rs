use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{NumericsError, Rational, Scalar};

/// A nonempty interval of the real line with explicit endpoint inclusion.
///
/// The empty set is never representable: constructors and intersections
/// return `None` instead. A point is the closed interval `[x, x]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlaggedInterval<S = Rational> {
    lo: S,
    hi: S,
    lo_closed: bool,
    hi_closed: bool,
}

impl<S: Scalar> FlaggedInterval<S> {
    pub fn new(lo: S, hi: S, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(FlaggedInterval { lo, hi, lo_closed, hi_closed }),
            Ordering::Equal if lo_closed && hi_closed => {
                Some(FlaggedInterval { lo, hi, lo_closed, hi_closed })
            }
            _ => None,
        }
    }

    pub fn closed(lo: S, hi: S) -> Option<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn singleton(x: S) -> Self {
        FlaggedInterval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn unit() -> Self {
        FlaggedInterval { lo: S::zero(), hi: S::one(), lo_closed: true, hi_closed: true }
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> S {
        self.hi.minus(&self.lo)
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn closure_contains(&self, x: &S) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    /// Whether `x` lies strictly between the endpoints.
    pub fn interior_contains(&self, x: &S) -> bool {
        *x > self.lo && *x < self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (&self.lo, self.lo_closed),
            Ordering::Less => (&other.lo, other.lo_closed),
            Ordering::Equal => (&self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (&self.hi, self.hi_closed),
            Ordering::Greater => (&other.hi, other.hi_closed),
            Ordering::Equal => (&self.hi, self.hi_closed && other.hi_closed),
        };
        Self::new(lo.clone(), hi.clone(), lo_closed, hi_closed)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.intersect(other).is_some()
    }

    /// Image under `x ↦ a·x + b` for `0 < a < 1`.
    pub fn affine_image(&self, a: &S, b: &S) -> Result<Self, NumericsError> {
        if *a <= S::zero() || *a >= S::one() {
            return Err(NumericsError::SlopeOutOfRange(a.to_string()));
        }
        Ok(self.map_affine(a, b))
    }

    /// Image under `x ↦ a·x + b` for any `a ≥ 0`; `a = 0` collapses to the
    /// point `{b}`.
    pub fn map_affine(&self, a: &S, b: &S) -> Self {
        if *a == S::zero() {
            return Self::singleton(b.clone());
        }
        FlaggedInterval {
            lo: self.lo.affine(a, b),
            hi: self.hi.affine(a, b),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// Distance from `x` to the set (zero on the closure).
    pub fn distance_to(&self, x: &S) -> S {
        if *x < self.lo {
            self.lo.minus(x)
        } else if *x > self.hi {
            x.minus(&self.hi)
        } else {
            S::zero()
        }
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FlaggedInterval<T> {
        FlaggedInterval {
            lo: f(&self.lo),
            hi: f(&self.hi),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }
}

impl<S: Scalar> fmt::Display for FlaggedInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl<S: Scalar> fmt::Debug for FlaggedInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product of nonempty flagged intervals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect<S = Rational> {
    sides: Vec<FlaggedInterval<S>>,
}

impl<S: Scalar> Rect<S> {
    pub fn new(sides: Vec<FlaggedInterval<S>>) -> Self {
        Rect { sides }
    }

    pub fn unit(dim: usize) -> Self {
        Rect { sides: (0..dim).map(|_| FlaggedInterval::unit()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[FlaggedInterval<S>] {
        &self.sides
    }

    pub fn side(&self, i: usize) -> &FlaggedInterval<S> {
        &self.sides[i]
    }

    pub fn into_sides(self) -> Vec<FlaggedInterval<S>> {
        self.sides
    }

    pub fn intersect(&self, other: &Self) -> Result<Option<Self>, NumericsError> {
        if self.dim() != other.dim() {
            return Err(NumericsError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        let mut sides = Vec::with_capacity(self.dim());
        for (u, v) in self.sides.iter().zip(&other.sides) {
            match u.intersect(v) {
                Some(w) => sides.push(w),
                None => return Ok(None),
            }
        }
        Ok(Some(Rect { sides }))
    }

    pub fn contains(&self, point: &[S]) -> bool {
        point.len() == self.dim() && self.sides.iter().zip(point).all(|(s, x)| s.contains(x))
    }

    pub fn closure_contains(&self, point: &[S]) -> bool {
        point.len() == self.dim()
            && self.sides.iter().zip(point).all(|(s, x)| s.closure_contains(x))
    }
}

impl<S: Scalar> fmt::Display for Rect<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sides.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Rect<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    type I = FlaggedInterval<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn iv(lo: Rational, hi: Rational, lc: bool, hc: bool) -> I {
        I::new(lo, hi, lc, hc).unwrap()
    }

    #[test]
    fn touching_endpoints_with_incompatible_flags_are_disjoint() {
        let u = iv(q(0, 1), q(1, 2), true, true);
        let v = iv(q(1, 2), q(1, 1), false, true);
        assert_eq!(u.intersect(&v), None);
    }

    #[test]
    fn closed_endpoints_meet_in_a_point() {
        let u = iv(q(0, 1), q(1, 2), true, true);
        let v = iv(q(1, 2), q(1, 1), true, true);
        let w = u.intersect(&v).unwrap();
        assert!(w.is_singleton());
        assert_eq!(w, I::singleton(q(1, 2)));
    }

    #[test]
    fn overlap_inherits_flags() {
        let u = iv(q(1, 4), q(3, 4), true, false);
        let v = iv(q(1, 2), q(1, 1), false, true);
        assert_eq!(u.intersect(&v).unwrap(), iv(q(1, 2), q(3, 4), false, false));
    }

    #[test]
    fn empty_is_not_representable() {
        assert!(I::new(q(1, 2), q(1, 2), true, false).is_none());
        assert!(I::new(q(1, 2), q(1, 4), true, true).is_none());
    }

    #[test]
    fn affine_images() {
        let unit = I::unit();
        assert_eq!(unit.affine_image(&q(1, 4), &q(3, 4)).unwrap(), iv(q(3, 4), q(1, 1), true, true));
        let half_open = iv(q(1, 2), q(1, 1), true, false);
        assert_eq!(
            half_open.affine_image(&q(1, 2), &q(0, 1)).unwrap(),
            iv(q(1, 4), q(1, 2), true, false)
        );
        let t = q(2, 7);
        let a = q(1, 3);
        let b = q(1, 5);
        let expected = &a * &t + &b;
        assert_eq!(I::singleton(t).affine_image(&a, &b).unwrap(), I::singleton(expected));
    }

    #[test]
    fn affine_image_rejects_bad_slopes() {
        let unit = I::unit();
        assert!(unit.affine_image(&q(0, 1), &q(0, 1)).is_err());
        assert!(unit.affine_image(&q(1, 1), &q(0, 1)).is_err());
        assert!(unit.affine_image(&q(-1, 2), &q(0, 1)).is_err());
    }

    #[test]
    fn rect_intersection() {
        let r = Rect::new(vec![iv(q(0, 1), q(1, 2), true, false), I::unit()]);
        assert_eq!(r.intersect(&r).unwrap(), Some(r.clone()));
        let s = Rect::new(vec![iv(q(1, 2), q(1, 1), true, true), I::unit()]);
        assert_eq!(r.intersect(&s).unwrap(), None);
        let bad = Rect::new(vec![I::unit()]);
        assert!(r.intersect(&bad).is_err());
    }

    #[test]
    fn rect_mixed_overlap_is_coordinatewise() {
        let u0 = iv(q(0, 1), q(1, 2), true, true);
        let u1 = iv(q(1, 3), q(1, 1), false, true);
        let v0 = iv(q(1, 4), q(3, 4), false, true);
        let v1 = iv(q(0, 1), q(2, 3), true, false);
        let r = Rect::new(vec![u0.clone(), u1.clone()]);
        let s = Rect::new(vec![v0.clone(), v1.clone()]);
        let expected = Rect::new(vec![u0.intersect(&v0).unwrap(), u1.intersect(&v1).unwrap()]);
        assert_eq!(r.intersect(&s).unwrap(), Some(expected));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (0i64..=24).prop_map(|n| q(n, 24))
    }

    fn arb_interval() -> impl Strategy<Value = I> {
        (arb_rational(), arb_rational(), any::<bool>(), any::<bool>()).prop_filter_map(
            "nonempty",
            |(x, y, lc, hc)| {
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                I::new(lo, hi, lc, hc)
            },
        )
    }

    fn arb_slope() -> impl Strategy<Value = Rational> {
        (1i64..100).prop_map(|n| q(n, 100))
    }

    /// Brute-force membership over a fine grid decides the same set.
    fn same_set(a: &Option<I>, b: &Option<I>) -> bool {
        (0..=96).all(|k| {
            let x = q(k, 96);
            a.as_ref().is_some_and(|u| u.contains(&x)) == b.as_ref().is_some_and(|u| u.contains(&x))
        })
    }

    proptest! {
        #[test]
        fn intersect_is_commutative(u in arb_interval(), v in arb_interval()) {
            prop_assert_eq!(u.intersect(&v), v.intersect(&u));
        }

        #[test]
        fn intersect_is_associative(u in arb_interval(), v in arb_interval(), w in arb_interval()) {
            let left = u.intersect(&v).and_then(|x| x.intersect(&w));
            let right = v.intersect(&w).and_then(|x| u.intersect(&x));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn intersect_is_idempotent(u in arb_interval()) {
            prop_assert_eq!(u.intersect(&u), Some(u.clone()));
        }

        #[test]
        fn intersect_matches_pointwise_membership(u in arb_interval(), v in arb_interval()) {
            let w = u.intersect(&v);
            let oracle = (0..=96).all(|k| {
                let x = q(k, 96);
                w.as_ref().is_some_and(|i| i.contains(&x)) == (u.contains(&x) && v.contains(&x))
            });
            prop_assert!(oracle);
        }

        #[test]
        fn affine_image_commutes_with_intersection(
            u in arb_interval(), v in arb_interval(), a in arb_slope(), b in arb_rational()
        ) {
            let b = &b * &(Rational::one() - &a);
            let lhs = u.intersect(&v).map(|w| w.affine_image(&a, &b).unwrap());
            let fu = u.affine_image(&a, &b).unwrap();
            let fv = v.affine_image(&a, &b).unwrap();
            let rhs = fu.intersect(&fv);
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(same_set(&lhs, &rhs));
        }

        #[test]
        fn affine_image_contracts_width_exactly(u in arb_interval(), a in arb_slope(), b in arb_rational()) {
            let image = u.affine_image(&a, &b).unwrap();
            prop_assert_eq!(image.width(), &a * &u.width());
        }

        #[test]
        fn small_denominators_compare_exactly(p in 0i64..=1_000_000, r in 1i64..=1_000_000) {
            let x = q(p, 1_000_000);
            let y = q(r, 1_000_000);
            let u = I::closed(x.clone().min(y.clone()), x.clone().max(y.clone())).unwrap();
            prop_assert!(u.contains(&x) && u.contains(&y));
            prop_assert_eq!(x < y, p < r);
        }
    }
}
