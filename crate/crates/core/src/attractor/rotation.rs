use crate::model::{Network, Sign};
use crate::numerics::Rational;
use crate::partition::TraceConfig;

use super::orbit::simulate_orbit;
use super::periodic::{analyze_attractor, OrbitStatus};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RotationError {
    #[error("rotation number needs a self-inhibitor: d = 1 with a single negative self-arrow")]
    NotSelfInhibitor,
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    #[error(transparent)]
    Trace(#[from] crate::partition::TraceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationEstimate {
    /// Fraction of the first `t_max` iterates with `x < T`, resolution
    /// `1/t_max`.
    pub estimate: Rational,
    pub t_max: usize,
    /// `k/p` from a verified periodic orbit with `k` of its `p` points
    /// below `T`, when the exact engine stabilized within `t_max`.
    pub exact: Option<Rational>,
}

fn threshold_of(net: &Network) -> Result<Rational, RotationError> {
    let spec = net.spec();
    if net.dim() != 1 || net.out_neighbors(0) != [0] || spec.s(0, 0) != Sign::Minus {
        return Err(RotationError::NotSelfInhibitor);
    }
    Ok(spec.t(0, 0).clone())
}

/// Itinerary frequency of the upper branch `H(T − x) = 1` from `x0`.
pub fn rotation_number(net: &Network, x0: &Rational, t_max: usize) -> Result<RotationEstimate, RotationError> {
    let threshold = threshold_of(net)?;
    let orbit = simulate_orbit(net, core::slice::from_ref(x0), t_max)?;
    let below = orbit.points.iter().filter(|p| p[0] < threshold).count();
    let estimate = Rational::ratio(below as i64, t_max.max(1) as i64);
    let report = analyze_attractor(net, &TraceConfig::new(t_max.max(2)))?;
    let exact = report.orbits.iter().find(|o| o.status == OrbitStatus::Verified).map(|o| {
        let k = o.points.iter().filter(|p| p[0] < threshold).count();
        Rational::ratio(k as i64, o.period as i64)
    });
    Ok(RotationEstimate { estimate, t_max, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn half_rotation() {
        let net = presets::self_inhibitor(q(1, 4), q(1, 2)).unwrap();
        let r = rotation_number(&net, &q(0, 1), 100).unwrap();
        assert_eq!(r.exact, Some(q(1, 2)));
        assert_eq!(r.estimate, q(1, 2));
    }

    #[test]
    fn rejects_other_networks() {
        let net = presets::toggle_switch(q(1, 4), q(1, 2), q(1, 2)).unwrap();
        assert_eq!(rotation_number(&net, &q(0, 1), 10), Err(RotationError::NotSelfInhibitor));
    }
}
