//! Seeded random networks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regnet_core::model::{Mode, ModelError, Network, NetworkSpec, Sign, DEFAULT_INDEGREE_CAP};
use regnet_core::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub d: usize,
    /// Probability of each ordered pair `(i, j)`, self-arrows included.
    pub density: f64,
    pub seed: u64,
    /// Draw `a` uniformly from `(0, a0)` instead of `(0, 1)`.
    pub below_a0: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { d: 3, density: 0.5, seed: 0, below_a0: true }
    }
}

/// Grid for thresholds and the uniform draw of `a`.
const GRID: i64 = 1000;

/// Arrows at the given density (every column gets at least one), integer
/// weights 1..=4 normalized per column, thresholds in `(0, 1)` on a
/// `1/16` grid and random signs.
pub fn random_spec(params: &RandomParams) -> Result<NetworkSpec, ModelError> {
    let d = params.d;
    if d == 0 {
        return Err(ModelError::Shape("dimension must be positive".into()));
    }
    if !(params.density > 0.0 && params.density <= 1.0) {
        return Err(ModelError::Shape(format!("density {} outside (0, 1]", params.density)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut arrow = vec![vec![false; d]; d];
    for row in arrow.iter_mut() {
        for cell in row.iter_mut() {
            *cell = rng.gen_bool(params.density);
        }
    }
    for j in 0..d {
        if (0..d).all(|i| !arrow[i][j]) {
            arrow[rng.gen_range(0..d)][j] = true;
        }
    }
    let mut k = vec![vec![Rational::zero(); d]; d];
    let mut t = vec![vec![Rational::zero(); d]; d];
    let mut s = vec![vec![Sign::Zero; d]; d];
    for j in 0..d {
        let weights: Vec<i64> = (0..d).map(|i| if arrow[i][j] { rng.gen_range(1..=4) } else { 0 }).collect();
        let total: i64 = weights.iter().sum();
        for i in 0..d {
            if weights[i] > 0 {
                k[i][j] = Rational::ratio(weights[i], total);
                t[i][j] = Rational::ratio(rng.gen_range(1..16), 16);
                s[i][j] = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            }
        }
    }
    let probe = Network::new(NetworkSpec::new(Mode::Autonomous, Rational::zero(), k, t, s)?)?;
    let ceiling = if params.below_a0 {
        probe.injectivity_analysis(DEFAULT_INDEGREE_CAP)?.a0
    } else {
        Rational::one()
    };
    let u = Rational::ratio(rng.gen_range(1..GRID), GRID);
    Ok(probe.spec().with_a(&ceiling * &u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_spec() {
        let p = RandomParams { d: 4, seed: 11, ..Default::default() };
        assert_eq!(random_spec(&p).unwrap(), random_spec(&p).unwrap());
        let q = RandomParams { seed: 12, ..p.clone() };
        assert_ne!(random_spec(&p).unwrap(), random_spec(&q).unwrap());
    }

    #[test]
    fn below_a0_is_injective() {
        for seed in 0..30 {
            let p = RandomParams { d: 1 + (seed as usize) % 4, seed, ..Default::default() };
            let net = Network::new(random_spec(&p).unwrap()).unwrap();
            let r = net.injectivity_analysis(DEFAULT_INDEGREE_CAP).unwrap();
            assert!(r.injective_at_a && net.a() < &r.a0, "seed {seed}");
        }
    }

    #[test]
    fn full_density_is_complete() {
        let p = RandomParams { d: 3, density: 1.0, seed: 5, below_a0: false };
        let spec = random_spec(&p).unwrap();
        assert!(spec.validate().is_empty());
        for i in 0..3 {
            for j in 0..3 {
                assert_ne!(spec.s(i, j), Sign::Zero);
            }
        }
    }

    #[test]
    fn rejects_bad_density() {
        assert!(random_spec(&RandomParams { density: 0.0, ..Default::default() }).is_err());
        assert!(random_spec(&RandomParams { density: 1.5, ..Default::default() }).is_err());
    }
}
