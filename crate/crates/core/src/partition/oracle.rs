use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::BasePartition;
use crate::model::{ModelError, Network};
use crate::numerics::Rational;

/// Lower bound on `C(t)`: the number of distinct length-`t` itineraries seen
/// from an exact grid of initial points.
///
/// Each axis carries `k / resolution` for `0 ≤ k ≤ resolution` plus one point
/// inside every base atom of that coordinate. Orbits are iterated with the
/// map itself, independently of the partition engine.
pub fn grid_oracle_complexity(net: &Network, t: usize, resolution: usize) -> Result<usize, ModelError> {
    let base = BasePartition::build(net);
    let d = net.dim();
    let two = Rational::from_integer(2);
    let axes: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let mut axis: BTreeSet<Rational> = (0..=resolution).map(|k| Rational::ratio(k as i64, resolution.max(1) as i64)).collect();
            for atom in &base.coordinate(i).atoms {
                axis.insert(&(atom.lo() + atom.hi()) / &two);
            }
            axis.into_iter().collect()
        })
        .collect();

    let mut words: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut idx = alloc::vec![0usize; d];
    loop {
        let mut x: Vec<Rational> = (0..d).map(|i| axes[i][idx[i]].clone()).collect();
        let mut word = Vec::with_capacity(t);
        for step in 0..t {
            let w = base.locate(&x).ok_or(ModelError::OutsideCube(0))?;
            word.push(w as u32);
            if step + 1 < t {
                x = net.evaluate_map(&x, None)?;
            }
        }
        words.insert(word);

        let mut j = d;
        loop {
            if j == 0 {
                return Ok(words.len());
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}
