use alloc::vec;
use alloc::vec::Vec;

use crate::model::{heaviside, Network};
use crate::numerics::{FlaggedInterval, Rational, Rect};

/// The partition `P_i` of `[0, 1]` cut by the thresholds of unit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinatePartition {
    /// Atoms in increasing order.
    pub atoms: Vec<FlaggedInterval>,
    /// Heads of the arrows leaving this unit, ascending.
    pub heads: Vec<usize>,
    /// `signatures[k][n]` is `H(s·(x − T))` for arrow `heads[n]` on atom `k`.
    pub signatures: Vec<Vec<bool>>,
}

impl CoordinatePartition {
    fn build(net: &Network, i: usize) -> Self {
        let spec = net.spec();
        let heads = net.out_neighbors(i).to_vec();
        let zero = Rational::zero();
        let one = Rational::one();
        let mut cuts = vec![zero.clone(), one.clone()];
        cuts.extend(heads.iter().map(|&j| spec.t(i, j).clone()));
        cuts.sort();
        cuts.dedup();
        let sig = |x: &Rational| -> Vec<bool> {
            heads.iter().map(|&j| heaviside(spec.s(i, j), x, spec.t(i, j))).collect()
        };

        // elementary pieces: each cut point, then each open gap, merged
        // while the signature stays constant
        let mut atoms: Vec<FlaggedInterval> = Vec::new();
        let mut signatures: Vec<Vec<bool>> = Vec::new();
        let two = Rational::from_integer(2);
        let mut push = |piece: FlaggedInterval, s: Vec<bool>| {
            if signatures.last() == Some(&s) {
                let prev = atoms.pop().expect("signature without atom");
                let merged = FlaggedInterval::new(
                    prev.lo().clone(),
                    piece.hi().clone(),
                    prev.lo_closed(),
                    piece.hi_closed(),
                )
                .expect("merged pieces are nonempty");
                atoms.push(merged);
            } else {
                atoms.push(piece);
                signatures.push(s);
            }
        };
        for (n, p) in cuts.iter().enumerate() {
            push(FlaggedInterval::singleton(p.clone()), sig(p));
            if let Some(next) = cuts.get(n + 1) {
                let mid = &(p + next) / &two;
                let gap = FlaggedInterval::new(p.clone(), next.clone(), false, false).expect("distinct cuts");
                push(gap, sig(&mid));
            }
        }
        CoordinatePartition { atoms, heads, signatures }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Index of the atom containing `x ∈ [0, 1]`.
    pub fn locate(&self, x: &Rational) -> Option<usize> {
        let k = self.atoms.partition_point(|atom| atom.hi() < x || (atom.hi() == x && !atom.hi_closed()));
        (k < self.atoms.len() && self.atoms[k].contains(x)).then_some(k)
    }
}

/// `P = Π P_i`. Atoms are indexed in mixed radix with coordinate 0 most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePartition {
    coords: Vec<CoordinatePartition>,
    strides: Vec<usize>,
    total: usize,
    /// `eta[w][j] = Σ_i K[i][j]·H(s[i][j](x_i − T[i][j]))` on atom `w`.
    eta: Vec<Vec<Rational>>,
}

impl BasePartition {
    pub fn build(net: &Network) -> Self {
        let d = net.dim();
        let coords: Vec<CoordinatePartition> = (0..d).map(|i| CoordinatePartition::build(net, i)).collect();
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * coords[i + 1].len();
        }
        let total = coords.iter().map(CoordinatePartition::len).product();
        let spec = net.spec();
        let eta = (0..total)
            .map(|w| {
                let mut out = vec![Rational::zero(); d];
                for (i, cp) in coords.iter().enumerate() {
                    let k = (w / strides[i]) % cp.len();
                    for (n, &j) in cp.heads.iter().enumerate() {
                        if cp.signatures[k][n] {
                            out[j] = &out[j] + spec.k(i, j);
                        }
                    }
                }
                out
            })
            .collect();
        BasePartition { coords, strides, total, eta }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `#P`.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// `c = #P − 1`.
    pub fn c(&self) -> usize {
        self.total - 1
    }

    pub fn coordinate(&self, i: usize) -> &CoordinatePartition {
        &self.coords[i]
    }

    pub fn coordinates(&self) -> &[CoordinatePartition] {
        &self.coords
    }

    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn decode(&self, w: usize) -> Vec<usize> {
        (0..self.dim()).map(|i| self.component(w, i)).collect()
    }

    pub fn component(&self, w: usize, i: usize) -> usize {
        (w / self.strides[i]) % self.coords[i].len()
    }

    pub fn encode(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.strides).map(|(k, s)| k * s).sum()
    }

    pub fn atom(&self, w: usize) -> Rect {
        Rect::new((0..self.dim()).map(|i| self.coords[i].atoms[self.component(w, i)].clone()).collect())
    }

    /// Offsets selected on atom `w`.
    pub fn eta(&self, w: usize) -> &[Rational] {
        &self.eta[w]
    }

    pub fn locate(&self, x: &[Rational]) -> Option<usize> {
        let mut w = 0;
        for (i, cp) in self.coords.iter().enumerate() {
            w += cp.locate(&x[i])? * self.strides[i];
        }
        Some(w)
    }

    /// Human-readable label of atom `w`: per coordinate, its signature bits.
    pub fn label(&self, w: usize) -> alloc::string::String {
        let mut out = alloc::string::String::new();
        for (i, cp) in self.coords.iter().enumerate() {
            if i > 0 {
                out.push('|');
            }
            for &b in &cp.signatures[self.component(w, i)] {
                out.push(if b { '1' } else { '0' });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Mode, NetworkSpec, Sign};
    use crate::presets;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn iv(lo: Rational, hi: Rational, lc: bool, hc: bool) -> FlaggedInterval {
        FlaggedInterval::new(lo, hi, lc, hc).unwrap()
    }

    #[test]
    fn self_inhibitor_partition() {
        let net = presets::self_inhibitor(q(1, 4), q(1, 2)).unwrap();
        let p = BasePartition::build(&net);
        let c = p.coordinate(0);
        assert_eq!(c.atoms, vec![iv(q(0, 1), q(1, 2), true, false), iv(q(1, 2), q(1, 1), true, true)]);
        assert_eq!(c.signatures, vec![vec![true], vec![false]]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.label(0), "1");
    }

    #[test]
    fn negative_circuit_has_four_atoms() {
        let net = presets::negative_2_circuit(q(1, 4), q(1, 2), q(1, 2)).unwrap();
        let p = BasePartition::build(&net);
        assert_eq!((p.len(), p.c()), (4, 3));
        for w in 0..4 {
            assert_eq!(p.encode(&p.decode(w)), w);
        }
    }

    /// Unit 0 acts on units 1 and 2 with the given signs and thresholds.
    fn fan_out(s1: Sign, t1: Rational, s2: Sign, t2: Rational) -> Network {
        let z = Rational::zero;
        let h = || q(1, 2);
        let spec = NetworkSpec::new(
            Mode::Autonomous,
            q(1, 4),
            vec![vec![h(), h(), h()], vec![h(), z(), z()], vec![z(), h(), h()]],
            vec![vec![q(1, 2), t1, t2], vec![q(1, 2), z(), z()], vec![z(), q(1, 2), q(1, 2)]],
            vec![
                vec![Sign::Plus, s1, s2],
                vec![Sign::Plus, Sign::Zero, Sign::Zero],
                vec![Sign::Zero, Sign::Plus, Sign::Plus],
            ],
        )
        .unwrap();
        Network::new(spec).unwrap()
    }

    #[test]
    fn two_positive_cuts() {
        // thresholds 1/2 (self), 1/3 and 2/3 on unit 0, all positive
        let net = fan_out(Sign::Plus, q(1, 3), Sign::Plus, q(2, 3));
        let c = BasePartition::build(&net).coordinate(0).clone();
        assert_eq!(
            c.atoms,
            vec![
                iv(q(0, 1), q(1, 3), true, true),
                iv(q(1, 3), q(1, 2), false, true),
                iv(q(1, 2), q(2, 3), false, true),
                iv(q(2, 3), q(1, 1), false, true),
            ]
        );
    }

    #[test]
    fn opposite_signs_at_one_threshold_give_a_point() {
        let net = fan_out(Sign::Plus, q(1, 3), Sign::Minus, q(1, 3));
        let c = BasePartition::build(&net).coordinate(0).clone();
        assert_eq!(c.atoms[0], iv(q(0, 1), q(1, 3), true, false));
        assert_eq!(c.atoms[1], FlaggedInterval::singleton(q(1, 3)));
        assert_eq!(c.atoms[2], iv(q(1, 3), q(1, 2), false, true));
        assert_eq!(c.locate(&q(1, 3)), Some(1));
    }

    #[test]
    fn boundary_threshold_is_a_trivial_cut() {
        let net = fan_out(Sign::Plus, q(0, 1), Sign::Plus, q(1, 2));
        let c = BasePartition::build(&net).coordinate(0).clone();
        assert_eq!(c.atoms[0], FlaggedInterval::singleton(q(0, 1)));
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn atoms_partition_the_unit_interval() {
        let net = fan_out(Sign::Minus, q(1, 5), Sign::Plus, q(4, 5));
        let c = BasePartition::build(&net).coordinate(0).clone();
        for k in 0..=100 {
            let x = q(k, 100);
            assert_eq!(c.atoms.iter().filter(|a| a.contains(&x)).count(), 1, "x = {x}");
            assert!(c.atoms[c.locate(&x).unwrap()].contains(&x));
        }
    }

    #[test]
    fn eta_matches_the_map() {
        let net = presets::p53(q(1, 4), &presets::P53Params::default()).unwrap();
        let p = BasePartition::build(&net);
        let probes = [q(1, 10), q(1, 2), q(9, 10)];
        for x0 in &probes {
            for x1 in &probes {
                for x2 in &probes {
                    let x = [x0.clone(), x1.clone(), q(1, 3), x2.clone()];
                    let w = p.locate(&x).unwrap();
                    assert_eq!(p.eta(w), net.offsets_at(&x).as_slice());
                    assert!(p.atom(w).contains(&x));
                }
            }
        }
    }
}
