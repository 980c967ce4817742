use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;

use super::{BasePartition, Representation};
use crate::model::Network;
use crate::numerics::{FlaggedInterval, Rational, Rect, Scalar};

/// Parent index of first-generation nodes.
pub const ROOT: u32 = u32::MAX;

/// One atom of `Q^t`: `rect = F^{t−1}(A)` for the atom `A` of `P^t` whose
/// itinerary ends in base atom `atom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomNode<S: Scalar = Rational> {
    pub rect: Rect<S>,
    /// Flat index of the base atom containing `rect`.
    pub atom: u32,
    /// Index of the predecessor in the previous generation.
    pub parent: u32,
}

/// The atoms of `Q^t`, sorted by itinerary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation<S: Scalar = Rational> {
    pub t: usize,
    pub nodes: Vec<AtomNode<S>>,
}

impl<S: Scalar> Generation<S> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Result of one step.
#[derive(Debug)]
pub(crate) struct StepOutput<S: Scalar> {
    pub nodes: Vec<AtomNode<S>>,
    pub branching_atoms: usize,
    pub max_branch: usize,
    pub min_branch: usize,
    /// Image endpoints within ε of a cut (float mode only).
    pub near_cuts: usize,
}

/// Base atoms and branch intercepts lifted to one generation's scale.
#[derive(Debug, Clone)]
pub struct Frame<R: Scalar> {
    pub t: usize,
    pub pieces: Vec<Vec<FlaggedInterval<R>>>,
    /// `(1 − a)·η_j` on each base atom.
    pub shift: Vec<Vec<R>>,
}

/// The step map on a fixed base partition.
#[derive(Debug, Clone)]
pub struct Engine<R: Representation> {
    cx: R::Context,
    slope: R,
    a_is_zero: bool,
    one_minus_a: Rational,
    pieces: Vec<Vec<FlaggedInterval>>,
    shift: Vec<Vec<Rational>>,
    cuts: Vec<Vec<f64>>,
    strides: Vec<usize>,
    epsilon: f64,
    fixed_frame: Option<Frame<R>>,
}

impl<R: Representation> Engine<R> {
    /// `constants` must list every further rational the caller will lift
    /// (offsets, thresholds, branch intercepts).
    pub fn new(net: &Network, base: &BasePartition, epsilon: f64, constants: &[Rational]) -> Self {
        let d = base.dim();
        let pieces: Vec<Vec<FlaggedInterval>> = base.coordinates().iter().map(|cp| cp.atoms.clone()).collect();
        let cuts = pieces.iter().map(|list| list.iter().skip(1).map(|iv| iv.lo().to_f64()).collect()).collect();
        let one_minus_a = net.one_minus_a().clone();
        let shift: Vec<Vec<Rational>> =
            (0..base.len()).map(|w| base.eta(w).iter().map(|e| &one_minus_a * e).collect()).collect();
        let mut all: Vec<Rational> = constants.to_vec();
        for list in &pieces {
            for iv in list {
                all.push(iv.lo().clone());
                all.push(iv.hi().clone());
            }
        }
        all.extend(shift.iter().flatten().cloned());
        let cx = R::context(net.a(), &all);
        let mut engine = Engine {
            slope: R::slope(&cx, net.a()),
            cx,
            a_is_zero: net.a().is_zero(),
            one_minus_a,
            pieces,
            shift,
            cuts,
            strides: (0..d).map(|i| base.stride(i)).collect(),
            epsilon,
            fixed_frame: None,
        };
        if R::STATIC {
            engine.fixed_frame = Some(engine.build_frame(1));
        }
        engine
    }

    pub fn context(&self) -> &R::Context {
        &self.cx
    }

    pub fn dim(&self) -> usize {
        self.pieces.len()
    }

    pub fn base_size(&self) -> usize {
        self.shift.len()
    }

    pub fn one_minus_a(&self) -> &Rational {
        &self.one_minus_a
    }

    pub fn slope(&self) -> &R {
        &self.slope
    }

    pub fn lift(&self, t: usize, values: &[Rational]) -> Vec<R> {
        R::lift_all(&self.cx, t, values)
    }

    fn build_frame(&self, t: usize) -> Frame<R> {
        let endpoints: Vec<Rational> =
            self.pieces.iter().flatten().flat_map(|iv| [iv.lo().clone(), iv.hi().clone()]).collect();
        let mut lifted = self.lift(t, &endpoints).into_iter();
        let pieces = self
            .pieces
            .iter()
            .map(|list| {
                list.iter()
                    .map(|iv| {
                        let lo = lifted.next().expect("endpoint count");
                        let hi = lifted.next().expect("endpoint count");
                        FlaggedInterval::new(lo, hi, iv.lo_closed(), iv.hi_closed()).expect("lifting keeps order")
                    })
                    .collect()
            })
            .collect();
        let d = self.dim();
        let flat: Vec<Rational> = self.shift.iter().flatten().cloned().collect();
        let lifted = self.lift(t, &flat);
        let shift = lifted.chunks(d.max(1)).map(<[R]>::to_vec).collect();
        Frame { t, pieces, shift }
    }

    /// Base atoms and intercepts at the scale of generation `t`.
    pub fn frame(&self, t: usize) -> Cow<'_, Frame<R>> {
        match &self.fixed_frame {
            Some(f) => Cow::Borrowed(f),
            None => Cow::Owned(self.build_frame(t)),
        }
    }

    pub fn initial_generation(&self) -> Generation<R> {
        let frame = self.frame(1);
        let d = self.dim();
        let nodes = (0..self.base_size())
            .map(|w| {
                let sides =
                    (0..d).map(|i| frame.pieces[i][(w / self.strides[i]) % frame.pieces[i].len()].clone()).collect();
                AtomNode { rect: Rect::new(sides), atom: w as u32, parent: ROOT }
            })
            .collect();
        Generation { t: 1, nodes }
    }

    /// Image of a node's rect under its affine branch; `frame` is at the
    /// scale of the next generation.
    pub fn image(&self, node: &AtomNode<R>, frame: &Frame<R>, extra: Option<&[R]>) -> Vec<FlaggedInterval<R>> {
        let w = node.atom as usize;
        node.rect
            .sides()
            .iter()
            .enumerate()
            .map(|(j, side)| {
                let b = match extra {
                    Some(e) => frame.shift[w][j].plus(&e[j]),
                    None => frame.shift[w][j].clone(),
                };
                let img = if self.a_is_zero {
                    FlaggedInterval::singleton(b)
                } else {
                    side.map_affine(&self.slope, &b)
                };
                if R::EXACT {
                    img
                } else {
                    clamp_unit(img)
                }
            })
            .collect()
    }

    fn near_cut_count(&self, image: &[FlaggedInterval<R>]) -> usize {
        let mut n = 0;
        for (j, side) in image.iter().enumerate() {
            for x in [side.lo().to_f64(), side.hi().to_f64()] {
                if self.cuts[j].iter().any(|c| (x - c).abs() <= self.epsilon) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Children of one node, in increasing base-atom order.
    fn children(&self, parent_index: u32, image: &[FlaggedInterval<R>], frame: &Frame<R>, out: &mut Vec<AtomNode<R>>) {
        let d = self.dim();
        let mut hits: Vec<Vec<(usize, FlaggedInterval<R>)>> = Vec::with_capacity(d);
        for (j, side) in image.iter().enumerate() {
            let pieces = &frame.pieces[j];
            let start = pieces.partition_point(|p| p.hi() < side.lo());
            let mut list = Vec::new();
            for (k, p) in pieces.iter().enumerate().skip(start) {
                if p.lo() > side.hi() {
                    break;
                }
                if let Some(cut) = p.intersect(side) {
                    list.push((k, cut));
                }
            }
            if list.is_empty() {
                return;
            }
            hits.push(list);
        }
        let mut idx = vec![0usize; d];
        loop {
            let atom: usize = (0..d).map(|j| hits[j][idx[j]].0 * self.strides[j]).sum();
            let sides = (0..d).map(|j| hits[j][idx[j]].1.clone()).collect();
            out.push(AtomNode { rect: Rect::new(sides), atom: atom as u32, parent: parent_index });
            // odometer, last coordinate fastest
            let mut j = d;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < hits[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// `Q^{t+1} = F(Q^t) ∨ P`, with `frame` at the scale of generation
    /// `t + 1`. Returns `None` as soon as the new generation would exceed
    /// `cap` atoms.
    pub(crate) fn step(&self, gen: &Generation<R>, frame: &Frame<R>, extra: Option<&[R]>, cap: usize) -> Option<StepOutput<R>> {
        let mut out = StepOutput {
            nodes: Vec::with_capacity(gen.len() + gen.len() / 4),
            branching_atoms: 0,
            max_branch: 0,
            min_branch: if gen.is_empty() { 0 } else { usize::MAX },
            near_cuts: 0,
        };
        const BATCH: usize = 4096;
        for (b, chunk) in gen.nodes.chunks(BATCH).enumerate() {
            for (near, kids) in self.batch(b * BATCH, chunk, frame, extra) {
                out.near_cuts += near;
                let k = kids.len();
                if k > 1 {
                    out.branching_atoms += 1;
                }
                out.max_branch = out.max_branch.max(k);
                out.min_branch = out.min_branch.min(k);
                out.nodes.extend(kids);
                if out.nodes.len() > cap {
                    return None;
                }
            }
        }
        Some(out)
    }

    #[cfg(not(feature = "parallel"))]
    fn batch(&self, offset: usize, chunk: &[AtomNode<R>], frame: &Frame<R>, extra: Option<&[R]>) -> Vec<(usize, Vec<AtomNode<R>>)> {
        chunk.iter().enumerate().map(|(k, node)| self.one(offset + k, node, frame, extra)).collect()
    }

    #[cfg(feature = "parallel")]
    fn batch(&self, offset: usize, chunk: &[AtomNode<R>], frame: &Frame<R>, extra: Option<&[R]>) -> Vec<(usize, Vec<AtomNode<R>>)> {
        use rayon::prelude::*;
        chunk.par_iter().enumerate().map(|(k, node)| self.one(offset + k, node, frame, extra)).collect()
    }

    fn one(&self, index: usize, node: &AtomNode<R>, frame: &Frame<R>, extra: Option<&[R]>) -> (usize, Vec<AtomNode<R>>) {
        let image = self.image(node, frame, extra);
        let near = if R::EXACT { 0 } else { self.near_cut_count(&image) };
        let mut kids = Vec::new();
        self.children(index as u32, &image, frame, &mut kids);
        (near, kids)
    }
}

fn clamp_unit<S: Scalar>(iv: FlaggedInterval<S>) -> FlaggedInterval<S> {
    let lo = iv.lo().clone().max(S::zero()).min(S::one());
    let hi = iv.hi().clone().max(S::zero()).min(S::one());
    FlaggedInterval::new(lo.clone(), hi, iv.lo_closed(), iv.hi_closed()).unwrap_or_else(|| FlaggedInterval::singleton(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ScaledInt;
    use crate::presets;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn first_step<R: Representation>(net: &Network, cap: usize) -> Option<StepOutput<R>> {
        let base = BasePartition::build(net);
        let engine: Engine<R> = Engine::new(net, &base, 1e-12, &[]);
        let gen = engine.initial_generation();
        engine.step(&gen, &engine.frame(2), None, cap)
    }

    #[test]
    fn image_inside_one_atom_has_one_child() {
        let net = presets::toggle_switch(q(1, 4), q(1, 2), q(1, 2)).unwrap();
        let out = first_step::<Rational>(&net, usize::MAX).unwrap();
        // every image of a toggle-switch atom is a quarter-width box in one atom
        assert_eq!(out.nodes.len(), 4);
        assert_eq!(out.max_branch, 1);
        assert_eq!(out.branching_atoms, 0);
    }

    #[test]
    fn self_inhibitor_first_step() {
        let net = presets::self_inhibitor(q(1, 4), q(1, 2)).unwrap();
        let out = first_step::<Rational>(&net, usize::MAX).unwrap();
        // [0,1/2) -> [3/4, 7/8), [1/2,1] -> [1/8, 1/4]
        assert_eq!(out.nodes.len(), 2);
        assert_eq!(out.nodes[0].rect.side(0), &FlaggedInterval::new(q(3, 4), q(7, 8), true, false).unwrap());
        assert_eq!(out.nodes[0].atom, 1);
        assert_eq!(out.nodes[1].rect.side(0), &FlaggedInterval::closed(q(1, 8), q(1, 4)).unwrap());
        assert_eq!(out.nodes[1].atom, 0);
    }

    #[test]
    fn scaled_integers_agree_with_rationals() {
        let net = presets::negative_2_circuit(q(93, 100), q(1, 2), q(1, 2)).unwrap();
        let base = BasePartition::build(&net);
        let exact: Engine<Rational> = Engine::new(&net, &base, 1e-12, &[]);
        let scaled: Engine<ScaledInt> = Engine::new(&net, &base, 1e-12, &[]);
        let mut g1 = exact.initial_generation();
        let mut g2 = scaled.initial_generation();
        for t in 1..15 {
            g1 = Generation { t: t + 1, nodes: exact.step(&g1, &exact.frame(t + 1), None, usize::MAX).unwrap().nodes };
            g2 = Generation { t: t + 1, nodes: scaled.step(&g2, &scaled.frame(t + 1), None, usize::MAX).unwrap().nodes };
            assert_eq!(ScaledInt::lower_generation(g2.clone(), scaled.context()), g1);
        }
    }

    #[test]
    fn cap_aborts_the_step() {
        let net = presets::negative_2_circuit(q(93, 100), q(1, 2), q(1, 2)).unwrap();
        assert!(first_step::<Rational>(&net, 4).is_none());
    }

    #[test]
    fn zero_rate_collapses_images() {
        let net = presets::negative_2_circuit(q(0, 1), q(1, 2), q(1, 2)).unwrap();
        let out = first_step::<ScaledInt>(&net, usize::MAX).unwrap();
        assert_eq!(out.nodes.len(), 4);
        assert!(out.nodes.iter().all(|n| n.rect.sides().iter().all(FlaggedInterval::is_singleton)));
    }
}
