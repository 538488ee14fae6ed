//! Dotted cobordisms between planar matchings.
//!
//! A morphism between two loopless matchings `D`, `E` of the same boundary
//! is a combination of decorations of the canonical surface: one disk per
//! circle of `D ∪ E`, each with or without a dot. A decoration is stored as
//! a bitmask over those circles in canonical order (by minimal label).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::diagram::UnionFind;
use crate::error::{KhError, Result};
use crate::ring::Coefficients;

/// Decorated terms sorted by mask, no zero coefficients.
pub type Terms = Vec<(u64, BigInt)>;

/// A crossingless matching of boundary points, named by edge labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PlanarMatching {
    pairs: Vec<(u32, u32)>,
}

impl PlanarMatching {
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut pairs: Vec<(u32, u32)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        PlanarMatching { pairs }
    }

    pub fn empty() -> Self {
        PlanarMatching { pairs: vec![] }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn boundary_size(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut l: Vec<u32> = self.pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
        l.sort_unstable();
        l
    }

    pub fn pair_of(&self, label: u32) -> Option<usize> {
        self.pairs.iter().position(|(a, b)| *a == label || *b == label)
    }

    pub fn partner(&self, label: u32) -> Option<u32> {
        self.pairs.iter().find_map(|(a, b)| {
            if *a == label {
                Some(*b)
            } else if *b == label {
                Some(*a)
            } else {
                None
            }
        })
    }

    /// Stack test: no two chords cross when the labels sit on a circle in `order`.
    pub fn is_planar(&self, order: &[u32]) -> bool {
        let mut stack: Vec<u32> = vec![];
        for &l in order {
            let Some(p) = self.partner(l) else { return false };
            if stack.last() == Some(&p) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        stack.is_empty() && order.len() == self.boundary_size()
    }
}

/// Circles of `a ∪ b`, numbered by increasing minimal label.
#[derive(Clone, Debug)]
pub struct Cycles {
    pub count: usize,
    /// Circle of each pair of `a`.
    pub of_a: Vec<usize>,
    /// Circle of each pair of `b`.
    pub of_b: Vec<usize>,
}

pub fn cycles(a: &PlanarMatching, b: &PlanarMatching) -> Result<Cycles> {
    let labels = a.labels();
    if labels != b.labels() {
        return Err(KhError::Invalid("matchings have different boundaries".into()));
    }
    if labels.len() > 128 {
        return Err(KhError::Capability("more than 64 circles in a surface".into()));
    }
    let mut of_a = vec![usize::MAX; a.pairs.len()];
    let mut of_b = vec![usize::MAX; b.pairs.len()];
    let mut count = 0;
    for &start in &labels {
        let pa = a.pair_of(start).unwrap();
        if of_a[pa] != usize::MAX {
            continue;
        }
        let mut l = start;
        loop {
            let pa = a.pair_of(l).unwrap();
            of_a[pa] = count;
            let l2 = a.partner(l).unwrap();
            let pb = b.pair_of(l2).unwrap();
            of_b[pb] = count;
            l = b.partner(l2).unwrap();
            if l == start {
                break;
            }
        }
        count += 1;
    }
    Ok(Cycles { count, of_a, of_b })
}

/// All decorations of the canonical surface between `d` and `e`.
pub fn dec_basis(d: &PlanarMatching, e: &PlanarMatching) -> Result<Vec<u64>> {
    if d.boundary_size() != e.boundary_size() {
        return Err(KhError::Invalid("boundary size mismatch".into()));
    }
    let c = cycles(d, e)?.count;
    Ok((0..1u64 << c).collect())
}

/// Surfaces built from disk-like pieces glued along intervals.
pub(crate) struct Surface {
    pub pieces: usize,
    pub lines: Vec<(usize, usize)>,
    /// The piece each boundary circle runs along.
    pub circle_piece: Vec<usize>,
}

/// Connected components of a glued surface with their genus and circles.
#[derive(Clone, Debug)]
pub(crate) struct Topology {
    pub comp_of_piece: Vec<usize>,
    pub circles: Vec<u64>,
    pub r: Vec<u32>,
    pub genus: Vec<u32>,
}

impl Topology {
    pub fn new(s: &Surface) -> Result<Self> {
        let mut uf = UnionFind::new(s.pieces);
        for &(a, b) in &s.lines {
            uf.union(a, b);
        }
        let mut index = BTreeMap::new();
        let mut comp_of_piece = vec![0; s.pieces];
        for (p, c) in comp_of_piece.iter_mut().enumerate() {
            let r = uf.find(p);
            let n = index.len();
            *c = *index.entry(r).or_insert(n);
        }
        let n = index.len();
        let mut chi = vec![0i64; n];
        for &c in &comp_of_piece {
            chi[c] += 1;
        }
        for &(a, _) in &s.lines {
            chi[comp_of_piece[a]] -= 1;
        }
        let mut circles = vec![0u64; n];
        let mut r = vec![0u32; n];
        for (i, &p) in s.circle_piece.iter().enumerate() {
            let c = comp_of_piece[p];
            circles[c] |= 1 << i;
            r[c] += 1;
        }
        let mut genus = vec![0u32; n];
        for c in 0..n {
            let twice = 2 - r[c] as i64 - chi[c];
            if twice < 0 || twice % 2 != 0 {
                return Err(KhError::Invariant(format!("surface component with chi {} and {} circles", chi[c], r[c])));
            }
            genus[c] = (twice / 2) as u32;
        }
        Ok(Topology { comp_of_piece, circles, r, genus })
    }

    pub fn components(&self) -> usize {
        self.circles.len()
    }

    /// Neck-cut every component carrying `dots[c]` dots into dotted disks.
    /// Returns the resulting masks and the common factor exponent (powers of 2),
    /// or `None` when the surface evaluates to zero.
    pub fn expand(&self, dots: &[u32]) -> Option<(Vec<u64>, u32)> {
        let mut masks = vec![0u64];
        let mut twos = 0;
        for c in 0..self.components() {
            let r = self.r[c] as i64;
            let need = r - 1 + (dots[c] + self.genus[c]) as i64;
            if need < 0 || need > r {
                return None;
            }
            twos += self.genus[c];
            if need == 0 {
                continue;
            }
            let subsets = subsets_of_size(self.circles[c], need as u32);
            let mut next = Vec::with_capacity(masks.len() * subsets.len());
            for m in &masks {
                for s in &subsets {
                    next.push(m | s);
                }
            }
            masks = next;
        }
        Some((masks, twos))
    }
}

fn subsets_of_size(mask: u64, k: u32) -> Vec<u64> {
    let bits: Vec<u64> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| 1u64 << i).collect();
    let mut out = vec![];
    fn rec(bits: &[u64], k: u32, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        if bits.len() < k as usize {
            return;
        }
        rec(&bits[1..], k - 1, acc | bits[0], out);
        rec(&bits[1..], k, acc, out);
    }
    rec(&bits, k, 0, &mut out);
    out
}

pub(crate) fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// Topology of `g ∘ f` for `f: m1 -> m2`, `g: m2 -> m3`.
#[derive(Clone, Debug)]
pub(crate) struct CompositionTopology {
    topo: Topology,
    f_disks: Vec<u64>,
    g_disks: Vec<u64>,
}

impl CompositionTopology {
    pub fn new(m1: &PlanarMatching, m2: &PlanarMatching, m3: &PlanarMatching) -> Result<Self> {
        let c12 = cycles(m1, m2)?;
        let c23 = cycles(m2, m3)?;
        let c13 = cycles(m1, m3)?;
        let mut lines = vec![];
        for p in 0..m2.pairs.len() {
            lines.push((c12.of_b[p], c12.count + c23.of_a[p]));
        }
        let mut circle_piece = vec![usize::MAX; c13.count];
        for (p, &c) in c13.of_a.iter().enumerate() {
            if circle_piece[c] == usize::MAX {
                circle_piece[c] = c12.of_a[p];
            }
        }
        let topo = Topology::new(&Surface { pieces: c12.count + c23.count, lines, circle_piece })?;
        let mut f_disks = vec![0u64; topo.components()];
        let mut g_disks = vec![0u64; topo.components()];
        for i in 0..c12.count {
            f_disks[topo.comp_of_piece[i]] |= 1 << i;
        }
        for i in 0..c23.count {
            g_disks[topo.comp_of_piece[c12.count + i]] |= 1 << i;
        }
        Ok(CompositionTopology { topo, f_disks, g_disks })
    }

    pub fn compose(&self, g: &[(u64, BigInt)], f: &[(u64, BigInt)], coeff: Coefficients) -> Terms {
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        let n = self.topo.components();
        let mut dots = vec![0u32; n];
        for (fm, fc) in f {
            for (gm, gc) in g {
                for c in 0..n {
                    dots[c] = (fm & self.f_disks[c]).count_ones() + (gm & self.g_disks[c]).count_ones();
                }
                let Some((masks, twos)) = self.topo.expand(&dots) else { continue };
                let c = fc * gc * pow2(twos);
                for m in masks {
                    *acc.entry(m).or_insert_with(BigInt::zero) += &c;
                }
            }
        }
        canonical(acc, coeff)
    }
}

pub(crate) fn canonical(acc: BTreeMap<u64, BigInt>, coeff: Coefficients) -> Terms {
    acc.into_iter()
        .map(|(m, c)| (m, coeff.reduce(c)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

pub fn l1_norm(t: &[(u64, BigInt)]) -> BigInt {
    t.iter().map(|(_, c)| c.abs()).sum()
}

/// A morphism of the cobordism category in the dec basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobMorphism {
    pub source: PlanarMatching,
    pub target: PlanarMatching,
    pub terms: Terms,
}

impl CobMorphism {
    pub fn identity(m: &PlanarMatching) -> Self {
        CobMorphism { source: m.clone(), target: m.clone(), terms: vec![(0, BigInt::one())] }
    }

    pub fn zero(source: &PlanarMatching, target: &PlanarMatching) -> Self {
        CobMorphism { source: source.clone(), target: target.clone(), terms: vec![] }
    }

    pub fn new(source: PlanarMatching, target: PlanarMatching, terms: Terms, coeff: Coefficients) -> Self {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        CobMorphism { source, target, terms: canonical(acc, coeff) }
    }

    pub fn norm(&self) -> BigInt {
        l1_norm(&self.terms)
    }

    /// q-degree of a decoration: circles minus half the boundary minus twice the dots.
    pub fn term_degree(&self, mask: u64) -> Result<i32> {
        let c = cycles(&self.source, &self.target)?.count as i32;
        Ok(c - self.source.pairs.len() as i32 - 2 * mask.count_ones() as i32)
    }

    pub fn add(&self, other: &Self, coeff: Coefficients) -> Self {
        assert_eq!((&self.source, &self.target), (&other.source, &other.target));
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        CobMorphism::new(self.source.clone(), self.target.clone(), terms, coeff)
    }
}

/// `g ∘ f`, asserting the horizontal composition norm bound.
pub fn compose_h(g: &CobMorphism, f: &CobMorphism, coeff: Coefficients) -> Result<CobMorphism> {
    if f.target != g.source {
        return Err(KhError::Invalid("morphisms are not composable".into()));
    }
    let topo = CompositionTopology::new(&f.source, &f.target, &g.target)?;
    let terms = topo.compose(&g.terms, &f.terms, coeff);
    let out = CobMorphism { source: f.source.clone(), target: g.target.clone(), terms };
    check_composition_norm(&out.terms, &g.terms, &f.terms, f.source.pairs.len(), coeff)?;
    Ok(out)
}

pub(crate) fn check_composition_norm(
    out: &[(u64, BigInt)],
    g: &[(u64, BigInt)],
    f: &[(u64, BigInt)],
    pairs: usize,
    coeff: Coefficients,
) -> Result<()> {
    if coeff.is_field() {
        return Ok(());
    }
    let bound = pow2(pairs.saturating_sub(1) as u32) * l1_norm(g) * l1_norm(f);
    if l1_norm(out) > bound {
        return Err(KhError::Invariant("horizontal composition norm bound violated".into()));
    }
    Ok(())
}

/// What an arc of a glued 1-manifold passes through first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// A pair of the old matching.
    M(usize),
    /// One of the two smoothing arcs at the crossing.
    S(usize),
}

/// Result of gluing a smoothing onto a matching.
#[derive(Clone, Debug)]
pub struct Glued {
    pub matching: PlanarMatching,
    /// A constituent of each pair of `matching`.
    pub arc_part: Vec<Part>,
    /// Closed circles, each with a constituent and the mask of smoothing
    /// arcs it contains; ordered by lowest smoothing arc.
    pub loops: Vec<(Part, u8)>,
}

/// Slot pairs of the two smoothings of a crossing.
pub const SMOOTHINGS: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(0, 3), (1, 2)]];

/// Glue the smoothing `s` of a crossing with edge labels `x` onto `m`.
/// Labels shared by `m` and `x` are joined; a label occurring twice in `x`
/// joins the two slots.
pub fn glue(m: &PlanarMatching, x: [u32; 4], s: [(usize, usize); 2]) -> Glued {
    // ends: 2*i + side for pairs of m, then 2*np + 2*j + side for smoothing arcs
    let np = m.pairs.len();
    let n_ends = 2 * np + 4;
    let label = |e: usize| -> u32 {
        if e < 2 * np {
            let (a, b) = m.pairs[e / 2];
            if e % 2 == 0 {
                a
            } else {
                b
            }
        } else {
            let (i, j) = s[(e - 2 * np) / 2];
            x[if e % 2 == 0 { i } else { j }]
        }
    };
    let slot_end = |slot: usize| -> usize {
        let j = s.iter().position(|(a, b)| *a == slot || *b == slot).unwrap();
        2 * np + 2 * j + usize::from(s[j].1 == slot)
    };
    let mut joined = vec![usize::MAX; n_ends];
    for slot in 0..4 {
        let l = x[slot];
        if let Some(other) = (0..4).find(|&o| o != slot && x[o] == l) {
            joined[slot_end(slot)] = slot_end(other);
        } else if let Some(p) = m.pair_of(l) {
            let e = 2 * p + usize::from(m.pairs[p].1 == l);
            joined[slot_end(slot)] = e;
            joined[e] = slot_end(slot);
        }
    }
    let part = |e: usize| if e < 2 * np { Part::M(e / 2) } else { Part::S((e - 2 * np) / 2) };
    let s_bit = |e: usize| if e < 2 * np { 0u8 } else { 1 << ((e - 2 * np) / 2) };
    let mut visited = vec![false; n_ends / 2];
    let mut pairs = vec![];
    for start in 0..n_ends {
        if joined[start] != usize::MAX || visited[start / 2] {
            continue;
        }
        let first = part(start);
        let mut e = start;
        loop {
            visited[e / 2] = true;
            let other = e ^ 1;
            match joined[other] {
                usize::MAX => {
                    pairs.push(((label(start), label(other)), first));
                    break;
                }
                next => e = next,
            }
        }
    }
    let mut loops = vec![];
    for arc in 0..n_ends / 2 {
        if visited[arc] {
            continue;
        }
        let start = 2 * arc;
        let first = part(start);
        let mut bits = 0u8;
        let mut e = start;
        loop {
            visited[e / 2] = true;
            bits |= s_bit(e);
            e = joined[e ^ 1];
            if e == start {
                break;
            }
        }
        loops.push((first, bits));
    }
    loops.sort_by_key(|(_, b)| b.trailing_zeros());
    let matching = PlanarMatching::new(pairs.iter().map(|(p, _)| *p));
    let arc_part = matching
        .pairs
        .iter()
        .map(|&(a, b)| pairs.iter().find(|((u, v), _)| (a, b) == (*u.min(v), *u.max(v))).unwrap().1)
        .collect();
    Glued { matching, arc_part, loops }
}

/// A glued morphism expanded in the basis of the delooped objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeloopedTerm {
    /// Labels of the source loops, bit set for X.
    pub src: u8,
    /// Labels of the target loops, bit set for X.
    pub tgt: u8,
    pub mask: u64,
    pub coeff: BigInt,
}

/// Topology of a morphism between two glued objects, ready for delooping.
#[derive(Clone, Debug)]
pub(crate) struct GluedTopology {
    topo: Topology,
    /// Per component, the mask of input disks (for dotted inputs).
    disks: Vec<u64>,
    nonloop: usize,
    src_loops: usize,
    tgt_loops: usize,
}

impl GluedTopology {
    fn build(
        pieces: usize,
        lines: Vec<(usize, usize)>,
        g1: &Glued,
        g2: &Glued,
        piece_src: impl Fn(Part) -> usize,
        piece_tgt: impl Fn(Part) -> usize,
        input_disks: usize,
    ) -> Result<Self> {
        let c = cycles(&g1.matching, &g2.matching)?;
        let mut circle_piece = vec![usize::MAX; c.count];
        for (p, &cy) in c.of_a.iter().enumerate() {
            if circle_piece[cy] == usize::MAX {
                circle_piece[cy] = piece_src(g1.arc_part[p]);
            }
        }
        circle_piece.extend(g1.loops.iter().map(|(p, _)| piece_src(*p)));
        circle_piece.extend(g2.loops.iter().map(|(p, _)| piece_tgt(*p)));
        if circle_piece.len() > 64 {
            return Err(KhError::Capability("more than 64 circles in a surface".into()));
        }
        let topo = Topology::new(&Surface { pieces, lines, circle_piece })?;
        let mut disks = vec![0u64; topo.components()];
        for i in 0..input_disks {
            disks[topo.comp_of_piece[i]] |= 1 << i;
        }
        Ok(GluedTopology { topo, disks, nonloop: c.count, src_loops: g1.loops.len(), tgt_loops: g2.loops.len() })
    }

    /// `f ⊗ id` for `f: m1 -> m2` glued with smoothing `s` of crossing `x`.
    pub fn tensor_identity(
        m1: &PlanarMatching,
        m2: &PlanarMatching,
        g1: &Glued,
        g2: &Glued,
        x: [u32; 4],
        s: [(usize, usize); 2],
    ) -> Result<Self> {
        let c = cycles(m1, m2)?;
        let strip = |slot: usize| c.count + s.iter().position(|(a, b)| *a == slot || *b == slot).unwrap();
        let mut lines = vec![];
        for slot in 0..4 {
            let l = x[slot];
            if let Some(o) = (0..4).find(|&o| o != slot && x[o] == l) {
                if slot < o {
                    lines.push((strip(slot), strip(o)));
                }
            } else if let Some(p) = m1.pair_of(l) {
                lines.push((c.of_a[p], strip(slot)));
            }
        }
        let src = |p: Part| match p {
            Part::M(i) => c.of_a[i],
            Part::S(j) => c.count + j,
        };
        let tgt = |p: Part| match p {
            Part::M(i) => c.of_b[i],
            Part::S(j) => c.count + j,
        };
        Self::build(c.count + 2, lines, g1, g2, src, tgt, c.count)
    }

    /// `id ⊗ saddle` from the 0-smoothing to the 1-smoothing glued onto `m`.
    pub fn saddle(m: &PlanarMatching, g0: &Glued, g1: &Glued, x: [u32; 4]) -> Result<Self> {
        let saddle = m.pairs.len();
        let mut lines = vec![];
        for slot in 0..4 {
            let l = x[slot];
            if let Some(o) = (0..4).find(|&o| o != slot && x[o] == l) {
                if slot < o {
                    lines.push((saddle, saddle));
                }
            } else if let Some(p) = m.pair_of(l) {
                lines.push((p, saddle));
            }
        }
        let piece = |p: Part| match p {
            Part::M(i) => i,
            Part::S(_) => saddle,
        };
        Self::build(saddle + 1, lines, g0, g1, piece, piece, 0)
    }

    /// Expand an input morphism (dots on its disks) and split off loop labels.
    pub fn apply(&self, input: &[(u64, BigInt)], coeff: Coefficients) -> Vec<DeloopedTerm> {
        let n = self.topo.components();
        let mut acc: BTreeMap<(u8, u8, u64), BigInt> = BTreeMap::new();
        let mut dots = vec![0u32; n];
        let low = (1u64 << self.nonloop) - 1;
        let src_all = (1u64 << self.src_loops) - 1;
        let tgt_all = (1u64 << self.tgt_loops) - 1;
        for (im, ic) in input {
            for c in 0..n {
                dots[c] = (im & self.disks[c]).count_ones();
            }
            let Some((masks, twos)) = self.topo.expand(&dots) else { continue };
            let coef = ic * pow2(twos);
            for m in masks {
                // a dotted source loop disk pairs with the label 1
                let src = (!(m >> self.nonloop) & src_all) as u8;
                let tgt = ((m >> (self.nonloop + self.src_loops)) & tgt_all) as u8;
                *acc.entry((src, tgt, m & low)).or_insert_with(BigInt::zero) += &coef;
            }
        }
        acc.into_iter()
            .map(|(k, c)| (k, coeff.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .map(|((src, tgt, mask), coeff)| DeloopedTerm { src, tgt, mask, coeff })
            .collect()
    }
}

/// q-shift carried by a loop labelling with `n` loops (bit set for X).
pub fn loop_shift(labels: u8, n: usize) -> i32 {
    let x = labels.count_ones() as i32;
    (n as i32 - x) - x
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Coefficients = Coefficients::Integers;

    fn arc() -> PlanarMatching {
        PlanarMatching::new([(0, 1)])
    }
    fn nested() -> PlanarMatching {
        PlanarMatching::new([(0, 3), (1, 2)])
    }
    fn unnested() -> PlanarMatching {
        PlanarMatching::new([(0, 1), (2, 3)])
    }

    fn m(s: &PlanarMatching, t: &PlanarMatching, terms: &[(u64, i64)]) -> CobMorphism {
        CobMorphism::new(s.clone(), t.clone(), terms.iter().map(|(a, b)| (*a, BigInt::from(*b))).collect(), Z)
    }

    #[test]
    fn dec_basis_sizes() {
        assert_eq!(dec_basis(&arc(), &arc()).unwrap().len(), 2);
        assert_eq!(dec_basis(&nested(), &nested()).unwrap().len(), 4);
        assert_eq!(dec_basis(&nested(), &unnested()).unwrap().len(), 2);
        assert!(dec_basis(&arc(), &nested()).is_err());
    }

    #[test]
    fn planarity_stack_test() {
        let order = [0, 1, 2, 3];
        assert!(nested().is_planar(&order));
        assert!(unnested().is_planar(&order));
        assert!(!PlanarMatching::new([(0, 2), (1, 3)]).is_planar(&order));
    }

    #[test]
    fn double_dot_vanishes() {
        let dotted = m(&arc(), &arc(), &[(1, 1)]);
        assert!(compose_h(&dotted, &dotted, Z).unwrap().terms.is_empty());
    }

    #[test]
    fn identity_composes() {
        let id = CobMorphism::identity(&nested());
        assert_eq!(compose_h(&id, &id, Z).unwrap(), id);
        let dotted = m(&nested(), &nested(), &[(2, 3)]);
        assert_eq!(compose_h(&id, &dotted, Z).unwrap(), dotted);
        assert_eq!(compose_h(&dotted, &id, Z).unwrap(), dotted);
    }

    #[test]
    fn saddle_then_saddle_is_tube() {
        // unnested -> nested -> unnested is a genus-0 surface joining both circles
        let s1 = m(&unnested(), &nested(), &[(0, 1)]);
        let s2 = m(&nested(), &unnested(), &[(0, 1)]);
        let t = compose_h(&s2, &s1, Z).unwrap();
        assert_eq!(t.terms, vec![(1, BigInt::from(1)), (2, BigInt::from(1))]);
    }

    #[test]
    fn degrees() {
        let s = m(&unnested(), &nested(), &[(0, 1)]);
        assert_eq!(s.term_degree(0).unwrap(), -1);
        let id = CobMorphism::identity(&nested());
        assert_eq!(id.term_degree(0).unwrap(), 0);
        assert_eq!(id.term_degree(3).unwrap(), -4);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(CobMorphism::zero(&arc(), &arc()).norm(), BigInt::zero());
        assert_eq!(m(&arc(), &arc(), &[(0, 2), (1, -3)]).norm(), BigInt::from(5));
    }

    #[test]
    fn composition_is_associative_and_bilinear() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let six = [
            PlanarMatching::new([(0, 1), (2, 3), (4, 5)]),
            PlanarMatching::new([(0, 1), (2, 5), (3, 4)]),
            PlanarMatching::new([(0, 3), (1, 2), (4, 5)]),
            PlanarMatching::new([(0, 5), (1, 2), (3, 4)]),
            PlanarMatching::new([(0, 5), (1, 4), (2, 3)]),
        ];
        let random = |rng: &mut rand_chacha::ChaCha8Rng, s: &PlanarMatching, t: &PlanarMatching| {
            let basis = dec_basis(s, t).unwrap();
            let terms = basis.iter().map(|b| (*b, BigInt::from(rng.gen_range(-3..=3)))).collect();
            CobMorphism::new(s.clone(), t.clone(), terms, Z)
        };
        for _ in 0..60 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| six[rng.gen_range(0..six.len())].clone();
            let (a, b, c, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let f = random(&mut rng, &a, &b);
            let f2 = random(&mut rng, &a, &b);
            let g = random(&mut rng, &b, &c);
            let h = random(&mut rng, &c, &d);
            let left = compose_h(&h, &compose_h(&g, &f, Z).unwrap(), Z).unwrap();
            let right = compose_h(&compose_h(&h, &g, Z).unwrap(), &f, Z).unwrap();
            assert_eq!(left, right);
            let sum = compose_h(&g, &f.add(&f2, Z), Z).unwrap();
            let split = compose_h(&g, &f, Z).unwrap().add(&compose_h(&g, &f2, Z).unwrap(), Z);
            assert_eq!(sum, split);
        }
    }

    #[test]
    fn neck_cutting_relations() {
        let disk = Topology::new(&Surface { pieces: 1, lines: vec![], circle_piece: vec![0] }).unwrap();
        assert_eq!(disk.expand(&[0]), Some((vec![0], 0)));
        assert_eq!(disk.expand(&[1]), Some((vec![1], 0)));
        assert!(disk.expand(&[2]).is_none());
        // a handle on a disk is twice a dot
        let punctured_torus =
            Topology::new(&Surface { pieces: 2, lines: vec![(0, 1), (0, 1), (0, 1)], circle_piece: vec![0] }).unwrap();
        assert_eq!(punctured_torus.genus, vec![1]);
        assert_eq!(punctured_torus.expand(&[0]), Some((vec![1], 1)));
        assert!(punctured_torus.expand(&[1]).is_none());
        let e = PlanarMatching::empty();
        assert_eq!(dec_basis(&e, &e).unwrap(), vec![0]);
    }

    #[test]
    fn glue_creates_loop_on_type_two() {
        // boundary {1,2} joined by an arc; crossing with labels 1,2 on adjacent slots
        let m = PlanarMatching::new([(1, 2), (5, 6)]);
        let g = glue(&m, [1, 2, 3, 4], SMOOTHINGS[0]);
        assert_eq!(g.loops.len(), 1);
        assert_eq!(g.matching, PlanarMatching::new([(3, 4), (5, 6)]));
        let g = glue(&m, [1, 2, 3, 4], SMOOTHINGS[1]);
        assert!(g.loops.is_empty());
        assert_eq!(g.matching, PlanarMatching::new([(3, 4), (5, 6)]));
    }

    #[test]
    fn glue_type_one_never_loops() {
        let m = PlanarMatching::new([(1, 2)]);
        for s in SMOOTHINGS {
            let g = glue(&m, [1, 7, 8, 9], s);
            assert!(g.loops.is_empty());
            assert_eq!(g.matching.boundary_size(), 4);
        }
    }

    #[test]
    fn glue_type_four_closes() {
        let m = PlanarMatching::new([(1, 2), (3, 4)]);
        let g = glue(&m, [1, 2, 3, 4], SMOOTHINGS[0]);
        assert_eq!(g.matching.boundary_size(), 0);
        assert_eq!(g.loops.len(), 2);
        let g = glue(&m, [1, 2, 3, 4], SMOOTHINGS[1]);
        assert_eq!(g.loops.len(), 1);
    }

    #[test]
    fn saddle_on_closed_circles_is_multiplication() {
        // two loops merging into one: m(1,1)=1, m(1,X)=X, m(X,X)=0
        let m = PlanarMatching::new([(1, 2), (3, 4)]);
        let x = [1, 2, 3, 4];
        let g0 = glue(&m, x, SMOOTHINGS[0]);
        let g1 = glue(&m, x, SMOOTHINGS[1]);
        let t = GluedTopology::saddle(&m, &g0, &g1, x).unwrap();
        let terms = t.apply(&[(0, BigInt::one())], Z);
        let pairs: Vec<(u8, u8)> = terms.iter().map(|t| (t.src, t.tgt)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1), (2, 1)]);
        assert!(terms.iter().all(|t| t.coeff == BigInt::one() && t.mask == 0));
    }

    #[test]
    fn saddle_splitting_circle_is_comultiplication() {
        let m = PlanarMatching::new([(1, 4), (2, 3)]);
        let x = [1, 2, 3, 4];
        let g0 = glue(&m, x, SMOOTHINGS[0]);
        let g1 = glue(&m, x, SMOOTHINGS[1]);
        assert_eq!((g0.loops.len(), g1.loops.len()), (1, 2));
        let t = GluedTopology::saddle(&m, &g0, &g1, x).unwrap();
        let terms = t.apply(&[(0, BigInt::one())], Z);
        let pairs: Vec<(u8, u8)> = terms.iter().map(|t| (t.src, t.tgt)).collect();
        // 1 -> 1⊗X + X⊗1, X -> X⊗X
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 3)]);
    }

    #[test]
    fn delooping_identity_is_identity_matrix() {
        // the identity on an object with loops becomes the identity on all labellings
        for (m, x) in [
            (PlanarMatching::new([(1, 2), (5, 6)]), [1, 2, 3, 4]),
            (PlanarMatching::new([(1, 2), (3, 4)]), [1, 2, 3, 4]),
        ] {
            let g = glue(&m, x, SMOOTHINGS[0]);
            let t = GluedTopology::tensor_identity(&m, &m, &g, &g, x, SMOOTHINGS[0]).unwrap();
            let terms = t.apply(&[(0, BigInt::one())], Z);
            let n = 1u8 << g.loops.len();
            assert_eq!(terms.len(), n as usize);
            for (l, term) in terms.iter().enumerate() {
                assert_eq!((term.src, term.tgt, term.mask), (l as u8, l as u8, 0));
                assert_eq!(term.coeff, BigInt::one());
            }
        }
    }
}
