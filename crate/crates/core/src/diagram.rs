//! Braid words, planar diagrams, nugatory reduction and scanning orders.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{KhError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    /// `i` stands for sigma_i, `-i` for its inverse; 1 <= |i| < strands.
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands < 1 {
            return Err(KhError::Invalid("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(KhError::Invalid(format!("generator {l} out of range for {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn n_plus(&self) -> usize {
        self.letters.iter().filter(|l| **l > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.letters.iter().filter(|l| **l < 0).count()
    }

    pub fn mirror(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().map(|l| -l).collect() }
    }

    pub fn pow(&self, n: usize) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.repeat(n) }
    }

    pub fn concat(&self, other: &Self) -> Self {
        assert_eq!(self.strands, other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { strands: self.strands, letters }
    }

    /// Conjugate by sigma_1 ... sigma_{t-1} so that the word-order scan of
    /// the closure is nice with girth 2t.
    pub fn conjugate_for_scan(&self) -> Self {
        let t = self.strands as i32;
        let mut letters: Vec<i32> = (1..t).collect();
        letters.extend_from_slice(&self.letters);
        letters.extend((1..t).rev().map(|i| -i));
        BraidWord { strands: self.strands, letters }
    }

    /// Alternating in the sense that sigma_i always appears with sign (-1)^i eps.
    pub fn is_alternating(&self) -> bool {
        let parity = |l: i32| (l > 0) ^ (l.abs() % 2 == 0);
        self.letters.windows(2).all(|w| parity(w[0]) == parity(w[1]))
    }

    /// The weaving link W(3, n), closure of (sigma_1^{-1} sigma_2)^n.
    pub fn weaving(n: usize) -> Self {
        BraidWord { strands: 3, letters: [-1, 2].repeat(n) }
    }

    /// (sigma_1 sigma_2 sigma_1^2 sigma_2^2)^n.
    pub fn positive_slow(n: usize) -> Self {
        BraidWord { strands: 3, letters: [1, 2, 1, 1, 2, 2].repeat(n) }
    }

    /// (sigma_1 sigma_3 sigma_2^4)^t sigma_1 sigma_3 on four strands.
    pub fn lt_family(t: usize) -> Self {
        let mut letters = [1, 3, 2, 2, 2, 2].repeat(t);
        letters.extend([1, 3]);
        BraidWord { strands: 4, letters }
    }

    /// T(3, 3k) as the closure of (sigma_1 sigma_2)^{3k}.
    pub fn torus33k(k: usize) -> Self {
        BraidWord { strands: 3, letters: [1, 2].repeat(3 * k) }
    }

    /// T(2, l) as the closure of sigma_1^l.
    pub fn torus2(l: i32) -> Self {
        let s = l.signum();
        BraidWord { strands: 2, letters: vec![s; l.unsigned_abs() as usize] }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={}", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Parse whitespace-separated nonzero integers with an optional `strands=N`
/// prefix. Without either prefix or `strands`, the strand count is the
/// largest index plus one.
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let mut declared = None;
    let mut letters = vec![];
    let mut pos = 0;
    for tok in text.split_whitespace() {
        let at = text[pos..].find(tok).map_or(pos, |o| pos + o);
        pos = at + tok.len();
        if let Some(n) = tok.strip_prefix("strands=") {
            if !letters.is_empty() || declared.is_some() {
                return Err(KhError::Parse(format!("'strands=' must come first (at byte {at})")));
            }
            let n: usize = n
                .parse()
                .map_err(|_| KhError::Parse(format!("bad strand count '{n}' at byte {at}")))?;
            declared = Some(n);
            continue;
        }
        let l: i32 = tok
            .parse()
            .map_err(|_| KhError::Parse(format!("expected a nonzero integer, found '{tok}' at byte {at}")))?;
        if l == 0 {
            return Err(KhError::Parse(format!("generator 0 at byte {at}")));
        }
        letters.push(l);
    }
    if let (Some(a), Some(b)) = (declared, strands) {
        if a != b {
            return Err(KhError::Parse(format!("conflicting strand counts {a} and {b}")));
        }
    }
    let inferred = letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(1);
    let n = declared.or(strands).unwrap_or(inferred.max(2));
    BraidWord::new(n, letters).map_err(|e| match e {
        KhError::Invalid(m) => KhError::Parse(m),
        e => e,
    })
}

/// A crossing in planar-diagram notation: edge labels listed
/// counterclockwise starting from the incoming under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub edges: [u32; 4],
    pub sign: i8,
}

impl Crossing {
    /// Slots (outgoing, incoming) of the over-strand.
    fn over_slots(&self) -> (usize, usize) {
        if self.sign > 0 {
            (1, 3)
        } else {
            (3, 1)
        }
    }

    fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_slots().1
    }

    /// The crossing seen in the mirror diagram (over and under exchanged).
    pub fn mirror(&self) -> Crossing {
        let [a, b, c, d] = self.edges;
        if self.sign > 0 {
            Crossing { edges: [d, a, b, c], sign: -1 }
        } else {
            Crossing { edges: [b, c, d, a], sign: 1 }
        }
    }

    /// The same crossing after turning its neighbourhood over about an
    /// in-plane axis; the sign is unchanged.
    fn flipped(&self) -> Crossing {
        let [a, b, c, d] = self.edges;
        if self.sign > 0 {
            Crossing { edges: [d, c, b, a], sign: 1 }
        } else {
            Crossing { edges: [b, a, d, c], sign: -1 }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    /// Circles without crossings.
    pub free_loops: usize,
}

#[derive(Deserialize)]
struct PdJson {
    #[serde(default)]
    #[allow(dead_code)]
    strands: Option<usize>,
    crossings: Vec<[i64; 5]>,
    #[serde(default)]
    free_loops: usize,
}

pub fn braid_closure(b: &BraidWord) -> LinkDiagram {
    let n = b.strands;
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut touched = vec![false; n];
    let mut next = n as u32;
    let mut crossings = Vec::with_capacity(b.len());
    for &l in &b.letters {
        let p = l.unsigned_abs() as usize - 1;
        touched[p] = true;
        touched[p + 1] = true;
        let (xl, xr, yl, yr) = (cur[p], cur[p + 1], next, next + 1);
        next += 2;
        let c = if l > 0 {
            Crossing { edges: [xr, yr, yl, xl], sign: 1 }
        } else {
            Crossing { edges: [xl, xr, yr, yl], sign: -1 }
        };
        crossings.push(c);
        cur[p] = yl;
        cur[p + 1] = yr;
    }
    let close: HashMap<u32, u32> = cur.iter().enumerate().map(|(p, &e)| (e, p as u32)).collect();
    for c in &mut crossings {
        for e in &mut c.edges {
            if let Some(&to) = close.get(e) {
                *e = to;
            }
        }
    }
    let free_loops = touched.iter().filter(|t| !**t).count();
    LinkDiagram { crossings, free_loops }
}

impl LinkDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let d = LinkDiagram { crossings, free_loops };
        d.validate()?;
        Ok(d)
    }

    pub fn from_pd_json(text: &str) -> Result<Self> {
        let pd: PdJson = serde_json::from_str(text).map_err(|e| KhError::Parse(e.to_string()))?;
        let mut crossings = vec![];
        for (k, c) in pd.crossings.iter().enumerate() {
            let sign = match c[4] {
                1 => 1,
                -1 => -1,
                s => return Err(KhError::Parse(format!("crossing {k}: sign must be +1 or -1, got {s}"))),
            };
            let mut edges = [0u32; 4];
            for (slot, e) in edges.iter_mut().enumerate() {
                *e = u32::try_from(c[slot])
                    .map_err(|_| KhError::Parse(format!("crossing {k}: negative edge label")))?;
            }
            crossings.push(Crossing { edges, sign });
        }
        LinkDiagram::new(crossings, pd.free_loops).map_err(|e| match e {
            KhError::Invalid(m) => KhError::Parse(m),
            e => e,
        })
    }

    pub fn to_pd_json(&self) -> serde_json::Value {
        let cs: Vec<[i64; 5]> = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, x, d] = c.edges;
                [a as i64, b as i64, x as i64, d as i64, c.sign as i64]
            })
            .collect();
        serde_json::json!({ "crossings": cs, "free_loops": self.free_loops })
    }

    /// Every edge has two endpoints, one incoming and one outgoing.
    pub fn validate(&self) -> Result<()> {
        let mut ends: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
        for (k, c) in self.crossings.iter().enumerate() {
            if c.sign != 1 && c.sign != -1 {
                return Err(KhError::Invalid(format!("crossing {k}: bad sign {}", c.sign)));
            }
            for slot in 0..4 {
                let e = ends.entry(c.edges[slot]).or_default();
                if c.is_incoming(slot) {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        for (e, (i, o)) in ends {
            if i + o != 2 {
                return Err(KhError::Invalid(format!("edge {e} has {} endpoints", i + o)));
            }
            if i != 1 {
                return Err(KhError::Invalid(format!("edge {e} is not consistently oriented")));
            }
        }
        Ok(())
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign < 0).count()
    }

    pub fn mirror(&self) -> Self {
        LinkDiagram {
            crossings: self.crossings.iter().map(|c| c.mirror()).collect(),
            free_loops: self.free_loops,
        }
    }

    fn edge_set(&self) -> BTreeSet<u32> {
        self.crossings.iter().flat_map(|c| c.edges).collect()
    }

    /// Component index of each edge; free loops get the last indices.
    pub fn edge_components(&self) -> (BTreeMap<u32, usize>, usize) {
        let edges: Vec<u32> = self.edge_set().into_iter().collect();
        let idx: HashMap<u32, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut uf = UnionFind::new(edges.len());
        for c in &self.crossings {
            uf.union(idx[&c.edges[0]], idx[&c.edges[2]]);
            uf.union(idx[&c.edges[1]], idx[&c.edges[3]]);
        }
        let mut comp_of_root = BTreeMap::new();
        let mut out = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            let r = uf.find(i);
            let n = comp_of_root.len();
            let c = *comp_of_root.entry(r).or_insert(n);
            out.insert(*e, c);
        }
        let n = comp_of_root.len() + self.free_loops;
        (out, n)
    }

    pub fn component_count(&self) -> usize {
        self.edge_components().1
    }

    /// Number of components and the symmetric linking matrix.
    pub fn linking_data(&self) -> (usize, Vec<Vec<i64>>) {
        let (comp, n) = self.edge_components();
        let mut twice = vec![vec![0i64; n]; n];
        for c in &self.crossings {
            let (u, v) = (comp[&c.edges[0]], comp[&c.edges[1]]);
            if u != v {
                twice[u][v] += c.sign as i64;
                twice[v][u] += c.sign as i64;
            }
        }
        let lk = twice
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        debug_assert!(x % 2 == 0);
                        x / 2
                    })
                    .collect()
            })
            .collect();
        (n, lk)
    }

    /// Crossing incidences of each edge: (crossing, slot) pairs.
    fn edge_ends(&self) -> BTreeMap<u32, Vec<(usize, usize)>> {
        let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (k, c) in self.crossings.iter().enumerate() {
            for (s, e) in c.edges.iter().enumerate() {
                ends.entry(*e).or_default().push((k, s));
            }
        }
        ends
    }

    /// Connected as a diagram in the plane.
    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() {
            return self.free_loops <= 1;
        }
        if self.free_loops > 0 {
            return false;
        }
        let mut uf = UnionFind::new(self.crossings.len());
        for (_, v) in self.edge_ends() {
            uf.union(v[0].0, v[1].0);
        }
        (0..self.crossings.len()).all(|k| uf.find(k) == uf.find(0))
    }

    /// Find a nugatory crossing: removing it separates its four slots into
    /// two adjacent pairs.
    fn find_nugatory(&self) -> Option<(usize, usize)> {
        let ends = self.edge_ends();
        let n = self.crossings.len();
        for x in 0..n {
            // nodes: crossings 0..n, ports n..n+4
            let mut uf = UnionFind::new(n + 4);
            for v in ends.values() {
                let node = |(k, s): (usize, usize)| if k == x { n + s } else { k };
                uf.union(node(v[0]), node(v[1]));
            }
            let r: Vec<usize> = (0..4).map(|s| uf.find(n + s)).collect();
            if r[0] == r[1] && r[2] == r[3] && r[0] != r[2] {
                return Some((x, 0));
            }
            if r[1] == r[2] && r[3] == r[0] && r[1] != r[3] {
                return Some((x, 1));
            }
        }
        None
    }

    /// Remove nugatory crossings until none are left.
    pub fn reduce_nugatory(&self) -> Result<Self> {
        if !self.is_connected() {
            return Err(KhError::Invalid("reduce_nugatory needs a connected diagram".into()));
        }
        let mut d = self.clone();
        while let Some((x, s)) = d.find_nugatory() {
            d = d.remove_nugatory(x, s);
        }
        Ok(d)
    }

    /// Remove crossing `x` whose slots `s, s+1` and `s+2, s+3` lie on
    /// different sides; the smaller side is turned over.
    fn remove_nugatory(&self, x: usize, s: usize) -> Self {
        let n = self.crossings.len();
        let ends = self.edge_ends();
        let mut uf = UnionFind::new(n + 4);
        for v in ends.values() {
            let node = |(k, t): (usize, usize)| if k == x { n + t } else { k };
            uf.union(node(v[0]), node(v[1]));
        }
        let side_a: Vec<usize> = (0..n).filter(|&k| k != x && uf.find(k) == uf.find(n + s)).collect();
        let side_b: Vec<usize> = (0..n).filter(|&k| k != x && uf.find(k) != uf.find(n + s)).collect();
        let flip: BTreeSet<usize> =
            if side_a.len() <= side_b.len() { side_a.into_iter().collect() } else { side_b.into_iter().collect() };
        let [a, b, c, d] = self.crossings[x].edges;
        // strands through x are a -> c and b <-> d; join them directly
        let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
        let labels: BTreeSet<u32> = [a, b, c, d].into_iter().collect();
        let labels: Vec<u32> = labels.into_iter().collect();
        let li = |e: u32| labels.iter().position(|l| *l == e).unwrap();
        let mut luf = UnionFind::new(labels.len());
        luf.union(li(a), li(c));
        luf.union(li(b), li(d));
        for &e in &labels {
            let root = luf.find(li(e));
            let rep = labels.iter().copied().filter(|f| luf.find(li(*f)) == root).min().unwrap();
            rename.insert(e, rep);
        }
        let mut crossings = vec![];
        for (k, cr) in self.crossings.iter().enumerate() {
            if k == x {
                continue;
            }
            let mut cr = if flip.contains(&k) { cr.flipped() } else { *cr };
            for e in &mut cr.edges {
                if let Some(r) = rename.get(e) {
                    *e = *r;
                }
            }
            crossings.push(cr);
        }
        let used: BTreeSet<u32> = crossings.iter().flat_map(|c| c.edges).collect();
        let reps: BTreeSet<u32> = rename.values().copied().collect();
        let new_loops = reps.iter().filter(|r| !used.contains(r)).count();
        LinkDiagram { crossings, free_loops: self.free_loops + new_loops }
    }

    pub fn has_nugatory(&self) -> bool {
        self.find_nugatory().is_some()
    }

    /// Crossings adjacent to `x` through edges (with multiplicity), self-edges excluded.
    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![vec![]; self.crossings.len()];
        for (_, v) in self.edge_ends() {
            let (p, q) = (v[0].0, v[1].0);
            if p != q {
                nb[p].push(q);
                nb[q].push(p);
            }
        }
        nb
    }
}

/// Kind of gluing step, by the number of edges shared with the current subtangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepType {
    /// Shares no edge (the first crossing of a scan, or a disjoint piece).
    Start,
    I,
    II,
    III,
    IV,
}

impl StepType {
    fn from_shared(shared: usize) -> StepType {
        match shared {
            0 => StepType::Start,
            1 => StepType::I,
            2 => StepType::II,
            3 => StepType::III,
            _ => StepType::IV,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSequence {
    pub order: Vec<usize>,
    pub types: Vec<StepType>,
    /// Boundary size of the subtangle after each step.
    pub boundary_sizes: Vec<usize>,
    /// True when the order is a nice scanning sequence.
    pub nice: bool,
}

impl ScanSequence {
    pub fn girth(&self) -> usize {
        self.boundary_sizes.iter().copied().max().unwrap_or(0)
    }

    /// Describe an arbitrary crossing order.
    pub fn from_order(l: &LinkDiagram, order: Vec<usize>) -> Result<Self> {
        let n = l.crossings.len();
        let mut seen = vec![false; n];
        for &k in &order {
            if k >= n || seen[k] {
                return Err(KhError::Invalid("scan order is not a permutation of the crossings".into()));
            }
            seen[k] = true;
        }
        if order.len() != n {
            return Err(KhError::Invalid("scan order is not a permutation of the crossings".into()));
        }
        let mut boundary: BTreeSet<u32> = BTreeSet::new();
        let mut types = vec![];
        let mut sizes = vec![];
        let mut self_edges = false;
        for &k in &order {
            let c = &l.crossings[k];
            let mut shared = 0;
            let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
            for e in c.edges {
                *counts.entry(e).or_default() += 1;
            }
            for (e, m) in counts {
                if m == 2 {
                    self_edges = true;
                } else if boundary.remove(&e) {
                    shared += 1;
                } else {
                    boundary.insert(e);
                }
            }
            types.push(StepType::from_shared(shared));
            sizes.push(boundary.len());
        }
        let mut nice = n >= 2 && !self_edges && l.free_loops == 0;
        if nice {
            nice = types[0] == StepType::Start
                && types[n - 1] == StepType::IV
                && types[1..n - 1].iter().all(|t| matches!(t, StepType::I | StepType::II | StepType::III));
        }
        if nice {
            let nb = l.neighbours();
            let mut remaining: BTreeSet<usize> = (0..n).collect();
            for &k in &order {
                remaining.remove(&k);
                if !induces_connected(&nb, &remaining) {
                    nice = false;
                    break;
                }
            }
        }
        Ok(ScanSequence { order, types, boundary_sizes: sizes, nice })
    }

    /// Crossings in diagram order; for braid closures this is word order.
    pub fn in_order(l: &LinkDiagram) -> Self {
        Self::from_order(l, (0..l.crossings.len()).collect()).expect("identity order")
    }

    /// Greedy order: prefer crossings sharing the most edges with the
    /// current subtangle, then the smallest resulting boundary, then id.
    pub fn greedy(l: &LinkDiagram) -> Self {
        let n = l.crossings.len();
        let mut boundary: BTreeSet<u32> = BTreeSet::new();
        let mut used = vec![false; n];
        let mut order = vec![];
        for _ in 0..n {
            let mut best: Option<(usize, usize, usize)> = None;
            for k in 0..n {
                if used[k] {
                    continue;
                }
                let (shared, size) = step_effect(&l.crossings[k], &boundary);
                let key = (usize::MAX - shared, size, k);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
            let k = best.unwrap().2;
            used[k] = true;
            apply_step(&l.crossings[k], &mut boundary);
            order.push(k);
        }
        Self::from_order(l, order).expect("greedy order is a permutation")
    }
}

fn step_effect(c: &Crossing, boundary: &BTreeSet<u32>) -> (usize, usize) {
    let mut b = boundary.clone();
    let before = b.len();
    apply_step(c, &mut b);
    let shared = c.edges.iter().filter(|e| boundary.contains(e)).count();
    let _ = before;
    (shared, b.len())
}

fn apply_step(c: &Crossing, boundary: &mut BTreeSet<u32>) {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for e in c.edges {
        *counts.entry(e).or_default() += 1;
    }
    for (e, m) in counts {
        if m == 1 && !boundary.remove(&e) {
            boundary.insert(e);
        }
    }
}

fn induces_connected(nb: &[Vec<usize>], set: &BTreeSet<usize>) -> bool {
    let Some(&start) = set.iter().next() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &nb[x] {
            if set.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == set.len()
}

/// A nice scanning sequence for a connected reduced diagram, chosen
/// greedily: among admissible crossings take the one minimizing the new
/// boundary size, ties by crossing id.
pub fn nice_scanning_sequence(l: &LinkDiagram) -> Result<ScanSequence> {
    let n = l.crossings.len();
    if n < 2 {
        return Err(KhError::Invalid("a nice scanning sequence needs at least two crossings".into()));
    }
    if !l.is_connected() {
        return Err(KhError::Invalid("diagram is not connected".into()));
    }
    if let Some((x, _)) = l.find_nugatory() {
        return Err(KhError::Invalid(format!(
            "crossing graph is not 2-connected: crossing {x} separates it (nugatory)"
        )));
    }
    let nb = l.neighbours();
    let mut boundary = BTreeSet::new();
    let mut remaining: BTreeSet<usize> = (0..n).collect();
    let mut order = vec![0];
    remaining.remove(&0);
    apply_step(&l.crossings[0], &mut boundary);
    while !remaining.is_empty() {
        let mut cands: Vec<(usize, usize)> = remaining
            .iter()
            .copied()
            .filter(|&k| l.crossings[k].edges.iter().any(|e| boundary.contains(e)))
            .map(|k| (step_effect(&l.crossings[k], &boundary).1, k))
            .collect();
        cands.sort();
        let pick = cands.into_iter().map(|(_, k)| k).find(|&k| {
            let mut rest = remaining.clone();
            rest.remove(&k);
            induces_connected(&nb, &rest)
        });
        let Some(k) = pick else {
            return Err(KhError::Invalid("no admissible next crossing; crossing graph is not 2-connected".into()));
        };
        remaining.remove(&k);
        apply_step(&l.crossings[k], &mut boundary);
        order.push(k);
    }
    let s = ScanSequence::from_order(l, order)?;
    if !s.nice {
        return Err(KhError::Invariant("greedy order failed nice-sequence validation".into()));
    }
    Ok(s)
}

/// A nice sequence when one exists, otherwise the greedy order.
pub fn default_scan_sequence(l: &LinkDiagram) -> ScanSequence {
    nice_scanning_sequence(l).unwrap_or_else(|_| ScanSequence::greedy(l))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
