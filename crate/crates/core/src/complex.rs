//! Based cochain complexes over the cobordism category.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::cob::{
    check_composition_norm, cycles, glue, l1_norm, loop_shift, CompositionTopology, Glued, GluedTopology,
    PlanarMatching, Terms, SMOOTHINGS,
};
use crate::diagram::Crossing;
use crate::error::{KhError, Result};
use crate::ring::Coefficients;
use crate::smith::FreeComplex;

/// A summand `q^q D` sitting in homological degree `deg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub deg: i32,
    pub q: i32,
    pub obj: u32,
}

#[derive(Clone)]
pub struct BasedComplex {
    pub coefficients: Coefficients,
    /// Boundary labels of every object, sorted.
    boundary: Vec<u32>,
    objects: Vec<PlanarMatching>,
    object_ids: HashMap<PlanarMatching, u32>,
    gens: Vec<Generator>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, Terms>>,
    inc: Vec<BTreeSet<usize>>,
    compositions: HashMap<(u32, u32, u32), Rc<CompositionTopology>>,
    /// Assert the horizontal composition norm bound on every composition.
    pub check_norms: bool,
}

impl BasedComplex {
    /// A complex with no generators.
    pub fn new(coefficients: Coefficients) -> Self {
        BasedComplex {
            coefficients,
            boundary: vec![],
            objects: vec![],
            object_ids: HashMap::new(),
            gens: vec![],
            alive: vec![],
            out: vec![],
            inc: vec![],
            compositions: HashMap::new(),
            check_norms: false,
        }
    }

    /// The complex of the empty tangle with `free_loops` circles, delooped.
    pub fn empty(coefficients: Coefficients, free_loops: usize) -> Self {
        let mut c = BasedComplex::new(coefficients);
        let obj = c.intern(PlanarMatching::empty());
        for labels in 0..1u32 << free_loops {
            let q = free_loops as i32 - 2 * labels.count_ones() as i32;
            c.push_generator(Generator { deg: 0, q, obj });
        }
        c
    }

    fn with_boundary(&self, boundary: Vec<u32>) -> Self {
        BasedComplex {
            coefficients: self.coefficients,
            boundary,
            objects: vec![],
            object_ids: HashMap::new(),
            gens: vec![],
            alive: vec![],
            out: vec![],
            inc: vec![],
            compositions: HashMap::new(),
            check_norms: self.check_norms,
        }
    }

    fn intern(&mut self, m: PlanarMatching) -> u32 {
        if let Some(&id) = self.object_ids.get(&m) {
            return id;
        }
        let id = self.objects.len() as u32;
        self.objects.push(m.clone());
        self.object_ids.insert(m, id);
        id
    }

    fn push_generator(&mut self, g: Generator) -> usize {
        self.gens.push(g);
        self.alive.push(true);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeSet::new());
        self.gens.len() - 1
    }

    pub fn add_generator(&mut self, deg: i32, q: i32, m: PlanarMatching) -> Result<usize> {
        if m.labels() != self.boundary {
            if self.gens.is_empty() {
                self.boundary = m.labels();
            } else {
                return Err(KhError::Invalid("object boundary differs from the complex boundary".into()));
            }
        }
        let obj = self.intern(m);
        Ok(self.push_generator(Generator { deg, q, obj }))
    }

    pub fn boundary(&self) -> &[u32] {
        &self.boundary
    }

    pub fn generator(&self, x: usize) -> Generator {
        self.gens[x]
    }

    pub fn object(&self, x: usize) -> &PlanarMatching {
        &self.objects[self.gens[x].obj as usize]
    }

    pub fn alive_generators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.gens.len()).filter(|x| self.alive[*x])
    }

    pub fn generator_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    pub fn entry(&self, x: usize, y: usize) -> Option<&Terms> {
        self.out[x].get(&y)
    }

    pub fn entries(&self, x: usize) -> impl Iterator<Item = (usize, &Terms)> {
        self.out[x].iter().map(|(y, t)| (*y, t))
    }

    /// Add `terms` to the differential entry from `x` to `y`.
    pub fn add_entry(&mut self, x: usize, y: usize, terms: &[(u64, BigInt)]) {
        if terms.is_empty() {
            return;
        }
        debug_assert_eq!(self.gens[x].deg + 1, self.gens[y].deg);
        let coeff = self.coefficients;
        let slot = self.out[x].entry(y).or_default();
        let mut acc: BTreeMap<u64, BigInt> = std::mem::take(slot).into_iter().collect();
        for (m, c) in terms {
            *acc.entry(*m).or_insert_with(BigInt::zero) += c;
        }
        let merged: Terms =
            acc.into_iter().map(|(m, c)| (m, coeff.reduce(c))).filter(|(_, c)| !c.is_zero()).collect();
        if merged.is_empty() {
            self.out[x].remove(&y);
            self.inc[y].remove(&x);
        } else {
            *self.out[x].get_mut(&y).unwrap() = merged;
            self.inc[y].insert(x);
        }
    }

    fn remove(&mut self, x: usize) {
        for y in std::mem::take(&mut self.out[x]).into_keys() {
            self.inc[y].remove(&x);
        }
        for a in std::mem::take(&mut self.inc[x]) {
            self.out[a].remove(&x);
        }
        self.alive[x] = false;
    }

    /// The unit `u` when the entry `x -> y` is `u` times an identity cobordism.
    pub fn invertible_entry(&self, x: usize, y: usize) -> Option<BigInt> {
        if self.gens[x].obj != self.gens[y].obj || self.gens[x].q != self.gens[y].q {
            return None;
        }
        match self.out[x].get(&y).map(|t| t.as_slice()) {
            Some([(0, u)]) if self.coefficients.is_unit(u) => Some(u.clone()),
            _ => None,
        }
    }

    fn composition(&mut self, a: u32, b: u32, c: u32) -> Result<Rc<CompositionTopology>> {
        if let Some(t) = self.compositions.get(&(a, b, c)) {
            return Ok(t.clone());
        }
        let t = Rc::new(CompositionTopology::new(
            &self.objects[a as usize],
            &self.objects[b as usize],
            &self.objects[c as usize],
        )?);
        self.compositions.insert((a, b, c), t.clone());
        Ok(t)
    }

    /// Compose the entries `x -> y` and `y -> z`.
    pub fn compose_entries(&mut self, x: usize, y: usize, z: usize) -> Result<Terms> {
        let (Some(f), Some(g)) = (self.out[x].get(&y).cloned(), self.out[y].get(&z).cloned()) else {
            return Ok(vec![]);
        };
        let topo = self.composition(self.gens[x].obj, self.gens[y].obj, self.gens[z].obj)?;
        let out = topo.compose(&g, &f, self.coefficients);
        if self.check_norms {
            let pairs = self.boundary.len() / 2;
            check_composition_norm(&out, &g, &f, pairs, self.coefficients)?;
        }
        Ok(out)
    }

    /// Cancel the invertible entry `x -> y`, correcting `a -> b` by `-γ φ⁻¹ δ`.
    pub fn gaussian_eliminate(&mut self, x: usize, y: usize) -> Result<()> {
        let Some(u) = self.invertible_entry(x, y) else {
            return Err(KhError::Invariant(format!("entry {x} -> {y} is not invertible")));
        };
        let uinv = self.coefficients.inverse(&u);
        let sources: Vec<usize> = self.inc[y].iter().copied().filter(|a| *a != x).collect();
        let targets: Vec<usize> = self.out[x].keys().copied().filter(|b| *b != y).collect();
        let xo = self.gens[x].obj;
        let coeff = self.coefficients;
        for &a in &sources {
            let delta = self.out[a][&y].clone();
            for &b in &targets {
                let gamma = self.out[x][&b].clone();
                let topo = self.composition(self.gens[a].obj, xo, self.gens[b].obj)?;
                let prod = topo.compose(&gamma, &delta, coeff);
                if self.check_norms {
                    check_composition_norm(&prod, &gamma, &delta, self.boundary.len() / 2, coeff)?;
                }
                let corr: Terms = prod.into_iter().map(|(m, c)| (m, coeff.reduce(-(c * &uinv)))).collect();
                self.add_entry(a, b, &corr);
            }
        }
        self.remove(x);
        self.remove(y);
        Ok(())
    }

    /// Eliminate the entries of a Morse matching after validating it.
    pub fn morse_reduce(&mut self, matching: &[(usize, usize)]) -> Result<()> {
        self.validate_morse_matching(matching)?;
        let mut sorted = matching.to_vec();
        sorted.sort_unstable();
        for (x, y) in sorted {
            self.gaussian_eliminate(x, y)?;
        }
        Ok(())
    }

    /// Matching property, invertibility and acyclicity of the zig-zag graph.
    pub fn validate_morse_matching(&self, matching: &[(usize, usize)]) -> Result<()> {
        let mut used = BTreeSet::new();
        for &(x, y) in matching {
            if !self.alive[x] || !self.alive[y] || !used.insert(x) || !used.insert(y) {
                return Err(KhError::Invariant(format!("Morse matching edges are not disjoint at {x} -> {y}")));
            }
            if self.invertible_entry(x, y).is_none() {
                return Err(KhError::Invariant(format!("Morse matching entry {x} -> {y} is not invertible")));
            }
        }
        // reversed matched edges plus all other edges must be acyclic
        let matched: HashMap<usize, usize> = matching.iter().map(|&(x, y)| (y, x)).collect();
        let nodes: BTreeSet<usize> = matching.iter().flat_map(|&(x, y)| [x, y]).collect();
        let mut indeg: HashMap<usize, usize> = nodes.iter().map(|n| (*n, 0)).collect();
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &n in &nodes {
            let succ: Vec<usize> = if let Some(&x) = matched.get(&n) {
                vec![x]
            } else {
                self.out[n].keys().copied().filter(|y| nodes.contains(y) && matched.get(y) != Some(&n)).collect()
            };
            for &s in &succ {
                *indeg.get_mut(&s).unwrap() += 1;
            }
            adj.insert(n, succ);
        }
        let mut queue: Vec<usize> = indeg.iter().filter(|(_, d)| **d == 0).map(|(n, _)| *n).collect();
        let mut seen = 0;
        while let Some(n) = queue.pop() {
            seen += 1;
            for &s in &adj[&n] {
                let d = indeg.get_mut(&s).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(s);
                }
            }
        }
        if seen != nodes.len() {
            return Err(KhError::Invariant("Morse matching has a zig-zag cycle".into()));
        }
        Ok(())
    }

    /// Cancel invertible entries until none remain.
    pub fn reduce_exhaustive(&mut self) -> Result<usize> {
        let mut count = 0;
        loop {
            let mut any = false;
            for x in 0..self.gens.len() {
                while self.alive[x] {
                    let best = self
                        .out[x]
                        .keys()
                        .copied()
                        .filter(|y| self.invertible_entry(x, *y).is_some())
                        .min_by_key(|y| (self.inc[*y].len(), *y));
                    match best {
                        Some(y) => {
                            self.gaussian_eliminate(x, y)?;
                            count += 1;
                            any = true;
                        }
                        None => break,
                    }
                }
            }
            if !any {
                return Ok(count);
            }
        }
    }

    /// Drop everything above homological degree `k`.
    pub fn truncate(&mut self, k: i32) {
        for x in 0..self.gens.len() {
            if self.alive[x] && self.gens[x].deg > k {
                self.remove(x);
            }
        }
    }

    pub fn rank_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut r = BTreeMap::new();
        for x in self.alive_generators() {
            *r.entry(self.gens[x].deg).or_insert(0) += 1;
        }
        r
    }

    /// Largest l1 norm of an entry of each differential `d^i`.
    pub fn max_norm_by_degree(&self) -> BTreeMap<i32, BigInt> {
        let mut r: BTreeMap<i32, BigInt> = BTreeMap::new();
        for x in self.alive_generators() {
            for t in self.out[x].values() {
                let n = l1_norm(t);
                let e = r.entry(self.gens[x].deg).or_insert_with(BigInt::zero);
                if n > *e {
                    *e = n;
                }
            }
        }
        r
    }

    /// Exact check of `d ∘ d = 0` in the dec basis.
    pub fn is_complex(&mut self) -> Result<bool> {
        for x in 0..self.gens.len() {
            if !self.alive[x] {
                continue;
            }
            let mut acc: BTreeMap<usize, BTreeMap<u64, BigInt>> = BTreeMap::new();
            let mids: Vec<usize> = self.out[x].keys().copied().collect();
            for y in mids {
                let ends: Vec<usize> = self.out[y].keys().copied().collect();
                for z in ends {
                    for (m, c) in self.compose_entries(x, y, z)? {
                        *acc.entry(z).or_default().entry(m).or_insert_with(BigInt::zero) += c;
                    }
                }
            }
            let coeff = self.coefficients;
            if acc.values().flat_map(|t| t.values()).any(|c| !coeff.reduce(c.clone()).is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every entry has q-degree zero once the summand shifts are included.
    pub fn check_degrees(&self) -> Result<()> {
        for x in self.alive_generators() {
            for (y, t) in &self.out[x] {
                let (gx, gy) = (self.gens[x], self.gens[*y]);
                let (a, b) = (&self.objects[gx.obj as usize], &self.objects[gy.obj as usize]);
                let c = cycles(a, b)?.count as i32;
                for (m, _) in t {
                    let deg = c - (a.boundary_size() / 2) as i32 - 2 * m.count_ones() as i32 + gy.q - gx.q;
                    if deg != 0 {
                        return Err(KhError::Invariant(format!("entry {x} -> {y} has q-degree {deg}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Glue a crossing: total complex of `self ⊗ [0-smoothing -> q 1-smoothing]`
    /// with new circles delooped. Generators above `max_deg` are not created.
    /// Also returns the designated pivots of the crossing blocks.
    pub fn tensor_crossing(&self, c: &Crossing, max_deg: Option<i32>) -> Result<(BasedComplex, Vec<(usize, usize)>)> {
        let x = c.edges;
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for e in x {
            *counts.entry(e).or_default() += 1;
        }
        let mut boundary: BTreeSet<u32> = self.boundary.iter().copied().collect();
        for (e, n) in counts {
            if n == 1 && !boundary.remove(&e) {
                boundary.insert(e);
            }
        }
        let mut d = self.with_boundary(boundary.into_iter().collect());
        let mut glued: HashMap<(u32, usize), Rc<Glued>> = HashMap::new();
        let mut glue_of = |obj: u32, p: usize| -> Rc<Glued> {
            glued.entry((obj, p)).or_insert_with(|| Rc::new(glue(&self.objects[obj as usize], x, SMOOTHINGS[p]))).clone()
        };
        // base[g][p] = (first new generator, loop count)
        let mut base: Vec<[Option<(usize, usize)>; 2]> = vec![[None, None]; self.gens.len()];
        for g in self.alive_generators() {
            let gen = self.gens[g];
            for p in 0..2 {
                let deg = gen.deg + p as i32;
                if max_deg.is_some_and(|m| deg > m) {
                    continue;
                }
                let gl = glue_of(gen.obj, p);
                let obj = d.intern(gl.matching.clone());
                let nl = gl.loops.len();
                let first = d.gens.len();
                for labels in 0..1u8 << nl {
                    d.push_generator(Generator { deg, q: gen.q + p as i32 + loop_shift(labels, nl), obj });
                }
                base[g][p] = Some((first, nl));
            }
        }
        let coeff = self.coefficients;
        let mut tensor_topo: HashMap<(u32, u32, usize), Rc<GluedTopology>> = HashMap::new();
        for g in self.alive_generators() {
            for (&h, f) in &self.out[g] {
                for p in 0..2 {
                    let (Some((bg, _)), Some((bh, _))) = (base[g][p], base[h][p]) else { continue };
                    let key = (self.gens[g].obj, self.gens[h].obj, p);
                    let topo = match tensor_topo.get(&key) {
                        Some(t) => t.clone(),
                        None => {
                            let t = Rc::new(GluedTopology::tensor_identity(
                                &self.objects[key.0 as usize],
                                &self.objects[key.1 as usize],
                                &glue_of(key.0, p),
                                &glue_of(key.1, p),
                                x,
                                SMOOTHINGS[p],
                            )?);
                            tensor_topo.insert(key, t.clone());
                            t
                        }
                    };
                    for t in topo.apply(f, coeff) {
                        d.add_entry(bg + t.src as usize, bh + t.tgt as usize, &[(t.mask, t.coeff)]);
                    }
                }
            }
        }
        let mut saddle_topo: HashMap<u32, Rc<GluedTopology>> = HashMap::new();
        let mut pivots = vec![];
        for g in self.alive_generators() {
            let (Some((b0, l0)), Some((b1, l1))) = (base[g][0], base[g][1]) else { continue };
            let obj = self.gens[g].obj;
            let topo = match saddle_topo.get(&obj) {
                Some(t) => t.clone(),
                None => {
                    let t = Rc::new(GluedTopology::saddle(
                        &self.objects[obj as usize],
                        &glue_of(obj, 0),
                        &glue_of(obj, 1),
                        x,
                    )?);
                    saddle_topo.insert(obj, t.clone());
                    t
                }
            };
            let sign = if self.gens[g].deg % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            for t in topo.apply(&[(0, sign)], coeff) {
                d.add_entry(b0 + t.src as usize, b1 + t.tgt as usize, &[(t.mask, t.coeff)]);
            }
            match (l0, l1) {
                (0, 1) => pivots.push((b0, b1 + 1)),
                (1, 0) => pivots.push((b0, b1)),
                (1, 2) => {
                    for lam in 0..2 {
                        pivots.push((b0 + lam, b1 + (lam | 2)));
                    }
                }
                (2, 1) => {
                    for lam in 0..2 {
                        pivots.push((b0 + lam, b1 + lam));
                    }
                }
                _ => {}
            }
        }
        Ok((d, pivots))
    }

    /// Apply the TQFT to a closed complex and add the global shift.
    pub fn to_free_complex(&self, n_plus: i32, n_minus: i32) -> Result<FreeComplex> {
        if !self.boundary.is_empty() {
            return Err(KhError::Invalid("complex still has boundary".into()));
        }
        let mut fc = FreeComplex::new(self.coefficients);
        let mut id = HashMap::new();
        for x in self.alive_generators() {
            let g = self.gens[x];
            id.insert(x, fc.add_generator(g.deg - n_minus, g.q + n_plus - 2 * n_minus));
        }
        for x in self.alive_generators() {
            for (y, t) in &self.out[x] {
                for (m, c) in t {
                    debug_assert_eq!(*m, 0);
                    fc.add_entry(id[&x], id[y], c.clone());
                }
            }
        }
        Ok(fc)
    }

    /// Largest coefficient bit length among all entries.
    pub fn max_coefficient_bits(&self) -> u64 {
        self.alive_generators()
            .flat_map(|x| self.out[x].values())
            .flat_map(|t| t.iter().map(|(_, c)| c.abs().bits()))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, BraidWord};

    const Z: Coefficients = Coefficients::Integers;

    fn arc(a: u32, b: u32) -> PlanarMatching {
        PlanarMatching::new([(a, b)])
    }

    #[test]
    fn identity_cancels_to_zero() {
        let mut c = BasedComplex::new(Z);
        let a = c.add_generator(0, 0, arc(1, 2)).unwrap();
        let b = c.add_generator(1, 0, arc(1, 2)).unwrap();
        c.add_entry(a, b, &[(0, BigInt::one())]);
        c.gaussian_eliminate(a, b).unwrap();
        assert_eq!(c.generator_count(), 0);
    }

    #[test]
    fn cancellation_leaves_other_summand() {
        let mut c = BasedComplex::new(Z);
        let a = c.add_generator(0, 0, arc(1, 2)).unwrap();
        let b1 = c.add_generator(1, 0, arc(1, 2)).unwrap();
        let b2 = c.add_generator(1, 2, arc(1, 2)).unwrap();
        c.add_entry(a, b1, &[(0, BigInt::one())]);
        c.gaussian_eliminate(a, b1).unwrap();
        assert_eq!(c.alive_generators().collect::<Vec<_>>(), vec![b2]);
        assert!(c.entries(b2).next().is_none());
    }

    #[test]
    fn non_invertible_pivot_is_rejected() {
        let mut c = BasedComplex::new(Z);
        let a = c.add_generator(0, 0, arc(1, 2)).unwrap();
        let b = c.add_generator(1, 0, arc(1, 2)).unwrap();
        c.add_entry(a, b, &[(0, BigInt::from(2))]);
        assert!(c.gaussian_eliminate(a, b).is_err());
        assert!(c.morse_reduce(&[(a, b)]).is_err());
    }

    #[test]
    fn elimination_correction_on_integer_complex() {
        // closed objects: a 3-term integer complex, compare homology before and after
        let mut c = BasedComplex::new(Z);
        let e = PlanarMatching::empty();
        let x = c.add_generator(0, 0, e.clone()).unwrap();
        let a = c.add_generator(0, 0, e.clone()).unwrap();
        let y = c.add_generator(1, 0, e.clone()).unwrap();
        let b = c.add_generator(1, 0, e.clone()).unwrap();
        c.add_entry(x, y, &[(0, BigInt::one())]);
        c.add_entry(a, y, &[(0, BigInt::from(3))]);
        c.add_entry(x, b, &[(0, BigInt::from(5))]);
        c.add_entry(a, b, &[(0, BigInt::from(4))]);
        let before = c.to_free_complex(0, 0).unwrap().homology();
        c.gaussian_eliminate(x, y).unwrap();
        assert_eq!(c.entry(a, b).unwrap(), &vec![(0, BigInt::from(4 - 15))]);
        assert_eq!(c.to_free_complex(0, 0).unwrap().homology(), before);
    }

    #[test]
    fn two_positive_crossings_square() {
        let d = braid_closure(&BraidWord::new(2, vec![1, 1]).unwrap());
        let c = BasedComplex::empty(Z, 0);
        let (c, p) = c.tensor_crossing(&d.crossings[0], None).unwrap();
        assert!(p.is_empty());
        let (mut c, _) = c.tensor_crossing(&d.crossings[1], None).unwrap();
        assert!(c.is_complex().unwrap());
        c.check_degrees().unwrap();
        // closed up: 2 + 1 + 1 + 2 delooped summands in degrees 0, 1, 1, 2
        let r = c.rank_by_degree();
        assert_eq!(r, BTreeMap::from([(0, 4), (1, 4), (2, 4)]));
    }

    #[test]
    fn morse_matching_validation() {
        let mut c = BasedComplex::new(Z);
        let e = PlanarMatching::empty();
        let x = c.add_generator(0, 0, e.clone()).unwrap();
        let y = c.add_generator(1, 0, e.clone()).unwrap();
        c.add_entry(x, y, &[(0, BigInt::one())]);
        assert!(c.validate_morse_matching(&[(x, y), (x, y)]).is_err());
        c.validate_morse_matching(&[]).unwrap();
        c.morse_reduce(&[(x, y)]).unwrap();
        assert_eq!(c.generator_count(), 0);
    }

    #[test]
    fn truncation_bounds() {
        let d = braid_closure(&BraidWord::new(2, vec![1, 1, 1]).unwrap());
        let mut c = BasedComplex::empty(Z, 0);
        for x in &d.crossings {
            c = c.tensor_crossing(x, None).unwrap().0;
        }
        let full = c.clone();
        c.truncate(10);
        assert_eq!(c.generator_count(), full.generator_count());
        c.truncate(-1);
        assert_eq!(c.generator_count(), 0);
    }

    #[test]
    fn d_squared_after_random_scans() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w: Vec<i32> = (0..5).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2)).collect();
            let d = braid_closure(&BraidWord::new(3, w).unwrap());
            let mut c = BasedComplex::empty(Z, d.free_loops);
            for x in d.crossings.iter().take(3) {
                let (next, pivots) = c.tensor_crossing(x, None).unwrap();
                c = next;
                assert!(c.is_complex().unwrap());
                c.check_degrees().unwrap();
                c.morse_reduce(&pivots).unwrap();
                assert!(c.is_complex().unwrap());
            }
        }
    }
}
