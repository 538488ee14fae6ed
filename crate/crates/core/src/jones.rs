//! Jones polynomial of closed braids, determinants and the homology of
//! quasi-alternating links.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::diagram::{BraidWord, LinkDiagram, UnionFind};
use crate::error::{KhError, Result};
use crate::homology::HomologyTable;
use crate::ring::Coefficients;

/// Dense Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    /// Exponent of `coeffs[0]`.
    pub min_exp: i32,
    pub coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        LaurentPoly { min_exp: e, coeffs: vec![c.into()] }.normalized()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// q + q^{-1}.
    pub fn delta() -> Self {
        Self::monomial(1, -1) + Self::monomial(1, 1)
    }

    pub fn from_terms<T: Clone + Into<BigInt>>(terms: &BTreeMap<i32, T>) -> Self {
        terms.iter().fold(Self::zero(), |acc, (&e, c)| acc + Self::monomial(c.clone(), e))
    }

    pub fn terms(&self) -> BTreeMap<i32, BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.min_exp + k as i32, c.clone()))
            .collect()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        let k = e as i64 - self.min_exp as i64;
        if k < 0 || k >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exp(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.min_exp + self.coeffs.len() as i32 - 1)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn shift(&self, e: i32) -> Self {
        LaurentPoly { min_exp: self.min_exp + e, coeffs: self.coeffs.clone() }
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            return LaurentPoly::zero();
        }
        self.coeffs.drain(..lead);
        self.min_exp += lead as i32;
        self
    }

    /// Exact quotient by q + q^{-1}.
    pub fn div_delta(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // q^{-1} (1 + q^2) divides p; divide q p by 1 + q^2 from the top
        let mut rest = self.coeffs.clone();
        let n = rest.len();
        if n < 3 {
            return Err(KhError::Invariant(format!("{self} is not divisible by q + q^-1")));
        }
        let mut quot = vec![BigInt::zero(); n - 2];
        for k in (0..n - 2).rev() {
            let c = rest[k + 2].clone();
            rest[k] -= &c;
            quot[k] = c;
        }
        if !rest[0].is_zero() || !rest[1].is_zero() {
            return Err(KhError::Invariant(format!("{self} is not divisible by q + q^-1")));
        }
        Ok(LaurentPoly { min_exp: self.min_exp + 1, coeffs: quot }.normalized())
    }

    /// Value at q = i as a Gaussian integer (re, im).
    pub fn eval_i(&self) -> (BigInt, BigInt) {
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        (re, im)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let lo = self.min_exp.min(o.min_exp);
        let hi = self.max_exp().unwrap().max(o.max_exp().unwrap());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for p in [&self, &o] {
            for (k, c) in p.coeffs.iter().enumerate() {
                coeffs[(p.min_exp - lo) as usize + k] += c;
            }
        }
        LaurentPoly { min_exp: lo, coeffs }.normalized()
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        self + (-o)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                coeffs[a + b] += x * y;
            }
        }
        LaurentPoly { min_exp: self.min_exp + o.min_exp, coeffs }.normalized()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (a.is_one(), e) {
                (_, 0) => write!(f, "{a}")?,
                (true, 1) => write!(f, "q")?,
                (true, _) => write!(f, "q^{e}")?,
                (false, 1) => write!(f, "{a}q")?,
                (false, _) => write!(f, "{a}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// A Temperley-Lieb diagram on `n` strands: partner of every endpoint,
/// bottom points `0..n`, top points `n..2n`.
type TlDiagram = Vec<u8>;

fn tl_identity(n: usize) -> TlDiagram {
    (0..2 * n).map(|p| ((p + n) % (2 * n)) as u8).collect()
}

/// Stack the generator `E_i` (joining positions i-1 and i) on top of `d`.
/// Returns the new diagram and the number of closed loops.
fn tl_times_e(d: &TlDiagram, i: usize) -> (TlDiagram, usize) {
    let n = d.len() / 2;
    // nodes: bottom 0..n, middle n..2n, top 2n..3n; middle nodes have two arcs
    let mut adj: Vec<Vec<usize>> = vec![vec![]; 3 * n];
    for p in 0..2 * n {
        let q = d[p] as usize;
        if p < q {
            adj[p].push(q);
            adj[q].push(p);
        }
    }
    let mut join = |a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for k in 0..n {
        if k != i - 1 && k != i {
            join(n + k, 2 * n + k);
        }
    }
    join(n + i - 1, n + i);
    join(2 * n + i - 1, 2 * n + i);
    let mut seen = vec![false; 3 * n];
    let mut out = vec![0u8; 2 * n];
    let end_label = |v: usize| if v < n { v } else { v - n };
    for start in (0..n).chain(2 * n..3 * n) {
        if seen[start] {
            continue;
        }
        let (mut prev, mut cur) = (start, adj[start][0]);
        seen[start] = true;
        while (n..2 * n).contains(&cur) {
            seen[cur] = true;
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        seen[cur] = true;
        out[end_label(start)] = end_label(cur) as u8;
        out[end_label(cur)] = end_label(start) as u8;
    }
    let mut loops = 0;
    for m in n..2 * n {
        if seen[m] {
            continue;
        }
        loops += 1;
        let mut stack = vec![m];
        while let Some(v) = stack.pop() {
            if !seen[v] {
                seen[v] = true;
                stack.extend(adj[v].iter().copied());
            }
        }
    }
    (out, loops)
}

/// Loops formed by closing a TL diagram.
fn tl_closure_loops(d: &TlDiagram) -> usize {
    let n = d.len() / 2;
    let mut uf = UnionFind::new(n);
    for (p, &q) in d.iter().enumerate() {
        uf.union(p % n, q as usize % n);
    }
    (0..n).filter(|&k| uf.find(k) == k).count()
}

fn delta_pow(k: usize) -> LaurentPoly {
    let d = LaurentPoly::delta();
    (0..k).fold(LaurentPoly::one(), |acc, _| &acc * &d)
}

/// Unnormalized Jones polynomial of the closure of `b`, with
/// J(unknot) = 1 and J(right trefoil) = q^2 + q^6 - q^8.
pub fn jones_closed_braid(b: &BraidWord) -> Result<LaurentPoly> {
    let n = b.strands;
    let mut elem: HashMap<TlDiagram, LaurentPoly> = HashMap::from([(tl_identity(n), LaurentPoly::one())]);
    let mq = LaurentPoly::monomial(-1, 1);
    let dpow: Vec<LaurentPoly> = (0..=n).map(delta_pow).collect();
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize;
        // sigma = 1 - q E, sigma^{-1} = E - q
        let (c_id, c_e) = if l > 0 { (LaurentPoly::one(), mq.clone()) } else { (mq.clone(), LaurentPoly::one()) };
        let mut next: HashMap<TlDiagram, LaurentPoly> = HashMap::new();
        for (d, p) in elem {
            let (de, loops) = tl_times_e(&d, i);
            let a = &p * &c_id;
            let e = &(&p * &c_e) * &dpow[loops];
            for (k, v) in [(d, a), (de, e)] {
                let slot = next.entry(k).or_default();
                *slot = std::mem::take(slot) + v;
            }
        }
        next.retain(|_, v| !v.is_zero());
        elem = next;
    }
    let mut trace = LaurentPoly::zero();
    for (d, p) in &elem {
        trace = trace + &dpow[tl_closure_loops(d)] * p;
    }
    let (np, nm) = (b.n_plus() as i32, b.n_minus() as i32);
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    let normalized = &trace * &LaurentPoly::monomial(sign, np - 2 * nm);
    normalized.div_delta()
}

/// |J(i)|, the determinant of the link.
pub fn determinant(j: &LaurentPoly) -> BigInt {
    let (re, im) = j.eval_i();
    // J(i) is real or purely imaginary
    if re.is_zero() {
        im.abs()
    } else if im.is_zero() {
        re.abs()
    } else {
        let n = &re * &re + &im * &im;
        n.sqrt()
    }
}

/// Determinant of the closure of (sigma_1^{-1} sigma_2)^n via the Lucas
/// recurrence: a_0 = 2, a_1 = 3, a_{n+1} = 3 a_n - a_{n-1}, det = a_n - 2.
pub fn weaving_determinant(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::from(2), BigInt::from(3));
    for _ in 0..n {
        let c = 3 * &b - &a;
        a = b;
        b = c;
    }
    a - 2
}

/// Check the graded Euler characteristic against (q + q^{-1}) J.
pub fn euler_matches_jones(t: &HomologyTable, j: &LaurentPoly) -> bool {
    LaurentPoly::from_terms(&t.euler_characteristic()) == &LaurentPoly::delta() * j
}

/// Jones polynomial recovered from a homology table.
pub fn jones_from_homology(t: &HomologyTable) -> Result<LaurentPoly> {
    LaurentPoly::from_terms(&t.euler_characteristic()).div_delta()
}

/// Homological degrees of the Lee generators, two per entry: for each
/// sublink `E` avoiding component 0 the degree is `2 lk(E, L \ E)`.
pub fn lee_degrees(l: &LinkDiagram) -> BTreeMap<i32, u64> {
    let (n, lk) = l.linking_data();
    let mut out = BTreeMap::new();
    let others = n.saturating_sub(1);
    for mask in 0u64..1 << others {
        let in_e = |c: usize| c > 0 && mask >> (c - 1) & 1 == 1;
        let mut s = 0i64;
        for a in 0..n {
            for b in 0..n {
                if in_e(a) && !in_e(b) {
                    s += lk[a][b];
                }
            }
        }
        *out.entry(2 * s as i32).or_insert(0) += 1;
    }
    out
}

/// Circles in the all-0 resolution.
fn zero_state_circles(l: &LinkDiagram) -> usize {
    let mut edges: Vec<u32> = l.crossings.iter().flat_map(|c| c.edges).collect();
    edges.sort_unstable();
    edges.dedup();
    let idx: HashMap<u32, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut uf = UnionFind::new(edges.len());
    for c in &l.crossings {
        uf.union(idx[&c.edges[0]], idx[&c.edges[1]]);
        uf.union(idx[&c.edges[2]], idx[&c.edges[3]]);
    }
    (0..edges.len()).filter(|&k| uf.find(k) == k).count() + l.free_loops
}

/// The diagonal offset `s = -signature` of a reduced alternating diagram,
/// read off its all-0 resolution: `s = n_+ - circles + 1`.
pub fn alternating_diagonal(l: &LinkDiagram) -> i32 {
    l.n_plus() as i32 - zero_state_circles(l) as i32 + 1
}

/// Integral Khovanov homology of a quasi-alternating link from its Jones
/// polynomial, diagonal offset `s` and Lee degrees. The homology sits on
/// `j = 2i + s +- 1` as knight-move pairs plus Lee pairs.
pub fn quasi_alternating_homology(
    j: &LaurentPoly,
    s: i32,
    lee: &BTreeMap<i32, u64>,
    coeff: Coefficients,
) -> Result<HomologyTable> {
    let terms = j.terms();
    if terms.is_empty() {
        return Err(KhError::Invariant("zero Jones polynomial".into()));
    }
    let mut bt: BTreeMap<i32, BigInt> = BTreeMap::new();
    for (e, c) in terms {
        if (e - s).rem_euclid(2) != 0 {
            return Err(KhError::Invariant(format!("Jones exponent {e} off the diagonal s = {s}")));
        }
        let i = (e - s) / 2;
        let v = if i.rem_euclid(2) == 0 { c } else { -c };
        if v.is_negative() {
            return Err(KhError::Invariant(format!("Jones coefficient at q^{e} has the wrong sign for a thin link")));
        }
        bt.insert(i, v);
    }
    let lo = bt.keys().chain(lee.keys()).min().copied().unwrap();
    let hi = bt.keys().chain(lee.keys()).max().copied().unwrap();
    let mut out = HomologyTable::new(Coefficients::Integers);
    let unsigned = |x: &BigInt| x.to_biguint().expect("checked nonnegative");
    // x_i: knight-move pairs from (i, s + 2i - 1) to (i + 1, s + 2i + 3)
    let mut prev_x = BigInt::zero();
    for i in lo..=hi {
        let blt = BigInt::from(lee.get(&i).copied().unwrap_or(0));
        let bar = bt.get(&i).cloned().unwrap_or_default() - &blt;
        let x = bar - &prev_x;
        if x.is_negative() {
            return Err(KhError::Invariant(format!("negative knight-move count in degree {i}")));
        }
        out.add_free_big(i, s + 2 * i - 1, unsigned(&(&x + &blt)));
        out.add_free_big(i, s + 2 * i + 1, unsigned(&(&prev_x + &blt)));
        out.add_torsion_big(i, s + 2 * i - 1, 2, 1, unsigned(&prev_x));
        prev_x = x;
    }
    if !prev_x.is_zero() {
        return Err(KhError::Invariant("knight-move pairs run past the top degree".into()));
    }
    match coeff {
        Coefficients::Integers => Ok(out),
        Coefficients::Prime(p) => out.reduce_mod(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::kh_cube;
    use crate::diagram::braid_closure;

    fn j(strands: usize, w: &[i32]) -> LaurentPoly {
        jones_closed_braid(&BraidWord::new(strands, w.to_vec()).unwrap()).unwrap()
    }

    fn poly(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(&terms.iter().copied().collect())
    }

    #[test]
    fn polynomial_arithmetic() {
        let p = poly(&[(-1, 2), (3, -1)]);
        let d = LaurentPoly::delta();
        assert_eq!((&p * &d).div_delta().unwrap(), p);
        assert!(poly(&[(0, 1)]).div_delta().is_err());
        assert_eq!((p.clone() - p).to_string(), "0");
        assert_eq!(poly(&[(-2, 1), (0, -3), (1, 1)]).to_string(), "q^-2 - 3 + q");
    }

    #[test]
    fn basic_jones_values() {
        assert_eq!(j(2, &[1]), LaurentPoly::one());
        assert_eq!(j(3, &[-1, 2]), LaurentPoly::one());
        assert_eq!(j(2, &[1, 1]), poly(&[(1, 1), (5, 1)]));
        assert_eq!(j(2, &[1, 1, 1]), poly(&[(2, 1), (6, 1), (8, -1)]));
        assert_eq!(j(3, &[-1, 2, -1, 2]), poly(&[(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]));
        // split union with an unknot multiplies by delta
        assert_eq!(j(3, &[1, 1, 1]), &j(2, &[1, 1, 1]) * &LaurentPoly::delta());
    }

    #[test]
    fn mirror_inverts_q() {
        let a = j(3, &[1, 1, -2, 1, 2, 2]);
        let b = j(3, &[-1, -1, 2, -1, -2, -2]);
        let flipped: BTreeMap<i32, BigInt> = a.terms().into_iter().map(|(e, c)| (-e, c)).collect();
        assert_eq!(b, LaurentPoly::from_terms(&flipped));
    }

    #[test]
    fn euler_characteristic_agrees_with_cube() {
        for w in [&[1, 2, -1, 2, 2][..], &[1, -2, 1, -2, 1, 1], &[2, 2, 1, 1, 1]] {
            let b = BraidWord::new(3, w.to_vec()).unwrap();
            let t = kh_cube(&braid_closure(&b), Coefficients::Integers).unwrap();
            assert!(euler_matches_jones(&t, &jones_closed_braid(&b).unwrap()), "{w:?}");
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&j(2, &[1, 1, 1])), BigInt::from(3));
        assert_eq!(determinant(&j(3, &[-1, 2, -1, 2])), BigInt::from(5));
        assert_eq!(determinant(&j(2, &[1, 1])), BigInt::from(2));
        for n in 1..=8 {
            assert_eq!(determinant(&jones_closed_braid(&BraidWord::weaving(n)).unwrap()), weaving_determinant(n));
        }
        assert_eq!(weaving_determinant(20), BigInt::from(228826125u64));
    }

    #[test]
    fn lee_degrees_of_links() {
        let hopf = braid_closure(&BraidWord::new(2, vec![1, 1]).unwrap());
        assert_eq!(lee_degrees(&hopf), BTreeMap::from([(0, 1), (2, 1)]));
        let knot = braid_closure(&BraidWord::new(2, vec![1, 1, 1]).unwrap());
        assert_eq!(lee_degrees(&knot), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn thin_reconstruction_matches_cube() {
        let words: [(usize, &[i32]); 6] = [
            (2, &[1, 1, 1]),
            (2, &[1, 1]),
            (2, &[-1, -1, -1, -1]),
            (3, &[-1, 2, -1, 2]),
            (3, &[-1, -1, 2, -1, 2, 2]),
            (3, &[-1, 2, 2, -1, -1, 2]),
        ];
        for (n, w) in words {
            let b = BraidWord::new(n, w.to_vec()).unwrap();
            let d = braid_closure(&b);
            let t = quasi_alternating_homology(
                &jones_closed_braid(&b).unwrap(),
                alternating_diagonal(&d),
                &lee_degrees(&d),
                Coefficients::Integers,
            )
            .unwrap();
            assert_eq!(t, kh_cube(&d, Coefficients::Integers).unwrap(), "{w:?}");
        }
    }
}
