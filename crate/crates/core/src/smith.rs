//! Smith normal form and homology of based complexes of free modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

use crate::homology::HomologyTable;
use crate::ring::{factor, Coefficients};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    /// Nonzero invariant factors d_1 | d_2 | ..., all positive.
    pub invariants: Vec<BigInt>,
    pub rank: usize,
}

impl Snf {
    /// Prime-power decomposition of the torsion part of the cokernel.
    pub fn elementary_divisors(&self) -> BTreeMap<(u64, u32), u64> {
        let mut out = BTreeMap::new();
        for d in &self.invariants {
            if !d.is_one() {
                for (p, e) in factor(d) {
                    *out.entry((p, e)).or_default() += 1;
                }
            }
        }
        out
    }
}

/// Smith normal form of a dense integer matrix given as rows.
///
/// Pivots are chosen by minimal absolute value, ties broken by the fewest
/// nonzeros in the pivot row and column.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Snf {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut diag = vec![];
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_pivot(&a, t, t..rows, t..cols) else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&p);
                if !q.is_zero() {
                    let (top, rest) = a.split_at_mut(r);
                    let pivot_row = &top[t];
                    for (x, y) in rest[0][t..].iter_mut().zip(&pivot_row[t..]) {
                        *x -= &q * y;
                    }
                }
                dirty |= !a[r][t].is_zero();
            }
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&p);
                if !q.is_zero() {
                    for row in a[t..].iter_mut() {
                        let y = row[t].clone();
                        row[c] -= &q * y;
                    }
                }
                dirty |= !a[t][c].is_zero();
            }
            if !dirty {
                break;
            }
            // a remainder smaller than the pivot survived; move it to (t, t)
            let col_iter = (t..rows).map(|r| (r, t));
            let row_iter = (t..cols).map(|c| (t, c));
            let (r, c) = col_iter
                .chain(row_iter)
                .filter(|&(r, c)| !a[r][c].is_zero())
                .min_by_key(|&(r, c)| a[r][c].abs())
                .unwrap();
            a.swap(t, r);
            for row in a.iter_mut() {
                row.swap(t, c);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Snf { rank: diag.len(), invariants: invariant_factors(&diag) }
}

fn min_pivot(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize, usize)> = None;
    for r in rows.clone() {
        for c in cols.clone() {
            if a[r][c].is_zero() {
                continue;
            }
            let v = a[r][c].abs();
            if best.as_ref().is_some_and(|b| v > b.0) {
                continue;
            }
            let fill = rows.clone().filter(|&x| !a[x][c].is_zero()).count()
                + cols.clone().filter(|&y| !a[r][y].is_zero()).count();
            let better = match &best {
                None => true,
                Some(b) => v < b.0 || fill < b.3,
            };
            if better {
                best = Some((v, r, c, fill));
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

/// Rebuild the divisibility chain from an arbitrary diagonal form.
fn invariant_factors(diag: &[BigInt]) -> Vec<BigInt> {
    let n = diag.len();
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for d in diag {
        if !d.is_one() {
            for (p, e) in factor(d) {
                by_prime.entry(p).or_default().push(e);
            }
        }
    }
    let mut inv = vec![BigInt::one(); n];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (k, e) in es.into_iter().enumerate() {
            inv[n - 1 - k] *= BigInt::from(p).pow(e);
        }
    }
    inv
}

/// Rank of an integer matrix modulo a prime.
pub fn rank_mod_p(m: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|x| u64::try_from(x.mod_floor(&pb)).unwrap()).collect())
        .collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, r);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..cols {
                    a[r][k] = (a[r][k] + p - f * a[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// A cochain complex of free modules with a distinguished basis, bigraded
/// by (homological degree, q-degree). The differential raises the
/// homological degree by one and preserves the q-degree.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    coefficients: Coefficients,
    grading: Vec<(i32, i32)>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, BigInt>>,
    inc: Vec<BTreeSet<usize>>,
}

impl FreeComplex {
    pub fn new(coefficients: Coefficients) -> Self {
        FreeComplex { coefficients, grading: vec![], alive: vec![], out: vec![], inc: vec![] }
    }

    pub fn add_generator(&mut self, deg: i32, q: i32) -> usize {
        self.grading.push((deg, q));
        self.alive.push(true);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeSet::new());
        self.grading.len() - 1
    }

    pub fn generator_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    /// Add `c` to the matrix entry from `src` to `tgt`.
    pub fn add_entry(&mut self, src: usize, tgt: usize, c: BigInt) {
        debug_assert_eq!(self.grading[src].0 + 1, self.grading[tgt].0);
        debug_assert_eq!(self.grading[src].1, self.grading[tgt].1);
        let c = self.coefficients.reduce(c);
        if c.is_zero() {
            return;
        }
        let e = self.out[src].entry(tgt).or_insert_with(BigInt::zero);
        *e += c;
        *e = self.coefficients.reduce(std::mem::take(e));
        if e.is_zero() {
            self.out[src].remove(&tgt);
            self.inc[tgt].remove(&src);
        } else {
            self.inc[tgt].insert(src);
        }
    }

    /// d∘d on every generator; returns false on the first nonzero composite.
    pub fn is_complex(&self) -> bool {
        for x in 0..self.grading.len() {
            if !self.alive[x] {
                continue;
            }
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (y, c) in &self.out[x] {
                for (z, d) in &self.out[*y] {
                    *acc.entry(*z).or_insert_with(BigInt::zero) += c * d;
                }
            }
            if acc.values().any(|v| !self.coefficients.reduce(v.clone()).is_zero()) {
                return false;
            }
        }
        true
    }

    fn eliminate(&mut self, x: usize, y: usize) {
        let u = self.out[x][&y].clone();
        let uinv = self.coefficients.inverse(&u);
        let sources: Vec<(usize, BigInt)> = self.inc[y]
            .iter()
            .filter(|&&a| a != x)
            .map(|&a| (a, self.out[a][&y].clone()))
            .collect();
        let targets: Vec<(usize, BigInt)> =
            self.out[x].iter().filter(|(b, _)| **b != y).map(|(b, c)| (*b, c.clone())).collect();
        for (a, delta) in &sources {
            let f = self.coefficients.reduce(-(delta * &uinv));
            for (b, gamma) in &targets {
                self.add_entry(*a, *b, gamma * &f);
            }
        }
        self.remove(x);
        self.remove(y);
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

    /// Cancel unit entries until none remain.
    pub fn reduce(&mut self) {
        loop {
            let mut any = false;
            for x in 0..self.grading.len() {
                while self.alive[x] {
                    let best = self
                        .out[x]
                        .iter()
                        .filter(|(_, c)| self.coefficients.is_unit(c))
                        .min_by_key(|(y, _)| self.inc[**y].len())
                        .map(|(y, _)| *y);
                    match best {
                        Some(y) => {
                            self.eliminate(x, y);
                            any = true;
                        }
                        None => break,
                    }
                }
            }
            if !any {
                break;
            }
        }
    }

    /// Homology of the complex, bigraded.
    pub fn homology(mut self) -> HomologyTable {
        self.reduce();
        let mut table = HomologyTable::new(self.coefficients);
        let mut blocks: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
        for x in 0..self.grading.len() {
            if self.alive[x] {
                let (d, q) = self.grading[x];
                blocks.entry((q, d)).or_default().push(x);
            }
        }
        // rank and torsion of the outgoing differential of each block
        let mut out_rank: BTreeMap<(i32, i32), usize> = BTreeMap::new();
        let mut torsion_into: BTreeMap<(i32, i32), BTreeMap<(u64, u32), u64>> = BTreeMap::new();
        for (&(q, d), src) in &blocks {
            let Some(tgt) = blocks.get(&(q, d + 1)) else { continue };
            if src.iter().all(|x| self.out[*x].is_empty()) {
                continue;
            }
            let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(i, y)| (*y, i)).collect();
            let mut m = vec![vec![BigInt::zero(); src.len()]; tgt.len()];
            for (j, x) in src.iter().enumerate() {
                for (y, c) in &self.out[*x] {
                    m[pos[y]][j] = c.clone();
                }
            }
            match self.coefficients {
                Coefficients::Integers => {
                    let snf = smith_normal_form(&m);
                    out_rank.insert((q, d), snf.rank);
                    torsion_into.insert((q, d + 1), snf.elementary_divisors());
                }
                Coefficients::Prime(p) => {
                    out_rank.insert((q, d), rank_mod_p(&m, p as u64));
                }
            }
        }
        for (&(q, d), gens) in &blocks {
            let r_out = out_rank.get(&(q, d)).copied().unwrap_or(0);
            let r_in = out_rank.get(&(q, d - 1)).copied().unwrap_or(0);
            table.add_free(d, q, (gens.len() - r_out - r_in) as u64);
            if let Some(t) = torsion_into.get(&(q, d)) {
                for (&(p, e), &n) in t {
                    table.add_torsion(d, q, p, e, n);
                }
            }
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect()
    }

    #[test]
    fn snf_diagonal() {
        let s = smith_normal_form(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariants, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn snf_zero() {
        let s = smith_normal_form(&mat(&[&[0, 0], &[0, 0]]));
        assert_eq!(s.rank, 0);
        assert!(s.invariants.is_empty());
    }

    #[test]
    fn snf_known() {
        // classic example with invariants 2, 6, 12
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariants, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn snf_matches_modular_rank_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let m: Vec<Vec<BigInt>> = (0..20)
                .map(|_| {
                    (0..20)
                        .map(|_| {
                            if rng.gen_bool(0.15) {
                                BigInt::from(rng.gen_range(-4i64..=4))
                            } else {
                                BigInt::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            let s = smith_normal_form(&m);
            for p in [2u64, 3, 5, 7, 101] {
                let expect = s
                    .invariants
                    .iter()
                    .filter(|d| !(*d % BigInt::from(p)).is_zero())
                    .count();
                assert_eq!(rank_mod_p(&m, p), expect, "p = {p}");
            }
            let product: BigInt = s.invariants.iter().product();
            assert!(s.invariants.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
            assert!(product.is_positive() || s.rank == 0);
        }
    }

    #[test]
    fn free_complex_circle() {
        // Z --2--> Z in degrees 0, 1
        let mut c = FreeComplex::new(Coefficients::Integers);
        let a = c.add_generator(0, 0);
        let b = c.add_generator(1, 0);
        c.add_entry(a, b, BigInt::from(2));
        let h = c.clone().homology();
        assert_eq!(h.get(1, 0).torsion.get(&(2, 1)), Some(&1u32.into()));
        assert!(h.total_rank().is_zero());
        let mut c2 = FreeComplex::new(Coefficients::Prime(2));
        let a = c2.add_generator(0, 0);
        let b = c2.add_generator(1, 0);
        c2.add_entry(a, b, BigInt::from(2));
        assert_eq!(c2.homology().total_rank(), 2u32.into());
    }

    /// Random unimodular matrix and its inverse, as products of elementary moves.
    fn unimodular(n: usize, rng: &mut impl rand::Rng) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let id = |n: usize| (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect::<Vec<Vec<i64>>>();
        let (mut p, mut inv) = (id(n), id(n));
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let t = rng.gen_range(-2..=2);
            // p <- E p adds t * row j to row i; inv <- inv E^{-1} subtracts t * column i from column j
            for k in 0..n {
                p[i][k] += t * p[j][k];
                inv[k][j] -= t * inv[k][i];
            }
        }
        (p, inv)
    }

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        (0..a.len())
            .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn gaussian_elimination_preserves_homology() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 4;
        for _ in 0..30 {
            // diagonal model: d0 sends a_0 to m0 * b_0, d1 sends b_1 to m1 * c_1
            let (m0, m1) = (rng.gen_range(1..=4i64), rng.gen_range(1..=4i64));
            let mut d0 = vec![vec![0i64; n]; n];
            let mut d1 = vec![vec![0i64; n]; n];
            d0[0][0] = m0;
            d1[1][1] = m1;
            let (_, q0) = unimodular(n, &mut rng);
            let (p1, q1) = unimodular(n, &mut rng);
            let (p2, _) = unimodular(n, &mut rng);
            let d0 = matmul(&matmul(&p1, &d0), &q0);
            let d1 = matmul(&matmul(&p2, &d1), &q1);
            let mut c = FreeComplex::new(Coefficients::Integers);
            let g: Vec<Vec<usize>> = (0..3).map(|d| (0..n).map(|_| c.add_generator(d, 0)).collect()).collect();
            for (d, m) in [(0usize, &d0), (1, &d1)] {
                for (r, row) in m.iter().enumerate() {
                    for (s, v) in row.iter().enumerate() {
                        c.add_entry(g[d][s], g[d + 1][r], BigInt::from(*v));
                    }
                }
            }
            assert!(c.is_complex());
            let mut expected = HomologyTable::new(Coefficients::Integers);
            expected.add_free(0, 0, 3);
            expected.add_free(1, 0, 2);
            expected.add_free(2, 0, 3);
            for (deg, m) in [(1, m0), (2, m1)] {
                for (p, e) in crate::ring::factor(&BigInt::from(m)) {
                    expected.add_torsion(deg, 0, p, e, 1);
                }
            }
            assert_eq!(dense_homology(&c), expected);
            assert_eq!(c.homology(), expected);
        }
    }

    fn dense_homology(c: &FreeComplex) -> HomologyTable {
        let mut t = HomologyTable::new(Coefficients::Integers);
        let idx = |d: i32| -> Vec<usize> { (0..c.grading.len()).filter(|x| c.grading[*x].0 == d).collect() };
        let matrix = |s: &[usize], g: &[usize]| -> Vec<Vec<BigInt>> {
            g.iter()
                .map(|y| s.iter().map(|x| c.out[*x].get(y).cloned().unwrap_or_default()).collect())
                .collect()
        };
        let degs = [0, 1, 2];
        let mut ranks = BTreeMap::new();
        let mut tors = BTreeMap::new();
        for d in degs {
            let (s, g) = (idx(d), idx(d + 1));
            if g.is_empty() || s.is_empty() {
                continue;
            }
            let snf = smith_normal_form(&matrix(&s, &g));
            ranks.insert(d, snf.rank);
            tors.insert(d + 1, snf.elementary_divisors());
        }
        for d in degs {
            let n = idx(d).len() - ranks.get(&d).unwrap_or(&0) - ranks.get(&(d - 1)).unwrap_or(&0);
            t.add_free(d, 0, n as u64);
            if let Some(m) = tors.get(&d) {
                for (&(p, e), &n) in m {
                    t.add_torsion(d, 0, p, e, n);
                }
            }
        }
        t
    }
}
