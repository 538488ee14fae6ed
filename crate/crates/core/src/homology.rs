use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{KhError, Result};
use crate::ring::Coefficients;

/// A finitely generated abelian group: free rank plus a multiset of
/// prime-power cyclic summands, keyed by (prime, exponent).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Group {
    pub rank: BigUint,
    pub torsion: BTreeMap<(u64, u32), BigUint>,
}

impl Group {
    pub fn free(rank: u64) -> Self {
        Group { rank: rank.into(), torsion: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero() && self.torsion.is_empty()
    }

    pub fn add(&mut self, other: &Group) {
        self.rank += &other.rank;
        for (k, n) in &other.torsion {
            *self.torsion.entry(*k).or_default() += n;
        }
    }

    pub fn add_torsion(&mut self, prime: u64, exponent: u32, count: impl Into<BigUint>) {
        let count = count.into();
        if !count.is_zero() {
            *self.torsion.entry((prime, exponent)).or_default() += count;
        }
    }

    /// Number of cyclic summands of order divisible by `p`.
    pub fn p_torsion_count(&self, p: u64) -> BigUint {
        self.torsion.iter().filter(|((q, _), _)| *q == p).map(|(_, n)| n).sum()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if self.rank.is_one() {
            parts.push("Z".to_string());
        } else if !self.rank.is_zero() {
            parts.push(format!("Z^{}", self.rank));
        }
        for ((p, e), n) in &self.torsion {
            let base = if *e == 1 { format!("Z/{p}") } else { format!("Z/{p}^{e}") };
            parts.push(if n.is_one() { base } else { format!("({base})^{n}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Bigraded homology Kh^{i,j}. Only nonzero groups are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub coefficients: Coefficients,
    pub groups: BTreeMap<(i32, i32), Group>,
}

impl HomologyTable {
    pub fn new(coefficients: Coefficients) -> Self {
        HomologyTable { coefficients, groups: BTreeMap::new() }
    }

    pub fn unknot(coefficients: Coefficients) -> Self {
        let mut t = Self::new(coefficients);
        t.add_free(0, -1, 1);
        t.add_free(0, 1, 1);
        t
    }

    pub fn get(&self, i: i32, j: i32) -> Group {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn rank(&self, i: i32, j: i32) -> BigUint {
        self.groups.get(&(i, j)).map_or_else(BigUint::zero, |g| g.rank.clone())
    }

    pub fn add_free(&mut self, i: i32, j: i32, n: u64) {
        self.add_free_big(i, j, n.into());
    }

    pub fn add_free_big(&mut self, i: i32, j: i32, n: BigUint) {
        if !n.is_zero() {
            self.groups.entry((i, j)).or_default().rank += n;
        }
    }

    pub fn add_torsion(&mut self, i: i32, j: i32, prime: u64, exponent: u32, count: u64) {
        self.add_torsion_big(i, j, prime, exponent, count.into());
    }

    pub fn add_torsion_big(&mut self, i: i32, j: i32, prime: u64, exponent: u32, count: BigUint) {
        if !count.is_zero() {
            self.groups.entry((i, j)).or_default().add_torsion(prime, exponent, count);
        }
    }

    pub fn add_group(&mut self, i: i32, j: i32, g: &Group) {
        if !g.is_zero() {
            self.groups.entry((i, j)).or_default().add(g);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    /// Remove one free summand at (i, j).
    pub fn remove_free(&mut self, i: i32, j: i32) -> Result<()> {
        let g = self.groups.get_mut(&(i, j)).filter(|g| !g.rank.is_zero()).ok_or_else(|| {
            KhError::Invariant(format!("no free summand to remove at ({i},{j})"))
        })?;
        g.rank -= 1u32;
        if g.is_zero() {
            self.groups.remove(&(i, j));
        }
        Ok(())
    }

    pub fn shifted(&self, di: i32, dj: i32) -> Self {
        HomologyTable {
            coefficients: self.coefficients,
            groups: self.groups.iter().map(|(&(i, j), g)| ((i + di, j + dj), g.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), g) in &other.groups {
            out.add_group(i, j, g);
        }
        out
    }

    /// Keep only homological degrees satisfying `keep`.
    pub fn restrict_rows(&self, keep: impl Fn(i32) -> bool) -> Self {
        HomologyTable {
            coefficients: self.coefficients,
            groups: self.groups.iter().filter(|((i, _), _)| keep(*i)).map(|(k, g)| (*k, g.clone())).collect(),
        }
    }

    pub fn row(&self, i: i32) -> impl Iterator<Item = (i32, &Group)> {
        self.groups.iter().filter(move |((a, _), _)| *a == i).map(|((_, j), g)| (*j, g))
    }

    pub fn row_rank(&self, i: i32) -> BigUint {
        self.row(i).map(|(_, g)| &g.rank).sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.groups.keys().map(|k| k.0).min()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.groups.keys().map(|k| k.0).max()
    }

    pub fn total_rank(&self) -> BigUint {
        self.groups.values().map(|g| &g.rank).sum()
    }

    /// Graded Euler characteristic sum_{i,j} (-1)^i rank Kh^{i,j} q^j.
    pub fn euler_characteristic(&self) -> BTreeMap<i32, BigInt> {
        let mut out: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (&(i, j), g) in &self.groups {
            let r = BigInt::from(g.rank.clone());
            let e = out.entry(j).or_default();
            if i.rem_euclid(2) == 0 {
                *e += r;
            } else {
                *e -= r;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Homology of the dual complex: free part at (i,j) from (-i,-j),
    /// torsion at (i,j) from (1-i,-j).
    pub fn dualize(&self) -> Result<Self> {
        if self.coefficients.is_field() {
            return Err(KhError::Invalid("dualize expects integer coefficients".into()));
        }
        let mut out = Self::new(self.coefficients);
        for (&(i, j), g) in &self.groups {
            out.add_free_big(-i, -j, g.rank.clone());
            for (&(p, e), n) in &g.torsion {
                out.add_torsion_big(1 - i, -j, p, e, n.clone());
            }
        }
        Ok(out)
    }

    /// Rank flip for field coefficients, (i,j) -> (-i,-j).
    pub fn dualize_field(&self) -> Self {
        let mut out = Self::new(self.coefficients);
        for (&(i, j), g) in &self.groups {
            out.add_free_big(-i, -j, g.rank.clone());
        }
        out
    }

    /// Homology of the split union with an unknot.
    pub fn split_union_unknot(&self) -> Self {
        let mut out = Self::new(self.coefficients);
        for (&(i, j), g) in &self.groups {
            out.add_group(i, j + 1, g);
            out.add_group(i, j - 1, g);
        }
        out
    }

    /// Reduce integral homology to F_p via universal coefficients.
    pub fn reduce_mod(&self, p: u32) -> Result<Self> {
        if self.coefficients.is_field() {
            return Err(KhError::Invalid("reduce_mod expects integer coefficients".into()));
        }
        let mut out = Self::new(Coefficients::Prime(p));
        for (&(i, j), g) in &self.groups {
            let t = g.p_torsion_count(p as u64);
            out.add_free_big(i, j, &g.rank + &t);
            out.add_free_big(i - 1, j, t);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let groups: Vec<JsonGroup> = self
            .groups
            .iter()
            .map(|(&(i, j), g)| JsonGroup {
                i,
                j,
                rank: big_to_json(&g.rank),
                torsion: g.torsion.iter().map(|(&(p, e), n)| (p, e, big_to_json(n))).collect(),
            })
            .collect();
        serde_json::to_value(groups).expect("serializable")
    }

    pub fn from_json(coefficients: Coefficients, v: &serde_json::Value) -> Result<Self> {
        let groups: Vec<JsonGroup> =
            serde_json::from_value(v.clone()).map_err(|e| KhError::Parse(e.to_string()))?;
        let mut out = Self::new(coefficients);
        for g in groups {
            out.add_free_big(g.i, g.j, big_from_json(&g.rank)?);
            for (p, e, n) in g.torsion {
                out.add_torsion_big(g.i, g.j, p, e, big_from_json(&n)?);
            }
        }
        Ok(out)
    }

    /// Aligned text table with homological degree as columns and q-degree as rows.
    pub fn to_text(&self) -> String {
        if self.groups.is_empty() {
            return "0\n".into();
        }
        let imin = self.min_degree().unwrap();
        let imax = self.max_degree().unwrap();
        let mut js: Vec<i32> = self.groups.keys().map(|k| k.1).collect();
        js.sort();
        js.dedup();
        js.reverse();
        let cell = |i: i32, j: i32| {
            self.groups.get(&(i, j)).map_or(".".to_string(), |g| g.to_string())
        };
        let mut width = 4;
        for (&(i, j), _) in &self.groups {
            width = width.max(cell(i, j).len() + 1);
        }
        let mut s = format!("{:>5} |", "j\\i");
        for i in imin..=imax {
            s += &format!("{:>width$}", i);
        }
        s.push('\n');
        for j in js {
            s += &format!("{:>5} |", j);
            for i in imin..=imax {
                s += &format!("{:>width$}", cell(i, j));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGroup {
    i: i32,
    j: i32,
    rank: Value,
    torsion: Vec<(u64, u32, Value)>,
}

/// Counts that fit in 64 bits are JSON numbers, larger ones decimal strings.
fn big_to_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(x) => Value::from(x),
        None => Value::from(n.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigUint> {
    match v {
        Value::Number(x) => x.as_u64().map(BigUint::from).ok_or_else(|| KhError::Parse(format!("bad count {x}"))),
        Value::String(s) => s.parse().map_err(|_| KhError::Parse(format!("bad count {s}"))),
        _ => Err(KhError::Parse(format!("bad count {v}"))),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn right_trefoil() -> HomologyTable {
        let mut t = HomologyTable::new(Coefficients::Integers);
        for (i, j) in [(0, 1), (0, 3), (2, 5), (3, 9)] {
            t.add_free(i, j, 1);
        }
        t.add_torsion(3, 7, 2, 1, 1);
        t
    }

    #[test]
    fn dualize_trefoil() {
        let l = right_trefoil().dualize().unwrap();
        let mut expect = HomologyTable::new(Coefficients::Integers);
        for (i, j) in [(0, -1), (0, -3), (-2, -5), (-3, -9)] {
            expect.add_free(i, j, 1);
        }
        expect.add_torsion(-2, -7, 2, 1, 1);
        assert_eq!(l, expect);
        assert_eq!(l.dualize().unwrap(), right_trefoil());
    }

    #[test]
    fn unknot_is_self_dual() {
        let u = HomologyTable::unknot(Coefficients::Integers);
        assert_eq!(u.dualize().unwrap(), u);
    }

    #[test]
    fn split_unknot_twice() {
        let u = HomologyTable::unknot(Coefficients::Integers).split_union_unknot();
        assert_eq!(u.rank(0, -2), 1u32.into());
        assert_eq!(u.rank(0, 0), 2u32.into());
        assert_eq!(u.rank(0, 2), 1u32.into());
        assert_eq!(u.groups.len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let t = right_trefoil();
        let v = t.to_json();
        assert_eq!(HomologyTable::from_json(Coefficients::Integers, &v).unwrap(), t);
    }

    #[test]
    fn euler_characteristic_trefoil() {
        let e = right_trefoil().euler_characteristic();
        let expect: BTreeMap<i32, BigInt> = [(1, 1), (3, 1), (5, 1), (9, -1)].into_iter().map(|(j, c)| (j, c.into())).collect();
        assert_eq!(e, expect);
    }

    #[test]
    fn mod_two_reduction() {
        let t = right_trefoil().reduce_mod(2).unwrap();
        assert_eq!(t.rank(3, 7), 1u32.into());
        assert_eq!(t.rank(2, 7), 1u32.into());
        assert_eq!(t.total_rank(), 6u32.into());
    }

    #[test]
    fn remove_free_fails_when_empty() {
        let mut t = right_trefoil();
        assert!(t.remove_free(3, 7).is_err());
        t.remove_free(0, 1).unwrap();
        assert_eq!(t.rank(0, 1), 0u32.into());
    }
}
