//! Khovanov homology of closed 3-braids from the Murasugi normal form.
//!
//! With `a = s1 s2 s1` and `b = s1 s2`, the full twist is `c = a^2 = b^3`
//! and every 3-braid is conjugate to `c^n` times a cyclic word in `a` and
//! `b`. Torus pieces are computed by scanning and cached; the remaining
//! classes are assembled from those and the thin homology of an
//! alternating 3-braid.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::{OnceLock, RwLock};

use crate::diagram::{braid_closure, BraidWord};
use crate::error::{KhError, Result};
use crate::homology::{Group, HomologyTable};
use crate::jones::{alternating_diagonal, jones_closed_braid, lee_degrees, quasi_alternating_homology};
use crate::ring::Coefficients;
use crate::scan::{kh_scan, ScanConfig};

const Z: Coefficients = Coefficients::Integers;

/// Conjugacy class representatives; `k` is the power of the full twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MurasugiClass {
    /// Delta^{2k}.
    Omega0 { k: i32 },
    /// Delta^{2k} s1 s2.
    Omega1 { k: i32 },
    /// Delta^{2k} (s1 s2)^2.
    Omega2 { k: i32 },
    /// Delta^{2k} s1 s2 s1.
    Omega3 { k: i32 },
    /// Delta^{2k} s1^{-p}, p > 0.
    Omega4 { k: i32, p: u32 },
    /// Delta^{2k} s2^{q}, q > 0.
    Omega5 { k: i32, q: u32 },
    /// Delta^{2k} s1^{-p1} s2^{q1} ... s1^{-pr} s2^{qr}.
    Omega6 { k: i32, p: Vec<u32>, q: Vec<u32> },
}

impl MurasugiClass {
    pub fn name(&self) -> &'static str {
        match self {
            MurasugiClass::Omega0 { .. } => "Omega0",
            MurasugiClass::Omega1 { .. } => "Omega1",
            MurasugiClass::Omega2 { .. } => "Omega2",
            MurasugiClass::Omega3 { .. } => "Omega3",
            MurasugiClass::Omega4 { .. } => "Omega4",
            MurasugiClass::Omega5 { .. } => "Omega5",
            MurasugiClass::Omega6 { .. } => "Omega6",
        }
    }

    pub fn twist(&self) -> i32 {
        match self {
            MurasugiClass::Omega0 { k }
            | MurasugiClass::Omega1 { k }
            | MurasugiClass::Omega2 { k }
            | MurasugiClass::Omega3 { k }
            | MurasugiClass::Omega4 { k, .. }
            | MurasugiClass::Omega5 { k, .. }
            | MurasugiClass::Omega6 { k, .. } => *k,
        }
    }

    /// The representative braid word.
    pub fn word(&self) -> BraidWord {
        let mut letters = full_twist(self.twist());
        match self {
            MurasugiClass::Omega0 { .. } => {}
            MurasugiClass::Omega1 { .. } => letters.extend([1, 2]),
            MurasugiClass::Omega2 { .. } => letters.extend([1, 2, 1, 2]),
            MurasugiClass::Omega3 { .. } => letters.extend([1, 2, 1]),
            MurasugiClass::Omega4 { p, .. } => letters.extend(std::iter::repeat_n(-1, *p as usize)),
            MurasugiClass::Omega5 { q, .. } => letters.extend(std::iter::repeat_n(2, *q as usize)),
            MurasugiClass::Omega6 { p, q, .. } => letters.extend(alternating_letters(p, q)),
        }
        BraidWord { strands: 3, letters }
    }
}

impl fmt::Display for MurasugiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MurasugiClass::Omega4 { k, p } => write!(f, "Omega4(k={k}, p={p})"),
            MurasugiClass::Omega5 { k, q } => write!(f, "Omega5(k={k}, q={q})"),
            MurasugiClass::Omega6 { k, p, q } => write!(f, "Omega6(k={k}, p={p:?}, q={q:?})"),
            c => write!(f, "{}(k={})", c.name(), c.twist()),
        }
    }
}

fn full_twist(k: i32) -> Vec<i32> {
    if k >= 0 {
        [1, 2].repeat(3 * k as usize)
    } else {
        [-2, -1].repeat(3 * k.unsigned_abs() as usize)
    }
}

fn alternating_letters(p: &[u32], q: &[u32]) -> Vec<i32> {
    let mut out = vec![];
    for (&a, &b) in p.iter().zip(q) {
        out.extend(std::iter::repeat_n(-1, a as usize));
        out.extend(std::iter::repeat_n(2, b as usize));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    A,
    /// b^e with e in {1, 2}.
    B(u8),
}

/// Push onto the reduced word, absorbing a^2 and b^3 into the twist count.
fn push(stack: &mut Vec<Letter>, n: &mut i32, x: Letter) {
    match (stack.last().copied(), x) {
        (Some(Letter::A), Letter::A) => {
            stack.pop();
            *n += 1;
        }
        (Some(Letter::B(e)), Letter::B(f)) => {
            stack.pop();
            let s = e + f;
            if s >= 3 {
                *n += 1;
                if s > 3 {
                    stack.push(Letter::B(s - 3));
                }
            } else {
                stack.push(Letter::B(s));
            }
        }
        _ => stack.push(x),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub class: MurasugiClass,
    pub word: BraidWord,
}

/// Murasugi normal form of a 3-braid, up to conjugacy.
pub fn murasugi_normal_form(b: &BraidWord) -> Result<NormalForm> {
    if b.strands != 3 {
        return Err(KhError::Capability(format!("normal form needs a 3-braid, got {} strands", b.strands)));
    }
    let mut n = 0i32;
    let mut stack = vec![];
    for &l in &b.letters {
        n -= 1;
        let subst: &[Letter] = match l {
            1 => &[Letter::B(2), Letter::A],
            -1 => &[Letter::A, Letter::B(1)],
            2 => &[Letter::A, Letter::B(2)],
            _ => &[Letter::B(1), Letter::A],
        };
        for &x in subst {
            push(&mut stack, &mut n, x);
        }
    }
    // cyclic reduction
    while stack.len() >= 2 {
        let (first, last) = (stack[0], stack[stack.len() - 1]);
        match (first, last) {
            (Letter::A, Letter::A) => {
                stack.pop();
                stack.remove(0);
                n += 1;
            }
            (Letter::B(e), Letter::B(f)) => {
                stack.pop();
                stack.remove(0);
                let mut rest = vec![];
                push(&mut rest, &mut n, Letter::B(e));
                push(&mut rest, &mut n, Letter::B(f));
                for x in rest.into_iter().rev() {
                    stack.insert(0, x);
                }
            }
            _ => break,
        }
    }
    let class = match stack.as_slice() {
        [] => MurasugiClass::Omega0 { k: n },
        [Letter::A] => MurasugiClass::Omega3 { k: n },
        [Letter::B(1)] => MurasugiClass::Omega1 { k: n },
        [Letter::B(_)] => MurasugiClass::Omega2 { k: n },
        _ => {
            // rotate to start with a; then ab -> c s1^{-1} and ab^2 -> c s2
            let start = stack.iter().position(|x| *x == Letter::A).expect("alternating word");
            stack.rotate_left(start);
            let mut letters = vec![];
            for pair in stack.chunks(2) {
                match pair {
                    [Letter::A, Letter::B(1)] => letters.push(-1),
                    [Letter::A, Letter::B(2)] => letters.push(2),
                    _ => return Err(KhError::Invariant("normal form word is not alternating".into())),
                }
                n += 1;
            }
            classify_letters(n, &letters)
        }
    };
    let word = class.word();
    if word.len() > 4 * b.len() + 2 {
        return Err(KhError::Invariant(format!(
            "normal form of length {} exceeds 4|w| + 2 for |w| = {}",
            word.len(),
            b.len()
        )));
    }
    Ok(NormalForm { class, word })
}

/// Class of Delta^{2k} times a cyclic word in s1^{-1} and s2.
fn classify_letters(k: i32, letters: &[i32]) -> MurasugiClass {
    let neg = letters.iter().filter(|l| **l < 0).count() as u32;
    if neg as usize == letters.len() {
        return MurasugiClass::Omega4 { k, p: neg };
    }
    if neg == 0 {
        return MurasugiClass::Omega5 { k, q: letters.len() as u32 };
    }
    let mut w = letters.to_vec();
    // start at the beginning of a run of s1^{-1}
    let start = (0..w.len()).find(|&i| w[i] < 0 && w[(i + w.len() - 1) % w.len()] > 0).unwrap();
    w.rotate_left(start);
    let (mut p, mut q) = (vec![], vec![]);
    for l in w {
        if l < 0 {
            if p.len() == q.len() {
                p.push(0);
            }
            *p.last_mut().unwrap() += 1;
        } else {
            if q.len() < p.len() {
                q.push(0);
            }
            *q.last_mut().unwrap() += 1;
        }
    }
    MurasugiClass::Omega6 { k, p, q }
}

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    word: String,
    groups: serde_json::Value,
}

fn memo() -> &'static RwLock<HashMap<String, HomologyTable>> {
    static MEMO: OnceLock<RwLock<HashMap<String, HomologyTable>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cache_path(key: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("KH_CACHE_DIR")?;
    let digest = Sha256::digest(key.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Some(PathBuf::from(dir).join(format!("kh-v{CACHE_VERSION}-{hex}.json")))
}

fn read_cache(key: &str) -> Option<HomologyTable> {
    let path = cache_path(key)?;
    let text = std::fs::read_to_string(path).ok()?;
    let entry: CacheEntry = serde_json::from_str(&text).ok()?;
    if entry.version != CACHE_VERSION || entry.word != key {
        return None;
    }
    HomologyTable::from_json(Z, &entry.groups).ok()
}

fn write_cache(key: &str, t: &HomologyTable) {
    let Some(path) = cache_path(key) else { return };
    let entry = CacheEntry { version: CACHE_VERSION, word: key.to_string(), groups: t.to_json() };
    let Ok(text) = serde_json::to_string(&entry) else { return };
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    // write then rename so concurrent readers never see a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if std::fs::write(&tmp, text).is_ok() {
        let _ = std::fs::rename(&tmp, &path);
    }
}

/// Integral homology of the closure of `b` by a full scan, memoized in
/// memory and, when `KH_CACHE_DIR` is set, on disk.
pub fn cached_scan(b: &BraidWord, cfg: &ScanConfig) -> Result<HomologyTable> {
    let key = b.to_string();
    if let Some(t) = memo().read().expect("memo lock").get(&key) {
        return Ok(t.clone());
    }
    let t = match read_cache(&key) {
        Some(t) => t,
        None => {
            let cfg = ScanConfig { coefficients: Z, truncation: None, ..cfg.clone() };
            let t = kh_scan(&braid_closure(b), &cfg)?.table;
            write_cache(&key, &t);
            t
        }
    };
    memo().write().expect("memo lock").insert(key, t.clone());
    Ok(t)
}

/// Kh(T(2, l)), the closure of s1^l.
pub fn kh_torus2(l: i32, cfg: &ScanConfig) -> Result<HomologyTable> {
    cached_scan(&BraidWord::torus2(l), cfg)
}

/// Kh(T(3, 3k)), the closure of (s1 s2)^{3k}.
pub fn kh_torus33k(k: u32, cfg: &ScanConfig) -> Result<HomologyTable> {
    cached_scan(&BraidWord::torus33k(k as usize), cfg)
}

/// Thin homology of the alternating closure of s1^{-p1} s2^{q1} ...
fn kh_alternating(p: &[u32], q: &[u32]) -> Result<HomologyTable> {
    let w = BraidWord { strands: 3, letters: alternating_letters(p, q) };
    let d = braid_closure(&w);
    let reduced = d.reduce_nugatory()?;
    let j = jones_closed_braid(&w)?;
    quasi_alternating_homology(&j, alternating_diagonal(&reduced), &lee_degrees(&d), Z)
}

fn free(n: u64) -> Group {
    Group::free(n)
}

fn z2() -> Group {
    let mut g = Group::default();
    g.add_torsion(2, 1, 1u32);
    g
}

/// Delta^{2k} s1^{-l} for k, l >= 1.
fn omega4(k: u32, l: u32, cfg: &ScanConfig) -> Result<HomologyTable> {
    let t = kh_torus33k(k, cfg)?;
    let t2 = kh_torus2(-(l as i32), cfg)?;
    let (k, l) = (k as i32, l as i32);
    let top = 4 * k;
    let (jt, jb) = (12 * k, 12 * k - l);
    let mut out = t.restrict_rows(|i| i <= top - 5).shifted(0, -l);
    out = out.direct_sum(&t2.split_union_unknot().shifted(top, jt).restrict_rows(|i| i <= top - 6));
    out = out.direct_sum(&t2.restrict_rows(|i| i == -5).shifted(top, jt - 1));
    let mut put = |i: i32, j: i32, g: Group| out.add_group(i, j, &g);
    put(top, jb - 1, free(1));
    put(top, jb + 1, free(1));
    if l == 1 {
        put(top - 1, jb - 1, free(1));
        put(top - 1, jb - 3, z2());
    }
    put(top - 2, jb - 3, free([0, 2, 1][(l.min(3) - 1) as usize]));
    put(top - 2, jb - 5, if l >= 3 { z2() } else { free(l as u64) });
    if l >= 3 {
        put(top - 3, jb - 7, free(1));
    }
    put(top - 4, jb - 7, free(match l { 1..=3 => 1, 4 => 3, _ => 2 }));
    put(top - 4, jb - 9, if l >= 5 { z2() } else { free(if l == 4 { 2 } else { 1 }) });
    if k == 1 {
        if l >= 4 {
            put(0, 12 - l - 5, free(1));
        }
    } else {
        put(top - 3, jb - 3, free(1));
        put(top - 3, jb - 5, if l >= 4 { z2() } else { free(1) });
    }
    Ok(out)
}

/// Delta^{2k} s2^{l} for k, l >= 1.
fn omega5(k: u32, l: u32, cfg: &ScanConfig) -> Result<HomologyTable> {
    let t = kh_torus33k(k, cfg)?;
    let t2 = kh_torus2(l as i32, cfg)?;
    let (k, l) = (k as i32, l as i32);
    let top = 4 * k;
    let mut out = t.restrict_rows(|i| i < top).shifted(0, l);
    out = out.direct_sum(&t2.split_union_unknot().shifted(top, 12 * k).restrict_rows(|i| i > top + 1));
    out.add_free(top, 12 * k + l - 3, 1);
    out.add_free(top, 12 * k + l - 1, 2);
    out.add_group(top + 1, 12 * k + l + 1, &z2());
    out.add_free(top + 1, 12 * k + l + 3, 1);
    Ok(out)
}

/// Delta^{2k} w for k >= 1 and w alternating.
fn omega6(k: u32, p: &[u32], q: &[u32], cfg: &ScanConfig) -> Result<HomologyTable> {
    let t = kh_torus33k(k, cfg)?;
    let lw = kh_alternating(p, q)?;
    let tw = q.iter().sum::<u32>() as i32 - p.iter().sum::<u32>() as i32;
    let k = k as i32;
    let top = 4 * k;
    let outside = |i: i32| i != top && i != top + 1;
    let mut out = t.shifted(0, tw).restrict_rows(outside);
    out = out.direct_sum(&lw.shifted(top, 12 * k).restrict_rows(outside));
    out = out.direct_sum(&lw.restrict_rows(|i| i == 0 || i == 1).shifted(top, 12 * k));
    out.remove_free(top, 12 * k + tw + 1)?;
    out.add_group(top + 1, 12 * k + tw + 1, &z2());
    out.add_free(top + 1, 12 * k + tw + 3, 1);
    Ok(out)
}

/// Integral homology of a normal form class.
pub fn kh_class(c: &MurasugiClass, cfg: &ScanConfig) -> Result<HomologyTable> {
    match c {
        MurasugiClass::Omega0 { .. }
        | MurasugiClass::Omega1 { .. }
        | MurasugiClass::Omega2 { .. }
        | MurasugiClass::Omega3 { .. } => cached_scan(&c.word(), cfg),
        &MurasugiClass::Omega4 { k, p } => match k {
            0 => Ok(kh_torus2(-(p as i32), cfg)?.split_union_unknot()),
            k if k > 0 => omega4(k as u32, p, cfg),
            k => omega5(k.unsigned_abs(), p, cfg)?.dualize(),
        },
        &MurasugiClass::Omega5 { k, q } => match k {
            0 => Ok(kh_torus2(q as i32, cfg)?.split_union_unknot()),
            k if k > 0 => omega5(k as u32, q, cfg),
            k => omega4(k.unsigned_abs(), q, cfg)?.dualize(),
        },
        MurasugiClass::Omega6 { k, p, q } => match *k {
            0 => kh_alternating(p, q),
            k if k > 0 => omega6(k as u32, p, q, cfg),
            k => {
                // the mirror, conjugated by Delta, is Delta^{-2k} s1^{-q1} s2^{p2} ... s2^{p1}
                let mut p2 = p.clone();
                p2.rotate_left(1);
                omega6(k.unsigned_abs(), q, &p2, cfg)?.dualize()
            }
        },
    }
}

/// Khovanov homology of the closure of a 3-braid.
pub fn kh_3braid(b: &BraidWord, coeff: Coefficients, cfg: &ScanConfig) -> Result<HomologyTable> {
    let nf = murasugi_normal_form(b)?;
    let t = kh_class(&nf.class, cfg)?;
    match coeff {
        Coefficients::Integers => Ok(t),
        Coefficients::Prime(p) => t.reduce_mod(p),
    }
}
