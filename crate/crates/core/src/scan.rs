//! Bar-Natan scanning: glue crossings one at a time, deloop, cancel.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::complex::BasedComplex;
use crate::diagram::{braid_closure, default_scan_sequence, BraidWord, LinkDiagram, ScanSequence};
use crate::error::{KhError, Result};
use crate::homology::HomologyTable;
use crate::jones::{determinant, jones_closed_braid, LaurentPoly};
use crate::ring::Coefficients;

pub const DEFAULT_GENERATOR_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Policy {
    /// Cancel only the designated pivots of each crossing block.
    BlocksOnly,
    /// Afterwards cancel every remaining unit multiple of an identity.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub coefficients: Coefficients,
    /// Trust unshifted degrees up to `k`; the complex is cut at `k + 1`.
    pub truncation: Option<u32>,
    pub policy: Policy,
    pub assert_bounds: bool,
    pub generator_cap: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            coefficients: Coefficients::Integers,
            truncation: None,
            policy: Policy::Exhaustive,
            assert_bounds: true,
            generator_cap: DEFAULT_GENERATOR_CAP,
        }
    }
}

impl ScanConfig {
    pub fn with_coefficients(mut self, c: Coefficients) -> Self {
        self.coefficients = c;
        self
    }

    pub fn truncated(mut self, k: u32) -> Self {
        self.truncation = Some(k);
        self
    }

    pub fn with_policy(mut self, p: Policy) -> Self {
        self.policy = p;
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanStats {
    pub crossings: usize,
    pub girth: usize,
    pub nice: bool,
    pub peak_generators: usize,
    /// Largest number of summands in one homological degree.
    pub peak_rank: usize,
    pub max_coefficient_bits: u64,
    pub bound_checks: usize,
}

#[derive(Clone, Debug)]
pub struct ScanOutput {
    pub table: HomologyTable,
    pub stats: ScanStats,
}

fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::from(0);
    }
    let k = (k as u64).min(n - k as u64);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Rank and coefficient bounds after `t` of `n` crossings of a nice sequence.
/// The top degree of a truncated complex lost its cancellation partners and
/// is exempt from the rank bound.
fn check_bounds(
    c: &BasedComplex,
    t: usize,
    n: usize,
    girth: usize,
    max_deg: Option<i32>,
    stats: &mut ScanStats,
) -> Result<()> {
    for (&i, &r) in &c.rank_by_degree() {
        if max_deg.is_some_and(|m| i >= m) {
            continue;
        }
        let bound = if t < n { binomial(t as u64, i as i64) } else { 2 * binomial(n as u64, i as i64) };
        if BigInt::from(r) > bound {
            return Err(KhError::Invariant(format!(
                "rank bound violated after {t} crossings: degree {i} has {r} summands, bound {bound}"
            )));
        }
        stats.bound_checks += 1;
    }
    if c.coefficients.is_field() {
        return Ok(());
    }
    for (&i, norm) in &c.max_norm_by_degree() {
        let exp = (girth as u64 / 2 + 1) * (binomial(t as u64 + 1, i as i64 + 1) - 1u32).try_into().unwrap_or(u64::MAX);
        // log2 of the norm must stay below exp
        if exp < norm.bits() && *norm > BigInt::one() << exp {
            return Err(KhError::Invariant(format!(
                "coefficient bound violated after {t} crossings in degree {i}: norm {norm}"
            )));
        }
        stats.bound_checks += 1;
    }
    Ok(())
}

/// Scan `l` in the order `s`. When truncated at `k`, only rows with
/// `i <= k - n_minus` are returned.
pub fn scan(l: &LinkDiagram, s: &ScanSequence, cfg: &ScanConfig) -> Result<ScanOutput> {
    if s.order.len() != l.crossings.len() {
        return Err(KhError::Invalid("scan sequence does not match the diagram".into()));
    }
    let coeff = cfg.coefficients;
    let mut stats = ScanStats { crossings: l.crossings.len(), girth: s.girth(), nice: s.nice, ..Default::default() };
    let max_deg = cfg.truncation.map(|k| k as i32 + 1);
    let mut c = BasedComplex::empty(coeff, l.free_loops);
    c.check_norms = cfg.assert_bounds && cfg.policy == Policy::BlocksOnly;
    let n = s.order.len();
    for (t, &k) in s.order.iter().enumerate() {
        let (mut next, pivots) = c.tensor_crossing(&l.crossings[k], max_deg)?;
        let size = next.generator_count();
        stats.peak_generators = stats.peak_generators.max(size);
        if size > cfg.generator_cap {
            return Err(KhError::SizeCap(format!(
                "{size} generators after {} crossings exceeds the cap of {}",
                t + 1,
                cfg.generator_cap
            )));
        }
        for (x, y) in pivots {
            next.gaussian_eliminate(x, y)?;
        }
        if cfg.policy == Policy::Exhaustive {
            next.reduce_exhaustive()?;
        }
        if cfg.assert_bounds && s.nice {
            check_bounds(&next, t + 1, n, stats.girth, max_deg, &mut stats)?;
        }
        stats.peak_rank = stats.peak_rank.max(next.rank_by_degree().values().copied().max().unwrap_or(0));
        stats.max_coefficient_bits = stats.max_coefficient_bits.max(next.max_coefficient_bits());
        c = next;
    }
    let (np, nm) = (l.n_plus() as i32, l.n_minus() as i32);
    let mut table = c.to_free_complex(np, nm)?.homology();
    if let Some(k) = cfg.truncation {
        table = table.restrict_rows(|i| i <= k as i32 - nm);
    }
    Ok(ScanOutput { table, stats })
}

/// Pick a scanning order: reduce nugatory crossings of connected diagrams,
/// then use a nice sequence when one exists.
pub fn prepare(l: &LinkDiagram) -> Result<(LinkDiagram, ScanSequence)> {
    let d = if l.is_connected() && !l.crossings.is_empty() { l.reduce_nugatory()? } else { l.clone() };
    let s = default_scan_sequence(&d);
    Ok((d, s))
}

/// Khovanov homology of a diagram by scanning. With truncation `k` the
/// rows `i <= k - n_-` of the input diagram are returned.
pub fn kh_scan(l: &LinkDiagram, cfg: &ScanConfig) -> Result<ScanOutput> {
    let (d, s) = prepare(l)?;
    let Some(k) = cfg.truncation else { return scan(&d, &s, cfg) };
    // removed negative crossings move the window of the reduced diagram
    let removed = l.n_minus() as i64 - d.n_minus() as i64;
    let kd = k as i64 - removed;
    if kd < 0 {
        let stats = ScanStats { crossings: d.crossings.len(), girth: s.girth(), nice: s.nice, ..Default::default() };
        return Ok(ScanOutput { table: HomologyTable::new(cfg.coefficients), stats });
    }
    let out = scan(&d, &s, &ScanConfig { truncation: Some(kd as u32), ..cfg.clone() })?;
    Ok(out)
}

/// Lower bound on the size of the homology of the closure of `b`. The
/// total rank is at least the l1 norm of (q + q^{-1}) J, and the F_2
/// dimension is twice that of reduced homology, hence at least 2 det.
pub fn homology_size_lower_bound(b: &BraidWord) -> Result<BigInt> {
    let j = jones_closed_braid(b)?;
    let chi = (&LaurentPoly::delta() * &j).l1_norm();
    Ok(chi.max(2 * determinant(&j)))
}

/// Refuse a full scan whose homology alone would exceed the generator cap.
pub fn preflight(b: &BraidWord, cap: usize) -> Result<()> {
    let bound = homology_size_lower_bound(b)?;
    if bound > BigInt::from(cap) {
        return Err(KhError::SizeCap(format!(
            "homology has total rank at least {bound}, above the generator cap of {cap}"
        )));
    }
    Ok(())
}

/// Scan the closure of a braid, with the preflight size check for full runs.
pub fn kh_scan_braid(b: &BraidWord, cfg: &ScanConfig) -> Result<ScanOutput> {
    if cfg.truncation.is_none() {
        preflight(b, cfg.generator_cap)?;
    }
    kh_scan(&braid_closure(b), cfg)
}

/// Rows `i <= -n_- + k` and `i >= n_+ - k` of the closure of `b`, scanning
/// the conjugated word in word order and its mirror.
pub fn extremal_homology(b: &BraidWord, k: u32, cfg: &ScanConfig) -> Result<HomologyTable> {
    let t = b.strands as u32;
    let conj = b.conjugate_for_scan();
    let l = braid_closure(&conj);
    let seq = ScanSequence::in_order(&l);
    let low_cfg = ScanConfig { truncation: Some(k + t - 1), ..cfg.clone() };
    let low = scan(&l, &seq, &low_cfg)?.table;
    let (np, nm) = (b.n_plus() as i32, b.n_minus() as i32);
    let low = low.restrict_rows(|i| i <= -nm + k as i32);
    // the torsion of row n_+ - k comes from one row further on the mirror
    let mirror = l.mirror();
    let high_cfg = ScanConfig { truncation: Some(k + t), ..cfg.clone() };
    let high = scan(&mirror, &seq, &high_cfg)?.table;
    let high = if cfg.coefficients.is_field() { high.dualize_field() } else { high.dualize()? };
    let high = high.restrict_rows(|i| i >= np - k as i32);
    let mut out = low.clone();
    for (&(i, j), g) in &high.groups {
        if i <= -nm + k as i32 {
            if low.get(i, j) != *g {
                return Err(KhError::Invariant(format!("low and high scans disagree at ({i}, {j})")));
            }
        } else {
            out.add_group(i, j, g);
        }
    }
    for (&(i, j), g) in &low.groups {
        if i >= np - k as i32 && high.get(i, j) != *g {
            return Err(KhError::Invariant(format!("low and high scans disagree at ({i}, {j})")));
        }
    }
    Ok(out)
}

/// Per-degree ranks of the final complex, a measure of scan size.
pub fn final_ranks(l: &LinkDiagram, cfg: &ScanConfig) -> Result<BTreeMap<i32, usize>> {
    let (d, s) = prepare(l)?;
    let mut c = BasedComplex::empty(cfg.coefficients, d.free_loops);
    for &k in &s.order {
        let (mut next, pivots) = c.tensor_crossing(&d.crossings[k], None)?;
        for (x, y) in pivots {
            next.gaussian_eliminate(x, y)?;
        }
        if cfg.policy == Policy::Exhaustive {
            next.reduce_exhaustive()?;
        }
        c = next;
    }
    Ok(c.rank_by_degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::kh_cube;
    use crate::homology::tests::right_trefoil;

    const Z: Coefficients = Coefficients::Integers;

    fn closure(strands: usize, w: &[i32]) -> LinkDiagram {
        braid_closure(&BraidWord::new(strands, w.to_vec()).unwrap())
    }

    #[test]
    fn trefoil_full_scan() {
        let d = closure(2, &[1, 1, 1]);
        for policy in [Policy::BlocksOnly, Policy::Exhaustive] {
            let cfg = ScanConfig::default().with_policy(policy);
            let s = crate::diagram::nice_scanning_sequence(&d).unwrap();
            assert_eq!(scan(&d, &s, &cfg).unwrap().table, right_trefoil());
        }
    }

    #[test]
    fn matches_cube_on_small_braids() {
        let words: [(usize, &[i32]); 9] = [
            (2, &[1]),
            (2, &[1, 1]),
            (2, &[-1, -1, -1, -1]),
            (3, &[-1, 2, -1, 2]),
            (3, &[1, 2, 1, 2, 1, 2]),
            (3, &[1, 1, 2, -1, 2, 2]),
            (3, &[]),
            (4, &[1, 3, 2, -2]),
            (4, &[1, -3, 1]),
        ];
        for (n, w) in words {
            let d = closure(n, w);
            let oracle = kh_cube(&d, Z).unwrap();
            for policy in [Policy::BlocksOnly, Policy::Exhaustive] {
                let cfg = ScanConfig::default().with_policy(policy);
                assert_eq!(kh_scan(&d, &cfg).unwrap().table, oracle, "{w:?} {policy:?}");
                let s = ScanSequence::in_order(&d);
                assert_eq!(scan(&d, &s, &cfg).unwrap().table, oracle, "{w:?} word order");
            }
        }
    }

    #[test]
    fn field_scan_matches_cube() {
        let f2 = Coefficients::Prime(2);
        let d = closure(3, &[-1, 2, -1, 2, 1]);
        let cfg = ScanConfig::default().with_coefficients(f2);
        assert_eq!(kh_scan(&d, &cfg).unwrap().table, kh_cube(&d, f2).unwrap());
        let f3 = Coefficients::Prime(3);
        let cfg = ScanConfig::default().with_coefficients(f3);
        assert_eq!(kh_scan(&d, &cfg).unwrap().table, kh_cube(&d, f3).unwrap());
    }

    #[test]
    fn truncated_rows_agree() {
        let d = closure(3, &[1, 2, 1, 1, -2, 1, 2]);
        let full = kh_cube(&d, Z).unwrap();
        let s = ScanSequence::in_order(&d);
        for k in 0..4 {
            let cfg = ScanConfig::default().truncated(k);
            let t = scan(&d, &s, &cfg).unwrap().table;
            let nm = d.n_minus() as i32;
            assert_eq!(t, full.restrict_rows(|i| i <= k as i32 - nm), "k = {k}");
        }
    }

    #[test]
    fn extremal_trefoil_is_full() {
        let b = BraidWord::new(2, vec![1, 1, 1]).unwrap();
        let t = extremal_homology(&b, 3, &ScanConfig::default()).unwrap();
        assert_eq!(t, right_trefoil());
    }

    #[test]
    fn extremal_positive_top_row() {
        let b = BraidWord::new(3, vec![1, 2, 1, 1, 2]).unwrap();
        let t = extremal_homology(&b, 0, &ScanConfig::default()).unwrap();
        let full = kh_cube(&braid_closure(&b), Z).unwrap();
        let want = full.restrict_rows(|i| i == 0 || i == 5);
        assert_eq!(t, want);
    }

    #[test]
    fn preflight_refuses_large_weaving_links() {
        let cfg = ScanConfig::default();
        assert!(matches!(kh_scan_braid(&BraidWord::weaving(16), &cfg), Err(KhError::SizeCap(_))));
        assert!(preflight(&BraidWord::weaving(5), cfg.generator_cap).is_ok());
    }

    #[test]
    fn generator_cap_trips() {
        let d = closure(3, &[-1, 2, -1, 2, -1, 2]);
        let cfg = ScanConfig { generator_cap: 3, ..Default::default() };
        assert!(matches!(kh_scan(&d, &cfg), Err(KhError::SizeCap(_))));
    }
}
