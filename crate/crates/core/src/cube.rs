//! Khovanov homology straight from the cube of resolutions.

use num_bigint::BigInt;
use std::collections::HashMap;

use crate::diagram::{LinkDiagram, UnionFind};
use crate::error::{KhError, Result};
use crate::homology::HomologyTable;
use crate::ring::Coefficients;
use crate::smith::FreeComplex;

pub const DEFAULT_CROSSING_LIMIT: usize = 14;

/// Circles of one resolution: circle id of every edge index.
struct State {
    circle_of_edge: Vec<usize>,
    circles: usize,
}

fn resolve(l: &LinkDiagram, edge_index: &HashMap<u32, usize>, v: u32) -> State {
    let n_edges = edge_index.len();
    let mut uf = UnionFind::new(n_edges);
    for (k, c) in l.crossings.iter().enumerate() {
        let e = c.edges.map(|x| edge_index[&x]);
        if v >> k & 1 == 0 {
            uf.union(e[0], e[1]);
            uf.union(e[2], e[3]);
        } else {
            uf.union(e[0], e[3]);
            uf.union(e[1], e[2]);
        }
    }
    let mut ids = HashMap::new();
    let mut circle_of_edge = vec![0; n_edges];
    for (e, c) in circle_of_edge.iter_mut().enumerate() {
        let r = uf.find(e);
        let n = ids.len();
        *c = *ids.entry(r).or_insert(n);
    }
    State { circle_of_edge, circles: ids.len() + l.free_loops }
}

/// Khovanov homology of a diagram with at most `limit` crossings.
pub fn kh_cube_with_limit(l: &LinkDiagram, coeff: Coefficients, limit: usize) -> Result<HomologyTable> {
    let n = l.crossings.len();
    if n > limit {
        return Err(KhError::SizeCap(format!("cube oracle limited to {limit} crossings, diagram has {n}")));
    }
    let (np, nm) = (l.n_plus() as i32, l.n_minus() as i32);
    let mut edges: Vec<u32> = l.crossings.iter().flat_map(|c| c.edges).collect();
    edges.sort_unstable();
    edges.dedup();
    let edge_index: HashMap<u32, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let states: Vec<State> = (0..1u32 << n).map(|v| resolve(l, &edge_index, v)).collect();
    let mut fc = FreeComplex::new(coeff);
    let mut offset = vec![0usize; states.len()];
    for (v, s) in states.iter().enumerate() {
        let r = v.count_ones() as i32;
        for labels in 0..1usize << s.circles {
            // bit set means X
            let x = labels.count_ones() as i32;
            let q = (s.circles as i32 - 2 * x) + r + np - 2 * nm;
            let id = fc.add_generator(r - nm, q);
            if labels == 0 {
                offset[v] = id;
            }
        }
    }
    for v in 0..states.len() as u32 {
        for j in 0..n {
            if v >> j & 1 == 1 {
                continue;
            }
            let w = v | 1 << j;
            let sign = if (v & ((1 << j) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            add_edge_map(l, &edge_index, &states[v as usize], &states[w as usize], j, |src, tgt| {
                fc.add_entry(offset[v as usize] + src, offset[w as usize] + tgt, BigInt::from(sign));
            });
        }
    }
    debug_assert!(fc.is_complex());
    Ok(fc.homology())
}

pub fn kh_cube(l: &LinkDiagram, coeff: Coefficients) -> Result<HomologyTable> {
    kh_cube_with_limit(l, coeff, DEFAULT_CROSSING_LIMIT)
}

/// Merge or split along crossing `j` between resolutions `s` and `t`,
/// reporting each (source labelling, target labelling) with coefficient 1.
fn add_edge_map(
    l: &LinkDiagram,
    edge_index: &HashMap<u32, usize>,
    s: &State,
    t: &State,
    j: usize,
    mut emit: impl FnMut(usize, usize),
) {
    let e = l.crossings[j].edges.map(|x| edge_index[&x]);
    let free = l.free_loops;
    let inner_s = s.circles - free;
    let inner_t = t.circles - free;
    // map every untouched source circle to its target circle
    let mut image = vec![usize::MAX; s.circles];
    for (edge, &c) in s.circle_of_edge.iter().enumerate() {
        image[c] = t.circle_of_edge[edge];
    }
    for f in 0..free {
        image[inner_s + f] = inner_t + f;
    }
    let (a, b) = (s.circle_of_edge[e[0]], s.circle_of_edge[e[2]]);
    let transport = |labels: usize, skip: &[usize]| -> usize {
        let mut out = 0;
        for c in 0..s.circles {
            if !skip.contains(&c) && labels >> c & 1 == 1 {
                out |= 1 << image[c];
            }
        }
        out
    };
    if a != b {
        let m = t.circle_of_edge[e[0]];
        for labels in 0..1usize << s.circles {
            let (xa, xb) = (labels >> a & 1, labels >> b & 1);
            if xa + xb == 2 {
                continue;
            }
            let mut out = transport(labels, &[a, b]);
            if xa + xb == 1 {
                out |= 1 << m;
            }
            emit(labels, out);
        }
    } else {
        let (c1, c2) = (t.circle_of_edge[e[0]], t.circle_of_edge[e[1]]);
        for labels in 0..1usize << s.circles {
            let base = transport(labels, &[a]);
            if labels >> a & 1 == 1 {
                emit(labels, base | 1 << c1 | 1 << c2);
            } else {
                emit(labels, base | 1 << c1);
                emit(labels, base | 1 << c2);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, BraidWord};
    use crate::homology::tests::right_trefoil;

    const Z: Coefficients = Coefficients::Integers;

    fn closure(strands: usize, w: &[i32]) -> LinkDiagram {
        braid_closure(&BraidWord::new(strands, w.to_vec()).unwrap())
    }

    #[test]
    fn unknot_without_crossings() {
        let d = LinkDiagram::new(vec![], 1).unwrap();
        assert_eq!(kh_cube(&d, Z).unwrap(), HomologyTable::unknot(Z));
    }

    #[test]
    fn kinked_unknot() {
        assert_eq!(kh_cube(&closure(2, &[1]), Z).unwrap(), HomologyTable::unknot(Z));
        assert_eq!(kh_cube(&closure(2, &[-1]), Z).unwrap(), HomologyTable::unknot(Z));
        assert_eq!(kh_cube(&closure(3, &[-1, 2]), Z).unwrap(), HomologyTable::unknot(Z));
    }

    #[test]
    fn hopf_link() {
        let h = kh_cube(&closure(2, &[1, 1]), Z).unwrap();
        let mut t = HomologyTable::new(Z);
        for (i, j) in [(0, 0), (0, 2), (2, 4), (2, 6)] {
            t.add_free(i, j, 1);
        }
        assert_eq!(h, t);
    }

    #[test]
    fn trefoils() {
        assert_eq!(kh_cube(&closure(2, &[1, 1, 1]), Z).unwrap(), right_trefoil());
        assert_eq!(kh_cube(&closure(2, &[-1, -1, -1]), Z).unwrap(), right_trefoil().dualize().unwrap());
    }

    #[test]
    fn figure_eight() {
        let h = kh_cube(&closure(3, &[-1, 2, -1, 2]), Z).unwrap();
        let mut t = HomologyTable::new(Z);
        for (i, j) in [(-2, -5), (-1, -1), (0, -1), (0, 1), (1, 1), (2, 5)] {
            t.add_free(i, j, 1);
        }
        t.add_torsion(-1, -3, 2, 1, 1);
        t.add_torsion(2, 3, 2, 1, 1);
        assert_eq!(h, t);
    }

    #[test]
    fn split_unknots() {
        let h = kh_cube(&closure(3, &[]), Z).unwrap();
        let two = HomologyTable::unknot(Z).split_union_unknot().split_union_unknot();
        assert_eq!(h, two);
        let h = kh_cube(&closure(3, &[1, 1]), Z).unwrap();
        assert_eq!(h, kh_cube(&closure(2, &[1, 1]), Z).unwrap().split_union_unknot());
    }

    #[test]
    fn independent_of_crossing_order() {
        let mut d = closure(3, &[1, -2, 1, 1, -2]);
        let h = kh_cube(&d, Z).unwrap();
        d.crossings.reverse();
        d.crossings.rotate_left(2);
        assert_eq!(kh_cube(&d, Z).unwrap(), h);
    }

    #[test]
    fn field_coefficients() {
        let h = kh_cube(&closure(2, &[1, 1, 1]), Coefficients::Prime(2)).unwrap();
        assert_eq!(h, right_trefoil().reduce_mod(2).unwrap());
    }

    #[test]
    fn size_cap() {
        let d = closure(2, &[1; 15]);
        assert!(matches!(kh_cube(&d, Z), Err(KhError::SizeCap(_))));
    }
}
