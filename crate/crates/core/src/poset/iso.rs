//! Order-isomorphism by backtracking.
//!
//! Candidates are pruned by a per-element signature (up-set size, down-set
//! size, cover degrees, height) that any isomorphism must preserve.

use super::{ElementId, Poset};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Signature {
    up: usize,
    down: usize,
    upper_covers: usize,
    lower_covers: usize,
    height: usize,
}

fn signatures(p: &Poset) -> Vec<Signature> {
    let heights = p.heights();
    let mut upper = vec![0; p.len()];
    let mut lower = vec![0; p.len()];
    for &(lo, hi) in p.covers() {
        upper[lo.index()] += 1;
        lower[hi.index()] += 1;
    }
    p.elements()
        .map(|a| Signature {
            up: p.up_count(a),
            down: p.down_count(a),
            upper_covers: upper[a.index()],
            lower_covers: lower[a.index()],
            height: heights[a.index()],
        })
        .collect()
}

/// True iff there is a bijection between the element sets that preserves and
/// reflects the order.
pub fn order_isomorphic(p: &Poset, q: &Poset) -> bool {
    find_isomorphism(p, q).is_some()
}

/// An isomorphism `p -> q`, indexed by `p` element.
pub fn find_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<ElementId>> {
    if p.len() != q.len()
        || p.covers().len() != q.covers().len()
        || p.comparable_count() != q.comparable_count()
    {
        return None;
    }
    let sp = signatures(p);
    let sq = signatures(q);
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }

    // Assign the most constrained elements first, bottom-up so that each new
    // element is usually comparable to something already placed.
    let mut order: Vec<usize> = (0..p.len()).collect();
    let class_size = |s: &Signature| sp.iter().filter(|t| *t == s).count();
    order.sort_by_key(|&i| (sp[i].height, class_size(&sp[i]), i));
    let candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&i| (0..q.len()).filter(|&j| sq[j] == sp[i]).collect())
        .collect();

    let mut image = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    if search(p, q, &order, &candidates, 0, &mut image, &mut used) {
        Some(image.into_iter().map(ElementId).collect())
    } else {
        None
    }
}

fn search(
    p: &Poset,
    q: &Poset,
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for &w in &candidates[depth] {
        if used[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let fu = image[u];
            p.le(ElementId(v), ElementId(u)) == q.le(ElementId(w), ElementId(fu))
                && p.le(ElementId(u), ElementId(v)) == q.le(ElementId(fu), ElementId(w))
        });
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if search(p, q, order, candidates, depth + 1, image, used) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn chain_vs_chain_and_antichain() {
        let c = Poset::chain(names(3));
        assert!(order_isomorphic(&c, &Poset::chain(names(3))));
        assert!(!order_isomorphic(&c, &Poset::antichain(names(3))));
    }

    #[test]
    fn same_signatures_different_shape() {
        // Three N shapes written with different ids, and a diamond.
        let n = Poset::from_covers(names(4), [(0, 2), (1, 2), (1, 3)]).unwrap();
        let other_n = Poset::from_covers(names(4), [(0, 2), (1, 3), (0, 3)]).unwrap();
        let relabeled = Poset::from_covers(names(4), [(3, 1), (2, 1), (2, 0)]).unwrap();
        assert!(order_isomorphic(&n, &relabeled));
        assert!(order_isomorphic(&n, &other_n));
        let diamond = Poset::from_covers(names(4), [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!order_isomorphic(&n, &diamond));
    }

    #[test]
    fn isomorphism_maps_are_order_preserving() {
        let p = Poset::from_covers(names(5), [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let q = Poset::from_covers(names(5), [(4, 3), (4, 1), (3, 0), (1, 0), (0, 2)]).unwrap();
        let f = find_isomorphism(&p, &q).unwrap();
        for a in p.elements() {
            for b in p.elements() {
                assert_eq!(p.le(a, b), q.le(f[a.index()], f[b.index()]));
            }
        }
    }
}
