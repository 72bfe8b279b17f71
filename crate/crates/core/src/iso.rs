//! Homomorphism search by backtracking over images of a generating set.
//!
//! A candidate assignment of generator images is extended along a
//! breadth-first spanning tree of the source's Cayley graph, then checked on
//! every remaining edge; a map that respects every edge `x -> x*g` is a
//! homomorphism. Isomorphism, embedding and automorphism enumeration are all
//! thin wrappers over this.

use std::ops::ControlFlow;

use crate::group::Group;
use crate::subgroup::{center, conjugacy_class_reps};

pub(crate) struct HomExtender<'a> {
    source: &'a Group,
    target: &'a Group,
    gens: Vec<u32>,
    tree: Vec<(u32, u32, u32)>,
    /// Orders of `g_i * g_j` and `g_i * g_j^-1` for `i < j`, used for pruning.
    pair_orders: Vec<Vec<(usize, usize)>>,
}

impl<'a> HomExtender<'a> {
    /// `gens` must generate `source`.
    pub(crate) fn new(source: &'a Group, target: &'a Group, gens: Vec<u32>) -> HomExtender<'a> {
        let tree = source.cayley_tree(&gens);
        assert_eq!(tree.len(), source.order(), "generators must generate the source group");
        let pair_orders = (0..gens.len())
            .map(|j| {
                (0..j)
                    .map(|i| {
                        let (a, b) = (gens[i], gens[j]);
                        (
                            source.element_order(source.mul(a, b)),
                            source.element_order(source.mul(a, source.inv(b))),
                        )
                    })
                    .collect()
            })
            .collect();
        HomExtender {
            source,
            target,
            gens,
            tree,
            pair_orders,
        }
    }

    pub(crate) fn gens(&self) -> &[u32] {
        &self.gens
    }

    /// Cheap necessary condition on the images chosen so far (`images.len()`
    /// generators), checking the newest one against all earlier ones.
    fn pair_ok(&self, images: &[u32], injective: bool) -> bool {
        let j = images.len() - 1;
        let t = self.target;
        let hj = images[j];
        (0..j).all(|i| {
            let (o1, o2) = self.pair_orders[j][i];
            let p1 = t.element_order(t.mul(images[i], hj));
            let p2 = t.element_order(t.mul(images[i], t.inv(hj)));
            if injective {
                p1 == o1 && p2 == o2
            } else {
                o1 % p1 == 0 && o2 % p2 == 0
            }
        })
    }

    /// Extends generator images to a full map if they define a homomorphism
    /// (and an injective one when `injective`).
    pub(crate) fn try_extend(&self, images: &[u32], injective: bool) -> Option<Vec<u32>> {
        let n = self.source.order();
        let t = self.target;
        let mut map = vec![0u32; n];
        for &(x, parent, slot) in &self.tree[1..] {
            map[x as usize] = t.mul(map[parent as usize], images[slot as usize]);
        }
        for x in 0..n as u32 {
            let mx = map[x as usize];
            for (slot, &g) in self.gens.iter().enumerate() {
                if map[self.source.mul(x, g) as usize] != t.mul(mx, images[slot]) {
                    return None;
                }
            }
        }
        if injective && map.iter().skip(1).any(|&y| y == 0) {
            return None;
        }
        Some(map)
    }

    /// Visits every homomorphism whose generator images are drawn from
    /// `candidates[i]`, in lexicographic order of the image tuple.
    pub(crate) fn for_each<F>(&self, candidates: &[Vec<u32>], injective: bool, mut visit: F)
    where
        F: FnMut(&[u32], Vec<u32>) -> ControlFlow<()>,
    {
        assert_eq!(candidates.len(), self.gens.len());
        let mut images = Vec::with_capacity(self.gens.len());
        let _ = self.recurse(candidates, injective, &mut images, &mut visit);
    }

    fn recurse<F>(
        &self,
        candidates: &[Vec<u32>],
        injective: bool,
        images: &mut Vec<u32>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[u32], Vec<u32>) -> ControlFlow<()>,
    {
        let level = images.len();
        if level == candidates.len() {
            if let Some(map) = self.try_extend(images, injective) {
                return visit(images, map);
            }
            return ControlFlow::Continue(());
        }
        for &h in &candidates[level] {
            images.push(h);
            if self.pair_ok(images, injective) {
                self.recurse(candidates, injective, images, visit)?;
            }
            images.pop();
        }
        ControlFlow::Continue(())
    }
}

/// Elements of `target` whose order matches (injective) or divides (general
/// homomorphism) the order of each source generator.
pub(crate) fn order_candidates(source: &Group, target: &Group, gens: &[u32], injective: bool) -> Vec<Vec<u32>> {
    gens.iter()
        .map(|&g| {
            let o = source.element_order(g);
            target
                .elements()
                .filter(|&h| {
                    let oh = target.element_order(h);
                    if injective {
                        oh == o
                    } else {
                        o.is_multiple_of(oh)
                    }
                })
                .collect()
        })
        .collect()
}

fn profiles_compatible(g: &Group, h: &Group) -> bool {
    g.order() == h.order()
        && g.order_profile() == h.order_profile()
        && g.is_abelian() == h.is_abelian()
        && center(g).len() == center(h).len()
}

/// An isomorphism `g -> h` as a full element map, if one exists.
pub fn isomorphism(g: &Group, h: &Group) -> Option<Vec<u32>> {
    if !profiles_compatible(g, h) {
        return None;
    }
    if g.order() == 1 {
        return Some(vec![0]);
    }
    let gens = g.generating_set().to_vec();
    let ext = HomExtender::new(g, h, gens);
    let mut candidates = order_candidates(g, h, ext.gens(), true);
    // The first image can be taken up to conjugacy in h.
    let reps = conjugacy_class_reps(h);
    candidates[0].retain(|x| reps.binary_search(x).is_ok());
    let mut found = None;
    ext.for_each(&candidates, true, |_, map| {
        found = Some(map);
        ControlFlow::Break(())
    });
    found
}

pub fn is_isomorphic(g: &Group, h: &Group) -> bool {
    isomorphism(g, h).is_some()
}

/// Images of `k.generating_set()` under some injective homomorphism
/// `k -> g`, i.e. a witness that `g` has a subgroup isomorphic to `k`.
/// The first image ranges over conjugacy-class representatives of `g`.
pub fn find_embedding(k: &Group, g: &Group) -> Option<Vec<u32>> {
    if !g.order().is_multiple_of(k.order()) {
        return None;
    }
    if k.order() == 1 {
        return Some(Vec::new());
    }
    if !k.is_abelian() && g.is_abelian() {
        return None;
    }
    let kp = k.order_profile();
    let gp = g.order_profile();
    if kp.iter().any(|(o, c)| gp.get(o).copied().unwrap_or(0) < *c) {
        return None;
    }
    let gens = k.generating_set().to_vec();
    let ext = HomExtender::new(k, g, gens);
    let mut candidates = order_candidates(k, g, ext.gens(), true);
    let reps = conjugacy_class_reps(g);
    candidates[0].retain(|x| reps.binary_search(x).is_ok());
    let mut found = None;
    ext.for_each(&candidates, true, |images, _| {
        found = Some(images.to_vec());
        ControlFlow::Break(())
    });
    found
}
