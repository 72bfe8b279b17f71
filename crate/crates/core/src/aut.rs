//! Automorphism groups: brute force for any small group, the affine `(t, s)`
//! model for dihedral groups, and the inner/outer split.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, units};
use crate::error::{GroupError, Result};
use crate::group::{Family, Group};
use crate::iso::{order_candidates, HomExtender};

/// Groups above this order are refused by [`automorphism_group`].
pub const DEFAULT_AUT_CAP: usize = 120;

/// A permutation of element indices that respects the multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Automorphism {
    map: Vec<u32>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Automorphism {
        Automorphism {
            map: (0..order as u32).collect(),
        }
    }

    pub fn from_map(g: &Group, map: Vec<u32>) -> Result<Automorphism> {
        let a = Automorphism { map };
        if a.is_automorphism_of(g) {
            Ok(a)
        } else {
            Err(GroupError::InvalidAction("map is not an automorphism".into()))
        }
    }

    pub(crate) fn from_map_unchecked(map: Vec<u32>) -> Automorphism {
        Automorphism { map }
    }

    /// Conjugation `x -> c x c^-1`.
    pub fn conjugation(g: &Group, c: u32) -> Automorphism {
        Automorphism {
            map: g.elements().map(|x| g.conj(c, x)).collect(),
        }
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = vec![0u32; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y as usize] = x as u32;
        }
        Automorphism { map }
    }

    pub fn pow(&self, k: usize) -> Automorphism {
        let mut acc = Automorphism::identity(self.map.len());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut a = self.clone();
        while !a.is_identity() {
            a = a.compose(self);
            k += 1;
        }
        k
    }

    pub fn is_automorphism_of(&self, g: &Group) -> bool {
        let n = g.order();
        if self.map.len() != n || self.map.first() != Some(&0) {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in &self.map {
            if y as usize >= n || std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        g.elements().all(|a| {
            g.elements()
                .all(|b| self.apply(g.mul(a, b)) == g.mul(self.apply(a), self.apply(b)))
        })
    }
}

/// Every automorphism of `g`, sorted lexicographically by map (identity first).
pub fn automorphism_group(g: &Group, cap: usize) -> Result<Vec<Automorphism>> {
    if g.order() > cap {
        return Err(GroupError::CapExceeded { order: g.order(), cap });
    }
    if g.order() == 1 {
        return Ok(vec![Automorphism::identity(1)]);
    }
    let gens = g.generating_set().to_vec();
    let ext = HomExtender::new(g, g, gens);
    let candidates = order_candidates(g, g, ext.gens(), true);
    let mut out = Vec::new();
    ext.for_each(&candidates, true, |_, map| {
        out.push(Automorphism { map });
        ControlFlow::Continue(())
    });
    out.sort();
    Ok(out)
}

/// Automorphisms of `g` using closed forms where the family is known
/// (cyclic: units; dihedral of order >= 6: the affine model), brute force
/// otherwise.
pub fn automorphisms(g: &Group, cap: usize) -> Result<Vec<Automorphism>> {
    let mut out: Vec<Automorphism> = match g.family() {
        Some(Family::Cyclic(n)) => units(n)
            .into_iter()
            .map(|u| crate::families::cyclic_multiplier(n, u))
            .collect(),
        Some(Family::Dihedral(order)) if order >= 6 => {
            let n = order / 2;
            DihedralAut::all(n)?.into_iter().map(|a| a.to_automorphism()).collect()
        }
        _ => return automorphism_group(g, cap),
    };
    out.sort();
    Ok(out)
}

/// The automorphism of the dihedral group of order `2n` sending `a^i` to
/// `a^{s i}` and `a^i b` to `a^{s i + t} b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralAut {
    pub n: usize,
    pub t: usize,
    pub s: usize,
}

impl DihedralAut {
    pub fn new(n: usize, t: i64, s: i64) -> Result<DihedralAut> {
        if n < 3 {
            return Err(GroupError::ParamOutOfRange(format!(
                "the affine dihedral model needs n >= 3, got {n}"
            )));
        }
        let t = t.rem_euclid(n as i64) as usize;
        let s = s.rem_euclid(n as i64) as usize;
        if gcd(s, n) != 1 {
            return Err(GroupError::ParamOutOfRange(format!("{s} is not a unit mod {n}")));
        }
        Ok(DihedralAut { n, t, s })
    }

    pub fn identity(n: usize) -> Result<DihedralAut> {
        DihedralAut::new(n, 0, 1)
    }

    /// All `n * phi(n)` pairs, sorted by `(t, s)`.
    pub fn all(n: usize) -> Result<Vec<DihedralAut>> {
        if n < 3 {
            return Err(GroupError::ParamOutOfRange(format!(
                "the affine dihedral model needs n >= 3, got {n}"
            )));
        }
        let us = units(n);
        Ok((0..n)
            .flat_map(|t| us.iter().map(move |&s| DihedralAut { n, t, s }))
            .collect())
    }

    /// `(t1, s1) ∘ (t2, s2) = (t1 + s1 t2, s1 s2)`.
    pub fn compose(&self, other: &DihedralAut) -> DihedralAut {
        assert_eq!(self.n, other.n);
        let n = self.n;
        DihedralAut {
            n,
            t: (self.t + self.s * other.t) % n,
            s: (self.s * other.s) % n,
        }
    }

    pub fn to_automorphism(&self) -> Automorphism {
        let n = self.n;
        let map = (0..2 * n)
            .map(|x| {
                let (i, e) = (x % n, x / n);
                if e == 0 {
                    ((self.s * i) % n) as u32
                } else {
                    ((self.s * i + self.t) % n + n) as u32
                }
            })
            .collect();
        Automorphism::from_map_unchecked(map)
    }

    /// Recovers `(t, s)` from an automorphism of the dihedral group of order `2n`.
    pub fn from_automorphism(n: usize, a: &Automorphism) -> Result<DihedralAut> {
        if n < 3 || a.map().len() != 2 * n {
            return Err(GroupError::ParamOutOfRange(
                "not an automorphism of D_2n, n >= 3".into(),
            ));
        }
        let s = a.apply(1) as usize;
        let b_image = a.apply(n as u32) as usize;
        if s >= n || b_image < n {
            return Err(GroupError::InvalidAction(
                "map does not preserve the rotation subgroup".into(),
            ));
        }
        let d = DihedralAut::new(n, (b_image - n) as i64, s as i64)?;
        if d.to_automorphism() == *a {
            Ok(d)
        } else {
            Err(GroupError::InvalidAction("map is not affine".into()))
        }
    }
}

/// Inner automorphisms and one representative per outer class.
#[derive(Debug, Clone)]
pub struct InnOut {
    /// Distinct conjugation maps, sorted.
    pub inner: Vec<Automorphism>,
    /// Lexicographically least automorphism of each coset of `Inn`, sorted.
    pub outer_reps: Vec<Automorphism>,
}

pub fn inner_automorphisms(g: &Group) -> Vec<Automorphism> {
    let set: BTreeSet<Automorphism> = g.elements().map(|c| Automorphism::conjugation(g, c)).collect();
    set.into_iter().collect()
}

pub fn inn_out(g: &Group, cap: usize) -> Result<InnOut> {
    let all = automorphisms(g, cap)?;
    let inner = inner_automorphisms(g);
    let mut covered: BTreeSet<Automorphism> = BTreeSet::new();
    let mut outer_reps = Vec::new();
    // `all` is sorted, so the first uncovered element of a coset is its least.
    for a in &all {
        if covered.contains(a) {
            continue;
        }
        outer_reps.push(a.clone());
        for i in &inner {
            covered.insert(a.compose(i));
        }
    }
    Ok(InnOut { inner, outer_reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;
    use crate::families::family;
    use crate::subgroup::center;

    #[test]
    fn aut_orders() {
        let count = |f| automorphism_group(&family(f), DEFAULT_AUT_CAP).unwrap().len();
        assert_eq!(count(Family::Dihedral(4)), 6);
        assert_eq!(count(Family::Alternating(4)), 24);
        assert_eq!(count(Family::Cyclic(8)), 4);
        assert_eq!(count(Family::Cyclic(1)), 1);
        assert_eq!(count(Family::Quaternion(8)), 24);
        assert_eq!(count(Family::Symmetric(4)), 24);
        assert_eq!(count(Family::Alternating(5)), 120);
    }

    #[test]
    fn cap_is_enforced() {
        let s5 = family(Family::Symmetric(5));
        assert!(automorphism_group(&s5, 100).is_err());
    }

    #[test]
    fn aut_group_closed() {
        let g = family(Family::Dihedral(8));
        let auts = automorphism_group(&g, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(auts[0], Automorphism::identity(8));
        let set: BTreeSet<_> = auts.iter().cloned().collect();
        for a in &auts {
            assert!(a.is_automorphism_of(&g));
            assert!(set.contains(&a.inverse()));
            for b in &auts {
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn structured_dihedral_model() {
        let n = 6;
        let g = family(Family::Dihedral(2 * n));
        let structured: BTreeSet<_> = DihedralAut::all(n)
            .unwrap()
            .iter()
            .map(|d| d.to_automorphism())
            .collect();
        let brute: BTreeSet<_> = automorphism_group(&g, DEFAULT_AUT_CAP).unwrap().into_iter().collect();
        assert_eq!(structured.len(), 12);
        assert_eq!(structured, brute);
        assert!(DihedralAut::identity(n).unwrap().to_automorphism().is_identity());
        assert!(DihedralAut::new(2, 0, 1).is_err());
        assert!(DihedralAut::new(6, 0, 2).is_err());
    }

    #[test]
    fn dihedral_composition_law() {
        let n = 10;
        let g = family(Family::Dihedral(2 * n));
        let all = DihedralAut::all(n).unwrap();
        for x in &all {
            for y in all.iter().step_by(7) {
                let lhs = x.compose(y).to_automorphism();
                let rhs = x.to_automorphism().compose(&y.to_automorphism());
                assert_eq!(lhs, rhs);
                // checked on the generators a and b
                assert_eq!(lhs.apply(1), rhs.apply(1));
                assert_eq!(lhs.apply(n as u32), rhs.apply(n as u32));
            }
            assert_eq!(DihedralAut::from_automorphism(n, &x.to_automorphism()).unwrap(), *x);
            assert!(x.to_automorphism().is_automorphism_of(&g));
        }
    }

    #[test]
    fn inner_and_outer() {
        let s4 = family(Family::Symmetric(4));
        let io = inn_out(&s4, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(io.inner.len(), 24);
        assert_eq!(io.outer_reps.len(), 1);

        let a5 = family(Family::Alternating(5));
        assert_eq!(inn_out(&a5, DEFAULT_AUT_CAP).unwrap().outer_reps.len(), 2);

        for n in [3usize, 5, 7, 9, 25] {
            let d = family(Family::Dihedral(2 * n));
            let io = inn_out(&d, 1000).unwrap();
            assert_eq!(io.outer_reps.len(), euler_phi(n) / 2, "n = {n}");
            assert_eq!(io.inner.len() * center(&d).len(), 2 * n);
        }
    }
}
