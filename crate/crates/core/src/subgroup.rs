//! Subgroups and the structural queries on them: generation, normality,
//! centre, quotients, Sylow subgroups and conjugacy classes.

use crate::arith::{is_prime, p_part};
use crate::error::{GroupError, Result};
use crate::group::{closure, Group};

/// A subgroup, stored as the sorted list of member indices of its parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<u32>,
}

impl Subgroup {
    /// Checks closure, identity and inverses before accepting `members`.
    pub fn new(g: &Group, mut members: Vec<u32>) -> Result<Subgroup> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotSubgroup);
        }
        for &x in &members {
            g.check_element(x)?;
        }
        let mut inside = vec![false; g.order()];
        for &x in &members {
            inside[x as usize] = true;
        }
        for &a in &members {
            if !inside[g.inv(a) as usize] {
                return Err(GroupError::NotSubgroup);
            }
            for &b in &members {
                if !inside[g.mul(a, b) as usize] {
                    return Err(GroupError::NotSubgroup);
                }
            }
        }
        Ok(Subgroup {
            parent_order: g.order(),
            members,
        })
    }

    pub(crate) fn from_sorted(parent_order: usize, members: Vec<u32>) -> Subgroup {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { parent_order, members }
    }

    pub fn whole(g: &Group) -> Subgroup {
        Subgroup::from_sorted(g.order(), g.elements().collect())
    }

    pub fn trivial(g: &Group) -> Subgroup {
        Subgroup::from_sorted(g.order(), vec![0])
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    fn belongs_to(&self, g: &Group) -> Result<()> {
        if self.parent_order == g.order() {
            Ok(())
        } else {
            Err(GroupError::NotSubgroup)
        }
    }

    /// The subgroup as a standalone group. Member `members()[i]` becomes
    /// element `i`; the identity stays at 0.
    pub fn to_group(&self, g: &Group) -> Group {
        let n = self.members.len();
        let index = |x: u32| self.members.binary_search(&x).expect("closed subgroup") as u32;
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.members {
            for &b in &self.members {
                table.push(index(g.mul(a, b)));
            }
        }
        let labels = self.members.iter().map(|&x| g.label(x).to_string()).collect();
        Group::from_raw(n, table, labels, None)
    }
}

/// Smallest subgroup containing `gens`.
pub fn generated_subgroup(g: &Group, gens: &[u32]) -> Result<Subgroup> {
    for &x in gens {
        g.check_element(x)?;
    }
    let mut members = closure(g, gens).1;
    members.sort_unstable();
    Ok(Subgroup::from_sorted(g.order(), members))
}

pub fn is_normal(g: &Group, h: &Subgroup) -> Result<bool> {
    h.belongs_to(g)?;
    Ok(g.generating_set()
        .iter()
        .all(|&s| h.members.iter().all(|&x| h.contains(g.conj(s, x)))))
}

pub fn center(g: &Group) -> Subgroup {
    let gens = g.generating_set();
    let members = g
        .elements()
        .filter(|&z| gens.iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .collect();
    Subgroup::from_sorted(g.order(), members)
}

/// `{g : g H g^-1 = H}`.
pub fn normalizer(g: &Group, h: &Subgroup) -> Result<Subgroup> {
    h.belongs_to(g)?;
    let hgens = subgroup_generators(g, h);
    let members = g
        .elements()
        .filter(|&x| hgens.iter().all(|&s| h.contains(g.conj(x, s))))
        .collect();
    Ok(Subgroup::from_sorted(g.order(), members))
}

/// A generating set of `h` expressed in the parent's indices.
pub fn subgroup_generators(g: &Group, h: &Subgroup) -> Vec<u32> {
    h.to_group(g)
        .generating_set()
        .iter()
        .map(|&i| h.members[i as usize])
        .collect()
}

/// The quotient `G/N` on cosets. Coset of the identity is element 0; cosets
/// are numbered by their least member.
pub fn quotient_group(g: &Group, n: &Subgroup) -> Result<Group> {
    if !is_normal(g, n)? {
        return Err(GroupError::NotNormal);
    }
    let (coset_of, reps) = cosets(g, n);
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(coset_of[g.mul(a, b) as usize]);
        }
    }
    let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
    Ok(Group::from_raw(k, table, labels, None))
}

/// Left cosets `xN`: coset id per element and the least representative of each.
pub(crate) fn cosets(g: &Group, n: &Subgroup) -> (Vec<u32>, Vec<u32>) {
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &m in n.members() {
            coset_of[g.mul(x, m) as usize] = id;
        }
    }
    (coset_of, reps)
}

/// A Sylow `p`-subgroup: grown from the trivial group by adjoining the
/// least-index `p`-element of the normaliser not yet inside, then replaced by
/// the conjugate with the lexicographically least member list.
pub fn sylow_subgroup(g: &Group, p: usize) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(GroupError::ParamOutOfRange(format!("{p} is not prime")));
    }
    let target = p_part(g.order(), p);
    let mut current = Subgroup::trivial(g);
    while current.len() < target {
        let norm = normalizer(g, &current)?;
        let x = norm
            .members()
            .iter()
            .copied()
            .find(|&x| !current.contains(x) && crate::arith::is_power_of(g.element_order(x), p))
            .expect("a non-Sylow p-subgroup has a p-element in its normaliser outside it");
        let mut gens = subgroup_generators(g, &current);
        gens.push(x);
        current = generated_subgroup(g, &gens)?;
    }
    let mut best = current.members.clone();
    for c in g.elements() {
        let mut conj: Vec<u32> = current.members.iter().map(|&x| g.conj(c, x)).collect();
        conj.sort_unstable();
        if conj < best {
            best = conj;
        }
    }
    Ok(Subgroup::from_sorted(g.order(), best))
}

/// Conjugacy class id for every element; classes are numbered in order of
/// their least member.
pub fn conjugacy_classes(g: &Group) -> Vec<u32> {
    let gens = g.generating_set();
    let mut class = vec![u32::MAX; g.order()];
    let mut next = 0;
    for x in g.elements() {
        if class[x as usize] != u32::MAX {
            continue;
        }
        class[x as usize] = next;
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for &s in gens {
                let c = g.conj(s, y);
                if class[c as usize] == u32::MAX {
                    class[c as usize] = next;
                    stack.push(c);
                }
            }
        }
        next += 1;
    }
    class
}

/// Least member of each conjugacy class, ascending.
pub fn conjugacy_class_reps(g: &Group) -> Vec<u32> {
    let class = conjugacy_classes(g);
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        let c = class[x as usize] as usize;
        if !seen[c] {
            seen[c] = true;
            reps.push(x);
        }
    }
    reps
}
