//! Finite groups stored as complete multiplication tables.
//!
//! Elements are the indices `0..order`, with index 0 always the identity.
//! `table[i * order + j]` is the index of the product `i * j`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GroupError, Result};

/// Default cap on the order of any constructed group.
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// Groups up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;

/// Number of sampled triples for the associativity check above the limit.
pub const SAMPLED_ASSOC_TRIPLES: usize = 100_000;

/// Family metadata attached to constructed groups.
///
/// Dihedral and quaternion groups are indexed by their ORDER: `Dihedral(8)`
/// is the symmetry group of the square, `Dihedral(4)` the Klein four-group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion(usize),
    Symmetric(usize),
    Alternating(usize),
    Psl2(usize),
    Product,
    Extension,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic(n) => write!(f, "Z{n}"),
            Family::Dihedral(n) => write!(f, "D{n}"),
            Family::Quaternion(n) => write!(f, "Q{n}"),
            Family::Symmetric(n) => write!(f, "S{n}"),
            Family::Alternating(n) => write!(f, "A{n}"),
            Family::Psl2(p) => write!(f, "PSL(2,{p})"),
            Family::Product => write!(f, "product"),
            Family::Extension => write!(f, "extension"),
        }
    }
}

#[derive(Clone)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
    labels: Vec<String>,
    family: Option<Family>,
    gens: OnceLock<Vec<u32>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("family", &self.family)
            .finish_non_exhaustive()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for Group {}

impl Group {
    /// Builds a group from a table that is already known to be valid.
    pub(crate) fn from_raw(order: usize, table: Vec<u32>, labels: Vec<String>, family: Option<Family>) -> Group {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for i in 0..order {
            let row = &table[i * order..(i + 1) * order];
            inverses[i] = row.iter().position(|&x| x == 0).expect("row contains identity") as u32;
        }
        let mut orders = vec![1u32; order];
        for (x, slot) in orders.iter_mut().enumerate() {
            let mut k = 1;
            let mut y = x;
            while y != 0 {
                y = table[y * order + x] as usize;
                k += 1;
            }
            *slot = k;
        }
        Group {
            order,
            table,
            inverses,
            orders,
            labels,
            family,
            gens: OnceLock::new(),
        }
    }

    /// Validating constructor for an arbitrary table (rows are products `i * j`).
    pub fn from_table(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Group> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::BadTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for row in &rows {
            if row.len() != order {
                return Err(GroupError::BadTable("table is not square".into()));
            }
            for &x in row {
                if x >= order {
                    return Err(GroupError::BadTable(format!("entry {x} out of range")));
                }
                table.push(x as u32);
            }
        }
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(_) => return Err(GroupError::BadTable("label count mismatch".into())),
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        check_latin(order, &table)?;
        let g = Group::from_raw(order, table, labels, None);
        g.validate(0)?;
        Ok(g)
    }

    /// Builds a group by closing a list of concrete elements under `mul`.
    ///
    /// `elements` must contain every element exactly once, identity first.
    pub(crate) fn from_elements<T, F, L>(elements: Vec<T>, mul: F, label: L, family: Option<Family>) -> Group
    where
        T: Hash + Eq + Clone,
        F: Fn(&T, &T) -> T,
        L: Fn(&T) -> String,
    {
        let order = elements.len();
        let index: HashMap<T, u32> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, x)| (x, i as u32))
            .collect();
        let mut table = Vec::with_capacity(order * order);
        for a in &elements {
            for b in &elements {
                table.push(index[&mul(a, b)]);
            }
        }
        let labels = elements.iter().map(label).collect();
        Group::from_raw(order, table, labels, family)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `g a g^-1`.
    #[inline]
    pub fn conj(&self, g: u32, a: u32) -> u32 {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn pow(&self, a: u32, k: usize) -> u32 {
        let k = k % self.orders[a as usize] as usize;
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Least `k >= 1` with `x^k` the identity.
    #[inline]
    pub fn element_order(&self, x: u32) -> usize {
        self.orders[x as usize] as usize
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn label(&self, x: u32) -> &str {
        &self.labels[x as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// Row `i` of the table as element indices.
    pub fn row(&self, i: u32) -> &[u32] {
        let i = i as usize;
        &self.table[i * self.order..(i + 1) * self.order]
    }

    pub fn check_element(&self, x: u32) -> Result<()> {
        if (x as usize) < self.order {
            Ok(())
        } else {
            Err(GroupError::BadElement {
                index: x as usize,
                order: self.order,
            })
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generating_set();
        gens.iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o as usize == self.order)
    }

    /// Multiset of element orders as `order -> count`.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &o in &self.orders {
            *m.entry(o as usize).or_insert(0) += 1;
        }
        m
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| crate::arith::lcm(acc, o as usize))
    }

    /// Checks the group axioms. Associativity is exhaustive up to
    /// [`EXHAUSTIVE_ASSOC_LIMIT`] and sampled with `seed` above it.
    pub fn validate(&self, seed: u64) -> Result<()> {
        let n = self.order;
        for j in 0..n as u32 {
            if self.mul(0, j) != j || self.mul(j, 0) != j {
                return Err(GroupError::BadTable("index 0 is not the identity".into()));
            }
        }
        check_latin(n, &self.table)?;
        for x in 0..n as u32 {
            let y = self.inv(x);
            if self.mul(x, y) != 0 || self.mul(y, x) != 0 {
                return Err(GroupError::BadTable(format!("element {x} has no two-sided inverse")));
            }
        }
        let assoc = |a: u32, b: u32, c: u32| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    for c in 0..n as u32 {
                        if !assoc(a, b, c) {
                            return Err(GroupError::BadTable(format!("({a}{b}){c} != {a}({b}{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let a = rng.gen_range(0..n) as u32;
                let b = rng.gen_range(0..n) as u32;
                let c = rng.gen_range(0..n) as u32;
                if !assoc(a, b, c) {
                    return Err(GroupError::BadTable(format!("({a}{b}){c} != {a}({b}{c})")));
                }
            }
        }
        Ok(())
    }

    /// Returns an isomorphic copy where old element `x` becomes `perm[x]`.
    /// `perm` must fix 0.
    pub fn relabel(&self, perm: &[u32]) -> Result<Group> {
        let n = self.order;
        if perm.len() != n || perm[0] != 0 {
            return Err(GroupError::ParamOutOfRange(
                "relabeling must be a permutation fixing 0".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p as usize >= n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(GroupError::ParamOutOfRange("relabeling is not a permutation".into()));
            }
        }
        let mut table = vec![0u32; n * n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a] as usize] = self.labels[a].clone();
            for b in 0..n {
                let c = self.table[a * n + b] as usize;
                table[perm[a] as usize * n + perm[b] as usize] = perm[c];
            }
        }
        Ok(Group::from_raw(n, table, labels, self.family))
    }

    /// A small generating set, chosen greedily: first an element of maximal
    /// order, then repeatedly the element whose adjunction yields the largest
    /// subgroup. Ties go to the least index. Empty for the trivial group.
    pub fn generating_set(&self) -> &[u32] {
        self.gens.get_or_init(|| greedy_generators(self))
    }

    /// Breadth-first spanning tree of the Cayley graph for `gens`:
    /// returns elements in discovery order with `(parent, generator slot)`.
    /// Only reaches `<gens>`.
    pub(crate) fn cayley_tree(&self, gens: &[u32]) -> Vec<(u32, u32, u32)> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![(0u32, u32::MAX, u32::MAX)];
        let mut head = 0;
        while head < out.len() {
            let x = out[head].0;
            head += 1;
            for (slot, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push((y, x, slot as u32));
                }
            }
        }
        out
    }
}

fn check_latin(n: usize, table: &[u32]) -> Result<()> {
    let mut seen = vec![0usize; n];
    let mut stamp = 0usize;
    for i in 0..n {
        stamp += 1;
        for j in 0..n {
            let x = table[i * n + j] as usize;
            if seen[x] == stamp {
                return Err(GroupError::BadTable(format!("row {i} is not a permutation")));
            }
            seen[x] = stamp;
        }
    }
    for j in 0..n {
        stamp += 1;
        for i in 0..n {
            let x = table[i * n + j] as usize;
            if seen[x] == stamp {
                return Err(GroupError::BadTable(format!("column {j} is not a permutation")));
            }
            seen[x] = stamp;
        }
    }
    Ok(())
}

/// Closure of `gens` under multiplication, as a membership bitmap and the
/// member list in discovery order. Stops early and returns `None` when
/// `reject` fires on a newly found element.
pub(crate) fn closure_with<F: Fn(u32) -> bool>(g: &Group, gens: &[u32], reject: F) -> Option<(Vec<bool>, Vec<u32>)> {
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut members = vec![0u32];
    let mut head = 0;
    while head < members.len() {
        let x = members[head];
        head += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y as usize] {
                if reject(y) {
                    return None;
                }
                inside[y as usize] = true;
                members.push(y);
            }
        }
    }
    Some((inside, members))
}

pub(crate) fn closure(g: &Group, gens: &[u32]) -> (Vec<bool>, Vec<u32>) {
    closure_with(g, gens, |_| false).expect("closure without rejection always completes")
}

fn greedy_generators(g: &Group) -> Vec<u32> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    let first = (0..n as u32)
        .max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)))
        .expect("nonempty");
    let mut gens = vec![first];
    let (mut inside, mut members) = closure(g, &gens);
    while members.len() < n {
        // Elements of the same cyclic subgroup give the same join; only try
        // one generator per cyclic subgroup.
        let mut tried_cyclic = vec![false; n];
        let mut best: Option<(usize, u32)> = None;
        for x in 0..n as u32 {
            if inside[x as usize] || tried_cyclic[x as usize] {
                continue;
            }
            let mut y = x;
            loop {
                tried_cyclic[y as usize] = true;
                y = g.mul(y, x);
                if y == x {
                    break;
                }
            }
            let mut candidate = gens.clone();
            candidate.push(x);
            let size = closure(g, &candidate).1.len();
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, x));
                if size == n {
                    break;
                }
            }
        }
        let (_, x) = best.expect("a proper subgroup has an element outside it");
        gens.push(x);
        let c = closure(g, &gens);
        inside = c.0;
        members = c.1;
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Group {
        let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Group::from_table(rows, None).unwrap()
    }

    #[test]
    fn cyclic_table_is_valid() {
        let g = z(12);
        assert_eq!(g.order(), 12);
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(1), 12);
        assert_eq!(g.element_order(8), 3);
        assert_eq!(g.inv(5), 7);
        assert!(g.is_cyclic() && g.is_abelian());
        assert_eq!(g.generating_set(), &[1]);
    }

    #[test]
    fn rejects_non_latin_and_non_associative_tables() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(Group::from_table(bad, None).is_err());
        // A Latin square with identity that is a loop but not a group (order 5).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(Group::from_table(loop5, None), Err(GroupError::BadTable(_))));
    }

    #[test]
    fn relabel_requires_identity_fixed() {
        let g = z(4);
        assert!(g.relabel(&[1, 0, 2, 3]).is_err());
        let h = g.relabel(&[0, 3, 2, 1]).unwrap();
        h.validate(1).unwrap();
        assert_eq!(h.mul(3, 3), 2);
    }
}
