//! Second cohomology of a cyclic group with coefficients in a finite abelian
//! group, written multiplicatively through the coefficient group's table.
//!
//! The production route is the periodic resolution: `H^2(Z_m, A)` is the
//! fixed submodule modulo the image of the norm map. [`cocycle_classes`]
//! enumerates normalized factor sets directly and is kept as an oracle.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::aut::Automorphism;
use crate::error::{GroupError, Result};
use crate::group::Group;

/// Default cap on search nodes for [`cocycle_classes`].
pub const DEFAULT_COCYCLE_BUDGET: usize = 5_000_000;

/// A finite abelian group with an automorphism standing for the action of a
/// generator of the cyclic group.
#[derive(Debug, Clone)]
pub struct AbelianModule {
    group: Group,
    action: Automorphism,
}

impl AbelianModule {
    pub fn new(group: Group, action: Automorphism) -> Result<AbelianModule> {
        if !group.is_abelian() {
            return Err(GroupError::InvalidAction("coefficient group must be abelian".into()));
        }
        if !action.is_automorphism_of(&group) {
            return Err(GroupError::InvalidAction("action is not an automorphism".into()));
        }
        Ok(AbelianModule { group, action })
    }

    pub fn trivial(group: Group) -> Result<AbelianModule> {
        let id = Automorphism::identity(group.order());
        AbelianModule::new(group, id)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn action(&self) -> &Automorphism {
        &self.action
    }

    fn check_quotient(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(GroupError::ParamOutOfRange("quotient order must be >= 1".into()));
        }
        let ord = self.action.order();
        if !m.is_multiple_of(ord) {
            return Err(GroupError::InvalidAction(format!(
                "action has order {ord}, which does not divide {m}"
            )));
        }
        Ok(())
    }

    /// `a * phi(a) * ... * phi^{m-1}(a)`.
    pub fn norm(&self, m: usize, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..m {
            acc = self.group.mul(acc, x);
            x = self.action.apply(x);
        }
        acc
    }
}

/// Invariant factors `d1 | d2 | ...` of a finite abelian group; empty for
/// the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianInvariants(pub Vec<usize>);

impl AbelianInvariants {
    pub fn order(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    /// Recovers the invariant factors from the multiset of element orders,
    /// which determines a finite abelian group.
    pub fn from_order_census(census: &BTreeMap<usize, usize>) -> AbelianInvariants {
        let total: usize = census.values().sum();
        // For each prime p: the exponents e_i of the cyclic p-parts, from
        // |A[p^k]| = p^{sum min(k, e_i)}.
        let mut columns: Vec<Vec<usize>> = Vec::new();
        for (p, _) in factorize(total) {
            let mut prev_log = 0u32;
            let mut k = 1u32;
            let mut at_least: Vec<usize> = Vec::new();
            loop {
                let pk = p.pow(k);
                let count: usize = census.iter().filter(|(&o, _)| pk % o == 0).map(|(_, &c)| c).sum();
                let mut log = 0u32;
                let mut c = count;
                while c > 1 {
                    c /= p;
                    log += 1;
                }
                let gained = (log - prev_log) as usize;
                if gained == 0 {
                    break;
                }
                at_least.push(gained);
                prev_log = log;
                k += 1;
            }
            // at_least[k-1] = number of cyclic factors of exponent >= k
            let count = at_least.first().copied().unwrap_or(0);
            let mut powers = vec![1usize; count];
            for (slot, power) in powers.iter_mut().enumerate() {
                for (kk, &n) in at_least.iter().enumerate() {
                    if n > slot {
                        *power = p.pow(kk as u32 + 1);
                    }
                }
            }
            powers.sort_unstable();
            columns.push(powers);
        }
        let width = columns.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1usize; width];
        for col in &columns {
            let offset = width - col.len();
            for (i, &q) in col.iter().enumerate() {
                factors[offset + i] *= q;
            }
        }
        AbelianInvariants(factors.into_iter().filter(|&d| d > 1).collect())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

pub fn abelian_invariants(g: &Group) -> Result<AbelianInvariants> {
    if !g.is_abelian() {
        return Err(GroupError::InvalidAction("group is not abelian".into()));
    }
    Ok(AbelianInvariants::from_order_census(&g.order_profile()))
}

/// Invariants of `big / small` for subgroups `small <= big` of an abelian
/// group, given as membership bitmaps.
fn quotient_invariants(a: &Group, big: &[u32], small: &[bool]) -> AbelianInvariants {
    let mut census = BTreeMap::new();
    let mut seen = vec![false; a.order()];
    for &x in big {
        if seen[x as usize] {
            continue;
        }
        for &s in big.iter().filter(|&&s| small[s as usize]) {
            seen[a.mul(x, s) as usize] = true;
        }
        let mut k = 1;
        let mut y = x;
        while !small[y as usize] {
            y = a.mul(y, x);
            k += 1;
        }
        *census.entry(k).or_insert(0) += 1;
    }
    AbelianInvariants::from_order_census(&census)
}

/// `H^2(Z_m, M)` as fixed points modulo norms.
pub fn h2_cyclic(m: usize, module: &AbelianModule) -> Result<AbelianInvariants> {
    module.check_quotient(m)?;
    let a = module.group();
    let fixed: Vec<u32> = a.elements().filter(|&x| module.action().apply(x) == x).collect();
    let mut norms = vec![false; a.order()];
    for x in a.elements() {
        norms[module.norm(m, x) as usize] = true;
    }
    Ok(quotient_invariants(a, &fixed, &norms))
}

/// A normalized 2-cocycle `f: Z_m x Z_m -> A`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorSet {
    pub m: usize,
    pub values: Vec<u32>,
}

impl FactorSet {
    pub fn zero(m: usize) -> FactorSet {
        FactorSet {
            m,
            values: vec![0; m * m],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.values[i * self.m + j]
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.m).all(|i| self.get(0, i) == 0 && self.get(i, 0) == 0)
    }

    /// `phi^a(f(b,c)) f(a,b+c) = f(a+b,c) f(a,b)` for all triples.
    pub fn is_cocycle(&self, module: &AbelianModule) -> bool {
        let m = self.m;
        let g = module.group();
        let powers: Vec<Automorphism> = (0..m).map(|i| module.action().pow(i)).collect();
        (0..m).all(|a| {
            (0..m).all(|b| {
                (0..m).all(|c| {
                    let lhs = g.mul(powers[a].apply(self.get(b, c)), self.get(a, (b + c) % m));
                    let rhs = g.mul(self.get((a + b) % m, c), self.get(a, b));
                    lhs == rhs
                })
            })
        })
    }
}

/// The group on `A x Z_m` with `(a,i)(b,j) = (a * phi^i(b) * f(i,j), i+j)`.
/// Element `(a, i)` sits at index `a + |A| * i`.
pub fn factor_set_group(module: &AbelianModule, f: &FactorSet, cap: usize) -> Result<Group> {
    let m = f.m;
    let a = module.group();
    let n = a.order();
    let order = n * m;
    if order > cap {
        return Err(GroupError::CapExceeded { order, cap });
    }
    module.check_quotient(m)?;
    if !f.is_normalized() || !f.is_cocycle(module) {
        return Err(GroupError::InvalidAction("not a normalized 2-cocycle".into()));
    }
    let powers: Vec<Automorphism> = (0..m).map(|i| module.action().pow(i)).collect();
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (ax, i) = ((x % n) as u32, x / n);
        for y in 0..order {
            let (ay, j) = ((y % n) as u32, y / n);
            let v = a.mul(a.mul(ax, powers[i].apply(ay)), f.get(i, j));
            table.push(v + (n * ((i + j) % m)) as u32);
        }
    }
    let labels = (0..order)
        .map(|x| format!("({},{})", a.label((x % n) as u32), x / n))
        .collect();
    Ok(Group::from_raw(order, table, labels, None))
}

/// One normalized factor set per cohomology class, found by exhaustive
/// search. Classes are represented by their lexicographically least member.
pub fn cocycle_classes(m: usize, module: &AbelianModule) -> Result<Vec<FactorSet>> {
    cocycle_classes_with_budget(m, module, DEFAULT_COCYCLE_BUDGET)
}

pub fn cocycle_classes_with_budget(m: usize, module: &AbelianModule, budget: usize) -> Result<Vec<FactorSet>> {
    module.check_quotient(m)?;
    let cocycles = enumerate_cocycles(m, module, budget)?;
    let coboundaries = enumerate_coboundaries(m, module, budget)?;
    let g = module.group();
    let mut covered: HashSet<Vec<u32>> = HashSet::new();
    let mut reps = Vec::new();
    // cocycles come out in lexicographic order
    for f in cocycles {
        if covered.contains(&f) {
            continue;
        }
        for b in &coboundaries {
            covered.insert(f.iter().zip(b).map(|(&x, &y)| g.mul(x, y)).collect());
        }
        reps.push(FactorSet { m, values: f });
    }
    Ok(reps)
}

/// Every normalized cocycle, in lexicographic order of the value vector.
fn enumerate_cocycles(m: usize, module: &AbelianModule, budget: usize) -> Result<Vec<Vec<u32>>> {
    let g = module.group();
    let n = g.order() as u32;
    let powers: Vec<Automorphism> = (0..m).map(|i| module.action().pow(i)).collect();
    // free slots are (i, j) with 1 <= i, j < m, row-major
    let slots: Vec<usize> = (1..m).flat_map(|i| (1..m).map(move |j| i * m + j)).collect();
    let mut rank = vec![0usize; m * m];
    for (r, &s) in slots.iter().enumerate() {
        rank[s] = r + 1;
    }
    // identities become checkable once their last slot is assigned
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); slots.len() + 1];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let last = [b * m + c, a * m + (b + c) % m, ((a + b) % m) * m + c, a * m + b]
                    .iter()
                    .map(|&s| rank[s])
                    .max()
                    .unwrap_or(0);
                checks[last].push((a, b, c));
            }
        }
    }
    let holds = |f: &[u32], (a, b, c): (usize, usize, usize)| {
        let lhs = g.mul(powers[a].apply(f[b * m + c]), f[a * m + (b + c) % m]);
        let rhs = g.mul(f[((a + b) % m) * m + c], f[a * m + b]);
        lhs == rhs
    };
    let mut f = vec![0u32; m * m];
    let mut out = Vec::new();
    let mut nodes = 0usize;
    // iterative depth-first search over slot values
    let mut depth = 0usize;
    let mut next = vec![0u32; slots.len() + 1];
    if slots.is_empty() {
        if checks[0].iter().all(|&t| holds(&f, t)) {
            out.push(f);
        }
        return Ok(out);
    }
    loop {
        if next[depth] >= n {
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        }
        let v = next[depth];
        next[depth] += 1;
        f[slots[depth]] = v;
        nodes += 1;
        if nodes > budget {
            return Err(GroupError::BudgetExceeded(format!(
                "cocycle search over Z_{m} with |A| = {n} exceeded {budget} nodes"
            )));
        }
        if !checks[depth + 1].iter().all(|&t| holds(&f, t)) {
            continue;
        }
        if depth + 1 == slots.len() {
            out.push(f.clone());
        } else {
            depth += 1;
            next[depth] = 0;
        }
    }
    Ok(out)
}

/// All coboundaries `(dc)(i,j) = phi^i(c(j)) c(i) c(i+j)^-1` of normalized
/// 1-cochains, deduplicated.
fn enumerate_coboundaries(m: usize, module: &AbelianModule, budget: usize) -> Result<Vec<Vec<u32>>> {
    let g = module.group();
    let n = g.order();
    let count = (n as u128).checked_pow(m as u32 - 1).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(GroupError::BudgetExceeded(format!(
            "{count} one-cochains exceed the budget of {budget}"
        )));
    }
    let powers: Vec<Automorphism> = (0..m).map(|i| module.action().pow(i)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut c = vec![0u32; m];
    for code in 0..count as usize {
        let mut rest = code;
        for slot in c.iter_mut().skip(1) {
            *slot = (rest % n) as u32;
            rest /= n;
        }
        let mut f = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                let v = g.mul(powers[i].apply(c[j]), c[i]);
                f[i * m + j] = g.mul(v, g.inv(c[(i + j) % m]));
            }
        }
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic_multiplier, direct_product, family};
    use crate::group::Family;

    fn cyclic_module(n: usize, u: usize) -> AbelianModule {
        AbelianModule::new(family(Family::Cyclic(n)), cyclic_multiplier(n, u)).unwrap()
    }

    #[test]
    fn invariants_from_census() {
        let inv = |g: &Group| abelian_invariants(g).unwrap().0;
        assert_eq!(inv(&family(Family::Cyclic(12))), vec![12]);
        assert_eq!(inv(&family(Family::Cyclic(1))), Vec::<usize>::new());
        let z2 = family(Family::Cyclic(2));
        let z6 = family(Family::Cyclic(6));
        assert_eq!(inv(&direct_product(&z2, &z6, 100).unwrap()), vec![2, 6]);
        let z4 = family(Family::Cyclic(4));
        let g = direct_product(&direct_product(&z2, &z4, 100).unwrap(), &z6, 100).unwrap();
        assert_eq!(inv(&g), vec![2, 2, 12]);
        assert_eq!(AbelianInvariants(vec![2, 6]).to_string(), "Z2 x Z6");
        assert_eq!(AbelianInvariants(vec![]).to_string(), "0");
    }

    #[test]
    fn h2_closed_forms() {
        for n in [1usize, 3, 5, 7, 9] {
            for u in [1, 2 * n - 1] {
                let h = h2_cyclic(2, &cyclic_module(2 * n, u)).unwrap();
                assert_eq!(h.0, vec![2], "n = {n}, u = {u}");
            }
        }
        for k in [3u32, 4] {
            let q = 2usize.pow(k);
            for u in [q / 2 - 1, q / 2 + 1] {
                assert!(h2_cyclic(2, &cyclic_module(q, u)).unwrap().is_trivial());
            }
        }
        assert!(h2_cyclic(3, &cyclic_module(4, 1)).unwrap().is_trivial());
        assert_eq!(h2_cyclic(3, &cyclic_module(3, 1)).unwrap().0, vec![3]);
        assert!(h2_cyclic(2, &cyclic_module(5, 4)).is_ok());
        assert!(h2_cyclic(3, &cyclic_module(5, 4)).is_err());
    }

    #[test]
    fn oracle_counts() {
        assert_eq!(cocycle_classes(2, &cyclic_module(6, 1)).unwrap().len(), 2);
        assert_eq!(cocycle_classes(2, &cyclic_module(9, 8)).unwrap().len(), 1);
        assert_eq!(cocycle_classes(3, &cyclic_module(3, 1)).unwrap().len(), 3);
        for f in cocycle_classes(3, &cyclic_module(7, 2)).unwrap() {
            assert!(f.is_cocycle(&cyclic_module(7, 2)));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let e = cocycle_classes_with_budget(3, &cyclic_module(12, 1), 100);
        assert!(matches!(e, Err(GroupError::BudgetExceeded(_))));
    }

    #[test]
    fn zero_factor_set_gives_semidirect_product() {
        let module = cyclic_module(5, 4);
        let g = factor_set_group(&module, &FactorSet::zero(2), 100).unwrap();
        assert!(crate::iso::is_isomorphic(&g, &family(Family::Dihedral(10))));
        let reps = cocycle_classes(2, &cyclic_module(6, 1)).unwrap();
        let groups: Vec<Group> = reps
            .iter()
            .map(|f| factor_set_group(&cyclic_module(6, 1), f, 100).unwrap())
            .collect();
        assert!(groups.iter().any(|g| g.is_cyclic()));
        assert!(groups.iter().any(|g| !g.is_cyclic()));
    }
}
