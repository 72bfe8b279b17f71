//! Extensions `1 -> N -> G -> Z_p -> 1` by a cyclic group of prime order.
//!
//! Every such extension is determined by a lift `t` of the generator of
//! `Z_p`: conjugation by `t` gives an automorphism `alpha` of `N` and
//! `z = t^p` lies in `N`, with `alpha^p = conj_z` and `alpha(z) = z`.
//! Changing the lift to `c t` replaces the pair by
//! `(inn(c) alpha, c alpha(c) ... alpha^{p-1}(c) z)`, which is exactly the
//! equivalence relation on extensions; enumeration dedups along those orbits.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::is_prime;
use crate::aut::{automorphisms, Automorphism, DEFAULT_AUT_CAP};
use crate::cohomology::{factor_set_group, AbelianModule, FactorSet};
use crate::error::{GroupError, Result};
use crate::families::{compatible_pair, cyclic_extension, family};
use crate::group::{Family, Group, DEFAULT_ORDER_CAP};
use crate::iso::{is_isomorphic, HomExtender};

/// Kernel, quotient prime and optionally a prescribed action. The action is
/// read as its outer class: any automorphism differing from it by an inner
/// one is accepted.
#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    pub kernel: Arc<Group>,
    pub p: usize,
    pub prescribed: Option<Automorphism>,
    pub cap: usize,
    pub aut_cap: usize,
}

impl ExtensionProblem {
    pub fn new(kernel: Arc<Group>, p: usize) -> ExtensionProblem {
        ExtensionProblem {
            kernel,
            p,
            prescribed: None,
            cap: DEFAULT_ORDER_CAP,
            aut_cap: DEFAULT_AUT_CAP,
        }
    }

    pub fn with_action(mut self, action: Automorphism) -> ExtensionProblem {
        self.prescribed = Some(action);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> ExtensionProblem {
        self.cap = cap;
        self
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(GroupError::ParamOutOfRange(format!("{} is not prime", self.p)));
        }
        let order = self.kernel.order() * self.p;
        if order > self.cap {
            return Err(GroupError::CapExceeded { order, cap: self.cap });
        }
        if let Some(a) = &self.prescribed {
            if !a.is_automorphism_of(&self.kernel) {
                return Err(GroupError::InvalidAction(
                    "prescribed action is not an automorphism".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Extension {
    total: Group,
    kernel: Arc<Group>,
    embedding: Vec<u32>,
    projection: Vec<u32>,
    p: usize,
    lift: u32,
    alpha: Automorphism,
    z: u32,
}

impl Extension {
    /// The extension on `N x Z_p` defined by a compatible pair.
    pub fn from_pair(kernel: Arc<Group>, p: usize, alpha: Automorphism, z: u32, cap: usize) -> Result<Extension> {
        let total = cyclic_extension(&kernel, p, &alpha, z, cap)?;
        let n = kernel.order();
        Ok(Extension {
            embedding: (0..n as u32).collect(),
            projection: (0..n * p).map(|x| (x / n) as u32).collect(),
            lift: n as u32,
            total,
            kernel,
            p,
            alpha,
            z,
        })
    }

    /// The extension of an abelian kernel defined by a factor set.
    pub fn from_factor_set(module: &AbelianModule, f: &FactorSet, cap: usize) -> Result<Extension> {
        let total = factor_set_group(module, f, cap)?;
        let n = module.group().order();
        let m = f.m;
        Extension::from_parts(
            Arc::new(module.group().clone()),
            total,
            (0..n as u32).collect(),
            (0..n * m).map(|x| (x / n) as u32).collect(),
            m,
        )
    }

    /// Validating constructor from an arbitrary total group, an embedding
    /// of the kernel and a projection onto `Z_p` (values `0..p`).
    pub fn from_parts(
        kernel: Arc<Group>,
        total: Group,
        embedding: Vec<u32>,
        projection: Vec<u32>,
        p: usize,
    ) -> Result<Extension> {
        let n = kernel.order();
        let bad = |msg: &str| Err(GroupError::InvalidAction(msg.to_string()));
        if total.order() != n * p || embedding.len() != n || projection.len() != total.order() {
            return bad("sizes do not match |total| = |kernel| * p");
        }
        if embedding.iter().any(|&x| x as usize >= total.order()) || projection.iter().any(|&x| x as usize >= p) {
            return bad("embedding or projection out of range");
        }
        for a in kernel.elements() {
            for b in kernel.elements() {
                if embedding[kernel.mul(a, b) as usize] != total.mul(embedding[a as usize], embedding[b as usize]) {
                    return bad("embedding is not a homomorphism");
                }
            }
        }
        for x in total.elements() {
            for y in total.elements() {
                let lhs = projection[total.mul(x, y) as usize] as usize;
                if lhs != (projection[x as usize] as usize + projection[y as usize] as usize) % p {
                    return bad("projection is not a homomorphism");
                }
            }
        }
        let mut image = vec![false; total.order()];
        for &e in &embedding {
            if std::mem::replace(&mut image[e as usize], true) {
                return bad("embedding is not injective");
            }
        }
        if total
            .elements()
            .any(|x| image[x as usize] != (projection[x as usize] == 0))
        {
            return bad("image of the embedding is not the kernel of the projection");
        }
        let Some(lift) = total.elements().find(|&x| projection[x as usize] == 1 % p as u32) else {
            return bad("projection is not surjective");
        };
        let mut back = vec![u32::MAX; total.order()];
        for (k, &e) in embedding.iter().enumerate() {
            back[e as usize] = k as u32;
        }
        let alpha = Automorphism::from_map_unchecked(
            kernel
                .elements()
                .map(|k| back[total.conj(lift, embedding[k as usize]) as usize])
                .collect(),
        );
        let z = back[total.pow(lift, p) as usize];
        Ok(Extension {
            total,
            kernel,
            embedding,
            projection,
            p,
            lift,
            alpha,
            z,
        })
    }

    pub fn total(&self) -> &Group {
        &self.total
    }

    pub fn kernel(&self) -> &Group {
        &self.kernel
    }

    pub fn embedding(&self) -> &[u32] {
        &self.embedding
    }

    pub fn projection(&self) -> &[u32] {
        &self.projection
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// The element with projection 1 that defines `alpha` and `z`.
    pub fn lift(&self) -> u32 {
        self.lift
    }

    pub fn alpha(&self) -> &Automorphism {
        &self.alpha
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    /// Exactness, normality of the kernel image and the compatible-pair laws.
    pub fn satisfies_invariants(&self) -> bool {
        let t = &self.total;
        let image: HashSet<u32> = self.embedding.iter().copied().collect();
        let normal = t
            .elements()
            .all(|g| self.embedding.iter().all(|&k| image.contains(&t.conj(g, k))));
        let exact = t
            .elements()
            .all(|x| image.contains(&x) == (self.projection[x as usize] == 0));
        normal
            && exact
            && t.order() == self.kernel.order() * self.p
            && self.alpha.is_automorphism_of(&self.kernel)
            && compatible_pair(&self.kernel, self.p, &self.alpha, self.z)
    }
}

/// True iff some element of order `p` maps to the generator of `Z_p`.
pub fn is_split(e: &Extension) -> bool {
    let t = e.total();
    t.elements()
        .any(|x| e.projection[x as usize] == 1 && t.pow(x, e.p) == 0)
}

/// Whether an isomorphism of totals exists that is the identity on the
/// kernel and induces the identity on `Z_p`.
pub fn equivalent(a: &Extension, b: &Extension) -> Result<bool> {
    if a.p != b.p || *a.kernel != *b.kernel {
        return Err(GroupError::KernelMismatch);
    }
    let kgens = a.kernel.generating_set();
    let mut gens: Vec<u32> = kgens.iter().map(|&k| a.embedding[k as usize]).collect();
    gens.push(a.lift);
    let ext = HomExtender::new(&a.total, &b.total, gens);
    let mut candidates: Vec<Vec<u32>> = kgens.iter().map(|&k| vec![b.embedding[k as usize]]).collect();
    let lift_order = a.total.element_order(a.lift);
    candidates.push(
        b.total
            .elements()
            .filter(|&y| b.projection[y as usize] == 1 && b.total.element_order(y) == lift_order)
            .collect(),
    );
    let mut found = false;
    ext.for_each(&candidates, true, |_, _| {
        found = true;
        ControlFlow::Break(())
    });
    Ok(found)
}

/// One extension per equivalence class, ordered by the least `(alpha, z)`
/// pair of each class (so the trivial action with `z = 1` comes first).
pub fn enumerate_extensions(prob: &ExtensionProblem) -> Result<Vec<Extension>> {
    prob.validate()?;
    let pairs = class_representatives(prob)?;
    pairs
        .into_iter()
        .map(|(alpha, z)| Extension::from_pair(prob.kernel.clone(), prob.p, alpha, z, prob.cap))
        .collect()
}

fn class_representatives(prob: &ExtensionProblem) -> Result<Vec<(Automorphism, u32)>> {
    let n = &*prob.kernel;
    let p = prob.p;
    let conj: Vec<Automorphism> = n.elements().map(|c| Automorphism::conjugation(n, c)).collect();
    let mut by_inner: HashMap<&Automorphism, Vec<u32>> = HashMap::new();
    for (c, a) in conj.iter().enumerate() {
        by_inner.entry(a).or_default().push(c as u32);
    }
    // The dedup orbits never leave an inner coset, so a prescribed action
    // only needs its own coset.
    let auts: Vec<Automorphism> = match &prob.prescribed {
        Some(a) => {
            let coset: HashSet<Automorphism> = conj.iter().map(|i| i.compose(a)).collect();
            coset.into_iter().collect()
        }
        None => automorphisms(n, prob.aut_cap)?,
    };

    let mut pairs: Vec<(Automorphism, u32)> = Vec::new();
    for alpha in &auts {
        let power = alpha.pow(p);
        if let Some(zs) = by_inner.get(&power) {
            for &z in zs {
                if alpha.apply(z) == z {
                    pairs.push((alpha.clone(), z));
                }
            }
        }
    }
    pairs.sort();

    let index: HashMap<(&Automorphism, u32), usize> =
        pairs.iter().enumerate().map(|(i, (a, z))| ((a, *z), i)).collect();
    let mut covered = vec![false; pairs.len()];
    let mut reps = Vec::new();
    for i in 0..pairs.len() {
        if covered[i] {
            continue;
        }
        let (alpha, z) = &pairs[i];
        reps.push((alpha.clone(), *z));
        for c in n.elements() {
            let moved = conj[c as usize].compose(alpha);
            let mut shift = 0u32;
            let mut x = c;
            for _ in 0..p {
                shift = n.mul(shift, x);
                x = alpha.apply(x);
            }
            let key = (&moved, n.mul(shift, *z));
            let j = *index.get(&key).expect("orbit stays inside the compatible pairs");
            covered[j] = true;
        }
    }
    Ok(reps)
}

/// For each extension, the index of the first extension in the slice whose
/// total group is isomorphic to it.
pub fn iso_classes(exts: &[Extension]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(exts.len());
    let mut profiles: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(exts.len());
    for (i, e) in exts.iter().enumerate() {
        let profile = e.total.order_profile();
        let class = (0..i)
            .filter(|&j| out[j] == j && profiles[j] == profile)
            .find(|&j| is_isomorphic(&exts[j].total, &e.total))
            .unwrap_or(i);
        out.push(class);
        profiles.push(profile);
    }
    out
}

/// Place of a group in the taxonomy of finite rotation groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Cyclic(usize),
    Dihedral(usize),
    A4,
    S4,
    A5,
    Other,
}

impl Classification {
    /// The tag without parameters, e.g. `"Dihedral"`.
    pub fn kind(&self) -> &'static str {
        match self {
            Classification::Cyclic(_) => "Cyclic",
            Classification::Dihedral(_) => "Dihedral",
            Classification::A4 => "A4",
            Classification::S4 => "S4",
            Classification::A5 => "A5",
            Classification::Other => "Other",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Cyclic(n) => write!(f, "Cyclic({n})"),
            Classification::Dihedral(n) => write!(f, "Dihedral({n})"),
            other => f.write_str(other.kind()),
        }
    }
}

impl std::str::FromStr for Classification {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let param = |prefix: &str| -> Option<usize> { s.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok() };
        match s {
            "A4" => Ok(Classification::A4),
            "S4" => Ok(Classification::S4),
            "A5" => Ok(Classification::A5),
            "Other" => Ok(Classification::Other),
            _ => param("Cyclic(")
                .map(Classification::Cyclic)
                .or_else(|| param("Dihedral(").map(Classification::Dihedral))
                .ok_or_else(|| format!("unknown classification {s:?}")),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Classification {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn reference(f: Family) -> &'static Group {
    static A4: OnceLock<Group> = OnceLock::new();
    static S4: OnceLock<Group> = OnceLock::new();
    static A5: OnceLock<Group> = OnceLock::new();
    let cell = match f {
        Family::Alternating(4) => &A4,
        Family::Symmetric(4) => &S4,
        Family::Alternating(5) => &A5,
        _ => unreachable!("no cached reference for {f}"),
    };
    cell.get_or_init(|| family(f))
}

pub fn classify(g: &Group) -> Classification {
    let order = g.order();
    if g.element_orders().iter().any(|&o| o as usize == order) {
        return Classification::Cyclic(order);
    }
    if order.is_multiple_of(2) && is_dihedral(g) {
        return Classification::Dihedral(order / 2);
    }
    let candidate = match order {
        12 => Some((Family::Alternating(4), Classification::A4)),
        24 => Some((Family::Symmetric(4), Classification::S4)),
        60 => Some((Family::Alternating(5), Classification::A5)),
        _ => None,
    };
    match candidate {
        Some((f, c)) if is_isomorphic(g, reference(f)) => c,
        _ => Classification::Other,
    }
}

/// An element `a` of order `|G|/2` together with an involution outside
/// `<a>` inverting it. For `|G|/2 >= 3` every element of that order lies in
/// the rotation subgroup of a dihedral group, so the first one is enough.
fn is_dihedral(g: &Group) -> bool {
    let n = g.order() / 2;
    let Some(a) = g.elements().find(|&x| g.element_order(x) == n) else {
        return false;
    };
    let mut in_a = vec![false; g.order()];
    let mut x = 0;
    for _ in 0..n {
        in_a[x as usize] = true;
        x = g.mul(x, a);
    }
    let a_inv = g.inv(a);
    g.elements()
        .any(|b| !in_a[b as usize] && g.element_order(b) == 2 && g.conj(b, a) == a_inv)
}
