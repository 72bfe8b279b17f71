//! The catalog of forbidden subgroups (obstruction kernels, types 0 to 6)
//! and the two structural rejection rules, plus a scanner that finds any of
//! them inside a group.
//!
//! By default the scanner only looks for the minimal members of each
//! family, since every member contains one of them: `Z_2m x Z_2` contains
//! `Z_4 x Z_2` or `Z_2q x Z_2` for an odd prime `q | m`, likewise for the
//! generalized quaternion groups, and the type 6 groups with even `t` are
//! all isomorphic to `D_2n x Z_2`, which contains `D_8 x Z_2` or
//! `D_4q x Z_2`.

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{gcd, is_prime, p_part, prime_divisors, sqrt_minus_one};
use crate::aut::{Automorphism, DihedralAut};
use crate::error::{GroupError, Result};
use crate::extension::{classify, Classification};
use crate::families::{cyclic_extension, cyclic_multiplier, direct_product, family};
use crate::group::{closure_with, Family, Group, DEFAULT_ORDER_CAP};
use crate::iso::{find_embedding, is_isomorphic};
use crate::subgroup::{conjugacy_class_reps, generated_subgroup, subgroup_generators, sylow_subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OkDescriptor {
    /// `(Z_p + Z_q) x| Z_2`, trivial on `Z_p`, inversion on `Z_q`.
    Type0 { p: usize, q: usize },
    /// `Z_2m x Z_2`.
    Type1 { m: usize },
    /// `Z_q x| Z_{2^{k+1}}` with the generator acting by inversion.
    Type2 { q: usize, k: u32 },
    /// Generalized quaternion group of order `4m`.
    Type3 { m: usize },
    /// `Z_{2^k} x| Z_2` acting by `2^{k-1} + sign`.
    Type4 { k: u32, sign: i8 },
    /// `Z_p x| Z_4` acting by a square root `n` of -1 mod p.
    Type5 { p: usize, n: usize },
    /// `D_2n x| Z_2` acting by the affine map `(t, -1)`.
    Type6 { n: usize, t: usize },
    /// A Sylow 2-subgroup that is neither cyclic nor dihedral.
    RuleT2,
    /// A non-cyclic subgroup of odd order.
    RuleROdd,
}

impl OkDescriptor {
    /// Type 6 descriptor with `t` reduced mod `n`.
    pub fn type6(n: usize, t: i64) -> Result<OkDescriptor> {
        if n == 0 {
            return Err(GroupError::InvalidDescriptor("Type6 needs n >= 4".into()));
        }
        let d = OkDescriptor::Type6 {
            n,
            t: t.rem_euclid(n as i64) as usize,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            OkDescriptor::Type0 { .. } => "Type0",
            OkDescriptor::Type1 { .. } => "Type1",
            OkDescriptor::Type2 { .. } => "Type2",
            OkDescriptor::Type3 { .. } => "Type3",
            OkDescriptor::Type4 { .. } => "Type4",
            OkDescriptor::Type5 { .. } => "Type5",
            OkDescriptor::Type6 { .. } => "Type6",
            OkDescriptor::RuleT2 => "RuleT2",
            OkDescriptor::RuleROdd => "RuleROdd",
        }
    }

    pub fn is_rule(&self) -> bool {
        matches!(self, OkDescriptor::RuleT2 | OkDescriptor::RuleROdd)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(GroupError::InvalidDescriptor(msg));
        match *self {
            OkDescriptor::Type0 { p, q } => {
                if p == q || p == 2 || q == 2 || !is_prime(p) || !is_prime(q) {
                    return fail(format!("{self}: p and q must be distinct odd primes"));
                }
            }
            OkDescriptor::Type1 { m } | OkDescriptor::Type3 { m } => {
                if m < 2 {
                    return fail(format!("{self}: m must be >= 2"));
                }
            }
            OkDescriptor::Type2 { q, k } => {
                if q == 2 || !is_prime(q) || k < 1 {
                    return fail(format!("{self}: q must be an odd prime and k >= 1"));
                }
            }
            OkDescriptor::Type4 { k, sign } => {
                if k < 3 || (sign != 1 && sign != -1) {
                    return fail(format!("{self}: k must be >= 3 and sign +1 or -1"));
                }
            }
            OkDescriptor::Type5 { p, n } => {
                if !is_prime(p) || p % 4 != 1 || n == 0 || n >= p || (n * n + 1) % p != 0 {
                    return fail(format!("{self}: p must be a prime = 1 mod 4 and n^2 = -1 mod p"));
                }
            }
            OkDescriptor::Type6 { n, t } => {
                if n < 4 || n % 2 != 0 || t >= n || t % 2 != 0 {
                    return fail(format!("{self}: n must be even >= 4 and t even, reduced mod n"));
                }
            }
            OkDescriptor::RuleT2 | OkDescriptor::RuleROdd => {}
        }
        Ok(())
    }

    /// Order of the described group; `None` for the rules.
    pub fn group_order(&self) -> Option<usize> {
        Some(match *self {
            OkDescriptor::Type0 { p, q } => 2 * p * q,
            OkDescriptor::Type1 { m } | OkDescriptor::Type3 { m } => 4 * m,
            OkDescriptor::Type2 { q, k } => q << (k + 1),
            OkDescriptor::Type4 { k, .. } => 1 << (k + 1),
            OkDescriptor::Type5 { p, .. } => 4 * p,
            OkDescriptor::Type6 { n, .. } => 4 * n,
            OkDescriptor::RuleT2 | OkDescriptor::RuleROdd => return None,
        })
    }
}

impl fmt::Display for OkDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OkDescriptor::Type0 { p, q } => write!(f, "Type0(p={p},q={q})"),
            OkDescriptor::Type1 { m } => write!(f, "Type1(m={m})"),
            OkDescriptor::Type2 { q, k } => write!(f, "Type2(q={q},k={k})"),
            OkDescriptor::Type3 { m } => write!(f, "Type3(m={m})"),
            OkDescriptor::Type4 { k, sign } => write!(f, "Type4(k={k},sign={})", if sign > 0 { "+1" } else { "-1" }),
            OkDescriptor::Type5 { p, n } => write!(f, "Type5(p={p},n={n})"),
            OkDescriptor::Type6 { n, t } => write!(f, "Type6(n={n},t={t})"),
            OkDescriptor::RuleT2 => f.write_str("RuleT2"),
            OkDescriptor::RuleROdd => f.write_str("RuleROdd"),
        }
    }
}

impl FromStr for OkDescriptor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<OkDescriptor> {
        let bad = || GroupError::InvalidDescriptor(format!("cannot parse {s:?}"));
        match s {
            "RuleT2" => return Ok(OkDescriptor::RuleT2),
            "RuleROdd" => return Ok(OkDescriptor::RuleROdd),
            _ => {}
        }
        let (kind, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut params: HashMap<&str, i64> = HashMap::new();
        for part in body.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            params.insert(k.trim(), v.trim().parse().map_err(|_| bad())?);
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(bad);
        let u = |k: &str| -> Result<usize> { usize::try_from(get(k)?).map_err(|_| bad()) };
        let d = match kind {
            "Type0" => OkDescriptor::Type0 { p: u("p")?, q: u("q")? },
            "Type1" => OkDescriptor::Type1 { m: u("m")? },
            "Type2" => OkDescriptor::Type2 {
                q: u("q")?,
                k: u32::try_from(get("k")?).map_err(|_| bad())?,
            },
            "Type3" => OkDescriptor::Type3 { m: u("m")? },
            "Type4" => OkDescriptor::Type4 {
                k: u32::try_from(get("k")?).map_err(|_| bad())?,
                sign: i8::try_from(get("sign")?).map_err(|_| bad())?,
            },
            "Type5" => OkDescriptor::Type5 { p: u("p")?, n: u("n")? },
            "Type6" => return OkDescriptor::type6(u("n")?, get("t")?),
            _ => return Err(bad()),
        };
        d.validate()?;
        Ok(d)
    }
}

impl Serialize for OkDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OkDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The group named by a descriptor.
pub fn build_ok(d: &OkDescriptor, cap: usize) -> Result<Group> {
    d.validate()?;
    let order = d
        .group_order()
        .ok_or_else(|| GroupError::InvalidDescriptor(format!("{d} is a rule, not a group")))?;
    if order > cap {
        return Err(GroupError::CapExceeded { order, cap });
    }
    let cyc = |n| family(Family::Cyclic(n));
    Ok(match *d {
        OkDescriptor::Type0 { p, q } => {
            let kernel = direct_product(&cyc(p), &cyc(q), cap)?;
            // index a * q + b holds (a, b)
            let map = (0..p * q).map(|x| ((x / q) * q + (q - x % q) % q) as u32).collect();
            cyclic_extension(&kernel, 2, &Automorphism::from_map_unchecked(map), 0, cap)?
        }
        OkDescriptor::Type1 { m } => direct_product(&cyc(2 * m), &cyc(2), cap)?,
        OkDescriptor::Type2 { q, k } => cyclic_extension(&cyc(q), 1 << (k + 1), &cyclic_multiplier(q, q - 1), 0, cap)?,
        OkDescriptor::Type3 { m } => family(Family::Quaternion(4 * m)),
        OkDescriptor::Type4 { k, sign } => {
            let n = 1usize << k;
            let u = (n / 2) as i64 + sign as i64;
            cyclic_extension(&cyc(n), 2, &cyclic_multiplier(n, u as usize), 0, cap)?
        }
        OkDescriptor::Type5 { p, n } => cyclic_extension(&cyc(p), 4, &cyclic_multiplier(p, n), 0, cap)?,
        OkDescriptor::Type6 { n, t } => {
            let alpha = DihedralAut::new(n, t as i64, -1)?.to_automorphism();
            cyclic_extension(&family(Family::Dihedral(2 * n)), 2, &alpha, 0, cap)?
        }
        OkDescriptor::RuleT2 | OkDescriptor::RuleROdd => unreachable!("rules rejected above"),
    })
}

fn cached_ok(d: &OkDescriptor) -> Arc<Group> {
    static CACHE: OnceLock<Mutex<HashMap<OkDescriptor, Arc<Group>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("cache lock").get(d) {
        return g.clone();
    }
    let g = Arc::new(build_ok(d, usize::MAX).expect("scan only builds valid descriptors"));
    cache.lock().expect("cache lock").entry(*d).or_insert(g).clone()
}

/// A descriptor found inside a group, with generators of the offending
/// subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub descriptor: OkDescriptor,
    pub witness: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Report every descriptor present instead of the first per kind, and
    /// try every parameter value rather than only the minimal ones.
    pub exhaustive: bool,
    pub cap: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            exhaustive: false,
            cap: DEFAULT_ORDER_CAP,
        }
    }
}

fn odd_primes(order: usize) -> Vec<usize> {
    prime_divisors(order).into_iter().filter(|&p| p != 2).collect()
}

/// Descriptors whose group order divides `order`, grouped by kind in scan
/// order.
pub fn candidate_descriptors(order: usize, exhaustive: bool) -> Vec<Vec<OkDescriptor>> {
    let two = p_part(order, 2);
    let odd = odd_primes(order);
    let divides = |k: usize| order.is_multiple_of(k);

    let type0 = odd
        .iter()
        .flat_map(|&p| odd.iter().map(move |&q| (p, q)))
        .filter(|&(p, q)| p != q && divides(2 * p * q))
        .map(|(p, q)| OkDescriptor::Type0 { p, q })
        .collect();

    let small_m: Vec<usize> = if exhaustive {
        (2..=order / 4).filter(|&m| divides(4 * m)).collect()
    } else {
        std::iter::once(2)
            .chain(odd.iter().copied())
            .filter(|&m| divides(4 * m))
            .collect()
    };
    let type1 = small_m.iter().map(|&m| OkDescriptor::Type1 { m }).collect();
    let type3 = small_m.iter().map(|&m| OkDescriptor::Type3 { m }).collect();

    let mut type2 = Vec::new();
    for &q in &odd {
        let mut k = 1;
        while (1usize << (k + 1)) <= two {
            type2.push(OkDescriptor::Type2 { q, k });
            k += 1;
        }
    }

    let mut type4 = Vec::new();
    let mut k = 3;
    while (1usize << (k + 1)) <= two {
        type4.push(OkDescriptor::Type4 { k, sign: 1 });
        type4.push(OkDescriptor::Type4 { k, sign: -1 });
        k += 1;
    }

    let mut type5 = Vec::new();
    for &p in odd.iter().filter(|&&p| p % 4 == 1 && divides(4 * p)) {
        let n = sqrt_minus_one(p).expect("p = 1 mod 4 has a square root of -1");
        type5.push(OkDescriptor::Type5 { p, n });
        if exhaustive {
            type5.push(OkDescriptor::Type5 { p, n: p - n });
        }
    }
    type5.sort();

    let type6 = if exhaustive {
        (4..=order / 4)
            .step_by(2)
            .filter(|&n| divides(4 * n))
            .flat_map(|n| (0..n).step_by(2).map(move |t| OkDescriptor::Type6 { n, t }))
            .collect()
    } else {
        std::iter::once(4)
            .chain(odd.iter().map(|&q| 2 * q))
            .filter(|&n| divides(4 * n))
            .map(|n| OkDescriptor::Type6 { n, t: 0 })
            .collect()
    };

    vec![type0, type1, type2, type3, type4, type5, type6]
}

/// Every obstruction present in `g`: embedded catalog groups first (types
/// 0 to 6, in parameter order), then the two rules.
pub fn scan(g: &Group, opts: &ScanOptions) -> Result<Vec<Finding>> {
    if g.order() > opts.cap {
        return Err(GroupError::CapExceeded {
            order: g.order(),
            cap: opts.cap,
        });
    }
    if g.is_cyclic() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for kind in candidate_descriptors(g.order(), opts.exhaustive) {
        for d in kind {
            let k = cached_ok(&d);
            if let Some(witness) = find_embedding(&k, g) {
                out.push(Finding { descriptor: d, witness });
                if !opts.exhaustive {
                    break;
                }
            }
        }
    }
    out.extend(rule_t2(g));
    out.extend(rule_rodd(g));
    Ok(out)
}

/// Sylow 2-subgroup that is neither cyclic nor dihedral.
fn rule_t2(g: &Group) -> Option<Finding> {
    if !g.order().is_multiple_of(8) {
        // groups of order <= 4 are cyclic or the Klein group
        return None;
    }
    let s = sylow_subgroup(g, 2).ok()?;
    match classify(&s.to_group(g)) {
        Classification::Cyclic(_) | Classification::Dihedral(_) => None,
        _ => Some(Finding {
            descriptor: OkDescriptor::RuleT2,
            witness: subgroup_generators(g, &s),
        }),
    }
}

/// Every non-cyclic group contains a minimal non-cyclic subgroup; those of
/// odd order are `Z_p x Z_p` or `Z_p x| Z_{q^k}`, generated by an element
/// of prime order and one of prime-power order. The first element can be
/// taken up to conjugacy.
fn rule_rodd(g: &Group) -> Option<Finding> {
    let odd_part = g.order() >> g.order().trailing_zeros();
    // a minimal one needs p^2 | |G|, or primes q | p - 1 both dividing |G|
    let odd = odd_primes(g.order());
    let possible = odd.iter().any(|&p| odd_part.is_multiple_of(p * p))
        || odd.iter().any(|&p| odd.iter().any(|&q| p != q && (p - 1) % q == 0));
    if !possible {
        return None;
    }
    let prime_power = |o: usize| o > 1 && o % 2 == 1 && prime_divisors(o).len() == 1;
    let xs: Vec<u32> = conjugacy_class_reps(g)
        .into_iter()
        .filter(|&x| is_prime(g.element_order(x)) && g.element_order(x) != 2)
        .collect();
    let ys: Vec<u32> = g.elements().filter(|&y| prime_power(g.element_order(y))).collect();
    for &x in &xs {
        for &y in &ys {
            if gcd(g.element_order(x), g.element_order(y)) == 1 && g.mul(x, y) == g.mul(y, x) {
                // commuting elements of coprime order generate a cyclic group
                continue;
            }
            let size = Cell::new(1usize);
            let closed = closure_with(g, &[x, y], |e| {
                size.set(size.get() + 1);
                g.element_order(e).is_multiple_of(2) || size.get() > odd_part
            });
            let Some((_, members)) = closed else { continue };
            let n = members.len();
            if members.iter().all(|&m| g.element_order(m) != n) {
                return Some(Finding {
                    descriptor: OkDescriptor::RuleROdd,
                    witness: vec![x, y],
                });
            }
        }
    }
    None
}

/// Re-checks a finding against `g` from scratch.
pub fn revalidate(g: &Group, f: &Finding) -> bool {
    let Ok(sub) = generated_subgroup(g, &f.witness) else {
        return false;
    };
    let h = sub.to_group(g);
    match f.descriptor {
        OkDescriptor::RuleT2 => {
            sub.len() == p_part(g.order(), 2)
                && !matches!(classify(&h), Classification::Cyclic(_) | Classification::Dihedral(_))
        }
        OkDescriptor::RuleROdd => sub.len() % 2 == 1 && !h.is_cyclic(),
        d => d.validate().is_ok() && is_isomorphic(&h, &cached_ok(&d)),
    }
}
