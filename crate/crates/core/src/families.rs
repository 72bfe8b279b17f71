//! Constructors for the concrete families (cyclic, dihedral, quaternion,
//! symmetric, alternating, PSL(2,p)) and for products and cyclic extensions.
//!
//! Conventions used everywhere in the crate:
//!
//! * dihedral group of order `2n`: elements `a^i b^e` at index `i + n*e`,
//!   with `a^n = b^2 = 1` and `b a b^-1 = a^-1`;
//! * quaternion group of order `4m`: elements `x^i y^e` at index `i + 2m*e`,
//!   with `x^{2m} = 1`, `y^2 = x^m`, `y x y^-1 = x^-1`;
//! * permutations compose right to left: `(s t)(k) = s(t(k))`.

use crate::arith::is_prime;
use crate::aut::Automorphism;
use crate::error::{GroupError, Result};
use crate::group::{Family, Group, DEFAULT_ORDER_CAP};

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(GroupError::CapExceeded { order, cap })
    } else {
        Ok(())
    }
}

/// Builds a member of a named family under the given order cap.
pub fn build_family(family: Family, cap: usize) -> Result<Group> {
    match family {
        Family::Cyclic(n) => {
            if n == 0 {
                return Err(GroupError::ParamOutOfRange("cyclic order must be >= 1".into()));
            }
            check_cap(n, cap)?;
            Ok(cyclic(n))
        }
        Family::Dihedral(order) => {
            if order < 2 || order % 2 != 0 {
                return Err(GroupError::ParamOutOfRange(format!(
                    "dihedral order must be even and >= 2, got {order}"
                )));
            }
            check_cap(order, cap)?;
            Ok(dihedral(order / 2))
        }
        Family::Quaternion(order) => {
            if order < 8 || order % 4 != 0 {
                return Err(GroupError::ParamOutOfRange(format!(
                    "quaternion order must be a multiple of 4 and >= 8, got {order}"
                )));
            }
            check_cap(order, cap)?;
            Ok(quaternion(order / 4))
        }
        Family::Symmetric(n) | Family::Alternating(n) => {
            if n == 0 || n > 6 {
                return Err(GroupError::ParamOutOfRange(format!("degree must be in 1..=6, got {n}")));
            }
            let even_only = matches!(family, Family::Alternating(_));
            let order = (1..=n).product::<usize>() / if even_only && n >= 2 { 2 } else { 1 };
            check_cap(order, cap)?;
            Ok(permutation_group(n, even_only))
        }
        Family::Psl2(p) => {
            if !is_prime(p) || p > 13 {
                return Err(GroupError::ParamOutOfRange(format!(
                    "PSL(2,p) needs a prime p <= 13, got {p}"
                )));
            }
            let order = if p == 2 { 6 } else { p * (p * p - 1) / 2 };
            check_cap(order, cap)?;
            Ok(psl2(p))
        }
        Family::Product | Family::Extension => Err(GroupError::ParamOutOfRange(
            "product/extension are metadata tags, not constructible families".into(),
        )),
    }
}

/// Shorthand for [`build_family`] with the default cap; panics on bad input.
/// Intended for tests and fixed internal constructions.
pub fn family(f: Family) -> Group {
    build_family(f, DEFAULT_ORDER_CAP).expect("valid family parameters")
}

pub(crate) fn cyclic(n: usize) -> Group {
    let table = (0..n).flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32)).collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    Group::from_raw(n, table, labels, Some(Family::Cyclic(n)))
}

pub(crate) fn dihedral(n: usize) -> Group {
    let order = 2 * n;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (i, e) = (x % n, x / n);
        for y in 0..order {
            let (j, f) = (y % n, y / n);
            let k = if e == 0 { (i + j) % n } else { (i + n - j) % n };
            table.push((k + n * ((e + f) % 2)) as u32);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (i, e) = (x % n, x / n);
            match (i, e) {
                (0, 0) => "e".to_string(),
                (0, _) => "b".to_string(),
                (i, 0) => format!("a^{i}"),
                (i, _) => format!("a^{i}b"),
            }
        })
        .collect();
    Group::from_raw(order, table, labels, Some(Family::Dihedral(order)))
}

pub(crate) fn quaternion(m: usize) -> Group {
    let n = 2 * m;
    let order = 4 * m;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (i, e) = (x % n, x / n);
        for y in 0..order {
            let (j, f) = (y % n, y / n);
            let mut k = if e == 0 { (i + j) % n } else { (i + n - j) % n };
            if e == 1 && f == 1 {
                k = (k + m) % n;
            }
            table.push((k + n * ((e + f) % 2)) as u32);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (i, e) = (x % n, x / n);
            match (i, e) {
                (0, 0) => "e".to_string(),
                (0, _) => "y".to_string(),
                (i, 0) => format!("x^{i}"),
                (i, _) => format!("x^{i}y"),
            }
        })
        .collect();
    Group::from_raw(order, table, labels, Some(Family::Quaternion(order)))
}

fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    // Heap-free lexicographic enumeration; the first one is the identity.
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

fn is_even(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = p[k] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// Canonical cycle notation, 1-based, fixed points omitted: `(12345)`,
/// `(12)(34)`; each cycle starts at its least point. Identity is `e`.
pub fn cycle_label(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] as usize == s {
            continue;
        }
        out.push('(');
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            out.push_str(&(k + 1).to_string());
            k = p[k] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// Parses cycle notation like `(12345)` or `(2354)(1)` over points `1..=n`.
pub fn parse_cycles(n: usize, text: &str) -> Result<Vec<u8>> {
    let mut p: Vec<u8> = (0..n as u8).collect();
    let text = text.trim();
    if text == "e" || text == "()" {
        return Ok(p);
    }
    let bad = || GroupError::ParamOutOfRange(format!("bad cycle notation {text:?} for degree {n}"));
    let mut rest = text;
    // Cycles compose right to left like every other product.
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        let rest_trim = rest.trim_start();
        let inner_end = rest_trim.find(')').ok_or_else(bad)?;
        if !rest_trim.starts_with('(') {
            return Err(bad());
        }
        let inner = &rest_trim[1..inner_end];
        let pts: Vec<usize> = if inner.contains(',') || inner.contains(' ') {
            inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        if pts.iter().any(|&x| x == 0 || x > n) {
            return Err(bad());
        }
        cycles.push(pts);
        rest = &rest_trim[inner_end + 1..];
    }
    for pts in cycles.iter().rev() {
        let mut c: Vec<u8> = (0..n as u8).collect();
        for w in 0..pts.len() {
            c[pts[w] - 1] = (pts[(w + 1) % pts.len()] - 1) as u8;
        }
        // p := c * p
        p = p.iter().map(|&x| c[x as usize]).collect();
    }
    Ok(p)
}

/// Looks up a permutation in a symmetric or alternating group by cycle notation.
pub fn find_permutation(g: &Group, cycles: &str) -> Result<u32> {
    let n = match g.family() {
        Some(Family::Symmetric(n)) | Some(Family::Alternating(n)) => n,
        _ => {
            return Err(GroupError::ParamOutOfRange(
                "permutation lookup needs a symmetric or alternating group".into(),
            ))
        }
    };
    let p = parse_cycles(n, cycles)?;
    g.element_by_label(&cycle_label(&p))
        .ok_or_else(|| GroupError::ParamOutOfRange(format!("{cycles} is not in this group")))
}

fn permutation_group(n: usize, even_only: bool) -> Group {
    let elements: Vec<Vec<u8>> = all_permutations(n)
        .into_iter()
        .filter(|p| !even_only || is_even(p))
        .collect();
    let family = if even_only {
        Family::Alternating(n)
    } else {
        Family::Symmetric(n)
    };
    Group::from_elements(
        elements,
        |s, t| t.iter().map(|&k| s[k as usize]).collect::<Vec<u8>>(),
        |p| cycle_label(p),
        Some(family),
    )
}

fn psl2(p: usize) -> Group {
    let neg = |x: usize| (p - x) % p;
    let canonical = |m: [usize; 4]| {
        let n = [neg(m[0]), neg(m[1]), neg(m[2]), neg(m[3])];
        if n < m {
            n
        } else {
            m
        }
    };
    let mut elements: Vec<[usize; 4]> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 {
                        let m = canonical([a, b, c, d]);
                        if m == [a, b, c, d] {
                            elements.push(m);
                        }
                    }
                }
            }
        }
    }
    let identity = [1, 0, 0, 1];
    elements.retain(|m| *m != identity);
    elements.insert(0, identity);
    Group::from_elements(
        elements,
        |x, y| {
            canonical([
                (x[0] * y[0] + x[1] * y[2]) % p,
                (x[0] * y[1] + x[1] * y[3]) % p,
                (x[2] * y[0] + x[3] * y[2]) % p,
                (x[2] * y[1] + x[3] * y[3]) % p,
            ])
        },
        |m| format!("[{} {}; {} {}]", m[0], m[1], m[2], m[3]),
        Some(Family::Psl2(p)),
    )
}

/// Componentwise product; element `(g, h)` sits at index `g * |H| + h`.
pub fn direct_product(g: &Group, h: &Group, cap: usize) -> Result<Group> {
    let (m, n) = (g.order(), h.order());
    check_cap(m * n, cap)?;
    let order = m * n;
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        let (a1, a2) = ((a / n) as u32, (a % n) as u32);
        for b in 0..order {
            let (b1, b2) = ((b / n) as u32, (b % n) as u32);
            table.push(g.mul(a1, b1) * n as u32 + h.mul(a2, b2));
        }
    }
    let labels = (0..order)
        .map(|a| format!("({},{})", g.label((a / n) as u32), h.label((a % n) as u32)))
        .collect();
    Ok(Group::from_raw(order, table, labels, Some(Family::Product)))
}

/// A homomorphism from the cyclic group of order `quotient_order` into
/// `Aut(kernel)`, given by the image of the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub quotient_order: usize,
    pub image: Automorphism,
}

impl ActionSpec {
    pub fn new(kernel: &Group, quotient_order: usize, image: Automorphism) -> Result<ActionSpec> {
        if quotient_order == 0 {
            return Err(GroupError::InvalidAction("quotient order must be >= 1".into()));
        }
        if !image.is_automorphism_of(kernel) {
            return Err(GroupError::InvalidAction(
                "generator image is not an automorphism".into(),
            ));
        }
        let ord = image.order();
        if !quotient_order.is_multiple_of(ord) {
            return Err(GroupError::InvalidAction(format!(
                "generator image has order {ord}, which does not divide {quotient_order}"
            )));
        }
        Ok(ActionSpec { quotient_order, image })
    }

    pub fn trivial(kernel: &Group, quotient_order: usize) -> ActionSpec {
        ActionSpec {
            quotient_order,
            image: Automorphism::identity(kernel.order()),
        }
    }
}

/// `N x|_act Q` for cyclic `Q`. Element `(n, k)` (with `k` the exponent of the
/// chosen generator of `Q`) sits at index `n + |N| * k` and
/// `(n1, k1)(n2, k2) = (n1 * act^k1(n2), k1 + k2)`.
pub fn semidirect_product(kernel: &Group, quotient: &Group, act: &ActionSpec, cap: usize) -> Result<Group> {
    if !quotient.is_cyclic() || quotient.order() != act.quotient_order {
        return Err(GroupError::InvalidAction(format!(
            "quotient must be cyclic of order {}",
            act.quotient_order
        )));
    }
    let g = cyclic_extension(kernel, act.quotient_order, &act.image, 0, cap)?;
    Ok(g)
}

/// The group on `N x Z_m` with
/// `(n1, i)(n2, j) = (n1 * alpha^i(n2) * z^{floor((i+j)/m)}, (i+j) mod m)`.
///
/// Since `i, j < m` the carry exponent is 0 or 1. The result is a group iff
/// `alpha^m` is conjugation by `z` and `alpha(z) = z`; callers are expected
/// to have checked that (see [`compatible_pair`]).
pub fn cyclic_extension(kernel: &Group, m: usize, alpha: &Automorphism, z: u32, cap: usize) -> Result<Group> {
    let n = kernel.order();
    let order = n * m;
    check_cap(order, cap)?;
    if m == 0 {
        return Err(GroupError::InvalidAction("quotient order must be >= 1".into()));
    }
    if !compatible_pair(kernel, m, alpha, z) {
        return Err(GroupError::InvalidAction(
            "(alpha, z) is not a compatible pair for a cyclic extension".into(),
        ));
    }
    let powers: Vec<Automorphism> = (0..m).map(|i| alpha.pow(i)).collect();
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        let (n1, i) = ((a % n) as u32, a / n);
        for b in 0..order {
            let (n2, j) = ((b % n) as u32, b / n);
            let mut prod = kernel.mul(n1, powers[i].apply(n2));
            if i + j >= m {
                prod = kernel.mul(prod, z);
            }
            table.push(prod + (n * ((i + j) % m)) as u32);
        }
    }
    let labels = (0..order)
        .map(|a| format!("({},{})", kernel.label((a % n) as u32), a / n))
        .collect();
    Ok(Group::from_raw(order, table, labels, Some(Family::Extension)))
}

/// `alpha^m = conj_z` and `alpha(z) = z`.
pub fn compatible_pair(kernel: &Group, m: usize, alpha: &Automorphism, z: u32) -> bool {
    if alpha.apply(z) != z {
        return false;
    }
    let am = alpha.pow(m);
    kernel.elements().all(|x| am.apply(x) == kernel.conj(z, x))
}

/// Multiplication-by-`u` automorphism of the cyclic group of order `n` as
/// built by this module.
pub fn cyclic_multiplier(n: usize, u: usize) -> Automorphism {
    Automorphism::from_map_unchecked((0..n).map(|x| ((x * u) % n) as u32).collect())
}
