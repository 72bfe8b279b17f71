#![allow(dead_code)]

use grouplab::arith::is_prime;
use grouplab::ok::OkDescriptor;
use grouplab::presentation::parse_presentation;
use grouplab::Group;

pub fn g(spec: &str) -> Group {
    parse_presentation(spec).unwrap().build(2000).unwrap()
}

/// Named constructions used across the integration tests. Names are
/// presentation strings, so every entry also exercises the parser.
pub const CORPUS: &[&str] = &[
    "Z1",
    "Z2",
    "Z3",
    "Z4",
    "Z2 x Z2",
    "Z5",
    "Z6",
    "D6",
    "Z7",
    "Z8",
    "Z4 x Z2",
    "Z2 x Z2 x Z2",
    "D8",
    "Q8",
    "Z9",
    "Z3 x Z3",
    "D10",
    "Z10",
    "Z12",
    "Z6 x Z2",
    "D12",
    "A4",
    "Q12",
    "Z3 x| Z4 [-1]",
    "Z7 x| Z3 [2]",
    "Z16",
    "D16",
    "Q16",
    "Z4 x Z4",
    "Z18",
    "D18",
    "S3 x Z3",
    "D20",
    "Z5 x| Z4 [2]",
    "S4",
    "D8 x Z3",
    "Q8 x Z3",
    "A4 x Z2",
    "Z3 x| Z8 [-1]",
    "D24",
    "A5",
    "S5",
    "PSL(2,7)",
];

/// Element-order census as a sorted vector, an isomorphism invariant
/// computed straight from the table.
pub fn order_census(g: &Group) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for x in g.elements() {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = g.mul(y, x);
            k += 1;
        }
        *counts.entry(k).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

/// Closure of `gens` by breadth-first search over right multiplication.
pub fn closure(g: &Group, gens: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut out = vec![0u32];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// All finite abelian groups of order `n`, as invariant-factor lists
/// `d1 | d2 | ...` with each `d >= 2`.
pub fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in (min.max(2)..=rest).filter(|d| rest.is_multiple_of(*d)) {
            if acc.last().is_some_and(|&l| d % l != 0) {
                continue;
            }
            acc.push(d);
            go(rest / d, d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out
}

pub fn abelian_spec(factors: &[usize]) -> String {
    if factors.is_empty() {
        return "Z1".into();
    }
    factors.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" x ")
}

/// Every valid Types 0-6 descriptor with group order at most `limit`,
/// listed straight from the parameter constraints.
pub fn all_descriptors(limit: usize) -> Vec<OkDescriptor> {
    let odd_primes: Vec<usize> = (3..limit).filter(|&p| is_prime(p)).collect();
    let mut out = Vec::new();
    for &p in &odd_primes {
        for &q in &odd_primes {
            if p != q && 2 * p * q <= limit {
                out.push(OkDescriptor::Type0 { p, q });
            }
        }
    }
    for m in 2..=limit / 4 {
        out.push(OkDescriptor::Type1 { m });
        out.push(OkDescriptor::Type3 { m });
    }
    for &q in &odd_primes {
        for k in 1u32.. {
            if q << (k + 1) > limit {
                break;
            }
            out.push(OkDescriptor::Type2 { q, k });
        }
    }
    for k in 3u32.. {
        if 1usize << (k + 1) > limit {
            break;
        }
        out.push(OkDescriptor::Type4 { k, sign: 1 });
        out.push(OkDescriptor::Type4 { k, sign: -1 });
    }
    for &p in odd_primes.iter().filter(|&&p| p % 4 == 1 && 4 * p <= limit) {
        for n in (1..p).filter(|n| (n * n + 1) % p == 0) {
            out.push(OkDescriptor::Type5 { p, n });
        }
    }
    for n in (4..=limit / 4).step_by(2) {
        for t in (0..n).step_by(2) {
            out.push(OkDescriptor::Type6 { n, t });
        }
    }
    out
}
