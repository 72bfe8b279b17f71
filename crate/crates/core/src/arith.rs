//! Small integer helpers: gcd, primality, factorisation, unit groups.

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: usize) -> Vec<usize> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: usize, p: usize) -> usize {
    let mut n = n;
    let mut out = 1;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

/// True when `n` is a (positive) power of the prime `p`, including `p^0 = 1`.
pub fn is_power_of(n: usize, p: usize) -> bool {
    n > 0 && p_part(n, p) == n
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Multiplicative units modulo `n` in ascending order (`{0}` for `n = 1`).
pub fn units(n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

pub fn euler_phi(n: usize) -> usize {
    if n == 1 {
        1
    } else {
        units(n).len()
    }
}

pub fn pow_mod(base: usize, exp: usize, m: usize) -> usize {
    if m == 1 {
        return 0;
    }
    let mut result = 1 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn mult_order(a: usize, m: usize) -> usize {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = a % m;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| mult_order(g, p) == p - 1)
        .expect("every prime has a primitive root")
}

/// Least `n` with `n^2 = -1 (mod p)`, if any.
pub fn sqrt_minus_one(p: usize) -> Option<usize> {
    (1..p).find(|&n| (n * n) % p == p - 1)
}
