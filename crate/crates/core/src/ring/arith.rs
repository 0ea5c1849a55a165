//! Integer and F_p[x] helpers shared by the ring constructors.

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Inverse of `a` modulo prime `p`.
pub(crate) fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

// Polynomials over F_p: coefficient vectors low-to-high, trimmed of trailing zeros.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_prime(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let coef = mul_mod(r[top], lead_inv, p);
        if coef != 0 {
            for i in 0..=db {
                let idx = top - db + i;
                r[idx] = (r[idx] + p - mul_mod(coef, b[i], p)) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, g, p)
}

fn poly_pow_mod(base: &[u64], mut exp: u128, g: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, g, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, g, p);
        }
        b = poly_mul_mod(&b, &b, g, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let mut g = g.iter().map(|c| c % p).collect::<Vec<_>>();
    trim(&mut g);
    if g.len() < 2 {
        return false;
    }
    let n = g.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let q = |k: usize| (p as u128).pow(k as u32);
    // x^{p^n} == x mod g
    let xn = poly_pow_mod(&x, q(n), &g, p);
    if poly_rem(&xn, &g, p) != poly_rem(&x, &g, p) {
        return false;
    }
    for d in prime_factors(n as u128) {
        let k = n / d as usize;
        let mut h = poly_pow_mod(&x, q(k), &g, p);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        trim(&mut h);
        let gg = poly_gcd(&g, &h, p);
        if gg.len() != 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible polynomial of degree `f` over F_p whose lower
/// coefficients have the smallest encoding `c_0 + c_1 p + ... + c_{f-1} p^{f-1}`.
pub fn smallest_irreducible(p: u64, f: usize) -> Vec<u64> {
    let mut code: u128 = 0;
    loop {
        let mut poly = Vec::with_capacity(f + 1);
        let mut c = code;
        for _ in 0..f {
            poly.push((c % p as u128) as u64);
            c /= p as u128;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
        code += 1;
    }
}
