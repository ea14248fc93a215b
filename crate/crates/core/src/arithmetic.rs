//! Exact integer and modular arithmetic: primality, sieving, cube tests,
//! quadratic residues, and the 4p = L^2 + 27 M^2 decomposition.

use crate::error::{Error, Result};

/// Multiply mod m without overflow (inputs reduced mod m, m < 2^64).
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of a mod m for gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin. The fixed base set is known to be exact for
/// every input below 3.3 * 10^24, which covers all of u64.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if m == q {
            return true;
        }
        if m % q == 0 {
            return false;
        }
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Ascending iterator over the primes <= limit, backed by an odd-only sieve.
pub struct Primes {
    limit: u64,
    // bit i represents 2i + 3; set = composite
    composite: Vec<u64>,
    next: u64,
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next <= self.limit {
            let p = self.next;
            if p == 2 {
                self.next = 3;
                return Some(2);
            }
            self.next += 2;
            let i = ((p - 3) / 2) as usize;
            if self.composite[i / 64] & (1 << (i % 64)) == 0 {
                return Some(p);
            }
        }
        None
    }
}

/// Exactly the primes <= limit, ascending. Streams from a bit sieve so large
/// limits do not materialize every composite.
pub fn primes_up_to(limit: u64) -> Primes {
    assert!(limit >= 2, "primes_up_to requires limit >= 2");
    let n_odd = if limit >= 3 {
        ((limit - 3) / 2 + 1) as usize
    } else {
        0
    };
    let mut composite = vec![0u64; n_odd.div_ceil(64).max(1)];
    let mut p = 3u64;
    while p * p <= limit {
        let i = ((p - 3) / 2) as usize;
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            let mut c = p * p;
            while c <= limit {
                let j = ((c - 3) / 2) as usize;
                composite[j / 64] |= 1 << (j % 64);
                c += 2 * p;
            }
        }
        p += 2;
    }
    Primes {
        limit,
        composite,
        next: 2,
    }
}

/// Count of primes <= limit.
pub fn prime_pi(limit: u64) -> u64 {
    primes_up_to(limit).count() as u64
}

/// True iff no prime cube divides n.
pub fn is_cube_free(n: u64) -> bool {
    assert!(n >= 1);
    let mut rest = n;
    let mut q = 2u64;
    // after removing all q with q^3 <= rest, what remains has at most two
    // prime factors, so it cannot hide a cube
    while q * q * q <= rest {
        if rest % q == 0 {
            let mut e = 0;
            while rest % q == 0 {
                rest /= q;
                e += 1;
            }
            if e >= 3 {
                return false;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    true
}

/// Exact integer cube root when m is a perfect cube. No floating point.
pub fn exact_cube_root(m: i128) -> Option<i128> {
    if m < 0 {
        return exact_cube_root(-m).map(|r| -r);
    }
    let mut lo = 0i128;
    let mut hi = 1i128;
    while hi * hi * hi < m {
        hi *= 2;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if mid * mid * mid < m {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if lo * lo * lo == m {
        Some(lo)
    } else {
        None
    }
}

pub fn is_perfect_cube(m: i128) -> bool {
    exact_cube_root(m).is_some()
}

/// Smallest k with k^3 >= n (exact, used for search bounds).
pub fn ceil_cbrt(n: u64) -> u64 {
    let mut k = 0u64;
    while k * k * k < n {
        k += 1;
    }
    k
}

/// Legendre symbol (a/p) in {-1, 0, +1} for an odd prime p.
pub fn legendre_symbol(a: i128, p: u64) -> i32 {
    debug_assert!(p > 2 && is_prime(p));
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// Square root of a mod an odd prime p via Tonelli-Shanks, deterministic for
/// fixed p (the auxiliary non-residue is the least one). Of the two roots the
/// even representative is returned.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_symbol(a as i128, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        // Tonelli-Shanks
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2u64;
        while legendre_symbol(z as i128, p) != -1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = mul_mod(b, b, p);
            }
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    debug_assert_eq!(mul_mod(root, root, p), a);
    Some(if root % 2 == 0 { root } else { p - root })
}

/// The decomposition 4p = L^2 + 27 M^2 with L, M > 0, unique for primes
/// p = 1 (mod 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cornacchia4p {
    pub p: u64,
    pub l: u64,
    pub m: u64,
}

/// Solve 4p = L^2 + 27 M^2 for a prime p = 1 (mod 3), p >= 7.
///
/// Internally solves p = x^2 + 3 y^2 by Cornacchia's descent and rotates by
/// the cube-roots-of-unity action to the associate whose second coordinate is
/// divisible by 3; that associate yields (L, M).
pub fn cornacchia_4p(p: u64) -> Result<Cornacchia4p> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 3 == 2 {
        return Err(Error::WrongResidueClass { p });
    }
    if p < 7 {
        // p = 3 lands here (it is 0 mod 3)
        return Err(Error::PrimeTooSmall(p, 7));
    }
    // x^2 = -3 (mod p), then Euclidean descent until the remainder drops
    // below sqrt(p)
    let r = sqrt_mod(p - 3, p)
        .ok_or_else(|| Error::Internal(format!("-3 must be a square mod {p}")))?;
    let mut a = p;
    let mut b = r;
    while b * b >= p {
        let t = a % b;
        a = b;
        b = t;
    }
    let x = b;
    let rem = p - x * x;
    if rem % 3 != 0 {
        return Err(Error::Internal(format!("descent failed for p = {p}")));
    }
    let y2 = rem / 3;
    let y = isqrt(y2);
    if y * y != y2 {
        return Err(Error::Internal(format!("descent failed for p = {p}")));
    }
    // 4p = (2x)^2 + 3 (2y)^2 = (x+3y)^2 + 3 (x-y)^2 = (x-3y)^2 + 3 (x+y)^2;
    // exactly one of the second coordinates is divisible by 3
    let candidates = [
        (2 * x, 2 * y),
        (x + 3 * y, x.abs_diff(y)),
        (x.abs_diff(3 * y), x + y),
    ];
    for (l, b3) in candidates {
        if b3 % 3 == 0 && b3 > 0 && l > 0 {
            let m = b3 / 3;
            debug_assert_eq!(l * l + 27 * m * m, 4 * p);
            debug_assert_eq!(l % 2, m % 2);
            return Ok(Cornacchia4p { p, l, m });
        }
    }
    Err(Error::Internal(format!(
        "no associate with 3 | b for p = {p}"
    )))
}

/// Floor square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Prime factorization by trial division (small inputs: 6n, gcd bounds, ...).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_prime_basics() {
        assert!(is_prime(7));
        assert!(!is_prime(1));
        assert!(!is_prime(91)); // 7 * 13
        assert!(is_prime(2));
        assert!(!is_prime(0));
        // Carmichael numbers
        for n in [561, 1105, 1729, 2465, 2821, 6601] {
            assert!(!is_prime(n));
        }
        assert!(is_prime(2_147_483_647));
        assert!(is_prime(9_007_199_254_740_881));
    }

    #[test]
    fn primes_up_to_small() {
        let v: Vec<u64> = primes_up_to(10).collect();
        assert_eq!(v, vec![2, 3, 5, 7]);
        let v: Vec<u64> = primes_up_to(2).collect();
        assert_eq!(v, vec![2]);
        let v: Vec<u64> = primes_up_to(30).collect();
        assert_eq!(v, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn sieve_matches_miller_rabin() {
        let sieved: Vec<u64> = primes_up_to(100_000).collect();
        assert_eq!(sieved.len() as u64, 9592); // pi(10^5)
        for &p in sieved.iter().step_by(97) {
            assert!(is_prime(p));
        }
        let direct = (2..=10_000).filter(|&m| is_prime(m)).count();
        assert_eq!(primes_up_to(10_000).count(), direct);
    }

    #[test]
    fn cube_free() {
        assert!(is_cube_free(3));
        assert!(!is_cube_free(24)); // 8 | 24
        assert!(is_cube_free(12)); // 2^2 * 3
        assert!(is_cube_free(1));
        assert!(!is_cube_free(27));
        assert!(!is_cube_free(8 * 125));
    }

    #[test]
    fn cube_roots() {
        assert_eq!(exact_cube_root(1728), Some(12));
        assert_eq!(exact_cube_root(1729), None);
        assert_eq!(exact_cube_root(-27), Some(-3));
        assert_eq!(exact_cube_root(0), Some(0));
        for k in -10_000i128..=10_000 {
            assert_eq!(exact_cube_root(k * k * k), Some(k));
            if k.abs() >= 2 {
                assert!(!is_perfect_cube(k * k * k + 1));
                assert!(!is_perfect_cube(k * k * k - 1));
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(12, 13), 1); // 5^2 = 12 (mod 13)
        assert_eq!(legendre_symbol(2, 5), -1);
        assert_eq!(legendre_symbol(26, 13), 0);
        assert_eq!(legendre_symbol(-1, 7), -1);
    }

    #[test]
    fn sqrt_mod_even_representative() {
        for p in [5u64, 7, 13, 29, 101, 10_007] {
            for a in 1..40u64 {
                if legendre_symbol(a as i128, p) == 1 {
                    let r = sqrt_mod(a, p).unwrap();
                    assert_eq!(mul_mod(r, r, p), a % p);
                    assert_eq!(r % 2, 0);
                }
            }
        }
    }

    #[test]
    fn cornacchia_examples() {
        assert_eq!(cornacchia_4p(7).unwrap(), Cornacchia4p { p: 7, l: 1, m: 1 });
        assert_eq!(
            cornacchia_4p(13).unwrap(),
            Cornacchia4p { p: 13, l: 5, m: 1 }
        );
        assert_eq!(
            cornacchia_4p(31).unwrap(),
            Cornacchia4p { p: 31, l: 4, m: 2 }
        );
        assert_eq!(cornacchia_4p(5), Err(Error::WrongResidueClass { p: 5 }));
        assert_eq!(cornacchia_4p(11), Err(Error::WrongResidueClass { p: 11 }));
        assert_eq!(cornacchia_4p(91), Err(Error::NotPrime(91)));
        assert_eq!(cornacchia_4p(3), Err(Error::PrimeTooSmall(3, 7)));
    }

    #[test]
    fn cornacchia_matches_exhaustive_search() {
        for p in primes_up_to(10_000) {
            if p < 7 || p % 3 != 1 {
                continue;
            }
            let c = cornacchia_4p(p).unwrap();
            assert_eq!(c.l * c.l + 27 * c.m * c.m, 4 * p);
            // uniqueness among positive pairs
            let mut found = Vec::new();
            let mut m = 1u64;
            while 27 * m * m < 4 * p {
                let rest = 4 * p - 27 * m * m;
                let l = isqrt(rest);
                if l > 0 && l * l == rest {
                    found.push((l, m));
                }
                m += 1;
            }
            assert_eq!(found, vec![(c.l, c.m)], "p = {p}");
        }
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(18), vec![(2, 1), (3, 2)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }
}
