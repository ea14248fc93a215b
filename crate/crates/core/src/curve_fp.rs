//! Curves y^2 = x^3 + b over a prime field: group law, exact point counts,
//! and the fast trace-of-Frobenius path for this j = 0 family.

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{cornacchia_4p, inv_mod, is_prime, legendre_symbol, mul_mod, sqrt_mod};
use crate::error::{Error, Result};

/// Either the point at infinity or an affine point (x, y) with coordinates
/// reduced mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine { x: u64, y: u64 },
}

/// y^2 = x^3 + b over F_p with b != 0 (good reduction). Order and trace are
/// cached once computed; the two caches are linked by #E = p + 1 - a_p.
#[derive(Debug)]
pub struct CurveFp {
    p: u64,
    b: u64,
    order: OnceLock<u64>,
    trace: OnceLock<i64>,
}

impl Clone for CurveFp {
    fn clone(&self) -> Self {
        CurveFp {
            p: self.p,
            b: self.b,
            order: self.order.clone(),
            trace: self.trace.clone(),
        }
    }
}

/// Point-sampling configuration for trace disambiguation. The seed makes runs
/// reproducible; results are exact integers either way.
#[derive(Debug, Clone, Copy)]
pub struct TraceConfig {
    pub seed: u64,
    pub max_samples: u32,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            seed: 1,
            max_samples: 8,
        }
    }
}

impl CurveFp {
    pub fn new(p: u64, b: u64) -> Result<CurveFp> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::PrimeTooSmall(p, 5));
        }
        let b = b % p;
        if b == 0 {
            return Err(Error::Internal("b = 0 mod p is singular".into()));
        }
        Ok(CurveFp {
            p,
            b,
            order: OnceLock::new(),
            trace: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn is_on_curve(&self, pt: Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let lhs = mul_mod(y, y, self.p);
                let rhs = (mul_mod(mul_mod(x, x, self.p), x, self.p) + self.b) % self.p;
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, pt: Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x,
                y: if y == 0 { 0 } else { self.p - y },
            },
        }
    }

    pub fn add(&self, a: Point, b: Point) -> Point {
        let p = self.p;
        let (x1, y1, x2, y2) = match (a, b) {
            (Point::Infinity, q) => return q,
            (q, Point::Infinity) => return q,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 && (y1 + y2) % p == 0 {
            return Point::Infinity;
        }
        let lambda = if x1 == x2 {
            // tangent: (3 x^2) / (2 y); the a-coefficient is 0 for this family
            let num = mul_mod(3 % p, mul_mod(x1, x1, p), p);
            let den = inv_mod(mul_mod(2, y1, p), p).expect("y != 0 here");
            mul_mod(num, den, p)
        } else {
            let num = (y2 + p - y1) % p;
            let den = inv_mod((x2 + p - x1) % p, p).expect("x1 != x2");
            mul_mod(num, den, p)
        };
        let x3 = (mul_mod(lambda, lambda, p) + 2 * p - x1 - x2) % p;
        let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
        Point::Affine { x: x3, y: y3 }
    }

    /// k * pt by double-and-add; rejects points not on the curve.
    pub fn scalar_mul(&self, pt: Point, k: u64) -> Result<Point> {
        if !self.is_on_curve(pt) {
            return Err(Error::PointNotOnCurve);
        }
        let mut acc = Point::Infinity;
        let mut base = pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Exact point count #E(F_p) = p + 1 + sum_x (x^3 + b | p), including the
    /// point at infinity. O(p); this is the oracle the fast path is checked
    /// against.
    pub fn count_points_naive(&self) -> u64 {
        let p = self.p;
        if let Some(&n) = self.order.get() {
            return n;
        }
        // mark the nonzero squares once instead of p Legendre symbols
        let mut is_square = vec![false; p as usize];
        let mut y = 0u64;
        while y <= p / 2 {
            is_square[mul_mod(y, y, p) as usize] = true;
            y += 1;
        }
        let mut count = 1u64; // infinity
        for x in 0..p {
            let rhs = (mul_mod(mul_mod(x, x, p), x, p) + self.b) % self.p;
            if rhs == 0 {
                count += 1;
            } else if is_square[rhs as usize] {
                count += 2;
            }
        }
        let trace = p as i64 + 1 - count as i64;
        let _ = self.order.set(count);
        let _ = self.trace.set(trace);
        count
    }

    /// Legendre-sum form of the count; used in tests to pin the two routes to
    /// each other.
    pub fn count_points_legendre(&self) -> u64 {
        let p = self.p;
        let mut sum = 0i64;
        for x in 0..p {
            let rhs = (mul_mod(mul_mod(x, x, p), x, p) + self.b) % p;
            sum += legendre_symbol(rhs as i128, p) as i64;
        }
        (p as i64 + 1 + sum) as u64
    }

    /// A uniformly-ish random point: sample x until x^3 + b is a square.
    fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        let p = self.p;
        loop {
            let x = rng.gen_range(0..p);
            let rhs = (mul_mod(mul_mod(x, x, p), x, p) + self.b) % p;
            if rhs == 0 {
                return Point::Affine { x, y: 0 };
            }
            if let Some(y) = sqrt_mod(rhs, p) {
                return Point::Affine { x, y };
            }
        }
    }

    /// Trace of Frobenius a_p with #E(F_p) = p + 1 - a_p.
    ///
    /// p = 2 (mod 3) is supersingular for j = 0, so a_p = 0 there. Otherwise
    /// the six unit multiples of the CM Frobenius are the only possibilities;
    /// random points eliminate wrong candidates, and if several still
    /// annihilate every sample the naive count settles it.
    pub fn trace_of_frobenius(&self, cfg: &TraceConfig) -> i64 {
        if let Some(&t) = self.trace.get() {
            return t;
        }
        let p = self.p;
        let trace = if p % 3 == 2 {
            0
        } else {
            let mut alive = trace_candidates(p).expect("p = 1 (mod 3) here").to_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(
                cfg.seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ self.b,
            );
            for _ in 0..cfg.max_samples {
                if alive.len() <= 1 {
                    break;
                }
                let pt = self.random_point(&mut rng);
                alive.retain(|&a| {
                    let k = (p as i64 + 1 - a) as u64;
                    self.scalar_mul(pt, k).expect("sampled on curve") == Point::Infinity
                });
            }
            match alive.as_slice() {
                [a] => *a,
                _ => {
                    // several candidate orders annihilate the whole group
                    // (small p, or unlucky samples): count instead
                    let n = self.count_points_naive();
                    p as i64 + 1 - n as i64
                }
            }
        };
        let _ = self.trace.set(trace);
        let _ = self.order.set((p as i64 + 1 - trace) as u64);
        trace
    }

    /// Group order via the fast trace path.
    pub fn order(&self, cfg: &TraceConfig) -> u64 {
        if let Some(&n) = self.order.get() {
            return n;
        }
        let t = self.trace_of_frobenius(cfg);
        (self.p as i64 + 1 - t) as u64
    }

    /// True iff E(F_l)[p] = 0, i.e. p does not divide #E(F_l). A finite
    /// abelian group has a point of order p exactly when p divides its order.
    pub fn has_no_p_torsion(&self, p: u64, cfg: &TraceConfig) -> bool {
        self.order(cfg) % p != 0
    }
}

/// The six possible traces at a good ordinary prime p = 1 (mod 3): with
/// 4p = L^2 + 27 M^2 these are +-L and +-(L +- 9M)/2 (integers, since L and M
/// share parity). All satisfy the Hasse bound.
pub fn trace_candidates(p: u64) -> Result<[i64; 6]> {
    let c = cornacchia_4p(p)?;
    let l = c.l as i64;
    let m = c.m as i64;
    Ok([
        l,
        -l,
        (l + 9 * m) / 2,
        -(l + 9 * m) / 2,
        (l - 9 * m) / 2,
        -(l - 9 * m) / 2,
    ])
}
