//! The global curve E_n: x^3 + y^3 = n z^3, handled in the Weierstrass form
//! y^2 = x^3 - 432 n^2: bad primes, reduction types, conductor, torsion
//! certification, and bounded-height search for cube-sum witnesses.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;

use crate::arithmetic::{ceil_cbrt, exact_cube_root, factorize, is_cube_free, is_perfect_cube};
use crate::curve_fp::CurveFp;
use crate::error::{Error, Result};
use crate::tate::{count_points_small, local_reduction, LocalData, Weierstrass};

/// Largest admitted n. Keeps every derived quantity (discriminants, search
/// cubes) comfortably inside i128 instead of silently wrapping.
pub const MAX_N: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionType {
    Good,
    // j = 0 is integral, so multiplicative reduction cannot occur anywhere;
    // the enum records that fact by having no such variant
    Additive,
}

/// E_n for cube-free n >= 3.
#[derive(Debug)]
pub struct CurveEn {
    n: u64,
    b: i128,
    bad_primes: BTreeSet<u64>,
    conductor: OnceLock<u64>,
    local_2: OnceLock<LocalData>,
    local_3: OnceLock<LocalData>,
}

pub fn build_curve(n: u64) -> Result<CurveEn> {
    CurveEn::new(n)
}

impl CurveEn {
    pub fn new(n: u64) -> Result<CurveEn> {
        if n == 1 || n == 2 {
            // n = 1 has a rational 3-torsion point and n = 2 a rational
            // 2-torsion point (432 * 4 = 12^3), so the torsion-free setup
            // breaks down; both are sums of two cubes anyway
            return Err(Error::DegenerateN(n));
        }
        if n < 3 {
            return Err(Error::DegenerateN(n));
        }
        if n > MAX_N {
            return Err(Error::Overflow(format!(
                "n = {n} exceeds supported bound {MAX_N}"
            )));
        }
        if !is_cube_free(n) {
            return Err(Error::NotCubeFree(n));
        }
        let b = -432 * (n as i128) * (n as i128);
        let bad_primes = factorize(6 * n).into_iter().map(|(q, _)| q).collect();
        Ok(CurveEn {
            n,
            b,
            bad_primes,
            conductor: OnceLock::new(),
            local_2: OnceLock::new(),
            local_3: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// b = -432 n^2.
    pub fn b(&self) -> i128 {
        self.b
    }

    /// Primes dividing 6n: where this model can have bad reduction.
    pub fn bad_primes(&self) -> &BTreeSet<u64> {
        &self.bad_primes
    }

    pub fn reduction_type(&self, ell: u64) -> ReductionType {
        if self.bad_primes.contains(&ell) {
            ReductionType::Additive
        } else {
            ReductionType::Good
        }
    }

    /// The reduction mod a good prime p >= 5.
    pub fn reduce_mod_p(&self, p: u64) -> Result<CurveFp> {
        if self.bad_primes.contains(&p) {
            return Err(Error::BadReductionPrime {
                p,
                six_n: 6 * self.n,
            });
        }
        if p < 5 {
            return Err(Error::PrimeTooSmall(p, 5));
        }
        CurveFp::new(p, self.b.rem_euclid(p as i128) as u64)
    }

    pub fn model(&self) -> Weierstrass {
        Weierstrass::short(0, self.b)
    }

    /// Tate data at p = 2 or 3 (cached).
    pub fn local_data(&self, p: u64) -> Result<LocalData> {
        let slot = match p {
            2 => &self.local_2,
            3 => &self.local_3,
            _ => {
                return Err(Error::Internal(format!(
                    "local_data is for p = 2, 3; got {p}"
                )))
            }
        };
        if let Some(d) = slot.get() {
            return Ok(*d);
        }
        let d = local_reduction(self.model(), p)?;
        let _ = slot.set(d);
        Ok(*slot.get().unwrap())
    }

    /// Conductor N of E_n. Wild exponents at 2 and 3 come from Tate's
    /// algorithm; at a tame prime q >= 5 the reduction is additive exactly
    /// when q | n, with exponent 2. The result is cross-checked downstream by
    /// the functional-equation residual.
    pub fn conductor(&self) -> Result<u64> {
        if let Some(&c) = self.conductor.get() {
            return Ok(c);
        }
        let d2 = self.local_data(2)?;
        let d3 = self.local_data(3)?;
        if d2.conductor_exponent > 8 || d3.conductor_exponent > 5 {
            return Err(Error::Internal(format!(
                "conductor exponent out of range: f2 = {}, f3 = {}",
                d2.conductor_exponent, d3.conductor_exponent
            )));
        }
        let mut cond: u64 = 2u64.pow(d2.conductor_exponent) * 3u64.pow(d3.conductor_exponent);
        for (q, _) in factorize(self.n) {
            if q >= 5 {
                cond = cond
                    .checked_mul(q * q)
                    .ok_or_else(|| Error::Overflow(format!("conductor of E_{}", self.n)))?;
            }
        }
        let _ = self.conductor.set(cond);
        Ok(cond)
    }

    /// Trace at p = 2 or 3 when the curve, after minimalization, is actually
    /// good there (possible even though the fixed model is bad); None if the
    /// conductor exponent is positive.
    pub fn small_prime_trace(&self, p: u64) -> Result<Option<i64>> {
        let d = self.local_data(p)?;
        if d.conductor_exponent != 0 {
            return Ok(None);
        }
        let count = count_points_small(&d.minimal_model, p);
        Ok(Some(p as i64 + 1 - count as i64))
    }

    /// Certify E_n(Q)_tors = 0: rational 2- and 3-torsion are excluded
    /// algebraically, and everything else through a gcd of good reduction
    /// orders, which the torsion order must divide.
    pub fn torsion_trivial_certificate(&self, ell_bound: u64) -> Result<TorsionCertificate> {
        let n = self.n;
        let c432 = 432i128 * (n as i128) * (n as i128);
        // 2-torsion needs x^3 = 432 n^2
        if is_perfect_cube(c432) {
            return Err(Error::Internal(format!(
                "432 * {n}^2 is a cube; n should be rejected"
            )));
        }
        // 3-torsion: the 3-division polynomial is 3x (x^3 + 4b); x = 0 needs
        // y^2 = b < 0, and the other factor needs x^3 = 1728 n^2
        let c1728 = 1728i128 * (n as i128) * (n as i128);
        if is_perfect_cube(c1728) {
            return Err(Error::Internal(format!(
                "1728 * {n}^2 is a cube; n should be rejected"
            )));
        }
        let mut orders = Vec::new();
        let mut g: u64 = 0;
        for ell in crate::arithmetic::primes_up_to(ell_bound) {
            if self.bad_primes.contains(&ell) || ell < 5 {
                continue;
            }
            let order = self.reduce_mod_p(ell)?.count_points_naive();
            g = crate::arithmetic::gcd(g, order);
            orders.push((ell, order));
        }
        if orders.is_empty() {
            return Err(Error::Internal(format!("no good primes below {ell_bound}")));
        }
        for (q, _) in factorize(g) {
            if q >= 5 {
                return Err(Error::InconclusiveTorsion(q));
            }
        }
        Ok(TorsionCertificate {
            n,
            two_torsion_obstruction: c432,
            three_torsion_obstruction: c1728,
            b: self.b,
            order_gcd: g,
            reduction_orders: orders,
        })
    }
}

/// Evidence that E_n(Q)_tors = 0. The torsion order divides `order_gcd`
/// (injection into good reductions at odd primes); its prime factors are in
/// {2, 3}, and those two orders are excluded by the recorded cube non-tests.
#[derive(Debug, Clone)]
pub struct TorsionCertificate {
    pub n: u64,
    /// 432 n^2, verified not to be a perfect cube (kills 2-torsion).
    pub two_torsion_obstruction: i128,
    /// 1728 n^2, verified not to be a perfect cube (with b < 0 this kills
    /// 3-torsion via the 3-division polynomial 3x(x^3 + 4b)).
    pub three_torsion_obstruction: i128,
    pub b: i128,
    pub order_gcd: u64,
    pub reduction_orders: Vec<(u64, u64)>,
}

impl TorsionCertificate {
    /// Re-run every check from the stored data.
    pub fn revalidate(&self) -> bool {
        if is_perfect_cube(self.two_torsion_obstruction)
            || is_perfect_cube(self.three_torsion_obstruction)
            || self.b >= 0
        {
            return false;
        }
        let mut g = 0u64;
        for &(_, order) in &self.reduction_orders {
            g = crate::arithmetic::gcd(g, order);
        }
        g == self.order_gcd && factorize(g).into_iter().all(|(q, _)| q < 5)
    }
}

/// A rational solution x^3 + y^3 = n, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSumWitness {
    pub x: Ratio<i128>,
    pub y: Ratio<i128>,
}

impl CubeSumWitness {
    /// Exact rational verification, no floating point.
    pub fn verify(&self, n: u64) -> bool {
        let cube = |r: &Ratio<i128>| r * r * r;
        cube(&self.x) + cube(&self.y) == Ratio::from_integer(n as i128)
    }
}

impl fmt::Display for CubeSumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Search a^3 + b^3 = n c^3 over 1 <= c <= height, |a| <= c * ceil(n^(1/3)) + 1,
/// recovering b by the exact cube-root test. Deterministic order: ascending c,
/// then ascending |a| (positive sign first), first hit wins.
pub fn rational_point_search(n: u64, height: u64) -> Result<Option<CubeSumWitness>> {
    if n == 0 {
        return Err(Error::DegenerateN(0));
    }
    if !is_cube_free(n) {
        return Err(Error::NotCubeFree(n));
    }
    if n > MAX_N {
        return Err(Error::Overflow(format!(
            "n = {n} exceeds supported bound {MAX_N}"
        )));
    }
    let k = ceil_cbrt(n) as i128;
    for c in 1..=height.max(1) as i128 {
        let ncc = (n as i128) * c * c * c;
        let bound = c * k + 1;
        for abs_a in 0..=bound {
            let signs: &[i128] = if abs_a == 0 { &[1] } else { &[1, -1] };
            for sign in signs {
                let a = sign * abs_a;
                let rest = ncc - a * a * a;
                if let Some(b) = exact_cube_root(rest) {
                    return Ok(Some(CubeSumWitness {
                        x: Ratio::new(a, c),
                        y: Ratio::new(b, c),
                    }));
                }
            }
        }
    }
    Ok(None)
}
