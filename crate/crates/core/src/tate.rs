//! Local reduction types and conductor exponents for integral Weierstrass
//! models, via Tate's algorithm.
//!
//! The algorithm here is only ever driven at small primes: the j = 0 family
//! y^2 = x^3 + c is wild at 2 and 3 (where all translations are found by
//! exhaustive search mod small powers of p, so no case table is trusted), and
//! tame at p >= 5 where the exponent is 0 or 2 by inspection of v_p(c).

use crate::arithmetic::inv_mod;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl std::fmt::Display for Kodaira {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

/// Outcome of Tate's algorithm at one prime. `minimal_model` is p-integral
/// and p-minimal (useful for counting points mod p when the type is I0).
#[derive(Debug, Clone, Copy)]
pub struct LocalData {
    pub p: u64,
    pub kodaira: Kodaira,
    pub conductor_exponent: u32,
    pub minimal_disc_valuation: u32,
    pub minimal_model: Weierstrass,
}

/// Integral Weierstrass coefficients [a1, a2, a3, a4, a6].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weierstrass {
    pub a1: i128,
    pub a2: i128,
    pub a3: i128,
    pub a4: i128,
    pub a6: i128,
}

impl Weierstrass {
    pub fn short(a4: i128, a6: i128) -> Weierstrass {
        Weierstrass {
            a1: 0,
            a2: 0,
            a3: 0,
            a4,
            a6,
        }
    }

    pub fn b_invariants(&self) -> (i128, i128, i128, i128) {
        let Weierstrass { a1, a2, a3, a4, a6 } = *self;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> i128 {
        let (b2, b4, b6, b8) = self.b_invariants();
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    /// Coordinate change x = x' + r, y = y' + s x' + t (u = 1).
    pub fn translate(&self, r: i128, s: i128, t: i128) -> Weierstrass {
        let Weierstrass { a1, a2, a3, a4, a6 } = *self;
        Weierstrass {
            a1: a1 + 2 * s,
            a2: a2 - s * a1 + 3 * r - s * s,
            a3: a3 + r * a1 + 2 * t,
            a4: a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6: a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
        }
    }

    /// Scaling x = u^2 x', y = u^3 y' with u = p; requires exact divisibility.
    fn scale_down(&self, p: i128) -> Result<Weierstrass> {
        let p2 = p * p;
        let p3 = p2 * p;
        let p4 = p2 * p2;
        let p6 = p3 * p3;
        if self.a1 % p != 0
            || self.a2 % p2 != 0
            || self.a3 % p3 != 0
            || self.a4 % p4 != 0
            || self.a6 % p6 != 0
        {
            return Err(Error::Internal(
                "non-minimal step reached with indivisible model".into(),
            ));
        }
        Ok(Weierstrass {
            a1: self.a1 / p,
            a2: self.a2 / p2,
            a3: self.a3 / p3,
            a4: self.a4 / p4,
            a6: self.a6 / p6,
        })
    }
}

fn vp(mut x: i128, p: i128) -> u32 {
    if x == 0 {
        return u32::MAX; // "infinite" valuation
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn md(x: i128, p: i128) -> i128 {
    x.rem_euclid(p)
}

/// Singular point of the reduction mod p, by exhaustive search. Unique and
/// F_p-rational whenever p divides the discriminant.
fn singular_point(e: &Weierstrass, p: i128) -> Result<(i128, i128)> {
    for x in 0..p {
        for y in 0..p {
            let on_curve = md(
                y * y + e.a1 * x * y + e.a3 * y - x * x * x - e.a2 * x * x - e.a4 * x - e.a6,
                p,
            ) == 0;
            let dx = md(e.a1 * y - 3 * x * x - 2 * e.a2 * x - e.a4, p) == 0;
            let dy = md(2 * y + e.a1 * x + e.a3, p) == 0;
            if on_curve && dx && dy {
                return Ok((x, y));
            }
        }
    }
    Err(Error::Internal(format!(
        "no singular point mod {p} though p | disc"
    )))
}

/// Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6 (valid after the type IV test).
fn normalize_mid(e: Weierstrass, p: i128) -> Result<Weierstrass> {
    if p == 2 {
        // 2 | a1 already (2 | b2); the needed shift is determined mod 8
        for r in 0..8 {
            for t in 0..8 {
                let f = e.translate(r, 0, t);
                if f.a2 % 2 == 0 && f.a3 % 4 == 0 && f.a4 % 4 == 0 && f.a6 % 8 == 0 {
                    return Ok(f);
                }
            }
        }
        return Err(Error::Internal(
            "step-6 normalization failed at p = 2".into(),
        ));
    }
    let inv2_p = inv_mod(2, p as u64).expect("p odd") as i128;
    let s = md(-e.a1 * inv2_p, p);
    let f = e.translate(0, s, 0);
    let p2 = p * p;
    let inv2_p2 = inv_mod(2, p2 as u64).expect("p odd") as i128;
    let t = md(-f.a3 * inv2_p2, p2);
    let f = f.translate(0, 0, t);
    if f.a1 % p != 0 || f.a2 % p != 0 || f.a3 % p2 != 0 || f.a4 % p2 != 0 || f.a6 % (p2 * p) != 0 {
        return Err(Error::Internal(format!(
            "step-6 normalization failed at p = {p}"
        )));
    }
    Ok(f)
}

/// Multiplicity of root alpha in T^3 + c2 T^2 + c4 T + c6 mod p.
fn cubic_multiplicity(c2: i128, c4: i128, c6: i128, alpha: i128, p: i128) -> u32 {
    // synthetic division, repeatedly
    let mut coeffs = vec![1i128, c2, c4, c6];
    let mut mult = 0;
    loop {
        let mut rem = 0i128;
        let mut next = Vec::with_capacity(coeffs.len() - 1);
        for &c in &coeffs {
            rem = md(rem * alpha + c, p);
            next.push(rem);
        }
        let r = next.pop().unwrap();
        if r != 0 {
            return mult;
        }
        mult += 1;
        coeffs = next;
        if coeffs.len() == 1 {
            return mult;
        }
    }
}

fn repeated_cubic_root(c2: i128, c4: i128, c6: i128, p: i128) -> Result<i128> {
    for alpha in 0..p {
        if cubic_multiplicity(c2, c4, c6, alpha, p) >= 2 {
            return Ok(alpha);
        }
    }
    Err(Error::Internal(
        "discriminant vanished mod p but no repeated root found".into(),
    ))
}

/// Double root of a quadratic c2 Y^2 + c1 Y + c0 mod p (c2 a unit).
fn quadratic_double_root(c2: i128, c1: i128, c0: i128, p: i128) -> Result<i128> {
    for y in 0..p {
        let value = md(c2 * y * y + c1 * y + c0, p) == 0;
        let deriv = md(2 * c2 * y + c1, p) == 0;
        if value && deriv {
            return Ok(y);
        }
    }
    Err(Error::Internal("quadratic had no double root mod p".into()))
}

fn exact_div(x: i128, d: i128) -> Result<i128> {
    if x % d != 0 {
        return Err(Error::Internal("inexact division in Tate step".into()));
    }
    Ok(x / d)
}

fn data(p: u64, kodaira: Kodaira, f: u32, v_disc: u32, model: Weierstrass) -> LocalData {
    LocalData {
        p,
        kodaira,
        conductor_exponent: f,
        minimal_disc_valuation: v_disc,
        minimal_model: model,
    }
}

/// Tate's algorithm at p. Intended for small p (the searches are O(p^2)).
pub fn local_reduction(model: Weierstrass, p: u64) -> Result<LocalData> {
    let pi = p as i128;
    let mut e = model;
    loop {
        let delta = e.discriminant();
        if delta == 0 {
            return Err(Error::Internal("singular Weierstrass model".into()));
        }
        let n = vp(delta, pi);
        if n == 0 {
            return Ok(data(p, Kodaira::I0, 0, n, e));
        }
        let (r, t) = singular_point(&e, pi)?;
        e = e.translate(r, 0, t);
        let (b2, _, b6, b8) = e.b_invariants();
        if vp(b2, pi) == 0 {
            return Ok(data(p, Kodaira::In(n), 1, n, e));
        }
        if vp(e.a6, pi) < 2 {
            return Ok(data(p, Kodaira::II, n, n, e));
        }
        if vp(b8, pi) < 3 {
            return Ok(data(p, Kodaira::III, n - 1, n, e));
        }
        if vp(b6, pi) < 3 {
            return Ok(data(p, Kodaira::IV, n - 2, n, e));
        }
        e = normalize_mid(e, pi)?;
        // cubic P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3) mod p
        let c2 = exact_div(e.a2, pi)?;
        let c4 = exact_div(e.a4, pi * pi)?;
        let c6 = exact_div(e.a6, pi * pi * pi)?;
        let disc_p = 18 * c2 * c4 * c6 - 4 * c2 * c2 * c2 * c6 + c2 * c2 * c4 * c4
            - 4 * c4 * c4 * c4
            - 27 * c6 * c6;
        if vp(disc_p, pi) == 0 {
            return Ok(data(p, Kodaira::I0Star, n - 4, n, e));
        }
        let alpha = repeated_cubic_root(c2, c4, c6, pi)?;
        if cubic_multiplicity(c2, c4, c6, alpha, pi) == 2 {
            // chain of quadratics, alternating in y and x
            e = e.translate(pi * alpha, 0, 0);
            let mut nu = 1u32;
            let mut mx = pi * pi;
            let mut my = pi * pi;
            loop {
                let q1 = exact_div(e.a3, my)?;
                let q0 = exact_div(e.a6, mx * my)?;
                if vp(q1 * q1 + 4 * q0, pi) == 0 {
                    break;
                }
                let y0 = quadratic_double_root(1, q1, -q0, pi)?;
                e = e.translate(0, 0, my * y0);
                my *= pi;
                nu += 1;
                let c2 = exact_div(e.a2, pi)?;
                let c1 = exact_div(e.a4, pi * mx)?;
                let c0 = exact_div(e.a6, mx * my)?;
                if vp(c1 * c1 - 4 * c2 * c0, pi) == 0 {
                    break;
                }
                let x0 = quadratic_double_root(c2, c1, c0, pi)?;
                e = e.translate(mx * x0, 0, 0);
                mx *= pi;
                nu += 1;
            }
            return Ok(data(p, Kodaira::InStar(nu), n - 4 - nu, n, e));
        }
        // triple root
        e = e.translate(pi * alpha, 0, 0);
        // quadratic Y^2 + (a3/p^2) Y - (a6/p^4) mod p
        let q1 = exact_div(e.a3, pi * pi)?;
        let q0 = exact_div(e.a6, pi * pi * pi * pi)?;
        if vp(q1 * q1 + 4 * q0, pi) == 0 {
            return Ok(data(p, Kodaira::IVStar, n - 6, n, e));
        }
        let y0 = quadratic_double_root(1, q1, -q0, pi)?;
        e = e.translate(0, 0, pi * pi * y0);
        if vp(e.a4, pi) < 4 {
            return Ok(data(p, Kodaira::IIIStar, n - 7, n, e));
        }
        if vp(e.a6, pi) < 6 {
            return Ok(data(p, Kodaira::IIStar, n - 8, n, e));
        }
        e = e.scale_down(pi)?;
    }
}

/// Number of points of `model` over F_p by exhaustive count (small p only),
/// including the point at infinity.
pub fn count_points_small(model: &Weierstrass, p: u64) -> u64 {
    let pi = p as i128;
    let mut count = 1u64;
    for x in 0..pi {
        for y in 0..pi {
            if md(
                y * y + model.a1 * x * y + model.a3 * y
                    - x * x * x
                    - model.a2 * x * x
                    - model.a4 * x
                    - model.a6,
                pi,
            ) == 0
            {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(c: i128) -> Weierstrass {
        Weierstrass::short(0, c)
    }

    #[test]
    fn disc_of_short_model() {
        // y^2 = x^3 + c has discriminant -432 c^2
        assert_eq!(short(-3888).discriminant(), -432 * 3888 * 3888);
    }

    #[test]
    fn family_curve_at_3() {
        let d = local_reduction(short(-3888), 3).unwrap();
        assert_eq!(d.conductor_exponent, 5);
        assert_eq!(d.kodaira, Kodaira::IIStar);
    }

    #[test]
    fn family_curve_at_2_is_good() {
        // odd n: the model is non-minimal-ish at 2 but the curve is good there
        let d = local_reduction(short(-3888), 2).unwrap();
        assert_eq!(d.conductor_exponent, 0);
        assert_eq!(d.kodaira, Kodaira::I0);
        // the 2-minimal model then has a_2 = 0 for this curve
        assert_eq!(count_points_small(&d.minimal_model, 2), 3);
    }

    #[test]
    fn fermat_cubic_model() {
        // y^2 = x^3 - 432 is the n = 1 member: conductor 27
        let at3 = local_reduction(short(-432), 3).unwrap();
        let at2 = local_reduction(short(-432), 2).unwrap();
        assert_eq!(at3.conductor_exponent, 3);
        assert_eq!(at2.conductor_exponent, 0);
    }

    #[test]
    fn tame_types_match_valuation_table() {
        // at p >= 5 the type of y^2 = x^3 + p^k u is decided by k alone
        for p in [5u64, 7] {
            let pk = |k: u32| (p as i128).pow(k);
            for u in [1i128, 2, 3, -1] {
                let cases = [
                    (1, Kodaira::II),
                    (2, Kodaira::IV),
                    (3, Kodaira::I0Star),
                    (4, Kodaira::IVStar),
                    (5, Kodaira::IIStar),
                ];
                for (k, want) in cases {
                    let d = local_reduction(short(pk(k) * u), p).unwrap();
                    assert_eq!(d.kodaira, want, "p={p} k={k} u={u}");
                    assert_eq!(d.conductor_exponent, 2);
                }
                // k = 6: non-minimal, scales down to good reduction when
                // p does not divide u
                let d = local_reduction(short(pk(6) * u), p).unwrap();
                assert_eq!(d.kodaira, Kodaira::I0);
                assert_eq!(d.conductor_exponent, 0);
            }
        }
    }

    #[test]
    fn multiplicative_and_star_chain() {
        // y^2 = x^3 + x^2 + c has c4 = 16, so reduction at odd p | c with
        // p not dividing 4 + 27c is multiplicative of type I_{v(c)}
        for p in [5i128, 7] {
            for nu in 1u32..=3 {
                let c = p.pow(nu) * 2;
                let e = Weierstrass {
                    a1: 0,
                    a2: 1,
                    a3: 0,
                    a4: 0,
                    a6: c,
                };
                let d = local_reduction(e, p as u64).unwrap();
                assert_eq!(d.kodaira, Kodaira::In(nu), "p={p} nu={nu}");
                assert_eq!(d.conductor_exponent, 1);
                // quadratic twist by p lands in the I_nu* chain with f = 2
                let tw = Weierstrass {
                    a1: 0,
                    a2: p,
                    a3: 0,
                    a4: 0,
                    a6: p * p * p * c,
                };
                let d = local_reduction(tw, p as u64).unwrap();
                assert_eq!(d.kodaira, Kodaira::InStar(nu), "twist p={p} nu={nu}");
                assert_eq!(d.conductor_exponent, 2);
            }
        }
    }

    #[test]
    fn minimal_model_valuation_reported() {
        let d = local_reduction(short(-3888), 2).unwrap();
        assert_eq!(d.minimal_disc_valuation, 0);
        let d = local_reduction(short(-3888), 3).unwrap();
        assert_eq!(d.minimal_disc_valuation, 13);
    }
}
