//! Exact arithmetic in GF(q²) together with its subfields GF(q) and GF(p).
//!
//! Elements are stored as discrete logarithms to the base ω, a root of the
//! Conway polynomial of degree 2m over GF(p). Multiplication, inversion and the
//! Frobenius conjugation x ↦ x^q are then exponent arithmetic, and addition goes
//! through a Zech logarithm table.
//!
//! ```
//! use hsd::field::FieldCtx;
//!
//! let gf9 = FieldCtx::new(3, 1).unwrap();
//! let w = gf9.omega();
//! // ω^4 = -1 in GF(9)
//! assert!(gf9.add(gf9.pow(w, 4), gf9.one()).is_zero());
//! assert_eq!(gf9.conj(w), gf9.pow(w, 3));
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cap on the multiplicative group size for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 26;

const ZERO_LOG: u32 = u32::MAX;

/// One element of GF(q²): either zero or ω^k with k reduced mod q²−1.
///
/// The derived ordering puts ω^0 < ω^1 < … and zero last.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(ZERO_LOG);
    pub const ONE: Elem = Elem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == ZERO_LOG
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(k) => write!(f, "w^{k}"),
        }
    }
}

/// The tower GF(p) ⊂ GF(q) ⊂ GF(q²) with q = p^m.
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// q² − 1, the order of ω.
    group: u32,
    modulus: Vec<u32>,
    /// exp[k] is the additive (base-p digit) encoding of ω^k.
    exp: Vec<u32>,
    /// log[a] is the discrete log of the element with additive encoding a.
    log: Vec<u32>,
    /// zech[k] = log(1 + ω^k).
    zech: Vec<u32>,
    neg_one: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q² into (p, m) with q² = p^(2m). Returns `None` for non-square prime powers.
pub fn split_square_order(q2: u64) -> Option<(u32, u32)> {
    if q2 < 4 {
        return None;
    }
    let mut p = 2;
    while q2 % p != 0 {
        p += 1;
    }
    let mut rest = q2;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 || e % 2 != 0 {
        return None;
    }
    Some((p as u32, e / 2))
}

fn conway_from_table(text: &str, p: u32, degree: u32) -> Option<Vec<u32>> {
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace().map(|t| t.parse::<u32>());
        let (Some(Ok(lp)), Some(Ok(ld))) = (it.next(), it.next()) else {
            continue;
        };
        if lp == p && ld == degree {
            let coeffs: Option<Vec<u32>> = it.map(|c| c.ok()).collect();
            return coeffs.filter(|c| c.len() == degree as usize + 1);
        }
    }
    None
}

/// Environment variable naming an alternative Conway polynomial table.
pub const CONWAY_TABLE_ENV: &str = "HSD_CONWAY_TABLE";

fn conway_polynomial(p: u32, degree: u32) -> Result<Vec<u32>> {
    let shipped = include_str!("../data/conway.txt");
    let found = match std::env::var_os(CONWAY_TABLE_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            conway_from_table(&text, p, degree)
        }
        None => conway_from_table(shipped, p, degree),
    };
    found.ok_or(Error::NoConwayPolynomialShipped {
        p: p as u64,
        degree,
    })
}

impl FieldCtx {
    /// Builds GF(q²) for q = p^m from the shipped Conway polynomial of degree 2m.
    pub fn new(p: u64, m: u32) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::PreconditionFailed("m must be positive".into()));
        }
        let degree = 2 * m;
        let order = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, degree });
        }
        let p = p as u32;
        let modulus = conway_polynomial(p, degree)?;
        Self::with_modulus(p, m, modulus).map(Arc::new)
    }

    /// Builds GF(q²) from its order q².
    pub fn from_order(q2: u64) -> Result<Arc<FieldCtx>> {
        let (p, m) = split_square_order(q2)
            .ok_or_else(|| Error::Parse(format!("{q2} is not an even power of a prime")))?;
        Self::new(p as u64, m)
    }

    fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<FieldCtx> {
        let degree = (2 * m) as usize;
        let order = (p as usize).pow(degree as u32);
        let group = (order - 1) as u32;
        if modulus.len() != degree + 1 || modulus[degree] != 1 {
            return Err(Error::BadModulus { p: p as u64, degree: 2 * m });
        }
        let mut exp = vec![0u32; group as usize];
        let mut log = vec![ZERO_LOG; order];
        let mut digits = vec![0u32; degree];
        digits[0] = 1;
        let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        for k in 0..group {
            let code = encode(&digits);
            if log[code as usize] != ZERO_LOG {
                return Err(Error::BadModulus { p: p as u64, degree: 2 * m });
            }
            log[code as usize] = k;
            exp[k as usize] = code;
            // multiply by x modulo the monic modulus
            let top = digits[degree - 1];
            for i in (1..degree).rev() {
                digits[i] = digits[i - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    let sub = (top * modulus[i]) % p;
                    digits[i] = (digits[i] + p - sub) % p;
                }
            }
        }
        if encode(&digits) != 1 {
            return Err(Error::BadModulus { p: p as u64, degree: 2 * m });
        }
        let zech = exp
            .iter()
            .map(|&code| {
                let d0 = code % p;
                let bumped = code - d0 + (d0 + 1) % p;
                log[bumped as usize]
            })
            .collect();
        let neg_one = if p == 2 { 0 } else { group / 2 };
        Ok(FieldCtx {
            p,
            m,
            q: p.pow(m),
            group,
            modulus,
            exp,
            log,
            zech,
            neg_one,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The subfield order q = p^m.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// The field order q².
    pub fn order(&self) -> u32 {
        self.group + 1
    }

    /// Order of the multiplicative group, q² − 1.
    pub fn group_order(&self) -> u32 {
        self.group
    }

    /// Modulus coefficients from the constant term upward.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn omega(&self) -> Elem {
        Elem(1 % self.group)
    }

    /// ω^k for any integer k.
    pub fn omega_pow(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.group as i64) as u32)
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Elem {
        let r = v.rem_euclid(self.p as i64) as usize;
        Elem(self.log[r])
    }

    /// Whether `x` is a valid element of this field.
    pub fn contains(&self, x: Elem) -> bool {
        x.is_zero() || x.0 < self.group
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        let diff = if y.0 >= x.0 { y.0 - x.0 } else { y.0 + self.group - x.0 };
        let z = self.zech[diff as usize];
        if z == ZERO_LOG {
            Elem::ZERO
        } else {
            Elem(self.reduce(x.0 as u64 + z as u64))
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        if x.is_zero() {
            x
        } else {
            Elem(self.reduce(x.0 as u64 + self.neg_one as u64))
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            Elem::ZERO
        } else {
            Elem(self.reduce(x.0 as u64 + y.0 as u64))
        }
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        match x.log() {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(x),
            Some(k) => Ok(Elem(self.group - k)),
        }
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Elem, e: i64) -> Elem {
        self.try_pow(x, e).unwrap_or(Elem::ZERO)
    }

    /// x^e, failing only for a negative power of zero.
    pub fn try_pow(&self, x: Elem, e: i64) -> Result<Elem> {
        match x.log() {
            None if e > 0 => Ok(Elem::ZERO),
            None if e == 0 => Ok(Elem::ONE),
            None => Err(Error::DivisionByZero),
            Some(k) => {
                let g = self.group as i128;
                Ok(Elem(((k as i128 * e as i128).rem_euclid(g)) as u32))
            }
        }
    }

    /// Frobenius conjugation x ↦ x^q.
    #[inline]
    pub fn conj(&self, x: Elem) -> Elem {
        if x.is_zero() {
            x
        } else {
            Elem(self.reduce(x.0 as u64 * self.q as u64))
        }
    }

    /// The norm x^(q+1), which lies in GF(q).
    pub fn norm(&self, x: Elem) -> Elem {
        self.pow(x, self.q as i64 + 1)
    }

    pub fn is_in_subfield(&self, x: Elem) -> bool {
        self.conj(x) == x
    }

    pub fn is_in_prime_field(&self, x: Elem) -> bool {
        self.pow(x, self.p as i64) == x
    }

    /// The (q+1)-th root of a nonzero `n` ∈ GF(q) with the smallest discrete log.
    pub fn norm_root(&self, n: Elem) -> Result<Elem> {
        let Some(k) = n.log() else {
            return Err(Error::ZeroInput);
        };
        if !self.is_in_subfield(n) {
            return Err(Error::NoRoot);
        }
        // k is a multiple of q+1; every root has log ≡ k/(q+1) mod q−1.
        let step = self.q + 1;
        debug_assert_eq!(k % step, 0);
        Ok(Elem((k / step) % (self.q - 1).max(1)))
    }

    /// An element α with α^(q+1) = −1: ω^((q−1)/2) for odd p and 1 for p = 2.
    pub fn alpha_for_minus_one(&self) -> Elem {
        let minus_one = self.neg(Elem::ONE);
        if self.p == 2 {
            return Elem::ONE;
        }
        let canonical = self.omega_pow(((self.q - 1) / 2) as i64);
        if self.norm(canonical) == minus_one {
            return canonical;
        }
        (0..self.group)
            .map(Elem)
            .find(|&x| self.norm(x) == minus_one)
            .expect("the norm map onto GF(q)* is surjective")
    }

    /// All elements in (log, zero-last) order: ω^0, ω^1, …, ω^(q²−2), 0.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.group).map(Elem).chain(std::iter::once(Elem::ZERO))
    }

    /// Elements of the subfield GF(q), in the same order as [`FieldCtx::elements`].
    pub fn subfield_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let step = self.q + 1;
        (0..self.q - 1)
            .map(move |t| Elem(t * step))
            .chain(std::iter::once(Elem::ZERO))
    }

    /// Additive encoding (base-p digits of the polynomial basis).
    #[inline]
    pub fn to_additive(&self, x: Elem) -> u32 {
        if x.is_zero() {
            0
        } else {
            self.exp[x.0 as usize]
        }
    }

    #[inline]
    pub fn from_additive(&self, code: u32) -> Elem {
        Elem(self.log[code as usize])
    }

    /// Digit-wise sum of two additive encodings.
    pub fn add_additive(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    /// Parses "0", "1", "w", "w^k" (any integer k) or a plain integer in the prime field.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("w") {
            let rest = rest.trim();
            if rest.is_empty() {
                return Ok(self.omega());
            }
            let k = rest
                .strip_prefix('^')
                .ok_or_else(|| Error::Parse(format!("bad element {s:?}")))?
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.omega_pow(k));
        }
        let v = t
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad element {s:?}")))?;
        Ok(self.from_int(v))
    }

    #[inline]
    fn reduce(&self, v: u64) -> u32 {
        (v % self.group as u64) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(ctx: &FieldCtx) -> Vec<Elem> {
        ctx.elements().collect()
    }

    #[test]
    fn primitive_element_orders() {
        for (p, m, order) in [(3, 1, 8), (2, 2, 15), (11, 1, 120), (2, 1, 3), (2, 3, 63)] {
            let ctx = FieldCtx::new(p, m).unwrap();
            assert_eq!(ctx.group_order(), order);
            let w = ctx.omega();
            let first_one = (1..=order).find(|&k| ctx.pow(w, k as i64) == Elem::ONE);
            assert_eq!(first_one, Some(order));
        }
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(2, 14),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(FieldCtx::from_order(8).is_err());
        assert!(FieldCtx::from_order(12).is_err());
    }

    #[test]
    fn gf4_sum_matches_polynomial_arithmetic() {
        // GF(4) = GF(2)[x]/(x^2+x+1): x + x^2 = x + (x+1) = 1
        let ctx = FieldCtx::new(2, 1).unwrap();
        assert_eq!(ctx.modulus(), &[1, 1, 1]);
        let w = ctx.omega();
        assert_eq!(ctx.add(w, ctx.pow(w, 2)), Elem::ONE);
    }

    #[test]
    fn half_order_power_is_minus_one() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        assert!(ctx.add(ctx.omega_pow(4), Elem::ONE).is_zero());
        assert_eq!(ctx.neg(Elem::ONE), ctx.omega_pow(4));
        assert_eq!(ctx.from_int(2), ctx.omega_pow(4));
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        for x in all(&ctx) {
            if x.is_zero() {
                assert_eq!(ctx.inv(x), Err(Error::DivisionByZero));
            } else {
                assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Elem::ONE);
            }
        }
        assert_eq!(ctx.try_pow(Elem::ZERO, -1), Err(Error::DivisionByZero));
        assert_eq!(ctx.pow(Elem::ZERO, 0), Elem::ONE);
    }

    #[test]
    fn conjugation_examples() {
        let gf9 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(gf9.conj(gf9.omega()), gf9.omega_pow(3));
        assert_eq!(gf9.conj(Elem::ZERO), Elem::ZERO);
        assert_eq!(gf9.conj(Elem::ONE), Elem::ONE);
        let gf4 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(gf4.conj(gf4.omega()), gf4.omega_pow(2));
    }

    #[test]
    fn conjugation_is_field_automorphism_fixing_q_elements() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let ctx = FieldCtx::new(p, m).unwrap();
            let els = all(&ctx);
            let fixed = els.iter().filter(|&&x| ctx.conj(x) == x).count();
            assert_eq!(fixed as u32, ctx.q());
            assert_eq!(ctx.subfield_elements().count() as u32, ctx.q());
            for &x in &els {
                assert_eq!(ctx.conj(ctx.conj(x)), x);
                for &y in els.iter().step_by(3) {
                    assert_eq!(ctx.conj(ctx.mul(x, y)), ctx.mul(ctx.conj(x), ctx.conj(y)));
                    assert_eq!(ctx.conj(ctx.add(x, y)), ctx.add(ctx.conj(x), ctx.conj(y)));
                }
            }
        }
    }

    #[test]
    fn norm_is_onto_and_q_plus_one_to_one() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let mut counts = std::collections::HashMap::new();
        for x in ctx.elements().filter(|x| !x.is_zero()) {
            let n = ctx.norm(x);
            assert!(ctx.is_in_subfield(n));
            *counts.entry(n).or_insert(0) += 1;
        }
        assert_eq!(counts.len() as u32, ctx.q() - 1);
        assert!(counts.values().all(|&c| c == ctx.q() + 1));
    }

    #[test]
    fn norm_root_matches_enumeration_in_gf81() {
        // GF(81) viewed as GF(9²): q = 9
        let ctx = FieldCtx::new(3, 2).unwrap();
        let minus_one = ctx.neg(Elem::ONE);
        let roots: Vec<Elem> = ctx
            .elements()
            .filter(|&x| ctx.norm(x) == minus_one)
            .collect();
        assert_eq!(roots.len(), 10);
        let r = ctx.norm_root(minus_one).unwrap();
        assert!(roots.contains(&r));
        assert_eq!(r, *roots.iter().min().unwrap());
    }

    #[test]
    fn norm_root_gf9_minus_one() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let n = ctx.omega_pow(4);
        let expected: Vec<Elem> = ctx.elements().filter(|&x| ctx.pow(x, 4) == n).collect();
        let theta = ctx.norm_root(n).unwrap();
        assert!(expected.contains(&theta));
        assert_eq!(ctx.norm_root(Elem::ONE).map(|t| ctx.norm(t)), Ok(Elem::ONE));
        assert_eq!(ctx.norm_root(Elem::ZERO), Err(Error::ZeroInput));
        assert_eq!(ctx.norm_root(ctx.omega()), Err(Error::NoRoot));
    }

    #[test]
    fn alpha_satisfies_norm_identity() {
        let gf9 = FieldCtx::new(3, 1).unwrap();
        let alpha = gf9.alpha_for_minus_one();
        let by_filter: Vec<Elem> = gf9
            .elements()
            .filter(|&x| gf9.pow(x, 4) == gf9.from_int(-1))
            .collect();
        assert!(by_filter.contains(&alpha));
        assert_eq!(alpha, gf9.omega());
        assert_eq!(FieldCtx::new(2, 1).unwrap().alpha_for_minus_one(), Elem::ONE);
        for (p, m) in [(5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1)] {
            let ctx = FieldCtx::new(p, m).unwrap();
            let a = ctx.alpha_for_minus_one();
            assert!(ctx.add(ctx.norm(a), Elem::ONE).is_zero());
        }
    }

    #[test]
    fn additive_round_trip() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        for x in ctx.elements() {
            assert_eq!(ctx.from_additive(ctx.to_additive(x)), x);
            for y in ctx.elements() {
                let s = ctx.add_additive(ctx.to_additive(x), ctx.to_additive(y));
                assert_eq!(ctx.from_additive(s), ctx.add(x, y));
            }
        }
    }

    #[test]
    fn text_format() {
        let ctx = FieldCtx::new(11, 1).unwrap();
        assert_eq!(ctx.parse_elem("0").unwrap(), Elem::ZERO);
        assert_eq!(ctx.parse_elem("1").unwrap(), Elem::ONE);
        assert_eq!(ctx.parse_elem("w^0").unwrap(), Elem::ONE);
        assert_eq!(ctx.parse_elem("w^121").unwrap(), ctx.omega());
        assert_eq!(ctx.parse_elem("w").unwrap(), ctx.omega());
        assert_eq!(ctx.parse_elem("2").unwrap(), ctx.add(Elem::ONE, Elem::ONE));
        assert!(ctx.parse_elem("v^2").is_err());
        assert_eq!(ctx.omega_pow(57).to_string(), "w^57");
        assert_eq!(Elem::ZERO.to_string(), "0");
        assert_eq!(Elem::ONE.to_string(), "1");
    }

    #[test]
    fn square_order_split() {
        assert_eq!(split_square_order(4), Some((2, 1)));
        assert_eq!(split_square_order(64), Some((2, 3)));
        assert_eq!(split_square_order(361), Some((19, 1)));
        assert_eq!(split_square_order(27), None);
        assert_eq!(split_square_order(36), None);
    }
}
