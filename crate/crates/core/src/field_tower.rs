//! The tower `F_p ⊂ F_q ⊂ F_{q^2}` realised as `F_p[x]/(f)` with `deg f = 2n`,
//! together with the distinguished root of unity `gamma`.
//!
//! Elements are dense coefficient vectors. [`LogTable`] adds Zech-logarithm
//! tables for the inner loops of the certification pipeline, where `q^2` is
//! at most a few million.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numtheory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {p} divides the degree {m}")]
    BadCharacteristic { p: u64, m: u64 },
    #[error("defining polynomial must be monic of even degree at least 2")]
    BadPolynomial,
    #[error("defining polynomial is reducible over F_{0}")]
    NotIrreducible(u64),
    #[error("root of the defining polynomial has order {found}, expected {expected}")]
    RootOrderMismatch { expected: u64, found: u64 },
    #[error("-1 is not a power of {p} modulo {m}")]
    NotSupersingularPair { p: u64, m: u64 },
    #[error("zero has no multiplicative order")]
    ZeroElement,
}

/// Polynomials over `F_p`, constant coefficient first.
mod fp_poly {
    use crate::numtheory::inv_mod;

    pub fn trim(a: &mut Vec<u64>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.is_empty() {
            a.push(0);
        }
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn degree(a: &[u64]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let df = degree(f).expect("division by zero polynomial");
        let lead_inv = inv_mod(f[df], p).unwrap();
        let mut r = a.to_vec();
        while let Some(dr) = degree(&r) {
            if dr < df {
                break;
            }
            let c = r[dr] * lead_inv % p;
            for (j, &fj) in f.iter().enumerate().take(df + 1) {
                let idx = dr - df + j;
                r[idx] = (r[idx] + p - c * fj % p) % p;
            }
        }
        r.truncate(df.max(1));
        trim(&mut r);
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), f, p);
            }
            b = rem(&mul(&b, &b, p), f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !is_zero(&y) {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// `x^{p^k} - x` has no common factor with `f` for `k < deg f`, and
    /// `x^{p^{deg f}} = x` modulo `f`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let Some(d) = degree(f) else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let mut xp = x.clone();
        for k in 1..=d {
            xp = pow_mod(&xp, p, f, p);
            if k < d {
                let g = gcd(f, &sub(&xp, &x, p), p);
                if degree(&g).unwrap_or(0) > 0 {
                    return false;
                }
            }
        }
        is_zero(&sub(&xp, &x, p))
    }
}

/// An element of `F_{q^2} = F_p[x]/(f)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u32>,
}

impl FieldElem {
    /// Coefficients in the power basis of `gamma`'s defining polynomial,
    /// constant first, each in `[0, p)`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// The finite-field context for one Fermat degree.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    modulus: Vec<u64>,
    m: u64,
    gamma: FieldElem,
    primitive: FieldElem,
    group_order_factors: Vec<(u64, u32)>,
}

/// Builds the field `F_p[x]/(f)` for degree `m`, with `gamma` the class of `x`.
///
/// `f` is given constant coefficient first and may contain negative entries.
pub fn build_field_ctx(p: u64, f: &[i64], m: u64) -> Result<FieldCtx, FieldError> {
    if !numtheory::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if m % p == 0 {
        return Err(FieldError::BadCharacteristic { p, m });
    }
    let mut fp: Vec<u64> = f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    fp_poly::trim(&mut fp);
    let deg = fp_poly::degree(&fp).unwrap_or(0);
    if deg < 2 || deg % 2 != 0 || fp[deg] != 1 {
        return Err(FieldError::BadPolynomial);
    }
    if !fp_poly::is_irreducible(&fp, p) {
        return Err(FieldError::NotIrreducible(p));
    }
    let mut ctx = FieldCtx::with_modulus(p, fp);
    let x = ctx.x();
    let order = ctx.element_order(&x)?;
    if order != m {
        return Err(FieldError::RootOrderMismatch {
            expected: m,
            found: order,
        });
    }
    ctx.m = m;
    ctx.gamma = x;
    Ok(ctx)
}

/// A monic irreducible factor of degree `2n` of the `m`-th cyclotomic
/// polynomial over `F_p`, chosen pseudo-randomly from `seed`.
pub fn find_defining_poly(p: u64, m: u64, seed: u64) -> Result<Vec<u64>, FieldError> {
    if !numtheory::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if m % p == 0 {
        return Err(FieldError::BadCharacteristic { p, m });
    }
    let not_pair = FieldError::NotSupersingularPair { p, m };
    if m < 3 {
        return Err(not_pair);
    }
    let d = numtheory::multiplicative_order(p, m).ok_or(not_pair.clone())?;
    if d % 2 != 0 || numtheory::pow_mod(p, d / 2, m) != m - 1 {
        return Err(not_pair);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // an auxiliary model of F_{p^d}
    let aux_modulus = loop {
        let mut cand: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        cand.push(1);
        if fp_poly::is_irreducible(&cand, p) {
            break cand;
        }
    };
    let aux = FieldCtx::with_modulus(p, aux_modulus);
    let cofactor = aux.group_order() / m;
    let root = loop {
        let a = aux.random_element(&mut rng);
        if a.is_zero() {
            continue;
        }
        let c = aux.pow(&a, cofactor);
        if aux.element_order(&c)? == m {
            break c;
        }
    };
    // minimal polynomial prod_i (X - root^{p^i})
    let mut minpoly = vec![aux.one()];
    let mut conj = root;
    for _ in 0..d {
        let mut next = vec![aux.zero(); minpoly.len() + 1];
        for (i, c) in minpoly.iter().enumerate() {
            next[i + 1] = aux.add(&next[i + 1], c);
            next[i] = aux.sub(&next[i], &aux.mul(c, &conj));
        }
        minpoly = next;
        conj = aux.pow(&conj, p);
    }
    Ok(minpoly
        .iter()
        .map(|c| {
            debug_assert!(c.coeffs[1..].iter().all(|&x| x == 0));
            c.coeffs[0] as u64
        })
        .collect())
}

impl FieldCtx {
    /// Field `F_p[x]/(f)` for a known-irreducible monic `f`, with `m = 1`.
    fn with_modulus(p: u64, modulus: Vec<u64>) -> Self {
        let deg = modulus.len() - 1;
        let size = (p as u128).pow(deg as u32);
        assert!(size <= u64::MAX as u128, "field too large");
        let group_order = size as u64 - 1;
        let half = deg as u32 / 2;
        let mut ctx = FieldCtx {
            p,
            n: half.max(1),
            q: if deg % 2 == 0 { p.pow(half) } else { 0 },
            modulus,
            m: 1,
            gamma: FieldElem { coeffs: vec![] },
            primitive: FieldElem { coeffs: vec![] },
            group_order_factors: numtheory::factor(group_order),
        };
        ctx.gamma = ctx.one();
        ctx.primitive = ctx.find_primitive();
        ctx
    }

    fn find_primitive(&self) -> FieldElem {
        let size = self.group_order() + 1;
        (1..size)
            .map(|code| self.decode(code))
            .find(|a| self.element_order(a).ok() == Some(self.group_order()))
            .expect("multiplicative group is cyclic")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `n` with `q = p^n`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Extension degree of `F_{q^2}` over `F_p`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Defining polynomial, constant coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn gamma(&self) -> &FieldElem {
        &self.gamma
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> &FieldElem {
        &self.primitive
    }

    /// `q^2 - 1`
    pub fn group_order(&self) -> u64 {
        self.group_order_factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn x(&self) -> FieldElem {
        self.from_coeffs(&[0, 1])
    }

    pub fn from_int(&self, c: i64) -> FieldElem {
        self.from_coeffs(&[c])
    }

    /// Element `sum_i c_i x^i`, reduced modulo `f` and `p`.
    pub fn from_coeffs(&self, c: &[i64]) -> FieldElem {
        let p = self.p as i64;
        let mut v: Vec<u64> = c.iter().map(|&x| x.rem_euclid(p) as u64).collect();
        if v.len() > self.degree() {
            v = fp_poly::rem(&v, &self.modulus, self.p);
        }
        let mut coeffs: Vec<u32> = v.iter().map(|&x| x as u32).collect();
        coeffs.resize(self.degree(), 0);
        FieldElem { coeffs }
    }

    /// Integer code `sum_i c_i p^i`, a bijection onto `[0, q^2)`.
    pub fn encode(&self, a: &FieldElem) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c as u64)
    }

    pub fn decode(&self, mut code: u64) -> FieldElem {
        let mut coeffs = vec![0u32; self.degree()];
        for c in coeffs.iter_mut() {
            *c = (code % self.p) as u32;
            code /= self.p;
        }
        FieldElem { coeffs }
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> FieldElem {
        FieldElem {
            coeffs: (0..self.degree())
                .map(|_| rng.gen_range(0..self.p) as u32)
                .collect(),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p as u32;
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p as u32;
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let d = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // f is monic: x^d = -(f_0 + ... + f_{d-1} x^{d-1})
        for i in (d..2 * d - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let idx = i - d + j;
                prod[idx] = (prod[idx] + p - c * self.modulus[j] % p) % p;
            }
            prod[i] = 0;
        }
        FieldElem {
            coeffs: prod[..d].iter().map(|&c| c as u32).collect(),
        }
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    /// Exact multiplicative order, a divisor of `q^2 - 1`.
    pub fn element_order(&self, a: &FieldElem) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let mut ord = self.group_order();
        for &(ell, _) in &self.group_order_factors {
            while ord % ell == 0 && self.pow(a, ord / ell) == self.one() {
                ord /= ell;
            }
        }
        Ok(ord)
    }

    /// `a^q`; fixes exactly the subfield `F_q`.
    pub fn frobenius_power(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.q)
    }

    pub fn in_base_field(&self, a: &FieldElem) -> bool {
        self.frobenius_power(a) == *a
    }

    /// Some square root of `a` in `F_{q^2}`, if one exists.
    pub fn sqrt_in_ext(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(self.zero());
        }
        let order = self.group_order();
        if self.p == 2 {
            // squaring is bijective; its inverse is a -> a^{(order + 1) / 2}
            return Some(self.pow(a, (order + 1) / 2));
        }
        if self.pow(a, order / 2) != self.one() {
            return None;
        }
        // Tonelli-Shanks with the primitive element as non-residue
        let s = order.trailing_zeros();
        let t = order >> s;
        let mut big_m = s;
        let mut c = self.pow(&self.primitive, t);
        let mut x = self.pow(a, (t + 1) / 2);
        let mut b = self.pow(a, t);
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut b2 = b.clone();
            while b2 != one {
                b2 = self.mul(&b2, &b2);
                i += 1;
            }
            let mut w = c.clone();
            for _ in 0..big_m - i - 1 {
                w = self.mul(&w, &w);
            }
            big_m = i;
            c = self.mul(&w, &w);
            x = self.mul(&x, &w);
            b = self.mul(&b, &c);
        }
        Some(x)
    }

    /// Discrete logarithm to the base of [`FieldCtx::primitive`]
    /// (baby-step giant-step).
    pub fn discrete_log(&self, a: &FieldElem) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let order = self.group_order();
        let step = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = self.one();
        for j in 0..step {
            baby.entry(self.encode(&cur)).or_insert(j);
            cur = self.mul(&cur, &self.primitive);
        }
        let giant = self.inv(&self.pow(&self.primitive, step))?;
        let mut gamma = a.clone();
        for i in 0..=step {
            if let Some(&j) = baby.get(&self.encode(&gamma)) {
                return Ok((i * step + j) % order);
            }
            gamma = self.mul(&gamma, &giant);
        }
        unreachable!("primitive element generates the group")
    }

    /// All `c` with `c^r = a`, in ascending order of their discrete logarithm.
    pub fn solve_power_equation(&self, a: &FieldElem, r: u64) -> Result<Vec<FieldElem>, FieldError> {
        assert!(r > 0);
        let k = self.discrete_log(a)?;
        let order = self.group_order();
        let d = numtheory::gcd(r, order);
        if k % d != 0 {
            return Ok(Vec::new());
        }
        let reduced = order / d;
        let x0 = if reduced == 1 {
            0
        } else {
            numtheory::mul_mod(
                k / d,
                numtheory::inv_mod((r / d) % reduced, reduced).expect("coprime"),
                reduced,
            )
        };
        Ok((0..d)
            .map(|j| self.pow(&self.primitive, x0 + j * reduced))
            .collect())
    }
}

/// A field element as a discrete logarithm; `ZERO` is a sentinel.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Lg(u32);

impl Lg {
    pub const ZERO: Lg = Lg(u32::MAX);

    pub fn is_zero(self) -> bool {
        self == Lg::ZERO
    }

    /// Exponent relative to the context's primitive element.
    pub fn exponent(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }
}

/// Zech-logarithm tables for `F_{q^2}`.
#[derive(Clone, Debug)]
pub struct LogTable {
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: u32,
}

impl LogTable {
    pub fn new(ctx: &FieldCtx) -> Self {
        let order = ctx.group_order();
        assert!(order < u32::MAX as u64, "field too large for log tables");
        let order = order as u32;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; order as usize + 1];
        let mut cur = ctx.one();
        for i in 0..order {
            let code = ctx.encode(&cur) as u32;
            exp.push(code);
            log[code as usize] = i;
            cur = ctx.mul(&cur, ctx.primitive());
        }
        let one = ctx.one();
        let zech = exp
            .iter()
            .map(|&code| {
                let s = ctx.add(&one, &ctx.decode(code as u64));
                log[ctx.encode(&s) as usize]
            })
            .collect();
        let neg_one = if ctx.p() == 2 { 0 } else { order / 2 };
        Self {
            order,
            exp,
            log,
            zech,
            neg_one,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn from_elem(&self, ctx: &FieldCtx, a: &FieldElem) -> Lg {
        Lg(self.log[ctx.encode(a) as usize])
    }

    pub fn to_elem(&self, ctx: &FieldCtx, a: Lg) -> FieldElem {
        if a.is_zero() {
            ctx.zero()
        } else {
            ctx.decode(self.exp[a.0 as usize] as u64)
        }
    }

    /// `g^e` for the primitive element `g`.
    #[inline]
    pub fn gen_pow(&self, e: u64) -> Lg {
        Lg((e % self.order as u64) as u32)
    }

    #[inline]
    pub fn one(&self) -> Lg {
        Lg(0)
    }

    #[inline]
    fn wrap(&self, s: u64) -> Lg {
        Lg((s % self.order as u64) as u32)
    }

    #[inline]
    pub fn mul(&self, a: Lg, b: Lg) -> Lg {
        if a.is_zero() || b.is_zero() {
            return Lg::ZERO;
        }
        let s = a.0 + b.0;
        Lg(if s >= self.order { s - self.order } else { s })
    }

    #[inline]
    pub fn inv(&self, a: Lg) -> Lg {
        assert!(!a.is_zero(), "inverse of zero");
        Lg(if a.0 == 0 { 0 } else { self.order - a.0 })
    }

    #[inline]
    pub fn div(&self, a: Lg, b: Lg) -> Lg {
        self.mul(a, self.inv(b))
    }

    #[inline]
    pub fn pow(&self, a: Lg, e: u64) -> Lg {
        if a.is_zero() {
            return if e == 0 { self.one() } else { Lg::ZERO };
        }
        self.wrap(a.0 as u64 * (e % self.order as u64))
    }

    #[inline]
    pub fn neg(&self, a: Lg) -> Lg {
        if a.is_zero() {
            a
        } else {
            self.mul(a, Lg(self.neg_one))
        }
    }

    #[inline]
    pub fn add(&self, a: Lg, b: Lg) -> Lg {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        // a + b = a (1 + b/a)
        let t = if b.0 >= a.0 {
            b.0 - a.0
        } else {
            b.0 + self.order - a.0
        };
        let z = self.zech[t as usize];
        if z == u32::MAX {
            Lg::ZERO
        } else {
            self.mul(a, Lg(z))
        }
    }

    #[inline]
    pub fn sub(&self, a: Lg, b: Lg) -> Lg {
        self.add(a, self.neg(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic_polynomial;

    fn septic() -> FieldCtx {
        build_field_ctx(13, &[1, 3, 1], 7).unwrap()
    }

    #[test]
    fn table_rows_build() {
        let c5 = build_field_ctx(2, &[1, 1, 1, 1, 1], 5).unwrap();
        assert_eq!((c5.q(), c5.element_order(c5.gamma()).unwrap()), (4, 5));
        let c7 = septic();
        assert_eq!((c7.q(), c7.element_order(c7.gamma()).unwrap()), (13, 7));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            build_field_ctx(5, &[1, 0, 1], 5).unwrap_err(),
            FieldError::BadCharacteristic { p: 5, m: 5 }
        );
        // x^2 + 1 = (x + 2)(x + 3) over F_5
        assert_eq!(
            build_field_ctx(5, &[1, 0, 1], 4).unwrap_err(),
            FieldError::NotIrreducible(5)
        );
        // x^2 + x + 1 is irreducible over F_2 but its root has order 3
        assert_eq!(
            build_field_ctx(2, &[1, 1, 1], 5).unwrap_err(),
            FieldError::RootOrderMismatch {
                expected: 5,
                found: 3
            }
        );
        assert_eq!(
            build_field_ctx(2, &[1, 1, 0, 1], 7).unwrap_err(),
            FieldError::BadPolynomial
        );
    }

    #[test]
    fn defining_polys() {
        assert_eq!(find_defining_poly(2, 5, 0).unwrap(), vec![1, 1, 1, 1, 1]);
        assert_eq!(
            find_defining_poly(2, 7, 0).unwrap_err(),
            FieldError::NotSupersingularPair { p: 2, m: 7 }
        );
        let f = find_defining_poly(13, 7, 1).unwrap();
        assert_eq!(f.len(), 3);
        let fi: Vec<i64> = f.iter().map(|&c| c as i64).collect();
        assert!(build_field_ctx(13, &fi, 7).is_ok());
    }

    #[test]
    fn defining_poly_divides_cyclotomic() {
        for (p, m) in [(2u64, 5u64), (13, 7), (2, 11), (5, 13), (3, 41), (2, 43), (3, 73), (1423, 89)] {
            for seed in 0..3 {
                let f = find_defining_poly(p, m, seed).unwrap();
                let phi: Vec<u64> = cyclotomic_polynomial(m)
                    .iter()
                    .map(|&c| c.rem_euclid(p as i64) as u64)
                    .collect();
                let r = fp_poly::rem(&phi, &f, p);
                assert!(fp_poly::is_zero(&r), "p={p} m={m} f={f:?}");
                let d = numtheory::multiplicative_order(p, m).unwrap();
                assert_eq!(f.len() as u64, d + 1);
            }
        }
    }

    #[test]
    fn orders_and_frobenius() {
        let ctx = septic();
        assert_eq!(ctx.element_order(&ctx.one()).unwrap(), 1);
        assert_eq!(ctx.element_order(&ctx.from_int(-1)).unwrap(), 2);
        assert_eq!(ctx.element_order(&ctx.zero()), Err(FieldError::ZeroElement));
        let g = ctx.gamma().clone();
        assert_eq!(ctx.frobenius_power(&g), ctx.pow(&g, 6));
        let beta = ctx.from_coeffs(&[10, 11]);
        assert_eq!(ctx.frobenius_power(&beta), ctx.neg(&beta));
        assert_eq!(ctx.frobenius_power(&ctx.from_int(5)), ctx.from_int(5));
    }

    #[test]
    fn square_roots() {
        let ctx = septic();
        let five = ctx.from_int(5);
        let beta = ctx.from_coeffs(&[10, 11]);
        assert_eq!(ctx.mul(&beta, &beta), five);
        let r = ctx.sqrt_in_ext(&five).unwrap();
        assert_eq!(ctx.mul(&r, &r), five);
        assert_eq!(ctx.sqrt_in_ext(&ctx.zero()), Some(ctx.zero()));
        // a primitive element is never a square in odd characteristic
        assert_eq!(ctx.sqrt_in_ext(ctx.primitive()), None);
        let c2 = build_field_ctx(2, &[1, 1, 1, 1, 1], 5).unwrap();
        for code in 0..16 {
            let a = c2.decode(code);
            let r = c2.sqrt_in_ext(&a).unwrap();
            assert_eq!(c2.mul(&r, &r), a);
        }
    }

    #[test]
    fn power_equations() {
        let ctx = septic();
        assert_eq!(ctx.solve_power_equation(&ctx.one(), 1).unwrap(), vec![ctx.one()]);
        let mut sq = ctx.solve_power_equation(&ctx.one(), 2).unwrap();
        sq.sort_by_key(|e| ctx.encode(e));
        let mut expect = vec![ctx.one(), ctx.from_int(-1)];
        expect.sort_by_key(|e| ctx.encode(e));
        assert_eq!(sq, expect);
        let g = ctx.gamma().clone();
        let roots = ctx.solve_power_equation(&g, 2).unwrap();
        assert_eq!(roots.len(), 2);
        assert_ne!(roots[0], roots[1]);
        for c in &roots {
            assert_eq!(ctx.mul(c, c), g);
        }
        assert_eq!(
            ctx.solve_power_equation(&ctx.zero(), 2),
            Err(FieldError::ZeroElement)
        );
        // a non-square has no square roots
        assert!(ctx.solve_power_equation(ctx.primitive(), 2).unwrap().is_empty());
    }

    #[test]
    fn log_table_agrees_with_dense_arithmetic() {
        let ctx = build_field_ctx(5, &[1, 2, 1, 2, 1], 13).unwrap();
        let lt = LogTable::new(&ctx);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let a = ctx.random_element(&mut rng);
            let b = ctx.random_element(&mut rng);
            let (la, lb) = (lt.from_elem(&ctx, &a), lt.from_elem(&ctx, &b));
            assert_eq!(lt.to_elem(&ctx, lt.add(la, lb)), ctx.add(&a, &b));
            assert_eq!(lt.to_elem(&ctx, lt.sub(la, lb)), ctx.sub(&a, &b));
            assert_eq!(lt.to_elem(&ctx, lt.mul(la, lb)), ctx.mul(&a, &b));
            assert_eq!(lt.to_elem(&ctx, lt.neg(la)), ctx.neg(&a));
            assert_eq!(lt.to_elem(&ctx, lt.pow(la, 77)), ctx.pow(&a, 77));
        }
    }

    proptest::proptest! {
        #[test]
        fn frobenius_is_a_field_automorphism(a in 0u64..169, b in 0u64..169) {
            let ctx = septic();
            let (x, y) = (ctx.decode(a), ctx.decode(b));
            let fx = ctx.frobenius_power(&x);
            let fy = ctx.frobenius_power(&y);
            proptest::prop_assert_eq!(ctx.frobenius_power(&ctx.mul(&x, &y)), ctx.mul(&fx, &fy));
            proptest::prop_assert_eq!(ctx.frobenius_power(&ctx.add(&x, &y)), ctx.add(&fx, &fy));
        }

        #[test]
        fn power_equation_roots_are_distinct(a in 1u64..625, r in proptest::sample::select(vec![1u64, 2, 3, 4, 8, 13, 26])) {
            let ctx = build_field_ctx(5, &[1, 2, 1, 2, 1], 13).unwrap();
            let x = ctx.decode(a);
            let roots = ctx.solve_power_equation(&x, r).unwrap();
            proptest::prop_assert!(roots.is_empty() || roots.len() as u64 == r);
            for c in &roots {
                proptest::prop_assert_eq!(ctx.pow(c, r), x.clone());
            }
            let mut codes: Vec<u64> = roots.iter().map(|c| ctx.encode(c)).collect();
            codes.sort();
            codes.dedup();
            proptest::prop_assert_eq!(codes.len(), roots.len());
        }
    }
}
