use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::LinalgError;
use crate::numtheory::is_prime;

/// Trial division stops at this bound.
pub const TRIAL_DIVISION_CAP: u64 = 10_000_000;

/// Prime factorization of a nonzero integer, possibly with cofactors that
/// could not be split. Every prime factor of an unresolved cofactor exceeds
/// [`TRIAL_DIVISION_CAP`] and the cofactor is not a perfect power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    pub primes: Vec<(BigUint, u32)>,
    pub unresolved: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Exponent of a prime in the factorization.
    pub fn exponent_of(&self, p: u64) -> u32 {
        let p = BigUint::from(p);
        self.primes
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// `Some(true/false)` when squarefreeness is decided, `None` otherwise.
    pub fn is_squarefree(&self) -> Option<bool> {
        if self.primes.iter().chain(&self.unresolved).any(|&(_, e)| e > 1) {
            return Some(false);
        }
        // below cap^3 a cofactor has at most two prime factors, and it is
        // not a square
        let cube = BigUint::from(TRIAL_DIVISION_CAP).pow(3);
        if self.unresolved.iter().all(|(c, _)| *c < cube) {
            Some(true)
        } else {
            None
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .primes
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        parts.extend(self.unresolved.iter().map(|(c, e)| {
            if *e == 1 {
                format!("[{c}]")
            } else {
                format!("[{c}]^{e}")
            }
        }));
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}{}", if self.negative { "-" } else { "" }, parts.join(" * "))
    }
}

/// Trial division to [`TRIAL_DIVISION_CAP`], then primality testing,
/// perfect-power extraction and Pollard rho. Every entry of `primes` is
/// proven prime; what cannot be split stays in `unresolved`.
pub fn factorize(n: &BigInt) -> Result<Factorization, LinalgError> {
    if n.is_zero() {
        return Err(LinalgError::ZeroDiscriminant);
    }
    let mut rest = n.magnitude().clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_CAP {
        if BigUint::from(d) * d > rest {
            break;
        }
        let mut e = 0;
        while rem_small(&rest, d) == 0 {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            primes.push((BigUint::from(d), e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut unresolved = Vec::new();
    if !rest.is_one() {
        split_cofactor(rest, 1, &mut primes, &mut unresolved);
    }
    primes.sort();
    merge(&mut primes);
    unresolved.sort();
    Ok(Factorization {
        negative: n.sign() == Sign::Minus,
        primes,
        unresolved,
    })
}

fn rem_small(n: &BigUint, d: u64) -> u64 {
    let digits: Vec<u32> = n.iter_u32_digits().collect();
    digits
        .iter()
        .rev()
        .fold(0u64, |r, &x| ((r << 32) | x as u64) % d)
}

fn merge(v: &mut Vec<(BigUint, u32)>) {
    let mut out: Vec<(BigUint, u32)> = Vec::with_capacity(v.len());
    for (p, e) in v.drain(..) {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    *v = out;
}

/// `c` has no prime factor up to the trial-division cap.
fn split_cofactor(
    c: BigUint,
    mult: u32,
    primes: &mut Vec<(BigUint, u32)>,
    unresolved: &mut Vec<(BigUint, u32)>,
) {
    let cap = BigUint::from(TRIAL_DIVISION_CAP);
    if c < &cap * &cap {
        primes.push((c, mult));
        return;
    }
    if let Some(w) = c.to_u64() {
        if is_prime(w) {
            primes.push((c, mult));
        } else {
            let f = (1..).find_map(|c| pollard_brent_u128(w as u128, c, u64::MAX)).unwrap() as u64;
            split_cofactor(BigUint::from(f), mult, primes, unresolved);
            split_cofactor(BigUint::from(w / f), mult, primes, unresolved);
        }
        return;
    }
    for k in (2..=c.bits() as u32 / 23).rev() {
        let root = c.nth_root(k);
        if root.pow(k) == c {
            split_cofactor(root, mult * k, primes, unresolved);
            return;
        }
    }
    if let Some(w) = c.to_u128() {
        if !probably_prime(&c) {
            if let Some(f) = pollard_brent_u128(w, 1, RHO_STEP_LIMIT) {
                split_cofactor(BigUint::from(f), mult, primes, unresolved);
                split_cofactor(BigUint::from(w / f), mult, primes, unresolved);
                return;
            }
        }
    }
    unresolved.push((c, mult));
}

/// Iteration budget for rho on cofactors between `2^64` and `2^128`;
/// enough for prime factors up to about `10^15`.
const RHO_STEP_LIMIT: u64 = 1 << 25;

/// Miller-Rabin with the first twelve prime bases. Only used to skip rho on
/// likely primes; such cofactors stay unresolved.
fn probably_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// `a * b` as `(high, low)` 128-bit halves.
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let lo = a0 * b0;
    let mid1 = a0 * b1;
    let mid2 = a1 * b0;
    let hi = a1 * b1;
    let (mid, carry_mid) = mid1.overflowing_add(mid2);
    let (lo2, carry_lo) = lo.overflowing_add(mid << 64);
    let hi2 = hi + (mid >> 64) + ((carry_mid as u128) << 64) + carry_lo as u128;
    (hi2, lo2)
}

/// Montgomery multiplication modulo an odd `n` with `R = 2^128`.
struct Mont128 {
    n: u128,
    n_neg_inv: u128,
}

impl Mont128 {
    fn new(n: u128) -> Self {
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        Self {
            n,
            n_neg_inv: inv.wrapping_neg(),
        }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        let m = lo.wrapping_mul(self.n_neg_inv);
        let (mhi, mlo) = mul_wide(m, self.n);
        let carry = lo.overflowing_add(mlo).1 as u128;
        let (t, overflow1) = hi.overflowing_add(mhi);
        let (t, overflow2) = t.overflowing_add(carry);
        if overflow1 || overflow2 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho on `x^2 + c` (in Montgomery form, which
/// leaves gcds unchanged), giving up after `limit` steps.
fn pollard_brent_u128(n: u128, c: u128, limit: u64) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mont = Mont128::new(n);
    let f = |x: u128| {
        let y = mont.mul(x, x);
        let (s, o) = y.overflowing_add(c);
        if o || s >= n { s.wrapping_sub(n) } else { s }
    };
    let batch = 128;
    let (mut y, mut q, mut g) = (2u128, 1u128, 1u128);
    let mut x = y;
    let mut ys = y;
    let mut r = 1u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = f(y);
                q = mont.mul(q, x.abs_diff(y));
            }
            g = gcd_u128(q, n);
            k += batch;
        }
        steps += 2 * r;
        r *= 2;
        if steps > limit {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g != 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Whether `gcd(|d1|, |d2|)` is squarefree.
///
/// Returns [`LinalgError::Indeterminate`] when the gcd keeps a cofactor that
/// is too large to classify.
pub fn squarefree_gcd_criterion(d1: &BigInt, d2: &BigInt) -> Result<bool, LinalgError> {
    if d1.is_zero() || d2.is_zero() {
        return Err(LinalgError::ZeroDiscriminant);
    }
    let g = BigInt::from(d1.magnitude().gcd(d2.magnitude()));
    let f = factorize(&g)?;
    f.is_squarefree().ok_or_else(|| {
        LinalgError::Indeterminate(
            f.unresolved
                .iter()
                .map(|(c, _)| c.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn criterion_examples() {
        let five12 = BigInt::from(5).pow(12);
        let two16 = BigInt::from(2).pow(16);
        assert_eq!(squarefree_gcd_criterion(&five12, &two16), Ok(true));
        assert_eq!(squarefree_gcd_criterion(&big(12), &big(18)), Ok(true));
        assert_eq!(squarefree_gcd_criterion(&big(8), &big(12)), Ok(false));
        assert_eq!(squarefree_gcd_criterion(&big(-64), &big(-9)), Ok(true));
        assert_eq!(
            squarefree_gcd_criterion(&big(0), &big(3)),
            Err(LinalgError::ZeroDiscriminant)
        );
    }

    #[test]
    fn factorizations() {
        let f = factorize(&big(-64)).unwrap();
        assert_eq!(f.to_string(), "-2^6");
        assert_eq!(f.exponent_of(2), 6);
        // two primes above the cap
        let (p, q) = (10_000_019u64, 10_000_079u64);
        let f = factorize(&(BigInt::from(p) * q * 12)).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.to_string(), format!("2^2 * 3 * {p} * {q}"));
        // a square of a large prime is found through perfect-power extraction
        let big_p = BigInt::from(247_634_616_308_749u64);
        let f = factorize(&(&big_p * &big_p * 5)).unwrap();
        assert_eq!(f.to_string(), "5 * 247634616308749^2");
        assert_eq!(f.is_squarefree(), Some(false));
    }

    #[test]
    fn splits_cofactors_beyond_u64() {
        let p: BigInt = "42702482453593".parse().unwrap();
        let q: BigInt = "247634616308749".parse().unwrap();
        let n = BigInt::from(3).pow(5) * (&p * &q).pow(2);
        let f = factorize(&n).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.to_string(), "3^5 * 42702482453593^2 * 247634616308749^2");
    }

    #[test]
    fn random_semiprimes_above_u64() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut prime = |bits: u32| loop {
            let c = rng.gen_range(1u64 << (bits - 1)..1u64 << bits) | 1;
            if is_prime(c) {
                break c;
            }
        };
        for bits in [33, 36, 40] {
            let (p, q) = (prime(bits), prime(bits + 2));
            let n = BigInt::from(p) * BigInt::from(q);
            assert!(n.bits() > 64);
            let mut want = vec![p.to_string(), q.to_string()];
            want.sort_by_key(|s| s.parse::<u64>().unwrap());
            assert_eq!(factorize(&n).unwrap().to_string(), want.join(" * "));
        }
    }

    #[test]
    fn indeterminate_cofactor() {
        // product of three primes just above 2^64 is out of reach
        let ps = ["18446744073709551629", "18446744073709551653", "18446744073709551667"];
        let n: BigInt = ps.iter().map(|s| s.parse::<BigInt>().unwrap()).product();
        assert!(matches!(
            squarefree_gcd_criterion(&n, &n),
            Err(LinalgError::Indeterminate(_))
        ));
    }
}
