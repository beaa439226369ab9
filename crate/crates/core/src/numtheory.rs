//! Word-size number theory: modular powers, deterministic Miller-Rabin,
//! prime-power detection, trial-division factoring and Montgomery arithmetic.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
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

/// Floor of the `k`-th root of `n`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / k as f64).round() as u64;
    // float estimate is within one of the answer for u64 inputs; fix up exactly
    let pow_le = |x: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..k {
            acc *= x as u128;
            if acc > n as u128 {
                return false;
            }
        }
        true
    };
    while x > 0 && !pow_le(x) {
        x -= 1;
    }
    while pow_le(x + 1) {
        x += 1;
    }
    x
}

/// Writes `n = base^exp` with `exp` maximal.
pub fn perfect_power(n: u64) -> (u64, u32) {
    if n < 4 {
        return (n, 1);
    }
    let mut best = (n, 1);
    let max_k = 64 - n.leading_zeros();
    for k in 2..=max_k {
        let r = iroot(n, k);
        if r < 2 {
            break;
        }
        if r.checked_pow(k) == Some(n) {
            best = (r, k);
        }
    }
    if best.1 > 1 {
        // the root itself may be a perfect power
        let (b, e) = perfect_power(best.0);
        return (b, e * best.1);
    }
    best
}

/// Returns `(p, n)` with `q = p^n` and `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let (base, exp) = perfect_power(q);
    is_prime(base).then_some((base, exp))
}

/// Trial-division factorization into `(prime, exponent)` pairs, ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factor(phi) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Primes below `start`, in descending order.
pub fn primes_descending_from(start: u64) -> impl Iterator<Item = u64> {
    let mut cand = start;
    std::iter::from_fn(move || {
        while cand > 2 {
            cand -= 1;
            if is_prime(cand) {
                return Some(cand);
            }
        }
        None
    })
}

/// Montgomery arithmetic for an odd modulus below 2^63.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    modulus: u64,
    /// `-modulus^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod modulus`
    r2: u64,
}

impl Montgomery {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus % 2 == 1 && modulus < 1 << 63, "unsupported modulus");
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(modulus.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % modulus as u128) as u64;
        let r2 = mul_mod(r, r, modulus);
        Self {
            modulus,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.modulus as u128) >> 64) as u64;
        if u >= self.modulus {
            u - self.modulus
        } else {
            u
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.reduce((a % self.modulus) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero Montgomery-form element (Fermat; modulus prime).
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.modulus - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_matches_sieve() {
        let n = 20_000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &s) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), s, "{i}");
        }
        assert!(is_prime(4_611_686_018_427_387_847)); // 2^62 - 57
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(729), Some((3, 6)));
        assert_eq!(prime_power(1423), Some((1423, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1156), None);
        assert_eq!(prime_power(1 << 40), Some((2, 40)));
        assert_eq!(perfect_power(1 << 60), (2, 60));
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(13, 7), Some(2));
        assert_eq!(multiplicative_order(5, 10), None);
    }

    #[test]
    fn montgomery_roundtrip() {
        let p = primes_descending_from(1 << 62).next().unwrap();
        let mg = Montgomery::new(p);
        let a = 123_456_789_012_345u64;
        let b = p - 17;
        let prod = mg.from_mont(mg.mul(mg.to_mont(a), mg.to_mont(b)));
        assert_eq!(prod, mul_mod(a, b, p));
        let ai = mg.inv(mg.to_mont(a));
        assert_eq!(mg.from_mont(mg.mul(ai, mg.to_mont(a))), 1);
    }
}
