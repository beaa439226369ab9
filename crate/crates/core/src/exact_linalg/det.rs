use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use super::kernel::det_small_prime;
use super::{IntMatrix, LinalgError};
use crate::numtheory::{inv_mod, is_prime, primes_descending_from, Montgomery};

const CRT_PRIME_START: u64 = 1 << 62;

/// Product of the Euclidean row norms, each rounded up to an integer.
pub fn hadamard_bound(m: &IntMatrix) -> BigUint {
    let mut bound = BigUint::one();
    for i in 0..m.rows() {
        let sq: u128 = m.row(i).iter().map(|&x| (x as i128 * x as i128) as u128).sum();
        let mut root = sq.sqrt();
        if root * root < sq {
            root += 1;
        }
        bound *= BigUint::from(root);
    }
    bound
}

/// Determinant modulo a prime `p`.
pub fn det_mod(m: &IntMatrix, p: u64) -> Result<u64, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !is_prime(p) {
        return Err(LinalgError::BadModulus(p));
    }
    if p < 1 << 32 {
        return Ok(det_small_prime(m.to_mod(p as u32)) as u64);
    }
    if p >= 1 << 63 {
        return Err(LinalgError::BadModulus(p));
    }
    Ok(det_montgomery(m, &Montgomery::new(p)))
}

fn det_montgomery(m: &IntMatrix, mg: &Montgomery) -> u64 {
    let n = m.rows();
    let p = mg.modulus() as i128;
    let mut a: Vec<u64> = m
        .data()
        .iter()
        .map(|&x| mg.to_mont((x as i128).rem_euclid(p) as u64))
        .collect();
    let mut det = mg.to_mont(1);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if piv != c {
            for j in c..n {
                a.swap(piv * n + j, c * n + j);
            }
            det = mg.sub(0, det);
        }
        let pv = a[c * n + c];
        det = mg.mul(det, pv);
        let inv = mg.inv(pv);
        let (head, tail) = a.split_at_mut((c + 1) * n);
        let prow = &head[c * n + c..c * n + n];
        for row in tail.chunks_exact_mut(n) {
            let x = row[c];
            if x == 0 {
                continue;
            }
            let f = mg.mul(x, inv);
            for (dst, &src) in row[c..].iter_mut().zip(prow) {
                *dst = mg.sub(*dst, mg.mul(f, src));
            }
        }
    }
    mg.from_mont(det)
}

/// Exact determinant by Chinese remaindering over word-size primes.
///
/// Primes are taken downward from `2^62` until their product exceeds twice
/// the Hadamard bound; residues are computed on all available cores and
/// recombined serially into the symmetric residue.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Ok(BigInt::one());
    }
    let bound = hadamard_bound(m);
    if bound.is_zero() {
        return Ok(BigInt::zero());
    }
    let target = bound << 1u32;
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    for p in primes_descending_from(CRT_PRIME_START) {
        product *= p;
        primes.push(p);
        if product > target {
            break;
        }
    }
    let residues = residues_parallel(m, &primes);

    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&p, &r) in primes.iter().zip(&residues) {
        let x_mod = (&x % p).to_u64().unwrap();
        let m_mod = (&modulus % p).to_u64().unwrap();
        let t = crate::numtheory::mul_mod(
            (r + p - x_mod) % p,
            inv_mod(m_mod, p).expect("distinct primes"),
            p,
        );
        x += &modulus * t;
        modulus *= p;
    }
    debug_assert!(modulus > target);
    let half = &modulus >> 1u32;
    Ok(if x > half {
        BigInt::from(x) - BigInt::from(modulus)
    } else {
        BigInt::from(x)
    })
}

fn residues_parallel(m: &IntMatrix, primes: &[u64]) -> Vec<u64> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(primes.len());
    if workers <= 1 {
        return primes
            .iter()
            .map(|&p| det_montgomery(m, &Montgomery::new(p)))
            .collect();
    }
    let mut out = vec![0u64; primes.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    primes
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(workers)
                        .map(|(i, &p)| (i, det_montgomery(m, &Montgomery::new(p))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("residue worker panicked") {
                out[i] = r;
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det_exact(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![7, -3]]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(-13));
        assert_eq!(det_mod(&m, 5).unwrap(), 2);
        assert_eq!(det_mod(&m, 2).unwrap(), 1);
        let big_p = primes_descending_from(1 << 62).next().unwrap();
        assert_eq!(det_mod(&m, big_p).unwrap(), big_p - 13);
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(det_exact(&singular).unwrap(), BigInt::zero());
        assert!(matches!(
            det_exact(&IntMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
        assert_eq!(det_mod(&m, 4), Err(LinalgError::BadModulus(4)));
    }

    #[test]
    fn large_determinant_needs_several_primes() {
        // diag(10^9, ..., 10^9) has a 180-digit determinant
        let n = 20;
        let m = IntMatrix::from_fn(n, n, |i, j| if i == j { 1_000_000_000 } else { 0 });
        let expect = BigInt::from(10u32).pow(9 * n as u32);
        assert_eq!(det_exact(&m).unwrap(), expect);
        let neg = IntMatrix::from_fn(n, n, |i, j| if i == j { -1_000_000_000 } else { 0 });
        assert_eq!(det_exact(&neg).unwrap(), expect);
    }
}
