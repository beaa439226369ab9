//! Integer cyclotomic polynomials and exact arithmetic in `Z[x]/(Phi_m)`.

use std::fmt;

/// Coefficients of the `m`-th cyclotomic polynomial over `Z`, constant first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division by a monic integer polynomial; panics on a nonzero remainder.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let (q, r) = div_rem_monic(num, den);
    assert!(r.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}

fn div_rem_monic(num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![0], rem);
    }
    let mut quo = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quo[i - dd] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i - dd + j] -= c * dj;
        }
    }
    rem.truncate(dd);
    (quo, rem)
}

/// An element of `Z[zeta_m]`, stored as a polynomial of degree `< phi(m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    coeffs: Vec<i64>,
}

impl CycloInt {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs.iter().skip(1).all(|&c| c == 0) {
            Some(self.coeffs.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                terms.push(match i {
                    0 => format!("{c}"),
                    1 => format!("{c}z"),
                    _ => format!("{c}z^{i}"),
                });
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The ring `Z[x]/(Phi_m)`.
#[derive(Clone, Debug)]
pub struct CycloRing {
    m: u64,
    phi: Vec<i64>,
}

impl CycloRing {
    pub fn new(m: u64) -> Self {
        Self {
            m,
            phi: cyclotomic_polynomial(m),
        }
    }

    pub fn degree(&self) -> u64 {
        self.m
    }

    /// Reduces a polynomial in `Z[x]/(x^m - 1)` (length `m` exponent vector)
    /// to its canonical representative modulo `Phi_m`.
    pub fn reduce_circular(&self, exps: &[i64]) -> CycloInt {
        let (_, mut rem) = div_rem_monic(exps, &self.phi);
        rem.resize(self.phi.len() - 1, 0);
        CycloInt { coeffs: rem }
    }

    pub fn from_integer(&self, n: i64) -> CycloInt {
        let mut v = vec![0i64; self.m as usize];
        v[0] = n;
        self.reduce_circular(&v)
    }

    /// `zeta^e`
    pub fn root_power(&self, e: i64) -> CycloInt {
        let mut v = vec![0i64; self.m as usize];
        v[e.rem_euclid(self.m as i64) as usize] = 1;
        self.reduce_circular(&v)
    }

    pub fn add(&self, a: &CycloInt, b: &CycloInt) -> CycloInt {
        CycloInt {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn mul(&self, a: &CycloInt, b: &CycloInt) -> CycloInt {
        let mut v = vec![0i64; self.m as usize];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                v[(i + j) % self.m as usize] += x * y;
            }
        }
        self.reduce_circular(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len(), 49);
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn sum_of_roots_is_integral() {
        let ring = CycloRing::new(7);
        // 1 + z + ... + z^6 = 0 in Z[zeta_7]
        let all = vec![1i64; 7];
        assert!(ring.reduce_circular(&all).is_zero());
        let z3 = ring.root_power(3);
        let z4 = ring.root_power(4);
        assert_eq!(ring.mul(&z3, &z4).as_integer(), Some(1));
    }
}
