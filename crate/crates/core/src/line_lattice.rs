//! The `3m^2` lines of the complex Fermat surface of degree `m`, their
//! intersection pairing, the rational basis, eigendivisors with cyclotomic
//! coefficients and the relation-matrix determinants.
//!
//! With `gamma` a fixed primitive `m`-th root of unity the lines are
//!
//! ```text
//! l1(k, l) = [s, w g^k s, t, w g^l t]
//! l2(k, l) = [s, t, w g^k s, w g^l t]
//! l3(k, l) = [s, t, w g^l t, w g^k s]
//! ```
//!
//! where `w^m = -1`. For odd `m` we take `w = -1`; for even `m`, `w` is a
//! primitive `2m`-th root with `w^2 = gamma`. Roots of unity only ever appear
//! as exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cyclotomic::{CycloInt, CycloRing};
use crate::exact_linalg::{det_exact, IntMatrix};
use crate::fermat_combinatorics::Character;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u64, found: u64 },
    #[error("no rational basis is implemented for degree {0}")]
    UnsupportedDegree(u64),
    #[error("character {alpha:?} is not decomposable for family {family}")]
    NotDecomposableForFamily { family: u8, alpha: [u64; 4] },
    #[error("invalid line: family {family}, exponents ({k}, {l}) for degree {m}")]
    InvalidLine { m: u64, family: u8, k: u64, l: u64 },
}

/// A line `l_j(k, l)` on the degree-`m` Fermat surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardLine {
    pub m: u32,
    pub family: u8,
    pub k: u32,
    pub l: u32,
}

impl StandardLine {
    pub fn new(m: u64, family: u8, k: u64, l: u64) -> Result<Self, LatticeError> {
        if !(1..=3).contains(&family) || m < 1 || m > u32::MAX as u64 {
            return Err(LatticeError::InvalidLine { m, family, k, l });
        }
        Ok(Self {
            m: m as u32,
            family,
            k: (k % m) as u32,
            l: (l % m) as u32,
        })
    }

    /// Exponent of `w^2` in powers of `gamma`.
    fn omega_sq(m: u32) -> u32 {
        u32::from(m % 2 == 0)
    }

    /// Line-line pairing for two lines of the same degree.
    pub fn pairing(&self, other: &StandardLine) -> i64 {
        debug_assert_eq!(self.m, other.m);
        if self == other {
            return 2 - self.m as i64;
        }
        let (x, y) = if self.family <= other.family {
            (self, other)
        } else {
            (other, self)
        };
        let m = x.m as u64;
        let (k, l, k2, l2) = (x.k as u64, x.l as u64, y.k as u64, y.l as u64);
        let meets = match (x.family, y.family) {
            (a, b) if a == b => k == k2 || l == l2,
            (1, 2) => (k + l2) % m == (k2 + l) % m,
            (1, 3) => k2 == (Self::omega_sq(x.m) as u64 + k + l + l2) % m,
            (2, 3) => (k + l) % m == (k2 + l2) % m,
            _ => unreachable!("families are 1..=3"),
        };
        i64::from(meets)
    }
}

impl fmt::Display for StandardLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}({},{})", self.family, self.k, self.l)
    }
}

/// A line or the hyperplane class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    H,
    Line(StandardLine),
}

impl From<StandardLine> for Generator {
    fn from(l: StandardLine) -> Self {
        Generator::Line(l)
    }
}

fn check_degree(g: &Generator, m: u64) -> Result<(), LatticeError> {
    match g {
        Generator::Line(l) if l.m as u64 != m => Err(LatticeError::DegreeMismatch {
            expected: m,
            found: l.m as u64,
        }),
        _ => Ok(()),
    }
}

/// Intersection number of two generators on the degree-`m` surface.
pub fn line_pairing(x: &Generator, y: &Generator, m: u64) -> Result<i64, LatticeError> {
    check_degree(x, m)?;
    check_degree(y, m)?;
    Ok(match (x, y) {
        (Generator::H, Generator::H) => m as i64,
        (Generator::H, _) | (_, Generator::H) => 1,
        (Generator::Line(a), Generator::Line(b)) => a.pairing(b),
    })
}

/// All `3m^2` lines, ordered by family, then `k`, then `l`.
pub fn all_lines(m: u64) -> Vec<StandardLine> {
    let mut out = Vec::with_capacity(3 * (m * m) as usize);
    for family in 1..=3 {
        for k in 0..m {
            for l in 0..m {
                out.push(StandardLine::new(m, family, k, l).unwrap());
            }
        }
    }
    out
}

/// The rational basis of the line lattice.
///
/// For odd `m`: `l_j(k, l)` with `0 <= k < m-1`, `0 < l < m-1`, ordered by
/// family, `k`, `l`, followed by `l1(m-1, 1)`. For `m = 4` every exponent `l`
/// is shifted down by one and `l2(0, 2)` is appended.
pub fn rational_basis(m: u64) -> Result<Vec<StandardLine>, LatticeError> {
    let shift = match m {
        4 => 1,
        m if m >= 3 && m % 2 == 1 => 0,
        _ => return Err(LatticeError::UnsupportedDegree(m)),
    };
    let mut out = Vec::with_capacity(3 * ((m - 1) * (m - 2)) as usize + 2);
    for family in 1..=3 {
        for k in 0..m - 1 {
            for l in 1..m - 1 {
                out.push(StandardLine::new(m, family, k, l - shift)?);
            }
        }
    }
    out.push(StandardLine::new(m, 1, m - 1, 1 - shift)?);
    if m == 4 {
        out.push(StandardLine::new(m, 2, 0, m - 2)?);
    }
    Ok(out)
}

/// Gram matrix of a list of lines.
pub fn gram_matrix(lines: &[StandardLine], m: u64) -> Result<IntMatrix, LatticeError> {
    if let Some(bad) = lines.iter().find(|l| l.m as u64 != m) {
        return Err(LatticeError::DegreeMismatch {
            expected: m,
            found: bad.m as u64,
        });
    }
    Ok(IntMatrix::from_fn(lines.len(), lines.len(), |i, j| {
        lines[i].pairing(&lines[j])
    }))
}

/// A finite combination of lines and `H` with coefficients in `Z[zeta_m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDivisor {
    m: u64,
    terms: BTreeMap<Generator, CycloInt>,
}

impl FormalDivisor {
    pub fn zero(m: u64) -> Self {
        Self {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn hyperplane(m: u64) -> Self {
        let ring = CycloRing::new(m);
        let mut d = Self::zero(m);
        d.terms.insert(Generator::H, ring.from_integer(1));
        d
    }

    pub fn degree(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &Generator) -> Option<&CycloInt> {
        self.terms.get(g)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &CycloInt)> {
        self.terms.iter()
    }

    /// Adds `c * g`, dropping terms that cancel.
    pub fn add_term(&mut self, ring: &CycloRing, g: Generator, c: CycloInt) {
        let sum = match self.terms.remove(&g) {
            Some(old) => ring.add(&old, &c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(g, sum);
        }
    }
}

/// The eigendivisor `w_j(alpha)` for `alpha` in `D_m^j`:
///
/// ```text
/// w1 = sum z^a1 e^a3 l1(z, e)
/// w2 = sum z^a2 e^a3 l2(z, e)
/// w3 = sum z^a3 e^a2 l3(z, e)
/// ```
pub fn eigendivisor(family: u8, alpha: &Character, m: u64) -> Result<FormalDivisor, LatticeError> {
    if !(1..=3).contains(&family) || !alpha.decomposable_for(family as usize, m) {
        return Err(LatticeError::NotDecomposableForFamily {
            family,
            alpha: alpha.a,
        });
    }
    let a = alpha.a;
    let (ek, el) = match family {
        1 => (a[1], a[3]),
        2 => (a[2], a[3]),
        _ => (a[3], a[2]),
    };
    let ring = CycloRing::new(m);
    let mut d = FormalDivisor::zero(m);
    for k in 0..m {
        for l in 0..m {
            let e = (ek * k + el * l) % m;
            d.add_term(
                &ring,
                StandardLine::new(m, family, k, l)?.into(),
                ring.root_power(e as i64),
            );
        }
    }
    Ok(d)
}

/// Bilinear extension of [`line_pairing`].
pub fn eigendivisor_pairing(
    u: &FormalDivisor,
    v: &FormalDivisor,
    m: u64,
) -> Result<CycloInt, LatticeError> {
    for d in [u, v] {
        if d.m != m {
            return Err(LatticeError::DegreeMismatch {
                expected: m,
                found: d.m,
            });
        }
    }
    let ring = CycloRing::new(m);
    let mut total = ring.from_integer(0);
    for (x, cx) in &u.terms {
        let mut inner = vec![0i64; cx.coeffs().len()];
        for (y, cy) in &v.terms {
            let w = line_pairing(x, y, m)?;
            if w != 0 {
                for (acc, c) in inner.iter_mut().zip(cy.coeffs()) {
                    *acc += w * c;
                }
            }
        }
        let mut circ = vec![0i64; m as usize];
        circ[..inner.len()].copy_from_slice(&inner);
        total = ring.add(&total, &ring.mul(cx, &ring.reduce_circular(&circ)));
    }
    Ok(total)
}

/// The `m x m` blocks of the relation matrix: `D` has ones at `(i, i+1)` and
/// `(m-1, 0)`, and `B = D^T = D^{-1}`.
#[derive(Clone, Debug)]
pub struct RelationBlocks {
    pub m: usize,
    pub b: IntMatrix,
    pub d: IntMatrix,
}

impl RelationBlocks {
    pub fn new(m: usize) -> Self {
        let d = IntMatrix::from_fn(m, m, |i, j| i64::from(j == (i + 1) % m));
        Self {
            m,
            b: d.transpose(),
            d,
        }
    }

    /// `sum_k c_k X_k + U(r)` where `U(r)` has ones in row `r` (1-based).
    pub fn combine(&self, ident: i64, b: i64, d: i64, r: usize) -> IntMatrix {
        IntMatrix::from_fn(self.m, self.m, |i, j| {
            ident * i64::from(i == j)
                + b * self.b.get(i, j)
                + d * self.d.get(i, j)
                + i64::from(i + 1 == r)
        })
    }
}

/// `(det(B - I + U(r)), det(D - I + U(r)), det(2I - B - D + U(2)))`.
pub fn relation_block_determinants(m: u64, r: u64) -> (i64, i64, i64) {
    assert!(m >= 2 && (1..=m).contains(&r), "need m >= 2 and 1 <= r <= m");
    let blocks = RelationBlocks::new(m as usize);
    let det = |x: IntMatrix| -> i64 {
        det_exact(&x)
            .expect("square")
            .to_i64()
            .expect("small determinant")
    };
    (
        det(blocks.combine(-1, 1, 0, r as usize)),
        det(blocks.combine(-1, 0, 1, r as usize)),
        det(blocks.combine(2, -1, -1, 2)),
    )
}

/// `m^(3 (m-3)^2)`, the conjectured determinant of the rational-basis Gram
/// matrix for odd `m`.
pub fn expected_basis_determinant(m: u64) -> BigInt {
    BigInt::from(m).pow(3 * ((m as u32) - 3).pow(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(m: u64, j: u8, k: u64, l: u64) -> Generator {
        StandardLine::new(m, j, k, l).unwrap().into()
    }

    #[test]
    fn pairing_examples() {
        let p = |x, y| line_pairing(&x, &y, 5).unwrap();
        assert_eq!(p(line(5, 1, 0, 0), line(5, 1, 0, 0)), -3);
        assert_eq!(p(line(5, 1, 0, 0), line(5, 1, 1, 2)), 0);
        assert_eq!(p(line(5, 1, 0, 0), line(5, 2, 1, 1)), 1);
        assert_eq!(p(Generator::H, line(5, 3, 2, 4)), 1);
        assert_eq!(p(Generator::H, Generator::H), 5);
        assert_eq!(
            line_pairing(&line(5, 1, 0, 0), &line(7, 1, 0, 0), 5),
            Err(LatticeError::DegreeMismatch {
                expected: 5,
                found: 7
            })
        );
    }

    #[test]
    fn basis_shapes() {
        assert_eq!(rational_basis(5).unwrap().len(), 37);
        assert_eq!(rational_basis(7).unwrap().len(), 91);
        let b4 = rational_basis(4).unwrap();
        assert_eq!(b4.len(), 20);
        assert_eq!(*b4.last().unwrap(), StandardLine::new(4, 2, 0, 2).unwrap());
        assert_eq!(rational_basis(6), Err(LatticeError::UnsupportedDegree(6)));
    }

    #[test]
    fn gram_shape() {
        let g = gram_matrix(&rational_basis(7).unwrap(), 7).unwrap();
        assert!(g.is_symmetric());
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let v = g.get(i, j);
                assert!(if i == j { v == -5 } else { v == 0 || v == 1 });
            }
        }
    }

    #[test]
    fn small_discriminants() {
        for m in [5u64, 7] {
            let g = gram_matrix(&rational_basis(m).unwrap(), m).unwrap();
            assert_eq!(det_exact(&g).unwrap(), expected_basis_determinant(m));
        }
        let g4 = gram_matrix(&rational_basis(4).unwrap(), 4).unwrap();
        assert_eq!(det_exact(&g4).unwrap(), BigInt::from(-64));
    }

    #[test]
    fn eigendivisor_errors() {
        let alpha = Character::new([1, 1, 1, 2], 5).unwrap();
        assert!(matches!(
            eigendivisor(2, &alpha, 5),
            Err(LatticeError::NotDecomposableForFamily { family: 2, .. })
        ));
        let alpha = Character::new([1, -1, 1, -1], 5).unwrap();
        let w = eigendivisor(1, &alpha, 5).unwrap();
        assert_eq!(w.len(), 25);
        let c = w.coefficient(&line(5, 1, 0, 0)).unwrap();
        assert_eq!(c.as_integer(), Some(1));
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(relation_block_determinants(5, 1), (5, 5, 25));
        assert_eq!(relation_block_determinants(7, 3), (7, 7, 49));
        assert_eq!(relation_block_determinants(4, 2), (-4, -4, 16));
    }
}
