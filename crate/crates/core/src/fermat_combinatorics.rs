//! Numerical invariants of the degree-`m` Fermat surface and the character
//! sets that control its Picard number.
//!
//! A character is a 4-tuple `(a0, a1, a2, a3)` of residues mod `m` summing to
//! zero. `A_m` collects those with no zero entry, `B_m` those whose whole
//! `(Z/m)^*`-orbit has weight 2, and `D_m` the decomposable ones
//! (`a0 + aj = 0` for some `j`).

use serde::Serialize;
use thiserror::Error;

use crate::numtheory::gcd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("character {0:?} has a zero coordinate")]
    ZeroCoordinate([u64; 4]),
    #[error("degree must be at least {min}, got {m}")]
    DegreeTooSmall { m: u64, min: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub a: [u64; 4],
}

impl Character {
    /// Builds a character from arbitrary integers, reducing mod `m`.
    /// Returns `None` unless the entries sum to zero mod `m`.
    pub fn new(a: [i64; 4], m: u64) -> Option<Self> {
        let red = a.map(|x| x.rem_euclid(m as i64) as u64);
        (red.iter().sum::<u64>() % m == 0).then_some(Self { a: red })
    }

    pub fn neg(&self, m: u64) -> Self {
        Self {
            a: self.a.map(|x| (m - x) % m),
        }
    }

    pub fn scale(&self, r: u64, m: u64) -> Self {
        Self {
            a: self.a.map(|x| x * r % m),
        }
    }

    pub fn has_zero(&self) -> bool {
        self.a.contains(&0)
    }

    /// `a0 + aj = 0 (mod m)` for family `j` in `1..=3`.
    pub fn decomposable_for(&self, j: usize, m: u64) -> bool {
        (self.a[0] + self.a[j]) % m == 0
    }

    pub fn is_decomposable(&self, m: u64) -> bool {
        (1..=3).any(|j| self.decomposable_for(j, m))
    }
}

/// `|alpha|`: the sum of the representatives in `(0, m)` divided by `m`.
pub fn weight(alpha: &Character, m: u64) -> Result<u64, CombinatoricsError> {
    if alpha.has_zero() {
        return Err(CombinatoricsError::ZeroCoordinate(alpha.a));
    }
    let s: u64 = alpha.a.iter().sum();
    debug_assert_eq!(s % m, 0);
    Ok(s / m)
}

#[derive(Clone, Debug)]
pub struct CharacterSets {
    pub m: u64,
    pub a: Vec<Character>,
    pub b: Vec<Character>,
    pub d: Vec<Character>,
    /// `D_m^j` for `j = 1, 2, 3`; a character may appear in several.
    pub d_family: [Vec<Character>; 3],
}

/// Enumerates `A_m`, `B_m`, `D_m` in lexicographic order.
pub fn character_sets(m: u64) -> Result<CharacterSets, CombinatoricsError> {
    if m < 2 {
        return Err(CombinatoricsError::DegreeTooSmall { m, min: 2 });
    }
    let in_b = b_membership(m);
    let mut sets = CharacterSets {
        m,
        a: Vec::new(),
        b: Vec::new(),
        d: Vec::new(),
        d_family: [Vec::new(), Vec::new(), Vec::new()],
    };
    for_each_a(m, |idx, c| {
        sets.a.push(c);
        if in_b[idx] {
            sets.b.push(c);
        }
        if c.is_decomposable(m) {
            sets.d.push(c);
        }
        for j in 1..=3 {
            if c.decomposable_for(j, m) {
                sets.d_family[j - 1].push(c);
            }
        }
    });
    Ok(sets)
}

/// Visits `A_m` in lexicographic order with the index `a0 m^2 + a1 m + a2`.
fn for_each_a(m: u64, mut visit: impl FnMut(usize, Character)) {
    for a0 in 1..m {
        for a1 in 1..m {
            for a2 in 1..m {
                let a3 = (3 * m - a0 - a1 - a2) % m;
                if a3 != 0 {
                    visit(((a0 * m + a1) * m + a2) as usize, Character { a: [a0, a1, a2, a3] });
                }
            }
        }
    }
}

/// Bitmap over `(a0, a1, a2)` marking members of `B_m`. Each `(Z/m)^*`-orbit
/// is evaluated once and marked wholesale.
fn b_membership(m: u64) -> Vec<bool> {
    let size = (m * m * m) as usize;
    let mut seen = vec![false; size];
    let mut in_b = vec![false; size];
    let units: Vec<u64> = (1..m).filter(|&r| gcd(r, m) == 1).collect();
    let mut orbit = Vec::with_capacity(units.len());
    for_each_a(m, |idx, c| {
        if seen[idx] {
            return;
        }
        orbit.clear();
        let mut all_two = true;
        for &r in &units {
            let s = c.scale(r, m);
            if s.a.iter().sum::<u64>() != 2 * m {
                all_two = false;
            }
            orbit.push(((s.a[0] * m + s.a[1]) * m + s.a[2]) as usize);
        }
        for &o in &orbit {
            seen[o] = true;
            in_b[o] = all_two;
        }
    });
    in_b
}

/// `#B_m`, without materializing the sets.
pub fn count_b(m: u64) -> u64 {
    if m < 2 {
        return 0;
    }
    b_membership(m).iter().filter(|&&x| x).count() as u64
}

/// Closed form for `#D_m`.
pub fn count_d_formula(m: u64) -> u64 {
    if m < 2 {
        return 0;
    }
    3 * (m - 1) * (m - 2) + u64::from(m % 2 == 0)
}

/// Whether the lines span `NS(S) ⊗ Q`, i.e. `D_m = B_m`, decided by
/// enumeration.
pub fn rational_generation_test(m: u64) -> bool {
    // D_m ⊆ B_m always, so equality is a count comparison
    let mut d = 0u64;
    if m >= 2 {
        for_each_a(m, |_, c| d += u64::from(c.is_decomposable(m)));
    }
    d == count_b(m)
}

/// Closed-form predicate for [`rational_generation_test`].
pub fn rational_generation_predicate(m: u64) -> bool {
    m <= 4 || gcd(m, 6) == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub m: u64,
    pub b2: i64,
    pub pg: i64,
    pub chi: i64,
    pub e: i64,
    pub ksq: i64,
    pub h11: i64,
    pub rho: i64,
    pub lambda: i64,
    pub count_a: i64,
    pub count_b: i64,
    pub count_d: i64,
}

pub fn surface_invariants(m: u64) -> Result<SurfaceInvariants, CombinatoricsError> {
    if m < 1 {
        return Err(CombinatoricsError::DegreeTooSmall { m, min: 1 });
    }
    let mi = m as i64;
    let b2 = mi * mi * mi - 4 * mi * mi + 6 * mi - 2;
    let pg = if mi >= 4 {
        (mi - 1) * (mi - 2) * (mi - 3) / 6
    } else {
        0
    };
    let chi = 1 + pg;
    let ksq = mi * (mi - 4) * (mi - 4);
    let e = 12 * chi - ksq;
    let count_b = count_b(m) as i64;
    let rho = count_b + 1;
    Ok(SurfaceInvariants {
        m,
        b2,
        pg,
        chi,
        e,
        ksq,
        h11: b2 - 2 * pg,
        rho,
        lambda: b2 - rho,
        count_a: (mi - 1) * (mi * mi - 3 * mi + 3),
        count_b,
        count_d: count_d_formula(m) as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        let w = |a: [i64; 4], m| weight(&Character::new(a, m).unwrap(), m);
        assert_eq!(w([1, 4, 2, 3], 5), Ok(2));
        assert_eq!(w([1, 1, 1, 2], 5), Ok(1));
        assert_eq!(w([6, 6, 6, 3], 7), Ok(3));
        assert_eq!(
            w([0, 1, 2, 2], 5),
            Err(CombinatoricsError::ZeroCoordinate([0, 1, 2, 2]))
        );
    }

    #[test]
    fn small_sets() {
        let s5 = character_sets(5).unwrap();
        assert_eq!((s5.a.len(), s5.b.len(), s5.d.len()), (52, 36, 36));
        let s4 = character_sets(4).unwrap();
        assert_eq!((s4.d.len(), s4.b.len()), (19, 19));
        let s6 = character_sets(6).unwrap();
        assert_eq!(s6.d.len(), 61);
        assert!(s6.b.len() > 61);
        assert_eq!(s6.b.len() as u64, count_b(6));
    }

    #[test]
    fn invariants() {
        let i5 = surface_invariants(5).unwrap();
        assert_eq!((i5.rho, i5.b2), (37, 53));
        let i7 = surface_invariants(7).unwrap();
        assert_eq!((i7.rho, i7.b2, i7.pg), (91, 187, 20));
        assert_eq!(surface_invariants(4).unwrap().rho, 20);
        assert_eq!(surface_invariants(1).unwrap().rho, 1);
        for m in 1..30 {
            let s = surface_invariants(m).unwrap();
            assert_eq!(12 * s.chi, s.e + s.ksq);
            assert_eq!(s.b2, s.e - 2);
            if m >= 2 {
                assert_eq!(s.count_a, s.b2 - 1);
            }
        }
    }

    #[test]
    fn generation_test_small() {
        for m in 1..=30 {
            assert_eq!(rational_generation_test(m), rational_generation_predicate(m), "m={m}");
        }
    }
}
