use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::duality::{consistency_warning, orbit_columns};
use super::{
    CertifyError, Certificate, CoverSummary, DiscRecord, DiscSummary, Mode, PairSpec, Verdict,
    PREMISES, SCHEMA_VERSION,
};
use crate::char_p_divisors::{
    char3_line, find_cover_params, line_incidence, orbit_table_index, CoverCtx, OrbitEngine, ProjLine,
};
use crate::exact_linalg::{det_exact, factorize, rank_mod, squarefree_gcd_criterion, IntMatrix, LinalgError};
use crate::fermat_combinatorics::surface_invariants;
use crate::line_lattice::{gram_matrix, rational_basis, StandardLine};
use crate::numtheory::is_prime;

/// Degrees with a built-in discriminant-mode data set.
pub const DISCRIMINANT_DEGREES: [u64; 5] = [4, 5, 7, 11, 13];

/// Reduction data for discriminant mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantData {
    pub m: u64,
    pub p: u64,
    pub f: Vec<i64>,
    /// The special pair; empty for `m = 4`, which uses explicit lines.
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    /// Orbit elements added to the line basis.
    pub extra: ExtraSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtraSet {
    /// The two explicit lines of the quartic in characteristic 3.
    QuarticLines,
    /// Indices `nu = m^2 j + m k + l + 1`.
    Indices(Vec<u64>),
    /// `{mult * nu mod b2 : 1 <= nu <= lambda}` in the numbering of
    /// [`sigma_for_index`].
    Multiplier(u64),
}

impl DiscriminantData {
    pub fn for_degree(m: u64) -> Option<Self> {
        let (p, f, alpha, beta, extra): (u64, Vec<i64>, Vec<i64>, Vec<i64>, ExtraSet) = match m {
            4 => (3, vec![1, 0, 1], vec![], vec![], ExtraSet::QuarticLines),
            5 => (
                2,
                vec![1; 5],
                vec![1, 0, 1, 1],
                vec![0, 0, 1, 1],
                ExtraSet::Indices(vec![32, 33, 34, 35, 36, 37, 38, 39, 44, 80, 81, 82, 83, 84, 93, 95]),
            ),
            7 => (13, vec![1, 5, 1], vec![2], vec![1, 3], ExtraSet::Multiplier(31)),
            11 => (
                2,
                vec![1; 11],
                vec![0, 0, 0, 1, 1, 1, 1, 1, 1],
                vec![1, 0, 0, 1, 1, 1, 1, 1, 1],
                ExtraSet::Multiplier(253),
            ),
            13 => (
                5,
                vec![1, 1, -1, 1, 1],
                vec![0, 1, 2, 2],
                vec![3, -1, -1],
                ExtraSet::Multiplier(5),
            ),
            _ => return None,
        };
        Some(Self {
            m,
            p,
            f,
            alpha,
            beta,
            extra,
        })
    }
}

fn from_factors(sign: i64, factors: &[(u64, u32)]) -> BigInt {
    factors
        .iter()
        .fold(BigInt::from(sign), |acc, &(p, e)| acc * BigInt::from(p).pow(e))
}

/// Reference values `(disc N, disc N_p)` for the built-in data sets.
pub fn reference_discriminants(m: u64) -> Option<(BigInt, BigInt)> {
    Some(match m {
        4 => (BigInt::from(-64), BigInt::from(-9)),
        5 => (from_factors(1, &[(5, 12)]), from_factors(1, &[(2, 16)])),
        7 => (from_factors(1, &[(7, 48)]), from_factors(1, &[(13, 40)])),
        11 => (
            from_factors(1, &[(11, 192)]),
            from_factors(1, &[(2, 1202), (5, 4), (7, 4), (23, 48), (43, 16), (131, 16), (439, 2)]),
        ),
        13 => (
            from_factors(1, &[(13, 300)]),
            from_factors(
                1,
                &[
                    (2, 4),
                    (3, 144),
                    (5, 912),
                    (53, 16),
                    (103, 32),
                    (677, 16),
                    (1151, 2),
                    (40627, 2),
                    (42_702_482_453_593, 2),
                    (247_634_616_308_749, 2),
                ],
            ),
        ),
        _ => return None,
    })
}

/// Orbit element with index `nu` in `1..=b2`:
/// `(j, k, l)` with `0 <= j, k < m - 1`, `0 < l < m - 1` gets
/// `1 + j + (m-1) k + (m-1)^2 (l-1)`; `(j, 0, 0)` gets `b2 - (m-1) + j`
/// for `0 <= j < m - 1`, and `(m-1, m-2, m-2)` gets `b2`.
pub fn sigma_for_index(nu: u64, m: u64) -> Option<[u64; 3]> {
    let n = m - 1;
    let inner = n * n * (m - 2);
    let b2 = inner + n + 1;
    match nu {
        0 => None,
        _ if nu <= inner => {
            let t = nu - 1;
            Some([t % n, (t / n) % n, t / (n * n) + 1])
        }
        _ if nu < b2 => Some([nu - (b2 - n), 0, 0]),
        _ if nu == b2 => Some([m - 1, m - 2, m - 2]),
        _ => None,
    }
}

/// `{mult * nu mod b2 : 1 <= nu <= lambda}`, residue 0 read as `b2`.
pub fn mixed_basis_sigmas(m: u64, mult: u64) -> Result<Vec<[u64; 3]>, CertifyError> {
    let inv = surface_invariants(m)?;
    let (b2, lambda) = (inv.b2 as u64, inv.lambda as u64);
    Ok((1..=lambda)
        .map(|nu| {
            let x = mult * nu % b2;
            sigma_for_index(if x == 0 { b2 } else { x }, m).expect("index in range")
        })
        .collect())
}

fn record(value: &BigInt, rank: usize) -> Result<DiscRecord, LinalgError> {
    Ok(DiscRecord {
        value: value.to_string(),
        factorization: factorize(value)?.to_string(),
        rank,
    })
}

/// Gram matrix of `B` followed by the orbit elements `extra`.
fn mixed_gram(
    engine: &OrbitEngine,
    basis: &[StandardLine],
    extra: &[[u64; 3]],
) -> Result<IntMatrix, CertifyError> {
    let m = engine.cover().params().m;
    let gram = gram_matrix(basis, m)?;
    let cols = orbit_columns(engine, basis, extra)?;
    let table = engine.orbit_gram_table();
    let nb = basis.len();
    Ok(IntMatrix::from_fn(nb + extra.len(), nb + extra.len(), |i, j| {
        match (i < nb, j < nb) {
            (true, true) => gram.get(i, j),
            (true, false) => cols[j - nb][i],
            (false, true) => cols[i - nb][j],
            (false, false) => {
                let (a, b) = (extra[i - nb], extra[j - nb]);
                table[orbit_table_index(std::array::from_fn(|t| (b[t] + m - a[t]) % m), m)]
            }
        }
    }))
}

/// The two extra lines of the quartic over `F_9`:
/// `[s, s + t, s - t, t]` and `[s, gamma (s + t), s - t, t]`.
pub fn quartic_extra_lines(cover: &CoverCtx) -> [ProjLine; 2] {
    let f = cover.field();
    let l3 = char3_line(f);
    let g = f.gamma();
    let mut l3p = l3.clone();
    for pt in l3p.points.iter_mut() {
        pt[1] = f.mul(g, &pt[1]);
    }
    [l3, l3p]
}

/// Gram matrix of the quartic basis extended by the two extra lines.
pub fn quartic_reduction_gram(cover: &CoverCtx) -> Result<IntMatrix, CertifyError> {
    let basis = rational_basis(4)?;
    let gram = gram_matrix(&basis, 4)?;
    let f = cover.field();
    let mut lines: Vec<ProjLine> = basis.iter().map(|b| cover.standard_line(b)).collect();
    lines.extend(quartic_extra_lines(cover));
    let nb = basis.len();
    Ok(IntMatrix::from_fn(lines.len(), lines.len(), |i, j| {
        if i < nb && j < nb {
            gram.get(i, j)
        } else {
            line_incidence(&lines[i], &lines[j], 4, f)
        }
    }))
}

/// Runs the discriminant criterion with the built-in data for `m`.
pub fn certify_discriminant(m: u64) -> Result<Certificate, CertifyError> {
    let start = Instant::now();
    let data = DiscriminantData::for_degree(m).ok_or(CertifyError::UnsupportedDegree(m))?;
    let params = find_cover_params(m)?;
    if params.p != data.p {
        return Err(CertifyError::BadConfig(format!(
            "cover for degree {m} has p = {}, data uses {}",
            params.p, data.p
        )));
    }
    let cover = CoverCtx::new(params, &data.f)?;
    let basis = rational_basis(m)?;
    let lattice_gram = gram_matrix(&basis, m)?;
    let mut warnings = Vec::new();
    let mut failed = false;

    let reduction_gram = match &data.extra {
        ExtraSet::QuarticLines => quartic_reduction_gram(&cover)?,
        extra => {
            let field = cover.field();
            let engine = OrbitEngine::new(&cover, &field.from_coeffs(&data.alpha), &field.from_coeffs(&data.beta))?;
            if let Some(w) = consistency_warning(&engine) {
                warnings.push(w);
                failed = true;
            }
            let sigmas: Vec<[u64; 3]> = match extra {
                ExtraSet::Indices(ix) => ix
                    .iter()
                    .map(|&nu| {
                        let t = nu - 1;
                        [t / (m * m), (t / m) % m, t % m]
                    })
                    .collect(),
                ExtraSet::Multiplier(mult) => mixed_basis_sigmas(m, *mult)?,
                ExtraSet::QuarticLines => unreachable!(),
            };
            mixed_gram(&engine, &basis, &sigmas)?
        }
    };

    let d1 = det_exact(&lattice_gram)?;
    let d2 = det_exact(&reduction_gram)?;
    if d1.is_zero() || d2.is_zero() {
        return Err(LinalgError::ZeroDiscriminant.into());
    }
    if let Some((e1, e2)) = reference_discriminants(m) {
        for (what, e, d) in [("disc(N)", e1, &d1), ("disc(N_p)", e2, &d2)] {
            if e != *d {
                return Err(CertifyError::OracleMismatch {
                    what: format!("{what} for degree {m}"),
                    expected: e.to_string(),
                    found: d.to_string(),
                });
            }
        }
    }
    let squarefree = match squarefree_gcd_criterion(&d1, &d2) {
        Ok(b) => Some(b),
        Err(LinalgError::Indeterminate(c)) => {
            warnings.push(format!("gcd has unclassified cofactor {c}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = if failed {
        Verdict::Failed
    } else if squarefree == Some(true) {
        Verdict::Generated
    } else {
        Verdict::Inconclusive
    };
    let pairs = if data.alpha.is_empty() {
        Vec::new()
    } else {
        vec![PairSpec {
            alpha: data.alpha.clone(),
            beta: data.beta.clone(),
        }]
    };
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        m,
        mode: Mode::Discriminant,
        cover: CoverSummary::from(&params),
        f: data.f.clone(),
        f_source: "builtin",
        pairs,
        per_ell: Vec::new(),
        discs: Some(DiscSummary {
            lattice: record(&d1, lattice_gram.rows())?,
            reduction: record(&d2, reduction_gram.rows())?,
            squarefree_gcd: squarefree,
        }),
        verdict,
        seed: 0,
        schedule: None,
        premises: PREMISES.to_vec(),
        warnings,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Ranks for a pair whose orbit spans too little.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeControl {
    pub primes: [u32; 2],
    /// Rank of the whole orbit on its own, modulo each prime.
    pub orbit_only_ranks: [usize; 2],
    /// Rank of the lines together with the whole orbit.
    pub orbit_ranks: [usize; 2],
    /// Rank of the lines together with the indexed orbit divisors.
    pub indexed_ranks: [usize; 2],
    pub b2: usize,
}

fn random_prime(rng: &mut ChaCha8Rng) -> u32 {
    loop {
        let c = rng.gen_range(1u32 << 30..1u32 << 31) | 1;
        if is_prime(c as u64) {
            return c;
        }
    }
}

/// Degree 7, `p = 13`, `alpha = 1`, `beta = sqrt(2)`: ranks of the lines
/// combined with pushed-down special curves, modulo two random primes.
pub fn negative_control(seed: u64) -> Result<NegativeControl, CertifyError> {
    let m = 7;
    let params = find_cover_params(m)?;
    let cover = CoverCtx::new(params, &[1, 5, 1])?;
    let f = cover.field();
    let alpha = f.one();
    let beta = f
        .sqrt_in_ext(&f.from_int(2))
        .ok_or_else(|| CertifyError::BadConfig("2 has no square root".into()))?;
    let engine = OrbitEngine::new(&cover, &alpha, &beta)?;
    let basis = rational_basis(m)?;
    let orbit: Vec<[u64; 3]> = (0..m * m * m).map(|i| [i / (m * m), (i / m) % m, i % m]).collect();
    let b2 = surface_invariants(m)?.b2 as u64;
    let indexed: Vec<[u64; 3]> = (1..=b2).map(|nu| sigma_for_index(nu, m).unwrap()).collect();
    let g_orbit = mixed_gram(&engine, &basis, &orbit)?;
    let g_indexed = mixed_gram(&engine, &basis, &indexed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes = [random_prime(&mut rng), random_prime(&mut rng)];
    while primes[1] == primes[0] {
        primes[1] = random_prime(&mut rng);
    }
    let rank = |g: &IntMatrix, l: u32| rank_mod(&g.to_mod(l));
    let nb = basis.len();
    let g_only = IntMatrix::from_fn(orbit.len(), orbit.len(), |i, j| g_orbit.get(nb + i, nb + j));
    Ok(NegativeControl {
        primes,
        orbit_only_ranks: primes.map(|l| rank(&g_only, l)),
        orbit_ranks: primes.map(|l| rank(&g_orbit, l)),
        indexed_ranks: primes.map(|l| rank(&g_indexed, l)),
        b2: b2 as usize,
    })
}
