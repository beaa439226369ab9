//! Divisors that only exist after supersingular reduction.
//!
//! For a degree `m` we pick `r` with `q = rm - 1 = p^n` a prime power. The
//! Fermat surface of degree `rm = q + 1` over `F_{q^2}` carries the extra
//! lines
//!
//! ```text
//! l(a, b) = [s, a s + b t, b s + a t, t],   b^2 = 1 + a^2,  b^(q-1) = -1,
//! ```
//!
//! and the coordinatewise `r`-th power map `phi` pushes them down to curves
//! `D = phi(l(a, b))` on the degree-`m` surface. Pairings with `D` are
//! evaluated upstairs through the projection formula, so only line-line
//! incidences are ever computed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field_tower::{build_field_ctx, FieldCtx, FieldElem, FieldError, Lg, LogTable};
use crate::line_lattice::StandardLine;
use crate::numtheory::{is_prime, multiplicative_order, pow_mod, prime_power};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharPError {
    #[error("characteristic {p} divides the degree {m}")]
    BadCharacteristic { p: u64, m: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no r <= {bound} makes r*{m} - 1 a prime power")]
    SearchLimitExceeded { m: u64, bound: u64 },
    #[error("no admissible (alpha, beta) found after {attempts} attempts")]
    NoPairFound { attempts: u32 },
    #[error("line does not lie on the Fermat surface of degree {degree}")]
    ValidationFailed { degree: u64 },
    #[error("invalid special pair: {0}")]
    InvalidPair(String),
    #[error("the field has no root of unity of order {0}")]
    MissingRootOfUnity(u64),
    #[error("no r-th root of a line coefficient exists in the field")]
    RootExtractionFailed,
    #[error("a pulled-back line coincides with the orbit line")]
    CoincidentLine,
    #[error("cover parameters do not match the field: {0}")]
    CoverMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Whether `-1` lies in the subgroup of `(Z/m)^*` generated by `p`.
pub fn is_supersingular_prime(p: u64, m: u64) -> Result<bool, CharPError> {
    if !is_prime(p) {
        return Err(CharPError::NotPrime(p));
    }
    if m % p == 0 {
        return Err(CharPError::BadCharacteristic { p, m });
    }
    if m <= 2 {
        // -1 = 1 in Z/1 and Z/2
        return Ok(true);
    }
    let d = multiplicative_order(p, m).expect("p is a unit mod m");
    Ok(d % 2 == 0 && pow_mod(p, d / 2, m) == m - 1)
}

/// `q = r m - 1 = p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverParams {
    pub m: u64,
    pub r: u64,
    pub q: u64,
    pub p: u64,
    pub n: u32,
}

impl CoverParams {
    pub fn from_r(m: u64, r: u64) -> Option<Self> {
        let q = r.checked_mul(m)?.checked_sub(1)?;
        let (p, n) = prime_power(q)?;
        (m % p != 0).then_some(Self { m, r, q, p, n })
    }

    /// Degree `rm = q + 1` of the covering surface.
    pub fn cover_degree(&self) -> u64 {
        self.r * self.m
    }
}

pub const DEFAULT_COVER_SEARCH_BOUND: u64 = 64;

/// Smallest `r` with `rm - 1` a prime power.
pub fn find_cover_params(m: u64) -> Result<CoverParams, CharPError> {
    find_cover_params_bounded(m, DEFAULT_COVER_SEARCH_BOUND)
}

pub fn find_cover_params_bounded(m: u64, bound: u64) -> Result<CoverParams, CharPError> {
    (1..=bound)
        .find_map(|r| CoverParams::from_r(m, r))
        .ok_or(CharPError::SearchLimitExceeded { m, bound })
}

/// Adjunction value `4r - 2 - rm` for the image of a line of degree `r`.
pub fn pushdown_self_intersection(cover: &CoverParams) -> i64 {
    let (r, m) = (cover.r as i64, cover.m as i64);
    4 * r - 2 - r * m
}

/// A line in `P^3` over `F_{q^2}`, given by two spanning points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    pub points: [[FieldElem; 4]; 2],
}

impl ProjLine {
    pub fn new(p: [FieldElem; 4], q: [FieldElem; 4]) -> Self {
        Self { points: [p, q] }
    }

    /// Spanning points are linearly independent.
    pub fn is_nondegenerate(&self, ctx: &FieldCtx) -> bool {
        rank(ctx, self.points.to_vec()) == 2
    }

    pub fn same_line(&self, other: &ProjLine, ctx: &FieldCtx) -> bool {
        let mut rows = self.points.to_vec();
        rows.extend(other.points.iter().cloned());
        rank(ctx, rows) == 2
    }
}

/// Rank of a list of vectors over the field.
fn rank(ctx: &FieldCtx, mut rows: Vec<[FieldElem; 4]>) -> usize {
    let mut r = 0;
    for c in 0..4 {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = ctx.inv(&rows[r][c]).expect("nonzero pivot");
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = ctx.mul(&rows[i][c], &inv);
            for j in c..4 {
                let t = ctx.mul(&f, &rows[r][j]);
                rows[i][j] = ctx.sub(&rows[i][j], &t);
            }
        }
        r += 1;
    }
    r
}

/// Binomial coefficient `C(n, k) mod p` by Lucas' theorem.
fn binomial_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..ki {
            c = c * ((ni - i) % p) % p;
            c = c * crate::numtheory::inv_mod(i + 1, p).unwrap() % p;
        }
        acc = acc * c % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Whether `sum_i (a_i s + b_i t)^degree` vanishes identically, where
/// `a` and `b` are the spanning points.
///
/// For `degree = q + 1` the expansion uses `z^(q+1) = z^q z` and has four
/// coefficients; otherwise each binomial coefficient is reduced mod `p`.
pub fn validate_line_on_surface(line: &ProjLine, degree: u64, ctx: &FieldCtx) -> bool {
    if !line.is_nondegenerate(ctx) {
        return false;
    }
    let [a, b] = &line.points;
    let q = ctx.q();
    if degree == q + 1 && q > 1 {
        let mut sums = [ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero()];
        for i in 0..4 {
            let (aq, bq) = (ctx.frobenius_power(&a[i]), ctx.frobenius_power(&b[i]));
            let terms = [
                ctx.mul(&aq, &a[i]),
                ctx.mul(&aq, &b[i]),
                ctx.mul(&bq, &a[i]),
                ctx.mul(&bq, &b[i]),
            ];
            for (s, t) in sums.iter_mut().zip(&terms) {
                *s = ctx.add(s, t);
            }
        }
        return sums.iter().all(FieldElem::is_zero);
    }
    let p = ctx.p();
    (0..=degree).all(|t| {
        let c = binomial_mod_p(degree, t, p);
        if c == 0 {
            return true;
        }
        let mut s = ctx.zero();
        for i in 0..4 {
            let term = ctx.mul(&ctx.pow(&a[i], t), &ctx.pow(&b[i], degree - t));
            s = ctx.add(&s, &term);
        }
        ctx.mul(&s, &ctx.from_int(c as i64)).is_zero()
    })
}

/// `[x0, x1, x2, x3] -> [z^j x0, z^k x1, z^l x2, x3]` for `sigma = (j, k, l)`.
pub fn group_act(sigma: [u64; 3], root: &FieldElem, line: &ProjLine, ctx: &FieldCtx) -> ProjLine {
    let scale: Vec<FieldElem> = sigma.iter().map(|&e| ctx.pow(root, e)).collect();
    let act = |pt: &[FieldElem; 4]| -> [FieldElem; 4] {
        [
            ctx.mul(&scale[0], &pt[0]),
            ctx.mul(&scale[1], &pt[1]),
            ctx.mul(&scale[2], &pt[2]),
            pt[3].clone(),
        ]
    };
    ProjLine::new(act(&line.points[0]), act(&line.points[1]))
}

/// Intersection number of two lines on the Fermat surface of the given
/// degree: `2 - degree` if equal, 1 if coplanar, else 0.
pub fn line_incidence(l1: &ProjLine, l2: &ProjLine, degree: u64, ctx: &FieldCtx) -> i64 {
    let mut rows = l1.points.to_vec();
    rows.extend(l2.points.iter().cloned());
    match rank(ctx, rows) {
        2 => 2 - degree as i64,
        3 => 1,
        _ => 0,
    }
}

/// `l(alpha, beta)` spanned by `(1, a, b, 0)` and `(0, b, a, 1)`.
pub fn special_line(alpha: &FieldElem, beta: &FieldElem, ctx: &FieldCtx) -> ProjLine {
    ProjLine::new(
        [ctx.one(), alpha.clone(), beta.clone(), ctx.zero()],
        [ctx.zero(), beta.clone(), alpha.clone(), ctx.one()],
    )
}

/// Checks `alpha in F_q^*`, `beta^2 = 1 + alpha^2`, `beta^(q-1) = -1`, and
/// that the line lies on the degree-`(q+1)` surface.
pub fn check_special_pair(
    alpha: &FieldElem,
    beta: &FieldElem,
    ctx: &FieldCtx,
) -> Result<(), CharPError> {
    let bad = |s: &str| Err(CharPError::InvalidPair(s.into()));
    if alpha.is_zero() || beta.is_zero() {
        return bad("alpha and beta must be nonzero");
    }
    if !ctx.in_base_field(alpha) {
        return bad("alpha is not in F_q");
    }
    let one = ctx.one();
    if ctx.mul(beta, beta) != ctx.add(&one, &ctx.mul(alpha, alpha)) {
        return bad("beta^2 != 1 + alpha^2");
    }
    if ctx.pow(beta, ctx.q() - 1) != ctx.neg(&one) {
        return bad("beta^(q-1) != -1");
    }
    let line = special_line(alpha, beta, ctx);
    if !validate_line_on_surface(&line, ctx.q() + 1, ctx) {
        return Err(CharPError::ValidationFailed { degree: ctx.q() + 1 });
    }
    Ok(())
}

pub const DEFAULT_PAIR_ATTEMPTS: u32 = 10_000;

/// A random admissible `(alpha, beta)` for the degree-`(q+1)` surface.
pub fn find_special_line(
    ctx: &FieldCtx,
    cover: &CoverParams,
    seed: u64,
) -> Result<(FieldElem, FieldElem), CharPError> {
    if cover.q != ctx.q() || cover.p != ctx.p() {
        return Err(CharPError::CoverMismatch(format!(
            "cover q = {}, field q = {}",
            cover.q,
            ctx.q()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = ctx.q();
    // F_q^* is generated by g^(q+1)
    let base_gen = ctx.pow(ctx.primitive(), q + 1);
    for _ in 0..DEFAULT_PAIR_ATTEMPTS {
        let alpha = ctx.pow(&base_gen, rng.gen_range(0..q - 1));
        let rhs = ctx.add(&ctx.one(), &ctx.mul(&alpha, &alpha));
        if rhs.is_zero() {
            continue;
        }
        let Some(root) = ctx.sqrt_in_ext(&rhs) else {
            continue;
        };
        // canonical sign choice
        let neg = ctx.neg(&root);
        let beta = if ctx.encode(&neg) < ctx.encode(&root) { neg } else { root };
        if check_special_pair(&alpha, &beta, ctx).is_ok() {
            return Ok((alpha, beta));
        }
    }
    Err(CharPError::NoPairFound {
        attempts: DEFAULT_PAIR_ATTEMPTS,
    })
}

/// `[s, a(s + a t), a(a s - t), t]` for a primitive cube root of unity `a`
/// in `F_q`; requires `q = 1 mod 3`.
pub fn third_root_line(ctx: &FieldCtx) -> Option<ProjLine> {
    let q = ctx.q();
    if q % 3 != 1 {
        return None;
    }
    let a = ctx.pow(ctx.primitive(), (q * q - 1) / 3);
    let a2 = ctx.mul(&a, &a);
    Some(ProjLine::new(
        [ctx.one(), a.clone(), a2.clone(), ctx.zero()],
        [ctx.zero(), a2, ctx.neg(&a), ctx.one()],
    ))
}

/// `[s, s + t, s - t, t]`, on every Fermat surface of degree `3^n + 1` in
/// characteristic 3.
pub fn char3_line(ctx: &FieldCtx) -> ProjLine {
    ProjLine::new(
        [ctx.one(), ctx.one(), ctx.one(), ctx.zero()],
        [ctx.zero(), ctx.one(), ctx.from_int(-1), ctx.one()],
    )
}

/// Coordinates `(a0, a1, b0, b1)` such that family-`j` lines are
/// `{x_a1 = c x_a0, x_b1 = d x_b0}`.
fn family_coords(family: u8) -> [usize; 4] {
    match family {
        1 => [0, 1, 2, 3],
        2 => [0, 2, 1, 3],
        _ => [0, 3, 1, 2],
    }
}

/// Line `{x_a1 = c x_a0, x_b1 = d x_b0}` as a [`ProjLine`].
fn line_from_forms(family: u8, c: &FieldElem, d: &FieldElem, ctx: &FieldCtx) -> ProjLine {
    let [a0, a1, b0, b1] = family_coords(family);
    let mut p: [FieldElem; 4] = std::array::from_fn(|_| ctx.zero());
    let mut q = p.clone();
    p[a0] = ctx.one();
    p[a1] = c.clone();
    q[b0] = ctx.one();
    q[b1] = d.clone();
    ProjLine::new(p, q)
}

/// A field for one degree together with the roots of unity the
/// constructions need: `gamma` (order `m`), `omega` with `omega^m = -1`
/// and a lift `gamma_hat` of order `rm` with `gamma_hat^r = gamma`.
#[derive(Clone, Debug)]
pub struct CoverCtx {
    params: CoverParams,
    field: FieldCtx,
    omega: FieldElem,
    gamma_hat: FieldElem,
    logs: LogTable,
}

impl CoverCtx {
    /// Builds the field from `f` and checks it against the cover.
    pub fn new(params: CoverParams, f: &[i64]) -> Result<Self, CharPError> {
        let field = build_field_ctx(params.p, f, params.m)?;
        Self::from_field(params, field)
    }

    pub fn from_field(params: CoverParams, field: FieldCtx) -> Result<Self, CharPError> {
        if field.q() != params.q || field.m() != params.m {
            return Err(CharPError::CoverMismatch(format!(
                "field has q = {}, m = {}; cover has q = {}, m = {}",
                field.q(),
                field.m(),
                params.q,
                params.m
            )));
        }
        let m = params.m;
        let gamma = field.gamma().clone();
        let omega = if m % 2 == 1 {
            field.from_int(-1)
        } else {
            root_with_order(&field, &gamma, 2, 2 * m)?
        };
        let gamma_hat = root_with_order(&field, &gamma, params.r, params.r * m)?;
        let logs = LogTable::new(&field);
        Ok(Self {
            params,
            field,
            omega,
            gamma_hat,
            logs,
        })
    }

    /// Replaces `omega` by another root with `omega^m = -1` (and
    /// `omega^2 = gamma` for even `m`).
    pub fn with_omega(mut self, omega: FieldElem) -> Result<Self, CharPError> {
        let f = &self.field;
        let m = self.params.m;
        let ok = f.pow(&omega, m) == f.from_int(-1) && (m % 2 == 1 || f.mul(&omega, &omega) == *f.gamma());
        if !ok {
            return Err(CharPError::MissingRootOfUnity(2 * m));
        }
        self.omega = omega;
        Ok(self)
    }

    pub fn params(&self) -> &CoverParams {
        &self.params
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn logs(&self) -> &LogTable {
        &self.logs
    }

    pub fn omega(&self) -> &FieldElem {
        &self.omega
    }

    pub fn gamma_hat(&self) -> &FieldElem {
        &self.gamma_hat
    }

    /// `gamma` for order `m`, `gamma_hat` for order `rm`, `omega` for `2m`.
    pub fn root_of_unity(&self, order: u64) -> Result<&FieldElem, CharPError> {
        let m = self.params.m;
        if order == m {
            Ok(self.field.gamma())
        } else if order == self.params.cover_degree() {
            Ok(&self.gamma_hat)
        } else if order == 2 * m && m % 2 == 0 {
            Ok(&self.omega)
        } else {
            Err(CharPError::MissingRootOfUnity(order))
        }
    }

    /// The reduction of a standard line of degree `m`.
    pub fn standard_line(&self, b: &StandardLine) -> ProjLine {
        let f = &self.field;
        let g = f.gamma();
        let c = f.mul(&self.omega, &f.pow(g, b.k as u64));
        let d = f.mul(&self.omega, &f.pow(g, b.l as u64));
        line_from_forms(b.family, &c, &d, f)
    }

    /// `sigma_hat(l)` for the lexicographically least lift of `sigma`,
    /// shifted by `shift * m` when another lift is wanted.
    pub fn lifted_orbit_line(&self, d: &OrbitDivisor, shift: [u64; 3]) -> ProjLine {
        let m = self.params.m;
        let lift = [
            d.sigma[0] % m + shift[0] * m,
            d.sigma[1] % m + shift[1] * m,
            d.sigma[2] % m + shift[2] * m,
        ];
        let base = special_line(&d.alpha, &d.beta, &self.field);
        group_act(lift, &self.gamma_hat, &base, &self.field)
    }
}

/// Among the `c` with `c^e = a`, the first (in discrete-log order) whose
/// multiplicative order is `order`.
fn root_with_order(
    field: &FieldCtx,
    a: &FieldElem,
    e: u64,
    order: u64,
) -> Result<FieldElem, CharPError> {
    if field.group_order() % order != 0 {
        return Err(CharPError::MissingRootOfUnity(order));
    }
    field
        .solve_power_equation(a, e)?
        .into_iter()
        .find(|c| field.element_order(c).ok() == Some(order))
        .ok_or(CharPError::MissingRootOfUnity(order))
}

/// All `r^2` lines upstairs mapping onto the given degree-`m` line.
pub fn pullback_standard_line(b: &StandardLine, cover: &CoverCtx) -> Result<Vec<ProjLine>, CharPError> {
    let f = cover.field();
    let g = f.gamma();
    let r = cover.params().r;
    let tc = f.mul(cover.omega(), &f.pow(g, b.k as u64));
    let td = f.mul(cover.omega(), &f.pow(g, b.l as u64));
    let cs = f.solve_power_equation(&tc, r)?;
    let ds = f.solve_power_equation(&td, r)?;
    if cs.len() as u64 != r || ds.len() as u64 != r {
        return Err(CharPError::RootExtractionFailed);
    }
    let mut out = Vec::with_capacity((r * r) as usize);
    for c in &cs {
        for d in &ds {
            out.push(line_from_forms(b.family, c, d, f));
        }
    }
    Ok(out)
}

/// `sigma(phi(l(alpha, beta)))` for `sigma = (j, k, l)` in `(Z/m)^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDivisor {
    pub alpha: FieldElem,
    pub beta: FieldElem,
    pub sigma: [u64; 3],
}

/// Reference evaluation of `b . sigma(D)` by explicit pullback lines.
pub fn basis_orbit_pairing(b: &StandardLine, d: &OrbitDivisor, cover: &CoverCtx) -> Result<i64, CharPError> {
    basis_orbit_pairing_with_lift(b, d, cover, [0, 0, 0])
}

/// As [`basis_orbit_pairing`] with the lift `sigma + shift * m`.
pub fn basis_orbit_pairing_with_lift(
    b: &StandardLine,
    d: &OrbitDivisor,
    cover: &CoverCtx,
    shift: [u64; 3],
) -> Result<i64, CharPError> {
    let f = cover.field();
    let deg = cover.params().cover_degree();
    let target = cover.lifted_orbit_line(d, shift);
    let mut sum = 0;
    for l in pullback_standard_line(b, cover)? {
        let v = line_incidence(&l, &target, deg, f);
        if v < 0 {
            return Err(CharPError::CoincidentLine);
        }
        sum += v;
    }
    Ok(sum)
}

/// Reference evaluation of `D . E` through `phi^* phi_* E = sum_g g(E)`,
/// with the adjunction value for `D = E`.
pub fn pushdown_gram(d: &OrbitDivisor, e: &OrbitDivisor, cover: &CoverCtx) -> Result<i64, CharPError> {
    if d == e {
        return Ok(pushdown_self_intersection(cover.params()));
    }
    let f = cover.field();
    let deg = cover.params().cover_degree();
    let r = cover.params().r;
    let ld = cover.lifted_orbit_line(d, [0, 0, 0]);
    let mut sum = 0;
    for t0 in 0..r {
        for t1 in 0..r {
            for t2 in 0..r {
                let le = cover.lifted_orbit_line(e, [t0, t1, t2]);
                sum += line_incidence(&ld, &le, deg, f);
            }
        }
    }
    Ok(sum)
}

/// Fast pairings against the orbit of one special line, using logarithm
/// tables and the structure of the pulled-back lines.
///
/// For a family-`j` line with forms `F1 = x_a1 - c x_a0`, `F2 = x_b1 - d x_b0`
/// and the orbit line spanned by `P, Q`, the lines meet iff
/// `F1(P) F2(Q) - F1(Q) F2(P) = A(c) - d B(c)` vanishes. For each of the `r`
/// admissible `c` there is thus at most one `d` to test, unless
/// `A = B = 0`, in which case all `r` choices meet.
#[derive(Clone, Debug)]
pub struct OrbitEngine<'a> {
    cover: &'a CoverCtx,
    alpha: Lg,
    beta: Lg,
    gamma_hat: Lg,
    /// `r`-th roots of `omega gamma^k`, indexed by `k`.
    roots: Vec<Vec<Lg>>,
    /// `omega gamma^k`, indexed by `k`.
    targets: Vec<Lg>,
}

impl<'a> OrbitEngine<'a> {
    pub fn new(cover: &'a CoverCtx, alpha: &FieldElem, beta: &FieldElem) -> Result<Self, CharPError> {
        check_special_pair(alpha, beta, cover.field())?;
        let f = cover.field();
        let lt = cover.logs();
        let m = cover.params().m;
        let r = cover.params().r;
        let mut roots = Vec::with_capacity(m as usize);
        let mut targets = Vec::with_capacity(m as usize);
        for k in 0..m {
            let t = f.mul(cover.omega(), &f.pow(f.gamma(), k));
            let cs = f.solve_power_equation(&t, r)?;
            if cs.len() as u64 != r {
                return Err(CharPError::RootExtractionFailed);
            }
            roots.push(cs.iter().map(|c| lt.from_elem(f, c)).collect());
            targets.push(lt.from_elem(f, &t));
        }
        Ok(Self {
            cover,
            alpha: lt.from_elem(f, alpha),
            beta: lt.from_elem(f, beta),
            gamma_hat: lt.from_elem(f, cover.gamma_hat()),
            roots,
            targets,
        })
    }

    pub fn cover(&self) -> &CoverCtx {
        self.cover
    }

    /// Spanning points of `sigma_hat(l)` for a lift given by exponents of
    /// `gamma_hat`.
    fn orbit_points(&self, lift: [u64; 3]) -> ([Lg; 4], [Lg; 4]) {
        let lt = self.cover.logs();
        let s: [Lg; 3] = lift.map(|e| lt.pow(self.gamma_hat, e));
        (
            [s[0], lt.mul(s[1], self.alpha), lt.mul(s[2], self.beta), Lg::ZERO],
            [Lg::ZERO, lt.mul(s[1], self.beta), lt.mul(s[2], self.alpha), lt.one()],
        )
    }

    /// `b . sigma(D)` using the lift `sigma + shift * m`.
    pub fn pairing_with_lift(&self, b: &StandardLine, sigma: [u64; 3], shift: [u64; 3]) -> Result<i64, CharPError> {
        let m = self.cover.params().m;
        let lift = [
            sigma[0] % m + shift[0] * m,
            sigma[1] % m + shift[1] * m,
            sigma[2] % m + shift[2] * m,
        ];
        let (p, q) = self.orbit_points(lift);
        self.pairing_points(b, &p, &q)
    }

    pub fn pairing(&self, b: &StandardLine, sigma: [u64; 3]) -> Result<i64, CharPError> {
        self.pairing_with_lift(b, sigma, [0, 0, 0])
    }

    fn pairing_points(&self, b: &StandardLine, p: &[Lg; 4], q: &[Lg; 4]) -> Result<i64, CharPError> {
        let lt = self.cover.logs();
        let r = self.cover.params().r;
        let [a0, a1, b0, b1] = family_coords(b.family);
        let td = self.targets[b.l as usize];
        let mut count = 0i64;
        for &c in &self.roots[b.k as usize] {
            let up = lt.sub(p[a1], lt.mul(c, p[a0]));
            let uq = lt.sub(q[a1], lt.mul(c, q[a0]));
            let big_a = lt.sub(lt.mul(up, q[b1]), lt.mul(uq, p[b1]));
            let big_b = lt.sub(lt.mul(up, q[b0]), lt.mul(uq, p[b0]));
            let coincide = |d: Lg| {
                up.is_zero()
                    && uq.is_zero()
                    && lt.sub(p[b1], lt.mul(d, p[b0])).is_zero()
                    && lt.sub(q[b1], lt.mul(d, q[b0])).is_zero()
            };
            if big_b.is_zero() {
                if big_a.is_zero() {
                    // every admissible d meets
                    let d0 = self.roots[b.l as usize][0];
                    for i in 0..r {
                        let d = lt.mul(d0, lt.gen_pow(i * (lt.order() as u64 / r)));
                        if coincide(d) {
                            return Err(CharPError::CoincidentLine);
                        }
                    }
                    count += r as i64;
                }
            } else {
                let d = lt.div(big_a, big_b);
                if !d.is_zero() && lt.pow(d, r) == td {
                    if coincide(d) {
                        return Err(CharPError::CoincidentLine);
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// The column `(b . sigma(D))_b` over a list of basis lines.
    pub fn column(&self, basis: &[StandardLine], sigma: [u64; 3]) -> Result<Vec<i64>, CharPError> {
        let (p, q) = self.orbit_points(sigma.map(|e| e % self.cover.params().m));
        basis.iter().map(|b| self.pairing_points(b, &p, &q)).collect()
    }

    /// `l . h(l)` for `h` in `(Z/rm)^3`, including the self-intersection
    /// `2 - rm` at `h = 0`.
    pub fn twisted_incidence(&self, h: [u64; 3]) -> i64 {
        let deg = self.cover.params().cover_degree();
        if h.iter().all(|&e| e % deg == 0) {
            return 2 - deg as i64;
        }
        let (p0, q0) = self.orbit_points([0, 0, 0]);
        let (p1, q1) = self.orbit_points(h);
        match rank_lg(self.cover.logs(), [p0, q0, p1, q1]) {
            2 => 2 - deg as i64,
            3 => 1,
            _ => 0,
        }
    }

    /// `sum_{g in mu_r^3} l . (tau g)(l)` where `tau` lifts `delta` in
    /// `(Z/m)^3`. For `delta != 0` this is `D . delta(D)`; for `delta = 0`
    /// it is the projection-formula value of `D^2`.
    pub fn orbit_sum(&self, delta: [u64; 3]) -> i64 {
        let m = self.cover.params().m;
        let r = self.cover.params().r;
        let mut sum = 0;
        for t0 in 0..r {
            for t1 in 0..r {
                for t2 in 0..r {
                    sum += self.twisted_incidence([
                        delta[0] % m + t0 * m,
                        delta[1] % m + t1 * m,
                        delta[2] % m + t2 * m,
                    ]);
                }
            }
        }
        sum
    }

    /// Size of the stabilizer of the special line in the deck group
    /// `mu_r^3`; the push-forward is birational onto its image iff this is 1.
    pub fn deck_stabilizer(&self) -> u64 {
        let m = self.cover.params().m;
        let r = self.cover.params().r;
        let deg = self.cover.params().cover_degree() as i64;
        let mut count = 0;
        for t0 in 0..r {
            for t1 in 0..r {
                for t2 in 0..r {
                    if self.twisted_incidence([t0 * m, t1 * m, t2 * m]) == 2 - deg {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Table `delta -> D . delta(D)` over `(Z/m)^3`, indexed by
    /// `(j m + k) m + l`, with the adjunction value at `delta = 0`.
    pub fn orbit_gram_table(&self) -> Vec<i64> {
        let m = self.cover.params().m;
        let mut out = Vec::with_capacity((m * m * m) as usize);
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    out.push(if (j, k, l) == (0, 0, 0) {
                        pushdown_self_intersection(self.cover.params())
                    } else {
                        self.orbit_sum([j, k, l])
                    });
                }
            }
        }
        out
    }
}

/// Rank of four points given in logarithmic form.
fn rank_lg(lt: &LogTable, rows: [[Lg; 4]; 4]) -> usize {
    let mut rows = rows.to_vec();
    let mut r = 0;
    for c in 0..4 {
        let Some(piv) = (r..4).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = lt.inv(rows[r][c]);
        for i in r + 1..4 {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = lt.mul(rows[i][c], inv);
            for j in c..4 {
                rows[i][j] = lt.sub(rows[i][j], lt.mul(f, rows[r][j]));
            }
        }
        r += 1;
    }
    r
}

/// Index of `sigma` in the table returned by [`OrbitEngine::orbit_gram_table`].
pub fn orbit_table_index(delta: [u64; 3], m: u64) -> usize {
    (((delta[0] % m) * m + delta[1] % m) * m + delta[2] % m) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn septic_cover() -> CoverCtx {
        let params = find_cover_params(7).unwrap();
        CoverCtx::new(params, &[1, 3, 1]).unwrap()
    }

    #[test]
    fn supersingular_examples() {
        assert_eq!(is_supersingular_prime(2, 5), Ok(true));
        assert_eq!(is_supersingular_prime(3, 4), Ok(true));
        assert_eq!(is_supersingular_prime(2, 7), Ok(false));
        assert_eq!(is_supersingular_prime(13, 7), Ok(true));
        assert_eq!(
            is_supersingular_prime(5, 10),
            Err(CharPError::BadCharacteristic { p: 5, m: 10 })
        );
    }

    #[test]
    fn cover_examples() {
        let c7 = find_cover_params(7).unwrap();
        assert_eq!((c7.r, c7.q, c7.p, c7.n), (2, 13, 13, 1));
        let c5 = find_cover_params(5).unwrap();
        assert_eq!((c5.r, c5.q, c5.p, c5.n), (1, 4, 2, 2));
        let c89 = find_cover_params(89).unwrap();
        assert_eq!((c89.r, c89.q), (16, 1423));
        assert_eq!(
            find_cover_params_bounded(89, 15),
            Err(CharPError::SearchLimitExceeded { m: 89, bound: 15 })
        );
        assert_eq!(pushdown_self_intersection(&c7), -8);
        let c11 = find_cover_params(11).unwrap();
        assert_eq!(pushdown_self_intersection(&c11), -23);
        let c13 = find_cover_params(13).unwrap();
        assert_eq!(pushdown_self_intersection(&c13), -20);
    }

    #[test]
    fn table_pair_for_septic() {
        let cover = septic_cover();
        let f = cover.field();
        let alpha = f.from_int(11);
        let beta = f.from_coeffs(&[10, 11]);
        assert!(check_special_pair(&alpha, &beta, f).is_ok());
        assert!(validate_line_on_surface(&special_line(&alpha, &beta, f), 14, f));
        let (a, b) = find_special_line(f, cover.params(), 5).unwrap();
        assert!(check_special_pair(&a, &b, f).is_ok());
    }

    #[test]
    fn quintic_third_root_line_is_a_special_line() {
        let params = find_cover_params(5).unwrap();
        let cover = CoverCtx::new(params, &[1, 1, 1, 1, 1]).unwrap();
        let f = cover.field();
        let alpha = f.from_coeffs(&[1, 0, 1, 1]);
        let beta = f.add(&alpha, &f.one());
        assert!(check_special_pair(&alpha, &beta, f).is_ok());
        let third = third_root_line(f).unwrap();
        assert!(validate_line_on_surface(&third, 5, f));
        // both cube roots of unity give one of the two conjugate lines
        let other = f.mul(&alpha, &alpha);
        let l1 = special_line(&alpha, &beta, f);
        let l2 = special_line(&other, &f.add(&other, &f.one()), f);
        assert!(third.same_line(&l1, f) || third.same_line(&l2, f));
    }

    #[test]
    fn char3_line_validates() {
        for (f, m) in [(vec![1i64, 0, 1], 4u64), (vec![2, 0, 0, 1, 1], 5)] {
            let Ok(ctx) = build_field_ctx(3, &f, m) else {
                continue;
            };
            assert!(validate_line_on_surface(&char3_line(&ctx), ctx.q() + 1, &ctx));
        }
        let ctx = build_field_ctx(3, &[1, 0, 1], 4).unwrap();
        assert!(validate_line_on_surface(&char3_line(&ctx), 4, &ctx));
    }

    #[test]
    fn generic_line_is_not_on_surface() {
        let cover = septic_cover();
        let f = cover.field();
        let (o, z) = (f.one(), f.zero());
        let l = ProjLine::new([o.clone(), o.clone(), z.clone(), z.clone()], [z.clone(), z, o.clone(), o]);
        assert!(!validate_line_on_surface(&l, 14, f));
    }

    #[test]
    fn standard_lines_lie_on_surface() {
        let cover = septic_cover();
        for b in crate::line_lattice::all_lines(7).iter().step_by(5) {
            let l = cover.standard_line(b);
            assert!(validate_line_on_surface(&l, 7, cover.field()));
        }
    }

    #[test]
    fn pullbacks() {
        let cover = septic_cover();
        let b = StandardLine::new(7, 2, 3, 5).unwrap();
        let lines = pullback_standard_line(&b, &cover).unwrap();
        assert_eq!(lines.len(), 4);
        let f = cover.field();
        let down = cover.standard_line(&b);
        for l in &lines {
            assert!(validate_line_on_surface(l, 14, f));
            // r-th powers of the spanning points lie on the original line
            for pt in &l.points {
                let img: [FieldElem; 4] = std::array::from_fn(|i| f.pow(&pt[i], 2));
                let probe = ProjLine::new(img, down.points[0].clone());
                let mut rows = down.points.to_vec();
                rows.push(probe.points[0].clone());
                assert_eq!(rank(f, rows), 2);
            }
        }
    }

    #[test]
    fn fast_engine_matches_reference() {
        let cover = septic_cover();
        let f = cover.field();
        let alpha = f.from_int(11);
        let beta = f.from_coeffs(&[10, 11]);
        let engine = OrbitEngine::new(&cover, &alpha, &beta).unwrap();
        let basis = crate::line_lattice::rational_basis(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..40 {
            let b = basis[rng.gen_range(0..basis.len())];
            let sigma = [rng.gen_range(0..7), rng.gen_range(0..7), rng.gen_range(0..7)];
            let d = OrbitDivisor {
                alpha: alpha.clone(),
                beta: beta.clone(),
                sigma,
            };
            let slow = basis_orbit_pairing(&b, &d, &cover).unwrap();
            assert_eq!(engine.pairing(&b, sigma).unwrap(), slow);
        }
        assert_eq!(engine.deck_stabilizer(), 1);
    }

    #[test]
    fn binomials_mod_p() {
        assert_eq!(binomial_mod_p(14, 7, 13), 3432 % 13);
        assert_eq!(binomial_mod_p(14, 1, 13), 1);
        assert_eq!(binomial_mod_p(13, 5, 13), 0);
    }
}
