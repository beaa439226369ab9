use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    coeff_list, CertificationConfig, Certificate, CertifyError, CoverSummary, EllRecord, Mode,
    PairSpec, Schedule, Table, Verdict, PREMISES, SCHEMA_VERSION,
};
use crate::char_p_divisors::{
    find_cover_params, find_special_line, pushdown_self_intersection, CharPError, CoverCtx,
    OrbitEngine,
};
use crate::exact_linalg::{kernel_mod, ModMatrix};
use crate::field_tower::find_defining_poly;
use crate::line_lattice::{gram_matrix, rational_basis, StandardLine};
use crate::numtheory::gcd;

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

/// Certifies generation by lines through the `F_l`-duality test, one prime
/// `l | m` at a time.
pub fn certify_duality(cfg: &CertificationConfig) -> Result<Certificate, CertifyError> {
    let start = Instant::now();
    let m = cfg.m;
    if m < 5 || gcd(m, 6) != 1 {
        return Err(CertifyError::BadConfig(format!(
            "duality mode needs m >= 5 coprime to 6, got {m}"
        )));
    }
    let ells = cfg.resolved_ells()?;
    let params = find_cover_params(m)?;
    let (f, f_source) = match &cfg.f {
        Some(f) => (f.clone(), if cfg.pair_groups.is_empty() { "config" } else { "table" }),
        None => {
            let f = find_defining_poly(params.p, m, cfg.seed)?;
            (f.into_iter().map(|c| c as i64).collect(), "search")
        }
    };
    let cover = CoverCtx::new(params, &f)?;
    let basis = rational_basis(m)?;
    let gram = gram_matrix(&basis, m)?;

    let mut warnings = Vec::new();
    let mut used_pairs: Vec<PairSpec> = Vec::new();
    let mut per_ell = Vec::new();
    for &ell in &ells {
        let mut state = kernel_mod(&gram.to_mod(ell as u32));
        let mut record = EllRecord {
            ell,
            trace: Vec::new(),
            pairs_used: 0,
            columns: 0,
            coincidences: 0,
        };
        let explicit = cfg.pairs_for(ell);
        let budget = explicit.map_or(cfg.max_random_pairs, <[PairSpec]>::len);
        let mut idx = 0;
        while state.dim() > 0 && idx < budget {
            let spec = match explicit {
                Some(p) => p[idx].clone(),
                None => {
                    let (a, b) = find_special_line(cover.field(), &params, mix(cfg.seed, ell, idx as u64))?;
                    PairSpec {
                        alpha: coeff_list(&a),
                        beta: coeff_list(&b),
                    }
                }
            };
            idx += 1;
            record.pairs_used += 1;
            if !used_pairs.contains(&spec) {
                used_pairs.push(spec.clone());
            }
            let field = cover.field();
            let engine = OrbitEngine::new(&cover, &field.from_coeffs(&spec.alpha), &field.from_coeffs(&spec.beta))?;
            // columns pair with the class of the image cycle itself, so a
            // singular image or e > 1 only changes which class that is
            if let Some(w) = consistency_warning(&engine) {
                warnings.push(format!("{w} (not used by duality mode)"));
            }
            let mut sigmas: Vec<[u64; 3]> = (0..m * m * m)
                .map(|i| [i / (m * m), (i / m) % m, i % m])
                .collect();
            sigmas.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(cfg.seed, ell, 1000 + idx as u64)));
            let mut batch = cfg.initial_batch();
            let mut pos = 0;
            let mut stalled = 0;
            while pos < sigmas.len() && state.dim() > 0 && stalled < cfg.stall_limit {
                let end = (pos + batch).min(sigmas.len());
                let mut cols: Vec<Vec<i64>> = Vec::with_capacity(end - pos);
                for sigma in &sigmas[pos..end] {
                    match engine.column(&basis, *sigma) {
                        Ok(c) => cols.push(c),
                        Err(CharPError::CoincidentLine) => record.coincidences += 1,
                        Err(e) => return Err(e.into()),
                    }
                }
                pos = end;
                record.columns += cols.len();
                let before = state.dim();
                let block = ModMatrix::from_fn(ell as u32, basis.len(), cols.len(), |i, j| cols[j][i]);
                state.refine(&block)?;
                stalled = if state.dim() < before { 0 } else { stalled + 1 };
                batch = (2 * batch).min(cfg.initial_batch().max(2 * state.dim()));
            }
        }
        record.trace = state.trace().to_vec();
        per_ell.push(record);
    }
    let all_zero = per_ell.iter().all(|r| r.trace.last() == Some(&0));
    let verdict = if all_zero {
        Verdict::Generated
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        m,
        mode: Mode::Duality,
        cover: CoverSummary::from(&params),
        f,
        f_source,
        pairs: used_pairs,
        per_ell,
        discs: None,
        verdict,
        seed: cfg.seed,
        schedule: Some(Schedule {
            initial_batch: cfg.initial_batch(),
            growth: "double, capped at twice the kernel dimension",
            stall_limit: cfg.stall_limit,
            max_random_pairs: cfg.max_random_pairs,
        }),
        premises: PREMISES.to_vec(),
        warnings,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Checks that the special line is not fixed by a nontrivial deck
/// transformation and that the projection formula reproduces the
/// adjunction value of `D^2`.
pub(super) fn consistency_warning(engine: &OrbitEngine) -> Option<String> {
    let stab = engine.deck_stabilizer();
    if stab != 1 {
        return Some(format!("special line has deck stabilizer of order {stab}"));
    }
    let params = engine.cover().params();
    let adj = pushdown_self_intersection(params);
    let proj = engine.orbit_sum([0, 0, 0]);
    (proj != adj).then(|| format!("projection formula gives D^2 = {proj}, adjunction gives {adj}"))
}

/// Runs [`certify_duality`] with `f` and the pairs pinned to the bundled
/// table.
pub fn reproduce_table_row(m: u64) -> Result<Certificate, CertifyError> {
    reproduce_table_row_with(&Table::shipped(), m, 0)
}

pub fn reproduce_table_row_with(table: &Table, m: u64, seed: u64) -> Result<Certificate, CertifyError> {
    let rows = table.rows_for(m);
    if rows.is_empty() {
        return Err(CertifyError::RowNotFound(m));
    }
    for row in &rows {
        row.validate()?;
    }
    let mut cfg = CertificationConfig::from_rows(&rows)?;
    cfg.seed = seed;
    certify_duality(&cfg)
}

/// Columns `(b . sigma(D))_b` for a list of orbit elements.
pub(super) fn orbit_columns(
    engine: &OrbitEngine,
    basis: &[StandardLine],
    sigmas: &[[u64; 3]],
) -> Result<Vec<Vec<i64>>, CharPError> {
    sigmas.iter().map(|s| engine.column(basis, *s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_row_certifies_and_replays() {
        let a = reproduce_table_row(5).unwrap();
        assert_eq!(a.verdict, Verdict::Generated);
        assert_eq!(a.per_ell[0].trace.last(), Some(&0));
        assert!(a.per_ell[0].trace.windows(2).all(|w| w[0] >= w[1]));
        let b = reproduce_table_row(5).unwrap();
        assert!(a.replays(&b));
    }

    #[test]
    fn missing_rows_and_bad_degrees() {
        assert!(matches!(reproduce_table_row(6), Err(CertifyError::RowNotFound(6))));
        let cfg = CertificationConfig::new(9, Mode::Duality);
        assert!(matches!(certify_duality(&cfg), Err(CertifyError::BadConfig(_))));
        let mut cfg = CertificationConfig::new(7, Mode::Duality);
        cfg.ells = Some(vec![5]);
        assert!(matches!(certify_duality(&cfg), Err(CertifyError::BadConfig(_))));
    }

    #[test]
    fn random_pairs_certify_septic() {
        let mut cfg = CertificationConfig::new(7, Mode::Duality);
        cfg.seed = 3;
        let cert = certify_duality(&cfg).unwrap();
        assert_eq!(cert.f_source, "search");
        assert_eq!(cert.verdict, Verdict::Generated);
    }
}
