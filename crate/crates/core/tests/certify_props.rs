use proptest::prelude::*;

use fermat_ns::certify::{certify_duality, reproduce_table_row_with, CertificationConfig, Mode, Table, Verdict};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn duality_runs_replay_by_seed(seed in any::<u64>(), m in prop::sample::select(vec![5u64, 7, 11])) {
        let mut cfg = CertificationConfig::new(m, Mode::Duality);
        cfg.seed = seed;
        let a = certify_duality(&cfg).unwrap();
        let b = certify_duality(&cfg).unwrap();
        prop_assert!(a.replays(&b));
        for rec in &a.per_ell {
            prop_assert!(rec.trace.windows(2).all(|w| w[1] <= w[0]), "{:?}", rec.trace);
        }
        prop_assert_eq!(a.verdict, Verdict::Generated);
    }

    #[test]
    fn table_runs_replay_by_seed(seed in any::<u64>()) {
        let table = Table::shipped();
        let a = reproduce_table_row_with(&table, 13, seed).unwrap();
        let b = reproduce_table_row_with(&table, 13, seed).unwrap();
        prop_assert!(a.replays(&b));
        prop_assert_eq!(a.seed, seed);
        prop_assert_eq!(a.verdict, Verdict::Generated);
    }
}

#[test]
fn shipped_table_rows_validate() {
    let table = Table::shipped();
    for row in &table.rows {
        row.validate().unwrap_or_else(|e| panic!("row for m = {}: {e}", row.m));
    }
}
