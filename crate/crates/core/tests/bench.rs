use stdg::bench::{make_example1, run_level, run_study, StudyConfig};
use stdg::optimizer::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use stdg::timestepping::SchemeConfig;

fn errors(scheme: SchemeConfig<f64>, steps: usize) -> [f64; 3] {
    let (_, _, e) = run_level(&make_example1(), scheme, steps, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    [e.e_y, e.e_p, e.e_u]
}

fn close(value: f64, reference: f64) -> bool {
    value < 2.0 * reference && value > reference / 2.0
}

#[test]
fn single_level_reference_values() {
    let dg0 = errors(SchemeConfig::dg0(), 10);
    assert!(close(dg0[0], 2.22e-2), "{dg0:?}");
    let dg0 = errors(SchemeConfig::dg0(), 20);
    assert!(close(dg0[2], 8.63e-3), "{dg0:?}");
    let dg1 = errors(SchemeConfig::dg1(), 10);
    assert!(close(dg1[0], 8.59e-3), "{dg1:?}");
    let dg1 = errors(SchemeConfig::dg1(), 20);
    assert!(close(dg1[1], 3.35e-3), "{dg1:?}");
}

#[test]
fn table_rates_follow_errors() {
    let mut config = StudyConfig::new(1, SchemeConfig::<f64>::dg0());
    config.levels = vec![3, 6, 12];
    let table = run_study(&config).unwrap();
    assert!(!table.failed());
    assert!(table.rows[0].rates.iter().all(Option::is_none));
    for w in table.rows.windows(2) {
        let (a, b) = (w[0].errors.unwrap(), w[1].errors.unwrap());
        let expect = (a.e_y / b.e_y).ln() / (w[0].k / w[1].k).ln();
        assert!((w[1].rates[0].unwrap() - expect).abs() < 1e-12);
    }
    let rates = table.finest_rates().unwrap();
    assert!(rates.iter().all(|r| r.is_finite()));
}
