use proptest::prelude::*;
use soiltherm::estimators::table::{
    estimate_records, read_estimates, write_estimates, EstimateOptions, EstimateStatus, Estimator, MetricsRecord,
    PeriodTable,
};
use soiltherm::estimators::{ati, i_sin, Convention};
use soiltherm::fixtures::{experiment_periods, reported_inertia, surface_metrics};

fn values(experiment: &str, estimator: Estimator) -> Vec<(String, f64)> {
    let opts = EstimateOptions {
        conventions: vec![Convention::InitBased],
        ..Default::default()
    };
    estimate_records(&surface_metrics(), &experiment_periods(), None, &opts)
        .unwrap()
        .into_iter()
        .filter(|r| r.experiment == experiment && r.estimator == estimator)
        .map(|r| (r.soil, r.value.unwrap()))
        .collect()
}

#[test]
fn mars_pressure_inertia_ordering() {
    for exp in ["2", "4"] {
        let v = values(exp, Estimator::ISin);
        let get = |s: &str| v.iter().find(|(n, _)| n == s).unwrap().1;
        let (b, a, bb, c) = (get("Bedrock"), get("Soil A"), get("Soil B"), get("Soil C"));
        assert!(b > a.max(bb) && a.min(bb) > c, "exp {exp}: {v:?}");
    }
}

#[test]
fn ati_orders_inversely_to_swing() {
    for exp in ["1", "2", "3", "4"] {
        let recs: Vec<MetricsRecord> = surface_metrics().into_iter().filter(|r| r.experiment == exp).collect();
        let v = values(exp, Estimator::Ati);
        for (i, ri) in recs.iter().enumerate() {
            for (j, rj) in recs.iter().enumerate() {
                if ri.delta_t_k < rj.delta_t_k {
                    assert!(v[i].1 > v[j].1);
                }
            }
        }
    }
}

#[test]
fn estimates_csv_round_trip_and_both_conventions() {
    let mut recs = surface_metrics();
    recs[0].delta_t_minmax_k = Some(60.0);
    recs[0].delta_g_minmax_wm2 = Some(300.0);
    recs.push(MetricsRecord {
        experiment: "9".into(),
        soil: "flat".into(),
        t_init_c: 20.0,
        delta_t_k: 0.0,
        t_tran_k: None,
        delta_g_wm2: 0.0,
        period_min: Some(300.0),
        delta_t_minmax_k: Some(0.0),
        delta_g_minmax_wm2: Some(0.0),
    });
    let rows = estimate_records(&recs, &experiment_periods(), Some(&reported_inertia()), &Default::default()).unwrap();
    assert_eq!(rows.len(), 2 * 2 * recs.len());
    let flat: Vec<_> = rows.iter().filter(|r| r.soil == "flat").collect();
    assert_eq!(flat.len(), 4);
    assert!(flat.iter().all(|r| r.status == EstimateStatus::Degenerate));
    let minmax = rows
        .iter()
        .find(|r| r.convention == Convention::MinmaxBased && r.estimator == Estimator::Ati && r.experiment == recs[0].experiment && r.soil == recs[0].soil)
        .unwrap();
    assert_eq!(minmax.rounded, Some(70));
    assert!(minmax.reported.is_none());

    let mut buf = Vec::new();
    write_estimates(&mut buf, &rows).unwrap();
    assert_eq!(read_estimates(buf.as_slice()).unwrap(), rows);
}

#[test]
fn missing_period_is_config_error() {
    let recs = vec![MetricsRecord { period_min: None, experiment: "x".into(), ..surface_metrics()[0].clone() }];
    assert!(estimate_records(&recs, &PeriodTable::default(), None, &Default::default()).is_err());
    let table = PeriodTable { fallback: Some(18000.0), ..Default::default() };
    assert_eq!(estimate_records(&recs, &table, None, &Default::default()).unwrap()[0].period_min, 300.0);
}

proptest! {
    #[test]
    fn i_sin_scales(dg in 1.0f64..1000.0, dt in 0.1f64..100.0, p in 600.0f64..100_000.0, k in 0.1f64..10.0) {
        let base = i_sin(dg, dt, p).unwrap();
        prop_assert!((i_sin(k * dg, dt, p).unwrap() / base - k).abs() < 1e-9 * k);
        prop_assert!((i_sin(dg, k * dt, p).unwrap() * k / base - 1.0).abs() < 1e-9);
        prop_assert!((i_sin(dg, dt, k * p).unwrap() / base - k.sqrt()).abs() < 1e-9 * k.sqrt());
    }

    #[test]
    fn ati_rank_preserving(a in 0.0f64..0.9, t1 in 0.1f64..100.0, t2 in 0.1f64..100.0) {
        prop_assume!(t1 != t2);
        prop_assert_eq!(ati(a, t1).unwrap() > ati(a, t2).unwrap(), t1 < t2);
    }
}
