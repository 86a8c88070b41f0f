use ecorec_core::country_data::{write_dataset, DATASET_EXCERPT};
use ecorec_core::{load_dataset, lookup_country, summarize, CountryRecord, Metric};
use proptest::prelude::*;

fn record() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..=100.0, 0.0f64..5.0)
}

fn dataset() -> impl Strategy<Value = Vec<CountryRecord>> {
    prop::collection::vec(record(), 1..40).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (pct, per_capita))| CountryRecord {
                name: format!("Country {i}"),
                mismanaged_share_pct: pct,
                waste_per_capita: per_capita,
            })
            .collect()
    })
}

const METRICS: [Metric; 2] = [Metric::MismanagedSharePct, Metric::WastePerCapita];

proptest! {
    #[test]
    fn summary_is_ordered(data in dataset()) {
        for m in METRICS {
            let s = summarize(&data, m).unwrap();
            prop_assert!(s.minimum <= s.median && s.median <= s.maximum);
            prop_assert!(s.minimum <= s.mean && s.mean <= s.maximum);
            if let Some(sd) = s.sample_stdev {
                prop_assert!(sd >= 0.0);
            }
        }
    }

    #[test]
    fn summary_is_permutation_invariant(data in dataset(), seed in any::<u64>()) {
        let mut shuffled = data.clone();
        // Deterministic Fisher-Yates driven by the seed.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        for m in METRICS {
            prop_assert_eq!(summarize(&data, m).unwrap(), summarize(&shuffled, m).unwrap());
        }
    }

    #[test]
    fn doubling_keeps_location(data in dataset()) {
        let mut doubled = data.clone();
        doubled.extend(data.iter().cloned().map(|mut r| { r.name.push_str(" copy"); r }));
        for m in METRICS {
            let a = summarize(&data, m).unwrap();
            let b = summarize(&doubled, m).unwrap();
            prop_assert_eq!(a.minimum, b.minimum);
            prop_assert_eq!(a.maximum, b.maximum);
            prop_assert_eq!(a.median, b.median);
            prop_assert!((a.mean - b.mean).abs() <= 1e-12 * a.mean.abs().max(1.0));
        }
    }

    #[test]
    fn lookup_finds_every_record(data in dataset()) {
        for r in &data {
            prop_assert_eq!(lookup_country(&data, &r.name).unwrap(), r);
        }
    }

    #[test]
    fn csv_round_trip(data in dataset()) {
        let mut buf = Vec::new();
        write_dataset(&data, &mut buf).unwrap();
        prop_assert_eq!(load_dataset(&buf[..]).unwrap(), data);
    }
}

#[test]
fn constant_values_have_zero_stdev() {
    let data: Vec<CountryRecord> = (0..7)
        .map(|i| CountryRecord { name: format!("c{i}"), mismanaged_share_pct: 0.1, waste_per_capita: 0.3 })
        .collect();
    for m in METRICS {
        assert_eq!(summarize(&data, m).unwrap().sample_stdev, Some(0.0));
    }
}

#[test]
fn names_with_commas_round_trip() {
    let data =
        vec![CountryRecord { name: "Korea, Republic of".into(), mismanaged_share_pct: 2.0, waste_per_capita: 0.1 }];
    let mut buf = Vec::new();
    write_dataset(&data, &mut buf).unwrap();
    assert_eq!(load_dataset(&buf[..]).unwrap(), data);
}

#[test]
fn excerpt_loads_all_rows_in_order() {
    let data = load_dataset(DATASET_EXCERPT.as_bytes()).unwrap();
    assert_eq!(data.len(), 26);
    assert_eq!(data[0].name, "Albania");
    assert_eq!(data[25].name, "Cayman Islands");
    assert_eq!(lookup_country(&data, "Bulgaria").unwrap().mismanaged_share_pct, 31.0);
}
