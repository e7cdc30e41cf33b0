use carnot_heat::csv::{self, Csv};
use carnot_heat::gridio::{read_grid, write_grid};
use htype_core::{Complex64, GridFunction, GridSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grid_files_round_trip(
        counts in prop::collection::vec(3usize..6, 3),
        spacing in 0.01..2.0f64,
        origin in -5.0..5.0f64,
        seed in prop::collection::vec(-1e3..1e3f64, 128),
    ) {
        let spec = GridSpec::new(1, 1, counts.clone(), vec![spacing, 0.5 * spacing, 2.0 * spacing], vec![origin, -origin, 0.0])
            .unwrap();
        let data = (0..spec.len()).map(|i| Complex64::new(seed[i % 128], seed[(i * 7 + 3) % 128])).collect();
        let g = GridFunction::new(spec, data).unwrap();
        let mut bytes = Vec::new();
        write_grid(&mut bytes, &g).unwrap();
        let back = read_grid(&mut bytes.as_slice()).unwrap();
        prop_assert_eq!(back.spec(), g.spec());
        prop_assert!(back.data().iter().zip(g.data()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    }

    #[test]
    fn csv_round_trips_bit_exact(rows in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 3), 1..8)) {
        let mut c = Csv::new(&["a", "b", "c"]);
        for r in &rows {
            c.row(r);
        }
        let (header, parsed) = csv::parse(c.as_str()).unwrap();
        prop_assert_eq!(header, vec!["a", "b", "c"]);
        prop_assert_eq!(parsed.len(), rows.len());
        for (p, r) in parsed.iter().zip(&rows) {
            prop_assert!(p.iter().zip(r).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}

#[test]
fn truncated_grid_file_is_rejected() {
    let spec = GridSpec::centered(1, 1, 3, 1.0, 3, 1.0).unwrap();
    let g = GridFunction::from_fn(spec, |_, _| Complex64::new(1.0, 0.0));
    let mut bytes = Vec::new();
    write_grid(&mut bytes, &g).unwrap();
    bytes.pop();
    assert!(read_grid(&mut bytes.as_slice()).is_err());
    bytes.extend_from_slice(&[0; 9]);
    assert!(read_grid(&mut bytes.as_slice()).is_err());
}
