use proptest::prelude::*;

use negdep::numeric::{is_prime, Rational, RngStream};
use negdep::samplers::{
    generate, generate_with, rank1_lattice_points, read_csv, read_json, write_csv, write_json, PointSet, SchemeSpec,
    Shift,
};

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select((2u64..40).filter(|&n| is_prime(n)).collect::<Vec<_>>())
}

fn all_in_unit_cube(set: &PointSet) -> bool {
    (0..set.n()).all(|j| (0..set.dim()).all(|i| (0.0..1.0).contains(&set.value(j, i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lhs_is_latin(n in 1u64..40, d in 1usize..5, seed: u64) {
        let set = generate(&SchemeSpec::lhs(n, d), seed).unwrap();
        prop_assert!(set.is_latin());
        prop_assert!(all_in_unit_cube(&set));
    }

    #[test]
    fn rsj_is_latin_for_every_flag(n in primes(), d in 1usize..4, seed: u64, jitter: bool, grid: bool) {
        let shift = if grid { Shift::Grid } else { Shift::None };
        let set = generate(&SchemeSpec::rsj(n, d).with_shift(shift).with_jitter(jitter), seed).unwrap();
        prop_assert!(set.is_latin());
        prop_assert_eq!(set.on_grid(), !jitter);
    }

    #[test]
    fn torus_lattice_keeps_differences(n in primes(), seed: u64) {
        let spec = SchemeSpec::rsj(n, 2).with_generator(vec![1, 1]).with_shift(Shift::ContinuousTorus).with_jitter(false);
        let set = generate(&spec, seed).unwrap();
        // generator (1, 1): both coordinates get the same rotation of the same cells
        let den = set.denominator();
        for j in 0..set.n() {
            let diff = (set.numerator(j, 0) + den - set.numerator(j, 1)) % den;
            prop_assert_eq!(diff, (set.numerator(0, 0) + den - set.numerator(0, 1)) % den);
        }
    }

    #[test]
    fn patterson_on_midpoints(n in 1u64..30, d in 1usize..4, seed: u64) {
        let set = generate(&SchemeSpec::patterson(n, d), seed).unwrap();
        prop_assert!(set.is_latin());
        for j in 0..set.n() {
            for i in 0..d {
                let x = set.coordinate(j, i) * Rational::from(2 * n);
                prop_assert!(x.is_integer() && !(x.floor() % 2u32 == 0u32.into()));
            }
        }
    }

    #[test]
    fn io_roundtrips(n in primes(), d in 1usize..4, seed: u64) {
        let set = generate(&SchemeSpec::rsj(n, d), seed).unwrap();
        let mut json = Vec::new();
        write_json(&set, &mut json).unwrap();
        prop_assert_eq!(read_json(json.as_slice()).unwrap(), set.clone());
        let mut csv = Vec::new();
        write_csv(&set, &mut csv).unwrap();
        let back = read_csv(csv.as_slice()).unwrap();
        for j in 0..set.n() {
            for i in 0..d {
                prop_assert_eq!(back.cell(j, i), set.cell(j, i));
                prop_assert!((back.value(j, i) - set.value(j, i)).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn seeds_are_reproducible() {
    for spec in [
        SchemeSpec::stratified(9),
        SchemeSpec::lhs(7, 3),
        SchemeSpec::rsj(11, 3),
        SchemeSpec::patterson(6, 2),
    ] {
        assert_eq!(generate(&spec, 5).unwrap(), generate(&spec, 5).unwrap());
        assert_ne!(
            generate(&spec, 5).unwrap().numerators(),
            generate(&spec, 6).unwrap().numerators()
        );
    }
}

#[test]
fn io_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let set = generate(&SchemeSpec::rsj(7, 3).with_generator(vec![1, 2, 3]), 19).unwrap();
    let path = dir.path().join("set.json");
    write_json(&set, std::fs::File::create(&path).unwrap()).unwrap();
    assert_eq!(read_json(std::fs::File::open(&path).unwrap()).unwrap(), set);
}

#[test]
fn lattice_points_are_the_cyclic_group() {
    let set = rank1_lattice_points(&[1, 3], 7).unwrap();
    let cells: Vec<(u64, u64)> = (0..7).map(|j| (set.cell(j, 0), set.cell(j, 1))).collect();
    assert_eq!(cells, (0..7).map(|j| (j, 3 * j % 7)).collect::<Vec<_>>());
    assert!(rank1_lattice_points(&[1, 7], 7).is_err());
    assert!(rank1_lattice_points(&[1, 1], 8).is_err());
}

/// Each coordinate of the first point of a sampling scheme is uniform: a
/// 10-bin histogram over 20000 draws stays within a chi-square bound.
#[test]
fn first_point_marginals_are_uniform() {
    let specs = [
        SchemeSpec::stratified(7),
        SchemeSpec::lhs(5, 3),
        SchemeSpec::rsj(31, 4),
        SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]),
        SchemeSpec::rsj(5, 2)
            .with_shift(Shift::ContinuousTorus)
            .with_jitter(false),
        SchemeSpec::patterson(5, 2).with_shift(Shift::ContinuousTorus),
    ];
    let draws = 20_000;
    for (s, spec) in specs.iter().enumerate() {
        assert!(spec.is_sampling_scheme());
        let root = RngStream::new(77).substream(s as u64);
        let mut bins = vec![[0u64; 10]; spec.dim];
        for k in 0..draws {
            let set = generate_with(spec, &mut root.substream(k)).unwrap();
            for (i, b) in bins.iter_mut().enumerate() {
                b[(set.value(0, i) * 10.0) as usize] += 1;
            }
        }
        for b in &bins {
            let e = draws as f64 / 10.0;
            let chi2: f64 = b.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
            // 9 dof; mean 9, sd ~4.24, so 4 sd above the mean
            assert!(chi2 < 9.0 + 4.0 * 18f64.sqrt(), "{spec}: chi2 {chi2}");
        }
    }
}

#[test]
fn unshifted_lattice_is_not_uniform() {
    let spec = SchemeSpec::rsj(5, 2).with_shift(Shift::None);
    assert!(!spec.is_sampling_scheme());
    let root = RngStream::new(3);
    let draws = 5000;
    let mut corner = 0;
    for k in 0..draws {
        let set = generate_with(&spec, &mut root.substream(k)).unwrap();
        corner += (0..5).filter(|&j| set.cell(j, 0) == 0 && set.cell(j, 1) == 0).count();
    }
    // exactly one lattice point, the origin's, sits in the corner cell
    assert_eq!(corner, draws as usize);
}
