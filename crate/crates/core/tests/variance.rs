use negdep::analyzer::AnchoredBox;
use negdep::numeric::{Rational, RngStream};
use negdep::samplers::{SchemeSpec, Shift};
use negdep::variance::{
    integrand_library, mc_estimate, pair_covariance, parse_config, rqmc_estimate, run_batch, variance_compare,
    Integrand, Moments,
};

fn replicate(r: u64, seed: u64, mut f: impl FnMut(&mut RngStream) -> f64) -> Moments {
    let root = RngStream::new(seed);
    (0..r).map(|k| f(&mut root.substream(k))).collect()
}

#[test]
fn mc_examples() {
    let add = Integrand::additive(4);
    let m = replicate(1000, 1, |rng| mc_estimate(&add, 1000, rng));
    assert!(
        (m.mean() - 2.0).abs() <= 3.0 * m.mean_stderr(),
        "{} +- {}",
        m.mean(),
        m.mean_stderr()
    );
    let prod = Integrand::product(2);
    let m = replicate(2000, 2, |rng| mc_estimate(&prod, 50, rng));
    assert!((m.mean() - 0.25).abs() <= 3.0 * m.mean_stderr());
    let c = Integrand::constant(3, Rational::new(7, 4));
    assert_eq!(mc_estimate(&c, 13, &mut RngStream::new(0)), 1.75);
}

#[test]
fn rqmc_additive_is_unbiased() {
    let add = Integrand::additive(4);
    let spec = SchemeSpec::rsj(31, 4);
    let m = replicate(2000, 3, |rng| rqmc_estimate(&add, &spec, rng).unwrap());
    assert!((m.mean() - 2.0).abs() <= 3.0 * m.mean_stderr());
}

#[test]
fn library_means_hold_under_mc() {
    let mut rng = RngStream::new(4);
    for f in integrand_library(3) {
        let mut u = [0.0; 3];
        let m: Moments = (0..1_000_000)
            .map(|_| {
                u.iter_mut().for_each(|x| *x = rng.uniform());
                f.eval(&u)
            })
            .collect();
        let mean = f.exact_mean().unwrap().to_f64();
        let var = f.exact_variance().unwrap().to_f64();
        let se = (var / 1e6).sqrt();
        assert!(
            (m.mean() - mean).abs() <= 5.0 * se + 1e-12,
            "{}: {} vs {mean}",
            f.name(),
            m.mean()
        );
        assert!(
            (m.variance() - var).abs() <= 0.01 * var + 1e-12,
            "{}: {} vs {var}",
            f.name(),
            m.variance()
        );
    }
}

#[test]
fn unbiased_for_every_sampling_scheme() {
    let schemes = [
        SchemeSpec::stratified(8),
        SchemeSpec::lhs(5, 2),
        SchemeSpec::rsj(5, 2),
        SchemeSpec::rsj(7, 2).with_generator(vec![1, 3]),
        SchemeSpec::rsj(5, 2)
            .with_shift(Shift::ContinuousTorus)
            .with_jitter(false),
        SchemeSpec::patterson(5, 2).with_shift(Shift::ContinuousTorus),
    ];
    for (s, spec) in schemes.iter().enumerate() {
        for f in integrand_library(spec.dim) {
            let res = variance_compare(&f, spec, 10_000, &RngStream::new(50 + s as u64)).unwrap();
            assert!(!res.biased_capable);
            assert!(
                !res.bias_detected,
                "{spec} {}: bias {:?} se {}",
                f.name(),
                res.bias,
                res.mean_stderr
            );
        }
    }
}

#[test]
fn documented_domination_examples() {
    let add = Integrand::additive(4);
    let res = variance_compare(&add, &SchemeSpec::rsj(31, 4), 10_000, &RngStream::new(5)).unwrap();
    let mc = 4.0 / (12.0 * 31.0);
    assert_eq!(res.mc_variance, mc);
    assert!(res.est_variance <= mc * (1.0 + 3.0 * res.variance_stderr / res.est_variance));
    assert!(res.dominated);

    let bx = Integrand::by_name("box:0.3", 3).unwrap();
    let res = variance_compare(&bx, &SchemeSpec::lhs(25, 3), 10_000, &RngStream::new(6)).unwrap();
    let lambda = 0.343;
    assert!((res.mc_variance - lambda * (1.0 - lambda) / 25.0).abs() < 1e-15);
    assert!(res.dominated, "{res:?}");

    let c = Integrand::constant(2, Rational::one());
    let res = variance_compare(&c, &SchemeSpec::lhs(5, 2), 100, &RngStream::new(7)).unwrap();
    assert!(res.trivial && res.dominated);
}

#[test]
fn estimated_mc_baseline_without_exact_variance() {
    let f = Integrand::new(
        "sum-squares",
        2,
        |u| u.iter().map(|x| x * x).sum(),
        vec![negdep::variance::Monotone::Increasing; 2],
    );
    let res = variance_compare(&f, &SchemeSpec::rsj(5, 2), 2000, &RngStream::new(8)).unwrap();
    assert!(!res.mc_exact && res.mc_variance_stderr > 0.0);
    // Var(u^2) = 4/45 per coordinate
    let exact = 2.0 * 4.0 / 45.0 / 5.0;
    assert!(
        (res.mc_variance - exact).abs() < 4.0 * res.mc_variance_stderr,
        "{} vs {exact}",
        res.mc_variance
    );
    assert!(res.exact_mean.is_none() && res.bias.is_none());
}

#[test]
fn fixed_generator_covariance_is_positive() {
    let spec = SchemeSpec::rsj(5, 2).with_generator(vec![1, 1]);
    let q = AnchoredBox::cube(Rational::new(3, 5), 2).unwrap();
    let r = AnchoredBox::cube(Rational::new(4, 5), 2).unwrap();
    let est = pair_covariance(&spec, &q, &r, 20_000, &RngStream::new(9)).unwrap();
    let exact = (Rational::new(1, 100) - Rational::new(4, 625)).to_f64();
    assert!(est.estimate > 3.0 * est.stderr, "{est:?}");
    assert!((est.estimate - exact).abs() < 4.0 * est.stderr, "{est:?} vs {exact}");

    // the full construction is negatively dependent on the same boxes
    let full = pair_covariance(&SchemeSpec::rsj(5, 2), &q, &r, 20_000, &RngStream::new(10)).unwrap();
    assert!(full.estimate < 3.0 * full.stderr, "{full:?}");
}

#[test]
fn reduction_order_is_irrelevant() {
    let f = Integrand::smooth(2, Rational::new(3, 2)).unwrap();
    let spec = SchemeSpec::lhs(5, 2);
    let values: Vec<f64> = (0..5000)
        .map(|k| rqmc_estimate(&f, &spec, &mut RngStream::new(11).substream(k)).unwrap())
        .collect();
    let forward: Moments = values.iter().copied().collect();
    let mut chunks: Vec<Moments> = values.chunks(97).map(|c| c.iter().copied().collect()).collect();
    // a fixed scramble of the chunk order
    let len = chunks.len();
    for i in 0..len {
        chunks.swap(i, (i * 31 + 7) % len);
    }
    let mut merged = Moments::new();
    chunks.iter().for_each(|c| merged.merge(c));
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    assert!(rel(forward.mean(), merged.mean()) <= 1e-12);
    assert!(rel(forward.variance(), merged.variance()) <= 1e-12);
}

#[test]
fn seed_determinism_and_batches() {
    let exps =
        parse_config("scheme=rsj,lhs n=5 dim=2 integrand=additive integrand=box:0.3 replications=200 seed=12").unwrap();
    assert_eq!(exps.len(), 4);
    let a = run_batch(&exps).unwrap();
    let b = run_batch(&exps).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[1].integrand, "box:3/10,3/10");
}

#[test]
fn no_shift_ablation_is_flagged_biased() {
    let spec = SchemeSpec::rsj(5, 2).with_shift(Shift::None);
    let f = Integrand::by_name("box:0.2", 2).unwrap();
    let res = variance_compare(&f, &spec, 1000, &RngStream::new(13)).unwrap();
    assert!(res.biased_capable);
    assert!(res.bias.unwrap().abs() > 0.0);
}
