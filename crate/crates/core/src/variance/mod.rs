//! Replication-based variance estimation for the sampling schemes against
//! plain Monte Carlo.

mod config;
mod integrand;
mod moments;

pub use config::{parse_config, Experiment};
pub use integrand::{integrand_library, Integrand, Monotone, LIBRARY};
pub use moments::Moments;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::AnchoredBox;
use crate::error::{Error, Result};
use crate::numeric::{Rational, RngStream};
use crate::samplers::{generate_with, PointSet, SchemeSpec};

pub const MIN_REPLICATIONS: u64 = 100;

/// `(1/N) sum f(p_i)` over `N` iid uniform points.
pub fn mc_estimate(f: &Integrand, n: u64, rng: &mut RngStream) -> f64 {
    let mut u = vec![0.0; f.arity()];
    let mut sum = 0.0;
    for _ in 0..n {
        u.iter_mut().for_each(|x| *x = rng.uniform());
        sum += f.eval(&u);
    }
    sum / n as f64
}

/// `(1/N) sum f(p_i)` over one randomization of `spec`.
pub fn rqmc_estimate(f: &Integrand, spec: &SchemeSpec, rng: &mut RngStream) -> Result<f64> {
    if f.arity() != spec.dim {
        return Err(Error::InvalidArgument(format!(
            "integrand {} has arity {} but the scheme has dimension {}",
            f.name(),
            f.arity(),
            spec.dim
        )));
    }
    let set = generate_with(spec, rng)?;
    Ok(set.rows().map(|row| f.eval(&row)).sum::<f64>() / set.n() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceResult {
    pub scheme: SchemeSpec,
    pub integrand: String,
    pub n: u64,
    pub dim: usize,
    pub replications: u64,
    pub seed: u64,
    pub est_mean: f64,
    pub mean_stderr: f64,
    pub exact_mean: Option<f64>,
    /// `est_mean - exact_mean`.
    pub bias: Option<f64>,
    pub est_variance: f64,
    pub variance_stderr: f64,
    pub mc_variance: f64,
    /// Zero when `mc_variance` is exact.
    pub mc_variance_stderr: f64,
    pub mc_exact: bool,
    /// Both variances vanish; the comparison holds trivially.
    pub trivial: bool,
    /// The scheme is not a sampling scheme, so the estimator may be biased.
    pub biased_capable: bool,
    /// `|bias|` exceeds four standard errors.
    pub bias_detected: bool,
    /// `est_variance <= mc_variance (1 + 3 rel_stderr)`.
    pub dominated: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scheme: String,
    integrand: &'a str,
    n: u64,
    dim: usize,
    replications: u64,
    seed: u64,
    est_mean: f64,
    mean_stderr: f64,
    exact_mean: Option<f64>,
    bias: Option<f64>,
    est_variance: f64,
    variance_stderr: f64,
    mc_variance: f64,
    mc_variance_stderr: f64,
    mc_exact: bool,
    trivial: bool,
    biased_capable: bool,
    bias_detected: bool,
    dominated: bool,
}

impl VarianceResult {
    fn csv_row(&self) -> CsvRow<'_> {
        CsvRow {
            scheme: self.scheme.to_string(),
            integrand: &self.integrand,
            n: self.n,
            dim: self.dim,
            replications: self.replications,
            seed: self.seed,
            est_mean: self.est_mean,
            mean_stderr: self.mean_stderr,
            exact_mean: self.exact_mean,
            bias: self.bias,
            est_variance: self.est_variance,
            variance_stderr: self.variance_stderr,
            mc_variance: self.mc_variance,
            mc_variance_stderr: self.mc_variance_stderr,
            mc_exact: self.mc_exact,
            trivial: self.trivial,
            biased_capable: self.biased_capable,
            bias_detected: self.bias_detected,
            dominated: self.dominated,
        }
    }
}

/// Writes a header and one row per result.
pub fn write_results_csv<W: std::io::Write>(results: &[VarianceResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        w.serialize(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Runs `r` independent randomizations of `spec`, and `r` MC replications if
/// `f` has no exact variance. Replication `k` draws from substream `k`, so the
/// result does not depend on the thread count.
pub fn variance_compare(f: &Integrand, spec: &SchemeSpec, r: u64, rng: &RngStream) -> Result<VarianceResult> {
    if r < MIN_REPLICATIONS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_REPLICATIONS} replications (got {r})"
        )));
    }
    let spec = spec.validated()?;
    let n = spec.n;
    let rqmc_stream = rng.substream(0);
    let estimates = (0..r)
        .into_par_iter()
        .map(|k| rqmc_estimate(f, &spec, &mut rqmc_stream.substream(k)))
        .collect::<Result<Vec<f64>>>()?;
    let p: Moments = estimates.into_iter().collect();

    let (mc_variance, mc_variance_stderr, mc_exact) = match f.exact_variance() {
        Some(v) => ((v / &Rational::from(n)).to_f64(), 0.0, true),
        None => {
            let mc_stream = rng.substream(1);
            let mc: Moments = (0..r)
                .into_par_iter()
                .map(|k| mc_estimate(f, n, &mut mc_stream.substream(k)))
                .collect::<Vec<f64>>()
                .into_iter()
                .collect();
            (mc.variance(), mc.variance_stderr(), false)
        }
    };

    let est_variance = p.variance();
    let variance_stderr = p.variance_stderr();
    let exact_mean = f.exact_mean().map(Rational::to_f64);
    let bias = exact_mean.map(|m| p.mean() - m);
    let trivial = f.exact_variance().is_some_and(Rational::is_zero) || (est_variance == 0.0 && mc_variance == 0.0);
    let rel = |v: f64, se: f64| if v > 0.0 { se / v } else { 0.0 };
    let rel_stderr = rel(est_variance, variance_stderr).hypot(rel(mc_variance, mc_variance_stderr));
    let dominated = trivial || est_variance <= mc_variance * (1.0 + 3.0 * rel_stderr);
    // A degenerate estimator (zero spread) with a nonzero bias is still biased.
    let bias_detected = bias.is_some_and(|b| b.abs() > 4.0 * p.mean_stderr() && b.abs() > 1e-12);

    Ok(VarianceResult {
        scheme: spec.clone(),
        integrand: f.name().to_string(),
        n,
        dim: spec.dim,
        replications: r,
        seed: rng.seed(),
        est_mean: p.mean(),
        mean_stderr: p.mean_stderr(),
        exact_mean,
        bias,
        est_variance,
        variance_stderr,
        mc_variance,
        mc_variance_stderr,
        mc_exact,
        trivial,
        biased_capable: !spec.is_sampling_scheme(),
        bias_detected,
        dominated,
    })
}

/// Runs a batch; results follow the order of `experiments`.
pub fn run_batch(experiments: &[Experiment]) -> Result<Vec<VarianceResult>> {
    experiments
        .iter()
        .map(|e| {
            let f = Integrand::by_name(&e.integrand, e.spec.dim)?;
            variance_compare(&f, &e.spec, e.replications, &RngStream::new(e.seed))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub replications: u64,
}

/// Estimates `Cov(1_Q(p_1), 1_R(p_2))` against the uniform marginals
/// `vol(Q) vol(R)`, averaging over all ordered pairs in each replication.
pub fn pair_covariance(
    spec: &SchemeSpec,
    q: &AnchoredBox,
    r: &AnchoredBox,
    replications: u64,
    rng: &RngStream,
) -> Result<CovarianceEstimate> {
    let spec = spec.validated()?;
    if q.dim() != spec.dim || r.dim() != spec.dim {
        return Err(Error::InvalidArgument("box dimension differs from the scheme".into()));
    }
    if spec.n < 2 {
        return Err(Error::InvalidArgument("need N >= 2 for a pair".into()));
    }
    let den = (spec.n as u128) << crate::samplers::FRAC_BITS;
    let thresholds = |b: &AnchoredBox| -> Vec<u128> {
        b.anchor()
            .iter()
            .map(|x| {
                let t = x * &Rational::from_integer(den);
                // smallest numerator >= x * den
                (-(-t).floor()).to_u128().expect("anchor in [0, 1)")
            })
            .collect()
    };
    let (tq, tr) = (thresholds(q), thresholds(r));
    let product = (q.volume() * r.volume()).to_f64();
    let pairs = (spec.n * (spec.n - 1)) as f64;
    let inside = |set: &PointSet, j: usize, t: &[u128]| (0..set.dim()).all(|i| set.numerator(j, i) >= t[i]);
    let values = (0..replications)
        .into_par_iter()
        .map(|k| {
            let set = generate_with(&spec, &mut rng.substream(k))?;
            let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
            for j in 0..set.n() {
                let (iq, ir) = (inside(&set, j, &tq), inside(&set, j, &tr));
                a += iq as u64;
                b += ir as u64;
                c += (iq && ir) as u64;
            }
            Ok((a * b - c) as f64 / pairs - product)
        })
        .collect::<Result<Vec<f64>>>()?;
    let m: Moments = values.into_iter().collect();
    Ok(CovarianceEstimate {
        estimate: m.mean(),
        stderr: m.mean_stderr(),
        replications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::Shift;

    #[test]
    fn constant_is_exact() {
        let f = Integrand::constant(2, Rational::new(3, 2));
        assert_eq!(mc_estimate(&f, 7, &mut RngStream::new(1)), 1.5);
        for spec in [
            SchemeSpec::lhs(5, 2),
            SchemeSpec::rsj(5, 2),
            SchemeSpec::patterson(4, 2),
        ] {
            assert_eq!(rqmc_estimate(&f, &spec, &mut RngStream::new(2)).unwrap(), 1.5);
        }
        let res = variance_compare(&f, &SchemeSpec::rsj(5, 2), 100, &RngStream::new(3)).unwrap();
        assert!(res.trivial && res.dominated);
        assert_eq!((res.est_variance, res.mc_variance), (0.0, 0.0));
    }

    #[test]
    fn arity_mismatch() {
        let f = Integrand::additive(3);
        assert!(rqmc_estimate(&f, &SchemeSpec::lhs(5, 2), &mut RngStream::new(1)).is_err());
        assert!(variance_compare(&f, &SchemeSpec::lhs(5, 3), 99, &RngStream::new(1)).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let f = Integrand::product(2);
        let spec = SchemeSpec::rsj(5, 2);
        let a = variance_compare(&f, &spec, 200, &RngStream::new(4)).unwrap();
        let b = variance_compare(&f, &spec, 200, &RngStream::new(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn no_shift_box_is_biased() {
        let spec = SchemeSpec::rsj(5, 2).with_shift(Shift::None);
        let corner = Integrand::new(
            "corner",
            2,
            |u| (u[0] < 0.2 && u[1] < 0.2) as u8 as f64,
            vec![Monotone::Decreasing; 2],
        )
        .with_moments(Rational::new(1, 25), Rational::new(24, 625));
        let res = variance_compare(&corner, &spec, 200, &RngStream::new(5)).unwrap();
        // exactly one point (index 0 of the lattice) sits in the corner cell
        assert_eq!(res.est_mean, 0.2);
        assert!(res.biased_capable && res.bias_detected, "{res:?}");
    }

    #[test]
    fn csv_has_header_and_row() {
        let f = Integrand::additive(2);
        let res = variance_compare(&f, &SchemeSpec::lhs(5, 2), 100, &RngStream::new(6)).unwrap();
        let mut buf = Vec::new();
        write_results_csv(&[res], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("scheme,integrand,n,dim"));
    }
}
