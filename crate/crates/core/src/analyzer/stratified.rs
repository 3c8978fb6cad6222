use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Exact `P(p_1 >= q, p_2 >= r)` for two distinct points of a simple
/// stratified sample of size `n`.
///
/// With 1-based strata `eta`, `rho` containing `q`, `r` and overlaps
/// `eps_q = eta - N q`, `eps_r = rho - N r`:
///
/// * different strata: condition on the point whose anchor lies in the higher
///   stratum; its own stratum is then entirely inside the other interval, so
///   the joint is `(1 - hi) (N (1 - lo) - 1) / (N - 1)`;
/// * same stratum: `(N - eta) (N - eta - 1 + eps_q + eps_r) / (N (N - 1))`.
///
/// The result never exceeds `(1 - q)(1 - r)`; equality holds e.g. at `q = 0`.
pub fn stratified_pair_box_prob(q: &Rational, r: &Rational, n: u64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "a stratified pair needs N >= 2 (no distinct pair exists)".into(),
        ));
    }
    let one = Rational::one();
    for x in [q, r] {
        if x.is_negative() || *x >= one {
            return Err(Error::InvalidArgument(format!("anchor {x} outside [0, 1)")));
        }
    }
    let nn = Rational::from(n);
    let stratum = |x: &Rational| -> Rational { Rational::from_integer((&nn * x).floor() + 1) };
    let eta = stratum(q);
    let rho = stratum(r);
    let n_minus_1 = Rational::from(n - 1);

    if eta != rho {
        let (lo, hi) = if eta < rho { (q, r) } else { (r, q) };
        return Ok((&one - hi) * (&nn * (&one - lo) - &one) / n_minus_1);
    }
    let eps_q = &eta - &nn * q;
    let eps_r = &rho - &nn * r;
    let above = &nn - &eta;
    Ok(&above * (&above - &one + eps_q + eps_r) / (nn * n_minus_1))
}
