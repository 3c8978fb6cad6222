use crate::error::{Error, Result};
use crate::samplers::{Generator, SchemeKind, SchemeSpec};

/// One `variance_compare` run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Experiment {
    pub spec: SchemeSpec,
    pub integrand: String,
    pub replications: u64,
    pub seed: u64,
}

/// Parses a batch config. Each non-blank, non-`#` line holds whitespace
/// separated `key=value` pairs and expands to the cross product of its lists:
///
/// ```text
/// scheme=rsj,lhs n=5,31 dim=2 integrand=additive integrand=box:0.3 replications=10000 seed=1
/// scheme=rsj n=5 dim=2 generator=1;1 shift=grid jitter=on integrand=product replications=1000 seed=2
/// ```
///
/// `scheme`, `n`, `dim`, `replications` and `seed` take comma lists;
/// `integrand` is repeated instead, since box anchors contain commas.
/// `generator` is `random` or `;`-separated residues.
pub fn parse_config(text: &str) -> Result<Vec<Experiment>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("config line {}: {msg}", lineno + 1));
        let mut schemes = Vec::new();
        let mut ns = Vec::new();
        let mut dims = Vec::new();
        let mut integrands = Vec::new();
        let mut reps = Vec::new();
        let mut seeds = Vec::new();
        let mut generator = Generator::Random;
        let mut shift = None;
        let mut jitter = None;
        for pair in line.split_whitespace() {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {pair:?}")))?;
            let list = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            let numbers = || {
                list()
                    .map(|v| v.parse::<u64>().map_err(|_| err(format!("bad {key} value {v:?}"))))
                    .collect::<Result<Vec<u64>>>()
            };
            match key {
                "scheme" => {
                    for v in list() {
                        schemes.push(v.parse::<SchemeKind>().map_err(|e| err(e.to_string()))?);
                    }
                }
                "n" => ns.extend(numbers()?),
                "dim" => dims.extend(numbers()?),
                "replications" => reps.extend(numbers()?),
                "seed" => seeds.extend(numbers()?),
                "integrand" => integrands.push(value.to_string()),
                "generator" if value == "random" => generator = Generator::Random,
                "generator" => {
                    generator = Generator::Fixed(
                        value
                            .split(';')
                            .map(|v| {
                                v.trim()
                                    .parse::<u64>()
                                    .map_err(|_| err(format!("bad generator {value:?}")))
                            })
                            .collect::<Result<_>>()?,
                    )
                }
                "shift" => shift = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                "jitter" => {
                    jitter = Some(match value {
                        "on" => true,
                        "off" => false,
                        _ => return Err(err(format!("jitter must be on or off, got {value:?}"))),
                    })
                }
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        for (name, empty) in [
            ("scheme", schemes.is_empty()),
            ("n", ns.is_empty()),
            ("integrand", integrands.is_empty()),
            ("replications", reps.is_empty()),
            ("seed", seeds.is_empty()),
        ] {
            if empty {
                return Err(err(format!("missing {name}")));
            }
        }
        if dims.is_empty() {
            dims.push(1);
        }
        for &kind in &schemes {
            for &n in &ns {
                for &dim in &dims {
                    let mut spec = match kind {
                        SchemeKind::Stratified1d => SchemeSpec::stratified(n),
                        SchemeKind::Lhs => SchemeSpec::lhs(n, dim as usize),
                        SchemeKind::Patterson => SchemeSpec::patterson(n, dim as usize),
                        SchemeKind::RsjLattice => SchemeSpec::rsj(n, dim as usize),
                    };
                    if kind == SchemeKind::RsjLattice {
                        spec.generator = generator.clone();
                    }
                    if let Some(s) = shift {
                        spec.shift = s;
                    }
                    if let Some(j) = jitter {
                        spec.jitter = j;
                    }
                    let spec = spec.validated().map_err(|e| err(e.to_string()))?;
                    for integrand in &integrands {
                        for &replications in &reps {
                            for &seed in &seeds {
                                out.push(Experiment {
                                    spec: spec.clone(),
                                    integrand: integrand.clone(),
                                    replications,
                                    seed,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::Shift;

    #[test]
    fn cross_product() {
        let text =
            "# batch\n\nscheme=rsj,lhs n=5,31 dim=2 integrand=additive integrand=box:0.1,0.2 replications=100 seed=1\n";
        let exps = parse_config(text).unwrap();
        assert_eq!(exps.len(), 8);
        assert_eq!(exps[0].spec, SchemeSpec::rsj(5, 2).validated().unwrap());
        assert_eq!(exps[1].integrand, "box:0.1,0.2");
        assert_eq!(exps[7].spec.kind, SchemeKind::Lhs);
    }

    #[test]
    fn ablation_flags() {
        let exps = parse_config(
            "scheme=rsj n=5 dim=2 generator=1;1 shift=none jitter=off integrand=product replications=100 seed=3",
        )
        .unwrap();
        assert_eq!(exps[0].spec.generator, Generator::Fixed(vec![1, 1]));
        assert_eq!(exps[0].spec.shift, Shift::None);
        assert!(!exps[0].spec.jitter);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_config("\nscheme=rsj n=6 dim=2 integrand=additive replications=100 seed=1").unwrap_err();
        assert!(
            err.to_string().contains("line 2") && err.to_string().contains("prime"),
            "{err}"
        );
        assert!(parse_config("scheme=rsj n=5 integrand=additive seed=1").is_err());
        assert!(parse_config("scheme=rsj n=5 colour=red").is_err());
    }
}
