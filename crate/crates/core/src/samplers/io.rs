use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::samplers::{Generator, PointSet, SchemeKind, SchemeSpec, Shift};

/// Writes `# key=value` header lines followed by one row of `d` floats per point.
pub fn write_csv<W: Write>(set: &PointSet, mut out: W) -> Result<()> {
    let spec = set.spec();
    let seed = set.seed().map_or_else(|| "none".to_string(), |s| s.to_string());
    writeln!(
        out,
        "# scheme={}, n={}, dim={}, seed={}",
        spec.kind.name(),
        spec.n,
        spec.dim,
        seed
    )?;
    let generator = match &spec.generator {
        Generator::Random => "random".to_string(),
        Generator::Fixed(g) => g.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
    };
    writeln!(
        out,
        "# generator={}, shift={}, jitter={}",
        generator,
        spec.shift.name(),
        if spec.jitter { "on" } else { "off" }
    )?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for row in set.rows() {
        w.write_record(row.iter().map(|x| format!("{x:?}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV point set. Floats are mapped back to the nearest exact
/// coordinate and the scheme's invariants are re-validated.
pub fn read_csv<R: Read>(input: R) -> Result<PointSet> {
    let mut reader = BufReader::new(input);
    let mut fields = std::collections::BTreeMap::new();
    let mut body = String::new();
    let mut line = String::new();
    while reader.read_line(&mut line)? > 0 {
        if let Some(meta) = line.trim_start().strip_prefix('#') {
            for part in meta.split(',') {
                if let Some((k, v)) = part.split_once('=') {
                    fields.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
        } else {
            body.push_str(&line);
        }
        line.clear();
    }
    let get = |k: &str| {
        fields
            .get(k)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("CSV header is missing {k}")))
    };
    let parse_u64 = |k: &str, v: String| {
        v.parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad {k} value {v:?}")))
    };
    let kind: SchemeKind = get("scheme")?.parse()?;
    let n = parse_u64("n", get("n")?)?;
    let dim = parse_u64("dim", get("dim")?)? as usize;
    let seed = match get("seed")?.as_str() {
        "none" => None,
        s => Some(parse_u64("seed", s.to_string())?),
    };
    let generator = match fields.get("generator").map(String::as_str) {
        None | Some("random") => Generator::Random,
        Some(g) => Generator::Fixed(
            g.split(';')
                .map(|x| parse_u64("generator", x.to_string()))
                .collect::<Result<_>>()?,
        ),
    };
    let shift: Shift = fields.get("shift").map_or(Ok(Shift::None), |s| s.parse())?;
    let jitter = fields.get("jitter").is_none_or(|s| s == "on");
    let spec = SchemeSpec {
        kind,
        n,
        dim,
        generator,
        shift,
        jitter,
    };

    let den = (n as u128) << super::FRAC_BITS;
    let mut coords = Vec::with_capacity(n as usize * dim);
    let mut rows = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes());
    for record in rows.records() {
        let record = record?;
        if record.len() != dim {
            return Err(Error::Parse(format!(
                "row has {} columns, expected {dim}",
                record.len()
            )));
        }
        for field in record.iter() {
            let x: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate {field:?}")))?;
            if !(0.0..1.0).contains(&x) {
                return Err(Error::InvalidArgument(format!("coordinate {x} outside [0, 1)")));
            }
            coords.push(((x * den as f64).round() as u128).min(den - 1));
        }
    }
    PointSet::from_parts(spec, seed, coords)
}

#[derive(Serialize, Deserialize)]
struct PointSetJson {
    spec: SchemeSpec,
    seed: Option<u64>,
    denominator: String,
    numerators: Vec<Vec<String>>,
    points: Vec<Vec<f64>>,
}

/// JSON with the spec, the seed, exact numerators over a common denominator,
/// and decimal points for convenience.
pub fn write_json<W: Write>(set: &PointSet, out: W) -> Result<()> {
    let d = set.dim();
    let doc = PointSetJson {
        spec: set.spec().clone(),
        seed: set.seed(),
        denominator: set.denominator().to_string(),
        numerators: set
            .numerators()
            .chunks(d)
            .map(|row| row.iter().map(u128::to_string).collect())
            .collect(),
        points: set.rows().collect(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

/// Reads the exact numerators back; the float `points` are ignored.
pub fn read_json<R: Read>(input: R) -> Result<PointSet> {
    let doc: PointSetJson = serde_json::from_reader(input)?;
    let spec = doc.spec.validated()?;
    let expected_den = (spec.n as u128) << super::FRAC_BITS;
    if doc.denominator != expected_den.to_string() {
        return Err(Error::Parse(format!(
            "denominator {} does not match N * 2^53 = {expected_den}",
            doc.denominator
        )));
    }
    let mut coords = Vec::new();
    for row in &doc.numerators {
        if row.len() != spec.dim {
            return Err(Error::Parse(format!(
                "row has {} numerators, expected {}",
                row.len(),
                spec.dim
            )));
        }
        for v in row {
            coords.push(
                v.parse::<u128>()
                    .map_err(|_| Error::Parse(format!("bad numerator {v:?}")))?,
            );
        }
    }
    PointSet::from_parts(spec, doc.seed, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::generate;

    #[test]
    fn csv_header_and_shape() {
        let set = generate(&SchemeSpec::rsj(5, 2), 7).unwrap();
        let mut buf = Vec::new();
        write_csv(&set, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# scheme=rsj, n=5, dim=2, seed=7");
        assert_eq!(lines[1], "# generator=random, shift=grid, jitter=on");
        assert_eq!(lines.len(), 7);
        assert!(lines[2..].iter().all(|l| l.split(',').count() == 2));
    }

    #[test]
    fn csv_roundtrip_keeps_cells() {
        let spec = SchemeSpec::rsj(5, 2).with_generator(vec![1, 2]).with_jitter(false);
        let set = generate(&spec, 3).unwrap();
        let mut buf = Vec::new();
        write_csv(&set, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn json_roundtrip_exact() {
        let set = generate(&SchemeSpec::lhs(6, 3), 11).unwrap();
        let mut buf = Vec::new();
        write_json(&set, &mut buf).unwrap();
        assert_eq!(read_json(buf.as_slice()).unwrap(), set);
    }

    #[test]
    fn import_revalidates() {
        let csv = "# scheme=lhs, n=2, dim=1, seed=1\n0.1\n0.2\n";
        let err = read_csv(csv.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("Latin"), "{err}");
        let csv = "# scheme=lhs, n=2, dim=1, seed=1\n0.1\n1.5\n";
        assert!(read_csv(csv.as_bytes()).is_err());
        let csv = "# scheme=rsj, n=4, dim=1, seed=1\n0.1\n0.3\n0.6\n0.8\n";
        assert!(read_csv(csv.as_bytes()).is_err());
    }
}
