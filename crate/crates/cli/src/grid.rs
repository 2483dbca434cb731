//! Es/N0 grid specifications: `start:stop:step` (inclusive) or `a,b,c`.

use anyhow::{bail, Context, Result};

/// dB values are carried at four decimals end to end.
pub fn round_db(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

pub fn parse(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        bail!("empty grid");
    }
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .with_context(|| format!("bad number {s:?} in grid {spec:?}"))?;
        if !v.is_finite() {
            bail!("non-finite value in grid {spec:?}");
        }
        Ok(v)
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            bail!("range grid must be start:stop:step, got {spec:?}");
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if step <= 0.0 {
            bail!("grid step must be positive, got {step}");
        }
        if stop < start {
            bail!("grid stop {stop} is below start {start}");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            bail!("grid {spec:?} has {count} points");
        }
        Ok((0..count)
            .map(|i| round_db(start + i as f64 * step))
            .collect())
    } else {
        spec.split(',').map(|s| number(s).map(round_db)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive() {
        let g = parse("-2:10:0.5").unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!((g[0], g[24]), (-2.0, 10.0));
        assert_eq!(parse("0:0.3:0.1").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(parse("-1.5, 0,2.25").unwrap(), vec![-1.5, 0.0, 2.25]);
        assert!(parse("").is_err());
        assert!(parse("1:0:0.5").is_err());
        assert!(parse("0:1:0").is_err());
        assert!(parse("0:1").is_err());
        assert!(parse("a,b").is_err());
    }
}
