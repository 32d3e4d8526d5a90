//! The Young-spec grammar.
//!
//! ```text
//! spec := "power:r=<real>" | "plog:r=<real>,a=<real>" | "expm1"
//!       | "pwl-density:(t0,y0);(t1,y1);..." | "appendix2:gamma=<real>"
//! ```
//!
//! `power:r` is the density φ(s) = s^{r-1} (so Φ(t) = t^r / r); `plog` is
//! φ(s) = s^{r-1} ln(e+s)^a; `expm1` is Φ(t) = e^t - 1; `pwl-density` joins
//! the knots linearly and extends the last value as a constant; `appendix2`
//! is the counterexample family (density inverse χ(v^{-1/γ})).

use super::{DensitySegment, SegmentForm, YoungFunction};
use crate::error::{Error, Result};

fn parse_kv(seg: &str, key: &str) -> Result<f64> {
    let rest = seg
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=<real> in '{seg}'")))?;
    rest.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad number '{rest}' for {key}")))
}

/// Parse a Young-spec string into a validated function.
pub fn parse_young_spec(spec: &str) -> Result<YoungFunction> {
    let spec = spec.trim();
    if spec == "expm1" {
        return YoungFunction::from_segments(
            spec,
            vec![DensitySegment {
                lo: 0.0,
                hi: f64::INFINITY,
                form: SegmentForm::Exp { coeff: 1.0, rate: 1.0 },
            }],
        );
    }
    if let Some(rest) = spec.strip_prefix("power:") {
        let r = parse_kv(rest, "r")?;
        if !(r > 0.0) {
            return Err(Error::Parse(format!("power family needs r > 0, got {r}")));
        }
        let form = if r == 1.0 {
            SegmentForm::Constant(1.0)
        } else {
            SegmentForm::Power { coeff: 1.0, exponent: r - 1.0 }
        };
        return YoungFunction::from_segments(
            spec,
            vec![DensitySegment { lo: 0.0, hi: f64::INFINITY, form }],
        );
    }
    if let Some(rest) = spec.strip_prefix("plog:") {
        let mut parts = rest.splitn(2, ',');
        let r = parse_kv(parts.next().unwrap_or(""), "r")?;
        let a = parse_kv(
            parts
                .next()
                .ok_or_else(|| Error::Parse("plog needs r=<real>,a=<real>".into()))?,
            "a",
        )?;
        if !(r >= 1.0) || !(a >= 0.0) {
            return Err(Error::NotMonotone(format!(
                "plog density s^{}·ln(e+s)^{} decreases somewhere",
                r - 1.0,
                a
            )));
        }
        return YoungFunction::from_segments(
            spec,
            vec![DensitySegment {
                lo: 0.0,
                hi: f64::INFINITY,
                form: SegmentForm::PowerLog { coeff: 1.0, exponent: r - 1.0, log_power: a },
            }],
        );
    }
    if let Some(rest) = spec.strip_prefix("appendix2:") {
        let gamma = parse_kv(rest, "gamma")?;
        return YoungFunction::appendix2(gamma);
    }
    if let Some(rest) = spec.strip_prefix("pwl-density:") {
        let mut knots = Vec::new();
        for chunk in rest.split(';') {
            let chunk = chunk.trim();
            let inner = chunk
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad knot '{chunk}', want (t,y)")))?;
            let mut nums = inner.splitn(2, ',');
            let t: f64 = nums
                .next()
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad knot abscissa in '{chunk}'")))?;
            let y: f64 = nums
                .next()
                .ok_or_else(|| Error::Parse(format!("knot '{chunk}' missing value")))?
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad knot value in '{chunk}'")))?;
            knots.push((t, y));
        }
        if knots.len() < 2 {
            return Err(Error::Parse("pwl-density needs at least two knots".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Parse("pwl-density knots must have increasing t".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::NotMonotone(format!(
                    "pwl density decreases from {} to {}",
                    w[0].1, w[1].1
                )));
            }
        }
        if knots[0].0 < 0.0 || knots.iter().any(|k| k.1 < 0.0) {
            return Err(Error::Parse("pwl-density needs t ≥ 0 and y ≥ 0".into()));
        }
        let mut segments = Vec::new();
        if knots[0].0 > 0.0 {
            segments.push(DensitySegment {
                lo: 0.0,
                hi: knots[0].0,
                form: SegmentForm::Constant(knots[0].1),
            });
        }
        for w in knots.windows(2) {
            let (t0, y0) = w[0];
            let (t1, y1) = w[1];
            let slope = (y1 - y0) / (t1 - t0);
            segments.push(DensitySegment {
                lo: t0,
                hi: t1,
                form: if slope == 0.0 {
                    SegmentForm::Constant(y0)
                } else {
                    SegmentForm::Linear { slope, intercept: y0 - slope * t0 }
                },
            });
        }
        let last = *knots.last().expect("nonempty");
        segments.push(DensitySegment {
            lo: last.0,
            hi: f64::INFINITY,
            form: SegmentForm::Constant(last.1),
        });
        return YoungFunction::from_segments(spec, segments);
    }
    Err(Error::Parse(format!(
        "unrecognized spec '{spec}'; grammar: power:r=<r> | plog:r=<r>,a=<a> | expm1 | pwl-density:(t,y);... | appendix2:gamma=<g>"
    )))
}
