//! Angle arguments: plain radians (`1.5708`) or rational multiples of π
//! (`pi/2`, `3*pi/4`, `3/4pi`, `0.656749pi`, `2π`).

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse angle {input:?}: {reason}")]
pub struct AngleError {
    input: String,
    reason: &'static str,
}

fn number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parse an angle expression to radians.
pub fn parse_angle(input: &str) -> Result<f64, AngleError> {
    let fail = |reason| AngleError { input: input.to_string(), reason };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase().replace('π', "pi");
    if s.is_empty() {
        return Err(fail("empty expression"));
    }
    let Some(at) = s.find("pi") else {
        return number(&s).ok_or_else(|| fail("expected radians or a multiple of pi"));
    };
    let (head, tail) = (&s[..at], &s[at + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => match h.split_once('/') {
            Some((n, d)) => number(n).zip(number(d).filter(|&d| d != 0.0)).map(|(n, d)| n / d),
            None => number(h),
        }
        .ok_or_else(|| fail("bad coefficient before pi"))?,
    };
    let denom = match tail {
        "" => 1.0,
        t => {
            let d = t.strip_prefix('/').ok_or_else(|| fail("only a divisor may follow pi"))?;
            number(d).filter(|&d| d != 0.0).ok_or_else(|| fail("bad divisor after pi"))?
        }
    };
    Ok(coeff * PI / denom)
}
