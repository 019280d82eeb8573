use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

/// `min,max,count` as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [min, max, count] = parts[..] else {
            bail!("grid must be `min,max,count`, got {s:?}");
        };
        let number = |field: &str| -> Result<f64> {
            let v: f64 = field.parse().with_context(|| format!("invalid grid bound {field:?}"))?;
            if !v.is_finite() {
                bail!("grid bound {field:?} is not finite");
            }
            Ok(v)
        };
        Ok(Self {
            min: number(min)?,
            max: number(max)?,
            count: count.parse().with_context(|| format!("invalid grid count {count:?}"))?,
        })
    }
}

impl GridSpec {
    /// Grid points in ascending order.
    ///
    /// A sweep needs `count >= 2` and `min < max`; `count = 1` with
    /// `min = max` is accepted as a single point.
    pub fn points(&self, spacing: Spacing) -> Result<Vec<f64>> {
        let Self { min, max, count } = *self;
        if spacing == Spacing::Log && min <= 0.0 {
            bail!("log grid needs min > 0, got {min}");
        }
        if count == 1 && min == max {
            return Ok(vec![min]);
        }
        if count < 2 {
            bail!("grid count must be at least 2 (or 1 with min = max), got {count}");
        }
        if min >= max {
            bail!("grid needs min < max, got {min} >= {max}");
        }
        let last = (count - 1) as f64;
        let points = (0..count).map(|i| {
            if i == 0 {
                return min;
            }
            if i == count - 1 {
                return max;
            }
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => min + (max - min) * t,
                Spacing::Log => (min.ln() + (max.ln() - min.ln()) * t).exp(),
            }
        });
        Ok(points.collect())
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
