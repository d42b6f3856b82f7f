use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// `x` with `digits` significant digits; positional notation for decimal
/// exponents in `[-5, 15)`, scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return num(x);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Space-separated point list, used for set-valued CSV cells.
pub fn points(set: &[usize]) -> String {
    let mut out = String::new();
    for (i, p) in set.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{p}");
    }
    out
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

/// Parsed `start:stop[:lin|log[:count]]`; spacing defaults to `log`, count to 50.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub spacing: Spacing,
    pub count: usize,
}

pub const DEFAULT_SWEEP_COUNT: usize = 50;

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let bad = |why: &str| Error::Parse(format!("sweep {text:?}: {why}; expected start:stop:lin|log:count"));
        if !(2..=4).contains(&parts.len()) {
            return Err(bad("wrong number of fields"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("stop is not a number"))?;
        let spacing = match parts.get(2).copied() {
            None | Some("log") => Spacing::Log,
            Some("lin") => Spacing::Lin,
            Some(_) => return Err(bad("spacing must be lin or log")),
        };
        let count = match parts.get(3) {
            None => DEFAULT_SWEEP_COUNT,
            Some(c) => c.parse().map_err(|_| bad("count is not a positive integer"))?,
        };
        if !(start > 0.0 && start.is_finite() && stop.is_finite()) {
            return Err(Error::Domain(format!("sweep start > 0 violated: start={start}")));
        }
        if stop < start || (stop == start && count != 1) {
            return Err(Error::Domain(format!("sweep start < stop violated: {start} >= {stop}")));
        }
        if count == 0 {
            return Err(Error::Domain("sweep count >= 1 violated: count=0".into()));
        }
        Ok(Self {
            start,
            stop,
            spacing,
            count,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => crate::spaces::geometric_grid(self.start, self.stop, self.count),
            Spacing::Lin if self.count == 1 => vec![self.stop],
            Spacing::Lin => {
                let step = (self.stop - self.start) / (self.count - 1) as f64;
                let mut g: Vec<f64> = (0..self.count).map(|i| self.start + step * i as f64).collect();
                g[self.count - 1] = self.stop;
                g
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.427_260_542_862_526_7, 15), "0.427260542862527");
        assert_eq!(sig(18.168419497096, 15), "18.1684194970960");
        assert_eq!(sig(1.5e-9, 3), "1.50e-9");
        assert_eq!(sig(0.0, 15), "0.0");
    }

    #[test]
    fn round_trip_numbers() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn sweeps() {
        let s = SweepSpec::parse("1:1000:log").unwrap();
        assert_eq!(s.count, DEFAULT_SWEEP_COUNT);
        let g = s.grid();
        assert_eq!((g[0], g[49]), (1.0, 1000.0));
        let l = SweepSpec::parse("0.5:2:lin:4").unwrap().grid();
        assert_eq!(l, vec![0.5, 1.0, 1.5, 2.0]);
        assert!(SweepSpec::parse("0:10:log").is_err());
        assert!(SweepSpec::parse("5:1").is_err());
        assert!(SweepSpec::parse("1:2:cubic").is_err());
        assert!(SweepSpec::parse("1:2:lin:0").is_err());
    }
}
