//! Time grids written as `start:stop:steps`.

use std::str::FromStr;

/// `steps` evenly spaced samples from `start` to `stop` inclusive. One step gives `[start]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (k as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for TimeGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(format!("expected start:stop:steps, got {s:?}"));
        };
        let start: f64 = start.trim().parse().map_err(|e| format!("start: {e}"))?;
        let stop: f64 = stop.trim().parse().map_err(|e| format!("stop: {e}"))?;
        let steps: usize = steps.trim().parse().map_err(|e| format!("steps: {e}"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err("start and stop must be finite".into());
        }
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        if steps > 1 && stop <= start {
            return Err("stop must exceed start when steps > 1".into());
        }
        Ok(TimeGrid { start, stop, steps })
    }
}
