use serde::{Deserialize, Serialize};

/// Uniform sampling of the scenario horizon.
///
/// Instants are `start_s + k * step_s` for `k` in `0..count()`, with
/// `count() = floor((end_s - start_s) / step_s) + 1`. Each instant owns the
/// half-open cell `[t_k, t_k + step_s)`, so the grid spans `count() * step_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start_s: f64,
    pub end_s: f64,
    pub step_s: f64,
}

impl TimeGrid {
    pub const DEFAULT_STEP_S: f64 = 10.0;

    pub fn new(end_s: f64, step_s: f64) -> Self {
        Self {
            start_s: 0.0,
            end_s,
            step_s,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.start_s.is_finite()
            && self.end_s.is_finite()
            && self.step_s.is_finite()
            && self.start_s >= 0.0
            && self.end_s > self.start_s
            && self.step_s > 0.0
    }

    pub fn count(&self) -> usize {
        if !self.is_valid() {
            return 0;
        }
        let ratio = (self.end_s - self.start_s) / self.step_s;
        // absorb representation error so 86400/10 is 8640, not 8639.999..
        (ratio + 1e-9).floor() as usize + 1
    }

    #[inline]
    pub fn instant(&self, index: usize) -> f64 {
        self.start_s + index as f64 * self.step_s
    }

    pub fn instants(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count()).map(move |k| self.instant(k))
    }

    /// Index of `time_s` if it lies on the grid.
    pub fn index_of(&self, time_s: f64) -> Option<usize> {
        if !time_s.is_finite() {
            return None;
        }
        let k = ((time_s - self.start_s) / self.step_s).round();
        if k < 0.0 || k >= self.count() as f64 {
            return None;
        }
        let k = k as usize;
        ((self.instant(k) - time_s).abs() <= 1e-6 * self.step_s).then_some(k)
    }

    /// Time covered by all instant cells.
    pub fn span_s(&self) -> f64 {
        self.count() as f64 * self.step_s
    }

    /// Nominal horizon length `end_s - start_s`.
    pub fn horizon_s(&self) -> f64 {
        self.end_s - self.start_s
    }

    /// Sub-grid on the same lattice beginning at the first instant at or after `time_s`.
    ///
    /// Returns `None` when no instant remains.
    pub fn from_time(&self, time_s: f64) -> Option<TimeGrid> {
        let k = ((time_s - self.start_s) / self.step_s - 1e-9).ceil().max(0.0) as usize;
        if k >= self.count() {
            return None;
        }
        let start_s = self.instant(k);
        if start_s >= self.end_s {
            return None;
        }
        Some(TimeGrid {
            start_s,
            end_s: self.end_s,
            step_s: self.step_s,
        })
    }
}
