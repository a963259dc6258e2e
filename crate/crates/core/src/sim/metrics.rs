use super::engine::Served;

/// Outcome counts. `hits + misses + deflects + uncached` is the number of
/// arrivals counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub hits: u64,
    pub misses: u64,
    pub deflects: u64,
    pub uncached: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.hits + self.misses + self.deflects + self.uncached
    }

    pub fn record(&mut self, served: Served) {
        match served {
            Served::Hit => self.hits += 1,
            Served::Miss => self.misses += 1,
            Served::Deflected => self.deflects += 1,
            Served::Uncached => self.uncached += 1,
        }
    }

    pub fn rates(&self) -> [f64; 4] {
        let n = self.total().max(1) as f64;
        [self.hits as f64 / n, self.misses as f64 / n, self.deflects as f64 / n, self.uncached as f64 / n]
    }
}

/// Metrics at the end of one window of arrivals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsWindow {
    /// Arrivals processed so far, including this window.
    pub end_arrivals: u64,
    pub window_arrivals: u64,
    pub window_delay: f64,
    pub window_counts: Counts,
    pub cumulative_delay: f64,
    pub cumulative_counts: Counts,
}

impl MetricsWindow {
    pub fn window_mean_delay(&self) -> f64 {
        self.window_delay / self.window_arrivals as f64
    }

    pub fn cumulative_mean_delay(&self) -> f64 {
        self.cumulative_delay / self.end_arrivals as f64
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Accumulator {
    window: u64,
    total_delay: f64,
    counts: Counts,
    window_delay: f64,
    window_counts: Counts,
    pub windows: Vec<MetricsWindow>,
}

impl Accumulator {
    pub fn new(window: u64) -> Self {
        Self { window: window.max(1), ..Self::default() }
    }

    pub fn record(&mut self, served: Served, delay: f64) {
        self.total_delay += delay;
        self.window_delay += delay;
        self.counts.record(served);
        self.window_counts.record(served);
        if self.window_counts.total() == self.window {
            self.close_window();
        }
    }

    fn close_window(&mut self) {
        self.windows.push(MetricsWindow {
            end_arrivals: self.counts.total(),
            window_arrivals: self.window_counts.total(),
            window_delay: self.window_delay,
            window_counts: self.window_counts,
            cumulative_delay: self.total_delay,
            cumulative_counts: self.counts,
        });
        self.window_delay = 0.0;
        self.window_counts = Counts::default();
    }

    pub fn finish(mut self) -> (f64, Counts, Vec<MetricsWindow>) {
        if self.window_counts.total() > 0 {
            self.close_window();
        }
        (self.total_delay, self.counts, self.windows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_partition_arrivals() {
        let mut acc = Accumulator::new(3);
        let outcomes = [Served::Hit, Served::Miss, Served::Uncached, Served::Deflected, Served::Hit];
        for (i, &o) in outcomes.iter().enumerate() {
            acc.record(o, i as f64);
        }
        let (total, counts, windows) = acc.finish();
        assert_eq!(total, 10.0);
        assert_eq!(counts.total(), 5);
        assert_eq!(windows.len(), 2);
        assert_eq!(windows[0].window_mean_delay(), 1.0);
        assert_eq!(windows[1].window_arrivals, 2);
        assert_eq!(windows[1].cumulative_mean_delay(), 2.0);
        assert_eq!(windows[1].cumulative_counts.hits, 2);
    }
}
