//! Wall-clock timing per phase, averaged over repeated runs.

use std::time::{Duration, Instant};

use serde::Serialize;

/// Phases of one run, in the order they were entered.
#[derive(Debug, Default)]
pub struct RunTimer {
    phases: Vec<(&'static str, Duration)>,
    start: Option<Instant>,
}

impl RunTimer {
    pub fn start() -> Self {
        Self {
            phases: Vec::new(),
            start: Some(Instant::now()),
        }
    }

    pub fn phase<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.phases.push((name, t.elapsed()));
        out
    }

    pub fn stop(self) -> RunTiming {
        let total = self.start.map(|s| s.elapsed()).unwrap_or_default();
        RunTiming {
            phases: self.phases,
            total,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunTiming {
    pub phases: Vec<(&'static str, Duration)>,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseStats {
    pub phase: String,
    pub mean_ms: f64,
    pub stddev_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub runs: usize,
    pub phases: Vec<PhaseStats>,
    pub total: PhaseStats,
}

fn stats(name: &str, samples: &[f64]) -> PhaseStats {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    // population deviation; one run reports 0
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    PhaseStats {
        phase: name.to_string(),
        mean_ms: mean,
        stddev_ms: var.sqrt(),
    }
}

impl TimingReport {
    /// Aggregates runs that went through the same phases. Returns `None` for
    /// no runs.
    pub fn from_runs(runs: &[RunTiming]) -> Option<Self> {
        let first = runs.first()?;
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        let phases = first
            .phases
            .iter()
            .enumerate()
            .map(|(i, (name, _))| {
                let samples: Vec<f64> = runs.iter().map(|r| ms(r.phases[i].1)).collect();
                stats(name, &samples)
            })
            .collect();
        let totals: Vec<f64> = runs.iter().map(|r| ms(r.total)).collect();
        Some(Self {
            runs: runs.len(),
            phases,
            total: stats("total", &totals),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("timing over {} run(s), ms (mean ± stddev)\n", self.runs);
        for p in self.phases.iter().chain(std::iter::once(&self.total)) {
            out.push_str(&format!("  {:<8} {:>10.3} ± {:.3}\n", p.phase, p.mean_ms, p.stddev_ms));
        }
        out
    }
}
