//! Transition-probability networks built from reconnection events, with
//! batch-mean confidence intervals.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::reconnection::ReconnectionEvent;

pub const DEFAULT_BATCHES: usize = 30;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;
pub const UNKNOWN: &str = "Unknown";

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("need at least 2 batches, got {0}")]
    TooFewBatches(usize),
    #[error("denominator batches sum to zero")]
    ZeroDenominator,
    #[error("numerator has {0} batches but denominator has {1}")]
    MismatchedBatches(usize, usize),
    #[error("confidence {0} is not in (0, 1)")]
    BadConfidence(f64),
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
}

/// An estimate with the half width of its confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub estimate: f64,
    pub half_width: f64,
}

impl Interval {
    pub fn low(&self) -> f64 {
        self.estimate - self.half_width
    }

    pub fn high(&self) -> f64 {
        self.estimate + self.half_width
    }

    pub fn covers(&self, x: f64) -> bool {
        self.low() <= x && x <= self.high()
    }
}

fn t_quantile(confidence: f64, batches: usize) -> Result<f64, StatsError> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(StatsError::BadConfidence(confidence));
    }
    let t = StudentsT::new(0.0, 1.0, (batches - 1) as f64).expect("positive degrees of freedom");
    Ok(t.inverse_cdf(0.5 + confidence / 2.0))
}

/// Mean of per-batch values with a Student-t interval on `B - 1` degrees
/// of freedom.
pub fn batch_mean_ci(batches: &[f64], confidence: f64) -> Result<Interval, StatsError> {
    let b = batches.len();
    if b < 2 {
        return Err(StatsError::TooFewBatches(b));
    }
    let q = t_quantile(confidence, b)?;
    let mean = batches.iter().sum::<f64>() / b as f64;
    let var = batches.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b - 1) as f64;
    Ok(Interval { estimate: mean, half_width: q * (var / b as f64).sqrt() })
}

/// Ratio of batch sums, with the delta-method variance of the residuals
/// `n_b - R d_b`.
pub fn ratio_estimate(numerator: &[f64], denominator: &[f64], confidence: f64) -> Result<Interval, StatsError> {
    let b = numerator.len();
    if b != denominator.len() {
        return Err(StatsError::MismatchedBatches(b, denominator.len()));
    }
    if b < 2 {
        return Err(StatsError::TooFewBatches(b));
    }
    let dsum: f64 = denominator.iter().sum();
    if dsum == 0.0 {
        return Err(StatsError::ZeroDenominator);
    }
    let q = t_quantile(confidence, b)?;
    let r = numerator.iter().sum::<f64>() / dsum;
    let dmean = dsum / b as f64;
    let var = numerator.iter().zip(denominator).map(|(n, d)| (n - r * d).powi(2)).sum::<f64>() / (b - 1) as f64;
    Ok(Interval { estimate: r, half_width: q * (var / b as f64).sqrt() / dmean })
}

/// Counts of one block of consecutive events.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub counts: BTreeMap<String, u64>,
    pub events: u64,
    pub unknown: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionNetwork {
    pub substrate: String,
    pub counts: BTreeMap<String, u64>,
    /// Sampled conformations, with or without a usable site.
    pub attempted: u64,
    /// Conformations on which a reconnection was performed.
    pub events: u64,
    pub unknown: u64,
    pub events_per_batch: u64,
    pub batches: Vec<Batch>,
    /// Chain parameters, site policy and anything else the producer
    /// wants to travel with the numbers.
    pub metadata: Value,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionRow {
    pub knot: String,
    pub number_observed: u64,
    pub total_events: u64,
    pub interval: Option<Interval>,
}

/// `count / total` in units of `10^-5`, rounded half up to three decimals.
pub fn render_probability(count: u64, total: u64) -> String {
    if total == 0 {
        return "0.000e-5".to_string();
    }
    let thousandths = (count as u128 * 100_000_000 * 2 + total as u128) / (2 * total as u128);
    format!("{}.{:03}e-5", thousandths / 1000, thousandths % 1000)
}

fn render_bound(x: f64) -> String {
    format!("{:.3}e-5", x * 1e5)
}

pub const NETWORK_CSV_HEADER: &str = "knot,probability,number_observed,ci_low,ci_high,total_events";

impl TransitionNetwork {
    /// Events are split into consecutive batches of `events_per_batch`;
    /// the last batch absorbs any overflow.
    pub fn new(substrate: &str, n_batches: usize, events_per_batch: u64, metadata: Value) -> TransitionNetwork {
        assert!(n_batches >= 1 && events_per_batch >= 1);
        TransitionNetwork {
            substrate: substrate.to_string(),
            counts: BTreeMap::new(),
            attempted: 0,
            events: 0,
            unknown: 0,
            events_per_batch,
            batches: vec![Batch::default(); n_batches],
            metadata,
        }
    }

    /// A network over a complete event log, in `n_batches` equal blocks.
    pub fn from_events(
        substrate: &str,
        events: &[ReconnectionEvent],
        n_batches: usize,
        metadata: Value,
    ) -> TransitionNetwork {
        let relevant: Vec<&ReconnectionEvent> = events.iter().filter(|e| e.substrate_knot == substrate).collect();
        let per = (relevant.len() as u64).div_ceil(n_batches as u64).max(1);
        let mut net = TransitionNetwork::new(substrate, n_batches, per, metadata);
        for e in relevant {
            net.record_event(e);
        }
        net
    }

    /// A conformation with no usable site.
    pub fn record_no_site(&mut self) {
        self.attempted += 1;
    }

    pub fn record_event(&mut self, e: &ReconnectionEvent) {
        let product = e.product_knots.join(";");
        self.record(&e.substrate_knot, &product);
    }

    /// One performed reconnection whose product identified as `product`.
    pub fn record(&mut self, substrate: &str, product: &str) {
        debug_assert_eq!(substrate, self.substrate);
        let k = ((self.events / self.events_per_batch) as usize).min(self.batches.len() - 1);
        let batch = &mut self.batches[k];
        self.attempted += 1;
        self.events += 1;
        batch.events += 1;
        if product.split(';').any(|p| p == UNKNOWN) {
            self.unknown += 1;
            batch.unknown += 1;
        } else {
            *self.counts.entry(product.to_string()).or_default() += 1;
            *batch.counts.entry(product.to_string()).or_default() += 1;
        }
    }

    /// Events with an identified product.
    pub fn identified(&self) -> u64 {
        self.events - self.unknown
    }

    pub fn probability(&self, product: &str) -> f64 {
        match self.identified() {
            0 => 0.0,
            n => self.counts.get(product).copied().unwrap_or(0) as f64 / n as f64,
        }
    }

    /// Ratio estimate of the probability of `product` among identified events.
    pub fn interval(&self, product: &str, confidence: f64) -> Result<Interval, StatsError> {
        let num: Vec<f64> =
            self.batches.iter().map(|b| b.counts.get(product).copied().unwrap_or(0) as f64).collect();
        let den: Vec<f64> = self.batches.iter().map(|b| (b.events - b.unknown) as f64).collect();
        ratio_estimate(&num, &den, confidence)
    }

    pub fn rows(&self, confidence: f64) -> Vec<TransitionRow> {
        self.counts
            .iter()
            .map(|(k, &n)| TransitionRow {
                knot: k.clone(),
                number_observed: n,
                total_events: self.identified(),
                interval: self.interval(k, confidence).ok(),
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: &mut W, confidence: f64) -> Result<(), StatsError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(NETWORK_CSV_HEADER.split(',')).map_err(std::io::Error::from)?;
        for r in self.rows(confidence) {
            let (lo, hi) = match r.interval {
                Some(i) => (render_bound(i.low().max(0.0)), render_bound(i.high())),
                None => ("NA".to_string(), "NA".to_string()),
            };
            out.write_record([
                r.knot.as_str(),
                &render_probability(r.number_observed, r.total_events),
                &r.number_observed.to_string(),
                &lo,
                &hi,
                &r.total_events.to_string(),
            ])
            .map_err(std::io::Error::from)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn csv_string(&self, confidence: f64) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, confidence).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }
}
