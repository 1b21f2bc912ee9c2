//! Exact expected completion time of the per-pixel event collection, as an
//! absorbing Markov chain over the set of already-exposed pixels.
//!
//! Valid for one required event per pixel and mutually exclusive per-bunch
//! events (at most one pixel can fire per bunch, which holds for both
//! models). Independent of the Monte Carlo path, so it serves as its
//! small-instance oracle.

use crate::error::{Error, Result};

/// Practical cap: 2^20 states is ~8 MiB of f64.
const MAX_PIXELS: usize = 20;

/// Expected number of bunches until every pixel has fired at least once,
/// given per-bunch event probabilities `event_probs[i]` (the probability
/// that a single bunch produces an event at pixel i).
pub fn expected_completion_bunches(event_probs: &[f64]) -> Result<f64> {
    let n = event_probs.len();
    if n == 0 {
        return Err(Error::InvalidInput("no pixels to expose".into()));
    }
    if n > MAX_PIXELS {
        return Err(Error::InvalidInput(format!(
            "exact chain supports at most {MAX_PIXELS} pixels, got {n}"
        )));
    }
    let total: f64 = event_probs.iter().sum();
    if event_probs.iter().any(|q| !(*q > 0.0)) || total > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(
            "event probabilities must be positive and sum to at most 1".into(),
        ));
    }
    let full = (1usize << n) - 1;
    let mut expect = vec![0.0f64; 1 << n];
    // Supersets have larger mask values, so a simple descending sweep visits
    // every successor before its predecessors.
    for mask in (0..full).rev() {
        let mut rate = 0.0;
        let mut acc = 1.0;
        for (i, &q) in event_probs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                rate += q;
                acc += q * expect[mask | (1 << i)];
            }
        }
        expect[mask] = acc / rate;
    }
    Ok(expect[0])
}
