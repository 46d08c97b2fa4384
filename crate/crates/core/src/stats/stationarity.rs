use super::Histogram;

/// True when each of the last `k` consecutive snapshot pairs differs by a
/// binned KS distance below `epsilon`.
///
/// Returns false when there are fewer than `k + 1` snapshots or when two
/// snapshots cannot be compared.
pub fn stationarity_reached(trace: &[Histogram], epsilon: f64, k: usize) -> bool {
    if k == 0 || trace.len() < k + 1 {
        return false;
    }
    trace[trace.len() - k - 1..]
        .windows(2)
        .all(|w| matches!(w[0].ks_distance(&w[1]), Ok(d) if d < epsilon))
}
