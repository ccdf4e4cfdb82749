//! Weighted-network statistics of the mutual-information matrix.

use crate::quantum_info::MIMatrix;

const CLUSTERING_EPS: f64 = 1e-14;

/// Sum of all weights over `L (L - 1)`.
pub fn network_density(mi: &MIMatrix) -> f64 {
    let n = mi.len();
    if n < 2 {
        return 0.0;
    }
    mi.matrix().sum() / (n * (n - 1)) as f64
}

/// Mean over nodes of `sum_j w_ij^2 / (sum_k w_ik)^2`. Isolated nodes
/// (zero strength) contribute 0.
pub fn disparity(mi: &MIMatrix) -> f64 {
    let n = mi.len();
    if n == 0 {
        return 0.0;
    }
    let m = mi.matrix();
    let total: f64 = m
        .row_iter()
        .map(|row| {
            let strength: f64 = row.sum();
            if strength > 0.0 {
                row.iter().map(|w| w * w).sum::<f64>() / (strength * strength)
            } else {
                0.0
            }
        })
        .sum();
    total / n as f64
}

/// `Tr(I^3) / sum_{i != j} [I^2]_ij`; 0 when there are no two-paths.
pub fn network_clustering(mi: &MIMatrix) -> f64 {
    let m = mi.matrix();
    let sq = m * m;
    let denom = sq.sum() - sq.trace();
    if denom < CLUSTERING_EPS {
        return 0.0;
    }
    (&sq * m).trace() / denom
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkSummary {
    pub density: f64,
    pub disparity: f64,
    pub clustering: f64,
}

pub fn network_summary(mi: &MIMatrix) -> NetworkSummary {
    NetworkSummary {
        density: network_density(mi),
        disparity: disparity(mi),
        clustering: network_clustering(mi),
    }
}
