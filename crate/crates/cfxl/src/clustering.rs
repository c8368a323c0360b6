//! User-centric AP clustering and the UE-UE cooperation graph it induces.
//!
//! An AP serves a UE when the link's large-scale coefficient clears that UE's
//! threshold. Two deterministic post-passes keep the assignment total: a UE
//! whose threshold empties its cluster gets its single best AP, and an AP
//! left serving nobody attaches to its strongest UE. Two UEs cooperate (may
//! share observations) exactly when at least one AP serves both.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Boolean AP-UE service relation plus the per-UE cluster index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApAssignment {
    pub num_aps: usize,
    pub num_ues: usize,
    /// Row-major M x K service flags.
    served: Vec<bool>,
    /// Per-UE serving AP indices, ascending.
    pub clusters: Vec<Vec<usize>>,
}

impl ApAssignment {
    pub fn from_flags(num_aps: usize, num_ues: usize, served: Vec<bool>) -> Result<ApAssignment> {
        if served.len() != num_aps * num_ues {
            return Err(Error::InvalidArgument(format!(
                "flag vector has {} entries, expected {}",
                served.len(),
                num_aps * num_ues
            )));
        }
        let mut clusters = vec![Vec::new(); num_ues];
        for m in 0..num_aps {
            for k in 0..num_ues {
                if served[m * num_ues + k] {
                    clusters[k].push(m);
                }
            }
        }
        Ok(ApAssignment {
            num_aps,
            num_ues,
            served,
            clusters,
        })
    }

    /// Does AP `m` serve UE `k`?
    pub fn serves(&self, m: usize, k: usize) -> bool {
        self.served[m * self.num_ues + k]
    }

    /// Serving APs of UE `k`.
    pub fn cluster(&self, k: usize) -> &[usize] {
        &self.clusters[k]
    }

    pub fn cluster_size(&self, k: usize) -> usize {
        self.clusters[k].len()
    }

    /// Number of UEs served by AP `m`.
    pub fn load(&self, m: usize) -> usize {
        (0..self.num_ues).filter(|&k| self.serves(m, k)).count()
    }

    /// Number of APs serving both UEs.
    pub fn shared_aps(&self, k: usize, k2: usize) -> usize {
        (0..self.num_aps)
            .filter(|&m| self.serves(m, k) && self.serves(m, k2))
            .count()
    }
}

/// Symmetric, reflexive UE-UE information-sharing relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoopGraph {
    pub num_ues: usize,
    /// Row-major K x K flags.
    linked: Vec<bool>,
}

impl CoopGraph {
    pub fn from_flags(num_ues: usize, linked: Vec<bool>) -> Result<CoopGraph> {
        if linked.len() != num_ues * num_ues {
            return Err(Error::InvalidArgument(format!(
                "flag vector has {} entries, expected {}",
                linked.len(),
                num_ues * num_ues
            )));
        }
        Ok(CoopGraph { num_ues, linked })
    }

    pub fn identity(num_ues: usize) -> CoopGraph {
        let mut linked = vec![false; num_ues * num_ues];
        for k in 0..num_ues {
            linked[k * num_ues + k] = true;
        }
        CoopGraph { num_ues, linked }
    }

    pub fn complete(num_ues: usize) -> CoopGraph {
        CoopGraph {
            num_ues,
            linked: vec![true; num_ues * num_ues],
        }
    }

    pub fn shares(&self, k: usize, k2: usize) -> bool {
        self.linked[k * self.num_ues + k2]
    }

    /// Neighborhood size |o_k| (self included).
    pub fn degree(&self, k: usize) -> usize {
        (0..self.num_ues).filter(|&j| self.shares(k, j)).count()
    }

    /// Mask row as 0/1 values.
    pub fn mask_row(&self, k: usize) -> Vec<f64> {
        (0..self.num_ues)
            .map(|j| if self.shares(k, j) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Fraction of linked pairs, diagonal included.
    pub fn density(&self) -> f64 {
        let on = self.linked.iter().filter(|&&v| v).count();
        on as f64 / (self.num_ues * self.num_ues) as f64
    }

    pub fn is_symmetric_reflexive(&self) -> bool {
        (0..self.num_ues).all(|k| {
            self.shares(k, k) && (0..self.num_ues).all(|j| self.shares(k, j) == self.shares(j, k))
        })
    }
}

/// Thresholds each link's large-scale coefficient against the per-UE
/// threshold, then applies the two fallback passes:
/// (a) a UE with an empty cluster is assigned its best AP;
/// (b) an AP serving no UE is assigned to its strongest UE.
/// Ties break toward the lower index.
pub fn threshold_cluster(beta: &DMatrix<f64>, thresholds: &[f64]) -> Result<ApAssignment> {
    let (num_aps, num_ues) = beta.shape();
    if thresholds.len() != num_ues {
        return Err(Error::InvalidArgument(format!(
            "{} thresholds for {num_ues} UEs",
            thresholds.len()
        )));
    }
    if beta.iter().any(|&b| !(b > 0.0)) {
        return Err(Error::InvalidArgument(
            "large-scale coefficients must be positive".into(),
        ));
    }
    if thresholds.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidArgument("thresholds must be positive".into()));
    }

    let mut served = vec![false; num_aps * num_ues];
    for m in 0..num_aps {
        for k in 0..num_ues {
            served[m * num_ues + k] = beta[(m, k)] >= thresholds[k];
        }
    }

    // (a) empty cluster -> single best AP
    for k in 0..num_ues {
        if (0..num_aps).all(|m| !served[m * num_ues + k]) {
            let best = (0..num_aps)
                .max_by(|&a, &b| {
                    beta[(a, k)]
                        .partial_cmp(&beta[(b, k)])
                        .unwrap()
                        .then(b.cmp(&a))
                })
                .unwrap();
            served[best * num_ues + k] = true;
        }
    }

    // (b) idle AP -> strongest UE
    for m in 0..num_aps {
        if (0..num_ues).all(|k| !served[m * num_ues + k]) {
            let best = (0..num_ues)
                .max_by(|&a, &b| {
                    beta[(m, a)]
                        .partial_cmp(&beta[(m, b)])
                        .unwrap()
                        .then(b.cmp(&a))
                })
                .unwrap();
            served[m * num_ues + best] = true;
        }
    }

    ApAssignment::from_flags(num_aps, num_ues, served)
}

/// Two UEs share information exactly when some AP serves both; the diagonal
/// is always set.
pub fn coop_indicator(assign: &ApAssignment) -> CoopGraph {
    let k_n = assign.num_ues;
    let mut linked = vec![false; k_n * k_n];
    for k in 0..k_n {
        for k2 in 0..k_n {
            linked[k * k_n + k2] = k == k2 || assign.shared_aps(k, k2) >= 1;
        }
    }
    CoopGraph {
        num_ues: k_n,
        linked,
    }
}

/// Per-UE constraint check outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeConstraintCheck {
    pub ue: usize,
    /// Service column sums to the cluster cardinality.
    pub cluster_consistent: bool,
    /// Sharing degree is bounded by 1 + total shared-AP count.
    pub coop_bounded: bool,
}

impl UeConstraintCheck {
    pub fn pass(&self) -> bool {
        self.cluster_consistent && self.coop_bounded
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub per_ue: Vec<UeConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_pass(&self) -> bool {
        self.per_ue.iter().all(UeConstraintCheck::pass)
    }
}

/// Report-only verification of the clustering-side feasibility constraints:
/// the service column of each UE sums to its cluster size, and each UE's
/// sharing degree never exceeds 1 + the number of AP-sharing pairs it is in.
pub fn validate_constraints(assign: &ApAssignment, coop: &CoopGraph) -> ConstraintReport {
    let per_ue = (0..assign.num_ues)
        .map(|k| {
            let col_sum = (0..assign.num_aps).filter(|&m| assign.serves(m, k)).count();
            let cluster_consistent = col_sum == assign.cluster_size(k);
            let shared_total: usize = (0..assign.num_ues).map(|k2| assign.shared_aps(k, k2)).sum();
            let coop_bounded = coop.degree(k) <= 1 + shared_total;
            UeConstraintCheck {
                ue: k,
                cluster_consistent,
                coop_bounded,
            }
        })
        .collect();
    ConstraintReport { per_ue }
}
