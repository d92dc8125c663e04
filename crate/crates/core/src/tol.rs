use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute thresholds used by predicates, clustering and angle snapping.
///
/// `orth_tol` and `recon_tol` scale with the matrix order, so construct
/// them through [`Tolerances::for_order`] rather than by hand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub orth_tol: f64,
    pub cluster_tol: f64,
    pub pi_tol: f64,
    pub recon_tol: f64,
}

impl Tolerances {
    pub fn for_order(n: usize) -> Self {
        let n = n.max(1) as f64;
        Tolerances {
            orth_tol: 1e-9 * n,
            cluster_tol: 1e-8,
            pi_tol: 1e-8,
            recon_tol: 1e-9 * n,
        }
    }

    /// Multiplies every threshold by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            orth_tol: self.orth_tol * factor,
            cluster_tol: self.cluster_tol * factor,
            pi_tol: self.pi_tol * factor,
            recon_tol: self.recon_tol * factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("orth_tol", self.orth_tol),
            ("cluster_tol", self.cluster_tol),
            ("pi_tol", self.pi_tol),
            ("recon_tol", self.recon_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Precondition(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::for_order(1)
    }
}
