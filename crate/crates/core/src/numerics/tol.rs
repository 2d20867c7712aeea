use crate::error::{Error, Result};

/// Numerical thresholds shared by every computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Singular values at or below `rank_tol · σ₁` count as zero.
    pub rank_tol: f64,
    pub eig_tol: f64,
    /// Decision threshold turning margins into verdicts.
    pub margin_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank_tol: 1e-10, eig_tol: 1e-10, margin_tol: 1e-8 }
    }
}

impl Tolerances {
    pub fn new(rank_tol: f64, eig_tol: f64, margin_tol: f64) -> Result<Self> {
        let t = Self { rank_tol, eig_tol, margin_tol };
        t.validate(1)?;
        Ok(t)
    }

    /// Checks positivity and that `rank_tol` is not below the round-off floor
    /// for matrices of dimension `max_dim`.
    pub fn validate(&self, max_dim: usize) -> Result<()> {
        for v in [self.rank_tol, self.eig_tol, self.margin_tol] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance("tolerances must be finite and positive"));
            }
        }
        if self.rank_tol < f64::EPSILON * max_dim.max(1) as f64 {
            return Err(Error::InvalidTolerance("rank_tol below machine epsilon times dimension"));
        }
        Ok(())
    }
}
