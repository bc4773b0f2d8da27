use crate::error::{Error, Result};

/// Pencil parameter kappa and coupling constant c1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub kappa: f64,
    pub c1: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { kappa: 1.0, c1: 1.0 }
    }
}

impl ModelParams {
    /// Accepts any finite kappa (including 0) and nonzero c1.
    pub fn new(kappa: f64, c1: f64) -> Result<Self> {
        if !kappa.is_finite() || !c1.is_finite() {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if c1 == 0.0 {
            return Err(Error::InvalidParams("c1 must be nonzero".into()));
        }
        Ok(ModelParams { kappa, c1 })
    }

    /// Classification and orbit operations need a compact orbit.
    pub fn require_compact(&self) -> Result<()> {
        if self.kappa > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "kappa must be positive here, got {}",
                self.kappa
            )))
        }
    }

    /// tau = sqrt(2) * kappa * c1, so tau^2 = 2 kappa^2 c1^2.
    pub fn tau(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.kappa * self.c1.abs()
    }

    pub fn tau2(&self) -> f64 {
        2.0 * self.kappa * self.kappa * self.c1 * self.c1
    }

    /// b0 = kappa^{3/2} c1^2, where the maximum of H on the singular orbit splits.
    pub fn b0(&self) -> f64 {
        self.kappa.powf(1.5) * self.c1 * self.c1
    }
}
