//! Physical constants threaded through every dimensional formula.
//!
//! Natural units (`hbar = c = k_B = G = 1`) are the default; SI values are
//! available for evaluating the dimensional thermal-field expressions.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Speed of light.
    pub c: f64,
    /// Boltzmann constant.
    pub k_b: f64,
    /// Newton constant.
    pub g: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self::natural()
    }
}

impl Constants {
    pub const fn natural() -> Self {
        Constants {
            hbar: 1.0,
            c: 1.0,
            k_b: 1.0,
            g: 1.0,
        }
    }

    /// 2019 SI exact values (G is the CODATA recommended value).
    pub const fn si() -> Self {
        Constants {
            hbar: 1.054_571_817e-34,
            c: 299_792_458.0,
            k_b: 1.380_649e-23,
            g: 6.674_30e-11,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("c", self.c),
            ("k_b", self.k_b),
            ("g", self.g),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("constant {name} must be finite and positive, got {v}"));
            }
        }
        Ok(())
    }
}
