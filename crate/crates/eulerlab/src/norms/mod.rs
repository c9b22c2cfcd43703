//! Weighted Sobolev norms DN and N, the sup-norm space DK, the BN ball,
//! Pitt's inequality check, and the infinitesimal composition estimate.

pub mod boxfield;
pub mod composition;
pub mod torus;

pub use boxfield::{box_dk_norm, box_dn_norm, box_n_norm, pitt_check, BoxField, BoxGrid};
pub use composition::{composition_derivative_bound, CompositionCheck, VelocityFamily};
pub use torus::{dk_norm, dn_norm, dn_norm_pair, dn_norm_vector, n_norm, n_norm_vector};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Derivative order M >= 2 and weight order L >= 0 of the weighted Sobolev
/// scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SobolevParams {
    pub m: u32,
    pub l: u32,
}

impl SobolevParams {
    pub fn new(m: u32, l: u32) -> Result<SobolevParams> {
        if m < 2 {
            return Err(Error::InvalidParam(format!("Sobolev order M = {m} must be >= 2")));
        }
        Ok(SobolevParams { m, l })
    }
}

impl Default for SobolevParams {
    fn default() -> Self {
        SobolevParams { m: 2, l: 0 }
    }
}

/// Radius of the ball BN of admissible displacements, measured as
/// `dn_norm` of the displacement gradient. The default is deliberately
/// small; the trajectory driver revises it downward whenever a solve
/// measures a contraction factor above one half.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BnConstant {
    pub radius: f64,
}

impl Default for BnConstant {
    fn default() -> Self {
        BnConstant { radius: 0.1 }
    }
}

impl BnConstant {
    pub fn new(radius: f64) -> BnConstant {
        BnConstant { radius }
    }

    /// Shrink the ball after observing a contraction factor above 1/2.
    pub fn revise(&mut self, measured_ratio: f64) {
        if measured_ratio > 0.5 {
            self.radius *= 0.5 / measured_ratio;
        }
    }
}

/// JSON record for a single norm evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormReport {
    pub norm_name: String,
    pub params: SobolevParams,
    pub value: f64,
}

/// Multi-indices alpha with |alpha| <= max_order.
pub(crate) fn multi_indices(max_order: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a1 in 0..=max_order {
        for a2 in 0..=(max_order - a1) {
            for a3 in 0..=(max_order - a1 - a2) {
                out.push([a1, a2, a3]);
            }
        }
    }
    out
}

pub(crate) fn order(alpha: [u32; 3]) -> u32 {
    alpha[0] + alpha[1] + alpha[2]
}
