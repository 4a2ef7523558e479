// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, AddAssign};

use serde::Serialize;

/// Entanglement and classical communication consumed by a protocol run.
/// Entanglement is counted in ebits (`log2` of the Schmidt rank of a
/// maximally entangled resource), communication in bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ResourceLedger {
    pub ebits_in: f64,
    pub ebits_out: f64,
    pub cbits_forward: f64,
    pub cbits_backward: f64,
}

impl ResourceLedger {
    /// `ebits_in - ebits_out`.
    pub fn net_ebits(&self) -> f64 {
        self.ebits_in - self.ebits_out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.ebits_in >= 0.0 && self.ebits_out >= 0.0 && self.cbits_forward >= 0.0 && self.cbits_backward >= 0.0
    }
}

impl Add for ResourceLedger {
    type Output = ResourceLedger;
    fn add(self, o: ResourceLedger) -> ResourceLedger {
        ResourceLedger {
            ebits_in: self.ebits_in + o.ebits_in,
            ebits_out: self.ebits_out + o.ebits_out,
            cbits_forward: self.cbits_forward + o.cbits_forward,
            cbits_backward: self.cbits_backward + o.cbits_backward,
        }
    }
}

impl AddAssign for ResourceLedger {
    fn add_assign(&mut self, o: ResourceLedger) {
        *self = *self + o;
    }
}

/// The ledger change attributed to one protocol stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageDelta {
    pub stage: String,
    pub delta: ResourceLedger,
}
