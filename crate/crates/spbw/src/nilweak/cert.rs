use serde::Serialize;

use super::NilError;
use crate::ringmaps::{check_compatibility, CheckMode, CompatReport};
use crate::spbwalg::Extension;

/// Hypotheses of the nilpotency and annihilator results, decided
/// exhaustively on the coefficient ring of an extension.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub strict: bool,
    pub weak: bool,
    pub ni: bool,
    pub compat: CompatReport,
}

impl Certificate {
    /// Weak (Σ,Δ)-compatible and NI: enough for the coefficient criterion
    /// for nilpotency and for the Π-Armendariz property.
    pub fn weak_ni(&self) -> bool {
        self.weak && self.ni
    }

    /// (Σ,Δ)-compatible and NI: enough for the annihilator correspondence.
    pub fn strict_ni(&self) -> bool {
        self.strict && self.ni
    }

    pub fn require_weak_ni(&self, what: &str) -> Result<(), NilError> {
        if self.weak_ni() {
            Ok(())
        } else {
            Err(NilError::HypothesisNotCertified(format!(
                "{what} needs a weak (Σ,Δ)-compatible NI ring (weak: {}, NI: {})",
                self.weak, self.ni
            )))
        }
    }

    pub fn require_strict_ni(&self, what: &str) -> Result<(), NilError> {
        if self.strict_ni() {
            Ok(())
        } else {
            Err(NilError::HypothesisNotCertified(format!(
                "{what} needs a (Σ,Δ)-compatible NI ring (compatible: {}, NI: {})",
                self.strict, self.ni
            )))
        }
    }
}

pub fn certify(ext: &Extension) -> Result<Certificate, NilError> {
    let ring = ext.ring();
    let compat = check_compatibility(ring, ext.sigmas(), ext.deltas(), CheckMode::Exhaustive)?;
    Ok(Certificate {
        strict: compat.strict(),
        weak: compat.weak(),
        ni: ring.nil_data().is_ni,
        compat,
    })
}
