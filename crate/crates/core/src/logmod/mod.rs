//! Logarithmic derivation modules of central (multi)arrangements.

mod derivation;
mod freeness;
mod graded;
mod saito;

pub use derivation::{euler_derivation, weyl_act, ziegler_restrict, Derivation, MembershipWitness};
pub use derivation::is_scalar_multiple;
pub use freeness::{
    decide_freeness, free_hilbert_function, FreenessCertificate, FreenessOptions, FreenessStatus, FreenessVerdict,
    DEFAULT_SEED,
};
pub use graded::{graded_derivations, graded_derivations_direct, graded_dimension, DerivationSpace, GradedBasis};
pub use saito::{coefficient_determinant, saito_constant, saito_test};

use crate::arrangement::{CentralArrangement, MultiArrangement};
use crate::exactalg::{LinearForm, Polynomial};

/// Something with a module of logarithmic derivations: a list of linear
/// forms with multiplicities.
pub trait LogTarget {
    fn arity(&self) -> usize;
    /// Forms with positive multiplicity.
    fn constraints(&self) -> Vec<(LinearForm, u32)>;
    fn defining_polynomial(&self) -> Polynomial;
    fn total_multiplicity(&self) -> usize;
    /// All multiplicities are 1.
    fn is_simple_arrangement(&self) -> bool;
}

impl LogTarget for CentralArrangement {
    fn arity(&self) -> usize {
        CentralArrangement::arity(self)
    }

    fn constraints(&self) -> Vec<(LinearForm, u32)> {
        self.forms().iter().map(|f| (f.clone(), 1)).collect()
    }

    fn defining_polynomial(&self) -> Polynomial {
        CentralArrangement::defining_polynomial(self)
    }

    fn total_multiplicity(&self) -> usize {
        self.len()
    }

    fn is_simple_arrangement(&self) -> bool {
        true
    }
}

impl LogTarget for MultiArrangement {
    fn arity(&self) -> usize {
        MultiArrangement::arity(self)
    }

    fn constraints(&self) -> Vec<(LinearForm, u32)> {
        self.forms()
            .iter()
            .zip(self.multiplicities())
            .filter(|(_, &m)| m > 0)
            .map(|(f, &m)| (f.clone(), m))
            .collect()
    }

    fn defining_polynomial(&self) -> Polynomial {
        MultiArrangement::defining_polynomial(self)
    }

    fn total_multiplicity(&self) -> usize {
        MultiArrangement::total_multiplicity(self)
    }

    fn is_simple_arrangement(&self) -> bool {
        self.multiplicities().iter().all(|&m| m <= 1)
    }
}
