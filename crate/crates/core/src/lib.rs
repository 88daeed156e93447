//! Exact computations with mixed Koszul complexes over localized polynomial
//! rings: standard bases and lengths, complex homology, mixed and
//! Buchsbaum-Rim multiplicities, and vector-field indices on isolated
//! complete intersection singularities.

pub mod cli;
pub mod complexes;
pub mod error;
pub mod icis;
pub mod localalg;
pub mod multiplicities;
pub mod polyring;
pub mod qmatrix;

pub use error::AlgError;

/// Length of a module: either a finite count of standard monomials or
/// infinite (the quotient has positive dimension).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn is_finite(&self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(*n),
            Length::Infinite => None,
        }
    }

    pub fn expect_finite(&self) -> Result<u64, AlgError> {
        self.finite().ok_or(AlgError::NotFiniteColength)
    }
}

impl std::fmt::Display for Length {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "INFINITE"),
        }
    }
}
