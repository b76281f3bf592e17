//! Permutation symmetry workbench.
//!
//! Two halves share one permutation type:
//!
//! * the quantum side ([`hilbert`], [`sectors`], [`symmetriser`]) builds the
//!   representation of S_n on an n-fold tensor product, its symmetry sectors,
//!   generalised rays and the group-average map on operators;
//! * the model side ([`models`]) applies domain permutations to finite
//!   relational structures and classifies toy theories by permutability and
//!   fixity.
//!
//! [`casebook`] reproduces the worked examples (quantum coins, the Bloch
//! picture of two coins, the three-particle generalised ray, toy theories).

pub mod casebook;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod models;
pub mod par;
pub mod sampling;
pub mod sectors;
pub mod symgroup;
pub mod symmetriser;

pub use error::{Error, Result};
pub use hilbert::{AssemblyConfig, DensityOperator, Observable, Operator, PermOperator, PermutationRep, StateVector};
pub use linalg::{CMatrix, CVector, EPS_ABS, EPS_NORM, EPS_RANK};
pub use par::Strategy;
pub use symgroup::{CharacterTable, Partition, Permutation, SymmetricGroup, N_MAX};
