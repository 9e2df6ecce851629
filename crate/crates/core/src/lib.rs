//! Geometry of quantum indeterminacy in phase space.
//!
//! The crate works with centered convex bodies in position and momentum
//! space, their `ħ`-polar duals, quantum blobs (symplectic images of the ball
//! of radius `√ħ`), generalized Gaussian states and symplectic capacities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blobs;
pub mod capacities;
pub mod concentration;
pub mod error;
pub mod hull;
pub mod linalg;
pub mod polar;
pub mod sampling;
pub mod states;
pub mod symplectic;
pub mod tol;
pub mod wire;

pub use blobs::{PhaseEllipsoid, QuantumBlob};
pub use capacities::{CapacityMethod, CapacityValue};
pub use concentration::{HardyRegime, SampledFunction1D};
pub use error::{Error, Result};
pub use linalg::{Mat, Vector};
pub use polar::{
    contains, mahler_volume, quantum_pair_check, ConvexBody, EllipsoidBody, Inclusion, MahlerReport, PolytopeBody,
    QuantumPairReport, Space,
};
pub use states::{CovarianceMatrix, GaussianState, QuantumVerdict};
pub use symplectic::{
    is_symplectic, pre_iwasawa, random_symplectic, symplectic_eigenvalues, williamson, Check, PreIwasawaFactors,
    SymplecticGenerator, SymplecticMatrix, WilliamsonForm,
};
