//! Default tolerances. Every check that takes a tolerance argument falls back
//! to one of these.

/// `‖SᵀJS − J‖_max` threshold for symplecticity.
pub const SYMPLECTIC: f64 = 1e-10;

/// Threshold used when validating constructed (randomized) symplectic products.
pub const SYMPLECTIC_LOOSE: f64 = 1e-9;

/// Pair verdict: `holds ⟺ λ_max ≥ 1 − PAIR`.
pub const PAIR: f64 = 1e-9;

/// Relative inclusion tolerance for `contains`.
pub const INCLUSION: f64 = 1e-9;

/// Eigenvalue clamp applied before taking square roots of SPD matrices.
pub const EIG_CLAMP: f64 = 1e-14;

/// Relative mismatch allowed when pairing `±iλ` eigenvalues.
pub const PAIRING: f64 = 1e-9;

/// Symmetry tolerance for matrices that must be symmetric.
pub const SYMMETRY: f64 = 1e-9;

/// Quantum-condition tolerance (in units of action).
pub const QUANTUM: f64 = 1e-9;
