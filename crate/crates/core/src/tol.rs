//! Numeric tolerances shared by every semantic comparison.

use std::sync::OnceLock;

/// Default tolerance for semantic assertions (probabilities, reduced states).
pub const SEMANTIC_TOL: f64 = 1e-9;
/// Tolerance for exact algebraic gate identities.
pub const EXACT_TOL: f64 = 1e-12;
/// Ensemble weights at or below this are rejected.
pub const MIN_WEIGHT: f64 = 1e-12;
/// A reduced state is a proper mixture when its purity is below `1 - PROPER_MIXTURE_GAP`.
pub const PROPER_MIXTURE_GAP: f64 = 1e-9;

/// Semantic tolerance, overridable through the `HQCL_TOL` environment variable.
pub fn semantic() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("HQCL_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(SEMANTIC_TOL)
    })
}
