pub mod boundary;
pub mod catalog;
pub mod haar;
pub mod integral;
pub mod kernel;
pub mod ledger;
pub mod plancherel;

/// |a − b| / max(|b|, 1e-300).
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
