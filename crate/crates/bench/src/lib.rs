//! Shared fixtures for the resistance benchmarks.

use hammock::{HammockSpec, NodeRef};

/// Square lattice with unit resistors.
pub fn square(size: usize) -> HammockSpec {
    HammockSpec::new(size, size, 1.0, 1.0).expect("positive size")
}

/// A pair spanning most of the lattice diagonally, away from the edges.
pub fn diagonal_pair(spec: &HammockSpec) -> (NodeRef, NodeRef) {
    let (m, n) = (spec.rows(), spec.cols());
    (
        NodeRef::interior(1 + n / 8, 1 + m / 8),
        NodeRef::interior(n - n / 8, m - m / 8),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_is_in_bounds() {
        for size in [1, 2, 7, 100] {
            let spec = square(size);
            let (a, b) = diagonal_pair(&spec);
            assert!(spec.check_interior(a).is_ok() && spec.check_interior(b).is_ok());
        }
    }
}
