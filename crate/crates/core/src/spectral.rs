//! Resistance through the second minor of the hammock Laplacian.
//!
//! Deleting the rows and columns of `O` and `O'` leaves the `MN x MN` minor
//!
//! ```text
//! L = s^-1 L_M^DD (x) U_N + r^-1 U_M (x) L_N^free
//! ```
//!
//! whose eigenpairs are products of Dirichlet-Dirichlet modes along a column
//! and free modes along a row. The resistance is
//!
//! ```text
//! R = Sigma2^2 / (N s - Sigma1) + Linv[a,a] + Linv[b,b] - 2 Linv[a,b]
//! ```
//!
//! where `Sigma1` sums `Linv` over the bottom row and `Sigma2` sums the
//! difference of the `a` and `b` columns of `Linv` over the bottom row. The
//! inverse elements are available both as the raw double mode sum and as the
//! single sum obtained after summing the row modes in closed form.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hyperbolic::{cosh, sinh};
use crate::lattice::{HammockSpec, NodeRef};
use crate::numeric::pairwise_sum;
use crate::result::{Method, ResistanceResult};

/// Dense minor, row/column order by flat index.
pub fn build_second_minor(spec: &HammockSpec) -> DMatrix<f64> {
    let (m, n) = (spec.rows(), spec.cols());
    let dd = DMatrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    let free = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 if n == 1 => 0.0,
        0 if i == 0 || i == n - 1 => 1.0,
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    dd.kronecker(&DMatrix::identity(n, n)) / spec.s() + DMatrix::identity(m, m).kronecker(&free) / spec.r()
}

/// Analytic eigen-system of the second minor.
#[derive(Debug, Clone)]
pub struct MinorEigenSystem {
    spec: HammockSpec,
    /// `theta_n = pi n / N`, `n = 0..N`.
    pub theta: Vec<f64>,
    /// `phi_m = pi (m+1) / (2M+2)`, `m = 0..M`.
    pub phi: Vec<f64>,
    /// `Omega_m` with `cosh(2 Omega_m) = 1 + h (1 - cos 2 phi_m)`.
    pub omega: Vec<f64>,
}

pub fn eigen_system(spec: &HammockSpec) -> MinorEigenSystem {
    let (m, n) = (spec.rows(), spec.cols());
    let phi: Vec<f64> = (0..m).map(|k| PI * (k + 1) as f64 / (2 * m + 2) as f64).collect();
    let omega = phi.iter().map(|&p| (spec.h().sqrt() * p.sin()).asinh()).collect();
    MinorEigenSystem {
        spec: *spec,
        theta: (0..n).map(|k| PI * k as f64 / n as f64).collect(),
        phi,
        omega,
    }
}

impl MinorEigenSystem {
    /// `Lambda_{m,n} = 2 r^-1 (1 - cos theta_n) + 2 s^-1 (1 - cos 2 phi_m)`.
    ///
    /// `n` may run past `N - 1` (up to `2N - 1`) with `theta_n = pi n / N`.
    pub fn eigenvalue(&self, m: usize, n: usize) -> f64 {
        let theta = PI * n as f64 / self.spec.cols() as f64;
        let phi = self.phi[m];
        // 1 - cos(2a) = 2 sin^2 a
        4.0 * (theta / 2.0).sin().powi(2) / self.spec.r() + 4.0 * phi.sin().powi(2) / self.spec.s()
    }

    /// Free-chain eigenvector `u_n(x)`.
    pub fn u(&self, n: usize, x: usize) -> f64 {
        let cols = self.spec.cols() as f64;
        if n == 0 {
            (1.0 / cols).sqrt()
        } else {
            (2.0 / cols).sqrt() * ((x as f64 - 0.5) * self.theta[n]).cos()
        }
    }

    /// Dirichlet-Dirichlet eigenvector `v_m(y)`.
    pub fn v(&self, m: usize, y: usize) -> f64 {
        (2.0 / (self.spec.rows() + 1) as f64).sqrt() * (2.0 * y as f64 * self.phi[m]).sin()
    }

    /// `w_n(x) = N^-1/2 cos((2x-1) theta_n / 2)` for `n = 0..2N`.
    pub fn w(&self, n: usize, x: usize) -> f64 {
        let cols = self.spec.cols() as f64;
        let theta = PI * n as f64 / cols;
        (1.0 / cols).sqrt() * (0.5 * (2.0 * x as f64 - 1.0) * theta).cos()
    }

    /// Product eigenvector `psi_{m,n}(x, y) = u_n(x) v_m(y)` in flat-index order.
    pub fn eigenvector(&self, m: usize, n: usize) -> Vec<f64> {
        let sp = &self.spec;
        let mut out = Vec::with_capacity(sp.interior_count());
        for y in 1..=sp.rows() {
            for x in 1..=sp.cols() {
                out.push(self.u(n, x) * self.v(m, y));
            }
        }
        out
    }
}

/// Both sides of
/// `(1/2N) sum_{n<2N} cos(l theta_n) / (cosh 2W - cos theta_n) = cosh(2(N-l)W) / (sinh 2W sinh 2NW)`
/// with `theta_n = pi n / N`.
pub fn sum_identity_check(cols: usize, ell: usize, omega: f64) -> Result<(f64, f64)> {
    if cols == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if ell > 2 * cols {
        return Err(Error::Domain(format!("l = {ell} exceeds 2N = {}", 2 * cols)));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::SingularParameter(format!(
            "Omega must be finite and positive (got {omega})"
        )));
    }
    let n = cols as f64;
    let l = ell as f64;
    // cosh(2W) - cos(t) = 2 sinh^2 W + 2 sin^2(t/2)
    let shift = 2.0 * omega.sinh().powi(2);
    let terms: Vec<f64> = (0..2 * cols)
        .map(|k| {
            let theta = PI * k as f64 / n;
            (l * theta).cos() / (shift + 2.0 * (theta / 2.0).sin().powi(2))
        })
        .collect();
    let lhs = pairwise_sum(&terms) / (2.0 * n);
    let rhs = (cosh(2.0 * (n - l) * omega) / (sinh(2.0 * omega) * sinh(2.0 * n * omega))).value();
    Ok((lhs, rhs))
}

/// How an inverse-minor element is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseForm {
    /// Sum over all `M x 2N` modes.
    DoubleSum,
    /// Single sum over the `M` column modes.
    Reduced,
}

fn interior(spec: &HammockSpec, node: NodeRef) -> Result<(usize, usize)> {
    match node {
        NodeRef::Interior { .. } => spec.check_interior(node),
        _ => Err(Error::UnsupportedNode(node, "spectral")),
    }
}

/// Element `Linv[a, b]` of the inverse second minor, in inverse siemens (ohms).
pub fn inverse_minor_element(spec: &HammockSpec, a: NodeRef, b: NodeRef, form: InverseForm) -> Result<f64> {
    let eig = eigen_system(spec);
    inverse_element_with(&eig, spec, a, b, form)
}

fn inverse_element_with(
    eig: &MinorEigenSystem,
    spec: &HammockSpec,
    a: NodeRef,
    b: NodeRef,
    form: InverseForm,
) -> Result<f64> {
    let (xa, ya) = interior(spec, a)?;
    let (xb, yb) = interior(spec, b)?;
    let (m, n) = (spec.rows(), spec.cols());
    let value = match form {
        InverseForm::DoubleSum => {
            let mut terms = Vec::with_capacity(2 * m * n);
            for mm in 0..m {
                let vv = eig.v(mm, ya) * eig.v(mm, yb);
                for nn in 0..2 * n {
                    terms.push(eig.w(nn, xa) * eig.w(nn, xb) * vv / eig.eigenvalue(mm, nn));
                }
            }
            pairwise_sum(&terms)
        }
        InverseForm::Reduced => {
            let (x, xp) = (xa.min(xb) as f64, xa.max(xb) as f64);
            let cols = n as f64;
            let terms: Vec<f64> = (0..m)
                .map(|mm| {
                    let om = eig.omega[mm];
                    let ratio = cosh((2.0 * cols - 2.0 * xp + 1.0) * om) * cosh((1.0 - 2.0 * x) * om)
                        / (sinh(2.0 * om) * sinh(2.0 * cols * om));
                    eig.v(mm, ya) * eig.v(mm, yb) * ratio.value()
                })
                .collect();
            spec.r() * pairwise_sum(&terms)
        }
    };
    Ok(value)
}

/// `S(x', y') = sum_{x=1..N} Linv[(x,1), (x',y')]`, summed numerically.
pub fn bottom_row_sum(spec: &HammockSpec, node: NodeRef, form: InverseForm) -> Result<f64> {
    let eig = eigen_system(spec);
    bottom_row_sum_with(&eig, spec, node, form)
}

fn bottom_row_sum_with(eig: &MinorEigenSystem, spec: &HammockSpec, node: NodeRef, form: InverseForm) -> Result<f64> {
    let terms = (1..=spec.cols())
        .map(|x| inverse_element_with(eig, spec, NodeRef::interior(x, 1), node, form))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `(M + 1 - y') s / (M + 1)`.
pub fn bottom_row_sum_closed(spec: &HammockSpec, y: usize) -> f64 {
    (spec.rows() + 1 - y) as f64 * spec.s() / (spec.rows() + 1) as f64
}

/// The two bottom-row sums of the rank-one correction, in ohms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySums {
    pub sigma1: f64,
    pub sigma2: f64,
}

/// Sums computed from individual inverse-minor elements.
pub fn boundary_sums(spec: &HammockSpec, a: NodeRef, b: NodeRef, form: InverseForm) -> Result<BoundarySums> {
    let eig = eigen_system(spec);
    interior(spec, a)?;
    interior(spec, b)?;
    let row = (1..=spec.cols())
        .map(|x| bottom_row_sum_with(&eig, spec, NodeRef::interior(x, 1), form))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundarySums {
        sigma1: pairwise_sum(&row),
        sigma2: bottom_row_sum_with(&eig, spec, a, form)? - bottom_row_sum_with(&eig, spec, b, form)?,
    })
}

/// `Sigma1 = N M s / (M+1)`, `Sigma2 = (y_b - y_a) s / (M+1)`.
pub fn boundary_sums_closed(spec: &HammockSpec, a: NodeRef, b: NodeRef) -> Result<BoundarySums> {
    let (_, ya) = interior(spec, a)?;
    let (_, yb) = interior(spec, b)?;
    let (m, n, s) = (spec.rows() as f64, spec.cols() as f64, spec.s());
    Ok(BoundarySums {
        sigma1: n * m * s / (m + 1.0),
        sigma2: (yb as f64 - ya as f64) * s / (m + 1.0),
    })
}

/// Evaluation choices for [`resistance_spectral_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralOptions {
    pub form: InverseForm,
    /// Sum `Sigma1`/`Sigma2` element by element instead of using their closed forms.
    pub numeric_sums: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            form: InverseForm::Reduced,
            numeric_sums: false,
        }
    }
}

/// Resistance from the reduced inverse-minor elements and closed-form sums.
pub fn resistance_spectral(spec: &HammockSpec, a: NodeRef, b: NodeRef) -> Result<ResistanceResult> {
    resistance_spectral_with(spec, a, b, SpectralOptions::default())
}

pub fn resistance_spectral_with(
    spec: &HammockSpec,
    a: NodeRef,
    b: NodeRef,
    options: SpectralOptions,
) -> Result<ResistanceResult> {
    interior(spec, a)?;
    interior(spec, b)?;
    let method = match options.form {
        InverseForm::DoubleSum => Method::SpectralDoubleSum,
        InverseForm::Reduced => Method::Spectral,
    };
    if a == b {
        return Ok(ResistanceResult::new(0.0, method));
    }
    let eig = eigen_system(spec);
    let sums = if options.numeric_sums {
        boundary_sums(spec, a, b, options.form)?
    } else {
        boundary_sums_closed(spec, a, b)?
    };
    let el = |p, q| inverse_element_with(&eig, spec, p, q, options.form);
    let r_hat = el(a, a)? + el(b, b)? - 2.0 * el(a, b)?;
    let correction = sums.sigma2 * sums.sigma2 / (spec.cols() as f64 * spec.s() - sums.sigma1);
    let terms = match options.form {
        InverseForm::DoubleSum => 2 * spec.rows() * spec.cols(),
        InverseForm::Reduced => spec.rows(),
    };
    Ok(ResistanceResult::new(correction + r_hat, method).with_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::relative_deviation as rel;

    fn spec(m: usize, n: usize, r: f64, s: f64) -> HammockSpec {
        HammockSpec::new(m, n, r, s).unwrap()
    }

    #[test]
    fn minor_of_three_by_four() {
        let a = build_second_minor(&spec(3, 4, 1.0, 1.0));
        assert_eq!(a.nrows(), 12);
        // node (1,1): one horizontal neighbour, up, and the O link
        assert_eq!(a[(0, 0)], 3.0);
        // node (2,2): two horizontal, up, down
        assert_eq!(a[(5, 5)], 4.0);
        assert_eq!(a[(0, 1)], -1.0);
        assert_eq!(a[(0, 4)], -1.0);
        assert_eq!(a[(3, 4)], 0.0);
        assert_eq!(a, a.transpose());
    }

    #[test]
    fn minor_single_node() {
        let a = build_second_minor(&spec(1, 1, 3.0, 0.5));
        assert_eq!(a.shape(), (1, 1));
        assert_eq!(a[(0, 0)], 4.0);
    }

    #[test]
    fn minor_row_sums() {
        for (m, n) in [(1, 3), (3, 4), (5, 2)] {
            let sp = spec(m, n, 2.0, 0.5);
            let a = build_second_minor(&sp);
            for i in 0..m * n {
                let y = i / n + 1;
                let boundary = usize::from(y == 1) + usize::from(y == m);
                let sum: f64 = a.row(i).iter().sum();
                assert!((sum - boundary as f64 / 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_small_cases() {
        let e = eigen_system(&spec(1, 3, 1.0, 1.0));
        assert!((e.phi[0] - PI / 4.0).abs() < 1e-15);
        assert!((e.v(0, 1) - 1.0).abs() < 1e-15);
        let e = eigen_system(&spec(3, 1, 1.0, 1.0));
        assert_eq!(e.theta[0], 0.0);
        assert_eq!(e.u(0, 1), 1.0);
        let e = eigen_system(&spec(3, 4, 1.0, 1.0));
        assert!((e.eigenvalue(0, 0) - 0.585_786_437_626_904_9).abs() < 1e-12);
    }

    #[test]
    fn eigenpairs_satisfy_minor() {
        for (m, n, r, s) in [(1, 1, 1.0, 1.0), (3, 4, 1.0, 1.0), (4, 5, 2.0, 0.3), (8, 8, 0.5, 1.5)] {
            let sp = spec(m, n, r, s);
            let a = build_second_minor(&sp);
            let e = eigen_system(&sp);
            for mm in 0..m {
                for nn in 0..n {
                    let v = nalgebra::DVector::from_vec(e.eigenvector(mm, nn));
                    let lam = e.eigenvalue(mm, nn);
                    assert!(lam > 0.0);
                    let resid = (&a * &v - &v * lam).amax();
                    assert!(resid <= 1e-10 * lam.max(1.0), "({mm},{nn}) residual {resid}");
                }
            }
        }
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let sp = spec(5, 7, 1.0, 1.0);
        let e = eigen_system(&sp);
        for n1 in 0..7 {
            for n2 in 0..7 {
                let dot: f64 = (1..=7).map(|x| e.u(n1, x) * e.u(n2, x)).sum();
                assert!((dot - f64::from(u8::from(n1 == n2))).abs() < 1e-12);
            }
        }
        for m1 in 0..5 {
            for m2 in 0..5 {
                let dot: f64 = (1..=5).map(|y| e.v(m1, y) * e.v(m2, y)).sum();
                assert!((dot - f64::from(u8::from(m1 == m2))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn omega_relation() {
        let sp = spec(6, 3, 2.5, 1.0);
        let e = eigen_system(&sp);
        for (mm, &om) in e.omega.iter().enumerate() {
            assert!((om.sinh() - sp.h().sqrt() * e.phi[mm].sin()).abs() < 1e-12);
            let want = 1.0 + sp.h() * (1.0 - (2.0 * e.phi[mm]).cos());
            assert!(rel((2.0 * om).cosh(), want) < 1e-13);
        }
    }

    #[test]
    fn eigen_reconstruction() {
        for (m, n) in [(3, 4), (6, 6), (2, 9)] {
            let sp = spec(m, n, 1.3, 0.8);
            let e = eigen_system(&sp);
            let mut acc = DMatrix::zeros(m * n, m * n);
            for mm in 0..m {
                for nn in 0..n {
                    let v = nalgebra::DVector::from_vec(e.eigenvector(mm, nn));
                    acc += &v * v.transpose() * e.eigenvalue(mm, nn);
                }
            }
            assert!((acc - build_second_minor(&sp)).amax() <= 1e-9);
        }
    }

    #[test]
    fn identity_small_cases() {
        let (lhs, rhs) = sum_identity_check(1, 0, 0.7).unwrap();
        let c = 1.4f64.cosh();
        assert!(rel(lhs, c / (c * c - 1.0)) < 1e-13);
        assert!(rel(rhs, c / (c * c - 1.0)) < 1e-13);

        let (lhs, rhs) = sum_identity_check(4, 3, 0.3).unwrap();
        assert!(rel(lhs, rhs) < 1e-12);

        let (l0, r0) = sum_identity_check(5, 10, 0.4).unwrap();
        let (l1, r1) = sum_identity_check(5, 0, 0.4).unwrap();
        assert!(rel(l0, l1) < 1e-13 && rel(r0, r1) < 1e-13);
    }

    #[test]
    fn identity_errors() {
        assert!(matches!(
            sum_identity_check(3, 1, 0.0),
            Err(Error::SingularParameter(_))
        ));
        assert!(matches!(sum_identity_check(3, 7, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_forms_agree_and_are_symmetric() {
        for m in 1..=5 {
            for n in 1..=5 {
                let sp = spec(m, n, 1.0, 1.0);
                let nodes: Vec<_> = sp.interior_nodes().collect();
                for &a in &nodes {
                    for &b in &nodes {
                        let d = inverse_minor_element(&sp, a, b, InverseForm::DoubleSum).unwrap();
                        let r = inverse_minor_element(&sp, a, b, InverseForm::Reduced).unwrap();
                        let rt = inverse_minor_element(&sp, b, a, InverseForm::Reduced).unwrap();
                        assert!(rel(d, r) <= 1e-11, "{m}x{n} {a} {b}: {d} vs {r}");
                        assert_eq!(r, rt);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_matches_dense_inversion() {
        let sp = spec(2, 2, 1.0, 1.0);
        let inv = build_second_minor(&sp).try_inverse().unwrap();
        let a = NodeRef::interior(1, 1);
        let got = inverse_minor_element(&sp, a, a, InverseForm::Reduced).unwrap();
        assert!(rel(got, inv[(0, 0)]) < 1e-13);
    }

    #[test]
    fn bottom_row_sum_closed_form() {
        for m in 1..=6 {
            for n in 1..=6 {
                let sp = spec(m, n, 1.4, 0.9);
                for node in sp.interior_nodes() {
                    let NodeRef::Interior { y, .. } = node else {
                        unreachable!()
                    };
                    let got = bottom_row_sum(&sp, node, InverseForm::Reduced).unwrap();
                    assert!(rel(got, bottom_row_sum_closed(&sp, y)) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn boundary_sum_examples() {
        let sp = spec(3, 4, 1.0, 1.0);
        let a = NodeRef::interior(1, 1);
        let b = NodeRef::interior(2, 3);
        let c = boundary_sums_closed(&sp, a, b).unwrap();
        assert_eq!(c.sigma1, 3.0);
        assert_eq!(c.sigma2, 0.5);
        assert_eq!(
            boundary_sums_closed(&sp, a, NodeRef::interior(4, 1)).unwrap().sigma2,
            0.0
        );
        let numeric = boundary_sums(&sp, a, b, InverseForm::DoubleSum).unwrap();
        assert!(rel(numeric.sigma1, 3.0) < 1e-10);
        assert!(rel(numeric.sigma2, 0.5) < 1e-10);
        let reversed = boundary_sums(&sp, b, a, InverseForm::Reduced).unwrap();
        assert!(rel(reversed.sigma2, -0.5) < 1e-10);
    }

    #[test]
    fn generic_correction_matches_hammock_form() {
        // c0 = N/s, c_{0,i} = 1/s on the bottom row; dense inverse of the minor
        for (m, n, r, s) in [(3, 4, 1.0, 1.0), (2, 5, 2.0, 0.5)] {
            let sp = spec(m, n, r, s);
            let inv = build_second_minor(&sp).try_inverse().unwrap();
            let c = |i: usize| if i < n { 1.0 / s } else { 0.0 };
            let mut denom = n as f64 / s;
            for i in 0..m * n {
                for j in 0..m * n {
                    denom -= inv[(i, j)] * c(i) * c(j);
                }
            }
            let (ia, ib) = (0, m * n - 1);
            let num: f64 = (0..m * n).map(|i| (inv[(i, ia)] - inv[(i, ib)]) * c(i)).sum();
            let generic = inv[(ia, ia)] + inv[(ib, ib)] - 2.0 * inv[(ia, ib)] + num * num / denom;
            let got = resistance_spectral(&sp, NodeRef::interior(1, 1), NodeRef::interior(n, m)).unwrap();
            assert!(rel(generic, got.ohms) < 1e-12, "{generic} vs {}", got.ohms);
        }
    }

    #[test]
    fn spectral_pins() {
        let sp = spec(1, 2, 1.0, 1.0);
        let r = resistance_spectral(&sp, NodeRef::interior(1, 1), NodeRef::interior(2, 1)).unwrap();
        assert!((r.ohms - 0.5).abs() < 1e-14);
        assert_eq!(
            resistance_spectral(&sp, NodeRef::interior(2, 1), NodeRef::interior(2, 1))
                .unwrap()
                .ohms,
            0.0
        );
        assert!(matches!(
            resistance_spectral(&sp, NodeRef::TerminalOPrime, NodeRef::interior(2, 1)),
            Err(Error::UnsupportedNode(..))
        ));
    }

    #[test]
    fn spectral_matches_closed_form() {
        for m in 1..=6 {
            for n in 1..=6 {
                for (r, s) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0)] {
                    let sp = spec(m, n, r, s);
                    let nodes: Vec<_> = sp.interior_nodes().collect();
                    for (i, &a) in nodes.iter().enumerate() {
                        for &b in &nodes[i + 1..] {
                            let c = crate::closed_form::resistance_general(&sp, a, b).unwrap().ohms;
                            let g = resistance_spectral(&sp, a, b).unwrap().ohms;
                            assert!(rel(c, g) <= 1e-10, "{m}x{n} {a}-{b}: {c} vs {g}");
                        }
                    }
                }
            }
        }
    }
}
