//! Closed-form resistance between two interior nodes.
//!
//! With `h = r / s`, transverse mode `i = 2..=M+1` contributes through
//! `u_i = 2 + 2h (1 - cos((i-1) pi / (M+1)))`, the larger root `lambda_i` of
//! `lambda^2 - u_i lambda + 1 = 0`, and `L_i = ln(lambda_i) / 2`:
//!
//! ```text
//! R = 2r/(M+1) sum_i [a S_i(y1)^2 - 2 b S_i(y1) S_i(y2) + c S_i(y2)^2] / (sinh 2L_i sinh 2N L_i)
//!     + s (y2 - y1)^2 / (N (M+1))
//! ```
//!
//! where `S_i(y) = sin((i-1) pi y / (M+1))` and `a, b, c` are products of two
//! `cosh` factors set by the node columns ([`CoefficientTriple`]). The uniform
//! mode `i = 1` is the last term. Every summand is evaluated as a ratio of
//! exponent-shifted hyperbolics, so lattices with `N` in the millions do not
//! overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hyperbolic::{cosh, sinh, Scaled};
use crate::lattice::{to_method_b, CoordB, HammockSpec, NodeRef};
use crate::numeric::pairwise_sum;
use crate::result::{Method, ResistanceResult};

/// Per-mode constants of the transverse expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    /// Mode index, `1..=M+1`.
    pub mode: usize,
    pub u: f64,
    /// Larger root of `lambda^2 - u lambda + 1`.
    pub lambda: f64,
    /// `ln(lambda) / 2`.
    pub half_log: f64,
}

pub fn spectral_params(spec: &HammockSpec, mode: usize) -> Result<SpectralParams> {
    let m = spec.rows();
    if mode == 0 || mode > m + 1 {
        return Err(Error::Domain(format!("mode index {mode} not in 1..={}", m + 1)));
    }
    let half_angle = (mode - 1) as f64 * PI / (2.0 * (m + 1) as f64);
    // excess = u/2 - 1 = h (1 - cos 2*half_angle), kept free of cancellation
    let excess = 2.0 * spec.h() * half_angle.sin().powi(2);
    let u = 2.0 + 2.0 * excess;
    let disc = (excess * (2.0 + excess)).max(0.0);
    let root = disc.sqrt();
    Ok(SpectralParams {
        mode,
        u,
        lambda: 1.0 + excess + root,
        half_log: 0.5 * (excess + root).ln_1p(),
    })
}

/// `S_i(y) = sin((i-1) pi y / (M+1))`.
pub fn mode_sine(spec: &HammockSpec, mode: usize, y: usize) -> f64 {
    ((mode - 1) as f64 * PI * y as f64 / (spec.rows() + 1) as f64).sin()
}

/// The three `cosh`-product coefficients of one mode.
///
/// Values are held in exponent-shifted form; [`CoefficientTriple::alpha`] and
/// friends may return `inf` for large lattices, while
/// [`CoefficientTriple::normalized`] is always finite for modes `i >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientTriple {
    alpha: Scaled,
    beta: Scaled,
    gamma: Scaled,
    denominator: Scaled,
}

impl CoefficientTriple {
    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }

    pub fn beta(&self) -> f64 {
        self.beta.value()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.value()
    }

    /// `(alpha, beta, gamma) / (sinh 2L sinh 2NL)`.
    pub fn normalized(&self) -> (f64, f64, f64) {
        (
            (self.alpha / self.denominator).value(),
            (self.beta / self.denominator).value(),
            (self.gamma / self.denominator).value(),
        )
    }
}

fn denominator(cols: i64, half_log: f64) -> Scaled {
    sinh(2.0 * half_log) * sinh(2.0 * cols as f64 * half_log)
}

/// Coefficients in column-view form:
/// `alpha = cosh((2t+2p+1)L) cosh((2s-2p+1)L)`,
/// `beta = cosh((2t-2q+1)L) cosh((2s-2p+1)L)`,
/// `gamma = cosh((2t-2q+1)L) cosh((2s+2q+1)L)`,
/// with `s, t` the left/right spans.
pub fn coefficient_triple(spec: &HammockSpec, coord: &CoordB, params: &SpectralParams) -> CoefficientTriple {
    let l = params.half_log;
    let (s, t, p, q) = (coord.span_left, coord.span_right, coord.p_offset, coord.q_offset);
    let arg = |k: i64| k as f64 * l;
    let left_in = cosh(arg(2 * s - 2 * p + 1));
    let right_out = cosh(arg(2 * t - 2 * q + 1));
    CoefficientTriple {
        alpha: cosh(arg(2 * t + 2 * p + 1)) * left_in,
        beta: right_out * left_in,
        gamma: right_out * cosh(arg(2 * s + 2 * q + 1)),
        denominator: denominator(spec.cols() as i64, l),
    }
}

/// Coefficients in grid form for columns `x1 <= x2`:
/// `alpha = cosh((2N-2x1+1)L) cosh((2x1-1)L)`,
/// `beta = cosh((2N-2x2+1)L) cosh((2x1-1)L)`,
/// `gamma = cosh((2N-2x2+1)L) cosh((2x2-1)L)`.
pub fn coefficient_triple_grid(spec: &HammockSpec, x1: usize, x2: usize, params: &SpectralParams) -> CoefficientTriple {
    let l = params.half_log;
    let n = spec.cols() as i64;
    let (x1, x2) = (x1 as i64, x2 as i64);
    let arg = |k: i64| k as f64 * l;
    CoefficientTriple {
        alpha: cosh(arg(2 * n - 2 * x1 + 1)) * cosh(arg(2 * x1 - 1)),
        beta: cosh(arg(2 * n - 2 * x2 + 1)) * cosh(arg(2 * x1 - 1)),
        gamma: cosh(arg(2 * n - 2 * x2 + 1)) * cosh(arg(2 * x2 - 1)),
        denominator: denominator(n, l),
    }
}

fn require_interior(spec: &HammockSpec, node: NodeRef, method: &'static str) -> Result<(usize, usize)> {
    match node {
        NodeRef::Interior { .. } => spec.check_interior(node),
        _ => Err(Error::UnsupportedNode(node, method)),
    }
}

fn uniform_mode_term(spec: &HammockSpec, y1: usize, y2: usize) -> f64 {
    let dy = y2 as f64 - y1 as f64;
    spec.s() * dy * dy / (spec.cols() as f64 * (spec.rows() + 1) as f64)
}

/// Resistance between two arbitrary interior nodes.
pub fn resistance_general(spec: &HammockSpec, a: NodeRef, b: NodeRef) -> Result<ResistanceResult> {
    require_interior(spec, a, "closed-form")?;
    require_interior(spec, b, "closed-form")?;
    let coord = to_method_b(spec, a, b)?;
    if a == b {
        return Ok(ResistanceResult::new(0.0, Method::ClosedForm));
    }
    let m = spec.rows();
    let (x1, y1) = (coord.x_in() as usize, coord.y_in as usize);
    let (x2, y2) = (coord.x_out() as usize, coord.y_out as usize);
    let mut terms = Vec::with_capacity(m);
    for mode in 2..=m + 1 {
        let params = spectral_params(spec, mode)?;
        let (al, be, ga) = coefficient_triple_grid(spec, x1, x2, &params).normalized();
        let s1 = mode_sine(spec, mode, y1);
        let s2 = mode_sine(spec, mode, y2);
        terms.push(al * s1 * s1 - 2.0 * be * s1 * s2 + ga * s2 * s2);
    }
    let ohms = 2.0 * spec.r() / (m + 1) as f64 * pairwise_sum(&terms) + uniform_mode_term(spec, y1, y2);
    Ok(ResistanceResult::new(ohms, Method::ClosedForm)
        .with_terms(m)
        .with_swapped(coord.swapped))
}

/// Resistance between `(x, y1)` and `(x, y2)` on one column.
pub fn resistance_same_radial(spec: &HammockSpec, x: usize, y1: usize, y2: usize) -> Result<ResistanceResult> {
    spec.check_interior(NodeRef::interior(x, y1))?;
    spec.check_interior(NodeRef::interior(x, y2))?;
    if y1 == y2 {
        return Ok(ResistanceResult::new(0.0, Method::ClosedFormSameRadial));
    }
    let m = spec.rows();
    let n = spec.cols() as i64;
    let xi = x as i64;
    let mut terms = Vec::with_capacity(m);
    for mode in 2..=m + 1 {
        let l = spectral_params(spec, mode)?.half_log;
        let weight = cosh((2 * xi - 1) as f64 * l) * cosh((2 * n - 2 * xi + 1) as f64 * l) / denominator(n, l);
        let diff = mode_sine(spec, mode, y2) - mode_sine(spec, mode, y1);
        terms.push(diff * diff * weight.value());
    }
    let ohms = 2.0 * spec.r() / (m + 1) as f64 * pairwise_sum(&terms) + uniform_mode_term(spec, y1, y2);
    Ok(ResistanceResult::new(ohms, Method::ClosedFormSameRadial).with_terms(m))
}

/// Resistance between `(x1, y)` and `(x2, y)` placed symmetrically about the
/// middle of the lattice, i.e. `x1 + x2 = N + 1`.
pub fn resistance_same_transverse(spec: &HammockSpec, y: usize, x1: usize, x2: usize) -> Result<ResistanceResult> {
    spec.check_interior(NodeRef::interior(x1, y))?;
    spec.check_interior(NodeRef::interior(x2, y))?;
    let n = spec.cols();
    if x1 + x2 != n + 1 {
        return Err(Error::Precondition(format!(
            "columns {x1} and {x2} are not centred in a lattice of {n} columns \
             (need x1 + x2 = N + 1); use resistance_general"
        )));
    }
    let (lo, hi) = (x1.min(x2), x1.max(x2));
    let d = (hi - lo) as f64;
    let m = spec.rows();
    let mut terms = Vec::with_capacity(m);
    for mode in 2..=m + 1 {
        let l = spectral_params(spec, mode)?.half_log;
        let weight = sinh(d * l) * cosh((n as f64 - d) * l) / (sinh(2.0 * l) * cosh(n as f64 * l));
        let sy = mode_sine(spec, mode, y);
        terms.push(weight.value() * sy * sy);
    }
    let ohms = 4.0 * spec.r() / (m + 1) as f64 * pairwise_sum(&terms);
    Ok(ResistanceResult::new(ohms, Method::ClosedFormSameTransverse)
        .with_terms(m)
        .with_swapped(x1 > x2))
}
