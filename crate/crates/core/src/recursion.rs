//! Resistance and current distribution from the column-current recurrence.
//!
//! The hammock is treated as a rectangle of `N` columns and `M + 2` rows in
//! which rows `0` and `M + 1` have zero resistance (the terminals `O`, `O'`).
//! `I_k(i)` is the upward current through the `i`-th vertical resistor
//! (`i = 1..=M+1`) of column `k`. Ohm's and Kirchhoff's laws tie three adjacent
//! columns together:
//!
//! ```text
//! I_{k+1} = [(2h+2) U - h W] I_k - I_{k-1} + (injection terms at k = z)
//! ```
//!
//! The cosine transform `X_k = Psi I_k` diagonalises `W`, leaving one scalar
//! three-term recurrence `X_{k+1}(i) = u_i X_k(i) - X_{k-1}(i)` per mode, solved
//! separately left of, between, and right of the two injection columns.

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{cosh, sinh, two_cosh, two_sinh};
use crate::lattice::{to_method_b, CoordB, HammockSpec, NodeRef};
use crate::numeric::pairwise_sum;
use crate::result::{Method, ResistanceResult};

/// `chi_i = (i - 1) pi / (2M + 2)`.
pub fn chi(rows: usize, mode: usize) -> f64 {
    (mode - 1) as f64 * PI / (2 * rows + 2) as f64
}

/// The `(M+1) x (M+1)` coupling matrix: ones off the diagonal band, plus ones
/// at the two diagonal corners.
pub fn build_w_matrix(rows: usize) -> DMatrix<f64> {
    let size = rows + 1;
    DMatrix::from_fn(size, size, |i, j| {
        if i.abs_diff(j) == 1 || (i == j && (i == 0 || i == size - 1)) {
            1.0
        } else {
            0.0
        }
    })
}

/// Eigenvalue `w_i = 2 cos(2 chi_i)` of [`build_w_matrix`].
pub fn w_eigenvalue(rows: usize, mode: usize) -> f64 {
    2.0 * (2.0 * chi(rows, mode)).cos()
}

/// `u_i = 2h + 2 - h w_i`.
pub fn recurrence_coefficient(spec: &HammockSpec, mode: usize) -> f64 {
    let h = spec.h();
    2.0 * h + 2.0 - h * w_eigenvalue(spec.rows(), mode)
}

/// The cosine transform and its explicit inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPair {
    /// Row `i` is the eigenvector `psi_i(j) = cos((2j - 1) chi_i)`.
    pub psi: DMatrix<f64>,
    pub psi_inv: DMatrix<f64>,
}

pub fn transform_pair(rows: usize) -> TransformPair {
    let size = rows + 1;
    let psi = DMatrix::from_fn(size, size, |i, j| ((2 * j + 1) as f64 * chi(rows, i + 1)).cos());
    let psi_inv = DMatrix::from_fn(size, size, |i, j| {
        if j == 0 {
            1.0 / size as f64
        } else {
            2.0 / size as f64 * ((2 * i + 1) as f64 * chi(rows, j + 1)).cos()
        }
    });
    TransformPair { psi, psi_inv }
}

/// `s_i(y)` for `i = 1..=M+1`: the sum of column `i` of the inverse transform
/// over rows `y+1..=M+1`.
pub fn mode_weights(rows: usize, y: usize) -> Vec<f64> {
    let size = (rows + 1) as f64;
    let mut out = Vec::with_capacity(rows + 1);
    out.push((size - y as f64) / size);
    for mode in 2..=rows + 1 {
        let c = chi(rows, mode);
        out.push(-(2.0 * y as f64 * c).sin() / (size * c.sin()));
    }
    out
}

/// `zeta_i(y) = psi_i(y+1) - psi_i(y) = -2 sin(2 y chi_i) sin(chi_i)`.
pub fn zeta(rows: usize, mode: usize, y: usize) -> f64 {
    let c = chi(rows, mode);
    -2.0 * (2.0 * y as f64 * c).sin() * c.sin()
}

/// `L_i` with `lambda_i = e^{2 L_i}`, from `sinh(L_i) = sqrt(h) sin(chi_i)`.
fn half_log(spec: &HammockSpec, mode: usize) -> f64 {
    (spec.h().sqrt() * chi(spec.rows(), mode).sin()).asinh()
}

/// Transformed currents at the two injection columns.
///
/// Convention: the current `j` enters the lattice at the output node (column
/// `q`, height `y_out`) and leaves at the input node (column `-p`, height
/// `y_in`). Index `i - 1` holds mode `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub j: f64,
    /// `X_q(i)`.
    pub at_output: Vec<f64>,
    /// `X_{-p}(i)`.
    pub at_input: Vec<f64>,
}

pub fn solve_modes(spec: &HammockSpec, coord: &CoordB, j: f64) -> Result<ModeSolution> {
    check_coord(spec, coord)?;
    if !j.is_finite() {
        return Err(Error::Domain(format!("injected current must be finite (got {j})")));
    }
    let m = spec.rows();
    let h = spec.h();
    let (s, t, p, q) = (coord.span_left, coord.span_right, coord.p_offset, coord.q_offset);
    let (y1, y2) = (coord.y_in as usize, coord.y_out as usize);
    let uniform = -j * (y2 as f64 - y1 as f64) / spec.cols() as f64;
    let mut at_output = vec![uniform];
    let mut at_input = vec![uniform];
    for mode in 2..=m + 1 {
        let l = half_log(spec, mode);
        // lambda^(a + 1/2) + lambda^-(a + 1/2)
        let pow_sum = |a: i64| two_cosh((2 * a + 1) as f64 * l);
        let alpha = pow_sum(t - q) * pow_sum(s + q);
        let beta = pow_sum(t - q) * pow_sum(s - p);
        let gamma = pow_sum(t + p) * pow_sum(s - p);
        // (lambda - 1/lambda) (lambda^N - lambda^-N)
        let denom = two_sinh(2.0 * l) * two_sinh(2.0 * spec.cols() as f64 * l);
        if denom.mantissa == 0.0 {
            return Err(Error::Internal(format!("vanishing denominator for mode {mode}")));
        }
        let z1 = zeta(m, mode, y1);
        let z2 = zeta(m, mode, y2);
        at_output.push(h * j * ((alpha / denom).value() * z2 - (beta / denom).value() * z1));
        at_input.push(-h * j * ((gamma / denom).value() * z1 - (beta / denom).value() * z2));
    }
    Ok(ModeSolution { j, at_output, at_input })
}

fn check_coord(spec: &HammockSpec, coord: &CoordB) -> Result<()> {
    let ok = coord.cols() == spec.cols() as i64
        && coord.span_left >= 0
        && coord.span_right >= 0
        && -coord.span_left <= -coord.p_offset
        && -coord.p_offset <= coord.q_offset
        && coord.q_offset <= coord.span_right
        && (1..=spec.rows() as i64).contains(&coord.y_in)
        && (1..=spec.rows() as i64).contains(&coord.y_out);
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "column coordinates {coord:?} do not fit the lattice"
        )))
    }
}

/// Resistance from the transformed currents at the two injection columns.
pub fn resistance_rt(spec: &HammockSpec, a: NodeRef, b: NodeRef) -> Result<ResistanceResult> {
    for node in [a, b] {
        if !node.is_interior() {
            return Err(Error::UnsupportedNode(node, "recursion-transform"));
        }
    }
    let coord = to_method_b(spec, a, b)?;
    if a == b {
        return Ok(ResistanceResult::new(0.0, Method::RecursionTransform));
    }
    let sol = solve_modes(spec, &coord, 1.0)?;
    let w_out = mode_weights(spec.rows(), coord.y_out as usize);
    let w_in = mode_weights(spec.rows(), coord.y_in as usize);
    let terms: Vec<f64> = (0..=spec.rows())
        .map(|k| sol.at_output[k] * w_out[k] - sol.at_input[k] * w_in[k])
        .collect();
    let ohms = spec.s() / sol.j * pairwise_sum(&terms);
    Ok(ResistanceResult::new(ohms, Method::RecursionTransform)
        .with_terms(spec.rows() + 1)
        .with_swapped(coord.swapped))
}

/// Coefficients of one mode `i >= 2` in the three column regions:
///
/// ```text
/// X_k = S lambda^k + S' lambda^-k   for -span_left <= k <= -p
/// X_k = A lambda^k + A' lambda^-k   for -p <= k <= q
/// X_k = B lambda^k + B' lambda^-k   for q <= k <= span_right
/// ```
///
/// Same injection convention as [`solve_modes`]. The coefficients are read off
/// the reflecting-boundary Green function, which avoids the cancellation of a
/// naive back-substitution. Powers of `lambda` are formed directly, so this is
/// meant for moderate lattices (`N L_i` below a few hundred).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSolution {
    pub mode: usize,
    pub lambda: f64,
    pub a: f64,
    pub a_bar: f64,
    pub b: f64,
    pub b_bar: f64,
    pub s: f64,
    pub s_bar: f64,
    /// `lambda^N - lambda^-N`.
    pub d: f64,
    p: i64,
    q: i64,
}

impl RegionSolution {
    pub fn value(&self, k: i64) -> f64 {
        let (c, c_bar) = if k <= -self.p {
            (self.s, self.s_bar)
        } else if k >= self.q {
            (self.b, self.b_bar)
        } else {
            (self.a, self.a_bar)
        };
        c * self.lambda.powi(k as i32) + c_bar * self.lambda.powi(-k as i32)
    }

    /// Evaluates one region's formula at `k` regardless of where `k` lies.
    pub fn region_value(&self, region: Region, k: i64) -> f64 {
        let (c, c_bar) = match region {
            Region::Left => (self.s, self.s_bar),
            Region::Middle => (self.a, self.a_bar),
            Region::Right => (self.b, self.b_bar),
        };
        c * self.lambda.powi(k as i32) + c_bar * self.lambda.powi(-k as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Left,
    Middle,
    Right,
}

pub fn region_solution(spec: &HammockSpec, coord: &CoordB, j: f64, mode: usize) -> Result<RegionSolution> {
    check_coord(spec, coord)?;
    let m = spec.rows();
    if mode < 2 || mode > m + 1 {
        return Err(Error::Domain(format!("mode {mode} not in 2..={}", m + 1)));
    }
    let h = spec.h();
    let l = half_log(spec, mode);
    let lambda = (2.0 * l).exp();
    // lambda^(m/2)
    let half_pow = |m: i64| (m as f64 * l).exp();
    let (s, t, p, q) = (coord.span_left, coord.span_right, coord.p_offset, coord.q_offset);
    let n = spec.cols() as i64;
    let d = half_pow(2 * n) - half_pow(-2 * n);
    let k = 4.0 * h / ((lambda - 1.0 / lambda) * d);
    if !(k.is_finite() && half_pow(2 * n + 1).is_finite() && k != 0.0) {
        return Err(Error::Domain(format!(
            "mode {mode}: lambda^N out of floating-point range; use solve_modes"
        )));
    }
    let phi_left = |c: i64| 0.5 * (half_pow(2 * (c + s) + 1) + half_pow(-2 * (c + s) - 1));
    let phi_right = |c: i64| 0.5 * (half_pow(2 * (t - c) + 1) + half_pow(-2 * (t - c) - 1));
    let e_q = j * zeta(m, mode, coord.y_out as usize);
    let e_p = -j * zeta(m, mode, coord.y_in as usize);
    let (ls, lt) = (half_pow(2 * s + 1), half_pow(2 * t + 1));
    let mid_q = e_q * phi_right(q);
    let mid_p = e_p * phi_left(-p);
    let right = e_q * phi_left(q) + e_p * phi_left(-p);
    let left = e_q * phi_right(q) + e_p * phi_right(-p);
    Ok(RegionSolution {
        mode,
        lambda,
        a: 0.5 * k * (mid_q * ls + mid_p / lt),
        a_bar: 0.5 * k * (mid_q / ls + mid_p * lt),
        b: 0.5 * k * right / lt,
        b_bar: 0.5 * k * right * lt,
        s: 0.5 * k * left * ls,
        s_bar: 0.5 * k * left / ls,
        d,
        p,
        q,
    })
}

/// A point injection: `current` enters at column label `column`, height `y`.
#[derive(Debug, Clone, Copy)]
struct Injection {
    column: i64,
    y: usize,
    current: f64,
}

/// `X_k(i)` for all modes at column label `k`, for injections summing to zero.
///
/// Each mode uses the reflecting-boundary Green function
/// `cosh((2(k_< + s) + 1) L) cosh((2(t - k_>) + 1) L) / (sinh 2L sinh 2NL)`.
fn transformed_column(spec: &HammockSpec, coord: &CoordB, sources: &[Injection], k: i64) -> Vec<f64> {
    let m = spec.rows();
    let h = spec.h();
    let n = spec.cols() as f64;
    let (s, t) = (coord.span_left, coord.span_right);
    let mut out = Vec::with_capacity(m + 1);
    out.push(-sources.iter().map(|z| z.current * z.y as f64).sum::<f64>() / n);
    for mode in 2..=m + 1 {
        let l = half_log(spec, mode);
        let denom = sinh(2.0 * l) * sinh(2.0 * n * l);
        let total: f64 = sources
            .iter()
            .map(|z| {
                let (lo, hi) = (k.min(z.column), k.max(z.column));
                let green = cosh((2 * (lo + s) + 1) as f64 * l) * cosh((2 * (t - hi) + 1) as f64 * l) / denom;
                z.current * zeta(m, mode, z.y) * green.value()
            })
            .sum();
        out.push(h * total);
    }
    out
}

/// Vertical currents of the whole lattice for one source/sink pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurrentField {
    pub spec: HammockSpec,
    /// Current injected at `source` and withdrawn at `sink`, in amperes.
    pub j: f64,
    pub source: NodeRef,
    pub sink: NodeRef,
    /// `columns[x - 1][i - 1]` is the upward current through the `i`-th
    /// vertical resistor (`i = 1..=M+1`) of grid column `x`.
    pub columns: Vec<Vec<f64>>,
}

/// Reconstructs every vertical current by inverting the transform column by
/// column. `j` enters at `a` and leaves at `b`.
pub fn reconstruct_currents(spec: &HammockSpec, a: NodeRef, b: NodeRef, j: f64) -> Result<CurrentField> {
    for node in [a, b] {
        if !node.is_interior() {
            return Err(Error::UnsupportedNode(node, "recursion-transform"));
        }
    }
    if !j.is_finite() {
        return Err(Error::Domain(format!("injected current must be finite (got {j})")));
    }
    let coord = to_method_b(spec, a, b)?;
    let (j_in, j_out) = if coord.swapped { (-j, j) } else { (j, -j) };
    let sources = [
        Injection {
            column: -coord.p_offset,
            y: coord.y_in as usize,
            current: j_in,
        },
        Injection {
            column: coord.q_offset,
            y: coord.y_out as usize,
            current: j_out,
        },
    ];
    let inverse = transform_pair(spec.rows()).psi_inv;
    let columns = (1..=spec.cols() as i64)
        .map(|x| {
            let xk = nalgebra::DVector::from_vec(transformed_column(spec, &coord, &sources, coord.column_label(x)));
            (&inverse * xk).iter().copied().collect()
        })
        .collect();
    Ok(CurrentField {
        spec: *spec,
        j,
        source: a,
        sink: b,
        columns,
    })
}

/// Worst violations of the circuit laws in a [`CurrentField`], in amperes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KirchhoffAudit {
    /// Largest net current at any node, terminals included.
    pub max_node_imbalance: f64,
    /// Largest disagreement between columns of the total vertical current
    /// (each column spans the same `O`-to-`O'` voltage).
    pub max_rail_mismatch: f64,
}

impl CurrentField {
    pub fn rows(&self) -> usize {
        self.spec.rows()
    }

    pub fn cols(&self) -> usize {
        self.spec.cols()
    }

    /// Upward current through vertical resistor `i` (1..=M+1) of column `x` (1..=N).
    pub fn current(&self, x: usize, i: usize) -> f64 {
        self.columns[x - 1][i - 1]
    }

    fn injection(&self, x: usize, y: usize) -> f64 {
        let node = NodeRef::interior(x, y);
        let mut total = 0.0;
        if node == self.source {
            total += self.j;
        }
        if node == self.sink {
            total -= self.j;
        }
        total
    }

    /// Potential of `(x, y)` with `O` grounded, following column `x` upward.
    fn potential(&self, x: usize, y: usize) -> f64 {
        -self.spec.s() * self.columns[x - 1][..y].iter().sum::<f64>()
    }

    /// Horizontal currents `H[x-1][y-1]` from `(x, y)` to `(x+1, y)`, obtained
    /// by current conservation sweeping from the left edge.
    pub fn horizontal_currents(&self) -> Vec<Vec<f64>> {
        let (m, n) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(n.saturating_sub(1));
        let mut carry = vec![0.0; m];
        for x in 1..n {
            for y in 1..=m {
                carry[y - 1] += self.current(x, y) - self.current(x, y + 1) + self.injection(x, y);
            }
            out.push(carry.clone());
        }
        out
    }

    pub fn kirchhoff_audit(&self) -> KirchhoffAudit {
        let (m, n) = (self.rows(), self.cols());
        let r = self.spec.r();
        let ohm = |x: usize, y: usize| (self.potential(x, y) - self.potential(x + 1, y)) / r;
        let mut worst: f64 = 0.0;
        for x in 1..=n {
            for y in 1..=m {
                let left = if x > 1 { ohm(x - 1, y) } else { 0.0 };
                let right = if x < n { ohm(x, y) } else { 0.0 };
                let net = self.current(x, y) - self.current(x, y + 1) + left - right + self.injection(x, y);
                worst = worst.max(net.abs());
            }
        }
        let bottom: f64 = (1..=n).map(|x| self.current(x, 1)).sum();
        let top: f64 = (1..=n).map(|x| self.current(x, m + 1)).sum();
        worst = worst.max(bottom.abs()).max(top.abs());

        let totals: Vec<f64> = self.columns.iter().map(|c| c.iter().sum()).collect();
        let mismatch = totals.iter().map(|t| (t - totals[0]).abs()).fold(0.0, f64::max);
        KirchhoffAudit {
            max_node_imbalance: worst,
            max_rail_mismatch: mismatch,
        }
    }

    /// Largest residual of the three-column current relation over all
    /// columns and rows. The two edge columns are closed with a ghost column
    /// equal to themselves, which turns the relation into the edge-loop
    /// boundary condition.
    pub fn recurrence_residual(&self) -> f64 {
        let (m, n) = (self.rows(), self.cols());
        let h = self.spec.h();
        let hr = |i: usize| if (1..=m).contains(&i) { h } else { 0.0 };
        let col = |x: i64| -> &Vec<f64> { &self.columns[(x.clamp(1, n as i64) - 1) as usize] };
        let mut worst: f64 = 0.0;
        for x in 1..=n as i64 {
            let (prev, cur, next) = (col(x - 1), col(x), col(x + 1));
            for i in 1..=m + 1 {
                let below = if i > 1 { cur[i - 2] } else { 0.0 };
                let above = if i <= m { cur[i] } else { 0.0 };
                let mut rhs = -hr(i - 1) * below + (hr(i) + hr(i - 1) + 2.0) * cur[i - 1] - hr(i) * above - prev[i - 1];
                for (node, jz) in [(self.source, self.j), (self.sink, -self.j)] {
                    if let NodeRef::Interior { x: zx, y: zy } = node {
                        if zx as i64 == x {
                            let d_here = f64::from(u8::from(i == zy));
                            let d_below = f64::from(u8::from(i == zy + 1));
                            rhs += jz * (hr(i) * d_here - hr(i - 1) * d_below);
                        }
                    }
                }
                worst = worst.max((next[i - 1] - rhs).abs());
            }
        }
        worst
    }

    /// Every current multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> CurrentField {
        CurrentField {
            j: self.j * factor,
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(|v| v * factor).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// Writes `k,i,current` rows with `k` the 1-based grid column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,i,current")?;
        for (x, column) in self.columns.iter().enumerate() {
            for (i, value) in column.iter().enumerate() {
                writeln!(out, "{},{},{}", x + 1, i + 1, value)?;
            }
        }
        Ok(())
    }
}

/// Resistance between `a` and `b` read off a field twice: up column `a` to
/// the `O'` rail and back down column `b`, and along row `y_a` to column `x_b`
/// then along that column. The horizontal currents of the second path come
/// from current conservation, so agreement checks the loop law.
pub fn potential_path_check(field: &CurrentField, a: NodeRef, b: NodeRef) -> Result<(f64, f64)> {
    let (xa, ya) = field.spec.check_interior(a)?;
    let (xb, yb) = field.spec.check_interior(b)?;
    if field.j == 0.0 {
        return Err(Error::Precondition("field carries no current".into()));
    }
    let (r, s) = (field.spec.r(), field.spec.s());
    let above = |x: usize, y: usize| field.columns[x - 1][y..].iter().sum::<f64>();
    let rail = s * (above(xa, ya) - above(xb, yb));

    let horizontal = field.horizontal_currents();
    let mut drop = 0.0;
    let mut x = xa;
    while x < xb {
        drop += r * horizontal[x - 1][ya - 1];
        x += 1;
    }
    while x > xb {
        drop -= r * horizontal[x - 2][ya - 1];
        x -= 1;
    }
    let mut y = ya;
    while y < yb {
        drop += s * field.current(xb, y + 1);
        y += 1;
    }
    while y > yb {
        drop -= s * field.current(xb, y);
        y -= 1;
    }
    Ok((rail / field.j, drop / field.j))
}
