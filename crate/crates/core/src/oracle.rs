//! Dense reference solvers built from the full node Laplacian.
//!
//! These make no use of the lattice structure beyond its edge list, which is
//! what makes them useful as a cross-check. Node order is `O`, the interior
//! nodes by flat index, then `O'` (see [`HammockSpec::node_index`]).

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build_edge_list, HammockSpec, NodeRef};
use crate::result::{Method, ResistanceResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Float,
    Rational,
}

/// Node-count limits for the dense solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseCaps {
    pub float_nodes: usize,
    pub rational_nodes: usize,
}

impl Default for DenseCaps {
    fn default() -> Self {
        DenseCaps {
            float_nodes: 2500,
            rational_nodes: 400,
        }
    }
}

impl DenseCaps {
    fn check(&self, spec: &HammockSpec, arith: Arithmetic, what: &'static str) -> Result<()> {
        let cap = match arith {
            Arithmetic::Float => self.float_nodes,
            Arithmetic::Rational => self.rational_nodes,
        };
        let nodes = spec.node_count();
        if nodes > cap {
            return Err(Error::SizeCap { nodes, cap, what });
        }
        Ok(())
    }
}

/// The `(MN + 2) x (MN + 2)` weighted Laplacian with conductances `1/r`, `1/s`.
pub fn build_full_laplacian(spec: &HammockSpec) -> DMatrix<f64> {
    let size = spec.node_count();
    let mut lap = DMatrix::zeros(size, size);
    for e in build_edge_list(spec) {
        let i = spec.node_index(e.a).expect("edge endpoints are valid");
        let j = spec.node_index(e.b).expect("edge endpoints are valid");
        let g = 1.0 / e.resistance;
        lap[(i, i)] += g;
        lap[(j, j)] += g;
        lap[(i, j)] -= g;
        lap[(j, i)] -= g;
    }
    lap
}

/// Exact Laplacian scaled to integers: returns `(K, c)` with `K = c * L`.
fn integer_laplacian(spec: &HammockSpec) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    let exact =
        |v: f64| BigRational::from_float(v).ok_or_else(|| Error::Domain(format!("{v} has no exact rational form")));
    let g_r = exact(spec.r())?.recip();
    let g_s = exact(spec.s())?.recip();
    let c = g_r.denom().lcm(g_s.denom());
    let k_r = (g_r * BigRational::from_integer(c.clone())).to_integer();
    let k_s = (g_s * BigRational::from_integer(c.clone())).to_integer();
    let size = spec.node_count();
    let mut k = vec![vec![BigInt::zero(); size]; size];
    for e in build_edge_list(spec) {
        let i = spec.node_index(e.a)?;
        let j = spec.node_index(e.b)?;
        let horizontal = matches!(
            (e.a, e.b),
            (NodeRef::Interior { y: ya, .. }, NodeRef::Interior { y: yb, .. }) if ya == yb
        );
        let g = if horizontal { &k_r } else { &k_s };
        k[i][i] += g;
        k[j][j] += g;
        k[i][j] -= g;
        k[j][i] -= g;
    }
    Ok((k, c))
}

/// Solves `A X = B` exactly for integer `A` (nonsingular) by fraction-free
/// elimination followed by rational back-substitution. Returns the columns
/// of `X`.
fn bareiss_solve(mut a: Vec<Vec<BigInt>>, rhs: Vec<Vec<BigInt>>) -> Result<Vec<Vec<BigRational>>> {
    let n = a.len();
    let cols = rhs.first().map_or(0, Vec::len);
    for (row, extra) in a.iter_mut().zip(rhs) {
        row.extend(extra);
    }
    let width = n + cols;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or_else(|| Error::Internal("singular grounded Laplacian".into()))?;
        a.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut out = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(a[i][n + c].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(a[i][j].clone()) * &x[j];
            }
            x[i] = acc / BigRational::from_integer(a[i][i].clone());
        }
        out.push(x);
    }
    Ok(out)
}

fn remove_index(matrix: &[Vec<BigInt>], skip: usize) -> Vec<Vec<BigInt>> {
    matrix
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Two-point resistance from a grounded linear solve. Any node, including
/// `O` and `O'`, may be used.
pub fn resistance_dense(
    spec: &HammockSpec,
    a: NodeRef,
    b: NodeRef,
    arith: Arithmetic,
    caps: DenseCaps,
) -> Result<ResistanceResult> {
    resistance_grounded_at(spec, a, b, b, arith, caps)
}

/// As [`resistance_dense`], grounding `ground` instead of `b`.
pub fn resistance_grounded_at(
    spec: &HammockSpec,
    a: NodeRef,
    b: NodeRef,
    ground: NodeRef,
    arith: Arithmetic,
    caps: DenseCaps,
) -> Result<ResistanceResult> {
    spec.check_node(a)?;
    spec.check_node(b)?;
    spec.check_node(ground)?;
    let method = match arith {
        Arithmetic::Float => Method::OracleFloat,
        Arithmetic::Rational => Method::OracleRational,
    };
    caps.check(spec, arith, "the dense grounded solve")?;
    if a == b {
        let mut out = ResistanceResult::new(0.0, method);
        if arith == Arithmetic::Rational {
            out.exact = Some(BigRational::zero());
        }
        return Ok(out);
    }
    let g = spec.node_index(ground)?;
    let reduced = |i: usize| {
        if i > g {
            Some(i - 1)
        } else if i < g {
            Some(i)
        } else {
            None
        }
    };
    let ia = reduced(spec.node_index(a)?);
    let ib = reduced(spec.node_index(b)?);
    // Inject 1 A at a, withdraw at b: R = v_a - v_b.
    match arith {
        Arithmetic::Float => {
            let lap = build_full_laplacian(spec).remove_row(g).remove_column(g);
            let mut rhs = DVector::zeros(lap.nrows());
            if let Some(i) = ia {
                rhs[i] += 1.0;
            }
            if let Some(i) = ib {
                rhs[i] -= 1.0;
            }
            let chol = lap
                .cholesky()
                .ok_or_else(|| Error::Internal("grounded Laplacian is not positive definite".into()))?;
            let v = chol.solve(&rhs);
            let at = |i: Option<usize>| i.map_or(0.0, |i| v[i]);
            Ok(ResistanceResult::new(at(ia) - at(ib), method))
        }
        Arithmetic::Rational => {
            let (k, c) = integer_laplacian(spec)?;
            let k = remove_index(&k, g);
            let mut rhs = vec![vec![BigInt::zero()]; k.len()];
            if let Some(i) = ia {
                rhs[i][0] += &c;
            }
            if let Some(i) = ib {
                rhs[i][0] -= &c;
            }
            let v = bareiss_solve(k, rhs)?.remove(0);
            let at = |i: Option<usize>| i.map_or_else(BigRational::zero, |i| v[i].clone());
            let exact = at(ia) - at(ib);
            let mut out = ResistanceResult::new(to_f64(&exact), method);
            out.exact = Some(exact);
            Ok(out)
        }
    }
}

/// `R_ab = sum over nonzero eigenpairs of (phi(a) - phi(b))^2 / mu` for the
/// full Laplacian.
pub fn resistance_eigen_full(spec: &HammockSpec, a: NodeRef, b: NodeRef, caps: DenseCaps) -> Result<ResistanceResult> {
    spec.check_node(a)?;
    spec.check_node(b)?;
    caps.check(spec, Arithmetic::Float, "the full eigen-expansion")?;
    let ia = spec.node_index(a)?;
    let ib = spec.node_index(b)?;
    let eig = build_full_laplacian(spec).symmetric_eigen();
    let cutoff = 1e-10 * eig.eigenvalues.amax();
    let mut terms = Vec::new();
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu > cutoff {
            let d = eig.eigenvectors[(ia, k)] - eig.eigenvectors[(ib, k)];
            terms.push(d * d / mu);
        }
    }
    let ohms = crate::numeric::pairwise_sum(&terms);
    Ok(ResistanceResult::new(ohms, Method::OracleEigen).with_terms(terms.len()))
}

/// Every pairwise resistance of one lattice, held exactly.
///
/// Built from the inverse of the Laplacian with `O'` grounded, so a single
/// factorisation serves all pairs: `R_ab = G_aa + G_bb - 2 G_ab`.
#[derive(Debug, Clone)]
pub struct ExactTable {
    spec: HammockSpec,
    /// Grounded inverse over node indices `0..=MN` (`O'` excluded).
    inverse: Vec<Vec<BigRational>>,
}

impl ExactTable {
    pub fn new(spec: &HammockSpec, caps: DenseCaps) -> Result<Self> {
        caps.check(spec, Arithmetic::Rational, "the exact resistance table")?;
        let (k, c) = integer_laplacian(spec)?;
        let ground = spec.node_count() - 1;
        let k = remove_index(&k, ground);
        let n = k.len();
        let rhs = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { c.clone() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let inverse = bareiss_solve(k, rhs)?;
        Ok(ExactTable { spec: *spec, inverse })
    }

    fn entry(&self, i: usize, j: usize) -> BigRational {
        if i == self.inverse.len() || j == self.inverse.len() {
            BigRational::zero()
        } else {
            self.inverse[j][i].clone()
        }
    }

    pub fn resistance(&self, a: NodeRef, b: NodeRef) -> Result<BigRational> {
        self.spec.check_node(a)?;
        self.spec.check_node(b)?;
        let i = self.spec.node_index(a)?;
        let j = self.spec.node_index(b)?;
        Ok(self.entry(i, i) + self.entry(j, j) - self.entry(i, j) * BigRational::from_integer(2.into()))
    }

    /// Sum of resistances over all unordered node pairs, terminals included.
    pub fn kirchhoff_index(&self) -> BigRational {
        let n = self.spec.node_count();
        let mut total = BigRational::zero();
        for i in 0..n {
            for j in i + 1..n {
                total += self.entry(i, i) + self.entry(j, j) - self.entry(i, j) * BigRational::from_integer(2.into());
            }
        }
        total
    }
}

/// Kirchhoff index (sum of all pairwise resistances, terminals included).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KirchhoffIndex {
    pub value: f64,
    #[serde(serialize_with = "serialize_exact", skip_serializing_if = "Option::is_none")]
    pub exact: Option<BigRational>,
}

fn serialize_exact<S: serde::Serializer>(value: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(q) => s.collect_str(q),
        None => s.serialize_none(),
    }
}

pub fn kirchhoff_index(spec: &HammockSpec, arith: Arithmetic, caps: DenseCaps) -> Result<KirchhoffIndex> {
    match arith {
        Arithmetic::Rational => {
            let exact = ExactTable::new(spec, caps)?.kirchhoff_index();
            Ok(KirchhoffIndex {
                value: to_f64(&exact),
                exact: Some(exact),
            })
        }
        Arithmetic::Float => {
            caps.check(spec, Arithmetic::Float, "the Kirchhoff index")?;
            let n = spec.node_count();
            let g = build_full_laplacian(spec)
                .remove_row(n - 1)
                .remove_column(n - 1)
                .cholesky()
                .ok_or_else(|| Error::Internal("grounded Laplacian is not positive definite".into()))?
                .inverse();
            // sum_{i<j} (G_ii + G_jj - 2 G_ij) = n tr(G) - 1^T G 1, grounded node contributes zero
            let value = n as f64 * g.trace() - g.sum();
            Ok(KirchhoffIndex { value, exact: None })
        }
    }
}
