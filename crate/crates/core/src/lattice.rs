//! Problem instances, node addressing and the hammock topology.
//!
//! Two coordinate systems are in use. The grid view labels interior nodes
//! `(x, y)` with `x = 1..=N` counted from the left and `y = 1..=M` counted
//! upwards from the row attached to `O`. The column view ([`CoordB`]) labels
//! columns `k = -span_left..=span_right` around an origin column placed midway
//! between the two nodes of interest.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions and resistor strengths of one hammock network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct HammockSpec {
    rows: usize,
    cols: usize,
    r: f64,
    s: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    r: f64,
    s: f64,
}

impl TryFrom<RawSpec> for HammockSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        HammockSpec::new(raw.m, raw.n, raw.r, raw.s)
    }
}

impl From<HammockSpec> for RawSpec {
    fn from(spec: HammockSpec) -> Self {
        RawSpec {
            m: spec.rows,
            n: spec.cols,
            r: spec.r,
            s: spec.s,
        }
    }
}

impl HammockSpec {
    /// `rows` is `M`, `cols` is `N`, `r` the horizontal and `s` the vertical
    /// (and terminal-link) resistance in ohms.
    pub fn new(rows: usize, cols: usize, r: f64, s: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSpec(format!(
                "M and N must be at least 1 (got M={rows}, N={cols})"
            )));
        }
        for (name, v) in [("r", r), ("s", s)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be finite and positive (got {v})"
                )));
            }
        }
        let h = r / s;
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "ratio r/s = {h} is not finite and positive"
            )));
        }
        Ok(HammockSpec { rows, cols, r, s })
    }

    /// Number of interior rows `M`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns `N`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Horizontal-to-vertical resistance ratio `r / s`.
    pub fn h(&self) -> f64 {
        self.r / self.s
    }

    pub fn interior_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Interior nodes plus `O` and `O'`.
    pub fn node_count(&self) -> usize {
        self.interior_count() + 2
    }

    /// Same lattice with both resistances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        HammockSpec::new(self.rows, self.cols, self.r * factor, self.s * factor)
    }

    /// Returns `(x, y)` for an in-bounds interior node.
    pub fn check_interior(&self, node: NodeRef) -> Result<(usize, usize)> {
        match node {
            NodeRef::Interior { x, y } => {
                if x == 0 || x > self.cols {
                    return Err(self.out_of_bounds(node, format!("x={x} not in 1..={}", self.cols)));
                }
                if y == 0 || y > self.rows {
                    return Err(self.out_of_bounds(node, format!("y={y} not in 1..={}", self.rows)));
                }
                Ok((x, y))
            }
            _ => Err(Error::TerminalNode(node)),
        }
    }

    /// Validates any node reference (terminals are always valid).
    pub fn check_node(&self, node: NodeRef) -> Result<()> {
        match node {
            NodeRef::Interior { .. } => self.check_interior(node).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Position in the full node ordering: `O` first, interior nodes by flat
    /// index, `O'` last.
    pub fn node_index(&self, node: NodeRef) -> Result<usize> {
        match node {
            NodeRef::TerminalO => Ok(0),
            NodeRef::TerminalOPrime => Ok(self.interior_count() + 1),
            NodeRef::Interior { .. } => Ok(flat_index(self, node)?.get()),
        }
    }

    /// Inverse of [`HammockSpec::node_index`].
    pub fn node_at(&self, index: usize) -> Result<NodeRef> {
        let last = self.interior_count() + 1;
        match index {
            0 => Ok(NodeRef::TerminalO),
            i if i == last => Ok(NodeRef::TerminalOPrime),
            i if i < last => {
                let x = (i - 1) % self.cols + 1;
                let y = (i - 1) / self.cols + 1;
                Ok(NodeRef::Interior { x, y })
            }
            _ => Err(Error::Domain(format!("node index {index} exceeds {last}"))),
        }
    }

    /// All interior nodes in flat-index order.
    pub fn interior_nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        (1..=self.rows).flat_map(move |y| (1..=self.cols).map(move |x| NodeRef::Interior { x, y }))
    }

    /// All nodes in full-Laplacian order.
    pub fn all_nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        std::iter::once(NodeRef::TerminalO)
            .chain(self.interior_nodes())
            .chain(std::iter::once(NodeRef::TerminalOPrime))
    }

    fn out_of_bounds(&self, node: NodeRef, detail: String) -> Error {
        Error::OutOfBounds {
            node,
            rows: self.rows,
            cols: self.cols,
            detail,
        }
    }
}

/// A node of the hammock: an interior grid node or one of the two terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    /// Column `x` (1..=N), row `y` (1..=M).
    Interior { x: usize, y: usize },
    /// Terminal attached to the bottom row.
    TerminalO,
    /// Terminal attached to the top row.
    TerminalOPrime,
}

impl NodeRef {
    pub fn interior(x: usize, y: usize) -> Self {
        NodeRef::Interior { x, y }
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, NodeRef::Interior { .. })
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Interior { x, y } => write!(f, "{x},{y}"),
            NodeRef::TerminalO => f.write_str("O"),
            NodeRef::TerminalOPrime => f.write_str("OP"),
        }
    }
}

impl FromStr for NodeRef {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "O" | "o" => return Ok(NodeRef::TerminalO),
            "OP" | "op" | "O'" => return Ok(NodeRef::TerminalOPrime),
            _ => {}
        }
        let (xs, ys) = t.split_once(',').ok_or_else(|| Error::NodeSyntax(text.to_string()))?;
        let x = xs.trim().parse().map_err(|_| Error::NodeSyntax(text.to_string()))?;
        let y = ys.trim().parse().map_err(|_| Error::NodeSyntax(text.to_string()))?;
        Ok(NodeRef::Interior { x, y })
    }
}

impl Serialize for NodeRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeRef {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Row-major position `x + (y - 1) N` of an interior node, in `1..=M N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatIndex(usize);

impl FlatIndex {
    pub fn get(self) -> usize {
        self.0
    }
}

pub fn flat_index(spec: &HammockSpec, node: NodeRef) -> Result<FlatIndex> {
    let (x, y) = spec.check_interior(node)?;
    Ok(FlatIndex(x + (y - 1) * spec.cols()))
}

/// Column-view coordinates of an ordered pair of interior nodes.
///
/// Columns run from `-span_left` to `span_right`; the input node sits at
/// column `-p_offset`, height `y_in`, and the output node at column
/// `q_offset`, height `y_out`. The input column is never to the right of the
/// output column; `swapped` records whether the caller's pair was reversed to
/// achieve that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordB {
    pub span_left: i64,
    pub span_right: i64,
    pub p_offset: i64,
    pub q_offset: i64,
    pub y_in: i64,
    pub y_out: i64,
    pub swapped: bool,
}

impl CoordB {
    pub fn cols(&self) -> i64 {
        self.span_left + self.span_right + 1
    }

    /// Grid column of the input node.
    pub fn x_in(&self) -> i64 {
        self.span_left - self.p_offset + 1
    }

    /// Grid column of the output node.
    pub fn x_out(&self) -> i64 {
        self.span_left + self.q_offset + 1
    }

    /// Grid column `x` of column label `k`.
    pub fn grid_column(&self, k: i64) -> i64 {
        k + self.span_left + 1
    }

    /// Column label `k` of grid column `x`.
    pub fn column_label(&self, x: i64) -> i64 {
        x - self.span_left - 1
    }

    /// The input and output nodes in grid coordinates, in normalized order.
    pub fn grid_pair(&self) -> (NodeRef, NodeRef) {
        (
            NodeRef::interior(self.x_in() as usize, self.y_in as usize),
            NodeRef::interior(self.x_out() as usize, self.y_out as usize),
        )
    }

    /// The pair in the caller's original order.
    pub fn original_pair(&self) -> (NodeRef, NodeRef) {
        let (a, b) = self.grid_pair();
        if self.swapped {
            (b, a)
        } else {
            (a, b)
        }
    }
}

/// Maps two interior nodes to column-view coordinates.
///
/// The origin column is the (lower) midpoint column of the pair, so
/// `p_offset == q_offset` whenever `x_b - x_a` is even.
pub fn to_method_b(spec: &HammockSpec, a: NodeRef, b: NodeRef) -> Result<CoordB> {
    let (xa, ya) = spec.check_interior(a)?;
    let (xb, yb) = spec.check_interior(b)?;
    // ties on the column are broken by height so that (a, b) and (b, a) evaluate identically
    let swapped = (xa, ya) > (xb, yb);
    let ((x1, y1), (x2, y2)) = if swapped {
        ((xb, yb), (xa, ya))
    } else {
        ((xa, ya), (xb, yb))
    };
    let (x1, x2, n) = (x1 as i64, x2 as i64, spec.cols() as i64);
    let origin = (x1 + x2) / 2;
    let span_left = origin - 1;
    Ok(CoordB {
        span_left,
        span_right: n - span_left - 1,
        p_offset: origin - x1,
        q_offset: x2 - origin,
        y_in: y1 as i64,
        y_out: y2 as i64,
        swapped,
    })
}

/// One resistor of the network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeRef,
    pub b: NodeRef,
    pub resistance: f64,
}

/// Every resistor of the hammock: horizontal `r` edges, vertical `s` edges,
/// then the `s` links to `O` and `O'`.
pub fn build_edge_list(spec: &HammockSpec) -> Vec<Edge> {
    let (m, n) = (spec.rows(), spec.cols());
    let mut edges = Vec::with_capacity(m * (n - 1) + n * (m - 1) + 2 * n);
    for y in 1..=m {
        for x in 1..n {
            edges.push(Edge {
                a: NodeRef::interior(x, y),
                b: NodeRef::interior(x + 1, y),
                resistance: spec.r(),
            });
        }
    }
    for y in 1..m {
        for x in 1..=n {
            edges.push(Edge {
                a: NodeRef::interior(x, y),
                b: NodeRef::interior(x, y + 1),
                resistance: spec.s(),
            });
        }
    }
    for x in 1..=n {
        edges.push(Edge {
            a: NodeRef::TerminalO,
            b: NodeRef::interior(x, 1),
            resistance: spec.s(),
        });
    }
    for x in 1..=n {
        edges.push(Edge {
            a: NodeRef::TerminalOPrime,
            b: NodeRef::interior(x, m),
            resistance: spec.s(),
        });
    }
    edges
}

/// Writes `node_a,node_b,resistance` rows. Interior nodes are written as the
/// quoted field `"x,y"`, terminals as `O` and `OP`.
pub fn write_edge_csv<W: Write>(edges: &[Edge], mut out: W) -> io::Result<()> {
    fn field(node: NodeRef) -> String {
        match node {
            NodeRef::Interior { .. } => format!("\"{node}\""),
            _ => node.to_string(),
        }
    }
    writeln!(out, "node_a,node_b,resistance")?;
    for e in edges {
        writeln!(out, "{},{},{}", field(e.a), field(e.b), e.resistance)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashSet, VecDeque};

    fn spec(m: usize, n: usize) -> HammockSpec {
        HammockSpec::new(m, n, 1.0, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(HammockSpec::new(0, 3, 1.0, 1.0).is_err());
        assert!(HammockSpec::new(3, 0, 1.0, 1.0).is_err());
        assert!(HammockSpec::new(3, 3, 0.0, 1.0).is_err());
        assert!(HammockSpec::new(3, 3, 1.0, f64::INFINITY).is_err());
        assert!(HammockSpec::new(3, 3, f64::NAN, 1.0).is_err());
        assert!(HammockSpec::new(3, 3, 1e-300, 1e300).is_err());
    }

    #[test]
    fn spec_json_schema() {
        let s: HammockSpec = serde_json::from_str(r#"{"M": 3, "N": 4, "r": 2.0, "s": 0.5}"#).unwrap();
        assert_eq!((s.rows(), s.cols(), s.r(), s.s()), (3, 4, 2.0, 0.5));
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"M":3,"N":4,"r":2.0,"s":0.5}"#);
        assert!(serde_json::from_str::<HammockSpec>(r#"{"M": 0, "N": 4, "r": 1, "s": 1}"#).is_err());
    }

    #[test]
    fn method_b_matches_figure_example() {
        let sp = spec(9, 17);
        let c = to_method_b(&sp, NodeRef::interior(3, 3), NodeRef::interior(11, 6)).unwrap();
        assert_eq!(
            (c.span_left, c.span_right, c.p_offset, c.q_offset, c.y_in, c.y_out),
            (6, 10, 4, 4, 3, 6)
        );
        assert!(!c.swapped);
    }

    #[test]
    fn method_b_same_node() {
        let sp = spec(3, 4);
        let c = to_method_b(&sp, NodeRef::interior(1, 1), NodeRef::interior(1, 1)).unwrap();
        assert_eq!(c.p_offset, -c.q_offset);
        assert_eq!((c.x_in(), c.x_out(), c.y_in, c.y_out), (1, 1, 1, 1));
    }

    #[test]
    fn method_b_swaps_reversed_pair() {
        let sp = spec(3, 4);
        let c = to_method_b(&sp, NodeRef::interior(4, 2), NodeRef::interior(1, 1)).unwrap();
        assert!(c.swapped);
        assert_eq!((c.x_in(), c.y_in, c.x_out(), c.y_out), (1, 1, 4, 2));
        assert_eq!(c.original_pair(), (NodeRef::interior(4, 2), NodeRef::interior(1, 1)));
    }

    #[test]
    fn method_b_rejects_out_of_bounds() {
        let sp = spec(3, 4);
        let err = to_method_b(&sp, NodeRef::interior(5, 1), NodeRef::interior(1, 1)).unwrap_err();
        assert!(err.to_string().contains("x=5"), "{err}");
        let err = to_method_b(&sp, NodeRef::interior(1, 1), NodeRef::interior(1, 4)).unwrap_err();
        assert!(err.to_string().contains("y=4"), "{err}");
        assert!(matches!(
            to_method_b(&sp, NodeRef::TerminalO, NodeRef::interior(1, 1)),
            Err(Error::TerminalNode(_))
        ));
    }

    #[test]
    fn method_b_round_trip_exhaustive() {
        for m in 1..=8 {
            for n in 1..=8 {
                let sp = spec(m, n);
                let nodes: Vec<_> = sp.interior_nodes().collect();
                for &a in &nodes {
                    for &b in &nodes {
                        let c = to_method_b(&sp, a, b).unwrap();
                        assert_eq!(c.cols(), n as i64);
                        assert!(-c.span_left <= -c.p_offset);
                        assert!(-c.p_offset <= c.q_offset);
                        assert!(c.q_offset <= c.span_right);
                        assert_eq!(c.original_pair(), (a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn flat_index_examples() {
        let sp = spec(3, 4);
        assert_eq!(flat_index(&sp, NodeRef::interior(1, 1)).unwrap().get(), 1);
        assert_eq!(flat_index(&sp, NodeRef::interior(4, 3)).unwrap().get(), 12);
        assert_eq!(flat_index(&sp, NodeRef::interior(2, 2)).unwrap().get(), 6);
        assert!(matches!(
            flat_index(&sp, NodeRef::TerminalOPrime),
            Err(Error::TerminalNode(_))
        ));
    }

    #[test]
    fn flat_index_bijective_exhaustive() {
        for m in 1..=8 {
            for n in 1..=8 {
                let sp = spec(m, n);
                let seen: HashSet<usize> = sp.interior_nodes().map(|v| flat_index(&sp, v).unwrap().get()).collect();
                assert_eq!(seen, (1..=m * n).collect());
                for i in 0..sp.node_count() {
                    assert_eq!(sp.node_index(sp.node_at(i).unwrap()).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn edge_counts() {
        assert_eq!(build_edge_list(&spec(1, 1)).len(), 2);
        assert_eq!(build_edge_list(&spec(3, 4)).len(), 25);
        assert_eq!(build_edge_list(&spec(9, 8)).len(), 143);
        let single = build_edge_list(&HammockSpec::new(1, 1, 2.0, 3.0).unwrap());
        assert!(single.iter().all(|e| e.resistance == 3.0));
    }

    #[test]
    fn edge_list_topology() {
        for m in 1..=6 {
            for n in 1..=6 {
                let sp = spec(m, n);
                let edges = build_edge_list(&sp);
                assert_eq!(edges.len(), m * (n - 1) + n * (m - 1) + 2 * n);
                let keys: HashSet<(NodeRef, NodeRef)> = edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
                assert_eq!(keys.len(), edges.len(), "duplicate edge");

                let idx = |v: NodeRef| sp.node_index(v).unwrap();
                let mut adj = vec![Vec::new(); sp.node_count()];
                for e in &edges {
                    adj[idx(e.a)].push(idx(e.b));
                    adj[idx(e.b)].push(idx(e.a));
                }
                assert_eq!(adj[0].len(), n);
                assert_eq!(adj[sp.node_count() - 1].len(), n);
                for v in sp.interior_nodes() {
                    let NodeRef::Interior { x, y } = v else { unreachable!() };
                    let horizontal = usize::from(x > 1) + usize::from(x < n);
                    assert_eq!(adj[idx(v)].len(), horizontal + 2, "degree of {v}");
                    let _ = y;
                }
                let mut seen = vec![false; sp.node_count()];
                let mut queue = VecDeque::from([0]);
                seen[0] = true;
                while let Some(u) = queue.pop_front() {
                    for &w in &adj[u] {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
                assert!(seen.iter().all(|&s| s), "graph disconnected");
            }
        }
    }

    #[test]
    fn edge_csv_format() {
        let mut out = Vec::new();
        write_edge_csv(&build_edge_list(&spec(1, 1)), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "node_a,node_b,resistance\nO,\"1,1\",1\nOP,\"1,1\",1\n");
    }

    #[test]
    fn node_syntax() {
        assert_eq!("2,3".parse::<NodeRef>().unwrap(), NodeRef::interior(2, 3));
        assert_eq!("O".parse::<NodeRef>().unwrap(), NodeRef::TerminalO);
        assert_eq!("OP".parse::<NodeRef>().unwrap(), NodeRef::TerminalOPrime);
        assert!("2;3".parse::<NodeRef>().is_err());
        assert!("x,1".parse::<NodeRef>().is_err());
        assert_eq!(NodeRef::interior(4, 1).to_string(), "4,1");
    }
}
