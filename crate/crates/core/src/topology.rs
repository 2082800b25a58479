//! Structured connectivity: symbolic specs and their dense realization.
//!
//! Nodes of block structures are indexed `k = i*S + j` (population `i`,
//! position `j` inside the population). Graph products use the
//! lexicographic index `a*n2 + b` and are right-associated.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Expression tree over path and cycle graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphExpr {
    Path(usize),
    Cycle(usize),
    Kronecker(Box<GraphExpr>, Box<GraphExpr>),
    Cartesian(Box<GraphExpr>, Box<GraphExpr>),
}

impl GraphExpr {
    pub fn path(n: usize) -> Self {
        GraphExpr::Path(n)
    }

    pub fn cycle(n: usize) -> Self {
        GraphExpr::Cycle(n)
    }

    /// Right-associated Cartesian product of the factors.
    pub fn cartesian(factors: Vec<GraphExpr>) -> Result<Self> {
        fold_right(factors, |a, b| GraphExpr::Cartesian(Box::new(a), Box::new(b)))
    }

    /// Right-associated Kronecker product of the factors.
    pub fn kronecker(factors: Vec<GraphExpr>) -> Result<Self> {
        fold_right(factors, |a, b| GraphExpr::Kronecker(Box::new(a), Box::new(b)))
    }

    pub fn node_count(&self) -> usize {
        match self {
            GraphExpr::Path(n) | GraphExpr::Cycle(n) => *n,
            GraphExpr::Kronecker(a, b) | GraphExpr::Cartesian(a, b) => a.node_count() * b.node_count(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GraphExpr::Path(n) if *n == 0 => Err(Error::InvalidTopology("path needs at least one node".into())),
            GraphExpr::Cycle(n) if *n < 3 => Err(Error::InvalidTopology(format!("cycle needs at least 3 nodes, got {n}"))),
            GraphExpr::Kronecker(a, b) | GraphExpr::Cartesian(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// Unweighted in-degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        match self {
            GraphExpr::Path(n) => (0..*n)
                .map(|i| (i > 0) as usize + (i + 1 < *n) as usize)
                .collect(),
            GraphExpr::Cycle(n) => vec![2; *n],
            GraphExpr::Kronecker(a, b) => combine(&a.degrees(), &b.degrees(), |x, y| x * y),
            GraphExpr::Cartesian(a, b) => combine(&a.degrees(), &b.degrees(), |x, y| x + y),
        }
    }

    /// Unweighted 0/1 adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<f64> {
        match self {
            GraphExpr::Path(n) => DMatrix::from_fn(*n, *n, |i, j| (i.abs_diff(j) == 1) as u8 as f64),
            GraphExpr::Cycle(n) => DMatrix::from_fn(*n, *n, |i, j| {
                let d = (i + n - j) % n;
                (d == 1 || d == n - 1) as u8 as f64
            }),
            GraphExpr::Kronecker(a, b) => a.adjacency().kronecker(&b.adjacency()),
            GraphExpr::Cartesian(a, b) => {
                let (ma, mb) = (a.adjacency(), b.adjacency());
                let ia = DMatrix::<f64>::identity(ma.nrows(), ma.nrows());
                let ib = DMatrix::<f64>::identity(mb.nrows(), mb.nrows());
                ma.kronecker(&ib) + ia.kronecker(&mb)
            }
        }
    }
}

fn fold_right(mut factors: Vec<GraphExpr>, op: impl Fn(GraphExpr, GraphExpr) -> GraphExpr) -> Result<GraphExpr> {
    let mut acc = factors
        .pop()
        .ok_or_else(|| Error::InvalidTopology("graph product needs at least one factor".into()))?;
    while let Some(f) = factors.pop() {
        acc = op(f, acc);
    }
    Ok(acc)
}

fn combine(a: &[usize], b: &[usize], f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| f(x, y)).collect()
}

/// First rows `[b^(l)]_{0,k}` of the S×S circulant blocks of a block-circulant adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRows {
    pub r: usize,
    pub s: usize,
    /// `rows[l][k]` is 0 or 1.
    pub rows: Vec<Vec<u8>>,
}

impl BlockRows {
    pub fn in_degree(&self) -> usize {
        self.rows.iter().flatten().map(|&b| b as usize).sum()
    }

    /// Entry (p, q) of the unweighted adjacency.
    pub fn entry(&self, p: usize, q: usize) -> u8 {
        let (r, s) = (self.r, self.s);
        let (pi, pj) = (p / s, p % s);
        let (qi, qj) = (q / s, q % s);
        self.rows[(qi + r - pi) % r][(qj + s - pj) % s]
    }
}

/// Symbolic connectivity pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TopologyRepr", into = "TopologyRepr")]
pub enum TopologySpec {
    /// Undirected circulant graph on `n` nodes; node `i` connects to `i ± d` for each offset `d`.
    Circulant { n: usize, offsets: BTreeSet<usize> },
    /// `r` populations of `s` neurons; block `i` is a symmetric band of half-width `bands[i]`.
    BlockCirculantBand { r: usize, s: usize, bands: Vec<usize> },
    GraphProduct(GraphExpr),
}

impl TopologySpec {
    pub fn circulant(n: usize, offsets: impl IntoIterator<Item = usize>) -> Result<Self> {
        let spec = TopologySpec::Circulant { n, offsets: offsets.into_iter().collect() };
        spec.validate()?;
        Ok(spec)
    }

    /// Cycle graph, i.e. circulant with the single offset 1.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::circulant(n, [1])
    }

    /// Circulant band of half-width `nu`, in-degree `2nu` (or `n-1` when `nu = n/2`).
    pub fn circulant_band(n: usize, nu: usize) -> Result<Self> {
        Self::circulant(n, 1..=nu)
    }

    /// Fully connected graph K_n.
    pub fn complete(n: usize) -> Result<Self> {
        Self::circulant(n, 1..=n / 2)
    }

    pub fn band(r: usize, s: usize, bands: Vec<usize>) -> Result<Self> {
        let spec = TopologySpec::BlockCirculantBand { r, s, bands };
        spec.validate()?;
        Ok(spec)
    }

    pub fn product(expr: GraphExpr) -> Result<Self> {
        expr.validate()?;
        Ok(TopologySpec::GraphProduct(expr))
    }

    /// Circular ladder CL_n = Cy_n × P_2.
    pub fn circular_ladder(n: usize) -> Result<Self> {
        Self::product(GraphExpr::cartesian(vec![GraphExpr::Cycle(n), GraphExpr::Path(2)])?)
    }

    /// Torus Cy_a × Cy_b.
    pub fn torus(a: usize, b: usize) -> Result<Self> {
        Self::product(GraphExpr::cartesian(vec![GraphExpr::Cycle(a), GraphExpr::Cycle(b)])?)
    }

    /// Hypercube H_d = P_2 × ... × P_2.
    pub fn hypercube(d: usize) -> Result<Self> {
        Self::product(GraphExpr::cartesian(vec![GraphExpr::Path(2); d])?)
    }

    /// Ladder P_n × P_2 (irregular).
    pub fn ladder(n: usize) -> Result<Self> {
        Self::product(GraphExpr::cartesian(vec![GraphExpr::Path(n), GraphExpr::Path(2)])?)
    }

    /// Grid P_a × P_b (irregular).
    pub fn grid(a: usize, b: usize) -> Result<Self> {
        Self::product(GraphExpr::cartesian(vec![GraphExpr::Path(a), GraphExpr::Path(b)])?)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TopologySpec::Circulant { n, offsets } => {
                if *n == 0 {
                    return Err(Error::InvalidTopology("circulant needs at least one node".into()));
                }
                if let Some(&d) = offsets.iter().find(|&&d| d == 0 || d > n / 2) {
                    return Err(Error::InvalidTopology(format!("offset {d} outside 1..={}", n / 2)));
                }
                Ok(())
            }
            TopologySpec::BlockCirculantBand { r, s, bands } => {
                if *s < 3 {
                    return Err(Error::BadBand(format!("block size S={s} must be at least 3")));
                }
                if *r == 0 || bands.len() != *r {
                    return Err(Error::BadBand(format!("need R={r} >= 1 band widths, got {}", bands.len())));
                }
                if let Some(&nu) = bands.iter().find(|&&nu| nu == 0 || nu > s / 2) {
                    return Err(Error::BadBand(format!("band half-width {nu} outside 1..={}", s / 2)));
                }
                Ok(())
            }
            TopologySpec::GraphProduct(e) => e.validate(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TopologySpec::Circulant { n, .. } => *n,
            TopologySpec::BlockCirculantBand { r, s, .. } => r * s,
            TopologySpec::GraphProduct(e) => e.node_count(),
        }
    }

    /// In-degree M when every node shares it, without realizing the matrix.
    pub fn in_degree(&self) -> Option<usize> {
        match self {
            TopologySpec::Circulant { .. } | TopologySpec::BlockCirculantBand { .. } => {
                self.block_rows().map(|b| b.in_degree())
            }
            TopologySpec::GraphProduct(e) => {
                let d = e.degrees();
                let first = d[0];
                d.iter().all(|&x| x == first).then_some(first)
            }
        }
    }

    pub fn is_fully_connected(&self) -> bool {
        let n = self.node_count();
        n >= 2 && self.in_degree() == Some(n - 1)
    }

    /// Block-circulant structure, for the specs that have one.
    pub fn block_rows(&self) -> Option<BlockRows> {
        match self {
            TopologySpec::Circulant { n, offsets } => {
                let mut row = vec![0u8; *n];
                for &d in offsets {
                    row[d % n] = 1;
                    row[(n - d) % n] = 1;
                }
                Some(BlockRows { r: 1, s: *n, rows: vec![row] })
            }
            TopologySpec::BlockCirculantBand { r, s, bands } => Some(BlockRows {
                r: *r,
                s: *s,
                rows: bands.iter().enumerate().map(|(i, &nu)| band_row(*s, nu, i == 0)).collect(),
            }),
            TopologySpec::GraphProduct(_) => None,
        }
    }

    /// Unweighted 0/1 adjacency.
    pub fn unweighted(&self) -> DMatrix<f64> {
        match self {
            TopologySpec::GraphProduct(e) => e.adjacency(),
            _ => {
                let b = self.block_rows().expect("block structure");
                let n = self.node_count();
                DMatrix::from_fn(n, n, |p, q| b.entry(p, q) as f64)
            }
        }
    }
}

/// Heaviside step with H(0) = 0.
fn heaviside(x: i64) -> usize {
    (x > 0) as usize
}

/// First row of a symmetric band block: ones at `1..=nu` and `rho..S-1`,
/// plus the diagonal for off-diagonal blocks.
fn band_row(s: usize, nu: usize, diagonal_block: bool) -> Vec<u8> {
    let rho = band_rho(s, nu);
    (0..s)
        .map(|j| {
            if j == 0 {
                (!diagonal_block) as u8
            } else {
                ((j <= nu) || (j >= rho)) as u8
            }
        })
        .collect()
}

fn band_rho(s: usize, nu: usize) -> usize {
    let parity = if s.is_multiple_of(2) { 1 } else { -1 };
    s - nu + heaviside(nu as i64 - (s / 2) as i64 + parity)
}

/// In-degree of a band block-circulant, `R - 1 + Σ[2ν_i - H(ν_i - ⌊S/2⌋ + (-1)^S)]`.
pub fn band_in_degree(r: usize, s: usize, bands: &[usize]) -> usize {
    let parity = if s.is_multiple_of(2) { 1 } else { -1 };
    r - 1 + bands.iter().map(|&nu| 2 * nu - heaviside(nu as i64 - (s / 2) as i64 + parity)).sum::<usize>()
}

/// Dense weighted connectivity J̄.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAdjacency {
    pub matrix: DMatrix<f64>,
    pub scale: f64,
    /// Shared in-degree, `None` for irregular graphs realized on request.
    pub in_degree: Option<usize>,
    /// Presynaptic neighbours of every node; kept even when Λ = 0.
    pub neighbors: Vec<Vec<usize>>,
}

impl WeightedAdjacency {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of incoming edges of node `i`.
    pub fn row_degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }
}

/// Realize a regular topology as J̄ with entries Λ/M on edges.
pub fn realize(spec: &TopologySpec, scale: f64) -> Result<WeightedAdjacency> {
    realize_with(spec, scale, false)
}

/// Realize a topology; with `allow_irregular` each row is normalized by its own in-degree.
pub fn realize_with(spec: &TopologySpec, scale: f64, allow_irregular: bool) -> Result<WeightedAdjacency> {
    spec.validate()?;
    let mask = spec.unweighted();
    let row_degree = row_degrees(&mask)?;
    let neighbors: Vec<Vec<usize>> = (0..mask.nrows())
        .map(|i| (0..mask.ncols()).filter(|&j| mask[(i, j)] != 0.0).collect())
        .collect();
    let in_degree = match validate_regularity(&mask) {
        Ok(m) => Some(m),
        Err(e) if !allow_irregular => return Err(e),
        Err(_) => None,
    };
    let n = mask.nrows();
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        if mask[(i, j)] != 0.0 {
            scale / row_degree[i] as f64
        } else {
            0.0
        }
    });
    Ok(WeightedAdjacency { matrix, scale, in_degree, neighbors })
}

/// Band block-circulant adjacency built directly from `(R, S, ν)`.
pub fn band_block_circulant(r: usize, s: usize, bands: &[usize], scale: f64) -> Result<WeightedAdjacency> {
    realize(&TopologySpec::band(r, s, bands.to_vec())?, scale)
}

fn row_degrees(m: &DMatrix<f64>) -> Result<Vec<usize>> {
    (0..m.nrows())
        .map(|i| {
            if m[(i, i)] != 0.0 {
                return Err(Error::SelfLoop(i));
            }
            Ok(m.row(i).iter().filter(|&&x| x != 0.0).count())
        })
        .collect()
}

/// Shared in-degree M of a matrix, or the rows that deviate from the most common degree.
pub fn validate_regularity(m: &DMatrix<f64>) -> Result<usize> {
    let deg = row_degrees(m)?;
    let Some(&first) = deg.first() else { return Ok(0) };
    if deg.iter().all(|&d| d == first) {
        return Ok(first);
    }
    let mut counts = std::collections::BTreeMap::new();
    for &d in &deg {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    let expected = counts.iter().max_by_key(|(d, c)| (**c, **d)).map(|(d, _)| *d).unwrap();
    let rows = deg.iter().enumerate().filter(|(_, &d)| d != expected).map(|(i, _)| i).collect();
    Err(Error::IrregularDegree { expected, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum TopologyRepr {
    Circulant { n: usize, offsets: Vec<usize> },
    Complete { n: usize },
    BlockCirculantBand { r: usize, s: usize, bands: Vec<usize> },
    Cartesian { factors: Vec<FactorRepr> },
    Kronecker { factors: Vec<FactorRepr> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum FactorRepr {
    Path(usize),
    Cycle(usize),
    Cartesian(Vec<FactorRepr>),
    Kronecker(Vec<FactorRepr>),
}

impl TryFrom<FactorRepr> for GraphExpr {
    type Error = Error;

    fn try_from(f: FactorRepr) -> Result<Self> {
        let conv = |v: Vec<FactorRepr>| v.into_iter().map(GraphExpr::try_from).collect::<Result<Vec<_>>>();
        match f {
            FactorRepr::Path(n) => Ok(GraphExpr::Path(n)),
            FactorRepr::Cycle(n) => Ok(GraphExpr::Cycle(n)),
            FactorRepr::Cartesian(v) => GraphExpr::cartesian(conv(v)?),
            FactorRepr::Kronecker(v) => GraphExpr::kronecker(conv(v)?),
        }
    }
}

// Flattens a right-leaning chain of one operator into its factor list.
fn flatten(e: &GraphExpr, cartesian: bool) -> Vec<FactorRepr> {
    match (e, cartesian) {
        (GraphExpr::Cartesian(a, b), true) | (GraphExpr::Kronecker(a, b), false) => {
            let mut v = vec![to_factor(a)];
            v.extend(flatten(b, cartesian));
            v
        }
        _ => vec![to_factor(e)],
    }
}

fn to_factor(e: &GraphExpr) -> FactorRepr {
    match e {
        GraphExpr::Path(n) => FactorRepr::Path(*n),
        GraphExpr::Cycle(n) => FactorRepr::Cycle(*n),
        GraphExpr::Cartesian(..) => FactorRepr::Cartesian(flatten(e, true)),
        GraphExpr::Kronecker(..) => FactorRepr::Kronecker(flatten(e, false)),
    }
}

impl TryFrom<TopologyRepr> for TopologySpec {
    type Error = Error;

    fn try_from(r: TopologyRepr) -> Result<Self> {
        let factors = |v: Vec<FactorRepr>| v.into_iter().map(GraphExpr::try_from).collect::<Result<Vec<_>>>();
        match r {
            TopologyRepr::Circulant { n, offsets } => TopologySpec::circulant(n, offsets),
            TopologyRepr::Complete { n } => TopologySpec::complete(n),
            TopologyRepr::BlockCirculantBand { r, s, bands } => TopologySpec::band(r, s, bands),
            TopologyRepr::Cartesian { factors: f } => TopologySpec::product(GraphExpr::cartesian(factors(f)?)?),
            TopologyRepr::Kronecker { factors: f } => TopologySpec::product(GraphExpr::kronecker(factors(f)?)?),
        }
    }
}

impl From<TopologySpec> for TopologyRepr {
    fn from(s: TopologySpec) -> Self {
        match s {
            TopologySpec::Circulant { n, offsets } => {
                if n >= 2 && offsets.len() == n / 2 {
                    TopologyRepr::Complete { n }
                } else {
                    TopologyRepr::Circulant { n, offsets: offsets.into_iter().collect() }
                }
            }
            TopologySpec::BlockCirculantBand { r, s, bands } => TopologyRepr::BlockCirculantBand { r, s, bands },
            TopologySpec::GraphProduct(e) => match &e {
                GraphExpr::Kronecker(..) => TopologyRepr::Kronecker { factors: flatten(&e, false) },
                _ => TopologyRepr::Cartesian { factors: flatten(&e, true) },
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_five() {
        let a = realize(&TopologySpec::cycle(5).unwrap(), 1.0).unwrap();
        assert_eq!(a.in_degree, Some(2));
        for i in 0..5 {
            for j in 0..5 {
                let d = (i + 5 - j) % 5;
                let want = if d == 1 || d == 4 { 0.5 } else { 0.0 };
                assert_eq!(a.matrix[(i, j)], want);
            }
        }
    }

    #[test]
    fn named_products() {
        let cl = realize(&TopologySpec::circular_ladder(10).unwrap(), 1.0).unwrap();
        assert_eq!((cl.n(), cl.in_degree), (20, Some(3)));
        let h3 = realize(&TopologySpec::hypercube(3).unwrap(), 1.0).unwrap();
        assert_eq!((h3.n(), h3.in_degree), (8, Some(3)));
        let t = realize(&TopologySpec::torus(3, 3).unwrap(), 1.0).unwrap();
        assert_eq!(t.in_degree, Some(4));
        let k = realize(&TopologySpec::complete(10).unwrap(), 1.0).unwrap();
        assert_eq!(k.in_degree, Some(9));
    }

    #[test]
    fn ladder_corners_are_flagged() {
        let spec = TopologySpec::ladder(6).unwrap();
        match realize(&spec, 1.0) {
            Err(Error::IrregularDegree { expected, rows }) => {
                assert_eq!(expected, 3);
                // P6 x P2 with index a*2+b: corners are a in {0,5}.
                assert_eq!(rows, vec![0, 1, 10, 11]);
            }
            other => panic!("{other:?}"),
        }
        let a = realize_with(&spec, 1.0, true).unwrap();
        assert_eq!(a.in_degree, None);
        for i in 0..12 {
            assert!((a.matrix.row(i).sum() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn band_degree_formula_matches_count() {
        for s in 3..12 {
            for r in 1..4 {
                for nu0 in 1..=s / 2 {
                    let bands: Vec<usize> = (0..r).map(|i| 1 + (nu0 + i) % (s / 2)).collect();
                    let a = band_block_circulant(r, s, &bands, 1.0).unwrap();
                    assert_eq!(a.in_degree, Some(band_in_degree(r, s, &bands)), "r={r} s={s} {bands:?}");
                }
            }
        }
        let a = band_block_circulant(2, 4, &[1, 1], 1.0).unwrap();
        assert_eq!(a.in_degree, Some(band_in_degree(2, 4, &[1, 1])));
    }

    #[test]
    fn band_special_cases() {
        let n = 11;
        let a = band_block_circulant(1, n, &[3], 2.0).unwrap();
        assert_eq!(a.in_degree, Some(6));
        let full = band_block_circulant(3, 4, &[2, 2, 2], 1.0).unwrap();
        assert_eq!(full.in_degree, Some(11));
        let full = band_block_circulant(2, 5, &[2, 2], 1.0).unwrap();
        assert_eq!(full.in_degree, Some(9));
    }

    #[test]
    fn bad_bands_rejected() {
        assert!(matches!(TopologySpec::band(1, 2, vec![1]), Err(Error::BadBand(_))));
        assert!(matches!(TopologySpec::band(2, 6, vec![1, 4]), Err(Error::BadBand(_))));
        assert!(matches!(TopologySpec::band(2, 6, vec![0, 1]), Err(Error::BadBand(_))));
    }

    #[test]
    fn row_sums_equal_scale() {
        for spec in [
            TopologySpec::circular_ladder(7).unwrap(),
            TopologySpec::band(3, 5, vec![1, 2, 1]).unwrap(),
            TopologySpec::complete(9).unwrap(),
        ] {
            let a = realize(&spec, 1.7).unwrap();
            for i in 0..a.n() {
                assert!((a.matrix.row(i).sum() - 1.7).abs() <= 1e-14);
                assert_eq!(a.matrix[(i, i)], 0.0);
            }
        }
    }

    #[test]
    fn zero_degree_gives_zero_matrix() {
        let a = realize(&TopologySpec::circulant(4, []).unwrap(), 3.0).unwrap();
        assert_eq!(a.in_degree, Some(0));
        assert!(a.matrix.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"kind":"cartesian","factors":[{"cycle":10},{"path":2}]}"#;
        let spec: TopologySpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, TopologySpec::circular_ladder(10).unwrap());
        assert_eq!(serde_json::to_string(&spec).unwrap(), text);
        for spec in [
            TopologySpec::complete(6).unwrap(),
            TopologySpec::cycle(5).unwrap(),
            TopologySpec::band(2, 4, vec![1, 2]).unwrap(),
            TopologySpec::product(GraphExpr::Cartesian(
                Box::new(GraphExpr::kronecker(vec![GraphExpr::Cycle(3), GraphExpr::Path(2)]).unwrap()),
                Box::new(GraphExpr::Cycle(4)),
            ))
            .unwrap(),
        ] {
            let s = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<TopologySpec>(&s).unwrap(), spec);
        }
        assert!(serde_json::from_str::<TopologySpec>(r#"{"kind":"complete","n":4,"x":1}"#).is_err());
    }
}
