//! Quadratic-residue digraphs on prime divisors, their Laplacians over F₂,
//! and odd/even partition counting.
//!
//! The central construction is the *unified residue graph* G(m) of a nonzero
//! square-free integer m: vertices are −1 (iff m < 0) and the prime divisors
//! of |m|; an arc p → v exists iff the source prime satisfies p ≡ 1 (mod 3)
//! and the target's value is a quadratic non-residue mod p. Two companion
//! constructions used only for cross-checks drop or double arcs: see
//! [`build_all_sources`] and [`build_mutual_residue`].
//!
//! A partition (V₁, V₂) of the vertices is *odd* when some vertex has an odd
//! number of out-arcs crossing to the other side, else *even*. Evenness of
//! (V₁, V₂) is equivalent to L·1_{V₁} = 0 over F₂ for the Laplacian
//! L = diag(outdeg) − A, which turns partition counting into kernel counting:
//! a graph on m vertices has exactly 2^(m − rank L − 1) even partitions, and
//! is an *odd graph* (only the trivial partition even) iff rank L = m − 1.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::arith::{class_mul, legendre, SquareClass};
use crate::gf2::MatrixF2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// The unified construction needs at least one vertex; the class of +1
    /// provides none.
    #[error("the class of +1 yields an empty vertex set")]
    EmptyVertexSet,
    /// The companion constructions require an odd square-free n ≥ 5 coprime
    /// to 3.
    #[error("invalid input for graph construction: {0}")]
    BadInput(String),
    /// Constrained-oddness enumeration is capped at 20 vertices (2^20
    /// oriented subsets).
    #[error("graph has {0} vertices; constrained oddness enumerates at most 20")]
    TooManyVertices(usize),
}

/// A graph vertex: the formal vertex −1 or a prime.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VertexLabel {
    MinusOne,
    Prime(u64),
}

impl VertexLabel {
    /// The integer the vertex contributes to partition products and to
    /// Legendre-symbol targets.
    pub fn value(self) -> i128 {
        match self {
            VertexLabel::MinusOne => -1,
            VertexLabel::Prime(p) => p as i128,
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Which construction produced a graph (kept for display and debugging).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SourceKind {
    /// The unified graph G(m) of the recorded square-free integer.
    Unified { m: i128 },
    /// Companion check graph on {−1, 3} ∪ primes(n) with arcs from every
    /// prime divisor of n, not only those ≡ 1 (mod 3).
    AllSources { n: u64 },
    /// Companion check graph on {−1} ∪ primes(n) with p → q iff (q/p) = −1
    /// and the arc pair p ↔ −1 present iff (−1/p) = −1.
    MutualResidue { n: u64 },
}

/// A residue digraph: ordered vertex labels (−1 first, then primes
/// ascending), adjacency over F₂, and the construction that produced it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueGraph {
    labels: Vec<VertexLabel>,
    adj: MatrixF2,
    source: SourceKind,
}

/// An unordered 2-partition of a graph's vertices, canonicalized so that
/// vertex 0 is never in side 1 (the trivial partition has empty side 1).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Partition {
    mask: u64,
}

impl Partition {
    /// Canonicalize an arbitrary side-1 bitmask for a graph on `m` vertices.
    pub fn new(m: usize, side1_mask: u64) -> Partition {
        let full = full_mask(m);
        debug_assert_eq!(side1_mask & !full, 0, "mask has bits beyond the vertex count");
        if side1_mask & 1 == 1 {
            Partition { mask: full & !side1_mask }
        } else {
            Partition { mask: side1_mask }
        }
    }

    pub fn trivial() -> Partition {
        Partition { mask: 0 }
    }

    /// Canonical side-1 bitmask (never contains vertex 0).
    pub fn side1_mask(self) -> u64 {
        self.mask
    }

    pub fn is_trivial(self) -> bool {
        self.mask == 0
    }
}

impl ResidueGraph {
    /// Assemble a graph from raw parts. Intended for synthetic test graphs;
    /// the three build functions are the real constructors.
    pub fn from_parts(labels: Vec<VertexLabel>, adj: MatrixF2, source: SourceKind) -> ResidueGraph {
        assert_eq!(adj.rows(), labels.len());
        assert_eq!(adj.cols(), labels.len());
        ResidueGraph { labels, adj, source }
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn adjacency(&self) -> &MatrixF2 {
        &self.adj
    }

    pub fn source(&self) -> SourceKind {
        self.source
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// All arcs as (source index, target index) pairs.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.vertex_count() {
            for j in 0..self.vertex_count() {
                if self.adj.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Laplacian diag(outdeg) − A over F₂.
    pub fn laplacian(&self) -> MatrixF2 {
        let m = self.vertex_count();
        let mut l = self.adj.clone();
        for i in 0..m {
            if self.adj.row(i).count_ones() % 2 == 1 {
                l.flip(i, i);
            }
        }
        l
    }
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// The unified residue graph G(m) of a square class: vertices −1 (iff the
/// class is negative) and its support primes; arcs p → v for sources
/// p ≡ 1 (mod 3) and targets with (value(v)/p) = −1.
pub fn build_unified(d: &SquareClass) -> Result<ResidueGraph, GraphError> {
    if d.is_one() {
        return Err(GraphError::EmptyVertexSet);
    }
    let mut labels = Vec::with_capacity(d.support().len() + 1);
    if d.negative() {
        labels.push(VertexLabel::MinusOne);
    }
    labels.extend(d.support().iter().map(|&p| VertexLabel::Prime(p)));
    let adj = arcs_from_sources(&labels, |p| p % 3 == 1);
    Ok(ResidueGraph { labels, adj, source: SourceKind::Unified { m: d.representative() } })
}

/// Companion check graph on {−1, 3} ∪ primes(n), arcs from every prime
/// divisor of n to each non-residue target. Coincides with the unified graph
/// of −3n exactly when every prime divisor of n is ≡ 1 (mod 3).
pub fn build_all_sources(n: u64) -> Result<ResidueGraph, GraphError> {
    let primes = companion_input(n)?;
    let mut labels = vec![VertexLabel::MinusOne, VertexLabel::Prime(3)];
    labels.extend(primes.iter().map(|&p| VertexLabel::Prime(p)));
    let adj = arcs_from_sources(&labels, |p| p != 3);
    Ok(ResidueGraph { labels, adj, source: SourceKind::AllSources { n } })
}

/// Companion check graph on {−1} ∪ primes(n): p → q iff (q/p) = −1 for
/// primes, and both arcs between p and −1 iff (−1/p) = −1.
pub fn build_mutual_residue(n: u64) -> Result<ResidueGraph, GraphError> {
    let primes = companion_input(n)?;
    let mut labels = vec![VertexLabel::MinusOne];
    labels.extend(primes.iter().map(|&p| VertexLabel::Prime(p)));
    let m = labels.len();
    let mut adj = MatrixF2::zero(m, m);
    for (i, &src) in labels.iter().enumerate() {
        let VertexLabel::Prime(p) = src else { continue };
        for (j, &dst) in labels.iter().enumerate() {
            if i == j {
                continue;
            }
            if legendre(dst.value(), p) == -1 {
                adj.set(i, j, true);
                if dst == VertexLabel::MinusOne {
                    // The sign vertex reciprocates: (−1/p) = −1 puts the arc
                    // in both directions.
                    adj.set(j, i, true);
                }
            }
        }
    }
    Ok(ResidueGraph { labels, adj, source: SourceKind::MutualResidue { n } })
}

/// Validate a companion-construction input and return its prime divisors.
fn companion_input(n: u64) -> Result<Vec<u64>, GraphError> {
    if n < 5 || n % 2 == 0 || n % 3 == 0 {
        return Err(GraphError::BadInput(format!(
            "n = {n} must be an odd square-free integer >= 5 and coprime to 3"
        )));
    }
    crate::arith::factor_square_free(n)
        .map_err(|e| GraphError::BadInput(format!("n = {n}: {e}")))
}

/// Arc rule shared by the unified and all-sources constructions: each prime
/// vertex passing `is_source` shoots at every non-residue target.
fn arcs_from_sources(labels: &[VertexLabel], is_source: impl Fn(u64) -> bool) -> MatrixF2 {
    let m = labels.len();
    let mut adj = MatrixF2::zero(m, m);
    for (i, &src) in labels.iter().enumerate() {
        let VertexLabel::Prime(p) = src else { continue };
        if !is_source(p) {
            continue;
        }
        for (j, &dst) in labels.iter().enumerate() {
            if i != j && legendre(dst.value(), p) == -1 {
                adj.set(i, j, true);
            }
        }
    }
    adj
}

// ---------------------------------------------------------------------------
// Partition predicates and counting
// ---------------------------------------------------------------------------

/// Direct definition of partition oddness: some vertex has an odd number of
/// out-arcs crossing to the other side. The trivial partition is even.
pub fn is_odd_partition(g: &ResidueGraph, partition: Partition) -> bool {
    let m = g.vertex_count();
    let side1 = partition.side1_mask();
    let side2 = full_mask(m) & !side1;
    if side1 == 0 || side2 == 0 {
        return false;
    }
    (0..m).any(|v| {
        let other = if (side1 >> v) & 1 == 1 { side2 } else { side1 };
        (g.adjacency().row(v) & other).count_ones() % 2 == 1
    })
}

/// The square class d(V₁) of the canonical side 1: product of −1 for the
/// sign vertex and of each prime vertex in the side.
pub fn partition_delta(g: &ResidueGraph, partition: Partition) -> SquareClass {
    delta_of_mask(g, partition.side1_mask())
}

/// Product class of an arbitrary vertex subset given as a bitmask.
pub fn delta_of_mask(g: &ResidueGraph, mask: u64) -> SquareClass {
    let mut acc = SquareClass::one();
    for (i, &label) in g.labels().iter().enumerate() {
        if (mask >> i) & 1 == 1 {
            let factor = match label {
                VertexLabel::MinusOne => SquareClass::minus_one(),
                VertexLabel::Prime(p) => SquareClass::from_prime(p),
            };
            acc = class_mul(&acc, &factor);
        }
    }
    acc
}

/// Number of even partitions (trivial included): 2^(m − rank L − 1).
pub fn even_partition_count(g: &ResidueGraph) -> u64 {
    let m = g.vertex_count();
    let rank = g.laplacian().rank_f2();
    debug_assert!(rank < m, "Laplacian rows sum to zero, so rank <= m - 1");
    1u64 << (m - rank - 1)
}

/// A graph is odd iff its only even partition is the trivial one.
pub fn is_odd_graph(g: &ResidueGraph) -> bool {
    g.laplacian().rank_f2() == g.vertex_count() - 1
}

/// Check that every nontrivial partition selected by `filter` is odd, except
/// partitions one of whose sides equals an exception set.
///
/// The filter sees the product class d(V₁) and both oriented sides; each
/// unordered partition is therefore offered in both orientations, and must be
/// odd as soon as *either* orientation passes the filter. Exception sets
/// suppress the requirement for a whole partition: a partition is exempt when
/// either side equals one of them (their square classes come in complementary
/// pairs, so matching one side is matching the partition).
pub fn check_constrained_oddness<F>(
    g: &ResidueGraph,
    filter: F,
    exceptions: &[BTreeSet<VertexLabel>],
) -> Result<bool, GraphError>
where
    F: Fn(&SquareClass, &[VertexLabel], &[VertexLabel]) -> bool,
{
    let m = g.vertex_count();
    if m > 20 {
        return Err(GraphError::TooManyVertices(m));
    }
    // Translate exception label sets into vertex masks; sets mentioning
    // labels absent from this graph can never match.
    let exception_masks: Vec<u64> = exceptions
        .iter()
        .filter_map(|set| {
            let mut mask = 0u64;
            for label in set {
                let idx = g.labels().iter().position(|l| l == label)?;
                mask |= 1 << idx;
            }
            Some(mask)
        })
        .collect();
    let full = full_mask(m);
    let mut side1 = Vec::with_capacity(m);
    let mut side2 = Vec::with_capacity(m);
    for mask in 1..full {
        let comask = full & !mask;
        if exception_masks.iter().any(|&e| e == mask || e == comask) {
            continue;
        }
        side1.clear();
        side2.clear();
        for (i, &label) in g.labels().iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                side1.push(label);
            } else {
                side2.push(label);
            }
        }
        let d = delta_of_mask(g, mask);
        if !filter(&d, &side1, &side2) {
            continue;
        }
        if !is_odd_partition(g, Partition::new(m, mask)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::class_of;

    fn unified(m: i128) -> ResidueGraph {
        build_unified(&class_of(m).unwrap()).unwrap()
    }

    fn arc_labels(g: &ResidueGraph) -> Vec<(i128, i128)> {
        g.arcs()
            .into_iter()
            .map(|(i, j)| (g.labels()[i].value(), g.labels()[j].value()))
            .collect()
    }

    #[test]
    fn unified_minus_21() {
        let g = unified(-21);
        assert_eq!(
            g.labels(),
            &[VertexLabel::MinusOne, VertexLabel::Prime(3), VertexLabel::Prime(7)]
        );
        assert_eq!(arc_labels(&g), vec![(7, -1), (7, 3)]);
        // {7} vs {−1, 3}: both arcs leave 7, an even crossing count.
        assert!(!is_odd_partition(&g, Partition::new(3, 0b100)));
        // {−1} vs {3, 7}: the single arc 7→−1 crosses.
        assert!(is_odd_partition(&g, Partition::new(3, 0b001)));
        assert!(!is_odd_partition(&g, Partition::trivial()));
    }

    #[test]
    fn unified_minus_15_is_arc_free() {
        let g = unified(-15);
        assert!(g.arcs().is_empty(), "5 ≡ 2 (mod 3) cannot be a source");
        assert_eq!(even_partition_count(&g), 4);
        assert!(!is_odd_graph(&g));
    }

    #[test]
    fn unified_single_prime_is_odd() {
        let g = unified(7);
        assert_eq!(g.vertex_count(), 1);
        assert!(is_odd_graph(&g));
        assert_eq!(even_partition_count(&g), 1);
    }

    #[test]
    fn unified_rejects_trivial_class() {
        assert_eq!(build_unified(&class_of(1).unwrap()), Err(GraphError::EmptyVertexSet));
        assert_eq!(build_unified(&class_of(4).unwrap()), Err(GraphError::EmptyVertexSet));
    }

    #[test]
    fn all_sources_graph_of_5() {
        let g = build_all_sources(5).unwrap();
        assert_eq!(
            g.labels(),
            &[VertexLabel::MinusOne, VertexLabel::Prime(3), VertexLabel::Prime(5)]
        );
        // 5 ≡ 1 (mod 4) keeps (−1/5) = 1; 3 is the lone non-residue target.
        assert_eq!(arc_labels(&g), vec![(5, 3)]);
    }

    #[test]
    fn mutual_residue_examples() {
        let g7 = build_mutual_residue(7).unwrap();
        assert_eq!(arc_labels(&g7), vec![(-1, 7), (7, -1)]);
        assert!(is_odd_graph(&g7));
        for n in [5u64, 13] {
            let g = build_mutual_residue(n).unwrap();
            assert!(g.arcs().is_empty(), "(−1/{n}) = 1 leaves no arcs");
            assert!(!is_odd_graph(&g));
        }
    }

    #[test]
    fn companion_constructions_reject_bad_input() {
        for n in [4u64, 9, 15, 1, 50] {
            assert!(matches!(build_all_sources(n), Err(GraphError::BadInput(_))), "n={n}");
            assert!(matches!(build_mutual_residue(n), Err(GraphError::BadInput(_))), "n={n}");
        }
        assert!(matches!(build_all_sources(175), Err(GraphError::BadInput(_))));
    }

    #[test]
    fn partition_canonicalization() {
        let p = Partition::new(3, 0b011);
        assert_eq!(p.side1_mask(), 0b100);
        assert_eq!(Partition::new(3, 0b110).side1_mask(), 0b110);
        assert!(Partition::new(3, 0b111).is_trivial());
    }

    #[test]
    fn partition_delta_products() {
        let g = unified(-21);
        assert_eq!(partition_delta(&g, Partition::new(3, 0b110)).representative(), 21);
        assert_eq!(delta_of_mask(&g, 0b011).representative(), -3);
        assert!(partition_delta(&g, Partition::trivial()).is_one());
    }

    #[test]
    fn synthetic_cycle_counts() {
        // Directed 3-cycle: odd graph, only the trivial partition is even.
        let labels = vec![VertexLabel::Prime(5), VertexLabel::Prime(7), VertexLabel::Prime(11)];
        let adj = MatrixF2::from_rows(3, vec![0b010, 0b100, 0b001]);
        let g = ResidueGraph::from_parts(labels, adj, SourceKind::Unified { m: 385 });
        assert!(is_odd_graph(&g));
        assert_eq!(even_partition_count(&g), 1);
    }

    #[test]
    fn evenness_matches_laplacian_kernel() {
        for m in [-21i128, -15, 7, -105, 1155, -1155, 385] {
            let g = unified(m);
            let l = g.laplacian();
            let vertices = g.vertex_count();
            for mask in 0..(1u64 << vertices) {
                let odd_direct = is_odd_partition(&g, Partition::new(vertices, mask));
                let odd_kernel =
                    l.mul_vec(mask) != 0 && mask != 0 && mask != full_mask(vertices);
                assert_eq!(odd_direct, odd_kernel, "m={m}, mask={mask:b}");
            }
        }
    }

    #[test]
    fn even_count_formula_matches_exhaustive() {
        for m in [-21i128, -15, 7, -105, 1155, -1155, 385, -30030] {
            let g = unified(m);
            let vertices = g.vertex_count();
            // Canonical masks (vertex 0 in side 2) enumerate unordered
            // partitions exactly once, the trivial one included.
            let exhaustive = (0..(1u64 << (vertices - 1)))
                .map(|mask| mask << 1)
                .chain(std::iter::once(0))
                .collect::<std::collections::BTreeSet<u64>>();
            let count = exhaustive
                .into_iter()
                .filter(|&mask| !is_odd_partition(&g, Partition::new(vertices, mask)))
                .count() as u64;
            assert_eq!(count, even_partition_count(&g), "m={m}");
        }
    }

    #[test]
    fn constrained_oddness_respects_filter_and_exceptions() {
        let g = unified(-21);
        // Unconstrained: the partition {7} | {−1,3} is even, so the check fails.
        let all = check_constrained_oddness(&g, |_, _, _| true, &[]).unwrap();
        assert!(!all);
        // Excepting that partition (by either side) rescues the check.
        let exc = vec![BTreeSet::from([VertexLabel::Prime(7)])];
        assert!(check_constrained_oddness(&g, |_, _, _| true, &exc).unwrap());
        let exc_other_side =
            vec![BTreeSet::from([VertexLabel::MinusOne, VertexLabel::Prime(3)])];
        assert!(check_constrained_oddness(&g, |_, _, _| true, &exc_other_side).unwrap());
        // A filter can achieve the same by never selecting the offender.
        let filtered = check_constrained_oddness(
            &g,
            |d, _, _| d.representative().rem_euclid(4) == 1,
            &[],
        )
        .unwrap();
        // d({7}) = 7 ≡ 3 and d({−1,3}) = −3 ≡ 1 (mod 4): the even partition
        // is still selected via its {−1,3} orientation.
        assert!(!filtered);
        // Exceptions referencing labels outside the graph never match.
        let foreign = vec![BTreeSet::from([VertexLabel::Prime(13)])];
        assert!(!check_constrained_oddness(&g, |_, _, _| true, &foreign).unwrap());
    }

    #[test]
    fn constrained_oddness_caps_vertex_count() {
        let primes: Vec<u64> =
            [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]
                .into_iter()
                .collect();
        let labels: Vec<VertexLabel> = primes.into_iter().map(VertexLabel::Prime).collect();
        let m = labels.len();
        let g = ResidueGraph::from_parts(
            labels,
            MatrixF2::zero(m, m),
            SourceKind::Unified { m: 0 },
        );
        assert_eq!(
            check_constrained_oddness(&g, |_, _, _| true, &[]),
            Err(GraphError::TooManyVertices(21))
        );
    }
}
