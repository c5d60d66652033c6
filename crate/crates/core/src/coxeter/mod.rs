//! Coxeter presentations, diagrams and special splittings.
//!
//! A Coxeter system is a generating set together with the symmetric table of
//! pair orders `m_ij`; its diagram has a vertex per generator and an edge
//! labelled `m_ij` exactly when `m_ij` is finite.  A subset of generators
//! that separates the diagram determines special splittings, obtained by
//! distributing the complement's components over two sides.

mod smallness;

pub use smallness::{classify_smallness, SmallnessReason, SmallnessVerdict};

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::bitset::{IndexSet, MAX_INDEX};

/// Order of a product of two generators: a positive integer or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoxeterOrder {
    Finite(u32),
    Infinite,
}

impl CoxeterOrder {
    pub fn is_finite(self) -> bool {
        matches!(self, CoxeterOrder::Finite(_))
    }
}

impl fmt::Display for CoxeterOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterOrder::Finite(m) => write!(f, "{m}"),
            CoxeterOrder::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemError {
    EmptyGeneratorList,
    TooManyGenerators { count: usize },
    DuplicateGenerator { name: String },
    UnknownGenerator { name: String },
    /// `m_ii ≠ 1`, or `m_ij < 2` for `i ≠ j`.
    InvalidOrder { i: usize, j: usize, m: CoxeterOrder },
    /// The same pair was declared twice with different orders.
    ConflictingOrder { i: usize, j: usize },
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::EmptyGeneratorList => f.write_str("a system needs at least one generator"),
            SystemError::TooManyGenerators { count } => {
                write!(f, "{count} generators exceed the supported maximum of {MAX_INDEX}")
            }
            SystemError::DuplicateGenerator { name } => {
                write!(f, "duplicate generator name {name:?}")
            }
            SystemError::UnknownGenerator { name } => {
                write!(f, "order entry names unknown generator {name:?}")
            }
            SystemError::InvalidOrder { i, j, m } => {
                write!(f, "invalid order m[{i}][{j}] = {m}")
            }
            SystemError::ConflictingOrder { i, j } => {
                write!(f, "conflicting orders declared for pair ({i},{j})")
            }
        }
    }
}

impl core::error::Error for SystemError {}

/// A Coxeter system: ordered generator names and the symmetric order table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    generators: Vec<String>,
    orders: Vec<CoxeterOrder>, // k×k row-major
}

impl CoxeterSystem {
    /// Builds a system from declared pair orders; unlisted pairs default to
    /// `∞` and the diagonal to `1`.
    pub fn new(
        generators: Vec<String>,
        pairs: &[(usize, usize, CoxeterOrder)],
    ) -> Result<CoxeterSystem, SystemError> {
        let k = generators.len();
        if k == 0 {
            return Err(SystemError::EmptyGeneratorList);
        }
        if k > MAX_INDEX {
            return Err(SystemError::TooManyGenerators { count: k });
        }
        for (idx, name) in generators.iter().enumerate() {
            if generators[..idx].contains(name) {
                return Err(SystemError::DuplicateGenerator { name: name.clone() });
            }
        }
        let mut orders = vec![CoxeterOrder::Infinite; k * k];
        let mut declared = vec![false; k * k];
        for i in 0..k {
            orders[i * k + i] = CoxeterOrder::Finite(1);
        }
        for &(i, j, m) in pairs {
            if i >= k || j >= k {
                return Err(SystemError::UnknownGenerator {
                    name: String::from("<index out of range>"),
                });
            }
            let valid = if i == j {
                m == CoxeterOrder::Finite(1)
            } else {
                match m {
                    CoxeterOrder::Finite(v) => v >= 2,
                    CoxeterOrder::Infinite => true,
                }
            };
            if !valid {
                return Err(SystemError::InvalidOrder { i, j, m });
            }
            if i == j {
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            if declared[a * k + b] && orders[a * k + b] != m {
                return Err(SystemError::ConflictingOrder { i: a, j: b });
            }
            declared[a * k + b] = true;
            orders[a * k + b] = m;
            orders[b * k + a] = m;
        }
        Ok(CoxeterSystem { generators, orders })
    }

    /// Convenience constructor taking generator names in the pair list.
    pub fn from_named_pairs(
        generators: Vec<String>,
        pairs: &[(&str, &str, CoxeterOrder)],
    ) -> Result<CoxeterSystem, SystemError> {
        let mut resolved = Vec::with_capacity(pairs.len());
        for &(a, b, m) in pairs {
            let i = generators
                .iter()
                .position(|g| g == a)
                .ok_or_else(|| SystemError::UnknownGenerator { name: String::from(a) })?;
            let j = generators
                .iter()
                .position(|g| g == b)
                .ok_or_else(|| SystemError::UnknownGenerator { name: String::from(b) })?;
            resolved.push((i, j, m));
        }
        CoxeterSystem::new(generators, &resolved)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn order(&self, i: usize, j: usize) -> CoxeterOrder {
        self.orders[i * self.rank() + j]
    }

    /// All declared-finite off-diagonal pairs `(i, j, m)` with `i < j`.
    pub fn finite_pairs(&self) -> Vec<(usize, usize, u32)> {
        let k = self.rank();
        let mut out = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                if let CoxeterOrder::Finite(m) = self.order(i, j) {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    /// The Coxeter diagram: an edge labelled `m_ij` for every finite
    /// off-diagonal order.
    pub fn diagram(&self) -> CoxeterDiagram {
        let edges = self
            .finite_pairs()
            .into_iter()
            .map(|(i, j, m)| DiagramEdge { i, j, label: m })
            .collect();
        CoxeterDiagram {
            vertex_names: self.generators.clone(),
            edges,
        }
    }
}

/// A labelled edge of a Coxeter diagram, `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagramEdge {
    pub i: usize,
    pub j: usize,
    pub label: u32,
}

/// A Coxeter diagram: named vertices and finite-labelled edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    vertex_names: Vec<String>,
    edges: Vec<DiagramEdge>,
}

impl CoxeterDiagram {
    pub fn new(vertex_names: Vec<String>, mut edges: Vec<DiagramEdge>) -> CoxeterDiagram {
        for e in &mut edges {
            if e.i > e.j {
                core::mem::swap(&mut e.i, &mut e.j);
            }
        }
        edges.sort();
        edges.dedup();
        CoxeterDiagram { vertex_names, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }

    pub fn label(&self, i: usize, j: usize) -> Option<u32> {
        let (a, b) = (i.min(j), i.max(j));
        self.edges
            .iter()
            .find(|e| e.i == a && e.j == b)
            .map(|e| e.label)
    }

    /// Connected components of the subdiagram induced by `within`, each as an
    /// [`IndexSet`], ordered by smallest member.
    pub fn components_within(&self, within: IndexSet) -> Vec<IndexSet> {
        let mut seen = IndexSet::EMPTY;
        let mut components = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = IndexSet::EMPTY;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if comp.contains(v) {
                    continue;
                }
                comp.insert(v);
                seen.insert(v);
                for e in &self.edges {
                    let other = if e.i == v {
                        e.j
                    } else if e.j == v {
                        e.i
                    } else {
                        continue;
                    };
                    if within.contains(other) && !comp.contains(other) {
                        stack.push(other);
                    }
                }
            }
            components.push(comp);
        }
        components
    }

    /// Connected components of the whole diagram.
    pub fn connected_components(&self) -> Vec<IndexSet> {
        self.components_within(IndexSet::universe(self.vertex_count()))
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }
}

/// True iff deleting `core` leaves the diagram with at least two connected
/// components.
pub fn is_separating(core: IndexSet, diagram: &CoxeterDiagram) -> bool {
    let rest = IndexSet::universe(diagram.vertex_count()).difference(core);
    diagram.components_within(rest).len() >= 2
}

/// A special splitting `⟨plus⟩ ∗_⟨core⟩ ⟨minus⟩` of a Coxeter system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSplitting {
    pub plus: IndexSet,
    pub core: IndexSet,
    pub minus: IndexSet,
    pub trivial: bool,
}

impl SpecialSplitting {
    /// Builds the splitting with sides `plus`, `minus` over their
    /// intersection; `rank` is the full generator count.
    pub fn from_sides(plus: IndexSet, minus: IndexSet, rank: usize) -> SpecialSplitting {
        let full = IndexSet::universe(rank);
        SpecialSplitting {
            plus,
            minus,
            core: plus.intersection(minus),
            trivial: plus == full || minus == full,
        }
    }

    /// Swaps sides so that `plus ≤ minus` lexicographically.
    pub fn canonicalize(&mut self) {
        if self.plus.lex_cmp(self.minus) == Ordering::Greater {
            core::mem::swap(&mut self.plus, &mut self.minus);
        }
    }
}

impl PartialOrd for SpecialSplitting {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpecialSplitting {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.core, self.plus, self.minus, self.trivial).cmp(&(
            other.core,
            other.plus,
            other.minus,
            other.trivial,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingError {
    /// The proposed core does not separate the diagram.
    NotSeparating,
    /// A side of the component assignment is empty.
    EmptySide,
    /// The side assignment references components that do not exist.
    UnknownComponent,
}

impl fmt::Display for SplittingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplittingError::NotSeparating => f.write_str("core does not separate the diagram"),
            SplittingError::EmptySide => f.write_str("a side of the assignment is empty"),
            SplittingError::UnknownComponent => f.write_str("side assignment names a missing component"),
        }
    }
}

impl core::error::Error for SplittingError {}

/// Builds the nontrivial special splitting determined by a separating `core`
/// and an assignment of complement components to side A.
///
/// Components of the complement are indexed in the order returned by
/// [`CoxeterDiagram::components_within`]; `side_a` selects those joining the
/// plus side, the rest join the minus side.
pub fn splitting_from_core(
    core: IndexSet,
    diagram: &CoxeterDiagram,
    side_a: IndexSet,
) -> Result<SpecialSplitting, SplittingError> {
    let rank = diagram.vertex_count();
    let rest = IndexSet::universe(rank).difference(core);
    let components = diagram.components_within(rest);
    if components.len() < 2 {
        return Err(SplittingError::NotSeparating);
    }
    if !side_a.is_subset_of(IndexSet::universe(components.len())) {
        return Err(SplittingError::UnknownComponent);
    }
    if side_a.is_empty() || side_a.len() == components.len() {
        return Err(SplittingError::EmptySide);
    }
    let mut plus = core;
    let mut minus = core;
    for (idx, comp) in components.iter().enumerate() {
        if side_a.contains(idx) {
            plus = plus.union(*comp);
        } else {
            minus = minus.union(*comp);
        }
    }
    let mut splitting = SpecialSplitting::from_sides(plus, minus, rank);
    debug_assert!(!splitting.trivial);
    debug_assert_eq!(splitting.core, core);
    splitting.canonicalize();
    Ok(splitting)
}

/// Enumerates every nontrivial special splitting of the diagram: all
/// separating subsets combined with all two-block partitions of the
/// complement's components, deduplicated up to swapping sides.
///
/// Cost is `2^k` over the rank `k`; intended for small presentations.
pub fn enumerate_special_splittings(diagram: &CoxeterDiagram) -> Vec<SpecialSplitting> {
    let k = diagram.vertex_count();
    let mut found = BTreeSet::new();
    for core_bits in 0..(1u128 << k) {
        let core = IndexSet::from_bits(core_bits as u64);
        let rest = IndexSet::universe(k).difference(core);
        let components = diagram.components_within(rest);
        let n = components.len();
        if n < 2 {
            continue;
        }
        // Fix component 0 on side A to enumerate unordered bipartitions once.
        for assign in 0..(1u64 << (n - 1)) {
            let side_a = IndexSet::from_bits(assign << 1 | 1);
            if let Ok(s) = splitting_from_core(core, diagram, side_a) {
                found.insert(s);
            }
        }
    }
    found.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmalgamationError {
    /// An embedding repeats a vertex.
    NotInjective,
    /// An identified edge pair carries different labels.
    LabelMismatch { c_edge: (usize, usize) },
    /// An edge of the common subdiagram is missing from a factor.
    MissingEdge { c_edge: (usize, usize) },
    /// Embedding length does not match the common subdiagram.
    WrongEmbeddingSize,
    /// Vertex index out of range.
    UnknownVertex,
    /// Distinct non-glued vertices of the factors share a name.
    DuplicateVertexName { name: String },
}

impl fmt::Display for AmalgamationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmalgamationError::NotInjective => f.write_str("embedding is not injective"),
            AmalgamationError::LabelMismatch { c_edge } => {
                write!(f, "identified edge {c_edge:?} has mismatched labels")
            }
            AmalgamationError::MissingEdge { c_edge } => {
                write!(f, "edge {c_edge:?} of the common subdiagram is missing from a factor")
            }
            AmalgamationError::WrongEmbeddingSize => f.write_str("embedding size mismatch"),
            AmalgamationError::UnknownVertex => f.write_str("vertex index out of range"),
            AmalgamationError::DuplicateVertexName { name } => {
                write!(f, "factors share non-glued vertex name {name:?}")
            }
        }
    }
}

impl core::error::Error for AmalgamationError {}

/// Glues `gamma_a` and `gamma_b` along `gamma_c` via the two label-preserving
/// embeddings, producing the diagram of the amalgamated product.
///
/// Vertices keep their `gamma_a` names; non-glued `gamma_b` vertices keep
/// theirs.
pub fn visual_amalgamation(
    gamma_a: &CoxeterDiagram,
    gamma_b: &CoxeterDiagram,
    gamma_c: &CoxeterDiagram,
    embed_a: &[usize],
    embed_b: &[usize],
) -> Result<CoxeterDiagram, AmalgamationError> {
    let kc = gamma_c.vertex_count();
    if embed_a.len() != kc || embed_b.len() != kc {
        return Err(AmalgamationError::WrongEmbeddingSize);
    }
    for (embed, target) in [(embed_a, gamma_a), (embed_b, gamma_b)] {
        for (pos, &v) in embed.iter().enumerate() {
            if v >= target.vertex_count() {
                return Err(AmalgamationError::UnknownVertex);
            }
            if embed[..pos].contains(&v) {
                return Err(AmalgamationError::NotInjective);
            }
        }
        // Embeddings carry edges to edges with equal labels.
        for e in gamma_c.edges() {
            match target.label(embed[e.i], embed[e.j]) {
                None => return Err(AmalgamationError::MissingEdge { c_edge: (e.i, e.j) }),
                Some(l) if l != e.label => {
                    return Err(AmalgamationError::LabelMismatch { c_edge: (e.i, e.j) })
                }
                Some(_) => {}
            }
        }
    }

    // Map B vertices into the quotient: glued ones land on their A image,
    // the rest are appended after all of A.
    let ka = gamma_a.vertex_count();
    let mut names: Vec<String> = gamma_a.vertex_names().to_vec();
    let mut b_map = vec![usize::MAX; gamma_b.vertex_count()];
    for (c, (&va, &vb)) in embed_a.iter().zip(embed_b).enumerate() {
        let _ = c;
        b_map[vb] = va;
    }
    for (vb, slot) in b_map.iter_mut().enumerate() {
        if *slot == usize::MAX {
            let name = gamma_b.vertex_names()[vb].clone();
            if names.contains(&name) {
                return Err(AmalgamationError::DuplicateVertexName { name });
            }
            names.push(name);
            *slot = names.len() - 1;
        }
    }
    let _ = ka;

    let mut labels: alloc::collections::BTreeMap<(usize, usize), u32> =
        alloc::collections::BTreeMap::new();
    for e in gamma_a.edges() {
        labels.insert((e.i, e.j), e.label);
    }
    for e in gamma_b.edges() {
        let (mut u, mut v) = (b_map[e.i], b_map[e.j]);
        if u > v {
            core::mem::swap(&mut u, &mut v);
        }
        if let Some(&existing) = labels.get(&(u, v)) {
            if existing != e.label {
                return Err(AmalgamationError::LabelMismatch { c_edge: (e.i, e.j) });
            }
        } else {
            labels.insert((u, v), e.label);
        }
    }
    let edges = labels
        .into_iter()
        .map(|((i, j), label)| DiagramEdge { i, j, label })
        .collect();
    Ok(CoxeterDiagram::new(names, edges))
}

/// Subdiagram induced by a generator subset, with vertices renumbered in
/// ascending generator order.
pub fn induced_subdiagram(diagram: &CoxeterDiagram, subset: IndexSet) -> CoxeterDiagram {
    let verts: Vec<usize> = subset.iter().collect();
    let names = verts
        .iter()
        .map(|&v| diagram.vertex_names()[v].clone())
        .collect();
    let mut edges = Vec::new();
    for e in diagram.edges() {
        if subset.contains(e.i) && subset.contains(e.j) {
            let i = verts.iter().position(|&v| v == e.i).unwrap();
            let j = verts.iter().position(|&v| v == e.j).unwrap();
            edges.push(DiagramEdge { i, j, label: e.label });
        }
    }
    CoxeterDiagram::new(names, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn quadrilateral() -> CoxeterSystem {
        CoxeterSystem::from_named_pairs(
            names(&["s1", "s2", "s3", "s4"]),
            &[
                ("s1", "s2", CoxeterOrder::Finite(2)),
                ("s2", "s3", CoxeterOrder::Finite(4)),
                ("s3", "s4", CoxeterOrder::Finite(3)),
                ("s4", "s1", CoxeterOrder::Finite(4)),
            ],
        )
        .unwrap()
    }

    fn path3() -> CoxeterSystem {
        CoxeterSystem::from_named_pairs(
            names(&["s1", "s2", "s3"]),
            &[
                ("s1", "s2", CoxeterOrder::Finite(3)),
                ("s2", "s3", CoxeterOrder::Finite(3)),
            ],
        )
        .unwrap()
    }

    fn path4() -> CoxeterSystem {
        CoxeterSystem::from_named_pairs(
            names(&["s1", "s2", "s3", "s4"]),
            &[
                ("s1", "s2", CoxeterOrder::Finite(3)),
                ("s2", "s3", CoxeterOrder::Finite(3)),
                ("s3", "s4", CoxeterOrder::Finite(3)),
            ],
        )
        .unwrap()
    }

    fn set(indices: &[usize]) -> IndexSet {
        indices.iter().copied().collect()
    }

    #[test]
    fn quadrilateral_system_and_diagram() {
        let sys = quadrilateral();
        assert_eq!(sys.rank(), 4);
        assert_eq!(sys.order(0, 1), CoxeterOrder::Finite(2));
        assert_eq!(sys.order(0, 2), CoxeterOrder::Infinite);
        let diagram = sys.diagram();
        assert_eq!(diagram.edges().len(), 4);
        assert_eq!(diagram.label(1, 2), Some(4));
        assert_eq!(diagram.label(0, 2), None);
    }

    #[test]
    fn rank_one_system() {
        let sys = CoxeterSystem::new(names(&["s"]), &[]).unwrap();
        assert_eq!(sys.rank(), 1);
        let d = sys.diagram();
        assert_eq!(d.vertex_count(), 1);
        assert!(d.edges().is_empty());
    }

    #[test]
    fn invalid_orders_rejected() {
        let err = CoxeterSystem::from_named_pairs(
            names(&["a", "b"]),
            &[("a", "b", CoxeterOrder::Finite(1))],
        )
        .unwrap_err();
        assert!(matches!(err, SystemError::InvalidOrder { .. }));
        let err = CoxeterSystem::new(names(&["a", "a"]), &[]).unwrap_err();
        assert!(matches!(err, SystemError::DuplicateGenerator { .. }));
        let err = CoxeterSystem::new(vec![], &[]).unwrap_err();
        assert!(matches!(err, SystemError::EmptyGeneratorList));
        // Declaring the diagonal as 1 is legal.
        CoxeterSystem::new(names(&["a", "b"]), &[(0, 0, CoxeterOrder::Finite(1))]).unwrap();
    }

    #[test]
    fn infinite_pair_gives_isolated_vertices() {
        let sys = CoxeterSystem::new(names(&["a", "b"]), &[]).unwrap();
        let d = sys.diagram();
        assert!(d.edges().is_empty());
        assert_eq!(d.connected_components().len(), 2);
    }

    #[test]
    fn path_diagram_shape() {
        let d = path3().diagram();
        assert_eq!(d.edges().len(), 2);
        assert_eq!(d.label(0, 1), Some(3));
        assert_eq!(d.label(1, 2), Some(3));
        assert_eq!(d.label(0, 2), None);
        assert!(d.is_connected());
    }

    #[test]
    fn separation_examples() {
        let p3 = path3().diagram();
        assert!(is_separating(set(&[1]), &p3));
        let cyc = quadrilateral().diagram();
        assert!(!is_separating(set(&[0]), &cyc));
        let p4 = path4().diagram();
        assert!(is_separating(set(&[0, 2]), &p4));
    }

    #[test]
    fn splitting_from_core_examples() {
        let p4 = path4().diagram();
        let s = splitting_from_core(set(&[0, 2]), &p4, set(&[0])).unwrap();
        assert_eq!(s.plus, set(&[0, 1, 2]));
        assert_eq!(s.core, set(&[0, 2]));
        assert_eq!(s.minus, set(&[0, 2, 3]));
        assert!(!s.trivial);

        let p3 = path3().diagram();
        let s = splitting_from_core(set(&[1]), &p3, set(&[0])).unwrap();
        assert_eq!((s.plus, s.core, s.minus), (set(&[0, 1]), set(&[1]), set(&[1, 2])));

        let cyc = quadrilateral().diagram();
        assert_eq!(
            splitting_from_core(set(&[0]), &cyc, set(&[0])),
            Err(SplittingError::NotSeparating)
        );
        assert_eq!(
            splitting_from_core(set(&[1]), &p3, IndexSet::EMPTY),
            Err(SplittingError::EmptySide)
        );
    }

    #[test]
    fn enumerate_path3() {
        let all = enumerate_special_splittings(&path3().diagram());
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].core, set(&[1]));
    }

    #[test]
    fn enumerate_single_edge() {
        let sys = CoxeterSystem::from_named_pairs(
            names(&["a", "b"]),
            &[("a", "b", CoxeterOrder::Finite(3))],
        )
        .unwrap();
        assert!(enumerate_special_splittings(&sys.diagram()).is_empty());
    }

    #[test]
    fn enumerate_quadrilateral_cores() {
        let all = enumerate_special_splittings(&quadrilateral().diagram());
        let cores: BTreeSet<IndexSet> = all.iter().map(|s| s.core).collect();
        assert_eq!(cores, BTreeSet::from([set(&[0, 2]), set(&[1, 3])]));
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn enumerate_path4_contains_example() {
        let all = enumerate_special_splittings(&path4().diagram());
        assert!(all.iter().any(|s| s.plus == set(&[0, 1, 2])
            && s.core == set(&[0, 2])
            && s.minus == set(&[0, 2, 3])));
    }

    #[test]
    fn amalgamation_glues_edges_along_vertex() {
        let ga = CoxeterDiagram::new(
            names(&["a", "b"]),
            vec![DiagramEdge { i: 0, j: 1, label: 3 }],
        );
        let gb = CoxeterDiagram::new(
            names(&["c", "d"]),
            vec![DiagramEdge { i: 0, j: 1, label: 4 }],
        );
        let gc = CoxeterDiagram::new(names(&["v"]), vec![]);
        let glued = visual_amalgamation(&ga, &gb, &gc, &[1], &[0]).unwrap();
        assert_eq!(glued.vertex_count(), 3);
        assert_eq!(glued.label(0, 1), Some(3));
        assert_eq!(glued.label(1, 2), Some(4));
        assert_eq!(glued.label(0, 2), None);
    }

    #[test]
    fn amalgamation_identity() {
        let g = CoxeterDiagram::new(
            names(&["a", "b"]),
            vec![DiagramEdge { i: 0, j: 1, label: 5 }],
        );
        let glued = visual_amalgamation(&g, &g, &g, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(glued, g);
    }

    #[test]
    fn amalgamation_rejects_mismatch() {
        let ga = CoxeterDiagram::new(
            names(&["a", "b"]),
            vec![DiagramEdge { i: 0, j: 1, label: 3 }],
        );
        let gb = CoxeterDiagram::new(
            names(&["c", "d"]),
            vec![DiagramEdge { i: 0, j: 1, label: 4 }],
        );
        let gc = CoxeterDiagram::new(names(&["u", "v"]), vec![]);
        assert!(matches!(
            visual_amalgamation(&ga, &gb, &gc, &[0, 1], &[0, 1]),
            Err(AmalgamationError::LabelMismatch { .. })
        ));
        assert!(matches!(
            visual_amalgamation(&ga, &gb, &gc, &[0, 0], &[0, 1]),
            Err(AmalgamationError::NotInjective)
        ));
    }

    #[test]
    fn splitting_round_trips_through_amalgamation() {
        for sys in [path3(), path4(), quadrilateral()] {
            let diagram = sys.diagram();
            for s in enumerate_special_splittings(&diagram) {
                let ga = induced_subdiagram(&diagram, s.plus);
                let gb = induced_subdiagram(&diagram, s.minus);
                let gc = induced_subdiagram(&diagram, s.core);
                let embed_a: Vec<usize> = s
                    .core
                    .iter()
                    .map(|v| s.plus.iter().position(|p| p == v).unwrap())
                    .collect();
                let embed_b: Vec<usize> = s
                    .core
                    .iter()
                    .map(|v| s.minus.iter().position(|p| p == v).unwrap())
                    .collect();
                let glued = visual_amalgamation(&ga, &gb, &gc, &embed_a, &embed_b).unwrap();
                // Same vertex set and same labelled edges as the original.
                let mut expected_names: Vec<String> = diagram.vertex_names().to_vec();
                let mut got_names = glued.vertex_names().to_vec();
                expected_names.sort();
                got_names.sort();
                assert_eq!(expected_names, got_names);
                for e in diagram.edges() {
                    let ni = &diagram.vertex_names()[e.i];
                    let nj = &diagram.vertex_names()[e.j];
                    let gi = glued.vertex_names().iter().position(|n| n == ni).unwrap();
                    let gj = glued.vertex_names().iter().position(|n| n == nj).unwrap();
                    assert_eq!(glued.label(gi, gj), Some(e.label));
                }
                assert_eq!(glued.edges().len(), diagram.edges().len());
            }
        }
    }
}
