//! Finite metric trees, vertex labellings and the useful-edge machinery.
//!
//! A labelling assigns each vertex a subset of `{0, ..., N-1}`.  A labelling
//! system additionally satisfies connectedness (a label shared by two
//! vertices persists along the path between them) and surjectivity (every
//! label occurs).  Removing an edge splits the tree in two; the edge is
//! useless when one side already carries every label, and useful edges are
//! the ones that yield nontrivial splittings downstream.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::IndexSet;

#[derive(Clone, Debug, PartialEq)]
pub enum TreeError {
    VertexOutOfRange { vertex: usize },
    NonPositiveLength { edge: usize },
    /// Edge count must be `|V| - 1`.
    WrongEdgeCount { vertices: usize, edges: usize },
    NotConnected,
    LabelOutOfRange { vertex: usize, label: usize },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            TreeError::NonPositiveLength { edge } => {
                write!(f, "edge {edge} has non-positive length")
            }
            TreeError::WrongEdgeCount { vertices, edges } => {
                write!(f, "{vertices} vertices need {} edges, got {edges}", vertices.saturating_sub(1))
            }
            TreeError::NotConnected => f.write_str("edge set does not connect the vertices"),
            TreeError::LabelOutOfRange { vertex, label } => {
                write!(f, "vertex {vertex} carries label {label} outside the universe")
            }
        }
    }
}

impl core::error::Error for TreeError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// A finite metric tree on vertices `0..n` with positive edge lengths.
///
/// The empty and single-vertex trees are permitted; every edge-quantified
/// statement about them holds vacuously.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    edges: Vec<TreeEdge>,
    adjacency: Vec<Vec<(usize, usize)>>, // vertex -> (neighbour, edge id)
}

impl MetricTree {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<MetricTree, TreeError> {
        if vertex_count == 0 {
            if edges.is_empty() {
                return Ok(MetricTree { edges: Vec::new(), adjacency: Vec::new() });
            }
            return Err(TreeError::WrongEdgeCount { vertices: 0, edges: edges.len() });
        }
        if edges.len() != vertex_count - 1 {
            return Err(TreeError::WrongEdgeCount { vertices: vertex_count, edges: edges.len() });
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut list = Vec::with_capacity(edges.len());
        for (id, &(u, v, length)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(TreeError::VertexOutOfRange { vertex: u.max(v) });
            }
            if !(length > 0.0) {
                return Err(TreeError::NonPositiveLength { edge: id });
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            list.push(TreeEdge { u, v, length });
        }
        let tree = MetricTree { edges: list, adjacency };
        // Connected with |V|-1 edges ⇒ acyclic.
        let mut seen = vec![false; vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &tree.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        if count != vertex_count {
            return Err(TreeError::NotConnected);
        }
        Ok(tree)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> TreeEdge {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Valence-one vertices.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.degree(v) == 1).collect()
    }

    fn parents_from(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &(u, e) in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, e));
                    stack.push(u);
                }
            }
        }
        parent
    }

    /// The unique simple path from `a` to `b`, as vertices; `path(a,a) = [a]`.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let parent = self.parents_from(a);
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            let (p, _) = parent[cur].expect("tree is connected");
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Edge ids along the path from `a` to `b`.
    pub fn path_edges(&self, a: usize, b: usize) -> Vec<usize> {
        let parent = self.parents_from(a);
        let mut out = Vec::new();
        let mut cur = b;
        while cur != a {
            let (p, e) = parent[cur].expect("tree is connected");
            out.push(e);
            cur = p;
        }
        out.reverse();
        out
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.path_edges(a, b)
            .into_iter()
            .map(|e| self.edges[e].length)
            .sum()
    }

    /// Vertices of the two components obtained by removing edge `id`:
    /// first the side of `edge.u`, then the side of `edge.v`.
    pub fn split_at(&self, id: usize) -> (Vec<usize>, Vec<usize>) {
        let e = self.edges[id];
        let collect = |start: usize| {
            let mut seen = vec![false; self.vertex_count()];
            let mut out = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                out.push(v);
                for &(u, eid) in &self.adjacency[v] {
                    if eid != id && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.sort_unstable();
            out
        };
        (collect(e.u), collect(e.v))
    }
}

/// An edge with a chosen direction; `T⁺` is the side the edge points toward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedEdge {
    pub edge: usize,
    /// Oriented from `u` toward `v` when true.
    pub forward: bool,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> OrientedEdge {
        OrientedEdge { edge, forward: true }
    }

    pub fn reversed(self) -> OrientedEdge {
        OrientedEdge { edge: self.edge, forward: !self.forward }
    }
}

/// Vertex sets `(T⁺(e), T⁻(e))` of an oriented edge.
pub fn edge_sides(tree: &MetricTree, e: OrientedEdge) -> (Vec<usize>, Vec<usize>) {
    let (u_side, v_side) = tree.split_at(e.edge);
    if e.forward {
        (v_side, u_side)
    } else {
        (u_side, v_side)
    }
}

/// A vertex labelling over the universe `{0, ..., universe-1}`.
///
/// Vertices may carry zero or more labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Labelling {
    sets: Vec<IndexSet>,
    universe: usize,
}

impl Labelling {
    pub fn new(sets: Vec<IndexSet>, universe: usize) -> Result<Labelling, TreeError> {
        for (vertex, set) in sets.iter().enumerate() {
            if !set.is_subset_of(IndexSet::universe(universe)) {
                let label = set.difference(IndexSet::universe(universe)).min().unwrap();
                return Err(TreeError::LabelOutOfRange { vertex, label });
            }
        }
        Ok(Labelling { sets, universe })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn full_set(&self) -> IndexSet {
        IndexSet::universe(self.universe)
    }

    pub fn get(&self, v: usize) -> IndexSet {
        self.sets[v]
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }
}

/// Canonical extension: vertex `x` additionally receives every label shared
/// by the endpoints of some path through `x`.
///
/// Computed per label as the Steiner span (minimal subtree) of the vertices
/// carrying it, which agrees with the pairwise-path definition and runs in
/// `O(N·|T|)`.
pub fn canonical_extension(tree: &MetricTree, lab: &Labelling) -> Labelling {
    let n = tree.vertex_count();
    let mut sets = lab.sets().to_vec();
    for label in 0..lab.universe() {
        let members: Vec<usize> = (0..n).filter(|&v| lab.get(v).contains(label)).collect();
        if members.len() < 2 {
            continue;
        }
        // Prune leaves not carrying the label until only the span remains.
        let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
        let mut in_span = vec![true; n];
        let mut is_member = vec![false; n];
        for &m in &members {
            is_member[m] = true;
        }
        let mut queue: Vec<usize> = (0..n)
            .filter(|&v| degree[v] <= 1 && !is_member[v])
            .collect();
        while let Some(v) = queue.pop() {
            if !in_span[v] || is_member[v] || degree[v] > 1 {
                continue;
            }
            in_span[v] = false;
            for &(u, _) in tree.neighbors(v) {
                if in_span[u] {
                    degree[u] -= 1;
                    if degree[u] <= 1 && !is_member[u] {
                        queue.push(u);
                    }
                }
            }
        }
        for v in 0..n {
            if in_span[v] {
                sets[v].insert(label);
            }
        }
    }
    Labelling { sets, universe: lab.universe() }
}

/// Why a labelling fails to be a labelling system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabellingViolation {
    /// `label ∈ Lab(a) ∩ Lab(b)` but `label ∉ Lab(x)` for `x ∈ [ab]`.
    Connectedness { a: usize, b: usize, x: usize, label: usize },
    /// `label` occurs at no vertex.
    MissingLabel { label: usize },
}

/// Checks Properties A (connectedness) and B (surjectivity), returning a
/// witness on failure.
pub fn is_labelling_system(tree: &MetricTree, lab: &Labelling) -> Result<(), LabellingViolation> {
    let n = tree.vertex_count();
    for label in 0..lab.universe() {
        let members: Vec<usize> = (0..n).filter(|&v| lab.get(v).contains(label)).collect();
        if members.len() < 2 {
            continue;
        }
        // The label class must span a connected subtree.
        let a = members[0];
        for &b in &members[1..] {
            let path = tree.path(a, b);
            if let Some(&x) = path.iter().find(|&&x| !lab.get(x).contains(label)) {
                return Err(LabellingViolation::Connectedness { a, b, x, label });
            }
        }
    }
    let mut seen = IndexSet::EMPTY;
    for v in 0..n {
        seen = seen.union(lab.get(v));
    }
    if let Some(label) = lab.full_set().difference(seen).min() {
        return Err(LabellingViolation::MissingLabel { label });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Useful,
    Useless,
}

/// Per-edge side label unions `(toward u, toward v)` for every edge at once.
pub fn side_unions(tree: &MetricTree, lab: &Labelling) -> Vec<(IndexSet, IndexSet)> {
    let n = tree.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    // Iterative DFS from vertex 0: `down[v]` is the label union of the
    // subtree under `v`, `up[v]` the union of everything else.
    let root = 0usize;
    let mut order = Vec::with_capacity(n);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(u, e) in tree.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some((v, e));
                stack.push(u);
            }
        }
    }
    let mut down: Vec<IndexSet> = (0..n).map(|v| lab.get(v)).collect();
    for &v in order.iter().rev() {
        if let Some((p, _)) = parent[v] {
            down[p] = down[p].union(down[v]);
        }
    }
    let mut up: Vec<IndexSet> = vec![IndexSet::EMPTY; n];
    for &v in &order {
        let acc = up[v].union(lab.get(v));
        // Children of v see `acc` plus the downs of their siblings.
        let children: Vec<usize> = tree
            .neighbors(v)
            .iter()
            .filter(|&&(u, _)| parent[u].map(|(p, _)| p) == Some(v))
            .map(|&(u, _)| u)
            .collect();
        for &c in &children {
            let mut other = acc;
            for &s in &children {
                if s != c {
                    other = other.union(down[s]);
                }
            }
            up[c] = other;
        }
    }
    tree.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            // One endpoint is the parent of the other.
            let child = if parent[e.u].map(|(_, pe)| pe) == Some(id) {
                e.u
            } else {
                e.v
            };
            if child == e.u {
                (down[child], up[child])
            } else {
                (up[child], down[child])
            }
        })
        .collect()
}

/// Classifies one oriented edge; useless iff either side carries the full
/// label set.  The outcome is orientation-independent.
///
/// Computes just this edge's sides directly, independently of the rerooting
/// sweep used by [`useful_subtree`].
pub fn classify_edge(tree: &MetricTree, lab: &Labelling, e: OrientedEdge) -> EdgeClass {
    let (plus, minus) = edge_sides(tree, e);
    let union = |side: &[usize]| {
        side.iter()
            .fold(IndexSet::EMPTY, |acc, &v| acc.union(lab.get(v)))
    };
    let full = lab.full_set();
    if union(&plus) == full || union(&minus) == full {
        EdgeClass::Useless
    } else {
        EdgeClass::Useful
    }
}

/// First vertex carrying every label, in identifier order.
///
/// For a labelling system this exists iff every edge is useless (the tree
/// Helly theorem), and `None` is returned iff some edge is useful.
pub fn full_vertex(tree: &MetricTree, lab: &Labelling) -> Option<usize> {
    let full = lab.full_set();
    (0..tree.vertex_count()).find(|&v| lab.get(v) == full)
}

/// The subtree formed by the useful edges (possibly empty).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UsefulSubtree {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl UsefulSubtree {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Union of the useful edges; connected for every labelling system.
pub fn useful_subtree(tree: &MetricTree, lab: &Labelling) -> UsefulSubtree {
    let unions = side_unions(tree, lab);
    let full = lab.full_set();
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    for (id, e) in tree.edges().iter().enumerate() {
        let (a, b) = unions[id];
        if a != full && b != full {
            edges.push(id);
            vertices.push(e.u);
            vertices.push(e.v);
        }
    }
    vertices.sort_unstable();
    vertices.dedup();
    UsefulSubtree { edges, vertices }
}
