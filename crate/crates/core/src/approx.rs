//! Approximating trees for finite point sets in `H^n` and their shadows.
//!
//! For a finite set `X` with `|X| ≤ 2^c + 2`, an approximating tree is a
//! finite metric tree `T` with a map `p: X → V(T)` such that every leaf is a
//! site image and `d(x,y) - 2cδ ≤ d_T(p(x),p(y)) ≤ d(x,y)` for all pairs,
//! with `δ = ln 3`.  The construction glues the radial segments `[w, x_i]`
//! along regularised Gromov products: raw products are replaced by their
//! widest-path (bottleneck) closure over all chains, computed from a maximum
//! spanning tree, which is what makes the upper inequality hold exactly
//! rather than only up to `δ` per merge.  Every vertex carries a shadow
//! witness in `H^n`: sites map to themselves and junction vertices carry the
//! internal point of the triangle whose tripod branches there.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hyperbolic::{dist, geodesic_point, GeodesicSegment, HPoint};
use crate::trees::{MetricTree, TreeError};
use crate::{Tolerances, DELTA};

#[derive(Clone, Debug, PartialEq)]
pub enum ApproxError {
    EmptySiteSet,
    /// Post-construction verification of the tree invariants failed; this
    /// signals a bug or numerically hostile input, not a bad call.
    GatConstructionFailed { detail: String },
    PointNotOnTriangle,
    PointNotOnHull,
    Tree(TreeError),
}

impl fmt::Display for ApproxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxError::EmptySiteSet => f.write_str("site set is empty"),
            ApproxError::GatConstructionFailed { detail } => {
                write!(f, "approximating-tree invariants failed: {detail}")
            }
            ApproxError::PointNotOnTriangle => f.write_str("point does not lie on the triangle"),
            ApproxError::PointNotOnHull => f.write_str("point does not lie on the hull"),
            ApproxError::Tree(e) => write!(f, "tree construction failed: {e}"),
        }
    }
}

impl core::error::Error for ApproxError {}

impl From<TreeError> for ApproxError {
    fn from(e: TreeError) -> Self {
        ApproxError::Tree(e)
    }
}

/// One geodesic segment of a quasi-convex hull, joining sites `i < j`.
#[derive(Clone, Debug)]
pub struct HullSegment {
    pub i: usize,
    pub j: usize,
    pub segment: GeodesicSegment,
}

/// The quasi-convex hull of a finite site set: all pairwise geodesic
/// segments.
#[derive(Clone, Debug)]
pub struct Hull {
    sites: Vec<HPoint>,
    segments: Vec<HullSegment>,
}

impl Hull {
    pub fn sites(&self) -> &[HPoint] {
        &self.sites
    }

    pub fn segments(&self) -> &[HullSegment] {
        &self.segments
    }
}

/// Builds the hull of `sites`; `C(|X|, 2)` segments.
pub fn build_hull(sites: Vec<HPoint>) -> Result<Hull, ApproxError> {
    if sites.is_empty() {
        return Err(ApproxError::EmptySiteSet);
    }
    let mut segments = Vec::new();
    for i in 0..sites.len() {
        for j in (i + 1)..sites.len() {
            segments.push(HullSegment {
                i,
                j,
                segment: GeodesicSegment::new(sites[i].clone(), sites[j].clone()),
            });
        }
    }
    Ok(Hull { sites, segments })
}

/// Smallest positive integer `c` with `size_x ≤ 2^c + 2`.
pub fn c_parameter(size_x: usize) -> u32 {
    let mut c = 1u32;
    while c < 63 && size_x > (1usize << c) + 2 {
        c += 1;
    }
    c
}

/// An approximating tree together with the site map and shadow witnesses.
#[derive(Clone, Debug)]
pub struct ApproximatingTree {
    tree: MetricTree,
    sites: Vec<HPoint>,
    site_map: Vec<usize>,
    witnesses: Vec<HPoint>,
    witness_site: Vec<Option<usize>>,
    c: u32,
    delta: f64,
    distinct_sites: usize,
}

impl ApproximatingTree {
    pub fn tree(&self) -> &MetricTree {
        &self.tree
    }

    /// The original sites, in input order (duplicates included).
    pub fn sites(&self) -> &[HPoint] {
        &self.sites
    }

    /// Vertex carrying site `i`.
    pub fn site_vertex(&self, i: usize) -> usize {
        self.site_map[i]
    }

    pub fn site_map(&self) -> &[usize] {
        &self.site_map
    }

    /// Shadow witness of a vertex: the site itself for site vertices, an
    /// internal point of a hull triangle for junction vertices.
    pub fn witness(&self, v: usize) -> &HPoint {
        &self.witnesses[v]
    }

    /// Site index whose point is the witness of `v`, when `v` is a site
    /// vertex.
    pub fn witness_site(&self, v: usize) -> Option<usize> {
        self.witness_site[v]
    }

    /// True when site `i` is the chosen preimage of its vertex.
    pub fn site_in_witness_set(&self, i: usize) -> bool {
        self.witness_site[self.site_map[i]] == Some(i)
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of distinct sites after merging coincident ones.
    pub fn distinct_sites(&self) -> usize {
        self.distinct_sites
    }

    /// Verifies the defining inequalities and the leaf condition, returning
    /// a description of the first violation.
    pub fn verify(&self) -> Result<(), String> {
        let n = self.sites.len();
        let two_c_delta = 2.0 * self.c as f64 * self.delta;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist(&self.sites[i], &self.sites[j]);
                let dt = self.tree.distance(self.site_map[i], self.site_map[j]);
                let slack = 1e-7 * (1.0 + d);
                if dt > d + slack {
                    return Err(format!(
                        "upper inequality fails for sites {i},{j}: d_T = {dt}, d = {d}"
                    ));
                }
                if dt < d - two_c_delta - slack {
                    return Err(format!(
                        "lower inequality fails for sites {i},{j}: d_T = {dt}, d - 2cδ = {}",
                        d - two_c_delta
                    ));
                }
            }
        }
        for leaf in self.tree.leaves() {
            if !self.site_map.contains(&leaf) {
                return Err(format!("leaf {leaf} is not a site image"));
            }
        }
        for v in 0..self.tree.vertex_count() {
            for u in 0..v {
                if dist(&self.witnesses[u], &self.witnesses[v]) <= 1e-13 {
                    return Err(format!("witnesses of vertices {u} and {v} coincide"));
                }
            }
        }
        Ok(())
    }
}

/// Maximum spanning tree of the complete graph on `0..n` with symmetric
/// weights `w(i,j)`; returns edges `(i, j, weight)`.
fn maximum_spanning_tree(n: usize, weight: impl Fn(usize, usize) -> f64) -> Vec<(usize, usize, f64)> {
    if n <= 1 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::NEG_INFINITY; n];
    let mut best_from = vec![0usize; n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = weight(0, j);
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = None;
        for j in 0..n {
            if !in_tree[j] {
                match pick {
                    None => pick = Some(j),
                    Some(p) if best[j] > best[p] => pick = Some(j),
                    _ => {}
                }
            }
        }
        let j = pick.expect("vertices remain");
        in_tree[j] = true;
        edges.push((best_from[j].min(j), best_from[j].max(j), best[j]));
        for k in 0..n {
            if !in_tree[k] {
                let w = weight(j, k);
                if w > best[k] {
                    best[k] = w;
                    best_from[k] = j;
                }
            }
        }
    }
    edges
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn join(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[rb] = ra;
        ra
    }
}

/// Builds the approximating tree of `sites`.
///
/// Coincident sites (within `tol.point`) are merged onto a representative
/// before construction; the site map records both.  Construction is
/// deterministic in the input order.
pub fn build_tree(sites: &[HPoint], tol: &Tolerances) -> Result<ApproximatingTree, ApproxError> {
    if sites.is_empty() {
        return Err(ApproxError::EmptySiteSet);
    }
    let snap = tol.point;

    // Merge coincident sites.
    let mut reps: Vec<usize> = Vec::new();
    let mut alias: Vec<usize> = Vec::with_capacity(sites.len());
    for (i, site) in sites.iter().enumerate() {
        match reps.iter().position(|&r| dist(site, &sites[r]) <= tol.point) {
            Some(pos) => alias.push(pos),
            None => {
                reps.push(i);
                alias.push(reps.len() - 1);
            }
        }
    }
    let m = reps.len();
    let c = c_parameter(m);

    // Vertex 0 is the base site; vertices 1..m are the remaining site
    // leaves; junction vertices follow.
    let base = &sites[reps[0]];
    let mut witnesses: Vec<HPoint> = vec![base.clone()];
    let mut witness_site: Vec<Option<usize>> = vec![Some(reps[0])];
    let mut heights: Vec<f64> = vec![0.0];
    let mut junction_origin: Vec<Option<(usize, f64)>> = vec![None];
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut rep_vertex: Vec<usize> = vec![0];

    let radial: Vec<f64> = (0..m).map(|t| dist(base, &sites[reps[t]])).collect();
    for t in 1..m {
        witnesses.push(sites[reps[t]].clone());
        witness_site.push(Some(reps[t]));
        heights.push(radial[t]);
        junction_origin.push(None);
        rep_vertex.push(t);
    }

    if m > 1 {
        // Gromov products with base `w`, clamped into their valid range.
        let product = |a: usize, b: usize| -> f64 {
            let d = dist(&sites[reps[a]], &sites[reps[b]]);
            let g = 0.5 * (radial[a] + radial[b] - d);
            g.clamp(0.0, radial[a].min(radial[b]))
        };
        // Bottleneck regularisation: merges happen along the maximum
        // spanning tree, processed by decreasing product.
        let mut mst = maximum_spanning_tree(m - 1, |a, b| product(a + 1, b + 1));
        for e in &mut mst {
            e.0 += 1;
            e.1 += 1;
        }
        mst.sort_by(|a, b| {
            b.2.partial_cmp(&a.2)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.0.cmp(&b.0))
                .then(a.1.cmp(&b.1))
        });

        let mut clusters = UnionFind::new(m);
        let mut cluster_root: Vec<usize> = (0..m).collect(); // rep cluster -> vertex id
        let min_len = snap;

        for &(a, b, g) in &mst {
            let (ra, rb) = (clusters.find(a), clusters.find(b));
            let (va, vb) = (cluster_root[ra], cluster_root[rb]);
            let (ha, hb) = (heights[va], heights[vb]);
            let g = g.min(ha).min(hb).max(0.0);
            let junction = if ha - g <= snap {
                if vb != va {
                    edges.push((va, vb, (hb - g).max(min_len)));
                }
                va
            } else if hb - g <= snap {
                edges.push((vb, va, (ha - g).max(min_len)));
                vb
            } else {
                // New junction at height g; its witness is the internal
                // point of the triangle [w, x_a, x_b] on the side [w, x_b].
                let j = a.max(b);
                let frac = if radial[j] > 0.0 { g / radial[j] } else { 0.0 };
                let wit = geodesic_point(base, &sites[reps[j]], frac);
                let v = witnesses.len();
                witnesses.push(wit);
                witness_site.push(None);
                heights.push(g);
                junction_origin.push(Some((j, g)));
                edges.push((v, va, ha - g));
                edges.push((v, vb, hb - g));
                v
            };
            let joined = clusters.join(ra, rb);
            cluster_root[joined] = junction;
        }

        // Attach the final cluster to the base vertex.
        let root = cluster_root[clusters.find(1)];
        if root != 0 {
            edges.push((0, root, heights[root].max(min_len)));
        }
    }

    // Nudge any junction witness that collides with an earlier witness.
    for v in 0..witnesses.len() {
        if let Some((j, g)) = junction_origin[v] {
            let mut attempt = 0u32;
            while witnesses[..v]
                .iter()
                .any(|w| dist(w, &witnesses[v]) <= tol.point)
                && attempt < 32
            {
                attempt += 1;
                let shifted = (g + attempt as f64 * 1e-7).min(radial[j]);
                let frac = if radial[j] > 0.0 { shifted / radial[j] } else { 0.0 };
                witnesses[v] = geodesic_point(base, &sites[reps[j]], frac);
            }
        }
    }

    let tree = MetricTree::new(witnesses.len(), edges)?;
    let site_map: Vec<usize> = alias.iter().map(|&pos| rep_vertex[pos]).collect();
    let result = ApproximatingTree {
        tree,
        sites: sites.to_vec(),
        site_map,
        witnesses,
        witness_site,
        c,
        delta: DELTA,
        distinct_sites: m,
    };
    result
        .verify()
        .map_err(|detail| ApproxError::GatConstructionFailed { detail })?;
    Ok(result)
}

/// A point of a metric tree: a vertex or an interior edge point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TreePoint {
    Vertex(usize),
    OnEdge { edge: usize, from_u: f64 },
}

/// Distance between two tree points.
pub fn tree_point_distance(tree: &MetricTree, p: TreePoint, q: TreePoint) -> f64 {
    let anchors = |tp: TreePoint| -> ((usize, f64), (usize, f64)) {
        match tp {
            TreePoint::Vertex(v) => ((v, 0.0), (v, 0.0)),
            TreePoint::OnEdge { edge, from_u } => {
                let e = tree.edge(edge);
                ((e.u, from_u), (e.v, e.length - from_u))
            }
        }
    };
    if let (TreePoint::OnEdge { edge: e1, from_u: s }, TreePoint::OnEdge { edge: e2, from_u: r }) =
        (p, q)
    {
        if e1 == e2 {
            return libm::fabs(s - r);
        }
    }
    let ((u1, du1), (v1, dv1)) = anchors(p);
    let ((u2, du2), (v2, dv2)) = anchors(q);
    let mut best = f64::INFINITY;
    for &(a, da) in &[(u1, du1), (v1, dv1)] {
        for &(b, db) in &[(u2, du2), (v2, dv2)] {
            best = best.min(da + tree.distance(a, b) + db);
        }
    }
    best
}

/// The point at distance `target` from `from` along the tree path to `to`.
pub fn locate_at_distance(tree: &MetricTree, from: usize, to: usize, target: f64) -> TreePoint {
    if target <= 0.0 {
        return TreePoint::Vertex(from);
    }
    let mut remaining = target;
    let mut cur = from;
    for eid in tree.path_edges(from, to) {
        let e = tree.edge(eid);
        let next = if e.u == cur { e.v } else { e.u };
        if remaining <= e.length - 1e-13 {
            if remaining <= 1e-13 {
                return TreePoint::Vertex(cur);
            }
            let from_u = if e.u == cur { remaining } else { e.length - remaining };
            return TreePoint::OnEdge { edge: eid, from_u };
        }
        remaining -= e.length;
        cur = next;
    }
    TreePoint::Vertex(to)
}

/// Image of a point of a hull triangle under the triangle map `p_Δ`.
///
/// `tri` names three sites; `x` must lie on one of the triangle's sides
/// (within a conditioning-aware collinearity tolerance).  Vertices map to
/// their site vertices, internal points to the tree tripod's branch point,
/// and interior side points by dilation of each half-side.
pub fn triangle_map(
    atree: &ApproximatingTree,
    tri: [usize; 3],
    x: &HPoint,
    tol: &Tolerances,
) -> Result<TreePoint, ApproxError> {
    let sides = [(0usize, 1usize), (0, 2), (1, 2)];
    for (a, b) in sides {
        let (sa, sb) = (&atree.sites()[tri[a]], &atree.sites()[tri[b]]);
        let dab = dist(sa, sb);
        let da = dist(sa, x);
        let db = dist(x, sb);
        let on_tol = (tol.point * 100.0) * (1.0 + dab);
        if libm::fabs(da + db - dab) > on_tol {
            continue;
        }
        // Side endpoints map to their site vertices exactly.
        if da <= on_tol {
            return Ok(TreePoint::Vertex(atree.site_vertex(tri[a])));
        }
        if db <= on_tol {
            return Ok(TreePoint::Vertex(atree.site_vertex(tri[b])));
        }
        let cidx = 3 - a - b;
        let sc = &atree.sites()[tri[cidx]];
        let (dac, dbc) = (dist(sa, sc), dist(sb, sc));
        // Hyperbolic and tree Gromov legs at each side endpoint.
        let leg_a = ((dab + dac - dbc) / 2.0).max(0.0);
        let leg_b = ((dab + dbc - dac) / 2.0).max(0.0);
        let (pa, pb, pc) = (
            atree.site_vertex(tri[a]),
            atree.site_vertex(tri[b]),
            atree.site_vertex(tri[cidx]),
        );
        let (tab, tac, tbc) = (
            atree.tree().distance(pa, pb),
            atree.tree().distance(pa, pc),
            atree.tree().distance(pb, pc),
        );
        let tleg_a = ((tab + tac - tbc) / 2.0).max(0.0);
        let tleg_b = ((tab + tbc - tac) / 2.0).max(0.0);
        let point = if da <= leg_a {
            let ratio = if leg_a > tol.point { tleg_a / leg_a } else { 0.0 };
            locate_at_distance(atree.tree(), pa, pb, (da * ratio).min(tleg_a))
        } else {
            let ub = (dab - da).max(0.0);
            let ratio = if leg_b > tol.point { tleg_b / leg_b } else { 0.0 };
            locate_at_distance(atree.tree(), pb, pa, (ub * ratio).min(tleg_b))
        };
        return Ok(point);
    }
    Err(ApproxError::PointNotOnTriangle)
}

/// Extension of the site map to the whole hull: finds the first hull edge
/// containing `x` (the preferred edge first, then lexicographic order),
/// fixes a triangle over that edge, and applies the triangle map.
///
/// Restricted to the preferred edge the resulting map is continuous.
pub fn project_to_tree(
    atree: &ApproximatingTree,
    x: &HPoint,
    edge_preference: Option<(usize, usize)>,
    tol: &Tolerances,
) -> Result<TreePoint, ApproxError> {
    let sites = atree.sites();
    let n = sites.len();
    for (i, site) in sites.iter().enumerate() {
        if dist(site, x) <= tol.point * 10.0 {
            return Ok(TreePoint::Vertex(atree.site_vertex(i)));
        }
    }
    let mut order: Vec<(usize, usize)> = Vec::new();
    if let Some((i, j)) = edge_preference {
        order.push((i.min(j), i.max(j)));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if Some((i, j)) != order.first().copied() {
                order.push((i, j));
            }
        }
    }
    for (i, j) in order {
        let (si, sj) = (&sites[i], &sites[j]);
        let dij = dist(si, sj);
        if dij <= tol.point {
            continue;
        }
        let on_tol = (tol.point * 100.0) * (1.0 + dij);
        let (di, dj) = (dist(si, x), dist(x, sj));
        if libm::fabs(di + dj - dij) > on_tol {
            continue;
        }
        // Third vertex: smallest site making a nondegenerate triangle.
        let third = (0..n).find(|&k| {
            k != i && k != j && dist(&sites[k], si) > tol.point && dist(&sites[k], sj) > tol.point
        });
        match third {
            Some(k) => return triangle_map(atree, [i, j, k], x, tol),
            None => {
                // Two distinct sites only: map the segment by pure dilation.
                let (pi, pj) = (atree.site_vertex(i), atree.site_vertex(j));
                let tij = atree.tree().distance(pi, pj);
                let target = (di * tij / dij).min(tij);
                return Ok(locate_at_distance(atree.tree(), pi, pj, target));
            }
        }
    }
    Err(ApproxError::PointNotOnHull)
}

/// The kind of a shadow segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShadowSegmentKind {
    /// Image `q(e)` of a tree edge under the witness dilation.
    EdgeImage { edge: usize },
    /// Segment `[x z]` joining a merged site to its chosen representative.
    Attachment { site: usize },
}

#[derive(Clone, Debug)]
pub struct ShadowSegment {
    pub kind: ShadowSegmentKind,
    pub segment: GeodesicSegment,
}

/// The shadow of an approximating tree: the witness images of all tree
/// edges, together with attachment segments tying merged sites in.  The
/// shadow contains every site.
#[derive(Clone, Debug)]
pub struct Shadow {
    segments: Vec<ShadowSegment>,
    edge_lengths: Vec<f64>,
}

impl Shadow {
    pub fn segments(&self) -> &[ShadowSegment] {
        &self.segments
    }

    /// Shadow length `|q(e)|` of tree edge `e`.
    pub fn edge_image_length(&self, edge: usize) -> f64 {
        self.edge_lengths[edge]
    }

    /// The geodesic segment `q(e)`.
    pub fn edge_image(&self, edge: usize) -> &GeodesicSegment {
        match self
            .segments
            .iter()
            .find(|s| s.kind == ShadowSegmentKind::EdgeImage { edge })
        {
            Some(s) => &s.segment,
            None => unreachable!("every tree edge has a shadow segment"),
        }
    }
}

/// Builds the shadow of `atree`.
pub fn build_shadow(atree: &ApproximatingTree) -> Shadow {
    let mut segments = Vec::new();
    let mut edge_lengths = Vec::new();
    for (id, e) in atree.tree().edges().iter().enumerate() {
        let seg = GeodesicSegment::new(atree.witness(e.u).clone(), atree.witness(e.v).clone());
        edge_lengths.push(seg.length());
        segments.push(ShadowSegment {
            kind: ShadowSegmentKind::EdgeImage { edge: id },
            segment: seg,
        });
    }
    for i in 0..atree.sites().len() {
        if !atree.site_in_witness_set(i) {
            let v = atree.site_vertex(i);
            segments.push(ShadowSegment {
                kind: ShadowSegmentKind::Attachment { site: i },
                segment: GeodesicSegment::new(atree.sites()[i].clone(), atree.witness(v).clone()),
            });
        }
    }
    Shadow { segments, edge_lengths }
}

/// A shadow path `[xy]_sh`: attachment of `x`, the edge images along the
/// tree path, attachment of `y`.
#[derive(Clone, Debug, Default)]
pub struct ShadowPath {
    pub segments: Vec<GeodesicSegment>,
    pub length: f64,
}

/// The shadow path between sites `x` and `y`.
pub fn shadow_path(
    atree: &ApproximatingTree,
    shadow: &Shadow,
    x: usize,
    y: usize,
) -> ShadowPath {
    if x == y {
        return ShadowPath::default();
    }
    let mut segments = Vec::new();
    if !atree.site_in_witness_set(x) {
        segments.push(GeodesicSegment::new(
            atree.sites()[x].clone(),
            atree.witness(atree.site_vertex(x)).clone(),
        ));
    }
    for eid in atree
        .tree()
        .path_edges(atree.site_vertex(x), atree.site_vertex(y))
    {
        segments.push(shadow.edge_image(eid).clone());
    }
    if !atree.site_in_witness_set(y) {
        segments.push(GeodesicSegment::new(
            atree.witness(atree.site_vertex(y)).clone(),
            atree.sites()[y].clone(),
        ));
    }
    let length = segments.iter().map(|s| s.length()).sum();
    ShadowPath { segments, length }
}

/// Additive error budget `20cδ + 12δ` of the hull-to-tree quasi-isometry.
pub fn projection_error(c: u32) -> f64 {
    (20.0 * c as f64 + 12.0) * DELTA
}
