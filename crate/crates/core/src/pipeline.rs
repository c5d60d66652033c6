//! The end-to-end analysis of a Coxeter group action on `H^n`.
//!
//! From a validated representation the pipeline builds one fixed-point site
//! per diagram edge, the approximating tree of those sites with its shadow,
//! and the generator labelling of the tree.  Useful edges whose shadows
//! reach the threshold `Λ_n` certify small nontrivial special splittings via
//! the midpoint estimate; if no edge qualifies, a witness point realises the
//! explicit displacement bound `C_n(k)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::approx::{build_shadow, build_tree, ApproxError, ApproximatingTree, Shadow};
use crate::bitset::IndexSet;
use crate::coxeter::{
    classify_smallness, is_separating, CoxeterSystem, SmallnessVerdict, SpecialSplitting,
};
use crate::hyperbolic::{
    dist, unit_tangent, exp_map, verify_involution, HIsometry, HPoint, HyperbolicError,
};
use crate::trees::{
    canonical_extension, edge_sides, is_labelling_system, useful_subtree, Labelling,
    LabellingViolation, MetricTree, OrientedEdge, TreeError, UsefulSubtree,
};
use crate::{Tolerances, DELTA};

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineError {
    WrongMatrixCount { expected: usize, got: usize },
    NotLorentz { generator: String, residual: f64 },
    NotInvolution { generator: String, residual: f64 },
    RelatorViolated { gen_i: String, gen_j: String, order: u32, residual: f64 },
    NonPositiveMargulis,
    /// A dihedral fixed-point site could not be constructed.
    SiteConstruction { gen_i: String, gen_j: String, source: HyperbolicError },
    /// Some generator stabilises no site; for connected diagrams this
    /// signals numerical failure.
    LabellingNotSurjective { generator: String },
    /// A nontrivial edge splitting whose core fails the separation check.
    SeparationCheckFailed { edge: usize },
    /// Shadow long enough but a core generator moves the midpoint too far.
    MidpointCheckFailed { edge: usize, generator: String, displacement: f64, allowed: f64 },
    /// The bound witness moves more than `C + tol`; numerical failure.
    WitnessExceedsBound { value: f64, bound: f64 },
    Internal(String),
    Approx(ApproxError),
    Hyperbolic(HyperbolicError),
    Tree(TreeError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::WrongMatrixCount { expected, got } => {
                write!(f, "expected {expected} matrices, got {got}")
            }
            PipelineError::NotLorentz { generator, residual } => {
                write!(f, "matrix for {generator} is not Lorentz (residual {residual})")
            }
            PipelineError::NotInvolution { generator, residual } => {
                write!(f, "matrix for {generator} is not an involution (residual {residual})")
            }
            PipelineError::RelatorViolated { gen_i, gen_j, order, residual } => {
                write!(f, "relator ({gen_i} {gen_j})^{order} fails with residual {residual}")
            }
            PipelineError::NonPositiveMargulis => f.write_str("margulis constant must be positive"),
            PipelineError::SiteConstruction { gen_i, gen_j, source } => {
                write!(f, "fixed point for pair ({gen_i},{gen_j}) failed: {source}")
            }
            PipelineError::LabellingNotSurjective { generator } => {
                write!(f, "generator {generator} labels no vertex")
            }
            PipelineError::SeparationCheckFailed { edge } => {
                write!(f, "edge {edge}: nontrivial splitting core does not separate the diagram")
            }
            PipelineError::MidpointCheckFailed { edge, generator, displacement, allowed } => {
                write!(
                    f,
                    "edge {edge}: {generator} moves the midpoint {displacement} > {allowed}"
                )
            }
            PipelineError::WitnessExceedsBound { value, bound } => {
                write!(f, "bound witness displacement {value} exceeds {bound}")
            }
            PipelineError::Internal(msg) => write!(f, "internal invariant failed: {msg}"),
            PipelineError::Approx(e) => write!(f, "{e}"),
            PipelineError::Hyperbolic(e) => write!(f, "{e}"),
            PipelineError::Tree(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PipelineError {}

impl From<ApproxError> for PipelineError {
    fn from(e: ApproxError) -> Self {
        PipelineError::Approx(e)
    }
}

impl From<HyperbolicError> for PipelineError {
    fn from(e: HyperbolicError) -> Self {
        PipelineError::Hyperbolic(e)
    }
}

impl From<TreeError> for PipelineError {
    fn from(e: TreeError) -> Self {
        PipelineError::Tree(e)
    }
}

/// A validated representation: one involution per generator, all relators
/// holding within `tol.isom`.
///
/// Discreteness and faithfulness are assumed, never verified.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    images: Vec<HIsometry>,
    tol: Tolerances,
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, generator: usize) -> &HIsometry {
        &self.images[generator]
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn displacement(&self, generator: usize, x: &HPoint) -> f64 {
        dist(x, &self.images[generator].apply(x))
    }

    pub fn displacements(&self, x: &HPoint) -> Vec<f64> {
        (0..self.images.len()).map(|s| self.displacement(s, x)).collect()
    }

    pub fn max_displacement(&self, x: &HPoint) -> f64 {
        self.displacements(x).into_iter().fold(0.0, f64::max)
    }
}

/// Validates matrices as a representation of `system` in `Isom(H^dim)`:
/// Lorentz, involutive, and satisfying every finite relator.
pub fn load_representation(
    system: &CoxeterSystem,
    dim: usize,
    matrices: &[Vec<f64>],
    tol: Tolerances,
) -> Result<Representation, PipelineError> {
    let k = system.rank();
    if matrices.len() != k {
        return Err(PipelineError::WrongMatrixCount { expected: k, got: matrices.len() });
    }
    let mut images = Vec::with_capacity(k);
    for (i, entries) in matrices.iter().enumerate() {
        let name = || system.generators()[i].clone();
        let m = HIsometry::new(dim, entries.clone(), &tol).map_err(|e| match e {
            HyperbolicError::NotLorentz { residual } => {
                PipelineError::NotLorentz { generator: name(), residual }
            }
            other => PipelineError::Hyperbolic(other),
        })?;
        if !verify_involution(&m, &tol) {
            return Err(PipelineError::NotInvolution {
                generator: name(),
                residual: m.involution_residual(),
            });
        }
        images.push(m);
    }
    for (i, j, order) in system.finite_pairs() {
        let product = images[i].compose(&images[j]);
        let power = product.pow(order);
        let n = dim + 1;
        let mut residual = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                residual = residual.max(libm::fabs(power.entries()[r * n + c] - target));
            }
        }
        let scale = power.max_abs().max(1.0);
        if residual > tol.isom * (1.0 + scale * scale * 1e-8) {
            return Err(PipelineError::RelatorViolated {
                gen_i: system.generators()[i].clone(),
                gen_j: system.generators()[j].clone(),
                order,
                residual,
            });
        }
    }
    Ok(Representation { dim, images, tol })
}

/// One representative fixed point per diagram edge.
#[derive(Clone, Debug)]
pub struct DihedralSite {
    pub pair: (usize, usize),
    pub point: HPoint,
}

/// Builds the site set `X`: for every pair generating a finite dihedral
/// group (every diagram edge), the orbit-averaged fixed point.
pub fn fixed_point_sites(
    system: &CoxeterSystem,
    rep: &Representation,
) -> Result<Vec<DihedralSite>, PipelineError> {
    let mut sites = Vec::new();
    for (i, j, order) in system.finite_pairs() {
        let point = crate::hyperbolic::dihedral_fixed_point(
            rep.image(i),
            rep.image(j),
            order,
            rep.tolerances(),
        )
        .map_err(|source| PipelineError::SiteConstruction {
            gen_i: system.generators()[i].clone(),
            gen_j: system.generators()[j].clone(),
            source,
        })?;
        sites.push(DihedralSite { pair: (i, j), point });
    }
    Ok(sites)
}

fn binom2(k: usize) -> f64 {
    (k * k.saturating_sub(1)) as f64 / 2.0
}

/// The explicit constants of the analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub k: usize,
    pub size_x: usize,
    pub c: u32,
    pub delta: f64,
    pub mu: f64,
    /// `R = 2⁸(|X|(20cδ + 12δ) + 4cδ)`.
    pub r: f64,
    /// `Λ_n = 4/μ + 2R`.
    pub lambda_n: f64,
    /// `C_n(k) = R + 2·C(k,2)·Λ_n`.
    pub c_bound: f64,
}

impl Constants {
    /// The `Λ` variant printed in the theorem statement,
    /// `2·C(k,2)·(4/μ + 2R)`; reported as a diagnostic only.
    pub fn alt_lambda_statement(&self) -> f64 {
        2.0 * binom2(self.k) * (4.0 / self.mu + 2.0 * self.r)
    }

    /// The `R` variant set in the bound lemma's proof, `26cδ + 12δ`;
    /// reported as a diagnostic only.
    pub fn alt_r_lemma(&self) -> f64 {
        26.0 * self.c as f64 * self.delta + 12.0 * self.delta
    }
}

/// Evaluates all constants for rank `k`, site count `size_x` and Margulis
/// constant `mu`.
pub fn constants_for(k: usize, size_x: usize, mu: f64) -> Result<Constants, PipelineError> {
    if !(mu > 0.0) {
        return Err(PipelineError::NonPositiveMargulis);
    }
    debug_assert!(k >= 1 && size_x >= 1);
    let c = crate::approx::c_parameter(size_x);
    let cd = c as f64 * DELTA;
    let r = 256.0 * (size_x as f64 * (20.0 * cd + 12.0 * DELTA) + 4.0 * cd);
    let lambda_n = 4.0 / mu + 2.0 * r;
    let c_bound = r + 2.0 * binom2(k) * lambda_n;
    Ok(Constants { k, size_x, c, delta: DELTA, mu, r, lambda_n, c_bound })
}

/// The generator labelling of an approximating tree: each site vertex is
/// labelled by the generators fixing one of its sites (within `tol.fix`),
/// then the labelling is canonically extended.
///
/// For connected diagrams the result is a labelling system.
pub fn generator_labelling(
    atree: &ApproximatingTree,
    sites: &[DihedralSite],
    rep: &Representation,
) -> Result<Labelling, PipelineError> {
    let k = rep.generator_count();
    let mut sets = vec![IndexSet::EMPTY; atree.tree().vertex_count()];
    for (idx, site) in sites.iter().enumerate() {
        let v = atree.site_vertex(idx);
        for s in 0..k {
            if rep.displacement(s, &site.point) <= rep.tolerances().fix {
                sets[v].insert(s);
            }
        }
    }
    let base = Labelling::new(sets, k)?;
    let extended = canonical_extension(atree.tree(), &base);
    match is_labelling_system(atree.tree(), &extended) {
        Ok(()) => Ok(extended),
        Err(LabellingViolation::MissingLabel { label }) => Err(PipelineError::LabellingNotSurjective {
            generator: alloc::borrow::ToOwned::to_owned(&*atree_generator_name(label)),
        }),
        Err(LabellingViolation::Connectedness { .. }) => Err(PipelineError::Internal(
            String::from("canonical extension violated connectedness"),
        )),
    }
}

fn atree_generator_name(label: usize) -> String {
    format!("generator {label}")
}

/// True iff every generator in `gens` moves `x` at most `r`.
pub fn r_fixed(x: &HPoint, gens: IndexSet, rep: &Representation, r: f64) -> bool {
    gens.iter().all(|s| rep.displacement(s, x) <= r)
}

/// Label unions `(S⁺(e), S⁻(e))` of the two sides of an oriented edge.
pub fn edge_label_sides(
    tree: &MetricTree,
    lab: &Labelling,
    e: OrientedEdge,
) -> (IndexSet, IndexSet) {
    let (plus, minus) = edge_sides(tree, e);
    let union = |side: &[usize]| {
        side.iter()
            .fold(IndexSet::EMPTY, |acc, &v| acc.union(lab.get(v)))
    };
    (union(&plus), union(&minus))
}

/// The special splitting determined by an oriented tree edge:
/// `⟨S⁺(e)⟩ ∗_⟨S*(e)⟩ ⟨S⁻(e)⟩`, trivial iff the edge is useless.
///
/// For nontrivial outcomes the core is verified to separate the diagram.
pub fn splitting_from_edge(
    tree: &MetricTree,
    lab: &Labelling,
    e: OrientedEdge,
    system: &CoxeterSystem,
) -> Result<SpecialSplitting, PipelineError> {
    let (s_plus, s_minus) = edge_label_sides(tree, lab, e);
    let splitting = SpecialSplitting::from_sides(s_plus, s_minus, system.rank());
    if !splitting.trivial && !is_separating(splitting.core, &system.diagram()) {
        return Err(PipelineError::SeparationCheckFailed { edge: e.edge });
    }
    Ok(splitting)
}

/// A midpoint certificate: the named edge's shadow midpoint is moved at most
/// `μ` by every generator of the splitting core.
#[derive(Clone, Debug)]
pub struct EdgeCertificate {
    pub edge: usize,
    pub core: IndexSet,
    pub shadow_length: f64,
    pub midpoint: HPoint,
    /// Midpoint displacement per core generator.
    pub displacements: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certificate(EdgeCertificate),
    /// The edge's shadow is shorter than `Λ_n`.
    NotLongEnough { shadow_length: f64 },
}

/// Attempts a smallness certificate on a useful edge: if `|q(e)| ≥ Λ_n`,
/// every generator of `S*(e)` must move the shadow midpoint at most
/// `μ + tol.fix`.
pub fn certify_small_edge(
    atree: &ApproximatingTree,
    shadow: &Shadow,
    lab: &Labelling,
    edge: usize,
    rep: &Representation,
    constants: &Constants,
) -> Result<CertifyOutcome, PipelineError> {
    let oriented = OrientedEdge::forward(edge);
    let (s_plus, s_minus) = edge_label_sides(atree.tree(), lab, oriented);
    let core = s_plus.intersection(s_minus);
    let shadow_length = shadow.edge_image_length(edge);
    if shadow_length < constants.lambda_n {
        return Ok(CertifyOutcome::NotLongEnough { shadow_length });
    }
    let midpoint = shadow.edge_image(edge).midpoint();
    let allowed = constants.mu + rep.tolerances().fix;
    let mut displacements = Vec::new();
    for s in core.iter() {
        let d = rep.displacement(s, &midpoint);
        if d > allowed {
            return Err(PipelineError::MidpointCheckFailed {
                edge,
                generator: format!("generator {s}"),
                displacement: d,
                allowed,
            });
        }
        displacements.push((s, d));
    }
    Ok(CertifyOutcome::Certificate(EdgeCertificate {
        edge,
        core,
        shadow_length,
        midpoint,
        displacements,
    }))
}

/// Pulls accumulated floating drift off a descent iterate; the minimiser
/// works near the origin, where the norm is well resolved.
fn renormalized(p: HPoint) -> HPoint {
    HPoint::from_timelike(p.coords().to_vec()).unwrap_or(p)
}

/// Geodesic subgradient descent on `x ↦ max_s d(x, ρ(s)x)`.
///
/// The objective is convex along geodesics; each step moves along the
/// averaged unit tangents toward the images realising (nearly) the maximum,
/// with step halving.  Returns the best point seen and its value, an upper
/// bound on the true infimum, non-increasing in the budget.
pub fn minimize_displacement(
    rep: &Representation,
    start: &HPoint,
    budget: u32,
) -> (HPoint, f64) {
    let mut x = start.clone();
    let mut fx = rep.max_displacement(&x);
    let mut best = (x.clone(), fx);
    for _ in 0..budget {
        if fx <= 1e-15 {
            break;
        }
        let disps = rep.displacements(&x);
        let fmax = disps.iter().copied().fold(0.0, f64::max);
        // Candidate descent directions: averaged active tangents over
        // tightening-to-widening activity bands.
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        for band_scale in [1e-6, 1e-2, 0.3] {
            let band = fmax * band_scale;
            let mut dir = vec![0.0; rep.dim() + 1];
            let mut count = 0usize;
            for (s, &d) in disps.iter().enumerate() {
                if d >= fmax - band {
                    if let Some(t) = unit_tangent(&x, &rep.image(s).apply(&x)) {
                        for (acc, ti) in dir.iter_mut().zip(&t) {
                            *acc += ti;
                        }
                        count += 1;
                    }
                }
            }
            if count > 0 {
                let norm = crate::hyperbolic::lorentz_dot(&dir, &dir);
                if norm > 1e-24 {
                    let inv = 1.0 / libm::sqrt(norm);
                    for d in &mut dir {
                        *d *= inv;
                    }
                    if candidates.iter().all(|c| c != &dir) {
                        candidates.push(dir);
                    }
                }
            }
        }
        let mut improved = false;
        'outer: for dir in &candidates {
            let mut t = fx * 0.5;
            for _ in 0..60 {
                let cand = renormalized(exp_map(&x, dir, t));
                let fc = rep.max_displacement(&cand);
                if fc < fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break 'outer;
                }
                t *= 0.5;
                if t < 1e-18 {
                    break;
                }
            }
        }
        if fx < best.1 {
            best = (x.clone(), fx);
        }
        if !improved {
            break;
        }
    }
    best
}

/// Options for [`analyze`].
#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    /// Iteration budget for the displacement minimisation.
    pub budget: u32,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { budget: 2000 }
    }
}

/// A small nontrivial special splitting, with the certifying edge data when
/// one was produced by the midpoint estimate (absent for the free-product
/// splitting of a disconnected diagram).
#[derive(Clone, Debug)]
pub struct SplittingCertificate {
    pub splitting: SpecialSplitting,
    pub certificate: Option<EdgeCertificate>,
    /// Finite/affine classification of the core, as a cross-check.
    pub core_smallness: SmallnessVerdict,
}

/// A displacement-bound witness.
#[derive(Clone, Debug)]
pub struct BoundCertificate {
    pub bound: f64,
    pub witness: HPoint,
    pub witness_value: f64,
    /// Displacement of the witness per generator.
    pub displacements: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Splitting(SplittingCertificate),
    Bound(BoundCertificate),
}

/// Run summary carried alongside the outcome.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub site_count: usize,
    pub distinct_sites: usize,
    pub tree_vertices: usize,
    pub tree_edges: usize,
    pub useful_edges: usize,
    pub longest_shadow_edge: f64,
    /// Maximum number of edges on a geodesic path in the useful subtree.
    pub max_useful_path_edges: usize,
    /// `R + 2EΛ_n` with the actual path bound `E`; tighter than `C_n(k)`.
    pub tighter_bound: f64,
    pub alt_lambda_statement: f64,
    pub alt_r_lemma: f64,
    /// Number of labelled vertices per generator.
    pub label_counts: Vec<usize>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub outcome: Outcome,
    pub constants: Constants,
    pub diagnostics: Diagnostics,
}

/// The intermediate constructions of a connected-diagram run: sites,
/// approximating tree, shadow, generator labelling and useful subtree.
#[derive(Clone, Debug)]
pub struct PipelineArtifacts {
    pub sites: Vec<DihedralSite>,
    pub atree: ApproximatingTree,
    pub shadow: Shadow,
    pub labelling: Labelling,
    pub useful: UsefulSubtree,
}

/// Builds the intermediate constructions for a connected diagram with at
/// least one edge; `None` when there are no dihedral pairs (rank one).
pub fn build_artifacts(
    system: &CoxeterSystem,
    rep: &Representation,
) -> Result<Option<PipelineArtifacts>, PipelineError> {
    let sites = fixed_point_sites(system, rep)?;
    if sites.is_empty() {
        return Ok(None);
    }
    let points: Vec<HPoint> = sites.iter().map(|s| s.point.clone()).collect();
    let atree = build_tree(&points, rep.tolerances())?;
    let shadow = build_shadow(&atree);
    let labelling = generator_labelling(&atree, &sites, rep)?;
    let useful = useful_subtree(atree.tree(), &labelling);
    Ok(Some(PipelineArtifacts { sites, atree, shadow, labelling, useful }))
}

/// Edge-count diameter of the useful subtree.
fn useful_path_bound(tree: &MetricTree, useful: &UsefulSubtree) -> usize {
    if useful.edges.is_empty() {
        return 0;
    }
    let allowed: alloc::collections::BTreeSet<usize> = useful.edges.iter().copied().collect();
    let farthest = |start: usize| -> (usize, usize) {
        let mut best = (start, 0usize);
        let mut seen = vec![false; tree.vertex_count()];
        let mut frontier = vec![(start, 0usize)];
        seen[start] = true;
        while let Some((v, d)) = frontier.pop() {
            if d > best.1 {
                best = (v, d);
            }
            for &(u, e) in tree.neighbors(v) {
                if allowed.contains(&e) && !seen[u] {
                    seen[u] = true;
                    frontier.push((u, d + 1));
                }
            }
        }
        best
    };
    let (far, _) = farthest(useful.vertices[0]);
    farthest(far).1
}

/// The main procedure: either a small nontrivial special splitting or a
/// certified displacement bound.
pub fn analyze(
    system: &CoxeterSystem,
    rep: &Representation,
    mu: f64,
    options: &AnalyzeOptions,
) -> Result<AnalysisReport, PipelineError> {
    let k = system.rank();
    let diagram = system.diagram();
    let components = diagram.connected_components();

    // Disconnected diagram: a free product, i.e. an immediate splitting over
    // the trivial (small) subgroup.
    if components.len() > 1 {
        let plus = components[0];
        let minus = components[1..]
            .iter()
            .fold(IndexSet::EMPTY, |acc, c| acc.union(*c));
        let splitting = SpecialSplitting::from_sides(plus, minus, k);
        let constants = constants_for(k, diagram.edges().len().max(1), mu)?;
        let mut diagnostics = Diagnostics {
            site_count: diagram.edges().len(),
            alt_lambda_statement: constants.alt_lambda_statement(),
            alt_r_lemma: constants.alt_r_lemma(),
            tighter_bound: constants.r,
            ..Diagnostics::default()
        };
        diagnostics
            .warnings
            .push(String::from("diagram is disconnected; splitting over the trivial subgroup"));
        return Ok(AnalysisReport {
            outcome: Outcome::Splitting(SplittingCertificate {
                core_smallness: classify_smallness(splitting.core, system),
                splitting,
                certificate: None,
            }),
            constants,
            diagnostics,
        });
    }

    let artifacts = build_artifacts(system, rep)?;

    // Rank one (or no finite pair): no sites, but a mirror gives an exact
    // fixed point, so the bound holds with room to spare.
    let Some(PipelineArtifacts { sites, atree, shadow, labelling, useful }) = artifacts else {
        let constants = constants_for(k, 1, mu)?;
        let (witness, witness_value) =
            minimize_displacement(rep, &HPoint::origin(rep.dim()), options.budget);
        if witness_value > constants.c_bound + rep.tolerances().fix {
            return Err(PipelineError::WitnessExceedsBound {
                value: witness_value,
                bound: constants.c_bound,
            });
        }
        let displacements = rep.displacements(&witness);
        let diagnostics = Diagnostics {
            tighter_bound: constants.r,
            alt_lambda_statement: constants.alt_lambda_statement(),
            alt_r_lemma: constants.alt_r_lemma(),
            label_counts: vec![0; k],
            ..Diagnostics::default()
        };
        return Ok(AnalysisReport {
            outcome: Outcome::Bound(BoundCertificate {
                bound: constants.c_bound,
                witness,
                witness_value,
                displacements,
            }),
            constants,
            diagnostics,
        });
    };

    let constants = constants_for(k, atree.distinct_sites(), mu)?;

    let mut warnings = Vec::new();
    // Labelled-vertex R-fixedness is a theorem for exact data; violations
    // indicate numerical trouble and are surfaced, not fatal.
    for v in 0..atree.tree().vertex_count() {
        for s in labelling.get(v).iter() {
            let d = rep.displacement(s, atree.witness(v));
            if d > constants.r + rep.tolerances().fix {
                warnings.push(format!(
                    "vertex {v} labelled {s} moves {d}, beyond R = {}",
                    constants.r
                ));
            }
        }
    }

    let label_counts: Vec<usize> = (0..k)
        .map(|s| {
            (0..atree.tree().vertex_count())
                .filter(|&v| labelling.get(v).contains(s))
                .count()
        })
        .collect();
    let longest_shadow_edge = (0..atree.tree().edge_count())
        .map(|e| shadow.edge_image_length(e))
        .fold(0.0, f64::max);
    let e_bound = useful_path_bound(atree.tree(), &useful);
    let mut diagnostics = Diagnostics {
        site_count: sites.len(),
        distinct_sites: atree.distinct_sites(),
        tree_vertices: atree.tree().vertex_count(),
        tree_edges: atree.tree().edge_count(),
        useful_edges: useful.edges.len(),
        longest_shadow_edge,
        max_useful_path_edges: e_bound,
        tighter_bound: constants.r + 2.0 * e_bound as f64 * constants.lambda_n,
        alt_lambda_statement: constants.alt_lambda_statement(),
        alt_r_lemma: constants.alt_r_lemma(),
        label_counts,
        warnings,
    };

    // Scan useful edges by decreasing shadow length.
    let mut candidates: Vec<usize> = useful.edges.clone();
    candidates.sort_by(|&a, &b| {
        shadow
            .edge_image_length(b)
            .partial_cmp(&shadow.edge_image_length(a))
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    for edge in candidates {
        match certify_small_edge(&atree, &shadow, &labelling, edge, rep, &constants)? {
            CertifyOutcome::NotLongEnough { .. } => continue,
            CertifyOutcome::Certificate(cert) => {
                let splitting = splitting_from_edge(
                    atree.tree(),
                    &labelling,
                    OrientedEdge::forward(edge),
                    system,
                )?;
                let core_smallness = classify_smallness(splitting.core, system);
                if !core_smallness.small {
                    diagnostics.warnings.push(format!(
                        "midpoint certificate on edge {edge} but the core is not of finite/affine type; \
                         smallness relies on discreteness of the representation"
                    ));
                }
                return Ok(AnalysisReport {
                    outcome: Outcome::Splitting(SplittingCertificate {
                        splitting,
                        certificate: Some(cert),
                        core_smallness,
                    }),
                    constants,
                    diagnostics,
                });
            }
        }
    }

    // No certificate: produce the bound witness.  With every useful shadow
    // below Λ_n, the useful subtree's shadow is C-fixed; with no useful edge
    // at all, a full vertex exists and its shadow is R-fixed.
    let start_vertex = match crate::trees::full_vertex(atree.tree(), &labelling) {
        Some(v) => v,
        None => match useful.vertices.first() {
            Some(&v) => v,
            None => {
                return Err(PipelineError::Internal(String::from(
                    "no full vertex and no useful edge",
                )))
            }
        },
    };
    let start = atree.witness(start_vertex).clone();
    let (witness, witness_value) = minimize_displacement(rep, &start, options.budget);
    if witness_value > constants.c_bound + rep.tolerances().fix {
        return Err(PipelineError::WitnessExceedsBound {
            value: witness_value,
            bound: constants.c_bound,
        });
    }
    let displacements = rep.displacements(&witness);
    Ok(AnalysisReport {
        outcome: Outcome::Bound(BoundCertificate {
            bound: constants.c_bound,
            witness,
            witness_value,
            displacements,
        }),
        constants,
        diagnostics,
    })
}
