//! Report documents: the analysis outcome rendered as deterministic JSON.
//!
//! Every floating-point value is emitted with 17 significant digits, enough
//! to round-trip `f64` exactly, via `serde_json`'s arbitrary-precision
//! numbers.  Maps are ordered, so identical inputs produce identical bytes.

use std::collections::BTreeMap;

use coxsplit_core::approx::ApproximatingTree;
use coxsplit_core::coxeter::{CoxeterSystem, SmallnessReason, SmallnessVerdict, SpecialSplitting};
use coxsplit_core::pipeline::{AnalysisReport, Constants, Diagnostics, Outcome};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// Serialises an `f64` as a JSON number with 17 significant digits.
fn ser_f17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    debug_assert!(x.is_finite());
    serde_json::Number::from_string_unchecked(format!("{x:.16e}")).serialize(s)
}

fn ser_f17_vec<S: Serializer>(xs: &Vec<f64>, s: S) -> Result<S::Ok, S::Error> {
    let numbers: Vec<serde_json::Number> = xs
        .iter()
        .map(|x| serde_json::Number::from_string_unchecked(format!("{x:.16e}")))
        .collect();
    numbers.serialize(s)
}

fn ser_f17_map<S: Serializer>(xs: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    let numbers: BTreeMap<&String, serde_json::Number> = xs
        .iter()
        .map(|(k, x)| (k, serde_json::Number::from_string_unchecked(format!("{x:.16e}"))))
        .collect();
    numbers.serialize(s)
}

fn ser_f17_opt_vec<S: Serializer>(xs: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
    match xs {
        Some(v) => ser_f17_vec(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantsDocument {
    pub k: usize,
    #[serde(rename = "sizeX")]
    pub size_x: usize,
    pub c: u32,
    #[serde(serialize_with = "ser_f17")]
    pub delta: f64,
    #[serde(serialize_with = "ser_f17")]
    pub mu: f64,
    #[serde(rename = "R", serialize_with = "ser_f17")]
    pub r: f64,
    #[serde(serialize_with = "ser_f17")]
    pub lambda_n: f64,
    #[serde(rename = "C", serialize_with = "ser_f17")]
    pub c_bound: f64,
}

impl ConstantsDocument {
    pub fn from_constants(c: &Constants) -> ConstantsDocument {
        ConstantsDocument {
            k: c.k,
            size_x: c.size_x,
            c: c.c,
            delta: c.delta,
            mu: c.mu,
            r: c.r,
            lambda_n: c.lambda_n,
            c_bound: c.c_bound,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmallnessDocument {
    pub small: bool,
    pub reason: String,
}

pub fn smallness_tag(reason: SmallnessReason) -> &'static str {
    match reason {
        SmallnessReason::FiniteType => "finite-type",
        SmallnessReason::AffineType => "affine-type",
        SmallnessReason::MixedFiniteAffine => "mixed-finite-affine",
        SmallnessReason::ContainsNonAffineIrreducibleComponent => {
            "contains-non-affine-irreducible-component"
        }
    }
}

impl SmallnessDocument {
    pub fn from_verdict(v: &SmallnessVerdict) -> SmallnessDocument {
        SmallnessDocument { small: v.small, reason: smallness_tag(v.reason).to_string() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyingEdgeDocument {
    pub edge: usize,
    #[serde(serialize_with = "ser_f17")]
    pub shadow_length: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplittingDocument {
    pub plus: Vec<String>,
    pub core: Vec<String>,
    pub minus: Vec<String>,
    pub trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certifying_edge: Option<CertifyingEdgeDocument>,
    #[serde(serialize_with = "ser_f17_opt_vec", skip_serializing_if = "Option::is_none")]
    pub midpoint: Option<Vec<f64>>,
    /// Midpoint displacement per core generator (empty without an edge
    /// certificate).
    #[serde(serialize_with = "ser_f17_map")]
    pub displacements: BTreeMap<String, f64>,
    pub core_smallness: SmallnessDocument,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundDocument {
    #[serde(rename = "C", serialize_with = "ser_f17")]
    pub c_bound: f64,
    #[serde(serialize_with = "ser_f17_vec")]
    pub witness: Vec<f64>,
    #[serde(serialize_with = "ser_f17")]
    pub witness_value: f64,
    #[serde(serialize_with = "ser_f17_map")]
    pub displacements: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagnosticsDocument {
    pub site_count: usize,
    pub distinct_sites: usize,
    pub tree_vertices: usize,
    pub tree_edges: usize,
    pub useful_edges: usize,
    #[serde(serialize_with = "ser_f17")]
    pub longest_shadow_edge: f64,
    pub max_useful_path_edges: usize,
    #[serde(serialize_with = "ser_f17")]
    pub tighter_bound: f64,
    /// `Λ` as printed in the theorem statement; differs from the `Λ` used.
    #[serde(serialize_with = "ser_f17")]
    pub alt_lambda_statement: f64,
    /// `R` as set in the bound lemma's proof; differs from the `R` used.
    #[serde(serialize_with = "ser_f17")]
    pub alt_r_lemma: f64,
    pub label_counts: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    /// `"splitting"` or `"bound"`.
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundDocument>,
    pub constants: ConstantsDocument,
    pub diagnostics: DiagnosticsDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeDumpDocument>,
}

fn names(set: coxsplit_core::bitset::IndexSet, system: &CoxeterSystem) -> Vec<String> {
    set.iter().map(|i| system.generators()[i].clone()).collect()
}

fn splitting_document(
    splitting: &SpecialSplitting,
    certificate: Option<&coxsplit_core::pipeline::EdgeCertificate>,
    smallness: &SmallnessVerdict,
    system: &CoxeterSystem,
) -> SplittingDocument {
    let mut displacements = BTreeMap::new();
    if let Some(cert) = certificate {
        for &(gen, d) in &cert.displacements {
            displacements.insert(system.generators()[gen].clone(), d);
        }
    }
    SplittingDocument {
        plus: names(splitting.plus, system),
        core: names(splitting.core, system),
        minus: names(splitting.minus, system),
        trivial: splitting.trivial,
        certifying_edge: certificate.map(|c| CertifyingEdgeDocument {
            edge: c.edge,
            shadow_length: c.shadow_length,
        }),
        midpoint: certificate.map(|c| c.midpoint.coords().to_vec()),
        displacements,
        core_smallness: SmallnessDocument::from_verdict(smallness),
    }
}

fn diagnostics_document(d: &Diagnostics, system: &CoxeterSystem) -> DiagnosticsDocument {
    let label_counts = system
        .generators()
        .iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), d.label_counts.get(i).copied().unwrap_or(0)))
        .collect();
    DiagnosticsDocument {
        site_count: d.site_count,
        distinct_sites: d.distinct_sites,
        tree_vertices: d.tree_vertices,
        tree_edges: d.tree_edges,
        useful_edges: d.useful_edges,
        longest_shadow_edge: d.longest_shadow_edge,
        max_useful_path_edges: d.max_useful_path_edges,
        tighter_bound: d.tighter_bound,
        alt_lambda_statement: d.alt_lambda_statement,
        alt_r_lemma: d.alt_r_lemma,
        label_counts,
        warnings: d.warnings.clone(),
    }
}

impl ReportDocument {
    pub fn from_report(report: &AnalysisReport, system: &CoxeterSystem) -> ReportDocument {
        let (outcome, splitting, bound) = match &report.outcome {
            Outcome::Splitting(s) => (
                "splitting".to_string(),
                Some(splitting_document(
                    &s.splitting,
                    s.certificate.as_ref(),
                    &s.core_smallness,
                    system,
                )),
                None,
            ),
            Outcome::Bound(b) => (
                "bound".to_string(),
                None,
                Some(BoundDocument {
                    c_bound: b.bound,
                    witness: b.witness.coords().to_vec(),
                    witness_value: b.witness_value,
                    displacements: system
                        .generators()
                        .iter()
                        .cloned()
                        .zip(b.displacements.iter().copied())
                        .collect(),
                }),
            ),
        };
        ReportDocument {
            outcome,
            splitting,
            bound,
            constants: ConstantsDocument::from_constants(&report.constants),
            diagnostics: diagnostics_document(&report.diagnostics, system),
            tree: None,
        }
    }

    pub fn to_pretty_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialises");
        out.push('\n');
        out
    }
}

/// Serialization of an approximating tree: vertices with witness
/// coordinates, weighted edges, and the site map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeDumpDocument {
    pub vertices: Vec<TreeVertexDocument>,
    pub edges: Vec<TreeEdgeDocument>,
    /// Vertex id per site, in site order.
    pub site_map: Vec<usize>,
    pub c: u32,
    #[serde(serialize_with = "ser_f17")]
    pub delta: f64,
    /// Vertex label sets, as sorted generator-name arrays.
    pub labels: Vec<Vec<String>>,
    pub useful_edges: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeVertexDocument {
    pub id: usize,
    #[serde(serialize_with = "ser_f17_vec")]
    pub witness: Vec<f64>,
    /// Site index whose point is the witness, for site vertices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeEdgeDocument {
    pub u: usize,
    pub v: usize,
    #[serde(serialize_with = "ser_f17")]
    pub length: f64,
}

pub fn tree_dump(
    atree: &ApproximatingTree,
    labelling: &coxsplit_core::trees::Labelling,
    useful_edges: &[usize],
    system: &CoxeterSystem,
) -> TreeDumpDocument {
    let vertices = (0..atree.tree().vertex_count())
        .map(|v| TreeVertexDocument {
            id: v,
            witness: atree.witness(v).coords().to_vec(),
            site: atree.witness_site(v),
        })
        .collect();
    let edges = atree
        .tree()
        .edges()
        .iter()
        .map(|e| TreeEdgeDocument { u: e.u, v: e.v, length: e.length })
        .collect();
    let labels = (0..atree.tree().vertex_count())
        .map(|v| names(labelling.get(v), system))
        .collect();
    TreeDumpDocument {
        vertices,
        edges,
        site_map: atree.site_map().to_vec(),
        c: atree.c(),
        delta: atree.delta(),
        labels,
        useful_edges: useful_edges.to_vec(),
    }
}

/// Output of the `splittings` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplittingsDocument {
    pub generators: Vec<String>,
    pub splittings: Vec<EnumeratedSplittingDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumeratedSplittingDocument {
    pub plus: Vec<String>,
    pub core: Vec<String>,
    pub minus: Vec<String>,
    pub core_smallness: SmallnessDocument,
}

pub fn splittings_document(system: &CoxeterSystem) -> SplittingsDocument {
    let diagram = system.diagram();
    let splittings = coxsplit_core::coxeter::enumerate_special_splittings(&diagram)
        .into_iter()
        .map(|s| {
            let verdict = coxsplit_core::coxeter::classify_smallness(s.core, system);
            EnumeratedSplittingDocument {
                plus: names(s.plus, system),
                core: names(s.core, system),
                minus: names(s.minus, system),
                core_smallness: SmallnessDocument::from_verdict(&verdict),
            }
        })
        .collect();
    SplittingsDocument { generators: system.generators().to_vec(), splittings }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_render_with_17_significant_digits() {
        #[derive(Serialize)]
        struct Probe {
            #[serde(serialize_with = "ser_f17")]
            x: f64,
        }
        for &x in &[89998.31868769154, -0.104, 1.0, 2250419.505653827, 1e-300] {
            let json = serde_json::to_string(&Probe { x }).unwrap();
            let digits: usize = json
                .trim_start_matches(r#"{"x":"#)
                .chars()
                .take_while(|c| *c != 'e')
                .filter(char::is_ascii_digit)
                .count();
            assert_eq!(digits, 17, "{json}");
            let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
            assert_eq!(parsed["x"].as_f64().unwrap(), x, "{json}");
        }
    }

    #[test]
    fn splittings_document_for_quadrilateral() {
        let system = coxsplit_core::samples::quadrilateral_system();
        let doc = splittings_document(&system);
        assert_eq!(doc.splittings.len(), 2);
        let cores: Vec<Vec<String>> = doc.splittings.iter().map(|s| s.core.clone()).collect();
        assert!(cores.contains(&vec!["s1".to_string(), "s3".to_string()]));
        assert!(cores.contains(&vec!["s2".to_string(), "s4".to_string()]));
        for s in &doc.splittings {
            assert!(s.core_smallness.small);
            assert_eq!(s.core_smallness.reason, "affine-type");
        }
    }
}
