//! Independent re-validation of emitted reports.
//!
//! Every claim in a report document is re-checked from the raw input
//! documents using only local matrix arithmetic and graph search written in
//! this module — none of the library's code paths are reused — so a passing
//! validation is evidence against both numerical and logic errors upstream.

use std::collections::{BTreeMap, BTreeSet};

use crate::formats::{OrderEntry, OrderValue, RepresentationDocument, SystemDocument};
use crate::report::ReportDocument;

const REL_TOL: f64 = 1e-12;
const DISP_TOL: f64 = 1e-6;

/// Checks the report against the raw documents; returns human-readable
/// violations, empty when everything holds.
pub fn validate_report(
    report: &ReportDocument,
    system: &SystemDocument,
    rep: &RepresentationDocument,
) -> Vec<String> {
    let mut violations = Vec::new();
    let mut complain = |msg: String| violations.push(msg);

    let gens = &system.generators;
    let k = gens.len();
    let index: BTreeMap<&String, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();

    // Finite-order adjacency from the raw document.
    let mut adjacency = vec![BTreeSet::new(); k];
    for OrderEntry(a, b, value) in &system.orders {
        if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
            if i != j && matches!(value, OrderValue::Finite(_)) {
                adjacency[i].insert(j);
                adjacency[j].insert(i);
            }
        }
    }

    // Constants identities.
    let c = &report.constants;
    if c.k != k {
        complain(format!("constants.k = {} but the system has {k} generators", c.k));
    }
    let mut expected_c = 1u32;
    while expected_c < 63 && c.size_x > (1usize << expected_c) + 2 {
        expected_c += 1;
    }
    if c.c != expected_c {
        complain(format!("constants.c = {} but sizeX = {} needs {expected_c}", c.c, c.size_x));
    }
    let ln3 = 3.0f64.ln();
    if (c.delta - ln3).abs() > 1e-14 {
        complain(format!("constants.delta = {} is not ln 3", c.delta));
    }
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let cd = c.c as f64 * ln3;
    let r_expected = 256.0 * (c.size_x as f64 * (20.0 * cd + 12.0 * ln3) + 4.0 * cd);
    if rel(c.r, r_expected) > REL_TOL {
        complain(format!("constants.R = {} but the formula gives {r_expected}", c.r));
    }
    let lambda_expected = 4.0 / c.mu + 2.0 * c.r;
    if rel(c.lambda_n, lambda_expected) > REL_TOL {
        complain(format!(
            "constants.lambda_n = {} but 4/mu + 2R = {lambda_expected}",
            c.lambda_n
        ));
    }
    let binom = (k * k.saturating_sub(1)) as f64 / 2.0;
    let c_expected = c.r + 2.0 * binom * c.lambda_n;
    if rel(c.c_bound, c_expected) > REL_TOL {
        complain(format!("constants.C = {} but R + 2·C(k,2)·Λ = {c_expected}", c.c_bound));
    }

    let displacement = |point: &[f64], gen: usize| -> Option<f64> {
        let name = &gens[gen];
        let matrix = rep.matrices.get(name)?;
        let n = rep.dimension + 1;
        if matrix.len() != n * n || point.len() != n {
            return None;
        }
        let mut image = vec![0.0; n];
        for (r, slot) in image.iter_mut().enumerate() {
            *slot = (0..n).map(|cc| matrix[r * n + cc] * point[cc]).sum();
        }
        let mut dot = point[0] * image[0];
        for i in 1..n {
            dot -= point[i] * image[i];
        }
        Some(if dot <= 1.0 { 0.0 } else { dot.acosh() })
    };

    match report.outcome.as_str() {
        "splitting" => {
            let Some(split) = &report.splitting else {
                complain("outcome is \"splitting\" but the splitting block is missing".into());
                return violations;
            };
            if report.bound.is_some() {
                complain("splitting outcome must not carry a bound block".into());
            }
            let plus: BTreeSet<&String> = split.plus.iter().collect();
            let minus: BTreeSet<&String> = split.minus.iter().collect();
            let core: BTreeSet<&String> = split.core.iter().collect();
            let all: BTreeSet<&String> = gens.iter().collect();
            if &plus | &minus != all {
                complain("plus ∪ minus does not cover the generators".into());
            }
            if &plus & &minus != core {
                complain("core is not plus ∩ minus".into());
            }
            if plus == all || minus == all {
                complain("splitting is trivial: one side is the full generator set".into());
            }
            if split.trivial {
                complain("reported splitting is flagged trivial".into());
            }
            // The core must separate: no finite-order bond between the two
            // open sides, and both sides nonempty.
            let side = |names: &BTreeSet<&String>| -> BTreeSet<usize> {
                names
                    .iter()
                    .filter(|n| !core.contains(*n))
                    .filter_map(|n| index.get(*n).copied())
                    .collect()
            };
            let open_plus = side(&plus);
            let open_minus = side(&minus);
            if open_plus.is_empty() || open_minus.is_empty() {
                complain("a splitting side adds no generators beyond the core".into());
            }
            for &i in &open_plus {
                for &j in &open_minus {
                    if adjacency[i].contains(&j) {
                        complain(format!(
                            "generators {} and {} are joined by a finite order across the core",
                            gens[i], gens[j]
                        ));
                    }
                }
            }
            if let Some(midpoint) = &split.midpoint {
                for (name, &claimed) in &split.displacements {
                    let Some(&gen) = index.get(name) else {
                        complain(format!("displacement names unknown generator {name:?}"));
                        continue;
                    };
                    match displacement(midpoint, gen) {
                        Some(d) => {
                            if (d - claimed).abs() > DISP_TOL {
                                complain(format!(
                                    "midpoint displacement of {name}: recomputed {d}, claimed {claimed}"
                                ));
                            }
                            if d > c.mu + DISP_TOL {
                                complain(format!(
                                    "midpoint displacement of {name} = {d} exceeds mu = {}",
                                    c.mu
                                ));
                            }
                        }
                        None => complain(format!("cannot recompute displacement for {name}")),
                    }
                }
            }
        }
        "bound" => {
            let Some(bound) = &report.bound else {
                complain("outcome is \"bound\" but the bound block is missing".into());
                return violations;
            };
            if report.splitting.is_some() {
                complain("bound outcome must not carry a splitting block".into());
            }
            if rel(bound.c_bound, c.c_bound) > REL_TOL {
                complain("bound.C differs from constants.C".into());
            }
            let mut max_seen = 0.0f64;
            for (name, &claimed) in &bound.displacements {
                let Some(&gen) = index.get(name) else {
                    complain(format!("displacement names unknown generator {name:?}"));
                    continue;
                };
                match displacement(&bound.witness, gen) {
                    Some(d) => {
                        max_seen = max_seen.max(d);
                        if (d - claimed).abs() > DISP_TOL {
                            complain(format!(
                                "witness displacement of {name}: recomputed {d}, claimed {claimed}"
                            ));
                        }
                    }
                    None => complain(format!("cannot recompute displacement for {name}")),
                }
            }
            if bound.displacements.len() != k {
                complain(format!(
                    "bound block lists {} displacements for {k} generators",
                    bound.displacements.len()
                ));
            }
            if (max_seen - bound.witness_value).abs() > DISP_TOL {
                complain(format!(
                    "witness_value = {} but the recomputed maximum is {max_seen}",
                    bound.witness_value
                ));
            }
            if max_seen > c.c_bound + DISP_TOL {
                complain(format!(
                    "witness displacement {max_seen} exceeds C = {}",
                    c.c_bound
                ));
            }
        }
        other => complain(format!("unknown outcome tag {other:?}")),
    }

    violations
}
