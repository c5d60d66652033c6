//! Finite/affine type recognition for special subgroups.
//!
//! A Coxeter group is small (virtually solvable) exactly when every
//! irreducible component of its system is of finite or affine type.
//! Irreducible components are taken in the Coxeter-graph sense: generators
//! are joined when `m_ij > 2` (including `∞`), since `m_ij = 2` means the
//! factors commute and the group splits as a direct product across such
//! pairs.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::IndexSet;
use crate::coxeter::{CoxeterOrder, CoxeterSystem};

/// Outcome of the smallness classification of a special subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallnessVerdict {
    pub small: bool,
    pub reason: SmallnessReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallnessReason {
    FiniteType,
    AffineType,
    MixedFiniteAffine,
    ContainsNonAffineIrreducibleComponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ComponentType {
    Finite,
    Affine,
    Other,
}

/// Classifies the special subgroup generated by `subset`.
///
/// The subgroup is small iff every irreducible component matches a finite
/// type (`A`, `B/C`, `D`, `E6`–`E8`, `F4`, `H3`, `H4`, `I₂(m)`) or an affine
/// type (`Ã₁` through the `Ẽ`/`F̃`/`G̃` families).
pub fn classify_smallness(subset: IndexSet, system: &CoxeterSystem) -> SmallnessVerdict {
    let mut any_finite = false;
    let mut any_affine = false;
    for component in irreducible_components(subset, system) {
        match classify_component(&component, system) {
            ComponentType::Finite => any_finite = true,
            ComponentType::Affine => any_affine = true,
            ComponentType::Other => {
                return SmallnessVerdict {
                    small: false,
                    reason: SmallnessReason::ContainsNonAffineIrreducibleComponent,
                }
            }
        }
    }
    let reason = match (any_finite, any_affine) {
        (_, false) => SmallnessReason::FiniteType,
        (false, true) => SmallnessReason::AffineType,
        (true, true) => SmallnessReason::MixedFiniteAffine,
    };
    SmallnessVerdict { small: true, reason }
}

fn joined(system: &CoxeterSystem, i: usize, j: usize) -> bool {
    match system.order(i, j) {
        CoxeterOrder::Finite(m) => m > 2,
        CoxeterOrder::Infinite => true,
    }
}

/// Components of `subset` under the Coxeter-graph adjacency `m_ij > 2`.
fn irreducible_components(subset: IndexSet, system: &CoxeterSystem) -> Vec<Vec<usize>> {
    let mut seen = IndexSet::EMPTY;
    let mut components = Vec::new();
    for start in subset.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            comp.push(v);
            for u in subset.iter() {
                if !seen.contains(u) && joined(system, v, u) {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

fn classify_component(comp: &[usize], system: &CoxeterSystem) -> ComponentType {
    let r = comp.len();
    if r == 1 {
        return ComponentType::Finite; // A1
    }
    if r == 2 {
        return match system.order(comp[0], comp[1]) {
            CoxeterOrder::Infinite => ComponentType::Affine, // Ã1
            CoxeterOrder::Finite(_) => ComponentType::Finite, // I2(m)
        };
    }
    // Rank ≥ 3: collect the graph structure within the component.  Pairs not
    // joined here have m = 2 by definition, matching the implicit non-edges
    // of the type diagrams.
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    let mut degree = vec![0usize; r];
    for a in 0..r {
        for b in (a + 1)..r {
            match system.order(comp[a], comp[b]) {
                CoxeterOrder::Finite(2) => {}
                CoxeterOrder::Finite(m) => {
                    edges.push((a, b, m));
                    degree[a] += 1;
                    degree[b] += 1;
                }
                // No type of rank ≥ 3 contains an infinite bond.
                CoxeterOrder::Infinite => return ComponentType::Other,
            }
        }
    }
    let e = edges.len();
    if e == r {
        // Single cycle: Ã_{r-1} when every degree is 2 and every label is 3.
        if degree.iter().all(|&d| d == 2) && edges.iter().all(|&(_, _, m)| m == 3) {
            return ComponentType::Affine;
        }
        return ComponentType::Other;
    }
    if e != r - 1 {
        return ComponentType::Other;
    }

    let adj = |v: usize| -> Vec<(usize, u32)> {
        edges
            .iter()
            .filter_map(|&(a, b, m)| {
                if a == v {
                    Some((b, m))
                } else if b == v {
                    Some((a, m))
                } else {
                    None
                }
            })
            .collect()
    };
    let max_degree = *degree.iter().max().unwrap();
    if max_degree >= 5 {
        return ComponentType::Other;
    }
    if max_degree == 4 {
        // D̃4: a star of four 3-labelled edges.
        let star = r == 5
            && degree.iter().filter(|&&d| d == 4).count() == 1
            && degree.iter().filter(|&&d| d == 1).count() == 4
            && edges.iter().all(|&(_, _, m)| m == 3);
        return if star { ComponentType::Affine } else { ComponentType::Other };
    }
    let branches: Vec<usize> = (0..r).filter(|&v| degree[v] == 3).collect();
    match branches.len() {
        0 => {
            // Path: read the label sequence end to end.
            let start = (0..r).find(|&v| degree[v] == 1).unwrap();
            let mut labels = Vec::with_capacity(r - 1);
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = adj(cur).into_iter().find(|&(u, _)| u != prev);
                match next {
                    Some((u, m)) => {
                        labels.push(m);
                        prev = cur;
                        cur = u;
                    }
                    None => break,
                }
            }
            classify_path(&labels)
        }
        1 => {
            let b = branches[0];
            let mut arms: Vec<Vec<u32>> = Vec::new();
            for (first, m0) in adj(b) {
                let mut labels = vec![m0];
                let mut prev = b;
                let mut cur = first;
                while let Some((u, m)) = adj(cur).into_iter().find(|&(u, _)| u != prev) {
                    labels.push(m);
                    prev = cur;
                    cur = u;
                }
                arms.push(labels);
            }
            arms.sort_by_key(|a| a.len());
            classify_branched(&arms)
        }
        2 => {
            // D̃_n: all labels 3, both branch vertices carrying two leaves.
            if !edges.iter().all(|&(_, _, m)| m == 3) {
                return ComponentType::Other;
            }
            let forked = branches.iter().all(|&v| {
                adj(v).iter().filter(|&&(u, _)| degree[u] == 1).count() == 2
            });
            if forked {
                ComponentType::Affine
            } else {
                ComponentType::Other
            }
        }
        _ => ComponentType::Other,
    }
}

/// Classifies a path component of rank ≥ 3 from its edge labels.
fn classify_path(labels: &[u32]) -> ComponentType {
    let r = labels.len() + 1;
    let non3: Vec<(usize, u32)> = labels
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, m)| m != 3)
        .collect();
    match non3.as_slice() {
        [] => ComponentType::Finite, // A_r
        [(pos, 4)] => {
            let end = *pos == 0 || *pos == labels.len() - 1;
            if end {
                ComponentType::Finite // B_r
            } else if r == 4 {
                ComponentType::Finite // F4
            } else if r == 5 {
                ComponentType::Affine // F̃4
            } else {
                ComponentType::Other
            }
        }
        [(pos, 5)] => {
            let end = *pos == 0 || *pos == labels.len() - 1;
            if end && (r == 3 || r == 4) {
                ComponentType::Finite // H3, H4
            } else {
                ComponentType::Other
            }
        }
        [(pos, 6)] => {
            if r == 3 && (*pos == 0 || *pos == 1) {
                ComponentType::Affine // G̃2
            } else {
                ComponentType::Other
            }
        }
        [(p1, 4), (p2, 4)] if *p1 == 0 && *p2 == labels.len() - 1 => {
            ComponentType::Affine // C̃_{r-1}
        }
        _ => ComponentType::Other,
    }
}

/// Classifies a component with a single degree-3 branch vertex; `arms` holds
/// the per-arm label sequences ordered by length.
fn classify_branched(arms: &[Vec<u32>]) -> ComponentType {
    let lengths: Vec<usize> = arms.iter().map(|a| a.len()).collect();
    let all3 = arms.iter().all(|a| a.iter().all(|&m| m == 3));
    if all3 {
        return match (lengths[0], lengths[1], lengths[2]) {
            (1, 1, _) => ComponentType::Finite, // D_r
            (1, 2, 2) | (1, 2, 3) | (1, 2, 4) => ComponentType::Finite, // E6, E7, E8
            (2, 2, 2) | (1, 3, 3) | (1, 2, 5) => ComponentType::Affine, // Ẽ6, Ẽ7, Ẽ8
            _ => ComponentType::Other,
        };
    }
    // B̃_n: two 3-labelled fork arms of length one, and one arm whose labels
    // are all 3 except a terminal 4 at the leaf end.
    let fours: usize = arms
        .iter()
        .map(|a| a.iter().filter(|&&m| m == 4).count())
        .sum();
    let others: usize = arms
        .iter()
        .map(|a| a.iter().filter(|&&m| m != 3 && m != 4).count())
        .sum();
    if fours != 1 || others != 0 {
        return ComponentType::Other;
    }
    let fork_arms: Vec<&Vec<u32>> = arms.iter().filter(|a| a.len() == 1 && a[0] == 3).collect();
    let four_arm = arms.iter().find(|a| a.iter().any(|&m| m == 4)).unwrap();
    let four_terminal = *four_arm.last().unwrap() == 4
        && four_arm[..four_arm.len() - 1].iter().all(|&m| m == 3);
    if fork_arms.len() == 2 && four_terminal {
        ComponentType::Affine // B̃_n
    } else {
        ComponentType::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;

    /// Builds a system from an explicit full order table (upper triangle).
    fn system_from_table(k: usize, pairs: &[(usize, usize, CoxeterOrder)]) -> CoxeterSystem {
        let gens: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
        CoxeterSystem::new(gens, pairs).unwrap()
    }

    /// Declared bonds plus `m = 2` for every remaining pair, as in a genuine
    /// finite/affine type table entry.
    fn commuting_closure(k: usize, bonds: &[(usize, usize, u32)]) -> CoxeterSystem {
        let mut pairs: Vec<(usize, usize, CoxeterOrder)> = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let m = bonds
                    .iter()
                    .find(|&&(a, b, _)| (a.min(b), a.max(b)) == (i, j))
                    .map(|&(_, _, m)| m)
                    .unwrap_or(2);
                pairs.push((i, j, CoxeterOrder::Finite(m)));
            }
        }
        system_from_table(k, &pairs)
    }

    fn path_system(labels: &[u32]) -> CoxeterSystem {
        let bonds: Vec<(usize, usize, u32)> = labels
            .iter()
            .enumerate()
            .map(|(i, &m)| (i, i + 1, m))
            .collect();
        commuting_closure(labels.len() + 1, &bonds)
    }

    fn full(system: &CoxeterSystem) -> IndexSet {
        IndexSet::universe(system.rank())
    }

    fn assert_small(system: &CoxeterSystem, reason: SmallnessReason) {
        let v = classify_smallness(full(system), system);
        assert!(v.small, "expected small, got {v:?}");
        assert_eq!(v.reason, reason);
    }

    fn assert_not_small(system: &CoxeterSystem) {
        let v = classify_smallness(full(system), system);
        assert!(!v.small, "expected not small, got {v:?}");
    }

    #[test]
    fn singletons_and_dihedrals() {
        let sys = system_from_table(2, &[(0, 1, CoxeterOrder::Finite(7))]);
        assert_small(&sys, SmallnessReason::FiniteType);
        assert_eq!(
            classify_smallness(IndexSet::singleton(0), &sys).reason,
            SmallnessReason::FiniteType
        );
        let inf = system_from_table(2, &[]);
        assert_small(&inf, SmallnessReason::AffineType);
        // Empty subset: the trivial group.
        assert!(classify_smallness(IndexSet::EMPTY, &inf).small);
    }

    #[test]
    fn finite_path_types() {
        assert_small(&path_system(&[3, 3, 3, 3]), SmallnessReason::FiniteType); // A5
        assert_small(&path_system(&[4, 3, 3]), SmallnessReason::FiniteType); // B4
        assert_small(&path_system(&[3, 3, 4]), SmallnessReason::FiniteType); // B4 reversed
        assert_small(&path_system(&[3, 4, 3]), SmallnessReason::FiniteType); // F4
        assert_small(&path_system(&[5, 3]), SmallnessReason::FiniteType); // H3
        assert_small(&path_system(&[5, 3, 3]), SmallnessReason::FiniteType); // H4
    }

    #[test]
    fn affine_path_types() {
        assert_small(&path_system(&[4, 4]), SmallnessReason::AffineType); // C̃2
        assert_small(&path_system(&[4, 3, 4]), SmallnessReason::AffineType); // C̃3
        assert_small(&path_system(&[4, 3, 3, 4]), SmallnessReason::AffineType); // C̃4
        assert_small(&path_system(&[6, 3]), SmallnessReason::AffineType); // G̃2
        assert_small(&path_system(&[3, 4, 3, 3]), SmallnessReason::AffineType); // F̃4
        assert_small(&path_system(&[3, 3, 4, 3]), SmallnessReason::AffineType); // F̃4 reversed
    }

    #[test]
    fn non_type_paths() {
        assert_not_small(&path_system(&[5, 3, 3, 3])); // H5 does not exist
        assert_not_small(&path_system(&[5, 4]));
        assert_not_small(&path_system(&[3, 5, 3]));
        assert_not_small(&path_system(&[7, 3]));
        assert_not_small(&path_system(&[4, 4, 4]));
        assert_not_small(&path_system(&[6, 3, 3]));
        assert_not_small(&path_system(&[3, 3, 6]));
    }

    fn branched(arms: &[&[u32]]) -> CoxeterSystem {
        // Vertex 0 is the branch point.
        let mut bonds = Vec::new();
        let mut next = 1;
        for arm in arms {
            let mut prev = 0;
            for &m in *arm {
                bonds.push((prev, next, m));
                prev = next;
                next += 1;
            }
        }
        commuting_closure(next, &bonds)
    }

    #[test]
    fn branched_types() {
        assert_small(&branched(&[&[3], &[3], &[3]]), SmallnessReason::FiniteType); // D4
        assert_small(&branched(&[&[3], &[3], &[3, 3, 3]]), SmallnessReason::FiniteType); // D6
        assert_small(&branched(&[&[3], &[3, 3], &[3, 3]]), SmallnessReason::FiniteType); // E6
        assert_small(&branched(&[&[3], &[3, 3], &[3, 3, 3]]), SmallnessReason::FiniteType); // E7
        assert_small(&branched(&[&[3], &[3, 3], &[3, 3, 3, 3]]), SmallnessReason::FiniteType); // E8
        assert_small(&branched(&[&[3, 3], &[3, 3], &[3, 3]]), SmallnessReason::AffineType); // Ẽ6
        assert_small(&branched(&[&[3], &[3, 3, 3], &[3, 3, 3]]), SmallnessReason::AffineType); // Ẽ7
        assert_small(
            &branched(&[&[3], &[3, 3], &[3, 3, 3, 3, 3]]),
            SmallnessReason::AffineType,
        ); // Ẽ8
        assert_small(&branched(&[&[3], &[3], &[4]]), SmallnessReason::AffineType); // B̃3
        assert_small(&branched(&[&[3], &[3], &[3, 4]]), SmallnessReason::AffineType); // B̃4
        assert_small(&branched(&[&[3], &[3], &[3, 3, 4]]), SmallnessReason::AffineType); // B̃5

        assert_not_small(&branched(&[&[3], &[3, 3], &[3, 3, 3, 3, 3, 3]]));
        assert_not_small(&branched(&[&[3], &[3], &[4, 3]])); // 4 next to the fork
        assert_not_small(&branched(&[&[4], &[3], &[3, 4]]));
        assert_not_small(&branched(&[&[3, 3], &[3, 3], &[3, 3, 3]]));
    }

    #[test]
    fn stars_and_double_forks() {
        // D̃4: star with four 3-edges.
        let d4t = commuting_closure(5, &[(0, 1, 3), (0, 2, 3), (0, 3, 3), (0, 4, 3)]);
        assert_small(&d4t, SmallnessReason::AffineType);
        // D̃5: two adjacent forks.
        let d5t = commuting_closure(
            6,
            &[(0, 1, 3), (0, 2, 3), (0, 3, 3), (3, 4, 3), (3, 5, 3)],
        );
        assert_small(&d5t, SmallnessReason::AffineType);
        // Five-leaf star: no type.
        let star5 = commuting_closure(
            6,
            &[(0, 1, 3), (0, 2, 3), (0, 3, 3), (0, 4, 3), (0, 5, 3)],
        );
        assert_not_small(&star5);
    }

    #[test]
    fn cycles() {
        // Ã2: triangle of 3s.
        let a2t = commuting_closure(3, &[(0, 1, 3), (1, 2, 3), (0, 2, 3)]);
        assert_small(&a2t, SmallnessReason::AffineType);
        // (3,4,4) triangle group: hyperbolic, not small.
        let hyp = commuting_closure(3, &[(0, 1, 4), (1, 2, 4), (0, 2, 3)]);
        assert_not_small(&hyp);
        // Square of 3s with no chords: Ã3.
        let a3t = commuting_closure(4, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (0, 3, 3)]);
        assert_small(&a3t, SmallnessReason::AffineType);
    }

    #[test]
    fn quadrilateral_group_is_not_small() {
        let sys = crate::coxeter::tests::quadrilateral();
        assert_not_small(&sys);
        // But its separating cores are: {s1,s3} and {s2,s4} are Ã1.
        let v = classify_smallness([0usize, 2].into_iter().collect(), &sys);
        assert!(v.small);
        assert_eq!(v.reason, SmallnessReason::AffineType);
    }

    #[test]
    fn products_and_mixtures() {
        // A1 × Ã1 via commuting pairs: {s0,s1} with m=2 joins nothing.
        let sys = system_from_table(
            3,
            &[
                (0, 1, CoxeterOrder::Finite(2)),
                (1, 2, CoxeterOrder::Finite(2)),
            ],
        );
        // m02 = ∞: an Ã1 factor plus an A1 factor.
        let v = classify_smallness(full(&sys), &sys);
        assert!(v.small);
        assert_eq!(v.reason, SmallnessReason::MixedFiniteAffine);
    }
}
