//! Enumeration of special splittings checked against an independent
//! brute-force oracle over a corpus of small systems, plus amalgamation
//! round trips.

use std::collections::BTreeSet;

use coxsplit_core::bitset::IndexSet;
use coxsplit_core::coxeter::{
    classify_smallness, enumerate_special_splittings, induced_subdiagram, is_separating,
    visual_amalgamation, CoxeterDiagram, CoxeterOrder, CoxeterSystem,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Corpus of systems with rank up to 6: paths, cycles, stars, complete
/// graphs and seeded random order tables.
fn corpus() -> Vec<CoxeterSystem> {
    let mut out = Vec::new();
    let gens = |k: usize| (1..=k).map(|i| format!("s{i}")).collect::<Vec<_>>();
    for k in 2..=6 {
        // Path with mixed labels.
        let pairs: Vec<(usize, usize, CoxeterOrder)> = (0..k - 1)
            .map(|i| (i, i + 1, CoxeterOrder::Finite(3 + (i as u32 % 3))))
            .collect();
        out.push(CoxeterSystem::new(gens(k), &pairs).unwrap());
        // Cycle.
        if k >= 3 {
            let mut pairs: Vec<(usize, usize, CoxeterOrder)> = (0..k - 1)
                .map(|i| (i, i + 1, CoxeterOrder::Finite(3)))
                .collect();
            pairs.push((0, k - 1, CoxeterOrder::Finite(4)));
            out.push(CoxeterSystem::new(gens(k), &pairs).unwrap());
        }
        // Star.
        if k >= 3 {
            let pairs: Vec<(usize, usize, CoxeterOrder)> =
                (1..k).map(|i| (0, i, CoxeterOrder::Finite(3))).collect();
            out.push(CoxeterSystem::new(gens(k), &pairs).unwrap());
        }
        // Complete graph of 3s.
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                pairs.push((i, j, CoxeterOrder::Finite(3)));
            }
        }
        out.push(CoxeterSystem::new(gens(k), &pairs).unwrap());
        // Disconnected: path plus isolated vertex.
        if k >= 3 {
            let pairs: Vec<(usize, usize, CoxeterOrder)> = (0..k - 2)
                .map(|i| (i, i + 1, CoxeterOrder::Finite(3)))
                .collect();
            out.push(CoxeterSystem::new(gens(k), &pairs).unwrap());
        }
    }
    // Seeded random order tables.
    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    for _ in 0..40 {
        let k = rng.gen_range(2..=6);
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                match rng.gen_range(0..4) {
                    0 => {} // infinite
                    1 => pairs.push((i, j, CoxeterOrder::Finite(2))),
                    2 => pairs.push((i, j, CoxeterOrder::Finite(3))),
                    _ => pairs.push((i, j, CoxeterOrder::Finite(rng.gen_range(4..8)))),
                }
            }
        }
        out.push(CoxeterSystem::new(gens(k), &pairs).unwrap());
    }
    out.push(coxsplit_core::samples::quadrilateral_system());
    out
}

/// Independent splitting oracle: own adjacency, own component search, all
/// subsets and all unordered nonempty bipartitions of the components.
fn oracle_splittings(diagram: &CoxeterDiagram) -> BTreeSet<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let k = diagram.vertex_count();
    let mut adjacency = vec![vec![false; k]; k];
    for e in diagram.edges() {
        adjacency[e.i][e.j] = true;
        adjacency[e.j][e.i] = true;
    }
    let mut found = BTreeSet::new();
    for core_bits in 0u64..(1 << k) {
        let in_core = |v: usize| core_bits & (1 << v) != 0;
        // Components of the complement.
        let mut comp_of = vec![usize::MAX; k];
        let mut ncomp = 0;
        for start in 0..k {
            if in_core(start) || comp_of[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp_of[start] = ncomp;
            while let Some(v) = stack.pop() {
                for u in 0..k {
                    if adjacency[v][u] && !in_core(u) && comp_of[u] == usize::MAX {
                        comp_of[u] = ncomp;
                        stack.push(u);
                    }
                }
            }
            ncomp += 1;
        }
        if ncomp < 2 {
            continue;
        }
        for assign_bits in 0u64..(1 << ncomp) {
            let side_a = |c: usize| assign_bits & (1 << c) != 0;
            if assign_bits == 0 || assign_bits == (1 << ncomp) - 1 || !side_a(0) {
                continue; // empty side, or the swapped duplicate
            }
            let mut plus: Vec<usize> = (0..k).filter(|&v| in_core(v)).collect();
            let mut minus = plus.clone();
            for v in 0..k {
                if !in_core(v) {
                    if side_a(comp_of[v]) {
                        plus.push(v);
                    } else {
                        minus.push(v);
                    }
                }
            }
            plus.sort_unstable();
            minus.sort_unstable();
            let core: Vec<usize> = (0..k).filter(|&v| in_core(v)).collect();
            let (a, b) = if plus <= minus { (plus, minus) } else { (minus, plus) };
            found.insert((a, core, b));
        }
    }
    found
}

#[test]
fn enumeration_matches_oracle_over_corpus() {
    for system in corpus() {
        let diagram = system.diagram();
        let got: BTreeSet<(Vec<usize>, Vec<usize>, Vec<usize>)> =
            enumerate_special_splittings(&diagram)
                .into_iter()
                .map(|s| {
                    (
                        s.plus.iter().collect(),
                        s.core.iter().collect(),
                        s.minus.iter().collect(),
                    )
                })
                .collect();
        let expected = oracle_splittings(&diagram);
        assert_eq!(got, expected, "system {:?}", system.generators());
    }
}

#[test]
fn enumerated_splittings_satisfy_invariants() {
    for system in corpus() {
        let diagram = system.diagram();
        let full = IndexSet::universe(system.rank());
        for s in enumerate_special_splittings(&diagram) {
            assert_eq!(s.core, s.plus.intersection(s.minus));
            assert_eq!(s.plus.union(s.minus), full);
            assert_ne!(s.plus, full);
            assert_ne!(s.minus, full);
            assert!(!s.trivial);
            assert!(is_separating(s.core, &diagram));
        }
    }
}

#[test]
fn amalgamation_round_trips_over_corpus() {
    for system in corpus() {
        let diagram = system.diagram();
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
            assert_eq!(glued.vertex_count(), diagram.vertex_count());
            assert_eq!(glued.edges().len(), diagram.edges().len());
            for e in diagram.edges() {
                let ni = &diagram.vertex_names()[e.i];
                let nj = &diagram.vertex_names()[e.j];
                let gi = glued.vertex_names().iter().position(|n| n == ni).unwrap();
                let gj = glued.vertex_names().iter().position(|n| n == nj).unwrap();
                assert_eq!(glued.label(gi, gj), Some(e.label));
            }
        }
    }
}

#[test]
fn single_generators_are_small() {
    for system in corpus() {
        for i in 0..system.rank() {
            let v = classify_smallness(IndexSet::singleton(i), &system);
            assert!(v.small);
        }
    }
}
