//! Restrictions, contractions, expansions and pc-minor witnesses.

mod common;

use hctk::genlib::{catalog_small, half_expanded_cycle, named};
use hctk::iso::canonical_form;
use hctk::minors::{
    apply_witness, contract, contract_many, is_hypercellular, isometric_expansion, pc_minor_witness, q3_minus,
    restrict, verify_witness,
};
use hctk::{recognize_partial_cube, PartialCube, Sign, SignedSet, VertexSet};
use proptest::prelude::*;
use std::sync::OnceLock;

fn pool() -> &'static [PartialCube] {
    static POOL: OnceLock<Vec<PartialCube>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut v: Vec<PartialCube> = catalog_small(4).unwrap().into_iter().filter(|g| g.num_classes() >= 1).collect();
        v.extend(common::samples(40, 8).into_iter().map(|(_, g)| g).filter(|g| g.num_classes() >= 1));
        v
    })
}

fn subset(n: usize, bits: u64) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|&i| bits >> (i % 64) & 1 == 1))
}

fn hamming_embedding(pc: &PartialCube) -> bool {
    let again = recognize_partial_cube(pc.graph()).expect("still a partial cube");
    again.num_classes() == pc.num_classes()
        && (0..pc.n()).all(|x| (0..pc.n()).all(|y| pc.coords(x).symmetric_difference(pc.coords(y)).count() == pc.d(x, y)))
}

fn sign(b: bool) -> Sign {
    if b {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn isometric(pc: &PartialCube, s: &VertexSet) -> bool {
    if s.is_empty() {
        return false;
    }
    let Ok((g, labels)) = pc.graph().induced(s) else {
        return false;
    };
    (0..g.n()).all(|a| {
        let d = g.distances(a);
        (0..g.n()).all(|b| d[b] == pc.d(labels[a], labels[b]))
    })
}

#[test]
fn contraction_order_does_not_matter() {
    for g in pool().iter().filter(|g| g.num_classes() >= 3) {
        let k = g.num_classes();
        let all = contract_many(g, &[0, 1, k - 1]).unwrap().cube;
        let step = contract(&contract(&contract(g, k - 1).unwrap().cube, 1).unwrap().cube, 0).unwrap().cube;
        assert_eq!(all, step);
    }
}

#[test]
fn witnesses_for_half_expanded_cycles() {
    let q = q3_minus();
    for (n, l) in [(3, 2), (3, 3), (4, 2), (4, 3)] {
        let ex = half_expanded_cycle(n, l).unwrap();
        let w = pc_minor_witness(&ex, &q).unwrap().expect("a Q3- minor");
        assert!(verify_witness(&ex, &q, &w));
        assert!(is_hypercellular(&ex).is_err());
    }
    for name in ["Q3", "Q4", "C6", "prufer:0,0,1"] {
        assert!(pc_minor_witness(&named(name).unwrap(), &q).unwrap().is_none(), "{name}");
    }
}

#[test]
fn every_generated_minor_is_found() {
    for (i, g) in pool().iter().enumerate().filter(|(_, g)| g.num_classes() <= 6 && g.n() <= 24) {
        let k = g.num_classes();
        let fs: Vec<usize> = (0..k).filter(|f| (f + i) % 3 == 0).collect();
        let c = contract_many(g, &fs).unwrap();
        let mut target = c.cube;
        if target.num_classes() >= 2 {
            let a = SignedSet::new().with(i % target.num_classes(), sign(i % 2 == 0));
            if let Some(sub) = restrict(&target, &a).unwrap() {
                target = sub.cube;
            }
        }
        let w = pc_minor_witness(g, &target).unwrap().expect("minor must be found");
        assert!(verify_witness(g, &target, &w));
        let m = apply_witness(g, &w).unwrap();
        assert_eq!(canonical_form(&m).unwrap(), canonical_form(&target).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn minors_are_partial_cubes(i in 0usize..10_000, f_raw in 0usize..64, s in any::<bool>()) {
        let g = &pool()[i % pool().len()];
        let f = f_raw % g.num_classes();
        let c = contract(g, f).unwrap();
        prop_assert!(hamming_embedding(&c.cube));
        for v in 0..g.n() {
            for u in g.graph().neighbors(v) {
                prop_assert!(c.vertex_map[v] == c.vertex_map[*u] || c.cube.graph().has_edge(c.vertex_map[v], c.vertex_map[*u]));
            }
        }
        let r = restrict(g, &SignedSet::new().with(f, sign(s))).unwrap().unwrap();
        prop_assert!(hamming_embedding(&r.cube));
        prop_assert_eq!(r.vertices.len(), g.halfspace(f, sign(s)).unwrap().len());
    }

    #[test]
    fn hull_commutes_with_contraction(i in 0usize..10_000, f_raw in 0usize..64, bits in any::<u64>()) {
        let g = &pool()[i % pool().len()];
        let f = f_raw % g.num_classes();
        let c = contract(g, f).unwrap();
        let s = subset(g.n(), bits | 1);
        let image = |x: &VertexSet| VertexSet::from_iter(c.cube.n(), x.iter().map(|v| c.vertex_map[v]));
        let lhs = image(&g.convex_hull(&s).unwrap());
        let rhs = c.cube.convex_hull(&image(&s)).unwrap();
        prop_assert!(lhs.is_subset(&rhs));
        let crosses = s.intersects(g.halfspace(f, Sign::Minus).unwrap()) && s.intersects(g.halfspace(f, Sign::Plus).unwrap());
        if crosses {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gated_sets_stay_gated_in_minors(i in 0usize..10_000, f_raw in 0usize..64, bits in any::<u64>(), s in any::<bool>()) {
        let g = &pool()[i % pool().len()];
        let f = f_raw % g.num_classes();
        let x = g.gated_hull(&subset(g.n(), bits | 1)).unwrap();
        let c = contract(g, f).unwrap();
        let img = VertexSet::from_iter(c.cube.n(), x.iter().map(|v| c.vertex_map[v]));
        prop_assert!(c.cube.is_gated(&img).unwrap());
        let r = restrict(g, &SignedSet::new().with(f, sign(s))).unwrap().unwrap();
        let inside: Vec<usize> = (0..r.vertices.len()).filter(|&j| x.contains(r.vertices[j])).collect();
        if !inside.is_empty() {
            prop_assert!(r.cube.is_gated(&VertexSet::from_iter(r.cube.n(), inside)).unwrap());
        }
    }

    #[test]
    fn expansion_round_trip(i in 0usize..10_000, a in any::<u64>(), b in any::<u64>(), mode in 0u8..3) {
        let g = &pool()[i % pool().len()];
        let n = g.n();
        let (s1, s2) = match mode {
            // The whole graph against a convex set.
            0 => (g.all(), g.convex_hull(&subset(n, a | 1)).unwrap()),
            // Two halfspaces grown by a common gated set.
            1 => {
                let f = (a as usize) % g.num_classes();
                let y = g.gated_hull(&subset(n, b | 1)).unwrap();
                (g.halfspace(f, Sign::Minus).unwrap().union(&y), g.halfspace(f, Sign::Plus).unwrap().union(&y))
            }
            // Arbitrary sets covering the graph, usually invalid.
            _ => {
                let s1 = subset(n, a | 1);
                (s1.clone(), s1.complement().union(&subset(n, b)))
            }
        };
        let valid = s1.union(&s2).is_full()
            && s1.intersects(&s2)
            && !g.graph().edges().iter().any(|&(u, v)| {
                let side = |w: usize| (s1.contains(w) && !s2.contains(w), s2.contains(w) && !s1.contains(w));
                (side(u).0 && side(v).1) || (side(u).1 && side(v).0)
            })
            && isometric(g, &s1)
            && isometric(g, &s2);
        match isometric_expansion(g, &s1, &s2) {
            Ok(e) => {
                prop_assert!(valid);
                prop_assert_eq!(e.cube.num_classes(), g.num_classes() + 1);
                prop_assert!(hamming_embedding(&e.cube));
                prop_assert_eq!(e.cube.n(), n + s1.intersection(&s2).len());
                let back = contract(&e.cube, e.new_class).unwrap().cube;
                prop_assert_eq!(&back, g);
            }
            Err(_) => prop_assert!(!valid),
        }
    }
}
