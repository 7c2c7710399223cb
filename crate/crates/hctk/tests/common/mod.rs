#![allow(dead_code)]

use hctk::genlib::{self, Factor, RandomSpec};
use hctk::structure::gated_amalgam;
use hctk::PartialCube;

/// Fixed hypercellular graphs plus seeded random amalgams, all with at most
/// `max_n` vertices.
pub fn samples(max_n: usize, random: usize) -> Vec<(String, PartialCube)> {
    let mut out: Vec<(String, PartialCube)> = Vec::new();
    for name in ["K1", "K2", "P5", "C6", "C8", "C10", "Q3", "Q4", "prufer:0,0,1,4", "prufer:2,2,2"] {
        out.push((name.to_string(), genlib::named(name).unwrap()));
    }
    for fs in [
        vec![Factor::Cycle(6), Factor::Edge],
        vec![Factor::Cycle(6), Factor::Cycle(6)],
        vec![Factor::Cycle(8), Factor::Edge, Factor::Edge],
        vec![Factor::Cycle(4), Factor::Cycle(6)],
    ] {
        let name = fs.iter().map(|f| f.name()).collect::<Vec<_>>().join("x");
        out.push((name, genlib::product(&fs).unwrap()));
    }
    let c6 = genlib::named("C6").unwrap();
    out.push(("C6+C6 at a vertex".into(), gated_amalgam(&c6, &c6, &[(0, 0)]).unwrap().cube));
    out.push(("C6+C6 along an edge".into(), gated_amalgam(&c6, &c6, &[(0, 0), (1, 1)]).unwrap().cube));
    let mut seed = 0u64;
    let mut made = 0;
    while made < random {
        let spec = RandomSpec {
            seed,
            cell_budget: 2 + (seed % 6) as usize,
            max_factor: 8,
            max_vertices: max_n,
        };
        seed += 1;
        let g = genlib::random_hypercellular(&spec).unwrap().cube;
        out.push((format!("random seed {}", spec.seed), g));
        made += 1;
    }
    out.retain(|(_, g)| g.n() <= max_n);
    out
}
