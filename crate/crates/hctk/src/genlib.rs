//! Generators: products of edges and even cycles, named graphs, full
//! subdivisions, half-expanded cycles, seeded random hypercellular graphs and
//! the exhaustive catalog of small partial cubes.

use crate::cells::{cell_complex, Cell};
pub use crate::cells::Factor;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::limits;
use crate::minors::isometric_expansion;
use crate::pcube::{recognize_partial_cube, PartialCube, SignVector};
use crate::structure::gated_amalgam;
use crate::vset::VertexSet;
use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

fn factor_coords(f: Factor) -> Result<(usize, Vec<Vec<bool>>)> {
    match f {
        Factor::Edge => Ok((1, vec![vec![false], vec![true]])),
        Factor::Cycle(l) if l >= 4 && l % 2 == 0 => {
            let m = l / 2;
            let rows = (0..l).map(|p| (0..m).map(|j| j < p && p <= j + m).collect()).collect();
            Ok((m, rows))
        }
        Factor::Cycle(l) => Err(Error::Precondition(format!(
            "cycle factor must be even and at least 4, got {l}"
        ))),
    }
}

/// Cartesian product; vertices are enumerated lexicographically with the
/// first factor most significant.
pub fn product(factors: &[Factor]) -> Result<PartialCube> {
    let parts: Vec<(usize, Vec<Vec<bool>>)> = factors.iter().map(|&f| factor_coords(f)).collect::<Result<_>>()?;
    let dim: usize = parts.iter().map(|p| p.0).sum();
    let mut vectors: Vec<SignVector> = vec![FixedBitSet::with_capacity(dim)];
    let mut offset = 0;
    for (m, rows) in &parts {
        let mut next = Vec::with_capacity(vectors.len() * rows.len());
        for v in &vectors {
            for r in rows {
                let mut w = v.clone();
                for (j, &b) in r.iter().enumerate() {
                    w.set(offset + j, b);
                }
                next.push(w);
            }
        }
        vectors = next;
        offset += m;
    }
    Ok(PartialCube::from_sign_vectors(&vectors)?.0)
}

fn cube_edges(d: usize) -> Vec<(usize, usize)> {
    let n = 1usize << d;
    (0..n)
        .flat_map(|a| (0..d).map(move |b| (a, a ^ (1 << b))))
        .filter(|&(a, b)| a < b)
        .collect()
}

fn cube_minus_top(d: usize) -> Result<Graph> {
    let top = (1usize << d) - 1;
    let e = cube_edges(d).into_iter().filter(|&(a, b)| a != top && b != top);
    Graph::new(top, e)
}

fn prufer_tree(code: &[usize]) -> Result<Graph> {
    let n = code.len() + 2;
    if let Some(&bad) = code.iter().find(|&&c| c >= n) {
        return Err(Error::Precondition(format!("Prüfer entry {bad} out of range 0..{n}")));
    }
    let mut deg = vec![1usize; n];
    for &c in code {
        deg[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| deg[v] == 1).unwrap();
        edges.push((leaf, c));
        deg[leaf] -= 1;
        deg[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges)
}

fn parse_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Named raw graphs, including non-partial cubes used as negative examples:
/// `K1`, `K2`, `Qd`, `Q3_minus`, `Q4_minus`, `Cn`, `Pn` (n vertices),
/// `K2,3`, `prufer:a,b,...`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let unknown = || Error::Precondition(format!("unknown graph name `{name}`"));
    match name {
        "K1" => return Graph::new(1, []),
        "K2" => return Graph::new(2, [(0, 1)]),
        "Q3_minus" => return cube_minus_top(3),
        "Q4_minus" => return cube_minus_top(4),
        "K2,3" => return Graph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
        _ => {}
    }
    if let Some(code) = name.strip_prefix("prufer:") {
        let code: Vec<usize> = if code.is_empty() {
            Vec::new()
        } else {
            code.split(',')
                .map(|t| t.trim().parse().map_err(|_| unknown()))
                .collect::<Result<_>>()?
        };
        return prufer_tree(&code);
    }
    if let Some(d) = parse_suffix(name, "Q") {
        if d > 12 {
            return Err(unknown());
        }
        return Graph::new(1 << d, cube_edges(d));
    }
    if let Some(n) = parse_suffix(name, "C") {
        if n < 3 {
            return Err(unknown());
        }
        return Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)));
    }
    if let Some(n) = parse_suffix(name, "P") {
        if n < 1 {
            return Err(unknown());
        }
        return Graph::new(n, (1..n).map(|i| (i - 1, i)));
    }
    Err(unknown())
}

/// Named partial cubes.
pub fn named(name: &str) -> Result<PartialCube> {
    let g = named_graph(name)?;
    recognize_partial_cube(&g).map_err(Error::NotPartialCube)
}

/// A partial cube with distinguished vertices.
#[derive(Clone, Debug)]
pub struct Marked {
    pub cube: PartialCube,
    pub marked: Vec<usize>,
}

/// The full subdivision of `K_m`; vertices `0..m` are the original ones.
pub fn full_subdivision(m: usize) -> Result<Marked> {
    if m < 2 {
        return Err(Error::Precondition("full subdivision needs m >= 2".into()));
    }
    let mut edges = Vec::new();
    let mut next = m;
    for i in 0..m {
        for j in i + 1..m {
            edges.push((i, next));
            edges.push((j, next));
            next += 1;
        }
    }
    let g = Graph::new(next, edges)?;
    let cube = recognize_partial_cube(&g).map_err(Error::NotPartialCube)?;
    Ok(Marked {
        cube,
        marked: (0..m).collect(),
    })
}

/// `Ex_ℓ(C_{2n})`: the expansion of the `2n`-cycle with respect to a path
/// with `ℓ` edges and the whole cycle.
pub fn half_expanded_cycle(n: usize, l: usize) -> Result<PartialCube> {
    if n < 2 || l < 2 || l > n {
        return Err(Error::Precondition(format!("need 2 <= l <= n, got n={n}, l={l}")));
    }
    let c = named(&format!("C{}", 2 * n))?;
    let s1 = VertexSet::from_iter(2 * n, 0..=l);
    let s2 = c.all();
    isometric_expansion(&c, &s1, &s2)
        .map(|e| e.cube)
        .map_err(|e| Error::Internal(e.to_string()))
}

/// Parameters of the random amalgam generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RandomSpec {
    pub seed: u64,
    /// Number of cells glued together (the first one included).
    pub cell_budget: usize,
    /// Longest cycle factor allowed (even, at least 4).
    pub max_factor: usize,
    /// Soft cap on the vertex count; amalgams that would exceed it are skipped.
    pub max_vertices: usize,
}

impl RandomSpec {
    pub fn new(seed: u64, cell_budget: usize, max_factor: usize) -> Self {
        RandomSpec {
            seed,
            cell_budget,
            max_factor,
            max_vertices: 150,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub cube: PartialCube,
    /// Signatures of the maximal cells, sorted.
    pub census: Vec<Vec<String>>,
}

fn random_factor(rng: &mut ChaCha8Rng, max_factor: usize) -> Factor {
    let longest = max_factor / 2 * 2;
    if longest < 6 || rng.random_bool(0.5) {
        Factor::Edge
    } else {
        Factor::Cycle(2 * rng.random_range(3..=longest / 2))
    }
}

fn random_cell(rng: &mut ChaCha8Rng, max_factor: usize, min_factors: usize) -> Vec<Factor> {
    let count = rng.random_range(min_factors.max(1)..=min_factors.max(1) + 1);
    let mut fs: Vec<Factor> = Vec::new();
    while fs.len() < count {
        let f = random_factor(rng, max_factor);
        let dim: usize = fs.iter().map(|f| f.dimension()).sum::<usize>() + f.dimension();
        if dim > 4 {
            fs.push(Factor::Edge);
        } else {
            fs.push(f);
        }
    }
    fs
}

/// Face choice within one factor of a cell.
#[derive(Clone, Copy, Debug)]
enum FaceChoice {
    Vertex(usize),
    Edge(usize),
    Full,
}

/// Seeded random hypercellular graph: gated amalgams of random cells along
/// random faces of existing maximal cells.
pub fn random_hypercellular(spec: &RandomSpec) -> Result<Generated> {
    if spec.cell_budget == 0 {
        return Err(Error::Precondition("cell budget must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let first = {
        let mut fs = random_cell(&mut rng, spec.max_factor, 1);
        while product_size(&fs) > spec.max_vertices.max(2) && fs.len() > 1 {
            fs.pop();
        }
        fs
    };
    let mut g = product(&first)?;
    for _ in 1..spec.cell_budget {
        let cx = cell_complex(&g);
        let maximal: Vec<&Cell> = cx.maximal_cells().collect();
        let x = maximal[rng.random_range(0..maximal.len())];
        let choices: Vec<FaceChoice> = x
            .factors()
            .iter()
            .map(|&f| {
                let l = f.size();
                let total = if f == Factor::Edge { 3 } else { 2 * l + 1 };
                let pick = rng.random_range(0..total);
                if pick < l {
                    FaceChoice::Vertex(pick)
                } else if pick == total - 1 {
                    FaceChoice::Full
                } else {
                    FaceChoice::Edge(pick - l)
                }
            })
            .collect();
        let mut face: Vec<Factor> = Vec::new();
        for (&f, &c) in x.factors().iter().zip(&choices) {
            match c {
                FaceChoice::Vertex(_) => {}
                FaceChoice::Edge(_) => face.push(Factor::Edge),
                FaceChoice::Full => face.push(f),
            }
        }
        let face_dim: usize = face.iter().map(|f| f.dimension()).sum();
        let mut extra = random_cell(&mut rng, spec.max_factor, 1);
        while face_dim + extra.iter().map(|f| f.dimension()).sum::<usize>() > 4 && extra.len() > 1 {
            extra.pop();
        }
        if face_dim + extra[0].dimension() > 4 {
            extra = vec![Factor::Edge];
        }
        let mut y_factors = face.clone();
        y_factors.extend(&extra);
        let face_size = product_size(&face);
        let y_size = product_size(&y_factors);
        if g.n() + y_size - face_size > spec.max_vertices {
            continue;
        }
        let y = product(&y_factors)?;
        let glue = glue_map(x, &choices, &face, &extra, &y)?;
        g = gated_amalgam(&g, &y, &glue)?.cube;
    }
    let cx = cell_complex(&g);
    let mut census: Vec<Vec<String>> = cx.maximal_cells().map(|c| c.signature()).collect();
    census.sort();
    Ok(Generated { cube: g, census })
}

fn product_size(fs: &[Factor]) -> usize {
    fs.iter().map(|f| f.size()).product()
}

/// Pairs `(vertex of the host cell, vertex of y)` identifying the chosen face
/// with the subproduct of `y` where the extra factors sit at position 0.
fn glue_map(
    x: &Cell,
    choices: &[FaceChoice],
    face: &[Factor],
    extra: &[Factor],
    y: &PartialCube,
) -> Result<Vec<(usize, usize)>> {
    let y_cell = crate::cells::factorize_cell(y, &y.all())
        .map_err(|e| Error::Internal(format!("product did not factorize: {e:?}")))?;
    // Vertices of y are enumerated lexicographically over the factor list,
    // so index arithmetic gives the vertex of a tuple directly.
    let y_sizes: Vec<usize> = face.iter().chain(extra).map(|f| f.size()).collect();
    let y_index = |tuple: &[usize]| tuple.iter().zip(&y_sizes).fold(0usize, |acc, (&t, &s)| acc * s + t);
    let _ = y_cell;
    let face_sizes: Vec<usize> = face.iter().map(|f| f.size()).collect();
    let count: usize = face_sizes.iter().product();
    let mut pairs = Vec::with_capacity(count);
    for idx in 0..count {
        let mut t = vec![0usize; face_sizes.len()];
        let mut r = idx;
        for i in (0..face_sizes.len()).rev() {
            t[i] = r % face_sizes[i];
            r /= face_sizes[i];
        }
        let mut xpos = Vec::with_capacity(choices.len());
        let mut fi = 0;
        for (&f, &c) in x.factors().iter().zip(choices) {
            let l = f.size();
            match c {
                FaceChoice::Vertex(p) => xpos.push(p),
                FaceChoice::Edge(p) => {
                    xpos.push((p + t[fi]) % l);
                    fi += 1;
                }
                FaceChoice::Full => {
                    xpos.push(t[fi]);
                    fi += 1;
                }
            }
        }
        let hv = x
            .vertex_at(&xpos)
            .ok_or_else(|| Error::Internal("face position outside the cell".into()))?;
        let mut full = t.clone();
        full.extend(std::iter::repeat_n(0, extra.len()));
        pairs.push((hv, y_index(&full)));
    }
    Ok(pairs)
}

/// All partial cubes with at most `max_lambda` Θ-classes, i.e. the isometric
/// subgraphs of `Q_{max_lambda}` up to isomorphism, sorted by vertex count,
/// class count and the canonical vertex mask.
pub fn catalog_small(max_lambda: usize) -> Result<Vec<PartialCube>> {
    limits::check("max_lambda for the catalog", max_lambda, limits::CATALOG_LAMBDA)?;
    let k = max_lambda;
    let nv = 1usize << k;
    let autos = cube_automorphisms(k);
    let mut found: Vec<(usize, usize, u64, PartialCube)> = Vec::new();
    let total: u64 = 1u64 << nv;
    'subsets: for mask in 1..total {
        for a in &autos {
            let mut img = 0u64;
            for (v, &av) in a.iter().enumerate() {
                if mask >> v & 1 == 1 {
                    img |= 1 << av;
                }
            }
            if img < mask {
                continue 'subsets;
            }
        }
        let vecs: Vec<SignVector> = (0..nv)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| {
                let mut s = FixedBitSet::with_capacity(k);
                for b in 0..k {
                    s.set(b, v >> b & 1 == 1);
                }
                s
            })
            .collect();
        if let Ok((pc, _)) = PartialCube::from_sign_vectors(&vecs) {
            found.push((pc.n(), pc.num_classes(), mask, pc));
        }
    }
    found.sort_by_key(|t| (t.0, t.1, t.2));
    Ok(found.into_iter().map(|t| t.3).collect())
}

/// Automorphisms of `Q_k` as vertex permutations.
fn cube_automorphisms(k: usize) -> Vec<Vec<usize>> {
    let nv = 1usize << k;
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &perms {
            for c in 0..k {
                if !p.contains(&c) {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for p in &perms {
        for flip in 0..nv {
            out.push(
                (0..nv)
                    .map(|v| {
                        let mut w = 0;
                        for (b, &pb) in p.iter().enumerate() {
                            if v >> b & 1 == 1 {
                                w |= 1 << pb;
                            }
                        }
                        w ^ flip
                    })
                    .collect(),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;

    #[test]
    fn products() {
        let g = product(&[Factor::Cycle(6), Factor::Edge]).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.num_classes(), 4);
        let q3 = product(&[Factor::Edge; 3]).unwrap();
        assert!(are_isomorphic(q3.graph(), &named_graph("Q3").unwrap()));
        assert_eq!(product(&[Factor::Cycle(6), Factor::Cycle(6)]).unwrap().n(), 36);
        assert!(product(&[Factor::Cycle(5)]).is_err());
        let c4 = product(&[Factor::Cycle(4)]).unwrap();
        assert!(are_isomorphic(c4.graph(), &named_graph("C4").unwrap()));
    }

    #[test]
    fn named_graphs() {
        let qm = named("Q3_minus").unwrap();
        assert_eq!((qm.n(), qm.graph().m()), (7, 9));
        assert_eq!(named("Q4_minus").unwrap().n(), 15);
        let c8 = named("C8").unwrap();
        assert_eq!((c8.n(), c8.graph().m()), (8, 8));
        assert!(named("C5").is_err());
        let star = named("prufer:0,0").unwrap();
        assert_eq!(star.graph().degree(0), 3);
        assert!(named("nonsense").is_err());
    }

    #[test]
    fn subdivisions() {
        assert!(are_isomorphic(full_subdivision(2).unwrap().cube.graph(), &named_graph("P3").unwrap()));
        assert!(are_isomorphic(full_subdivision(3).unwrap().cube.graph(), &named_graph("C6").unwrap()));
        assert_eq!(full_subdivision(4).unwrap().cube.n(), 10);
    }

    #[test]
    fn half_expanded() {
        let ex = half_expanded_cycle(3, 2).unwrap();
        assert_eq!(ex.n(), 9);
        assert_eq!(ex.num_classes(), 4);
        assert!(half_expanded_cycle(3, 1).is_err());
        assert!(half_expanded_cycle(3, 4).is_err());
    }

    #[test]
    fn catalog_levels() {
        let c2 = catalog_small(2).unwrap();
        assert_eq!(c2.len(), 4);
        let sizes: Vec<usize> = c2.iter().map(|g| g.n()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4]);
        let c3 = catalog_small(3).unwrap();
        let qm = named_graph("Q3_minus").unwrap();
        assert!(c3.iter().any(|g| are_isomorphic(g.graph(), &qm)));
        assert!(catalog_small(5).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let spec = RandomSpec::new(7, 5, 8);
        let a = random_hypercellular(&spec).unwrap();
        let b = random_hypercellular(&spec).unwrap();
        assert_eq!(a.cube, b.cube);
        assert_eq!(a.census, b.census);
        let single = random_hypercellular(&RandomSpec::new(1, 1, 8)).unwrap();
        assert_eq!(single.census.len(), 1);
    }
}
