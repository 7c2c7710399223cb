//! Fixed cells, convexity numbers, the Pasch and Peano axioms and class
//! membership.

use crate::cells::{cell_complex, factorize_cell, Cell, Factor};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iso::automorphism_maps;
use crate::limits;
use crate::minors::is_hypercellular;
use crate::pcube::{recognize_partial_cube, PartialCube, Sign};
use crate::vset::VertexSet;
use serde::Serialize;

/// `Z(G)`: the intersection of the maximal halfspaces whose complement is
/// not maximal, or `V` when there is none.
pub fn halfspace_core(pc: &PartialCube) -> VertexSet {
    let mut hs: Vec<&VertexSet> = Vec::with_capacity(2 * pc.num_classes());
    for f in 0..pc.num_classes() {
        for s in [Sign::Minus, Sign::Plus] {
            hs.push(pc.halfspace(f, s).unwrap());
        }
    }
    let maximal = |i: usize| !hs.iter().enumerate().any(|(j, h)| j != i && hs[i].is_subset(h) && hs[i] != *h);
    let mut core = pc.all();
    for (i, h) in hs.iter().enumerate() {
        if maximal(i) && !maximal(i ^ 1) {
            core.intersect_with(h);
        }
    }
    core
}

/// Iterates `Z` until it stabilizes; defined on every partial cube.
pub fn halfspace_core_fixpoint(pc: &PartialCube) -> Result<VertexSet> {
    let mut cur = pc.all();
    loop {
        let sub = pc.induced(&cur)?;
        let core = halfspace_core(&sub.cube);
        if core.is_full() {
            return Ok(cur);
        }
        cur = VertexSet::from_iter(pc.n(), core.iter().map(|v| sub.vertices[v]));
    }
}

/// `Z∞(G)` as a cell.
pub fn z_infinity(pc: &PartialCube) -> Result<Cell> {
    if is_hypercellular(pc).is_err() {
        return Err(Error::NotHypercellular);
    }
    let s = halfspace_core_fixpoint(pc)?;
    factorize_cell(pc, &s).map_err(|e| Error::Internal(format!("Z-infinity is not a cell: {:?}", e.reason)))
}

/// A self-map of a graph with its verified properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMap {
    pub map: Vec<usize>,
    pub is_nonexpansive: bool,
    pub is_automorphism: bool,
}

impl GraphMap {
    pub fn new(g: &Graph, map: Vec<usize>) -> Result<GraphMap> {
        if map.len() != g.n() {
            return Err(Error::Precondition(format!(
                "map has {} entries for {} vertices",
                map.len(),
                g.n()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= g.n()) {
            return Err(Error::VertexOutOfRange(bad));
        }
        let m = g.metric();
        let n = g.n();
        let is_nonexpansive = (0..n).all(|x| (x + 1..n).all(|y| m.d(map[x], map[y]) <= m.d(x, y)));
        let mut seen = vec![false; n];
        let bijective = map.iter().all(|&x| !std::mem::replace(&mut seen[x], true));
        let is_automorphism = bijective
            && (0..n).all(|x| (x + 1..n).all(|y| g.has_edge(x, y) == g.has_edge(map[x], map[y])));
        Ok(GraphMap {
            map,
            is_nonexpansive,
            is_automorphism,
        })
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn image(&self, s: &VertexSet) -> VertexSet {
        VertexSet::from_iter(s.universe(), s.iter().map(|v| self.map[v]))
    }

    /// Vertices with `f^k(v) = v` for some `k ≥ 1`.
    pub fn periodic_points(&self) -> VertexSet {
        let n = self.map.len();
        VertexSet::from_iter(
            n,
            (0..n).filter(|&v| {
                let mut x = self.map[v];
                for _ in 0..n {
                    if x == v {
                        return true;
                    }
                    x = self.map[x];
                }
                false
            }),
        )
    }
}

/// The automorphism group, in lexicographic order.
pub fn automorphisms(g: &Graph) -> Result<Vec<GraphMap>> {
    automorphism_maps(g)?
        .into_iter()
        .map(|m| GraphMap::new(g, m))
        .collect()
}

/// A cell fixed setwise by a non-expansive map stabilizing `s`: `Z∞` of the
/// periodic points of `f` inside `conv(s)`.
pub fn fixed_cell_of_map(pc: &PartialCube, f: &GraphMap, s: &VertexSet) -> Result<Cell> {
    if f.map.len() != pc.n() {
        return Err(Error::Precondition("map does not match the graph".into()));
    }
    if !f.is_nonexpansive {
        return Err(Error::Precondition("map is not non-expansive".into()));
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if f.image(s) != *s {
        return Err(Error::Precondition("map does not stabilize the set".into()));
    }
    if is_hypercellular(pc).is_err() {
        return Err(Error::NotHypercellular);
    }
    let h = f.periodic_points().intersection(&pc.convex_hull(s)?);
    if h.is_empty() {
        return Err(Error::Internal("no periodic point in the hull".into()));
    }
    let (g, labels) = pc
        .graph()
        .induced(&h)
        .map_err(|e| Error::Internal(format!("periodic points do not induce a graph: {e}")))?;
    let sub = recognize_partial_cube(&g).map_err(|r| Error::Internal(format!("periodic points: {r}")))?;
    let z = z_infinity(&sub)?;
    let x = VertexSet::from_iter(pc.n(), z.members().iter().map(|&v| labels[v]));
    let cell = factorize_cell(pc, &x).map_err(|e| Error::Internal(format!("fixed set is not a cell: {:?}", e.reason)))?;
    if f.image(&x) != x {
        return Err(Error::Internal("fixed cell is not invariant".into()));
    }
    Ok(cell)
}

/// Factorization of a regular hypercellular graph, which is a single cell.
pub fn check_regular_single_cell(pc: &PartialCube) -> Result<Vec<Factor>> {
    if !pc.graph().is_regular() {
        return Err(Error::Precondition("graph is not regular".into()));
    }
    if is_hypercellular(pc).is_err() {
        return Err(Error::NotHypercellular);
    }
    factorize_cell(pc, &pc.all())
        .map(|c| c.factors().to_vec())
        .map_err(|e| Error::Internal(format!("regular hypercellular graph is not a cell: {:?}", e.reason)))
}

/// Convex hulls of all vertex subsets, indexed by bitmask.
struct HullTable {
    hull: Vec<u32>,
}

impl HullTable {
    fn new(pc: &PartialCube) -> Result<HullTable> {
        let n = pc.n();
        limits::check("vertex count for convexity numbers", n, limits::CONVEXITY_NUMBER_VERTICES)?;
        if n > 24 {
            return Err(Error::ScaleExceeded {
                what: "vertex count for convexity numbers",
                actual: n,
                limit: 24,
            });
        }
        let k = pc.num_classes();
        let rows: Vec<u64> = (0..n)
            .map(|v| pc.coords(v).ones().fold(0u64, |a, c| a | 1 << c))
            .collect();
        let full_k = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let mut hull = vec![0u32; 1 << n];
        for mask in 1u32..(1u32 << n) {
            let (mut and, mut or) = (full_k, 0u64);
            for (v, &r) in rows.iter().enumerate() {
                if mask >> v & 1 == 1 {
                    and &= r;
                    or |= r;
                }
            }
            hull[mask as usize] = rows
                .iter()
                .enumerate()
                .filter(|&(_, &r)| r & and == and && r | or == or)
                .fold(0u32, |a, (v, _)| a | 1 << v);
        }
        Ok(HullTable { hull })
    }

    fn get(&self, mask: u32) -> u32 {
        self.hull[mask as usize]
    }
}

fn max_independent(n: usize, independent: impl Fn(u32) -> bool) -> usize {
    (1u32..(1u32 << n))
        .filter(|&m| independent(m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn without_each(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |b| mask >> b & 1 == 1).map(move |b| mask & !(1 << b))
}

/// Helly number: the largest set `X` with `⋂ conv(X − x) = ∅`, at least 2.
pub fn helly_number(pc: &PartialCube) -> Result<usize> {
    let t = HullTable::new(pc)?;
    let n = pc.n();
    let m = max_independent(n, |x| without_each(x).fold(u32::MAX, |acc, y| acc & t.get(y)) == 0);
    Ok(m.max(2))
}

/// Carathéodory number: the largest set `X` with
/// `conv(X) ≠ ⋃ conv(X − x)`.
pub fn caratheodory_number(pc: &PartialCube) -> Result<usize> {
    let t = HullTable::new(pc)?;
    let n = pc.n();
    Ok(max_independent(n, |x| {
        without_each(x).fold(0u32, |acc, y| acc | t.get(y)) != t.get(x)
    }))
}

/// Radon number: the largest set with no partition into two parts with
/// meeting hulls, at least 2.
pub fn radon_number(pc: &PartialCube) -> Result<usize> {
    let t = HullTable::new(pc)?;
    let n = pc.n();
    let m = max_independent(n, |x| {
        let low = x & x.wrapping_neg();
        let rest = x & !low;
        // Parts are `low ∪ a` and the complement, over all submasks `a`.
        let mut a = rest;
        loop {
            let p = low | a;
            let q = x & !p;
            if q != 0 && t.get(p) & t.get(q) != 0 {
                return false;
            }
            if a == 0 {
                return true;
            }
            a = (a - 1) & rest;
        }
    });
    Ok(m.max(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub x: usize,
    pub y: usize,
}

fn intervals(pc: &PartialCube) -> Vec<VertexSet> {
    let n = pc.n();
    (0..n * n).map(|i| pc.interval(i / n, i % n)).collect()
}

/// Pasch: for `x ∈ I(u,v)` and `y ∈ I(u,w)`, `I(v,y) ∩ I(w,x) ≠ ∅`.
/// Returns the lexicographically first violation.
pub fn pasch_check(pc: &PartialCube) -> Result<Option<AxiomViolation>> {
    let n = pc.n();
    limits::check("vertex count for axiom checks", n, limits::AXIOM_VERTICES)?;
    let iv = intervals(pc);
    let i = |a: usize, b: usize| &iv[a * n + b];
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                for x in i(u, v).iter() {
                    for y in i(u, w).iter() {
                        if !i(v, y).intersects(i(w, x)) {
                            return Ok(Some(AxiomViolation { u, v, w, x, y }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Peano: for `x ∈ I(u,w)` and `y ∈ I(v,x)` some `z ∈ I(v,w)` has
/// `y ∈ I(u,z)`.
pub fn peano_check(pc: &PartialCube) -> Result<Option<AxiomViolation>> {
    let n = pc.n();
    limits::check("vertex count for axiom checks", n, limits::AXIOM_VERTICES)?;
    let iv = intervals(pc);
    let i = |a: usize, b: usize| &iv[a * n + b];
    // up[u][y] = { z : y ∈ I(u,z) }
    let up: Vec<VertexSet> = (0..n * n)
        .map(|k| {
            let (u, y) = (k / n, k % n);
            VertexSet::from_iter(n, (0..n).filter(|&z| pc.d(u, y) + pc.d(y, z) == pc.d(u, z)))
        })
        .collect();
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                for x in i(u, w).iter() {
                    for y in i(v, x).iter() {
                        if !i(v, w).intersects(&up[u * n + y]) {
                            return Ok(Some(AxiomViolation { u, v, w, x, y }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Class memberships. `s4_pasch` is `None` when the graph is too large for
/// the exhaustive axiom check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub partial_cube: bool,
    pub s4_pasch: Option<bool>,
    pub hypercellular: bool,
    pub cellular: bool,
    pub median: bool,
    pub polat: bool,
}

pub fn classify(pc: &PartialCube) -> Classification {
    let s4_pasch = pasch_check(pc).ok().map(|v| v.is_none());
    let hypercellular = is_hypercellular(pc).is_ok();
    if !hypercellular {
        return Classification {
            partial_cube: true,
            s4_pasch,
            hypercellular,
            cellular: false,
            median: false,
            polat: false,
        };
    }
    let cx = cell_complex(pc);
    let cells: Vec<&Cell> = cx.maximal_cells().collect();
    let single_cycle = |c: &Cell| matches!(c.factors(), [Factor::Cycle(_)]);
    Classification {
        partial_cube: true,
        s4_pasch,
        hypercellular,
        cellular: cells.iter().all(|c| c.dimension() <= 2),
        median: cells.iter().all(|c| c.is_hypercube()),
        polat: cells.iter().all(|c| c.is_hypercube() || single_cycle(c)),
    }
}

/// `classify` for a raw graph; everything is false off partial cubes.
pub fn classify_graph(g: &Graph) -> Classification {
    match recognize_partial_cube(g) {
        Ok(pc) => classify(&pc),
        Err(_) => Classification {
            partial_cube: false,
            s4_pasch: None,
            hypercellular: false,
            cellular: false,
            median: false,
            polat: false,
        },
    }
}
