//! Restrictions, contractions, isometric expansions, pc-minor search and the
//! structural hypercellularity test.

use crate::cells::{cell_complex, check_3cc, Cell, CycleTriple};
use crate::error::{Error, Result};
use crate::iso::{canonical_rows, find_isomorphism, CanonicalForm};
use crate::limits;
use crate::pcube::{ClassId, PartialCube, Sign, SignVector, SignedSet, SubCube};
use crate::vset::VertexSet;
use fixedbitset::FixedBitSet;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;

/// `ρ_A`: the subgraph on the intersection of the signed halfspaces of `a`,
/// or `None` when that intersection is empty.
pub fn restrict(pc: &PartialCube, a: &SignedSet) -> Result<Option<SubCube>> {
    let mut s = pc.all();
    for (f, sign) in a.iter() {
        s.intersect_with(pc.halfspace(f, sign)?);
    }
    if s.is_empty() {
        return Ok(None);
    }
    pc.induced(&s).map(Some)
}

/// Result of contracting some Θ-classes.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub cube: PartialCube,
    /// Host vertex to image vertex.
    pub vertex_map: Vec<usize>,
    /// New class id to host class id.
    pub classes: Vec<ClassId>,
}

/// `π_f`.
pub fn contract(pc: &PartialCube, f: ClassId) -> Result<Contraction> {
    contract_many(pc, &[f])
}

/// Contracts every class in `fs`. Image vertices are numbered in the order of
/// their smallest preimage.
pub fn contract_many(pc: &PartialCube, fs: &[ClassId]) -> Result<Contraction> {
    for &f in fs {
        pc.check_class(f)?;
    }
    let k = pc.num_classes();
    let classes: Vec<ClassId> = (0..k).filter(|c| !fs.contains(c)).collect();
    let mut index: HashMap<SignVector, usize> = HashMap::new();
    let mut vectors: Vec<SignVector> = Vec::new();
    let mut vertex_map = Vec::with_capacity(pc.n());
    for v in 0..pc.n() {
        let mut w = FixedBitSet::with_capacity(classes.len());
        for (i, &c) in classes.iter().enumerate() {
            w.set(i, pc.coords(v).contains(c));
        }
        let next = vectors.len();
        let id = *index.entry(w.clone()).or_insert(next);
        if id == next {
            vectors.push(w);
        }
        vertex_map.push(id);
    }
    let (cube, kept) = PartialCube::from_sign_vectors(&vectors)?;
    if kept.len() != classes.len() {
        return Err(Error::Internal("contraction lost a class".into()));
    }
    Ok(Contraction {
        cube,
        vertex_map,
        classes,
    })
}

/// Why an isometric expansion was refused.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ExpansionError {
    WrongUniverse,
    NotCovering { missing: usize },
    EmptyIntersection,
    CrossEdge { u: usize, v: usize },
    NotIsometric { side: usize },
}

impl fmt::Display for ExpansionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionError::WrongUniverse => write!(f, "vertex sets do not match the graph"),
            ExpansionError::NotCovering { missing } => write!(f, "vertex {missing} is in neither side"),
            ExpansionError::EmptyIntersection => write!(f, "the two sides do not meet"),
            ExpansionError::CrossEdge { u, v } => {
                write!(f, "edge {u} {v} joins the two private parts")
            }
            ExpansionError::NotIsometric { side } => write!(f, "side {side} is not isometric"),
        }
    }
}

impl std::error::Error for ExpansionError {}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub cube: PartialCube,
    /// The new Θ-class (always the last id).
    pub new_class: ClassId,
    /// New vertex to the vertex it copies.
    pub origin: Vec<usize>,
}

fn is_isometric_subset(pc: &PartialCube, s: &VertexSet) -> bool {
    let Ok((sub, map)) = pc.graph().induced(s) else {
        return false;
    };
    let m = sub.metric();
    (0..sub.n()).all(|a| {
        let da = sub.distances(a);
        (0..sub.n()).all(|b| da[b] != usize::MAX && da[b] == pc.d(map[a], map[b]))
    }) && m.n() == sub.n()
}

/// Splits every vertex of `s1 ∩ s2` in two; new vertices are listed as
/// `v` (side 1 copy) then `v` (side 2 copy) for each `v` in order.
pub fn isometric_expansion(
    pc: &PartialCube,
    s1: &VertexSet,
    s2: &VertexSet,
) -> std::result::Result<Expansion, ExpansionError> {
    let n = pc.n();
    if s1.universe() != n || s2.universe() != n {
        return Err(ExpansionError::WrongUniverse);
    }
    if let Some(missing) = s1.union(s2).complement().first() {
        return Err(ExpansionError::NotCovering { missing });
    }
    if !s1.intersects(s2) {
        return Err(ExpansionError::EmptyIntersection);
    }
    for &(u, v) in pc.graph().edges() {
        let private = |x: usize, a: &VertexSet, b: &VertexSet| a.contains(x) && !b.contains(x);
        if (private(u, s1, s2) && private(v, s2, s1)) || (private(u, s2, s1) && private(v, s1, s2)) {
            return Err(ExpansionError::CrossEdge { u, v });
        }
    }
    for (side, s) in [(1, s1), (2, s2)] {
        if !is_isometric_subset(pc, s) {
            return Err(ExpansionError::NotIsometric { side });
        }
    }
    let k = pc.num_classes();
    let mut vectors = Vec::new();
    let mut origin = Vec::new();
    for v in 0..n {
        for (bit, s) in [(false, s1), (true, s2)] {
            if s.contains(v) {
                let mut w = FixedBitSet::with_capacity(k + 1);
                for c in pc.coords(v).ones() {
                    w.insert(c);
                }
                w.set(k, bit);
                vectors.push(w);
                origin.push(v);
            }
        }
    }
    let (cube, kept) = PartialCube::from_sign_vectors(&vectors).map_err(|_| ExpansionError::NotIsometric { side: 0 })?;
    debug_assert_eq!(kept.len(), k + 1);
    Ok(Expansion {
        cube,
        new_class: k,
        origin,
    })
}

/// Certificate that a target is a pc-minor of a host: contract the listed
/// host classes, restrict to the listed host-class signs, then `iso` maps
/// target vertices onto the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub contracted: Vec<ClassId>,
    pub restriction: SignedSet,
    pub iso: Vec<usize>,
}

/// Applies the contractions and the restriction of a witness.
pub fn apply_witness(host: &PartialCube, w: &MinorWitness) -> Result<PartialCube> {
    let c = contract_many(host, &w.contracted)?;
    let mut a = SignedSet::new();
    for (f, s) in w.restriction.iter() {
        let g = c
            .classes
            .iter()
            .position(|&x| x == f)
            .ok_or(Error::UnknownClass(f))?;
        a.insert(g, s)?;
    }
    match restrict(&c.cube, &a)? {
        Some(sub) => Ok(sub.cube),
        None => Err(Error::EmptySet),
    }
}

/// Checks that `w` maps `target` exactly onto the minor it describes.
pub fn verify_witness(host: &PartialCube, target: &PartialCube, w: &MinorWitness) -> bool {
    let Ok(m) = apply_witness(host, w) else {
        return false;
    };
    let (g, h) = (target.graph(), m.graph());
    if g.n() != h.n() || g.m() != h.m() || w.iso.len() != g.n() {
        return false;
    }
    let mut seen = vec![false; h.n()];
    for &x in &w.iso {
        if x >= h.n() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    g.edges().iter().all(|&(a, b)| h.has_edge(w.iso[a], w.iso[b]))
}

fn rows_over(pc: &PartialCube, s: &VertexSet, cols: &[ClassId]) -> Vec<u64> {
    let mut rows: Vec<u64> = s
        .iter()
        .map(|v| {
            cols.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (pc.coords(v).contains(c) as u64) << i)
        })
        .collect();
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// Convex sets reachable from `V` by restrictions, in BFS order, skipping
/// those too small to contain the target.
fn convex_sets(pc: &PartialCube, min_vertices: usize, min_classes: usize) -> Vec<(VertexSet, Vec<ClassId>)> {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut out = Vec::new();
    let start = pc.all();
    seen.insert(start.clone());
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let cross = pc.crossing_classes(&s);
        if cross.len() < min_classes {
            continue;
        }
        for &f in &cross {
            for sign in [Sign::Minus, Sign::Plus] {
                let t = s.intersection(pc.halfspace(f, sign).expect("crossing class"));
                if t.len() >= min_vertices && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        out.push((s, cross));
    }
    out
}

fn combinations(items: &[usize], r: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            if go(items, r, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(items, r, 0, &mut Vec::with_capacity(r), f)
}

/// Searches for `target` as a pc-minor of `host`. Candidates are visited by
/// number of contracted classes, then convex subgraph in restriction order,
/// then kept classes lexicographically; the first hit is returned verified.
pub fn pc_minor_witness(host: &PartialCube, target: &PartialCube) -> Result<Option<MinorWitness>> {
    limits::check("class count of the minor search host", host.num_classes(), limits::MINOR_CLASSES)?;
    let kt = target.num_classes();
    let nt = target.n();
    if kt > host.num_classes() || nt > host.n() {
        return Ok(None);
    }
    let want: CanonicalForm = crate::iso::canonical_form(target)?;
    let sets = convex_sets(host, nt, kt);
    let max_c = sets.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let mut cache: HashMap<Vec<u64>, bool> = HashMap::new();
    for c in 0..=max_c.saturating_sub(kt) {
        for (s, cross) in sets.iter().filter(|(_, x)| x.len() == kt + c) {
            let mut hit: Option<Vec<usize>> = None;
            let mut err = None;
            combinations(cross, kt, &mut |keep| {
                let rows = rows_over(host, s, keep);
                if rows.len() != nt {
                    return false;
                }
                let matched = match cache.get(&rows) {
                    Some(&b) => b,
                    None => {
                        let b = match canonical_rows(&rows, kt) {
                            Ok(cf) => cf == want,
                            Err(e) => {
                                err = Some(e);
                                return true;
                            }
                        };
                        cache.insert(rows, b);
                        b
                    }
                };
                if matched {
                    hit = Some(keep.to_vec());
                }
                matched
            });
            if let Some(e) = err {
                return Err(e);
            }
            let Some(keep) = hit else { continue };
            let contracted: Vec<ClassId> = cross.iter().copied().filter(|f| !keep.contains(f)).collect();
            let mut restriction = SignedSet::new();
            let v = s.first().expect("nonempty convex set");
            for f in (0..host.num_classes()).filter(|f| !cross.contains(f)) {
                restriction.insert(f, host.sign(v, f))?;
            }
            let minor = apply_witness(
                host,
                &MinorWitness {
                    contracted: contracted.clone(),
                    restriction: restriction.clone(),
                    iso: Vec::new(),
                },
            )?;
            let iso = find_isomorphism(target.graph(), minor.graph())
                .ok_or_else(|| Error::Internal("canonical forms agree but graphs are not isomorphic".into()))?;
            let w = MinorWitness {
                contracted,
                restriction,
                iso,
            };
            if !verify_witness(host, target, &w) {
                return Err(Error::Internal("minor witness failed verification".into()));
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Why a partial cube is not hypercellular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonGatedCell(Cell),
    ThreeCC(CycleTriple),
}

impl Serialize for Violation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Repr<'a> {
            NonGatedCell { cell: &'a Cell },
            ThreeCc { cycles: &'a CycleTriple },
        }
        match self {
            Violation::NonGatedCell(cell) => Repr::NonGatedCell { cell }.serialize(s),
            Violation::ThreeCC(cycles) => Repr::ThreeCc { cycles }.serialize(s),
        }
    }
}

/// Cells gated and 3CC. Cells are checked smallest first.
pub fn is_hypercellular(pc: &PartialCube) -> std::result::Result<(), Violation> {
    let cx = cell_complex(pc);
    for cell in cx.cells() {
        if cell.len() > 2 && !pc.metric().is_gated(cell.vertices()) {
            return Err(Violation::NonGatedCell(cell.clone()));
        }
    }
    match check_3cc(pc) {
        Some(t) => Err(Violation::ThreeCC(t)),
        None => Ok(()),
    }
}

/// `Q3⁻`, the obstruction for hypercellularity.
pub fn q3_minus() -> PartialCube {
    crate::genlib::named("Q3_minus").expect("Q3 minus is a partial cube")
}
