//! Isometric and convex cycles, cells and their factorization, the cell
//! complex, and the 3CC and 3C conditions.

use crate::error::{Error, Result};
use crate::pcube::{ClassId, PartialCube, SignVector};
use crate::vset::VertexSet;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::{HashMap, HashSet};

/// A factor of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Edge,
    /// An even cycle of the given length (at least 6; a 4-cycle is two edges).
    Cycle(usize),
}

impl Factor {
    pub fn dimension(self) -> usize {
        match self {
            Factor::Edge => 1,
            Factor::Cycle(_) => 2,
        }
    }

    pub fn size(self) -> usize {
        match self {
            Factor::Edge => 2,
            Factor::Cycle(l) => l,
        }
    }

    pub fn name(self) -> String {
        match self {
            Factor::Edge => "K2".to_string(),
            Factor::Cycle(l) => format!("C{l}"),
        }
    }
}

/// A convex subgraph with an explicit product structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    vertices: VertexSet,
    members: Vec<usize>,
    factors: Vec<Factor>,
    blocks: Vec<Vec<ClassId>>,
    coords: Vec<Vec<usize>>,
}

impl Cell {
    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    /// Member vertices in increasing order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Host Θ-classes making up each factor.
    pub fn blocks(&self) -> &[Vec<ClassId>] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|f| f.dimension()).sum()
    }

    pub fn signature(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.name()).collect()
    }

    pub fn is_hypercube(&self) -> bool {
        self.factors.iter().all(|&f| f == Factor::Edge)
    }

    /// Product coordinates of a member vertex.
    pub fn position(&self, v: usize) -> Option<&[usize]> {
        self.members
            .binary_search(&v)
            .ok()
            .map(|i| self.coords[i].as_slice())
    }

    /// The member vertex with the given product coordinates.
    pub fn vertex_at(&self, pos: &[usize]) -> Option<usize> {
        self.coords
            .iter()
            .position(|c| c.as_slice() == pos)
            .map(|i| self.members[i])
    }

    /// Index of the factor containing class `f`.
    pub fn factor_of_class(&self, f: ClassId) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&f))
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cell", 3)?;
        st.serialize_field("dimension", &self.dimension())?;
        st.serialize_field("signature", &self.signature())?;
        st.serialize_field("vertices", &self.members)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotACellReason {
    Empty,
    NonConvex,
    NotAProduct,
    PathFactor,
    NonCycleFactor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotACell {
    pub reason: NotACellReason,
    /// The offending prime factor's classes, when the reason is a factor.
    pub factor: Option<Vec<ClassId>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn project(v: &SignVector, block: &[ClassId]) -> u64 {
    block
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &c)| if v.contains(c) { acc | 1 << i } else { acc })
}

/// Factorizes `s` into edges and even cycles. Prime factors come from the
/// Θ-classes joined by adjacent edges that span no square inside `s`.
pub fn factorize_cell(pc: &PartialCube, s: &VertexSet) -> std::result::Result<Cell, NotACell> {
    let fail = |reason, factor| Err(NotACell { reason, factor });
    if s.is_empty() {
        return fail(NotACellReason::Empty, None);
    }
    if !pc.is_convex(s).unwrap_or(false) {
        return fail(NotACellReason::NonConvex, None);
    }
    let g = pc.graph();
    let classes = pc.crossing_classes(s);
    let mut slot = HashMap::new();
    for (i, &c) in classes.iter().enumerate() {
        slot.insert(c, i);
    }
    let mut uf = UnionFind::new(classes.len());
    for v in s.iter() {
        let nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&x| s.contains(x)).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                let square = g
                    .neighbors(a)
                    .iter()
                    .any(|&x| x != v && s.contains(x) && g.has_edge(x, b));
                if !square {
                    let fa = pc.class_of(v, a).unwrap();
                    let fb = pc.class_of(v, b).unwrap();
                    uf.union(slot[&fa], slot[&fb]);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<ClassId>> = Vec::new();
    let mut root_block = HashMap::new();
    for (i, &c) in classes.iter().enumerate() {
        let r = uf.find(i);
        let bi = *root_block.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[bi].push(c);
    }
    let members = s.to_vec();
    let base = members[0];
    let mut factors = Vec::new();
    let mut positions: Vec<HashMap<u64, usize>> = Vec::new();
    let mut product = 1usize;
    for block in &blocks {
        let proj: HashSet<u64> = members.iter().map(|&v| project(pc.coords(v), block)).collect();
        product = product.saturating_mul(proj.len());
        let m = block.len();
        let start = project(pc.coords(base), block);
        if m == 1 {
            factors.push(Factor::Edge);
            positions.push(HashMap::from([(start, 0), (start ^ 1, 1)]));
            continue;
        }
        let deg = |p: u64| (0..m).filter(|&i| proj.contains(&(p ^ 1 << i))).count();
        let is_cycle = m >= 3 && proj.len() == 2 * m && proj.iter().all(|&p| deg(p) == 2);
        if !is_cycle {
            let path = proj.len() == m + 1 && proj.iter().all(|&p| deg(p) <= 2);
            let reason = if path {
                NotACellReason::PathFactor
            } else {
                NotACellReason::NonCycleFactor
            };
            return fail(reason, Some(block.clone()));
        }
        // Walk the cycle from the base vertex, first along the lowest class.
        let mut pos = HashMap::new();
        let mut cur = start;
        let first = (0..m).find(|&i| proj.contains(&(start ^ 1 << i))).unwrap();
        pos.insert(start, 0);
        let mut next = start ^ 1 << first;
        for p in 1..2 * m {
            pos.insert(next, p);
            let step = (0..m)
                .map(|i| next ^ 1 << i)
                .find(|&q| q != cur && proj.contains(&q))
                .unwrap();
            cur = next;
            next = step;
        }
        factors.push(Factor::Cycle(2 * m));
        positions.push(pos);
    }
    if product != members.len() {
        return fail(NotACellReason::NotAProduct, None);
    }
    // Canonical factor order: longer cycles first, then edges, ties by the
    // smallest class id.
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(factors[i].size()), blocks[i][0]));
    let factors: Vec<Factor> = order.iter().map(|&i| factors[i]).collect();
    let positions: Vec<_> = order.iter().map(|&i| positions[i].clone()).collect();
    let blocks: Vec<Vec<ClassId>> = order.iter().map(|&i| blocks[i].clone()).collect();
    let coords = members
        .iter()
        .map(|&v| {
            blocks
                .iter()
                .zip(&positions)
                .map(|(b, p)| p[&project(pc.coords(v), b)])
                .collect()
        })
        .collect();
    Ok(Cell {
        vertices: s.clone(),
        members,
        factors,
        blocks,
        coords,
    })
}

/// All isometric cycles of length at most `max_len`, each once, rotated to
/// start at its least vertex and continue to the smaller of its neighbours.
pub fn isometric_cycles(pc: &PartialCube, max_len: usize) -> Result<Vec<Vec<usize>>> {
    if max_len > 2 * pc.num_classes() {
        return Err(Error::Precondition(format!(
            "max_len {max_len} exceeds 2|Λ| = {}",
            2 * pc.num_classes()
        )));
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    for r in 0..pc.n() {
        path.clear();
        path.push(r);
        ascend(pc, max_len, &mut path, &mut out);
    }
    Ok(out)
}

fn ascend(pc: &PartialCube, max_len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let r = path[0];
    let i = path.len() - 1;
    let cur = path[i];
    if i >= 2 {
        descend(pc, 2 * i, path, out);
    }
    if 2 * (i + 1) > max_len {
        return;
    }
    for &y in pc.graph().neighbors(cur) {
        if y > r && pc.d(r, y) == i + 1 {
            path.push(y);
            ascend(pc, max_len, path, out);
            path.pop();
        }
    }
}

fn descend(pc: &PartialCube, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let r = path[0];
    let j = path.len() - 1;
    let cur = path[j];
    if j + 1 == len {
        if pc.graph().has_edge(cur, r) && path[1] < path[len - 1] {
            out.push(path.clone());
        }
        return;
    }
    let t = j + 1;
    for &y in pc.graph().neighbors(cur) {
        if y <= r || pc.d(r, y) != len - t || path.contains(&y) {
            continue;
        }
        let ok = path.iter().enumerate().all(|(s, &p)| {
            let gap = t - s;
            pc.d(p, y) == gap.min(len - gap)
        });
        if ok {
            path.push(y);
            descend(pc, len, path, out);
            path.pop();
        }
    }
}

/// Convex cycles in canonical rotation, sorted.
pub fn convex_cycles(pc: &PartialCube) -> Vec<Vec<usize>> {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut out = Vec::new();
    let mut path = Vec::new();
    for r in 0..pc.n() {
        path.clear();
        path.push(r);
        convex_ascend(pc, &mut path, &mut seen, &mut out);
    }
    out.sort();
    out
}

fn convex_ascend(
    pc: &PartialCube,
    path: &mut Vec<usize>,
    seen: &mut HashSet<VertexSet>,
    out: &mut Vec<Vec<usize>>,
) {
    let r = path[0];
    let i = path.len() - 1;
    let cur = path[i];
    for &y in pc.graph().neighbors(cur) {
        if y <= r || pc.d(r, y) != i + 1 {
            continue;
        }
        let iv = pc.interval(r, y);
        let size = iv.len();
        if size == i + 2 {
            path.push(y);
            convex_ascend(pc, path, seen, out);
            path.pop();
        } else if i + 1 >= 2 && size == 2 * (i + 1) && iv.first() == Some(r) && !seen.contains(&iv) {
            if let Some(c) = cycle_order(pc, &iv) {
                seen.insert(iv);
                out.push(c);
            }
        }
    }
}

/// The cyclic order of `s` when it induces a cycle, in canonical rotation.
fn cycle_order(pc: &PartialCube, s: &VertexSet) -> Option<Vec<usize>> {
    let g = pc.graph();
    let inside = |v: usize| -> Vec<usize> { g.neighbors(v).iter().copied().filter(|&x| s.contains(x)).collect() };
    if s.iter().any(|v| inside(v).len() != 2) {
        return None;
    }
    let start = s.first()?;
    let nb = inside(start);
    let mut cyc = vec![start, nb[0].min(nb[1])];
    while cyc.len() < s.len() {
        let last = *cyc.last().unwrap();
        let prev = cyc[cyc.len() - 2];
        let next = inside(last).into_iter().find(|&x| x != prev)?;
        if next == start {
            return None;
        }
        cyc.push(next);
    }
    g.has_edge(*cyc.last().unwrap(), start).then_some(cyc)
}

/// All cells of a partial cube with the inclusion-maximal ones marked.
#[derive(Clone, Debug)]
pub struct CellComplex {
    cells: Vec<Cell>,
    maximal: Vec<usize>,
    index: HashMap<VertexSet, usize>,
}

impl CellComplex {
    /// Cells sorted by size, then by vertex list.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Indices of the maximal cells.
    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    pub fn maximal_cells(&self) -> impl Iterator<Item = &Cell> {
        self.maximal.iter().map(|&i| &self.cells[i])
    }

    pub fn find(&self, s: &VertexSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of the cells contained in cell `i`.
    pub fn faces_of(&self, i: usize) -> Vec<usize> {
        let x = self.cells[i].vertices();
        (0..self.cells.len())
            .filter(|&j| self.cells[j].vertices().is_subset(x))
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.cells.iter().map(|c| c.dimension()).max().unwrap_or(0)
    }
}

/// Every cell is antipodal and hence an interval `I(u, u⁻)`; the complex is
/// the set of intervals that factorize.
pub fn cell_complex(pc: &PartialCube) -> CellComplex {
    let n = pc.n();
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut cells = Vec::new();
    for u in 0..n {
        for w in u..n {
            let iv = pc.interval(u, w);
            if seen.contains(&iv) {
                continue;
            }
            if let Ok(c) = factorize_cell(pc, &iv) {
                cells.push(c);
            }
            seen.insert(iv);
        }
    }
    cells.sort_by(|a, b| (a.len(), a.members()).cmp(&(b.len(), b.members())));
    let mut maximal: Vec<usize> = Vec::new();
    for i in (0..cells.len()).rev() {
        let contained = maximal
            .iter()
            .any(|&j| cells[i].vertices().is_subset(cells[j].vertices()));
        if !contained {
            maximal.push(i);
        }
    }
    maximal.sort_unstable();
    let index = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.vertices().clone(), i))
        .collect();
    CellComplex {
        cells,
        maximal,
        index,
    }
}

/// A triple of convex cycles violating the 3CC condition.
pub type CycleTriple = [Vec<usize>; 3];

/// The 3CC condition: three convex cycles through a common vertex that
/// pairwise share distinct edges span a cell `C × K2`.
pub fn check_3cc(pc: &PartialCube) -> Option<CycleTriple> {
    let cycles = convex_cycles(pc);
    let sets: Vec<VertexSet> = cycles
        .iter()
        .map(|c| VertexSet::from_iter(pc.n(), c.iter().copied()))
        .collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); pc.n()];
    for (i, c) in cycles.iter().enumerate() {
        for &v in c {
            through[v].push(i);
        }
    }
    let g = pc.graph();
    let edge_meet = |a: usize, b: usize| -> Option<(usize, usize)> {
        let m = sets[a].intersection(&sets[b]).to_vec();
        (m.len() == 2 && g.has_edge(m[0], m[1])).then(|| (m[0], m[1]))
    };
    for l in &through {
        for (x, &a) in l.iter().enumerate() {
            for (y, &b) in l.iter().enumerate().skip(x + 1) {
                let Some(eab) = edge_meet(a, b) else { continue };
                for &c in &l[y + 1..] {
                    let (Some(ebc), Some(eca)) = (edge_meet(b, c), edge_meet(c, a)) else {
                        continue;
                    };
                    if eab == ebc || ebc == eca || eca == eab {
                        continue;
                    }
                    let mut common = sets[a].intersection(&sets[b]);
                    common.intersect_with(&sets[c]);
                    if common.len() != 1 {
                        continue;
                    }
                    let hull = pc.convex_hull(&sets[a].union(&sets[b]).union(&sets[c])).unwrap();
                    let mut lens = [cycles[a].len(), cycles[b].len(), cycles[c].len()];
                    lens.sort_unstable();
                    let ok = lens[0] == 4
                        && lens[1] == 4
                        && hull.len() == 2 * lens[2]
                        && match factorize_cell(pc, &hull) {
                            Ok(cell) => {
                                let want: Vec<Factor> = if lens[2] == 4 {
                                    vec![Factor::Edge; 3]
                                } else {
                                    vec![Factor::Cycle(lens[2]), Factor::Edge]
                                };
                                cell.factors() == want.as_slice()
                            }
                            Err(_) => false,
                        };
                    if !ok {
                        return Some([cycles[a].clone(), cycles[b].clone(), cycles[c].clone()]);
                    }
                }
            }
        }
    }
    None
}

/// The 3C condition: three (k+2)-cells pairwise meeting in distinct
/// (k+1)-cells and jointly in a k-cell span a (k+3)-cell. Returns indices
/// into the complex of the first violating triple.
pub fn check_3c(pc: &PartialCube, cx: &CellComplex) -> Option<[usize; 3]> {
    let cells = cx.cells();
    for (zi, z) in cells.iter().enumerate() {
        let k = z.dimension();
        let l: Vec<usize> = (0..cells.len())
            .filter(|&i| cells[i].dimension() == k + 2 && z.vertices().is_subset(cells[i].vertices()))
            .collect();
        let meet = |a: usize, b: usize| -> Option<usize> {
            let m = cells[a].vertices().intersection(cells[b].vertices());
            cx.find(&m).filter(|&i| cells[i].dimension() == k + 1)
        };
        for (x, &a) in l.iter().enumerate() {
            for (y, &b) in l.iter().enumerate().skip(x + 1) {
                let Some(yab) = meet(a, b) else { continue };
                for &c in &l[y + 1..] {
                    let (Some(ybc), Some(yca)) = (meet(b, c), meet(c, a)) else {
                        continue;
                    };
                    if yab == ybc || ybc == yca || yca == yab {
                        continue;
                    }
                    let mut common = cells[a].vertices().intersection(cells[b].vertices());
                    common.intersect_with(cells[c].vertices());
                    if cx.find(&common) != Some(zi) {
                        continue;
                    }
                    let u = cells[a].vertices().union(cells[b].vertices()).union(cells[c].vertices());
                    let hull = pc.convex_hull(&u).unwrap();
                    let ok = matches!(factorize_cell(pc, &hull), Ok(cell) if cell.dimension() == k + 3);
                    if !ok {
                        return Some([a, b, c]);
                    }
                }
            }
        }
    }
    None
}

/// The antipodal map of a convex set, as `(x, x⁻)` pairs, when `s` is
/// antipodal.
pub fn antipode_map(pc: &PartialCube, s: &VertexSet) -> Result<Option<Vec<(usize, usize)>>> {
    if !pc.is_convex(s)? {
        return Err(Error::Precondition("set is not convex".into()));
    }
    let crossing = pc.crossing_classes(s);
    let lookup: HashMap<&SignVector, usize> = s.iter().map(|v| (pc.coords(v), v)).collect();
    let mut map = Vec::with_capacity(s.len());
    for x in s.iter() {
        let mut t = pc.coords(x).clone();
        for &c in &crossing {
            t.toggle(c);
        }
        match lookup.get(&t) {
            Some(&y) => map.push((x, y)),
            None => return Ok(None),
        }
    }
    Ok(Some(map))
}

pub fn is_antipodal(pc: &PartialCube, s: &VertexSet) -> Result<bool> {
    Ok(antipode_map(pc, s)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanningCycle {
    Cycle(Vec<usize>),
    /// A single vertex; no cycle exists.
    DegenerateVertex(usize),
    /// A single edge; the two-vertex "cycle".
    DegenerateEdge(usize, usize),
}

/// A shortest path from the least vertex `x` to `x⁻` followed by its
/// antipodal image.
pub fn spanning_isometric_cycle(pc: &PartialCube, s: &VertexSet) -> Result<SpanningCycle> {
    let map = antipode_map(pc, s)?.ok_or_else(|| Error::Precondition("set is not antipodal".into()))?;
    let anti: HashMap<usize, usize> = map.into_iter().collect();
    let x = s.first().unwrap();
    let xa = anti[&x];
    match s.len() {
        1 => return Ok(SpanningCycle::DegenerateVertex(x)),
        2 => return Ok(SpanningCycle::DegenerateEdge(x, xa)),
        _ => {}
    }
    let mut path = vec![x];
    let mut cur = x;
    while cur != xa {
        cur = pc
            .graph()
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&y| s.contains(y) && pc.d(y, xa) + 1 == pc.d(cur, xa))
            .unwrap();
        path.push(cur);
    }
    let half = path.len() - 1;
    let mut cycle = path.clone();
    cycle.extend(path[1..half].iter().map(|v| anti[v]));
    Ok(SpanningCycle::Cycle(cycle))
}

/// Edges of each class of the transitive closure of "opposite on a convex
/// cycle"; the result maps edge index to the block's least edge index.
pub fn psi_star_blocks(pc: &PartialCube) -> Vec<usize> {
    let g = pc.graph();
    let mut uf = UnionFind::new(g.m());
    for c in convex_cycles(pc) {
        let l = c.len();
        for i in 0..l / 2 {
            let e1 = g.edge_index(c[i], c[(i + 1) % l]).unwrap();
            let e2 = g.edge_index(c[i + l / 2], c[(i + l / 2 + 1) % l]).unwrap();
            uf.union(e1, e2);
        }
    }
    (0..g.m()).map(|e| uf.find(e)).collect()
}

/// Whether Ψ* and Θ give the same partition of the edges.
pub fn theta_equals_psi_star(pc: &PartialCube) -> bool {
    let blocks = psi_star_blocks(pc);
    let mut class_of_block: HashMap<usize, ClassId> = HashMap::new();
    let mut block_of_class: HashMap<ClassId, usize> = HashMap::new();
    for (e, &b) in blocks.iter().enumerate() {
        let c = pc.edge_class(e);
        if *class_of_block.entry(b).or_insert(c) != c || *block_of_class.entry(c).or_insert(b) != b {
            return false;
        }
    }
    true
}
