//! Partial cubes: recognition, the hypercube embedding, halfspaces, and the
//! convexity and gatedness calculus.

use crate::error::{Error, Result};
use crate::graph::{Graph, Metric};
use crate::vset::VertexSet;
use fixedbitset::FixedBitSet;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub type ClassId = usize;

/// A coordinate vector; bit `f` is set when the vertex lies in `H⁺_f`.
pub type SignVector = FixedBitSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub fn from_bit(b: bool) -> Sign {
        if b {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// A partial map from classes to signs, naming an intersection of halfspaces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedSet(BTreeMap<ClassId, Sign>);

impl SignedSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an assignment; assigning both signs to one class is an error.
    pub fn insert(&mut self, f: ClassId, s: Sign) -> Result<()> {
        match self.0.get(&f) {
            Some(&old) if old != s => Err(Error::Precondition(format!(
                "class {f} assigned both signs"
            ))),
            _ => {
                self.0.insert(f, s);
                Ok(())
            }
        }
    }

    pub fn with(mut self, f: ClassId, s: Sign) -> Self {
        self.0.insert(f, s);
        self
    }

    pub fn get(&self, f: ClassId) -> Option<Sign> {
        self.0.get(&f).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassId, Sign)> + '_ {
        self.0.iter().map(|(&f, &s)| (f, s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Why a graph is not a partial cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    /// The edge `uv` closes an odd cycle.
    NonBipartite { u: usize, v: usize },
    /// `W(u,v)` is not convex: `x, y` lie in it but `z ∈ I(x,y)` does not.
    NonConvexWSet {
        u: usize,
        v: usize,
        x: usize,
        y: usize,
        z: usize,
    },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Rejection::NonBipartite { u, v } => {
                write!(f, "non-bipartite: edge {u} {v} closes an odd cycle")
            }
            Rejection::NonConvexWSet { u, v, x, y, z } => write!(
                f,
                "non-convex W-set: W({u},{v}) contains {x} and {y} but not {z} on a geodesic between them"
            ),
        }
    }
}

/// A graph with its isometric embedding into `{−1,+1}^Λ`.
#[derive(Clone, Debug)]
pub struct PartialCube {
    graph: Graph,
    metric: Metric,
    k: usize,
    edge_class: Vec<ClassId>,
    class_edges: Vec<Vec<usize>>,
    coords: Vec<SignVector>,
    halfspaces: Vec<[VertexSet; 2]>,
}

impl PartialEq for PartialCube {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.coords == other.coords
    }
}

impl Eq for PartialCube {}

/// A convex subgraph extracted as its own partial cube.
#[derive(Clone, Debug)]
pub struct SubCube {
    pub cube: PartialCube,
    /// New vertex label to host vertex label.
    pub vertices: Vec<usize>,
    /// New class id to host class id.
    pub classes: Vec<ClassId>,
}

pub(crate) fn hamming(a: &SignVector, b: &SignVector) -> usize {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Djoković–Winkler recognition. Θ-classes are numbered by their first edge
/// in sorted edge order; vertex 0 gets the all-minus vector.
pub fn recognize_partial_cube(g: &Graph) -> std::result::Result<PartialCube, Rejection> {
    if let Some((u, v)) = g.odd_edge() {
        return Err(Rejection::NonBipartite { u, v });
    }
    let metric = g.metric();
    let d = |a: usize, b: usize| metric.d(a, b);
    let m = g.m();
    let edges = g.edges();
    let mut edge_class = vec![usize::MAX; m];
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut consistent = true;
    for e in 0..m {
        if edge_class[e] != usize::MAX {
            continue;
        }
        let c = reps.len();
        let (u, v) = edges[e];
        reps.push((u, v));
        for (e2, &(x, y)) in edges.iter().enumerate() {
            if d(u, x) + d(v, y) != d(u, y) + d(v, x) {
                if edge_class[e2] == usize::MAX {
                    edge_class[e2] = c;
                } else if edge_class[e2] != c {
                    consistent = false;
                }
            }
        }
    }
    let k = reps.len();
    let n = g.n();
    let mut coords = vec![FixedBitSet::with_capacity(k); n];
    if consistent {
        for (c, &(u, v)) in reps.iter().enumerate() {
            let flip = d(0, v) < d(0, u);
            for (x, cx) in coords.iter_mut().enumerate() {
                let plus = d(x, v) < d(x, u);
                cx.set(c, plus != flip);
            }
        }
        'check: for x in 0..n {
            for y in x + 1..n {
                if hamming(&coords[x], &coords[y]) != d(x, y) {
                    consistent = false;
                    break 'check;
                }
            }
        }
    }
    if !consistent {
        return Err(nonconvex_witness(g, &metric));
    }
    Ok(PartialCube::assemble(g.clone(), metric, k, coords))
}

fn nonconvex_witness(g: &Graph, metric: &Metric) -> Rejection {
    for &(a, b) in g.edges() {
        for (u, v) in [(a, b), (b, a)] {
            let w = VertexSet::from_iter(
                g.n(),
                (0..g.n()).filter(|&x| metric.d(x, u) < metric.d(x, v)),
            );
            for x in w.iter() {
                for y in w.iter() {
                    let dy = metric.d(x, y);
                    for &z in g.neighbors(y) {
                        if metric.d(x, z) + 1 == dy && !w.contains(z) {
                            return Rejection::NonConvexWSet { u, v, x, y, z };
                        }
                    }
                }
            }
        }
    }
    unreachable!("bipartite graph with all W-sets convex is a partial cube")
}

impl PartialCube {
    fn assemble(graph: Graph, metric: Metric, k: usize, coords: Vec<SignVector>) -> PartialCube {
        let n = graph.n();
        let mut edge_class = Vec::with_capacity(graph.m());
        let mut class_edges = vec![Vec::new(); k];
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            let mut diff = coords[a].clone();
            diff.symmetric_difference_with(&coords[b]);
            let c = diff.minimum().expect("adjacent vertices differ in one coordinate");
            edge_class.push(c);
            class_edges[c].push(e);
        }
        let mut halfspaces = Vec::with_capacity(k);
        for c in 0..k {
            let plus = VertexSet::from_iter(n, (0..n).filter(|&x| coords[x].contains(c)));
            halfspaces.push([plus.complement(), plus]);
        }
        PartialCube {
            graph,
            metric,
            k,
            edge_class,
            class_edges,
            coords,
            halfspaces,
        }
    }

    /// Builds a partial cube from distinct coordinate vectors: adjacency is
    /// Hamming distance one, constant columns are dropped, and columns are
    /// flipped so that the first vector becomes all-minus. Returns the cube and
    /// the kept input columns in order. Fails unless the result is connected
    /// and isometric.
    pub fn from_sign_vectors(vectors: &[SignVector]) -> Result<(PartialCube, Vec<usize>)> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let dim = vectors[0].len();
        let mut any = FixedBitSet::with_capacity(dim);
        let mut all = FixedBitSet::with_capacity(dim);
        all.insert_range(..);
        for v in vectors {
            any.union_with(v);
            all.intersect_with(v);
        }
        let kept: Vec<usize> = (0..dim).filter(|&c| any.contains(c) && !all.contains(c)).collect();
        let k = kept.len();
        let mut coords = Vec::with_capacity(n);
        for v in vectors {
            let mut s = FixedBitSet::with_capacity(k);
            for (i, &c) in kept.iter().enumerate() {
                if v.contains(c) != vectors[0].contains(c) {
                    s.insert(i);
                }
            }
            coords.push(s);
        }
        let mut index: HashMap<&SignVector, usize> = HashMap::with_capacity(n);
        for (i, c) in coords.iter().enumerate() {
            if index.insert(c, i).is_some() {
                return Err(Error::Precondition("repeated coordinate vector".into()));
            }
        }
        let mut edges = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            let mut probe = c.clone();
            for b in 0..k {
                probe.toggle(b);
                if let Some(&j) = index.get(&probe) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
                probe.toggle(b);
            }
        }
        let graph = Graph::new(n, edges)?;
        let metric = graph.metric();
        for x in 0..n {
            for y in x + 1..n {
                if hamming(&coords[x], &coords[y]) != metric.d(x, y) {
                    return Err(Error::Precondition(
                        "coordinate vectors do not span an isometric subgraph".into(),
                    ));
                }
            }
        }
        Ok((PartialCube::assemble(graph, metric, k, coords), kept))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of Θ-classes, `|Λ|`.
    pub fn num_classes(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn d(&self, u: usize, v: usize) -> usize {
        self.metric.d(u, v)
    }

    pub fn coords(&self, v: usize) -> &SignVector {
        &self.coords[v]
    }

    pub fn all_coords(&self) -> &[SignVector] {
        &self.coords
    }

    pub fn sign(&self, v: usize, f: ClassId) -> Sign {
        Sign::from_bit(self.coords[v].contains(f))
    }

    pub fn edge_class(&self, e: usize) -> ClassId {
        self.edge_class[e]
    }

    pub fn class_of(&self, u: usize, v: usize) -> Option<ClassId> {
        self.graph.edge_index(u, v).map(|e| self.edge_class[e])
    }

    /// Edge indices of `E_f`.
    pub fn class_edges(&self, f: ClassId) -> &[usize] {
        &self.class_edges[f]
    }

    pub fn check_class(&self, f: ClassId) -> Result<()> {
        if f < self.k {
            Ok(())
        } else {
            Err(Error::UnknownClass(f))
        }
    }

    pub fn halfspace(&self, f: ClassId, s: Sign) -> Result<&VertexSet> {
        self.check_class(f)?;
        Ok(&self.halfspaces[f][s.index()])
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn interval(&self, u: usize, v: usize) -> VertexSet {
        self.metric.interval(u, v)
    }

    /// Classes with vertices of both signs in `s`.
    pub fn crossing_classes(&self, s: &VertexSet) -> Vec<ClassId> {
        let (any, all) = self.sign_profile(s);
        (0..self.k).filter(|&c| any.contains(c) && !all.contains(c)).collect()
    }

    fn sign_profile(&self, s: &VertexSet) -> (FixedBitSet, FixedBitSet) {
        let mut any = FixedBitSet::with_capacity(self.k);
        let mut all = FixedBitSet::with_capacity(self.k);
        all.insert_range(..);
        for v in s.iter() {
            any.union_with(&self.coords[v]);
            all.intersect_with(&self.coords[v]);
        }
        (any, all)
    }

    /// Intersection of the halfspaces containing `s`.
    pub fn convex_hull(&self, s: &VertexSet) -> Result<VertexSet> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let (any, all) = self.sign_profile(s);
        Ok(VertexSet::from_iter(
            self.n(),
            (0..self.n()).filter(|&x| all.is_subset(&self.coords[x]) && self.coords[x].is_subset(&any)),
        ))
    }

    pub fn is_convex(&self, s: &VertexSet) -> Result<bool> {
        Ok(self.convex_hull(s)?.len() == s.len())
    }

    pub fn gate(&self, s: &VertexSet, x: usize) -> Result<Option<usize>> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.metric.gate(s, x))
    }

    pub fn is_gated(&self, s: &VertexSet) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.metric.is_gated(s))
    }

    /// Smallest gated superset of `s`. The closest vertex without a gate must
    /// lie in every gated superset, so it is absorbed and the hull retaken.
    pub fn gated_hull(&self, s: &VertexSet) -> Result<VertexSet> {
        let mut t = self.convex_hull(s)?;
        loop {
            let mut best: Option<(usize, usize)> = None;
            for x in 0..self.n() {
                if t.contains(x) || self.metric.gate(&t, x).is_some() {
                    continue;
                }
                let dx = t.iter().map(|y| self.d(x, y)).min().unwrap();
                if best.is_none_or(|(bd, _)| dx < bd) {
                    best = Some((dx, x));
                }
            }
            match best {
                None => return Ok(t),
                Some((_, x)) => {
                    t.insert(x);
                    t = self.convex_hull(&t)?;
                }
            }
        }
    }

    /// The convex subgraph on `s` as a partial cube, with label maps.
    pub fn induced(&self, s: &VertexSet) -> Result<SubCube> {
        let vertices = s.to_vec();
        let vecs: Vec<SignVector> = vertices.iter().map(|&v| self.coords[v].clone()).collect();
        let (cube, classes) = PartialCube::from_sign_vectors(&vecs)?;
        Ok(SubCube {
            cube,
            vertices,
            classes,
        })
    }

    /// Coordinate matrix as `±1` rows, for reporting.
    pub fn coordinate_rows(&self) -> Vec<Vec<i8>> {
        (0..self.n())
            .map(|v| (0..self.k).map(|c| self.sign(v, c).as_i8()).collect())
            .collect()
    }

    /// Edges of each Θ-class as vertex pairs.
    pub fn class_edge_pairs(&self) -> Vec<Vec<(usize, usize)>> {
        self.class_edges
            .iter()
            .map(|es| es.iter().map(|&e| self.graph.edges()[e]).collect())
            .collect()
    }
}
