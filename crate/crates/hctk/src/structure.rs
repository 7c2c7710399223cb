//! Carriers, stars, thickening, ball Helly checks, gated amalgams and the
//! decomposition of hypercellular graphs into cells.

use crate::cells::{cell_complex, factorize_cell, CellComplex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iso::canonical_form;
use crate::limits;
use crate::minors::is_hypercellular;
use crate::pcube::{recognize_partial_cube, ClassId, PartialCube, Sign};
use crate::vset::VertexSet;
use serde::Serialize;

/// The carrier `N(E_f)` and its two halves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Carrier {
    pub all: VertexSet,
    pub minus: VertexSet,
    pub plus: VertexSet,
}

fn carrier_in(pc: &PartialCube, cx: &CellComplex, f: ClassId) -> Result<Carrier> {
    let plus_side = pc.halfspace(f, Sign::Plus)?;
    let mut all = VertexSet::empty(pc.n());
    for cell in cx.maximal_cells() {
        if cell.factor_of_class(f).is_some() {
            all.union_with(cell.vertices());
        }
    }
    Ok(Carrier {
        plus: all.intersection(plus_side),
        minus: all.difference(plus_side),
        all,
    })
}

/// Union of all cells crossed by `E_f`.
pub fn carrier(pc: &PartialCube, f: ClassId) -> Result<Carrier> {
    pc.check_class(f)?;
    carrier_in(pc, &cell_complex(pc), f)
}

/// Union of all cells containing the cell `x`.
pub fn star(pc: &PartialCube, x: &VertexSet) -> Result<VertexSet> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    factorize_cell(pc, x).map_err(|e| Error::Precondition(format!("not a cell: {:?}", e.reason)))?;
    let cx = cell_complex(pc);
    let mut out = VertexSet::empty(pc.n());
    for cell in cx.maximal_cells() {
        if x.is_subset(cell.vertices()) {
            out.union_with(cell.vertices());
        }
    }
    Ok(out)
}

/// Same vertices; two vertices are adjacent when they lie in a common cell.
pub fn thickening(pc: &PartialCube) -> Graph {
    let cx = cell_complex(pc);
    let mut edges = Vec::new();
    for cell in cx.maximal_cells() {
        let m = cell.members();
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(pc.n(), edges).expect("thickening of a connected graph")
}

fn distinct_balls(g: &Graph) -> Vec<VertexSet> {
    let m = g.metric();
    let mut balls: Vec<VertexSet> = (0..g.n())
        .flat_map(|v| (0..=m.diameter()).map(move |r| (v, r)))
        .map(|(v, r)| m.ball(v, r))
        .collect();
    balls.sort();
    balls.dedup();
    balls
}

/// Whether pairwise intersecting families of balls have a common vertex.
/// With `max_family = None` all families are considered, using the
/// criterion that a family has the Helly property iff for every three
/// vertices the members containing at least two of them meet. A bound
/// restricts the check to families of at most that many balls.
pub fn is_ball_helly(g: &Graph, max_family: Option<usize>) -> Result<bool> {
    limits::check("vertex count for ball Helly check", g.n(), limits::BALL_HELLY_VERTICES)?;
    let balls = distinct_balls(g);
    let n = g.n();
    match max_family {
        Some(k) if k < balls.len() => Ok(bounded_helly(&balls, k)),
        _ => {
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let mut meet = VertexSet::full(n);
                        for ball in &balls {
                            let hits = [a, b, c].iter().filter(|&&x| ball.contains(x)).count();
                            if hits >= 2 {
                                meet.intersect_with(ball);
                            }
                        }
                        if meet.is_empty() {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

fn bounded_helly(balls: &[VertexSet], k: usize) -> bool {
    fn extend(balls: &[VertexSet], chosen: &mut Vec<usize>, meet: &VertexSet, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for j in start..balls.len() {
            if !chosen.iter().all(|&i| balls[i].intersects(&balls[j])) {
                continue;
            }
            let next = meet.intersection(&balls[j]);
            if next.is_empty() {
                return false;
            }
            chosen.push(j);
            let ok = extend(balls, chosen, &next, k);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if k < 2 || balls.is_empty() {
        return true;
    }
    let full = VertexSet::full(balls[0].universe());
    extend(balls, &mut Vec::new(), &full, k)
}

/// A gated amalgam with the embeddings of both parts.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub cube: PartialCube,
    /// Vertex of the first part to vertex of the amalgam (the identity).
    pub left: Vec<usize>,
    /// Vertex of the second part to vertex of the amalgam.
    pub right: Vec<usize>,
}

/// Glues `g2` onto `g1` by the pairs `(vertex of g1, vertex of g2)`. The
/// amalgam lists the vertices of `g1` first, then the unglued vertices of
/// `g2` in order.
pub fn gated_amalgam(g1: &PartialCube, g2: &PartialCube, glue: &[(usize, usize)]) -> Result<Amalgam> {
    if glue.is_empty() {
        return Err(Error::Precondition("empty glue".into()));
    }
    let (n1, n2) = (g1.n(), g2.n());
    let mut fwd = vec![usize::MAX; n2];
    let mut a = VertexSet::empty(n1);
    let mut b = VertexSet::empty(n2);
    for &(x, y) in glue {
        if x >= n1 {
            return Err(Error::VertexOutOfRange(x));
        }
        if y >= n2 {
            return Err(Error::VertexOutOfRange(y));
        }
        if a.contains(x) || b.contains(y) {
            return Err(Error::Precondition("glue is not a bijection".into()));
        }
        a.insert(x);
        b.insert(y);
        fwd[y] = x;
    }
    if !g1.metric().is_gated(&a) {
        return Err(Error::Precondition("glue side in the first graph is not gated".into()));
    }
    if !g2.metric().is_gated(&b) {
        return Err(Error::Precondition("glue side in the second graph is not gated".into()));
    }
    for &(x, y) in glue {
        for &(x2, y2) in glue {
            if g1.graph().has_edge(x, x2) != g2.graph().has_edge(y, y2) {
                return Err(Error::Precondition("glued subgraphs are not isomorphic under the glue".into()));
            }
        }
    }
    let mut right = vec![0; n2];
    let mut next = n1;
    for y in 0..n2 {
        if fwd[y] != usize::MAX {
            right[y] = fwd[y];
        } else {
            right[y] = next;
            next += 1;
        }
    }
    let mut edges: Vec<(usize, usize)> = g1.graph().edges().to_vec();
    for &(u, v) in g2.graph().edges() {
        let (p, q) = (right[u].min(right[v]), right[u].max(right[v]));
        edges.push((p, q));
    }
    edges.sort_unstable();
    edges.dedup();
    let g = Graph::new(next, edges)?;
    let cube = recognize_partial_cube(&g).map_err(Error::NotPartialCube)?;
    Ok(Amalgam {
        cube,
        left: (0..n1).collect(),
        right,
    })
}

/// A decomposition into cells by gated amalgams. Vertex lists use the labels
/// of the decomposed graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmalgamTree {
    Leaf {
        vertices: Vec<usize>,
        signature: Vec<String>,
    },
    Node {
        vertices: Vec<usize>,
        separator: Vec<usize>,
        /// Θ-class defining the split, if the split came from a class.
        split_class: Option<ClassId>,
        left: Box<AmalgamTree>,
        right: Box<AmalgamTree>,
    },
}

impl AmalgamTree {
    pub fn vertices(&self) -> &[usize] {
        match self {
            AmalgamTree::Leaf { vertices, .. } | AmalgamTree::Node { vertices, .. } => vertices,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            AmalgamTree::Leaf { .. } => 1,
            AmalgamTree::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            AmalgamTree::Leaf { .. } => 0,
            AmalgamTree::Node { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    pub fn leaves(&self) -> Vec<&AmalgamTree> {
        match self {
            AmalgamTree::Leaf { .. } => vec![self],
            AmalgamTree::Node { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }

    pub fn to_dot(&self) -> String {
        fn go(t: &AmalgamTree, next: &mut usize, out: &mut String) -> usize {
            let id = *next;
            *next += 1;
            match t {
                AmalgamTree::Leaf { vertices, signature } => {
                    let sig = if signature.is_empty() { "K1".to_string() } else { signature.join("x") };
                    out.push_str(&format!("  t{id} [shape=box, label=\"{sig}\\n{vertices:?}\"];\n"));
                }
                AmalgamTree::Node {
                    separator,
                    split_class,
                    left,
                    right,
                    ..
                } => {
                    let class = split_class.map_or(String::new(), |f| format!(" f={f}"));
                    out.push_str(&format!("  t{id} [label=\"sep {separator:?}{class}\"];\n"));
                    let l = go(left, next, out);
                    let r = go(right, next, out);
                    out.push_str(&format!("  t{id} -> t{l};\n  t{id} -> t{r};\n"));
                }
            }
            id
        }
        let mut out = String::from("digraph amalgam {\n");
        go(self, &mut 0, &mut out);
        out.push_str("}\n");
        out
    }
}

struct Split {
    left: VertexSet,
    right: VertexSet,
    class: Option<ClassId>,
}

fn valid_split(pc: &PartialCube, a: &VertexSet, b: &VertexSet) -> bool {
    let m = pc.metric();
    if a.is_full() || b.is_full() || !a.union(b).is_full() {
        return false;
    }
    let sep = a.intersection(b);
    if sep.is_empty() {
        return false;
    }
    let only_a = a.difference(&sep);
    let only_b = b.difference(&sep);
    if pc
        .graph()
        .edges()
        .iter()
        .any(|&(u, v)| (only_a.contains(u) && only_b.contains(v)) || (only_b.contains(u) && only_a.contains(v)))
    {
        return false;
    }
    m.is_gated(a) && m.is_gated(b) && m.is_gated(&sep)
}

/// Smallest gated set containing the outside of `a` and its boundary.
fn complement_side(pc: &PartialCube, a: &VertexSet) -> Option<VertexSet> {
    let mut s = a.complement();
    if s.is_empty() {
        return None;
    }
    for v in a.iter() {
        if pc.graph().neighbors(v).iter().any(|&w| !a.contains(w)) {
            s.insert(v);
        }
    }
    pc.gated_hull(&s).ok()
}

fn candidate_splits(pc: &PartialCube, cx: &CellComplex) -> Vec<Split> {
    let mut out = Vec::new();
    for f in 0..pc.num_classes() {
        let car = carrier_in(pc, cx, f).expect("valid class");
        let plus = pc.halfspace(f, Sign::Plus).unwrap().union(&car.all);
        let minus = pc.halfspace(f, Sign::Minus).unwrap().union(&car.all);
        out.push(Split {
            left: plus,
            right: minus,
            class: Some(f),
        });
        if let Some(rest) = complement_side(pc, &car.all) {
            out.push(Split {
                left: car.all.clone(),
                right: rest,
                class: Some(f),
            });
        }
    }
    for cell in cx.maximal_cells() {
        if let Some(rest) = complement_side(pc, cell.vertices()) {
            out.push(Split {
                left: cell.vertices().clone(),
                right: rest,
                class: None,
            });
        }
    }
    out
}

/// Decomposes a hypercellular graph. Among valid splits the one with the
/// smallest larger side wins, then the smallest separator, then the first
/// found (classes in id order, then maximal cells).
pub fn decompose(pc: &PartialCube) -> Result<AmalgamTree> {
    if is_hypercellular(pc).is_err() {
        return Err(Error::NotHypercellular);
    }
    let labels: Vec<usize> = (0..pc.n()).collect();
    let classes: Vec<ClassId> = (0..pc.num_classes()).collect();
    decompose_rec(pc, &labels, &classes)
}

fn decompose_rec(pc: &PartialCube, labels: &[usize], classes: &[ClassId]) -> Result<AmalgamTree> {
    let vertices = labels.to_vec();
    if let Ok(cell) = factorize_cell(pc, &pc.all()) {
        return Ok(AmalgamTree::Leaf {
            vertices,
            signature: cell.signature(),
        });
    }
    let cx = cell_complex(pc);
    let best = candidate_splits(pc, &cx)
        .into_iter()
        .enumerate()
        .filter(|(_, s)| valid_split(pc, &s.left, &s.right))
        .min_by_key(|(i, s)| (s.left.len().max(s.right.len()), s.left.intersection_len(&s.right), *i))
        .map(|(_, s)| s)
        .ok_or_else(|| Error::Internal("no gated amalgam split found".into()))?;
    let sep = best.left.intersection(&best.right);
    let mut parts = Vec::with_capacity(2);
    for side in [&best.left, &best.right] {
        let sub = pc.induced(side)?;
        let sub_labels: Vec<usize> = sub.vertices.iter().map(|&v| labels[v]).collect();
        let sub_classes: Vec<ClassId> = sub.classes.iter().map(|&c| classes[c]).collect();
        parts.push(decompose_rec(&sub.cube, &sub_labels, &sub_classes)?);
    }
    let right = parts.pop().unwrap();
    let left = parts.pop().unwrap();
    Ok(AmalgamTree::Node {
        vertices,
        separator: sep.iter().map(|v| labels[v]).collect(),
        split_class: best.class.map(|c| classes[c]),
        left: Box::new(left),
        right: Box::new(right),
    })
}

/// Rebuilds a graph from a tree bottom-up with `gated_amalgam`; leaves are
/// taken from `host`. Returns the cube and, for each of its vertices, the
/// host label it stands for.
pub fn reassemble(host: &PartialCube, tree: &AmalgamTree) -> Result<(PartialCube, Vec<usize>)> {
    match tree {
        AmalgamTree::Leaf { vertices, .. } => {
            let s = VertexSet::from_iter(host.n(), vertices.iter().copied());
            let sub = host.induced(&s)?;
            Ok((sub.cube, sub.vertices))
        }
        AmalgamTree::Node {
            separator, left, right, ..
        } => {
            let (lc, ll) = reassemble(host, left)?;
            let (rc, rl) = reassemble(host, right)?;
            let glue: Vec<(usize, usize)> = separator
                .iter()
                .map(|s| {
                    let a = ll.iter().position(|x| x == s);
                    let b = rl.iter().position(|x| x == s);
                    a.zip(b).ok_or_else(|| Error::Internal("separator vertex missing from a side".into()))
                })
                .collect::<Result<_>>()?;
            let am = gated_amalgam(&lc, &rc, &glue)?;
            let mut labels = vec![usize::MAX; am.cube.n()];
            for (i, &l) in ll.iter().enumerate() {
                labels[am.left[i]] = l;
            }
            for (i, &l) in rl.iter().enumerate() {
                labels[am.right[i]] = l;
            }
            Ok((am.cube, labels))
        }
    }
}

/// Checks a tree against its host: every node satisfies the amalgam
/// invariants, every leaf is a cell, and the reassembly reproduces the host
/// exactly under the label map and up to canonical form.
pub fn verify_tree(host: &PartialCube, tree: &AmalgamTree) -> Result<bool> {
    fn nodes_ok(host: &PartialCube, t: &AmalgamTree) -> bool {
        let set = |v: &[usize]| VertexSet::from_iter(host.n(), v.iter().copied());
        match t {
            AmalgamTree::Leaf { vertices, .. } => factorize_cell(host, &set(vertices)).is_ok(),
            AmalgamTree::Node {
                vertices,
                separator,
                left,
                right,
                ..
            } => {
                let Ok(sub) = host.induced(&set(vertices)) else {
                    return false;
                };
                let local = |v: &[usize]| {
                    VertexSet::from_iter(sub.cube.n(), v.iter().map(|x| sub.vertices.binary_search(x).unwrap_or(usize::MAX)))
                };
                if !left.vertices().iter().chain(right.vertices()).all(|x| sub.vertices.binary_search(x).is_ok()) {
                    return false;
                }
                let (a, b) = (local(left.vertices()), local(right.vertices()));
                valid_split(&sub.cube, &a, &b)
                    && a.intersection(&b) == local(separator)
                    && nodes_ok(host, left)
                    && nodes_ok(host, right)
            }
        }
    }
    if !nodes_ok(host, tree) || tree.vertices().len() != host.n() {
        return Ok(false);
    }
    let (cube, labels) = reassemble(host, tree)?;
    if cube.n() != host.n() {
        return Ok(false);
    }
    let exact = cube
        .graph()
        .edges()
        .iter()
        .all(|&(u, v)| host.graph().has_edge(labels[u], labels[v]))
        && cube.graph().m() == host.graph().m();
    let same_form = match (canonical_form(&cube), canonical_form(host)) {
        (Ok(a), Ok(b)) => a == b,
        _ => crate::iso::are_isomorphic(cube.graph(), host.graph()),
    };
    Ok(exact && same_form)
}

/// Distinct factor signatures of the leaves, sorted; used to compare trees.
pub fn leaf_signatures(tree: &AmalgamTree) -> Vec<Vec<String>> {
    let mut v: Vec<Vec<String>> = tree
        .leaves()
        .into_iter()
        .map(|l| match l {
            AmalgamTree::Leaf { signature, .. } => signature.clone(),
            AmalgamTree::Node { .. } => unreachable!(),
        })
        .collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlib::{named, named_graph, product, Factor};
    use crate::iso::are_isomorphic;

    fn two_c6_at_vertex() -> PartialCube {
        let c6 = named("C6").unwrap();
        gated_amalgam(&c6, &c6, &[(0, 0)]).unwrap().cube
    }

    #[test]
    fn carriers() {
        let tree = named("prufer:0,1,1").unwrap();
        for f in 0..tree.num_classes() {
            let c = carrier(&tree, f).unwrap();
            assert_eq!(c.all.len(), 2);
            assert_eq!((c.plus.len(), c.minus.len()), (1, 1));
        }
        let prism = product(&[Factor::Cycle(6), Factor::Edge]).unwrap();
        assert!(carrier(&prism, 3).unwrap().all.is_full());
        let c4 = named("C4").unwrap();
        let two = gated_amalgam(&c4, &c4, &[(0, 0)]).unwrap().cube;
        let f = two.class_of(0, 1).unwrap();
        assert_eq!(carrier(&two, f).unwrap().all.to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn stars() {
        let path = named("P3").unwrap();
        assert_eq!(star(&path, &VertexSet::singleton(3, 0)).unwrap().to_vec(), vec![0, 1]);
        let claw = named("prufer:0,0").unwrap();
        assert!(star(&claw, &VertexSet::singleton(4, 0)).unwrap().is_full());
        let q3 = named("Q3").unwrap();
        assert!(star(&q3, &VertexSet::singleton(8, 5)).unwrap().is_full());
        assert!(star(&q3, &VertexSet::from_iter(8, [0, 3])).is_err());
    }

    #[test]
    fn thickenings() {
        let t = thickening(&named("Q3").unwrap());
        assert_eq!(t.m(), 28);
        let tree = named("prufer:2,2,3").unwrap();
        assert_eq!(thickening(&tree), *tree.graph());
        let th = thickening(&two_c6_at_vertex());
        assert_eq!(th.m(), 30);
    }

    #[test]
    fn ball_helly() {
        assert!(is_ball_helly(&thickening(&named("Q3").unwrap()), None).unwrap());
        assert!(!is_ball_helly(&named_graph("C6").unwrap(), None).unwrap());
        assert!(!is_ball_helly(&named_graph("C6").unwrap(), Some(3)).unwrap());
        assert!(is_ball_helly(&named_graph("C6").unwrap(), Some(2)).unwrap());
        let grid = product(&[Factor::Edge, Factor::Edge, Factor::Edge]).unwrap();
        assert!(is_ball_helly(&thickening(&grid), None).unwrap());
    }

    #[test]
    fn amalgams() {
        let c4 = named("C4").unwrap();
        let grid = gated_amalgam(&c4, &c4, &[(0, 0), (1, 1)]).unwrap().cube;
        let p3k2 = Graph::new(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]).unwrap();
        assert!(are_isomorphic(grid.graph(), &p3k2));
        let eight = two_c6_at_vertex();
        assert_eq!(eight.n(), 11);
        assert!(is_hypercellular(&eight).is_ok());
        let k2 = named("K2").unwrap();
        let p = gated_amalgam(&k2, &k2, &[(1, 0)]).unwrap().cube;
        assert!(are_isomorphic(p.graph(), &named_graph("P3").unwrap()));
        let c6 = named("C6").unwrap();
        assert!(gated_amalgam(&c6, &c6, &[(0, 0), (2, 2)]).is_err());
    }

    #[test]
    fn decompositions() {
        let path = named("P4").unwrap();
        let t = decompose(&path).unwrap();
        assert_eq!((t.leaf_count(), t.node_count()), (3, 2));
        assert!(verify_tree(&path, &t).unwrap());
        let prism = product(&[Factor::Cycle(6), Factor::Edge]).unwrap();
        assert!(matches!(decompose(&prism).unwrap(), AmalgamTree::Leaf { .. }));
        let eight = two_c6_at_vertex();
        let t = decompose(&eight).unwrap();
        match &t {
            AmalgamTree::Node {
                separator, left, right, ..
            } => {
                assert_eq!(separator.len(), 1);
                assert!(matches!(**left, AmalgamTree::Leaf { .. }));
                assert!(matches!(**right, AmalgamTree::Leaf { .. }));
            }
            _ => panic!("expected a node"),
        }
        assert!(verify_tree(&eight, &t).unwrap());
        assert!(t.to_dot().starts_with("digraph"));
        assert!(decompose(&named("Q3_minus").unwrap()).is_err());
    }
}
