//! Apices, quasi-medians, median cells and the apiculate property.

use crate::cells::{factorize_cell, Cell, CellComplex, NotACellReason};
use crate::error::{Error, Result};
use crate::limits;
use crate::pcube::PartialCube;
use crate::vset::VertexSet;
use serde::Serialize;

/// The `⪯_u`-maximal elements of `I(u,v) ∩ I(u,w)`, increasing.
pub fn apex_candidates(pc: &PartialCube, u: usize, v: usize, w: usize) -> Vec<usize> {
    let s = pc.interval(u, v).intersection(&pc.interval(u, w));
    s.iter()
        .filter(|&x| {
            let dx = pc.d(u, x);
            !pc.graph().neighbors(x).iter().any(|&y| s.contains(y) && pc.d(u, y) == dx + 1)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Apex {
    Unique { vertex: usize },
    Ambiguous { candidates: Vec<usize> },
}

/// The apex `(u v w)` with basepoint `u`.
pub fn apex(pc: &PartialCube, u: usize, v: usize, w: usize) -> Result<Apex> {
    for x in [u, v, w] {
        if x >= pc.n() {
            return Err(Error::VertexOutOfRange(x));
        }
    }
    let c = apex_candidates(pc, u, v, w);
    Ok(if c.len() == 1 {
        Apex::Unique { vertex: c[0] }
    } else {
        Apex::Ambiguous { candidates: c }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MetricTriangle {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl MetricTriangle {
    /// Intervals between the corners meet only in shared endpoints.
    pub fn is_metric_triangle(&self, pc: &PartialCube) -> bool {
        let corner = |a: usize, b: usize, c: usize| {
            pc.interval(a, b).intersection(&pc.interval(a, c)).to_vec() == vec![a]
        };
        let [x, y, z] = [self.x, self.y, self.z];
        corner(x, y, z) && corner(y, x, z) && corner(z, x, y)
    }
}

/// Why a quasi-median could not be computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguousApex {
    pub basepoint: usize,
    pub candidates: Vec<usize>,
}

/// `x = (u v w)`, `y = (v x w)`, `z = (w x y)`.
pub fn quasi_median(pc: &PartialCube, u: usize, v: usize, w: usize) -> Result<std::result::Result<MetricTriangle, AmbiguousApex>> {
    let step = |b: usize, p: usize, q: usize| -> Result<std::result::Result<usize, AmbiguousApex>> {
        Ok(match apex(pc, b, p, q)? {
            Apex::Unique { vertex } => Ok(vertex),
            Apex::Ambiguous { candidates } => Err(AmbiguousApex {
                basepoint: b,
                candidates,
            }),
        })
    };
    let x = match step(u, v, w)? {
        Ok(x) => x,
        Err(e) => return Ok(Err(e)),
    };
    let y = match step(v, x, w)? {
        Ok(y) => y,
        Err(e) => return Ok(Err(e)),
    };
    let z = match step(w, x, y)? {
        Ok(z) => z,
        Err(e) => return Ok(Err(e)),
    };
    let d = |a, b| pc.d(a, b);
    let decomposed = d(u, v) == d(u, x) + d(x, y) + d(y, v)
        && d(v, w) == d(v, y) + d(y, z) + d(z, w)
        && d(w, u) == d(w, z) + d(z, x) + d(x, u);
    if !decomposed {
        return Err(Error::Internal(format!(
            "quasi-median {x} {y} {z} of {u} {v} {w} does not split the distances"
        )));
    }
    Ok(Ok(MetricTriangle { x, y, z }))
}

/// The median cell with the gates of the three input vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MedianCell {
    pub triangle: MetricTriangle,
    pub cell: Cell,
    pub gates: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NoMedianCell {
    Ambiguous(AmbiguousApex),
    /// The gated hull of the quasi-median does not factorize.
    NotACell { hull: VertexSet, why: NotACellReason },
    /// The gates of two inputs do not lie on a common geodesic between them.
    GateCondition { hull: VertexSet, pair: [usize; 2] },
}

/// Whether the gates of `u, v, w` in `x` lie pairwise on common geodesics.
pub fn gate_condition(pc: &PartialCube, x: &VertexSet, t: [usize; 3]) -> std::result::Result<[usize; 3], [usize; 2]> {
    let g: Vec<usize> = t
        .iter()
        .map(|&a| pc.metric().gate(x, a).expect("gated set"))
        .collect();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        if pc.d(t[i], g[i]) + pc.d(g[i], g[j]) + pc.d(g[j], t[j]) != pc.d(t[i], t[j]) {
            return Err([t[i], t[j]]);
        }
    }
    Ok([g[0], g[1], g[2]])
}

pub fn median_cell(pc: &PartialCube, u: usize, v: usize, w: usize) -> Result<std::result::Result<MedianCell, NoMedianCell>> {
    let triangle = match quasi_median(pc, u, v, w)? {
        Ok(t) => t,
        Err(a) => return Ok(Err(NoMedianCell::Ambiguous(a))),
    };
    let corners = VertexSet::from_iter(pc.n(), [triangle.x, triangle.y, triangle.z]);
    let hull = pc.gated_hull(&corners)?;
    let cell = match factorize_cell(pc, &hull) {
        Ok(c) => c,
        Err(e) => return Ok(Err(NoMedianCell::NotACell { hull, why: e.reason })),
    };
    match gate_condition(pc, &hull, [u, v, w]) {
        Ok(gates) => Ok(Ok(MedianCell { triangle, cell, gates })),
        Err(pair) => Ok(Err(NoMedianCell::GateCondition { hull, pair })),
    }
}

/// Indices of the gated cells of `cx` meeting the gate condition for the
/// triple, inclusion-minimal ones only.
pub fn minimal_gate_cells(pc: &PartialCube, cx: &CellComplex, t: [usize; 3]) -> Vec<usize> {
    let good: Vec<usize> = (0..cx.cells().len())
        .filter(|&i| {
            let x = cx.cells()[i].vertices();
            pc.metric().is_gated(x) && gate_condition(pc, x, t).is_ok()
        })
        .collect();
    good.iter()
        .copied()
        .filter(|&i| {
            !good
                .iter()
                .any(|&j| j != i && cx.cells()[j].vertices().is_subset(cx.cells()[i].vertices()))
        })
        .collect()
}

/// Apex uniqueness for every triple, with the first failure `(u, v, w)`.
pub fn apiculate_violation(pc: &PartialCube) -> Result<Option<[usize; 3]>> {
    let n = pc.n();
    limits::check("vertex count for apiculate check", n, limits::APICULATE_VERTICES)?;
    let g = pc.graph();
    for u in 0..n {
        // Lower neighbors of each vertex with respect to the basepoint.
        let down: Vec<VertexSet> = (0..n)
            .map(|y| {
                VertexSet::from_iter(n, g.neighbors(y).iter().copied().filter(|&z| pc.d(u, z) + 1 == pc.d(u, y)))
            })
            .collect();
        let ivs: Vec<VertexSet> = (0..n).map(|v| pc.interval(u, v)).collect();
        for v in 0..n {
            for w in v..n {
                let s = ivs[v].intersection(&ivs[w]);
                let mut covered = VertexSet::empty(n);
                for y in s.iter() {
                    covered.union_with(&down[y]);
                }
                if s.len() - covered.intersection_len(&s) != 1 {
                    return Ok(Some([u, v, w]));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_apiculate(pc: &PartialCube) -> Result<bool> {
    Ok(apiculate_violation(pc)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{cell_complex, Factor};
    use crate::genlib::{named, product};

    #[test]
    fn apices() {
        let tree = named("prufer:0,0,0").unwrap();
        assert_eq!(apex(&tree, 1, 2, 3).unwrap(), Apex::Unique { vertex: 0 });
        let c6 = named("C6").unwrap();
        assert_eq!(apex(&c6, 0, 2, 4).unwrap(), Apex::Unique { vertex: 0 });
        let q3 = named("Q3").unwrap();
        // 011, 101, 110 have majority 111.
        assert_eq!(apex(&q3, 3, 5, 6).unwrap(), Apex::Unique { vertex: 7 });
        assert!(apex(&q3, 0, 1, 9).is_err());
    }

    #[test]
    fn quasi_medians() {
        let tree = named("prufer:0,0,0").unwrap();
        let t = quasi_median(&tree, 1, 2, 3).unwrap().unwrap();
        assert_eq!((t.x, t.y, t.z), (0, 0, 0));
        let c6 = named("C6").unwrap();
        let t = quasi_median(&c6, 0, 2, 4).unwrap().unwrap();
        assert_eq!((t.x, t.y, t.z), (0, 2, 4));
        assert!(t.is_metric_triangle(&c6));
        let qm = named("Q3_minus").unwrap();
        let t = quasi_median(&qm, 3, 5, 6).unwrap().unwrap();
        assert_eq!((t.x, t.y, t.z), (3, 5, 6));
    }

    #[test]
    fn median_cells() {
        let tree = named("prufer:0,1,1").unwrap();
        let m = median_cell(&tree, 2, 3, 4).unwrap().unwrap();
        assert_eq!(m.cell.len(), 1);
        let c6 = named("C6").unwrap();
        let m = median_cell(&c6, 0, 2, 4).unwrap().unwrap();
        assert_eq!(m.cell.factors(), &[Factor::Cycle(6)]);
        assert_eq!(m.gates, [0, 2, 4]);
        let qm = named("Q3_minus").unwrap();
        match median_cell(&qm, 3, 5, 6).unwrap() {
            Err(NoMedianCell::NotACell { hull, .. }) => assert!(hull.is_full()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_gate_cell_is_the_median_cell() {
        let g = product(&[Factor::Cycle(6), Factor::Edge]).unwrap();
        let cx = cell_complex(&g);
        for t in [[0, 2, 4], [0, 7, 9], [1, 1, 5]] {
            let m = median_cell(&g, t[0], t[1], t[2]).unwrap().unwrap();
            let mins = minimal_gate_cells(&g, &cx, t);
            assert_eq!(mins, vec![cx.find(m.cell.vertices()).unwrap()]);
        }
    }

    #[test]
    fn apiculate() {
        assert!(is_apiculate(&named("C6").unwrap()).unwrap());
        assert!(is_apiculate(&product(&[Factor::Cycle(6), Factor::Cycle(6)]).unwrap()).unwrap());
        assert!(is_apiculate(&named("Q3").unwrap()).unwrap());
    }
}
