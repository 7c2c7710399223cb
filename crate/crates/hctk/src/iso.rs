//! Graph isomorphism by distance-preserving backtracking, and canonical forms
//! of partial cubes.

use crate::error::{Error, Result};
use crate::graph::{Graph, Metric};
use crate::limits;
use crate::pcube::PartialCube;

fn vertex_invariant(g: &Graph, m: &Metric, v: usize) -> Vec<usize> {
    let mut hist = vec![0usize; m.diameter() + 2];
    hist[0] = g.degree(v);
    for u in 0..g.n() {
        hist[m.d(v, u) + 1] += 1;
    }
    hist
}

struct Matcher<'a> {
    m1: &'a Metric,
    m2: &'a Metric,
    order: Vec<usize>,
    cands: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn consistent(&self, depth: usize, b: usize) -> bool {
        let a = self.order[depth];
        self.order[..depth]
            .iter()
            .all(|&p| self.m1.d(a, p) == self.m2.d(b, self.map[p]))
    }

    fn search(&mut self, depth: usize, all: bool, out: &mut Vec<Vec<usize>>) -> bool {
        if depth == self.order.len() {
            out.push(self.map.clone());
            return !all;
        }
        let a = self.order[depth];
        for i in 0..self.cands[a].len() {
            let b = self.cands[a][i];
            if self.used[b] || !self.consistent(depth, b) {
                continue;
            }
            self.map[a] = b;
            self.used[b] = true;
            let stop = self.search(depth + 1, all, out);
            self.used[b] = false;
            if stop {
                return true;
            }
        }
        false
    }
}

fn run(g1: &Graph, g2: &Graph, all: bool) -> Vec<Vec<usize>> {
    let n = g1.n();
    if n != g2.n() || g1.m() != g2.m() {
        return Vec::new();
    }
    let m1 = g1.metric();
    let m2 = g2.metric();
    if m1.diameter() != m2.diameter() {
        return Vec::new();
    }
    let inv1: Vec<_> = (0..n).map(|v| vertex_invariant(g1, &m1, v)).collect();
    let inv2: Vec<_> = (0..n).map(|v| vertex_invariant(g2, &m2, v)).collect();
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Vec::new();
    }
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| inv1[a] == inv2[b]).collect())
        .collect();
    // Root at a vertex with the rarest invariant, then BFS order so every
    // new vertex is adjacent to an earlier one.
    let root = (0..n).min_by_key(|&a| (cands[a].len(), a)).unwrap();
    let d = g1.distances(root);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (d[v], v));
    let mut matcher = Matcher {
        m1: &m1,
        m2: &m2,
        order,
        cands,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    let mut out = Vec::new();
    matcher.search(0, all, &mut out);
    out
}

/// An isomorphism `g1 → g2` as a vertex map, if one exists.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    run(g1, g2, false).into_iter().next()
}

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    find_isomorphism(g1, g2).is_some()
}

/// All automorphisms, sorted lexicographically as vertex maps.
pub fn automorphism_maps(g: &Graph) -> Result<Vec<Vec<usize>>> {
    limits::check("vertex count for automorphisms", g.n(), limits::AUTOMORPHISM_VERTICES)?;
    let mut maps = run(g, g, true);
    maps.sort();
    Ok(maps)
}

/// Canonical form of a partial cube: the lexicographically least sorted row
/// list over all basepoint flips and column permutations. Columns are only
/// permuted within classes of an isomorphism-invariant refinement, which
/// keeps the form exact while pruning the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<u64>,
}

pub fn canonical_form(pc: &PartialCube) -> Result<CanonicalForm> {
    let k = pc.num_classes();
    limits::check("class count for canonical form", k, limits::CANONICAL_CLASSES)?;
    let rows: Vec<u64> = (0..pc.n())
        .map(|v| pc.coords(v).ones().fold(0u64, |acc, c| acc | 1 << c))
        .collect();
    canonical_rows(&rows, k)
}

/// Canonical form of a set of distinct `k`-bit rows that spans a partial cube
/// (distance is Hamming distance).
pub fn canonical_rows(rows: &[u64], k: usize) -> Result<CanonicalForm> {
    let n = rows.len();
    let hd = |a: u64, b: u64| (a ^ b).count_ones() as usize;
    let profile = |b: usize| {
        let mut h = vec![0usize; k + 1];
        for &r in rows {
            h[hd(rows[b], r)] += 1;
        }
        h
    };
    let profiles: Vec<Vec<usize>> = (0..n).map(profile).collect();
    let best_profile = profiles.iter().min().unwrap().clone();
    let mut best: Option<Vec<u64>> = None;
    let mut budget: usize = 2_000_000usize.saturating_mul(limits::cap(1));
    for b in (0..n).filter(|&b| profiles[b] == best_profile) {
        let shifted: Vec<u64> = rows.iter().map(|&r| r ^ rows[b]).collect();
        let mut col_inv: Vec<(Vec<usize>, usize)> = (0..k)
            .map(|c| {
                let mut ds: Vec<usize> = shifted
                    .iter()
                    .filter(|&&r| r >> c & 1 == 1)
                    .map(|&r| r.count_ones() as usize)
                    .collect();
                ds.sort_unstable();
                (ds, c)
            })
            .collect();
        col_inv.sort();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, (inv, c)) in col_inv.iter().enumerate() {
            if i > 0 && col_inv[i - 1].0 == *inv {
                groups.last_mut().unwrap().push(*c);
            } else {
                groups.push(vec![*c]);
            }
        }
        let mut perm: Vec<usize> = Vec::with_capacity(k);
        let mut used = vec![false; k];
        permute_groups(&groups, 0, 0, &mut perm, &mut used, &shifted, &mut best, &mut budget)?;
    }
    Ok(CanonicalForm {
        n,
        k,
        rows: best.unwrap_or_default(),
    })
}

#[allow(clippy::too_many_arguments)]
fn permute_groups(
    groups: &[Vec<usize>],
    gi: usize,
    within: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    rows: &[u64],
    best: &mut Option<Vec<u64>>,
    budget: &mut usize,
) -> Result<()> {
    if gi == groups.len() {
        if *budget == 0 {
            return Err(Error::ScaleExceeded {
                what: "column permutations for canonical form",
                actual: usize::MAX,
                limit: 2_000_000usize.saturating_mul(limits::cap(1)),
            });
        }
        *budget -= 1;
        let k = perm.len();
        let mut key: Vec<u64> = rows
            .iter()
            .map(|&r| {
                let mut out = 0u64;
                for (pos, &c) in perm.iter().enumerate() {
                    if r >> c & 1 == 1 {
                        out |= 1 << (k - 1 - pos);
                    }
                }
                out
            })
            .collect();
        key.sort_unstable();
        if best.as_ref().is_none_or(|b| key < *b) {
            *best = Some(key);
        }
        return Ok(());
    }
    let g = &groups[gi];
    if within == g.len() {
        return permute_groups(groups, gi + 1, 0, perm, used, rows, best, budget);
    }
    for &c in g {
        if used[c] {
            continue;
        }
        used[c] = true;
        perm.push(c);
        permute_groups(groups, gi, within + 1, perm, used, rows, best, budget)?;
        perm.pop();
        used[c] = false;
    }
    Ok(())
}
