//! Reference computations written directly from the definitions, sharing no
//! code with the library beyond its data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use diameters_core::{Color, Meander, Rational, RegionGraph, RegionId, Side};

/// A region as "innermost arc above/below an axis segment", `None` = root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OracleRegion {
    pub side: Side,
    pub arc: Option<usize>,
}

pub struct OracleGraph {
    /// (north, south) regions of each axis segment.
    pub edges: Vec<(OracleRegion, OracleRegion)>,
    pub color: BTreeMap<OracleRegion, Color>,
}

/// Arcs as (side, left, right) positions, with `a = 0` and `b = n + 1`.
pub fn arcs(m: &Meander) -> Vec<(Side, usize, usize)> {
    let n = m.order.len();
    let mut pts = vec![0];
    pts.extend(&m.order);
    pts.push(n + 1);
    let mut side = m.start_side;
    pts.windows(2)
        .map(|w| {
            let arc = (side, w[0].min(w[1]), w[0].max(w[1]));
            side = if side == Side::North { Side::South } else { Side::North };
            arc
        })
        .collect()
}

pub fn graph(m: &Meander) -> OracleGraph {
    let arcs = arcs(m);
    let n = m.order.len();
    let mut color = BTreeMap::new();
    let mut edges = Vec::new();
    for k in 0..=n {
        let mut ends = [OracleRegion { side: Side::North, arc: None }; 2];
        for (slot, side) in [Side::North, Side::South].into_iter().enumerate() {
            // arcs on this side spanning segment (k, k+1)
            let covering: Vec<usize> =
                (0..arcs.len()).filter(|&i| arcs[i].0 == side && arcs[i].1 <= k && k < arcs[i].2).collect();
            let innermost = covering.iter().copied().min_by_key(|&i| arcs[i].2 - arcs[i].1);
            let region = OracleRegion { side, arc: innermost };
            let root = if side == Side::North { Color::White } else { Color::Black };
            let c = if covering.len() % 2 == 0 { root } else { flip(root) };
            color.insert(region, c);
            ends[slot] = region;
        }
        edges.push((ends[0], ends[1]));
    }
    OracleGraph { edges, color }
}

pub fn flip(c: Color) -> Color {
    match c {
        Color::Black => Color::White,
        Color::White => Color::Black,
    }
}

/// Depth of every vertex in its color tree, by breadth-first search from the
/// root (the vertex with `is_root`).
pub fn depths(g: &RegionGraph) -> BTreeMap<RegionId, usize> {
    let mut adj: BTreeMap<RegionId, Vec<RegionId>> = BTreeMap::new();
    for e in &g.edges {
        adj.entry(e.north).or_default().push(e.south);
        adj.entry(e.south).or_default().push(e.north);
    }
    let mut depth = BTreeMap::new();
    let mut queue = VecDeque::new();
    for v in g.vertices.iter().filter(|v| v.is_root) {
        depth.insert(v.id, 0);
        queue.push_back(v.id);
    }
    while let Some(v) = queue.pop_front() {
        for &u in adj.get(&v).into_iter().flatten() {
            if !depth.contains_key(&u) {
                depth.insert(u, depth[&v] + 1);
                queue.push_back(u);
            }
        }
    }
    depth
}

/// `Σ w(v)·⌈depth(v)/2⌉` over black non-root vertices.
pub fn closed_form(g: &RegionGraph) -> Rational {
    let depth = depths(g);
    let mut total = Rational::from_integer(0.into());
    for v in g.vertices.iter().filter(|v| v.color == Color::Black && !v.is_root) {
        let d = depth[&v.id];
        total += &v.weight * Rational::from_integer(d.div_ceil(2).into());
    }
    total
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
