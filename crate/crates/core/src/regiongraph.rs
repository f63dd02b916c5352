//! The region graph `G(L)`: complementary regions as vertices, shared `L₀`
//! segments as linearly ordered edges.
//!
//! Edges always join regions of the same color, so the graph is the disjoint
//! union of a black tree and a white tree, each rooted at the region touching
//! the boundary circle.
//!
//! # Canonical encoding
//!
//! [`encode`] renders a graph as one line:
//!
//! ```text
//! G1;n=<#edges-1>;V=<id>:<B|W>:<N|S>:<p/q>[:r],...;E=<north>-<south>,...
//! ```
//!
//! Vertex ids are recomputed from the structure (leftmost incident edge and
//! side, roots by color) and vertices are listed in id order, edges in `L₀`
//! order. Two graphs have equal encodings iff they agree on colors, sides,
//! weights and the ordered edge list.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::meander::{
    canonical_key, extract_regions, validate_weights, Color, RegionId, Side, WeightedMeander,
};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: RegionId,
    pub color: Color,
    pub side: Side,
    pub weight: Rational,
    pub is_root: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub index: usize,
    pub north: RegionId,
    pub south: RegionId,
}

impl GraphEdge {
    pub fn on(&self, side: Side) -> RegionId {
        match side {
            Side::North => self.north,
            Side::South => self.south,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<GraphEdge>,
    /// Canonical key of the meander the graph was built from.
    pub provenance: Vec<u8>,
}

impl RegionGraph {
    pub fn vertex(&self, id: RegionId) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    /// Number of crossings of the underlying diameter.
    pub fn n(&self) -> usize {
        self.edges.len().saturating_sub(1)
    }

    /// Edges at `id`, as (edge index, vertex across) pairs in edge order.
    pub fn incident(&self, id: RegionId) -> Vec<(usize, RegionId)> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.north == id {
                    Some((e.index, e.south))
                } else if e.south == id {
                    Some((e.index, e.north))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn weight(&self, id: RegionId) -> Option<&Rational> {
        self.vertex(id).map(|v| &v.weight)
    }
}

pub fn build_graph(wm: &WeightedMeander) -> Result<RegionGraph> {
    let report = validate_weights(wm);
    if !report.valid {
        return Err(Error::InvalidWeights(report.summary()));
    }
    let set = extract_regions(&wm.meander)?;
    let vertices = set
        .regions
        .iter()
        .map(|r| Vertex {
            id: r.id,
            color: r.color,
            side: r.side,
            weight: wm.weights[&r.id].clone(),
            is_root: r.is_root,
        })
        .collect();
    let edges = set
        .edges
        .iter()
        .map(|e| GraphEdge { index: e.index, north: e.north_region, south: e.south_region })
        .collect();
    Ok(RegionGraph { vertices, edges, provenance: canonical_key(&wm.meander) })
}

/// One color class of a region graph, rooted at its boundary region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub color: Color,
    pub root: RegionId,
    pub parent: BTreeMap<RegionId, RegionId>,
    pub depth: BTreeMap<RegionId, usize>,
    /// Children in increasing order of the connecting edge index.
    pub children: BTreeMap<RegionId, Vec<RegionId>>,
}

impl RootedTree {
    pub fn height(&self) -> usize {
        self.depth.values().copied().max().unwrap_or(0)
    }

    pub fn is_leaf(&self, id: RegionId) -> bool {
        self.children.get(&id).is_none_or(|c| c.is_empty())
    }

    pub fn grandparent(&self, id: RegionId) -> Option<RegionId> {
        self.parent.get(&id).and_then(|p| self.parent.get(p)).copied()
    }
}

/// Breadth-first tree of one color from its root.
pub fn tree_view(g: &RegionGraph, color: Color) -> RootedTree {
    let root = RegionId::Root(color);
    let mut parent = BTreeMap::new();
    let mut depth = BTreeMap::from([(root, 0)]);
    let mut children: BTreeMap<RegionId, Vec<RegionId>> = BTreeMap::new();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        let mut kids = Vec::new();
        for (_, u) in g.incident(v) {
            if !depth.contains_key(&u) {
                depth.insert(u, d + 1);
                parent.insert(u, v);
                kids.push(u);
                queue.push_back(u);
            }
        }
        children.insert(v, kids);
    }
    RootedTree { color, root, parent, depth, children }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub checks: Vec<Check>,
}

impl GraphReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect()
    }
}

/// Checks the structural properties every region graph must have.
pub fn check_graph_invariants(g: &RegionGraph) -> GraphReport {
    let mut checks = Vec::new();
    let mut check = |name, pass: bool, detail: String| checks.push(Check { name, pass, detail });
    let color_of: BTreeMap<RegionId, Color> = g.vertices.iter().map(|v| (v.id, v.color)).collect();
    let n = g.n();

    let dangling: Vec<String> = g
        .edges
        .iter()
        .filter(|e| !color_of.contains_key(&e.north) || !color_of.contains_key(&e.south))
        .map(|e| e.index.to_string())
        .collect();
    check("endpoints", dangling.is_empty(), format!("edges with unknown endpoints: {dangling:?}"));

    let mixed: Vec<usize> = g
        .edges
        .iter()
        .filter(|e| color_of.get(&e.north) != color_of.get(&e.south))
        .map(|e| e.index)
        .collect();
    check("monochrome-edges", mixed.is_empty(), format!("edges joining two colors: {mixed:?}"));

    let edge_colors: Vec<Option<Color>> = g.edges.iter().map(|e| color_of.get(&e.north).copied()).collect();
    let alternates = edge_colors.windows(2).all(|w| w[0] != w[1]);
    let ordered = g.edges.iter().enumerate().all(|(i, e)| e.index == i);
    check("alternation", alternates && ordered, format!("edge colors {edge_colors:?}"));

    let mut forest_detail = String::new();
    let mut forest = true;
    for color in [Color::Black, Color::White] {
        let members: Vec<RegionId> = g.vertices.iter().filter(|v| v.color == color).map(|v| v.id).collect();
        let index: BTreeMap<RegionId, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(members.len());
        let mut cycle = false;
        for e in &g.edges {
            if let (Some(&a), Some(&b)) = (index.get(&e.north), index.get(&e.south)) {
                cycle |= !uf.union(a, b);
            }
        }
        let components = (0..members.len()).map(|i| uf.find(i)).collect::<BTreeSet<_>>().len();
        if cycle || components != 1 {
            forest = false;
            let _ = write!(forest_detail, "{color:?}: cycle={cycle} components={components}; ");
        }
    }
    check("forest", forest, forest_detail);

    let roots: Vec<(RegionId, Color)> = g.vertices.iter().filter(|v| v.is_root).map(|v| (v.id, v.color)).collect();
    let one_each = roots.len() == 2
        && roots.iter().any(|r| r.1 == Color::Black)
        && roots.iter().any(|r| r.1 == Color::White)
        && roots.iter().all(|(id, c)| *id == RegionId::Root(*c));
    check("roots", one_each, format!("roots: {roots:?}"));

    let nv = g.vertices.len();
    check("vertex-count", nv == n + 3, format!("{nv} vertices for n = {n}"));

    let black = g.vertices.iter().filter(|v| v.color == Color::Black).count();
    let white = nv - black;
    check("color-balance", black.abs_diff(white) <= 1, format!("{black} black, {white} white"));

    let half = rational::half();
    let sum_by = |f: &dyn Fn(&Vertex) -> bool| rational::sum(g.vertices.iter().filter(|v| f(v)).map(|v| &v.weight));
    let sums = [
        sum_by(&|v| v.side == Side::North),
        sum_by(&|v| v.side == Side::South),
        sum_by(&|v| v.color == Color::White),
        sum_by(&|v| v.color == Color::Black),
    ];
    let positive = g.vertices.iter().all(|v| rational::is_positive(&v.weight) || n == 0);
    check(
        "weights",
        positive && sums.iter().all(|s| *s == half),
        format!("N,S,W,B sums = {:?}", sums.iter().map(rational::format).collect::<Vec<_>>()),
    );

    let bound = n / 2 + 1;
    let heights: Vec<usize> = [Color::Black, Color::White].iter().map(|&c| tree_view(g, c).height()).collect();
    check(
        "depth",
        heights.iter().all(|&h| h <= bound),
        format!("tree heights {heights:?}, bound {bound}"),
    );
    GraphReport { checks }
}

/// Graph-side counterpart of [`crate::meander::reduce_leaf`].
///
/// Removes `leaf` and its edge, adds its weight to `target`, fuses the two
/// neighboring edges into one and merges the opposite-color vertices across
/// them. The merged vertex keeps the smaller id; all ids are then
/// recanonicalized against the new edge order.
pub fn delete_leaf_surgery(g: &RegionGraph, leaf: RegionId, target: RegionId) -> Result<RegionGraph> {
    let v = g.vertex(leaf).ok_or(Error::UnknownRegion(leaf))?;
    g.vertex(target).ok_or(Error::UnknownRegion(target))?;
    if v.is_root {
        return Err(Error::LeafIsRoot(leaf));
    }
    let incident = g.incident(leaf);
    if incident.len() != 1 {
        return Err(Error::NotALeaf(leaf));
    }
    let tree = tree_view(g, v.color);
    let depth = tree.depth.get(&leaf).copied().unwrap_or(0);
    if depth < 2 {
        return Err(Error::LeafTooShallow { leaf, depth });
    }
    let (l, parent) = incident[0];
    let target_ok = g.vertex(target).is_some_and(|t| t.color == v.color)
        && target != leaf
        && g.incident(parent).iter().any(|&(_, u)| u == target);
    if !target_ok {
        return Err(Error::BadTarget { leaf, target });
    }
    if l == 0 || l + 1 >= g.edges.len() {
        return Err(Error::NotConsecutive(leaf));
    }
    let sigma = v.side;
    let (before, after) = (g.edges[l - 1], g.edges[l + 1]);
    let shared = before.on(sigma);
    if shared != after.on(sigma) {
        return Err(Error::NotConsecutive(leaf));
    }
    let (q1, q2) = (before.on(sigma.flip()), after.on(sigma.flip()));
    let merged = q1.min(q2);

    let rename = |id: RegionId| if id == q1 || id == q2 { merged } else { id };
    let mut vertices: Vec<Vertex> = Vec::with_capacity(g.vertices.len());
    for u in &g.vertices {
        if u.id == leaf {
            continue;
        }
        let id = rename(u.id);
        match vertices.iter_mut().find(|w| w.id == id) {
            Some(w) => w.weight += &u.weight,
            None => vertices.push(Vertex { id, ..u.clone() }),
        }
    }
    let t = rename(target);
    vertices.iter_mut().find(|w| w.id == t).expect("target survives").weight += &v.weight;

    let mut edges = Vec::with_capacity(g.edges.len() - 2);
    for e in &g.edges[..l - 1] {
        edges.push(*e);
    }
    let fused = match sigma {
        Side::North => GraphEdge { index: 0, north: shared, south: merged },
        Side::South => GraphEdge { index: 0, north: merged, south: shared },
    };
    edges.push(fused);
    for e in &g.edges[l + 2..] {
        edges.push(GraphEdge { north: rename(e.north), south: rename(e.south), ..*e });
    }
    for (i, e) in edges.iter_mut().enumerate() {
        e.index = i;
        e.north = rename(e.north);
        e.south = rename(e.south);
    }

    let mut provenance = format!("surgery({leaf}->{target});").into_bytes();
    provenance.extend_from_slice(&g.provenance);
    canonicalize(RegionGraph { vertices, edges, provenance })
}

/// Structural id of every vertex: roots by color, others by leftmost edge.
fn canonical_ids(g: &RegionGraph) -> Result<BTreeMap<RegionId, RegionId>> {
    let mut ids = BTreeMap::new();
    for v in &g.vertices {
        let id = if v.is_root {
            RegionId::Root(v.color)
        } else {
            let first = g
                .edges
                .iter()
                .find(|e| e.on(v.side) == v.id)
                .ok_or_else(|| Error::InvalidGraph(format!("vertex {} has no edge on its side", v.id)))?;
            RegionId::cell(first.index, v.side)
        };
        ids.insert(v.id, id);
    }
    Ok(ids)
}

fn canonicalize(g: RegionGraph) -> Result<RegionGraph> {
    let ids = canonical_ids(&g)?;
    let mut vertices: Vec<Vertex> = g.vertices.into_iter().map(|v| Vertex { id: ids[&v.id], ..v }).collect();
    vertices.sort_by_key(|v| v.id);
    let edges = g
        .edges
        .into_iter()
        .map(|e| GraphEdge { north: ids[&e.north], south: ids[&e.south], ..e })
        .collect();
    Ok(RegionGraph { vertices, edges, provenance: g.provenance })
}

/// Single-line canonical encoding; see the module docs for the format.
pub fn encode(g: &RegionGraph) -> Result<String> {
    let ids = canonical_ids(g)?;
    let mut vertices: Vec<(RegionId, &Vertex)> = g.vertices.iter().map(|v| (ids[&v.id], v)).collect();
    vertices.sort_by_key(|(id, _)| *id);
    let vs: Vec<String> = vertices
        .iter()
        .map(|(id, v)| {
            format!(
                "{id}:{}:{}:{}{}",
                v.color.letter(),
                v.side.letter(),
                rational::format(&v.weight),
                if v.is_root { ":r" } else { "" }
            )
        })
        .collect();
    let lookup = |id: &RegionId| ids.get(id).copied().ok_or(Error::UnknownRegion(*id));
    let mut es = Vec::with_capacity(g.edges.len());
    for e in &g.edges {
        es.push(format!("{}-{}", lookup(&e.north)?, lookup(&e.south)?));
    }
    Ok(format!("G1;n={};V={};E={}", g.n(), vs.join(","), es.join(",")))
}

/// Graphviz rendering; vertices labeled with weights, edges with their index.
pub fn to_dot(g: &RegionGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in &g.vertices {
        let (fill, font) = match v.color {
            Color::Black => ("black", "white"),
            Color::White => ("white", "black"),
        };
        let shape = if v.is_root { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\\n{}\", shape={shape}, style=filled, fillcolor={fill}, fontcolor={font}];",
            v.id,
            v.id,
            rational::format(&v.weight)
        );
    }
    for e in &g.edges {
        let _ = writeln!(out, "  \"{}\" -- \"{}\" [label=\"{}\"];", e.north, e.south, e.index);
    }
    out.push_str("}\n");
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meander::{enumerate_meanders, reduce_leaf, sample_weights, symmetric_weights, Meander};

    fn id(s: &str) -> RegionId {
        s.parse().unwrap()
    }

    fn spiral() -> RegionGraph {
        let m = Meander::new(Side::North, vec![3, 2, 1]).unwrap();
        build_graph(&symmetric_weights(&m).unwrap()).unwrap()
    }

    #[test]
    fn small_graphs() {
        let g0 = build_graph(&sample_weights(&Meander::trivial(Side::North), 1).unwrap()).unwrap();
        assert_eq!(g0.vertices.len(), 3);
        assert_eq!(g0.edges, vec![GraphEdge { index: 0, north: id("e0N"), south: id("rootB") }]);
        let white = tree_view(&g0, Color::White);
        assert_eq!(white.depth, BTreeMap::from([(id("rootW"), 0)]));

        let g = spiral();
        assert_eq!(g.edges.len(), 4);
        let black = tree_view(&g, Color::Black);
        assert_eq!(black.depth, BTreeMap::from([(id("rootB"), 0), (id("e0N"), 1), (id("e2S"), 2)]));
        assert_eq!(tree_view(&g, Color::White).height(), 2);

        let star = build_graph(&symmetric_weights(&Meander::new(Side::North, vec![1, 2]).unwrap()).unwrap()).unwrap();
        assert_eq!(tree_view(&star, Color::Black).height(), 1);
        assert_eq!(tree_view(&star, Color::White).height(), 1);
    }

    #[test]
    fn tree_sizes_add_up() {
        for n in 0..=6 {
            for m in enumerate_meanders(n).unwrap() {
                let g = build_graph(&sample_weights(&m, 2).unwrap()).unwrap();
                let total: usize =
                    [Color::Black, Color::White].iter().map(|&c| tree_view(&g, c).depth.len()).sum();
                assert_eq!(total, n + 3);
                assert!(check_graph_invariants(&g).all_pass(), "{m}");
            }
        }
    }

    #[test]
    fn negative_controls() {
        let mut two_white_roots = spiral();
        two_white_roots.vertices.iter_mut().find(|v| v.id == id("e1S")).unwrap().is_root = true;
        assert!(check_graph_invariants(&two_white_roots).failed().contains(&"roots"));

        // re-point edge 3 so the white class e1N-e1S gains a second edge: a cycle
        let mut cycle = spiral();
        cycle.edges[3] = GraphEdge { index: 3, north: id("e1N"), south: id("e1S") };
        assert!(check_graph_invariants(&cycle).failed().contains(&"forest"));
    }

    #[test]
    fn surgery_matches_meander_reduction() {
        let m = Meander::new(Side::North, vec![3, 2, 1]).unwrap();
        let wm = sample_weights(&m, 5).unwrap();
        let g = build_graph(&wm).unwrap();
        let cut = delete_leaf_surgery(&g, id("e2S"), id("rootB")).unwrap();
        let reduced = build_graph(&reduce_leaf(&wm, id("e2S"), id("rootB")).unwrap()).unwrap();
        assert_eq!(encode(&cut).unwrap(), encode(&reduced).unwrap());
        assert_eq!(cut.vertices.len(), g.vertices.len() - 2);
        assert!(check_graph_invariants(&cut).all_pass());
    }

    #[test]
    fn encoding_ignores_vertex_order() {
        let g = spiral();
        let mut shuffled = g.clone();
        shuffled.vertices.reverse();
        shuffled.vertices.swap(0, 2);
        assert_eq!(encode(&g).unwrap(), encode(&shuffled).unwrap());
        assert_eq!(
            encode(&g).unwrap(),
            "G1;n=3;V=rootB:B:S:1/8:r,rootW:W:N:1/8:r,e0N:B:N:1/4,e1N:W:N:1/8,e1S:W:S:1/4,e2S:B:S:1/8;\
             E=e0N-rootB,e1N-e1S,e0N-e2S,rootW-e1S"
        );
    }

    #[test]
    fn dot_is_well_formed() {
        let dot = to_dot(&spiral());
        assert!(dot.starts_with("graph G {\n") && dot.ends_with("}\n"));
        for line in dot.lines().skip(1).filter(|l| *l != "}") {
            let line = line.trim();
            assert!(line.ends_with("];"), "{line}");
            assert_eq!(line.matches('"').count() % 2, 0);
            assert_eq!(line.matches('[').count(), 1);
        }
        assert_eq!(dot.matches(" -- ").count(), 4);
    }
}
