//! Measure-decorated contour trees of piecewise-linear fields.
//!
//! The zero-level component touching the boundary is contracted to a single
//! root vertex at level 0. Join and split trees are swept with union-find
//! (ties broken by vertex index) and merged by leaf elimination; the
//! augmented tree is then reduced to critical nodes joined by arcs.
//!
//! Each triangle's area is spread over levels exactly: below its middle
//! value the area under level `c` is `α(c−f₀)²/((f₁−f₀)(f₂−f₀))`, above it
//! the complement is quadratic in `f₂−c`. Those two pieces live on the tree
//! paths between the triangle's lowest and middle, and middle and highest
//! vertices.

use std::collections::VecDeque;
use std::fmt::Write as _;

use super::field::ScalarField;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Root,
    Maximum,
    Minimum,
    Saddle,
    Regular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourNode {
    pub level: f64,
    /// Mesh vertex, `None` for the contracted root.
    pub vertex: Option<usize>,
    pub kind: NodeKind,
    /// Area of flat triangles collapsed onto this node.
    pub point_mass: f64,
}

/// Area at levels in `[lo, hi]` with cumulative function `coef·(c − center)²`,
/// or a point mass at `lo == hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    center: f64,
    coef: f64,
    point: f64,
}

impl Piece {
    fn cumulative(&self, c: f64) -> f64 {
        self.coef * (c - self.center) * (c - self.center)
    }

    pub fn mass(&self) -> f64 {
        if self.lo == self.hi {
            self.point
        } else {
            self.cumulative(self.hi) - self.cumulative(self.lo)
        }
    }

    /// Mass strictly above level `c`.
    pub fn mass_above(&self, c: f64) -> f64 {
        if self.lo == self.hi {
            return if self.lo > c { self.point } else { 0.0 };
        }
        let a = c.max(self.lo);
        if a >= self.hi {
            0.0
        } else {
            self.cumulative(self.hi) - self.cumulative(a)
        }
    }

    /// Mass strictly below level `c`.
    pub fn mass_below(&self, c: f64) -> f64 {
        if self.lo == self.hi {
            return if self.lo < c { self.point } else { 0.0 };
        }
        let b = c.min(self.hi);
        if b <= self.lo {
            0.0
        } else {
            self.cumulative(b) - self.cumulative(self.lo)
        }
    }
}

/// Tree arc from `parent` (rootward) to `child`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourArc {
    pub parent: usize,
    pub child: usize,
    /// Regular mesh vertices along the arc, rootward first.
    pub interior: Vec<usize>,
    pub pieces: Vec<Piece>,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourTree {
    pub nodes: Vec<ContourNode>,
    pub arcs: Vec<ContourArc>,
    pub root: usize,
    /// Measure of the closed subtree hanging from each node.
    pub subtree: Vec<f64>,
    /// Arc joining each node to its parent.
    pub parent_arc: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loc {
    Node(usize),
    Interior(usize),
}

impl ContourTree {
    pub fn total_measure(&self) -> f64 {
        self.subtree[self.root]
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| v != self.root && self.children[v].is_empty()).collect()
    }

    /// Measure cut off from the root by the point of arc `arc` at `level`.
    pub fn away_measure(&self, arc: usize, level: f64) -> f64 {
        let a = &self.arcs[arc];
        let upward = self.nodes[a.child].level >= self.nodes[a.parent].level;
        let along: f64 = if upward {
            a.pieces.iter().map(|p| p.mass_above(level)).sum()
        } else {
            a.pieces.iter().map(|p| p.mass_below(level)).sum()
        };
        self.subtree[a.child] + along
    }

    /// Away-from-root measure sampled at `samples + 1` levels from the
    /// parent end to the child end.
    pub fn profile(&self, arc: usize, samples: usize) -> Vec<(f64, f64)> {
        let a = &self.arcs[arc];
        let (p, c) = (self.nodes[a.parent].level, self.nodes[a.child].level);
        (0..=samples)
            .map(|i| {
                let level = p + (c - p) * i as f64 / samples.max(1) as f64;
                (level, self.away_measure(arc, level))
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph contour {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if i == self.root { "doublecircle" } else { "circle" };
            let _ = writeln!(
                out,
                "  n{i} [shape={shape}, label=\"{:?}\\n{:.6}\"];",
                n.kind, n.level
            );
        }
        for a in &self.arcs {
            let _ = writeln!(out, "  n{} -- n{} [label=\"{:.6}\"];", a.parent, a.child, a.mass + 0.0);
        }
        out.push_str("}\n");
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

pub fn build_contour_tree(f: &ScalarField) -> Result<ContourTree> {
    if !f.supported {
        return Err(Error::Mesh("field does not vanish on the boundary".into()));
    }
    let mesh = &f.mesh;
    let nv = mesh.vertices.len();
    let edges = mesh.edges();

    // contract the zero component of the boundary into vertex 0
    let mut nbrs = vec![Vec::new(); nv];
    for &(u, v) in &edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    let mut in_root = vec![false; nv];
    let mut queue: VecDeque<usize> = (0..nv).filter(|&v| mesh.boundary[v]).collect();
    queue.iter().for_each(|&v| in_root[v] = true);
    while let Some(v) = queue.pop_front() {
        for &u in &nbrs[v] {
            if !in_root[u] && f.values[u] == 0.0 {
                in_root[u] = true;
                queue.push_back(u);
            }
        }
    }
    let mut id = vec![0usize; nv];
    let mut vertex_of = vec![None];
    let mut level = vec![0.0];
    for v in 0..nv {
        if !in_root[v] {
            id[v] = vertex_of.len();
            vertex_of.push(Some(v));
            level.push(f.values[v]);
        }
    }
    let m = vertex_of.len();
    let mut adj = vec![Vec::new(); m];
    for &(u, v) in &edges {
        let (a, b) = (id[u], id[v]);
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    // total order by (level, id): simulated simplicity
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| level[a].total_cmp(&level[b]).then(a.cmp(&b)));
    let mut rank = vec![0usize; m];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    // join tree (superlevel components), swept from the top
    let mut jt_up: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut jt_down: Vec<Option<usize>> = vec![None; m];
    let mut uf = UnionFind((0..m).collect());
    let mut lowest: Vec<usize> = (0..m).collect();
    for &v in order.iter().rev() {
        for &u in &adj[v] {
            if rank[u] < rank[v] {
                continue;
            }
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru != rv {
                jt_up[v].push(lowest[ru]);
                jt_down[lowest[ru]] = Some(v);
                uf.0[ru] = rv;
            }
        }
        let r = uf.find(v);
        lowest[r] = v;
    }
    // split tree (sublevel components), swept from the bottom
    let mut st_down: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut st_up: Vec<Option<usize>> = vec![None; m];
    let mut uf = UnionFind((0..m).collect());
    let mut highest: Vec<usize> = (0..m).collect();
    for &v in &order {
        for &u in &adj[v] {
            if rank[u] > rank[v] {
                continue;
            }
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru != rv {
                st_down[v].push(highest[ru]);
                st_up[highest[ru]] = Some(v);
                uf.0[ru] = rv;
            }
        }
        let r = uf.find(v);
        highest[r] = v;
    }

    // merge by peeling leaves
    let mut ct_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut removed = vec![false; m];
    let mut remaining = m;
    let is_leaf = |jt_up: &Vec<Vec<usize>>, st_down: &Vec<Vec<usize>>, v: usize| {
        jt_up[v].len() + st_down[v].len() == 1
    };
    let mut leaves: VecDeque<usize> = (0..m).filter(|&v| is_leaf(&jt_up, &st_down, v)).collect();
    while remaining > 1 {
        let Some(v) = leaves.pop_front() else {
            return Err(Error::Mesh("contour tree merge stalled; mesh is not simply connected".into()));
        };
        if removed[v] || !is_leaf(&jt_up, &st_down, v) {
            continue;
        }
        let w = if jt_up[v].is_empty() { jt_down[v] } else { st_up[v] }
            .expect("a leaf with another vertex remaining has a neighbor");
        ct_adj[v].push(w);
        ct_adj[w].push(v);
        // splice v out of both trees
        if let Some(d) = jt_down[v] {
            jt_up[d].retain(|&x| x != v);
        }
        for c in std::mem::take(&mut jt_up[v]) {
            jt_down[c] = jt_down[v];
            if let Some(d) = jt_down[v] {
                jt_up[d].push(c);
            }
        }
        if let Some(u) = st_up[v] {
            st_down[u].retain(|&x| x != v);
        }
        for c in std::mem::take(&mut st_down[v]) {
            st_up[c] = st_up[v];
            if let Some(u) = st_up[v] {
                st_down[u].push(c);
            }
        }
        removed[v] = true;
        remaining -= 1;
        if is_leaf(&jt_up, &st_down, w) {
            leaves.push_back(w);
        }
    }

    // reduce to nodes: the root and every vertex that is not a monotone pass-through
    let is_node = |v: usize| {
        if v == 0 || ct_adj[v].len() != 2 {
            return true;
        }
        let (a, b) = (ct_adj[v][0], ct_adj[v][1]);
        (rank[a] < rank[v]) == (rank[b] < rank[v])
    };
    let mut node_of = vec![usize::MAX; m];
    let mut nodes = Vec::new();
    let mut loc = vec![Loc::Node(0); m];
    let mut arcs: Vec<ContourArc> = Vec::new();
    let mut parent_arc = vec![None];
    node_of[0] = 0;
    nodes.push(ContourNode { level: 0.0, vertex: None, kind: NodeKind::Root, point_mass: 0.0 });
    let mut stack = vec![0usize];
    let mut seen = vec![false; m];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &first in &ct_adj[v] {
            if seen[first] {
                continue;
            }
            let mut interior = Vec::new();
            let (mut prev, mut cur) = (v, first);
            while !is_node(cur) {
                seen[cur] = true;
                interior.push(cur);
                let next = if ct_adj[cur][0] == prev { ct_adj[cur][1] } else { ct_adj[cur][0] };
                (prev, cur) = (cur, next);
            }
            seen[cur] = true;
            let child = nodes.len();
            node_of[cur] = child;
            nodes.push(ContourNode { level: level[cur], vertex: vertex_of[cur], kind: NodeKind::Regular, point_mass: 0.0 });
            let a = arcs.len();
            for &x in &interior {
                loc[x] = Loc::Interior(a);
            }
            loc[cur] = Loc::Node(child);
            parent_arc.push(Some(a));
            arcs.push(ContourArc { parent: node_of[v], child, interior, pieces: Vec::new(), mass: 0.0 });
            stack.push(cur);
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Mesh("contour graph is disconnected".into()));
    }
    let mut children = vec![Vec::new(); nodes.len()];
    for (a, arc) in arcs.iter().enumerate() {
        children[arc.parent].push(a);
    }
    let node_rank: Vec<usize> = nodes
        .iter()
        .map(|n| rank[n.vertex.map_or(0, |v| id[v])])
        .collect();
    for i in 1..nodes.len() {
        let parent = arcs[parent_arc[i].expect("non-root")].parent;
        let neighbors = children[i].iter().map(|&a| arcs[a].child).chain([parent]);
        let above = neighbors.clone().filter(|&o| node_rank[o] > node_rank[i]).count();
        let below = neighbors.count() - above;
        nodes[i].kind = match (above, below) {
            (0, _) => NodeKind::Maximum,
            (_, 0) => NodeKind::Minimum,
            (1, 1) => NodeKind::Regular,
            _ => NodeKind::Saddle,
        };
    }

    // arc depth for path finding
    let mut depth = vec![0usize; arcs.len()];
    let mut arc_parent = vec![None; arcs.len()];
    for a in 0..arcs.len() {
        arc_parent[a] = parent_arc[arcs[a].parent];
    }
    // arcs were created parent-before-child
    for a in 0..arcs.len() {
        depth[a] = arc_parent[a].map_or(1, |p: usize| depth[p] + 1);
    }
    let start_arc = |l: Loc| match l {
        Loc::Interior(a) => Some(a),
        Loc::Node(n) => parent_arc[n],
    };
    let arc_depth = |a: Option<usize>| a.map_or(0, |a| depth[a]);
    let path = |x: Loc, y: Loc, out: &mut Vec<usize>| {
        out.clear();
        let (mut a, mut b) = (start_arc(x), start_arc(y));
        while a != b {
            if arc_depth(a) >= arc_depth(b) {
                out.push(a.expect("deeper arc exists"));
                a = arc_parent[a.expect("deeper arc exists")];
            } else {
                out.push(b.expect("deeper arc exists"));
                b = arc_parent[b.expect("deeper arc exists")];
            }
        }
        if let Some(s) = a {
            if x == Loc::Interior(s) || y == Loc::Interior(s) {
                out.push(s);
            }
        }
    };

    let arc_range: Vec<(f64, f64)> = arcs
        .iter()
        .map(|a| {
            let (p, c) = (nodes[a.parent].level, nodes[a.child].level);
            (p.min(c), p.max(c))
        })
        .collect();
    let mut route = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let alpha = mesh.normalized_area(t);
        let mut vs = tri.map(|v| id[v]);
        vs.sort_by_key(|&v| rank[v]);
        let [v0, v1, v2] = vs;
        let (f0, f1, f2) = (level[v0], level[v1], level[v2]);
        if f2 == f0 {
            match loc[v1] {
                Loc::Node(n) => nodes[n].point_mass += alpha,
                Loc::Interior(a) => arcs[a].pieces.push(Piece { lo: f1, hi: f1, center: 0.0, coef: 0.0, point: alpha }),
            }
            continue;
        }
        let mut spread = |x: usize, y: usize, lo: f64, hi: f64, center: f64, coef: f64| {
            path(loc[x], loc[y], &mut route);
            for &a in &route {
                let (alo, ahi) = arc_range[a];
                let (l, h) = (lo.max(alo), hi.min(ahi));
                if l < h {
                    arcs[a].pieces.push(Piece { lo: l, hi: h, center, coef, point: 0.0 });
                }
            }
        };
        if f1 > f0 {
            spread(v0, v1, f0, f1, f0, alpha / ((f1 - f0) * (f2 - f0)));
        }
        if f2 > f1 {
            spread(v1, v2, f1, f2, f2, -alpha / ((f2 - f1) * (f2 - f0)));
        }
    }
    for a in &mut arcs {
        a.mass = a.pieces.iter().map(Piece::mass).sum();
    }
    let mut subtree: Vec<f64> = nodes.iter().map(|n| n.point_mass).collect();
    for a in (0..arcs.len()).rev() {
        let add = arcs[a].mass + subtree[arcs[a].child];
        subtree[arcs[a].parent] += add;
    }
    Ok(ContourTree { nodes, arcs, root: 0, subtree, parent_arc, children })
}
