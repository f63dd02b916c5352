use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{validate_meander, Color, Meander, RegionId, Side};
use crate::error::{Error, Result};

/// A connected component of `D \ (L₀ ∪ L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    #[serde(serialize_with = "crate::meander::io::ser_region_id")]
    pub id: RegionId,
    pub side: Side,
    pub color: Color,
    /// Indices of the `L₀` segments on the region's boundary, increasing.
    pub incident_edges: Vec<usize>,
    pub is_root: bool,
}

/// The two regions separated by one `L₀` segment strictly between `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRegions {
    pub index: usize,
    #[serde(serialize_with = "crate::meander::io::ser_region_id")]
    pub north_region: RegionId,
    #[serde(serialize_with = "crate::meander::io::ser_region_id")]
    pub south_region: RegionId,
}

impl EdgeRegions {
    pub fn region_on(&self, side: Side) -> RegionId {
        match side {
            Side::North => self.north_region,
            Side::South => self.south_region,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionSet {
    pub regions: Vec<Region>,
    pub edges: Vec<EdgeRegions>,
}

impl RegionSet {
    pub fn get(&self, id: RegionId) -> Option<&Region> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn count(&self, color: Color) -> usize {
        self.regions.iter().filter(|r| r.color == color).count()
    }

    /// Regions across each incident edge, in edge order.
    pub fn neighbors(&self, id: RegionId) -> Vec<RegionId> {
        let Some(region) = self.get(id) else { return Vec::new() };
        region
            .incident_edges
            .iter()
            .map(|&k| self.edges[k].region_on(region.side.flip()))
            .collect()
    }
}

/// Faces of the arrangement, read off the arc nesting on each side.
///
/// On each side the region just inside an arc `[l, r]` owns the segments the
/// arc covers minus those covered by its children, and its leftmost segment
/// is `l`. Color flips across every arc of `L`, starting from the white
/// northern root and the black southern root.
pub fn extract_regions(m: &Meander) -> Result<RegionSet> {
    let report = validate_meander(m);
    if !report.valid {
        return Err(Error::InvalidMeander(report.summary()));
    }
    let n = m.n();
    let arcs = m.arcs();

    let mut owner: BTreeMap<(usize, Side), RegionId> = BTreeMap::new();
    let mut regions: Vec<Region> = Vec::with_capacity(n + 3);
    for side in [Side::North, Side::South] {
        let root_color = if side == Side::North { Color::White } else { Color::Black };
        let mut side_arcs: Vec<_> = arcs.iter().filter(|a| a.side == side).collect();
        // wider arcs first so parents are colored before children
        side_arcs.sort_by_key(|a| (a.right() - a.left(), a.left()));
        side_arcs.reverse();

        let mut color_of: BTreeMap<RegionId, Color> = BTreeMap::new();
        color_of.insert(RegionId::Root(root_color), root_color);
        let innermost = |k: usize| {
            arcs.iter()
                .filter(|a| a.side == side && a.covers_edge(k))
                .min_by_key(|a| a.right() - a.left())
        };
        for arc in &side_arcs {
            let parent = arcs
                .iter()
                .filter(|b| {
                    b.side == side && b.left() < arc.left() && arc.right() < b.right()
                })
                .min_by_key(|b| b.right() - b.left());
            let parent_id = match parent {
                Some(b) => RegionId::cell(b.left(), side),
                None => RegionId::Root(root_color),
            };
            let c = color_of[&parent_id].flip();
            color_of.insert(RegionId::cell(arc.left(), side), c);
        }

        let mut incident: BTreeMap<RegionId, Vec<usize>> =
            color_of.keys().map(|&id| (id, Vec::new())).collect();
        for k in 0..=n {
            let id = match innermost(k) {
                Some(a) => RegionId::cell(a.left(), side),
                None => RegionId::Root(root_color),
            };
            incident.get_mut(&id).expect("region registered").push(k);
            owner.insert((k, side), id);
        }
        for (id, edges) in incident {
            regions.push(Region {
                id,
                side,
                color: color_of[&id],
                incident_edges: edges,
                is_root: id.is_root(),
            });
        }
    }
    regions.sort_by_key(|r| r.id);

    let edges: Vec<EdgeRegions> = (0..=n)
        .map(|k| EdgeRegions {
            index: k,
            north_region: owner[&(k, Side::North)],
            south_region: owner[&(k, Side::South)],
        })
        .collect();

    let set = RegionSet { regions, edges };
    for e in &set.edges {
        let cn = set.get(e.north_region).map(|r| r.color);
        let cs = set.get(e.south_region).map(|r| r.color);
        if cn != cs {
            return Err(Error::InvalidMeander(format!("segment {} joins regions of different colors", e.index)));
        }
    }
    Ok(set)
}

/// Tree depth of every region of `color`, measured from that color's root.
pub fn tree_depths(set: &RegionSet, color: Color) -> BTreeMap<RegionId, usize> {
    let root = RegionId::Root(color);
    let mut depth = BTreeMap::new();
    depth.insert(root, 0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        for u in set.neighbors(v) {
            if !depth.contains_key(&u) {
                depth.insert(u, d + 1);
                queue.push_back(u);
            }
        }
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meander::enumerate_meanders;

    fn id(s: &str) -> RegionId {
        s.parse().unwrap()
    }

    #[test]
    fn no_crossings() {
        let set = extract_regions(&Meander::trivial(Side::North)).unwrap();
        assert_eq!(set.regions.len(), 3);
        assert_eq!(set.edges.len(), 1);
        let lens = set.get(id("e0N")).unwrap();
        assert_eq!(lens.color, Color::Black);
        assert!(!lens.is_root);
        assert_eq!(set.edges[0].north_region, id("e0N"));
        assert_eq!(set.edges[0].south_region, id("rootB"));
        assert!(set.get(id("rootW")).unwrap().incident_edges.is_empty());
        let depths = tree_depths(&set, Color::Black);
        assert_eq!(depths[&id("e0N")], 1);
    }

    #[test]
    fn spiral_of_three() {
        let m = Meander::new(Side::North, vec![3, 2, 1]).unwrap();
        let set = extract_regions(&m).unwrap();
        assert_eq!(set.regions.len(), 6);
        // (north, south) pairs along L₀
        let pairs: Vec<(String, String)> = set
            .edges
            .iter()
            .map(|e| (e.north_region.to_string(), e.south_region.to_string()))
            .collect();
        let expect = [("e0N", "rootB"), ("e1N", "e1S"), ("e0N", "e2S"), ("rootW", "e1S")];
        assert_eq!(
            pairs,
            expect.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>()
        );
        let black = tree_depths(&set, Color::Black);
        assert_eq!(black, BTreeMap::from([(id("rootB"), 0), (id("e0N"), 1), (id("e2S"), 2)]));
        let white = tree_depths(&set, Color::White);
        assert_eq!(white, BTreeMap::from([(id("rootW"), 0), (id("e1S"), 1), (id("e1N"), 2)]));
    }

    #[test]
    fn two_petal_stars() {
        let m = Meander::new(Side::North, vec![1, 2]).unwrap();
        let set = extract_regions(&m).unwrap();
        assert_eq!(set.regions.len(), 5);
        for color in [Color::Black, Color::White] {
            assert!(tree_depths(&set, color).values().all(|&d| d <= 1));
        }
        assert_eq!(tree_depths(&set, Color::Black).len(), 3);
    }

    #[test]
    fn counts_on_all_small_meanders() {
        for n in 0..=8 {
            for m in enumerate_meanders(n).unwrap() {
                let set = extract_regions(&m).unwrap();
                assert_eq!(set.regions.len(), n + 3);
                assert_eq!(set.edges.len(), n + 1);
                assert_eq!(set.regions.iter().filter(|r| r.is_root).count(), 2);
                let (b, w) = (set.count(Color::Black), set.count(Color::White));
                assert!(b.abs_diff(w) <= 1, "{m}");
                for pair in set.edges.windows(2) {
                    let c0 = set.get(pair[0].north_region).unwrap().color;
                    let c1 = set.get(pair[1].north_region).unwrap().color;
                    assert_ne!(c0, c1);
                }
            }
        }
    }

    #[test]
    fn invalid_meander_rejected() {
        let bad = Meander { start_side: Side::North, order: vec![2, 1] };
        assert!(matches!(extract_regions(&bad), Err(Error::InvalidMeander(_))));
    }
}
