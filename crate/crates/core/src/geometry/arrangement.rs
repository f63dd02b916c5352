//! Faces of `axis ∪ curve ∪ circle` and their areas as meander weights.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;

use super::rotation::{axis_crossings, check_embedded, Polyline};
use crate::error::{Error, Result};
use crate::meander::{extract_regions, validate_weights, Color, Meander, RegionId, Side, WeightedMeander};
use crate::rational::{self, Rational};

/// Areas are rounded to this denominator before the exact correction.
pub const AREA_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ArrangementWeights {
    pub weighted: WeightedMeander,
    /// Face areas over `π`, before rounding.
    pub areas: BTreeMap<RegionId, f64>,
    pub area_sum: f64,
    /// Largest `|weight − area|` introduced by the exact projection.
    pub max_adjustment: f64,
}

pub fn polyline_to_weighted_meander(c: &Polyline) -> Result<WeightedMeander> {
    Ok(arrangement_weights(c)?.weighted)
}

#[derive(Clone, Copy)]
enum Shape {
    Line,
    /// Semicircle traversed counter-clockwise (`true`) or clockwise.
    Arc(bool),
}

struct Dcel {
    points: Vec<[f64; 2]>,
    origin: Vec<usize>,
    shape: Vec<Shape>,
}

impl Dcel {
    fn add(&mut self, u: usize, v: usize, shape: Shape) -> usize {
        let h = self.origin.len();
        self.origin.extend([u, v]);
        let back = match shape {
            Shape::Line => Shape::Line,
            Shape::Arc(ccw) => Shape::Arc(!ccw),
        };
        self.shape.extend([shape, back]);
        h
    }

    fn dest(&self, h: usize) -> usize {
        self.origin[h ^ 1]
    }

    fn direction(&self, h: usize) -> f64 {
        let p = self.points[self.origin[h]];
        match self.shape[h] {
            Shape::Line => {
                let q = self.points[self.dest(h)];
                (q[1] - p[1]).atan2(q[0] - p[0])
            }
            Shape::Arc(ccw) => {
                let phi = p[1].atan2(p[0]);
                if ccw {
                    phi + PI / 2.0
                } else {
                    phi - PI / 2.0
                }
            }
        }
    }

    /// Face id of every half-edge and each face's signed area.
    fn faces(&self) -> (Vec<usize>, Vec<f64>) {
        let nv = self.points.len();
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for h in 0..self.origin.len() {
            outgoing[self.origin[h]].push(h);
        }
        let mut slot = vec![0usize; self.origin.len()];
        for list in &mut outgoing {
            let mut keyed: Vec<(f64, usize)> = list.iter().map(|&h| (self.direction(h).rem_euclid(2.0 * PI), h)).collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            *list = keyed.into_iter().map(|(_, h)| h).collect();
            for (i, &h) in list.iter().enumerate() {
                slot[h] = i;
            }
        }
        let next = |h: usize| {
            let v = self.dest(h);
            let deg = outgoing[v].len();
            outgoing[v][(slot[h ^ 1] + deg - 1) % deg]
        };
        let mut face = vec![usize::MAX; self.origin.len()];
        let mut areas = Vec::new();
        for start in 0..self.origin.len() {
            if face[start] != usize::MAX {
                continue;
            }
            let id = areas.len();
            let mut area = 0.0;
            let mut h = start;
            while face[h] == usize::MAX {
                face[h] = id;
                let (p, q) = (self.points[self.origin[h]], self.points[self.dest(h)]);
                area += 0.5 * (p[0] * q[1] - q[0] * p[1]);
                if let Shape::Arc(ccw) = self.shape[h] {
                    // semicircle beyond its diameter chord
                    area += if ccw { PI / 2.0 } else { -PI / 2.0 };
                }
                h = next(h);
            }
            areas.push(area);
        }
        (face, areas)
    }
}

/// Meander of a curve with its region areas projected exactly onto the
/// weight constraints.
pub fn arrangement_weights(c: &Polyline) -> Result<ArrangementWeights> {
    check_embedded(c)?;
    let crossings = axis_crossings(c)?;
    let n = crossings.len();
    if n == 0 {
        return Err(Error::Curve("curve has no transverse crossings with the axis".into()));
    }
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by(|&i, &j| crossings[i].1.total_cmp(&crossings[j].1));
    let mut order = vec![0usize; n];
    for (rank, &k) in by_x.iter().enumerate() {
        order[k] = rank + 1;
    }
    let start_side = if c.points[1][1] > 0.0 { Side::North } else { Side::South };
    let meander = Meander::new(start_side, order)?;
    let set = extract_regions(&meander)?;

    // vertices: a, b, crossings, then interior curve points
    let last = c.points.len() - 1;
    let mut dcel = Dcel { points: vec![c.points[0], c.points[last]], origin: Vec::new(), shape: Vec::new() };
    let crossing_ids: Vec<usize> = crossings
        .iter()
        .map(|&(_, x)| {
            dcel.points.push([x, 0.0]);
            dcel.points.len() - 1
        })
        .collect();
    let mut curve = vec![0usize];
    let mut k = 0;
    for i in 1..last {
        dcel.points.push(c.points[i]);
        curve.push(dcel.points.len() - 1);
        while k < n && crossings[k].0 == i {
            curve.push(crossing_ids[k]);
            k += 1;
        }
    }
    curve.push(1);
    for w in curve.windows(2) {
        dcel.add(w[0], w[1], Shape::Line);
    }
    let mut axis = vec![0usize];
    axis.extend(by_x.iter().map(|&k| crossing_ids[k]));
    axis.push(1);
    let east: Vec<usize> = axis.windows(2).map(|w| dcel.add(w[0], w[1], Shape::Line)).collect();
    dcel.add(1, 0, Shape::Arc(true));
    dcel.add(0, 1, Shape::Arc(true));

    let (face, signed) = dcel.faces();
    let inner: Vec<usize> = (0..signed.len()).filter(|&f| signed[f] > 0.0).collect();
    if inner.len() != n + 3 || signed.len() != n + 4 {
        return Err(Error::Curve(format!(
            "arrangement has {} bounded faces, expected {}",
            inner.len(),
            n + 3
        )));
    }
    let mut region_face: BTreeMap<RegionId, usize> = BTreeMap::new();
    for (k, &h) in east.iter().enumerate() {
        for (side, half) in [(Side::North, h), (Side::South, h ^ 1)] {
            let id = set.edges[k].region_on(side);
            let f = face[half];
            if *region_face.entry(id).or_insert(f) != f {
                return Err(Error::Curve(format!("region {id} meets two arrangement faces")));
            }
        }
    }
    let mut faces_used: Vec<usize> = region_face.values().copied().collect();
    faces_used.sort_unstable();
    faces_used.dedup();
    if faces_used.len() != set.regions.len() || faces_used.iter().any(|f| signed[*f] <= 0.0) {
        return Err(Error::Curve("arrangement faces do not match the meander regions".into()));
    }
    let areas: BTreeMap<RegionId, f64> = region_face.iter().map(|(&id, &f)| (id, signed[f] / PI)).collect();
    let area_sum = areas.values().sum();

    // round non-roots, equalize the north-black / south-white classes, fill roots
    let denom = BigInt::from(AREA_DENOMINATOR);
    let mut weights: BTreeMap<RegionId, Rational> = BTreeMap::new();
    for r in set.regions.iter().filter(|r| !r.is_root) {
        let k = ((areas[&r.id] * AREA_DENOMINATOR as f64).round() as i64).max(1);
        weights.insert(r.id, Rational::new(BigInt::from(k), denom.clone()));
    }
    let class = |side: Side, color: Color| -> Vec<RegionId> {
        set.regions.iter().filter(|r| !r.is_root && r.side == side && r.color == color).map(|r| r.id).collect()
    };
    let (nb, sw) = (class(Side::North, Color::Black), class(Side::South, Color::White));
    let sum = |ids: &[RegionId], w: &BTreeMap<RegionId, Rational>| rational::sum(ids.iter().map(|id| &w[id]));
    let (snb, ssw) = (sum(&nb, &weights), sum(&sw, &weights));
    if nb.is_empty() || sw.is_empty() {
        return Err(Error::Curve("a non-root weight class is empty".into()));
    }
    let mean = (&snb + &ssw) / rational::int(2);
    for (ids, total) in [(&nb, &snb), (&sw, &ssw)] {
        let scale = &mean / total;
        for id in ids.iter() {
            let w = weights.get_mut(id).expect("class member");
            *w = &*w * &scale;
        }
    }
    for color in [Color::White, Color::Black] {
        let side = color.root_side();
        let others = rational::sum(
            set.regions.iter().filter(|r| !r.is_root && r.side == side).map(|r| &weights[&r.id]),
        );
        weights.insert(RegionId::Root(color), rational::half() - others);
    }
    let weighted = WeightedMeander { meander, weights };
    let report = validate_weights(&weighted);
    if !report.valid {
        return Err(Error::InvalidWeights(report.summary()));
    }
    let max_adjustment = areas
        .iter()
        .map(|(id, a)| (rational::to_f64(&weighted.weights[id]) - a).abs())
        .fold(0.0, f64::max);
    Ok(ArrangementWeights { weighted, areas, area_sum, max_adjustment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rotated_diameter, RotationParams};
    use crate::regiongraph::{build_graph, tree_view};

    fn weights_for(t: f64) -> ArrangementWeights {
        arrangement_weights(&rotated_diameter(&RotationParams::new(t)).unwrap()).unwrap()
    }

    #[test]
    fn straight_diameter_is_rejected() {
        let c = rotated_diameter(&RotationParams::new(0.0)).unwrap();
        assert!(matches!(arrangement_weights(&c), Err(Error::Curve(_))));
    }

    #[test]
    fn small_rotation_is_one_crossing() {
        let w = weights_for(0.4);
        assert_eq!(w.weighted.meander.n(), 1);
        assert!((w.area_sum - 1.0).abs() < 1e-4);
        // rotation preserves the halves: each lens has the same area
        let lens: Vec<f64> = w.areas.iter().filter(|(id, _)| !id.is_root()).map(|(_, a)| *a).collect();
        assert!((lens[0] - lens[1]).abs() < 1e-4);
        // the sector swept by angle 0.4π covers about 0.2 of the disk per side
        assert!((lens[0] - 0.2).abs() < 0.01, "{lens:?}");
    }

    #[test]
    fn spiral_has_a_deep_black_tree() {
        let w = weights_for(2.3);
        let m = &w.weighted.meander;
        assert_eq!(m.n(), 5);
        let g = build_graph(&w.weighted).unwrap();
        let black = tree_view(&g, Color::Black);
        assert!(black.height() >= 2);
        assert_eq!(black.children.values().filter(|c| c.len() > 1).count(), 0, "path");
        assert!((w.area_sum - 1.0).abs() < 1e-4);
        assert!(w.max_adjustment < 1e-4);
    }

    #[test]
    fn halves_sum_exactly() {
        for t in [0.7, 1.5, 3.001, 6.4, 10.2] {
            let w = weights_for(t);
            assert!(validate_weights(&w.weighted).valid);
            assert_eq!(w.weighted.total(), rational::one());
            assert!((w.area_sum - 1.0).abs() < 1e-4, "t = {t}: {}", w.area_sum);
            assert!(w.max_adjustment < 1e-4, "t = {t}: {}", w.max_adjustment);
        }
    }
}
