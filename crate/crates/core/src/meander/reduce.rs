use std::collections::BTreeMap;

use super::{extract_regions, tree_depths, validate_weights, Meander, RegionId, WeightedMeander};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Deletes a deep leaf region by pushing its two bounding crossings off `L₀`.
///
/// The leaf's weight moves to `target` (a same-color region two tree steps
/// away). Deleting the leaf's segment fuses it with the two neighboring
/// segments, which merges the two opposite-color regions across them; all
/// other regions keep their weight.
pub fn reduce_leaf(wm: &WeightedMeander, leaf: RegionId, target: RegionId) -> Result<WeightedMeander> {
    let report = validate_weights(wm);
    if !report.valid {
        return Err(Error::InvalidWeights(report.summary()));
    }
    let m = &wm.meander;
    let set = extract_regions(m)?;
    let leaf_region = set.get(leaf).ok_or(Error::UnknownRegion(leaf))?;
    let target_region = set.get(target).ok_or(Error::UnknownRegion(target))?;
    if leaf_region.is_root {
        return Err(Error::LeafIsRoot(leaf));
    }
    if leaf_region.incident_edges.len() != 1 {
        return Err(Error::NotALeaf(leaf));
    }
    let depths = tree_depths(&set, leaf_region.color);
    let depth = depths[&leaf];
    if depth < 2 {
        return Err(Error::LeafTooShallow { leaf, depth });
    }
    let parent = set.neighbors(leaf)[0];
    if target_region.color != leaf_region.color
        || target == leaf
        || !set.neighbors(parent).contains(&target)
    {
        return Err(Error::BadTarget { leaf, target });
    }

    // the leaf sits under an arc joining positions l and l+1
    let l = leaf_region.incident_edges[0];
    let n = m.n();
    if l == 0 || l + 1 > n {
        return Err(Error::NotConsecutive(leaf));
    }
    let i = m.order.iter().position(|&p| p == l).expect("permutation");
    let j = m.order.iter().position(|&p| p == l + 1).expect("permutation");
    if i.abs_diff(j) != 1 {
        return Err(Error::NotConsecutive(leaf));
    }
    let order: Vec<usize> = m
        .order
        .iter()
        .filter(|&&p| p != l && p != l + 1)
        .map(|&p| if p > l + 1 { p - 2 } else { p })
        .collect();
    let reduced = Meander { start_side: m.start_side, order };
    let new_set = extract_regions(&reduced)?;

    // segments l-1, l, l+1 fuse into new segment l-1
    let new_edge = |k: usize| {
        if k + 1 < l {
            k
        } else if k <= l + 1 {
            l - 1
        } else {
            k - 2
        }
    };
    let image = |id: RegionId| -> Result<RegionId> {
        if id.is_root() {
            return Ok(id);
        }
        let region = set.get(id).expect("region of old set");
        let mut images = region
            .incident_edges
            .iter()
            .filter(|&&k| k != l)
            .map(|&k| new_set.edges[new_edge(k)].region_on(region.side));
        let first = images.next().ok_or(Error::NotALeaf(id))?;
        if images.any(|other| other != first) {
            return Err(Error::InvalidMeander(format!("region {id} splits under reduction")));
        }
        Ok(first)
    };

    let mut weights: BTreeMap<RegionId, Rational> =
        new_set.regions.iter().map(|r| (r.id, rational::zero())).collect();
    let target_image = image(target)?;
    for (&id, w) in &wm.weights {
        let dest = if id == leaf { target_image } else { image(id)? };
        *weights.get_mut(&dest).ok_or(Error::UnknownRegion(dest))? += w;
    }
    let out = WeightedMeander { meander: reduced, weights };
    let report = validate_weights(&out);
    if !report.valid {
        return Err(Error::InvalidWeights(report.summary()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meander::{sample_weights, Side};
    use crate::rational::ratio;

    fn id(s: &str) -> RegionId {
        s.parse().unwrap()
    }

    fn spiral_weights() -> WeightedMeander {
        let m = Meander::new(Side::North, vec![3, 2, 1]).unwrap();
        let e = ratio(1, 8);
        let q = ratio(1, 4);
        let weights = [
            ("e1N", e.clone()), // A1
            ("e0N", e.clone()), // A2
            ("rootW", q.clone()), // A3
            ("e2S", e.clone()), // B1
            ("e1S", e),         // B2
            ("rootB", q),       // B3
        ]
        .into_iter()
        .map(|(k, w)| (id(k), w))
        .collect();
        WeightedMeander { meander: m, weights }
    }

    #[test]
    fn spiral_leaf_to_root() {
        let wm = spiral_weights();
        let out = reduce_leaf(&wm, id("e2S"), id("rootB")).unwrap();
        assert_eq!(out.meander, Meander::new(Side::North, vec![1]).unwrap());
        // A1 and A3 merged into the white root, B1 absorbed by the black root
        assert_eq!(out.weights[&id("rootW")], ratio(3, 8));
        assert_eq!(out.weights[&id("rootB")], ratio(3, 8));
        assert_eq!(out.weights[&id("e0N")], ratio(1, 8));
        assert_eq!(out.weights[&id("e1S")], ratio(1, 8));
        assert_eq!(out.total(), rational::one());
    }

    #[test]
    fn precondition_errors() {
        let wm = sample_weights(&Meander::new(Side::North, vec![1]).unwrap(), 3).unwrap();
        assert!(matches!(
            reduce_leaf(&wm, id("e0N"), id("rootB")),
            Err(Error::LeafTooShallow { depth: 1, .. })
        ));
        let spiral = spiral_weights();
        assert!(matches!(reduce_leaf(&spiral, id("rootB"), id("e2S")), Err(Error::LeafIsRoot(_))));
        assert!(matches!(reduce_leaf(&spiral, id("e0N"), id("rootB")), Err(Error::NotALeaf(_))));
        assert!(matches!(reduce_leaf(&spiral, id("e2S"), id("e0N")), Err(Error::BadTarget { .. })));
        assert!(matches!(reduce_leaf(&spiral, id("e2S"), id("rootW")), Err(Error::BadTarget { .. })));
        assert!(matches!(reduce_leaf(&spiral, id("e9S"), id("rootB")), Err(Error::UnknownRegion(_))));
    }
}
