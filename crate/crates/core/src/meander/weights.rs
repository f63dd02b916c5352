use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{extract_regions, Color, Meander, RegionId, RegionSet, Side, ValidationReport, WeightedMeander};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Checks the four half-sums (north, south, white, black) equal `1/2`
/// exactly and that every region carries positive weight.
///
/// With no crossings the lens region is alone in its (side, color) class and
/// the sums force its weight to zero; that configuration is `L₀` itself and
/// is the only weighting accepted for `n = 0`.
pub fn validate_weights(wm: &WeightedMeander) -> ValidationReport {
    let set = match extract_regions(&wm.meander) {
        Ok(set) => set,
        Err(e) => return ValidationReport::fail(e.to_string()),
    };
    let mut report = ValidationReport::ok();
    for r in &set.regions {
        if !wm.weights.contains_key(&r.id) {
            report.push(format!("missing weight for {}", r.id));
        }
    }
    for id in wm.weights.keys() {
        if set.get(*id).is_none() {
            report.push(format!("weight given for unknown region {id}"));
        }
    }
    if !report.valid {
        return report;
    }
    let degenerate = wm.meander.n() == 0;
    for (id, w) in &wm.weights {
        if w.is_negative() || (!degenerate && w.is_zero()) {
            report.push(format!("weight of {id} is {} (must be positive)", rational::format(w)));
        }
    }
    let half = rational::half();
    let sums = class_sums(&set, &wm.weights);
    for (label, total) in [
        ("north", sums.side(Side::North)),
        ("south", sums.side(Side::South)),
        ("white", sums.color(Color::White)),
        ("black", sums.color(Color::Black)),
    ] {
        if total != half {
            report.push(format!("{label} weights sum to {} (expected 1/2)", rational::format(&total)));
        }
    }
    report
}

/// Weight totals per (side, color) class.
pub(crate) struct ClassSums(BTreeMap<(Side, Color), Rational>);

impl ClassSums {
    pub(crate) fn side(&self, s: Side) -> Rational {
        self.0.iter().filter(|((side, _), _)| *side == s).map(|(_, w)| w).sum()
    }

    pub(crate) fn color(&self, c: Color) -> Rational {
        self.0.iter().filter(|((_, color), _)| *color == c).map(|(_, w)| w).sum()
    }
}

pub(crate) fn class_sums(set: &RegionSet, weights: &BTreeMap<RegionId, Rational>) -> ClassSums {
    let mut sums = BTreeMap::new();
    for r in &set.regions {
        let w = weights.get(&r.id).cloned().unwrap_or_else(rational::zero);
        *sums.entry((r.side, r.color)).or_insert_with(rational::zero) += w;
    }
    ClassSums(sums)
}

/// Seeded point strictly inside the weight polytope.
///
/// The polytope splits by (side, color) class: the north-black and
/// south-white classes share a total `s ∈ (0, 1/2)` and the two root classes
/// share `1/2 − s`. A seeded `s` and a seeded simplex point inside each class
/// give exact rationals satisfying every constraint.
pub fn sample_weights(m: &Meander, seed: u64) -> Result<WeightedMeander> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const GRID: i64 = 1000;
    let share = rational::ratio(rng.gen_range(1..GRID), 2 * GRID);
    distribute(m, share, |_| rng.gen_range(1..=GRID))
}

/// The analytic center of the class split: every class total is `1/4` and
/// each class is divided evenly.
pub fn symmetric_weights(m: &Meander) -> Result<WeightedMeander> {
    distribute(m, rational::ratio(1, 4), |_| 1)
}

fn distribute(
    m: &Meander,
    share: Rational,
    mut draw: impl FnMut(RegionId) -> i64,
) -> Result<WeightedMeander> {
    let set = extract_regions(m)?;
    if m.n() == 0 {
        let lens = set.regions.iter().find(|r| !r.is_root).expect("lens region");
        let mut weights = BTreeMap::new();
        weights.insert(RegionId::Root(Color::White), rational::half());
        weights.insert(RegionId::Root(Color::Black), rational::half());
        weights.insert(lens.id, rational::zero());
        return Ok(WeightedMeander { meander: m.clone(), weights });
    }

    let mut classes: BTreeMap<(Side, Color), Vec<(RegionId, i64)>> = BTreeMap::new();
    for r in &set.regions {
        classes.entry((r.side, r.color)).or_default().push((r.id, draw(r.id)));
    }
    let mut weights = BTreeMap::new();
    for ((side, color), members) in classes {
        let total = if (side == Side::North) == (color == Color::White) {
            rational::half() - &share
        } else {
            share.clone()
        };
        let mass: i64 = members.iter().map(|(_, k)| k).sum();
        for (id, k) in members {
            weights.insert(id, &total * rational::ratio(k, mass));
        }
    }
    let wm = WeightedMeander { meander: m.clone(), weights };
    let report = validate_weights(&wm);
    if !report.valid {
        return Err(Error::InvalidWeights(report.summary()));
    }
    Ok(wm)
}
