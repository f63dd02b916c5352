//! Calabi integrals, contour trees and the quasimorphisms `Cal_A`.
//!
//! For an autonomous compactly supported `F`, `Cal_A(φ) = Cal(φ) − 2A·F(x)`
//! where `x` is the far end of the segment of contour-tree points that cut
//! off at least measure `A` from the root. Everything is reported per unit
//! time; the quasimorphism defect only enters as an unknown additive
//! constant, so lower bounds on distances are slopes, not values.

mod contour;
mod field;
mod mesh;

pub use contour::{build_contour_tree, ContourArc, ContourNode, ContourTree, NodeKind, Piece};
pub use field::{integrate, RadialProfile, ScalarField};
pub use mesh::TriangulatedDisk;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum CutLocation {
    /// No branch reaches measure `A`; `x` is the root.
    Root,
    Node(usize),
    Arc(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutPoint {
    pub x_level: f64,
    pub location: CutLocation,
}

impl CutPoint {
    pub fn root_fallback(&self) -> bool {
        self.location == CutLocation::Root
    }
}

/// The distance lower bound `(t·|r_A| − C)/(1 + 2A)` carries an unknown
/// defect constant `C`; it is kept symbolic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DefectOffset;

impl std::fmt::Display for DefectOffset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("C")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasimorphismResult {
    pub a: f64,
    pub cal_rate: f64,
    pub x_level: f64,
    pub cal_a_rate: f64,
    pub r_a_rate: f64,
    pub lower_bound_rate: f64,
    pub defect_offset: DefectOffset,
    pub root_fallback: bool,
}

impl QuasimorphismResult {
    fn assemble(a: f64, cal_rate: f64, x_level: f64, root_fallback: bool) -> QuasimorphismResult {
        let r_a_rate = -2.0 * a * x_level;
        QuasimorphismResult {
            a,
            cal_rate,
            x_level,
            cal_a_rate: cal_rate + r_a_rate,
            r_a_rate,
            lower_bound_rate: r_a_rate.abs() / (1.0 + 2.0 * a),
            defect_offset: DefectOffset,
            root_fallback,
        }
    }
}

fn check_a(a: f64) -> Result<()> {
    if (0.5..1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("A = {a} must lie in [1/2, 1)")))
    }
}

/// Far end of the set of points cutting off measure `≥ a` from the root.
pub fn cut_point(tree: &ContourTree, a: f64) -> Result<CutPoint> {
    check_a(a)?;
    let mut node = tree.root;
    loop {
        let full = |arc: usize| tree.arcs[arc].mass + tree.subtree[tree.arcs[arc].child];
        let next = tree.children[node]
            .iter()
            .copied()
            .filter(|&arc| full(arc) >= a)
            .max_by(|&x, &y| full(x).total_cmp(&full(y)));
        let Some(arc) = next else {
            let location = if node == tree.root { CutLocation::Root } else { CutLocation::Node(node) };
            return Ok(CutPoint { x_level: tree.nodes[node].level, location });
        };
        let child = tree.arcs[arc].child;
        if tree.subtree[child] >= a {
            node = child;
            continue;
        }
        // away measure falls from ≥ a at the parent end to < a at the child end
        let (mut inside, mut outside) = (tree.nodes[node].level, tree.nodes[child].level);
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if tree.away_measure(arc, mid) >= a {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        return Ok(CutPoint { x_level: inside, location: CutLocation::Arc(arc) });
    }
}

pub fn quasimorphism_rate(f: &ScalarField, a: f64) -> Result<QuasimorphismResult> {
    check_a(a)?;
    let tree = build_contour_tree(f)?;
    quasimorphism_from_tree(&tree, integrate(f), a)
}

pub fn quasimorphism_from_tree(tree: &ContourTree, cal_rate: f64, a: f64) -> Result<QuasimorphismResult> {
    let cut = cut_point(tree, a)?;
    Ok(QuasimorphismResult::assemble(a, cal_rate, cut.x_level, cut.root_fallback()))
}

/// One contour tree, many `A` values evaluated in parallel; output follows
/// the input order.
pub fn quasimorphism_rates(f: &ScalarField, a_values: &[f64]) -> Result<Vec<QuasimorphismResult>> {
    a_values.iter().try_for_each(|&a| check_a(a))?;
    let tree = build_contour_tree(f)?;
    let cal = integrate(f);
    a_values.par_iter().map(|&a| quasimorphism_from_tree(&tree, cal, a)).collect()
}

// 5-point Gauss–Legendre on [-1, 1]
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss_legendre(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|i| {
            let (a, b) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            GL_NODES.iter().zip(GL_WEIGHTS).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
        })
        .sum()
}

/// Reference values for a radial, radially nonincreasing profile `P(r)`.
///
/// Superlevel sets are centered disks, so the cut is the circle `r² = A`
/// and `x_level = P(√A)`; `Cal = ∫₀¹ P(r)·2r dr` by Gauss–Legendre between
/// the profile's break points.
pub fn radial_quasimorphism(profile: &RadialProfile, a: f64) -> Result<QuasimorphismResult> {
    check_a(a)?;
    const CHECKS: usize = 4096;
    let mut prev = profile.value(0.0);
    for i in 1..=CHECKS {
        let v = profile.value(i as f64 / CHECKS as f64);
        if v > prev + 1e-15 {
            return Err(Error::Profile(format!("{profile:?} increases near r = {}", i as f64 / CHECKS as f64)));
        }
        prev = v;
    }
    if profile.value(1.0) != 0.0 {
        return Err(Error::Profile(format!("{profile:?} does not vanish at r = 1")));
    }
    let mut cuts = vec![0.0];
    cuts.extend(profile.breaks().into_iter().filter(|&b| b > 0.0 && b < 1.0));
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    let cal = cuts
        .windows(2)
        .map(|w| gauss_legendre(|r| profile.value(r) * 2.0 * r, w[0], w[1], 16))
        .sum();
    Ok(QuasimorphismResult::assemble(a, cal, profile.value(a.sqrt()), false))
}

/// Lower-bound coefficient per crossing, `A(1−A)/(2(1+2A))`.
pub fn k_lower(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(a * (1.0 - a) / (2.0 * (1.0 + 2.0 * a)))
}

pub fn k_lower_exact(a: &Rational) -> Result<Rational> {
    if *a < rational::half() || *a >= rational::one() {
        return Err(Error::OutOfRange(format!("A = {} must lie in [1/2, 1)", rational::format(a))));
    }
    let one = rational::one();
    Ok(a * (&one - a) / (rational::int(2) * (&one + rational::int(2) * a)))
}

/// `points` values `1/2, 1/2 + 1/(2·points), …` below 1.
pub fn a_grid(points: usize) -> Vec<Rational> {
    (0..points)
        .map(|i| rational::half() + Rational::new(BigInt::from(i), BigInt::from(2 * points)))
        .collect()
}

/// Exact maximizer of [`k_lower_exact`] over `grid`, first on ties.
pub fn maximize_k_lower(grid: &[Rational]) -> Result<(Rational, Rational)> {
    let mut best: Option<(Rational, Rational)> = None;
    for a in grid {
        let k = k_lower_exact(a)?;
        if best.as_ref().is_none_or(|(_, bk)| k > *bk) {
            best = Some((a.clone(), k));
        }
    }
    best.ok_or_else(|| Error::OutOfRange("empty grid".into()))
}

#[cfg(test)]
mod tests;
