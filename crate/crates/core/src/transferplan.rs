//! Leaf-deletion plans certifying `d(L₀, L) ≤ n/8 + 1`.
//!
//! The planner repeatedly takes the deepest black leaf, deletes it and moves
//! its weight to its grandparent at a cost equal to the moved weight. Once
//! the black tree is a star, a final push clears the remaining black
//! non-root weight. Costs are exact rationals; the `ε` slack of each move is
//! taken in the limit, so the certified value is the infimum of the
//! construction's cost.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meander::{canonical_key, reduce_leaf, validate_weights, Color, RegionId, WeightedMeander};
use crate::rational::{self, Rational};
use crate::regiongraph::{build_graph, delete_leaf_surgery, tree_view, RegionGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Transfer { leaf: RegionId, via: RegionId, target: RegionId, cost: Rational },
    FinalPush { cost: Rational },
}

impl Move {
    pub fn cost(&self) -> &Rational {
        match self {
            Move::Transfer { cost, .. } | Move::FinalPush { cost } => cost,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Transfer { leaf, via, target, cost } => {
                write!(f, "Transfer({leaf}->{target} via {via}, cost {})", rational::format(cost))
            }
            Move::FinalPush { cost } => write!(f, "FinalPush(cost {})", rational::format(cost)),
        }
    }
}

/// How the cost of the closing push is counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalPushRule {
    /// Sum of the black non-root weights once the black tree is a star.
    #[default]
    BlackNonRoot,
    /// Larger of the black and white non-root sums.
    MaxBothColors,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    /// Canonical key of the source meander.
    pub source: String,
    pub n: usize,
    pub rule: FinalPushRule,
    pub moves: Vec<Move>,
    pub total_cost: Rational,
    /// `n/8 + 1`.
    pub bound: Rational,
    pub certified: bool,
}

impl Plan {
    /// `COST p/q BOUND p'/q' OK`
    pub fn certificate_line(&self) -> String {
        format!(
            "COST {} BOUND {} {}",
            rational::format(&self.total_cost),
            rational::format(&self.bound),
            if self.certified { "OK" } else { "FAIL" }
        )
    }
}

pub fn theorem_bound(n: usize) -> Rational {
    rational::ratio(n as i64, 8) + rational::one()
}

/// Plan with the default final-push rule.
pub fn make_plan(wm: &WeightedMeander) -> Result<Plan> {
    make_plan_with(wm, FinalPushRule::default())
}

pub fn make_plan_with(wm: &WeightedMeander, rule: FinalPushRule) -> Result<Plan> {
    let mut g = build_graph(wm)?;
    let n = wm.meander.n();
    let mut moves = Vec::new();
    while let Some((leaf, via, target)) = deepest_black_leaf(&g) {
        let cost = g.weight(leaf).expect("leaf vertex").clone();
        g = delete_leaf_surgery(&g, leaf, target)?;
        moves.push(Move::Transfer { leaf, via, target, cost });
    }
    moves.push(Move::FinalPush { cost: final_push_cost(&g, rule) });
    let total_cost = rational::sum(moves.iter().map(Move::cost));
    let bound = theorem_bound(n);
    let certified = total_cost <= bound;
    Ok(Plan {
        source: String::from_utf8(canonical_key(&wm.meander)).expect("ascii key"),
        n,
        rule,
        moves,
        total_cost,
        bound,
        certified,
    })
}

/// Deletable black leaf chosen by the planner: deepest first, ties to the
/// smallest leftmost-edge index. Returns `(leaf, parent, grandparent)`.
pub fn deepest_black_leaf(g: &RegionGraph) -> Option<(RegionId, RegionId, RegionId)> {
    deletable_black_leaves(g).into_iter().next()
}

/// All black leaves of depth at least 2, in planner preference order.
pub fn deletable_black_leaves(g: &RegionGraph) -> Vec<(RegionId, RegionId, RegionId)> {
    let tree = tree_view(g, Color::Black);
    let mut leaves: Vec<(usize, RegionId)> = tree
        .depth
        .iter()
        .filter(|&(&v, &d)| d >= 2 && tree.is_leaf(v))
        .map(|(&v, &d)| (d, v))
        .collect();
    leaves.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    leaves
        .into_iter()
        .map(|(_, v)| (v, tree.parent[&v], tree.grandparent(v).expect("depth >= 2")))
        .collect()
}

pub fn final_push_cost(g: &RegionGraph, rule: FinalPushRule) -> Rational {
    let non_root = |c: Color| {
        rational::sum(g.vertices.iter().filter(|v| v.color == c && !v.is_root).map(|v| &v.weight))
    };
    match rule {
        FinalPushRule::BlackNonRoot => non_root(Color::Black),
        FinalPushRule::MaxBothColors => non_root(Color::Black).max(non_root(Color::White)),
    }
}

/// `Σ w(v)·⌈depth(v)/2⌉` over black non-root vertices: each unit of weight at
/// depth `d` rides `⌊d/2⌋` transfers and, for odd `d`, the final push.
pub fn closed_form_cost(g: &RegionGraph) -> Rational {
    let tree = tree_view(g, Color::Black);
    g.vertices
        .iter()
        .filter(|v| v.color == Color::Black && !v.is_root)
        .map(|v| {
            let d = tree.depth[&v.id];
            &v.weight * Rational::from_integer(BigInt::from(d.div_ceil(2)))
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub certified: bool,
    /// `bound - cost`.
    #[serde(serialize_with = "ser_rational")]
    pub margin: Rational,
    /// Whether the sharper `cost ≤ n/8 + 1/2` also holds; informational.
    pub sharp: bool,
}

pub fn bound_certificate(plan: &Plan, n: usize) -> Certificate {
    let bound = theorem_bound(n);
    let sharp_bound = rational::ratio(n as i64, 8) + rational::half();
    Certificate {
        certified: plan.total_cost <= bound,
        margin: &bound - &plan.total_cost,
        sharp: plan.total_cost <= sharp_bound,
    }
}

/// Replays a plan through [`reduce_leaf`], checking each state.
///
/// Returns the visited states; the last is [`WeightedMeander::terminal`].
pub fn execute_plan(wm: &WeightedMeander, plan: &Plan) -> Result<Vec<WeightedMeander>> {
    let fail = |index: usize, reason: String| Error::Replay { index, reason };
    if plan.source.as_bytes() != canonical_key(&wm.meander) {
        return Err(fail(0, "plan was made for a different meander".into()));
    }
    let mut states = vec![wm.clone()];
    for (index, mv) in plan.moves.iter().enumerate() {
        let state = states.last().expect("nonempty");
        match mv {
            Move::Transfer { leaf, via, target, cost } => {
                let have = state.weight(*leaf).ok_or_else(|| fail(index, format!("no region {leaf}")))?;
                if have != cost {
                    return Err(fail(index, format!("cost {} != weight {}", rational::format(cost), rational::format(have))));
                }
                let g = build_graph(state).map_err(|e| fail(index, e.to_string()))?;
                let via_ok = g.incident(*leaf).iter().any(|&(_, u)| u == *via)
                    && g.incident(*via).iter().any(|&(_, u)| u == *target);
                if !via_ok {
                    return Err(fail(index, format!("{via} is not between {leaf} and {target}")));
                }
                let next = reduce_leaf(state, *leaf, *target).map_err(|e| fail(index, e.to_string()))?;
                if next.meander.n() + 2 != state.meander.n() {
                    return Err(fail(index, "crossing count did not drop by 2".into()));
                }
                states.push(next);
            }
            Move::FinalPush { cost } => {
                if index + 1 != plan.moves.len() {
                    return Err(fail(index, "final push before the end of the plan".into()));
                }
                let g = build_graph(state).map_err(|e| fail(index, e.to_string()))?;
                if tree_view(&g, Color::Black).height() > 1 {
                    return Err(fail(index, "black tree is not a star".into()));
                }
                let expect = final_push_cost(&g, plan.rule);
                if *cost != expect {
                    return Err(fail(index, format!("push cost {} != {}", rational::format(cost), rational::format(&expect))));
                }
                states.push(WeightedMeander::terminal());
            }
        }
        let last = states.last().expect("nonempty");
        let report = validate_weights(last);
        if !report.valid {
            return Err(fail(index, report.summary()));
        }
        if last.total() != rational::one() {
            return Err(fail(index, "total weight drifted from 1".into()));
        }
    }
    if states.last() != Some(&WeightedMeander::terminal()) {
        return Err(fail(plan.moves.len(), "plan does not end at the terminal state".into()));
    }
    Ok(states)
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

/// JSON form of a plan: moves in order, rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub source: String,
    pub n: usize,
    pub rule: FinalPushRule,
    pub moves: Vec<BTreeMap<String, String>>,
    pub total_cost: String,
    pub bound: String,
    pub certified: bool,
}

impl PlanFile {
    pub fn from_plan(plan: &Plan) -> PlanFile {
        let moves = plan
            .moves
            .iter()
            .map(|mv| {
                let mut m = BTreeMap::new();
                match mv {
                    Move::Transfer { leaf, via, target, cost } => {
                        m.insert("kind".into(), "transfer".into());
                        m.insert("leaf".into(), leaf.to_string());
                        m.insert("via".into(), via.to_string());
                        m.insert("target".into(), target.to_string());
                        m.insert("cost".into(), rational::format(cost));
                    }
                    Move::FinalPush { cost } => {
                        m.insert("kind".into(), "final_push".into());
                        m.insert("cost".into(), rational::format(cost));
                    }
                }
                m
            })
            .collect();
        PlanFile {
            source: plan.source.clone(),
            n: plan.n,
            rule: plan.rule,
            moves,
            total_cost: rational::format(&plan.total_cost),
            bound: rational::format(&plan.bound),
            certified: plan.certified,
        }
    }

    pub fn to_plan(&self) -> Result<Plan> {
        let field = |m: &BTreeMap<String, String>, k: &str| {
            m.get(k).cloned().ok_or_else(|| Error::Parse(format!("move lacks {k:?}")))
        };
        let mut moves = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            let cost = rational::parse(&field(m, "cost")?)?;
            let mv = match field(m, "kind")?.as_str() {
                "transfer" => Move::Transfer {
                    leaf: field(m, "leaf")?.parse()?,
                    via: field(m, "via")?.parse()?,
                    target: field(m, "target")?.parse()?,
                    cost,
                },
                "final_push" => Move::FinalPush { cost },
                other => return Err(Error::Parse(format!("unknown move kind {other:?}"))),
            };
            moves.push(mv);
        }
        let total_cost = rational::parse(&self.total_cost)?;
        if total_cost != rational::sum(moves.iter().map(Move::cost)) {
            return Err(Error::Parse("total_cost differs from the sum of move costs".into()));
        }
        Ok(Plan {
            source: self.source.clone(),
            n: self.n,
            rule: self.rule,
            moves,
            total_cost,
            bound: rational::parse(&self.bound)?,
            certified: self.certified,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
