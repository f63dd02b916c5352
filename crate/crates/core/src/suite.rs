//! Batch runner for the combinatorial invariants.
//!
//! Every enumerated meander up to `max_n` is checked under `seeds` sampled
//! weightings plus the symmetric one. The report lists one entry per
//! invariant, always in the same order, with failure counts and the first
//! few failing instances.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::meander::{
    canonical_key, canonical_key_weighted, enumerate_meanders, extract_regions, sample_weights,
    symmetric_weights, validate_meander, validate_weights, Meander, MeanderFile, ParsedMeander, WeightedMeander,
};
use crate::regiongraph::{build_graph, check_graph_invariants, delete_leaf_surgery, encode};
use crate::transferplan::{
    bound_certificate, closed_form_cost, deletable_black_leaves, execute_plan, make_plan, PlanFile,
};

pub const SCHEMA: &str = "invariants/1";
/// Largest `n` the sweep accepts.
pub const MAX_N: usize = 10;
/// Canonical-encoding injectivity is always swept at least this far.
pub const INJECTIVITY_N: usize = 8;
/// Reduction/surgery commutation is swept up to this `n`.
pub const COMMUTATION_N: usize = 6;
const KEPT_FAILURES: usize = 5;

pub const CHECK_NAMES: [&str; 10] = [
    "meander-valid",
    "enumeration-unique-and-mirror-closed",
    "weights-valid",
    "graph-properties",
    "plan-within-bound",
    "plan-closed-form",
    "plan-replay",
    "reduction-surgery-commute",
    "encoding-injective",
    "file-round-trip",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub instances: usize,
    pub failures: usize,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub max_n: usize,
    pub seeds: u64,
    pub checks: Vec<CheckSummary>,
    /// Instances whose plan cost exceeds `n/8 + 1/2`; informational.
    pub sharp_bound_misses: usize,
    pub all_pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Default)]
struct Tally {
    results: Vec<(usize, usize, Vec<String>)>,
    sharp_misses: usize,
}

impl Tally {
    fn new() -> Tally {
        Tally { results: vec![(0, 0, Vec::new()); CHECK_NAMES.len()], sharp_misses: 0 }
    }

    fn record(&mut self, check: usize, ok: bool, what: impl FnOnce() -> String) {
        let slot = &mut self.results[check];
        slot.0 += 1;
        if !ok {
            slot.1 += 1;
            if slot.2.len() < KEPT_FAILURES {
                slot.2.push(what());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.results.iter_mut().zip(other.results) {
            a.0 += b.0;
            a.1 += b.1;
            for e in b.2 {
                if a.2.len() < KEPT_FAILURES {
                    a.2.push(e);
                }
            }
        }
        self.sharp_misses += other.sharp_misses;
        self
    }
}

fn label(m: &Meander) -> String {
    String::from_utf8_lossy(&canonical_key(m)).into_owned()
}

fn check_weighted(wm: &WeightedMeander, commute: bool, tally: &mut Tally) {
    let m = &wm.meander;
    let tag = || label(m);
    let report = validate_weights(wm);
    tally.record(2, report.valid, || format!("{}: {}", tag(), report.summary()));
    let g = match build_graph(wm) {
        Ok(g) => g,
        Err(e) => return tally.record(3, false, || format!("{}: {e}", tag())),
    };
    let graph = check_graph_invariants(&g);
    tally.record(3, graph.all_pass(), || format!("{}: {:?}", tag(), graph.failed()));

    match make_plan(wm) {
        Ok(plan) => {
            let cert = bound_certificate(&plan, m.n());
            tally.record(4, cert.certified, || format!("{}: {}", tag(), plan.certificate_line()));
            if !cert.sharp {
                tally.sharp_misses += 1;
            }
            let closed = closed_form_cost(&g);
            tally.record(5, closed == plan.total_cost, || format!("{}: closed form differs", tag()));
            let replay = execute_plan(wm, &plan);
            tally.record(6, replay.is_ok(), || format!("{}: {}", tag(), replay.as_ref().err().map(ToString::to_string).unwrap_or_default()));
            let text = PlanFile::from_plan(&plan).to_json();
            let back = serde_json::from_str::<PlanFile>(&text).map_err(Error::from).and_then(|f| f.to_plan());
            tally.record(9, back.as_ref().ok() == Some(&plan), || format!("{}: plan file round trip", tag()));
        }
        Err(e) => tally.record(4, false, || format!("{}: {e}", tag())),
    }

    let text = MeanderFile::from_weighted(wm).to_json();
    let same = matches!(MeanderFile::parse(&text), Ok(ParsedMeander::Weighted(back))
        if canonical_key_weighted(&back) == canonical_key_weighted(wm));
    tally.record(9, same, || format!("{}: meander file round trip", tag()));

    if commute {
        for (leaf, _, target) in deletable_black_leaves(&g) {
            let ok = match (crate::meander::reduce_leaf(wm, leaf, target), delete_leaf_surgery(&g, leaf, target)) {
                (Ok(reduced), Ok(surgered)) => build_graph(&reduced).and_then(|r| encode(&r)).ok() == encode(&surgered).ok(),
                _ => false,
            };
            tally.record(7, ok, || format!("{}: leaf {leaf} -> {target}", tag()));
        }
    }
}

fn check_meander(m: &Meander, seeds: u64, commute: bool) -> Tally {
    let mut tally = Tally::new();
    let v = validate_meander(m);
    tally.record(0, v.valid && extract_regions(m).is_ok_and(|s| s.regions.len() == m.n() + 3), || {
        format!("{}: {}", label(m), v.summary())
    });
    for seed in 0..seeds {
        match sample_weights(m, seed) {
            Ok(wm) => check_weighted(&wm, commute, &mut tally),
            Err(e) => tally.record(2, false, || format!("{} seed {seed}: {e}", label(m))),
        }
    }
    match symmetric_weights(m) {
        Ok(wm) => check_weighted(&wm, commute, &mut tally),
        Err(e) => tally.record(2, false, || format!("{} symmetric: {e}", label(m))),
    }
    tally
}

/// Runs every invariant over all meanders with `n ≤ max_n`.
pub fn invariants_suite(max_n: usize, seeds: u64) -> Result<SuiteReport> {
    if max_n > MAX_N {
        return Err(Error::CapExceeded { n: max_n, cap: MAX_N });
    }
    let mut tally = Tally::new();
    for n in 0..=max_n {
        let all = enumerate_meanders(n)?;
        let keys: BTreeSet<Vec<u8>> = all.iter().map(canonical_key).collect();
        let mirror_closed = all.iter().all(|m| keys.contains(&canonical_key(&m.mirror())));
        tally.record(1, keys.len() == all.len() && mirror_closed, || format!("n = {n}"));
        let part = all
            .par_iter()
            .map(|m| check_meander(m, seeds, n <= COMMUTATION_N))
            .reduce(Tally::new, Tally::merge);
        tally = tally.merge(part);
    }
    for n in 0..=max_n.max(INJECTIVITY_N) {
        let encodings: Vec<String> = enumerate_meanders(n)?
            .par_iter()
            .map(|m| symmetric_weights(m).and_then(|wm| build_graph(&wm)).and_then(|g| encode(&g)))
            .collect::<Result<_>>()?;
        let distinct: BTreeSet<&String> = encodings.iter().collect();
        tally.record(8, distinct.len() == encodings.len(), || {
            format!("n = {n}: {} collisions", encodings.len() - distinct.len())
        });
    }
    let checks: Vec<CheckSummary> = CHECK_NAMES
        .iter()
        .zip(tally.results)
        .map(|(&name, (instances, failures, examples))| CheckSummary { name, instances, failures, examples })
        .collect();
    let all_pass = checks.iter().all(|c| c.failures == 0);
    Ok(SuiteReport { schema: SCHEMA, max_n, seeds, checks, sharp_bound_misses: tally.sharp_misses, all_pass })
}
