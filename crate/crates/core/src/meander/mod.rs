//! Combinatorial types of diameters transverse to the standard diameter `L₀`.
//!
//! A diameter `L` leaves `L₀` at a departure point `a` (left of every
//! crossing), crosses `L₀` transversely `n` times and lands at `b` (right of
//! every crossing). Crossing positions are numbered `1..=n` from left to right
//! along `L₀`; `a` sits at position `0` and `b` at `n + 1`. The meander records
//! the side `L` takes right after `a` and the positions of the crossings in
//! the order `L` visits them.

mod io;
mod reduce;
mod regions;
mod weights;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use io::{MeanderFile, ParsedMeander};
pub use reduce::reduce_leaf;
pub use regions::{extract_regions, tree_depths, EdgeRegions, Region, RegionSet};
pub use weights::{sample_weights, symmetric_weights, validate_weights};

/// Largest crossing count [`enumerate_meanders`] accepts by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    North,
    South,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::South => Side::North,
        }
    }

    /// Side after `k` flips.
    pub fn flipped(self, k: usize) -> Side {
        if k % 2 == 0 {
            self
        } else {
            self.flip()
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::North => 'N',
            Side::South => 'S',
        }
    }

    pub fn from_letter(c: &str) -> Result<Side> {
        match c {
            "N" | "n" | "North" | "north" => Ok(Side::North),
            "S" | "s" | "South" | "south" => Ok(Side::South),
            other => Err(Error::Parse(format!("unknown side {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Black => 'B',
            Color::White => 'W',
        }
    }

    /// Side of the root region of this color: the white root touches the
    /// northern boundary arc, the black root the southern one.
    pub fn root_side(self) -> Side {
        match self {
            Color::White => Side::North,
            Color::Black => Side::South,
        }
    }
}

/// Canonical name of a complementary region.
///
/// Non-root regions are named by their leftmost incident `L₀` segment and
/// their side; the two boundary regions are aliased by color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    Root(Color),
    Cell { edge: usize, side: Side },
}

impl RegionId {
    pub fn cell(edge: usize, side: Side) -> RegionId {
        RegionId::Cell { edge, side }
    }

    pub fn is_root(self) -> bool {
        matches!(self, RegionId::Root(_))
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::Root(c) => write!(f, "root{}", c.letter()),
            RegionId::Cell { edge, side } => write!(f, "e{}{}", edge, side.letter()),
        }
    }
}

impl FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<RegionId> {
        let bad = || Error::Parse(format!("bad region id {s:?}"));
        match s {
            "rootB" => return Ok(RegionId::Root(Color::Black)),
            "rootW" => return Ok(RegionId::Root(Color::White)),
            _ => {}
        }
        let body = s.strip_prefix('e').ok_or_else(bad)?;
        if body.len() < 2 {
            return Err(bad());
        }
        let (digits, side) = body.split_at(body.len() - 1);
        let edge = digits.parse().map_err(|_| bad())?;
        Ok(RegionId::cell(edge, Side::from_letter(side)?))
    }
}

/// Crossing pattern of a diameter with `L₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Meander {
    pub start_side: Side,
    /// `L₀`-positions (1-based, left to right) of the crossings in visit order.
    pub order: Vec<usize>,
}

/// One arc of `L` between consecutive points on `L₀`, with endpoints given
/// as positions (`0` for `a`, `n + 1` for `b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    /// Index along `L`: arc `i` runs from the `i`-th to the `(i+1)`-th point.
    pub index: usize,
    pub side: Side,
    pub from: usize,
    pub to: usize,
}

impl Arc {
    pub fn left(&self) -> usize {
        self.from.min(self.to)
    }

    pub fn right(&self) -> usize {
        self.from.max(self.to)
    }

    /// True if the arc covers the `L₀` segment `[k, k+1]`.
    pub fn covers_edge(&self, k: usize) -> bool {
        self.left() <= k && k < self.right()
    }

    pub fn interleaves(&self, other: &Arc) -> bool {
        let (l1, r1) = (self.left(), self.right());
        let (l2, r2) = (other.left(), other.right());
        (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1)
    }
}

impl Meander {
    pub fn new(start_side: Side, order: Vec<usize>) -> Result<Meander> {
        let m = Meander { start_side, order };
        let report = validate_meander(&m);
        if report.valid {
            Ok(m)
        } else {
            Err(Error::InvalidMeander(report.summary()))
        }
    }

    /// The crossing-free meander (the curve leaves `L₀` and comes straight back).
    pub fn trivial(start_side: Side) -> Meander {
        Meander { start_side, order: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Points of `L` on `L₀` in visit order, as positions.
    pub fn points(&self) -> Vec<usize> {
        let n = self.n();
        let mut pts = Vec::with_capacity(n + 2);
        pts.push(0);
        pts.extend_from_slice(&self.order);
        pts.push(n + 1);
        pts
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.points()
            .windows(2)
            .enumerate()
            .map(|(i, w)| Arc { index: i, side: self.start_side.flipped(i), from: w[0], to: w[1] })
            .collect()
    }

    pub fn end_side(&self) -> Side {
        self.start_side.flipped(self.n())
    }

    /// Reflection through the vertical axis, traversed from the left again.
    pub fn mirror(&self) -> Meander {
        let n = self.n();
        Meander {
            start_side: self.end_side(),
            order: self.order.iter().rev().map(|&p| n + 1 - p).collect(),
        }
    }

    pub(crate) fn position_label(&self, p: usize) -> String {
        if p == 0 {
            "a".into()
        } else if p == self.n() + 1 {
            "b".into()
        } else {
            p.to_string()
        }
    }
}

impl fmt::Display for Meander {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order: Vec<String> = self.order.iter().map(|p| p.to_string()).collect();
        write!(f, "{}[{}]", self.start_side.letter(), order.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn ok() -> ValidationReport {
        ValidationReport { valid: true, violations: Vec::new() }
    }

    pub fn fail(msg: impl Into<String>) -> ValidationReport {
        ValidationReport { valid: false, violations: vec![msg.into()] }
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.valid = false;
        self.violations.push(msg.into());
    }

    pub fn summary(&self) -> String {
        if self.valid {
            "valid".into()
        } else {
            self.violations.join("; ")
        }
    }
}

/// Checks that `order` is a permutation and that the arcs on each side of
/// `L₀` are pairwise non-crossing.
///
/// Endpoints are swept left to right with one stack per side: an arc that
/// closes while a later-opened arc is still open interleaves with it.
pub fn validate_meander(m: &Meander) -> ValidationReport {
    let n = m.n();
    let mut seen = vec![false; n + 1];
    for &p in &m.order {
        if p == 0 || p > n {
            return ValidationReport::fail(format!("position {p} outside 1..={n}"));
        }
        if std::mem::replace(&mut seen[p], true) {
            return ValidationReport::fail(format!("position {p} visited twice"));
        }
    }

    let arcs = m.arcs();
    // endpoint events per position: arcs touching it (one per side at most)
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    for (i, arc) in arcs.iter().enumerate() {
        at[arc.from].push(i);
        at[arc.to].push(i);
    }
    let mut stacks: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (p, touching) in at.iter().enumerate() {
        for &i in touching {
            let arc = &arcs[i];
            let stack = &mut stacks[arc.side as usize];
            if arc.left() == p {
                stack.push(i);
                continue;
            }
            let top = *stack.last().expect("closing arc was opened");
            if top != i {
                let inner = &arcs[top];
                let side = match arc.side {
                    Side::North => "North",
                    Side::South => "South",
                };
                return ValidationReport::fail(format!(
                    "{side} arcs ({},{}) and ({},{}) interleave",
                    m.position_label(arc.left()),
                    m.position_label(arc.right()),
                    m.position_label(inner.left()),
                    m.position_label(inner.right()),
                ));
            }
            stack.pop();
        }
    }
    ValidationReport::ok()
}

/// All valid meanders with `n` crossings, ordered by `(start_side, order)`.
pub fn enumerate_meanders(n: usize) -> Result<Vec<Meander>> {
    enumerate_meanders_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_meanders_capped(n: usize, cap: usize) -> Result<Vec<Meander>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut out = Vec::new();
    for start in [Side::North, Side::South] {
        let mut search = Backtrack {
            n,
            start,
            order: Vec::with_capacity(n),
            used: vec![false; n + 1],
            arcs: [Vec::new(), Vec::new()],
            out: &mut out,
        };
        search.extend(0);
    }
    Ok(out)
}

struct Backtrack<'a> {
    n: usize,
    start: Side,
    order: Vec<usize>,
    used: Vec<bool>,
    /// Placed arcs per side as (left, right).
    arcs: [Vec<(usize, usize)>; 2],
    out: &'a mut Vec<Meander>,
}

impl Backtrack<'_> {
    fn fits(&self, side: Side, from: usize, to: usize) -> bool {
        let (l, r) = (from.min(to), from.max(to));
        self.arcs[side as usize]
            .iter()
            .all(|&(l2, r2)| !((l < l2 && l2 < r && r < r2) || (l2 < l && l < r2 && r2 < r)))
    }

    fn extend(&mut self, depth: usize) {
        let prev = self.order.last().copied().unwrap_or(0);
        let side = self.start.flipped(depth);
        if depth == self.n {
            if self.fits(side, prev, self.n + 1) {
                self.out.push(Meander { start_side: self.start, order: self.order.clone() });
            }
            return;
        }
        for p in 1..=self.n {
            if self.used[p] || !self.fits(side, prev, p) {
                continue;
            }
            self.used[p] = true;
            self.order.push(p);
            self.arcs[side as usize].push((prev.min(p), prev.max(p)));
            self.extend(depth + 1);
            self.arcs[side as usize].pop();
            self.order.pop();
            self.used[p] = false;
        }
    }
}

/// A meander with the normalized area of each complementary region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMeander {
    pub meander: Meander,
    pub weights: BTreeMap<RegionId, Rational>,
}

impl WeightedMeander {
    pub fn weight(&self, id: RegionId) -> Option<&Rational> {
        self.weights.get(&id)
    }

    pub fn total(&self) -> Rational {
        rational::sum(self.weights.values())
    }

    /// The state equivalent to `L₀` itself: no crossings, the lens has
    /// collapsed and each root holds half of the disk.
    pub fn terminal() -> WeightedMeander {
        let meander = Meander::trivial(Side::North);
        let mut weights = BTreeMap::new();
        weights.insert(RegionId::Root(Color::White), rational::half());
        weights.insert(RegionId::Root(Color::Black), rational::half());
        weights.insert(RegionId::cell(0, Side::North), rational::zero());
        WeightedMeander { meander, weights }
    }
}

/// Stable byte encoding: equal keys iff equal `(n, start_side, order)`.
pub fn canonical_key(m: &Meander) -> Vec<u8> {
    let order: Vec<String> = m.order.iter().map(|p| p.to_string()).collect();
    format!("meander/1;n={};s={};o={}", m.n(), m.start_side.letter(), order.join(",")).into_bytes()
}

/// Like [`canonical_key`] but also distinguishing the weight maps.
pub fn canonical_key_weighted(wm: &WeightedMeander) -> Vec<u8> {
    let mut key = canonical_key(&wm.meander);
    let weights: Vec<String> =
        wm.weights.iter().map(|(id, w)| format!("{id}={}", rational::format(w))).collect();
    key.extend_from_slice(format!(";w={}", weights.join(",")).as_bytes());
    key
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(start: Side, order: &[usize]) -> Meander {
        Meander { start_side: start, order: order.to_vec() }
    }

    /// Independent oracle: every pair of same-side arcs, checked directly.
    fn pairwise_valid(m: &Meander) -> bool {
        let n = m.n();
        let mut sorted = m.order.clone();
        sorted.sort_unstable();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return false;
        }
        let arcs = m.arcs();
        for (i, a) in arcs.iter().enumerate() {
            for b in &arcs[i + 1..] {
                if a.side == b.side && a.interleaves(b) {
                    return false;
                }
            }
        }
        true
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for slot in 0..=p.len() {
                let mut q = p.clone();
                q.insert(slot, n);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn validation_examples() {
        assert!(validate_meander(&m(Side::North, &[])).valid);
        assert!(validate_meander(&m(Side::North, &[3, 2, 1])).valid);
        let bad = validate_meander(&m(Side::North, &[2, 1]));
        assert!(!bad.valid);
        assert_eq!(bad.violations, vec!["North arcs (a,2) and (1,b) interleave".to_string()]);
    }

    #[test]
    fn validation_rejects_non_permutations() {
        assert!(!validate_meander(&m(Side::North, &[1, 1])).valid);
        assert!(!validate_meander(&m(Side::North, &[0])).valid);
        assert!(!validate_meander(&m(Side::South, &[1, 3])).valid);
    }

    #[test]
    fn stack_check_agrees_with_pairwise_oracle() {
        for n in 0..=7 {
            for order in permutations(n) {
                for start in [Side::North, Side::South] {
                    let mm = m(start, &order);
                    assert_eq!(validate_meander(&mm).valid, pairwise_valid(&mm), "{mm}");
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> =
            (0..=8).map(|n| enumerate_meanders(n).unwrap().len()).collect();
        // twice the open meandric numbers, one copy per starting side
        assert_eq!(counts, vec![2, 2, 2, 4, 6, 16, 28, 84, 162]);
        let three = enumerate_meanders(3).unwrap();
        assert_eq!(
            three,
            vec![
                m(Side::North, &[1, 2, 3]),
                m(Side::North, &[3, 2, 1]),
                m(Side::South, &[1, 2, 3]),
                m(Side::South, &[3, 2, 1]),
            ]
        );
        assert_eq!(enumerate_meanders(2).unwrap(), vec![m(Side::North, &[1, 2]), m(Side::South, &[1, 2])]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 0..=7 {
            let mut brute = Vec::new();
            for start in [Side::North, Side::South] {
                let mut perms = permutations(n);
                perms.sort();
                for order in perms {
                    let mm = m(start, &order);
                    if pairwise_valid(&mm) {
                        brute.push(mm);
                    }
                }
            }
            assert_eq!(enumerate_meanders(n).unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_meanders(11), Err(Error::CapExceeded { n: 11, cap: 10 })));
        assert_eq!(enumerate_meanders_capped(11, 11).unwrap().len(), 2 * 1828);
    }

    #[test]
    fn enumeration_is_mirror_closed_and_duplicate_free() {
        for n in 0..=8 {
            let all = enumerate_meanders(n).unwrap();
            let keys: std::collections::HashSet<Vec<u8>> = all.iter().map(canonical_key).collect();
            assert_eq!(keys.len(), all.len());
            for mm in &all {
                let mirrored = mm.mirror();
                assert!(validate_meander(&mirrored).valid);
                assert!(keys.contains(&canonical_key(&mirrored)));
                assert_eq!(mirrored.mirror(), *mm);
            }
        }
    }

    #[test]
    fn keys() {
        assert_eq!(canonical_key(&m(Side::North, &[3, 2, 1])), canonical_key(&m(Side::North, &[3, 2, 1])));
        assert_ne!(canonical_key(&m(Side::North, &[1, 2, 3])), canonical_key(&m(Side::North, &[3, 2, 1])));
        assert_eq!(
            String::from_utf8(canonical_key(&m(Side::South, &[1]))).unwrap(),
            "meander/1;n=1;s=S;o=1"
        );
        let a = symmetric_weights(&m(Side::North, &[1])).unwrap();
        let mut b = a.clone();
        let id = RegionId::cell(0, Side::North);
        *b.weights.get_mut(&id).unwrap() = rational::ratio(1, 8);
        assert_ne!(canonical_key_weighted(&a), canonical_key_weighted(&b));
        assert_eq!(canonical_key_weighted(&a), canonical_key_weighted(&a.clone()));
    }

    #[test]
    fn region_id_text() {
        for s in ["rootB", "rootW", "e0N", "e12S"] {
            assert_eq!(s.parse::<RegionId>().unwrap().to_string(), s);
        }
        for s in ["root", "e", "eN", "e3X", "x3N"] {
            assert!(s.parse::<RegionId>().is_err(), "{s}");
        }
    }
}
