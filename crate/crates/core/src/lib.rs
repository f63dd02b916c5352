//! Certified bounds on the Hofer distance between diameters of the unit disk.
//!
//! Upper bounds come from the combinatorics of a diameter transverse to the
//! standard diameter `L₀`: the crossing pattern is a [`Meander`], its
//! complementary regions form a [`RegionGraph`] made of two rooted trees, and
//! the leaf-deletion algorithm in [`transferplan`] produces a [`Plan`] whose
//! exact rational cost is at most `n/8 + 1`.
//!
//! Lower bounds come from the Calabi quasimorphisms `Cal_A` of autonomous
//! Hamiltonians, evaluated through measure-decorated contour trees in
//! [`reeb`]. The [`geometry`] module connects the two by sampling rotation
//! flows, counting crossings and turning embedded polylines into weighted
//! meanders.

pub mod error;
pub mod geometry;
pub mod meander;
pub mod rational;
pub mod reeb;
pub mod regiongraph;
pub mod suite;
pub mod transferplan;

pub use error::{Error, Result};
pub use meander::{
    canonical_key, enumerate_meanders, extract_regions, reduce_leaf, sample_weights,
    symmetric_weights, validate_meander, validate_weights, Color, Meander, RegionId,
    RegionSet, Side, ValidationReport, WeightedMeander,
};
pub use rational::Rational;
pub use regiongraph::{build_graph, delete_leaf_surgery, tree_view, RegionGraph, RootedTree};
pub use transferplan::{
    bound_certificate, closed_form_cost, execute_plan, make_plan, FinalPushRule, Move, Plan,
};
