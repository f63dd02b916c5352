use std::sync::Arc;

use super::*;
use crate::rational::ratio;

fn disk(rings: usize) -> Arc<TriangulatedDisk> {
    Arc::new(TriangulatedDisk::ring_disk(rings).unwrap())
}

fn bumps(mesh: Arc<TriangulatedDisk>, centers: &[[f64; 2]], radius: f64) -> ScalarField {
    let values = mesh
        .vertices
        .iter()
        .map(|p| {
            centers
                .iter()
                .map(|c| (1.0 - ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)) / (radius * radius)).max(0.0))
                .sum()
        })
        .collect();
    ScalarField::new(mesh, values).unwrap()
}

#[test]
fn radial_oracle_values() {
    let r = radial_quasimorphism(&RadialProfile::Parabola, 0.6).unwrap();
    assert!((r.r_a_rate + 0.24).abs() < 1e-15);
    assert!((r.cal_rate - 0.25).abs() < 1e-15);
    assert_eq!(r.cal_a_rate, r.cal_rate + r.r_a_rate);
    let half = radial_quasimorphism(&RadialProfile::Parabola, 0.5).unwrap();
    assert!((half.lower_bound_rate - 0.125).abs() < 1e-15);
    let eps = RadialProfile::h_eps(0.05).unwrap();
    for a in [0.5, 0.75, 0.95] {
        let r = radial_quasimorphism(&eps, a).unwrap();
        assert!((r.r_a_rate - a * (a - 1.0)).abs() < 1e-14, "A = {a}");
    }
    // the taper trims ∫(P − (1−r²)/2)·2r dr = −2.5911458e-5 (independent quadrature)
    let cal = radial_quasimorphism(&eps, 0.5).unwrap().cal_rate;
    assert!((cal - (0.25 - 2.591_145_833_333_3e-5)).abs() < 1e-12, "{cal}");
}

#[test]
fn radial_oracle_rejects_bad_profiles() {
    let bump = RadialProfile::Custom { name: "ring".into(), f: Arc::new(|r: f64| r * (1.0 - r)), breaks: vec![] };
    assert!(matches!(radial_quasimorphism(&bump, 0.5), Err(Error::Profile(_))));
    let lifted = RadialProfile::Custom { name: "lifted".into(), f: Arc::new(|r: f64| 1.0 - r * r / 2.0), breaks: vec![] };
    assert!(matches!(radial_quasimorphism(&lifted, 0.5), Err(Error::Profile(_))));
    assert!(radial_quasimorphism(&RadialProfile::Parabola, 1.0).is_err());
    assert!(radial_quasimorphism(&RadialProfile::Parabola, 0.4).is_err());
}

#[test]
fn radial_field_is_a_path() {
    let f = ScalarField::from_radial(disk(30), &RadialProfile::h_eps(0.05).unwrap());
    let tree = build_contour_tree(&f).unwrap();
    assert_eq!(tree.arcs.len(), 1);
    assert_eq!(tree.leaves().len(), 1);
    assert_eq!(tree.nodes[tree.arcs[0].child].kind, NodeKind::Maximum);
    assert!((tree.total_measure() - f.mesh.total_measure()).abs() < 1e-12);
    // everything but the flat boundary collar sits on the arc
    assert!((tree.away_measure(0, 1e-9) - 1.0).abs() < 2e-3);
}

#[test]
fn two_bumps_branch_at_the_root() {
    let f = bumps(disk(40), &[[-0.5, 0.0], [0.5, 0.0]], 0.3);
    let tree = build_contour_tree(&f).unwrap();
    let leaves = tree.leaves();
    assert_eq!(leaves.len(), 2);
    assert!(leaves.iter().all(|&l| tree.nodes[l].kind == NodeKind::Maximum));
    assert_eq!(tree.children[tree.root].len(), 2);
    for &arc in &tree.children[tree.root] {
        // each bump covers a disk of radius 0.3 (measure 0.09), widened by
        // the triangles straddling its rim
        let m = tree.arcs[arc].mass + tree.subtree[tree.arcs[arc].child];
        assert!(m > 0.09 && m < 0.11, "{m}");
    }
    assert!((tree.total_measure() - f.mesh.total_measure()).abs() < 1e-12);
}

#[test]
fn nested_bumps_make_a_saddle() {
    // two peaks on a ridge: root -> saddle -> two maxima
    let mesh = disk(48);
    let values = mesh
        .vertices
        .iter()
        .map(|p| {
            let to_segment = (p[0].abs() - 0.3).max(0.0).hypot(p[1]);
            let plateau = (0.6 - to_segment).max(0.0);
            let peak = |cx: f64| (0.35 - (p[0] - cx).hypot(p[1])).max(0.0) * 3.0;
            plateau + peak(-0.3) + peak(0.3)
        })
        .collect();
    let f = ScalarField::new(mesh, values).unwrap();
    let tree = build_contour_tree(&f).unwrap();
    assert_eq!(tree.leaves().len(), 2);
    assert_eq!(tree.nodes.iter().filter(|n| n.kind == NodeKind::Saddle).count(), 1);
    assert!((tree.total_measure() - f.mesh.total_measure()).abs() < 1e-12);
    for arc in 0..tree.arcs.len() {
        let prof = tree.profile(arc, 64);
        assert!(prof.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-15), "arc {arc}");
    }
}

#[test]
fn small_support_stays_at_the_root() {
    let f = bumps(disk(40), &[[0.1, 0.2]], 0.3);
    for a in [0.5, 0.7, 0.99] {
        let r = quasimorphism_rate(&f, a).unwrap();
        assert!(r.root_fallback);
        assert_eq!(r.x_level, 0.0);
        assert_eq!(r.r_a_rate, 0.0);
        assert_eq!(r.cal_a_rate, r.cal_rate);
    }
    let zero = ScalarField::zero(disk(10));
    let r = quasimorphism_rate(&zero, 0.6).unwrap();
    assert_eq!((r.cal_rate, r.r_a_rate), (0.0, 0.0));
}

#[test]
fn mesh_rate_matches_formula() {
    let f = ScalarField::from_radial(disk(60), &RadialProfile::h_eps(0.05).unwrap());
    let results = quasimorphism_rates(&f, &[0.5, 0.75]).unwrap();
    assert!((results[0].x_level - 0.25).abs() < 1e-3);
    assert!((results[0].r_a_rate + 0.25).abs() < 1e-3);
    assert!((results[1].r_a_rate + 3.0 / 16.0).abs() < 1e-3);
    assert!(results.iter().all(|r| !r.root_fallback));
    // A close to 1 pushes x toward the boundary level
    let near_one = quasimorphism_rate(&f, 0.999).unwrap();
    assert!(near_one.x_level > 0.0 && near_one.x_level < 1e-3);
}

#[test]
fn time_scaling_is_linear() {
    let f = ScalarField::from_radial(disk(24), &RadialProfile::h_eps(0.05).unwrap());
    let base = quasimorphism_rate(&f, 0.6).unwrap();
    for t in [2.0, 4.0, 0.5] {
        let s = quasimorphism_rate(&f.scaled(t), 0.6).unwrap();
        assert!((s.cal_rate - t * base.cal_rate).abs() < 1e-12);
        assert!((s.r_a_rate - t * base.r_a_rate).abs() < 1e-12);
    }
}

#[test]
fn unsupported_field_is_rejected() {
    let mesh = disk(4);
    let f = ScalarField::new(mesh.clone(), vec![1.0; mesh.vertices.len()]).unwrap();
    assert!(build_contour_tree(&f).is_err());
}

#[test]
fn k_lower_values() {
    assert_eq!(k_lower_exact(&ratio(1, 2)).unwrap(), ratio(1, 16));
    assert_eq!(k_lower_exact(&ratio(3, 4)).unwrap(), ratio(3, 80));
    assert!((k_lower(0.75).unwrap() - 3.0 / 80.0).abs() < 1e-15);
    assert!(k_lower(1.0).is_err());
    let grid = a_grid(50);
    assert_eq!(grid.len(), 50);
    assert_eq!(grid[49], ratio(99, 100));
    assert_eq!(maximize_k_lower(&grid).unwrap(), (ratio(1, 2), ratio(1, 16)));
    assert!(maximize_k_lower(&[]).is_err());
}

#[test]
fn dot_lists_every_node() {
    let f = bumps(disk(12), &[[-0.5, 0.0], [0.5, 0.0]], 0.3);
    let tree = build_contour_tree(&f).unwrap();
    let dot = tree.to_dot();
    assert!(dot.starts_with("graph contour {"));
    assert_eq!(dot.matches(" -- ").count(), tree.arcs.len());
}
