//! Linear fields lie in every coupled space. The discrete solutions reproduce
//! them to round-off when the geometry maps are affine. On curved or
//! perturbed patches the stiffness integrands are rational and the coupling
//! uses the parametric measure on the interface, so there the error only has
//! to vanish under refinement.

use bezier_mortar::bench::geometry::{annulus_two_patch, plate_three_patch, plate_two_patch, square_two_patch};
use bezier_mortar::fem::{
    apply_dirichlet, assemble_elasticity, assemble_poisson, condense, dirichlet_projection, expand_components,
    l2_error, linear_solve, to_reduced, AssembledSystem, Constraints, LinearElastic,
};
use bezier_mortar::geometry::{MultiPatch, PatchSide, Point, Side};
use bezier_mortar::mesh::ExtractedMesh;
use bezier_mortar::mortar::DofRole;
use bezier_mortar::mortar::{Discretization, MortarOptions};
use bezier_mortar::weak::build_weak_mesh;

const MATERIAL: LinearElastic = LinearElastic { youngs_modulus: 200.0, poisson_ratio: 0.25, plane_strain: true };

fn boundary_sides(model: &MultiPatch) -> Vec<PatchSide> {
    let coupled: Vec<PatchSide> = model.interfaces.iter().flat_map(|i| [i.master, i.slave]).collect();
    (0..model.patches.len())
        .flat_map(|patch| Side::ALL.map(|side| PatchSide { patch, side }))
        .filter(|s| !coupled.contains(s))
        .collect()
}

fn constraints(disc: &Discretization, exact: &(dyn Fn(Point) -> Vec<f64> + Sync), ncomp: usize) -> Constraints {
    let mut c = Constraints::new();
    for side in boundary_sides(&disc.model) {
        for comp in 0..ncomp {
            c.extend(&dirichlet_projection(disc, side, comp, ncomp, |x| exact(x)[comp]).unwrap()).unwrap();
        }
    }
    to_reduced(disc, &c, ncomp).unwrap()
}

/// Largest `L2` error of the mortar and weak solutions.
fn patch_test(model: &MultiPatch, n: usize, ncomp: usize, exact: &(dyn Fn(Point) -> Vec<f64> + Sync)) -> f64 {
    let disc = Discretization::new(model, MortarOptions::with_refinement(n)).unwrap();
    let assemble = |mesh: &ExtractedMesh| -> AssembledSystem {
        if ncomp == 1 {
            assemble_poisson(mesh, |_| 0.0).unwrap()
        } else {
            assemble_elasticity(mesh, &MATERIAL, |_| [0.0, 0.0]).unwrap()
        }
    };
    let fixed = constraints(&disc, exact, ncomp);
    let t = expand_components(&disc.prolongation, ncomp);

    let condensed = condense(&assemble(&disc.mesh), &t).unwrap();
    let reduced = linear_solve(&apply_dirichlet(&condensed, &fixed).unwrap()).unwrap();
    let mortar = l2_error(&disc.mesh, &t.mul_vec(&reduced), ncomp, exact).unwrap().0;

    let weak_mesh = build_weak_mesh(&disc).unwrap();
    let coeffs = linear_solve(&apply_dirichlet(&assemble(&weak_mesh), &fixed).unwrap()).unwrap();
    let weak = l2_error(&weak_mesh, &coeffs, ncomp, exact).unwrap().0;
    mortar.max(weak)
}

fn scalar_field(x: Point) -> Vec<f64> {
    vec![1.0 + 2.0 * x[0] - 3.0 * x[1]]
}

fn vector_field(x: Point) -> Vec<f64> {
    vec![0.1 + 0.02 * x[0] - 0.03 * x[1], -0.2 + 0.04 * x[0] + 0.01 * x[1]]
}

#[test]
fn matched_square_reproduces_linear_fields() {
    let model = square_two_patch(2, 2, 3, None).unwrap().refine_uniform(1).unwrap();
    for n in 0..=2 {
        assert!(patch_test(&model, n, 1, &scalar_field) < 1e-11);
        assert!(patch_test(&model, n, 2, &vector_field) < 1e-11);
    }
}

/// Broken coefficients of a scalar linear field: each function takes the
/// field's value at its control point, and refined interface functions take
/// it at their inserted control points.
fn broken_interpolant(disc: &Discretization, u: impl Fn(Point) -> f64) -> Vec<f64> {
    let mut c = vec![f64::NAN; disc.num_broken];
    for space in &disc.spaces {
        let patch = &disc.model.patches[space.patch];
        for (f, dof) in space.function_dofs.iter().enumerate() {
            if let Some(d) = dof {
                c[*d] = u(patch.points()[f]);
            }
        }
        if let Some(en) = &space.enrichment {
            let side = patch.side_functions(en.side);
            for (j, d) in en.dofs().enumerate() {
                let mut x = [0.0; 2];
                for (i, &f) in side.iter().enumerate() {
                    let s = en.refinement.row(i)[j] * patch.weights()[f] / en.weights[j];
                    x[0] += s * patch.points()[f][0];
                    x[1] += s * patch.points()[f][1];
                }
                c[d] = u(x);
            }
        }
    }
    c
}

fn assert_space_contains_linear_fields(model: &MultiPatch, label: &str) {
    let u = |x: Point| scalar_field(x)[0];
    for n in 0..=2 {
        let disc = Discretization::new(model, MortarOptions::with_refinement(n)).unwrap();
        let broken = broken_interpolant(&disc, u);
        let mut reduced = vec![0.0; disc.num_reduced()];
        for (b, r) in disc.reduced_index.iter().enumerate() {
            if let Some(r) = r {
                reduced[*r] = broken[b];
            }
        }
        let expanded = disc.prolongation.mul_vec(&reduced);
        let slaves = disc.roles.iter().filter(|r| **r == DofRole::SlaveInterface).count();
        assert!(slaves > 0, "{label}: no slave DOFs");
        for (b, (got, want)) in expanded.iter().zip(&broken).enumerate() {
            assert!((got - want).abs() <= 1e-11 * (1.0 + want.abs()), "{label}, n {n}, dof {b}: {got} vs {want}");
        }
    }
}

#[test]
fn coupled_spaces_contain_linear_fields() {
    assert_space_contains_linear_fields(&square_two_patch(2, 2, 3, None).unwrap(), "matched square");
    assert_space_contains_linear_fields(&square_two_patch(3, 3, 2, Some(1)).unwrap(), "mismatched square");
    assert_space_contains_linear_fields(&square_two_patch(2, 3, 2, Some(7)).unwrap(), "mismatched square, seed 7");
    assert_space_contains_linear_fields(&annulus_two_patch(2, 2, 3).unwrap(), "annulus");
    assert_space_contains_linear_fields(&plate_two_patch(2, 2, 3).unwrap(), "two-patch plate");
    assert_space_contains_linear_fields(&plate_three_patch(3, 2, 3).unwrap(), "three-patch plate");
}

#[test]
fn mismatched_square_error_decreases_with_dual_refinement() {
    // The perturbed interface has a non-uniform speed, so the parametric
    // coupling leaves a consistency error that richer multipliers reduce.
    let model = square_two_patch(3, 3, 2, Some(1)).unwrap();
    for (ncomp, field) in [(1, scalar_field as fn(Point) -> Vec<f64>), (2, vector_field)] {
        let errors: Vec<f64> = (0..=2).map(|n| patch_test(&model, n, ncomp, &field)).collect();
        assert!(errors.windows(2).all(|w| w[1] < 0.5 * w[0]), "{ncomp} components: {errors:?}");
        let finer = patch_test(&model.refine_uniform(1).unwrap(), 2, ncomp, &field);
        assert!(finer < errors[2], "{ncomp} components: {finer} after refinement, {} before", errors[2]);
    }
}

#[test]
fn curved_families_converge_to_linear_fields() {
    // Rational integrands are not integrated exactly, so the error is a
    // quadrature error: independent of the dual refinement and fast to decay.
    type Case = (&'static str, MultiPatch, usize, fn(Point) -> Vec<f64>);
    let cases: [Case; 2] = [
        ("annulus", annulus_two_patch(2, 2, 3).unwrap(), 1, scalar_field),
        ("two-patch plate", plate_two_patch(2, 2, 3).unwrap(), 2, vector_field),
    ];
    for (label, model, ncomp, field) in cases {
        let coarse: Vec<f64> = (0..=2).map(|n| patch_test(&model, n, ncomp, &field)).collect();
        assert!(coarse[0] < 1e-4, "{label}: {coarse:?}");
        assert!(coarse.iter().all(|e| (e - coarse[0]).abs() <= 0.05 * coarse[0]), "{label}: {coarse:?}");
        let fine = patch_test(&model.refine_uniform(1).unwrap(), 1, ncomp, &field);
        assert!(fine < 0.05 * coarse[1], "{label}: {fine} after refinement, {} before", coarse[1]);
    }
}

#[test]
fn three_patch_plate_needs_a_dual_cell_break_at_the_junction() {
    // The T-junction at 1/2 is interior to a slave cell with breakpoints at
    // thirds. Without dual refinement one multiplier spans the kink of the
    // master trace; once the cells are refined the error drops to the
    // quadrature level of the other curved families.
    let model = plate_three_patch(3, 2, 3).unwrap();
    let errors: Vec<f64> = (0..=2).map(|n| patch_test(&model, n, 2, &vector_field)).collect();
    assert!(errors[1] < 1e-3 * errors[0], "{errors:?}");
    assert!(errors[1] < 1e-7 && errors[2] < 1e-7, "{errors:?}");
    let fine = patch_test(&model.refine_uniform(1).unwrap(), 1, 2, &vector_field);
    assert!(fine < 0.05 * errors[1], "{fine} after refinement, {} before", errors[1]);
}
