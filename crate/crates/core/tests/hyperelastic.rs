use bezier_mortar::bench::geometry::unit_square;
use bezier_mortar::fem::hyperelastic::{
    assemble_neo_hookean, solve_load_stepping, strain_energy, LoadStepping, NeoHookean,
};
use bezier_mortar::fem::{boundary_load, dirichlet_projection, Constraints};
use bezier_mortar::geometry::{MultiPatch, PatchSide, Side};
use bezier_mortar::mortar::{Discretization, MortarOptions};
use bezier_mortar::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(p: usize, n: usize) -> Discretization {
    let model = MultiPatch::new(vec![unit_square(p, [n, n]).unwrap()], vec![]).unwrap();
    Discretization::new(&model, MortarOptions::default()).unwrap()
}

fn rollers(disc: &Discretization) -> Constraints {
    let mut c = Constraints::new();
    c.extend(&dirichlet_projection(disc, PatchSide { patch: 0, side: Side::Eta0 }, 1, 2, |_| 0.0).unwrap()).unwrap();
    c.extend(&dirichlet_projection(disc, PatchSide { patch: 0, side: Side::Xi0 }, 0, 2, |_| 0.0).unwrap()).unwrap();
    c
}

/// Stretches `(a, b)` of the homogeneous plane-strain state with `P11 = 0`
/// and `P22 = -p`, by bisection on `a`.
fn homogeneous_stretches(m: &NeoHookean, p: f64) -> (f64, f64) {
    let (lambda, mu) = m.lame();
    let b_of = |a: f64| {
        let q = p / mu;
        0.5 * (-q + (q * q + 4.0 * a * a).sqrt())
    };
    let p11 = |a: f64| {
        let b = b_of(a);
        let j = a * b;
        0.5 * lambda * (j * j - 1.0) / a + mu * (a - 1.0 / a)
    };
    let (mut lo, mut hi) = (1.0, 10.0);
    assert!(p11(lo) < 0.0 && p11(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p11(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, b_of(lo))
}

#[test]
fn homogeneous_compression_matches_closed_form() {
    let m = NeoHookean::new(30e9, 0.48).unwrap();
    let pressure = 100e9;
    let disc = square(2, 2);
    let fixed = rollers(&disc);
    let ext = boundary_load(&disc.mesh, 2, PatchSide { patch: 0, side: Side::Eta1 }, None, |_, n| {
        vec![-pressure * n[0], -pressure * n[1]]
    })
    .unwrap();
    let sol = solve_load_stepping(&disc.mesh, &m, &ext, &fixed, &LoadStepping::default()).unwrap();
    let (a, b) = homogeneous_stretches(&m, pressure);
    let (v, _) =
        disc.mesh.eval_field(0, [1.0, 1.0], &sol.displacement.iter().step_by(2).copied().collect::<Vec<_>>()).unwrap();
    let (w, _) = disc
        .mesh
        .eval_field(0, [1.0, 1.0], &sol.displacement.iter().skip(1).step_by(2).copied().collect::<Vec<_>>())
        .unwrap();
    assert!((v - (a - 1.0)).abs() < 1e-8, "ux = {v}, expected {}", a - 1.0);
    assert!((w - (b - 1.0)).abs() < 1e-8, "uy = {w}, expected {}", b - 1.0);
}

#[test]
fn zero_load_gives_identity_deformation() {
    let m = NeoHookean::new(30e9, 0.48).unwrap();
    let disc = square(2, 2);
    let ext = vec![0.0; 2 * disc.mesh.num_dofs];
    let sol = solve_load_stepping(&disc.mesh, &m, &ext, &rollers(&disc), &LoadStepping::default()).unwrap();
    assert!(sol.displacement.iter().all(|&u| u == 0.0));
    let r = assemble_neo_hookean(&disc.mesh, &m, &sol.displacement).unwrap();
    assert!(r.rhs.iter().all(|v| v.abs() < 1e-3));
}

#[test]
fn assembled_tangent_matches_finite_differences() {
    let m = NeoHookean::new(30e9, 0.48).unwrap();
    let disc = square(2, 3);
    let n = 2 * disc.mesh.num_dofs;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u: Vec<f64> = (0..n).map(|_| rng.random_range(-0.02..0.02)).collect();
    let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let k = assemble_neo_hookean(&disc.mesh, &m, &u).unwrap();
    let h = 1e-6;
    let shift = |s: f64| u.iter().zip(&dir).map(|(a, d)| a + s * d).collect::<Vec<_>>();
    let rp = assemble_neo_hookean(&disc.mesh, &m, &shift(h)).unwrap().rhs;
    let rm = assemble_neo_hookean(&disc.mesh, &m, &shift(-h)).unwrap().rhs;
    let fd: Vec<f64> = rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
    let kd = k.matrix.mul_vec(&dir);
    let diff = fd.iter().zip(&kd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm = kd.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(diff / norm < 1e-6, "relative tangent error {}", diff / norm);
    assert!(k.matrix.asymmetry() <= 1e-12 * k.matrix.frobenius_norm());
}

#[test]
fn internal_force_is_energy_gradient() {
    let m = NeoHookean::new(1.0, 0.3).unwrap();
    let disc = square(2, 2);
    let n = 2 * disc.mesh.num_dofs;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u: Vec<f64> = (0..n).map(|_| rng.random_range(-0.05..0.05)).collect();
    let r = assemble_neo_hookean(&disc.mesh, &m, &u).unwrap().rhs;
    let h = 1e-6;
    for d in [0, 5, n / 2, n - 1] {
        let mut up = u.clone();
        let mut um = u.clone();
        up[d] += h;
        um[d] -= h;
        let fd =
            (strain_energy(&disc.mesh, &m, &up).unwrap() - strain_energy(&disc.mesh, &m, &um).unwrap()) / (2.0 * h);
        assert!((fd - r[d]).abs() < 1e-6, "dof {d}: {fd} vs {}", r[d]);
    }
}

#[test]
fn inverted_state_is_reported() {
    let m = NeoHookean::new(1.0, 0.3).unwrap();
    let disc = square(1, 1);
    // Mirror the square through its vertical centre line.
    let mut u = vec![0.0; 2 * disc.mesh.num_dofs];
    for (k, x) in disc.model.patches[0].points().iter().enumerate() {
        u[2 * k] = 1.0 - 2.0 * x[0];
    }
    let err = assemble_neo_hookean(&disc.mesh, &m, &u).unwrap_err();
    assert!(matches!(err, Error::ElementInversion { .. }));
}
