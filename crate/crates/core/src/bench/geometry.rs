//! Multi-patch geometries of the benchmark problems.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{elevate_bezier_patch, Interface, MultiPatch, Patch, PatchSide, Point, Side};

/// Homogeneous control point.
fn hom(p: Point, w: f64) -> [f64; 3] {
    [p[0] * w, p[1] * w, w]
}

/// Patch ruled between two rational quadratic rows (`ξ1` along the rows,
/// `ξ2` from `inner` to `outer`), elevated to degree `p` and split into
/// `elems` elements per direction.
fn ruled_patch(inner: [[f64; 3]; 3], outer: [[f64; 3]; 3], p: usize, elems: [usize; 2]) -> Result<Patch> {
    if p < 2 {
        return Err(Error::InvalidConfig("curved geometries need degree at least 2".into()));
    }
    let net: Vec<[f64; 3]> = inner.iter().chain(outer.iter()).copied().collect();
    let patch = elevate_bezier_patch([2, 1], &net, [p, p])?;
    patch.subdivide(0, elems[0])?.subdivide(1, elems[1])
}

/// Rational quadratic arc of radius `r` between angles `a` and `b` (< π).
fn arc(r: f64, a: f64, b: f64) -> [[f64; 3]; 3] {
    let half = 0.5 * (b - a);
    let w = half.cos();
    let m = 0.5 * (a + b);
    [
        hom([r * a.cos(), r * a.sin()], 1.0),
        hom([r / w * m.cos(), r / w * m.sin()], w),
        hom([r * b.cos(), r * b.sin()], 1.0),
    ]
}

/// Straight segment as a rational quadratic with weights `(1, w, 1)`.
fn line(a: Point, b: Point, w: f64) -> [[f64; 3]; 3] {
    [hom(a, 1.0), hom([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])], w), hom(b, 1.0)]
}

fn rect(x: [f64; 2], y: [f64; 2], p: usize, elems: [usize; 2]) -> Result<Patch> {
    let net = [hom([x[0], y[0]], 1.0), hom([x[1], y[0]], 1.0), hom([x[0], y[1]], 1.0), hom([x[1], y[1]], 1.0)];
    let patch = elevate_bezier_patch([1, 1], &net, [p, p])?;
    patch.subdivide(0, elems[0])?.subdivide(1, elems[1])
}

/// Unit square split at `x = 1/2`: master `[0, 1/2] × [0, 1]` with
/// `master_elems` elements per direction and slave `[1/2, 1] × [0, 1]` with
/// `slave_elems`.
///
/// With `perturb_seed`, the interior control points on both interface sides
/// are shifted along the interface by ±10 % of the element size (signs drawn
/// from the seed), which makes the parameterizations of the two sides
/// incompatible while keeping the interface straight.
pub fn square_two_patch(
    p: usize,
    master_elems: usize,
    slave_elems: usize,
    perturb_seed: Option<u64>,
) -> Result<MultiPatch> {
    let mut master = rect([0.0, 0.5], [0.0, 1.0], p, [master_elems, master_elems])?;
    let mut slave = rect([0.5, 1.0], [0.0, 1.0], p, [slave_elems, slave_elems])?;
    if let Some(seed) = perturb_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (patch, side, elems) in [(&mut master, Side::Xi1, master_elems), (&mut slave, Side::Xi0, slave_elems)] {
            let f = patch.side_functions(side);
            let h = 1.0 / elems as f64;
            let n = f.len();
            for &k in &f[1..n - 1] {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                patch.points_mut()[k][1] += sign * 0.1 * h;
            }
        }
    }
    MultiPatch::new(
        vec![master, slave],
        vec![Interface {
            master: PatchSide { patch: 0, side: Side::Xi1 },
            slave: PatchSide { patch: 1, side: Side::Xi0 },
            reversed: false,
            slave_range: None,
        }],
    )
}

/// Single patch `[0, 1]²` with `elems` elements per direction.
pub fn unit_square(p: usize, elems: [usize; 2]) -> Result<Patch> {
    rect([0.0, 1.0], [0.0, 1.0], p, elems)
}

/// Inner and outer radius of the annulus.
pub const ANNULUS_RADII: (f64, f64) = (0.4, 4.0);

/// Quarter annulus `0.4 <= r <= 4`, `π/2 <= θ <= π`, split along `θ = 3π/4`.
/// Patch 0 (`θ ∈ [3π/4, π]`) is the master, patch 1 the slave. `ξ1` runs in
/// the angular and `ξ2` in the radial direction.
pub fn annulus_two_patch(p: usize, master_elems: usize, slave_elems: usize) -> Result<MultiPatch> {
    let (ri, ro) = ANNULUS_RADII;
    let a = ruled_patch(arc(ri, PI, 3.0 * FRAC_PI_4), arc(ro, PI, 3.0 * FRAC_PI_4), p, [master_elems; 2])?;
    let b = ruled_patch(arc(ri, 3.0 * FRAC_PI_4, FRAC_PI_2), arc(ro, 3.0 * FRAC_PI_4, FRAC_PI_2), p, [slave_elems; 2])?;
    MultiPatch::new(
        vec![a, b],
        vec![Interface {
            master: PatchSide { patch: 0, side: Side::Xi1 },
            slave: PatchSide { patch: 1, side: Side::Xi0 },
            reversed: false,
            slave_range: None,
        }],
    )
}

/// Hole radius and half width of the plate.
pub const PLATE_DIMENSIONS: (f64, f64) = (1.0, 4.0);

/// Two rows of three homogeneous control points.
type RowPair = [[[f64; 3]; 3]; 2];

fn plate_rows() -> (RowPair, RowPair) {
    let (r, l) = PLATE_DIMENSIONS;
    let w = (PI / 8.0).cos();
    let lower = [arc(r, PI, 3.0 * FRAC_PI_4), line([-l, 0.0], [-l, l], w)];
    let upper = [arc(r, 3.0 * FRAC_PI_4, FRAC_PI_2), line([-l, l], [0.0, l], w)];
    (lower, upper)
}

/// Quarter of a plate with a circular hole, `x ∈ [-L, 0]`, `y ∈ [0, L]`,
/// split along the diagonal from the hole to the corner `(-L, L)`.
///
/// Patch 0 (below the diagonal) is the master, patch 1 the slave. Sides:
/// `Eta0` is the hole, `Eta1` the outer boundary, patch 0 `Xi0` lies on
/// `y = 0` and patch 1 `Xi1` on `x = 0`.
pub fn plate_two_patch(p: usize, master_elems: usize, slave_elems: usize) -> Result<MultiPatch> {
    let (lower, upper) = plate_rows();
    let a = ruled_patch(lower[0], lower[1], p, [master_elems; 2])?;
    let b = ruled_patch(upper[0], upper[1], p, [slave_elems; 2])?;
    MultiPatch::new(
        vec![a, b],
        vec![Interface {
            master: PatchSide { patch: 0, side: Side::Xi1 },
            slave: PatchSide { patch: 1, side: Side::Xi0 },
            reversed: false,
            slave_range: None,
        }],
    )
}

/// Three-patch variant: the part above the diagonal is split once more along
/// the curve halfway between hole and outer boundary, so the two interface
/// curves meet at an interior point of the diagonal.
///
/// Patch 0 (below the diagonal) is a slave of both upper patches; patch 1
/// (upper, next to the hole) is a master on both of its interfaces; patch 2
/// (upper, outer) is a master towards patch 0 and a slave towards patch 1.
pub fn plate_three_patch(p: usize, master_elems: usize, slave_elems: usize) -> Result<MultiPatch> {
    let (lower, upper) = plate_rows();
    let mid: [[f64; 3]; 3] = std::array::from_fn(|k| std::array::from_fn(|d| 0.5 * (upper[0][k][d] + upper[1][k][d])));
    let x = ruled_patch(lower[0], lower[1], p, [slave_elems; 2])?;
    let y = ruled_patch(upper[0], mid, p, [master_elems; 2])?;
    let z = ruled_patch(mid, upper[1], p, [slave_elems; 2])?;
    MultiPatch::new(
        vec![x, y, z],
        vec![
            Interface {
                master: PatchSide { patch: 1, side: Side::Xi0 },
                slave: PatchSide { patch: 0, side: Side::Xi1 },
                reversed: false,
                slave_range: Some([0.0, 0.5]),
            },
            Interface {
                master: PatchSide { patch: 2, side: Side::Xi0 },
                slave: PatchSide { patch: 0, side: Side::Xi1 },
                reversed: false,
                slave_range: Some([0.5, 1.0]),
            },
            Interface {
                master: PatchSide { patch: 1, side: Side::Eta1 },
                slave: PatchSide { patch: 2, side: Side::Eta0 },
                reversed: false,
                slave_range: None,
            },
        ],
    )
}

/// Unit square split at `x = 1/2` for the finite deformation study. The left
/// (master) patch has `n × n` elements, the right (slave) patch `n × n_right_y`.
pub fn largedef_square(p: usize, n: usize, n_right_y: usize) -> Result<MultiPatch> {
    let left = rect([0.0, 0.5], [0.0, 1.0], p, [n, n])?;
    let right = rect([0.5, 1.0], [0.0, 1.0], p, [n, n_right_y])?;
    MultiPatch::new(
        vec![left, right],
        vec![Interface {
            master: PatchSide { patch: 0, side: Side::Xi1 },
            slave: PatchSide { patch: 1, side: Side::Xi0 },
            reversed: false,
            slave_range: None,
        }],
    )
}

/// Single patch of the unit square with `2n × n` elements and a `C⁰` line at
/// `x = 1/2`, the conforming counterpart of [`largedef_square`].
pub fn largedef_conforming(p: usize, n: usize) -> Result<MultiPatch> {
    let mut patch = rect([0.0, 1.0], [0.0, 1.0], p, [1, 1])?;
    let mut xk = vec![0.5; p];
    xk.extend((1..2 * n).filter(|&k| k != n).map(|k| k as f64 / (2 * n) as f64));
    xk.sort_by(f64::total_cmp);
    patch = patch.refine(0, &xk)?;
    let yk: Vec<f64> = (1..n).map(|k| k as f64 / n as f64).collect();
    if !yk.is_empty() {
        patch = patch.refine(1, &yk)?;
    }
    MultiPatch::new(vec![patch], vec![])
}

/// The two-patch configuration of the worked example: slave `[0, 1]²` with
/// 3 × 2 quadratic elements below master `[0, 1] × [1, 2]` with 2 × 2.
pub fn worked_example() -> Result<MultiPatch> {
    let slave = rect([0.0, 1.0], [0.0, 1.0], 2, [3, 2])?;
    let master = rect([0.0, 1.0], [1.0, 2.0], 2, [2, 2])?;
    MultiPatch::new(
        vec![master, slave],
        vec![Interface {
            master: PatchSide { patch: 0, side: Side::Eta0 },
            slave: PatchSide { patch: 1, side: Side::Eta1 },
            reversed: false,
            slave_range: None,
        }],
    )
}
