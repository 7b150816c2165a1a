//! Exact reproduction of the worked two-patch example in rational arithmetic.

use bezier_mortar::linalg::Matrix;
use bezier_mortar::mortar::{coupling_matrix_affine, refined_interface_knots, AffineMap};
use bezier_mortar::projection::DualBasis;
use bezier_mortar::spline::{bernstein_transform, extraction_operators, KnotVector};
use bezier_mortar::weak::{refined_weak_interface_operator, tensor_weak_patch_operator};
use num_rational::Rational64;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn m(rows: &[&[(i64, i64)]]) -> Matrix<Rational64> {
    Matrix::from_rows(rows.iter().map(|row| row.iter().map(|&(n, d)| r(n, d)).collect()).collect()).unwrap()
}

fn kv(v: &[(i64, i64)]) -> KnotVector<Rational64> {
    KnotVector::new(v.iter().map(|&(n, d)| r(n, d)).collect(), 2).unwrap()
}

#[test]
fn worked_example_operators() {
    let slave = kv(&[(0, 1), (0, 1), (0, 1), (1, 3), (2, 3), (1, 1), (1, 1), (1, 1)]);
    let master = kv(&[(0, 1), (0, 1), (0, 1), (1, 2), (1, 1), (1, 1), (1, 1)]);
    let transverse = kv(&[(0, 1), (0, 1), (0, 1), (1, 2), (1, 1), (1, 1), (1, 1)]);

    let (refined, _) = refined_interface_knots(&slave, &master.breakpoints(), 1).unwrap();
    let dual = DualBasis::new(&refined).unwrap();
    let g = coupling_matrix_affine(&dual, &master, &AffineMap::identity(), (r(0, 1), r(1, 1))).unwrap();
    let gt_expected = m(&[
        &[(1, 1), (1, 3), (0, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (2, 3), (2, 3), (1, 3), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (1, 3), (2, 3), (2, 3), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (0, 1), (1, 3), (1, 1)],
    ]);
    assert_eq!(g.transpose(), gt_expected);

    let ge = g.select_rows(&[1, 2, 3]).select_cols(&[0, 1, 2]);
    assert_eq!(ge, m(&[&[(1, 3), (2, 3), (0, 1)], &[(0, 1), (2, 3), (1, 3)], &[(0, 1), (1, 3), (2, 3)]]));

    let c_er = extraction_operators(&refined)[1].operator.clone();
    assert_eq!(c_er, m(&[&[(1, 3), (0, 1), (0, 1)], &[(2, 3), (1, 1), (1, 2)], &[(0, 1), (0, 1), (1, 2)]]));
    let transform = bernstein_transform(2, (&r(1, 3), &r(2, 3)), (&r(1, 3), &r(1, 2))).unwrap();
    assert_eq!(transform, m(&[&[(1, 1), (0, 1), (0, 1)], &[(1, 2), (1, 2), (0, 1)], &[(1, 4), (1, 2), (1, 4)]]));
    let weak = refined_weak_interface_operator(&ge, &c_er, &transform).unwrap();
    assert_eq!(weak, m(&[&[(1, 9), (-1, 9), (1, 9)], &[(2, 3), (2, 3), (0, 1)], &[(2, 9), (4, 9), (8, 9)]]));

    let along = extraction_operators(&slave)[1].operator.clone();
    let across = extraction_operators(&transverse)[1].operator.clone();
    let full = tensor_weak_patch_operator(&across, 2, &along, &weak).unwrap();
    let half = along.scale(&r(1, 2));
    // Row blocks: [R/2, 0, 0], [R/2, R, 0], [0, 0, R̃].
    let mut blocks = Matrix::<Rational64>::zeros(9, 9);
    let place = |dst: &mut Matrix<Rational64>, bi: usize, bj: usize, src: &Matrix<Rational64>| {
        for i in 0..3 {
            for j in 0..3 {
                dst[(3 * bi + i, 3 * bj + j)] = src[(i, j)];
            }
        }
    };
    place(&mut blocks, 0, 0, &half);
    place(&mut blocks, 1, 0, &half);
    place(&mut blocks, 1, 1, &along);
    place(&mut blocks, 2, 2, &weak);
    assert_eq!(full, blocks);
}
