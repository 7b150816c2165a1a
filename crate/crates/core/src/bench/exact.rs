//! Closed-form solutions of the benchmark problems.

use std::f64::consts::PI;

use crate::geometry::Point;

/// Harmonic function `sin(πy) sinh(πx)` on the unit square.
pub fn square_solution(x: Point) -> f64 {
    (PI * x[1]).sin() * (PI * x[0]).sinh()
}

pub fn square_gradient(x: Point) -> [f64; 2] {
    [PI * (PI * x[1]).sin() * (PI * x[0]).cosh(), PI * (PI * x[1]).cos() * (PI * x[0]).sinh()]
}

/// `sin(πx) sin(πy)` on the annulus; its source is `2π² u`.
pub fn annulus_solution(x: Point) -> f64 {
    (PI * x[0]).sin() * (PI * x[1]).sin()
}

pub fn annulus_gradient(x: Point) -> [f64; 2] {
    [PI * (PI * x[0]).cos() * (PI * x[1]).sin(), PI * (PI * x[0]).sin() * (PI * x[1]).cos()]
}

pub fn annulus_source(x: Point) -> f64 {
    2.0 * PI * PI * annulus_solution(x)
}

/// Infinite plate with a circular hole of radius `radius` under uniaxial
/// tension `traction` along `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KirschSolution {
    pub traction: f64,
    pub radius: f64,
}

impl KirschSolution {
    /// Polar stresses `[σrr, σθθ, σrθ]`.
    pub fn polar_stress(&self, x: Point) -> [f64; 3] {
        let t = self.traction;
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let th = x[1].atan2(x[0]);
        let a2 = (self.radius / r).powi(2);
        let a4 = a2 * a2;
        let c2 = (2.0 * th).cos();
        let s2 = (2.0 * th).sin();
        let srr = 0.5 * t * (1.0 - a2) + 0.5 * t * (1.0 - 4.0 * a2 + 3.0 * a4) * c2;
        let stt = 0.5 * t * (1.0 + a2) - 0.5 * t * (1.0 + 3.0 * a4) * c2;
        let srt = -0.5 * t * (1.0 + 2.0 * a2 - 3.0 * a4) * s2;
        [srr, stt, srt]
    }

    /// Cartesian stresses `[σxx, σyy, σxy]`.
    pub fn stress(&self, x: Point) -> [f64; 3] {
        let [srr, stt, srt] = self.polar_stress(x);
        let th = x[1].atan2(x[0]);
        let (s, c) = th.sin_cos();
        [
            srr * c * c + stt * s * s - 2.0 * srt * s * c,
            srr * s * s + stt * c * c + 2.0 * srt * s * c,
            (srr - stt) * s * c + srt * (c * c - s * s),
        ]
    }

    /// Traction `σ n` on a boundary with outward normal `n`.
    pub fn traction(&self, x: Point, n: [f64; 2]) -> [f64; 2] {
        let [sxx, syy, sxy] = self.stress(x);
        [sxx * n[0] + sxy * n[1], sxy * n[0] + syy * n[1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kirsch_limits() {
        let k = KirschSolution { traction: 10.0, radius: 1.0 };
        let crown = k.stress([0.0, 1.0]);
        assert!((crown[0] - 30.0).abs() < 1e-12);
        let side = k.stress([-1.0, 0.0]);
        assert!((side[1] + 10.0).abs() < 1e-12);
        let far = k.stress([-1e4, 2e4]);
        assert!((far[0] - 10.0).abs() < 1e-6 && far[1].abs() < 1e-6 && far[2].abs() < 1e-6);
        let hole = k.polar_stress([-0.6, 0.8]);
        assert!(hole[0].abs() < 1e-12 && hole[2].abs() < 1e-12);
    }

    #[test]
    fn square_solution_is_harmonic() {
        let h = 1e-4;
        let x = [0.3, 0.7];
        let lap = (square_solution([x[0] + h, x[1]])
            + square_solution([x[0] - h, x[1]])
            + square_solution([x[0], x[1] + h])
            + square_solution([x[0], x[1] - h])
            - 4.0 * square_solution(x))
            / (h * h);
        assert!(lap.abs() < 1e-5);
    }
}
