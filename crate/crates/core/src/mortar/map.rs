//! Compositional map between the parameters of coincident interface curves.

use crate::error::{Error, Result};
use crate::geometry::{distance, NurbsCurve, Point};

/// Settings of the Newton projection onto a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Convergence tolerance on the parameter update, relative to the domain length.
    pub tol: f64,
    pub max_iter: usize,
    /// Admissible distance between the curves, relative to the slave chord length.
    pub coincidence_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50, coincidence_tol: 1e-8 }
    }
}

/// `φ = (x^m)⁻¹ ∘ x^s` restricted to the slave parameter range it covers.
#[derive(Clone, Debug)]
pub struct InterfaceMap {
    slave: NurbsCurve,
    master: NurbsCurve,
    range: (f64, f64),
    reversed: bool,
    options: NewtonOptions,
    scale: f64,
}

impl InterfaceMap {
    pub fn new(
        slave: NurbsCurve,
        master: NurbsCurve,
        range: Option<(f64, f64)>,
        reversed: bool,
        options: NewtonOptions,
    ) -> Result<Self> {
        let range = range.unwrap_or(slave.domain());
        let (lo, hi) = slave.domain();
        if !(range.0 >= lo && range.1 <= hi && range.1 > range.0) {
            return Err(Error::InvalidInterface(format!(
                "slave range [{}, {}] is not inside [{lo}, {hi}]",
                range.0, range.1
            )));
        }
        let scale = distance(slave.eval(range.0)?, slave.eval(range.1)?).max(f64::MIN_POSITIVE);
        let map = Self { slave, master, range, reversed, options, scale };
        let (m0, m1) = map.master.domain();
        let (ma, mb) = if reversed { (m1, m0) } else { (m0, m1) };
        for (t, s) in [(range.0, ma), (range.1, mb)] {
            let gap = distance(map.slave.eval(t)?, map.master.eval(s)?);
            if gap > options.coincidence_tol * scale {
                return Err(Error::NonCoincidentInterface(format!(
                    "end points differ by {gap:e}; check the orientation flag"
                )));
            }
        }
        Ok(map)
    }

    pub fn slave(&self) -> &NurbsCurve {
        &self.slave
    }

    pub fn master(&self) -> &NurbsCurve {
        &self.master
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn reversed(&self) -> bool {
        self.reversed
    }

    /// Master parameter of the point with slave parameter `t`.
    pub fn to_master(&self, t: f64) -> Result<f64> {
        let x = self.slave.eval(t)?;
        let (m0, m1) = self.master.domain();
        if t <= self.range.0 {
            return Ok(if self.reversed { m1 } else { m0 });
        }
        if t >= self.range.1 {
            return Ok(if self.reversed { m0 } else { m1 });
        }
        project(&self.master, (m0, m1), x, &self.options, self.scale)
    }

    /// Slave parameter of the point with master parameter `s`.
    pub fn to_slave(&self, s: f64) -> Result<f64> {
        let (m0, m1) = self.master.domain();
        if s <= m0 {
            return Ok(if self.reversed { self.range.1 } else { self.range.0 });
        }
        if s >= m1 {
            return Ok(if self.reversed { self.range.0 } else { self.range.1 });
        }
        let x = self.master.eval(s)?;
        project(&self.slave, self.range, x, &self.options, self.scale)
    }
}

/// Parameter in `domain` of the closest point of `curve` to `x`, by Newton's
/// method from a chord-length initial guess.
fn project(curve: &NurbsCurve, domain: (f64, f64), x: Point, opts: &NewtonOptions, scale: f64) -> Result<f64> {
    let (lo, hi) = domain;
    let a = curve.eval(lo)?;
    let b = curve.eval(hi)?;
    let chord = [b[0] - a[0], b[1] - a[1]];
    let len2 = chord[0] * chord[0] + chord[1] * chord[1];
    let frac =
        if len2 > 0.0 { (((x[0] - a[0]) * chord[0] + (x[1] - a[1]) * chord[1]) / len2).clamp(0.0, 1.0) } else { 0.5 };
    let mut s = lo + frac * (hi - lo);
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let (c, dc) = curve.eval_with_tangent(s)?;
        let r = [c[0] - x[0], c[1] - x[1]];
        let g = dc[0] * dc[0] + dc[1] * dc[1];
        if g == 0.0 {
            return Err(Error::NonCoincidentInterface("degenerate curve tangent".into()));
        }
        let step = (r[0] * dc[0] + r[1] * dc[1]) / g;
        let next = (s - step).clamp(lo, hi);
        let moved = (next - s).abs();
        s = next;
        if moved <= opts.tol * (hi - lo) {
            converged = true;
            break;
        }
    }
    let gap = distance(curve.eval(s)?, x);
    if !converged || gap > opts.coincidence_tol * scale {
        return Err(Error::NonCoincidentInterface(format!(
            "point ({}, {}) has no preimage (distance {gap:e}, converged: {converged})",
            x[0], x[1]
        )));
    }
    Ok(s)
}
