//! Jump of a broken field across the mortar interfaces.

use crate::error::{Error, Result};
use crate::fem::assembly::field_at;
use crate::geometry::{distance, Side};
use crate::mesh::ExtractedMesh;
use crate::quadrature::GaussRule;

use super::discretization::Discretization;

fn side_point(domain: [[f64; 2]; 2], side: Side, t: f64) -> [f64; 2] {
    let mut xi = [0.0; 2];
    let n = side.normal_dir();
    xi[n] = if side.is_upper() { domain[n][1] } else { domain[n][0] };
    xi[side.tangent_dir()] = t;
    xi
}

fn eval(mesh: &ExtractedMesh, patch: usize, xi: [f64; 2], coeffs: &[f64], ncomp: usize) -> Result<Vec<f64>> {
    let e = mesh.locate(patch, xi).ok_or(Error::OutOfDomain { value: xi[0], lo: f64::NAN, hi: f64::NAN })?;
    let el = &mesh.elements[e];
    Ok(field_at(el, &el.eval(xi)?, coeffs, ncomp).0)
}

/// `‖u_s − u_m‖` in `L2` over all interfaces, for a field with `ncomp`
/// interleaved components per broken DOF of `disc.mesh`.
///
/// Each interface is integrated over the common refinement of the slave
/// cells and the mapped master breakpoints, with the arc length of the slave
/// curve as measure.
pub fn interface_jump(disc: &Discretization, coeffs: &[f64], ncomp: usize) -> Result<f64> {
    if coeffs.len() != disc.num_broken * ncomp {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} broken DOFs with {ncomp} components",
            coeffs.len(),
            disc.num_broken
        )));
    }
    let domains = &disc.mesh.patch_domains;
    let mut total = 0.0;
    for group in &disc.groups {
        let slave = group.slave;
        for cp in &group.couplings {
            let master = disc.model.interfaces[cp.interface].master;
            let map = &cp.map;
            let (lo, hi) = map.range();
            let mut cuts: Vec<f64> =
                group.refined_curve.knots().breakpoints().into_iter().filter(|t| *t > lo && *t < hi).collect();
            for s in map.master().knots().breakpoints() {
                cuts.push(map.to_slave(s)?);
            }
            cuts.push(lo);
            cuts.push(hi);
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
            let p = map.slave().knots().degree().max(map.master().knots().degree());
            let rule = GaussRule::new(p + 3);
            for seg in cuts.windows(2) {
                for (t, w) in rule.on_interval(seg[0], seg[1]) {
                    let s = map.to_master(t)?;
                    let us =
                        eval(&disc.mesh, slave.patch, side_point(domains[slave.patch], slave.side, t), coeffs, ncomp)?;
                    let um = eval(
                        &disc.mesh,
                        master.patch,
                        side_point(domains[master.patch], master.side, s),
                        coeffs,
                        ncomp,
                    )?;
                    let (_, tangent) = map.slave().eval_with_tangent(t)?;
                    let ds = distance(tangent, [0.0, 0.0]);
                    total += w * ds * us.iter().zip(&um).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
                }
            }
        }
    }
    Ok(total.sqrt())
}
