//! Large-deformation comparison of weakly continuous and conforming meshes of
//! the unit square under a pressure dead load.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::hyperelastic::{solve_load_stepping, LoadStepping, NeoHookean};
use crate::fem::{boundary_load, dirichlet_projection, field_at, to_reduced, Constraints};
use crate::geometry::{MultiPatch, PatchSide, Side};
use crate::mesh::ExtractedMesh;
use crate::mortar::{Discretization, MortarOptions};
use crate::quadrature::GaussRule;
use crate::weak::build_weak_mesh;

use super::convergence::observed_rate;
use super::geometry::{largedef_conforming, largedef_square};

/// Material of the large-deformation study.
pub const LARGEDEF_MATERIAL: NeoHookean = NeoHookean { youngs_modulus: 30e9, poisson_ratio: 0.48 };

/// Final pressure.
pub const LARGEDEF_PRESSURE: f64 = 100e9;

/// Load case of the large-deformation study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoadCase {
    /// Pressure on the middle half of the top edge, rollers on the bottom,
    /// horizontal supports at both top corners.
    Case1,
    /// Pressure on the left half of the top edge, rollers on the bottom and
    /// the left edge, horizontal support at the top right corner.
    Case2,
    /// Horizontal pressure on the middle half of the left edge, rollers on
    /// the right edge, vertical supports at both left corners.
    Case3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edge {
    Bottom,
    Top,
    Left,
    Right,
}

struct Loading {
    /// Edges with one displacement component held at zero.
    rollers: Vec<(Edge, usize)>,
    /// Corners with one displacement component held at zero.
    supports: Vec<([f64; 2], usize)>,
    /// Loaded edge and the physical coordinate range along it.
    pressure: (Edge, [f64; 2]),
}

impl LoadCase {
    fn loading(self) -> Loading {
        match self {
            LoadCase::Case1 => Loading {
                rollers: vec![(Edge::Bottom, 1)],
                supports: vec![([0.0, 1.0], 0), ([1.0, 1.0], 0)],
                pressure: (Edge::Top, [0.25, 0.75]),
            },
            LoadCase::Case2 => Loading {
                rollers: vec![(Edge::Bottom, 1), (Edge::Left, 0)],
                supports: vec![([1.0, 1.0], 0)],
                pressure: (Edge::Top, [0.0, 0.5]),
            },
            LoadCase::Case3 => Loading {
                rollers: vec![(Edge::Right, 0)],
                supports: vec![([0.0, 0.0], 1), ([0.0, 1.0], 1)],
                pressure: (Edge::Left, [0.25, 0.75]),
            },
        }
    }
}

/// Parameters of a large-deformation study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeDefConfig {
    pub load_case: LoadCase,
    pub p: usize,
    /// Elements per direction of the left patch on level 0.
    pub base: usize,
    pub levels: usize,
    pub dual_refinement: usize,
    pub material: NeoHookean,
    pub pressure: f64,
    pub stepping: LoadStepping,
}

impl LargeDefConfig {
    pub fn new(load_case: LoadCase) -> Self {
        Self {
            load_case,
            p: 2,
            base: 2,
            levels: 3,
            dual_refinement: 1,
            material: LARGEDEF_MATERIAL,
            pressure: LARGEDEF_PRESSURE,
            stepping: LoadStepping::default(),
        }
    }

    /// Elements per direction of the left patch on `level`.
    pub fn elements(&self, level: usize) -> usize {
        self.base << level
    }

    /// Element size of the left patch on `level`.
    pub fn mesh_size(&self, level: usize) -> f64 {
        0.5 / self.elements(level) as f64
    }
}

/// Axis-aligned box `[[x0, x1], [y0, y1]]` covered by each patch.
fn patch_boxes(model: &MultiPatch) -> Vec<[[f64; 2]; 2]> {
    model
        .patches
        .iter()
        .map(|p| {
            let xs = p.points().iter().map(|q| q[0]);
            let ys = p.points().iter().map(|q| q[1]);
            [
                [xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max)],
                [ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max)],
            ]
        })
        .collect()
}

/// Patch sides lying on a square edge, with the affine map from the physical
/// coordinate along the edge to the side parameter.
fn edge_sides(boxes: &[[[f64; 2]; 2]], edge: Edge) -> Vec<(PatchSide, [f64; 2])> {
    let mut out = Vec::new();
    for (patch, b) in boxes.iter().enumerate() {
        let (side, on_edge, along) = match edge {
            Edge::Bottom => (Side::Eta0, b[1][0] == 0.0, b[0]),
            Edge::Top => (Side::Eta1, b[1][1] == 1.0, b[0]),
            Edge::Left => (Side::Xi0, b[0][0] == 0.0, b[1]),
            Edge::Right => (Side::Xi1, b[0][1] == 1.0, b[1]),
        };
        if on_edge {
            out.push((PatchSide { patch, side }, along));
        }
    }
    out
}

/// Dead-load vector, supports and the mesh the problem is posed on.
struct Problem {
    mesh: ExtractedMesh,
    external: Vec<f64>,
    fixed: Constraints,
    boxes: Vec<[[f64; 2]; 2]>,
}

fn build_problem(cfg: &LargeDefConfig, disc: &Discretization, weak: bool) -> Result<Problem> {
    let loading = cfg.load_case.loading();
    let boxes = patch_boxes(&disc.model);
    let mut broken = Constraints::new();
    for &(edge, comp) in &loading.rollers {
        for (side, _) in edge_sides(&boxes, edge) {
            broken.extend(&dirichlet_projection(disc, side, comp, 2, |_| 0.0)?)?;
        }
    }
    for &(corner, comp) in &loading.supports {
        let (patch, b) = boxes
            .iter()
            .enumerate()
            .find(|(_, b)| b[0].contains(&corner[0]) && b[1].contains(&corner[1]))
            .ok_or_else(|| Error::InvalidGeometry(format!("no patch has a corner at {corner:?}")))?;
        let side = if corner[0] == b[0][0] { Side::Xi0 } else { Side::Xi1 };
        let dofs = disc.side_dofs(PatchSide { patch, side })?;
        let dof = if corner[1] == b[1][0] { dofs[0] } else { dofs[dofs.len() - 1] };
        if disc.reduced_index[dof].is_some() && broken.get(2 * dof + comp).is_none() {
            broken.add(2 * dof + comp, 0.0)?;
        }
    }
    let fixed = to_reduced(disc, &broken, 2)?;
    let mesh = if weak { build_weak_mesh(disc)? } else { disc.mesh.clone() };
    let mut external = vec![0.0; 2 * mesh.num_dofs];
    let (edge, range) = loading.pressure;
    for (side, along) in edge_sides(&boxes, edge) {
        let len = along[1] - along[0];
        let lo = ((range[0] - along[0]) / len).clamp(0.0, 1.0);
        let hi = ((range[1] - along[0]) / len).clamp(0.0, 1.0);
        if hi <= lo {
            continue;
        }
        let p = cfg.pressure;
        let load = boundary_load(&mesh, 2, side, Some((lo, hi)), |_, n| vec![-p * n[0], -p * n[1]])?;
        for (e, l) in external.iter_mut().zip(load) {
            *e += l;
        }
    }
    Ok(Problem { mesh, external, fixed, boxes })
}

/// Converged displacement on one mesh.
pub struct LargeDefSolution {
    pub mesh: ExtractedMesh,
    pub displacement: Vec<f64>,
    pub iterations: Vec<usize>,
    boxes: Vec<[[f64; 2]; 2]>,
}

impl LargeDefSolution {
    /// Patch and parametric coordinates of a physical point of the square.
    fn parametric(&self, x: [f64; 2]) -> Result<(usize, [f64; 2])> {
        let (patch, b) = self
            .boxes
            .iter()
            .enumerate()
            .find(|(_, b)| x[0] >= b[0][0] && x[0] <= b[0][1] && x[1] >= b[1][0] && x[1] <= b[1][1])
            .ok_or(Error::OutOfDomain { value: x[0], lo: 0.0, hi: 1.0 })?;
        let domain = self.mesh.patch_domains[patch];
        let mut xi = [0.0; 2];
        for d in 0..2 {
            let s = (x[d] - b[d][0]) / (b[d][1] - b[d][0]);
            xi[d] = domain[d][0] + s * (domain[d][1] - domain[d][0]);
        }
        Ok((patch, xi))
    }

    fn locate(&self, x: [f64; 2]) -> Result<(usize, [f64; 2])> {
        let (patch, xi) = self.parametric(x)?;
        let e = self.mesh.locate(patch, xi).ok_or(Error::OutOfDomain { value: xi[0], lo: 0.0, hi: 1.0 })?;
        Ok((e, xi))
    }

    fn eval_in(&self, element: usize, x: [f64; 2]) -> Result<[f64; 2]> {
        let (_, xi) = self.parametric(x)?;
        let el = &self.mesh.elements[element];
        let pt = el.eval(xi)?;
        let (v, _) = field_at(el, &pt, &self.displacement, 2);
        Ok([v[0], v[1]])
    }

    /// Displacement at a physical point of the square.
    pub fn displacement_at(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let (e, _) = self.locate(x)?;
        self.eval_in(e, x)
    }

    /// Physical cell boundaries along direction `d`.
    fn breakpoints(&self, d: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for el in &self.mesh.elements {
            let b = self.boxes[el.patch];
            let dom = self.mesh.patch_domains[el.patch];
            for &c in &el.cell_box[d] {
                out.push(b[d][0] + (c - dom[d][0]) / (dom[d][1] - dom[d][0]) * (b[d][1] - b[d][0]));
            }
        }
        out
    }
}

fn merged_grid(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

fn solve_on(cfg: &LargeDefConfig, model: &MultiPatch, weak: bool) -> Result<LargeDefSolution> {
    let disc = Discretization::new(model, MortarOptions::with_refinement(cfg.dual_refinement))?;
    let problem = build_problem(cfg, &disc, weak)?;
    let sol = solve_load_stepping(&problem.mesh, &cfg.material, &problem.external, &problem.fixed, &cfg.stepping)?;
    Ok(LargeDefSolution {
        mesh: problem.mesh,
        displacement: sol.displacement,
        iterations: sol.iterations,
        boxes: problem.boxes,
    })
}

/// Solution on the weakly continuous mesh of `level`: left patch `n × n`,
/// right patch `n × (n + 1)`, coupled through the weak extraction operators.
pub fn solve_weak(cfg: &LargeDefConfig, level: usize) -> Result<LargeDefSolution> {
    let n = cfg.elements(level);
    solve_on(cfg, &largedef_square(cfg.p, n, n + 1)?, true)
}

/// Solution on the conforming mesh of `level`: `2n × n` elements with a `C⁰`
/// line at `x = 1/2`.
pub fn solve_conforming(cfg: &LargeDefConfig, level: usize) -> Result<LargeDefSolution> {
    solve_on(cfg, &largedef_conforming(cfg.p, cfg.elements(level))?, false)
}

/// `‖u_a − u_b‖` in `L2`, integrated cell by cell over the common
/// refinement of both meshes so that the integrand is smooth on every cell.
pub fn displacement_difference(a: &LargeDefSolution, b: &LargeDefSolution) -> Result<f64> {
    let gx = merged_grid([a.breakpoints(0), b.breakpoints(0)].concat());
    let gy = merged_grid([a.breakpoints(1), b.breakpoints(1)].concat());
    let p = a.mesh.elements.iter().chain(&b.mesh.elements).flat_map(|e| e.degree).max().unwrap_or(1);
    let rule = GaussRule::new(p + 3);
    let cells: Vec<[[f64; 2]; 2]> =
        gy.windows(2).flat_map(|y| gx.windows(2).map(move |x| [[x[0], x[1]], [y[0], y[1]]])).collect();
    let parts: Vec<f64> = cells
        .par_iter()
        .map(|c| {
            let centre = [0.5 * (c[0][0] + c[0][1]), 0.5 * (c[1][0] + c[1][1])];
            let (ea, _) = a.locate(centre)?;
            let (eb, _) = b.locate(centre)?;
            let mut acc = 0.0;
            for (y, wy) in rule.on_interval(c[1][0], c[1][1]) {
                for (x, wx) in rule.on_interval(c[0][0], c[0][1]) {
                    let ua = a.eval_in(ea, [x, y])?;
                    let ub = b.eval_in(eb, [x, y])?;
                    acc += wx * wy * ((ua[0] - ub[0]).powi(2) + (ua[1] - ub[1]).powi(2));
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum::<f64>().sqrt())
}

/// One level of the weak/conforming comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeDefRow {
    pub level: usize,
    pub h: f64,
    /// Unknowns of the weakly continuous system.
    pub dofs: usize,
    pub relative_error: f64,
    pub rate: Option<f64>,
    pub status: Option<String>,
}

/// Solves both meshes on every level and tabulates `‖u_w − u_c‖`.
pub fn run_largedef(cfg: &LargeDefConfig) -> Vec<LargeDefRow> {
    let mut rows: Vec<LargeDefRow> = Vec::with_capacity(cfg.levels);
    for level in 0..cfg.levels {
        let h = cfg.mesh_size(level);
        let result = solve_weak(cfg, level).and_then(|w| {
            let c = solve_conforming(cfg, level)?;
            Ok((2 * w.mesh.num_dofs, displacement_difference(&c, &w)?))
        });
        let row = match result {
            Ok((dofs, err)) => {
                let rate = rows
                    .last()
                    .filter(|prev| prev.status.is_none())
                    .map(|prev| observed_rate(prev.relative_error, err, prev.h, h));
                LargeDefRow { level, h, dofs, relative_error: err, rate, status: None }
            }
            Err(e) => {
                LargeDefRow { level, h, dofs: 0, relative_error: f64::NAN, rate: None, status: Some(e.to_string()) }
            }
        };
        rows.push(row);
    }
    rows
}
