//! Broken multi-patch spaces, mortar coupling and the prolongation from the
//! coupled (reduced) space to the broken space.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{MultiPatch, NurbsCurve, Patch, PatchSide, Side};
use crate::linalg::{CsrMatrix, Matrix, TripletBuilder};
use crate::mesh::{ExtractedElement, ExtractedMesh};
use crate::projection::DualBasis;
use crate::spline::bernstein::transform_inverse;
use crate::spline::extraction::extraction_operators;
use crate::spline::KnotVector;

use super::coupling::coupling_matrix_nurbs;
use super::map::{InterfaceMap, NewtonOptions};
use super::refine::refined_interface_knots;

/// Settings of the mortar discretization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MortarOptions {
    /// Dual refinement level `n`; `0` is the standard dual mortar method.
    pub dual_refinement: usize,
    pub newton: NewtonOptions,
    /// Gauss points per merged segment; `None` uses `max(p_s, p_m) + 1`.
    pub coupling_points: Option<usize>,
}

impl Default for MortarOptions {
    fn default() -> Self {
        Self { dual_refinement: 1, newton: NewtonOptions::default(), coupling_points: None }
    }
}

impl MortarOptions {
    pub fn with_refinement(dual_refinement: usize) -> Self {
        Self { dual_refinement, ..Self::default() }
    }
}

/// Role of a broken degree of freedom with respect to the interfaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DofRole {
    /// Not on any interface.
    Distinct,
    /// Trace function of a master side.
    MasterInterface,
    /// Dependent function of a slave side, eliminated by the coupling.
    SlaveInterface,
}

/// Refined interface row replacing the slave side functions of a patch.
#[derive(Clone, Debug, PartialEq)]
pub struct Enrichment {
    pub side: Side,
    pub knots: KnotVector<f64>,
    /// `N_slave = S N_refined` along the side.
    pub refinement: Matrix<f64>,
    /// Rational weights of the refined side functions.
    pub weights: Vec<f64>,
    /// Broken DOF of the first refined function.
    pub first_dof: usize,
}

impl Enrichment {
    pub fn dofs(&self) -> Range<usize> {
        self.first_dof..self.first_dof + self.knots.num_basis()
    }
}

/// DOF layout of one patch in the broken space.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchSpace {
    pub patch: usize,
    /// Broken DOF of each tensor-product function; `None` for functions
    /// replaced by the enrichment.
    pub function_dofs: Vec<Option<usize>>,
    pub enrichment: Option<Enrichment>,
    pub dofs: Range<usize>,
}

impl PatchSpace {
    /// Broken DOFs of the functions that do not vanish on `side`, ordered by
    /// the side parameter.
    pub fn side_dofs(&self, patch: &Patch, side: Side) -> Result<Vec<usize>> {
        if let Some(en) = &self.enrichment {
            if en.side == side {
                return Ok(en.dofs().collect());
            }
        }
        let n0 = patch.num_basis(0);
        patch
            .side_functions(side)
            .into_iter()
            .map(|f| match self.function_dofs[f] {
                Some(d) => Ok(d),
                None => {
                    let en = self.enrichment.as_ref().expect("replaced functions imply an enrichment");
                    let along = if en.side.tangent_dir() == 0 { f % n0 } else { f / n0 };
                    let last = en.knots.num_basis() - 1;
                    let n_along = patch.num_basis(en.side.tangent_dir());
                    if along == 0 {
                        Ok(en.first_dof)
                    } else if along + 1 == n_along {
                        Ok(en.first_dof + last)
                    } else {
                        Err(Error::InvalidInterface(format!("side {side:?} crosses the enriched side")))
                    }
                }
            })
            .collect()
    }
}

/// Coupling of one interface: `d_slave += G d_master`.
#[derive(Clone, Debug)]
pub struct InterfaceCoupling {
    pub interface: usize,
    pub map: InterfaceMap,
    /// `G`, rows the refined slave functions, columns the master side functions.
    pub matrix: Matrix<f64>,
    pub master_dofs: Vec<usize>,
}

/// All interfaces sharing one slave side.
#[derive(Clone, Debug)]
pub struct SlaveGroup {
    pub slave: PatchSide,
    pub dual: DualBasis<f64>,
    /// Slave side curve on the refined knots.
    pub refined_curve: NurbsCurve,
    pub slave_dofs: Vec<usize>,
    pub couplings: Vec<InterfaceCoupling>,
}

/// Broken space of a multi-patch model together with its mortar coupling.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub model: MultiPatch,
    pub options: MortarOptions,
    pub spaces: Vec<PatchSpace>,
    pub groups: Vec<SlaveGroup>,
    pub num_broken: usize,
    /// `T` with `d_broken = T d_reduced`.
    pub prolongation: CsrMatrix,
    /// Reduced index of each broken DOF (`None` for dependent DOFs).
    pub reduced_index: Vec<Option<usize>>,
    pub roles: Vec<DofRole>,
    /// Element representation of the broken space.
    pub mesh: ExtractedMesh,
}

impl Discretization {
    pub fn new(model: &MultiPatch, options: MortarOptions) -> Result<Self> {
        model.validate()?;
        let grouped = group_interfaces(model)?;

        // Refined interface bases.
        struct Prepared {
            slave: PatchSide,
            maps: Vec<(usize, InterfaceMap)>,
            knots: KnotVector<f64>,
            refinement: Matrix<f64>,
            curve: NurbsCurve,
        }
        let mut prepared = Vec::new();
        for (slave, itfs) in &grouped {
            let sp = &model.patches[slave.patch];
            let slave_curve = sp.side_curve(slave.side)?;
            let mut maps = Vec::new();
            let mut projected = Vec::new();
            for &k in itfs {
                let itf = &model.interfaces[k];
                let master_curve = model.patches[itf.master.patch].side_curve(itf.master.side)?;
                let map = InterfaceMap::new(
                    slave_curve.clone(),
                    master_curve.clone(),
                    itf.slave_range.map(|r| (r[0], r[1])),
                    itf.reversed,
                    options.newton,
                )?;
                for s in master_curve.knots().breakpoints() {
                    projected.push(map.to_slave(s)?);
                }
                maps.push((k, map));
            }
            let (knots, refinement) =
                refined_interface_knots(slave_curve.knots(), &projected, options.dual_refinement)?;
            let curve = refine_curve(&slave_curve, &knots, &refinement)?;
            prepared.push(Prepared { slave: *slave, maps, knots, refinement, curve });
        }

        // DOF numbering.
        let mut spaces = Vec::with_capacity(model.patches.len());
        let mut next = 0usize;
        for (pi, patch) in model.patches.iter().enumerate() {
            let start = next;
            let enriched = prepared.iter().find(|p| p.slave.patch == pi);
            let replaced: Vec<bool> = match enriched {
                Some(p) => {
                    let mut r = vec![false; patch.num_functions()];
                    for f in patch.side_functions(p.slave.side) {
                        r[f] = true;
                    }
                    r
                }
                None => vec![false; patch.num_functions()],
            };
            let mut function_dofs = Vec::with_capacity(patch.num_functions());
            for rep in &replaced {
                if *rep {
                    function_dofs.push(None);
                } else {
                    function_dofs.push(Some(next));
                    next += 1;
                }
            }
            let enrichment = enriched.map(|p| {
                let row: Vec<f64> = patch.side_functions(p.slave.side).iter().map(|&f| patch.weights()[f]).collect();
                let weights = p.refinement.transpose().mul_vec(&row).expect("row matches refinement");
                let en = Enrichment {
                    side: p.slave.side,
                    knots: p.knots.clone(),
                    refinement: p.refinement.clone(),
                    weights,
                    first_dof: next,
                };
                next += p.knots.num_basis();
                en
            });
            spaces.push(PatchSpace { patch: pi, function_dofs, enrichment, dofs: start..next });
        }
        let num_broken = next;

        // Coupling matrices.
        let mut groups = Vec::with_capacity(prepared.len());
        for p in prepared {
            let dual = DualBasis::new(&p.knots)?;
            let slave_dofs: Vec<usize> =
                spaces[p.slave.patch].side_dofs(&model.patches[p.slave.patch], p.slave.side)?;
            let mut couplings = Vec::new();
            for (k, map) in p.maps {
                let itf = &model.interfaces[k];
                let mp = &model.patches[itf.master.patch];
                let points = options
                    .coupling_points
                    .unwrap_or_else(|| mp.degree(itf.master.side.tangent_dir()).max(p.knots.degree()) + 1);
                let matrix = coupling_matrix_nurbs(&dual, &p.curve, map.master(), &map, points)?;
                let master_dofs = spaces[itf.master.patch].side_dofs(mp, itf.master.side)?;
                couplings.push(InterfaceCoupling { interface: k, map, matrix, master_dofs });
            }
            groups.push(SlaveGroup { slave: p.slave, dual, refined_curve: p.curve, slave_dofs, couplings });
        }

        let (prolongation, reduced_index) = build_prolongation(num_broken, &groups)?;
        let mut roles = vec![DofRole::Distinct; num_broken];
        for g in &groups {
            for c in &g.couplings {
                for &d in &c.master_dofs {
                    roles[d] = DofRole::MasterInterface;
                }
            }
        }
        for g in &groups {
            for &d in &g.slave_dofs {
                roles[d] = DofRole::SlaveInterface;
            }
        }
        let mesh = build_broken_mesh(model, &spaces, num_broken)?;
        Ok(Self { model: model.clone(), options, spaces, groups, num_broken, prolongation, reduced_index, roles, mesh })
    }

    pub fn num_reduced(&self) -> usize {
        self.prolongation.ncols()
    }

    /// Broken DOFs of the functions that do not vanish on a patch side.
    pub fn side_dofs(&self, side: PatchSide) -> Result<Vec<usize>> {
        self.spaces[side.patch].side_dofs(&self.model.patches[side.patch], side.side)
    }

    /// Expands reduced coefficients to the broken space.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        self.prolongation.mul_vec(reduced)
    }

    /// Coupling matrix of interface `k`.
    pub fn coupling(&self, k: usize) -> Option<&InterfaceCoupling> {
        self.groups.iter().flat_map(|g| &g.couplings).find(|c| c.interface == k)
    }
}

fn group_interfaces(model: &MultiPatch) -> Result<BTreeMap<PatchSide, Vec<usize>>> {
    let mut grouped: BTreeMap<PatchSide, Vec<usize>> = BTreeMap::new();
    for (k, itf) in model.interfaces.iter().enumerate() {
        grouped.entry(itf.slave).or_default().push(k);
    }
    for itf in &model.interfaces {
        if grouped.contains_key(&itf.master) {
            return Err(Error::InvalidInterface(format!(
                "side {:?} of patch {} is both master and slave",
                itf.master.side, itf.master.patch
            )));
        }
    }
    let mut slave_side_of_patch: BTreeMap<usize, Side> = BTreeMap::new();
    for slave in grouped.keys() {
        if let Some(other) = slave_side_of_patch.insert(slave.patch, slave.side) {
            if other.is_adjacent(slave.side) {
                // The corner function would be constrained by both sides.
                return Err(Error::ChainedDependency { dof: slave.patch });
            }
            return Err(Error::InvalidInterface(format!("patch {} is a slave on two sides", slave.patch)));
        }
    }
    for (slave, itfs) in &mut grouped {
        let curve = model.patches[slave.patch].side_curve(slave.side)?;
        let (lo, hi) = curve.domain();
        let mut ranges: Vec<(f64, f64)> =
            itfs.iter().map(|&k| model.interfaces[k].slave_range.map_or((lo, hi), |r| (r[0], r[1]))).collect();
        let mut order: Vec<usize> = (0..itfs.len()).collect();
        order.sort_by(|&a, &b| ranges[a].0.total_cmp(&ranges[b].0));
        *itfs = order.iter().map(|&i| itfs[i]).collect();
        ranges = order.iter().map(|&i| ranges[i]).collect();
        let tol = 1e-12 * (hi - lo);
        let mut cursor = lo;
        for (a, b) in ranges {
            if (a - cursor).abs() > tol || b <= a {
                return Err(Error::InvalidInterface(format!(
                    "master sides do not tile slave side {:?} of patch {}",
                    slave.side, slave.patch
                )));
            }
            cursor = b;
        }
        if (cursor - hi).abs() > tol {
            return Err(Error::InvalidInterface(format!(
                "master sides do not cover slave side {:?} of patch {}",
                slave.side, slave.patch
            )));
        }
    }
    Ok(grouped)
}

fn refine_curve(curve: &NurbsCurve, knots: &KnotVector<f64>, s: &Matrix<f64>) -> Result<NurbsCurve> {
    let st = s.transpose();
    let w = st.mul_vec(curve.weights())?;
    let hx: Vec<f64> = curve.points().iter().zip(curve.weights()).map(|(p, w)| p[0] * w).collect();
    let hy: Vec<f64> = curve.points().iter().zip(curve.weights()).map(|(p, w)| p[1] * w).collect();
    let px = st.mul_vec(&hx)?;
    let py = st.mul_vec(&hy)?;
    let points = (0..w.len()).map(|k| [px[k] / w[k], py[k] / w[k]]).collect();
    NurbsCurve::new(knots.clone(), points, w)
}

fn build_prolongation(num_broken: usize, groups: &[SlaveGroup]) -> Result<(CsrMatrix, Vec<Option<usize>>)> {
    // Dependent DOF -> list of (master broken DOF, coefficient).
    let mut deps: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for g in groups {
        for (row, &dof) in g.slave_dofs.iter().enumerate() {
            let mut entries = Vec::new();
            for c in &g.couplings {
                for (col, &m) in c.master_dofs.iter().enumerate() {
                    let v = c.matrix[(row, col)];
                    if v != 0.0 {
                        entries.push((m, v));
                    }
                }
            }
            if deps.insert(dof, entries).is_some() {
                return Err(Error::ChainedDependency { dof });
            }
        }
    }
    let mut reduced_index = vec![None; num_broken];
    let mut n_red = 0;
    for (d, slot) in reduced_index.iter_mut().enumerate() {
        if !deps.contains_key(&d) {
            *slot = Some(n_red);
            n_red += 1;
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Pending,
        Active,
        Done,
    }
    let mut state = vec![State::Pending; num_broken];
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); num_broken];

    fn resolve(
        d: usize,
        deps: &BTreeMap<usize, Vec<(usize, f64)>>,
        reduced_index: &[Option<usize>],
        state: &mut [State],
        rows: &mut [Vec<(usize, f64)>],
    ) -> Result<()> {
        match state[d] {
            State::Done => return Ok(()),
            State::Active => return Err(Error::ChainedDependency { dof: d }),
            State::Pending => {}
        }
        state[d] = State::Active;
        let row = match deps.get(&d) {
            None => vec![(reduced_index[d].expect("independent DOF"), 1.0)],
            Some(entries) => {
                let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                for &(m, v) in entries {
                    resolve(m, deps, reduced_index, state, rows)?;
                    for &(c, t) in &rows[m] {
                        *acc.entry(c).or_insert(0.0) += v * t;
                    }
                }
                acc.into_iter().collect()
            }
        };
        rows[d] = row;
        state[d] = State::Done;
        Ok(())
    }

    let mut b = TripletBuilder::new(num_broken, n_red);
    for d in 0..num_broken {
        resolve(d, &deps, &reduced_index, &mut state, &mut rows)?;
        for &(c, v) in &rows[d] {
            b.push(d, c, v);
        }
    }
    Ok((b.build(), reduced_index))
}

fn build_broken_mesh(model: &MultiPatch, spaces: &[PatchSpace], num_dofs: usize) -> Result<ExtractedMesh> {
    let mut elements = Vec::new();
    let mut parent = 0usize;
    for (pi, patch) in model.patches.iter().enumerate() {
        let space = &spaces[pi];
        let ext = [extraction_operators(patch.knots(0)), extraction_operators(patch.knots(1))];
        let p = [patch.degree(0), patch.degree(1)];
        let n0 = patch.num_basis(0);
        for x1 in &ext[1] {
            for x0 in &ext[0] {
                let parent_box = [[x0.span.lo, x0.span.hi], [x1.span.lo, x1.span.hi]];
                // Weighted tensor operator rows of the original functions.
                let mut funcs = Vec::new();
                let mut rows: Vec<Vec<f64>> = Vec::new();
                for (b, j) in x1.functions().enumerate() {
                    for (a, i) in x0.functions().enumerate() {
                        let f = i + n0 * j;
                        let w = patch.weights()[f];
                        let r1 = x1.operator.row(b);
                        let r0 = x0.operator.row(a);
                        let mut row = Vec::with_capacity(r0.len() * r1.len());
                        for c1 in r1 {
                            for c0 in r0 {
                                row.push(w * c1 * c0);
                            }
                        }
                        funcs.push(f);
                        rows.push(row);
                    }
                }
                let nb = (p[0] + 1) * (p[1] + 1);
                let mut bezier_weights = vec![0.0; nb];
                let mut hom = vec![[0.0; 2]; nb];
                for (f, row) in funcs.iter().zip(&rows) {
                    let x = patch.points()[*f];
                    for c in 0..nb {
                        bezier_weights[c] += row[c];
                        hom[c][0] += row[c] * x[0];
                        hom[c][1] += row[c] * x[1];
                    }
                }
                let bezier_points: Vec<[f64; 2]> =
                    hom.iter().zip(&bezier_weights).map(|(h, w)| [h[0] / w, h[1] / w]).collect();

                let enriched_here = space.enrichment.as_ref().filter(|en| {
                    let d = en.side.normal_dir();
                    let xd = if d == 0 { x0 } else { x1 };
                    let n = patch.num_basis(d);
                    let fns = xd.functions();
                    if en.side.is_upper() {
                        fns.end == n
                    } else {
                        fns.start == 0
                    }
                });

                let kept: Vec<usize> = (0..funcs.len()).filter(|&k| space.function_dofs[funcs[k]].is_some()).collect();
                match enriched_here {
                    None => {
                        let dofs = kept.iter().map(|&k| space.function_dofs[funcs[k]].expect("kept")).collect();
                        let operator = Matrix::from_rows(kept.iter().map(|&k| rows[k].clone()).collect())?;
                        elements.push(ExtractedElement {
                            patch: pi,
                            parent,
                            degree: p,
                            parent_box,
                            cell_box: parent_box,
                            dofs,
                            operator,
                            bezier_weights: bezier_weights.clone(),
                            bezier_points: bezier_points.clone(),
                        });
                    }
                    Some(en) => {
                        let t = en.side.tangent_dir();
                        let d = en.side.normal_dir();
                        let (xt, xd) = if t == 0 { (x0, x1) } else { (x1, x0) };
                        let row_local = if en.side.is_upper() { p[d] } else { 0 };
                        let across = xd.operator.row(row_local).to_vec();
                        let (lo, hi) = (xt.span.lo, xt.span.hi);
                        let cuts: Vec<f64> = en
                            .knots
                            .breakpoints()
                            .into_iter()
                            .filter(|&k| k >= lo - 1e-14 * (hi - lo) && k <= hi + 1e-14 * (hi - lo))
                            .collect();
                        let refined_ext = extraction_operators(&en.knots);
                        for w in cuts.windows(2) {
                            let (c0, c1) = (w[0], w[1]);
                            let mid = 0.5 * (c0 + c1);
                            let re = &refined_ext[en.knots.find_element(&mid)?];
                            let m_inv = transform_inverse(p[t], (&lo, &hi), (&c0, &c1))?;
                            let along = re.operator.matmul(&m_inv.transpose())?;
                            let mut dofs: Vec<usize> =
                                kept.iter().map(|&k| space.function_dofs[funcs[k]].expect("kept")).collect();
                            let mut op_rows: Vec<Vec<f64>> = kept.iter().map(|&k| rows[k].clone()).collect();
                            for (a, kf) in re.functions().enumerate() {
                                let wk = en.weights[kf];
                                let al = along.row(a);
                                let mut row = Vec::with_capacity(nb);
                                if t == 0 {
                                    for c1 in &across {
                                        for c0 in al {
                                            row.push(wk * c1 * c0);
                                        }
                                    }
                                } else {
                                    for c1 in al {
                                        for c0 in &across {
                                            row.push(wk * c1 * c0);
                                        }
                                    }
                                }
                                dofs.push(en.first_dof + kf);
                                op_rows.push(row);
                            }
                            let mut cell_box = parent_box;
                            cell_box[t] = [c0, c1];
                            elements.push(ExtractedElement {
                                patch: pi,
                                parent,
                                degree: p,
                                parent_box,
                                cell_box,
                                dofs,
                                operator: Matrix::from_rows(op_rows)?,
                                bezier_weights: bezier_weights.clone(),
                                bezier_points: bezier_points.clone(),
                            });
                        }
                    }
                }
                parent += 1;
            }
        }
    }
    let patch_domains =
        model.patches.iter().map(|p| [[p.domain(0).0, p.domain(0).1], [p.domain(1).0, p.domain(1).1]]).collect();
    Ok(ExtractedMesh { elements, num_dofs, patch_domains })
}
