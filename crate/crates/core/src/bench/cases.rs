//! Linear benchmark problems solved with the mortar or weak formulation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{
    apply_dirichlet, assemble_elasticity, assemble_poisson, boundary_load, condense, dirichlet_projection,
    expand_components, integrate, l2_error, linear_solve, stress_at, to_reduced, AssembledSystem, Constraints,
    LinearElastic,
};
use crate::geometry::{MultiPatch, PatchSide, Side};
use crate::mesh::ExtractedMesh;
use crate::mortar::{Discretization, MortarOptions};
use crate::weak::build_weak_mesh;

use super::exact::{
    annulus_gradient, annulus_solution, annulus_source, square_gradient, square_solution, KirschSolution,
};
use super::geometry::{
    annulus_two_patch, largedef_square, plate_three_patch, plate_two_patch, square_two_patch, PLATE_DIMENSIONS,
};
use super::largedef::LoadCase;

/// Benchmark problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// Unit square, Dirichlet data on the whole boundary.
    SquareDirichlet,
    /// Unit square, Dirichlet data on `x = 0, 1`, Neumann data on `y = 0, 1`.
    SquareMixed,
    /// Quarter annulus, Dirichlet on the straight and Neumann on the curved sides.
    Annulus,
    /// Plate with a hole under tension, two patches.
    #[serde(rename = "plate-hole-2patch")]
    PlateHole,
    /// Plate with a hole under tension, three patches.
    #[serde(rename = "plate-hole-3patch")]
    PlateHoleThree,
    /// Large-deformation comparison of weak and conforming meshes, load case 1.
    #[serde(rename = "largedef-case1")]
    LargedefCase1,
    #[serde(rename = "largedef-case2")]
    LargedefCase2,
    #[serde(rename = "largedef-case3")]
    LargedefCase3,
}

impl Case {
    pub const ALL: [Case; 8] = [
        Case::SquareDirichlet,
        Case::SquareMixed,
        Case::Annulus,
        Case::PlateHole,
        Case::PlateHoleThree,
        Case::LargedefCase1,
        Case::LargedefCase2,
        Case::LargedefCase3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::SquareDirichlet => "square-dirichlet",
            Case::SquareMixed => "square-mixed",
            Case::Annulus => "annulus",
            Case::PlateHole => "plate-hole-2patch",
            Case::PlateHoleThree => "plate-hole-3patch",
            Case::LargedefCase1 => "largedef-case1",
            Case::LargedefCase2 => "largedef-case2",
            Case::LargedefCase3 => "largedef-case3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::InvalidConfig(format!("unknown case '{s}'")))
    }

    /// Load case of the large-deformation cases.
    pub fn load_case(self) -> Option<LoadCase> {
        match self {
            Case::LargedefCase1 => Some(LoadCase::Case1),
            Case::LargedefCase2 => Some(LoadCase::Case2),
            Case::LargedefCase3 => Some(LoadCase::Case3),
            _ => None,
        }
    }

    pub fn is_elastic(self) -> bool {
        matches!(self, Case::PlateHole | Case::PlateHoleThree)
    }

    /// Solution components per node.
    pub fn ncomp(self) -> usize {
        if self.is_elastic() {
            2
        } else {
            1
        }
    }
}

/// How the coupled system is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Broken assembly followed by static condensation `Tᵀ K T`.
    Mortar,
    /// Direct assembly on the weakly continuous mesh.
    Weak,
}

/// Parameters of a benchmark run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub case: Case,
    pub p: usize,
    /// Elements per direction of the master and slave patch on level 0, per
    /// unit of `base`.
    pub ratio: [usize; 2],
    pub base: usize,
    /// `false` perturbs the interface parameterizations (square cases only).
    pub matched: bool,
    pub dual_refinement: usize,
    pub levels: usize,
    pub seed: u64,
    pub method: Method,
}

impl StudyConfig {
    pub fn new(case: Case, p: usize, ratio: [usize; 2]) -> Self {
        Self { case, p, ratio, base: 1, matched: true, dual_refinement: 1, levels: 4, seed: 0, method: Method::Mortar }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.p > 6 {
            return Err(Error::InvalidConfig(format!("degree {} is not supported", self.p)));
        }
        if self.ratio.contains(&0) || self.base == 0 {
            return Err(Error::InvalidConfig("element counts must be positive".into()));
        }
        if !self.matched && !matches!(self.case, Case::SquareDirichlet | Case::SquareMixed) {
            return Err(Error::InvalidConfig(format!("case {} has no mismatched variant", self.case.name())));
        }
        if self.case.load_case().is_some() && self.method != Method::Weak {
            return Err(Error::InvalidConfig(format!("case {} is solved on the weak mesh only", self.case.name())));
        }
        if self.p < 2 && !matches!(self.case, Case::SquareDirichlet | Case::SquareMixed) {
            return Err(Error::InvalidConfig("curved geometries need degree at least 2".into()));
        }
        Ok(())
    }

    /// Multi-patch model of refinement level `level`.
    pub fn model(&self, level: usize) -> Result<MultiPatch> {
        self.validate()?;
        let m = self.ratio[0] * self.base;
        let s = self.ratio[1] * self.base;
        let coarse = match self.case {
            Case::SquareDirichlet | Case::SquareMixed => {
                square_two_patch(self.p, m, s, (!self.matched).then_some(self.seed))?
            }
            Case::Annulus => annulus_two_patch(self.p, m, s)?,
            Case::PlateHole => plate_two_patch(self.p, m, s)?,
            Case::PlateHoleThree => plate_three_patch(self.p, m, s)?,
            Case::LargedefCase1 | Case::LargedefCase2 | Case::LargedefCase3 => largedef_square(self.p, m, m + 1)?,
        };
        coarse.refine_uniform(level)
    }

    /// Parametric element size of the master patch on `level`.
    pub fn mesh_size(&self, level: usize) -> f64 {
        1.0 / (self.ratio[0] * self.base * (1 << level)) as f64
    }
}

/// Loading of the plate with a hole.
pub const PLATE_TRACTION: f64 = 10.0;
pub const PLATE_MATERIAL: LinearElastic = LinearElastic { youngs_modulus: 1e5, poisson_ratio: 0.3, plane_strain: true };

pub fn kirsch() -> KirschSolution {
    KirschSolution { traction: PLATE_TRACTION, radius: PLATE_DIMENSIONS.0 }
}

/// Boundary data of a case: Dirichlet sides (with the constrained component)
/// and Neumann sides.
struct BoundaryLayout {
    dirichlet: Vec<(PatchSide, usize)>,
    neumann: Vec<PatchSide>,
}

fn ps(patch: usize, side: Side) -> PatchSide {
    PatchSide { patch, side }
}

fn layout(case: Case) -> BoundaryLayout {
    use Side::*;
    match case {
        Case::SquareDirichlet => BoundaryLayout {
            dirichlet: [ps(0, Xi0), ps(0, Eta0), ps(0, Eta1), ps(1, Xi1), ps(1, Eta0), ps(1, Eta1)]
                .into_iter()
                .map(|s| (s, 0))
                .collect(),
            neumann: vec![],
        },
        Case::SquareMixed => BoundaryLayout {
            dirichlet: vec![(ps(0, Xi0), 0), (ps(1, Xi1), 0)],
            neumann: vec![ps(0, Eta0), ps(0, Eta1), ps(1, Eta0), ps(1, Eta1)],
        },
        Case::Annulus => BoundaryLayout {
            dirichlet: vec![(ps(0, Xi0), 0), (ps(1, Xi1), 0)],
            neumann: vec![ps(0, Eta0), ps(0, Eta1), ps(1, Eta0), ps(1, Eta1)],
        },
        Case::PlateHole => BoundaryLayout {
            dirichlet: vec![(ps(0, Xi0), 1), (ps(1, Xi1), 0)],
            neumann: vec![ps(0, Eta1), ps(1, Eta1)],
        },
        Case::PlateHoleThree => BoundaryLayout {
            dirichlet: vec![(ps(0, Xi0), 1), (ps(1, Xi1), 0), (ps(2, Xi1), 0)],
            neumann: vec![ps(0, Eta1), ps(2, Eta1)],
        },
        Case::LargedefCase1 | Case::LargedefCase2 | Case::LargedefCase3 => {
            BoundaryLayout { dirichlet: vec![], neumann: vec![] }
        }
    }
}

/// Discrete solution of one refinement level.
pub struct LevelSolution {
    pub discretization: Discretization,
    /// Mesh the coefficients refer to: the broken mesh for the mortar method,
    /// the weak mesh otherwise.
    pub mesh: ExtractedMesh,
    pub coeffs: Vec<f64>,
    /// Number of unknowns of the coupled system (all components).
    pub dofs: usize,
    /// `L2` error of the solution (of `σxx` for the plate).
    pub error: f64,
    pub h: f64,
    /// Condensed (or weak) system matrix before Dirichlet elimination.
    pub system: AssembledSystem,
    pub constraints: Constraints,
}

impl LevelSolution {
    /// `σxx` at a parametric point of a patch (plate cases).
    pub fn stress_xx(&self, patch: usize, xi: [f64; 2]) -> Result<f64> {
        let e = self
            .mesh
            .locate(patch, xi)
            .ok_or_else(|| Error::InvalidConfig(format!("no cell of patch {patch} contains {xi:?}")))?;
        let el = &self.mesh.elements[e];
        let pt = el.eval(xi)?;
        Ok(stress_at(&PLATE_MATERIAL, el, &pt, &self.coeffs)[0])
    }
}

/// Assembles the broken system of a case, including Neumann data.
pub fn assemble_case(case: Case, mesh: &ExtractedMesh) -> Result<AssembledSystem> {
    let mut system = if case.is_elastic() {
        assemble_elasticity(mesh, &PLATE_MATERIAL, |_| [0.0, 0.0])?
    } else if case == Case::Annulus {
        assemble_poisson(mesh, annulus_source)?
    } else {
        assemble_poisson(mesh, |_| 0.0)?
    };
    let k = kirsch();
    for side in layout(case).neumann {
        let load = if case.is_elastic() {
            boundary_load(mesh, 2, side, None, |x, n| k.traction(x, n).to_vec())?
        } else {
            let grad = if case == Case::Annulus { annulus_gradient } else { square_gradient };
            boundary_load(mesh, 1, side, None, |x, n| {
                let g = grad(x);
                vec![g[0] * n[0] + g[1] * n[1]]
            })?
        };
        for (r, l) in system.rhs.iter_mut().zip(load) {
            *r += l;
        }
    }
    Ok(system)
}

/// Dirichlet constraints of a case on broken (interleaved) DOFs.
pub fn case_constraints(case: Case, disc: &Discretization) -> Result<Constraints> {
    let ncomp = case.ncomp();
    let mut c = Constraints::new();
    for (side, comp) in layout(case).dirichlet {
        let g: fn([f64; 2]) -> f64 = match case {
            Case::SquareDirichlet | Case::SquareMixed => square_solution,
            Case::Annulus => annulus_solution,
            _ => |_| 0.0,
        };
        c.extend(&dirichlet_projection(disc, side, comp, ncomp, g)?)?;
    }
    Ok(c)
}

/// Solves one refinement level of a study.
///
/// The large-deformation cases are nonlinear and are run by
/// [`run_largedef`](super::largedef::run_largedef) instead.
pub fn solve_level(cfg: &StudyConfig, level: usize) -> Result<LevelSolution> {
    let model = cfg.model(level)?;
    let mut solution = solve_model(cfg, &model)?;
    solution.h = cfg.mesh_size(level);
    Ok(solution)
}

/// Solves a linear case on a given model, e.g. one read from a mesh file.
///
/// The boundary data of `cfg.case` are applied to the sides of `model`, so
/// the model must have the patch layout of the case. The returned `h` is
/// that of level 0.
pub fn solve_model(cfg: &StudyConfig, model: &MultiPatch) -> Result<LevelSolution> {
    if cfg.case.load_case().is_some() {
        return Err(Error::InvalidConfig(format!("case {} is not a linear benchmark", cfg.case.name())));
    }
    let disc = Discretization::new(model, MortarOptions::with_refinement(cfg.dual_refinement))?;
    let ncomp = cfg.case.ncomp();
    let broken_constraints = case_constraints(cfg.case, &disc)?;
    let constraints = to_reduced(&disc, &broken_constraints, ncomp)?;
    let (mesh, system) = match cfg.method {
        Method::Mortar => {
            let broken = assemble_case(cfg.case, &disc.mesh)?;
            let t = expand_components(&disc.prolongation, ncomp);
            (disc.mesh.clone(), condense(&broken, &t)?)
        }
        Method::Weak => {
            let weak = build_weak_mesh(&disc)?;
            let system = assemble_case(cfg.case, &weak)?;
            (weak, system)
        }
    };
    let reduced = linear_solve(&apply_dirichlet(&system, &constraints)?)?;
    let coeffs = match cfg.method {
        Method::Mortar => expand_components(&disc.prolongation, ncomp).mul_vec(&reduced),
        Method::Weak => reduced,
    };
    let error = case_error(cfg.case, &mesh, &coeffs)?;
    Ok(LevelSolution {
        dofs: system.size(),
        discretization: disc,
        mesh,
        coeffs,
        error,
        h: cfg.mesh_size(0),
        system,
        constraints,
    })
}

/// `L2` error of a discrete solution of a linear case: of the field for the
/// scalar cases and of `σxx` for the plate.
pub fn case_error(case: Case, mesh: &ExtractedMesh, coeffs: &[f64]) -> Result<f64> {
    match case {
        Case::SquareDirichlet | Case::SquareMixed => Ok(l2_error(mesh, coeffs, 1, |x| vec![square_solution(x)])?.0),
        Case::Annulus => Ok(l2_error(mesh, coeffs, 1, |x| vec![annulus_solution(x)])?.0),
        Case::PlateHole | Case::PlateHoleThree => {
            let k = kirsch();
            Ok(integrate(mesh, 2, |el, pt| {
                Ok((stress_at(&PLATE_MATERIAL, el, pt, coeffs)[0] - k.stress(pt.x)[0]).powi(2))
            })?
            .sqrt())
        }
        _ => Err(Error::InvalidConfig(format!("case {} has no exact solution", case.name()))),
    }
}

/// Patch and parametric point of the hole crown `(0, R)` of the plate.
///
/// Both plate meshes have the crown at the hole end of the symmetry edge
/// `x = 0` of patch 1.
pub fn plate_crown() -> (usize, [f64; 2]) {
    (1, [1.0, 0.0])
}
