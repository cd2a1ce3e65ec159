//! Deformations of Koszul complexes, local cohomology classes and the Cousin
//! boundary over ℚ[x1, …, xn].
//!
//! The pipeline: a [`DeformationScene`] lifts a regular sequence to `R[ε]`,
//! [`pi`] turns the lifted Koszul complex into a generalized fraction
//! `[ω | f_1..f_p]`, [`cousin::boundary`] pushes it to a codimension-(p+1)
//! point, and [`correct`] builds the corrector deformation when the boundary
//! does not vanish.

pub mod chern;
pub mod coeff;
pub mod cousin;
pub mod dual;
pub mod error;
pub mod forms;
pub mod koszul;
pub mod localcoh;
pub mod parse;
pub mod poly;
pub mod scene;
pub mod tangent;

pub use chern::Route;
pub use coeff::{Coefficient, Differentiable};
pub use cousin::{boundary, boundary_of_sum, BoundaryResult, CaseTag, SumBoundary};
pub use dual::{Dual, DualPoly};
pub use error::{Error, Result};
pub use forms::DiffForm;
pub use koszul::{build_koszul, KoszulComplex};
pub use localcoh::{class_is_zero, FormalSum, LocalCohClass};
pub use poly::{Frac, Ideal, Monomial, MonomialOrder, Poly, PolyRing, Rational};
pub use scene::{parse_scene, render_scene, SceneFile};
pub use tangent::{classify_case, correct, pi, verify_milnor_cycle, Case, DeformationScene, Labels};
