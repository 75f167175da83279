//! Measurement instruments shared by every construction: linear symplectic
//! algebra on `T*R^N`, Lagrangian checks for parametrized patches, Maslov
//! indices of loops of Lagrangian planes, planar curves, and double points.

mod curve;
mod double_points;
mod frame;
mod patch;
mod phase;

pub use curve::{
    hausdorff_distance, polyline_hausdorff, segment_intersection, ClosedSpline, PlanarCurve,
};
pub use double_points::{find_double_points, DoublePoint, DoublePointSearch, RefinementStatus};
pub use frame::{maslov_index, transversality_gap, FrameLoop, LagrangianFrame};
pub use patch::{
    verify_lagrangian, DomainPredicate, Jacobian, JacobianFn, LagrangianPatch, MapFn, ParamBox,
    VerificationReport,
};
pub use phase::{omega_eval, PhasePoint, SymplecticForm};
