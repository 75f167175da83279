//! Lagrangian 0-surgery: the local model `h_γ`, the two resolutions `Φ±` of
//! the double point of `Λ'`, their Maslov indices, and the curve-level
//! desingularization of the immersed cobordism `W`.

mod desing;
mod model;
mod resolution;

pub use desing::{desingularization_model, DesingularizationReport, EtaPair};
pub use model::{sphere_point, surgery_model, transported_model, SplitSymplecticMap, SurgeryCurve};
pub use resolution::{
    maslov_of_resolution, resolution_map, resolve_double_point, AreaReport, MaslovComputation,
    ModifiedPotential, Resolution, ResolutionChoice, ResolvedEnd,
};
