//! Origin-symmetric polytopes in halfspace form and the measures attached
//! to them.

mod direction;
pub(crate) mod hull;
mod measure;
mod polytope;
pub mod sphere;

pub use direction::{find_direction, Direction, DIRECTION_TOL};
pub use measure::{ConeVolumeMeasure, EvenDiscreteMeasure};
pub(crate) use polytope::{facet_data, FacetData};
pub use polytope::{
    cone_volume_measure, hausdorff_distance, hausdorff_distance_with_grid, mixed_volume_v1,
    project, support_value, surface_area_measure, volume, wulff_shape, Projection,
    SymmetricPolytope, INACTIVE_AREA_FRACTION,
};
