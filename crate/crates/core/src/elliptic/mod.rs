//! Weierstrass models over Q, the group law and rational torsion.

pub mod divpoly;
pub mod isogeny;
pub mod model;
pub mod point;
pub mod torsion;

pub use model::WeierstrassModel;
pub use point::{CurvePoint, PointOrder};
pub use torsion::{
    exact_order_points, has_full_two_torsion, short_discriminant_factorization, short_form, torsion_points,
    ShortForm,
};
