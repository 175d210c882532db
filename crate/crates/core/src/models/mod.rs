//! Structure tensors of concrete examples.

pub mod dim3;
pub mod lie;
pub mod sphere;

pub use dim3::{dim3_component, dim3_consistency_residual, dim3_lee, Dim3Coefficients};
pub use lie::{
    check_jacobi, koszul_connection, lie_family, structure_tensor_from_connection, Connection,
    LieAlgebraSpec,
};
pub use sphere::sphere_f;
