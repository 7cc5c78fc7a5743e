pub mod catalog;
pub mod curvature;
pub mod extension;
pub mod kahler;
pub mod lie;
pub mod residual;
pub mod scalar;
