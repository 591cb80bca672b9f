pub mod cli;
pub mod datasets;
pub mod discriminant;
pub mod distgeom;
pub mod error;
pub mod matrix;
pub mod mds;
pub mod spectral;
pub mod transforms;
