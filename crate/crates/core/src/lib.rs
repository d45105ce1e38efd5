pub mod scalar;
pub mod spaces;
pub mod orthogonality;
pub mod attainment;
pub mod certificate;
pub mod sampling;
pub mod constructions;
pub mod bs_checker;
pub mod matrix_bs;
