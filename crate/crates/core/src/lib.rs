pub mod eisenstein;
pub mod error;
pub mod heilbronn;
pub mod linalg;
pub mod modsym;
pub mod pdmu;
pub mod qseries;
pub mod rankzero;
