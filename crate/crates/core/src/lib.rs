pub mod basis;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod sparse;
pub mod spin_hilbert;
pub mod exact_diag;
pub mod quadrature;
pub mod spin_wave;
pub mod holstein_primakoff;
pub mod bounds_lab;
pub mod cli;
