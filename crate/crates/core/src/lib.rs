pub mod combinatorics;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod symmetry;
pub mod rule;
pub mod constructor;
pub mod reduction;
pub mod analysis;
