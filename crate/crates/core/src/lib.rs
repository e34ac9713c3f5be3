//! Finite unitary groups U(1,1) and U(2,1), their modular principal series, and
//! the tools to decompose them.

pub mod classify;
pub mod gf;
pub mod grp;
pub mod hecke;
pub mod matrix;
pub mod meataxe;
pub mod modrep;
pub mod poly;
pub mod verify;
