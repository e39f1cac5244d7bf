pub mod cocycle;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod flatpencil;
pub mod fibration;
pub mod geoflow;
pub mod io;
pub mod poly;
pub mod polysolve;
pub mod projstruct;
pub mod scalar;
pub mod series;
pub mod symmetry;
pub mod verify;
