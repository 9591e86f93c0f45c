//! Exact computer algebra for the orthosymplectic superalgebra osp(1|2l),
//! its quadratic Casimir, Whittaker radial parts and BC Toda chains.

pub mod diffop;
pub mod error;
pub mod exec;
pub mod json;
pub mod linalg;
pub mod logs;
pub mod numerics;
pub mod osp;
pub mod poly;
pub mod radial;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod supermatrix;
pub mod toda;
pub mod uea;
pub mod verify;
pub mod whittaker;
