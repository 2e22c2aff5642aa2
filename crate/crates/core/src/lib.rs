#![no_std]

extern crate alloc;

pub mod algebra;
pub mod balgebra;
pub mod exactnum;
pub mod exprlang;
pub mod polyring;
pub mod linalg;
pub mod relations;
pub mod symbolalg;
pub mod witt;
