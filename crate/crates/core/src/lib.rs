pub mod bsm;
pub mod calibrate;
pub mod elements;
pub mod error;
pub mod hom;
pub mod linalg;
pub mod rng;
pub mod scenario;
pub mod state;
pub mod teleport;
pub mod tomography;
