pub mod channel;
pub mod coherent;
pub mod error;
pub mod gaussian;
pub mod perturbation;
pub mod fock;
pub mod verify;
pub mod cli;
