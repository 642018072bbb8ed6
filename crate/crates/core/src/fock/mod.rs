//! Truncated Fock-space computations used to cross-check the closed forms.

mod channel;
mod charfn;
mod density;
mod displacement;
mod oracle;
mod quadrature;

pub use channel::*;
pub use charfn::*;
pub use density::*;
pub use displacement::*;
pub use oracle::*;
pub use quadrature::*;
