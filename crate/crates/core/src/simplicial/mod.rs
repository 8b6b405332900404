//! Polynomial forms on simplices, cells of the MC nerve, bigraded Artinian
//! algebras with their total complex, and cosimplicial denormalization.

pub mod bigraded;
pub mod denormalize;
pub mod forms;
pub mod nerve;

pub use forms::DeRhamForm;
pub use nerve::{gauge_one_simplex, mc_check_on_simplex, nerve_pi_square_zero, McCheck, NerveCell};
pub use bigraded::{from_artin, BigradedArtin, BigradedMap};
pub use denormalize::{denormalize, denormalize_map, CosimplicialArtin, Level};
