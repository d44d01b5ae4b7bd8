pub mod diff;
pub mod eigen;
pub mod expsum;
pub mod grid;
pub mod logsum;
pub mod quadrature;
pub mod theta;

pub use eigen::{fd_eigen, Eigenpair};
pub use expsum::{ExpSum, Term};
pub use grid::{Grid, GridFunction};
pub use quadrature::{adaptive_simpson, quad};
pub use theta::{theta1, theta4, ThetaNome};
