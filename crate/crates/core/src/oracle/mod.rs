//! Independent numerical reference methods.

pub mod elliptic;
pub mod fd;
pub mod mathieu;
pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use fd::{fd_eigenvalues_fn, fd_schrodinger_eigs, OracleSpectrum};
pub use mathieu::{mathieu_characteristics, MathieuCharacteristics};
pub use quadrature::adaptive_quadrature;
pub use roots::find_root;
pub use tridiag::SymTridiagonal;
