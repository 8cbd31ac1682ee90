pub mod error;
pub mod funcdsl;
pub mod identities;
pub mod laplace_inv;
pub mod mtransform;
pub mod pde;
pub mod quad;
pub mod report;
pub mod rules;
pub mod specfun;

pub use error::{Error, Result};
pub use laplace_inv::{InversionConfig, InversionDiagnostic, InversionMethod};
pub use mtransform::{FuncHandle, GrowthBound, MParams};
pub use num_complex::Complex64;
pub use quad::{QuadConfig, QuadResult, TailCheck};
pub use report::ResidualReport;
