//! A desk-scale laboratory for the algebras of `p`-pseudofunctions of finite
//! groups: convolution operators `λ_p(f)` on `ℓ^p(G)`, their `p → p` norms,
//! and numerical checks of the norm identities and inequalities these
//! algebras satisfy.
//!
//! Modules, bottom-up:
//!
//! * [`group`]: finite groups as Cayley tables, subgroups, quotients.
//! * [`algebra`]: the group algebra `ℓ¹(G)` with convolution and `♯`.
//! * [`operators`]: matrices of the regular and crossed-product
//!   representations.
//! * [`pnorm`]: certified `p → p` operator-norm estimates.
//! * [`analysis`]: norm curves and the inequality checks built on them.
//! * [`gelfand`]: characters and the Fourier transform of abelian groups.
//! * [`crossed`]: matrix units of the translation crossed product.
//! * [`io`] and [`cli`]: file formats and the batch front-end.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod crossed;
pub mod error;
pub mod gelfand;
pub mod group;
pub mod io;
pub mod operators;
pub mod pnorm;

pub use error::{LabError, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
