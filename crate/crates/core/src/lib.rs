//! Generalized local cohomology, local homology and completion homology of
//! finely graded modules over polynomial rings, computed degree by degree
//! with exact linear algebra over prime fields.

pub mod cech;
pub mod complex;
pub mod derived;
pub mod error;
pub mod field;
pub mod graded;
pub mod ideal;
pub mod instance;
pub mod limits;
pub mod linalg;
pub mod module;
pub mod natural;
pub mod oracle;
pub mod resolution;
pub mod ring;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use field::{Field, Fp};

/// Default coefficient field.
pub type Scalar = Fp<32003>;
