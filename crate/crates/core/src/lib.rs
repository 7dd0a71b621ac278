//! Exact verification kernel for reflection-equation and RTT algebras,
//! quantum spheres and their line bundles.

pub mod coeff;
pub mod forms;
pub mod hecke;
pub mod linalg;
pub mod ncalg;
pub mod realg;
pub mod report;
pub mod rtt;
pub mod sphere;

pub use coeff::{rat, CoeffError, ExtScalar, Field, ParamSet, QScalar};
pub use forms::{FormsError, TensorSphere, UqRep};
pub use hecke::{HeckeError, HeckeSymmetry, IdentityCheck};
pub use linalg::Matrix;
pub use ncalg::{Generators, NCPoly, NcError, RewriteSystem, Word};
pub use realg::{REAlgebra, ReError};
pub use report::{Check, Report, Status};
pub use rtt::{Coaction, CoactionLaw, RTTAlgebra, RttError};
pub use sphere::{OrbitAlgebra, Roots, SphereError};
