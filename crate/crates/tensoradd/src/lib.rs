//! Exact-arithmetic workbench for small order-3 tensors: flattening and
//! substitution lower bounds, an exhaustive exact rank search, Strassen's
//! decomposition of the 2x2 matrix multiplication tensor, and the
//! direct-sum machinery (stick-out profiles, seven-type classification,
//! repletion/digestion, hook peeling) used to audit rank additivity.
//!
//! All arithmetic is exact: GF(p) for small primes p, or arbitrary-precision
//! rationals. No floating point anywhere.

pub mod error;
pub mod exactfield;
pub mod io;
pub mod tensor3;
pub mod decomp;
pub mod bounds;
pub mod directsum;

pub use error::{Error, Result};
pub use exactfield::{FieldDescriptor, Matrix, Scalar};
pub use tensor3::{matmul_tensor, Axis, HookShape, MatrixSpace, Tensor3};
pub use decomp::{rank_oracle, strassen_222, Decomposition, RankOneTerm, RankResult};
pub use bounds::{peel, substitution_lower_bound, PeelCertificate};
pub use directsum::{additivity_check, AdditivityReport, BlockSplit};
