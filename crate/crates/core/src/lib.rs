//! Subgroup-growth coefficients, orbit-count tables of random coverings and
//! the saddle-point numerics that compare them with their asymptotics.
//!
//! The pipeline runs bottom-up:
//!
//! * [`dirichlet`]: exact Dirichlet-series coefficient algebra;
//! * [`groups`]: the group catalog, `a_n(G)` tables and brute-force oracles;
//! * [`orbits`]: exact orbit-count rows `A(G,n,k)` and their disk cache;
//! * [`measure`]: the biased law of the number of orbits and its moments;
//! * [`asymptotics`]: `W`-functions, predictions and saddle diagnostics;
//! * [`logcc`] and [`verify`]: log-concavity scans and oracle suites.

pub mod asymptotics;
pub mod bigmath;
pub mod dirichlet;
mod error;
pub mod groups;
pub mod logcc;
pub mod measure;
pub mod orbits;
pub mod scalar;
pub mod verify;

pub use dirichlet::{IntSeq, ZetaFactor};
pub use error::{Error, Result};
pub use asymptotics::{SaddleParams, ScanRow, SingularData};
pub use groups::{Catalog, CoeffTable, GammaExpr, GroupSpec, HomCensus, Presentation};
pub use logcc::LogccReport;
pub use measure::{MomentReport, Pmf};
pub use orbits::{CacheStatus, OrbitCache, OrbitRows, OrbitTable};
pub use scalar::Scalar;
pub use verify::SuiteResult;
