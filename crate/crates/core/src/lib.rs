//! Compressed Counting: estimation of the αth frequency moment
//! F_(α) = Σ A[i]^α of a Turnstile data stream from k skewed stable random
//! projections.
//!
//! The pieces:
//!
//! - [`sketch`]: the O(k) streaming summary, updated per event and mergeable.
//! - [`stable`]: S(α, β, 1) sampling and the lazily generated projection matrix.
//! - [`estimators`]: geometric- and harmonic-mean estimators of F_(α).
//! - [`bounds`]: tail-bound constants and sample-size planning.
//! - [`log_functionals`]: logarithmic norm and distance via small-α moments.
//! - [`applications`]: method-of-moments gamma shape estimation.
//! - [`oracle`]: exact brute-force reference computations.
//!
//! ```
//! use ccount_core::{estimators, Sketch, SketchConfig, StreamUpdate, ProjectionKind};
//!
//! let config = SketchConfig::new(0.95, 64, 7, ProjectionKind::Skewed).unwrap();
//! let mut sketch = Sketch::new(config).unwrap();
//! for i in 0..100u64 {
//!     sketch.update(StreamUpdate::new(i, 2.0)).unwrap();
//! }
//! sketch.update(StreamUpdate::new(3, -2.0)).unwrap();
//! let est = estimators::estimate_gm(sketch.samples(), config.alpha).unwrap();
//! let exact = 99.0 * 2f64.powf(0.95);
//! assert!((est.value - exact).abs() < 0.2 * exact);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha;
pub mod applications;
pub mod bounds;
pub mod error;
pub mod estimators;
pub mod log_functionals;
pub mod oracle;
pub mod roots;
pub mod sketch;
pub mod special;
pub mod stable;
mod sum;

pub use alpha::AlphaParam;
pub use error::{Error, Result};
pub use estimators::{Estimate, EstimatorKind};
pub use sketch::{Sketch, SketchConfig, SketchRecord, StreamUpdate};
pub use stable::{ProjectionKind, SeedSpec};
