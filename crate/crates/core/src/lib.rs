//! Resolution-free shape encoding for closed contours.
//!
//! A closed contour is read as a periodic complex function and compressed
//! into a handful of Fourier series coefficients; decoding at any resolution
//! is one inverse transform. Alongside the codec live the geometric losses
//! used to fit such descriptors by gradient descent, a Chebyshev analysis of
//! the polar baseline's periodicity defect, and the efficiency scores used
//! to compare shape encodings.
//!
//! Modules:
//!
//! * [`geometry`] — polygons, constant-spacing resampling, Chamfer distance,
//!   self-intersection counting, ray casting.
//! * [`codec`] — complex Fourier encode/decode, truncation, sparsification,
//!   the polar baseline encoder, descriptor serialization.
//! * [`losses`] — Chamfer / perimeter / coefficient losses with analytic
//!   gradients, and the gradient-descent descriptor fitter.
//! * [`chebyshev`] — Chebyshev series evaluation, the periodicity-gap
//!   identity, and least-squares fits of radial functions.
//! * [`metrics`] — COCO-format annotation ingestion, the reconstruction
//!   sweep, SEC and OES scores.

pub mod chebyshev;
pub mod codec;
pub mod error;
pub mod geometry;
pub mod losses;
pub mod metrics;

pub use chebyshev::{cheb_eval, cheb_fit_rho, cheb_fit_rho_constrained, periodicity_gap, ChebyshevSeries};
pub use codec::{
    decode, decode_polar, encode, encode_polar, encode_polar_with, sparsify, truncate,
    FourierDescriptor, PolarDecoded, PolarDescriptor,
};
pub use error::{Error, ErrorCategory, Result};
pub use geometry::{
    chamfer_distance, chamfer_distance_with, count_self_intersections, resample, BoundingBox,
    ChamferConfig, ContourSamples, Polygon, RayHit,
};
pub use losses::{
    fit_descriptor, loss_chamfer, loss_coeff, loss_perimeter, total_shape_loss, FitOptions,
    FitResult, InitMode, LossConfig,
};
pub use metrics::{
    compute_oes, compute_sec, load_annotations, reconstruction_sweep, sweep_to_csv,
    AnnotationSet, EfficiencyScore, SweepReport,
};
