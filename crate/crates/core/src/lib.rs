//! Analytic and Monte-Carlo tools for extremal facets of random polytopes
//! inscribed in the unit sphere.

pub mod bounds;
pub mod caps;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod hull;
pub mod lab;
pub mod linalg;
pub mod montecarlo;
pub mod quad;
pub mod report;
pub mod rng;
pub mod sampling;
pub mod simplex_law;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{hyperplane_through, simplex_volume, Hyperplane, PointCloud};
pub use rng::RngStream;
pub use sampling::sample_sphere;
pub use special::{ball_volume, beta, ln_gamma, sphere_area};
