//! A numerical laboratory for the curve shortening flow ∂F/∂t = κν on
//! embedded plane curves.
//!
//! Strictly convex curves are evolved through their pressure p = κ² in the
//! tangent-angle gauge (Fourier pseudospectral in θ, explicit RK4 in time);
//! general embedded curves are evolved as point clouds with arclength
//! redistribution. Around the solvers sit the exact ancient families
//! (contracting circles, Angenent ovals, grim reapers) as oracles, the
//! monotone functionals J and I with their dissipation identities, Harnack
//! and oscillation diagnostics, and a classifier that identifies ancient
//! snapshots from their mode structure.

// `!(x > 0.0)`-style guards are used throughout: they reject NaN together
// with the wrong sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod exact_solutions;
pub mod flow_arclength;
pub mod flow_theta;
pub mod functionals;
pub mod geometry;
pub mod io;
pub mod spectral;
pub mod trajectory;

pub use asymptotics::{Classification, ClassificationKind, ModeSpectrum};
pub use error::{Error, Result};
pub use exact_solutions::OvalParams;
pub use flow_arclength::{ArcControls, ArcFlowState};
pub use flow_theta::{Frame, ThetaControls, ThetaFlowState};
pub use functionals::{FunctionalSeries, FunctionalValue};
pub use geometry::{AngleGrid, CurvatureProfile, PlanarCurve, Representation};
pub use trajectory::{FlowStatus, FlowTrajectory};
