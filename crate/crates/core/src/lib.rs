//! Spectral laboratory for thermostat flows on the unit circle bundle of a
//! closed oriented surface.
//!
//! The model surface is a flat-based torus with a conformal metric
//! `g = e^{2u}(dx^2 + dy^2)`. Its unit circle bundle is sampled on a periodic
//! `(x, y, phi)` grid and carries the frame vector fields `X` (geodesic),
//! `H` (horizontal) and `V` (vertical/fiber). All derivatives are spectral,
//! so every operator identity in the library holds to near machine precision
//! on band-limited data.
//!
//! Layout:
//! * [`grid`], [`field`], [`spectral`] — periodic charts, sampled fields and
//!   the FFT calculus behind every derivative.
//! * [`surface`] — metrics, one-forms, degree-m differentials, curvature and
//!   Hodge operators on the base.
//! * [`bundle`] — the circle bundle: `X`, `H`, `V`, vertical Fourier
//!   decomposition, volume-form calculus.
//! * [`thermostat`] — flows `F = X + lambda V` built from a triple
//!   `(g, A, theta)`, the projectivity criterion and hypothesis checkers.
//! * [`transport`] — the quasiconformal/transport correspondence: `p, q, r`
//!   fields, Beltrami coefficients, transport residuals and a least-squares
//!   transport solver.
//! * [`pestov`] — the L^2 energy identity and the chain of inner-product
//!   identities behind the vanishing argument.
//! * [`io`] — binary/CSV field export and import.
//! * [`random`] — seeded band-limited test-field generators.

pub mod bundle;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod pestov;
pub mod random;
pub mod spectral;
pub mod surface;
pub mod thermostat;
pub mod transport;

pub use error::Error;
pub use field::{Field2, FieldSm};
pub use grid::TorusChart;

/// Tolerance ladder used across the test and scenario suites.
///
/// The ladder is tied to double precision and the library band-limit
/// convention (test data band-limited to a quarter of the grid size per
/// axis). A failure at a given rung localizes the faulty operator: exact
/// algebra should sit at `MACHINE`, single spectral identities at `EXACT`,
/// composed scenarios at `SCENARIO` and randomized batteries at `BATTERY`.
pub mod tol {
    /// Pointwise algebra and exactly representable identities.
    pub const MACHINE: f64 = 1e-12;
    /// Single spectral identities on clean band-limited data.
    pub const EXACT: f64 = 1e-10;
    /// Composed single-scenario residuals.
    pub const SCENARIO: f64 = 1e-8;
    /// Randomized multi-draw batteries.
    pub const BATTERY: f64 = 1e-6;
}
