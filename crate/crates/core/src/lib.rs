//! Hyperbolic-valued (𝔻-valued) metric spaces.
//!
//! * [`hypnum`]: hyperbolic and bicomplex numbers in idempotent coordinates,
//!   the order cone and the partial order.
//! * [`metric`]: the [`DMetric`] abstraction, concrete metrics, balls,
//!   spheres, intervals, Cauchy analysis and covers.
//! * [`grid`]: finite product grids used as compact samples.
//! * [`fixedpoint`]: contraction, inexact, power and contractive solvers
//!   with computable error bounds.
//! * [`funcspace`]: sampled function spaces with the sup metric, boundedness,
//!   continuity probes and componentwise extreme values.

pub mod fixedpoint;
pub mod funcspace;
pub mod grid;
pub mod hypnum;
pub mod metric;

pub use fixedpoint::{
    estimate_lipschitz, solve_banach, solve_contractive_compact, solve_inexact, solve_power,
    ContractionReport, EpsSchedule, MapSpec, SolveError,
};
pub use funcspace::{
    check_bounded, continuity_modulus, evt_extrema, sigma_sup, uniform_limit_check, Attainers,
    ContinuityProbe, EvtReport, FuncError, ModulusProbe, SampledFunction, UniformLimitReport,
};
pub use grid::Grid;
pub use hypnum::{classify_cone, partial_cmp, sup_set, Bc, Cone, ConeClass, Extremum, Hyp, HypError, OrderRel};
pub use metric::{
    Canonical, DBall, DInterval, DMetric, HypModulus, MetricError, Product, SeqReport,
};
