//! Fixed-point solvers for self-maps of hyperbolic-valued metric spaces.
//!
//! All bounds are componentwise. For a contraction with constant `k`
//! (`0 ⪯ k ≺ 1`) started at `x0`, the iterates satisfy the a-priori bound
//!
//! ```text
//! d(x_n, x*) ⪯ k^n / (1 - k) * d(x0, T x0)
//! ```
//!
//! and the a-posteriori bound `d(x_n, x*) ⪯ k / (1 - k) * d(x_{n-1}, x_n)`,
//! which is what [`solve_banach`] uses to stop.

use serde::Serialize;
use thiserror::Error;

use crate::grid::Grid;
use crate::hypnum::Hyp;
use crate::metric::DMetric;

/// Iteration cap for the reference solve inside [`solve_inexact`].
const REFERENCE_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError<P> {
    #[error("map is not a contraction (declared constant {k:?}); need 0 ⪯ k ≺ 1")]
    NotAContraction { k: Option<Hyp> },
    #[error("no convergence after {} iterations", report.iterations)]
    NoConvergence { report: Box<ContractionReport<P>> },
    #[error("step {step}: perturbation {gap:?} exceeds schedule term {eps:?}")]
    ScheduleViolated { step: usize, gap: Hyp, eps: Hyp },
    #[error("schedule term {eps:?} at step {step} is not in the closed cone")]
    InvalidSchedule { step: usize, eps: Hyp },
    #[error("fixed point of the power map moves under the map itself by {mismatch:?}")]
    PowerFixedPointMismatch { mismatch: Hyp, report: Box<ContractionReport<P>> },
    #[error("map is not contractive on a sampled pair")]
    NotContractive { x: P, y: P },
    #[error("map sends a grid point outside the grid hull")]
    NotSelfMap { x: P, image: P },
    #[error("residual {residual:?} exceeds the grid bound {bound:?}")]
    GridTooCoarse { residual: Hyp, bound: Hyp },
    #[error("pair {index} has zero distance in some component")]
    DegeneratePair { index: usize },
    #[error("no sample pairs supplied")]
    EmptyPairs,
    #[error("tolerance {0:?} must be strictly positive in both coordinates")]
    InvalidTolerance(Hyp),
    #[error("power must be at least 1")]
    InvalidPower,
}

/// A self-map `T: P -> P` with an optional declared Lipschitz constant.
#[derive(Debug, Clone)]
pub struct MapSpec<F> {
    map: F,
    lipschitz: Option<Hyp>,
}

impl<F> MapSpec<F> {
    pub fn new(map: F) -> Self {
        MapSpec { map, lipschitz: None }
    }

    pub fn with_lipschitz(mut self, k: Hyp) -> Self {
        self.lipschitz = Some(k);
        self
    }

    pub fn lipschitz(&self) -> Option<Hyp> {
        self.lipschitz
    }

    pub fn apply<P>(&self, x: &P) -> P
    where
        F: Fn(&P) -> P,
    {
        (self.map)(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport<P> {
    pub fixed_point: P,
    pub iterations: usize,
    /// `d(x*, T x*)` at the returned point.
    pub residual: Hyp,
    /// `k^n / (1 - k) * d(x0, T x0)` for each recorded iterate; the first
    /// entry is the potential `d(x0, T x0) / (1 - k)`.
    pub apriori_bounds: Vec<Hyp>,
    /// `k / (1 - k) * d(x_{n-1}, x_n)` at the last step.
    pub aposteriori_bound: Option<Hyp>,
    pub trace: Vec<P>,
    /// Independently solved fixed point the trace is measured against.
    pub reference_point: Option<P>,
    pub reference_distances: Vec<Hyp>,
    /// Start of the monotone-decrease probe (contractive solves only).
    pub probe_start: Option<P>,
    /// `d(T^n x, x*)` along the probe.
    pub probe_distances: Vec<Hyp>,
    pub grid_bound: Option<Hyp>,
    /// Set when one output coordinate was seen to depend on the other input
    /// coordinate.
    pub component_coupling: bool,
}

impl<P> ContractionReport<P> {
    fn new(fixed_point: P, trace: Vec<P>) -> Self {
        ContractionReport {
            fixed_point,
            iterations: trace.len().saturating_sub(1),
            residual: Hyp::ZERO,
            apriori_bounds: Vec::new(),
            aposteriori_bound: None,
            trace,
            reference_point: None,
            reference_distances: Vec::new(),
            probe_start: None,
            probe_distances: Vec::new(),
            grid_bound: None,
            component_coupling: false,
        }
    }
}

/// Perturbation budget `eps_n` for step `n >= 1` of an inexact iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsSchedule {
    Zero,
    /// `scale / n^power`.
    InversePower { scale: Hyp, power: f64 },
    /// `first * ratio^(n - 1)`.
    Geometric { first: Hyp, ratio: f64 },
    /// Explicit terms for steps `1..=len`; the last term repeats afterwards.
    Table(Vec<Hyp>),
}

impl EpsSchedule {
    /// `eps_n = (1/n^2, 1/n^2)`.
    pub fn inverse_square() -> Self {
        EpsSchedule::InversePower { scale: Hyp::ONE, power: 2.0 }
    }

    pub fn term(&self, n: usize) -> Hyp {
        let n = n.max(1);
        match self {
            EpsSchedule::Zero => Hyp::ZERO,
            EpsSchedule::InversePower { scale, power } => scale.scale((n as f64).powf(-power)),
            EpsSchedule::Geometric { first, ratio } => first.scale(ratio.powi(exponent(n - 1))),
            EpsSchedule::Table(terms) => terms.get(n - 1).or(terms.last()).copied().unwrap_or(Hyp::ZERO),
        }
    }
}

fn exponent(n: usize) -> i32 {
    i32::try_from(n).unwrap_or(i32::MAX)
}

fn contraction_constant<P>(k: Option<Hyp>) -> Result<Hyp, SolveError<P>> {
    match k {
        Some(k) if k.is_nonnegative() && k.precedes(Hyp::ONE) => Ok(k),
        other => Err(SolveError::NotAContraction { k: other }),
    }
}

fn positive_tolerance<P>(tol: Hyp) -> Result<Hyp, SolveError<P>> {
    if tol.is_positive() {
        Ok(tol)
    } else {
        Err(SolveError::InvalidTolerance(tol))
    }
}

/// Componentwise supremum of `d_i(Tx, Ty) / d_i(x, y)` over the pairs.
///
/// This is a lower estimate of the least valid Lipschitz constant, which is
/// itself taken componentwise.
pub fn estimate_lipschitz<P, F, M>(
    map: &MapSpec<F>,
    pairs: &[(P, P)],
    metric: &M,
) -> Result<Hyp, SolveError<P>>
where
    F: Fn(&P) -> P,
    M: DMetric<P>,
{
    if pairs.is_empty() {
        return Err(SolveError::EmptyPairs);
    }
    let mut k = Hyp::ZERO;
    for (index, (x, y)) in pairs.iter().enumerate() {
        let d = metric.distance(x, y);
        if d.u() == 0.0 || d.v() == 0.0 {
            return Err(SolveError::DegeneratePair { index });
        }
        let dt = metric.distance(&map.apply(x), &map.apply(y));
        let ratio = Hyp::new(dt.u() / d.u(), dt.v() / d.v())
            .map_err(|_| SolveError::DegeneratePair { index })?;
        k = k.sup(ratio);
    }
    Ok(k)
}

/// Picard iteration `x_{n+1} = T x_n` for a declared contraction.
///
/// Stops at the first `n` with `k / (1 - k) * d(x_{n-1}, x_n) ≺ tol`, which
/// guarantees `d(x_n, x*) ≺ tol`. A zero component of `k` is accepted; that
/// coordinate settles after one step.
pub fn solve_banach<P, F, M>(
    map: &MapSpec<F>,
    x0: P,
    metric: &M,
    tol: Hyp,
    max_iter: usize,
) -> Result<ContractionReport<P>, SolveError<P>>
where
    P: Clone,
    F: Fn(&P) -> P,
    M: DMetric<P>,
{
    let k = contraction_constant(map.lipschitz)?;
    let tol = positive_tolerance(tol)?;
    let inv_gap = (Hyp::ONE - k).inv().expect("1 - k is positive when k ≺ 1");
    let post_factor = k * inv_gap;

    let mut x = x0;
    let mut next = map.apply(&x);
    let potential = metric.distance(&x, &next) * inv_gap;
    let mut trace = vec![x.clone()];
    let mut bounds = vec![potential];
    let mut post = None;
    let mut n = 0;
    let converged = loop {
        if n == max_iter {
            break false;
        }
        n += 1;
        let step = metric.distance(&x, &next);
        x = next;
        trace.push(x.clone());
        bounds.push(k.powi(exponent(n)) * potential);
        let bound = post_factor * step;
        post = Some(bound);
        next = map.apply(&x);
        if bound.precedes(tol) {
            break true;
        }
    };

    let residual = metric.distance(&x, &next);
    let mut report = ContractionReport::new(x, trace);
    report.residual = residual;
    report.apriori_bounds = bounds;
    report.aposteriori_bound = post;
    if converged {
        Ok(report)
    } else {
        Err(SolveError::NoConvergence { report: Box::new(report) })
    }
}

/// Iterates `y_n` with `d(y_n, T y_{n-1}) ⪯ eps_n` until `y_n` is within
/// `tol` of the fixed point.
///
/// `perturb(n, y_{n-1}, T y_{n-1}, eps_n)` produces `y_n`; every step is
/// checked against the schedule. The fixed point is obtained separately with
/// [`solve_banach`] at a thousandth of `tol` and reported as
/// `reference_point`, with `reference_distances[n] = d(y_n, x*)`.
#[allow(clippy::too_many_arguments)]
pub fn solve_inexact<P, F, M, G>(
    map: &MapSpec<F>,
    y0: P,
    schedule: &EpsSchedule,
    mut perturb: G,
    metric: &M,
    tol: Hyp,
    n_max: usize,
) -> Result<ContractionReport<P>, SolveError<P>>
where
    P: Clone,
    F: Fn(&P) -> P,
    M: DMetric<P>,
    G: FnMut(usize, &P, &P, Hyp) -> P,
{
    contraction_constant::<P>(map.lipschitz)?;
    let tol = positive_tolerance(tol)?;
    let reference =
        solve_banach(map, y0.clone(), metric, tol.scale(1e-3), REFERENCE_MAX_ITER)?.fixed_point;

    let mut y = y0;
    let mut trace = vec![y.clone()];
    let mut distances = vec![metric.distance(&y, &reference)];
    let mut converged = distances[0].precedes(tol);
    let mut n = 0;
    while !converged && n < n_max {
        n += 1;
        let ty = map.apply(&y);
        let eps = schedule.term(n);
        if !eps.is_nonnegative() {
            return Err(SolveError::InvalidSchedule { step: n, eps });
        }
        let next = perturb(n, &y, &ty, eps);
        let gap = metric.distance(&next, &ty);
        if !gap.precedes_eq(eps) {
            return Err(SolveError::ScheduleViolated { step: n, gap, eps });
        }
        y = next;
        let dist = metric.distance(&y, &reference);
        trace.push(y.clone());
        distances.push(dist);
        converged = dist.precedes(tol);
    }

    let residual = metric.distance(&y, &map.apply(&y));
    let mut report = ContractionReport::new(y, trace);
    report.residual = residual;
    report.reference_point = Some(reference);
    report.reference_distances = distances;
    if converged {
        Ok(report)
    } else {
        Err(SolveError::NoConvergence { report: Box::new(report) })
    }
}

/// Solves `T^N x = x` with [`solve_banach`] and checks that the result is a
/// fixed point of `T` itself, within `tol`.
///
/// The Lipschitz constant of `T^N` is `power_lipschitz` when given, else
/// `k^N` from the constant declared on `map`.
#[allow(clippy::too_many_arguments)]
pub fn solve_power<P, F, M>(
    map: &MapSpec<F>,
    power: usize,
    power_lipschitz: Option<Hyp>,
    x0: P,
    metric: &M,
    tol: Hyp,
    max_iter: usize,
) -> Result<ContractionReport<P>, SolveError<P>>
where
    P: Clone,
    F: Fn(&P) -> P,
    M: DMetric<P>,
{
    if power == 0 {
        return Err(SolveError::InvalidPower);
    }
    let k_power = power_lipschitz
        .or_else(|| map.lipschitz.map(|k| k.powi(exponent(power))))
        .ok_or(SolveError::NotAContraction { k: None })?;
    let composite = MapSpec::new(|x: &P| {
        let mut y = map.apply(x);
        for _ in 1..power {
            y = map.apply(&y);
        }
        y
    })
    .with_lipschitz(k_power);
    let report = solve_banach(&composite, x0, metric, tol, max_iter)?;
    let mismatch = metric.distance(&map.apply(&report.fixed_point), &report.fixed_point);
    if !mismatch.precedes_eq(tol) {
        return Err(SolveError::PowerFixedPointMismatch { mismatch, report: Box::new(report) });
    }
    Ok(report)
}

// d(Tx, Ty) ≺ d(x, y), read per coordinate: a coordinate at distance zero
// must stay at zero, any other must shrink strictly.
fn shrinks(before: Hyp, after: Hyp) -> bool {
    let ok = |b: f64, a: f64| if b > 0.0 { a < b } else { a == 0.0 };
    ok(before.u(), after.u()) && ok(before.v(), after.v())
}

fn sample_pairs(grid: &Grid) -> Vec<(usize, usize)> {
    let n = grid.per_axis();
    let len = grid.len();
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i * n + i, (i + 1) * n + i + 1)).collect();
    pairs.extend((0..n - 1).map(|i| (i * n, (i + 1) * n)));
    pairs.extend((0..n - 1).map(|j| (j, j + 1)));
    pairs.extend((0..4096u64).filter_map(|s| {
        let a = (s.wrapping_mul(2_654_435_761) % len as u64) as usize;
        let b = (s.wrapping_mul(40_503).wrapping_add(len as u64 / 2 + 1) % len as u64) as usize;
        (a != b).then_some((a, b))
    }));
    pairs
}

fn detect_coupling<F: Fn(&Hyp) -> Hyp>(map: &MapSpec<F>, grid: &Grid) -> bool {
    let n = grid.per_axis();
    let probes = [0, n / 3, n / 2, n - 2];
    probes.iter().any(|&i| {
        probes.iter().any(|&j| {
            let x = grid.point(i * n + j);
            let shift_u = grid.point((i + 1) * n + j);
            let shift_v = grid.point(i * n + j + 1);
            let (tx, tu, tv) = (map.apply(&x), map.apply(&shift_u), map.apply(&shift_v));
            tx.v() != tu.v() || tx.u() != tv.u()
        })
    })
}

/// Fixed point of a contractive (not necessarily contraction) self-map of a
/// finite grid in the hyperbolic plane.
///
/// Checks that `T` maps the grid into its hull and shrinks sampled pairs,
/// minimizes `psi(x) = d(x, T x)` separately in each coordinate, iterates
/// from the combined minimizer and requires the final residual to be within
/// one grid spacing. A second run from the grid corner farthest from the
/// result must bring `d(T^n x, x*)` down strictly in every coordinate that is
/// still above the spacing.
pub fn solve_contractive_compact<F, M>(
    map: &MapSpec<F>,
    grid: &Grid,
    metric: &M,
    n_max: usize,
) -> Result<ContractionReport<Hyp>, SolveError<Hyp>>
where
    F: Fn(&Hyp) -> Hyp,
    M: DMetric<Hyp>,
{
    let h = grid.spacing();
    let images: Vec<Hyp> = grid.points().map(|x| map.apply(&x)).collect();
    if let Some((i, &image)) = images.iter().enumerate().find(|(_, y)| !grid.hull_contains(**y)) {
        return Err(SolveError::NotSelfMap { x: grid.point(i), image });
    }
    for (a, b) in sample_pairs(grid) {
        let (x, y) = (grid.point(a), grid.point(b));
        if !shrinks(metric.distance(&x, &y), metric.distance(&images[a], &images[b])) {
            return Err(SolveError::NotContractive { x, y });
        }
    }

    let (mut best_u, mut best_v) = ((f64::INFINITY, 0), (f64::INFINITY, 0));
    for (i, x) in grid.points().enumerate() {
        let psi = metric.distance(&x, &images[i]);
        if psi.u() < best_u.0 {
            best_u = (psi.u(), i);
        }
        if psi.v() < best_v.0 {
            best_v = (psi.v(), i);
        }
    }
    let start = Hyp::new(grid.point(best_u.1).u(), grid.point(best_v.1).v())
        .expect("grid coordinates are finite");

    let settle = h.scale(1e-9);
    let mut x = start;
    let mut trace = vec![x];
    for _ in 0..n_max {
        let next = map.apply(&x);
        let step = metric.distance(&x, &next);
        x = next;
        trace.push(x);
        if step.precedes_eq(settle) {
            break;
        }
    }
    let fixed = x;
    let residual = metric.distance(&fixed, &map.apply(&fixed));
    if !residual.precedes_eq(h) {
        return Err(SolveError::GridTooCoarse { residual, bound: h });
    }

    let (lo, hi) = (grid.lo(), grid.hi());
    let corners = [lo, hi, Hyp::new(lo.u(), hi.v()).unwrap(), Hyp::new(hi.u(), lo.v()).unwrap()];
    let far = |c: &Hyp| {
        let d = metric.distance(c, &fixed);
        d.u().max(d.v())
    };
    let probe_start = corners
        .into_iter()
        .fold(corners[0], |best, c| if far(&c) > far(&best) { c } else { best });
    let mut p = probe_start;
    let mut dist = metric.distance(&p, &fixed);
    let mut probe_distances = vec![dist];
    for _ in 0..n_max {
        if dist.precedes_eq(h) {
            break;
        }
        let next = map.apply(&p);
        let next_dist = metric.distance(&next, &fixed);
        let decreased = |before: f64, after: f64, spacing: f64| before <= spacing || after < before;
        if !(decreased(dist.u(), next_dist.u(), h.u()) && decreased(dist.v(), next_dist.v(), h.v())) {
            return Err(SolveError::NotContractive { x: p, y: fixed });
        }
        p = next;
        dist = next_dist;
        probe_distances.push(dist);
    }

    let mut report = ContractionReport::new(fixed, trace);
    report.residual = residual;
    report.grid_bound = Some(h);
    report.probe_start = Some(probe_start);
    report.probe_distances = probe_distances;
    report.component_coupling = detect_coupling(map, grid);
    Ok(report)
}
