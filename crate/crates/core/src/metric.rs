//! Hyperbolic-valued metrics and the geometry they induce.
//!
//! A [`DMetric`] assigns to each pair of points a distance in the closed
//! cone, `d(x, y) = d1(x, y)*e1 + d2(x, y)*e2`. Balls, intervals, Cauchy
//! tests and covers are all phrased through the order `⪯`/`≺`, which acts
//! on both idempotent coordinates at once. A distance that is incomparable
//! to a radius therefore never places a point inside a ball.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypnum::{hyp_mod, Bc, Hyp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("radius must be strictly positive in both coordinates")]
    InvalidRadius,
    #[error("interval requires lo ≺ hi")]
    InvalidInterval,
    #[error("tolerance or epsilon must be strictly positive in both coordinates")]
    InvalidEpsilon,
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("at least {required} points are required, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("grid needs at least two points per axis and lo ≺ hi")]
    InvalidGrid,
}

/// A distance valued in the hyperbolic numbers.
pub trait DMetric<P: ?Sized> {
    fn distance(&self, x: &P, y: &P) -> Hyp;

    fn d1(&self, x: &P, y: &P) -> f64 {
        self.distance(x, y).u()
    }

    fn d2(&self, x: &P, y: &P) -> f64 {
        self.distance(x, y).v()
    }
}

impl<P: ?Sized, F> DMetric<P> for F
where
    F: Fn(&P, &P) -> Hyp,
{
    fn distance(&self, x: &P, y: &P) -> Hyp {
        self(x, y)
    }
}

/// `|u_x - u_y|*e1 + |v_x - v_y|*e2` on the hyperbolic plane.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Canonical;

impl DMetric<Hyp> for Canonical {
    fn distance(&self, x: &Hyp, y: &Hyp) -> Hyp {
        d_canonical(*x, *y)
    }
}

pub fn d_canonical(x: Hyp, y: Hyp) -> Hyp {
    Hyp::new((x.u() - y.u()).abs(), (x.v() - y.v()).abs())
        .expect("coordinate difference overflowed")
}

/// The hyperbolic modulus of the difference, `|x - y|_k`, on bicomplex numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HypModulus;

impl DMetric<Bc> for HypModulus {
    fn distance(&self, x: &Bc, y: &Bc) -> Hyp {
        d_hypmod(*x, *y)
    }
}

pub fn d_hypmod(x: Bc, y: Bc) -> Hyp {
    hyp_mod(x - y)
}

/// A real-valued metric on the complex plane.
pub trait RealMetric {
    fn dist(&self, a: Complex64, b: Complex64) -> f64;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Euclidean;

impl RealMetric for Euclidean {
    fn dist(&self, a: Complex64, b: Complex64) -> f64 {
        (a - b).norm()
    }
}

/// `0` on equal points, `1` otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Discrete;

impl RealMetric for Discrete {
    fn dist(&self, a: Complex64, b: Complex64) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Taxicab;

impl RealMetric for Taxicab {
    fn dist(&self, a: Complex64, b: Complex64) -> f64 {
        (a.re - b.re).abs() + (a.im - b.im).abs()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Chebyshev;

impl RealMetric for Chebyshev {
    fn dist(&self, a: Complex64, b: Complex64) -> f64 {
        (a.re - b.re).abs().max((a.im - b.im).abs())
    }
}

/// Product of two real metrics, one per idempotent slot of a bicomplex number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Product<A, B> {
    pub first: A,
    pub second: B,
}

impl<A, B> Product<A, B> {
    pub fn new(first: A, second: B) -> Self {
        Product { first, second }
    }
}

impl<A: RealMetric, B: RealMetric> DMetric<Bc> for Product<A, B> {
    fn distance(&self, x: &Bc, y: &Bc) -> Hyp {
        d_product(&self.first, &self.second, *x, *y)
    }
}

pub fn d_product(d1: &impl RealMetric, d2: &impl RealMetric, x: Bc, y: Bc) -> Hyp {
    Hyp::new(d1.dist(x.z1(), y.z1()), d2.dist(x.z2(), y.z2()))
        .expect("component metric returned a non-finite value")
}

/// Spacing to the next representable double above `|x|`.
pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

fn within_ulps(lhs: f64, rhs: f64, slack_ulps: u32) -> bool {
    lhs <= rhs + f64::from(slack_ulps) * ulp(rhs)
}

/// Which defining clause of a hyperbolic metric a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// Nonnegativity and `d(x, y) = 0` exactly when `x = y`.
    Identity,
    Symmetry,
    Triangle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample<P> {
    pub clause: Clause,
    pub points: Vec<P>,
    /// The offending distance (or left-hand side of the triangle inequality).
    pub lhs: Hyp,
    /// The distance it was compared against, when there is one.
    pub rhs: Option<Hyp>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseVerdict<P> {
    pub checked: usize,
    pub failed: usize,
    pub first_counterexample: Option<Counterexample<P>>,
}

impl<P> Default for ClauseVerdict<P> {
    fn default() -> Self {
        ClauseVerdict { checked: 0, failed: 0, first_counterexample: None }
    }
}

impl<P> ClauseVerdict<P> {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Counterexample<P>) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(witness());
            }
        }
    }
}

/// Outcome of checking the three metric clauses on a finite sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport<P> {
    pub identity: ClauseVerdict<P>,
    pub symmetry: ClauseVerdict<P>,
    pub triangle: ClauseVerdict<P>,
}

impl<P> AxiomReport<P> {
    fn new() -> Self {
        AxiomReport {
            identity: ClauseVerdict::default(),
            symmetry: ClauseVerdict::default(),
            triangle: ClauseVerdict::default(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.identity.passed() && self.symmetry.passed() && self.triangle.passed()
    }

    /// The first counterexample found, in clause order.
    pub fn first_counterexample(&self) -> Option<&Counterexample<P>> {
        self.identity
            .first_counterexample
            .as_ref()
            .or(self.symmetry.first_counterexample.as_ref())
            .or(self.triangle.first_counterexample.as_ref())
    }
}

struct AxiomChecker<'a, P, M> {
    metric: &'a M,
    slack_ulps: u32,
    report: AxiomReport<P>,
}

impl<'a, P: Clone + PartialEq, M: DMetric<P>> AxiomChecker<'a, P, M> {
    fn identity(&mut self, x: &P, y: &P) {
        let d = self.metric.distance(x, y);
        let ok = d.is_nonnegative() && ((d == Hyp::ZERO) == (x == y));
        self.report.identity.record(ok, || Counterexample {
            clause: Clause::Identity,
            points: vec![x.clone(), y.clone()],
            lhs: d,
            rhs: None,
        });
    }

    fn symmetry(&mut self, x: &P, y: &P) {
        let dxy = self.metric.distance(x, y);
        let dyx = self.metric.distance(y, x);
        self.report.symmetry.record(dxy == dyx, || Counterexample {
            clause: Clause::Symmetry,
            points: vec![x.clone(), y.clone()],
            lhs: dxy,
            rhs: Some(dyx),
        });
    }

    // d(x, y) ⪯ d(x, z) + d(z, y)
    fn triangle(&mut self, x: &P, y: &P, z: &P) {
        let lhs = self.metric.distance(x, y);
        let a = self.metric.distance(x, z);
        let b = self.metric.distance(z, y);
        let rhs = Hyp::new(a.u() + b.u(), a.v() + b.v()).unwrap_or(Hyp::ZERO);
        let ok = within_ulps(lhs.u(), rhs.u(), self.slack_ulps)
            && within_ulps(lhs.v(), rhs.v(), self.slack_ulps);
        self.report.triangle.record(ok, || Counterexample {
            clause: Clause::Triangle,
            points: vec![x.clone(), y.clone(), z.clone()],
            lhs,
            rhs: Some(rhs),
        });
    }
}

/// Checks every pair and ordered triple drawn from `pts`.
///
/// The triangle inequality is allowed `slack_ulps` units in the last place of
/// the right-hand side; the other clauses are exact. Cost is cubic in the
/// number of points.
pub fn check_axioms<P, M>(
    metric: &M,
    pts: &[P],
    slack_ulps: u32,
) -> Result<AxiomReport<P>, MetricError>
where
    P: Clone + PartialEq,
    M: DMetric<P>,
{
    if pts.len() < 3 {
        return Err(MetricError::TooFewPoints { required: 3, got: pts.len() });
    }
    let mut c = AxiomChecker { metric, slack_ulps, report: AxiomReport::new() };
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i..] {
            c.identity(x, y);
            c.symmetry(x, y);
        }
    }
    for x in pts {
        for y in pts {
            for z in pts {
                c.triangle(x, y, z);
            }
        }
    }
    Ok(c.report)
}

/// Checks all three clauses on each supplied triple `(x, y, z)`: identity on
/// every pair (including the diagonal), symmetry on the three pairs, and the
/// triangle inequality for each of the three sides.
pub fn check_axioms_on_triples<'t, P, M, I>(metric: &M, triples: I, slack_ulps: u32) -> AxiomReport<P>
where
    P: Clone + PartialEq + 't,
    M: DMetric<P>,
    I: IntoIterator<Item = &'t (P, P, P)>,
{
    let mut c = AxiomChecker { metric, slack_ulps, report: AxiomReport::new() };
    for (x, y, z) in triples {
        for p in [x, y, z] {
            c.identity(p, p);
        }
        for (p, q) in [(x, y), (y, z), (x, z)] {
            c.identity(p, q);
            c.symmetry(p, q);
        }
        c.triangle(x, y, z);
        c.triangle(y, z, x);
        c.triangle(x, z, y);
    }
    c.report
}

/// Pointwise isometry test on a finite sample: `rho(f x, f y) = d(x, y)`.
pub fn is_isometry_on<X, Y, D, R>(f: impl Fn(&X) -> Y, d: &D, rho: &R, pts: &[X]) -> bool
where
    D: DMetric<X>,
    R: DMetric<Y>,
{
    let images: Vec<Y> = pts.iter().map(&f).collect();
    pts.iter().enumerate().all(|(i, x)| {
        pts.iter()
            .zip(&images)
            .skip(i)
            .all(|(y, fy)| rho.distance(&images[i], fy) == d.distance(x, y))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallKind {
    Open,
    Closed,
    Sphere,
}

/// A ball (or sphere) with hyperbolic radius in the open cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DBall<P> {
    center: P,
    radius: Hyp,
    kind: BallKind,
}

impl<P> DBall<P> {
    pub fn new(center: P, radius: Hyp, kind: BallKind) -> Result<Self, MetricError> {
        if !radius.is_positive() {
            return Err(MetricError::InvalidRadius);
        }
        Ok(DBall { center, radius, kind })
    }

    pub fn center(&self) -> &P {
        &self.center
    }

    pub fn radius(&self) -> Hyp {
        self.radius
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }

    pub fn contains<M: DMetric<P>>(&self, metric: &M, x: &P) -> bool {
        ball_membership(self, metric, x)
    }
}

/// Open: `d(x, c) ≺ r`. Closed: `d(x, c) ⪯ r`. Sphere: `d(x, c) = r`.
pub fn ball_membership<P, M: DMetric<P>>(ball: &DBall<P>, metric: &M, x: &P) -> bool {
    let d = metric.distance(x, &ball.center);
    match ball.kind {
        BallKind::Open => d.precedes(ball.radius),
        BallKind::Closed => d.precedes_eq(ball.radius),
        BallKind::Sphere => d == ball.radius,
    }
}

// Nearest double to `c + r` (or `c - r`) whose computed distance to `c` is
// exactly `r`. Falls back to the rounded value when no nearby double works.
fn exact_offset(c: f64, r: f64, upward: bool) -> f64 {
    let start = if upward { c + r } else { c - r };
    if (start - c).abs() == r {
        return start;
    }
    let (mut lo, mut hi) = (start, start);
    for _ in 0..8 {
        lo = lo.next_down();
        hi = hi.next_up();
        for cand in [lo, hi] {
            if (cand - c).abs() == r {
                return cand;
            }
        }
    }
    start
}

/// The four points at canonical distance exactly `r` from `center`:
/// `(u ± r_u, v ± r_v)`, listed `(+,+), (+,-), (-,+), (-,-)`.
pub fn sphere_vertices(center: Hyp, r: Hyp) -> Result<[Hyp; 4], MetricError> {
    if !r.is_positive() {
        return Err(MetricError::InvalidRadius);
    }
    let up = |c, s| exact_offset(c, s, true);
    let down = |c, s| exact_offset(c, s, false);
    let (u, v) = (center.u(), center.v());
    let make = |a: f64, b: f64| Hyp::new(a, b).map_err(|_| MetricError::InvalidRadius);
    Ok([
        make(up(u, r.u()), up(v, r.v()))?,
        make(up(u, r.u()), down(v, r.v()))?,
        make(down(u, r.u()), up(v, r.v()))?,
        make(down(u, r.u()), down(v, r.v()))?,
    ])
}

/// A point of the closed ball that is neither in the open ball nor on the
/// sphere: the midpoint of the right edge of the square, `(u + r_u, v)`.
pub fn edge_witness(center: Hyp, r: Hyp) -> Result<Hyp, MetricError> {
    let [corner, ..] = sphere_vertices(center, r)?;
    Hyp::new(corner.u(), center.v()).map_err(|_| MetricError::InvalidRadius)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    Open,
    Closed,
}

/// An order interval `(lo, hi)` or `[lo, hi]` with `lo ≺ hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DInterval {
    lo: Hyp,
    hi: Hyp,
    kind: IntervalKind,
}

impl DInterval {
    pub fn new(lo: Hyp, hi: Hyp, kind: IntervalKind) -> Result<Self, MetricError> {
        if !lo.precedes(hi) {
            return Err(MetricError::InvalidInterval);
        }
        Ok(DInterval { lo, hi, kind })
    }

    pub fn lo(&self) -> Hyp {
        self.lo
    }

    pub fn hi(&self) -> Hyp {
        self.hi
    }

    pub fn contains(&self, x: Hyp) -> bool {
        interval_contains(self, x)
    }
}

pub fn interval_contains(interval: &DInterval, x: Hyp) -> bool {
    match interval.kind {
        IntervalKind::Open => interval.lo.precedes(x) && x.precedes(interval.hi),
        IntervalKind::Closed => interval.lo.precedes_eq(x) && x.precedes_eq(interval.hi),
    }
}

/// Verdict for one epsilon of the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsVerdict {
    pub eps: Hyp,
    /// Least `N` with `d(x_n, x_m) ≺ eps` for all `n, m >= N` in the prefix.
    pub cauchy_from: usize,
    /// The Cauchy tail covers at least half of the prefix (`N <= len / 2`).
    pub is_cauchy: bool,
    /// Least `N` with `d(x_n, limit) ≺ eps` for all `n >= N`; `None` when the
    /// last term already fails or no limit was supplied.
    pub converges_from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeqReport<P> {
    pub per_eps: Vec<EpsVerdict>,
    pub limit_candidate: Option<P>,
    /// `d(x_n, limit)` for every term, empty when no limit was supplied.
    pub tail_distances: Vec<Hyp>,
}

impl<P> SeqReport<P> {
    pub fn is_cauchy_for_all(&self) -> bool {
        self.per_eps.iter().all(|v| v.is_cauchy)
    }

    pub fn converges_for_all(&self) -> bool {
        self.per_eps.iter().all(|v| v.converges_from.is_some())
    }
}

/// `tail[N] = sup { d(x_n, x_m) : n, m >= N }`, computed from the back.
fn tail_diameters<P, M: DMetric<P>>(metric: &M, xs: &[P]) -> Vec<Hyp> {
    let mut tail = vec![Hyp::ZERO; xs.len()];
    let mut acc = Hyp::ZERO;
    for n in (0..xs.len()).rev() {
        for m in n + 1..xs.len() {
            acc = acc.sup(metric.distance(&xs[n], &xs[m]));
        }
        tail[n] = acc;
    }
    tail
}

fn validate_eps(eps: &[Hyp]) -> Result<(), MetricError> {
    if eps.is_empty() || eps.iter().any(|e| !e.is_positive()) {
        return Err(MetricError::InvalidEpsilon);
    }
    Ok(())
}

/// Cauchy and convergence analysis of a finite prefix.
///
/// Each epsilon gets its own verdict; no global claim is made. The least
/// Cauchy index always exists on a finite prefix (the last term alone
/// qualifies), so a sequence is reported Cauchy for `eps` only when the
/// qualifying tail spans at least half of the prefix.
pub fn seq_analyze<P: Clone, M: DMetric<P>>(
    metric: &M,
    xs: &[P],
    limit: Option<&P>,
    eps_schedule: &[Hyp],
) -> Result<SeqReport<P>, MetricError> {
    validate_eps(eps_schedule)?;
    if xs.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let tail = tail_diameters(metric, xs);
    let tail_distances: Vec<Hyp> = match limit {
        Some(l) => xs.iter().map(|x| metric.distance(x, l)).collect(),
        None => Vec::new(),
    };
    let per_eps: Vec<EpsVerdict> = eps_schedule
        .iter()
        .map(|&eps| {
            let cauchy_from = tail.iter().position(|t| t.precedes(eps)).unwrap_or(xs.len() - 1);
            let converges_from = if tail_distances.is_empty() {
                None
            } else {
                let bad = tail_distances.iter().rposition(|t| !t.precedes(eps));
                match bad {
                    None => Some(0),
                    Some(i) if i + 1 < xs.len() => Some(i + 1),
                    Some(_) => None,
                }
            };
            EpsVerdict { eps, cauchy_from, is_cauchy: cauchy_from <= xs.len() / 2, converges_from }
        })
        .collect();
    let limit_candidate = match limit {
        Some(l) => Some(l.clone()),
        None if per_eps.iter().all(|v| v.is_cauchy) => xs.last().cloned(),
        None => None,
    };
    Ok(SeqReport { per_eps, limit_candidate, tail_distances })
}

/// Least Cauchy index of a prefix under a real-valued metric.
pub fn real_cauchy_from<P>(dist: impl Fn(&P, &P) -> f64, xs: &[P], eps: f64) -> usize {
    let mut acc = 0.0_f64;
    let mut first = xs.len().saturating_sub(1);
    for n in (0..xs.len()).rev() {
        for m in n + 1..xs.len() {
            acc = acc.max(dist(&xs[n], &xs[m]));
        }
        if acc < eps {
            first = n;
        }
    }
    first
}

/// The real-metric counterpart of [`EpsVerdict::is_cauchy`].
pub fn real_is_cauchy<P>(dist: impl Fn(&P, &P) -> f64, xs: &[P], eps: f64) -> bool {
    real_cauchy_from(dist, xs, eps) <= xs.len() / 2
}

/// Finite-prefix summability test.
///
/// Returns true when the partial sums of the step distances are monotone and
/// the steps from the cut (`len / 2`) onward sum to something `≺ tail_bound`.
/// By the triangle inequality every pair in that tail is then closer than
/// `tail_bound`, so [`seq_analyze`] reports the prefix Cauchy for every
/// epsilon `⪰ tail_bound`.
pub fn summable_check<P, M: DMetric<P>>(
    metric: &M,
    xs: &[P],
    tail_bound: Hyp,
) -> Result<bool, MetricError> {
    if !tail_bound.is_positive() {
        return Err(MetricError::InvalidEpsilon);
    }
    let cut = xs.len() / 2;
    let mut partial = Hyp::ZERO;
    let mut tail = Hyp::ZERO;
    for (i, w) in xs.windows(2).enumerate() {
        let step = metric.distance(&w[0], &w[1]);
        let Ok(next) = partial.checked_add(step) else { return Ok(false) };
        if !partial.precedes_eq(next) {
            return Ok(false);
        }
        partial = next;
        if i >= cut {
            tail = tail + step;
        }
    }
    Ok(tail.precedes(tail_bound))
}

/// Componentwise supremum of all pairwise distances in `set`.
pub fn diameter<P, M: DMetric<P>>(metric: &M, set: &[P]) -> Result<Hyp, MetricError> {
    if set.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let mut acc = Hyp::ZERO;
    for (i, x) in set.iter().enumerate() {
        for y in &set[i + 1..] {
            acc = acc.sup(metric.distance(x, y));
        }
    }
    Ok(acc)
}

/// Greedy farthest-point cover of a finite set by open balls of radius `eps`.
///
/// Returns indices into `set` of the chosen centers, starting with index 0.
/// Farthest is measured by the gauge `max(d1/eps1, d2/eps2)` to the nearest
/// center; ties go to the lowest index. Membership itself is decided by `≺`.
pub fn cover_greedy<P, M: DMetric<P>>(
    metric: &M,
    set: &[P],
    eps: Hyp,
) -> Result<Vec<usize>, MetricError> {
    if !eps.is_positive() {
        return Err(MetricError::InvalidEpsilon);
    }
    if set.is_empty() {
        return Ok(Vec::new());
    }
    let gauge = |d: Hyp| (d.u() / eps.u()).max(d.v() / eps.v());
    let mut centers = Vec::new();
    let mut covered = vec![false; set.len()];
    let mut nearest = vec![f64::INFINITY; set.len()];
    let mut next = 0;
    loop {
        centers.push(next);
        let c = &set[next];
        for (a, x) in set.iter().enumerate() {
            let d = metric.distance(x, c);
            covered[a] |= d.precedes(eps);
            nearest[a] = nearest[a].min(gauge(d));
        }
        let farthest = (0..set.len())
            .filter(|&a| !covered[a])
            .fold(None::<usize>, |best, a| match best {
                Some(b) if nearest[b] >= nearest[a] => Some(b),
                _ => Some(a),
            });
        match farthest {
            Some(a) => next = a,
            None => return Ok(centers),
        }
    }
}
