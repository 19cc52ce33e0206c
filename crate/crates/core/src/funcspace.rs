//! Sampled function spaces with the sup metric.
//!
//! Functions are finite samples over an ordered domain. Every supremum is an
//! exact finite maximum, so the sup metric, boundedness witnesses and the
//! componentwise extreme values are computed without approximation. The
//! declared resolution is carried along to bound continuity probes.

use serde::Serialize;
use thiserror::Error;

use crate::grid::Grid;
use crate::hypnum::{sup_set, Extremum, Hyp};
use crate::metric::{diameter, DMetric, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FuncError {
    #[error("sampled function needs at least one domain point")]
    EmptyDomain,
    #[error("domain has {domain} points but {values} values were given")]
    LengthMismatch { domain: usize, values: usize },
    #[error("domain point {index} repeats an earlier point")]
    DuplicatePoint { index: usize },
    #[error("functions are sampled on different domains")]
    DomainMismatch,
    #[error("point is not in the sampled domain")]
    PointNotInDomain,
    #[error("no tested radius keeps the image inside the epsilon ball")]
    NotFound,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A function known through its values on a finite, duplicate-free domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction<X, Y> {
    domain: Vec<X>,
    values: Vec<Y>,
    resolution: Hyp,
}

impl<X: PartialEq, Y> SampledFunction<X, Y> {
    /// Checks lengths and distinctness (quadratic in the domain size).
    pub fn new(domain: Vec<X>, values: Vec<Y>, resolution: Hyp) -> Result<Self, FuncError> {
        if domain.is_empty() {
            return Err(FuncError::EmptyDomain);
        }
        if domain.len() != values.len() {
            return Err(FuncError::LengthMismatch { domain: domain.len(), values: values.len() });
        }
        for (index, x) in domain.iter().enumerate() {
            if domain[..index].contains(x) {
                return Err(FuncError::DuplicatePoint { index });
            }
        }
        Ok(SampledFunction { domain, values, resolution })
    }

    pub fn from_fn(domain: Vec<X>, f: impl Fn(&X) -> Y, resolution: Hyp) -> Result<Self, FuncError> {
        let values = domain.iter().map(f).collect();
        SampledFunction::new(domain, values, resolution)
    }
}

impl<Y> SampledFunction<Hyp, Y> {
    /// Samples `f` on every grid point; the grid spacing is the resolution.
    pub fn on_grid(grid: &Grid, f: impl Fn(&Hyp) -> Y) -> Self {
        let domain: Vec<Hyp> = grid.points().collect();
        let values = domain.iter().map(f).collect();
        SampledFunction { domain, values, resolution: grid.spacing() }
    }
}

impl<X, Y> SampledFunction<X, Y> {
    pub fn domain(&self) -> &[X] {
        &self.domain
    }

    pub fn values(&self) -> &[Y] {
        &self.values
    }

    pub fn resolution(&self) -> Hyp {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    fn index_of(&self, x: &X) -> Result<usize, FuncError>
    where
        X: PartialEq,
    {
        self.domain.iter().position(|d| d == x).ok_or(FuncError::PointNotInDomain)
    }
}

/// `sigma(f, g) = sup_x rho(f(x), g(x))`.
pub fn sigma_sup<X, Y, R>(
    f: &SampledFunction<X, Y>,
    g: &SampledFunction<X, Y>,
    rho: &R,
) -> Result<Hyp, FuncError>
where
    X: PartialEq,
    R: DMetric<Y>,
{
    if f.domain != g.domain {
        return Err(FuncError::DomainMismatch);
    }
    let dists: Vec<Hyp> = f.values.iter().zip(&g.values).map(|(a, b)| rho.distance(a, b)).collect();
    Ok(sup_set(&dists, Extremum::Sup).expect("sampled functions are nonempty"))
}

/// Boundedness witness: the diameter of the range.
pub fn check_bounded<X, Y, R: DMetric<Y>>(f: &SampledFunction<X, Y>, rho: &R) -> Hyp {
    diameter(rho, &f.values).expect("sampled functions are nonempty")
}

/// Domain points attaining each projection of the extreme values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attainers<X> {
    /// `p1(f(a)) = M1`.
    pub sup_u: X,
    /// `p2(f(b)) = M2`.
    pub sup_v: X,
    /// `p1(f(c)) = m1`.
    pub inf_u: X,
    /// `p2(f(d)) = m2`.
    pub inf_v: X,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvtReport<X> {
    pub sup: Hyp,
    pub inf: Hyp,
    pub attainers: Attainers<X>,
    /// A single domain point with `f(x) = sup`, if any.
    pub sup_attained_at: Option<X>,
    pub inf_attained_at: Option<X>,
    /// Both the supremum and the infimum are values of `f`.
    pub jointly_attained: bool,
}

/// Componentwise extreme values of a hyperbolic-valued sample.
///
/// Each projection of the supremum and infimum is attained (first index
/// wins), but `f` itself need not take the value `sup` or `inf` anywhere;
/// `jointly_attained` records whether it does.
pub fn evt_extrema<X: Clone>(f: &SampledFunction<X, Hyp>) -> EvtReport<X> {
    let sup = sup_set(&f.values, Extremum::Sup).expect("sampled functions are nonempty");
    let inf = sup_set(&f.values, Extremum::Inf).expect("sampled functions are nonempty");
    let find = |pred: &dyn Fn(&Hyp) -> bool| f.values.iter().position(pred);
    let at = |i: Option<usize>| f.domain[i.expect("extreme coordinate is a sampled value")].clone();
    let attainers = Attainers {
        sup_u: at(find(&|y| y.u() == sup.u())),
        sup_v: at(find(&|y| y.v() == sup.v())),
        inf_u: at(find(&|y| y.u() == inf.u())),
        inf_v: at(find(&|y| y.v() == inf.v())),
    };
    let sup_attained_at = find(&|y| *y == sup).map(|i| f.domain[i].clone());
    let inf_attained_at = find(&|y| *y == inf).map(|i| f.domain[i].clone());
    let jointly_attained = sup_attained_at.is_some() && inf_attained_at.is_some();
    EvtReport { sup, inf, attainers, sup_attained_at, inf_attained_at, jointly_attained }
}

/// Candidate radii for [`continuity_modulus`]: `start / 2^j`, tested while
/// both coordinates stay above the sample resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusProbe {
    /// First candidate; defaults to the domain diameter.
    pub start: Option<Hyp>,
    pub max_halvings: u32,
}

impl Default for ModulusProbe {
    fn default() -> Self {
        ModulusProbe { start: None, max_halvings: 64 }
    }
}

/// Largest tested `delta` with `f(B(alpha; delta)) ⊆ B(f(alpha); eps)` on
/// the sample, i.e. `rho(f(x), f(alpha)) ≺ eps` whenever `d(x, alpha) ≺ delta`.
pub fn continuity_modulus<X, Y, D, R>(
    f: &SampledFunction<X, Y>,
    alpha: &X,
    eps: Hyp,
    d: &D,
    rho: &R,
    probe: &ModulusProbe,
) -> Result<Hyp, FuncError>
where
    X: PartialEq,
    D: DMetric<X>,
    R: DMetric<Y>,
{
    if !eps.is_positive() {
        return Err(MetricError::InvalidEpsilon.into());
    }
    let a = f.index_of(alpha)?;
    let fa = &f.values[a];
    let dist_in: Vec<Hyp> = f.domain.iter().map(|x| d.distance(x, alpha)).collect();
    let dist_out: Vec<Hyp> = f.values.iter().map(|y| rho.distance(y, fa)).collect();

    let start = match probe.start {
        Some(s) => s,
        None => {
            let diam = diameter(d, &f.domain)?;
            let fill = |c: f64| if c > 0.0 { c } else { 1.0 };
            Hyp::new(fill(diam.u()), fill(diam.v())).expect("diameter is finite")
        }
    };
    if !start.is_positive() {
        return Err(MetricError::InvalidEpsilon.into());
    }
    let mut delta = start;
    for _ in 0..=probe.max_halvings {
        if !f.resolution.precedes(delta) {
            break;
        }
        let ok = dist_in
            .iter()
            .zip(&dist_out)
            .all(|(din, dout)| !din.precedes(delta) || dout.precedes(eps));
        if ok {
            return Ok(delta);
        }
        delta = delta.scale(0.5);
    }
    Err(FuncError::NotFound)
}

/// Continuity probe applied to every member of a sequence and its limit.
#[derive(Debug, Clone)]
pub struct ContinuityProbe<'a, X, D> {
    pub domain_metric: &'a D,
    pub eps: Hyp,
    pub alphas: Vec<X>,
    pub probe: ModulusProbe,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformLimitReport {
    /// `sigma(f_n, f)` for each member.
    pub sup_distances: Vec<Hyp>,
    /// For each epsilon, the least index `N` with `sigma(f_n, f) ≺ eps` for
    /// every `n >= N` in the prefix, or `None`.
    pub per_eps: Vec<(Hyp, Option<usize>)>,
    /// Whether each member passes the continuity probe at every alpha.
    pub members_continuous: Vec<bool>,
    pub limit_continuous: bool,
}

/// Uniform convergence of a sampled sequence `f_n -> f` under `sigma`.
pub fn uniform_limit_check<X, Y, D, R>(
    fs: &[SampledFunction<X, Y>],
    f: &SampledFunction<X, Y>,
    rho: &R,
    eps_schedule: &[Hyp],
    continuity: &ContinuityProbe<'_, X, D>,
) -> Result<UniformLimitReport, FuncError>
where
    X: PartialEq,
    D: DMetric<X>,
    R: DMetric<Y>,
{
    if eps_schedule.is_empty() || eps_schedule.iter().any(|e| !e.is_positive()) {
        return Err(MetricError::InvalidEpsilon.into());
    }
    let sup_distances =
        fs.iter().map(|fn_| sigma_sup(fn_, f, rho)).collect::<Result<Vec<_>, _>>()?;
    let per_eps = eps_schedule
        .iter()
        .map(|&eps| {
            let from = match sup_distances.iter().rposition(|s| !s.precedes(eps)) {
                None => Some(0),
                Some(i) if i + 1 < fs.len() => Some(i + 1),
                Some(_) => None,
            };
            (eps, if fs.is_empty() { None } else { from })
        })
        .collect();
    let continuous = |g: &SampledFunction<X, Y>| -> Result<bool, FuncError> {
        for alpha in &continuity.alphas {
            match continuity_modulus(g, alpha, continuity.eps, continuity.domain_metric, rho, &continuity.probe) {
                Ok(_) => {}
                Err(FuncError::NotFound) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        Ok(true)
    };
    let members_continuous = fs.iter().map(continuous).collect::<Result<Vec<_>, _>>()?;
    let limit_continuous = continuous(f)?;
    Ok(UniformLimitReport { sup_distances, per_eps, members_continuous, limit_continuous })
}
