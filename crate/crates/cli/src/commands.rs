//! Subcommand implementations. Each returns the report to print.

use dmetric::fixedpoint::SolveError;
use dmetric::metric::{
    check_axioms_on_triples, edge_witness, sphere_vertices, AxiomReport, BallKind, Chebyshev,
    Discrete, Euclidean, RealMetric, Taxicab,
};
use dmetric::{
    estimate_lipschitz, evt_extrema, solve_banach, solve_contractive_compact, solve_inexact,
    solve_power, Bc, Canonical, DBall, DMetric, EpsSchedule, Grid, Hyp, HypModulus, MapSpec,
    Product, SampledFunction,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::mapexpr::MapExpr;
use crate::report::RunReport;
use crate::{CheckMetricArgs, Demo, DemoArgs, FixedpointArgs, Format, Mode, Perturb};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Box<RunReport>),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn numeric(report: RunReport, kind: &str, message: impl Into<String>) -> CliError {
    CliError::Numeric(Box::new(report.with_error(kind, message)))
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn parse_numbers(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let nums: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match nums {
        Ok(v) if v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => usage(format!("{what}: expected finite comma-separated numbers, got `{s}`")),
    }
}

/// `u,v` in idempotent coordinates.
pub fn parse_hyp(s: &str, what: &str) -> Result<Hyp, CliError> {
    match parse_numbers(s, what)?[..] {
        [u, v] => Ok(Hyp::new(u, v).expect("checked finite")),
        _ => usage(format!("{what}: expected `u,v`, got `{s}`")),
    }
}

/// `t` (both coordinates) or `u,v`.
pub fn parse_tol(s: &str) -> Result<Hyp, CliError> {
    let tol = match parse_numbers(s, "--tol")?[..] {
        [t] => Hyp::splat(t).expect("checked finite"),
        [u, v] => Hyp::new(u, v).expect("checked finite"),
        _ => return usage(format!("--tol: expected `t` or `u,v`, got `{s}`")),
    };
    if !tol.is_positive() {
        return usage("--tol must be positive in both coordinates");
    }
    Ok(tol)
}

/// `lo,hi,n`: the square grid of `[lo, hi]` with `n` points per axis.
pub fn parse_grid(s: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let [lo, hi, n] = parts[..] else {
        return usage(format!("--grid: expected `lo,hi,n`, got `{s}`"));
    };
    let bounds = parse_numbers(&format!("{lo},{hi}"), "--grid")?;
    let n: usize = n.trim().parse().map_err(|_| CliError::Usage(format!("--grid: bad point count `{n}`")))?;
    Grid::square(bounds[0], bounds[1], n)
        .or_else(|_| usage("--grid: need lo < hi and at least 2 points per axis"))
}

// Pairs around `center` at several scales, used to estimate Lipschitz ratios.
fn probe_pairs(center: Hyp) -> Vec<(Hyp, Hyp)> {
    const SHAPES: [(f64, f64, f64, f64); 3] =
        [(0.25, 0.5, 0.75, 0.125), (-0.5, 0.25, 0.375, -0.75), (0.1, 0.9, 0.6, 0.3)];
    let mut pairs = Vec::new();
    for e in -3..=3 {
        let s = 2f64.powi(e);
        for (a, b, c, d) in SHAPES {
            let x = Hyp::new(center.u() + s * a, center.v() + s * b).expect("finite probe");
            let y = Hyp::new(center.u() + s * c, center.v() + s * d).expect("finite probe");
            pairs.push((x, y));
        }
    }
    pairs
}

fn solve_failure(err: SolveError<Hyp>, args: Value) -> CliError {
    let message = err.to_string();
    let (kind, outputs) = match err {
        SolveError::InvalidTolerance(_) | SolveError::InvalidPower => return CliError::Usage(message),
        SolveError::NotAContraction { k } => ("NotAContraction", json!({ "lipschitz": k })),
        SolveError::NoConvergence { report } => ("NoConvergence", to_json(&report)),
        SolveError::ScheduleViolated { step, gap, eps } => {
            ("ScheduleViolated", json!({ "step": step, "gap": gap, "eps": eps }))
        }
        SolveError::InvalidSchedule { step, eps } => ("InvalidSchedule", json!({ "step": step, "eps": eps })),
        SolveError::PowerFixedPointMismatch { mismatch, report } => {
            let mut out = to_json(&report);
            out["mismatch"] = json!(mismatch);
            ("PowerFixedPointMismatch", out)
        }
        SolveError::NotContractive { x, y } => ("NotContractive", json!({ "x": x, "y": y })),
        SolveError::NotSelfMap { x, image } => ("NotSelfMap", json!({ "x": x, "image": image })),
        SolveError::GridTooCoarse { residual, bound } => {
            ("GridTooCoarse", json!({ "residual": residual, "bound": bound }))
        }
        SolveError::DegeneratePair { index } => ("DegeneratePair", json!({ "index": index })),
        SolveError::EmptyPairs => ("EmptyPairs", Value::Null),
    };
    numeric(RunReport::new(args, outputs), kind, message)
}

pub fn fixedpoint(a: &FixedpointArgs) -> Result<RunReport, CliError> {
    let start = parse_hyp(&a.start, "--start")?;
    let tol = parse_tol(&a.tol)?;
    let map: MapExpr = a.map;
    let mut spec = MapSpec::new(move |x: &Hyp| map.apply(x));
    if let Some(k) = map.declared_lipschitz() {
        spec = spec.with_lipschitz(k);
    }
    let mode = format!("{:?}", a.mode).to_lowercase();
    let mut args = json!({ "mode": mode, "map": map.to_string(), "max_iter": a.max_iter });
    let mut extra = serde_json::Map::new();
    extra.insert("declared_lipschitz".into(), json!(map.declared_lipschitz()));

    let result = match a.mode {
        Mode::Banach => {
            args["start"] = json!(start);
            args["tol"] = json!(tol);
            solve_banach(&spec, start, &Canonical, tol, a.max_iter)
        }
        Mode::Inexact => {
            args["start"] = json!(start);
            args["tol"] = json!(tol);
            args["perturb"] = json!(format!("{:?}", a.perturb).to_lowercase());
            args["schedule"] = json!("inverse-square");
            // Stay just inside the budget so rounding in the addition cannot overshoot it.
            let margin = 1.0 - 1e-9;
            let perturb = |n: usize, _: &Hyp, ty: &Hyp, eps: Hyp| match a.perturb {
                Perturb::Zero => *ty,
                Perturb::Edge => *ty + eps.scale(margin),
                Perturb::Alternating if n.is_multiple_of(2) => *ty - eps.scale(margin),
                Perturb::Alternating => *ty + eps.scale(margin),
            };
            solve_inexact(&spec, start, &EpsSchedule::inverse_square(), perturb, &Canonical, tol, a.max_iter)
        }
        Mode::Power => {
            args["start"] = json!(start);
            args["tol"] = json!(tol);
            args["n"] = json!(a.n);
            if a.n == 0 {
                return usage("--n must be at least 1");
            }
            let pairs = probe_pairs(start);
            let single = estimate_lipschitz(&spec, &pairs, &Canonical).map_err(|e| solve_failure(e, args.clone()))?;
            let composite = MapSpec::new(move |x: &Hyp| (0..a.n).fold(*x, |y, _| map.apply(&y)));
            let estimated =
                estimate_lipschitz(&composite, &pairs, &Canonical).map_err(|e| solve_failure(e, args.clone()))?;
            let declared = map.declared_lipschitz().map(|k| k.powi(a.n as i32));
            let (k_power, source) = match declared {
                Some(k) if k.precedes(Hyp::ONE) => (k, "declared"),
                _ => (estimated, "estimated"),
            };
            extra.insert("map_lipschitz_estimate".into(), json!(single));
            extra.insert("power_lipschitz".into(), json!(k_power));
            extra.insert("power_lipschitz_source".into(), json!(source));
            solve_power(&spec, a.n, Some(k_power), start, &Canonical, tol, a.max_iter)
        }
        Mode::Contractive => {
            let grid = parse_grid(&a.grid)?;
            args["grid"] = json!({ "lo": grid.lo(), "hi": grid.hi(), "per_axis": grid.per_axis() });
            solve_contractive_compact(&spec, &grid, &Canonical, a.max_iter)
        }
    };

    let report = result.map_err(|e| solve_failure(e, args.clone()))?;
    let mut outputs = to_json(&report);
    let obj = outputs.as_object_mut().expect("report is an object");
    obj.extend(extra);
    Ok(RunReport::new(args, outputs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RealKind {
    Euclidean,
    Discrete,
    Taxicab,
    Chebyshev,
}

impl RealKind {
    fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "euclidean" => Some(RealKind::Euclidean),
            "discrete" => Some(RealKind::Discrete),
            "taxicab" => Some(RealKind::Taxicab),
            "chebyshev" => Some(RealKind::Chebyshev),
            _ => None,
        }
    }
}

impl RealMetric for RealKind {
    fn dist(&self, a: Complex64, b: Complex64) -> f64 {
        match self {
            RealKind::Euclidean => Euclidean.dist(a, b),
            RealKind::Discrete => Discrete.dist(a, b),
            RealKind::Taxicab => Taxicab.dist(a, b),
            RealKind::Chebyshev => Chebyshev.dist(a, b),
        }
    }
}

enum MetricChoice {
    Canonical,
    HypMod,
    Product(RealKind, RealKind),
}

fn parse_metric(s: &str) -> Result<MetricChoice, CliError> {
    match s {
        "canonical" => return Ok(MetricChoice::Canonical),
        "hypmod" => return Ok(MetricChoice::HypMod),
        _ => {}
    }
    let parsed = s.strip_prefix("product:").and_then(|rest| {
        let (a, b) = rest.split_once(',')?;
        Some((RealKind::parse(a)?, RealKind::parse(b)?))
    });
    match parsed {
        Some((a, b)) => Ok(MetricChoice::Product(a, b)),
        None => usage(format!(
            "unknown metric `{s}`; use canonical, hypmod or product:D1,D2 \
             (D in euclidean, discrete, taxicab, chebyshev)"
        )),
    }
}

/// Triangle slack, in units in the last place.
const SLACK_ULPS: u32 = 4;
const COORD_RANGE: f64 = 1e3;

fn axioms_on_random_triples<P, M>(metric: &M, pts: &[P], triples: usize, rng: &mut ChaCha8Rng) -> AxiomReport<P>
where
    P: Clone + PartialEq,
    M: DMetric<P>,
{
    let ts: Vec<(P, P, P)> = (0..triples)
        .map(|_| {
            let mut pick = || pts[rng.gen_range(0..pts.len())].clone();
            (pick(), pick(), pick())
        })
        .collect();
    check_axioms_on_triples(metric, &ts, SLACK_ULPS)
}

fn verdict<P: Serialize>(report: &AxiomReport<P>) -> Value {
    let clause = |c: &dmetric::metric::ClauseVerdict<P>| {
        json!({
            "passed": c.passed(),
            "checked": c.checked,
            "failed": c.failed,
            "first_counterexample": c.first_counterexample,
        })
    };
    json!({
        "all_passed": report.all_passed(),
        "identity": clause(&report.identity),
        "symmetry": clause(&report.symmetry),
        "triangle": clause(&report.triangle),
    })
}

pub fn check_metric(a: &CheckMetricArgs) -> Result<RunReport, CliError> {
    let choice = parse_metric(&a.metric)?;
    if a.samples < 3 {
        return usage(format!("--samples must be at least 3 (got {})", a.samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let args = json!({
        "metric": a.metric,
        "samples": a.samples,
        "seed": a.seed,
        "slack_ulps": SLACK_ULPS,
    });
    let coord = |rng: &mut ChaCha8Rng| rng.gen_range(-COORD_RANGE..COORD_RANGE);
    let (outputs, passed) = match choice {
        MetricChoice::Canonical => {
            let pts: Vec<Hyp> =
                (0..a.samples).map(|_| Hyp::new(coord(&mut rng), coord(&mut rng)).unwrap()).collect();
            let r = axioms_on_random_triples(&Canonical, &pts, a.samples, &mut rng);
            (verdict(&r), r.all_passed())
        }
        MetricChoice::HypMod | MetricChoice::Product(..) => {
            let pts: Vec<Bc> = (0..a.samples)
                .map(|_| {
                    let z1 = Complex64::new(coord(&mut rng), coord(&mut rng));
                    let z2 = Complex64::new(coord(&mut rng), coord(&mut rng));
                    Bc::new(z1, z2).unwrap()
                })
                .collect();
            let r = match choice {
                MetricChoice::Product(d1, d2) => {
                    axioms_on_random_triples(&Product::new(d1, d2), &pts, a.samples, &mut rng)
                }
                _ => axioms_on_random_triples(&HypModulus, &pts, a.samples, &mut rng),
            };
            (verdict(&r), r.all_passed())
        }
    };
    let report = RunReport::new(args, outputs);
    if passed {
        Ok(report)
    } else {
        Err(numeric(report, "AxiomViolated", format!("{} fails a metric axiom", a.metric)))
    }
}

fn membership(c: Hyp, r: Hyp, x: &Hyp) -> Value {
    let inside = |kind| DBall::new(c, r, kind).expect("radius checked").contains(&Canonical, x);
    json!({
        "open": inside(BallKind::Open),
        "closed": inside(BallKind::Closed),
        "sphere": inside(BallKind::Sphere),
    })
}

fn ball(a: &DemoArgs) -> Result<RunReport, CliError> {
    let c = parse_hyp(&a.center, "--center")?;
    let r = parse_hyp(&a.radius, "--radius")?;
    let format = format!("{:?}", a.format).to_lowercase();
    let args = json!({ "demo": "ball", "center": c, "radius": r, "format": format });
    let Ok(vertices) = sphere_vertices(c, r) else {
        return usage(format!(
            "InvalidRadius: radius ({}, {}) must be positive in both coordinates",
            r.u(),
            r.v()
        ));
    };
    let witness = edge_witness(c, r).expect("radius checked");
    let (lo, hi) = (vertices[3], vertices[0]);
    let outputs = json!({
        "vertices": vertices,
        "vertex_membership": vertices.iter().map(|v| membership(c, r, v)).collect::<Vec<_>>(),
        "square": { "lo": lo, "hi": hi },
        "witness": witness,
        "witness_membership": membership(c, r, &witness),
    });
    let mut report = RunReport::new(args, outputs);
    if a.format == Format::Csv {
        let mut csv = String::from("kind,u,v\n");
        let mut row = |kind: &str, x: Hyp| csv.push_str(&format!("{kind},{:?},{:?}\n", x.u(), x.v()));
        for v in vertices {
            row("vertex", v);
        }
        row("square_lo", lo);
        row("square_hi", hi);
        row("witness", witness);
        report.csv = Some(csv);
    }
    Ok(report)
}

fn evt(a: &DemoArgs) -> Result<RunReport, CliError> {
    if a.format == Format::Csv {
        return usage("CSV output is only available for `demo ball`");
    }
    let grid = parse_grid(&a.grid)?;
    let map = MapExpr::EvtCounterexample;
    let f = SampledFunction::on_grid(&grid, |z| map.apply(z));
    let r = evt_extrema(&f);
    let args = json!({
        "demo": "evt",
        "map": map.to_string(),
        "grid": { "lo": grid.lo(), "hi": grid.hi(), "per_axis": grid.per_axis() },
    });
    let mut outputs = to_json(&r);
    outputs["points_scanned"] = json!(grid.len());
    Ok(RunReport::new(args, outputs))
}

pub fn demo(a: &DemoArgs) -> Result<RunReport, CliError> {
    match a.demo {
        Demo::Ball => ball(a),
        Demo::Evt => evt(a),
    }
}
