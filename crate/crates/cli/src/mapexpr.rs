//! The map mini-language accepted by `--map`.

use std::fmt;
use std::str::FromStr;

use dmetric::Hyp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapExpr {
    /// `(u, v) -> (su u + ou, sv v + ov)`.
    Affine { su: f64, ou: f64, sv: f64, ov: f64 },
    /// `t -> 4 + 2 clamp(t, 0, 1)` in each coordinate.
    ClampStep,
    /// `t -> t - t^2 / 2` in each coordinate.
    QuadContractive,
    /// `z -> z1 e1 + (1 - z1) e2`.
    EvtCounterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse map `{input}`: {reason}")]
pub struct MapParseError {
    input: String,
    reason: String,
}

impl FromStr for MapExpr {
    type Err = MapParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| MapParseError { input: s.to_string(), reason: reason.to_string() };
        let s = s.trim();
        match s {
            "clamp-step" => return Ok(MapExpr::ClampStep),
            "quad-contractive" => return Ok(MapExpr::QuadContractive),
            "evt-counterexample" => return Ok(MapExpr::EvtCounterexample),
            _ => {}
        }
        let Some(params) = s.strip_prefix("affine:") else {
            return Err(fail(
                "expected affine:su,ou,sv,ov or one of clamp-step, quad-contractive, evt-counterexample",
            ));
        };
        let nums: Vec<f64> = params
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| fail("affine parameters must be numbers"))?;
        match nums[..] {
            [su, ou, sv, ov] if nums.iter().all(|x| x.is_finite()) => Ok(MapExpr::Affine { su, ou, sv, ov }),
            [_, _, _, _] => Err(fail("affine parameters must be finite")),
            _ => Err(fail("affine takes exactly four parameters")),
        }
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Affine { su, ou, sv, ov } => write!(f, "affine:{su},{ou},{sv},{ov}"),
            MapExpr::ClampStep => f.write_str("clamp-step"),
            MapExpr::QuadContractive => f.write_str("quad-contractive"),
            MapExpr::EvtCounterexample => f.write_str("evt-counterexample"),
        }
    }
}

fn clamp_step(t: f64) -> f64 {
    4.0 + 2.0 * t.clamp(0.0, 1.0)
}

fn quad(t: f64) -> f64 {
    t - t * t / 2.0
}

impl MapExpr {
    pub fn apply(&self, x: &Hyp) -> Hyp {
        let (u, v) = (x.u(), x.v());
        let (a, b) = match *self {
            MapExpr::Affine { su, ou, sv, ov } => (su * u + ou, sv * v + ov),
            MapExpr::ClampStep => (clamp_step(u), clamp_step(v)),
            MapExpr::QuadContractive => (quad(u), quad(v)),
            MapExpr::EvtCounterexample => (u, 1.0 - u),
        };
        Hyp::new(a, b).expect("map produced a non-finite value")
    }

    /// Global Lipschitz constant known in closed form, if any.
    pub fn declared_lipschitz(&self) -> Option<Hyp> {
        match *self {
            MapExpr::Affine { su, sv, .. } => Hyp::new(su.abs(), sv.abs()).ok(),
            MapExpr::ClampStep => Some(Hyp::splat(2.0).unwrap()),
            // Ratio tends to 1 near zero; contractive but never a contraction.
            MapExpr::QuadContractive => Some(Hyp::ONE),
            // The second output coordinate follows the first input coordinate.
            MapExpr::EvtCounterexample => None,
        }
    }
}
