//! Named preset networks.

use regnet_core::model::{ModelError, Sign};
use regnet_core::presets::{self, Fig3Params, P53Params, FIG3_VERTICES, P53_VERTICES};
use regnet_core::Rational;

use crate::netfile::NetworkFile;
use crate::random::{random_spec, RandomParams};

pub const PRESETS: [&str; 8] = [
    "self_inhibitor",
    "circuit",
    "toggle_switch",
    "negative_2_circuit",
    "repressilator",
    "fig3_three_loops",
    "p53",
    "random",
];

/// Overrides for a preset's defaults.
#[derive(Debug, Clone, Default)]
pub struct PresetArgs {
    pub a: Option<Rational>,
    /// One value for every threshold, or one per arrow in the preset's
    /// arrow order.
    pub thresholds: Vec<Rational>,
    /// Circuit signs, one per arrow.
    pub signs: Vec<Sign>,
    /// Circuit length or random-spec dimension.
    pub d: Option<usize>,
    pub random: RandomParams,
}

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error("unknown preset `{0}` (known: {list})", list = PRESETS.join(", "))]
    Unknown(String),
    #[error("preset `{preset}` takes 1 or {expected} thresholds, got {got}")]
    Thresholds { preset: String, expected: usize, got: usize },
    #[error("{0}")]
    Model(#[from] ModelError),
}

fn thresholds(name: &str, args: &PresetArgs, n: usize) -> Result<Vec<Rational>, PresetError> {
    match args.thresholds.len() {
        0 => Ok(vec![Rational::ratio(1, 2); n]),
        1 => Ok(vec![args.thresholds[0].clone(); n]),
        m if m == n => Ok(args.thresholds.clone()),
        got => Err(PresetError::Thresholds { preset: name.into(), expected: n, got }),
    }
}

pub fn build_preset(name: &str, args: &PresetArgs) -> Result<NetworkFile, PresetError> {
    let a = args.a.clone().unwrap_or_else(presets::default_a);
    let names = |v: &[&str]| Some(v.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    let (net, units) = match name {
        "self_inhibitor" => {
            let t = thresholds(name, args, 1)?;
            (presets::self_inhibitor(a, t[0].clone())?, None)
        }
        "circuit" => {
            let d = args.d.unwrap_or(if args.signs.is_empty() { 2 } else { args.signs.len() });
            let signs = if args.signs.is_empty() { vec![Sign::Minus; d] } else { args.signs.clone() };
            (presets::circuit(d, &signs, a, &thresholds(name, args, d)?)?, None)
        }
        "toggle_switch" => {
            let t = thresholds(name, args, 2)?;
            (presets::toggle_switch(a, t[0].clone(), t[1].clone())?, None)
        }
        "negative_2_circuit" => {
            let t = thresholds(name, args, 2)?;
            (presets::negative_2_circuit(a, t[0].clone(), t[1].clone())?, None)
        }
        "repressilator" => (presets::repressilator(a, &thresholds(name, args, 3)?)?, None),
        "fig3_three_loops" => {
            let mut params = Fig3Params::default();
            if !args.thresholds.is_empty() {
                let t = thresholds(name, args, 6)?;
                for (n, lp) in params.loops.iter_mut().enumerate() {
                    lp.to_end.1 = t[2 * n].clone();
                    lp.to_driver.1 = t[2 * n + 1].clone();
                }
            }
            (presets::fig3_three_loops(a, &params)?, names(&FIG3_VERTICES))
        }
        "p53" => {
            let mut params = P53Params::default();
            if !args.thresholds.is_empty() {
                let t = thresholds(name, args, 6)?;
                params = P53Params {
                    p53_m: t[0].clone(),
                    m_p53: t[1].clone(),
                    p53_b: t[2].clone(),
                    p53_c: t[3].clone(),
                    b_c: t[4].clone(),
                    c_b: t[5].clone(),
                };
            }
            (presets::p53(a, &params)?, names(&P53_VERTICES))
        }
        "random" => {
            let mut params = args.random.clone();
            if let Some(d) = args.d {
                params.d = d;
            }
            let spec = random_spec(&params)?;
            return Ok(NetworkFile::new(Some(name.into()), spec, None));
        }
        other => return Err(PresetError::Unknown(other.into())),
    };
    Ok(NetworkFile::new(Some(name.into()), net.spec().clone(), units))
}
