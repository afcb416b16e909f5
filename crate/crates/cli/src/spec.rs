//! Parsing of the `--state` and `--channel` arguments.

use std::fs;
use std::path::Path;

use pairstab::channels::{ChannelKind, ChannelSpec};
use pairstab::qstate::{x_form_state, PureState, RandomKind, StateJson, TwoQubitState, XFormState};
use pairstab::spinchain::{ground_reduced, XXZParams};
use pairstab::{from_pure, random_state};

use crate::error::CliError;

fn number(text: &str, what: &str) -> Result<f64, CliError> {
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{what}: cannot parse '{text}' as a number")))?;
    if !x.is_finite() {
        return Err(CliError::Config(format!("{what}: '{text}' is not finite")));
    }
    Ok(x)
}

/// Inline JSON when the text starts with `{`, otherwise the contents of the
/// named file.
fn json_text(arg: &str, what: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    if !path.is_file() {
        return Err(CliError::Config(format!("unknown {what} '{arg}' (not a preset, JSON or file)")));
    }
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("reading {what} file {arg}: {e}")))
}

pub struct ResolvedState {
    pub state: TwoQubitState,
    pub label: String,
    pub notes: Vec<String>,
}

pub fn parse_state(arg: Option<&str>, seed: u64) -> Result<ResolvedState, CliError> {
    let arg = arg.unwrap_or("bell");
    let (name, param) = match arg.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (arg, None),
    };
    let need = |what: &str| param.ok_or_else(|| CliError::Config(format!("preset '{name}' needs a value: {what}")));
    let mut notes = Vec::new();
    let state = match name {
        "bell" | "singlet" => from_pure(&PureState::singlet()),
        "maximally-mixed" => TwoQubitState::maximally_mixed(),
        "schmidt" => from_pure(&PureState::schmidt(number(need("schmidt:L1")?, "schmidt")?)?),
        "pure" => from_pure(&PureState::with_concurrence(number(need("pure:C0")?, "pure")?)?),
        "werner" => {
            let w = number(need("werner:W")?, "werner")?;
            if !(-1.0 / 3.0..=1.0).contains(&w) {
                return Err(CliError::Config(format!("werner weight {w} not in [-1/3, 1]")));
            }
            x_form_state(&XFormState::werner(w))?
        }
        "mixed" => {
            let c0 = number(need("mixed:C0")?, "mixed")?;
            random_state(seed, RandomKind::FixedConcurrence(c0))?
        }
        "xxz" => {
            let text = need("xxz:GAMMA,N")?;
            let (g, n) = text
                .split_once(',')
                .ok_or_else(|| CliError::Config(format!("xxz preset expects GAMMA,N, got '{text}'")))?;
            let n = n
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("xxz: cannot parse ring length '{n}'")))?;
            let params = XXZParams::new(number(g, "xxz gamma")?, n)?;
            let r = ground_reduced(&params)?;
            if r.degenerate {
                notes.push(format!("ground level of {params:?} is degenerate; translation-symmetric combination used"));
            }
            notes.extend(r.sector_warning);
            x_form_state(&r.state)?
        }
        _ => {
            let text = json_text(arg, "state")?;
            let j: StateJson =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("state JSON: {e}")))?;
            TwoQubitState::from_json(&j)?
        }
    };
    Ok(ResolvedState {
        state,
        label: arg.to_string(),
        notes,
    })
}

pub fn parse_channel(arg: Option<&str>) -> Result<ChannelSpec, CliError> {
    let arg = arg.unwrap_or("depolarizing");
    let depolarizing = ChannelSpec::Kind(ChannelKind::Depolarizing { kappa: None, t: None });
    let spec = match arg.split_once(':') {
        None if arg == "depolarizing" => depolarizing,
        None if arg == "identity" => ChannelSpec::Probabilities { p: [1.0, 0.0, 0.0, 0.0] },
        Some(("dephasing", p3)) => ChannelSpec::Kind(ChannelKind::Dephasing {
            p3: number(p3, "dephasing")?,
        }),
        Some(("pauli", list)) => {
            let values = list
                .split(',')
                .map(|x| number(x, "pauli"))
                .collect::<Result<Vec<_>, _>>()?;
            let p: [f64; 4] = values
                .try_into()
                .map_err(|_| CliError::Config(format!("pauli channel needs 4 probabilities, got '{list}'")))?;
            ChannelSpec::Probabilities { p }
        }
        _ => return Ok(ChannelSpec::from_json(&json_text(arg, "channel")?)?),
    };
    spec.validate()?;
    Ok(spec)
}
