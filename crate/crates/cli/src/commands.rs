use serde_json::{json, Value};

use pairstab::channels::{ChannelKind, ChannelSpec};
use pairstab::dynamics::{evolve_trajectory_one_sided, uniform_grid};
use pairstab::qstate::{lambda1_for_concurrence, schmidt_concurrence};
use pairstab::report::{csv_table, fmt_num, Cell};
use pairstab::spinchain::{eta_closed_form, reduced_concurrence};
use pairstab::*;
use std::result::Result;

use crate::args::{Common, Format};
use crate::error::CliError;
use crate::spec::{parse_channel, parse_state};

/// Rendered command output plus diagnostics for standard error.
pub struct Rendered {
    pub text: String,
    pub notes: Vec<String>,
}

impl Rendered {
    fn new(text: String) -> Self {
        Self { text, notes: Vec::new() }
    }
}

/// Rounds to the 12 significant digits used in CSV output so both formats
/// carry the same values.
fn r12(x: f64) -> Value {
    match fmt_num(x).parse::<f64>() {
        Ok(y) if y.is_finite() => json!(y),
        _ => Value::Null,
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn grid(common: &Common) -> Result<Vec<f64>, CliError> {
    if !(common.t_max > 0.0 && common.t_max.is_finite()) {
        return Err(CliError::Config(format!("--t-max must be positive, got {}", common.t_max)));
    }
    if common.steps < 2 {
        return Err(CliError::Config(format!("--steps must be at least 2, got {}", common.steps)));
    }
    Ok(uniform_grid(common.t_max, common.steps)?)
}

fn check_kappa(kappa: f64) -> Result<(), CliError> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(CliError::Config(format!("--kappa must be positive, got {kappa}")));
    }
    Ok(())
}

fn unit_interval(x: f64, what: &str) -> Result<f64, CliError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(CliError::Config(format!("{what} = {x} not in [0, 1]")));
    }
    Ok(x)
}

pub fn evolve(common: &Common, qubit: Option<usize>, random_mixed: usize) -> Result<Rendered, CliError> {
    check_kappa(common.kappa)?;
    let grid = grid(common)?;
    let resolved = parse_state(common.state.as_deref(), common.seed)?;
    let schedule = parse_channel(common.channel.as_deref())?.schedule(common.kappa)?;
    if let Some(q) = qubit {
        if q > 1 {
            return Err(CliError::Config(format!("--qubit must be 0 or 1, got {q}")));
        }
    }
    let run = |s: &TwoQubitState, label: String| -> Result<Trajectory, CliError> {
        let mut tr = match qubit {
            Some(q) => evolve_trajectory_one_sided(s, &schedule, &grid, q),
            None => evolve_trajectory(s, &schedule, &grid),
        }
        ?;
        tr.label = label;
        Ok(tr)
    };

    let mut all = vec![run(&resolved.state, resolved.label.clone())?];
    if random_mixed > 0 {
        let c0 = concurrence_wootters(&resolved.state)?;
        for k in 0..random_mixed {
            let s = random_state(common.seed.wrapping_add(k as u64 + 1), RandomKind::FixedConcurrence(c0))
                ?;
            all.push(run(&s, format!("mixed-{k}"))?);
        }
    }

    let text = match common.format {
        Format::Csv => Trajectory::csv(&all),
        Format::Json => json_text(&json!({
            "kappa": r12(common.kappa),
            "channel": format!("{schedule:?}"),
            "trajectories": all.iter().map(|tr| json!({
                "label": tr.label,
                "t": tr.times.iter().map(|&x| r12(x)).collect::<Vec<_>>(),
                "C": tr.concurrences.iter().map(|&x| r12(x)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Rendered {
        text,
        notes: resolved.notes,
    })
}

pub fn surface(common: &Common, c0_steps: usize) -> Result<Rendered, CliError> {
    check_kappa(common.kappa)?;
    let times = grid(common)?;
    if c0_steps < 2 {
        return Err(CliError::Config(format!("--c0-steps must be at least 2, got {c0_steps}")));
    }
    let c0s = uniform_grid(1.0, c0_steps)?;
    let rows: Vec<[f64; 3]> = c0s
        .iter()
        .flat_map(|&c0| {
            times
                .iter()
                .map(move |&t| [c0, t, depolarizing_residual(c0, common.kappa, t)])
        })
        .collect();
    let text = match common.format {
        Format::Csv => csv_table(&["C0", "t", "C"], rows.iter().map(|r| r.map(Cell::from).to_vec())),
        Format::Json => json_text(&json!({
            "kappa": r12(common.kappa),
            "rows": rows.iter().map(|r| json!({"C0": r12(r[0]), "t": r12(r[1]), "C": r12(r[2])})).collect::<Vec<_>>(),
        })),
    };
    Ok(Rendered::new(text))
}

pub fn critical(common: &Common, c0: &[f64], c0_steps: usize) -> Result<Rendered, CliError> {
    check_kappa(common.kappa)?;
    let list: Vec<f64> = if c0.is_empty() {
        if c0_steps < 1 {
            return Err(CliError::Config("--c0-steps must be at least 1".into()));
        }
        (1..=c0_steps).map(|k| k as f64 / c0_steps as f64).collect()
    } else {
        c0.to_vec()
    };
    let rows = list
        .iter()
        .map(|&c| {
            let c = unit_interval(c, "C0")?;
            Ok([c, common.kappa * critical_time(c, common.kappa)?])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match common.format {
        Format::Csv => csv_table(&["C0", "kappa_Tc"], rows.iter().map(|r| r.map(Cell::from).to_vec())),
        Format::Json => json_text(&json!({
            "rows": rows.iter().map(|r| json!({"C0": r12(r[0]), "kappa_Tc": r12(r[1])})).collect::<Vec<_>>(),
        })),
    };
    Ok(Rendered::new(text))
}

fn matrix_json(m: &Matrix2<Complex64>) -> Value {
    let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<Value>> {
        (0..2).map(|i| (0..2).map(|j| r12(f(&m[(i, j)]))).collect()).collect()
    };
    json!({"re": part(|z| z.re), "im": part(|z| z.im)})
}

pub fn optimize(
    common: &Common,
    lambda1: Option<f64>,
    c0: Option<f64>,
    samples: usize,
    t: Option<f64>,
) -> Result<Rendered, CliError> {
    check_kappa(common.kappa)?;
    if samples < 1 {
        return Err(CliError::Config("--samples must be at least 1".into()));
    }
    let lambda1 = match (lambda1, c0) {
        (Some(l), _) => unit_interval(l, "lambda1")?,
        (None, Some(c)) => lambda1_for_concurrence(unit_interval(c, "c0")?)?,
        (None, None) => lambda1_for_concurrence(2.0 / 3.0)?,
    };
    let t = t.unwrap_or(common.t_max);
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Config(format!("--t must be non-negative, got {t}")));
    }
    let spec = match parse_channel(common.channel.as_deref())? {
        ChannelSpec::Kind(ChannelKind::Depolarizing { kappa, t: None }) => {
            ChannelSpec::Kind(ChannelKind::Depolarizing { kappa, t: Some(t) })
        }
        other => other,
    };
    let ch = spec.channel(common.kappa)?;
    let out = local_unitary_search(lambda1, &ch, samples, common.seed)?;
    let report = StabilityReport::optimal(schmidt_concurrence(lambda1), &ch)?;
    let q = ch.shrink().as_array();
    let value = json!({
        "lambda1": r12(lambda1),
        "c0": r12(out.c0),
        "samples": samples,
        "seed": common.seed,
        "channel": {
            "p": ch.probabilities().map(r12),
            "Q": q.map(r12),
        },
        "residual_max": r12(out.residual_max),
        "sampled_best": r12(out.sampled_best),
        "sampled_worst": r12(out.sampled_worst),
        "optimal_value": r12(out.optimal_value),
        "best": r12(out.best),
        "oracle_gap": r12(report.gap),
        "attaining_unitary": {
            "u": matrix_json(&out.best_u),
            "v": matrix_json(&out.best_v),
        },
    });
    Ok(Rendered::new(json_text(&value)))
}

pub fn dps(common: &Common) -> Result<Rendered, CliError> {
    check_kappa(common.kappa)?;
    let resolved = parse_state(common.state.as_deref(), common.seed)?;
    let v = is_dps(&resolved.state, common.kappa)?;
    let preimage = v.preimage.as_ref().map(|p| {
        let amp = p.amplitudes();
        json!({"re": amp.map(|z| r12(z.re)), "im": amp.map(|z| r12(z.im))})
    });
    let value = json!({
        "state": resolved.label,
        "kappa": r12(common.kappa),
        "is_dps": v.is_dps,
        "t0": v.t0.map(r12),
        "q": v.q.map(r12),
        "purity_defect": r12(v.purity_defect),
        "min_eigenvalue": r12(v.min_eigenvalue),
        "preimage": preimage,
    });
    Ok(Rendered {
        text: json_text(&value),
        notes: resolved.notes,
    })
}

pub fn spin(common: &Common, gamma: f64, n_sites: usize) -> Result<Rendered, CliError> {
    check_kappa(common.kappa)?;
    let times = grid(common)?;
    let params = XXZParams::new(gamma, n_sites)?;
    let schedule = parse_channel(common.channel.as_deref())?.schedule(common.kappa)?;
    let r = ground_reduced(&params)?;
    let s = r.state;
    let c0 = reduced_concurrence(&s);

    let mut notes = Vec::new();
    if r.degenerate {
        notes.push("ground level is degenerate; translation-symmetric combination used".to_string());
    }
    notes.extend(r.sector_warning.clone());

    let rows = times
        .iter()
        .map(|&t| {
            let ev = evolve_reduced(&s, &schedule.at(t)?);
            let pipeline = ev.concurrence_full()?;
            let closed = eta_closed_form(c0, ev.eta);
            Ok([t, pipeline, closed, (pipeline - closed).abs()])
        })
        .collect::<pairstab::Result<Vec<_>>>()
        ?;

    let text = match common.format {
        Format::Csv => csv_table(
            &["t", "C_pipeline", "C_closed_form", "gap"],
            rows.iter().map(|r| r.map(Cell::from).to_vec()),
        ),
        Format::Json => json_text(&json!({
            "gamma": r12(gamma),
            "n_sites": n_sites,
            "energy": r12(r.energy),
            "degenerate": r.degenerate,
            "sector_warning": r.sector_warning,
            "pair_state": {
                "u": r12(s.u), "x": r12(s.x), "y": r12(s.y), "v": r12(s.v),
                "z": {"re": r12(s.z.re), "im": r12(s.z.im)},
            },
            "c0": r12(c0),
            "rows": rows.iter().map(|r| json!({
                "t": r12(r[0]), "C_pipeline": r12(r[1]), "C_closed_form": r12(r[2]), "gap": r12(r[3]),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Rendered { text, notes })
}
