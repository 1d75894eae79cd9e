use rtg::foremost::reference_prefix;
use rtg::gen::{sample_complete, sample_fnp, sample_poisson, RngStream};
use rtg::gossip::{default_call_cap, GossipMilestones};
use rtg::graph::{parse_appearance_text, verify_spanner, Appearance, TemporalGraph};
use rtg::harness::{
    configure_threads, crossing_point, gossip_experiment, spanner_experiment, spanner_trial,
    threshold_sweep, trajectory_experiment, GossipModel, Model, PropertyId, SpannerTrial,
    SweepGrid, SweepMode,
};
use serde_json::{json, Value};

use crate::output::{opt, read_file, CliError, CliResult, Sink};
use crate::{
    Command, Common, Format, GenArgs, GenModel, GossipArgs, SpannerArgs, SweepArgs,
    TrajectoryArgs, VerifyArgs,
};

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Gen(a) => gen(a),
        Command::Sweep(a) => sweep(a),
        Command::Gossip(a) => gossip(a),
        Command::Spanner(a) => spanner(a),
        Command::Trajectory(a) => trajectory(a),
        Command::Verify(a) => verify(a),
    }
}

/// Flag, then `$TT_SEED`, then 0.
fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("TT_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("TT_SEED={v:?} is not an unsigned 64-bit integer"))),
        Err(_) => Ok(0),
    }
}

fn setup(common: &Common) -> CliResult<u64> {
    if let Some(t) = common.threads {
        configure_threads(t)?;
    }
    resolve_seed(common.seed)
}

fn positive(name: &str, v: u64) -> CliResult {
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be at least 1")));
    }
    Ok(())
}

fn ln_density(n: usize, factor: f64) -> f64 {
    let nf = n as f64;
    factor * nf.ln() / nf
}

fn gen(a: GenArgs) -> CliResult {
    let seed = resolve_seed(a.seed)?;
    let mut rng = RngStream::new(seed, a.stream).rng();
    let (model, g) = match a.model {
        GenModel::Fnp => ("fnp", sample_fnp(a.n, a.p, &mut rng)?),
        GenModel::Complete => ("complete", sample_complete(a.n, &mut rng)?),
        GenModel::Poisson => ("poisson", sample_poisson(a.n, a.p, &mut rng)?),
    };
    let p = if a.model == GenModel::Complete { 1.0 } else { a.p };
    let config = json!({
        "command": "gen", "model": model, "n": a.n, "p": p, "seed": seed, "stream": a.stream,
    });
    let text = g.to_text();
    let (header, body) = text.split_once('\n').expect("text starts with the header line");
    let mut out = Sink::open(a.out.as_deref())?;
    out.line(header)?;
    out.config_comment(&config)?;
    out.raw(body)?;
    out.finish()
}

fn sweep(a: SweepArgs) -> CliResult {
    let seed = setup(&a.common)?;
    positive("trials", a.trials)?;
    let property: PropertyId = a.property.parse()?;
    let model: Model = a.model.parse()?;
    let grid = if a.p_abs.is_empty() {
        SweepGrid::from_factors(a.n, &a.factors)?
    } else {
        SweepGrid::from_p_values(a.n, &a.p_abs)?
    };
    let mode = if a.coupled { SweepMode::Coupled } else { SweepMode::Fresh };
    let rows = threshold_sweep(property, model, &grid, a.trials, seed, mode)?;
    let crossing = crossing_point(&rows);
    let config = json!({
        "command": "sweep", "property": property.as_str(), "model": model.as_str(), "n": a.n,
        "factors": grid.factors(), "p": grid.p_values(), "trials": a.trials, "seed": seed,
        "coupled": a.coupled,
    });
    match crossing {
        Some(c) => eprintln!(
            "crossing: first factor with estimate >= 0.5 is {} (interpolated {:.4})",
            c.factor, c.interpolated
        ),
        None => eprintln!("crossing: no grid point reached estimate 0.5"),
    }
    let mut out = Sink::open(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => {
            out.config_comment(&config)?;
            out.line(rtg::ExperimentRow::CSV_HEADER)?;
            for r in &rows {
                out.line(r.csv_line())?;
            }
        }
        Format::Json => out.json(&json!({ "config": config, "rows": rows, "crossing": crossing }))?,
    }
    out.finish()
}

fn gossip(a: GossipArgs) -> CliResult {
    let seed = setup(&a.common)?;
    positive("trials", a.trials)?;
    let model: GossipModel = a.model.parse()?;
    if let Some(cap) = a.call_cap {
        positive("call-cap", cap)?;
    }
    let cap = match model {
        GossipModel::Any => Some(a.call_cap.unwrap_or_else(|| default_call_cap(a.n))),
        GossipModel::Co => None,
    };
    let runs = gossip_experiment(model, a.n, a.trials, seed, cap)?;
    let nf = a.n as f64;
    let nln = nf * nf.ln();
    let reference = [0.5 * nln, nln, nln, 1.5 * nln];
    let means = milestone_means(&runs);
    let config = json!({
        "command": "gossip", "model": model.as_str(), "n": a.n, "trials": a.trials,
        "seed": seed, "call_cap": cap,
    });
    let mut out = Sink::open(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => {
            out.config_comment(&config)?;
            out.line("trial,pair_exchange,first_expert,fixed_expert,all_experts")?;
            for (t, m) in runs.iter().enumerate() {
                out.line(format!(
                    "{t},{},{},{},{}",
                    opt(m.pair_exchange),
                    opt(m.first_expert),
                    opt(m.fixed_expert),
                    opt(m.all_experts)
                ))?;
            }
            out.line(format!("mean,{}", means.map(opt).join(",")))?;
            out.line(format!(
                "reference,{}",
                reference.map(|r| r.to_string()).join(",")
            ))?;
        }
        Format::Json => {
            let names = ["pair_exchange", "first_expert", "fixed_expert", "all_experts"];
            let obj = |vals: [Value; 4]| -> Value {
                names.iter().zip(vals).map(|(k, v)| (k.to_string(), v)).collect()
            };
            out.json(&json!({
                "config": config,
                "rows": runs,
                "mean": obj(means.map(|m| json!(m))),
                "reference": obj(reference.map(|r| json!(r))),
            }))?;
        }
    }
    out.finish()
}

/// Mean of each milestone over the runs that reached it; `None` if no run did.
fn milestone_means(runs: &[GossipMilestones]) -> [Option<f64>; 4] {
    let pick: [fn(&GossipMilestones) -> Option<u64>; 4] = [
        |m| m.pair_exchange,
        |m| m.first_expert,
        |m| m.fixed_expert,
        |m| m.all_experts,
    ];
    pick.map(|f| {
        let hits: Vec<u64> = runs.iter().filter_map(f).collect();
        (!hits.is_empty()).then(|| hits.iter().sum::<u64>() as f64 / hits.len() as f64)
    })
}

fn spanner(a: SpannerArgs) -> CliResult {
    let seed = setup(&a.common)?;
    positive("trials", a.trials)?;
    let (n, p, runs, source) = match &a.input {
        Some(path) => {
            let g = TemporalGraph::parse_text(&read_file(path)?)?;
            let p = a.p.unwrap_or_else(|| ln_density(g.n(), 5.0));
            (g.n(), p, vec![spanner_trial(0, &g, p)?], Some(path.display().to_string()))
        }
        None => {
            let n = a.n.expect("clap requires --n without --input");
            let p = a.p.unwrap_or_else(|| ln_density(n, 5.0));
            (n, p, spanner_experiment(n, p, a.trials, seed)?, None)
        }
    };
    let config = json!({
        "command": "spanner", "n": n, "p": p, "trials": runs.len(), "seed": seed,
        "input": source,
    });
    let mut out = Sink::open(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => {
            out.config_comment(&config)?;
            out.line("trial,found,square_w,square_x,square_y,square_z,size,verified")?;
            for r in &runs {
                out.line(spanner_row(r))?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = runs
                .iter()
                .map(|r| {
                    let c = r.certificate.as_ref();
                    json!({
                        "trial": r.trial,
                        "found": c.is_some(),
                        "square": c.map(|c| c.pivot.vertices()),
                        "partition": c.map(|c| c.partition),
                        "size": c.map_or(0, |c| c.size()),
                        "verified": c.is_some_and(|c| c.verified),
                        "candidates": r.candidates,
                        "cap_hit": r.cap_hit,
                    })
                })
                .collect();
            out.json(&json!({ "config": config, "rows": rows }))?;
        }
    }
    out.finish()?;
    if let Some(path) = &a.spanner_out {
        if let Some(cert) = runs.iter().find_map(|r| r.certificate.as_ref()) {
            let mut s = Sink::open(Some(path))?;
            s.line(format!("n {n}"))?;
            for app in &cert.appearances {
                s.line(format!("{} {} {}", app.edge.lo(), app.edge.hi(), app.label))?;
            }
            s.finish()?;
        }
    }
    let failed = runs.iter().filter(|r| r.certificate.is_none()).count();
    if a.require_success && failed > 0 {
        return Err(CliError::Failed(format!(
            "no good square in {failed} of {} trials",
            runs.len()
        )));
    }
    Ok(())
}

fn spanner_row(r: &SpannerTrial) -> String {
    match &r.certificate {
        Some(c) => {
            let [w, x, y, z] = c.pivot.vertices();
            format!("{},true,{w},{x},{y},{z},{},{}", r.trial, c.size(), c.verified)
        }
        None => format!("{},false,,,,,0,false", r.trial),
    }
}

fn trajectory(a: TrajectoryArgs) -> CliResult {
    let seed = setup(&a.common)?;
    positive("trials", a.trials)?;
    if a.stride == 0 {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    let summary = trajectory_experiment(a.n, a.trials, seed)?;
    let n = a.n;
    let nf = n as f64;
    let reference = reference_prefix(n);
    let bound = 2.0 * nf.ln().powf(0.8) / nf;
    let ks: Vec<usize> = (0..n)
        .step_by(a.stride)
        .chain((((n - 1) % a.stride) != 0).then_some(n - 1))
        .collect();
    let config = json!({
        "command": "trajectory", "n": n, "trials": a.trials, "seed": seed, "stride": a.stride,
    });
    let stats = json!({
        "median_deviation": summary.median_deviation(),
        "deviation_bound": bound,
        "equality_rate": summary.equality_rate(),
        "last_error_rate": summary.last_error_rate(3.0 * nf.ln().powf(0.8) / nf),
        "not_source": summary.failed(),
    });
    eprintln!("summary: {stats}");
    let mut out = Sink::open(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => {
            out.config_comment(&config)?;
            out.line("trial,k,y,y_hat,ref")?;
            for t in &summary.trials {
                let Some(tr) = &t.trajectory else {
                    out.line(format!("# trial {}: vertex 0 is not a temporal source", t.trial))?;
                    continue;
                };
                let y_hat = tr.y_hat().expect("experiment truncates");
                for &k in &ks {
                    out.line(format!("{},{k},{},{},{}", t.trial, tr.y[k], y_hat[k], reference[k]))?;
                }
            }
        }
        Format::Json => {
            let rows: Vec<Value> = summary
                .trials
                .iter()
                .map(|t| {
                    let pts = t.trajectory.as_ref().map(|tr| {
                        let y_hat = tr.y_hat().expect("experiment truncates");
                        ks.iter()
                            .map(|&k| json!({ "k": k, "y": tr.y[k], "y_hat": y_hat[k], "ref": reference[k] }))
                            .collect::<Vec<_>>()
                    });
                    json!({
                        "trial": t.trial,
                        "source": t.trajectory.is_some(),
                        "deviation": t.trajectory.as_ref().map(|_| t.deviation),
                        "last_error": t.trajectory.as_ref().map(|_| t.last_error),
                        "exact": t.exact,
                        "points": pts,
                    })
                })
                .collect();
            out.json(&json!({ "config": config, "summary": stats, "rows": rows }))?;
        }
    }
    out.finish()
}

fn verify(a: VerifyArgs) -> CliResult {
    let g = TemporalGraph::parse_text(&read_file(&a.input)?)?;
    let (n, apps): (usize, Vec<Appearance>) = parse_appearance_text(&read_file(&a.spanner)?)?;
    if n != g.n() {
        return Err(CliError::Usage(format!(
            "spanner has n = {n} but the graph has n = {}",
            g.n()
        )));
    }
    if verify_spanner(&g, &apps)? {
        println!("ok: {} appearances keep all {n} vertices temporally connected", apps.len());
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "not a temporal spanner: {} appearances",
            apps.len()
        )))
    }
}
