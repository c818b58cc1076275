use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use chainforge::ekeland::{density_profile, quasi_minimize, support_distance, EkelandParams, QuasiMinimizer};
use chainforge::filling::{ambient_metric, decompose_cycle, filling_radius, filling_volume, isoperimetric_fill, FillMode};
use chainforge::flatnorm::{flat_norm, flat_norm_mod_p, mass_p, Mode};
use chainforge::io::{
    parse_chain_json, parse_complex_json, parse_distance_csv, parse_function_json, parse_off, write_corpus,
    ComplexJson, CorpusSizes,
};
use chainforge::metric::{build_rips, kuratowski_embed, maximal_epsilon_net, NetStrategy};
use chainforge::number::{format_q, ExactReal, Q};
use chainforge::slicing::{is_critical, slice, slice_spectrum};
use chainforge::systolic::{loewner_check, systole, verify_chain, ClosedManifoldComplex, HarnessParams};
use chainforge::{Chain, Error, Result, WeightedComplex};

use crate::report::{sha256_hex, Run};
use crate::{ChainInput, Command, FillKind, Strategy};

/// Report plus the reason a reported check failed, if any.
pub struct Outcome {
    pub report: Value,
    pub failed: Option<String>,
}

fn ok(report: Value) -> Result<Outcome> {
    Ok(Outcome { report, failed: None })
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::ParseAt { line, message } => Error::ParseAt { line, message: format!("{}: {message}", path.display()) },
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn load_complex(run: &mut Run, role: &str, path: &Path) -> Result<WeightedComplex> {
    let text = run.read(role, path)?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some("off") => parse_off(&text).and_then(|m| m.complex()),
        Some("json") => parse_complex_json(&text),
        _ => Err(Error::Parse("expected a .off or .json complex".into())),
    };
    parsed.map_err(|e| in_file(path, e))
}

fn load_chain(run: &mut Run, input: &ChainInput) -> Result<Chain> {
    let ambient = match &input.ambient {
        Some(p) => Some(Arc::new(load_complex(run, "ambient", p)?)),
        None => None,
    };
    let text = run.read("chain", &input.chain)?;
    parse_chain_json(&text, ambient.as_ref()).map_err(|e| in_file(&input.chain, e))
}

fn load_metric(run: &mut Run, path: &Path) -> Result<chainforge::metric::FiniteMetricSpace> {
    let text = run.read("metric", path)?;
    parse_distance_csv(&text).map_err(|e| in_file(path, e))
}

fn load_manifold(run: &mut Run, path: &Path) -> Result<ClosedManifoldComplex> {
    ClosedManifoldComplex::new(Arc::new(load_complex(run, "mesh", path)?))
}

fn strategy(s: Strategy) -> NetStrategy {
    match s {
        Strategy::Farthest => NetStrategy::FarthestPoint,
        Strategy::Index => NetStrategy::IndexScan,
    }
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Flatnorm { input, p, relaxed } => {
            let mut run = Run::new("flatnorm");
            let t = load_chain(&mut run, &input)?;
            run.mark("load");
            let mode = if relaxed { Mode::Relaxed } else { Mode::Exact };
            let dec = match p {
                Some(p) => flat_norm_mod_p(&t, p, mode)?,
                None => flat_norm(&t, mode)?,
            };
            dec.verify(&t)?;
            run.mark("solve");
            ok(run.finish(to_value(&dec.report())?))
        }
        Command::Slice { input, function, p, at } => {
            let mut run = Run::new("slice");
            let t = load_chain(&mut run, &input)?;
            let text = run.read("function", &function)?;
            let u = parse_function_json(&text, t.complex().vertex_count()).map_err(|e| in_file(&function, e))?;
            run.mark("load");
            let result = match at {
                Some(r) => {
                    if is_critical(&u, &r) {
                        return Err(Error::Precondition(format!("level {} is a vertex value", format_q(&r))));
                    }
                    let s = slice(&t, &u, &r)?;
                    let sb = s.boundary().ok();
                    let m = match p {
                        Some(p) => mass_p(&s, p)?,
                        None => chainforge::flatnorm::mass(&s)?,
                    };
                    json!({
                        "level": ExactReal::from(&r),
                        "slice": s.to_json(),
                        "mass": ExactReal::from(&m),
                        "slice_is_cycle": sb.map(|b| b.is_zero()),
                    })
                }
                None => to_value(&slice_spectrum(&t, &u, p)?.report())?,
            };
            run.mark("slice");
            ok(run.finish(result))
        }
        Command::Embed { metric, epsilon, strategy: s } => {
            let mut run = Run::new("embed");
            let space = Arc::new(load_metric(&mut run, &metric)?);
            run.mark("load");
            let net = maximal_epsilon_net(&space, &epsilon, strategy(s))?;
            let emb = kuratowski_embed(&space, &net)?;
            let d = emb.distortion();
            let result = json!({
                "epsilon": ExactReal::from(&epsilon),
                "points": space.len(),
                "net": net,
                "expansion": ExactReal::from(&d.expansion),
                "contraction": ExactReal::from(&d.contraction),
                "additive_slack": ExactReal::from(&emb.additive_slack()),
                "injective": emb.image_space().is_ok(),
            });
            run.mark("embed");
            ok(run.finish(result))
        }
        Command::Rips { metric, scale, max_dim, budget, emit } => {
            let mut run = Run::new("rips");
            let space = Arc::new(load_metric(&mut run, &metric)?);
            run.mark("load");
            let k = build_rips(&space, &scale, max_dim, budget)?;
            run.mark("build");
            let counts: Vec<usize> = (0..=k.top_dim()).map(|d| k.count(d)).collect();
            let mut result = json!({ "scale": ExactReal::from(&scale), "max_dim": max_dim, "counts": counts });
            if let Some(path) = emit {
                let text = serde_json::to_string_pretty(&ComplexJson::from_complex(&k))? + "\n";
                std::fs::write(&path, &text)?;
                result["emitted"] = json!({ "path": path.display().to_string(), "sha256": sha256_hex(text.as_bytes()) });
            }
            ok(run.finish(result))
        }
        Command::Fillrad { input } => {
            let mut run = Run::new("fillrad");
            let l = load_chain(&mut run, &input)?;
            run.mark("load");
            let r = filling_radius(&l, l.complex())?;
            run.mark("solve");
            ok(run.finish(json!({
                "radius": ExactReal::from(&r.radius),
                "certificate": r.certificate.report(),
                "profile": r.profile,
            })))
        }
        Command::Fillvol { input, p, mode } => {
            let mut run = Run::new("fillvol");
            let l = load_chain(&mut run, &input)?;
            run.mark("load");
            let mode = match mode {
                FillKind::Exact => FillMode::Exact,
                FillKind::Greedy => FillMode::Greedy,
            };
            let cert = filling_volume(&l, p, mode)?;
            run.mark("solve");
            ok(run.finish(to_value(&cert.report())?))
        }
        Command::Decompose { input, p } => {
            let mut run = Run::new("decompose");
            let l = load_chain(&mut run, &input)?;
            run.mark("load");
            let metric = ambient_metric(l.complex())?;
            let dec = decompose_cycle(&l, p, &metric)?;
            dec.verify(p)?;
            run.mark("decompose");
            ok(run.finish(to_value(&dec.report())?))
        }
        Command::Systole { mesh } => {
            let mut run = Run::new("systole");
            let m = load_manifold(&mut run, &mesh)?;
            run.mark("load");
            let s = systole(&m)?;
            run.mark("systole");
            let torus = m.euler_characteristic() == 0 && m.is_orientable();
            let loewner = if torus { Some(loewner_check(&m)?) } else { None };
            let failed = loewner.as_ref().filter(|l| !l.holds).map(|_| "Loewner inequality violated".to_string());
            let report = run.finish(json!({
                "systole": s.summary(),
                "euler_characteristic": m.euler_characteristic(),
                "orientable": m.is_orientable(),
                "volume": ExactReal::from(&m.volume()?),
                "loewner": loewner.map(|l| l.report()),
            }));
            Ok(Outcome { report, failed })
        }
        Command::Verify { mesh, epsilon, strategy: s, budget } => {
            let mut run = Run::new("verify");
            let m = load_manifold(&mut run, &mesh)?;
            run.mark("load");
            let params = HarnessParams { epsilon, strategy: strategy(s), rips_budget: budget };
            let r = verify_chain(&m, &params)?;
            for (leg, d) in &r.timings {
                run.timing(leg, *d);
            }
            let failed = (r.systolic_holds == Some(false)).then(|| "Sys > 6 FillRad + 24 epsilon".to_string());
            Ok(Outcome { report: run.finish(to_value(&r.report())?), failed })
        }
        Command::Ekeland { input, p, epsilon, restarts, seed } => {
            let mut run = Run::new("ekeland");
            let l = load_chain(&mut run, &input)?;
            run.mark("load");
            let start = isoperimetric_fill(&l, p)?.certificate.t;
            run.mark("seed");
            let searches: Vec<Result<QuasiMinimizer>> = (0..restarts.max(1))
                .into_par_iter()
                .map(|i| {
                    let order_seed = (i > 0).then(|| seed.wrapping_add(i as u64));
                    quasi_minimize(&l, &start, p, &EkelandParams { epsilon: epsilon.clone(), order_seed })
                })
                .collect();
            let searches = searches.into_iter().collect::<Result<Vec<_>>>()?;
            let best = searches
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.mass.cmp(&b.1.mass).then(a.0.cmp(&b.0)))
                .map(|(_, q)| q)
                .expect("at least one search");
            run.mark("search");
            let metric = ambient_metric(l.complex())?;
            let profile = density_rows(best, &metric)?;
            run.mark("profile");
            let seed_distance = support_distance(&metric, &start, &l);
            let distance = support_distance(&metric, &best.s, &l);
            let failed = if !best.within_bound() {
                Some("filling mass exceeds (1+eps)/(1-eps) times the seed mass".to_string())
            } else if profile.iter().any(|r| !r["nondecreasing"].as_bool().unwrap_or(true)) {
                Some("density profile decreases".to_string())
            } else {
                None
            };
            let report = run.finish(json!({
                "best": best.report(),
                "restart_masses": searches.iter().map(|q| ExactReal::from(&q.mass)).collect::<Vec<_>>(),
                "support_distance": ExactReal::from(&distance),
                "seed_support_distance": ExactReal::from(&seed_distance),
                "density": profile,
            }));
            Ok(Outcome { report, failed })
        }
        Command::Corpus { out, seed, circles, tori, hex_tori, random } => {
            let mut run = Run::new("corpus");
            let sizes = CorpusSizes { circles, tori, hex_tori, random };
            let files = write_corpus(&out, seed, &sizes)?;
            run.mark("write");
            let mut listing = Vec::with_capacity(files.len());
            for f in &files {
                let bytes = std::fs::read(f)?;
                let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                listing.push(json!({ "file": name, "sha256": sha256_hex(&bytes) }));
            }
            ok(run.finish(json!({ "seed": seed, "files": listing })))
        }
    }
}

/// Density table at every vertex of the filling off the cycle, at each
/// distinct distance below its distance to the cycle.
fn density_rows(q: &QuasiMinimizer, metric: &chainforge::metric::FiniteMetricSpace) -> Result<Vec<Value>> {
    let l_verts = q.l.support_vertices();
    let k = q.l.dim();
    let mut rows = Vec::new();
    for x in q.s.support_vertices() {
        if l_verts.binary_search(&x).is_ok() {
            continue;
        }
        let tau = metric.dist_to_set(x, &l_verts);
        let mut radii: Vec<Q> =
            metric.row(x).iter().filter(|d| tau.as_ref().map_or(true, |t| *d < t)).cloned().collect();
        radii.sort();
        radii.dedup();
        for row in density_profile(q, metric, &[x], &radii)? {
            rows.push(to_value(&row.report(k))?);
        }
    }
    Ok(rows)
}
