use anyhow::Result;
use sandpile_lab::acceptance::run_all;
use sandpile_lab::bipartite::{grade_kmn, phi_kmn, psi_kmn, walk_class};
use sandpile_lab::complete::{embed_staircase, phi_kn, psi_kn};
use sandpile_lab::enumeration::{
    count_pattern, count_polyominoes, enumerate_pattern, enumerate_polyominoes,
    verify_cyclic_lemma, PatternKind, VerifyMode,
};
use sandpile_lab::frames::{config_to_framed_pair, Direction};
use sandpile_lab::graph::{
    distance_profile, is_parking, is_recurrent, is_stable, topple, untopple, GraphSpec,
};
use sandpile_lab::operators::{beta, normalize, phi_with_subset, psi_with_subset, Target};
use sandpile_lab::render;
use sandpile_lab::{
    BinomialWord, CompleteConfig, FramedPair, Graph, Limits, Point, Polyomino,
    SortedBipartiteConfig,
};
use serde_json::{json, Value};

use crate::io::{load_configuration, load_json, resolve_limits, table, usage};
use crate::{BipartiteOp, Cli, Command, Format, GeneralOp, JumpArg, KindArg, KnOp, TargetArg};

pub struct Output {
    pub text: String,
    pub status: u8,
}

enum Body {
    Json(Value),
    Text(String),
}

pub fn run(cli: Cli) -> Result<Output> {
    let limits = resolve_limits(cli.config_file.as_deref(), cli.threads)?;
    let renders = matches!(cli.command, Command::Render { .. });
    let format = cli.format.unwrap_or(match cli.command {
        Command::Render { .. } => Format::Ascii,
        Command::Selftest => Format::Table,
        _ => Format::Json,
    });
    if !renders && matches!(format, Format::Ascii | Format::Svg) {
        return Err(usage(
            "--format ascii and svg are only available for render",
        ));
    }
    let (body, status) = dispatch(cli.command, format, &limits)?;
    let text = match body {
        Body::Text(t) => t,
        Body::Json(v) => match format {
            Format::Table => table(&v),
            _ if cli.pretty => format!("{}\n", serde_json::to_string_pretty(&v)?),
            _ => format!("{v}\n"),
        },
    };
    Ok(Output { text, status })
}

fn load_graph(arg: &str) -> Result<Graph> {
    let spec: GraphSpec = load_json(arg, "graph")?;
    Ok(Graph::from_spec(&spec)?)
}

fn load_bipartite(arg: &str) -> Result<SortedBipartiteConfig> {
    load_json(arg, "bipartite configuration")
}

fn parse_word(s: &str) -> Result<BinomialWord> {
    Ok(s.parse()?)
}

fn parse_point(s: &str) -> Result<Point> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("anchor must look like x,y, got {s:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| usage(format!("anchor coordinate {t:?} is not an integer")))
    };
    Ok(Point::new(parse(x)?, parse(y)?))
}

fn parse_enum<T: clap::ValueEnum>(raw: &str, what: &str) -> Result<T> {
    T::from_str(raw, false).map_err(|_| usage(format!("unknown {what} {raw:?}")))
}

fn polyomino_json(p: &Polyomino) -> Value {
    json!({"upper": p.upper().to_string(), "lower": p.lower().to_string()})
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn dispatch(command: Command, format: Format, limits: &Limits) -> Result<(Body, u8)> {
    let ok = |v: Value| Ok((Body::Json(v), 0));
    match command {
        Command::Classify { graph, config } => {
            let g = load_graph(&graph)?;
            let c = load_configuration(&config)?;
            let profile = distance_profile(&g, &c)?;
            let stable = is_stable(&g, &c);
            let (recurrent, parking) = if stable {
                (is_recurrent(&g, &c)?, is_parking(&g, &c)?)
            } else {
                (false, false)
            };
            ok(json!({
                "stable": stable,
                "recurrent": recurrent,
                "parking": parking,
                "profile": profile.counts,
            }))
        }
        Command::Apply {
            graph,
            config,
            bipartite,
            op,
            vertex,
        } => {
            if let Some(b) = bipartite {
                let c = load_bipartite(&b)?;
                let op: BipartiteOp = parse_enum(&op, "K_{m,n} operator")?;
                let result = match op {
                    BipartiteOp::Grade => return ok(json!({"grade": grade_kmn(&c)?})),
                    BipartiteOp::Psi => psi_kmn(&c)?,
                    BipartiteOp::Phi => phi_kmn(&c)?,
                    BipartiteOp::TNonsink => c.t_nonsink()?,
                    BipartiteOp::TSink => c.t_sink()?,
                    BipartiteOp::TNonsinkInverse => c.t_nonsink_inverse()?,
                    BipartiteOp::TSinkInverse => c.t_sink_inverse()?,
                    BipartiteOp::RhoBeta => c.rho_beta(),
                };
                return ok(json!({"result": to_value(&result)?}));
            }
            let (Some(graph), Some(config)) = (graph, config) else {
                return Err(usage("apply needs --graph with --config, or --bipartite"));
            };
            let g = load_graph(&graph)?;
            let c = load_configuration(&config)?;
            let op: GeneralOp = parse_enum(&op, "operator")?;
            let (result, subset) = match op {
                GeneralOp::Psi => psi_with_subset(&g, &c, limits)?,
                GeneralOp::Phi => phi_with_subset(&g, &c, limits)?,
                GeneralOp::Beta => (beta(&g, &c)?, None),
                GeneralOp::Topple | GeneralOp::Untopple => {
                    let v = vertex.ok_or_else(|| usage("topple and untopple need --vertex"))?;
                    let out = if op == GeneralOp::Topple {
                        topple(&g, &c, v)?
                    } else {
                        untopple(&g, &c, v)?
                    };
                    (out, None)
                }
            };
            let mut v = json!({"result": result.heights});
            if matches!(op, GeneralOp::Psi | GeneralOp::Phi) {
                v["subset"] = json!(subset);
            }
            ok(v)
        }
        Command::Walk {
            bipartite,
            graph,
            config,
            target,
        } => {
            if let Some(b) = bipartite {
                let c = load_bipartite(&b)?;
                let walk = walk_class(&c)?;
                let grades = walk.iter().map(grade_kmn).collect::<Result<Vec<_>, _>>()?;
                return ok(json!({"walk": to_value(&walk)?, "grades": grades}));
            }
            let (Some(graph), Some(config)) = (graph, config) else {
                return Err(usage("walk needs --bipartite, or --graph with --config"));
            };
            let g = load_graph(&graph)?;
            let c = load_configuration(&config)?;
            let target = match target {
                TargetArg::Recurrent => Target::Recurrent,
                TargetArg::Parking => Target::Parking,
            };
            let r = normalize(&g, &c, target, true, limits)?;
            let trajectory: Vec<Vec<i64>> = r
                .trajectory
                .unwrap_or_default()
                .into_iter()
                .map(|c| c.heights)
                .collect();
            ok(json!({
                "fixed_point": r.fixed_point.heights,
                "steps": r.steps,
                "trajectory": trajectory,
            }))
        }
        Command::Frame {
            upper,
            lower,
            anchor,
            pair,
            bipartite,
            jump,
            pos,
        } => {
            let mut p = if let Some(b) = bipartite {
                config_to_framed_pair(&load_bipartite(&b)?)?
            } else if let Some(raw) = pair {
                load_json::<FramedPair>(&raw, "framed pair")?
            } else if let (Some(u), Some(l)) = (upper, lower) {
                FramedPair::new(parse_word(&u)?, parse_word(&l)?, parse_point(&anchor)?)?
            } else {
                return Err(usage(
                    "frame needs --upper and --lower, --pair, or --bipartite",
                ));
            };
            if let Some(j) = jump {
                p = p.jump(match j {
                    JumpArg::Next => Direction::Next,
                    JumpArg::Prev => Direction::Prev,
                })?;
            }
            let part: Vec<Value> = p
                .stable_intersections_raw()
                .into_iter()
                .map(|z| {
                    let (u, l) = p.member_at(z);
                    json!({"upper": u.to_string(), "lower": l.to_string()})
                })
                .collect();
            let mut v = json!({
                "pair": to_value(&p)?,
                "measure": to_value(&p.measure())?,
                "stable_intersection": p.is_stable_intersection(),
                "intersections": to_value(&p.stable_intersections())?,
                "intersections_raw": to_value(&p.stable_intersections_raw())?,
                "part": part,
                "polyomino": polyomino_json(&p.polyomino()),
            });
            if !pos.is_empty() {
                let values: serde_json::Map<String, Value> = pos
                    .iter()
                    .map(|&j| (j.to_string(), json!(sandpile_lab::frames::pos(&p, j))))
                    .collect();
                v["pos"] = Value::Object(values);
            }
            ok(v)
        }
        Command::CyclicVerify { m, n, sample, seed } => {
            let mode = match sample {
                Some(count) => VerifyMode::Sample { count, seed },
                None => VerifyMode::Exhaustive,
            };
            let report = verify_cyclic_lemma(m, n, mode, limits)?;
            let status = if report.ok() {
                0
            } else {
                eprintln!("error: cyclic lemma check failed for ({m}, {n})");
                1
            };
            Ok((Body::Json(report.to_json()), status))
        }
        Command::Enumerate { m, n, pattern } => {
            let list = match (m, n, pattern) {
                (Some(m), Some(n), None) => enumerate_polyominoes(m, n, limits)?,
                (None, None, Some(p)) => enumerate_pattern(&parse_word(&p)?, limits)?,
                _ => return Err(usage("enumerate needs --m and --n, or --pattern")),
            };
            ok(Value::Array(list.iter().map(polyomino_json).collect()))
        }
        Command::Count {
            m,
            n,
            a,
            b,
            c,
            kind,
            brute,
        } => {
            let report = match (m, n, a, b, c) {
                (Some(m), Some(n), None, None, None) => count_polyominoes(m, n, brute, limits)?,
                (None, None, Some(a), Some(b), Some(c)) => {
                    let kind = match kind {
                        KindArg::Simple => PatternKind::Simple,
                        KindArg::Double => PatternKind::Double,
                    };
                    count_pattern(a, b, c, kind, brute, limits)?
                }
                _ => return Err(usage("count needs --m and --n, or --a, --b and --c")),
            };
            let status = if brute && !report.agreement() { 1 } else { 0 };
            Ok((Body::Json(report.to_json()), status))
        }
        Command::Kn { config, op } => {
            let v: CompleteConfig = load_json(&config, "K_n configuration")?;
            match op {
                KnOp::Embed => ok(json!({"result": to_value(&embed_staircase(&v)?)?})),
                KnOp::Phi | KnOp::Psi => {
                    let r = if op == KnOp::Phi {
                        phi_kn(&v)?
                    } else {
                        psi_kn(&v)?
                    };
                    ok(json!({"result": to_value(&r.config)?, "steps": r.steps}))
                }
            }
        }
        Command::Render {
            upper,
            lower,
            bipartite,
        } => {
            let poly = if let Some(b) = bipartite {
                config_to_framed_pair(&load_bipartite(&b)?)?.polyomino()
            } else if let (Some(u), Some(l)) = (upper, lower) {
                Polyomino::new(parse_word(&u)?, parse_word(&l)?)?
            } else {
                return Err(usage("render needs --upper and --lower, or --bipartite"));
            };
            Ok(match format {
                Format::Ascii => (Body::Text(render::ascii(&poly)), 0),
                Format::Svg => (Body::Text(render::svg(&poly)), 0),
                Format::Json | Format::Table => {
                    let mut v = polyomino_json(&poly);
                    v["area"] = json!(poly.area());
                    v["m"] = json!(poly.m());
                    v["n"] = json!(poly.n());
                    (Body::Json(v), 0)
                }
            })
        }
        Command::Selftest => {
            let outcomes = run_all(limits);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let status = u8::from(failed > 0);
            if format == Format::Json {
                let items: Vec<Value> = outcomes
                    .iter()
                    .map(|o| {
                        json!({
                            "id": o.id,
                            "title": o.title,
                            "passed": o.passed,
                            "detail": o.detail,
                            "seconds": o.elapsed.as_secs_f64(),
                        })
                    })
                    .collect();
                return Ok((Body::Json(Value::Array(items)), status));
            }
            let mut text: String = outcomes.iter().map(|o| o.line() + "\n").collect();
            text.push_str(&format!(
                "acceptance: {} passed, {} failed\n",
                outcomes.len() - failed,
                failed
            ));
            Ok((Body::Text(text), status))
        }
    }
}
