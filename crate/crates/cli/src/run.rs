use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use polarbranch::diagram::{CanonicalRep, LatticePoint, NewtonDiagram};
use polarbranch::num::{fmt_q, parse_int};
use polarbranch::{
    predict, verify_explicit, verify_prediction, CharSequence, ContinuedFraction, PolarPrediction, PuiseuxSeries,
    VerifyOptions, WitnessBranch,
};
use serde_json::json;

use crate::{CharArg, Cli, Command, DiagramAction, DiagramInput, Format};

pub struct Output {
    pub body: String,
    pub code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

pub fn report_error(format: Format, e: &anyhow::Error) {
    let msg = format!("{e:#}");
    if format == Format::Json {
        eprintln!("{}", json!({ "error": msg }));
    } else {
        eprintln!("error: {msg}");
    }
}

fn json_body(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn unsupported(format: Format, what: &str) -> anyhow::Error {
    let name = format!("{format:?}").to_lowercase();
    anyhow!("format {name} is not available for {what}")
}

fn parse_char(arg: &CharArg) -> Result<CharSequence> {
    let s = arg.char.as_deref().or(arg.positional.as_deref()).ok_or_else(|| anyhow!("missing characteristic"))?;
    s.parse::<CharSequence>().with_context(|| format!("invalid characteristic {s:?}"))
}

fn banner(cli: &Cli, what: &str) -> String {
    if cli.quiet || cli.format != Format::Text {
        String::new()
    } else {
        format!("polarbranch {}: {what}\n", env!("CARGO_PKG_VERSION"))
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Predict { char, k, polar_only } => {
            let cs = parse_char(char)?;
            let p = predict(&cs, *k)?;
            prediction_output(cli, &p, *polar_only, "predict")
        }
        Command::Example { name, k, polar_only } => {
            let cs = match name.as_str() {
                "ex1" => CharSequence::from_u64s(&[12, 16, 31]),
                _ => CharSequence::from_u64s(&[10, 14, 15]),
            }
            .expect("the example classes are valid");
            let p = predict(&cs, *k)?;
            prediction_output(cli, &p, *polar_only, name)
        }
        Command::Verify { char, k, seeds, trunc_extra, x_trunc, max_seeds, root } => {
            let report = match root {
                Some(r) => {
                    let series: PuiseuxSeries = r.parse()?;
                    let w = WitnessBranch::from_root(series, *x_trunc)?;
                    if char.char.is_some() || char.positional.is_some() {
                        let cs = parse_char(char)?;
                        if cs != w.cs {
                            bail!("root has characteristic {}, not {cs}", w.cs);
                        }
                    }
                    verify_explicit(&w, *k)?
                }
                None => {
                    let cs = parse_char(char)?;
                    let opts = VerifyOptions { extra_terms: *trunc_extra, x_trunc: *x_trunc, max_seeds: *max_seeds };
                    verify_prediction(&cs, *k, seeds, &opts)?
                }
            };
            let body = match cli.format {
                Format::Text => banner(cli, "verify") + &report.text(),
                Format::Json => json_body(report.to_json()),
                f => return Err(unsupported(f, "verify")),
            };
            Ok(Output { body, code: report.exit_code() as u8 })
        }
        Command::Diagram { action } => diagram(cli, action),
        Command::Contfrac { ratio } => contfrac(cli, ratio),
    }
}

fn prediction_output(cli: &Cli, p: &PolarPrediction, polar_only: bool, what: &str) -> Result<Output> {
    let body = match cli.format {
        Format::Text => banner(cli, what) + &p.text_report(),
        Format::Json => {
            let mut v = p.to_json();
            v["eggers_wall"] = p.eggers_wall(!polar_only).to_json();
            json_body(v)
        }
        Format::Dot => p.eggers_wall(!polar_only).to_dot(),
        Format::Svg => return Err(unsupported(Format::Svg, what)),
    };
    Ok(Output::ok(body))
}

fn parse_ratio(s: &str) -> Result<(num_bigint::BigInt, num_bigint::BigInt)> {
    let (m, n) = s.split_once('/').ok_or_else(|| anyhow!("expected m/n, got {s:?}"))?;
    let m = parse_int(m.trim()).ok_or_else(|| anyhow!("invalid integer {m:?}"))?;
    let n = parse_int(n.trim()).ok_or_else(|| anyhow!("invalid integer {n:?}"))?;
    Ok((m, n))
}

fn parse_points(s: &str) -> Result<Vec<LatticePoint>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or_else(|| anyhow!("expected x,y, got {p:?}"))?;
            let x = parse_int(x.trim()).ok_or_else(|| anyhow!("invalid integer {x:?}"))?;
            let y = parse_int(y.trim()).ok_or_else(|| anyhow!("invalid integer {y:?}"))?;
            Ok(LatticePoint { x, y })
        })
        .collect()
}

fn load_diagram(d: &DiagramInput) -> Result<NewtonDiagram> {
    if let Some(e) = &d.elementary {
        let (m, n) = parse_ratio(e)?;
        if m <= 0.into() || n <= 0.into() {
            bail!("elementary diagram needs positive m and n");
        }
        return Ok(NewtonDiagram::elementary(m, n));
    }
    if let Some(v) = &d.vertices {
        return Ok(NewtonDiagram::from_vertices(parse_points(v)?)?);
    }
    if let Some(path) = &d.input {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text).context("input is not JSON")?;
        if value.get("vertices").is_some() {
            return serde_json::from_value(value).context("invalid diagram");
        }
        let rep: CanonicalRep = serde_json::from_value(value).context("invalid canonical representation")?;
        return Ok(rep.to_diagram());
    }
    bail!("give a diagram with --elementary, --vertices or --input")
}

fn diagram_output(cli: &Cli, d: &NewtonDiagram, long: bool, what: &str) -> Result<Output> {
    let rep = d.canonical_rep(long);
    let body = match cli.format {
        Format::Text => format!("{}{rep}\n", banner(cli, what)),
        Format::Json => json_body(json!({ "diagram": d, "canonical": rep, "text": rep.to_string() })),
        Format::Svg => d.to_svg(),
        Format::Dot => return Err(unsupported(Format::Dot, what)),
    };
    Ok(Output::ok(body))
}

fn diagram(cli: &Cli, action: &DiagramAction) -> Result<Output> {
    match action {
        DiagramAction::Derive { diagram, k, lattice } => {
            let d = load_diagram(diagram)?;
            let out = if *lattice { d.symbolic_derivative(*k)? } else { d.derivative_closed_form(*k) };
            diagram_output(cli, &out, false, "diagram derive")
        }
        DiagramAction::Canonical { diagram, long } => {
            let d = load_diagram(diagram)?;
            diagram_output(cli, &d, *long, "diagram canonical")
        }
        DiagramAction::Hull { points } => {
            let d = NewtonDiagram::from_support(parse_points(points)?)?;
            diagram_output(cli, &d, false, "diagram hull")
        }
        DiagramAction::Sum { a, b } => {
            let a = NewtonDiagram::from_vertices(parse_points(a)?)?;
            let b = NewtonDiagram::from_vertices(parse_points(b)?)?;
            diagram_output(cli, &a.minkowski_sum(&b), false, "diagram sum")
        }
    }
}

fn contfrac(cli: &Cli, ratio: &str) -> Result<Output> {
    let (m, n) = parse_ratio(ratio)?;
    let cf = ContinuedFraction::expand(&m, &n)?;
    let even = cf.to_even_length();
    let rows: Vec<(usize, String, String, String, String)> = (0..=cf.s())
        .map(|i| {
            let j = i as isize;
            (
                i,
                cf.partial_quotients()[i].to_string(),
                cf.p(j).to_string(),
                cf.q(j).to_string(),
                fmt_q(&cf.convergent(j)),
            )
        })
        .collect();
    let body = match cli.format {
        Format::Text => {
            let mut s = banner(cli, "contfrac");
            let _ = writeln!(s, "{} = {cf}", fmt_q(&cf.value()));
            let _ = writeln!(s, "even length: {even}");
            let _ = writeln!(s, "{:>4} {:>8} {:>8} {:>8} {:>10}", "i", "h_i", "p_i", "q_i", "p_i/q_i");
            for (i, h, p, q, v) in &rows {
                let _ = writeln!(s, "{i:>4} {h:>8} {p:>8} {q:>8} {v:>10}");
            }
            s
        }
        Format::Json => {
            let int = |v: &num_bigint::BigInt| serde_json::to_value(polarbranch::num::JsonInt(v.clone())).expect("int");
            json_body(json!({
                "ratio": fmt_q(&cf.value()),
                "partial_quotients": cf.partial_quotients().iter().map(int).collect::<Vec<_>>(),
                "even_length": even.partial_quotients().iter().map(int).collect::<Vec<_>>(),
                "convergents": (0..=cf.s()).map(|i| {
                    let j = i as isize;
                    json!({ "i": i, "p": int(cf.p(j)), "q": int(cf.q(j)), "value": fmt_q(&cf.convergent(j)) })
                }).collect::<Vec<_>>(),
            }))
        }
        f => return Err(unsupported(f, "contfrac")),
    };
    Ok(Output::ok(body))
}
