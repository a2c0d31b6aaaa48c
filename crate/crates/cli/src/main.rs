mod suites;

use std::io::Read;
use std::process::ExitCode;

use badseq::hierarchy::{cichon, evaluate, Budget, ControlFunction, HierarchyKind, DEFAULT_MAX_STEPS};
use badseq::length::{check_sandwich, length_function, m_upper, max_bad_sequence, LengthQuery, Witness};
use badseq::nwqo::{Element, NwqoTerm};
use badseq::ordinal::Ordinal;
use badseq::reflect::{order_type, residual_reflection, verify_reflection, Reflection};
use badseq::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "badseq", version, about = "Controlled bad sequences over normed wqos")]
struct Cli {
    /// Step budget for searches and hierarchy evaluation.
    #[arg(long, global = true, env = "BADSEQ_BUDGET", default_value_t = DEFAULT_MAX_STEPS, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ordinal arithmetic on CNF expressions.
    #[command(subcommand)]
    Ordinal(OrdinalCmd),
    /// Hardy, Cichon and fast-growing hierarchies.
    #[command(subcommand)]
    Hierarchy(HierarchyCmd),
    /// Length functions, witnesses and bounds.
    #[command(subcommand)]
    Length(LengthCmd),
    /// The reflections between ordinals and powerset orderings.
    #[command(subcommand)]
    Reflect(ReflectCmd),
    /// Runs every property suite and prints a pass/fail matrix.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = suites::Profile::Desk)]
        profile: suites::Profile,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OrdinalCmd {
    Cmp { a: String, b: String },
    Natsum { a: String, b: String },
    Natprod { a: String, b: String },
    Norm { a: String },
    Fundamental { a: String, #[arg(long)] x: u64 },
    Predecessor { a: String, #[arg(long)] x: u64 },
}

#[derive(Subcommand)]
enum HierarchyCmd {
    Eval {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "succ")]
        control: String,
        #[arg(long)]
        ordinal: String,
        #[arg(long)]
        x: String,
    },
}

#[derive(Args)]
struct TermArgs {
    #[arg(long)]
    term: String,
    /// Forbidden elements as a JSON array; the query runs over the residual.
    #[arg(long)]
    forbidden: Option<String>,
    #[arg(long, default_value = "succ")]
    control: String,
}

#[derive(Subcommand)]
enum LengthCmd {
    /// `L_{A,g}(n)`, optionally with a certified witness.
    Compute {
        #[command(flatten)]
        t: TermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        witness: bool,
    },
    /// `n`, `L`, and the ordinal bounds for `n` in a range, as CSV by default.
    Sweep {
        #[command(flatten)]
        t: TermArgs,
        #[arg(long, default_value_t = 0)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// Re-verifies a witness dump from `length compute --witness --format json`.
    Recheck {
        /// Path to the dump, or `-` for stdin.
        file: String,
    },
    /// The derivative-operator recursion `M_{α,g}(n)`.
    Mupper {
        #[arg(long)]
        ordinal: String,
        #[arg(long, default_value = "succ")]
        control: String,
        #[arg(long)]
        n: u64,
    },
    /// Lower and upper bounds for `P_f(ℕ^d)` at one `n`.
    Sandwich {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "succ")]
        control: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Ord2maj,
    Maj2min,
    Min2prodmaj,
    Residual,
}

#[derive(Args)]
struct ReflectionArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Residual only: the term `A`.
    #[arg(long)]
    term: Option<String>,
    /// Residual only: the element `X` as JSON.
    #[arg(long)]
    x: Option<String>,
    /// Residual only: the norm budget `n`.
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Subcommand)]
enum ReflectCmd {
    Apply {
        #[command(flatten)]
        r: ReflectionArgs,
        /// Source element as JSON (ordinals as strings).
        #[arg(long)]
        element: String,
    },
    Verify {
        #[command(flatten)]
        r: ReflectionArgs,
        #[arg(long)]
        nmax: u64,
    },
}

/// Exit codes: 0 pass, 1 property failure, 2 usage or parse, 3 budget.
enum Failure {
    Property(Value),
    Usage(String),
    Budget(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(json!({"status": "budget_exceeded", "error": e.to_string()}))
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Out = Result<(), Failure>;

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn parse_json(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("invalid JSON: {e}")))
}

fn control(s: &str) -> Result<ControlFunction, Failure> {
    let g: ControlFunction = parse(s)?;
    g.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(g)
}

fn emit(fmt: Format, v: &Value, text: impl FnOnce() -> String) {
    match fmt {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).unwrap()),
        _ => println!("{}", text()),
    }
}

fn cmd_ordinal(c: &OrdinalCmd, fmt: Format) -> Out {
    let (op, v) = match c {
        OrdinalCmd::Cmp { a, b } => {
            let (a, b): (Ordinal, Ordinal) = (parse(a)?, parse(b)?);
            let r = match a.cmp(&b) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            ("cmp", r.to_string())
        }
        OrdinalCmd::Natsum { a, b } => ("natsum", parse::<Ordinal>(a)?.nat_sum(&parse(b)?).to_string()),
        OrdinalCmd::Natprod { a, b } => ("natprod", parse::<Ordinal>(a)?.nat_product(&parse(b)?).to_string()),
        OrdinalCmd::Norm { a } => ("norm", parse::<Ordinal>(a)?.norm().to_string()),
        OrdinalCmd::Fundamental { a, x } => ("fundamental", parse::<Ordinal>(a)?.fundamental(*x)?.to_string()),
        OrdinalCmd::Predecessor { a, x } => ("predecessor", parse::<Ordinal>(a)?.predecessor(*x)?.to_string()),
    };
    emit(fmt, &json!({"op": op, "result": v}), || v.clone());
    Ok(())
}

fn cmd_hierarchy(c: &HierarchyCmd, budget: u64, fmt: Format) -> Out {
    let HierarchyCmd::Eval { kind, control: g, ordinal, x } = c;
    let kind: HierarchyKind = parse(kind)?;
    let g = control(g)?;
    let a: Ordinal = parse(ordinal)?;
    let x: BigUint = x.parse().map_err(|_| Failure::Usage(format!("invalid natural '{x}'")))?;
    let mut b = Budget::new(budget);
    match evaluate(kind, &g, &a, &x, &mut b) {
        Ok(v) => {
            let r = json!({"kind": kind_name(kind), "control": g.to_string(), "ordinal": a.to_string(), "x": x.to_string(), "value": v.to_string(), "steps": b.steps_used});
            emit(fmt, &r, || v.to_string());
            Ok(())
        }
        Err(e) if e.is_budget() => Err(Failure::Budget(json!({
            "status": "budget_exceeded",
            "kind": kind_name(kind),
            "ordinal": a.to_string(),
            "x": x.to_string(),
            "steps": b.steps_used,
            "error": e.to_string(),
        }))),
        Err(e) => Err(e.into()),
    }
}

fn kind_name(k: HierarchyKind) -> &'static str {
    match k {
        HierarchyKind::Hardy => "hardy",
        HierarchyKind::Cichon => "cichon",
        HierarchyKind::Fast => "fast",
    }
}

fn term_of(t: &TermArgs) -> Result<NwqoTerm, Failure> {
    let base: NwqoTerm = parse(&t.term)?;
    match &t.forbidden {
        None => Ok(base),
        Some(f) => {
            let forb = base.sequence_from_json(&parse_json(f)?)?;
            Ok(NwqoTerm::Residual(Box::new(base), forb))
        }
    }
}

fn budget_report(term: &NwqoTerm, n: u64, q: &LengthQuery, e: &Error) -> Failure {
    Failure::Budget(json!({
        "status": "budget_exceeded",
        "term": term.to_string(),
        "n": n,
        "steps": q.budget.steps_used,
        "error": e.to_string(),
    }))
}

fn cmd_length(c: &LengthCmd, budget: u64, fmt: Format) -> Out {
    match c {
        LengthCmd::Compute { t, n, witness } => {
            let term = term_of(t)?;
            let g = control(&t.control)?;
            let mut q = LengthQuery::new(term.clone(), g.clone(), *n).with_budget(budget);
            let mut r = json!({"term": t.term, "control": g.to_string(), "n": n});
            if let Some(f) = &t.forbidden {
                r["forbidden"] = parse_json(f)?;
            }
            let res = if *witness {
                max_bad_sequence(&mut q).map(|w| {
                    r["length"] = json!(w.sequence.len().to_string());
                    r["witness"] = w.to_json(&term);
                    w.is_certified()
                })
            } else {
                length_function(&mut q).map(|l| {
                    r["length"] = json!(l.to_string());
                    true
                })
            };
            match res {
                Ok(ok) => {
                    r["steps"] = json!(q.budget.steps_used);
                    emit(fmt, &r, || {
                        let mut s = r["length"].as_str().unwrap().to_string();
                        if let Some(w) = r.get("witness") {
                            s += &format!("\nwitness: {}", w["sequence"]);
                        }
                        s
                    });
                    if ok {
                        Ok(())
                    } else {
                        Err(Failure::Property(json!({"error": "witness failed certification", "report": r})))
                    }
                }
                Err(e) if e.is_budget() => Err(budget_report(&term, *n, &q, &e)),
                Err(e) => Err(e.into()),
            }
        }
        LengthCmd::Sweep { t, n_min, n_max } => sweep(t, *n_min, *n_max, budget, fmt),
        LengthCmd::Recheck { file } => recheck(file, fmt),
        LengthCmd::Mupper { ordinal, control: g, n } => {
            let a: Ordinal = parse(ordinal)?;
            let g = control(g)?;
            let mut b = Budget::new(budget);
            let v = m_upper(&a, &g, *n, &mut b)?;
            let r = json!({"ordinal": a.to_string(), "control": g.to_string(), "n": n, "m_upper": v.to_string(), "steps": b.steps_used});
            emit(fmt, &r, || v.to_string());
            Ok(())
        }
        LengthCmd::Sandwich { d, control: g, n } => {
            let g = control(g)?;
            let rep = check_sandwich(*d, &g, *n, budget)?;
            let v = rep.to_json();
            emit(fmt, &v, || {
                rep.checks
                    .iter()
                    .map(|c| format!("{:<16} {:<22} {} vs {}", c.name, format!("{:?}", c.status), c.lhs.as_deref().unwrap_or("-"), c.rhs.as_deref().unwrap_or("-")))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            if rep.violated() {
                Err(Failure::Property(v))
            } else {
                Ok(())
            }
        }
    }
}

fn sweep(t: &TermArgs, n_min: u64, n_max: u64, budget: u64, fmt: Format) -> Out {
    let term = term_of(t)?;
    let g = control(&t.control)?;
    // bounds only make sense for terms with an order type
    let alpha = order_type(&term).ok();
    let h = ControlFunction::FourXTimes(Box::new(g.clone()));
    let mut rows = Vec::new();
    let cell = |r: badseq::Result<BigUint>| match r {
        Ok(v) => v.to_string(),
        Err(e) if e.is_budget() => "budget".to_string(),
        Err(_) => String::new(),
    };
    for n in n_min..=n_max {
        let mut q = LengthQuery::new(term.clone(), g.clone(), n).with_budget(budget);
        let l = cell(length_function(&mut q));
        let (m, hb) = match &alpha {
            Some(a) => {
                let m = cell(m_upper(a, &g, n, &mut Budget::new(budget)));
                let k = a.norm_u64().max(1);
                let hb = if n > 0 { cell(cichon(&h, a, &BigUint::from(4 * k * n), &mut Budget::new(budget))) } else { String::new() };
                (m, hb)
            }
            None => (String::new(), String::new()),
        };
        rows.push([n.to_string(), l, m, hb]);
    }
    let header = ["n", "length", "m_upper", "h_bound"];
    match fmt {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| json!({"n": r[0], "length": r[1], "m_upper": r[2], "h_bound": r[3]}))
                .collect();
            let out = json!({"term": term.to_string(), "control": g.to_string(), "order_type": alpha.map(|a| a.to_string()), "rows": v});
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        _ => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(header).map_err(|e| Failure::Usage(e.to_string()))?;
            for r in &rows {
                w.write_record(r).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    if rows.iter().any(|r| r[1] == "budget") {
        return Err(Failure::Budget(json!({"status": "budget_exceeded", "term": term.to_string()})));
    }
    Ok(())
}

fn recheck(file: &str, fmt: Format) -> Out {
    let mut s = String::new();
    if file == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
    } else {
        s = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{file}: {e}")))?;
    }
    let v = parse_json(&s)?;
    let field = |k: &str| v.get(k).ok_or_else(|| Failure::Usage(format!("dump lacks '{k}'")));
    let term_s = field("term")?.as_str().ok_or_else(|| Failure::Usage("term must be a string".into()))?;
    let t = TermArgs {
        term: term_s.to_string(),
        forbidden: v.get("forbidden").map(|f| f.to_string()),
        control: field("control")?.as_str().unwrap_or("succ").to_string(),
    };
    let term = term_of(&t)?;
    let g = control(&t.control)?;
    let n = field("n")?.as_u64().ok_or_else(|| Failure::Usage("n must be a natural".into()))?;
    let seq = term.sequence_from_json(&field("witness")?["sequence"])?;
    let len = seq.len();
    let w = Witness::certify(&term, seq, &g, n)?;
    let claimed = field("length")?.as_str().and_then(|s| s.parse::<usize>().ok());
    let length_matches = claimed.is_none_or(|c| c == len);
    let ok = w.is_certified() && length_matches;
    let r = json!({
        "term": term_s,
        "n": n,
        "length": len,
        "certified_bad": w.certified_bad,
        "certified_controlled": w.certified_controlled,
        "length_matches": length_matches,
        "passed": ok,
    });
    emit(fmt, &r, || if ok { format!("ok: length {len} bad and controlled") } else { format!("FAILED: {r}") });
    if ok {
        Ok(())
    } else {
        Err(Failure::Property(r))
    }
}

fn reflection(a: &ReflectionArgs) -> Result<Reflection, Failure> {
    Ok(match a.which {
        Which::Ord2maj => Reflection::ord_to_maj(a.d)?,
        Which::Maj2min => Reflection::maj_to_min(a.d)?,
        Which::Min2prodmaj => Reflection::min_to_prod_maj(a.d)?,
        Which::Residual => {
            let need = |o: &Option<String>, k: &str| o.clone().ok_or_else(|| Failure::Usage(format!("residual needs --{k}")));
            let term: NwqoTerm = parse(&need(&a.term, "term")?)?;
            let x = term.element_from_json(&parse_json(&need(&a.x, "x")?)?)?;
            let n = a.n.ok_or_else(|| Failure::Usage("residual needs --n".into()))?;
            residual_reflection(&term, &x, n)?
        }
    })
}

fn cmd_reflect(c: &ReflectCmd, fmt: Format) -> Out {
    match c {
        ReflectCmd::Apply { r, element } => {
            let r = reflection(r)?;
            let e: Element = r.source.element_from_json(&parse_json(element)?)?;
            let img = r.apply(&e)?;
            let out = json!({
                "reflection": r.label,
                "source": r.source.to_string(),
                "target": r.target.to_string(),
                "element": r.source.element_to_json(&e),
                "image": r.target.element_to_json(&img),
                "norm": r.source.norm_of(&e)?,
                "image_norm": r.target.norm_of(&img)?,
            });
            emit(fmt, &out, || out["image"].to_string());
            Ok(())
        }
        ReflectCmd::Verify { r, nmax } => {
            let r = reflection(r)?;
            let rep = verify_reflection(&r, *nmax);
            let v = serde_json::to_value(&rep).unwrap();
            // passes and failures share the report shape, text mode included
            emit(fmt, &v, || serde_json::to_string_pretty(&v).unwrap());
            match &rep.error {
                Some(e) if e.contains("budget") || e.contains("enumeration exceeded") => Err(Failure::Budget(v)),
                Some(e) => Err(Failure::Usage(e.clone())),
                None if rep.passed => Ok(()),
                None => Err(Failure::Property(v)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Ordinal(c) => cmd_ordinal(c, cli.format),
        Cmd::Hierarchy(c) => cmd_hierarchy(c, cli.budget, cli.format),
        Cmd::Length(c) => cmd_length(c, cli.budget, cli.format),
        Cmd::Reflect(c) => cmd_reflect(c, cli.format),
        Cmd::VerifyAll { profile, seed } => suites::run(*profile, *seed, cli.budget, cli.format == Format::Json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(v)) => {
            eprintln!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(v)) => {
            eprintln!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::from(3)
        }
    }
}
