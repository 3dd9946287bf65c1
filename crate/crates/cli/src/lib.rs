//! The `hahn` command line. [`run`] takes the argument vector and output
//! streams and returns the exit code: 0 on success, 1 on a domain error,
//! 2 on a usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hahn::additive::{hypothesis_a_check, HypothesisA};
use hahn::eval::{parse_additive, parse_series, Evaluator, Value};
use hahn::expr;
use hahn::io::{series_to_json, transform_to_json};
use hahn::morphisms::{apply_transform, classify_orbit, orbit_transform, substitute, Step};
use hahn::sample::{self, SeriesShape};
use hahn::solvers::{self, default_target, Sign};
use hahn::{make_field, Error, FieldCtx, Rat, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

#[derive(Parser, Debug)]
#[command(name = "hahn", version, about = "Exact arithmetic in generalized power series fields k((t^Q))")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Coefficient field: Q, Fp or Fq (e.g. F2, F9)
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Defining polynomial of Fq over Fp, e.g. "x^2+1"
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Requested precision cap (a rational, may be negative)
    #[arg(long, global = true, default_value = "8", allow_hyphen_values = true, value_parser = parse_rat)]
    cap: Rat,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized subcommands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a series expression
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Solve P(x) = b for an additive polynomial P
    Solve {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        /// Certify the solution below this exponent [default: v(b)/2 if b
        /// has negative exponents, else the cap]
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
        target: Option<Rat>,
    },
    /// The trace-zero y with y^(p^n) + y = x - Tr(x)
    ArtinSchreier {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
        target: Option<Rat>,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Substitute t -> x in y
    Subst {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Orbit of y under the automorphism group
    Classify {
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// A transform carrying t to y
    OrbitWitness {
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Constant coefficient
    Trace {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Leading coefficient
    Norm {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Sign of v(x) for trace-zero x, read off a trace
    SignViaTrace {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Is P surjective on the coefficient field? [default P: x^q - x]
    #[command(name = "hypA")]
    HypA {
        #[arg(long)]
        poly: Option<String>,
    },
    /// Scripted demonstrations
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Substitute t -> t - t^2 into sum_{k<=K} t^(-1/p^k)
    CharPDivergence {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long = "K", default_value_t = 5)]
        k: u32,
    },
    /// Randomized spot checks of the ring and homomorphism laws
    Laws {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| e.to_string())
}

struct Ctx<'a> {
    field: FieldCtx,
    cap: Rat,
    json: bool,
    seed: u64,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn series(&self, text: &str) -> hahn::Result<Series> {
        parse_series(&self.field, text, &self.cap)
    }

    fn emit(&mut self, text: &str, json: Json) -> hahn::Result<()> {
        let line = if self.json { json.to_string() } else { text.to_string() };
        writeln!(self.out, "{line}").map_err(|e| Error::Eval(e.to_string()))
    }

    fn emit_series(&mut self, s: &Series) -> hahn::Result<()> {
        self.emit(&s.to_string(), series_to_json(s))
    }

    fn emit_coeff(&mut self, c: &hahn::Coeff) -> hahn::Result<()> {
        let text = self.field.format_coeff(c);
        let field = self.field.to_string();
        self.emit(&text, json!({ "field": field, "coeff": text }))
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let field_spec = match &cli.global.modulus {
        Some(m) => format!("{}:{}", cli.global.field, m),
        None => cli.global.field.clone(),
    };
    let result = make_field(&field_spec).and_then(|field| {
        let mut ctx = Ctx {
            field,
            cap: cli.global.cap.clone(),
            json: cli.global.format == Format::Json,
            seed: cli.global.seed,
            out,
            err,
        };
        dispatch(&mut ctx, &cli.command)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(c: &mut Ctx, cmd: &Command) -> hahn::Result<()> {
    match cmd {
        Command::Eval { expr: src } => {
            let e = expr::parse(src)?;
            let v = Evaluator::new(&c.field, c.cap.clone()).eval(&e)?;
            let j = match &v {
                Value::Series(s) => series_to_json(s),
                Value::Class(cl, f) => json!({ "class": cl.describe(f) }),
                Value::Sign(s) => json!({ "sign": sign_name(*s) }),
            };
            c.emit(&v.to_string(), j)
        }
        Command::Solve { poly, rhs, target } => {
            let p = parse_additive(&c.field, poly)?;
            let b = c.series(rhs)?;
            let target = target.clone().unwrap_or_else(|| default_target(&b, &c.cap));
            let x = solvers::solve_additive(&p, &b, &target)?;
            c.emit_series(&x)
        }
        Command::ArtinSchreier { n, target, x } => {
            let x = c.series(x)?;
            let target = target.clone().unwrap_or_else(|| default_target(&x, &c.cap));
            let h = solvers::artin_schreier_h(&x, *n, &target)?;
            c.emit_series(&h)
        }
        Command::Subst { x, y } => subst(c, x, y),
        Command::Classify { y } => {
            let y = c.series(y)?;
            let class = classify_orbit(&y)?.describe(&c.field);
            c.emit(&class, json!({ "class": class }))
        }
        Command::OrbitWitness { y } => orbit_witness(c, y),
        Command::Trace { x } => {
            let v = solvers::trace(&c.series(x)?)?;
            c.emit_coeff(&v)
        }
        Command::Norm { x } => {
            let v = solvers::norm_leading(&c.series(x)?)?;
            c.emit_coeff(&v)
        }
        Command::SignViaTrace { x } => {
            let s = sign_name(solvers::valuation_sign_via_trace(&c.series(x)?)?);
            c.emit(s, json!({ "sign": s }))
        }
        Command::HypA { poly } => {
            let p = poly.as_deref().map(|t| parse_additive(&c.field, t)).transpose()?;
            match hypothesis_a_check(&c.field, p.as_ref())? {
                HypothesisA::Satisfies => c.emit("SATISFIES", json!({ "satisfies": true })),
                HypothesisA::FailsWithWitness(w) => {
                    let w = c.field.format_coeff(&w);
                    c.emit(&format!("FAILS: witness b={w}"), json!({ "satisfies": false, "witness": w }))
                }
            }
        }
        Command::Demo { which: Demo::CharPDivergence { p, k } } => divergence(c, *p, *k),
        Command::Demo { which: Demo::Laws { trials } } => laws(c, *trials),
    }
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "positive",
        Sign::Negative => "negative",
    }
}

fn subst(c: &mut Ctx, x: &str, y: &str) -> hahn::Result<()> {
    let x = c.series(x)?;
    let y = c.series(y)?;
    let s = substitute(&x, &y, &c.cap)?;
    if s.diagnostics.hypothesis_a_risk {
        let _ = writeln!(
            c.err,
            "warning: exponents of y have several negative p-adic valuations; certified precision shrinks by p per level"
        );
    }
    let terms: Vec<Json> = s
        .diagnostics
        .terms
        .iter()
        .map(|t| {
            json!({
                "exponent": t.exponent.to_string(),
                "p_adic_valuation": t.p_adic_valuation,
                "cap": t.cap.to_string(),
            })
        })
        .collect();
    let j = json!({
        "series": series_to_json(&s.series),
        "achieved_cap": s.achieved_cap.to_string(),
        "hypothesis_a_risk": s.diagnostics.hypothesis_a_risk,
        "terms": terms,
    });
    c.emit(&s.series.to_string(), j)
}

fn orbit_witness(c: &mut Ctx, y: &str) -> hahn::Result<()> {
    let y = c.series(y)?;
    let t = orbit_transform(&y, &c.cap)?;
    let image = apply_transform(&t, &Series::t(&c.field), &c.cap)?;
    if !image.agrees(&y) {
        return Err(Error::Eval(format!("witness check failed: t maps to {image}")));
    }
    let f = c.field.clone();
    let mut lines: Vec<String> = t
        .steps
        .iter()
        .map(|s| match s {
            Step::Translate(a) => format!("translate {}", f.format_coeff(a)),
            Step::Invert => "invert".to_string(),
            Step::Rescale(l) if l.is_trivial() => "rescale identity".to_string(),
            Step::Rescale(l) => {
                let pairs: Vec<String> = l
                    .pairs()
                    .iter()
                    .map(|(d, u)| format!("lambda(1/{d}) = {}", f.format_coeff(u)))
                    .collect();
                format!("rescale {}", pairs.join(", "))
            }
            Step::ScaleExp(r) => format!("scale_exp {r}"),
            Step::Substitute(x) => format!("substitute t -> {x}"),
        })
        .collect();
    lines.push(format!("image of t: {image}"));
    let j = json!({ "transform": transform_to_json(&f, &t), "image": series_to_json(&image) });
    c.emit(&lines.join("\n"), j)
}

fn divergence(c: &mut Ctx, p: u64, big_k: u32) -> hahn::Result<()> {
    let ctx = make_field(&format!("F{p}"))?;
    if big_k == 0 || big_k > 12 {
        return Err(Error::Eval("K must be between 1 and 12".into()));
    }
    let x = Series::new(&ctx, [(Rat::one(), ctx.one()), (Rat::from_int(2), ctx.from_int(-1))], hahn::Cap::Infinite)?;
    let mut rows = Vec::new();
    let mut text = vec!["K\tt^0\tcap\trisk".to_string()];
    let pi = p as i64;
    for k in 1..=big_k {
        let terms: Vec<(Rat, hahn::Coeff)> = (1..=k).map(|j| (Rat::new(-1, pi.pow(j)), ctx.one())).collect();
        let y = Series::new(&ctx, terms, hahn::Cap::Infinite)?;
        let s = substitute(&x, &y, &Rat::one())?;
        let c0 = ctx.format_coeff(&s.series.coeff(&Rat::zero())?);
        let risk = s.diagnostics.hypothesis_a_risk;
        text.push(format!("{k}\t{c0}\t{}\t{}", s.achieved_cap, if risk { "yes" } else { "no" }));
        rows.push(json!({ "K": k, "t0": c0, "cap": s.achieved_cap.to_string(), "hypothesis_a_risk": risk }));
    }
    c.emit(&text.join("\n"), json!({ "p": p, "rows": rows }))
}

fn laws(c: &mut Ctx, trials: usize) -> hahn::Result<()> {
    let f = c.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let shape = SeriesShape::default();
    let req = c.cap.clone();
    let mut counts = [0usize; 4];
    for _ in 0..trials {
        let a = sample::series(&f, &mut rng, &shape);
        let b = sample::series(&f, &mut rng, &shape);
        let x = sample::monic_positive(&f, &mut rng, 0.5);
        let l = sample::exp_hom(&f, &mut rng);
        let dist = a.mul(&b.add(&x)?)?.agrees(&a.mul(&b)?.add(&a.mul(&x)?)?);
        let inv = a.mul(&a.invert(&req)?)?.agrees(&Series::one(&f));
        let hom = |g: &dyn Fn(&Series) -> hahn::Result<Series>| -> hahn::Result<bool> {
            Ok(g(&a.mul(&b)?)?.agrees(&g(&a)?.mul(&g(&b)?)?) && g(&a.add(&b)?)?.agrees(&g(&a)?.add(&g(&b)?)?))
        };
        let psi = hom(&|s| hahn::psi_lambda(&l, s))?;
        let sub = hom(&|s| Ok(substitute(&x, s, &req)?.series))?;
        for (n, ok) in counts.iter_mut().zip([dist, inv, psi, sub]) {
            *n += ok as usize;
        }
    }
    let names = ["distributivity", "x * inv(x) = 1", "psi_lambda", "substitute"];
    let text: Vec<String> = names
        .iter()
        .zip(counts)
        .map(|(n, k)| format!("{n}: {k}/{trials}"))
        .collect();
    let j: serde_json::Map<String, Json> = names.iter().zip(counts).map(|(n, k)| (n.to_string(), json!(k))).collect();
    c.emit(&text.join("\n"), json!({ "trials": trials, "passed": j }))?;
    if counts.iter().all(|&k| k == trials) {
        Ok(())
    } else {
        Err(Error::Eval("some law checks failed".into()))
    }
}

