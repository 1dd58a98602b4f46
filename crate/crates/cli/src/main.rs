use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use galmod::arith::{b_value, fiber_census, frobenius_orbits, multiplicative_order, LemmaParams};
use galmod::eqchar::EqCharField;
use galmod::ffield::FieldTower;
use galmod::gmod::{char_module, is_isomorphic, orbit_criterion, verify_iwasawa_lemma};
use galmod::group::TameGroup;
use galmod::mixed::{mixed_unit_module, Eisenstein, MixedField};
use galmod::report::{Check, Report};
use galmod::{suite, Error};

#[derive(Parser, Debug)]
#[command(
    name = "galmod",
    version,
    about = "Galois module structure of tame local fields, checked exactly"
)]
struct Cli {
    /// Seed for every random choice (field models, searches, shuffles).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time per check (breaks byte-stability).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The integers prime to p, b(1), ..., b(n).
    Bseq {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Fibre counts of (i, j) -> b(i) p^j mod e.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        /// n = m lcm(p-1, e).
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Orbits of multiplication by q = p^a on Z/e.
    Orbits {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Compare l(r) and l(s) by the orbit criterion and by a hom-space search.
    ModuleIso {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        a: usize,
        /// Defaults to the order of q mod e.
        #[arg(long)]
        f: Option<usize>,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
    },
    /// Fibre census plus the filtered direct-sum decomposition.
    VerifyLemma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        a: usize,
        /// Defaults to the order of q mod e.
        #[arg(long)]
        f: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Additive and multiplicative structure of a tame extension of F_q((t)).
    EqcharStructure {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long)]
        f: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Principal units mod p-th powers of a tame extension of a p-adic field.
    MixedStructure {
        #[arg(long)]
        p: u64,
        /// Residue degree of the base field over Q_p.
        #[arg(long, default_value_t = 1)]
        fk: usize,
        /// Eisenstein polynomial: lower coefficients, constant first, e.g. "+3" or "3,0".
        #[arg(long, allow_hyphen_values = true)]
        eisenstein: String,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        /// Working precision p^N; defaults to the smallest safe N.
        #[arg(long)]
        n: Option<u32>,
    },
    /// The full acceptance grid.
    Suite {
        /// Restrict to these criteria, e.g. --only 1,6.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

struct Ctx {
    timing: bool,
}

impl Ctx {
    /// Runs `f` and turns its verdict and witness into a check.
    fn check(
        &self,
        name: &str,
        f: impl FnOnce() -> galmod::Result<(bool, Value)>,
    ) -> galmod::Result<Check> {
        let start = Instant::now();
        let (pass, witness) = f()?;
        let ms = start.elapsed().as_millis() as u64;
        Ok(Check::new(name, pass, witness).with_timing(self.timing.then_some(ms)))
    }
}

fn default_f(p: u64, a: usize, e: u64, f: Option<usize>) -> galmod::Result<usize> {
    match f {
        Some(f) => Ok(f),
        None => {
            let q = p
                .checked_pow(a as u32)
                .ok_or_else(|| Error::InvalidParameter(format!("p^a = {p}^{a} overflows")))?;
            Ok(multiplicative_order(q, e)? as usize)
        }
    }
}

fn group(p: u64, a: usize, e: u64, f: usize, seed: u64) -> galmod::Result<TameGroup> {
    TameGroup::over_tower(Arc::new(FieldTower::new(p, a, f, seed)?), e)
}

fn run(cli: &Cli) -> galmod::Result<Report> {
    let ctx = Ctx { timing: cli.timing };
    let seed = cli.seed;
    let report = match &cli.command {
        &Command::Bseq { p, n } => {
            let mut r = Report::new("bseq", json!({"p": p, "n": n}), seed);
            let values = (1..=n)
                .map(|i| b_value(p, i))
                .collect::<galmod::Result<Vec<_>>>()?;
            r.push(ctx.check("prime-to-p-increasing", || {
                let bad: Vec<u64> = values.iter().copied().filter(|b| b % p == 0).collect();
                let increasing = values.windows(2).all(|w| w[0] < w[1]);
                Ok((
                    bad.is_empty() && increasing,
                    json!({"values": values, "divisible_by_p": bad, "increasing": increasing}),
                ))
            })?);
            r
        }
        &Command::Census { p, e, m } => {
            let params = LemmaParams::new(p, e, m)?;
            let mut r = Report::new("census", json!({"p": p, "e": e, "m": m}), seed);
            r.push(ctx.check("fiber-census", || {
                let census = fiber_census(&params)?;
                let expected = params.d * params.g;
                let dev = census.deviations(expected);
                Ok((dev.is_empty(), json!({"lemma": params, "expected": expected, "counts": census.counts, "deviations": dev})))
            })?);
            r
        }
        &Command::Orbits { p, e, a } => {
            let q = p
                .checked_pow(a)
                .ok_or_else(|| Error::InvalidParameter("p^a overflows".into()))?;
            let orbits = frobenius_orbits(e, q)?;
            let mut r = Report::new("orbits", json!({"p": p, "e": e, "a": a}), seed);
            r.push(ctx.check("orbit-partition", || {
                let mut seen: Vec<u64> = orbits.iter().flatten().copied().collect();
                seen.sort_unstable();
                let partition = seen == (0..e).collect::<Vec<_>>();
                Ok((partition, json!({"q": q, "orbits": orbits})))
            })?);
            r
        }
        &Command::ModuleIso {
            p,
            e,
            a,
            f,
            r: rr,
            s,
        } => {
            let f = default_f(p, a, e, f)?;
            let g = group(p, a, e, f, seed)?;
            let mut r = Report::new(
                "module-iso",
                json!({"p": p, "e": e, "a": a, "f": f, "r": rr, "s": s}),
                seed,
            );
            r.push(ctx.check("orbit-criterion-agrees", || {
                let expected = orbit_criterion(e, p, rr, s)?;
                let v = is_isomorphic(&char_module(&g, rr)?, &char_module(&g, s)?, seed)?;
                let pass = v.isomorphic == expected && v.certain;
                Ok((pass, json!({"orbit_criterion": expected, "oracle": v})))
            })?);
            r
        }
        &Command::VerifyLemma { p, e, a, f, m } => {
            let params = LemmaParams::new(p, e, m)?;
            let f = default_f(p, a, e, f)?;
            let g = group(p, a, e, f, seed)?;
            let mut r = Report::new(
                "verify-lemma",
                json!({"p": p, "e": e, "a": a, "f": f, "m": m}),
                seed,
            );
            r.push(ctx.check("fiber-census", || {
                let census = fiber_census(&params)?;
                let dev = census.deviations(params.d * params.g);
                Ok((
                    dev.is_empty(),
                    json!({"lemma": params, "counts": census.counts, "deviations": dev}),
                ))
            })?);
            r.push(ctx.check("filtered-sum-is-free", || {
                let rep = verify_iwasawa_lemma(&g, &params, seed)?;
                Ok((
                    rep.pass(),
                    serde_json::to_value(&rep).expect("serialisable"),
                ))
            })?);
            r
        }
        &Command::EqcharStructure { p, e, a, f, m } => {
            let f = default_f(p, a, e, f)?;
            let field = EqCharField::with_seed(p, a, f, e, -1, 1, seed)?;
            let mut r = Report::new(
                "eqchar-structure",
                json!({"p": p, "e": e, "a": a, "f": f, "m": m}),
                seed,
            );
            let mut precision = serde_json::Map::new();
            for (name, kind) in [("additive", 0), ("units", 1)] {
                let mut prec = 0;
                r.push(ctx.check(name, || {
                    let rep = if kind == 0 {
                        field.as_module(m)?
                    } else {
                        field.unit_module(m)?
                    };
                    prec = rep.precision;
                    Ok((
                        rep.pass(),
                        serde_json::to_value(&rep).expect("serialisable"),
                    ))
                })?);
                precision.insert(name.into(), json!(prec));
            }
            r.environment.precision = Some(Value::Object(precision));
            r
        }
        Command::MixedStructure {
            p,
            fk,
            eisenstein,
            e,
            f,
            n,
        } => {
            let (p, fk, e, f, n) = (*p, *fk, *e, *f, *n);
            let poly = Eisenstein::parse(eisenstein)?;
            let field = MixedField::with_seed(p, fk, poly.clone(), e, f, n, seed)?;
            let params =
                json!({"p": p, "fk": fk, "eisenstein": poly.to_string(), "e": e, "f": f, "n": n});
            let mut r = Report::new("mixed-structure", params, seed);
            r.environment.precision = Some(json!({"N": field.precision()}));
            r.push(ctx.check("units-mod-pth-powers", || {
                let rep = mixed_unit_module(&field)?;
                Ok((
                    rep.pass(),
                    serde_json::to_value(&rep).expect("serialisable"),
                ))
            })?);
            r
        }
        Command::Suite { only } => {
            let mut r = Report::new("suite", json!({"only": only}), seed);
            for o in suite::run(seed, only)? {
                r.push(o.to_check(ctx.timing));
            }
            r
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("galmod: {e}");
            ExitCode::from(if e.is_precision() { 3 } else { 2 })
        }
    }
}
