use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cn_core::algo::{builtin_programs, default_vars, enumerate_ground};
use cn_core::rewrite::{Program, ReachResult, EQUALITY_WARNING};
use cn_core::syntax::{parse_condition, parse_number, parse_program_with, render_condition, render_number};
use cn_core::{CnError, Config, Engine, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Parser, Debug)]
#[command(name = "cn", version, about = "Constructed numbers: conditions, smooth equality and CN programs")]
struct Cli {
    /// Maximal condition size (at least 3).
    #[arg(long, global = true, default_value_t = 3)]
    limit: usize,
    /// Load the confluence-breaking subtraction rule.
    #[arg(long, global = true)]
    s6: bool,
    /// Let brackets commute with inverses and copies.
    #[arg(long, global = true)]
    bracket_ext: bool,
    #[arg(long, global = true, default_value_t = 100_000)]
    max_states: usize,
    /// Maximal number of constructors in a search state.
    #[arg(long, global = true, default_value_t = 64)]
    max_term_size: usize,
    /// Ground inputs have at most this many constructors per argument.
    #[arg(long, global = true, default_value_t = 2)]
    max_value: usize,
    /// Also enumerate ground inputs containing `ann`.
    #[arg(long, global = true)]
    include_ann: bool,
    /// Disable the unique-exponent checks.
    #[arg(long = "unsafe", global = true)]
    unsafe_mode: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Program file loaded on top of the builtin `add` and `sub`; repeatable.
    #[arg(long, global = true)]
    program: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the loaded programs and any given number terms.
    Check { terms: Vec<String> },
    /// Canonical form of a condition.
    NormalizeCond { cond: String },
    /// Decide equality of two conditions.
    EqCond { a: String, b: String },
    /// One-step rule neighbours of a number term.
    Reduce {
        term: String,
        /// Also list smooth-equality neighbours.
        #[arg(long)]
        smooth: bool,
    },
    /// Constructor values reachable under full reduction, one per class.
    NormalForms { term: String },
    /// Constructor values reachable under direct reduction, one per class.
    DirectForms { term: String },
    /// Mutual reachability of two number terms.
    NumEqual { a: String, b: String },
    /// Compare two functions on all ground inputs up to --max-value.
    AlgoEqual { f: String, g: String },
    /// Whether direct reduction reaches every class of a function on ground inputs.
    IsDirect { f: String },
    /// Derive A⁰ = A¹ once unique exponents are no longer enforced.
    DemoUnsafe {
        #[arg(default_value = "A")]
        cond: String,
    },
}

struct Out {
    format: Format,
    text: String,
}

impl Out {
    /// One result: a human line in text mode, `verdict<TAB>payload` in lines mode.
    fn emit(&mut self, verdict: &str, payload: &str, human: &str) {
        match self.format {
            Format::Text => writeln!(self.text, "{human}"),
            Format::Lines => writeln!(self.text, "{verdict}\t{payload}"),
        }
        .unwrap();
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::True => 0,
        Verdict::False => 1,
        Verdict::Unknown => 2,
    }
}

fn load_program(cli: &Cli) -> Result<Program, CnError> {
    let opts: &[&str] = if cli.s6 { &["s6"] } else { &[] };
    let mut p = builtin_programs(cli.s6);
    for path in &cli.program {
        let src = fs::read_to_string(path)
            .map_err(|e| CnError::InvalidProgram(format!("{}: {e}", path.display())))?;
        p = p.merged(&parse_program_with(&src, opts)?);
    }
    Ok(p)
}

fn valid_program(cli: &Cli, e: &Engine) -> Result<Program, CnError> {
    let p = load_program(cli)?;
    let report = e.validate_program(&p);
    if !report.is_valid() {
        let msgs: Vec<String> = report.issues.iter().map(|i| i.to_string()).collect();
        return Err(CnError::InvalidProgram(msgs.join("; ")));
    }
    Ok(p)
}

fn forms(out: &mut Out, r: &ReachResult) -> u8 {
    for v in r.classes.values() {
        let s = render_number(v);
        out.emit("class", &s, &s);
    }
    let status = if r.complete { "complete" } else { "incomplete" };
    let summary = format!("{} classes, {} states, {status}", r.classes.len(), r.states);
    out.emit(status, &summary, &summary);
    if r.complete {
        0
    } else {
        2
    }
}

fn run(cli: &Cli, out: &mut Out, err: &mut String) -> Result<u8, CnError> {
    let e = Engine::new(Config {
        limit: cli.limit,
        s6: cli.s6,
        bracket_ext: cli.bracket_ext,
        max_states: cli.max_states,
        max_term_size: cli.max_term_size,
        unsafe_mode: cli.unsafe_mode,
        ..Config::default()
    })?;
    match &cli.command {
        Command::Check { terms } => {
            let p = load_program(cli)?;
            let report = e.validate_program(&p);
            for w in &report.warnings {
                writeln!(err, "warning: {w}").unwrap();
            }
            for i in &report.issues {
                let s = i.to_string();
                out.emit("issue", &s, &s);
            }
            let mut ok = report.is_valid();
            for t in terms {
                match parse_number(t, &e) {
                    Ok(a) => {
                        let s = render_number(&a);
                        out.emit("ok", &s, &format!("well-formed: {s}"));
                    }
                    Err(x) => {
                        ok = false;
                        let s = x.to_string();
                        out.emit("error", &s, &format!("{t}: {s}"));
                    }
                }
            }
            let n = p.functions.len();
            if ok {
                out.emit("valid", &n.to_string(), &format!("{n} functions valid"));
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::NormalizeCond { cond } => {
            let c = parse_condition(cond, &e)?;
            let s = render_condition(&e.algebra().canonicalize(&c)?.to_condition());
            out.emit("ok", &s, &s);
            Ok(0)
        }
        Command::EqCond { a, b } => {
            let (a, b) = (parse_condition(a, &e)?, parse_condition(b, &e)?);
            let eq = e.algebra().cond_equal(&a, &b)?;
            let word = if eq { "equal" } else { "not equal" };
            out.emit(&Verdict::from_bool(eq).to_string(), word, word);
            Ok(if eq { 0 } else { 1 })
        }
        Command::Reduce { term, smooth } => {
            let p = valid_program(cli, &e)?;
            let a = parse_number(term, &e)?;
            for n in e.rule_step_neighbors(&p, &a)? {
                let s = render_number(&n);
                out.emit("rule", &s, &format!("rule    {s}"));
            }
            if *smooth {
                for (step, n) in e.smooth_steps(&a)? {
                    let s = render_number(&n);
                    out.emit("smooth", &format!("{step}\t{s}"), &format!("smooth  {s}    [{step}]"));
                }
            }
            Ok(0)
        }
        Command::NormalForms { term } => {
            let p = valid_program(cli, &e)?;
            let a = parse_number(term, &e)?;
            Ok(forms(out, &e.reach_normal_forms(&p, &a)?))
        }
        Command::DirectForms { term } => {
            let p = valid_program(cli, &e)?;
            let a = parse_number(term, &e)?;
            Ok(forms(out, &e.direct_reach(&p, &a)?))
        }
        Command::NumEqual { a, b } => {
            let p = valid_program(cli, &e)?;
            let (a, b) = (parse_number(a, &e)?, parse_number(b, &e)?);
            writeln!(err, "warning: {EQUALITY_WARNING}").unwrap();
            let v = e.numbers_equal(&p, &a, &b)?;
            out.emit(&v.to_string(), "", &v.to_string());
            Ok(verdict_code(v))
        }
        Command::AlgoEqual { f, g } => {
            let p = valid_program(cli, &e)?;
            let inputs = ground_inputs(cli, &p, f)?;
            let v = e.algo_equal(&p, f, g, &inputs)?;
            let payload = format!("{f} {g} {} inputs", inputs.len());
            out.emit(&v.to_string(), &payload, &format!("{v} ({} ground inputs)", inputs.len()));
            Ok(verdict_code(v))
        }
        Command::IsDirect { f } => {
            let p = valid_program(cli, &e)?;
            let inputs = ground_inputs(cli, &p, f)?;
            let v = e.is_direct(&p, f, &inputs)?;
            let payload = format!("{f} {} inputs", inputs.len());
            out.emit(&v.to_string(), &payload, &format!("{v} ({} ground inputs)", inputs.len()));
            Ok(verdict_code(v))
        }
        Command::DemoUnsafe { cond } => {
            let c = parse_condition(cond, &e)?;
            let demo = e.algebra().unsafe_closure_demo(&c)?;
            for (name, steps) in [("annihilation", &demo.annihilation), ("collapse", &demo.collapse)] {
                for s in steps {
                    let from = render_condition(&s.from);
                    let to = render_condition(&s.to);
                    out.emit(
                        name,
                        &format!("{from}\t{to}\t{}", s.law),
                        &format!("{from}  =  {to}    [{}]", s.law),
                    );
                }
            }
            let a0 = render_condition(&c.clone().copy0());
            let a1 = render_condition(&c.clone().copy1());
            out.emit("derived", &format!("{a0}\t{a1}"), &format!("derived {a0} = {a1}"));
            Ok(0)
        }
    }
}

fn ground_inputs(cli: &Cli, p: &Program, f: &str) -> Result<Vec<Vec<cn_core::NumberTerm>>, CnError> {
    let vars = default_vars(p.function(f)?.inputs);
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(enumerate_ground(&refs, cli.max_value, cli.include_ann))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out {
        format: cli.format,
        text: String::new(),
    };
    let mut err = String::new();
    let code = match run(&cli, &mut out, &mut err) {
        Ok(c) => c,
        Err(x) => {
            writeln!(err, "error: {x}").unwrap();
            3
        }
    };
    print!("{}", out.text);
    eprint!("{err}");
    ExitCode::from(code)
}
