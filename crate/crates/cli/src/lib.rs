//! Command-line front end: structure files, dispatch and reports.

pub mod structure;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbipoisson::catalog::{self, GammaN};
use orbipoisson::cohom::{h_truncated, CohomError};
use orbipoisson::group::MatrixGroup;
use orbipoisson::pbw::{check_bg, solve_b, Condition, Letter, NCElement, PbwError, RewriteSystem, StructurePair};
use orbipoisson::polyvec::{is_poisson, monomial_string, PolyVectorField};
use orbipoisson::qmoyal::{QMoyal, QMoyalError};
use orbipoisson::scalars::parse_cyclotomic;
use serde_json::{json, Value};
use thiserror::Error;

use structure::{parse_json, term_line, terms, Limits, Loaded, StructureFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
}

const DEFAULT_MAX_CONDUCTOR: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exact checks for noncommutative Poisson structures on crossed products.
#[derive(Parser, Debug)]
#[command(name = "orbipoisson", version)]
struct Cli {
    /// `json` prints a machine-readable report on stdout and the text
    /// report on stderr.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Refuse groups with more elements than this.
    #[arg(long, default_value_t = 5000, global = true)]
    max_group_order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Checks that the whole structure brackets to zero with itself.
    VerifyPoisson { file: Option<PathBuf> },
    /// Checks the three PBW conditions on the (linear, constant) split.
    CheckBg {
        file: Option<PathBuf>,
        /// Drop the constant part before checking.
        #[arg(long)]
        zero_b: bool,
    },
    /// Solves for the constant part and prints the completed structure file.
    SolveB { file: Option<PathBuf> },
    /// Checks confluence of the rewriting system on all critical words.
    Pbw {
        file: Option<PathBuf>,
        /// Words to reduce, e.g. "g1 x2 x1".
        #[arg(long)]
        word: Vec<String>,
    },
    /// Star product of two elements of the q-deformed algebra.
    Star {
        #[arg(long)]
        n: u32,
        left: String,
        right: String,
    },
    /// Central element with the given group-free part.
    Center {
        #[arg(long)]
        n: u32,
        f0: String,
    },
    /// The constant in u * v = w^n + c.
    CenterRelation {
        #[arg(long)]
        n: u32,
    },
    /// Truncated Poisson cohomology.
    Cohomology {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        polydeg: u32,
        file: Option<PathBuf>,
    },
    /// Prints a built-in structure file.
    Catalog {
        /// gamma_n, z2_constant, z2_r3_linear, cyclic_qmoyal or symplectic_cyclic.
        name: String,
        /// Group parameter of gamma_n, cyclic_qmoyal and symplectic_cyclic.
        #[arg(long)]
        n: Option<u32>,
        /// Coefficient c0 of gamma_n.
        #[arg(long)]
        c0: Option<String>,
        /// Identity-label coefficient of gamma_n (only when 2n+1 = 3).
        #[arg(long)]
        a: Option<String>,
        /// Parameter at the non-trivial elements.
        #[arg(long)]
        c: Option<String>,
        /// Weight of the symplectic form at the identity.
        #[arg(long)]
        t: Option<String>,
        /// 1 or 2 for z2_r3_linear.
        #[arg(long)]
        variant: Option<u32>,
        /// Conductor used to read the parameter literals.
        #[arg(long)]
        conductor: Option<u32>,
        /// Drop the constant correction.
        #[arg(long)]
        zero_b: bool,
    },
}

struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

/// Parses the process arguments, runs the command and prints the report.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let (out, code) = match run(cli) {
        Ok(o) => {
            let code = if o.pass { 0 } else { 1 };
            (o, code)
        }
        Err(e) => {
            let (status, code) = match e {
                CliError::Input(_) => ("input-error", 2),
                CliError::Math(_) => ("fail", 1),
            };
            let o = Outcome {
                text: format!("error: {e}\n"),
                json: json!({"status": status, "message": e.to_string()}),
                pass: false,
            };
            (o, code)
        }
    };
    match format {
        Format::Text => {
            if code == 2 {
                eprint!("{}", out.text);
            } else {
                print!("{}", out.text);
            }
        }
        Format::Json => {
            eprint!("{}", out.text);
            println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
        }
    }
    ExitCode::from(code)
}

fn limits(max_group_order: usize) -> Result<Limits, CliError> {
    let max_conductor = match std::env::var("ORBIPOISSON_MAX_CONDUCTOR") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Input(format!("ORBIPOISSON_MAX_CONDUCTOR={v:?} is not a number")))?,
        Err(_) => DEFAULT_MAX_CONDUCTOR,
    };
    Ok(Limits {
        max_group_order,
        max_conductor,
    })
}

fn read_input(file: &Option<PathBuf>) -> Result<String, CliError> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load(file: &Option<PathBuf>, lim: &Limits) -> Result<Loaded, CliError> {
    parse_json(&read_input(file)?)?.load(lim)
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn pbw_error(e: PbwError) -> CliError {
    match e {
        PbwError::Infeasible { .. } => CliError::Math(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn label_word(group: &MatrixGroup, g: usize) -> Vec<usize> {
    group.word(g).iter().map(|t| t + 1).collect()
}

/// Text lines and JSON terms for a residue.
fn residue(group: &MatrixGroup, x: &PolyVectorField) -> (String, Value) {
    let ts = terms(group, x);
    let text = ts.iter().map(|t| format!("    {}\n", term_line(t))).collect();
    (text, serde_json::to_value(&ts).unwrap())
}

/// Reality check of both parts, if the file declares a real structure.
fn reality(l: &Loaded) -> Result<Option<bool>, CliError> {
    let Some(swap) = &l.swap else { return Ok(None) };
    let real = |x: &PolyVectorField| x.is_real(&l.group, swap).map_err(|e| CliError::Input(e.to_string()));
    Ok(Some(real(&l.pair.pi)? && real(&l.pair.b)?))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let lim = limits(cli.max_group_order)?;
    match cli.command {
        Command::VerifyPoisson { file } => verify_poisson(&load(&file, &lim)?),
        Command::CheckBg { file, zero_b } => {
            let mut l = load(&file, &lim)?;
            if zero_b {
                let zero = PolyVectorField::zero(l.pair.dim(), l.pair.conductor());
                l.pair = StructurePair::new(l.pair.pi.clone(), zero, l.pair.weights).map_err(pbw_error)?;
            }
            bg(&l)
        }
        Command::SolveB { file } => solve(&load(&file, &lim)?),
        Command::Pbw { file, word } => pbw(&load(&file, &lim)?, &word),
        Command::Star { n, left, right } => {
            let ctx = qctx(n)?;
            let a = qparse(&ctx, &left)?;
            let b = qparse(&ctx, &right)?;
            let p = ctx.star(&a, &b).map_err(qerr)?;
            Ok(Outcome {
                text: format!("{p}\n"),
                json: json!({"status": "ok", "n": n, "product": p.to_string()}),
                pass: true,
            })
        }
        Command::Center { n, f0 } => {
            let ctx = qctx(n)?;
            let f0 = qparse(&ctx, &f0)?;
            let f = ctx.center_lift(&f0).map_err(qerr)?;
            let central = ctx.is_central(&f).map_err(qerr)?;
            Ok(Outcome {
                text: format!("central: {}\n{f}\n", status(central)),
                json: json!({"status": status(central), "n": n, "element": f.to_string()}),
                pass: central,
            })
        }
        Command::CenterRelation { n } => {
            let ctx = qctx(n)?;
            let c = ctx.center_relation().map_err(qerr)?;
            Ok(Outcome {
                text: format!("u*v - w^{n} = {c}\n"),
                json: json!({"status": "ok", "n": n, "constant": c.to_string()}),
                pass: true,
            })
        }
        Command::Cohomology { degree, polydeg, file } => cohomology(&load(&file, &lim)?, degree, polydeg),
        Command::Catalog {
            name,
            n,
            c0,
            a,
            c,
            t,
            variant,
            conductor,
            zero_b,
        } => {
            let entry = catalog_entry(&name, n, c0, a, c, t, variant, conductor, zero_b)?;
            let file = StructureFile::from_entry(&entry);
            let s = serde_json::to_string_pretty(&file).unwrap();
            Ok(Outcome {
                json: serde_json::from_str(&s).unwrap(),
                text: s + "\n",
                pass: true,
            })
        }
    }
}

fn verify_poisson(l: &Loaded) -> Result<Outcome, CliError> {
    let rep = is_poisson(&l.group, &l.pair.total()).map_err(|e| CliError::Input(e.to_string()))?;
    let real = reality(l)?;
    let pass = rep.is_poisson() && real != Some(false);
    let mut text = format!("poisson: {}\n", status(rep.is_poisson()));
    let mut res = Vec::new();
    for (g, x) in &rep.residues {
        let (t, j) = residue(&l.group, x);
        text += &format!("  residue at label {:?}:\n{t}", label_word(&l.group, *g));
        res.push(json!({"label": label_word(&l.group, *g), "terms": j}));
    }
    if let Some(r) = real {
        text += &format!("real: {}\n", status(r));
    }
    Ok(Outcome {
        text,
        json: json!({"status": status(pass), "poisson": rep.is_poisson(), "real": real, "residues": res}),
        pass,
    })
}

fn condition_name(c: Condition) -> &'static str {
    match c {
        Condition::KoszulClosed => "koszul-closed",
        Condition::Coboundary => "coboundary",
        Condition::Compatibility => "compatibility",
    }
}

fn bg(l: &Loaded) -> Result<Outcome, CliError> {
    let rep = check_bg(&l.group, &l.pair).map_err(pbw_error)?;
    let real = reality(l)?;
    let pass = rep.passes() && real != Some(false);
    let mut text = String::new();
    for c in [Condition::KoszulClosed, Condition::Coboundary, Condition::Compatibility] {
        let ok = rep.failures.iter().all(|f| f.condition != c);
        text += &format!("{}: {}\n", condition_name(c), status(ok));
    }
    let mut fails = Vec::new();
    for f in &rep.failures {
        let (t, j) = residue(&l.group, &f.residue);
        let w = label_word(&l.group, f.label);
        text += &format!("  {} residue at label {:?}:\n{t}", condition_name(f.condition), w);
        fails.push(json!({"condition": condition_name(f.condition), "label": w, "terms": j}));
    }
    if let Some(r) = real {
        text += &format!("real: {}\n", status(r));
    }
    Ok(Outcome {
        text,
        json: json!({"status": status(pass), "real": real, "failures": fails}),
        pass,
    })
}

fn solve(l: &Loaded) -> Result<Outcome, CliError> {
    let b = solve_b(&l.group, &l.pair.pi).map_err(pbw_error)?;
    let pair = StructurePair::new(l.pair.pi.clone(), b, l.pair.weights).map_err(pbw_error)?;
    let pass = check_bg(&l.group, &pair).map_err(pbw_error)?.passes();
    let file = StructureFile::emit(None, &l.group, &pair, l.swap.as_deref());
    let doc = serde_json::to_string_pretty(&file).unwrap();
    Ok(Outcome {
        text: doc.clone() + "\n",
        json: json!({"status": status(pass), "structure": serde_json::from_str::<Value>(&doc).unwrap()}),
        pass,
    })
}

fn parse_word(group: &MatrixGroup, dim: usize, s: &str) -> Result<Vec<Letter>, CliError> {
    s.split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || CliError::Input(format!("word {s:?}: bad letter {t:?}"));
            let (kind, idx) = t.split_at(1);
            let i: usize = idx.parse().map_err(|_| bad())?;
            match kind {
                "x" if (1..=dim).contains(&i) => Ok(Letter::X(i - 1)),
                "g" if (1..=group.n_generators()).contains(&i) => Ok(Letter::G(group.generator(i - 1))),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn letter_string(group: &MatrixGroup, l: &Letter) -> String {
    match l {
        Letter::X(i) => format!("x{}", i + 1),
        Letter::G(g) => format!("g{:?}", label_word(group, *g)),
    }
}

fn element_string(group: &MatrixGroup, e: &NCElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.terms()
        .map(|((exps, g), c)| format!("({c})*{}*g{:?}", monomial_string(exps), label_word(group, *g)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn pbw(l: &Loaded, words: &[String]) -> Result<Outcome, CliError> {
    let rs = RewriteSystem::new(&l.group, &l.pair);
    let fails = rs.overlap_confluence();
    let pass = fails.is_empty();
    let mut text = format!("confluence: {}\n", status(pass));
    let mut jf = Vec::new();
    for f in &fails {
        let w: Vec<String> = f.word.iter().map(|x| letter_string(&l.group, x)).collect();
        let d = element_string(&l.group, &f.difference);
        text += &format!("  {}: {}\n", w.join(" "), d);
        jf.push(json!({"word": w, "difference": d}));
    }
    let mut jn = Vec::new();
    for w in words {
        let letters = parse_word(&l.group, l.pair.dim(), w)?;
        let nf = element_string(&l.group, &rs.normal_form(&letters));
        text += &format!("{w} = {nf}\n");
        jn.push(json!({"word": w, "normal_form": nf}));
    }
    Ok(Outcome {
        text,
        json: json!({"status": status(pass), "failures": jf, "normal_forms": jn}),
        pass,
    })
}

fn cohomology(l: &Loaded, k: usize, d: u32) -> Result<Outcome, CliError> {
    let h = h_truncated(&l.group, &l.pair.total(), k, d).map_err(|e| match e {
        CohomError::NotComplex => CliError::Math(e.to_string()),
        _ => CliError::Input(e.to_string()),
    })?;
    let mut text = format!(
        "H^{k} up to coefficient degree {d}: dimension {}\n\
         (images are taken from cochains of degree up to {}; linear structures preserve degree, constant ones lower it by one)\n\
         cochains {}, kernel {}, image {}\n",
        h.dim(),
        d + 1,
        h.cochains,
        h.kernel.len(),
        h.image.len()
    );
    let mut classes = Vec::new();
    for c in &h.per_class {
        let w = label_word(&l.group, c.label);
        text += &format!(
            "  class of {:?}: cochains {}, kernel {}, image {}\n",
            w, c.cochains, c.kernel, c.image
        );
        classes.push(json!({"label": w, "cochains": c.cochains, "kernel": c.kernel, "image": c.image}));
    }
    let mut reps = Vec::new();
    for (i, r) in h.representatives.iter().enumerate() {
        let (t, j) = residue(&l.group, r);
        text += &format!("  representative {}:\n{t}", i + 1);
        reps.push(j);
    }
    Ok(Outcome {
        text,
        json: json!({
            "status": "ok",
            "degree": k,
            "polydeg": d,
            "dimension": h.dim(),
            "cochains": h.cochains,
            "kernel": h.kernel.len(),
            "image": h.image.len(),
            "classes": classes,
            "representatives": reps,
        }),
        pass: true,
    })
}

fn qctx(n: u32) -> Result<QMoyal, CliError> {
    QMoyal::new(n).map_err(|e| CliError::Input(e.to_string()))
}

fn qparse(ctx: &QMoyal, s: &str) -> Result<orbipoisson::qmoyal::QPoly, CliError> {
    ctx.parse(s).map_err(|e| CliError::Input(format!("{s:?}: {e}")))
}

fn qerr(e: QMoyalError) -> CliError {
    match e {
        QMoyalError::Divisibility(_) | QMoyalError::NotScalar => CliError::Math(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn catalog_entry(
    name: &str,
    n: Option<u32>,
    c0: Option<String>,
    a: Option<String>,
    c: Option<String>,
    t: Option<String>,
    variant: Option<u32>,
    conductor: Option<u32>,
    zero_b: bool,
) -> Result<catalog::CatalogEntry, CliError> {
    let cat = |e: catalog::CatalogError| CliError::Input(e.to_string());
    let lit = |s: &str, m: u32| parse_cyclotomic(s, m).map_err(|e| CliError::Input(format!("{s:?}: {e}")));
    let entry = match name {
        "gamma_n" => {
            let n = n.unwrap_or(1);
            let m = conductor.unwrap_or(2 * n + 1);
            let c0 = lit(c0.as_deref().unwrap_or("1"), m)?;
            let a = a.map(|s| lit(&s, m)).transpose()?;
            let g = GammaN::new(n, &c0, a.as_ref()).map_err(cat)?;
            return g.entry(&c0, zero_b).map_err(cat);
        }
        "z2_constant" => catalog::z2_constant(&lit(c.as_deref().unwrap_or("1"), conductor.unwrap_or(1))?),
        "z2_r3_linear" => catalog::z2_r3_linear(variant.unwrap_or(1)),
        "cyclic_qmoyal" => catalog::cyclic_qmoyal(n.unwrap_or(2)),
        "symplectic_cyclic" => {
            let m = conductor.unwrap_or(1);
            catalog::symplectic_cyclic(
                n.unwrap_or(2),
                &lit(t.as_deref().unwrap_or("1"), m)?,
                &lit(c.as_deref().unwrap_or("1"), m)?,
            )
        }
        _ => {
            return Err(CliError::Input(format!(
                "unknown catalog entry {name:?}; known: {}",
                catalog::NAMES.join(", ")
            )))
        }
    };
    let mut e = entry.map_err(cat)?;
    if zero_b {
        let zero = PolyVectorField::zero(e.pair.dim(), e.pair.conductor());
        e.pair = StructurePair::new(e.pair.pi.clone(), zero, e.pair.weights).map_err(pbw_error)?;
    }
    Ok(e)
}
