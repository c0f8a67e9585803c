//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the captured output, so tests can drive it in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use prelie_core::dual::verify_dual;
use prelie_core::enveloping::check_freeness;
use prelie_core::homology::{homology_ranks, PreLieStructure};
use prelie_core::lincomb::{parse_lincomb, AnyComb};
use prelie_core::operad::{compose_at, dim_rt, gamma, series_inverse_check, star, DimReport};
use prelie_core::trees::RootedTree;
use prelie_core::words::{phi, psi_comb, relator, relator_orbit, roundtrip_check, s3, RoundtripReport, UngraftChoice};
use prelie_core::{Alphabet, LinComb, OperadElement, WordComb};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "prelie", about = "Exact computations with rooted trees and pre-Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Json {
    /// Print a JSON document instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// T ∘_i S in the rooted-trees operad.
    Compose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        at: usize,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        out: Json,
    },
    /// γ(μ; ν₁, …, νₙ); pass μ with --left and each νᵢ with --right, in order.
    Gamma {
        #[arg(long)]
        left: String,
        #[arg(long = "right")]
        right: Vec<String>,
        #[command(flatten)]
        out: Json,
    },
    /// T₁ ⋆ T₂ in the rooted-trees operad.
    Star {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        out: Json,
    },
    /// Tree image of a combination of words.
    Phi {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        out: Json,
    },
    /// A word combination mapping to the given trees.
    Psi {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        out: Json,
    },
    /// Checks phi ∘ psi = id on every tree with at most --max vertices.
    Roundtrip {
        #[arg(long, default_value_t = 5)]
        max: usize,
        #[command(flatten)]
        out: Json,
    },
    /// dim RT(n) = n^(n-1), with enumeration for n ≤ 7.
    Dims {
        #[arg(long, default_value_t = 7)]
        max: usize,
        #[command(flatten)]
        out: Json,
    },
    /// Checks that the rooted-tree series inverts x ↦ -x e^(-x).
    SeriesCheck {
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[command(flatten)]
        out: Json,
    },
    /// Checks the arity-three duality between pre-Lie and Perm.
    DualCheck {
        #[command(flatten)]
        out: Json,
    },
    /// Homology of the free pre-Lie algebra, weight by weight.
    Homology {
        #[arg(long)]
        generators: String,
        #[arg(long)]
        max_weight: usize,
        #[arg(long)]
        max_degree: usize,
        /// Fail unless the homology is the generators in degree one.
        #[arg(long)]
        assert_koszul: bool,
        #[command(flatten)]
        out: Json,
    },
    /// Checks that the free pre-Lie algebra is free over its enveloping algebra.
    PbwCheck {
        #[arg(long)]
        generators: String,
        #[arg(long)]
        max_weight: usize,
        #[command(flatten)]
        out: Json,
    },
    /// The pre-Lie relator, its S3 orbit, and the tree images.
    Relator {
        #[command(flatten)]
        out: Json,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    text: String,
    json: String,
    ok: bool,
}

fn report<T: Serialize>(text: String, data: &T, ok: bool) -> Report {
    let json = serde_json::to_string_pretty(data).expect("reports serialize");
    Report { text, json, ok }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let json = match &cli.command {
        Command::Compose { out, .. }
        | Command::Gamma { out, .. }
        | Command::Star { out, .. }
        | Command::Phi { out, .. }
        | Command::Psi { out, .. }
        | Command::Roundtrip { out, .. }
        | Command::Dims { out, .. }
        | Command::SeriesCheck { out, .. }
        | Command::DualCheck { out }
        | Command::Homology { out, .. }
        | Command::PbwCheck { out, .. }
        | Command::Relator { out } => out.json,
    };
    match execute(cli.command) {
        Ok(r) => {
            let mut stdout = if json { r.json } else { r.text };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome { code: if r.ok { EXIT_OK } else { EXIT_FAILED }, stdout, stderr: String::new() }
        }
        Err(message) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") },
    }
}

fn operad_arg(flag: &str, text: &str) -> Result<OperadElement, String> {
    OperadElement::parse(text).map_err(|e| format!("--{flag}: {e}"))
}

fn trees_arg(flag: &str, text: &str) -> Result<LinComb<RootedTree>, String> {
    match parse_lincomb(text).map_err(|e| format!("--{flag}: {e}"))? {
        AnyComb::Trees(t) => Ok(t),
        AnyComb::Words(w) if w.is_zero() => Ok(LinComb::zero()),
        AnyComb::Words(_) => Err(format!("--{flag}: expected trees, found words")),
    }
}

fn words_arg(flag: &str, text: &str) -> Result<WordComb, String> {
    match parse_lincomb(text).map_err(|e| format!("--{flag}: {e}"))? {
        AnyComb::Words(w) => Ok(w),
        AnyComb::Trees(t) if t.is_zero() => Ok(WordComb::zero()),
        AnyComb::Trees(_) => Err(format!("--{flag}: expected words, found trees")),
    }
}

fn alphabet_arg(text: &str) -> Result<Alphabet, String> {
    Alphabet::new(text.split(',').map(str::trim)).map_err(|e| format!("--generators: {e}"))
}

#[derive(Serialize)]
struct OperadOut<'a> {
    arity: usize,
    value: &'a LinComb<RootedTree>,
}

#[derive(Serialize)]
struct Image<'a, T: Serialize> {
    input: &'a str,
    value: T,
}

fn operad_report(e: &OperadElement) -> Report {
    report(e.to_string(), &OperadOut { arity: e.arity(), value: e.value() }, true)
}

#[derive(Serialize)]
struct Checked<T: Serialize> {
    passed: bool,
    #[serde(flatten)]
    data: T,
}

#[derive(Serialize)]
struct Rows<T: Serialize> {
    rows: Vec<T>,
}

fn execute(command: Command) -> Result<Report, String> {
    match command {
        Command::Compose { left, at, right, .. } => {
            let t = operad_arg("left", &left)?;
            let s = operad_arg("right", &right)?;
            Ok(operad_report(&compose_at(&t, at, &s).map_err(|e| e.to_string())?))
        }
        Command::Gamma { left, right, .. } => {
            let mu = operad_arg("left", &left)?;
            let args = right.iter().map(|r| operad_arg("right", r)).collect::<Result<Vec<_>, _>>()?;
            Ok(operad_report(&gamma(&mu, &args).map_err(|e| e.to_string())?))
        }
        Command::Star { left, right, .. } => {
            let a = operad_arg("left", &left)?;
            let b = operad_arg("right", &right)?;
            Ok(operad_report(&star(&a, &b)))
        }
        Command::Phi { word, .. } => {
            let w = words_arg("word", &word)?;
            let image = phi(&w);
            Ok(report(image.to_string(), &Image { input: &word, value: &image }, true))
        }
        Command::Psi { tree, .. } => {
            let t = trees_arg("tree", &tree)?;
            let words = psi_comb(&t, UngraftChoice::Smallest);
            Ok(report(words.to_string(), &Image { input: &tree, value: &words }, true))
        }
        Command::Roundtrip { max, .. } => roundtrip(max),
        Command::Dims { max, .. } => dims(max),
        Command::SeriesCheck { order, .. } => {
            let r = series_inverse_check(order).map_err(|e| e.to_string())?;
            let mut text = String::from("order\tresidual\n");
            for (k, c) in r.residual_coefficients.iter().enumerate() {
                writeln!(text, "{}\t{c}", k + 1).unwrap();
            }
            write!(text, "inverse: {}", yes_no(r.passed())).unwrap();
            let ok = r.passed();
            Ok(report(text, &Checked { passed: ok, data: r }, ok))
        }
        Command::DualCheck { .. } => {
            let r = verify_dual();
            let text = format!(
                "dim R = {}\ndim R' = {}\ndim R^perp = {}\n<R, R'> = 0: {}\nR^perp = R': {}\ndual: {}",
                r.dim_r,
                r.dim_r_prime,
                r.dim_annihilator,
                yes_no(r.orthogonal),
                yes_no(r.annihilator_matches),
                yes_no(r.passed())
            );
            let ok = r.passed();
            Ok(report(text, &Checked { passed: ok, data: r }, ok))
        }
        Command::Homology { generators, max_weight, max_degree, assert_koszul, .. } => {
            let alphabet = alphabet_arg(&generators)?;
            let l = PreLieStructure::free(&alphabet, max_weight).map_err(|e| e.to_string())?;
            let table = homology_ranks(&l, max_degree, max_weight).map_err(|e| e.to_string())?;
            let koszul = table.concentrated_in_degree_one(alphabet.len());
            let text = format!("{table}\nconcentrated in degree 1: {}", yes_no(koszul));
            let ok = table.d_squared_zero() && (koszul || !assert_koszul);
            #[derive(Serialize)]
            struct Out {
                generators: String,
                concentrated_in_degree_one: bool,
                d_squared_zero: bool,
                #[serde(flatten)]
                table: prelie_core::homology::HomologyTable,
            }
            let d2 = table.d_squared_zero();
            let out = Out { generators: alphabet.to_string(), concentrated_in_degree_one: koszul, d_squared_zero: d2, table };
            Ok(report(text, &out, ok))
        }
        Command::PbwCheck { generators, max_weight, .. } => {
            let alphabet = alphabet_arg(&generators)?;
            let r = check_freeness(&alphabet, max_weight).map_err(|e| e.to_string())?;
            let ok = r.passed();
            Ok(report(r.to_string(), &Checked { passed: ok, data: r }, ok))
        }
        Command::Relator { .. } => relator_report(),
    }
}

fn roundtrip(max: usize) -> Result<Report, String> {
    if !(1..=5).contains(&max) {
        return Err(format!("--max must be in 1..=5, got {max}"));
    }
    let reports: Vec<RoundtripReport> =
        (1..=max).map(roundtrip_check).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut text = String::from("n\ttrees\tphi(psi(T)) = T\tchoice-independent\n");
    for r in &reports {
        writeln!(
            text,
            "{}\t{}\t{}\t{}",
            r.n,
            r.trees_checked,
            yes_no(r.phi_psi_failures.is_empty()),
            yes_no(r.choice_mismatches.is_empty())
        )
        .unwrap();
    }
    let ok = reports.iter().all(RoundtripReport::passed);
    write!(text, "roundtrip: {}", yes_no(ok)).unwrap();
    Ok(report(text, &Checked { passed: ok, data: Rows { rows: reports } }, ok))
}

fn dims(max: usize) -> Result<Report, String> {
    if !(1..=30).contains(&max) {
        return Err(format!("--max must be in 1..=30, got {max}"));
    }
    let rows: Vec<DimReport> =
        (1..=max).map(|n| dim_rt(n, n <= 7)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut text = String::from("n\tn^(n-1)\tenumerated\tmatch\n");
    for r in &rows {
        let (e, m) = match r.enumerated {
            Some(e) => (e.to_string(), yes_no(r.matches())),
            None => ("-".to_string(), "-"),
        };
        writeln!(text, "{}\t{}\t{e}\t{m}", r.n, r.formula).unwrap();
    }
    let ok = rows.iter().all(DimReport::matches);
    text.pop();
    Ok(report(text, &Checked { passed: ok, data: Rows { rows } }, ok))
}

fn relator_report() -> Result<Report, String> {
    #[derive(Serialize)]
    struct Entry {
        permutation: [u32; 3],
        element: WordComb,
        phi: LinComb<RootedTree>,
    }
    #[derive(Serialize)]
    struct Out {
        relator: WordComb,
        orbit: Vec<Entry>,
    }
    let orbit: Vec<Entry> = s3()
        .into_iter()
        .zip(relator_orbit())
        .map(|(permutation, element)| {
            let image = phi(&element);
            Entry { permutation, element, phi: image }
        })
        .collect();
    let mut text = format!("r = {}\n", relator());
    for e in &orbit {
        let p = e.permutation;
        writeln!(text, "[{} {} {}]\t{}\tphi = {}", p[0], p[1], p[2], e.element, e.phi).unwrap();
    }
    let ok = orbit.iter().all(|e| e.phi.is_zero());
    write!(text, "annihilated: {}", yes_no(ok)).unwrap();
    let out = Checked { passed: ok, data: Out { relator: relator(), orbit } };
    Ok(report(text, &out, ok))
}
