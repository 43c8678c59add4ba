use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use transdeg::diagonal::{diagonal_word, verify_diagonal, PairOutcome, DEFAULT_DEPTH};
use transdeg::exactla::{format_rational_list, parse_rational, parse_rational_list, Rational};
use transdeg::polyatoms::{
    atom_certificate, atom_polynomial, default_schedule, power_mean, power_mean_exact, search_weighted_preimage,
    verify_certificate, Certificate, SearchBounds, SearchOutcome, VerifyReport,
};
use transdeg::synthesis::{synth_ratio_fst, synth_weight_fst, Stage};
use transdeg::weights::compose_tuples;
use transdeg::{Error, Fst, RationalPoly, Stream, WeightTuple};

#[derive(Parser)]
#[command(name = "transdeg", version, about = "Transducer degrees of infinite words: exact tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a word.
    Word {
        spec: String,
        #[arg(long)]
        prefix: usize,
    },
    /// Print a prefix of the output of a machine on a word.
    Transduce {
        #[arg(long)]
        fst: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        prefix: usize,
    },
    #[command(subcommand)]
    Weights(WeightsCommand),
    /// Build the machine for a tuple of weights, optionally followed by a ratio e/D.
    Synth {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        ratio: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    #[command(subcommand)]
    Atom(AtomCommand),
    #[command(subcommand)]
    Nonatom(NonatomCommand),
    /// Weighted power mean of order p.
    Powermean {
        #[arg(long)]
        w: String,
        #[arg(long)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Build a word dodging every listed (machine, word) pair.
    Diagonalize {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum WeightsCommand {
    /// Weighted product of explicit values.
    Apply {
        #[arg(long)]
        tuple: String,
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long)]
        count: usize,
    },
    /// Weighted product of a polynomial given by its coefficients c0,c1,….
    Product {
        #[arg(long)]
        tuple: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        count: usize,
    },
    /// The tuple t with t ⊙ f = outer ⊙ (inner ⊙ f).
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
    },
}

#[derive(Subcommand)]
enum AtomCommand {
    /// The atom polynomial Σ a_i (kn + i)^k.
    Poly(AtomArgs),
    /// A certificate reducing ⟨q⟩ to the atom polynomial.
    Cert {
        #[command(flatten)]
        atom: AtomArgs,
        #[arg(long)]
        q: String,
        #[arg(long)]
        verify_blocks: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 8)]
        blocks: usize,
    },
}

#[derive(Args)]
struct AtomArgs {
    #[arg(long)]
    k: usize,
    /// Positive coefficients; all ones by default.
    #[arg(long)]
    a: Option<String>,
}

#[derive(Subcommand)]
enum NonatomCommand {
    /// Search for a tuple mapping ⟨(2n)^k + (2n+1)^k⟩ onto ⟨n^k⟩ (or the reverse with --forward).
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_window: usize,
        #[arg(long)]
        max_shift: usize,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        forward: bool,
    },
}

/// A failed run: exit code 1 for a negative answer, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e == Error::BudgetExhausted { 1 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Output text and exit code of a successful dispatch.
type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Word { spec, prefix } => {
            let stream: Stream = spec.parse()?;
            prefix_text(&stream, prefix)
        }
        Command::Transduce { fst, word, prefix } => {
            let machine = read_fst(&fst)?;
            let inner: Stream = word.parse()?;
            prefix_text(&Stream::transduct(machine, inner), prefix)
        }
        Command::Weights(cmd) => weights(cmd),
        Command::Synth { weights, ratio, output } => {
            let tuple: WeightTuple = weights.parse()?;
            let mut machine = synth_weight_fst(&tuple)?;
            if let Some(r) = ratio {
                let Stage::Ratio { e, d } = Stage::ratio(&parse_ratio(&r)?)? else {
                    unreachable!("Stage::ratio builds ratio stages")
                };
                machine = machine.compose(&synth_ratio_fst(e, d)?).trim();
            }
            emit(machine.to_text(), output.as_deref())
        }
        Command::Atom(cmd) => atom(cmd),
        Command::Nonatom(NonatomCommand::Search { k, max_window, max_shift, max_len, forward }) => {
            if k == 0 {
                return Err(input_error("k must be positive"));
            }
            let power = RationalPoly::monomial(Rational::from_integer(1.into()), k);
            let fused = &power.affine_subst(2, 0) + &power.affine_subst(2, 1);
            let (g, f) = if forward { (&power, &fused) } else { (&fused, &power) };
            let bounds = SearchBounds { max_len, max_window, max_shift };
            match search_weighted_preimage(g, f, bounds)? {
                SearchOutcome::Found { n0, m0, tuple } => Ok((format!("FOUND n0={n0} m0={m0} tuple={tuple}\n"), 0)),
                SearchOutcome::NotFoundWithinBounds { shapes, unknown_shapes } => {
                    Ok((format!("NOT FOUND WITHIN BOUNDS\nshapes {shapes}\nundecided {unknown_shapes}\n"), 1))
                }
            }
        }
        Command::Powermean { w, x, p } => {
            let w = parse_rational_list(&w)?;
            let x = parse_rational_list(&x)?;
            let p = parse_rational(&p)?;
            let mut out = format!("{}\n", power_mean(&w, &p, &x)?);
            if p.is_integer() {
                let exact = i64::try_from(p.to_integer()).ok().map(|e| power_mean_exact(&w, e, &x)).transpose()?;
                if let Some(Some(m)) = exact {
                    writeln!(out, "exact {m}").expect("write to string");
                }
            }
            Ok((out, 0))
        }
        Command::Diagonalize { pairs, depth } => diagonalize(&pairs, depth),
    }
}

fn prefix_text(stream: &Stream, n: usize) -> Outcome {
    let prefix = stream.prefix(n)?;
    let mut out = format!("{}\n", prefix.word);
    if prefix.stalled {
        out.push_str("# finite: the word ends here\n");
    }
    Ok((out, 0))
}

fn weights(cmd: WeightsCommand) -> Outcome {
    match cmd {
        WeightsCommand::Apply { tuple, values, count } => {
            let tuple: WeightTuple = tuple.parse()?;
            let values = parse_rational_list(&values)?;
            Ok((format!("{}\n", format_rational_list(&tuple.product_of_values(&values, count)?)), 0))
        }
        WeightsCommand::Product { tuple, poly, count } => {
            let tuple: WeightTuple = tuple.parse()?;
            let poly: RationalPoly = poly.parse()?;
            Ok((format!("{}\n", format_rational_list(&tuple.product_of_poly(&poly, count)?)), 0))
        }
        WeightsCommand::Compose { outer, inner } => {
            let outer: WeightTuple = outer.parse()?;
            let inner: WeightTuple = inner.parse()?;
            Ok((format!("{}\n", compose_tuples(&outer, &inner)?), 0))
        }
    }
}

fn atom(cmd: AtomCommand) -> Outcome {
    match cmd {
        AtomCommand::Poly(args) => {
            let a = atom_coefficients(&args)?;
            Ok((format!("{}\n", atom_polynomial(args.k, &a)?), 0))
        }
        AtomCommand::Cert { atom, q, verify_blocks, output } => {
            let a = atom_coefficients(&atom)?;
            let q: RationalPoly = q.parse()?;
            if q.order() != atom.k {
                return Err(input_error(format!("q has order {} but k = {}", q.order(), atom.k)));
            }
            let cert = atom_certificate(&q, &a, &default_schedule())?;
            let (mut out, mut code) = emit(cert.to_string(), output.as_deref())?;
            if let Some(blocks) = verify_blocks {
                let report = verify_certificate(&cert, blocks);
                out.push_str(&report_text(&report));
                code = u8::from(!report.passed());
            }
            Ok((out, code))
        }
        AtomCommand::Verify { cert, blocks } => {
            let cert: Certificate = read(&cert)?.parse()?;
            let report = verify_certificate(&cert, blocks);
            Ok((report_text(&report), u8::from(!report.passed())))
        }
    }
}

fn atom_coefficients(args: &AtomArgs) -> Result<Vec<Rational>, Failure> {
    match &args.a {
        Some(list) => Ok(parse_rational_list(list)?),
        None => Ok(vec![Rational::from_integer(1.into()); args.k]),
    }
}

fn report_text(report: &VerifyReport) -> String {
    let line =
        |name: &str, passed: bool, detail: &str| format!("{name} {}: {detail}\n", if passed { "PASS" } else { "FAIL" });
    let mut out = line("symbolic", report.symbolic.passed, &report.symbolic.detail);
    out.push_str(&line("semantic", report.semantic.passed, &report.semantic.detail));
    out.push_str(if report.passed() { "VERIFIED\n" } else { "NOT VERIFIED\n" });
    out
}

/// `e/D` or a plain integer.
fn parse_ratio(s: &str) -> Result<Rational, Failure> {
    let r = parse_rational(s)?;
    if r <= Rational::from_integer(0.into()) {
        return Err(input_error(format!("ratio {s} must be positive")));
    }
    Ok(r)
}

fn diagonalize(pairs: &Path, depth: usize) -> Outcome {
    let text = read(pairs)?;
    let base = pairs.parent().unwrap_or(Path::new("."));
    let mut adversary = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let ["machine", file, "word", spec] = fields[..] else {
            return Err(input_error(format!("line {}: expected `machine <file> word <spec>`", i + 1)));
        };
        let machine = read_fst(&base.join(file))?;
        let word: Stream = spec.parse().map_err(|e: Error| input_error(format!("line {}: {e}", i + 1)))?;
        adversary.push((machine, word));
    }
    let (w, report) = diagonal_word(&adversary, depth)?;
    let verified = verify_diagonal(&adversary, &w, &report)?;
    let mut out = format!("w = {w}\n");
    for (i, (outcome, ok)) in report.outcomes.iter().zip(&verified).enumerate() {
        let status = if *ok { "verified" } else { "FAILED" };
        match outcome {
            PairOutcome::Dodged { prefix_len, differing_index } => writeln!(
                out,
                "pair {i}: dodged after {prefix_len} letters, output differs at index {differing_index} ({status})"
            ),
            PairOutcome::PredeterminedWithinBudget(d) => {
                writeln!(out, "pair {i}: predetermined up to depth {d}")
            }
        }
        .expect("write to string");
    }
    let all = verified.iter().all(|&ok| ok);
    out.push_str(if all { "ALL PAIRS DODGED OR PREDETERMINED\n" } else { "VERIFICATION FAILED\n" });
    Ok((out, u8::from(!all)))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_fst(path: &Path) -> Result<Fst, Failure> {
    Fst::from_text(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or returns it for stdout.
fn emit(text: String, path: Option<&Path>) -> Outcome {
    match path {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
            Ok((String::new(), 0))
        }
        None => Ok((text, 0)),
    }
}
