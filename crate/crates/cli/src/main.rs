use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monodromy::certifier::{certify, cross_validate, Agreement, Certificate, Hypotheses};
use monodromy::classical::{classify_element, FormSpace};
use monodromy::convolution::{
    map_local_jordan, middle_convolve, predict_rank, Label, PuncturedTuple,
};
use monodromy::families::{hyperelliptic_system, twist_family_system};
use monodromy::group::{GeneratedGroup, DEFAULT_ORBIT_LIMIT};
use monodromy::linalg::{invariant_forms, jordan_type, Subspace};
use monodromy::{BilinearForm, JordanData, Matrix, Parity, Prime};

mod tuple_file;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] monodromy::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Parser)]
#[command(
    name = "monodromy",
    version,
    about = "Monodromy of matrix tuples over prime fields"
)]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of vectors stored across stabiliser-chain orbits.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_LIMIT)]
    limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Tuple file; standard input when absent or `-`.
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Symmetric,
    Alternating,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Symmetric => Parity::Symmetric,
            ParityArg::Alternating => Parity::Alternating,
        }
    }
}

#[derive(Args)]
struct HypothesisArgs {
    #[arg(long)]
    r: usize,
    /// Comma-separated puncture indices forming S0.
    #[arg(long, value_delimiter = ',')]
    s0: Vec<usize>,
    /// Parity to use when the invariant pairing is not unique.
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    #[command(flatten)]
    input: Input,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the local monodromy at each puncture.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Order of the group generated by the finite punctures.
    Order {
        #[command(flatten)]
        input: Input,
    },
    /// Middle convolution MC_λ.
    Convolve {
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        #[command(flatten)]
        input: Input,
    },
    /// Monodromy of y² = f(x) with f of degree 2g.
    Hyperelliptic {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        prime: u32,
        /// Comma-separated roots of f.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<String>>,
    },
    /// Quadratic twists of the Legendre curve by a polynomial with the given roots.
    TwistFamily {
        #[arg(long, value_delimiter = ',', required = true)]
        roots: Vec<String>,
        #[arg(long)]
        prime: u32,
    },
    /// Check the big-monodromy hypotheses.
    Certify(HypothesisArgs),
    /// Certify and compare with the exact group.
    CrossValidate(HypothesisArgs),
    /// Rank of MC_λ predicted from local data.
    Predict {
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        /// Required with --local.
        #[arg(long)]
        prime: Option<u32>,
        /// Jordan data at a finite puncture, e.g. `4:1,1:2` for eigenvalue:size blocks.
        #[arg(long)]
        local: Vec<String>,
        /// Jordan data at ∞; required with --local.
        #[arg(long)]
        infinity: Option<String>,
        #[command(flatten)]
        input: Input,
    },
}

fn read_tuple(input: &Input) -> Result<PuncturedTuple, CliError> {
    let text = match &input.file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    tuple_file::parse(&text)
}

fn prime(p: u32) -> Result<Prime, CliError> {
    Ok(Prime::new(p)?)
}

fn residue(p: Prime, v: i64) -> Result<u32, CliError> {
    let r = p.reduce(v);
    if r == 0 {
        return Err(CliError::Input("λ must be nonzero mod ℓ".into()));
    }
    Ok(r)
}

fn labels(items: &[String]) -> Result<Vec<Label>, CliError> {
    Ok(items
        .iter()
        .map(|s| Label::parse(s))
        .collect::<Result<_, _>>()?)
}

fn parse_jordan(p: Prime, s: &str) -> Result<JordanData, CliError> {
    let mut blocks = Vec::new();
    for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (a, n) = part
            .split_once(':')
            .ok_or_else(|| CliError::Input(format!("bad Jordan block {part:?}")))?;
        let a: i64 = a
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad eigenvalue {a:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad block size {n:?}")))?;
        let a = p.reduce(a);
        if a == 0 || n == 0 {
            return Err(CliError::Input(format!("bad Jordan block {part:?}")));
        }
        blocks.push((a, n));
    }
    Ok(JordanData::new(blocks))
}

/// Invariant pairing of the generators: the unique one when the space of
/// invariant forms is a line, otherwise a seeded non-degenerate choice of
/// the requested (or first available) parity.
fn choose_pairing(
    gens: &[Matrix],
    parity: Option<Parity>,
    seed: u64,
) -> Result<BilinearForm, CliError> {
    let p = gens[0].prime();
    let n = gens[0].rows();
    let forms = invariant_forms(gens)?;
    if forms.len() == 1 {
        let f = BilinearForm::detect(forms[0].clone())?;
        if parity.is_none_or(|q| q == f.parity()) {
            return Ok(f);
        }
    }
    let flat = |m: &Matrix| -> Vec<u32> { m.entries().to_vec() };
    let order = match parity {
        Some(q) => vec![q],
        None => vec![Parity::Alternating, Parity::Symmetric],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for q in order {
        let parts: Vec<Vec<u32>> = forms
            .iter()
            .map(|m| match q {
                Parity::Symmetric => flat(&m.add(&m.transpose())),
                Parity::Alternating => flat(&m.sub(&m.transpose())),
            })
            .collect();
        let span = Subspace::from_vectors(p, n * n, parts);
        if span.dim() == 0 {
            continue;
        }
        for _ in 0..64 {
            let mut v = vec![0u32; n * n];
            for b in span.basis() {
                let c = rng.gen_range(0..p.get());
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = p.add(*x, p.mul(c, y));
                }
            }
            let gram = Matrix::from_residues(p, n, n, v)?;
            if gram.is_invertible() {
                return Ok(BilinearForm::new(gram, q)?);
            }
        }
    }
    Err(CliError::Input(
        "no non-degenerate invariant pairing of the requested parity".into(),
    ))
}

fn hypotheses(args: &HypothesisArgs, seed: u64) -> Result<Hypotheses, CliError> {
    let t = read_tuple(&args.input)?;
    let gens = t.matrices();
    if gens.is_empty() {
        return Err(CliError::Input("tuple has no punctures".into()));
    }
    let form = choose_pairing(&gens, args.parity.map(Parity::from), seed)?;
    let space = FormSpace::new(form)?;
    Ok(Hypotheses::new(space, gens, args.s0.clone(), args.r)?.with_seed(seed))
}

fn certificate_lines(h: &Hypotheses, c: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("PARITY: {}\n", h.space.parity()));
    out.push_str(&format!("DIM: {}\n", h.space.dim()));
    out.push_str(&format!("PRIME: {}\n", h.space.prime()));
    for check in &c.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{}: {status} {}\n",
            check.kind.key(),
            check.evidence
        ));
    }
    out.push_str(&format!("CONCLUSION: {}\n", c.conclusion));
    out
}

fn jordan_text(m: &Matrix) -> String {
    match jordan_type(m) {
        Ok(j) => j.to_string(),
        Err(_) => "non-split".to_string(),
    }
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    let seed = cli.seed;
    let group = |t: &PuncturedTuple| -> Result<GeneratedGroup, CliError> {
        Ok(GeneratedGroup::new(t.prime(), t.rank(), t.matrices())?
            .with_seed(seed)
            .with_orbit_limit(cli.limit))
    };
    match cli.command {
        Command::Classify { input } => {
            let t = read_tuple(&input)?;
            let mut out = format!("PRIME: {}\nRANK: {}\n", t.prime(), t.rank());
            let space = match invariant_forms(&t.matrices())? {
                forms if forms.len() == 1 => BilinearForm::detect(forms[0].clone())
                    .ok()
                    .and_then(|f| FormSpace::new(f).ok()),
                _ => None,
            };
            match &space {
                Some(s) => out.push_str(&format!("PAIRING: {}\n", s.parity())),
                None => out.push_str("PAIRING: none\n"),
            }
            let rows = t
                .punctures()
                .iter()
                .map(|(l, m)| (l.to_string(), m))
                .chain(std::iter::once(("inf".to_string(), t.infinity())));
            for (label, m) in rows {
                let class = match &space {
                    Some(s) => classify_element(m, s)?.tag.to_string(),
                    None => "unclassified".to_string(),
                };
                let drop = m.minus_scalar(1).rank();
                out.push_str(&format!(
                    "AT {label}: {class} DROP {drop} JORDAN {}\n",
                    jordan_text(m)
                ));
            }
            Ok((out, 0))
        }
        Command::Order { input } => {
            let t = read_tuple(&input)?;
            let order = group(&t)?.order()?;
            Ok((format!("ORDER: {order}\n"), 0))
        }
        Command::Convolve { lambda, input } => {
            let t = read_tuple(&input)?;
            let l = residue(t.prime(), lambda)?;
            let out = middle_convolve(&t, l)?;
            Ok((tuple_file::emit(&out), 0))
        }
        Command::Hyperelliptic {
            genus,
            prime: p,
            points,
        } => {
            let p = prime(p)?;
            let pts = points.as_deref().map(labels).transpose()?;
            let sys = hyperelliptic_system(genus, p, pts.as_deref())?;
            Ok((tuple_file::emit(&sys.tuple), 0))
        }
        Command::TwistFamily { roots, prime: p } => {
            let sys = twist_family_system(&labels(&roots)?, prime(p)?)?;
            Ok((tuple_file::emit(&sys.tuple), 0))
        }
        Command::Certify(args) => {
            let h = hypotheses(&args, seed)?;
            let c = certify(&h)?;
            let code = if c.conclusion.is_big() { 0 } else { 1 };
            Ok((certificate_lines(&h, &c), code))
        }
        Command::CrossValidate(args) => {
            let h = hypotheses(&args, seed)?;
            let cv = cross_validate(&h)?;
            let mut out = certificate_lines(&h, &cv.certificate);
            out.push_str(&format!("EXACT_ORDER: {}\n", cv.exact_order));
            out.push_str(&format!("EXACT_CLASS: {}\n", cv.exact_class_name()));
            out.push_str(&format!("AGREEMENT: {}\n", cv.agreement));
            let ok = cv.agreement == Agreement::Agree && cv.certificate.conclusion.is_big();
            Ok((out, if ok { 0 } else { 1 }))
        }
        Command::Predict {
            lambda,
            prime: p,
            local,
            infinity,
            input,
        } => {
            let (p, finite, inf) = if local.is_empty() {
                let t = read_tuple(&input)?;
                let finite = t
                    .local_jordan()?
                    .into_iter()
                    .map(|(_, j)| j)
                    .collect::<Vec<_>>();
                (t.prime(), finite, t.infinity_jordan()?)
            } else {
                let p = prime(p.ok_or_else(|| CliError::Input("--local needs --prime".into()))?)?;
                let inf =
                    infinity.ok_or_else(|| CliError::Input("--local needs --infinity".into()))?;
                let finite = local
                    .iter()
                    .map(|s| parse_jordan(p, s))
                    .collect::<Result<Vec<_>, _>>()?;
                (p, finite, parse_jordan(p, &inf)?)
            };
            let l = residue(p, lambda)?;
            let rank = predict_rank(&finite, &inf, l, p)?;
            let mut out = format!("RANK: {rank}\n");
            for (i, j) in finite.iter().enumerate() {
                out.push_str(&format!("LOCAL {i}: {}\n", map_local_jordan(j, l, p)?));
            }
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
