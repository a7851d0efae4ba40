use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use ppsl2::halfplane::DecoratedTessellationTruncation;
use ppsl2_cli::emit::{self, Series};
use ppsl2_cli::{init_threads, suites, Report};

#[derive(Parser)]
#[command(name = "ppsl2", version, about = "Exact piecewise-sl2 fields on the Farey tessellation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite; exit 1 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Verify,
    },
    /// Fourier coefficients as CSV.
    Fourier {
        #[command(subcommand)]
        kind: Fourier,
    },
    Enumerate {
        #[command(subcommand)]
        what: Enumerate,
    },
    Coset {
        #[command(subcommand)]
        what: Coset,
    },
    Tess {
        #[command(subcommand)]
        what: Tess,
    },
    Expand {
        #[command(subcommand)]
        what: Expand,
    },
}

#[derive(Args)]
struct Out {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verify {
    Usa {
        #[arg(long, default_value_t = 6)]
        max_gen: u32,
        #[arg(long)]
        seed: u64,
        /// Extra random matrices on top of the edge labels.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        out: Out,
    },
    Bracket {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    Flip {
        /// `doe`, one of the side labels `ST SU U^-1 T^-1`, or `all`.
        #[arg(long, default_value = "all")]
        case: String,
        #[command(flatten)]
        out: Out,
    },
    FormsRatio {
        #[arg(long, default_value_t = 4)]
        max_gen: u32,
        #[command(flatten)]
        out: Out,
    },
    Kk {
        #[arg(long, default_value_t = 10)]
        pairs: usize,
        #[arg(short = 'M', long, default_value_t = 2000)]
        m: u32,
        #[command(flatten)]
        out: Out,
    },
    Telescoping {
        #[arg(short = 'N', long, default_value_t = 200)]
        n: u32,
        #[command(flatten)]
        out: Out,
    },
    Eisenstein {
        #[arg(short = 'N', long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    PolygonRelations {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[command(flatten)]
        out: Out,
    },
    TessRoundtrip {
        #[arg(long, default_value_t = 8)]
        max_gen: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Also read this tessellation file and check it survives a round trip.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Fourier {
    Wavelet {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 64)]
        nmax: i64,
        #[command(flatten)]
        out: Out,
    },
    Hyperfan {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 64)]
        nmax: i64,
        #[command(flatten)]
        out: Out,
    },
    Witt {
        #[arg(short = 'n', long)]
        n: i64,
        #[arg(long, default_value_t = 8)]
        max_gen: u32,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Enumerate {
    Farey {
        #[arg(long, default_value_t = 32)]
        count: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Coset {
    Classify {
        /// Words in `R S T U` with optional exponents, e.g. `"S T^-2"`.
        #[arg(required = true)]
        words: Vec<String>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Tess {
    Build {
        #[arg(long)]
        max_gen: u32,
        /// JSON object from words to squared lambda lengths.
        #[arg(long)]
        lambdas: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Expand {
    Basis {
        /// A piecewise field in JSON.
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

fn write(out: &Out, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(out: &Out, rep: Report) -> Result<u8> {
    let text = serde_json::to_string_pretty(&rep.to_json())? + "\n";
    write(out, &text)?;
    eprintln!("{}: {} ({} checks)", rep.suite, if rep.passed { "PASS" } else { "FAIL" }, rep.checked);
    Ok(rep.exit_code() as u8)
}

fn json(out: &Out, v: serde_json::Value) -> Result<u8> {
    write(out, &(serde_json::to_string_pretty(&v)? + "\n"))?;
    Ok(0)
}

fn read(p: &PathBuf) -> Result<String> {
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Verify { suite } => match suite {
            Verify::Usa { max_gen, seed, samples, out } => report(&out, suites::usa(max_gen, seed, samples)),
            Verify::Bracket { samples, seed, out } => report(&out, suites::bracket(samples, seed)),
            Verify::Flip { case, out } => {
                let c = match case.as_str() {
                    "all" => None,
                    s => Some(suites::flip_case(s).with_context(|| format!("unknown case {s:?}"))?),
                };
                report(&out, suites::flip(c))
            }
            Verify::FormsRatio { max_gen, out } => report(&out, suites::forms_ratio(max_gen)),
            Verify::Kk { pairs, m, out } => report(&out, suites::kk(pairs, m)),
            Verify::Telescoping { n, out } => report(&out, suites::telescoping(n)),
            Verify::Eisenstein { n, h, seed, out } => report(&out, suites::eisenstein(n, h, seed)),
            Verify::PolygonRelations { max_n, out } => report(&out, suites::polygon_relations(max_n)),
            Verify::TessRoundtrip { max_gen, samples, seed, input, out } => {
                let mut rep = suites::tess_roundtrip(max_gen, samples, seed);
                if let Some(p) = input {
                    let text = read(&p)?;
                    let ok = DecoratedTessellationTruncation::from_json_str(&text).is_ok_and(|t| {
                        DecoratedTessellationTruncation::from_json_str(&t.to_json().to_string()).ok() == Some(t.clone())
                    });
                    rep.check(ok, || serde_json::json!({"input": p.display().to_string()}));
                }
                report(&out, rep)
            }
        },
        Cmd::Fourier { kind } => match kind {
            Fourier::Wavelet { word, nmax, out } => write(&out, &emit::fourier_csv(Series::Wavelet, &word, nmax)?).map(|_| 0),
            Fourier::Hyperfan { word, nmax, out } => write(&out, &emit::fourier_csv(Series::Hyperfan, &word, nmax)?).map(|_| 0),
            Fourier::Witt { n, max_gen, samples, out } => write(&out, &emit::witt_csv(n, max_gen, samples)).map(|_| 0),
        },
        Cmd::Enumerate { what: Enumerate::Farey { count, out } } => json(&out, emit::enumerate_farey(count)),
        Cmd::Coset { what: Coset::Classify { words, out } } => json(&out, emit::coset_classify(&words)?),
        Cmd::Tess { what: Tess::Build { max_gen, lambdas, out } } => {
            let text = lambdas.as_ref().map(read).transpose()?;
            json(&out, emit::tess_build(max_gen, text.as_deref())?)
        }
        Cmd::Expand { what: Expand::Basis { field, out } } => json(&out, emit::expand_basis(&read(&field)?)?),
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
