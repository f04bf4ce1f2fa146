use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fibrecount::arith::{format_rational, Rational};
use fibrecount::coproduct::{
    coproduct, CoproductForm, CoproductOptions, Decomposition, ForestSigma,
};
use fibrecount::lowering::{c_coefficients, d_coefficient, transition_gf, UPolynomial};
use fibrecount::multiindex::{find_shift, Alphabet, MultiIndex};
use fibrecount::mutation::Mutation;
use fibrecount::oracle::{run_oracle, run_oracle_with_threads, OracleConfig, OracleReport};
use fibrecount::ordinary::{ordinary_count, ordinary_series};
use fibrecount::series::TruncatedSeries;
use fibrecount::weighted::{weighted_counts, weighted_series};
use fibrecount::Error;

const MAX_ALPHABET: usize = 16;

#[derive(Parser, Debug)]
#[command(
    name = "fibrecount",
    version,
    about = "Exact fibre counts of the fertility map on decorated rooted trees",
    after_help = "Exit codes: 0 ok, 1 oracle mismatch, 2 parse error, 3 domain error, 4 cap exceeded."
)]
struct Cli {
    /// Decoration alphabet, comma separated. Inferred from the inputs when omitted.
    #[arg(long, global = true, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,

    /// Truncation degree for `series`.
    #[arg(long, global = true, default_value_t = 6)]
    max_degree: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// How decompositions are counted in `coproduct`.
    #[arg(long, global = true, value_enum, default_value_t = DecompositionArg::Multiset)]
    decomposition: DecompositionArg,

    /// Symmetry factor of a product of monomials in `coproduct`.
    #[arg(long, global = true, value_enum, default_value_t = ForestSigmaArg::MultTimesSigma)]
    forest_sigma: ForestSigmaArg,

    /// Largest accepted `--max-degree` for `series`.
    #[arg(long, global = true, default_value_t = 12)]
    degree_cap: u64,

    /// Largest accepted `--max-n` for `oracle`.
    #[arg(long, global = true, default_value_t = 8)]
    oracle_cap: u64,

    /// Largest alphabet accepted by `oracle`.
    #[arg(long, global = true, default_value_t = 2)]
    oracle_alphabet_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// F, W, J and L for a weight -1 multi-index.
    Count { k: String },
    /// Coefficients of the weighted or ordinary generating series.
    Series { mode: SeriesMode },
    /// Nonzero shift coefficients C_{k,l} with |l| = r.
    Lower { k: String, r: u32 },
    /// The transition polynomial C_{k,b}(u).
    Transition { k: String, b: String },
    /// Tensor expansion of the coproduct of x^k.
    Coproduct {
        k: String,
        #[arg(value_enum, default_value_t = FormArg::RawDbar)]
        form: FormArg,
    },
    /// Cross-check every formula against brute-force enumeration.
    Oracle {
        #[arg(long, default_value_t = 5)]
        max_n: u64,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesMode {
    Weighted,
    Ordinary,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecompositionArg {
    Multiset,
    Ordered,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ForestSigmaArg {
    MultTimesSigma,
    SigmaOnly,
    MultOnly,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    #[value(name = "raw-dbar")]
    RawDbar,
    #[value(name = "refined-C", alias = "refined-c")]
    RefinedC,
    #[value(name = "refined-D", alias = "refined-d")]
    RefinedD,
}

enum Failure {
    Mismatch(String),
    Parse(String),
    Domain(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Cap(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Alphabet(_)
            | Error::UnknownDecoration(_)
            | Error::IndexBelowMinusOne(_) => Failure::Parse(e.to_string()),
            Error::NegativeComponent
            | Error::NotLowering
            | Error::WeightNotMinusOne(_)
            | Error::FertilitySum { .. } => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.code();
            match failure {
                Failure::Mismatch(report) => print!("{report}"),
                Failure::Parse(msg) | Failure::Domain(msg) | Failure::Cap(msg) => {
                    eprintln!("error: {msg}")
                }
            }
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Count { k } => {
            let alphabet = resolve_alphabet(cli, &[k])?;
            cmd_count(cli, &alphabet, k)
        }
        Command::Series { mode } => {
            let alphabet = resolve_alphabet(cli, &[])?;
            cmd_series(cli, &alphabet, *mode)
        }
        Command::Lower { k, r } => {
            let alphabet = resolve_alphabet(cli, &[k])?;
            cmd_lower(cli, &alphabet, k, *r)
        }
        Command::Transition { k, b } => {
            let alphabet = resolve_alphabet(cli, &[k, b])?;
            cmd_transition(cli, &alphabet, k, b)
        }
        Command::Coproduct { k, form } => {
            let alphabet = resolve_alphabet(cli, &[k])?;
            cmd_coproduct(cli, &alphabet, k, *form)
        }
        Command::Oracle {
            max_n,
            threads,
            mutate,
        } => {
            let alphabet = resolve_alphabet(cli, &[])?;
            cmd_oracle(cli, alphabet, *max_n, *threads, mutate.as_deref())
        }
    }
}

/// The explicit alphabet, or the decorations named in `specs`, or `a`.
fn resolve_alphabet(cli: &Cli, specs: &[&String]) -> std::result::Result<Alphabet, Failure> {
    let names: Vec<String> = match &cli.alphabet {
        Some(names) => names.iter().map(|s| s.trim().to_string()).collect(),
        None => {
            let mut names: Vec<String> = specs
                .iter()
                .filter(|s| s.trim() != "0")
                .flat_map(|s| s.split(','))
                .filter_map(|entry| entry.split_once(':').map(|(d, _)| d.trim().to_string()))
                .collect();
            if names.is_empty() {
                names.push("a".to_string());
            }
            names
        }
    };
    let alphabet = Alphabet::new(&names)?;
    if alphabet.len() > MAX_ALPHABET {
        return Err(Failure::Cap(format!(
            "alphabet has {} decorations, at most {MAX_ALPHABET} are supported",
            alphabet.len()
        )));
    }
    Ok(alphabet)
}

fn number(text: String) -> Value {
    Value::Number(text.parse().expect("integer text is a JSON number"))
}

fn rational_json(r: &Rational) -> Value {
    json!({ "num": number(r.numer().to_string()), "den": number(r.denom().to_string()) })
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn cmd_count(cli: &Cli, alphabet: &Alphabet, spec: &str) -> Outcome {
    let k = alphabet.parse_multiindex(spec)?;
    let counts = weighted_counts(&k)?;
    let f = ordinary_count(&k)?;
    let key = alphabet.format_multiindex(&k);
    if cli.format == Format::Json {
        return Ok(render_json(&json!({
            "k": key,
            "F": number(f.to_string()),
            "W": rational_json(&counts.weighted),
            "J": number(counts.mass.to_string()),
            "L": number(counts.labelled.to_string()),
            "degree": k.degree(),
            "weight": k.weight(),
        })));
    }
    let mut out = String::new();
    writeln!(out, "k = {key}").unwrap();
    writeln!(out, "degree = {}", k.degree()).unwrap();
    writeln!(out, "weight = {}", k.weight()).unwrap();
    writeln!(out, "F = {f}").unwrap();
    writeln!(out, "W = {}", format_rational(&counts.weighted)).unwrap();
    writeln!(out, "J = {}", counts.mass).unwrap();
    writeln!(out, "L = {}", counts.labelled).unwrap();
    Ok(out)
}

/// Terms ordered by degree, then by multi-index.
fn sorted_terms(s: &TruncatedSeries) -> Vec<(&MultiIndex, &Rational)> {
    let mut terms: Vec<_> = s.terms().collect();
    terms.sort_by(|a, b| (a.0.degree(), a.0).cmp(&(b.0.degree(), b.0)));
    terms
}

fn cmd_series(cli: &Cli, alphabet: &Alphabet, mode: SeriesMode) -> Outcome {
    let n = cli.max_degree;
    if n == 0 {
        return Err(Failure::Domain("--max-degree must be at least 1".into()));
    }
    if n > cli.degree_cap {
        return Err(Failure::Cap(format!(
            "--max-degree {n} exceeds the cap {} (raise it with --degree-cap)",
            cli.degree_cap
        )));
    }
    let (series, name) = match mode {
        SeriesMode::Weighted => (weighted_series(alphabet, n), "weighted"),
        SeriesMode::Ordinary => (ordinary_series(alphabet, n), "ordinary"),
    };
    let terms = sorted_terms(&series);
    if cli.format == Format::Json {
        let items: Vec<Value> = terms
            .iter()
            .map(|(k, c)| json!({ "k": alphabet.format_multiindex(k), "coefficient": rational_json(c) }))
            .collect();
        return Ok(render_json(&json!({
            "mode": name,
            "alphabet": alphabet.names(),
            "max_degree": n,
            "terms": items,
        })));
    }
    let mut out = String::new();
    for (k, c) in terms {
        writeln!(
            out,
            "{} → {}",
            alphabet.format_multiindex(k),
            format_rational(c)
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_lower(cli: &Cli, alphabet: &Alphabet, spec: &str, r: u32) -> Outcome {
    let k = alphabet.parse_multiindex(spec)?;
    let rows: Vec<(MultiIndex, String, MultiIndex, String)> = c_coefficients(&k, r)
        .into_iter()
        .map(|(l, c)| {
            let target = k
                .shift_target(&l)
                .expect("nonzero C has a nonnegative target");
            let d = d_coefficient(&k, &l).to_string();
            (l, c.to_string(), target, d)
        })
        .collect();
    if cli.format == Format::Json {
        let items: Vec<Value> = rows
            .iter()
            .map(|(l, c, t, d)| {
                json!({
                    "l": alphabet.format_multiindex(l),
                    "C": number(c.clone()),
                    "D": number(d.clone()),
                    "target": alphabet.format_multiindex(t),
                })
            })
            .collect();
        return Ok(render_json(&json!({
            "k": alphabet.format_multiindex(&k),
            "r": r,
            "terms": items,
        })));
    }
    let mut out = String::new();
    for (l, c, t, _) in &rows {
        writeln!(
            out,
            "ℓ = {}, C = {c}, target {}",
            alphabet.format_multiindex(l),
            alphabet.format_multiindex(t)
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_transition(cli: &Cli, alphabet: &Alphabet, k_spec: &str, b_spec: &str) -> Outcome {
    let k = alphabet.parse_multiindex(k_spec)?;
    let b = alphabet.parse_multiindex(b_spec)?;
    let poly: UPolynomial = transition_gf(&k, &b);
    if cli.format == Format::Json {
        let lowering = find_shift(&k, &b)
            .lowering()
            .map(|l| Value::String(alphabet.format_multiindex(l)))
            .unwrap_or(Value::Null);
        let coefficients: Vec<Value> = poly
            .coefficients()
            .iter()
            .map(|(deg, c)| json!({ "degree": deg, "coefficient": rational_json(c) }))
            .collect();
        return Ok(render_json(&json!({
            "k": alphabet.format_multiindex(&k),
            "b": alphabet.format_multiindex(&b),
            "lowering": lowering,
            "polynomial": poly.to_string(),
            "coefficients": coefficients,
        })));
    }
    Ok(format!("{poly}\n"))
}

fn cmd_coproduct(cli: &Cli, alphabet: &Alphabet, spec: &str, form: FormArg) -> Outcome {
    let k = alphabet.parse_multiindex(spec)?;
    let form = match form {
        FormArg::RawDbar => CoproductForm::RawDbar,
        FormArg::RefinedC => CoproductForm::RefinedC,
        FormArg::RefinedD => CoproductForm::RefinedD,
    };
    let options = CoproductOptions {
        forest_sigma: match cli.forest_sigma {
            ForestSigmaArg::MultTimesSigma => ForestSigma::MultTimesSigma,
            ForestSigmaArg::SigmaOnly => ForestSigma::SigmaOnly,
            ForestSigmaArg::MultOnly => ForestSigma::MultOnly,
        },
        decomposition: match cli.decomposition {
            DecompositionArg::Multiset => Decomposition::Multiset,
            DecompositionArg::Ordered => Decomposition::Ordered,
        },
    };
    let expansion = coproduct(&k, form, options)?;
    if cli.format == Format::Json {
        let items: Vec<Value> = expansion
            .terms()
            .iter()
            .map(|((forest, right), c)| {
                json!({
                    "forest": forest.format(alphabet),
                    "right": alphabet.format_multiindex(right),
                    "coefficient": rational_json(c),
                })
            })
            .collect();
        return Ok(render_json(&json!({
            "k": alphabet.format_multiindex(&k),
            "terms": items,
        })));
    }
    Ok(expansion.display(alphabet).to_string())
}

fn oracle_json(report: &OracleReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "cases": c.cases, "passed": c.passed() }))
        .collect();
    let mismatch = match report.first_mismatch() {
        None => Value::Null,
        Some((name, m)) => json!({
            "check": name,
            "quantity": m.quantity,
            "key": m.key,
            "expected": m.expected,
            "got": m.got,
        }),
    };
    json!({
        "alphabet": report.alphabet,
        "max_n": report.max_n,
        "passed": report.passed(),
        "checks": checks,
        "first_mismatch": mismatch,
    })
}

fn cmd_oracle(
    cli: &Cli,
    alphabet: Alphabet,
    max_n: u64,
    threads: Option<usize>,
    mutate: Option<&str>,
) -> Outcome {
    if max_n == 0 {
        return Err(Failure::Domain("--max-n must be at least 1".into()));
    }
    if max_n > cli.oracle_cap {
        return Err(Failure::Cap(format!(
            "--max-n {max_n} exceeds the cap {} (raise it with --oracle-cap)",
            cli.oracle_cap
        )));
    }
    if alphabet.len() > cli.oracle_alphabet_cap {
        return Err(Failure::Cap(format!(
            "oracle alphabet has {} decorations, the cap is {} (raise it with --oracle-alphabet-cap)",
            alphabet.len(),
            cli.oracle_alphabet_cap
        )));
    }
    let mutation = match mutate {
        None => None,
        Some(name) => Some(
            Mutation::from_name(name)
                .ok_or_else(|| Failure::Parse(format!("unknown mutation `{name}`")))?,
        ),
    };
    let config = OracleConfig {
        alphabet,
        max_n,
        mutation,
    };
    let report = match threads {
        Some(t) => run_oracle_with_threads(&config, t),
        None => run_oracle(&config),
    };
    let text = match cli.format {
        Format::Json => render_json(&oracle_json(&report)),
        Format::Text => report.to_string(),
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Mismatch(text))
    }
}
