use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use fuzzymat::count::{
    chain_count_rooted, chain_count_rooted_ie, count_table_with, sequence_with, to_b_file, Count, Method,
    NaiveSummation, SizeVector,
};
use fuzzymat::cut::{classify_corpus, equivalent_direct, signature};
use fuzzymat::enumerate::{collect_chains, count_chains, group_by_size_vector, hasse_export, EnumConfig};
use fuzzymat::{Error, FuzzyMatrix, Root};
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Overrides the default enumeration ceiling (projected chain count).
const CEILING_ENV: &str = "FUZZYMAT_ENUM_CEILING";

const EXIT_INEQUIVALENT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_MALFORMED: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "fuzzymat", version, about = "Count and classify fuzzy matrices up to equivalence")]
struct Cli {
    /// Run partitioned summation and enumeration on this many threads.
    #[arg(long, global = true, value_name = "D", value_parser = clap::value_parser!(u32).range(1..))]
    parallel: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print f_n, or f_{n,k} with --k; --root restricts to O- or J-rooted classes.
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        root: Option<RootArg>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Per-k and total counts for n = 0..=max_n.
    Table {
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Also emit the O- and J-rooted tables.
        #[arg(long)]
        rooted: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// f_0 … f_max_n.
    Sequence {
        #[arg(long)]
        max_n: u32,
        /// One "n f_n" pair per line.
        #[arg(long)]
        b_file: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Enumerate strict chains of k+1 supports over m cells.
    Enumerate {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        root: Option<RootArg>,
        /// Print every chain.
        #[arg(long)]
        list: bool,
        /// Label components as A<size>^{cells} instead of bitstrings.
        #[arg(long, requires = "list")]
        labels: bool,
        /// Print counts per size vector.
        #[arg(long)]
        group_by_sizes: bool,
    },
    /// Partition a corpus of fuzzy matrices into equivalence classes.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
        matrix_format: MatrixFormat,
    },
    /// Exit 0 if the two matrices are equivalent, 1 otherwise.
    Equivalent {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
        matrix_format: MatrixFormat,
    },
    /// Print the canonical cut-chain signature of a matrix as JSON.
    Signature {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
        matrix_format: MatrixFormat,
    },
    /// Export the covering graph of the support lattice on m cells.
    Lattice {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = LatticeFormat::Dot)]
        format: LatticeFormat,
    },
    /// Time the naive and inclusion-exclusion evaluations and check they agree.
    Bench {
        #[arg(long)]
        n: u32,
        /// Skip the naive walk above this many cells and spot-check sampled
        /// size vectors instead.
        #[arg(long, default_value_t = 25)]
        max_naive_cells: u32,
        /// Size vectors sampled per k when the naive walk is skipped.
        #[arg(long, default_value_t = 1000)]
        samples: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RootArg {
    #[value(name = "O", alias = "o")]
    O,
    #[value(name = "J", alias = "j")]
    J,
}

impl From<RootArg> for Root {
    fn from(r: RootArg) -> Root {
        match r {
            RootArg::O => Root::O,
            RootArg::J => Root::J,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    /// Naive summation up to 16 cells, inclusion-exclusion above.
    Auto,
    Naive,
    Ie,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LatticeFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatrixFormat {
    /// `.json` files are JSON, everything else the whitespace grid.
    Auto,
    Text,
    Json,
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } | Error::TooManyCells { .. } => EXIT_INFEASIBLE,
            Error::NegativeArgument(_) => EXIT_USAGE,
            _ => EXIT_MALFORMED,
        };
        Failure::new(code, e.to_string())
    }
}

struct Context {
    parallel: bool,
    enum_config: EnumConfig,
}

impl Context {
    fn method(&self, arg: MethodArg, cells: usize) -> Method {
        let naive = Method::Naive {
            parallel: self.parallel,
        };
        match arg {
            MethodArg::Naive => naive,
            MethodArg::Ie => Method::InclusionExclusion,
            MethodArg::Auto if cells <= 16 => naive,
            MethodArg::Auto => Method::InclusionExclusion,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut enum_config = EnumConfig::default();
    if let Ok(raw) = std::env::var(CEILING_ENV) {
        enum_config.ceiling = raw
            .trim()
            .parse()
            .map_err(|_| Failure::new(EXIT_USAGE, format!("{CEILING_ENV}={raw:?} is not a nonnegative integer")))?;
    }
    let ctx = Context {
        parallel: cli.parallel.is_some(),
        enum_config,
    };
    let threads = cli.parallel.unwrap_or(1) as usize;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    pool.install(|| dispatch(&ctx, cli.command))
}

fn dispatch(ctx: &Context, command: Command) -> Result<u8, Failure> {
    match command {
        Command::Count { n, k, root, method } => {
            let m = (n as usize).pow(2);
            let root = root.map(Root::from);
            let value = match (k, ctx.method(method, m)) {
                (Some(k), Method::InclusionExclusion) => chain_count_rooted_ie(m, k, root),
                (Some(k), Method::Naive { .. }) if !ctx.parallel => chain_count_rooted(m, k, root),
                (Some(k), method) => match usize::try_from(k).ok().filter(|&k| k <= m) {
                    Some(k) => method.row(m, root).swap_remove(k),
                    None => Count::from(0u8),
                },
                (None, method) => method.row(m, root).into_iter().sum(),
            };
            println!("{value}");
        }
        Command::Table {
            max_n,
            format,
            rooted,
            method,
        } => {
            let max_n = max_n as usize;
            let table = count_table_with(max_n, ctx.method(method, max_n * max_n), rooted);
            let out = match format {
                TableFormat::Text => table.to_text(),
                TableFormat::Csv => table.to_csv(),
                TableFormat::Json => table.to_json() + "\n",
            };
            print!("{out}");
        }
        Command::Sequence { max_n, b_file, method } => {
            let max_n = max_n as usize;
            let seq = sequence_with(max_n, ctx.method(method, max_n * max_n));
            if b_file {
                print!("{}", to_b_file(&seq));
            } else {
                let terms: Vec<String> = seq.iter().map(|(_, v)| v.to_string()).collect();
                println!("{}", terms.join(", "));
            }
        }
        Command::Enumerate {
            m,
            k,
            root,
            list,
            labels,
            group_by_sizes,
        } => {
            let m = m as usize;
            let root = root.map(Root::from);
            let cfg = &ctx.enum_config;
            if list {
                for chain in collect_chains(m, k, root, cfg, ctx.parallel)? {
                    println!("{}", chain.format(labels));
                }
            }
            if group_by_sizes {
                for (v, n) in group_by_size_vector(m, k, root, cfg)? {
                    let sizes: Vec<String> = v.sizes().iter().map(usize::to_string).collect();
                    println!("({}) {n}", sizes.join(","));
                }
            }
            println!("count {}", count_chains(m, k, root, cfg, ctx.parallel)?);
        }
        Command::Classify {
            input,
            format,
            matrix_format,
        } => {
            let corpus = read_corpus(&input, matrix_format)?;
            let classes = classify_corpus(&corpus)?;
            match format {
                ReportFormat::Json => println!("{}", classes.to_json()),
                ReportFormat::Text => {
                    println!("matrices {}", corpus.len());
                    println!("classes {}", classes.class_count());
                    for class in &classes.classes {
                        let cuts: Vec<String> = class.signature.cuts().iter().map(|c| c.to_bitstring()).collect();
                        println!("k={} [{}] members {}", class.signature.k(), cuts.join(" < "), class.members.len());
                    }
                }
            }
        }
        Command::Equivalent {
            file_a,
            file_b,
            matrix_format,
        } => {
            let a = read_matrix(&file_a, matrix_format)?;
            let b = read_matrix(&file_b, matrix_format)?;
            if equivalent_direct(&a, &b)? {
                println!("equivalent");
            } else {
                println!("inequivalent");
                return Ok(EXIT_INEQUIVALENT);
            }
        }
        Command::Signature { input, matrix_format } => {
            let f = read_matrix(&input, matrix_format)?;
            println!("{}", signature(&f).to_json_value());
        }
        Command::Lattice { m, format } => {
            let h = hasse_export(m as usize, &ctx.enum_config)?;
            match format {
                LatticeFormat::Dot => print!("{}", h.to_dot()),
                LatticeFormat::Json => println!("{}", h.to_json()),
            }
        }
        Command::Bench {
            n,
            max_naive_cells,
            samples,
        } => return bench(ctx, n as usize, max_naive_cells as usize, samples as usize),
    }
    Ok(0)
}

fn bench(ctx: &Context, n: usize, max_naive_cells: usize, samples: usize) -> Result<u8, Failure> {
    let m = n * n;
    let (ie_row, ie_time) = timed(|| Method::InclusionExclusion.row(m, None));
    let ie_total: Count = ie_row.iter().sum();
    println!("n {n} cells {m}");
    println!("ie     f_n = {ie_total}  ({})", fmt_duration(ie_time));

    if m > max_naive_cells {
        println!("naive  skipped above {max_naive_cells} cells; sampling size vectors instead");
        let mut rng = StdRng::seed_from_u64(m as u64);
        let mut checked = 0usize;
        for k in 0..=m {
            for _ in 0..samples {
                let v = sample_size_vector(&mut rng, m, k);
                if v.term() != v.term_top_down() {
                    return Err(Failure::new(EXIT_MISMATCH, format!("term mismatch at {:?}", v.sizes())));
                }
                checked += 1;
            }
        }
        println!("sampled {checked} size vectors: upward and downward products agree");
        return Ok(0);
    }

    let summation = NaiveSummation::row(m).parallel(ctx.parallel);
    let (naive, naive_time) = timed(|| summation.run());
    println!(
        "naive  f_n = {}  ({}, {} size vectors)",
        naive.total(),
        fmt_duration(naive_time),
        naive.terms
    );
    let mismatches: Vec<usize> = (0..=m).filter(|&k| naive.per_k[k] != ie_row[k]).collect();
    if !mismatches.is_empty() {
        return Err(Failure::new(
            EXIT_MISMATCH,
            format!("naive and inclusion-exclusion counts disagree at k = {mismatches:?}"),
        ));
    }
    println!("agree on all {} per-k counts", m + 1);
    Ok(0)
}

/// Uniform `k + 1`-subset of `{0, …, m}`, sorted.
fn sample_size_vector(rng: &mut StdRng, m: usize, k: usize) -> SizeVector {
    let mut sizes = rand::seq::index::sample(rng, m + 1, k + 1).into_vec();
    sizes.sort_unstable();
    SizeVector::new(m, sizes).expect("sampled sizes are distinct and in range")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn fmt_duration(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn is_json(path: &Path, format: MatrixFormat) -> bool {
    match format {
        MatrixFormat::Json => true,
        MatrixFormat::Text => false,
        MatrixFormat::Auto => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path, format: MatrixFormat) -> Result<FuzzyMatrix, Failure> {
    let text = read_file(path)?;
    let parsed = if is_json(path, format) {
        FuzzyMatrix::from_json(&text)
    } else {
        FuzzyMatrix::from_text(&text)
    };
    parsed.map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))
}

/// A JSON array of matrix objects, or grid blocks separated by blank lines.
fn read_corpus(path: &Path, format: MatrixFormat) -> Result<Vec<FuzzyMatrix>, Failure> {
    let text = read_file(path)?;
    let malformed = |e: Error| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display()));
    if is_json(path, format) {
        return serde_json::from_str(&text).map_err(|e| malformed(e.into()));
    }
    let mut corpus = Vec::new();
    let mut block = String::new();
    for line in text.lines().chain([""]) {
        if line.trim().is_empty() {
            if !block.is_empty() {
                corpus.push(FuzzyMatrix::from_text(&block).map_err(malformed)?);
                block.clear();
            }
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    Ok(corpus)
}
