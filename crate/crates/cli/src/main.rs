use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trustyuri::extsort::SortConfig;
use trustyuri::{ModuleId, RdfFormat, Verdict};
use trustyuri_cli::batch;
use trustyuri_cli::commands::{self, ItemResult, Options};
use trustyuri_cli::{fuzz, synth};

#[derive(Parser)]
#[command(name = "trustyuri", version, about = "Create and check trusty URIs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit one JSON record per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Input RDF format; by default taken from the file extension.
    #[arg(long, global = true, value_enum)]
    input_format: Option<Format>,
    /// Records held in memory by the external sort.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_records: usize,
    /// Runs merged at once by the external sort.
    #[arg(long, global = true, default_value_t = 16)]
    fan_in: usize,
    /// Directory for temporary sort runs; defaults to $TRUSTYURI_TMPDIR or
    /// the system temp directory.
    #[arg(long, global = true)]
    temp_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Nq,
    Trig,
}

#[derive(Clone, Copy, ValueEnum)]
enum RModule {
    #[value(name = "RA", alias = "ra")]
    Ra,
    #[value(name = "RB", alias = "rb")]
    Rb,
}

impl From<RModule> for ModuleId {
    fn from(m: RModule) -> Self {
        match m {
            RModule::Ra => ModuleId::RA,
            RModule::Rb => ModuleId::RB,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify trusty files against the artifact code in their names.
    #[command(alias = "CheckFile")]
    CheckFile {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Rename files to their FA trusty names.
    #[command(alias = "ProcessFile")]
    ProcessFile {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Make an RDF file trusty in memory.
    #[command(alias = "TransformRdf")]
    TransformRdf {
        path: PathBuf,
        base_uri: String,
        #[arg(long, value_enum, default_value = "RA")]
        module: RModule,
    },
    /// Make an RDF file trusty with an external sort.
    #[command(alias = "TransformLargeRdf")]
    TransformLargeRdf {
        path: PathBuf,
        base_uri: String,
        #[arg(long, value_enum, default_value = "RA")]
        module: RModule,
    },
    /// Verify a trusty RDF file with an external sort.
    #[command(alias = "CheckLargeRdf")]
    CheckLargeRdf { path: PathBuf },
    /// Verify a canonically sorted trusty RDF file in one pass.
    #[command(alias = "CheckSortedRdf")]
    CheckSortedRdf { path: PathBuf },
    /// Run the commands listed in a batch file.
    #[command(alias = "RunBatch")]
    RunBatch { path: PathBuf },
    /// Check single-byte mutants of the trusty files in a directory.
    FuzzCheck {
        dir: PathBuf,
        #[arg(short = 'n', long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert a trusty URI to an ni URI.
    Ni {
        uri: String,
        #[arg(long)]
        authority: Option<String>,
        /// Append `?module=XX`.
        #[arg(long)]
        module_param: bool,
    },
    /// Write synthetic test data.
    #[command(subcommand)]
    Generate(Generate),
}

#[derive(Subcommand)]
enum Generate {
    /// Nanopublication-like documents as N-Quads and TriG pairs.
    Nanopubs {
        dir: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write trusty (RA) files with TriG twins instead.
        #[arg(long)]
        trusty: bool,
    },
    /// A large N-Quads file.
    Large {
        path: PathBuf,
        #[arg(long)]
        quads: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "http://example.org/big")]
        base_uri: String,
    },
}

struct Printer {
    json: bool,
}

impl Printer {
    fn item(&self, r: &ItemResult) {
        if self.json {
            self.record(r);
        } else {
            println!("{}", r.to_line());
        }
    }

    fn record(&self, value: &impl Serialize) {
        println!("{}", serde_json::to_string(value).expect("reports serialize"));
    }

    fn items(&self, results: &[ItemResult]) -> Verdict {
        for r in results {
            self.item(r);
        }
        commands::overall(results)
    }

    fn failure(&self, message: &str) -> Verdict {
        if self.json {
            self.record(&serde_json::json!({ "verdict": Verdict::Error, "message": message }));
        } else {
            eprintln!("error: {message}");
        }
        Verdict::Error
    }
}

fn run(cli: Cli) -> Verdict {
    let g = &cli.global;
    let mut sort = SortConfig {
        max_in_memory_records: g.max_records,
        fan_in: g.fan_in,
        ..SortConfig::default()
    };
    if let Some(dir) = &g.temp_dir {
        sort.temp_dir = dir.clone();
    }
    let opts = Options {
        format: g.input_format.map(|f| match f {
            Format::Nq => RdfFormat::NQuads,
            Format::Trig => RdfFormat::TriG,
        }),
        sort,
    };
    let out = Printer { json: g.json };
    match cli.command {
        Command::CheckFile { paths } => {
            out.items(&paths.iter().map(|p| commands::check_file(p, &opts)).collect::<Vec<_>>())
        }
        Command::ProcessFile { paths } => {
            out.items(&paths.iter().map(|p| commands::process_file(p)).collect::<Vec<_>>())
        }
        Command::TransformRdf { path, base_uri, module } => {
            out.items(&[commands::transform_rdf(&path, &base_uri, module.into(), false, &opts)])
        }
        Command::TransformLargeRdf { path, base_uri, module } => {
            out.items(&[commands::transform_rdf(&path, &base_uri, module.into(), true, &opts)])
        }
        Command::CheckLargeRdf { path } => out.items(&[commands::check_large_rdf(&path, &opts)]),
        Command::CheckSortedRdf { path } => out.items(&[commands::check_sorted_rdf(&path, &opts)]),
        Command::RunBatch { path } => match batch::run_batch(&path, &opts) {
            Ok(report) => {
                for line in &report.lines {
                    for r in &line.results {
                        out.item(r);
                    }
                }
                let s = report.summary;
                if out.json {
                    out.record(&serde_json::json!({ "summary": s }));
                } else {
                    println!("summary: {} valid, {} invalid, {} error", s.valid, s.invalid, s.error);
                }
                s.verdict()
            }
            Err(e) => out.failure(&format!("{}: {e}", path.display())),
        },
        Command::FuzzCheck { dir, count, seed } => match fuzz::fuzz_check(&dir, count, seed, &opts) {
            Ok(report) => {
                if out.json {
                    out.record(&report);
                } else {
                    print!("{}", report.table());
                }
                Verdict::Valid
            }
            Err(e) => out.failure(&format!("{}: {e}", dir.display())),
        },
        Command::Ni {
            uri,
            authority,
            module_param,
        } => match commands::ni_convert(&uri, authority.as_deref(), module_param) {
            Ok(ni) => {
                if out.json {
                    out.record(&serde_json::json!({ "uri": uri, "ni": ni }));
                } else {
                    println!("{ni}");
                }
                Verdict::Valid
            }
            Err(e) => out.failure(&e),
        },
        Command::Generate(Generate::Nanopubs {
            dir,
            count,
            seed,
            trusty,
        }) => {
            let written = if trusty {
                synth::write_trusty_corpus(&dir, count, seed).map(|v| v.len())
            } else {
                synth::write_nanopubs(&dir, count, seed).map(|v| 2 * v.len())
            };
            match written {
                Ok(n) => {
                    println!("wrote {n} files to {}", dir.display());
                    Verdict::Valid
                }
                Err(e) => out.failure(&format!("{}: {e}", dir.display())),
            }
        }
        Command::Generate(Generate::Large {
            path,
            quads,
            seed,
            base_uri,
        }) => match synth::write_large_nquads(&path, quads, seed, &base_uri) {
            Ok(()) => {
                println!("wrote {quads} quads to {}", path.display());
                Verdict::Valid
            }
            Err(e) => out.failure(&format!("{}: {e}", path.display())),
        },
    }
}

fn main() -> ExitCode {
    let verdict = run(Cli::parse());
    ExitCode::from(verdict.exit_code() as u8)
}
