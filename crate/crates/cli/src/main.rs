use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ecorec_cli::commands::{self, Outcome};
use ecorec_cli::data;
use ecorec_cli::dialogue::Dialogue;
use ecorec_cli::server::{self, ServeConfig};
use ecorec_core::{FileStore, SessionHub, SessionId};

#[derive(Parser)]
#[command(name = "ecorec", version, about = "Plastic waste recommendations and task tracking")]
struct Cli {
    /// Print the JSON response envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Look up a country record (exact, case-sensitive name).
    Lookup {
        name: String,
        #[arg(long, env = "ECOREC_DATASET")]
        dataset: Option<PathBuf>,
    },
    /// Classify a mismanaged-waste percentage.
    Classify {
        #[arg(allow_hyphen_values = true)]
        pct: String,
    },
    /// Summary statistics of one dataset column.
    Stats {
        dataset: PathBuf,
        /// mismanaged_share_pct or waste_per_capita
        metric: String,
    },
    /// Chi-squared test of independence on a contingency CSV.
    Chisq { table: PathBuf },
    /// Count words (merged with their capitalized form) and keyword groups.
    Wordcount {
        text: PathBuf,
        words: Vec<String>,
        #[arg(long)]
        groups: Option<PathBuf>,
    },
    /// Interactive session on the terminal.
    Session {
        #[arg(long, env = "ECOREC_DATASET")]
        dataset: Option<PathBuf>,
        #[arg(long, env = "ECOREC_CATALOG")]
        catalog: Option<PathBuf>,
        #[arg(long, env = "ECOREC_STORE", default_value = "ecorec-sessions")]
        store: PathBuf,
        /// Continue a saved session.
        #[arg(long)]
        resume: Option<String>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "ECOREC_LISTEN", default_value = "127.0.0.1:8080")]
        listen: String,
        #[arg(long, env = "ECOREC_DATASET")]
        dataset: Option<PathBuf>,
        #[arg(long, env = "ECOREC_CATALOG")]
        catalog: Option<PathBuf>,
        #[arg(long, env = "ECOREC_STORE", default_value = "ecorec-sessions")]
        store: PathBuf,
    },
}

fn emit(outcome: Outcome, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(&outcome.envelope).expect("envelope serializes"));
    } else if outcome.is_ok() {
        println!("{}", outcome.text);
    } else {
        eprintln!("{}", outcome.text);
    }
    ExitCode::from(outcome.exit_code() as u8)
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("ecorec: {message}");
    ExitCode::from(1)
}

fn run_session(
    dataset: Option<PathBuf>,
    catalog: Option<PathBuf>,
    store: PathBuf,
    resume: Option<String>,
) -> Result<(), String> {
    let dataset = data::dataset(dataset.as_deref())?;
    let catalog = data::catalog(catalog.as_deref())?;
    let hub = SessionHub::new(FileStore::open(&store).map_err(|e| e.to_string())?);
    let resume = resume.map(|r| r.parse::<SessionId>().map_err(|e| format!("{r}: {e}"))).transpose()?;
    let stdin = io::stdin();
    let id = Dialogue { dataset: &dataset, catalog: &catalog, hub: &hub, input: stdin.lock(), output: io::stdout() }
        .run(resume)
        .map_err(|e| e.to_string())?;
    println!("Session id: {id} (resume with --resume {id})");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Lookup { name, dataset } => match data::dataset(dataset.as_deref()) {
            Ok(d) => emit(commands::lookup(&d, &name), cli.json),
            Err(e) => fail(e),
        },
        Command::Classify { pct } => emit(commands::classify_pct(&pct), cli.json),
        Command::Stats { dataset, metric } => emit(commands::stats(&dataset, &metric), cli.json),
        Command::Chisq { table } => emit(commands::chisq(&table), cli.json),
        Command::Wordcount { text, words, groups } => {
            emit(commands::wordcount(&text, &words, groups.as_deref()), cli.json)
        }
        Command::Session { dataset, catalog, store, resume } => match run_session(dataset, catalog, store, resume) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
        Command::Serve { listen, dataset, catalog, store } => {
            let config = ServeConfig { listen, dataset, catalog, store };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            match runtime.block_on(server::serve(config)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
    }
}
