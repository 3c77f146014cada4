use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irs_throughput::config::{ConfigError, Experiment, ExperimentConfig, Origin};
use irs_throughput::experiments::{run_experiment, EXIT_FAILURE, EXIT_USAGE};

/// Spatial throughput of a multi-IRS aided single-cell network.
#[derive(Parser)]
#[command(author, version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic-vs-simulation agreement suite; exit 3 on a tolerance miss.
    Validate(Flags),
    /// Maximum throughput vs M for the IRS-aided and relay-aided systems.
    Fig2a(Flags),
    /// Analytically optimal IRS deployment range vs M.
    Fig2b(Flags),
    /// Rate and Jain index vs M for a fixed total element budget.
    Fig3(Flags),
    /// One-parameter sweep of all three systems.
    Sweep(Flags),
    /// Rates, gain ratio and coverage range of one link.
    Single(Flags),
}

#[derive(Args)]
struct Flags {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for CSV output.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Print the merged configuration and exit.
    #[arg(long)]
    print_config: bool,
    /// Extra `key=value` assignment, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    topologies: Option<String>,
    #[arg(long)]
    fading: Option<String>,
    #[arg(long)]
    search_topologies: Option<String>,
    #[arg(long)]
    search_fading: Option<String>,
    #[arg(long)]
    sampler: Option<String>,
    #[arg(long)]
    grid_step: Option<String>,

    #[arg(long)]
    alpha: Option<String>,
    /// Elements per IRS.
    #[arg(long, visible_alias = "N")]
    n_elements: Option<String>,
    /// Number of IRSs.
    #[arg(long, visible_alias = "M")]
    m_irs: Option<String>,
    /// Number of UEs.
    #[arg(long, visible_alias = "K")]
    k_ues: Option<String>,
    #[arg(long)]
    r_in: Option<String>,
    #[arg(long)]
    r_out: Option<String>,
    #[arg(long)]
    m_relays: Option<String>,
    #[arg(long)]
    relay_r_in: Option<String>,
    #[arg(long)]
    relay_r_out: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    cell_radius: Option<String>,
    #[arg(long)]
    tx_power_dbm: Option<String>,
    #[arg(long)]
    noise_power_dbm: Option<String>,
    #[arg(long)]
    carrier_freq: Option<String>,

    /// IRS counts for validate, fig2a and fig2b (comma separated).
    #[arg(long)]
    m_values: Option<String>,
    /// IRS counts for fig3 (comma separated divisors of q_total).
    #[arg(long)]
    fig3_m_values: Option<String>,
    #[arg(long)]
    q_total: Option<String>,
    #[arg(long)]
    ring_radius: Option<String>,
    /// Path-loss exponents for fig3 (comma separated).
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    sweep_key: Option<String>,
    #[arg(long)]
    sweep_values: Option<String>,

    /// BS-UE distance of the single link, m.
    #[arg(long = "l")]
    link_l: Option<String>,
    /// IRS-UE distance of the single link, m.
    #[arg(long = "d")]
    link_d: Option<String>,
    /// BS-IRS distance of the single link, m (defaults to l).
    #[arg(long = "r")]
    link_r: Option<String>,
}

impl Flags {
    fn assignments(&self) -> Vec<(String, String)> {
        let named = [
            ("seed", &self.seed),
            ("topologies", &self.topologies),
            ("fading", &self.fading),
            ("search_topologies", &self.search_topologies),
            ("search_fading", &self.search_fading),
            ("sampler", &self.sampler),
            ("grid_step", &self.grid_step),
            ("alpha", &self.alpha),
            ("n_elements", &self.n_elements),
            ("m_irs", &self.m_irs),
            ("k_ues", &self.k_ues),
            ("r_in", &self.r_in),
            ("r_out", &self.r_out),
            ("m_relays", &self.m_relays),
            ("relay_r_in", &self.relay_r_in),
            ("relay_r_out", &self.relay_r_out),
            ("kappa", &self.kappa),
            ("eta", &self.eta),
            ("cell_radius", &self.cell_radius),
            ("tx_power_dbm", &self.tx_power_dbm),
            ("noise_power_dbm", &self.noise_power_dbm),
            ("carrier_freq", &self.carrier_freq),
            ("m_values", &self.m_values),
            ("fig3_m_values", &self.fig3_m_values),
            ("q_total", &self.q_total),
            ("ring_radius", &self.ring_radius),
            ("alphas", &self.alphas),
            ("sweep_key", &self.sweep_key),
            ("sweep_values", &self.sweep_values),
            ("link_l", &self.link_l),
            ("link_d", &self.link_d),
            ("link_r", &self.link_r),
        ];
        let mut out: Vec<(String, String)> = self
            .set
            .iter()
            .map(|kv| match kv.split_once('=') {
                Some((k, v)) => (k.trim().to_string(), v.to_string()),
                None => (kv.clone(), String::new()),
            })
            .collect();
        out.extend(
            named
                .into_iter()
                .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))),
        );
        out
    }

    fn load(&self, experiment: Experiment) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        for (k, v) in self.assignments() {
            cfg.set(&k, &v, &Origin::Flag)?;
        }
        cfg.experiment = experiment;
        cfg.check()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, flags) = match &cli.command {
        Command::Validate(f) => (Experiment::Validate, f),
        Command::Fig2a(f) => (Experiment::Fig2a, f),
        Command::Fig2b(f) => (Experiment::Fig2b, f),
        Command::Fig3(f) => (Experiment::Fig3, f),
        Command::Sweep(f) => (Experiment::Sweep, f),
        Command::Single(f) => (Experiment::Single, f),
    };
    let cfg = match flags.load(experiment) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if flags.print_config {
        print!("{}", cfg.to_text());
        return ExitCode::SUCCESS;
    }
    let outcome = match run_experiment(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    };
    for line in &outcome.report {
        println!("{line}");
    }
    match outcome.write(&flags.out) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: cannot write to {}: {e}", flags.out.display());
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    }
    ExitCode::from(outcome.exit_code() as u8)
}
