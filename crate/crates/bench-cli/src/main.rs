//! Benchmark CLI.
//!
//! Subcommands: `compare` (four-arm timing comparison), `profile` (cached-arm
//! stage timings across batch sizes), `fedavg` (federated-averaging rounds),
//! `roundtrip` (per-arm correctness self-check).
//!
//! Exit codes: 0 success, 2 configuration error, 3 crypto-correctness failure
//! detected mid-run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nemesis_bench::{
    emit_results, mean_total, median_total, run_arm_comparison, run_fedavg, run_roundtrip,
    run_stage_profile, BenchConfig, BenchError, BenchResult, EmitFormat, PolicyChoice, ARM_BATCH,
    ARM_NAIVE, ARM_NEMESIS, ARM_RACHE,
};
use nemesis_core::fl::EncryptorKind;
use nemesis_core::params::SchemeParams;

#[derive(Parser)]
#[command(
    name = "nemesis-bench",
    about = "Timing and correctness harness for cached batch encryption"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Ring degree N (power of two).
    #[arg(long, default_value_t = 4096)]
    ring_degree: usize,

    /// Batch size in slots; repeat the flag for multiple sizes.
    #[arg(long = "batch-size")]
    batch_sizes: Vec<usize>,

    /// Number of values to encrypt per arm.
    #[arg(long, default_value_t = 582_026)]
    model_size: usize,

    /// Clients per federated round.
    #[arg(long, default_value_t = 20)]
    clients: usize,

    /// Federated communication rounds.
    #[arg(long, default_value_t = 10)]
    rounds: usize,

    /// Randomization noise width.
    #[arg(long, default_value_t = 3.2)]
    sigma_rand: f64,

    /// Timing repeats per arm.
    #[arg(long, default_value_t = 3)]
    repeats: usize,

    /// Base RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Output file for result rows.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Base-vector selection policy for the cached arm.
    #[arg(long, value_enum, default_value_t = PolicyArg::AllOnes)]
    policy: PolicyArg,

    /// Slot value used by the fixed policy.
    #[arg(long, default_value_t = 2.0)]
    fixed_value: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    AllOnes,
    Fixed,
    Freq,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArmArg {
    Nemesis,
    Batch,
    Naive,
    RachePlus,
}

#[derive(Subcommand)]
enum Command {
    /// Time all four encryption arms over one synthetic weight vector.
    Compare(CommonArgs),
    /// Stage timings of the cached arm across batch sizes.
    Profile(CommonArgs),
    /// Federated-averaging rounds with the selected encryptor.
    Fedavg {
        #[command(flatten)]
        common: CommonArgs,
        /// Client-side encryptor.
        #[arg(long, value_enum, default_value_t = ArmArg::Nemesis)]
        encryptor: ArmArg,
        /// Encrypt clients on separate threads.
        #[arg(long)]
        parallel_clients: bool,
    },
    /// Encode/encrypt/decrypt/decode self-check for every arm.
    Roundtrip(CommonArgs),
}

fn build_config(common: &CommonArgs, default_batches: &[usize]) -> Result<BenchConfig, BenchError> {
    let params = SchemeParams::with_ring_degree(common.ring_degree)
        .map_err(BenchError::Core)?
        .with_sigma_rand(common.sigma_rand)
        .map_err(BenchError::Core)?;
    let batch_sizes = if common.batch_sizes.is_empty() {
        default_batches.to_vec()
    } else {
        common.batch_sizes.clone()
    };
    let policy = match common.policy {
        PolicyArg::AllOnes => PolicyChoice::AllOnes,
        PolicyArg::Fixed => PolicyChoice::Fixed(common.fixed_value),
        PolicyArg::Freq => PolicyChoice::FrequencyTopK,
    };
    let config = BenchConfig {
        params,
        batch_sizes,
        model_size: common.model_size,
        repeats: common.repeats,
        seed: common.seed,
        sigma_rand: common.sigma_rand,
        policy,
        clients: common.clients,
        rounds: common.rounds,
        parallel_clients: false,
    };
    config.validate()?;
    Ok(config)
}

fn emit(common: &CommonArgs, results: &[BenchResult]) -> Result<(), BenchError> {
    if let Some(path) = &common.out {
        let format = match common.format {
            FormatArg::Csv => EmitFormat::Csv,
            FormatArg::Json => EmitFormat::Json,
        };
        emit_results(results, format, path)?;
        eprintln!("wrote {} rows to {}", results.len(), path.display());
    }
    Ok(())
}

fn print_compare_summary(results: &[BenchResult]) {
    println!("arm            median_s      mean_s");
    for arm in [ARM_NEMESIS, ARM_BATCH, ARM_RACHE, ARM_NAIVE] {
        if let (Some(med), Some(mean)) = (median_total(results, arm), mean_total(results, arm)) {
            println!("{arm:<14} {med:>9.3}  {mean:>9.3}");
        }
    }
    if let (Some(nem), Some(batch)) = (
        median_total(results, ARM_NEMESIS),
        median_total(results, ARM_BATCH),
    ) {
        if nem > 0.0 {
            println!("batch/nemesis median ratio: {:.2}x", batch / nem);
        }
    }
}

fn print_profile_summary(results: &[BenchResult]) {
    println!("batch_size  repeat  precompute_s  reconstruct_s  randomize_s   pre%    rec%   rand%");
    for r in results {
        let (p, rec, rand) = r.stage_percentages();
        println!(
            "{:>10}  {:>6}  {:>12.4}  {:>13.4}  {:>11.4}  {:>5.2}  {:>5.1}  {:>6.2}",
            r.batch_size, r.repeat, r.t_precompute_s, r.t_reconstruct_s, r.t_randomize_s, p, rec,
            rand
        );
    }
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Compare(common) => {
            let config = build_config(&common, &[2048])?;
            let results = run_arm_comparison(&config)?;
            print_compare_summary(&results);
            emit(&common, &results)?;
        }
        Command::Profile(common) => {
            let config = build_config(&common, &[128, 256, 512, 1024, 2048])?;
            let results = run_stage_profile(&config)?;
            print_profile_summary(&results);
            emit(&common, &results)?;
        }
        Command::Fedavg {
            common,
            encryptor,
            parallel_clients,
        } => {
            let mut config = build_config(&common, &[2048])?;
            config.parallel_clients = parallel_clients;
            let encryptor = match encryptor {
                ArmArg::Nemesis => EncryptorKind::Nemesis,
                ArmArg::Batch => EncryptorKind::Batch,
                ArmArg::Naive => EncryptorKind::Naive,
                ArmArg::RachePlus => EncryptorKind::RachePlus,
            };
            let results = run_fedavg(&config, encryptor)?;
            println!("round  encrypt_s  total_s");
            for r in &results {
                println!("{:>5}  {:>9.3}  {:>7.3}", r.repeat, r.t_reconstruct_s, r.t_total_s);
            }
            emit(&common, &results)?;
        }
        Command::Roundtrip(common) => {
            let config = build_config(&common, &[2048])?;
            let outcomes = run_roundtrip(&config)?;
            println!("arm            max_error      time_s");
            let rows: Vec<BenchResult> = outcomes
                .iter()
                .map(|(arm, err, row)| {
                    println!("{arm:<14} {err:>10.3e}  {:>9.3}", row.t_total_s);
                    row.clone()
                })
                .collect();
            emit(&common, &rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(BenchError::CryptoCheck(msg)) => {
            eprintln!("error: crypto correctness failure: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
