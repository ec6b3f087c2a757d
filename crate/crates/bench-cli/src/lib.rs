//! Benchmark harness: timed comparisons of the cached-batch encryptor
//! against per-value, packed-batch, and radix-cache encryption, stage
//! profiles across batch sizes, and a federated-averaging driver.
//!
//! Wall-clock comparisons are only made between arms of the same run, never
//! against absolute numbers; operation counters are deterministic and are
//! what correctness assertions use.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use nemesis_core::baselines::{
    batch_encrypt, naive_encrypt, rache_encrypt_scalar, rache_precompute, DEFAULT_FRAC_BITS,
    DEFAULT_INT_BITS, DEFAULT_RADIX, DEFAULT_ZERO_POOL,
};
use nemesis_core::cache::{precompute, randomize, reconstruct, SelectionPolicy};
use nemesis_core::ckks::{decrypt, keygen, Ciphertext, PublicKey, SecretKey};
use nemesis_core::encoding::{decode, SlotVector};
use nemesis_core::fl::{
    aggregate_round, synth_updates, synth_weights, EncryptorKind, FlContext, RoundConfig,
    WeightDistribution,
};
use nemesis_core::metrics::OpCounters;
use nemesis_core::params::SchemeParams;

#[derive(Debug)]
pub enum BenchError {
    Core(nemesis_core::Error),
    /// A mid-run decryption spot check failed; results would be meaningless.
    CryptoCheck(String),
    Config(String),
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Core(e) => write!(f, "{e}"),
            BenchError::CryptoCheck(msg) => write!(f, "crypto correctness failure: {msg}"),
            BenchError::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<nemesis_core::Error> for BenchError {
    fn from(e: nemesis_core::Error) -> Self {
        BenchError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;

/// Which base-vector policy the cached arm uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyChoice {
    AllOnes,
    Fixed(f64),
    FrequencyTopK,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub params: SchemeParams,
    pub batch_sizes: Vec<usize>,
    pub model_size: usize,
    pub repeats: usize,
    pub seed: u64,
    pub sigma_rand: f64,
    pub policy: PolicyChoice,
    pub clients: usize,
    pub rounds: usize,
    pub parallel_clients: bool,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_sizes.is_empty() {
            return Err(BenchError::Config("need at least one batch size".into()));
        }
        for &b in &self.batch_sizes {
            if b == 0 || b > self.params.slot_count() {
                return Err(BenchError::Config(format!(
                    "batch size {b} out of range 1..={}",
                    self.params.slot_count()
                )));
            }
        }
        if self.model_size == 0 {
            return Err(BenchError::Config("model size must be positive".into()));
        }
        if self.repeats == 0 {
            return Err(BenchError::Config("need at least one repeat".into()));
        }
        if !(self.sigma_rand > 0.0) {
            return Err(BenchError::Config(
                "randomization width must be positive".into(),
            ));
        }
        if self.clients == 0 || self.rounds == 0 {
            return Err(BenchError::Config(
                "clients and rounds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One timed run of one arm. Column order is the emission contract.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchResult {
    pub arm: String,
    pub n: usize,
    pub q_bits: u32,
    pub delta_log2: u32,
    pub batch_size: usize,
    pub total_values: usize,
    pub repeat: usize,
    pub seed: u64,
    pub t_precompute_s: f64,
    pub t_reconstruct_s: f64,
    pub t_randomize_s: f64,
    pub t_total_s: f64,
    pub n_encrypts: u64,
    pub n_ring_muls: u64,
    pub n_ntts: u64,
    pub n_gaussian_samples: u64,
    pub n_ternary_samples: u64,
}

/// Emission column order; must match the `BenchResult` field order.
pub const COLUMNS: [&str; 17] = [
    "arm",
    "n",
    "q_bits",
    "delta_log2",
    "batch_size",
    "total_values",
    "repeat",
    "seed",
    "t_precompute_s",
    "t_reconstruct_s",
    "t_randomize_s",
    "t_total_s",
    "n_encrypts",
    "n_ring_muls",
    "n_ntts",
    "n_gaussian_samples",
    "n_ternary_samples",
];

impl BenchResult {
    fn new(
        arm: &str,
        params: &SchemeParams,
        batch_size: usize,
        total_values: usize,
        repeat: usize,
        seed: u64,
    ) -> Self {
        Self {
            arm: arm.to_string(),
            n: params.ring_degree(),
            q_bits: params.modulus_bits(),
            delta_log2: params.scale_log2(),
            batch_size,
            total_values,
            repeat,
            seed,
            t_precompute_s: 0.0,
            t_reconstruct_s: 0.0,
            t_randomize_s: 0.0,
            t_total_s: 0.0,
            n_encrypts: 0,
            n_ring_muls: 0,
            n_ntts: 0,
            n_gaussian_samples: 0,
            n_ternary_samples: 0,
        }
    }

    fn absorb_counters(&mut self, c: &OpCounters) {
        self.n_encrypts = c.encryptions;
        self.n_ring_muls = c.ring_muls;
        self.n_ntts = c.ntts;
        self.n_gaussian_samples = c.gaussian_samples;
        self.n_ternary_samples = c.ternary_samples;
    }

    /// Stage shares in percent (precompute, reconstruct/encrypt, randomize),
    /// normalized to sum to 100 when any stage time was recorded.
    pub fn stage_percentages(&self) -> (f64, f64, f64) {
        let total = self.t_precompute_s + self.t_reconstruct_s + self.t_randomize_s;
        if total <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        (
            100.0 * self.t_precompute_s / total,
            100.0 * self.t_reconstruct_s / total,
            100.0 * self.t_randomize_s / total,
        )
    }
}

pub const ARM_NEMESIS: &str = "nemesis";
pub const ARM_BATCH: &str = "ckks-batch";
pub const ARM_RACHE: &str = "rache-plus";
pub const ARM_NAIVE: &str = "ckks-naive";

fn policy_for(choice: PolicyChoice, batch_size: usize, weights: &[f64]) -> Result<SelectionPolicy> {
    match choice {
        PolicyChoice::AllOnes => Ok(SelectionPolicy::AllOnes),
        PolicyChoice::Fixed(v) => {
            if v == 0.0 || !v.is_finite() {
                return Err(BenchError::Config(
                    "fixed policy value must be nonzero and finite".into(),
                ));
            }
            Ok(SelectionPolicy::FixedVector(vec![v; batch_size]))
        }
        PolicyChoice::FrequencyTopK => {
            // No frequency model comes with synthetic weights; quantize to
            // three decimals and count occurrences.
            let mut counts = std::collections::HashMap::new();
            for &w in weights {
                let key = (w * 1000.0).round() as i64;
                if key != 0 {
                    *counts.entry(key).or_insert(0u64) += 1;
                }
            }
            if counts.len() < batch_size {
                return Err(BenchError::Config(format!(
                    "only {} distinct nonzero quantized values for a top-{batch_size} policy",
                    counts.len()
                )));
            }
            let histogram = counts
                .into_iter()
                .map(|(k, c)| (k as f64 / 1000.0, c))
                .collect();
            Ok(SelectionPolicy::FrequencyTopK {
                histogram,
                k: batch_size,
            })
        }
    }
}

struct ArmKeys {
    sk: SecretKey,
    pk: PublicKey,
}

fn arm_keys(params: &SchemeParams, seed: u64) -> Result<ArmKeys> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut ctr = OpCounters::new();
    let (sk, pk) = keygen(params, &mut rng, &mut ctr)?;
    Ok(ArmKeys { sk, pk })
}

fn spot_check(
    params: &SchemeParams,
    sk: &SecretKey,
    ct: &Ciphertext,
    expected: &[f64],
    tolerance: f64,
    arm: &str,
) -> Result<()> {
    let mut ctr = OpCounters::new();
    let pt = decrypt(params, sk, ct, &mut ctr)?;
    let got = decode(params, &pt)?;
    for (i, (e, g)) in expected.iter().zip(got.values()).enumerate() {
        if (e - g).abs() > tolerance {
            return Err(BenchError::CryptoCheck(format!(
                "{arm}: slot {i} decoded to {g}, expected {e} (tolerance {tolerance})"
            )));
        }
    }
    Ok(())
}

/// Decryption spot checks guard against a run producing garbage; generous
/// bound, far above the frozen tolerances but far below any real value.
const SPOT_CHECK_TOL: f64 = 0.05;

/// Time the cached arm over the weight vector: precompute once, then
/// reconstruct and randomize per chunk, timed separately.
pub fn run_nemesis_arm(
    config: &BenchConfig,
    weights: &[f64],
    batch_size: usize,
    repeat: usize,
    seed: u64,
) -> Result<BenchResult> {
    let params = &config.params;
    let keys = arm_keys(params, seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x4E454D);
    let mut ctr = OpCounters::new();
    let mut result = BenchResult::new(ARM_NEMESIS, params, batch_size, weights.len(), repeat, seed);

    let candidates = SlotVector::new(params, vec![1.0; batch_size])?;
    let policy = policy_for(config.policy, batch_size, weights)?;

    let t0 = Instant::now();
    let cache = precompute(params, &candidates, &policy, &keys.pk, &mut rng, &mut ctr)?;
    result.t_precompute_s = t0.elapsed().as_secs_f64();

    let mut last_ct: Option<Ciphertext> = None;
    let mut last_chunk: Vec<f64> = Vec::new();
    let mut t_rec = 0.0f64;
    let mut t_rand = 0.0f64;
    for chunk in weights.chunks(batch_size) {
        let mut padded = chunk.to_vec();
        padded.resize(batch_size, 0.0);
        let m = SlotVector::new(params, padded.clone())?;

        let t = Instant::now();
        let ct = reconstruct(params, &cache, &m, &mut ctr)?;
        t_rec += t.elapsed().as_secs_f64();

        let t = Instant::now();
        let ct = randomize(params, &ct, config.sigma_rand, &mut rng, &mut ctr)?;
        t_rand += t.elapsed().as_secs_f64();

        last_ct = Some(ct);
        last_chunk = padded;
    }
    result.t_reconstruct_s = t_rec;
    result.t_randomize_s = t_rand;
    result.t_total_s = result.t_precompute_s + t_rec + t_rand;
    result.absorb_counters(&ctr);

    if let Some(ct) = &last_ct {
        // A non-identity base scales the check expectation too: decryption
        // recovers m regardless, so expectations stay the padded chunk.
        spot_check(params, &keys.sk, ct, &last_chunk, SPOT_CHECK_TOL, ARM_NEMESIS)?;
    }
    Ok(result)
}

/// Packed-batch arm: one standard encryption per chunk.
pub fn run_batch_arm(
    config: &BenchConfig,
    weights: &[f64],
    batch_size: usize,
    repeat: usize,
    seed: u64,
) -> Result<BenchResult> {
    let params = &config.params;
    let keys = arm_keys(params, seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x424154);
    let mut ctr = OpCounters::new();
    let mut result = BenchResult::new(ARM_BATCH, params, batch_size, weights.len(), repeat, seed);

    let mut last_ct: Option<Ciphertext> = None;
    let mut last_chunk: Vec<f64> = Vec::new();
    let t = Instant::now();
    for chunk in weights.chunks(batch_size) {
        let cts = batch_encrypt(params, &keys.pk, chunk, batch_size, &mut rng, &mut ctr)?;
        let mut padded = chunk.to_vec();
        padded.resize(batch_size, 0.0);
        last_chunk = padded;
        last_ct = cts.into_iter().next();
    }
    result.t_reconstruct_s = t.elapsed().as_secs_f64();
    result.t_total_s = result.t_reconstruct_s;
    result.absorb_counters(&ctr);

    if let Some(ct) = &last_ct {
        spot_check(params, &keys.sk, ct, &last_chunk, SPOT_CHECK_TOL, ARM_BATCH)?;
    }
    Ok(result)
}

/// Per-value arm: a full public-key encryption for every single value.
pub fn run_naive_arm(
    config: &BenchConfig,
    weights: &[f64],
    repeat: usize,
    seed: u64,
) -> Result<BenchResult> {
    let params = &config.params;
    let keys = arm_keys(params, seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x4E4149);
    let mut ctr = OpCounters::new();
    let mut result = BenchResult::new(ARM_NAIVE, params, 1, weights.len(), repeat, seed);

    let mut first_ct: Option<Ciphertext> = None;
    let mut last_ct: Option<Ciphertext> = None;
    let t = Instant::now();
    for (i, &v) in weights.iter().enumerate() {
        let cts = naive_encrypt(params, &keys.pk, std::slice::from_ref(&v), &mut rng, &mut ctr)?;
        let ct = cts.into_iter().next().expect("one ciphertext per value");
        if i == 0 {
            first_ct = Some(ct);
        } else if i == weights.len() - 1 {
            last_ct = Some(ct);
        }
    }
    result.t_reconstruct_s = t.elapsed().as_secs_f64();
    result.t_total_s = result.t_reconstruct_s;
    result.absorb_counters(&ctr);

    if let (Some(ct), Some(&v)) = (&first_ct, weights.first()) {
        spot_check(params, &keys.sk, ct, &[v], SPOT_CHECK_TOL, ARM_NAIVE)?;
    }
    if weights.len() > 1 {
        if let (Some(ct), Some(&v)) = (&last_ct, weights.last()) {
            spot_check(params, &keys.sk, ct, &[v], SPOT_CHECK_TOL, ARM_NAIVE)?;
        }
    }
    Ok(result)
}

/// Radix-cache arm: digit-selected additions from the power cache.
pub fn run_rache_arm(
    config: &BenchConfig,
    weights: &[f64],
    repeat: usize,
    seed: u64,
) -> Result<BenchResult> {
    let params = &config.params;
    let keys = arm_keys(params, seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x524143);
    let mut ctr = OpCounters::new();
    let mut result = BenchResult::new(ARM_RACHE, params, 1, weights.len(), repeat, seed);

    let t0 = Instant::now();
    let cache = rache_precompute(
        params,
        &keys.pk,
        DEFAULT_RADIX,
        DEFAULT_INT_BITS,
        DEFAULT_FRAC_BITS,
        DEFAULT_ZERO_POOL,
        &mut rng,
        &mut ctr,
    )?;
    result.t_precompute_s = t0.elapsed().as_secs_f64();

    let mut first_ct: Option<Ciphertext> = None;
    let t = Instant::now();
    for (i, &v) in weights.iter().enumerate() {
        let ct = rache_encrypt_scalar(params, &cache, v, &mut rng, &mut ctr)?;
        if i == 0 {
            first_ct = Some(ct);
        }
    }
    result.t_reconstruct_s = t.elapsed().as_secs_f64();
    result.t_total_s = result.t_precompute_s + result.t_reconstruct_s;
    result.absorb_counters(&ctr);

    if let (Some(ct), Some(&v)) = (&first_ct, weights.first()) {
        let quantum = (DEFAULT_RADIX as f64).powi(-(DEFAULT_FRAC_BITS as i32));
        spot_check(params, &keys.sk, ct, &[v], SPOT_CHECK_TOL + quantum, ARM_RACHE)?;
    }
    Ok(result)
}

/// All four arms over one synthetic weight vector, `repeats` times each.
pub fn run_arm_comparison(config: &BenchConfig) -> Result<Vec<BenchResult>> {
    config.validate()?;
    let batch_size = *config.batch_sizes.first().expect("validated non-empty");
    let weights = synth_weights(config.model_size, config.seed, WeightDistribution::default());
    let mut results = Vec::new();
    for repeat in 0..config.repeats {
        let seed = config.seed.wrapping_add(repeat as u64);
        results.push(run_nemesis_arm(config, &weights, batch_size, repeat, seed)?);
        results.push(run_batch_arm(config, &weights, batch_size, repeat, seed)?);
        results.push(run_rache_arm(config, &weights, repeat, seed)?);
        results.push(run_naive_arm(config, &weights, repeat, seed)?);
    }
    Ok(results)
}

/// The cached arm only, across every configured batch size.
pub fn run_stage_profile(config: &BenchConfig) -> Result<Vec<BenchResult>> {
    config.validate()?;
    let weights = synth_weights(config.model_size, config.seed, WeightDistribution::default());
    let mut results = Vec::new();
    for &batch_size in &config.batch_sizes {
        for repeat in 0..config.repeats {
            let seed = config.seed.wrapping_add(repeat as u64);
            results.push(run_nemesis_arm(config, &weights, batch_size, repeat, seed)?);
        }
    }
    Ok(results)
}

/// Federated averaging rounds; one row per round. Client encryption lands in
/// the reconstruct/encrypt column, setup in the precompute column of the
/// first round's row, and the total includes aggregation and decryption.
pub fn run_fedavg(config: &BenchConfig, encryptor: EncryptorKind) -> Result<Vec<BenchResult>> {
    config.validate()?;
    let batch_size = *config.batch_sizes.first().expect("validated non-empty");
    if matches!(encryptor, EncryptorKind::Naive | EncryptorKind::RachePlus)
        && config.model_size > 50_000
    {
        return Err(BenchError::Config(format!(
            "{} stores one ciphertext per weight; {} weights would not fit in memory \
             (cap: 50000)",
            encryptor.label(),
            config.model_size
        )));
    }
    let round_config = RoundConfig {
        num_clients: config.clients,
        num_rounds: config.rounds,
        model_size: config.model_size,
        batch_size,
        encryptor,
        sigma_rand: config.sigma_rand,
        weighting: nemesis_core::fl::ClientWeighting::Uniform,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut ctr = OpCounters::new();
    let ctx = FlContext::new(&config.params, &round_config, &mut rng, &mut ctr)?;

    let arm_label = format!("fedavg-{}", encryptor.label());
    let mut results = Vec::new();
    for round in 0..config.rounds {
        let updates = synth_updates(
            config.clients,
            config.model_size,
            config.seed.wrapping_add(round as u64 * 1000),
        );
        let t0 = Instant::now();
        let outcome = if config.parallel_clients {
            parallel_round(&ctx, &updates, config.seed, round, &mut ctr)?
        } else {
            aggregate_round(&ctx, &updates, &mut rng, &mut ctr)?
        };
        let total = t0.elapsed().as_secs_f64();

        let worst = outcome
            .decrypted_mean
            .iter()
            .zip(&outcome.plaintext_mean)
            .map(|(d, p)| (d - p).abs())
            .fold(0.0f64, f64::max);
        let tol = match encryptor {
            EncryptorKind::RachePlus => SPOT_CHECK_TOL + 2.0f64.powi(-(DEFAULT_FRAC_BITS as i32)),
            _ => SPOT_CHECK_TOL,
        };
        if worst > tol {
            return Err(BenchError::CryptoCheck(format!(
                "{arm_label}: round {round} mean deviates by {worst}"
            )));
        }

        let mut row = BenchResult::new(
            &arm_label,
            &config.params,
            batch_size,
            config.model_size * config.clients,
            round,
            config.seed,
        );
        if round == 0 {
            row.t_precompute_s = ctx.setup_wall.as_secs_f64();
        }
        row.t_reconstruct_s = outcome.timing.encrypt_s;
        row.t_total_s = total;
        row.absorb_counters(&outcome.timing.counters);
        results.push(row);
    }
    Ok(results)
}

/// Encrypt clients on separate threads (per-client seeded RNG), then sum.
fn parallel_round(
    ctx: &FlContext,
    updates: &[nemesis_core::fl::ClientUpdate],
    seed: u64,
    round: usize,
    ctr: &mut OpCounters,
) -> Result<nemesis_core::fl::RoundOutcome> {
    use nemesis_core::ckks::add_ct_ct;

    let t0 = Instant::now();
    let encrypted: Vec<(Vec<Ciphertext>, OpCounters)> = std::thread::scope(|scope| {
        let handles: Vec<_> = updates
            .iter()
            .map(|update| {
                scope.spawn(move || {
                    let mut rng = ChaCha12Rng::seed_from_u64(
                        seed ^ (round as u64) << 32 ^ update.client_id as u64,
                    );
                    let mut local = OpCounters::new();
                    let cts = ctx.encrypt_update(&update.weights, &mut rng, &mut local)?;
                    Ok::<_, nemesis_core::Error>((cts, local))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("client thread panicked"))
            .collect::<std::result::Result<Vec<_>, _>>()
    })?;
    let encrypt_s = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let mut iter = encrypted.into_iter();
    let (mut sum, mut merged) = iter.next().expect("at least one client");
    for (cts, local) in iter {
        for (a, c) in sum.iter_mut().zip(&cts) {
            *a = add_ct_ct(a, c, ctr)?;
        }
        merged += local;
    }
    *ctr += merged;
    let aggregate_s = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let slots = match ctx.config.encryptor {
        EncryptorKind::Naive | EncryptorKind::RachePlus => 1,
        _ => ctx.config.batch_size,
    };
    let denom = ctx.config.num_clients as f64;
    let mut decrypted_mean = Vec::with_capacity(ctx.config.model_size);
    let mut local = OpCounters::new();
    for ct in &sum {
        let pt = decrypt(&ctx.params, &ctx.sk, ct, &mut local)?;
        let decoded = decode(&ctx.params, &pt)?;
        let take = slots.min(ctx.config.model_size - decrypted_mean.len());
        decrypted_mean.extend(decoded.values()[..take].iter().map(|v| v / denom));
        if decrypted_mean.len() == ctx.config.model_size {
            break;
        }
    }
    *ctr += local;
    let decrypt_s = t2.elapsed().as_secs_f64();

    let mut plaintext_mean = vec![0.0f64; ctx.config.model_size];
    for update in updates {
        for (acc, &w) in plaintext_mean.iter_mut().zip(&update.weights) {
            *acc += w;
        }
    }
    for v in plaintext_mean.iter_mut() {
        *v /= denom;
    }

    Ok(nemesis_core::fl::RoundOutcome {
        encrypted_sum: sum,
        decrypted_mean,
        plaintext_mean,
        timing: nemesis_core::fl::RoundTiming {
            encrypt_s,
            aggregate_s,
            decrypt_s,
            counters: *ctr,
        },
    })
}

/// Per-arm encode/encrypt/decrypt/decode self-check; returns (arm, max error).
pub fn run_roundtrip(config: &BenchConfig) -> Result<Vec<(String, f64, BenchResult)>> {
    config.validate()?;
    let batch_size = *config.batch_sizes.first().expect("validated non-empty");
    let small = config.model_size.min(2 * batch_size.max(512));
    let weights = synth_weights(small, config.seed, WeightDistribution::default());
    let params = &config.params;
    let keys = arm_keys(params, config.seed)?;
    let mut out = Vec::new();

    let arms: [(&str, Box<dyn Fn(&mut ChaCha12Rng, &mut OpCounters) -> Result<Vec<f64>>>); 4] = [
        (
            ARM_NEMESIS,
            Box::new(|rng, ctr| {
                let candidates = SlotVector::new(params, vec![1.0; batch_size])?;
                let cache = precompute(
                    params,
                    &candidates,
                    &SelectionPolicy::AllOnes,
                    &keys.pk,
                    rng,
                    ctr,
                )?;
                let cts = nemesis_core::cache::chunk_and_encrypt(
                    params,
                    &cache,
                    &weights,
                    batch_size,
                    config.sigma_rand,
                    rng,
                    ctr,
                )?;
                decode_chunks(params, &keys.sk, &cts, batch_size, weights.len(), ctr)
            }),
        ),
        (
            ARM_BATCH,
            Box::new(|rng, ctr| {
                let cts = batch_encrypt(params, &keys.pk, &weights, batch_size, rng, ctr)?;
                decode_chunks(params, &keys.sk, &cts, batch_size, weights.len(), ctr)
            }),
        ),
        (
            ARM_RACHE,
            Box::new(|rng, ctr| {
                let cache = rache_precompute(
                    params,
                    &keys.pk,
                    DEFAULT_RADIX,
                    DEFAULT_INT_BITS,
                    DEFAULT_FRAC_BITS,
                    DEFAULT_ZERO_POOL,
                    rng,
                    ctr,
                )?;
                let mut recovered = Vec::with_capacity(weights.len());
                for &v in &weights {
                    let ct = rache_encrypt_scalar(params, &cache, v, rng, ctr)?;
                    let pt = decrypt(params, &keys.sk, &ct, ctr)?;
                    recovered.push(decode(params, &pt)?.values()[0]);
                }
                Ok(recovered)
            }),
        ),
        (
            ARM_NAIVE,
            Box::new(|rng, ctr| {
                let cts = naive_encrypt(params, &keys.pk, &weights, rng, ctr)?;
                let mut recovered = Vec::with_capacity(weights.len());
                for ct in &cts {
                    let pt = decrypt(params, &keys.sk, ct, ctr)?;
                    recovered.push(decode(params, &pt)?.values()[0]);
                }
                Ok(recovered)
            }),
        ),
    ];

    for (arm, runner) in arms {
        let mut rng = ChaCha12Rng::seed_from_u64(config.seed ^ 0x52545031);
        let mut ctr = OpCounters::new();
        let t0 = Instant::now();
        let recovered = runner(&mut rng, &mut ctr)?;
        let elapsed = t0.elapsed().as_secs_f64();
        let err = weights
            .iter()
            .zip(&recovered)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let tol = if arm == ARM_RACHE {
            SPOT_CHECK_TOL + 2.0f64.powi(-(DEFAULT_FRAC_BITS as i32))
        } else {
            SPOT_CHECK_TOL
        };
        if err > tol {
            return Err(BenchError::CryptoCheck(format!(
                "{arm}: roundtrip error {err} exceeds {tol}"
            )));
        }
        let mut row = BenchResult::new(arm, params, batch_size, weights.len(), 0, config.seed);
        row.t_total_s = elapsed;
        row.absorb_counters(&ctr);
        out.push((arm.to_string(), err, row));
    }
    Ok(out)
}

fn decode_chunks(
    params: &SchemeParams,
    sk: &SecretKey,
    cts: &[Ciphertext],
    batch_size: usize,
    len: usize,
    ctr: &mut OpCounters,
) -> Result<Vec<f64>> {
    let mut recovered = Vec::with_capacity(len);
    for ct in cts {
        let pt = decrypt(params, sk, ct, ctr)?;
        let decoded = decode(params, &pt)?;
        let take = batch_size.min(len - recovered.len());
        recovered.extend_from_slice(&decoded.values()[..take]);
        if recovered.len() == len {
            break;
        }
    }
    Ok(recovered)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// Write results in the pinned column order; an empty set still produces the
/// CSV header (or an empty JSON array).
pub fn emit_results(results: &[BenchResult], format: EmitFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| {
        BenchError::Config(format!("cannot write {}: {e}", path.display()))
    })?;
    let mut w = BufWriter::new(file);
    match format {
        EmitFormat::Csv => {
            write_csv(&mut w, results)
                .map_err(|e| BenchError::Config(format!("csv write failed: {e}")))?;
        }
        EmitFormat::Json => {
            serde_json::to_writer_pretty(&mut w, results)
                .map_err(|e| BenchError::Config(format!("json write failed: {e}")))?;
            w.write_all(b"\n")
                .map_err(|e| BenchError::Config(format!("write failed: {e}")))?;
        }
    }
    w.flush()
        .map_err(|e| BenchError::Config(format!("flush failed: {e}")))?;
    Ok(())
}

fn write_csv(w: impl Write, results: &[BenchResult]) -> std::result::Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    writer.write_record(COLUMNS)?;
    for r in results {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

/// Median over an odd or even count; results must be non-empty.
pub fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median total time of one arm within a result set.
pub fn median_total(results: &[BenchResult], arm: &str) -> Option<f64> {
    let mut totals: Vec<f64> = results
        .iter()
        .filter(|r| r.arm == arm)
        .map(|r| r.t_total_s)
        .collect();
    if totals.is_empty() {
        None
    } else {
        Some(median(&mut totals))
    }
}

/// Mean total time of one arm within a result set.
pub fn mean_total(results: &[BenchResult], arm: &str) -> Option<f64> {
    let totals: Vec<f64> = results
        .iter()
        .filter(|r| r.arm == arm)
        .map(|r| r.t_total_s)
        .collect();
    if totals.is_empty() {
        None
    } else {
        Some(totals.iter().sum::<f64>() / totals.len() as f64)
    }
}
