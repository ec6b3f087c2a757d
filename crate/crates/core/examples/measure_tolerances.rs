//! Measures the empirical error maxima that the test suite freezes as
//! tolerances (see `src/tolerances.rs`). Run with:
//!
//! ```text
//! cargo run --release -p nemesis-core --example measure_tolerances
//! ```
//!
//! Protocol per quantity (all at the reference parameter set, seeds fixed):
//!
//! * TAU_ENC   — max slot error of decode∘encode, 10^4 vectors, |m| ≤ 1.
//! * TAU_FRESH — max slot error of decode∘decrypt∘encrypt∘encode, 10^3
//!   trials, fresh keypair each trial.
//! * TAU_MULT  — max slot error after one ciphertext×plaintext multiply,
//!   both operands |·| ≤ 1, decoded at Δ², 10^3 trials.
//! * TAU_RAND  — max decoded perturbation of one σ = 3.2 randomization on a
//!   Δ²-scale ciphertext, 10^3 trials.
//! * TAU_CHAIN_SUM20 — max slot error of 20-way sums of (encrypt, multiply,
//!   add-Gaussian) chains, 10^4 chains in 500 sums.
//! * TAU_AGG   — max |decrypted mean − plaintext mean| of 20-client federated
//!   averaging at model size 582,026, 3 seeded rounds.
//! * TAU_MULT_N16 — multiplication tolerance at the N = 16 toy ring.

use nemesis_core::cache::{nemesis_encrypt, precompute, randomize, reconstruct, SelectionPolicy};
use nemesis_core::ckks::{add_ct_ct, decrypt, encrypt, keygen, mul_ct_pt, Ciphertext};
use nemesis_core::encoding::{decode, encode_fast, Plaintext, SlotVector};
use nemesis_core::fl::{aggregate_round, synth_updates, FlContext, RoundConfig};
use nemesis_core::metrics::OpCounters;
use nemesis_core::params::SchemeParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_slots(params: &SchemeParams, len: usize, rng: &mut ChaCha12Rng) -> SlotVector {
    let values = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SlotVector::new(params, values).unwrap()
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() {
    let params = SchemeParams::default_set();
    let slots = params.slot_count();
    let mut ctr = OpCounters::new();

    // TAU_ENC
    {
        let mut rng = ChaCha12Rng::seed_from_u64(0xE0C0DE);
        let mut worst = 0.0f64;
        for _ in 0..10_000 {
            let m = random_slots(&params, slots, &mut rng);
            let pt = encode_fast(&params, &m, params.scale(), &mut ctr).unwrap();
            let back = decode(&params, &pt).unwrap();
            worst = worst.max(max_err(m.values(), back.values()));
        }
        println!("TAU_ENC          measured max {worst:.3e}  (10^4 encode/decode roundtrips)");
    }

    // TAU_FRESH
    {
        let mut rng = ChaCha12Rng::seed_from_u64(0xF1E5);
        let mut worst = 0.0f64;
        for _ in 0..1_000 {
            let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
            let m = random_slots(&params, slots, &mut rng);
            let pt = encode_fast(&params, &m, params.scale(), &mut ctr).unwrap();
            let ct = encrypt(&params, &pk, &pt, &mut rng, &mut ctr).unwrap();
            let back = decode(&params, &decrypt(&params, &sk, &ct, &mut ctr).unwrap()).unwrap();
            worst = worst.max(max_err(m.values(), back.values()));
        }
        println!("TAU_FRESH        measured max {worst:.3e}  (10^3 fresh-key roundtrips)");
    }

    // TAU_MULT and TAU_RAND share a keypair; both operands |·| ≤ 1.
    {
        let mut rng = ChaCha12Rng::seed_from_u64(0x3017);
        let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
        let mut worst_mult = 0.0f64;
        let mut worst_rand = 0.0f64;
        for _ in 0..1_000 {
            let a = random_slots(&params, slots, &mut rng);
            let b = random_slots(&params, slots, &mut rng);
            let pa = encode_fast(&params, &a, params.scale(), &mut ctr).unwrap();
            let pb = encode_fast(&params, &b, params.scale(), &mut ctr).unwrap();
            let ct = encrypt(&params, &pk, &pa, &mut rng, &mut ctr).unwrap();
            let prod = mul_ct_pt(&params, &ct, &pb, &mut ctr).unwrap();
            let out = decode(&params, &decrypt(&params, &sk, &prod, &mut ctr).unwrap()).unwrap();
            let expected: Vec<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
            worst_mult = worst_mult.max(max_err(&expected, out.values()));

            let randomized = randomize(&params, &prod, 3.2, &mut rng, &mut ctr).unwrap();
            let out2 =
                decode(&params, &decrypt(&params, &sk, &randomized, &mut ctr).unwrap()).unwrap();
            worst_rand = worst_rand.max(max_err(out.values(), out2.values()));
        }
        println!("TAU_MULT         measured max {worst_mult:.3e}  (10^3 multiply trials)");
        println!("TAU_RAND         measured max {worst_rand:.3e}  (10^3 randomize trials)");
    }

    // TAU_CHAIN_SUM20: 10^4 chains (encrypt, ⊛, ⊕ Gaussian), summed 20 at a time.
    {
        let mut rng = ChaCha12Rng::seed_from_u64(0xCAA1);
        let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let mut acc: Option<Ciphertext> = None;
            let mut expected = vec![0.0f64; slots];
            for _ in 0..20 {
                let a = random_slots(&params, slots, &mut rng);
                let b = random_slots(&params, slots, &mut rng);
                let pa = encode_fast(&params, &a, params.scale(), &mut ctr).unwrap();
                let pb = encode_fast(&params, &b, params.scale(), &mut ctr).unwrap();
                let ct = encrypt(&params, &pk, &pa, &mut rng, &mut ctr).unwrap();
                let prod = mul_ct_pt(&params, &ct, &pb, &mut ctr).unwrap();
                let chained = randomize(&params, &prod, 3.2, &mut rng, &mut ctr).unwrap();
                for ((e, x), y) in expected.iter_mut().zip(a.values()).zip(b.values()) {
                    *e += x * y;
                }
                acc = Some(match acc {
                    None => chained,
                    Some(prev) => add_ct_ct(&prev, &chained, &mut ctr).unwrap(),
                });
            }
            let sum = acc.unwrap();
            let out = decode(&params, &decrypt(&params, &sk, &sum, &mut ctr).unwrap()).unwrap();
            worst = worst.max(max_err(&expected, out.values()));
        }
        println!("TAU_CHAIN_SUM20  measured max {worst:.3e}  (500 sums of 20 chains)");
    }

    // TAU_AGG: full-size federated averaging, 3 seeds.
    {
        let config = RoundConfig::default();
        let mut worst = 0.0f64;
        for seed in [1u64, 2, 3] {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut actr = OpCounters::new();
            let ctx = FlContext::new(&params, &config, &mut rng, &mut actr).unwrap();
            let updates = synth_updates(config.num_clients, config.model_size, seed * 1000);
            let out = aggregate_round(&ctx, &updates, &mut rng, &mut actr).unwrap();
            worst = worst.max(max_err(&out.decrypted_mean, &out.plaintext_mean));
        }
        println!("TAU_AGG          measured max {worst:.3e}  (3 seeded 20-client rounds, 582,026 weights)");
    }

    // TAU_MULT_N16 via the cache path at the toy degree.
    {
        let toy = SchemeParams::with_ring_degree(16).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0x16);
        let (sk, pk) = keygen(&toy, &mut rng, &mut ctr).unwrap();
        let candidates = SlotVector::new(&toy, vec![1.0; toy.slot_count()]).unwrap();
        let cache = precompute(&toy, &candidates, &SelectionPolicy::AllOnes, &pk, &mut rng, &mut ctr)
            .unwrap();
        let mut worst = 0.0f64;
        for _ in 0..2_000 {
            let m = random_slots(&toy, toy.slot_count(), &mut rng);
            let ct = reconstruct(&toy, &cache, &m, &mut ctr).unwrap();
            let out = decode(&toy, &decrypt(&toy, &sk, &ct, &mut ctr).unwrap()).unwrap();
            worst = worst.max(max_err(m.values(), out.values()));
            let ct2 = nemesis_encrypt(&toy, &cache, &m, 3.2, &mut rng, &mut ctr).unwrap();
            let out2 = decode(&toy, &decrypt(&toy, &sk, &ct2, &mut ctr).unwrap()).unwrap();
            worst = worst.max(max_err(m.values(), out2.values()));
        }
        println!("TAU_MULT_N16     measured max {worst:.3e}  (2·10^3 toy-ring reconstructions)");
    }

    // Companion figure for decode-side sanity in tests that decode a freshly
    // scaled plaintext at Δ² (pure arithmetic, no keys).
    {
        let mut rng = ChaCha12Rng::seed_from_u64(0xD2);
        let mut worst = 0.0f64;
        for _ in 0..2_000 {
            let m = random_slots(&params, slots, &mut rng);
            let pt = encode_fast(&params, &m, params.scale(), &mut ctr).unwrap();
            let squared = Plaintext::from_parts(
                pt.poly().scalar_mul(params.scale() as u64).unwrap(),
                params.scale() * params.scale(),
                slots,
            )
            .unwrap();
            let back = decode(&params, &squared).unwrap();
            worst = worst.max(max_err(m.values(), back.values()));
        }
        println!("(info) rescaled-encode decode error max {worst:.3e}");
    }
}
