//! Quick wall-clock probe of the hot primitives at the reference parameters.

use std::time::Instant;

use nemesis_core::baselines::{batch_encrypt, naive_encrypt, rache_encrypt_scalar, rache_precompute};
use nemesis_core::cache::{nemesis_encrypt, precompute, SelectionPolicy};
use nemesis_core::ckks::{encrypt, keygen};
use nemesis_core::encoding::{build_vandermonde, encode_fast, encode_vandermonde, SlotVector};
use nemesis_core::metrics::OpCounters;
use nemesis_core::params::SchemeParams;
use nemesis_core::ring::Domain;
use nemesis_core::RingElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn main() {
    let params = SchemeParams::default_set();
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let mut ctr = OpCounters::new();
    let n = params.ring_degree();

    let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..params.modulus())).collect();
    let elem = RingElement::from_coeffs(&params, coeffs, Domain::Coefficient).unwrap();

    let t = Instant::now();
    let reps = 1000;
    for _ in 0..reps {
        let e = elem.to_evaluation(&params, &mut ctr).unwrap();
        std::hint::black_box(&e);
    }
    println!("ntt_forward: {:.1} us", t.elapsed().as_secs_f64() * 1e6 / reps as f64);

    let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
    let m = SlotVector::new(
        &params,
        (0..params.slot_count()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    )
    .unwrap();

    let t = Instant::now();
    for _ in 0..reps {
        let pt = encode_fast(&params, &m, params.scale(), &mut ctr).unwrap();
        std::hint::black_box(&pt);
    }
    println!("encode_fast: {:.1} us", t.elapsed().as_secs_f64() * 1e6 / reps as f64);

    let sys = build_vandermonde(&params, params.slot_count()).unwrap();
    let t = Instant::now();
    for _ in 0..5 {
        let pt = encode_vandermonde(&params, &m, &sys, params.scale(), &mut ctr).unwrap();
        std::hint::black_box(&pt);
    }
    println!("encode_vandermonde(full): {:.1} us", t.elapsed().as_secs_f64() * 1e6 / 5.0);

    let pt = encode_fast(&params, &m, params.scale(), &mut ctr).unwrap();
    let t = Instant::now();
    for _ in 0..reps {
        let ct = encrypt(&params, &pk, &pt, &mut rng, &mut ctr).unwrap();
        std::hint::black_box(&ct);
    }
    println!("encrypt: {:.1} us", t.elapsed().as_secs_f64() * 1e6 / reps as f64);

    let cache = precompute(
        &params,
        &SlotVector::new(&params, vec![1.0; params.slot_count()]).unwrap(),
        &SelectionPolicy::AllOnes,
        &pk,
        &mut rng,
        &mut ctr,
    )
    .unwrap();
    let t = Instant::now();
    for _ in 0..reps {
        let ct = nemesis_encrypt(&params, &cache, &m, 3.2, &mut rng, &mut ctr).unwrap();
        std::hint::black_box(&ct);
    }
    println!("nemesis_encrypt: {:.1} us", t.elapsed().as_secs_f64() * 1e6 / reps as f64);

    let t = Instant::now();
    let cts = batch_encrypt(&params, &pk, &vec![0.5; 2048 * 20], 2048, &mut rng, &mut ctr).unwrap();
    std::hint::black_box(&cts);
    println!("batch_encrypt(20 chunks): {:.1} us/chunk", t.elapsed().as_secs_f64() * 1e6 / 20.0);

    let t = Instant::now();
    let cts = naive_encrypt(&params, &pk, &vec![0.5; 200], &mut rng, &mut ctr).unwrap();
    std::hint::black_box(&cts);
    println!("naive_encrypt: {:.1} us/value", t.elapsed().as_secs_f64() * 1e6 / 200.0);

    let rcache = rache_precompute(&params, &pk, 2, 4, 16, 16, &mut rng, &mut ctr).unwrap();
    let t = Instant::now();
    for i in 0..500 {
        let v = (i % 13) as f64 / 16.0;
        let ct = rache_encrypt_scalar(&params, &rcache, v, &mut rng, &mut ctr).unwrap();
        std::hint::black_box(&ct);
    }
    println!("rache_encrypt_scalar: {:.1} us/value", t.elapsed().as_secs_f64() * 1e6 / 500.0);

    let t = Instant::now();
    let ptd = nemesis_core::ckks::decrypt(&params, &sk, &cts[0], &mut ctr).unwrap();
    let dec = nemesis_core::encoding::decode(&params, &ptd).unwrap();
    std::hint::black_box(&dec);
    println!("decrypt+decode: {:.1} us", t.elapsed().as_secs_f64() * 1e6);
}
