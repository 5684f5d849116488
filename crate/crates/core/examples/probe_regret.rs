use flashsim::config::RegretConfig;
use flashsim::regret::{run_regret, SyntheticEnv};
use flashsim::rng::{stream_rng, SimRng, Stream};
use flashsim::strategy::StrategyKind;
use rand_chacha::rand_core::SeedableRng;

fn main() {
    let cfg = RegretConfig {
        d: 4,
        m: 20,
        select: 4,
        noise_r: 0.1,
        context_l: 1.0,
        theta_s: 1.0,
        per_client: false,
    };
    for kind in [StrategyKind::FlashTs, StrategyKind::Linucb, StrategyKind::Random] {
        let mut ratios = Vec::new();
        let mut lin_ratios = Vec::new();
        for seed in 0..10u64 {
            let env = SyntheticEnv::new_shared(
                &cfg,
                &mut stream_rng(seed, Stream::Env, 1_000_000, 0),
            )
            .unwrap();
            let trace = run_regret(&env, kind, 2000, 1.0, 0.05, false, seed).unwrap();
            ratios.push(trace.average_regret_at(2000) / trace.average_regret_at(200));
            lin_ratios.push(trace.cumulative_at(2000) / trace.cumulative_at(1000));
        }
        let mean: f64 = ratios.iter().sum::<f64>() / 10.0;
        let lin: f64 = lin_ratios.iter().sum::<f64>() / 10.0;
        println!("{kind:?}: avg-regret(2000)/avg-regret(200) = {mean:.3}   R2n/Rn = {lin:.3}");
    }
    // Per-client variant decay.
    let pc_cfg = RegretConfig {
        m: 5,
        select: 2,
        per_client: true,
        ..cfg
    };
    let mut pc_ratios = Vec::new();
    for seed in 0..10u64 {
        let env =
            SyntheticEnv::new_per_client(&pc_cfg, &mut SimRng::seed_from_u64(900 + seed)).unwrap();
        let trace = run_regret(&env, StrategyKind::FlashTs, 10_000, 1.0, 0.05, true, seed).unwrap();
        pc_ratios.push(trace.average_regret_at(10_000) / trace.average_regret_at(1000));
    }
    let mean: f64 = pc_ratios.iter().sum::<f64>() / 10.0;
    println!("per-client TS: avg-regret(10000)/avg-regret(1000) = {mean:.3}");

    // Bound-fit surrogate: c estimated at n=250, checked at larger n.
    for kind in [StrategyKind::FlashTs, StrategyKind::Linucb] {
        let mut worst: f64 = 0.0;
        for seed in 0..10u64 {
            let env = SyntheticEnv::new_shared(
                &cfg,
                &mut stream_rng(seed, Stream::Env, 1_000_000, 0),
            )
            .unwrap();
            let trace = run_regret(&env, kind, 2000, 1.0, 0.05, false, seed).unwrap();
            let shape = |n: usize| (n as f64).sqrt() * (n as f64).ln();
            let c = trace.cumulative_at(250) / shape(250);
            for n in [500usize, 1000, 2000] {
                let excess = trace.cumulative_at(n) / (c * shape(n));
                worst = worst.max(excess);
            }
        }
        println!("{kind:?}: worst R_n / (c·√n·log n) = {worst:.3}");
    }
}
