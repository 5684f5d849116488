use flashsim::config::ExperimentConfig;
use flashsim::orchestrator::{run_experiment, RoundRecord, Simulation};
use flashsim::strategy::StrategyKind;

fn bench_config(seed: u64, strategy: StrategyKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.seed = seed;
    cfg.rounds = 300;
    cfg.strategy = strategy;
    cfg.clients.count = 50;
    cfg.clients.select_fraction = 0.2;
    cfg.partition.skew_fraction = 0.3;
    cfg.noise.alpha_beta = 15.0;
    cfg.latency.lambda_t = 10.0;

    // knobs under probe
    let get = |name: &str, default: f64| -> f64 {
        std::env::var(name).ok().and_then(|v| v.parse().ok()).unwrap_or(default)
    };
    cfg.dataset.samples = get("SAMPLES", 5000.0) as usize;
    cfg.dataset.center_spread = get("SPREAD", 3.0);
    cfg.dataset.input_dim = get("DIM", 8.0) as usize;
    cfg.optimizer.learning_rate = get("LR", 0.05);
    cfg.optimizer.epochs = get("EPOCHS", 5.0) as usize;
    cfg.model.hidden = get("HIDDEN", 0.0) as usize;
    cfg.loss.beta = get("BETA", 4.0);
    cfg
}

fn selection_quality(cfg: &ExperimentConfig, records: &[RoundRecord]) -> (f64, f64) {
    // Mean noise level and skewed-fraction of the selected clients over the
    // last 100 rounds.
    let sim = Simulation::from_config(cfg).unwrap();
    let clients = sim.clients();
    let mut noise = 0.0;
    let mut skewed = 0.0;
    let mut count = 0.0;
    for r in records.iter().rev().take(100) {
        for &i in &r.selected {
            noise += clients[i].noise_level;
            skewed += clients[i].dominant_class.is_some() as u8 as f64;
            count += 1.0;
        }
    }
    (noise / count, skewed / count)
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut flash_time_wins = 0;
    let mut flash_acc_wins = 0;
    for seed in 0..seeds {
        let rcfg = bench_config(seed, StrategyKind::Random);
        let fcfg = bench_config(seed, StrategyKind::FlashTs);
        let random = run_experiment(&rcfg).unwrap();
        let flash = run_experiment(&fcfg).unwrap();

        let target = random.records.iter().map(|r| r.test_acc).fold(0.0f64, f64::max);
        let time_to = |records: &[RoundRecord]| {
            let mut best = 0.0f64;
            for r in records {
                best = best.max(r.test_acc);
                if best >= target {
                    return Some(r.cumulative_time);
                }
            }
            None
        };
        let t_random = time_to(&random.records);
        let t_flash = time_to(&flash.records);
        let time_win = match (t_flash, t_random) {
            (Some(f), Some(r)) => f < r,
            (Some(_), None) => true,
            _ => false,
        };
        let acc_win = flash.summary.best_test_accuracy >= random.summary.best_test_accuracy;
        flash_time_wins += time_win as u32;
        flash_acc_wins += acc_win as u32;
        let (rn, rs) = selection_quality(&rcfg, &random.records);
        let (fn_, fs) = selection_quality(&fcfg, &flash.records);
        println!(
            "seed {seed}: target={target:.4} t_r={:?} t_f={:?} twin={time_win} | bestR={:.4} bestF={:.4} awin={acc_win} | sel-noise R={rn:.3} F={fn_:.3} sel-skew R={rs:.2} F={fs:.2}",
            t_random.map(|v| v.round()),
            t_flash.map(|v| v.round()),
            random.summary.best_test_accuracy,
            flash.summary.best_test_accuracy,
        );
    }
    println!("time wins: {flash_time_wins}/{seeds}  acc wins: {flash_acc_wins}/{seeds}");
}
