//! Seeded generators shared by the integration suites: small random
//! sequence databases inside the oracle guard, matching mining configs,
//! and windowed databases derived from the synthetic generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use tempo_miner::model::{
    EventId, EventInstance, Interval, MiningConfig, PruneLevel, SequenceDatabase,
    TemporalSequence,
};
use tempo_miner::synth::{generate, CorrelationGroup, GeneratorSpec};
use tempo_miner::transform::{split_sequences, SplitConfig, SymbolicDatabase};

/// A random sequence database within the oracle guard: up to 5 distinct
/// events, up to 6 sequences, up to 8 instances per sequence, instance
/// durations of at least 3 grid units (safe for epsilon up to 1).
pub fn random_db(seed: u64) -> SequenceDatabase {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15));
    let pool: Vec<EventId> = [("A", "x"), ("A", "y"), ("A", "z"), ("B", "x"), ("B", "y")]
        .iter()
        .take(rng.random_range(3..=5))
        .map(|(v, s)| EventId::new(*v, *s))
        .collect();
    let n_seq = rng.random_range(2..=6);
    let window_len = rng.random_range(12..=20u64);
    let mut sequences = Vec::new();
    for id in 0..n_seq {
        let target = rng.random_range(0..=8usize);
        let mut instances: Vec<EventInstance> = Vec::new();
        let mut tries = 0;
        while instances.len() < target && tries < 60 {
            tries += 1;
            let ev = pool[rng.random_range(0..pool.len())].clone();
            let len = rng.random_range(3..=6u64);
            let start = rng.random_range(0..window_len.saturating_sub(len));
            let candidate = Interval::new(start, start + len).unwrap();
            // per-event instances must stay disjoint within a sequence
            let clashes = instances.iter().any(|i| {
                i.event == ev
                    && i.interval.start < candidate.end
                    && candidate.start < i.interval.end
            });
            if !clashes {
                instances.push(EventInstance::new(ev, candidate));
            }
        }
        instances.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        sequences.push(TemporalSequence {
            id,
            window: Interval::new(0, window_len).unwrap(),
            instances,
        });
    }
    SequenceDatabase::from_sequences(sequences).expect("generated database is valid")
}

/// A mining config drawn from ranges that exercise all gates.
pub fn random_cfg(seed: u64) -> MiningConfig {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_mul(0x2545f4914f6cdd1d));
    let epsilon = *pick(&mut rng, &[0u64, 0, 1]);
    MiningConfig {
        sigma: *pick(&mut rng, &[0.2, 0.3, 0.5, 0.7]),
        delta: *pick(&mut rng, &[0.3, 0.5, 0.8]),
        epsilon,
        min_overlap: 2 * epsilon + *pick(&mut rng, &[1u64, 1, 2]),
        t_max: *pick(&mut rng, &[6, 9, 14, 1000]),
        k_max: *pick(&mut rng, &[3, 3, 3, 4]),
        prune_level: PruneLevel::All,
    }
}

fn pick<'a, T>(rng: &mut ChaCha12Rng, options: &'a [T]) -> &'a T {
    &options[rng.random_range(0..options.len())]
}

/// A windowed database derived from the synthetic generator, sized to fit
/// the oracle guard (2 variables, small windows).
pub fn synth_db(seed: u64, epsilon: u64) -> (SymbolicDatabase, SequenceDatabase) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_mul(0x6c62272e07bb0142));
    let correlated = rng.random_range(0..3u8) > 0;
    let spec = GeneratorSpec {
        seed: rng.random(),
        n_vars: 2,
        grid_len: rng.random_range(24..=36),
        alphabet: vec![vec!["a".into(), "b".into()]],
        correlation_groups: if correlated {
            vec![CorrelationGroup {
                members: vec![0, 1],
                copy_probability: 0.8,
            }]
        } else {
            vec![]
        },
        run_length_distribution: vec![0.35],
    };
    let sym = generate(&spec).expect("spec is valid");
    let window = rng.random_range(5..=6);
    let db = split_sequences(&sym, &SplitConfig::new(window, 0).unwrap(), epsilon)
        .expect("split succeeds");
    (sym, db)
}
