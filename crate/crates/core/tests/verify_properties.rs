use lotto_core::combin::next_colex;
use lotto_core::construct::{greedy_cover, GreedyConfig};
use lotto_core::rng::SplitMix64;
use lotto_core::verify::{verify, VerifyConfig};
use lotto_core::{Design, DesignKind};

/// Uncovered targets by direct double loop, in colex order.
fn naive_uncovered(design: &Design) -> Vec<Vec<u32>> {
    let (n, size, t, need_inside) = match design.kind() {
        DesignKind::Covering { n, t, .. } => (n, t, t, true),
        DesignKind::Lottery { n, p, t, .. } => (n, p, t, false),
    };
    let mut target: Vec<u32> = (1..=size).collect();
    let mut missing = Vec::new();
    loop {
        let hit = design.blocks().any(|b| {
            let common = target.iter().filter(|x| b.contains(&(**x as u8))).count() as u32;
            if need_inside {
                common == size
            } else {
                common >= t
            }
        });
        if !hit {
            missing.push(target.clone());
        }
        if !next_colex(&mut target, n) {
            return missing;
        }
    }
}

fn random_block(rng: &mut SplitMix64, n: u32, k: u32) -> Vec<u32> {
    let mut all: Vec<u32> = (1..=n).collect();
    for i in 0..k as usize {
        let j = i + rng.below((n as usize - i) as u64) as usize;
        all.swap(i, j);
    }
    all.truncate(k as usize);
    all
}

fn random_design(rng: &mut SplitMix64, lottery: bool) -> Design {
    let n = 3 + rng.below(10) as u32;
    let k = 1 + rng.below(n as u64) as u32;
    let kind = if lottery {
        let p = 1 + rng.below(n as u64) as u32;
        let t = 1 + rng.below(k.min(p) as u64) as u32;
        DesignKind::lottery(n, k, p, t).unwrap()
    } else {
        let t = 1 + rng.below(k as u64) as u32;
        DesignKind::covering(n, k, t).unwrap()
    };
    let blocks = 1 + rng.below(25);
    let blocks: Vec<Vec<u32>> = (0..blocks).map(|_| random_block(rng, n, k)).collect();
    Design::from_blocks(kind, blocks).unwrap()
}

#[test]
fn bitset_verifiers_match_the_naive_oracle() {
    let mut rng = SplitMix64::new(0x5eed);
    let cfg = VerifyConfig {
        witness_cap: usize::MAX,
        workers: 1,
        ..VerifyConfig::default()
    };
    for i in 0..2400 {
        let design = random_design(&mut rng, i % 2 == 1);
        let cfg = VerifyConfig {
            workers: if i % 7 == 0 { 2 } else { 1 },
            ..cfg.clone()
        };
        let report = verify(&design, &cfg).unwrap();
        let expected = naive_uncovered(&design);
        assert_eq!(report.uncovered, expected.len() as u64, "{design:?}");
        assert_eq!(report.witnesses, expected, "{design:?}");
        assert_eq!(report.covered + report.uncovered, report.total_targets);
    }
}

/// Drops blocks whose removal keeps the design valid, last first.
fn prune(mut design: Design) -> Design {
    let cfg = VerifyConfig { workers: 1, ..VerifyConfig::default() };
    let mut i = design.block_count();
    while i > 0 {
        i -= 1;
        let smaller = design.without_block(i).unwrap();
        if verify(&smaller, &cfg).unwrap().is_valid() {
            design = smaller;
        }
    }
    design
}

#[test]
fn removing_any_block_of_a_minimal_cover_leaves_a_witness() {
    let cfg = VerifyConfig { workers: 1, ..VerifyConfig::default() };
    for (n, k, t) in [(7, 3, 2), (10, 6, 5), (9, 4, 3), (11, 5, 2)] {
        let cover = prune(greedy_cover(n, k, t, &GreedyConfig::default()).unwrap());
        assert!(verify(&cover, &cfg).unwrap().is_valid());
        for i in 0..cover.block_count() {
            let removed: Vec<u32> = cover.block(i).iter().map(|&x| x as u32).collect();
            let report = verify(&cover.without_block(i).unwrap(), &cfg).unwrap();
            assert!(report.uncovered >= 1, "({n},{k},{t}) block {i}");
            let w = &report.witnesses[0];
            assert!(w.iter().all(|x| removed.contains(x)), "witness {w:?} outside {removed:?}");
        }
    }
}

#[test]
fn lottery_mutations_match_the_oracle() {
    let cfg = VerifyConfig { witness_cap: usize::MAX, workers: 1, ..VerifyConfig::default() };
    // A covering (10, 6, 5) design is also an LD(10, 6, 6, 5).
    let cover = greedy_cover(10, 6, 5, &GreedyConfig::default()).unwrap();
    let ld = cover.reinterpret(DesignKind::lottery(10, 6, 6, 5).unwrap()).unwrap();
    assert!(verify(&ld, &cfg).unwrap().is_valid());
    for i in (0..ld.block_count()).step_by(3) {
        let smaller = ld.without_block(i).unwrap();
        let report = verify(&smaller, &cfg).unwrap();
        assert_eq!(report.witnesses, naive_uncovered(&smaller));
    }
}
