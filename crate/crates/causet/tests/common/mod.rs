//! Seeded generators shared by the integration suites. Everything is driven
//! by a ChaCha stream so failures reproduce from the printed seed alone.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use causet::biorder::Biorder;
use causet::utility::ratio;
use causet::{DistributedSystem, ProcessChain, Rational, StrictPoset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random acyclic execution. Every event gets a global timestamp that
/// grows along each chain, and messages only run from earlier to strictly
/// later timestamps, so no cycle can close. Within a channel each sender and
/// receiver is used at most once; crossing deliveries are allowed.
///
/// `line_only` restricts channels to consecutive process pairs (forward), so
/// the result always has line communication.
pub fn random_system(
    rng: &mut ChaCha8Rng,
    max_procs: usize,
    max_events: usize,
    line_only: bool,
) -> DistributedSystem {
    let n = rng.gen_range(1..=max_procs);
    let min_len = if line_only { 1 } else { 0 };
    let lens: Vec<usize> = (0..n).map(|_| rng.gen_range(min_len..=max_events)).collect();
    let times: Vec<Vec<u32>> = lens
        .iter()
        .map(|&len| {
            let mut t: Vec<u32> = (0..len).map(|_| rng.gen_range(0..1_000)).collect();
            t.sort_unstable();
            t
        })
        .collect();

    let mut sys = DistributedSystem::new();
    for (p, &len) in lens.iter().enumerate() {
        let labels = (0..len).map(|k| format!("p{p}e{k}"));
        sys.add_process(ProcessChain::with_labels(format!("P{p}"), labels))
            .unwrap();
    }

    let channels: Vec<(usize, usize)> = if line_only {
        (1..n).map(|j| (j - 1, j)).collect()
    } else {
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .collect();
        all.shuffle(rng);
        let keep = rng.gen_range(0..=all.len());
        all.truncate(keep);
        all.sort_unstable();
        all
    };

    for (i, j) in channels {
        let mut used_senders = BTreeSet::new();
        for r in 0..lens[j] {
            if !rng.gen_bool(0.4) {
                continue;
            }
            let candidates: Vec<usize> = (0..lens[i])
                .filter(|&s| !used_senders.contains(&s) && times[i][s] < times[j][r])
                .collect();
            if let Some(&s) = candidates.choose(rng) {
                used_senders.insert(s);
                sys.add_message(
                    sys.processes()[i].event_id(s).unwrap(),
                    sys.processes()[j].event_id(r).unwrap(),
                )
                .unwrap();
            }
        }
    }
    sys
}

/// A random poset on up to `max_n` elements: random edges over a fixed
/// element order (hence acyclic), closed transitively on construction.
pub fn random_poset(rng: &mut ChaCha8Rng, max_n: usize) -> StrictPoset<String> {
    let n = rng.gen_range(0..=max_n);
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let density = rng.gen_range(0.0..0.8);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    StrictPoset::from_pairs(labels, pairs).expect("forward edges cannot cycle")
}

/// A random relation between two chains with the shape every induced
/// relation has: each domain row is an up-set of the codomain, and rows
/// shrink as the domain index grows.
pub fn staircase_biorder(rng: &mut ChaCha8Rng) -> Biorder<String> {
    let m = rng.gen_range(1..=6);
    let mp = rng.gen_range(1..=6);
    let domain: Vec<String> = (0..m).map(|i| format!("a{i}")).collect();
    let codomain: Vec<String> = (0..mp).map(|j| format!("x{j}")).collect();
    let mut pairs = BTreeSet::new();
    let mut threshold = rng.gen_range(0..=mp);
    for i in 0..m {
        threshold = rng.gen_range(threshold..=mp);
        for j in threshold..mp {
            pairs.insert((i, j));
        }
    }
    Biorder::from_index_pairs(domain, codomain, pairs).expect("indices are in range")
}

/// `n` strictly increasing rationals inside (0,1).
pub fn random_increasing(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let denom = (2 * n as i64 + 2) + rng.gen_range(0..20);
    let mut numerators = BTreeSet::new();
    while numerators.len() < n {
        numerators.insert(rng.gen_range(1..denom));
    }
    numerators.into_iter().map(|k| ratio(k, denom)).collect()
}
