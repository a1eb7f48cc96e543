//! Fixed benchmark instances.
//!
//! Every instance is built deterministically so timings are comparable
//! across runs and machines.

use ncl_core::hword::{HGoal, HRelation, HWordInstance};
use ncl_core::random::{random_reconf, rng, ReconfInstance};
use ncl_core::reduce::{
    clique_to_c2e, hword_to_ncl, partition_to_bounded_ncl, partition_to_cgs, CliqueInstance,
    HWordOptions, PartitionGoal, PartitionInstance, ReductionOutput,
};

/// Partition instance `{1, 2, ..., n}` padded to an even sum.
pub fn partition(n: u64) -> PartitionInstance {
    let mut xs: Vec<u64> = (1..=n).collect();
    if xs.iter().sum::<u64>() % 2 == 1 {
        xs.push(1);
    }
    PartitionInstance::new(xs).expect("positive values with an even sum")
}

pub fn partition_cgs(n: u64) -> ReductionOutput {
    partition_to_cgs(&partition(n)).expect("valid instance")
}

pub fn partition_bounded(n: u64, goal: PartitionGoal) -> ReductionOutput {
    partition_to_bounded_ncl(&partition(n), goal).expect("valid instance")
}

/// The cycle `C_n` with a triangle chord at 0, asked for a 3-clique.
pub fn clique_c2e(n: usize) -> ReductionOutput {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.push((0, 2));
    clique_to_c2e(&CliqueInstance::new(n, edges, 3).expect("valid instance")).expect("reduction")
}

/// `{ab, ba, aa}` swap of alternating words of length `n`.
pub fn hword(n: usize, opts: HWordOptions) -> ReductionOutput {
    let h = HRelation::new(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a")]).expect("relation");
    let start: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let goal: Vec<usize> = (0..n).map(|i| (i + 1) % 2).collect();
    hword_to_ncl(
        &HWordInstance {
            h,
            start,
            goal: HGoal::Word(goal),
        },
        opts,
    )
    .expect("reduction")
}

/// Seeded random reconfiguration instance.
pub fn reconf(seed: u64, n: usize, m: usize) -> ReconfInstance {
    random_reconf(&mut rng(seed), n, m, 3, m / 2)
}
