//! Exact minimum-energy search for cross networks.
//!
//! The search space is built from a structural fact about optima on a
//! cross: besides the source and the four intersection-bridging nodes, at
//! most three nodes transmit beyond their next hop, and every other node
//! transmits either to its next hop exactly or not at all. The search
//! therefore enumerates
//!
//! * every choice of up to three "free" nodes from the ordinary pool,
//! * a target node per special node (its range becomes the distance to
//!   that target; the node itself encodes range zero), plus one target for
//!   the source,
//! * every order in which the five segments are swept.
//!
//! A sweep walks each segment first-to-last, aborting when it meets an
//! uncovered node; ordinary nodes transmit to their next hop only when it
//! is still uncovered. The cheapest sweep that covers everyone wins.
//!
//! Ties are broken toward the lexicographically earliest (choice, target
//! tuple, order) triple, and both the dominance pruning and the parallel
//! partitioning preserve that choice bit-for-bit: pruning only discards
//! states whose partial cost already exceeds the incumbent strictly, and
//! partial costs only grow along the (fixed) accumulation chain.
//!
//! When the source sits exactly on the intersection, the four bridging
//! roles collapse into the source; the same engine then runs with a
//! four-entry target tuple over the full non-source pool, cutting the
//! space by a factor of `N^4`.

use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use rayon::prelude::*;

use crate::assignment::RangeAssignment;
use crate::cross::{CrossNetwork, SegmentLabel};
use crate::error::{Error, Result};
use crate::geom::{covered, pow_alpha};

/// Default cap on evaluated segment sweeps.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

/// Hard node-count limit of the bitmask engine.
pub const MAX_SEARCH_NODES: usize = 64;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Skip states whose partial cost already exceeds the incumbent.
    /// Result-identical to the full enumeration.
    pub prune: bool,
    /// Partition the target space across threads. Result-identical to the
    /// sequential search.
    pub parallel: bool,
    /// Maximum number of segment sweeps before giving up with a
    /// checkpoint.
    pub budget: u64,
    /// Continue a previously interrupted sequential search.
    pub resume: Option<Checkpoint>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            prune: true,
            parallel: false,
            budget: DEFAULT_BUDGET,
            resume: None,
        }
    }
}

/// Where an interrupted search stopped and what it had found so far.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub choice_index: usize,
    pub target_index: u64,
    pub steps: u64,
    pub best: Option<BestCandidate>,
}

#[derive(Clone, Debug)]
pub struct BestCandidate {
    pub cost: f64,
    pub choice_index: usize,
    pub target_index: u64,
    pub sweep_index: u16,
}

#[derive(Clone, Debug)]
pub struct OptimalOutcome {
    pub assignment: RangeAssignment,
    /// Segment sweeps actually evaluated.
    pub sweeps: u64,
}

/// Exact optimum for a general cross network.
pub fn optimal_assignment(net: &CrossNetwork, alpha: f64) -> Result<RangeAssignment> {
    optimal_assignment_with(net, alpha, &SearchOptions::default()).map(|o| o.assignment)
}

pub fn optimal_assignment_with(
    net: &CrossNetwork,
    alpha: f64,
    opts: &SearchOptions,
) -> Result<OptimalOutcome> {
    let engine = Engine::new(net, alpha)?;
    let pool = net.n_hat().to_vec();
    let tail: Vec<usize> = net
        .diamond()
        .iter()
        .copied()
        .filter(|&id| id != net.source())
        .collect();
    engine.search(&pool, &tail, opts)
}

/// Exact optimum for the source-at-intersection special case; the target
/// tuple shrinks to (source, three free nodes).
pub fn optimal_assignment_source_at_intersection(
    net: &CrossNetwork,
    alpha: f64,
) -> Result<RangeAssignment> {
    optimal_assignment_source_at_intersection_with(net, alpha, &SearchOptions::default())
        .map(|o| o.assignment)
}

pub fn optimal_assignment_source_at_intersection_with(
    net: &CrossNetwork,
    alpha: f64,
    opts: &SearchOptions,
) -> Result<OptimalOutcome> {
    if !net.is_source_at_intersection() {
        return Err(Error::SourceNotAtIntersection);
    }
    let engine = Engine::new(net, alpha)?;
    let pool: Vec<usize> = (0..net.node_count()).filter(|&id| id != net.source()).collect();
    engine.search(&pool, &[], opts)
}

struct Engine<'a> {
    net: &'a CrossNetwork,
    alpha: f64,
    n: usize,
    source: usize,
    full_mask: u64,
    /// `pow_d[i*n + j] = d(i, j)^alpha`
    pow_d: Vec<f64>,
    /// `cover[i*n + j]` = nodes within `d(i, j)` of `i`
    cover: Vec<u64>,
    next_of: Vec<Option<u32>>,
    hop_pow: Vec<f64>,
    hop_mask: Vec<u64>,
    /// Deduplicated segment sweeps with their original order index.
    sweeps: Vec<(Vec<u32>, u16)>,
}

#[derive(Clone, Debug)]
struct Candidate {
    cost: f64,
    choice_index: usize,
    target_index: u64,
    sweep_index: u16,
}

impl Candidate {
    fn order_key(&self) -> (usize, u64, u16) {
        (self.choice_index, self.target_index, self.sweep_index)
    }

    fn beats(&self, other: &Option<Candidate>) -> bool {
        match other {
            None => true,
            Some(o) => self.cost < o.cost,
        }
    }
}

enum BlockEnd {
    Exhausted,
    BudgetHit { at_digits: Vec<usize> },
}

impl<'a> Engine<'a> {
    fn new(net: &'a CrossNetwork, alpha: f64) -> Result<Self> {
        let n = net.node_count();
        if n > MAX_SEARCH_NODES {
            return Err(Error::TooLarge {
                n,
                cap: MAX_SEARCH_NODES,
            });
        }
        let mut pow_d = vec![0.0f64; n * n];
        let mut cover = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let r = net.dist(i, j);
                pow_d[i * n + j] = pow_alpha(r, alpha);
                let mut mask = 0u64;
                for u in 0..n {
                    if covered(r, net.dist(i, u)) {
                        mask |= 1u64 << u;
                    }
                }
                cover[i * n + j] = mask;
            }
        }
        let next_of: Vec<Option<u32>> = (0..n).map(|i| net.next_adjacent(i).map(|x| x as u32)).collect();
        let hop_pow: Vec<f64> = (0..n).map(|i| pow_alpha(net.hop_distance(i), alpha)).collect();
        let hop_mask: Vec<u64> = (0..n)
            .map(|i| match net.next_adjacent(i) {
                Some(nx) => cover[i * n + nx],
                None => 0,
            })
            .collect();

        let mut sweeps: Vec<(Vec<u32>, u16)> = Vec::new();
        for (idx, perm) in (0..5usize).permutations(5).enumerate() {
            let mut order = Vec::with_capacity(n);
            for seg in perm {
                for &id in net.segment_nodes(SegmentLabel::from_index(seg)) {
                    order.push(id as u32);
                }
            }
            if !sweeps.iter().any(|(o, _)| *o == order) {
                sweeps.push((order, idx as u16));
            }
        }

        let full_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Self {
            net,
            alpha,
            n,
            source: net.source(),
            full_mask,
            pow_d,
            cover,
            next_of,
            hop_pow,
            hop_mask,
            sweeps,
        })
    }

    /// One segment sweep. Returns the total cost if every node ends up
    /// covered and the running cost never exceeds `bound`.
    #[inline]
    fn sweep(
        &self,
        order: &[u32],
        target_of: &[i16],
        targets: &[usize],
        start_tags: u64,
        prefix_cost: f64,
        bound: f64,
    ) -> Option<f64> {
        let mut tags = start_tags;
        let mut cost = prefix_cost;
        for &nd in order {
            let nd = nd as usize;
            if tags & (1u64 << nd) == 0 {
                return None;
            }
            let j = target_of[nd];
            if j >= 0 {
                tags |= self.cover[nd * self.n + targets[j as usize]];
            } else if let Some(nx) = self.next_of[nd] {
                if tags & (1u64 << nx) == 0 {
                    cost += self.hop_pow[nd];
                    if cost > bound {
                        return None;
                    }
                    tags |= self.hop_mask[nd];
                }
            }
        }
        debug_assert_eq!(tags & self.full_mask, self.full_mask);
        Some(cost)
    }

    /// Replay the winning sweep and materialize the per-node ranges.
    fn materialize(&self, specials: &[usize], targets: &[usize], sweep_index: u16) -> Vec<f64> {
        let (order, _) = self
            .sweeps
            .iter()
            .find(|(_, idx)| *idx == sweep_index)
            .expect("winning sweep exists");
        let mut target_of = vec![-1i16; self.n];
        for (j, &sp) in specials.iter().enumerate() {
            target_of[sp] = (j + 1) as i16;
        }
        let mut ranges = vec![0.0f64; self.n];
        ranges[self.source] = self.net.dist(self.source, targets[0]);
        let mut tags = (1u64 << self.source) | self.cover[self.source * self.n + targets[0]];
        for &nd in order {
            let nd = nd as usize;
            debug_assert_ne!(tags & (1u64 << nd), 0);
            let j = target_of[nd];
            if j >= 0 {
                let tgt = targets[j as usize];
                ranges[nd] = self.net.dist(nd, tgt);
                tags |= self.cover[nd * self.n + tgt];
            } else if let Some(nx) = self.next_of[nd] {
                if tags & (1u64 << nx) == 0 {
                    ranges[nd] = self.net.hop_distance(nd);
                    tags |= self.hop_mask[nd];
                }
            }
        }
        ranges
    }

    /// Enumerate all target tuples for one (choice, first-target) block.
    /// `digits[0]` is fixed to `c0`; levels `1..len` run through their
    /// odometer. Returns the block's best candidate and how it ended.
    #[allow(clippy::too_many_arguments)]
    fn run_block(
        &self,
        choice_index: usize,
        specials: &[usize],
        target_of: &[i16],
        c0: usize,
        start_digits: Option<&[usize]>,
        bound_bits: &AtomicU64,
        steps: &AtomicU64,
        budget: u64,
        prune: bool,
    ) -> (Option<Candidate>, BlockEnd) {
        let n = self.n;
        let len = 1 + specials.len();
        let mut digits = vec![0usize; len];
        digits[0] = c0;
        if let Some(sd) = start_digits {
            digits.copy_from_slice(sd);
            debug_assert_eq!(digits[0], c0);
        }
        let mut prefix = vec![0.0f64; len + 1];
        prefix[1] = self.pow_d[self.source * n + c0];
        let s_tags = (1u64 << self.source) | self.cover[self.source * n + c0];

        // Everything a sweep could ever tag besides the special targets:
        // the source's disc and each ordinary node's next-hop disc. A leaf
        // whose total union misses a node aborts under every segment
        // order, so it can be skipped outright.
        let mut fixed_union = s_tags;
        for nd in 0..n {
            if nd != self.source && target_of[nd] < 0 {
                fixed_union |= self.hop_mask[nd];
            }
        }
        let mut unions = vec![0u64; len + 1];
        unions[1] = fixed_union;

        let mut lvl = 1usize;
        let mut best: Option<Candidate> = None;

        loop {
            let mut block_done = false;
            while lvl < len {
                if digits[lvl] >= n {
                    if lvl == 1 {
                        block_done = true;
                        break;
                    }
                    lvl -= 1;
                    digits[lvl] += 1;
                    for d in digits[lvl + 1..].iter_mut() {
                        *d = 0;
                    }
                    continue;
                }
                let subj = specials[lvl - 1];
                let p = prefix[lvl] + self.pow_d[subj * n + digits[lvl]];
                if prune && p > f64::from_bits(bound_bits.load(Ordering::Relaxed)) {
                    digits[lvl] += 1;
                    for d in digits[lvl + 1..].iter_mut() {
                        *d = 0;
                    }
                    continue;
                }
                prefix[lvl + 1] = p;
                unions[lvl + 1] = unions[lvl] | self.cover[subj * n + digits[lvl]];
                lvl += 1;
            }
            if block_done || len == 1 {
                // len == 1 means a lone source target: one leaf only
                if len == 1 {
                    let end = self.leaf(
                        choice_index,
                        target_of,
                        &digits,
                        prefix[1],
                        s_tags,
                        bound_bits,
                        steps,
                        budget,
                        prune,
                        &mut best,
                    );
                    if let Some(end) = end {
                        return (best, end);
                    }
                }
                return (best, BlockEnd::Exhausted);
            }
            if !prune || unions[len] & self.full_mask == self.full_mask {
                let end = self.leaf(
                    choice_index,
                    target_of,
                    &digits,
                    prefix[len],
                    s_tags,
                    bound_bits,
                    steps,
                    budget,
                    prune,
                    &mut best,
                );
                if let Some(end) = end {
                    return (best, end);
                }
            }
            digits[len - 1] += 1;
            lvl = len - 1;
        }
    }

    /// Evaluate every segment sweep at one fully specified target tuple.
    /// Returns `Some(BudgetHit)` when the step budget ran out before this
    /// leaf.
    #[allow(clippy::too_many_arguments)]
    fn leaf(
        &self,
        choice_index: usize,
        target_of: &[i16],
        digits: &[usize],
        leaf_cost: f64,
        s_tags: u64,
        bound_bits: &AtomicU64,
        steps: &AtomicU64,
        budget: u64,
        prune: bool,
        best: &mut Option<Candidate>,
    ) -> Option<BlockEnd> {
        let used = steps.fetch_add(self.sweeps.len() as u64, Ordering::Relaxed);
        if used >= budget {
            steps.fetch_sub(self.sweeps.len() as u64, Ordering::Relaxed);
            return Some(BlockEnd::BudgetHit {
                at_digits: digits.to_vec(),
            });
        }
        for (order, sweep_index) in &self.sweeps {
            let bound = if prune {
                f64::from_bits(bound_bits.load(Ordering::Relaxed))
            } else {
                f64::INFINITY
            };
            if let Some(cost) = self.sweep(order, target_of, digits, s_tags, leaf_cost, bound) {
                let cand = Candidate {
                    cost,
                    choice_index,
                    target_index: encode_digits(digits, self.n),
                    sweep_index: *sweep_index,
                };
                if cand.beats(best) {
                    relax_bound(bound_bits, cost);
                    *best = Some(cand);
                }
            }
        }
        None
    }

    fn search(&self, pool: &[usize], tail: &[usize], opts: &SearchOptions) -> Result<OptimalOutcome> {
        let n = self.n;
        if n == 1 {
            return Ok(OptimalOutcome {
                assignment: RangeAssignment::new(vec![0.0], self.alpha)?,
                sweeps: 0,
            });
        }

        let choose_k = pool.len().min(3);
        let choices: Vec<Vec<usize>> = if choose_k == 0 {
            vec![Vec::new()]
        } else {
            pool.iter().copied().combinations(choose_k).collect()
        };

        let steps = AtomicU64::new(opts.resume.as_ref().map_or(0, |c| c.steps));
        let bound_bits = AtomicU64::new(f64::INFINITY.to_bits());
        let mut best: Option<Candidate> = opts.resume.as_ref().and_then(|c| {
            c.best.as_ref().map(|b| Candidate {
                cost: b.cost,
                choice_index: b.choice_index,
                target_index: b.target_index,
                sweep_index: b.sweep_index,
            })
        });
        if let Some(b) = &best {
            relax_bound(&bound_bits, b.cost);
        }

        let (start_choice, start_target) = opts
            .resume
            .as_ref()
            .map_or((0usize, 0u64), |c| (c.choice_index, c.target_index));

        // Tasks are (choice, first target) blocks in enumeration order.
        let mut tasks: Vec<(usize, usize, Option<Vec<usize>>)> = Vec::new();
        for (ci, choice) in choices.iter().enumerate().skip(start_choice) {
            let len = 1 + choice.len() + tail.len();
            for c0 in 0..n {
                if c0 == self.source {
                    continue;
                }
                if ci == start_choice {
                    let start_digits = decode_digits(start_target, len, n);
                    if c0 < start_digits[0] {
                        continue;
                    }
                    if c0 == start_digits[0] {
                        tasks.push((ci, c0, Some(start_digits)));
                        continue;
                    }
                }
                tasks.push((ci, c0, None));
            }
        }

        let run_task = |(ci, c0, start_digits): &(usize, usize, Option<Vec<usize>>)| {
            let choice = &choices[*ci];
            let mut specials: Vec<usize> = choice.clone();
            specials.extend_from_slice(tail);
            let mut target_of = vec![-1i16; n];
            for (j, &sp) in specials.iter().enumerate() {
                target_of[sp] = (j + 1) as i16;
            }
            let (cand, end) = self.run_block(
                *ci,
                &specials,
                &target_of,
                *c0,
                start_digits.as_deref(),
                &bound_bits,
                &steps,
                opts.budget,
                opts.prune,
            );
            (cand, end, *ci)
        };

        let outcomes: Vec<(Option<Candidate>, BlockEnd, usize)> = if opts.parallel {
            tasks.par_iter().map(run_task).collect()
        } else {
            let mut v = Vec::with_capacity(tasks.len());
            for t in &tasks {
                let out = run_task(t);
                let hit_budget = matches!(out.1, BlockEnd::BudgetHit { .. });
                v.push(out);
                if hit_budget {
                    break;
                }
            }
            v
        };

        let mut budget_hit: Option<(usize, Vec<usize>)> = None;
        for (cand, end, ci) in outcomes {
            if let Some(c) = cand {
                if c.beats(&best) || (best.as_ref().is_some_and(|b| b.cost == c.cost && c.order_key() < b.order_key())) {
                    best = Some(c);
                }
            }
            if let BlockEnd::BudgetHit { at_digits } = end {
                if budget_hit.is_none() {
                    budget_hit = Some((ci, at_digits));
                }
            }
        }

        let total_steps = steps.load(Ordering::Relaxed);
        if let Some((ci, at_digits)) = budget_hit {
            let checkpoint = if opts.parallel {
                None
            } else {
                Some(Box::new(Checkpoint {
                    choice_index: ci,
                    target_index: encode_digits(&at_digits, n),
                    steps: total_steps,
                    best: best.map(|b| BestCandidate {
                        cost: b.cost,
                        choice_index: b.choice_index,
                        target_index: b.target_index,
                        sweep_index: b.sweep_index,
                    }),
                }))
            };
            return Err(Error::BudgetExceeded {
                steps: total_steps,
                checkpoint,
            });
        }

        let best = best.expect("a one-hop star target tuple is always feasible");
        let choice = &choices[best.choice_index];
        let mut specials: Vec<usize> = choice.clone();
        specials.extend_from_slice(tail);
        let digits = decode_digits(best.target_index, 1 + specials.len(), n);
        let ranges = self.materialize(&specials, &digits, best.sweep_index);
        let assignment = RangeAssignment::new(ranges, self.alpha)?;
        debug_assert!(
            crate::assignment::reaches_all(self.net.positions(), self.source, &assignment),
            "optimal search produced a non-delivering assignment"
        );
        debug_assert!((assignment.cost() - best.cost).abs() <= 1e-9 * best.cost.max(1.0));
        Ok(OptimalOutcome {
            assignment,
            sweeps: total_steps,
        })
    }
}

fn encode_digits(digits: &[usize], base: usize) -> u64 {
    let mut v = 0u64;
    for &d in digits {
        v = v * base as u64 + d as u64;
    }
    v
}

fn decode_digits(mut index: u64, len: usize, base: usize) -> Vec<usize> {
    let mut digits = vec![0usize; len];
    for j in (0..len).rev() {
        digits[j] = (index % base as u64) as usize;
        index /= base as u64;
    }
    digits
}

fn relax_bound(bound: &AtomicU64, cost: f64) {
    let bits = cost.to_bits();
    let mut cur = bound.load(Ordering::Relaxed);
    while bits < cur {
        match bound.compare_exchange_weak(cur, bits, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => break,
            Err(c) => cur = c,
        }
    }
}
