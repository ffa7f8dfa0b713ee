//! Local search neighborhoods and the record-to-record travel loop.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Ctx, CvrpSolverConfig, Work};
use crate::model::{Instance, Solution, DEPOT};
use crate::Result;

/// Deltas this small are treated as zero; zero-delta moves are never taken.
const EPS: f64 = 1e-9;

/// Record-limited passes per uphill phase.
const UPHILL_PASSES: usize = 2;

#[derive(Clone, Copy)]
enum Accept {
    /// Strictly improving moves only.
    Improving,
    /// Improving moves, or uphill moves while the cost stays under `limit`.
    Rtr { limit: f64 },
}

impl Accept {
    #[inline]
    fn takes(&self, current_cost: f64, delta: f64) -> bool {
        match self {
            Accept::Improving => delta < -EPS,
            Accept::Rtr { limit } => {
                delta < -EPS || (delta > EPS && current_cost + delta <= *limit)
            }
        }
    }
}

/// First-improvement passes over relocate, swap, 2-opt and Or-opt until no
/// move improves. The output never costs more than the input and stays
/// feasible.
pub fn local_search_improve(
    instance: &Instance,
    solution: &Solution,
    config: &CvrpSolverConfig,
) -> Result<Solution> {
    config.validate()?;
    if instance.n() == 0 {
        return Ok(Solution::empty());
    }
    let ctx = Ctx::new(instance, config.neighbor_list_size);
    let mut work = Work::from_solution(&ctx, solution)?;
    improve(&ctx, &mut work, None);
    work.to_solution(instance)
}

/// Record-to-record travel from a feasible initial solution.
///
/// Alternates an uphill phase (any move kept while the cost stays within
/// `record * (1 + deviation)`) with descent to a local optimum, ejecting
/// and greedily reinserting a random neighbor cluster when the record goes
/// stale. Returns the best solution found; the record never worsens. Fixed
/// seed, identical output.
pub fn rtr_search(
    instance: &Instance,
    initial: &Solution,
    config: &CvrpSolverConfig,
) -> Result<Solution> {
    config.validate()?;
    if instance.n() == 0 {
        return Ok(Solution::empty());
    }
    let ctx = Ctx::new(instance, config.neighbor_list_size);
    let mut work = Work::from_solution(&ctx, initial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let deadline = config
        .time_limit_seconds
        .map(|s| Instant::now() + Duration::from_secs_f64(s));

    improve(&ctx, &mut work, deadline);
    let mut record = work.clone();
    let mut stale = 0u32;

    while stale < config.max_stale_iterations && !past(deadline) {
        let limit = record.cost * (1.0 + config.deviation);
        for _ in 0..UPHILL_PASSES {
            if past(deadline) || !pass(&ctx, &mut work, Accept::Rtr { limit }) {
                break;
            }
        }
        improve(&ctx, &mut work, deadline);

        if work.cost < record.cost - EPS {
            record = work.clone();
            stale = 0;
            continue;
        }
        stale += 1;
        if stale < config.max_stale_iterations && !past(deadline) {
            // Alternate between diversifying from the current solution and
            // re-centering on the record before ejecting.
            if stale % 2 == 0 {
                work = record.clone();
            }
            perturb(&ctx, &mut work, &mut rng);
            improve(&ctx, &mut work, deadline);
            if work.cost < record.cost - EPS {
                record = work.clone();
                stale = 0;
            }
        }
    }

    record.to_solution(instance)
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Descends to a local optimum; cost is resynchronized from scratch at the
/// end of the phase.
fn improve(ctx: &Ctx, work: &mut Work, deadline: Option<Instant>) {
    while pass(ctx, work, Accept::Improving) {
        if past(deadline) {
            break;
        }
    }
    work.cost = work.recompute_cost(ctx);
}

/// One scan over all customers and their neighbor lists; returns whether
/// any move was applied.
fn pass(ctx: &Ctx, work: &mut Work, accept: Accept) -> bool {
    let mut any = false;
    for i in 1..=ctx.n {
        if try_extract(ctx, work, i, accept) {
            any = true;
        }
        for nk in 0..ctx.neighbors[i].len() {
            let j = ctx.neighbors[i][nk];
            if try_relocate(ctx, work, i, j, accept) {
                any = true;
            }
            if try_swap(ctx, work, i, j, accept) {
                any = true;
            }
            if try_two_opt(ctx, work, i, j, accept) {
                any = true;
            }
            for len in 2..=3 {
                if try_oropt(ctx, work, i, j, len, accept) {
                    any = true;
                }
            }
        }
    }
    any
}

#[inline]
fn apply_delta(ctx: &Ctx, work: &mut Work, delta: f64) {
    work.cost += delta;
    debug_assert!(
        (work.recompute_cost(ctx) - work.cost).abs() <= 1e-9 * work.cost.abs().max(1.0),
        "incremental cost drifted from recomputation"
    );
}

/// Moves customer `i` into a fresh singleton route when that pays off.
fn try_extract(ctx: &Ctx, work: &mut Work, i: usize, accept: Accept) -> bool {
    let ri = work.cust_route[i];
    if work.routes[ri].len() <= 1 {
        return false;
    }
    let pi = work.cust_pos[i];
    let a = work.pred(ri, pi);
    let b = work.succ(ri, pi);
    let delta = ctx.d(a, b) - ctx.d(a, i) - ctx.d(i, b) + 2.0 * ctx.d(DEPOT, i);
    if !accept.takes(work.cost, delta) {
        return false;
    }
    work.routes[ri].remove(pi);
    work.loads[ri] -= ctx.demand[i];
    work.reindex(ri);
    work.routes.push(vec![i]);
    work.loads.push(ctx.demand[i]);
    let nr = work.routes.len() - 1;
    work.cust_route[i] = nr;
    work.cust_pos[i] = 0;
    apply_delta(ctx, work, delta);
    true
}

/// Relocates customer `i` right after or right before customer `j`.
fn try_relocate(ctx: &Ctx, work: &mut Work, i: usize, j: usize, accept: Accept) -> bool {
    if i == j {
        return false;
    }
    let (ri, pi) = (work.cust_route[i], work.cust_pos[i]);
    let (rj, pj) = (work.cust_route[j], work.cust_pos[j]);
    let same = ri == rj;
    if !same && work.loads[rj] + ctx.demand[i] > ctx.capacity {
        return false;
    }
    let a = work.pred(ri, pi);
    let b = work.succ(ri, pi);
    let removal = ctx.d(a, b) - ctx.d(a, i) - ctx.d(i, b);

    // After j; identity when j already precedes i.
    if !(same && j == a) {
        let c = work.succ(rj, pj);
        let delta = removal + ctx.d(j, i) + ctx.d(i, c) - ctx.d(j, c);
        if accept.takes(work.cost, delta) {
            relocate(ctx, work, i, rj, pj + 1, delta);
            return true;
        }
    }
    // Before j; identity when j already follows i.
    if !(same && j == b) {
        let p = work.pred(rj, pj);
        let delta = removal + ctx.d(p, i) + ctx.d(i, j) - ctx.d(p, j);
        if accept.takes(work.cost, delta) {
            relocate(ctx, work, i, rj, pj, delta);
            return true;
        }
    }
    false
}

fn relocate(ctx: &Ctx, work: &mut Work, i: usize, target: usize, insert_at: usize, delta: f64) {
    let (ri, pi) = (work.cust_route[i], work.cust_pos[i]);
    work.routes[ri].remove(pi);
    let mut at = insert_at;
    if target == ri && insert_at > pi {
        at -= 1;
    }
    work.routes[target].insert(at, i);
    work.loads[ri] -= ctx.demand[i];
    work.loads[target] += ctx.demand[i];
    work.reindex(ri);
    if target != ri {
        work.reindex(target);
    }
    apply_delta(ctx, work, delta);
}

/// Exchanges customers `i` and `j`.
fn try_swap(ctx: &Ctx, work: &mut Work, i: usize, j: usize, accept: Accept) -> bool {
    if i == j {
        return false;
    }
    let (ri, pi) = (work.cust_route[i], work.cust_pos[i]);
    let (rj, pj) = (work.cust_route[j], work.cust_pos[j]);
    let same = ri == rj;
    if !same {
        let li = work.loads[ri] - ctx.demand[i] + ctx.demand[j];
        let lj = work.loads[rj] - ctx.demand[j] + ctx.demand[i];
        if li > ctx.capacity || lj > ctx.capacity {
            return false;
        }
    }

    let delta = if same && pi.abs_diff(pj) == 1 {
        let (lo, hi) = if pi < pj { (pi, pj) } else { (pj, pi) };
        let u = work.routes[ri][lo];
        let v = work.routes[ri][hi];
        let a = work.pred(ri, lo);
        let e = work.succ(ri, hi);
        ctx.d(a, v) + ctx.d(u, e) - ctx.d(a, u) - ctx.d(v, e)
    } else {
        let a = work.pred(ri, pi);
        let b = work.succ(ri, pi);
        let c = work.pred(rj, pj);
        let e = work.succ(rj, pj);
        ctx.d(a, j) + ctx.d(j, b) - ctx.d(a, i) - ctx.d(i, b) + ctx.d(c, i) + ctx.d(i, e)
            - ctx.d(c, j)
            - ctx.d(j, e)
    };
    if !accept.takes(work.cost, delta) {
        return false;
    }
    work.routes[ri][pi] = j;
    work.routes[rj][pj] = i;
    if !same {
        work.loads[ri] = work.loads[ri] - ctx.demand[i] + ctx.demand[j];
        work.loads[rj] = work.loads[rj] - ctx.demand[j] + ctx.demand[i];
    }
    work.cust_route.swap(i, j);
    work.cust_pos.swap(i, j);
    apply_delta(ctx, work, delta);
    true
}

/// Intra-route 2-opt: reverses the segment between `i` and `j`.
fn try_two_opt(ctx: &Ctx, work: &mut Work, i: usize, j: usize, accept: Accept) -> bool {
    if i == j {
        return false;
    }
    let (ri, pi) = (work.cust_route[i], work.cust_pos[i]);
    let (rj, pj) = (work.cust_route[j], work.cust_pos[j]);
    if ri != rj {
        return false;
    }
    let (lo, hi) = if pi < pj { (pi, pj) } else { (pj, pi) };
    let u = work.routes[ri][lo];
    let v = work.routes[ri][hi];
    let a = work.pred(ri, lo);
    let e = work.succ(ri, hi);
    let delta = ctx.d(a, v) + ctx.d(u, e) - ctx.d(a, u) - ctx.d(v, e);
    if !accept.takes(work.cost, delta) {
        return false;
    }
    work.routes[ri][lo..=hi].reverse();
    work.reindex(ri);
    apply_delta(ctx, work, delta);
    true
}

/// Or-opt: moves the segment of `len` customers starting at `i` to sit
/// after `j`, forward or reversed.
fn try_oropt(ctx: &Ctx, work: &mut Work, i: usize, j: usize, len: usize, accept: Accept) -> bool {
    let (ri, pi) = (work.cust_route[i], work.cust_pos[i]);
    if pi + len > work.routes[ri].len() {
        return false;
    }
    let (rj, pj) = (work.cust_route[j], work.cust_pos[j]);
    let same = ri == rj;
    if same && pj >= pi && pj < pi + len {
        return false; // j inside the segment
    }
    let first = work.routes[ri][pi];
    let last = work.routes[ri][pi + len - 1];
    let a = work.pred(ri, pi);
    if same && j == a {
        return false; // identity / pure reversal, covered by 2-opt
    }
    let t = work.succ(ri, pi + len - 1);
    if !same {
        let seg_demand: u64 = work.routes[ri][pi..pi + len]
            .iter()
            .map(|&c| ctx.demand[c])
            .sum();
        if work.loads[rj] + seg_demand > ctx.capacity {
            return false;
        }
    }
    let c = work.succ(rj, pj);
    let removal = ctx.d(a, t) - ctx.d(a, first) - ctx.d(last, t);
    let base = removal - ctx.d(j, c);
    let fwd = base + ctx.d(j, first) + ctx.d(last, c);
    let rev = base + ctx.d(j, last) + ctx.d(first, c);

    let (delta, reversed) = if accept.takes(work.cost, fwd) {
        (fwd, false)
    } else if accept.takes(work.cost, rev) {
        (rev, true)
    } else {
        return false;
    };

    let mut segment: Vec<usize> = work.routes[ri].drain(pi..pi + len).collect();
    if reversed {
        segment.reverse();
    }
    let seg_demand: u64 = segment.iter().map(|&c| ctx.demand[c]).sum();
    let mut at = pj + 1;
    if same && pj > pi {
        at -= len;
    }
    for (k, &c) in segment.iter().enumerate() {
        work.routes[rj].insert(at + k, c);
    }
    work.loads[ri] -= seg_demand;
    work.loads[rj] += seg_demand;
    work.reindex(ri);
    if !same {
        work.reindex(rj);
    }
    apply_delta(ctx, work, delta);
    true
}

/// Ejects a random customer together with its nearest neighbors and
/// reinserts each at its cheapest feasible position. The cluster size is
/// drawn fresh each time so successive shakes differ in strength.
fn perturb(ctx: &Ctx, work: &mut Work, rng: &mut ChaCha8Rng) {
    if ctx.n < 2 {
        return;
    }
    // Small instances need near-total rebuilds to hop between route
    // partitions (the record corridor is only a few distance units wide);
    // large instances escape through the corridor itself, so a bounded
    // cluster is enough.
    let max_cluster = (ctx.n / 3).clamp(5, 40).min(ctx.n);
    let cluster = rng.gen_range(2..=max_cluster.max(2));
    let seed = rng.gen_range(1..=ctx.n);
    let mut victims = vec![seed];
    victims.extend(ctx.neighbors[seed].iter().take(cluster - 1).copied());

    for &v in &victims {
        let (r, p) = (work.cust_route[v], work.cust_pos[v]);
        work.routes[r].remove(p);
        work.loads[r] -= ctx.demand[v];
        work.reindex(r);
    }

    // Reinsert big demands first; ties by id for determinism. Insertion
    // costs carry multiplicative noise so repeated shakes do not keep
    // rebuilding the same myopically cheapest structure.
    let mut order = victims;
    order.sort_by(|&a, &b| ctx.demand[b].cmp(&ctx.demand[a]).then(a.cmp(&b)));

    for v in order {
        let mut best: Option<(f64, usize, usize)> = None;
        for r in 0..work.routes.len() {
            if work.loads[r] + ctx.demand[v] > ctx.capacity {
                continue;
            }
            for at in 0..=work.routes[r].len() {
                let prev = if at == 0 { DEPOT } else { work.routes[r][at - 1] };
                let next = if at == work.routes[r].len() {
                    DEPOT
                } else {
                    work.routes[r][at]
                };
                let delta = ctx.d(prev, v) + ctx.d(v, next) - ctx.d(prev, next);
                let noisy = delta * rng.gen_range(0.7..1.3);
                if best.is_none() || noisy < best.unwrap().0 {
                    best = Some((noisy, r, at));
                }
            }
        }
        let fresh = 2.0 * ctx.d(DEPOT, v) * rng.gen_range(0.7..1.3);
        match best {
            Some((noisy, r, at)) if noisy <= fresh => {
                work.routes[r].insert(at, v);
                work.loads[r] += ctx.demand[v];
                work.reindex(r);
            }
            _ => {
                work.routes.push(vec![v]);
                work.loads.push(ctx.demand[v]);
                let nr = work.routes.len() - 1;
                work.cust_route[v] = nr;
                work.cust_pos[v] = 0;
            }
        }
    }
    work.cost = work.recompute_cost(ctx);
}
