//! Shared fixtures and independent brute-force oracles for integration
//! tests. The oracles only use `model::distance`, never the solver code
//! they are used to check.

// Each test target pulls in a different subset of these helpers.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdvrp_core::model::{distance, Customer, Instance, Point, DEPOT};

/// Builds an instance from plain tuples.
pub fn instance(name: &str, coords: &[(f64, f64)], demands: &[u64], capacity: u64) -> Instance {
    let customers = coords
        .iter()
        .zip(demands)
        .enumerate()
        .map(|(k, (&(x, y), &d))| Customer {
            id: k + 1,
            coord: Point::new(x, y),
            demand: d,
        })
        .collect();
    Instance::new(name, Point::new(0.0, 0.0), customers, capacity).unwrap()
}

/// Random instance with coordinates in [0, 100]^2 and demands drawn from
/// `demand_choices`.
pub fn random_instance(
    seed: u64,
    n: usize,
    capacity: u64,
    demand_choices: &[u64],
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let demands: Vec<u64> = (0..n)
        .map(|_| demand_choices[rng.gen_range(0..demand_choices.len())])
        .collect();
    instance(&format!("rnd{seed}"), &coords, &demands, capacity)
}

/// Exact CVRP optimum by dynamic programming: Held-Karp per customer
/// subset for the best closed tour, then a set-partition DP over feasible
/// subsets. Only for n <= 12.
pub fn cvrp_optimum(inst: &Instance) -> f64 {
    let n = inst.n();
    assert!(n <= 12, "oracle limited to 12 customers");
    if n == 0 {
        return 0.0;
    }
    let d = |a: usize, b: usize| distance(inst, a, b).unwrap();
    let full = 1usize << n;

    // Held-Karp over open paths from the depot; dp[mask][last].
    let mut dp = vec![vec![f64::INFINITY; n]; full];
    for i in 0..n {
        dp[1 << i][i] = d(DEPOT, i + 1);
    }
    for mask in 1..full {
        for last in 0..n {
            if mask & (1 << last) == 0 || !dp[mask][last].is_finite() {
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let nm = mask | (1 << next);
                let cost = dp[mask][last] + d(last + 1, next + 1);
                if cost < dp[nm][next] {
                    dp[nm][next] = cost;
                }
            }
        }
    }

    let mut tour = vec![f64::INFINITY; full];
    let mut feasible = vec![false; full];
    for mask in 1..full {
        let load: u64 = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| inst.customers()[i].demand)
            .sum();
        feasible[mask] = load <= inst.capacity();
        for last in 0..n {
            if mask & (1 << last) != 0 && dp[mask][last].is_finite() {
                let cost = dp[mask][last] + d(last + 1, DEPOT);
                if cost < tour[mask] {
                    tour[mask] = cost;
                }
            }
        }
    }

    // Partition DP; every block must contain the lowest remaining customer.
    let mut best = vec![f64::INFINITY; full];
    best[0] = 0.0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let mut sub = mask;
        loop {
            if sub & low != 0 && feasible[sub] && best[mask ^ sub].is_finite() {
                let cost = best[mask ^ sub] + tour[sub];
                if cost < best[mask] {
                    best[mask] = cost;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    best[full - 1]
}

/// Exact SDVRP optimum when deliveries are restricted to multiples of
/// `granularity`. Exhaustive DP over remaining per-customer units: each
/// step applies one route, i.e. a delivery vector within the capacity,
/// costing the optimal tour over the customers it serves. Only for n <= 4.
pub fn sdvrp_optimum(inst: &Instance, granularity: u64) -> f64 {
    let n = inst.n();
    assert!(n <= 4, "oracle limited to 4 customers");
    assert!(granularity >= 1 && inst.capacity() % granularity == 0);
    for c in inst.customers() {
        assert!(c.demand % granularity == 0, "demands must be multiples");
    }
    if n == 0 {
        return 0.0;
    }
    let units: Vec<u64> = inst
        .customers()
        .iter()
        .map(|c| c.demand / granularity)
        .collect();
    let cap_units = inst.capacity() / granularity;

    // Optimal closed tour for every customer subset, by permutations.
    let full = 1usize << n;
    let d = |a: usize, b: usize| distance(inst, a, b).unwrap();
    let mut tour = vec![0.0f64; full];
    for mask in 1..full {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut best = f64::INFINITY;
        let mut perm = members.clone();
        permute(&mut perm, 0, &mut |order| {
            let mut cost = d(DEPOT, order[0] + 1);
            for w in order.windows(2) {
                cost += d(w[0] + 1, w[1] + 1);
            }
            cost += d(order[order.len() - 1] + 1, DEPOT);
            if cost < best {
                best = cost;
            }
        });
        tour[mask] = best;
    }

    // Memoized recursion over the remaining units per customer; each step
    // applies one route (a delivery vector within the capacity). States
    // strictly shrink because every route delivers at least one unit.
    struct Dp<'a> {
        radix: Vec<u64>,
        memo: Vec<f64>,
        tour: &'a [f64],
        cap_units: u64,
    }

    impl Dp<'_> {
        fn index(&self, rem: &[u64]) -> usize {
            let mut idx = 0u64;
            for (k, &r) in rem.iter().enumerate() {
                idx = idx * self.radix[k] + r;
            }
            idx as usize
        }

        fn solve(&mut self, rem: &mut [u64]) -> f64 {
            if rem.iter().all(|&r| r == 0) {
                return 0.0;
            }
            let idx = self.index(rem);
            if !self.memo[idx].is_nan() {
                return self.memo[idx];
            }
            let n = rem.len();
            let mut best = f64::INFINITY;
            let mut q = vec![0u64; n];
            'vectors: loop {
                // Advance the mixed-radix counter 0 <= q_i <= rem_i.
                let mut k = 0;
                while k < n {
                    if q[k] < rem[k] {
                        q[k] += 1;
                        break;
                    }
                    q[k] = 0;
                    k += 1;
                }
                if k == n {
                    break 'vectors;
                }
                let total: u64 = q.iter().sum();
                if total == 0 || total > self.cap_units {
                    continue;
                }
                let mask: usize = (0..n).filter(|&i| q[i] > 0).map(|i| 1 << i).sum();
                let route_cost = self.tour[mask];
                if route_cost >= best {
                    continue; // remainder cost is nonnegative
                }
                for i in 0..n {
                    rem[i] -= q[i];
                }
                let rest = self.solve(rem);
                for i in 0..n {
                    rem[i] += q[i];
                }
                if route_cost + rest < best {
                    best = route_cost + rest;
                }
            }
            self.memo[idx] = best;
            best
        }
    }

    let radix: Vec<u64> = units.iter().map(|&u| u + 1).collect();
    let states: u64 = radix.iter().product();
    let mut dp = Dp {
        radix,
        memo: vec![f64::NAN; states as usize],
        tour: &tour,
        cap_units,
    };
    let mut rem = units;
    dp.solve(&mut rem)
}

fn permute<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, visit: &mut F) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
