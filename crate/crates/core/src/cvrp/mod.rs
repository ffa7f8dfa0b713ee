//! Embedded CVRP heuristic solver: Clarke-Wright savings construction
//! followed by record-to-record travel over classical neighborhoods
//! (relocate, swap, 2-opt, Or-opt), restricted to nearest-neighbor lists.
//!
//! A solve is single-threaded and fully deterministic for a fixed
//! `(instance, seed)` pair; distinct solves share no state and may run in
//! parallel.

mod construct;
mod search;

pub use construct::clarke_wright_construct;
pub use search::{local_search_improve, rtr_search};

use crate::model::{Instance, Route, Solution, ValidationMode, Visit, DEPOT};
use crate::{Error, Result};

/// Tunables of the embedded solver. Defaults are sensible for instances up
/// to a few hundred nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CvrpSolverConfig {
    /// Seed of the search's random stream; same seed, same solution.
    pub seed: u64,
    /// Record-to-record acceptance fraction: uphill moves are accepted
    /// while the cost stays within `record * (1 + deviation)`.
    pub deviation: f64,
    /// Stop after this many consecutive iterations without a new record.
    pub max_stale_iterations: u32,
    /// Moves only consider each node's nearest neighbors, this many.
    pub neighbor_list_size: usize,
    /// Optional wall-clock budget for the search phase.
    pub time_limit_seconds: Option<f64>,
}

impl Default for CvrpSolverConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            deviation: 0.01,
            max_stale_iterations: 50,
            neighbor_list_size: 25,
            time_limit_seconds: None,
        }
    }
}

impl CvrpSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.2).contains(&self.deviation) {
            return Err(Error::invalid(format!(
                "deviation {} outside [0, 0.2]",
                self.deviation
            )));
        }
        if self.max_stale_iterations == 0 {
            return Err(Error::invalid("max_stale_iterations must be positive"));
        }
        if self.neighbor_list_size == 0 {
            return Err(Error::invalid("neighbor_list_size must be positive"));
        }
        if let Some(t) = self.time_limit_seconds {
            if t <= 0.0 {
                return Err(Error::invalid("time limit must be positive"));
            }
        }
        Ok(())
    }
}

/// Solves a CVRP instance: savings construction, then record-to-record
/// travel. The result satisfies CVRP validation (every customer exactly
/// once, all loads within capacity).
pub fn solve_cvrp(instance: &Instance, config: &CvrpSolverConfig) -> Result<Solution> {
    config.validate()?;
    if instance.n() == 0 {
        return Ok(Solution::empty());
    }
    let initial = clarke_wright_construct(instance)?;
    let solution = rtr_search(instance, &initial, config)?;
    debug_assert!(
        crate::model::validate_solution(instance, &solution, ValidationMode::Cvrp).is_empty(),
        "solver produced an invalid CVRP solution"
    );
    Ok(solution)
}

/// Precomputed geometry shared by construction and search: the full
/// distance matrix and per-customer nearest-neighbor lists.
pub(crate) struct Ctx {
    pub n: usize,
    pub capacity: u64,
    /// Demand per customer id; index 0 unused.
    pub demand: Vec<u64>,
    dist: Vec<f64>,
    /// Nearest customers per customer id, ascending by distance.
    pub neighbors: Vec<Vec<usize>>,
}

impl Ctx {
    pub fn new(instance: &Instance, neighbor_list_size: usize) -> Self {
        let n = instance.n();
        let stride = n + 1;
        let mut points = Vec::with_capacity(stride);
        points.push(instance.depot());
        for c in instance.customers() {
            points.push(c.coord);
        }
        let mut dist = vec![0.0; stride * stride];
        for a in 0..stride {
            for b in 0..stride {
                dist[a * stride + b] = points[a].dist(points[b]);
            }
        }

        let k = neighbor_list_size.min(n.saturating_sub(1));
        let mut neighbors = vec![Vec::new(); stride];
        for i in 1..=n {
            let mut others: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| {
                dist[i * stride + a]
                    .total_cmp(&dist[i * stride + b])
                    .then(a.cmp(&b))
            });
            others.truncate(k);
            neighbors[i] = others;
        }

        let mut demand = vec![0u64; stride];
        for c in instance.customers() {
            demand[c.id] = c.demand;
        }

        Ctx {
            n,
            capacity: instance.capacity(),
            demand,
            dist,
            neighbors,
        }
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize) -> f64 {
        self.dist[a * (self.n + 1) + b]
    }
}

/// Mutable search state: routes of customer ids plus the indices needed to
/// locate and move customers in O(1).
#[derive(Clone)]
pub(crate) struct Work {
    pub routes: Vec<Vec<usize>>,
    pub loads: Vec<u64>,
    pub cust_route: Vec<usize>,
    pub cust_pos: Vec<usize>,
    pub cost: f64,
}

impl Work {
    /// Builds search state from a solution, checking it is a feasible CVRP
    /// solution for the instance behind `ctx`.
    pub fn from_solution(ctx: &Ctx, solution: &Solution) -> Result<Self> {
        let mut routes = Vec::new();
        let mut seen = vec![false; ctx.n + 1];
        for route in &solution.routes {
            let ids: Vec<usize> = route.visits.iter().map(|v| v.customer).collect();
            for &c in &ids {
                if c == DEPOT || c > ctx.n {
                    return Err(Error::invalid(format!("unknown customer id {c}")));
                }
                if seen[c] {
                    return Err(Error::invalid(format!(
                        "customer {c} appears more than once"
                    )));
                }
                seen[c] = true;
            }
            if !ids.is_empty() {
                routes.push(ids);
            }
        }
        for c in 1..=ctx.n {
            if !seen[c] {
                return Err(Error::invalid(format!("customer {c} is not visited")));
            }
        }
        let mut w = Work {
            routes,
            loads: Vec::new(),
            cust_route: vec![0; ctx.n + 1],
            cust_pos: vec![0; ctx.n + 1],
            cost: 0.0,
        };
        w.loads = w
            .routes
            .iter()
            .map(|r| r.iter().map(|&c| ctx.demand[c]).sum::<u64>())
            .collect();
        for (k, load) in w.loads.iter().enumerate() {
            if *load > ctx.capacity {
                return Err(Error::invalid(format!(
                    "route {} load {} exceeds capacity {}",
                    k + 1,
                    load,
                    ctx.capacity
                )));
            }
        }
        for r in 0..w.routes.len() {
            w.reindex(r);
        }
        w.cost = w.recompute_cost(ctx);
        Ok(w)
    }

    pub fn reindex(&mut self, route: usize) {
        for (pos, &c) in self.routes[route].iter().enumerate() {
            self.cust_route[c] = route;
            self.cust_pos[c] = pos;
        }
    }

    pub fn recompute_cost(&self, ctx: &Ctx) -> f64 {
        let mut total = 0.0;
        for route in &self.routes {
            if route.is_empty() {
                continue;
            }
            let mut prev = DEPOT;
            for &c in route {
                total += ctx.d(prev, c);
                prev = c;
            }
            total += ctx.d(prev, DEPOT);
        }
        total
    }

    /// Node before position `pos` in a route, depot at the boundary.
    #[inline]
    pub fn pred(&self, route: usize, pos: usize) -> usize {
        if pos == 0 {
            DEPOT
        } else {
            self.routes[route][pos - 1]
        }
    }

    /// Node after position `pos` in a route, depot at the boundary.
    #[inline]
    pub fn succ(&self, route: usize, pos: usize) -> usize {
        let r = &self.routes[route];
        if pos + 1 >= r.len() {
            DEPOT
        } else {
            r[pos + 1]
        }
    }

    pub fn to_solution(&self, instance: &Instance) -> Result<Solution> {
        let routes = self
            .routes
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                Route::new(
                    r.iter()
                        .map(|&c| Visit {
                            customer: c,
                            quantity: instance.customer(c).map(|x| x.demand).unwrap_or(0),
                        })
                        .collect(),
                )
            })
            .collect();
        Solution::from_routes(instance, routes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Customer, Point};

    fn inst(coords: &[(f64, f64)], demands: &[u64], capacity: u64) -> Instance {
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
        Instance::new("fixture", Point::new(0.0, 0.0), customers, capacity).unwrap()
    }

    #[test]
    fn config_validation_bounds() {
        let mut cfg = CvrpSolverConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.deviation = 0.3;
        assert!(cfg.validate().is_err());
        cfg.deviation = 0.0;
        cfg.neighbor_list_size = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn solve_empty_instance() {
        let i = Instance::new("empty", Point::new(0.0, 0.0), vec![], 100).unwrap();
        let s = solve_cvrp(&i, &CvrpSolverConfig::default()).unwrap();
        assert!(s.routes.is_empty());
        assert_eq!(s.cost, 0.0);
    }

    #[test]
    fn solve_full_demands_gives_out_and_back_routes() {
        let i = inst(
            &[(3.0, 4.0), (6.0, 8.0), (-5.0, 0.0)],
            &[100, 100, 100],
            100,
        );
        let s = solve_cvrp(&i, &CvrpSolverConfig::default()).unwrap();
        assert_eq!(s.routes.len(), 3);
        let expected = 2.0 * (5.0 + 10.0 + 5.0);
        assert!((s.cost - expected).abs() < 1e-9);
    }

    #[test]
    fn solve_rejects_oversized_demand() {
        let i = inst(&[(1.0, 0.0)], &[101], 100);
        assert!(matches!(
            solve_cvrp(&i, &CvrpSolverConfig::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn neighbor_lists_are_clamped_and_sorted() {
        let i = inst(&[(1.0, 0.0), (2.0, 0.0), (9.0, 0.0)], &[1, 1, 1], 10);
        let ctx = Ctx::new(&i, 25);
        assert_eq!(ctx.neighbors[1], vec![2, 3]);
        assert_eq!(ctx.neighbors[3], vec![2, 1]);
    }
}
