//! End-to-end pipeline: expand an SDVRP instance per strategy, solve the
//! resulting CVRP, and project the solution back onto the original
//! instance. Also the gap metric used for benchmarking.

use std::time::Instant;

use crate::cvrp::{solve_cvrp, CvrpSolverConfig};
use crate::model::{
    validate_solution, ExpandedInstance, Instance, Route, Solution, ValidationMode, Visit,
};
use crate::split::{self, CoinRule, PasaConfig};
use crate::{Error, Result};

/// A demand-splitting strategy selector.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Solve the instance as a plain CVRP; requires every demand <= Q.
    NoSplit,
    /// Fixed 20/10/5/1 percent-of-capacity rule.
    Coin20,
    /// Fixed 25/10/5/1 percent-of-capacity rule.
    Coin25,
    /// Adaptive distance-ring rule.
    Pasa(PasaConfig),
}

impl Strategy {
    /// Parses `none | coin20 | coin25 | pasa[:L=<int>,p=<int>]`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "none" => return Ok(Strategy::NoSplit),
            "coin20" => return Ok(Strategy::Coin20),
            "coin25" => return Ok(Strategy::Coin25),
            "pasa" => return Ok(Strategy::Pasa(PasaConfig::default())),
            _ => {}
        }
        if let Some(params) = t.strip_prefix("pasa:") {
            let mut cfg = PasaConfig::default();
            for part in params.split(',') {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| Error::invalid(format!("bad pasa parameter `{part}`")))?;
                match key.trim() {
                    "L" => {
                        cfg.levels = value.trim().parse().map_err(|_| {
                            Error::invalid(format!("bad level count `{value}`"))
                        })?
                    }
                    "p" => {
                        cfg.prime = value.trim().parse().map_err(|_| {
                            Error::invalid(format!("bad prime `{value}`"))
                        })?
                    }
                    other => {
                        return Err(Error::invalid(format!("unknown pasa parameter `{other}`")))
                    }
                }
            }
            cfg.validate()?;
            return Ok(Strategy::Pasa(cfg));
        }
        Err(Error::invalid(format!(
            "unknown strategy `{t}` (expected none | coin20 | coin25 | pasa[:L=<int>,p=<int>])"
        )))
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::NoSplit => write!(f, "none"),
            Strategy::Coin20 => write!(f, "coin20"),
            Strategy::Coin25 => write!(f, "coin25"),
            Strategy::Pasa(cfg) => write!(f, "pasa:L={},p={}", cfg.levels, cfg.prime),
        }
    }
}

/// Expands an instance according to a strategy.
pub fn expand(instance: &Instance, strategy: &Strategy) -> Result<ExpandedInstance> {
    match strategy {
        Strategy::NoSplit => split::no_split_expand(instance),
        Strategy::Coin20 => split::coin_expand(instance, &CoinRule::coin20()),
        Strategy::Coin25 => split::coin_expand(instance, &CoinRule::coin25()),
        Strategy::Pasa(cfg) => split::pasa_expand(instance, cfg),
    }
}

/// Outcome of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub strategy: Strategy,
    pub instance: String,
    /// Customer count of the expanded CVRP instance.
    pub expanded_nodes: usize,
    /// Projected solution on the original instance.
    pub solution: Solution,
    pub cost: f64,
    /// Wall time of expand + solve + project, excluding file I/O.
    pub wall_time_seconds: f64,
    pub seed: u64,
}

/// Runs the full pipeline: expand, solve the CVRP, project back, validate.
///
/// A validation failure after projection is an internal invariant breach
/// and is reported as an error, never returned silently.
pub fn solve_sdvrp(
    instance: &Instance,
    strategy: &Strategy,
    config: &CvrpSolverConfig,
) -> Result<RunResult> {
    let started = Instant::now();
    let expanded = expand(instance, strategy)?;
    let cvrp_solution = solve_cvrp(&expanded.cvrp, config)?;
    let projected = project_solution(&expanded, &cvrp_solution)?;
    let wall_time_seconds = started.elapsed().as_secs_f64();

    let violations = validate_solution(instance, &projected, ValidationMode::Sdvrp);
    if !violations.is_empty() {
        let details: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Internal(format!(
            "projected solution fails validation: {}",
            details.join("; ")
        )));
    }

    Ok(RunResult {
        strategy: strategy.clone(),
        instance: instance.name().to_string(),
        expanded_nodes: expanded.cvrp.n(),
        cost: projected.cost,
        solution: projected,
        wall_time_seconds,
        seed: config.seed,
    })
}

/// Translates a CVRP solution on the expanded instance back into an SDVRP
/// solution on the original instance.
///
/// Each expanded visit becomes a visit to its origin customer with the
/// piece quantity. Same-origin visits within one route are merged into a
/// single visit with the summed quantity whenever the recomputed route cost
/// does not increase (dropping a repeated point never lengthens a Euclidean
/// route); otherwise the repeats are kept as separate visits. The projected
/// cost never exceeds the CVRP cost.
pub fn project_solution(
    expanded: &ExpandedInstance,
    cvrp_solution: &Solution,
) -> Result<Solution> {
    // The original instance is only needed for coordinates, which expansion
    // preserves; rebuild routes in origin-customer terms.
    let mut routes = Vec::with_capacity(cvrp_solution.routes.len());
    for route in &cvrp_solution.routes {
        if route.visits.is_empty() {
            continue;
        }
        let mut visits = Vec::with_capacity(route.visits.len());
        for v in &route.visits {
            visits.push(Visit {
                customer: expanded.origin_of(v.customer)?,
                quantity: v.quantity,
            });
        }
        routes.push(Route::new(visits));
    }

    let original = OriginalGeometry::from_expanded(expanded)?;
    for route in &mut routes {
        merge_route_visits(&original, route);
    }

    let cost = routes
        .iter()
        .map(|r| original.route_cost(r))
        .sum::<f64>();
    let projected = Solution { routes, cost };

    if projected.cost > cvrp_solution.cost * (1.0 + 1e-9) + 1e-9 {
        return Err(Error::Internal(format!(
            "projection increased cost from {} to {}",
            cvrp_solution.cost, projected.cost
        )));
    }
    Ok(projected)
}

/// Coordinates of the original customers, recovered from the expansion.
struct OriginalGeometry {
    depot: crate::model::Point,
    coords: Vec<crate::model::Point>,
}

impl OriginalGeometry {
    fn from_expanded(expanded: &ExpandedInstance) -> Result<Self> {
        let max_origin = expanded.origin_map().iter().copied().max().unwrap_or(0);
        let depot = expanded.cvrp.depot();
        let mut coords = vec![depot; max_origin + 1];
        for (k, c) in expanded.cvrp.customers().iter().enumerate() {
            coords[expanded.origin_map()[k]] = c.coord;
        }
        Ok(Self { depot, coords })
    }

    fn point(&self, customer: usize) -> crate::model::Point {
        self.coords[customer]
    }

    fn route_cost(&self, route: &Route) -> f64 {
        if route.visits.is_empty() {
            return 0.0;
        }
        let mut prev = self.depot;
        let mut cost = 0.0;
        for v in &route.visits {
            let p = self.point(v.customer);
            cost += prev.dist(p);
            prev = p;
        }
        cost + prev.dist(self.depot)
    }
}

/// Merges same-origin visits within a route. Consecutive repeats always
/// merge (the leg between them has zero length); non-consecutive repeats
/// merge at the position that minimizes the recomputed route cost, and only
/// when that does not increase it.
fn merge_route_visits(geom: &OriginalGeometry, route: &mut Route) {
    merge_consecutive(route);
    loop {
        let Some(customer) = first_repeated(route) else {
            return;
        };
        let current = geom.route_cost(route);
        let positions: Vec<usize> = route
            .visits
            .iter()
            .enumerate()
            .filter(|(_, v)| v.customer == customer)
            .map(|(k, _)| k)
            .collect();
        let total: u64 = positions.iter().map(|&k| route.visits[k].quantity).sum();

        let mut best: Option<(f64, Route)> = None;
        for &keep in &positions {
            let mut candidate = Vec::with_capacity(route.visits.len());
            for (k, v) in route.visits.iter().enumerate() {
                if v.customer == customer {
                    if k == keep {
                        candidate.push(Visit {
                            customer,
                            quantity: total,
                        });
                    }
                } else {
                    candidate.push(*v);
                }
            }
            let candidate = Route::new(candidate);
            let cost = geom.route_cost(&candidate);
            if best.as_ref().is_none_or(|(b, _)| cost < *b - 1e-12) {
                best = Some((cost, candidate));
            }
        }

        match best {
            Some((cost, merged)) if cost <= current * (1.0 + 1e-9) + 1e-9 => {
                *route = merged;
                merge_consecutive(route);
            }
            // Keeping the repeats is the only way not to lengthen the route.
            _ => return,
        }
    }
}

fn merge_consecutive(route: &mut Route) {
    let mut merged: Vec<Visit> = Vec::with_capacity(route.visits.len());
    for v in &route.visits {
        match merged.last_mut() {
            Some(last) if last.customer == v.customer => last.quantity += v.quantity,
            _ => merged.push(*v),
        }
    }
    route.visits = merged;
}

fn first_repeated(route: &Route) -> Option<usize> {
    for (k, v) in route.visits.iter().enumerate() {
        if route.visits[k + 1..].iter().any(|w| w.customer == v.customer) {
            return Some(v.customer);
        }
    }
    None
}

/// Percent deviation of a cost from the best-known cost; negative when a
/// new best is found.
pub fn gap(cost: f64, best_known: f64) -> Result<f64> {
    if best_known <= 0.0 {
        return Err(Error::invalid(format!(
            "best-known cost must be positive, got {best_known}"
        )));
    }
    Ok((cost - best_known) / best_known * 100.0)
}
