//! Core domain types: instances, split rules, expanded instances, solutions,
//! plus distance, cost and feasibility primitives shared by all other modules.

use crate::{Error, Result};

/// Node id of the depot in distance queries. Customers are 1-based.
pub const DEPOT: usize = 0;

/// Relative tolerance used when comparing costs.
pub const COST_REL_TOL: f64 = 1e-9;

/// A point in the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Exact (unrounded) Euclidean distance to `other`.
    pub fn dist(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// A customer with a fixed location and a positive integer demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Customer {
    /// 1-based id; ids form 1..=n in list order.
    pub id: usize,
    pub coord: Point,
    /// Units of goods requested. May exceed the vehicle capacity.
    pub demand: u64,
}

/// An SDVRP/CVRP problem instance: depot, customers and vehicle capacity.
///
/// Immutable after construction; edge costs are exact Euclidean distances
/// computed on demand, never stored or rounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    depot: Point,
    customers: Vec<Customer>,
    capacity: u64,
}

impl Instance {
    /// Builds a validated instance. Customer ids must be exactly 1..=n in
    /// list order, demands and the capacity must be positive.
    pub fn new(
        name: impl Into<String>,
        depot: Point,
        customers: Vec<Customer>,
        capacity: u64,
    ) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("capacity must be positive"));
        }
        for (k, c) in customers.iter().enumerate() {
            if c.id != k + 1 {
                return Err(Error::invalid(format!(
                    "customer ids must be 1..n in order; found id {} at position {}",
                    c.id,
                    k + 1
                )));
            }
            if c.demand == 0 {
                return Err(Error::invalid(format!("customer {} has zero demand", c.id)));
            }
        }
        Ok(Self {
            name: name.into(),
            depot,
            customers,
            capacity,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depot(&self) -> Point {
        self.depot
    }

    /// Number of customers.
    pub fn n(&self) -> usize {
        self.customers.len()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn customers(&self) -> &[Customer] {
        &self.customers
    }

    pub fn customer(&self, id: usize) -> Result<&Customer> {
        if id == DEPOT || id > self.customers.len() {
            return Err(Error::invalid(format!("unknown customer id {id}")));
        }
        Ok(&self.customers[id - 1])
    }

    /// Coordinates of a node; id 0 is the depot.
    pub fn coord(&self, node: usize) -> Result<Point> {
        if node == DEPOT {
            Ok(self.depot)
        } else {
            self.customer(node).map(|c| c.coord)
        }
    }

    /// Largest customer-to-depot distance; 0.0 for an empty instance.
    pub fn max_depot_distance(&self) -> f64 {
        self.customers
            .iter()
            .map(|c| c.coord.dist(self.depot))
            .fold(0.0, f64::max)
    }
}

/// Exact Euclidean distance between two nodes (0 = depot).
pub fn distance(instance: &Instance, a: usize, b: usize) -> Result<f64> {
    let pa = instance.coord(a)?;
    let pb = instance.coord(b)?;
    Ok(pa.dist(pb))
}

/// A descending sequence of piece sizes used to decompose one demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRule {
    pieces: Vec<u64>,
}

impl SplitRule {
    /// Pieces must be positive and strictly descending.
    pub fn new(pieces: Vec<u64>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::invalid("split rule needs at least one piece"));
        }
        for w in pieces.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::invalid(format!(
                    "split rule pieces must be strictly descending, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if *pieces.last().unwrap() == 0 {
            return Err(Error::invalid("split rule pieces must be positive"));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[u64] {
        &self.pieces
    }

    pub fn smallest(&self) -> u64 {
        *self.pieces.last().unwrap()
    }

    pub fn largest(&self) -> u64 {
        self.pieces[0]
    }
}

impl std::fmt::Display for SplitRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join("/"))
    }
}

/// A CVRP instance produced by splitting, plus the mapping from each
/// expanded customer back to the original customer it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedInstance {
    pub cvrp: Instance,
    /// origin[k] is the original customer id of expanded customer k+1.
    origin: Vec<usize>,
}

impl ExpandedInstance {
    /// Validates the expansion against the original instance: coordinates
    /// preserved, per-customer demand sums exact, every piece within
    /// capacity.
    pub fn new(original: &Instance, cvrp: Instance, origin: Vec<usize>) -> Result<Self> {
        if cvrp.capacity() != original.capacity() {
            return Err(Error::Internal(
                "expansion changed the vehicle capacity".into(),
            ));
        }
        if origin.len() != cvrp.n() {
            return Err(Error::Internal(format!(
                "origin map has {} entries for {} expanded customers",
                origin.len(),
                cvrp.n()
            )));
        }
        let mut delivered = vec![0u64; original.n() + 1];
        for (k, c) in cvrp.customers().iter().enumerate() {
            let orig_id = origin[k];
            let orig = original.customer(orig_id).map_err(|_| {
                Error::Internal(format!(
                    "expanded customer {} maps to unknown original {}",
                    c.id, orig_id
                ))
            })?;
            if c.coord != orig.coord {
                return Err(Error::Internal(format!(
                    "expanded customer {} moved away from original {}",
                    c.id, orig_id
                )));
            }
            if c.demand > original.capacity() {
                return Err(Error::Internal(format!(
                    "expanded customer {} has demand {} above capacity {}",
                    c.id,
                    c.demand,
                    original.capacity()
                )));
            }
            delivered[orig_id] += c.demand;
        }
        for c in original.customers() {
            if delivered[c.id] != c.demand {
                return Err(Error::Internal(format!(
                    "pieces for customer {} sum to {} instead of {}",
                    c.id, delivered[c.id], c.demand
                )));
            }
        }
        Ok(Self { cvrp, origin })
    }

    /// Original customer id for an expanded customer id.
    pub fn origin_of(&self, expanded_id: usize) -> Result<usize> {
        if expanded_id == DEPOT || expanded_id > self.origin.len() {
            return Err(Error::invalid(format!(
                "unknown expanded customer id {expanded_id}"
            )));
        }
        Ok(self.origin[expanded_id - 1])
    }

    pub fn origin_map(&self) -> &[usize] {
        &self.origin
    }
}

/// One stop on a route: a customer and the quantity delivered there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Visit {
    pub customer: usize,
    pub quantity: u64,
}

/// An ordered sequence of visits; the depot at both ends is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Route {
    pub visits: Vec<Visit>,
}

impl Route {
    pub fn new(visits: Vec<Visit>) -> Self {
        Self { visits }
    }

    /// Total quantity carried on this route.
    pub fn load(&self) -> u64 {
        self.visits.iter().map(|v| v.quantity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }
}

/// A set of routes with per-visit quantities and the total travel cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub cost: f64,
}

impl Solution {
    pub fn empty() -> Self {
        Self {
            routes: Vec::new(),
            cost: 0.0,
        }
    }

    /// Builds a solution with the cost recomputed from the instance.
    pub fn from_routes(instance: &Instance, routes: Vec<Route>) -> Result<Self> {
        let mut sol = Self { routes, cost: 0.0 };
        sol.cost = solution_cost(instance, &sol)?;
        Ok(sol)
    }
}

/// Travel cost of one route: depot to first visit, consecutive legs, last
/// visit back to the depot. Empty routes cost 0.
pub fn route_cost(instance: &Instance, route: &Route) -> Result<f64> {
    if route.visits.is_empty() {
        return Ok(0.0);
    }
    let depot = instance.depot();
    let mut prev = depot;
    let mut cost = 0.0;
    for v in &route.visits {
        let p = instance.customer(v.customer)?.coord;
        cost += prev.dist(p);
        prev = p;
    }
    cost += prev.dist(depot);
    Ok(cost)
}

/// Total travel cost over all routes.
pub fn solution_cost(instance: &Instance, solution: &Solution) -> Result<f64> {
    let mut total = 0.0;
    for route in &solution.routes {
        total += route_cost(instance, route)?;
    }
    Ok(total)
}

/// Which feasibility rules apply when validating a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Each customer must be visited exactly once across the solution.
    Cvrp,
    /// Customers may be visited several times; totals must match demands.
    Sdvrp,
}

/// A single feasibility violation. Violations are data, not failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RouteOverload {
        route: usize,
        load: u64,
        capacity: u64,
    },
    UnknownCustomer {
        route: usize,
        id: usize,
    },
    ZeroQuantity {
        route: usize,
        customer: usize,
    },
    UnderDelivery {
        customer: usize,
        delivered: u64,
        demand: u64,
    },
    OverDelivery {
        customer: usize,
        delivered: u64,
        demand: u64,
    },
    MultipleVisits {
        customer: usize,
        visits: usize,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::RouteOverload {
                route,
                load,
                capacity,
            } => write!(f, "route {route} carries {load} > capacity {capacity}"),
            Violation::UnknownCustomer { route, id } => {
                write!(f, "route {route} visits unknown customer {id}")
            }
            Violation::ZeroQuantity { route, customer } => {
                write!(f, "route {route} delivers nothing to customer {customer}")
            }
            Violation::UnderDelivery {
                customer,
                delivered,
                demand,
            } => write!(
                f,
                "customer {customer} received {delivered} of {demand} (short by {})",
                demand - delivered
            ),
            Violation::OverDelivery {
                customer,
                delivered,
                demand,
            } => write!(
                f,
                "customer {customer} received {delivered} of {demand} (excess {})",
                delivered - demand
            ),
            Violation::MultipleVisits { customer, visits } => {
                write!(f, "customer {customer} visited {visits} times")
            }
        }
    }
}

/// Checks a solution against an instance and reports every violation:
/// route loads above capacity, unknown ids, zero-quantity visits, and
/// per-customer delivery totals. In CVRP mode a customer visited more than
/// once anywhere in the solution is also a violation.
pub fn validate_solution(
    instance: &Instance,
    solution: &Solution,
    mode: ValidationMode,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let n = instance.n();
    let mut delivered = vec![0u64; n + 1];
    let mut visit_count = vec![0usize; n + 1];

    for (r, route) in solution.routes.iter().enumerate() {
        let route_no = r + 1;
        let mut load = 0u64;
        for v in &route.visits {
            if v.customer == DEPOT || v.customer > n {
                violations.push(Violation::UnknownCustomer {
                    route: route_no,
                    id: v.customer,
                });
                continue;
            }
            if v.quantity == 0 {
                violations.push(Violation::ZeroQuantity {
                    route: route_no,
                    customer: v.customer,
                });
            }
            delivered[v.customer] += v.quantity;
            visit_count[v.customer] += 1;
            load += v.quantity;
        }
        if load > instance.capacity() {
            violations.push(Violation::RouteOverload {
                route: route_no,
                load,
                capacity: instance.capacity(),
            });
        }
    }

    for c in instance.customers() {
        let got = delivered[c.id];
        if got < c.demand {
            violations.push(Violation::UnderDelivery {
                customer: c.id,
                delivered: got,
                demand: c.demand,
            });
        } else if got > c.demand {
            violations.push(Violation::OverDelivery {
                customer: c.id,
                delivered: got,
                demand: c.demand,
            });
        }
        if mode == ValidationMode::Cvrp && visit_count[c.id] > 1 {
            violations.push(Violation::MultipleVisits {
                customer: c.id,
                visits: visit_count[c.id],
            });
        }
    }

    violations
}
