//! Clarke-Wright savings construction.

use super::Ctx;
use crate::model::{Instance, Solution, DEPOT};
use crate::{Error, Result};

/// Builds a feasible CVRP solution by parallel savings merging.
///
/// Starts from one out-and-back route per customer and repeatedly joins
/// route ends in order of descending savings s(i,j) = d(i,0) + d(0,j) -
/// d(i,j), as long as the merged load stays within capacity. Only strictly
/// positive savings are applied, so the result never costs more than the
/// out-and-back solution. Ties are broken by (i, j) id order.
pub fn clarke_wright_construct(instance: &Instance) -> Result<Solution> {
    for c in instance.customers() {
        if c.demand > instance.capacity() {
            return Err(Error::Infeasible(format!(
                "customer {} demands {} > capacity {}",
                c.id,
                c.demand,
                instance.capacity()
            )));
        }
    }
    let n = instance.n();
    if n == 0 {
        return Ok(Solution::empty());
    }

    let ctx = Ctx::new(instance, 1);
    let mut routes: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    let mut loads: Vec<u64> = (1..=n).map(|i| ctx.demand[i]).collect();
    // route_of[i] is the route index of customer i; index 0 unused.
    let mut route_of: Vec<usize> = (0..=n).map(|i| i.saturating_sub(1)).collect();

    let mut savings = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let s = ctx.d(i, DEPOT) + ctx.d(DEPOT, j) - ctx.d(i, j);
            if s > 0.0 {
                savings.push((s, i, j));
            }
        }
    }
    savings.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    for &(_, i, j) in &savings {
        let ri = route_of[i];
        let rj = route_of[j];
        if ri == rj {
            continue;
        }
        if loads[ri] + loads[rj] > instance.capacity() {
            continue;
        }
        // Both endpoints must sit at a route end; reversal is cost-neutral.
        let i_first = routes[ri][0] == i;
        let i_last = *routes[ri].last().unwrap() == i;
        let j_first = routes[rj][0] == j;
        let j_last = *routes[rj].last().unwrap() == j;
        if !(i_first || i_last) || !(j_first || j_last) {
            continue;
        }
        let mut left = std::mem::take(&mut routes[ri]);
        if i_first && !i_last {
            left.reverse();
        }
        let mut right = std::mem::take(&mut routes[rj]);
        if j_last && !j_first {
            right.reverse();
        }
        left.extend(right);
        for &c in &left {
            route_of[c] = ri;
        }
        routes[ri] = left;
        loads[ri] += loads[rj];
        loads[rj] = 0;
    }

    let work = super::Work {
        routes: routes.into_iter().filter(|r| !r.is_empty()).collect(),
        loads: Vec::new(),
        cust_route: vec![0; n + 1],
        cust_pos: vec![0; n + 1],
        cost: 0.0,
    };
    work.to_solution(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{solution_cost, validate_solution, Customer, Point, ValidationMode};

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
    fn single_customer_out_and_back() {
        let i = inst(&[(3.0, 4.0)], &[10], 100);
        let s = clarke_wright_construct(&i).unwrap();
        assert_eq!(s.routes.len(), 1);
        assert!((s.cost - 10.0).abs() < 1e-12);
    }

    #[test]
    fn positive_savings_merges_two_customers() {
        let i = inst(&[(10.0, 0.0), (10.0, 1.0)], &[40, 40], 100);
        let s = clarke_wright_construct(&i).unwrap();
        assert_eq!(s.routes.len(), 1);
        let separate = 2.0 * 10.0 + 2.0 * (101.0f64).sqrt();
        assert!(s.cost < separate);
        assert!(validate_solution(&i, &s, ValidationMode::Cvrp).is_empty());
    }

    #[test]
    fn capacity_blocks_merging() {
        let i = inst(&[(10.0, 0.0), (10.0, 1.0)], &[60, 60], 100);
        let s = clarke_wright_construct(&i).unwrap();
        assert_eq!(s.routes.len(), 2);
    }

    #[test]
    fn demand_above_capacity_is_infeasible() {
        let i = inst(&[(1.0, 0.0)], &[101], 100);
        assert!(clarke_wright_construct(&i).is_err());
    }

    #[test]
    fn cost_matches_recomputation() {
        let i = inst(
            &[(10.0, 0.0), (12.0, 3.0), (-4.0, 8.0), (0.0, -7.0), (5.0, 5.0)],
            &[20, 30, 25, 35, 10],
            80,
        );
        let s = clarke_wright_construct(&i).unwrap();
        let recomputed = solution_cost(&i, &s).unwrap();
        assert!((s.cost - recomputed).abs() <= 1e-9 * recomputed.max(1.0));
        assert!(validate_solution(&i, &s, ValidationMode::Cvrp).is_empty());
    }
}
