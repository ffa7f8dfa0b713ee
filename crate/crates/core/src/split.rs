//! Demand-splitting strategies.
//!
//! Each strategy replaces every customer with one or more co-located
//! customers whose demands sum exactly to the original demand, turning an
//! SDVRP instance into a CVRP instance:
//!
//! * fixed "coin" rules whose piece sizes are fractions of the vehicle
//!   capacity (20/10/5/1 or 25/10/5/1 percent of Q),
//! * uniform custom rules applied to all customers alike,
//! * the adaptive rule (`pasa`), which clusters customers into distance
//!   rings around the depot and applies coarser rules (larger prime-power
//!   pieces) the further a ring is from the depot.

use crate::model::{Customer, ExpandedInstance, Instance, SplitRule};
use crate::{Error, Result};

/// A fixed splitting rule given as descending fractions of the capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinRule {
    fractions: Vec<f64>,
}

impl CoinRule {
    /// The 20/10/5/1 percent-of-capacity rule.
    pub fn coin20() -> Self {
        Self {
            fractions: vec![0.20, 0.10, 0.05, 0.01],
        }
    }

    /// The 25/10/5/1 percent-of-capacity rule.
    pub fn coin25() -> Self {
        Self {
            fractions: vec![0.25, 0.10, 0.05, 0.01],
        }
    }

    /// Fractions must be strictly descending and inside (0, 1].
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::invalid("coin rule needs at least one fraction"));
        }
        for w in fractions.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::invalid("coin rule fractions must be descending"));
            }
        }
        if fractions[0] > 1.0 || *fractions.last().unwrap() <= 0.0 {
            return Err(Error::invalid("coin rule fractions must lie in (0, 1]"));
        }
        Ok(Self { fractions })
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// Piece sizes for a concrete capacity: round(fraction * Q), each >= 1.
    pub fn denominations(&self, capacity: u64) -> Result<SplitRule> {
        let mut pieces = Vec::with_capacity(self.fractions.len());
        for &f in &self.fractions {
            let piece = (f * capacity as f64).round() as i64;
            if piece < 1 {
                return Err(Error::invalid(format!(
                    "capacity {capacity} is too small for fraction {f} (piece rounds to {piece})"
                )));
            }
            pieces.push(piece as u64);
        }
        SplitRule::new(pieces)
    }
}

/// How to round `log_p(mu)` when deriving the largest piece exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmaxRounding {
    /// Nearest integer, halves up.
    #[default]
    HalfUp,
    Floor,
    Ceil,
}

/// Configuration of the adaptive splitting rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PasaConfig {
    /// Number of distance rings (levels) around the depot.
    pub levels: u32,
    /// Prime base of the piece sizes.
    pub prime: u64,
    /// Rounding applied to log_p(mu); `HalfUp` unless overridden.
    pub smax_rounding: SmaxRounding,
}

impl Default for PasaConfig {
    fn default() -> Self {
        Self {
            levels: 2,
            prime: 2,
            smax_rounding: SmaxRounding::HalfUp,
        }
    }
}

impl PasaConfig {
    pub fn new(levels: u32, prime: u64) -> Result<Self> {
        let cfg = Self {
            levels,
            prime,
            smax_rounding: SmaxRounding::HalfUp,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels < 1 {
            return Err(Error::invalid("pasa needs at least one level"));
        }
        if !is_prime(self.prime) {
            return Err(Error::invalid(format!("{} is not prime", self.prime)));
        }
        Ok(())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Distance-ring labels for every customer.
///
/// Label 1 is the ring nearest the depot and label L the furthest, as the
/// clustering is defined. Rule indices run the other way: the furthest ring
/// gets rule 1, the coarsest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    labels: Vec<u32>,
    levels: u32,
}

impl ClusterLabels {
    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Ring label of a customer, 1 (nearest) ..= L (furthest).
    pub fn label(&self, customer_id: usize) -> Result<u32> {
        self.labels
            .get(customer_id.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown customer id {customer_id}")))
    }

    /// Rule index of a customer: L + 1 - label, so the furthest ring maps
    /// to rule 1.
    pub fn rule_index(&self, customer_id: usize) -> Result<u32> {
        Ok(self.levels + 1 - self.label(customer_id)?)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

/// Partitions customers into `levels` uniformly spaced distance rings
/// around the depot. A customer lands in ring l when its depot distance d
/// satisfies (l-1)/L * dmax < d <= l/L * dmax, with dmax the largest depot
/// distance; a customer co-located with the depot gets ring 1.
pub fn cluster_customers(instance: &Instance, levels: u32) -> Result<ClusterLabels> {
    if levels < 1 {
        return Err(Error::invalid("level count must be at least 1"));
    }
    if instance.n() == 0 {
        return Err(Error::invalid("cannot cluster an empty instance"));
    }
    let dmax = instance.max_depot_distance();
    let labels = instance
        .customers()
        .iter()
        .map(|c| {
            if dmax == 0.0 {
                return 1;
            }
            let d = c.coord.dist(instance.depot());
            let l = (d * levels as f64 / dmax).ceil() as i64;
            l.clamp(1, levels as i64) as u32
        })
        .collect();
    Ok(ClusterLabels { labels, levels })
}

/// The derived quantities behind a set of adaptive rules. Useful for
/// reporting what a given instance will be split with.
#[derive(Debug, Clone, PartialEq)]
pub struct PasaPlan {
    /// gcd of the capacity and all demands: the delivery granularity.
    pub gcd: u64,
    /// Mean of demand/gcd over all customers.
    pub mean_scaled_demand: f64,
    /// Rounded log_p of the mean; exponent of the largest piece in rule 1.
    pub s_max: i64,
    /// One rule per level; index 0 is rule 1, the coarsest.
    pub rules: Vec<SplitRule>,
}

/// Derives the per-ring splitting rules for an instance.
///
/// With d = gcd(Q, demands), mu = mean(demand/d) and s_max the rounded
/// log_p(mu), rule i consists of the pieces d * p^e for e in
/// 0 ..= s_max - i + 1, descending, with pieces above the capacity dropped.
/// When the exponent range is empty the rule degenerates to {d}.
pub fn pasa_plan(instance: &Instance, config: &PasaConfig) -> Result<PasaPlan> {
    config.validate()?;
    if instance.n() == 0 {
        return Err(Error::invalid("cannot build rules for an empty instance"));
    }
    let q = instance.capacity();
    let mut d = q;
    for c in instance.customers() {
        d = gcd(d, c.demand);
    }
    let mu = instance
        .customers()
        .iter()
        .map(|c| (c.demand / d) as f64)
        .sum::<f64>()
        / instance.n() as f64;
    let log = mu.ln() / (config.prime as f64).ln();
    let s_max = match config.smax_rounding {
        SmaxRounding::HalfUp => log.round() as i64,
        SmaxRounding::Floor => log.floor() as i64,
        SmaxRounding::Ceil => log.ceil() as i64,
    };

    let mut rules = Vec::with_capacity(config.levels as usize);
    for i in 1..=config.levels as i64 {
        let max_exp = s_max - i + 1;
        let mut pieces = vec![d];
        let mut piece = d;
        let mut e = 0;
        while e < max_exp {
            piece = match piece.checked_mul(config.prime) {
                Some(p) => p,
                None => break,
            };
            if piece > q {
                // Pieces above the capacity can never be served.
                break;
            }
            pieces.push(piece);
            e += 1;
        }
        pieces.reverse();
        rules.push(SplitRule::new(pieces)?);
    }

    Ok(PasaPlan {
        gcd: d,
        mean_scaled_demand: mu,
        s_max,
        rules,
    })
}

/// The per-ring rules alone; rule index 1 (the coarsest) first.
pub fn build_pasa_rules(instance: &Instance, config: &PasaConfig) -> Result<Vec<SplitRule>> {
    Ok(pasa_plan(instance, config)?.rules)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Greedy largest-first decomposition of a demand by a rule.
///
/// Repeatedly subtracts the largest piece that still fits; the piece sums
/// reproduce the demand exactly. The smallest piece must divide the demand,
/// otherwise the remainder is unservable and an error is returned.
pub fn greedy_decompose(demand: u64, rule: &SplitRule) -> Result<Vec<u64>> {
    if demand == 0 {
        return Err(Error::invalid("cannot decompose a zero demand"));
    }
    let mut remaining = demand;
    let mut pieces = Vec::new();
    for &p in rule.pieces() {
        while p <= remaining {
            pieces.push(p);
            remaining -= p;
        }
    }
    if remaining != 0 {
        return Err(Error::invalid(format!(
            "demand {demand} leaves indivisible remainder {remaining} under rule {rule}"
        )));
    }
    Ok(pieces)
}

/// Greedy decomposition that keeps any remainder smaller than the last
/// piece as one extra piece, so the sum is always exact.
fn decompose_with_residual(demand: u64, rule: &SplitRule) -> Vec<u64> {
    let mut remaining = demand;
    let mut pieces = Vec::new();
    for &p in rule.pieces() {
        while p <= remaining {
            pieces.push(p);
            remaining -= p;
        }
    }
    if remaining > 0 {
        pieces.push(remaining);
    }
    pieces
}

/// Applies one rule to every customer, greedy largest-first; a remainder
/// below the smallest piece becomes one extra piece so no demand is lost.
pub fn uniform_expand(instance: &Instance, rule: &SplitRule) -> Result<ExpandedInstance> {
    if rule.largest() > instance.capacity() {
        return Err(Error::invalid(format!(
            "rule piece {} exceeds capacity {}",
            rule.largest(),
            instance.capacity()
        )));
    }
    expand_with(instance, |c| Ok(decompose_with_residual(c.demand, rule)))
}

/// Expands an instance with a fixed coin rule.
pub fn coin_expand(instance: &Instance, rule: &CoinRule) -> Result<ExpandedInstance> {
    let denominations = rule.denominations(instance.capacity())?;
    uniform_expand(instance, &denominations)
}

/// Expands an instance with the adaptive rule: customers are clustered
/// into distance rings and each ring's rule is applied greedily, with the
/// coarsest rule (index 1) on the furthest ring.
pub fn pasa_expand(instance: &Instance, config: &PasaConfig) -> Result<ExpandedInstance> {
    config.validate()?;
    if instance.n() == 0 {
        return identity_expansion(instance);
    }
    let labels = cluster_customers(instance, config.levels)?;
    let plan = pasa_plan(instance, config)?;
    expand_with(instance, |c| {
        let rule_idx = labels.rule_index(c.id)? as usize;
        greedy_decompose(c.demand, &plan.rules[rule_idx - 1])
    })
}

/// The identity expansion: the CVRP instance is the SDVRP instance itself.
/// Fails when some demand exceeds the capacity, because then the instance
/// has no unsplit solution.
pub fn no_split_expand(instance: &Instance) -> Result<ExpandedInstance> {
    for c in instance.customers() {
        if c.demand > instance.capacity() {
            return Err(Error::Infeasible(format!(
                "customer {} demands {} > capacity {}; splitting is required",
                c.id,
                c.demand,
                instance.capacity()
            )));
        }
    }
    identity_expansion(instance)
}

fn identity_expansion(instance: &Instance) -> Result<ExpandedInstance> {
    let origin = (1..=instance.n()).collect();
    ExpandedInstance::new(instance, instance.clone(), origin)
}

/// Shared expansion driver: expanded ids are assigned in original-customer
/// order, then piece order, so expansions are deterministic.
fn expand_with<F>(instance: &Instance, mut pieces_for: F) -> Result<ExpandedInstance>
where
    F: FnMut(&Customer) -> Result<Vec<u64>>,
{
    let mut expanded = Vec::new();
    let mut origin = Vec::new();
    for c in instance.customers() {
        if c.demand == 0 {
            return Err(Error::invalid(format!("customer {} has zero demand", c.id)));
        }
        for piece in pieces_for(c)? {
            expanded.push(Customer {
                id: expanded.len() + 1,
                coord: c.coord,
                demand: piece,
            });
            origin.push(c.id);
        }
    }
    let cvrp = Instance::new(
        instance.name(),
        instance.depot(),
        expanded,
        instance.capacity(),
    )?;
    ExpandedInstance::new(instance, cvrp, origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;

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

    fn demands_of(exp: &ExpandedInstance, origin_id: usize) -> Vec<u64> {
        exp.cvrp
            .customers()
            .iter()
            .zip(exp.origin_map())
            .filter(|(_, &o)| o == origin_id)
            .map(|(c, _)| c.demand)
            .collect()
    }

    #[test]
    fn coin20_denominations_for_q100() {
        let rule = CoinRule::coin20().denominations(100).unwrap();
        assert_eq!(rule.pieces(), &[20, 10, 5, 1]);
        let rule25 = CoinRule::coin25().denominations(100).unwrap();
        assert_eq!(rule25.pieces(), &[25, 10, 5, 1]);
    }

    #[test]
    fn coin_rejects_tiny_capacity() {
        assert!(CoinRule::coin20().denominations(20).is_err());
    }

    #[test]
    fn coin_expand_q100_d60() {
        let i = inst(&[(1.0, 0.0)], &[60], 100);
        let exp = coin_expand(&i, &CoinRule::coin20()).unwrap();
        assert_eq!(demands_of(&exp, 1), vec![20, 20, 20]);
    }

    #[test]
    fn coin_expand_q200_d199_keeps_residual() {
        let i = inst(&[(1.0, 0.0)], &[199], 200);
        let exp = coin_expand(&i, &CoinRule::coin20()).unwrap();
        assert_eq!(
            demands_of(&exp, 1),
            vec![40, 40, 40, 40, 20, 10, 2, 2, 2, 2, 1]
        );
    }

    #[test]
    fn coin_expand_single_denomination_fixed_point() {
        let i = inst(&[(1.0, 0.0)], &[20], 100);
        let exp = coin_expand(&i, &CoinRule::coin20()).unwrap();
        assert_eq!(exp.cvrp.n(), 1);
        assert_eq!(demands_of(&exp, 1), vec![20]);
    }

    #[test]
    fn cluster_labels_follow_ring_bounds() {
        // dmax = 100: ring 1 is (0, 50], ring 2 is (50, 100].
        let i = inst(&[(30.0, 0.0), (100.0, 0.0), (50.0, 0.0)], &[1, 1, 1], 10);
        let labels = cluster_customers(&i, 2).unwrap();
        assert_eq!(labels.label(1).unwrap(), 1);
        assert_eq!(labels.label(2).unwrap(), 2);
        assert_eq!(labels.label(3).unwrap(), 1);
        assert_eq!(labels.rule_index(1).unwrap(), 2);
        assert_eq!(labels.rule_index(2).unwrap(), 1);
    }

    #[test]
    fn cluster_single_level_degenerates() {
        let i = inst(&[(30.0, 0.0), (100.0, 0.0)], &[1, 1], 10);
        let labels = cluster_customers(&i, 1).unwrap();
        assert_eq!(labels.labels(), &[1, 1]);
        assert!(cluster_customers(&i, 0).is_err());
    }

    #[test]
    fn cluster_handles_depot_colocated() {
        let i = inst(&[(0.0, 0.0), (10.0, 0.0)], &[1, 1], 10);
        let labels = cluster_customers(&i, 3).unwrap();
        assert_eq!(labels.label(1).unwrap(), 1);
        assert_eq!(labels.label(2).unwrap(), 3);
    }

    #[test]
    fn plan_reproduces_two_level_q100_worked_example() {
        let i = inst(
            &[(10.0, 0.0), (100.0, 0.0)],
            &[60, 90],
            100,
        );
        let plan = pasa_plan(&i, &PasaConfig::default()).unwrap();
        assert_eq!(plan.gcd, 10);
        assert_eq!(plan.mean_scaled_demand, 7.5);
        assert_eq!(plan.s_max, 3);
        assert_eq!(plan.rules[0].pieces(), &[80, 40, 20, 10]);
        assert_eq!(plan.rules[1].pieces(), &[40, 20, 10]);
    }

    #[test]
    fn plan_uniform_full_demands_degenerates() {
        let i = inst(&[(1.0, 0.0), (2.0, 0.0)], &[100, 100], 100);
        let plan = pasa_plan(&i, &PasaConfig::default()).unwrap();
        assert_eq!(plan.gcd, 100);
        assert_eq!(plan.mean_scaled_demand, 1.0);
        assert_eq!(plan.s_max, 0);
        for rule in &plan.rules {
            assert_eq!(rule.pieces(), &[100]);
        }
    }

    #[test]
    fn plan_drops_pieces_above_capacity() {
        let i = inst(&[(1.0, 0.0), (2.0, 0.0)], &[199, 199], 200);
        let plan = pasa_plan(&i, &PasaConfig::default()).unwrap();
        assert_eq!(plan.gcd, 1);
        assert_eq!(plan.s_max, 8);
        // 256 would be the top piece of rule 1 but exceeds the capacity.
        assert_eq!(plan.rules[0].pieces(), &[128, 64, 32, 16, 8, 4, 2, 1]);
    }

    #[test]
    fn greedy_decompose_prime_powers() {
        let full = SplitRule::new(vec![128, 64, 32, 16, 8, 4, 2, 1]).unwrap();
        assert_eq!(greedy_decompose(199, &full).unwrap(), vec![128, 64, 4, 2, 1]);
        let base3 = SplitRule::new(vec![81, 27, 9, 3, 1]).unwrap();
        assert_eq!(greedy_decompose(199, &base3).unwrap(), vec![81, 81, 27, 9, 1]);
    }

    #[test]
    fn greedy_decompose_ring_rules() {
        let coarse = SplitRule::new(vec![80, 40, 20, 10]).unwrap();
        assert_eq!(greedy_decompose(90, &coarse).unwrap(), vec![80, 10]);
        let fine = SplitRule::new(vec![40, 20, 10]).unwrap();
        assert_eq!(greedy_decompose(90, &fine).unwrap(), vec![40, 40, 10]);
    }

    #[test]
    fn greedy_decompose_rejects_indivisible() {
        let rule = SplitRule::new(vec![7, 3]).unwrap();
        assert!(greedy_decompose(9, &rule).is_err());
    }

    #[test]
    fn pasa_expand_two_ring_fixture() {
        // Far customer gets the coarse rule (80+10), near one the fine rule
        // (40+40+10): five expanded nodes in total.
        let i = inst(&[(100.0, 0.0), (10.0, 0.0)], &[90, 90], 100);
        let exp = pasa_expand(&i, &PasaConfig::default()).unwrap();
        assert_eq!(exp.cvrp.n(), 5);
        assert_eq!(demands_of(&exp, 1), vec![80, 10]);
        assert_eq!(demands_of(&exp, 2), vec![40, 40, 10]);
    }

    #[test]
    fn pasa_single_level_equals_uniform_rule_one() {
        let i = inst(&[(10.0, 0.0), (100.0, 0.0)], &[60, 90], 100);
        let cfg = PasaConfig {
            levels: 1,
            ..Default::default()
        };
        let exp = pasa_expand(&i, &cfg).unwrap();
        let rules = build_pasa_rules(&i, &cfg).unwrap();
        let uniform = uniform_expand(&i, &rules[0]).unwrap();
        assert_eq!(exp, uniform);
    }

    #[test]
    fn pasa_identity_when_demands_equal_capacity() {
        let i = inst(&[(10.0, 0.0), (100.0, 0.0)], &[100, 100], 100);
        let exp = pasa_expand(&i, &PasaConfig::default()).unwrap();
        assert_eq!(exp.cvrp, i);
        assert_eq!(exp.origin_map(), &[1, 2]);
    }

    #[test]
    fn no_split_is_identity_or_infeasible() {
        let ok = inst(&[(1.0, 0.0)], &[100], 100);
        let exp = no_split_expand(&ok).unwrap();
        assert_eq!(exp.cvrp, ok);
        assert_eq!(exp.origin_map(), &[1]);

        let bad = inst(&[(1.0, 0.0)], &[101], 100);
        assert!(matches!(
            no_split_expand(&bad),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn pasa_config_validates_prime() {
        assert!(PasaConfig::new(2, 4).is_err());
        assert!(PasaConfig::new(2, 1).is_err());
        assert!(PasaConfig::new(0, 2).is_err());
        assert!(PasaConfig::new(3, 7).is_ok());
    }

    #[test]
    fn smax_rounding_override() {
        let i = inst(&[(10.0, 0.0), (100.0, 0.0)], &[60, 90], 100);
        let floor_cfg = PasaConfig {
            smax_rounding: SmaxRounding::Floor,
            ..Default::default()
        };
        let plan = pasa_plan(&i, &floor_cfg).unwrap();
        assert_eq!(plan.s_max, 2);
        assert_eq!(plan.rules[0].pieces(), &[40, 20, 10]);
    }
}
