//! Benchmark harness: best-known cost table, instance generators for
//! desk-scale analogues of the standard benchmark families, a suite runner,
//! CSV reports and SVG route plots.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cvrp::CvrpSolverConfig;
use crate::model::{Customer, Instance, Point, Solution};
use crate::sdvrp::{gap, solve_sdvrp, Strategy};
use crate::{Error, Result};

/// Best-known costs shipped with the crate.
const BUILTIN_BEST_KNOWN: &str = include_str!("../data/best_known.txt");

/// Instance name -> best-known cost.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BestKnownTable {
    entries: BTreeMap<String, f64>,
}

impl BestKnownTable {
    /// Parses `<name> <cost>` lines; `#` starts a comment. Duplicate names
    /// and non-positive costs are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let name = fields.next().unwrap().to_string();
            let cost: f64 = fields
                .next()
                .ok_or_else(|| Error::parse(lineno, "expected `<name> <cost>`"))?
                .parse()
                .map_err(|_| Error::parse(lineno, "cost is not a number"))?;
            if fields.next().is_some() {
                return Err(Error::parse(lineno, "trailing fields after cost"));
            }
            if cost <= 0.0 {
                return Err(Error::parse(lineno, format!("non-positive cost {cost}")));
            }
            if entries.insert(name.clone(), cost).is_some() {
                return Err(Error::parse(lineno, format!("duplicate instance `{name}`")));
            }
        }
        Ok(Self { entries })
    }

    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_BEST_KNOWN).expect("builtin best-known table must parse")
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Preset demand ranges `[aQ, bQ]` used by the random-demand family.
pub const DEMAND_RANGE_PRESETS: [(f64, f64); 6] = [
    (0.01, 0.1),
    (0.1, 0.3),
    (0.1, 0.5),
    (0.1, 0.9),
    (0.3, 0.7),
    (0.7, 0.9),
];

/// Which synthetic instance family to generate.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Customers evenly spaced on concentric circles around the depot,
    /// demands drawn from {60, 90}.
    Concentric { rings: u32 },
    /// Coordinates uniform in a square, demands uniform in [aQ, bQ].
    RandomDemand { a: f64, b: f64 },
    /// Coordinates uniform in a square, demands uniform in [1, 0.9Q].
    NoPattern,
}

/// Full description of a generated instance; the same spec always yields
/// the same instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub capacity: u64,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Canonical instance name derived from the parameters.
    pub fn name(&self) -> String {
        match &self.family {
            Family::Concentric { rings } => {
                format!("ring-n{}-r{}-s{}", self.n, rings, self.seed)
            }
            Family::RandomDemand { a, b } => format!(
                "rand-n{}-q{}-a{:02}b{:02}-s{}",
                self.n,
                self.capacity,
                (a * 100.0).round() as u32,
                (b * 100.0).round() as u32,
                self.seed
            ),
            Family::NoPattern => format!("free-n{}-q{}-s{}", self.n, self.capacity, self.seed),
        }
    }
}

/// Dispatches to the family generators.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    match spec.family {
        Family::Concentric { .. } => generate_concentric(spec),
        Family::RandomDemand { .. } => generate_random_demand(spec),
        Family::NoPattern => generate_no_pattern(spec),
    }
}

/// Depot at the origin, customers evenly spaced by angle on `rings`
/// concentric circles of radii 10, 20, ...; demands drawn uniformly from
/// {60, 90}. The capacity must be at least 100 so the unsplit baseline
/// stays feasible.
pub fn generate_concentric(spec: &GeneratorSpec) -> Result<Instance> {
    let Family::Concentric { rings } = spec.family else {
        return Err(Error::invalid("spec family is not concentric"));
    };
    if rings < 1 || spec.n < rings as usize {
        return Err(Error::invalid(
            "need n >= rings >= 1 for the concentric family",
        ));
    }
    if spec.capacity < 100 {
        return Err(Error::invalid(
            "concentric family demands {60, 90} need capacity >= 100",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut customers = Vec::with_capacity(spec.n);
    let base = spec.n / rings as usize;
    let extra = spec.n % rings as usize;
    for ring in 0..rings as usize {
        let count = base + usize::from(ring < extra);
        let radius = 10.0 * (ring + 1) as f64;
        for k in 0..count {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            let demand = if rng.gen_bool(0.5) { 60 } else { 90 };
            customers.push(Customer {
                id: customers.len() + 1,
                coord: Point::new(radius * angle.cos(), radius * angle.sin()),
                demand,
            });
        }
    }
    Instance::new(spec.name(), Point::new(0.0, 0.0), customers, spec.capacity)
}

/// Coordinates uniform in [0, 100]^2, demands uniform integers in
/// [round(aQ), round(bQ)], clamped to at least 1.
pub fn generate_random_demand(spec: &GeneratorSpec) -> Result<Instance> {
    let Family::RandomDemand { a, b } = spec.family else {
        return Err(Error::invalid("spec family is not random-demand"));
    };
    if !(a > 0.0 && a < b && b <= 1.0) {
        return Err(Error::invalid(format!(
            "demand bounds must satisfy 0 < a < b <= 1, got ({a}, {b})"
        )));
    }
    let lo = ((a * spec.capacity as f64).round() as u64).max(1);
    let hi = ((b * spec.capacity as f64).round() as u64).max(lo);
    generate_square(spec, |rng| rng.gen_range(lo..=hi))
}

/// Coordinates uniform in [0, 100]^2, demands uniform in [1, 0.9Q].
pub fn generate_no_pattern(spec: &GeneratorSpec) -> Result<Instance> {
    if spec.family != Family::NoPattern {
        return Err(Error::invalid("spec family is not no-pattern"));
    }
    let hi = ((0.9 * spec.capacity as f64).round() as u64).max(1);
    generate_square(spec, |rng| rng.gen_range(1..=hi))
}

fn generate_square<F>(spec: &GeneratorSpec, mut draw_demand: F) -> Result<Instance>
where
    F: FnMut(&mut ChaCha8Rng) -> u64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut customers = Vec::with_capacity(spec.n);
    for k in 0..spec.n {
        let x = rng.gen_range(0.0..100.0);
        let y = rng.gen_range(0.0..100.0);
        let demand = draw_demand(&mut rng);
        customers.push(Customer {
            id: k + 1,
            coord: Point::new(x, y),
            demand,
        });
    }
    Instance::new(spec.name(), Point::new(0.0, 0.0), customers, spec.capacity)
}

/// One row of a benchmark report. Failed runs carry the error message and
/// leave the metric fields empty; average rows aggregate one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub strategy: String,
    pub expanded_nodes: Option<usize>,
    pub cost: Option<f64>,
    pub best_known: Option<f64>,
    pub gap_pct: Option<f64>,
    pub time_seconds: Option<f64>,
    pub seed: Option<u64>,
    pub error: Option<String>,
}

/// Runs every (instance, strategy, seed) cell through the pipeline and
/// appends one average row per strategy, mirroring benchmark tables.
///
/// Cell failures are recorded in their row and never abort the suite. With
/// `jobs > 1` the cells run on a worker pool; rows come back in cell order
/// regardless of completion order.
pub fn run_suite(
    instances: &[Instance],
    strategies: &[Strategy],
    config: &CvrpSolverConfig,
    seeds: &[u64],
    best_known: &BestKnownTable,
    jobs: usize,
) -> Vec<BenchRecord> {
    let mut cells = Vec::new();
    for instance in instances {
        for strategy in strategies {
            for &seed in seeds {
                cells.push((instance, strategy, seed));
            }
        }
    }

    let results: Vec<Option<BenchRecord>> = {
        let slots = Mutex::new(vec![None; cells.len()]);
        let next = AtomicUsize::new(0);
        let workers = jobs.max(1).min(cells.len().max(1));
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::SeqCst);
                    if k >= cells.len() {
                        break;
                    }
                    let (instance, strategy, seed) = cells[k];
                    let record = run_cell(instance, strategy, seed, config, best_known);
                    slots.lock().unwrap()[k] = Some(record);
                });
            }
        });
        slots.into_inner().unwrap()
    };

    let mut records: Vec<BenchRecord> = results.into_iter().flatten().collect();

    for strategy in strategies {
        let name = strategy.to_string();
        let rows: Vec<&BenchRecord> = records
            .iter()
            .filter(|r| r.strategy == name && r.error.is_none())
            .collect();
        let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap_pct).collect();
        let times: Vec<f64> = rows.iter().filter_map(|r| r.time_seconds).collect();
        records.push(BenchRecord {
            instance: "average".to_string(),
            strategy: name,
            expanded_nodes: None,
            cost: None,
            best_known: None,
            gap_pct: mean(&gaps),
            time_seconds: mean(&times),
            seed: None,
            error: None,
        });
    }
    records
}

fn run_cell(
    instance: &Instance,
    strategy: &Strategy,
    seed: u64,
    config: &CvrpSolverConfig,
    best_known: &BestKnownTable,
) -> BenchRecord {
    let cell_config = CvrpSolverConfig {
        seed,
        ..config.clone()
    };
    match solve_sdvrp(instance, strategy, &cell_config) {
        Ok(result) => {
            let best = best_known.get(instance.name());
            let gap_pct = best.map(|b| gap(result.cost, b).expect("positive best-known"));
            BenchRecord {
                instance: instance.name().to_string(),
                strategy: strategy.to_string(),
                expanded_nodes: Some(result.expanded_nodes),
                cost: Some(result.cost),
                best_known: best,
                gap_pct,
                time_seconds: Some(result.wall_time_seconds),
                seed: Some(seed),
                error: None,
            }
        }
        Err(e) => BenchRecord {
            instance: instance.name().to_string(),
            strategy: strategy.to_string(),
            expanded_nodes: None,
            cost: None,
            best_known: best_known.get(instance.name()),
            gap_pct: None,
            time_seconds: None,
            seed: Some(seed),
            error: Some(e.to_string()),
        },
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Renders records as CSV with the columns
/// `instance,strategy,m,cost,best_known,gap_pct,time_s,seed`.
/// Costs, gaps and times are written with two decimals; missing values are
/// empty cells (failed cells leave every metric empty). Fields containing
/// commas (the parameterized strategy names do) are quoted.
pub fn emit_report_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("instance,strategy,m,cost,best_known,gap_pct,time_s,seed\n");
    for r in records {
        let fmt2 = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_field(&r.instance),
            csv_field(&r.strategy),
            r.expanded_nodes.map(|m| m.to_string()).unwrap_or_default(),
            fmt2(r.cost),
            fmt2(r.best_known),
            fmt2(r.gap_pct),
            fmt2(r.time_seconds),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        )
        .unwrap();
    }
    out
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Clears the wall-time field of every record, for byte-reproducible
/// reports.
pub fn strip_times(records: &mut [BenchRecord]) {
    for r in records {
        r.time_seconds = None;
    }
}

const ROUTE_COLORS: [&str; 10] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#9a6324",
    "#008080", "#808000",
];

/// Draws an instance and its solution as an SVG: depot square, customer
/// dots scaled by demand, one colored polyline per route and a legend with
/// the cost.
pub fn emit_route_svg(instance: &Instance, solution: &Solution) -> Result<String> {
    for route in &solution.routes {
        for v in &route.visits {
            instance.customer(v.customer)?;
        }
    }

    let depot = instance.depot();
    let mut min_x = depot.x;
    let mut max_x = depot.x;
    let mut min_y = depot.y;
    let mut max_y = depot.y;
    for c in instance.customers() {
        min_x = min_x.min(c.coord.x);
        max_x = max_x.max(c.coord.x);
        min_y = min_y.min(c.coord.y);
        max_y = max_y.max(c.coord.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1.0);
    let margin = 0.08 * span;
    // Flip y so the plot reads like plane coordinates.
    let tx = |p: Point| p.x;
    let ty = |p: Point| max_y - p.y + min_y;

    let max_demand = instance
        .customers()
        .iter()
        .map(|c| c.demand)
        .max()
        .unwrap_or(1)
        .max(1) as f64;

    let mut out = String::new();
    writeln!(
        out,
        "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        min_x - margin,
        min_y - margin,
        (max_x - min_x) + 2.0 * margin,
        (max_y - min_y) + 2.0 * margin + 0.1 * span,
    )
    .unwrap();

    for (k, route) in solution
        .routes
        .iter()
        .filter(|r| !r.visits.is_empty())
        .enumerate()
    {
        let color = ROUTE_COLORS[k % ROUTE_COLORS.len()];
        let mut points = Vec::with_capacity(route.visits.len() + 2);
        points.push(depot);
        for v in &route.visits {
            points.push(instance.customer(v.customer)?.coord);
        }
        points.push(depot);
        let path: Vec<String> = points
            .iter()
            .map(|&p| format!("{:.3},{:.3}", tx(p), ty(p)))
            .collect();
        writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3}\"/>",
            path.join(" "),
            color,
            0.004 * span,
        )
        .unwrap();
    }

    for c in instance.customers() {
        let r = 0.006 * span + 0.012 * span * (c.demand as f64 / max_demand).sqrt();
        writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"#333333\"/>",
            tx(c.coord),
            ty(c.coord),
            r,
        )
        .unwrap();
    }

    let ds = 0.02 * span;
    writeln!(
        out,
        "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#000000\"/>",
        tx(depot) - ds,
        ty(depot) - ds,
        2.0 * ds,
        2.0 * ds,
    )
    .unwrap();

    writeln!(
        out,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"{:.3}\">cost {:.2}, {} routes</text>",
        min_x - margin + 0.02 * span,
        max_y - min_y + min_y + margin + 0.07 * span,
        0.05 * span,
        solution.cost,
        solution.routes.iter().filter(|r| !r.visits.is_empty()).count(),
    )
    .unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Route, Visit};

    #[test]
    fn best_known_parses_rows() {
        let t = BestKnownTable::parse("# comment\nSD1 228.28\neil22 375.28\n").unwrap();
        assert_eq!(t.get("SD1"), Some(228.28));
        assert_eq!(t.get("eil22"), Some(375.28));
        assert_eq!(t.get("nope"), None);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn best_known_rejects_duplicates_and_bad_costs() {
        assert!(BestKnownTable::parse("SD1 228.28\nSD1 230.0\n").is_err());
        assert!(BestKnownTable::parse("SD1 -5\n").is_err());
        assert!(BestKnownTable::parse("SD1 0\n").is_err());
        assert!(BestKnownTable::parse("SD1\n").is_err());
    }

    #[test]
    fn builtin_table_loads() {
        let t = BestKnownTable::builtin();
        assert_eq!(t.get("SD1"), Some(228.28));
        assert_eq!(t.get("eil22"), Some(375.28));
        assert_eq!(t.len(), 81);
    }

    #[test]
    fn concentric_single_ring_geometry() {
        let spec = GeneratorSpec {
            family: Family::Concentric { rings: 1 },
            n: 4,
            capacity: 100,
            seed: 0,
        };
        let inst = generate_concentric(&spec).unwrap();
        assert_eq!(inst.n(), 4);
        for c in inst.customers() {
            let d = c.coord.dist(inst.depot());
            assert!((d - 10.0).abs() < 1e-9);
            assert!(c.demand == 60 || c.demand == 90);
        }
        // 90 degree spacing: consecutive dot products vanish.
        let a = inst.customers()[0].coord;
        let b = inst.customers()[1].coord;
        assert!((a.x * b.x + a.y * b.y).abs() < 1e-9);
    }

    #[test]
    fn generators_are_seed_deterministic() {
        for family in [
            Family::Concentric { rings: 2 },
            Family::RandomDemand { a: 0.1, b: 0.3 },
            Family::NoPattern,
        ] {
            let spec = GeneratorSpec {
                family,
                n: 12,
                capacity: 160,
                seed: 42,
            };
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }

    #[test]
    fn random_demand_bounds_hold() {
        let spec = GeneratorSpec {
            family: Family::RandomDemand { a: 0.7, b: 0.9 },
            n: 60,
            capacity: 160,
            seed: 3,
        };
        let inst = generate_random_demand(&spec).unwrap();
        for c in inst.customers() {
            assert!((112..=144).contains(&c.demand), "demand {}", c.demand);
        }

        let spec = GeneratorSpec {
            family: Family::RandomDemand { a: 0.01, b: 0.1 },
            n: 60,
            capacity: 200,
            seed: 3,
        };
        let inst = generate_random_demand(&spec).unwrap();
        for c in inst.customers() {
            assert!((2..=20).contains(&c.demand), "demand {}", c.demand);
        }
    }

    #[test]
    fn random_demand_rejects_bad_bounds() {
        let bad = GeneratorSpec {
            family: Family::RandomDemand { a: 0.5, b: 0.4 },
            n: 5,
            capacity: 100,
            seed: 0,
        };
        assert!(generate_random_demand(&bad).is_err());
    }

    #[test]
    fn suite_shapes_and_averages() {
        let instances = vec![generate(&GeneratorSpec {
            family: Family::Concentric { rings: 1 },
            n: 4,
            capacity: 100,
            seed: 1,
        })
        .unwrap()];
        let strategies = vec![Strategy::NoSplit, Strategy::Coin20];
        let records = run_suite(
            &instances,
            &strategies,
            &CvrpSolverConfig::default(),
            &[0],
            &BestKnownTable::default(),
            1,
        );
        assert_eq!(records.len(), 4); // 2 cells + 2 averages
        assert!(records[0].gap_pct.is_none()); // no best-known entry
        assert!(records[0].cost.is_some());
        assert_eq!(records[2].instance, "average");
        assert_eq!(records[3].instance, "average");
    }

    #[test]
    fn suite_gap_matches_independent_recomputation() {
        let instances = vec![generate(&GeneratorSpec {
            family: Family::Concentric { rings: 1 },
            n: 4,
            capacity: 100,
            seed: 9,
        })
        .unwrap()];
        let best = BestKnownTable::parse(&format!("{} 100.0\n", instances[0].name())).unwrap();
        let records = run_suite(
            &instances,
            &[Strategy::Coin20],
            &CvrpSolverConfig::default(),
            &[0],
            &best,
            1,
        );
        let row = &records[0];
        let expected = gap(row.cost.unwrap(), 100.0).unwrap();
        assert!((row.gap_pct.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn suite_records_failures_per_row() {
        // Demand above capacity: the unsplit baseline must fail, the
        // splitting strategies must not.
        let inst = Instance::new(
            "big",
            Point::new(0.0, 0.0),
            vec![Customer {
                id: 1,
                coord: Point::new(3.0, 4.0),
                demand: 150,
            }],
            100,
        )
        .unwrap();
        let records = run_suite(
            &[inst],
            &[Strategy::NoSplit, Strategy::Coin20],
            &CvrpSolverConfig::default(),
            &[0],
            &BestKnownTable::default(),
            2,
        );
        assert!(records[0].error.is_some());
        assert!(records[0].cost.is_none());
        assert!(records[1].error.is_none());
        // 150 units at distance 5 need two vehicles of capacity 100.
        assert_eq!(records[1].cost, Some(20.0));
    }

    #[test]
    fn csv_layout() {
        let records = vec![BenchRecord {
            instance: "SD1".into(),
            strategy: "coin20".into(),
            expanded_nodes: Some(12),
            cost: Some(230.0),
            best_known: Some(228.28),
            gap_pct: Some(0.7534),
            time_seconds: Some(0.134),
            seed: Some(0),
            error: None,
        }];
        let csv = emit_report_csv(&records);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "instance,strategy,m,cost,best_known,gap_pct,time_s,seed"
        );
        assert_eq!(lines.next().unwrap(), "SD1,coin20,12,230.00,228.28,0.75,0.13,0");
        assert!(emit_report_csv(&[]).lines().count() == 1);
    }

    #[test]
    fn csv_quotes_parameterized_strategy_names() {
        let records = vec![BenchRecord {
            instance: "SD1".into(),
            strategy: "pasa:L=2,p=2".into(),
            expanded_nodes: Some(5),
            cost: Some(1.0),
            best_known: None,
            gap_pct: None,
            time_seconds: None,
            seed: Some(0),
            error: None,
        }];
        let csv = emit_report_csv(&records);
        assert!(csv.contains("SD1,\"pasa:L=2,p=2\",5,1.00,,,,0"));
    }

    #[test]
    fn svg_single_route_single_polyline() {
        let inst = Instance::new(
            "plot",
            Point::new(0.0, 0.0),
            vec![Customer {
                id: 1,
                coord: Point::new(3.0, 4.0),
                demand: 10,
            }],
            100,
        )
        .unwrap();
        let sol = Solution::from_routes(
            &inst,
            vec![Route::new(vec![Visit {
                customer: 1,
                quantity: 10,
            }])],
        )
        .unwrap();
        let svg = emit_route_svg(&inst, &sol).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("cost 10.00"));

        let empty = emit_route_svg(&inst, &Solution::empty()).unwrap();
        assert_eq!(empty.matches("<polyline").count(), 0);
        assert!(empty.contains("<circle"));
    }

    #[test]
    fn svg_rejects_unknown_customer() {
        let inst = Instance::new(
            "plot",
            Point::new(0.0, 0.0),
            vec![Customer {
                id: 1,
                coord: Point::new(3.0, 4.0),
                demand: 10,
            }],
            100,
        )
        .unwrap();
        let sol = Solution {
            routes: vec![Route::new(vec![Visit {
                customer: 99,
                quantity: 1,
            }])],
            cost: 0.0,
        };
        assert!(emit_route_svg(&inst, &sol).is_err());
    }
}
