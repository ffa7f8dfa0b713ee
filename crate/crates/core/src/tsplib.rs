//! Instance and solution file I/O.
//!
//! Instances use a TSPLIB-like text layout (NAME/TYPE/DIMENSION/CAPACITY
//! headers, NODE_COORD_SECTION, DEMAND_SECTION, optional DEPOT_SECTION).
//! Solutions use one `ROUTE k : c1(q1) c2(q2) ...` line per route followed
//! by a `COST <value>` line, since per-visit quantities are first-class in
//! split-delivery solutions.
//!
//! Both LF and CRLF inputs are accepted; output always uses LF. Unknown
//! header keys are ignored with a warning so files from public instance
//! repositories parse unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{Customer, Instance, Point, Route, Solution, Visit};
use crate::{Error, Result};

/// Parses a TSPLIB-like CVRP/SDVRP instance.
///
/// `EDGE_WEIGHT_TYPE`, when present, must be `EUC_2D` (distances are exact
/// Euclidean values). Node 1 is the depot unless a `DEPOT_SECTION` says
/// otherwise; the depot's listed demand, if any, must be 0. Demands must be
/// integers.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut capacity: Option<u64> = None;
    let mut coords: BTreeMap<usize, Point> = BTreeMap::new();
    let mut demands: BTreeMap<usize, u64> = BTreeMap::new();
    let mut depot_node: Option<usize> = None;

    let mut lines = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .enumerate()
        .peekable();

    while let Some((idx, raw)) = lines.next() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let upper = line.to_ascii_uppercase();
        if upper == "EOF" {
            break;
        }

        if upper.starts_with("NODE_COORD_SECTION") {
            let dim = dimension
                .ok_or_else(|| Error::parse(lineno, "NODE_COORD_SECTION before DIMENSION"))?;
            for _ in 0..dim {
                let (no, entry) = next_entry(&mut lines, "NODE_COORD_SECTION")?;
                let fields: Vec<&str> = entry.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(Error::parse(no, "expected `<id> <x> <y>`"));
                }
                let id = parse_node_id(no, fields[0], dim)?;
                let x: f64 = fields[1]
                    .parse()
                    .map_err(|_| Error::parse(no, format!("bad coordinate `{}`", fields[1])))?;
                let y: f64 = fields[2]
                    .parse()
                    .map_err(|_| Error::parse(no, format!("bad coordinate `{}`", fields[2])))?;
                if coords.insert(id, Point::new(x, y)).is_some() {
                    return Err(Error::parse(no, format!("duplicate node id {id}")));
                }
            }
        } else if upper.starts_with("DEMAND_SECTION") {
            let dim =
                dimension.ok_or_else(|| Error::parse(lineno, "DEMAND_SECTION before DIMENSION"))?;
            for _ in 0..dim {
                let (no, entry) = next_entry(&mut lines, "DEMAND_SECTION")?;
                let fields: Vec<&str> = entry.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(Error::parse(no, "expected `<id> <demand>`"));
                }
                let id = parse_node_id(no, fields[0], dim)?;
                let d: u64 = fields[1].parse().map_err(|_| {
                    Error::parse(
                        no,
                        format!("demand `{}` is not a nonnegative integer", fields[1]),
                    )
                })?;
                if demands.insert(id, d).is_some() {
                    return Err(Error::parse(no, format!("duplicate node id {id}")));
                }
            }
        } else if upper.starts_with("DEPOT_SECTION") {
            loop {
                let (no, entry) = next_entry(&mut lines, "DEPOT_SECTION")?;
                let v: i64 = entry
                    .split_whitespace()
                    .next()
                    .unwrap_or("")
                    .parse()
                    .map_err(|_| Error::parse(no, format!("bad depot entry `{entry}`")))?;
                if v == -1 {
                    break;
                }
                if v <= 0 {
                    return Err(Error::parse(no, format!("bad depot node {v}")));
                }
                if depot_node.replace(v as usize).is_some() {
                    return Err(Error::parse(no, "more than one depot listed"));
                }
            }
        } else if let Some((key, value)) = split_header(line) {
            match key.to_ascii_uppercase().as_str() {
                "NAME" => name = value.to_string(),
                "TYPE" | "COMMENT" => {}
                "DIMENSION" => {
                    let d: usize = value.parse().map_err(|_| {
                        Error::parse(lineno, format!("bad DIMENSION `{value}`"))
                    })?;
                    if d < 1 {
                        return Err(Error::parse(lineno, "DIMENSION must be at least 1"));
                    }
                    dimension = Some(d);
                }
                "CAPACITY" => {
                    let q: u64 = value.parse().map_err(|_| {
                        Error::parse(lineno, format!("bad CAPACITY `{value}`"))
                    })?;
                    capacity = Some(q);
                }
                "EDGE_WEIGHT_TYPE" => {
                    if !value.eq_ignore_ascii_case("EUC_2D") {
                        return Err(Error::parse(
                            lineno,
                            format!("unsupported EDGE_WEIGHT_TYPE `{value}` (only EUC_2D)"),
                        ));
                    }
                }
                other => {
                    log::warn!("ignoring unknown header key `{other}` on line {lineno}");
                }
            }
        } else {
            return Err(Error::parse(lineno, format!("unrecognized line `{line}`")));
        }
    }

    let dim = dimension.ok_or_else(|| Error::parse(1, "missing DIMENSION header"))?;
    let capacity = capacity.ok_or_else(|| Error::parse(1, "missing CAPACITY header"))?;
    if coords.len() != dim {
        return Err(Error::parse(
            1,
            format!("NODE_COORD_SECTION has {} of {dim} nodes", coords.len()),
        ));
    }
    if demands.len() != dim {
        return Err(Error::parse(
            1,
            format!("DEMAND_SECTION has {} of {dim} nodes", demands.len()),
        ));
    }

    // DEPOT_SECTION takes precedence; node 1 is the depot by convention.
    let depot_id = depot_node.unwrap_or(1);
    if depot_id > dim {
        return Err(Error::parse(
            1,
            format!("depot node {depot_id} out of range 1..={dim}"),
        ));
    }
    if demands[&depot_id] != 0 {
        return Err(Error::parse(
            1,
            format!("depot node {depot_id} must have demand 0"),
        ));
    }

    let depot = coords[&depot_id];
    let mut customers = Vec::with_capacity(dim - 1);
    for (&file_id, &coord) in &coords {
        if file_id == depot_id {
            continue;
        }
        let demand = demands[&file_id];
        if demand == 0 {
            return Err(Error::parse(
                1,
                format!("customer node {file_id} has zero demand"),
            ));
        }
        customers.push(Customer {
            id: customers.len() + 1,
            coord,
            demand,
        });
    }

    Instance::new(name, depot, customers, capacity)
        .map_err(|e| Error::parse(1, e.to_string()))
}

/// Writes an instance in the layout `parse_instance` accepts. Coordinates
/// keep full precision and field order is deterministic; the depot is
/// always node 1.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let dim = instance.n() + 1;
    writeln!(out, "NAME : {}", instance.name()).unwrap();
    writeln!(out, "TYPE : CVRP").unwrap();
    writeln!(out, "DIMENSION : {dim}").unwrap();
    writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D").unwrap();
    writeln!(out, "CAPACITY : {}", instance.capacity()).unwrap();
    writeln!(out, "NODE_COORD_SECTION").unwrap();
    let depot = instance.depot();
    writeln!(out, "1 {} {}", depot.x, depot.y).unwrap();
    for c in instance.customers() {
        writeln!(out, "{} {} {}", c.id + 1, c.coord.x, c.coord.y).unwrap();
    }
    writeln!(out, "DEMAND_SECTION").unwrap();
    writeln!(out, "1 0").unwrap();
    for c in instance.customers() {
        writeln!(out, "{} {}", c.id + 1, c.demand).unwrap();
    }
    writeln!(out, "DEPOT_SECTION").unwrap();
    writeln!(out, "1").unwrap();
    writeln!(out, "-1").unwrap();
    writeln!(out, "EOF").unwrap();
    out
}

/// Parses a solution file: `ROUTE k : c1(q1) c2(q2) ...` lines and a
/// trailing `COST <value>` line.
pub fn parse_solution(text: &str) -> Result<Solution> {
    let mut routes = Vec::new();
    let mut cost: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("ROUTE") {
            if cost.is_some() {
                return Err(Error::parse(lineno, "route listed after COST line"));
            }
            let body = match rest.split_once(':') {
                Some((_k, body)) => body,
                None => return Err(Error::parse(lineno, "missing `:` after route number")),
            };
            let mut visits = Vec::new();
            for token in body.split_whitespace() {
                visits.push(parse_visit(lineno, token)?);
            }
            routes.push(Route::new(visits));
        } else if let Some(rest) = line.strip_prefix("COST") {
            let value: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad cost `{}`", rest.trim())))?;
            if cost.replace(value).is_some() {
                return Err(Error::parse(lineno, "more than one COST line"));
            }
        } else {
            return Err(Error::parse(lineno, format!("unrecognized line `{line}`")));
        }
    }

    let cost = cost.ok_or_else(|| Error::parse(1, "missing COST line"))?;
    Ok(Solution { routes, cost })
}

/// Writes a solution in the layout `parse_solution` accepts. The cost is
/// printed with full precision so the round trip is exact.
pub fn write_solution(solution: &Solution) -> String {
    let mut out = String::new();
    for (k, route) in solution.routes.iter().enumerate() {
        write!(out, "ROUTE {} :", k + 1).unwrap();
        for v in &route.visits {
            write!(out, " {}({})", v.customer, v.quantity).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "COST {}", solution.cost).unwrap();
    out
}

fn parse_visit(lineno: usize, token: &str) -> Result<Visit> {
    let inner = token
        .strip_suffix(')')
        .and_then(|t| t.split_once('('))
        .ok_or_else(|| {
            Error::parse(
                lineno,
                format!("bad visit `{token}`, expected `<customer>(<quantity>)`"),
            )
        })?;
    let customer: usize = inner
        .0
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad customer id `{}`", inner.0)))?;
    let quantity: i64 = inner
        .1
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad quantity `{}`", inner.1)))?;
    if quantity <= 0 {
        return Err(Error::parse(
            lineno,
            format!("quantity must be positive, got {quantity}"),
        ));
    }
    Ok(Visit {
        customer,
        quantity: quantity as u64,
    })
}

fn split_header(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    let key = key.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return None;
    }
    Some((key, value.trim()))
}

fn next_entry<'a, I>(lines: &mut I, section: &str) -> Result<(usize, &'a str)>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    for (idx, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        return Ok((idx + 1, line));
    }
    Err(Error::parse(0, format!("{section} ended early")))
}

fn parse_node_id(lineno: usize, field: &str, dim: usize) -> Result<usize> {
    let id: usize = field
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad node id `{field}`")))?;
    if id == 0 || id > dim {
        return Err(Error::parse(
            lineno,
            format!("node id {id} out of range 1..={dim}"),
        ));
    }
    Ok(id)
}
