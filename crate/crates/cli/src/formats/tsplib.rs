//! Minimal keyword-format parser for planar tour instances with per-node
//! prizes: DIMENSION, EDGE_WEIGHT_TYPE (EUC_2D only), NODE_COORD_SECTION,
//! DEPOT_SECTION, and a prize section (PRIZE_SECTION or NODE_SCORE_SECTION).
//! Edge costs are Euclidean distances rounded to the nearest integer, the
//! convention under which published optima for these files are stated.

use oofl_core::oracles::PctspInstance;

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct TsplibLiteInstance {
    pub dimension: usize,
    /// Node coordinates in file order (ids 1..=dimension).
    pub coords: Vec<(f64, f64)>,
    /// 1-based id of the depot node.
    pub depot: usize,
    /// Prize per node in file order (the depot's entry is ignored).
    pub prizes: Vec<f64>,
}

impl TsplibLiteInstance {
    /// Rounded Euclidean cost between 1-based node ids.
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        let (xi, yi) = self.coords[i - 1];
        let (xj, yj) = self.coords[j - 1];
        ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt().round()
    }

    /// Convert to the oracle's instance layout (customers in id order, depot
    /// last), scaling the prizes by `revenue_scale`.
    pub fn to_pctsp_instance(&self, revenue_scale: f64) -> Result<PctspInstance, HarnessError> {
        let mut order: Vec<usize> = (1..=self.dimension).filter(|&id| id != self.depot).collect();
        order.push(self.depot);
        let n = order.len();
        let mut costs = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in (a + 1)..n {
                costs.push(self.cost(order[a], order[b]));
            }
        }
        let mut revenues: Vec<f64> =
            order[..n - 1].iter().map(|&id| revenue_scale * self.prizes[id - 1]).collect();
        revenues.push(0.0);
        Ok(PctspInstance::new(n, costs, revenues)?)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse { line, message: message.into() }
}

pub fn parse_tsplib_lite(text: &str) -> Result<TsplibLiteInstance, HarnessError> {
    let mut dimension: Option<usize> = None;
    let mut edge_weight_type: Option<String> = None;
    let mut coords: Vec<(usize, f64, f64)> = Vec::new();
    let mut depot: Option<usize> = None;
    let mut prizes: Vec<(usize, f64)> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        Header,
        Coords,
        Depot,
        Prizes,
    }
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let upper = line.to_ascii_uppercase();
        if upper == "EOF" {
            break;
        }
        if upper.starts_with("NODE_COORD_SECTION") {
            section = Section::Coords;
            continue;
        }
        if upper.starts_with("DEPOT_SECTION") {
            section = Section::Depot;
            continue;
        }
        if upper.starts_with("PRIZE_SECTION") || upper.starts_with("NODE_SCORE_SECTION") {
            section = Section::Prizes;
            continue;
        }
        match section {
            Section::Header => {
                let mut parts = line.splitn(2, ':');
                let key = parts.next().unwrap_or("").trim().to_ascii_uppercase();
                let value = parts.next().unwrap_or("").trim();
                match key.as_str() {
                    "DIMENSION" => {
                        dimension =
                            Some(value.parse().map_err(|_| parse_error(line_no, "dimension is not an integer"))?)
                    }
                    "EDGE_WEIGHT_TYPE" => edge_weight_type = Some(value.to_ascii_uppercase()),
                    _ => {}
                }
            }
            Section::Coords => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(parse_error(line_no, "coordinate rows need `id x y`"));
                }
                let id: usize = fields[0].parse().map_err(|_| parse_error(line_no, "node id is not an integer"))?;
                let x: f64 = fields[1].parse().map_err(|_| parse_error(line_no, "x is not a number"))?;
                let y: f64 = fields[2].parse().map_err(|_| parse_error(line_no, "y is not a number"))?;
                coords.push((id, x, y));
            }
            Section::Depot => {
                let id: i64 = line.parse().map_err(|_| parse_error(line_no, "depot rows hold one integer"))?;
                if id == -1 {
                    section = Section::Header;
                    continue;
                }
                if depot.is_some() {
                    return Err(parse_error(line_no, "depot listed twice"));
                }
                depot = Some(id as usize);
            }
            Section::Prizes => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(parse_error(line_no, "prize rows need `id value`"));
                }
                let id: usize = fields[0].parse().map_err(|_| parse_error(line_no, "node id is not an integer"))?;
                let value: f64 = fields[1].parse().map_err(|_| parse_error(line_no, "prize is not a number"))?;
                prizes.push((id, value));
            }
        }
    }

    let dimension = dimension.ok_or_else(|| parse_error(0, "missing DIMENSION"))?;
    match edge_weight_type.as_deref() {
        Some("EUC_2D") => {}
        Some(other) => return Err(parse_error(0, format!("unsupported edge weight type {other}"))),
        None => return Err(parse_error(0, "missing EDGE_WEIGHT_TYPE")),
    }
    if coords.len() != dimension {
        return Err(parse_error(0, format!("expected {dimension} coordinates, found {}", coords.len())));
    }
    let depot = depot.ok_or_else(|| parse_error(0, "missing depot"))?;
    if depot < 1 || depot > dimension {
        return Err(parse_error(0, "depot id out of range"));
    }
    if prizes.is_empty() {
        return Err(parse_error(0, "missing prize section"));
    }

    let mut coord_vec = vec![None; dimension];
    for (id, x, y) in coords {
        if id < 1 || id > dimension {
            return Err(parse_error(0, format!("coordinate id {id} out of range")));
        }
        coord_vec[id - 1] = Some((x, y));
    }
    let coords: Vec<(f64, f64)> = coord_vec
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| parse_error(0, format!("missing coordinates for node {}", i + 1))))
        .collect::<Result<_, _>>()?;

    let mut prize_vec = vec![0.0; dimension];
    for (id, value) in prizes {
        if id < 1 || id > dimension {
            return Err(parse_error(0, format!("prize id {id} out of range")));
        }
        prize_vec[id - 1] = value;
    }

    Ok(TsplibLiteInstance { dimension, coords, depot, prizes: prize_vec })
}
