//! Parser for transportation-network link tables: a `<KEY> value` metadata
//! header followed by whitespace-separated rows
//! `init_node term_node capacity length free_flow_time ...`, with `~`
//! starting comments and `;` tolerated as a row terminator.
//!
//! Networks of this kind model centroid "zone" nodes with low ids; arcs
//! touching nodes at or below the configured zone-id threshold are dropped.
//! When the header carries a first-through-node field, it seeds the default
//! threshold.

use crate::error::HarnessError;
use crate::experiments::shortest_path::RoadNetwork;

#[derive(Debug, Clone, PartialEq)]
pub struct TntpArc {
    pub init_node: usize,
    pub term_node: usize,
    pub free_flow_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TntpNetwork {
    pub node_count: usize,
    pub arcs: Vec<TntpArc>,
}

impl TntpNetwork {
    /// Re-index to 0-based node ids for the path oracle.
    pub fn to_road_network(&self) -> RoadNetwork {
        RoadNetwork {
            node_count: self.node_count,
            arcs: self.arcs.iter().map(|a| (a.init_node - 1, a.term_node - 1)).collect(),
            free_flow: self.arcs.iter().map(|a| a.free_flow_time).collect(),
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse { line, message: message.into() }
}

/// Parse a link table. `zone_id_threshold` overrides the header-derived
/// default; node ids at or below it are treated as zones and their incident
/// arcs are dropped.
pub fn parse_tntp(text: &str, zone_id_threshold: Option<usize>) -> Result<TntpNetwork, HarnessError> {
    let mut node_count: Option<usize> = None;
    let mut link_count: Option<usize> = None;
    let mut first_thru_node: Option<usize> = None;
    let mut arcs: Vec<TntpArc> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        // Strip comments and the row terminator.
        let without_comment = raw_line.split('~').next().unwrap_or("");
        let line = without_comment.trim().trim_end_matches(';').trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('<') {
            let Some(close) = line.find('>') else {
                return Err(parse_error(line_no, "unterminated metadata key"));
            };
            let key = line[1..close].trim().to_ascii_uppercase();
            let value = line[close + 1..].trim();
            match key.as_str() {
                "NUMBER OF NODES" => {
                    node_count = Some(
                        value.parse().map_err(|_| parse_error(line_no, "node count is not an integer"))?,
                    )
                }
                "NUMBER OF LINKS" => {
                    link_count = Some(
                        value.parse().map_err(|_| parse_error(line_no, "link count is not an integer"))?,
                    )
                }
                "FIRST THRU NODE" => {
                    first_thru_node = Some(
                        value.parse().map_err(|_| parse_error(line_no, "first-through-node is not an integer"))?,
                    )
                }
                "END OF METADATA" => {}
                _ => {} // other metadata keys are irrelevant here
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 5 {
            return Err(parse_error(line_no, format!("expected at least 5 columns, found {}", fields.len())));
        }
        let init_node: usize =
            fields[0].parse().map_err(|_| parse_error(line_no, "init node is not an integer"))?;
        let term_node: usize =
            fields[1].parse().map_err(|_| parse_error(line_no, "term node is not an integer"))?;
        let free_flow_time: f64 =
            fields[4].parse().map_err(|_| parse_error(line_no, "free-flow time is not a number"))?;
        if free_flow_time < 0.0 {
            return Err(parse_error(line_no, "free-flow time must be nonnegative"));
        }
        arcs.push(TntpArc { init_node, term_node, free_flow_time });
    }

    let node_count = node_count.ok_or_else(|| parse_error(0, "missing node-count header"))?;
    let link_count = link_count.ok_or_else(|| parse_error(0, "missing link-count header"))?;
    if arcs.len() != link_count {
        return Err(parse_error(
            0,
            format!("header declares {link_count} links but the body has {} rows", arcs.len()),
        ));
    }
    for (i, arc) in arcs.iter().enumerate() {
        if arc.init_node < 1 || arc.init_node > node_count || arc.term_node < 1 || arc.term_node > node_count {
            return Err(parse_error(i + 1, format!("arc endpoints out of the 1..={node_count} range")));
        }
    }

    let threshold = zone_id_threshold.unwrap_or_else(|| first_thru_node.map(|f| f.saturating_sub(1)).unwrap_or(0));
    let kept: Vec<TntpArc> = arcs
        .into_iter()
        .filter(|a| a.init_node > threshold && a.term_node > threshold)
        .collect();
    Ok(TntpNetwork { node_count, arcs: kept })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "<NUMBER OF NODES> 4\n\
                           <NUMBER OF LINKS> 3\n\
                           <FIRST THRU NODE> 1\n\
                           <END OF METADATA>\n\
                           ~ init term capacity length fft b power speed toll type\n\
                           1 2 900 1.0 6.0 0.15 4 60 0 1 ;\n\
                           2 3 900 1.0 4.5 0.15 4 60 0 1 ;\n\
                           3 4 900 1.0 2.0 0.15 4 60 0 1 ;\n";

    #[test]
    fn parses_declared_links() {
        let network = parse_tntp(FIXTURE, None).unwrap();
        assert_eq!(network.node_count, 4);
        assert_eq!(network.arcs.len(), 3);
        assert_eq!(network.arcs[1].free_flow_time, 4.5);
    }

    #[test]
    fn count_mismatch_names_both_counts() {
        let broken = FIXTURE.replace("<NUMBER OF LINKS> 3", "<NUMBER OF LINKS> 5");
        let err = parse_tntp(&broken, None).unwrap_err();
        let message = err.to_string();
        assert!(message.contains('5') && message.contains('3'), "got: {message}");
    }

    #[test]
    fn zone_threshold_drops_incident_arcs() {
        let network = parse_tntp(FIXTURE, Some(2)).unwrap();
        // Arcs touching nodes 1 and 2 disappear; only 3 -> 4 remains.
        assert_eq!(network.arcs.len(), 1);
        assert_eq!(network.arcs[0].init_node, 3);
    }

    #[test]
    fn malformed_row_is_rejected_with_its_line() {
        let broken = FIXTURE.replace("2 3 900 1.0 4.5 0.15 4 60 0 1 ;", "2 3 banana ;");
        let err = parse_tntp(&broken, None).unwrap_err();
        match err {
            HarnessError::Parse { line, .. } => assert_eq!(line, 7),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn road_network_conversion_is_zero_based() {
        let network = parse_tntp(FIXTURE, None).unwrap().to_road_network();
        assert_eq!(network.arcs[0], (0, 1));
        assert_eq!(network.free_flow[2], 2.0);
    }
}
