//! JSON front end to the closed-form reference solutions.
//!
//! ```json
//! {"op": "quad-solution", "epsilon": 0.1, "start": [1, 0], "end": [2, 0], "time": 3}
//! {"op": "quad-graph-limit", "start": 1, "end": 2, "n_segments": 8}
//! {"op": "quad-fw-times", "start": 1, "end": 2}
//! {"op": "quad-case2-fw", "radius": 3, "theta1": 0.2618, "theta2": 1.309}
//! {"op": "ms-critical-point", "epsilon": 0.1}
//! ```

use egma::oracle;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    QuadSolution {
        epsilon: f64,
        start: [f64; 2],
        end: [f64; 2],
        time: f64,
        /// Number of intervals for the optional sample table.
        #[serde(default)]
        samples: Option<usize>,
    },
    QuadGraphLimit {
        start: f64,
        end: f64,
        n_segments: usize,
    },
    QuadFwTimes {
        start: f64,
        end: f64,
    },
    QuadCase2Fw {
        radius: f64,
        theta1: f64,
        theta2: f64,
    },
    MsCriticalPoint {
        epsilon: f64,
    },
}

pub fn parse(text: &str) -> Result<Query, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

pub fn answer(q: &Query) -> Result<Value, egma::Error> {
    Ok(match *q {
        Query::QuadSolution { epsilon, start, end, time, samples } => {
            let s = oracle::quad_solution(epsilon, start, end, time)?;
            let mut v = json!({
                "A": s.a,
                "B": s.b,
                "energy": s.energy,
                "om_action": s.om_action,
                "turning_time": s.turning_time,
                "min_distance_sq": s.min_distance_sq,
            });
            if let Some(n) = samples {
                v["samples"] = serde_json::to_value(s.sample(n)).expect("samples serialize");
            }
            v
        }
        Query::QuadGraphLimit { start, end, n_segments } => {
            let p = oracle::quad_graph_limit(start, end, n_segments)?;
            let nodes: Vec<&[f64]> = p.nodes().collect();
            json!({ "nodes": nodes })
        }
        Query::QuadFwTimes { start, end } => {
            let (ta, tb) = oracle::quad_fw_times(start, end)?;
            json!({ "T_a": ta, "T_b": tb })
        }
        Query::QuadCase2Fw { radius, theta1, theta2 } => {
            let r = oracle::quad_case2_fw(radius, theta1, theta2)?;
            json!({ "T_c": r.time, "action": r.action, "min_distance_sq": r.min_distance_sq })
        }
        Query::MsCriticalPoint { epsilon } => {
            let (xc, ec) = oracle::ms_critical_point(epsilon)?;
            json!({ "x_c_abs": xc, "E_c": ec, "points": [[-xc, 0.0], [xc, 0.0]] })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_point_query() {
        let v = answer(&parse(r#"{"op":"ms-critical-point","epsilon":0}"#).unwrap()).unwrap();
        assert_eq!(v["x_c_abs"], 1.0);
        assert_eq!(v["E_c"], 0.0);
    }

    #[test]
    fn case2_query() {
        let q = Query::QuadCase2Fw {
            radius: 3.0,
            theta1: std::f64::consts::PI / 12.0,
            theta2: 5.0 * std::f64::consts::PI / 12.0,
        };
        let v = answer(&q).unwrap();
        assert!((v["min_distance_sq"].as_f64().unwrap() - 4.5).abs() < 1e-12);
    }

    #[test]
    fn bad_queries() {
        assert!(parse(r#"{"op":"nope"}"#).is_err());
        assert!(parse(r#"{"op":"ms-critical-point","epsilon":0.1,"x":1}"#).is_err());
        let q = parse(r#"{"op":"quad-fw-times","start":2,"end":1}"#).unwrap();
        assert!(answer(&q).is_err());
    }
}
