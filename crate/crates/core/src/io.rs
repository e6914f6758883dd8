//! Result files, sweep configs and lattice dumps.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::lattice::hypergraph;
use crate::montecarlo::{PointResult, SweepConfig};

/// Writes one JSON object per point, one per line.
pub fn write_jsonl<W: Write>(mut w: W, points: &[PointResult]) -> Result<()> {
    for p in points {
        let line = serde_json::to_string(p).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads points written by [`write_jsonl`]; blank lines are skipped.
pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<PointResult>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let p: PointResult = serde_json::from_str(&line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if p.failures > p.trials {
            return Err(Error::Parse(format!("line {}: more failures than trials", i + 1)));
        }
        out.push(p);
    }
    Ok(out)
}

/// CSV mirror of the JSON-lines records, with a header row.
pub fn write_csv<W: Write>(w: W, points: &[PointResult]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for p in points {
        csv.serialize(p).map_err(|e| Error::Io(e.to_string()))?;
    }
    csv.flush()?;
    Ok(())
}

/// Parses and validates a JSON sweep config.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let config: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// The inflated lattice at distance `d` as pretty-printed JSON.
pub fn lattice_json(d: usize) -> Result<String> {
    let hg = hypergraph(d)?;
    serde_json::to_string_pretty(&hg).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::Experiment;

    fn sample() -> Vec<PointResult> {
        vec![
            PointResult::new(4, 0.1, 100, 3, Experiment::Partial, 7),
            PointResult::new(8, 0.25, 50, 50, Experiment::Correctability, 7),
        ]
    }

    #[test]
    fn jsonl_round_trip() {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with(r#"{"d":4,"eps":0.1,"trials":100,"failures":3,"rate":0.03,"#));
        assert_eq!(read_jsonl(&buf[..]).unwrap(), sample());
    }

    #[test]
    fn jsonl_errors_name_the_line() {
        let err = read_jsonl("\n{\"d\":4}\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse(m) if m.starts_with("line 2")));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "d,eps,trials,failures,rate,ci_lo,ci_hi,mode,seed"
        );
        assert!(lines.next().unwrap().starts_with("4,0.1,100,3,0.03,"));
        assert!(lines.next().unwrap().ends_with(",correctability,7"));
    }

    #[test]
    fn config_defaults_and_rejections() {
        let c = parse_config(r#"{"mode":"maximal","distances":[4,8],"eps_grid":[0.3,0.4]}"#).unwrap();
        assert_eq!(
            (c.max_trials, c.target_failures, c.seed, c.workers),
            (10_000, 2_000, 0, 1)
        );
        assert!(parse_config(r#"{"mode":"maximal","distances":[6],"eps_grid":[0.3]}"#).is_err());
        assert!(parse_config(r#"{"mode":"maximal","distances":[4],"eps_grid":[0.3],"typo":1}"#).is_err());
        assert!(parse_config("not json").is_err());
    }

    #[test]
    fn lattice_dump_parses_back() {
        let v: serde_json::Value = serde_json::from_str(&lattice_json(4).unwrap()).unwrap();
        assert_eq!(v["n"], 48);
        assert_eq!(v["colex"]["faces"].as_array().unwrap().len(), 8);
        assert!(lattice_json(6).is_err());
    }
}
