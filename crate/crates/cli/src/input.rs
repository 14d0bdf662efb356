//! Problem files: a JSON document with `polygon` and `point`, or a plain
//! list of `x y` lines whose last entry is prefixed with `p:`.

use feedlink_core::{Point, PolygonChain};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInput {
    pub polygon: Vec<[f64; 2]>,
    pub point: [f64; 2],
}

impl ProblemInput {
    pub fn parse(text: &str, format: Format) -> Result<Self, CliError> {
        let input = match format {
            Format::Json => serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?,
            Format::Plain => parse_plain(text)?,
        };
        Ok(input)
    }

    pub fn chain(&self) -> Result<PolygonChain, CliError> {
        let v: Vec<Point> = self.polygon.iter().map(|p| Point::new(p[0], p[1])).collect();
        Ok(PolygonChain::new(&v, Point::new(self.point[0], self.point[1]))?)
    }
}

fn pair(s: &str, line: usize) -> Result<[f64; 2], CliError> {
    let nums: Vec<&str> = s.split_whitespace().collect();
    let bad = || CliError::Parse(format!("line {line}: expected two numbers, got {s:?}"));
    if nums.len() != 2 {
        return Err(bad());
    }
    let x = nums[0].parse().map_err(|_| bad())?;
    let y = nums[1].parse().map_err(|_| bad())?;
    Ok([x, y])
}

fn parse_plain(text: &str) -> Result<ProblemInput, CliError> {
    let mut polygon = Vec::new();
    let mut point = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if point.is_some() {
            return Err(CliError::Parse(format!("line {}: data after the p: line", k + 1)));
        }
        match line.strip_prefix("p:") {
            Some(rest) => point = Some(pair(rest, k + 1)?),
            None => polygon.push(pair(line, k + 1)?),
        }
    }
    let point = point.ok_or_else(|| CliError::Parse("missing \"p:\" line".into()))?;
    Ok(ProblemInput { polygon, point })
}
