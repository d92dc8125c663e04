//! Matrix file format: a JSON object `{"n": int, "data": [row-major floats]}`
//! (extra fields are ignored) or whitespace-separated text with one row per
//! line.

use thiserror::Error;

use crate::matcore::Mat;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON matrix: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: cannot parse {token:?} as a number")]
    Number { line: usize, token: String },
    #[error("invalid matrix: {0}")]
    Shape(String),
}

pub fn parse_matrix(input: &str) -> Result<Mat, ParseError> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    parse_text(input)
}

fn parse_text(input: &str) -> Result<Mat, ParseError> {
    let mut rows = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| ParseError::Number {
                    line: lineno + 1,
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Mat::from_rows(&rows).map_err(|e| ParseError::Shape(e.to_string()))
}

pub fn to_json(m: &Mat) -> String {
    serde_json::to_string(m).expect("matrix serialisation cannot fail")
}
