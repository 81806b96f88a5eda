//! CSV and JSON emission.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

/// Rows as CSV with a header line.
pub fn write_csv<S: Serialize, W: Write>(rows: &[S], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in rows {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<S: Serialize + ?Sized, W: Write>(value: &S, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        value: f64,
        seed: Option<u64>,
    }

    #[test]
    fn csv_quotes_and_header() {
        let rows = [
            Row { name: "a, b", value: 0.5, seed: Some(3) },
            Row { name: "plain", value: 1.0, seed: None },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "name,value,seed\n\"a, b\",0.5,3\nplain,1.0,\n");
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_json(&[1, 2, 3], &mut buf).unwrap();
        let back: Vec<i32> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, [1, 2, 3]);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
