//! CSV encodings for sampled patterns and width scans.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::inference::ScanResult;
use crate::optics::IntensitySample;

pub const PATTERN_HEADER: [&str; 2] = ["x_m", "intensity_per_m"];
pub const SCAN_HEADER: [&str; 2] = ["width_m", "p_success"];

#[derive(Debug, Serialize, Deserialize)]
struct ScanRow {
    width_m: f64,
    p_success: f64,
}

fn csv_error(e: csv::Error) -> crate::Error {
    invalid("csv", e.to_string())
}

pub fn write_pattern_csv<W: Write>(samples: &[IntensitySample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s).map_err(csv_error)?;
    }
    if samples.is_empty() {
        w.write_record(PATTERN_HEADER).map_err(csv_error)?;
    }
    w.flush().map_err(|e| invalid("csv", e.to_string()))
}

/// Reads the schema written by [`write_pattern_csv`]; the header must match.
pub fn read_pattern_csv<R: Read>(input: R) -> Result<Vec<IntensitySample>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(csv_error)?;
    if headers.iter().collect::<Vec<_>>() != PATTERN_HEADER {
        return Err(invalid(
            "csv",
            format!(
                "expected header `x_m,intensity_per_m`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

pub fn write_scan_csv<W: Write>(scan: &ScanResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (&width_m, &p_success) in scan.widths.iter().zip(&scan.p_success_curve) {
        w.serialize(ScanRow { width_m, p_success })
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| invalid("csv", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn pattern_csv_round_trips(values in prop::collection::vec((-1e-2f64..1e-2, 0f64..1e4), 1..40)) {
            let samples: Vec<_> = values.iter().map(|&(x, value)| IntensitySample { x, value }).collect();
            let mut buf = Vec::new();
            write_pattern_csv(&samples, &mut buf).unwrap();
            let back = read_pattern_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, samples);
        }
    }

    #[test]
    fn header_is_checked() {
        let bad = "x,y\n1,2\n";
        assert!(read_pattern_csv(bad.as_bytes()).is_err());
        let mut buf = Vec::new();
        write_pattern_csv(&[IntensitySample { x: 0.5, value: 2.0 }], &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("x_m,intensity_per_m\n"));
    }

    #[test]
    fn scan_csv_layout() {
        let scan = ScanResult {
            widths: vec![1e-5, 2e-5],
            p_success_curve: vec![0.5, 0.51],
            optimal_width: 2e-5,
            optimal_p: 0.51,
        };
        let mut buf = Vec::new();
        write_scan_csv(&scan, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("width_m,p_success"));
        assert_eq!(text.lines().count(), 3);
    }
}
