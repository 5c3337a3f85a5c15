//! CSV artifacts. Every file starts with a `#` line naming the config hash
//! and the library version, followed by a header row.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use heavytail_core::StepFunction;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// `x` rounded to 12 significant digits, in positional notation when that
/// stays short.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{x:.*}", (11 - exp).max(0) as usize)
    } else {
        format!("{x:.11e}")
    }
}

/// Writes `header` and `rows` to `path`, preceded by the provenance line.
pub fn write_table<I, R>(path: &Path, config_hash: &str, header: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# config_sha256={config_hash} heavytail={VERSION}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>())?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `t,v`: the left endpoint with the initial value, then each breakpoint
/// with the value from there on.
pub fn step_function_rows(f: &StepFunction) -> Vec<[String; 2]> {
    let mut rows = vec![[fmt_f64(f.interval().a()), fmt_f64(f.values()[0])]];
    for (t, v) in f.breakpoints().iter().zip(&f.values()[1..]) {
        rows.push([fmt_f64(*t), fmt_f64(*v)]);
    }
    rows
}

pub fn write_step_function(path: &Path, config_hash: &str, f: &StepFunction) -> io::Result<()> {
    write_table(path, config_hash, &["t", "v"], step_function_rows(f))
}

/// Reads back a file written by [`write_step_function`] on `[a, b]`.
pub fn read_step_function(path: &Path, b: f64) -> Result<StepFunction, Box<dyn std::error::Error>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        times.push(rec[0].parse::<f64>()?);
        values.push(rec[1].parse::<f64>()?);
    }
    let a = *times.first().ok_or("empty path file")?;
    let interval = heavytail_core::Interval::new(a, b)?;
    Ok(StepFunction::new(interval, times[1..].to_vec(), values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use heavytail_core::Interval;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig12(2.5066282746310002), "2.50662827463");
        assert_eq!(fmt_sig12(0.02), "0.0200000000000");
        assert_eq!(fmt_sig12(1234.5), "1234.50000000");
        assert_eq!(fmt_sig12(1e-9), "1.00000000000e-9");
        assert_eq!(fmt_sig12(0.0), "0");
    }

    #[test]
    fn step_functions_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        let f = StepFunction::new(Interval::unit(), vec![0.1, 1.0 / 3.0], vec![0.5, -2.25, 1e-300]).unwrap();
        write_step_function(&p, "abc", &f).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("# config_sha256=abc heavytail="));
        assert_eq!(text.lines().nth(1), Some("t,v"));
        assert_eq!(text.lines().nth(2), Some("0.0,0.5"));
        assert_eq!(read_step_function(&p, 1.0).unwrap(), f);
    }
}
