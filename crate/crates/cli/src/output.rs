use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use crate::args::Cli;
use crate::commands::Failure;

/// Angle rounded to 12 significant digits, tagged `pi*p/q` (q <= 6) when
/// within 1e-9 of one.
#[derive(Debug, Serialize)]
pub struct Angle {
    pub radians: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<String>,
}

pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn symbolic(x: f64) -> Option<String> {
    if x.abs() < 1e-9 {
        return Some("0".into());
    }
    for q in 1..=6u32 {
        let p = (x * q as f64 / PI).round();
        if p >= 1.0 && (x - PI * p / q as f64).abs() < 1e-9 && gcd(p as u32, q) == 1 {
            let p = p as u32;
            return Some(match (p, q) {
                (1, 1) => "pi".into(),
                (_, 1) => format!("{p}pi"),
                (1, _) => format!("pi/{q}"),
                _ => format!("{p}pi/{q}"),
            });
        }
    }
    None
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn angle(x: f64) -> Angle {
    Angle {
        radians: round12(x),
        symbolic: symbolic(x),
    }
}

pub fn angles(xs: &[f64]) -> Vec<Angle> {
    xs.iter().map(|&x| angle(x)).collect()
}

/// Destination chosen from `--output`, then the output directory, then stdout.
pub fn destination(cli: &Cli, default_name: &str) -> Option<PathBuf> {
    cli.output
        .clone()
        .or_else(|| cli.out_dir.as_ref().map(|d| d.join(default_name)))
}

pub fn emit_text(cli: &Cli, default_name: &str, text: &str) -> Result<Option<PathBuf>, Failure> {
    match destination(cli, default_name) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            }
            fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(path))
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?;
            Ok(None)
        }
    }
}

pub fn emit_json<T: Serialize>(cli: &Cli, default_name: &str, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    emit_text(cli, default_name, &text).map(|_| ())
}
