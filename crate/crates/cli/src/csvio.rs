//! Profile CSV schema: header `x,I_plus,I_minus`, one row per site, values
//! printed with Rust's shortest round-trip formatting (locale-independent).

use std::io::Write;
use std::path::Path;

use radlbm_core::rte::LatticeField;

use crate::CliError;

pub const PROFILE_HEADER: &str = "x,I_plus,I_minus";

pub fn write_profile(path: &Path, x: &[f64], field: &LatticeField) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for ((xi, p), m) in x.iter().zip(&field.i_plus).zip(&field.i_minus) {
        out.push_str(&format!("{xi},{p},{m}\n"));
    }
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    file.write_all(out.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Clone, Debug)]
pub struct Profile {
    pub x: Vec<f64>,
    pub i_plus: Vec<f64>,
    pub i_minus: Vec<f64>,
}

pub fn read_profile(path: &Path) -> Result<Profile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim() == PROFILE_HEADER => {}
        _ => {
            return Err(CliError::Usage(format!(
                "{}: missing '{PROFILE_HEADER}' header",
                path.display()
            )))
        }
    }
    let mut profile = Profile {
        x: Vec::new(),
        i_plus: Vec::new(),
        i_minus: Vec::new(),
    };
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Usage(format!(
                "{}:{}: expected 3 comma-separated fields",
                path.display(),
                lineno + 2
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.trim().parse().map_err(|_| {
                CliError::Usage(format!(
                    "{}:{}: invalid number '{s}'",
                    path.display(),
                    lineno + 2
                ))
            })
        };
        profile.x.push(parse(fields[0])?);
        profile.i_plus.push(parse(fields[1])?);
        profile.i_minus.push(parse(fields[2])?);
    }
    if profile.x.is_empty() {
        return Err(CliError::Usage(format!("{}: no data rows", path.display())));
    }
    Ok(profile)
}
