use std::f64::consts::PI;

use steerkit::measurements::{
    angle_projectors, axis_setting, bloch_projectors, computational_basis, fourier_mub_basis,
};
use steerkit::{MeasurementSetting, Tolerances};

use crate::config::parse_num;
use crate::error::CliError;

/// Parses a comma-separated settings list for Alice's dimension `d`.
pub fn parse_settings(
    spec: &str,
    d: usize,
    tol: &Tolerances,
) -> Result<Vec<MeasurementSetting>, CliError> {
    spec.split(',')
        .map(|token| parse_one(token.trim(), d, tol))
        .collect()
}

fn parse_one(token: &str, d: usize, tol: &Tolerances) -> Result<MeasurementSetting, CliError> {
    let bad = |msg: String| CliError::Config(format!("setting `{token}`: {msg}"));
    match token {
        "Z" | "computational" => return Ok(computational_basis(d)?),
        "X" | "fourier" => return Ok(fourier_mub_basis(d)?),
        _ => {}
    }
    if d != 2 {
        return match token {
            "z" => Ok(computational_basis(d)?),
            "x" => Ok(fourier_mub_basis(d)?),
            _ => Err(bad(format!("only Z and X are available in dimension {d}"))),
        };
    }
    let (negate, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    if let [axis @ ('x' | 'y' | 'z')] = body.chars().collect::<Vec<_>>()[..] {
        if !negate {
            return Ok(axis_setting(axis)?);
        }
        let mut n = [0.0; 3];
        n[(axis as u8 - b'x') as usize] = -1.0;
        let mut s = bloch_projectors(n, tol)?;
        s.label = token.to_owned();
        return Ok(s);
    }
    if let Some(rest) = token.strip_prefix("bloch:") {
        let parts: Vec<f64> = rest
            .split(':')
            .map(parse_num)
            .collect::<Result<_, _>>()
            .map_err(bad)?;
        let [x, y, z] = parts[..] else {
            return Err(bad("bloch takes three components".into()));
        };
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(bad("bloch vector must be non-zero".into()));
        }
        let mut s = bloch_projectors([x / norm, y / norm, z / norm], tol)?;
        s.label = token.to_owned();
        return Ok(s);
    }
    if let Some(rest) = token.strip_prefix("angle:") {
        let mut s = angle_projectors(parse_num(rest).map_err(bad)?);
        s.label = token.to_owned();
        return Ok(s);
    }
    Err(bad(
        "expected x, y, z, -x, bloch:nx:ny:nz, angle:a, Z or X".into()
    ))
}

/// `k` Bloch directions spread evenly over half of the x–z great circle,
/// starting at z; `k = 2` gives z and x.
pub fn spread_qubit_settings(
    k: usize,
    tol: &Tolerances,
) -> Result<Vec<MeasurementSetting>, CliError> {
    (0..k)
        .map(|j| {
            let phi = PI * j as f64 / k as f64;
            let mut s = bloch_projectors([phi.sin(), 0.0, phi.cos()], tol)?;
            s.label = format!("xz:{phi}");
            Ok(s)
        })
        .collect()
}
