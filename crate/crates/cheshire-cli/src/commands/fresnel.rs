//! `fresnel` — Brewster angle and slide reflectance for a refractive index.

use cheshire::elements::{brewster_angle, fresnel_p_reflectance, fresnel_s_reflectance};

use crate::CliError;

pub fn run(refractive_index: f64, angle_deg: Option<f64>) -> Result<(), CliError> {
    if refractive_index <= 0.0 || refractive_index.is_nan() {
        return Err(CliError::usage(format!(
            "refractive index must be positive, got {refractive_index}"
        )));
    }
    let brewster = brewster_angle(refractive_index);
    let incidence = angle_deg.map_or(brewster, f64::to_radians);
    let r_s = fresnel_s_reflectance(refractive_index, incidence)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let r_p = fresnel_p_reflectance(refractive_index, incidence)
        .map_err(|e| CliError::usage(e.to_string()))?;

    println!("refractive_index: {refractive_index}");
    println!("brewster_angle_deg: {}", brewster.to_degrees());
    println!("incidence_angle_deg: {}", incidence.to_degrees());
    println!("s_reflectance: {r_s}");
    println!("p_reflectance: {r_p}");
    println!("s_transmission: {}", 1.0 - r_s);
    Ok(())
}
