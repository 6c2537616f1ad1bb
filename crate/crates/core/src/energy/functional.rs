use crate::error::Result;
use crate::field::SpectralField;

/// Kinetic energy `||u||^2 / 2`.
pub fn energy(u: &SpectralField) -> f64 {
    0.5 * u.l2_norm().powi(2)
}

/// `R(u | v) = ||u - v||^2 / 2`.
pub fn rel_energy(u: &SpectralField, v: &SpectralField) -> Result<f64> {
    Ok(energy(&u.axpy(-1.0, v)?))
}

/// `W(u | v) = (nu / 2) ||grad u - grad v||^2`.
pub fn rel_dissipation(u: &SpectralField, v: &SpectralField, nu: f64) -> Result<f64> {
    let d = u.axpy(-1.0, v)?;
    if nu == 0.0 {
        return Ok(0.0);
    }
    Ok(0.5 * nu * d.h1_seminorm().powi(2))
}

/// `int (a . grad) b . c dx`, exact for band-limited fields.
pub fn trilinear(a: &SpectralField, b: &SpectralField, c: &SpectralField) -> Result<f64> {
    a.convect(b)?.inner(c)
}
