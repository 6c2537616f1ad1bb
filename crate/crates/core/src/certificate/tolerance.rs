use serde::{Deserialize, Serialize};

/// Allowed negative margin `tau(t) = a dt^4 t + b q(t) + g S(t) + floor`.
///
/// `q` is the a-posteriori quadrature estimate `|simpson - trapezoid|` of the
/// time integrals and `S` is the Gronwall credit `int K R e^{-I}`, the part of
/// the bound that rests on the Gagliardo-Nirenberg constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolModel {
    #[serde(default = "d_a")]
    pub dt4_coeff: f64,
    #[serde(default = "d_b")]
    pub quad_coeff: f64,
    #[serde(default)]
    pub gn_slack: f64,
    #[serde(default = "d_floor")]
    pub floor: f64,
}

fn d_a() -> f64 {
    100.0
}
fn d_b() -> f64 {
    1.0
}
fn d_floor() -> f64 {
    1e-10
}

impl Default for TolModel {
    fn default() -> Self {
        TolModel { dt4_coeff: d_a(), quad_coeff: d_b(), gn_slack: 0.0, floor: d_floor() }
    }
}

/// Itemized tolerance of one entry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TolBreakdown {
    pub time_integration: f64,
    pub quadrature: f64,
    pub gn: f64,
    pub floor: f64,
}

impl TolBreakdown {
    pub fn total(&self) -> f64 {
        self.time_integration + self.quadrature + self.gn + self.floor
    }
}

impl TolModel {
    pub fn breakdown(&self, dt: f64, t: f64, quad_estimate: f64, gronwall_credit: f64) -> TolBreakdown {
        TolBreakdown {
            time_integration: self.dt4_coeff * dt.powi(4) * t,
            quadrature: self.quad_coeff * quad_estimate,
            gn: self.gn_slack * gronwall_credit.abs(),
            floor: self.floor,
        }
    }
}
