use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::manifold::{fundamental_class, ClosedManifoldComplex};
use super::systole::systole;
use crate::complex::{Chain, ChainJson};
use crate::error::{Error, Result};
use crate::filling::{ambient_metric, cone_fill, filling_radius, isoperimetric_fill};
use crate::metric::{build_rips, kuratowski_embed, maximal_epsilon_net, NetStrategy, DEFAULT_RIPS_BUDGET};
use crate::number::{q_frac, q_int, q_to_f64, ExactReal, Q};

/// Net and Rips parameters for [`verify_chain`].
#[derive(Debug, Clone)]
pub struct HarnessParams {
    pub epsilon: Q,
    pub strategy: NetStrategy,
    pub rips_budget: usize,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams { epsilon: q_frac(1, 2), strategy: NetStrategy::default(), rips_budget: DEFAULT_RIPS_BUDGET }
    }
}

/// How the filling volume was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FillMethod {
    Isoperimetric,
    Cone,
}

/// All terms of the chain `Sys <= 6 FillRad <= C FillVol^(1/(n+1)) <= C' Vol^(1/n)`.
#[derive(Debug, Clone)]
pub struct SystoleReport {
    pub dim: usize,
    pub vol: Q,
    /// `None` when there is no nontrivial loop (infinite systole).
    pub sys: Option<Q>,
    pub witness: Option<Chain>,
    pub fillrad: Q,
    pub fillvol: Q,
    pub fill_method: FillMethod,
    pub epsilon: Q,
    pub net_size: usize,
    pub additive_slack: Q,
    /// `24 ε`, added to the right-hand side of the first inequality.
    pub tolerance: Q,
    pub systolic_holds: Option<bool>,
    /// Wall time per leg; not part of the serialized report.
    pub timings: Vec<(&'static str, Duration)>,
}

struct FillingLegs {
    fillrad: Q,
    fillvol: Q,
    fill_method: FillMethod,
    net_size: usize,
    additive_slack: Q,
    timings: Vec<(&'static str, Duration)>,
}

fn root(x: &Q, n: usize) -> f64 {
    q_to_f64(x).powf(1.0 / n as f64)
}

impl SystoleReport {
    pub fn sys_over_fillrad(&self) -> Option<f64> {
        let s = self.sys.as_ref()?;
        (!self.fillrad.is_zero()).then(|| q_to_f64(s) / q_to_f64(&self.fillrad))
    }

    pub fn fillrad_over_fillvol_root(&self) -> Option<f64> {
        let v = root(&self.fillvol, self.dim + 1);
        (v > 0.0).then(|| q_to_f64(&self.fillrad) / v)
    }

    pub fn fillvol_root_over_vol_root(&self) -> Option<f64> {
        let v = root(&self.vol, self.dim);
        (v > 0.0).then(|| root(&self.fillvol, self.dim + 1) / v)
    }

    pub fn fillrad_over_vol_root(&self) -> Option<f64> {
        let v = root(&self.vol, self.dim);
        (v > 0.0).then(|| q_to_f64(&self.fillrad) / v)
    }

    pub fn report(&self) -> VerifyReport {
        VerifyReport {
            dim: self.dim,
            vol: ExactReal::from(&self.vol),
            sys: self.sys.as_ref().map(ExactReal::from),
            witness: self.witness.as_ref().map(Chain::to_json),
            fillrad: ExactReal::from(&self.fillrad),
            fillvol: ExactReal::from(&self.fillvol),
            fill_method: self.fill_method,
            epsilon: ExactReal::from(&self.epsilon),
            net_size: self.net_size,
            additive_slack: ExactReal::from(&self.additive_slack),
            tolerance: ExactReal::from(&self.tolerance),
            ratios: Ratios {
                sys_over_fillrad: self.sys_over_fillrad(),
                fillrad_over_fillvol_root: self.fillrad_over_fillvol_root(),
                fillvol_root_over_vol_root: self.fillvol_root_over_vol_root(),
                fillrad_over_vol_root: self.fillrad_over_vol_root(),
            },
            systolic_holds: self.systolic_holds,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Ratios {
    pub sys_over_fillrad: Option<f64>,
    pub fillrad_over_fillvol_root: Option<f64>,
    pub fillvol_root_over_vol_root: Option<f64>,
    pub fillrad_over_vol_root: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub dim: usize,
    pub vol: ExactReal,
    pub sys: Option<ExactReal>,
    pub witness: Option<ChainJson>,
    pub fillrad: ExactReal,
    pub fillvol: ExactReal,
    pub fill_method: FillMethod,
    pub epsilon: ExactReal,
    pub net_size: usize,
    pub additive_slack: ExactReal,
    pub tolerance: ExactReal,
    pub ratios: Ratios,
    pub systolic_holds: Option<bool>,
}

/// Computes systole, filling radius, filling volume and volume of a closed
/// manifold and checks `Sys <= 6 FillRad + 24 ε`.
///
/// The filling problems live in the Rips complex (scale = diameter, up to
/// dimension `n + 1`) over the Kuratowski image of the mesh's edge-path
/// metric, taken with respect to a maximal ε-net. The systole is computed
/// for surfaces and closed curves; other dimensions report no systole.
/// The systole leg runs alongside the filling legs.
pub fn verify_chain(m: &ClosedManifoldComplex, params: &HarnessParams) -> Result<SystoleReport> {
    if !params.epsilon.is_positive() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    let n = m.dim();
    let class = fundamental_class(m)?;
    let vol = m.volume()?;

    let systole_leg = || -> Result<(Option<Q>, Option<Chain>, Duration)> {
        let start = Instant::now();
        let (sys, witness) = match n {
            1 => (Some(vol.clone()), Some(class.clone())),
            2 => {
                let s = systole(m)?;
                (s.length, s.witness)
            }
            _ => (None, None),
        };
        Ok((sys, witness, start.elapsed()))
    };
    let filling_legs = || -> Result<FillingLegs> {
        let start = Instant::now();
        let mesh_metric = ambient_metric(m.complex())?;
        let net = maximal_epsilon_net(&mesh_metric, &params.epsilon, params.strategy)?;
        let embedding = kuratowski_embed(&mesh_metric, &net)?;
        let image = Arc::new(embedding.image_space()?);
        let ambient = Arc::new(build_rips(&image, &image.diameter(), n + 1, params.rips_budget)?);
        let class = class.transfer(&ambient)?;
        let ambient_time = start.elapsed();
        let (rad, vol) = rayon::join(
            || {
                let start = Instant::now();
                filling_radius(&class, &ambient).map(|r| (r.radius, start.elapsed()))
            },
            || {
                let start = Instant::now();
                let fill = match isoperimetric_fill(&class, 2) {
                    Ok(f) => (f.certificate.mass, FillMethod::Isoperimetric),
                    Err(_) => (cone_fill(&class, 0, &*ambient_metric(&ambient)?)?.mass, FillMethod::Cone),
                };
                Ok::<_, Error>((fill, start.elapsed()))
            },
        );
        let (fillrad, rad_time) = rad?;
        let ((fillvol, fill_method), vol_time) = vol?;
        Ok(FillingLegs {
            fillrad,
            fillvol,
            fill_method,
            net_size: net.len(),
            additive_slack: embedding.additive_slack(),
            timings: vec![("ambient", ambient_time), ("fillrad", rad_time), ("fillvol", vol_time)],
        })
    };
    let (sys_leg, fill_leg) = rayon::join(systole_leg, filling_legs);
    let (sys, witness, sys_time) = sys_leg?;
    let legs = fill_leg?;
    let fillrad = legs.fillrad;
    let mut timings = vec![("systole", sys_time)];
    timings.extend(legs.timings);

    let tolerance = q_int(24) * &params.epsilon;
    let systolic_holds = sys.as_ref().map(|s| *s <= q_int(6) * &fillrad + &tolerance);
    Ok(SystoleReport {
        dim: n,
        vol,
        sys,
        witness,
        fillrad,
        fillvol: legs.fillvol,
        fill_method: legs.fill_method,
        epsilon: params.epsilon.clone(),
        net_size: legs.net_size,
        additive_slack: legs.additive_slack,
        tolerance,
        systolic_holds,
        timings,
    })
}
