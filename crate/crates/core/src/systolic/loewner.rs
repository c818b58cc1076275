use serde::Serialize;

use super::manifold::ClosedManifoldComplex;
use super::systole::systole;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;

use crate::number::{q_int, q_to_f64, ExactReal, Q, QUANTUM_BITS};

#[derive(Debug, Clone)]
pub struct LoewnerCheck {
    pub sys: Q,
    pub area: Q,
    /// `Sys² / ((2/√3) Area)`; at most one on every torus.
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LoewnerReport {
    pub sys: ExactReal,
    pub sys_squared: ExactReal,
    pub area: ExactReal,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
}

impl LoewnerCheck {
    pub fn report(&self) -> LoewnerReport {
        LoewnerReport {
            sys: ExactReal::from(&self.sys),
            sys_squared: ExactReal::from(&(&self.sys * &self.sys)),
            area: ExactReal::from(&self.area),
            bound: 2.0 / 3f64.sqrt() * q_to_f64(&self.area),
            ratio: self.ratio,
            holds: self.holds,
        }
    }
}

/// Compares `Sys²` with `(2/√3) Area` on a torus.
///
/// The comparison is exact: `Sys² <= (2/√3) A` iff `3 Sys⁴ <= 4 A²`. Irrational
/// triangle areas are stored rounded to the rational grid, so `A` is taken
/// as the stored area plus one grid step per triangle, an upper bound for
/// the true area.
pub fn loewner_check(m: &ClosedManifoldComplex) -> Result<LoewnerCheck> {
    if m.dim() != 2 {
        return Err(Error::NotATorus(format!("dimension {} is not a surface", m.dim())));
    }
    let chi = m.euler_characteristic();
    if chi != 0 || !m.is_orientable() {
        let kind = if m.is_orientable() { "orientable" } else { "nonorientable" };
        return Err(Error::NotATorus(format!("{kind} surface with Euler characteristic {chi}")));
    }
    let s = systole(m)?;
    let sys = s.length.ok_or_else(|| Error::Solver("torus reported without a nontrivial loop".into()))?;
    let area = m.volume()?;
    let sq = &sys * &sys;
    let step = Q::new(BigInt::one(), BigInt::one() << QUANTUM_BITS);
    let upper = &area + step * q_int(m.complex().count(2) as i64);
    let holds = q_int(3) * &sq * &sq <= q_int(4) * &upper * &upper;
    let ratio = q_to_f64(&sq) * 3f64.sqrt() / (2.0 * q_to_f64(&area));
    Ok(LoewnerCheck { sys, area, ratio, holds })
}
