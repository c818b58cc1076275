use num_traits::Zero;
use serde::Serialize;

use super::cover::{cover_balls, default_density, BallCover, BallReport};
use crate::complex::{Chain, ChainJson};
use crate::error::{Error, Result};
use crate::flatnorm::{mass_p, MassMeasure};
use crate::metric::FiniteMetricSpace;
use crate::number::{format_q, q_frac, q_int, ExactReal, Q};
use crate::slicing::{restrict, slice, VertexFunction};

/// Round cap for the decomposition loop.
pub const MAX_ROUNDS: usize = 64;

/// A cycle cut out of `L` by a ball whose boundary slice vanishes.
#[derive(Debug, Clone)]
pub struct Piece {
    pub chain: Chain,
    pub center: usize,
    pub radius: Q,
    pub eta: Q,
    pub mass: Q,
    pub diameter: Q,
    pub round: usize,
}

#[derive(Debug, Clone)]
pub struct Round {
    pub cover: BallCover,
    pub mass_before: Q,
    pub mass_after: Q,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pieces: Vec<Piece>,
    pub remainder: Chain,
    pub rounds: Vec<Round>,
    pub total: Q,
}

impl Decomposition {
    /// Checks conservation, the per-piece diameter bound and the per-round decay.
    pub fn verify(&self, p: i64) -> Result<()> {
        let pieces: Q = self.pieces.iter().map(|x| &x.mass).sum();
        if pieces + mass_p(&self.remainder, p)? != self.total {
            return Err(Error::Certificate("piece masses do not add up to the cycle mass".into()));
        }
        for (i, x) in self.pieces.iter().enumerate() {
            if x.diameter > q_int(8) * &x.mass {
                return Err(Error::Certificate(format!("piece {i} is too wide for its mass")));
            }
            if !x.chain.boundary()?.reduce_mod_p(p)?.is_zero() {
                return Err(Error::Certificate(format!("piece {i} is not a cycle mod {p}")));
            }
        }
        for (i, r) in self.rounds.iter().enumerate() {
            if r.mass_after > q_frac(4, 5) * &r.mass_before {
                return Err(Error::Certificate(format!("round {i} removed less than a fifth of the mass")));
            }
        }
        Ok(())
    }

    pub fn report(&self) -> DecompositionReport {
        DecompositionReport {
            pieces: self
                .pieces
                .iter()
                .map(|x| PieceReport {
                    chain: x.chain.to_json(),
                    center: x.center,
                    radius: ExactReal::from(&x.radius),
                    eta: ExactReal::from(&x.eta),
                    mass: ExactReal::from(&x.mass),
                    diameter: ExactReal::from(&x.diameter),
                    round: x.round,
                })
                .collect(),
            remainder: self.remainder.to_json(),
            rounds: self
                .rounds
                .iter()
                .map(|r| RoundReport {
                    balls: r.cover.report(),
                    mass_before: ExactReal::from(&r.mass_before),
                    mass_after: ExactReal::from(&r.mass_after),
                })
                .collect(),
            total: ExactReal::from(&self.total),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceReport {
    pub chain: ChainJson,
    pub center: usize,
    pub radius: ExactReal,
    pub eta: ExactReal,
    pub mass: ExactReal,
    pub diameter: ExactReal,
    pub round: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundReport {
    pub balls: Vec<BallReport>,
    pub mass_before: ExactReal,
    pub mass_after: ExactReal,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub pieces: Vec<PieceReport>,
    pub remainder: ChainJson,
    pub rounds: Vec<RoundReport>,
    pub total: ExactReal,
}

fn diameter(metric: &FiniteMetricSpace, verts: &[usize]) -> Q {
    let mut d = Q::zero();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[..i] {
            if metric.dist(a, b) > &d {
                d = metric.dist(a, b).clone();
            }
        }
    }
    d
}

/// Smallest `η ∈ (r, 2r)` at which the distance slice of `l` vanishes mod `p`.
///
/// The slice only changes at vertex distances, so one midpoint per open
/// sub-interval between them is tested.
fn vanishing_radius(l: &Chain, u: &VertexFunction, r: &Q, p: i64) -> Result<Option<Q>> {
    let hi = q_int(2) * r;
    let mut cuts: Vec<Q> = vec![r.clone()];
    let mut inner: Vec<Q> = u.values().iter().filter(|d| *d > r && *d < &hi).cloned().collect();
    inner.sort();
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi);
    for w in cuts.windows(2) {
        let eta = (&w[0] + &w[1]) / q_int(2);
        if slice(l, u, &eta)?.reduce_mod_p(p)?.is_zero() {
            return Ok(Some(eta));
        }
    }
    Ok(None)
}

/// Splits a cycle mod `p` into small cycles cut out by disjoint balls.
///
/// Each round covers the remaining mass with balls, cuts each ball at a
/// radius where the slice vanishes, and removes the pieces. Stops when the
/// remainder is zero, below `1e-9` of the initial mass, or after
/// [`MAX_ROUNDS`] rounds.
pub fn decompose_cycle(l: &Chain, p: i64, metric: &FiniteMetricSpace) -> Result<Decomposition> {
    if l.dim() == 0 {
        return Err(Error::Precondition("decomposition needs a cycle of dimension at least 1".into()));
    }
    let l = l.reduce_mod_p(p)?;
    if !l.boundary()?.is_zero() {
        return Err(Error::NotACycle(p));
    }
    let total = mass_p(&l, p)?;
    let tolerance = &total * q_frac(1, 1_000_000_000);
    let mut remainder = l.clone();
    let mut pieces = Vec::new();
    let mut rounds = Vec::new();
    while !remainder.is_zero() && rounds.len() < MAX_ROUNDS {
        let before = mass_p(&remainder, p)?;
        if before < tolerance {
            break;
        }
        let mu = MassMeasure::of(&remainder)?;
        let cover = cover_balls(&mu, metric, &default_density())?;
        let mut next = remainder.clone();
        for (y, r) in cover.centers.iter().zip(&cover.radii) {
            let u = VertexFunction::new(metric.row(*y).to_vec());
            let eta = vanishing_radius(&remainder, &u, r, p)?.ok_or_else(|| Error::NoVanishingSlice {
                center: *y,
                low: format_q(r),
                high: format_q(&(q_int(2) * r)),
            })?;
            let piece = restrict(&remainder, &u, &eta)?;
            next = next.sub(&piece)?;
            let m = mass_p(&piece, p)?;
            let diam = diameter(metric, &piece.support_vertices());
            pieces.push(Piece { chain: piece, center: *y, radius: r.clone(), eta, mass: m, diameter: diam, round: rounds.len() });
        }
        let after = mass_p(&next, p)?;
        rounds.push(Round { cover, mass_before: before, mass_after: after });
        remainder = next;
    }
    let dec = Decomposition { pieces, remainder, rounds, total };
    dec.verify(p)?;
    Ok(dec)
}
