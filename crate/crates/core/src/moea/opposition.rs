//! Opposition operators and collective oppositional initialization.
//!
//! All operators act per dimension on a point inside `[lower, upper]`. The
//! randomized kinds draw uniformly between two anchors: the domain center,
//! the point, its reflection about the center, or the bound nearest to one
//! of them.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};

use super::Bounds;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OppositionKind {
    /// Reflection about the domain center.
    Plain,
    /// Uniform between the center and the reflection.
    QuasiOpposite,
    /// Uniform between the point and the center.
    QuasiReflected,
    /// Uniform between the reflection and the bound nearest to it.
    Extended,
    /// Uniform between the point and the bound nearest to it.
    ReflectedExtended,
}

impl OppositionKind {
    pub const ALL: [OppositionKind; 5] = [
        OppositionKind::Plain,
        OppositionKind::QuasiOpposite,
        OppositionKind::QuasiReflected,
        OppositionKind::Extended,
        OppositionKind::ReflectedExtended,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OppositionKind::Plain => "plain",
            OppositionKind::QuasiOpposite => "quasi_opposite",
            OppositionKind::QuasiReflected => "quasi_reflected",
            OppositionKind::Extended => "extended",
            OppositionKind::ReflectedExtended => "reflected_extended",
        }
    }
}

impl fmt::Display for OppositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OppositionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OppositionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown opposition kind '{s}'")))
    }
}

#[inline]
fn uniform_between(rng: &mut dyn RngCore, a: f64, b: f64) -> f64 {
    let u: f64 = rng.gen();
    a + (b - a) * u
}

/// Bound nearest to `v`, or the center itself when `v` sits on it.
#[inline]
fn nearest_bound(v: f64, lo: f64, hi: f64, center: f64) -> f64 {
    if v < center {
        lo
    } else if v > center {
        hi
    } else {
        center
    }
}

fn quasi_opposite_of(reflected: f64, center: f64, rng: &mut dyn RngCore) -> f64 {
    uniform_between(rng, center, reflected)
}

fn quasi_reflected_of(x: f64, center: f64, rng: &mut dyn RngCore) -> f64 {
    uniform_between(rng, x, center)
}

fn extended_of(reflected: f64, lo: f64, hi: f64, center: f64, rng: &mut dyn RngCore) -> f64 {
    uniform_between(rng, reflected, nearest_bound(reflected, lo, hi, center))
}

fn reflected_extended_of(x: f64, lo: f64, hi: f64, center: f64, rng: &mut dyn RngCore) -> f64 {
    uniform_between(rng, x, nearest_bound(x, lo, hi, center))
}

/// Opposite of `x` of the given kind.
pub fn opposite(x: &[f64], bounds: &Bounds, kind: OppositionKind, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
    if !bounds.contains(x) {
        return Err(Error::InvalidInput(format!("point {x:?} outside bounds")));
    }
    let out = (0..bounds.dim())
        .map(|d| {
            let (lo, hi, c) = (bounds.lower()[d], bounds.upper()[d], bounds.center(d));
            let v = x[d];
            let reflected = lo + hi - v;
            match kind {
                OppositionKind::Plain => reflected,
                OppositionKind::QuasiOpposite => quasi_opposite_of(reflected, c, rng),
                OppositionKind::QuasiReflected => quasi_reflected_of(v, c, rng),
                OppositionKind::Extended => extended_of(reflected, lo, hi, c, rng),
                OppositionKind::ReflectedExtended => reflected_extended_of(v, lo, hi, c, rng),
            }
        })
        .collect();
    Ok(out)
}

/// Collective oppositional population of size `n`.
///
/// Draws `n / 5` uniform seeds, then emits for each seed its plain,
/// quasi-opposite, quasi-reflected, extended and reflected-extended
/// opposites. The quasi-opposite and extended members are derived from the
/// seed's plain opposite. The result is grouped by family in that order;
/// nothing is evaluated.
pub fn collective_init(n: usize, bounds: &Bounds, rng: &mut dyn RngCore) -> Result<Vec<(OppositionKind, Vec<f64>)>> {
    if n == 0 || n % 5 != 0 {
        return Err(Error::Config(format!("collective initialization needs a multiple of 5, got {n}")));
    }
    let m = n / 5;
    let dim = bounds.dim();
    let seeds: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|d| uniform_between(rng, bounds.lower()[d], bounds.upper()[d])).collect())
        .collect();

    let mut families: [Vec<Vec<f64>>; 5] = Default::default();
    for x in &seeds {
        let mut plain = Vec::with_capacity(dim);
        let mut qo = Vec::with_capacity(dim);
        let mut qr = Vec::with_capacity(dim);
        let mut eo = Vec::with_capacity(dim);
        let mut reo = Vec::with_capacity(dim);
        for d in 0..dim {
            plain.push(bounds.lower()[d] + bounds.upper()[d] - x[d]);
        }
        for d in 0..dim {
            let (lo, hi, c) = (bounds.lower()[d], bounds.upper()[d], bounds.center(d));
            qo.push(quasi_opposite_of(plain[d], c, rng));
            qr.push(quasi_reflected_of(x[d], c, rng));
            eo.push(extended_of(plain[d], lo, hi, c, rng));
            reo.push(reflected_extended_of(x[d], lo, hi, c, rng));
        }
        for (fam, v) in families.iter_mut().zip([plain, qo, qr, eo, reo]) {
            fam.push(v);
        }
    }

    Ok(OppositionKind::ALL
        .into_iter()
        .zip(families)
        .flat_map(|(kind, members)| members.into_iter().map(move |x| (kind, x)))
        .collect())
}
