//! The semi-inner product `<x, y>_A = <Ax, y>`, its seminorm, A-orthogonality
//! and the directional cones around a vector.
//!
//! For `x` with `||x||_A > 0` and a direction `α` (unit modulus,
//! `arg α ∈ [0, π)`), the cones are the half-spaces
//!
//! ```text
//! (x)_α^{A+} = { y : Re(α <y, x>_A) >= 0 }
//! (x)_α^{A-} = { y : Re(α <y, x>_A) <= 0 }
//! ```
//!
//! and their intersection is the directional orthogonal complement. Over a
//! complex space the global cones `x^{A±}` intersect these over every `α`,
//! which pins `<y, x>_A` to the imaginary axis. Over a real space only
//! `α = 1` is meaningful and the global cones coincide with the directional
//! ones.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CVector, Field, C64};
use crate::linalg::inner;
use crate::psd::PositiveOperator;

/// A unit scalar `α` with `arg α ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    alpha: C64,
}

impl Direction {
    pub const ONE: Direction = Direction {
        alpha: C64 { re: 1.0, im: 0.0 },
    };

    /// `α = e^{iθ}`.
    pub fn from_angle(theta: f64) -> Result<Self> {
        if !(0.0..PI).contains(&theta) {
            return Err(Error::InvalidDirection(format!(
                "angle {theta} must lie in [0, π)"
            )));
        }
        Ok(Direction {
            alpha: C64::from_polar(1.0, theta),
        })
    }

    pub fn from_alpha(alpha: C64, tol: f64) -> Result<Self> {
        if (alpha.norm() - 1.0).abs() > tol {
            return Err(Error::InvalidDirection(format!("|α| = {} is not 1", alpha.norm())));
        }
        let arg = alpha.arg();
        if !(0.0..PI).contains(&arg) {
            return Err(Error::InvalidDirection(format!("arg α = {arg} must lie in [0, π)")));
        }
        Ok(Direction { alpha })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn angle(&self) -> f64 {
        self.alpha.arg()
    }

    /// `k` equally spaced directions `θ = jπ/k`.
    pub fn grid(k: usize) -> Vec<Direction> {
        (0..k)
            .map(|j| Direction {
                alpha: C64::from_polar(1.0, PI * j as f64 / k as f64),
            })
            .collect()
    }
}

/// Membership of `y` in the directional cones around `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeMembership {
    pub in_plus: bool,
    pub in_minus: bool,
    pub in_perp: bool,
}

/// Membership of `y` in the global cones `x^{A+}`, `x^{A-}`, `x^{⊥_A}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalConeMembership {
    pub in_plus: bool,
    pub in_minus: bool,
    pub in_perp: bool,
}

pub fn a_inner(pos: &PositiveOperator, x: &CVector, y: &CVector) -> Result<C64> {
    pos.check_vector(x)?;
    pos.check_vector(y)?;
    Ok(inner(&pos.reduce(x), &pos.reduce(y)))
}

pub fn a_norm(pos: &PositiveOperator, x: &CVector) -> Result<f64> {
    pos.check_vector(x)?;
    Ok(pos.reduce(x).norm())
}

/// Absolute threshold below which `|<x, y>_A|` counts as zero.
///
/// A vector whose seminorm is at most `rank_rel sqrt(λ_max) ||v||` carries
/// nothing but rounding from the null space, so it is A-orthogonal to
/// everything; otherwise the tolerance is relative to `||x||_A ||y||_A`.
pub(crate) fn orthogonality_threshold(pos: &PositiveOperator, x: &CVector, y: &CVector) -> f64 {
    let tol = pos.tol();
    let (sx, sy) = (pos.reduce(x).norm(), pos.reduce(y).norm());
    let noise = tol.rank_rel * pos.lambda_max().sqrt();
    if sx <= noise * x.norm() || sy <= noise * y.norm() {
        return f64::INFINITY;
    }
    tol.eq_rel * sx * sy
}

pub fn a_orthogonal(pos: &PositiveOperator, x: &CVector, y: &CVector) -> Result<bool> {
    let value = a_inner(pos, x, y)?;
    Ok(value.norm() <= orthogonality_threshold(pos, x, y))
}

fn check_base(pos: &PositiveOperator, x: &CVector, y: &CVector) -> Result<()> {
    pos.check_vector(x)?;
    pos.check_vector(y)?;
    if pos.is_degenerate(x) {
        return Err(Error::DegenerateBase);
    }
    Ok(())
}

pub fn cone_membership(
    pos: &PositiveOperator,
    x: &CVector,
    y: &CVector,
    dir: Direction,
) -> Result<ConeMembership> {
    check_base(pos, x, y)?;
    if pos.field() == Field::Real && dir != Direction::ONE {
        return Err(Error::InvalidDirection(
            "a real space only admits the direction α = 1".into(),
        ));
    }
    let value = (dir.alpha * inner(&pos.reduce(y), &pos.reduce(x))).re;
    let tol = orthogonality_threshold(pos, x, y);
    let in_plus = value >= -tol;
    let in_minus = value <= tol;
    Ok(ConeMembership {
        in_plus,
        in_minus,
        in_perp: in_plus && in_minus,
    })
}

pub fn global_cone_membership(
    pos: &PositiveOperator,
    x: &CVector,
    y: &CVector,
) -> Result<GlobalConeMembership> {
    check_base(pos, x, y)?;
    let value = inner(&pos.reduce(y), &pos.reduce(x));
    let tol = orthogonality_threshold(pos, x, y);
    let (in_plus, in_minus) = match pos.field() {
        Field::Real => (value.re >= -tol, value.re <= tol),
        Field::Complex => {
            let on_axis = value.re.abs() <= tol;
            (on_axis && value.im <= tol, on_axis && value.im >= -tol)
        }
    };
    Ok(GlobalConeMembership {
        in_plus,
        in_minus,
        in_perp: in_plus && in_minus,
    })
}
