//! Dispersion symbols of the continuous and semi-discrete Laplacians, their
//! critical points, and second-order Taylor models.
//!
//! Continuous: `p(xi) = xi^2`. Semi-discrete on a mesh of step `h`:
//! `p_h(xi) = 4 sin^2(xi h / 2) / h^2`, which is `2*pi/h`-periodic. The first
//! derivative (group velocity) of `p_h` vanishes at `xi = 0` and at
//! `xi = +-pi/h`; the second derivative (group acceleration) vanishes at
//! `xi = +-pi/(2h)`. These extra critical points drive everything downstream:
//! packets centered there fail to propagate, respectively fail to spread.

use crate::error::{Error, Result};

/// Anything that can serve as the phase multiplier `exp(i t s(xi))` of an
/// evolution semigroup.
pub trait DispersionRelation {
    fn value(&self, xi: f64) -> f64;
}

/// Dispersion symbol of the (discrete) Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    Continuous,
    SemiDiscrete { h: f64 },
}

impl Symbol {
    pub fn continuous() -> Symbol {
        Symbol::Continuous
    }

    pub fn semidiscrete(h: f64) -> Result<Symbol> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Grid(format!("mesh step must be positive, got {h}")));
        }
        Ok(Symbol::SemiDiscrete { h })
    }

    pub fn value(&self, xi: f64) -> f64 {
        match *self {
            Symbol::Continuous => xi * xi,
            Symbol::SemiDiscrete { h } => {
                let s = (0.5 * xi * h).sin();
                4.0 * s * s / (h * h)
            }
        }
    }

    /// Group velocity `p'(xi)`.
    pub fn first_derivative(&self, xi: f64) -> f64 {
        match *self {
            Symbol::Continuous => 2.0 * xi,
            Symbol::SemiDiscrete { h } => 2.0 * (xi * h).sin() / h,
        }
    }

    /// Group acceleration `p''(xi)`.
    pub fn second_derivative(&self, xi: f64) -> f64 {
        match *self {
            Symbol::Continuous => 2.0,
            Symbol::SemiDiscrete { h } => 2.0 * (xi * h).cos(),
        }
    }

    /// The symbol at unit mesh step, evaluated at a normalized wavenumber.
    fn normalized_value(&self, eta: f64) -> f64 {
        match *self {
            Symbol::Continuous => eta * eta,
            Symbol::SemiDiscrete { .. } => {
                let s = (0.5 * eta).sin();
                4.0 * s * s
            }
        }
    }
}

impl DispersionRelation for Symbol {
    fn value(&self, xi: f64) -> f64 {
        Symbol::value(self, xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeOrder {
    First,
    Second,
}

/// A wavenumber at which a derivative of the symbol vanishes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CriticalPoint {
    pub xi: f64,
    pub vanishes: DerivativeOrder,
}

/// Zeros of the group velocity and group acceleration inside the Brillouin
/// window. The continuous symbol has only the benign zero at the origin.
pub fn pathology_report(s: &Symbol) -> Vec<CriticalPoint> {
    use DerivativeOrder::{First, Second};
    match *s {
        Symbol::Continuous => vec![CriticalPoint {
            xi: 0.0,
            vanishes: First,
        }],
        Symbol::SemiDiscrete { h } => {
            let edge = std::f64::consts::PI / h;
            vec![
                CriticalPoint {
                    xi: -edge,
                    vanishes: First,
                },
                CriticalPoint {
                    xi: 0.0,
                    vanishes: First,
                },
                CriticalPoint {
                    xi: edge,
                    vanishes: First,
                },
                CriticalPoint {
                    xi: -0.5 * edge,
                    vanishes: Second,
                },
                CriticalPoint {
                    xi: 0.5 * edge,
                    vanishes: Second,
                },
            ]
        }
    }
}

/// Second-order Taylor data of a symbol at a normalized wavenumber `eta0`,
/// stored through the h-independent coefficients of
/// `q(eta) = c0 + c1 (eta - eta0) + c2/2 (eta - eta0)^2` and rescaled on
/// demand to `q_h(xi) = q(xi h) / h^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticModel {
    base: Symbol,
    eta0: f64,
    c0: f64,
    c1: f64,
    c2: f64,
    h: f64,
}

impl QuadraticModel {
    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    /// `(q(eta0), q'(eta0), q''(eta0))` in normalized units.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.c0, self.c1, self.c2)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `q(eta)` in normalized units. For the semi-discrete base the offset
    /// from `eta0` is taken modulo `2*pi` (nearest image) so that expansions
    /// about the window edge `eta0 = pi` see the wrapped half of their packet
    /// at a small offset, consistent with the periodicity of the lattice
    /// spectrum. The continuous symbol is not periodic and uses the raw
    /// offset, keeping its quadratic model globally exact.
    pub fn value_normalized(&self, eta: f64) -> f64 {
        let d = match self.base {
            Symbol::Continuous => eta - self.eta0,
            Symbol::SemiDiscrete { .. } => wrap_to_pi(eta - self.eta0),
        };
        self.c0 + self.c1 * d + 0.5 * self.c2 * d * d
    }

    /// Taylor remainder `r(eta) = p(eta) - q(eta)` in normalized units;
    /// identically zero when the base symbol is the continuous one.
    pub fn remainder_normalized(&self, eta: f64) -> f64 {
        self.base.normalized_value(eta) - self.value_normalized(eta)
    }
}

impl DispersionRelation for QuadraticModel {
    fn value(&self, xi: f64) -> f64 {
        self.value_normalized(xi * self.h) / (self.h * self.h)
    }
}

/// Folds a normalized wavenumber (or any angle) into `[-pi, pi)`.
pub fn wrap_to_pi(x: f64) -> f64 {
    use std::f64::consts::PI;
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can return exactly 2*pi for tiny negative inputs
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Splits a symbol at `eta0` into its second-order Taylor model; the
/// remainder is available through [`QuadraticModel::remainder_normalized`].
/// The continuous symbol is globally quadratic, so its model is exact.
pub fn taylor_split(s: &Symbol, eta0: f64) -> QuadraticModel {
    match *s {
        Symbol::Continuous => QuadraticModel {
            base: *s,
            eta0,
            c0: eta0 * eta0,
            c1: 2.0 * eta0,
            c2: 2.0,
            h: 1.0,
        },
        Symbol::SemiDiscrete { h } => {
            let half = (0.5 * eta0).sin();
            QuadraticModel {
                base: *s,
                eta0,
                c0: 4.0 * half * half,
                c1: 2.0 * eta0.sin(),
                c2: 2.0 * eta0.cos(),
                h,
            }
        }
    }
}
