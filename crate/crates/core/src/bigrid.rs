//! Two-grid transfer operators between a fine mesh of step `h` and a coarse
//! mesh of step `2^k h`, in physical space and in Fourier representation.
//!
//! Extension by linear interpolation,
//!
//! ```text
//!   (extend f)_{2^k j + r} = (2^k - r)/2^k * f_{2^k j} + r/2^k * f_{2^k j + 2^k},
//! ```
//!
//! acts in Fourier space as multiplication by the weight
//! `b_k(eta) = prod_{j=1..k} cos^2(2^(j-2) eta)` applied to the
//! `2*pi/(2^k h)`-periodic extension of the coarse spectrum. `b_k` takes
//! values in `[0, 1]` and vanishes quadratically at `eta = +-j*pi/2^(k-1)`,
//! `1 <= j <= 2^(k-1)` — exactly the wavenumbers where the semi-discrete
//! symbol is pathological once `k >= 2`.
//!
//! Two fine-to-coarse projections are provided: plain restriction
//! (subsampling) and the tent-weighted average over the `2^(k+1) - 1`
//! neighbors of each coarse node. In Fourier space both are alias sums over
//! the `2^k` translates of the coarse window; the average additionally
//! weights each translate by `b_k` evaluated at the source wavenumber.
//!
//! All stencils wrap modulo the window length, consistent with the periodic
//! truncation of the lattice.

use crate::error::{Error, Result};
use crate::grid::{Grid, PhysicalField, SpectralField};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Fine/coarse grid pair with mesh ratio `2^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigridLevel {
    k: u32,
    fine: Grid,
    coarse: Grid,
}

impl BigridLevel {
    /// Builds the level above `fine`. Requires `k >= 1` and a coarse grid of
    /// at least 4 nodes, i.e. `k <= log2(M) - 2`.
    pub fn new(fine: &Grid, k: u32) -> Result<BigridLevel> {
        if k == 0 {
            return Err(Error::Bigrid("mesh ratio exponent k must be >= 1".into()));
        }
        let n = 1usize
            .checked_shl(k)
            .ok_or_else(|| Error::Bigrid(format!("mesh ratio 2^{k} overflows")))?;
        if fine.m() / n < 4 || !fine.m().is_multiple_of(n) {
            return Err(Error::Bigrid(format!(
                "fine grid with {} nodes cannot host k = {k} (coarse grid needs >= 4 nodes)",
                fine.m()
            )));
        }
        if fine.origin_index().rem_euclid(n as i64) != 0 {
            return Err(Error::Bigrid(format!(
                "fine origin index {} is not aligned with the coarse mesh",
                fine.origin_index()
            )));
        }
        let centered = fine.origin_index() != 0;
        let coarse = Grid::new(fine.h() * n as f64, fine.m() / n, centered)?;
        debug_assert_eq!(coarse.origin_index(), fine.origin_index() / n as i64);
        Ok(BigridLevel {
            k,
            fine: *fine,
            coarse,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Mesh ratio `n = 2^k`.
    pub fn ratio(&self) -> usize {
        1 << self.k
    }

    pub fn fine(&self) -> Grid {
        self.fine
    }

    pub fn coarse(&self) -> Grid {
        self.coarse
    }
}

/// Fine-to-coarse projection choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// Subsample at the coarse nodes.
    Restrict,
    /// Tent-weighted average of the surrounding fine values.
    Average,
}

/// Interpolation weight `b_k(eta) = prod_{j=1..k} cos^2(2^(j-2) eta)`.
pub fn weight(k: u32, eta: f64) -> f64 {
    assert!(k >= 1, "weight is defined for k >= 1");
    let mut b = 1.0;
    for j in 1..=k {
        let c = (2f64.powi(j as i32 - 2) * eta).cos();
        b *= c * c;
    }
    b
}

fn expect_grid(actual: Grid, wanted: Grid, what: &str) -> Result<()> {
    if actual != wanted {
        return Err(Error::Bigrid(format!(
            "{what} lives on the wrong grid (h = {}, M = {}; expected h = {}, M = {})",
            actual.h(),
            actual.m(),
            wanted.h(),
            wanted.m()
        )));
    }
    Ok(())
}

/// Coarse-to-fine extension by linear interpolation; exact at coarse nodes.
pub fn extend(level: &BigridLevel, f: &PhysicalField) -> Result<PhysicalField> {
    expect_grid(f.grid(), level.coarse(), "coarse field")?;
    let n = level.ratio();
    let mc = level.coarse().m();
    let c = f.values();
    let mut out = vec![Complex64::default(); level.fine().m()];
    for jc in 0..mc {
        let left = c[jc];
        let right = c[(jc + 1) % mc];
        for r in 0..n {
            let t = r as f64 / n as f64;
            out[jc * n + r] = (1.0 - t) * left + t * right;
        }
    }
    PhysicalField::new(level.fine(), out)
}

/// Fine-to-coarse restriction: the coarse value at `x_{2^k j}` is the fine
/// value there.
pub fn project_restrict(level: &BigridLevel, f: &PhysicalField) -> Result<PhysicalField> {
    expect_grid(f.grid(), level.fine(), "fine field")?;
    let n = level.ratio();
    let out = (0..level.coarse().m())
        .map(|jc| f.values()[jc * n])
        .collect();
    PhysicalField::new(level.coarse(), out)
}

/// Fine-to-coarse tent average over the `2^(k+1) - 1` neighbors of each
/// coarse node; the weights `(2^k - |d|)/4^k` sum to one.
pub fn project_average(level: &BigridLevel, f: &PhysicalField) -> Result<PhysicalField> {
    expect_grid(f.grid(), level.fine(), "fine field")?;
    let n = level.ratio() as i64;
    let m = level.fine().m() as i64;
    let inv = 1.0 / (n * n) as f64;
    let v = f.values();
    let out = (0..level.coarse().m())
        .map(|jc| {
            let center = (jc as i64) * n;
            let mut acc = Complex64::default();
            for d in -(n - 1)..n {
                let w = (n - d.abs()) as f64 * inv;
                acc += w * v[(center + d).rem_euclid(m) as usize];
            }
            acc
        })
        .collect();
    PhysicalField::new(level.coarse(), out)
}

/// Applies the chosen projection.
pub fn project(level: &BigridLevel, f: &PhysicalField, which: Projection) -> Result<PhysicalField> {
    match which {
        Projection::Restrict => project_restrict(level, f),
        Projection::Average => project_average(level, f),
    }
}

/// The bigrid filter: project to the coarse grid, then extend back. The
/// result is the initial datum actually evolved in filtered runs.
pub fn bigrid_filter(
    level: &BigridLevel,
    f: &PhysicalField,
    which: Projection,
) -> Result<PhysicalField> {
    extend(level, &project(level, f, which)?)
}

/// Signed bin offset from the zero-wavenumber bin.
fn lattice_index(bin: usize, m: usize) -> i64 {
    bin as i64 - (m / 2) as i64
}

/// Folds a fine lattice offset into the coarse window `[-Mc/2, Mc/2)`.
fn fold_to_coarse(nu: i64, mc: i64) -> i64 {
    (nu + mc / 2).rem_euclid(mc) - mc / 2
}

/// Fourier form of [`extend`]: the coarse spectrum is extended periodically
/// over the fine window and multiplied by `b_k(xi h)`.
pub fn extend_fourier(level: &BigridLevel, f: &SpectralField) -> Result<SpectralField> {
    expect_grid(f.grid(), level.coarse(), "coarse spectrum")?;
    let m = level.fine().m();
    let mc = level.coarse().m() as i64;
    let coeffs = (0..m)
        .map(|bin| {
            let nu = lattice_index(bin, m);
            let coarse_bin = (fold_to_coarse(nu, mc) + mc / 2) as usize;
            let eta = 2.0 * PI * nu as f64 / m as f64;
            weight(level.k(), eta) * f.coeffs()[coarse_bin]
        })
        .collect();
    SpectralField::new(level.fine(), coeffs)
}

fn alias_sum(level: &BigridLevel, f: &SpectralField, weighted: bool) -> Result<SpectralField> {
    expect_grid(f.grid(), level.fine(), "fine spectrum")?;
    let m = level.fine().m() as i64;
    let mc = level.coarse().m();
    let half = (level.ratio() / 2) as i64;
    let coeffs = (0..mc)
        .map(|bin| {
            let nu_c = lattice_index(bin, mc);
            let mut acc = Complex64::default();
            for j in -half..half {
                let nu = nu_c + j * mc as i64;
                let fine_bin = (nu + m / 2).rem_euclid(m) as usize;
                let term = f.coeffs()[fine_bin];
                if weighted {
                    let eta = 2.0 * PI * nu as f64 / m as f64;
                    acc += weight(level.k(), eta) * term;
                } else {
                    acc += term;
                }
            }
            acc
        })
        .collect();
    SpectralField::new(level.coarse(), coeffs)
}

/// Fourier form of [`project_restrict`]: the plain alias sum over the `2^k`
/// translates of the coarse window.
pub fn project_restrict_fourier(level: &BigridLevel, f: &SpectralField) -> Result<SpectralField> {
    alias_sum(level, f, false)
}

/// Fourier form of [`project_average`]: the alias sum with each translate
/// weighted by `b_k` at its source wavenumber.
pub fn project_average_fourier(level: &BigridLevel, f: &SpectralField) -> Result<SpectralField> {
    alias_sum(level, f, true)
}
