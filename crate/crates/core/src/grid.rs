//! Uniform grids, physical/spectral field containers and the semi-discrete
//! Fourier transform pair.
//!
//! The lattice is a periodic window of `M` nodes `x_j = j*h` with period
//! `L = M*h`. Its spectral view carries `M` equispaced wavenumbers
//! `xi_m = 2*pi*(m - M/2) / L` covering the Brillouin window
//! `[-pi/h, pi/h)`, with `xi = +pi/h` identified with `-pi/h` by
//! periodicity.
//!
//! The transform pair is defined by quadrature,
//!
//! ```text
//!   forward:   F(xi_m) = h * sum_j f_j exp(-i xi_m x_j)
//!   inverse:   f_j = (1/(M h)) * sum_m F(xi_m) exp(+i xi_m x_j)
//! ```
//!
//! and realized internally with an FFT; the quadrature definition is the
//! contract and the direct summation is kept as a test oracle.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Uniform periodic grid descriptor shared by physical and spectral views.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    h: f64,
    m: usize,
    origin_index: i64,
}

impl Grid {
    /// Builds a grid with mesh step `h` and `M` nodes. A centered grid puts
    /// the origin at node index `-M/2`, otherwise at `0`.
    pub fn new(h: f64, m: usize, centered: bool) -> Result<Grid> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Grid(format!(
                "mesh step must be positive and finite, got {h}"
            )));
        }
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::Grid(format!(
                "node count must be a power of two >= 2, got {m}"
            )));
        }
        let origin_index = if centered { -((m / 2) as i64) } else { 0 };
        Ok(Grid { h, m, origin_index })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of nodes (and of spectral bins).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Node index of the leftmost node; nodes are `x_j = j*h` for
    /// `j in [origin_index, origin_index + M)`.
    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    /// Window length `L = M*h`.
    pub fn length(&self) -> f64 {
        self.m as f64 * self.h
    }

    /// Wavenumber spacing `2*pi/L`.
    pub fn wavenumber_spacing(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Position of the node at array index `j`.
    pub fn node(&self, j: usize) -> f64 {
        (self.origin_index + j as i64) as f64 * self.h
    }

    /// Wavenumber of spectral bin `m`, in `[-pi/h, pi/h)`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        2.0 * PI * (m as i64 - (self.m / 2) as i64) as f64 / self.length()
    }

    /// Normalized wavenumber `eta = xi*h` of spectral bin `m`, in `[-pi, pi)`.
    pub fn eta(&self, m: usize) -> f64 {
        2.0 * PI * (m as i64 - (self.m / 2) as i64) as f64 / self.m as f64
    }

    /// Array index of the zero-wavenumber bin.
    pub fn dc_bin(&self) -> usize {
        self.m / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |j| self.node(j))
    }

    pub fn wavenumbers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |m| self.wavenumber(m))
    }
}

/// Complex samples `u_j` on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Complex semi-discrete Fourier coefficients on the grid's wavenumbers.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

fn check_samples(len: usize, grid: &Grid, what: &str, data: &[Complex64]) -> Result<()> {
    if len != grid.m() {
        return Err(Error::Grid(format!(
            "{what} length {len} does not match grid node count {}",
            grid.m()
        )));
    }
    if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Grid(format!("{what} contains non-finite entries")));
    }
    Ok(())
}

impl PhysicalField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<PhysicalField> {
        check_samples(values.len(), &grid, "physical field", &values)?;
        Ok(PhysicalField { grid, values })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>) -> PhysicalField {
        PhysicalField { grid, values }
    }

    pub fn zeros(grid: Grid) -> PhysicalField {
        let m = grid.m();
        PhysicalField {
            grid,
            values: vec![Complex64::default(); m],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Discrete norm `sqrt(h * sum_j |u_j|^2)` on `l2(hZ)`.
    pub fn norm_l2(&self) -> f64 {
        (self.grid.h() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Discrete norm `(h * sum_j |u_j|^p)^(1/p)`; `p = inf` gives the sup norm.
    pub fn norm_lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            self.sup_norm()
        } else {
            (self.grid.h() * self.values.iter().map(|z| z.norm().powf(p)).sum::<f64>())
                .powf(1.0 / p)
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl SpectralField {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<SpectralField> {
        check_samples(coeffs.len(), &grid, "spectral field", &coeffs)?;
        Ok(SpectralField { grid, coeffs })
    }

    pub(crate) fn from_parts(grid: Grid, coeffs: Vec<Complex64>) -> SpectralField {
        SpectralField { grid, coeffs }
    }

    pub fn zeros(grid: Grid) -> SpectralField {
        let m = grid.m();
        SpectralField {
            grid,
            coeffs: vec![Complex64::default(); m],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The `l2(hZ)` norm of the physical-side field, via the Parseval
    /// identity `h * sum_j |f_j|^2 = (1/(M h)) * sum_m |F_m|^2`.
    pub fn norm_l2(&self) -> f64 {
        (self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
            / (self.grid.m() as f64 * self.grid.h()))
        .sqrt()
    }
}

fn fft_pair(len: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    type PlanCache = Mutex<HashMap<usize, (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>>;
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(len)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(len), planner.plan_fft_inverse(len))
        })
        .clone()
}

/// Roots of unity `exp(2*pi*i*k/m)` for `k in 0..m`. Indexing by an exactly
/// reduced residue keeps the twiddle phases accurate for large node indices.
fn unit_roots(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

/// Forward semi-discrete Fourier transform,
/// `F(xi_m) = h * sum_j f_j exp(-i xi_m x_j)`.
pub fn sdft(f: &PhysicalField) -> SpectralField {
    let grid = f.grid();
    let m = grid.m();
    let h = grid.h();
    let o = grid.origin_index();

    // Split the exponent as exp(-2*pi*i*(m - M/2)(o + j)/M); the (-1)^j
    // factor folds the M/2 shift into the input and the o-dependent phase
    // becomes a per-bin twiddle with residue (m*o) mod M.
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 1 { -v } else { *v })
        .collect();
    fft_pair(m).0.process(&mut buf);

    let roots = unit_roots(m);
    let o_sign = if o.rem_euclid(2) == 1 { -h } else { h };
    let coeffs = buf
        .iter()
        .enumerate()
        .map(|(bin, g)| {
            let r = (bin as i64 * o).rem_euclid(m as i64) as usize;
            o_sign * roots[r].conj() * g
        })
        .collect();
    SpectralField::from_parts(grid, coeffs)
}

/// Inverse semi-discrete Fourier transform,
/// `f_j = (1/(M h)) * sum_m F(xi_m) exp(+i xi_m x_j)`.
pub fn isdft(f: &SpectralField) -> PhysicalField {
    let grid = f.grid();
    let m = grid.m();
    let h = grid.h();
    let o = grid.origin_index();

    let roots = unit_roots(m);
    let mut buf: Vec<Complex64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(bin, c)| {
            let r = (bin as i64 * o).rem_euclid(m as i64) as usize;
            c * roots[r]
        })
        .collect();
    fft_pair(m).1.process(&mut buf);

    let scale = 1.0 / (m as f64 * h);
    let values = buf
        .iter()
        .enumerate()
        .map(|(j, g)| {
            if (j as i64 + o).rem_euclid(2) == 1 {
                -scale * g
            } else {
                scale * g
            }
        })
        .collect();
    PhysicalField::from_parts(grid, values)
}
