//! Exact numerical evaluation of the crossing probability and its first
//! derivatives, by grid convolution of the renewal identities. No
//! central-limit approximation is involved; this module is the internal
//! oracle the approximations are judged against.

use rustfft::{num_complex::Complex, FftPlanner};

use crate::dist::{DistributionSpec, RenewalModel};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};

/// Grid and truncation controls for the convolution evaluators.
#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    /// target number of grid points across the widest window
    pub target_points: usize,
    /// explicit grid step; overrides target_points when set
    pub h_override: Option<f64>,
    /// per-point tail mass allowed beyond the series truncation order
    pub series_eps: f64,
    /// audit threshold for the renewal-mass partition defect
    pub trunc_tol: f64,
    /// guard on table size: grid points times series orders
    pub budget: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            target_points: 4000,
            h_override: None,
            series_eps: 1e-10,
            trunc_tol: 1e-6,
            budget: 20_000_000,
        }
    }
}

/// What the evaluator actually used, attached to every result row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub h: f64,
    pub y_points: usize,
    pub t_points: usize,
    pub orders: usize,
    /// max over the level grid of 1 - sum_n P{M(x)=n}
    pub neglected_mass: f64,
}

/// Tabulated n-fold self-convolutions of one density on a uniform grid.
pub struct ConvolutionTable {
    pub h: f64,
    pub len: usize,
    rows: Vec<Vec<f64>>,
}

impl ConvolutionTable {
    pub fn max_order(&self) -> usize {
        self.rows.len()
    }

    /// The sampled n-fold convolution, n >= 1.
    pub fn row(&self, n: usize) -> &[f64] {
        &self.rows[n - 1]
    }

    /// Linear interpolation of row n at x; zero outside the window.
    pub fn value(&self, n: usize, x: f64) -> f64 {
        interp(&self.rows[n - 1], self.h, x)
    }

    /// Trapezoid mass of row n over the whole window.
    pub fn row_mass(&self, n: usize) -> f64 {
        trap_mass(&self.rows[n - 1], self.h)
    }
}

/// Build the table of f^{*n}, n = 1..max_order, with step h over [0, xmax].
/// Convolutions run through the transform path; the direct path is kept for
/// cross-checking.
pub fn build_table(
    spec: &DistributionSpec,
    h: f64,
    xmax: f64,
    max_order: usize,
    budget: usize,
) -> Result<ConvolutionTable> {
    if !(h > 0.0 && xmax > h && max_order >= 1) {
        return Err(Error::Domain(format!(
            "table: need h > 0, xmax > h, max_order >= 1; got h {h}, xmax {xmax}, order {max_order}"
        )));
    }
    let len = (xmax / h).ceil() as usize + 1;
    if len * max_order > budget {
        return Err(Error::TableBudget { requested: len * max_order, budget });
    }
    let base = sample_pdf(spec, h, len);
    let mut rows = Vec::with_capacity(max_order);
    rows.push(base.clone());
    let base_fft = FftConvolver::new(&base, len);
    for n in 1..max_order {
        let prev = &rows[n - 1];
        let next = base_fft.trap_conv(prev, h);
        rows.push(next);
    }
    Ok(ConvolutionTable { h, len, rows })
}

/// Density sampled on the grid, with the right limit at zero for point 0.
fn sample_pdf(spec: &DistributionSpec, h: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    out.push(spec.pdf_at_zero());
    for i in 1..len {
        out.push(spec.pdf_unchecked(i as f64 * h));
    }
    out
}

fn interp(row: &[f64], h: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let pos = x / h;
    let i = pos.floor() as usize;
    if i + 1 >= row.len() {
        return if i < row.len() { row[i] } else { 0.0 };
    }
    let frac = pos - i as f64;
    row[i] * (1.0 - frac) + row[i + 1] * frac
}

/// Trapezoid of f over [0, hi] on a step-h grid, with a partial final cell
/// when hi is off-grid.
fn trap_over_grid(hi: f64, h: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    if hi <= 0.0 {
        return 0.0;
    }
    let jmax = (hi / h).floor() as usize;
    let mut total = if jmax == 0 {
        0.0
    } else {
        let mut acc = 0.0;
        for j in 0..=jmax {
            let w = if j == 0 || j == jmax { 0.5 } else { 1.0 };
            acc += w * f(j as f64 * h);
        }
        h * acc
    };
    let rest = hi - jmax as f64 * h;
    if rest > 1e-12 * h {
        total += 0.5 * rest * (f(jmax as f64 * h) + f(hi));
    }
    total
}

fn trap_mass(row: &[f64], h: f64) -> f64 {
    if row.len() < 2 {
        return 0.0;
    }
    let inner: f64 = row[1..row.len() - 1].iter().sum();
    h * (inner + 0.5 * (row[0] + row[row.len() - 1]))
}

/// Linear convolution through one cached forward transform of the base
/// sequence. Output truncated to `out_len`; values there only depend on the
/// inputs inside the window, so truncation is exact.
struct FftConvolver {
    size: usize,
    out_len: usize,
    base_fft: Vec<Complex<f64>>,
    base: Vec<f64>,
}

impl FftConvolver {
    fn new(base: &[f64], out_len: usize) -> Self {
        let size = (base.len() + out_len).next_power_of_two();
        let mut buf: Vec<Complex<f64>> =
            base.iter().map(|&x| Complex::new(x, 0.0)).collect();
        buf.resize(size, Complex::new(0.0, 0.0));
        FftPlanner::new().plan_fft_forward(size).process(&mut buf);
        Self { size, out_len, base_fft: buf, base: base.to_vec() }
    }

    /// Trapezoid-rule convolution h * integral of base(x - s) other(s) ds.
    fn trap_conv(&self, other: &[f64], h: f64) -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> =
            other.iter().map(|&x| Complex::new(x, 0.0)).collect();
        buf.resize(self.size, Complex::new(0.0, 0.0));
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(self.size).process(&mut buf);
        for (b, a) in buf.iter_mut().zip(&self.base_fft) {
            *b *= a;
        }
        planner.plan_fft_inverse(self.size).process(&mut buf);
        let scale = 1.0 / self.size as f64;
        let mut out = Vec::with_capacity(self.out_len);
        for i in 0..self.out_len {
            let raw = buf[i].re * scale;
            let a_i = if i < self.base.len() { self.base[i] } else { 0.0 };
            let o_i = if i < other.len() { other[i] } else { 0.0 };
            let corrected = raw - 0.5 * (self.base[0] * o_i + a_i * other[0]);
            out.push(h * corrected);
        }
        out
    }
}

/// Direct O(n^2) trapezoid convolution; reference for the transform path.
pub fn direct_trap_conv(a: &[f64], b: &[f64], h: f64, out_len: usize) -> Vec<f64> {
    let mut out = vec![0.0; out_len];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..=i {
            if j >= a.len() || i - j >= b.len() {
                continue;
            }
            let w = if j == 0 || j == i { 0.5 } else { 1.0 };
            acc += w * a[j] * b[i - j];
        }
        *o = h * acc;
    }
    out
}

/// P{M(x) = n}, n = 0..max order, where M counts how many jump partial sums
/// fit under the level x.
#[derive(Debug, Clone)]
pub struct RenewalMassRow {
    pub x: f64,
    pub probs: Vec<f64>,
}

/// One renewal-mass row at level x: probs[0] = P{Y > x} and for n >= 1
/// probs[n] = trapezoid of f_Y^{*n}(x - z) P{Y > z} over the grid.
pub fn renewal_mass(
    table_y: &ConvolutionTable,
    x: f64,
    spec_y: &DistributionSpec,
) -> Result<RenewalMassRow> {
    let window = (table_y.len - 1) as f64 * table_y.h;
    if x > window + 1e-12 {
        return Err(Error::WindowExceeded { x, window });
    }
    let h = table_y.h;
    let mut probs = vec![0.0; table_y.max_order() + 1];
    probs[0] = spec_y.tail(x);
    for n in 1..=table_y.max_order() {
        let val =
            trap_over_grid(x, h, &mut |z| table_y.value(n, x - z) * spec_y.tail(z));
        probs[n] = val.max(0.0);
    }
    Ok(RenewalMassRow { x, probs })
}

/// Precomputed state for one (model, u, c, t): convolution tables for both
/// laws, renewal-mass rows on the level grid, and the weighted convolutions
/// the unconditional integrals reduce to.
pub struct KendallEvaluator {
    model: RenewalModel,
    pub u: f64,
    pub c: f64,
    pub t: f64,
    h: f64,
    t_points: usize,
    t_table: ConvolutionTable,
    /// mass[n-1][i] = P{M(x_i) = n} on the level grid x_i = i h
    mass: Vec<Vec<f64>>,
    /// kmass[n-1][i] = integral of P{Y > z} d/dx f_Y^{*n}(x_i - z) dz
    kmass: Vec<Vec<f64>>,
    /// g[n-1][j] = integral of (u + c v) f_T1(v) f_T^{*n}(z_j - v) dv
    g: Vec<Vec<f64>>,
    /// gy[n-1][j] = integral of f_T1(v) (z_j - v) f_T^{*n}(z_j - v) dv
    gy: Vec<Vec<f64>>,
    /// f_Y^{*n}(0) per order (nonzero only when f_Y(0) > 0 and n = 1)
    y_at_zero: Vec<f64>,
    lnfact: Vec<f64>,
    diag: Diagnostics,
}

impl KendallEvaluator {
    pub fn new(model: &RenewalModel, u: f64, c: f64, t: f64, cfg: &GridConfig) -> Result<Self> {
        if !(u > 0.0 && c >= 0.0 && t > 0.0) {
            return Err(Error::Domain(format!(
                "evaluator: need u > 0, c >= 0, t > 0; got u {u}, c {c}, t {t}"
            )));
        }
        let s = model.summary()?;
        let y_window = u + c * t;
        let h0 = cfg.h_override.unwrap_or(y_window.max(t) / cfg.target_points as f64);
        // make h divide t exactly so the z-grid endpoint lands on t
        let t_points = (t / h0).round().max(8.0) as usize;
        let h = t / t_points as f64;
        let orders = series_order(y_window, s.ey, s.dy, cfg.series_eps);
        let y_len = (y_window / h).ceil() as usize + 2;
        if (y_len + t_points + 1) * orders > cfg.budget {
            return Err(Error::TableBudget {
                requested: (y_len + t_points + 1) * orders,
                budget: cfg.budget,
            });
        }
        let y_table = build_table(&model.dist_y, h, y_window + 2.0 * h, orders, cfg.budget)?;
        let t_table = build_table(&model.dist_t, h, t + 2.0 * h, orders, cfg.budget)?;

        // survival of Y on the level grid
        let tail_y: Vec<f64> =
            (0..y_table.len).map(|i| model.dist_y.tail(i as f64 * h)).collect();
        let tail_fft = FftConvolver::new(&tail_y, y_table.len);
        let mass: Vec<Vec<f64>> = (1..=orders)
            .map(|n| {
                tail_fft
                    .trap_conv(y_table.row(n), h)
                    .into_iter()
                    .map(|v| v.max(0.0))
                    .collect()
            })
            .collect();

        // derivative rows d/dx f_Y^{*n}: f_Y(0) f^{*(n-1)} plus f_Y' * f^{*(n-1)};
        // for n = 1 that collapses to f_Y' alone, the unit atom's boundary
        // part being carried by the separate f^{*n}(0) terms
        let fy0 = model.dist_y.pdf_at_zero();
        let dy_row: Vec<f64> = (0..y_table.len)
            .map(|i| model.dist_y.pdf_deriv(i as f64 * h).unwrap_or(0.0))
            .collect();
        let dy_fft = FftConvolver::new(&dy_row, y_table.len);
        let mut drows: Vec<Vec<f64>> = Vec::with_capacity(orders);
        drows.push(dy_row.clone());
        for n in 2..=orders {
            let prev = y_table.row(n - 1);
            let mut row = dy_fft.trap_conv(prev, h);
            for (r, p) in row.iter_mut().zip(prev) {
                *r += fy0 * p;
            }
            drows.push(row);
        }
        let kmass: Vec<Vec<f64>> =
            drows.iter().map(|row| tail_fft.trap_conv(row, h)).collect();

        // first-spacing weights on the z-grid
        let t_len = t_points + 1;
        let f1_row = sample_pdf(&model.dist_t1, h, t_len);
        let a_row: Vec<f64> = f1_row
            .iter()
            .enumerate()
            .map(|(j, &f)| (u + c * j as f64 * h) * f)
            .collect();
        let a_fft = FftConvolver::new(&a_row, t_len);
        let f1_fft = FftConvolver::new(&f1_row, t_len);
        let mut g = Vec::with_capacity(orders);
        let mut gy = Vec::with_capacity(orders);
        for n in 1..=orders {
            let row_n = &t_table.row(n)[..t_len];
            g.push(a_fft.trap_conv(row_n, h));
            let y_weighted: Vec<f64> = row_n
                .iter()
                .enumerate()
                .map(|(j, &f)| j as f64 * h * f)
                .collect();
            gy.push(f1_fft.trap_conv(&y_weighted, h));
        }

        let y_at_zero: Vec<f64> = (1..=orders).map(|n| y_table.row(n)[0]).collect();

        let mut lnfact = vec![0.0; orders + 1];
        for n in 1..=orders {
            lnfact[n] = lnfact[n - 1] + (n as f64).ln();
        }

        // partition audit on the level range actually used, [u, u + c t]
        let i_lo = (u / h).floor() as usize;
        let mut neglected: f64 = 0.0;
        for i in i_lo..y_table.len {
            let x = i as f64 * h;
            let total: f64 =
                model.dist_y.tail(x) + mass.iter().map(|row| row[i]).sum::<f64>();
            neglected = neglected.max(1.0 - total);
        }
        if neglected > cfg.trunc_tol {
            return Err(Error::Truncation {
                neglected,
                budget: cfg.trunc_tol,
                x: y_window,
            });
        }

        let diag = Diagnostics {
            h,
            y_points: y_table.len,
            t_points: t_len,
            orders,
            neglected_mass: neglected,
        };
        Ok(Self {
            model: *model,
            u,
            c,
            t,
            h,
            t_points,
            t_table,
            mass,
            kmass,
            g,
            gy,
            y_at_zero,
            lnfact,
            diag,
        })
    }

    pub fn diagnostics(&self) -> Diagnostics {
        self.diag
    }

    fn orders(&self) -> usize {
        self.mass.len()
    }

    fn mass_at(&self, n: usize, x: f64) -> f64 {
        interp(&self.mass[n - 1], self.h, x)
    }

    fn kmass_at(&self, n: usize, x: f64) -> f64 {
        interp(&self.kmass[n - 1], self.h, x)
    }

    /// Trapezoid of `f(y)` over [0, hi] on the evaluator grid, with a partial
    /// final cell when hi is off-grid.
    fn trap_over(&self, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        trap_over_grid(hi, self.h, &mut f)
    }

    /// P{v < T <= t | T1 = v}: crossing happens after the first renewal but
    /// within the horizon.
    pub fn conditional(&self, v: f64) -> Result<f64> {
        if !(v >= 0.0 && v <= self.t) {
            return Err(Error::Domain(format!("conditional: v {v} outside [0, t]")));
        }
        let (u, c) = (self.u, self.c);
        let base = u + c * v;
        let val = self.trap_over(self.t - v, |y| {
            let w = base + c * y;
            let mut inner = 0.0;
            for n in 1..=self.orders() {
                inner += self.mass_at(n, w) * self.t_table.value(n, y);
            }
            base / w * inner
        });
        Ok(val.clamp(0.0, 1.0))
    }

    /// P{T <= t}: the immediate-crossing term plus the first-spacing mixture
    /// of the conditional probabilities, rewritten as one z-integral against
    /// the precomputed g rows.
    pub fn unconditional(&self) -> Result<f64> {
        let (u, c) = (self.u, self.c);
        let first = {
            let quad = QuadratureConfig { max_subdivisions: 400, ..Default::default() };
            let y = self.model.dist_y;
            let t1 = self.model.dist_t1;
            integrate(|v| y.tail(u + c * v) * t1.pdf_unchecked(v.max(1e-300)), 0.0, self.t, &quad)?
                .value
        };
        let h = self.h;
        let mut acc = 0.0;
        for j in 0..=self.t_points {
            let wgt = if j == 0 || j == self.t_points { 0.5 } else { 1.0 };
            let z = j as f64 * h;
            let wz = u + c * z;
            let mut inner = 0.0;
            for n in 1..=self.orders() {
                inner += self.mass_at(n, wz) * self.g[n - 1][j];
            }
            acc += wgt * inner / wz;
        }
        Ok((first + h * acc).clamp(0.0, 1.0))
    }

    /// P{T <= t} for exponential jumps, through the Poisson-weight series.
    /// Independent of the renewal-mass rows; cross-validates `unconditional`.
    pub fn exp_y(&self) -> Result<f64> {
        let rho = match self.model.dist_y {
            DistributionSpec::Exponential { rate } => rate,
            other => {
                return Err(Error::UnsupportedModel(format!(
                    "exponential-jump series needs exponential Y, got {other:?}"
                )))
            }
        };
        let (u, c) = (self.u, self.c);
        let h = self.h;
        let f1 = self.model.dist_t1;
        let mut acc = 0.0;
        for j in 0..=self.t_points {
            let wgt = if j == 0 || j == self.t_points { 0.5 } else { 1.0 };
            let s = j as f64 * h;
            let w = u + c * s;
            let lw = (rho * w).ln();
            let mut series = 0.0;
            for n in 1..=self.orders() {
                let logp = -rho * w + n as f64 * lw - self.lnfact[n];
                if logp < -745.0 {
                    continue;
                }
                series += logp.exp() * self.g[n - 1][j];
            }
            let f1s = if j == 0 { f1.pdf_at_zero() } else { f1.pdf_unchecked(s) };
            acc += wgt * ((-rho * w).exp() * f1s + series / w);
        }
        Ok((h * acc).clamp(0.0, 1.0))
    }

    /// d/dc P{v < T <= t | T1 = v}: the three displayed terms of the
    /// conditional derivative in c.
    pub fn dc_conditional(&self, v: f64) -> Result<f64> {
        self.deriv_conditional(v, true)
    }

    /// d/du P{v < T <= t | T1 = v}.
    pub fn du_conditional(&self, v: f64) -> Result<f64> {
        self.deriv_conditional(v, false)
    }

    fn deriv_conditional(&self, v: f64, wrt_c: bool) -> Result<f64> {
        if !(self.c > 0.0) {
            return Err(Error::Regime("derivative terms need c > 0".into()));
        }
        if !(v >= 0.0 && v < self.t) {
            return Err(Error::Domain(format!("derivative: v {v} outside [0, t)")));
        }
        let (u, c) = (self.u, self.c);
        let base = u + c * v;
        let tail_y = self.model.dist_y;
        let val = self.trap_over(self.t - v, |y| {
            let w = base + c * y;
            let mut m_sum = 0.0;
            let mut k_sum = 0.0;
            let mut z0_sum = 0.0;
            for n in 1..=self.orders() {
                let ft = self.t_table.value(n, y);
                if ft == 0.0 {
                    continue;
                }
                m_sum += self.mass_at(n, w) * ft;
                k_sum += self.kmass_at(n, w) * ft;
                z0_sum += self.y_at_zero[n - 1] * ft;
            }
            let tail_w = tail_y.tail(w);
            if wrt_c {
                -u * y / (w * w) * m_sum
                    + base * (v + y) / w * (k_sum + tail_w * z0_sum)
            } else {
                c * y / (w * w) * m_sum + base / w * (k_sum + tail_w * z0_sum)
            }
        });
        Ok(val)
    }

    /// The boundary term of the unconditional derivative displays:
    /// minus the integral of f_Y(u + c v) (v or 1) f_T1(v) dv. The printed
    /// displays carry the factor v for both derivatives; for d/du the factor
    /// 1 is what differentiating the immediate-crossing term actually gives.
    /// Both are exposed; the finite-difference tests adjudicate.
    pub fn boundary_term(&self, v_weighted: bool) -> Result<f64> {
        let (u, c) = (self.u, self.c);
        let y = self.model.dist_y;
        let t1 = self.model.dist_t1;
        let quad = QuadratureConfig { max_subdivisions: 400, ..Default::default() };
        let r = integrate(
            |v| {
                let weight = if v_weighted { v } else { 1.0 };
                y.pdf_unchecked((u + c * v).max(1e-300)) * weight * t1.pdf_unchecked(v.max(1e-300))
            },
            0.0,
            self.t,
            &quad,
        )?;
        Ok(-r.value)
    }

    /// d/dc P{T <= t}, boundary term plus the first-spacing mixture of the
    /// conditional derivative, reduced to z-grid integrals.
    pub fn dc_unconditional(&self) -> Result<f64> {
        let mixture = self.deriv_mixture(true);
        Ok(self.boundary_term(true)? + mixture)
    }

    /// d/du P{T <= t} as printed (v-weighted boundary term); see
    /// [`boundary_term`](Self::boundary_term) for the caveat.
    pub fn du_unconditional_printed(&self) -> Result<f64> {
        let mixture = self.deriv_mixture(false);
        Ok(self.boundary_term(true)? + mixture)
    }

    /// d/du P{T <= t} with the boundary term that matches finite differences.
    pub fn du_unconditional(&self) -> Result<f64> {
        let mixture = self.deriv_mixture(false);
        Ok(self.boundary_term(false)? + mixture)
    }

    fn deriv_mixture(&self, wrt_c: bool) -> f64 {
        let (u, c) = (self.u, self.c);
        let h = self.h;
        let tail_y = self.model.dist_y;
        let mut acc = 0.0;
        for j in 0..=self.t_points {
            let wgt = if j == 0 || j == self.t_points { 0.5 } else { 1.0 };
            let z = j as f64 * h;
            let wz = u + c * z;
            let mut m_sum = 0.0;
            let mut k_sum = 0.0;
            let mut z0_sum = 0.0;
            for n in 1..=self.orders() {
                m_sum += self.mass_at(n, wz) * self.gy[n - 1][j];
                let gnj = self.g[n - 1][j];
                k_sum += self.kmass_at(n, wz) * gnj;
                z0_sum += self.y_at_zero[n - 1] * gnj;
            }
            let tail_w = tail_y.tail(wz);
            let val = if wrt_c {
                -u / (wz * wz) * m_sum + z / wz * (k_sum + tail_w * z0_sum)
            } else {
                c / (wz * wz) * m_sum + (k_sum + tail_w * z0_sum) / wz
            };
            acc += wgt * val;
        }
        h * acc
    }
}

/// Series order covering the renewal count at level x up to tail mass eps.
fn series_order(x: f64, ey: f64, dy: f64, eps: f64) -> usize {
    let z = crate::special::normal_quantile(eps.clamp(1e-300, 0.49)).unwrap_or(8.0);
    let mean = x / ey;
    let sd = (x * dy / ey.powi(3)).max(0.0).sqrt();
    ((mean + z * sd).ceil() as usize).max(3)
}

/// One-shot wrappers building a fresh evaluator per call. Sweeps should hold
/// a [`KendallEvaluator`] instead.
pub fn kendall_conditional(
    model: &RenewalModel,
    u: f64,
    c: f64,
    t: f64,
    v: f64,
    cfg: &GridConfig,
) -> Result<f64> {
    KendallEvaluator::new(model, u, c, t, cfg)?.conditional(v)
}

pub fn kendall_unconditional(
    model: &RenewalModel,
    u: f64,
    c: f64,
    t: f64,
    cfg: &GridConfig,
) -> Result<f64> {
    KendallEvaluator::new(model, u, c, t, cfg)?.unconditional()
}

pub fn kendall_exp_y(model: &RenewalModel, u: f64, c: f64, t: f64, cfg: &GridConfig) -> Result<f64> {
    KendallEvaluator::new(model, u, c, t, cfg)?.exp_y()
}

pub fn kendall_dc(model: &RenewalModel, u: f64, c: f64, t: f64, v: f64, cfg: &GridConfig) -> Result<f64> {
    KendallEvaluator::new(model, u, c, t, cfg)?.dc_conditional(v)
}

pub fn kendall_du(model: &RenewalModel, u: f64, c: f64, t: f64, v: f64, cfg: &GridConfig) -> Result<f64> {
    KendallEvaluator::new(model, u, c, t, cfg)?.du_conditional(v)
}
