//! The preconditioned multipole system `(I + A) Φ = G`.
//!
//! Densities on `Γ_p` are expanded in `b_m^p(x) = e^{imθ_p(x)} / √(2π a_p)`.
//! Closed forms (with `θ_pq` the polar angle of `O_q − O_p`):
//!
//! - `V^pp_mm = (iπa_p/2) J_m(ka_p) H_m(ka_p)`, zero off the diagonal
//! - `V^pq_mn = (iπ√(a_p a_q)/2) J_m(ka_p) H_{m−n}(kd_pq) e^{−i(m−n)θ_pq} J_n(ka_q)`
//! - `B^pp = (V^pp)^{-1}`, `A^pq = B^pp V^pq`, `g^p = B^pp f^p`
//! - `f_m^p = −⟨u^inc, b_m^p⟩_{Γ_p}`
//!
//! Each of them is checked against direct quadrature of the single-layer
//! pairing ([`single_layer_pairing_quadrature`], [`incident_trace_quadrature`]).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

use crate::coeffs::CoefficientVector;
use crate::scene::{IncidentField, PairGeometry, Point, Scene};
use crate::specfun::{self, signed_order, Scaled};
use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// `|J_m(ka)| / |H_m(ka)|` below this, for `m < ka`, makes the
/// preconditioner a hard error.
pub const PRECONDITIONER_FLOOR: f64 = 1e-13;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn ka(scene: &Scene, p: usize) -> f64 {
    scene.wavenumber * scene.cylinders[p].radius
}

fn phase(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

fn modes(n: usize) -> impl Iterator<Item = i32> + Clone {
    let n = n as i32;
    -n..=n
}

/// `J_0..=J_N` and `H_0..=H_N` at `ka_p`, after the eigenvalue check.
struct CylinderFns {
    j: Vec<Scaled>,
    h: Vec<Scaled>,
}

impl CylinderFns {
    fn new(scene: &Scene, p: usize, n: usize) -> Result<Self> {
        let x = ka(scene, p);
        let h = specfun::hankel1_seq_scaled(n, x)?;
        // not h.re(): the shared exponent of H_m flushes a tiny J_m to zero
        let j = specfun::bessel_j_seq_scaled(n, x)?;
        for (m, (jm, hm)) in j.iter().zip(&h).enumerate() {
            let near_zero = (m as f64) < x && jm.abs_ratio(hm) < PRECONDITIONER_FLOOR;
            if jm.is_zero() || near_zero {
                return Err(Error::SingularPreconditioner {
                    cylinder: p,
                    mode: m as i32,
                });
            }
        }
        Ok(CylinderFns { j, h })
    }

    fn j(&self, m: i32) -> Scaled {
        signed_order(&self.j, m)
    }

    fn h(&self, m: i32) -> Scaled {
        signed_order(&self.h, m)
    }
}

fn check_pair(scene: &Scene, p: usize, q: usize) -> Result<()> {
    let m = scene.len();
    if p >= m || q >= m {
        return Err(Error::DimensionMismatch(format!(
            "cylinder index ({p}, {q}) with M = {m}"
        )));
    }
    Ok(())
}

/// Raw single-layer block `V^pq` on modes `[-N, N]`.
pub fn v_block(
    scene: &Scene,
    geom: &PairGeometry,
    p: usize,
    q: usize,
    n: usize,
) -> Result<CMatrix> {
    check_pair(scene, p, q)?;
    let w = 2 * n + 1;
    let mut out = CMatrix::zeros(w, w);
    let fp = CylinderFns::new(scene, p, n)?;
    let ap = scene.cylinders[p].radius;
    if p == q {
        let c = I * (PI * ap / 2.0);
        for (i, m) in modes(n).enumerate() {
            out[(i, i)] = (fp.j(m) * fp.h(m)).to_c64()? * c;
        }
        return Ok(out);
    }
    let fq = CylinderFns::new(scene, q, n)?;
    let aq = scene.cylinders[q].radius;
    let hd = specfun::hankel1_seq_scaled(2 * n, scene.wavenumber * geom.distance(p, q))?;
    let theta = -geom.angle(p, q);
    let c = I * (PI * (ap * aq).sqrt() / 2.0);
    for (i, m) in modes(n).enumerate() {
        for (l, nn) in modes(n).enumerate() {
            let v = fp.j(m) * signed_order(&hd, m - nn) * fq.j(nn);
            out[(i, l)] = v.to_c64()? * phase(f64::from(m - nn) * theta) * c;
        }
    }
    Ok(out)
}

/// Diagonal of `B^pp = (V^pp)^{-1}`.
pub fn precond_diag(scene: &Scene, p: usize, n: usize) -> Result<Vec<Complex64>> {
    check_pair(scene, p, p)?;
    let fp = CylinderFns::new(scene, p, n)?;
    let c = I * (PI * scene.cylinders[p].radius / 2.0);
    modes(n)
        .map(|m| (fp.j(m) * fp.h(m) * c).recip().to_c64())
        .collect()
}

/// Preconditioned coupling block `A^pq = B^pp V^pq` (zero for `p = q`).
pub fn a_block(
    scene: &Scene,
    geom: &PairGeometry,
    p: usize,
    q: usize,
    n: usize,
) -> Result<CMatrix> {
    check_pair(scene, p, q)?;
    let w = 2 * n + 1;
    let mut out = CMatrix::zeros(w, w);
    let fp = CylinderFns::new(scene, p, n)?;
    if p == q {
        return Ok(out);
    }
    let fq = CylinderFns::new(scene, q, n)?;
    let (ap, aq) = (scene.cylinders[p].radius, scene.cylinders[q].radius);
    let hd = specfun::hankel1_seq_scaled(2 * n, scene.wavenumber * geom.distance(p, q))?;
    let theta = -geom.angle(p, q);
    let c = (aq / ap).sqrt();
    for (i, m) in modes(n).enumerate() {
        let inv_h = fp.h(m).recip();
        for (l, nn) in modes(n).enumerate() {
            let v = signed_order(&hd, m - nn) * fq.j(nn) * inv_h;
            out[(i, l)] = v.to_c64()? * phase(f64::from(m - nn) * theta) * c;
        }
    }
    Ok(out)
}

/// Incident trace coefficients `f_m^p = −⟨u^inc, b_m^p⟩`.
pub fn incident_coeffs(
    scene: &Scene,
    geom: &PairGeometry,
    p: usize,
    n: usize,
) -> Result<Vec<Complex64>> {
    check_pair(scene, p, p)?;
    let x = ka(scene, p);
    let a = scene.cylinders[p].radius;
    let k = scene.wavenumber;
    let j = specfun::bessel_j_seq_scaled(n, x)?;
    match scene.incident {
        IncidentField::PlaneWave { angle } => {
            let o = scene.cylinders[p].center;
            let c = phase(k * (angle.cos() * o.0 + angle.sin() * o.1)) * -(2.0 * PI * a).sqrt();
            modes(n)
                .map(|m| {
                    (signed_order(&j, m) * (c * phase(f64::from(m) * (PI / 2.0 - angle)))).to_c64()
                })
                .collect()
        }
        IncidentField::PointSource { .. } => {
            let d0 = geom.source_distance(p).expect("point-source geometry");
            let t0 = geom.source_angle(p).expect("point-source geometry");
            let hs = specfun::hankel1_seq_scaled(n, k * d0)?;
            let c = -I * (PI * a / 2.0) / (2.0 * PI * a).sqrt();
            modes(n)
                .map(|m| {
                    let v = signed_order(&j, m) * signed_order(&hs, m);
                    Ok(v.to_c64()? * phase(-f64::from(m) * t0) * c)
                })
                .collect()
        }
    }
}

/// Preconditioned right-hand side `g^p = B^pp f^p`, formed without the
/// cancelling `J_m(ka_p)` factor.
pub fn g_vector(scene: &Scene, geom: &PairGeometry, p: usize, n: usize) -> Result<Vec<Complex64>> {
    check_pair(scene, p, p)?;
    let fp = CylinderFns::new(scene, p, n)?;
    let a = scene.cylinders[p].radius;
    let k = scene.wavenumber;
    match scene.incident {
        IncidentField::PlaneWave { angle } => {
            let o = scene.cylinders[p].center;
            let c = phase(k * (angle.cos() * o.0 + angle.sin() * o.1))
                * (-2.0 * 2f64.sqrt() / (I * (PI * a).sqrt()));
            modes(n)
                .map(|m| {
                    (fp.h(m).recip() * (c * phase(f64::from(m) * (PI / 2.0 - angle)))).to_c64()
                })
                .collect()
        }
        IncidentField::PointSource { .. } => {
            let d0 = geom.source_distance(p).expect("point-source geometry");
            let t0 = geom.source_angle(p).expect("point-source geometry");
            let hs = specfun::hankel1_seq_scaled(n, k * d0)?;
            let c = -1.0 / (2.0 * PI * a).sqrt();
            modes(n)
                .map(|m| {
                    let v = signed_order(&hs, m) / fp.h(m);
                    Ok(v.to_c64()? * phase(-f64::from(m) * t0) * c)
                })
                .collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Quadrature oracles

/// How [`single_layer_pairing_quadrature`] treats `p = q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalRule {
    Refuse,
    /// Periodic log-singular rule on the reduced one-dimensional integral.
    Singular,
}

fn boundary_point(scene: &Scene, p: usize, t: f64) -> Point {
    let c = &scene.cylinders[p];
    Point(
        c.center.0 + c.radius * t.cos(),
        c.center.1 + c.radius * t.sin(),
    )
}

fn check_quad(n_quad: usize) -> Result<()> {
    if n_quad < 64 || !n_quad.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "n_quad must be even and at least 64, got {n_quad}"
        )));
    }
    Ok(())
}

/// Tensor trapezoid approximation of `⟨V b_n^q, b_m^p⟩` for all
/// `|m|, |n| ≤ N` (`p ≠ q`), or the singular rule on the diagonal (`p = q`).
pub fn pairing_quadrature_block(
    scene: &Scene,
    p: usize,
    q: usize,
    n: usize,
    n_quad: usize,
) -> Result<CMatrix> {
    check_pair(scene, p, q)?;
    check_quad(n_quad)?;
    let w = 2 * n + 1;
    if p == q {
        let mut out = CMatrix::zeros(w, w);
        for (i, m) in modes(n).enumerate() {
            out[(i, i)] = diagonal_quadrature(scene, p, m, n_quad)?;
        }
        return Ok(out);
    }
    let k = scene.wavenumber;
    let h = 2.0 * PI / n_quad as f64;
    let roots: Vec<Complex64> = (0..n_quad).map(|j| phase(j as f64 * h)).collect();
    let root =
        |m: i32, j: usize| roots[(i64::from(m) * j as i64).rem_euclid(n_quad as i64) as usize];
    let xs: Vec<Point> = (0..n_quad)
        .map(|i| boundary_point(scene, p, i as f64 * h))
        .collect();
    let ys: Vec<Point> = (0..n_quad)
        .map(|j| boundary_point(scene, q, j as f64 * h))
        .collect();

    // rows[i][l] = Σ_j G(x_i - y_j) e^{i n_l ψ_j}
    let rows: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            let kernel: Vec<Complex64> = ys
                .iter()
                .map(|&y| specfun::green(k, x.dist(y)))
                .collect::<Result<_>>()?;
            Ok(modes(n)
                .map(|nn| {
                    kernel
                        .iter()
                        .enumerate()
                        .map(|(j, g)| g * root(nn, j))
                        .sum()
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let (ap, aq) = (scene.cylinders[p].radius, scene.cylinders[q].radius);
    let c = (ap * aq).sqrt() / (2.0 * PI) * h * h;
    let mut out = CMatrix::zeros(w, w);
    for (a, m) in modes(n).enumerate() {
        for b in 0..w {
            let s: Complex64 = rows
                .iter()
                .enumerate()
                .map(|(i, row)| row[b] * root(-m, i))
                .sum();
            out[(a, b)] = s * c;
        }
    }
    Ok(out)
}

/// Single entry of the pairing quadrature; `p = q` requires
/// [`DiagonalRule::Singular`]. On the diagonal block the kernel depends on
/// `θ − ψ` only, so entries with `m ≠ n` vanish identically.
pub fn single_layer_pairing_quadrature(
    scene: &Scene,
    p: usize,
    q: usize,
    m: i32,
    n: i32,
    n_quad: usize,
    rule: DiagonalRule,
) -> Result<Complex64> {
    check_pair(scene, p, q)?;
    check_quad(n_quad)?;
    if p == q {
        if rule == DiagonalRule::Refuse {
            return Err(Error::Domain(
                "diagonal pairing needs the singular quadrature rule".into(),
            ));
        }
        return if m == n {
            diagonal_quadrature(scene, p, m, n_quad)
        } else {
            Ok(Complex64::new(0.0, 0.0))
        };
    }
    let k = scene.wavenumber;
    let h = 2.0 * PI / n_quad as f64;
    let ys: Vec<Point> = (0..n_quad)
        .map(|j| boundary_point(scene, q, j as f64 * h))
        .collect();
    let total: Complex64 = (0..n_quad)
        .into_par_iter()
        .map(|i| {
            let x = boundary_point(scene, p, i as f64 * h);
            let mut inner = Complex64::new(0.0, 0.0);
            for (j, &y) in ys.iter().enumerate() {
                inner += specfun::green(k, x.dist(y))? * phase(f64::from(n) * j as f64 * h);
            }
            Ok(inner * phase(-f64::from(m) * i as f64 * h))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let (ap, aq) = (scene.cylinders[p].radius, scene.cylinders[q].radius);
    Ok(total * ((ap * aq).sqrt() / (2.0 * PI) * h * h))
}

/// `V^pp_mm = a ∫_0^{2π} (i/4) H_0(2ka |sin(t/2)|) e^{−imt} dt`, with the
/// logarithmic part of `H_0` integrated by the periodic log rule
/// `∫ ln(4 sin²(t/2)) e^{ilt} dt = −2π/|l|`.
fn diagonal_quadrature(scene: &Scene, p: usize, m: i32, n_quad: usize) -> Result<Complex64> {
    let a = scene.cylinders[p].radius;
    let x = scene.wavenumber * a;
    let half = n_quad / 2;
    let h = PI / half as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n_quad {
        let t = j as f64 * h;
        let weight_log = -(2.0 * PI / half as f64)
            * (1..half)
                .map(|l| (l as f64 * t).cos() / l as f64)
                .sum::<f64>()
            - PI / (half * half) as f64 * (half as f64 * t).cos();
        let (k1, k2) = if j == 0 {
            let gamma = 0.577_215_664_901_532_9;
            (
                -1.0 / (4.0 * PI) * Complex64::new(1.0, 0.0),
                I * 0.25 - ((x / 2.0).ln() + gamma) / (2.0 * PI),
            )
        } else {
            let s = (t / 2.0).sin();
            let (j0, y0) = specfun::j0_y0(2.0 * x * s.abs())?;
            let kernel = I * 0.25 * Complex64::new(j0, y0);
            let k1 = Complex64::new(-j0 / (4.0 * PI), 0.0);
            (k1, kernel - k1 * (4.0 * s * s).ln())
        };
        total += (k1 * weight_log + k2 * h) * phase(-f64::from(m) * t);
    }
    Ok(total * a)
}

/// Trapezoid approximation of `f_m^p = −∫_{Γ_p} u^inc conj(b_m^p) dσ`.
pub fn incident_trace_quadrature(
    scene: &Scene,
    p: usize,
    m: i32,
    n_quad: usize,
) -> Result<Complex64> {
    check_pair(scene, p, p)?;
    check_quad(n_quad)?;
    let a = scene.cylinders[p].radius;
    let h = 2.0 * PI / n_quad as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n_quad {
        let t = i as f64 * h;
        total += scene.incident_at(boundary_point(scene, p, t))? * phase(-f64::from(m) * t);
    }
    Ok(-total * (a * h / (2.0 * PI * a).sqrt()))
}

// ---------------------------------------------------------------------------
// Block operators

#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Zero,
    Identity,
    Diagonal(Vec<Complex64>),
    Dense(CMatrix),
}

impl Block {
    fn apply_add(&self, x: &[Complex64], y: &mut [Complex64]) {
        match self {
            Block::Zero => {}
            Block::Identity => y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += xi),
            Block::Diagonal(d) => y
                .iter_mut()
                .zip(x)
                .zip(d)
                .for_each(|((yi, xi), di)| *yi += di * xi),
            Block::Dense(a) => {
                for (r, yi) in y.iter_mut().enumerate() {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (c, xi) in x.iter().enumerate() {
                        s += a[(r, c)] * xi;
                    }
                    *yi += s;
                }
            }
        }
    }

    fn to_dense(&self, w: usize) -> CMatrix {
        match self {
            Block::Zero => CMatrix::zeros(w, w),
            Block::Identity => CMatrix::identity(w, w),
            Block::Diagonal(d) => CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)),
            Block::Dense(a) => a.clone(),
        }
    }
}

/// `M × M` array of `(2N+1) × (2N+1)` blocks, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    cylinders: usize,
    truncation: usize,
    blocks: Vec<Block>,
}

impl BlockOperator {
    pub fn new(cylinders: usize, truncation: usize, blocks: Vec<Block>) -> Result<Self> {
        if blocks.len() != cylinders * cylinders {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks for M = {cylinders}",
                blocks.len()
            )));
        }
        let w = 2 * truncation + 1;
        for b in &blocks {
            let ok = match b {
                Block::Diagonal(d) => d.len() == w,
                Block::Dense(a) => a.nrows() == w && a.ncols() == w,
                _ => true,
            };
            if !ok {
                return Err(Error::DimensionMismatch(format!(
                    "block size differs from 2N+1 = {w}"
                )));
            }
        }
        Ok(BlockOperator {
            cylinders,
            truncation,
            blocks,
        })
    }

    pub fn cylinders(&self) -> usize {
        self.cylinders
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dimension(&self) -> usize {
        self.cylinders * (2 * self.truncation + 1)
    }

    pub fn block(&self, p: usize, q: usize) -> &Block {
        &self.blocks[p * self.cylinders + q]
    }

    fn check_vector(&self, x: &CoefficientVector) -> Result<()> {
        if x.cylinders() != self.cylinders || x.truncation() != self.truncation {
            return Err(Error::DimensionMismatch(format!(
                "operator is M={}, N={}; vector is M={}, N={}",
                self.cylinders,
                self.truncation,
                x.cylinders(),
                x.truncation()
            )));
        }
        Ok(())
    }

    fn apply_filtered(
        &self,
        x: &CoefficientVector,
        skip_diagonal: bool,
    ) -> Result<CoefficientVector> {
        self.check_vector(x)?;
        let w = 2 * self.truncation + 1;
        let rows: Vec<Vec<Complex64>> = (0..self.cylinders)
            .into_par_iter()
            .map(|p| {
                let mut y = vec![Complex64::new(0.0, 0.0); w];
                for q in 0..self.cylinders {
                    if !(skip_diagonal && p == q) {
                        self.block(p, q).apply_add(x.block(q), &mut y);
                    }
                }
                y
            })
            .collect();
        CoefficientVector::from_blocks(self.truncation, rows)
    }

    /// Block-wise product; each output block sums over `q` in fixed order.
    pub fn apply(&self, x: &CoefficientVector) -> Result<CoefficientVector> {
        self.apply_filtered(x, false)
    }

    /// Product with the off-diagonal blocks only.
    pub fn apply_off_diagonal(&self, x: &CoefficientVector) -> Result<CoefficientVector> {
        self.apply_filtered(x, true)
    }

    pub fn to_dense(&self) -> CMatrix {
        let w = 2 * self.truncation + 1;
        let mut out = CMatrix::zeros(self.dimension(), self.dimension());
        for p in 0..self.cylinders {
            for q in 0..self.cylinders {
                out.view_mut((p * w, q * w), (w, w))
                    .copy_from(&self.block(p, q).to_dense(w));
            }
        }
        out
    }
}

/// Raw single-layer operator `V` truncated to `[-N, N]`.
pub fn assemble_v(scene: &Scene, n: usize) -> Result<BlockOperator> {
    scene.validate().into_result()?;
    let geom = scene.geometry();
    let m = scene.len();
    let blocks = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (p, q) = (idx / m, idx % m);
            let v = v_block(scene, &geom, p, q, n)?;
            Ok(if p == q {
                Block::Diagonal(v.diagonal().iter().copied().collect())
            } else {
                Block::Dense(v)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BlockOperator::new(m, n, blocks)
}

/// Truncated preconditioned system `W̃ Φ̃ = G̃` with `W̃ = I + Ã`.
#[derive(Debug, Clone)]
pub struct MemSystem {
    pub scene: Scene,
    pub geometry: PairGeometry,
    pub operator: BlockOperator,
    pub rhs: CoefficientVector,
}

impl MemSystem {
    pub fn assemble(scene: &Scene, n: usize) -> Result<MemSystem> {
        scene.validate().into_result()?;
        let geom = scene.geometry();
        let m = scene.len();
        let blocks = (0..m * m)
            .into_par_iter()
            .map(|idx| {
                let (p, q) = (idx / m, idx % m);
                if p == q {
                    precond_diag(scene, p, n).map(|_| Block::Identity)
                } else {
                    a_block(scene, &geom, p, q, n).map(Block::Dense)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let g = (0..m)
            .into_par_iter()
            .map(|p| g_vector(scene, &geom, p, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(MemSystem {
            scene: scene.clone(),
            geometry: geom,
            operator: BlockOperator::new(m, n, blocks)?,
            rhs: CoefficientVector::from_blocks(n, g)?,
        })
    }

    pub fn truncation(&self) -> usize {
        self.operator.truncation()
    }

    pub fn cylinders(&self) -> usize {
        self.operator.cylinders()
    }

    pub fn dimension(&self) -> usize {
        self.operator.dimension()
    }

    /// `Ã x`.
    pub fn apply_coupling(&self, x: &CoefficientVector) -> Result<CoefficientVector> {
        self.operator.apply_off_diagonal(x)
    }

    /// `W̃ x`.
    pub fn apply(&self, x: &CoefficientVector) -> Result<CoefficientVector> {
        self.operator.apply(x)
    }

    /// Writes the dense matrix and right-hand side in the text dump format:
    ///
    /// ```text
    /// M <cylinders>
    /// N <truncation>
    /// k <wavenumber>
    /// matrix <rows> <cols>
    /// <re> <im>        (row-major, one entry per line)
    /// rhs <rows>
    /// <re> <im>
    /// ```
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        let a = self.operator.to_dense();
        writeln!(out, "M {}", self.cylinders())?;
        writeln!(out, "N {}", self.truncation())?;
        writeln!(out, "k {:.16e}", self.scene.wavenumber)?;
        writeln!(out, "matrix {} {}", a.nrows(), a.ncols())?;
        for r in 0..a.nrows() {
            for c in 0..a.ncols() {
                writeln!(out, "{:.16e} {:.16e}", a[(r, c)].re, a[(r, c)].im)?;
            }
        }
        writeln!(out, "rhs {}", self.rhs.len())?;
        for v in self.rhs.as_slice() {
            writeln!(out, "{:.16e} {:.16e}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Contents of a system dump.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDump {
    pub cylinders: usize,
    pub truncation: usize,
    pub wavenumber: f64,
    pub matrix: CMatrix,
    pub rhs: Vec<Complex64>,
}

pub fn read_dump<R: BufRead>(input: R) -> Result<SystemDump> {
    let mut lines = input.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of dump".into()))?
            .map_err(Error::from)
    };
    fn field<T: std::str::FromStr>(line: &str, key: &str) -> Result<Vec<T>> {
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(Error::Parse(format!("expected '{key}' line, got '{line}'")));
        }
        parts
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad value '{s}' in '{line}'")))
            })
            .collect()
    }
    fn entry(line: &str) -> Result<Complex64> {
        let v: Vec<f64> = line
            .split_whitespace()
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad entry '{line}'")))
            })
            .collect::<Result<_>>()?;
        match v[..] {
            [re, im] => Ok(Complex64::new(re, im)),
            _ => Err(Error::Parse(format!("bad entry '{line}'"))),
        }
    }
    let one = |v: Vec<usize>, key: &str| {
        v.first()
            .copied()
            .ok_or_else(|| Error::Parse(format!("missing {key}")))
    };
    let cylinders = one(field(&next()?, "M")?, "M")?;
    let truncation = one(field(&next()?, "N")?, "N")?;
    let wavenumber = *field::<f64>(&next()?, "k")?
        .first()
        .ok_or_else(|| Error::Parse("missing k".into()))?;
    let dims: Vec<usize> = field(&next()?, "matrix")?;
    let (rows, cols) = match dims[..] {
        [r, c] => (r, c),
        _ => return Err(Error::Parse("matrix line needs rows and cols".into())),
    };
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(entry(&next()?)?);
    }
    let matrix = CMatrix::from_row_slice(rows, cols, &data);
    let len = one(field(&next()?, "rhs")?, "rhs")?;
    let rhs = (0..len).map(|_| entry(&next()?)).collect::<Result<_>>()?;
    Ok(SystemDump {
        cylinders,
        truncation,
        wavenumber,
        matrix,
        rhs,
    })
}
