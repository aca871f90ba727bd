use crate::error::{NavError, Result};

/// Discrete belief over planar cells. Cell (ix, iy) covers
/// `[origin + i*res, origin + (i+1)*res)` on each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBelief {
    pub nx: usize,
    pub ny: usize,
    pub resolution: f64,
    pub origin: (f64, f64),
    /// Row-major by y: index = iy * nx + ix.
    pub mass: Vec<f64>,
}

impl HistogramBelief {
    pub fn uniform(nx: usize, ny: usize, resolution: f64, origin: (f64, f64)) -> Result<Self> {
        if nx == 0 || ny == 0 || !(resolution > 0.0) {
            return Err(NavError::invalid(
                "histogram grid needs positive size and resolution",
            ));
        }
        let m = 1.0 / (nx * ny) as f64;
        Ok(HistogramBelief {
            nx,
            ny,
            resolution,
            origin,
            mass: vec![m; nx * ny],
        })
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.mass[iy * self.nx + ix]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            self.origin.0 + (ix as f64 + 0.5) * self.resolution,
            self.origin.1 + (iy as f64 + 0.5) * self.resolution,
        )
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Probability-weighted mean of cell centers.
    pub fn mean(&self) -> (f64, f64) {
        let (mut x, mut y) = (0.0, 0.0);
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let m = self.get(ix, iy);
                if m > 0.0 {
                    let c = self.cell_center(ix, iy);
                    x += m * c.0;
                    y += m * c.1;
                }
            }
        }
        let t = self.total_mass();
        (x / t, y / t)
    }

    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = self
            .mass
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &m)| {
                if m > best.1 {
                    (i, m)
                } else {
                    best
                }
            });
        (i % self.nx, i / self.nx)
    }

    fn normalized(mut self) -> Result<Self> {
        let total = self.total_mass();
        if !(total > 0.0) || !total.is_finite() {
            return Err(NavError::DegenerateBelief);
        }
        for m in &mut self.mass {
            *m /= total;
        }
        Ok(self)
    }
}

/// Discrete Gaussian truncated at +-3 std, normalized; the middle entry is offset 0.
pub(crate) fn gaussian_kernel(std: f64) -> Vec<f64> {
    if std <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * std).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|d| (-0.5 * (d as f64 / std).powi(2)).exp())
        .collect();
    let s: f64 = k.iter().sum();
    for v in &mut k {
        *v /= s;
    }
    k
}

/// Shift by whole cells, blur with a truncated Gaussian, renormalize.
/// Mass pushed off the grid is dropped before renormalization.
pub fn hf_predict(
    h: &HistogramBelief,
    shift: (i64, i64),
    motion_std: f64,
) -> Result<HistogramBelief> {
    if !(motion_std >= 0.0) {
        return Err(NavError::invalid("motion std must be non-negative"));
    }
    let kernel = gaussian_kernel(motion_std);
    let radius = (kernel.len() / 2) as i64;
    if radius as usize >= h.nx.max(h.ny) {
        return Err(NavError::invalid("blur kernel wider than the grid"));
    }
    let (nx, ny) = (h.nx as i64, h.ny as i64);

    let mut shifted = vec![0.0; h.mass.len()];
    for iy in 0..ny {
        for ix in 0..nx {
            let (tx, ty) = (ix + shift.0, iy + shift.1);
            if (0..nx).contains(&tx) && (0..ny).contains(&ty) {
                shifted[(ty * nx + tx) as usize] = h.mass[(iy * nx + ix) as usize];
            }
        }
    }

    // separable blur: along x, then along y
    let mut tmp = vec![0.0; shifted.len()];
    for iy in 0..ny {
        for ix in 0..nx {
            let m = shifted[(iy * nx + ix) as usize];
            if m == 0.0 {
                continue;
            }
            for (k, w) in kernel.iter().enumerate() {
                let tx = ix + k as i64 - radius;
                if (0..nx).contains(&tx) {
                    tmp[(iy * nx + tx) as usize] += m * w;
                }
            }
        }
    }
    let mut out = vec![0.0; shifted.len()];
    for iy in 0..ny {
        for ix in 0..nx {
            let m = tmp[(iy * nx + ix) as usize];
            if m == 0.0 {
                continue;
            }
            for (k, w) in kernel.iter().enumerate() {
                let ty = iy + k as i64 - radius;
                if (0..ny).contains(&ty) {
                    out[(ty * nx + ix) as usize] += m * w;
                }
            }
        }
    }
    HistogramBelief {
        mass: out,
        ..h.clone()
    }
    .normalized()
}

/// Multiplies each cell by the Gaussian likelihood of every measured range
/// (landmark position, measured range), then renormalizes.
pub fn hf_update(
    h: &HistogramBelief,
    z: &[((f64, f64), f64)],
    obs_std: f64,
) -> Result<HistogramBelief> {
    if !(obs_std > 0.0) {
        return Err(NavError::invalid("observation std must be positive"));
    }
    // log-likelihood per cell; shifted by the max over supported cells so
    // sharp measurements do not underflow every cell at once
    let mut log_l = vec![0.0; h.mass.len()];
    for iy in 0..h.ny {
        for ix in 0..h.nx {
            let (cx, cy) = h.cell_center(ix, iy);
            let mut l = 0.0;
            for &((lx, ly), r) in z {
                let d = (lx - cx).hypot(ly - cy);
                let e = (r - d) / obs_std;
                l -= 0.5 * e * e;
            }
            log_l[iy * h.nx + ix] = l;
        }
    }
    let max = log_l
        .iter()
        .zip(&h.mass)
        .filter(|(_, &m)| m > 0.0)
        .map(|(l, _)| *l)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(NavError::DegenerateBelief);
    }
    let mass = h
        .mass
        .iter()
        .zip(&log_l)
        .map(|(m, l)| m * (l - max).exp())
        .collect();
    HistogramBelief { mass, ..h.clone() }.normalized()
}
