//! Evaluation grids named by short specs:
//! `ray:AXIS:COUNT:RMAX`, `polar:NR:NA:RMAX` and `cube:M:HALF`.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::error::{invalid, HyperError, Result};
use crate::geometry::BallPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// `count` equispaced points on `[0, rmax] e_axis` (one-based axis).
    Ray { axis: usize, count: usize, rmax: f64 },
    /// Radii `rmax k / nr` (`k = 1..nr`) times angles `2 pi j / na` in the `x1 x2` plane.
    Polar { nr: usize, na: usize, rmax: f64 },
    /// `m^n` points of the cube `[-half, half]^n`.
    Cube { m: usize, half: f64 },
}

fn field<T: FromStr>(parts: &[&str], i: usize, spec: &str) -> Result<T> {
    parts
        .get(i)
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| invalid(format!("malformed grid spec `{spec}`")))
}

impl FromStr for GridSpec {
    type Err = HyperError;

    fn from_str(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let grid = match (parts[0], parts.len()) {
            ("ray", 4) => GridSpec::Ray {
                axis: field(&parts, 1, spec)?,
                count: field(&parts, 2, spec)?,
                rmax: field(&parts, 3, spec)?,
            },
            ("polar", 4) => GridSpec::Polar {
                nr: field(&parts, 1, spec)?,
                na: field(&parts, 2, spec)?,
                rmax: field(&parts, 3, spec)?,
            },
            ("cube", 3) => GridSpec::Cube { m: field(&parts, 1, spec)?, half: field(&parts, 2, spec)? },
            _ => return Err(invalid(format!("unknown grid spec `{spec}`"))),
        };
        Ok(grid)
    }
}

impl GridSpec {
    /// Number of points, for dimension `n`.
    pub fn len(&self, n: usize) -> usize {
        match *self {
            GridSpec::Ray { count, .. } => count,
            GridSpec::Polar { nr, na, .. } => nr * na,
            GridSpec::Cube { m, .. } => m.pow(n as u32),
        }
    }

    /// Points in a fixed order; every point must satisfy `|x| <= rlimit`.
    pub fn points(&self, n: usize, rlimit: f64) -> Result<Vec<BallPoint>> {
        let too_far = |r: f64| invalid(format!("grid reaches |x| = {r}, beyond {rlimit}"));
        let pts: Vec<Vec<f64>> = match *self {
            GridSpec::Ray { axis, count, rmax } => {
                if axis == 0 || axis > n {
                    return Err(invalid(format!("ray axis {axis} outside 1..={n}")));
                }
                if count == 0 || !(rmax >= 0.0) {
                    return Err(invalid("ray needs count >= 1 and rmax >= 0"));
                }
                if rmax > rlimit {
                    return Err(too_far(rmax));
                }
                (0..count)
                    .map(|j| {
                        let mut x = vec![0.0; n];
                        x[axis - 1] = if count == 1 { 0.0 } else { rmax * j as f64 / (count - 1) as f64 };
                        x
                    })
                    .collect()
            }
            GridSpec::Polar { nr, na, rmax } => {
                if n < 2 || nr == 0 || na == 0 || !(rmax > 0.0) {
                    return Err(invalid("polar grid needs n >= 2, nr, na >= 1 and rmax > 0"));
                }
                if rmax > rlimit {
                    return Err(too_far(rmax));
                }
                let mut out = Vec::with_capacity(nr * na);
                for i in 1..=nr {
                    let r = rmax * i as f64 / nr as f64;
                    for j in 0..na {
                        let t = 2.0 * PI * j as f64 / na as f64;
                        let mut x = vec![0.0; n];
                        x[0] = r * t.cos();
                        x[1] = r * t.sin();
                        out.push(x);
                    }
                }
                out
            }
            GridSpec::Cube { m, half } => {
                if m == 0 || !(half >= 0.0) {
                    return Err(invalid("cube needs m >= 1 and half >= 0"));
                }
                let corner = half * (n as f64).sqrt();
                if corner > rlimit {
                    return Err(too_far(corner));
                }
                let coord = |k: usize| if m == 1 { 0.0 } else { -half + 2.0 * half * k as f64 / (m - 1) as f64 };
                let total = m.pow(n as u32);
                (0..total)
                    .map(|mut idx| {
                        let mut x = vec![0.0; n];
                        for c in x.iter_mut().rev() {
                            *c = coord(idx % m);
                            idx /= m;
                        }
                        x
                    })
                    .collect()
            }
        };
        pts.into_iter().map(BallPoint::new).collect()
    }
}
