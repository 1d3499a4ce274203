//! Zero location by recursive subdivision of a disc.
//!
//! Cells are generalized polar rectangles around an off-origin center `c`:
//! P(s, θ) = c + s·L(θ)·e^{iθ}, where L(θ) is the distance from c to the
//! circle |z| = R in direction θ. Every cell boundary stays inside the
//! closed disc, so the truncated series is never evaluated past its radius.
//! Cells are pruned by the winding number of f along their boundary.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use super::winding::{arg_change, circle_winding, eval_with_floor, whole_turns, ArgFailure};
use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::tolerance::ZERO_COEFF;

const MAX_DEPTH: usize = 60;
const MAX_MULTIPLICITY: i64 = 12;
const SPLIT_FRACTIONS: [f64; 5] = [0.5, 0.4371, 0.5629, 0.3817, 0.6183];

/// Zeros of f in |z| < `search_radius`, with multiplicities, sorted by real
/// then imaginary part.
pub fn locate_zeros(f: &TaylorSeries, search_radius: f64) -> Result<Vec<(Complex64, usize)>> {
    if !(search_radius > 0.0) || search_radius > f.radius() {
        return Err(Error::InvalidRadius(search_radius));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero series has no isolated zeros".into()));
    }
    let (total, min_modulus) = circle_winding(f, search_radius)?;
    if min_modulus <= 1e-8 * f.derivative_bound(search_radius) {
        return Err(Error::ZeroOnBoundary(search_radius));
    }
    if total == 0 {
        return Ok(Vec::new());
    }

    // A zero of exact order k at the origin is split off before the search.
    let negligible = ZERO_COEFF * f.majorant(search_radius);
    let origin = f.coeffs().iter().take_while(|c| c.norm() <= negligible).count();
    let mut found: Vec<(Complex64, usize)> = Vec::new();
    if origin > 0 {
        found.push((Complex64::new(0.0, 0.0), origin));
    }
    let reduced = f.shift_down(origin);
    let f = &reduced;
    if total == origin as i64 {
        return Ok(found);
    }

    let grid = PolarGrid::new(f, search_radius);
    let mut stack: Vec<(Cell, i64)> = Vec::new();
    for k in 0..4 {
        let theta0 = 0.1234 + k as f64 * FRAC_PI_2;
        let cell = Cell {
            s0: 0.0,
            s1: 1.0,
            theta0,
            theta1: theta0 + FRAC_PI_2,
            depth: 0,
        };
        let w = grid
            .winding(&cell)
            .map_err(|_| Error::ZeroOnBoundary(search_radius))?;
        if w > 0 {
            stack.push((cell, w));
        }
    }

    while let Some((cell, w)) = stack.pop() {
        if w == 1 {
            if let Some(z) = grid.newton(cell.center(&grid), 1.0) {
                if grid.contains(&cell, z) {
                    found.push((z, 1));
                    continue;
                }
            }
        } else if cell.diameter(&grid) < 1e-9 * search_radius.max(1e-3) {
            found.push((grid.cluster_point(&cell, w)?, w as usize));
            continue;
        }
        if cell.depth >= MAX_DEPTH {
            if w >= 2 {
                found.push((grid.cluster_point(&cell, w)?, w as usize));
                continue;
            }
            return Err(Error::NoConvergence(MAX_DEPTH));
        }
        match grid.split(&cell, w) {
            Some(children) => stack.extend(children.into_iter().filter(|(_, cw)| *cw > 0)),
            // Every split line passes through the noise region of a cluster.
            None if w >= 2 => found.push((grid.cluster_point(&cell, w)?, w as usize)),
            None => return Err(Error::NoConvergence(cell.depth)),
        }
    }

    let counted: usize = found.iter().map(|(_, m)| m).sum();
    if counted as i64 != total {
        return Err(Error::NoConvergence(MAX_DEPTH));
    }
    found.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then_with(|| a.0.im.total_cmp(&b.0.im))
    });
    Ok(found)
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    s0: f64,
    s1: f64,
    theta0: f64,
    theta1: f64,
    depth: usize,
}

impl Cell {
    fn center(&self, grid: &PolarGrid) -> Complex64 {
        grid.point(0.5 * (self.s0 + self.s1), 0.5 * (self.theta0 + self.theta1))
    }

    fn diameter(&self, grid: &PolarGrid) -> f64 {
        let corners = [
            grid.point(self.s0, self.theta0),
            grid.point(self.s0, self.theta1),
            grid.point(self.s1, self.theta0),
            grid.point(self.s1, self.theta1),
        ];
        let mut d: f64 = 0.0;
        for a in &corners {
            for b in &corners {
                d = d.max((a - b).norm());
            }
        }
        // Wide outer arcs bulge beyond their chord.
        d.max(self.s1 * grid.radius * 2.0 * (self.theta1 - self.theta0).min(1.0))
    }
}

struct PolarGrid<'a> {
    f: &'a TaylorSeries,
    df: TaylorSeries,
    center: Complex64,
    radius: f64,
    samples_per_turn: usize,
    /// Moduli below this are treated as zero on cell boundaries, so cells
    /// touching a cluster fail to split and are accepted as a cluster.
    noise_floor: f64,
}

impl<'a> PolarGrid<'a> {
    fn new(f: &'a TaylorSeries, radius: f64) -> Self {
        PolarGrid {
            f,
            df: f.derivative(),
            center: Complex64::from_polar(1e-3 * radius, 0.754_877_666_2),
            radius,
            samples_per_turn: (8 * (f.degree() + 1)).max(64),
            noise_floor: 1e-13 * f.majorant(radius),
        }
    }

    fn reach(&self, theta: f64) -> f64 {
        let u = Complex64::from_polar(1.0, theta);
        let b = (self.center.conj() * u).re;
        -b + (b * b + self.radius * self.radius - self.center.norm_sqr()).sqrt()
    }

    fn point(&self, s: f64, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(s * self.reach(theta), theta)
    }

    fn contains(&self, cell: &Cell, z: Complex64) -> bool {
        let v = z - self.center;
        let slack = 1e-12;
        let mut theta = v.arg();
        while theta < cell.theta0 - slack {
            theta += TAU;
        }
        while theta > cell.theta0 + TAU {
            theta -= TAU;
        }
        let s = v.norm() / self.reach(theta);
        theta <= cell.theta1 + slack && s >= cell.s0 - slack && s <= cell.s1 + slack
    }

    fn samples(&self, length: f64) -> usize {
        ((length / (TAU * self.radius)) * self.samples_per_turn as f64)
            .ceil()
            .max(8.0) as usize
    }

    fn winding(&self, cell: &Cell) -> std::result::Result<i64, ArgFailure> {
        let eval = |z: Complex64| {
            let (value, floor) = eval_with_floor(self.f, z);
            (value, floor.max(self.noise_floor))
        };
        let (s0, s1, t0, t1) = (cell.s0, cell.s1, cell.theta0, cell.theta1);
        let arc = |s: f64| s * self.radius * (t1 - t0) * 1.2;
        let radial = (s1 - s0) * self.radius * 2.0;

        let mut total = arg_change(
            &|t: f64| eval(self.point(s1, t0 + t * (t1 - t0))),
            self.samples(arc(s1)),
        )?
        .0;
        total += arg_change(
            &|t: f64| eval(self.point(s1 + t * (s0 - s1), t1)),
            self.samples(radial),
        )?
        .0;
        if s0 > 0.0 {
            total += arg_change(
                &|t: f64| eval(self.point(s0, t1 + t * (t0 - t1))),
                self.samples(arc(s0)),
            )?
            .0;
        }
        total += arg_change(
            &|t: f64| eval(self.point(s0 + t * (s1 - s0), t0)),
            self.samples(radial),
        )?
        .0;
        whole_turns(total)
    }

    /// Splits the longer side; tries several split positions when a child
    /// boundary passes through a zero.
    fn split(&self, cell: &Cell, w: i64) -> Option<Vec<(Cell, i64)>> {
        let mid_s = 0.5 * (cell.s0 + cell.s1);
        let arc_len = mid_s * self.radius * (cell.theta1 - cell.theta0);
        let radial_len = (cell.s1 - cell.s0) * self.radius;
        for fraction in SPLIT_FRACTIONS {
            let (a, b) = if arc_len > radial_len {
                let t = cell.theta0 + fraction * (cell.theta1 - cell.theta0);
                (
                    Cell {
                        theta1: t,
                        depth: cell.depth + 1,
                        ..*cell
                    },
                    Cell {
                        theta0: t,
                        depth: cell.depth + 1,
                        ..*cell
                    },
                )
            } else {
                let s = cell.s0 + fraction * (cell.s1 - cell.s0);
                (
                    Cell {
                        s1: s,
                        depth: cell.depth + 1,
                        ..*cell
                    },
                    Cell {
                        s0: s,
                        depth: cell.depth + 1,
                        ..*cell
                    },
                )
            };
            if let (Ok(wa), Ok(wb)) = (self.winding(&a), self.winding(&b)) {
                if wa + wb == w && wa >= 0 && wb >= 0 {
                    return Some(vec![(a, wa), (b, wb)]);
                }
            }
        }
        None
    }

    /// Newton's method z ← z − k f/f′ (k = multiplicity).
    fn newton(&self, mut z: Complex64, multiplicity: f64) -> Option<Complex64> {
        for _ in 0..100 {
            let fz = self.f.horner(z);
            let dz = self.df.horner(z);
            if dz.norm() == 0.0 {
                return None;
            }
            let step = fz / dz * multiplicity;
            z -= step;
            if !z.re.is_finite() || !z.im.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * z.norm().max(1.0) {
                return Some(z);
            }
        }
        None
    }

    fn cluster_point(&self, cell: &Cell, w: i64) -> Result<Complex64> {
        if w > MAX_MULTIPLICITY {
            return Err(Error::MultiplicityCap(w));
        }
        let start = cell.center(self);
        Ok(self
            .newton(start, w as f64)
            .filter(|z| (z - start).norm() <= cell.diameter(self))
            .unwrap_or(start))
    }
}
