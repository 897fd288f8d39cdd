//! Adaptive Simpson quadrature.
//!
//! The interval is first cut into a fixed number of panels so that
//! oscillatory integrands cannot fool the initial error estimate, then each
//! panel is refined independently until the Richardson error estimate drops
//! below its share of the tolerance. Integrands may be vector valued
//! (`[f64; N]`), which lets related moments share abscissae.

use crate::error::{Error, Result};

/// Relative tolerance shared by every integral in the crate.
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Hard cap on the number of interval subdivisions per call.
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 1_000_000;

const INITIAL_PANELS: usize = 64;
const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
        }
    }
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    fa: [f64; N],
    fm: [f64; N],
    fb: [f64; N],
    whole: [f64; N],
    eps: f64,
    depth: u32,
}

fn simpson<const N: usize>(h: f64, fa: &[f64; N], fm: &[f64; N], fb: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|k| h / 6.0 * (fa[k] + 4.0 * fm[k] + fb[k]))
}

fn max_abs<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

impl Quadrature {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrates a scalar function over `[a, b]` (`a > b` flips the sign).
    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_vec(|x| [f(x)], a, b).map(|[v]| v)
    }

    /// Integrates every component of `f` over `[a, b]` on a shared mesh.
    pub fn integrate_vec<const N: usize, F>(&self, f: F, a: f64, b: f64) -> Result<[f64; N]>
    where
        F: Fn(f64) -> [f64; N],
    {
        if a == b {
            return Ok([0.0; N]);
        }
        if b < a {
            return self.integrate_vec(f, b, a).map(|v| v.map(|x| -x));
        }

        // Coarse pass: fixes the absolute tolerance scale from the magnitude
        // of the integrand rather than its (possibly cancelling) integral.
        let h = (b - a) / INITIAL_PANELS as f64;
        let nodes: Vec<[f64; N]> = (0..=2 * INITIAL_PANELS)
            .map(|i| {
                let x = if i == 2 * INITIAL_PANELS {
                    b
                } else {
                    a + 0.5 * h * i as f64
                };
                f(x)
            })
            .collect();
        let mut scale = 0.0;
        for p in 0..INITIAL_PANELS {
            let abs_s: [f64; N] = std::array::from_fn(|k| {
                h / 6.0
                    * (nodes[2 * p][k].abs()
                        + 4.0 * nodes[2 * p + 1][k].abs()
                        + nodes[2 * p + 2][k].abs())
            });
            scale += max_abs(&abs_s);
        }
        let eps_total = (self.rel_tol * scale).max(f64::MIN_POSITIVE);

        let mut stack: Vec<Segment<N>> = (0..INITIAL_PANELS)
            .map(|p| {
                let pa = a + h * p as f64;
                let pb = if p + 1 == INITIAL_PANELS { b } else { pa + h };
                let (fa, fm, fb) = (nodes[2 * p], nodes[2 * p + 1], nodes[2 * p + 2]);
                Segment {
                    a: pa,
                    b: pb,
                    fa,
                    fm,
                    fb,
                    whole: simpson(pb - pa, &fa, &fm, &fb),
                    eps: eps_total / INITIAL_PANELS as f64,
                    depth: 0,
                }
            })
            .collect();

        let mut total = [0.0; N];
        let mut subdivisions = 0usize;
        while let Some(seg) = stack.pop() {
            let m = 0.5 * (seg.a + seg.b);
            let (lm, rm) = (0.5 * (seg.a + m), 0.5 * (m + seg.b));
            let (flm, frm) = (f(lm), f(rm));
            let left = simpson(m - seg.a, &seg.fa, &flm, &seg.fm);
            let right = simpson(seg.b - m, &seg.fm, &frm, &seg.fb);
            let diff: [f64; N] = std::array::from_fn(|k| left[k] + right[k] - seg.whole[k]);
            let err = max_abs(&diff);

            if err <= 15.0 * seg.eps || seg.depth >= MAX_DEPTH || m <= seg.a || m >= seg.b {
                for k in 0..N {
                    total[k] += left[k] + right[k] + diff[k] / 15.0;
                }
                continue;
            }
            subdivisions += 1;
            if subdivisions > self.max_subdivisions {
                return Err(Error::QuadratureCap(self.max_subdivisions));
            }
            stack.push(Segment {
                a: seg.a,
                b: m,
                fa: seg.fa,
                fm: flm,
                fb: seg.fm,
                whole: left,
                eps: 0.5 * seg.eps,
                depth: seg.depth + 1,
            });
            stack.push(Segment {
                a: m,
                b: seg.b,
                fa: seg.fm,
                fm: frm,
                fb: seg.fb,
                whole: right,
                eps: 0.5 * seg.eps,
                depth: seg.depth + 1,
            });
        }
        Ok(total)
    }
}

/// Adaptive Simpson at the crate-wide default tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    Quadrature::default().integrate(f, a, b)
}
