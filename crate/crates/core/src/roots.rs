//! Roots with multiplicities of univariate complex polynomials.
//!
//! Aberth–Ehrlich simultaneous iteration at the working precision, greedy
//! clustering, Newton refinement of each cluster on the (m-1)-th derivative,
//! and a derivative test that certifies every multiplicity.

use crate::numeric::{Coeff, Ctx};
use crate::poly::{PuiseuxPoly, Rat};
use crate::polygon::Edge;

/// Sweep cap for the simultaneous iteration.
pub const MAX_SWEEPS: usize = 200;

#[derive(Clone, Debug)]
pub struct RootCluster {
    pub value: Coeff,
    pub multiplicity: u32,
    /// |p(value)| after refinement.
    pub residual: f64,
}

/// A root c·x^r of an edge polynomial.
#[derive(Clone, Debug)]
pub struct EdgeRoot {
    pub c: Coeff,
    pub r: Rat,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("ill-conditioned root problem: {reason} (residual {residual:e})")]
    IllConditioned { reason: String, residual: f64 },
    #[error("polynomial has degree 0 or an ε-zero leading coefficient")]
    Degenerate,
}

/// Horner evaluation of Σ a_i z^i.
pub fn eval(coeffs: &[Coeff], z: &Coeff) -> Coeff {
    let mut acc = coeffs.last().cloned().expect("nonempty coefficients");
    for a in coeffs.iter().rev().skip(1) {
        acc = &(&acc * z) + a;
    }
    acc
}

/// Σ |a_i| |z|^i, the scale against which |p(z)| is judged.
fn eval_abs(coeffs: &[Coeff], z: &Coeff) -> f64 {
    let r = z.abs_f64();
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, a| acc * r + a.abs_f64())
}

pub fn derivative(ctx: &Ctx, coeffs: &[Coeff]) -> Vec<Coeff> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * &ctx.int(i as i64))
        .collect()
}

/// All roots of Σ coeffs[i] z^i, clustered with multiplicities, sorted by
/// (re, im).
pub fn all_roots(ctx: &Ctx, coeffs: &[Coeff]) -> Result<Vec<RootCluster>, RootError> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| ctx.is_zero(c)) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(RootError::Degenerate);
    }
    // roots at zero come straight off the low end
    let zeros = coeffs
        .iter()
        .take_while(|c| c.re.repr().is_zero() && c.im.repr().is_zero())
        .count();
    let core = &coeffs[zeros..];
    let mut clusters = Vec::new();
    if zeros > 0 {
        clusters.push(RootCluster {
            value: ctx.zero(),
            multiplicity: zeros as u32,
            residual: 0.0,
        });
    }
    if core.len() >= 2 {
        let approx = aberth(ctx, core)?;
        clusters.extend(cluster_and_certify(ctx, core, approx)?);
    }
    clusters.sort_by(|a, b| ctx.cmp_approx(&a.value, &b.value));
    Ok(clusters)
}

fn aberth(ctx: &Ctx, p: &[Coeff]) -> Result<Vec<Coeff>, RootError> {
    let n = p.len() - 1;
    if n == 1 {
        return Ok(vec![(-&p[0]).div(&p[1])]);
    }
    let dp = derivative(ctx, p);
    let lead = p[n].abs_f64();
    // Fujiwara-type radius and the centroid of the roots
    let radius = (0..n)
        .map(|i| (p[i].abs_f64() / lead).powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let centre = (-&p[n - 1]).div(&p[n].scale(&ctx.float(n as i64)));
    let mut z: Vec<Coeff> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            &centre + &ctx.complex_f64(radius * angle.cos(), radius * angle.sin())
        })
        .collect();
    let u = ctx.unit_roundoff().to_f64().value();
    let tol = 8.0 * n as f64 * u;
    let mut done = vec![false; n];
    for _ in 0..MAX_SWEEPS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pz = eval(p, &z[i]);
            if pz.abs_f64() <= tol * eval_abs(p, &z[i]) {
                done[i] = true;
                continue;
            }
            let w = pz.div(&eval(&dp, &z[i]));
            let mut s = ctx.zero();
            for j in 0..n {
                if j != i {
                    s = &s + &ctx.one().div(&(&z[i] - &z[j]));
                }
            }
            let denom = &ctx.one() - &(&w * &s);
            z[i] = &z[i] - &w.div(&denom);
        }
        if done.iter().all(|d| *d) {
            return Ok(z);
        }
    }
    let worst = z
        .iter()
        .map(|zi| eval(p, zi).abs_f64() / eval_abs(p, zi).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Err(RootError::IllConditioned {
        reason: format!("no convergence in {MAX_SWEEPS} sweeps"),
        residual: worst,
    })
}

fn cluster_and_certify(
    ctx: &Ctx,
    p: &[Coeff],
    approx: Vec<Coeff>,
) -> Result<Vec<RootCluster>, RootError> {
    let n = p.len() - 1;
    let radius = ctx.eps_f64().powf(1.0 / n as f64);
    // greedy single-linkage grouping
    let mut groups: Vec<Vec<Coeff>> = Vec::new();
    for z in approx {
        let near = groups.iter().position(|g| {
            g.iter().any(|w| {
                let scale = z.abs_f64().max(w.abs_f64()).max(1.0);
                (&z - w).abs_f64() <= radius * scale
            })
        });
        match near {
            Some(k) => groups[k].push(z),
            None => groups.push(vec![z]),
        }
    }
    // merging may have made two groups touch; settle that once more
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                let touch = groups[a].iter().any(|z| {
                    groups[b].iter().any(|w| {
                        let scale = z.abs_f64().max(w.abs_f64()).max(1.0);
                        (z - w).abs_f64() <= radius * scale
                    })
                });
                if touch {
                    let g = groups.remove(b);
                    groups[a].extend(g);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }

    let mut derivs = vec![p.to_vec()];
    for k in 1..=n {
        derivs.push(derivative(ctx, &derivs[k - 1]));
    }
    let eps = ctx.eps_f64();
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        let m = g.len();
        let mean = g
            .iter()
            .fold(ctx.zero(), |acc, z| &acc + z)
            .scale(&(ctx.float(1) / ctx.float(m as i64)));
        let value = refine(ctx, &derivs[m - 1], &derivs[m], mean);
        for (j, d) in derivs.iter().enumerate().take(m + 1) {
            let v = eval(d, &value).abs_f64();
            let scale = eval_abs(d, &value).max(1.0);
            let small = v <= eps * scale;
            if j < m && !small {
                return Err(RootError::IllConditioned {
                    reason: format!("derivative {j} not small at a root of multiplicity {m}"),
                    residual: v,
                });
            }
            if j == m && small {
                return Err(RootError::IllConditioned {
                    reason: format!("derivative {m} vanishes at a root of multiplicity {m}"),
                    residual: v,
                });
            }
        }
        let residual = eval(p, &value).abs_f64();
        out.push(RootCluster {
            value,
            multiplicity: m as u32,
            residual,
        });
    }
    Ok(out)
}

/// Newton iteration on q (the (m-1)-th derivative, with a simple root
/// there) starting from `z`.
fn refine(ctx: &Ctx, q: &[Coeff], dq: &[Coeff], mut z: Coeff) -> Coeff {
    if q.len() < 2 {
        return z;
    }
    let u = ctx.unit_roundoff().to_f64().value();
    for _ in 0..(2 * ctx.bits().ilog2() as usize + 8) {
        let d = eval(dq, &z);
        if d.abs_f64() == 0.0 {
            break;
        }
        let step = eval(q, &z).div(&d);
        z = &z - &step;
        if step.abs_f64() <= u * z.abs_f64().max(1.0) {
            break;
        }
    }
    z
}

/// Roots of an edge polynomial g: the values c with g(1, c) = 0, each paired
/// with r = -1/slope.
pub fn edge_roots(g: &PuiseuxPoly, e: &Edge) -> Result<Vec<EdgeRoot>, RootError> {
    let coeffs = g.y_coefficients_at_x1();
    let clusters = all_roots(g.ctx(), &coeffs)?;
    let r = e.root_exponent();
    Ok(clusters
        .into_iter()
        .map(|c| EdgeRoot {
            c: c.value,
            r,
            multiplicity: c.multiplicity,
        })
        .collect())
}
