//! Budgeted Nelder-Mead simplex search.
//!
//! Derivative-free local minimization with the standard reflection,
//! expansion, contraction, and shrink moves (coefficients 1, 2, 0.5, 0.5).
//! Fully deterministic: the only inputs are the start point and options, and
//! ties are broken by stable ordering. The outcome records a best-so-far
//! trace, one entry per iteration, which is non-increasing by construction.

use alloc::vec::Vec;

/// Search options.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Stop when the simplex objective spread falls to this or below.
    pub f_tol: f64,
    /// Offset added per coordinate to build the initial simplex.
    pub init_step: f64,
}

/// Result of one simplex run.
#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    /// Best point found.
    pub x: Vec<f64>,
    /// Objective at `x`.
    pub f: f64,
    /// Objective evaluations spent.
    pub evals: usize,
    /// Best objective value after each iteration; non-increasing.
    pub trace: Vec<f64>,
}

/// Minimizes `f` from `x0`. NaN objective values are treated as +infinity
/// so they are never selected.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &SimplexOptions,
) -> SimplexOutcome {
    let n = x0.len();
    assert!(n >= 1, "nelder_mead needs at least one parameter");
    let mut evals = 0usize;
    let budget = opts.max_evals.max(1);
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    // Initial simplex: x0 plus one step along each coordinate.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        if evals >= budget {
            break;
        }
        let mut xi = x0.to_vec();
        xi[i] += opts.init_step;
        let fi = eval(&xi, &mut evals);
        simplex.push((xi, fi));
    }

    let mut trace = Vec::new();
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
    };
    order(&mut simplex);
    trace.push(simplex[0].1);

    if simplex.len() < n + 1 {
        // Budget exhausted while building the simplex.
        let (x, fv) = simplex.swap_remove(0);
        return SimplexOutcome { x, f: fv, evals, trace };
    }

    loop {
        let spread = simplex[n].1 - simplex[0].1;
        if spread <= opts.f_tol || evals >= budget {
            break;
        }

        // Centroid of all vertices but the worst.
        let mut centroid = alloc::vec![0.0; n];
        for (x, _) in simplex.iter().take(n) {
            for (c, v) in centroid.iter_mut().zip(x.iter()) {
                *c += v;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }
        let worst = simplex[n].clone();
        let combine = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst.0.iter())
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let x_r = combine(1.0);
        let f_r = eval(&x_r, &mut evals);
        if f_r < simplex[0].1 {
            // Try expanding past the reflection.
            if evals < budget {
                let x_e = combine(2.0);
                let f_e = eval(&x_e, &mut evals);
                simplex[n] = if f_e < f_r { (x_e, f_e) } else { (x_r, f_r) };
            } else {
                simplex[n] = (x_r, f_r);
            }
        } else if f_r < simplex[n - 1].1 {
            simplex[n] = (x_r, f_r);
        } else if evals < budget {
            // Contract toward the better of reflection and worst.
            let (x_c, reference) = if f_r < worst.1 {
                (combine(0.5), f_r) // outside
            } else {
                (combine(-0.5), worst.1) // inside
            };
            let f_c = eval(&x_c, &mut evals);
            if f_c <= reference {
                simplex[n] = (x_c, f_c);
            } else {
                // Shrink everything toward the best vertex.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    if evals >= budget {
                        break;
                    }
                    for (xv, bv) in vertex.0.iter_mut().zip(best.iter()) {
                        *xv = bv + 0.5 * (*xv - bv);
                    }
                    vertex.1 = eval(&vertex.0, &mut evals);
                }
            }
        }

        order(&mut simplex);
        trace.push(simplex[0].1);
    }

    let (x, fv) = simplex.swap_remove(0);
    SimplexOutcome { x, f: fv, evals, trace }
}
