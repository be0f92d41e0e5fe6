//! Deterministic Nelder-Mead simplex minimization.
//!
//! Small, dependency-free, and tailored to the fidelity search: objective
//! values may be `INFINITY` (rejected probes such as leak-budget blowups),
//! ties break by insertion order, and the best vertex is never discarded, so
//! a run seeded at a known-good point can only improve on it.

/// Knobs for one simplex run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct NmOptions {
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Converged when the simplex f-spread drops below `ftol`...
    pub ftol: f64,
    /// ...and every vertex is within `xtol` of the best (infinity norm).
    pub xtol: f64,
}

/// Outcome of one simplex run.
#[derive(Clone, Debug)]
pub(crate) struct NmResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

/// Minimizes `f` from `x0`, with the initial simplex offset by `step[i]`
/// along coordinate `i`.
pub(crate) fn minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: &[f64],
    opts: &NmOptions,
) -> NmResult {
    assert_eq!(x0.len(), step.len(), "step vector must match dimension");
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push(Vertex {
        x: x0.to_vec(),
        f: f0,
    });
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let fx = eval(&x, &mut evals);
        simplex.push(Vertex { x, f: fx });
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;

    while evals < opts.max_evals {
        // Stable sort keeps insertion order on ties, making runs
        // reproducible even with flat (penalty-plateau) objectives.
        simplex.sort_by(|a, b| a.f.partial_cmp(&b.f).expect("NaN mapped to INFINITY"));

        let best = &simplex[0];
        let worst = &simplex[dim];
        let spread = worst.f - best.f;
        let width = simplex[1..]
            .iter()
            .flat_map(|v| v.x.iter().zip(&best.x).map(|(a, b)| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        if spread.abs() < opts.ftol && width < opts.xtol {
            converged = true;
            break;
        }

        // Centroid of all vertices but the worst.
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(&v.x) {
                *c += xi / dim as f64;
            }
        }

        let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
        };

        // Reflect the worst vertex through the centroid.
        let reflected = lerp(&centroid, &simplex[dim].x, -alpha);
        let f_r = eval(&reflected, &mut evals);

        if f_r < simplex[0].f {
            // Try to expand further along the same direction.
            let expanded = lerp(&centroid, &simplex[dim].x, -gamma);
            let f_e = eval(&expanded, &mut evals);
            simplex[dim] = if f_e < f_r {
                Vertex {
                    x: expanded,
                    f: f_e,
                }
            } else {
                Vertex {
                    x: reflected,
                    f: f_r,
                }
            };
        } else if f_r < simplex[dim - 1].f {
            simplex[dim] = Vertex {
                x: reflected,
                f: f_r,
            };
        } else {
            // Contract toward the centroid, from whichever of the worst and
            // reflected points is better.
            let (toward, f_t) = if f_r < simplex[dim].f {
                (&reflected, f_r)
            } else {
                (&simplex[dim].x, simplex[dim].f)
            };
            let contracted = lerp(&centroid, toward, rho);
            let f_c = eval(&contracted, &mut evals);
            if f_c < f_t {
                simplex[dim] = Vertex {
                    x: contracted,
                    f: f_c,
                };
            } else {
                // Shrink everything toward the best vertex.
                let best_x = simplex[0].x.clone();
                for v in &mut simplex[1..] {
                    v.x = lerp(&best_x, &v.x, sigma);
                    v.f = eval(&v.x, &mut evals);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.f.partial_cmp(&b.f).expect("NaN mapped to INFINITY"));
    let best = simplex.swap_remove(0);
    NmResult {
        x: best.x,
        f: best.f,
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> NmResult {
        let step = vec![0.5; x0.len()];
        minimize(
            f,
            x0,
            &step,
            &NmOptions {
                max_evals: 20_000,
                ftol: 1e-12,
                xtol: 1e-8,
            },
        )
    }

    #[test]
    fn minimizes_shifted_quadratic() {
        let res = run(
            |x| x.iter().enumerate().map(|(i, v)| (v - i as f64).powi(2)).sum(),
            &[0.3, -1.0, 4.0, 0.0, 2.5],
        );
        assert!(res.converged, "quadratic should converge");
        for (i, xi) in res.x.iter().enumerate() {
            assert!(
                (xi - i as f64).abs() < 1e-5,
                "coordinate {i} off: {xi} vs {i}"
            );
        }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let res = run(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(res.f < 1e-10, "rosenbrock minimum not reached: f = {}", res.f);
        assert!((res.x[0] - 1.0).abs() < 1e-4 && (res.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn survives_penalty_plateaus() {
        // Half-space penalty: the simplex must slide off the plateau and
        // still find the constrained minimum at x = 1.
        let res = run(
            |x| {
                if x[0] < 1.0 {
                    f64::INFINITY
                } else {
                    (x[0] - 0.5).powi(2)
                }
            },
            &[3.0],
        );
        assert!((res.x[0] - 1.0).abs() < 1e-4, "got {}", res.x[0]);
    }

    #[test]
    fn is_deterministic() {
        let f = |x: &[f64]| x[0].sin() + (x[1] * 1.3).cos() + x[0] * x[0] * 0.1;
        let a = run(f, &[0.7, -0.2]);
        let b = run(f, &[0.7, -0.2]);
        assert_eq!(a.x, b.x);
        assert_eq!(a.f, b.f);
        assert_eq!(a.evals, b.evals);
    }
}
