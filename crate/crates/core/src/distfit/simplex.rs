//! Derivative-free Nelder-Mead minimizer.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            diameter_tol: 1e-8,
            max_evaluations: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Minimizes `f` starting from the simplex `x0, x0 + steps[i] e_i`.
///
/// Standard coefficients (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Non-finite objective values are treated as `+inf`.
pub fn minimize<F>(mut f: F, x0: &[f64], steps: &[f64], opts: SimplexOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(steps.len(), dim);
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evaluations)).collect();

    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&simplex) < opts.diameter_tol {
            return Minimum {
                x: simplex.swap_remove(0),
                value: values[0],
                evaluations,
                converged: true,
            };
        }
        if evaluations >= opts.max_evaluations {
            return Minimum {
                x: simplex.swap_remove(0),
                value: values[0],
                evaluations,
                converged: false,
            };
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&reflected, &mut evaluations);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = eval(&expanded, &mut evaluations);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[dim] {
            let c = along(-0.5);
            let fc = eval(&c, &mut evaluations);
            (c, fc)
        } else {
            let c = along(0.5);
            let fc = eval(&c, &mut evaluations);
            (c, fc)
        };
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=dim {
            simplex[i] = best
                .iter()
                .zip(&simplex[i])
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            values[i] = eval(&simplex[i], &mut evaluations);
        }
    }
}
