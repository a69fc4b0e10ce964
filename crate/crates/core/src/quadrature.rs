//! Gauss-Legendre rules and globally adaptive 1D / 3D integration.
//!
//! The adaptive drivers keep a priority queue of cells keyed by their error
//! estimate `|G(cell) − Σ G(children)|` and always split the worst cell,
//! so the reported error is the sum over the final partition. Contributions
//! are summed pairwise in creation order, which keeps results bit-for-bit
//! reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-type initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        // map [-1, 1] → [0, 1]
        GaussRule {
            nodes: nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: weights.iter().map(|w| 0.5 * w).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate_1d<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let h = b - a;
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(a + h * x))
            .sum();
        s * h
    }

    pub fn integrate_cube<F: Fn([f64; 3]) -> f64>(&self, f: &F, lo: [f64; 3], side: f64) -> f64 {
        let mut total = 0.0;
        for (xi, wi) in self.nodes.iter().zip(&self.weights) {
            let mut plane = 0.0;
            for (yj, wj) in self.nodes.iter().zip(&self.weights) {
                let mut line = 0.0;
                for (zk, wk) in self.nodes.iter().zip(&self.weights) {
                    line += wk * f([lo[0] + side * xi, lo[1] + side * yj, lo[2] + side * zk]);
                }
                plane += wj * line;
            }
            total += wi * plane;
        }
        total * side * side * side
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOutcome {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
    pub converged: bool,
}

struct Queued {
    error: f64,
    id: usize,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Generic driver over cells of type `C` that can be split into children.
/// `estimate` returns `(refined value, error estimate, children)`.
fn adaptive<C, E>(
    initial: Vec<C>,
    estimate: E,
    extra_error: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_cells: usize,
) -> AdaptiveOutcome
where
    E: Fn(&C) -> (f64, f64, Vec<C>),
{
    let mut values: Vec<f64> = Vec::new();
    let mut errors: Vec<f64> = Vec::new();
    let mut pending: Vec<Option<Vec<C>>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let push = |cell: &C, values: &mut Vec<f64>, errors: &mut Vec<f64>, pending: &mut Vec<Option<Vec<C>>>, heap: &mut BinaryHeap<Queued>| {
        let (v, e, children) = estimate(cell);
        let id = values.len();
        values.push(v);
        errors.push(e);
        pending.push(Some(children));
        heap.push(Queued { error: e, id });
    };
    for cell in &initial {
        push(cell, &mut values, &mut errors, &mut pending, &mut heap);
    }
    let mut total_error: f64 = errors.iter().sum::<f64>() + extra_error;
    let mut running: f64 = values.iter().sum();
    let mut live = values.len();
    let mut converged = false;
    loop {
        if total_error <= (rel_tol * running.abs()).max(abs_tol) {
            converged = true;
            break;
        }
        if live >= max_cells {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let children = pending[worst.id].take().expect("cell refined twice");
        total_error -= errors[worst.id];
        running -= values[worst.id];
        values[worst.id] = 0.0;
        errors[worst.id] = 0.0;
        live -= 1;
        for child in &children {
            push(child, &mut values, &mut errors, &mut pending, &mut heap);
            total_error += errors[values.len() - 1];
            running += values[values.len() - 1];
            live += 1;
        }
    }
    // recompute the error sum exactly to shed drift from the running total
    let error = errors
        .iter()
        .zip(&pending)
        .filter(|(_, p)| p.is_some())
        .map(|(e, _)| *e)
        .sum::<f64>()
        + extra_error;
    AdaptiveOutcome {
        value: pairwise_live(&values, &pending),
        error,
        cells: live,
        converged: converged || error <= 0.0,
    }
}

fn pairwise_live<C>(values: &[f64], pending: &[Option<Vec<C>>]) -> f64 {
    let live: Vec<f64> = values
        .iter()
        .zip(pending)
        .filter(|(_, p)| p.is_some())
        .map(|(v, _)| *v)
        .collect();
    pairwise_sum(&live)
}

/// Adaptive integral over a union of intervals.
pub fn adaptive_1d<F: Fn(f64) -> f64>(
    f: &F,
    intervals: &[(f64, f64)],
    rule: &GaussRule,
    rel_tol: f64,
    abs_tol: f64,
    max_cells: usize,
) -> AdaptiveOutcome {
    let estimate = |&(a, b): &(f64, f64)| {
        let m = 0.5 * (a + b);
        let coarse = rule.integrate_1d(f, a, b);
        let fine = rule.integrate_1d(f, a, m) + rule.integrate_1d(f, m, b);
        (fine, (coarse - fine).abs(), vec![(a, m), (m, b)])
    };
    adaptive(intervals.to_vec(), estimate, 0.0, rel_tol, abs_tol, max_cells)
}

/// Axis-aligned cube `[lo, lo + side]^3`.
#[derive(Debug, Clone, Copy)]
pub struct Cube {
    pub lo: [f64; 3],
    pub side: f64,
}

impl Cube {
    pub fn children(&self) -> Vec<Cube> {
        let h = 0.5 * self.side;
        (0..8)
            .map(|b| Cube {
                lo: [
                    self.lo[0] + h * (b & 1) as f64,
                    self.lo[1] + h * ((b >> 1) & 1) as f64,
                    self.lo[2] + h * ((b >> 2) & 1) as f64,
                ],
                side: h,
            })
            .collect()
    }
}

/// Adaptive integral over a union of cubes; `extra_error` is added to the
/// error budget (e.g. an analytically bounded excluded region).
pub fn adaptive_3d<F: Fn([f64; 3]) -> f64>(
    f: &F,
    cubes: Vec<Cube>,
    extra_error: f64,
    rule: &GaussRule,
    rel_tol: f64,
    max_cells: usize,
) -> AdaptiveOutcome {
    let estimate = |cube: &Cube| {
        let coarse = rule.integrate_cube(f, cube.lo, cube.side);
        let children = cube.children();
        let fine = pairwise_sum(
            &children
                .iter()
                .map(|c| rule.integrate_cube(f, c.lo, c.side))
                .collect::<Vec<_>>(),
        );
        (fine, (coarse - fine).abs(), children)
    };
    adaptive(cubes, estimate, extra_error, rel_tol, 0.0, max_cells)
}
