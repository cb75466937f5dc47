//! Globally adaptive Gauss-Kronrod (7/15) quadrature for vector integrands.
//!
//! All components share one partition, so a filter evaluation that yields
//! every exponent at once is computed once per node. The interval with the
//! largest scaled error is bisected until each component meets its
//! relative tolerance. Refinement order and the final summation order are
//! fixed (left to right), so results are bit-reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{argument, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Per-component relative error target.
    pub rel_tol: f64,
    /// Components smaller than this fraction of the summed integral are
    /// resolved to `rel_tol * floor_fraction * sum` in absolute terms
    /// instead of relative to themselves; their own value can sit at the
    /// rounding floor of the filter cancellation.
    pub floor_fraction: f64,
    /// Upper bound on the number of intervals in the partition.
    pub max_intervals: usize,
    /// After convergence, bisect every interval this many more times and
    /// re-integrate. Used to probe stability; 0 in normal runs.
    pub extra_refinement: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            floor_fraction: 1e-10,
            max_intervals: 200_000,
            extra_refinement: 0,
        }
    }
}

impl QuadratureOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(argument(
                "quad_tolerance",
                format!("must lie in (0, 1), got {}", self.rel_tol),
            ));
        }
        if !(self.floor_fraction >= 0.0 && self.floor_fraction < 1.0) {
            return Err(argument(
                "floor_fraction",
                format!("must lie in [0, 1), got {}", self.floor_fraction),
            ));
        }
        if self.max_intervals < 1 {
            return Err(argument("max_intervals", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
    pub intervals: usize,
}

impl QuadratureResult {
    /// `max_k err_k / |I_k|`, zero for components that vanish identically.
    /// Components below the floor can report large values here.
    pub fn relative_error(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.errors)
            .map(|(v, e)| if *e == 0.0 { 0.0 } else { e / v.abs() })
            .fold(0.0, f64::max)
    }

    /// Like [`relative_error`](Self::relative_error), but each component is
    /// measured against `max(|I_k|, floor_fraction * sum |I|)`.
    pub fn floored_relative_error(&self, floor_fraction: f64) -> f64 {
        let floor = floor_fraction * self.values.iter().map(|v| v.abs()).sum::<f64>();
        self.values
            .iter()
            .zip(&self.errors)
            .map(|(v, e)| if *e == 0.0 { 0.0 } else { e / v.abs().max(floor) })
            .fold(0.0, f64::max)
    }
}

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
    score: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            // deterministic tie break: leftmost first
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Rule<'f, F> {
    f: &'f mut F,
    dim: usize,
    fx: Vec<f64>,
    evaluations: usize,
}

impl<F: FnMut(f64, &mut [f64])> Rule<'_, F> {
    fn apply(&mut self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut kron = vec![0.0; self.dim];
        let mut gauss = vec![0.0; self.dim];

        (self.f)(center, &mut self.fx);
        for k in 0..self.dim {
            kron[k] += WGK[7] * self.fx[k];
            gauss[k] += WG[3] * self.fx[k];
        }
        for j in 0..7 {
            let dx = half * XGK[j];
            for x in [center - dx, center + dx] {
                (self.f)(x, &mut self.fx);
                for k in 0..self.dim {
                    kron[k] += WGK[j] * self.fx[k];
                    if j % 2 == 1 {
                        gauss[k] += WG[j / 2] * self.fx[k];
                    }
                }
            }
        }
        self.evaluations += 15;
        let values: Vec<f64> = kron.iter().map(|v| v * half).collect();
        let errors = kron.iter().zip(&gauss).map(|(k, g)| ((k - g) * half).abs()).collect();
        (values, errors)
    }
}

fn targets(totals: &[f64], opts: &QuadratureOptions) -> Vec<f64> {
    let floor = opts.floor_fraction * totals.iter().map(|t| t.abs()).sum::<f64>();
    totals.iter().map(|t| opts.rel_tol * t.abs().max(floor)).collect()
}

fn score(errors: &[f64], targets: &[f64]) -> f64 {
    errors
        .iter()
        .zip(targets)
        .map(|(e, &target)| {
            if target > 0.0 {
                e / target
            } else if *e > 0.0 {
                f64::MAX
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

fn converged(values: &[f64], errors: &[f64], opts: &QuadratureOptions) -> bool {
    targets(values, opts).iter().zip(errors).all(|(t, e)| e <= t)
}

fn exact_totals(panels: &[&Panel], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut values = vec![0.0; dim];
    let mut errors = vec![0.0; dim];
    for p in panels {
        for k in 0..dim {
            values[k] += p.values[k];
            errors[k] += p.errors[k];
        }
    }
    (values, errors)
}

/// Integrates the `dim`-component function `f` over `[a, b]`, starting from
/// `initial_panels` equal subintervals.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    dim: usize,
    initial_panels: usize,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: FnMut(f64, &mut [f64]),
{
    opts.validate()?;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(argument("bounds", format!("need finite a < b, got [{a}, {b}]")));
    }
    let initial_panels = initial_panels.clamp(1, opts.max_intervals);
    let mut rule = Rule {
        f: &mut f,
        dim,
        fx: vec![0.0; dim],
        evaluations: 0,
    };

    let width = (b - a) / initial_panels as f64;
    let mut raw = Vec::with_capacity(initial_panels);
    for p in 0..initial_panels {
        let lo = a + p as f64 * width;
        let hi = if p + 1 == initial_panels {
            b
        } else {
            a + (p + 1) as f64 * width
        };
        let (values, errors) = rule.apply(lo, hi);
        raw.push((lo, hi, values, errors));
    }
    let mut totals = vec![0.0; dim];
    let mut total_err = vec![0.0; dim];
    for (_, _, v, e) in &raw {
        for k in 0..dim {
            totals[k] += v[k];
            total_err[k] += e[k];
        }
    }
    let initial_targets = targets(&totals, opts);
    let mut heap: BinaryHeap<Panel> = raw
        .into_iter()
        .map(|(a, b, values, errors)| {
            let score = score(&errors, &initial_targets);
            Panel {
                a,
                b,
                values,
                errors,
                score,
            }
        })
        .collect();

    let mut previous = totals.clone();
    loop {
        if converged(&totals, &total_err, opts) {
            let mut panels: Vec<&Panel> = heap.iter().collect();
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let (values, errors) = exact_totals(&panels, dim);
            if converged(&values, &errors, opts) {
                let intervals = panels.len();
                let bounds: Vec<(f64, f64)> = panels.iter().map(|p| (p.a, p.b)).collect();
                if opts.extra_refinement == 0 {
                    return Ok(QuadratureResult {
                        values,
                        errors,
                        evaluations: rule.evaluations,
                        intervals,
                    });
                }
                return Ok(refine_uniformly(&mut rule, &bounds, opts.extra_refinement, values));
            }
            totals = values;
            total_err = errors;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Convergence {
                intervals: heap.len(),
                previous,
                last: totals,
            });
        }
        let worst = heap.pop().expect("partition is never empty");
        if worst.score == 0.0 {
            // every panel already exact but totals disagree by rounding
            heap.push(worst);
            let mut panels: Vec<&Panel> = heap.iter().collect();
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let (values, errors) = exact_totals(&panels, dim);
            return Ok(QuadratureResult {
                values,
                errors,
                evaluations: rule.evaluations,
                intervals: heap.len(),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = rule.apply(worst.a, mid);
        let (rv, re) = rule.apply(mid, worst.b);
        previous.clone_from(&totals);
        for k in 0..dim {
            totals[k] += lv[k] + rv[k] - worst.values[k];
            total_err[k] += le[k] + re[k] - worst.errors[k];
        }
        let current = targets(&totals, opts);
        let ls = score(&le, &current);
        let rs = score(&re, &current);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            values: lv,
            errors: le,
            score: ls,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            values: rv,
            errors: re,
            score: rs,
        });
    }
}

fn refine_uniformly<F: FnMut(f64, &mut [f64])>(
    rule: &mut Rule<'_, F>,
    bounds: &[(f64, f64)],
    levels: u32,
    coarse: Vec<f64>,
) -> QuadratureResult {
    let pieces = 1usize << levels;
    let mut values = vec![0.0; rule.dim];
    for &(a, b) in bounds {
        let w = (b - a) / pieces as f64;
        for p in 0..pieces {
            let hi = if p + 1 == pieces { b } else { a + (p + 1) as f64 * w };
            let (v, _) = rule.apply(a + p as f64 * w, hi);
            for k in 0..rule.dim {
                values[k] += v[k];
            }
        }
    }
    let errors = values.iter().zip(&coarse).map(|(f, c)| (f - c).abs()).collect();
    QuadratureResult {
        values,
        errors,
        evaluations: rule.evaluations,
        intervals: bounds.len() * pieces,
    }
}
