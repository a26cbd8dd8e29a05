//! Adaptive Gauss–Kronrod (7/15) rules on intervals and on rectangles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{IntegralResult, QuadratureConfig};

/// Kronrod abscissae on `[0, 1)`, descending; the 15-point rule uses `±` each.
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
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd-indexed Kronrod abscissae.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 nodes on `[-1, 1]` with Kronrod and embedded Gauss weights.
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for k in 0..7 {
        let wg = if k % 2 == 1 { WG[k / 2] } else { 0.0 };
        out[k] = (-XGK[k], WGK[k], wg);
        out[14 - k] = (XGK[k], WGK[k], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, Copy)]
struct Panel1 {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Panel1 {
    fn eval(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Self {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let (mut k, mut g) = (0.0, 0.0);
        for (x, wk, wg) in rule() {
            let v = f(mid + half * x);
            k += wk * v;
            g += wg * v;
        }
        Self {
            a,
            b,
            value: k * half,
            error: ((k - g) * half).abs(),
        }
    }
}

/// Heap entry ordered by error, ties broken by position.
struct ByError<T> {
    error: f64,
    key: f64,
    item: T,
}

impl<T> PartialEq for ByError<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T> Eq for ByError<T> {}
impl<T> PartialOrd for ByError<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for ByError<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.key.total_cmp(&self.key))
    }
}

fn finish<T>(
    panels: Vec<T>,
    sort_key: impl Fn(&T) -> (f64, f64),
    value: impl Fn(&T) -> f64,
    error: impl Fn(&T) -> f64,
    splits: usize,
    cfg: &QuadratureConfig,
) -> IntegralResult {
    let mut panels = panels;
    panels.sort_by(|x, y| {
        let (a, b) = (sort_key(x), sort_key(y));
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    let total: f64 = panels.iter().map(&value).sum();
    let err: f64 = panels.iter().map(&error).sum();
    IntegralResult {
        value: total,
        error_estimate: err,
        subdivisions_used: splits,
        converged: err <= cfg.tolerance_for(total),
    }
}

/// Adaptive integral of `f` over `[a, b]`, starting from `initial` equal panels.
pub(crate) fn integrate_1d(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    initial: usize,
    cfg: &QuadratureConfig,
) -> IntegralResult {
    let initial = initial.max(1);
    let step = (b - a) / initial as f64;
    let mut heap: BinaryHeap<ByError<Panel1>> = (0..initial)
        .map(|k| {
            let lo = a + step * k as f64;
            let hi = if k + 1 == initial { b } else { lo + step };
            let p = Panel1::eval(&f, lo, hi);
            ByError {
                error: p.error,
                key: p.a,
                item: p,
            }
        })
        .collect();
    let mut value: f64 = heap.iter().map(|e| e.item.value).sum();
    let mut error: f64 = heap.iter().map(|e| e.item.error).sum();
    let mut splits = 0;
    while error > cfg.tolerance_for(value) && splits < cfg.max_subdivisions {
        let worst = heap.pop().expect("nonempty panel set").item;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(ByError {
                error: 0.0,
                key: worst.a,
                item: worst,
            });
            break;
        }
        let left = Panel1::eval(&f, worst.a, mid);
        let right = Panel1::eval(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        for p in [left, right] {
            heap.push(ByError {
                error: p.error,
                key: p.a,
                item: p,
            });
        }
        splits += 1;
    }
    let panels: Vec<Panel1> = heap.into_iter().map(|e| e.item).collect();
    finish(
        panels,
        |p| (p.a, 0.0),
        |p| p.value,
        |p| p.error,
        splits,
        cfg,
    )
}

#[derive(Debug, Clone, Copy)]
struct Panel2 {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: f64,
    error: f64,
    /// Whether the embedded estimate in `x` dominated, deciding the next split.
    split_x: bool,
}

impl Panel2 {
    fn eval(f: &impl Fn(f64, f64) -> f64, x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let rule = rule();
        let (hx, mx) = (0.5 * (x1 - x0), 0.5 * (x0 + x1));
        let (hy, my) = (0.5 * (y1 - y0), 0.5 * (y0 + y1));
        // kk: Kronrod in both; gk: Gauss in x; kg: Gauss in y
        let (mut kk, mut gk, mut kg) = (0.0, 0.0, 0.0);
        for &(u, wkx, wgx) in &rule {
            let x = mx + hx * u;
            let (mut row_k, mut row_g) = (0.0, 0.0);
            for &(v, wky, wgy) in &rule {
                let val = f(x, my + hy * v);
                row_k += wky * val;
                row_g += wgy * val;
            }
            kk += wkx * row_k;
            gk += wgx * row_k;
            kg += wkx * row_g;
        }
        let area = hx * hy;
        let ex = ((kk - gk) * area).abs();
        let ey = ((kk - kg) * area).abs();
        Self {
            x0,
            x1,
            y0,
            y1,
            value: kk * area,
            error: ex + ey,
            split_x: ex >= ey,
        }
    }

    fn split(&self, f: &impl Fn(f64, f64) -> f64) -> Option<[Self; 2]> {
        if self.split_x {
            let m = 0.5 * (self.x0 + self.x1);
            (m > self.x0 && m < self.x1).then(|| {
                [
                    Self::eval(f, self.x0, m, self.y0, self.y1),
                    Self::eval(f, m, self.x1, self.y0, self.y1),
                ]
            })
        } else {
            let m = 0.5 * (self.y0 + self.y1);
            (m > self.y0 && m < self.y1).then(|| {
                [
                    Self::eval(f, self.x0, self.x1, self.y0, m),
                    Self::eval(f, self.x0, self.x1, m, self.y1),
                ]
            })
        }
    }
}

/// Adaptive integral of `f(x, y)` over `[x0, x1] × [y0, y1]`.
///
/// Each panel uses the tensor 15×15 Kronrod rule. Replacing the Kronrod rule
/// by the embedded Gauss rule in one direction gives a directional error
/// estimate; the panel's error is their sum and it is bisected along the
/// direction whose estimate is larger.
pub(crate) fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    cfg: &QuadratureConfig,
) -> IntegralResult {
    let key = |p: &Panel2| p.x0 + p.y0 * 1e-3;
    let first = Panel2::eval(&f, x0, x1, y0, y1);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(ByError {
        error: first.error,
        key: key(&first),
        item: first,
    });
    let mut splits = 0;
    while error > cfg.tolerance_for(value) && splits < cfg.max_subdivisions {
        let worst = heap.pop().expect("nonempty panel set").item;
        let Some(children) = worst.split(&f) else {
            heap.push(ByError {
                error: 0.0,
                key: key(&worst),
                item: worst,
            });
            break;
        };
        value += children[0].value + children[1].value - worst.value;
        error += children[0].error + children[1].error - worst.error;
        for p in children {
            heap.push(ByError {
                error: p.error,
                key: key(&p),
                item: p,
            });
        }
        splits += 1;
    }
    let panels: Vec<Panel2> = heap.into_iter().map(|e| e.item).collect();
    finish(
        panels,
        |p| (p.x0, p.y0),
        |p| p.value,
        |p| p.error,
        splits,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let k: f64 = rule().iter().map(|&(x, w, _)| w * x.powi(22)).sum();
        assert!((k - 2.0 / 23.0).abs() < 1e-14);
        let g: f64 = rule().iter().map(|&(x, _, w)| w * x.powi(12)).sum();
        assert!((g - 2.0 / 13.0).abs() < 1e-14);
        let wsum: f64 = rule().iter().map(|&(_, w, _)| w).sum();
        assert!((wsum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn one_dimensional_integrals() {
        let cfg = QuadratureConfig::default();
        let r = integrate_1d(|x| x.sqrt(), 0.0, 1.0, 1, &cfg);
        assert!(r.converged);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-10);
        let r = integrate_1d(|x| (x - 0.3).abs(), 0.0, 1.0, 1, &cfg);
        assert!((r.value - 0.29).abs() < 1e-10);
    }

    #[test]
    fn two_dimensional_integrals() {
        let cfg = QuadratureConfig::default();
        let r = integrate_2d(|x, y| (x * y).sqrt(), (0.0, 1.0), (0.0, 2.0), &cfg);
        assert!(r.converged);
        let want = (2.0 / 3.0) * (2.0 / 3.0) * 2f64.powf(1.5);
        assert!((r.value - want).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadratureConfig {
            max_subdivisions: 4,
            ..QuadratureConfig::default()
        };
        let r = integrate_1d(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1, &cfg);
        assert!(!r.converged);
        assert_eq!(r.subdivisions_used, 4);
    }
}
