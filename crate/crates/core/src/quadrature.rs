//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the absolute tolerance or the subdivision budget runs
//! out. This is the QUADPACK `qag` strategy without the epsilon algorithm.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// At most `max_intervals` subintervals are used; if the budget is exhausted
/// the returned `abs_error` exceeds the tolerance and callers decide what to
/// do with it.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, max_intervals: usize) -> Integral {
    integrate_split(f, a, b, 1, abs_tol, max_intervals)
}

/// As [`integrate`], starting from `pieces` equal subintervals. Use this when
/// the integrand is concentrated on a small part of a long range, where a
/// single 15-point rule can miss it entirely.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    pieces: usize,
    abs_tol: f64,
    max_intervals: usize,
) -> Integral {
    if a == b {
        return Integral { value: 0.0, abs_error: 0.0, intervals: 0 };
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let pieces = pieces.max(1);
    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    for k in 0..pieces {
        let x0 = lo + (hi - lo) * k as f64 / pieces as f64;
        let x1 = if k + 1 == pieces { hi } else { lo + (hi - lo) * (k + 1) as f64 / pieces as f64 };
        let seg = kronrod15(&f, x0, x1);
        total_err += seg.error;
        heap.push(seg);
    }
    while total_err > abs_tol && heap.len() < max_intervals.max(1) {
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let abs_error: f64 = heap.iter().map(|s| s.error).sum();
    Integral { value: sign * value, abs_error, intervals: heap.len() }
}
