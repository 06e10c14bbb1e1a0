//! Shared helpers for the integration suites: seeded random state
//! generators and small numeric utilities. Everything here is independent of
//! the library's internal solver paths so it can serve as an oracle side.

#![allow(dead_code)]

use atompair::hilbert::{BasisTag, DensityMatrix};
use atompair::linalg::CMat4;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Full-rank random density matrix (Ginibre construction), product basis.
pub fn random_density(rng: &mut impl Rng) -> DensityMatrix {
    let g = CMat4::from_fn(|_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng)));
    let m = g * g.adjoint();
    let m = m * c(1.0 / m.trace().re, 0.0);
    DensityMatrix::new(m, BasisTag::Product).unwrap()
}

/// Random X-state (product basis): diagonal plus anti-diagonal, positive
/// semidefinite by construction (|ρ₁₄| ≤ √(ρ₁₁ρ₄₄), |ρ₂₃| ≤ √(ρ₂₂ρ₃₃)).
pub fn random_x_state(rng: &mut impl Rng) -> DensityMatrix {
    let mut p = [0.0_f64; 4];
    let mut sum = 0.0;
    for v in p.iter_mut() {
        *v = -(1.0 - rng.random::<f64>()).ln();
        sum += *v;
    }
    for v in p.iter_mut() {
        *v /= sum;
    }
    let r14 = rng.random::<f64>() * (p[0] * p[3]).sqrt();
    let a14 = rng.random::<f64>() * TAU;
    let r23 = rng.random::<f64>() * (p[1] * p[2]).sqrt();
    let a23 = rng.random::<f64>() * TAU;

    let mut m = CMat4::zeros();
    for (i, v) in p.iter().enumerate() {
        m[(i, i)] = c(*v, 0.0);
    }
    m[(0, 3)] = c(r14 * a14.cos(), r14 * a14.sin());
    m[(3, 0)] = m[(0, 3)].conj();
    m[(1, 2)] = c(r23 * a23.cos(), r23 * a23.sin());
    m[(2, 1)] = m[(1, 2)].conj();
    DensityMatrix::new(m, BasisTag::Product).unwrap()
}

/// Random valid one-excitation elements (ρ_ss, ρ_aa, ρ_as, ρ_gg):
/// populations on the simplex, coherence inside the positivity disc.
pub fn random_one_excited(rng: &mut impl Rng) -> (f64, f64, Complex64, f64) {
    let mut p = [0.0_f64; 3];
    let mut sum = 0.0;
    for v in p.iter_mut() {
        *v = -(1.0 - rng.random::<f64>()).ln();
        sum += *v;
    }
    for v in p.iter_mut() {
        *v /= sum;
    }
    let (ss, aa, gg) = (p[0], p[1], p[2]);
    let r = rng.random::<f64>() * (ss * aa).sqrt();
    let a = rng.random::<f64>() * TAU;
    (ss, aa, c(r * a.cos(), r * a.sin()), gg)
}

/// Closed-form concurrence of an X-state (product basis):
/// C = 2·max(0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃)).
pub fn x_state_concurrence(m: &CMat4) -> f64 {
    let inner = m[(1, 2)].norm() - (m[(0, 0)].re * m[(3, 3)].re).max(0.0).sqrt();
    let outer = m[(0, 3)].norm() - (m[(1, 1)].re * m[(2, 2)].re).max(0.0).sqrt();
    2.0 * inner.max(outer).max(0.0)
}

/// Largest entry-wise difference between two 4×4 complex matrices.
pub fn max_entry_diff(a: &CMat4, b: &CMat4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Least-squares slope of ln(y) over t ∈ [t0, t1] (points with y ≤ 0 are
/// skipped).
pub fn log_linear_slope(times: &[f64], values: &[f64], t0: f64, t1: f64) -> f64 {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values.iter())
        .filter(|(t, v)| **t >= t0 && **t <= t1 && **v > 0.0)
        .map(|(t, v)| (*t, v.ln()))
        .collect();
    let n = pts.len() as f64;
    assert!(n >= 2.0, "not enough points for a fit in [{t0}, {t1}]");
    let sx: f64 = pts.iter().map(|(t, _)| t).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| t * t).sum();
    let sxy: f64 = pts.iter().map(|(t, y)| t * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Number of local maxima whose prominence exceeds `prominence` (the global
/// maximum always counts). Prominence is measured against the lowest saddle
/// separating the peak from higher ground on either side.
pub fn prominent_maxima_count(values: &[f64], prominence: f64) -> usize {
    let n = values.len();
    if n < 3 {
        return if n == 0 { 0 } else { 1 };
    }
    let global_max = values.iter().cloned().fold(f64::MIN, f64::max);
    let mut count = 0;
    for i in 1..n - 1 {
        if !(values[i] > values[i - 1] && values[i] >= values[i + 1]) {
            continue;
        }
        if values[i] == global_max {
            count += 1;
            continue;
        }
        let mut left_min = values[i];
        for j in (0..i).rev() {
            left_min = left_min.min(values[j]);
            if values[j] > values[i] {
                break;
            }
        }
        let mut right_min = values[i];
        for v in values.iter().take(n).skip(i + 1) {
            right_min = right_min.min(*v);
            if *v > values[i] {
                break;
            }
        }
        let prom = (values[i] - left_min).min(values[i] - right_min);
        if prom > prominence {
            count += 1;
        }
    }
    count
}

/// Index of the maximum value.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Parse a CSV produced by the scenario layer into (header, columns).
pub fn parse_csv(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().expect("csv header").to_string();
    let ncols = header.split(',').count();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); ncols];
    for line in lines {
        for (i, cell) in line.split(',').enumerate() {
            cols[i].push(cell.parse().expect("csv cell"));
        }
    }
    (header, cols)
}

/// A small pass/fail tally that prints one line per sub-check and panics at
/// the end if any failed, so every line is always evaluated and printed.
pub struct Checklist {
    label: &'static str,
    failures: Vec<String>,
    total: usize,
}

impl Checklist {
    pub fn new(label: &'static str) -> Self {
        Self {
            label,
            failures: Vec::new(),
            total: 0,
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.total += 1;
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("[{}] {}: {} ({})", self.label, name, verdict, detail);
        if !pass {
            self.failures.push(format!("{name}: {detail}"));
        }
    }

    pub fn finish(self) {
        if self.failures.is_empty() {
            println!("[{}] PASS ({} sub-checks)", self.label, self.total);
        } else {
            println!(
                "[{}] FAIL ({}/{} sub-checks failed)",
                self.label,
                self.failures.len(),
                self.total
            );
            panic!(
                "{}: {}/{} sub-checks failed:\n  {}",
                self.label,
                self.failures.len(),
                self.total,
                self.failures.join("\n  ")
            );
        }
    }
}
