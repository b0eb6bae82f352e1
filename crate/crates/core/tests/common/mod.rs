//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

/// Euclidean projection onto the simplex by enumerating every support set
/// and keeping the closest feasible candidate.
pub fn active_set_projection(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << m) {
        let support: Vec<usize> = (0..m).filter(|l| mask & (1 << l) != 0).collect();
        let shift = (support.iter().map(|&l| v[l]).sum::<f64>() - 1.0) / support.len() as f64;
        let mut w = vec![0.0; m];
        for &l in &support {
            w[l] = v[l] - shift;
        }
        if w.iter().any(|x| *x < 0.0) {
            continue;
        }
        let dist: f64 = w.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, w));
        }
    }
    best.expect("some support is always feasible").1
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, z: &[f64], h: f64) -> Vec<f64> {
    (0..z.len())
        .map(|l| {
            let mut plus = z.to_vec();
            let mut minus = z.to_vec();
            plus[l] += h;
            minus[l] -= h;
            (f(&plus) - f(&minus)) / (2.0 * h)
        })
        .collect()
}

/// Regular grid of `[0,1]^d` with at least `min_points` nodes, endpoints included.
pub fn grid(d: usize, min_points: usize) -> Vec<Vec<f64>> {
    let mut per_axis = 2usize;
    while per_axis.pow(d as u32) < min_points {
        per_axis += 1;
    }
    let total = per_axis.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let c = idx % per_axis;
                    idx /= per_axis;
                    c as f64 / (per_axis - 1) as f64
                })
                .collect()
        })
        .collect()
}

/// `max_l w_l (f_l - ideal_l)`.
pub fn chebyshev(w: &[f64], f: &[f64], ideal: &[f64]) -> f64 {
    w.iter()
        .zip(f)
        .zip(ideal)
        .map(|((w, f), y)| w * (f - y))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
