//! Scalar tools used alongside the deletion process: the upper median, base-e
//! entropy, the dyadic interval cover, Chernoff bounds and the cumulative
//! step-ratio sums.

use crate::error::{Error, Result};

/// The largest `x` in `values` such that at least `|values| / 2` elements are
/// strictly larger than `x`.
///
/// When no element qualifies (for example all values equal) the minimum is
/// returned.
pub fn lower_median<T: PartialOrd + Copy>(values: &[T]) -> Result<T> {
    if values.is_empty() {
        return Err(Error::Precondition("median of an empty multiset".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable values"));
    let len = sorted.len();
    // Elements strictly larger than sorted[i]: len - (last index equal to it) - 1.
    let mut best = None;
    let mut i = 0;
    while i < len {
        let mut j = i;
        while j + 1 < len && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let larger = len - j - 1;
        if 2 * larger >= len {
            best = Some(sorted[i]);
        }
        i = j + 1;
    }
    Ok(best.unwrap_or(sorted[0]))
}

/// `sum p log(1/p)` with `p = w / sum(w)`; zero weights contribute nothing.
pub fn entropy(weights: &[f64]) -> Result<f64> {
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::Precondition(format!(
            "weight {w} is not a finite nonnegative number"
        )));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Precondition(
            "entropy of an all-zero weight vector".into(),
        ));
    }
    Ok(weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.ln()
        })
        .sum())
}

/// Ratio bound `rho_M = 2^(4(M + ln 3))`. The logarithm is natural.
pub fn rho(m: f64) -> f64 {
    (4.0 * (m + 3f64.ln())).exp2()
}

/// Support fraction `sigma_M = 2^(-2M - 2)`.
pub fn sigma(m: f64) -> f64 {
    (-2.0 * m - 2.0).exp2()
}

/// A value window `[a, b]` and the elements whose weight falls in it.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicCover {
    pub a: f64,
    pub b: f64,
    /// Indices `j` with `a <= w[j] <= b`, increasing.
    pub members: Vec<usize>,
    /// Total weight of the members.
    pub mass: f64,
}

impl DyadicCover {
    /// Check `b <= rho a`, `|J| >= sigma |S|` and `w(J) > 0.7 w(S)`.
    pub fn satisfies(&self, weights: &[f64], m: f64) -> bool {
        let total: f64 = weights.iter().sum();
        self.a <= self.b
            && self.b <= rho(m) * self.a
            && self.members.len() as f64 >= sigma(m) * weights.len() as f64
            && self.mass > 0.7 * total
    }
}

fn window(weights: &[f64], a: f64, b: f64) -> DyadicCover {
    let members: Vec<usize> = (0..weights.len())
        .filter(|&j| weights[j] >= a && weights[j] <= b)
        .collect();
    let mass = members.iter().map(|&j| weights[j]).sum();
    DyadicCover {
        a,
        b,
        members,
        mass,
    }
}

/// Find `a <= b <= rho_M a` in the range of `w` such that `J = w^-1[a, b]`
/// holds at least a `sigma_M` fraction of the elements and more than 70% of
/// the mass, given `entropy(w) > ln|S| - M`.
///
/// Weights are grouped into dyadic levels `[2^j, 2^(j+1))`. Runs of
/// consecutive levels are scanned from the heaviest level down, extending each
/// run toward lighter levels; the first run whose min/max window qualifies is
/// returned. If no run of whole levels qualifies, every pair of values from the
/// range is tried, smallest `a` first.
pub fn dyadic_interval_cover(weights: &[f64], m: f64) -> Result<DyadicCover> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::Precondition(format!("M must be positive, got {m}")));
    }
    let h = entropy(weights)?;
    let bound = (weights.len() as f64).ln() - m;
    if h <= bound {
        return Err(Error::Precondition(format!(
            "entropy {h} does not exceed ln|S| - M = {bound}"
        )));
    }
    let total: f64 = weights.iter().sum();
    let (rho, sigma) = (rho(m), sigma(m));
    let qualifies = |c: &DyadicCover| {
        c.b <= rho * c.a
            && c.members.len() as f64 >= sigma * weights.len() as f64
            && c.mass > 0.7 * total
    };

    let mut levels: Vec<(i64, f64, f64)> = Vec::new(); // (level, min, max)
    for &w in weights.iter().filter(|&&w| w > 0.0) {
        let level = w.log2().floor() as i64;
        match levels.iter_mut().find(|l| l.0 == level) {
            Some(l) => {
                l.1 = l.1.min(w);
                l.2 = l.2.max(w);
            }
            None => levels.push((level, w, w)),
        }
    }
    levels.sort_by_key(|l| std::cmp::Reverse(l.0));

    for top in 0..levels.len() {
        let b = levels[top].2;
        for &(_, a, _) in &levels[top..] {
            if b > rho * a {
                break;
            }
            let cover = window(weights, a, b);
            if qualifies(&cover) {
                return Ok(cover);
            }
        }
    }

    let mut values: Vec<f64> = weights.iter().copied().filter(|&w| w > 0.0).collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    values.dedup();
    for (i, &a) in values.iter().enumerate() {
        for &b in values[i..].iter().rev() {
            if b > rho * a {
                continue;
            }
            let cover = window(weights, a, b);
            if qualifies(&cover) {
                return Ok(cover);
            }
            // shrinking b only loses members and mass
            break;
        }
    }
    Err(Error::Precondition(
        "no window satisfies the cover conclusions".into(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffBounds {
    /// Bound on `P(|X - mu| > eps mu)`: `2 exp(-eps^2 mu / 3)`.
    pub deviation: f64,
    /// Bound on `P(X >= alpha mu)`: `(e / alpha)^(alpha mu)`, when `alpha` is given.
    pub tail: Option<f64>,
}

/// Chernoff bounds for a sum of independent Bernoulli variables with mean `mu`.
pub fn chernoff_bounds(mu: f64, eps: f64, alpha: Option<f64>) -> Result<ChernoffBounds> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "mu={mu} must be finite and nonnegative"
        )));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange(format!("eps={eps} not in [0, 1]")));
    }
    let tail = match alpha {
        Some(a) if a > std::f64::consts::E && a.is_finite() => {
            Some((a * mu * (std::f64::consts::E / a).ln()).exp())
        }
        Some(a) => return Err(Error::OutOfRange(format!("alpha={a} must exceed e"))),
        None => None,
    };
    Ok(ChernoffBounds {
        deviation: 2.0 * (-eps * eps * mu / 3.0).exp(),
        tail,
    })
}

/// `|exact - closed| <= GAMMA_SUM_CONSTANT * n / (N - t)` for every `t < N`.
///
/// `sum_{j=N-t+1}^{N} 1/j` lies between `ln((N+1)/(N-t+1))` and
/// `ln(N/(N-t))`, and the two logs differ by less than `1/(N-t)`.
pub const GAMMA_SUM_CONSTANT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSums {
    /// `sum_{i=1}^{t} n / (N - i + 1)`
    pub exact: f64,
    /// `n ln(N / (N - t))`
    pub closed: f64,
}

pub fn gamma_cumulative(n: usize, k: usize, t: u64) -> Result<GammaSums> {
    let big_n = (n as u64)
        .checked_pow(k as u32)
        .ok_or_else(|| Error::OutOfRange("n^k overflows".into()))?;
    if t >= big_n {
        return Err(Error::OutOfRange(format!("t={t} must be below N={big_n}")));
    }
    let exact = (1..=t).map(|i| n as f64 / (big_n - i + 1) as f64).sum();
    let closed = n as f64 * (big_n as f64 / (big_n - t) as f64).ln();
    Ok(GammaSums { exact, closed })
}
