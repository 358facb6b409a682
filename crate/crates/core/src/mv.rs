//! Mayer-Vietoris bookkeeping for the amalgam SL_2(Z[w]) *_{Gamma_0(w)} SL_2(Z[w]):
//! degree-wise kernel and cokernel of (i*, j*), the dimension chase, and the
//! Poincare series check for freeness over F_2[e4].

use serde::Serialize;
use thiserror::Error;

use crate::spectral::Comparison;

pub const PERIOD: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvError {
    #[error("degree {n} needs comparison data up to q = {n}, computed only to q = {q_max}")]
    Range { n: u32, q_max: u32 },
    #[error("no period-{period} tail spanning two periods in {len} terms")]
    NotPeriodic { period: usize, len: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LESRow {
    pub n: u32,
    pub kernel: usize,
    pub cokernel: usize,
    pub rank: usize,
}

pub fn degreewise_kernel_cokernel(c: &Comparison, n_max: u32) -> Result<Vec<LESRow>, MvError> {
    if n_max > c.q_max {
        return Err(MvError::Range { n: n_max, q_max: c.q_max });
    }
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let mut row = LESRow { n, kernel: 0, cokernel: 0, rank: 0 };
        for p in 0..3usize {
            if p as u32 > n {
                continue;
            }
            let e = c.entry(p, n - p as u32).ok_or(MvError::Range { n, q_max: c.q_max })?;
            row.kernel += e.kernel_dim;
            row.cokernel += e.cokernel_dim;
            row.rank += e.rank;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// dim H^0 = ker(0); dim H^n = coker(n-1) + ker(n).
pub fn solve_les(rows: &[LESRow]) -> Vec<usize> {
    rows.iter()
        .enumerate()
        .map(|(n, r)| if n == 0 { r.kernel } else { rows[n - 1].cokernel + r.kernel })
        .collect()
}

/// Smallest s with x[n] = x[n + period] for all n >= s, provided the tail x[s..] spans
/// at least two periods.
pub fn periodic_tail<T: PartialEq>(x: &[T], period: usize) -> Option<usize> {
    if x.len() < 2 * period {
        return None;
    }
    let mut s = x.len() - period;
    while s > 0 && x[s - 1] == x[s - 1 + period] {
        s -= 1;
    }
    (x.len() - s >= 2 * period).then_some(s)
}

/// Continues rows past their end using the detected period.
pub fn extend_rows(rows: &[LESRow], through: u32) -> Result<Vec<LESRow>, MvError> {
    let counts: Vec<(usize, usize, usize)> = rows.iter().map(|r| (r.kernel, r.cokernel, r.rank)).collect();
    periodic_tail(&counts, PERIOD).ok_or(MvError::NotPeriodic { period: PERIOD, len: rows.len() })?;
    let mut out = rows.to_vec();
    while (out.len() as u32) <= through {
        let n = out.len();
        let src = out[n - PERIOD];
        out.push(LESRow { n: n as u32, ..src });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareSeries {
    pub coefficients: Vec<i64>,
    pub tail_start: usize,
    pub period: usize,
    /// numerator of P(t) = numerator / (1 - t^period)
    pub numerator: Vec<i64>,
}

impl PoincareSeries {
    /// Expansion of numerator / (1 - t^period) to `len` terms.
    pub fn expand(&self, len: usize) -> Vec<i64> {
        let mut out = vec![0i64; len];
        for n in 0..len {
            let mut k = n as i64;
            while k >= 0 {
                out[n] += self.numerator.get(k as usize).copied().unwrap_or(0);
                k -= self.period as i64;
            }
        }
        out
    }

    pub fn rational_form(&self) -> String {
        format!("({})/(1 - t^{})", format_polynomial(&self.numerator), self.period)
    }
}

pub fn format_polynomial(c: &[i64]) -> String {
    let mut out = String::new();
    for (k, &a) in c.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let mag = a.unsigned_abs();
        let mono = match (k, mag) {
            (0, m) => m.to_string(),
            (1, 1) => "t".to_string(),
            (1, m) => format!("{m}t"),
            (k, 1) => format!("t^{k}"),
            (k, m) => format!("{m}t^{k}"),
        };
        if out.is_empty() {
            out = if a < 0 { format!("-{mono}") } else { mono };
        } else {
            out.push_str(if a < 0 { " - " } else { " + " });
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

pub fn poincare_series(dims: &[i64]) -> Result<PoincareSeries, MvError> {
    let s = periodic_tail(dims, PERIOD).ok_or(MvError::NotPeriodic { period: PERIOD, len: dims.len() })?;
    // (1 - t^4) P(t) vanishes from degree s + 4 on
    let top = (s + PERIOD).min(dims.len());
    let mut numerator: Vec<i64> = (0..top)
        .map(|n| dims[n] - if n >= PERIOD { dims[n - PERIOD] } else { 0 })
        .collect();
    while numerator.last() == Some(&0) {
        numerator.pop();
    }
    let ps = PoincareSeries { coefficients: dims.to_vec(), tail_start: s, period: PERIOD, numerator };
    debug_assert_eq!(ps.expand(dims.len()), dims);
    Ok(ps)
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeModuleVerdict {
    pub free: bool,
    pub series: PoincareSeries,
    /// Degrees of a homogeneous basis read off the numerator (with multiplicity).
    pub basis_degrees: Vec<usize>,
    pub rank: usize,
    /// Rank counting only basis elements of positive degree.
    pub positive_rank: usize,
    pub claimed: Vec<usize>,
    pub claimed_contained: bool,
}

pub fn free_module_check(dims: &[i64], claimed: &[usize]) -> Result<FreeModuleVerdict, MvError> {
    let series = poincare_series(dims)?;
    let free = series.numerator.iter().all(|c| *c >= 0);
    let mut basis_degrees = Vec::new();
    for (k, &c) in series.numerator.iter().enumerate() {
        for _ in 0..c.max(0) {
            basis_degrees.push(k);
        }
    }
    let mut pool = basis_degrees.clone();
    let claimed_contained = claimed.iter().all(|d| match pool.iter().position(|x| x == d) {
        Some(i) => {
            pool.remove(i);
            true
        }
        None => false,
    });
    let rank = basis_degrees.len();
    let positive_rank = basis_degrees.iter().filter(|d| **d > 0).count();
    Ok(FreeModuleVerdict { free, series, basis_degrees, rank, positive_rank, claimed: claimed.to_vec(), claimed_contained })
}

/// For each degree: dim H^n(Gamma_0) = rank + coker(n) and 2 dim H^n(SL_2) = rank + ker(n).
pub fn exactness(rows: &[LESRow], gamma0: &[usize], sl2: &[usize]) -> Vec<(u32, bool, bool)> {
    rows.iter()
        .filter(|r| (r.n as usize) < gamma0.len() && (r.n as usize) < sl2.len())
        .map(|r| {
            let n = r.n as usize;
            (r.n, gamma0[n] == r.rank + r.cokernel, 2 * sl2[n] == r.rank + r.kernel)
        })
        .collect()
}
