use crate::error::{Error, Result};

const TOTAL_TOL: f64 = 1e-10;
const PREFIX_SLACK: f64 = 1e-12;

fn sorted_desc(v: &[f64], len: usize) -> Vec<f64> {
    let mut s = v.to_vec();
    s.resize(len, 0.0);
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `u ≺ v`: every prefix sum of `u↓` is at most the corresponding prefix sum
/// of `v↓`. The shorter vector is zero-padded; totals must agree.
pub fn majorizes(u: &[f64], v: &[f64]) -> Result<bool> {
    let n = u.len().max(v.len());
    let (tu, tv): (f64, f64) = (u.iter().sum(), v.iter().sum());
    if (tu - tv).abs() > TOTAL_TOL {
        return Err(Error::Domain(format!("majorization needs equal totals, got {tu} and {tv}")));
    }
    let (su, sv) = (sorted_desc(u, n), sorted_desc(v, n));
    let mut pu = 0.0;
    let mut pv = 0.0;
    for k in 0..n {
        pu += su[k];
        pv += sv[k];
        if pv - pu < -PREFIX_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Moves `amount` of weight from entry `from` to entry `to`, where
/// `v[to] ≥ v[from]` and `0 < amount ≤ v[from]`. The result majorizes `v`.
pub fn transfer_weight(v: &[f64], from: usize, to: usize, amount: f64) -> Result<Vec<f64>> {
    if from >= v.len() || to >= v.len() || from == to {
        return Err(Error::Domain("transfer indices out of range".into()));
    }
    if v[to] < v[from] {
        return Err(Error::Domain("transfer must go from a smaller to a larger entry".into()));
    }
    if !(amount > 0.0 && amount <= v[from]) {
        return Err(Error::Domain(format!("transfer amount {amount} outside (0, {}]", v[from])));
    }
    let mut u = v.to_vec();
    u[from] -= amount;
    u[to] += amount;
    Ok(u)
}
