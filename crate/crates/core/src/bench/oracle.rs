use crate::{AffinityMatrix, Error, Permutation, Result};

pub const ORACLE_MAX_N: usize = 8;

/// Exact IQP optimum by enumerating all `n!` permutations in lexicographic
/// order; the first optimum found (up to a 1e−12 relative margin) wins.
pub fn brute_force_oracle(w: &AffinityMatrix) -> Result<(Permutation, f64)> {
    let n = w.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let mut map: Vec<usize> = (0..n).collect();
    let mut best = Permutation::identity(n);
    let mut best_obj = best.objective(w);
    while next_permutation(&mut map) {
        let candidate = Permutation::new(map.clone())?;
        let obj = candidate.objective(w);
        if obj > best_obj + 1e-12 * best_obj.abs().max(1.0) {
            best = candidate;
            best_obj = obj;
        }
    }
    Ok((best, best_obj))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
