//! Per-degree transition matrices between the classical bases, memoized
//! globally. Power sums are the pivot coordinate system: every other basis
//! gets a matrix to and from p, and arbitrary conversions route through it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Zero};

use crate::linalg::QMat;
use crate::qtcoeff::QtRat;

use super::partition::{partitions_of, Partition};
use super::Basis;

/// Irreducible symmetric-group character chi^mu(lambda) via the
/// Murnaghan-Nakayama rule on beta-sets.
pub fn character(mu: &Partition, lambda: &Partition) -> i64 {
    static MEMO: OnceLock<Mutex<HashMap<(Partition, Partition), i64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = memo.lock().unwrap().get(&(mu.clone(), lambda.clone())) {
        return v;
    }
    let value = char_rec(mu, lambda.parts());
    memo.lock()
        .unwrap()
        .insert((mu.clone(), lambda.clone()), value);
    value
}

fn char_rec(mu: &Partition, lambda_parts: &[u32]) -> i64 {
    if lambda_parts.is_empty() {
        return if mu.is_empty() { 1 } else { 0 };
    }
    let l = lambda_parts[0] as i64;
    let rest = &lambda_parts[1..];
    let m = mu.len();
    let beta: Vec<i64> = (0..m)
        .map(|k| mu.parts()[k] as i64 + (m - 1 - k) as i64)
        .collect();
    let mut total = 0;
    for k in 0..m {
        let target = beta[k] - l;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&b| b > target && b < beta[k]).count();
        let mut nb = beta.clone();
        nb[k] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts = Vec::new();
        for (i, &b) in nb.iter().enumerate() {
            let part = b - (m - 1 - i) as i64;
            debug_assert!(part >= 0);
            if part > 0 {
                parts.push(part as u32);
            }
        }
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * char_rec(&Partition::new(parts), rest);
    }
    total
}

type PMap = HashMap<Partition, BigRational>;

fn pmap_add(acc: &mut PMap, key: Partition, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(key).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        acc.retain(|_, v| !v.is_zero());
    }
}

/// p-expansion of e_k (Newton recurrence), memoized.
fn e_in_p(k: usize) -> Arc<PMap> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Arc<PMap>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().unwrap().get(&k) {
        return Arc::clone(v);
    }
    let result: PMap = if k == 0 {
        let mut m = HashMap::new();
        m.insert(Partition::empty(), BigRational::one());
        m
    } else {
        // k e_k = sum_{i=1..k} (-1)^{i-1} p_i e_{k-i}
        let mut acc: PMap = HashMap::new();
        for i in 1..=k {
            let prev = e_in_p(k - i);
            let sign = if (i - 1) % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            for (part, c) in prev.iter() {
                pmap_add(&mut acc, part.add_part(i as u32), c * &sign);
            }
        }
        let inv_k = BigRational::new(BigInt::one(), BigInt::from(k));
        acc.into_iter().map(|(p, c)| (p, c * &inv_k)).collect()
    };
    let arc = Arc::new(result);
    memo.lock().unwrap().insert(k, Arc::clone(&arc));
    arc
}

/// p-expansion of h_k, memoized.
fn h_in_p(k: usize) -> Arc<PMap> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Arc<PMap>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().unwrap().get(&k) {
        return Arc::clone(v);
    }
    let result: PMap = if k == 0 {
        let mut m = HashMap::new();
        m.insert(Partition::empty(), BigRational::one());
        m
    } else {
        // k h_k = sum_{i=1..k} p_i h_{k-i}
        let mut acc: PMap = HashMap::new();
        for i in 1..=k {
            let prev = h_in_p(k - i);
            for (part, c) in prev.iter() {
                pmap_add(&mut acc, part.add_part(i as u32), c.clone());
            }
        }
        let inv_k = BigRational::new(BigInt::one(), BigInt::from(k));
        acc.into_iter().map(|(p, c)| (p, c * &inv_k)).collect()
    };
    let arc = Arc::new(result);
    memo.lock().unwrap().insert(k, Arc::clone(&arc));
    arc
}

fn pmap_mul(a: &PMap, b: &PMap) -> PMap {
    let mut out = PMap::new();
    for (pa, ca) in a {
        for (pb, cb) in b {
            pmap_add(&mut out, pa.union(pb), ca * cb);
        }
    }
    out
}

/// m-expansion of p_lambda by iterated multiplication with p_k:
/// m_mu * p_k = sum over a in {0} union parts(mu) of mult_{a+k}(nu) m_nu
/// where nu = mu - a + (a+k).
fn p_in_m(lambda: &Partition) -> PMap {
    let mut acc: PMap = HashMap::new();
    acc.insert(Partition::empty(), BigRational::one());
    for &k in lambda.parts() {
        let mut next: PMap = HashMap::new();
        for (mu, c) in acc.iter() {
            // a = 0: a new part k
            let nu = mu.add_part(k);
            let mult = BigRational::from_integer(BigInt::from(nu.multiplicity(k)));
            pmap_add(&mut next, nu, c * &mult);
            // a > 0: grow one existing part
            let mut seen = std::collections::HashSet::new();
            for &a in mu.parts() {
                if !seen.insert(a) {
                    continue;
                }
                let nu = mu.remove_part(a).unwrap().add_part(a + k);
                let mult = BigRational::from_integer(BigInt::from(nu.multiplicity(a + k)));
                pmap_add(&mut next, nu, c * &mult);
            }
        }
        acc = next;
    }
    acc
}

fn rat(r: &BigRational) -> QtRat {
    QtRat::from_rational(r.clone())
}

fn mat_cache() -> &'static Mutex<HashMap<(usize, Basis, bool), Arc<QMat>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Basis, bool), Arc<QMat>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute_to_p(d: usize, basis: Basis) -> QMat {
    let table = partitions_of(d);
    let n = table.list.len();
    match basis {
        Basis::PowerSum => QMat::identity(n),
        Basis::Schur => {
            // column mu: s_mu = sum_lambda chi^mu(lambda)/z_lambda p_lambda
            QMat::from_fn(n, n, |row, col| {
                let chi = character(&table.list[col], &table.list[row]);
                if chi == 0 {
                    return QtRat::zero();
                }
                let z = BigRational::from_integer(table.list[row].z());
                rat(&(BigRational::from_integer(BigInt::from(chi)) / z))
            })
        }
        Basis::Elementary | Basis::Homogeneous => {
            let mut m = QMat::zero(n, n);
            for (col, lambda) in table.list.iter().enumerate() {
                let mut acc: PMap = HashMap::new();
                acc.insert(Partition::empty(), BigRational::one());
                for &part in lambda.parts() {
                    let factor = if basis == Basis::Elementary {
                        e_in_p(part as usize)
                    } else {
                        h_in_p(part as usize)
                    };
                    acc = pmap_mul(&acc, &factor);
                }
                for (p, c) in acc {
                    m[(table.index[&p], col)] = rat(&c);
                }
            }
            m
        }
        Basis::Monomial => {
            // invert the p -> m change of coordinates
            let mut p_to_m = QMat::zero(n, n);
            for (col, lambda) in table.list.iter().enumerate() {
                for (mu, c) in p_in_m(lambda) {
                    p_to_m[(table.index[&mu], col)] = rat(&c);
                }
            }
            p_to_m
                .inverse()
                .expect("p to m change of basis is invertible")
        }
        Basis::Htilde => panic!("htilde conversions live in the macdonald module"),
    }
}

/// Matrix sending coordinates in `basis` to power-sum coordinates at degree d.
pub fn to_p_mat(d: usize, basis: Basis) -> Arc<QMat> {
    assert!(basis != Basis::Htilde);
    let key = (d, basis, true);
    if let Some(m) = mat_cache().lock().unwrap().get(&key) {
        return Arc::clone(m);
    }
    let m = Arc::new(compute_to_p(d, basis));
    mat_cache().lock().unwrap().insert(key, Arc::clone(&m));
    m
}

/// Matrix sending power-sum coordinates to `basis` coordinates at degree d.
pub fn from_p_mat(d: usize, basis: Basis) -> Arc<QMat> {
    assert!(basis != Basis::Htilde);
    let key = (d, basis, false);
    if let Some(m) = mat_cache().lock().unwrap().get(&key) {
        return Arc::clone(m);
    }
    let m = match basis {
        Basis::PowerSum => Arc::new(QMat::identity(partitions_of(d).list.len())),
        Basis::Schur => {
            // p_lambda = sum_mu chi^mu(lambda) s_mu
            let table = partitions_of(d);
            let n = table.list.len();
            Arc::new(QMat::from_fn(n, n, |row, col| {
                let chi = character(&table.list[row], &table.list[col]);
                QtRat::from_int(chi)
            }))
        }
        _ => Arc::new(
            to_p_mat(d, basis)
                .inverse()
                .expect("basis transition is invertible"),
        ),
    };
    mat_cache().lock().unwrap().insert(key, Arc::clone(&m));
    m
}
