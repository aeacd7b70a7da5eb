//! Exact gcd of bivariate polynomials over the rationals.
//!
//! The fraction field only needs gcds up to a unit, so the result is
//! normalized to integer coefficients with content 1 and a positive
//! lexicographically-least coefficient. The algorithm is the classical
//! primitive PRS: strip monomial and rational content, pick the main
//! variable with the smaller degree, and run pseudo-remainders over
//! Z[inner][outer], re-primitivizing every step.

use num::{BigInt, One, Signed, Zero};

use super::poly::QtPoly;

/// Dense univariate polynomial over Z, index = exponent.
type UPol = Vec<BigInt>;

fn utrim(p: &mut UPol) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn uis_zero(p: &UPol) -> bool {
    p.is_empty()
}

fn udeg(p: &UPol) -> usize {
    p.len().saturating_sub(1)
}

fn umul(a: &UPol, b: &UPol) -> UPol {
    if uis_zero(a) || uis_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    utrim(&mut out);
    out
}

fn usub(a: &UPol, b: &UPol) -> UPol {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    utrim(&mut out);
    out
}

fn uscale(a: &UPol, c: &BigInt) -> UPol {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

fn ucontent(a: &UPol) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = num::integer::gcd(g, c.abs());
        if g.is_one() {
            break;
        }
    }
    g
}

fn udiv_int(a: &UPol, c: &BigInt) -> UPol {
    a.iter().map(|x| x / c).collect()
}

fn uprimitive(a: &UPol) -> UPol {
    if uis_zero(a) {
        return Vec::new();
    }
    let mut g = ucontent(a);
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    udiv_int(a, &g)
}

/// Exact division in Z[x]; panics if not divisible (internal use only).
fn udivexact(a: &UPol, b: &UPol) -> UPol {
    assert!(!uis_zero(b));
    if uis_zero(a) {
        return Vec::new();
    }
    let mut rem = a.clone();
    let mut quot = vec![BigInt::zero(); a.len() - b.len() + 1];
    let lb = b.last().unwrap().clone();
    while !uis_zero(&rem) {
        let dr = udeg(&rem);
        let db = udeg(b);
        assert!(dr >= db, "not divisible");
        let lr = rem.last().unwrap().clone();
        let (c, r) = num::Integer::div_rem(&lr, &lb);
        assert!(r.is_zero(), "not divisible");
        quot[dr - db] = c.clone();
        let mut shifted = vec![BigInt::zero(); dr - db];
        shifted.extend(uscale(b, &c));
        rem = usub(&rem, &shifted);
    }
    utrim(&mut quot);
    quot
}

fn ugcd(a: &UPol, b: &UPol) -> UPol {
    if uis_zero(a) {
        return uprimitive(b);
    }
    if uis_zero(b) {
        return uprimitive(a);
    }
    let ca = ucontent(a);
    let cb = ucontent(b);
    let cg = num::integer::gcd(ca.clone(), cb.clone());
    let mut r0 = udiv_int(a, &ca);
    let mut r1 = udiv_int(b, &cb);
    if udeg(&r0) < udeg(&r1) {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !uis_zero(&r1) {
        // pseudo-remainder of r0 by r1, then re-primitivize
        let lb = r1.last().unwrap().clone();
        let mut rem = r0.clone();
        while !uis_zero(&rem) && udeg(&rem) >= udeg(&r1) {
            let k = udeg(&rem) - udeg(&r1);
            let lr = rem.last().unwrap().clone();
            let mut shifted = vec![BigInt::zero(); k];
            shifted.extend(uscale(&r1, &lr));
            rem = usub(&uscale(&rem, &lb), &shifted);
        }
        r0 = r1;
        r1 = uprimitive(&rem);
    }
    let mut g = uscale(&uprimitive(&r0), &cg);
    if g.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = uscale(&g, &BigInt::from(-1));
    }
    g
}

/// Bivariate polynomial over Z, outer index = main-variable exponent,
/// inner polynomial in the other variable.
type BPol = Vec<UPol>;

fn btrim(p: &mut BPol) {
    while p.last().map(uis_zero).unwrap_or(false) {
        p.pop();
    }
}

fn bis_zero(p: &BPol) -> bool {
    p.is_empty()
}

fn bdeg(p: &BPol) -> usize {
    p.len().saturating_sub(1)
}

fn bcontent(p: &BPol) -> UPol {
    let mut g: UPol = Vec::new();
    for c in p {
        g = ugcd(&g, c);
        if g.len() == 1 && g[0].is_one() {
            break;
        }
    }
    g
}

fn bdiv_upol(p: &BPol, c: &UPol) -> BPol {
    p.iter()
        .map(|x| if uis_zero(x) { Vec::new() } else { udivexact(x, c) })
        .collect()
}

fn bprimitive(p: &BPol) -> BPol {
    if bis_zero(p) {
        return Vec::new();
    }
    bdiv_upol(p, &bcontent(p))
}

fn bscale_upol(p: &BPol, c: &UPol) -> BPol {
    p.iter().map(|x| umul(x, c)).collect()
}

fn bsub(a: &BPol, b: &BPol) -> BPol {
    let mut out: BPol = vec![Vec::new(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = usub(&out[i], c);
    }
    btrim(&mut out);
    out
}

/// Full bivariate gcd over Z: gcd of contents times gcd of primitive parts.
fn bgcd(a: &BPol, b: &BPol) -> BPol {
    let ca = bcontent(a);
    let cb = bcontent(b);
    let cg = ugcd(&ca, &cb);
    let mut r0 = bdiv_upol(a, &ca);
    let mut r1 = bdiv_upol(b, &cb);
    if bdeg(&r0) < bdeg(&r1) {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !bis_zero(&r1) {
        if bdeg(&r1) == 0 {
            // a main-variable-free remainder of a primitive pair forces a unit gcd
            r0 = vec![vec![BigInt::one()]];
            break;
        }
        let lb = r1.last().unwrap().clone();
        let mut rem = r0.clone();
        while !bis_zero(&rem) && bdeg(&rem) >= bdeg(&r1) {
            let k = bdeg(&rem) - bdeg(&r1);
            let lr = rem.last().unwrap().clone();
            let mut shifted: BPol = vec![Vec::new(); k];
            shifted.extend(bscale_upol(&r1, &lr));
            rem = bsub(&bscale_upol(&rem, &lb), &shifted);
        }
        r0 = r1;
        r1 = bprimitive(&rem);
    }
    bscale_upol(&bprimitive(&r0), &cg)
}

/// Heuristic gcd (GCDHEU): evaluate one variable at a large integer, recurse,
/// and lift the result back through balanced base-xi digits; verified by
/// trial division, with the PRS as fallback when the retries run out.
mod heuristic {
    use super::*;
    use num::Signed as _;

    fn max_norm_u(p: &UPol) -> BigInt {
        p.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    fn max_norm_b(p: &BPol) -> BigInt {
        p.iter().map(max_norm_u).max().unwrap_or_else(BigInt::zero)
    }

    fn initial_xi(a: &BigInt, b: &BigInt) -> BigInt {
        let m = a.min(b).clone();
        BigInt::from(2) * m + BigInt::from(29)
    }

    fn next_xi(xi: &BigInt) -> BigInt {
        // the classic irrational-ish growth ratio keeps evaluation points
        // from repeating algebraic relations
        (xi * BigInt::from(73794)) / BigInt::from(27011)
    }

    fn eval_u(p: &UPol, xi: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in p.iter().rev() {
            acc = acc * xi + c;
        }
        acc
    }

    fn eval_b(p: &BPol, xi: &BigInt) -> UPol {
        // evaluate the outer variable; the result is a polynomial in the inner
        let mut acc: UPol = Vec::new();
        for row in p.iter().rev() {
            acc = usub(&uscale_xi(&acc, xi), &negate_u(row));
        }
        acc
    }

    fn uscale_xi(p: &UPol, xi: &BigInt) -> UPol {
        p.iter().map(|c| c * xi).collect()
    }

    fn negate_u(p: &UPol) -> UPol {
        p.iter().map(|c| -c).collect()
    }

    /// Balanced base-xi digits, least significant first.
    fn digits(mut v: BigInt, xi: &BigInt, max_digits: usize) -> Option<Vec<BigInt>> {
        let half = xi / BigInt::from(2);
        let mut out = Vec::new();
        while !v.is_zero() {
            if out.len() > max_digits {
                return None;
            }
            let mut r = num::Integer::mod_floor(&v, xi);
            if r > half {
                r -= xi;
            }
            v = (v - &r) / xi;
            out.push(r);
        }
        Some(out)
    }

    fn heu_gcd_u(f: &UPol, g: &UPol, max_deg: usize) -> Option<UPol> {
        let mut xi = initial_xi(&max_norm_u(f), &max_norm_u(g));
        for _ in 0..6 {
            let a = eval_u(f, &xi);
            let b = eval_u(g, &xi);
            let gamma = num::integer::gcd(a, b);
            if let Some(cand) = digits(gamma, &xi, max_deg) {
                let cand = uprimitive(&cand);
                if !uis_zero(&cand)
                    && try_udiv(f, &cand).is_some()
                    && try_udiv(g, &cand).is_some()
                {
                    return Some(cand);
                }
            }
            xi = next_xi(&xi);
        }
        None
    }

    pub(super) fn try_udiv_pub(a: &UPol, b: &UPol) -> Option<UPol> {
        try_udiv(a, b)
    }

    fn try_udiv(a: &UPol, b: &UPol) -> Option<UPol> {
        if uis_zero(a) {
            return Some(Vec::new());
        }
        if udeg(a) < udeg(b) {
            return None;
        }
        let mut rem = a.clone();
        let mut quot = vec![BigInt::zero(); a.len() - b.len() + 1];
        let lb = b.last().unwrap().clone();
        while !uis_zero(&rem) {
            let dr = udeg(&rem);
            let db = udeg(b);
            if dr < db {
                return None;
            }
            let lr = rem.last().unwrap().clone();
            let (c, r) = num::Integer::div_rem(&lr, &lb);
            if !r.is_zero() {
                return None;
            }
            quot[dr - db] = c.clone();
            let mut shifted = vec![BigInt::zero(); dr - db];
            shifted.extend(uscale(b, &c));
            rem = usub(&rem, &shifted);
        }
        utrim(&mut quot);
        Some(quot)
    }

    pub fn heu_gcd_b(f: &BPol, g: &BPol, max_inner_deg: usize, max_outer_deg: usize) -> Option<BPol> {
        let mut xi = initial_xi(&max_norm_b(f), &max_norm_b(g));
        for _ in 0..6 {
            let fe = eval_b(f, &xi);
            let ge = eval_b(g, &xi);
            if let Some(gamma) = heu_gcd_u(&fe, &ge, max_inner_deg) {
                // lift each inner coefficient back into outer digits
                let mut rows: Vec<UPol> = Vec::new();
                let mut ok = true;
                let mut cols: Vec<Vec<BigInt>> = Vec::new();
                for c in gamma.iter() {
                    match digits(c.clone(), &xi, max_outer_deg) {
                        Some(d) => cols.push(d),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let height = cols.iter().map(|c| c.len()).max().unwrap_or(0);
                    for t_exp in 0..height {
                        let mut row: UPol = cols
                            .iter()
                            .map(|c| c.get(t_exp).cloned().unwrap_or_else(BigInt::zero))
                            .collect();
                        utrim(&mut row);
                        rows.push(row);
                    }
                    let mut cand = rows;
                    btrim(&mut cand);
                    if !bis_zero(&cand) {
                        // strip integer content only; polynomial content in
                        // the main variable belongs to the gcd
                        let mut ic = BigInt::zero();
                        for row in cand.iter() {
                            for c in row.iter() {
                                ic = num::integer::gcd(ic, c.abs());
                            }
                        }
                        let cand: BPol = cand
                            .iter()
                            .map(|row| row.iter().map(|c| c / &ic).collect())
                            .collect();
                        if bdivides(f, &cand) && bdivides(g, &cand) {
                            return Some(cand);
                        }
                    }
                }
            }
            xi = next_xi(&xi);
        }
        None
    }

    fn bdivides(a: &BPol, b: &BPol) -> bool {
        super::bdiv_exact(a, b).is_some()
    }
}

/// Convert a rational-coefficient QtPoly (already content-stripped to integer
/// coefficients) into the recursive form. `main_t` selects t as main variable.
fn to_bpol(p: &QtPoly, main_t: bool) -> BPol {
    let (dq, dt) = (p.degree_q() as usize, p.degree_t() as usize);
    let (outer, inner) = if main_t { (dt, dq) } else { (dq, dt) };
    let mut out: BPol = vec![vec![BigInt::zero(); inner + 1]; outer + 1];
    for (&(a, b), c) in p.terms() {
        debug_assert!(c.denom().is_one());
        let (o, i) = if main_t {
            (b as usize, a as usize)
        } else {
            (a as usize, b as usize)
        };
        out[o][i] = c.numer().clone();
    }
    for row in out.iter_mut() {
        utrim(row);
    }
    btrim(&mut out);
    out
}

fn from_bpol(p: &BPol, main_t: bool) -> QtPoly {
    let mut out = QtPoly::zero();
    for (o, row) in p.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = if main_t { (i, o) } else { (o, i) };
            out.add_term(
                (a as u32, b as u32),
                &num::BigRational::from_integer(c.clone()),
            );
        }
    }
    out
}

/// Exact division in Z[q][t] with t as main variable; `None` when the
/// quotient does not exist over Z.
fn bdiv_exact(a: &BPol, b: &BPol) -> Option<BPol> {
    if bis_zero(a) {
        return Some(Vec::new());
    }
    if bis_zero(b) || bdeg(a) < bdeg(b) {
        return None;
    }
    let mut rem = a.clone();
    let mut quot: BPol = vec![Vec::new(); bdeg(a) - bdeg(b) + 1];
    let lb = b.last().unwrap();
    while !bis_zero(&rem) {
        let dr = bdeg(&rem);
        let db = bdeg(b);
        if dr < db {
            return None;
        }
        let c = heuristic::try_udiv_pub(rem.last().unwrap(), lb)?;
        quot[dr - db] = c.clone();
        // rem -= (c * t^{dr-db}) * b
        let mut piece: BPol = vec![Vec::new(); dr - db];
        piece.extend(b.iter().map(|row| umul(row, &c)));
        rem = bsub(&rem, &piece);
        if !bis_zero(&rem) && bdeg(&rem) == dr {
            return None;
        }
    }
    Some(quot)
}

/// Integer fast path for dividing by a primitive divisor, used by the
/// fraction normalization. `None` means not divisible (valid only when `g`
/// is primitive over Z, by the Gauss lemma).
pub fn div_exact_primitive(f: &QtPoly, g: &QtPoly) -> Option<QtPoly> {
    let integral = |p: &QtPoly| p.terms().all(|(_, c)| num::One::is_one(c.denom()));
    if g.is_one() {
        return Some(f.clone());
    }
    if integral(f) && integral(g) {
        let a = to_bpol(f, true);
        let b = to_bpol(g, true);
        bdiv_exact(&a, &b).map(|q| from_bpol(&q, true))
    } else {
        f.exact_div(g)
    }
}

/// Normalize to integer coefficients with content 1 and positive
/// lexicographically-least coefficient.
pub fn normalize_primitive(p: &QtPoly) -> QtPoly {
    let (_, pp) = p.content_split();
    pp
}

/// Gcd in Q[q,t], returned primitive over Z with the lexicographically-least
/// coefficient positive. `gcd(0, g) = normalize(g)`; `gcd(0, 0) = 0`.
pub fn qt_gcd(f: &QtPoly, g: &QtPoly) -> QtPoly {
    if f.is_zero() {
        return normalize_primitive(g);
    }
    if g.is_zero() {
        return normalize_primitive(f);
    }
    let (fq, ft) = f.monomial_content();
    let (gq, gt) = g.monomial_content();
    let (mq, mt) = (fq.min(gq), ft.min(gt));
    let fs = normalize_primitive(&f.div_monomial(fq, ft));
    let gs = normalize_primitive(&g.div_monomial(gq, gt));

    let core = if fs.is_constant() || gs.is_constant() {
        QtPoly::one()
    } else if fs == gs {
        fs.clone()
    } else {
        // main variable: the one with the smaller max degree keeps the PRS short
        let dt = fs.degree_t().max(gs.degree_t());
        let dq = fs.degree_q().max(gs.degree_q());
        let main_t = dt <= dq;
        let a = to_bpol(&fs, main_t);
        let b = to_bpol(&gs, main_t);
        let (inner_deg, outer_deg) = if main_t {
            (dq as usize, dt as usize)
        } else {
            (dt as usize, dq as usize)
        };
        let g = heuristic::heu_gcd_b(&a, &b, inner_deg + 1, outer_deg + 1)
            .unwrap_or_else(|| bgcd(&a, &b));
        normalize_primitive(&from_bpol(&g, main_t))
    };
    core.mul_monomial(mq, mt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_binomials() {
        let one = QtPoly::one();
        let q = QtPoly::q();
        let t = QtPoly::t();
        // gcd(1-q^2, 1-q) = 1-q
        let a = &one - &q.pow(2);
        let b = &one - &q;
        assert_eq!(qt_gcd(&a, &b), b);
        // gcd((1-q)(1-t), (1-q)(1+t)) = 1-q
        let m = &(&one - &q) * &(&one - &t);
        let n = &(&one - &q) * &(&one + &t);
        assert_eq!(qt_gcd(&m, &n), &one - &q);
    }

    #[test]
    fn gcd_coprime_is_one() {
        let one = QtPoly::one();
        let q = QtPoly::q();
        let t = QtPoly::t();
        let a = &one + &q;
        let b = &one - &t;
        assert_eq!(qt_gcd(&a, &b), one);
    }

    #[test]
    fn gcd_with_monomial_content() {
        let q = QtPoly::q();
        let t = QtPoly::t();
        // gcd(q^2 t (1+t), q t^2) = q t
        let a = &QtPoly::monomial(2, 1, num::BigRational::one())
            * &(&QtPoly::one() + &t);
        let b = QtPoly::monomial(1, 2, num::BigRational::one());
        let g = qt_gcd(&a, &b);
        assert_eq!(g, &q * &t);
    }

    #[test]
    fn gcd_divides_both() {
        let one = QtPoly::one();
        let q = QtPoly::q();
        let t = QtPoly::t();
        let g0 = &(&one - &(&q * &t)) * &(&one + &q);
        let a = &g0 * &(&one + &t);
        let b = &g0 * &(&q + &t.pow(2));
        let g = qt_gcd(&a, &b);
        assert!(a.exact_div(&g).is_some());
        assert!(b.exact_div(&g).is_some());
        assert!(g.exact_div(&normalize_primitive(&g0)).is_some());
    }
}
