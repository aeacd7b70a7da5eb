use super::*;
use crate::opcalc::OperatorSeries;
use crate::qtcoeff::qt_arith;
use num::{BigInt, One};

const N: usize = 4;
const V: u16 = 3;

fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec())
}

fn rat(s: &str) -> QtRat {
    parse_rat(s).unwrap()
}

#[test]
fn cell_stats_examples() {
    let empty = cell_stats(&Partition::empty());
    assert!(empty.b_poly.is_zero());
    let s21 = cell_stats(&part(&[2, 1]));
    assert_eq!(QtRat::from_poly(s21.b_poly.clone()), rat("1 + q + t"));
    assert_eq!((s21.n_stat, s21.nprime_stat), (1, 1));
    let s3 = cell_stats(&part(&[3]));
    assert_eq!(QtRat::from_poly(s3.b_poly.clone()), rat("1 + q + q^2"));
    assert_eq!((s3.n_stat, s3.nprime_stat), (0, 3));
}

/// Oracle for small degrees, independent of the production solver: build
/// the constraint rows by running plethysm on each Schur generator and
/// eliminate by hand over coefficient vectors.
fn oracle_htilde(d: usize) -> Vec<Vec<QtRat>> {
    let table = partitions_of(d);
    let dim = table.list.len();
    // columns of s_mu[X(c-1)] in schur coordinates, via the plethysm engine
    let twist_cols = |use_t: bool| -> Vec<Vec<QtRat>> {
        (0..dim)
            .map(|mi| {
                let s_mu = SymFunc::gen(Basis::Schur, &table.list[mi], d, 1);
                let c = if use_t {
                    &QtRat::t() - &QtRat::one()
                } else {
                    &QtRat::q() - &QtRat::one()
                };
                let img = plethysm(&s_mu, &Alphabet::empty().plus_x(c))
                    .expect_scalar()
                    .to_basis(Basis::Schur);
                table
                    .list
                    .iter()
                    .map(|mu| {
                        img.coeff(mu)
                            .as_constant()
                            .cloned()
                            .unwrap_or_else(QtRat::zero)
                    })
                    .collect()
            })
            .collect()
    };
    let tq = twist_cols(false);
    let tt = twist_cols(true);
    let mut result = Vec::new();
    for lambda in table.list.iter() {
        let conj = lambda.conjugate();
        // rows of the homogeneous system
        let mut rows: Vec<Vec<QtRat>> = Vec::new();
        for (mi, mu) in table.list.iter().enumerate() {
            if !dominance_leq(mu, &conj).unwrap() {
                rows.push((0..dim).map(|c| tq[c][mi].clone()).collect());
            }
            if !dominance_leq(mu, lambda).unwrap() {
                rows.push((0..dim).map(|c| tt[c][mi].clone()).collect());
            }
        }
        // solve by elimination with the normalization c_0 = 1
        let mut solution = vec![QtRat::zero(); dim];
        solution[0] = QtRat::one();
        // forward substitution: unknowns x_1..x_{dim-1}; rows give
        // sum_c a_c x_c = 0. Use naive Gaussian elimination on the
        // (dim-1)-unknown inhomogeneous system.
        let mut a: Vec<Vec<QtRat>> = rows
            .iter()
            .map(|r| r[1..].to_vec())
            .collect();
        let mut b: Vec<QtRat> = rows.iter().map(|r| -&r[0]).collect();
        let unknowns = dim - 1;
        let mut row = 0;
        for col in 0..unknowns {
            let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
                panic!("oracle system underdetermined at degree {d}");
            };
            a.swap(row, p);
            b.swap(row, p);
            let inv = a[row][col].inverse().unwrap();
            for x in a[row].iter_mut() {
                *x = &*x * &inv;
            }
            b[row] = &b[row] * &inv;
            for r in 0..a.len() {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for cc in 0..unknowns {
                        a[r][cc] = &a[r][cc] - &(&f * &a[row][cc]);
                    }
                    b[r] = &b[r] - &(&f * &b[row]);
                }
            }
            row += 1;
        }
        for (r, bb) in b.iter().enumerate().skip(row) {
            assert!(a[r].iter().all(|x| x.is_zero()) && bb.is_zero());
        }
        for col in 0..unknowns {
            solution[col + 1] = b[col].clone();
        }
        result.push(solution);
    }
    result
}

#[test]
fn htilde_degree_one() {
    let t = htilde_table(1);
    assert!(t.to_schur[(0, 0)].is_one());
}

#[test]
fn htilde_degree_two_matches_oracle_and_frozen_values() {
    let t = htilde_table(2);
    // frozen: H_(2) = s_2 + q s_11, H_(1,1) = s_2 + t s_11
    assert!(t.to_schur[(0, 0)].is_one());
    assert_eq!(t.to_schur[(0, 1)], QtRat::q());
    assert!(t.to_schur[(1, 0)].is_one());
    assert_eq!(t.to_schur[(1, 1)], QtRat::t());
    let oracle = oracle_htilde(2);
    for (li, row) in oracle.iter().enumerate() {
        for (mi, val) in row.iter().enumerate() {
            assert_eq!(&t.to_schur[(li, mi)], val);
        }
    }
}

#[test]
fn htilde_degree_three_matches_oracle_and_frozen_values() {
    let t = htilde_table(3);
    // partition order: (3), (2,1), (1,1,1)
    // frozen rows: H_(3) = s3 + (q+q^2) s21 + q^3 s111
    //              H_(2,1) = s3 + (q+t) s21 + q t s111
    //              H_(1,1,1) = s3 + (t+t^2) s21 + t^3 s111
    let expected = [
        ["1", "q + q^2", "q^3"],
        ["1", "q + t", "q*t"],
        ["1", "t + t^2", "t^3"],
    ];
    for (li, row) in expected.iter().enumerate() {
        for (mi, s) in row.iter().enumerate() {
            assert_eq!(t.to_schur[(li, mi)], rat(s), "entry ({li},{mi})");
        }
    }
    let oracle = oracle_htilde(3);
    for (li, row) in oracle.iter().enumerate() {
        for (mi, val) in row.iter().enumerate() {
            assert_eq!(&t.to_schur[(li, mi)], val);
        }
    }
}

#[test]
fn htilde_invariants_up_to_degree_five() {
    for d in 0..=5usize {
        let t = htilde_table(d);
        let table = partitions_of(d);
        let dim = table.list.len();
        assert!(t.to_schur.mul(&t.from_schur).is_identity());
        for li in 0..dim {
            // normalization <H, s_(d)> = 1
            assert!(t.to_schur[(li, 0)].is_one(), "normalization at degree {d}");
        }
        // q <-> t swap against conjugation
        for (li, lambda) in table.list.iter().enumerate() {
            let ci = table.index[&lambda.conjugate()];
            for mi in 0..dim {
                assert_eq!(
                    t.to_schur[(li, mi)].swap_qt(),
                    t.to_schur[(ci, mi)],
                    "symmetry at degree {d}"
                );
            }
        }
        // specialization: <H_lambda, p_1^d> at q=t=1 equals d!
        for lambda in table.list.iter() {
            let h = htilde_symfunc(lambda, d, 1);
            let p1d = SymFunc::gen(
                Basis::PowerSum,
                &Partition::new(vec![1; d]),
                d,
                1,
            );
            let pairing = h.hall_pair(&p1d);
            let c = pairing
                .as_constant()
                .cloned()
                .unwrap_or_else(QtRat::zero);
            let at_one = c.eval_at_one().unwrap();
            let mut fact = BigInt::one();
            for k in 1..=d {
                fact *= BigInt::from(k);
            }
            assert_eq!(at_one, num::BigRational::from_integer(fact));
        }
    }
}

#[test]
fn delta_operator_examples() {
    // Delta_{e_1} H_(2,1) = (1+q+t) H_(2,1)
    let h21 = to_basis_full(&htilde_symfunc(&part(&[2, 1]), N, V), Basis::PowerSum);
    let op = delta_gen_op(1, true, DeltaVariant::Plain, N, V);
    assert_eq!(op.apply(&h21), h21.scale(&rat("1 + q + t")));

    // Delta'_{e_1} H_(1) = (1 - 1/M) H_(1)
    let h1 = to_basis_full(&htilde_symfunc(&part(&[1]), N, V), Basis::PowerSum);
    let dp = delta_gen_op(1, true, DeltaVariant::Prime, N, V);
    let inv_m = QtRat::m_const().inverse().unwrap();
    assert_eq!(dp.apply(&h1), h1.scale(&(&QtRat::one() - &inv_m)));

    // Delta_{e_k}(1) = e_k[0]: zero for k >= 1, identity for k = 0
    let one = SymFunc::one(Basis::PowerSum, N, V);
    assert_eq!(
        delta_gen_op(0, true, DeltaVariant::Plain, N, V).apply(&one),
        one
    );
    assert!(delta_gen_op(2, true, DeltaVariant::Plain, N, V)
        .apply(&one)
        .is_zero());
}

#[test]
fn delta_eigenvalue_matches_cell_stats() {
    for d in 0..=N {
        for lambda in partitions_of(d).list.iter() {
            let e1 = SymFunc::gen(Basis::Elementary, &Partition::single(1), N, V);
            let eig = delta_eigenvalue(&e1, lambda, DeltaVariant::Plain);
            let b = QtRat::from_poly(cell_stats(lambda).b_poly.clone());
            assert_eq!(
                eig.as_constant().cloned().unwrap_or_else(QtRat::zero),
                b
            );
        }
    }
}

#[test]
fn nabla_examples() {
    let nabla = nabla_op(false, N, V);
    let s1 = SymFunc::gen(Basis::Schur, &part(&[1]), N, V).to_basis(Basis::PowerSum);
    assert_eq!(nabla.apply(&s1), s1.neg());

    let h2 = to_basis_full(&htilde_symfunc(&part(&[2]), N, V), Basis::PowerSum);
    assert_eq!(nabla.apply(&h2), h2.scale(&QtRat::q()));

    let id = nabla_op(true, N, V).compose(&nabla);
    assert!(id
        .mismatches(&GradedOperator::identity(N, V), N as i64, N as i64)
        .is_empty());
}

#[test]
fn diagonal_operators_commute() {
    let a = delta_gen_op(2, true, DeltaVariant::Plain, N, V);
    let b = delta_gen_op(1, false, DeltaVariant::Prime, N, V);
    let nabla = nabla_op(false, N, V);
    assert!(a
        .compose(&b)
        .mismatches(&b.compose(&a), N as i64, N as i64)
        .is_empty());
    assert!(nabla
        .compose(&a)
        .mismatches(&a.compose(&nabla), N as i64, N as i64)
        .is_empty());
}

#[test]
fn delta_series_examples() {
    // Delta_v H_(1) = (1 - v) H_(1)
    let dv = delta_series(DeltaSeriesKind::DeltaV, N, V);
    let h1 = to_basis_full(&htilde_symfunc(&part(&[1]), N, V), Basis::PowerSum);
    let image = dv.apply(&h1);
    let expected = h1.scale_uv(&{
        let mut p = UvPoly::one(V);
        p.add_term((0, 1), &QtRat::from_int(-1));
        p
    });
    assert_eq!(image, expected);

    // Delta_v . Delta_v^{-1} = identity series
    let dvi = delta_series(DeltaSeriesKind::DeltaVInverse, N, V);
    let prod = dv.compose(&dvi);
    assert!(prod
        .mismatches(&OperatorSeries::identity(N, V))
        .is_empty());

    // Delta_v' = pExp[v/M] Delta_v coefficientwise
    let dvp = delta_series(DeltaSeriesKind::DeltaVPrime, N, V);
    let inv_m = QtRat::m_const().inverse().unwrap();
    let mut scalars = std::collections::BTreeMap::new();
    for k in 0..=V {
        let hk = SymFunc::gen(Basis::Homogeneous, &Partition::single(k as u32), N, V);
        scalars.insert((0u16, k), scalar_pleth(&hk, inv_m.clone()));
    }
    let alt = dv.scale_scalar_series(&scalars);
    assert!(dvp.mismatches(&alt).is_empty());
}

#[test]
fn eigenvalue_products_for_delta_v() {
    // Delta_v H_lambda = prod over cells (1 - v q^c t^r) H_lambda
    let dv = delta_series(DeltaSeriesKind::DeltaV, N, V);
    for d in 0..=3usize {
        for lambda in partitions_of(d).list.iter() {
            let h = to_basis_full(&htilde_symfunc(lambda, N, V), Basis::PowerSum);
            let mut prod = UvPoly::one(V);
            for (c, r) in lambda.cells() {
                let mut factor = UvPoly::one(V);
                factor.add_term((0, 1), &(-&QtRat::monomial(c, r, 1)));
                prod = &prod * &factor;
            }
            assert_eq!(dv.apply(&h), h.scale_uv(&prod), "lambda = {lambda}");
        }
    }
}

#[test]
fn cache_format_round_trip_and_tamper() {
    let t = compute_htilde_table(3);
    let s = table_to_string(&t);
    assert!(s.starts_with("QSF1 degree=3 basis=schur order=revlex\n"));
    let back = table_from_str(3, &s).unwrap();
    assert_eq!(back.to_schur, t.to_schur);

    // tampering with one coefficient is detected as a changed value
    let tampered = s.replace("2,1 : 2,1 : q + t", "2,1 : 2,1 : q + 2*t");
    assert_ne!(s, tampered);
    let bad = table_from_str(3, &tampered).unwrap();
    assert_ne!(bad.to_schur, t.to_schur);

    // structural corruption is an error naming the line
    let broken = s.replace("3 : 2,1", "3 ; 2,1");
    let err = table_from_str(3, &broken).unwrap_err();
    assert!(err.contains("line"), "{err}");
}

#[test]
fn to_basis_full_round_trip() {
    let f = htilde_symfunc(&part(&[2, 1]), N, V)
        .add(&htilde_symfunc(&part(&[1]), N, V).scale(&QtRat::t()));
    let ht = to_basis_full(&f, Basis::Htilde);
    assert_eq!(ht.coeff(&part(&[2, 1])), UvPoly::one(V));
    assert_eq!(
        ht.coeff(&part(&[1])),
        UvPoly::constant(QtRat::t(), V)
    );
    let back = to_basis_full(&ht, Basis::Schur);
    assert_eq!(back, f);
}

#[test]
fn qt_arith_entry_point() {
    // spec-level smoke test of the op wrapper
    let a = rat("(1)/(1 - q)");
    let b = rat("(1)/(1 - t)");
    assert_eq!(
        qt_arith(&a, &b, crate::qtcoeff::QtOp::Add).unwrap(),
        rat("(2 - q - t)/((1 - q)*(1 - t))")
    );
}

use crate::opcalc::GradedOperator;
