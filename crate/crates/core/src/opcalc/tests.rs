use super::*;
use crate::macdonald::{delta_gen_op, delta_series, nabla_op, DeltaSeriesKind, DeltaVariant};
use crate::qtcoeff::{parse_rat, QtRat, UvPoly};
use crate::symfunc::{partitions_of, plethysm, Alphabet, Basis, Partition, SymFunc};

const N: usize = 4;
const V: u16 = 3;

fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec())
}

fn p_gen(parts: &[u32]) -> SymFunc {
    SymFunc::gen(Basis::PowerSum, &part(parts), N, V)
}

fn id_op() -> GradedOperator {
    GradedOperator::identity(N, V)
}

#[test]
fn compose_with_identity() {
    let a = hk_skew(2, N, V);
    assert_eq!(id_op().compose(&a), a);
    let nabla = nabla_op(false, N, V);
    let prod = nabla_op(true, N, V).compose(&nabla);
    assert!(prod.mismatches(&id_op(), N as i64, N as i64).is_empty());
}

#[test]
fn tau_series_applies_as_translation() {
    let tau = tau_series(TauDirection::Forward, N, V);
    // tau_u p_1 = p_1 + u
    let p1 = p_gen(&[1]);
    let expected = p1.add(
        &SymFunc::one(Basis::PowerSum, N, V).scale_uv(&UvPoly::monomial(1, 0, QtRat::one(), V)),
    );
    assert_eq!(tau.apply(&p1), expected);

    // tau_u h_2 = h_2 + u h_1 + u^2
    let h2 = SymFunc::gen(Basis::Homogeneous, &part(&[2]), N, V).to_basis(Basis::PowerSum);
    let h1 = SymFunc::gen(Basis::Homogeneous, &part(&[1]), N, V).to_basis(Basis::PowerSum);
    let expected = h2
        .add(&h1.scale_uv(&UvPoly::monomial(1, 0, QtRat::one(), V)))
        .add(
            &SymFunc::one(Basis::PowerSum, N, V)
                .scale_uv(&UvPoly::monomial(2, 0, QtRat::one(), V)),
        );
    assert_eq!(tau.apply(&h2), expected);

    // cross-route: the series application agrees with plethysm at X + u
    for f in [p_gen(&[2, 1]), h2] {
        let via_plethysm = plethysm(&f, &Alphabet::x().plus_unit(QtRat::one(), 1, 0, 0));
        assert_eq!(tau.apply(&f), via_plethysm.expect_scalar());
    }
}

#[test]
fn tau_inverse_is_a_series_inverse() {
    let tau = tau_series(TauDirection::Forward, N, V);
    let tau_inv = tau_series(TauDirection::Inverse, N, V);
    let prod = tau.compose(&tau_inv);
    assert!(prod.mismatches(&OperatorSeries::identity(N, V)).is_empty());
    // and against generic geometric inversion
    let generic = tau.invert_geometric();
    assert!(generic.mismatches(&tau_inv).is_empty());
}

#[test]
fn tau_series_convolution_coefficient() {
    // coefficient of u^2 in tau_u . tau_u is sum_{k+l=2} h_k^perp h_l^perp
    let tau = tau_series(TauDirection::Forward, N, V);
    let sq = tau.compose(&tau);
    let mut expected = GradedOperator::zero(N, V);
    for k in 0..=2usize {
        expected = expected.add(&hk_skew(k, N, V).compose(&hk_skew(2 - k, N, V)));
    }
    assert!(sq
        .coeff(2, 0)
        .mismatches(&expected, N as i64, N as i64)
        .is_empty());
}

#[test]
fn skew_coefficients_commute() {
    for k in 0..=2usize {
        for l in 0..=3usize {
            let a = hk_skew(k, N, V).compose(&hk_skew(l, N, V));
            let b = hk_skew(l, N, V).compose(&hk_skew(k, N, V));
            assert!(a.mismatches(&b, N as i64, N as i64).is_empty());
        }
    }
}

#[test]
fn taustar_tau_examples() {
    let st = tau_star_tau_op(N, V);
    let one = SymFunc::one(Basis::PowerSum, N, V);
    // applied to 1: pExp[-X/M] truncated, degree-0 part 1
    let image = st.apply(&one);
    assert_eq!(image.coeff(&Partition::empty()), UvPoly::one(V));
    let inv_m = QtRat::m_const().inverse().unwrap();
    // degree-1 part: -p_1/M
    assert_eq!(
        image.coeff(&part(&[1])),
        UvPoly::constant(-&inv_m, V)
    );

    // applied to p_1: pExp[-X/M] (p_1 + 1)
    let p1 = p_gen(&[1]);
    let lhs = st.apply(&p1);
    let pexp_part = st.apply(&one);
    let rhs = pexp_part.multiply(&p1.add(&one));
    assert_eq!(lhs, rhs);

    // inverse composed with itself
    let st_inv = tau_star_tau_inverse(N, V);
    assert!(st
        .compose(&st_inv)
        .mismatches(&id_op(), N as i64, N as i64)
        .is_empty());
    assert!(st_inv
        .compose(&st)
        .mismatches(&id_op(), N as i64, N as i64)
        .is_empty());
}

#[test]
fn d_op_on_one_gives_signed_elementaries() {
    for z_n in -2i64..=(N as i64) {
        let d = d_op(z_n, N, V);
        let image = d.apply(&SymFunc::one(Basis::PowerSum, N, V));
        if z_n < 0 {
            assert!(image.is_zero(), "D_{z_n}(1)");
        } else {
            let sign = if z_n % 2 == 0 { 1 } else { -1 };
            let ek = SymFunc::gen(Basis::Elementary, &Partition::single(z_n as u32), N, V)
                .to_basis(Basis::PowerSum)
                .scale(&QtRat::from_int(sign));
            assert_eq!(image, ek, "D_{z_n}(1)");
        }
    }
}

#[test]
fn d_op_is_homogeneous() {
    for z_n in [-2i64, -1, 0, 1, 2] {
        let d = d_op(z_n, N, V);
        assert!(d.shift_profile().into_iter().all(|s| s == z_n));
    }
}

#[test]
fn d_zero_on_p1_matches_direct_expansion() {
    // direct expansion: the z^0 coefficient of (p_1 + M/z)(1 - e_1 z + ...)
    // is p_1 - M e_1 = (1 - M) p_1
    let d0 = d_op(0, N, V);
    let p1 = p_gen(&[1]);
    let expected = p1.scale(&(&QtRat::one() - &QtRat::m_const()));
    assert_eq!(d0.apply(&p1), expected);
}

#[test]
fn tau_conjugate_of_d_n() {
    // tau_u D_n tau_u^{-1} = D_n - u D_{n-1}
    let tau = tau_series(TauDirection::Forward, N, V);
    let tau_inv = tau_series(TauDirection::Inverse, N, V);
    for z_n in -1i64..=2 {
        let mut dn_series = OperatorSeries::zero(N, V);
        dn_series.set_coeff(0, 0, d_op(z_n, N, V));
        let conj = tau.compose(&dn_series).compose(&tau_inv);
        let mut expected = OperatorSeries::zero(N, V);
        expected.set_coeff(0, 0, d_op(z_n, N, V));
        expected.set_coeff(1, 0, d_op(z_n - 1, N, V).neg());
        assert!(conj.mismatches(&expected).is_empty(), "n = {z_n}");
    }
}

#[test]
fn adjoint_examples() {
    // Hall adjoint of multiplication by h_k is h_k^perp
    for k in 1..=2usize {
        let hk = SymFunc::gen(Basis::Homogeneous, &Partition::single(k as u32), N, V);
        let m = mult_op(&hk, N, V);
        let adj = adjoint(&m, Pairing::Hall);
        assert!(adj
            .mismatches(&hk_skew(k, N, V), N as i64, N as i64)
            .is_empty());
    }

    // star norms on power sums: z_lambda prod(-(1-q^l)(1-t^l))
    let w1 = Pairing::Star.norm(&part(&[1]));
    assert_eq!(w1, parse_rat("-(1 - q)*(1 - t)").unwrap());
    let w2 = Pairing::Star.norm(&part(&[2]));
    assert_eq!(w2, parse_rat("-2*(1 - q^2)*(1 - t^2)").unwrap());
    let w11 = Pairing::Star.norm(&part(&[1, 1]));
    assert_eq!(w11, parse_rat("2*((1 - q)*(1 - t))^2").unwrap());

    // involution and contravariance in both pairings
    for pairing in [Pairing::Hall, Pairing::Star] {
        let a = d_op(1, N, V);
        let b = hk_skew(2, N, V);
        assert_eq!(adjoint(&adjoint(&a, pairing), pairing), a);
        let ab = a.compose(&b).with_window(DegreeWindow::full(N));
        let lhs = adjoint(&ab, pairing);
        let rhs = adjoint(&b, pairing).compose(&adjoint(&a, pairing));
        assert!(lhs.mismatches(&rhs, N as i64, N as i64).is_empty());
    }
}

#[test]
fn s_inverse_of_identity_and_d_n() {
    // S^{-1}(identity) = identity
    assert!(defining_relation_mismatches(&id_op(), &id_op(), N, V).is_empty());

    // S^{-1}(D_n) = -D_{n-1} for -2 <= n <= 3 (space permitting)
    for z_n in -2i64..=(N as i64 - 1) {
        let l = d_op(z_n, N, V);
        let candidate = d_op(z_n - 1, N, V).neg();
        let ms = defining_relation_mismatches(&l, &candidate, N, V);
        assert!(ms.is_empty(), "S^{{-1}}(D_{z_n}), {} mismatches", ms.len());
    }

    // a wrong sign is caught
    let l = d_op(1, N, V);
    let wrong = d_op(0, N, V);
    assert!(!defining_relation_mismatches(&l, &wrong, N, V).is_empty());
}

#[test]
fn s_inverse_is_multiplicative_on_d_words() {
    for a in 0i64..=2 {
        for b in 0i64..=2 {
            if a + b >= N as i64 {
                continue;
            }
            let l = d_op(a, N, V).compose(&d_op(b, N, V));
            let candidate = d_op(a - 1, N, V).compose(&d_op(b - 1, N, V));
            let ms = defining_relation_mismatches(&l, &candidate, N, V);
            assert!(ms.is_empty(), "S^{{-1}}(D_{a} D_{b})");
        }
    }
}

#[test]
fn s_inverse_homogeneous_matches_conjugated_skew() {
    // S^{-1}(Delta'_{e_1}) at cell (0,1) moves to (1,1) with value
    // nabla^{-1} h_1^perp nabla
    let l = delta_gen_op(1, true, DeltaVariant::Prime, N, V).neg();
    let got = s_inverse_homogeneous(&l, -1, "w11", N, V).unwrap();
    let expected = n_conj(&hk_skew(1, N, V), ConjDirection::Inverse, N, V).neg();
    assert!(got
        .mismatches(&expected, got.window().max_input_degree, N as i64)
        .is_empty());
}

#[test]
fn n_conj_examples() {
    let nabla = nabla_op(false, N, V);
    // N^{-1}(nabla) = nabla
    let conj = n_conj(&nabla, ConjDirection::Inverse, N, V);
    assert!(conj.mismatches(&nabla, N as i64, N as i64).is_empty());

    // N^{-1}(Delta_v') = Delta_v' (operators commute; u-exponent 0)
    let dvp = delta_series(DeltaSeriesKind::DeltaVPrime, N, V);
    let moved = n_conj_series(&dvp, ConjDirection::Inverse, N, V);
    assert!(moved.mismatches(&dvp).is_empty());

    // N^{-1}(tau_u) has coefficient nabla^{-1} h_k^perp nabla at (k,k)
    let tau = tau_series(TauDirection::Forward, N, V);
    let moved = n_conj_series(&tau, ConjDirection::Inverse, N, V);
    for k in 0..=V {
        let expected = n_conj(&hk_skew(k as usize, N, V), ConjDirection::Inverse, N, V);
        assert!(moved
            .coeff(k, k)
            .mismatches(&expected, N as i64, N as i64)
            .is_empty());
        // off-diagonal cells are absent
        for j in 0..=V {
            if j != k {
                assert!(moved.coeff(k, j).is_zero());
            }
        }
    }
}

#[test]
fn series_equal_detects_faults() {
    let tau = tau_series(TauDirection::Forward, N, V);
    assert!(tau.mismatches(&tau).is_empty());

    // perturb exactly one block entry
    let mut faulty = tau.clone();
    let mut op = faulty.coeff(1, 0);
    let mut block = op.block(1, 0).unwrap().clone();
    block[(0, 0)] = &block[(0, 0)] + &UvPoly::one(V);
    op.set_block(1, 0, block);
    faulty.set_coeff(1, 0, op);
    let ms = tau.mismatches(&faulty);
    assert_eq!(ms.len(), 1);
    assert_eq!((ms[0].u_exp, ms[0].v_exp), (1, 0));
    assert_eq!(ms[0].source, part(&[1]));

    // Delta_v . Delta_v^{-1} vs identity: empty
    let dv = delta_series(DeltaSeriesKind::DeltaV, N, V);
    let dvi = delta_series(DeltaSeriesKind::DeltaVInverse, N, V);
    assert!(dv
        .compose(&dvi)
        .mismatches(&OperatorSeries::identity(N, V))
        .is_empty());
}

#[test]
fn window_bookkeeping_shrinks_under_composition() {
    let raising = d_op(2, N, V); // max_raise 2, full window
    let lowering = hk_skew(1, N, V);
    let composed = lowering.compose(&raising);
    assert_eq!(composed.window().max_input_degree, N as i64 - 2);
    let w = DegreeWindow { max_input_degree: 2 };
    let capped = raising.clone().with_window(w);
    assert_eq!(
        lowering.compose(&capped).window().max_input_degree,
        2
    );
    assert_eq!(
        capped.compose(&lowering).window().max_input_degree,
        2
    );
}
