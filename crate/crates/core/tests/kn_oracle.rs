//! Independent route to `alpha_sj` and `d_sj`: expand the closed-form
//! `chi_0, chi_1, chi_2` around each pole by a discrete contour integral and
//! compare with the pole-expansion formulas used by `kn_evaluate`.

use commuting_ops::exact::{int, rat, Rational};
use commuting_ops::kncheck::{
    gamma_eval, gamma_equation_residual, kn_evaluate, search_branches, BigComplex, Formulas, KnConfig, KnData, Real,
};

const N: usize = 16;

fn cfg() -> KnConfig {
    KnConfig::with_digits(60)
}

/// `W(z) = 1 - 2 z^3 + c4 z^4 + z^6`.
fn w_squared(z: &BigComplex, c4: &BigComplex) -> BigComplex {
    let bits = z.bits();
    let z3 = z.powu(3);
    &(&(&BigComplex::from_int(1, bits) - &z3.scale_int(2)) + &(c4 * &z.powu(4))) + &z3.powu(2)
}

/// The root of `W(z)` nearest `w0`, which continues `w` off the pole.
fn w_near(z: &BigComplex, c4: &BigComplex, w0: &BigComplex) -> BigComplex {
    let r = w_squared(z, c4).sqrt();
    if (&r - w0).abs() > (&r + w0).abs() {
        -&r
    } else {
        r
    }
}

/// `(chi_0, chi_1, chi_2)` at `z` on the sheet whose `w` is near `w0`.
fn chi_at(d: &KnData, z: &BigComplex, c4: &BigComplex, w0: &BigComplex) -> [BigComplex; 3] {
    let bits = z.bits();
    let gam = &d.gamma[0];
    let gp = &d.gamma[1];
    let w = w_near(z, c4, w0);
    let mut chi0 = &d.tau0.div(&BigComplex::from_int(2, bits)) + &z.scale_int(2).recip();
    let mut chi1 = d.tau1.clone();
    let mut chi2 = BigComplex::zero(bits);
    let mut prod = BigComplex::from_int(1, bits);
    for s in 0..3 {
        let gs = &d.a[s] * gam;
        let gps = &d.a[s] * gp;
        let inv = (z - &gs).recip();
        chi2 = &(&chi2 - &(&gps * &inv)) - &gps.div(&gs);
        chi1 = &chi1 - &(&(&d.g[s] * &gps) * &inv);
        chi0 = &chi0 - &(&(&d.h[s] * &gps) * &inv);
        prod = &prod * &(z - &gs);
    }
    chi1 = &chi1 + &(&w * &d.h1).div(&prod.scale_int(2));
    let g3 = gam.powu(3);
    chi0 = &chi0 - &(&w * &(&g3 + &(z * &d.h0))).div(&(z * &prod).scale_int(2));
    [chi0, chi1, chi2]
}

/// `(alpha_sj, d_sj)` for `j = 0, 1, 2` on `sheet`, from the residue and the
/// constant term of `chi_j` at `gamma_s`. The trapezoid rule on `N` points
/// of radius `r` is exact up to `(r / rho)^N`, `rho` being the distance to the
/// nearest other singularity.
fn residue_route(d: &KnData, sheet: usize, eps: &Rational) -> ([BigComplex; 3], [BigComplex; 3]) {
    let bits = d.gamma[0].bits();
    let s = sheet % 3;
    let c4 = BigComplex::from_rational(&(-(eps * eps * eps * eps) / int(3888)), bits);
    let center = &d.a[s] * &d.gamma[0];
    let gps = &d.a[s] * &d.gamma[1];
    let w0 = &d.w[sheet];
    // e^(i pi / 8), a primitive 16th root of unity
    let omega = BigComplex::i(bits).fourth_root();
    let r = Real::from_rational(&rat(1, 1_000_000), bits);
    let mut step = BigComplex::from_real(r);
    let mut res = [BigComplex::zero(bits), BigComplex::zero(bits), BigComplex::zero(bits)];
    let mut cst = res.clone();
    for _ in 0..N {
        let z = &center + &step;
        let chi = chi_at(d, &z, &c4, w0);
        for j in 0..3 {
            res[j] = &res[j] + &(&chi[j] * &step);
            cst[j] = &cst[j] + &chi[j];
        }
        step = &step * &omega;
    }
    let n = BigComplex::from_int(N as i64, bits);
    let alpha = res.map(|v| -&v.div(&n).div(&gps));
    let dd = cst.map(|v| v.div(&n));
    (alpha, dd)
}

fn close(a: &BigComplex, b: &BigComplex, k: u32) -> bool {
    (a - b).abs().below_pow10(k)
}

fn evaluated(x: &Rational, config: &KnConfig) -> KnData {
    let br = search_branches(x, &cfg()).expect("branch search").branches;
    kn_evaluate(x, config, br).expect("evaluation")
}

#[test]
fn pole_expansions_match_contour_residues() {
    for x in [rat(3, 2), int(2), int(5)] {
        let d = evaluated(&x, &cfg());
        for sheet in 0..6 {
            let (alpha, dd) = residue_route(&d, sheet, &cfg().eps);
            for j in 0..3 {
                assert!(close(&alpha[j], &d.alpha[sheet][j], 45), "alpha[{sheet}][{j}] at x = {x}: diff 1e{:.1}", (&alpha[j] - &d.alpha[sheet][j]).abs().log10_abs());
                assert!(close(&dd[j], &d.d[sheet][j], 45), "d[{sheet}][{j}] at x = {x}");
            }
        }
    }
}

#[test]
fn transcribed_d_s1_disagrees_with_residues() {
    let mut config = cfg();
    config.formulas = Formulas::TRANSCRIBED;
    let d = evaluated(&int(2), &config);
    let (_, dd) = residue_route(&d, 1, &config.eps);
    assert!(!close(&dd[1], &d.d[1][1], 10));
}

#[test]
fn sigma_pairing() {
    // alpha_{s+3} is alpha_s with w negated, so the pair sums to twice the
    // w-free part: 2 H_s and 2 G_s.
    let d = evaluated(&int(3), &cfg());
    for s in 0..3 {
        assert!(close(&(&d.alpha[s][0] + &d.alpha[s + 3][0]), &d.h[s].scale_int(2), 50));
        assert!(close(&(&d.alpha[s][1] + &d.alpha[s + 3][1]), &d.g[s].scale_int(2), 50));
        assert!(close(&d.w[s], &-&d.w[s + 3], 50));
        assert!(close(&d.d[s][2], &d.d[s + 3][2], 50));
    }
    for row in &d.alpha {
        assert_eq!(row[2], BigComplex::from_int(1, row[2].bits()));
    }
}

#[test]
fn roots_of_unity() {
    let d = evaluated(&int(2), &cfg());
    let one = BigComplex::from_int(1, d.a[1].bits());
    assert!(close(&d.a[1].powu(3), &one, 60));
    assert!(close(&(&(&one + &d.a[1]) + &d.a[2]), &BigComplex::zero(one.bits()), 60));
}

#[test]
fn derivatives_agree_with_central_differences() {
    let config = cfg();
    let x = int(2);
    let d = evaluated(&x, &config);
    let h = rat(1, 10i64.pow(15));
    let plus = kn_evaluate(&(&x + &h), &config, d.branches).unwrap();
    let minus = kn_evaluate(&(&x - &h), &config, d.branches).unwrap();
    let two_h = BigComplex::from_rational(&(&h * int(2)), d.gamma[0].bits());
    for sheet in 0..6 {
        for j in 0..2 {
            let fd = (&plus.alpha[sheet][j] - &minus.alpha[sheet][j]).div(&two_h);
            // truncation error ~ h^2
            assert!(close(&fd, &d.alpha_prime[sheet][j], 25), "alpha'[{sheet}][{j}]");
        }
    }
}

#[test]
fn gamma_closed_form_oracle() {
    // At eps = -1: (1 - gamma^3)^2 = 1/(x^3 + 1)^2 = gamma'^(3/2), so
    // 1 - 2 gamma^3 + gamma^6 + eps gamma'^(3/2) vanishes.
    let eps = int(-1);
    let x = int(2);
    let g = gamma_eval(&x, &eps, 60).unwrap();
    let gp32 = &g[1] * &g[1].sqrt();
    let g3 = g[0].powu(3);
    let bits = g3.bits();
    let lhs = &(&(&BigComplex::from_int(1, bits) - &g3.scale_int(2)) + &g3.powu(2)) - &gp32;
    assert!(lhs.abs().below_pow10(50));
    let exact = BigComplex::from_rational(&rat(1, 81), bits);
    assert!(close(&(&BigComplex::from_int(1, bits) - &g3).powu(2), &exact, 55));
    assert!(gamma_equation_residual(&x, &eps, 60).unwrap().below_pow10(50));
}
