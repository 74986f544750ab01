//! Values computed once with independent tools (numpy eigensolves, mpmath
//! hypergeometric functions, a 50-digit Heun power series) and frozen here.

use monopole_spectra::angular::{small_d, WignerIndex};
use monopole_spectra::mixing::mixing_problem;
use monopole_spectra::specfun::{gauss_2f1, heun_local, kummer_1f1, HeunParams};
use monopole_spectra::spectra::{
    flat_coulomb, flat_oscillator, lob_minj_coulomb, lob_minj_oscillator, lob_nomonopole_coulomb, poschl_teller_form,
};
use monopole_spectra::{Channel, HalfInt, MonopoleCharge};

fn h(s: &str) -> HalfInt {
    s.parse().unwrap()
}

fn k(s: &str) -> MonopoleCharge {
    MonopoleCharge::new(h(s))
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn mixing_roots_against_dense_eigensolve() {
    // numpy.linalg.eigvalsh of the 3x3 matrix
    let cases: [(&str, &str, [f64; 3], [f64; 3]); 4] = [
        (
            "2",
            "1",
            [0.6843339003252226, 2.451919449711528, 5.36374664996325],
            [0.7722687611705497, 1.770206796620752, 2.813230040297006],
        ),
        (
            "5/2",
            "3/2",
            [1.0945270879815634, 3.1693589543055642, 6.486113957712872],
            [1.0617471549399815, 2.06684980250328, 3.136238154387821],
        ),
        (
            "7",
            "3",
            [16.988977810570137, 23.454270318093556, 31.056751871336303],
            [5.350466273822991, 6.367207630193448, 7.39705665059284],
        ),
        (
            "9/2",
            "1/2",
            [7.770185894208792, 12.247455206414067, 17.73235889937714],
            [3.4737100785560067, 4.474425636475846, 5.476179197342921],
        ),
    ];
    for (j, kk, a, l) in cases {
        let mp = mixing_problem(h(j), k(kk)).unwrap();
        for i in 0..3 {
            close(mp.roots.a[i], a[i], 1e-12);
            close(mp.roots.l[i], l[i], 1e-12);
        }
    }
}

#[test]
fn flat_coulomb_branches() {
    let want = [
        [-0.159188188032081, -0.0650577953324154, -0.0351370057752797, -0.0219543314412641],
        [-0.0651546810905445, -0.0351754498587853, -0.021973315455607, -0.0150171406503407],
        [-0.0343861848066985, -0.0215822524006397, -0.0147956819151245, -0.010771195267083],
    ];
    for (b, row) in want.iter().enumerate() {
        for (n, &e) in row.iter().enumerate() {
            let lv = flat_coulomb(1.0, 1.0, h("2"), k("1"), n as u32, Channel::BranchA(b as u8 + 1)).unwrap();
            assert!(lv.admissible);
            close(lv.energy, e, 1e-13);
        }
    }
}

#[test]
fn flat_oscillator_quantization_form() {
    let want = [2.27226876117055, 3.27020679662075, 4.31323004029701];
    for (b, &e0) in want.iter().enumerate() {
        for n in 0..4u32 {
            let lv = flat_oscillator(1.0, 1.0, h("2"), k("1"), n, Channel::BranchA(b as u8 + 1)).unwrap();
            close(lv.energy, e0 + 2.0 * f64::from(n), 1e-13);
        }
    }
}

#[test]
fn lobachevsky_minimum_j_coulomb() {
    let lv = lob_minj_coulomb(0.1, 10.0, k("1"), 0).unwrap();
    assert!(lv.admissible);
    close(lv.epsilon_rel.unwrap(), 9.8999947932868594, 1e-14);
    close(lv.meta.big_n.unwrap(), 0.98989794855663562, 1e-15);
    // decay exponents -0.749 and -1.335: not bound
    for n in [1, 2] {
        let lv = lob_minj_coulomb(0.1, 10.0, k("1"), n).unwrap();
        assert!(!lv.admissible, "n = {n}");
    }
    close(
        lob_minj_coulomb(0.1, 10.0, k("1"), 1).unwrap().epsilon_rel.unwrap(),
        9.7871547223459874,
        1e-14,
    );
}

#[test]
fn lobachevsky_minimum_j_oscillator() {
    let pt10 = [3.5523431780746365];
    let pt100 = [13.768738295875589, 28.793722690376375, 39.818707084877161, 46.843691479377946];
    for (kosc, want) in [(10.0, &pt10[..]), (100.0, &pt100[..])] {
        for (n, &e) in want.iter().enumerate() {
            let lv = lob_minj_oscillator(kosc, 1.0, k("1"), n as u32).unwrap();
            assert!(lv.admissible);
            close(lv.energy, e, 1e-13);
            close(poschl_teller_form(kosc, 1.0, n as u32), e, 1e-13);
        }
    }
    assert!(!lob_minj_oscillator(10.0, 1.0, k("1"), 1).unwrap().admissible);
    assert!(!lob_minj_oscillator(100.0, 1.0, k("1"), 5).unwrap().admissible);
}

#[test]
fn lobachevsky_no_monopole_coulomb() {
    let want = [-50.5, -14.5, -50.0 / 9.0 - 4.5];
    for (n, &e) in want.iter().enumerate() {
        let lv = lob_nomonopole_coulomb(10.0, 1.0, h("0"), n as u32, Channel::ParityOdd).unwrap();
        assert!(lv.admissible);
        close(lv.energy, e, 1e-13);
    }
    assert!(!lob_nomonopole_coulomb(10.0, 1.0, h("0"), 3, Channel::ParityOdd).unwrap().admissible);
}

#[test]
fn hypergeometric_values() {
    close(kummer_1f1(-3.0, 2.5, 1.7).unwrap(), -0.17391746031746030616, 1e-14);
    close(kummer_1f1(0.7, 1.3, -2.2).unwrap(), 0.39472088766459797529, 1e-13);
    close(gauss_2f1(-4.0, 3.5, 1.5, 0.3).unwrap(), -0.16757999999999999654, 1e-14);
    close(gauss_2f1(0.3, 0.7, 1.9, 0.6).unwrap(), 1.089464800785896136, 1e-13);
    close(gauss_2f1(1.2, -0.4, 2.6, -0.7).unwrap(), 1.115892238721081868, 1e-13);
}

#[test]
fn heun_local_values() {
    let sets = [
        ((1.5, 0.7, -0.3, 1.1, -0.2, 0.4), [0.83757016485140110452, 1.185917939061059759]),
        ((6.0, 3.2, -1.9, 2.5, 5.8, 1.3), [1.2575228673661973485, 2.1488156552494360531]),
    ];
    for ((gamma, delta, epsilon, lambda, beta, q), want) in sets {
        let p = HeunParams {
            gamma,
            delta,
            epsilon,
            lambda,
            beta,
            q,
        };
        close(heun_local(&p, 0.5).unwrap(), want[0], 1e-13);
        close(heun_local(&p, -0.8).unwrap(), want[1], 1e-12);
    }
}

#[test]
fn textbook_small_d() {
    let t = 0.9_f64;
    let d = |j: &str, a: &str, b: &str| small_d(WignerIndex::new(h(j), h(a), h(b)).unwrap(), t).unwrap();
    close(d("1/2", "1/2", "1/2"), (t / 2.0).cos(), 1e-14);
    close(d("1", "1", "1"), (1.0 + t.cos()) / 2.0, 1e-14);
    close(d("1", "1", "0"), -t.sin() / 2f64.sqrt(), 1e-14);
    close(d("2", "0", "0"), 1.5 * t.cos().powi(2) - 0.5, 1e-14);
}
