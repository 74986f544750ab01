//! The 3×3 mixing matrix of the flat-space radial system, its characteristic
//! cubic, trigonometric roots, eigenvector matrix `S` and effective angular
//! momenta; plus the 2×2 parity split of the no-monopole case.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quantum::{couplings, Couplings, HalfInt, MonopoleCharge};

type Q = Ratio<i128>;

const ARCCOS_CLAMP: f64 = 1e-14;
const DENOM_GUARD: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingMatrix {
    pub m: [[f64; 3]; 3],
}

impl MixingMatrix {
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Diagonal and off-diagonal of the (symmetric, tridiagonal) matrix.
    pub fn tridiagonal(&self) -> ([f64; 3], [f64; 2]) {
        (
            [self.m[0][0], self.m[1][1], self.m[2][2]],
            [self.m[0][1], self.m[1][2]],
        )
    }

    fn mul(&self, s: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|l| self.m[i][l] * s[l][j]).sum();
            }
        }
        out
    }
}

pub fn build_matrix(c: f64, d: f64) -> MixingMatrix {
    let r2 = std::f64::consts::SQRT_2;
    MixingMatrix {
        m: [
            [2.0 * c * c, r2 * c, 0.0],
            [r2 * c, c * c + d * d + 1.0, r2 * d],
            [0.0, r2 * d, 2.0 * d * d],
        ],
    }
}

/// Coefficients of `A³ + rA² + sA + t`, the depressed cubic `B³ + pB + q`
/// (with `A = B − r/3`) and the discriminant `(p/3)³ + (q/2)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicInvariants {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub p: f64,
    pub q: f64,
    pub discriminant: f64,
    /// `p` from the closed form in `j` and `k` alone.
    pub p_closed: f64,
    /// `q` from the closed form in `j` and `k` alone.
    pub q_closed: f64,
}

fn q_to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Invariants of the mixing matrix for `(j, k)`.
///
/// The squared couplings are rational (`c² = (j+k)(j−k+1)/4`), and every
/// invariant is a polynomial in the squared matrix entries, so trace, minors
/// and determinant are evaluated in exact rational arithmetic. The reduced
/// coefficients are then compared with their closed forms.
pub fn cubic_invariants(j: HalfInt, k: MonopoleCharge) -> Result<CubicInvariants> {
    // Validates admissibility and j >= |k|.
    couplings(j, k)?;
    let (j2, k2) = (i128::from(j.twice()), i128::from(k.0.twice()));
    let c2 = Q::new((j2 + k2) * (j2 - k2 + 2), 16);
    let d2 = Q::new((j2 - k2) * (j2 + k2 + 2), 16);

    let (e11, e22, e33) = (qi(2) * c2, c2 + d2 + qi(1), qi(2) * d2);
    // Squares of the off-diagonal entries √2·c and √2·d.
    let (x2, y2) = (qi(2) * c2, qi(2) * d2);

    let trace = e11 + e22 + e33;
    let minors = (e11 * e22 - x2) + e11 * e33 + (e22 * e33 - y2);
    let det = e11 * (e22 * e33 - y2) - x2 * e33;

    let (r, s, t) = (-trace, minors, -det);
    let p = (qi(3) * s - r * r) / qi(3);
    let q = qi(2) * r * r * r / qi(27) - r * s / qi(3) + t;
    let disc = (p / qi(3)) * (p / qi(3)) * (p / qi(3)) + (q / qi(2)) * (q / qi(2));

    let jj = Q::new(j2 * (j2 + 2), 4);
    let kk = Q::new(k2 * k2, 4);
    let p_closed = -(jj - Q::new(3, 4) * kk + Q::new(1, 3));
    let q_closed = -(jj / qi(3) + Q::new(2, 27));

    let inv = CubicInvariants {
        r: q_to_f64(r),
        s: q_to_f64(s),
        t: q_to_f64(t),
        p: q_to_f64(p),
        q: q_to_f64(q),
        discriminant: q_to_f64(disc),
        p_closed: q_to_f64(p_closed),
        q_closed: q_to_f64(q_closed),
    };
    if (inv.p - inv.p_closed).abs() > CLOSED_FORM_TOL || (inv.q - inv.q_closed).abs() > CLOSED_FORM_TOL {
        return Err(Error::Consistency(format!(
            "cubic invariants for j = {j}, k = {k}: matrix p = {}, closed p = {}; matrix q = {}, closed q = {}",
            inv.p, inv.p_closed, inv.q, inv.q_closed
        )));
    }
    Ok(inv)
}

/// Floating-point invariants straight from matrix entries, for arbitrary `c`, `d`.
pub fn invariants_from_matrix(m: &MixingMatrix) -> CubicInvariants {
    let a = &m.m;
    let r = -m.trace();
    let s = (a[0][0] * a[1][1] - a[0][1] * a[1][0])
        + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
        + (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let t = -det;
    let p = (3.0 * s - r * r) / 3.0;
    let q = 2.0 * r * r * r / 27.0 - r * s / 3.0 + t;
    CubicInvariants {
        r,
        s,
        t,
        p,
        q,
        discriminant: (p / 3.0).powi(3) + (q / 2.0).powi(2),
        p_closed: f64::NAN,
        q_closed: f64::NAN,
    }
}

/// Sorted roots `A1 ≤ A2 ≤ A3` and the matching `L = −½ + sqrt(¼ + 2A)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootTriple {
    pub a: [f64; 3],
    pub l: [f64; 3],
}

impl RootTriple {
    pub fn sum(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.a.iter().product()
    }

    /// `(i)` is 1-based, matching the branch labels.
    pub fn branch(&self, i: u8) -> Result<(f64, f64)> {
        match i {
            1..=3 => Ok((self.a[usize::from(i) - 1], self.l[usize::from(i) - 1])),
            _ => Err(Error::Unsupported(format!("branch index {i} (expected 1, 2 or 3)"))),
        }
    }
}

/// Regular branch of `L(L+1) = 2A`.
pub fn effective_l(a: f64) -> f64 {
    -0.5 + (0.25 + 2.0 * a).sqrt()
}

/// Three real roots of the cubic in trigonometric form.
pub fn roots(inv: &CubicInvariants) -> Result<RootTriple> {
    let (p, q) = (inv.p, inv.q);
    if !(inv.discriminant < 0.0) || !(p < 0.0) {
        return Err(Error::Domain(format!(
            "trigonometric roots need D < 0 (got D = {}, p = {p})",
            inv.discriminant
        )));
    }
    let mut arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
    if arg.abs() > 1.0 {
        if arg.abs() - 1.0 > ARCCOS_CLAMP {
            return Err(Error::Domain(format!("arccos argument {arg} outside [-1, 1]")));
        }
        arg = arg.signum();
    }
    let amp = 2.0 * (-p / 3.0).sqrt();
    let phi = arg.acos() / 3.0;
    let mut a = [0.0; 3];
    for (i, v) in a.iter_mut().enumerate() {
        *v = amp * (phi + i as f64 * 2.0 * PI / 3.0).cos() - inv.r / 3.0;
    }
    a.sort_by(|x, y| x.total_cmp(y));
    let l = a.map(|ai| effective_l(ai.max(0.0)));
    Ok(RootTriple { a, l })
}

/// Eigenvector matrix with unit diagonal; column `i` belongs to `A_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformMatrix {
    pub s: [[f64; 3]; 3],
    /// `max |Ā S − S diag(A)|`.
    pub residual: f64,
}

pub fn transform_matrix(c: f64, d: f64, roots: &RootTriple) -> Result<TransformMatrix> {
    let guard = |x: f64, what: &str, root: usize| -> Result<f64> {
        if x.abs() < DENOM_GUARD {
            Err(Error::Degenerate(format!(
                "{what} vanishes for root A{} = {}",
                root + 1,
                roots.a[root]
            )))
        } else {
            Ok(x)
        }
    };
    let r2 = std::f64::consts::SQRT_2;
    let [a1, a2, a3] = roots.a;
    let (cc, dd) = (2.0 * c * c, 2.0 * d * d);

    let c_g = guard(c, "c", 0)?;
    let s21 = -(cc - a1) / (r2 * c_g);
    let s31 = d * (cc - a1) / (c_g * guard(dd - a1, "2d² − A", 0)?);

    let s12 = -r2 * c / guard(cc - a2, "2c² − A", 1)?;
    let s32 = -r2 * d / guard(dd - a2, "2d² − A", 1)?;

    let d_g = guard(d, "d", 2)?;
    let s13 = c * (dd - a3) / (d_g * guard(cc - a3, "2c² − A", 2)?);
    let s23 = -(dd - a3) / (r2 * d_g);

    let s = [[1.0, s12, s13], [s21, 1.0, s23], [s31, s32, 1.0]];
    let m = build_matrix(c, d);
    let ms = m.mul(&s);
    let mut residual: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            residual = residual.max((ms[i][j] - s[i][j] * roots.a[j]).abs());
        }
    }
    Ok(TransformMatrix { s, residual })
}

/// Eigenvalues of the no-monopole parity block `[[0, ν], [2ν, 1]]` with
/// `ν² = j(j+1)/2`, returned as `[j + 1, −j]`.
pub fn parity_eigenvalues(j: HalfInt) -> Result<[f64; 2]> {
    if !j.is_integer() || j.twice() < 2 {
        return Err(Error::Domain(format!("parity split needs integer j >= 1, got {j}")));
    }
    let jv = j.value();
    let nu2 = jv * (jv + 1.0) / 2.0;
    // λ² − λ − 2ν² = 0; 1 + 8ν² = (2j+1)² is a perfect square, so this is exact.
    let root = (1.0 + 8.0 * nu2).sqrt();
    Ok([(1.0 + root) / 2.0, (1.0 - root) / 2.0])
}

/// Everything the flat-space branches need for one `(j, k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingProblem {
    pub j: HalfInt,
    pub k: MonopoleCharge,
    pub couplings: Couplings,
    pub matrix: MixingMatrix,
    pub invariants: CubicInvariants,
    pub roots: RootTriple,
    /// `None` at `j = |k|`, where one coupling vanishes and `S` is singular.
    pub transform: Option<TransformMatrix>,
    pub transform_note: Option<String>,
}

pub fn mixing_problem(j: HalfInt, k: MonopoleCharge) -> Result<MixingProblem> {
    let cp = couplings(j, k)?;
    let matrix = build_matrix(cp.c, cp.d);
    let invariants = cubic_invariants(j, k)?;
    let roots = roots(&invariants)?;
    let (transform, transform_note) = match transform_matrix(cp.c, cp.d, &roots) {
        Ok(t) => (Some(t), None),
        Err(Error::Degenerate(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    Ok(MixingProblem {
        j,
        k,
        couplings: cp,
        matrix,
        invariants,
        roots,
        transform,
        transform_note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn k(s: &str) -> MonopoleCharge {
        MonopoleCharge::new(h(s))
    }

    #[test]
    fn matrix_j2_k1() {
        let m = build_matrix(6f64.sqrt() / 2.0, 1.0);
        let want = [
            [3.0, 3f64.sqrt(), 0.0],
            [3f64.sqrt(), 3.5, 2f64.sqrt()],
            [0.0, 2f64.sqrt(), 2.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.m[i][j] - want[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn matrix_zero_couplings() {
        let m = build_matrix(0.0, 0.0);
        assert_eq!(m.m, [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        let m = build_matrix(1.3, 0.0);
        assert_eq!(m.m[2], [0.0, 0.0, 0.0]);
        assert_eq!(m.m[0][2], 0.0);
    }

    #[test]
    fn invariants_j2_k1() {
        let inv = cubic_invariants(h("2"), k("1")).unwrap();
        assert_eq!(inv.r, -8.5);
        assert_eq!(inv.s, 18.5);
        assert_eq!(inv.t, -9.0);
        assert!((inv.p - (-67.0 / 12.0)).abs() < 1e-14);
        assert!((inv.q - (-56.0 / 27.0)).abs() < 1e-14);
        assert!(inv.discriminant < 0.0);

        let fl = invariants_from_matrix(&build_matrix(6f64.sqrt() / 2.0, 1.0));
        assert!((fl.p - inv.p).abs() < 1e-12 && (fl.q - inv.q).abs() < 1e-12);
    }

    #[test]
    fn roots_j2_k1() {
        let inv = cubic_invariants(h("2"), k("1")).unwrap();
        let rt = roots(&inv).unwrap();
        let want = [0.6845, 2.4520, 5.3635];
        for (a, w) in rt.a.iter().zip(want) {
            assert!((a - w).abs() < 1e-3, "{a} vs {w}");
        }
        assert!((rt.sum() + inv.r).abs() < 1e-10);
        assert!((rt.product() + inv.t).abs() < 1e-10);
        for (a, l) in rt.a.iter().zip(rt.l) {
            assert!((l * (l + 1.0) - 2.0 * a).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_j_has_zero_root_and_singular_transform() {
        for (j, kk) in [("1", "1"), ("3/2", "-3/2"), ("1/2", "1/2")] {
            let p = mixing_problem(h(j), k(kk)).unwrap();
            assert!(p.roots.a[0].abs() < 1e-12, "{:?}", p.roots.a);
            assert!(p.transform.is_none());
        }
    }

    #[test]
    fn transform_residual_j2_k1() {
        let p = mixing_problem(h("2"), k("1")).unwrap();
        let t = p.transform.unwrap();
        assert!(t.residual < 1e-10);
        let c = p.couplings.c;
        let a1 = p.roots.a[0];
        assert!((t.s[1][0] + (2.0 * c * c - a1) / (2f64.sqrt() * c)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_transform_rejected() {
        let c: f64 = 1.2;
        let rt = RootTriple {
            a: [0.5, 2.0 * c * c, 7.0],
            l: [0.0; 3],
        };
        match transform_matrix(c, 1.0, &rt) {
            Err(Error::Degenerate(msg)) => assert!(msg.contains("A2")),
            other => panic!("expected degeneracy error, got {other:?}"),
        }
    }

    #[test]
    fn parity_pairs() {
        assert_eq!(parity_eigenvalues(h("1")).unwrap(), [2.0, -1.0]);
        assert_eq!(parity_eigenvalues(h("2")).unwrap(), [3.0, -2.0]);
        for j in 1..=10 {
            let [l1, l2] = parity_eigenvalues(HalfInt::from_int(j)).unwrap();
            let nu2 = f64::from(j * (j + 1)) / 2.0;
            assert_eq!(l1 * l1 - l1 - 2.0 * nu2, 0.0);
            assert_eq!(l2 * l2 - l2 - 2.0 * nu2, 0.0);
        }
        assert!(parity_eigenvalues(h("0")).is_err());
        assert!(parity_eigenvalues(h("3/2")).is_err());
    }

    #[test]
    fn no_monopole_branch_reproduces_l_equals_j() {
        // With k = 0 one eigenvalue of the mixing matrix is j(j+1)/2, i.e. L = j.
        for j in 1..=6 {
            let p = mixing_problem(HalfInt::from_int(j), MonopoleCharge::NONE).unwrap();
            assert!(
                p.roots.l.iter().any(|l| (l - f64::from(j)).abs() < 1e-10),
                "j = {j}: {:?}",
                p.roots.l
            );
        }
    }
}
