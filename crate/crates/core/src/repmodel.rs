//! Explicit matrix models: the ambient groups SU(1,1), SU(2,1), SU(2), the
//! weight-k holomorphic discrete series of SU(1,1) in its disk realization,
//! and the finite-dimensional irreducibles of U(1) and SU(2).
//!
//! The discrete series lives on power series in the unit disk with monomial
//! basis v_j = z^j, lowest K-weight k at j = 0 and `||v_0|| = 1`. The group
//! acts through the weight-k cocycle; expansion coefficients are produced by
//! a stable column recurrence so that the truncation error stays confined to
//! the top coefficients.

use crate::error::{Error, Result};
use crate::linalg::{cplx, max_abs, CMat, CVec, C64, I, ONE, ZERO};

/// Maximum contraction ratio |b / conj(a)| accepted by the truncated model.
pub const CONTRACTION_GUARD: f64 = 0.9;

/// Tolerance for group-membership invariants of matrix group elements.
pub const GROUP_TOL: f64 = 1e-12;

/// The matrix groups with a fixed invariant form J.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixGroup {
    /// 2x2, J = diag(1, -1).
    Su11,
    /// 3x3, J = diag(1, 1, -1).
    Su21,
    /// 2x2, J = I (compact).
    Su2,
}

impl MatrixGroup {
    pub fn dim(self) -> usize {
        match self {
            MatrixGroup::Su11 | MatrixGroup::Su2 => 2,
            MatrixGroup::Su21 => 3,
        }
    }

    /// The invariant form J preserved by the group.
    pub fn form(self) -> CMat {
        let n = self.dim();
        let mut j = CMat::identity(n, n);
        match self {
            MatrixGroup::Su11 => j[(1, 1)] = -ONE,
            MatrixGroup::Su21 => j[(2, 2)] = -ONE,
            MatrixGroup::Su2 => {}
        }
        j
    }

    pub fn from_instance_id(id: &str) -> Result<MatrixGroup> {
        match id {
            "su11" => Ok(MatrixGroup::Su11),
            "su21" => Ok(MatrixGroup::Su21),
            "su2-compact" => Ok(MatrixGroup::Su2),
            other => Err(Error::Config(format!(
                "no matrix model for instance `{other}`"
            ))),
        }
    }
}

/// Group element g with g^* J g = J and det g = 1.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: CMat,
    pub group: MatrixGroup,
}

impl GroupElement {
    pub fn identity(group: MatrixGroup) -> Self {
        let n = group.dim();
        GroupElement {
            matrix: CMat::identity(n, n),
            group,
        }
    }

    /// Wraps a matrix after checking the group invariants.
    pub fn new_checked(matrix: CMat, group: MatrixGroup) -> Result<Self> {
        let g = GroupElement { matrix, group };
        let (form_res, det_res) = g.invariant_residuals();
        if form_res > GROUP_TOL || det_res > GROUP_TOL {
            return Err(Error::Argument(format!(
                "matrix violates group invariants: form residual {form_res:.2e}, det residual {det_res:.2e}"
            )));
        }
        Ok(g)
    }

    /// (|| g^* J g - J ||_max, |det g - 1|).
    pub fn invariant_residuals(&self) -> (f64, f64) {
        let j = self.group.form();
        let form_res = max_abs(&(self.matrix.adjoint() * &j * &self.matrix - &j));
        let det_res = (self.matrix.determinant() - ONE).norm();
        (form_res, det_res)
    }

    /// Inverse through the form: g^{-1} = J g^* J.
    pub fn inverse(&self) -> GroupElement {
        let j = self.group.form();
        GroupElement {
            matrix: &j * self.matrix.adjoint() * &j,
            group: self.group,
        }
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.group, other.group);
        GroupElement {
            matrix: &self.matrix * &other.matrix,
            group: self.group,
        }
    }

    /// Torus element diag(e^{i theta}, e^{-i theta}) of SU(1,1) or SU(2).
    pub fn torus(group: MatrixGroup, theta: f64) -> GroupElement {
        assert_ne!(group, MatrixGroup::Su21);
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = cplx(theta.cos(), theta.sin());
        m[(1, 1)] = cplx(theta.cos(), -theta.sin());
        GroupElement { matrix: m, group }
    }
}

/// Checks that X lies in the real form: X^* J + J X = 0 and tr X = 0.
pub fn in_real_form(group: MatrixGroup, x: &CMat) -> bool {
    if x.nrows() != group.dim() || x.ncols() != group.dim() {
        return false;
    }
    let j = group.form();
    let res = max_abs(&(x.adjoint() * &j + &j * x));
    res < GROUP_TOL && x.trace().norm() < GROUP_TOL
}

/// One-parameter subgroup exp(tX) for X in the real form.
pub fn group_exp(group: MatrixGroup, x: &CMat, t: f64) -> Result<GroupElement> {
    if !in_real_form(group, x) {
        return Err(Error::Argument(
            "direction is not in the real form (needs X^* J + J X = 0 and trace 0)".into(),
        ));
    }
    let m = x.scale(t).exp();
    GroupElement::new_checked(m, group)
}

/// Standard su(1,1) basis matrices: K0 generates the maximal compact torus,
/// P1 and P2 span the noncompact directions (all in the real form).
pub fn su11_k0() -> CMat {
    CMat::from_row_slice(2, 2, &[I, ZERO, ZERO, -I])
}

pub fn su11_p1() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn su11_p2() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, I, -I, ZERO])
}

/// sl(2) triple in the complexification: H = diag(1,-1), E raising, F lowering.
pub fn sl2_h() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn sl2_e() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn sl2_f() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

// ---------------------------------------------------------------------------
// Compact group elements and irreducibles
// ---------------------------------------------------------------------------

/// A point of the compact group used for quadrature and equivariance tests.
#[derive(Clone, Debug)]
pub enum KElement {
    U1 { theta: f64 },
    Su2 { matrix: CMat },
}

impl KElement {
    /// SU(2) element from Euler angles z(alpha) y(beta) z(gamma).
    pub fn su2_euler(alpha: f64, beta: f64, gamma: f64) -> KElement {
        let z = |phi: f64| {
            CMat::from_row_slice(
                2,
                2,
                &[
                    cplx((phi / 2.0).cos(), -(phi / 2.0).sin()),
                    ZERO,
                    ZERO,
                    cplx((phi / 2.0).cos(), (phi / 2.0).sin()),
                ],
            )
        };
        let y = CMat::from_row_slice(
            2,
            2,
            &[
                cplx((beta / 2.0).cos(), 0.0),
                cplx(-(beta / 2.0).sin(), 0.0),
                cplx((beta / 2.0).sin(), 0.0),
                cplx((beta / 2.0).cos(), 0.0),
            ],
        );
        KElement::Su2 {
            matrix: z(alpha) * y * z(gamma),
        }
    }
}

/// Which compact group an irreducible belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KGroup {
    U1,
    Su2,
}

impl KGroup {
    pub fn from_id(id: &str) -> Result<KGroup> {
        match id {
            "u1" => Ok(KGroup::U1),
            "su2" => Ok(KGroup::Su2),
            other => Err(Error::Config(format!(
                "unsupported compact group `{other}`"
            ))),
        }
    }
}

/// Unitary irreducible of U(1) (any integer weight) or SU(2) (highest
/// weight m >= 0, dimension m + 1, realized on symmetric powers of the
/// defining representation in an orthonormal weight basis).
#[derive(Clone, Copy, Debug)]
pub struct CompactIrrep {
    pub group: KGroup,
    pub weight: i64,
}

/// Weight-basis model of the requested irreducible.
pub fn compact_irrep(k_id: &str, weight: i64) -> Result<CompactIrrep> {
    let group = KGroup::from_id(k_id)?;
    if group == KGroup::Su2 && weight < 0 {
        return Err(Error::Argument(format!(
            "SU(2) highest weight must be nonnegative, got {weight}"
        )));
    }
    Ok(CompactIrrep { group, weight })
}

impl CompactIrrep {
    pub fn dim(&self) -> usize {
        match self.group {
            KGroup::U1 => 1,
            KGroup::Su2 => (self.weight + 1) as usize,
        }
    }

    /// tau(k), unitary in the weight basis.
    pub fn matrix(&self, k: &KElement) -> Result<CMat> {
        match (self.group, k) {
            (KGroup::U1, KElement::U1 { theta }) => {
                let w = self.weight as f64;
                Ok(CMat::from_row_slice(
                    1,
                    1,
                    &[cplx((w * theta).cos(), (w * theta).sin())],
                ))
            }
            (KGroup::Su2, KElement::Su2 { matrix }) => Ok(sym_power(self.weight as usize, matrix)),
            _ => Err(Error::Argument(
                "group element does not match the irreducible's group".into(),
            )),
        }
    }

    /// The contragredient action k -> conj(tau(k)) in the dual basis.
    pub fn matrix_dual(&self, k: &KElement) -> Result<CMat> {
        Ok(self.matrix(k)?.map(|z| z.conj()))
    }

    pub fn character(&self, k: &KElement) -> Result<C64> {
        Ok(self.matrix(k)?.trace())
    }
}

/// Symmetric power Sym^m of a 2x2 matrix in the orthonormal monomial basis
/// u_r = sqrt(C(m,r)) x^{m-r} y^r, r = 0..m.
fn sym_power(m: usize, g: &CMat) -> CMat {
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let binom = binomial_row(m);
    let mut out = CMat::zeros(m + 1, m + 1);
    for r in 0..=m {
        // (a x + c y)^{m-r} (b x + d y)^r expanded in monomials x^{m-t} y^t.
        let mut coeffs = vec![ZERO; m + 1];
        let left = binomial_expand(m - r, a, c);
        let right = binomial_expand(r, b, d);
        for (i, li) in left.iter().enumerate() {
            for (j, rj) in right.iter().enumerate() {
                coeffs[i + j] += li * rj;
            }
        }
        for t in 0..=m {
            out[(t, r)] = coeffs[t] * cplx((binom[r] / binom[t]).sqrt(), 0.0);
        }
    }
    out
}

/// Coefficients of (p x + q y)^n in powers of y.
fn binomial_expand(n: usize, p: C64, q: C64) -> Vec<C64> {
    let binom = binomial_row(n);
    let mut out = vec![ZERO; n + 1];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut v = cplx(binom[i], 0.0);
        for _ in 0..(n - i) {
            v *= p;
        }
        for _ in 0..i {
            v *= q;
        }
        *slot = v;
    }
    out
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for i in 1..=n {
        row[i] = row[i - 1] * ((n - i + 1) as f64) / (i as f64);
    }
    row
}

// ---------------------------------------------------------------------------
// Truncated discrete-series model
// ---------------------------------------------------------------------------

/// K-finite truncation of the weight-k holomorphic discrete series of
/// SU(1,1): monomial basis v_j = z^j for j < N, K-weight k + 2j, squared
/// norms j!/(k)_j normalized so ||v_0|| = 1.
#[derive(Clone, Debug)]
pub struct TruncatedHCModule {
    pub k_param: i64,
    pub n_trunc: usize,
    pub basis_norms: Vec<f64>,
}

/// Builds the truncated discrete-series model.
pub fn ds_su11(k: i64, n_trunc: usize) -> Result<TruncatedHCModule> {
    if k < 2 {
        return Err(Error::Parameter(format!(
            "discrete series requires k >= 2, got {k}"
        )));
    }
    if n_trunc < 4 {
        return Err(Error::Parameter(format!(
            "truncation order must be at least 4, got {n_trunc}"
        )));
    }
    let mut basis_norms = Vec::with_capacity(n_trunc);
    let mut norm = 1.0;
    for j in 0..n_trunc {
        basis_norms.push(norm);
        norm *= (j as f64 + 1.0) / (k as f64 + j as f64);
    }
    Ok(TruncatedHCModule {
        k_param: k,
        n_trunc,
        basis_norms,
    })
}

/// Contraction ratio |b / conj(a)| of an SU(1,1) element; the truncated
/// expansion is accurate only below [`CONTRACTION_GUARD`].
pub fn contraction_ratio(g: &GroupElement) -> f64 {
    debug_assert_eq!(g.group, MatrixGroup::Su11);
    g.matrix[(0, 1)].norm() / g.matrix[(1, 1)].norm()
}

impl TruncatedHCModule {
    /// K-weight of the basis vector v_j.
    pub fn weight_of(&self, j: usize) -> i64 {
        self.k_param + 2 * (j as i64)
    }

    /// Inner product of coefficient vectors, linear in the first slot.
    pub fn inner(&self, u: &CVec, v: &CVec) -> C64 {
        let mut acc = ZERO;
        for j in 0..self.n_trunc {
            acc += u[j] * v[j].conj() * cplx(self.basis_norms[j], 0.0);
        }
        acc
    }

    pub fn norm(&self, u: &CVec) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// Matrix of dpi(X) for any X in sl(2,C) given as [[p, q], [r, -p]]:
    /// dpi = p dpi(H) + q dpi(E) + r dpi(F).
    pub fn dpi(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != 2 || x.ncols() != 2 {
            return Err(Error::Argument("sl(2) element must be 2x2".into()));
        }
        if x.trace().norm() > 1e-10 {
            return Err(Error::Argument("sl(2) element must be traceless".into()));
        }
        let (p, q, r) = (x[(0, 0)], x[(0, 1)], x[(1, 0)]);
        let n = self.n_trunc;
        let k = self.k_param as f64;
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            let jf = j as f64;
            // dpi(H) v_j = (k + 2j) v_j
            m[(j, j)] += p * cplx(k + 2.0 * jf, 0.0);
            // dpi(E) v_j = (k + j) v_{j+1}
            if j + 1 < n {
                m[(j + 1, j)] += q * cplx(k + jf, 0.0);
            }
            // dpi(F) v_j = -j v_{j-1}
            if j > 0 {
                m[(j - 1, j)] += r * cplx(-jf, 0.0);
            }
        }
        Ok(m)
    }

    fn guard(&self, g: &GroupElement) -> Result<(C64, C64)> {
        if g.group != MatrixGroup::Su11 {
            return Err(Error::Argument("module acts on SU(1,1) elements".into()));
        }
        let a = g.matrix[(0, 0)];
        let b = g.matrix[(0, 1)];
        let ratio = b.norm() / a.norm();
        if ratio >= CONTRACTION_GUARD {
            return Err(Error::Accuracy(format!(
                "contraction ratio {ratio:.3} >= {CONTRACTION_GUARD}; reduce the range or raise N"
            )));
        }
        Ok((a, b))
    }

    /// Coefficients of pi(g) v_0 = (conj(a) - b z)^{-k}.
    fn column_zero(&self, a: C64, b: C64) -> CVec {
        let n = self.n_trunc;
        let mut col = CVec::zeros(n);
        let abar = a.conj();
        let ratio = b / abar;
        let mut cur = abar.powi(-(self.k_param as i32));
        col[0] = cur;
        for t in 1..n {
            cur *= ratio * cplx((self.k_param as f64 - 1.0 + t as f64) / t as f64, 0.0);
            col[t] = cur;
        }
        col
    }

    /// Applies multiplication by (a z - conj(b)) / (conj(a) - b z) to a
    /// truncated coefficient vector: pi(g)(z f) = M (pi(g) f).
    fn mul_moebius(&self, a: C64, b: C64, c: &CVec) -> CVec {
        let n = self.n_trunc;
        let abar = a.conj();
        let bbar = b.conj();
        // numerator (a z - conj(b)) c(z), truncated
        let mut num = CVec::zeros(n);
        for t in 0..n {
            let mut v = -bbar * c[t];
            if t > 0 {
                v += a * c[t - 1];
            }
            num[t] = v;
        }
        // divide by (conj(a) - b z): forward substitution
        let mut out = CVec::zeros(n);
        let mut prev = ZERO;
        for t in 0..n {
            let v = (num[t] + b * prev) / abar;
            out[t] = v;
            prev = v;
        }
        out
    }

    /// Expansion of pi(g) v to N coefficients. Exact diagonal action for
    /// torus elements; guarded by the contraction ratio otherwise.
    pub fn apply_pi(&self, g: &GroupElement, v: &CVec) -> Result<CVec> {
        if v.len() != self.n_trunc {
            return Err(Error::Argument(format!(
                "coefficient vector has length {}, module truncation is {}",
                v.len(),
                self.n_trunc
            )));
        }
        let (a, b) = self.guard(g)?;
        if b.norm() == 0.0 {
            // pi(k) v_j = a^{k+2j} v_j with |a| = 1.
            let mut out = CVec::zeros(self.n_trunc);
            let base = a.powi(self.k_param as i32);
            let mut phase = base;
            for j in 0..self.n_trunc {
                out[j] = phase * v[j];
                phase *= a * a;
            }
            return Ok(out);
        }
        let top = match (0..self.n_trunc).rev().find(|&j| v[j] != ZERO) {
            Some(j) => j,
            None => return Ok(CVec::zeros(self.n_trunc)),
        };
        let mut acc = CVec::zeros(self.n_trunc);
        let mut col = self.column_zero(a, b);
        for j in 0..=top {
            if v[j] != ZERO {
                acc += col.scale_complex(v[j]);
            }
            if j < top {
                col = self.mul_moebius(a, b, &col);
            }
        }
        Ok(acc)
    }

    /// Full matrix of pi(g) on the truncated basis.
    pub fn pi_matrix(&self, g: &GroupElement) -> Result<CMat> {
        let n = self.n_trunc;
        let (a, b) = self.guard(g)?;
        let mut m = CMat::zeros(n, n);
        if b.norm() == 0.0 {
            let mut phase = a.powi(self.k_param as i32);
            for j in 0..n {
                m[(j, j)] = phase;
                phase *= a * a;
            }
            return Ok(m);
        }
        let mut col = self.column_zero(a, b);
        for j in 0..n {
            m.set_column(j, &col);
            if j + 1 < n {
                col = self.mul_moebius(a, b, &col);
            }
        }
        Ok(m)
    }

    /// Diagonal matrix of pi on the torus element of angle theta.
    pub fn pi_torus(&self, theta: f64) -> CMat {
        let n = self.n_trunc;
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            let w = self.weight_of(j) as f64;
            m[(j, j)] = cplx((w * theta).cos(), (w * theta).sin());
        }
        m
    }
}

trait ScaleComplex {
    fn scale_complex(&self, c: C64) -> CVec;
}

impl ScaleComplex for CVec {
    fn scale_complex(&self, c: C64) -> CVec {
        self.map(|z| z * c)
    }
}
