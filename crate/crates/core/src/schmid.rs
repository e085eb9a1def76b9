//! The first-order operator D F(g) = sum_i P[(X_i F)(g) (x) conj(X_i)] on
//! sections of the bottom-layer K-type bundle, its contragredient twin, and
//! the two-variable versions acting leg by leg on kernels.
//!
//! Derivatives are taken exactly through the module action when a section
//! carries one, and by central differences otherwise.

use crate::error::{Error, Result};
use crate::ktype::isotypic_projector_of;
use crate::linalg::{cplx, CMat, CVec, C64, ZERO};
use crate::penrose::haar_quadrature;
use crate::repmodel::{
    compact_irrep, group_exp, su11_p1, su11_p2, CompactIrrep, GroupElement, KElement, MatrixGroup,
};

/// Default step for central differences.
pub const DEFAULT_H: f64 = 1e-3;

/// How directional derivatives of sections are evaluated.
#[derive(Clone, Copy, Debug)]
pub enum DerivativeMode {
    /// (F(g exp(hX)) - F(g exp(-hX))) / 2h, O(h^2) accurate.
    CentralDifference(f64),
    /// Uses the section's exact derivative; fails if it has none.
    Exact,
}

type EvalFn<'a> = Box<dyn Fn(&GroupElement) -> Result<CVec> + 'a>;
type DerivFn<'a> = Box<dyn Fn(&GroupElement, &CMat) -> Result<CVec> + 'a>;

/// A smooth section of the homogeneous bundle attached to a K-type: a
/// function G -> V with F(g k) = tau(k)^{-1} F(g). The witness `tau` is the
/// U(1) weight of the K-action on V (scalar bottom layers).
pub struct BundleSection<'a> {
    pub eval: EvalFn<'a>,
    /// Exact right-invariant derivative (X F)(g) for X in the real form.
    pub exact_derivative: Option<DerivFn<'a>>,
    pub tau: CompactIrrep,
    pub dim_v: usize,
    pub tolerance: f64,
}

impl<'a> BundleSection<'a> {
    pub fn value(&self, g: &GroupElement) -> Result<CVec> {
        (self.eval)(g)
    }

    /// Directional derivative along a real-form matrix direction.
    pub fn derivative(&self, g: &GroupElement, x: &CMat, mode: DerivativeMode) -> Result<CVec> {
        match mode {
            DerivativeMode::Exact => match &self.exact_derivative {
                Some(d) => d(g, x),
                None => Err(Error::Argument(
                    "section provides no exact derivative; use central differences".into(),
                )),
            },
            DerivativeMode::CentralDifference(h) => lie_derivative(self, g, x, h),
        }
    }

    /// Max residual of F(g k) = tau(k)^{-1} F(g) over the given samples,
    /// with k the torus element of the listed angle.
    pub fn equivariance_residual(&self, samples: &[(GroupElement, f64)]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (g, theta) in samples {
            let right = g.mul(&GroupElement::torus(g.group, *theta));
            let lhs = self.value(&right)?;
            let tau_inv = self.tau.matrix(&KElement::U1 { theta: -theta })?[(0, 0)];
            let rhs = self.value(g)?.map(|z| z * tau_inv);
            worst = worst.max(crate::linalg::max_abs_vec(&(lhs - rhs)));
        }
        Ok(worst)
    }
}

/// Central-difference right derivative of a section.
pub fn lie_derivative(f: &BundleSection, g: &GroupElement, x: &CMat, h: f64) -> Result<CVec> {
    if h <= 0.0 {
        return Err(Error::Argument("step must be positive".into()));
    }
    let plus = g.mul(&group_exp(g.group, x, h)?);
    let minus = g.mul(&group_exp(g.group, x, -h)?);
    let fp = f.value(&plus)?;
    let fm = f.value(&minus)?;
    Ok((fp - fm).map(|z| z / cplx(2.0 * h, 0.0)))
}

/// Orthonormal basis of the noncompact part p of the real form, with
/// respect to the trace form (which realizes the normalized invariant
/// Hermitian pairing on matrices).
pub fn orthonormal_p_basis(group: MatrixGroup) -> Result<Vec<CMat>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match group {
        MatrixGroup::Su11 => Ok(vec![su11_p1().scale(s), su11_p2().scale(s)]),
        MatrixGroup::Su21 => {
            let mut basis = Vec::new();
            for col in [2usize] {
                for row in [0usize, 1] {
                    for im in [false, true] {
                        let mut x = CMat::zeros(3, 3);
                        let v = if im { cplx(0.0, s) } else { cplx(s, 0.0) };
                        x[(row, col)] = v;
                        x[(col, row)] = v.conj();
                        basis.push(x);
                    }
                }
            }
            Ok(basis)
        }
        MatrixGroup::Su2 => Err(Error::Unsupported(
            "compact form has no noncompact directions".into(),
        )),
    }
}

/// Conjugation of p with respect to the real form: sigma(X) = -J X^* J.
/// On coordinates in a real basis of p this is entrywise conjugation.
pub fn conj_in_p(group: MatrixGroup, x: &CMat) -> CMat {
    let j = group.form();
    -(&j * x.adjoint() * &j)
}

/// Cartan involution on matrices, theta(X) = J X J; p is its -1 eigenspace.
pub fn theta_involution(group: MatrixGroup, x: &CMat) -> CMat {
    let j = group.form();
    &j * x * &j
}

/// Which transformation law the operator acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    /// Sections of the bottom-layer bundle (weight mu).
    Primal,
    /// Sections of the contragredient bundle (weight -mu).
    Dual,
}

/// The assembled operator: an orthonormal p-basis together with the
/// K-isotypic projector onto the targets inside V (x) p.
pub struct SchmidOperator {
    pub group: MatrixGroup,
    pub side: Side,
    /// U(1) weight of the section's K-type (mu for primal, -mu for dual).
    pub tau_weight: i64,
    pub p_basis: Vec<CMat>,
    pub proj: CMat,
    pub dim_v: usize,
}

impl SchmidOperator {
    /// Operator on weight-mu sections for the su(1,1) instance. The target
    /// inside V (x) p is the weight mu - 2 line (the single V_mu^- type).
    pub fn su11_primal(mu_weight: i64) -> Result<SchmidOperator> {
        SchmidOperator::su11_build(Side::Primal, mu_weight)
    }

    /// Contragredient operator on weight (-mu) sections; the target is the
    /// dual of the V_mu^- type, weight -(mu - 2).
    pub fn su11_dual(mu_weight: i64) -> Result<SchmidOperator> {
        SchmidOperator::su11_build(Side::Dual, mu_weight)
    }

    /// Operator attached to a parabolic's bottom layer: reads the minimal
    /// K-type weight off the parabolic and builds the requested side.
    pub fn for_parabolic(
        rd: &crate::rootdata::RootDatum,
        pq: &crate::parabolic::ThetaStableParabolic,
        side: Side,
    ) -> Result<SchmidOperator> {
        if rd.instance != crate::rootdata::Instance::Su11 {
            return Err(Error::Unsupported(format!(
                "no section model for instance `{}`",
                rd.instance.id()
            )));
        }
        let mu = crate::parabolic::minimal_k_type_weight(pq)?;
        let label = crate::ktype::k_irrep_label(rd, &mu)?;
        match side {
            Side::Primal => SchmidOperator::su11_primal(label.weight),
            Side::Dual => SchmidOperator::su11_dual(label.weight),
        }
    }

    fn su11_build(side: Side, mu_weight: i64) -> Result<SchmidOperator> {
        if mu_weight < 2 {
            return Err(Error::Parameter(format!(
                "bottom-layer weight must be >= 2, got {mu_weight}"
            )));
        }
        let group = MatrixGroup::Su11;
        let p_basis = orthonormal_p_basis(group)?;
        let ad = ad_on_p(group, p_basis.clone());
        let (sec_weight, target_weight) = match side {
            Side::Primal => (mu_weight, mu_weight - 2),
            Side::Dual => (-mu_weight, -(mu_weight - 2)),
        };
        // rho_W(k) = tau_sec(k) (x) Ad(k) on V (x) p, projected onto the
        // target K-type by character quadrature.
        let degree = mu_weight.abs() + 2;
        let quad = haar_quadrature("u1", degree)?;
        let sec_irrep = compact_irrep("u1", sec_weight)?;
        let rho = |k: &KElement| -> Result<CMat> {
            let tau = sec_irrep.matrix(k)?;
            let theta = match k {
                KElement::U1 { theta } => *theta,
                _ => return Err(Error::Argument("expected a U(1) node".into())),
            };
            Ok(tau.kronecker(&ad(theta)))
        };
        let target = compact_irrep("u1", target_weight)?;
        let proj = isotypic_projector_of(&rho, &target, &quad)?;
        Ok(SchmidOperator {
            group,
            side,
            tau_weight: sec_weight,
            p_basis,
            proj,
            dim_v: 1,
        })
    }

    /// D F(g) with the operator's own orthonormal basis.
    pub fn apply(&self, f: &BundleSection, g: &GroupElement, mode: DerivativeMode) -> Result<CVec> {
        let identity: Vec<Vec<C64>> = (0..self.p_basis.len())
            .map(|i| {
                (0..self.p_basis.len())
                    .map(|j| if i == j { cplx(1.0, 0.0) } else { ZERO })
                    .collect()
            })
            .collect();
        self.apply_with_basis(f, g, mode, &identity)
    }

    /// D F(g) computed in a re-expressed orthonormal basis of p. Each row of
    /// `coords` gives the coefficients of one basis vector Y_j = sum_i c_i X_i
    /// in the operator's fixed basis; derivatives are taken along the actual
    /// directions Y_j and the conjugate slot uses conj(c). Rows with complex
    /// coefficients leave the real form, so they need the exact mode.
    pub fn apply_with_basis(
        &self,
        f: &BundleSection,
        g: &GroupElement,
        mode: DerivativeMode,
        coords: &[Vec<C64>],
    ) -> Result<CVec> {
        let dim_p = self.p_basis.len();
        if f.dim_v != self.dim_v {
            return Err(Error::Argument(
                "section and operator fiber dimensions differ".into(),
            ));
        }
        let mut tensor = CVec::zeros(self.dim_v * dim_p);
        for row in coords {
            if row.len() != dim_p {
                return Err(Error::Argument("basis row has wrong length".into()));
            }
            let real_row = row.iter().all(|c| c.im == 0.0);
            if !real_row && matches!(mode, DerivativeMode::CentralDifference(_)) {
                return Err(Error::Argument(
                    "complex basis coefficients leave the real form; use the exact mode".into(),
                ));
            }
            let mut direction = CMat::zeros(self.p_basis[0].nrows(), self.p_basis[0].ncols());
            for (c, x) in row.iter().zip(&self.p_basis) {
                if *c != ZERO {
                    direction += x.map(|z| z * *c);
                }
            }
            let deriv = f.derivative(g, &direction, mode)?;
            for a in 0..self.dim_v {
                for i in 0..dim_p {
                    tensor[a * dim_p + i] += deriv[a] * row[i].conj();
                }
            }
        }
        Ok(&self.proj * tensor)
    }

    /// Norm of D F(g), the residual reported by the verification suites.
    pub fn residual(
        &self,
        f: &BundleSection,
        g: &GroupElement,
        mode: DerivativeMode,
    ) -> Result<f64> {
        Ok(crate::linalg::max_abs_vec(&self.apply(f, g, mode)?))
    }
}

// The struct needs dim_p only during construction; keep it private.
#[allow(dead_code)]
impl SchmidOperator {
    fn dim_p(&self) -> usize {
        self.p_basis.len()
    }
}

/// Adjoint action of the torus on p in the supplied orthonormal basis,
/// computed through Frobenius coordinates.
fn ad_on_p(group: MatrixGroup, basis: Vec<CMat>) -> impl Fn(f64) -> CMat {
    move |theta: f64| -> CMat {
        let dim = basis.len();
        let k = GroupElement::torus(group, theta);
        let kinv = k.inverse();
        let mut m = CMat::zeros(dim, dim);
        for (i, x) in basis.iter().enumerate() {
            let conjugated = &k.matrix * x * &kinv.matrix;
            for (j, y) in basis.iter().enumerate() {
                // Orthonormal for the Frobenius pairing tr(U V^*).
                m[(j, i)] = (&conjugated * y.adjoint()).trace();
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Two-variable sections
// ---------------------------------------------------------------------------

type Eval2Fn<'a> = Box<dyn Fn(&GroupElement, &GroupElement) -> Result<C64> + 'a>;
type Deriv2Fn<'a> = Box<dyn Fn(&GroupElement, &GroupElement, &CMat) -> Result<C64> + 'a>;

/// Scalar-valued section of the product bundle over G x G: transforms with
/// weight mu in the first leg and weight -mu in the second.
pub struct TwoVariableSection<'a> {
    pub eval: Eval2Fn<'a>,
    pub exact_derivative_left: Option<Deriv2Fn<'a>>,
    pub exact_derivative_right: Option<Deriv2Fn<'a>>,
    pub mu_weight: i64,
}

/// Which leg the operator differentiates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Leg {
    Left,
    Right,
}

/// Applies the one-leg operator to a two-variable section: the primal
/// operator in the first leg (weight mu there), the contragredient one in
/// the second (weight -mu there), the other leg frozen.
pub fn two_variable_apply(
    f2: &TwoVariableSection,
    leg: Leg,
    x: &GroupElement,
    y: &GroupElement,
    primal: &SchmidOperator,
    dual: &SchmidOperator,
    mode: DerivativeMode,
) -> Result<CVec> {
    match leg {
        Leg::Left => {
            let frozen = y.clone();
            let section = BundleSection {
                eval: Box::new(move |g: &GroupElement| {
                    Ok(CVec::from_element(1, (f2.eval)(g, &frozen)?))
                }),
                exact_derivative: f2.exact_derivative_left.as_ref().map(|d| {
                    let frozen = y.clone();
                    Box::new(move |g: &GroupElement, xdir: &CMat| {
                        Ok(CVec::from_element(1, d(g, &frozen, xdir)?))
                    }) as DerivFn
                }),
                tau: compact_irrep("u1", f2.mu_weight)?,
                dim_v: 1,
                tolerance: 1e-8,
            };
            primal.apply(&section, x, mode)
        }
        Leg::Right => {
            let frozen = x.clone();
            let section = BundleSection {
                eval: Box::new(move |g: &GroupElement| {
                    Ok(CVec::from_element(1, (f2.eval)(&frozen, g)?))
                }),
                exact_derivative: f2.exact_derivative_right.as_ref().map(|d| {
                    let frozen = x.clone();
                    Box::new(move |g: &GroupElement, xdir: &CMat| {
                        Ok(CVec::from_element(1, d(&frozen, g, xdir)?))
                    }) as DerivFn
                }),
                tau: compact_irrep("u1", -f2.mu_weight)?,
                dim_v: 1,
                tolerance: 1e-8,
            };
            dual.apply(&section, y, mode)
        }
    }
}
