//! The generalized spherical kernel: the tau-spherical matrix function
//! Phi(g) = (1/d) E_mu pi(g) E_mu restricted to the bottom-layer isotypic,
//! the Hermitian Gram forms it induces on translated bottom-layer vectors,
//! and the comparison against the classical spherical-function series.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ktype::{k_irrep_label, k_type, KTypeDescriptor};
use crate::linalg::{cplx, CMat, CVec, C64, ONE, ZERO};
use crate::parabolic::{minimal_k_type_weight, ThetaStableParabolic};
use crate::repmodel::{contraction_ratio, GroupElement, MatrixGroup, TruncatedHCModule};
use crate::rootdata::RootDatum;
use crate::schmid::{BundleSection, TwoVariableSection};

/// The tau_mu-spherical kernel of a truncated module: everything needed to
/// evaluate Phi(g) = (1/d) E_mu pi(g) E_mu on the bottom layer H(mu).
pub struct SphericalKernel<'a> {
    pub module: &'a TruncatedHCModule,
    pub mu: KTypeDescriptor,
    /// Orthogonal projector onto the bottom-layer isotypic inside the
    /// truncated module.
    pub e_mu: CMat,
    /// dim H(mu).
    pub d: usize,
}

/// Builds the kernel after checking that the module's lowest K-type is the
/// parabolic's bottom layer, with multiplicity one.
pub fn build_kernel<'a>(
    module: &'a TruncatedHCModule,
    pq: &ThetaStableParabolic,
    rd: &RootDatum,
) -> Result<SphericalKernel<'a>> {
    let mu_weight = minimal_k_type_weight(pq)?;
    let mu = k_type(rd, &mu_weight)?;
    let label = k_irrep_label(rd, &mu_weight)?;
    if label.weight != module.k_param {
        return Err(Error::Consistency(format!(
            "bottom layer has K-weight {} but the module's lowest K-type is {}",
            label.weight, module.k_param
        )));
    }
    // Multiplicity one: the module's K-weights k + 2j are strictly
    // increasing, so only j = 0 carries the bottom weight.
    let n = module.n_trunc;
    let mut e_mu = CMat::zeros(n, n);
    e_mu[(0, 0)] = ONE;
    Ok(SphericalKernel {
        module,
        mu,
        e_mu,
        d: 1,
    })
}

impl<'a> SphericalKernel<'a> {
    /// Phi(g) as a d x d matrix on the orthonormal basis of H(mu).
    pub fn phi(&self, g: &GroupElement) -> Result<CMat> {
        let n = self.module.n_trunc;
        let mut v0 = CVec::zeros(n);
        v0[0] = ONE;
        let out = self.module.apply_pi(g, &v0)?;
        let value = self.module.inner(&out, &v0) / cplx(self.d as f64, 0.0);
        Ok(CMat::from_element(1, 1, value))
    }

    /// Scalar value of the kernel for d = 1 instances.
    pub fn phi_scalar(&self, g: &GroupElement) -> Result<C64> {
        Ok(self.phi(g)?[(0, 0)])
    }
}

/// F(x, y) = Phi(x^{-1} y); depends on the pair only through x^{-1} y.
pub fn kernel_eval(sk: &SphericalKernel, x: &GroupElement, y: &GroupElement) -> Result<CMat> {
    let g = x.inverse().mul(y);
    sk.phi(&g)
}

/// Gram matrix G_{(i,a),(j,b)} = <Phi(x_i^{-1} x_j) v_b, v_a> of translated
/// bottom-layer vectors, Hermitized deterministically after assembly.
pub fn gram_matrix(
    sk: &SphericalKernel,
    points: &[GroupElement],
    vectors: &[CVec],
) -> Result<CMat> {
    if vectors.iter().any(|v| v.len() != sk.d) {
        return Err(Error::Argument(format!(
            "Gram vectors must live in the {}-dimensional bottom layer",
            sk.d
        )));
    }
    let m = points.len() * vectors.len();
    let mut gram = CMat::zeros(m, m);
    for (i, xi) in points.iter().enumerate() {
        for (j, xj) in points.iter().enumerate() {
            let phi = kernel_eval(sk, xi, xj)?;
            for (a, va) in vectors.iter().enumerate() {
                for (b, vb) in vectors.iter().enumerate() {
                    let value = (va.adjoint() * &phi * vb)[(0, 0)];
                    gram[(i * vectors.len() + a, j * vectors.len() + b)] = value;
                }
            }
        }
    }
    let sym = (&gram + gram.adjoint()).map(|z| z / cplx(2.0, 0.0));
    Ok(sym)
}

/// Value of the independent series oracle together with the weighted tail
/// mass it could not account for. The defect bounds the truncation error
/// through unitarity: the expansion of pi(g) v_0 must have norm one.
#[derive(Clone, Copy, Debug)]
pub struct SeriesOracle {
    pub value: C64,
    pub truncation_defect: f64,
}

/// Independent evaluation of the discrete-series spherical function as a
/// truncated series: the coefficients of pi(g) v_0 are expanded by a direct
/// binomial recurrence at the stated truncation and paired against v_0 term
/// by term in the weighted monomial basis.
pub fn spherical_series_oracle(
    k_param: i64,
    trunc: usize,
    g: &GroupElement,
) -> Result<SeriesOracle> {
    if g.group != MatrixGroup::Su11 {
        return Err(Error::Unsupported(
            "series oracle is an SU(1,1) computation".into(),
        ));
    }
    let ratio = contraction_ratio(g);
    if ratio >= crate::repmodel::CONTRACTION_GUARD {
        return Err(Error::Accuracy(format!(
            "contraction ratio {ratio:.3} out of range for the series oracle"
        )));
    }
    let a = g.matrix[(0, 0)];
    let b = g.matrix[(0, 1)];
    let abar = a.conj();
    let scale = abar.powi(-(k_param as i32));
    // pi(g) v_0 = (conj(a) - b z)^{-k}: c_t = conj(a)^{-k} C(k-1+t, t) (b/conj(a))^t.
    // Only the constant term pairs with v_0; the others certify the norm.
    let mut cur = scale;
    let mut value = ZERO;
    let mut norm = 0.0;
    let mut basis_norm = 1.0;
    for t in 0..trunc {
        if t > 0 {
            cur = cur * (b / abar) * cplx((k_param as f64 - 1.0 + t as f64) / t as f64, 0.0);
        }
        if t == 0 {
            value = cur * cplx(basis_norm, 0.0);
        }
        norm += cur.norm_sqr() * basis_norm;
        basis_norm *= (t as f64 + 1.0) / (k_param as f64 + t as f64);
    }
    Ok(SeriesOracle {
        value,
        truncation_defect: (norm - 1.0).abs(),
    })
}

/// Max over samples of |Phi(g) - psi(g)| with psi the independent series
/// oracle at doubled truncation; the oracle's own truncation defect is
/// added so that the result bounds the true deviation.
pub fn flensted_jensen_residual(sk: &SphericalKernel, samples: &[GroupElement]) -> Result<f64> {
    if sk.d != 1 {
        return Err(Error::Unsupported(
            "spherical-function comparison needs a scalar bottom layer".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for g in samples {
        let lhs = sk.phi_scalar(g)?;
        let oracle = spherical_series_oracle(sk.module.k_param, 2 * sk.module.n_trunc, g)?;
        worst = worst.max((lhs - oracle.value).norm() + oracle.truncation_defect);
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Sections fed into the first-order operator
// ---------------------------------------------------------------------------

/// Matrix-coefficient section g -> E_mu pi(g^{-1}) v, the K-finite model of
/// a kernel leg. Carries the exact derivative through the module action.
pub fn matrix_coefficient_section<'a>(
    module: &'a TruncatedHCModule,
    v: CVec,
) -> Result<BundleSection<'a>> {
    matrix_coefficient_section_row(module, v, 0)
}

/// Coefficient of pi(g^{-1}) v against the basis vector v_row. Row 0 is the
/// bottom-layer section; higher rows transform with weight k + 2 row and
/// are not annihilated, which makes them useful probes for the operator's
/// algebraic identities.
pub fn matrix_coefficient_section_row<'a>(
    module: &'a TruncatedHCModule,
    v: CVec,
    row: usize,
) -> Result<BundleSection<'a>> {
    if v.len() != module.n_trunc {
        return Err(Error::Argument(
            "vector length does not match the truncation".into(),
        ));
    }
    if row >= module.n_trunc {
        return Err(Error::Argument("row index beyond the truncation".into()));
    }
    let tau = crate::repmodel::compact_irrep("u1", module.weight_of(row))?;
    let norm = cplx(module.basis_norms[row], 0.0);
    let v_eval = v.clone();
    let eval = move |g: &GroupElement| -> Result<CVec> {
        let u = module.apply_pi(&g.inverse(), &v_eval)?;
        Ok(CVec::from_element(1, u[row] * norm))
    };
    let v_deriv = v;
    let deriv = move |g: &GroupElement, x: &CMat| -> Result<CVec> {
        // d/dt F(g exp(tX)) = -<dpi(X) pi(g^{-1}) v, v_row>
        let u = module.apply_pi(&g.inverse(), &v_deriv)?;
        let du = module.dpi(x)? * u;
        Ok(CVec::from_element(1, -du[row] * norm))
    };
    Ok(BundleSection {
        eval: Box::new(eval),
        exact_derivative: Some(Box::new(deriv)),
        tau,
        dim_v: 1,
        tolerance: 1e-8,
    })
}

/// The kernel with its second argument frozen: y -> Phi(y^{-1} x_0) w, a
/// section of the bottom-layer bundle in y.
pub fn kernel_section_second_frozen<'a>(
    sk: &'a SphericalKernel<'a>,
    x0: GroupElement,
    w: C64,
) -> Result<BundleSection<'a>> {
    let tau = crate::repmodel::compact_irrep("u1", sk.module.k_param)?;
    let x0_eval = x0.clone();
    let eval = move |y: &GroupElement| -> Result<CVec> {
        let value = sk.phi_scalar(&y.inverse().mul(&x0_eval))?;
        Ok(CVec::from_element(1, value * w))
    };
    let deriv = move |y: &GroupElement, x: &CMat| -> Result<CVec> {
        // d/dt Phi(exp(-tX) y^{-1} x_0) = -<dpi(X) pi(y^{-1} x_0) v_0, v_0>
        let module = sk.module;
        let mut v0 = CVec::zeros(module.n_trunc);
        v0[0] = ONE;
        let u = module.apply_pi(&y.inverse().mul(&x0), &v0)?;
        let du = module.dpi(x)? * u;
        let value = -module.inner(&du, &v0) / cplx(sk.d as f64, 0.0);
        Ok(CVec::from_element(1, value * w))
    };
    Ok(BundleSection {
        eval: Box::new(eval),
        exact_derivative: Some(Box::new(deriv)),
        tau,
        dim_v: 1,
        tolerance: 1e-8,
    })
}

/// The kernel with its first argument frozen: y -> Phi(x_0^{-1} y) w, a
/// section of the contragredient bundle in y.
pub fn kernel_section_first_frozen<'a>(
    sk: &'a SphericalKernel<'a>,
    x0: GroupElement,
    w: C64,
) -> Result<BundleSection<'a>> {
    let tau = crate::repmodel::compact_irrep("u1", -sk.module.k_param)?;
    let x0_eval = x0.clone();
    let eval = move |y: &GroupElement| -> Result<CVec> {
        let value = sk.phi_scalar(&x0_eval.inverse().mul(y))?;
        Ok(CVec::from_element(1, value * w))
    };
    let deriv = move |y: &GroupElement, x: &CMat| -> Result<CVec> {
        // d/dt Phi(x_0^{-1} y exp(tX)) = <pi(x_0^{-1} y) dpi(X) v_0, v_0>
        let module = sk.module;
        let mut v0 = CVec::zeros(module.n_trunc);
        v0[0] = ONE;
        let dv = module.dpi(x)? * &v0;
        let u = module.apply_pi(&x0.inverse().mul(y), &dv)?;
        let value = module.inner(&u, &v0) / cplx(sk.d as f64, 0.0);
        Ok(CVec::from_element(1, value * w))
    };
    Ok(BundleSection {
        eval: Box::new(eval),
        exact_derivative: Some(Box::new(deriv)),
        tau,
        dim_v: 1,
        tolerance: 1e-8,
    })
}

/// The kernel as a two-variable section of the product bundle, with exact
/// derivatives in both legs.
pub fn two_variable_kernel<'a>(sk: &'a SphericalKernel<'a>) -> TwoVariableSection<'a> {
    let eval = move |x: &GroupElement, y: &GroupElement| -> Result<C64> {
        sk.phi_scalar(&x.inverse().mul(y))
    };
    let left = move |x: &GroupElement, y: &GroupElement, dir: &CMat| -> Result<C64> {
        let module = sk.module;
        let mut v0 = CVec::zeros(module.n_trunc);
        v0[0] = ONE;
        let u = module.apply_pi(&x.inverse().mul(y), &v0)?;
        let du = module.dpi(dir)? * u;
        Ok(-module.inner(&du, &v0) / cplx(sk.d as f64, 0.0))
    };
    let right = move |x: &GroupElement, y: &GroupElement, dir: &CMat| -> Result<C64> {
        let module = sk.module;
        let mut v0 = CVec::zeros(module.n_trunc);
        v0[0] = ONE;
        let dv = module.dpi(dir)? * &v0;
        let u = module.apply_pi(&x.inverse().mul(y), &dv)?;
        Ok(module.inner(&u, &v0) / cplx(sk.d as f64, 0.0))
    };
    TwoVariableSection {
        eval: Box::new(eval),
        exact_derivative_left: Some(Box::new(left)),
        exact_derivative_right: Some(Box::new(right)),
        mu_weight: sk.module.k_param,
    }
}

/// A generic smooth section with the right transformation law but no
/// harmonicity: a seeded polynomial in the K-invariant coordinate |b(g)|^2
/// times the equivariant frame conj(a)^{-k}.
pub fn control_section<'a>(
    module: &'a TruncatedHCModule,
    rng: &mut ChaCha8Rng,
) -> Result<BundleSection<'a>> {
    let tau = crate::repmodel::compact_irrep("u1", module.k_param)?;
    let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(0.4..1.6)).collect();
    let k = module.k_param;
    let eval = move |g: &GroupElement| -> Result<CVec> {
        let a = g.matrix[(0, 0)];
        let b = g.matrix[(0, 1)];
        let r = b.norm_sqr();
        let bump: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| c * r.powi(p as i32))
            .sum();
        let frame = a.conj().powi(-(k as i32));
        Ok(CVec::from_element(1, frame * cplx(bump, 0.0)))
    };
    Ok(BundleSection {
        eval: Box::new(eval),
        exact_derivative: None,
        tau,
        dim_v: 1,
        tolerance: 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, hermitian_residual, max_abs};
    use crate::parabolic::build_parabolic;
    use crate::repmodel::{ds_su11, group_exp};
    use crate::rootdata::{build_root_datum, ratio, Weight};
    use crate::sampling;
    use crate::schmid::{orthonormal_p_basis, DerivativeMode, Leg, SchmidOperator};

    fn setup(k: i64, n: usize) -> (TruncatedHCModule, RootDatum, ThetaStableParabolic) {
        let rd = build_root_datum("su11").unwrap();
        let lambda = Weight(vec![ratio(k - 2, 2)]);
        let pq = build_parabolic(&rd, &lambda).unwrap();
        let module = ds_su11(k, n).unwrap();
        (module, rd, pq)
    }

    fn x1() -> CMat {
        orthonormal_p_basis(MatrixGroup::Su11).unwrap()[0].clone()
    }

    #[test]
    fn kernel_at_identity_is_one_over_d() {
        let (module, rd, pq) = setup(4, 32);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        assert_eq!(sk.d, 1);
        let e = GroupElement::identity(MatrixGroup::Su11);
        assert!((sk.phi_scalar(&e).unwrap() - ONE).norm() < 1e-14);
    }

    #[test]
    fn mismatched_module_and_parameter() {
        let rd = build_root_datum("su11").unwrap();
        let lambda = Weight(vec![ratio(3, 2)]); // weight 3, bottom layer 5
        let pq = build_parabolic(&rd, &lambda).unwrap();
        let module = ds_su11(4, 16).unwrap();
        assert!(matches!(
            build_kernel(&module, &pq, &rd),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn diag_invariance_and_argument_reduction() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let mut rng = sampling::rng(11);
        let x = sampling::random_su11(&mut rng, 0.7).unwrap();
        let y = sampling::random_su11(&mut rng, 0.7).unwrap();
        let base = kernel_eval(&sk, &x, &y).unwrap();
        for _ in 0..20 {
            let g = sampling::random_su11(&mut rng, 0.7).unwrap();
            let moved = kernel_eval(&sk, &g.mul(&x), &g.mul(&y)).unwrap();
            assert!(max_abs(&(&moved - &base)) < 1e-10);
        }
        // Exact reduction to one argument.
        let e = GroupElement::identity(MatrixGroup::Su11);
        let reduced = kernel_eval(&sk, &e, &x.inverse().mul(&y)).unwrap();
        assert!(max_abs(&(reduced - base)) < 1e-12);
    }

    #[test]
    fn tau_sphericality_and_hermitian_symmetry() {
        let (module, rd, pq) = setup(5, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let mut rng = sampling::rng(23);
        for _ in 0..20 {
            let g = sampling::random_su11(&mut rng, 0.8).unwrap();
            let t1 = sampling::random_angle(&mut rng);
            let t2 = sampling::random_angle(&mut rng);
            let k1 = GroupElement::torus(MatrixGroup::Su11, t1);
            let k2 = GroupElement::torus(MatrixGroup::Su11, t2);
            let lhs = sk.phi_scalar(&k1.inverse().mul(&g).mul(&k2)).unwrap();
            let w = sk.module.k_param as f64;
            let phase = cplx((w * (t2 - t1)).cos(), (w * (t2 - t1)).sin());
            let rhs = sk.phi_scalar(&g).unwrap() * phase;
            assert!((lhs - rhs).norm() < 1e-8, "sphericality at {t1}, {t2}");

            let hs = sk.phi_scalar(&g.inverse()).unwrap();
            assert!((hs - sk.phi_scalar(&g).unwrap().conj()).norm() < 1e-8);
        }
    }

    #[test]
    fn flensted_jensen_agreement_and_sweep() {
        let rd = build_root_datum("su11").unwrap();
        let lambda = Weight(vec![rat(1)]);
        let pq = build_parabolic(&rd, &lambda).unwrap();
        let mut samples = Vec::new();
        for i in 0..20 {
            let t = -2.0 + 4.0 * (i as f64) / 19.0;
            samples.push(group_exp(MatrixGroup::Su11, &x1(), t).unwrap());
        }
        // Truncation-limited: the bound decreases as N doubles and is far
        // below threshold from N = 64 on.
        let mut previous = f64::INFINITY;
        for n in [16usize, 32, 64, 128] {
            let module = ds_su11(4, n).unwrap();
            let sk = build_kernel(&module, &pq, &rd).unwrap();
            let res = flensted_jensen_residual(&sk, &samples).unwrap();
            assert!(res <= previous + 1e-12, "residual grew when doubling N");
            if n >= 64 {
                assert!(res < 1e-8, "N = {n}: residual {res}");
            }
            previous = res;
        }
    }

    use crate::rootdata::rat;

    #[test]
    fn series_oracle_identity_and_closed_form() {
        let e = GroupElement::identity(MatrixGroup::Su11);
        let o = spherical_series_oracle(4, 64, &e).unwrap();
        assert!((o.value - ONE).norm() < 1e-14);
        assert!(o.truncation_defect < 1e-14);
        // Along the geodesic the classical value is cosh(t/sqrt2)^{-k}.
        let g = group_exp(MatrixGroup::Su11, &x1(), 1.3).unwrap();
        let o = spherical_series_oracle(4, 256, &g).unwrap();
        let expected = (1.3 / std::f64::consts::SQRT_2).cosh().powi(-4);
        assert!((o.value - cplx(expected, 0.0)).norm() < 1e-10);
        assert!(o.truncation_defect < 1e-10);
    }

    #[test]
    fn gram_matrix_positive_definite_on_distinct_points() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let mut points = Vec::new();
        for i in 0..10 {
            let t = 0.2 * i as f64;
            points.push(group_exp(MatrixGroup::Su11, &x1(), t).unwrap());
        }
        let w = vec![CVec::from_element(1, ONE)];
        let gram = gram_matrix(&sk, &points, &w).unwrap();
        assert!(hermitian_residual(&gram) < 1e-10);
        let eigs = hermitian_eigenvalues(&gram);
        assert!(eigs[0] > 0.0, "min eigenvalue {}", eigs[0]);

        // Duplicated point: positive semidefinite and singular.
        let mut dup = points.clone();
        dup.push(points[0].clone());
        let gram = gram_matrix(&sk, &dup, &w).unwrap();
        let eigs = hermitian_eigenvalues(&gram);
        assert!(eigs[0] > -1e-9);
        assert!(
            eigs[0].abs() < 1e-9,
            "duplicate should force a kernel vector"
        );
    }

    #[test]
    fn e_mu_agrees_with_character_quadrature() {
        // The bottom-layer projector has a second route: Peter-Weyl
        // character quadrature against the module's diagonal K-action.
        let (module, rd, pq) = setup(4, 24);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let max_weight = module.weight_of(module.n_trunc - 1);
        let quad = crate::penrose::haar_quadrature("u1", max_weight).unwrap();
        let tau = crate::repmodel::compact_irrep("u1", module.k_param).unwrap();
        let rho = |k: &crate::repmodel::KElement| -> crate::error::Result<CMat> {
            match k {
                crate::repmodel::KElement::U1 { theta } => Ok(module.pi_torus(*theta)),
                _ => unreachable!(),
            }
        };
        let p = crate::ktype::isotypic_projector_of(&rho, &tau, &quad).unwrap();
        assert!(max_abs(&(&p - &sk.e_mu)) < 1e-12);
    }

    #[test]
    fn gram_stays_positive_semidefinite_on_small_point_sets() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let mut rng = sampling::rng(77);
        use rand::Rng;
        for trial in 0..10 {
            let count = rng.gen_range(2..=12usize);
            let mut times: Vec<f64> = (0..count).map(|_| rng.gen_range(-0.9..0.9)).collect();
            if trial % 2 == 0 {
                // Force a repeated point: the Gram must go singular but
                // not indefinite.
                times[count - 1] = times[0];
            }
            let points: Vec<GroupElement> = times
                .iter()
                .map(|t| group_exp(MatrixGroup::Su11, &x1(), *t).unwrap())
                .collect();
            let w = vec![CVec::from_element(1, ONE)];
            let gram = gram_matrix(&sk, &points, &w).unwrap();
            let eigs = hermitian_eigenvalues(&gram);
            assert!(eigs[0] > -1e-9, "trial {trial}: min eigenvalue {}", eigs[0]);
            if trial % 2 == 0 {
                assert!(eigs[0].abs() < 1e-9, "repeated point must be singular");
            }
        }
    }

    #[test]
    fn single_point_gram_is_one_over_d() {
        let (module, rd, pq) = setup(4, 32);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let points = vec![GroupElement::identity(MatrixGroup::Su11)];
        let w = vec![CVec::from_element(1, ONE)];
        let gram = gram_matrix(&sk, &points, &w).unwrap();
        assert!((gram[(0, 0)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn kernel_sections_are_annihilated() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let primal = SchmidOperator::su11_primal(4).unwrap();
        let dual = SchmidOperator::su11_dual(4).unwrap();
        let x0 = group_exp(MatrixGroup::Su11, &x1(), 0.4).unwrap();

        let sec = kernel_section_second_frozen(&sk, x0.clone(), ONE).unwrap();
        let dsec = kernel_section_first_frozen(&sk, x0, ONE).unwrap();
        let mut rng = sampling::rng(5);
        for _ in 0..6 {
            let g = sampling::random_su11(&mut rng, 0.7).unwrap();
            // Exact derivatives: annihilation to rounding.
            let r = primal.residual(&sec, &g, DerivativeMode::Exact).unwrap();
            assert!(r < 1e-10, "primal exact residual {r}");
            let r = dual.residual(&dsec, &g, DerivativeMode::Exact).unwrap();
            assert!(r < 1e-10, "dual exact residual {r}");
            // Central differences: O(h^2).
            let r = primal
                .residual(&sec, &g, DerivativeMode::CentralDifference(1e-3))
                .unwrap();
            assert!(r < 1e-4, "primal fd residual {r}");
        }
    }

    #[test]
    fn every_matrix_coefficient_section_is_annihilated() {
        // The K-finite statement: the operator kills the bottom-layer
        // coefficient of pi(g^{-1}) v for every vector in the module, not
        // just translates of the lowest one.
        let (module, _rd, _pq) = setup(4, 64);
        let op = SchmidOperator::su11_primal(4).unwrap();
        let mut rng = sampling::rng(17);
        use rand::Rng;
        let mut v = CVec::zeros(64);
        for j in 0..10 {
            v[j] = cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let sec = matrix_coefficient_section(&module, v).unwrap();
        for _ in 0..5 {
            let g = sampling::random_su11(&mut rng, 0.6).unwrap();
            let r = op.residual(&sec, &g, DerivativeMode::Exact).unwrap();
            assert!(r < 1e-10, "exact residual {r}");
        }
    }

    #[test]
    fn control_section_is_not_annihilated() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let primal = SchmidOperator::su11_primal(4).unwrap();
        let mut rng = sampling::rng(7);
        let control = control_section(&module, &mut rng).unwrap();
        let kernel_sec =
            kernel_section_second_frozen(&sk, GroupElement::identity(MatrixGroup::Su11), ONE)
                .unwrap();
        let g = group_exp(MatrixGroup::Su11, &x1(), 0.9).unwrap();
        let h = DerivativeMode::CentralDifference(1e-3);
        let r_control = primal.residual(&control, &g, h).unwrap();
        let r_kernel = primal.residual(&kernel_sec, &g, h).unwrap();
        assert!(
            r_control > 1e3 * r_kernel,
            "control {r_control} vs kernel {r_kernel}"
        );
    }

    #[test]
    fn section_equivariance_witness() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let x0 = group_exp(MatrixGroup::Su11, &x1(), 0.5).unwrap();
        let sec = kernel_section_second_frozen(&sk, x0.clone(), ONE).unwrap();
        let dsec = kernel_section_first_frozen(&sk, x0, ONE).unwrap();
        let mut rng = sampling::rng(13);
        let mut samples = Vec::new();
        for _ in 0..20 {
            samples.push((
                sampling::random_su11(&mut rng, 0.6).unwrap(),
                sampling::random_angle(&mut rng),
            ));
        }
        assert!(sec.equivariance_residual(&samples).unwrap() < 1e-8);
        assert!(dsec.equivariance_residual(&samples).unwrap() < 1e-8);
    }

    #[test]
    fn exact_and_fd_derivatives_agree_quadratically() {
        let (module, _rd, _pq) = setup(4, 64);
        let mut v = CVec::zeros(64);
        v[0] = ONE;
        v[2] = cplx(0.3, -0.2);
        let sec = matrix_coefficient_section(&module, v).unwrap();
        let g = group_exp(MatrixGroup::Su11, &x1(), 0.8).unwrap();
        let x = orthonormal_p_basis(MatrixGroup::Su11).unwrap()[1].clone();
        let exact = sec.derivative(&g, &x, DerivativeMode::Exact).unwrap();
        let mut errors = Vec::new();
        for h in [1e-2, 5e-3] {
            let fd = sec
                .derivative(&g, &x, DerivativeMode::CentralDifference(h))
                .unwrap();
            errors.push(crate::linalg::max_abs_vec(&(&fd - &exact)));
        }
        let ratio = errors[0] / errors[1];
        assert!(
            (3.5..4.5).contains(&ratio),
            "halving h gave error ratio {ratio} ({errors:?})"
        );
    }

    #[test]
    fn two_variable_legs_are_conjugate_mirrors() {
        let (module, rd, pq) = setup(4, 64);
        let sk = build_kernel(&module, &pq, &rd).unwrap();
        let f2 = two_variable_kernel(&sk);
        let primal = SchmidOperator::su11_primal(4).unwrap();
        let dual = SchmidOperator::su11_dual(4).unwrap();
        let mut rng = sampling::rng(31);
        let x = sampling::random_su11(&mut rng, 0.6).unwrap();
        let y = sampling::random_su11(&mut rng, 0.6).unwrap();
        let h = DerivativeMode::CentralDifference(1e-3);

        // Both legs annihilate the kernel.
        let left = two_variable_apply(&f2, Leg::Left, &x, &y, &primal, &dual, h).unwrap();
        let right = two_variable_apply(&f2, Leg::Right, &x, &y, &primal, &dual, h).unwrap();
        assert!(crate::linalg::max_abs_vec(&left) < 1e-4);
        assert!(crate::linalg::max_abs_vec(&right) < 1e-4);

        // Left application at (x, y) mirrors the right application at the
        // swapped pair through entrywise conjugation.
        let right_swapped = two_variable_apply(&f2, Leg::Right, &y, &x, &primal, &dual, h).unwrap();
        let mirrored = right_swapped.map(|z| z.conj());
        assert!(crate::linalg::max_abs_vec(&(left - mirrored)) < 1e-6);
    }

    use crate::schmid::two_variable_apply;
}
