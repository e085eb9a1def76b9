//! Haar quadrature on the compact groups and the integral transform from
//! boundary data to sections annihilated by the first-order operator of
//! [`crate::schmid`].

use crate::error::{Error, Result};
use crate::linalg::{cplx, CVec, C64, ZERO};
use crate::repmodel::{CompactIrrep, GroupElement, KElement, KGroup, MatrixGroup};
use crate::schmid::{BundleSection, DerivativeMode, SchmidOperator};

/// Quadrature nodes and probability weights for normalized Haar measure.
#[derive(Clone, Debug)]
pub struct QuadratureScheme {
    pub group: KGroup,
    /// Matrix coefficients of weight up to this bound integrate exactly
    /// (up to rounding), pairwise products included.
    pub degree: i64,
    pub nodes: Vec<KElement>,
    pub weights: Vec<f64>,
}

impl QuadratureScheme {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates a scalar function over the group.
    pub fn integrate<F: FnMut(&KElement) -> C64>(&self, mut f: F) -> C64 {
        let mut acc = ZERO;
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(node) * cplx(*w, 0.0);
        }
        acc
    }
}

/// Builds a Haar quadrature exact on matrix coefficients of weight up to
/// `degree` (and their pairwise products).
///
/// U(1) uses the trapezoid rule, which is exact on trigonometric
/// polynomials of degree below the node count. SU(2) uses Euler angles
/// with trapezoid rules in the two periodic angles and Gauss-Legendre in
/// the polar cosine; the terms surviving the periodic sums have polynomial
/// polar dependence, so the composite rule is exact at these degrees.
pub fn haar_quadrature(k_id: &str, degree: i64) -> Result<QuadratureScheme> {
    let group = KGroup::from_id(k_id)?;
    if degree < 1 {
        return Err(Error::Config(format!(
            "quadrature degree must be >= 1, got {degree}"
        )));
    }
    let n_trap = (2 * degree + 4) as usize;
    match group {
        KGroup::U1 => {
            let mut nodes = Vec::with_capacity(n_trap);
            let mut weights = Vec::with_capacity(n_trap);
            for a in 0..n_trap {
                let theta = 2.0 * std::f64::consts::PI * (a as f64) / (n_trap as f64);
                nodes.push(KElement::U1 { theta });
                weights.push(1.0 / n_trap as f64);
            }
            Ok(QuadratureScheme {
                group,
                degree,
                nodes,
                weights,
            })
        }
        KGroup::Su2 => {
            let n_gl = (degree + 2) as usize;
            let gl = gauss_legendre(n_gl);
            let mut nodes = Vec::with_capacity(n_trap * n_trap * n_gl);
            let mut weights = Vec::with_capacity(n_trap * n_trap * n_gl);
            for a in 0..n_trap {
                let alpha = 2.0 * std::f64::consts::PI * (a as f64) / (n_trap as f64);
                for (u, wu) in &gl {
                    let beta = u.acos();
                    for c in 0..n_trap {
                        // gamma ranges over [0, 4 pi); psi = gamma / 2.
                        let gamma = 4.0 * std::f64::consts::PI * (c as f64) / (n_trap as f64);
                        nodes.push(KElement::su2_euler(alpha, beta, gamma));
                        weights.push(wu / 2.0 / (n_trap * n_trap) as f64);
                    }
                }
            }
            Ok(QuadratureScheme {
                group,
                degree,
                nodes,
                weights,
            })
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Schur-orthogonality self test: integrates |chi_tau|^2 (should be 1) and
/// chi_tau (should vanish for nontrivial tau).
pub fn schur_orthogonality_residual(
    quad: &QuadratureScheme,
    tau: &CompactIrrep,
) -> Result<(f64, f64)> {
    let mut norm = ZERO;
    let mut mean = ZERO;
    for (node, w) in quad.nodes.iter().zip(&quad.weights) {
        let chi = tau.character(node)?;
        norm += chi * chi.conj() * cplx(*w, 0.0);
        mean += chi * cplx(*w, 0.0);
    }
    let norm_res = (norm - cplx(1.0, 0.0)).norm();
    let mean_res = if tau.weight == 0 {
        (mean - cplx(1.0, 0.0)).norm()
    } else {
        mean.norm()
    };
    Ok((norm_res, mean_res))
}

// ---------------------------------------------------------------------------
// The transform
// ---------------------------------------------------------------------------

type PairFn<'a> = Box<dyn Fn(&GroupElement, &KElement) -> Result<C64> + 'a>;

/// Boundary datum of the transform: the scalar pairing (x, k) -> <w(xk), .>
/// with the top-form normalization absorbed into the pairing itself. The
/// transformation law in the K-argument under the stabilizer, recorded as
/// the character weight `chi_weight`, makes the integral well defined on
/// the quotient.
pub struct PenroseIntegrand<'a> {
    pub pair: PairFn<'a>,
    /// U(1) weight of the stabilizer character chi: pair(x, k l) must equal
    /// chi(l) pair(x, k).
    pub chi_weight: i64,
}

impl<'a> PenroseIntegrand<'a> {
    /// Wraps a boundary function W on the group: pair(x, k) = W(x k). Any
    /// W transforming by the stated character under right torus translation
    /// yields a well-defined integrand.
    pub fn from_boundary_function<F>(boundary: F, chi_weight: i64) -> PenroseIntegrand<'a>
    where
        F: Fn(&GroupElement) -> Result<C64> + 'a,
    {
        let pair = move |x: &GroupElement, k: &KElement| -> Result<C64> {
            let kg = match k {
                KElement::U1 { theta } => GroupElement::torus(MatrixGroup::Su11, *theta),
                KElement::Su2 { .. } => {
                    return Err(Error::Unsupported(
                        "boundary functions are attached to the su11 model".into(),
                    ))
                }
            };
            boundary(&x.mul(&kg))
        };
        PenroseIntegrand {
            pair: Box::new(pair),
            chi_weight,
        }
    }

    /// Max residual of pair(x, k l) = chi(l) pair(x, k) over sample triples
    /// (x, k angle, l angle).
    pub fn invariance_residual(&self, samples: &[(GroupElement, f64, f64)]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (x, k_angle, l_angle) in samples {
            let kl = KElement::U1 {
                theta: k_angle + l_angle,
            };
            let k = KElement::U1 { theta: *k_angle };
            let lhs = (self.pair)(x, &kl)?;
            let w = self.chi_weight as f64;
            let chi = cplx((w * l_angle).cos(), (w * l_angle).sin());
            let rhs = chi * (self.pair)(x, &k)?;
            worst = worst.max((lhs - rhs).norm());
        }
        Ok(worst)
    }
}

/// The integral transform: quadrature assembly of
/// sum_j weight_j tau_mu(k_j) v_mu pair(x, k_j).
pub fn penrose_transform(
    w: &PenroseIntegrand,
    x: &GroupElement,
    tau_mu: &CompactIrrep,
    v_mu: &CVec,
    quad: &QuadratureScheme,
) -> Result<CVec> {
    if tau_mu.group != quad.group {
        return Err(Error::Config(
            "transform representation and quadrature live on different groups".into(),
        ));
    }
    if v_mu.len() != tau_mu.dim() {
        return Err(Error::Config(
            "highest-weight vector has the wrong dimension".into(),
        ));
    }
    let mut acc = CVec::zeros(tau_mu.dim());
    for (node, weight) in quad.nodes.iter().zip(&quad.weights) {
        let scalar = (w.pair)(x, node)?;
        let moved = tau_mu.matrix(node)? * v_mu;
        acc += moved.map(|z| z * scalar * cplx(*weight, 0.0));
    }
    Ok(acc)
}

/// Packages the transform output as a section ready for certification.
/// Derivatives fall back to central differences; the transform output has
/// no a-priori exact derivative.
pub fn transform_section<'a>(
    w: &'a PenroseIntegrand<'a>,
    tau_mu: CompactIrrep,
    v_mu: CVec,
    quad: &'a QuadratureScheme,
) -> BundleSection<'a> {
    let dim_v = v_mu.len();
    let tau = tau_mu;
    BundleSection {
        eval: Box::new(move |x: &GroupElement| penrose_transform(w, x, &tau, &v_mu, quad)),
        exact_derivative: None,
        tau,
        dim_v,
        tolerance: 1e-6,
    }
}

/// Certification of a transform output: section equivariance over seeded
/// samples and the operator residual over the standard grid.
#[derive(Clone, Copy, Debug)]
pub struct CertificationReport {
    pub equivariance_residual: f64,
    pub equivariance_threshold: f64,
    pub d_residual: f64,
    pub d_threshold: f64,
}

impl CertificationReport {
    pub fn pass(&self) -> bool {
        self.equivariance_residual < self.equivariance_threshold
            && self.d_residual < self.d_threshold
    }
}

/// Runs the two membership checks on a section claimed to land in Ker D.
pub fn certify_output(
    section: &BundleSection,
    op: &SchmidOperator,
    h: f64,
    equivariance_samples: &[(GroupElement, f64)],
    grid: &[GroupElement],
    equivariance_threshold: f64,
    d_threshold: f64,
) -> Result<CertificationReport> {
    let equivariance_residual = section.equivariance_residual(equivariance_samples)?;
    let mut d_residual: f64 = 0.0;
    for g in grid {
        d_residual =
            d_residual.max(op.residual(section, g, DerivativeMode::CentralDifference(h))?);
    }
    Ok(CertificationReport {
        equivariance_residual,
        equivariance_threshold,
        d_residual,
        d_threshold,
    })
}

/// The 5 x 4 evaluation grid exp(t1 X1) exp(t2 X2) with t in [-1, 1], the
/// standard sample set of the residual suites.
pub fn standard_grid() -> Result<Vec<GroupElement>> {
    let basis = crate::schmid::orthonormal_p_basis(MatrixGroup::Su11)?;
    let mut grid = Vec::with_capacity(20);
    for i in 0..5 {
        let t1 = -1.0 + 2.0 * (i as f64) / 4.0;
        for j in 0..4 {
            let t2 = -1.0 + 2.0 * (j as f64) / 3.0;
            let g1 = crate::repmodel::group_exp(MatrixGroup::Su11, &basis[0], t1)?;
            let g2 = crate::repmodel::group_exp(MatrixGroup::Su11, &basis[1], t2)?;
            grid.push(g1.mul(&g2));
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmodel::compact_irrep;

    #[test]
    fn u1_trapezoid_is_exact_on_low_frequencies() {
        let quad = haar_quadrature("u1", 8).unwrap();
        let total: f64 = quad.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);

        // constant integrates to 1
        let one = quad.integrate(|_| cplx(1.0, 0.0));
        assert!((one - cplx(1.0, 0.0)).norm() < 1e-14);

        // e^{3 i theta} integrates to 0
        let osc = quad.integrate(|k| match k {
            KElement::U1 { theta } => cplx((3.0 * theta).cos(), (3.0 * theta).sin()),
            _ => unreachable!(),
        });
        assert!(osc.norm() < 1e-14);
    }

    #[test]
    fn su2_schur_orthogonality() {
        let quad = haar_quadrature("su2", 4).unwrap();
        let total: f64 = quad.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);

        for w in 1..=3 {
            let tau = compact_irrep("su2", w).unwrap();
            let (norm_res, mean_res) = schur_orthogonality_residual(&quad, &tau).unwrap();
            assert!(norm_res < 1e-10, "weight {w}: |chi|^2 residual {norm_res}");
            assert!(mean_res < 1e-10, "weight {w}: mean residual {mean_res}");
        }
    }

    #[test]
    fn su2_character_products_are_orthogonal() {
        let quad = haar_quadrature("su2", 4).unwrap();
        let tau1 = compact_irrep("su2", 1).unwrap();
        let tau2 = compact_irrep("su2", 2).unwrap();
        let mut acc = ZERO;
        for (node, w) in quad.nodes.iter().zip(&quad.weights) {
            let c1 = tau1.character(node).unwrap();
            let c2 = tau2.character(node).unwrap();
            acc += c1 * c2.conj() * cplx(*w, 0.0);
        }
        assert!(acc.norm() < 1e-10);
    }

    #[test]
    fn bad_quadrature_inputs() {
        assert!(haar_quadrature("so3", 4).is_err());
        assert!(haar_quadrature("u1", 0).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(6);
        // degree-10 monomial: exact for 2n-1 = 11
        let integral: f64 = gl.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((integral - 2.0 / 11.0).abs() < 1e-13);
    }

    mod transform {
        use super::super::*;
        use crate::kernel::{build_kernel, matrix_coefficient_section};
        use crate::linalg::{max_abs_vec, ONE};
        use crate::parabolic::build_parabolic;
        use crate::repmodel::{compact_irrep, ds_su11, group_exp, su11_p1};
        use crate::rootdata::{build_root_datum, rat, Weight};
        use crate::sampling;
        use crate::schmid::orthonormal_p_basis;

        const K: i64 = 4;

        fn boundary_setup() -> (crate::repmodel::TruncatedHCModule, CVec) {
            let module = ds_su11(K, 64).unwrap();
            let mut v = CVec::zeros(64);
            v[0] = ONE;
            v[1] = cplx(0.4, 0.1);
            (module, v)
        }

        fn equivariance_samples(seed: u64) -> Vec<(GroupElement, f64)> {
            let mut rng = sampling::rng(seed);
            (0..12)
                .map(|_| {
                    (
                        sampling::random_su11(&mut rng, 0.6).unwrap(),
                        sampling::random_angle(&mut rng),
                    )
                })
                .collect()
        }

        #[test]
        fn point_quotient_reduces_to_evaluation() {
            // For the su11 instance the quotient is a point: the transform
            // returns v_mu times the boundary value at k = e.
            let (module, v) = boundary_setup();
            let section = matrix_coefficient_section(&module, v).unwrap();
            let w = PenroseIntegrand::from_boundary_function(
                move |g: &GroupElement| Ok(section.value(g)?[0]),
                -K,
            );
            let quad = haar_quadrature("u1", K + 2).unwrap();
            let tau = compact_irrep("u1", K).unwrap();
            let v_mu = CVec::from_element(1, ONE);
            let x = group_exp(MatrixGroup::Su11, &su11_p1(), 0.35).unwrap();
            let out = penrose_transform(&w, &x, &tau, &v_mu, &quad).unwrap();
            let direct = (w.pair)(&x, &KElement::U1 { theta: 0.0 }).unwrap();
            assert!((out[0] - direct).norm() < 1e-12);
        }

        #[test]
        fn zero_integrand_gives_zero_section() {
            let w = PenroseIntegrand::from_boundary_function(|_| Ok(ZERO), -K);
            let quad = haar_quadrature("u1", K + 2).unwrap();
            let tau = compact_irrep("u1", K).unwrap();
            let v_mu = CVec::from_element(1, ONE);
            let x = GroupElement::identity(MatrixGroup::Su11);
            let out = penrose_transform(&w, &x, &tau, &v_mu, &quad).unwrap();
            assert_eq!(max_abs_vec(&out), 0.0);
        }

        #[test]
        fn transform_output_is_certified_harmonic() {
            let (module, v) = boundary_setup();
            let section = matrix_coefficient_section(&module, v).unwrap();
            let w = PenroseIntegrand::from_boundary_function(
                move |g: &GroupElement| Ok(section.value(g)?[0]),
                -K,
            );
            // The integrand transforms by the stated stabilizer character.
            let mut rng = sampling::rng(41);
            let triples: Vec<(GroupElement, f64, f64)> = (0..10)
                .map(|_| {
                    (
                        sampling::random_su11(&mut rng, 0.6).unwrap(),
                        sampling::random_angle(&mut rng),
                        sampling::random_angle(&mut rng),
                    )
                })
                .collect();
            assert!(w.invariance_residual(&triples).unwrap() < 1e-8);

            let quad = haar_quadrature("u1", K + 2).unwrap();
            let tau = compact_irrep("u1", K).unwrap();
            let out = transform_section(&w, tau, CVec::from_element(1, ONE), &quad);
            let op = crate::schmid::SchmidOperator::su11_primal(K).unwrap();
            let report = certify_output(
                &out,
                &op,
                1e-3,
                &equivariance_samples(17),
                &standard_grid().unwrap(),
                1e-6,
                1e-4,
            )
            .unwrap();
            assert!(report.pass(), "{report:?}");
        }

        #[test]
        fn corrupted_integrand_fails_loudly() {
            let (module, v) = boundary_setup();
            let section = matrix_coefficient_section(&module, v).unwrap();
            // Perturbation with the wrong character and a frequency beyond
            // the quadrature's exactness degree.
            let pair = move |x: &GroupElement, k: &KElement| -> Result<C64> {
                let theta = match k {
                    KElement::U1 { theta } => *theta,
                    _ => unreachable!(),
                };
                let kg = GroupElement::torus(MatrixGroup::Su11, theta);
                let clean = section.value(&x.mul(&kg))?[0];
                let noise = cplx(0.0, 37.3 * theta + 1.1).exp();
                Ok(clean + cplx(0.3, 0.0) * noise * x.matrix[(0, 1)])
            };
            let w = PenroseIntegrand {
                pair: Box::new(pair),
                chi_weight: -K,
            };

            let mut rng = sampling::rng(43);
            let triples: Vec<(GroupElement, f64, f64)> = (0..10)
                .map(|_| {
                    (
                        sampling::random_su11(&mut rng, 0.6).unwrap(),
                        sampling::random_angle(&mut rng),
                        sampling::random_angle(&mut rng),
                    )
                })
                .collect();
            assert!(w.invariance_residual(&triples).unwrap() > 1e-2);

            let quad = haar_quadrature("u1", K + 2).unwrap();
            let tau = compact_irrep("u1", K).unwrap();
            let out = transform_section(&w, tau, CVec::from_element(1, ONE), &quad);
            let op = crate::schmid::SchmidOperator::su11_primal(K).unwrap();
            let report = certify_output(
                &out,
                &op,
                1e-3,
                &equivariance_samples(17),
                &standard_grid().unwrap(),
                1e-6,
                1e-4,
            )
            .unwrap();
            assert!(!report.pass(), "corrupted input must fail: {report:?}");
            assert!(report.equivariance_residual > 1e-3);
        }

        #[test]
        fn transform_is_linear_and_equivariant() {
            let (module, v) = boundary_setup();
            let mut v2 = CVec::zeros(64);
            v2[2] = cplx(0.0, 0.8);
            let s1 = matrix_coefficient_section(&module, v).unwrap();
            let s2 = matrix_coefficient_section(&module, v2).unwrap();
            let w1 = PenroseIntegrand::from_boundary_function(
                move |g: &GroupElement| Ok(s1.value(g)?[0]),
                -K,
            );
            let w2 = PenroseIntegrand::from_boundary_function(
                move |g: &GroupElement| Ok(s2.value(g)?[0]),
                -K,
            );
            let (c1, c2) = (cplx(0.7, -0.2), cplx(-0.1, 1.3));
            let combo = PenroseIntegrand {
                pair: Box::new(|x: &GroupElement, k: &KElement| {
                    Ok(c1 * (w1.pair)(x, k)? + c2 * (w2.pair)(x, k)?)
                }),
                chi_weight: -K,
            };
            let quad = haar_quadrature("u1", K + 2).unwrap();
            let tau = compact_irrep("u1", K).unwrap();
            let v_mu = CVec::from_element(1, ONE);
            let mut rng = sampling::rng(3);
            let x = sampling::random_su11(&mut rng, 0.7).unwrap();
            let lhs = penrose_transform(&combo, &x, &tau, &v_mu, &quad).unwrap();
            let a = penrose_transform(&w1, &x, &tau, &v_mu, &quad).unwrap();
            let b = penrose_transform(&w2, &x, &tau, &v_mu, &quad).unwrap();
            let rhs = a.map(|z| z * c1) + b.map(|z| z * c2);
            assert!(max_abs_vec(&(lhs - rhs)) < 1e-10);

            // Left translation of the boundary datum matches left
            // translation of the output.
            let g0 = sampling::random_su11(&mut rng, 0.5).unwrap();
            let translated = PenroseIntegrand {
                pair: Box::new(|x: &GroupElement, k: &KElement| (w1.pair)(&g0.inverse().mul(x), k)),
                chi_weight: -K,
            };
            let lhs = penrose_transform(&translated, &x, &tau, &v_mu, &quad).unwrap();
            let rhs = penrose_transform(&w1, &g0.inverse().mul(&x), &tau, &v_mu, &quad).unwrap();
            assert!(max_abs_vec(&(lhs - rhs)) < 1e-6);
        }

        #[test]
        fn boundary_character_of_matrix_coefficients() {
            // W(g k_theta) = e^{-i K theta} W(g) for the bottom-layer
            // coefficient, the stabilizer law the transform needs.
            let (module, v) = boundary_setup();
            let section = matrix_coefficient_section(&module, v).unwrap();
            let g = group_exp(
                MatrixGroup::Su11,
                &orthonormal_p_basis(MatrixGroup::Su11).unwrap()[0],
                0.9,
            )
            .unwrap();
            let theta = 1.234;
            let k = GroupElement::torus(MatrixGroup::Su11, theta);
            let lhs = section.value(&g.mul(&k)).unwrap()[0];
            let phase = cplx((K as f64 * theta).cos(), -(K as f64 * theta).sin());
            let rhs = phase * section.value(&g).unwrap()[0];
            assert!((lhs - rhs).norm() < 1e-10);

            // Sanity: the parabolic bookkeeping for this instance.
            let rd = build_root_datum("su11").unwrap();
            let pq = build_parabolic(&rd, &Weight(vec![rat(1)])).unwrap();
            let sk = build_kernel(&module, &pq, &rd);
            assert!(sk.is_ok());
        }
    }
}
