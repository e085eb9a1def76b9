//! Suite runners behind the CLI subcommands. Each returns either a report
//! (whose `pass` field decides the exit status) or a configuration error.

use serde::{Deserialize, Serialize};

use aqform::kernel::{
    build_kernel, control_section, flensted_jensen_residual, gram_matrix, kernel_eval,
    kernel_section_second_frozen, matrix_coefficient_section, matrix_coefficient_section_row,
    two_variable_kernel, SphericalKernel,
};
use aqform::ktype::{k_type, vmu_minus};
use aqform::linalg::{
    cplx, hermitian_eigenvalues, hermitian_residual, max_abs, max_abs_vec, CVec, ONE,
};
use aqform::parabolic::minimal_k_type_weight;
use aqform::penrose::{
    certify_output, haar_quadrature, schur_orthogonality_residual, standard_grid,
    transform_section, PenroseIntegrand,
};
use aqform::repmodel::{
    compact_irrep, ds_su11, group_exp, GroupElement, KElement, MatrixGroup, TruncatedHCModule,
};
use aqform::rootdata::{rat, Instance, Weight};
use aqform::sampling;
use aqform::schmid::{orthonormal_p_basis, DerivativeMode, Leg, SchmidOperator};
use aqform::thresholds as tol;

use crate::config::Resolved;
use crate::report::{Check, KTypeEntry, KtypesReport, StructureReport, SuiteReport};

fn weights_to_strings(ws: &[Weight]) -> Vec<Vec<String>> {
    ws.iter().map(|w| w.to_strings()).collect()
}

pub fn run_structure(r: &Resolved) -> Result<StructureReport, String> {
    let rd = &r.rd;
    let pq = &r.pq;
    let positivity = aqform::parabolic::positivity_class(pq, rd).map_err(|e| e.to_string())?;
    let (mu, mu_fundamental) = if pq.degenerate {
        (None, None)
    } else {
        let mu = minimal_k_type_weight(pq).map_err(|e| e.to_string())?;
        let fc = rd
            .fundamental_coords(&mu)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| c.to_string())
            .collect();
        (Some(mu.to_strings()), Some(fc))
    };
    Ok(StructureReport {
        instance: r.config.instance.clone(),
        lambda: r.lambda.to_strings(),
        lambda_fundamental: r.config.lambda.clone(),
        l_roots: weights_to_strings(&pq.l_roots),
        u_roots: weights_to_strings(&pq.u_roots),
        u_cap_p: weights_to_strings(&pq.u_cap_p),
        u_cap_k: weights_to_strings(&pq.u_cap_k),
        n: pq.n,
        s: pq.s,
        rho_u_cap_p: pq.rho_u_cap_p.to_strings(),
        mu,
        mu_fundamental,
        positivity: positivity.label().to_string(),
        degenerate: pq.degenerate,
        integral: pq.integral,
    })
}

pub fn run_ktypes(r: &Resolved) -> Result<KtypesReport, String> {
    let rd = &r.rd;
    let pq = &r.pq;
    let positivity = aqform::parabolic::positivity_class(pq, rd).map_err(|e| e.to_string())?;
    if !positivity.at_least_basic() {
        return Err(format!(
            "K-type data needs at least basic positivity; parameter classifies as {}",
            positivity.label()
        ));
    }
    let mu_weight = minimal_k_type_weight(pq).map_err(|e| e.to_string())?;
    let mu = k_type(rd, &mu_weight).map_err(|e| e.to_string())?;
    let v = vmu_minus(rd, pq, &mu).map_err(|e| e.to_string())?;

    // First cone members mu + sum n_a a, ordered by total coefficient and
    // then lexicographically (deterministic).
    let gens = &pq.u_cap_p;
    let mut members: Vec<(i64, Vec<String>, Weight)> = Vec::new();
    'outer: for total in 0i64.. {
        let combos = compositions(total, gens.len());
        let mut layer: Vec<Weight> = Vec::new();
        for combo in combos {
            let mut w = mu_weight.clone();
            for (count, gen) in combo.iter().zip(gens) {
                w = &w + &gen.scale(rat(*count));
            }
            if !layer.contains(&w) {
                layer.push(w);
            }
        }
        let mut keyed: Vec<(Vec<String>, Weight)> =
            layer.into_iter().map(|w| (w.to_strings(), w)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        for (key, w) in keyed {
            if members.iter().any(|(_, _, prev)| prev == &w) {
                continue;
            }
            members.push((total, key, w));
            if members.len() >= 10 {
                break 'outer;
            }
        }
        if gens.is_empty() {
            break;
        }
    }

    Ok(KtypesReport {
        instance: r.config.instance.clone(),
        lambda: r.lambda.to_strings(),
        mu: mu_weight.to_strings(),
        dim_mu: mu.dim,
        vmu_minus: v
            .kept
            .iter()
            .map(|kt| KTypeEntry {
                highest_weight: kt.highest_weight.to_strings(),
                dim: kt.dim,
            })
            .collect(),
        dropped: weights_to_strings(&v.dropped),
        cone_members: members.into_iter().map(|(_, key, _)| key).collect(),
    })
}

fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut combo = vec![first];
            combo.append(&mut rest);
            out.push(combo);
        }
    }
    out
}

fn module_setup<'a>(
    r: &Resolved,
    module: &'a TruncatedHCModule,
) -> Result<SphericalKernel<'a>, String> {
    build_kernel(module, &r.pq, &r.rd).map_err(|e| e.to_string())
}

fn require_su11_module(r: &Resolved) -> Result<TruncatedHCModule, String> {
    if r.rd.instance != Instance::Su11 {
        return Err(format!(
            "suite needs the su11 representation model; instance is {}",
            r.config.instance
        ));
    }
    if r.config.k < 2 {
        return Err(format!(
            "suite needs a discrete-series parameter k >= 2 (k = {}); pass --k or an integral lambda",
            r.config.k
        ));
    }
    ds_su11(r.config.k, r.config.n_trunc).map_err(|e| e.to_string())
}

fn x1() -> aqform::linalg::CMat {
    orthonormal_p_basis(MatrixGroup::Su11).unwrap()[0].clone()
}

pub fn run_schmid(r: &Resolved) -> Result<SuiteReport, String> {
    let module = require_su11_module(r)?;
    let kernel = module_setup(r, &module)?;
    let k = r.config.k;
    let h = r.config.h;
    let op = SchmidOperator::su11_primal(k).map_err(|e| e.to_string())?;
    let dual = SchmidOperator::su11_dual(k).map_err(|e| e.to_string())?;
    let x0 = group_exp(MatrixGroup::Su11, &x1(), 0.4).map_err(|e| e.to_string())?;
    let section = kernel_section_second_frozen(&kernel, x0, ONE).map_err(|e| e.to_string())?;
    let grid = standard_grid().map_err(|e| e.to_string())?;

    let mut checks = Vec::new();
    let bound = tol::SCHMID_RESIDUAL_SCALE * h * h;
    let mut max_res: f64 = 0.0;
    let mut max_res_half: f64 = 0.0;
    for (idx, g) in grid.iter().enumerate() {
        let res = op
            .residual(&section, g, DerivativeMode::CentralDifference(h))
            .map_err(|e| e.to_string())?;
        let res_half = op
            .residual(&section, g, DerivativeMode::CentralDifference(h / 2.0))
            .map_err(|e| e.to_string())?;
        max_res = max_res.max(res);
        max_res_half = max_res_half.max(res_half);
        checks.push(
            Check::upper(format!("annihilation_point_{idx:02}"), res, bound).with_detail(format!(
                "h={h:.1e}, residual at h/2 = {res_half:.3e}, ratio = {:.3}",
                res / res_half
            )),
        );
    }
    checks.push(Check::window(
        "refinement_ratio",
        max_res / max_res_half,
        tol::REFINEMENT_RATIO_LO,
        tol::REFINEMENT_RATIO_HI,
    ));

    // Exact-mode basis independence on the kernel section and on a
    // non-annihilated probe.
    use rand::Rng;
    let mut rng = sampling::rng(r.config.seed);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let rotation = vec![
        vec![cplx(angle.cos(), 0.0), cplx(angle.sin(), 0.0)],
        vec![cplx(-angle.sin(), 0.0), cplx(angle.cos(), 0.0)],
    ];
    let mut vp = CVec::zeros(r.config.n_trunc);
    vp[0] = ONE;
    vp[3] = cplx(0.5, -0.7);
    let probe = matrix_coefficient_section_row(&module, vp, 1).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for g in &grid {
        for sec in [&section, &probe] {
            let base = op
                .apply(sec, g, DerivativeMode::Exact)
                .map_err(|e| e.to_string())?;
            let moved = op
                .apply_with_basis(sec, g, DerivativeMode::Exact, &rotation)
                .map_err(|e| e.to_string())?;
            worst = worst.max(max_abs_vec(&(moved - base)));
        }
    }
    checks.push(Check::upper(
        "basis_independence",
        worst,
        tol::BASIS_INDEPENDENCE,
    ));

    // Control separation.
    let control = control_section(&module, &mut rng).map_err(|e| e.to_string())?;
    let control_res: f64 = grid
        .iter()
        .map(|g| {
            op.residual(&control, g, DerivativeMode::CentralDifference(h))
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    checks.push(
        Check::above(
            "control_separation",
            control_res / max_res,
            tol::CONTROL_SEPARATION,
        )
        .with_detail(format!(
            "control residual {control_res:.3e} vs kernel {max_res:.3e}"
        )),
    );

    // Two-variable legs on a subset of the grid.
    let f2 = two_variable_kernel(&kernel);
    let y0 = sampling::random_su11(&mut rng, 0.5).map_err(|e| e.to_string())?;
    for (idx, g) in grid.iter().enumerate().step_by(5) {
        for leg in [Leg::Left, Leg::Right] {
            let image = aqform::schmid::two_variable_apply(
                &f2,
                leg,
                g,
                &y0,
                &op,
                &dual,
                DerivativeMode::CentralDifference(h),
            )
            .map_err(|e| e.to_string())?;
            checks.push(Check::upper(
                format!("two_variable_{:?}_point_{idx:02}", leg).to_lowercase(),
                max_abs_vec(&image),
                bound,
            ));
        }
    }

    Ok(SuiteReport::new("schmid", r.config.clone(), checks))
}

pub fn run_kernel_suite(r: &Resolved) -> Result<SuiteReport, String> {
    let module = require_su11_module(r)?;
    let kernel = module_setup(r, &module)?;
    let sk = &kernel;
    let mut rng = sampling::rng(r.config.seed);
    let mut checks = Vec::new();

    let x = sampling::random_su11(&mut rng, 0.7).map_err(|e| e.to_string())?;
    let y = sampling::random_su11(&mut rng, 0.7).map_err(|e| e.to_string())?;
    let base = kernel_eval(sk, &x, &y).map_err(|e| e.to_string())?;
    let mut diag_res: f64 = 0.0;
    for _ in 0..20 {
        let g = sampling::random_su11(&mut rng, 0.7).map_err(|e| e.to_string())?;
        let moved = kernel_eval(sk, &g.mul(&x), &g.mul(&y)).map_err(|e| e.to_string())?;
        diag_res = diag_res.max(max_abs(&(&moved - &base)));
    }
    checks.push(Check::upper(
        "diag_invariance",
        diag_res,
        tol::KERNEL_DIAG_INVARIANCE,
    ));

    let mut spher_res: f64 = 0.0;
    let mut herm_res: f64 = 0.0;
    let w = r.config.k as f64;
    for _ in 0..20 {
        let g = sampling::random_su11(&mut rng, 0.8).map_err(|e| e.to_string())?;
        let t1 = sampling::random_angle(&mut rng);
        let t2 = sampling::random_angle(&mut rng);
        let k1 = GroupElement::torus(MatrixGroup::Su11, t1);
        let k2 = GroupElement::torus(MatrixGroup::Su11, t2);
        let lhs = sk
            .phi_scalar(&k1.inverse().mul(&g).mul(&k2))
            .map_err(|e| e.to_string())?;
        let phase = cplx((w * (t2 - t1)).cos(), (w * (t2 - t1)).sin());
        let rhs = sk.phi_scalar(&g).map_err(|e| e.to_string())? * phase;
        spher_res = spher_res.max((lhs - rhs).norm());
        let hs = sk.phi_scalar(&g.inverse()).map_err(|e| e.to_string())?;
        herm_res = herm_res.max((hs - sk.phi_scalar(&g).map_err(|e| e.to_string())?.conj()).norm());
    }
    checks.push(Check::upper(
        "tau_sphericality",
        spher_res,
        tol::KERNEL_SPHERICALITY,
    ));
    checks.push(Check::upper(
        "hermitian_symmetry",
        herm_res,
        tol::KERNEL_HERMITIAN,
    ));

    let mut samples = Vec::new();
    for i in 0..20 {
        let t = -2.0 + 4.0 * (i as f64) / 19.0;
        samples.push(group_exp(MatrixGroup::Su11, &x1(), t).map_err(|e| e.to_string())?);
    }
    let fj = flensted_jensen_residual(sk, &samples).map_err(|e| e.to_string())?;
    checks.push(Check::upper("flensted_jensen", fj, tol::FLENSTED_JENSEN));

    Ok(SuiteReport::new("kernel", r.config.clone(), checks))
}

/// Gram spectrum data emitted by the `gram` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub config: crate::config::RunConfig,
    /// Geodesic times of the sample points exp(t X1).
    pub points: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
    pub verdict: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub fn run_gram(r: &Resolved) -> Result<GramReport, String> {
    let module = require_su11_module(r)?;
    let kernel = module_setup(r, &module)?;
    let times: Vec<f64> = (0..10).map(|i| 0.2 * i as f64).collect();
    let mut points = Vec::new();
    for &t in &times {
        points.push(group_exp(MatrixGroup::Su11, &x1(), t).map_err(|e| e.to_string())?);
    }
    let vectors = vec![CVec::from_element(1, ONE)];
    let gram = gram_matrix(&kernel, &points, &vectors).map_err(|e| e.to_string())?;
    let herm = hermitian_residual(&gram);
    let eigenvalues = hermitian_eigenvalues(&gram);
    let min_eig = eigenvalues[0];

    let mut checks = vec![
        Check::upper("hermitian_residual", herm, tol::GRAM_HERMITIAN),
        Check::above("min_eigenvalue", min_eig, 0.0),
    ];
    if r.config.k == 4 && r.config.n_trunc == 64 {
        checks.push(
            Check::upper(
                "regression_drift",
                (min_eig - tol::GRAM_MIN_EIG_K4_N64).abs(),
                tol::GRAM_REGRESSION_TOL,
            )
            .with_detail(format!("frozen value {:.17e}", tol::GRAM_MIN_EIG_K4_N64)),
        );
    }
    let pass = checks.iter().all(|c| c.pass);
    let verdict = if min_eig > 0.0 {
        "positive-definite"
    } else if min_eig > tol::GRAM_PSD_SLACK {
        "positive-semidefinite"
    } else {
        "indefinite"
    };
    Ok(GramReport {
        config: r.config.clone(),
        points: times,
        eigenvalues,
        min_eigenvalue: min_eig,
        hermitian_residual: herm,
        verdict: verdict.to_string(),
        checks,
        pass,
    })
}

pub fn gram_as_suite(r: &Resolved) -> Result<SuiteReport, String> {
    let g = run_gram(r)?;
    Ok(SuiteReport::new("gram", r.config.clone(), g.checks))
}

pub fn run_penrose(r: &Resolved) -> Result<SuiteReport, String> {
    let mut checks = Vec::new();

    // Character quadrature on both compact groups.
    let u1 = haar_quadrature("u1", 8).map_err(|e| e.to_string())?;
    let unit = u1.integrate(|_| ONE);
    checks.push(Check::upper(
        "u1_unit_mass",
        (unit - ONE).norm(),
        tol::SCHUR_ORTHOGONALITY,
    ));
    let osc = u1.integrate(|k| match k {
        KElement::U1 { theta } => cplx((3.0 * theta).cos(), (3.0 * theta).sin()),
        _ => unreachable!(),
    });
    checks.push(Check::upper(
        "u1_character_orthogonality",
        osc.norm(),
        tol::SCHUR_ORTHOGONALITY,
    ));
    let su2 = haar_quadrature("su2", 4).map_err(|e| e.to_string())?;
    for w in [1i64, 2] {
        let tau = compact_irrep("su2", w).map_err(|e| e.to_string())?;
        let (norm_res, mean_res) =
            schur_orthogonality_residual(&su2, &tau).map_err(|e| e.to_string())?;
        checks.push(Check::upper(
            format!("su2_schur_norm_w{w}"),
            norm_res,
            tol::SCHUR_ORTHOGONALITY,
        ));
        checks.push(Check::upper(
            format!("su2_schur_mean_w{w}"),
            mean_res,
            tol::SCHUR_ORTHOGONALITY,
        ));
    }

    if r.rd.instance == Instance::Su21 {
        // Structure-only: the quadrature domain for this instance. No
        // representation model is attached to su21.
        checks.push(
            Check::above("quadrature_domain_s", r.pq.s as f64, -0.5)
                .with_detail("dimension of K/(L n K) for the configured parameter".to_string()),
        );
        return Ok(SuiteReport::new("penrose", r.config.clone(), checks));
    }

    let module = require_su11_module(r)?;
    let k = r.config.k;
    let h = r.config.h;
    let mut v = CVec::zeros(r.config.n_trunc);
    v[0] = ONE;
    v[1] = cplx(0.4, 0.1);
    let boundary = matrix_coefficient_section(&module, v).map_err(|e| e.to_string())?;
    let w = PenroseIntegrand::from_boundary_function(
        move |g: &GroupElement| Ok(boundary.value(g)?[0]),
        -k,
    );
    let mut rng = sampling::rng(r.config.seed);
    let mut triples = Vec::new();
    let mut eq_samples = Vec::new();
    for _ in 0..10 {
        triples.push((
            sampling::random_su11(&mut rng, 0.6).map_err(|e| e.to_string())?,
            sampling::random_angle(&mut rng),
            sampling::random_angle(&mut rng),
        ));
        eq_samples.push((
            sampling::random_su11(&mut rng, 0.6).map_err(|e| e.to_string())?,
            sampling::random_angle(&mut rng),
        ));
    }
    let inv = w.invariance_residual(&triples).map_err(|e| e.to_string())?;
    checks.push(Check::upper(
        "integrand_invariance",
        inv,
        tol::INTEGRAND_INVARIANCE,
    ));

    let quad = haar_quadrature("u1", k + 2).map_err(|e| e.to_string())?;
    let tau = compact_irrep("u1", k).map_err(|e| e.to_string())?;
    let out = transform_section(&w, tau, CVec::from_element(1, ONE), &quad);
    let op = SchmidOperator::su11_primal(k).map_err(|e| e.to_string())?;
    let grid = standard_grid().map_err(|e| e.to_string())?;
    let bound = tol::SCHMID_RESIDUAL_SCALE * h * h;
    let report = certify_output(
        &out,
        &op,
        h,
        &eq_samples,
        &grid,
        tol::PENROSE_EQUIVARIANCE,
        bound,
    )
    .map_err(|e| e.to_string())?;
    checks.push(Check::upper(
        "output_equivariance",
        report.equivariance_residual,
        tol::PENROSE_EQUIVARIANCE,
    ));
    checks.push(Check::upper(
        "output_kernel_membership",
        report.d_residual,
        bound,
    ));

    // Negative control: break the stabilizer law and require the
    // certification to flag it.
    let module2 = ds_su11(k, r.config.n_trunc).map_err(|e| e.to_string())?;
    let mut v2 = CVec::zeros(r.config.n_trunc);
    v2[0] = ONE;
    let boundary2 = matrix_coefficient_section(&module2, v2).map_err(|e| e.to_string())?;
    let corrupted = PenroseIntegrand {
        pair: Box::new(move |x: &GroupElement, kk: &KElement| {
            let theta = match kk {
                KElement::U1 { theta } => *theta,
                _ => unreachable!(),
            };
            let kg = GroupElement::torus(MatrixGroup::Su11, theta);
            let clean = boundary2.value(&x.mul(&kg))?[0];
            Ok(clean + cplx(0.0, 37.3 * theta + 1.1).exp() * cplx(0.3, 0.0) * x.matrix[(0, 1)])
        }),
        chi_weight: -k,
    };
    let tau = compact_irrep("u1", k).map_err(|e| e.to_string())?;
    let out = transform_section(&corrupted, tau, CVec::from_element(1, ONE), &quad);
    let report = certify_output(
        &out,
        &op,
        h,
        &eq_samples,
        &grid,
        tol::PENROSE_EQUIVARIANCE,
        bound,
    )
    .map_err(|e| e.to_string())?;
    checks.push(
        Check::above(
            "corrupted_control_flagged",
            report.equivariance_residual,
            1e-3,
        )
        .with_detail("equivariance residual of a deliberately broken integrand".to_string()),
    );

    Ok(SuiteReport::new("penrose", r.config.clone(), checks))
}

/// CSV trace of the kernel along the geodesic exp(t X1), t in [0, 2].
pub fn kernel_table_csv(r: &Resolved) -> Result<String, String> {
    let module = require_su11_module(r)?;
    let kernel = module_setup(r, &module)?;
    let mut out = String::from("t,re,im\n");
    for i in 0..21 {
        let t = 2.0 * (i as f64) / 20.0;
        let g = group_exp(MatrixGroup::Su11, &x1(), t).map_err(|e| e.to_string())?;
        let value = kernel.phi_scalar(&g).map_err(|e| e.to_string())?;
        out.push_str(&format!("{t},{},{}\n", value.re, value.im));
    }
    Ok(out)
}
