//! K-type combinatorics: Weyl dimensions, the bottom-layer cone, the
//! target space V_mu^- of the first-order operator, and numerically
//! realized K-isotypic projectors.

use crate::error::{Error, Result};
use crate::linalg::{cplx, CMat};
use crate::parabolic::ThetaStableParabolic;
use crate::penrose::QuadratureScheme;
use crate::repmodel::{CompactIrrep, KElement, KGroup};
use crate::rootdata::{rat, Instance, RootDatum, Weight};

/// A dominant K-highest weight with its Weyl dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KTypeDescriptor {
    pub highest_weight: Weight,
    pub dim: u64,
}

/// Weyl dimension of the K-type with highest weight `mu`, for the compact
/// positive system `k_positive_roots`. Exact rational arithmetic; the
/// product is an integer for dominant integral weights and the nearest
/// integer is returned after an exactness check.
pub fn weyl_dim(rd: &RootDatum, k_positive_roots: &[Weight], mu: &Weight) -> Result<u64> {
    let rho = rd.rho_of(k_positive_roots);
    let mut dim = rat(1);
    for alpha in k_positive_roots {
        let num = rd.pairing(&(mu + &rho), alpha)?;
        let den = rd.pairing(&rho, alpha)?;
        if rd.pairing(mu, alpha)? < rat(0) {
            return Err(Error::Argument(format!(
                "weight {mu} is not dominant for the given positive system"
            )));
        }
        dim *= num / den;
    }
    if !dim.is_integer() || dim < rat(1) {
        return Err(Error::Argument(format!(
            "Weyl dimension of {mu} is {dim}, not a positive integer; weight not integral"
        )));
    }
    Ok(*dim.numer() as u64)
}

/// Bundles a dominant weight with its dimension for the instance's K.
pub fn k_type(rd: &RootDatum, mu: &Weight) -> Result<KTypeDescriptor> {
    let positives = rd.compact_positive_roots();
    let dim = weyl_dim(rd, &positives, mu)?;
    Ok(KTypeDescriptor {
        highest_weight: mu.clone(),
        dim,
    })
}

/// Maps a K-highest weight to the concrete compact-group irreducible
/// carrying it for the catalog instances. For su(2,1) this is the SU(2)
/// factor of K = S(U(2) x U(1)).
pub fn k_irrep_label(rd: &RootDatum, mu: &Weight) -> Result<CompactIrrep> {
    match rd.instance {
        Instance::Su11 => {
            let w = rd.pairing(mu, &rd.simple_roots[0])?;
            if !w.is_integer() {
                return Err(Error::Argument(format!("non-integral U(1) weight {w}")));
            }
            Ok(CompactIrrep {
                group: KGroup::U1,
                weight: *w.numer(),
            })
        }
        Instance::Su2Compact | Instance::Su21 => {
            let compact = rd.compact_positive_roots();
            let alpha = compact
                .first()
                .ok_or_else(|| Error::Unsupported("instance has no compact roots".into()))?;
            let w = rd.pairing(mu, alpha)?;
            if !w.is_integer() || w < rat(0) {
                return Err(Error::Argument(format!("bad SU(2) weight {w}")));
            }
            Ok(CompactIrrep {
                group: KGroup::Su2,
                weight: *w.numer(),
            })
        }
    }
}

/// Decides whether mu' - mu is a nonnegative integer combination of the
/// given cone generators, by exhaustive bounded enumeration.
pub fn in_bottom_cone(mu_prime: &Weight, mu: &Weight, u_cap_p: &[Weight]) -> bool {
    let delta = mu_prime - mu;
    if delta.is_zero() {
        return true;
    }
    if u_cap_p.is_empty() {
        return false;
    }
    // Positive roots have nonnegative integer coordinates, so any member of
    // the cone does too, and the coordinate sum bounds the coefficient sum.
    if delta.0.iter().any(|c| !c.is_integer() || *c < rat(0)) {
        return false;
    }
    let budget: i64 = delta.0.iter().map(|c| *c.numer()).sum();
    search_cone(&delta, u_cap_p, budget)
}

fn search_cone(delta: &Weight, gens: &[Weight], budget: i64) -> bool {
    if delta.is_zero() {
        return true;
    }
    if gens.is_empty() || budget <= 0 {
        return false;
    }
    if delta.0.iter().any(|c| *c < rat(0)) {
        return false;
    }
    let head = &gens[0];
    let tail = &gens[1..];
    let mut remaining = delta.clone();
    for used in 0..=budget {
        if used > 0 {
            remaining = &remaining - head;
            if remaining.0.iter().any(|c| *c < rat(0)) {
                break;
            }
        }
        if search_cone(&remaining, tail, budget - used) {
            return true;
        }
    }
    false
}

/// The K-types of V_mu^-: the weights mu - beta over the noncompact roots
/// of u, keeping only the ones dominant for the compact positive system.
/// Non-dominant candidates carry no isotypic component and are reported
/// separately so callers can flag the convention.
#[derive(Clone, Debug)]
pub struct VmuMinus {
    pub kept: Vec<KTypeDescriptor>,
    pub dropped: Vec<Weight>,
}

pub fn vmu_minus(
    rd: &RootDatum,
    pq: &ThetaStableParabolic,
    mu: &KTypeDescriptor,
) -> Result<VmuMinus> {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for beta in &pq.u_cap_p {
        let candidate = &mu.highest_weight - beta;
        if rd.is_k_dominant(&candidate)? {
            kept.push(k_type(rd, &candidate)?);
        } else {
            dropped.push(candidate);
        }
    }
    Ok(VmuMinus { kept, dropped })
}

/// Peter-Weyl projector onto the tau-isotypic component of the unitary
/// action supplied at the quadrature nodes:
/// P = dim(tau) * sum_i w_i conj(chi_tau(k_i)) rho_W(k_i).
pub fn isotypic_projector(
    k_action: &[(KElement, CMat)],
    tau: &CompactIrrep,
    quad: &QuadratureScheme,
) -> Result<CMat> {
    if k_action.len() != quad.len() {
        return Err(Error::Config(format!(
            "action sampled at {} points but the scheme has {} nodes",
            k_action.len(),
            quad.len()
        )));
    }
    if tau.group != quad.group {
        return Err(Error::Config(
            "projector target and scheme live on different groups".into(),
        ));
    }
    let dim_w = k_action
        .first()
        .map(|(_, m)| m.nrows())
        .ok_or_else(|| Error::Config("empty quadrature scheme".into()))?;
    let mut p = CMat::zeros(dim_w, dim_w);
    let dim_tau = tau.dim() as f64;
    for ((node, rho), w) in k_action.iter().zip(&quad.weights) {
        if rho.nrows() != dim_w || rho.ncols() != dim_w {
            return Err(Error::Argument("inconsistent action matrix sizes".into()));
        }
        let chi = tau.character(node)?;
        p += rho.map(|z| z * chi.conj() * cplx(dim_tau * w, 0.0));
    }
    Ok(p)
}

/// Convenience: samples `rho_w` at the scheme's nodes and projects.
pub fn isotypic_projector_of(
    rho_w: &dyn Fn(&KElement) -> Result<CMat>,
    tau: &CompactIrrep,
    quad: &QuadratureScheme,
) -> Result<CMat> {
    let mut action = Vec::with_capacity(quad.len());
    for node in &quad.nodes {
        action.push((node.clone(), rho_w(node)?));
    }
    isotypic_projector(&action, tau, quad)
}
