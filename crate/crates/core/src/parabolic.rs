//! Theta-stable parabolic subalgebras q = l + u attached to an elliptic
//! parameter, with the positivity classification of the parameter and the
//! minimal K-type weight.

use crate::error::{Error, Result};
use crate::rootdata::{rat, RootDatum, Weight};

/// How strongly the parameter is positive on u, relative to the datum's
/// fixed positive system.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PositivityClass {
    /// u is not contained in the fixed positive system (or the parameter
    /// is fully degenerate), so the standing positivity hypothesis fails
    /// for this choice of positive roots.
    NotStrictlyDominant,
    /// <lambda, a> > 0 for every root a of u, with u inside the fixed
    /// positive system.
    Basic,
    /// Additionally <lambda - 2 rho(l n k), a> > 0 on u, the hypothesis
    /// under which the transform onto Ker D is available.
    Strong,
}

impl PositivityClass {
    pub fn label(self) -> &'static str {
        match self {
            PositivityClass::NotStrictlyDominant => "not-strictly-dominant",
            PositivityClass::Basic => "basic",
            PositivityClass::Strong => "strong",
        }
    }

    pub fn at_least_basic(self) -> bool {
        !matches!(self, PositivityClass::NotStrictlyDominant)
    }
}

/// The parabolic q = l + u built from a parameter: l collects the roots
/// pairing to zero, u the roots pairing strictly positively.
#[derive(Clone, Debug)]
pub struct ThetaStableParabolic {
    pub lambda: Weight,
    pub l_roots: Vec<Weight>,
    pub u_roots: Vec<Weight>,
    pub u_cap_p: Vec<Weight>,
    pub u_cap_k: Vec<Weight>,
    /// Complex dimension of G/L.
    pub n: usize,
    /// Complex dimension of K/(L n K).
    pub s: usize,
    pub rho_u_cap_p: Weight,
    pub rho_u: Weight,
    pub rho_l_cap_k: Weight,
    /// Set when u is empty although the root system is not: the parameter
    /// pairs to zero with every root and q degenerates to all of g.
    pub degenerate: bool,
    /// Integer fundamental coordinates, the lifting condition for a
    /// character of the Levi subgroup.
    pub integral: bool,
}

/// Splits the root system by the sign of the pairing against `lambda`.
pub fn build_parabolic(rd: &RootDatum, lambda: &Weight) -> Result<ThetaStableParabolic> {
    if lambda.rank() != rd.rank {
        return Err(Error::Argument(format!(
            "lambda has rank {}, datum has rank {}",
            lambda.rank(),
            rd.rank
        )));
    }
    let mut l_roots = Vec::new();
    let mut u_roots = Vec::new();
    let mut u_cap_p = Vec::new();
    let mut u_cap_k = Vec::new();
    for root in &rd.roots {
        let value = rd.pairing(lambda, &root.coords)?;
        if value == rat(0) {
            l_roots.push(root.coords.clone());
        } else if value > rat(0) {
            u_roots.push(root.coords.clone());
            if root.compact {
                u_cap_k.push(root.coords.clone());
            } else {
                u_cap_p.push(root.coords.clone());
            }
        }
    }
    let l_cap_k_positive: Vec<Weight> = l_roots
        .iter()
        .filter(|w| {
            rd.roots
                .iter()
                .any(|r| &r.coords == *w && r.compact && r.positive)
        })
        .cloned()
        .collect();
    let rho_u_cap_p = rd.rho_of(&u_cap_p);
    let rho_u = rd.rho_of(&u_roots);
    let rho_l_cap_k = rd.rho_of(&l_cap_k_positive);
    let degenerate = u_roots.is_empty() && !rd.roots.is_empty();
    let integral = rd.is_integral(lambda)?;
    Ok(ThetaStableParabolic {
        lambda: lambda.clone(),
        n: u_roots.len(),
        s: u_cap_k.len(),
        l_roots,
        u_roots,
        u_cap_p,
        u_cap_k,
        rho_u_cap_p,
        rho_u,
        rho_l_cap_k,
        degenerate,
        integral,
    })
}

/// Classifies the parameter's positivity relative to the datum's fixed
/// positive system.
pub fn positivity_class(pq: &ThetaStableParabolic, rd: &RootDatum) -> Result<PositivityClass> {
    if pq.degenerate {
        return Ok(PositivityClass::NotStrictlyDominant);
    }
    // u inside the fixed positive system is the same as dominance of lambda.
    for w in &pq.u_roots {
        let in_positive = rd.roots.iter().any(|r| &r.coords == w && r.positive);
        if !in_positive {
            return Ok(PositivityClass::NotStrictlyDominant);
        }
    }
    let shifted = &pq.lambda - &pq.rho_l_cap_k.scale(rat(2));
    for w in &pq.u_roots {
        if rd.pairing(&shifted, w)? <= rat(0) {
            return Ok(PositivityClass::Basic);
        }
    }
    Ok(PositivityClass::Strong)
}

/// Highest weight of the bottom-layer K-type, lambda + 2 rho(u n p).
pub fn minimal_k_type_weight(pq: &ThetaStableParabolic) -> Result<Weight> {
    if pq.degenerate {
        return Err(Error::Argument(
            "degenerate parameter: u is empty, no bottom-layer K-type".into(),
        ));
    }
    Ok(&pq.lambda + &pq.rho_u_cap_p.scale(rat(2)))
}

/// Checks that u is closed under root addition, i.e. q is a subalgebra.
pub fn u_closed_under_bracket(pq: &ThetaStableParabolic, rd: &RootDatum) -> bool {
    for a in &pq.u_roots {
        for b in &pq.u_roots {
            let sum = a + b;
            if rd.is_root(&sum) && !pq.u_roots.contains(&sum) {
                return false;
            }
        }
    }
    true
}
