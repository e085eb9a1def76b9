//! Exact root-system and real-form structure data.
//!
//! Everything here is rational arithmetic: weights are stored as coordinate
//! vectors in the basis of simple roots, and the invariant form is the Gram
//! matrix of the simple roots normalized so that long roots have squared
//! length 2. The catalog covers the equal-rank real forms su(1,1) and
//! su(2,1), plus compact su(2) as a K-side test instance.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// Exact scalar type for all structure-theoretic computations.
pub type Rat = num_rational::Rational64;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Builds the rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

/// A weight (or root) in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![rat(0); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == rat(0))
    }

    pub fn scale(&self, c: Rat) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect())
    }

    /// Coordinates rendered as exact strings, e.g. `["3/2", "-1"]`.
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }

    /// Parses a comma-separated list of rationals such as `"1,-3/2"`.
    pub fn parse_list(s: &str) -> Result<Weight> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Rat>()
                    .map_err(|e| Error::Argument(format!("bad rational `{}`: {}", t.trim(), e)))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Argument("empty weight".into()));
        }
        Ok(Weight(coords))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Catalog of supported real forms.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Instance {
    Su11,
    Su21,
    Su2Compact,
}

impl Instance {
    pub fn id(self) -> &'static str {
        match self {
            Instance::Su11 => "su11",
            Instance::Su21 => "su21",
            Instance::Su2Compact => "su2-compact",
        }
    }

    pub fn from_id(id: &str) -> Result<Instance> {
        match id {
            "su11" => Ok(Instance::Su11),
            "su21" => Ok(Instance::Su21),
            "su2-compact" => Ok(Instance::Su2Compact),
            other => Err(Error::Config(format!(
                "unknown instance `{other}` (expected su11, su21 or su2-compact)"
            ))),
        }
    }
}

/// A root together with its compactness flag and sign relative to the
/// fixed positive system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Root {
    pub coords: Weight,
    /// True when the root space lies in k, false when it lies in p.
    pub compact: bool,
    pub positive: bool,
}

/// Root datum of an equal-rank real form: all roots of (g, h) with the
/// Cartan involution recorded as a compactness flag per root.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub instance: Instance,
    pub rank: usize,
    pub simple_roots: Vec<Weight>,
    pub roots: Vec<Root>,
    /// Gram matrix of the simple roots for the normalized invariant form.
    pub form: Vec<Vec<Rat>>,
}

/// Instantiates the root datum of a named real form.
pub fn build_root_datum(catalog_id: &str) -> Result<RootDatum> {
    let instance = Instance::from_id(catalog_id)?;
    Ok(match instance {
        Instance::Su11 => rank_one(instance, false),
        Instance::Su2Compact => rank_one(instance, true),
        Instance::Su21 => su21(),
    })
}

fn rank_one(instance: Instance, compact: bool) -> RootDatum {
    let alpha = Weight(vec![rat(1)]);
    RootDatum {
        instance,
        rank: 1,
        simple_roots: vec![alpha.clone()],
        roots: vec![
            Root {
                coords: alpha.clone(),
                compact,
                positive: true,
            },
            Root {
                coords: -&alpha,
                compact,
                positive: false,
            },
        ],
        form: vec![vec![rat(2)]],
    }
}

fn su21() -> RootDatum {
    // Simple roots: alpha1 = e1 - e2 (compact, inside the u(2) block),
    // alpha2 = e2 - e3 (noncompact). The highest root alpha1 + alpha2 = e1 - e3
    // is noncompact.
    let a1 = Weight(vec![rat(1), rat(0)]);
    let a2 = Weight(vec![rat(0), rat(1)]);
    let a12 = &a1 + &a2;
    let mut roots = Vec::new();
    for (coords, compact) in [(a1.clone(), true), (a2.clone(), false), (a12, false)] {
        roots.push(Root {
            coords: coords.clone(),
            compact,
            positive: true,
        });
        roots.push(Root {
            coords: -&coords,
            compact,
            positive: false,
        });
    }
    RootDatum {
        instance: Instance::Su21,
        rank: 2,
        simple_roots: vec![a1, a2],
        roots,
        form: vec![vec![rat(2), rat(-1)], vec![rat(-1), rat(2)]],
    }
}

impl RootDatum {
    /// Normalized invariant form on weights; bilinear and symmetric.
    pub fn pairing(&self, xi: &Weight, eta: &Weight) -> Result<Rat> {
        if xi.rank() != self.rank || eta.rank() != self.rank {
            return Err(Error::Argument(format!(
                "rank mismatch: datum has rank {}, got weights of rank {} and {}",
                self.rank,
                xi.rank(),
                eta.rank()
            )));
        }
        let mut acc = rat(0);
        for (i, a) in xi.0.iter().enumerate() {
            for (j, b) in eta.0.iter().enumerate() {
                acc += a * self.form[i][j] * b;
            }
        }
        Ok(acc)
    }

    /// Cartan integer 2<a,b>/<b,b> of two roots.
    pub fn cartan_integer(&self, a: &Weight, b: &Weight) -> Result<Rat> {
        let num = self.pairing(a, b)?;
        let den = self.pairing(b, b)?;
        Ok(rat(2) * num / den)
    }

    /// Half the sum of the given weights.
    pub fn rho_of(&self, subset: &[Weight]) -> Weight {
        let mut acc = Weight::zero(self.rank);
        for w in subset {
            acc = &acc + w;
        }
        acc.scale(ratio(1, 2))
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.positive)
    }

    /// Positive compact roots, i.e. the positive system of (k, t).
    pub fn compact_positive_roots(&self) -> Vec<Weight> {
        self.roots
            .iter()
            .filter(|r| r.positive && r.compact)
            .map(|r| r.coords.clone())
            .collect()
    }

    fn find_root(&self, coords: &Weight) -> Option<&Root> {
        self.roots.iter().find(|r| &r.coords == coords)
    }

    pub fn is_root(&self, coords: &Weight) -> bool {
        self.find_root(coords).is_some()
    }

    /// Dominance of a weight with respect to the full positive system.
    pub fn is_dominant(&self, xi: &Weight) -> Result<bool> {
        for r in self.positive_roots() {
            if self.pairing(xi, &r.coords)? < rat(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dominance of a weight with respect to the compact positive system.
    pub fn is_k_dominant(&self, xi: &Weight) -> Result<bool> {
        for r in self.compact_positive_roots() {
            if self.pairing(xi, &r)? < rat(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of a weight in the fundamental-weight basis, i.e. the
    /// Cartan pairings 2<xi, a_i>/<a_i, a_i> against the simple roots.
    pub fn fundamental_coords(&self, xi: &Weight) -> Result<Vec<Rat>> {
        self.simple_roots
            .iter()
            .map(|a| self.cartan_integer(xi, a))
            .collect()
    }

    /// Converts fundamental-weight coordinates to simple-root coordinates
    /// by inverting the Cartan pairing (exact, rank <= 2).
    pub fn weight_from_fundamental(&self, m: &[Rat]) -> Result<Weight> {
        if m.len() != self.rank {
            return Err(Error::Argument(format!(
                "expected {} fundamental coordinates, got {}",
                self.rank,
                m.len()
            )));
        }
        // Solve m = C c where C[i][j] = 2<a_j, a_i>/<a_i, a_i>.
        let c = |i: usize, j: usize| -> Rat {
            let num = self.form[j][i];
            let den = self.form[i][i];
            rat(2) * num / den
        };
        match self.rank {
            1 => Ok(Weight(vec![m[0] / c(0, 0)])),
            2 => {
                let det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
                let x = (m[0] * c(1, 1) - m[1] * c(0, 1)) / det;
                let y = (c(0, 0) * m[1] - c(1, 0) * m[0]) / det;
                Ok(Weight(vec![x, y]))
            }
            r => Err(Error::Unsupported(format!("rank {r} catalog entry"))),
        }
    }

    /// True when the weight has integer fundamental coordinates, the
    /// lifting condition used for characters of the Levi factor.
    pub fn is_integral(&self, xi: &Weight) -> Result<bool> {
        Ok(self.fundamental_coords(xi)?.iter().all(|c| c.is_integer()))
    }
}

/// Exact conversion from su(2,1) epsilon-coordinates (e1, e2, e3) to
/// simple-root coordinates, projecting out the central direction.
pub fn su21_weight_from_eps(eps: [Rat; 3]) -> Weight {
    let [e1, e2, e3] = eps;
    let a = (rat(2) * e1 - e2 - e3) / rat(3);
    let b = (e1 + e2 - rat(2) * e3) / rat(3);
    Weight(vec![a, b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn su11_catalog() {
        let rd = build_root_datum("su11").unwrap();
        assert_eq!(rd.rank, 1);
        assert_eq!(rd.roots.len(), 2);
        assert!(rd.roots.iter().all(|r| !r.compact));
        let alpha = &rd.simple_roots[0];
        assert_eq!(rd.pairing(alpha, alpha).unwrap(), rat(2));
    }

    #[test]
    fn su2_compact_catalog() {
        let rd = build_root_datum("su2-compact").unwrap();
        assert_eq!(rd.rank, 1);
        assert!(rd.roots.iter().all(|r| r.compact));
    }

    #[test]
    fn su21_catalog() {
        let rd = build_root_datum("su21").unwrap();
        assert_eq!(rd.rank, 2);
        assert_eq!(rd.roots.len(), 6);
        // e1 - e2 compact; e1 - e3 and e2 - e3 noncompact.
        let e12 = su21_weight_from_eps([rat(1), rat(-1), rat(0)]);
        let e13 = su21_weight_from_eps([rat(1), rat(0), rat(-1)]);
        let e23 = su21_weight_from_eps([rat(0), rat(1), rat(-1)]);
        assert_eq!(e12, Weight(vec![rat(1), rat(0)]));
        assert_eq!(e13, Weight(vec![rat(1), rat(1)]));
        assert_eq!(e23, Weight(vec![rat(0), rat(1)]));
        for (w, compact) in [(&e12, true), (&e13, false), (&e23, false)] {
            let r = rd.roots.iter().find(|r| &r.coords == w).unwrap();
            assert_eq!(r.compact, compact);
            assert!(r.positive);
        }
        // Standard A2 pairing of adjacent roots.
        assert_eq!(rd.pairing(&e12, &e23).unwrap(), rat(-1));
    }

    #[test]
    fn unknown_instance_is_config_error() {
        assert!(matches!(build_root_datum("so5"), Err(Error::Config(_))));
    }

    #[test]
    fn cartan_matrix_matches_type() {
        for id in ["su11", "su2-compact"] {
            let rd = build_root_datum(id).unwrap();
            let a = &rd.simple_roots[0];
            assert_eq!(rd.cartan_integer(a, a).unwrap(), rat(2));
        }
        let rd = build_root_datum("su21").unwrap();
        let expected = [[rat(2), rat(-1)], [rat(-1), rat(2)]];
        for (i, row) in expected.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                assert_eq!(
                    rd.cartan_integer(&rd.simple_roots[i], &rd.simple_roots[j])
                        .unwrap(),
                    *entry
                );
            }
        }
    }

    #[test]
    fn roots_closed_under_negation_with_integral_cartan_numbers() {
        for id in ["su11", "su21", "su2-compact"] {
            let rd = build_root_datum(id).unwrap();
            for r in &rd.roots {
                let neg = -&r.coords;
                let mate = rd.find_root(&neg).expect("negative of a root is a root");
                assert_eq!(mate.compact, r.compact, "theta commutes with negation");
                assert_eq!(mate.positive, !r.positive);
                for s in &rd.roots {
                    let c = rd.cartan_integer(&r.coords, &s.coords).unwrap();
                    assert!(c.is_integer(), "Cartan number {c} not integral");
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let rd = build_root_datum("su11").unwrap();
        assert_eq!(rd.rho_of(&[]), Weight::zero(1));
        let alpha = rd.simple_roots[0].clone();
        assert_eq!(
            rd.rho_of(std::slice::from_ref(&alpha)),
            alpha.scale(ratio(1, 2))
        );

        let rd = build_root_datum("su21").unwrap();
        let e13 = su21_weight_from_eps([rat(1), rat(0), rat(-1)]);
        let e23 = su21_weight_from_eps([rat(0), rat(1), rat(-1)]);
        let expected = su21_weight_from_eps([ratio(1, 2), ratio(1, 2), rat(-1)]);
        assert_eq!(rd.rho_of(&[e13, e23]), expected);
    }

    #[test]
    fn pairing_rank_mismatch() {
        let rd = build_root_datum("su11").unwrap();
        let bad = Weight(vec![rat(1), rat(2)]);
        assert!(matches!(
            rd.pairing(&bad, &rd.simple_roots[0]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn fundamental_coordinate_round_trip() {
        for id in ["su11", "su21"] {
            let rd = build_root_datum(id).unwrap();
            let xi = if rd.rank == 1 {
                Weight(vec![ratio(7, 2)])
            } else {
                Weight(vec![ratio(5, 3), rat(-2)])
            };
            let m = rd.fundamental_coords(&xi).unwrap();
            let back = rd.weight_from_fundamental(&m).unwrap();
            assert_eq!(back, xi);
        }
    }

    #[test]
    fn integrality_detects_character_lattice() {
        let rd = build_root_datum("su11").unwrap();
        // lambda = m alpha/2 has fundamental coordinate m.
        assert!(rd.is_integral(&Weight(vec![ratio(3, 2)])).unwrap());
        assert!(!rd.is_integral(&Weight(vec![ratio(3, 4)])).unwrap());
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..8).prop_map(|(p, q)| Rat::new(p, q))
    }

    fn arb_weight(rank: usize) -> impl Strategy<Value = Weight> {
        prop::collection::vec(arb_rat(), rank).prop_map(Weight)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn pairing_symmetric_bilinear(
            a in arb_weight(2), b in arb_weight(2), c in arb_weight(2), s in arb_rat()
        ) {
            let rd = build_root_datum("su21").unwrap();
            let ab = rd.pairing(&a, &b).unwrap();
            let ba = rd.pairing(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            let lin = rd.pairing(&(&a.scale(s) + &c), &b).unwrap();
            let expect = s * ab + rd.pairing(&c, &b).unwrap();
            prop_assert_eq!(lin, expect);
            prop_assert_eq!(rd.pairing(&Weight::zero(2), &b).unwrap(), rat(0));
        }

        #[test]
        fn rho_of_symmetric_set_vanishes(picks in prop::collection::vec(any::<bool>(), 3)) {
            let rd = build_root_datum("su21").unwrap();
            let mut subset = Vec::new();
            for (root, keep) in rd.roots.iter().filter(|r| r.positive).zip(&picks) {
                if *keep {
                    subset.push(root.coords.clone());
                    subset.push(-&root.coords);
                }
            }
            prop_assert_eq!(rd.rho_of(&subset), Weight::zero(2));
        }
    }
}
