//! Exact cone and lattice machinery over the character lattice `Z^n` of a
//! torus.
//!
//! An invariant algebra on a torus whose spectrum is the semigroup `S`
//! generated by a finite set of characters is antisymmetric exactly when
//! `S ∩ (-S) = {0}`. Membership questions in `S` are integer programs; all of
//! them are avoided through the following reduction, used by
//! [`cone_is_pointed`] and [`is_antisymmetric_semigroup`]:
//!
//! > `S ∩ (-S) ≠ {0}` iff some nonzero nonnegative combination of the
//! > (nonzero) generators vanishes.
//! >
//! > If `s, -s ∈ S` with `s ≠ 0`, adding their representations gives a
//! > nonnegative integer combination equal to zero with some coefficient
//! > positive. Conversely, clear denominators in `Σ yᵢgᵢ = 0`, pick `yᵢ > 0`;
//! > then `gᵢ ∈ S` and `-gᵢ = (yᵢ-1)gᵢ + Σ_{j≠i} yⱼgⱼ ∈ S`.
//!
//! By Gordan's alternative the vanishing combination exists iff there is no
//! functional `λ` with `⟨λ, g⟩ ≥ 1` on every generator, so a single exact LP
//! decides pointedness and returns a certificate for either answer.

mod enumerate;
mod hnf;
pub mod lp;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use enumerate::{semigroup_enumerate, SemigroupBall, DEFAULT_ENUMERATION_CAP};
pub use lp::{LpOutcome, Rational, RationalLp, Relation, VarKind};

use crate::error::{Error, Result};
use lp::int;

/// A character of an n-torus, identified with a point of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn pair(&self, xi: &[Rational]) -> Rational {
        self.0.iter().zip(xi).map(|(&w, x)| x * int(w)).sum()
    }

    pub fn pair_f64(&self, xi: &[f64]) -> f64 {
        self.0.iter().zip(xi).map(|(&w, x)| w as f64 * x).sum()
    }

    fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&x| int(x)).collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Generators of a subsemigroup of `Z^n`.
///
/// Nonzero generators are deduplicated in first-seen order. A zero generator
/// is the identity character and is only recorded in `has_zero`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSemigroup {
    dim: usize,
    generators: Vec<WeightVector>,
    has_zero: bool,
}

impl WeightSemigroup {
    pub fn new(dim: usize, gens: impl IntoIterator<Item = WeightVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("lattice dimension must be at least 1".into()));
        }
        let mut generators: Vec<WeightVector> = Vec::new();
        let mut has_zero = false;
        for g in gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            if g.is_zero() {
                has_zero = true;
            } else if !generators.contains(&g) {
                generators.push(g);
            }
        }
        Ok(Self {
            dim,
            generators,
            has_zero,
        })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        Self::new(dim, rows.iter().map(|r| WeightVector::new(r.to_vec())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The nonzero generators.
    pub fn generators(&self) -> &[WeightVector] {
        &self.generators
    }

    pub fn has_zero(&self) -> bool {
        self.has_zero
    }

    pub fn max_entry(&self) -> i64 {
        self.generators.iter().map(WeightVector::sup_norm).max().unwrap_or(0)
    }
}

/// A sublattice of `Z^n` in canonical Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    dim: usize,
    vectors: Vec<WeightVector>,
}

impl LatticeBasis {
    /// The lattice spanned by `gens`, reduced to Hermite normal form.
    pub fn from_generators(dim: usize, gens: &[WeightVector]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = gens.iter().map(WeightVector::to_big).collect();
        let hf = hnf::hermite(&rows, dim);
        let vectors = hf.h[..hf.rank()]
            .iter()
            .map(|r| to_i64_vector(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, vectors })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[WeightVector] {
        &self.vectors
    }

    /// Exact integer membership.
    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let rows: Vec<Vec<BigInt>> = self.vectors.iter().map(WeightVector::to_big).collect();
        let pivots: Vec<usize> = self
            .vectors
            .iter()
            .map(|v| v.0.iter().position(|&c| c != 0).expect("basis vectors are nonzero"))
            .collect();
        let x: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        hnf::reduces_to_zero(&rows, &pivots, &x)
    }
}

fn to_i64_vector(v: &[BigInt]) -> Result<WeightVector> {
    v.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()
        .map(WeightVector::new)
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Answer and certificate for pointedness of `cone(generators)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Pointedness {
    /// No nonzero generators.
    Trivial,
    /// `⟨functional, g⟩ ≥ 1` for every nonzero generator.
    Pointed { functional: Vec<Rational> },
    /// Nonnegative integer coefficients, one per nonzero generator, not all
    /// zero, whose combination of the generators is zero.
    NotPointed { combination: Vec<BigInt> },
}

impl Pointedness {
    pub fn is_pointed(&self) -> bool {
        !matches!(self, Pointedness::NotPointed { .. })
    }

    /// Exact re-check of the certificate against `sg`.
    pub fn validate(&self, sg: &WeightSemigroup) -> bool {
        match self {
            Pointedness::Trivial => sg.generators().is_empty(),
            Pointedness::Pointed { functional } => validates_functional(sg.generators(), functional),
            Pointedness::NotPointed { combination } => validates_zero_combination(sg.generators(), combination),
        }
    }
}

pub fn validates_functional(gens: &[WeightVector], functional: &[Rational]) -> bool {
    gens.iter()
        .all(|g| functional.len() == g.dim() && g.pair(functional) >= Rational::one())
}

pub fn validates_zero_combination(gens: &[WeightVector], combination: &[BigInt]) -> bool {
    if combination.len() != gens.len()
        || combination.iter().any(Signed::is_negative)
        || combination.iter().all(Zero::is_zero)
    {
        return false;
    }
    let dim = gens.first().map_or(0, WeightVector::dim);
    (0..dim).all(|k| {
        combination
            .iter()
            .zip(gens)
            .map(|(c, g)| c * BigInt::from(g.0[k]))
            .sum::<BigInt>()
            .is_zero()
    })
}

/// Split-variable LP over `ξ = p - q` minimising `‖ξ‖₁`, with `⟨g, ξ⟩ ≥ 1`
/// for `strict` generators and `⟨g, ξ⟩ = 0` for `flat` ones.
fn functional_lp(dim: usize, strict: &[&WeightVector], flat: &[&WeightVector]) -> RationalLp {
    let mut lp = RationalLp::new(vec![VarKind::NonNegative; 2 * dim]);
    lp.minimize(vec![Rational::one(); 2 * dim]);
    let row = |g: &WeightVector| -> Vec<Rational> {
        let mut r = g.to_rational();
        r.extend(g.0.iter().map(|&x| int(-x)));
        r
    };
    for g in strict {
        lp.constrain(row(g), Relation::Ge, Rational::one());
    }
    for g in flat {
        lp.constrain(row(g), Relation::Eq, Rational::zero());
    }
    lp
}

fn unsplit(x: &[Rational], dim: usize) -> Vec<Rational> {
    (0..dim).map(|k| &x[k] - &x[dim + k]).collect()
}

/// A functional with `⟨λ, g⟩ ≥ 1` on every listed generator, if one exists.
/// Zero generators make this impossible.
pub fn pointing_functional(dim: usize, gens: &[WeightVector]) -> Option<Vec<Rational>> {
    if gens.iter().any(WeightVector::is_zero) {
        return None;
    }
    let refs: Vec<&WeightVector> = gens.iter().collect();
    match functional_lp(dim, &refs, &[]).solve() {
        LpOutcome::Optimal { x, .. } => Some(unsplit(&x, dim)),
        _ => None,
    }
}

/// A nonzero nonnegative integer combination of `gens` (zeros and repeats
/// allowed) summing to zero, if one exists.
pub fn zero_combination(dim: usize, gens: &[WeightVector]) -> Option<Vec<BigInt>> {
    if gens.is_empty() {
        return None;
    }
    let mut lp = RationalLp::new(vec![VarKind::NonNegative; gens.len()]);
    for k in 0..dim {
        lp.constrain(gens.iter().map(|g| int(g.0[k])).collect(), Relation::Eq, Rational::zero());
    }
    lp.constrain(vec![Rational::one(); gens.len()], Relation::Eq, Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(primitive_integer(&x)),
        _ => None,
    }
}

pub fn cone_is_pointed(sg: &WeightSemigroup) -> Pointedness {
    let gens = sg.generators();
    if gens.is_empty() {
        return Pointedness::Trivial;
    }
    let refs: Vec<&WeightVector> = gens.iter().collect();
    match functional_lp(sg.dim(), &refs, &[]).solve() {
        LpOutcome::Optimal { x, .. } => Pointedness::Pointed {
            functional: unsplit(&x, sg.dim()),
        },
        // The multipliers of the `≥ 1` rows are nonnegative and annihilate
        // every column pair, i.e. they form a vanishing combination.
        LpOutcome::Infeasible { farkas } => Pointedness::NotPointed {
            combination: primitive_integer(&farkas),
        },
        LpOutcome::Unbounded => unreachable!("an L1 objective is bounded below"),
    }
}

/// `S ∩ (-S) = {0}` for the semigroup generated by `sg`.
pub fn is_antisymmetric_semigroup(sg: &WeightSemigroup) -> bool {
    cone_is_pointed(sg).is_pointed()
}

/// `ξ` with `⟨g, ξ⟩ ≥ 1` for every generator, or `None`. A zero generator
/// (the constant character) rules this out.
pub fn strict_positive_functional(sg: &WeightSemigroup) -> Option<Vec<Rational>> {
    if sg.has_zero() {
        return None;
    }
    match cone_is_pointed(sg) {
        Pointedness::Pointed { functional } => Some(functional),
        Pointedness::Trivial => Some(vec![Rational::zero(); sg.dim()]),
        Pointedness::NotPointed { .. } => None,
    }
}

/// For each nonzero generator, whether its negative lies in the rational
/// cone spanned by all generators.
pub fn lineality_members(sg: &WeightSemigroup) -> Vec<bool> {
    let gens = sg.generators();
    gens.iter()
        .map(|target| {
            let mut lp = RationalLp::new(vec![VarKind::NonNegative; gens.len()]);
            for k in 0..sg.dim() {
                lp.constrain(gens.iter().map(|g| int(g.0[k])).collect(), Relation::Eq, int(-target.0[k]));
            }
            matches!(lp.solve(), LpOutcome::Optimal { .. })
        })
        .collect()
}

/// The lattice generated by generators lying in the lineality space of the
/// cone; rank zero iff the semigroup is antisymmetric.
pub fn lineality_lattice(sg: &WeightSemigroup) -> Result<LatticeBasis> {
    let members: Vec<WeightVector> = sg
        .generators()
        .iter()
        .zip(lineality_members(sg))
        .filter(|(_, m)| *m)
        .map(|(g, _)| g.clone())
        .collect();
    LatticeBasis::from_generators(sg.dim(), &members)
}

/// `ξ` vanishing on the lineality generators and at least 1 on the others.
pub fn relint_dual_point(sg: &WeightSemigroup) -> Result<Vec<Rational>> {
    let members = lineality_members(sg);
    let (mut flat, mut strict) = (Vec::new(), Vec::new());
    for (g, m) in sg.generators().iter().zip(members) {
        if m {
            flat.push(g);
        } else {
            strict.push(g);
        }
    }
    match functional_lp(sg.dim(), &strict, &flat).solve() {
        LpOutcome::Optimal { x, .. } => Ok(unsplit(&x, sg.dim())),
        other => Err(Error::Solver(format!("relative-interior LP failed: {other:?}"))),
    }
}

/// All `c ∈ Z^m` with `Σ cⱼ wⱼ = 0`, where `weights` lists `w₁..w_m`.
pub fn integer_kernel(weights: &[WeightVector]) -> Result<LatticeBasis> {
    let m = weights.len();
    let dim = weights.first().map_or(0, WeightVector::dim);
    if let Some(bad) = weights.iter().find(|w| w.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let rows: Vec<Vec<BigInt>> = weights.iter().map(WeightVector::to_big).collect();
    let hf = hnf::hermite(&rows, dim);
    let kernel = hf.u[hf.rank()..]
        .iter()
        .map(|r| to_i64_vector(r))
        .collect::<Result<Vec<_>>>()?;
    LatticeBasis::from_generators(m, &kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(rows: &[&[i64]]) -> WeightSemigroup {
        WeightSemigroup::from_rows(rows).unwrap()
    }

    fn rat(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn wv(v: &[i64]) -> WeightVector {
        WeightVector::new(v.to_vec())
    }

    #[test]
    fn positive_orthant_is_pointed() {
        let s = sg(&[&[1, 0], &[0, 1]]);
        let p = cone_is_pointed(&s);
        assert_eq!(p, Pointedness::Pointed { functional: rat(&[1, 1]) });
        assert!(p.validate(&s));
    }

    #[test]
    fn opposite_pair_is_not_pointed() {
        let s = sg(&[&[1], &[-1]]);
        let p = cone_is_pointed(&s);
        assert_eq!(
            p,
            Pointedness::NotPointed {
                combination: vec![BigInt::from(1), BigInt::from(1)]
            }
        );
        assert!(p.validate(&s));
    }

    #[test]
    fn skewed_pair_is_pointed() {
        let s = sg(&[&[2, -1], &[-1, 2]]);
        // a + b >= 2 follows from adding the two constraints, so (1,1) is
        // the unique L1-minimal certificate.
        assert_eq!(cone_is_pointed(&s), Pointedness::Pointed { functional: rat(&[1, 1]) });
        let ball = semigroup_enumerate(2, s.generators(), 10, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(ball.opposite_pair().is_none());
    }

    #[test]
    fn antisymmetry_examples() {
        assert!(is_antisymmetric_semigroup(&sg(&[&[1], &[2]])));
        assert!(!is_antisymmetric_semigroup(&sg(&[&[1, 0], &[-1, 0], &[0, 1]])));
        let s = sg(&[&[3, -1], &[-1, 3], &[1, 1]]);
        assert!(is_antisymmetric_semigroup(&s));
        let ball = semigroup_enumerate(2, s.generators(), 12, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(ball.opposite_pair().is_none());
    }

    #[test]
    fn zero_generators_are_identity() {
        let s = sg(&[&[0, 0], &[1, 0], &[1, 0]]);
        assert!(s.has_zero());
        assert_eq!(s.generators().len(), 1);
        assert!(is_antisymmetric_semigroup(&s));
        assert!(strict_positive_functional(&s).is_none());
        let only_zero = sg(&[&[0]]);
        assert_eq!(cone_is_pointed(&only_zero), Pointedness::Trivial);
        assert!(is_antisymmetric_semigroup(&only_zero));
    }

    #[test]
    fn lineality_examples() {
        assert_eq!(lineality_lattice(&sg(&[&[1, 0], &[0, 1]])).unwrap().rank(), 0);
        let l = lineality_lattice(&sg(&[&[1, 0], &[-1, 0], &[0, 1]])).unwrap();
        assert_eq!(l.vectors(), &[wv(&[1, 0])]);
        let l = lineality_lattice(&sg(&[&[1, 1], &[-1, -1], &[1, 0]])).unwrap();
        assert_eq!(l.vectors(), &[wv(&[1, 1])]);
        assert!(l.contains(&[-3, -3]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel(&[wv(&[1]), wv(&[2])]).unwrap();
        assert_eq!(k.vectors(), &[wv(&[2, -1])]);
        assert_eq!(integer_kernel(&[wv(&[1, 0]), wv(&[0, 1])]).unwrap().rank(), 0);
        let k = integer_kernel(&[wv(&[1, 1]), wv(&[1, -1]), wv(&[2, 0])]).unwrap();
        assert_eq!(k.vectors(), &[wv(&[1, 1, -1])]);
        // bounded search: every small kernel element is a multiple of (1,1,-1)
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    if a + b + 2 * c == 0 && a - b == 0 {
                        assert!(k.contains(&[a, b, c]));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // weights 2 and 4: the kernel is generated by (2,-1), not (4,-2)
        let k = integer_kernel(&[wv(&[2]), wv(&[4])]).unwrap();
        assert_eq!(k.vectors(), &[wv(&[2, -1])]);
    }

    #[test]
    fn strict_functional_examples() {
        assert_eq!(strict_positive_functional(&sg(&[&[1], &[2]])), Some(rat(&[1])));
        assert_eq!(strict_positive_functional(&sg(&[&[1], &[-1]])), None);
        let xi = strict_positive_functional(&sg(&[&[2, -1], &[-1, 2]])).unwrap();
        assert_eq!(xi, rat(&[1, 1]));
    }

    #[test]
    fn relint_examples() {
        assert_eq!(relint_dual_point(&sg(&[&[1, 0], &[0, 1]])).unwrap(), rat(&[1, 1]));
        assert_eq!(relint_dual_point(&sg(&[&[1, 0], &[-1, 0], &[0, 1]])).unwrap(), rat(&[0, 1]));
        assert_eq!(relint_dual_point(&sg(&[&[1, 1], &[-1, -1], &[1, 0]])).unwrap(), rat(&[1, -1]));
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![
            Rational::new(BigInt::from(1), BigInt::from(2)),
            Rational::new(BigInt::from(3), BigInt::from(4)),
        ];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(2), BigInt::from(3)]);
    }
}
