//! Sparse multivariate polynomial arithmetic in the monomial basis, problem
//! ingestion and the slack-variable transformation.
//!
//! Polynomials are maps from exponent tuples to nonzero `f64` coefficients,
//! kept in graded-lexicographic order so that evaluation and serialization
//! are deterministic. Coefficients are plain doubles; the downstream solver
//! is floating point, so exact arithmetic would buy nothing.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exponent tuple addressing one monomial `x^n = prod_i x_i^{n_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The all-zero multi-index (constant monomial) in the given dimension.
    pub fn zero(dimension: usize) -> Self {
        MultiIndex(vec![0; dimension])
    }

    /// `x_axis^power` as a multi-index.
    pub fn axis_power(dimension: usize, axis: usize, power: u32) -> Self {
        assert!(axis < dimension, "axis {axis} out of range for dimension {dimension}");
        let mut e = vec![0; dimension];
        e[axis] = power;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|n| = sum_i n_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// Entrywise sum, the exponent of a monomial product.
    pub fn sum(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Pad with zero exponents up to `dimension` trailing coordinates.
    fn padded(&self, dimension: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e.resize(dimension, 0);
        MultiIndex(e)
    }
}

// Graded lexicographic order: total degree first, then lexicographic on the
// exponent tuple. This is the canonical term order everywhere in the crate.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero polynomial is not a valid operand here")]
    ZeroPolynomial,
    #[error("problem degree is zero; there is nothing to optimize")]
    DegenerateProblem,
}

/// Sparse multivariate polynomial: nonzero coefficients keyed by multi-index.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePoly {
    dimension: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl SparsePoly {
    pub fn zero(dimension: usize) -> Self {
        assert!(dimension > 0, "dimension must be positive");
        SparsePoly { dimension, terms: BTreeMap::new() }
    }

    pub fn constant(dimension: usize, value: f64) -> Self {
        SparsePoly::zero(dimension).with_term(&vec![0; dimension], value)
    }

    /// The coordinate polynomial `x_axis`.
    pub fn variable(dimension: usize, axis: usize) -> Self {
        let mut e = vec![0u32; dimension];
        assert!(axis < dimension, "axis {axis} out of range for dimension {dimension}");
        e[axis] = 1;
        SparsePoly::zero(dimension).with_term(&e, 1.0)
    }

    /// Add `coeff * x^exponents` to the polynomial. Panics on a length
    /// mismatch; intended for literal construction in generators and tests.
    pub fn with_term(mut self, exponents: &[u32], coeff: f64) -> Self {
        assert_eq!(
            exponents.len(),
            self.dimension,
            "exponent tuple length {} does not match dimension {}",
            exponents.len(),
            self.dimension
        );
        let key = MultiIndex::new(exponents.to_vec());
        let entry = self.terms.entry(key).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.retain(|_, c| *c != 0.0);
        }
        self
    }

    /// Build from an explicit term list, summing duplicates and dropping
    /// exact zeros.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut map = BTreeMap::new();
        for (n, c) in terms {
            if n.len() != dimension {
                return Err(PolyError::DimensionMismatch { expected: dimension, got: n.len() });
            }
            *map.entry(n).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(SparsePoly { dimension, terms: map })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Maximum total degree over the support; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|n| n.degree() as usize).max().unwrap_or(0)
    }

    /// Largest single exponent appearing on any one variable.
    pub fn max_axis_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|n| n.exponents().iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of support points `N(p)`.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(n, c)| (n, *c))
    }

    pub fn coefficient(&self, n: &MultiIndex) -> f64 {
        self.terms.get(n).copied().unwrap_or(0.0)
    }

    /// `sum_n |p_n|`, an upper bound for `sup_{[-1,1]^D} |p|`.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Evaluate at `x` by summing terms in graded lex order.
    pub fn eval(&self, x: &[f64]) -> Result<f64, PolyError> {
        if x.len() != self.dimension {
            return Err(PolyError::DimensionMismatch { expected: self.dimension, got: x.len() });
        }
        let mut acc = 0.0;
        for (n, c) in &self.terms {
            let mut mono = c * 1.0;
            for (xi, &e) in x.iter().zip(n.exponents()) {
                if e > 0 {
                    mono *= xi.powi(e as i32);
                }
            }
            acc += mono;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        if other.dimension != self.dimension {
            return Err(PolyError::DimensionMismatch { expected: self.dimension, got: other.dimension });
        }
        let mut terms = self.terms.clone();
        for (n, c) in &other.terms {
            *terms.entry(n.clone()).or_insert(0.0) += c;
        }
        terms.retain(|_, c| *c != 0.0);
        Ok(SparsePoly { dimension: self.dimension, terms })
    }

    pub fn scale(&self, factor: f64) -> SparsePoly {
        if factor == 0.0 {
            return SparsePoly::zero(self.dimension);
        }
        SparsePoly {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(n, c)| (n.clone(), c * factor)).collect(),
        }
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.add(&other.scale(-1.0))
    }

    /// Coefficient-wise convolution. Exact cancellations are removed, so the
    /// support of the product can be strictly smaller than the sumset.
    pub fn multiply(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        if other.dimension != self.dimension {
            return Err(PolyError::DimensionMismatch { expected: self.dimension, got: other.dimension });
        }
        let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (na, ca) in &self.terms {
            for (nb, cb) in &other.terms {
                *terms.entry(na.sum(nb)).or_insert(0.0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        Ok(SparsePoly { dimension: self.dimension, terms })
    }

    /// `g^2`, the squared-constraint polynomial whose inner product with the
    /// moment vector pins a measure's support to the variety `g = 0`.
    pub fn square_to_gamma(&self) -> Result<SparsePoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        self.multiply(self)
    }

    /// `∂p/∂x_axis`.
    pub fn partial_derivative(&self, axis: usize) -> SparsePoly {
        assert!(axis < self.dimension);
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            let e = n.exponent(axis);
            if e == 0 {
                continue;
            }
            let mut exps = n.exponents().to_vec();
            exps[axis] = e - 1;
            *terms.entry(MultiIndex::new(exps)).or_insert(0.0) += c * e as f64;
        }
        terms.retain(|_, c| *c != 0.0);
        SparsePoly { dimension: self.dimension, terms }
    }

    /// Reinterpret in a larger ambient dimension (new trailing coordinates
    /// do not appear in any term).
    pub fn embed(&self, dimension: usize) -> Result<SparsePoly, PolyError> {
        if dimension < self.dimension {
            return Err(PolyError::DimensionMismatch { expected: self.dimension, got: dimension });
        }
        Ok(SparsePoly {
            dimension,
            terms: self.terms.iter().map(|(n, c)| (n.padded(dimension), *c)).collect(),
        })
    }
}

/// A polynomial optimization problem over `[-1,1]^D`: minimize `objective`
/// subject to `g = 0` for each equality and `h >= 0` for each inequality.
#[derive(Clone, PartialEq, Debug)]
pub struct ProblemSpec {
    dimension: usize,
    objective: SparsePoly,
    equalities: Vec<SparsePoly>,
    inequalities: Vec<SparsePoly>,
}

impl ProblemSpec {
    /// Validates that all members share the objective's dimension and that
    /// the problem degree is at least one. Zero constraints (the degenerate
    /// identity `0 = 0`) are dropped with a warning.
    pub fn new(
        objective: SparsePoly,
        equalities: Vec<SparsePoly>,
        inequalities: Vec<SparsePoly>,
    ) -> Result<Self, PolyError> {
        let dimension = objective.dimension();
        let mut eqs = Vec::with_capacity(equalities.len());
        for (j, g) in equalities.into_iter().enumerate() {
            if g.dimension() != dimension {
                return Err(PolyError::DimensionMismatch { expected: dimension, got: g.dimension() });
            }
            if g.is_zero() {
                log::warn!("dropping zero equality constraint #{j}");
                continue;
            }
            eqs.push(g);
        }
        let mut ineqs = Vec::with_capacity(inequalities.len());
        for (k, h) in inequalities.into_iter().enumerate() {
            if h.dimension() != dimension {
                return Err(PolyError::DimensionMismatch { expected: dimension, got: h.dimension() });
            }
            if h.is_zero() {
                log::warn!("dropping zero inequality constraint #{k}");
                continue;
            }
            ineqs.push(h);
        }
        let spec = ProblemSpec { dimension, objective, equalities: eqs, inequalities: ineqs };
        if spec.degree() < 1 {
            return Err(PolyError::DegenerateProblem);
        }
        Ok(spec)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn objective(&self) -> &SparsePoly {
        &self.objective
    }

    pub fn equalities(&self) -> &[SparsePoly] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[SparsePoly] {
        &self.inequalities
    }

    /// Problem degree `d`: maximum total degree over the objective and all
    /// constraints.
    pub fn degree(&self) -> usize {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .map(|p| p.degree())
            .fold(self.objective.degree(), usize::max)
    }

    /// Rewrite every inequality `h(x) >= 0` as the equality
    /// `h(x) - (s y)^2 = 0` with a fresh slack coordinate `y` confined to
    /// `[-1,1]`.
    ///
    /// The rescaling `s = sqrt(sum_n |h_n|)` makes the slack representable on
    /// the hypercube: `sup h <= s^2` over the box, so `y = sqrt(h)/s <= 1`.
    /// No-op when there are no inequalities.
    pub fn slackify(&self) -> ProblemSpec {
        let k = self.inequalities.len();
        if k == 0 {
            return self.clone();
        }
        let dim = self.dimension + k;
        let objective = self.objective.embed(dim).expect("embedding cannot shrink");
        let mut equalities: Vec<SparsePoly> =
            self.equalities.iter().map(|g| g.embed(dim).expect("embedding cannot shrink")).collect();
        for (idx, h) in self.inequalities.iter().enumerate() {
            let s_squared = h.coeff_abs_sum();
            let slack_sq = SparsePoly::zero(dim)
                .with_term(MultiIndex::axis_power(dim, self.dimension + idx, 2).exponents(), s_squared);
            let eq = h
                .embed(dim)
                .expect("embedding cannot shrink")
                .sub(&slack_sq)
                .expect("dimensions agree");
            equalities.push(eq);
        }
        ProblemSpec { dimension: dim, objective, equalities, inequalities: Vec::new() }
    }
}

// ---------------------------------------------------------------------------
// Problem file format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u32>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    dimension: usize,
    objective: Vec<TermRepr>,
    equalities: Vec<Vec<TermRepr>>,
    inequalities: Vec<Vec<TermRepr>>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid problem JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: exponent tuple has length {got}, expected {expected}")]
    ExponentLength { context: String, got: usize, expected: usize },
    #[error("{context}: coefficient {value} is not finite")]
    NonFiniteCoefficient { context: String, value: f64 },
    #[error("problem dimension must be positive")]
    ZeroDimension,
    #[error(transparent)]
    Invalid(#[from] PolyError),
}

fn poly_from_repr(dimension: usize, terms: &[TermRepr], context: &str) -> Result<SparsePoly, ParseError> {
    let mut collected = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        if t.exponents.len() != dimension {
            return Err(ParseError::ExponentLength {
                context: format!("{context} term {i}"),
                got: t.exponents.len(),
                expected: dimension,
            });
        }
        if !t.coeff.is_finite() {
            return Err(ParseError::NonFiniteCoefficient {
                context: format!("{context} term {i}"),
                value: t.coeff,
            });
        }
        collected.push((MultiIndex::new(t.exponents.clone()), t.coeff));
    }
    Ok(SparsePoly::from_terms(dimension, collected)?)
}

fn poly_to_repr(p: &SparsePoly) -> Vec<TermRepr> {
    p.terms().map(|(n, c)| TermRepr { exponents: n.exponents().to_vec(), coeff: c }).collect()
}

/// Parse the UTF-8 JSON problem format. Errors carry line/field context.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, ParseError> {
    let repr: ProblemRepr = serde_json::from_str(text)?;
    if repr.dimension == 0 {
        return Err(ParseError::ZeroDimension);
    }
    let objective = poly_from_repr(repr.dimension, &repr.objective, "objective")?;
    let mut equalities = Vec::with_capacity(repr.equalities.len());
    for (j, terms) in repr.equalities.iter().enumerate() {
        equalities.push(poly_from_repr(repr.dimension, terms, &format!("equality {j}"))?);
    }
    let mut inequalities = Vec::with_capacity(repr.inequalities.len());
    for (k, terms) in repr.inequalities.iter().enumerate() {
        inequalities.push(poly_from_repr(repr.dimension, terms, &format!("inequality {k}"))?);
    }
    Ok(ProblemSpec::new(objective, equalities, inequalities)?)
}

/// Serialize to the problem file format: terms in graded lex order,
/// coefficients in shortest round-trip decimal form.
pub fn serialize_problem(problem: &ProblemSpec) -> String {
    let repr = ProblemRepr {
        dimension: problem.dimension(),
        objective: poly_to_repr(problem.objective()),
        equalities: problem.equalities().iter().map(poly_to_repr).collect(),
        inequalities: problem.inequalities().iter().map(poly_to_repr).collect(),
    };
    serde_json::to_string_pretty(&repr).expect("problem serialization cannot fail")
}
