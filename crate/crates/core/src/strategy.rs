//! Strategy spaces of the three models and the deterministic maps between
//! them, the cube of conditional probabilities and the frequency triangle.
//!
//! Foods are numbered 0, 1, 2. `B_j` is the offered pair that lacks food `j`
//! and `C_k` is the event "food `k` is chosen". The canonical coordinates of
//! the cube are
//!
//! * `alpha = P(C0 | B1)` (choose 0 from the pair (2, 0)),
//! * `beta  = P(C1 | B0)` (choose 1 from the pair (2, 1)),
//! * `gamma = P(C0 | B2)` (choose 0 from the pair (1, 0)).
//!
//! The remaining three nonzero conditionals are their complements.

use core::fmt;

use thiserror::Error;

/// Rounding guard for the determinant: `d <= D_TOL` is degenerate.
pub const D_TOL: f64 = 1e-12;

/// Frequencies in `[-Q_TOL, 0)` are clamped to zero, below that rejected.
pub const Q_TOL: f64 = 1e-12;

/// Normalization tolerance of strategy vectors.
pub const STRATEGY_TOL: f64 = 1e-12;

/// Normalization tolerance of frequency and occupancy triples.
pub const SIMPLEX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StrategyError {
    #[error("component {index} is not finite")]
    NonFinite { index: usize },
    #[error("component {index} is negative ({value})")]
    Negative { index: usize, value: f64 },
    #[error("components sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("squared norm is {norm2}, expected 1")]
    NotUnit { norm2: f64 },
    #[error("{name} = {value} lies outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
}

/// The strategy space a point comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Classical,
    Prequant,
    Quant,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Classical, Model::Prequant, Model::Quant];

    pub fn name(self) -> &'static str {
        match self {
            Model::Classical => "classical",
            Model::Prequant => "prequant",
            Model::Quant => "quant",
        }
    }

    /// Number of real coordinates of a strategy of this model.
    pub fn coordinate_count(self) -> usize {
        match self {
            Model::Classical => 8,
            Model::Prequant => 16,
            Model::Quant => 3,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The eight deterministic choice functions.
///
/// `entries[k]` lists what `f_k` picks from the pairs (1,0), (2,0), (2,1),
/// in that order. Bit 2 of `k` selects the larger food of (1,0), bit 1 of
/// (2,0) and bit 0 of (2,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChoiceFunctionTable {
    pub entries: [[u8; 3]; 8],
}

/// The offered pairs in table order.
pub const PAIRS: [(u8, u8); 3] = [(1, 0), (2, 0), (2, 1)];

const CHOICE_TABLE: ChoiceFunctionTable = ChoiceFunctionTable {
    entries: [
        [0, 0, 1],
        [0, 0, 2],
        [0, 2, 1],
        [0, 2, 2],
        [1, 0, 1],
        [1, 0, 2],
        [1, 2, 1],
        [1, 2, 2],
    ],
};

pub fn choice_table() -> ChoiceFunctionTable {
    CHOICE_TABLE
}

impl ChoiceFunctionTable {
    /// What `f_k` picks from pair `pair` (an index into [`PAIRS`]).
    pub fn choice(&self, k: usize, pair: usize) -> u8 {
        self.entries[k][pair]
    }
}

fn check_finite(values: &[f64]) -> Result<(), StrategyError> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(StrategyError::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_unit(values: &[f64]) -> Result<(), StrategyError> {
    check_finite(values)?;
    let norm2: f64 = values.iter().map(|v| v * v).sum();
    if libm::fabs(norm2 - 1.0) > STRATEGY_TOL {
        return Err(StrategyError::NotUnit { norm2 });
    }
    Ok(())
}

fn check_probability_vector(values: &[f64], tol: f64) -> Result<(), StrategyError> {
    check_finite(values)?;
    if let Some(index) = values.iter().position(|&v| v < 0.0) {
        return Err(StrategyError::Negative {
            index,
            value: values[index],
        });
    }
    let sum: f64 = values.iter().sum();
    if libm::fabs(sum - 1.0) > tol {
        return Err(StrategyError::NotNormalized { sum });
    }
    Ok(())
}

/// Mixture weights `p_0..p_7` over the choice functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalStrategy {
    p: [f64; 8],
}

impl ClassicalStrategy {
    pub fn new(p: [f64; 8]) -> Result<Self, StrategyError> {
        check_probability_vector(&p, STRATEGY_TOL)?;
        Ok(Self { p })
    }

    /// The deterministic strategy that always plays `f_k`.
    pub fn pure(k: usize) -> Self {
        let mut p = [0.0; 8];
        p[k] = 1.0;
        Self { p }
    }

    pub fn uniform() -> Self {
        Self { p: [0.125; 8] }
    }

    pub fn weights(&self) -> &[f64; 8] {
        &self.p
    }

    pub fn conditionals(&self) -> ConditionalTriple {
        let p = &self.p;
        ConditionalTriple::clamped(
            p[0] + p[1] + p[4] + p[5],
            p[0] + p[2] + p[4] + p[6],
            p[0] + p[1] + p[2] + p[3],
        )
    }
}

/// Eight complex amplitudes stored as 16 reals, `a_i = x[2i] + i·x[2i+1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrequantStrategy {
    x: [f64; 16],
}

impl PrequantStrategy {
    pub fn new(x: [f64; 16]) -> Result<Self, StrategyError> {
        check_unit(&x)?;
        Ok(Self { x })
    }

    pub fn coords(&self) -> &[f64; 16] {
        &self.x
    }

    /// Measurement probabilities `|a_k|²` of the eight choice functions.
    pub fn probabilities(&self) -> [f64; 8] {
        let mut p = [0.0; 8];
        for (k, pk) in p.iter_mut().enumerate() {
            let (re, im) = (self.x[2 * k], self.x[2 * k + 1]);
            *pk = re * re + im * im;
        }
        p
    }

    pub fn conditionals(&self) -> ConditionalTriple {
        let sq = |i: usize| self.x[i] * self.x[i];
        let sum = |idx: &[usize]| idx.iter().map(|&i| sq(i)).sum::<f64>();
        let gamma = sum(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let beta = sum(&[0, 1, 4, 5, 8, 9, 12, 13]);
        let alpha = 1.0 - sum(&[4, 5, 6, 7, 12, 13, 14, 15]);
        ConditionalTriple::clamped(alpha, beta, gamma)
    }
}

/// A single-qubit strategy as a point `(x1, x2, x3)` of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumStrategy {
    x: [f64; 3],
}

impl QuantumStrategy {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self, StrategyError> {
        check_unit(&[x1, x2, x3])?;
        Ok(Self { x: [x1, x2, x3] })
    }

    pub fn coords(&self) -> &[f64; 3] {
        &self.x
    }

    pub fn conditionals(&self) -> ConditionalTriple {
        let [x1, x2, x3] = self.x;
        ConditionalTriple::clamped((1.0 + x1) / 2.0, (1.0 + x2) / 2.0, (1.0 - x3) / 2.0)
    }

    /// The sphere point whose measurement statistics are `c`, if `c` lies on
    /// the sphere `(2α-1)² + (2β-1)² + (1-2γ)² = 1` within `tol`.
    pub fn from_conditionals(c: &ConditionalTriple, tol: f64) -> Option<Self> {
        let x = [2.0 * c.alpha - 1.0, 2.0 * c.beta - 1.0, 1.0 - 2.0 * c.gamma];
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if libm::fabs(norm2 - 1.0) > tol {
            return None;
        }
        let n = libm::sqrt(norm2);
        Some(Self {
            x: [x[0] / n, x[1] / n, x[2] / n],
        })
    }
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite { re: f64, im: f64 },
    Infinity,
}

impl ExtendedComplex {
    pub fn new(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite { re, im }
    }
}

/// Sphere point of the state `|z> = |0>_2 + z|1>_2`.
///
/// `x1 = 2 Re z / (1+|z|²)`, `x2 = 2 Im z / (1+|z|²)`,
/// `x3 = (|z|²-1) / (1+|z|²)`; infinity goes to the north pole.
pub fn z_to_sphere(z: ExtendedComplex) -> QuantumStrategy {
    match z {
        ExtendedComplex::Infinity => QuantumStrategy { x: [0.0, 0.0, 1.0] },
        ExtendedComplex::Finite { re, im } => {
            let m2 = re * re + im * im;
            if !m2.is_finite() {
                return QuantumStrategy { x: [0.0, 0.0, 1.0] };
            }
            let den = 1.0 + m2;
            let x = [2.0 * re / den, 2.0 * im / den, (m2 - 1.0) / den];
            // renormalize away the last ulp so the result passes `check_unit`
            let n = libm::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            QuantumStrategy {
                x: [x[0] / n, x[1] / n, x[2] / n],
            }
        }
    }
}

/// A strategy of any of the three models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Classical(ClassicalStrategy),
    Prequant(PrequantStrategy),
    Quant(QuantumStrategy),
}

impl Strategy {
    pub fn model(&self) -> Model {
        match self {
            Strategy::Classical(_) => Model::Classical,
            Strategy::Prequant(_) => Model::Prequant,
            Strategy::Quant(_) => Model::Quant,
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            Strategy::Classical(s) => s.weights(),
            Strategy::Prequant(s) => s.coords(),
            Strategy::Quant(s) => s.coords(),
        }
    }

    pub fn conditionals(&self) -> ConditionalTriple {
        match self {
            Strategy::Classical(s) => s.conditionals(),
            Strategy::Prequant(s) => s.conditionals(),
            Strategy::Quant(s) => s.conditionals(),
        }
    }

    /// Rebuilds a strategy of `model` from its raw coordinates, validating
    /// the model's invariants.
    pub fn from_coords(model: Model, coords: &[f64]) -> Result<Self, StrategyError> {
        let n = model.coordinate_count();
        if coords.len() != n {
            return Err(StrategyError::NotNormalized { sum: f64::NAN });
        }
        Ok(match model {
            Model::Classical => {
                let mut p = [0.0; 8];
                p.copy_from_slice(coords);
                Strategy::Classical(ClassicalStrategy::new(p)?)
            }
            Model::Prequant => {
                let mut x = [0.0; 16];
                x.copy_from_slice(coords);
                Strategy::Prequant(PrequantStrategy::new(x)?)
            }
            Model::Quant => Strategy::Quant(QuantumStrategy::new(coords[0], coords[1], coords[2])?),
        })
    }
}

/// `(α, β, γ) = (P(C0|B1), P(C1|B0), P(C0|B2))`, a point of the unit cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ConditionalTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, StrategyError> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(StrategyError::OutOfRange { name, value });
            }
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// Clamps rounding spill-over (sums of squares may exceed 1 by an ulp).
    pub(crate) fn clamped(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            alpha: alpha.clamp(0.0, 1.0),
            beta: beta.clamp(0.0, 1.0),
            gamma: gamma.clamp(0.0, 1.0),
        }
    }

    /// `P(C_k | B_j)` for foods `k` and missing food `j`.
    pub fn conditional(&self, k: usize, j: usize) -> f64 {
        match (k, j) {
            (1, 0) => self.beta,
            (2, 0) => 1.0 - self.beta,
            (0, 1) => self.alpha,
            (2, 1) => 1.0 - self.alpha,
            (0, 2) => self.gamma,
            (1, 2) => 1.0 - self.gamma,
            (k, j) if k == j && k < 3 => 0.0,
            _ => panic!("food indices out of range: ({k}, {j})"),
        }
    }

    /// The matrix `M[k][j] = P(C_k | B_j)`; its columns sum to one.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (k, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.conditional(k, j);
            }
        }
        m
    }

    /// `d = α(1-β)(1-γ) + (1-α)βγ`, the determinant of [`Self::matrix`].
    pub fn determinant(&self) -> f64 {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        a * (1.0 - b) * (1.0 - g) + (1.0 - a) * b * g
    }

    /// `(1-α, 1-β, 1-γ)`: reverses every pairwise preference.
    pub fn flipped(&self) -> Self {
        Self {
            alpha: 1.0 - self.alpha,
            beta: 1.0 - self.beta,
            gamma: 1.0 - self.gamma,
        }
    }

    pub fn classify(&self) -> TransitivityClass {
        classify(self)
    }
}

/// Barycentric point `(q0, q1, q2)` of the triangle; `q_j` is the frequency of
/// the pair lacking food `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyTriple {
    q: [f64; 3],
}

impl FrequencyTriple {
    pub fn new(q0: f64, q1: f64, q2: f64) -> Result<Self, StrategyError> {
        let q = [q0, q1, q2];
        check_probability_vector(&q, SIMPLEX_TOL)?;
        Ok(Self { q })
    }

    /// Accepts nonnegative components and rescales them to sum to one.
    pub fn normalized(q0: f64, q1: f64, q2: f64) -> Result<Self, StrategyError> {
        let q = [q0, q1, q2];
        check_finite(&q)?;
        if let Some(index) = q.iter().position(|&v| v < 0.0) {
            return Err(StrategyError::Negative {
                index,
                value: q[index],
            });
        }
        let sum = q0 + q1 + q2;
        if sum <= 0.0 {
            return Err(StrategyError::NotNormalized { sum });
        }
        Ok(Self {
            q: [q0 / sum, q1 / sum, q2 / sum],
        })
    }

    pub fn center() -> Self {
        Self { q: [1.0 / 3.0; 3] }
    }

    pub fn q0(&self) -> f64 {
        self.q[0]
    }

    pub fn q1(&self) -> f64 {
        self.q[1]
    }

    pub fn q2(&self) -> f64 {
        self.q[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.q
    }
}

/// Long-run share `(ω0, ω1, ω2)` of each food in the diet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyTriple {
    pub w: [f64; 3],
}

impl OccupancyTriple {
    /// Largest deviation from the balanced diet `(1/3, 1/3, 1/3)`.
    pub fn imbalance(&self) -> f64 {
        self.w
            .iter()
            .map(|w| libm::fabs(w - 1.0 / 3.0))
            .fold(0.0, f64::max)
    }
}

/// `ω0 = αq1 + γq2`, `ω1 = βq0 + (1-γ)q2`, `ω2 = (1-β)q0 + (1-α)q1`.
pub fn occupancy(c: &ConditionalTriple, q: &FrequencyTriple) -> OccupancyTriple {
    let (a, b, g) = (c.alpha, c.beta, c.gamma);
    let [q0, q1, q2] = q.q;
    OccupancyTriple {
        w: [
            a * q1 + g * q2,
            b * q0 + (1.0 - g) * q2,
            (1.0 - b) * q0 + (1.0 - a) * q1,
        ],
    }
}

/// Preference structure of a conditional triple.
///
/// `IntransitiveCycleA`: `P(C2|B1)`, `P(C1|B0)`, `P(C0|B2)` all below one
/// half, i.e. 0 ≻ 2 ≻ 1 ≻ 0. `IntransitiveCycleB`: all three above one half,
/// the reverse cycle. Anything else, including ties at exactly one half, is
/// transitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitivityClass {
    IntransitiveCycleA,
    IntransitiveCycleB,
    Transitive,
}

impl TransitivityClass {
    pub fn is_intransitive(self) -> bool {
        !matches!(self, TransitivityClass::Transitive)
    }

    pub fn name(self) -> &'static str {
        match self {
            TransitivityClass::IntransitiveCycleA => "intransitive-a",
            TransitivityClass::IntransitiveCycleB => "intransitive-b",
            TransitivityClass::Transitive => "transitive",
        }
    }
}

pub fn classify(c: &ConditionalTriple) -> TransitivityClass {
    let prefs = [1.0 - c.alpha, c.beta, c.gamma];
    if prefs.iter().all(|&v| v < 0.5) {
        TransitivityClass::IntransitiveCycleA
    } else if prefs.iter().all(|&v| v > 0.5) {
        TransitivityClass::IntransitiveCycleB
    } else {
        TransitivityClass::Transitive
    }
}

/// Why a conditional triple is optimal for no frequency triple.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum NotOptimal {
    #[error("degenerate conditional matrix (d = {d})")]
    Degenerate { d: f64 },
    #[error("balancing frequencies {q:?} leave the triangle")]
    OutsideSimplex { q: [f64; 3] },
}

/// The pair frequencies for which `c` yields the balanced diet.
///
/// Solves `M q = (1/3, 1/3, 1/3)` in closed form with `d` as the normalizer.
pub fn optimal_frequencies(c: &ConditionalTriple) -> Result<FrequencyTriple, NotOptimal> {
    let d = c.determinant();
    if d <= D_TOL {
        return Err(NotOptimal::Degenerate { d });
    }
    let (a, b, g) = (c.alpha, c.beta, c.gamma);
    let n2 = (a + b) / 3.0 - a * b;
    let n1 = (g + (1.0 - b)) / 3.0 - g * (1.0 - b);
    let n0 = ((1.0 - g) + (1.0 - a)) / 3.0 - (1.0 - g) * (1.0 - a);
    let mut q = [n0 / d, n1 / d, n2 / d];
    if q.iter().any(|&v| v < -Q_TOL) {
        return Err(NotOptimal::OutsideSimplex { q });
    }
    for v in q.iter_mut() {
        if libm::fabs(*v) < Q_TOL {
            *v = 0.0;
        }
    }
    Ok(FrequencyTriple { q })
}

/// A strategy pushed all the way down to the triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedPoint {
    pub model: Model,
    pub conditionals: ConditionalTriple,
    pub d: f64,
    pub q: Option<FrequencyTriple>,
    pub class: TransitivityClass,
}

pub fn map_strategy(s: &Strategy) -> MappedPoint {
    let conditionals = s.conditionals();
    MappedPoint {
        model: s.model(),
        conditionals,
        d: conditionals.determinant(),
        q: optimal_frequencies(&conditionals).ok(),
        class: classify(&conditionals),
    }
}

/// A classical strategy realizing `c`, built from three independent pair
/// choices: 0 from (1,0) with probability γ, 0 from (2,0) with probability α
/// and 1 from (2,1) with probability β.
pub fn product_preimage(c: &ConditionalTriple) -> ClassicalStrategy {
    let mut p = [0.0; 8];
    for (k, pk) in p.iter_mut().enumerate() {
        let pick = |bit: usize, low: f64| if k & bit == 0 { low } else { 1.0 - low };
        *pk = pick(4, c.gamma) * pick(2, c.alpha) * pick(1, c.beta);
    }
    ClassicalStrategy { p }
}

/// Real-amplitude embedding `x[2k] = √p_k`, `x[2k+1] = 0`.
pub fn classical_embed(s: &ClassicalStrategy) -> PrequantStrategy {
    let mut x = [0.0; 16];
    for (k, &pk) in s.p.iter().enumerate() {
        x[2 * k] = libm::sqrt(pk);
    }
    PrequantStrategy { x }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn triple_close(c: &ConditionalTriple, e: [f64; 3], tol: f64) {
        assert!(
            close(c.alpha, e[0], tol) && close(c.beta, e[1], tol) && close(c.gamma, e[2], tol),
            "{c:?} != {e:?}"
        );
    }

    #[test]
    fn choice_table_rows() {
        let t = choice_table();
        assert_eq!(t.entries[0], [0, 0, 1]);
        assert_eq!(t.entries[7], [1, 2, 2]);
        assert_eq!(t.entries[5], [1, 0, 2]);
    }

    #[test]
    fn choice_table_members_and_patterns() {
        let t = choice_table();
        let mut seen = [false; 8];
        for (k, row) in t.entries.iter().enumerate() {
            for (pair, &choice) in row.iter().enumerate() {
                let (hi, lo) = PAIRS[pair];
                assert!(choice == hi || choice == lo);
            }
            let bits = ((row[0] == 1) as usize) << 2
                | ((row[1] == 2) as usize) << 1
                | (row[2] == 2) as usize;
            assert_eq!(bits, k);
            seen[bits] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn classical_conditionals_examples() {
        triple_close(
            &ClassicalStrategy::pure(0).conditionals(),
            [1.0, 1.0, 1.0],
            0.0,
        );
        triple_close(
            &ClassicalStrategy::uniform().conditionals(),
            [0.5, 0.5, 0.5],
            1e-15,
        );
        triple_close(
            &ClassicalStrategy::pure(7).conditionals(),
            [0.0, 0.0, 0.0],
            0.0,
        );
    }

    #[test]
    fn classical_conditionals_match_table() {
        // P(C0|B1) counts the functions that pick 0 from (2,0), etc.
        let t = choice_table();
        for k in 0..8 {
            let c = ClassicalStrategy::pure(k).conditionals();
            assert_eq!(c.alpha, (t.entries[k][1] == 0) as u8 as f64);
            assert_eq!(c.beta, (t.entries[k][2] == 1) as u8 as f64);
            assert_eq!(c.gamma, (t.entries[k][0] == 0) as u8 as f64);
        }
    }

    #[test]
    fn prequant_conditionals_examples() {
        let mut x = [0.0; 16];
        x[0] = 1.0;
        triple_close(
            &PrequantStrategy::new(x).unwrap().conditionals(),
            [1.0, 1.0, 1.0],
            0.0,
        );

        let s = PrequantStrategy::new([0.25; 16]).unwrap();
        triple_close(&s.conditionals(), [0.5, 0.5, 0.5], 1e-15);

        let mut x = [0.0; 16];
        x[0] = core::f64::consts::FRAC_1_SQRT_2;
        x[8] = core::f64::consts::FRAC_1_SQRT_2;
        triple_close(
            &PrequantStrategy::new(x).unwrap().conditionals(),
            [1.0, 1.0, 0.5],
            1e-15,
        );
    }

    #[test]
    fn quant_conditionals_examples() {
        let c = |x1, x2, x3| QuantumStrategy::new(x1, x2, x3).unwrap().conditionals();
        triple_close(&c(0.0, 0.0, -1.0), [0.5, 0.5, 1.0], 0.0);
        triple_close(&c(1.0, 0.0, 0.0), [1.0, 0.5, 0.5], 0.0);
        triple_close(&c(0.0, 1.0, 0.0), [0.5, 1.0, 0.5], 0.0);
    }

    #[test]
    fn z_to_sphere_examples() {
        let s = z_to_sphere(ExtendedComplex::new(0.0, 0.0));
        assert_eq!(s.coords(), &[0.0, 0.0, -1.0]);
        assert_eq!(s.conditionals().gamma, 1.0);

        let s = z_to_sphere(ExtendedComplex::Infinity);
        assert_eq!(s.coords(), &[0.0, 0.0, 1.0]);
        assert_eq!(s.conditionals().gamma, 0.0);

        let s = z_to_sphere(ExtendedComplex::new(1.0, 0.0));
        assert!(close(s.coords()[0], 1.0, 1e-15));
        assert!(close(s.conditionals().alpha, 1.0, 1e-15));

        let s = z_to_sphere(ExtendedComplex::new(1e300, 1e300));
        assert_eq!(s.coords(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn determinant_examples() {
        let d = |a, b, g| ConditionalTriple::new(a, b, g).unwrap().determinant();
        assert!(close(d(0.5, 0.5, 0.5), 0.25, 1e-15));
        assert_eq!(d(1.0, 1.0, 1.0), 0.0);
        assert_eq!(d(1.0, 0.0, 0.0), 1.0);
    }

    #[test]
    fn optimal_frequencies_examples() {
        let q = |a, b, g| optimal_frequencies(&ConditionalTriple::new(a, b, g).unwrap());
        let third = 1.0 / 3.0;

        let r = q(0.5, 0.5, 0.5).unwrap().as_array();
        assert!(r.iter().all(|&v| close(v, third, 1e-15)));

        let r = q(0.5, 0.5, 1.0).unwrap().as_array();
        assert!(close(r[0], 2.0 / 3.0, 1e-15) && r[1] == 0.0 && close(r[2], third, 1e-15));

        assert!(matches!(
            q(1.0, 1.0, 1.0),
            Err(NotOptimal::Degenerate { .. })
        ));

        // d = 0.41; numerators 0.16, 0.37/3 and 0.38/3
        let r = q(0.8, 0.3, 0.3).unwrap().as_array();
        assert!(close(r[0], 0.16 / 0.41, 1e-12));
        assert!(close(r[1], (1.0 / 3.0 - 0.21) / 0.41, 1e-12));
        assert!(close(r[2], (1.1 / 3.0 - 0.24) / 0.41, 1e-12));
        assert!(close(r[0], 0.39024, 1e-5) && close(r[1], 0.30081, 1e-5));
        assert!(close(r[2], 0.30894, 1e-5));
    }

    #[test]
    fn outside_simplex_is_rejected() {
        // α = 1, β = 0, γ = 0.9: d = 0.1 and the q1 numerator is negative.
        let c = ConditionalTriple::new(1.0, 0.0, 0.9).unwrap();
        assert!(matches!(
            optimal_frequencies(&c),
            Err(NotOptimal::OutsideSimplex { .. })
        ));
    }

    #[test]
    fn occupancy_examples() {
        let c = ConditionalTriple::new(0.5, 0.5, 0.5).unwrap();
        let w = occupancy(&c, &FrequencyTriple::center());
        assert!(w.imbalance() < 1e-15);

        let c = ConditionalTriple::new(0.3, 0.9, 0.2).unwrap();
        let w = occupancy(&c, &FrequencyTriple::new(1.0, 0.0, 0.0).unwrap());
        assert_eq!(w.w[0], 0.0);

        let c = ConditionalTriple::new(0.5, 0.5, 1.0).unwrap();
        let q = FrequencyTriple::new(2.0 / 3.0, 0.0, 1.0 / 3.0).unwrap();
        assert!(occupancy(&c, &q).imbalance() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        let k = |a, b, g| classify(&ConditionalTriple::new(a, b, g).unwrap());
        assert_eq!(k(0.8, 0.3, 0.3), TransitivityClass::IntransitiveCycleA);
        assert_eq!(k(0.2, 0.7, 0.7), TransitivityClass::IntransitiveCycleB);
        assert_eq!(k(0.5, 0.5, 0.5), TransitivityClass::Transitive);
        assert_eq!(k(0.8, 0.3, 0.5), TransitivityClass::Transitive);
        assert_eq!(k(0.9, 0.9, 0.1), TransitivityClass::Transitive);
    }

    #[test]
    fn product_preimage_examples() {
        let c = ConditionalTriple::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(product_preimage(&c), ClassicalStrategy::pure(0));

        let c = ConditionalTriple::new(0.5, 0.5, 0.5).unwrap();
        assert_eq!(product_preimage(&c), ClassicalStrategy::uniform());

        let c = ConditionalTriple::new(1.0, 1.0, 0.5).unwrap();
        let p = product_preimage(&c);
        assert_eq!(p.weights(), &[0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]);
        triple_close(&p.conditionals(), [1.0, 1.0, 0.5], 0.0);
    }

    #[test]
    fn classical_embed_examples() {
        let x = classical_embed(&ClassicalStrategy::pure(0));
        assert_eq!(x.coords()[0], 1.0);
        assert!(x.coords()[1..].iter().all(|&v| v == 0.0));

        let x = classical_embed(&ClassicalStrategy::uniform());
        for k in 0..8 {
            assert!(close(x.coords()[2 * k], 1.0 / (2.0 * 2f64.sqrt()), 1e-15));
            assert_eq!(x.coords()[2 * k + 1], 0.0);
        }

        let p = ClassicalStrategy::new([0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        let x = classical_embed(&p);
        assert!(close(
            x.coords()[0],
            core::f64::consts::FRAC_1_SQRT_2,
            1e-15
        ));
        assert!(close(
            x.coords()[8],
            core::f64::consts::FRAC_1_SQRT_2,
            1e-15
        ));
        triple_close(&x.conditionals(), [1.0, 1.0, 0.5], 1e-15);
    }

    #[test]
    fn constructors_reject_invalid_input() {
        assert!(matches!(
            ClassicalStrategy::new([0.5, 0.6, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(StrategyError::NotNormalized { .. })
        ));
        assert!(matches!(
            ClassicalStrategy::new([1.5, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(StrategyError::Negative { index: 1, .. })
        ));
        assert!(matches!(
            QuantumStrategy::new(1.0, 1.0, 0.0),
            Err(StrategyError::NotUnit { .. })
        ));
        assert!(matches!(
            QuantumStrategy::new(f64::NAN, 0.0, 1.0),
            Err(StrategyError::NonFinite { index: 0 })
        ));
        assert!(ConditionalTriple::new(0.5, 1.5, 0.5).is_err());
        assert!(FrequencyTriple::new(0.5, 0.5, 0.5).is_err());
        assert!(FrequencyTriple::normalized(1.0, 1.0, 1.0).is_ok());
        assert!(FrequencyTriple::normalized(0.0, 0.0, 0.0).is_err());
        assert!(FrequencyTriple::normalized(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn conditional_accessors_complement() {
        let c = ConditionalTriple::new(0.1, 0.7, 0.35).unwrap();
        let m = c.matrix();
        for (j, row) in m.iter().enumerate() {
            assert_eq!(row[j], 0.0);
            assert_eq!(m[0][j] + m[1][j] + m[2][j], 1.0);
        }
    }
}
