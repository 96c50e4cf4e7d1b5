//! Exact feasibility oracle: for a pair-frequency triple `q`, does a strategy
//! of a given class exist in a given model that balances the diet?
//!
//! For fixed `q` the balance conditions `ω0 = ω1 = 1/3` are two linear
//! equations in `(α, β, γ)` (the third follows because occupancies sum to
//! one), so the optimal strategies form a line. In general position it is
//! parametrized by `γ`:
//!
//! ```text
//! q1·α = 1/3 - q2·γ
//! q0·β = 1/3 - q2 + q2·γ
//! ```
//!
//! Classical (and prequantized) feasibility intersects that line with boxes
//! of the cube, which reduces to intersecting intervals of `γ`. Quantized
//! feasibility intersects it with the sphere
//! `(2α-1)² + (2β-1)² + (1-2γ)² = 1`, a quadratic in `γ`.

use alloc::vec::Vec;

use thiserror::Error;

use crate::strategy::{
    classical_embed, classify, occupancy, product_preimage, ClassicalStrategy, ConditionalTriple,
    FrequencyTriple, Model, QuantumStrategy, Strategy, TransitivityClass,
};

fn sq(x: f64) -> f64 {
    x * x
}

/// Discriminant cutoff of the monic quadratics.
pub const DISCRIMINANT_CUTOFF: f64 = 1e-14;

/// Which optimal strategies a question is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassFilter {
    All,
    Intransitive,
    Transitive,
}

impl ClassFilter {
    pub const EACH: [ClassFilter; 3] = [
        ClassFilter::All,
        ClassFilter::Intransitive,
        ClassFilter::Transitive,
    ];

    pub fn matches(self, class: TransitivityClass) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::Intransitive => class.is_intransitive(),
            ClassFilter::Transitive => !class.is_intransitive(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassFilter::All => "all",
            ClassFilter::Intransitive => "intransitive",
            ClassFilter::Transitive => "transitive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no conditional triple balances the diet at this frequency triple")]
pub struct EmptySet;

/// `α` or `β` along the solution line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coordinate {
    /// `scale · v = offset + slope · γ`, with `scale > 0`.
    Affine { offset: f64, slope: f64, scale: f64 },
    /// Unconstrained by the balance conditions.
    Free,
}

impl Coordinate {
    pub fn at(&self, gamma: f64) -> Option<f64> {
        match *self {
            Coordinate::Affine {
                offset,
                slope,
                scale,
            } => Some((offset + slope * gamma) / scale),
            Coordinate::Free => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSet {
    Free,
    Fixed(f64),
}

/// The affine set of `(α, β, γ) ∈ ℝ³` with `ω0 = ω1 = 1/3` at fixed `q`.
///
/// When `q1 = 0` food 0 is only ever offered against food 1, which pins `γ`
/// and leaves `α` free; `q0 = 0` does the same to `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionLine {
    pub alpha: Coordinate,
    pub beta: Coordinate,
    pub gamma: GammaSet,
}

impl SolutionLine {
    /// The point of the line at parameter `gamma`, with free coordinates set
    /// to `free_value`. `None` if `gamma` is off a pinned line.
    pub fn point(&self, gamma: f64, free_value: f64) -> Option<(f64, f64, f64)> {
        if let GammaSet::Fixed(g) = self.gamma {
            if g != gamma {
                return None;
            }
        }
        Some((
            self.alpha.at(gamma).unwrap_or(free_value),
            self.beta.at(gamma).unwrap_or(free_value),
            gamma,
        ))
    }
}

pub fn solution_line(q: &FrequencyTriple) -> Result<SolutionLine, EmptySet> {
    let [q0, q1, q2] = q.as_array();
    let third = 1.0 / 3.0;
    let mut pinned = Vec::with_capacity(2);

    let alpha = if q1 > 0.0 {
        Coordinate::Affine {
            offset: third,
            slope: -q2,
            scale: q1,
        }
    } else if q2 > 0.0 {
        // ω0 = γ·q2
        pinned.push(third / q2);
        Coordinate::Free
    } else {
        return Err(EmptySet);
    };

    let beta = if q0 > 0.0 {
        Coordinate::Affine {
            offset: third - q2,
            slope: q2,
            scale: q0,
        }
    } else if q2 > 0.0 {
        // ω1 = (1 - γ)·q2
        pinned.push(1.0 - third / q2);
        Coordinate::Free
    } else {
        return Err(EmptySet);
    };

    let gamma = match pinned[..] {
        [] => GammaSet::Free,
        [g] => GammaSet::Fixed(g),
        [g, h] if libm::fabs(g - h) <= 1e-12 => GammaSet::Fixed(g),
        _ => return Err(EmptySet),
    };
    Ok(SolutionLine { alpha, beta, gamma })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bound {
    value: f64,
    closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Self {
        Self {
            lo: Bound {
                value: lo,
                closed: lo_closed,
            },
            hi: Bound {
                value: hi,
                closed: hi_closed,
            },
        }
    }

    fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, true, hi, true)
    }

    fn everything() -> Self {
        Self::closed(f64::NEG_INFINITY, f64::INFINITY)
    }

    fn nothing() -> Self {
        Self::new(1.0, false, 0.0, false)
    }

    fn is_empty(&self) -> bool {
        self.lo.value > self.hi.value
            || (self.lo.value == self.hi.value && !(self.lo.closed && self.hi.closed))
    }

    fn intersect(self, other: Self) -> Self {
        let lo = if self.lo.value > other.lo.value {
            self.lo
        } else if other.lo.value > self.lo.value {
            other.lo
        } else {
            Bound {
                value: self.lo.value,
                closed: self.lo.closed && other.lo.closed,
            }
        };
        let hi = if self.hi.value < other.hi.value {
            self.hi
        } else if other.hi.value < self.hi.value {
            other.hi
        } else {
            Bound {
                value: self.hi.value,
                closed: self.hi.closed && other.hi.closed,
            }
        };
        Self { lo, hi }
    }

    fn scaled(self, s: f64) -> Self {
        debug_assert!(s > 0.0);
        Self::new(
            self.lo.value * s,
            self.lo.closed,
            self.hi.value * s,
            self.hi.closed,
        )
    }

    /// `{γ : offset + slope·γ ∈ self}`.
    fn preimage(self, offset: f64, slope: f64) -> Self {
        if slope == 0.0 {
            return if self.contains(offset) {
                Self::everything()
            } else {
                Self::nothing()
            };
        }
        let a = (self.lo.value - offset) / slope;
        let b = (self.hi.value - offset) / slope;
        if slope > 0.0 {
            Self::new(a, self.lo.closed, b, self.hi.closed)
        } else {
            Self::new(b, self.hi.closed, a, self.lo.closed)
        }
    }

    fn contains(&self, x: f64) -> bool {
        let above = x > self.lo.value || (self.lo.closed && x == self.lo.value);
        let below = x < self.hi.value || (self.hi.closed && x == self.hi.value);
        above && below
    }

    fn midpoint(&self) -> f64 {
        0.5 * (self.lo.value + self.hi.value)
    }
}

/// A half of the unit interval on one side of `1/2`.
#[derive(Debug, Clone, Copy)]
enum Side {
    Any,
    Low { strict: bool },
    High { strict: bool },
}

impl Side {
    fn interval(self) -> Interval {
        match self {
            Side::Any => Interval::closed(0.0, 1.0),
            Side::Low { strict } => Interval::new(0.0, true, 0.5, !strict),
            Side::High { strict } => Interval::new(0.5, !strict, 1.0, true),
        }
    }
}

/// The cube region of a class filter as a union of boxes over `(α, β, γ)`.
///
/// Intransitive strategies fill two open octants; transitive ones fill the
/// closed complement, i.e. the other six closed octants.
fn boxes(filter: ClassFilter) -> Vec<[Interval; 3]> {
    let low = |strict| Side::Low { strict };
    let high = |strict| Side::High { strict };
    let sides: Vec<[Side; 3]> = match filter {
        ClassFilter::All => alloc::vec![[Side::Any; 3]],
        ClassFilter::Intransitive => alloc::vec![
            [high(true), low(true), low(true)],
            [low(true), high(true), high(true)],
        ],
        ClassFilter::Transitive => (0..8usize)
            // skip (high, low, low) and (low, high, high)
            .filter(|&bits| bits != 0b100 && bits != 0b011)
            .map(|bits| {
                let side = |b: usize| {
                    if bits & b == 0 {
                        low(false)
                    } else {
                        high(false)
                    }
                };
                [side(4), side(2), side(1)]
            })
            .collect(),
    };
    sides
        .into_iter()
        .map(|s| [s[0].interval(), s[1].interval(), s[2].interval()])
        .collect()
}

fn solve_box(line: &SolutionLine, region: &[Interval; 3]) -> Option<ConditionalTriple> {
    let mut domain = region[2];
    if let GammaSet::Fixed(g) = line.gamma {
        domain = domain.intersect(Interval::closed(g, g));
    }
    for (coord, range) in [(line.alpha, region[0]), (line.beta, region[1])] {
        if let Coordinate::Affine {
            offset,
            slope,
            scale,
        } = coord
        {
            domain = domain.intersect(range.scaled(scale).preimage(offset, slope));
        }
    }
    if domain.is_empty() {
        return None;
    }
    let gamma = match line.gamma {
        GammaSet::Fixed(g) => g,
        GammaSet::Free => domain.midpoint(),
    };
    let alpha = line.alpha.at(gamma).unwrap_or_else(|| region[0].midpoint());
    let beta = line.beta.at(gamma).unwrap_or_else(|| region[1].midpoint());
    Some(ConditionalTriple::clamped(alpha, beta, gamma))
}

/// Outcome of a feasibility question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub feasible: bool,
    /// An optimal conditional triple of the requested class.
    pub witness: Option<ConditionalTriple>,
    /// The witness lifted into the model's own strategy space.
    pub strategy: Option<Strategy>,
}

impl Verdict {
    fn infeasible() -> Self {
        Self {
            feasible: false,
            witness: None,
            strategy: None,
        }
    }

    fn found(witness: ConditionalTriple, strategy: Strategy) -> Self {
        Self {
            feasible: true,
            witness: Some(witness),
            strategy: Some(strategy),
        }
    }
}

/// Classical strategies realize every point of the cube.
pub fn classical_feasible(q: &FrequencyTriple, filter: ClassFilter) -> Verdict {
    let Ok(line) = solution_line(q) else {
        return Verdict::infeasible();
    };
    boxes(filter)
        .iter()
        .find_map(|region| solve_box(&line, region))
        .map(|w| Verdict::found(w, Strategy::Classical(product_preimage(&w))))
        .unwrap_or_else(Verdict::infeasible)
}

/// Same feasible sets as the classical model; the witness is lifted to S¹⁵.
pub fn prequant_feasible(q: &FrequencyTriple, filter: ClassFilter) -> Verdict {
    let classical = classical_feasible(q, filter);
    match classical.witness {
        Some(w) => Verdict::found(
            w,
            Strategy::Prequant(classical_embed(&product_preimage(&w))),
        ),
        None => classical,
    }
}

/// Roots of the monic `x² + b·x + c`, with near-tangency collapsed to a
/// double root.
fn monic_roots(b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * c;
    if disc < -DISCRIMINANT_CUTOFF {
        Vec::new()
    } else if disc <= DISCRIMINANT_CUTOFF {
        alloc::vec![-0.5 * b]
    } else {
        let s = libm::sqrt(disc);
        let t = -0.5 * (b + if b >= 0.0 { s } else { -s });
        if t == 0.0 {
            // b = 0 and c = 0 cannot reach here with disc > cutoff
            alloc::vec![0.5 * s, -0.5 * s]
        } else {
            alloc::vec![t, c / t]
        }
    }
}

/// All points of the solution line on the Bloch sphere (at most two).
pub fn sphere_intersections(line: &SolutionLine) -> Vec<ConditionalTriple> {
    let mut out = Vec::with_capacity(2);
    match (line.alpha, line.beta, line.gamma) {
        (
            Coordinate::Affine {
                offset: oa,
                slope: sa,
                scale: ka,
            },
            Coordinate::Affine {
                offset: ob,
                slope: sb,
                scale: kb,
            },
            GammaSet::Free,
        ) => {
            // Multiply through by S = ka·kb to keep small scales well conditioned.
            let s = ka * kb;
            let (u, du) = (kb * (2.0 * oa - ka), 2.0 * kb * sa);
            let (v, dv) = (ka * (2.0 * ob - kb), 2.0 * ka * sb);
            let a = du * du + dv * dv + 4.0 * s * s;
            let b = 2.0 * (u * du + v * dv) - 4.0 * s * s;
            let c = u * u + v * v;
            // unscaled residual and its slope, to polish roots when q0 or q1
            // is small and α or β moves fast with γ
            let residual = |g: f64| {
                let (x, y, z) = (
                    2.0 * (oa + sa * g) / ka - 1.0,
                    2.0 * (ob + sb * g) / kb - 1.0,
                    1.0 - 2.0 * g,
                );
                (x * x + y * y + z * z - 1.0, 4.0 * (x * sa / ka + y * sb / kb - z))
            };
            for root in monic_roots(b / a, c / a) {
                let mut gamma = root;
                let (mut f, mut slope) = residual(gamma);
                for _ in 0..3 {
                    if f == 0.0 || slope == 0.0 {
                        break;
                    }
                    let next = gamma - f / slope;
                    let (nf, ns) = residual(next);
                    if libm::fabs(nf) >= libm::fabs(f) {
                        break;
                    }
                    (gamma, f, slope) = (next, nf, ns);
                }
                let alpha = (oa + sa * gamma) / ka;
                let beta = (ob + sb * gamma) / kb;
                out.push(ConditionalTriple::clamped(alpha, beta, gamma));
            }
        }
        (alpha, beta, GammaSet::Fixed(gamma)) => {
            let free_alpha = matches!(alpha, Coordinate::Free);
            let pinned = match (alpha, beta) {
                (Coordinate::Free, other) | (other, Coordinate::Free) => other.at(gamma),
                _ => None,
            };
            // (2v - 1)² = r for the free coordinate v, i.e. v² - v + (1 - r)/4 = 0
            let r = match pinned {
                Some(p) => 1.0 - sq(2.0 * p - 1.0) - sq(1.0 - 2.0 * gamma),
                None => 1.0 - sq(1.0 - 2.0 * gamma),
            };
            for v in monic_roots(-1.0, (1.0 - r) / 4.0) {
                let pinned = pinned.unwrap_or(0.5);
                let (alpha, beta) = if free_alpha { (v, pinned) } else { (pinned, v) };
                out.push(ConditionalTriple::clamped(alpha, beta, gamma));
            }
        }
        _ => {}
    }
    out
}

pub fn quant_feasible(q: &FrequencyTriple, filter: ClassFilter) -> Verdict {
    let Ok(line) = solution_line(q) else {
        return Verdict::infeasible();
    };
    sphere_intersections(&line)
        .into_iter()
        .filter(|c| filter.matches(classify(c)))
        .find_map(|w| {
            QuantumStrategy::from_conditionals(&w, 1e-9)
                .map(|s| Verdict::found(w, Strategy::Quant(s)))
        })
        .unwrap_or_else(Verdict::infeasible)
}

pub fn feasible(q: &FrequencyTriple, model: Model, filter: ClassFilter) -> Verdict {
    match model {
        Model::Classical => classical_feasible(q, filter),
        Model::Prequant => prequant_feasible(q, filter),
        Model::Quant => quant_feasible(q, filter),
    }
}

/// Independent re-verification of a witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessCheck {
    /// Largest `|ω_k - 1/3|`.
    pub occupancy_residual: f64,
    /// `|(2α-1)² + (2β-1)² + (1-2γ)² - 1|`, quantized model only.
    pub sphere_residual: Option<f64>,
    /// Largest deviation between the lifted strategy's conditionals and the witness.
    pub lift_residual: Option<f64>,
    pub class: TransitivityClass,
    pub class_ok: bool,
}

impl WitnessCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.class_ok
            && self.occupancy_residual < tol
            && self.sphere_residual.is_none_or(|r| r < tol)
            && self.lift_residual.is_none_or(|r| r < tol)
    }
}

pub fn verify_witness(
    q: &FrequencyTriple,
    model: Model,
    filter: ClassFilter,
    verdict: &Verdict,
) -> Option<WitnessCheck> {
    let w = verdict.witness?;
    let class = classify(&w);
    let sphere_residual = (model == Model::Quant).then(|| {
        let s = sq(2.0 * w.alpha - 1.0) + sq(2.0 * w.beta - 1.0) + sq(1.0 - 2.0 * w.gamma);
        libm::fabs(s - 1.0)
    });
    let lift_residual = verdict.strategy.map(|s| {
        let c = s.conditionals();
        libm::fabs(c.alpha - w.alpha)
            .max(libm::fabs(c.beta - w.beta))
            .max(libm::fabs(c.gamma - w.gamma))
    });
    Some(WitnessCheck {
        occupancy_residual: occupancy(&w, q).imbalance(),
        sphere_residual,
        lift_residual,
        class,
        class_ok: filter.matches(class),
    })
}

/// The classical strategy a classical verdict carries, if any.
pub fn classical_witness(verdict: &Verdict) -> Option<ClassicalStrategy> {
    match verdict.strategy {
        Some(Strategy::Classical(s)) => Some(s),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(q0: f64, q1: f64, q2: f64) -> FrequencyTriple {
        FrequencyTriple::new(q0, q1, q2).unwrap()
    }

    #[test]
    fn center_line() {
        let line = solution_line(&FrequencyTriple::center()).unwrap();
        assert_eq!(line.gamma, GammaSet::Free);
        for g in [-0.5, 0.0, 0.3, 1.0, 2.0] {
            let (a, b, _) = line.point(g, 0.0).unwrap();
            assert!((a - (1.0 - g)).abs() < 1e-15);
            assert!((b - g).abs() < 1e-15);
        }
    }

    #[test]
    fn vertex_is_empty() {
        for v in [q(1.0, 0.0, 0.0), q(0.0, 1.0, 0.0), q(0.0, 0.0, 1.0)] {
            assert_eq!(solution_line(&v), Err(EmptySet));
        }
    }

    #[test]
    fn edge_line_contains_forward_image() {
        let line = solution_line(&q(2.0 / 3.0, 0.0, 1.0 / 3.0)).unwrap();
        assert_eq!(line.alpha, Coordinate::Free);
        let GammaSet::Fixed(g) = line.gamma else {
            panic!("gamma should be pinned")
        };
        assert!((g - 1.0).abs() < 1e-15);
        let (a, b, _) = line.point(g, 0.5).unwrap();
        assert_eq!(a, 0.5);
        assert!((b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn edge_q0_zero() {
        let line = solution_line(&q(0.0, 0.5, 0.5)).unwrap();
        assert_eq!(line.beta, Coordinate::Free);
        assert_eq!(line.gamma, GammaSet::Fixed(1.0 - 2.0 / 3.0));
    }

    #[test]
    fn interval_algebra() {
        let half_open = Interval::new(0.0, true, 0.5, false);
        assert!(half_open.contains(0.0) && !half_open.contains(0.5));
        assert!(half_open
            .intersect(Interval::new(0.5, true, 1.0, true))
            .is_empty());
        assert!(!Interval::closed(0.5, 1.0)
            .intersect(Interval::closed(0.0, 0.5))
            .is_empty());
        let pre = Interval::closed(0.0, 1.0).preimage(1.0, -2.0);
        assert_eq!(pre, Interval::closed(0.0, 0.5));
        assert!(Interval::closed(0.0, 1.0).preimage(2.0, 0.0).is_empty());
    }

    #[test]
    fn transitive_boxes_cover_six_octants() {
        assert_eq!(boxes(ClassFilter::Transitive).len(), 6);
        assert_eq!(boxes(ClassFilter::Intransitive).len(), 2);
    }

    #[test]
    fn classical_center_examples() {
        let c = FrequencyTriple::center();
        let v = classical_feasible(&c, ClassFilter::All);
        let w = v.witness.unwrap();
        assert_eq!((w.alpha, w.beta, w.gamma), (0.5, 0.5, 0.5));

        let v = classical_feasible(&c, ClassFilter::Intransitive);
        assert!(v.feasible);
        assert!(classify(&v.witness.unwrap()).is_intransitive());

        let v = classical_feasible(&c, ClassFilter::Transitive);
        let w = v.witness.unwrap();
        assert_eq!((w.alpha, w.beta, w.gamma), (0.5, 0.5, 0.5));

        assert!(!classical_feasible(&q(1.0, 0.0, 0.0), ClassFilter::All).feasible);
    }

    #[test]
    fn quant_center_examples() {
        let c = FrequencyTriple::center();
        let line = solution_line(&c).unwrap();
        let mut roots: Vec<f64> = sphere_intersections(&line)
            .iter()
            .map(|p| p.gamma)
            .collect();
        roots.sort_by(f64::total_cmp);
        let r = 1.0 / 3f64.sqrt();
        assert!((roots[0] - (1.0 - r) / 2.0).abs() < 1e-14);
        assert!((roots[1] - (1.0 + r) / 2.0).abs() < 1e-14);

        assert!(quant_feasible(&c, ClassFilter::All).feasible);
        assert!(quant_feasible(&c, ClassFilter::Intransitive).feasible);
        assert!(!quant_feasible(&c, ClassFilter::Transitive).feasible);
        assert!(!quant_feasible(&q(1.0, 0.0, 0.0), ClassFilter::All).feasible);
    }

    #[test]
    fn quant_edge_roots() {
        // q1 = 0: gamma pinned to 1/(3 q2), alpha free.
        let qq = q(0.4, 0.0, 0.6);
        let pts = sphere_intersections(&solution_line(&qq).unwrap());
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!(occupancy(p, &qq).imbalance() < 1e-12);
            let s = sq(2.0 * p.alpha - 1.0) + sq(2.0 * p.beta - 1.0) + sq(1.0 - 2.0 * p.gamma);
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monic_roots_cases() {
        assert!(monic_roots(0.0, 1.0).is_empty());
        assert_eq!(monic_roots(-2.0, 1.0), alloc::vec![1.0]);
        let mut r = monic_roots(-3.0, 2.0);
        r.sort_by(f64::total_cmp);
        assert_eq!(r, alloc::vec![1.0, 2.0]);
        assert_eq!(monic_roots(-2.0, 1.0 + 1e-15).len(), 1);
    }

    #[test]
    fn prequant_lifts_to_sphere() {
        let v = prequant_feasible(&FrequencyTriple::center(), ClassFilter::All);
        let check = verify_witness(
            &FrequencyTriple::center(),
            Model::Prequant,
            ClassFilter::All,
            &v,
        )
        .unwrap();
        assert!(check.passes(1e-10));
        assert!(matches!(v.strategy, Some(Strategy::Prequant(_))));
    }
}
