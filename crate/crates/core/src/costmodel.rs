//! Running-time exponents `γ(ℓ)` as functions of the solution ratio.
//!
//! A curve value `γ` stands for a running time `Õ(2^{γ n})`. The functions are
//! generic over the float type; `f64` is the intended instantiation.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};

fn c<F: Float>(x: f64) -> F {
    F::from(x).expect("constant fits the float type")
}

/// Binary entropy without the domain check; endpoints return their limit 0.
fn h<F: Float>(x: F) -> F {
    if x <= F::zero() || x >= F::one() {
        return F::zero();
    }
    let two = c::<F>(2.0);
    -(x * x.log(two)) - (F::one() - x) * (F::one() - x).log(two)
}

/// `h(x) = −x log₂ x − (1−x) log₂(1−x)` on `[0, 1]`.
pub fn entropy<F: Float>(x: F) -> Result<F> {
    if !(x >= F::zero() && x <= F::one()) {
        return Err(Error::ContractViolation(format!(
            "entropy is defined on [0, 1], got {}",
            x.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(h(x))
}

/// `(h(ℓ) + ℓ)/3`: quantum meet-in-the-middle for Shifted-Sums.
pub fn gamma_mitm_quantum<F: Float>(l: F) -> F {
    (h(l) + l) / c(3.0)
}

/// `(h(ℓ) + ℓ)/2`: classical meet-in-the-middle for Shifted-Sums.
pub fn gamma_mitm_classical<F: Float>(l: F) -> F {
    (h(l) + l) / c(2.0)
}

/// Quantum representation technique: `(1+ℓ)/4` up to `ℓ = 3/5`, then `ℓ/2 + 1/10`.
pub fn gamma_rep_quantum<F: Float>(l: F) -> F {
    if l <= c(0.6) {
        (F::one() + l) / c(4.0)
    } else {
        l / c(2.0) + c(0.1)
    }
}

/// Classical representation technique: `max(b, 1 − b)` with `b = 1 − ℓ` above `1/2`.
pub fn gamma_rep_classical<F: Float>(l: F) -> F {
    if l > c(0.5) {
        l
    } else {
        c(0.5)
    }
}

/// Modulus exponent of the quantum representation solver: `(1+ℓ)/4`, or `2/5` above `3/5`.
pub fn b_rep_quantum<F: Float>(l: F) -> F {
    if l <= c(0.6) {
        (F::one() + l) / c(4.0)
    } else {
        c(0.4)
    }
}

/// Modulus exponent of the classical representation solver.
pub fn b_rep_classical<F: Float>(l: F) -> F {
    if l > c(0.5) {
        F::one() - l
    } else {
        c(0.5)
    }
}

/// `1/2 − (1−λ)/4 · h(λ / (2(1−λ)))`.
fn small_lambda_piece<F: Float>(lambda: F) -> F {
    let one = F::one();
    c::<F>(0.5) - (one - lambda) / c(4.0) * h(lambda / (c::<F>(2.0) * (one - lambda)))
}

/// Modulus exponent `b(λ)` for Equal-Sums by minimum solution ratio.
pub fn b_equal_min<F: Float>(lambda: F) -> F {
    if lambda <= c(0.5) {
        small_lambda_piece(lambda)
    } else {
        b_rep_quantum(lambda)
    }
}

/// Crossover points of the three dispatch curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossovers<F> {
    /// `(h(ℓ)+ℓ)/3 = (1+ℓ)/4`.
    pub quantum_l1: F,
    /// `(h(ℓ)+ℓ)/3 = ℓ/2 + 1/10`.
    pub quantum_l2: F,
    /// `(h(ℓ)+ℓ)/2 = 1/2`.
    pub classical_l1: F,
    /// `(h(ℓ)+ℓ)/2 = ℓ`.
    pub classical_l2: F,
    /// `(h(λ)+λ)/3 = 1/2 − (1−λ)/4 · h(λ/(2(1−λ)))`.
    pub equal_l1: F,
    /// `(h(λ)+λ)/3 = λ/2 + 1/10`.
    pub equal_l2: F,
}

impl<F: Float> Crossovers<F> {
    pub fn named(&self) -> Vec<(&'static str, F)> {
        vec![
            ("quantum_l1", self.quantum_l1),
            ("quantum_l2", self.quantum_l2),
            ("classical_l1", self.classical_l1),
            ("classical_l2", self.classical_l2),
            ("equal_l1", self.equal_l1),
            ("equal_l2", self.equal_l2),
        ]
    }
}

/// Root of `f` in `[lo, hi]` by bisection to `1e-9` (or the float's resolution).
pub fn bisect<F: Float>(f: impl Fn(F) -> F, lo: F, hi: F) -> Result<F> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == F::zero() {
        return Ok(lo);
    }
    if fhi == F::zero() {
        return Ok(hi);
    }
    if (flo > F::zero()) == (fhi > F::zero()) {
        return Err(Error::ContractViolation("bisection interval does not bracket a root".into()));
    }
    let tol = c::<F>(1e-9).max(F::epsilon() * c(4.0));
    let lo_negative = flo < F::zero();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / c(2.0);
        let fm = f(mid);
        if fm == F::zero() {
            return Ok(mid);
        }
        if (fm < F::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / c(2.0))
}

/// Solves the six crossover equations.
pub fn crossovers<F: Float>() -> Result<Crossovers<F>> {
    let third = |l: F| gamma_mitm_quantum(l);
    let half = |l: F| gamma_mitm_classical(l);
    Ok(Crossovers {
        quantum_l1: bisect(|l| third(l) - (F::one() + l) / c(4.0), c(0.01), c(0.6))?,
        quantum_l2: bisect(|l| third(l) - (l / c(2.0) + c(0.1)), c(0.6), c(0.999))?,
        classical_l1: bisect(|l| half(l) - c(0.5), c(0.01), c(0.5))?,
        classical_l2: bisect(|l| half(l) - l, c(0.5), c(0.999))?,
        equal_l1: bisect(|l| third(l) - small_lambda_piece(l), c(0.01), c(0.5))?,
        equal_l2: bisect(|l| third(l) - (l / c(2.0) + c(0.1)), c(0.6), c(0.999))?,
    })
}

fn cached() -> &'static Crossovers<f64> {
    static CROSS: OnceLock<Crossovers<f64>> = OnceLock::new();
    CROSS.get_or_init(|| crossovers().expect("crossover equations bracket their roots"))
}

/// `(ℓ1, ℓ2)` of the classical dispatcher.
pub fn classical_crossovers() -> (f64, f64) {
    let x = cached();
    (x.classical_l1, x.classical_l2)
}

fn roots<F: Float>() -> Crossovers<F> {
    let x = cached();
    let f = |v: f64| c::<F>(v);
    Crossovers {
        quantum_l1: f(x.quantum_l1),
        quantum_l2: f(x.quantum_l2),
        classical_l1: f(x.classical_l1),
        classical_l2: f(x.classical_l2),
        equal_l1: f(x.equal_l1),
        equal_l2: f(x.equal_l2),
    }
}

/// Quantum Shifted-Sums: the faster of representation and meet-in-the-middle.
pub fn gamma_quantum_shifted<F: Float>(l: F) -> F {
    let r = roots::<F>();
    if l >= r.quantum_l1 && l <= c(0.6) {
        (F::one() + l) / c(4.0)
    } else if l > c(0.6) && l < r.quantum_l2 {
        l / c(2.0) + c(0.1)
    } else {
        gamma_mitm_quantum(l)
    }
}

/// Classical Shifted-Sums: the faster of representation and meet-in-the-middle.
pub fn gamma_classical_shifted<F: Float>(l: F) -> F {
    let r = roots::<F>();
    if l >= r.classical_l1 && l < c(0.5) {
        c(0.5)
    } else if l >= c(0.5) && l < r.classical_l2 {
        l
    } else {
        gamma_mitm_classical(l)
    }
}

/// Quantum Equal-Sums as a function of the minimum solution ratio `λ`.
pub fn gamma_quantum_equal_min<F: Float>(lambda: F) -> F {
    let r = roots::<F>();
    if lambda >= r.equal_l1 && lambda < c(0.5) {
        small_lambda_piece(lambda)
    } else if lambda >= c(0.5) && lambda <= c(0.6) {
        (F::one() + lambda) / c(4.0)
    } else if lambda > c(0.6) && lambda < r.equal_l2 {
        lambda / c(2.0) + c(0.1)
    } else {
        gamma_mitm_quantum(lambda)
    }
}

/// Exponent of the folklore quantum meet-in-the-middle, `log₂(3)/3 ≈ 0.529`.
pub fn folklore_quantum<F: Float>() -> F {
    c::<F>(3.0).log2() / c(3.0)
}

/// Query cost of quantum pair finding among `N × M` candidates with `K` marked pairs.
pub fn pair_finding_cost<F: Float>(n: F, m: F, k: F) -> Result<F> {
    if !(F::one() <= k && k <= n && n <= m) {
        return Err(Error::ContractViolation("pair finding needs 1 <= K <= N <= M".into()));
    }
    if m <= k * n * n {
        Ok((n * m / k).cbrt())
    } else {
        Ok((m / k).sqrt())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    QuantumShifted,
    ClassicalShifted,
    QuantumEqualMin,
    MitmQuantum,
    MitmClassical,
    RepQuantum,
    RepClassical,
    /// The constant `log₂(3)/3`.
    Folklore,
}

impl CurveKind {
    pub const ALL: [CurveKind; 8] = [
        CurveKind::QuantumShifted,
        CurveKind::ClassicalShifted,
        CurveKind::QuantumEqualMin,
        CurveKind::MitmQuantum,
        CurveKind::MitmClassical,
        CurveKind::RepQuantum,
        CurveKind::RepClassical,
        CurveKind::Folklore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::QuantumShifted => "quantum_shifted",
            CurveKind::ClassicalShifted => "classical_shifted",
            CurveKind::QuantumEqualMin => "quantum_equal_min",
            CurveKind::MitmQuantum => "mitm_quantum",
            CurveKind::MitmClassical => "mitm_classical",
            CurveKind::RepQuantum => "rep_quantum",
            CurveKind::RepClassical => "rep_classical",
            CurveKind::Folklore => "folklore",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::Parse(format!("unknown curve {name:?}")))
    }

    pub fn eval<F: Float>(self, l: F) -> F {
        match self {
            CurveKind::QuantumShifted => gamma_quantum_shifted(l),
            CurveKind::ClassicalShifted => gamma_classical_shifted(l),
            CurveKind::QuantumEqualMin => gamma_quantum_equal_min(l),
            CurveKind::MitmQuantum => gamma_mitm_quantum(l),
            CurveKind::MitmClassical => gamma_mitm_classical(l),
            CurveKind::RepQuantum => gamma_rep_quantum(l),
            CurveKind::RepClassical => gamma_rep_classical(l),
            CurveKind::Folklore => folklore_quantum(),
        }
    }

    /// Crossovers at which this curve switches pieces.
    pub fn crossovers<F: Float>(self) -> Vec<(&'static str, F)> {
        let r = roots::<F>();
        match self {
            CurveKind::QuantumShifted => vec![("l1", r.quantum_l1), ("l2", r.quantum_l2)],
            CurveKind::ClassicalShifted => vec![("l1", r.classical_l1), ("l2", r.classical_l2)],
            CurveKind::QuantumEqualMin => vec![("l1", r.equal_l1), ("l2", r.equal_l2)],
            _ => Vec::new(),
        }
    }
}

/// A sampled curve with its crossover points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentCurve<F> {
    pub kind: CurveKind,
    pub samples: Vec<(F, F)>,
    pub crossovers: Vec<(&'static str, F)>,
}

impl<F: Float> ExponentCurve<F> {
    /// Samples at `k · step` for `k = 1 .. round(1/step) − 1`.
    pub fn sample(kind: CurveKind, step: F) -> Result<Self> {
        if !(step > F::zero() && step < F::one()) {
            return Err(Error::InvalidParameter("grid step must lie in (0, 1)".into()));
        }
        let count = (F::one() / step).round().to_usize().unwrap_or(0);
        let samples = (1..count)
            .map(|k| {
                let l = step * c(k as f64);
                (l, kind.eval(l))
            })
            .collect();
        Ok(Self { kind, samples, crossovers: kind.crossovers() })
    }

    /// The sample with the largest exponent.
    pub fn max(&self) -> Option<(F, F)> {
        self.samples
            .iter()
            .copied()
            .fold(None, |best, s| match best {
                Some((_, g)) if g >= s.1 => best,
                _ => Some(s),
            })
    }

    /// CSV with header `l,gamma` and nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,gamma\n");
        for (l, g) in &self.samples {
            let _ = writeln!(out, "{},{}", sig9(l.to_f64().unwrap_or(f64::NAN)), sig9(g.to_f64().unwrap_or(f64::NAN)));
        }
        out
    }
}

/// Shorthand for [`ExponentCurve::sample`] followed by [`ExponentCurve::to_csv`].
pub fn emit_curve(kind: CurveKind, step: f64) -> Result<String> {
    Ok(ExponentCurve::<f64>::sample(kind, step)?.to_csv())
}

/// Decimal rendering with nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
