use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::holder::MAX_POINTS;
use super::transform::TransformSummary;
use super::{exponent_transform, log_holder_constants, LogHolderConstants, VariableExponent};
use crate::error::Error;

/// Membership in the class of exponents for which the maximal operator is
/// bounded has no finite test; log-Hölder regularity is only sufficient.
pub const B_CLASS_NOTE: &str = "sufficient-condition check only";

/// Boundedness statements whose exponent ranges can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `M^α` on `L^{p(·)}`, `1 − n/2 < α < 1`, `n/(n−1+α) < p⁻ ≤ p⁺ < n/(1−α)`.
    Thm32,
    /// `M^α` for `n ≥ 2`, `0 ≤ α < 1`, `n/(n−1+α) < p⁻ ≤ p⁺ < p⁻(n−1+α)/(1−α)`.
    Thm34,
    /// The spherical maximal function for `n ≥ 3`: `n/(n−1) < p⁻ ≤ p⁺ < p⁻(n−1)`.
    Cor35,
    /// Wave-equation corollary: `n ≥ 3`, `α = (3−n)/2`, `2n/(n+1) < p⁻ ≤ p⁺ < 2n/(n−1)`.
    #[serde(rename = "cor36_wave")]
    Cor36Wave,
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "thm32" => Ok(Self::Thm32),
            "thm34" => Ok(Self::Thm34),
            "cor35" => Ok(Self::Cor35),
            "cor36_wave" => Ok(Self::Cor36Wave),
            other => Err(Error::Precondition(format!(
                "unknown claim {other:?}; expected thm32, thm34, cor35 or cor36_wave"
            ))),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Thm32 => "thm32",
            Self::Thm34 => "thm34",
            Self::Cor35 => "cor35",
            Self::Cor36Wave => "cor36_wave",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub label: String,
    pub lhs: f64,
    pub relation: &'static str,
    pub rhs: f64,
    pub holds: bool,
}

/// Witnesses of the rescaling argument behind [`Claim::Thm34`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm34Witness {
    /// Midpoint of the feasible interval for `γ`.
    pub gamma: f64,
    pub gamma_interval: (f64, f64),
    /// `p̄ = p · nγ / (p⁻(n−1+α))`.
    pub p_bar_minus: f64,
    pub p_bar_plus: f64,
    /// `n/(n−1+α) < p̄⁻`.
    pub p_bar_lower_ok: bool,
    /// `p̄⁺ < n/(1−α)`.
    pub p_bar_upper_ok: bool,
    /// Interpolation parameter `nγ/(p⁻(n−1+α))` between `L^∞` and `L^{p̄}`.
    pub interpolation_theta: f64,
}

pub type LemmaWitness = TransformSummary;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub claim: Claim,
    pub alpha: f64,
    pub n: usize,
    pub p_minus: f64,
    pub p_plus: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub checks: Vec<BoundCheck>,
    pub passed: bool,
    pub thm34_witness: Option<Thm34Witness>,
    /// Exponent split for `p` (or `p̄` under [`Claim::Thm34`]).
    pub lemma_witness: Option<LemmaWitness>,
    pub lemma_error: Option<String>,
    pub log_holder: Option<LogHolderConstants>,
    pub b_class: &'static str,
}

impl BoundReport {
    /// One line such as `pass 1.5 < 2 <= 2 < 4`.
    pub fn chain(&self) -> String {
        format!(
            "{} {} < {} <= {} < {}",
            if self.passed { "pass" } else { "fail" },
            self.lower_bound,
            self.p_minus,
            self.p_plus,
            self.upper_bound
        )
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

type Q = BigRational;

fn rat(x: f64) -> Option<Q> {
    Q::from_float(x)
}

fn int(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn to_f64(q: &Option<Q>) -> f64 {
    q.as_ref().and_then(|v| v.to_f64()).unwrap_or(f64::NAN)
}

fn div(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(a), Some(b)) if !b.is_zero() => Some(a / b),
        _ => None,
    }
}

/// Exact comparison `a < b` (or `a ≤ b`); undefined operands fail, `∞` on the
/// left fails and `∞` on the right passes.
fn compare(a: f64, b: f64, strict: bool) -> bool {
    match (rat(a), rat(b)) {
        (Some(x), Some(y)) => {
            if strict {
                x < y
            } else {
                x <= y
            }
        }
        _ => !a.is_nan() && !b.is_nan() && a.is_finite() && b == f64::INFINITY,
    }
}

struct Checks(Vec<BoundCheck>);

impl Checks {
    fn push(&mut self, label: &str, lhs: f64, relation: &'static str, rhs: f64, holds: bool) {
        self.0.push(BoundCheck { label: label.into(), lhs, relation, rhs, holds });
    }

    fn less(&mut self, label: &str, lhs: f64, rhs: f64) {
        self.push(label, lhs, "<", rhs, compare(lhs, rhs, true));
    }

    /// `lhs < rhs` on exact rationals; `None` stands for an undefined or infinite value.
    fn less_exact(&mut self, label: &str, lhs: (f64, Option<&Q>), rhs: (f64, Option<&Q>)) {
        let holds = match (lhs.1, rhs.1) {
            (Some(x), Some(y)) => x < y,
            _ => false,
        };
        self.push(label, lhs.0, "<", rhs.0, holds);
    }

    fn less_eq(&mut self, label: &str, lhs: f64, rhs: f64) {
        self.push(label, lhs, "<=", rhs, compare(lhs, rhs, false));
    }
}

/// Checks the exponent-range hypotheses of `claim` for `p`, `α` and `n`.
///
/// Comparisons are exact in rational arithmetic on the binary values of the
/// inputs. Failures are report entries, never errors.
pub fn check_bound_hypotheses(p: &VariableExponent, alpha: f64, n: usize, claim: Claim) -> BoundReport {
    let (pm, pp) = (p.p_minus(), p.p_plus());
    let nq = int(n);
    let one = Q::one();
    let a = rat(alpha);
    let nf = n as f64;
    let mut checks = Checks(Vec::new());

    // n − 1 + α and 1 − α
    let nm1a = a.as_ref().map(|a| &nq - &one + a);
    let one_m_a = a.as_ref().map(|a| &one - a);
    let pm_q = rat(pm);

    let (lower, upper): (Option<Q>, Option<Q>) = match claim {
        Claim::Thm32 => {
            checks.less("1 - n/2 < alpha", 1.0 - nf / 2.0, alpha);
            checks.less("alpha < 1", alpha, 1.0);
            (div(Some(nq.clone()), nm1a.clone()), div(Some(nq.clone()), one_m_a.clone()))
        }
        Claim::Thm34 => {
            checks.less_eq("2 <= n", 2.0, nf);
            checks.less_eq("0 <= alpha", 0.0, alpha);
            checks.less("alpha < 1", alpha, 1.0);
            let up = match (&pm_q, &nm1a) {
                (Some(pm), Some(s)) => div(Some(pm * s), one_m_a.clone()),
                _ => None,
            };
            (div(Some(nq.clone()), nm1a.clone()), up)
        }
        Claim::Cor35 => {
            checks.less_eq("3 <= n", 3.0, nf);
            checks.push("alpha == 0", alpha, "==", 0.0, alpha == 0.0);
            let nm1 = &nq - &one;
            let up = pm_q.as_ref().map(|pm| pm * &nm1);
            (div(Some(nq.clone()), Some(nm1)), up)
        }
        Claim::Cor36Wave => {
            checks.less_eq("3 <= n", 3.0, nf);
            let wave_alpha = (Q::from_integer(BigInt::from(3)) - &nq) / int(2);
            let wave_alpha_f = to_f64(&Some(wave_alpha.clone()));
            checks.push("alpha == (3 - n)/2", alpha, "==", wave_alpha_f, a.as_ref() == Some(&wave_alpha));
            let two_n = &nq * int(2);
            (div(Some(two_n.clone()), Some(&nq + &one)), div(Some(two_n), Some(&nq - &one)))
        }
    };
    let (lower_f, upper_f) = (to_f64(&lower), to_f64(&upper));
    let sup = if p.has_infinite_region() { f64::INFINITY } else { pp };
    checks.push("p+ < inf", sup, "<", f64::INFINITY, sup.is_finite());
    let pp_q = if p.has_infinite_region() { None } else { rat(pp) };
    checks.less_exact("lower < p-", (lower_f, lower.as_ref()), (pm, pm_q.as_ref()));
    checks.less_eq("p- <= p+", pm, pp);
    checks.less_exact("p+ < upper", (pp, pp_q.as_ref()), (upper_f, upper.as_ref()));

    let mut thm34_witness = None;
    let mut lemma_witness = None;
    let mut lemma_error = None;
    let range_ok = checks.0.iter().all(|c| c.holds);
    if range_ok {
        match claim {
            Claim::Thm32 => match exponent_transform(p, alpha, n) {
                Ok(t) => lemma_witness = Some(t.summary()),
                Err(e) => lemma_error = Some(e.to_string()),
            },
            Claim::Thm34 => {
                let s = nf - 1.0 + alpha;
                let g_hi = (pm * s / nf).min(pm * s / ((1.0 - alpha) * pp));
                let gamma = 0.5 * (1.0 + g_hi);
                let scale = nf * gamma / (pm * s);
                let (bar_minus, bar_plus) = (pm * scale, pp * scale);
                let w = Thm34Witness {
                    gamma,
                    gamma_interval: (1.0, g_hi),
                    p_bar_minus: bar_minus,
                    p_bar_plus: bar_plus,
                    p_bar_lower_ok: compare(nf / s, bar_minus, true),
                    p_bar_upper_ok: compare(bar_plus, nf / (1.0 - alpha), true),
                    interpolation_theta: scale,
                };
                checks.push("p_bar lower", nf / s, "<", bar_minus, w.p_bar_lower_ok);
                checks.push("p_bar upper", bar_plus, "<", nf / (1.0 - alpha), w.p_bar_upper_ok);
                let p_bar = VariableExponent::new(
                    p.geometry().clone(),
                    p.samples().iter().map(|q| q * scale).collect(),
                    p.p_infinity() * scale,
                );
                match p_bar.and_then(|pb| exponent_transform(&pb, alpha, n)) {
                    Ok(t) => lemma_witness = Some(t.summary()),
                    Err(e) => lemma_error = Some(e.to_string()),
                }
                thm34_witness = Some(w);
            }
            Claim::Cor35 | Claim::Cor36Wave => {}
        }
    }
    let log_holder = if !p.has_infinite_region() && p.geometry().len() <= MAX_POINTS {
        log_holder_constants(p).ok()
    } else {
        None
    };
    let passed = checks.0.iter().all(|c| c.holds);
    BoundReport {
        claim,
        alpha,
        n,
        p_minus: pm,
        p_plus: pp,
        lower_bound: lower_f,
        upper_bound: upper_f,
        checks: checks.0,
        passed,
        thm34_witness,
        lemma_witness,
        lemma_error,
        log_holder,
        b_class: B_CLASS_NOTE,
    }
}
