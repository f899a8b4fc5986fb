//! Free torus actions with form-(*) quotients: the iterated Euler
//! characteristic test, explicit quotient towers, and the maximal-rank
//! (cohomogeneity four) classification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::bundle::{a_ki, binom, circle_bundle, torus_bundle_over_4, FourManifoldSpec};
use crate::error::{Error, Result};
use crate::json::{big_to_value, ints_to_value};
use crate::lattice::{IntMat, IntVec};
use crate::manifold::{from_betti, BettiProfile};

/// Partial sums χ_0..χ_n of the signed Betti numbers.
fn partial_chi(b: &[BigInt]) -> Vec<BigInt> {
    let mut acc = BigInt::zero();
    b.iter()
        .enumerate()
        .map(|(j, x)| {
            if j % 2 == 0 {
                acc += x;
            } else {
                acc -= x;
            }
            acc.clone()
        })
        .collect()
}

/// χ_i^{(m)}(M), taken literally: χ^{(0)}_i = (−1)^i b_i and each further
/// level is a running sum of the previous one.
pub fn chi_iter(m_profile: &BettiProfile, m: usize, i: usize) -> BigInt {
    let n = m_profile.dim();
    if i > n {
        return BigInt::zero();
    }
    let mut level: Vec<BigInt> = (0..=i)
        .map(|j| if j % 2 == 0 { m_profile.b(j) } else { -m_profile.b(j) })
        .collect();
    for _ in 0..m {
        let mut acc = BigInt::zero();
        for x in level.iter_mut() {
            acc += &*x;
            *x = acc.clone();
        }
    }
    level.pop().unwrap_or_default()
}

/// χ_i of the (m−1)-st quotient in a tower over M, for 2 ≤ i:
/// χ^{(m)}_i(M) − C(i+m−2, i). Each quotient has b_1 = 0, whereas the literal
/// running sums keep counting χ_1 = 1; the binomial removes that drift.
pub fn reduced_chi_iter(m_profile: &BettiProfile, m: usize, i: usize) -> BigInt {
    if m == 0 {
        return chi_iter(m_profile, 0, i);
    }
    chi_iter(m_profile, m, i) - binom(i + m - 2, i as i64)
}

/// Audit of one quotient step, from the stage of dimension n−m+1 down to n−m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageAudit {
    pub m: usize,
    /// (i, (−1)^i χ_i) for 2 ≤ i ≤ ⌊(n−m)/2⌋; these become the quotient's b_i.
    pub condition1: Vec<(usize, BigInt)>,
    /// (degree, χ value, even?) when n−m is even.
    pub condition2: Option<(usize, BigInt, bool)>,
    /// Euler characteristic of the stage being divided.
    pub condition3: BigInt,
    pub holds: bool,
}

impl StageAudit {
    pub fn to_json(&self) -> Value {
        let c1: Vec<Value> = self
            .condition1
            .iter()
            .map(|(i, v)| json!({"i": i, "value": big_to_value(v), "ok": !v.is_negative()}))
            .collect();
        let c2 = match &self.condition2 {
            Some((i, v, even)) => json!({"i": i, "value": big_to_value(v), "ok": even}),
            None => Value::Null,
        };
        json!({
            "m": self.m,
            "condition1": c1,
            "condition2": c2,
            "condition3": {"value": big_to_value(&self.condition3), "ok": self.condition3.is_zero()},
            "holds": self.holds,
        })
    }
}

/// Outcome of the (*)-quotient feasibility test for T^k.
///
/// Conditions are evaluated on the actual quotient stages, so `per_m` stops
/// at the first failing m (later stages do not exist).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub k: usize,
    pub per_m: Vec<StageAudit>,
    pub verdict: bool,
}

impl FeasibilityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "verdict": self.verdict,
            "scope": "(*)-quotient feasibility",
            "per_m": self.per_m.iter().map(StageAudit::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Audits the quotient step from `stage` (dimension d) to dimension d−1 and
/// returns the quotient's profile when every condition holds.
fn audit_step(stage: &BettiProfile, m: usize) -> (StageAudit, Option<BettiProfile>) {
    let d = stage.dim();
    let q = d - 1;
    let chi = partial_chi(stage.betti());
    let signed = |i: usize| if i % 2 == 0 { chi[i].clone() } else { -&chi[i] };
    let condition1: Vec<(usize, BigInt)> = (2..=q / 2).map(|i| (i, signed(i))).collect();
    let condition2 = (q % 2 == 0).then(|| {
        let v = chi[q / 2].clone();
        let even = v.is_even();
        (q / 2, v, even)
    });
    let condition3 = chi[d].clone();
    let holds = condition1.iter().all(|(_, v)| !v.is_negative())
        && condition2.as_ref().is_none_or(|c| c.2)
        && condition3.is_zero();
    let quotient = if holds {
        let lower: Vec<BigInt> = condition1.iter().map(|(_, v)| v.clone()).collect();
        BettiProfile::from_lower(q, &lower, false).ok()
    } else {
        None
    };
    (StageAudit { m, condition1, condition2, condition3, holds }, quotient)
}

/// The quotient profiles B_1, …, B_j (j ≤ k), stopping at the first failure.
fn quotient_profiles(profile: &BettiProfile, k: usize) -> (Vec<StageAudit>, Vec<BettiProfile>) {
    let mut audits = Vec::new();
    let mut quotients = Vec::new();
    let mut cur = profile.clone();
    for m in 1..=k {
        let (audit, next) = audit_step(&cur, m);
        audits.push(audit);
        match next {
            Some(b) => {
                quotients.push(b.clone());
                cur = b;
            }
            None => break,
        }
    }
    (audits, quotients)
}

/// Whether T^k can act freely on M with a form-(*) quotient; 1 ≤ k ≤ n−5.
pub fn free_torus_feasible(profile: &BettiProfile, k: usize) -> Result<FeasibilityReport> {
    profile.check_form_star()?;
    let n = profile.dim();
    if k < 1 || k + 5 > n {
        return Err(Error::OutOfRange(format!(
            "torus rank k = {k} (need 1 <= k <= {}; use the cohomogeneity-four test for k = n - 4)",
            n as i64 - 5
        )));
    }
    let (per_m, quotients) = quotient_profiles(profile, k);
    let verdict = quotients.len() == k;
    Ok(FeasibilityReport { k, per_m, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerStage {
    pub base: BettiProfile,
    pub euler: IntVec,
    /// Forward evaluation of the stage reproduced the profile above it.
    pub verified: bool,
}

/// Circle-bundle stages from the T^k-quotient up to M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub stages: Vec<TowerStage>,
}

impl Tower {
    pub fn quotient(&self) -> &BettiProfile {
        &self.stages[0].base
    }

    pub fn to_json(&self) -> Value {
        let stages: Vec<Value> = self
            .stages
            .iter()
            .map(|s| {
                let expr = from_betti(&s.base).map(|e| Value::String(e.to_string())).unwrap_or(Value::Null);
                json!({
                    "base": s.base.to_json(),
                    "base_expr": expr,
                    "euler": ints_to_value(s.euler.entries()),
                    "verified": s.verified,
                })
            })
            .collect();
        json!({"stages": stages})
    }
}

/// Euler vector over the canonical non-spin realization of `base` (twisted
/// summand first) whose total space has the requested spin flag.
fn stage_euler(base: &BettiProfile, total_spin: bool) -> Result<IntVec> {
    let len = base
        .b(2)
        .to_usize()
        .ok_or_else(|| Error::OutOfRange(format!("b_2 = {}", base.b(2))))?;
    let mut e = IntVec::zeros(len);
    e.0[0] = BigInt::one();
    if !total_spin {
        if len < 2 {
            return Err(Error::Infeasible(format!("{base} has no non-spin circle bundle")));
        }
        e.0[1] = BigInt::one();
    }
    Ok(e)
}

/// A free T^k action on M with form-(*) quotient, as a tower of circle
/// bundles over non-spin bases. Every stage is checked forward.
pub fn quotient_tower(profile: &BettiProfile, k: usize) -> Result<Tower> {
    let report = free_torus_feasible(profile, k)?;
    if !report.verdict {
        let failed = report.per_m.last().map(|a| a.m).unwrap_or(1);
        return Err(Error::Infeasible(format!("{profile} fails the quotient conditions at m = {failed}")));
    }
    let (_, quotients) = quotient_profiles(profile, k);
    let mut stages = Vec::with_capacity(k);
    for (j, base) in quotients.iter().enumerate().rev() {
        let above = if j == 0 { profile } else { &quotients[j - 1] };
        let euler = stage_euler(base, above.spin())?;
        let total = circle_bundle(&from_betti(base)?, &euler)?;
        if &total != above {
            return Err(Error::CatalogDefect(format!(
                "quotient {base} with e = {euler} gives {total}, expected {above}"
            )));
        }
        stages.push(TowerStage { base: base.clone(), euler, verified: true });
    }
    Ok(Tower { stages })
}

/// A principal T^{n−4}-bundle over a 4-manifold with total space M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cohom4Witness {
    pub base: FourManifoldSpec,
    pub euler: IntMat,
}

impl Cohom4Witness {
    pub fn to_json(&self) -> Value {
        json!({"base": self.base.to_json(), "euler": serde_json::to_value(&self.euler).unwrap_or(Value::Null)})
    }
}

/// Whether T^{n−4} acts freely on M; the witness is a bundle over #CP^2.
pub fn cohom4_classify(profile: &BettiProfile) -> Result<Option<Cohom4Witness>> {
    profile.check_form_star()?;
    let n = profile.dim();
    let k = n - 4;
    let r = profile.b(2);
    for i in 2..=n - 2 {
        if profile.b(i) != a_ki(k, i, &r)? {
            return Ok(None);
        }
    }
    let r = r.to_usize().ok_or_else(|| Error::OutOfRange(format!("b_2 = {r}")))?;
    let b = r + k;
    let base = FourManifoldSpec::cp2_sum(b);
    let mut rows: Vec<IntVec> = (0..k).map(|i| IntVec::unit(b, i)).collect();
    if profile.spin() {
        rows[0] = IntVec(vec![BigInt::one(); b]);
    }
    let euler = IntMat::from_rows(b, rows)?;
    let total = torus_bundle_over_4(&base, &euler)?;
    if &total != profile {
        return Err(Error::CatalogDefect(format!(
            "cohomogeneity-four witness gives {total}, expected {profile}"
        )));
    }
    Ok(Some(Cohom4Witness { base, euler }))
}

/// Cohomogeneity-two torus action with a free cohomogeneity-six subaction;
/// reduces to the cohomogeneity-four test.
pub fn cohom2_check(profile: &BettiProfile) -> Result<bool> {
    if profile.dim() < 6 {
        return Err(Error::Dimension(format!("cohomogeneity-two test needs n >= 6, got {}", profile.dim())));
    }
    Ok(cohom4_classify(profile)?.is_some())
}

/// Largest k ≤ n−4 for which a free T^k action with form-(*) or 4-manifold
/// quotient is certified; 0 if none.
pub fn max_star_quotient_torus(profile: &BettiProfile) -> Result<usize> {
    if cohom4_classify(profile)?.is_some() {
        return Ok(profile.dim() - 4);
    }
    let n = profile.dim();
    let (_, quotients) = quotient_profiles(profile, n.saturating_sub(5));
    Ok(quotients.len())
}
