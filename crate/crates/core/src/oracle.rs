//! Brute-force cross-checks. Nothing here calls the rule-based code paths it
//! is used to check: the circle-bundle step is redone on Poincaré
//! polynomials, `(1+t)(P_B(t) − t − t^{N−1})` for a base of dimension N with
//! primitive Euler class, and inverted by back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::catalog::{table1_base, table1_hypotheses, WitnessBase};
use crate::bundle::{circle_bundle, torus_bundle_over_4};
use crate::error::{Error, Result};
use crate::feasibility::{chi_iter, free_torus_feasible, quotient_tower};
use crate::lattice::{IntMat, IntVec};
use crate::manifold::{from_betti, BettiProfile};

/// Poincaré polynomial of the total space of a circle bundle with primitive
/// Euler class over a simply-connected base whose cup product with e vanishes
/// between 2 and N−2 (true for connected sums of sphere products and for
/// 4-manifolds).
pub fn gysin_step(base: &[BigInt]) -> Vec<BigInt> {
    let n = base.len() - 1;
    let mut reduced = base.to_vec();
    reduced[1] -= 1;
    reduced[n - 1] -= 1;
    let mut out = vec![BigInt::zero(); n + 2];
    for (j, c) in reduced.iter().enumerate() {
        out[j] += c;
        out[j + 1] += c;
    }
    out
}

/// A base for which the Gysin step reproduces the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionCandidate {
    /// Always non-spin; its canonical realization lists the twisted summand first.
    pub base: BettiProfile,
    /// Parity of a primitive Euler class over that realization giving the
    /// target's spin flag.
    pub euler_parity: Vec<bool>,
}

/// The unique base Betti candidate of a circle bundle with total space P.
pub fn invert_recurrence(p: &BettiProfile) -> Option<InversionCandidate> {
    let n = p.dim();
    if n < 6 {
        return None;
    }
    let nb = n - 1;
    let mut b = vec![BigInt::zero(); nb + 1];
    b[0] = BigInt::one();
    b[nb] = BigInt::one();
    b[2] = p.b(2) + 1;
    for i in 3..=nb - 2 {
        b[i] = p.b(i) - &b[i - 1];
    }
    if b.iter().any(Signed::is_negative) {
        return None;
    }
    if (0..=nb).any(|i| b[i] != b[nb - i]) {
        return None;
    }
    if nb % 2 == 0 && b[nb / 2].is_odd() {
        return None;
    }
    if gysin_step(&b) != p.betti() {
        return None;
    }
    let len = usize::try_from(&b[2]).ok()?;
    let mut euler_parity = vec![false; len];
    euler_parity[0] = true;
    if !p.spin() {
        if len < 2 {
            return None;
        }
        euler_parity[1] = true;
    }
    Some(InversionCandidate { base: BettiProfile::from_full(b, false), euler_parity })
}

/// b_2..b_{k+2} of a T^k-bundle over a 4-manifold with b_2 = r + k, by k
/// Gysin steps.
pub fn aki_via_stages(k: usize, r: &BigInt) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one(), BigInt::zero(), r + k, BigInt::zero(), BigInt::one()];
    for _ in 0..k {
        poly = gysin_step(&poly);
    }
    poly[2..=k + 2].to_vec()
}

/// χ_i^{(m)} as one weighted sum: Σ_j C(i−j+m−1, m−1)(−1)^j b_j for m ≥ 1.
pub fn chi_iter_direct(p: &BettiProfile, m: usize, i: usize) -> BigInt {
    if m == 0 {
        return if i % 2 == 0 { p.b(i) } else { -p.b(i) };
    }
    let mut acc = BigInt::zero();
    for j in 0..=i.min(p.dim()) {
        let mut w = BigInt::one();
        // C(i−j+m−1, m−1)
        for t in 0..m - 1 {
            w = w * (i - j + m - 1 - t) / (t + 1);
        }
        let term = w * p.b(j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// All form-(*) profiles of dimension n with Σ_{2≤i≤⌊n/2⌋} b_i ≤ bound.
pub fn enumerate_profiles(n: usize, bound: usize) -> Vec<BettiProfile> {
    fn rec(n: usize, i: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i > n / 2 {
            out.push(cur.clone());
            return;
        }
        let step = if n % 2 == 0 && i == n / 2 { 2 } else { 1 };
        let mut v = 0;
        while v <= left {
            cur.push(v as i64);
            rec(n, i + 1, left - v, cur, out);
            cur.pop();
            v += step;
        }
    }
    let mut lowers = Vec::new();
    rec(n, 2, bound, &mut Vec::new(), &mut lowers);
    let mut out = Vec::new();
    for lower in lowers {
        for spin in [true, false] {
            if !spin && lower[0] == 0 {
                continue;
            }
            if let Ok(p) = BettiProfile::from_lower_i64(n, &lower, spin) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepReport {
    pub bound: usize,
    pub dims: Vec<usize>,
    pub cases: usize,
    pub feasible: usize,
    pub witnesses: usize,
    pub counterexamples: Vec<String>,
}

impl SweepReport {
    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.bound,
            "dims": self.dims,
            "cases": self.cases,
            "feasible": self.feasible,
            "witnesses": self.witnesses,
            "counterexamples": self.counterexamples,
        })
    }
}

/// Largest sweep bound accepted; larger sweeps are not desk scale.
pub const MAX_SWEEP_BOUND: usize = 6;

fn check_profile(p: &BettiProfile, report: &mut SweepReport) -> Result<()> {
    let n = p.dim();
    let mut bad = |msg: String| report.counterexamples.push(format!("{p}: {msg}"));
    if !p.satisfies_duality() {
        bad("duality fails".into());
    }
    let mut feasible_count = 0;
    let mut witness_count = 0;
    if n >= 6 {
        let feasible = free_torus_feasible(p, 1)?.verdict;
        let inverted = invert_recurrence(p);
        if feasible != inverted.is_some() {
            bad(format!("feasibility {feasible} but inversion {}", inverted.is_some()));
        }
        if feasible {
            feasible_count += 1;
            match quotient_tower(p, 1) {
                Ok(t) if t.stages.iter().all(|s| s.verified) => {}
                Ok(_) => bad("tower stage unverified".into()),
                Err(e) => bad(format!("tower failed: {e}")),
            }
        }
        if let Some(c) = inverted {
            let e = IntVec(c.euler_parity.iter().map(|&x| BigInt::from(x as u8)).collect());
            match from_betti(&c.base).and_then(|b| circle_bundle(&b, &e)) {
                Ok(t) if &t == p => {}
                Ok(t) => bad(format!("inverted base gives {t}")),
                Err(e) => bad(format!("inverted base fails: {e}")),
            }
        }
    }
    if n <= 10 {
        let hyp = table1_hypotheses(p);
        match table1_base(p) {
            Ok(Some(w)) => {
                witness_count += 1;
                if !hyp {
                    bad(format!("witness {} outside the hypotheses", w.source));
                }
                let total = match &w.base {
                    WitnessBase::Expr(e) => circle_bundle(e, &w.euler),
                    WitnessBase::FourManifold(f) => IntMat::from_rows(f.b2, vec![w.euler.clone()])
                        .and_then(|e| torus_bundle_over_4(f, &e)),
                };
                match total {
                    Ok(t) if &t == p => {}
                    Ok(t) => bad(format!("witness {} gives {t}", w.source)),
                    Err(e) => bad(format!("witness {} fails: {e}", w.source)),
                }
                if !p.euler_characteristic().is_zero() {
                    bad("circle-bundle total space with nonzero Euler characteristic".into());
                }
            }
            Ok(None) if hyp => bad("hypotheses hold but no witness".into()),
            Ok(None) => {
                if n == 9 && chi_iter(p, 1, 4).is_negative() && free_torus_feasible(p, 1)?.verdict {
                    bad("chi_4 < 0 yet feasible".into());
                }
            }
            Err(e) => bad(format!("catalog error: {e}")),
        }
    }
    report.feasible += feasible_count;
    report.witnesses += witness_count;
    Ok(())
}

/// Sweeps the given dimensions.
pub fn sweep_dimensions(dims: &[usize], bound: usize) -> Result<SweepReport> {
    if bound > MAX_SWEEP_BOUND {
        return Err(Error::OutOfRange(format!("sweep bound {bound} (at most {MAX_SWEEP_BOUND})")));
    }
    let mut report = SweepReport { bound, dims: dims.to_vec(), ..SweepReport::default() };
    for &n in dims {
        if n < 5 {
            return Err(Error::Dimension(format!("sweep dimension {n} < 5")));
        }
        for p in enumerate_profiles(n, bound) {
            report.cases += 1;
            check_profile(&p, &mut report)?;
        }
    }
    Ok(report)
}

/// Every form-(*) profile in dimensions 5 to 10 within the bound: feasibility
/// against inversion, tower soundness, catalog coverage and verification,
/// Euler characteristic, duality.
pub fn exhaustive_row_sweep(bound: usize) -> Result<SweepReport> {
    sweep_dimensions(&[5, 6, 7, 8, 9, 10], bound)
}
