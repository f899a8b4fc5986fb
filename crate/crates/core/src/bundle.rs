//! Twisted suspensions and total spaces of principal circle and torus bundles.
//!
//! Two independent routes compute a circle bundle over a connected sum of
//! sphere products: the Betti recurrence with the GF(2) spin test, and the
//! splitting `P = P_1 # Σ(rest)` through a summand whose bundle is known.
//! They must agree; the acceptance suite checks that they do.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{big_to_value, value_to_usize};
use crate::lattice::{cokernel, content, extends_to_basis, gf2_in_span, gf2_in_span_bits, IntMat, IntVec};
use crate::manifold::{BettiProfile, ConnectedSumExpr, Summand};

/// Euler class of a circle bundle, in the coordinates of the base's H2 basis.
pub type EulerClassVec = IntVec;
/// One Euler class per row, for torus bundles.
pub type EulerMatrix = IntMat;

/// A closed simply-connected 4-manifold, up to what bundle theory sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourManifoldSpec {
    pub b2: usize,
    pub w2: Vec<bool>,
}

impl FourManifoldSpec {
    pub fn new(b2: usize, w2: Vec<bool>) -> Result<Self> {
        if w2.len() != b2 {
            return Err(Error::LengthMismatch { expected: b2, actual: w2.len() });
        }
        Ok(FourManifoldSpec { b2, w2 })
    }

    /// `#_b CP^2`.
    pub fn cp2_sum(b: usize) -> Self {
        FourManifoldSpec { b2: b, w2: vec![true; b] }
    }

    pub fn is_spin(&self) -> bool {
        self.w2.iter().all(|&x| !x)
    }

    pub fn to_json(&self) -> Value {
        json!({"b2": self.b2, "w2": self.w2.iter().map(|&x| x as u8).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let b2 = v
            .get("b2")
            .ok_or_else(|| Error::InvalidProfile("4-manifold lacks \"b2\"".into()))
            .and_then(|x| value_to_usize(x, "b2"))?;
        let w2 = match v.get("w2") {
            None => vec![true; b2],
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| match x.as_u64() {
                    Some(0) => Ok(false),
                    Some(1) => Ok(true),
                    _ => match x.as_bool() {
                        Some(b) => Ok(b),
                        None => Err(Error::InvalidProfile(format!("w2 entry {x} is not 0 or 1"))),
                    },
                })
                .collect::<Result<_>>()?,
            Some(other) => {
                return Err(Error::InvalidProfile(format!("\"w2\" must be an array, got {other}")))
            }
        };
        Self::new(b2, w2)
    }
}

/// Total space of an iterated bundle together with each intermediate stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleResult {
    pub total: BettiProfile,
    /// Total spaces after 1, 2, …, k circle factors; the last equals `total`.
    pub stages: Vec<BettiProfile>,
}

impl BundleResult {
    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total.to_json(),
            "stages": self.stages.iter().map(BettiProfile::to_json).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn binom(n: usize, k: i64) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Betti numbers of a simply-connected T^k-bundle over a 4-manifold with
/// b_2 = r + k.
pub fn a_ki(k: usize, i: usize, r: &BigInt) -> Result<BigInt> {
    if i < 2 || i > k + 2 {
        return Err(Error::OutOfRange(format!("a_ki index i = {i} for k = {k}")));
    }
    if r.is_negative() {
        return Err(Error::OutOfRange(format!("a_ki argument r = {r}")));
    }
    let i = i as i64;
    let k64 = k as i64;
    Ok(BigInt::from(i - 2) * binom(k, i - 1)
        + r * binom(k, i - 2)
        + BigInt::from(2 + k64 - i) * binom(k, i - 3))
}

fn not_basis(e: &IntMat) -> Error {
    let c = cokernel(e);
    Error::NotBasis {
        free_rank: c.free_rank,
        torsion: c.torsion.iter().map(ToString::to_string).collect(),
    }
}

fn check_len(e: &IntVec, expected: usize) -> Result<()> {
    if e.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: e.len() });
    }
    Ok(())
}

fn require_primitive(e: &IntVec) -> Result<()> {
    let c = content(e);
    if !c.is_one() {
        return Err(Error::NotPrimitive { content: c.to_string() });
    }
    Ok(())
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// The S^2-bundle over S^{n-1} that B(1)-type suspensions attach: twisted
/// exactly when the base's spin flag and the twist flag differ.
fn s2_bundle_for(base_spin: bool, twisted: bool, n_plus_1: usize) -> Summand {
    if base_spin != twisted {
        Summand::twisted(n_plus_1)
    } else {
        Summand::sphere_product(2, n_plus_1 - 2)
    }
}

/// Total space of the circle bundle over a single summand, when known.
fn known_total(s: &Summand, e: &IntVec) -> Option<ConnectedSumExpr> {
    let n = s.dim();
    let c = e.entries();
    let expr = |summands: Vec<Summand>| ConnectedSumExpr::new(n + 1, summands).ok();
    match *s {
        Summand::SphereProduct { k: 2, .. } | Summand::TwistedS2Bundle { .. }
            if is_unit(&c[0]) =>
        {
            expr(vec![Summand::sphere_product(3, n - 2)])
        }
        Summand::ComplexProjective { .. } if is_unit(&c[0]) => expr(vec![]),
        Summand::CPSphereBundle { m, r, .. }
            if is_unit(&c[0]) && c[1..].iter().all(Zero::is_zero) =>
        {
            expr(vec![Summand::sphere_product(2 * m + 1, r)])
        }
        Summand::ProjectiveBundleOverS2 { r } if c[0].is_zero() && is_unit(&c[1]) => {
            expr(vec![Summand::twisted(2 * r + 3)])
        }
        _ => None,
    }
}

/// Σ_e (twisted = false) or ~Σ_e (twisted = true) of a single summand.
pub fn suspend_summand(s: &Summand, e: &IntVec, twisted: bool) -> Result<ConnectedSumExpr> {
    s.validate()?;
    check_len(e, s.h2_rank())?;
    let n = s.dim();
    let unsupported = || {
        Err(Error::Unsupported(format!(
            "suspension of {s} along {e} is not determined by the known rules"
        )))
    };
    if n < 5 && !matches!(s, Summand::ComplexProjective { .. }) {
        return unsupported();
    }
    let out = match *s {
        Summand::StandardSphere { .. } => vec![],
        Summand::SphereProduct { k, l } if k >= 3 => {
            vec![Summand::sphere_product(k, l + 1), Summand::sphere_product(k + 1, l)]
        }
        Summand::SphereProduct { l, .. } => {
            let even = e.entries()[0].is_even();
            let first = if twisted || even {
                Summand::sphere_product(2, l + 1)
            } else {
                Summand::twisted(n + 1)
            };
            vec![first, Summand::sphere_product(3, l)]
        }
        Summand::TwistedS2Bundle { .. } => {
            let odd = e.entries()[0].is_odd();
            let first = if !twisted && odd {
                Summand::sphere_product(2, n - 1)
            } else {
                Summand::twisted(n + 1)
            };
            vec![first, Summand::sphere_product(3, n - 2)]
        }
        _ => match known_total(s, e) {
            Some(p) => {
                let mut v = p.summands().to_vec();
                v.push(s2_bundle_for(s.is_spin(), twisted, n + 1));
                v
            }
            None => return unsupported(),
        },
    };
    ConnectedSumExpr::new(n + 1, out)?.canonicalize()
}

/// Σ_e or ~Σ_e of a connected sum. Supported when the sum has at most one
/// summand, or when e is primitive so that the circle bundle is known.
pub fn suspend(base: &ConnectedSumExpr, e: &IntVec, twisted: bool) -> Result<ConnectedSumExpr> {
    let basis = base.h2_basis();
    check_len(e, basis.len())?;
    let n = base.dim();
    match base.summands() {
        [] => return ConnectedSumExpr::sphere(n + 1),
        [s] => return suspend_summand(s, e, twisted),
        _ => {}
    }
    if !content(e).is_one() {
        return Err(Error::Unsupported(format!(
            "suspension of {base} along non-primitive {e} is not determined by the known rules"
        )));
    }
    let p = if base.is_form_star() {
        crate::manifold::from_betti(&circle_bundle(base, e)?)?
    } else {
        splitting_path(base, e)?
    };
    let extra = ConnectedSumExpr::new(n + 1, vec![s2_bundle_for(base.is_spin(), twisted, n + 1)])?;
    p.concat(extra)?.canonicalize()
}

/// Betti profile of the circle-bundle total space over a form-(*) base with
/// primitive Euler class; `spin` is the total space's spin flag.
pub(crate) fn recurrence_step(base: &BettiProfile, spin: bool) -> BettiProfile {
    let n = base.dim();
    let m = n + 1;
    let mut b = vec![BigInt::zero(); m + 1];
    b[0] = BigInt::one();
    b[m] = BigInt::one();
    b[2] = base.b(2) - 1;
    b[m - 2] = b[2].clone();
    for i in 3..=n.saturating_sub(3) {
        b[i] = base.b(i - 1) + base.b(i);
    }
    if n >= 6 {
        b[n - 2] = b[3].clone();
    } else {
        // dim 6 total space: the recurrence stops short of the middle and
        // χ = 0 fixes it
        b[3] = BigInt::from(2) + &b[2] * 2;
    }
    BettiProfile::from_full(b, spin)
}

/// Total space of the principal circle bundle with Euler class `e`.
pub fn circle_bundle(base: &ConnectedSumExpr, e: &IntVec) -> Result<BettiProfile> {
    let basis = base.h2_basis();
    check_len(e, basis.len())?;
    require_primitive(e)?;
    if base.is_form_star() {
        let rows = IntMat::from_rows(e.len(), vec![e.clone()])?;
        let spin = gf2_in_span(&basis.w2(), &rows)?;
        return Ok(recurrence_step(&base.betti_profile(), spin));
    }
    Ok(splitting_path(base, e)?.betti_profile())
}

/// Reduces S^2-summand coordinates by even multiples of one another until one
/// of them is ±1. Parities, hence w_2 and the spin clause, are unchanged.
fn even_reduce(coords: &mut [BigInt]) {
    loop {
        let nonzero: Vec<usize> = (0..coords.len()).filter(|&i| !coords[i].is_zero()).collect();
        if nonzero.iter().any(|&i| is_unit(&coords[i])) {
            return;
        }
        let Some(&small) = nonzero.iter().min_by_key(|&&i| coords[i].abs()) else { return };
        let Some(&big) = nonzero
            .iter()
            .filter(|&&i| coords[i].abs() > coords[small].abs())
            .max_by_key(|&&i| coords[i].abs())
        else {
            return;
        };
        // c_big -= 2q c_small with |result| <= |c_small|
        let two_s = &coords[small] * 2;
        let (mut q, rem) = coords[big].div_mod_floor(&two_s);
        if rem.abs() * 2 > two_s.abs() {
            q += 1;
        }
        let delta = &two_s * q;
        coords[big] -= delta;
    }
}

/// Circle bundle via `P = P_1 # Σ(B_2) # …`, where `P_1` is the bundle over
/// the first summand (canonical order) with primitive restriction and a
/// known total space; the others are suspended with the twist fixed by the
/// spin of that summand.
pub fn splitting_path(base: &ConnectedSumExpr, e: &IntVec) -> Result<ConnectedSumExpr> {
    let basis = base.h2_basis();
    check_len(e, basis.len())?;
    require_primitive(e)?;
    let summands = base.summands();
    let mut order: Vec<usize> = (0..summands.len()).collect();
    order.sort_by_key(|&i| summands[i].sort_key());

    let restrict = |e: &IntVec, i: usize| {
        IntVec(basis.positions(i).iter().map(|&j| e.entries()[j].clone()).collect())
    };
    let pick = |e: &IntVec| {
        order.iter().copied().find_map(|i| known_total(&summands[i], &restrict(e, i)).map(|p| (i, p)))
    };

    let mut e = e.clone();
    let mut chosen = pick(&e);
    if chosen.is_none() {
        let s2: Vec<usize> = (0..summands.len()).filter(|&i| summands[i].is_s2_bundle()).collect();
        let s2_pos: Vec<usize> = s2.iter().map(|&i| basis.positions(i)[0]).collect();
        let rest: Vec<BigInt> = (0..e.len())
            .filter(|j| !s2_pos.contains(j))
            .map(|j| e.entries()[j].clone())
            .collect();
        let d2 = content(&IntVec(rest));
        let mut coords: Vec<BigInt> = s2_pos.iter().map(|&j| e.entries()[j].clone()).collect();
        let d1 = content(&IntVec(coords.clone()));
        if s2.len() == 1 {
            let r = if d2.is_zero() { d1.clone() } else { d1.mod_floor(&d2) };
            let ok = d2.is_one() || r.is_one() || r == &d2 - 1u32;
            if !ok {
                return Err(Error::SideCondition { d1: d1.to_string(), d2: d2.to_string() });
            }
        }
        if s2.len() < 2 || !d1.is_one() {
            return Err(Error::Unsupported(format!(
                "no summand of {base} has a primitive restriction of {e} with a known bundle"
            )));
        }
        even_reduce(&mut coords);
        for (&j, c) in s2_pos.iter().zip(coords) {
            e.0[j] = c;
        }
        chosen = pick(&e);
    }
    let (first, p1) = chosen.ok_or_else(|| {
        Error::Unsupported(format!("no admissible first summand in {base} for {e}"))
    })?;
    let flag = summands[first].is_spin();
    let mut total = p1;
    for &i in order.iter().filter(|&&i| i != first) {
        total = total.concat(suspend_summand(&summands[i], &restrict(&e, i), flag)?)?;
    }
    total.canonicalize()
}

/// Spin rule stated through divisibilities: no twisted summand, or odd
/// restriction to every twisted summand and even restriction to every
/// S^2 x S^{n-2} summand.
pub fn divisibility_spin_clause(base: &ConnectedSumExpr, e: &IntVec) -> Result<bool> {
    if let Some(s) = base.summands().iter().find(|s| !s.is_form_star()) {
        return Err(Error::ExtendedCatalog(s.to_string()));
    }
    let basis = base.h2_basis();
    check_len(e, basis.len())?;
    let summands = base.summands();
    if !summands.iter().any(|s| matches!(s, Summand::TwistedS2Bundle { .. })) {
        return Ok(true);
    }
    Ok(basis.generators.iter().zip(e.entries()).all(|(g, c)| match summands[g.summand] {
        Summand::TwistedS2Bundle { .. } => c.is_odd(),
        _ => c.is_even(),
    }))
}

/// Principal T^k-bundle over a form-(*) base, one circle at a time.
pub fn torus_bundle(base: &ConnectedSumExpr, e: &IntMat) -> Result<BundleResult> {
    if let Some(s) = base.summands().iter().find(|s| !s.is_form_star()) {
        return Err(Error::ExtendedCatalog(s.to_string()));
    }
    let basis = base.h2_basis();
    if e.cols() != basis.len() {
        return Err(Error::LengthMismatch { expected: basis.len(), actual: e.cols() });
    }
    if e.rows() == 0 {
        return Err(Error::Dimension("torus bundle needs at least one Euler class".into()));
    }
    if e.rows() > e.cols() || !extends_to_basis(e)? {
        return Err(not_basis(e));
    }
    let w2 = basis.w2();
    let mut cur = base.betti_profile();
    let mut stages = Vec::with_capacity(e.rows());
    for j in 1..=e.rows() {
        let spin = gf2_in_span(&w2, &e.top_rows(j))?;
        cur = recurrence_step(&cur, spin);
        stages.push(cur.clone());
    }
    Ok(BundleResult { total: cur, stages })
}

/// Principal T^k-bundle over a simply-connected 4-manifold.
pub fn torus_bundle_over_4(base: &FourManifoldSpec, e: &IntMat) -> Result<BettiProfile> {
    if e.cols() != base.b2 {
        return Err(Error::LengthMismatch { expected: base.b2, actual: e.cols() });
    }
    let k = e.rows();
    if k == 0 {
        return Err(Error::Dimension("torus bundle needs at least one Euler class".into()));
    }
    if k > base.b2 || !extends_to_basis(e)? {
        return Err(not_basis(e));
    }
    let r = BigInt::from(base.b2 - k);
    let lower = (2..=(k + 4) / 2).map(|i| a_ki(k, i, &r)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<bool>> = e.row_vecs().iter().map(IntVec::parity).collect();
    let spin = gf2_in_span_bits(&base.w2, &rows);
    BettiProfile::from_lower(k + 4, &lower, spin)
}

pub fn a_ki_json(k: usize, r: &BigInt) -> Result<Value> {
    let vals = (2..=k + 2).map(|i| a_ki(k, i, r).map(|x| big_to_value(&x))).collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::from_betti;

    fn sp(k: usize, l: usize) -> Summand {
        Summand::sphere_product(k, l)
    }

    fn expr(n: usize, s: Vec<Summand>) -> ConnectedSumExpr {
        ConnectedSumExpr::new(n, s).unwrap()
    }

    fn v(x: &[i64]) -> IntVec {
        IntVec::from(x)
    }

    fn profile(n: usize, lower: &[i64], spin: bool) -> BettiProfile {
        BettiProfile::from_lower_i64(n, lower, spin).unwrap()
    }

    #[test]
    fn suspension_examples() {
        let out = suspend_summand(&sp(3, 3), &v(&[]), false).unwrap();
        assert_eq!(out, expr(7, vec![sp(3, 4), sp(3, 4)]));

        let out = suspend_summand(&sp(2, 4), &v(&[2]), false).unwrap();
        assert_eq!(out, expr(7, vec![sp(2, 5), sp(3, 4)]));

        let out = suspend_summand(&Summand::cp(2), &v(&[1]), false).unwrap();
        assert_eq!(out, expr(5, vec![sp(2, 3)]));

        let out = suspend_summand(&Summand::sphere(5), &v(&[]), true).unwrap();
        assert_eq!(out, ConnectedSumExpr::sphere(6).unwrap());
    }

    #[test]
    fn suspension_of_s2_bundles() {
        let t = Summand::twisted(6);
        // Σ: plain for (plain, even) and (twisted, odd)
        assert_eq!(suspend_summand(&sp(2, 4), &v(&[1]), false).unwrap(), expr(7, vec![Summand::twisted(7), sp(3, 4)]));
        assert_eq!(suspend_summand(&t, &v(&[3]), false).unwrap(), expr(7, vec![sp(2, 5), sp(3, 4)]));
        assert_eq!(suspend_summand(&t, &v(&[0]), false).unwrap(), expr(7, vec![Summand::twisted(7), sp(3, 4)]));
        // ~Σ keeps the bundle type
        assert_eq!(suspend_summand(&sp(2, 4), &v(&[1]), true).unwrap(), expr(7, vec![sp(2, 5), sp(3, 4)]));
        assert_eq!(suspend_summand(&t, &v(&[1]), true).unwrap(), expr(7, vec![Summand::twisted(7), sp(3, 4)]));
    }

    #[test]
    fn suspension_of_cp() {
        // odd m: CP^m is spin
        assert_eq!(suspend_summand(&Summand::cp(3), &v(&[1]), false).unwrap(), expr(7, vec![Summand::twisted(7)]));
        assert_eq!(suspend_summand(&Summand::cp(3), &v(&[-1]), true).unwrap(), expr(7, vec![sp(2, 5)]));
        assert_eq!(suspend_summand(&Summand::cp(2), &v(&[1]), true).unwrap(), expr(5, vec![Summand::twisted(5)]));
        assert!(matches!(suspend_summand(&Summand::cp(3), &v(&[2]), false), Err(Error::Unsupported(_))));
    }

    #[test]
    fn circle_bundle_examples() {
        let p = circle_bundle(&expr(6, vec![Summand::cp(3)]), &v(&[1])).unwrap();
        assert_eq!(p, BettiProfile::sphere(7));

        let p = circle_bundle(&expr(5, vec![Summand::twisted(5)]), &v(&[1])).unwrap();
        assert_eq!(p, profile(6, &[0, 2], true));

        let p = circle_bundle(&expr(5, vec![sp(2, 3), sp(2, 3)]), &v(&[1, 0])).unwrap();
        assert_eq!(p, profile(6, &[1, 4], true));

        let p = circle_bundle(&expr(6, vec![sp(2, 4)]), &v(&[1])).unwrap();
        assert_eq!(p, profile(7, &[0, 1], true));
    }

    #[test]
    fn circle_bundle_rejects_non_primitive() {
        let err = circle_bundle(&expr(6, vec![sp(2, 4)]), &v(&[2])).unwrap_err();
        assert_eq!(err, Error::NotPrimitive { content: "2".into() });
        let err = circle_bundle(&expr(6, vec![sp(3, 3)]), &v(&[])).unwrap_err();
        assert_eq!(err, Error::NotPrimitive { content: "0".into() });
    }

    #[test]
    fn decomposition_path_matches_recurrence() {
        let base = expr(5, vec![Summand::twisted(5), sp(2, 3)]);
        for e in [[1, 0], [1, 1], [0, 1], [3, 2], [2, 3], [-3, 1]] {
            let e = v(&e);
            let a = splitting_path(&base, &e).unwrap().betti_profile();
            let c = circle_bundle(&base, &e).unwrap();
            assert_eq!(a, c, "e = {e}");
        }
    }

    #[test]
    fn even_reduction_reaches_a_unit() {
        let base = expr(6, vec![sp(2, 4), sp(2, 4)]);
        let e = v(&[3, 5]);
        let out = splitting_path(&base, &e).unwrap();
        assert_eq!(out.betti_profile(), circle_bundle(&base, &e).unwrap());
    }

    #[test]
    fn side_condition_reported() {
        // single S^2-summand with restriction 2, CP^3 restriction 5: 2 is not ±1 mod 5
        let base = expr(6, vec![sp(2, 4), Summand::cp(3)]);
        let err = splitting_path(&base, &v(&[2, 5])).unwrap_err();
        assert_eq!(err, Error::SideCondition { d1: "2".into(), d2: "5".into() });
        // 4 = -1 mod 5 satisfies it, but the rewrite is beyond the known rules
        let err = splitting_path(&base, &v(&[4, 5])).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn spin_clause_examples() {
        let base = expr(6, vec![Summand::twisted(6), sp(2, 4)]);
        assert!(divisibility_spin_clause(&base, &v(&[1, 0])).unwrap());
        assert!(!divisibility_spin_clause(&base, &v(&[1, 1])).unwrap());
        assert!(divisibility_spin_clause(&expr(6, vec![sp(2, 4)]), &v(&[1])).unwrap());
    }

    #[test]
    fn torus_bundle_examples() {
        let base = expr(5, vec![Summand::twisted(5), sp(2, 3)]);
        let e = IntMat::from_i64(&[&[1, 0], &[0, 1]]);
        let r = torus_bundle(&base, &e).unwrap();
        assert_eq!(r.total.dim(), 7);
        assert_eq!(r.total.b(2), BigInt::zero());
        let s1 = &r.stages[0];
        assert_eq!(r.total.b(3), s1.b(2) + s1.b(3));
        assert_eq!(r.stages.len(), 2);

        let bad = IntMat::from_i64(&[&[2, 0]]);
        let err = torus_bundle(&base, &bad).unwrap_err();
        assert_eq!(err, Error::NotBasis { free_rank: 0, torsion: vec!["2".into()] });

        let e1 = IntMat::from_i64(&[&[1, 1]]);
        let r = torus_bundle(&base, &e1).unwrap();
        assert_eq!(r.total, circle_bundle(&base, &v(&[1, 1])).unwrap());
    }

    #[test]
    fn four_manifold_examples() {
        let cp2 = FourManifoldSpec::cp2_sum(1);
        let p = torus_bundle_over_4(&cp2, &IntMat::from_i64(&[&[1]])).unwrap();
        assert_eq!(p, BettiProfile::sphere(5));

        let b = FourManifoldSpec::cp2_sum(2);
        let p = torus_bundle_over_4(&b, &IntMat::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(p, profile(6, &[0, 2], true));

        let b = FourManifoldSpec::cp2_sum(3);
        let p = torus_bundle_over_4(&b, &IntMat::from_i64(&[&[1, 0, 0]])).unwrap();
        assert_eq!(p, profile(5, &[2], false));
    }

    #[test]
    fn a_ki_examples() {
        assert_eq!(a_ki(3, 2, &BigInt::from(5)).unwrap(), BigInt::from(5));
        assert_eq!(a_ki(2, 3, &BigInt::zero()).unwrap(), BigInt::from(2));
        assert_eq!(a_ki(0, 2, &BigInt::from(7)).unwrap(), BigInt::from(7));
        assert!(a_ki(2, 5, &BigInt::zero()).is_err());
        assert!(a_ki(2, 1, &BigInt::zero()).is_err());
    }

    #[test]
    fn suspend_connected_sum_with_primitive_class() {
        // spin base, untwisted: the attached S^2-bundle is the twisted one
        let base = expr(6, vec![sp(2, 4), sp(3, 3)]);
        let out = suspend(&base, &v(&[1]), false).unwrap();
        let p = from_betti(&circle_bundle(&base, &v(&[1])).unwrap()).unwrap();
        let expected = p.concat(expr(7, vec![Summand::twisted(7)])).unwrap().canonicalize().unwrap();
        assert_eq!(out, expected);
        assert!(matches!(
            suspend(&base, &v(&[0]), false),
            Err(Error::Unsupported(_))
        ));
    }
}
