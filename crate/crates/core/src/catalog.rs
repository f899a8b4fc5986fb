//! Explicit quotients of free circle actions in dimensions 5 to 10, and the
//! stabilization bound m_0 in odd dimensions. Every answer is re-derived by
//! forward bundle evaluation before it is returned.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::bundle::{circle_bundle, torus_bundle_over_4, FourManifoldSpec};
use crate::error::{Error, Result};
use crate::feasibility::{chi_iter, quotient_tower};
use crate::json::ints_to_value;
use crate::lattice::{IntMat, IntVec};
use crate::manifold::{from_betti, BettiProfile, ConnectedSumExpr, Summand, MAX_SUMMANDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    P,
    Q,
    R,
    S,
    A,
    B,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::R => "r",
            Var::S => "s",
            Var::A => "a",
            Var::B => "b",
        }
    }
}

/// `(constant + Σ coeff·var) / div`, used for Betti patterns and summand
/// multiplicities.
#[derive(Debug, Clone, Copy)]
pub struct Lin {
    pub constant: i64,
    pub terms: &'static [(i64, Var)],
    pub div: i64,
}

const fn lin(constant: i64, terms: &'static [(i64, Var)]) -> Lin {
    Lin { constant, terms, div: 1 }
}

const fn half(constant: i64, terms: &'static [(i64, Var)]) -> Lin {
    Lin { constant, terms, div: 2 }
}

const fn c(constant: i64) -> Lin {
    lin(constant, &[])
}

const P: Lin = lin(0, &[(1, Var::P)]);
const Q: Lin = lin(0, &[(1, Var::Q)]);
const R: Lin = lin(0, &[(1, Var::R)]);

impl Lin {
    /// None unless the value is an integer.
    pub fn eval(&self, x: &Params) -> Option<i64> {
        let num = self.terms.iter().fold(self.constant, |acc, &(k, v)| acc + k * x.get(v));
        (num % self.div == 0).then_some(num / self.div)
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for &(k, v) in self.terms {
            match (s.is_empty(), k) {
                (true, 1) => {}
                (true, -1) => s.push('-'),
                (true, _) => s.push_str(&k.to_string()),
                (false, 1) => s.push('+'),
                (false, -1) => s.push('-'),
                (false, _) if k > 0 => s.push_str(&format!("+{k}")),
                (false, _) => s.push_str(&k.to_string()),
            }
            s.push_str(v.name());
        }
        if self.constant != 0 || s.is_empty() {
            if !s.is_empty() && self.constant > 0 {
                s.push('+');
            }
            s.push_str(&self.constant.to_string());
        }
        if self.div != 1 {
            if self.terms.len() + (self.constant != 0) as usize > 1 {
                s = format!("({s})");
            }
            s.push_str(&format!("/{}", self.div));
        }
        f.write_str(&s)
    }
}

/// Row parameters read off M, plus the split (a, b) some n = 9 rows choose.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Params {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
    pub a: i64,
    pub b: i64,
}

impl Params {
    pub fn get(&self, v: Var) -> i64 {
        match v {
            Var::P => self.p,
            Var::Q => self.q,
            Var::R => self.r,
            Var::S => self.s,
            Var::A => self.a,
            Var::B => self.b,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "q": self.q, "r": self.r, "s": self.s})
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRule {
    None,
    /// a + b = q, 0 ≤ a ≤ p+1, 0 ≤ b ≤ r, r − b even.
    Spin,
    /// As `Spin` but 1 ≤ a ≤ p: a = p+1 leaves no CP^4 summand and the total
    /// space comes out spin.
    NonSpin,
}

/// How the Euler class restricts to a summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// A generator of H^2, pulled back from the base CP^m for sphere bundles.
    Generator,
    /// The tautological class of P(E).
    Tautological,
    Zero,
}

impl Restriction {
    pub fn of(s: &Summand) -> Restriction {
        match s {
            Summand::ProjectiveBundleOverS2 { .. } => Restriction::Tautological,
            _ if s.h2_rank() == 0 => Restriction::Zero,
            _ => Restriction::Generator,
        }
    }

    fn coords(self, rank: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); rank];
        match self {
            Restriction::Generator => v[0] = BigInt::one(),
            Restriction::Tautological => v[1] = BigInt::one(),
            Restriction::Zero => {}
        }
        v
    }

    fn name(self) -> &'static str {
        match self {
            Restriction::Generator => "generator",
            Restriction::Tautological => "tautological",
            Restriction::Zero => "zero",
        }
    }
}

pub struct Table1Row {
    pub id: &'static str,
    pub dim: usize,
    pub spin: bool,
    /// b_2..b_{⌊n/2⌋} of M.
    pub betti: &'static [Lin],
    pub condition: &'static str,
    check: fn(&Params) -> bool,
    pub split: SplitRule,
    pub template: &'static [(Summand, Lin)],
}

const fn sp(k: usize, l: usize) -> Summand {
    Summand::SphereProduct { k, l }
}

const fn tw(n: usize) -> Summand {
    Summand::TwistedS2Bundle { n }
}

const fn cp(m: usize) -> Summand {
    Summand::ComplexProjective { m }
}

const fn e(m: usize, r: usize) -> Summand {
    Summand::CPSphereBundle { m, r, twisted: false }
}

const fn te(m: usize, r: usize) -> Summand {
    Summand::CPSphereBundle { m, r, twisted: true }
}

const fn pe(r: usize) -> Summand {
    Summand::ProjectiveBundleOverS2 { r }
}

const N7: &[Lin] = &[P, Q];
const N8: &[Lin] = &[P, Q, lin(0, &[(2, Var::R)])];
const N9: &[Lin] = &[P, Q, R];
const N10: &[Lin] = &[P, Q, R, lin(0, &[(2, Var::S)])];

pub static TABLE1: &[Table1Row] = &[
    Table1Row {
        id: "7a",
        dim: 7,
        spin: true,
        betti: N7,
        condition: "q even",
        check: |x| x.q % 2 == 0,
        split: SplitRule::None,
        template: &[(cp(3), lin(1, &[(1, Var::P)])), (sp(3, 3), half(0, &[(1, Var::Q)]))],
    },
    Table1Row {
        id: "7b",
        dim: 7,
        spin: true,
        betti: N7,
        condition: "q odd",
        check: |x| x.q % 2 == 1,
        split: SplitRule::None,
        template: &[(sp(2, 4), c(1)), (cp(3), P), (sp(3, 3), half(-1, &[(1, Var::Q)]))],
    },
    Table1Row {
        id: "7c",
        dim: 7,
        spin: false,
        betti: N7,
        condition: "q >= 2 even, p >= 1",
        check: |x| x.q >= 2 && x.q % 2 == 0 && x.p >= 1,
        split: SplitRule::None,
        template: &[
            (tw(6), c(1)),
            (sp(2, 4), c(1)),
            (cp(3), lin(-1, &[(1, Var::P)])),
            (sp(3, 3), half(-2, &[(1, Var::Q)])),
        ],
    },
    Table1Row {
        id: "7d",
        dim: 7,
        spin: false,
        betti: N7,
        condition: "q odd, p >= 1",
        check: |x| x.q % 2 == 1 && x.p >= 1,
        split: SplitRule::None,
        template: &[(tw(6), c(1)), (cp(3), P), (sp(3, 3), half(-1, &[(1, Var::Q)]))],
    },
    Table1Row {
        id: "7e",
        dim: 7,
        spin: false,
        betti: &[P, c(0)],
        condition: "q = 0, p > 1",
        check: |x| x.p > 1,
        split: SplitRule::None,
        template: &[(te(2, 2), c(1)), (cp(3), lin(-1, &[(1, Var::P)]))],
    },
    Table1Row {
        id: "7f",
        dim: 7,
        spin: false,
        betti: &[c(1), c(0)],
        condition: "p = 1, q = 0",
        check: |_| true,
        split: SplitRule::None,
        template: &[(pe(2), c(1))],
    },
    Table1Row {
        id: "8a",
        dim: 8,
        spin: true,
        betti: N8,
        condition: "p + r + 1 = q",
        check: |x| x.p + x.r + 1 == x.q,
        split: SplitRule::None,
        template: &[(sp(2, 5), lin(1, &[(1, Var::P)])), (sp(3, 4), R)],
    },
    Table1Row {
        id: "8b",
        dim: 8,
        spin: false,
        betti: N8,
        condition: "p + r + 1 = q",
        check: |x| x.p + x.r + 1 == x.q,
        split: SplitRule::None,
        template: &[(tw(7), c(1)), (sp(2, 5), P), (sp(3, 4), R)],
    },
    Table1Row {
        id: "9a",
        dim: 9,
        spin: true,
        betti: N9,
        condition: "q > 0, 1 + p + r >= q",
        check: |x| x.q > 0 && 1 + x.p + x.r >= x.q,
        split: SplitRule::Spin,
        template: &[
            (cp(4), lin(1, &[(1, Var::P), (-1, Var::A)])),
            (tw(8), lin(0, &[(1, Var::A)])),
            (sp(3, 5), lin(0, &[(1, Var::B)])),
            (sp(4, 4), half(0, &[(1, Var::R), (-1, Var::B)])),
        ],
    },
    Table1Row {
        id: "9b",
        dim: 9,
        spin: true,
        betti: &[P, c(0), R],
        condition: "q = 0, r even",
        check: |x| x.r % 2 == 0,
        split: SplitRule::None,
        template: &[(cp(4), lin(1, &[(1, Var::P)])), (sp(4, 4), half(0, &[(1, Var::R)]))],
    },
    Table1Row {
        id: "9c",
        dim: 9,
        spin: true,
        betti: &[P, c(0), R],
        condition: "q = 0, r odd",
        check: |x| x.r % 2 == 1,
        split: SplitRule::None,
        template: &[(te(2, 4), c(1)), (cp(4), P), (sp(4, 4), half(-1, &[(1, Var::R)]))],
    },
    Table1Row {
        id: "9d",
        dim: 9,
        spin: false,
        betti: N9,
        condition: "p > 0, q > 1, 1 + p + r >= q",
        check: |x| x.p > 0 && x.q > 1 && 1 + x.p + x.r >= x.q,
        split: SplitRule::NonSpin,
        template: &[
            (cp(4), lin(1, &[(1, Var::P), (-1, Var::A)])),
            (sp(2, 6), lin(0, &[(1, Var::A)])),
            (sp(3, 5), lin(0, &[(1, Var::B)])),
            (sp(4, 4), half(0, &[(1, Var::R), (-1, Var::B)])),
        ],
    },
    Table1Row {
        id: "9e",
        dim: 9,
        spin: false,
        betti: &[P, c(1), R],
        condition: "q = 1, p > 0, r even",
        check: |x| x.p > 0 && x.r % 2 == 0,
        split: SplitRule::None,
        template: &[(cp(4), P), (sp(2, 6), c(1)), (sp(4, 4), half(0, &[(1, Var::R)]))],
    },
    Table1Row {
        id: "9f",
        dim: 9,
        spin: false,
        betti: &[P, c(1), R],
        condition: "q = 1, p > 0, r odd",
        check: |x| x.p > 0 && x.r % 2 == 1,
        split: SplitRule::None,
        template: &[
            (cp(4), lin(-1, &[(1, Var::P)])),
            (tw(8), c(1)),
            (e(2, 4), c(1)),
            (sp(4, 4), half(-1, &[(1, Var::R)])),
        ],
    },
    Table1Row {
        id: "9g",
        dim: 9,
        spin: false,
        betti: &[P, c(0), R],
        condition: "q = 0, p > 0, r >= 2 even",
        check: |x| x.p > 0 && x.r >= 2 && x.r % 2 == 0,
        split: SplitRule::None,
        template: &[
            (e(2, 4), c(1)),
            (te(2, 4), c(1)),
            (cp(4), lin(-1, &[(1, Var::P)])),
            (sp(4, 4), half(-2, &[(1, Var::R)])),
        ],
    },
    Table1Row {
        id: "9h",
        dim: 9,
        spin: false,
        betti: &[P, c(0), R],
        condition: "q = 0, p > 0, r odd",
        check: |x| x.p > 0 && x.r % 2 == 1,
        split: SplitRule::None,
        template: &[(e(2, 4), c(1)), (cp(4), P), (sp(4, 4), half(-1, &[(1, Var::R)]))],
    },
    Table1Row {
        id: "9i",
        dim: 9,
        spin: false,
        betti: &[P, c(0), c(0)],
        condition: "q = r = 0, p > 1",
        check: |x| x.p > 1,
        split: SplitRule::None,
        template: &[(e(3, 2), c(1)), (cp(4), lin(-1, &[(1, Var::P)]))],
    },
    Table1Row {
        id: "9j",
        dim: 9,
        spin: false,
        betti: &[c(1), c(0), c(0)],
        condition: "p = 1, q = r = 0",
        check: |_| true,
        split: SplitRule::None,
        template: &[(pe(3), c(1))],
    },
    Table1Row {
        id: "10a",
        dim: 10,
        spin: true,
        betti: N10,
        condition: "p + r + 1 = q + s, s >= r",
        check: |x| x.p + x.r + 1 == x.q + x.s && x.s >= x.r,
        split: SplitRule::None,
        template: &[
            (sp(2, 7), Q),
            (sp(4, 5), R),
            (e(2, 5), lin(0, &[(1, Var::S), (-1, Var::R)])),
        ],
    },
    Table1Row {
        id: "10b",
        dim: 10,
        spin: true,
        betti: N10,
        condition: "p + r + 1 = q + s, s < r",
        check: |x| x.p + x.r + 1 == x.q + x.s && x.s < x.r,
        split: SplitRule::None,
        template: &[
            (sp(2, 7), lin(1, &[(1, Var::P)])),
            (sp(3, 6), lin(0, &[(1, Var::R), (-1, Var::S)])),
            (sp(4, 5), lin(0, &[(1, Var::S)])),
        ],
    },
    Table1Row {
        id: "10c",
        dim: 10,
        spin: false,
        betti: N10,
        condition: "p + r + 1 = q + s, s >= r, p, q > 0",
        check: |x| x.p + x.r + 1 == x.q + x.s && x.s >= x.r && x.p > 0 && x.q > 0,
        split: SplitRule::None,
        template: &[
            (tw(9), c(1)),
            (sp(2, 7), lin(-1, &[(1, Var::Q)])),
            (sp(4, 5), R),
            (e(2, 5), lin(0, &[(1, Var::S), (-1, Var::R)])),
        ],
    },
    Table1Row {
        id: "10d",
        dim: 10,
        spin: false,
        betti: N10,
        condition: "p + r + 1 = q + s, s < r, p > 0",
        check: |x| x.p + x.r + 1 == x.q + x.s && x.s < x.r && x.p > 0,
        split: SplitRule::None,
        template: &[
            (sp(2, 7), c(1)),
            (tw(9), P),
            (sp(3, 6), lin(0, &[(1, Var::R), (-1, Var::S)])),
            (sp(4, 5), lin(0, &[(1, Var::S)])),
        ],
    },
    Table1Row {
        id: "10e",
        dim: 10,
        spin: false,
        betti: &[P, c(0), R, lin(0, &[(2, Var::S)])],
        condition: "q = 0, p + r + 1 = s, p > 0",
        check: |x| x.p + x.r + 1 == x.s && x.p > 0,
        split: SplitRule::None,
        template: &[
            (sp(4, 5), R),
            (te(2, 5), c(1)),
            (e(2, 5), lin(-1, &[(1, Var::S), (-1, Var::R)])),
        ],
    },
];

impl Table1Row {
    /// The Betti profile of M for these parameters, if they give one.
    pub fn target(&self, x: &Params) -> Option<BettiProfile> {
        let lower: Option<Vec<BigInt>> =
            self.betti.iter().map(|l| l.eval(x).filter(|&v| v >= 0).map(BigInt::from)).collect();
        BettiProfile::from_lower(self.dim, &lower?, self.spin).ok()
    }

    /// Whether the row's side conditions hold (the split is not chosen here).
    pub fn applies(&self, x: &Params) -> bool {
        (self.check)(x)
    }

    /// Admissible (a, b), preferred first: b as large as possible.
    pub fn splits(&self, x: &Params) -> Vec<(i64, i64)> {
        let max_a = match self.split {
            SplitRule::None => return vec![(0, 0)],
            SplitRule::Spin => x.p + 1,
            SplitRule::NonSpin => x.p,
        };
        let min_a = if self.split == SplitRule::NonSpin { 1 } else { 0 };
        (0..=x.q.min(x.r))
            .rev()
            .filter(|b| (x.r - b) % 2 == 0)
            .map(|b| (x.q - b, b))
            .filter(|&(a, _)| a >= min_a && a <= max_a)
            .collect()
    }

    /// The base and Euler class for parameters with the split already set.
    pub fn instantiate(&self, x: &Params) -> Result<(ConnectedSumExpr, IntVec)> {
        let mut summands = Vec::new();
        let mut euler = Vec::new();
        for (s, count) in self.template {
            let k = count
                .eval(x)
                .filter(|&k| k >= 0)
                .ok_or_else(|| Error::InvalidProfile(format!("row {}: multiplicity {count} invalid", self.id)))?;
            if summands.len() + k as usize > MAX_SUMMANDS {
                return Err(Error::OutOfRange(format!("row {}: {k} summands", self.id)));
            }
            for _ in 0..k {
                summands.push(s.clone());
                euler.extend(Restriction::of(s).coords(s.h2_rank()));
            }
        }
        Ok((ConnectedSumExpr::new(self.dim - 1, summands)?, IntVec(euler)))
    }

    pub fn to_json(&self) -> Value {
        let template: Vec<Value> = self
            .template
            .iter()
            .map(|(s, count)| {
                json!({"summand": s.to_json(), "label": s.to_string(), "count": count.to_string(),
                       "euler": Restriction::of(s).name()})
            })
            .collect();
        let mut betti = serde_json::Map::new();
        for (j, l) in self.betti.iter().enumerate() {
            betti.insert((j + 2).to_string(), Value::String(l.to_string()));
        }
        let split = match self.split {
            SplitRule::None => Value::Null,
            SplitRule::Spin => json!("a + b = q, 0 <= a <= p + 1, b <= r, r - b even"),
            SplitRule::NonSpin => json!("a + b = q, 1 <= a <= p, b <= r, r - b even"),
        };
        json!({
            "id": self.id,
            "dim": self.dim,
            "spin": self.spin,
            "betti": betti,
            "condition": self.condition,
            "split": split,
            "base": template,
        })
    }
}

/// The whole table as data.
pub fn table1_json() -> Value {
    Value::Array(TABLE1.iter().map(Table1Row::to_json).collect())
}

/// Row parameters of M: (p, q, r, s) = (b_2, b_3, b_4, b_5/2) in dimension
/// 10, with b_4 = 2r in dimension 8.
pub fn params_of(m: &BettiProfile) -> Result<Params> {
    let get = |i: usize| {
        m.b(i).to_i64().filter(|&v| v as usize <= MAX_SUMMANDS).ok_or_else(|| Error::OutOfRange(format!("b_{i} = {}", m.b(i))))
    };
    let mut x = Params { p: get(2)?, q: get(3)?, ..Params::default() };
    match m.dim() {
        8 => x.r = get(4)? / 2,
        9 => x.r = get(4)?,
        10 => {
            x.r = get(4)?;
            x.s = get(5)? / 2;
        }
        _ => {}
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessBase {
    Expr(ConnectedSumExpr),
    FourManifold(FourManifoldSpec),
}

/// A circle bundle whose total space is M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Witness {
    /// Row id, `"dim5"` for the 4-manifold construction, or `"quotient"` when
    /// the iterated Euler characteristic quotient is used instead of a row.
    pub source: String,
    pub base: WitnessBase,
    pub euler: IntVec,
    pub params: Option<Params>,
}

impl Table1Witness {
    pub fn to_json(&self) -> Value {
        let base = match &self.base {
            WitnessBase::Expr(e) => json!({"expr": e.to_json(), "label": e.to_string()}),
            WitnessBase::FourManifold(f) => json!({"four_manifold": f.to_json()}),
        };
        let mut v = json!({"source": self.source, "base": base, "euler": ints_to_value(self.euler.entries())});
        if let Some(x) = &self.params {
            let mut p = x.to_json();
            if x.a != 0 || x.b != 0 {
                p["a"] = json!(x.a);
                p["b"] = json!(x.b);
            }
            v["params"] = p;
        }
        v
    }
}

fn five_dim_witness(m: &BettiProfile) -> Result<Table1Witness> {
    let b2 = m.b(2).to_usize().ok_or_else(|| Error::OutOfRange(format!("b_2 = {}", m.b(2))))? + 1;
    let base = FourManifoldSpec::cp2_sum(b2);
    let euler = if m.spin() { IntVec(vec![BigInt::one(); b2]) } else { IntVec::unit(b2, 0) };
    let total = torus_bundle_over_4(&base, &IntMat::from_rows(b2, vec![euler.clone()])?)?;
    if &total != m {
        return Err(Error::CatalogDefect(format!("4-manifold construction gives {total}, expected {m}")));
    }
    Ok(Table1Witness { source: "dim5".into(), base: WitnessBase::FourManifold(base), euler, params: None })
}

fn quotient_witness(m: &BettiProfile) -> Result<Option<Table1Witness>> {
    let tower = match quotient_tower(m, 1) {
        Ok(t) => t,
        Err(Error::Infeasible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let stage = &tower.stages[0];
    Ok(Some(Table1Witness {
        source: "quotient".into(),
        base: WitnessBase::Expr(from_betti(&stage.base)?),
        euler: stage.euler.clone(),
        params: None,
    }))
}

/// Whether M meets the dimension 5–10 hypotheses: χ = 0 in even dimensions
/// and χ_4 ≥ 0 in dimension 9.
pub fn table1_hypotheses(m: &BettiProfile) -> bool {
    let n = m.dim();
    (n % 2 == 1 || m.euler_characteristic().is_zero()) && (n != 9 || !chi_iter(m, 1, 4).is_negative())
}

/// The first matching row's base and Euler class, verified forward.
pub fn table1_base(m: &BettiProfile) -> Result<Option<Table1Witness>> {
    m.check_form_star()?;
    let n = m.dim();
    if !(5..=10).contains(&n) {
        return Err(Error::OutOfRange(format!("dimension {n} (the table covers 5..=10)")));
    }
    if !table1_hypotheses(m) {
        return Ok(None);
    }
    match n {
        5 => return five_dim_witness(m).map(Some),
        6 => return quotient_witness(m),
        _ => {}
    }
    let x = params_of(m)?;
    for row in TABLE1.iter().filter(|r| r.dim == n) {
        if row.target(&x).as_ref() != Some(m) || !row.applies(&x) {
            continue;
        }
        let Some(&(a, b)) = row.splits(&x).first() else { continue };
        let x = Params { a, b, ..x };
        let (base, euler) = row.instantiate(&x)?;
        let total = circle_bundle(&base, &euler)?;
        if &total != m {
            return Err(Error::CatalogDefect(format!(
                "row {} with {base} and e = {euler} gives {total}, expected {m}",
                row.id
            )));
        }
        return Ok(Some(Table1Witness {
            source: row.id.into(),
            base: WitnessBase::Expr(base),
            euler,
            params: Some(x),
        }));
    }
    quotient_witness(m)
}

/// Base families for M #_m (S^2 × S^{n−2}) and M #_m (S^2 ~× S^{n−2}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyVariant {
    Plain,
    /// One E_i^j summand replaced by its opposite-spin partner.
    Swapped,
    /// An extra E_{(n−3)/2}^2 # ~E_{(n−3)/2}^2 block.
    ExtraBlock,
}

impl FamilyVariant {
    pub const ALL: [FamilyVariant; 3] = [FamilyVariant::Plain, FamilyVariant::Swapped, FamilyVariant::ExtraBlock];

    pub fn name(self) -> &'static str {
        match self {
            FamilyVariant::Plain => "plain",
            FamilyVariant::Swapped => "swapped",
            FamilyVariant::ExtraBlock => "extra_block",
        }
    }
}

/// `l ↦ #_l CP^{(n−1)/2} # (#_i #_{b_{2i+1}(M)} E_i^{n−2i−1})`, with ~E in
/// place of E when n ≡ 1 mod 4. The Euler class is a generator on every
/// summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFamily {
    pub dim: usize,
    /// (i, number of E_i^{n−2i−1} summands).
    pub sphere_bundles: Vec<(usize, usize)>,
    pub tilde: bool,
}

impl BaseFamily {
    pub fn for_manifold(m: &BettiProfile) -> Result<Self> {
        let n = m.dim();
        let mut sphere_bundles = Vec::new();
        for i in 1..=(n - 3) / 2 {
            let c = m.b(2 * i + 1).to_usize().filter(|&c| c <= MAX_SUMMANDS);
            let c = c.ok_or_else(|| Error::OutOfRange(format!("b_{} = {}", 2 * i + 1, m.b(2 * i + 1))))?;
            if c > 0 {
                sphere_bundles.push((i, c));
            }
        }
        Ok(BaseFamily { dim: n, sphere_bundles, tilde: n % 4 == 1 })
    }

    pub fn base(&self, l: usize, variant: FamilyVariant) -> Result<Option<ConnectedSumExpr>> {
        let n = self.dim;
        let mut summands = vec![Summand::cp((n - 1) / 2); l];
        let mut swap = variant == FamilyVariant::Swapped;
        if swap && self.sphere_bundles.is_empty() {
            return Ok(None);
        }
        for &(i, count) in &self.sphere_bundles {
            for _ in 0..count {
                summands.push(Summand::cp_sphere_bundle(i, n - 2 * i - 1, self.tilde != swap));
                swap = false;
            }
        }
        if variant == FamilyVariant::ExtraBlock {
            let i = (n - 3) / 2;
            summands.push(Summand::cp_sphere_bundle(i, 2, false));
            summands.push(Summand::cp_sphere_bundle(i, 2, true));
        }
        if summands.is_empty() {
            return Ok(None);
        }
        ConnectedSumExpr::new(n - 1, summands).map(Some)
    }

    pub fn euler(base: &ConnectedSumExpr) -> IntVec {
        IntVec(base.summands().iter().flat_map(|s| Restriction::of(s).coords(s.h2_rank())).collect())
    }

    pub fn describe(&self) -> String {
        let n = self.dim;
        let mut s = format!("#_l CP^{}", (n - 1) / 2);
        for &(i, c) in &self.sphere_bundles {
            let name = if self.tilde { "~E" } else { "E" };
            s.push_str(&format!(" # #_{c} {name}_{i}^{}", n - 2 * i - 1));
        }
        s
    }
}

/// Largest l tried for a given m, beyond m itself.
pub const L_SLACK: usize = 8;
/// A stabilization bound must be followed by this many further verified m.
pub const HORIZON: usize = 6;
const MAX_M: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationCheck {
    pub m: usize,
    /// None when m is reached through the 4-manifold construction (n = 5).
    pub l: Option<usize>,
    pub variant: Option<FamilyVariant>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationResult {
    pub m0: usize,
    pub twisted: bool,
    pub family: Option<BaseFamily>,
    /// The construction found for each m in m0 ..= m0 + HORIZON.
    pub checks: Vec<StabilizationCheck>,
}

impl StabilizationResult {
    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"m": c.m, "l": c.l, "variant": c.variant.map(FamilyVariant::name)}))
            .collect();
        json!({
            "m0": self.m0,
            "twisted": self.twisted,
            "base_family": self.family.as_ref().map(BaseFamily::describe),
            "checks": checks,
        })
    }
}

/// M #_m (S^2 × S^{n−2}), or with the twisted bundle.
pub fn stabilized(m: &BettiProfile, count: usize, twisted: bool) -> BettiProfile {
    let n = m.dim();
    let mut b = m.betti().to_vec();
    b[2] += count;
    b[n - 2] = b[2].clone();
    BettiProfile::from_full(b, m.spin() && !(twisted && count > 0))
}

fn find_construction(
    family: &BaseFamily,
    target: &BettiProfile,
    m: usize,
) -> Result<Option<StabilizationCheck>> {
    for l in 0..=m + L_SLACK {
        for variant in FamilyVariant::ALL {
            let Some(base) = family.base(l, variant)? else { continue };
            let euler = BaseFamily::euler(&base);
            match circle_bundle(&base, &euler) {
                Ok(p) if &p == target => {
                    return Ok(Some(StabilizationCheck { m, l: Some(l), variant: Some(variant) }))
                }
                Ok(_) | Err(Error::Unsupported(_)) | Err(Error::SideCondition { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

/// Least m_0 from which every m up to m_0 + HORIZON is realized by the base
/// family (searching l ≤ m + L_SLACK).
pub fn stabilization_m0(m: &BettiProfile, twisted: bool) -> Result<StabilizationResult> {
    m.check_form_star()?;
    let n = m.dim();
    if n % 2 == 0 {
        return Err(Error::Dimension(format!("stabilization needs odd dimension, got {n}")));
    }
    if n == 5 {
        let mut checks = Vec::new();
        for k in 0..=HORIZON {
            five_dim_witness(&stabilized(m, k, twisted))?;
            checks.push(StabilizationCheck { m: k, l: None, variant: None });
        }
        return Ok(StabilizationResult { m0: 0, twisted, family: None, checks });
    }
    let family = BaseFamily::for_manifold(m)?;
    let mut found: BTreeMap<usize, StabilizationCheck> = BTreeMap::new();
    let mut run_start = 0;
    for k in 0..=MAX_M + HORIZON {
        match find_construction(&family, &stabilized(m, k, twisted), k)? {
            Some(c) => {
                found.insert(k, c);
                if k - run_start == HORIZON {
                    let checks = (run_start..=k).map(|j| found[&j].clone()).collect();
                    return Ok(StabilizationResult { m0: run_start, twisted, family: Some(family), checks });
                }
            }
            None => run_start = k + 1,
        }
    }
    Err(Error::Unsupported(format!("no stabilization bound up to m = {MAX_M} for {m}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(n: usize, lower: &[i64], spin: bool) -> BettiProfile {
        BettiProfile::from_lower_i64(n, lower, spin).unwrap()
    }

    fn label(w: &Table1Witness) -> String {
        match &w.base {
            WitnessBase::Expr(e) => e.to_string(),
            WitnessBase::FourManifold(f) => format!("#_{}CP^2", f.b2),
        }
    }

    #[test]
    fn lin_display() {
        assert_eq!(half(-1, &[(1, Var::Q)]).to_string(), "(q-1)/2");
        assert_eq!(lin(1, &[(1, Var::P), (-1, Var::A)]).to_string(), "p-a+1");
        assert_eq!(c(0).to_string(), "0");
        assert_eq!(lin(0, &[(2, Var::S)]).to_string(), "2s");
    }

    #[test]
    fn rows_have_base_dimension() {
        for row in TABLE1 {
            for (s, _) in row.template {
                assert_eq!(s.dim(), row.dim - 1, "row {}", row.id);
            }
        }
    }

    #[test]
    fn seven_dim_examples() {
        let w = table1_base(&prof(7, &[0, 2], true)).unwrap().unwrap();
        assert_eq!(w.source, "7a");
        assert_eq!(label(&w), "CP^3 # S^3xS^3");
        assert_eq!(w.euler, IntVec::from(vec![1]));
        let w = table1_base(&prof(7, &[1, 0], false)).unwrap().unwrap();
        assert_eq!(w.source, "7f");
        assert_eq!(w.euler, IntVec::from(vec![0, 1]));
    }

    #[test]
    fn eight_dim_example() {
        let w = table1_base(&prof(8, &[0, 1, 0], true)).unwrap().unwrap();
        assert_eq!(w.source, "8a");
        assert_eq!(label(&w), "S^2xS^5");
    }

    #[test]
    fn nine_dim_tie_break() {
        let w = table1_base(&prof(9, &[0, 1, 1], true)).unwrap().unwrap();
        assert_eq!(w.source, "9a");
        let x = w.params.unwrap();
        assert_eq!((x.a, x.b), (0, 1));
        assert_eq!(label(&w), "CP^4 # S^3xS^5");
    }

    #[test]
    fn nine_dim_negative() {
        assert!(table1_base(&prof(9, &[0, 3, 0], true)).unwrap().is_none());
    }

    #[test]
    fn five_and_six() {
        let w = table1_base(&prof(5, &[2], false)).unwrap().unwrap();
        assert_eq!(w.base, WitnessBase::FourManifold(FourManifoldSpec::cp2_sum(3)));
        let w = table1_base(&prof(6, &[0, 2], true)).unwrap().unwrap();
        assert_eq!(w.source, "quotient");
        assert!(table1_base(&prof(6, &[1, 0], true)).unwrap().is_none());
        assert!(table1_base(&BettiProfile::sphere(11)).is_err());
    }

    #[test]
    fn stabilization_examples() {
        let r = stabilization_m0(&BettiProfile::sphere(7), false).unwrap();
        assert_eq!(r.m0, 0);
        assert_eq!(r.checks[0].l, Some(1));
        let r = stabilization_m0(&prof(7, &[0, 2], true), false).unwrap();
        assert_eq!(r.m0, 1);
        assert!(stabilization_m0(&BettiProfile::sphere(6), false).is_err());
    }

    #[test]
    fn table_exports() {
        let v = table1_json();
        assert_eq!(v.as_array().unwrap().len(), TABLE1.len());
        assert_eq!(v[0]["base"][0]["count"], "p+1");
    }
}
