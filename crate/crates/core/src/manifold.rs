//! Connected sums over the summand catalog, their Betti profiles, and the
//! canonical form of connected sums of sphere products.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::json::{big_to_value, value_to_big, value_to_usize};
use crate::lattice::IntVec;

/// Largest number of summands an expression may be expanded into.
pub const MAX_SUMMANDS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Summand {
    /// S^k × S^l with 2 ≤ k ≤ l.
    SphereProduct { k: usize, l: usize },
    /// The nontrivial linear S^{n-2}-bundle over S^2.
    TwistedS2Bundle { n: usize },
    ComplexProjective { m: usize },
    /// `E_m^r` (spin) or `~E_m^r` (non-spin): an S^r-bundle over CP^m.
    CPSphereBundle { m: usize, r: usize, twisted: bool },
    /// Projectivization of a rank r+1 complex bundle over S^2 with odd c_1.
    ProjectiveBundleOverS2 { r: usize },
    StandardSphere { n: usize },
}

impl Summand {
    pub fn sphere_product(k: usize, l: usize) -> Summand {
        Summand::SphereProduct { k: k.min(l), l: k.max(l) }
    }

    pub fn twisted(n: usize) -> Summand {
        Summand::TwistedS2Bundle { n }
    }

    pub fn cp(m: usize) -> Summand {
        Summand::ComplexProjective { m }
    }

    /// `E_m^r` or `~E_m^r`; over CP^1 these are the two S^r-bundles over S^2.
    pub fn cp_sphere_bundle(m: usize, r: usize, twisted: bool) -> Summand {
        if m == 1 {
            if twisted {
                Summand::TwistedS2Bundle { n: 2 + r }
            } else {
                Summand::sphere_product(2, r)
            }
        } else {
            Summand::CPSphereBundle { m, r, twisted }
        }
    }

    pub fn proj_bundle(r: usize) -> Summand {
        Summand::ProjectiveBundleOverS2 { r }
    }

    pub fn sphere(n: usize) -> Summand {
        Summand::StandardSphere { n }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Summand::SphereProduct { k, l } => k + l,
            Summand::TwistedS2Bundle { n } | Summand::StandardSphere { n } => n,
            Summand::ComplexProjective { m } => 2 * m,
            Summand::CPSphereBundle { m, r, .. } => 2 * m + r,
            Summand::ProjectiveBundleOverS2 { r } => 2 * r + 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidExpression(msg));
        match *self {
            Summand::SphereProduct { k, l } if k < 2 || k > l => {
                bad(format!("sphere product S^{k}xS^{l} needs 2 <= k <= l"))
            }
            Summand::TwistedS2Bundle { n } if n < 5 => {
                bad(format!("twisted S^2-bundle needs dimension >= 5, got {n}"))
            }
            Summand::ComplexProjective { m } if m < 2 => bad(format!("CP^{m} needs m >= 2")),
            Summand::CPSphereBundle { m, r, .. } if m < 2 || r < 2 => {
                bad(format!("E_{m}^{r} needs m >= 2 and r >= 2 (m = 1 is an S^2-bundle)"))
            }
            Summand::ProjectiveBundleOverS2 { r } if r < 1 => bad("P(E) needs r >= 1".into()),
            Summand::StandardSphere { n } if n < 4 => bad(format!("S^{n} has dimension < 4")),
            _ => Ok(()),
        }
    }

    pub fn is_spin(&self) -> bool {
        match *self {
            Summand::SphereProduct { .. } | Summand::StandardSphere { .. } => true,
            Summand::TwistedS2Bundle { .. } | Summand::ProjectiveBundleOverS2 { .. } => false,
            Summand::ComplexProjective { m } => m % 2 == 1,
            Summand::CPSphereBundle { twisted, .. } => !twisted,
        }
    }

    /// Sphere products, the twisted S^2-bundle, and spheres.
    pub fn is_form_star(&self) -> bool {
        matches!(
            self,
            Summand::SphereProduct { .. }
                | Summand::TwistedS2Bundle { .. }
                | Summand::StandardSphere { .. }
        )
    }

    /// Summands whose H^2 is a single S^2 class.
    pub fn is_s2_bundle(&self) -> bool {
        matches!(self, Summand::SphereProduct { k: 2, .. } | Summand::TwistedS2Bundle { .. })
    }

    /// b_0..b_n of the summand alone.
    pub fn betti(&self) -> Vec<usize> {
        let n = self.dim();
        let mut b = vec![0usize; n + 1];
        match *self {
            Summand::SphereProduct { k, l } => {
                b[0] = 1;
                b[n] = 1;
                b[k] += 1;
                b[l] += 1;
            }
            Summand::TwistedS2Bundle { n } => {
                b[0] = 1;
                b[n] = 1;
                b[2] += 1;
                b[n - 2] += 1;
            }
            Summand::StandardSphere { n } => {
                b[0] = 1;
                b[n] = 1;
            }
            Summand::ComplexProjective { m } => {
                for j in 0..=m {
                    b[2 * j] += 1;
                }
            }
            Summand::CPSphereBundle { m, r, .. } => {
                for j in 0..=m {
                    b[2 * j] += 1;
                    b[2 * j + r] += 1;
                }
            }
            Summand::ProjectiveBundleOverS2 { r } => {
                for j in 0..=r {
                    b[2 * j] += 1;
                    b[2 * j + 2] += 1;
                }
            }
        }
        b
    }

    /// w_2-coordinates of the summand's degree-2 generators, in basis order.
    pub fn w2_coords(&self) -> Vec<bool> {
        match *self {
            Summand::SphereProduct { k: 2, .. } => vec![false],
            Summand::SphereProduct { .. } | Summand::StandardSphere { .. } => vec![],
            Summand::TwistedS2Bundle { .. } => vec![true],
            Summand::ComplexProjective { m } => vec![m % 2 == 0],
            // base class first; for r = 2 the fiber sphere adds a second class
            Summand::CPSphereBundle { r: 2, twisted, .. } => vec![twisted, false],
            Summand::CPSphereBundle { twisted, .. } => vec![twisted],
            // (pullback of the S^2 class, fiber hyperplane class)
            Summand::ProjectiveBundleOverS2 { r } => vec![true, r % 2 == 0],
        }
    }

    pub fn h2_rank(&self) -> usize {
        self.w2_coords().len()
    }

    fn tag(&self) -> u8 {
        match self {
            Summand::TwistedS2Bundle { .. } => 0,
            Summand::SphereProduct { .. } => 1,
            Summand::ComplexProjective { .. } => 2,
            Summand::CPSphereBundle { .. } => 3,
            Summand::ProjectiveBundleOverS2 { .. } => 4,
            Summand::StandardSphere { .. } => 5,
        }
    }

    fn first_factor_dim(&self) -> usize {
        match *self {
            Summand::SphereProduct { k, .. } => k,
            Summand::StandardSphere { n } => n,
            _ => 2,
        }
    }

    /// Canonical ordering: first-factor dimension, then variant.
    pub fn sort_key(&self) -> (usize, u8, usize, usize, bool) {
        let (a, b, t) = match *self {
            Summand::SphereProduct { k, l } => (k, l, false),
            Summand::TwistedS2Bundle { n } | Summand::StandardSphere { n } => (n, 0, false),
            Summand::ComplexProjective { m } => (m, 0, false),
            Summand::CPSphereBundle { m, r, twisted } => (m, r, twisted),
            Summand::ProjectiveBundleOverS2 { r } => (r, 0, false),
        };
        (self.first_factor_dim(), self.tag(), a, b, t)
    }

    pub fn to_json(&self) -> Value {
        match *self {
            Summand::SphereProduct { k, l } => json!({"type": "sphere_product", "k": k, "l": l}),
            Summand::TwistedS2Bundle { .. } => json!({"type": "twisted_s2"}),
            Summand::ComplexProjective { m } => json!({"type": "cp", "m": m}),
            Summand::CPSphereBundle { m, r, twisted } => {
                json!({"type": "cp_sphere_bundle", "m": m, "r": r, "twisted": twisted})
            }
            Summand::ProjectiveBundleOverS2 { r } => json!({"type": "proj_bundle_s2", "r": r}),
            Summand::StandardSphere { .. } => json!({"type": "sphere"}),
        }
    }

    /// Parses one summand object; `dim` fills in the dimension of the
    /// types that do not carry it.
    pub fn from_json(v: &Value, dim: usize) -> Result<Summand> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidExpression(format!("summand must be an object, got {v}")))?;
        let ty = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidExpression("summand lacks a \"type\"".into()))?;
        let field = |name: &str| -> Result<usize> {
            let x = obj.get(name).ok_or_else(|| {
                Error::InvalidExpression(format!("summand {ty:?} lacks field {name:?}"))
            })?;
            value_to_usize(x, name)
        };
        let s = match ty {
            "sphere_product" => {
                let k = field("k")?;
                let l = match obj.get("l") {
                    Some(x) => value_to_usize(x, "l")?,
                    None => dim.checked_sub(k).ok_or_else(|| {
                        Error::InvalidExpression(format!("k = {k} exceeds dimension {dim}"))
                    })?,
                };
                Summand::sphere_product(k, l)
            }
            "twisted_s2" => Summand::twisted(dim),
            "cp" => Summand::cp(field("m")?),
            "cp_sphere_bundle" => {
                let twisted = match obj.get("twisted") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(other) => {
                        return Err(Error::InvalidExpression(format!(
                            "\"twisted\" must be a boolean, got {other}"
                        )))
                    }
                };
                Summand::cp_sphere_bundle(field("m")?, field("r")?, twisted)
            }
            "proj_bundle_s2" => Summand::proj_bundle(field("r")?),
            "sphere" => Summand::sphere(dim),
            other => {
                return Err(Error::InvalidExpression(format!("unknown summand type {other:?}")))
            }
        };
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Summand::SphereProduct { k, l } => write!(f, "S^{k}xS^{l}"),
            Summand::TwistedS2Bundle { n } => write!(f, "S^2~xS^{}", n - 2),
            Summand::ComplexProjective { m } => write!(f, "CP^{m}"),
            Summand::CPSphereBundle { m, r, twisted: false } => write!(f, "E_{m}^{r}"),
            Summand::CPSphereBundle { m, r, twisted: true } => write!(f, "~E_{m}^{r}"),
            Summand::ProjectiveBundleOverS2 { r } => write!(f, "P(E)[CP^{r}]"),
            Summand::StandardSphere { n } => write!(f, "S^{n}"),
        }
    }
}

/// An ordered connected sum of summands of one dimension; empty means S^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConnectedSumExpr {
    dim: usize,
    summands: Vec<Summand>,
}

impl ConnectedSumExpr {
    pub fn new(dim: usize, summands: Vec<Summand>) -> Result<Self> {
        if dim < 5 {
            return Err(Error::InvalidExpression(format!(
                "connected sums need dimension >= 5, got {dim}"
            )));
        }
        if summands.len() > MAX_SUMMANDS {
            return Err(Error::OutOfRange(format!("{} summands", summands.len())));
        }
        for s in &summands {
            s.validate()?;
            if s.dim() != dim {
                return Err(Error::InvalidExpression(format!(
                    "summand {s} has dimension {}, expected {dim}",
                    s.dim()
                )));
            }
        }
        Ok(ConnectedSumExpr { dim, summands })
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_form_star(&self) -> bool {
        self.summands.iter().all(Summand::is_form_star)
    }

    pub fn is_spin(&self) -> bool {
        self.summands.iter().all(Summand::is_spin)
    }

    /// Connected sum with another expression of the same dimension.
    pub fn concat(mut self, other: ConnectedSumExpr) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::Dimension(format!(
                "cannot form a connected sum of dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        self.summands.extend(other.summands);
        Ok(self)
    }

    pub fn betti_profile(&self) -> BettiProfile {
        let n = self.dim;
        let mut b = vec![BigInt::zero(); n + 1];
        b[0] = BigInt::one();
        b[n] = BigInt::one();
        for s in &self.summands {
            for (i, x) in s.betti().into_iter().enumerate().take(n).skip(1) {
                b[i] += x;
            }
        }
        BettiProfile { dim: n, betti: b, spin: self.is_spin() }
    }

    pub fn h2_basis(&self) -> H2Basis {
        let mut generators = Vec::new();
        for (idx, s) in self.summands.iter().enumerate() {
            for w2 in s.w2_coords() {
                generators.push(H2Generator { summand: idx, w2 });
            }
        }
        H2Basis { generators }
    }

    /// Summands in canonical order, without any rewriting.
    pub fn sorted(&self) -> ConnectedSumExpr {
        let mut summands = self.summands.clone();
        summands.sort_by_key(Summand::sort_key);
        ConnectedSumExpr { dim: self.dim, summands }
    }

    fn require_form_star(&self) -> Result<()> {
        match self.summands.iter().find(|s| !s.is_form_star()) {
            Some(s) => Err(Error::ExtendedCatalog(s.to_string())),
            None => Ok(()),
        }
    }

    /// Drops sphere summands, keeps a single twisted S^2-bundle (any further
    /// copy becomes S^2 x S^{n-2}), and sorts.
    pub fn canonicalize(&self) -> Result<ConnectedSumExpr> {
        self.require_form_star()?;
        let mut seen_twisted = false;
        let mut summands = Vec::with_capacity(self.summands.len());
        for s in &self.summands {
            match s {
                Summand::StandardSphere { .. } => {}
                Summand::TwistedS2Bundle { n } if seen_twisted => {
                    summands.push(Summand::sphere_product(2, n - 2))
                }
                Summand::TwistedS2Bundle { .. } => {
                    seen_twisted = true;
                    summands.push(s.clone());
                }
                _ => summands.push(s.clone()),
            }
        }
        summands.sort_by_key(Summand::sort_key);
        Ok(ConnectedSumExpr { dim: self.dim, summands })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "summands": self.summands.iter().map(Summand::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidExpression("expression must be an object".into()))?;
        let dim = value_to_usize(
            obj.get("dim").ok_or_else(|| Error::InvalidExpression("missing \"dim\"".into()))?,
            "dim",
        )?;
        let list = obj
            .get("summands")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidExpression("\"summands\" must be an array".into()))?;
        let summands = list.iter().map(|s| Summand::from_json(s, dim)).collect::<Result<_>>()?;
        Self::new(dim, summands)
    }
}

impl fmt::Display for ConnectedSumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "S^{}", self.dim);
        }
        let mut first = true;
        let mut i = 0;
        while i < self.summands.len() {
            let s = &self.summands[i];
            let run = self.summands[i..].iter().take_while(|t| *t == s).count();
            if !first {
                write!(f, " # ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "#_{run}({s})")?;
            } else {
                write!(f, "{s}")?;
            }
            i += run;
        }
        Ok(())
    }
}

pub fn betti_profile(expr: &ConnectedSumExpr) -> BettiProfile {
    expr.betti_profile()
}

pub fn canonicalize(expr: &ConnectedSumExpr) -> Result<ConnectedSumExpr> {
    expr.canonicalize()
}

pub fn h2_basis(expr: &ConnectedSumExpr) -> H2Basis {
    expr.h2_basis()
}

/// Two form-(*) manifolds are diffeomorphic iff dimension, Betti numbers and
/// spin agree.
pub fn is_diffeomorphic(a: &ConnectedSumExpr, b: &ConnectedSumExpr) -> Result<bool> {
    a.require_form_star()?;
    b.require_form_star()?;
    Ok(a.betti_profile() == b.betti_profile())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct H2Generator {
    pub summand: usize,
    pub w2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Basis {
    pub generators: Vec<H2Generator>,
}

impl H2Basis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn w2(&self) -> IntVec {
        IntVec(self.generators.iter().map(|g| BigInt::from(g.w2 as u8)).collect())
    }

    pub fn w2_bits(&self) -> Vec<bool> {
        self.generators.iter().map(|g| g.w2).collect()
    }

    /// Positions of the generators that belong to summand `idx`.
    pub fn positions(&self, idx: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.generators[j].summand == idx).collect()
    }
}

/// Free Betti numbers b_0..b_n and a spin flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BettiProfile {
    dim: usize,
    betti: Vec<BigInt>,
    spin: bool,
}

impl BettiProfile {
    /// Builds a profile from b_2..b_{⌊n/2⌋}; the rest follows from duality.
    pub fn from_lower(dim: usize, lower: &[BigInt], spin: bool) -> Result<Self> {
        let half = dim / 2;
        let expected = half.saturating_sub(1);
        if lower.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: lower.len() });
        }
        let mut betti = vec![BigInt::zero(); dim + 1];
        betti[0] = BigInt::one();
        betti[dim] = BigInt::one();
        for (off, x) in lower.iter().enumerate() {
            let i = off + 2;
            betti[i] = x.clone();
            betti[dim - i] = x.clone();
        }
        Ok(BettiProfile { dim, betti, spin })
    }

    pub fn from_lower_i64(dim: usize, lower: &[i64], spin: bool) -> Result<Self> {
        let lower: Vec<BigInt> = lower.iter().copied().map(BigInt::from).collect();
        Self::from_lower(dim, &lower, spin)
    }

    /// Takes b_0..b_n verbatim; nothing is checked.
    pub fn from_full(betti: Vec<BigInt>, spin: bool) -> Self {
        let dim = betti.len().saturating_sub(1);
        BettiProfile { dim, betti, spin }
    }

    /// The standard sphere S^n.
    pub fn sphere(dim: usize) -> Self {
        let mut betti = vec![BigInt::zero(); dim + 1];
        betti[0] = BigInt::one();
        betti[dim] = BigInt::one();
        BettiProfile { dim, betti, spin: true }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spin(&self) -> bool {
        self.spin
    }

    pub fn with_spin(mut self, spin: bool) -> Self {
        self.spin = spin;
        self
    }

    /// b_i, zero outside 0..=n.
    pub fn b(&self, i: usize) -> BigInt {
        self.betti.get(i).cloned().unwrap_or_default()
    }

    pub fn betti(&self) -> &[BigInt] {
        &self.betti
    }

    /// b_2..b_{⌊n/2⌋}.
    pub fn lower(&self) -> Vec<BigInt> {
        (2..=self.dim / 2).map(|i| self.b(i)).collect()
    }

    /// Σ b_i over 2 ≤ i ≤ ⌊n/2⌋.
    pub fn lower_sum(&self) -> BigInt {
        self.lower().iter().sum()
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, b)| if i % 2 == 0 { b.clone() } else { -b })
            .sum()
    }

    pub fn satisfies_duality(&self) -> bool {
        (0..=self.dim).all(|i| self.betti[i] == self.betti[self.dim - i])
    }

    /// Checks every constraint on the Betti data of a form-(*) manifold.
    pub fn check_form_star(&self) -> Result<()> {
        let n = self.dim;
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if n < 5 {
            return bad(format!("dimension {n} < 5"));
        }
        if self.betti.len() != n + 1 {
            return bad(format!("{} Betti numbers for dimension {n}", self.betti.len()));
        }
        if !self.betti[0].is_one() || !self.betti[n].is_one() {
            return bad("b_0 and b_n must be 1".into());
        }
        if !self.betti[1].is_zero() || !self.betti[n - 1].is_zero() {
            return bad("b_1 and b_{n-1} must vanish".into());
        }
        if let Some((i, _)) = self.betti.iter().enumerate().find(|(_, b)| b.is_negative()) {
            return bad(format!("b_{i} is negative"));
        }
        if !self.satisfies_duality() {
            return bad("Betti numbers violate Poincare duality".into());
        }
        if n % 2 == 0 && self.betti[n / 2].is_odd() {
            return bad(format!("middle Betti number b_{} is odd", n / 2));
        }
        if !self.spin && self.betti[2].is_zero() {
            return bad("a non-spin profile needs b_2 >= 1".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut betti = Map::new();
        for i in 2..=self.dim.saturating_sub(2) {
            betti.insert(i.to_string(), big_to_value(&self.b(i)));
        }
        json!({"dim": self.dim, "betti": Value::Object(betti), "spin": self.spin})
    }

    /// Parses `{"dim", "betti": {"2": .., ..}, "spin"}`. Degrees may be given
    /// for the lower half only; the rest is filled in by duality, and
    /// anything still missing is zero. The result is not validated.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidProfile("profile must be an object".into()))?;
        let dim = obj
            .get("dim")
            .ok_or_else(|| Error::InvalidProfile("missing \"dim\"".into()))
            .and_then(|d| value_to_usize(d, "dim").map_err(|e| Error::InvalidProfile(e.to_string())))?;
        let spin = match obj.get("spin") {
            Some(Value::Bool(b)) => *b,
            Some(other) => return Err(Error::InvalidProfile(format!("\"spin\" must be a boolean, got {other}"))),
            None => return Err(Error::InvalidProfile("missing \"spin\"".into())),
        };
        let raw = match obj.get("betti") {
            Some(Value::Object(m)) => m.clone(),
            None => Map::new(),
            Some(other) => {
                return Err(Error::InvalidProfile(format!("\"betti\" must be an object, got {other}")))
            }
        };
        let mut given: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (k, x) in &raw {
            let i: usize = k
                .parse()
                .map_err(|_| Error::InvalidProfile(format!("Betti degree {k:?} is not an integer")))?;
            if i < 2 || i + 2 > dim {
                return Err(Error::InvalidProfile(format!(
                    "Betti degree {i} outside 2..={}",
                    dim.saturating_sub(2)
                )));
            }
            let b = value_to_big(x).map_err(|e| Error::InvalidProfile(e.to_string()))?;
            given.insert(i, b);
        }
        if dim < 4 {
            return Err(Error::InvalidProfile(format!("dimension {dim} < 4")));
        }
        let mut betti = vec![BigInt::zero(); dim + 1];
        betti[0] = BigInt::one();
        betti[dim] = BigInt::one();
        for i in 2..=dim - 2 {
            betti[i] = match (given.get(&i), given.get(&(dim - i))) {
                (Some(x), _) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => BigInt::zero(),
            };
        }
        Ok(BettiProfile { dim, betti, spin })
    }
}

impl fmt::Display for BettiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {} (", self.dim)?;
        for (j, i) in (2..=self.dim.saturating_sub(2)).enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "b{i}={}", self.b(i))?;
        }
        write!(f, ") {}", if self.spin { "spin" } else { "non-spin" })
    }
}

fn count(x: &BigInt, what: &str) -> Result<usize> {
    x.to_usize()
        .filter(|&c| c <= MAX_SUMMANDS)
        .ok_or_else(|| Error::OutOfRange(format!("{what} = {x} summands")))
}

/// The canonical form-(*) realization of a profile.
pub fn from_betti(p: &BettiProfile) -> Result<ConnectedSumExpr> {
    p.check_form_star()?;
    let n = p.dim;
    let mut summands = Vec::new();
    let b2 = count(&p.b(2), "b_2")?;
    if !p.spin {
        summands.push(Summand::twisted(n));
    }
    let plain = if p.spin { b2 } else { b2 - 1 };
    summands.extend(std::iter::repeat_n(Summand::sphere_product(2, n - 2), plain));
    for i in 3..=(n - 1) / 2 {
        let c = count(&p.b(i), &format!("b_{i}"))?;
        summands.extend(std::iter::repeat_n(Summand::sphere_product(i, n - i), c));
    }
    if n % 2 == 0 {
        let c = count(&(p.b(n / 2) / 2), &format!("b_{}", n / 2))?;
        summands.extend(std::iter::repeat_n(Summand::sphere_product(n / 2, n / 2), c));
    }
    if summands.len() > MAX_SUMMANDS {
        return Err(Error::OutOfRange(format!("{} summands", summands.len())));
    }
    Ok(ConnectedSumExpr { dim: n, summands })
}

/// A manifold given either as Betti data or as an explicit connected sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifoldInput {
    Profile(BettiProfile),
    Expr(ConnectedSumExpr),
}

impl ManifoldInput {
    pub fn from_json(v: &Value) -> Result<Self> {
        if v.get("summands").is_some() {
            ConnectedSumExpr::from_json(v).map(ManifoldInput::Expr)
        } else {
            BettiProfile::from_json(v).map(ManifoldInput::Profile)
        }
    }

    /// The Betti profile, which must describe a form-(*) manifold.
    pub fn form_star_profile(&self) -> Result<BettiProfile> {
        let p = match self {
            ManifoldInput::Profile(p) => p.clone(),
            ManifoldInput::Expr(e) => {
                e.require_form_star()?;
                e.betti_profile()
            }
        };
        p.check_form_star()?;
        Ok(p)
    }

    /// An explicit expression; profiles are realized canonically.
    pub fn expr(&self) -> Result<ConnectedSumExpr> {
        match self {
            ManifoldInput::Profile(p) => from_betti(p),
            ManifoldInput::Expr(e) => Ok(e.clone()),
        }
    }
}
