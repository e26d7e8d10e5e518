use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::{format_rational, serialize_opt_rational, serialize_rational, Exponent, Rational};

/// Largest dimension the engine enumerates (`2^16` lattice points).
pub const MAX_DIM: usize = 16;

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d, "1..=16"));
    }
    Ok(())
}

/// A 0/1 multi-index selecting the differentiated variables.
///
/// Entry `j` (0-based) is stored at bit `d - 1 - j`, so that the integer order
/// of `bits` is the lexicographic order of the entry sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaVector {
    d: u8,
    bits: u32,
}

impl EtaVector {
    pub fn new(entries: &[u8]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut bits = 0u32;
        for &e in entries {
            if e > 1 {
                return Err(Error::Assignment(format!("eta entry {e} is not 0 or 1")));
            }
            bits = (bits << 1) | e as u32;
        }
        Ok(EtaVector {
            d: entries.len() as u8,
            bits,
        })
    }

    pub fn from_index(d: usize, index: usize) -> Result<Self> {
        check_dim(d)?;
        if index >= 1 << d {
            return Err(Error::Assignment(format!("index {index} out of range for d={d}")));
        }
        Ok(EtaVector {
            d: d as u8,
            bits: index as u32,
        })
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::from_index(d, 0)
    }

    pub fn ones(d: usize) -> Result<Self> {
        check_dim(d)?;
        Self::from_index(d, (1 << d) - 1)
    }

    /// The unit vector `e_j` (0-based axis).
    pub fn basis(d: usize, axis: usize) -> Result<Self> {
        check_dim(d)?;
        if axis >= d {
            return Err(Error::Assignment(format!("axis {axis} out of range for d={d}")));
        }
        Self::from_index(d, 1 << (d - 1 - axis))
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn entry(&self, axis: usize) -> u8 {
        ((self.bits >> (self.d as usize - 1 - axis)) & 1) as u8
    }

    pub fn entries(&self) -> Vec<u8> {
        (0..self.dim()).map(|j| self.entry(j)).collect()
    }

    /// Axes `j` with `eta_j = 1`.
    pub fn axes(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.entry(j) == 1).collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, axis: usize) -> bool {
        axis < self.dim() && self.entry(axis) == 1
    }

    /// The same vector with entry `axis` cleared.
    pub fn without(&self, axis: usize) -> Self {
        EtaVector {
            d: self.d,
            bits: self.bits & !(1 << (self.d as usize - 1 - axis)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_ones(&self) -> bool {
        self.weight() == self.dim()
    }
}

impl fmt::Display for EtaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dim() {
            write!(f, "{}", self.entry(j))?;
        }
        Ok(())
    }
}

impl FromStr for EtaVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries: Vec<u8> = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Assignment(format!("bad eta string {s:?}"))),
            })
            .collect::<Result<_>>()?;
        EtaVector::new(&entries)
    }
}

impl Serialize for EtaVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All `2^d` eta vectors in lexicographic order, from `0` to `1`.
pub fn enumerate_etas(d: usize) -> Result<Vec<EtaVector>> {
    check_dim(d)?;
    (0..1usize << d).map(|i| EtaVector::from_index(d, i)).collect()
}

/// The table `eta -> p_eta` over the full lattice, plus the set of eta with
/// `D^eta f` declared essentially bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentAssignment {
    d: usize,
    table: Vec<Exponent>,
    bounded: Vec<bool>,
}

impl ExponentAssignment {
    /// `table` must list all `2^d` exponents in lexicographic eta order.
    pub fn new(d: usize, table: Vec<Exponent>, bounded: &[EtaVector]) -> Result<Self> {
        check_dim(d)?;
        if table.len() != 1 << d {
            return Err(Error::Assignment(format!(
                "expected {} exponents for d={d}, got {}",
                1usize << d,
                table.len()
            )));
        }
        let mut flags = vec![false; table.len()];
        for eta in bounded {
            if eta.dim() != d {
                return Err(Error::Assignment(format!(
                    "bounded flag {eta} has dimension {} != {d}",
                    eta.dim()
                )));
            }
            flags[eta.index()] = true;
        }
        for (i, p) in table.iter().enumerate().skip(1) {
            let eta = EtaVector::from_index(d, i)?;
            match p {
                Exponent::Finite(v) if v.is_one() => {
                    return Err(Error::Assignment(format!("p_{eta} must exceed 1 for a derivative")))
                }
                Exponent::Infinite if !flags[i] => {
                    return Err(Error::Assignment(format!(
                        "p_{eta} = inf requires D^{eta} f to be declared bounded"
                    )))
                }
                _ => {}
            }
        }
        Ok(ExponentAssignment {
            d,
            table,
            bounded: flags,
        })
    }

    /// `p0` for the function itself and `rest` for every derivative.
    pub fn uniform(d: usize, p0: Exponent, rest: Exponent) -> Result<Self> {
        check_dim(d)?;
        let mut table = vec![rest; 1 << d];
        table[0] = p0;
        Self::new(d, table, &[])
    }

    pub fn from_map(d: usize, map: &BTreeMap<EtaVector, Exponent>, bounded: &[EtaVector]) -> Result<Self> {
        let table = enumerate_etas(d)?
            .into_iter()
            .map(|eta| {
                map.get(&eta)
                    .cloned()
                    .ok_or_else(|| Error::Assignment(format!("missing exponent for eta={eta}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, table, bounded)
    }

    /// Returns a copy with one exponent replaced (revalidated).
    pub fn with(&self, eta: EtaVector, p: Exponent) -> Result<Self> {
        let mut table = self.table.clone();
        table[eta.index()] = p;
        Self::new(self.d, table, &self.bounded_etas())
    }

    /// Returns a copy with additional bounded flags.
    pub fn with_bounded(&self, etas: &[EtaVector]) -> Result<Self> {
        let mut flags = self.bounded_etas();
        flags.extend_from_slice(etas);
        Self::new(self.d, self.table.clone(), &flags)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, eta: EtaVector) -> &Exponent {
        &self.table[eta.index()]
    }

    pub fn p0(&self) -> &Exponent {
        &self.table[0]
    }

    pub fn p_ones(&self) -> &Exponent {
        &self.table[self.table.len() - 1]
    }

    pub fn is_bounded(&self, eta: EtaVector) -> bool {
        self.bounded[eta.index()]
    }

    pub fn bounded_etas(&self) -> Vec<EtaVector> {
        self.bounded
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| EtaVector::from_index(self.d, i).expect("index in range"))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EtaVector, &Exponent)> + '_ {
        self.table
            .iter()
            .enumerate()
            .map(move |(i, p)| (EtaVector::from_index(self.d, i).expect("index in range"), p))
    }

    /// `sum 1/p_eta` over the whole lattice.
    pub fn reciprocal_sum(&self) -> Rational {
        self.table.iter().map(Exponent::reciprocal).sum()
    }

    /// `sum 1/p_eta` over `eta != 0`.
    pub fn reciprocal_sum_nonzero(&self) -> Rational {
        self.table.iter().skip(1).map(Exponent::reciprocal).sum()
    }

    /// Same assignment with every finite exponent's numerator and denominator
    /// multiplied by `factor` (value-preserving).
    pub fn rescaled(&self, factor: i64) -> Self {
        ExponentAssignment {
            d: self.d,
            table: self.table.iter().map(|p| p.rescaled(factor)).collect(),
            bounded: self.bounded.clone(),
        }
    }
}

/// Decay exponents `gamma_chi > 0` for `|D^chi f(x)| <= C (1+|x|)^{-gamma_chi}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayAssignment {
    d: usize,
    gamma: Vec<Rational>,
}

impl DecayAssignment {
    pub fn new(d: usize, gamma: Vec<Rational>) -> Result<Self> {
        check_dim(d)?;
        if gamma.len() != 1 << d {
            return Err(Error::Assignment(format!(
                "expected {} decay exponents for d={d}, got {}",
                1usize << d,
                gamma.len()
            )));
        }
        if let Some(g) = gamma.iter().find(|g| !g.is_positive()) {
            return Err(Error::Assignment(format!(
                "decay exponent {} is not positive",
                format_rational(g)
            )));
        }
        Ok(DecayAssignment { d, gamma })
    }

    pub fn uniform(d: usize, gamma: Rational) -> Result<Self> {
        check_dim(d)?;
        Self::new(d, vec![gamma; 1 << d])
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }
}

/// Exponents `p_j` indexed by derivative weight `j = |eta|` for a radial function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialAssignment {
    d: usize,
    p: Vec<Exponent>,
    pub smoothness_declared: bool,
}

impl RadialAssignment {
    pub fn new(d: usize, p: Vec<Exponent>, smoothness_declared: bool) -> Result<Self> {
        check_dim(d)?;
        if p.len() != d + 1 {
            return Err(Error::Assignment(format!(
                "expected {} radial exponents p_0..p_{d}, got {}",
                d + 1,
                p.len()
            )));
        }
        if !p[0].is_finite() {
            return Err(Error::Assignment("p_0 must be finite".into()));
        }
        if let Some(j) = (1..=d).find(|&j| !p[j].is_open_interior()) {
            return Err(Error::Assignment(format!("p_{j} must lie in (1, inf)")));
        }
        Ok(RadialAssignment {
            d,
            p,
            smoothness_declared,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> &[Exponent] {
        &self.p
    }
}

/// Orders `beta_j >= 1` of pure derivatives `d^{beta_j} f / dx_j^{beta_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureDerivativeOrders {
    d: usize,
    beta: Vec<u32>,
}

impl PureDerivativeOrders {
    pub fn new(beta: Vec<u32>) -> Result<Self> {
        check_dim(beta.len())?;
        if beta.contains(&0) {
            return Err(Error::Assignment("derivative orders must be positive".into()));
        }
        Ok(PureDerivativeOrders { d: beta.len(), beta })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn beta(&self) -> &[u32] {
        &self.beta
    }
}

/// Inputs for the pure-derivative-of-order-`r` criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem213Params {
    pub d: usize,
    pub r: u32,
    pub p0: Exponent,
    pub p: Vec<Exponent>,
}

impl Theorem213Params {
    pub fn new(d: usize, r: u32, p0: Exponent, p: Vec<Exponent>) -> Result<Self> {
        check_dim(d)?;
        if r == 0 {
            return Err(Error::Assignment("r must be a positive integer".into()));
        }
        if p.len() != d {
            return Err(Error::Assignment(format!(
                "expected {d} exponents p_1..p_{d}, got {}",
                p.len()
            )));
        }
        Ok(Theorem213Params { d, r, p0, p })
    }
}

/// Inputs for the order-`r` sharpness statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem213bParams {
    pub d: usize,
    pub r: u32,
    pub p: Exponent,
    pub q: Exponent,
}

impl Theorem213bParams {
    pub fn new(d: usize, r: u32, p: Exponent, q: Exponent) -> Result<Self> {
        check_dim(d)?;
        if r == 0 {
            return Err(Error::Assignment("r must be a positive integer".into()));
        }
        Ok(Theorem213bParams { d, r, p, q })
    }
}

/// Stable rule identifiers; the declaration order is the report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Thm1,
    Thm2,
    Thm2Prime,
    CorBounded,
    PropEven,
    CorDecay,
    CorRadial,
    Thm213a,
    Thm213b,
    Thm41,
    LegacyA1d,
    LegacyA2d,
}

impl RuleId {
    pub const ALL: [RuleId; 12] = [
        RuleId::Thm1,
        RuleId::Thm2,
        RuleId::Thm2Prime,
        RuleId::CorBounded,
        RuleId::PropEven,
        RuleId::CorDecay,
        RuleId::CorRadial,
        RuleId::Thm213a,
        RuleId::Thm213b,
        RuleId::Thm41,
        RuleId::LegacyA1d,
        RuleId::LegacyA2d,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::Thm1 => "thm1",
            RuleId::Thm2 => "thm2",
            RuleId::Thm2Prime => "thm2prime",
            RuleId::CorBounded => "cor-bounded",
            RuleId::PropEven => "prop-even",
            RuleId::CorDecay => "cor-decay",
            RuleId::CorRadial => "cor-radial",
            RuleId::Thm213a => "thm213a",
            RuleId::Thm213b => "thm213b",
            RuleId::Thm41 => "thm4.1",
            RuleId::LegacyA1d => "legacy-a1d",
            RuleId::LegacyA2d => "legacy-a2d",
        }
    }

    /// Whether the rule's decisive condition is known to be sharp.
    pub fn sharpness(&self) -> Sharpness {
        match self {
            RuleId::Thm41 | RuleId::Thm213a | RuleId::Thm213b => Sharpness::Sharp,
            _ => Sharpness::Unknown,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s.trim())
            .ok_or_else(|| Error::Parameter(format!("unknown rule id {s:?}")))
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    NotApplicable,
    CounterexampleExists,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::NotApplicable => "not_applicable",
            Status::CounterexampleExists => "counterexample_exists",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sharpness {
    Sharp,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(&self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Relation::Gt | Relation::Lt)
    }
}

/// One evaluated inequality of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub label: String,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

impl Condition {
    pub fn new(label: impl Into<String>, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let (lhs, rhs) = (lhs.reduced(), rhs.reduced());
        let holds = relation.holds(&lhs, &rhs);
        Condition {
            label: label.into(),
            lhs,
            relation,
            rhs,
            holds,
        }
    }

    /// Signed slack, positive in the direction the relation asks for.
    pub fn slack(&self) -> Rational {
        match self.relation {
            Relation::Gt | Relation::Ge => &self.lhs - &self.rhs,
            Relation::Lt | Relation::Le => &self.rhs - &self.lhs,
            Relation::Eq => -(&self.lhs - &self.rhs).abs(),
        }
    }
}

/// Parameter data backing a `counterexample_exists` verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Oscillating model `m_{alpha,beta}` with `m in L_p`, `m' in L_q`, `m not in A`.
    Model {
        #[serde(serialize_with = "serialize_rational")]
        alpha: Rational,
        #[serde(serialize_with = "serialize_rational")]
        beta: Rational,
        p: Exponent,
        q: Exponent,
    },
    /// A parameter point strictly inside a region where a counterexample is known to exist.
    Region {
        inequality: String,
        #[serde(serialize_with = "serialize_rational")]
        slack: Rational,
    },
}

impl Witness {
    /// Re-checks the witness validity inequalities exactly.
    pub fn is_valid(&self) -> bool {
        match self {
            Witness::Model { alpha, beta, p, q } => {
                let (Some(p), Some(q)) = (p.value(), q.value()) else {
                    return false;
                };
                let one = Rational::one();
                let two = &one + &one;
                alpha.is_positive()
                    && beta.is_positive()
                    && !alpha.is_one()
                    && p * beta > one
                    && q * (beta - alpha + &one) > one
                    && beta * &two < *alpha
            }
            Witness::Region { slack, .. } => slack.is_positive(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub rule_id: RuleId,
    pub status: Status,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub margin: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub conditions: Vec<Condition>,
    pub notes: Vec<String>,
    pub sharpness: Sharpness,
}

impl CriterionVerdict {
    pub(crate) fn new(rule_id: RuleId, status: Status) -> Self {
        CriterionVerdict {
            rule_id,
            status,
            margin: None,
            branch: None,
            witness: None,
            conditions: Vec::new(),
            notes: Vec::new(),
            sharpness: rule_id.sharpness(),
        }
    }

    pub(crate) fn not_applicable(rule_id: RuleId, reason: impl Into<String>) -> Self {
        let mut v = Self::new(rule_id, Status::NotApplicable);
        v.notes.push(reason.into());
        v
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_applicable(&self) -> bool {
        self.status != Status::NotApplicable
    }
}
