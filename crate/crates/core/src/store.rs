//! Newform q-expansion records: the line-oriented text format, Hecke
//! consistency checks, Sturm bounds and twisting.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::arith::{factor, lcm};
use crate::characters::{generator_set, CharacterError, DirichletCharacter};
use crate::cyclo::{CycError, CycNumber};
use crate::quadfields::ThetaSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: expected key `{expected}`, found `{found}`")]
    KeyOrder { line: usize, expected: &'static str, found: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("line {line}: bad coefficient: {source}")]
    Element { line: usize, source: CycError },
    #[error("a_1 must be 1, found {0}")]
    LeadingCoefficient(String),
    #[error("character must be odd")]
    EvenCharacter,
    #[error("line {line}: coefficient index {found} out of order (expected {expected})")]
    CoefficientOrder { line: usize, expected: usize, found: usize },
    #[error("header declares {declared} coefficients, found {found}")]
    CoefficientCount { declared: usize, found: usize },
    #[error("character modulus {modulus} differs from level {level}")]
    CharacterModulus { modulus: u64, level: u64 },
    #[error("generator {found} does not match canonical generator {expected} of (Z/{modulus})^x")]
    GeneratorMismatch { modulus: u64, expected: u64, found: u64 },
    #[error("character order {order} does not divide cyclotomic order {cyc_order}")]
    CharacterField { order: u64, cyc_order: u64 },
    #[error("invalid character: {0}")]
    Character(#[from] CharacterError),
    #[error("insufficient precision: {required} coefficients required (Sturm bound of level {level}), {available} available")]
    InsufficientPrecision { level: u64, required: usize, available: usize },
}

/// A normalised weight-one eigenform given by its first M coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NewformRecord {
    pub level: u64,
    pub character: DirichletCharacter,
    pub cyc_order: u64,
    pub coeffs: Vec<CycNumber>,
    pub source: String,
}

impl NewformRecord {
    /// Checks the structural invariants (a_1 = 1, odd character, field sizes).
    pub fn new(
        level: u64,
        character: DirichletCharacter,
        cyc_order: u64,
        coeffs: Vec<CycNumber>,
        source: String,
    ) -> Result<Self, StoreError> {
        if character.modulus() != level {
            return Err(StoreError::CharacterModulus { modulus: character.modulus(), level });
        }
        if !cyc_order.is_multiple_of(character.order()) {
            return Err(StoreError::CharacterField { order: character.order(), cyc_order });
        }
        if !character.is_odd() {
            return Err(StoreError::EvenCharacter);
        }
        let coeffs: Vec<CycNumber> = coeffs
            .into_iter()
            .map(|c| c.embed(cyc_order).map_err(|e| StoreError::Element { line: 0, source: e }))
            .collect::<Result<_, _>>()?;
        match coeffs.first() {
            Some(a1) if a1.is_integer_value(1) => {}
            Some(a1) => return Err(StoreError::LeadingCoefficient(a1.to_string())),
            None => return Err(StoreError::CoefficientCount { declared: 0, found: 0 }),
        }
        Ok(NewformRecord { level, character, cyc_order, coeffs, source })
    }

    pub fn from_theta(theta: &ThetaSeries, source: &str) -> Result<Self, StoreError> {
        Self::new(theta.level, theta.character.clone(), theta.cyc_order, theta.coefficients.clone(), source.to_string())
    }

    /// Number of coefficients M.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// a_n for 1 ≤ n ≤ M.
    pub fn a(&self, n: u64) -> &CycNumber {
        &self.coeffs[n as usize - 1]
    }

    /// χ(n) in Q(ζ_m).
    pub fn chi(&self, n: u64) -> CycNumber {
        self.character.eval(n as i64).embed(self.cyc_order).expect("character field is a subfield")
    }

    pub fn parse(text: &str) -> Result<Self, StoreError> {
        parse(text)
    }

    pub fn serialize(&self) -> String {
        serialize(self)
    }
}

impl fmt::Display for NewformRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

pub fn serialize(r: &NewformRecord) -> String {
    let mut s = String::new();
    let chi = &r.character;
    writeln!(s, "level {}", r.level).unwrap();
    writeln!(s, "cycorder {}", r.cyc_order).unwrap();
    writeln!(s, "chi {} {}", chi.modulus(), chi.order()).unwrap();
    for (g, k) in chi.generators().iter().zip(chi.exponents()) {
        writeln!(s, "gen {} {}", g.generator, k).unwrap();
    }
    if r.source.is_empty() {
        writeln!(s, "source").unwrap();
    } else {
        writeln!(s, "source {}", r.source).unwrap();
    }
    writeln!(s, "coeffs {}", r.coeffs.len()).unwrap();
    for (i, a) in r.coeffs.iter().enumerate() {
        writeln!(s, "a {} {}", i + 1, a).unwrap();
    }
    s
}

const KEYS: [&str; 7] = ["level", "cycorder", "chi", "gen", "source", "coeffs", "a"];

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> =
            Box::new(text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r'))).filter(|(_, l)| !l.trim().is_empty()));
        Lines { inner: it.peekable() }
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, l)| l.split_whitespace().next().unwrap_or(""))
    }

    /// Next line, which must carry `key`; returns (line number, rest).
    fn expect(&mut self, key: &'static str) -> Result<(usize, &'a str), StoreError> {
        let Some((line, l)) = self.inner.next() else {
            return Err(StoreError::MissingKey(key));
        };
        let found = l.split_whitespace().next().unwrap_or("");
        if found != key {
            if !KEYS.contains(&found) {
                return Err(StoreError::UnknownKey { line, key: found.to_string() });
            }
            return Err(StoreError::KeyOrder { line, expected: key, found: found.to_string() });
        }
        let rest = l.trim_start()[found.len()..].strip_prefix(' ').unwrap_or(&l.trim_start()[found.len()..]);
        Ok((line, rest))
    }
}

fn ints<const K: usize>(line: usize, rest: &str) -> Result<[u64; K], StoreError> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != K {
        return Err(StoreError::Syntax { line, msg: format!("expected {K} integer field(s), found {}", parts.len()) });
    }
    let mut out = [0u64; K];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| StoreError::Syntax { line, msg: format!("`{p}` is not a non-negative integer") })?;
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<NewformRecord, StoreError> {
    let mut lines = Lines::new(text);
    let (ln, rest) = lines.expect("level")?;
    let [level] = ints::<1>(ln, rest)?;
    if level == 0 {
        return Err(StoreError::Syntax { line: ln, msg: "level must be positive".into() });
    }
    let (ln, rest) = lines.expect("cycorder")?;
    let [m] = ints::<1>(ln, rest)?;
    if m == 0 {
        return Err(StoreError::Syntax { line: ln, msg: "cyclotomic order must be positive".into() });
    }
    let (ln, rest) = lines.expect("chi")?;
    let [modulus, d] = ints::<2>(ln, rest)?;
    if modulus != level {
        return Err(StoreError::CharacterModulus { modulus, level });
    }
    let canonical = generator_set(modulus);
    let mut exps = Vec::new();
    while lines.peek_key() == Some("gen") {
        let (ln, rest) = lines.expect("gen")?;
        let [g, k] = ints::<2>(ln, rest)?;
        let expected = canonical.get(exps.len()).map(|c| c.generator);
        match expected {
            Some(e) if e == g => exps.push(k),
            Some(e) => return Err(StoreError::GeneratorMismatch { modulus, expected: e, found: g }),
            None => return Err(StoreError::Syntax { line: ln, msg: format!("too many generators for modulus {modulus}") }),
        }
    }
    let character = DirichletCharacter::from_exponents(modulus, d, &exps)?;
    if character.order() != d {
        return Err(StoreError::Syntax { line: ln, msg: format!("declared order {d} is not the exact order {}", character.order()) });
    }
    if m % d != 0 {
        return Err(StoreError::CharacterField { order: d, cyc_order: m });
    }
    if !character.is_odd() {
        return Err(StoreError::EvenCharacter);
    }
    let (_, source) = lines.expect("source")?;
    let (ln, rest) = lines.expect("coeffs")?;
    let [count] = ints::<1>(ln, rest)?;
    let count = count as usize;
    let mut coeffs = Vec::with_capacity(count);
    while let Some(key) = lines.peek_key() {
        let line = lines.inner.peek().map(|(l, _)| *l).unwrap_or(0);
        let (ln, rest) = match key {
            "a" => lines.expect("a")?,
            k if KEYS.contains(&k) => return Err(StoreError::Syntax { line, msg: format!("key `{k}` after the coefficient block") }),
            k => return Err(StoreError::UnknownKey { line, key: k.to_string() }),
        };
        let rest = rest.trim();
        let (idx, elem) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| StoreError::Syntax { line: ln, msg: "expected `a <n> <element>`".into() })?;
        let n: usize = idx.parse().map_err(|_| StoreError::Syntax { line: ln, msg: format!("`{idx}` is not an index") })?;
        if n != coeffs.len() + 1 {
            return Err(StoreError::CoefficientOrder { line: ln, expected: coeffs.len() + 1, found: n });
        }
        let x = CycNumber::parse(elem, m).map_err(|e| StoreError::Element { line: ln, source: e })?;
        if n == 1 && !x.is_integer_value(1) {
            return Err(StoreError::LeadingCoefficient(x.to_string()));
        }
        coeffs.push(x);
    }
    if coeffs.len() != count {
        return Err(StoreError::CoefficientCount { declared: count, found: coeffs.len() });
    }
    NewformRecord::new(level, character, m, coeffs, source.to_string())
}

/// [SL_2(Z) : Γ_0(N)] and the coefficient bound ⌈index/12⌉.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SturmBound {
    pub level: u64,
    pub index: u64,
    pub bound: u64,
}

pub fn sturm_bound(level: u64) -> SturmBound {
    assert!(level >= 1);
    let index = factor(level).iter().fold(level, |acc, &(p, _)| acc / p * (p + 1));
    SturmBound { level, index, bound: index.div_ceil(12) }
}

/// One of the relations checked by [`validate_hecke`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// a_{mn} = a_m·a_n, gcd(m, n) = 1.
    Multiplicative { m: u64, n: u64 },
    /// a_{p^r} = a_p·a_{p^{r−1}} − χ(p)·a_{p^{r−2}}, p ∤ N.
    GoodPrimePower { p: u64, r: u32 },
    /// a_{p^r} = a_p^r, p | N.
    BadPrimePower { p: u64, r: u32 },
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Multiplicative { m, n } => write!(f, "a_{} = a_{m}*a_{n}", m * n),
            Relation::GoodPrimePower { p, r } => {
                write!(f, "a_{p}^{r} = a_{p}*a_{p}^{} - chi({p})*a_{p}^{}", r - 1, r - 2)
            }
            Relation::BadPrimePower { p, r } => write!(f, "a_{p}^{r} = (a_{p})^{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub n: u64,
    pub relation: Relation,
    pub expected: String,
    pub found: String,
}

/// Result of [`validate_hecke`]: violations are failures, warnings are not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeReport {
    pub violations: Vec<Violation>,
    /// Primes p | N whose a_p is neither 0 nor a root of unity.
    pub warnings: Vec<u64>,
}

impl HeckeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check one Hecke relation per index 2 ≤ n ≤ M (so each coefficient is pinned
/// by exactly one equation in terms of smaller ones).
pub fn validate_hecke(r: &NewformRecord) -> HeckeReport {
    let big_m = r.precision() as u64;
    let mut report = HeckeReport::default();
    for n in 2..=big_m {
        let fac = factor(n);
        let (p, e) = fac[0];
        let pe = p.pow(e);
        let (relation, expected) = if pe != n {
            (Relation::Multiplicative { m: pe, n: n / pe }, r.a(pe) * r.a(n / pe))
        } else if e == 1 {
            if r.level.is_multiple_of(p) {
                let ap = r.a(p);
                if !ap.is_zero() && !ap.is_root_of_unity() {
                    report.warnings.push(p);
                }
            }
            continue;
        } else if r.level.is_multiple_of(p) {
            (Relation::BadPrimePower { p, r: e }, r.a(p) * r.a(n / p))
        } else {
            let t = &(r.a(p) * r.a(n / p)) - &(&r.chi(p) * r.a(n / p / p));
            (Relation::GoodPrimePower { p, r: e }, t)
        };
        let found = r.a(n);
        if *found != expected {
            report.violations.push(Violation { n, relation, expected: expected.to_string(), found: found.to_string() });
        }
    }
    report
}

/// f ⊗ ξ: coefficients a_n·ξ(n) with ξ primitive, declared level N·cond(ξ)²,
/// character χ·ξ².
pub fn twist(r: &NewformRecord, xi: &DirichletCharacter) -> NewformRecord {
    let xi = xi.primitive();
    let c = xi.modulus();
    let level = r.level * c * c;
    let character = r.character.lift(level).expect("multiple").mul(&xi.pow(2).lift(level).expect("multiple"));
    let m = lcm(lcm(r.cyc_order, xi.order()), character.order());
    let coeffs = r
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = i as i64 + 1;
            let x = xi.eval(n).embed(m).expect("divides");
            &a.embed(m).expect("divides") * &x
        })
        .collect();
    let source = if c == 1 { r.source.clone() } else { format!("{} twisted by {}", r.source, xi) };
    NewformRecord { level, character, cyc_order: m, coeffs, source }
}

/// χ(g_i) for the canonical generators together with a_1..a_B, B the Sturm
/// bound of the (declared) level, all in Q(ζ_m).
pub fn coefficient_field_generators(r: &NewformRecord) -> Result<(u64, Vec<CycNumber>), StoreError> {
    let b = sturm_bound(r.level).bound as usize;
    if r.precision() < b {
        return Err(StoreError::InsufficientPrecision { level: r.level, required: b, available: r.precision() });
    }
    let m = r.cyc_order;
    let mut gens: Vec<CycNumber> = r.character.generators().iter().map(|g| r.chi(g.generator)).collect();
    gens.extend(r.coeffs[..b].iter().cloned());
    Ok((m, gens))
}
