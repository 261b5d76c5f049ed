//! Certificates: the verdict plus every witness needed to replay it, in a
//! canonical line-oriented text format.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::cyclo::CycNumber;
use crate::quadfields::QuadIdeal;
use crate::store::{serialize, sturm_bound, NewformRecord};

use super::proofs::{DihedralData, NonDihedralWitness, NotA5Evidence, NotS4Witness, OrderWitness};
use super::ClassifierError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Dihedral,
    A4,
    S4,
    A5,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Dihedral => "DIHEDRAL",
            Verdict::A4 => "A4",
            Verdict::S4 => "S4",
            Verdict::A5 => "A5",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "DIHEDRAL" => Verdict::Dihedral,
            "A4" => Verdict::A4,
            "S4" => Verdict::S4,
            "A5" => Verdict::A5,
            "INCONCLUSIVE" => Verdict::Inconclusive,
            _ => return Err(format!("unknown verdict `{s}`")),
        })
    }
}

/// Search limits. `prime_budget = None` means every prime the record covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifierConfig {
    pub prime_budget: Option<u64>,
    /// Refuse records whose bad-prime coefficients look wrong.
    pub strict: bool,
}

/// The twisting character of a not-A5 proof, recorded by modulus, order and
/// generator exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSummary {
    pub modulus: u64,
    pub order: u64,
    pub exponents: Vec<u64>,
    pub twisted_level: u64,
    pub generators: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotA5Record {
    NoSqrt5 { generators: usize },
    TwistUnramifiedAt5(TwistSummary),
}

impl From<&NotA5Evidence> for NotA5Record {
    fn from(e: &NotA5Evidence) -> Self {
        match e {
            NotA5Evidence::NoSqrt5 { generators } => NotA5Record::NoSqrt5 { generators: *generators },
            NotA5Evidence::TwistUnramifiedAt5 { xi, twisted_level, generators } => NotA5Record::TwistUnramifiedAt5(TwistSummary {
                modulus: xi.modulus(),
                order: xi.order(),
                exponents: xi.exponents().to_vec(),
                twisted_level: *twisted_level,
                generators: *generators,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub tool_version: String,
    pub record_sha256: String,
    pub level: u64,
    pub cyc_order: u64,
    pub character_order: u64,
    pub character_exponents: Vec<u64>,
    pub precision: usize,
    pub sturm_bound: u64,
    pub config: ClassifierConfig,
    pub verdict: Verdict,
    pub non_dihedral: Vec<NonDihedralWitness>,
    pub order_witness: Option<OrderWitness>,
    pub not_s4: Vec<NotS4Witness>,
    pub not_a5: Option<NotA5Record>,
    pub dihedral: Option<DihedralData>,
    pub inconclusive: Vec<String>,
}

pub fn record_digest(r: &NewformRecord) -> String {
    hex::encode(Sha256::digest(serialize(r).as_bytes()))
}

impl Certificate {
    /// An empty INCONCLUSIVE certificate for `r`.
    pub fn blank(r: &NewformRecord, config: ClassifierConfig) -> Self {
        Certificate {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            record_sha256: record_digest(r),
            level: r.level,
            cyc_order: r.cyc_order,
            character_order: r.character.order(),
            character_exponents: r.character.exponents().to_vec(),
            precision: r.precision(),
            sturm_bound: sturm_bound(r.level).bound,
            config,
            verdict: Verdict::Inconclusive,
            non_dihedral: vec![],
            order_witness: None,
            not_s4: vec![],
            not_a5: None,
            dihedral: None,
            inconclusive: vec![],
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        writeln!(s, "wt1-certificate {FORMAT_VERSION}").unwrap();
        writeln!(s, "tool-version {}", self.tool_version).unwrap();
        writeln!(s, "record-sha256 {}", self.record_sha256).unwrap();
        writeln!(s, "level {}", self.level).unwrap();
        writeln!(s, "cycorder {}", self.cyc_order).unwrap();
        writeln!(s, "character {} {}", self.character_order, opt_list(&join(&self.character_exponents))).unwrap();
        writeln!(s, "precision {}", self.precision).unwrap();
        writeln!(s, "sturm-bound {}", self.sturm_bound).unwrap();
        let budget = self.config.prime_budget.map_or("all".to_string(), |b| b.to_string());
        writeln!(s, "config prime-budget {budget} strict {}", if self.config.strict { "yes" } else { "no" }).unwrap();
        writeln!(s, "verdict {}", self.verdict).unwrap();
        for w in &self.non_dihedral {
            writeln!(s, "non-dihedral {} {} {}", w.disc, w.p, w.a_p).unwrap();
        }
        if let Some(w) = &self.order_witness {
            writeln!(s, "order-witness {} {} {}", w.p, w.order, w.c_p).unwrap();
        }
        for w in &self.not_s4 {
            writeln!(s, "not-s4 {} {} {}", w.disc, w.p, w.c_p).unwrap();
        }
        match &self.not_a5 {
            Some(NotA5Record::NoSqrt5 { generators }) => writeln!(s, "not-a5 no-sqrt5 {generators}").unwrap(),
            Some(NotA5Record::TwistUnramifiedAt5(t)) => writeln!(
                s,
                "not-a5 twist-unramified-at-5 {} {} {} {} {}",
                t.modulus,
                t.order,
                opt_list(&join(&t.exponents)),
                t.twisted_level,
                t.generators
            )
            .unwrap(),
            None => {}
        }
        if let Some(d) = &self.dihedral {
            let f = &d.conductor;
            writeln!(
                s,
                "dihedral {} {} {} {} {} {} {}",
                d.disc,
                f.content(),
                f.a(),
                f.b(),
                d.psi_order,
                opt_list(&join(&d.psi_exponents)),
                d.compared_through
            )
            .unwrap();
        }
        for reason in &self.inconclusive {
            writeln!(s, "inconclusive {reason}").unwrap();
        }
        writeln!(s, "end").unwrap();
        s
    }

    pub fn parse(text: &str) -> Result<Self, ClassifierError> {
        parse(text)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Comma-separated list, with `-` for the empty list.
fn opt_list(s: &str) -> String {
    if s.is_empty() {
        "-".to_string()
    } else {
        s.to_string()
    }
}

fn err(line: usize, msg: impl Into<String>) -> ClassifierError {
    ClassifierError::CertificateSyntax { line, msg: msg.into() }
}

fn num<T: FromStr>(line: usize, s: Option<&str>) -> Result<T, ClassifierError> {
    let s = s.ok_or_else(|| err(line, "missing field"))?;
    s.parse().map_err(|_| err(line, format!("bad number `{s}`")))
}

fn list(line: usize, s: Option<&str>) -> Result<Vec<u64>, ClassifierError> {
    match s.ok_or_else(|| err(line, "missing list"))? {
        "-" => Ok(vec![]),
        s => s.split(',').map(|x| num(line, Some(x))).collect(),
    }
}

/// Split off `k` whitespace-separated fields; the remainder is returned whole.
fn fields(rest: &str, k: usize) -> (Vec<&str>, &str) {
    let mut out = Vec::new();
    let mut r = rest.trim_start();
    for _ in 0..k {
        let (a, b) = r.split_once(' ').unwrap_or((r, ""));
        out.push(a);
        r = b.trim_start();
    }
    (out, r)
}

fn element(line: usize, s: &str, m: u64) -> Result<CycNumber, ClassifierError> {
    CycNumber::parse(s, m).map_err(|e| err(line, e.to_string()))
}

fn parse(text: &str) -> Result<Certificate, ClassifierError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut header = |key: &str| -> Result<(usize, String), ClassifierError> {
        let (ln, l) = lines.next().ok_or_else(|| err(0, format!("missing `{key}`")))?;
        let rest = l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| err(ln, format!("expected `{key}`")))?;
        Ok((ln, rest.to_string()))
    };
    let (ln, v) = header("wt1-certificate")?;
    if v != FORMAT_VERSION.to_string() {
        return Err(err(ln, format!("unsupported format version {v}")));
    }
    let (_, tool_version) = header("tool-version")?;
    let (_, record_sha256) = header("record-sha256")?;
    let (ln, v) = header("level")?;
    let level = num(ln, Some(&v))?;
    let (ln, v) = header("cycorder")?;
    let cyc_order: u64 = num(ln, Some(&v))?;
    let (ln, v) = header("character")?;
    let (f, _) = fields(&v, 2);
    let character_order = num(ln, Some(f[0]))?;
    let character_exponents = list(ln, Some(f[1]))?;
    let (ln, v) = header("precision")?;
    let precision = num(ln, Some(&v))?;
    let (ln, v) = header("sturm-bound")?;
    let sturm = num(ln, Some(&v))?;
    let (ln, v) = header("config")?;
    let (f, _) = fields(&v, 4);
    if f[0] != "prime-budget" || f[2] != "strict" {
        return Err(err(ln, "malformed config"));
    }
    let prime_budget = if f[1] == "all" { None } else { Some(num(ln, Some(f[1]))?) };
    let strict = match f[3] {
        "yes" => true,
        "no" => false,
        s => return Err(err(ln, format!("bad strict flag `{s}`"))),
    };
    let (ln, v) = header("verdict")?;
    let verdict = v.parse().map_err(|e: String| err(ln, e))?;
    let mut cert = Certificate {
        tool_version,
        record_sha256,
        level,
        cyc_order,
        character_order,
        character_exponents,
        precision,
        sturm_bound: sturm,
        config: ClassifierConfig { prime_budget, strict },
        verdict,
        non_dihedral: vec![],
        order_witness: None,
        not_s4: vec![],
        not_a5: None,
        dihedral: None,
        inconclusive: vec![],
    };
    let mut ended = false;
    for (ln, l) in lines {
        if ended {
            return Err(err(ln, "content after `end`"));
        }
        let (key, rest) = l.split_once(' ').unwrap_or((l, ""));
        match key {
            "non-dihedral" => {
                let (f, r) = fields(rest, 2);
                cert.non_dihedral.push(NonDihedralWitness {
                    disc: num(ln, Some(f[0]))?,
                    p: num(ln, Some(f[1]))?,
                    a_p: element(ln, r, cyc_order)?,
                });
            }
            "order-witness" => {
                let (f, r) = fields(rest, 2);
                cert.order_witness =
                    Some(OrderWitness { p: num(ln, Some(f[0]))?, order: num(ln, Some(f[1]))?, c_p: element(ln, r, cyc_order)? });
            }
            "not-s4" => {
                let (f, r) = fields(rest, 2);
                cert.not_s4.push(NotS4Witness { disc: num(ln, Some(f[0]))?, p: num(ln, Some(f[1]))?, c_p: element(ln, r, cyc_order)? });
            }
            "not-a5" => {
                let (f, _) = fields(rest, 6);
                cert.not_a5 = Some(match f[0] {
                    "no-sqrt5" => NotA5Record::NoSqrt5 { generators: num(ln, Some(f[1]))? },
                    "twist-unramified-at-5" => NotA5Record::TwistUnramifiedAt5(TwistSummary {
                        modulus: num(ln, Some(f[1]))?,
                        order: num(ln, Some(f[2]))?,
                        exponents: list(ln, Some(f[3]))?,
                        twisted_level: num(ln, Some(f[4]))?,
                        generators: num(ln, Some(f[5]))?,
                    }),
                    s => return Err(err(ln, format!("unknown not-a5 evidence `{s}`"))),
                });
            }
            "dihedral" => {
                let (f, _) = fields(rest, 7);
                let disc: i64 = num(ln, Some(f[0]))?;
                let conductor = QuadIdeal::with_content(disc, num(ln, Some(f[1]))?, num(ln, Some(f[2]))?, num(ln, Some(f[3]))?)
                    .map_err(|e| err(ln, e.to_string()))?;
                cert.dihedral = Some(DihedralData {
                    disc,
                    conductor,
                    psi_order: num(ln, Some(f[4]))?,
                    psi_exponents: list(ln, Some(f[5]))?,
                    compared_through: num(ln, Some(f[6]))?,
                });
            }
            "inconclusive" => cert.inconclusive.push(rest.to_string()),
            "end" => ended = true,
            k => return Err(err(ln, format!("unknown key `{k}`"))),
        }
    }
    if !ended {
        return Err(err(0, "missing `end`"));
    }
    Ok(cert)
}
