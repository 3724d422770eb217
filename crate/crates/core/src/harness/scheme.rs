use std::fmt;
use std::str::FromStr;

use crate::concat::{ConcatCode, ConcatDecoder};
use crate::error::{Error, Result};
use crate::ldpc::{LdpcCode, LdpcDecoder};
use crate::polar::{build_factor_graph, sc_decode, BpDecoder, FactorGraph, PolarCode};
use crate::ratecomp::{puncture_llrs, NestedFrozenFamily, PunctureMethod, PuncturingPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Uncoded,
    PolarSc,
    PolarBp,
    Ldpc,
    Concat,
    Ucarc,
    PunctRandom,
    PunctStoptree,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 8] = [
        SchemeKind::Uncoded,
        SchemeKind::PolarSc,
        SchemeKind::PolarBp,
        SchemeKind::Ldpc,
        SchemeKind::Concat,
        SchemeKind::Ucarc,
        SchemeKind::PunctRandom,
        SchemeKind::PunctStoptree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Uncoded => "uncoded",
            SchemeKind::PolarSc => "polar_sc",
            SchemeKind::PolarBp => "polar_bp",
            SchemeKind::Ldpc => "ldpc",
            SchemeKind::Concat => "concat",
            SchemeKind::Ucarc => "ucarc",
            SchemeKind::PunctRandom => "punct_random",
            SchemeKind::PunctStoptree => "punct_stoptree",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone)]
enum Body {
    Uncoded(usize),
    Polar {
        code: PolarCode,
        /// `None` selects SC decoding.
        graph: Option<FactorGraph>,
        iters: usize,
        pattern: Option<PuncturingPattern>,
    },
    Ldpc {
        code: LdpcCode,
        iters: usize,
    },
    Concat(ConcatCode),
}

/// Something that maps `info_len` random bits to `tx_len` channel bits and
/// back: the unit the simulator runs frames of.
#[derive(Debug, Clone)]
pub struct Scheme {
    kind: SchemeKind,
    body: Body,
}

/// Per-worker decoder buffers.
#[derive(Debug)]
pub enum Worker {
    Stateless,
    Bp(BpDecoder),
    Ldpc(LdpcDecoder),
    Concat(ConcatDecoder),
}

impl Scheme {
    /// `k` bits sent as they are.
    pub fn uncoded(k: usize) -> Self {
        Scheme {
            kind: SchemeKind::Uncoded,
            body: Body::Uncoded(k),
        }
    }

    pub fn polar_sc(code: PolarCode) -> Self {
        Scheme {
            kind: SchemeKind::PolarSc,
            body: Body::Polar {
                code,
                graph: None,
                iters: 1,
                pattern: None,
            },
        }
    }

    pub fn polar_bp(code: PolarCode, iters: usize) -> Result<Self> {
        Self::polar_with(SchemeKind::PolarBp, code, iters, None)
    }

    /// Level `level` of a nested family, decoded by BP on the parent graph.
    pub fn ucarc(family: &NestedFrozenFamily, level: usize, iters: usize) -> Result<Self> {
        Self::ucarc_level(family.level(level)?.code.clone(), iters)
    }

    /// One level's code, already extracted from its family.
    pub fn ucarc_level(code: PolarCode, iters: usize) -> Result<Self> {
        Self::polar_with(SchemeKind::Ucarc, code, iters, None)
    }

    /// BP decoding of `code` with `pattern` withheld from transmission.
    pub fn punctured(code: PolarCode, pattern: PuncturingPattern, iters: usize) -> Result<Self> {
        if pattern.len() != code.len() {
            return Err(Error::shape("puncturing pattern length", code.len(), pattern.len()));
        }
        let kind = match pattern.method() {
            Some(PunctureMethod::Random) => SchemeKind::PunctRandom,
            _ => SchemeKind::PunctStoptree,
        };
        Self::polar_with(kind, code, iters, Some(pattern))
    }

    /// Like [`Scheme::punctured`] but labelled explicitly, for patterns read
    /// back from files.
    pub fn punctured_as(
        kind: SchemeKind,
        code: PolarCode,
        pattern: PuncturingPattern,
        iters: usize,
    ) -> Result<Self> {
        let mut s = Self::punctured(code, pattern, iters)?;
        s.kind = kind;
        Ok(s)
    }

    fn polar_with(
        kind: SchemeKind,
        code: PolarCode,
        iters: usize,
        pattern: Option<PuncturingPattern>,
    ) -> Result<Self> {
        if iters == 0 {
            return Err(Error::Parameter("BP needs at least one iteration".into()));
        }
        let graph = build_factor_graph(code.n())?;
        Ok(Scheme {
            kind,
            body: Body::Polar {
                code,
                graph: Some(graph),
                iters,
                pattern,
            },
        })
    }

    pub fn ldpc(code: LdpcCode, iters: usize) -> Self {
        Scheme {
            kind: SchemeKind::Ldpc,
            body: Body::Ldpc { code, iters },
        }
    }

    pub fn concat(code: ConcatCode) -> Self {
        Scheme {
            kind: SchemeKind::Concat,
            body: Body::Concat(code),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn info_len(&self) -> usize {
        match &self.body {
            Body::Uncoded(k) => *k,
            Body::Polar { code, .. } => code.k(),
            Body::Ldpc { code, .. } => code.k(),
            Body::Concat(c) => c.k(),
        }
    }

    pub fn tx_len(&self) -> usize {
        match &self.body {
            Body::Uncoded(k) => *k,
            Body::Polar { code, pattern, .. } => {
                pattern.as_ref().map_or(code.len(), |p| p.transmitted_len())
            }
            Body::Ldpc { code, .. } => code.n(),
            Body::Concat(c) => c.len(),
        }
    }

    /// Information bits per transmitted bit.
    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.tx_len() as f64
    }

    pub fn worker(&self) -> Worker {
        match &self.body {
            Body::Polar { graph: Some(g), .. } => Worker::Bp(BpDecoder::new(g)),
            Body::Ldpc { code, .. } => Worker::Ldpc(LdpcDecoder::new(code)),
            Body::Concat(c) => Worker::Concat(ConcatDecoder::new(c)),
            _ => Worker::Stateless,
        }
    }

    /// Channel bits for `info`.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        match &self.body {
            Body::Uncoded(k) => {
                if info.len() != *k {
                    return Err(Error::shape("information bits", *k, info.len()));
                }
                Ok(info.to_vec())
            }
            Body::Polar { code, pattern, .. } => {
                let x = code.encode(info)?;
                match pattern {
                    Some(p) => p.puncture(&x),
                    None => Ok(x),
                }
            }
            Body::Ldpc { code, .. } => code.encode(info),
            Body::Concat(c) => c.encode(info),
        }
    }

    /// Information-bit estimate from the LLRs of the transmitted bits.
    pub fn decode(&self, worker: &mut Worker, llrs: &[f64]) -> Result<Vec<u8>> {
        if llrs.len() != self.tx_len() {
            return Err(Error::shape("received LLRs", self.tx_len(), llrs.len()));
        }
        match (&self.body, worker) {
            (Body::Uncoded(_), _) => Ok(llrs.iter().map(|&l| crate::channels::hard_decision(l)).collect()),
            (Body::Polar { code, graph, iters, pattern }, worker) => {
                let full;
                let input = match pattern {
                    Some(p) => {
                        full = puncture_llrs(p, llrs)?;
                        &full[..]
                    }
                    None => llrs,
                };
                match (graph, worker) {
                    (Some(g), Worker::Bp(dec)) => Ok(dec.decode(g, code, input, *iters)?.info),
                    (Some(g), _) => Ok(BpDecoder::new(g).decode(g, code, input, *iters)?.info),
                    (None, _) => Ok(sc_decode(code, input)?.info),
                }
            }
            (Body::Ldpc { code, iters }, Worker::Ldpc(dec)) => {
                Ok(code.extract(&dec.decode(code, llrs, *iters)?.codeword))
            }
            (Body::Ldpc { code, iters }, _) => {
                Ok(code.extract(&LdpcDecoder::new(code).decode(code, llrs, *iters)?.codeword))
            }
            (Body::Concat(c), Worker::Concat(dec)) => Ok(dec.decode(c, llrs)?.info),
            (Body::Concat(c), _) => Ok(c.decode(llrs)?.info),
        }
    }
}
