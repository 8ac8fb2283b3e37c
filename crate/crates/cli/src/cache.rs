//! Binary coefficient caches.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "ASTC" | version u32 | kind u8 | limit u64 | checksum u64 | payload
//! ```
//!
//! The checksum is XXH64 (seed 0) of the payload. Payloads:
//!
//! * exact τ — `limit` entries, each a u32 byte length followed by the
//!   two's-complement little-endian bytes of τ(n);
//! * normalized — source tag u8, then `limit` f64 values `a_1..a_N`;
//! * angles — record count u64, then `(p u64, a_p f64, θ f64)` records;
//! * traces — A i64, B i64, record count u64, then `(p u64, t i64, good u8)`.

use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use satotate_core::ec::{TraceRecord, TraceSeries};
use satotate_core::tau::ExactTauTable;
use satotate_core::{AngleRecord, AngleSeries, NormalizedSequence, SequenceSource};
use twox_hash::XxHash64;

pub const MAGIC: &[u8; 4] = b"ASTC";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 8 + 8;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a coefficient cache: {0}")]
    Format(String),
    #[error("unsupported cache version {0}")]
    Version(u32),
    #[error("unknown cache kind {0}")]
    Kind(u8),
    #[error("payload checksum mismatch (header {expected:#018x}, payload {found:#018x})")]
    Checksum { expected: u64, found: u64 },
    #[error("cannot store non-finite value at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum CacheKind {
    ExactTau = 1,
    Normalized = 2,
    Angles = 3,
    Traces = 4,
}

impl CacheKind {
    fn from_u8(v: u8) -> Option<Self> {
        match v {
            1 => Some(Self::ExactTau),
            2 => Some(Self::Normalized),
            3 => Some(Self::Angles),
            4 => Some(Self::Traces),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cached {
    ExactTau(ExactTauTable),
    Normalized(NormalizedSequence),
    Angles(AngleSeries),
    Traces(TraceSeries),
}

impl Cached {
    pub fn kind(&self) -> CacheKind {
        match self {
            Cached::ExactTau(_) => CacheKind::ExactTau,
            Cached::Normalized(_) => CacheKind::Normalized,
            Cached::Angles(_) => CacheKind::Angles,
            Cached::Traces(_) => CacheKind::Traces,
        }
    }

    fn limit(&self) -> u64 {
        match self {
            Cached::ExactTau(t) => t.limit(),
            Cached::Normalized(s) => s.limit(),
            Cached::Angles(a) => a.limit(),
            Cached::Traces(t) => t.limit(),
        }
    }
}

fn finite(v: f64, i: usize) -> Result<f64, CacheError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CacheError::NonFinite(i))
    }
}

pub fn encode(data: &Cached) -> Result<Vec<u8>, CacheError> {
    let mut payload = Vec::new();
    match data {
        Cached::ExactTau(t) => {
            for v in t.values() {
                let bytes = v.to_signed_bytes_le();
                payload.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
                payload.extend_from_slice(&bytes);
            }
        }
        Cached::Normalized(s) => {
            payload.reserve(1 + 8 * s.values().len());
            payload.push(s.source().tag());
            for (i, &v) in s.values().iter().enumerate() {
                payload.extend_from_slice(&finite(v, i + 1)?.to_le_bytes());
            }
        }
        Cached::Angles(a) => {
            payload.extend_from_slice(&(a.len() as u64).to_le_bytes());
            for (i, r) in a.records().iter().enumerate() {
                payload.extend_from_slice(&r.p.to_le_bytes());
                payload.extend_from_slice(&finite(r.a_p, i)?.to_le_bytes());
                payload.extend_from_slice(&finite(r.theta, i)?.to_le_bytes());
            }
        }
        Cached::Traces(t) => {
            let (a, b) = t.curve();
            payload.extend_from_slice(&a.to_le_bytes());
            payload.extend_from_slice(&b.to_le_bytes());
            payload.extend_from_slice(&(t.records().len() as u64).to_le_bytes());
            for r in t.records() {
                payload.extend_from_slice(&r.p.to_le_bytes());
                payload.extend_from_slice(&r.t.to_le_bytes());
                payload.push(u8::from(r.good));
            }
        }
    }
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(data.kind() as u8);
    out.extend_from_slice(&data.limit().to_le_bytes());
    out.extend_from_slice(&XxHash64::oneshot(0, &payload).to_le_bytes());
    out.extend_from_slice(&payload);
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CacheError> {
        if self.buf.len() < n {
            return Err(CacheError::Format("payload ends early".into()));
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, CacheError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64, CacheError> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, CacheError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn finish(&self) -> Result<(), CacheError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(CacheError::Format(format!(
                "{} trailing payload bytes",
                self.buf.len()
            )))
        }
    }
}

fn invalid(e: satotate_core::Error) -> CacheError {
    CacheError::Format(e.to_string())
}

pub fn decode(bytes: &[u8]) -> Result<Cached, CacheError> {
    if bytes.len() < HEADER_LEN {
        return Err(CacheError::Format(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(CacheError::Format("bad magic".into()));
    }
    let mut header = Reader {
        buf: &bytes[4..HEADER_LEN],
    };
    let version = header.u32()?;
    if version != VERSION {
        return Err(CacheError::Version(version));
    }
    let kind_byte = header.u8()?;
    let kind = CacheKind::from_u8(kind_byte).ok_or(CacheError::Kind(kind_byte))?;
    let limit = header.u64()?;
    let expected = header.u64()?;
    let payload = &bytes[HEADER_LEN..];
    let found = XxHash64::oneshot(0, payload);
    if found != expected {
        return Err(CacheError::Checksum { expected, found });
    }

    let mut r = Reader { buf: payload };
    let n = usize::try_from(limit).map_err(|_| CacheError::Format("limit overflows".into()))?;
    let data = match kind {
        CacheKind::ExactTau => {
            let mut values = Vec::with_capacity(n.min(payload.len() / 4));
            for _ in 0..n {
                let len = r.u32()? as usize;
                values.push(BigInt::from_signed_bytes_le(r.take(len)?));
            }
            Cached::ExactTau(ExactTauTable::from_values(values).map_err(invalid)?)
        }
        CacheKind::Normalized => {
            let tag = r.u8()?;
            let source = SequenceSource::from_tag(tag)
                .ok_or_else(|| CacheError::Format(format!("unknown sequence source {tag}")))?;
            let mut values = Vec::with_capacity(n.min(payload.len() / 8));
            for _ in 0..n {
                values.push(r.f64()?);
            }
            Cached::Normalized(NormalizedSequence::from_values(source, &values).map_err(invalid)?)
        }
        CacheKind::Angles => {
            let count = r.u64()? as usize;
            let mut recs = Vec::with_capacity(count.min(payload.len() / 24));
            for _ in 0..count {
                let p = r.u64()?;
                let a_p = r.f64()?;
                let theta = r.f64()?;
                recs.push(AngleRecord { p, a_p, theta });
            }
            Cached::Angles(AngleSeries::new(limit, recs).map_err(invalid)?)
        }
        CacheKind::Traces => {
            let a = r.i64()?;
            let b = r.i64()?;
            let count = r.u64()? as usize;
            let mut recs = Vec::with_capacity(count.min(payload.len() / 17));
            for _ in 0..count {
                let p = r.u64()?;
                let t = r.i64()?;
                let good = match r.u8()? {
                    0 => false,
                    1 => true,
                    g => return Err(CacheError::Format(format!("bad good-prime flag {g}"))),
                };
                recs.push(TraceRecord { p, t, good });
            }
            Cached::Traces(TraceSeries::new(a, b, limit, recs).map_err(invalid)?)
        }
    };
    r.finish()?;
    Ok(data)
}

/// Writes through a sibling temporary file so readers never see a partial cache.
pub fn save_cache(path: &Path, data: &Cached) -> Result<(), CacheError> {
    let bytes = encode(data)?;
    let tmp = path.with_extension("astc.tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<Cached, CacheError> {
    decode(&std::fs::read(path)?)
}
