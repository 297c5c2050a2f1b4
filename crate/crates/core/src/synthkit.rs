//! Synthetic measurement noise and dataset persistence.

use crate::dataset::{NearFieldDataset, Sample};
use crate::error::{Error, Result};
use crate::medium::{DirectionGrid, ElasticMedium, MeasurementLine, WaveKind};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::{BufWriter, Write};
use std::path::Path;

/// How many independent `zeta_1 + i zeta_2` draws are made.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseGranularity {
    /// One draw per vector component of every sample.
    #[default]
    PerComponent,
    /// One draw per sample, shared by both components.
    PerSample,
    /// A single draw for the whole dataset.
    PerDataset,
}

/// Which samples define the amplitude `max |u_sc|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeScope {
    /// Same wave kind and incident direction.
    #[default]
    PerDirection,
    /// Whole dataset.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSpec {
    pub delta: f64,
    pub seed: u64,
    pub granularity: NoiseGranularity,
    pub scope: AmplitudeScope,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            delta: 0.0,
            seed: 0,
            granularity: NoiseGranularity::default(),
            scope: AmplitudeScope::default(),
        }
    }
}

impl NoiseSpec {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        let s = NoiseSpec {
            delta,
            seed,
            ..Default::default()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise level delta = {} must be >= 0",
                self.delta
            )));
        }
        Ok(())
    }
}

fn normal_pair(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// `u + delta (zeta_1 + i zeta_2) max |u|` with standard normal `zeta`.
///
/// Each (kind, direction) block draws from its own ChaCha stream, so the
/// result does not depend on how blocks are scheduled.
pub fn add_noise(ds: &NearFieldDataset, spec: &NoiseSpec) -> Result<NearFieldDataset> {
    spec.validate()?;
    if spec.delta == 0.0 {
        return Ok(ds.clone());
    }
    let nk = ds.directions();
    let global = WaveKind::ALL
        .iter()
        .flat_map(|&kind| (0..nk).map(move |k| ds.max_modulus(kind, k)))
        .fold(0.0, f64::max);
    let shared = {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(u64::MAX);
        normal_pair(&mut rng)
    };
    let mut out = ds.clone();
    let r = ds.receivers();
    for kind in WaveKind::ALL {
        let base = kind.index() * nk;
        out.samples_mut(kind)
            .par_chunks_mut(r)
            .enumerate()
            .for_each(|(k, row)| {
                let amp = spec.delta
                    * match spec.scope {
                        AmplitudeScope::PerDirection => ds.max_modulus(kind, k),
                        AmplitudeScope::Global => global,
                    };
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                rng.set_stream((base + k) as u64);
                for v in row.iter_mut() {
                    let z = match spec.granularity {
                        NoiseGranularity::PerComponent => [normal_pair(&mut rng), normal_pair(&mut rng)],
                        NoiseGranularity::PerSample => {
                            let z = normal_pair(&mut rng);
                            [z, z]
                        }
                        NoiseGranularity::PerDataset => [shared, shared],
                    };
                    v[0] += z[0] * amp;
                    v[1] += z[1] * amp;
                }
            });
    }
    Ok(out)
}

pub const MAGIC: &[u8; 8] = b"ERSNFD\0\0";
pub const FORMAT_VERSION: u32 = 1;
const DIGEST_LEN: usize = 32;

fn encode(ds: &NearFieldDataset) -> Vec<u8> {
    let mut b = Vec::with_capacity(128 + 2 * 32 * ds.receivers() * ds.directions());
    b.extend_from_slice(MAGIC);
    b.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for v in [
        ds.medium.lambda,
        ds.medium.mu,
        ds.medium.omega,
        ds.line.height,
        ds.line.half_length,
    ] {
        b.extend_from_slice(&v.to_le_bytes());
    }
    b.extend_from_slice(&(ds.line.n as u64).to_le_bytes());
    b.extend_from_slice(&(ds.grid.m as u64).to_le_bytes());
    let label = ds.label.as_bytes();
    b.extend_from_slice(&(label.len() as u32).to_le_bytes());
    b.extend_from_slice(label);
    b.extend_from_slice(&(WaveKind::ALL.len() as u32).to_le_bytes());
    for kind in WaveKind::ALL {
        b.push(kind.label().as_bytes()[0]);
    }
    for kind in WaveKind::ALL {
        for v in ds.samples(kind) {
            for c in v {
                b.extend_from_slice(&c.re.to_le_bytes());
                b.extend_from_slice(&c.im.to_le_bytes());
            }
        }
    }
    let digest = Sha256::digest(&b);
    b.extend_from_slice(&digest);
    b
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format("unexpected end of dataset header".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn decode(bytes: &[u8]) -> Result<NearFieldDataset> {
    if bytes.len() < MAGIC.len() + 4 || &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::Format("not a near-field dataset (bad magic)".into()));
    }
    let found = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if found != FORMAT_VERSION {
        return Err(Error::Version {
            found,
            expected: FORMAT_VERSION,
        });
    }
    if bytes.len() < 12 + DIGEST_LEN {
        return Err(Error::Checksum);
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(Error::Checksum);
    }
    let mut r = Reader { buf: body, pos: 12 };
    let medium = ElasticMedium::new(r.f64()?, r.f64()?, r.f64()?)?;
    let (a, big_a) = (r.f64()?, r.f64()?);
    let n = r.u64()? as usize;
    let m = r.u64()? as usize;
    let line = MeasurementLine::new(a, big_a, n)?;
    let grid = DirectionGrid::new(m)?;
    let len = r.u32()? as usize;
    let label = String::from_utf8(r.take(len)?.to_vec()).map_err(|_| Error::Format("label is not UTF-8".into()))?;
    let kinds = r.u32()? as usize;
    let tags = r.take(kinds)?;
    if tags != b"PS" {
        return Err(Error::Format(format!(
            "unsupported wave kinds {:?}",
            String::from_utf8_lossy(tags)
        )));
    }
    let count = line.len() * grid.len();
    if body.len() - r.pos != 2 * count * 32 {
        return Err(Error::Shape(format!(
            "payload has {} bytes, expected {}",
            body.len() - r.pos,
            2 * count * 32
        )));
    }
    let mut blocks: [Vec<Sample>; 2] = [Vec::with_capacity(count), Vec::with_capacity(count)];
    for block in blocks.iter_mut() {
        for _ in 0..count {
            let v = [Complex64::new(r.f64()?, r.f64()?), Complex64::new(r.f64()?, r.f64()?)];
            block.push(v);
        }
    }
    let [p, s] = blocks;
    NearFieldDataset::new(medium, line, grid, label, p, s)
}

/// Binary layout (all little endian):
/// magic `ERSNFD\0\0`, u32 version, f64 lambda, mu, omega, a, A, u64 N,
/// u64 M, u32 label length + UTF-8 label, u32 kind count + kind tags
/// (`P`, `S`), then per kind, direction k and node j the four f64
/// `Re u1, Im u1, Re u2, Im u2`, and finally the SHA-256 of everything
/// before it.
pub fn save_dataset(ds: &NearFieldDataset, path: &Path) -> Result<()> {
    let bytes = encode(ds);
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<NearFieldDataset> {
    decode(&std::fs::read(path)?)
}

/// Columns `wave_kind,k,j,x1,x2,re_u1,im_u1,re_u2,im_u2`.
pub fn export_csv(ds: &NearFieldDataset, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "wave_kind,k,j,x1,x2,re_u1,im_u1,re_u2,im_u2")?;
    for kind in WaveKind::ALL {
        for k in 0..ds.directions() {
            for j in 0..ds.receivers() {
                let x = ds.line.node(j);
                let v = ds.get(kind, k, j);
                writeln!(
                    w,
                    "{},{k},{j},{},{},{},{},{},{}",
                    kind.label(),
                    x[0],
                    x[1],
                    v[0].re,
                    v[0].im,
                    v[1].re,
                    v[1].im
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
