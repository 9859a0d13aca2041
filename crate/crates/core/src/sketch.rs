//! The streaming summary: k accumulators x_j = Σ_i r_ij A[i].
//!
//! Because the projection is linear, any interleaving of Turnstile updates
//! (insertions and deletions) produces the same summary, and sketches built
//! over disjoint pieces of a stream merge by adding accumulators.

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaParam;
use crate::error::{Error, Result};
use crate::stable::{ProjectionKind, ProjectionMatrix, SeedSpec};

/// Current version of the serialized sketch record.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SketchConfig {
    pub alpha: AlphaParam,
    pub k: usize,
    pub seed: SeedSpec,
    pub kind: ProjectionKind,
}

impl SketchConfig {
    pub fn new(alpha: f64, k: usize, seed: u64, kind: ProjectionKind) -> Result<Self> {
        let config = Self {
            alpha: AlphaParam::new(alpha)?,
            k,
            seed: SeedSpec(seed),
            kind,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config(format!("k must be at least 2, got {}", self.k)));
        }
        Ok(())
    }
}

/// One Turnstile event: A[index] += increment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamUpdate {
    #[serde(rename = "i")]
    pub index: u64,
    #[serde(rename = "delta")]
    pub increment: f64,
}

impl StreamUpdate {
    pub fn new(index: u64, increment: f64) -> Self {
        Self { index, increment }
    }
}

#[derive(Debug, Clone)]
pub struct Sketch {
    config: SketchConfig,
    accumulators: Vec<f64>,
    update_count: u64,
    matrix: ProjectionMatrix,
}

impl PartialEq for Sketch {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.update_count == other.update_count
            && self
                .accumulators
                .iter()
                .zip(&other.accumulators)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Sketch {
    pub fn new(config: SketchConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            accumulators: vec![0.0; config.k],
            update_count: 0,
            matrix: ProjectionMatrix::new(config.seed, config.alpha, config.kind),
            config,
        })
    }

    pub fn config(&self) -> &SketchConfig {
        &self.config
    }

    pub fn alpha(&self) -> AlphaParam {
        self.config.alpha
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    /// The k accumulators; i.i.d. S(α, β, F_(α)) samples of the current signal.
    pub fn samples(&self) -> &[f64] {
        &self.accumulators
    }

    pub fn update(&mut self, u: StreamUpdate) -> Result<()> {
        if !u.increment.is_finite() {
            return Err(Error::Input(format!(
                "increment for index {} is not finite: {}",
                u.index, u.increment
            )));
        }
        for (x, r) in self.accumulators.iter_mut().zip(self.matrix.row(u.index)) {
            *x += r * u.increment;
        }
        self.update_count += 1;
        Ok(())
    }

    pub fn extend<I>(&mut self, updates: I) -> Result<()>
    where
        I: IntoIterator<Item = StreamUpdate>,
    {
        updates.into_iter().try_for_each(|u| self.update(u))
    }

    /// Entrywise sum of two sketches built with the same configuration.
    pub fn merge(&self, other: &Sketch) -> Result<Sketch> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    pub fn merge_from(&mut self, other: &Sketch) -> Result<()> {
        if self.config != other.config {
            return Err(Error::MergeMismatch(format!(
                "configurations differ: {:?} vs {:?}",
                self.config, other.config
            )));
        }
        for (a, b) in self.accumulators.iter_mut().zip(&other.accumulators) {
            *a += *b;
        }
        self.update_count += other.update_count;
        Ok(())
    }

    pub fn to_record(&self) -> SketchRecord {
        SketchRecord {
            version: FORMAT_VERSION,
            alpha: self.config.alpha,
            k: self.config.k,
            seed: self.config.seed,
            kind: self.config.kind,
            accumulators: self.accumulators.iter().map(|x| HexF64(*x)).collect(),
            update_count: self.update_count,
        }
    }

    pub fn from_record(record: SketchRecord) -> Result<Self> {
        if record.version != FORMAT_VERSION {
            return Err(Error::Serialization(format!(
                "unsupported sketch format version {}",
                record.version
            )));
        }
        let config = SketchConfig {
            alpha: record.alpha,
            k: record.k,
            seed: record.seed,
            kind: record.kind,
        };
        if record.accumulators.len() != config.k {
            return Err(Error::Serialization(format!(
                "expected {} accumulators, found {}",
                config.k,
                record.accumulators.len()
            )));
        }
        let mut sketch = Sketch::new(config)?;
        sketch.accumulators = record.accumulators.into_iter().map(|h| h.0).collect();
        sketch.update_count = record.update_count;
        Ok(sketch)
    }

    /// Canonical single-line JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("sketch record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SketchRecord = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        Self::from_record(record)
    }
}

/// Serialized sketch. Accumulators are written as the 16-hex-digit IEEE-754
/// bit pattern so that a round trip is bit-exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SketchRecord {
    pub version: u32,
    pub alpha: AlphaParam,
    pub k: usize,
    pub seed: SeedSpec,
    pub kind: ProjectionKind,
    pub accumulators: Vec<HexF64>,
    pub update_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexF64(pub f64);

impl Serialize for HexF64 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:016x}", self.0.to_bits()))
    }
}

impl<'de> Deserialize<'de> for HexF64 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() != 16 {
            return Err(serde::de::Error::custom(format!("expected 16 hex digits, got {s:?}")));
        }
        u64::from_str_radix(&s, 16)
            .map(|bits| HexF64(f64::from_bits(bits)))
            .map_err(serde::de::Error::custom)
    }
}
