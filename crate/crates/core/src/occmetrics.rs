//! Spread of occupancy-rate distributions over `[0, 1]` and selection of the
//! saturation scale.
//!
//! Every metric is evaluated on the survival function `λ ↦ P(X > λ)` (the
//! inverse cumulative distribution). It is stored as contiguous pieces on
//! which it is linear, which covers both empirical distributions (constant
//! pieces between atoms) and the uniform reference `1 - λ`, so every integral
//! has a closed form.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::reach::OccupancyDistribution;

/// Default slot count of the slotted Shannon entropy.
pub const DEFAULT_SHANNON_SLOTS: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Piece {
    lo: f64,
    hi: f64,
    // value just right of `lo` and just left of `hi`
    start: f64,
    end: f64,
}

impl Piece {
    fn len(&self) -> f64 {
        self.hi - self.lo
    }

    fn at(&self, x: f64) -> f64 {
        if self.start == self.end {
            self.start
        } else {
            self.start + (self.end - self.start) * (x - self.lo) / self.len()
        }
    }
}

/// Right-continuous survival function of a distribution on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Survival {
    pieces: Vec<Piece>,
    mean: f64,
    variance: f64,
    // (rate, probability) atoms, when the distribution is discrete
    atoms: Vec<(f64, f64)>,
}

impl Survival {
    /// Uniform density on `[0, 1]`.
    pub fn uniform() -> Self {
        Survival {
            pieces: alloc::vec![Piece {
                lo: 0.0,
                hi: 1.0,
                start: 1.0,
                end: 0.0,
            }],
            mean: 0.5,
            variance: 1.0 / 12.0,
            atoms: Vec::new(),
        }
    }

    pub fn from_distribution(dist: &OccupancyDistribution) -> Result<Self> {
        if dist.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let total = dist.total();
        let mut remaining = total;
        let mut atoms = Vec::new();
        let mut tails = Vec::new();
        for (occ, n) in dist.rates() {
            remaining -= n;
            atoms.push((occ.rate(), n as f64 / total as f64));
            tails.push(remaining as f64 / total as f64);
        }
        Ok(Self::discrete(atoms, tails))
    }

    /// Discrete distribution from `(rate, weight)` pairs; rates in `[0, 1]`,
    /// weights positive (normalized here).
    pub fn from_weighted_rates(rates: &[(f64, f64)]) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = rates.iter().copied().filter(|r| r.1 > 0.0).collect();
        if v.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (r, w) in v {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 += w,
                _ => merged.push((r.clamp(0.0, 1.0), w)),
            }
        }
        let total: f64 = merged.iter().map(|a| a.1).sum();
        let mut above = total;
        let mut atoms = Vec::with_capacity(merged.len());
        let mut tails = Vec::with_capacity(merged.len());
        for (r, w) in merged {
            above -= w;
            atoms.push((r, w / total));
            tails.push((above / total).max(0.0));
        }
        Ok(Self::discrete(atoms, tails))
    }

    fn discrete(atoms: Vec<(f64, f64)>, tails: Vec<f64>) -> Self {
        let mut pieces = Vec::with_capacity(atoms.len() + 1);
        if atoms[0].0 > 0.0 {
            pieces.push(Piece {
                lo: 0.0,
                hi: atoms[0].0,
                start: 1.0,
                end: 1.0,
            });
        }
        for (i, &(r, _)) in atoms.iter().enumerate() {
            let hi = atoms.get(i + 1).map_or(1.0, |a| a.0);
            if hi > r {
                pieces.push(Piece {
                    lo: r,
                    hi,
                    start: tails[i],
                    end: tails[i],
                });
            }
        }
        let mean: f64 = atoms.iter().map(|&(r, p)| r * p).sum();
        let variance: f64 = atoms.iter().map(|&(r, p)| (r - mean) * (r - mean) * p).sum();
        Survival {
            pieces,
            mean,
            variance,
            atoms,
        }
    }

    /// `P(X > λ)`.
    pub fn icd(&self, lambda: f64) -> f64 {
        if lambda >= 1.0 {
            return 0.0;
        }
        if lambda < 0.0 {
            return 1.0;
        }
        let i = self.pieces.partition_point(|p| p.lo <= lambda);
        if i == 0 {
            return 1.0;
        }
        let p = &self.pieces[i - 1];
        if lambda >= p.hi {
            0.0
        } else {
            p.at(lambda)
        }
    }

    /// Breakpoints of the survival function with its value there, from
    /// `λ = 0` to `λ = 1`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = alloc::vec![(0.0, self.icd(0.0))];
        for p in &self.pieces {
            if p.lo > 0.0 {
                out.push((p.lo, p.start));
            }
        }
        out.push((1.0, 0.0));
        out
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Monge-Kantorovich distance to the uniform density:
    /// `∫₀¹ |P(X > λ) - (1 - λ)| dλ`.
    pub fn mk_distance(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let fa = p.start - (1.0 - p.lo);
                let fb = p.end - (1.0 - p.hi);
                abs_linear_integral(fa, fb, p.len())
            })
            .sum()
    }

    pub fn mk_proximity(&self) -> f64 {
        0.5 - self.mk_distance()
    }

    /// Population standard deviation.
    pub fn std_dev(&self) -> f64 {
        libm::sqrt(self.variance.max(0.0))
    }

    pub fn variation_coeff(&self) -> f64 {
        self.std_dev() / self.mean
    }

    /// Entropy (natural log) of the masses of slots `((i-1)/k, i/k]`.
    pub fn shannon_entropy(&self, slots: u32) -> Result<f64> {
        if slots < 2 {
            return Err(Error::ShannonSlots(slots));
        }
        let k = slots as f64;
        let mut h = 0.0;
        let mut prev = self.icd(0.0);
        for i in 1..=slots {
            let next = self.icd(i as f64 / k);
            let mass = prev - next;
            if mass > 0.0 {
                h -= mass * libm::log(mass);
            }
            prev = next;
        }
        Ok(h)
    }

    /// Cumulative residual entropy `-∫₀¹ P(X > λ) ln P(X > λ) dλ`.
    pub fn cre(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                if (p.end - p.start).abs() < 1e-12 {
                    let v = 0.5 * (p.start + p.end);
                    -p.len() * xlogx(v)
                } else {
                    let g = |x: f64| {
                        if x <= 0.0 {
                            0.0
                        } else {
                            x * x * (0.5 * libm::log(x) - 0.25)
                        }
                    };
                    -p.len() / (p.end - p.start) * (g(p.end) - g(p.start))
                }
            })
            .sum()
    }

    pub fn is_discrete(&self) -> bool {
        !self.atoms.is_empty()
    }
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * libm::log(x)
    }
}

/// `∫ |f|` over an interval of length `len` where `f` is linear from `fa` to `fb`.
fn abs_linear_integral(fa: f64, fb: f64, len: f64) -> f64 {
    if (fa >= 0.0 && fb >= 0.0) || (fa <= 0.0 && fb <= 0.0) {
        0.5 * (fa.abs() + fb.abs()) * len
    } else {
        let (a, b) = (fa.abs(), fb.abs());
        0.5 * (a * a + b * b) / (a + b) * len
    }
}

/// Score used to pick the saturation scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    MkProximity,
    StdDev,
    VariationCoeff,
    Shannon(u32),
    Cre,
}

impl MetricId {
    pub fn score(&self, s: &Survival) -> Result<f64> {
        Ok(match *self {
            MetricId::MkProximity => s.mk_proximity(),
            MetricId::StdDev => s.std_dev(),
            MetricId::VariationCoeff => s.variation_coeff(),
            MetricId::Shannon(k) => s.shannon_entropy(k)?,
            MetricId::Cre => s.cre(),
        })
    }

    /// The five metrics with the given Shannon slot count.
    pub fn all(slots: u32) -> [MetricId; 5] {
        [
            MetricId::MkProximity,
            MetricId::StdDev,
            MetricId::VariationCoeff,
            MetricId::Shannon(slots),
            MetricId::Cre,
        ]
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricId::MkProximity => f.write_str("mk"),
            MetricId::StdDev => f.write_str("stddev"),
            MetricId::VariationCoeff => f.write_str("cv"),
            MetricId::Shannon(k) => write!(f, "shannon:{k}"),
            MetricId::Cre => f.write_str("cre"),
        }
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownMetric(s.to_string());
        match s {
            "mk" => Ok(MetricId::MkProximity),
            "stddev" => Ok(MetricId::StdDev),
            "cv" => Ok(MetricId::VariationCoeff),
            "cre" => Ok(MetricId::Cre),
            "shannon" => Ok(MetricId::Shannon(DEFAULT_SHANNON_SLOTS)),
            _ => {
                let k = s.strip_prefix("shannon:").ok_or_else(bad)?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                if !(2..=100).contains(&k) {
                    return Err(Error::ShannonSlots(k));
                }
                Ok(MetricId::Shannon(k))
            }
        }
    }
}

/// All five scores of one distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpreadScores {
    pub mk_proximity: f64,
    pub std_dev: f64,
    pub variation_coeff: f64,
    pub shannon: f64,
    pub shannon_slots: u32,
    pub cre: f64,
}

impl SpreadScores {
    pub fn compute(s: &Survival, shannon_slots: u32) -> Result<Self> {
        Ok(SpreadScores {
            mk_proximity: s.mk_proximity(),
            std_dev: s.std_dev(),
            variation_coeff: s.variation_coeff(),
            shannon: s.shannon_entropy(shannon_slots)?,
            shannon_slots,
            cre: s.cre(),
        })
    }

    pub fn get(&self, metric: MetricId) -> f64 {
        match metric {
            MetricId::MkProximity => self.mk_proximity,
            MetricId::StdDev => self.std_dev,
            MetricId::VariationCoeff => self.variation_coeff,
            MetricId::Shannon(_) => self.shannon,
            MetricId::Cre => self.cre,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub windows: u32,
    pub delta_seconds: f64,
    pub score: f64,
}

/// Scores of one metric along the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricCurve {
    pub metric: MetricId,
    pub points: Vec<CurvePoint>,
}

impl MetricCurve {
    pub fn new(metric: MetricId) -> Self {
        MetricCurve {
            metric,
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, windows: u32, delta_seconds: f64, score: f64) {
        self.points.push(CurvePoint {
            windows,
            delta_seconds,
            score,
        });
    }

    pub fn label(&self) -> String {
        self.metric.to_string()
    }
}

/// Grid point with the highest score; exact ties go to the smaller `Δ`.
pub fn select_gamma(curve: &MetricCurve) -> Result<CurvePoint> {
    let mut best: Option<CurvePoint> = None;
    for &p in &curve.points {
        best = match best {
            None => Some(p),
            Some(b) if p.score > b.score => Some(p),
            Some(b) if p.score == b.score && p.delta_seconds < b.delta_seconds => Some(p),
            keep => keep,
        };
    }
    best.ok_or(Error::EmptyCurve)
}
