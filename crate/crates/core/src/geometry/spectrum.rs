use std::cmp::Ordering;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::classify::{hyperbolic_weight, ElementKind};
use super::group::{format_word, parse_word, Word};
use crate::lie::EllipticAngles;
use crate::{Error, Result};

const POWER_TOL: f64 = 1e-8;

/// One conjugacy class of the group with everything the zeta function and
/// trace formula consume.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjClassRecord {
    pub kind: ElementKind,
    pub length: f64,
    pub primitive_length: f64,
    pub power: u32,
    pub angles: EllipticAngles,
    /// `D(γ)`, present for hyperbolic classes only.
    pub d_gamma: Option<f64>,
    pub v_gamma: f64,
    pub tr_chi: Complex64,
    pub word: Word,
    pub ambiguous: bool,
}

impl ConjClassRecord {
    /// Hyperbolic class with `D(γ)` computed from `(l, θ)`.
    pub fn hyperbolic(length: f64, angles: EllipticAngles, power: u32, tr_chi: Complex64, v_gamma: f64) -> Self {
        let d = hyperbolic_weight(length, angles.angles());
        Self {
            kind: ElementKind::Hyperbolic,
            length,
            primitive_length: length / power as f64,
            power,
            angles,
            d_gamma: Some(d),
            v_gamma,
            tr_chi,
            word: Word::new(),
            ambiguous: false,
        }
    }

    pub fn elliptic(angles: EllipticAngles, tr_chi: Complex64) -> Self {
        Self {
            kind: ElementKind::Elliptic,
            length: 0.0,
            primitive_length: 0.0,
            power: 1,
            angles,
            d_gamma: None,
            v_gamma: 1.0,
            tr_chi,
            word: Word::new(),
            ambiguous: false,
        }
    }

    pub fn with_word(mut self, word: Word) -> Self {
        self.word = word;
        self
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.kind == ElementKind::Hyperbolic
    }

    pub fn is_elliptic(&self) -> bool {
        self.kind == ElementKind::Elliptic
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(format!("class {}: {msg}", format_word(&self.word))));
        if self.power == 0 {
            return bad("power must be at least 1".into());
        }
        if !(self.v_gamma > 0.0) {
            return bad(format!("v = {} is not positive", self.v_gamma));
        }
        match self.kind {
            ElementKind::Hyperbolic => {
                if !(self.length > 0.0) {
                    return bad(format!("hyperbolic length {} is not positive", self.length));
                }
                let gap = (self.length - self.power as f64 * self.primitive_length).abs();
                if gap > POWER_TOL * self.length.max(1.0) {
                    return bad(format!(
                        "length {} is not {} × {}",
                        self.length, self.power, self.primitive_length
                    ));
                }
                match self.d_gamma {
                    Some(d) if d > 0.0 => {}
                    _ => return bad("missing or non-positive D".into()),
                }
            }
            ElementKind::Elliptic | ElementKind::Identity => {
                if self.length != 0.0 {
                    return bad(format!("{} class has length {}", self.kind, self.length));
                }
            }
        }
        Ok(())
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then(self.length.total_cmp(&other.length))
            .then_with(|| {
                self.angles
                    .angles()
                    .iter()
                    .zip(other.angles.angles())
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
            .then(self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

/// `D(γ)` of a hyperbolic class of rank `n`.
#[allow(non_snake_case)]
pub fn weight_D(record: &ConjClassRecord, n: usize) -> Result<f64> {
    if !record.is_hyperbolic() {
        return Err(Error::Invalid(format!(
            "D(γ) needs a hyperbolic class, got {}",
            record.kind
        )));
    }
    if record.angles.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: record.angles.rank(),
        });
    }
    Ok(hyperbolic_weight(record.length, record.angles.angles()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub spec_hash: String,
    pub cutoff: f64,
    pub max_word_len: usize,
}

/// Cutoff length spectrum: the hyperbolic classes with `l ≤ cutoff` and the
/// elliptic classes found in the enumerated ball, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    pub meta: SpectrumMeta,
    records: Vec<ConjClassRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    kind: String,
    l: String,
    l0: String,
    power: u32,
    theta: String,
    #[serde(rename = "D")]
    d: String,
    v: String,
    re_trchi: String,
    im_trchi: String,
    word: String,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("column {field}: bad number `{s}`")))
}

impl LengthSpectrum {
    pub fn new(meta: SpectrumMeta, mut records: Vec<ConjClassRecord>) -> Self {
        records.sort_by(ConjClassRecord::canonical_cmp);
        Self { meta, records }
    }

    pub fn empty(cutoff: f64) -> Self {
        Self::new(
            SpectrumMeta {
                spec_hash: String::new(),
                cutoff,
                max_word_len: 0,
            },
            Vec::new(),
        )
    }

    pub fn records(&self) -> &[ConjClassRecord] {
        &self.records
    }

    pub fn hyperbolic(&self) -> impl Iterator<Item = &ConjClassRecord> {
        self.records.iter().filter(|r| r.is_hyperbolic())
    }

    pub fn elliptic(&self) -> impl Iterator<Item = &ConjClassRecord> {
        self.records.iter().filter(|r| r.is_elliptic())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ambiguous_count(&self) -> usize {
        self.records.iter().filter(|r| r.ambiguous).count()
    }

    /// Hyperbolic classes with `l ≤ cutoff`; elliptic classes are kept.
    pub fn truncated(&self, cutoff: f64) -> Self {
        let records = self
            .records
            .iter()
            .filter(|r| !r.is_hyperbolic() || r.length <= cutoff)
            .cloned()
            .collect();
        Self::new(
            SpectrumMeta {
                cutoff: cutoff.min(self.meta.cutoff),
                ..self.meta.clone()
            },
            records,
        )
    }

    pub fn concat(&self, other: &Self) -> Self {
        let records = self.records.iter().chain(&other.records).cloned().collect();
        Self::new(
            SpectrumMeta {
                spec_hash: self.meta.spec_hash.clone(),
                cutoff: self.meta.cutoff.max(other.meta.cutoff),
                max_word_len: self.meta.max_word_len.max(other.meta.max_word_len),
            },
            records,
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# spec_hash={}", self.meta.spec_hash)?;
        writeln!(out, "# cutoff={}", fmt_f64(self.meta.cutoff))?;
        writeln!(out, "# max_word_len={}", self.meta.max_word_len)?;
        let ambiguous: Vec<String> = self
            .records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.ambiguous)
            .map(|(i, _)| i.to_string())
            .collect();
        writeln!(out, "# ambiguous_rows={}", ambiguous.join(","))?;
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(CsvRow {
                kind: r.kind.to_string(),
                l: fmt_f64(r.length),
                l0: fmt_f64(r.primitive_length),
                power: r.power,
                theta: r.angles.to_string(),
                d: r.d_gamma.map(fmt_f64).unwrap_or_default(),
                v: fmt_f64(r.v_gamma),
                re_trchi: fmt_f64(r.tr_chi.re),
                im_trchi: fmt_f64(r.tr_chi.im),
                word: format_word(&r.word),
            })
            .map_err(|e| Error::Invalid(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = BufReader::new(input);
        let mut meta = SpectrumMeta {
            spec_hash: String::new(),
            cutoff: f64::INFINITY,
            max_word_len: 0,
        };
        let mut ambiguous = Vec::new();
        let mut body = String::new();
        let mut line = String::new();
        while reader.read_line(&mut line)? > 0 {
            if let Some(h) = line.trim_end().strip_prefix('#') {
                if let Some((k, v)) = h.trim().split_once('=') {
                    match k.trim() {
                        "spec_hash" => meta.spec_hash = v.trim().to_string(),
                        "cutoff" => meta.cutoff = parse_f64("cutoff", v)?,
                        "max_word_len" => {
                            meta.max_word_len = v
                                .trim()
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad max_word_len `{v}`")))?
                        }
                        "ambiguous_rows" => {
                            for tok in v.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                                ambiguous.push(
                                    tok.parse::<usize>()
                                        .map_err(|_| Error::Parse(format!("bad ambiguous row `{tok}`")))?,
                                );
                            }
                        }
                        _ => {}
                    }
                }
            } else {
                body.push_str(&line);
            }
            line.clear();
        }

        let mut records = Vec::new();
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        for (i, row) in rdr.deserialize::<CsvRow>().enumerate() {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            let record = ConjClassRecord {
                kind: row.kind.parse()?,
                length: parse_f64("l", &row.l)?,
                primitive_length: parse_f64("l0", &row.l0)?,
                power: row.power,
                angles: row.theta.parse()?,
                d_gamma: if row.d.trim().is_empty() {
                    None
                } else {
                    Some(parse_f64("D", &row.d)?)
                },
                v_gamma: parse_f64("v", &row.v)?,
                tr_chi: Complex64::new(
                    parse_f64("re_trchi", &row.re_trchi)?,
                    parse_f64("im_trchi", &row.im_trchi)?,
                ),
                word: parse_word(&row.word)?,
                ambiguous: ambiguous.contains(&i),
            };
            record.validate()?;
            records.push(record);
        }
        Ok(Self::new(meta, records))
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::read_csv(text.as_bytes())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Least-squares fit of `ln|tr χ(γ)| ≤ ln K + k l(γ)` over hyperbolic classes.
///
/// Returns `(K, k)` with `K` chosen so the bound holds on every sample, or
/// `None` with fewer than two distinct lengths.
pub fn fit_chi_growth(spectrum: &LengthSpectrum) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = spectrum
        .hyperbolic()
        .filter(|r| r.tr_chi.norm() > 0.0)
        .map(|r| (r.length, r.tr_chi.norm().ln()))
        .collect();
    let k = least_squares_slope(&pts)?.max(0.0);
    let log_k = pts.iter().map(|(x, y)| y - k * x).fold(f64::NEG_INFINITY, f64::max);
    Some((log_k.exp(), k))
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 1e-12 * (1.0 + mx * mx) {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn angles(a: f64) -> EllipticAngles {
        EllipticAngles::new(vec![a]).unwrap()
    }

    fn sample() -> LengthSpectrum {
        let mut amb = ConjClassRecord::hyperbolic(2.5, angles(0.7), 1, Complex64::new(0.5, -1.0 / 3.0), 0.5)
            .with_word(vec![1, -2]);
        amb.ambiguous = true;
        LengthSpectrum::new(
            SpectrumMeta {
                spec_hash: "abc".into(),
                cutoff: 3.0,
                max_word_len: 4,
            },
            vec![
                ConjClassRecord::hyperbolic(2.0, angles(0.0), 2, Complex64::new(1.0, 0.0), 1.0).with_word(vec![1, 1]),
                amb,
                ConjClassRecord::elliptic(angles(2.0 * PI / 3.0), Complex64::new(1.0, 0.0)).with_word(vec![2]),
                ConjClassRecord::hyperbolic(0.1 + 0.2, angles(PI), 1, Complex64::new(1.0, 0.0), 1.0),
            ],
        )
    }

    #[test]
    fn canonical_order() {
        let s = sample();
        let kinds: Vec<_> = s.records().iter().map(|r| r.kind).collect();
        assert_eq!(kinds[0], ElementKind::Elliptic);
        let lengths: Vec<_> = s.hyperbolic().map(|r| r.length).collect();
        assert_eq!(lengths, vec![0.1 + 0.2, 2.0, 2.5]);
    }

    #[test]
    fn csv_round_trip_is_bitwise() {
        let s = sample();
        let text = s.to_csv_string();
        assert!(text
            .lines()
            .any(|l| l == "kind,l,l0,power,theta,D,v,re_trchi,im_trchi,word"));
        let back = LengthSpectrum::from_csv_str(&text).unwrap();
        assert_eq!(back, s);
        for (a, b) in back.records().iter().zip(s.records()) {
            assert_eq!(a.length.to_bits(), b.length.to_bits());
            assert_eq!(a.tr_chi.im.to_bits(), b.tr_chi.im.to_bits());
            assert_eq!(a.d_gamma.map(f64::to_bits), b.d_gamma.map(f64::to_bits));
        }
        assert_eq!(back.to_csv_string(), text);
        assert_eq!(back.ambiguous_count(), 1);
    }

    #[test]
    fn csv_rejects_broken_rows() {
        let bad = "kind,l,l0,power,theta,D,v,re_trchi,im_trchi,word\nhyperbolic,1,1,2,0,1,1,1,0,\n";
        assert!(LengthSpectrum::from_csv_str(bad).is_err());
        let bad_kind = "kind,l,l0,power,theta,D,v,re_trchi,im_trchi,word\nloxodromic,1,1,1,0,1,1,1,0,\n";
        assert!(LengthSpectrum::from_csv_str(bad_kind).is_err());
    }

    #[test]
    fn weight_d_examples() {
        let r = ConjClassRecord::hyperbolic(2.0, angles(0.0), 1, Complex64::new(1.0, 0.0), 1.0);
        assert!((weight_D(&r, 1).unwrap() - 5.524392).abs() < 1e-6);
        let r = ConjClassRecord::hyperbolic(1.0, angles(PI), 1, Complex64::new(1.0, 0.0), 1.0);
        assert!((weight_D(&r, 1).unwrap() - (E + 2.0 + 1.0 / E)).abs() < 1e-14);
        assert!(weight_D(&r, 2).is_err());
        let e = ConjClassRecord::elliptic(angles(1.0), Complex64::new(1.0, 0.0));
        assert!(weight_D(&e, 1).is_err());
    }

    #[test]
    fn truncate_and_concat() {
        let s = sample();
        let t = s.truncated(2.2);
        assert_eq!(t.hyperbolic().count(), 2);
        assert_eq!(t.elliptic().count(), 1);
        assert_eq!(s.concat(&LengthSpectrum::empty(1.0)).records(), s.records());
    }

    #[test]
    fn chi_growth() {
        let recs = (1..=6)
            .map(|m| {
                let l = m as f64;
                ConjClassRecord::hyperbolic(l, angles(0.0), 1, Complex64::new(3.0 * (0.5 * l).exp(), 0.0), 1.0)
            })
            .collect();
        let s = LengthSpectrum::new(sample().meta, recs);
        let (big_k, k) = fit_chi_growth(&s).unwrap();
        assert!((k - 0.5).abs() < 1e-12);
        assert!((big_k - 3.0).abs() < 1e-10);
    }
}
