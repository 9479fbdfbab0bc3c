use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::matrix::Mat2;
use crate::{Error, Result};

pub const DET_TOL: f64 = 1e-10;
pub const MAX_CHI_CONDITION: f64 = 1e12;

/// A word in the generators. Letter `k > 0` is generator `k - 1`, letter
/// `-k` its inverse.
pub type Word = Vec<i32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "H2-real-2x2")]
    H2Real,
    #[serde(rename = "H3-complex-2x2")]
    H3Complex,
}

impl Model {
    /// Rank of the compact part seen by the zeta module (`n` with `ℍ^{2n+1}`).
    pub fn rank(self) -> Option<usize> {
        match self {
            Model::H2Real => None,
            Model::H3Complex => Some(1),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::H2Real => "H2-real-2x2",
            Model::H3Complex => "H3-complex-2x2",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H2-real-2x2" | "h2" => Ok(Model::H2Real),
            "H3-complex-2x2" | "h3" => Ok(Model::H3Complex),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}

/// Matrix entry in the spec file: a bare real or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for Entry {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupFile {
    words: Vec<Word>,
    index: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChiFile {
    dim: usize,
    images: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    model: Model,
    generators: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torsion_free_subgroup: Option<SubgroupFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<ChiFile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionFreeSubgroup {
    pub words: Vec<Word>,
    pub index: u64,
}

/// Finite-dimensional representation of the group, given on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiRep {
    dim: usize,
    images: Vec<DMatrix<Complex64>>,
    inverses: Vec<DMatrix<Complex64>>,
}

impl ChiRep {
    pub fn new(images: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let dim = images.first().map_or(1, |m| m.nrows());
        let mut inverses = Vec::with_capacity(images.len());
        for (k, m) in images.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Invalid(format!("chi image {k} is not {dim}x{dim}")));
            }
            let svd = m.clone().svd(false, false);
            let smax = svd.singular_values.max();
            let smin = svd.singular_values.min();
            if !(smin > 0.0) || smax / smin > MAX_CHI_CONDITION {
                return Err(Error::Invalid(format!("chi image {k} is not invertible")));
            }
            let inv = m
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Invalid(format!("chi image {k} is not invertible")))?;
            inverses.push(inv);
        }
        Ok(Self { dim, images, inverses })
    }

    pub fn trivial(generators: usize) -> Self {
        let one = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        Self {
            dim: 1,
            images: vec![one.clone(); generators],
            inverses: vec![one; generators],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn letter(&self, letter: i32) -> &DMatrix<Complex64> {
        let k = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            &self.images[k]
        } else {
            &self.inverses[k]
        }
    }

    pub fn evaluate(&self, word: &[i32]) -> DMatrix<Complex64> {
        let mut acc = DMatrix::identity(self.dim, self.dim);
        for &l in word {
            acc *= self.letter(l);
        }
        acc
    }

    pub fn trace(&self, word: &[i32]) -> Complex64 {
        self.evaluate(word).trace()
    }
}

/// A finitely generated discrete group of isometries together with the
/// optional torsion-free subgroup and representation.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    model: Model,
    generators: Vec<Mat2>,
    subgroup: Option<TorsionFreeSubgroup>,
    chi: Option<ChiRep>,
    hash: String,
}

impl GroupSpec {
    pub fn new(model: Model, generators: Vec<Mat2>) -> Result<Self> {
        Self::build(model, generators, None, None)
    }

    pub fn with_subgroup(mut self, words: Vec<Word>, index: u64) -> Result<Self> {
        self = Self::build(
            self.model,
            self.generators,
            Some(TorsionFreeSubgroup { words, index }),
            self.chi,
        )?;
        Ok(self)
    }

    pub fn with_chi(mut self, chi: ChiRep) -> Result<Self> {
        self = Self::build(self.model, self.generators, self.subgroup, Some(chi))?;
        Ok(self)
    }

    fn build(
        model: Model,
        generators: Vec<Mat2>,
        subgroup: Option<TorsionFreeSubgroup>,
        chi: Option<ChiRep>,
    ) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            let det = g.det();
            if (det - 1.0).norm() >= DET_TOL {
                return Err(Error::Invalid(format!(
                    "generator {k} has determinant {det}, expected 1"
                )));
            }
            if model == Model::H2Real && !g.is_real(0.0) {
                return Err(Error::Invalid(format!(
                    "generator {k} is not real in the {model} model"
                )));
            }
        }
        let check_word = |w: &Word| -> Result<()> {
            match w
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > generators.len())
            {
                Some(l) => Err(Error::Invalid(format!("word letter {l} out of range"))),
                None => Ok(()),
            }
        };
        if let Some(sub) = &subgroup {
            if sub.index == 0 {
                return Err(Error::Invalid("subgroup index must be positive".into()));
            }
            sub.words.iter().try_for_each(check_word)?;
        }
        if let Some(chi) = &chi {
            if chi.images.len() != generators.len() {
                return Err(Error::Invalid(format!(
                    "chi has {} images for {} generators",
                    chi.images.len(),
                    generators.len()
                )));
            }
        }
        let mut spec = Self {
            model,
            generators,
            subgroup,
            chi,
            hash: String::new(),
        };
        let canonical = toml::to_string(&spec.to_file()).map_err(|e| Error::Invalid(e.to_string()))?;
        spec.hash = hex::encode(Sha256::digest(canonical.as_bytes()));
        Ok(spec)
    }

    fn to_file(&self) -> SpecFile {
        let entries = |m: &Mat2| m.entries().iter().map(|&z| Entry::from(z)).collect();
        SpecFile {
            model: self.model,
            generators: self.generators.iter().map(entries).collect(),
            torsion_free_subgroup: self.subgroup.as_ref().map(|s| SubgroupFile {
                words: s.words.clone(),
                index: s.index,
            }),
            chi: self.chi.as_ref().map(|c| ChiFile {
                dim: c.dim,
                images: c
                    .images
                    .iter()
                    // row-major, as in the file format
                    .map(|m| m.transpose().iter().map(|&z| Entry::from(z)).collect())
                    .collect(),
            }),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: SpecFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let generators = file
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| match g.as_slice() {
                [a, b, c, d] => Ok(Mat2::new((*a).into(), (*b).into(), (*c).into(), (*d).into())),
                _ => Err(Error::Parse(format!("generator {k} must have 4 entries"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let chi = match file.chi {
            None => None,
            Some(c) => {
                let images = c
                    .images
                    .iter()
                    .enumerate()
                    .map(|(k, m)| {
                        if m.len() != c.dim * c.dim {
                            return Err(Error::Parse(format!(
                                "chi image {k} must have {} entries",
                                c.dim * c.dim
                            )));
                        }
                        Ok(DMatrix::from_row_iterator(
                            c.dim,
                            c.dim,
                            m.iter().map(|&e| Complex64::from(e)),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(ChiRep::new(images)?)
            }
        };
        let subgroup = file.torsion_free_subgroup.map(|s| TorsionFreeSubgroup {
            words: s.words,
            index: s.index,
        });
        Self::build(file.model, generators, subgroup, chi)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_file()).expect("spec serializes")
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn subgroup(&self) -> Option<&TorsionFreeSubgroup> {
        self.subgroup.as_ref()
    }

    pub fn chi(&self) -> Option<&ChiRep> {
        self.chi.as_ref()
    }

    pub fn chi_dim(&self) -> usize {
        self.chi.as_ref().map_or(1, ChiRep::dim)
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn letter(&self, letter: i32) -> Mat2 {
        letter_matrix(&self.generators, letter)
    }

    pub fn evaluate(&self, word: &[i32]) -> Mat2 {
        evaluate_word(&self.generators, word)
    }

    pub fn tr_chi(&self, word: &[i32]) -> Complex64 {
        match &self.chi {
            Some(chi) => chi.trace(word),
            None => Complex64::new(1.0, 0.0),
        }
    }
}

pub(crate) fn letter_matrix(gens: &[Mat2], letter: i32) -> Mat2 {
    let g = gens[letter.unsigned_abs() as usize - 1];
    if letter > 0 {
        g
    } else {
        g.inv_unimodular()
    }
}

pub fn evaluate_word(gens: &[Mat2], word: &[i32]) -> Mat2 {
    word.iter()
        .fold(Mat2::identity(), |acc, &l| acc * letter_matrix(gens, l))
}

pub fn format_word(word: &[i32]) -> String {
    word.iter().map(i32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_word(s: &str) -> Result<Word> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<i32>()
                .ok()
                .filter(|&l| l != 0)
                .ok_or_else(|| Error::Parse(format!("bad word letter `{t}`")))
        })
        .collect()
}
