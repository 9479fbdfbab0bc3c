use std::collections::HashMap;

use rayon::prelude::*;

use super::group::{letter_matrix, Word};
use super::matrix::{Mat2, MATRIX_TOL};
use crate::{Error, Result};

/// Quantization step of the hash grid.
pub const HASH_GRID: f64 = 1e-7;
pub const DEFAULT_WORD_LIMIT: usize = 14;
pub const DEFAULT_ELEMENT_CAP: usize = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub word_limit: usize,
    pub element_cap: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            word_limit: DEFAULT_WORD_LIMIT,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: Mat2,
    pub word: Word,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            matrix: Mat2::identity(),
            word: Word::new(),
        }
    }
}

// Fixed irrational weights so that the scalar key separates entries.
const KEY_WEIGHTS: [f64; 8] = [
    1.0,
    0.618_033_988_749_894_9,
    0.414_213_562_373_095,
    0.302_775_637_731_994_6,
    0.236_067_977_499_789_7,
    0.192_582_403_567_252,
    0.162_277_660_168_379_5,
    0.140_054_944_640_259_1,
];

fn scalar_key(m: &Mat2) -> f64 {
    m.entries()
        .iter()
        .flat_map(|z| [z.re, z.im])
        .zip(KEY_WEIGHTS)
        .map(|(x, w)| x * w)
        .sum()
}

/// Hash index over matrices, identifying `g` with `-g`.
///
/// Keys are a weighted sum of the entries on a `1e-7` grid; a lookup probes
/// the neighbouring buckets for both signs and confirms with an entrywise
/// comparison, so grid-boundary effects never split an element.
#[derive(Debug, Clone, Default)]
pub struct ElementIndex {
    buckets: HashMap<i64, Vec<usize>>,
    matrices: Vec<Mat2>,
}

impl ElementIndex {
    pub fn new() -> Self {
        Self::default()
    }

    fn bucket(key: f64) -> i64 {
        (key / HASH_GRID).floor() as i64
    }

    pub fn find(&self, m: &Mat2) -> Option<usize> {
        let k = scalar_key(m);
        for key in [k, -k] {
            let b = Self::bucket(key);
            for probe in b - 1..=b + 1 {
                if let Some(ids) = self.buckets.get(&probe) {
                    if let Some(&id) = ids.iter().find(|&&id| self.matrices[id].projectively_eq(m, MATRIX_TOL)) {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    /// Inserts `m` unless already present; returns its id and whether it was new.
    pub fn insert(&mut self, m: Mat2) -> (usize, bool) {
        if let Some(id) = self.find(&m) {
            return (id, false);
        }
        let id = self.matrices.len();
        self.matrices.push(m);
        self.buckets.entry(Self::bucket(scalar_key(&m))).or_default().push(id);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// Ball of radius `max_word_len` in the Cayley graph of `gens`.
#[derive(Debug, Clone)]
pub struct WordBall {
    pub elements: Vec<GroupElement>,
    pub index: ElementIndex,
    pub radius: usize,
}

impl WordBall {
    pub fn enumerate(gens: &[Mat2], max_word_len: usize, limits: EnumerationLimits) -> Result<Self> {
        if max_word_len > limits.word_limit {
            return Err(Error::Invalid(format!(
                "max word length {max_word_len} exceeds the limit {}",
                limits.word_limit
            )));
        }
        let letters: Vec<i32> = (1..=gens.len() as i32).flat_map(|k| [k, -k]).collect();
        let letter_mats: Vec<Mat2> = letters.iter().map(|&l| letter_matrix(gens, l)).collect();

        let mut elements = vec![GroupElement::identity()];
        let mut index = ElementIndex::new();
        index.insert(Mat2::identity());
        let mut frontier = vec![0usize];

        for level in 1..=max_word_len {
            if frontier.is_empty() {
                break;
            }
            // Products are formed in parallel; insertion stays sequential in
            // frontier-then-letter order, which keeps words shortlex-minimal
            // and the output independent of the thread count.
            let candidates: Vec<(usize, usize, Mat2)> = frontier
                .par_iter()
                .flat_map_iter(|&id| {
                    let el = &elements[id];
                    let last = el.word.last().copied();
                    letters
                        .iter()
                        .zip(&letter_mats)
                        .enumerate()
                        .filter(move |(_, (&l, _))| last != Some(-l))
                        .map(move |(li, (_, &lm))| (id, li, el.matrix * lm))
                })
                .collect();
            let mut next = Vec::new();
            for (parent, li, m) in candidates {
                let (id, fresh) = index.insert(m);
                if fresh {
                    let mut word = elements[parent].word.clone();
                    word.push(letters[li]);
                    elements.push(GroupElement { matrix: m, word });
                    next.push(id);
                    if elements.len() > limits.element_cap {
                        return Err(Error::Explosion(limits.element_cap));
                    }
                }
            }
            log::debug!("level {level}: {} new elements", next.len());
            frontier = next;
        }
        Ok(Self {
            elements,
            index,
            radius: max_word_len,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn find(&self, m: &Mat2) -> Option<usize> {
        self.index.find(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn hyperbolic(c: f64) -> Mat2 {
        Mat2::diag(Complex64::new((c / 2.0).exp(), 0.0))
    }

    #[test]
    fn cyclic_ball() {
        let ball = WordBall::enumerate(&[hyperbolic(1.0)], 3, EnumerationLimits::default()).unwrap();
        assert_eq!(ball.len(), 7);
        let words: Vec<_> = ball.elements.iter().map(|e| e.word.clone()).collect();
        assert_eq!(
            words,
            vec![
                vec![],
                vec![1],
                vec![-1],
                vec![1, 1],
                vec![-1, -1],
                vec![1, 1, 1],
                vec![-1, -1, -1]
            ]
        );
    }

    #[test]
    fn empty_generators() {
        let ball = WordBall::enumerate(&[], 5, EnumerationLimits::default()).unwrap();
        assert_eq!(ball.len(), 1);
        assert_eq!(ball.elements[0], GroupElement::identity());
    }

    #[test]
    fn sign_is_identified() {
        // An order-2 rotation squares to -I, which is the identity projectively.
        let r = Mat2::real(0.0, -1.0, 1.0, 0.0);
        let ball = WordBall::enumerate(&[r], 4, EnumerationLimits::default()).unwrap();
        assert_eq!(ball.len(), 2);
    }

    #[test]
    fn guards() {
        let g = [hyperbolic(1.0), Mat2::real(2.0, 1.0, 1.0, 1.0)];
        let limits = EnumerationLimits {
            word_limit: 14,
            element_cap: 50,
        };
        assert!(matches!(WordBall::enumerate(&g, 6, limits), Err(Error::Explosion(50))));
        assert!(WordBall::enumerate(&g, 15, EnumerationLimits::default()).is_err());
    }

    #[test]
    fn index_handles_bucket_edges() {
        let mut idx = ElementIndex::new();
        let m = Mat2::real(1.0, 0.3, 0.0, 1.0);
        idx.insert(m);
        let nudged = Mat2::real(1.0 + 3e-10, 0.3, 0.0, 1.0);
        assert_eq!(idx.find(&nudged), Some(0));
        assert_eq!(idx.find(&-nudged), Some(0));
        assert_eq!(idx.find(&Mat2::real(1.0, 0.31, 0.0, 1.0)), None);
    }
}
