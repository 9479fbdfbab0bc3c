use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use super::classify::{angle_distance, classify, elliptic_order, Classification, ElementKind};
use super::enumerate::{EnumerationLimits, GroupElement, WordBall};
use super::group::{format_word, GroupSpec, Model, TorsionFreeSubgroup};
use super::matrix::{Mat2, MATRIX_TOL};
use super::spectrum::{fit_chi_growth, ConjClassRecord, LengthSpectrum, SpectrumMeta};
use crate::lie::EllipticAngles;
use crate::{Error, Result};

/// Tolerance for equal class invariants `(l, θ)`.
pub const INVARIANT_TOL: f64 = 1e-8;
const POWER_MATCH_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ELLIPTIC_ORDER: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub max_word_len: usize,
    pub cutoff: f64,
    /// Word-length radius of the conjugator set; defaults to half the ball.
    pub conjugator_radius: Option<usize>,
    pub limits: EnumerationLimits,
    pub max_elliptic_order: u32,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            max_word_len: 8,
            cutoff: 5.0,
            conjugator_radius: None,
            limits: EnumerationLimits::default(),
            max_elliptic_order: DEFAULT_MAX_ELLIPTIC_ORDER,
        }
    }
}

/// Index ratio `[Γ_γ : Γ'_γ]` found inside the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralizerIndex {
    pub index: u64,
    /// True when no torsion-free subgroup was given and the index defaulted to 1.
    pub defaulted: bool,
}

impl CentralizerIndex {
    /// `v(γ) = vol(Γ_γ∖G_γ) / vol(Γ'_γ∖G_γ)`.
    pub fn v(&self) -> f64 {
        1.0 / self.index as f64
    }
}

#[derive(Debug, Clone)]
struct SubgroupData {
    index: u64,
    labels: Vec<usize>,
    certified: bool,
}

impl SubgroupData {
    // Labels the left cosets hΓ' met by the ball: h and hk are joined for
    // every generator k of Γ'. With m = [Γ:Γ'] every coset has a
    // representative of length ≤ m - 1, so exactly m components certify
    // that components and cosets agree.
    fn build(spec: &GroupSpec, ball: &WordBall, sub: &TorsionFreeSubgroup) -> Self {
        let steps: Vec<Mat2> = sub
            .words
            .iter()
            .map(|w| spec.evaluate(w))
            .flat_map(|g| [g, g.inv_unimodular()])
            .collect();
        let edges: Vec<(usize, usize)> = ball
            .elements
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, e)| {
                steps
                    .iter()
                    .filter_map(move |k| ball.find(&(e.matrix * *k)).map(|j| (i, j)))
            })
            .collect();
        let mut uf = UnionFind::<usize>::new(ball.len());
        for (i, j) in edges {
            uf.union(i, j);
        }
        let raw = uf.into_labeling();
        let mut compact = HashMap::new();
        let labels: Vec<usize> = raw
            .iter()
            .map(|r| {
                let next = compact.len();
                *compact.entry(*r).or_insert(next)
            })
            .collect();
        let components = compact.len() as u64;
        let certified = components == sub.index && ball.radius as u64 + 1 >= sub.index;
        if !certified {
            log::warn!(
                "coset labelling found {components} components for index {} at radius {}",
                sub.index,
                ball.radius
            );
        }
        Self {
            index: sub.index,
            labels,
            certified,
        }
    }

    fn is_member(&self, id: usize) -> bool {
        self.labels[id] == self.labels[0]
    }
}

/// The enumerated ball of a group with per-element classification.
#[derive(Debug, Clone)]
pub struct EnumeratedGroup<'a> {
    spec: &'a GroupSpec,
    ball: WordBall,
    classes: Vec<Classification>,
    subgroup: Option<SubgroupData>,
}

impl<'a> EnumeratedGroup<'a> {
    pub fn new(spec: &'a GroupSpec, max_word_len: usize, limits: EnumerationLimits) -> Result<Self> {
        let ball = WordBall::enumerate(spec.generators(), max_word_len, limits)?;
        let classes = ball
            .elements
            .par_iter()
            .map(|e| {
                classify(&e.matrix, spec.model()).map_err(|err| match err {
                    Error::Parabolic(tr) => Error::Parabolic(format!("{tr}, word `{}`", format_word(&e.word))),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let subgroup = spec.subgroup().map(|s| SubgroupData::build(spec, &ball, s));
        Ok(Self {
            spec,
            ball,
            classes,
            subgroup,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        self.spec
    }

    pub fn ball(&self) -> &WordBall {
        &self.ball
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.ball.elements
    }

    pub fn classification(&self, id: usize) -> &Classification {
        &self.classes[id]
    }

    /// Whether the element lies in the torsion-free subgroup, as far as the
    /// coset labelling can tell.
    pub fn in_subgroup(&self, id: usize) -> Option<bool> {
        self.subgroup.as_ref().map(|s| s.is_member(id))
    }

    /// `[Γ_γ : Γ'_γ]` for the element `id`, counted as the number of cosets of
    /// `Γ'` met by centralizer elements in the ball.
    pub fn centralizer_index(&self, id: usize) -> Result<CentralizerIndex> {
        let Some(sub) = &self.subgroup else {
            return Ok(CentralizerIndex {
                index: 1,
                defaulted: true,
            });
        };
        let word = format_word(&self.ball.elements[id].word);
        if !sub.certified {
            return Err(Error::UndeterminedV { word, lower_bound: 1 });
        }
        let g = self.ball.elements[id].matrix;
        let small_radius = (2 * self.ball.radius).div_ceil(3);
        let centralizer: Vec<(usize, usize)> = self
            .ball
            .elements
            .par_iter()
            .enumerate()
            .filter(|(_, h)| (h.matrix * g).projectively_eq(&(g * h.matrix), MATRIX_TOL))
            .map(|(j, h)| (sub.labels[j], h.word.len()))
            .collect();
        let found: BTreeSet<usize> = centralizer.iter().map(|c| c.0).collect();
        let found_small: BTreeSet<usize> = centralizer
            .iter()
            .filter(|c| c.1 <= small_radius)
            .map(|c| c.0)
            .collect();
        let count = found.len() as u64;
        if count == sub.index || found_small.len() == found.len() {
            Ok(CentralizerIndex {
                index: count,
                defaulted: false,
            })
        } else {
            Err(Error::UndeterminedV {
                word,
                lower_bound: count,
            })
        }
    }

    /// Groups elliptic elements and hyperbolic elements with `l ≤ cutoff`
    /// into conjugacy classes by explicit conjugation inside the ball.
    pub fn conjugacy_reduce(&self, cutoff: f64, options: &SpectrumOptions) -> Result<Vec<ConjClassRecord>> {
        if self.subgroup.is_none() {
            log::warn!("no torsion-free subgroup given; v(γ) defaults to 1");
        }
        let n = self.ball.len();
        let candidate: Vec<bool> = self
            .classes
            .iter()
            .map(|c| match c.kind {
                ElementKind::Elliptic => true,
                ElementKind::Hyperbolic => c.length <= cutoff + INVARIANT_TOL,
                ElementKind::Identity => false,
            })
            .collect();
        let ids: Vec<usize> = (0..n).filter(|&i| candidate[i]).collect();
        let radius = options
            .conjugator_radius
            .unwrap_or(self.ball.radius.div_ceil(2))
            .min(self.ball.radius);
        let conjugators: Vec<Mat2> = self
            .ball
            .elements
            .iter()
            .filter(|e| !e.word.is_empty() && e.word.len() <= radius)
            .map(|e| e.matrix)
            .collect();

        let edges: Vec<(usize, Vec<usize>)> = ids
            .par_iter()
            .map(|&i| {
                let g = self.ball.elements[i].matrix;
                let mut js: Vec<usize> = conjugators
                    .iter()
                    .filter_map(|h| self.ball.find(&g.conjugate_by(h)))
                    .filter(|&j| j != i && candidate[j])
                    .collect();
                js.sort_unstable();
                js.dedup();
                (i, js)
            })
            .collect();
        let mut uf = UnionFind::<usize>::new(n);
        for (i, js) in &edges {
            for &j in js {
                uf.union(*i, j);
            }
        }

        // Components in order of their minimal element, which is the
        // shortlex-first word because the ball is stored in that order.
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        let mut witnesses = Vec::new();
        let mut root_class = HashMap::new();
        for &i in &ids {
            let root = uf.find(i);
            let c = *root_class.entry(root).or_insert_with(|| {
                witnesses.push(i);
                witnesses.len() - 1
            });
            class_of[i] = Some(c);
        }

        let mut hyperbolic: Vec<(f64, usize)> = (0..n)
            .filter(|&i| self.classes[i].kind == ElementKind::Hyperbolic)
            .map(|i| (self.classes[i].length, i))
            .collect();
        hyperbolic.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut records = witnesses
            .par_iter()
            .enumerate()
            .map(|(c, &w)| self.build_record(c, w, &class_of, &hyperbolic, options))
            .collect::<Result<Vec<_>>>()?;
        flag_ambiguous(&mut records);
        Ok(records)
    }

    fn build_record(
        &self,
        class: usize,
        witness: usize,
        class_of: &[Option<usize>],
        hyperbolic: &[(f64, usize)],
        options: &SpectrumOptions,
    ) -> Result<ConjClassRecord> {
        let el = &self.ball.elements[witness];
        let cl = &self.classes[witness];
        let angles = EllipticAngles::new(vec![cl.angle])?;
        let tr_chi = self.spec.tr_chi(&el.word);
        match cl.kind {
            ElementKind::Elliptic => {
                if elliptic_order(&el.matrix, options.max_elliptic_order).is_none() {
                    return Err(Error::InfiniteOrder(format!("`{}`", format_word(&el.word))));
                }
                Ok(ConjClassRecord::elliptic(angles, tr_chi).with_word(el.word.clone()))
            }
            ElementKind::Hyperbolic => {
                let in_sub = match &self.subgroup {
                    Some(sub) if sub.is_member(witness) => Some(sub),
                    Some(_) => {
                        log::warn!(
                            "class `{}` is not in the torsion-free subgroup; its power is taken in the full group",
                            format_word(&el.word)
                        );
                        None
                    }
                    None => None,
                };
                let power = self.root_power(class, witness, class_of, hyperbolic, |id| {
                    in_sub.is_none_or(|s| s.is_member(id))
                });
                let v = self.centralizer_index(witness)?.v();
                let mut record =
                    ConjClassRecord::hyperbolic(cl.length, angles, power, tr_chi, v).with_word(el.word.clone());
                if self.spec.model() == Model::H2Real {
                    record.d_gamma = Some(2.0 * (cl.length / 2.0).sinh());
                }
                Ok(record)
            }
            ElementKind::Identity => unreachable!("identity is never a candidate"),
        }
    }

    // Largest m such that some δ in the ball has δ^m in this class.
    fn root_power(
        &self,
        class: usize,
        witness: usize,
        class_of: &[Option<usize>],
        hyperbolic: &[(f64, usize)],
        allowed: impl Fn(usize) -> bool,
    ) -> u32 {
        let l = self.classes[witness].length;
        let Some(&(l_min, _)) = hyperbolic.first() else {
            return 1;
        };
        let max_m = (l / l_min + POWER_MATCH_TOL).floor() as u32;
        let tol = POWER_MATCH_TOL * (1.0 + l);
        for m in (2..=max_m).rev() {
            let target = l / m as f64;
            let start = hyperbolic.partition_point(|p| p.0 < target - tol);
            let hit = hyperbolic[start..]
                .iter()
                .take_while(|p| p.0 <= target + tol)
                .filter(|p| allowed(p.1))
                .any(|&(_, d)| {
                    let pow = self.ball.elements[d].matrix.pow(m);
                    self.ball.find(&pow).is_some_and(|j| class_of[j] == Some(class))
                });
            if hit {
                return m;
            }
        }
        1
    }
}

// Marks pairs of classes with equal invariants; for elliptic classes the
// angle is compared up to orientation.
fn flag_ambiguous(records: &mut [ConjClassRecord]) {
    let n = records.len();
    let mut flags = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&records[i], &records[j]);
            if a.kind != b.kind || (a.length - b.length).abs() > INVARIANT_TOL * (1.0 + a.length) {
                continue;
            }
            let (x, y) = (a.angles.angles()[0], b.angles.angles()[0]);
            let same = match a.kind {
                ElementKind::Elliptic => angle_distance(x, y).min(angle_distance(x, -y)) < INVARIANT_TOL,
                _ => angle_distance(x, y) < INVARIANT_TOL,
            };
            if same {
                flags[i] = true;
                flags[j] = true;
            }
        }
    }
    for (r, f) in records.iter_mut().zip(flags) {
        r.ambiguous = f;
    }
}

/// All distinct elements of word length at most `max_word_len`.
pub fn enumerate_elements(spec: &GroupSpec, max_word_len: usize) -> Result<Vec<GroupElement>> {
    Ok(WordBall::enumerate(spec.generators(), max_word_len, EnumerationLimits::default())?.elements)
}

pub fn compute_length_spectrum(spec: &GroupSpec, options: &SpectrumOptions) -> Result<LengthSpectrum> {
    if !(options.cutoff > 0.0) {
        return Err(Error::Invalid(format!("cutoff {} must be positive", options.cutoff)));
    }
    let group = EnumeratedGroup::new(spec, options.max_word_len, options.limits)?;
    let records = group.conjugacy_reduce(options.cutoff, options)?;
    let spectrum = LengthSpectrum::new(
        SpectrumMeta {
            spec_hash: spec.hash().to_string(),
            cutoff: options.cutoff,
            max_word_len: options.max_word_len,
        },
        records,
    );
    log::info!(
        "{} elements, {} hyperbolic and {} elliptic classes, {} ambiguous",
        group.ball().len(),
        spectrum.hyperbolic().count(),
        spectrum.elliptic().count(),
        spectrum.ambiguous_count()
    );
    if let Some((big_k, k)) = fit_chi_growth(&spectrum) {
        log::info!("tr χ growth fit: K = {big_k:.4e}, k = {k:.4}");
    }
    Ok(spectrum)
}
