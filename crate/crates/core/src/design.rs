//! Directed block designs and directed group divisible designs.
//!
//! A design is a collection of ordered k-tuples (blocks) over `{0, .., v-1}`.
//! Every ordered pair of distinct elements taken in block order must appear in
//! exactly `lambda` blocks; when a group partition is present, pairs inside a
//! group must appear in none. Designs are given either as explicit block lists
//! or as base blocks plus a cyclic developer.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::block_label;

/// An ordered block of `k` distinct elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub id: usize,
    pub elements: Vec<usize>,
}

impl Block {
    pub fn label(&self) -> String {
        block_label(&self.elements)
    }

    /// Ordered element pairs covered by this block (position order).
    pub fn ordered_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let e = &self.elements;
        (0..e.len()).flat_map(move |i| (i + 1..e.len()).map(move |j| (e[i], e[j])))
    }
}

/// Base blocks developed by adding `0, step, 2*step, ..` modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Developer {
    pub base_blocks: Vec<Vec<usize>>,
    pub modulus: usize,
    pub step: usize,
}

/// Develops the base blocks. Ids are assigned base-block major, shift minor.
pub fn develop(dev: &Developer) -> Result<Vec<Block>> {
    if dev.modulus == 0 || dev.step == 0 {
        return Err(Error::InvalidDesign(
            "developer modulus and step must be positive".into(),
        ));
    }
    let mut blocks = Vec::new();
    // shifts 0, t, 2t, .. up to x - t: floor(x / t) blocks per base block
    let shifts = dev.modulus / dev.step;
    for (bi, base) in dev.base_blocks.iter().enumerate() {
        for j in 0..shifts {
            let shift = j * dev.step;
            let elements: Vec<usize> = base.iter().map(|&x| (x + shift) % dev.modulus).collect();
            let mut sorted = elements.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedElements {
                    base_index: bi,
                    shift,
                });
            }
            blocks.push(Block {
                id: blocks.len(),
                elements,
            });
        }
    }
    Ok(blocks)
}

/// A directed design, possibly group divisible, possibly developed.
#[derive(Debug, Clone)]
pub struct Design {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub groups: Option<Vec<Vec<usize>>>,
    pub blocks: Vec<Block>,
    pub developer: Option<Developer>,
}

impl Design {
    pub fn explicit(
        v: usize,
        k: usize,
        lambda: usize,
        groups: Option<Vec<Vec<usize>>>,
        block_lists: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let blocks = block_lists
            .into_iter()
            .enumerate()
            .map(|(id, elements)| Block { id, elements })
            .collect();
        let d = Design {
            v,
            k,
            lambda,
            groups,
            blocks,
            developer: None,
        };
        d.check_shape()?;
        Ok(d)
    }

    pub fn developed(
        v: usize,
        k: usize,
        lambda: usize,
        groups: Option<Vec<Vec<usize>>>,
        developer: Developer,
    ) -> Result<Self> {
        let blocks = develop(&developer)?;
        let d = Design {
            v,
            k,
            lambda,
            groups,
            blocks,
            developer: Some(developer),
        };
        d.check_shape()?;
        Ok(d)
    }

    /// Structural validation: element ranges, block sizes, group partition.
    fn check_shape(&self) -> Result<()> {
        for b in &self.blocks {
            if b.elements.len() != self.k {
                return Err(Error::InvalidDesign(format!(
                    "block {} has {} elements, expected k = {}",
                    b.id,
                    b.elements.len(),
                    self.k
                )));
            }
            let mut sorted = b.elements.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidDesign(format!(
                    "block {} has repeated elements",
                    b.id
                )));
            }
            if let Some(&max) = sorted.last() {
                if max >= self.v {
                    return Err(Error::InvalidDesign(format!(
                        "block {} contains element {} >= v = {}",
                        b.id, max, self.v
                    )));
                }
            }
        }
        if let Some(groups) = &self.groups {
            let mut seen = vec![false; self.v];
            for g in groups {
                for &x in g {
                    if x >= self.v {
                        return Err(Error::InvalidDesign(format!(
                            "group element {} >= v = {}",
                            x, self.v
                        )));
                    }
                    if std::mem::replace(&mut seen[x], true) {
                        return Err(Error::InvalidDesign(format!(
                            "element {x} appears in two groups"
                        )));
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidDesign(
                    "groups do not partition the point set".into(),
                ));
            }
        }
        Ok(())
    }

    /// Membership of within-group ordered pairs, as a lookup table.
    fn in_group_table(&self) -> Vec<bool> {
        let mut t = vec![false; self.v * self.v];
        if let Some(groups) = &self.groups {
            for g in groups {
                for &x in g {
                    for &y in g {
                        if x != y {
                            t[x * self.v + y] = true;
                        }
                    }
                }
            }
        }
        t
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Parses the design file format (TOML). Unknown fields are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: DesignFile =
            toml::from_str(text).map_err(|e| Error::DesignFile(e.to_string()))?;
        file.into_design()
    }

    pub fn to_toml_string(&self) -> String {
        let file = DesignFile {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            groups: self.groups.clone(),
            blocks: match &self.developer {
                Some(_) => None,
                None => Some(self.blocks.iter().map(|b| b.elements.clone()).collect()),
            },
            base_blocks: self.developer.as_ref().map(|d| d.base_blocks.clone()),
            modulus: self.developer.as_ref().map(|d| d.modulus),
            step: self.developer.as_ref().map(|d| d.step),
        };
        toml::to_string(&file).expect("design serialization cannot fail")
    }
}

/// On-disk design schema. Exactly one of `blocks` or `base_blocks` must be
/// present; `modulus` and `step` belong to the developed form.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignFile {
    v: usize,
    k: usize,
    lambda: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    groups: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_blocks: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step: Option<usize>,
}

impl DesignFile {
    fn into_design(self) -> Result<Design> {
        match (self.blocks, self.base_blocks) {
            (Some(blocks), None) => {
                if self.modulus.is_some() || self.step.is_some() {
                    return Err(Error::DesignFile(
                        "modulus/step only apply to base_blocks".into(),
                    ));
                }
                Design::explicit(self.v, self.k, self.lambda, self.groups, blocks)
            }
            (None, Some(base_blocks)) => {
                let modulus = self
                    .modulus
                    .ok_or_else(|| Error::DesignFile("base_blocks require modulus".into()))?;
                let step = self.step.unwrap_or(1);
                Design::developed(
                    self.v,
                    self.k,
                    self.lambda,
                    self.groups,
                    Developer {
                        base_blocks,
                        modulus,
                        step,
                    },
                )
            }
            (Some(_), Some(_)) => Err(Error::DesignFile(
                "give either blocks or base_blocks, not both".into(),
            )),
            (None, None) => Err(Error::DesignFile(
                "one of blocks or base_blocks is required".into(),
            )),
        }
    }
}

/// One ordered pair whose coverage count differs from the expected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairDefect {
    pub x: usize,
    pub y: usize,
    pub found: usize,
    pub expected: usize,
}

/// Outcome of pair-coverage verification. Valid iff no defective pairs.
/// Duplicate blocks are surfaced separately; they always also show up as
/// over-covered pairs when lambda is finite.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub defects: Vec<PairDefect>,
    pub duplicate_blocks: Vec<(usize, usize)>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks that every ordered pair is covered exactly lambda times
/// (zero times for pairs inside a group).
pub fn verify_design(design: &Design) -> VerificationReport {
    let v = design.v;
    let mut counts = vec![0usize; v * v];
    for b in &design.blocks {
        for (x, y) in b.ordered_pairs() {
            counts[x * v + y] += 1;
        }
    }
    let in_group = design.in_group_table();
    let mut defects = Vec::new();
    for x in 0..v {
        for y in 0..v {
            if x == y {
                continue;
            }
            let expected = if in_group[x * v + y] {
                0
            } else {
                design.lambda
            };
            let found = counts[x * v + y];
            if found != expected {
                defects.push(PairDefect {
                    x,
                    y,
                    found,
                    expected,
                });
            }
        }
    }
    let mut by_elements: HashMap<&[usize], usize> = HashMap::new();
    let mut duplicate_blocks = Vec::new();
    for b in &design.blocks {
        if let Some(&first) = by_elements.get(b.elements.as_slice()) {
            duplicate_blocks.push((first, b.id));
        } else {
            by_elements.insert(&b.elements, b.id);
        }
    }
    VerificationReport {
        defects,
        duplicate_blocks,
    }
}

/// True iff every unordered pair of blocks shares at most two elements.
pub fn verify_super_simple(design: &Design) -> bool {
    super_simple_witness(design).is_none()
}

/// Returns a block pair sharing more than two elements, if one exists.
pub fn super_simple_witness(design: &Design) -> Option<(usize, usize)> {
    let sets: Vec<Vec<usize>> = design
        .blocks
        .iter()
        .map(|b| {
            let mut s = b.elements.clone();
            s.sort_unstable();
            s
        })
        .collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sorted_intersection_size(&sets[i], &sets[j]) > 2 {
                return Some((i, j));
            }
        }
    }
    None
}

pub(crate) fn sorted_intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dgdd_2_4a() -> Design {
        Design::explicit(
            8,
            4,
            1,
            Some(vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]),
            vec![
                vec![3, 0, 5, 6],
                vec![7, 5, 0, 2],
                vec![5, 7, 1, 3],
                vec![6, 4, 3, 1],
                vec![4, 6, 2, 0],
                vec![1, 2, 6, 5],
                vec![2, 1, 7, 4],
                vec![0, 3, 4, 7],
            ],
        )
        .unwrap()
    }

    #[test]
    fn develop_single_shift() {
        let blocks = develop(&Developer {
            base_blocks: vec![vec![0, 1, 2]],
            modulus: 3,
            step: 3,
        })
        .unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].elements, vec![0, 1, 2]);
        // non-dividing step: shifts 0, 3 only
        let blocks = develop(&Developer {
            base_blocks: vec![vec![0, 1, 2]],
            modulus: 7,
            step: 3,
        })
        .unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[1].elements, vec![3, 4, 5]);
    }

    #[test]
    fn develop_28_blocks_mod_14() {
        let blocks = develop(&Developer {
            base_blocks: vec![vec![0, 1, 4, 6], vec![1, 0, 11, 9]],
            modulus: 14,
            step: 1,
        })
        .unwrap();
        assert_eq!(blocks.len(), 28);
        assert_eq!(blocks[14].elements, vec![1, 0, 11, 9]);
        assert_eq!(blocks[15].elements, vec![2, 1, 12, 10]);
    }

    #[test]
    fn develop_rejects_collapsing_blocks() {
        // 0 and 7 collide mod 7
        let err = develop(&Developer {
            base_blocks: vec![vec![0, 7, 2]],
            modulus: 7,
            step: 1,
        })
        .unwrap_err();
        assert!(matches!(err, Error::RepeatedElements { base_index: 0, .. }));
    }

    #[test]
    fn dgdd_2_4a_is_valid_and_super_simple() {
        let d = dgdd_2_4a();
        assert!(verify_design(&d).is_valid());
        assert!(verify_super_simple(&d));
    }

    #[test]
    fn reversed_block_breaks_coverage() {
        let mut d = dgdd_2_4a();
        d.blocks[0].elements.reverse();
        let report = verify_design(&d);
        assert!(!report.is_valid());
        // brute-force oracle: recount ordered pairs directly
        let mut counts = std::collections::HashMap::new();
        for b in &d.blocks {
            for p in b.ordered_pairs() {
                *counts.entry(p).or_insert(0usize) += 1;
            }
        }
        for defect in &report.defects {
            assert_eq!(
                counts.get(&(defect.x, defect.y)).copied().unwrap_or(0),
                defect.found
            );
        }
        // reversing (3,0,5,6) flips six ordered pairs: each now missing
        // in one direction and doubled in the other
        assert_eq!(report.defects.len(), 12);
    }

    #[test]
    fn empty_design_with_lambda_zero_is_valid() {
        let d = Design::explicit(2, 3, 0, None, vec![]).unwrap();
        assert!(verify_design(&d).is_valid());
    }

    #[test]
    fn duplicate_blocks_are_surfaced() {
        let d = Design::explicit(
            6,
            3,
            2,
            None,
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 1, 2]],
        )
        .unwrap();
        let report = verify_design(&d);
        assert_eq!(report.duplicate_blocks, vec![(0, 2)]);
        assert!(!verify_super_simple(&d));
    }

    #[test]
    fn design_file_round_trip_and_unknown_field() {
        let d = dgdd_2_4a();
        let text = d.to_toml_string();
        let back = Design::from_toml_str(&text).unwrap();
        assert_eq!(back.blocks.len(), 8);
        assert_eq!(back.blocks[1].elements, vec![7, 5, 0, 2]);

        let bad = format!("{text}\nunexpected = 1\n");
        assert!(matches!(
            Design::from_toml_str(&bad),
            Err(Error::DesignFile(_))
        ));
    }

    #[test]
    fn shift_equivariance_of_develop() {
        // developing then relabeling by +1 equals developing shifted bases
        let dev = Developer {
            base_blocks: vec![vec![0, 1, 4, 6], vec![1, 0, 11, 9]],
            modulus: 14,
            step: 1,
        };
        let shifted = Developer {
            base_blocks: dev
                .base_blocks
                .iter()
                .map(|b| b.iter().map(|&x| (x + 1) % 14).collect())
                .collect(),
            modulus: 14,
            step: 1,
        };
        let a: Vec<Vec<usize>> = develop(&dev)
            .unwrap()
            .into_iter()
            .map(|b| b.elements.iter().map(|&x| (x + 1) % 14).collect())
            .collect();
        let b: Vec<Vec<usize>> = develop(&shifted)
            .unwrap()
            .into_iter()
            .map(|b| b.elements)
            .collect();
        let mut a_sorted = a.clone();
        a_sorted.sort();
        let mut b_sorted = b.clone();
        b_sorted.sort();
        assert_eq!(a_sorted, b_sorted);
    }
}
