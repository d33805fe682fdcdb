//! The code map between lhs and rhs 01-codes and the bijection between
//! folded survivors and reflected rhs survivors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::build_graph;
use super::strips::decompose_strips;
use crate::codes_signs::{code_of_survivor, Code01};
use crate::error::{CodeError, XiError};
use crate::exact_arith::IdentityParams;
use crate::folded_overlays::{folded_survivors, reflected_rhs_survivors, unreflect_rhs, FoldedOverlay};
use crate::lattice_paths::{Budget, PathTuple};

/// Checks the terminal colour pattern of folded survivors: once a green
/// terminal (bit 1) has occurred, no two blue terminals (bit 0) are
/// consecutive and the last terminal is green.
pub fn satisfies_colour_pattern(c: &Code01) -> bool {
    let bits = c.bits();
    let Some(first) = bits.iter().position(|&b| b) else {
        return true;
    };
    let tail = &bits[first..];
    tail.windows(2).all(|w| w[0] || w[1]) && *tail.last().expect("tail holds the first one")
}

/// Maps a lhs code to the rhs code of the corresponding survivors.
///
/// For every zero of `c` count the ones to its left; dropping the zero
/// counts, the remaining counts are the zero positions of the output, whose
/// length is one less than the number of ones.
pub fn code_transform(c: &Code01) -> Result<Code01, CodeError> {
    if !satisfies_colour_pattern(c) {
        return Err(CodeError::ColourPattern(c.to_string()));
    }
    let len = c.ones().saturating_sub(1);
    let mut out = vec![true; len];
    let mut ones = 0;
    for &b in c.bits() {
        if b {
            ones += 1;
        } else if ones > 0 {
            out[ones - 1] = false;
        }
    }
    Ok(Code01::new(out))
}

/// Bijection between folded survivors and reflected rhs survivors.
///
/// Both sides are partitioned by rhs code (`code_transform` of the lhs code
/// on the left, the survivor's own code on the right). Inside a class the
/// members are ordered canonically and matched by rank.
#[derive(Debug, Clone)]
pub struct XiBijection {
    pub params: IdentityParams,
    forward: BTreeMap<FoldedOverlay, PathTuple>,
    inverse: BTreeMap<PathTuple, FoldedOverlay>,
    classes: BTreeMap<Code01, usize>,
}

/// Size summary of one code class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeClass {
    pub code: Code01,
    pub size: usize,
}

impl XiBijection {
    /// Enumerates both sides and builds the matching; fails if a code class
    /// has different sizes on the two sides.
    pub fn build(params: IdentityParams, budget: &Budget) -> Result<Self, XiError> {
        let lhs = folded_survivors(params, budget)?;
        let rhs = reflected_rhs_survivors(params, budget)?;
        Self::from_parts(params, lhs, rhs)
    }

    /// Builds the matching from already enumerated sides.
    pub fn from_parts(params: IdentityParams, lhs: Vec<FoldedOverlay>, rhs: Vec<PathTuple>) -> Result<Self, XiError> {
        let mut left: BTreeMap<Code01, Vec<FoldedOverlay>> = BTreeMap::new();
        for o in lhs {
            left.entry(code_transform(&o.code())?).or_default().push(o);
        }
        let mut right: BTreeMap<Code01, Vec<PathTuple>> = BTreeMap::new();
        for s in rhs {
            let code = code_of_survivor(&unreflect_rhs(&s), params.rhs())?;
            right.entry(code).or_default().push(s);
        }
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        let mut classes = BTreeMap::new();
        let codes: std::collections::BTreeSet<Code01> = left.keys().chain(right.keys()).cloned().collect();
        for code in codes {
            let mut l = left.remove(&code).unwrap_or_default();
            let mut r = right.remove(&code).unwrap_or_default();
            if l.len() != r.len() {
                return Err(XiError::ClassSizeMismatch { code: code.to_string(), lhs: l.len(), rhs: r.len() });
            }
            l.sort();
            r.sort();
            classes.insert(code, l.len());
            for (o, s) in l.into_iter().zip(r) {
                forward.insert(o.clone(), s.clone());
                inverse.insert(s, o);
            }
        }
        Ok(Self { params, forward, inverse, classes })
    }

    /// Number of matched pairs.
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Code classes with their sizes.
    pub fn classes(&self) -> Vec<CodeClass> {
        self.classes.iter().map(|(code, &size)| CodeClass { code: code.clone(), size }).collect()
    }

    /// Image of a folded survivor; its strip structure is validated first.
    pub fn forward(&self, o: &FoldedOverlay) -> Result<PathTuple, XiError> {
        decompose_strips(&build_graph(o))?;
        self.forward
            .get(o)
            .cloned()
            .ok_or_else(|| XiError::NotInDomain("overlay is not a folded survivor of this instance".into()))
    }

    /// Preimage of a reflected rhs survivor.
    pub fn inverse(&self, s: &PathTuple) -> Result<FoldedOverlay, XiError> {
        self.inverse
            .get(s)
            .cloned()
            .ok_or_else(|| XiError::NotInDomain("tuple is not a reflected rhs survivor of this instance".into()))
    }

    /// All pairs in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (&FoldedOverlay, &PathTuple)> {
        self.forward.iter()
    }
}
