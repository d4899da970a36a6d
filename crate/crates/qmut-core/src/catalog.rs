//! Canonical and squid quivers for a weight sequence.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exseq::ExcSeqQuiver;
use crate::graded::GradedQuiver;
use crate::ranks;
use crate::symbolic::SymbolicObject;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("weight {value} at position {index} is smaller than 2")]
    WeightTooSmall { index: usize, value: u32 },
    #[error("cannot parse weight sequence {0:?}")]
    Parse(String),
}

/// Weights `p_1, ..., p_t`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSequence(Vec<u32>);

impl WeightSequence {
    pub fn new(p: Vec<u32>) -> Result<Self, CatalogError> {
        if let Some((index, &value)) = p.iter().enumerate().find(|(_, &w)| w < 2) {
            return Err(CatalogError::WeightTooSmall { index, value });
        }
        Ok(WeightSequence(p))
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    /// Rank of the Grothendieck group, `2 + Σ (p_i - 1)`.
    pub fn vertex_count(&self) -> usize {
        2 + self.0.iter().map(|&p| p as usize - 1).sum::<usize>()
    }

    /// Weights sorted in descending order.
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl FromStr for WeightSequence {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return WeightSequence::new(Vec::new());
        }
        let p = s
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CatalogError::Parse(s.to_string()))?;
        WeightSequence::new(p)
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn line_bundle_label(j: u32, i: usize) -> String {
    if j == 1 {
        format!("O(x{i})")
    } else {
        format!("O({j}x{i})")
    }
}

/// Label of the torsion summand `S_i^(j)` of the squid.
pub fn torsion_label(arm: usize, j: u32) -> String {
    format!("S_{arm}^({j})")
}

/// Graded quiver of the canonical tilting bundle. Vertex order is `O`, then
/// each arm `O(x_i), ..., O((p_i - 1) x_i)`, then `O(c)`.
pub fn canonical_graded(p: &WeightSequence) -> GradedQuiver {
    let mut labels = vec!["O".to_string()];
    let mut arms = Vec::new();
    for (i, &pi) in p.weights().iter().enumerate() {
        let mut arm = Vec::new();
        for j in 1..pi {
            arm.push(labels.len());
            labels.push(line_bundle_label(j, i + 1));
        }
        arms.push(arm);
    }
    let c = labels.len();
    labels.push("O(c)".to_string());

    let mut q = GradedQuiver::with_labels(labels);
    for arm in &arms {
        let mut prev = 0;
        for &v in arm {
            q.add_arrows(prev, v, 0, 1);
            prev = v;
        }
        q.add_arrows(prev, c, 0, 1);
    }
    let t = p.arms();
    if t < 2 {
        q.add_arrows(0, c, 0, (2 - t) as u32);
    } else if t > 2 {
        q.add_arrows(c, 0, 1, (t - 2) as u32);
    }
    q.set_ranks(&vec![1; q.n()]);
    with_inferred_tags(q)
}

/// Graded quiver of the squid. Vertex order is `O`, `O(c)`, then each arm
/// from its head `S_i^(p_i - 1)` down to `S_i^(1)`.
pub fn squid_graded(p: &WeightSequence) -> GradedQuiver {
    let mut labels = vec!["O".to_string(), "O(c)".to_string()];
    let mut heads = Vec::new();
    let mut chains = Vec::new();
    for (i, &pi) in p.weights().iter().enumerate() {
        let start = labels.len();
        for j in (1..pi).rev() {
            labels.push(torsion_label(i + 1, j));
        }
        heads.push(start);
        chains.push(start..labels.len());
    }
    let mut q = GradedQuiver::with_labels(labels);
    q.add_arrows(0, 1, 0, 2);
    for (head, chain) in heads.iter().zip(&chains) {
        q.add_arrows(1, *head, 0, 1);
        for v in chain.start..chain.end - 1 {
            q.add_arrows(v, v + 1, 0, 1);
        }
        q.add_arrows(*head, 0, 1, 1);
    }
    let mut ranks = vec![0; q.n()];
    ranks[0] = 1;
    ranks[1] = 1;
    q.set_ranks(&ranks);
    with_inferred_tags(q)
}

fn with_inferred_tags(mut q: GradedQuiver) -> GradedQuiver {
    let tags = ranks::infer_sink_source(&q).expect("catalog quivers carry full ranks");
    q.set_tags(&tags);
    q
}

/// The squid as an exceptional sequence `(O(c), O(2c), arms)`, with entries
/// the Hom dimensions between its summands.
pub fn squid_sequence(p: &WeightSequence) -> ExcSeqQuiver {
    let n = p.vertex_count();
    let mut ranks = vec![0; n];
    ranks[0] = 1;
    ranks[1] = 1;
    let mut q = ExcSeqQuiver::new(ranks);
    let mut labels = vec![SymbolicObject::name("O(c)"), SymbolicObject::name("O(2c)")];
    q.set(0, 1, 2);
    let mut start = 2;
    for (i, &pi) in p.weights().iter().enumerate() {
        let len = pi as usize - 1;
        for x in start..start + len {
            q.set(0, x, 1);
            q.set(1, x, 1);
            for y in x + 1..start + len {
                q.set(x, y, 1);
            }
        }
        for j in (1..pi).rev() {
            labels.push(SymbolicObject::name(torsion_label(i + 1, j)));
        }
        start += len;
    }
    q.set_labels(labels);
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Tag;

    fn w(p: &[u32]) -> WeightSequence {
        WeightSequence::new(p.to_vec()).unwrap()
    }

    #[test]
    fn weights_are_validated_and_parsed() {
        assert!(WeightSequence::new(vec![2, 1]).is_err());
        assert_eq!("3, 3,4".parse::<WeightSequence>().unwrap(), w(&[3, 3, 4]));
        assert!("3,x".parse::<WeightSequence>().is_err());
        assert_eq!(w(&[2, 3, 7]).vertex_count(), 11);
    }

    #[test]
    fn canonical_sizes() {
        let q = canonical_graded(&w(&[2, 2, 2, 2]));
        assert_eq!(q.n(), 6);
        assert_eq!(q.arrow_count(5, 0, 1), 2);
        let q = canonical_graded(&w(&[3, 3, 4]));
        assert_eq!(q.n(), 9);
        assert_eq!(q.arrows().filter(|a| a.2 == 1).map(|a| a.3).sum::<u32>(), 1);
        let q = canonical_graded(&w(&[2, 2]));
        assert_eq!(q.n(), 4);
        assert!(q.arrows().all(|a| a.2 == 0));
        assert_eq!(q.tag(0), Tag::Source);
        assert_eq!(q.tag(3), Tag::Sink);
    }

    #[test]
    fn small_arm_counts_use_extra_arrows() {
        let q = canonical_graded(&w(&[]));
        assert_eq!(q.arrow_count(0, 1, 0), 2);
        let q = canonical_graded(&w(&[3]));
        assert_eq!(q.arrow_count(0, 3, 0), 1);
    }

    #[test]
    fn squid_shapes() {
        let q = squid_graded(&w(&[2, 3]));
        assert_eq!(q.n(), 5);
        assert_eq!(q.arrows().filter(|a| a.2 == 1).count(), 2);
        assert_eq!(q.labels()[2], "S_1^(1)");
        assert_eq!(q.labels()[3], "S_2^(2)");
        let s = squid_sequence(&w(&[2, 2, 2, 2]));
        assert_eq!(s.n(), 6);
        assert_eq!(s.a(0, 1), 2);
    }
}
