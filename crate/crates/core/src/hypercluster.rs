//! Stem-keyed partition of the vocabulary. Clustering runs inside each block
//! independently, so forms with different stems never share a cluster.

use std::collections::BTreeMap;

use crate::embeddings::Vocabulary;
use crate::textnorm::{fold_case, simplify};

/// Stem used for forms that have no characters at all.
pub const EMPTY_STEM: &str = "∅";

/// First `k` characters of the simplified form. Forms that simplify to
/// nothing (non-Latin scripts) fall back to the case-folded raw prefix.
pub fn stem(form: &str, k: usize) -> String {
    let simple = simplify(form);
    if !simple.is_empty() {
        return simple.as_str().chars().take(k).collect();
    }
    let raw: String = fold_case(form).chars().take(k).collect();
    if raw.is_empty() {
        EMPTY_STEM.to_owned()
    } else {
        raw
    }
}

/// Blocks of vocabulary positions, keyed and iterated in stem order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HyperclusterSet {
    blocks: BTreeMap<String, Vec<usize>>,
}

impl HyperclusterSet {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.blocks.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn block(&self, stem: &str) -> Option<&[usize]> {
        self.blocks.get(stem).map(Vec::as_slice)
    }

    pub fn total_size(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Groups vocabulary positions by stem, keeping rank order inside blocks.
pub fn partition(vocab: &Vocabulary, k: usize) -> HyperclusterSet {
    let mut blocks: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, e) in vocab.entries().iter().enumerate() {
        blocks.entry(stem(&e.form, k)).or_default().push(i);
    }
    HyperclusterSet { blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vocab(forms: &[&str]) -> Vocabulary {
        Vocabulary::from_pairs(1, forms.iter().map(|f| (*f, vec![1.0]))).unwrap()
    }

    #[test]
    fn stem_examples() {
        assert_eq!(stem("Praha", 3), "prh");
        assert_eq!(stem("Praze", 3), "prz");
        assert_eq!(stem("ab", 3), "ab");
        assert_eq!(stem("東京", 3), "東京");
        assert_eq!(stem("東京都庁", 3), "東京都");
        assert_eq!(stem("", 3), EMPTY_STEM);
        assert_eq!(stem("walked", 3), stem("walk", 3));
        assert_ne!(stem("went", 3), stem("go", 3));
    }

    #[test]
    fn partition_examples() {
        let h = partition(&vocab(&["Prahou", "Prahy", "Praha"]), 3);
        assert_eq!(h.len(), 1);
        assert_eq!(h.block("prh").unwrap(), &[0, 1, 2]);

        let h = partition(&vocab(&["a", "b"]), 3);
        assert_eq!(h.len(), 2);
        assert_eq!(h.total_size(), 2);
    }

    proptest! {
        #[test]
        fn partition_is_a_partition(forms in prop::collection::btree_set("\\PC{1,6}", 0..30), k in 1usize..5) {
            let forms: Vec<String> = forms.into_iter().collect();
            let v = Vocabulary::from_pairs(1, forms.iter().map(|f| (f.clone(), vec![1.0]))).unwrap();
            let h = partition(&v, k);
            prop_assert_eq!(h.total_size(), v.len());
            let mut seen = vec![false; v.len()];
            for (key, block) in h.iter() {
                prop_assert!(block.windows(2).all(|w| w[0] < w[1]));
                for &i in block {
                    prop_assert!(!seen[i]);
                    seen[i] = true;
                    prop_assert_eq!(stem(&v.get(i).form, k), key);
                }
            }
            prop_assert!(seen.iter().all(|&s| s));

            // permuting the input yields the same blocks as sets of forms
            let mut rev = forms.clone();
            rev.reverse();
            let rv = Vocabulary::from_pairs(1, rev.iter().map(|f| (f.clone(), vec![1.0]))).unwrap();
            let rh = partition(&rv, k);
            prop_assert_eq!(rh.len(), h.len());
            for (key, block) in h.iter() {
                let mut a: Vec<&str> = block.iter().map(|&i| v.get(i).form.as_str()).collect();
                let mut b: Vec<&str> = rh.block(key).unwrap().iter().map(|&i| rv.get(i).form.as_str()).collect();
                a.sort();
                b.sort();
                prop_assert_eq!(a, b);
            }
        }
    }
}
