//! Hopcroft partition refinement over the total automaton, followed by a
//! canonical renumbering (BFS from the start state in symbol order) so that
//! equal languages serialize identically.

use std::collections::BTreeSet;

use super::Dfa;

impl Dfa {
    /// Language-equivalent DFA with the minimum number of states and
    /// canonical state numbering. Unreachable states are dropped first.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim();
        let class_of = equivalence_classes(&trimmed);
        let n_classes = class_of.iter().max().map_or(0, |&c| c + 1);
        let i = trimmed.alphabet.size();

        // quotient automaton on equivalence classes
        let mut q_delta = vec![vec![usize::MAX; i]; n_classes];
        let mut q_accepting = vec![false; n_classes];
        for s in 0..trimmed.state_count() {
            let c = class_of[s];
            q_accepting[c] = trimmed.accepting[s];
            for sym in 0..i {
                q_delta[c][sym] = class_of[trimmed.delta[s][sym]];
            }
        }
        let quotient = Dfa {
            alphabet: trimmed.alphabet.clone(),
            start: class_of[trimmed.start],
            accepting: q_accepting,
            delta: q_delta,
        };
        // trim renumbers canonically (BFS from start, symbol order)
        quotient.trim()
    }
}

/// Hopcroft's algorithm: returns the equivalence class index of every state.
/// Class indices are arbitrary; the caller renumbers.
fn equivalence_classes(dfa: &Dfa) -> Vec<usize> {
    let n = dfa.state_count();
    let n_syms = dfa.alphabet.size();

    // inverse transitions per symbol
    let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n_syms];
    for s in 0..n {
        for sym in 0..n_syms {
            inverse[sym][dfa.delta[s][sym]].push(s);
        }
    }

    let accepting: BTreeSet<usize> = (0..n).filter(|&s| dfa.accepting[s]).collect();
    let rejecting: BTreeSet<usize> = (0..n).filter(|&s| !dfa.accepting[s]).collect();

    let mut partition: Vec<BTreeSet<usize>> = Vec::new();
    let mut worklist: Vec<BTreeSet<usize>> = Vec::new();
    for block in [accepting, rejecting] {
        if !block.is_empty() {
            partition.push(block.clone());
            worklist.push(block);
        }
    }

    while let Some(splitter) = worklist.pop() {
        for sym in 0..n_syms {
            let preimage: BTreeSet<usize> = splitter
                .iter()
                .flat_map(|&t| inverse[sym][t].iter().copied())
                .collect();
            if preimage.is_empty() {
                continue;
            }
            let mut next_partition = Vec::with_capacity(partition.len());
            for block in partition {
                let inter: BTreeSet<usize> = block.intersection(&preimage).copied().collect();
                if inter.is_empty() || inter.len() == block.len() {
                    next_partition.push(block);
                    continue;
                }
                let diff: BTreeSet<usize> = block.difference(&preimage).copied().collect();
                if let Some(pos) = worklist.iter().position(|w| *w == block) {
                    worklist.swap_remove(pos);
                    worklist.push(inter.clone());
                    worklist.push(diff.clone());
                } else if inter.len() <= diff.len() {
                    worklist.push(inter.clone());
                } else {
                    worklist.push(diff.clone());
                }
                next_partition.push(inter);
                next_partition.push(diff);
            }
            partition = next_partition;
        }
    }

    let mut class_of = vec![0usize; n];
    for (idx, block) in partition.iter().enumerate() {
        for &s in block {
            class_of[s] = idx;
        }
    }
    class_of
}
