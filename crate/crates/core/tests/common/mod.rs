//! Test oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use arrangeclass::{LefschetzList, Signature};

pub type Pairs = Vec<(u8, u8)>;

/// Every pair sequence with the given widths in which no two wires meet twice.
fn all_sequences(lines: usize, widths: &mut Vec<usize>, labels: &mut Vec<usize>, met: &mut Vec<Vec<bool>>, cur: &mut Pairs, out: &mut Vec<Pairs>) {
    if widths.is_empty() {
        out.push(cur.clone());
        return;
    }
    let distinct: BTreeSet<usize> = widths.iter().copied().collect();
    for w in distinct {
        let k = widths.iter().position(|&x| x == w).unwrap();
        widths.remove(k);
        for a in 0..=lines - w {
            let block: Vec<usize> = labels[a..a + w].to_vec();
            let fresh = block.iter().enumerate().all(|(i, &u)| block[i + 1..].iter().all(|&v| !met[u][v]));
            if !fresh {
                continue;
            }
            for &u in &block {
                for &v in &block {
                    met[u][v] = u != v;
                }
            }
            labels[a..a + w].reverse();
            cur.push((a as u8 + 1, (a + w) as u8));
            all_sequences(lines, widths, labels, met, cur, out);
            cur.pop();
            labels[a..a + w].reverse();
            for &u in &block {
                for &v in &block {
                    met[u][v] = false;
                }
            }
        }
        widths.insert(k, w);
    }
}

fn swappable(p: (u8, u8), q: (u8, u8)) -> bool {
    p.1 < q.0 || q.1 < p.0
}

/// Smallest member of the commutation class, by breadth-first closure.
pub fn class_min(start: &Pairs) -> Pairs {
    let mut seen: HashSet<Pairs> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len().saturating_sub(1) {
            if swappable(x[i], x[i + 1]) {
                let mut y = x.clone();
                y.swap(i, i + 1);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().min().unwrap()
}

pub fn brute_force(sig: &Signature, lines: usize) -> Vec<Pairs> {
    let mut widths = sig.multiplicities();
    let mut out = Vec::new();
    all_sequences(lines, &mut widths, &mut (0..lines).collect(), &mut vec![vec![false; lines]; lines], &mut Vec::new(), &mut out);
    let uip = out.into_iter().filter(|p| LefschetzList::from_tuples(lines, p).unwrap().check_uip());
    let mins: BTreeSet<Pairs> = uip.map(|p| class_min(&p)).collect();
    mins.into_iter().collect()
}


pub fn pairs_of(list: &LefschetzList) -> Pairs {
    list.pairs().iter().map(|p| (p.a, p.b)).collect()
}
