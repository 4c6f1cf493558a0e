use std::cmp::Ordering;
use std::fmt;

/// Symmetric multi-index: sorted base-coordinate positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        MultiIndex(idx)
    }

    pub fn single(mu: usize) -> Self {
        MultiIndex(vec![mu])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `I + μ`.
    pub fn plus(&self, mu: usize) -> MultiIndex {
        let mut v = self.0.clone();
        let at = v.partition_point(|&k| k <= mu);
        v.insert(at, mu);
        MultiIndex(v)
    }

    /// `I − μ`, if `μ` occurs in `I`.
    pub fn minus(&self, mu: usize) -> Option<MultiIndex> {
        let at = self.0.iter().position(|&k| k == mu)?;
        let mut v = self.0.clone();
        v.remove(at);
        Some(MultiIndex(v))
    }

    pub fn union(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::new(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `I!` as the product of the factorials of the multiplicities.
    pub fn factorial(&self) -> u64 {
        let mut out = 1u64;
        let mut run = 0u64;
        for (k, &mu) in self.0.iter().enumerate() {
            run = if k > 0 && self.0[k - 1] == mu { run + 1 } else { 1 };
            out *= run;
        }
        out
    }

    /// All multi-indices over `d` coordinates of length exactly `n`, ascending.
    pub fn all_of_order(d: usize, n: usize) -> Vec<MultiIndex> {
        fn rec(d: usize, start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for mu in start..d {
                cur.push(mu);
                rec(d, mu, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 || n == 0 {
            rec(d, 0, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// All multi-indices of length at most `n`, ascending.
    pub fn all_up_to(d: usize, n: usize) -> Vec<MultiIndex> {
        (0..=n).flat_map(|k| MultiIndex::all_of_order(d, k)).collect()
    }
}

/// Graded lexicographic: shorter first, then lexicographic.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The jet coordinate `u^a_I`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub field: usize,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(field: usize, index: MultiIndex) -> Self {
        JetVar { field, index }
    }

    pub fn order(&self) -> usize {
        self.index.len()
    }

    pub fn plus(&self, mu: usize) -> JetVar {
        JetVar { field: self.field, index: self.index.plus(mu) }
    }
}
