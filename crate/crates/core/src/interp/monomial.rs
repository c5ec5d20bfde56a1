use std::collections::HashMap;

use crate::combinatorics::binomial;

/// The degree-`d` monomials of `K[x_0..x_n]` in graded-lexicographic order
/// (`x_0^d` first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: u32,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn enumerate(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if vars == 1 {
        prefix.push(d);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for a in (0..=d).rev() {
        prefix.push(a);
        enumerate(vars - 1, d - a, prefix, out);
        prefix.pop();
    }
}

/// All exponent vectors of total degree `d` in `vars` variables, lex-descending.
pub(crate) fn exponents(vars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    enumerate(vars, d, &mut Vec::with_capacity(vars), &mut out);
    out
}

impl MonomialBasis {
    pub fn new(n: usize, d: u32) -> Self {
        Self::from_exponents(n, d, exponents(n + 1, d))
    }

    pub(crate) fn from_exponents(n: usize, d: u32, exps: Vec<Vec<u32>>) -> Self {
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Self { n, d, exps, index }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    /// `C(n + d, n)`.
    pub fn expected_len(n: usize, d: u32) -> usize {
        binomial(n as u64 + d as u64, n as u64) as usize
    }
}
