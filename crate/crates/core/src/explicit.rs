//! Exhaustive enumeration for small explicit models.

use crate::error::{Result, SpError};
use crate::linalg::TOL_EQ;
use crate::structure::SpStructure;

/// All ortho-sets and subspaces of an explicit model, as bit masks over points.
#[derive(Debug, Clone)]
pub(crate) struct Catalog {
    pub(crate) n: usize,
    /// Distinct subspaces with the first basis found, sorted by (size, mask).
    pub(crate) subspaces: Vec<(u32, u32)>,
}

impl Catalog {
    pub(crate) fn build(st: &SpStructure) -> Catalog {
        let n = st.dimension();
        debug_assert!(n <= 31);
        let mut orth = vec![0u32; n];
        for (i, o) in orth.iter_mut().enumerate() {
            for j in 0..n {
                if i != j && st.raw(i, j).clamp(0.0, 1.0) <= TOL_EQ {
                    *o |= 1 << j;
                }
            }
        }
        let mut subspaces: Vec<(u32, u32)> = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let is_clique = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .all(|i| (mask & !(1 << i)) & !orth[i] == 0);
            if !is_clique {
                continue;
            }
            let closure = closure_mask(st, n, mask);
            if !subspaces.iter().any(|(s, _)| *s == closure) {
                subspaces.push((closure, mask));
            }
        }
        subspaces.sort_by_key(|(s, _)| (s.count_ones(), *s));
        Catalog { n, subspaces }
    }

    pub(crate) fn basis_of(&self, set: u32) -> Option<u32> {
        self.subspaces
            .iter()
            .find(|(s, _)| *s == set)
            .map(|(_, b)| *b)
    }

    /// Least subspace containing `set`: the intersection of all subspaces above it.
    pub(crate) fn least_above(&self, set: u32) -> u32 {
        let full = if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        };
        self.subspaces
            .iter()
            .filter(|(s, _)| s & set == set)
            .fold(full, |acc, (s, _)| acc & s)
    }
}

pub(crate) fn closure_mask(st: &SpStructure, n: usize, basis: u32) -> u32 {
    let mut out = 0u32;
    for x in 0..n {
        let s: f64 = (0..n)
            .filter(|b| basis & (1 << b) != 0)
            .map(|b| st.raw(x, b).clamp(0.0, 1.0))
            .sum();
        if s >= 1.0 - TOL_EQ {
            out |= 1 << x;
        }
    }
    out
}

pub(crate) fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

pub(crate) fn vec_to_mask(v: &[usize]) -> u32 {
    v.iter().fold(0, |m, i| m | (1 << i))
}

/// Depth-first search for a basis of the whole space containing `start`.
pub(crate) fn complete_basis(
    st: &SpStructure,
    start: &[usize],
    budget: usize,
) -> Result<Vec<usize>> {
    let n = st.dimension();
    let orth = |a: usize, b: usize| a != b && st.raw(a, b).clamp(0.0, 1.0) <= TOL_EQ;
    let is_basis = |c: &[usize]| {
        (0..n).all(|x| c.iter().map(|&b| st.raw(x, b).clamp(0.0, 1.0)).sum::<f64>() >= 1.0 - TOL_EQ)
    };
    let mut nodes = 0usize;
    let mut current = start.to_vec();

    fn dfs(
        current: &mut Vec<usize>,
        from: usize,
        n: usize,
        nodes: &mut usize,
        budget: usize,
        orth: &dyn Fn(usize, usize) -> bool,
        is_basis: &dyn Fn(&[usize]) -> bool,
    ) -> Option<bool> {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        if is_basis(current) {
            return Some(true);
        }
        for c in from..n {
            if current.contains(&c) || !current.iter().all(|&b| orth(b, c)) {
                continue;
            }
            current.push(c);
            match dfs(current, c + 1, n, nodes, budget, orth, is_basis) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            current.pop();
        }
        Some(false)
    }

    match dfs(&mut current, 0, n, &mut nodes, budget, &orth, &is_basis) {
        Some(true) => Ok(current),
        Some(false) => Err(SpError::CompletionNotFound { exhausted: true }),
        None => Err(SpError::CompletionNotFound { exhausted: false }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square4() -> SpStructure {
        let m = vec![
            vec![1.0, 0.5, 0.0, 0.5],
            vec![0.5, 1.0, 0.5, 0.0],
            vec![0.0, 0.5, 1.0, 0.5],
            vec![0.5, 0.0, 0.5, 1.0],
        ];
        SpStructure::explicit(vec!["h".into(), "d".into(), "v".into(), "a".into()], m).unwrap()
    }

    #[test]
    fn catalog_of_four_planar_rays() {
        let st = square4();
        let cat = st.catalog().unwrap();
        // empty, 4 lines, whole space.
        assert_eq!(cat.subspaces.len(), 6);
        assert_eq!(cat.least_above(0b0011), 0b1111);
    }

    #[test]
    fn completion_in_explicit_model() {
        let st = square4();
        let b = complete_basis(&st, &[1], 1000).unwrap();
        assert_eq!(b, vec![1, 3]);
    }

    #[test]
    fn completion_fails_without_orthogonal_partner() {
        let m = vec![
            vec![1.0, 0.5, 0.5],
            vec![0.5, 1.0, 0.5],
            vec![0.5, 0.5, 1.0],
        ];
        let st = SpStructure::explicit(vec!["a".into(), "b".into(), "c".into()], m).unwrap();
        assert_eq!(
            complete_basis(&st, &[0], 1000),
            Err(SpError::CompletionNotFound { exhausted: true })
        );
        assert_eq!(
            complete_basis(&st, &[0], 0),
            Err(SpError::CompletionNotFound { exhausted: false })
        );
    }
}
