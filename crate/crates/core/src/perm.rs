//! Lexicographic permutation enumeration.

/// Rearranges `p` into the next permutation in lexicographic order; returns
/// `false` (leaving `p` sorted ascending) after the last one.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        p.reverse();
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("p[i + 1] > p[i]");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Calls `f` on every permutation of `0..n` whose first element is `first`,
/// in lexicographic order.
pub fn for_each_with_first(n: usize, first: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&x| x != first)).collect();
    loop {
        f(&p);
        if !next_permutation(&mut p[1..]) {
            break;
        }
    }
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub fn for_each(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        f(&p);
        if !next_permutation(&mut p) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_in_lexicographic_order() {
        let mut all = Vec::new();
        for_each(4, |p| all.push(p.to_vec()));
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));

        let mut split = Vec::new();
        for first in 0..4 {
            for_each_with_first(4, first, |p| split.push(p.to_vec()));
        }
        assert_eq!(split, all);
    }

    #[test]
    fn single_element() {
        let mut count = 0;
        for_each(1, |p| {
            assert_eq!(p, &[0]);
            count += 1;
        });
        assert_eq!(count, 1);
    }
}
