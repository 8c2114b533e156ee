use super::{ColoredGraph, GeneratorSet, Permutation, SymmetryError};

pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

/// Every automorphism of `cg`, found by testing all `n!` permutations.
/// The result lists the whole group, identity included, in lexicographic
/// order of the image arrays.
pub fn brute_force_automorphisms(cg: &ColoredGraph) -> Result<GeneratorSet, SymmetryError> {
    let n = cg.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(SymmetryError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    let checker = cg.automorphism_checker();
    let mut images: Vec<usize> = (0..n).collect();
    let mut group = Vec::new();
    loop {
        let p = Permutation {
            images: images.clone(),
        };
        if checker.check(&p) {
            group.push(p);
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    Ok(GeneratorSet {
        n,
        generators: group,
    })
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
