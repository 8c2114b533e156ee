use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{GeneratorSet, SymmetryError};
use crate::hamiltonian::Hamiltonian;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Groups of elements, each sorted, ordered by smallest element.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut first: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            let key = *first.entry(r).or_insert(i);
            by_root.entry(key).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

/// Orbits of the group generated by `gens` on `0..n`.
pub fn vertex_orbits(gens: &GeneratorSet) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(gens.n);
    for g in &gens.generators {
        for v in 0..gens.n {
            uf.union(v, g.apply(v));
        }
    }
    uf.groups()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitClass {
    /// Lexicographically smallest support in the class.
    pub representative: Vec<usize>,
    /// All supports in the class, sorted.
    pub members: Vec<Vec<usize>>,
    /// Coefficient shared by every member.
    pub coeff: f64,
}

impl OrbitClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Classes of Hamiltonian terms under a symmetry group, ordered by
/// representative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct OrbitPartition {
    classes: Vec<OrbitClass>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    classes: Vec<RawClass>,
}

#[derive(Serialize, Deserialize)]
struct RawClass {
    rep: Vec<usize>,
    size: usize,
    coeff: f64,
    members: Vec<Vec<usize>>,
}

impl From<OrbitPartition> for RawPartition {
    fn from(p: OrbitPartition) -> Self {
        RawPartition {
            classes: p
                .classes
                .into_iter()
                .map(|c| RawClass {
                    size: c.members.len(),
                    rep: c.representative,
                    coeff: c.coeff,
                    members: c.members,
                })
                .collect(),
        }
    }
}

impl TryFrom<RawPartition> for OrbitPartition {
    type Error = SymmetryError;

    fn try_from(raw: RawPartition) -> Result<Self, Self::Error> {
        let classes = raw
            .classes
            .into_iter()
            .map(|c| {
                if c.size != c.members.len() || c.size == 0 {
                    return Err(SymmetryError::Invalid(format!(
                        "class {:?} declares size {} but lists {} members",
                        c.rep,
                        c.size,
                        c.members.len()
                    )));
                }
                if !c.members.contains(&c.rep) {
                    return Err(SymmetryError::Invalid(format!(
                        "representative {:?} is not a member of its class",
                        c.rep
                    )));
                }
                Ok(OrbitClass {
                    representative: c.rep,
                    members: c.members,
                    coeff: c.coeff,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(OrbitPartition { classes })
    }
}

impl OrbitPartition {
    pub fn from_classes(classes: Vec<OrbitClass>) -> Self {
        Self { classes }
    }

    /// One singleton class per term.
    pub fn trivial(h: &Hamiltonian) -> Self {
        let mut classes: Vec<OrbitClass> = h
            .terms()
            .iter()
            .map(|t| OrbitClass {
                representative: t.support.clone(),
                members: vec![t.support.clone()],
                coeff: t.coeff,
            })
            .collect();
        classes.sort_by(|a, b| a.representative.cmp(&b.representative));
        Self { classes }
    }

    pub fn classes(&self) -> &[OrbitClass] {
        &self.classes
    }

    /// Number of classes, `M`.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn n_members(&self) -> usize {
        self.classes.iter().map(OrbitClass::multiplicity).sum()
    }

    /// Member sets only, for comparing partitions regardless of coefficients.
    pub fn member_sets(&self) -> Vec<Vec<Vec<usize>>> {
        self.classes.iter().map(|c| c.members.clone()).collect()
    }

    /// Checks that the classes cover every term of `h` exactly once and that
    /// each class coefficient matches its members' coefficients.
    pub fn validate_against(&self, h: &Hamiltonian) -> Result<(), SymmetryError> {
        let mut seen: HashMap<&[usize], bool> = h
            .terms()
            .iter()
            .map(|t| (t.support.as_slice(), false))
            .collect();
        let coeffs: HashMap<&[usize], f64> = h
            .terms()
            .iter()
            .map(|t| (t.support.as_slice(), t.coeff))
            .collect();
        for class in &self.classes {
            for m in &class.members {
                match seen.get_mut(m.as_slice()) {
                    None => {
                        return Err(SymmetryError::Invalid(format!(
                            "orbit member {m:?} is not a Hamiltonian term"
                        )))
                    }
                    Some(true) => {
                        return Err(SymmetryError::Invalid(format!(
                            "term {m:?} appears in more than one orbit"
                        )))
                    }
                    Some(flag) => *flag = true,
                }
                let c = coeffs[m.as_slice()];
                if c != class.coeff {
                    return Err(SymmetryError::InhomogeneousOrbit {
                        a: class.representative.clone(),
                        b: m.clone(),
                        ca: class.coeff,
                        cb: c,
                    });
                }
            }
        }
        if let Some((missing, _)) = seen.iter().find(|(_, &hit)| !hit) {
            return Err(SymmetryError::Invalid(format!(
                "term {missing:?} is in no orbit"
            )));
        }
        Ok(())
    }
}

/// Partitions the terms of `h` into orbits under the group generated by
/// `gens`, acting on supports pointwise.
pub fn term_orbits(gens: &GeneratorSet, h: &Hamiltonian) -> Result<OrbitPartition, SymmetryError> {
    if gens.n != h.n_qubits() {
        return Err(SymmetryError::SizeMismatch {
            expected: h.n_qubits(),
            got: gens.n,
        });
    }
    let terms = h.terms();
    let index: HashMap<&[usize], usize> = terms
        .iter()
        .enumerate()
        .map(|(k, t)| (t.support.as_slice(), k))
        .collect();
    let mut uf = UnionFind::new(terms.len());
    for g in &gens.generators {
        for (k, t) in terms.iter().enumerate() {
            let image = g.apply_set(&t.support);
            let Some(&j) = index.get(image.as_slice()) else {
                return Err(SymmetryError::TermNotPreserved {
                    from: t.support.clone(),
                    to: image,
                });
            };
            if terms[j].coeff != t.coeff {
                return Err(SymmetryError::InhomogeneousOrbit {
                    a: t.support.clone(),
                    b: image,
                    ca: t.coeff,
                    cb: terms[j].coeff,
                });
            }
            uf.union(k, j);
        }
    }
    let mut classes: Vec<OrbitClass> = uf
        .groups()
        .into_iter()
        .map(|group| {
            let mut members: Vec<Vec<usize>> =
                group.iter().map(|&k| terms[k].support.clone()).collect();
            members.sort();
            OrbitClass {
                representative: members[0].clone(),
                coeff: terms[group[0]].coeff,
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(OrbitPartition { classes })
}
