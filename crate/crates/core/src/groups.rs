//! Finite matrix groups W ⊂ GL_r(Q(ζ_N)): closure from generators,
//! reflections with normalized eigendata, conjugacy classes, one-dimensional
//! characters and parabolic subgroup classes.
//!
//! Elements act on h by their matrices (column vectors in the y-basis) and on
//! h* contragrediently. The group is its matrix image; abstract kernels of a
//! non-faithful action are not modelled.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::CycloNumber;

pub const DEFAULT_GROUP_CAP: usize = 2000;
pub const DEFAULT_SUBGROUP_BUDGET: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub cyclotomic_order: u32,
    pub rank: usize,
    pub generators: Vec<Matrix>,
    /// Degrees of the basic invariants, when known for a named family.
    pub degrees: Option<Vec<u32>>,
}

/// On-disk group specification.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupSpecFile {
    pub cyclotomic_order: u32,
    pub rank: usize,
    /// One row-major list of r² scalar strings per generator.
    pub generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
}

impl GroupSpec {
    pub fn new(cyclotomic_order: u32, rank: usize, generators: Vec<Matrix>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be at least 1".into()));
        }
        for g in &generators {
            if g.rows() != rank || g.cols() != rank {
                return Err(Error::InvalidInput(format!("generator is not {rank}x{rank}")));
            }
            if g.order() != cyclotomic_order {
                return Err(Error::InvalidInput("generator over the wrong cyclotomic field".into()));
            }
            g.inverse()
                .map_err(|_| Error::InvalidInput("generator matrix is not invertible".into()))?;
        }
        Ok(GroupSpec {
            name: "custom".into(),
            cyclotomic_order,
            rank,
            generators,
            degrees: None,
        })
    }

    /// Built-in families: `cyclic:m`, `s3-reflection`, `minus-id:r`, `trivial:r`.
    pub fn named(name: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown group family '{name}'"));
        let (family, arg) = match name.split_once(':') {
            Some((f, a)) => (f, Some(a.parse::<u32>().map_err(|_| bad())?)),
            None => (name, None),
        };
        let mut spec = match (family, arg) {
            ("cyclic", Some(m)) if m >= 1 => {
                let g = Matrix::from_rows(vec![vec![CycloNumber::root(m, 1)?]], m)?;
                let mut s = GroupSpec::new(m, 1, vec![g])?;
                s.degrees = Some(vec![m]);
                s
            }
            ("s3-reflection", None) => {
                let i = |v: i64| CycloNumber::from_int(v, 1);
                let s1 = Matrix::from_rows(vec![vec![i(-1), i(1)], vec![i(0), i(1)]], 1)?;
                let s2 = Matrix::from_rows(vec![vec![i(1), i(0)], vec![i(1), i(-1)]], 1)?;
                let mut s = GroupSpec::new(1, 2, vec![s1, s2])?;
                s.degrees = Some(vec![2, 3]);
                s
            }
            ("minus-id", Some(r)) if r >= 1 => {
                let mut m = Matrix::identity(r as usize, 1);
                for k in 0..r as usize {
                    m.set(k, k, CycloNumber::from_int(-1, 1));
                }
                let mut s = GroupSpec::new(1, r as usize, vec![m])?;
                if r == 1 {
                    s.degrees = Some(vec![2]);
                }
                s
            }
            ("trivial", Some(r)) if r >= 1 => {
                let mut s = GroupSpec::new(1, r as usize, vec![])?;
                s.degrees = Some(vec![1; r as usize]);
                s
            }
            _ => return Err(bad()),
        };
        spec.name = name.to_string();
        Ok(spec)
    }

    pub fn from_file_spec(file: &GroupSpecFile) -> Result<Self> {
        let n = file.cyclotomic_order;
        let r = file.rank;
        let mut gens = Vec::new();
        for (k, flat) in file.generators.iter().enumerate() {
            if flat.len() != r * r {
                return Err(Error::InvalidInput(format!(
                    "generator {k} has {} entries, expected {}",
                    flat.len(),
                    r * r
                )));
            }
            let rows = flat
                .chunks(r)
                .map(|row| row.iter().map(|s| CycloNumber::parse_in(s, n)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            gens.push(Matrix::from_rows(rows, n)?);
        }
        let mut spec = GroupSpec::new(n, r, gens)?;
        spec.degrees = file.degrees.clone();
        Ok(spec)
    }

    pub fn to_file_spec(&self) -> GroupSpecFile {
        GroupSpecFile {
            cyclotomic_order: self.cyclotomic_order,
            rank: self.rank,
            generators: self
                .generators
                .iter()
                .map(|g| {
                    (0..g.rows())
                        .flat_map(|i| g.row(i).into_iter().map(|v| v.to_string()))
                        .collect()
                })
                .collect(),
            degrees: self.degrees.clone(),
        }
    }
}

/// Normalized eigendata of a reflection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionDatum {
    pub element: usize,
    /// Covector in h*, first nonzero coordinate 1.
    pub alpha: Vec<CycloNumber>,
    /// Vector in h with ⟨alpha, alpha_check⟩ = 2.
    pub alpha_check: Vec<CycloNumber>,
    /// Nontrivial eigenvalue of the reflection on h*.
    pub lambda: CycloNumber,
    pub class_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicClass {
    pub representative: Vec<usize>,
    pub class_size: usize,
    pub fixed_space_dim_h: usize,
    pub leaf_dim: usize,
    pub normalizer_order: usize,
}

/// A finite group enumerated from its generators. Index 0 is the identity.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    spec: GroupSpec,
    elements: Vec<Matrix>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    class_of: Vec<usize>,
    index: HashMap<Matrix, usize>,
}

impl ReflectionGroup {
    pub fn close(spec: GroupSpec) -> Result<Self> {
        Self::close_with_cap(spec, DEFAULT_GROUP_CAP)
    }

    pub fn close_with_cap(spec: GroupSpec, cap: usize) -> Result<Self> {
        let id = Matrix::identity(spec.rank, spec.cyclotomic_order);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in &spec.generators {
                let p = elements[e].mul(g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::Budget(format!("group closure exceeds {cap} elements")));
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = elements[a].mul(&elements[b]);
                table[a][b] = *index
                    .get(&p)
                    .ok_or_else(|| Error::Inconsistency("group not closed under products".into()))?;
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).expect("finite group has inverses"))
            .collect::<Vec<_>>();
        let mut class_of = vec![usize::MAX; n];
        let mut next = 0;
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            for g in 0..n {
                let c = table[table[g][a]][inverse[g]];
                class_of[c] = next;
            }
            next += 1;
        }
        Ok(ReflectionGroup {
            spec,
            elements,
            table,
            inverse,
            class_of,
            index,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn field_order(&self) -> u32 {
        self.spec.cyclotomic_order
    }

    pub fn element(&self, g: usize) -> &Matrix {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Conjugacy class id of each element (numbered by first appearance).
    pub fn conjugacy_class(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.spec
            .generators
            .iter()
            .map(|g| self.index[g])
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut p = a;
        while p != 0 {
            p = self.table[p][a];
            k += 1;
        }
        k
    }

    /// The same abstract group acting on h* by (g^{-1})^T, with identical indexing.
    pub fn dual(&self) -> ReflectionGroup {
        let elements: Vec<Matrix> = (0..self.order())
            .map(|g| self.elements[self.inverse[g]].transpose())
            .collect();
        let index = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let generators = self
            .generator_indices()
            .into_iter()
            .map(|g| elements[g].clone())
            .collect();
        ReflectionGroup {
            spec: GroupSpec {
                name: format!("{}*", self.spec.name),
                generators,
                ..self.spec.clone()
            },
            elements,
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            class_of: self.class_of.clone(),
            index,
        }
    }

    fn fixed_space(&self, members: &[usize]) -> Vec<Vec<CycloNumber>> {
        let r = self.rank();
        let n = self.field_order();
        let id = Matrix::identity(r, n);
        let mut rows = Vec::new();
        for &g in members {
            let d = self.elements[g].sub(&id);
            for i in 0..r {
                rows.push(d.row(i));
            }
        }
        if rows.is_empty() {
            return Matrix::identity(r, n).nullspace_complement_basis();
        }
        Matrix::from_rows(rows, n).unwrap().nullspace()
    }

    /// Every non-identity element fixing a hyperplane of h pointwise, with
    /// eigendata normalized as described on [`ReflectionDatum`].
    pub fn find_reflections(&self) -> Vec<ReflectionDatum> {
        let r = self.rank();
        let n = self.field_order();
        let id = Matrix::identity(r, n);
        let mut class_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for s in 1..self.order() {
            let d = self.elements[s].sub(&id);
            if d.rank() != 1 {
                continue;
            }
            // Any nonzero row of s - 1 annihilates the fixed hyperplane.
            let row = (0..r).map(|i| d.row(i)).find(|row| row.iter().any(|v| !v.is_zero())).unwrap();
            let lead = row.iter().find(|v| !v.is_zero()).unwrap().inv().unwrap();
            let alpha: Vec<CycloNumber> = row.iter().map(|v| v * &lead).collect();
            let col = (0..r).map(|j| d.column(j)).find(|c| c.iter().any(|v| !v.is_zero())).unwrap();
            let pairing = alpha
                .iter()
                .zip(&col)
                .fold(CycloNumber::zero(n), |acc, (a, b)| &acc + &(a * b));
            let scale = &CycloNumber::from_int(2, n) * &pairing.inv().expect("eigenline is transverse to the hyperplane");
            let alpha_check: Vec<CycloNumber> = col.iter().map(|v| v * &scale).collect();
            // s α^∨ = μ α^∨ on h; on h* the eigenvalue is μ^{-1}.
            let image = self.elements[s].mul_vec(&alpha_check);
            let k = alpha_check.iter().position(|v| !v.is_zero()).unwrap();
            let mu = image[k].checked_div(&alpha_check[k]).unwrap();
            let lambda = mu.inv().unwrap();
            let next = class_ids.len();
            let class_id = *class_ids.entry(self.class_of[s]).or_insert(next);
            out.push(ReflectionDatum {
                element: s,
                alpha,
                alpha_check,
                lambda,
                class_id,
            });
        }
        out
    }

    fn closure_of(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = seed.clone();
        set.insert(0);
        let gens: Vec<usize> = seed.iter().copied().collect();
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        while let Some(a) = queue.pop_front() {
            for &g in &gens {
                let p = self.table[a][g];
                if set.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        set
    }

    /// All subgroups, by repeatedly joining cyclic subgroups.
    pub fn subgroups(&self, budget: usize) -> Result<Vec<Vec<usize>>> {
        let n = self.order();
        let cyclic: BTreeSet<BTreeSet<usize>> = (0..n).map(|g| self.closure_of(&BTreeSet::from([g]))).collect();
        let mut all: BTreeSet<BTreeSet<usize>> = cyclic.clone();
        let mut frontier: Vec<BTreeSet<usize>> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset(h) {
                        continue;
                    }
                    let mut seed = h.clone();
                    seed.extend(c.iter().copied());
                    let j = self.closure_of(&seed);
                    if !all.contains(&j) {
                        if all.len() >= budget {
                            return Err(Error::Budget(format!("more than {budget} subgroups")));
                        }
                        all.insert(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        Ok(all.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    /// Elements fixing every vector of `basis` (vectors in h).
    pub fn pointwise_stabilizer(&self, basis: &[Vec<CycloNumber>]) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| basis.iter().all(|v| &self.elements[g].mul_vec(v) == v))
            .collect()
    }

    fn conjugate(&self, members: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inverse[g];
        let mut c: Vec<usize> = members.iter().map(|&h| self.table[self.table[g][h]][gi]).collect();
        c.sort_unstable();
        c
    }

    /// Conjugacy classes of parabolic subgroups, i.e. subgroups W' equal to
    /// the pointwise stabilizer of h^{W'}.
    pub fn parabolic_classes(&self) -> Result<Vec<ParabolicClass>> {
        self.parabolic_classes_with_budget(DEFAULT_SUBGROUP_BUDGET)
    }

    pub fn parabolic_classes_with_budget(&self, budget: usize) -> Result<Vec<ParabolicClass>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for h in self.subgroups(budget)? {
            if seen.contains(&h) {
                continue;
            }
            let fixed = self.fixed_space(&h);
            if self.pointwise_stabilizer(&fixed) != h {
                continue;
            }
            let conjugates: BTreeSet<Vec<usize>> = (0..self.order()).map(|g| self.conjugate(&h, g)).collect();
            let rep = conjugates.iter().next().unwrap().clone();
            seen.extend(conjugates.iter().cloned());
            out.push(ParabolicClass {
                representative: rep,
                class_size: conjugates.len(),
                fixed_space_dim_h: fixed.len(),
                leaf_dim: 2 * fixed.len(),
                normalizer_order: self.order() / conjugates.len(),
            });
        }
        out.sort_by(|a, b| {
            b.fixed_space_dim_h
                .cmp(&a.fixed_space_dim_h)
                .then_with(|| a.representative.cmp(&b.representative))
        });
        Ok(out)
    }

    /// All one-dimensional characters with values in the coefficient field.
    pub fn linear_characters(&self) -> Vec<Character> {
        let n = self.field_order();
        let root_order = if n % 2 == 0 { n } else { 2 * n };
        let roots: Vec<CycloNumber> = (0..root_order)
            .map(|k| {
                if n % 2 == 0 {
                    CycloNumber::root(n, k as i64).unwrap()
                } else {
                    // ζ_{2n}^k = (-1)^k ζ_n^{k (n+1)/2}
                    let base = CycloNumber::root(n, (k as i64) * ((n as i64 + 1) / 2)).unwrap();
                    if k % 2 == 1 {
                        -base
                    } else {
                        base
                    }
                }
            })
            .collect();
        let gens = self.generator_indices();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let values: Vec<CycloNumber> = choice.iter().map(|&k| roots[k].clone()).collect();
            if let Ok(ch) = Character::from_generator_values(self, &values) {
                if !out.contains(&ch) {
                    out.push(ch);
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < roots.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

trait NullComplement {
    fn nullspace_complement_basis(&self) -> Vec<Vec<CycloNumber>>;
}

impl NullComplement for Matrix {
    /// Standard basis of the whole space (used when no constraints are given).
    fn nullspace_complement_basis(&self) -> Vec<Vec<CycloNumber>> {
        (0..self.rows()).map(|i| self.row(i)).collect()
    }
}

/// A one-dimensional character W → Q(ζ_N)^×, stored by value on each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    values: Vec<CycloNumber>,
}

impl Character {
    pub fn trivial(group: &ReflectionGroup) -> Self {
        Character {
            values: vec![CycloNumber::one(group.field_order()); group.order()],
        }
    }

    /// Extend prescribed values on the group generators multiplicatively and
    /// check the result is a homomorphism.
    pub fn from_generator_values(group: &ReflectionGroup, values: &[CycloNumber]) -> Result<Self> {
        let gens = group.generator_indices();
        if values.len() != gens.len() {
            return Err(Error::InvalidInput(format!(
                "character needs {} generator values, got {}",
                gens.len(),
                values.len()
            )));
        }
        let n = group.field_order();
        let mut table: Vec<Option<CycloNumber>> = vec![None; group.order()];
        table[0] = Some(CycloNumber::one(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (k, &g) in gens.iter().enumerate() {
                let p = group.mul(a, g);
                let v = table[a].as_ref().unwrap() * &values[k].embed(n)?;
                match &table[p] {
                    Some(existing) if existing != &v => {
                        return Err(Error::InvalidInput("character values are not multiplicative".into()));
                    }
                    Some(_) => {}
                    None => {
                        table[p] = Some(v);
                        queue.push_back(p);
                    }
                }
            }
        }
        let ch = Character {
            values: table.into_iter().map(|v| v.unwrap()).collect(),
        };
        ch.check(group)?;
        Ok(ch)
    }

    pub fn from_values(group: &ReflectionGroup, values: Vec<CycloNumber>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidInput("character table has the wrong length".into()));
        }
        let ch = Character { values };
        ch.check(group)?;
        Ok(ch)
    }

    fn check(&self, group: &ReflectionGroup) -> Result<()> {
        for a in 0..group.order() {
            for b in 0..group.order() {
                if &self.values[a] * &self.values[b] != self.values[group.mul(a, b)] {
                    return Err(Error::InvalidInput("character is not multiplicative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, g: usize) -> &CycloNumber {
        &self.values[g]
    }

    pub fn values(&self) -> &[CycloNumber] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    /// Pointwise product.
    pub fn twist(&self, other: &Character) -> Character {
        Character {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    /// Values on the group generators, as scalar strings.
    pub fn generator_labels(&self, group: &ReflectionGroup) -> Vec<String> {
        group
            .generator_indices()
            .into_iter()
            .map(|g| self.values[g].to_string())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> ReflectionGroup {
        ReflectionGroup::close(GroupSpec::named(name).unwrap()).unwrap()
    }

    #[test]
    fn closure_orders() {
        assert_eq!(group("cyclic:2").order(), 2);
        assert_eq!(group("cyclic:3").order(), 3);
        assert_eq!(group("s3-reflection").order(), 6);
        assert_eq!(group("minus-id:2").order(), 2);
        assert_eq!(group("trivial:1").order(), 1);
    }

    #[test]
    fn closure_budget() {
        let spec = GroupSpec::named("cyclic:12").unwrap();
        assert!(matches!(ReflectionGroup::close_with_cap(spec, 5), Err(Error::Budget(_))));
    }

    #[test]
    fn singular_generator_rejected() {
        let z = Matrix::zeros(1, 1, 1);
        assert!(GroupSpec::new(1, 1, vec![z]).is_err());
    }

    #[test]
    fn reflection_counts() {
        let z3 = group("cyclic:3").find_reflections();
        assert_eq!(z3.len(), 2);
        assert_ne!(z3[0].class_id, z3[1].class_id);
        assert!(group("minus-id:2").find_reflections().is_empty());
        let s3 = group("s3-reflection").find_reflections();
        assert_eq!(s3.len(), 3);
        assert!(s3.iter().all(|r| r.class_id == 0));
    }

    #[test]
    fn reflection_normalization() {
        for name in ["cyclic:2", "cyclic:3", "cyclic:4", "s3-reflection"] {
            let g = group(name);
            let n = g.field_order();
            for r in g.find_reflections() {
                let pairing = r
                    .alpha
                    .iter()
                    .zip(&r.alpha_check)
                    .fold(CycloNumber::zero(n), |acc, (a, b)| &acc + &(a * b));
                assert_eq!(pairing, CycloNumber::from_int(2, n));
                assert!(r.alpha.iter().find(|v| !v.is_zero()).unwrap().is_one());
                let s = g.element(r.element);
                // α ∘ s^{-1} = λ α on h*, and s α^∨ = λ^{-1} α^∨ on h.
                let sinv = s.inverse().unwrap();
                let row = Matrix::from_rows(vec![r.alpha.clone()], n).unwrap().mul(&sinv);
                let expected: Vec<CycloNumber> = r.alpha.iter().map(|a| a * &r.lambda).collect();
                assert_eq!(row.row(0), expected);
                let img = s.mul_vec(&r.alpha_check);
                let lam_inv = r.lambda.inv().unwrap();
                let expected: Vec<CycloNumber> = r.alpha_check.iter().map(|a| a * &lam_inv).collect();
                assert_eq!(img, expected);
                assert!(!r.lambda.is_one());
            }
        }
    }

    #[test]
    fn parabolics() {
        let z3 = group("cyclic:3").parabolic_classes().unwrap();
        let dims: Vec<usize> = z3.iter().map(|c| c.leaf_dim).collect();
        assert_eq!(dims, vec![2, 0]);
        let m = group("minus-id:2").parabolic_classes().unwrap();
        assert_eq!(m.iter().map(|c| c.leaf_dim).collect::<Vec<_>>(), vec![4, 0]);
        let s3g = group("s3-reflection");
        let s3 = s3g.parabolic_classes().unwrap();
        assert_eq!(s3.iter().map(|c| c.leaf_dim).collect::<Vec<_>>(), vec![4, 2, 0]);
        assert_eq!(s3[1].representative.len(), 2);
        assert_eq!(s3[1].class_size, 3);
        for c in &s3 {
            let fixed = s3g.fixed_space(&c.representative);
            assert_eq!(s3g.pointwise_stabilizer(&fixed), c.representative);
            assert_eq!(c.leaf_dim, 2 * c.fixed_space_dim_h);
        }
    }

    #[test]
    fn linear_characters_of_small_groups() {
        assert_eq!(group("cyclic:3").linear_characters().len(), 3);
        assert_eq!(group("cyclic:2").linear_characters().len(), 2);
        // S_3 has the trivial and the sign character.
        assert_eq!(group("s3-reflection").linear_characters().len(), 2);
        assert!(group("s3-reflection").linear_characters()[0].is_trivial());
    }

    #[test]
    fn dual_group_preserves_indexing() {
        let g = group("cyclic:3");
        let d = g.dual();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(d.element(a).mul(d.element(b)), *d.element(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn file_spec_round_trip() {
        let spec = GroupSpec::named("s3-reflection").unwrap();
        let file = spec.to_file_spec();
        let back = GroupSpec::from_file_spec(&file).unwrap();
        assert_eq!(back.generators, spec.generators);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: GroupSpecFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, file);
    }
}
