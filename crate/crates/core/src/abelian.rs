//! Finite abelian groups given by generators and relations, put into Smith
//! normal form, plus an enumerator that discovers the structure of a small
//! black-box group.

use std::collections::HashMap;
use std::hash::Hash;

/// Diagonalise `rows` (relations over `ngens` generators) by unimodular row
/// and column operations. Returns the diagonal and the column transform V
/// together with its inverse, so that `x ↦ x·V` sends generator coordinates to
/// diagonal coordinates.
pub fn smith_normal_form(rows: &[Vec<i64>], ngens: usize) -> (Vec<i128>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    for r in &mut a {
        r.resize(ngens, 0);
    }
    let nrows = a.len();
    let mut v: Vec<Vec<i128>> = identity(ngens);
    let mut vinv: Vec<Vec<i128>> = identity(ngens);
    let mut diag = Vec::new();

    // Column op: col_j += k * col_i. V tracks columns; V^{-1} tracks inverse row ops.
    let col_add = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, vinv: &mut Vec<Vec<i128>>, i: usize, j: usize, k: i128| {
        for row in a.iter_mut() {
            row[j] += k * row[i];
        }
        for row in v.iter_mut() {
            row[j] += k * row[i];
        }
        // inverse: row_i -= k * row_j
        let rj = vinv[j].clone();
        for (x, y) in vinv[i].iter_mut().zip(rj) {
            *x -= k * y;
        }
    };
    let col_swap = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, vinv: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };

    for t in 0..ngens.min(nrows) {
        loop {
            // pivot: smallest nonzero |entry| in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            if pj != t {
                col_swap(&mut a, &mut v, &mut vinv, t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nrows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..ngens {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    col_add(&mut a, &mut v, &mut vinv, t, j, -q);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..nrows).find(|&i| a[i].iter().skip(t + 1).any(|&x| x % p != 0));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a.get(t).map_or(0, |r| r[t]).abs());
    }
    while diag.len() < ngens {
        diag.push(0);
    }
    (diag, v, vinv)
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// A finite abelian group Z^g / R in Smith form ⊕ Z/d_i with d_{i+1} | d_i.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    ngens: usize,
    invariants: Vec<u64>,
    /// generator coordinate j ↦ contribution to invariant coordinate i: `to_snf[j][i]`.
    to_snf: Vec<Vec<i128>>,
    /// invariant coordinate i ↦ generator coordinates.
    from_snf: Vec<Vec<i128>>,
}

impl AbelianGroup {
    /// Panics if the relations do not define a finite group.
    pub fn from_relations(ngens: usize, relations: &[Vec<i64>]) -> Self {
        let (diag, v, vinv) = smith_normal_form(relations, ngens);
        assert!(diag.iter().all(|&d| d != 0), "relations must define a finite group");
        // keep nontrivial factors, largest first
        let mut idx: Vec<usize> = (0..ngens).filter(|&i| diag[i] != 1).collect();
        idx.reverse();
        let invariants: Vec<u64> = idx.iter().map(|&i| diag[i] as u64).collect();
        let to_snf = (0..ngens).map(|j| idx.iter().map(|&i| v[j][i]).collect()).collect();
        let from_snf = idx.iter().map(|&i| vinv[i].clone()).collect();
        AbelianGroup { ngens, invariants, to_snf, from_snf }
    }

    pub fn trivial() -> Self {
        AbelianGroup { ngens: 0, invariants: vec![], to_snf: vec![], from_snf: vec![] }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Generator coordinates → canonical invariant coordinates.
    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        self.invariants
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let s: i128 = x.iter().zip(&self.to_snf).map(|(&xj, row)| xj as i128 * row[i]).sum();
                s.rem_euclid(d as i128) as u64
            })
            .collect()
    }

    /// Invariant coordinates → some generator coordinate vector.
    pub fn lift(&self, y: &[u64]) -> Vec<i64> {
        let mut out = vec![0i128; self.ngens];
        for (row, &yi) in self.from_snf.iter().zip(y) {
            for (o, &r) in out.iter_mut().zip(row) {
                *o += r * yi as i128;
            }
        }
        out.into_iter().map(|x| x as i64).collect()
    }
}

/// A small finite abelian group given by its elements, with a table of
/// coordinates in Smith form.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup<T: Hash + Eq + Clone> {
    pub group: AbelianGroup,
    coords: HashMap<T, Vec<u64>>,
    /// Elements realising the invariant-factor generators.
    pub generators: Vec<T>,
}

impl<T: Hash + Eq + Clone> EnumeratedGroup<T> {
    /// Discover the structure of the group generated by `candidates` by
    /// building the subgroup one cyclic extension at a time.
    pub fn build(identity: T, candidates: impl IntoIterator<Item = T>, mul: impl Fn(&T, &T) -> T, order_hint: Option<usize>) -> Self {
        let mut table: HashMap<T, Vec<i64>> = HashMap::new();
        table.insert(identity.clone(), vec![]);
        let mut gens: Vec<T> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for c in candidates {
            if order_hint.is_some_and(|h| table.len() >= h) {
                break;
            }
            if table.contains_key(&c) {
                continue;
            }
            let j = gens.len();
            // smallest k with c^k in the current subgroup
            let mut power = c.clone();
            let mut k = 1i64;
            while !table.contains_key(&power) {
                power = mul(&power, &c);
                k += 1;
            }
            let mut rel = table[&power].iter().map(|x| -x).collect::<Vec<_>>();
            rel.resize(j, 0);
            rel.push(k);
            relations.push(rel);
            let old: Vec<(T, Vec<i64>)> = table.iter().map(|(e, v)| (e.clone(), v.clone())).collect();
            for (e, v) in &mut table {
                let _ = e;
                v.resize(j + 1, 0);
            }
            let mut shifted: Vec<(T, Vec<i64>)> = old;
            for i in 1..k {
                shifted = shifted
                    .into_iter()
                    .map(|(e, mut v)| {
                        v.resize(j + 1, 0);
                        v[j] = i;
                        (mul(&e, &c), v)
                    })
                    .collect();
                for (e, v) in &shifted {
                    table.insert(e.clone(), v.clone());
                }
            }
            gens.push(c);
        }
        let ngens = gens.len();
        for r in &mut relations {
            r.resize(ngens, 0);
        }
        let group = if ngens == 0 { AbelianGroup::trivial() } else { AbelianGroup::from_relations(ngens, &relations) };
        let coords = table
            .into_iter()
            .map(|(e, mut v)| {
                v.resize(ngens, 0);
                let y = group.reduce(&v);
                (e, y)
            })
            .collect::<HashMap<_, _>>();
        let mut generators = Vec::new();
        for i in 0..group.invariants().len() {
            let mut target = vec![0u64; group.invariants().len()];
            target[i] = 1;
            let e = coords.iter().find(|(_, v)| **v == target).map(|(e, _)| e.clone()).expect("complete table");
            generators.push(e);
        }
        EnumeratedGroup { group, coords, generators }
    }

    pub fn coords(&self, x: &T) -> Option<&[u64]> {
        self.coords.get(x).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = (&T, &Vec<u64>)> {
        self.coords.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_simple_relations() {
        // Z^2 / <(2,0),(0,3)> = Z/6
        let g = AbelianGroup::from_relations(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(g.invariants(), &[6]);
        // Z^2 / <(2,0),(0,4)> = Z/4 x Z/2
        let g = AbelianGroup::from_relations(2, &[vec![2, 0], vec![0, 4]]);
        assert_eq!(g.invariants(), &[4, 2]);
        // Z^3 / <(1,1,0),(0,2,0),(0,0,1)> = Z/2
        let g = AbelianGroup::from_relations(3, &[vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 1]]);
        assert_eq!(g.invariants(), &[2]);
        assert_eq!(g.reduce(&[1, 0, 0]), g.reduce(&[0, 1, 0]));
        assert_eq!(g.reduce(&[1, 1, 0]), vec![0]);
    }

    #[test]
    fn reduce_kills_relations_and_lift_inverts() {
        let rels = vec![vec![4, 6, 0], vec![6, 4, 2], vec![0, 2, 8], vec![2, 2, 2]];
        let g = AbelianGroup::from_relations(3, &rels);
        for r in &rels {
            assert!(g.reduce(r).iter().all(|&x| x == 0));
        }
        for x in 0..g.invariants()[0] {
            let y: Vec<u64> = std::iter::once(x).chain(std::iter::repeat(0)).take(g.invariants().len()).collect();
            assert_eq!(g.reduce(&g.lift(&y)), y);
        }
        // order = |det| of the relation lattice, by brute force count of Z^3 / L
        let n = 16i64;
        let mut seen = std::collections::HashSet::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    seen.insert(g.reduce(&[a, b, c]));
                }
            }
        }
        assert_eq!(seen.len() as u64, g.order());
    }

    #[test]
    fn enumerated_unit_groups() {
        // (Z/15)^x = Z/4 x Z/2
        let units: Vec<u64> = (1..15).filter(|x| crate::arith::gcd(*x, 15) == 1).collect();
        let g = EnumeratedGroup::build(1u64, units.clone(), |a, b| a * b % 15, None);
        assert_eq!(g.group.invariants(), &[4, 2]);
        assert_eq!(g.len(), 8);
        // coordinates are a homomorphism
        for &a in &units {
            for &b in &units {
                let ca = g.coords(&a).unwrap();
                let cb = g.coords(&b).unwrap();
                let sum: Vec<i64> = ca.iter().zip(cb).map(|(x, y)| (x + y) as i64).collect();
                let inv = g.group.invariants();
                let expect: Vec<u64> = sum.iter().zip(inv).map(|(s, d)| *s as u64 % d).collect();
                assert_eq!(g.coords(&(a * b % 15)).unwrap(), expect.as_slice());
            }
        }
        // (Z/8)^x = Z/2 x Z/2 ; (Z/7)^x = Z/6
        let g8 = EnumeratedGroup::build(1u64, [3u64, 5, 7], |a, b| a * b % 8, None);
        assert_eq!(g8.group.invariants(), &[2, 2]);
        let g7 = EnumeratedGroup::build(1u64, 1u64..7, |a, b| a * b % 7, None);
        assert_eq!(g7.group.invariants(), &[6]);
    }
}
