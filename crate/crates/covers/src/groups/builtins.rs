//! Built-in group constructions: cyclic, symmetric, dihedral, quaternion,
//! and direct products. Each is built from an explicit element model and
//! tabulated, with the identity at index 0 and product elements ordered
//! lexicographically.

use super::{FiniteGroup, GroupError};

struct BuiltTable {
    order: usize,
    table: Vec<u16>,
}

fn tabulate<E: Clone + Eq + std::hash::Hash>(
    elems: Vec<E>,
    mul: impl Fn(&E, &E) -> E,
) -> BuiltTable {
    let n = elems.len();
    let index: std::collections::HashMap<E, usize> = elems
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let mut table = vec![0u16; n * n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            table[i * n + j] = index[&mul(a, b)] as u16;
        }
    }
    BuiltTable { order: n, table }
}

fn cyclic(n: usize) -> BuiltTable {
    let mut table = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u16;
        }
    }
    BuiltTable { order: n, table }
}

/// One-line permutations of `0..k` in lexicographic order, so the identity
/// comes first. This is the element order of the symmetric-group builtin.
pub(crate) fn symmetric_permutations(k: usize) -> Vec<Vec<u8>> {
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut cur: Vec<u8> = (0..k as u8).collect();
    let mut used = vec![false; k];
    fn gen(cur: &mut Vec<u8>, used: &mut [bool], depth: usize, out: &mut Vec<Vec<u8>>) {
        let k = used.len();
        if depth == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                cur[depth] = v as u8;
                gen(cur, used, depth + 1, out);
                used[v] = false;
            }
        }
    }
    gen(&mut cur, &mut used, 0, &mut perms);
    perms
}

/// Symmetric group on k letters. Composition applies the right factor
/// first: `(p·q)(x) = p(q(x))`.
fn symmetric(k: usize) -> BuiltTable {
    let perms = symmetric_permutations(k);
    tabulate(perms, |p, q| q.iter().map(|&x| p[x as usize]).collect())
}

/// Dihedral group of order 2n as the semidirect product Zn ⋊ Z2:
/// elements (a, b) with (a1,b1)(a2,b2) = (a1 + (−1)^b1·a2, b1+b2).
fn dihedral(n: usize) -> BuiltTable {
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|b| (0..n).map(move |a| (a, b))).collect();
    // order rotations first so the identity (0,0) is index 0
    tabulate(elems, move |&(a1, b1), &(a2, b2)| {
        let a = if b1 == 0 {
            (a1 + a2) % n
        } else {
            (a1 + n - a2) % n
        };
        (a, (b1 + b2) % 2)
    })
}

/// Quaternion group of order 8: elements ±1, ±i, ±j, ±k as (sign, axis).
fn quaternion8() -> BuiltTable {
    // axis composition table over (1, i, j, k): value and sign flip
    const AXIS: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|s| (0..4).map(move |t| (s, t))).collect();
    tabulate(elems, |&(s1, t1), &(s2, t2)| {
        let (t, flip) = AXIS[t1][t2];
        ((s1 + s2 + usize::from(flip)) % 2, t)
    })
}

fn direct_product(a: &BuiltTable, b: &BuiltTable) -> BuiltTable {
    let n = a.order * b.order;
    let mut table = vec![0u16; n * n];
    for i1 in 0..a.order {
        for j1 in 0..b.order {
            let x = i1 * b.order + j1;
            for i2 in 0..a.order {
                for j2 in 0..b.order {
                    let y = i2 * b.order + j2;
                    let p = a.table[i1 * a.order + i2] as usize * b.order
                        + b.table[j1 * b.order + j2] as usize;
                    table[x * n + y] = p as u16;
                }
            }
        }
    }
    BuiltTable { order: n, table }
}

fn atom_order(atom: &str) -> Result<usize, GroupError> {
    let unknown = || GroupError::UnknownSpec(atom.to_owned());
    if atom == "Q8" {
        return Ok(8);
    }
    let (head, num) = atom.split_at(1);
    let n: usize = num.parse().map_err(|_| unknown())?;
    match head {
        "Z" if n >= 1 => Ok(n),
        "S" if (1..=8).contains(&n) => Ok((1..=n).product()),
        "D" if n >= 1 => Ok(2 * n),
        _ => Err(unknown()),
    }
}

fn build_atom(atom: &str) -> Result<BuiltTable, GroupError> {
    if atom == "Q8" {
        return Ok(quaternion8());
    }
    let (head, num) = atom.split_at(1);
    let n: usize = num
        .parse()
        .map_err(|_| GroupError::UnknownSpec(atom.to_owned()))?;
    match head {
        "Z" => Ok(cyclic(n)),
        "S" => Ok(symmetric(n)),
        "D" => Ok(dihedral(n)),
        _ => Err(GroupError::UnknownSpec(atom.to_owned())),
    }
}

pub(super) fn parse_spec(spec: &str, cap: usize) -> Result<FiniteGroup, GroupError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(GroupError::UnknownSpec(spec.to_owned()));
    }
    let atoms: Vec<&str> = spec.split('x').map(str::trim).collect();
    let mut order: usize = 1;
    for atom in &atoms {
        if atom.is_empty() {
            return Err(GroupError::UnknownSpec(spec.to_owned()));
        }
        order = order
            .checked_mul(atom_order(atom)?)
            .ok_or(GroupError::OrderCapExceeded { order: usize::MAX, cap })?;
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
    }
    let mut built = build_atom(atoms[0])?;
    for atom in &atoms[1..] {
        built = direct_product(&built, &build_atom(atom)?);
    }
    FiniteGroup::from_parts(spec.to_owned(), built.order, built.table, false)
}
