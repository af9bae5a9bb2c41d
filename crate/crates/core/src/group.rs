//! Finite groups given by Cayley tables.
//!
//! Element ids are dense `0..order` and the identity is always id 0. Every
//! constructor goes through [`FiniteGroup::from_table`], which checks the
//! group axioms exhaustively.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};

/// Largest group order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 256;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    cayley: Vec<usize>,
    inverse: Vec<usize>,
    abelian_structure: Option<Vec<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .field("abelian_structure", &self.abelian_structure)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major Cayley table, `table[s][t] = s·t`.
    ///
    /// If the identity is not element 0 the elements are relabelled by
    /// swapping the identity into slot 0.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        abelian_structure: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(LabError::InvalidGroup("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(LabError::OutOfRange(format!("order {n} exceeds {MAX_ORDER}")));
        }
        if labels.len() != n {
            return Err(LabError::InvalidGroup(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(LabError::InvalidGroup("malformed Cayley table row".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|t| table[e][t] == t && table[t][e] == t))
            .ok_or_else(|| LabError::InvalidGroup("no identity element".into()))?;

        // swap identity into position 0
        let relabel: Vec<usize> = (0..n)
            .map(|i| {
                if i == identity {
                    0
                } else if i == 0 {
                    identity
                } else {
                    i
                }
            })
            .collect();
        let mut cayley = vec![0; n * n];
        let mut new_labels = labels.clone();
        for s in 0..n {
            new_labels[relabel[s]] = labels[s].clone();
            for t in 0..n {
                cayley[relabel[s] * n + relabel[t]] = relabel[table[s][t]];
            }
        }

        let mut inverse = vec![usize::MAX; n];
        for s in 0..n {
            for t in 0..n {
                if cayley[s * n + t] == 0 && cayley[t * n + s] == 0 {
                    inverse[s] = t;
                    break;
                }
            }
            if inverse[s] == usize::MAX {
                return Err(LabError::InvalidGroup(format!(
                    "element {} has no inverse",
                    new_labels[s]
                )));
            }
        }

        for a in 0..n {
            for b in 0..n {
                let ab = cayley[a * n + b];
                for c in 0..n {
                    if cayley[ab * n + c] != cayley[a * n + cayley[b * n + c]] {
                        return Err(LabError::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }

        let group = FiniteGroup {
            name: name.into(),
            labels: new_labels,
            cayley,
            inverse,
            abelian_structure,
        };
        if let Some(structure) = &group.abelian_structure {
            let prod: usize = structure.iter().product();
            if prod != n || !group.is_commutative() {
                return Err(LabError::InvalidGroup(
                    "abelian structure inconsistent with the table".into(),
                ));
            }
        }
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.inverse.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.cayley[s * self.order() + t]
    }

    #[inline]
    pub fn inv(&self, s: usize) -> usize {
        self.inverse[s]
    }

    pub fn abelian_structure(&self) -> Option<&[usize]> {
        self.abelian_structure.as_deref()
    }

    /// Cayley table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.cayley.chunks(self.order()).map(|r| r.to_vec()).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|s| (0..s).all(|t| self.mul(s, t) == self.mul(t, s)))
    }

    pub fn element_order(&self, s: usize) -> usize {
        let mut k = 1;
        let mut x = s;
        while x != 0 {
            x = self.mul(x, s);
            k += 1;
        }
        k
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Mixed-radix digits of `s` for groups built as a product of cyclic
    /// groups.
    pub fn cyclic_coordinates(&self, s: usize) -> Option<Vec<usize>> {
        let structure = self.abelian_structure.as_ref()?;
        let mut digits = vec![0; structure.len()];
        let mut rest = s;
        for (i, &n) in structure.iter().enumerate().rev() {
            digits[i] = rest % n;
            rest /= n;
        }
        Some(digits)
    }

    fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Cyclic group `Z_n`, `1 <= n <= 256`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(LabError::OutOfRange(format!("cyclic order {n} not in 1..=256")));
    }
    let labels = (0..n).map(|k| k.to_string()).collect();
    let table = (0..n).map(|s| (0..n).map(|t| (s + t) % n).collect()).collect();
    FiniteGroup::from_table(format!("Z{n}"), labels, table, Some(vec![n]))
}

/// Dihedral group of order `2n`: rotations `r^0..r^{n-1}` first, then the
/// reflections `r^k s`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup> {
    if !(2..=64).contains(&n) {
        return Err(LabError::OutOfRange(format!("dihedral parameter {n} not in 2..=64")));
    }
    // element (k, refl) = r^k s^refl, id = refl*n + k
    let id = |k: usize, refl: usize| refl * n + k;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..n {
        for ra in 0..2 {
            for b in 0..n {
                for rb in 0..2 {
                    // r^a s^ra r^b s^rb = r^(a ± b) s^(ra+rb)
                    let k = if ra == 0 { (a + b) % n } else { (a + n - b) % n };
                    table[id(a, ra)][id(b, rb)] = id(k, (ra + rb) % 2);
                }
            }
        }
    }
    let labels = (0..2 * n)
        .map(|x| if x < n { format!("r{x}") } else { format!("r{}s", x - n) })
        .collect();
    FiniteGroup::from_table(format!("D{n}"), labels, table, None)
}

/// Symmetric group `S_n`, `1 <= n <= 5`, elements in lexicographic order of
/// one-line notation. The product is composition: `(σ·τ)(i) = σ(τ(i))`.
pub fn make_symmetric(n: usize) -> Result<FiniteGroup> {
    if !(1..=5).contains(&n) {
        return Err(LabError::OutOfRange(format!("symmetric degree {n} not in 1..=5")));
    }
    let perms = permutations_lex(n);
    let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
    let table = perms
        .iter()
        .map(|sigma| {
            perms
                .iter()
                .map(|tau| {
                    let comp: Vec<usize> = tau.iter().map(|&i| sigma[i]).collect();
                    index(&comp)
                })
                .collect()
        })
        .collect();
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|&i| char::from(b'1' + i as u8)).collect())
        .collect();
    let structure = if n <= 2 { Some(vec![perms.len()]) } else { None };
    FiniteGroup::from_table(format!("S{n}"), labels, table, structure)
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Quaternion group `{±1, ±i, ±j, ±k}`.
pub fn make_quaternion() -> Result<FiniteGroup> {
    // unit index 0..4 = 1,i,j,k; unit products as (sign, unit)
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    // id = 2*unit + negative
    let mut table = vec![vec![0; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (neg, u) = UNIT[a / 2][b / 2];
            let sign = neg ^ (a % 2 == 1) ^ (b % 2 == 1);
            table[a][b] = 2 * u + sign as usize;
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table("Q8", labels, table, None)
}

/// Componentwise product; element `(g, h)` gets id `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (ng, nh) = (g.order(), h.order());
    if ng * nh > MAX_ORDER {
        return Err(LabError::OutOfRange(format!(
            "product order {} exceeds {MAX_ORDER}",
            ng * nh
        )));
    }
    let n = ng * nh;
    let table = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh))
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|x| format!("({},{})", g.label(x / nh), h.label(x % nh)))
        .collect();
    let structure = match (g.abelian_structure(), h.abelian_structure()) {
        (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
        _ => None,
    };
    FiniteGroup::from_table(format!("{}x{}", g.name(), h.name()), labels, table, structure)
}

/// The opposite group: same elements, `s ·op t = t · s`.
pub fn opposite(g: &FiniteGroup) -> FiniteGroup {
    let n = g.order();
    let mut cayley = vec![0; n * n];
    for s in 0..n {
        for t in 0..n {
            cayley[s * n + t] = g.mul(t, s);
        }
    }
    // inverses are unchanged and the axioms transfer from g
    FiniteGroup {
        name: format!("{}^op", g.name()),
        labels: g.labels.clone(),
        cayley,
        inverse: g.inverse.clone(),
        abelian_structure: g.abelian_structure.clone(),
    }
}

/// Parses `Z<n>`, `D<n>`, `S<n>`, `Q8` and `x`-separated products of these.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    if spec.is_empty() {
        return Err(LabError::Parse("empty group spec".into()));
    }
    if spec.chars().any(char::is_whitespace) {
        return Err(LabError::Parse(format!("whitespace in group spec {spec:?}")));
    }
    let lower = spec.to_ascii_lowercase();
    let mut acc: Option<FiniteGroup> = None;
    for factor in lower.split('x') {
        let g = parse_factor(factor)?;
        acc = Some(match acc {
            None => g,
            Some(a) => direct_product(&a, &g)?,
        });
    }
    Ok(acc.unwrap())
}

fn parse_factor(factor: &str) -> Result<FiniteGroup> {
    let bad = || LabError::Parse(format!("unrecognised group factor {factor:?}"));
    if factor == "q8" {
        return make_quaternion();
    }
    let mut chars = factor.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: usize = digits.parse().map_err(|_| bad())?;
    match kind {
        'z' => make_cyclic(n),
        'd' => make_dihedral(n),
        's' => make_symmetric(n),
        _ => Err(bad()),
    }
}

/// A validated subgroup of a parent group.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    is_normal: bool,
    group: Arc<FiniteGroup>,
}

impl SubgroupHandle {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// Sorted parent ids; position `i` is element `i` of [`Self::group`].
    pub fn member_ids(&self) -> &[usize] {
        &self.members
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, s: usize) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// Position of a parent id inside the subgroup, if it is a member.
    pub fn local_id(&self, s: usize) -> Option<usize> {
        self.members.binary_search(&s).ok()
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Right cosets `H·g`, each listed as `h_i·g` in subgroup order, with
    /// representatives chosen as the smallest uncovered id.
    pub fn right_cosets(&self) -> Vec<Vec<usize>> {
        let g = &self.parent;
        let mut covered = vec![false; g.order()];
        let mut cosets = Vec::new();
        for rep in g.elements() {
            if covered[rep] {
                continue;
            }
            let coset: Vec<usize> = self.members.iter().map(|&h| g.mul(h, rep)).collect();
            for &x in &coset {
                covered[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }
}

/// Validates `member_ids` as a subgroup of `g` and decides normality.
pub fn subgroup(g: &Arc<FiniteGroup>, member_ids: &[usize]) -> Result<SubgroupHandle> {
    if member_ids.is_empty() {
        return Err(LabError::InvalidSubgroup("empty member set".into()));
    }
    if let Some(&bad) = member_ids.iter().find(|&&s| s >= g.order()) {
        return Err(LabError::InvalidSubgroup(format!("id {bad} out of range")));
    }
    let members: Vec<usize> = member_ids
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let set: BTreeSet<usize> = members.iter().copied().collect();
    if !set.contains(&g.identity()) {
        return Err(LabError::InvalidSubgroup("identity missing".into()));
    }
    for &s in &members {
        if !set.contains(&g.inv(s)) {
            return Err(LabError::InvalidSubgroup(format!("inverse of {} missing", g.label(s))));
        }
        for &t in &members {
            if !set.contains(&g.mul(s, t)) {
                return Err(LabError::InvalidSubgroup(format!(
                    "not closed: {}·{}",
                    g.label(s),
                    g.label(t)
                )));
            }
        }
    }
    let is_normal = g
        .elements()
        .all(|x| members.iter().all(|&h| set.contains(&g.mul(g.mul(x, h), g.inv(x)))));
    let local = |s: usize| members.binary_search(&s).unwrap();
    let table = members
        .iter()
        .map(|&s| members.iter().map(|&t| local(g.mul(s, t))).collect())
        .collect();
    let labels = members.iter().map(|&s| g.label(s).to_string()).collect();
    let sub = FiniteGroup::from_table(format!("{}<{}", members.len(), g.name()), labels, table, None)?;
    Ok(SubgroupHandle {
        parent: Arc::clone(g),
        members,
        is_normal,
        group: Arc::new(sub),
    })
}

/// Subgroup generated by the given elements.
pub fn generated_subgroup(g: &Arc<FiniteGroup>, generators: &[usize]) -> Result<SubgroupHandle> {
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    let mut frontier: Vec<usize> = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in generators {
            if s >= g.order() {
                return Err(LabError::InvalidSubgroup(format!("id {s} out of range")));
            }
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    let members: Vec<usize> = set.into_iter().collect();
    subgroup(g, &members)
}

/// A quotient group together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Arc<FiniteGroup>,
    /// `projection[s]` is the coset id of `s`.
    pub projection: Vec<usize>,
}

/// `G/N` for a normal subgroup; cosets are numbered by their smallest member.
pub fn quotient(n: &SubgroupHandle) -> Result<Quotient> {
    if !n.is_normal() {
        return Err(LabError::NotNormal);
    }
    let g = n.parent();
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for s in g.elements() {
        if projection[s] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(s);
        for &m in n.member_ids() {
            projection[g.mul(s, m)] = id;
        }
    }
    let k = reps.len();
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| projection[g.mul(a, b)]).collect())
        .collect();
    let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
    let q = FiniteGroup::from_table(format!("{}/N{}", g.name(), n.order()), labels, table, None)?;
    debug_assert_eq!(q.order(), k);
    for s in g.elements() {
        for t in g.elements() {
            if projection[g.mul(s, t)] != q.mul(projection[s], projection[t]) {
                return Err(LabError::InvalidSubgroup("projection is not a homomorphism".into()));
            }
        }
    }
    Ok(Quotient {
        group: Arc::new(q),
        projection,
    })
}

/// Trivial group, used as `G/G`.
pub fn trivial_group() -> FiniteGroup {
    make_cyclic(1).unwrap().renamed("Z1")
}
