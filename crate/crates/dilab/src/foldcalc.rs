//! Transition-matrix bookkeeping for sequences of based folds.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoldError {
    #[error("edge set is empty")]
    NoEdges,
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("index {index} out of range for {count} edges")]
    OutOfRange { index: usize, count: usize },
    #[error("fold edges must differ")]
    SameEdge,
    #[error("fold kind must be 1..=4, got {0}")]
    BadKind(u8),
    #[error("step {step}: kind {kind} needs {need}")]
    RolePrecondition { step: usize, kind: u8, need: String },
    #[error("closing map is not a permutation")]
    NotPermutation,
    #[error("closing map sends {from:?} ({from_role}) to {to:?} ({to_role})")]
    RoleViolatingPermutation {
        from: String,
        from_role: Role,
        to: String,
        to_role: Role,
    },
    #[error("script JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Filament,
    Petal,
}

impl Role {
    fn other(self) -> Role {
        match self {
            Role::Filament => Role::Petal,
            Role::Petal => Role::Filament,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Filament => "filament",
            Role::Petal => "petal",
        })
    }
}

/// Edge ids in a fixed order together with their roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRoles {
    ids: Vec<String>,
    roles: Vec<Role>,
    index: HashMap<String, usize>,
}

impl EdgeRoles {
    pub fn new<I, S>(edges: I) -> Result<Self, FoldError>
    where
        I: IntoIterator<Item = (S, Role)>,
        S: Into<String>,
    {
        let mut ids = Vec::new();
        let mut roles = Vec::new();
        let mut index = HashMap::new();
        for (id, role) in edges {
            let id = id.into();
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(FoldError::DuplicateEdge(id));
            }
            ids.push(id);
            roles.push(role);
        }
        if ids.is_empty() {
            return Err(FoldError::NoEdges);
        }
        Ok(EdgeRoles { ids, roles, index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn role(&self, e: usize) -> Role {
        self.roles[e]
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn index_of(&self, id: &str) -> Result<usize, FoldError> {
        self.index.get(id).copied().ok_or_else(|| FoldError::UnknownEdge(id.to_string()))
    }

    /// Number of filaments.
    pub fn filament_count(&self) -> usize {
        self.roles.iter().filter(|&&r| r == Role::Filament).count()
    }

    /// Number of petals.
    pub fn petal_count(&self) -> usize {
        self.len() - self.filament_count()
    }
}

/// One based fold on edge indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fold {
    pub kind: u8,
    /// Only meaningful for kind 1.
    pub k: u32,
    pub e0: usize,
    pub e1: usize,
    /// Kind 4 only: declared role of `e1`.
    pub sub_kind: Option<Role>,
}

impl Fold {
    pub fn kind1(k: u32, e0: usize, e1: usize) -> Self {
        Fold { kind: 1, k, e0, e1, sub_kind: None }
    }

    pub fn kind2(e0: usize, e1: usize) -> Self {
        Fold { kind: 2, k: 0, e0, e1, sub_kind: None }
    }

    pub fn kind3(e0: usize, e1: usize) -> Self {
        Fold { kind: 3, k: 0, e0, e1, sub_kind: None }
    }

    pub fn kind4(e0: usize, e1: usize) -> Self {
        Fold { kind: 4, k: 0, e0, e1, sub_kind: None }
    }

    /// The 2x2 block at rows and columns `(e0, e1)`.
    pub fn block(&self) -> Result<[[u64; 2]; 2], FoldError> {
        let k = self.k as u64;
        Ok(match self.kind {
            1 => [[k + 1, k + 2], [k, k + 1]],
            2 => [[1, 2], [0, 1]],
            3 => [[1, 1], [1, 2]],
            4 => [[1, 1], [0, 1]],
            other => return Err(FoldError::BadKind(other)),
        })
    }

    pub fn swaps(&self) -> bool {
        self.kind == 3 || (self.kind == 1 && self.k % 2 == 1)
    }

    fn check(&self, roles: &[Role], step: usize) -> Result<(), FoldError> {
        let n = roles.len();
        for idx in [self.e0, self.e1] {
            if idx >= n {
                return Err(FoldError::OutOfRange { index: idx, count: n });
            }
        }
        if self.e0 == self.e1 {
            return Err(FoldError::SameEdge);
        }
        let (r0, r1) = (roles[self.e0], roles[self.e1]);
        let fail = |need: &str| {
            Err(FoldError::RolePrecondition {
                step,
                kind: self.kind,
                need: need.to_string(),
            })
        };
        match self.kind {
            1 if r0 != Role::Filament || r1 != Role::Filament => fail("e0 and e1 filaments"),
            2 | 3 if r0 != Role::Filament || r1 != Role::Petal => fail("e0 filament and e1 petal"),
            4 if r0 != Role::Petal => fail("e0 petal"),
            4 if self.sub_kind.is_some_and(|s| s != r1) => fail("e1 role matching the declared sub-kind"),
            1..=4 => Ok(()),
            other => Err(FoldError::BadKind(other)),
        }
    }
}

/// Square matrix of arbitrary-precision non-negative integers.
pub type Matrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn elementary_fold_matrix(edge_count: usize, e0: usize, e1: usize) -> Result<Matrix, FoldError> {
    for idx in [e0, e1] {
        if idx >= edge_count {
            return Err(FoldError::OutOfRange { index: idx, count: edge_count });
        }
    }
    if e0 == e1 {
        return Err(FoldError::SameEdge);
    }
    let mut m = identity(edge_count);
    m[e0][e1] = BigInt::one();
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldState {
    initial: EdgeRoles,
    roles: Vec<Role>,
    matrix: Matrix,
    /// `zeta[e]` is the image of edge `e`.
    zeta: Vec<usize>,
    steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityViolation {
    pub row: String,
    pub col: String,
    pub reason: String,
}

impl FoldState {
    pub fn new(roles: EdgeRoles) -> Self {
        let n = roles.len();
        FoldState {
            roles: roles.roles.clone(),
            initial: roles,
            matrix: identity(n),
            zeta: (0..n).collect(),
            steps: 0,
        }
    }

    pub fn edges(&self) -> &EdgeRoles {
        &self.initial
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn zeta(&self) -> &[usize] {
        &self.zeta
    }

    /// Matrix of this fold in the state's edge order.
    pub fn fold_matrix(&self, f: &Fold) -> Result<Matrix, FoldError> {
        f.check(&self.roles, self.steps)?;
        let b = f.block()?;
        let mut m = identity(self.roles.len());
        let idx = [f.e0, f.e1];
        for r in 0..2 {
            for c in 0..2 {
                m[idx[r]][idx[c]] = BigInt::from(b[r][c]);
            }
        }
        Ok(m)
    }

    pub fn apply_fold(&self, f: &Fold) -> Result<FoldState, FoldError> {
        f.check(&self.roles, self.steps)?;
        let b = f.block()?;
        let mut next = self.clone();
        let (r0, r1) = (&self.matrix[f.e0], &self.matrix[f.e1]);
        let combine = |x: u64, y: u64| -> Vec<BigInt> {
            r0.iter()
                .zip(r1)
                .map(|(a, c)| a * BigInt::from(x) + c * BigInt::from(y))
                .collect()
        };
        next.matrix[f.e0] = combine(b[0][0], b[0][1]);
        next.matrix[f.e1] = combine(b[1][0], b[1][1]);
        if f.swaps() {
            for z in next.zeta.iter_mut() {
                if *z == f.e0 {
                    *z = f.e1;
                } else if *z == f.e1 {
                    *z = f.e0;
                }
            }
        }
        if f.kind == 3 {
            next.roles[f.e0] = next.roles[f.e0].other();
            next.roles[f.e1] = next.roles[f.e1].other();
        }
        next.steps += 1;
        Ok(next)
    }

    /// Applies the permutation `e -> perm[e]`; it must preserve current roles.
    pub fn close_with_isomorphism(&self, perm: &[usize]) -> Result<FoldState, FoldError> {
        let n = self.roles.len();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(FoldError::NotPermutation);
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(FoldError::NotPermutation);
            }
        }
        for (e, &p) in perm.iter().enumerate() {
            if self.roles[e] != self.roles[p] {
                return Err(FoldError::RoleViolatingPermutation {
                    from: self.initial.ids[e].clone(),
                    from_role: self.roles[e],
                    to: self.initial.ids[p].clone(),
                    to_role: self.roles[p],
                });
            }
        }
        let mut next = self.clone();
        for (e, &p) in perm.iter().enumerate() {
            next.matrix[p] = self.matrix[e].clone();
        }
        for z in next.zeta.iter_mut() {
            *z = perm[*z];
        }
        Ok(next)
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.matrix)
    }

    pub fn det_is_unit(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Whether `zeta` carries each edge's initial role to the same current role.
    pub fn zeta_preserves_roles(&self) -> bool {
        (0..self.zeta.len()).all(|e| self.roles[self.zeta[e]] == self.initial.roles[e])
    }

    /// On filament rows `M - P_zeta` is even and non-negative, and every
    /// `(zeta(e), e)` entry is positive.
    pub fn check_parity(&self) -> Vec<ParityViolation> {
        let n = self.roles.len();
        let ids = &self.initial.ids;
        let mut out = Vec::new();
        let mut perm_entry = vec![vec![false; n]; n];
        for (e, &z) in self.zeta.iter().enumerate() {
            perm_entry[z][e] = true;
        }
        for row in (0..n).filter(|&r| self.roles[r] == Role::Filament) {
            for col in 0..n {
                let mut v = self.matrix[row][col].clone();
                if perm_entry[row][col] {
                    v -= 1;
                }
                if v.is_negative() {
                    out.push(violation(ids, row, col, "negative after subtracting zeta"));
                } else if v.is_odd() {
                    out.push(violation(ids, row, col, "odd after subtracting zeta"));
                }
            }
        }
        for (e, &z) in self.zeta.iter().enumerate() {
            if !self.matrix[z][e].is_positive() {
                out.push(violation(ids, z, e, "zeta entry not positive"));
            }
        }
        out
    }
}

fn violation(ids: &[String], row: usize, col: usize, reason: &str) -> ParityViolation {
    ParityViolation {
        row: ids[row].clone(),
        col: ids[col].clone(),
        reason: reason.to_string(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub role: Role,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoldSpec {
    pub kind: u8,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub k: u32,
    pub e0: String,
    pub e1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_kind: Option<Role>,
}

fn is_zero(k: &u32) -> bool {
    *k == 0
}

/// A fold script as read from JSON. Edges missing from `closing_perm` stay fixed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Script {
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub folds: Vec<FoldSpec>,
    #[serde(default)]
    pub closing_perm: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct ScriptRun {
    pub states: Vec<FoldState>,
    pub closed: FoldState,
}

impl Script {
    pub fn from_json(text: &str) -> Result<Self, FoldError> {
        serde_json::from_str(text).map_err(|e| FoldError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("script serializes")
    }

    pub fn roles(&self) -> Result<EdgeRoles, FoldError> {
        EdgeRoles::new(self.edges.iter().map(|e| (e.id.clone(), e.role)))
    }

    pub fn resolve_folds(&self, roles: &EdgeRoles) -> Result<Vec<Fold>, FoldError> {
        self.folds
            .iter()
            .map(|f| {
                Ok(Fold {
                    kind: f.kind,
                    k: f.k,
                    e0: roles.index_of(&f.e0)?,
                    e1: roles.index_of(&f.e1)?,
                    sub_kind: f.sub_kind,
                })
            })
            .collect()
    }

    pub fn resolve_perm(&self, roles: &EdgeRoles) -> Result<Vec<usize>, FoldError> {
        let mut perm: Vec<usize> = (0..roles.len()).collect();
        for (from, to) in &self.closing_perm {
            perm[roles.index_of(from)?] = roles.index_of(to)?;
        }
        Ok(perm)
    }

    /// Runs every fold, keeping each intermediate state, then closes.
    pub fn run(&self) -> Result<ScriptRun, FoldError> {
        let roles = self.roles()?;
        let folds = self.resolve_folds(&roles)?;
        let perm = self.resolve_perm(&roles)?;
        let mut states = vec![FoldState::new(roles)];
        for f in &folds {
            let next = states.last().expect("initial state").apply_fold(f)?;
            states.push(next);
        }
        let closed = states.last().expect("initial state").close_with_isomorphism(&perm)?;
        Ok(ScriptRun { states, closed })
    }

    /// A valid random script: 2 to 8 edges, up to 20 folds, kind-1 `k <= 3`,
    /// and a role-preserving closing permutation.
    pub fn random(seed: u64) -> Script {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8usize);
        let mut roles: Vec<Role> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { Role::Filament } else { Role::Petal })
            .collect();
        let ids: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let edges = ids
            .iter()
            .zip(&roles)
            .map(|(id, &role)| EdgeSpec { id: id.clone(), role })
            .collect();
        let fold_count = rng.gen_range(0..=20usize);
        let mut folds = Vec::with_capacity(fold_count);
        for _ in 0..fold_count {
            let mut options: Vec<(u8, Vec<(usize, usize)>)> = Vec::new();
            let pairs = |want0: Role, want1: Option<Role>| -> Vec<(usize, usize)> {
                let mut v = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        if a != b && roles[a] == want0 && want1.map_or(true, |w| roles[b] == w) {
                            v.push((a, b));
                        }
                    }
                }
                v
            };
            for (kind, p) in [
                (1, pairs(Role::Filament, Some(Role::Filament))),
                (2, pairs(Role::Filament, Some(Role::Petal))),
                (3, pairs(Role::Filament, Some(Role::Petal))),
                (4, pairs(Role::Petal, None)),
            ] {
                if !p.is_empty() {
                    options.push((kind, p));
                }
            }
            let Some((kind, pairs)) = options.choose(&mut rng) else {
                break;
            };
            let (e0, e1) = *pairs.choose(&mut rng).expect("non-empty");
            let k = if *kind == 1 { rng.gen_range(0..=3) } else { 0 };
            let sub_kind = (*kind == 4 && rng.gen_bool(0.5)).then_some(roles[e1]);
            if *kind == 3 {
                roles.swap(e0, e1);
            }
            folds.push(FoldSpec {
                kind: *kind,
                k,
                e0: ids[e0].clone(),
                e1: ids[e1].clone(),
                sub_kind,
            });
        }
        let mut closing_perm = BTreeMap::new();
        for role in [Role::Filament, Role::Petal] {
            let class: Vec<usize> = (0..n).filter(|&e| roles[e] == role).collect();
            let mut shuffled = class.clone();
            shuffled.shuffle(&mut rng);
            for (&from, &to) in class.iter().zip(&shuffled) {
                if from != to {
                    closing_perm.insert(ids[from].clone(), ids[to].clone());
                }
            }
        }
        Script {
            edges,
            folds,
            closing_perm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn two(r0: Role, r1: Role) -> FoldState {
        FoldState::new(EdgeRoles::new([("a", r0), ("b", r1)]).unwrap())
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_fold_matrix(2, 0, 1).unwrap(), ints(&[&[1, 1], &[0, 1]]));
        let m = elementary_fold_matrix(3, 2, 0).unwrap();
        assert_eq!(m, ints(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]));
        let prod = mat_mul(&elementary_fold_matrix(2, 1, 0).unwrap(), &elementary_fold_matrix(2, 0, 1).unwrap());
        assert_eq!(prod, ints(&[&[1, 1], &[1, 2]]));
        assert!(elementary_fold_matrix(2, 0, 2).is_err());
        assert!(elementary_fold_matrix(2, 1, 1).is_err());
    }

    #[test]
    fn fold_blocks() {
        let ff = two(Role::Filament, Role::Filament);
        assert_eq!(ff.fold_matrix(&Fold::kind1(0, 0, 1)).unwrap(), ints(&[&[1, 2], &[0, 1]]));
        let fp = two(Role::Filament, Role::Petal);
        assert_eq!(fp.fold_matrix(&Fold::kind3(0, 1)).unwrap(), ints(&[&[1, 1], &[1, 2]]));
        let pf = two(Role::Petal, Role::Filament);
        assert_eq!(pf.fold_matrix(&Fold::kind4(0, 1)).unwrap(), ints(&[&[1, 1], &[0, 1]]));
        // block positions follow e0, e1 rather than index order
        assert_eq!(ff.fold_matrix(&Fold::kind1(1, 1, 0)).unwrap(), ints(&[&[2, 1], &[3, 2]]));
    }

    #[test]
    fn preconditions() {
        let fp = two(Role::Filament, Role::Petal);
        assert!(matches!(fp.apply_fold(&Fold::kind1(0, 0, 1)), Err(FoldError::RolePrecondition { .. })));
        assert!(fp.apply_fold(&Fold::kind2(1, 0)).is_err());
        assert!(fp.apply_fold(&Fold::kind4(0, 1)).is_err());
        let pp = two(Role::Petal, Role::Petal);
        let declared = Fold {
            sub_kind: Some(Role::Filament),
            ..Fold::kind4(0, 1)
        };
        assert!(pp.apply_fold(&declared).is_err());
        assert!(pp.apply_fold(&Fold::kind4(0, 1)).is_ok());
        assert_eq!(
            fp.apply_fold(&Fold { kind: 5, ..Fold::kind2(0, 1) }),
            Err(FoldError::BadKind(5))
        );
    }

    #[test]
    fn zeta_and_roles() {
        let fp = two(Role::Filament, Role::Petal);
        let s2 = fp.apply_fold(&Fold::kind2(0, 1)).unwrap();
        assert_eq!(s2.zeta(), &[0, 1]);
        assert_eq!(s2.roles(), fp.roles());
        let s3 = fp.apply_fold(&Fold::kind3(0, 1)).unwrap();
        assert_eq!(s3.zeta(), &[1, 0]);
        assert_eq!(s3.roles(), &[Role::Petal, Role::Filament]);
        assert!(s3.zeta_preserves_roles());
        let ff = two(Role::Filament, Role::Filament);
        assert_eq!(ff.apply_fold(&Fold::kind1(2, 0, 1)).unwrap().zeta(), &[0, 1]);
        assert_eq!(ff.apply_fold(&Fold::kind1(1, 0, 1)).unwrap().zeta(), &[1, 0]);
    }

    #[test]
    fn closing() {
        let ff = two(Role::Filament, Role::Filament);
        assert_eq!(ff.close_with_isomorphism(&[0, 1]).unwrap(), ff);
        let swapped = ff.close_with_isomorphism(&[1, 0]).unwrap();
        assert_eq!(swapped.matrix(), &ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(swapped.determinant(), BigInt::from(-1));
        let fp = two(Role::Filament, Role::Petal);
        assert!(matches!(
            fp.close_with_isomorphism(&[1, 0]),
            Err(FoldError::RoleViolatingPermutation { .. })
        ));
        assert_eq!(ff.close_with_isomorphism(&[0, 0]), Err(FoldError::NotPermutation));
    }

    #[test]
    fn parity_examples() {
        let ff = two(Role::Filament, Role::Filament);
        assert!(ff.check_parity().is_empty());
        let s = ff.apply_fold(&Fold::kind1(1, 0, 1)).unwrap();
        assert_eq!(s.matrix(), &ints(&[&[2, 3], &[1, 2]]));
        assert!(s.check_parity().is_empty(), "{:?}", s.check_parity());
        // A bare elementary fold between filaments breaks parity.
        let mut bad = ff.clone();
        bad.matrix = elementary_fold_matrix(2, 0, 1).unwrap();
        assert!(!bad.check_parity().is_empty());
    }

    #[test]
    fn determinant_by_hand() {
        assert_eq!(determinant(&ints(&[&[2, 3], &[1, 2]])), BigInt::one());
        assert_eq!(determinant(&ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), BigInt::from(-1));
        assert_eq!(determinant(&ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
        assert_eq!(determinant(&ints(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn script_json() {
        let text = r#"{"edges":[{"id":"f1","role":"filament"},{"id":"p1","role":"petal"}],
            "folds":[{"kind":3,"e0":"f1","e1":"p1"}],"closing_perm":{}}"#;
        let run = Script::from_json(text).unwrap().run().unwrap();
        assert_eq!(run.closed.roles(), &[Role::Petal, Role::Filament]);
        assert!(run.closed.check_parity().is_empty());
        let bad = r#"{"edges":[{"id":"f1","role":"filament"}],"folds":[{"kind":1,"e0":"f1","e1":"zz"}]}"#;
        assert!(Script::from_json(bad).unwrap().run().is_err());
        let s = Script::random(3);
        let back = Script::from_json(&s.to_json()).unwrap();
        assert_eq!(back.to_json(), s.to_json());
    }

    #[test]
    fn random_scripts_keep_invariants() {
        for seed in 0..500 {
            let run = Script::random(seed).run().unwrap();
            for st in run.states.iter().chain([&run.closed]) {
                assert!(st.det_is_unit(), "seed {seed}");
                assert!(st.zeta_preserves_roles(), "seed {seed}");
                assert!(st.check_parity().is_empty(), "seed {seed}: {:?}", st.check_parity());
            }
        }
    }
}
