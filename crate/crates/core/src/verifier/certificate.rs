use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cubics::cubic_rank;
use super::{
    critical_k, horace_checks, horace_identity, horace_params, is_exception, thm41_check, Branch,
    CaseId,
};
use crate::error::{Error, Result};
use crate::interpolation::{expected_codim, hilbert_double_points, quadric_formula, Sampling};
use crate::polyspace::space_dim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Direct rank computation at random points.
    #[serde(rename = "BASE-RANK")]
    BaseRank,
    /// `d = 2`, outside the cone family.
    #[serde(rename = "QUADRIC-FORMULA")]
    QuadricFormula,
    /// `d = 3`, `n != 4`: the cubic theorem, checked at `k_n` points.
    #[serde(rename = "CUBIC-THM51")]
    CubicThm51,
    /// Specialize `u` points to a hyperplane; trace and residual are the children.
    #[serde(rename = "THM41")]
    Thm41,
    /// Differential Horace step with `(u, epsilon)`.
    #[serde(rename = "THM65")]
    Thm65,
    /// `k` below an independent case or above a filling case.
    #[serde(rename = "MONOTONE")]
    Monotone,
}

impl Rule {
    pub fn is_leaf(self) -> bool {
        matches!(
            self,
            Rule::BaseRank | Rule::QuadricFormula | Rule::CubicThm51
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
}

impl SideCondition {
    fn new(name: impl Into<String>, holds: bool) -> Self {
        SideCondition {
            name: name.into(),
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertNode {
    pub case: CaseId,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    pub children: Vec<CaseId>,
    /// Arithmetic conditions as evaluated by the builder. The checker recomputes them.
    #[serde(default)]
    pub side_conditions: Vec<SideCondition>,
}

impl CertNode {
    fn leaf(case: CaseId, rule: Rule) -> Self {
        CertNode {
            case,
            rule,
            u: None,
            epsilon: None,
            branch: None,
            children: Vec::new(),
            side_conditions: Vec::new(),
        }
    }
}

/// A DAG of claims `AH_{n,d}(k)`, each justified by a rule; children are listed by case
/// and every child has its own node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub root: CaseId,
    pub nodes: Vec<CertNode>,
}

impl Certificate {
    pub fn node(&self, c: CaseId) -> Option<&CertNode> {
        self.nodes.iter().find(|x| x.case == c)
    }

    pub fn node_mut(&mut self, c: CaseId) -> Option<&mut CertNode> {
        self.nodes.iter_mut().find(|x| x.case == c)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &CertNode> {
        self.nodes.iter().filter(|x| x.rule.is_leaf())
    }
}

/// Conditions and children of a hyperplane step with `u` points on the hyperplane.
fn thm41_node(c: CaseId, u: usize) -> Option<CertNode> {
    if c.n < 2 || u > c.k {
        return None;
    }
    let branch = thm41_check(c.n, c.d, c.k, u);
    if branch == Branch::Neither {
        return None;
    }
    let children = vec![
        CaseId::new(c.n - 1, c.d, u),
        CaseId::new(c.n, c.d - 1, c.k - u),
    ];
    if children.iter().any(|&x| is_exception(x).is_some()) {
        return None;
    }
    Some(CertNode {
        case: c,
        rule: Rule::Thm41,
        u: Some(u),
        epsilon: None,
        branch: Some(branch),
        children,
        side_conditions: vec![SideCondition::new(
            match branch {
                Branch::I => "un <= C(d+n-1,n-1) and k(n+1)-un <= C(d+n-1,n)",
                _ => "un >= C(d+n-1,n-1) and k(n+1)-un >= C(d+n-1,n)",
            },
            true,
        )],
    })
}

fn thm65_node(c: CaseId) -> Option<CertNode> {
    let (lo, hi) = critical_k(c.n, c.d);
    if c.n < 2 || c.d < 4 || c.k < lo || c.k > hi {
        return None;
    }
    let p = horace_params(c.n, c.d, c.k).ok()?;
    if !p.check_i || !p.check_ii || p.check_iii == Some(false) || c.k < p.u + p.epsilon {
        return None;
    }
    let children = vec![
        CaseId::new(c.n - 1, c.d, p.u),
        CaseId::new(c.n, c.d - 1, c.k - p.u),
        CaseId::new(c.n, c.d - 2, c.k - p.u - p.epsilon),
    ];
    if children.iter().any(|&x| is_exception(x).is_some()) {
        return None;
    }
    let mut side = vec![
        SideCondition::new("nu + epsilon = k(n+1) - C(n+d-1,n)", true),
        SideCondition::new("n epsilon + u <= C(n+d-2,n-1)", p.check_i),
        SideCondition::new("C(n+d-2,n) <= (k-u-epsilon)(n+1)", p.check_ii),
    ];
    if let Some(iii) = p.check_iii {
        side.push(SideCondition::new("k-u-epsilon >= n+1", iii));
    }
    Some(CertNode {
        case: c,
        rule: Rule::Thm65,
        u: Some(p.u),
        epsilon: Some(p.epsilon),
        branch: None,
        children,
        side_conditions: side,
    })
}

/// The critical case that settles `c` by monotonicity, stepping past an exceptional
/// critical case. Equal to `c.k` when `c` must be handled directly.
fn monotone_anchor(c: CaseId) -> usize {
    let (lo, hi) = critical_k(c.n, c.d);
    let excluded = |k: usize| is_exception(CaseId::new(c.n, c.d, k)).is_some();
    if c.k < lo {
        if excluded(lo) {
            lo - 1
        } else {
            lo
        }
    } else if c.k > hi {
        if excluded(hi) {
            hi + 1
        } else {
            hi
        }
    } else {
        c.k
    }
}

struct Builder {
    nodes: Vec<CertNode>,
    done: HashSet<CaseId>,
}

impl Builder {
    fn choose(c: CaseId) -> CertNode {
        let (n, d, k) = (c.n, c.d, c.k);
        if k == 0 || d == 1 || n == 1 {
            return CertNode::leaf(c, Rule::BaseRank);
        }
        if d == 2 {
            return CertNode::leaf(c, Rule::QuadricFormula);
        }
        if d == 3 {
            return CertNode::leaf(
                c,
                if n == 4 {
                    Rule::BaseRank
                } else {
                    Rule::CubicThm51
                },
            );
        }
        if n == 2 {
            return CertNode::leaf(c, Rule::BaseRank);
        }
        let anchor = monotone_anchor(c);
        if anchor != k {
            return CertNode {
                case: c,
                rule: Rule::Monotone,
                u: None,
                epsilon: None,
                branch: None,
                children: vec![CaseId::new(n, d, anchor)],
                side_conditions: vec![SideCondition::new(
                    if anchor > k {
                        "k < k' and k'(n+1) <= C(n+d,n)"
                    } else {
                        "k > k' and k'(n+1) >= C(n+d,n)"
                    },
                    true,
                )],
            };
        }
        if let Some(node) = thm65_node(c) {
            return node;
        }
        if let Some(node) = (0..=k).find_map(|u| thm41_node(c, u)) {
            return node;
        }
        CertNode::leaf(c, Rule::BaseRank)
    }

    fn visit(&mut self, c: CaseId) {
        if !self.done.insert(c) {
            return;
        }
        let node = Builder::choose(c);
        let children = node.children.clone();
        self.nodes.push(node);
        for child in children {
            self.visit(child);
        }
    }
}

/// Builds an induction certificate for a non-exceptional case.
///
/// Leaves: `k = 0`, `d = 1` or `n = 1` and `n = 2` by rank; `d = 2` by the quadric formula;
/// `d = 3` by the cubic theorem (by rank for `n = 4`). For `d >= 4` a non-critical `k` is
/// reduced to the nearest critical one; critical cases try the differential Horace step,
/// then a hyperplane specialization with the smallest admissible `u`, and otherwise fall
/// back to a direct rank check.
pub fn build_certificate(c: CaseId) -> Result<Certificate> {
    if c.n == 0 || c.d == 0 {
        return Err(Error::InvalidInput(format!(
            "case {c} needs n >= 1 and d >= 1"
        )));
    }
    if is_exception(c).is_some() {
        return Err(Error::Ungrounded {
            n: c.n,
            d: c.d,
            k: c.k,
        });
    }
    let mut b = Builder {
        nodes: Vec::new(),
        done: HashSet::new(),
    };
    b.visit(c);
    Ok(Certificate {
        root: c,
        nodes: b.nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: CaseId,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub root: CaseId,
    pub accepted: bool,
    pub nodes: usize,
    pub leaves_checked: usize,
    pub failure: Option<Failure>,
}

impl CertificateCheck {
    pub fn into_result(self) -> Result<CertificateCheck> {
        match &self.failure {
            None => Ok(self),
            Some(f) => Err(Error::CertificateRejected {
                n: f.case.n,
                d: f.case.d,
                k: f.case.k,
                reason: f.reason.clone(),
            }),
        }
    }
}

/// Re-verifies a certificate: structure, every arithmetic side condition (recomputed,
/// never read from the certificate), and every leaf by computation. Leaf results are
/// cached, so one checker can verify many certificates cheaply.
pub struct CertificateChecker {
    sampling: Sampling,
    leaf_cache: Mutex<HashMap<(CaseId, Rule), std::result::Result<(), String>>>,
    cubic_cache: Mutex<HashMap<usize, bool>>,
}

impl CertificateChecker {
    pub fn new(sampling: Sampling) -> Self {
        CertificateChecker {
            sampling,
            leaf_cache: Mutex::new(HashMap::new()),
            cubic_cache: Mutex::new(HashMap::new()),
        }
    }

    fn structural(&self, node: &CertNode) -> std::result::Result<(), String> {
        let c = node.case;
        let (n, d, k) = (c.n, c.d, c.k);
        if is_exception(c).is_some() {
            return Err(format!("{c} is an exceptional case"));
        }
        let expect_children = |want: Vec<CaseId>| {
            if node.children == want {
                Ok(())
            } else {
                Err(format!(
                    "children {:?} do not match the rule, expected {:?}",
                    node.children, want
                ))
            }
        };
        match node.rule {
            Rule::BaseRank => expect_children(vec![]),
            Rule::QuadricFormula => {
                if d != 2 {
                    return Err("quadric formula used outside degree 2".into());
                }
                expect_children(vec![])
            }
            Rule::CubicThm51 => {
                if d != 3 || n == 4 || n < 2 {
                    return Err("cubic theorem used outside d = 3, n >= 2, n != 4".into());
                }
                expect_children(vec![])
            }
            Rule::Monotone => {
                let [child] = node.children[..] else {
                    return Err("monotone step needs exactly one child".into());
                };
                let total = space_dim(n, d);
                let ok = child.n == n
                    && child.d == d
                    && ((k < child.k && child.conditions() <= total)
                        || (k > child.k && child.conditions() >= total));
                if ok {
                    Ok(())
                } else {
                    Err(format!("monotonicity does not carry {child} to {c}"))
                }
            }
            Rule::Thm41 => {
                let u = node.u.ok_or("hyperplane step without u")?;
                if n < 2 || d < 2 || u > k {
                    return Err(format!(
                        "hyperplane step needs n >= 2, d >= 2 and u <= k, got u = {u}"
                    ));
                }
                let branch = thm41_check(n, d, k, u);
                if branch == Branch::Neither {
                    return Err(format!(
                        "neither pair of hyperplane inequalities holds for u = {u}"
                    ));
                }
                if node.branch.is_some_and(|b| b != branch) {
                    return Err(format!(
                        "recorded branch {:?} but inequalities give {:?}",
                        node.branch, branch
                    ));
                }
                expect_children(vec![CaseId::new(n - 1, d, u), CaseId::new(n, d - 1, k - u)])
            }
            Rule::Thm65 => {
                let (u, eps) = match (node.u, node.epsilon) {
                    (Some(u), Some(e)) => (u, e),
                    _ => return Err("Horace step without (u, epsilon)".into()),
                };
                let (lo, hi) = critical_k(n, d);
                if n < 2 || d < 4 || k < lo || k > hi {
                    return Err("Horace step needs n >= 2, d >= 4 and a critical k".into());
                }
                if !horace_identity(n, d, k, u, eps) {
                    return Err(format!(
                        "(u, epsilon) = ({u}, {eps}) violates nu + epsilon = k(n+1) - C(n+d-1,n)"
                    ));
                }
                if k < u + eps {
                    return Err("k - u - epsilon is negative".into());
                }
                let p = horace_checks(n, d, k, u, eps);
                if !p.check_i {
                    return Err("n epsilon + u <= C(n+d-2,n-1) fails".into());
                }
                if !p.check_ii {
                    return Err("C(n+d-2,n) <= (k-u-epsilon)(n+1) fails".into());
                }
                if p.check_iii == Some(false) {
                    return Err("k-u-epsilon >= n+1 fails".into());
                }
                expect_children(vec![
                    CaseId::new(n - 1, d, u),
                    CaseId::new(n, d - 1, k - u),
                    CaseId::new(n, d - 2, k - u - eps),
                ])
            }
        }
    }

    fn cubic_full(&self, n: usize) -> std::result::Result<bool, String> {
        if let Some(&v) = self.cubic_cache.lock().unwrap().get(&n) {
            return Ok(v);
        }
        let r = cubic_rank(n, &self.sampling).map_err(|e| e.to_string())?;
        let full = r.computed == r.space_dim;
        self.cubic_cache.lock().unwrap().insert(n, full);
        Ok(full)
    }

    fn leaf(&self, node: &CertNode) -> std::result::Result<(), String> {
        let key = (node.case, node.rule);
        if let Some(v) = self.leaf_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let c = node.case;
        let outcome = match node.rule {
            Rule::BaseRank => match hilbert_double_points(c.n, c.d, c.k, &self.sampling) {
                Ok(r) if r.defect == 0 => Ok(()),
                Ok(r) => Err(format!(
                    "rank {} below the expected {}",
                    r.computed, r.expected
                )),
                Err(e) => Err(e.to_string()),
            },
            Rule::QuadricFormula => {
                let m = c.k.min(c.n + 1);
                let formula = quadric_formula(c.n, m);
                if formula != expected_codim(c.n, 2, m) {
                    Err(format!(
                        "quadric formula gives {formula}, short of {}",
                        expected_codim(c.n, 2, m)
                    ))
                } else {
                    match hilbert_double_points(c.n, 2, m, &self.sampling) {
                        Ok(r) if r.computed == formula => Ok(()),
                        Ok(r) => Err(format!(
                            "rank {} disagrees with the quadric formula {formula}",
                            r.computed
                        )),
                        Err(e) => Err(e.to_string()),
                    }
                }
            }
            Rule::CubicThm51 => match self.cubic_full(c.n) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!(
                    "cubic configuration in P^{} is not of full rank",
                    c.n
                )),
                Err(e) => Err(e),
            },
            _ => Ok(()),
        };
        self.leaf_cache.lock().unwrap().insert(key, outcome.clone());
        outcome
    }

    pub fn check(&self, cert: &Certificate) -> CertificateCheck {
        let fail = |case: CaseId, reason: String, leaves: usize| CertificateCheck {
            root: cert.root,
            accepted: false,
            nodes: cert.nodes.len(),
            leaves_checked: leaves,
            failure: Some(Failure { case, reason }),
        };
        let mut by_case: HashMap<CaseId, &CertNode> = HashMap::new();
        for node in &cert.nodes {
            if by_case.insert(node.case, node).is_some() {
                return fail(node.case, "duplicate node".into(), 0);
            }
        }
        if !by_case.contains_key(&cert.root) {
            return fail(cert.root, "root has no node".into(), 0);
        }
        // every reachable child has a node, and there is no cycle
        let mut state: HashMap<CaseId, u8> = HashMap::new();
        fn dfs(
            c: CaseId,
            by_case: &HashMap<CaseId, &CertNode>,
            state: &mut HashMap<CaseId, u8>,
        ) -> std::result::Result<(), (CaseId, String)> {
            match state.get(&c) {
                Some(1) => return Err((c, "cycle through this case".into())),
                Some(_) => return Ok(()),
                None => {}
            }
            let node = by_case
                .get(&c)
                .ok_or((c, "child without a node".to_string()))?;
            state.insert(c, 1);
            for &child in &node.children {
                dfs(child, by_case, state)?;
            }
            state.insert(c, 2);
            Ok(())
        }
        if let Err((c, reason)) = dfs(cert.root, &by_case, &mut state) {
            return fail(c, reason, 0);
        }
        for node in &cert.nodes {
            if let Err(reason) = self.structural(node) {
                return fail(node.case, reason, 0);
            }
        }
        let leaves: Vec<&CertNode> = cert.leaves().collect();
        let results: Vec<std::result::Result<(), String>> =
            leaves.par_iter().map(|n| self.leaf(n)).collect();
        for (node, r) in leaves.iter().zip(results) {
            if let Err(reason) = r {
                return fail(node.case, reason, leaves.len());
            }
        }
        CertificateCheck {
            root: cert.root,
            accepted: true,
            nodes: cert.nodes.len(),
            leaves_checked: leaves.len(),
            failure: None,
        }
    }
}

/// Checks one certificate with a fresh checker.
pub fn check_certificate(cert: &Certificate, sampling: &Sampling) -> CertificateCheck {
    CertificateChecker::new(*sampling).check(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sextics_in_p3() {
        let cert = build_certificate(CaseId::new(3, 6, 21)).unwrap();
        let root = cert.node(cert.root).unwrap();
        assert_eq!(root.rule, Rule::Thm65);
        assert_eq!((root.u, root.epsilon), (Some(9), Some(1)));
        assert_eq!(
            root.children,
            vec![
                CaseId::new(2, 6, 9),
                CaseId::new(3, 5, 12),
                CaseId::new(3, 4, 11)
            ]
        );
        let check = check_certificate(&cert, &Sampling::default());
        assert!(check.accepted, "{:?}", check.failure);
    }

    #[test]
    fn tampered_u_is_rejected() {
        let mut cert = build_certificate(CaseId::new(3, 6, 21)).unwrap();
        cert.node_mut(CaseId::new(3, 6, 21)).unwrap().u = Some(8);
        let check = check_certificate(&cert, &Sampling::default());
        assert!(!check.accepted);
        let f = check.failure.unwrap();
        assert_eq!(f.case, CaseId::new(3, 6, 21));
        assert!(f.reason.contains("violates"));
    }

    #[test]
    fn exceptional_leaf_is_rejected() {
        let cert = Certificate {
            root: CaseId::new(4, 4, 14),
            nodes: vec![CertNode::leaf(CaseId::new(4, 4, 14), Rule::BaseRank)],
        };
        let check = check_certificate(&cert, &Sampling::default());
        assert!(!check.accepted);
        assert!(check.failure.unwrap().reason.contains("exceptional"));
        assert!(build_certificate(CaseId::new(4, 4, 14)).is_err());
    }

    #[test]
    fn shapes() {
        let cert = build_certificate(CaseId::new(9, 4, 71)).unwrap();
        let root = cert.node(cert.root).unwrap();
        assert_eq!(
            (root.rule, root.u, root.epsilon),
            (Rule::Thm65, Some(54), Some(4))
        );
        assert_eq!(
            root.children,
            vec![
                CaseId::new(8, 4, 54),
                CaseId::new(9, 3, 17),
                CaseId::new(9, 2, 13)
            ]
        );
        let five = build_certificate(CaseId::new(5, 4, 21)).unwrap();
        assert_eq!(five.nodes.len(), 1);
        assert_eq!(five.nodes[0].rule, Rule::BaseRank);
        for k in [41, 42] {
            let c = build_certificate(CaseId::new(7, 4, k)).unwrap();
            let root = c.node(c.root).unwrap();
            assert_eq!((root.rule, root.u), (Rule::Thm41, Some(30)));
        }
        let plane = build_certificate(CaseId::new(2, 7, 12)).unwrap();
        assert_eq!(plane.nodes.len(), 1);
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["nodes"][0]["rule"], "THM65");
        assert_eq!(json["nodes"][0]["case"]["n"], 9);
    }
}
