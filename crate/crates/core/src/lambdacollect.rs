//! Collection against the trigonometric lambda basis, emitted and
//! transcribed PDE systems, and bounded-degree ideal membership.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laxlab::{closure_obstruction, CaseTag};
use crate::symcore::{
    frac_with, Atom, Frac, Func, FunctionSymbol, JetSymbol, Monomial, Poly, Scalar, SymbolTable,
    Var,
};

/// `cos^c * cosh^ch * sin^s * sinh^sh` of `lam`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub struct LambdaMonomial {
    pub c: u8,
    pub ch: u8,
    pub s: u32,
    pub sh: u32,
}

impl LambdaMonomial {
    pub fn to_frac(&self) -> Frac {
        let mut m = Vec::new();
        for (f, e) in [
            (Func::Cos, self.c as u32),
            (Func::Cosh, self.ch as u32),
            (Func::Sin, self.s),
            (Func::Sinh, self.sh),
        ] {
            if e > 0 {
                m.push((Atom::lam_trig(f), e));
            }
        }
        Frac::from(Poly::term(Monomial::from_pairs(m), Scalar::one()))
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cos^{} cosh^{} sin^{} sinh^{}", self.c, self.ch, self.s, self.sh)
    }
}

/// Splits `e` into lambda-monomials with lambda-free coefficients.
pub fn collect(e: &Frac) -> Result<BTreeMap<LambdaMonomial, Frac>> {
    if e.den().keys().any(|d| d.depends_on(Var::Lam)) {
        return Err(Error::NonCanonicalLambda(e.to_string()));
    }
    let mut parts: BTreeMap<LambdaMonomial, Poly> = BTreeMap::new();
    for (m, c) in e.num().terms() {
        let mut key = LambdaMonomial::default();
        let mut rest = Vec::new();
        for (atom, k) in m.factors() {
            match atom.lambda_trig() {
                Some(Func::Cos) => key.c = *k as u8,
                Some(Func::Cosh) => key.ch = *k as u8,
                Some(Func::Sin) => key.s = *k,
                Some(Func::Sinh) => key.sh = *k,
                _ if atom.depends_on(Var::Lam) => {
                    return Err(Error::NonCanonicalLambda(e.to_string()))
                }
                _ => rest.push((atom.clone(), *k)),
            }
        }
        parts
            .entry(key)
            .or_insert_with(Poly::zero)
            .push_reduced(Monomial::from_pairs(rest), c.clone());
    }
    let den = Frac::one().div(&Frac::from(e.den_poly()))?;
    Ok(parts
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| (k, Frac::from(p).mul(&den)))
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemTag {
    Explicit,
    Reduced,
    Case1,
    Case2,
    Case3,
}

impl SystemTag {
    pub const ALL: [SystemTag; 5] = [
        SystemTag::Explicit,
        SystemTag::Reduced,
        SystemTag::Case1,
        SystemTag::Case2,
        SystemTag::Case3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemTag::Explicit => "explicit",
            SystemTag::Reduced => "reduced",
            SystemTag::Case1 => "case1",
            SystemTag::Case2 => "case2",
            SystemTag::Case3 => "case3",
        }
    }

    fn embedded(self) -> &'static str {
        match self {
            SystemTag::Explicit => include_str!("../data/v1/explicit.txt"),
            SystemTag::Reduced => include_str!("../data/v1/reduced.txt"),
            SystemTag::Case1 => include_str!("../data/v1/case1.txt"),
            SystemTag::Case2 => include_str!("../data/v1/case2.txt"),
            SystemTag::Case3 => include_str!("../data/v1/case3.txt"),
        }
    }
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemTag {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SystemTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown system `{s}`"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "source")]
pub enum Provenance {
    Emitted(CaseTag),
    Transcribed(SystemTag),
    Derived,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeSystem {
    pub equations: Vec<Frac>,
    pub provenance: Provenance,
}

impl PdeSystem {
    pub fn new(equations: Vec<Frac>, provenance: Provenance) -> Self {
        PdeSystem {
            equations,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Parses one equation per non-empty line; `r` and `s` are recognized.
    pub fn parse(text: &str, provenance: Provenance) -> Result<PdeSystem> {
        let table = rs_table();
        let mut equations = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let e = frac_with(line, &table).map_err(|err| {
                Error::Data(format!("line {}: {err}", i + 1))
            })?;
            equations.push(e);
        }
        Ok(PdeSystem::new(equations, provenance))
    }

    /// Replaces `r` and `s` by their definitions.
    pub fn expanded(&self) -> Result<PdeSystem> {
        let (r, s) = rs_defs();
        let equations = self
            .equations
            .iter()
            .map(|e| {
                e.substitute_function(&r_symbol(), &r)?
                    .substitute_function(&s_symbol(), &s)
            })
            .collect::<Result<_>>()?;
        Ok(PdeSystem::new(equations, self.provenance))
    }

    pub fn to_lines(&self) -> Vec<String> {
        self.equations.iter().map(Frac::to_string).collect()
    }

    pub fn polys(&self) -> Result<Vec<Poly>> {
        self.equations
            .iter()
            .map(|e| {
                if e.is_poly() {
                    Ok(e.num().clone())
                } else {
                    Err(Error::Data(format!("equation `{e}` is not polynomial")))
                }
            })
            .collect()
    }
}

fn rs_deps() -> [Var; 4] {
    [Var::X1, Var::X2, Var::P1, Var::P2]
}

pub fn r_symbol() -> FunctionSymbol {
    FunctionSymbol::new("r", crate::symcore::VarSet::of(&rs_deps())).expect("valid symbol")
}

pub fn s_symbol() -> FunctionSymbol {
    FunctionSymbol::new("s", crate::symcore::VarSet::of(&rs_deps())).expect("valid symbol")
}

/// The default table extended by `r` and `s`.
pub fn rs_table() -> SymbolTable {
    let mut t = SymbolTable::new();
    t.declare("r", &rs_deps()).expect("fresh name");
    t.declare("s", &rs_deps()).expect("fresh name");
    t
}

pub fn rs_defs() -> (Frac, Frac) {
    let text = include_str!("../data/v1/rs.txt");
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let table = SymbolTable::new();
    let mut next = || frac_with(lines.next().expect("two lines"), &table).expect("valid data");
    let r = next();
    let s = next();
    (r, s)
}

/// The data directory, overridable through `TORSIONLAB_DATA`.
pub fn transcribed_system(tag: SystemTag) -> Result<PdeSystem> {
    match std::env::var_os("TORSIONLAB_DATA") {
        Some(dir) => transcribed_system_from(Path::new(&dir), tag),
        None => PdeSystem::parse(tag.embedded(), Provenance::Transcribed(tag)),
    }
}

pub fn transcribed_system_from(dir: &Path, tag: SystemTag) -> Result<PdeSystem> {
    let path = dir.join(format!("{}.txt", tag.name()));
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    PdeSystem::parse(&text, Provenance::Transcribed(tag))
}

/// The stored output of [`emit_system`], from `emitted_<case>.txt`.
pub fn emitted_golden(case: CaseTag) -> Result<PdeSystem> {
    let prov = Provenance::Emitted(case);
    if let Some(dir) = std::env::var_os("TORSIONLAB_DATA") {
        let path = Path::new(&dir).join(format!("emitted_{}.txt", case.name()));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        return PdeSystem::parse(&text, prov);
    }
    let text = match case {
        CaseTag::RealRoots => include_str!("../data/v1/emitted_real.txt"),
        CaseTag::ComplexRoots => include_str!("../data/v1/emitted_complex.txt"),
    };
    PdeSystem::parse(text, prov)
}

/// Normalizes collected coefficients: primitive integer form, deduplicated
/// and sorted.
pub fn equations_from_residuals(residuals: &[Frac]) -> Result<Vec<Frac>> {
    let mut seen = BTreeSet::new();
    for r in residuals {
        if r.is_zero() {
            continue;
        }
        // Denominators are jet-free, so the numerator has the same zero set
        // and its coefficients span the same space.
        let cleared = Frac::from(r.num().clone());
        for (_, coeff) in collect(&cleared)? {
            let mut p = coeff.num().clone();
            p.make_primitive();
            seen.insert(p);
        }
    }
    Ok(seen.into_iter().map(Frac::from).collect())
}

pub fn emit_system(case: CaseTag) -> Result<PdeSystem> {
    let residuals = closure_obstruction(case, None, None)?;
    Ok(PdeSystem::new(
        equations_from_residuals(&residuals)?,
        Provenance::Emitted(case),
    ))
}

fn swap_var(v: Var) -> Var {
    match v {
        Var::X1 => Var::X2,
        Var::X2 => Var::X1,
        Var::P1 => Var::P2,
        Var::P2 => Var::P1,
        other => other,
    }
}

/// The swap `u <-> v`, `x1 <-> x2`, `p1 <-> p2` (also `r <-> s`).
pub fn mirror(e: &Frac) -> Result<Frac> {
    e.map_atoms(&mut |a| match a {
        Atom::Var(v) => Ok(Some(Frac::var(swap_var(*v)))),
        Atom::Jet(j) => {
            let partner = match j.func().name() {
                "u" => FunctionSymbol::v(),
                "v" => FunctionSymbol::u(),
                "r" => s_symbol(),
                "s" => r_symbol(),
                _ => return Ok(None),
            };
            let ders: Vec<Var> = j.derivatives().into_iter().map(swap_var).collect();
            Ok(Some(Frac::jet(JetSymbol::new(partner, &ders)?)))
        }
        Atom::Func(..) => Ok(None),
    })
}

/// `target = sum_i sum_(m, c) c * m * generators[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealWitness {
    pub target: Poly,
    pub generators: Vec<(String, Poly)>,
    pub multipliers: Vec<Vec<(Monomial, Scalar)>>,
}

impl IdealWitness {
    pub fn reconstruct(&self) -> Poly {
        let mut acc = Poly::zero();
        for ((_, g), ms) in self.generators.iter().zip(&self.multipliers) {
            for (m, c) in ms {
                acc.add_assign(&g.mul_term(m, c));
            }
        }
        acc
    }

    pub fn is_sound(&self) -> bool {
        self.reconstruct().sub(&self.target).is_zero()
    }

    /// Labels of the generators with a nonzero multiplier.
    pub fn support(&self) -> Vec<&str> {
        self.generators
            .iter()
            .zip(&self.multipliers)
            .filter(|(_, ms)| !ms.is_empty())
            .map(|((l, _), _)| l.as_str())
            .collect()
    }

    pub fn max_multiplier_degree(&self) -> u32 {
        self.multipliers
            .iter()
            .flatten()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    /// Human-readable form `c*m*[label] + ...`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for ((label, _), ms) in self.generators.iter().zip(&self.multipliers) {
            for (m, c) in ms {
                let coeff = Frac::from(Poly::term(m.clone(), c.clone()));
                parts.push(format!("({coeff})*[{label}]"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn monomials_up_to(atoms: &[Atom], degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (k, a) in atoms.iter().enumerate().skip(*start) {
                let mm = m.mul(&Monomial::atom(a.clone(), 1));
                out.push(mm.clone());
                next.push((mm, k));
            }
        }
        frontier = next;
    }
    out
}

struct Row {
    vec: BTreeMap<Monomial, Scalar>,
    combo: BTreeMap<usize, Scalar>,
}

fn axpy<K: Ord + Clone>(dst: &mut BTreeMap<K, Scalar>, k: &Scalar, src: &BTreeMap<K, Scalar>) {
    for (key, c) in src {
        let delta = k * c;
        match dst.get_mut(key) {
            Some(slot) => {
                *slot += delta;
                if slot.is_zero() {
                    dst.remove(key);
                }
            }
            None => {
                dst.insert(key.clone(), delta);
            }
        }
    }
}

/// Exact linear algebra on the span of `m * g` for jet monomials `m` of
/// degree at most the bound.
pub struct MembershipSolver {
    generators: Vec<(String, Poly)>,
    columns: Vec<(usize, Monomial)>,
    basis: HashMap<Monomial, Row>,
}

impl MembershipSolver {
    /// `targets` protect their monomials from pruning; membership can only be
    /// decided for polynomials supported there.
    pub fn new(generators: &[(String, Poly)], degree_bound: u32, targets: &[Poly]) -> Self {
        let mut atoms: BTreeSet<Atom> = BTreeSet::new();
        for p in generators.iter().map(|(_, g)| g).chain(targets) {
            atoms.extend(p.atoms());
        }
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        let multipliers = monomials_up_to(&atoms, degree_bound);
        let protected: BTreeSet<&Monomial> =
            targets.iter().flat_map(|t| t.terms().map(|(m, _)| m)).collect();

        let mut products: Vec<((usize, Monomial), Poly)> = Vec::new();
        for (i, (_, g)) in generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            for m in &multipliers {
                products.push(((i, m.clone()), g.mul_term(m, &Scalar::one())));
            }
        }

        // A column owning a monomial no other column or target reaches must
        // have coefficient zero in every solution.
        let mut alive = vec![true; products.len()];
        let mut owners: HashMap<Monomial, Vec<usize>> = HashMap::new();
        for (k, (_, p)) in products.iter().enumerate() {
            for (m, _) in p.terms() {
                owners.entry(m.clone()).or_default().push(k);
            }
        }
        let mut count: HashMap<&Monomial, usize> =
            owners.iter().map(|(m, ks)| (m, ks.len())).collect();
        let mut queue: VecDeque<&Monomial> = count
            .iter()
            .filter(|(m, c)| **c == 1 && !protected.contains(**m))
            .map(|(m, _)| *m)
            .collect();
        while let Some(m) = queue.pop_front() {
            let Some(&k) = owners[m].iter().find(|&&k| alive[k]) else {
                continue;
            };
            if count[m] != 1 {
                continue;
            }
            alive[k] = false;
            for (mm, _) in products[k].1.terms() {
                let c = count.get_mut(mm).unwrap();
                *c -= 1;
                if *c == 1 && !protected.contains(mm) {
                    queue.push_back(mm);
                }
            }
        }

        let mut solver = MembershipSolver {
            generators: generators.to_vec(),
            columns: Vec::new(),
            basis: HashMap::new(),
        };
        for (k, ((i, m), p)) in products.into_iter().enumerate() {
            if !alive[k] {
                continue;
            }
            let idx = solver.columns.len();
            solver.columns.push((i, m));
            let row = Row {
                vec: p.into_terms().collect(),
                combo: BTreeMap::from([(idx, Scalar::one())]),
            };
            solver.insert(row);
        }
        solver
    }

    fn reduce(&self, row: &mut Row) {
        while let Some((lm, lc)) = row.vec.iter().next_back() {
            let Some(b) = self.basis.get(lm) else { break };
            let k = -lc.clone();
            axpy(&mut row.vec, &k, &b.vec);
            axpy(&mut row.combo, &k, &b.combo);
        }
    }

    fn insert(&mut self, mut row: Row) {
        self.reduce(&mut row);
        let Some((lm, lc)) = row.vec.iter().next_back() else { return };
        let lm = lm.clone();
        let inv = lc.recip();
        for c in row.vec.values_mut().chain(row.combo.values_mut()) {
            *c = &*c * &inv;
        }
        self.basis.insert(lm, row);
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn member(&self, target: &Poly) -> Option<IdealWitness> {
        let mut row = Row {
            vec: target.terms().map(|(m, c)| (m.clone(), c.clone())).collect(),
            combo: BTreeMap::new(),
        };
        self.reduce(&mut row);
        if !row.vec.is_empty() {
            return None;
        }
        let mut multipliers = vec![Vec::new(); self.generators.len()];
        for (k, c) in row.combo {
            let (i, m) = &self.columns[k];
            multipliers[*i].push((m.clone(), -c));
        }
        for ms in &mut multipliers {
            ms.sort();
        }
        Some(IdealWitness {
            target: target.clone(),
            generators: self.generators.clone(),
            multipliers,
        })
    }
}

fn labeled(system: &[Poly], prefix: &str) -> Vec<(String, Poly)> {
    system
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("{prefix}{}", i + 1), p.clone()))
        .collect()
}

pub fn ideal_member(target: &Poly, generators: &[Poly], degree_bound: u32) -> Option<IdealWitness> {
    let gens = labeled(generators, "eq");
    MembershipSolver::new(&gens, degree_bound, std::slice::from_ref(target)).member(target)
}

/// Appends the first total derivatives along `x1, x2, p1, p2`.
pub fn prolong(generators: &[(String, Poly)]) -> Result<Vec<(String, Poly)>> {
    prolong_under(generators, &[])
}

/// [`prolong`] followed by re-imposing `assumptions` on the derivatives.
pub fn prolong_under(
    generators: &[(String, Poly)],
    assumptions: &[Assumption],
) -> Result<Vec<(String, Poly)>> {
    let mut out = generators.to_vec();
    for (label, g) in generators {
        for v in [Var::X1, Var::X2, Var::P1, Var::P2] {
            let d = impose(&Frac::from(g.clone()).diff(v)?, assumptions)?;
            if !d.is_zero() {
                out.push((format!("d_{v}({label})"), d.num().clone()));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MembershipEntry {
    pub index: usize,
    pub equation: Poly,
    pub witness: Option<IdealWitness>,
    /// Whether prolonged generators were needed.
    pub prolonged: bool,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub degree_bound: u32,
    /// Members of the first system checked against the second.
    pub forward: Vec<MembershipEntry>,
    pub backward: Vec<MembershipEntry>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.forward
            .iter()
            .chain(&self.backward)
            .all(|e| e.witness.is_some())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &MembershipEntry)> {
        let f = self.forward.iter().map(|e| ("forward", e));
        let b = self.backward.iter().map(|e| ("backward", e));
        f.chain(b).filter(|(_, e)| e.witness.is_none())
    }

    pub fn prolongations(&self) -> usize {
        self.forward
            .iter()
            .chain(&self.backward)
            .filter(|e| e.prolonged)
            .count()
    }
}

/// Checks `targets` against `generators`, prolonging once for the targets
/// that resist the algebraic search.
pub fn check_members(
    targets: &[Poly],
    generators: &[(String, Poly)],
    degree_bound: u32,
) -> Result<Vec<MembershipEntry>> {
    check_members_under(targets, generators, degree_bound, &[])
}

pub fn check_members_under(
    targets: &[Poly],
    generators: &[(String, Poly)],
    degree_bound: u32,
    assumptions: &[Assumption],
) -> Result<Vec<MembershipEntry>> {
    let solver = MembershipSolver::new(generators, degree_bound, targets);
    let mut entries: Vec<MembershipEntry> = targets
        .iter()
        .enumerate()
        .map(|(i, t)| MembershipEntry {
            index: i + 1,
            equation: t.clone(),
            witness: solver.member(t),
            prolonged: false,
        })
        .collect();
    let stuck: Vec<Poly> = entries
        .iter()
        .filter(|e| e.witness.is_none())
        .map(|e| e.equation.clone())
        .collect();
    if stuck.is_empty() {
        return Ok(entries);
    }
    let solver = MembershipSolver::new(&prolong_under(generators, assumptions)?, degree_bound, &stuck);
    for e in entries.iter_mut().filter(|e| e.witness.is_none()) {
        e.witness = solver.member(&e.equation);
        e.prolonged = e.witness.is_some();
    }
    Ok(entries)
}

fn system_polys(s: &PdeSystem) -> Result<Vec<Poly>> {
    let polys = s.expanded()?.polys()?;
    Ok(polys.into_iter().filter(|p| !p.is_zero()).collect())
}

pub fn equivalent_systems(a: &PdeSystem, b: &PdeSystem, degree_bound: u32) -> Result<EquivalenceReport> {
    let (pa, pb) = (system_polys(a)?, system_polys(b)?);
    equivalent_polys(&pa, &pb, degree_bound)
}

pub fn equivalent_polys(a: &[Poly], b: &[Poly], degree_bound: u32) -> Result<EquivalenceReport> {
    equivalent_polys_under(a, b, degree_bound, &[])
}

fn equivalent_polys_under(
    a: &[Poly],
    b: &[Poly],
    degree_bound: u32,
    assumptions: &[Assumption],
) -> Result<EquivalenceReport> {
    Ok(EquivalenceReport {
        degree_bound,
        forward: check_members_under(a, &labeled(b, "B"), degree_bound, assumptions)?,
        backward: check_members_under(b, &labeled(a, "A"), degree_bound, assumptions)?,
    })
}

/// `u_p1p2 = 0` or `v_p1p2 = 0`, with all derivatives.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Assumption {
    UMixedVanishes,
    VMixedVanishes,
}

impl Assumption {
    fn function(self) -> &'static str {
        match self {
            Assumption::UMixedVanishes => "u",
            Assumption::VMixedVanishes => "v",
        }
    }

    pub fn jet(self) -> JetSymbol {
        let f = match self {
            Assumption::UMixedVanishes => FunctionSymbol::u(),
            Assumption::VMixedVanishes => FunctionSymbol::v(),
        };
        JetSymbol::new(f, &[Var::P1, Var::P2]).expect("valid jet")
    }

    fn kills(self, j: &JetSymbol) -> bool {
        j.func().name() == self.function() && j.count(Var::P1) >= 1 && j.count(Var::P2) >= 1
    }
}

/// Sets the assumed jets and all their derivatives to zero.
pub fn impose(e: &Frac, assumptions: &[Assumption]) -> Result<Frac> {
    e.map_atoms(&mut |a| match a {
        Atom::Jet(j) if assumptions.iter().any(|s| s.kills(j)) => Ok(Some(Frac::zero())),
        _ => Ok(None),
    })
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: usize,
    pub assumptions: Vec<Assumption>,
    /// The jet assumed to be nonzero, if any.
    pub nonzero: Option<JetSymbol>,
    pub cancellations: Vec<String>,
    pub report: EquivalenceReport,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn cancel_factor(p: &Poly, j: &JetSymbol) -> (Poly, u32) {
    let atom = Atom::Jet(j.clone());
    let e = p.monomial_content().exponent(&atom);
    if e == 0 {
        return (p.clone(), 0);
    }
    let q = p
        .divide_exact(&Poly::term(Monomial::atom(atom, e), Scalar::one()))
        .expect("content divides");
    (q, e)
}

fn prepared(
    system: &PdeSystem,
    assumptions: &[Assumption],
    nonzero: Option<&JetSymbol>,
    label: &str,
    log: &mut Vec<String>,
) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for (i, e) in system.expanded()?.equations.iter().enumerate() {
        let mut p = impose(e, assumptions)?.num().clone();
        if p.is_zero() {
            continue;
        }
        if let Some(j) = nonzero {
            let (q, k) = cancel_factor(&p, j);
            if k > 0 {
                log.push(format!("{label} eq{}: cancelled {j}^{k}", i + 1));
                p = q;
            }
        }
        p.make_primitive();
        out.push(p);
    }
    Ok(out)
}

/// Checks the three branches of the reduced system against the transcribed
/// case systems.
pub fn case_split_check(degree_bound: u32) -> Result<Vec<CaseReport>> {
    let reduced = transcribed_system(SystemTag::Reduced)?;
    let cases = [
        (1, SystemTag::Case1, vec![Assumption::UMixedVanishes], Some(Assumption::VMixedVanishes)),
        (2, SystemTag::Case2, vec![Assumption::VMixedVanishes], Some(Assumption::UMixedVanishes)),
        (3, SystemTag::Case3, vec![Assumption::UMixedVanishes, Assumption::VMixedVanishes], None),
    ];
    let mut out = Vec::new();
    for (case, tag, assumptions, nonzero) in cases {
        let nonzero = nonzero.map(Assumption::jet);
        let mut log = Vec::new();
        let a = prepared(&reduced, &assumptions, nonzero.as_ref(), "reduced", &mut log)?;
        let b = prepared(&transcribed_system(tag)?, &assumptions, nonzero.as_ref(), tag.name(), &mut log)?;
        let report = equivalent_polys_under(&a, &b, degree_bound, &assumptions)?;
        out.push(CaseReport {
            case,
            assumptions,
            nonzero,
            cancellations: log,
            report,
        });
    }
    Ok(out)
}

/// Whether the mirror of the first case system spans the second.
pub fn mirror_check() -> Result<EquivalenceReport> {
    let case1 = transcribed_system(SystemTag::Case1)?;
    let mirrored = PdeSystem::new(
        case1.equations.iter().map(mirror).collect::<Result<_>>()?,
        Provenance::Derived,
    );
    equivalent_systems(&mirrored, &transcribed_system(SystemTag::Case2)?, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::frac;

    fn lm(c: u8, ch: u8, s: u32, sh: u32) -> LambdaMonomial {
        LambdaMonomial { c, ch, s, sh }
    }

    #[test]
    fn collect_examples() {
        let e = frac("sin(lam)*cosh(lam)*(1 + 2*u_p1p2)").unwrap();
        let got = collect(&e).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[&lm(0, 1, 1, 0)], frac("1 + 2*u_p1p2").unwrap());
        let got = collect(&frac("cos(lam)^2").unwrap()).unwrap();
        assert_eq!(got[&lm(0, 0, 0, 0)], Frac::one());
        assert_eq!(got[&lm(0, 0, 2, 0)], Frac::int(-1));
        assert!(collect(&Frac::zero()).unwrap().is_empty());
        assert!(collect(&frac("lam*sin(lam)").unwrap()).is_err());
        assert!(collect(&frac("1/sin(lam)").unwrap()).is_err());
    }

    #[test]
    fn transcribed_counts() {
        let counts: Vec<usize> = SystemTag::ALL
            .iter()
            .map(|t| transcribed_system(*t).unwrap().len())
            .collect();
        assert_eq!(counts, vec![12, 11, 6, 6, 7]);
    }

    #[test]
    fn third_equation_is_dependent() {
        let s = transcribed_system(SystemTag::Explicit).unwrap();
        let e = &s.equations;
        assert!(e[2].add(&e[0]).add(&e[1]).is_zero());
    }

    #[test]
    fn rs_mirror() {
        let (r, s) = rs_defs();
        assert!(mirror(&r).unwrap().sub(&s).is_zero());
        assert!(mirror(&s).unwrap().sub(&r).is_zero());
        let u = frac("p1^3").unwrap();
        let s_sub = s.substitute_function(&FunctionSymbol::u(), &u).unwrap();
        let v = frac("x2*p2^2").unwrap();
        assert!(s_sub
            .substitute_function(&FunctionSymbol::v(), &v)
            .unwrap()
            .is_zero());
        let r0 = r.substitute_function(&FunctionSymbol::v(), &Frac::zero()).unwrap();
        assert!(r0.is_zero());
    }

    #[test]
    fn bound_zero_witnesses() {
        let gens = transcribed_system(SystemTag::Explicit).unwrap().expanded().unwrap().polys().unwrap();
        let (r, s) = rs_defs();
        let rs = r.mul(&s).num().clone();
        let w = ideal_member(&rs, &gens, 0).unwrap();
        assert!(w.is_sound());
        assert_eq!(w.support(), vec!["eq4", "eq5"]);
        let quarter = Scalar::ratio(1, 4);
        assert_eq!(w.multipliers[3], vec![(Monomial::one(), quarter.clone())]);
        assert_eq!(w.multipliers[4], vec![(Monomial::one(), -quarter)]);
        let uv = frac("u_p1p2*v_p1p2").unwrap().num().clone();
        let w = ideal_member(&uv, &gens, 0).unwrap();
        let eighth = Scalar::ratio(-1, 8);
        assert_eq!(w.multipliers[3], vec![(Monomial::one(), eighth.clone())]);
        assert_eq!(w.multipliers[4], vec![(Monomial::one(), eighth)]);
        let s_p1 = s.diff(Var::P1).unwrap().num().clone();
        assert!(ideal_member(&s_p1, &gens, 0).unwrap().is_sound());
        assert!(ideal_member(&Poly::from_atom(Atom::Var(Var::X1)), &gens, 1).is_none());
    }
}
