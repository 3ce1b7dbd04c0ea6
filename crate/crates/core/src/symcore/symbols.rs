//! Coordinates, function symbols and their jets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// One of the six base coordinates, in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    T,
    X1,
    X2,
    P1,
    P2,
    Lam,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::T, Var::X1, Var::X2, Var::P1, Var::P2, Var::Lam];

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::P1 => "p1",
            Var::P2 => "p2",
            Var::Lam => "lam",
        }
    }

    pub fn latex(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X1 => "x^1",
            Var::X2 => "x^2",
            Var::P1 => "p^1",
            Var::P2 => "p^2",
            Var::Lam => "\\lambda",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of [`Var`] stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn of(vars: &[Var]) -> Self {
        vars.iter().fold(VarSet(0), |s, v| s.with(*v))
    }

    pub fn with(self, v: Var) -> Self {
        VarSet(self.0 | (1 << v.index()))
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        Var::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }
}

/// A named unknown function together with the coordinates it depends on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FunctionSymbol {
    name: Arc<str>,
    deps: VarSet,
}

const RESERVED: [&str; 9] = [
    "sin", "cos", "sinh", "cosh", "exp", "ln", "arctan", "arctanh", "sqrt",
];

impl FunctionSymbol {
    pub fn new(name: &str, deps: VarSet) -> Result<Self> {
        let mut chars = name.chars();
        let valid = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric());
        if !valid {
            return Err(Error::Declaration(format!("`{name}` is not an identifier")));
        }
        if Var::from_name(name).is_some() || RESERVED.contains(&name) {
            return Err(Error::Declaration(format!("`{name}` is reserved")));
        }
        Ok(FunctionSymbol {
            name: Arc::from(name),
            deps,
        })
    }

    fn builtin(name: &str, deps: &[Var]) -> Self {
        FunctionSymbol {
            name: Arc::from(name),
            deps: VarSet::of(deps),
        }
    }

    pub fn u() -> Self {
        Self::builtin("u", &[Var::X1, Var::X2, Var::P1, Var::P2])
    }

    pub fn v() -> Self {
        Self::builtin("v", &[Var::X1, Var::X2, Var::P1, Var::P2])
    }

    pub fn f1() -> Self {
        Self::builtin("F1", &[Var::T, Var::X1, Var::X2, Var::P1, Var::P2])
    }

    pub fn f2() -> Self {
        Self::builtin("F2", &[Var::T, Var::X1, Var::X2, Var::P1, Var::P2])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn deps(&self) -> VarSet {
        self.deps
    }
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A partial derivative of a function symbol. The derivative multiset is
/// stored as one count per [`Var`], so mixed partials commute by construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetSymbol {
    func: FunctionSymbol,
    orders: [u8; 6],
}

impl JetSymbol {
    pub fn base(func: FunctionSymbol) -> Self {
        JetSymbol {
            func,
            orders: [0; 6],
        }
    }

    pub fn new(func: FunctionSymbol, derivatives: &[Var]) -> Result<Self> {
        let mut jet = JetSymbol::base(func);
        for &v in derivatives {
            jet = jet.derivative(v).ok_or_else(|| Error::Dependency {
                function: jet.func.name().to_string(),
                var: v.name().to_string(),
            })?;
        }
        Ok(jet)
    }

    /// The jet one order higher along `v`, or `None` if the function does not
    /// depend on `v`.
    pub fn derivative(&self, v: Var) -> Option<JetSymbol> {
        if !self.func.deps.contains(v) {
            return None;
        }
        let mut next = self.clone();
        next.orders[v.index()] += 1;
        Some(next)
    }

    /// The jet one order lower along `v`, if `v` occurs in the multiset.
    pub fn lowered(&self, v: Var) -> Option<JetSymbol> {
        if self.orders[v.index()] == 0 {
            return None;
        }
        let mut prev = self.clone();
        prev.orders[v.index()] -= 1;
        Some(prev)
    }

    pub fn func(&self) -> &FunctionSymbol {
        &self.func
    }

    pub fn count(&self, v: Var) -> u8 {
        self.orders[v.index()]
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&c| c as usize).sum()
    }

    /// The derivative multiset, sorted by the variable order.
    pub fn derivatives(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .flat_map(|v| std::iter::repeat_n(v, self.count(v) as usize))
            .collect()
    }

    /// Same multiset applied to another function symbol.
    pub fn with_func(&self, func: FunctionSymbol) -> Option<JetSymbol> {
        JetSymbol::new(func, &self.derivatives()).ok()
    }

    pub fn latex(&self) -> String {
        let ders = self.derivatives();
        if ders.is_empty() {
            return self.func.name().to_string();
        }
        let sub: String = ders.iter().map(|v| v.latex()).collect();
        format!("{}_{{{}}}", self.func.name(), sub)
    }
}

impl fmt::Display for JetSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.func.name())?;
        let ders = self.derivatives();
        if !ders.is_empty() {
            f.write_str("_")?;
            for v in ders {
                f.write_str(v.name())?;
            }
        }
        Ok(())
    }
}

/// Symbols the parser resolves. Starts with `u`, `v`, `F1`, `F2`.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    funcs: BTreeMap<String, FunctionSymbol>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        let mut funcs = BTreeMap::new();
        for f in [
            FunctionSymbol::u(),
            FunctionSymbol::v(),
            FunctionSymbol::f1(),
            FunctionSymbol::f2(),
        ] {
            funcs.insert(f.name().to_string(), f);
        }
        SymbolTable { funcs }
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an auxiliary function symbol, e.g. `psi` depending on `lam`.
    pub fn declare(&mut self, name: &str, deps: &[Var]) -> Result<FunctionSymbol> {
        let sym = FunctionSymbol::new(name, VarSet::of(deps))?;
        if let Some(existing) = self.funcs.get(name) {
            if existing != &sym {
                return Err(Error::Declaration(format!(
                    "`{name}` is already declared with different dependencies"
                )));
            }
        }
        self.funcs.insert(name.to_string(), sym.clone());
        Ok(sym)
    }

    /// Parses a declaration of the form `name:var,var,...`.
    pub fn declare_spec(&mut self, spec: &str) -> Result<FunctionSymbol> {
        let (name, vars) = spec
            .split_once(':')
            .ok_or_else(|| Error::Declaration(format!("expected name:vars, got `{spec}`")))?;
        let vars = vars
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                Var::from_name(s.trim())
                    .ok_or_else(|| Error::Declaration(format!("unknown variable `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.declare(name.trim(), &vars)
    }

    pub fn get(&self, name: &str) -> Option<&FunctionSymbol> {
        self.funcs.get(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_naming_is_order_insensitive() {
        let a = JetSymbol::new(FunctionSymbol::u(), &[Var::P2, Var::P1, Var::P1]).unwrap();
        let b = JetSymbol::new(FunctionSymbol::u(), &[Var::P1, Var::P2, Var::P1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "u_p1p1p2");
        assert_eq!(a.latex(), "u_{p^1p^1p^2}");
    }

    #[test]
    fn dependency_is_enforced() {
        assert!(JetSymbol::new(FunctionSymbol::u(), &[Var::T]).is_err());
        assert!(JetSymbol::new(FunctionSymbol::f1(), &[Var::T]).is_ok());
    }

    #[test]
    fn declarations() {
        let mut table = SymbolTable::new();
        let psi = table.declare_spec("psi:lam").unwrap();
        assert!(psi.deps().contains(Var::Lam));
        assert!(table.declare("sin", &[]).is_err());
        assert!(table.declare("x1", &[]).is_err());
        assert!(table.declare("psi", &[Var::T]).is_err());
    }
}
