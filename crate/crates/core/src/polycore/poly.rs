use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ComplexFloat, GaussianRational, PolyError};

/// Exact multivariate polynomial with Gaussian-rational coefficients.
///
/// Exponent vectors are dense and indexed by position in `vars`. Zero
/// coefficients are never stored, so equality is structural once both sides
/// are aligned to a common registry.
#[derive(Clone, Debug, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

impl MultiPoly {
    /// The zero polynomial over the given variables.
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Self { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<GaussianRational>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { vars: Vec::new(), terms }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(name: &str) -> Self {
        Self::monomial(&[(name, 1)], GaussianRational::one())
    }

    /// `c · Π v^e` for the listed `(v, e)` pairs.
    pub fn monomial(factors: &[(&str, u32)], c: impl Into<GaussianRational>) -> Self {
        let mut vars: Vec<String> = Vec::new();
        let mut exps: Vec<u32> = Vec::new();
        for &(v, e) in factors {
            match vars.iter().position(|x| x == v) {
                Some(i) => exps[i] += e,
                None => {
                    vars.push(v.to_string());
                    exps.push(e);
                }
            }
        }
        let mut p = Self { vars, terms: BTreeMap::new() };
        p.add_term(exps, c.into());
        p
    }

    /// Builds a polynomial from raw `(exponents, coefficient)` pairs. Panics if an
    /// exponent vector has the wrong width.
    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent width does not match variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, GaussianRational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Variables with a non-zero exponent in at least one term.
    pub fn used_vars(&self) -> Vec<&str> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Coefficient of the monomial `Π v^e`; variables not listed have exponent 0.
    pub fn coeff(&self, factors: &[(&str, u32)]) -> GaussianRational {
        let mut key = vec![0u32; self.vars.len()];
        for &(v, e) in factors {
            match self.var_index(v) {
                Some(i) => key[i] += e,
                None if e == 0 => {}
                None => return GaussianRational::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-keys the polynomial against `vars`, which must contain every used
    /// variable of `self`.
    pub fn aligned_to<S: AsRef<str>>(&self, vars: &[S]) -> Self {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = Self { vars, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut key = vec![0u32; out.vars.len()];
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let j = map[i].unwrap_or_else(|| {
                    panic!("variable `{}` missing from target registry", self.vars[i])
                });
                key[j] = ei;
            }
            out.add_term(key, c.clone());
        }
        out
    }

    /// Name-based union of two registries, `self`'s order first.
    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn align_pair(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.union_vars(other);
        (self.aligned_to(&vars), other.aligned_to(&vars))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.align_pair(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.align_pair(other);
        let mut out = Self::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: impl Into<BigInt>) -> Self {
        self.scale(&GaussianRational::from_bigint(n.into()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one().aligned_to(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `k`-th partial derivative with respect to `var`; zero if `var` is absent.
    pub fn diff(&self, var: &str, k: u32) -> Self {
        let Some(i) = self.var_index(var) else {
            return if k == 0 { self.clone() } else { Self::zero(&self.vars) };
        };
        if k == 0 {
            return self.clone();
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] < k {
                continue;
            }
            // falling factorial e·(e−1)…(e−k+1)
            let ff: BigInt = ((e[i] - k + 1)..=e[i]).map(BigInt::from).product();
            let mut key = e.clone();
            key[i] -= k;
            out.add_term(key, c * &GaussianRational::from_bigint(ff));
        }
        out
    }

    /// Replaces `var` by the polynomial `q`. The registry keeps `var` only if
    /// `q` itself mentions it.
    pub fn substitute(&self, var: &str, q: &MultiPoly) -> Self {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let mut base_vars = self.vars.clone();
        if !q.vars.iter().any(|v| v == var) {
            base_vars.remove(i);
        }
        for v in &q.vars {
            if !base_vars.contains(v) {
                base_vars.push(v.clone());
            }
        }
        let q = q.aligned_to(&base_vars);
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one().aligned_to(&base_vars)];
        let max_e = self.degree_in(var) as usize;
        for k in 1..=max_e {
            let next = powers[k - 1].mul(&q);
            powers.push(next);
        }
        let mut out = MultiPoly::zero(&base_vars);
        // group terms by the exponent of `var`
        let mut groups: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut key = vec![0u32; base_vars.len()];
            for (j, &ej) in e.iter().enumerate() {
                if j == i || ej == 0 {
                    continue;
                }
                let pos = base_vars.iter().position(|v| *v == self.vars[j]).unwrap();
                key[pos] = ej;
            }
            groups.entry(e[i]).or_insert_with(|| MultiPoly::zero(&base_vars)).add_term(key, c.clone());
        }
        for (k, g) in groups {
            out = out.add(&g.mul(&powers[k as usize]));
        }
        out.aligned_to(&base_vars)
    }

    pub fn substitute_const(&self, var: &str, c: impl Into<GaussianRational>) -> Self {
        self.substitute(var, &MultiPoly::constant(c))
    }

    /// Renames variables according to `(from, to)` pairs, applied simultaneously.
    /// Panics if the renaming merges two registry entries.
    pub fn rename(&self, pairs: &[(&str, &str)]) -> Self {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                pairs.iter().find(|(f, _)| f == v).map(|(_, t)| t.to_string()).unwrap_or_else(|| v.clone())
            })
            .collect();
        for (i, v) in vars.iter().enumerate() {
            assert!(!vars[..i].contains(v), "rename would merge variable `{v}`");
        }
        Self { vars, terms: self.terms.clone() }
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: &str, k: u32) -> Self {
        let Some(i) = self.var_index(var) else {
            return if k == 0 { self.clone() } else { Self::zero(&self.vars) };
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut out = Self::zero(&vars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut key = e.clone();
                key.remove(i);
                out.add_term(key, c.clone());
            }
        }
        out
    }

    /// Drops every term whose combined degree in `series_vars` exceeds `order`.
    pub fn truncate_degree(&self, series_vars: &[&str], order: u32) -> Self {
        let idx: Vec<usize> = series_vars.iter().filter_map(|v| self.var_index(v)).collect();
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| idx.iter().map(|&i| e[i]).sum::<u32>() <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Numeric evaluation. Every used variable must be assigned; extra
    /// assignments are ignored.
    pub fn eval(&self, assignment: &[(&str, ComplexFloat)]) -> Result<ComplexFloat, PolyError> {
        let used = self.used_vars();
        let mut values = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match assignment.iter().find(|(n, _)| n == v) {
                Some(&(_, x)) => values.push(x),
                None if used.contains(&v.as_str()) => {
                    return Err(PolyError::MissingVariable(v.clone()))
                }
                None => values.push(ComplexFloat::new(0.0, 0.0)),
            }
        }
        Ok(self.compile().eval(&values))
    }

    /// Floating-point image of the polynomial for repeated evaluation, with
    /// variables in registry order.
    pub fn compile(&self) -> CompiledPoly {
        self.compile_for(&self.vars)
    }

    /// Like [`compile`](Self::compile) but with values supplied in the order of `vars`.
    pub fn compile_for<S: AsRef<str>>(&self, vars: &[S]) -> CompiledPoly {
        let p = self.aligned_to(vars);
        let nvars = p.vars.len();
        let mut max_deg = vec![0u32; nvars];
        for e in p.terms.keys() {
            for (m, &x) in max_deg.iter_mut().zip(e) {
                *m = (*m).max(x);
            }
        }
        let mut offsets = Vec::with_capacity(nvars);
        let mut acc = 0usize;
        for &m in &max_deg {
            offsets.push(acc);
            acc += m as usize + 1;
        }
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| {
                let idx: Vec<u32> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| (offsets[i] + x as usize) as u32)
                    .collect();
                (idx, c.to_complex())
            })
            .collect();
        CompiledPoly { nvars, max_deg, offsets, table_len: acc, terms }
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let vars = self.union_vars(other);
        self.aligned_to(&vars).terms == other.aligned_to(&vars).terms
    }
}

impl Eq for MultiPoly {}

impl From<GaussianRational> for MultiPoly {
    fn from(c: GaussianRational) -> Self {
        MultiPoly::constant(c)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                MultiPoly::$f(self, rhs)
            }
        }
    };
}
poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&x, _)| x > 0)
                .map(|(&x, v)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Floating-point evaluation plan for a [`MultiPoly`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    max_deg: Vec<u32>,
    offsets: Vec<usize>,
    table_len: usize,
    terms: Vec<(Vec<u32>, ComplexFloat)>,
}

impl CompiledPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Sum of |coefficient|, an upper bound on |p| over the closed unit polydisc.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator { poly: self, table: vec![ComplexFloat::new(0.0, 0.0); self.table_len] }
    }

    pub fn eval(&self, values: &[ComplexFloat]) -> ComplexFloat {
        self.evaluator().eval(values)
    }
}

/// Reusable scratch space for evaluating a [`CompiledPoly`] many times.
pub struct Evaluator<'a> {
    poly: &'a CompiledPoly,
    table: Vec<ComplexFloat>,
}

impl Evaluator<'_> {
    pub fn eval(&mut self, values: &[ComplexFloat]) -> ComplexFloat {
        self.poly.eval_with(values, &mut self.table)
    }
}

impl CompiledPoly {
    /// `Σ |c| Π |v_i|^{e_i}`: bounds |p(v)| and scales its rounding error.
    pub fn magnitude(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nvars, "value count does not match variable count");
        let mut table = vec![0.0; self.table_len];
        for (i, &x) in values.iter().enumerate() {
            let off = self.offsets[i];
            let mut acc = 1.0;
            table[off] = acc;
            for k in 1..=self.max_deg[i] as usize {
                acc *= x.abs();
                table[off + k] = acc;
            }
        }
        self.terms
            .iter()
            .map(|(idx, c)| idx.iter().fold(c.norm(), |t, &j| t * table[j as usize]))
            .sum()
    }

    /// Evaluation with caller-owned scratch, resized as needed.
    pub fn eval_with(&self, values: &[ComplexFloat], table: &mut Vec<ComplexFloat>) -> ComplexFloat {
        assert_eq!(values.len(), self.nvars, "value count does not match variable count");
        table.resize(self.table_len, ComplexFloat::new(0.0, 0.0));
        for (i, &x) in values.iter().enumerate() {
            let off = self.offsets[i];
            let mut acc = ComplexFloat::new(1.0, 0.0);
            table[off] = acc;
            for k in 1..=self.max_deg[i] as usize {
                acc *= x;
                table[off + k] = acc;
            }
        }
        let mut sum = ComplexFloat::new(0.0, 0.0);
        for (idx, c) in &self.terms {
            let mut t = *c;
            for &j in idx {
                t *= table[j as usize];
            }
            sum += t;
        }
        sum
    }
}
