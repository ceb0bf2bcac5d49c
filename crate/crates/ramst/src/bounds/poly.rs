//! Multivariate polynomials with nonnegative big-integer coefficients over
//! the rank-size variables `n_0 .. n_ell`. Subtraction-free by
//! construction, hence monotone in every variable. Coefficients are exact:
//! certificates must not suffer rounding.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exponent vector, one slot per variable.
type Expts = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivePoly {
    nvars: usize,
    /// Monomials with nonzero coefficients only.
    terms: BTreeMap<Expts, BigUint>,
}

impl PositivePoly {
    pub fn zero(nvars: usize) -> Self {
        PositivePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: u64) -> Self {
        let mut p = PositivePoly::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], BigUint::from(c));
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = PositivePoly::zero(nvars);
        p.terms.insert(e, BigUint::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PositivePoly) -> PositivePoly {
        assert_eq!(self.nvars, other.nvars, "variable sets must agree");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let slot = out.terms.entry(e.clone()).or_insert_with(BigUint::zero);
            *slot += c;
        }
        out
    }

    pub fn add_const(&self, c: u64) -> PositivePoly {
        self.add(&PositivePoly::constant(self.nvars, c))
    }

    pub fn mul(&self, other: &PositivePoly) -> PositivePoly {
        assert_eq!(self.nvars, other.nvars, "variable sets must agree");
        let mut out = PositivePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expts = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = out.terms.entry(e).or_insert_with(BigUint::zero);
                *slot += ca * cb;
            }
        }
        out
    }

    fn pow(&self, k: u32) -> PositivePoly {
        let mut out = PositivePoly::constant(self.nvars, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Simultaneous substitution `n_i := map[i]`. All replacement
    /// polynomials must share this polynomial's variable set.
    pub fn subst_all(&self, map: &[PositivePoly]) -> PositivePoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = PositivePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut m = PositivePoly::zero(self.nvars);
            m.terms.insert(vec![0; self.nvars], c.clone());
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    m = m.mul(&map[i].pow(*k));
                }
            }
            out = out.add(&m);
        }
        out
    }

    /// Substitute a single variable, leaving the others in place.
    pub fn subst(&self, i: usize, p: &PositivePoly) -> PositivePoly {
        let mut map: Vec<PositivePoly> = (0..self.nvars)
            .map(|j| PositivePoly::var(self.nvars, j))
            .collect();
        map[i] = p.clone();
        self.subst_all(&map)
    }

    pub fn eval(&self, values: &[u64]) -> BigUint {
        assert_eq!(values.len(), self.nvars);
        let mut acc = BigUint::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, k) in e.iter().enumerate() {
                for _ in 0..*k {
                    m *= BigUint::from(values[i]);
                }
            }
            acc += m;
        }
        acc
    }

    /// Every stored coefficient is positive (zero coefficients are never
    /// kept). Exposed for the positivity property tests.
    pub fn coefficients(&self) -> impl Iterator<Item = &BigUint> {
        self.terms.values()
    }

    /// Monomials in the canonical order used by `Display`.
    fn sorted_monomials(&self) -> Vec<(&Expts, &BigUint)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        v
    }
}

/// Canonical text: monomials in descending graded-lexicographic order,
/// e.g. `2*n0^2*n1 + n0 + 7`. Stable, for golden tests.
impl fmt::Display for PositivePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_monomials().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|k| *k == 0);
            if !c.is_one() || is_const {
                write!(f, "{c}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "n{v}")?;
                if *k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}
