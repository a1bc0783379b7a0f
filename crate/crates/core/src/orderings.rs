//! Sharkovsky and Baldwin orderings, their tails, and the set constructors
//! `M(c, d)` and `Λ(ρ, S)` used to describe period sets of degree one maps.
//!
//! All sets are evaluated on a window `[1..n_max]`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::space::{fmt_q, parse_q, qi};
use crate::Q;

/// Element of `ℕ ∪ {2^∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShValue {
    Nat(usize),
    TwoInf,
}

impl ShValue {
    /// Sort key; larger means higher in the Sharkovsky order.
    fn rank(self) -> (i64, i64, i64) {
        match self {
            ShValue::TwoInf => (1, 0, 0),
            ShValue::Nat(n) => {
                assert!(n >= 1, "Sharkovsky values start at 1");
                let k = n.trailing_zeros() as i64;
                let odd = (n >> k) as i64;
                if odd == 1 {
                    (0, k, 0)
                } else {
                    (2, -k, -odd)
                }
            }
        }
    }
}

impl fmt::Display for ShValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShValue::Nat(n) => write!(f, "{n}"),
            ShValue::TwoInf => f.write_str("2^inf"),
        }
    }
}

impl FromStr for ShValue {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, OrderError> {
        match s.trim() {
            "2^inf" | "inf" => Ok(ShValue::TwoInf),
            t => match t.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(ShValue::Nat(n)),
                _ => Err(OrderError::Syntax(s.to_string())),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("{0} is not in the domain of the ordering of index {1}")]
    NotInDomain(usize, usize),
    #[error("ordering index must be at least 2, got {0}")]
    BadIndex(usize),
    #[error("cannot parse `{0}`")]
    Syntax(String),
}

/// `a ≤_Sh b`.
pub fn sh_le(a: ShValue, b: ShValue) -> bool {
    a.rank() <= b.rank()
}

pub fn sh_tail(s: ShValue, n_max: usize) -> BTreeSet<usize> {
    (1..=n_max).filter(|&k| sh_le(ShValue::Nat(k), s)).collect()
}

/// Element of `ℕ_t`: a natural number or the symbol `t·2^∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BValue {
    Nat(usize),
    TInf,
}

impl fmt::Display for BValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BValue::Nat(n) => write!(f, "{n}"),
            BValue::TInf => f.write_str("inf"),
        }
    }
}

/// Conventions for case (iv) of the Baldwin ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaldwinOrder {
    pub t: usize,
    /// Let the coefficients in `k = i·m + j·t` be zero. Off by default.
    pub allow_zero: bool,
}

impl BaldwinOrder {
    pub fn new(t: usize) -> Result<Self, OrderError> {
        if t < 2 {
            return Err(OrderError::BadIndex(t));
        }
        Ok(BaldwinOrder { t, allow_zero: false })
    }

    pub fn in_domain(&self, k: BValue) -> bool {
        match k {
            BValue::TInf => true,
            BValue::Nat(n) => n == 1 || n >= self.t,
        }
    }

    /// Membership in `{mt} ∪ {1, t·2^∞}`.
    pub fn in_ntl(&self, k: BValue) -> bool {
        match k {
            BValue::TInf => true,
            BValue::Nat(n) => n == 1 || n % self.t == 0,
        }
    }

    pub fn le(&self, k: BValue, m: BValue) -> Result<bool, OrderError> {
        for v in [k, m] {
            if !self.in_domain(v) {
                let BValue::Nat(n) = v else { unreachable!("the symbol is always in the domain") };
                return Err(OrderError::NotInDomain(n, self.t));
            }
        }
        if k == BValue::Nat(1) || k == m {
            return Ok(true);
        }
        let (kl, ml) = (self.in_ntl(k), self.in_ntl(m));
        if kl && ml {
            if m == BValue::Nat(1) {
                return Ok(false);
            }
            let div = |v: BValue| match v {
                BValue::TInf => ShValue::TwoInf,
                BValue::Nat(n) => ShValue::Nat(n / self.t),
            };
            return Ok(sh_le(div(k), div(m)));
        }
        if kl {
            return Ok(true);
        }
        if ml {
            return Ok(false);
        }
        let (BValue::Nat(k), BValue::Nat(m)) = (k, m) else { unreachable!("the symbol lies in NTL") };
        let lo = usize::from(!self.allow_zero);
        Ok((lo..=k / m).any(|i| {
            let rest = k - i * m;
            rest % self.t == 0 && rest / self.t >= lo
        }))
    }
}

pub fn baldwin_le(t: usize, k: BValue, m: BValue) -> Result<bool, OrderError> {
    BaldwinOrder::new(t)?.le(k, m)
}

/// `{k ∈ [1..n_max] : k ≤_t m}`.
pub fn baldwin_tail(t: usize, m: BValue, n_max: usize) -> Result<BTreeSet<usize>, OrderError> {
    baldwin_tail_with(BaldwinOrder::new(t)?, m, n_max)
}

pub fn baldwin_tail_with(o: BaldwinOrder, m: BValue, n_max: usize) -> Result<BTreeSet<usize>, OrderError> {
    let mut out = BTreeSet::new();
    for k in (1..=n_max).map(BValue::Nat).filter(|&k| o.in_domain(k)) {
        if o.le(k, m)? {
            let BValue::Nat(k) = k else { unreachable!() };
            out.insert(k);
        }
    }
    Ok(out)
}

/// Whether `a` is downward closed for `≤_t` within the window.
pub fn is_tail(t: usize, a: &BTreeSet<usize>, n_max: usize) -> Result<bool, OrderError> {
    let o = BaldwinOrder::new(t)?;
    if a.is_empty() || a.iter().any(|&m| m > n_max || !o.in_domain(BValue::Nat(m))) {
        return Ok(false);
    }
    for &m in a {
        if !baldwin_tail_with(o, BValue::Nat(m), n_max)?.is_subset(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `a ∩ [1..n_max]` is, within the window, a union of tails of
/// orderings `≤_t` with `2 <= t <= t_max`.
pub fn is_union_of_tails(a: &BTreeSet<usize>, t_max: usize, n_max: usize) -> bool {
    let a: BTreeSet<usize> = a.iter().copied().filter(|&n| n <= n_max).collect();
    !a.is_empty()
        && a.iter().all(|&m| {
            (2..=t_max).any(|t| {
                let o = BaldwinOrder { t, allow_zero: false };
                o.in_domain(BValue::Nat(m))
                    && baldwin_tail_with(o, BValue::Nat(m), n_max).is_ok_and(|tail| tail.is_subset(&a))
            })
        })
}

/// `{n ∈ [1..n_max] : c < k/n < d for some integer k}`.
pub fn m_interval(c: &Q, d: &Q, n_max: usize) -> BTreeSet<usize> {
    (1..=n_max)
        .filter(|&n| {
            let nq = qi(n as i64);
            let k = (c * &nq).floor() + Q::from_integer(1.into());
            k < d * &nq
        })
        .collect()
}

/// A rotation number: rational, or an irrational one known only through a
/// rational stand-in used for comparisons in `M(c, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rho {
    Rational(Q),
    Irrational(Q),
}

impl Rho {
    fn value(&self) -> &Q {
        match self {
            Rho::Rational(x) | Rho::Irrational(x) => x,
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Rational(x) => f.write_str(&fmt_q(x)),
            Rho::Irrational(x) => write!(f, "irr~{}", fmt_q(x)),
        }
    }
}

/// `Λ(ρ, A) ∩ [1..n_max]`, where `a` must hold `A ∩ [1..n_max]`.
pub fn lambda_set(rho: &Rho, a: &BTreeSet<usize>, n_max: usize) -> BTreeSet<usize> {
    match rho {
        Rho::Irrational(_) => BTreeSet::new(),
        Rho::Rational(x) => {
            let den = x.denom().to_usize().expect("denominator fits in usize");
            a.iter().map(|k| k * den).filter(|&n| n <= n_max).collect()
        }
    }
}

/// One summand of a period set description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Finite(BTreeSet<usize>),
    /// `{n >= from}`.
    Cofinite(usize),
    /// `Λ(ρ, Shs(s))`.
    Lambda(Rho, ShValue),
    /// `M(c, d)`.
    MSet(Rho, Rho),
    /// `q · {k : k ≤_t top}`.
    ScaledTail { q: usize, t: usize, top: BValue },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSetExpr {
    pub terms: Vec<Term>,
}

impl Term {
    pub fn eval(&self, n_max: usize) -> Result<BTreeSet<usize>, OrderError> {
        Ok(match self {
            Term::Finite(s) => s.iter().copied().filter(|&n| n >= 1 && n <= n_max).collect(),
            Term::Cofinite(from) => ((*from).max(1)..=n_max).collect(),
            Term::Lambda(rho, s) => lambda_set(rho, &sh_tail(*s, n_max), n_max),
            Term::MSet(c, d) => m_interval(c.value(), d.value(), n_max),
            Term::ScaledTail { q, t, top } => {
                baldwin_tail(*t, *top, n_max)?.into_iter().map(|k| k * q).filter(|&n| n <= n_max).collect()
            }
        })
    }
}

impl PeriodSetExpr {
    pub fn eval(&self, n_max: usize) -> Result<BTreeSet<usize>, OrderError> {
        let mut out = BTreeSet::new();
        for t in &self.terms {
            out.extend(t.eval(n_max)?);
        }
        Ok(out)
    }
}

/// `Λ(c, Shs(s_c)) ∪ M(c, d) ∪ Λ(d, Shs(s_d))`.
pub fn misiurewicz_expr(c: Rho, d: Rho, s_c: ShValue, s_d: ShValue) -> PeriodSetExpr {
    PeriodSetExpr {
        terms: vec![Term::Lambda(c.clone(), s_c), Term::MSet(c, d.clone()), Term::Lambda(d, s_d)],
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Finite(s) => {
                let v: Vec<String> = s.iter().map(|n| n.to_string()).collect();
                write!(f, "F{{{}}}", v.join(","))
            }
            Term::Cofinite(n) => write!(f, "C({n})"),
            Term::Lambda(rho, s) => write!(f, "L({rho}; sh({s}))"),
            Term::MSet(c, d) => write!(f, "M({c},{d})"),
            Term::ScaledTail { q: 1, t, top } => write!(f, "T({t},{top})"),
            Term::ScaledTail { q, t, top } => write!(f, "{q}*T({t},{top})"),
        }
    }
}

impl fmt::Display for PeriodSetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        f.write_str(&v.join(" + "))
    }
}

fn parse_rho(s: &str) -> Result<Rho, OrderError> {
    let s = s.trim();
    let err = || OrderError::Syntax(s.to_string());
    if let Some(rest) = s.strip_prefix("irr~") {
        return parse_q(rest).map(Rho::Irrational).ok_or_else(err);
    }
    parse_q(s).map(Rho::Rational).ok_or_else(err)
}

fn inner<'a>(s: &'a str, open: &str, close: char) -> Option<&'a str> {
    s.strip_prefix(open)?.strip_suffix(close)
}

fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for Term {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, OrderError> {
        let s = s.trim();
        let err = || OrderError::Syntax(s.to_string());
        if let Some(body) = inner(s, "F{", '}') {
            let set = body
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            return Ok(Term::Finite(set));
        }
        if let Some(body) = inner(s, "C(", ')') {
            return body.trim().parse().map(Term::Cofinite).map_err(|_| err());
        }
        if let Some(body) = inner(s, "L(", ')') {
            let (rho, tail) = body.split_once(';').ok_or_else(err)?;
            let sv = inner(tail.trim(), "sh(", ')').ok_or_else(err)?;
            return Ok(Term::Lambda(parse_rho(rho)?, sv.parse()?));
        }
        if let Some(body) = inner(s, "M(", ')') {
            let (c, d) = body.split_once(',').ok_or_else(err)?;
            return Ok(Term::MSet(parse_rho(c)?, parse_rho(d)?));
        }
        let (q, rest) = match s.split_once('*') {
            Some((q, rest)) => (q.trim().parse::<usize>().map_err(|_| err())?, rest.trim()),
            None => (1, s),
        };
        if let Some(body) = inner(rest, "T(", ')') {
            let (t, m) = body.split_once(',').ok_or_else(err)?;
            let t: usize = t.trim().parse().map_err(|_| err())?;
            let top = match m.trim() {
                "inf" => BValue::TInf,
                v => BValue::Nat(v.parse().map_err(|_| err())?),
            };
            return Ok(Term::ScaledTail { q, t, top });
        }
        Err(err())
    }
}

impl FromStr for PeriodSetExpr {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, OrderError> {
        let terms = split_top(s).into_iter().map(str::parse).collect::<Result<_, _>>()?;
        Ok(PeriodSetExpr { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::q;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn sharkovsky_comparisons() {
        use ShValue::*;
        assert!(sh_le(Nat(5), Nat(3)));
        assert!(!sh_le(Nat(3), Nat(5)));
        for k in 0..10 {
            assert!(sh_le(Nat(1 << k), TwoInf));
        }
        for x in 1..50 {
            assert!(sh_le(Nat(1), Nat(x)));
        }
        assert!(sh_le(TwoInf, Nat(12)));
        assert!(sh_le(Nat(10), Nat(6)));
        assert!(sh_le(Nat(12), Nat(7)));
    }

    #[test]
    fn sharkovsky_tails() {
        assert_eq!(sh_tail(ShValue::Nat(3), 6), set(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(sh_tail(ShValue::TwoInf, 10), set(&[1, 2, 4, 8]));
        assert_eq!(sh_tail(ShValue::Nat(6), 10), set(&[1, 2, 4, 6, 8, 10]));
        assert_eq!(sh_tail(ShValue::Nat(5), 10), set(&[1, 2, 4, 5, 6, 7, 8, 9, 10]));
    }

    #[test]
    fn baldwin_cases() {
        use BValue::Nat;
        assert_eq!(baldwin_le(3, Nat(7), Nat(4)), Ok(true));
        assert_eq!(baldwin_le(3, Nat(6), Nat(4)), Ok(true));
        assert_eq!(baldwin_le(3, Nat(8), Nat(4)), Ok(false));
        assert_eq!(baldwin_le(3, Nat(2), Nat(4)), Err(OrderError::NotInDomain(2, 3)));
        let zero_ok = BaldwinOrder { t: 3, allow_zero: true };
        assert_eq!(zero_ok.le(Nat(8), Nat(4)), Ok(true));
        assert_eq!(baldwin_le(3, BValue::TInf, Nat(9)), Ok(true));
        assert_eq!(baldwin_le(3, Nat(9), BValue::TInf), Ok(false));
    }

    #[test]
    fn baldwin_two_is_sharkovsky() {
        for k in 1..=40 {
            for m in 1..=40 {
                assert_eq!(baldwin_le(2, BValue::Nat(k), BValue::Nat(m)), Ok(sh_le(ShValue::Nat(k), ShValue::Nat(m))), "{k} {m}");
            }
        }
    }

    #[test]
    fn tails() {
        assert_eq!(baldwin_tail(2, BValue::Nat(6), 10).unwrap(), set(&[1, 2, 4, 6, 8, 10]));
        for t in 2..6 {
            assert!(is_tail(t, &set(&[1]), 20).unwrap());
        }
        assert!(is_tail(3, &set(&[1, 3, 6, 12]), 20).unwrap());
        assert!(!is_tail(3, &set(&[1, 4]), 20).unwrap());
        assert!(is_union_of_tails(&set(&[1, 2, 4]), 3, 20));
        assert!(!is_union_of_tails(&set(&[2, 4]), 3, 20));
    }

    #[test]
    fn m_and_lambda() {
        assert!(m_interval(&q(1, 3), &q(1, 3), 30).is_empty());
        assert_eq!(m_interval(&q(0, 1), &q(1, 2), 10), (3..=10).collect());
        assert_eq!(m_interval(&q(-1, 3), &q(1, 3), 6), (1..=6).collect());
        let r = Rho::Rational(q(1, 2));
        assert_eq!(lambda_set(&r, &set(&[1, 2, 3]), 10), set(&[2, 4, 6]));
        assert_eq!(lambda_set(&Rho::Rational(q(2, 4)), &set(&[1]), 10), set(&[2]));
        assert!(lambda_set(&Rho::Irrational(q(1, 3)), &set(&[1, 2]), 10).is_empty());
    }

    #[test]
    fn misiurewicz_values() {
        let z = || Rho::Rational(q(0, 1));
        let e = misiurewicz_expr(z(), z(), ShValue::Nat(3), ShValue::Nat(3));
        assert_eq!(e.eval(20).unwrap(), (1..=20).collect());
        let e = misiurewicz_expr(z(), Rho::Rational(q(1, 2)), ShValue::Nat(1), ShValue::Nat(1));
        assert_eq!(e.eval(20).unwrap(), (1..=20).collect());
        let e = misiurewicz_expr(Rho::Irrational(q(1, 5)), Rho::Rational(q(1, 2)), ShValue::Nat(3), ShValue::Nat(1));
        assert_eq!(e.terms[0].eval(20).unwrap(), BTreeSet::new());
    }

    #[test]
    fn expression_round_trip() {
        let text = "L(1/2; sh(2^inf)) + M(0,1/2) + F{1,3} + C(7) + T(3,4) + 2*T(3,inf) + M(irr~1/5,1)";
        let e: PeriodSetExpr = text.parse().unwrap();
        assert_eq!(e.to_string(), text);
        assert_eq!(e.to_string().parse::<PeriodSetExpr>().unwrap(), e);
        assert!("Q(1)".parse::<PeriodSetExpr>().is_err());
    }
}
