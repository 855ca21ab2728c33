//! Boolean formulas over variables `x0..x{n-1}`: parsing, evaluation,
//! truth-table enumeration, minterm/DNF planting, and seeded random
//! generation.
//!
//! Conventions:
//! - Variable `x_j` reads the j-th least-significant bit of the assignment
//!   value. Rendered as an n-character string, the leftmost character is
//!   `x_{n-1}`.
//! - A truth table lists the formula output for assignment values
//!   `0..2^n - 1`, index 0 first.

mod parse;

pub use parse::{parse_formula, ParseError};

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::BitString;

/// Exhaustive truth-table enumeration is capped at this variable count
/// (a 16 Mi-bit table); larger spaces must be sampled instead.
pub const TRUTH_TABLE_MAX_VARS: usize = 24;

/// Assignments index variables with bits of a `u64`.
pub const MAX_VARS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable count must be between 1 and {MAX_VARS}, got {0}")]
    InvalidVarCount(usize),
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarIndexOutOfRange { index: usize, num_vars: usize },
    #[error("assignment value {value} out of range for {num_vars} variables")]
    AssignmentOutOfRange { value: u64, num_vars: usize },
    #[error("assignment is over {assignment_vars} variables but formula has {formula_vars}")]
    MismatchedVars {
        assignment_vars: usize,
        formula_vars: usize,
    },
    #[error("truth table over {0} variables exceeds the exhaustive cap of {TRUTH_TABLE_MAX_VARS}")]
    TruthTableOverCap(usize),
    #[error("target set is empty: a disjunction needs at least one minterm")]
    EmptyTargets,
    #[error("size budget must be at least 1")]
    ZeroSizeBudget,
}

/// Expression node of a Boolean formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    pub fn not(child: Expr) -> Expr {
        Expr::Not(Box::new(child))
    }

    pub fn and(left: Expr, right: Expr) -> Expr {
        Expr::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Expr, right: Expr) -> Expr {
        Expr::Or(Box::new(left), Box::new(right))
    }

    /// Total node count.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Not(c) => 1 + c.size(),
            Expr::And(l, r) | Expr::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Not(c) => c.max_var_index(),
            Expr::And(l, r) | Expr::Or(l, r) => l.max_var_index().max(r.max_var_index()),
        }
    }
}

/// A Boolean formula together with its declared variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    root: Expr,
    num_vars: usize,
    size: usize,
}

impl Formula {
    /// Wraps an expression; every variable index must be below `num_vars`.
    pub fn new(root: Expr, num_vars: usize) -> Result<Formula, FormulaError> {
        if num_vars == 0 || num_vars > MAX_VARS {
            return Err(FormulaError::InvalidVarCount(num_vars));
        }
        if let Some(index) = root.max_var_index() {
            if index >= num_vars {
                return Err(FormulaError::VarIndexOutOfRange { index, num_vars });
            }
        }
        let size = root.size();
        Ok(Formula {
            root,
            num_vars,
            size,
        })
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Node count of the expression tree.
    pub fn size(&self) -> usize {
        self.size
    }
}

/// One row index of a truth table: `x_j` is bit `j` of `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    value: u64,
    num_vars: usize,
}

impl Assignment {
    pub fn new(value: u64, num_vars: usize) -> Result<Assignment, FormulaError> {
        if num_vars == 0 || num_vars > MAX_VARS {
            return Err(FormulaError::InvalidVarCount(num_vars));
        }
        if value >> num_vars != 0 {
            return Err(FormulaError::AssignmentOutOfRange { value, num_vars });
        }
        Ok(Assignment { value, num_vars })
    }

    /// Parses an n-character '0'/'1' string with `x_{n-1}` leftmost.
    pub fn from_bit_string(s: &str) -> Result<Assignment, FormulaError> {
        let num_vars = s.len();
        if num_vars == 0 || num_vars > MAX_VARS {
            return Err(FormulaError::InvalidVarCount(num_vars));
        }
        let mut value = 0u64;
        for ch in s.chars() {
            value = (value << 1)
                | match ch {
                    '1' => 1,
                    '0' => 0,
                    _ => {
                        return Err(FormulaError::AssignmentOutOfRange {
                            value: u64::MAX,
                            num_vars,
                        })
                    }
                };
        }
        Ok(Assignment { value, num_vars })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn bit(&self, var_index: usize) -> bool {
        (self.value >> var_index) & 1 == 1
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..self.num_vars).rev() {
            f.write_str(if self.bit(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The full output string of a formula over all `2^n` assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    bits: BitString,
    num_vars: usize,
}

impl TruthTable {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Output bit for assignment value `i`.
    pub fn get(&self, i: u64) -> bool {
        self.bits.get(i as usize)
    }

    /// Number of satisfying assignments, the table's `k`.
    pub fn ones_count(&self) -> u64 {
        self.bits.count_ones()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

/// Evaluates `f` on one assignment.
pub fn eval(f: &Formula, a: &Assignment) -> Result<bool, FormulaError> {
    if a.num_vars != f.num_vars {
        return Err(FormulaError::MismatchedVars {
            assignment_vars: a.num_vars,
            formula_vars: f.num_vars,
        });
    }
    Ok(eval_expr(&f.root, a.value))
}

fn eval_expr(e: &Expr, value: u64) -> bool {
    match e {
        Expr::Var(j) => (value >> j) & 1 == 1,
        Expr::Not(c) => !eval_expr(c, value),
        Expr::And(l, r) => eval_expr(l, value) && eval_expr(r, value),
        Expr::Or(l, r) => eval_expr(l, value) || eval_expr(r, value),
    }
}

/// Evaluates `f` on every assignment value in order.
pub fn truth_table(f: &Formula) -> Result<TruthTable, FormulaError> {
    if f.num_vars > TRUTH_TABLE_MAX_VARS {
        return Err(FormulaError::TruthTableOverCap(f.num_vars));
    }
    let rows = 1u64 << f.num_vars;
    let bits = BitString::from_fn(rows as usize, |i| eval_expr(&f.root, i as u64));
    Ok(TruthTable {
        bits,
        num_vars: f.num_vars,
    })
}

/// Conjunction of n literals that is true exactly on `a`.
///
/// Literals run from `x_{n-1}` down to `x_0`, left-associated, negated
/// where the assignment bit is 0.
pub fn minterm(a: &Assignment) -> Formula {
    let literal = |j: usize| {
        if a.bit(j) {
            Expr::var(j)
        } else {
            Expr::not(Expr::var(j))
        }
    };
    let mut expr = literal(a.num_vars - 1);
    for j in (0..a.num_vars - 1).rev() {
        expr = Expr::and(expr, literal(j));
    }
    Formula::new(expr, a.num_vars).expect("minterm literals are in range")
}

/// Disjunction of the minterms of `targets`: true exactly on the targets.
///
/// Targets are deduplicated and ORed in ascending order, left-associated.
/// The node count is at most `3kn` for k targets.
pub fn plant_dnf(targets: &[u64], num_vars: usize) -> Result<Formula, FormulaError> {
    if num_vars == 0 || num_vars > MAX_VARS {
        return Err(FormulaError::InvalidVarCount(num_vars));
    }
    let unique: BTreeSet<u64> = targets.iter().copied().collect();
    if unique.is_empty() {
        return Err(FormulaError::EmptyTargets);
    }
    let mut expr: Option<Expr> = None;
    for &value in &unique {
        let a = Assignment::new(value, num_vars)?;
        let term = minterm(&a).root;
        expr = Some(match expr {
            None => term,
            Some(acc) => Expr::or(acc, term),
        });
    }
    Formula::new(expr.expect("non-empty target set"), num_vars)
}

/// Conjoins `f` with a tautology over the same variables, keeping the
/// truth table identical while strictly growing the formula.
pub fn obfuscate_and_true(f: &Formula) -> Formula {
    let clause = |j: usize| Expr::or(Expr::var(j), Expr::not(Expr::var(j)));
    let mut taut = clause(f.num_vars - 1);
    for j in (0..f.num_vars - 1).rev() {
        taut = Expr::and(taut, clause(j));
    }
    Formula::new(Expr::and(f.root.clone(), taut), f.num_vars)
        .expect("conjunction preserves variable range")
}

/// Seeded random formula with exactly `size_budget` nodes.
///
/// Node kinds: a budget of 1 forces a variable leaf and a budget of 2
/// forces a negation; otherwise NOT/AND/OR are drawn with weights
/// 0.2/0.4/0.4 and the remaining budget of a binary node is split
/// uniformly between its children.
pub fn random_formula(
    num_vars: usize,
    size_budget: usize,
    seed: u64,
) -> Result<Formula, FormulaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_formula_with(&mut rng, num_vars, size_budget)
}

/// As [`random_formula`], drawing from a caller-supplied stream.
pub fn random_formula_with<R: Rng>(
    rng: &mut R,
    num_vars: usize,
    size_budget: usize,
) -> Result<Formula, FormulaError> {
    if num_vars == 0 || num_vars > MAX_VARS {
        return Err(FormulaError::InvalidVarCount(num_vars));
    }
    if size_budget == 0 {
        return Err(FormulaError::ZeroSizeBudget);
    }
    let root = random_expr(rng, num_vars, size_budget);
    Formula::new(root, num_vars)
}

fn random_expr<R: Rng>(rng: &mut R, num_vars: usize, budget: usize) -> Expr {
    match budget {
        1 => Expr::var(rng.random_range(0..num_vars)),
        2 => Expr::not(random_expr(rng, num_vars, 1)),
        _ => match rng.random_range(0..10u32) {
            0 | 1 => Expr::not(random_expr(rng, num_vars, budget - 1)),
            kind => {
                let remaining = budget - 1;
                let left = rng.random_range(1..remaining);
                let l = random_expr(rng, num_vars, left);
                let r = random_expr(rng, num_vars, remaining - left);
                if kind < 6 {
                    Expr::and(l, r)
                } else {
                    Expr::or(l, r)
                }
            }
        },
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(&self.root, 0, f)
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Or(..) => 0,
        Expr::And(..) => 1,
        Expr::Not(..) => 2,
        Expr::Var(_) => 3,
    }
}

/// Renders with the fewest parentheses that reparse to the same tree:
/// right operands at equal precedence keep parentheses so associativity
/// survives the round trip.
fn render(e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = precedence(e);
    let parens = prec < min_prec;
    if parens {
        f.write_str("(")?;
    }
    match e {
        Expr::Var(j) => write!(f, "x{j}")?,
        Expr::Not(c) => {
            f.write_str("!")?;
            render(c, 2, f)?;
        }
        Expr::And(l, r) => {
            render(l, 1, f)?;
            f.write_str(" & ")?;
            render(r, 2, f)?;
        }
        Expr::Or(l, r) => {
            render(l, 0, f)?;
            f.write_str(" | ")?;
            render(r, 1, f)?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}
