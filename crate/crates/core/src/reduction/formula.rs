use crate::error::ParseError;
use crate::graph::parse_num;

/// Largest formula `nae_satisfiable` will brute-force.
pub const MAX_BRUTE_FORCE_VARIABLES: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("clause {clause} uses variable {var} but the formula has {count} variables")]
    VariableOutOfRange { clause: usize, var: usize, count: usize },
    #[error("{0} variables exceed the brute-force cap of {MAX_BRUTE_FORCE_VARIABLES}")]
    TooManyVariables(usize),
}

/// A conjunction of monotone 3-clauses over variables `0..variable_count`.
/// Repeated variables inside a clause are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula3MCNF {
    variable_count: usize,
    clauses: Vec<[usize; 3]>,
}

impl Formula3MCNF {
    pub fn new(variable_count: usize, clauses: Vec<[usize; 3]>) -> Result<Self, FormulaError> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(&var) = c.iter().find(|&&x| x >= variable_count) {
                return Err(FormulaError::VariableOutOfRange {
                    clause: i,
                    var,
                    count: variable_count,
                });
            }
        }
        Ok(Formula3MCNF {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// How many clause slots each variable fills.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.variable_count];
        for c in &self.clauses {
            for &x in c {
                occ[x] += 1;
            }
        }
        occ
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn negated(&self) -> Assignment {
        Assignment(self.0.iter().map(|b| !b).collect())
    }
}

/// True iff the clause's three values are not all equal.
pub fn nae_eval(clause: &[usize; 3], a: &Assignment) -> bool {
    let v = clause.map(|x| a.0[x]);
    !(v[0] == v[1] && v[1] == v[2])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NaeOutcome {
    Satisfiable(Assignment),
    Unsatisfiable,
}

impl NaeOutcome {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, NaeOutcome::Satisfiable(_))
    }
}

/// Brute force over assignments with variable 0 false. Complementing a
/// solution gives another one, so nothing is lost.
pub fn nae_satisfiable(f: &Formula3MCNF) -> Result<NaeOutcome, FormulaError> {
    let n = f.variable_count;
    if n > MAX_BRUTE_FORCE_VARIABLES {
        return Err(FormulaError::TooManyVariables(n));
    }
    if n == 0 {
        return Ok(NaeOutcome::Satisfiable(Assignment(vec![])));
    }
    for mask in 0u32..(1u32 << (n - 1)) {
        let a = Assignment((0..n).map(|i| i > 0 && mask >> (i - 1) & 1 == 1).collect());
        if f.clauses.iter().all(|c| nae_eval(c, &a)) {
            return Ok(NaeOutcome::Satisfiable(a));
        }
    }
    Ok(NaeOutcome::Unsatisfiable)
}

/// Header `p mcnf <n> <m>`, then `m` clauses of three positive 1-based
/// indices each terminated by `0`. Lines starting with `c` are comments.
pub fn parse_mcnf(text: &str) -> Result<Formula3MCNF, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() {
                return Err(ParseError::at(line_no, "duplicate header"));
            }
            if fields.len() != 4 || fields[1] != "mcnf" {
                return Err(ParseError::at(line_no, "expected `p mcnf <n> <m>`"));
            }
            header = Some((parse_num(fields[2], line_no)?, parse_num(fields[3], line_no)?));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(ParseError::at(line_no, "clause before header"));
        };
        if fields.len() != 4 || fields[3] != "0" {
            return Err(ParseError::at(
                line_no,
                "expected three variable indices followed by 0",
            ));
        }
        let mut c = [0usize; 3];
        for (slot, f) in c.iter_mut().zip(&fields[..3]) {
            let x = parse_num(f, line_no)?;
            if x == 0 || x > n {
                return Err(ParseError::at(
                    line_no,
                    format!("variable index {x} outside 1..={n}"),
                ));
            }
            *slot = x - 1;
        }
        clauses.push(c);
    }
    let Some((n, m)) = header else {
        return Err(ParseError::at(0, "missing `p mcnf` header"));
    };
    if clauses.len() != m {
        return Err(ParseError::at(
            0,
            format!("header announces {m} clauses, found {}", clauses.len()),
        ));
    }
    Formula3MCNF::new(n, clauses).map_err(|e| ParseError::at(0, e.to_string()))
}

pub fn format_mcnf(f: &Formula3MCNF) -> String {
    let mut s = format!("p mcnf {} {}\n", f.variable_count, f.clauses.len());
    for c in &f.clauses {
        s.push_str(&format!("{} {} {} 0\n", c[0] + 1, c[1] + 1, c[2] + 1));
    }
    s
}
