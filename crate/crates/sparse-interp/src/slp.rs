//! Straight-line programs: the black-box representation of the polynomial
//! being interpolated.
//!
//! A program is a branch-free list of const/add/sub/mul instructions over
//! N inputs; the last instruction is the output. The probe engine replays
//! a program in R[z]/(z^l - 1) with each input bound to a power of z,
//! which yields the image f mod (z^l - 1) -- a "probe of degree l". The
//! engine tracks sparse intermediate values and falls back to dense
//! vectors, staying bit-identical to a plain dense replay.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::ledger::ProbeLedger;
use crate::ring::{CyclicPoly, RingElem, RingSpec};
use crate::sparse::SparsePoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    fn name(self) -> &'static str {
        match self {
            BinOp::Add => "add",
            BinOp::Sub => "sub",
            BinOp::Mul => "mul",
        }
    }
}

/// Reference to an input or to an earlier instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    Input(usize),
    Instr(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    Const(RingElem),
    Bin { op: BinOp, lhs: Operand, rhs: Operand },
}

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlpError {
    /// The operation needs a single-input program.
    NotUnivariate { num_inputs: usize },
}

impl fmt::Display for SlpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlpError::NotUnivariate { num_inputs } => {
                write!(f, "operation requires a univariate program, got {num_inputs} inputs")
            }
        }
    }
}

impl std::error::Error for SlpError {}

/// A validated straight-line program over a fixed base ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    ring: RingSpec,
    num_inputs: usize,
    instructions: Vec<Instruction>,
}

impl Slp {
    /// Validates operand references: instructions may only refer to inputs
    /// below `num_inputs` and to strictly earlier instructions.
    pub fn new(
        ring: RingSpec,
        num_inputs: usize,
        instructions: Vec<Instruction>,
    ) -> Result<Self, String> {
        if num_inputs < 1 {
            return Err("a program needs at least one input".into());
        }
        if instructions.is_empty() {
            return Err("a program needs at least one instruction".into());
        }
        for (i, instr) in instructions.iter().enumerate() {
            if let Instruction::Bin { lhs, rhs, .. } = instr {
                for operand in [lhs, rhs] {
                    match operand {
                        Operand::Input(j) if *j >= num_inputs => {
                            return Err(format!("instruction {i} reads input {j} of {num_inputs}"));
                        }
                        Operand::Instr(k) if *k >= i => {
                            return Err(format!("instruction {i} reads instruction {k}"));
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(Slp { ring, num_inputs, instructions })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // validated programs have at least one instruction
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    // ------------------------------------------------------------------
    // Text format
    // ------------------------------------------------------------------

    /// Serialize to the `.slp` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("slp 1\n");
        out.push_str(&format!("inputs {}\n", self.num_inputs));
        match self.ring {
            RingSpec::PrimeField { modulus } => out.push_str(&format!("ring zmod {modulus}\n")),
            RingSpec::Integers => out.push_str("ring int\n"),
        }
        for (i, instr) in self.instructions.iter().enumerate() {
            match instr {
                Instruction::Const(c) => out.push_str(&format!("c{i} = const {c}\n")),
                Instruction::Bin { op, lhs, rhs } => {
                    out.push_str(&format!(
                        "c{i} = {} {} {}\n",
                        op.name(),
                        operand_text(lhs),
                        operand_text(rhs)
                    ));
                }
            }
        }
        out
    }

    /// Parse the `.slp` text format.
    ///
    /// Grammar: an optional `slp 1` header, `inputs <N>`, an optional
    /// `ring zmod <q>` or `ring int` line (default `ring int`), then one
    /// instruction per line: `c<i> = const <int>` or
    /// `c<i> = <add|sub|mul> <ref> <ref>` where a `<ref>` is `in<j>` or an
    /// earlier `c<k>`. Instruction indices are dense from 0 and the last
    /// instruction is the output.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .peekable();

        let err = |line: usize, col: usize, message: String| ParseError { line, col, message };

        // Optional header.
        if let Some((_, l)) = lines.peek() {
            let toks = tokens(l);
            if toks.first().map(|t| t.1) == Some("slp") {
                let (lineno, l) = lines.next().unwrap();
                let toks = tokens(l);
                if toks.len() != 2 || toks[1].1 != "1" {
                    return Err(err(lineno, 1, "header must be exactly `slp 1`".into()));
                }
            }
        }

        // inputs <N>
        let (lineno, l) = lines
            .next()
            .ok_or_else(|| err(1, 1, "missing `inputs <N>` line".into()))?;
        let toks = tokens(l);
        if toks.is_empty() || toks[0].1 != "inputs" {
            return Err(err(lineno, 1, "expected `inputs <N>`".into()));
        }
        if toks.len() != 2 {
            return Err(err(lineno, 1, "expected `inputs <N>`".into()));
        }
        let num_inputs: usize = toks[1]
            .1
            .parse()
            .map_err(|_| err(lineno, toks[1].0, format!("`{}` is not an input count", toks[1].1)))?;
        if num_inputs < 1 {
            return Err(err(lineno, toks[1].0, "a program needs at least one input".into()));
        }

        // Optional ring line.
        let mut ring = RingSpec::Integers;
        if let Some((_, l)) = lines.peek() {
            if tokens(l).first().map(|t| t.1) == Some("ring") {
                let (lineno, l) = lines.next().unwrap();
                let toks = tokens(l);
                ring = match toks.get(1).map(|t| t.1) {
                    Some("int") if toks.len() == 2 => RingSpec::Integers,
                    Some("zmod") if toks.len() == 3 => {
                        let q: u64 = toks[2].1.parse().map_err(|_| {
                            err(lineno, toks[2].0, format!("`{}` is not a modulus", toks[2].1))
                        })?;
                        RingSpec::prime_field(q)
                            .map_err(|e| err(lineno, toks[2].0, e.to_string()))?
                    }
                    _ => {
                        return Err(err(
                            lineno,
                            1,
                            "expected `ring zmod <q>` or `ring int`".into(),
                        ))
                    }
                };
            }
        }

        // Instructions.
        let mut instructions: Vec<Instruction> = Vec::new();
        for (lineno, l) in lines {
            let toks = tokens(l);
            if toks.len() < 4 || toks[1].1 != "=" {
                return Err(err(lineno, 1, "expected `c<i> = <op> ...`".into()));
            }
            let (col0, name) = toks[0];
            let index: usize = name
                .strip_prefix('c')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(lineno, col0, format!("`{name}` is not an instruction name")))?;
            if index != instructions.len() {
                return Err(err(
                    lineno,
                    col0,
                    format!("expected c{} here, found c{index}", instructions.len()),
                ));
            }
            let (op_col, op_name) = toks[2];
            let instr = match op_name {
                "const" => {
                    if toks.len() != 4 {
                        return Err(err(lineno, op_col, "const takes one value".into()));
                    }
                    let value = ring
                        .parse_elem(toks[3].1)
                        .map_err(|e| err(lineno, toks[3].0, e))?;
                    Instruction::Const(value)
                }
                "add" | "sub" | "mul" => {
                    if toks.len() != 5 {
                        return Err(err(lineno, op_col, format!("{op_name} takes two operands")));
                    }
                    let op = match op_name {
                        "add" => BinOp::Add,
                        "sub" => BinOp::Sub,
                        _ => BinOp::Mul,
                    };
                    let lhs = parse_operand(toks[3], num_inputs, instructions.len())
                        .map_err(|(c, m)| err(lineno, c, m))?;
                    let rhs = parse_operand(toks[4], num_inputs, instructions.len())
                        .map_err(|(c, m)| err(lineno, c, m))?;
                    Instruction::Bin { op, lhs, rhs }
                }
                other => {
                    return Err(err(lineno, op_col, format!("unknown operation `{other}`")));
                }
            };
            instructions.push(instr);
        }
        if instructions.is_empty() {
            return Err(ParseError {
                line: 1,
                col: 1,
                message: "program has no instructions".into(),
            });
        }
        Slp::new(ring, num_inputs, instructions).map_err(|m| ParseError {
            line: 1,
            col: 1,
            message: m,
        })
    }

    // ------------------------------------------------------------------
    // Probing
    // ------------------------------------------------------------------

    /// One probe of degree `order`: replay the program in
    /// R[z]/(z^order - 1) with input j bound to z^(input_exponents[j]).
    /// Records the degree in the ledger.
    pub fn probe(
        &self,
        order: u64,
        input_exponents: &[BigUint],
        ledger: &ProbeLedger,
    ) -> CyclicPoly {
        let terms = self.probe_terms(order, input_exponents, ledger);
        let mut coeffs = vec![self.ring.zero(); order as usize];
        for (k, c) in terms {
            coeffs[k as usize] = c;
        }
        CyclicPoly::from_coeffs(self.ring, coeffs)
    }

    /// Like [`Slp::probe`] but returns only the nonzero image terms
    /// (position, coefficient), ascending.
    pub fn probe_terms(
        &self,
        order: u64,
        input_exponents: &[BigUint],
        ledger: &ProbeLedger,
    ) -> Vec<(u64, RingElem)> {
        assert!(order >= 1, "probe degree must be at least 1");
        assert_eq!(
            input_exponents.len(),
            self.num_inputs,
            "program takes {} inputs",
            self.num_inputs
        );
        ledger.record(order);
        let big_order = BigUint::from(order);
        let inputs: Vec<ProbeValue> = input_exponents
            .iter()
            .map(|e| {
                let k = (e % &big_order).to_u64().expect("residue fits u64");
                ProbeValue::Sparse(vec![(k, self.ring.one())])
            })
            .collect();

        let mut values: Vec<ProbeValue> = Vec::with_capacity(self.instructions.len());
        for instr in &self.instructions {
            let value = match instr {
                Instruction::Const(c) => {
                    if c.is_zero() {
                        ProbeValue::Sparse(Vec::new())
                    } else {
                        ProbeValue::Sparse(vec![(0, c.clone())])
                    }
                }
                Instruction::Bin { op, lhs, rhs } => {
                    let a = resolve(lhs, &inputs, &values);
                    let b = resolve(rhs, &inputs, &values);
                    match op {
                        BinOp::Add => probe_add(self.ring, order, a, b, false),
                        BinOp::Sub => probe_add(self.ring, order, a, b, true),
                        BinOp::Mul => probe_mul(self.ring, order, a, b),
                    }
                }
            };
            values.push(value);
        }
        match values.pop().expect("validated programs are nonempty") {
            ProbeValue::Sparse(terms) => terms,
            ProbeValue::Dense(poly) => poly
                .terms()
                .map(|(k, c)| (k, c.clone()))
                .collect(),
        }
    }

    /// Image of f - approximation modulo z^order - 1, where f is this program's
    /// polynomial: probe, then subtract the reduced explicit approximation.
    pub fn probe_diff(
        &self,
        approximation: &SparsePoly,
        order: u64,
        input_exponents: &[BigUint],
        ledger: &ProbeLedger,
    ) -> CyclicPoly {
        let image = self.probe(order, input_exponents, ledger);
        image.cyclic_sub(&approximation.reduce_mod_cyclic(order))
    }

    /// Term-level variant of [`Slp::probe_diff`].
    pub fn probe_diff_terms(
        &self,
        approximation: &SparsePoly,
        order: u64,
        input_exponents: &[BigUint],
        ledger: &ProbeLedger,
    ) -> Vec<(u64, RingElem)> {
        let probe = self.probe_terms(order, input_exponents, ledger);
        let mut acc: HashMap<u64, RingElem> = probe.into_iter().collect();
        let big_order = BigUint::from(order);
        for (e, c) in approximation.terms() {
            let k = (e % &big_order).to_u64().unwrap();
            let entry = acc.entry(k).or_insert_with(|| self.ring.zero());
            *entry = self.ring.sub(entry, c);
        }
        let mut terms: Vec<(u64, RingElem)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|&(k, _)| k);
        terms
    }

    /// Classical-model evaluation: replay the program in the base ring at
    /// each point. Univariate programs only.
    pub fn eval_points(&self, points: &[RingElem]) -> Result<Vec<RingElem>, SlpError> {
        if self.num_inputs != 1 {
            return Err(SlpError::NotUnivariate { num_inputs: self.num_inputs });
        }
        let mut results = Vec::with_capacity(points.len());
        for point in points {
            let mut values: Vec<RingElem> = Vec::with_capacity(self.instructions.len());
            for instr in &self.instructions {
                let v = match instr {
                    Instruction::Const(c) => c.clone(),
                    Instruction::Bin { op, lhs, rhs } => {
                        let a = match lhs {
                            Operand::Input(_) => point,
                            Operand::Instr(k) => &values[*k],
                        };
                        let b = match rhs {
                            Operand::Input(_) => point,
                            Operand::Instr(k) => &values[*k],
                        };
                        match op {
                            BinOp::Add => self.ring.add(a, b),
                            BinOp::Sub => self.ring.sub(a, b),
                            BinOp::Mul => self.ring.mul(a, b),
                        }
                    }
                };
                values.push(v);
            }
            results.push(values.pop().unwrap());
        }
        Ok(results)
    }

    // ------------------------------------------------------------------
    // Instance generators
    // ------------------------------------------------------------------

    /// Program computing exactly `f`, built by square-and-multiply over the
    /// exponent bits with a shared squaring chain. Length O(t log d).
    pub fn from_sparse(f: &SparsePoly) -> Slp {
        let terms: Vec<(Vec<BigUint>, RingElem)> = f
            .terms()
            .iter()
            .map(|(e, c)| (vec![e.clone()], c.clone()))
            .collect();
        Slp::from_sparse_multivariate(f.ring(), 1, &terms)
    }

    /// Multivariate generator: one shared squaring chain per variable.
    pub fn from_sparse_multivariate(
        ring: RingSpec,
        num_vars: usize,
        terms: &[(Vec<BigUint>, RingElem)],
    ) -> Slp {
        assert!(num_vars >= 1);
        let mut instructions: Vec<Instruction> = Vec::new();
        if terms.is_empty() {
            instructions.push(Instruction::Const(ring.zero()));
            return Slp::new(ring, num_vars, instructions).unwrap();
        }

        // chains[v][b] computes variable v raised to the power 2^b.
        let mut chains: Vec<Vec<Operand>> = Vec::with_capacity(num_vars);
        for v in 0..num_vars {
            let bits = terms
                .iter()
                .map(|(es, _)| es[v].bits())
                .max()
                .unwrap_or(0) as usize;
            let mut chain = vec![Operand::Input(v)];
            for b in 1..bits {
                let prev = chain[b - 1];
                instructions.push(Instruction::Bin { op: BinOp::Mul, lhs: prev, rhs: prev });
                chain.push(Operand::Instr(instructions.len() - 1));
            }
            chains.push(chain);
        }

        let mut term_outputs: Vec<Operand> = Vec::with_capacity(terms.len());
        for (exponents, coeff) in terms {
            let mut acc: Option<Operand> = None;
            for (v, e) in exponents.iter().enumerate() {
                for b in 0..e.bits() {
                    if e.bit(b) {
                        let factor = chains[v][b as usize];
                        acc = Some(match acc {
                            None => factor,
                            Some(prev) => {
                                instructions.push(Instruction::Bin {
                                    op: BinOp::Mul,
                                    lhs: prev,
                                    rhs: factor,
                                });
                                Operand::Instr(instructions.len() - 1)
                            }
                        });
                    }
                }
            }
            instructions.push(Instruction::Const(coeff.clone()));
            let coeff_ref = Operand::Instr(instructions.len() - 1);
            let out = match acc {
                None => coeff_ref,
                Some(power) => {
                    instructions.push(Instruction::Bin {
                        op: BinOp::Mul,
                        lhs: coeff_ref,
                        rhs: power,
                    });
                    Operand::Instr(instructions.len() - 1)
                }
            };
            term_outputs.push(out);
        }

        let mut sum = term_outputs[0];
        for &t in &term_outputs[1..] {
            instructions.push(Instruction::Bin { op: BinOp::Add, lhs: sum, rhs: t });
            sum = Operand::Instr(instructions.len() - 1);
        }
        // Each term ends with a fresh instruction, so after summing, the
        // output is always the last instruction.
        debug_assert_eq!(sum, Operand::Instr(instructions.len() - 1));
        Slp::new(ring, num_vars, instructions).unwrap()
    }
}

fn operand_text(operand: &Operand) -> String {
    match operand {
        Operand::Input(j) => format!("in{j}"),
        Operand::Instr(k) => format!("c{k}"),
    }
}

fn parse_operand(
    tok: (usize, &str),
    num_inputs: usize,
    defined: usize,
) -> Result<Operand, (usize, String)> {
    let (col, text) = tok;
    if let Some(rest) = text.strip_prefix("in") {
        let j: usize = rest
            .parse()
            .map_err(|_| (col, format!("`{text}` is not an operand")))?;
        if j >= num_inputs {
            return Err((col, format!("input in{j} out of range (program has {num_inputs})")));
        }
        return Ok(Operand::Input(j));
    }
    if let Some(rest) = text.strip_prefix('c') {
        let k: usize = rest
            .parse()
            .map_err(|_| (col, format!("`{text}` is not an operand")))?;
        if k >= defined {
            return Err((col, format!("instruction c{k} is not defined yet")));
        }
        return Ok(Operand::Instr(k));
    }
    Err((col, format!("`{text}` is not an operand")))
}

/// Whitespace tokens of a line with their 1-based column positions.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

// ----------------------------------------------------------------------
// Probe engine internals
// ----------------------------------------------------------------------

/// Intermediate probe value: sparse term list (sorted, canonical) or a
/// dense cyclic element. Promotion to dense is one-way.
enum ProbeValue {
    Sparse(Vec<(u64, RingElem)>),
    Dense(CyclicPoly),
}

fn resolve<'a>(
    operand: &Operand,
    inputs: &'a [ProbeValue],
    values: &'a [ProbeValue],
) -> &'a ProbeValue {
    match operand {
        Operand::Input(j) => &inputs[*j],
        Operand::Instr(k) => &values[*k],
    }
}

fn dense_threshold(order: u64) -> usize {
    ((order / 2) as usize).max(8)
}

fn densify(ring: RingSpec, order: u64, terms: &[(u64, RingElem)]) -> CyclicPoly {
    let mut coeffs = vec![ring.zero(); order as usize];
    for (k, c) in terms {
        coeffs[*k as usize] = c.clone();
    }
    CyclicPoly::from_coeffs(ring, coeffs)
}

fn normalize_sparse(
    ring: RingSpec,
    order: u64,
    map: HashMap<u64, RingElem>,
) -> ProbeValue {
    let mut terms: Vec<(u64, RingElem)> =
        map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if terms.len() > dense_threshold(order) {
        terms.sort_by_key(|&(k, _)| k);
        return ProbeValue::Dense(densify(ring, order, &terms));
    }
    terms.sort_by_key(|&(k, _)| k);
    ProbeValue::Sparse(terms)
}

fn probe_add(
    ring: RingSpec,
    order: u64,
    a: &ProbeValue,
    b: &ProbeValue,
    negate_b: bool,
) -> ProbeValue {
    match (a, b) {
        (ProbeValue::Sparse(ta), ProbeValue::Sparse(tb)) => {
            let mut map: HashMap<u64, RingElem> = ta.iter().cloned().collect();
            for (k, c) in tb {
                let entry = map.entry(*k).or_insert_with(|| ring.zero());
                *entry = if negate_b { ring.sub(entry, c) } else { ring.add(entry, c) };
            }
            normalize_sparse(ring, order, map)
        }
        _ => {
            let da = to_dense(ring, order, a);
            let db = to_dense(ring, order, b);
            ProbeValue::Dense(if negate_b {
                da.cyclic_sub(&db)
            } else {
                da.cyclic_add(&db)
            })
        }
    }
}

fn probe_mul(ring: RingSpec, order: u64, a: &ProbeValue, b: &ProbeValue) -> ProbeValue {
    match (a, b) {
        (ProbeValue::Sparse(ta), ProbeValue::Sparse(tb)) => {
            if ta.is_empty() || tb.is_empty() {
                return ProbeValue::Sparse(Vec::new());
            }
            let pairs = ta.len().saturating_mul(tb.len());
            if pairs <= 4096.max(4 * order as usize) {
                let mut map: HashMap<u64, RingElem> = HashMap::new();
                for (ka, ca) in ta {
                    for (kb, cb) in tb {
                        let mut k = ka + kb;
                        if k >= order {
                            k -= order;
                        }
                        let prod = ring.mul(ca, cb);
                        let entry = map.entry(k).or_insert_with(|| ring.zero());
                        *entry = ring.add(entry, &prod);
                    }
                }
                normalize_sparse(ring, order, map)
            } else {
                // Too many cross terms: run the shorter side against a
                // dense copy of the longer one.
                let (short, long) = if ta.len() <= tb.len() { (ta, tb) } else { (tb, ta) };
                let dense = densify(ring, order, long);
                ProbeValue::Dense(sparse_times_dense(ring, order, short, &dense))
            }
        }
        (ProbeValue::Sparse(t), ProbeValue::Dense(d))
        | (ProbeValue::Dense(d), ProbeValue::Sparse(t)) => {
            ProbeValue::Dense(sparse_times_dense(ring, order, t, d))
        }
        (ProbeValue::Dense(da), ProbeValue::Dense(db)) => ProbeValue::Dense(da.cyclic_mul(db)),
    }
}

fn sparse_times_dense(
    ring: RingSpec,
    order: u64,
    terms: &[(u64, RingElem)],
    dense: &CyclicPoly,
) -> CyclicPoly {
    let n = order as usize;
    let mut out = vec![ring.zero(); n];
    for (shift, c) in terms {
        for (k, v) in dense.terms() {
            let mut pos = (shift + k) as usize;
            if pos >= n {
                pos -= n;
            }
            out[pos] = ring.add(&out[pos], &ring.mul(c, v));
        }
    }
    CyclicPoly::from_coeffs(ring, out)
}

fn to_dense(ring: RingSpec, order: u64, v: &ProbeValue) -> CyclicPoly {
    match v {
        ProbeValue::Sparse(terms) => densify(ring, order, terms),
        ProbeValue::Dense(d) => d.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn zq(q: u64) -> RingSpec {
        RingSpec::prime_field(q).unwrap()
    }

    fn example_one(ring: RingSpec) -> Slp {
        Slp::from_sparse(&SparsePoly::from_pairs(ring, &[(3, 1), (33, 1)]))
    }

    /// Reference evaluator: plain dense replay with CyclicPoly arithmetic.
    fn dense_replay(s: &Slp, order: u64, input_exponents: &[BigUint]) -> CyclicPoly {
        let ring = s.ring();
        let inputs: Vec<CyclicPoly> = input_exponents
            .iter()
            .map(|e| {
                let k = (e % BigUint::from(order)).to_u64().unwrap();
                CyclicPoly::monomial(ring, order, k, ring.one())
            })
            .collect();
        let mut values: Vec<CyclicPoly> = Vec::new();
        for instr in s.instructions() {
            let v = match instr {
                Instruction::Const(c) => CyclicPoly::monomial(ring, order, 0, c.clone()),
                Instruction::Bin { op, lhs, rhs } => {
                    let a = match lhs {
                        Operand::Input(j) => &inputs[*j],
                        Operand::Instr(k) => &values[*k],
                    };
                    let b = match rhs {
                        Operand::Input(j) => &inputs[*j],
                        Operand::Instr(k) => &values[*k],
                    };
                    match op {
                        BinOp::Add => a.cyclic_add(b),
                        BinOp::Sub => a.cyclic_sub(b),
                        BinOp::Mul => a.cyclic_mul(b),
                    }
                }
            };
            values.push(v);
        }
        values.pop().unwrap()
    }

    #[test]
    fn parses_two_line_program() {
        let s = Slp::parse("inputs 1\nc0 = mul in0 in0").unwrap();
        assert_eq!(s.num_inputs(), 1);
        assert_eq!(s.len(), 1);
        let ledger = ProbeLedger::new();
        let image = s.probe(8, &[BigUint::one()], &ledger);
        assert_eq!(image, CyclicPoly::monomial(s.ring(), 8, 2, s.ring().one()));
    }

    #[test]
    fn rejects_forward_reference() {
        let e = Slp::parse("inputs 1\nc0 = const 1\nc1 = add c2 c0").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("c2"));
    }

    #[test]
    fn rejects_input_out_of_range() {
        let e = Slp::parse("inputs 1\nc0 = add in1 in0").unwrap_err();
        assert!(e.message.contains("in1"));
    }

    #[test]
    fn rejects_sparse_indices() {
        let e = Slp::parse("inputs 1\nc1 = const 0").unwrap_err();
        assert!(e.message.contains("expected c0"));
    }

    #[test]
    fn rejects_bad_constants_in_ring() {
        let e = Slp::parse("inputs 1\nring zmod 7\nc0 = const abc").unwrap_err();
        assert_eq!(e.line, 3);
        let e = Slp::parse("inputs 1\nring zmod 6\nc0 = const 1").unwrap_err();
        assert!(e.message.contains("not prime"));
    }

    #[test]
    fn header_and_ring_lines_round_trip() {
        let ring = zq(101);
        let s = example_one(ring);
        let text = s.to_text();
        assert!(text.starts_with("slp 1\ninputs 1\nring zmod 101\n"));
        assert_eq!(Slp::parse(&text).unwrap(), s);
        // Integer-ring default when the ring line is absent.
        let t = Slp::parse("inputs 1\nc0 = const -5").unwrap();
        assert_eq!(t.ring(), RingSpec::Integers);
    }

    #[test]
    fn probe_reproduces_small_images() {
        let ring = zq(101);
        let s = example_one(ring);
        let ledger = ProbeLedger::new();
        let one = [BigUint::one()];

        let mod7 = s.probe(7, &one, &ledger);
        assert_eq!(mod7.sparsity(), 2);
        assert_eq!(*mod7.coeff(3), ring.one());
        assert_eq!(*mod7.coeff(5), ring.one());

        let mod5 = s.probe(5, &one, &ledger);
        assert_eq!(mod5.sparsity(), 1);
        assert_eq!(*mod5.coeff(3), ring.from_i64(2));

        // Degree-1 probe is the coefficient sum.
        let mod1 = s.probe(1, &one, &ledger);
        assert_eq!(*mod1.coeff(0), ring.from_i64(2));

        assert_eq!(ledger.count(), 3);
        assert_eq!(ledger.total_cost(), 13);
        assert_eq!(ledger.max_degree(), 7);
    }

    #[test]
    fn probe_diff_subtracts_reduced_approximation() {
        let ring = zq(101);
        let s = example_one(ring);
        let ledger = ProbeLedger::new();
        let one = [BigUint::one()];
        let f = SparsePoly::from_pairs(ring, &[(3, 1), (33, 1)]);

        let zero_star = SparsePoly::zero(ring);
        assert_eq!(
            s.probe_diff(&zero_star, 7, &one, &ledger),
            s.probe(7, &one, &ledger)
        );
        assert!(s.probe_diff(&f, 7, &one, &ledger).is_zero());

        let partial = SparsePoly::from_pairs(ring, &[(3, 1)]);
        let diff = s.probe_diff(&partial, 7, &one, &ledger);
        assert_eq!(diff, CyclicPoly::monomial(ring, 7, 5, ring.one()));
    }

    #[test]
    fn eval_points_replays_in_the_base_ring() {
        let ring = zq(7);
        let square = Slp::parse("inputs 1\nring zmod 7\nc0 = mul in0 in0").unwrap();
        let points: Vec<RingElem> = (0..3).map(|v| ring.from_i64(v)).collect();
        let values = square.eval_points(&points).unwrap();
        assert_eq!(values, vec![ring.zero(), ring.one(), ring.from_i64(4)]);

        let constant = Slp::parse("inputs 1\nring zmod 7\nc0 = const 5").unwrap();
        assert_eq!(
            constant.eval_points(&[ring.from_i64(3)]).unwrap(),
            vec![ring.from_i64(5)]
        );

        let bivariate = Slp::new(
            ring,
            2,
            vec![Instruction::Bin {
                op: BinOp::Add,
                lhs: Operand::Input(0),
                rhs: Operand::Input(1),
            }],
        )
        .unwrap();
        assert!(matches!(
            bivariate.eval_points(&[ring.one()]),
            Err(SlpError::NotUnivariate { num_inputs: 2 })
        ));
    }

    #[test]
    fn eval_matches_ground_truth_on_random_instances() {
        let ring = zq(10_007);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = SparsePoly::random(ring, rng.gen_range(0..=12), 4000, &mut rng).unwrap();
            let s = Slp::from_sparse(&f);
            let point = ring.from_i64(rng.gen_range(0..10_007));
            let via_slp = s.eval_points(std::slice::from_ref(&point)).unwrap();
            assert_eq!(via_slp[0], f.evaluate(&point));
        }
    }

    #[test]
    fn zero_polynomial_compiles_to_single_const() {
        let ring = zq(101);
        let s = Slp::from_sparse(&SparsePoly::zero(ring));
        assert_eq!(s.len(), 1);
        assert_eq!(s.instructions()[0], Instruction::Const(ring.zero()));
    }

    #[test]
    fn probe_commutes_with_reduction() {
        // The module's master oracle: probing the generated program equals
        // reducing the ground truth, for every tested order.
        let ring = zq((1 << 61) - 1);
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let f = SparsePoly::random(ring, 20, 1 << 30, &mut rng).unwrap();
        let s = Slp::from_sparse(&f);
        let ledger = ProbeLedger::new();
        for _ in 0..20 {
            let order = rng.gen_range(1..100_000u64);
            assert_eq!(
                s.probe(order, &[BigUint::one()], &ledger),
                f.reduce_mod_cyclic(order),
                "mismatch at order {order}"
            );
        }
    }

    #[test]
    fn engine_matches_dense_replay_on_dense_programs() {
        // Programs whose intermediates are far from monomials: (1 + z)^(2^k)
        // and mixtures. The staged sparse/dense engine must be bit-identical
        // to a plain dense replay.
        let ring = zq(101);
        let text = "inputs 1\nring zmod 101\n\
                    c0 = const 1\n\
                    c1 = add c0 in0\n\
                    c2 = mul c1 c1\n\
                    c3 = mul c2 c2\n\
                    c4 = mul c3 c3\n\
                    c5 = sub c4 c1\n\
                    c6 = mul c5 c4\n";
        let s = Slp::parse(text).unwrap();
        assert_eq!(s.ring(), ring);
        let ledger = ProbeLedger::new();
        for order in [1u64, 2, 3, 5, 8, 13, 21, 64] {
            let expected = dense_replay(&s, order, &[BigUint::one()]);
            assert_eq!(s.probe(order, &[BigUint::one()], &ledger), expected);
        }
    }

    #[test]
    fn multivariate_probe_uses_input_exponents() {
        // f(x, y) = x + y^2 probed with the substitution x -> z, y -> z^3
        // becomes z + z^6.
        let ring = zq(101);
        let terms = vec![
            (vec![BigUint::one(), BigUint::from(0u32)], ring.one()),
            (vec![BigUint::from(0u32), BigUint::from(2u32)], ring.one()),
        ];
        let s = Slp::from_sparse_multivariate(ring, 2, &terms);
        let ledger = ProbeLedger::new();
        let image = s.probe(7, &[BigUint::one(), BigUint::from(3u32)], &ledger);
        assert_eq!(*image.coeff(1), ring.one());
        assert_eq!(*image.coeff(6), ring.one());
        assert_eq!(image.sparsity(), 2);
    }

    #[test]
    fn concurrent_probes_share_a_ledger() {
        let ring = zq(10_007);
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        let f = SparsePoly::random(ring, 10, 1 << 20, &mut rng).unwrap();
        let s = Slp::from_sparse(&f);
        let ledger = ProbeLedger::new();
        std::thread::scope(|scope| {
            for t in 0..4u64 {
                let (s, f, ledger) = (&s, &f, &ledger);
                scope.spawn(move || {
                    for i in 0..8 {
                        let order = 100 + 13 * t + i;
                        assert_eq!(
                            s.probe(order, &[BigUint::one()], ledger),
                            f.reduce_mod_cyclic(order)
                        );
                    }
                });
            }
        });
        assert_eq!(ledger.count(), 32);
    }

    proptest::proptest! {
        #[test]
        fn parser_never_panics(text in proptest::string::string_regex(".{0,200}").unwrap()) {
            let _ = Slp::parse(&text);
        }

        #[test]
        fn parser_never_panics_on_slp_shaped_garbage(
            text in proptest::string::string_regex(
                "(slp [0-9]\n)?inputs [0-9-]{1,3}\n(ring (zmod [0-9]{1,6}|int)\n)?(c[0-9]{1,2} = (const -?[0-9a-z]{1,5}|(add|sub|mul|div) (c|in)[0-9]{1,2} (c|in)[0-9]{1,2})\n){0,6}"
            ).unwrap()
        ) {
            let _ = Slp::parse(&text);
        }

        #[test]
        fn generated_programs_round_trip(seed in proptest::prelude::any::<u64>()) {
            let ring = zq(997);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let f = SparsePoly::random(ring, rng.gen_range(0..=10), 1 << 20, &mut rng).unwrap();
            let s = Slp::from_sparse(&f);
            proptest::prop_assert_eq!(Slp::parse(&s.to_text()).unwrap(), s);
        }

        #[test]
        fn probe_equals_reduction(seed in proptest::prelude::any::<u64>()) {
            let ring = zq(997);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let f = SparsePoly::random(ring, rng.gen_range(0..=10), 1 << 16, &mut rng).unwrap();
            let s = Slp::from_sparse(&f);
            let ledger = ProbeLedger::new();
            let order = rng.gen_range(1..512u64);
            proptest::prop_assert_eq!(
                s.probe(order, &[BigUint::one()], &ledger),
                f.reduce_mod_cyclic(order)
            );
        }
    }
}
