//! HP sequences, conformations and the contact energy.
//!
//! A conformation is a self-avoiding walk on the FCC lattice: consecutive
//! monomers are lattice neighbours and no two monomers share a point. Energy
//! is minus the number of H-H lattice contacts between monomers that are not
//! adjacent in the chain.

use crate::lattice::{is_neighbor, LatticePoint};
use rustc_hash::FxHashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HpError {
    #[error("sequence contains no monomers")]
    EmptySequence,
    /// `position` is the 1-based character offset in the input text.
    #[error("invalid character {ch:?} at position {position}")]
    InvalidCharacter { position: usize, ch: char },
    #[error("unknown residue {ch:?} at position {position}")]
    UnknownResidue { position: usize, ch: char },
    #[error("conformation has {found} positions but the sequence has {expected} monomers")]
    LengthMismatch { expected: usize, found: usize },
    #[error("infeasible conformation: {0}")]
    Infeasible(ValidationReport),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monomer {
    H,
    P,
}

impl Monomer {
    #[inline]
    pub fn is_h(self) -> bool {
        self == Monomer::H
    }

    pub fn as_char(self) -> char {
        match self {
            Monomer::H => 'H',
            Monomer::P => 'P',
        }
    }
}

/// A chain of H/P monomers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HpSequence {
    monomers: Vec<Monomer>,
    h_indices: Vec<usize>,
}

impl HpSequence {
    pub fn new(monomers: Vec<Monomer>) -> Result<Self, HpError> {
        if monomers.is_empty() {
            return Err(HpError::EmptySequence);
        }
        let h_indices = monomers
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_h())
            .map(|(i, _)| i)
            .collect();
        Ok(Self { monomers, h_indices })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.monomers.len()
    }

    /// Always false; sequences hold at least one monomer.
    pub fn is_empty(&self) -> bool {
        self.monomers.is_empty()
    }

    pub fn monomers(&self) -> &[Monomer] {
        &self.monomers
    }

    #[inline]
    pub fn is_h(&self, i: usize) -> bool {
        self.monomers[i].is_h()
    }

    /// Number of hydrophobic monomers.
    pub fn h_count(&self) -> usize {
        self.h_indices.len()
    }

    /// 0-based indices of the H monomers, increasing.
    pub fn h_indices(&self) -> &[usize] {
        &self.h_indices
    }
}

impl fmt::Display for HpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.monomers {
            write!(f, "{}", m.as_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HpSequence {
    type Err = HpError;
    fn from_str(s: &str) -> Result<Self, HpError> {
        parse_sequence(s)
    }
}

/// Parses an H/P string, case-insensitively, ignoring whitespace.
pub fn parse_sequence(text: &str) -> Result<HpSequence, HpError> {
    let mut monomers = Vec::with_capacity(text.len());
    for (i, ch) in text.chars().enumerate() {
        match ch.to_ascii_uppercase() {
            'H' => monomers.push(Monomer::H),
            'P' => monomers.push(Monomer::P),
            c if c.is_whitespace() => {}
            _ => return Err(HpError::InvalidCharacter { position: i + 1, ch }),
        }
    }
    HpSequence::new(monomers)
}

/// Maps one-letter amino-acid codes to H or P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HydrophobicityTable {
    // Indexed by `letter - 'A'`; `None` marks an unknown residue code.
    classes: [Option<Monomer>; 26],
}

impl Default for HydrophobicityTable {
    /// The 20 standard residues with {A, C, F, G, I, L, M, V, W, Y} hydrophobic.
    fn default() -> Self {
        let mut classes = [None; 26];
        for c in "ACDEFGHIKLMNPQRSTVWY".bytes() {
            classes[(c - b'A') as usize] = Some(Monomer::P);
        }
        for c in "ACFGILMVWY".bytes() {
            classes[(c - b'A') as usize] = Some(Monomer::H);
        }
        Self { classes }
    }
}

impl HydrophobicityTable {
    pub fn empty() -> Self {
        Self { classes: [None; 26] }
    }

    pub fn set(&mut self, residue: char, class: Monomer) -> bool {
        match letter_slot(residue) {
            Some(k) => {
                self.classes[k] = Some(class);
                true
            }
            None => false,
        }
    }

    pub fn classify(&self, residue: char) -> Option<Monomer> {
        letter_slot(residue).and_then(|k| self.classes[k])
    }

    /// Parses a table file: one `<residue> <H|P>` pair per line, separated by
    /// tabs or spaces. Blank lines and `#` comments are skipped. The result
    /// contains only the listed residues.
    pub fn parse(text: &str) -> Result<Self, HpError> {
        let mut table = Self::empty();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| HpError::Parse { line: lineno + 1, message: message.to_string() };
            let mut fields = line.split_whitespace();
            let residue = fields.next().ok_or_else(|| bad("missing residue"))?;
            let class = fields.next().ok_or_else(|| bad("missing class"))?;
            if fields.next().is_some() {
                return Err(bad("expected two fields"));
            }
            let mut chars = residue.chars();
            let (Some(r), None) = (chars.next(), chars.next()) else {
                return Err(bad("residue must be a single letter"));
            };
            let class = match class.to_ascii_uppercase().as_str() {
                "H" => Monomer::H,
                "P" => Monomer::P,
                _ => return Err(bad("class must be H or P")),
            };
            if !table.set(r, class) {
                return Err(bad("residue must be a letter A-Z"));
            }
        }
        Ok(table)
    }
}

fn letter_slot(c: char) -> Option<usize> {
    let u = c.to_ascii_uppercase();
    u.is_ascii_uppercase().then(|| (u as u8 - b'A') as usize)
}

/// Converts an amino-acid string to HP using `table`. Whitespace is ignored.
pub fn convert_aa_to_hp(text: &str, table: &HydrophobicityTable) -> Result<HpSequence, HpError> {
    let mut monomers = Vec::with_capacity(text.len());
    for (i, ch) in text.chars().enumerate() {
        if ch.is_whitespace() {
            continue;
        }
        match table.classify(ch) {
            Some(m) => monomers.push(m),
            None => return Err(HpError::UnknownResidue { position: i + 1, ch }),
        }
    }
    HpSequence::new(monomers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Monomers `i` and `i + 1` are not lattice neighbours.
    Chain { i: usize, j: usize },
    /// Monomers `i < j` share a lattice point.
    SelfAvoidance { i: usize, j: usize },
    /// Monomer `i` is not on the sublattice of monomer 0.
    Parity { i: usize },
    /// The occupancy index disagrees with the position list at monomer `i`.
    Occupancy { i: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Chain { i, j } => write!(f, "chain broken between {i} and {j}"),
            Violation::SelfAvoidance { i, j } => write!(f, "monomers {i} and {j} collide"),
            Violation::Parity { i } => write!(f, "monomer {i} has wrong parity"),
            Violation::Occupancy { i } => write!(f, "occupancy index stale at {i}"),
        }
    }
}

/// Every violated constraint of a candidate walk. Indices are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "feasible");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks chain, self-avoidance and parity constraints on a list of points.
pub fn validate_positions(positions: &[LatticePoint]) -> ValidationReport {
    let mut violations = Vec::new();
    let Some(&first) = positions.first() else {
        return ValidationReport { violations };
    };
    let mut seen: FxHashMap<LatticePoint, usize> = FxHashMap::default();
    for (j, &p) in positions.iter().enumerate() {
        if j > 0 && !is_neighbor(positions[j - 1], p) {
            violations.push(Violation::Chain { i: j - 1, j });
        }
        if !(p - first).has_even_parity() {
            violations.push(Violation::Parity { i: j });
        }
        if let Some(&i) = seen.get(&p) {
            violations.push(Violation::SelfAvoidance { i, j });
        } else {
            seen.insert(p, j);
        }
    }
    ValidationReport { violations }
}

/// A feasible self-avoiding walk plus a point-to-monomer index.
#[derive(Debug, Clone)]
pub struct Conformation {
    positions: Vec<LatticePoint>,
    occupancy: FxHashMap<LatticePoint, usize>,
}

impl PartialEq for Conformation {
    fn eq(&self, other: &Self) -> bool {
        self.positions == other.positions
    }
}

impl Eq for Conformation {}

impl Conformation {
    /// Builds a conformation, rejecting infeasible walks.
    pub fn new(positions: Vec<LatticePoint>) -> Result<Self, HpError> {
        let report = validate_positions(&positions);
        if !report.is_feasible() {
            return Err(HpError::Infeasible(report));
        }
        if positions.is_empty() {
            return Err(HpError::EmptySequence);
        }
        let occupancy = positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Self { positions, occupancy })
    }

    /// The straight walk `p_k = k * v_1`.
    pub fn straight(n: usize) -> Self {
        let step = crate::lattice::BASIS[0];
        let mut positions = Vec::with_capacity(n);
        let mut p = LatticePoint::ORIGIN;
        for _ in 0..n.max(1) {
            positions.push(p);
            p = p + step;
        }
        Self::new(positions).expect("straight walk is feasible")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    #[inline]
    pub fn positions(&self) -> &[LatticePoint] {
        &self.positions
    }

    #[inline]
    pub fn position(&self, i: usize) -> LatticePoint {
        self.positions[i]
    }

    /// The monomer at `p`, if any.
    #[inline]
    pub fn occupant(&self, p: LatticePoint) -> Option<usize> {
        self.occupancy.get(&p).copied()
    }

    #[inline]
    pub fn is_occupied(&self, p: LatticePoint) -> bool {
        self.occupancy.contains_key(&p)
    }

    /// Full validation, including consistency of the occupancy index.
    pub fn validate(&self) -> ValidationReport {
        let mut report = validate_positions(&self.positions);
        if self.occupancy.len() != self.positions.len() {
            report.violations.push(Violation::Occupancy { i: self.positions.len() });
        }
        for (i, p) in self.positions.iter().enumerate() {
            if self.occupancy.get(p) != Some(&i) {
                report.violations.push(Violation::Occupancy { i });
            }
        }
        report
    }

    /// Moves monomers to new points. The caller guarantees the result is
    /// feasible; the occupancy index is updated in place.
    pub(crate) fn relocate(&mut self, changes: &[(usize, LatticePoint)]) {
        for &(i, _) in changes {
            let old = self.positions[i];
            if self.occupancy.get(&old) == Some(&i) {
                self.occupancy.remove(&old);
            }
        }
        for &(i, p) in changes {
            self.positions[i] = p;
            self.occupancy.insert(p, i);
        }
    }

    /// Writes the HP string followed by one `x y z` line per monomer.
    pub fn to_text(&self, seq: &HpSequence) -> String {
        let mut s = format!("{seq}\n");
        for p in &self.positions {
            s.push_str(&format!("{} {} {}\n", p.x, p.y, p.z));
        }
        s
    }
}

/// Parses the text produced by [`Conformation::to_text`] and checks that the
/// walk is feasible and matches the sequence length.
pub fn parse_conformation(text: &str) -> Result<(HpSequence, Conformation), HpError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(HpError::EmptySequence)?;
    let seq = parse_sequence(header)?;
    let mut positions = Vec::with_capacity(seq.len());
    for (lineno, line) in lines {
        let bad = |message: &str| HpError::Parse { line: lineno + 1, message: message.to_string() };
        let coords: Vec<i32> = line
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|_| bad("expected integer coordinate")))
            .collect::<Result<_, _>>()?;
        let [x, y, z] = coords[..] else {
            return Err(bad("expected three coordinates"));
        };
        // Keep coordinates well inside i32 so that lattice arithmetic cannot overflow.
        if [x, y, z].iter().any(|c| c.unsigned_abs() > (1 << 28)) {
            return Err(bad("coordinate out of range"));
        }
        positions.push(LatticePoint::new(x, y, z));
    }
    if positions.len() != seq.len() {
        return Err(HpError::LengthMismatch { expected: seq.len(), found: positions.len() });
    }
    let conf = Conformation::new(positions)?;
    Ok((seq, conf))
}

/// HP contact energy: minus the number of non-consecutive H-H neighbour pairs.
pub fn energy(conf: &Conformation, seq: &HpSequence) -> Result<i64, HpError> {
    if conf.len() != seq.len() {
        return Err(HpError::LengthMismatch { expected: seq.len(), found: conf.len() });
    }
    Ok(-contact_count(conf, seq))
}

pub(crate) fn contact_count(conf: &Conformation, seq: &HpSequence) -> i64 {
    let mut contacts = 0;
    for &i in seq.h_indices() {
        for q in conf.position(i).neighbors() {
            if let Some(j) = conf.occupant(q) {
                if j > i + 1 && seq.is_h(j) {
                    contacts += 1;
                }
            }
        }
    }
    contacts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i32, y: i32, z: i32) -> LatticePoint {
        LatticePoint::new(x, y, z)
    }

    #[test]
    fn parse_examples() {
        let s = parse_sequence("HPH").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.h_count(), 2);
        assert_eq!(s.h_indices(), &[0, 2]);
        assert_eq!(parse_sequence("hp hP").unwrap().to_string(), "HPHP");
        assert_eq!(parse_sequence("HXH"), Err(HpError::InvalidCharacter { position: 2, ch: 'X' }));
        assert_eq!(parse_sequence("  \n"), Err(HpError::EmptySequence));
    }

    #[test]
    fn validate_examples() {
        assert!(validate_positions(&[p(0, 0, 0), p(1, 1, 0), p(1, 0, 1)]).is_feasible());
        assert_eq!(
            validate_positions(&[p(0, 0, 0), p(2, 0, 0)]).violations,
            vec![Violation::Chain { i: 0, j: 1 }]
        );
        assert_eq!(
            validate_positions(&[p(0, 0, 0), p(1, 1, 0), p(0, 0, 0)]).violations,
            vec![Violation::SelfAvoidance { i: 0, j: 2 }]
        );
        let odd = validate_positions(&[p(0, 0, 0), p(1, 0, 0)]);
        assert!(odd.violations.contains(&Violation::Parity { i: 1 }));
    }

    #[test]
    fn energy_examples() {
        let seq = parse_sequence("HHHHHH").unwrap();
        assert_eq!(energy(&Conformation::straight(6), &seq), Ok(0));

        let bent = Conformation::new(vec![p(0, 0, 0), p(1, 1, 0), p(1, 0, 1)]).unwrap();
        assert_eq!(energy(&bent, &parse_sequence("HHH").unwrap()), Ok(-1));
        assert_eq!(energy(&bent, &parse_sequence("HPH").unwrap()), Ok(-1));
        assert_eq!(energy(&bent, &parse_sequence("HHP").unwrap()), Ok(0));

        let four = Conformation::new(vec![p(0, 0, 0), p(1, 1, 0), p(1, 0, 1), p(0, 1, 1)]).unwrap();
        assert_eq!(energy(&four, &parse_sequence("PPPP").unwrap()), Ok(0));
        assert_eq!(
            energy(&bent, &parse_sequence("HH").unwrap()),
            Err(HpError::LengthMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn convert_examples() {
        let t = HydrophobicityTable::default();
        assert_eq!(convert_aa_to_hp("LVA", &t).unwrap().to_string(), "HHH");
        assert_eq!(convert_aa_to_hp("DEKR", &t).unwrap().to_string(), "PPPP");
        assert_eq!(convert_aa_to_hp("lva", &t).unwrap().to_string(), "HHH");
        assert_eq!(convert_aa_to_hp("LXA", &t), Err(HpError::UnknownResidue { position: 2, ch: 'X' }));
    }

    #[test]
    fn custom_table_replaces_default() {
        let t = HydrophobicityTable::parse("# custom\nL\tP\nX H\n\nk p\n").unwrap();
        assert_eq!(convert_aa_to_hp("LXK", &t).unwrap().to_string(), "PHP");
        assert!(matches!(convert_aa_to_hp("A", &t), Err(HpError::UnknownResidue { .. })));
        assert!(matches!(HydrophobicityTable::parse("L Q"), Err(HpError::Parse { line: 1, .. })));
        assert!(matches!(HydrophobicityTable::parse("\nLL H"), Err(HpError::Parse { line: 2, .. })));
    }

    #[test]
    fn relocate_keeps_index_consistent() {
        let mut c = Conformation::new(vec![p(0, 0, 0), p(1, 1, 0), p(2, 2, 0)]).unwrap();
        c.relocate(&[(2, p(1, 0, 1))]);
        assert!(c.validate().is_feasible());
        assert_eq!(c.occupant(p(1, 0, 1)), Some(2));
        assert_eq!(c.occupant(p(2, 2, 0)), None);
    }

    #[test]
    fn conformation_text_round_trip() {
        let seq = parse_sequence("HPH").unwrap();
        let c = Conformation::new(vec![p(0, 0, 0), p(1, 1, 0), p(1, 0, 1)]).unwrap();
        let (s2, c2) = parse_conformation(&c.to_text(&seq)).unwrap();
        assert_eq!(s2, seq);
        assert_eq!(c2, c);
        assert!(matches!(parse_conformation("HH\n0 0 0\n2 0 0\n"), Err(HpError::Infeasible(_))));
        assert!(matches!(parse_conformation("HH\n0 0 0\n"), Err(HpError::LengthMismatch { .. })));
        assert!(matches!(parse_conformation("H\n0 0\n"), Err(HpError::Parse { line: 2, .. })));
    }
}
