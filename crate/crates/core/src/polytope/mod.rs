//! Correlation polytopes of the Bell and Leggett–Garg systems, in expectation
//! coordinates, and the pipeline that turns them into inequality systems.

mod dd;
mod fm;
mod matching;

pub use dd::facet_enumeration;
pub use fm::{
    delta_coordinates, derive_delta_system, derive_delta_system_from, fourier_motzkin_eliminate,
    is_feasible, remove_redundant, DELTA,
};
pub use matching::{
    closed_form_compatibility, closed_form_delta_system, match_closed_form, FacetPartition,
};

use crate::model::SystemKind;
use crate::rational::Rational;

/// One expectation coordinate: the product of the listed variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub name: &'static str,
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDescriptor {
    pub kind: SystemKind,
    pub variables: Vec<&'static str>,
    pub observed_pairs: Vec<(usize, usize)>,
    pub connection_pairs: Vec<(usize, usize)>,
    /// Products of observed pairs, then singles, then connection products.
    pub coordinates: Vec<Coordinate>,
}

const BELL_COORDS: [(&str, &[usize]); 16] = [
    ("ab11", &[0, 1]),
    ("ab12", &[2, 3]),
    ("ab21", &[4, 5]),
    ("ab22", &[6, 7]),
    ("a11", &[0]),
    ("a12", &[2]),
    ("a21", &[4]),
    ("a22", &[6]),
    ("b11", &[1]),
    ("b12", &[3]),
    ("b21", &[5]),
    ("b22", &[7]),
    ("aa1", &[0, 2]),
    ("aa2", &[4, 6]),
    ("bb1", &[1, 5]),
    ("bb2", &[3, 7]),
];

const LG_COORDS: [(&str, &[usize]); 12] = [
    ("xy", &[0, 1]),
    ("xz", &[2, 3]),
    ("yz", &[4, 5]),
    ("x12", &[0]),
    ("x13", &[2]),
    ("y12", &[1]),
    ("y23", &[4]),
    ("z13", &[3]),
    ("z23", &[5]),
    ("xx", &[0, 2]),
    ("yy", &[1, 4]),
    ("zz", &[3, 5]),
];

impl SystemDescriptor {
    pub fn new(kind: SystemKind) -> Self {
        let table: &[(&'static str, &[usize])] = match kind {
            SystemKind::Bell => &BELL_COORDS,
            SystemKind::Lg => &LG_COORDS,
        };
        SystemDescriptor {
            kind,
            variables: kind.variables().to_vec(),
            observed_pairs: kind.observed_pairs().to_vec(),
            connection_pairs: kind.connection_pairs().to_vec(),
            coordinates: table
                .iter()
                .map(|&(name, vars)| Coordinate {
                    name,
                    vars: vars.to_vec(),
                })
                .collect(),
        }
    }

    pub fn bell() -> Self {
        Self::new(SystemKind::Bell)
    }

    pub fn lg() -> Self {
        Self::new(SystemKind::Lg)
    }

    pub fn atom_count(&self) -> usize {
        1 << self.variables.len()
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        self.coordinates.iter().map(|c| c.name.to_string()).collect()
    }

    /// Names of the observable coordinates (everything except connections).
    pub fn observable_names(&self) -> Vec<String> {
        let n = self.coordinates.len() - self.connection_pairs.len();
        self.coordinates[..n].iter().map(|c| c.name.to_string()).collect()
    }

    pub fn connection_names(&self) -> Vec<String> {
        let n = self.coordinates.len() - self.connection_pairs.len();
        self.coordinates[n..].iter().map(|c| c.name.to_string()).collect()
    }

    /// Coordinate index of the single `var`.
    pub fn single_coordinate(&self, var: usize) -> usize {
        self.coordinate_of(&[var])
    }

    /// Coordinate index of the product of a pair (either orientation).
    pub fn pair_coordinate(&self, first: usize, second: usize) -> usize {
        let (lo, hi) = (first.min(second), first.max(second));
        self.coordinate_of(&[lo, hi])
    }

    fn coordinate_of(&self, vars: &[usize]) -> usize {
        self.coordinates
            .iter()
            .position(|c| c.vars == vars)
            .expect("descriptor covers every single and pair")
    }

    /// All pairs, observed first.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.observed_pairs
            .iter()
            .chain(&self.connection_pairs)
            .copied()
    }
}

/// One row of the marginal matrix: the event `first = first_value ∧
/// second = second_value` with values in {+1, −1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarginalRow {
    pub first: usize,
    pub second: usize,
    pub first_value: i8,
    pub second_value: i8,
}

/// Binary matrix `M` with `p = M q`: rows are pair events (observed pairs
/// first, each in ++, +−, −+, −− order), columns are atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalMatrix {
    pub rows: Vec<MarginalRow>,
    entries: Vec<Vec<bool>>,
}

impl MarginalMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.entries.len(), self.entries.first().map_or(0, Vec::len))
    }

    pub fn get(&self, row: usize, atom: usize) -> bool {
        self.entries[row][atom]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.entries[row]
    }

    pub fn apply(&self, q: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(q)
                    .filter(|(hit, _)| **hit)
                    .map(|(_, x)| x)
                    .sum()
            })
            .collect()
    }
}

pub fn build_marginal_matrix(d: &SystemDescriptor) -> MarginalMatrix {
    let mut rows = Vec::new();
    for (first, second) in d.pairs() {
        for (first_value, second_value) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            rows.push(MarginalRow {
                first,
                second,
                first_value,
                second_value,
            });
        }
    }
    let entries = rows
        .iter()
        .map(|r| {
            (0..d.atom_count())
                .map(|atom| {
                    d.kind.atom_value(atom, r.first) == r.first_value as i64
                        && d.kind.atom_value(atom, r.second) == r.second_value as i64
                })
                .collect()
        })
        .collect();
    MarginalMatrix { rows, entries }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    pub coords: Vec<String>,
    pub points: Vec<Vec<Rational>>,
}

impl VertexSet {
    pub fn new(coords: Vec<String>, points: Vec<Vec<Rational>>) -> Self {
        VertexSet { coords, points }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Images of all atoms in expectation coordinates, by atom index.
pub fn enumerate_vertices(d: &SystemDescriptor) -> VertexSet {
    let points = (0..d.atom_count())
        .map(|atom| {
            d.coordinates
                .iter()
                .map(|c| {
                    let v: i64 = c.vars.iter().map(|&v| d.kind.atom_value(atom, v)).product();
                    Rational::from_integer(v)
                })
                .collect()
        })
        .collect();
    VertexSet::new(d.coordinate_names(), points)
}
