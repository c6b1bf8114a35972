//! Two-dimensional scenarios and their compositions.
//!
//! A scenario is a rectangular grid of cells. Columns are processes, rows are
//! time steps. Every cell carries data on its four sides: temporal data on
//! west/east, spatial data on north/south. Adjacent cells must agree on the
//! side they share.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iface::{
    align_up_to_nil, write_items, Alignment, BorderTypes, InterfaceType, InterfaceValue,
    SimpleValue, World,
};

/// The data on one side of one cell.
pub type Items = Vec<SimpleValue>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Module,
    Identity,
    Recorder,
    Speaker,
    Empty,
    TransposedRecorder,
    TransposedSpeaker,
    /// Inserted by alignment: passes north to south, nil on west/east.
    DummyRow,
    /// Inserted by alignment: passes west to east, nil on north/south.
    DummyCol,
    /// Absorbs seam data that the receiving program never consumed.
    Drain,
}

impl CellKind {
    fn is_transparent(self) -> bool {
        matches!(
            self,
            CellKind::Identity | CellKind::Empty | CellKind::DummyRow | CellKind::DummyCol
        )
    }

    fn is_wiring(self) -> bool {
        !matches!(self, CellKind::Module | CellKind::Drain)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub kind: CellKind,
    pub west: Items,
    pub north: Items,
    pub east: Items,
    pub south: Items,
}

pub const DUMMY_LABEL: &str = "·";

impl Cell {
    pub fn module(label: impl Into<String>, west: Items, north: Items, east: Items, south: Items) -> Cell {
        Cell {
            label: label.into(),
            kind: CellKind::Module,
            west,
            north,
            east,
            south,
        }
    }

    fn wiring(kind: CellKind, label: &str, west: Items, north: Items, east: Items, south: Items) -> Cell {
        Cell {
            label: label.to_string(),
            kind,
            west,
            north,
            east,
            south,
        }
    }

    fn dummy_row(vertical: Items) -> Cell {
        Cell::wiring(CellKind::DummyRow, DUMMY_LABEL, vec![], vertical.clone(), vec![], vertical)
    }

    fn dummy_col(horizontal: Items) -> Cell {
        Cell::wiring(CellKind::DummyCol, DUMMY_LABEL, horizontal.clone(), vec![], horizontal, vec![])
    }

    fn empty() -> Cell {
        Cell::wiring(CellKind::Empty, "Λ", vec![], vec![], vec![], vec![])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    pub letters: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    rows: usize,
    cols: usize,
    /// row-major
    cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("{op}: {seam} seam mismatch: {left} vs {right}")]
    Mismatch {
        op: &'static str,
        seam: Seam,
        left: String,
        right: String,
    },
    #[error("constant {kind:?}: {reason}")]
    Constant { kind: ConstCellKind, reason: String },
    #[error("malformed grid: {0}")]
    Shape(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seam {
    /// east of the left operand against west of the right operand
    Temporal,
    /// south of the upper operand against north of the lower operand
    Spatial,
}

impl fmt::Display for Seam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seam::Temporal => f.write_str("temporal (east/west)"),
            Seam::Spatial => f.write_str("spatial (south/north)"),
        }
    }
}

/// One inconsistency found by [`seam_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell ({}, {}): {}", self.row, self.col, self.message)
    }
}

fn flat(groups: &[Items]) -> Items {
    groups.iter().flatten().cloned().collect()
}

fn show(groups: &[Items]) -> String {
    struct G<'a>(&'a [Items]);
    impl fmt::Display for G<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("[")?;
            for (i, g) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write_items(f, g)?;
            }
            f.write_str("]")
        }
    }
    G(groups).to_string()
}

impl Scenario {
    pub fn empty() -> Scenario {
        Scenario {
            rows: 0,
            cols: 0,
            cells: Vec::new(),
        }
    }

    pub fn single(cell: Cell) -> Scenario {
        Scenario {
            rows: 1,
            cols: 1,
            cells: vec![cell],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Cell>>) -> Result<Scenario, CompositionError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(CompositionError::Shape("rows of different lengths".into()));
        }
        if cols == 0 {
            return Ok(Scenario::empty());
        }
        Ok(Scenario {
            rows: rows.len(),
            cols,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * self.cols + col]
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &Cell)> {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, c)| (i / cols, i % cols, c))
    }

    pub fn row_cells(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn grid(&self) -> Grid {
        Grid {
            rows: self.rows,
            cols: self.cols,
            letters: (0..self.rows)
                .map(|r| self.row_cells(r).iter().map(|c| c.label.clone()).collect())
                .collect(),
        }
    }

    /// West side of each row, top to bottom.
    pub fn west_groups(&self) -> Vec<Items> {
        (0..self.rows).map(|r| self.cell(r, 0).west.clone()).collect()
    }

    pub fn east_groups(&self) -> Vec<Items> {
        (0..self.rows)
            .map(|r| self.cell(r, self.cols - 1).east.clone())
            .collect()
    }

    /// North side of each column, left to right.
    pub fn north_groups(&self) -> Vec<Items> {
        (0..self.cols).map(|c| self.cell(0, c).north.clone()).collect()
    }

    pub fn south_groups(&self) -> Vec<Items> {
        (0..self.cols)
            .map(|c| self.cell(self.rows - 1, c).south.clone())
            .collect()
    }

    pub fn west(&self) -> InterfaceValue {
        InterfaceValue::new(World::Temporal, flat(&self.west_groups()))
    }

    pub fn north(&self) -> InterfaceValue {
        InterfaceValue::new(World::Spatial, flat(&self.north_groups()))
    }

    pub fn east(&self) -> InterfaceValue {
        InterfaceValue::new(World::Temporal, flat(&self.east_groups()))
    }

    pub fn south(&self) -> InterfaceValue {
        InterfaceValue::new(World::Spatial, flat(&self.south_groups()))
    }

    /// Least types of the four borders.
    pub fn border_types(&self) -> BorderTypes {
        use crate::iface::type_of_value;
        BorderTypes {
            w: type_of_value(&self.west()),
            n: type_of_value(&self.north()),
            e: type_of_value(&self.east()),
            s: type_of_value(&self.south()),
        }
    }

    /// Vertical data flowing between rows `row - 1` and `row` in `col`.
    fn vertical_flow(&self, row: usize, col: usize) -> Items {
        if row < self.rows {
            self.cell(row, col).north.clone()
        } else {
            self.cell(self.rows - 1, col).south.clone()
        }
    }

    fn horizontal_flow(&self, row: usize, col: usize) -> Items {
        if col < self.cols {
            self.cell(row, col).west.clone()
        } else {
            self.cell(row, self.cols - 1).east.clone()
        }
    }

    /// Rows reordered by `layout`; `None` entries become dummy rows.
    fn pad_rows(&self, layout: &[Option<usize>]) -> Vec<Vec<Cell>> {
        let mut next_real = 0;
        layout
            .iter()
            .map(|slot| match slot {
                Some(r) => {
                    next_real = r + 1;
                    self.row_cells(*r).to_vec()
                }
                None => (0..self.cols)
                    .map(|c| Cell::dummy_row(self.vertical_flow(next_real, c)))
                    .collect(),
            })
            .collect()
    }

    fn pad_cols(&self, layout: &[Option<usize>]) -> Vec<Vec<Cell>> {
        (0..self.rows)
            .map(|r| {
                let mut next_real = 0;
                layout
                    .iter()
                    .map(|slot| match slot {
                        Some(c) => {
                            next_real = c + 1;
                            self.cell(r, *c).clone()
                        }
                        None => Cell::dummy_col(self.horizontal_flow(r, next_real)),
                    })
                    .collect()
            })
            .collect()
    }

    /// Deletes every removable all-wiring row and column until none remain.
    ///
    /// A row can go when each of its cells is transparent with nil west/east
    /// and north equal to south; a column dually.
    pub fn normalize(&self) -> Scenario {
        let mut rows: Vec<Vec<Cell>> = (0..self.rows).map(|r| self.row_cells(r).to_vec()).collect();
        loop {
            let before = (rows.len(), rows.first().map_or(0, Vec::len));
            rows.retain(|row| {
                !row.iter().all(|c| {
                    c.kind.is_transparent() && c.west.is_empty() && c.east.is_empty() && c.north == c.south
                })
            });
            let cols = rows.first().map_or(0, Vec::len);
            let keep: Vec<bool> = (0..cols)
                .map(|c| {
                    !rows.iter().all(|row| {
                        let cell = &row[c];
                        cell.kind.is_transparent()
                            && cell.north.is_empty()
                            && cell.south.is_empty()
                            && cell.west == cell.east
                    })
                })
                .collect();
            for row in &mut rows {
                let mut i = 0;
                row.retain(|_| {
                    i += 1;
                    keep[i - 1]
                });
            }
            let after = (rows.len(), rows.first().map_or(0, Vec::len));
            if after == before || after.0 == 0 || after.1 == 0 {
                break;
            }
        }
        Scenario::from_rows(rows).unwrap_or_else(|_| Scenario::empty())
    }

    /// Equality after [`Scenario::normalize`].
    pub fn equivalent(&self, other: &Scenario) -> bool {
        self.normalize() == other.normalize()
    }

    /// Each column top to bottom with its dummy-row cells deleted. Two
    /// horizontal composites that differ only in where alignment put the
    /// padding of each operand have equal columns.
    pub fn columns_without_dummy_rows(&self) -> Vec<Vec<Cell>> {
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| self.cell(r, c))
                    .filter(|cell| cell.kind != CellKind::DummyRow)
                    .cloned()
                    .collect()
            })
            .collect()
    }

    /// Each row left to right with its dummy-column cells deleted.
    pub fn rows_without_dummy_cols(&self) -> Vec<Vec<Cell>> {
        (0..self.rows)
            .map(|r| {
                self.row_cells(r)
                    .iter()
                    .filter(|cell| cell.kind != CellKind::DummyCol)
                    .cloned()
                    .collect()
            })
            .collect()
    }

    /// Module and drain cells with their relative row/column ranks, plus the
    /// four borders. Two scenarios with equal skeletons differ only in wiring
    /// (identities, recorders, speakers, empty and dummy cells).
    pub fn skeleton(&self) -> Skeleton {
        let mut row_ids: Vec<usize> = Vec::new();
        let mut col_ids: Vec<usize> = Vec::new();
        for (r, c, cell) in self.cells() {
            if !cell.kind.is_wiring() {
                row_ids.push(r);
                col_ids.push(c);
            }
        }
        row_ids.sort_unstable();
        row_ids.dedup();
        col_ids.sort_unstable();
        col_ids.dedup();
        let cells = self
            .cells()
            .filter(|(_, _, cell)| !cell.kind.is_wiring())
            .map(|(r, c, cell)| {
                (
                    row_ids.binary_search(&r).unwrap(),
                    col_ids.binary_search(&c).unwrap(),
                    cell.clone(),
                )
            })
            .collect();
        Skeleton {
            cells,
            west: self.west(),
            north: self.north(),
            east: self.east(),
            south: self.south(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub cells: Vec<(usize, usize, Cell)>,
    pub west: InterfaceValue,
    pub north: InterfaceValue,
    pub east: InterfaceValue,
    pub south: InterfaceValue,
}

fn align_seam(
    op: &'static str,
    seam: Seam,
    left: &[Items],
    right: &[Items],
) -> Result<Alignment, CompositionError> {
    align_up_to_nil(left, right, |g| g.is_empty(), |a, b| a == b).ok_or_else(|| {
        CompositionError::Mismatch {
            op,
            seam,
            left: show(left),
            right: show(right),
        }
    })
}

fn empty_side_ok(
    op: &'static str,
    seam: Seam,
    groups: &[Items],
    other_is_left: bool,
) -> Result<(), CompositionError> {
    if groups.iter().all(|g| g.is_empty()) {
        return Ok(());
    }
    let (left, right) = if other_is_left {
        (show(groups), "[]".to_string())
    } else {
        ("[]".to_string(), show(groups))
    };
    Err(CompositionError::Mismatch { op, seam, left, right })
}

/// Horizontal composition: `f1` left of `f2`, dummy rows inserted for nils.
pub fn hcomp(f1: &Scenario, f2: &Scenario) -> Result<Scenario, CompositionError> {
    if f1.is_empty() {
        empty_side_ok("hcomp", Seam::Temporal, &f2.west_groups(), false)?;
        return Ok(f2.clone());
    }
    if f2.is_empty() {
        empty_side_ok("hcomp", Seam::Temporal, &f1.east_groups(), true)?;
        return Ok(f1.clone());
    }
    let al = align_seam("hcomp", Seam::Temporal, &f1.east_groups(), &f2.west_groups())?;
    let left = f1.pad_rows(&al.left);
    let right = f2.pad_rows(&al.right);
    let rows = left
        .into_iter()
        .zip(right)
        .map(|(mut l, r)| {
            l.extend(r);
            l
        })
        .collect();
    Scenario::from_rows(rows)
}

/// Vertical composition: `f1` above `f2`, dummy columns inserted for nils.
pub fn vcomp(f1: &Scenario, f2: &Scenario) -> Result<Scenario, CompositionError> {
    if f1.is_empty() {
        empty_side_ok("vcomp", Seam::Spatial, &f2.north_groups(), false)?;
        return Ok(f2.clone());
    }
    if f2.is_empty() {
        empty_side_ok("vcomp", Seam::Spatial, &f1.south_groups(), true)?;
        return Ok(f1.clone());
    }
    let al = align_seam("vcomp", Seam::Spatial, &f1.south_groups(), &f2.north_groups())?;
    let mut rows = f1.pad_cols(&al.left);
    rows.extend(f2.pad_cols(&al.right));
    Scenario::from_rows(rows)
}

/// Splits `data` into consecutive pieces shaped like `groups`.
fn split_like(data: &[SimpleValue], groups: &[Items]) -> Vec<Items> {
    let mut at = 0;
    groups
        .iter()
        .map(|g| {
            let piece = data[at..at + g.len()].to_vec();
            at += g.len();
            piece
        })
        .collect()
}

/// Diagonal composition: `f2` below and right of `f1`, fed by its east and south.
///
/// Built directly as a 3×3 block grid:
///
/// ```text
///   f1  | R1 | Λ
///   S2  | Id | R2
///   Λ   | S1 | f2
/// ```
///
/// `R1` records each row of `f1`'s east onto a growing spatial stream, `S2`
/// speaks each column of `f1`'s south onto a growing temporal stream, `Id`
/// crosses both, and `R2`/`S1` split them back into `f2`'s north and west.
pub fn dcomp(f1: &Scenario, f2: &Scenario) -> Result<Scenario, CompositionError> {
    if f1.is_empty() {
        empty_side_ok("dcomp", Seam::Temporal, &f2.west_groups(), false)?;
        empty_side_ok("dcomp", Seam::Spatial, &f2.north_groups(), false)?;
        return Ok(f2.clone());
    }
    if f2.is_empty() {
        empty_side_ok("dcomp", Seam::Temporal, &f1.east_groups(), true)?;
        empty_side_ok("dcomp", Seam::Spatial, &f1.south_groups(), true)?;
        return Ok(f1.clone());
    }
    let e1 = f1.east_groups();
    let s1 = f1.south_groups();
    let w2 = f2.west_groups();
    let n2 = f2.north_groups();
    align_seam("dcomp", Seam::Temporal, &e1, &w2)?;
    align_seam("dcomp", Seam::Spatial, &s1, &n2)?;
    let temporal = flat(&e1);
    let spatial = flat(&s1);
    let (r1, c1, r2, c2) = (f1.rows, f1.cols, f2.rows, f2.cols);

    let mut rows: Vec<Vec<Cell>> = Vec::with_capacity(r1 + 1 + r2);
    let mut recorded: Items = Vec::new();
    for r in 0..r1 {
        let mut row = f1.row_cells(r).to_vec();
        let above = recorded.clone();
        recorded.extend(e1[r].iter().cloned());
        row.push(Cell::wiring(CellKind::Recorder, "R", e1[r].clone(), above, vec![], recorded.clone()));
        row.extend((0..c2).map(|_| Cell::empty()));
        rows.push(row);
    }

    let mut middle = Vec::with_capacity(c1 + 1 + c2);
    let mut spoken: Items = Vec::new();
    for group in &s1 {
        let before = spoken.clone();
        spoken.extend(group.iter().cloned());
        middle.push(Cell::wiring(CellKind::Speaker, "S", before, group.clone(), spoken.clone(), vec![]));
    }
    middle.push(Cell::wiring(
        CellKind::Identity,
        "Id",
        spatial.clone(),
        temporal.clone(),
        spatial.clone(),
        temporal.clone(),
    ));
    let pieces = split_like(&spatial, &n2);
    let mut rest = spatial.clone();
    for piece in pieces {
        let west = rest.clone();
        rest.drain(..piece.len());
        middle.push(Cell::wiring(CellKind::Recorder, "R", west, vec![], rest.clone(), piece));
    }
    rows.push(middle);

    let pieces = split_like(&temporal, &w2);
    let mut rest = temporal;
    for (r, piece) in pieces.into_iter().enumerate() {
        let mut row: Vec<Cell> = (0..c1).map(|_| Cell::empty()).collect();
        let north = rest.clone();
        rest.drain(..piece.len());
        row.push(Cell::wiring(CellKind::Speaker, "S", vec![], north, piece, rest.clone()));
        row.extend(f2.row_cells(r).iter().cloned());
        rows.push(row);
    }
    Scenario::from_rows(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstCellKind {
    /// `Id_{m,p}`: west to east, north to south.
    Identity,
    /// `R`: west to south.
    Recorder,
    /// `S`: north to east.
    Speaker,
    /// `Λ`: nil on all sides.
    Empty,
    /// north to east
    TransposedRecorder,
    /// west to south
    TransposedSpeaker,
}

/// One-cell constant scenario fed with `west` and `north`.
pub fn make_constant(kind: ConstCellKind, west: Items, north: Items) -> Result<Scenario, CompositionError> {
    let fail = |reason: &str| {
        Err(CompositionError::Constant {
            kind,
            reason: reason.to_string(),
        })
    };
    let cell = match kind {
        ConstCellKind::Identity => Cell::wiring(
            CellKind::Identity,
            "Id",
            west.clone(),
            north.clone(),
            west,
            north,
        ),
        ConstCellKind::Recorder | ConstCellKind::TransposedSpeaker => {
            if !north.is_empty() {
                return fail("takes no spatial input");
            }
            let (ck, label) = if kind == ConstCellKind::Recorder {
                (CellKind::Recorder, "R")
            } else {
                (CellKind::TransposedSpeaker, "S'")
            };
            Cell::wiring(ck, label, west.clone(), vec![], vec![], west)
        }
        ConstCellKind::Speaker | ConstCellKind::TransposedRecorder => {
            if !west.is_empty() {
                return fail("takes no temporal input");
            }
            let (ck, label) = if kind == ConstCellKind::Speaker {
                (CellKind::Speaker, "S")
            } else {
                (CellKind::TransposedRecorder, "R'")
            };
            Cell::wiring(ck, label, vec![], north.clone(), north, vec![])
        }
        ConstCellKind::Empty => {
            if !west.is_empty() || !north.is_empty() {
                return fail("takes no input");
            }
            Cell::empty()
        }
    };
    Ok(Scenario::single(cell))
}

/// Border types of a constant carrying `payload`. The payload world must fit
/// the side it enters on.
pub fn constant_type(kind: ConstCellKind, payload: &InterfaceType) -> Result<BorderTypes, CompositionError> {
    let nil_t = InterfaceType::nil(World::Temporal);
    let nil_s = InterfaceType::nil(World::Spatial);
    let wrong = |want: World| CompositionError::Constant {
        kind,
        reason: format!("payload {payload} must be {want}"),
    };
    payload.check_world().map_err(|e| CompositionError::Constant {
        kind,
        reason: e.to_string(),
    })?;
    let swap = |t: &InterfaceType| InterfaceType { world: t.world.dual(), groups: t.groups.clone() }.dual_groups();
    Ok(match kind {
        ConstCellKind::Empty => BorderTypes::nil(),
        ConstCellKind::Recorder | ConstCellKind::TransposedSpeaker => {
            if payload.world != World::Temporal {
                return Err(wrong(World::Temporal));
            }
            BorderTypes {
                w: payload.clone(),
                n: nil_s,
                e: nil_t,
                s: swap(payload),
            }
        }
        ConstCellKind::Speaker | ConstCellKind::TransposedRecorder => {
            if payload.world != World::Spatial {
                return Err(wrong(World::Spatial));
            }
            BorderTypes {
                w: nil_t,
                n: payload.clone(),
                e: swap(payload),
                s: nil_s,
            }
        }
        ConstCellKind::Identity => {
            return Err(CompositionError::Constant {
                kind,
                reason: "identity takes two payloads; use identity_type".into(),
            })
        }
    })
}

/// Border types of `Id_{m,p}`.
pub fn identity_type(m: &InterfaceType, p: &InterfaceType) -> Result<BorderTypes, CompositionError> {
    if m.world != World::Temporal || p.world != World::Spatial {
        return Err(CompositionError::Constant {
            kind: ConstCellKind::Identity,
            reason: format!("Id_{{{m},{p}}} needs a temporal and a spatial payload"),
        });
    }
    Ok(BorderTypes {
        w: m.clone(),
        n: p.clone(),
        e: m.clone(),
        s: p.clone(),
    })
}

impl InterfaceType {
    /// Moves every base kind in the groups to this type's world.
    fn dual_groups(self) -> InterfaceType {
        use crate::iface::Group;
        fn conv(g: Group, w: World) -> Group {
            match g {
                Group::Simple(t) => Group::Simple(t.in_world(w)),
                Group::Union(a, b) => Group::Union(Box::new(a.retarget(w)), Box::new(b.retarget(w))),
                Group::Star(a) => Group::Star(Box::new(a.retarget(w))),
            }
        }
        let w = self.world;
        InterfaceType {
            world: w,
            groups: self.groups.into_iter().map(|g| conv(g, w)).collect(),
        }
    }

    fn retarget(self, w: World) -> InterfaceType {
        InterfaceType { world: w, groups: self.groups }.dual_groups()
    }
}

/// Column of identity cells, one per group: the unit of [`hcomp`] for a seam.
pub fn identity_column(groups: &[Items]) -> Scenario {
    Scenario::from_rows(
        groups
            .iter()
            .map(|g| vec![Cell::wiring(CellKind::Identity, "Id", g.clone(), vec![], g.clone(), vec![])])
            .collect(),
    )
    .unwrap_or_else(|_| Scenario::empty())
}

/// Row of identity cells, one per group: the unit of [`vcomp`] for a seam.
pub fn identity_row(groups: &[Items]) -> Scenario {
    Scenario::from_rows(vec![groups
        .iter()
        .map(|g| Cell::wiring(CellKind::Identity, "Id", vec![], g.clone(), vec![], g.clone()))
        .collect()])
    .unwrap_or_else(|_| Scenario::empty())
}

/// Single identity cell `Id_{m,n}` passing `west` and `north` through.
pub fn identity_cell(west: Items, north: Items) -> Scenario {
    Scenario::single(Cell::wiring(CellKind::Identity, "Id", west.clone(), north.clone(), west, north))
}

/// Identity cells passing each west item east across every column and each
/// north item south across every row.
pub fn identity_grid(west: &[SimpleValue], north: &[SimpleValue]) -> Scenario {
    let one = |v: &SimpleValue| vec![v.clone()];
    match (west.is_empty(), north.is_empty()) {
        (true, true) => Scenario::empty(),
        (false, true) => identity_column(&west.iter().map(one).collect::<Vec<_>>()),
        (true, false) => identity_row(&north.iter().map(one).collect::<Vec<_>>()),
        (false, false) => Scenario::from_rows(
            west.iter()
                .map(|w| {
                    north
                        .iter()
                        .map(|n| Cell::wiring(CellKind::Identity, "Id", one(w), one(n), one(w), one(n)))
                        .collect()
                })
                .collect(),
        )
        .unwrap_or_else(|_| Scenario::empty()),
    }
}

/// Appends a bottom row absorbing `leftover` west items under `f`.
pub(crate) fn drain_rows_below(f: &Scenario, leftover: &[SimpleValue]) -> Scenario {
    if leftover.is_empty() {
        return f.clone();
    }
    let mut rows: Vec<Vec<Cell>> = (0..f.rows).map(|r| f.row_cells(r).to_vec()).collect();
    let cols = f.cols.max(1);
    for item in leftover {
        let row = (0..cols)
            .map(|c| {
                let vertical = if f.is_empty() { vec![] } else { f.vertical_flow(f.rows, c) };
                if c == 0 {
                    Cell::wiring(CellKind::Drain, "⊥", vec![item.clone()], vertical.clone(), vec![], vertical)
                } else {
                    Cell::dummy_row(vertical)
                }
            })
            .collect();
        rows.push(row);
    }
    Scenario::from_rows(rows).unwrap_or_else(|_| Scenario::empty())
}

/// Appends right-hand columns absorbing `leftover` north items beside `f`.
pub(crate) fn drain_cols_right(f: &Scenario, leftover: &[SimpleValue]) -> Scenario {
    if leftover.is_empty() {
        return f.clone();
    }
    if f.is_empty() {
        return Scenario::from_rows(vec![leftover
            .iter()
            .map(|item| Cell::wiring(CellKind::Drain, "⊥", vec![], vec![item.clone()], vec![], vec![]))
            .collect()])
        .unwrap_or_else(|_| Scenario::empty());
    }
    let rows = (0..f.rows)
        .map(|r| {
            let mut row = f.row_cells(r).to_vec();
            let horizontal = f.horizontal_flow(r, f.cols);
            for item in leftover {
                if r == 0 {
                    row.push(Cell::wiring(
                        CellKind::Drain,
                        "⊥",
                        horizontal.clone(),
                        vec![item.clone()],
                        horizontal.clone(),
                        vec![],
                    ));
                } else {
                    row.push(Cell::dummy_col(horizontal.clone()));
                }
            }
            row
        })
        .collect();
    Scenario::from_rows(rows).unwrap_or_else(|_| Scenario::empty())
}

/// Internal seams that disagree. Borders are checked separately by
/// [`border_violations`].
pub fn seam_check(f: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    for (r, c, cell) in f.cells() {
        if c + 1 < f.cols {
            let right = f.cell(r, c + 1);
            if cell.east != right.west {
                out.push(Violation {
                    row: r,
                    col: c,
                    message: format!(
                        "east {} differs from west {} of ({}, {})",
                        InterfaceValue::new(World::Temporal, cell.east.clone()),
                        InterfaceValue::new(World::Temporal, right.west.clone()),
                        r,
                        c + 1
                    ),
                });
            }
        }
        if r + 1 < f.rows {
            let below = f.cell(r + 1, c);
            if cell.south != below.north {
                out.push(Violation {
                    row: r,
                    col: c,
                    message: format!(
                        "south {} differs from north {} of ({}, {})",
                        InterfaceValue::new(World::Spatial, cell.south.clone()),
                        InterfaceValue::new(World::Spatial, below.north.clone()),
                        r + 1,
                        c
                    ),
                });
            }
        }
    }
    out
}

/// Borders of `f` that do not conform to `ty`.
pub fn border_violations(f: &Scenario, ty: &BorderTypes) -> Vec<String> {
    use crate::iface::value_conforms;
    let checks = [
        ("west", f.west(), &ty.w),
        ("north", f.north(), &ty.n),
        ("east", f.east(), &ty.e),
        ("south", f.south(), &ty.s),
    ];
    checks
        .into_iter()
        .filter_map(|(side, v, t)| match value_conforms(&v, t) {
            Ok(true) => None,
            Ok(false) => Some(format!("{side} border {v} does not conform to {t}")),
            Err(e) => Some(format!("{side} border: {e}")),
        })
        .collect()
}

impl fmt::Display for Scenario {
    /// Grid of labels; each cell shows `north`, then `west label east`, then `south`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("(empty scenario)\n");
        }
        let show_items = |items: &Items| {
            if items.is_empty() {
                String::new()
            } else {
                InterfaceValue::new(World::Spatial, items.clone()).to_string()
            }
        };
        let texts: Vec<[String; 3]> = self
            .cells
            .iter()
            .map(|c| {
                let w = show_items(&c.west);
                let e = show_items(&c.east);
                let mid = match (w.is_empty(), e.is_empty()) {
                    (true, true) => c.label.clone(),
                    _ => format!("{w}>{}>{e}", c.label),
                };
                [show_items(&c.north), mid, show_items(&c.south)]
            })
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|col| {
                (0..self.rows)
                    .flat_map(|r| texts[r * self.cols + col].iter().map(|t| t.chars().count()))
                    .max()
                    .unwrap_or(1)
                    .max(1)
            })
            .collect();
        let rule: String = widths
            .iter()
            .map(|w| format!("+{}", "-".repeat(w + 2)))
            .collect::<String>()
            + "+\n";
        f.write_str(&rule)?;
        for r in 0..self.rows {
            for line in 0..3 {
                for (col, w) in widths.iter().enumerate() {
                    let t = &texts[r * self.cols + col][line];
                    let pad = w - t.chars().count();
                    let left = pad / 2;
                    write!(f, "| {}{}{} ", " ".repeat(left), t, " ".repeat(pad - left))?;
                }
                f.write_str("|\n")?;
            }
            f.write_str(&rule)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SimpleValue::Int;

    fn m(label: &str, w: Items, n: Items, e: Items, s: Items) -> Scenario {
        Scenario::single(Cell::module(label, w, n, e, s))
    }

    #[test]
    fn hcomp_joins_on_equal_seam() {
        let a = m("A", vec![], vec![Int(1)], vec![Int(6)], vec![Int(1)]);
        let b = m("B", vec![Int(6)], vec![], vec![], vec![Int(2)]);
        let ab = hcomp(&a, &b).unwrap();
        assert_eq!((ab.rows(), ab.cols()), (1, 2));
        assert!(seam_check(&ab).is_empty());
        assert_eq!(ab.cell(0, 1).west, vec![Int(6)]);
    }

    #[test]
    fn hcomp_rejects_unequal_seam() {
        let a = m("A", vec![], vec![], vec![Int(6)], vec![]);
        let b = m("B", vec![Int(7)], vec![], vec![], vec![]);
        let err = hcomp(&a, &b).unwrap_err();
        assert!(matches!(err, CompositionError::Mismatch { seam: Seam::Temporal, .. }));
    }

    #[test]
    fn hcomp_inserts_dummy_rows_for_nil() {
        let top = m("A", vec![], vec![Int(1)], vec![Int(5)], vec![Int(1)]);
        let bottom = m("B", vec![], vec![Int(1)], vec![], vec![Int(0)]);
        let left = vcomp(&top, &bottom).unwrap();
        let right = m("C", vec![Int(5)], vec![Int(9)], vec![], vec![Int(9)]);
        let joined = hcomp(&left, &right).unwrap();
        assert_eq!((joined.rows(), joined.cols()), (2, 2));
        assert_eq!(joined.cell(1, 1).kind, CellKind::DummyRow);
        assert_eq!(joined.cell(1, 1).north, vec![Int(9)]);
        assert!(seam_check(&joined).is_empty());
        assert_eq!(joined.south().items, vec![Int(0), Int(9)]);
    }

    #[test]
    fn vcomp_rejects_unequal_seam() {
        let a = m("A", vec![], vec![], vec![], vec![Int(3)]);
        let b = m("B", vec![], vec![Int(4)], vec![], vec![]);
        let err = vcomp(&a, &b).unwrap_err();
        assert!(matches!(err, CompositionError::Mismatch { seam: Seam::Spatial, .. }));
    }

    #[test]
    fn dcomp_two_cells() {
        let a = m("A", vec![Int(1)], vec![Int(1)], vec![Int(3)], vec![Int(2)]);
        let b = m("B", vec![Int(3)], vec![Int(2)], vec![Int(4)], vec![Int(5)]);
        let d = dcomp(&a, &b).unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 3));
        assert!(seam_check(&d).is_empty());
        assert_eq!(d.cell(0, 2).kind, CellKind::Empty);
        assert_eq!(d.cell(2, 0).kind, CellKind::Empty);
        assert_eq!(d.west().items, vec![Int(1)]);
        assert_eq!(d.north().items, vec![Int(1)]);
        assert_eq!(d.east().items, vec![Int(4)]);
        assert_eq!(d.south().items, vec![Int(5)]);
    }

    #[test]
    fn dcomp_names_failing_seam() {
        let a = m("A", vec![], vec![], vec![Int(3)], vec![Int(2)]);
        let b = m("B", vec![Int(3)], vec![Int(9)], vec![], vec![]);
        let err = dcomp(&a, &b).unwrap_err();
        assert!(matches!(err, CompositionError::Mismatch { seam: Seam::Spatial, .. }));
    }

    #[test]
    fn constants_route_as_declared() {
        let r = make_constant(ConstCellKind::Recorder, vec![Int(5)], vec![]).unwrap();
        assert_eq!(r.south().items, vec![Int(5)]);
        assert!(r.east().is_nil());
        let s = make_constant(ConstCellKind::Speaker, vec![], vec![Int(2)]).unwrap();
        assert_eq!(s.east().items, vec![Int(2)]);
        let e = make_constant(ConstCellKind::Empty, vec![], vec![]).unwrap();
        assert_eq!(e.border_types(), BorderTypes::nil());
        let id = make_constant(ConstCellKind::Identity, vec![Int(1)], vec![Int(2), Int(3)]).unwrap();
        assert_eq!(id.east().items, vec![Int(1)]);
        assert_eq!(id.south().items, vec![Int(2), Int(3)]);
        assert!(make_constant(ConstCellKind::Empty, vec![Int(1)], vec![]).is_err());
        let tr = make_constant(ConstCellKind::TransposedRecorder, vec![], vec![Int(4)]).unwrap();
        assert_eq!(tr.east().items, vec![Int(4)]);
        let ts = make_constant(ConstCellKind::TransposedSpeaker, vec![Int(4)], vec![]).unwrap();
        assert_eq!(ts.south().items, vec![Int(4)]);
    }

    #[test]
    fn constant_types_check_world() {
        let tn = InterfaceType::simple(World::Temporal, crate::iface::SimpleType::Tn);
        let t = constant_type(ConstCellKind::Recorder, &tn).unwrap();
        assert_eq!(t.to_string(), "⟨tn | nil | nil | sn⟩");
        assert!(constant_type(ConstCellKind::Speaker, &tn).is_err());
        let sn = InterfaceType::simple(World::Spatial, crate::iface::SimpleType::Sn);
        let sn2 = sn.seq(&sn);
        let id = identity_type(&tn, &sn2).unwrap();
        assert_eq!(id.to_string(), "⟨tn | sn;sn | tn | sn;sn⟩");
    }

    #[test]
    fn seam_check_reports_coordinates() {
        let bad = Scenario::from_rows(vec![vec![
            Cell::module("A", vec![], vec![], vec![Int(1)], vec![]),
            Cell::module("B", vec![Int(2)], vec![], vec![], vec![]),
        ]])
        .unwrap();
        let v = seam_check(&bad);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].row, v[0].col), (0, 0));
    }

    #[test]
    fn normalize_strips_identity_padding() {
        let f = m("F", vec![Int(1)], vec![Int(2)], vec![Int(3)], vec![Int(4)]);
        let with_id = hcomp(&f, &identity_column(&f.east_groups())).unwrap();
        assert_eq!(with_id.cols(), 2);
        assert_eq!(with_id.normalize(), f);
        let n = with_id.normalize();
        assert_eq!(n.normalize(), n);
    }
}
