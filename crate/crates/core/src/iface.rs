//! Interface types and values.
//!
//! An interface is a `;`-separated list of groups. Within a group, `,` builds
//! tuples, `|` builds unions and postfix `*` builds repetitions. Every
//! interface lives in exactly one world: spatial (north/south borders, `sn`,
//! `sb`) or temporal (west/east borders, `tn`, `tb`).
//!
//! Values are stored with `nil` items removed: the empty tuple may be freely
//! inserted or omitted, so `6;nil;nil` and `6` denote the same border data.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum World {
    Spatial,
    Temporal,
}

impl World {
    pub fn dual(self) -> World {
        match self {
            World::Spatial => World::Temporal,
            World::Temporal => World::Spatial,
        }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            World::Spatial => f.write_str("spatial"),
            World::Temporal => f.write_str("temporal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("kind error: {0}")]
    Kind(String),
    #[error("index {index} out of range (length {len})")]
    Range { index: i64, len: usize },
    #[error("structure error: {0}")]
    Structure(String),
}

/// Type of a single group entry: the data one module puts on one border.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimpleType {
    Nil,
    Sn,
    Sb,
    Tn,
    Tb,
    Union(Box<SimpleType>, Box<SimpleType>),
    Tuple(Vec<SimpleType>),
    Star(Box<SimpleType>),
}

impl SimpleType {
    pub fn union(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: SimpleType) -> SimpleType {
        SimpleType::Star(Box::new(a))
    }

    pub fn int(world: World) -> SimpleType {
        match world {
            World::Spatial => SimpleType::Sn,
            World::Temporal => SimpleType::Tn,
        }
    }

    pub fn boolean(world: World) -> SimpleType {
        match world {
            World::Spatial => SimpleType::Sb,
            World::Temporal => SimpleType::Tb,
        }
    }

    /// The world of the base kinds in this type; `None` when only `nil` occurs.
    pub fn world(&self) -> Result<Option<World>, ValueError> {
        fn join(a: Option<World>, b: Option<World>) -> Result<Option<World>, ValueError> {
            match (a, b) {
                (Some(x), Some(y)) if x != y => Err(ValueError::Kind(
                    "spatial and temporal kinds mixed in one simple type".into(),
                )),
                (Some(x), _) | (None, Some(x)) => Ok(Some(x)),
                (None, None) => Ok(None),
            }
        }
        match self {
            SimpleType::Nil => Ok(None),
            SimpleType::Sn | SimpleType::Sb => Ok(Some(World::Spatial)),
            SimpleType::Tn | SimpleType::Tb => Ok(Some(World::Temporal)),
            SimpleType::Union(a, b) => join(a.world()?, b.world()?),
            SimpleType::Tuple(items) => items
                .iter()
                .try_fold(None, |acc, t| join(acc, t.world()?)),
            SimpleType::Star(a) => a.world(),
        }
    }

    /// Same shape, with every base kind moved to `world`.
    pub fn in_world(&self, world: World) -> SimpleType {
        match self {
            SimpleType::Nil => SimpleType::Nil,
            SimpleType::Sn | SimpleType::Tn => SimpleType::int(world),
            SimpleType::Sb | SimpleType::Tb => SimpleType::boolean(world),
            SimpleType::Union(a, b) => SimpleType::union(a.in_world(world), b.in_world(world)),
            SimpleType::Tuple(items) => {
                SimpleType::Tuple(items.iter().map(|t| t.in_world(world)).collect())
            }
            SimpleType::Star(a) => SimpleType::star(a.in_world(world)),
        }
    }

    /// Value bound by `new x:T`: integers start at 0, booleans at false.
    pub fn default_value(&self) -> SimpleValue {
        match self {
            SimpleType::Nil => SimpleValue::Nil,
            SimpleType::Sn | SimpleType::Tn => SimpleValue::Int(0),
            SimpleType::Sb | SimpleType::Tb => SimpleValue::Bool(false),
            SimpleType::Union(a, _) => a.default_value(),
            SimpleType::Tuple(items) => {
                SimpleValue::Tuple(items.iter().map(SimpleType::default_value).collect())
            }
            SimpleType::Star(_) => SimpleValue::Star(Vec::new()),
        }
    }

    pub fn accepts(&self, v: &SimpleValue) -> bool {
        match (self, v) {
            (SimpleType::Union(a, b), _) => a.accepts(v) || b.accepts(v),
            (SimpleType::Nil, SimpleValue::Nil) => true,
            (SimpleType::Sn | SimpleType::Tn, SimpleValue::Int(_)) => true,
            (SimpleType::Sb | SimpleType::Tb, SimpleValue::Bool(_)) => true,
            (SimpleType::Tuple(ts), SimpleValue::Tuple(vs)) => {
                ts.len() == vs.len() && ts.iter().zip(vs).all(|(t, v)| t.accepts(v))
            }
            (SimpleType::Star(t), SimpleValue::Star(vs)) => vs.iter().all(|v| t.accepts(v)),
            _ => false,
        }
    }

    /// Whether some single value inhabits both types.
    pub fn intersects(&self, other: &SimpleType) -> bool {
        use SimpleType::*;
        match (self, other) {
            (Union(a, b), t) | (t, Union(a, b)) => a.intersects(t) || b.intersects(t),
            (Nil, Nil) => true,
            (Sn, Sn) | (Sb, Sb) | (Tn, Tn) | (Tb, Tb) => true,
            (Tuple(xs), Tuple(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.intersects(y))
            }
            // the empty repetition inhabits every star type
            (Star(_), Star(_)) => true,
            _ => false,
        }
    }

    /// Splits off a top-level `nil` alternative: (admits nil, remaining alternatives).
    fn split_nil(&self) -> (bool, Option<SimpleType>) {
        match self {
            SimpleType::Nil => (true, None),
            SimpleType::Union(a, b) => {
                let (na, ra) = a.split_nil();
                let (nb, rb) = b.split_nil();
                let rest = match (ra, rb) {
                    (Some(x), Some(y)) => Some(SimpleType::union(x, y)),
                    (x, None) => x,
                    (None, y) => y,
                };
                (na || nb, rest)
            }
            other => (false, Some(other.clone())),
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(
            self,
            SimpleType::Nil | SimpleType::Sn | SimpleType::Sb | SimpleType::Tn | SimpleType::Tb
        )
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Nil => f.write_str("nil"),
            SimpleType::Sn => f.write_str("sn"),
            SimpleType::Sb => f.write_str("sb"),
            SimpleType::Tn => f.write_str("tn"),
            SimpleType::Tb => f.write_str("tb"),
            SimpleType::Union(a, b) => write!(f, "({a} | {b})"),
            SimpleType::Tuple(items) => {
                f.write_str("(")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            SimpleType::Star(a) if a.is_atomic() => write!(f, "({a})*"),
            SimpleType::Star(a) => write!(f, "{a}*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    Simple(SimpleType),
    Union(Box<InterfaceType>, Box<InterfaceType>),
    Star(Box<InterfaceType>),
}

impl Group {
    fn is_nil(&self) -> bool {
        matches!(self, Group::Simple(SimpleType::Nil))
    }
}

/// `t1;t2;...;tk` in one world. The empty list is `nil`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterfaceType {
    pub world: World,
    pub groups: Vec<Group>,
}

impl InterfaceType {
    pub fn nil(world: World) -> Self {
        InterfaceType {
            world,
            groups: Vec::new(),
        }
    }

    pub fn simple(world: World, t: SimpleType) -> Self {
        InterfaceType {
            world,
            groups: vec![Group::Simple(t)],
        }
        .canonical()
    }

    pub fn from_groups(world: World, groups: Vec<Group>) -> Self {
        InterfaceType { world, groups }.canonical()
    }

    pub fn is_nil(&self) -> bool {
        self.groups.iter().all(Group::is_nil)
    }

    /// `t1;t2`
    pub fn seq(&self, other: &InterfaceType) -> InterfaceType {
        let mut groups = self.groups.clone();
        groups.extend(other.groups.iter().cloned());
        InterfaceType::from_groups(self.world, groups)
    }

    /// `t1 ∪ t2`, collapsed when both sides are equal.
    pub fn union(&self, other: &InterfaceType) -> InterfaceType {
        let a = self.clone().canonical();
        let b = other.clone().canonical();
        if a == b || (a.is_nil() && b.is_nil()) {
            return a;
        }
        InterfaceType {
            world: self.world,
            groups: vec![Group::Union(Box::new(a), Box::new(b))],
        }
    }

    /// `(t;)*`
    pub fn star(&self) -> InterfaceType {
        let inner = self.clone().canonical();
        if inner.is_nil() {
            return InterfaceType::simple(self.world, SimpleType::Nil);
        }
        InterfaceType {
            world: self.world,
            groups: vec![Group::Star(Box::new(inner))],
        }
    }

    /// Canonical form: nested entries canonical, nil stars reduced to a nil
    /// group, equal union branches merged. Nil groups are kept since they
    /// mark positions once the list is concatenated with others.
    pub fn canonical(self) -> InterfaceType {
        let world = self.world;
        let groups: Vec<Group> = self
            .groups
            .into_iter()
            .flat_map(|g| match g {
                Group::Simple(t) => vec![Group::Simple(t)],
                Group::Union(a, b) => {
                    let a = a.canonical();
                    let b = b.canonical();
                    if a == b || (a.is_nil() && b.is_nil()) {
                        if a.groups.is_empty() {
                            vec![Group::Simple(SimpleType::Nil)]
                        } else {
                            a.groups
                        }
                    } else {
                        vec![Group::Union(Box::new(a), Box::new(b))]
                    }
                }
                Group::Star(a) => {
                    let a = a.canonical();
                    if a.is_nil() {
                        vec![Group::Simple(SimpleType::Nil)]
                    } else {
                        vec![Group::Star(Box::new(a))]
                    }
                }
            })
            .collect();
        InterfaceType { world, groups }
    }

    /// Checks that every base kind belongs to `self.world`.
    pub fn check_world(&self) -> Result<(), ValueError> {
        for g in &self.groups {
            match g {
                Group::Simple(t) => {
                    if let Some(w) = t.world()? {
                        if w != self.world {
                            return Err(ValueError::Kind(format!(
                                "{t} used in a {} interface",
                                self.world
                            )));
                        }
                    }
                }
                Group::Union(a, b) => {
                    a.check_world()?;
                    b.check_world()?;
                }
                Group::Star(a) => a.check_world()?,
            }
        }
        Ok(())
    }

    pub fn admits_empty(&self) -> bool {
        Nfa::build(self).accepts(&[])
    }
}

impl fmt::Display for InterfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_nil() {
            return f.write_str("nil");
        }
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            match g {
                Group::Simple(t) => write!(f, "{t}")?,
                Group::Union(a, b) => write!(f, "({a} | {b})")?,
                Group::Star(a) => write!(f, "({a};)*")?,
            }
        }
        Ok(())
    }
}

/// The four border types `⟨w | n | e | s⟩` of a program or scenario.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BorderTypes {
    pub w: InterfaceType,
    pub n: InterfaceType,
    pub e: InterfaceType,
    pub s: InterfaceType,
}

impl BorderTypes {
    pub fn nil() -> Self {
        BorderTypes {
            w: InterfaceType::nil(World::Temporal),
            n: InterfaceType::nil(World::Spatial),
            e: InterfaceType::nil(World::Temporal),
            s: InterfaceType::nil(World::Spatial),
        }
    }
}

impl fmt::Display for BorderTypes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} | {} | {} | {}⟩", self.w, self.n, self.e, self.s)
    }
}

/// Runtime data. Values carry no world; the border or variable they sit on does.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "ValueRepr", into = "ValueRepr")]
pub enum SimpleValue {
    Nil,
    Int(i64),
    Bool(bool),
    Tuple(Vec<SimpleValue>),
    Star(Vec<SimpleValue>),
}

/// Wire form: `null`, numbers, booleans, `[..]` for stars, `{"tuple": [..]}` for tuples.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueRepr {
    Nil(()),
    Int(i64),
    Bool(bool),
    Star(Vec<SimpleValue>),
    Tuple { tuple: Vec<SimpleValue> },
}

impl From<ValueRepr> for SimpleValue {
    fn from(r: ValueRepr) -> Self {
        match r {
            ValueRepr::Nil(()) => SimpleValue::Nil,
            ValueRepr::Int(n) => SimpleValue::Int(n),
            ValueRepr::Bool(b) => SimpleValue::Bool(b),
            ValueRepr::Star(vs) => SimpleValue::Star(vs),
            ValueRepr::Tuple { tuple } => SimpleValue::Tuple(tuple),
        }
    }
}

impl From<SimpleValue> for ValueRepr {
    fn from(v: SimpleValue) -> Self {
        match v {
            SimpleValue::Nil => ValueRepr::Nil(()),
            SimpleValue::Int(n) => ValueRepr::Int(n),
            SimpleValue::Bool(b) => ValueRepr::Bool(b),
            SimpleValue::Star(vs) => ValueRepr::Star(vs),
            SimpleValue::Tuple(tuple) => ValueRepr::Tuple { tuple },
        }
    }
}

impl SimpleValue {
    pub fn type_in(&self, world: World) -> SimpleType {
        match self {
            SimpleValue::Nil => SimpleType::Nil,
            SimpleValue::Int(_) => SimpleType::int(world),
            SimpleValue::Bool(_) => SimpleType::boolean(world),
            SimpleValue::Tuple(vs) => SimpleType::Tuple(vs.iter().map(|v| v.type_in(world)).collect()),
            SimpleValue::Star(vs) => SimpleType::star(
                vs.first()
                    .map(|v| v.type_in(world))
                    .unwrap_or(SimpleType::Nil),
            ),
        }
    }
}

impl fmt::Display for SimpleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close, vs) = match self {
            SimpleValue::Nil => return f.write_str("nil"),
            SimpleValue::Int(n) => return write!(f, "{n}"),
            SimpleValue::Bool(b) => return write!(f, "{b}"),
            SimpleValue::Tuple(vs) => ("(", ")", vs),
            SimpleValue::Star(vs) => ("[", "]", vs),
        };
        f.write_str(open)?;
        for (i, v) in vs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(close)
    }
}

/// Data crossing a border: a `;`-separated list of items, `nil` items omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterfaceValue {
    pub world: World,
    pub items: Vec<SimpleValue>,
}

impl InterfaceValue {
    pub fn new(world: World, items: Vec<SimpleValue>) -> Self {
        InterfaceValue {
            world,
            items: items.into_iter().filter(|v| *v != SimpleValue::Nil).collect(),
        }
    }

    pub fn nil(world: World) -> Self {
        InterfaceValue {
            world,
            items: Vec::new(),
        }
    }

    pub fn is_nil(&self) -> bool {
        self.items.is_empty()
    }
}

impl fmt::Display for InterfaceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, &self.items)
    }
}

pub(crate) fn write_items(f: &mut fmt::Formatter<'_>, items: &[SimpleValue]) -> fmt::Result {
    if items.is_empty() {
        return f.write_str("nil");
    }
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Least type of a value: no unions, stars only where star values occur.
pub fn type_of_value(v: &InterfaceValue) -> InterfaceType {
    InterfaceType::from_groups(
        v.world,
        v.items
            .iter()
            .map(|item| Group::Simple(item.type_in(v.world)))
            .collect(),
    )
}

/// Membership of `v` in the value set denoted by `t`.
pub fn value_conforms(v: &InterfaceValue, t: &InterfaceType) -> Result<bool, ValueError> {
    if v.world != t.world {
        return Err(ValueError::Kind(format!(
            "{} value checked against a {} type",
            v.world, t.world
        )));
    }
    Ok(Nfa::build(t).accepts(&v.items))
}

/// Whether the value sets of `a` and `b` intersect. Different worlds never match.
pub fn matches(a: &InterfaceType, b: &InterfaceType) -> bool {
    if a.world != b.world {
        return false;
    }
    let na = Nfa::build(a);
    let nb = Nfa::build(b);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(na.start, nb.start)]);
    while let Some((x, y)) = queue.pop_front() {
        if !seen.insert((x, y)) {
            continue;
        }
        if x == na.accept && y == nb.accept {
            return true;
        }
        for (label, to) in &na.edges[x] {
            if label.is_none() {
                queue.push_back((*to, y));
            }
        }
        for (label, to) in &nb.edges[y] {
            if label.is_none() {
                queue.push_back((x, *to));
            }
        }
        for (la, ta) in &na.edges[x] {
            let Some(la) = la else { continue };
            for (lb, tb) in &nb.edges[y] {
                if let Some(lb) = lb {
                    if la.intersects(lb) {
                        queue.push_back((*ta, *tb));
                    }
                }
            }
        }
    }
    false
}

/// Thompson automaton over border items; edges carry a simple type or epsilon.
struct Nfa {
    edges: Vec<Vec<(Option<SimpleType>, usize)>>,
    start: usize,
    accept: usize,
}

impl Nfa {
    fn build(t: &InterfaceType) -> Nfa {
        let mut nfa = Nfa {
            edges: Vec::new(),
            start: 0,
            accept: 0,
        };
        let start = nfa.state();
        let accept = nfa.list(t, start);
        nfa.start = start;
        nfa.accept = accept;
        nfa
    }

    fn state(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    fn list(&mut self, t: &InterfaceType, from: usize) -> usize {
        t.groups.iter().fold(from, |at, g| self.group(g, at))
    }

    fn group(&mut self, g: &Group, from: usize) -> usize {
        let to = self.state();
        match g {
            Group::Simple(t) => {
                let (nullable, rest) = t.split_nil();
                if nullable {
                    self.edges[from].push((None, to));
                }
                if let Some(rest) = rest {
                    self.edges[from].push((Some(rest), to));
                }
            }
            Group::Union(a, b) => {
                let ea = self.list(a, from);
                let eb = self.list(b, from);
                self.edges[ea].push((None, to));
                self.edges[eb].push((None, to));
            }
            Group::Star(a) => {
                let loop_start = self.state();
                self.edges[from].push((None, loop_start));
                let end = self.list(a, loop_start);
                self.edges[end].push((None, loop_start));
                self.edges[loop_start].push((None, to));
            }
        }
        to
    }

    fn closure(&self, states: &mut Vec<usize>) {
        let mut i = 0;
        while i < states.len() {
            let s = states[i];
            for (label, to) in &self.edges[s] {
                if label.is_none() && !states.contains(to) {
                    states.push(*to);
                }
            }
            i += 1;
        }
    }

    fn accepts(&self, items: &[SimpleValue]) -> bool {
        let mut current = vec![self.start];
        self.closure(&mut current);
        for item in items {
            let mut next = Vec::new();
            for &s in &current {
                for (label, to) in &self.edges[s] {
                    if let Some(t) = label {
                        if t.accepts(item) && !next.contains(to) {
                            next.push(*to);
                        }
                    }
                }
            }
            self.closure(&mut next);
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.contains(&self.accept)
    }
}

/// Two nil-padded index lists of equal length; `None` marks an inserted nil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl Alignment {
    pub fn insertions(&self) -> usize {
        self.left.iter().chain(&self.right).filter(|i| i.is_none()).count()
    }

    pub fn reversed(&self) -> Alignment {
        Alignment {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn apply<'a, T>(&self, a: &'a [T], b: &'a [T]) -> (Vec<Option<&'a T>>, Vec<Option<&'a T>>) {
        (
            self.left.iter().map(|i| i.map(|i| &a[i])).collect(),
            self.right.iter().map(|i| i.map(|i| &b[i])).collect(),
        )
    }
}

/// Minimal nil-insertion alignment of two lists.
///
/// Non-nil entries must pair up in order. Between consecutive non-nil
/// anchors the nil entries of both sides are paired from the top and the
/// surplus side is padded just before the next anchor.
pub fn align_up_to_nil<T>(
    a: &[T],
    b: &[T],
    is_nil: impl Fn(&T) -> bool,
    eq: impl Fn(&T, &T) -> bool,
) -> Option<Alignment> {
    let anchors_a: Vec<usize> = (0..a.len()).filter(|&i| !is_nil(&a[i])).collect();
    let anchors_b: Vec<usize> = (0..b.len()).filter(|&i| !is_nil(&b[i])).collect();
    if anchors_a.len() != anchors_b.len() {
        return None;
    }
    if !anchors_a.iter().zip(&anchors_b).all(|(&i, &j)| eq(&a[i], &b[j])) {
        return None;
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    let (mut i, mut j) = (0, 0);
    fn emit_run(
        left: &mut Vec<Option<usize>>,
        right: &mut Vec<Option<usize>>,
        i_end: usize,
        j_end: usize,
        i: &mut usize,
        j: &mut usize,
    ) {
        while *i < i_end && *j < j_end {
            left.push(Some(*i));
            right.push(Some(*j));
            *i += 1;
            *j += 1;
        }
        while *i < i_end {
            left.push(Some(*i));
            right.push(None);
            *i += 1;
        }
        while *j < j_end {
            left.push(None);
            right.push(Some(*j));
            *j += 1;
        }
    }
    for (&ai, &bj) in anchors_a.iter().zip(&anchors_b) {
        emit_run(&mut left, &mut right, ai, bj, &mut i, &mut j);
        left.push(Some(ai));
        right.push(Some(bj));
        i = ai + 1;
        j = bj + 1;
    }
    emit_run(&mut left, &mut right, a.len(), b.len(), &mut i, &mut j);
    Some(Alignment { left, right })
}

/// `t =_n t2` on group lists: equal after inserting nil groups.
pub fn equal_up_to_nil(a: &InterfaceType, b: &InterfaceType) -> Option<Alignment> {
    if a.world != b.world {
        return None;
    }
    align_up_to_nil(&a.groups, &b.groups, Group::is_nil, |x, y| x == y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Selector {
    /// `V(k)`: the k-th `;`-group.
    Group(usize),
    /// `V.k`
    SpatialField(usize),
    /// `V.[k]`
    SpatialIndex(i64),
    /// `V@k`
    TemporalField(usize),
    /// `V@[k]`
    TemporalIndex(i64),
}

impl Selector {
    pub fn world(&self) -> Option<World> {
        match self {
            Selector::Group(_) => None,
            Selector::SpatialField(_) | Selector::SpatialIndex(_) => Some(World::Spatial),
            Selector::TemporalField(_) | Selector::TemporalIndex(_) => Some(World::Temporal),
        }
    }
}

/// Component access on a border value. All indices are 1-based.
pub fn access(v: &InterfaceValue, sel: Selector) -> Result<SimpleValue, ValueError> {
    match sel {
        Selector::Group(k) => {
            if k == 0 || k > v.items.len() {
                return Err(ValueError::Range {
                    index: k as i64,
                    len: v.items.len(),
                });
            }
            Ok(v.items[k - 1].clone())
        }
        _ => match v.items.as_slice() {
            [single] => access_simple(single, v.world, sel).cloned(),
            _ => Err(ValueError::Structure(format!(
                "component selector on an interface of {} groups",
                v.items.len()
            ))),
        },
    }
}

fn component_index(index: i64, len: usize) -> Result<usize, ValueError> {
    if index < 1 || index as u64 > len as u64 {
        Err(ValueError::Range { index, len })
    } else {
        Ok(index as usize - 1)
    }
}

/// Access inside a single item sitting in `world`.
pub fn access_simple(v: &SimpleValue, world: World, sel: Selector) -> Result<&SimpleValue, ValueError> {
    if let Some(w) = sel.world() {
        if w != world {
            return Err(ValueError::Kind(format!("{w} selector applied to a {world} value")));
        }
    }
    match (sel, v) {
        (Selector::Group(1), _) => Ok(v),
        (Selector::Group(k), _) => Err(ValueError::Range {
            index: k as i64,
            len: 1,
        }),
        (Selector::SpatialField(k) | Selector::TemporalField(k), SimpleValue::Tuple(items)) => {
            Ok(&items[component_index(k as i64, items.len())?])
        }
        (Selector::SpatialIndex(k) | Selector::TemporalIndex(k), SimpleValue::Star(items)) => {
            Ok(&items[component_index(k, items.len())?])
        }
        (Selector::SpatialField(_) | Selector::TemporalField(_), other) => Err(ValueError::Structure(
            format!("field selector applied to non-tuple {other}"),
        )),
        (_, other) => Err(ValueError::Structure(format!(
            "index selector applied to non-star {other}"
        ))),
    }
}

/// Mutable counterpart of [`access_simple`], used by assignments.
pub fn access_simple_mut(
    v: &mut SimpleValue,
    world: World,
    sel: Selector,
) -> Result<&mut SimpleValue, ValueError> {
    if let Some(w) = sel.world() {
        if w != world {
            return Err(ValueError::Kind(format!("{w} selector applied to a {world} value")));
        }
    }
    match (sel, v) {
        (Selector::Group(1), v) => Ok(v),
        (Selector::Group(k), _) => Err(ValueError::Range {
            index: k as i64,
            len: 1,
        }),
        (Selector::SpatialField(k) | Selector::TemporalField(k), SimpleValue::Tuple(items)) => {
            let i = component_index(k as i64, items.len())?;
            Ok(&mut items[i])
        }
        (Selector::SpatialIndex(k) | Selector::TemporalIndex(k), SimpleValue::Star(items)) => {
            let i = component_index(k, items.len())?;
            Ok(&mut items[i])
        }
        (_, other) => Err(ValueError::Structure(format!("selector {sel:?} applied to {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(groups: Vec<Group>) -> InterfaceType {
        InterfaceType::from_groups(World::Spatial, groups)
    }

    fn g(t: SimpleType) -> Group {
        Group::Simple(t)
    }

    #[test]
    fn type_of_value_examples() {
        assert!(type_of_value(&InterfaceValue::nil(World::Spatial)).is_nil());
        let v = InterfaceValue::new(World::Spatial, vec![SimpleValue::Int(6)]);
        assert_eq!(type_of_value(&v).to_string(), "sn");
        let v = InterfaceValue::new(World::Temporal, vec![SimpleValue::Int(6), SimpleValue::Int(3)]);
        assert_eq!(type_of_value(&v).to_string(), "tn;tn");
    }

    #[test]
    fn conformance_examples() {
        let nil = InterfaceType::nil(World::Spatial);
        assert!(value_conforms(&InterfaceValue::nil(World::Spatial), &nil).unwrap());
        let either = InterfaceType::simple(World::Spatial, SimpleType::union(SimpleType::Sn, SimpleType::Sb));
        let six = InterfaceValue::new(World::Spatial, vec![SimpleValue::Int(6)]);
        assert!(value_conforms(&six, &either).unwrap());
        let t = InterfaceValue::new(World::Spatial, vec![SimpleValue::Bool(true)]);
        assert!(!value_conforms(&t, &InterfaceType::simple(World::Spatial, SimpleType::Sn)).unwrap());
        let temporal = InterfaceValue::nil(World::Temporal);
        assert!(matches!(value_conforms(&temporal, &nil), Err(ValueError::Kind(_))));
    }

    #[test]
    fn nil_groups_are_optional_in_values() {
        let t = sp(vec![g(SimpleType::Sn), g(SimpleType::Nil), g(SimpleType::Nil)]);
        let v = InterfaceValue::new(World::Spatial, vec![SimpleValue::Int(6), SimpleValue::Nil]);
        assert_eq!(v.items.len(), 1);
        assert!(value_conforms(&v, &t).unwrap());
    }

    #[test]
    fn alignment_examples() {
        let snsn = sp(vec![g(SimpleType::Sn), g(SimpleType::Sn)]);
        let a = equal_up_to_nil(&snsn, &snsn).unwrap();
        assert_eq!(a.insertions(), 0);
        assert_eq!(a.left, vec![Some(0), Some(1)]);

        let sn = sp(vec![g(SimpleType::Sn)]);
        let nil_sn = sp(vec![g(SimpleType::Nil), g(SimpleType::Sn)]);
        let a = equal_up_to_nil(&sn, &nil_sn).unwrap();
        assert_eq!(a.left, vec![None, Some(0)]);
        assert_eq!(a.right, vec![Some(0), Some(1)]);

        let snsb = sp(vec![g(SimpleType::Sn), g(SimpleType::Sb)]);
        let sbsn = sp(vec![g(SimpleType::Sb), g(SimpleType::Sn)]);
        assert!(equal_up_to_nil(&snsb, &sbsn).is_none());
    }

    #[test]
    fn match_examples() {
        let tn = InterfaceType::simple(World::Temporal, SimpleType::Tn);
        assert!(matches(&tn, &tn));
        let either = InterfaceType::simple(World::Spatial, SimpleType::union(SimpleType::Sn, SimpleType::Sb));
        let sb = InterfaceType::simple(World::Spatial, SimpleType::Sb);
        assert!(matches(&either, &sb));
        let sn = InterfaceType::simple(World::Spatial, SimpleType::Sn);
        assert!(!matches(&sn, &tn));
        let star = sp(vec![Group::Star(Box::new(sn.clone()))]);
        assert!(matches(&star, &InterfaceType::nil(World::Spatial)));
        assert!(matches(&star, &sp(vec![g(SimpleType::Sn), g(SimpleType::Sn)])));
        assert!(!matches(&star, &sb));
    }

    #[test]
    fn accessor_examples() {
        let v = InterfaceValue::new(World::Temporal, vec![SimpleValue::Int(6), SimpleValue::Int(3)]);
        assert_eq!(access(&v, Selector::Group(2)).unwrap(), SimpleValue::Int(3));
        let t = InterfaceValue::new(
            World::Spatial,
            vec![SimpleValue::Tuple(vec![SimpleValue::Int(1), SimpleValue::Int(2)])],
        );
        assert_eq!(access(&t, Selector::SpatialField(2)).unwrap(), SimpleValue::Int(2));
        assert!(matches!(access(&t, Selector::TemporalField(2)), Err(ValueError::Kind(_))));
        let s = InterfaceValue::new(World::Temporal, vec![SimpleValue::Star(vec![SimpleValue::Int(7)])]);
        assert!(matches!(
            access(&s, Selector::TemporalIndex(2)),
            Err(ValueError::Range { index: 2, len: 1 })
        ));
        assert!(matches!(access(&v, Selector::Group(3)), Err(ValueError::Range { .. })));
        let i = InterfaceValue::new(World::Spatial, vec![SimpleValue::Int(1)]);
        assert!(matches!(access(&i, Selector::SpatialField(1)), Err(ValueError::Structure(_))));
    }

    #[test]
    fn mixed_worlds_rejected() {
        let t = SimpleType::Tuple(vec![SimpleType::Sn, SimpleType::Tn]);
        assert!(t.world().is_err());
        let it = InterfaceType::simple(World::Spatial, SimpleType::Tn);
        assert!(it.check_world().is_err());
    }

    #[test]
    fn display_forms() {
        let t = sp(vec![g(SimpleType::Sn), g(SimpleType::Nil), g(SimpleType::Nil)]);
        assert_eq!(t.to_string(), "sn;nil;nil");
        let all_nil = sp(vec![g(SimpleType::Nil), Group::Star(Box::new(sp(vec![g(SimpleType::Nil)])))]);
        assert_eq!(all_nil.to_string(), "nil");
        let st = InterfaceType::simple(World::Temporal, SimpleType::Tn).star();
        assert_eq!(st.to_string(), "(tn;)*");
    }
}
