//! The interval coloring behind homogeneous subsets of transitive colorings.
//!
//! `[x,y]` is `(i,α)`-long(T) when some `α`-large(T) set `H ⊆ [x,y) ∩ X`
//! containing `x` makes `H ∪ {y}` homogeneous of color `i` and is T-apart
//! from `[y, max X] ∩ X`. The coloring `Q` records, for `i = f(x,y)`, the
//! least `k` at which the interval stops being long, and whether it was
//! still long at the successor step `ω^k+1`.

use std::fmt;
use std::sync::Arc;

use crate::coloring::{is_transitive_idx, Color, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::grouping::{rooted_homogeneous, subset_search, SubsetProperty};
use crate::largeness::{apart_values, check_large, is_large, Certificate, LargenessSpec, Mode};
use crate::outcome::{Budget, Outcome};
use crate::registry::Registry;

/// How `ω^k+1`-largeness is read.
pub trait SuccessorReading: Send + Sync {
    fn name(&self) -> &'static str;

    fn holds(&self, h: &FinSet, k: usize, theta: &Arc<dyn Theta>) -> Result<bool>;

    /// Whether truth passes to supersets with the same minimum.
    fn superset_closed(&self) -> bool;
}

/// `H ∖ {max H}` is `ω^k`-large(T).
pub struct DropMax;
/// `H ∖ {min H}` is `ω^k`-large(T).
pub struct DropMin;

fn without(h: &FinSet, i: usize) -> FinSet {
    let idx: Vec<usize> = (0..h.len()).filter(|&j| j != i).collect();
    h.pick(&idx)
}

impl SuccessorReading for DropMax {
    fn name(&self) -> &'static str {
        "drop-max"
    }
    fn holds(&self, h: &FinSet, k: usize, theta: &Arc<dyn Theta>) -> Result<bool> {
        if h.is_empty() {
            return Ok(false);
        }
        is_large(
            &without(h, h.len() - 1),
            &LargenessSpec::new(k, 1, theta.clone()),
        )
    }
    fn superset_closed(&self) -> bool {
        true
    }
}

impl SuccessorReading for DropMin {
    fn name(&self) -> &'static str {
        "drop-min"
    }
    fn holds(&self, h: &FinSet, k: usize, theta: &Arc<dyn Theta>) -> Result<bool> {
        if h.is_empty() {
            return Ok(false);
        }
        is_large(&without(h, 0), &LargenessSpec::new(k, 1, theta.clone()))
    }
    fn superset_closed(&self) -> bool {
        false
    }
}

pub fn successor_registry() -> Registry<dyn SuccessorReading> {
    let mut r: Registry<dyn SuccessorReading> = Registry::new("successor reading");
    r.register("drop-max", Arc::new(DropMax));
    r.register("drop-min", Arc::new(DropMin));
    r
}

/// `ω^k` or `ω^k+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Power(usize),
    PowerPlusOne(usize),
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Power(k) => write!(f, "ω^{k}"),
            Length::PowerPlusOne(k) => write!(f, "ω^{k}+1"),
        }
    }
}

pub struct LongIntervals<'a> {
    x: &'a FinSet,
    f: &'a ColoringTable,
    theta: Arc<dyn Theta>,
    reading: Arc<dyn SuccessorReading>,
}

impl<'a> LongIntervals<'a> {
    pub fn new(
        x: &'a FinSet,
        f: &'a ColoringTable,
        theta: Arc<dyn Theta>,
        reading: Arc<dyn SuccessorReading>,
    ) -> Result<Self> {
        if f.arity() != 2 || !x.is_subset_of(f.domain()) {
            return Err(Error::Precondition(
                "need a pair coloring defined on the whole set".into(),
            ));
        }
        Ok(LongIntervals {
            x,
            f,
            theta,
            reading,
        })
    }

    fn color(&self, a: usize, b: usize) -> Result<Color> {
        self.f
            .color(&[self.x.get(a).clone(), self.x.get(b).clone()])
    }

    /// A witness `H` that `[x_a, x_b]` is `(color, len)`-long(T); `Absent`
    /// if there is none.
    pub fn witness(
        &self,
        a: usize,
        b: usize,
        color: Color,
        len: Length,
        budget: &mut Budget,
    ) -> Result<Outcome<FinSet>> {
        if a >= b || b >= self.x.len() {
            return Err(Error::Precondition(format!(
                "need indices a < b < {}, got {a}, {b}",
                self.x.len()
            )));
        }
        if self.color(a, b)? != color {
            return Ok(Outcome::Absent);
        }
        let (y, top) = (self.x.get(b), self.x.max().unwrap());
        let mut pool = Vec::new();
        for z in a..b {
            let fits = z == a || (self.color(a, z)? == color && self.color(z, b)? == color);
            if fits && apart_values(self.x.get(z), y, top, self.theta.as_ref())? {
                pool.push(z);
            } else if z == a {
                return Ok(Outcome::Absent);
            }
        }
        let candidates = self.x.pick(&pool);
        match len {
            Length::Power(k) => {
                let spec = LargenessSpec::new(k, 1, self.theta.clone());
                rooted_homogeneous(
                    &candidates,
                    self.f,
                    color,
                    &|h| is_large(h, &spec),
                    true,
                    budget,
                )
            }
            Length::PowerPlusOne(k) => {
                let reading = self.reading.clone();
                let theta = self.theta.clone();
                let pred = move |h: &FinSet| reading.holds(h, k, &theta);
                rooted_homogeneous(
                    &candidates,
                    self.f,
                    color,
                    &pred,
                    self.reading.superset_closed(),
                    budget,
                )
            }
        }
    }

    pub fn is_long(
        &self,
        a: usize,
        b: usize,
        color: Color,
        len: Length,
        budget: &mut Budget,
    ) -> Result<bool> {
        match self.witness(a, b, color, len, budget)? {
            Outcome::Found(_) => Ok(true),
            Outcome::Absent => Ok(false),
            Outcome::Exhausted(why) => Err(Error::Budget(why)),
        }
    }
}

/// What the case table says about one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    Color(Color),
    /// Not even `(f(x,y), ω^0)`-long(T): no case applies.
    NotLong,
    /// `(f(x,y), ω^n)`-long(T): `H` is a homogeneous `ω^n`-large(T) set.
    Homogeneous(FinSet),
}

/// The case of `Q` at indices `a < b`.
pub fn q_value(
    long: &LongIntervals,
    a: usize,
    b: usize,
    n: usize,
    budget: &mut Budget,
) -> Result<QValue> {
    let i = long.color(a, b)?;
    if i > 1 {
        return Err(Error::Precondition(format!(
            "the case table covers two colors, found color {i}"
        )));
    }
    if !long.is_long(a, b, i, Length::Power(0), budget)? {
        return Ok(QValue::NotLong);
    }
    for k in 0..n {
        let plus = long.is_long(a, b, i, Length::PowerPlusOne(k), budget)?;
        let base = 4 * k as Color + 2 * i;
        if !plus {
            return Ok(QValue::Color(base));
        }
        if !long.is_long(a, b, i, Length::Power(k + 1), budget)? {
            return Ok(QValue::Color(base + 1));
        }
    }
    match long.witness(a, b, i, Length::Power(n), budget)? {
        Outcome::Found(h) => Ok(QValue::Homogeneous(h)),
        _ => unreachable!("longness at ω^n was just established"),
    }
}

/// The coloring `Q : [X]^2 → 4n`. Fails if `f` is not transitive or if some
/// pair falls outside every case.
pub fn ads_q_coloring(
    x: &FinSet,
    f: &ColoringTable,
    n: usize,
    theta: Arc<dyn Theta>,
    reading: Arc<dyn SuccessorReading>,
    budget: &mut Budget,
) -> Result<ColoringTable> {
    if n == 0 {
        return Err(Error::Precondition(
            "Q has 4n colors; n must be positive".into(),
        ));
    }
    check_transitive(x, f)?;
    let long = LongIntervals::new(x, f, theta, reading)?;
    let mut failure: Option<Error> = None;
    let q = ColoringTable::from_fn(x.clone(), 2, 4 * n as Color, |t| {
        if failure.is_some() {
            return 0;
        }
        match q_value(&long, t[0], t[1], n, budget) {
            Ok(QValue::Color(c)) => c,
            Ok(other) => {
                let why = match other {
                    QValue::NotLong => "it is not long at ω^0".to_string(),
                    QValue::Homogeneous(h) => {
                        format!("it is long at ω^{n}, witnessed by the homogeneous set {h}")
                    }
                    QValue::Color(_) => unreachable!(),
                };
                failure = Some(Error::Domain(format!(
                    "Q is undefined at ({}, {}): {why}",
                    x.get(t[0]),
                    x.get(t[1])
                )));
                0
            }
            Err(e) => {
                failure = Some(e);
                0
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(q),
    }
}

fn check_transitive(x: &FinSet, f: &ColoringTable) -> Result<()> {
    if f.arity() != 2 || !x.is_subset_of(f.domain()) {
        return Err(Error::Precondition(
            "need a pair coloring defined on the whole set".into(),
        ));
    }
    let idx: Vec<usize> = x.iter().map(|v| f.domain().index_of(v).unwrap()).collect();
    if !is_transitive_idx(f, &idx) {
        return Err(Error::Precondition("the coloring is not transitive".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdsRoute {
    /// Found as the witness of an interval that is long at the top level.
    LongInterval,
    /// Found by the homogeneous subset search.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdsWitness {
    pub set: FinSet,
    pub certificate: Certificate,
    pub route: AdsRoute,
}

/// A homogeneous `ω^n`-large(T) subset of `x` for a transitive `f`.
pub fn ads_extract(
    x: &FinSet,
    f: &ColoringTable,
    n: usize,
    theta: Arc<dyn Theta>,
    reading: Arc<dyn SuccessorReading>,
    budget: &mut Budget,
) -> Result<Outcome<AdsWitness>> {
    check_transitive(x, f)?;
    let spec = LargenessSpec::new(n, 1, theta.clone());
    let long = LongIntervals::new(x, f, theta, reading)?;
    let certify = |set: FinSet, route| -> Result<AdsWitness> {
        let certificate = check_large(&set, &spec, Mode::Exhaustive)?
            .ok_or_else(|| Error::Domain(format!("witness {set} is not large")))?;
        Ok(AdsWitness {
            set,
            certificate,
            route,
        })
    };
    for b in 1..x.len() {
        for a in 0..b {
            let c = long.color(a, b)?;
            match long.witness(a, b, c, Length::Power(n), budget)? {
                Outcome::Found(h) => {
                    return Ok(Outcome::Found(certify(h, AdsRoute::LongInterval)?))
                }
                Outcome::Exhausted(why) => return Ok(Outcome::Exhausted(why)),
                Outcome::Absent => {}
            }
        }
    }
    match subset_search(x, f, &spec, SubsetProperty::Homogeneous, budget)? {
        Outcome::Found(set) => Ok(Outcome::Found(certify(set, AdsRoute::Search)?)),
        Outcome::Absent => Ok(Outcome::Absent),
        Outcome::Exhausted(why) => Ok(Outcome::Exhausted(why)),
    }
}
