//! Finite sample spaces, positions and markets of eligible assets.
//!
//! Portfolios `λ ∈ ℝ^N` are the working coordinates for the space of
//! eligible payoffs: the payoff of `λ` is `payoffs · λ` and its price is
//! `prices · λ`.

use num_traits::{One, Signed, Zero};

use crate::acceptance::{AcceptanceSet, CompiledAcceptance};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polyhedra::{HPolyhedron, LpResult, Sense};
use crate::rational::{dot, fmt_rat, zeros, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSampleSpace {
    labels: Vec<String>,
    probs: Vec<Rat>,
}

impl FiniteSampleSpace {
    pub fn new(labels: Vec<String>, probs: Vec<Rat>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput(
                "sample space needs at least one atom".into(),
            ));
        }
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} atoms",
                labels.len(),
                probs.len()
            )));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("negative probability".into()));
        }
        let total: Rat = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {}, not 1",
                fmt_rat(&total)
            )));
        }
        Ok(FiniteSampleSpace { labels, probs })
    }

    /// Atoms labelled `w0, w1, ...`.
    pub fn with_probs(probs: Vec<Rat>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| format!("w{i}")).collect();
        FiniteSampleSpace::new(labels, probs)
    }

    pub fn uniform(n: usize) -> Self {
        let p = Rat::new(1.into(), (n as i64).into());
        FiniteSampleSpace::with_probs(vec![p; n]).expect("uniform weights")
    }

    pub fn n_atoms(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Indicator of a single atom.
    pub fn indicator(&self, atom: usize) -> Position {
        let mut v = zeros(self.n_atoms());
        v[atom] = Rat::one();
        Position(v)
    }

    pub fn constant(&self, c: Rat) -> Position {
        Position(vec![c; self.n_atoms()])
    }

    pub fn zero_position(&self) -> Position {
        Position(zeros(self.n_atoms()))
    }
}

/// Capital position at time 1, one value per atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<Rat>);

impl Position {
    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    pub fn plus(&self, other: &[Rat]) -> Position {
        Position(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn plus_scaled(&self, t: &Rat, dir: &[Rat]) -> Position {
        Position(self.0.iter().zip(dir).map(|(a, b)| a + t * b).collect())
    }

    pub fn scaled(&self, t: &Rat) -> Position {
        Position(self.0.iter().map(|a| a * t).collect())
    }
}

impl From<Vec<Rat>> for Position {
    fn from(v: Vec<Rat>) -> Self {
        Position(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Market {
    /// `n × N`, column `i` is the payoff of asset `i` on the atoms.
    payoffs: Vec<Vec<Rat>>,
    prices: Vec<Rat>,
    unit_coeffs: Vec<Rat>,
}

impl Market {
    pub fn n_atoms(&self) -> usize {
        self.payoffs.len()
    }

    pub fn n_assets(&self) -> usize {
        self.prices.len()
    }

    pub fn payoffs(&self) -> &[Vec<Rat>] {
        &self.payoffs
    }

    pub fn prices(&self) -> &[Rat] {
        &self.prices
    }

    /// Portfolio of the unit payoff `U >= 0` with price one.
    pub fn unit_coeffs(&self) -> &[Rat] {
        &self.unit_coeffs
    }

    pub fn unit_payoff(&self) -> Vec<Rat> {
        self.payoff(&self.unit_coeffs)
    }

    pub fn payoff(&self, portfolio: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec(&self.payoffs, portfolio)
    }

    pub fn price(&self, portfolio: &[Rat]) -> Rat {
        dot(&self.prices, portfolio)
    }

    pub fn asset_payoff(&self, i: usize) -> Vec<Rat> {
        self.payoffs.iter().map(|row| row[i].clone()).collect()
    }

    /// Portfolio replicating `payoff`, if it lies in the span of the assets.
    pub fn portfolio_of(&self, payoff: &[Rat]) -> Option<Vec<Rat>> {
        let n = self.n_assets();
        let aug: Vec<Vec<Rat>> = self
            .payoffs
            .iter()
            .zip(payoff)
            .map(|(row, y)| {
                let mut r = row.clone();
                r.push(y.clone());
                r
            })
            .collect();
        let (red, pivots) = linalg::rref(&aug, n + 1);
        if pivots.contains(&n) {
            return None;
        }
        let mut lambda = zeros(n);
        for (row, &p) in red.iter().zip(&pivots) {
            lambda[p] = row[n].clone();
        }
        Some(lambda)
    }

    /// The pricing functional expressed on atoms, when the assets span the
    /// whole position space.
    pub fn price_functional_on_atoms(&self) -> Option<Vec<Rat>> {
        let n = self.n_atoms();
        if self.n_assets() != n {
            return None;
        }
        // c^T P = prices^T  <=>  P^T c = prices
        let pt = linalg::transpose(&self.payoffs, n);
        linalg::solve(&pt, &self.prices)
    }
}

/// Checks dimensions and independence of the payoff columns and finds the
/// unit payoff: the exact LP `min ||λ||_1` over `{payoffs·λ >= 0,
/// prices·λ = 1}`, solved with Bland's rule so the answer is deterministic.
pub fn validate_market(
    space: &FiniteSampleSpace,
    payoffs: Vec<Vec<Rat>>,
    prices: Vec<Rat>,
) -> Result<Market> {
    let n = space.n_atoms();
    let big_n = prices.len();
    if big_n == 0 {
        return Err(Error::InvalidInput(
            "market needs at least one asset".into(),
        ));
    }
    if payoffs.len() != n || payoffs.iter().any(|row| row.len() != big_n) {
        return Err(Error::DimensionMismatch(format!(
            "payoff matrix must be {n} x {big_n}"
        )));
    }
    if linalg::rank(&payoffs, big_n) != big_n {
        return Err(Error::DegenerateMarket);
    }
    // variables (λ, u), u >= |λ|
    let dim = 2 * big_n;
    let mut lp = HPolyhedron::universe(dim);
    for row in &payoffs {
        let mut a = row.clone();
        a.extend(zeros(big_n));
        lp.push_ineq(a, Rat::zero());
    }
    for i in 0..big_n {
        let mut a = zeros(dim);
        a[big_n + i] = Rat::one();
        a[i] = -Rat::one();
        lp.push_ineq(a.clone(), Rat::zero());
        a[i] = Rat::one();
        lp.push_ineq(a, Rat::zero());
    }
    let mut price_row = prices.clone();
    price_row.extend(zeros(big_n));
    lp.push_eq(price_row, Rat::one());
    let mut cost = zeros(big_n);
    cost.extend(vec![Rat::one(); big_n]);
    match lp.lp(&cost, Sense::Min) {
        LpResult::Optimal { point, .. } => Ok(Market {
            payoffs,
            prices,
            unit_coeffs: point[..big_n].to_vec(),
        }),
        _ => Err(Error::NoUnitPayoff),
    }
}

/// Convenience constructor from a list of `(payoff column, price)` pairs.
pub fn market_from_assets(space: &FiniteSampleSpace, assets: &[(Vec<Rat>, Rat)]) -> Result<Market> {
    let n = space.n_atoms();
    if assets.iter().any(|(col, _)| col.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "asset payoffs must have {n} entries"
        )));
    }
    let payoffs = (0..n)
        .map(|r| assets.iter().map(|(col, _)| col[r].clone()).collect())
        .collect();
    let prices = assets.iter().map(|(_, p)| p.clone()).collect();
    validate_market(space, payoffs, prices)
}

/// Basis of `{λ : prices·λ = 0}` in portfolio coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub basis: Vec<Vec<Rat>>,
}

pub fn kernel_basis(market: &Market) -> KernelBasis {
    KernelBasis {
        basis: linalg::null_space(std::slice::from_ref(&market.prices), market.n_assets()),
    }
}

/// Stacks `d` entities into one instance: atoms concatenated with weights
/// divided by `d`, payoffs block-diagonal, prices concatenated.
pub fn flatten_multivariate(
    spaces: &[FiniteSampleSpace],
    markets: &[Market],
) -> Result<(FiniteSampleSpace, Market)> {
    if spaces.is_empty() || spaces.len() != markets.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} spaces for {} markets",
            spaces.len(),
            markets.len()
        )));
    }
    for (s, m) in spaces.iter().zip(markets) {
        if s.n_atoms() != m.n_atoms() {
            return Err(Error::DimensionMismatch(
                "market does not match its space".into(),
            ));
        }
    }
    if spaces.len() == 1 {
        return Ok((spaces[0].clone(), markets[0].clone()));
    }
    let d = Rat::from_integer((spaces.len() as i64).into());
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    for (k, s) in spaces.iter().enumerate() {
        labels.extend(s.labels.iter().map(|l| format!("{k}:{l}")));
        probs.extend(s.probs.iter().map(|p| p / &d));
    }
    let total_assets: usize = markets.iter().map(Market::n_assets).sum();
    let mut payoffs = Vec::new();
    let mut prices = Vec::new();
    let mut offset = 0;
    for m in markets {
        for row in &m.payoffs {
            let mut r = zeros(total_assets);
            r[offset..offset + m.n_assets()].clone_from_slice(row);
            payoffs.push(r);
        }
        prices.extend(m.prices.iter().cloned());
        offset += m.n_assets();
    }
    let space = FiniteSampleSpace::new(labels, probs)?;
    let market = validate_market(&space, payoffs, prices)?;
    Ok((space, market))
}

/// Sample space, market and acceptance set, validated together.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub name: String,
    pub space: FiniteSampleSpace,
    pub market: Market,
    pub acceptance: AcceptanceSet,
    pub compiled: CompiledAcceptance,
    pub kernel: KernelBasis,
}

impl ProblemInstance {
    pub fn new(
        name: impl Into<String>,
        space: FiniteSampleSpace,
        market: Market,
        acceptance: AcceptanceSet,
    ) -> Result<Self> {
        if market.n_atoms() != space.n_atoms() {
            return Err(Error::DimensionMismatch(
                "market does not match the sample space".into(),
            ));
        }
        let compiled = acceptance.compile(&space)?;
        compiled.check_admissible(&acceptance)?;
        let kernel = kernel_basis(&market);
        Ok(ProblemInstance {
            name: name.into(),
            space,
            market,
            acceptance,
            compiled,
            kernel,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.space.n_atoms()
    }

    pub fn n_assets(&self) -> usize {
        self.market.n_assets()
    }

    pub fn accepts(&self, x: &[Rat]) -> bool {
        self.compiled.accepts(x)
    }

    /// Payoff-space images of the kernel basis.
    pub fn kernel_payoffs(&self) -> Vec<Vec<Rat>> {
        self.kernel
            .basis
            .iter()
            .map(|l| self.market.payoff(l))
            .collect()
    }

    pub fn check_position(&self, x: &[Rat]) -> Result<()> {
        if x.len() != self.n_atoms() {
            return Err(Error::DimensionMismatch(format!(
                "position has {} entries, expected {}",
                x.len(),
                self.n_atoms()
            )));
        }
        Ok(())
    }
}
